//! Seeded generation of well-scoped syntax for property tests.
//!
//! Terms produced here are well scoped against the ambient entry kinds but
//! deliberately not well typed; they exercise the substitution engine and
//! the printer/parser pair, not the checker. Interval terms only use the
//! operators of the requested theory, so they are also valid oracle inputs.

use rand::Rng;

use crate::cofsolve::Cof;
use crate::interval::{IntervalTerm, IntervalTheory, TheoryName};
use crate::syntax::{self, Term};

/// Entry kinds of the generation scope, innermost last (so an index `k`
/// refers to `scope[scope.len() - 1 - k]`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Term,
    Interval,
    Witness,
}

fn indices_of(scope: &[Kind], kind: Kind) -> Vec<usize> {
    scope
        .iter()
        .rev()
        .enumerate()
        .filter(|(_, k)| **k == kind)
        .map(|(ix, _)| ix)
        .collect()
}

pub fn random_interval<R: Rng>(
    rng: &mut R,
    theory: TheoryName,
    scope: &[Kind],
    fuel: u32,
) -> IntervalTerm {
    let vars = indices_of(scope, Kind::Interval);
    let ops = &theory.theory().operators;
    if fuel == 0 || ops.is_empty() || rng.gen_ratio(1, 3) {
        return match rng.gen_range(0..3) {
            0 => IntervalTerm::E0,
            1 => IntervalTerm::E1,
            _ => match vars.as_slice() {
                [] => IntervalTerm::E1,
                vs => IntervalTerm::Var(vs[rng.gen_range(0..vs.len())]),
            },
        };
    }
    let op = ops[rng.gen_range(0..ops.len())];
    let args = (0..op.arity())
        .map(|_| random_interval(rng, theory, scope, fuel - 1))
        .collect();
    IntervalTerm::Op(op, args)
}

pub fn random_cof<R: Rng>(rng: &mut R, theory: TheoryName, scope: &[Kind], fuel: u32) -> Cof {
    if fuel == 0 || rng.gen_ratio(1, 2) {
        return match rng.gen_range(0..6) {
            0 => Cof::Top,
            1 => Cof::Bot,
            _ => Cof::Eq(
                random_interval(rng, theory, scope, 1),
                random_interval(rng, theory, scope, 1),
            ),
        };
    }
    let l = random_cof(rng, theory, scope, fuel - 1);
    let r = random_cof(rng, theory, scope, fuel - 1);
    if rng.gen() {
        Cof::and(l, r)
    } else {
        Cof::or(l, r)
    }
}

const CONST_POOL: &[&str] = &["f", "g", "h", "aconst", "bconst"];

fn leaf<R: Rng>(rng: &mut R, scope: &[Kind]) -> Term {
    let vars = indices_of(scope, Kind::Term);
    if !vars.is_empty() && rng.gen_ratio(2, 3) {
        return Term::Var(vars[rng.gen_range(0..vars.len())]);
    }
    match rng.gen_range(0..8) {
        0 => Term::U,
        1 => Term::UnitTy,
        2 => Term::TT,
        3 => Term::North,
        4 => Term::South,
        5 => Term::AbsurdTy,
        6 => Term::CUnit,
        _ => Term::Const(CONST_POOL[rng.gen_range(0..CONST_POOL.len())].to_string()),
    }
}

/// A well-scoped term over `scope`; `fuel` bounds the depth. All term
/// constructors are reachable at fuel 2 or more.
pub fn random_term<R: Rng>(
    rng: &mut R,
    theory: TheoryName,
    scope: &mut Vec<Kind>,
    fuel: u32,
) -> Term {
    if fuel == 0 || rng.gen_ratio(1, 4) {
        return leaf(rng, scope);
    }
    let f = fuel - 1;
    macro_rules! sub {
        () => {
            Box::new(random_term(rng, theory, scope, f))
        };
    }
    macro_rules! under {
        ($kinds:expr) => {{
            for k in $kinds {
                scope.push(k);
            }
            let t = random_term(rng, theory, scope, f);
            for _ in $kinds {
                scope.pop();
            }
            Box::new(t)
        }};
    }
    match rng.gen_range(0..29) {
        0 => Term::Pi(sub!(), under!([Kind::Term])),
        1 => Term::Lam(under!([Kind::Term])),
        2 => Term::App(sub!(), sub!()),
        3 => Term::Sigma(sub!(), under!([Kind::Term])),
        4 => Term::Pair(sub!(), sub!()),
        5 => Term::Fst(sub!()),
        6 => Term::Snd(sub!()),
        7 => Term::El(sub!()),
        8 => Term::CPi(sub!(), under!([Kind::Term])),
        9 => Term::CSigma(sub!(), under!([Kind::Term])),
        10 => Term::CPath(under!([Kind::Interval]), sub!(), sub!()),
        11 => Term::CId(sub!(), sub!(), sub!()),
        12 => Term::IdTy(sub!(), sub!(), sub!()),
        13 => Term::Refl(sub!()),
        14 => Term::J { motive: under!([Kind::Term, Kind::Term]), base: sub!(), scrut: sub!() },
        15 => Term::PathTy(under!([Kind::Interval]), sub!(), sub!()),
        16 => Term::PLam(under!([Kind::Interval])),
        17 => {
            let t = random_term(rng, theory, scope, f);
            Term::PApp(Box::new(t), random_interval(rng, theory, scope, 2))
        }
        18 => Term::Fill {
            src: random_interval(rng, theory, scope, 1),
            dst: random_interval(rng, theory, scope, 1),
            line: under!([Kind::Interval]),
            cof: random_cof(rng, theory, scope, 1),
            part: under!([Kind::Witness, Kind::Interval]),
            cap: sub!(),
        },
        19 => Term::GlueTy {
            base: sub!(),
            cof: random_cof(rng, theory, scope, 1),
            part_ty: under!([Kind::Witness]),
            equiv: under!([Kind::Witness]),
        },
        20 => Term::GlueIntro {
            cof: random_cof(rng, theory, scope, 1),
            base: sub!(),
            part: under!([Kind::Witness]),
        },
        21 => Term::Unglue(sub!()),
        22 => Term::SuspTy(sub!()),
        23 => Term::Merid(sub!()),
        24 => Term::SuspElim {
            motive: under!([Kind::Term]),
            north: sub!(),
            south: sub!(),
            merid: under!([Kind::Term]),
            scrut: sub!(),
        },
        25 => Term::MeridBeta {
            motive: under!([Kind::Term]),
            north: sub!(),
            south: sub!(),
            merid: under!([Kind::Term]),
            arg: sub!(),
        },
        26 => Term::AbsurdTm(sub!()),
        27 => Term::SplitTy {
            p: random_cof(rng, theory, scope, 1),
            q: random_cof(rng, theory, scope, 1),
            left: under!([Kind::Witness]),
            right: under!([Kind::Witness]),
        },
        _ => Term::SplitTm {
            p: random_cof(rng, theory, scope, 1),
            q: random_cof(rng, theory, scope, 1),
            motive: under!([Kind::Witness]),
            left: under!([Kind::Witness]),
            right: under!([Kind::Witness]),
        },
    }
}

pub fn random_closed_term<R: Rng>(rng: &mut R, theory: TheoryName, fuel: u32) -> Term {
    let mut scope = Vec::new();
    random_term(rng, theory, &mut scope, fuel)
}

/// A full substitution from `src` into a fresh target scope: every index of
/// `src` is covered by an entry, so composition through `Subst::then` is
/// exact on terms scoped in `src`. Returns the substitution and the target
/// scope it lands in.
pub fn random_subst<R: Rng>(
    rng: &mut R,
    theory: TheoryName,
    src: &[Kind],
) -> (syntax::Subst, Vec<Kind>) {
    let mut target: Vec<Kind> = Vec::new();
    for _ in 0..rng.gen_range(0..4) {
        target.push(if rng.gen() { Kind::Term } else { Kind::Interval });
    }
    let entries = src
        .iter()
        .rev()
        .map(|kind| match kind {
            Kind::Term => syntax::SubstEntry::Term(random_term(rng, theory, &mut target, 2)),
            Kind::Interval => {
                syntax::SubstEntry::Interval(random_interval(rng, theory, &target, 2))
            }
            Kind::Witness => syntax::SubstEntry::Witness,
        })
        .collect();
    (syntax::Subst { entries, tail: 0 }, target)
}

/// A random scope prefix for generating open terms.
pub fn random_scope<R: Rng>(rng: &mut R, len: usize) -> Vec<Kind> {
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Kind::Term,
            1 => Kind::Interval,
            _ => Kind::Witness,
        })
        .collect()
}

/// All interval terms over `nvars` variables whose operator depth is at
/// most `depth`, without structural duplicates. Sizes stay small for the
/// depths the oracle comparison uses.
pub fn interval_terms_up_to(theory: &IntervalTheory, nvars: usize, depth: usize) -> Vec<IntervalTerm> {
    let mut layers: Vec<Vec<IntervalTerm>> = Vec::new();
    let mut atoms = vec![IntervalTerm::E0, IntervalTerm::E1];
    atoms.extend((0..nvars).map(IntervalTerm::Var));
    layers.push(atoms);
    for d in 1..=depth {
        let prev: Vec<IntervalTerm> =
            layers.iter().flatten().cloned().collect();
        let mut next = Vec::new();
        for op in &theory.operators {
            match op.arity() {
                1 => {
                    for a in &prev {
                        let t = IntervalTerm::Op(*op, vec![a.clone()]);
                        if t.depth() == d {
                            next.push(t);
                        }
                    }
                }
                2 => {
                    for a in &prev {
                        for b in &prev {
                            let t = IntervalTerm::Op(*op, vec![a.clone(), b.clone()]);
                            if t.depth() == d {
                                next.push(t);
                            }
                        }
                    }
                }
                n => unreachable!("no operator of arity {n}"),
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::TheoryName;
    use rand::SeedableRng;

    #[test]
    fn generated_intervals_respect_the_theory() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let scope = vec![Kind::Interval, Kind::Term, Kind::Interval];
        for _ in 0..200 {
            let t = random_interval(&mut rng, TheoryName::Cart, &scope, 3);
            assert!(matches!(
                t,
                IntervalTerm::E0 | IntervalTerm::E1 | IntervalTerm::Var(_)
            ));
            let t = random_interval(&mut rng, TheoryName::CartRev, &scope, 3);
            t.map_vars(&|v| {
                assert!(v == 0 || v == 2, "interval var indices point at interval entries");
                v
            });
        }
    }

    #[test]
    fn generator_reaches_every_constructor() {
        use std::collections::BTreeSet;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = BTreeSet::new();
        fn mark(t: &Term, seen: &mut BTreeSet<&'static str>) {
            seen.insert(variant_name(t));
            match t {
                Term::Pi(a, b)
                | Term::Sigma(a, b)
                | Term::App(a, b)
                | Term::Pair(a, b)
                | Term::CPi(a, b)
                | Term::CSigma(a, b) => {
                    mark(a, seen);
                    mark(b, seen);
                }
                Term::Lam(a)
                | Term::PLam(a)
                | Term::Fst(a)
                | Term::Snd(a)
                | Term::El(a)
                | Term::Refl(a)
                | Term::Unglue(a)
                | Term::SuspTy(a)
                | Term::Merid(a)
                | Term::AbsurdTm(a)
                | Term::PApp(a, _) => mark(a, seen),
                Term::CPath(a, b, c) | Term::CId(a, b, c) | Term::IdTy(a, b, c)
                | Term::PathTy(a, b, c) => {
                    mark(a, seen);
                    mark(b, seen);
                    mark(c, seen);
                }
                Term::J { motive, base, scrut } => {
                    mark(motive, seen);
                    mark(base, seen);
                    mark(scrut, seen);
                }
                Term::Fill { line, part, cap, .. } => {
                    mark(line, seen);
                    mark(part, seen);
                    mark(cap, seen);
                }
                Term::GlueTy { base, part_ty, equiv, .. } => {
                    mark(base, seen);
                    mark(part_ty, seen);
                    mark(equiv, seen);
                }
                Term::GlueIntro { base, part, .. } => {
                    mark(base, seen);
                    mark(part, seen);
                }
                Term::SuspElim { motive, north, south, merid, scrut } => {
                    for t in [motive, north, south, merid, scrut] {
                        mark(t, seen);
                    }
                }
                Term::MeridBeta { motive, north, south, merid, arg } => {
                    for t in [motive, north, south, merid, arg] {
                        mark(t, seen);
                    }
                }
                Term::SplitTy { left, right, .. } => {
                    mark(left, seen);
                    mark(right, seen);
                }
                Term::SplitTm { motive, left, right, .. } => {
                    mark(motive, seen);
                    mark(left, seen);
                    mark(right, seen);
                }
                _ => {}
            }
        }
        fn variant_name(t: &Term) -> &'static str {
            match t {
                Term::Var(_) => "Var",
                Term::Const(_) => "Const",
                Term::U => "U",
                Term::El(_) => "El",
                Term::CPi(..) => "CPi",
                Term::CSigma(..) => "CSigma",
                Term::CPath(..) => "CPath",
                Term::CId(..) => "CId",
                Term::CUnit => "CUnit",
                Term::Pi(..) => "Pi",
                Term::Lam(_) => "Lam",
                Term::App(..) => "App",
                Term::Sigma(..) => "Sigma",
                Term::Pair(..) => "Pair",
                Term::Fst(_) => "Fst",
                Term::Snd(_) => "Snd",
                Term::UnitTy => "UnitTy",
                Term::TT => "TT",
                Term::IdTy(..) => "IdTy",
                Term::Refl(_) => "Refl",
                Term::J { .. } => "J",
                Term::PathTy(..) => "PathTy",
                Term::PLam(_) => "PLam",
                Term::PApp(..) => "PApp",
                Term::Fill { .. } => "Fill",
                Term::GlueTy { .. } => "GlueTy",
                Term::GlueIntro { .. } => "GlueIntro",
                Term::Unglue(_) => "Unglue",
                Term::SuspTy(_) => "SuspTy",
                Term::North => "North",
                Term::South => "South",
                Term::Merid(_) => "Merid",
                Term::SuspElim { .. } => "SuspElim",
                Term::MeridBeta { .. } => "MeridBeta",
                Term::AbsurdTy => "AbsurdTy",
                Term::AbsurdTm(_) => "AbsurdTm",
                Term::SplitTy { .. } => "SplitTy",
                Term::SplitTm { .. } => "SplitTm",
            }
        }
        for _ in 0..400 {
            let t = random_closed_term(&mut rng, TheoryName::Dm, 4);
            mark(&t, &mut seen);
        }
        assert!(seen.len() >= 35, "constructor coverage too thin: {seen:?}");
    }

    #[test]
    fn enumeration_sizes_and_depths() {
        let dm = TheoryName::Dm.theory();
        let ts = interval_terms_up_to(dm, 2, 2);
        assert!(ts.iter().all(|t| t.depth() <= 2));
        // atoms, depth-one and depth-two layers are all present
        assert!(ts.contains(&IntervalTerm::E0));
        assert!(ts.contains(&IntervalTerm::neg(IntervalTerm::Var(0))));
        assert!(ts
            .contains(&IntervalTerm::meet(IntervalTerm::Var(0), IntervalTerm::neg(IntervalTerm::Var(1)))));
        let cart = TheoryName::Cart.theory();
        assert_eq!(interval_terms_up_to(cart, 2, 3).len(), 4);
    }
}
