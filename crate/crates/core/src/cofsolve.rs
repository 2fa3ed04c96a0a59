//! Cofibration formulas and the entailment check used by conversion.
//!
//! Cofibrations are positive formulas over interval equations. Entailment
//! `atoms |- cof` first rewrites the hypothesis list into disjunctive normal
//! form and then checks the goal in every case, deciding equations through
//! the theory's test algebra. The check is sound but deliberately partial:
//! it never case-splits the goal, so for example `|- i=0 \/ i=1` is not
//! accepted even over a two-element algebra.

use crate::interval::{equal_under, satisfiable, IntervalTerm, IntervalTheory};
use std::collections::BTreeSet;

/// One equation `lhs = rhs` between interval terms.
pub type Atom = (IntervalTerm, IntervalTerm);

/// Cofibration formulas.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Cof {
    Eq(IntervalTerm, IntervalTerm),
    Top,
    Bot,
    And(Box<Cof>, Box<Cof>),
    Or(Box<Cof>, Box<Cof>),
}

impl Cof {
    pub fn and(p: Cof, q: Cof) -> Cof {
        Cof::And(Box::new(p), Box::new(q))
    }

    pub fn or(p: Cof, q: Cof) -> Cof {
        Cof::Or(Box::new(p), Box::new(q))
    }

    pub fn eq(l: IntervalTerm, r: IntervalTerm) -> Cof {
        Cof::Eq(l, r)
    }

    /// Conjunction of a list, `Top` when empty.
    pub fn all(cs: impl IntoIterator<Item = Cof>) -> Cof {
        let mut it = cs.into_iter();
        match it.next() {
            None => Cof::Top,
            Some(first) => it.fold(first, Cof::and),
        }
    }

    /// Disjunction of a list, `Bot` when empty.
    pub fn any(cs: impl IntoIterator<Item = Cof>) -> Cof {
        let mut it = cs.into_iter();
        match it.next() {
            None => Cof::Bot,
            Some(first) => it.fold(first, Cof::or),
        }
    }

    pub fn map_intervals(&self, f: &impl Fn(&IntervalTerm) -> IntervalTerm) -> Cof {
        match self {
            Cof::Eq(l, r) => Cof::Eq(f(l), f(r)),
            Cof::Top => Cof::Top,
            Cof::Bot => Cof::Bot,
            Cof::And(p, q) => Cof::and(p.map_intervals(f), q.map_intervals(f)),
            Cof::Or(p, q) => Cof::or(p.map_intervals(f), q.map_intervals(f)),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Cof::Eq(l, r) => {
                l.vars(out);
                r.vars(out);
            }
            Cof::Top | Cof::Bot => {}
            Cof::And(p, q) | Cof::Or(p, q) => {
                p.vars(out);
                q.vars(out);
            }
        }
    }
}

/// An always-false atom used to represent `Bot` inside DNF cases; `0 = 1`
/// is unsatisfiable in every theory since endpoints are distinct in the
/// test algebra.
pub fn false_atom() -> Atom {
    (IntervalTerm::E0, IntervalTerm::E1)
}

/// Disjunctive normal form: a list of cases, each a conjunction of atoms.
/// `Top` is `[[]]`, `Bot` is the single case containing the false atom.
pub fn dnf(cof: &Cof) -> Vec<Vec<Atom>> {
    match cof {
        Cof::Eq(l, r) => vec![vec![(l.clone(), r.clone())]],
        Cof::Top => vec![vec![]],
        Cof::Bot => vec![vec![false_atom()]],
        Cof::And(p, q) => {
            let (ps, qs) = (dnf(p), dnf(q));
            let mut out = Vec::with_capacity(ps.len() * qs.len());
            for a in &ps {
                for b in &qs {
                    let mut case = a.clone();
                    case.extend(b.iter().cloned());
                    out.push(case);
                }
            }
            out
        }
        Cof::Or(p, q) => {
            let mut out = dnf(p);
            out.extend(dnf(q));
            out
        }
    }
}

/// Remaps the interval variables of `atoms ∪ extra` onto a dense prefix
/// `0..n` so that test-algebra enumeration is exponential in the number of
/// distinct variables actually mentioned, not in the largest index.
fn compress<'a>(
    atoms: &'a [Atom],
    extra: impl IntoIterator<Item = &'a IntervalTerm>,
) -> (Vec<Atom>, Vec<IntervalTerm>) {
    let mut used = BTreeSet::new();
    for (l, r) in atoms {
        l.vars(&mut used);
        r.vars(&mut used);
    }
    let extras: Vec<&IntervalTerm> = extra.into_iter().collect();
    for t in &extras {
        t.vars(&mut used);
    }
    let order: Vec<usize> = used.into_iter().collect();
    let rename = |k: usize| order.binary_search(&k).expect("collected above");
    let atoms2 = atoms
        .iter()
        .map(|(l, r)| (l.map_vars(&rename), r.map_vars(&rename)))
        .collect();
    let extras2 = extras.iter().map(|t| t.map_vars(&rename)).collect();
    (atoms2, extras2)
}

/// Does the conjunction of `atoms` force `lhs = rhs`?
pub fn atoms_entail_eq(
    theory: &IntervalTheory,
    atoms: &[Atom],
    lhs: &IntervalTerm,
    rhs: &IntervalTerm,
) -> bool {
    let (hyps, mut goal) = compress(atoms, [lhs, rhs]);
    let r = goal.pop().expect("two extras");
    let l = goal.pop().expect("two extras");
    equal_under(theory, &hyps, &l, &r)
}

/// Is the conjunction of `atoms` unsatisfiable?
pub fn atoms_unsat(theory: &IntervalTheory, atoms: &[Atom]) -> bool {
    let (hyps, _) = compress(atoms, []);
    !satisfiable(theory, &hyps)
}

/// Does the conjunction of `atoms` force `cof`, without case-splitting the
/// goal? Disjunctions succeed only when one disjunct already succeeds or
/// the hypotheses are inconsistent.
pub fn atoms_entail(theory: &IntervalTheory, atoms: &[Atom], cof: &Cof) -> bool {
    match cof {
        Cof::Top => true,
        Cof::Bot => atoms_unsat(theory, atoms),
        Cof::Eq(l, r) => atoms_entail_eq(theory, atoms, l, r),
        Cof::And(p, q) => atoms_entail(theory, atoms, p) && atoms_entail(theory, atoms, q),
        Cof::Or(p, q) => {
            atoms_entail(theory, atoms, p)
                || atoms_entail(theory, atoms, q)
                || atoms_unsat(theory, atoms)
        }
    }
}

/// Does `hyp` entail `cof`? The hypothesis is split into DNF cases and the
/// goal must hold in each.
pub fn entails(theory: &IntervalTheory, hyp: &Cof, cof: &Cof) -> bool {
    dnf(hyp).iter().all(|case| atoms_entail(theory, case, cof))
}

/// Mutual entailment of two cofibrations.
pub fn equivalent(theory: &IntervalTheory, p: &Cof, q: &Cof) -> bool {
    entails(theory, p, q) && entails(theory, q, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::TheoryName;

    fn var(k: usize) -> IntervalTerm {
        IntervalTerm::Var(k)
    }

    fn eq0(k: usize) -> Cof {
        Cof::eq(var(k), IntervalTerm::E0)
    }

    fn eq1(k: usize) -> Cof {
        Cof::eq(var(k), IntervalTerm::E1)
    }

    #[test]
    fn basics() {
        let th = TheoryName::Dl.theory();
        assert!(entails(th, &Cof::Bot, &eq0(0)));
        assert!(entails(th, &eq0(0), &Cof::Top));
        assert!(!entails(th, &Cof::Top, &Cof::Bot));
        assert!(entails(th, &eq0(0), &eq0(0)));
        assert!(entails(th, &Cof::and(eq0(0), eq1(1)), &eq0(0)));
        assert!(!entails(th, &Cof::or(eq0(0), eq1(0)), &eq0(0)));
        // or-introduction from a disjunct
        assert!(entails(th, &eq0(0), &Cof::or(eq0(0), eq1(0))));
        // each disjunct of the hypothesis must entail the goal
        assert!(entails(
            th,
            &Cof::or(eq0(0), Cof::and(eq0(0), eq1(1))),
            &eq0(0)
        ));
    }

    #[test]
    fn contradictory_hypotheses_entail_anything() {
        let th = TheoryName::Dl.theory();
        let contra = Cof::and(eq0(0), eq1(0));
        assert!(entails(th, &contra, &Cof::Bot));
        assert!(entails(th, &contra, &eq1(3)));
        assert!(entails(th, &contra, &Cof::or(eq0(5), eq1(6))));
    }

    #[test]
    fn deliberately_partial_on_goal_disjunctions() {
        // Over the two-element algebra every i satisfies i=0 or i=1, but the
        // checker does not case-split the goal.
        let th = TheoryName::Cart.theory();
        assert!(!entails(th, &Cof::Top, &Cof::or(eq0(0), eq1(0))));
    }

    #[test]
    fn lattice_equations() {
        let th = TheoryName::Dl.theory();
        // i /\ j = 1 |- i = 1
        let hyp = Cof::eq(IntervalTerm::meet(var(0), var(1)), IntervalTerm::E1);
        assert!(entails(th, &hyp, &eq1(0)));
        assert!(entails(th, &hyp, &eq1(1)));
        // i \/ j = 0 |- i = 0
        let hyp2 = Cof::eq(IntervalTerm::join(var(0), var(1)), IntervalTerm::E0);
        assert!(entails(th, &hyp2, &eq0(0)));
        // i = j |- i /\ j = i
        let hyp3 = Cof::eq(var(0), var(1));
        assert!(entails(
            th,
            &hyp3,
            &Cof::eq(IntervalTerm::meet(var(0), var(1)), var(0))
        ));
    }

    #[test]
    fn de_morgan_equations() {
        let th = TheoryName::Dm.theory();
        // i = 0 |- ~i = 1
        assert!(entails(
            th,
            &eq0(0),
            &Cof::eq(IntervalTerm::neg(var(0)), IntervalTerm::E1)
        ));
        // ~i = i is satisfiable in dm (at the fixpoints) so it entails
        // neither endpoint equation.
        let hyp = Cof::eq(IntervalTerm::neg(var(0)), var(0));
        assert!(!entails(th, &hyp, &eq0(0)));
        assert!(!entails(th, &hyp, &Cof::Bot));
        // but in cart-rev the same hypothesis is contradictory
        let cr = TheoryName::CartRev.theory();
        assert!(entails(cr, &hyp, &Cof::Bot));
    }

    #[test]
    fn sparse_variable_indices_stay_cheap() {
        // Indices far apart must not blow up enumeration; compression maps
        // them onto a dense prefix first.
        let th = TheoryName::Dm.theory();
        let hyp = Cof::and(eq0(40), eq1(90));
        assert!(entails(th, &hyp, &eq0(40)));
        assert!(!entails(th, &hyp, &eq0(90)));
        assert!(entails(
            th,
            &hyp,
            &Cof::eq(IntervalTerm::meet(var(40), var(90)), IntervalTerm::E0)
        ));
    }

    #[test]
    fn equivalence() {
        let th = TheoryName::Dl.theory();
        let p = Cof::or(eq0(0), eq1(0));
        let q = Cof::or(eq1(0), eq0(0));
        assert!(equivalent(th, &p, &q));
        // adding an entailed disjunct preserves equivalence per case
        let r = Cof::or(p.clone(), Cof::and(eq0(0), eq0(0)));
        assert!(equivalent(th, &p, &r));
        assert!(!equivalent(th, &p, &eq0(0)));
    }
}
