//! Abstract syntax, telescopes, and substitution.
//!
//! Types and terms share one `Term` sort; well-kindedness is a kernel
//! judgment, not a syntactic class. Binders are de Bruijn indices into a
//! single mixed telescope whose entries are term variables, interval
//! variables, and cofibration-truth witnesses. Witnesses of truth are never
//! referenced by terms (any two are equal), but their entries still occupy
//! an index, so crossing one shifts everything else by one.

use crate::cofsolve::Cof;
use crate::interval::IntervalTerm;

pub mod parse;
pub mod print;

/// Terms and types of the theory. Comments on each variant name the entries
/// its binders introduce, outermost first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    Var(usize),
    /// Reference to a checked global definition; unfolded on demand.
    Const(String),

    // Universe. `U` is a type; codes are terms of `U` decoded by `El`.
    U,
    El(Box<Term>),
    /// `c-pi a (x. b)`; b binds a term variable of type `El a`.
    CPi(Box<Term>, Box<Term>),
    /// `c-sigma a (x. b)`; b binds a term variable.
    CSigma(Box<Term>, Box<Term>),
    /// `c-path (i. l) p q`; l binds an interval variable.
    CPath(Box<Term>, Box<Term>, Box<Term>),
    CId(Box<Term>, Box<Term>, Box<Term>),
    CUnit,

    /// `(x : A) -> B`; B binds a term variable.
    Pi(Box<Term>, Box<Term>),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),

    /// `(x : A) * B`; B binds a term variable.
    Sigma(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),

    UnitTy,
    TT,

    IdTy(Box<Term>, Box<Term>, Box<Term>),
    Refl(Box<Term>),
    /// `J (x. q. motive) base scrut`; motive binds a term variable x and an
    /// identification q : Id A a x.
    J {
        motive: Box<Term>,
        base: Box<Term>,
        scrut: Box<Term>,
    },

    /// `Path (i. A) a b`; the line binds an interval variable.
    PathTy(Box<Term>, Box<Term>, Box<Term>),
    PLam(Box<Term>),
    PApp(Box<Term>, IntervalTerm),

    /// `fill^{src->dst} (i. line) [cof -> (i. part)] cap`. The line binds an
    /// interval variable; the partial element binds a witness of `cof` and
    /// then an interval variable.
    Fill {
        src: IntervalTerm,
        dst: IntervalTerm,
        line: Box<Term>,
        cof: Cof,
        part: Box<Term>,
        cap: Box<Term>,
    },

    /// `Glue base [cof -> (part_ty , equiv)]`; part_ty and equiv each bind a
    /// witness of `cof`.
    GlueTy {
        base: Box<Term>,
        cof: Cof,
        part_ty: Box<Term>,
        equiv: Box<Term>,
    },
    /// `glue base [cof -> part]`; part binds a witness of `cof`.
    GlueIntro {
        cof: Cof,
        base: Box<Term>,
        part: Box<Term>,
    },
    Unglue(Box<Term>),

    SuspTy(Box<Term>),
    North,
    South,
    Merid(Box<Term>),
    /// `susp-elim (t. motive) north south (a. merid) scrut`; the motive
    /// binds the scrutinee, the meridian case binds a point of the base
    /// type and lands in a path over the motive line.
    SuspElim {
        motive: Box<Term>,
        north: Box<Term>,
        south: Box<Term>,
        merid: Box<Term>,
        scrut: Box<Term>,
    },
    /// The propositional computation rule at meridians: a path between
    /// `<i> susp-elim ... (merid arg @ i)` and the meridian case at `arg`.
    /// Opaque: it never reduces.
    MeridBeta {
        motive: Box<Term>,
        north: Box<Term>,
        south: Box<Term>,
        merid: Box<Term>,
        arg: Box<Term>,
    },

    /// The type delivered by the false cofibration; well-formed only in an
    /// absurd context.
    AbsurdTy,
    AbsurdTm(Box<Term>),
    /// `split-ty [p -> left | q -> right]`; each branch binds a witness of
    /// its guard. Well-formed when `p | q` holds and the branches agree
    /// under `p & q`.
    SplitTy {
        p: Cof,
        q: Cof,
        left: Box<Term>,
        right: Box<Term>,
    },
    /// `split-tm (w. motive) [p -> left | q -> right]`; the motive binds a
    /// witness of `p | q`, the branches bind witnesses of their guards.
    SplitTm {
        p: Cof,
        q: Cof,
        motive: Box<Term>,
        left: Box<Term>,
        right: Box<Term>,
    },
}

/// One telescope entry. A binder in a `Term` introduces exactly one entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Entry {
    TermVar(Term),
    IntervalVar,
    CofWitness(Cof),
}

/// An ordered context; `entries.last()` is the innermost entry, de Bruijn
/// index 0. Each entry is well-formed over its prefix.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Telescope {
    pub entries: Vec<Entry>,
}

impl Telescope {
    pub fn new() -> Telescope {
        Telescope { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at de Bruijn index `k`, as seen from inside the telescope.
    pub fn lookup(&self, k: usize) -> Option<&Entry> {
        let n = self.entries.len();
        if k < n {
            Some(&self.entries[n - 1 - k])
        } else {
            None
        }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extended(&self, e: Entry) -> Telescope {
        let mut t = self.clone();
        t.push(e);
        t
    }
}

/// A checkable claim.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Judgment {
    TypeWf(Telescope, Term),
    HasType(Telescope, Term, Term),
    /// `a = b : ty`
    DefEq(Telescope, Term, Term, Term),
    CofHolds(Telescope, Cof),
}

// Construction helpers; builders in later modules assemble large terms and
// read much better with these.

pub fn var(k: usize) -> Term {
    Term::Var(k)
}

pub fn app(f: Term, x: Term) -> Term {
    Term::App(Box::new(f), Box::new(x))
}

pub fn app2(f: Term, x: Term, y: Term) -> Term {
    app(app(f, x), y)
}

pub fn lam(body: Term) -> Term {
    Term::Lam(Box::new(body))
}

pub fn pi(dom: Term, cod: Term) -> Term {
    Term::Pi(Box::new(dom), Box::new(cod))
}

pub fn arrow(dom: Term, cod: Term) -> Term {
    pi(dom, shift(&cod, 1, 0))
}

pub fn sigma(fst: Term, snd: Term) -> Term {
    Term::Sigma(Box::new(fst), Box::new(snd))
}

pub fn pair(a: Term, b: Term) -> Term {
    Term::Pair(Box::new(a), Box::new(b))
}

pub fn fst(t: Term) -> Term {
    Term::Fst(Box::new(t))
}

pub fn snd(t: Term) -> Term {
    Term::Snd(Box::new(t))
}

pub fn el(t: Term) -> Term {
    Term::El(Box::new(t))
}

pub fn path_ty(line: Term, a: Term, b: Term) -> Term {
    Term::PathTy(Box::new(line), Box::new(a), Box::new(b))
}

/// Non-dependent path type `a ~[ty] b`.
pub fn path(ty: Term, a: Term, b: Term) -> Term {
    path_ty(shift(&ty, 1, 0), a, b)
}

pub fn plam(body: Term) -> Term {
    Term::PLam(Box::new(body))
}

pub fn papp(t: Term, r: IntervalTerm) -> Term {
    Term::PApp(Box::new(t), r)
}

// Reducing variants. The checker infers application spines head-first and
// rejects a literal abstraction or pair in head position, so builders that
// splice arbitrary subterms into elimination position use these; on neutral
// input they construct the plain spine.

pub fn app_s(f: &Term, x: &Term) -> Term {
    match f {
        Term::Lam(body) => open_term(body, x.clone()),
        _ => app(f.clone(), x.clone()),
    }
}

pub fn papp_s(t: &Term, r: IntervalTerm) -> Term {
    match t {
        Term::PLam(body) => open_interval(body, r),
        _ => papp(t.clone(), r),
    }
}

pub fn fst_s(t: &Term) -> Term {
    match t {
        Term::Pair(a, _) => (**a).clone(),
        _ => fst(t.clone()),
    }
}

pub fn snd_s(t: &Term) -> Term {
    match t {
        Term::Pair(_, b) => (**b).clone(),
        _ => snd(t.clone()),
    }
}

pub fn id_ty(a: Term, x: Term, y: Term) -> Term {
    Term::IdTy(Box::new(a), Box::new(x), Box::new(y))
}

pub fn refl(t: Term) -> Term {
    Term::Refl(Box::new(t))
}

pub fn fill(src: IntervalTerm, dst: IntervalTerm, line: Term, cof: Cof, part: Term, cap: Term) -> Term {
    Term::Fill {
        src,
        dst,
        line: Box::new(line),
        cof,
        part: Box::new(part),
        cap: Box::new(cap),
    }
}

/// Coercion: filling against the empty system. The partial element
/// inhabits the absurd hypothesis, so any representative works.
pub fn coe(src: IntervalTerm, dst: IntervalTerm, line: Term, cap: Term) -> Term {
    // part lives under [w : bot, i : I]; its type is the line shifted
    // across the witness entry.
    let part_ty = shift_from(&line, 1, 1);
    fill(src, dst, line, Cof::Bot, Term::AbsurdTm(Box::new(part_ty)), cap)
}

pub fn susp(a: Term) -> Term {
    Term::SuspTy(Box::new(a))
}

pub fn merid(a: Term) -> Term {
    Term::Merid(Box::new(a))
}

pub fn i0() -> IntervalTerm {
    IntervalTerm::E0
}

pub fn i1() -> IntervalTerm {
    IntervalTerm::E1
}

pub fn ivar(k: usize) -> IntervalTerm {
    IntervalTerm::Var(k)
}

// Index arithmetic. Terms, interval terms, and cofibrations all live in the
// same index space, so every traversal below is shared through one engine.

fn shift_index(k: usize, by: isize, cutoff: usize) -> usize {
    if k < cutoff {
        k
    } else {
        let shifted = k as isize + by;
        debug_assert!(shifted >= cutoff as isize, "shift underflow at index {k}");
        shifted as usize
    }
}

fn shift_interval(t: &IntervalTerm, by: isize, cutoff: usize) -> IntervalTerm {
    t.map_vars(&|k| shift_index(k, by, cutoff))
}

fn shift_cof(c: &Cof, by: isize, cutoff: usize) -> Cof {
    c.map_intervals(&|r| shift_interval(r, by, cutoff))
}

/// Shifts free indices at or above `cutoff` by `by` (negative values
/// strengthen; the caller guarantees no index underflows).
pub fn shift(t: &Term, by: isize, cutoff: usize) -> Term {
    if by == 0 {
        return t.clone();
    }
    map_term(t, cutoff, &|k, c| Term::Var(shift_index(k, by, c)), &|r, c| {
        shift_interval(r, by, c)
    })
}

/// Alias of [`shift`] whose name documents the usual reading: the term moves
/// from a prefix context under `cutoff`-many preserved inner binders.
pub fn shift_from(t: &Term, by: isize, cutoff: usize) -> Term {
    shift(t, by, cutoff)
}

pub fn shift_ivl(t: &IntervalTerm, by: isize, cutoff: usize) -> IntervalTerm {
    shift_interval(t, by, cutoff)
}

pub fn shift_c(c: &Cof, by: isize, cutoff: usize) -> Cof {
    shift_cof(c, by, cutoff)
}

/// Structure-preserving map over a term, tracking binder depth. `on_var`
/// and `on_interval` receive the current depth as cutoff.
fn map_term(
    t: &Term,
    depth: usize,
    on_var: &impl Fn(usize, usize) -> Term,
    on_interval: &impl Fn(&IntervalTerm, usize) -> IntervalTerm,
) -> Term {
    use Term::*;
    let go = |t: &Term| map_term(t, depth, on_var, on_interval);
    let go1 = |t: &Term| map_term(t, depth + 1, on_var, on_interval);
    let go2 = |t: &Term| map_term(t, depth + 2, on_var, on_interval);
    let goi = |r: &IntervalTerm| on_interval(r, depth);
    let goc = |c: &Cof| c.map_intervals(&|r| on_interval(r, depth));
    match t {
        Var(k) => on_var(*k, depth),
        Const(c) => Const(c.clone()),
        U => U,
        El(a) => El(Box::new(go(a))),
        CPi(a, b) => CPi(Box::new(go(a)), Box::new(go1(b))),
        CSigma(a, b) => CSigma(Box::new(go(a)), Box::new(go1(b))),
        CPath(l, p, q) => CPath(Box::new(go1(l)), Box::new(go(p)), Box::new(go(q))),
        CId(a, x, y) => CId(Box::new(go(a)), Box::new(go(x)), Box::new(go(y))),
        CUnit => CUnit,
        Pi(a, b) => Pi(Box::new(go(a)), Box::new(go1(b))),
        Lam(b) => Lam(Box::new(go1(b))),
        App(f, x) => App(Box::new(go(f)), Box::new(go(x))),
        Sigma(a, b) => Sigma(Box::new(go(a)), Box::new(go1(b))),
        Pair(a, b) => Pair(Box::new(go(a)), Box::new(go(b))),
        Fst(a) => Fst(Box::new(go(a))),
        Snd(a) => Snd(Box::new(go(a))),
        UnitTy => UnitTy,
        TT => TT,
        IdTy(a, x, y) => IdTy(Box::new(go(a)), Box::new(go(x)), Box::new(go(y))),
        Refl(a) => Refl(Box::new(go(a))),
        J { motive, base, scrut } => J {
            motive: Box::new(go2(motive)),
            base: Box::new(go(base)),
            scrut: Box::new(go(scrut)),
        },
        PathTy(l, a, b) => PathTy(Box::new(go1(l)), Box::new(go(a)), Box::new(go(b))),
        PLam(b) => PLam(Box::new(go1(b))),
        PApp(p, r) => PApp(Box::new(go(p)), goi(r)),
        Fill { src, dst, line, cof, part, cap } => Fill {
            src: goi(src),
            dst: goi(dst),
            line: Box::new(go1(line)),
            cof: goc(cof),
            part: Box::new(go2(part)),
            cap: Box::new(go(cap)),
        },
        GlueTy { base, cof, part_ty, equiv } => GlueTy {
            base: Box::new(go(base)),
            cof: goc(cof),
            part_ty: Box::new(go1(part_ty)),
            equiv: Box::new(go1(equiv)),
        },
        GlueIntro { cof, base, part } => GlueIntro {
            cof: goc(cof),
            base: Box::new(go(base)),
            part: Box::new(go1(part)),
        },
        Unglue(g) => Unglue(Box::new(go(g))),
        SuspTy(a) => SuspTy(Box::new(go(a))),
        North => North,
        South => South,
        Merid(a) => Merid(Box::new(go(a))),
        SuspElim { motive, north, south, merid, scrut } => SuspElim {
            motive: Box::new(go1(motive)),
            north: Box::new(go(north)),
            south: Box::new(go(south)),
            merid: Box::new(go1(merid)),
            scrut: Box::new(go(scrut)),
        },
        MeridBeta { motive, north, south, merid, arg } => MeridBeta {
            motive: Box::new(go1(motive)),
            north: Box::new(go(north)),
            south: Box::new(go(south)),
            merid: Box::new(go1(merid)),
            arg: Box::new(go(arg)),
        },
        AbsurdTy => AbsurdTy,
        AbsurdTm(ty) => AbsurdTm(Box::new(go(ty))),
        SplitTy { p, q, left, right } => SplitTy {
            p: goc(p),
            q: goc(q),
            left: Box::new(go1(left)),
            right: Box::new(go1(right)),
        },
        SplitTm { p, q, motive, left, right } => SplitTm {
            p: goc(p),
            q: goc(q),
            motive: Box::new(go1(motive)),
            left: Box::new(go1(left)),
            right: Box::new(go1(right)),
        },
    }
}

/// What a substitution sends one telescope entry to.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubstEntry {
    Term(Term),
    Interval(IntervalTerm),
    /// Witnesses carry no data; the target context must prove the
    /// corresponding cofibration, which the kernel checks separately.
    Witness,
}

/// A simultaneous substitution. Index `k` maps to `entries[k]` when in
/// range; out-of-range indices map to `Var(k + tail)`, which lets one value
/// represent identities, openings, and shifts uniformly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subst {
    pub entries: Vec<SubstEntry>,
    pub tail: isize,
}

impl Subst {
    pub fn identity() -> Subst {
        Subst { entries: Vec::new(), tail: 0 }
    }

    /// Substitution replacing the innermost entry and strengthening the
    /// rest; the usual instrument of beta reduction.
    pub fn opening(e: SubstEntry) -> Subst {
        Subst { entries: vec![e], tail: -1 }
    }

    /// Identity on `tele`, written out entrywise.
    pub fn identity_on(tele: &Telescope) -> Subst {
        let entries = (0..tele.len())
            .map(|k| match tele.lookup(k).expect("in range") {
                Entry::TermVar(_) => SubstEntry::Term(Term::Var(k)),
                Entry::IntervalVar => SubstEntry::Interval(IntervalTerm::Var(k)),
                Entry::CofWitness(_) => SubstEntry::Witness,
            })
            .collect();
        Subst { entries, tail: 0 }
    }

    pub fn term(&self, k: usize) -> Term {
        match self.entries.get(k) {
            Some(SubstEntry::Term(t)) => t.clone(),
            Some(other) => {
                panic!("substitution kind mismatch at {k}: expected term, found {other:?}")
            }
            None => Term::Var(self.tail_index(k)),
        }
    }

    fn tail_index(&self, k: usize) -> usize {
        let shifted = k as isize + self.tail;
        debug_assert!(shifted >= 0, "substitution tail underflow at {k}");
        shifted as usize
    }

    pub fn interval(&self, k: usize) -> IntervalTerm {
        match self.entries.get(k) {
            Some(SubstEntry::Interval(r)) => r.clone(),
            Some(other) => {
                panic!("substitution kind mismatch at {k}: expected interval, found {other:?}")
            }
            None => IntervalTerm::Var(self.tail_index(k)),
        }
    }

    /// Pushes the substitution under one binder of the given entry kind.
    pub fn lift(&self, kind: &Entry) -> Subst {
        let head = match kind {
            Entry::TermVar(_) => SubstEntry::Term(Term::Var(0)),
            Entry::IntervalVar => SubstEntry::Interval(IntervalTerm::Var(0)),
            Entry::CofWitness(_) => SubstEntry::Witness,
        };
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.push(head);
        for e in &self.entries {
            entries.push(match e {
                SubstEntry::Term(t) => SubstEntry::Term(shift(t, 1, 0)),
                SubstEntry::Interval(r) => SubstEntry::Interval(shift_interval(r, 1, 0)),
                SubstEntry::Witness => SubstEntry::Witness,
            });
        }
        Subst { entries, tail: self.tail }
    }

    /// Composition in diagram order: `t[self][other] = t[self.then(other)]`.
    /// Sound when `self.entries` covers every free index of the terms it is
    /// applied to, or when both tails are plain shifts.
    pub fn then(&self, other: &Subst) -> Subst {
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                SubstEntry::Term(t) => SubstEntry::Term(subst(t, other)),
                SubstEntry::Interval(r) => SubstEntry::Interval(subst_interval(r, other)),
                SubstEntry::Witness => SubstEntry::Witness,
            })
            .collect();
        Subst { entries, tail: self.tail + other.tail }
    }
}

pub fn subst_interval(r: &IntervalTerm, s: &Subst) -> IntervalTerm {
    subst_interval_at(r, 0, s)
}

fn subst_interval_at(r: &IntervalTerm, depth: usize, s: &Subst) -> IntervalTerm {
    match r {
        IntervalTerm::Var(k) => {
            if *k < depth {
                IntervalTerm::Var(*k)
            } else {
                shift_interval(&s.interval(*k - depth), depth as isize, 0)
            }
        }
        IntervalTerm::E0 => IntervalTerm::E0,
        IntervalTerm::E1 => IntervalTerm::E1,
        IntervalTerm::Op(op, args) => IntervalTerm::Op(
            *op,
            args.iter().map(|a| subst_interval_at(a, depth, s)).collect(),
        ),
    }
}

pub fn subst_cof(c: &Cof, s: &Subst) -> Cof {
    c.map_intervals(&|r| subst_interval(r, s))
}

/// Applies a simultaneous substitution.
pub fn subst(t: &Term, s: &Subst) -> Term {
    map_term(
        t,
        0,
        &|k, depth| {
            if k < depth {
                Term::Var(k)
            } else {
                match s.entries.get(k - depth) {
                    Some(SubstEntry::Term(t)) => shift(t, depth as isize, 0),
                    Some(other) => panic!(
                        "substitution kind mismatch at {k}: expected term, found {other:?}"
                    ),
                    None => Term::Var(shift_index(s.tail_index(k - depth), depth as isize, 0)),
                }
            }
        },
        &|r, depth| subst_interval_at(r, depth, s),
    )
}

/// Instantiates the innermost binder of `body` with `e`, strengthening away
/// the bound entry.
pub fn open(body: &Term, e: SubstEntry) -> Term {
    subst(body, &Subst::opening(e))
}

pub fn open_term(body: &Term, t: Term) -> Term {
    open(body, SubstEntry::Term(t))
}

pub fn open_interval(body: &Term, r: IntervalTerm) -> Term {
    open(body, SubstEntry::Interval(r))
}

/// Removes one witness entry at index 0. Well-formed terms never reference
/// a witness, so this is a plain downshift.
pub fn strengthen_witness(body: &Term) -> Term {
    shift(body, -1, 0)
}

/// Instantiates a binder sitting under `extra` additional entries: `body`
/// is over `G,x`, the result over `G,D` with x := e and |D| = extra.
pub fn open_under(body: &Term, extra: usize, e: SubstEntry) -> Term {
    open(&shift(body, extra as isize, 1), e)
}

/// Instantiates the two-entry partial-element binder of a `Fill` at an
/// interval, discharging the witness.
pub fn open_fill_part(part: &Term, r: &IntervalTerm) -> Term {
    let once = open_interval(part, shift_ivl(r, 1, 0));
    strengthen_witness(&once)
}

/// Builds a `Fill` from a list of system branches `cof -> (i. body)`, each
/// body parsed or built over `[w, i]` like a single-branch partial element.
/// Multiple branches desugar to one partial element over the disjunction of
/// the guards, dispatching with `split-tm`; zero branches yield a coercion.
pub fn fill_multi(
    src: IntervalTerm,
    dst: IntervalTerm,
    line: Term,
    branches: Vec<(Cof, Term)>,
    cap: Term,
) -> Term {
    if branches.is_empty() {
        return coe(src, dst, line, cap);
    }
    let total = Cof::any(branches.iter().map(|(c, _)| c.clone()));
    let part = fill_part_of_branches(&line, 0, &branches);
    fill(src, dst, line, total, part, cap)
}

/// Partial element over `[G, w, i, w_1..w_depth]` dispatching the remaining
/// branches; each extra witness entry comes from an enclosing `split-tm`.
fn fill_part_of_branches(line: &Term, depth: usize, rest: &[(Cof, Term)]) -> Term {
    if rest.len() == 1 {
        return shift(&rest[0].1, depth as isize, 0);
    }
    let (first, tail) = rest.split_first().expect("nonempty");
    let guard_shift = (2 + depth) as isize;
    let p = shift_c(&first.0, guard_shift, 0);
    let q = shift_c(
        &Cof::any(tail.iter().map(|(c, _)| c.clone())),
        guard_shift,
        0,
    );
    // the motive is the line at the fill's interval variable, viewed under
    // one extra witness entry
    let motive = shift(&shift(line, 1, 1), (depth + 1) as isize, 0);
    let left = shift(&first.1, (depth + 1) as isize, 0);
    let right = fill_part_of_branches(line, depth + 1, tail);
    Term::SplitTm {
        p,
        q,
        motive: Box::new(motive),
        left: Box::new(left),
        right: Box::new(right),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_open() {
        // \x. f x with f = Var 0 outside: body is App(Var 1, Var 0)
        let body = app(var(1), var(0));
        let t = lam(body.clone());
        assert_eq!(shift(&t, 2, 0), lam(app(var(3), var(0))));
        // beta: (\x. f x) a -> f a
        assert_eq!(open_term(&body, var(7)), app(var(0), var(7)));
        // the opened entry is strengthened away
        assert_eq!(open_term(&app(var(1), var(0)), var(0)), app(var(0), var(0)));
    }

    #[test]
    fn open_interval_touches_papps_and_cofs() {
        // <i> p @ (i \/ j): body over [.., j, p, i]
        let body = papp(var(1), IntervalTerm::join(ivar(0), ivar(2)));
        let opened = open_interval(&body, IntervalTerm::E1);
        assert_eq!(opened, papp(var(0), IntervalTerm::join(IntervalTerm::E1, ivar(1))));
    }

    #[test]
    fn identity_subst_is_identity() {
        // over [x : U, i] with x = Var 3, i = interval Var 2 under two binders
        let t = lam(plam(papp(app(var(3), var(1)), IntervalTerm::join(ivar(0), ivar(2)))));
        assert_eq!(subst(&t, &Subst::identity()), t);
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::IntervalVar);
        let s = Subst::identity_on(&tele);
        assert_eq!(subst(&t, &s), t);
    }

    #[test]
    fn lift_crosses_binders_correctly() {
        // substituting x := c in \y. x must not capture y
        let s = Subst { entries: vec![SubstEntry::Term(Term::Const("c".into()))], tail: -1 };
        let t = lam(var(1));
        assert_eq!(subst(&t, &s), lam(Term::Const("c".into())));
        // and y itself is untouched
        assert_eq!(subst(&lam(var(0)), &s), lam(var(0)));
    }

    #[test]
    fn open_under_shifts_the_gap() {
        // body over [G, x]: x applied to the top entry of G
        let body = app(var(0), var(1));
        // instantiate x := Var(0) of a two-entry extension [G, a, b]; the
        // top of G sits at index 2 from there
        let r = open_under(&body, 2, SubstEntry::Term(var(0)));
        assert_eq!(r, app(var(0), var(2)));
    }

    #[test]
    fn fill_part_instantiation() {
        use crate::cofsolve::Cof;
        // part over [.., w, i]: PApp(Var 2, i)
        let part = papp(var(2), ivar(0));
        let inst = open_fill_part(&part, &IntervalTerm::E0);
        assert_eq!(inst, papp(var(0), IntervalTerm::E0));
        // cof stored outside the binder is untouched by the helper
        let f = fill(i0(), i1(), var(0), Cof::Top, part, var(1));
        match shift(&f, 1, 0) {
            Term::Fill { part, cap, .. } => {
                assert_eq!(*cap, var(2));
                assert_eq!(*part, papp(var(3), ivar(0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
