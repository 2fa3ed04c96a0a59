//! Relational spans over a pair of translations into a common theory.
//!
//! A span presents one source development in three coordinated pieces: a
//! left image, a right image, and an apex that relates them, with
//! projection substitutions back to either side. The apex is ordinary
//! syntax in the shared target theory, so the kernel checks it like any
//! other judgment; nothing here extends the trusted core.
//!
//! Two ingredients are kept separate. [`TranslatorHandle`] abstracts what
//! the combinators need from a translation: the width of its interval
//! image and target-side path and filling formers of that width. The
//! `refl_*` functions build the diagonal span of a judgment in the
//! unit, pair and identification fragment, widening every telescope entry
//! to a five-entry relation block (for type codes) or a three-entry
//! element block (for elements).

use serde::Serialize;
use thiserror::Error;

use crate::cofsolve::{entails, Cof};
use crate::derived::{refl_path, square_ty, square_tuple};
use crate::interval::{IntervalTerm, TheoryName};
use crate::kernel::{Env, FailureInfo, TypeError};
use crate::syntax::print::{print_judgment, FileItem, SourceFile};
use crate::syntax::{
    app, app_s, el, fst, id_ty, ivar, i0, i1, pair, papp_s, path_ty, pi, plam, shift,
    shift_c, shift_ivl, sigma, snd, subst, var, Entry, Judgment, Subst, SubstEntry,
    Telescope, Term,
};
use crate::twist::{
    iterated_fill, twist_cof, twist_interval, twist_judgment, twist_tele, twist_term,
    twist_theory, twisted_papp, TwistError,
};

#[derive(Debug, Clone, Error)]
pub enum SpanError {
    #[error("{0} lies outside the relational fragment")]
    OutOfFragment(String),
    #[error("apex cofibration does not entail both projections")]
    InvalidCof,
    #[error("incompatible span data: {0}")]
    Incompatible(String),
    #[error("span runs do not support {0}")]
    Unsupported(String),
    #[error("unknown translator `{0}`")]
    UnknownTranslator(String),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

type Result<T> = std::result::Result<T, SpanError>;

/// A short name for a term's head constructor, for diagnostics.
fn head(t: &Term) -> &'static str {
    match t {
        Term::Var(_) => "a variable",
        Term::Const(_) => "a defined constant",
        Term::U | Term::El(_) | Term::CPi(..) | Term::CSigma(..) | Term::CPath(..)
        | Term::CId(..) | Term::CUnit => "a universe code",
        Term::Pi(..) | Term::Lam(_) | Term::App(..) => "a function former",
        Term::Sigma(..) | Term::Pair(..) | Term::Fst(_) | Term::Snd(_) => "a pair former",
        Term::UnitTy | Term::TT => "a unit former",
        Term::IdTy(..) | Term::Refl(_) | Term::J { .. } => "an identification former",
        Term::PathTy(..) | Term::PLam(_) | Term::PApp(..) | Term::Fill { .. } => {
            "a path former"
        }
        Term::GlueTy { .. } | Term::GlueIntro { .. } | Term::Unglue(_) => "a glue former",
        Term::SuspTy(_) | Term::North | Term::South | Term::Merid(_)
        | Term::SuspElim { .. } | Term::MeridBeta { .. } => "a suspension former",
        Term::AbsurdTy | Term::AbsurdTm(_) | Term::SplitTy { .. } | Term::SplitTm { .. } => {
            "a cofibration split"
        }
    }
}

// ---------------------------------------------------------------------------
// Translator handles

/// What the span combinators need to know about a translation: source and
/// target theories, the width of its interval image, and target-side
/// images of the path and filling formers at that width.
///
/// Interval blocks are listed outermost first, and `e0`/`e1` are closed.
/// A `line` passed to a former binds `interval_arity` adjacent interval
/// entries; a `part` binds a witness entry and then the same block.
pub trait TranslatorHandle {
    fn name(&self) -> &'static str;
    fn source(&self) -> TheoryName;
    fn target(&self) -> TheoryName;
    fn interval_arity(&self) -> usize;
    /// Image of the left endpoint.
    fn e0(&self) -> Vec<IntervalTerm>;
    /// Image of the right endpoint.
    fn e1(&self) -> Vec<IntervalTerm>;
    fn telescope(&self, tele: &Telescope) -> Result<Telescope>;
    fn ty(&self, tele: &Telescope, ty: &Term) -> Result<Term>;
    fn term(&self, tele: &Telescope, tm: &Term) -> Result<Term>;
    fn interval(&self, tele: &Telescope, r: &IntervalTerm) -> Result<Vec<IntervalTerm>>;
    fn cof(&self, tele: &Telescope, c: &Cof) -> Result<Cof>;
    fn judgment(&self, j: &Judgment) -> Result<Judgment>;
    /// Path type over a line binding one interval block.
    fn path_ty(&self, line: &Term, lhs: &Term, rhs: &Term) -> Term;
    /// Path abstraction of a body binding one interval block.
    fn plam(&self, body: &Term) -> Term;
    /// Path application at one interval block's worth of arguments.
    fn papp(&self, p: &Term, rs: &[IntervalTerm]) -> Term;
    /// Filler from `src` to `dst` along `line`, constrained by `part` where
    /// `cof` holds and agreeing with `cap` at `src`.
    fn fill(
        &self,
        src: &[IntervalTerm],
        dst: &[IntervalTerm],
        line: &Term,
        cof: &Cof,
        part: &Term,
        cap: &Term,
    ) -> Term;
    /// Unconstrained transport: a filler whose partial element is vacuous.
    fn coe(&self, src: &[IntervalTerm], dst: &[IntervalTerm], line: &Term, cap: &Term) -> Term {
        let n = self.interval_arity();
        let part = Term::AbsurdTm(Box::new(crate::syntax::shift_from(line, 1, n)));
        self.fill(src, dst, line, &Cof::Bot, &part, cap)
    }
}

/// The identity translation over a fixed theory.
pub struct IdTranslator(pub TheoryName);

impl TranslatorHandle for IdTranslator {
    fn name(&self) -> &'static str {
        "id"
    }
    fn source(&self) -> TheoryName {
        self.0
    }
    fn target(&self) -> TheoryName {
        self.0
    }
    fn interval_arity(&self) -> usize {
        1
    }
    fn e0(&self) -> Vec<IntervalTerm> {
        vec![i0()]
    }
    fn e1(&self) -> Vec<IntervalTerm> {
        vec![i1()]
    }
    fn telescope(&self, tele: &Telescope) -> Result<Telescope> {
        Ok(tele.clone())
    }
    fn ty(&self, _tele: &Telescope, ty: &Term) -> Result<Term> {
        Ok(ty.clone())
    }
    fn term(&self, _tele: &Telescope, tm: &Term) -> Result<Term> {
        Ok(tm.clone())
    }
    fn interval(&self, _tele: &Telescope, r: &IntervalTerm) -> Result<Vec<IntervalTerm>> {
        Ok(vec![r.clone()])
    }
    fn cof(&self, _tele: &Telescope, c: &Cof) -> Result<Cof> {
        Ok(c.clone())
    }
    fn judgment(&self, j: &Judgment) -> Result<Judgment> {
        Ok(j.clone())
    }
    fn path_ty(&self, line: &Term, lhs: &Term, rhs: &Term) -> Term {
        path_ty(line.clone(), lhs.clone(), rhs.clone())
    }
    fn plam(&self, body: &Term) -> Term {
        plam(body.clone())
    }
    fn papp(&self, p: &Term, rs: &[IntervalTerm]) -> Term {
        papp_s(p, rs[0].clone())
    }
    fn fill(
        &self,
        src: &[IntervalTerm],
        dst: &[IntervalTerm],
        line: &Term,
        cof: &Cof,
        part: &Term,
        cap: &Term,
    ) -> Term {
        crate::syntax::fill(
            src[0].clone(),
            dst[0].clone(),
            line.clone(),
            cof.clone(),
            part.clone(),
            cap.clone(),
        )
    }
}

/// The reversal-eliminating translation, with doubled interval entries.
pub struct TwistTranslator {
    source: TheoryName,
    target: TheoryName,
}

impl TwistTranslator {
    pub fn new(source: TheoryName) -> Result<TwistTranslator> {
        Ok(TwistTranslator { source, target: twist_theory(source)? })
    }
}

impl TranslatorHandle for TwistTranslator {
    fn name(&self) -> &'static str {
        "twist"
    }
    fn source(&self) -> TheoryName {
        self.source
    }
    fn target(&self) -> TheoryName {
        self.target
    }
    fn interval_arity(&self) -> usize {
        2
    }
    fn e0(&self) -> Vec<IntervalTerm> {
        vec![IntervalTerm::E0, IntervalTerm::E1]
    }
    fn e1(&self) -> Vec<IntervalTerm> {
        vec![IntervalTerm::E1, IntervalTerm::E0]
    }
    fn telescope(&self, tele: &Telescope) -> Result<Telescope> {
        Ok(twist_tele(self.source, tele)?.0)
    }
    fn ty(&self, tele: &Telescope, ty: &Term) -> Result<Term> {
        let (_, env) = twist_tele(self.source, tele)?;
        Ok(twist_term(&env, ty))
    }
    fn term(&self, tele: &Telescope, tm: &Term) -> Result<Term> {
        let (_, env) = twist_tele(self.source, tele)?;
        Ok(twist_term(&env, tm))
    }
    fn interval(&self, tele: &Telescope, r: &IntervalTerm) -> Result<Vec<IntervalTerm>> {
        let (_, env) = twist_tele(self.source, tele)?;
        let (outer, inner) = twist_interval(&env, r);
        Ok(vec![outer, inner])
    }
    fn cof(&self, tele: &Telescope, c: &Cof) -> Result<Cof> {
        let (_, env) = twist_tele(self.source, tele)?;
        Ok(twist_cof(&env, c))
    }
    fn judgment(&self, j: &Judgment) -> Result<Judgment> {
        Ok(twist_judgment(self.source, j)?)
    }
    fn path_ty(&self, line: &Term, lhs: &Term, rhs: &Term) -> Term {
        square_ty(line, lhs, rhs)
    }
    fn plam(&self, body: &Term) -> Term {
        square_tuple(body)
    }
    fn papp(&self, p: &Term, rs: &[IntervalTerm]) -> Term {
        twisted_papp(p, rs[0].clone(), rs[1].clone())
    }
    fn fill(
        &self,
        src: &[IntervalTerm],
        dst: &[IntervalTerm],
        line: &Term,
        cof: &Cof,
        part: &Term,
        cap: &Term,
    ) -> Term {
        iterated_fill(
            &(src[0].clone(), src[1].clone()),
            &(dst[0].clone(), dst[1].clone()),
            line,
            cof,
            part,
            cap,
        )
    }
}

/// Looks up a translator by its command-line name.
pub fn handle_for(name: &str, source: TheoryName) -> Result<Box<dyn TranslatorHandle>> {
    match name {
        "id" => Ok(Box::new(IdTranslator(source))),
        "twist" => Ok(Box::new(TwistTranslator::new(source)?)),
        other => Err(SpanError::UnknownTranslator(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Substitution helpers

/// The variables of the innermost block of `n` interval entries, outermost
/// first, matching the order of `e0`/`e1` vectors.
fn block_vars(n: usize) -> Vec<IntervalTerm> {
    (0..n).rev().map(ivar).collect()
}

/// Substitution entries sending a bound interval block to fixed values,
/// innermost first, each lifted by `by`.
fn fixed(vals: &[IntervalTerm], by: isize) -> Vec<SubstEntry> {
    vals.iter().rev().map(|r| SubstEntry::Interval(shift_ivl(r, by, 0))).collect()
}

/// Substitution entries rebinding an interval block to the target context's
/// own block starting at index `base`, innermost first.
fn rebound(n: usize, base: usize) -> Vec<SubstEntry> {
    (0..n).map(|m| SubstEntry::Interval(ivar(base + m))).collect()
}

/// Instantiates a relation over `[ambient, x, x']` at a pair of elements
/// living under `lift` binders above the same ambient context.
fn at_pair(rel: &Term, lift: isize, x: Term, x_pr: Term) -> Term {
    let entries = vec![SubstEntry::Term(x_pr), SubstEntry::Term(x)];
    subst(rel, &Subst { entries, tail: lift - 2 })
}

// ---------------------------------------------------------------------------
// Correspondence telescopes

/// Identification-based contractibility: a centre together with an
/// identification to every element.
pub fn is_contr_id(t: &Term) -> Term {
    sigma(t.clone(), pi(shift(t, 1, 0), id_ty(shift(t, 2, 0), var(1), var(0))))
}

/// Pushes the five-entry relation block a type code widens to: two codes,
/// a binary relation between their elements, and contractibility of the
/// relation's fibers in both directions.
fn push_ty_block(tele: &mut Telescope) {
    tele.push(Entry::TermVar(Term::U));
    tele.push(Entry::TermVar(Term::U));
    tele.push(Entry::TermVar(pi(el(var(1)), pi(el(var(1)), Term::U))));
    tele.push(Entry::TermVar(pi(
        el(var(2)),
        is_contr_id(&sigma(el(var(2)), el(app(app(var(2), var(1)), var(0))))),
    )));
    tele.push(Entry::TermVar(pi(
        el(var(2)),
        is_contr_id(&sigma(el(var(4)), el(app(app(var(3), var(0)), var(1))))),
    )));
}

/// The telescope of a type correspondence.
pub fn mk_ty_corr() -> Telescope {
    let mut tele = Telescope::new();
    push_ty_block(&mut tele);
    tele
}

/// The telescope of an element correspondence: a type correspondence plus
/// a related pair of elements.
pub fn mk_tm_corr() -> Telescope {
    let mut tele = mk_ty_corr();
    tele.push(Entry::TermVar(el(var(4))));
    tele.push(Entry::TermVar(el(var(4))));
    tele.push(Entry::TermVar(el(app(app(var(4), var(1)), var(0)))));
    tele
}

// ---------------------------------------------------------------------------
// The diagonal span on the unit, pair and identification fragment

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum EntryKind {
    Ty,
    Tm,
}

impl EntryKind {
    fn width(self) -> usize {
        match self {
            EntryKind::Ty => 5,
            EntryKind::Tm => 3,
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Tracks how each source telescope entry widened, outermost first.
#[derive(Clone, Default)]
struct ReflEnv {
    entries: Vec<EntryKind>,
}

impl ReflEnv {
    fn kind(&self, k: usize) -> EntryKind {
        self.entries[self.entries.len() - 1 - k]
    }

    /// Total width of the blocks for the `k` innermost source entries.
    fn base(&self, k: usize) -> usize {
        self.entries.iter().rev().take(k).map(|e| e.width()).sum()
    }

    /// Index of the left or right copy of source variable `k`.
    fn index(&self, side: Side, k: usize) -> usize {
        self.base(k)
            + match (side, self.kind(k)) {
                (Side::Left, EntryKind::Ty) => 4,
                (Side::Right, EntryKind::Ty) => 3,
                (Side::Left, EntryKind::Tm) => 2,
                (Side::Right, EntryKind::Tm) => 1,
            }
    }

    /// Index of the relation or witness copy of source variable `k`.
    fn bar(&self, k: usize) -> usize {
        self.base(k)
            + match self.kind(k) {
                EntryKind::Ty => 2,
                EntryKind::Tm => 0,
            }
    }

    /// One projection image per source variable, innermost first.
    fn proj(&self, side: Side) -> Vec<Term> {
        (0..self.entries.len()).map(|k| var(self.index(side, k))).collect()
    }
}

/// Renames a source term into the widened context along one projection.
/// Local binders are untouched; only telescope variables move.
fn rename(env: &ReflEnv, side: Side, t: &Term) -> Term {
    let entries =
        (0..env.entries.len()).map(|k| SubstEntry::Term(var(env.index(side, k)))).collect();
    subst(t, &Subst { entries, tail: 0 })
}

/// The relational witness of a fragment term: variables map to their
/// witness copies and canonical forms are rebuilt componentwise.
fn bar_tm(env: &ReflEnv, t: &Term) -> Result<Term> {
    Ok(match t {
        Term::Var(k) => var(env.bar(*k)),
        Term::TT => Term::TT,
        Term::Pair(a, b) => pair(bar_tm(env, a)?, bar_tm(env, b)?),
        Term::Fst(p) => fst(bar_tm(env, p)?),
        Term::Snd(p) => snd(bar_tm(env, p)?),
        Term::Refl(a) => Term::Refl(Box::new(bar_tm(env, a)?)),
        other => return Err(SpanError::OutOfFragment(head(other).to_string())),
    })
}

/// The relation a fragment type widens to, over the widened context
/// extended by a left element `x` and a right element `x'`.
fn rt(env: &ReflEnv, ty: &Term) -> Result<Term> {
    Ok(match ty {
        Term::UnitTy => Term::UnitTy,
        Term::El(c) => match &**c {
            Term::CUnit => Term::UnitTy,
            Term::Var(k) => {
                if env.kind(*k) != EntryKind::Ty {
                    return Err(SpanError::OutOfFragment(
                        "an element used as a type code".to_string(),
                    ));
                }
                el(app(app(var(env.bar(*k) + 2), var(1)), var(0)))
            }
            other => return Err(SpanError::OutOfFragment(head(other).to_string())),
        },
        Term::Sigma(s, t2) => {
            let rs = rt(env, s)?;
            let first = at_pair(&rs, 2, fst(var(1)), fst(var(0)));
            let mut env2 = env.clone();
            env2.entries.push(EntryKind::Tm);
            let rb = rt(&env2, t2)?;
            // the second relation sees the components of the outer pair and
            // the bound witness of the first relation
            let body = subst(
                &rb,
                &Subst {
                    entries: vec![
                        SubstEntry::Term(snd(var(1))),
                        SubstEntry::Term(snd(var(2))),
                        SubstEntry::Term(var(0)),
                        SubstEntry::Term(fst(var(1))),
                        SubstEntry::Term(fst(var(2))),
                    ],
                    tail: -2,
                },
            );
            sigma(first, body)
        }
        Term::IdTy(a_ty, a0, a1) => {
            let ra = rt(env, a_ty)?;
            let a0b = bar_tm(env, a0)?;
            let a1b = bar_tm(env, a1)?;
            let a0r = rename(env, Side::Right, a0);
            let a1l = rename(env, Side::Left, a1);
            let a1r = rename(env, Side::Right, a1);
            // transport the witness of the endpoints along both
            // identifications and relate the result to the far witness
            let step1 = Term::J {
                motive: Box::new(at_pair(&ra, 4, var(1), shift(&a0r, 4, 0))),
                base: Box::new(shift(&a0b, 2, 0)),
                scrut: Box::new(var(1)),
            };
            let step2 = Term::J {
                motive: Box::new(at_pair(&ra, 4, shift(&a1l, 4, 0), var(1))),
                base: Box::new(step1),
                scrut: Box::new(var(0)),
            };
            let target = at_pair(&ra, 2, shift(&a1l, 2, 0), shift(&a1r, 2, 0));
            id_ty(target, step2, shift(&a1b, 2, 0))
        }
        other => return Err(SpanError::OutOfFragment(head(other).to_string())),
    })
}

fn widen_telescope(tele: &Telescope) -> Result<(Telescope, ReflEnv)> {
    let mut env = ReflEnv::default();
    let mut out = Telescope::new();
    for entry in &tele.entries {
        match entry {
            Entry::TermVar(ty) if *ty == Term::U => {
                push_ty_block(&mut out);
                env.entries.push(EntryKind::Ty);
            }
            Entry::TermVar(ty) => {
                let rel = rt(&env, ty)?;
                let tl = rename(&env, Side::Left, ty);
                let tr = rename(&env, Side::Right, ty);
                out.push(Entry::TermVar(tl));
                out.push(Entry::TermVar(shift(&tr, 1, 0)));
                out.push(Entry::TermVar(rel));
                env.entries.push(EntryKind::Tm);
            }
            Entry::IntervalVar | Entry::CofWitness(_) => {
                return Err(SpanError::OutOfFragment(
                    "interval and cofibration entries".to_string(),
                ))
            }
        }
    }
    Ok((out, env))
}

/// Widens a fragment telescope to its diagonal correspondence context and
/// returns the two projection substitutions, innermost first.
pub fn refl_telescope(tele: &Telescope) -> Result<(Telescope, Vec<Term>, Vec<Term>)> {
    let (apex, env) = widen_telescope(tele)?;
    Ok((apex, env.proj(Side::Left), env.proj(Side::Right)))
}

/// A judgment spanned by an apex judgment and projection substitutions.
#[derive(Clone, Debug)]
pub struct SpanJudgment {
    pub left: Judgment,
    pub right: Judgment,
    pub apex: Judgment,
    /// Correspondence context the projections substitute out of.
    pub apex_tele: Telescope,
    /// Variable images realizing apex to left, innermost first.
    pub d0: Vec<Term>,
    /// Variable images realizing apex to right, innermost first.
    pub d1: Vec<Term>,
}

/// Transports a judgment along a projection substitution into the apex
/// context.
pub fn pull_back(j: &Judgment, apex_tele: &Telescope, proj: &[Term]) -> Judgment {
    let s = Subst {
        entries: proj.iter().cloned().map(SubstEntry::Term).collect(),
        tail: 0,
    };
    match j {
        Judgment::TypeWf(_, t) => Judgment::TypeWf(apex_tele.clone(), subst(t, &s)),
        Judgment::HasType(_, a, t) => {
            Judgment::HasType(apex_tele.clone(), subst(a, &s), subst(t, &s))
        }
        Judgment::DefEq(_, a, b, t) => {
            Judgment::DefEq(apex_tele.clone(), subst(a, &s), subst(b, &s), subst(t, &s))
        }
        Judgment::CofHolds(_, c) => {
            Judgment::CofHolds(apex_tele.clone(), crate::syntax::subst_cof(c, &s))
        }
    }
}

/// The diagonal span of a fragment judgment: both projections are the
/// judgment itself and the apex widens it to relational witnesses.
pub fn refl_judgment(j: &Judgment) -> Result<SpanJudgment> {
    let (apex_tele, env, apex) = match j {
        Judgment::TypeWf(tele, ty) => {
            let (apex_tele, env) = widen_telescope(tele)?;
            let rel = rt(&env, ty)?;
            let tl = rename(&env, Side::Left, ty);
            let tr = rename(&env, Side::Right, ty);
            let extended = apex_tele
                .extended(Entry::TermVar(tl))
                .extended(Entry::TermVar(shift(&tr, 1, 0)));
            (apex_tele, env, Judgment::TypeWf(extended, rel))
        }
        Judgment::HasType(tele, tm, ty) => {
            let (apex_tele, env) = widen_telescope(tele)?;
            let rel = rt(&env, ty)?;
            let bar = bar_tm(&env, tm)?;
            let at = at_pair(&rel, 0, rename(&env, Side::Left, tm), rename(&env, Side::Right, tm));
            let apex = Judgment::HasType(apex_tele.clone(), bar, at);
            (apex_tele, env, apex)
        }
        Judgment::DefEq(tele, a, b, ty) => {
            let (apex_tele, env) = widen_telescope(tele)?;
            let rel = rt(&env, ty)?;
            let ab = bar_tm(&env, a)?;
            let bb = bar_tm(&env, b)?;
            let at = at_pair(&rel, 0, rename(&env, Side::Left, a), rename(&env, Side::Right, a));
            let apex = Judgment::DefEq(apex_tele.clone(), ab, bb, at);
            (apex_tele, env, apex)
        }
        Judgment::CofHolds(..) => {
            return Err(SpanError::OutOfFragment("cofibration judgments".to_string()))
        }
    };
    Ok(SpanJudgment {
        left: j.clone(),
        right: j.clone(),
        apex,
        apex_tele,
        d0: env.proj(Side::Left),
        d1: env.proj(Side::Right),
    })
}

// ---------------------------------------------------------------------------
// Cofibration triples

/// A cofibration in span position: two projections and an apex that
/// entails both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanCof {
    pub left: Cof,
    pub right: Cof,
    pub apex: Cof,
}

impl SpanCof {
    /// Checks both entailments in the given target theory.
    pub fn new(theory: TheoryName, left: Cof, right: Cof, apex: Cof) -> Result<SpanCof> {
        let th = theory.theory();
        if !entails(th, &apex, &left) || !entails(th, &apex, &right) {
            return Err(SpanError::InvalidCof);
        }
        Ok(SpanCof { left, right, apex })
    }
}

/// An interval argument in span position: one block per side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanInterval {
    pub left: Vec<IntervalTerm>,
    pub right: Vec<IntervalTerm>,
}

/// Componentwise equality with conjunctive apex.
pub fn span_eq(theory: TheoryName, l: &SpanInterval, r: &SpanInterval) -> Result<SpanCof> {
    if l.left.len() != r.left.len() || l.right.len() != r.right.len() {
        return Err(SpanError::Incompatible("interval blocks of unequal width".to_string()));
    }
    let left = Cof::all(l.left.iter().zip(&r.left).map(|(a, b)| Cof::eq(a.clone(), b.clone())));
    let right =
        Cof::all(l.right.iter().zip(&r.right).map(|(a, b)| Cof::eq(a.clone(), b.clone())));
    SpanCof::new(theory, left.clone(), right.clone(), Cof::and(left, right))
}

pub fn span_top(theory: TheoryName) -> Result<SpanCof> {
    SpanCof::new(theory, Cof::Top, Cof::Top, Cof::Top)
}

pub fn span_bot(theory: TheoryName) -> Result<SpanCof> {
    SpanCof::new(theory, Cof::Bot, Cof::Bot, Cof::Bot)
}

pub fn span_and(theory: TheoryName, p: &SpanCof, q: &SpanCof) -> Result<SpanCof> {
    SpanCof::new(
        theory,
        Cof::and(p.left.clone(), q.left.clone()),
        Cof::and(p.right.clone(), q.right.clone()),
        Cof::and(p.apex.clone(), q.apex.clone()),
    )
}

pub fn span_or(theory: TheoryName, p: &SpanCof, q: &SpanCof) -> Result<SpanCof> {
    SpanCof::new(
        theory,
        Cof::or(p.left.clone(), q.left.clone()),
        Cof::or(p.right.clone(), q.right.clone()),
        Cof::or(p.apex.clone(), q.apex.clone()),
    )
}

// ---------------------------------------------------------------------------
// Apex filling

/// Inputs to the apex filler over one ambient context. Lines bind the
/// respective translator's interval block; partial elements bind a witness
/// and then the block; `abar` binds the left block, the right block, a left
/// element and a right element; `part_apex` binds a witness, the left block
/// and the right block. Endpoint vectors are outermost first.
pub struct SpanFillInput {
    pub line_left: Term,
    pub line_right: Term,
    pub abar: Term,
    pub cof: SpanCof,
    pub part_left: Term,
    pub part_right: Term,
    pub part_apex: Term,
    pub src_left: Vec<IntervalTerm>,
    pub src_right: Vec<IntervalTerm>,
    pub dst_left: Vec<IntervalTerm>,
    pub dst_right: Vec<IntervalTerm>,
    pub cap_left: Term,
    pub cap_right: Term,
    pub cap_apex: Term,
}

/// The filler of one side restated under its own freshly bound interval
/// block, all inputs lifted from the ambient context below that block.
fn fill_at_block(
    h: &dyn TranslatorHandle,
    src: &[IntervalTerm],
    line: &Term,
    cof: &Cof,
    part: &Term,
    cap: &Term,
) -> Term {
    let n = h.interval_arity();
    let by = n as isize;
    let src: Vec<_> = src.iter().map(|r| shift_ivl(r, by, 0)).collect();
    h.fill(
        &src,
        &block_vars(n),
        &shift(line, by, n),
        &shift_c(cof, by, 0),
        &shift(part, by, n + 1),
        &shift(cap, by, 0),
    )
}

/// The apex filler: sweep the left direction at the fixed right source,
/// then the right direction along the reached column, the relation's base
/// points moving by their own side's fillers throughout.
pub fn span_fill(
    f: &dyn TranslatorHandle,
    g: &dyn TranslatorHandle,
    inp: &SpanFillInput,
) -> Term {
    let nf = f.interval_arity();
    let ng = g.interval_arity();

    // left sweep: relate the moving left point to the right cap
    let a_plus_blk =
        fill_at_block(f, &inp.src_left, &inp.line_left, &inp.cof.left, &inp.part_left, &inp.cap_left);
    let mut es = vec![
        SubstEntry::Term(shift(&inp.cap_right, nf as isize, 0)),
        SubstEntry::Term(a_plus_blk),
    ];
    es.extend(fixed(&inp.src_right, nf as isize));
    let inner_line = subst(&inp.abar, &Subst { entries: es, tail: -((ng + 2) as isize) });
    let inner_part = subst(
        &inp.part_apex,
        &Subst { entries: fixed(&inp.src_right, (1 + nf) as isize), tail: -(ng as isize) },
    );
    let inner = f.fill(
        &inp.src_left,
        &inp.dst_left,
        &inner_line,
        &inp.cof.apex,
        &inner_part,
        &inp.cap_apex,
    );

    // right sweep: the left point now rests at its destination
    let a_plus_dst = f.fill(
        &inp.src_left,
        &inp.dst_left,
        &inp.line_left,
        &inp.cof.left,
        &inp.part_left,
        &inp.cap_left,
    );
    let a_pr_plus_blk = fill_at_block(
        g,
        &inp.src_right,
        &inp.line_right,
        &inp.cof.right,
        &inp.part_right,
        &inp.cap_right,
    );
    let mut es = vec![
        SubstEntry::Term(a_pr_plus_blk),
        SubstEntry::Term(shift(&a_plus_dst, ng as isize, 0)),
    ];
    es.extend(rebound(ng, 0));
    es.extend(fixed(&inp.dst_left, ng as isize));
    let outer_line = subst(&inp.abar, &Subst { entries: es, tail: -((nf + 2) as isize) });
    let mut es = rebound(ng, 0);
    es.extend(fixed(&inp.dst_left, (ng + 1) as isize));
    let outer_part =
        subst(&inp.part_apex, &Subst { entries: es, tail: -(nf as isize) });
    g.fill(&inp.src_right, &inp.dst_right, &outer_line, &inp.cof.apex, &outer_part, &inner)
}

/// The type the apex filler inhabits: the relation at both destinations
/// and both transported base points.
pub fn span_fill_ty(
    f: &dyn TranslatorHandle,
    g: &dyn TranslatorHandle,
    inp: &SpanFillInput,
) -> Term {
    let nf = f.interval_arity();
    let ng = g.interval_arity();
    let a_plus = f.fill(
        &inp.src_left,
        &inp.dst_left,
        &inp.line_left,
        &inp.cof.left,
        &inp.part_left,
        &inp.cap_left,
    );
    let a_pr_plus = g.fill(
        &inp.src_right,
        &inp.dst_right,
        &inp.line_right,
        &inp.cof.right,
        &inp.part_right,
        &inp.cap_right,
    );
    let mut es = vec![SubstEntry::Term(a_pr_plus), SubstEntry::Term(a_plus)];
    es.extend(fixed(&inp.dst_right, 0));
    es.extend(fixed(&inp.dst_left, 0));
    subst(&inp.abar, &Subst { entries: es, tail: -((nf + ng + 2) as isize) })
}

// ---------------------------------------------------------------------------
// Function relations

/// The relation between two functions pointwise over a relation on their
/// domains and codomains. `abar` binds a left and right domain element;
/// `bbar` additionally binds a relational witness and a left and right
/// codomain element.
pub fn span_pi(
    a_left: &Term,
    a_right: &Term,
    abar: &Term,
    bbar: &Term,
    fn_left: &Term,
    fn_right: &Term,
) -> Term {
    let body = subst(
        bbar,
        &Subst {
            entries: vec![
                SubstEntry::Term(app_s(&shift(fn_right, 3, 0), &var(1))),
                SubstEntry::Term(app_s(&shift(fn_left, 3, 0), &var(2))),
            ],
            tail: -2,
        },
    );
    pi(a_left.clone(), pi(shift(a_right, 1, 0), pi(abar.clone(), body)))
}

// ---------------------------------------------------------------------------
// Path skeletons

/// Inputs to a path skeleton over one ambient context. `abar` binds the
/// left block, the right block and a related pair of elements; everything
/// else is ambient. The paths run between the stated endpoints on their
/// own sides, and the corner witnesses relate matching endpoints.
pub struct SpanPathInput {
    pub abar: Term,
    pub a0_left: Term,
    pub a0_right: Term,
    pub a1_left: Term,
    pub a1_right: Term,
    pub a00: Term,
    pub a11: Term,
    pub path_left: Term,
    pub path_right: Term,
}

/// The seven-field telescope of relational data a pair of paths spans: the
/// two off-diagonal corners, the four edges tracking one path against a
/// fixed endpoint of the other, and the full two-directional filler.
pub fn span_path_skeleton(
    f: &dyn TranslatorHandle,
    g: &dyn TranslatorHandle,
    inp: &SpanPathInput,
) -> Term {
    let nf = f.interval_arity();
    let ng = g.interval_arity();
    let w = (nf + ng + 2) as isize;
    let inst = |a_pr: Term, a: Term, right: Vec<SubstEntry>, left: Vec<SubstEntry>,
                depth: usize| {
        let mut es = vec![SubstEntry::Term(a_pr), SubstEntry::Term(a)];
        es.extend(right);
        es.extend(left);
        subst(&inp.abar, &Subst { entries: es, tail: depth as isize - w })
    };

    let t1 = inst(
        inp.a0_right.clone(),
        inp.a1_left.clone(),
        fixed(&g.e0(), 0),
        fixed(&f.e1(), 0),
        0,
    );
    let t2 = inst(
        shift(&inp.a1_right, 1, 0),
        shift(&inp.a0_left, 1, 0),
        fixed(&g.e1(), 0),
        fixed(&f.e0(), 0),
        1,
    );
    let line3 = inst(
        shift(&inp.a0_right, (2 + nf) as isize, 0),
        f.papp(&shift(&inp.path_left, (2 + nf) as isize, 0), &block_vars(nf)),
        fixed(&g.e0(), 0),
        rebound(nf, 0),
        2 + nf,
    );
    let t3 = f.path_ty(&line3, &shift(&inp.a00, 2, 0), &var(1));
    let line4 = inst(
        shift(&inp.a1_right, (3 + nf) as isize, 0),
        f.papp(&shift(&inp.path_left, (3 + nf) as isize, 0), &block_vars(nf)),
        fixed(&g.e1(), 0),
        rebound(nf, 0),
        3 + nf,
    );
    let t4 = f.path_ty(&line4, &var(1), &shift(&inp.a11, 3, 0));
    let line5 = inst(
        g.papp(&shift(&inp.path_right, (4 + ng) as isize, 0), &block_vars(ng)),
        shift(&inp.a0_left, (4 + ng) as isize, 0),
        rebound(ng, 0),
        fixed(&f.e0(), 0),
        4 + ng,
    );
    let t5 = g.path_ty(&line5, &shift(&inp.a00, 4, 0), &var(2));
    let line6 = inst(
        g.papp(&shift(&inp.path_right, (5 + ng) as isize, 0), &block_vars(ng)),
        shift(&inp.a1_left, (5 + ng) as isize, 0),
        rebound(ng, 0),
        fixed(&f.e1(), 0),
        5 + ng,
    );
    let t6 = g.path_ty(&line6, &var(4), &shift(&inp.a11, 5, 0));
    // the core tracks both paths at once; its edges are the bound fields
    let fb_vars: Vec<_> = (ng..ng + nf).rev().map(ivar).collect();
    let inner_line = inst(
        g.papp(&shift(&inp.path_right, (6 + nf + ng) as isize, 0), &block_vars(ng)),
        f.papp(&shift(&inp.path_left, (6 + nf + ng) as isize, 0), &fb_vars),
        rebound(ng, 0),
        rebound(nf, ng),
        6 + nf + ng,
    );
    let line7 = g.path_ty(
        &inner_line,
        &f.papp(&var(3 + nf), &block_vars(nf)),
        &f.papp(&var(2 + nf), &block_vars(nf)),
    );
    let t7 = f.path_ty(&line7, &var(1), &var(0));

    sigma(t1, sigma(t2, sigma(t3, sigma(t4, sigma(t5, sigma(t6, t7))))))
}

// ---------------------------------------------------------------------------
// Path decoding

/// Converts a translated path into an ordinary target path between its
/// endpoint instances, by transporting reflexivity along the family of
/// paths the translated one reaches.
pub fn mk_decode_path(
    f: &dyn TranslatorHandle,
    c_ty: &Term,
    c0: &Term,
    p: &Term,
) -> Term {
    let n = f.interval_arity();
    let by = n as isize;
    let line = path_ty(
        shift(c_ty, by + 1, 0),
        shift(c0, by, 0),
        f.papp(&shift(p, by, 0), &block_vars(n)),
    );
    f.coe(&f.e0(), &f.e1(), &line, &refl_path(c0))
}

/// The type a decoded path inhabits.
pub fn decode_path_ty(c_ty: &Term, c0: &Term, c1: &Term) -> Term {
    path_ty(shift(c_ty, 1, 0), c0.clone(), c1.clone())
}

// ---------------------------------------------------------------------------
// File-level runs

#[derive(Debug, Clone, Serialize)]
pub struct SpanItemReport {
    pub judgment: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReport {
    pub source: String,
    pub target: String,
    pub left_translator: String,
    pub right_translator: String,
    pub ok: bool,
    pub items: Vec<SpanItemReport>,
}

pub struct SpanOutcome {
    pub apex: SourceFile,
    pub report: SpanReport,
}

fn stage_fail(stage: &str, e: TypeError) -> FailureInfo {
    let mut info: FailureInfo = e.into();
    info.path.insert(0, stage.to_string());
    info
}

fn span_fail(stage: &str, e: &SpanError) -> FailureInfo {
    FailureInfo {
        path: vec![stage.to_string()],
        expected: None,
        found: None,
        message: e.to_string(),
    }
}

fn span_item(
    f: &dyn TranslatorHandle,
    g: &dyn TranslatorHandle,
    source_env: &Env,
    target_env: &Env,
    j: &Judgment,
) -> std::result::Result<SpanJudgment, FailureInfo> {
    source_env.check_judgment(j).map_err(|e| stage_fail("source", e))?;
    let left = f.judgment(j).map_err(|e| span_fail("left image", &e))?;
    let right = g.judgment(j).map_err(|e| span_fail("right image", &e))?;
    if left != right {
        return Err(span_fail(
            "images",
            &SpanError::Incompatible("the two translations disagree on this judgment".to_string()),
        ));
    }
    let mut sj = refl_judgment(&left).map_err(|e| span_fail("apex", &e))?;
    sj.right = right;
    target_env.check_judgment(&sj.left).map_err(|e| stage_fail("left projection", e))?;
    target_env.check_judgment(&sj.right).map_err(|e| stage_fail("right projection", e))?;
    target_env.check_judgment(&sj.apex).map_err(|e| stage_fail("apex", e))?;
    let pb0 = pull_back(&sj.left, &sj.apex_tele, &sj.d0);
    target_env.check_judgment(&pb0).map_err(|e| stage_fail("left pull-back", e))?;
    let pb1 = pull_back(&sj.right, &sj.apex_tele, &sj.d1);
    target_env.check_judgment(&pb1).map_err(|e| stage_fail("right pull-back", e))?;
    Ok(sj)
}

/// Runs a judgment-only file through both translations, checks each
/// diagonal span in the target theory, and returns the apex file along
/// with a per-judgment report.
pub fn span_file(
    f: &dyn TranslatorHandle,
    g: &dyn TranslatorHandle,
    file: &SourceFile,
) -> Result<SpanOutcome> {
    let theory = file
        .theory
        .ok_or_else(|| SpanError::Incompatible("missing #theory directive".to_string()))?;
    if f.source() != theory || g.source() != theory {
        return Err(SpanError::Incompatible(format!(
            "file theory {} does not match translator sources {} and {}",
            theory.as_str(),
            f.source().as_str(),
            g.source().as_str()
        )));
    }
    if f.target() != g.target() {
        return Err(SpanError::Incompatible(format!(
            "translator targets {} and {} differ",
            f.target().as_str(),
            g.target().as_str()
        )));
    }
    let source_env = Env::new(theory);
    let target_env = Env::new(f.target());
    let mut items = Vec::new();
    let mut apex_items = Vec::new();
    let mut ok = true;
    for item in &file.items {
        let judgment = match item {
            FileItem::Def { .. } => return Err(SpanError::Unsupported("definitions".to_string())),
            FileItem::Check { must_fail: true, .. } => {
                return Err(SpanError::Unsupported("expected-failure judgments".to_string()))
            }
            FileItem::Check { judgment, .. } => judgment,
        };
        let label = print_judgment(judgment);
        match span_item(f, g, &source_env, &target_env, judgment) {
            Ok(sj) => {
                apex_items.push(FileItem::Check { judgment: sj.apex, must_fail: false });
                items.push(SpanItemReport { judgment: label, ok: true, failure: None });
            }
            Err(info) => {
                ok = false;
                items.push(SpanItemReport { judgment: label, ok: false, failure: Some(info) });
            }
        }
    }
    let apex = SourceFile { theory: Some(f.target()), translate_check: false, items: apex_items };
    let report = SpanReport {
        source: theory.as_str().to_string(),
        target: f.target().as_str().to_string(),
        left_translator: f.name().to_string(),
        right_translator: g.name().to_string(),
        ok,
        items,
    };
    Ok(SpanOutcome { apex, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{lam, refl};

    fn cid(c: Term, x: Term, y: Term) -> Term {
        Term::CId(Box::new(c), Box::new(x), Box::new(y))
    }

    fn assert_checks(theory: TheoryName, j: &Judgment) {
        Env::new(theory).check_judgment(j).unwrap_or_else(|e| {
            panic!("judgment failed: {e:?}\n  {}", print_judgment(j))
        });
    }

    fn point_tele() -> Telescope {
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(el(var(0))));
        tele
    }

    #[test]
    fn correspondence_telescopes_check() {
        for theory in [TheoryName::Cart, TheoryName::Dl] {
            let env = Env::new(theory);
            env.check_telescope(&mk_ty_corr()).unwrap();
            env.check_telescope(&mk_tm_corr()).unwrap();
        }
    }

    #[test]
    fn identity_relation_is_a_correspondence() {
        // over [A], the relation \a a'. Id A a a'; the singleton centre is a
        // defined constant so its dependent pair type is available to inference
        let x = sigma(el(var(1)), el(cid(var(2), var(1), var(0))));
        let mut env = Env::new(TheoryName::Cart);
        env.define(
            "centre",
            pi(Term::U, pi(el(var(0)), x.clone())),
            lam(lam(pair(var(0), refl(var(0))))),
        )
        .unwrap();
        let centre = |a: Term, pt: Term| app(app(Term::Const("centre".to_string()), a), pt);
        let clty = pi(el(var(0)), is_contr_id(&x));
        let jt = Term::J {
            motive: Box::new(id_ty(
                shift(&x, 3, 0),
                centre(var(4), var(3)),
                pair(var(1), var(0)),
            )),
            base: Box::new(refl(centre(var(2), var(1)))),
            scrut: Box::new(snd(var(0))),
        };
        let cl = lam(pair(centre(var(1), var(0)), lam(jt)));
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        env.check_judgment(&Judgment::HasType(tele, cl, clty))
            .unwrap_or_else(|e| panic!("{e:?}"));
    }

    fn pair_judgment() -> Judgment {
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(el(var(1))));
        tele.push(Entry::TermVar(el(var(1))));
        Judgment::HasType(
            tele,
            pair(var(1), var(0)),
            sigma(el(var(3)), el(var(3))),
        )
    }

    #[test]
    fn refl_of_pair_judgment_checks_and_projects() {
        let sj = refl_judgment(&pair_judgment()).unwrap();
        assert_checks(TheoryName::Cart, &sj.left);
        assert_checks(TheoryName::Cart, &sj.apex);
        assert_checks(TheoryName::Cart, &pull_back(&sj.left, &sj.apex_tele, &sj.d0));
        assert_checks(TheoryName::Cart, &pull_back(&sj.right, &sj.apex_tele, &sj.d1));
    }

    #[test]
    fn refl_of_projection_equation_checks() {
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(el(var(0))));
        tele.push(Entry::TermVar(el(var(1))));
        let j = Judgment::DefEq(
            tele,
            fst(pair(var(1), var(0))),
            var(1),
            el(var(2)),
        );
        let sj = refl_judgment(&j).unwrap();
        assert_checks(TheoryName::Cart, &sj.apex);
        assert_checks(TheoryName::Cart, &pull_back(&sj.left, &sj.apex_tele, &sj.d0));
    }

    #[test]
    fn refl_of_reflexivity_transports_to_the_diagonal() {
        let j = Judgment::HasType(
            point_tele(),
            refl(var(0)),
            id_ty(el(var(1)), var(0), var(0)),
        );
        let sj = refl_judgment(&j).unwrap();
        assert_checks(TheoryName::Cart, &sj.apex);
        assert_checks(TheoryName::Cart, &pull_back(&sj.left, &sj.apex_tele, &sj.d0));
        assert_checks(TheoryName::Cart, &pull_back(&sj.right, &sj.apex_tele, &sj.d1));
    }

    #[test]
    fn refl_rejects_interval_constructs() {
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(el(var(0))));
        tele.push(Entry::TermVar(path_ty(el(var(2)), var(0), var(0))));
        let j = Judgment::TypeWf(tele, Term::UnitTy);
        assert!(matches!(refl_judgment(&j), Err(SpanError::OutOfFragment(_))));

        let mut tele = Telescope::new();
        tele.push(Entry::IntervalVar);
        let j = Judgment::TypeWf(tele, Term::UnitTy);
        assert!(matches!(refl_judgment(&j), Err(SpanError::OutOfFragment(_))));
    }

    #[test]
    fn span_cofibrations_require_apex_entailment() {
        let th = TheoryName::Cart;
        let i_both = SpanInterval { left: vec![ivar(0)], right: vec![ivar(0)] };
        let zero = SpanInterval { left: vec![i0()], right: vec![i0()] };
        let eq = span_eq(th, &i_both, &zero).unwrap();
        assert_eq!(eq.left, Cof::eq(ivar(0), i0()));
        assert!(span_top(th).is_ok());
        assert!(span_bot(th).is_ok());
        assert!(span_and(th, &eq, &span_top(th).unwrap()).is_ok());
        assert!(span_or(th, &eq, &span_bot(th).unwrap()).is_ok());
        // an apex weaker than a projection is rejected
        assert!(matches!(
            SpanCof::new(th, Cof::eq(ivar(0), i0()), Cof::Top, Cof::Top),
            Err(SpanError::InvalidCof)
        ));
    }

    /// A constant identity-relation filling problem over `[A, a, i]` with
    /// the partial element pinned on `i = 0`.
    fn id_fill_input() -> SpanFillInput {
        let eq = span_eq(
            TheoryName::Cart,
            &SpanInterval { left: vec![ivar(0)], right: vec![ivar(0)] },
            &SpanInterval { left: vec![i0()], right: vec![i0()] },
        )
        .unwrap();
        SpanFillInput {
            line_left: el(var(3)),
            line_right: el(var(3)),
            abar: el(cid(var(6), var(1), var(0))),
            cof: eq,
            part_left: var(3),
            part_right: var(3),
            part_apex: refl(var(4)),
            src_left: vec![i0()],
            src_right: vec![i0()],
            dst_left: vec![i1()],
            dst_right: vec![i1()],
            cap_left: var(1),
            cap_right: var(1),
            cap_apex: refl(var(1)),
        }
    }

    fn interval_point_tele() -> Telescope {
        let mut tele = point_tele();
        tele.push(Entry::IntervalVar);
        tele
    }

    #[test]
    fn span_fill_identity_pair_has_the_stated_type() {
        let f = IdTranslator(TheoryName::Cart);
        let inp = id_fill_input();
        let tele = interval_point_tele();
        let term = span_fill(&f, &f, &inp);
        let ty = span_fill_ty(&f, &f, &inp);
        assert_checks(TheoryName::Cart, &Judgment::HasType(tele, term, ty));
    }

    #[test]
    fn span_fill_restricts_to_its_partial_element() {
        let f = IdTranslator(TheoryName::Cart);
        let inp = id_fill_input();
        let term = span_fill(&f, &f, &inp);
        let ty = span_fill_ty(&f, &f, &inp);
        let under = interval_point_tele().extended(Entry::CofWitness(inp.cof.apex.clone()));
        let part_at_dst = subst(
            &inp.part_apex,
            &Subst {
                entries: vec![
                    SubstEntry::Interval(i1()),
                    SubstEntry::Interval(i1()),
                ],
                tail: -2,
            },
        );
        assert_checks(
            TheoryName::Cart,
            &Judgment::DefEq(under, shift(&term, 1, 0), part_at_dst, shift(&ty, 1, 0)),
        );
    }

    #[test]
    fn span_fill_at_the_source_is_the_cap() {
        let f = IdTranslator(TheoryName::Cart);
        let mut inp = id_fill_input();
        inp.dst_left = vec![i0()];
        inp.dst_right = vec![i0()];
        let term = span_fill(&f, &f, &inp);
        assert_checks(
            TheoryName::Cart,
            &Judgment::DefEq(
                interval_point_tele(),
                term,
                refl(var(1)),
                el(cid(var(2), var(1), var(1))),
            ),
        );
    }

    #[test]
    fn span_fill_with_doubled_intervals_restricts_everywhere() {
        let f = TwistTranslator::new(TheoryName::Dm).unwrap();
        let inp = SpanFillInput {
            line_left: el(var(3)),
            line_right: el(var(3)),
            abar: el(cid(var(7), var(1), var(0))),
            cof: span_top(TheoryName::Dl).unwrap(),
            part_left: var(3),
            part_right: var(3),
            part_apex: refl(var(5)),
            src_left: f.e0(),
            src_right: f.e0(),
            dst_left: f.e1(),
            dst_right: f.e1(),
            cap_left: var(0),
            cap_right: var(0),
            cap_apex: refl(var(0)),
        };
        let term = span_fill(&f, &f, &inp);
        let ty = span_fill_ty(&f, &f, &inp);
        let tele = point_tele();
        assert_checks(TheoryName::Dl, &Judgment::HasType(tele.clone(), term.clone(), ty));
        assert_checks(
            TheoryName::Dl,
            &Judgment::DefEq(tele, term, refl(var(0)), el(cid(var(1), var(0), var(0)))),
        );
    }

    #[test]
    fn span_pi_identity_instance_is_inhabited() {
        let a = el(var(0));
        let abar = el(cid(var(2), var(1), var(0)));
        let bbar = el(cid(var(5), var(1), var(0)));
        let idf = lam(var(0));
        let ty = span_pi(&a, &a, &abar, &bbar, &idf, &idf);
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        assert_checks(TheoryName::Cart, &Judgment::TypeWf(tele.clone(), ty.clone()));
        assert_checks(
            TheoryName::Cart,
            &Judgment::HasType(tele, lam(lam(lam(var(0)))), ty),
        );
    }

    #[test]
    fn path_skeleton_of_constant_paths_is_inhabited() {
        let f = IdTranslator(TheoryName::Cart);
        let inp = SpanPathInput {
            abar: el(cid(var(5), var(1), var(0))),
            a0_left: var(0),
            a0_right: var(0),
            a1_left: var(0),
            a1_right: var(0),
            a00: refl(var(0)),
            a11: refl(var(0)),
            path_left: refl_path(&var(0)),
            path_right: refl_path(&var(0)),
        };
        let ty = span_path_skeleton(&f, &f, &inp);
        let tele = point_tele();
        assert_checks(TheoryName::Cart, &Judgment::TypeWf(tele.clone(), ty.clone()));
        let edge = plam(refl(var(1)));
        let tuple = pair(
            refl(var(0)),
            pair(
                refl(var(0)),
                pair(
                    edge.clone(),
                    pair(
                        edge.clone(),
                        pair(edge.clone(), pair(edge, plam(plam(refl(var(2)))))),
                    ),
                ),
            ),
        );
        assert_checks(TheoryName::Cart, &Judgment::HasType(tele, tuple, ty));
    }

    fn square_point_tele() -> Telescope {
        let mut tele = point_tele();
        let sq = square_ty(&el(var(3)), &var(0), &var(0));
        tele.push(Entry::TermVar(sq));
        tele
    }

    #[test]
    fn path_skeleton_with_doubled_intervals_is_well_formed() {
        let f = TwistTranslator::new(TheoryName::Dm).unwrap();
        let inp = SpanPathInput {
            abar: el(cid(var(8), var(1), var(0))),
            a0_left: var(1),
            a0_right: var(1),
            a1_left: var(1),
            a1_right: var(1),
            a00: refl(var(1)),
            a11: refl(var(1)),
            path_left: var(0),
            path_right: var(0),
        };
        let ty = span_path_skeleton(&f, &f, &inp);
        assert_checks(TheoryName::Dl, &Judgment::TypeWf(square_point_tele(), ty));
    }

    fn path_point_tele() -> Telescope {
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(el(var(0))));
        tele.push(Entry::TermVar(el(var(1))));
        tele.push(Entry::TermVar(path_ty(el(var(3)), var(1), var(0))));
        tele
    }

    #[test]
    fn decode_path_recovers_an_ordinary_path() {
        let f = IdTranslator(TheoryName::Cart);
        let term = mk_decode_path(&f, &el(var(3)), &var(2), &var(0));
        let ty = decode_path_ty(&el(var(3)), &var(2), &var(1));
        assert_checks(TheoryName::Cart, &Judgment::HasType(path_point_tele(), term, ty));
    }

    #[test]
    fn decode_path_flattens_a_doubled_path() {
        let f = TwistTranslator::new(TheoryName::Dm).unwrap();
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(el(var(0))));
        tele.push(Entry::TermVar(el(var(1))));
        tele.push(Entry::TermVar(square_ty(&el(var(4)), &var(1), &var(0))));
        let term = mk_decode_path(&f, &el(var(3)), &var(2), &var(0));
        let ty = decode_path_ty(&el(var(3)), &var(2), &var(1));
        assert_checks(TheoryName::Dl, &Judgment::HasType(tele, term, ty));
    }

    #[test]
    fn span_file_identity_run_reports_ok() {
        let file = SourceFile {
            theory: Some(TheoryName::Cart),
            translate_check: false,
            items: vec![
                FileItem::Check {
                    judgment: Judgment::HasType(Telescope::new(), Term::TT, Term::UnitTy),
                    must_fail: false,
                },
                FileItem::Check {
                    judgment: Judgment::DefEq(
                        Telescope::new(),
                        fst(pair(Term::TT, Term::TT)),
                        Term::TT,
                        Term::UnitTy,
                    ),
                    must_fail: false,
                },
                FileItem::Check {
                    judgment: Judgment::TypeWf(
                        Telescope::new(),
                        sigma(Term::UnitTy, Term::UnitTy),
                    ),
                    must_fail: false,
                },
                FileItem::Check { judgment: pair_judgment(), must_fail: false },
            ],
        };
        let f = IdTranslator(TheoryName::Cart);
        let out = span_file(&f, &f, &file).unwrap();
        assert!(out.report.ok, "report: {:?}", out.report);
        assert_eq!(out.apex.items.len(), 4);
        assert_eq!(out.apex.theory, Some(TheoryName::Cart));
    }

    #[test]
    fn span_file_twist_run_lands_in_the_reduced_theory() {
        let file = SourceFile {
            theory: Some(TheoryName::Dm),
            translate_check: false,
            items: vec![
                FileItem::Check {
                    judgment: Judgment::HasType(Telescope::new(), Term::TT, Term::UnitTy),
                    must_fail: false,
                },
                FileItem::Check { judgment: pair_judgment(), must_fail: false },
            ],
        };
        let f = TwistTranslator::new(TheoryName::Dm).unwrap();
        let g = TwistTranslator::new(TheoryName::Dm).unwrap();
        let out = span_file(&f, &g, &file).unwrap();
        assert!(out.report.ok, "report: {:?}", out.report);
        assert_eq!(out.apex.theory, Some(TheoryName::Dl));
    }

    #[test]
    fn span_file_rejects_incompatible_translators() {
        let file = SourceFile {
            theory: Some(TheoryName::Cart),
            translate_check: false,
            items: Vec::new(),
        };
        let f = IdTranslator(TheoryName::Cart);
        let g = IdTranslator(TheoryName::Dl);
        assert!(matches!(span_file(&f, &g, &file), Err(SpanError::Incompatible(_))));
        assert!(handle_for("id", TheoryName::Cart).is_ok());
        assert!(matches!(
            handle_for("twist", TheoryName::Cart),
            Err(SpanError::Twist(_))
        ));
        assert!(matches!(
            handle_for("nonsense", TheoryName::Cart),
            Err(SpanError::UnknownTranslator(_))
        ));
    }

    #[test]
    fn span_fill_matches_a_direct_filler_on_the_identity() {
        // with both translators the identity and a vacuous constraint, the
        // apex filler is two stacked coercions over the same line
        let f = IdTranslator(TheoryName::Cart);
        let mut inp = id_fill_input();
        inp.cof = span_bot(TheoryName::Cart).unwrap();
        inp.part_left = Term::AbsurdTm(Box::new(el(var(4))));
        inp.part_right = Term::AbsurdTm(Box::new(el(var(4))));
        inp.part_apex = Term::AbsurdTm(Box::new(el(cid(var(5), var(4), var(4)))));
        let term = span_fill(&f, &f, &inp);
        let ty = span_fill_ty(&f, &f, &inp);
        assert_checks(TheoryName::Cart, &Judgment::HasType(interval_point_tele(), term, ty));
    }
}
