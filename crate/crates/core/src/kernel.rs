//! The checker: definitional equality, bidirectional typing, and file
//! processing over a fixed interval theory.
//!
//! Cofibration hypotheses never enter terms; they live in the context as
//! witness entries. The checker works one disjunct at a time: public entry
//! points split every witness hypothesis of the telescope into DNF cases
//! and run the judgment in each, and crossing a witness binder multiplies
//! the current case by the DNF of the binder's cofibration. Within a case
//! the hypotheses are a plain conjunction of interval equations, which is
//! exactly what the closed solver in `cofsolve` decides.
//!
//! Inside an inconsistent case every judgment holds vacuously; checking
//! short-circuits there, which is what makes branches of `split-tm` and
//! partial elements typecheck under their guards only.

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::cofsolve::{atoms_entail, atoms_entail_eq, atoms_unsat, dnf, Atom, Cof};
use crate::derived::equiv_ty;
use crate::interval::{IntervalTerm, IntervalTheory, TheoryName};
use crate::syntax::print::{print_cof_in, print_judgment, print_term_in, FileItem, SourceFile};
use crate::syntax::{
    app, app_s, fst, fst_s, id_ty, merid, open_fill_part, open_interval, open_term, open_under,
    papp, papp_s, path_ty, plam, refl, shift, shift_c, snd_s, strengthen_witness, susp, var,
    Entry, Judgment, SubstEntry, Telescope, Term,
};

#[derive(Debug, Clone, Error, Serialize, PartialEq, Eq)]
#[error("{}", self.render())]
pub struct TypeError {
    /// Coarse trail from the failing judgment outwards.
    pub path: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<String>,
    pub message: String,
}

impl TypeError {
    fn new(message: impl Into<String>) -> TypeError {
        TypeError { path: Vec::new(), expected: None, found: None, message: message.into() }
    }

    fn mismatch(message: impl Into<String>, expected: String, found: String) -> TypeError {
        TypeError {
            path: Vec::new(),
            expected: Some(expected),
            found: Some(found),
            message: message.into(),
        }
    }

    fn render(&self) -> String {
        let mut s = String::new();
        if !self.path.is_empty() {
            s.push_str(&self.path.join(": "));
            s.push_str(": ");
        }
        s.push_str(&self.message);
        if let Some(e) = &self.expected {
            s.push_str(&format!(" (expected {e}"));
            if let Some(f) = &self.found {
                s.push_str(&format!(", found {f}"));
            }
            s.push(')');
        } else if let Some(f) = &self.found {
            s.push_str(&format!(" (found {f})"));
        }
        s
    }
}

type Result<T> = std::result::Result<T, TypeError>;

/// Prefixes a path segment onto an error as it propagates outwards.
trait Seg {
    fn seg(self, s: &str) -> Self;
}

impl<T> Seg for Result<T> {
    fn seg(self, s: &str) -> Self {
        self.map_err(|mut e| {
            e.path.insert(0, s.to_string());
            e
        })
    }
}

#[derive(Clone, Debug)]
pub struct Def {
    pub ty: Term,
    pub body: Term,
}

/// Checked global state: the ambient theory and the definitions accepted so
/// far. Definitions are closed and unfold eagerly during reduction, so a
/// definition may only mention earlier ones.
#[derive(Clone, Debug)]
pub struct Env {
    theory: TheoryName,
    defs: IndexMap<String, Def>,
}

impl Env {
    pub fn new(theory: TheoryName) -> Env {
        Env { theory, defs: IndexMap::new() }
    }

    pub fn theory_name(&self) -> TheoryName {
        self.theory
    }

    fn theory(&self) -> &'static IntervalTheory {
        self.theory.theory()
    }

    pub fn lookup_def(&self, name: &str) -> Option<&Def> {
        self.defs.get(name)
    }

    pub fn def_names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(|s| s.as_str())
    }

    /// Checks `body : ty` over the empty telescope and records the
    /// definition.
    pub fn define(&mut self, name: &str, ty: Term, body: Term) -> Result<()> {
        if self.defs.contains_key(name) {
            return Err(TypeError::new(format!("duplicate definition `{name}`")));
        }
        let ctx = Ctx { env: self, tele: Telescope::new(), atoms: Vec::new(), absurd: false };
        ctx.check_is_type(&ty).seg("type annotation")?;
        ctx.check(&body, &ty).seg("body")?;
        self.defs.insert(name.to_string(), Def { ty, body });
        Ok(())
    }

    /// One checking context per DNF case of the telescope's witness
    /// hypotheses. The telescope is assumed well-formed.
    fn case_contexts(&self, tele: &Telescope) -> Vec<Ctx<'_>> {
        let mut cases: Vec<Vec<Atom>> = vec![Vec::new()];
        for (p, entry) in tele.entries.iter().enumerate() {
            if let Entry::CofWitness(cof) = entry {
                // the stored cofibration is over the prefix; its index 0 is
                // the entry just outside this witness
                let k = tele.entries.len() - 1 - p;
                let full = shift_c(cof, (k + 1) as isize, 0);
                let branches = dnf(&full);
                let mut next = Vec::with_capacity(cases.len() * branches.len());
                for base in &cases {
                    for br in &branches {
                        let mut v = base.clone();
                        v.extend(br.iter().cloned());
                        next.push(v);
                    }
                }
                cases = next;
            }
        }
        cases
            .into_iter()
            .map(|atoms| {
                let absurd = atoms_unsat(self.theory(), &atoms);
                Ctx { env: self, tele: tele.clone(), atoms, absurd }
            })
            .collect()
    }

    /// Validates a telescope entry by entry, each over its own prefix.
    pub fn check_telescope(&self, tele: &Telescope) -> Result<()> {
        let mut prefix = Telescope::new();
        for entry in &tele.entries {
            match entry {
                Entry::TermVar(ty) => {
                    for ctx in self.case_contexts(&prefix) {
                        ctx.check_is_type(ty).seg("telescope entry")?;
                    }
                }
                Entry::IntervalVar => {}
                Entry::CofWitness(cof) => {
                    for ctx in self.case_contexts(&prefix) {
                        ctx.check_cof(cof).seg("telescope hypothesis")?;
                    }
                }
            }
            prefix.push(entry.clone());
        }
        Ok(())
    }

    pub fn check_judgment(&self, j: &Judgment) -> Result<()> {
        match j {
            Judgment::TypeWf(tele, ty) => {
                self.check_telescope(tele)?;
                for ctx in self.case_contexts(tele) {
                    ctx.check_is_type(ty)?;
                }
            }
            Judgment::HasType(tele, tm, ty) => {
                self.check_telescope(tele)?;
                for ctx in self.case_contexts(tele) {
                    ctx.check_is_type(ty)?;
                    ctx.check(tm, ty)?;
                }
            }
            Judgment::DefEq(tele, a, b, ty) => {
                self.check_telescope(tele)?;
                for ctx in self.case_contexts(tele) {
                    ctx.check_is_type(ty)?;
                    ctx.check(a, ty).seg("left side")?;
                    ctx.check(b, ty).seg("right side")?;
                    ctx.conv(a, b, ty)?;
                }
            }
            Judgment::CofHolds(tele, cof) => {
                self.check_telescope(tele)?;
                for ctx in self.case_contexts(tele) {
                    ctx.check_cof(cof)?;
                    if !ctx.holds(cof) {
                        return Err(TypeError::new(format!(
                            "cofibration `{}` does not hold here",
                            print_cof_in(tele, cof)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A single checking case: a telescope plus the interval equations assumed
/// in this disjunct, expressed in the telescope's index space.
struct Ctx<'e> {
    env: &'e Env,
    tele: Telescope,
    atoms: Vec<Atom>,
    absurd: bool,
}

fn shift_atoms(atoms: &[Atom], by: isize) -> Vec<Atom> {
    atoms
        .iter()
        .map(|(l, r)| (crate::syntax::shift_ivl(l, by, 0), crate::syntax::shift_ivl(r, by, 0)))
        .collect()
}

/// Meridian case type of a suspension eliminator, over `[G, a]`: a path
/// over the motive along `merid a` from the north case to the south case.
fn merid_case_ty(motive: &Term, nb: &Term, sb: &Term) -> Term {
    let line = open_under(motive, 2, SubstEntry::Term(papp(merid(var(1)), crate::syntax::ivar(0))));
    path_ty(line, shift(nb, 1, 0), shift(sb, 1, 0))
}

/// Type of the meridian computation witness: a homogeneous path between
/// `<i> elim (merid arg @ i)` and the meridian case at `arg`, inside the
/// path type over the motive line at `merid arg`.
fn merid_beta_ty(motive: &Term, nb: &Term, sb: &Term, me: &Term, arg: &Term) -> Term {
    let line_t = open_under(
        motive,
        1,
        SubstEntry::Term(papp(merid(shift(arg, 1, 0)), crate::syntax::ivar(0))),
    );
    let big_t = path_ty(line_t, nb.clone(), sb.clone());
    let lhs = plam(Term::SuspElim {
        motive: Box::new(shift(motive, 1, 1)),
        north: Box::new(shift(nb, 1, 0)),
        south: Box::new(shift(sb, 1, 0)),
        merid: Box::new(shift(me, 1, 1)),
        scrut: Box::new(papp(merid(shift(arg, 1, 0)), crate::syntax::ivar(0))),
    });
    let rhs = open_term(me, arg.clone());
    path_ty(shift(&big_t, 1, 0), lhs, rhs)
}

impl<'e> Ctx<'e> {
    fn theory(&self) -> &'static IntervalTheory {
        self.env.theory()
    }

    fn show(&self, t: &Term) -> String {
        print_term_in(&self.tele, t)
    }

    fn holds(&self, c: &Cof) -> bool {
        atoms_entail(self.theory(), &self.atoms, c)
    }

    fn ivl_eq(&self, a: &IntervalTerm, b: &IntervalTerm) -> bool {
        atoms_entail_eq(self.theory(), &self.atoms, a, b)
    }

    fn extend(&self, e: Entry) -> Ctx<'e> {
        Ctx {
            env: self.env,
            tele: self.tele.extended(e),
            atoms: shift_atoms(&self.atoms, 1),
            absurd: self.absurd,
        }
    }

    /// Runs `f` once per DNF case of `cof` under a pushed witness entry;
    /// all cases must succeed.
    fn with_witness_cases(
        &self,
        cof: &Cof,
        mut f: impl FnMut(&Ctx<'e>) -> Result<()>,
    ) -> Result<()> {
        for case in dnf(cof) {
            let mut ctx = self.extend(Entry::CofWitness(cof.clone()));
            ctx.atoms.extend(shift_atoms(&case, 1));
            ctx.absurd = ctx.absurd || atoms_unsat(self.theory(), &ctx.atoms);
            f(&ctx)?;
        }
        Ok(())
    }

    /// Runs `f` once per DNF case of `cof` without extending the telescope;
    /// used for boundary conditions stated in the ambient scope.
    fn for_each_case(&self, cof: &Cof, mut f: impl FnMut(&Ctx<'e>) -> Result<()>) -> Result<()> {
        for case in dnf(cof) {
            let mut ctx = Ctx {
                env: self.env,
                tele: self.tele.clone(),
                atoms: self.atoms.clone(),
                absurd: self.absurd,
            };
            ctx.atoms.extend(case);
            ctx.absurd = ctx.absurd || atoms_unsat(self.theory(), &ctx.atoms);
            f(&ctx)?;
        }
        Ok(())
    }

    fn cof_entails_cof(&self, a: &Cof, b: &Cof) -> bool {
        dnf(a).into_iter().all(|case| {
            let mut atoms = self.atoms.clone();
            atoms.extend(case);
            atoms_entail(self.theory(), &atoms, b)
        })
    }

    fn cof_equiv(&self, a: &Cof, b: &Cof) -> bool {
        self.cof_entails_cof(a, b) && self.cof_entails_cof(b, a)
    }

    // Scope and operator checking for interval-level syntax.

    fn check_interval(&self, r: &IntervalTerm) -> Result<()> {
        match r {
            IntervalTerm::E0 | IntervalTerm::E1 => Ok(()),
            IntervalTerm::Var(k) => match self.tele.lookup(*k) {
                Some(Entry::IntervalVar) => Ok(()),
                Some(_) => Err(TypeError::new(format!(
                    "index {k} is not an interval variable"
                ))),
                None => Err(TypeError::new(format!("unbound interval index {k}"))),
            },
            IntervalTerm::Op(op, args) => {
                if !self.theory().operators.contains(op) {
                    return Err(TypeError::new(format!(
                        "operator `{}` is not part of theory {}",
                        op.symbol(),
                        self.theory().name.as_str()
                    )));
                }
                for a in args {
                    self.check_interval(a)?;
                }
                Ok(())
            }
        }
    }

    fn check_cof(&self, c: &Cof) -> Result<()> {
        match c {
            Cof::Top | Cof::Bot => Ok(()),
            Cof::Eq(l, r) => {
                self.check_interval(l)?;
                self.check_interval(r)
            }
            Cof::And(p, q) | Cof::Or(p, q) => {
                self.check_cof(p)?;
                self.check_cof(q)
            }
        }
    }

    // Weak head normalization. Infallible: anything that cannot reduce is
    // returned as it stands. `keep_glue` stops the collapse of a glue type
    // under its held cofibration so callers can inspect the glue structure.

    fn whnf(&self, t: &Term) -> Term {
        self.whnf_mode(t, false)
    }

    fn whnf_keep_glue(&self, t: &Term) -> Term {
        self.whnf_mode(t, true)
    }

    fn whnf_mode(&self, t: &Term, keep_glue: bool) -> Term {
        match t {
            Term::Const(n) => match self.env.defs.get(n) {
                Some(d) => self.whnf_mode(&d.body, keep_glue),
                None => t.clone(),
            },
            Term::App(f, a) => {
                let fw = self.whnf(f);
                if let Term::Lam(b) = &fw {
                    self.whnf_mode(&open_term(b, (**a).clone()), keep_glue)
                } else {
                    Term::App(Box::new(fw), a.clone())
                }
            }
            Term::Fst(p) => {
                let pw = self.whnf(p);
                if let Term::Pair(x, _) = &pw {
                    self.whnf_mode(x, keep_glue)
                } else {
                    Term::Fst(Box::new(pw))
                }
            }
            Term::Snd(p) => {
                let pw = self.whnf(p);
                if let Term::Pair(_, y) = &pw {
                    self.whnf_mode(y, keep_glue)
                } else {
                    Term::Snd(Box::new(pw))
                }
            }
            Term::PApp(p, r) => {
                let pw = self.whnf(p);
                if let Term::PLam(b) = &pw {
                    return self.whnf_mode(&open_interval(b, r.clone()), keep_glue);
                }
                // endpoint law: at a definite endpoint any path equals the
                // endpoint stored in its type
                for (end, left) in [(IntervalTerm::E0, true), (IntervalTerm::E1, false)] {
                    if self.ivl_eq(r, &end) {
                        if let Some(ty) = self.quick_type(&pw) {
                            if let Term::PathTy(_, l, rr) = self.whnf(&ty) {
                                return self.whnf_mode(if left { &l } else { &rr }, keep_glue);
                            }
                        }
                    }
                }
                Term::PApp(Box::new(pw), r.clone())
            }
            Term::El(c) => {
                let cw = self.whnf(c);
                match cw {
                    Term::CPi(a, b) => Term::Pi(Box::new(Term::El(a)), Box::new(Term::El(b))),
                    Term::CSigma(a, b) => {
                        Term::Sigma(Box::new(Term::El(a)), Box::new(Term::El(b)))
                    }
                    Term::CPath(l, x, y) => Term::PathTy(Box::new(Term::El(l)), x, y),
                    Term::CId(a, x, y) => Term::IdTy(Box::new(Term::El(a)), x, y),
                    Term::CUnit => Term::UnitTy,
                    other => Term::El(Box::new(other)),
                }
            }
            Term::Fill { src, dst, line: _, cof, part, cap } => {
                if self.ivl_eq(src, dst) {
                    return self.whnf_mode(cap, keep_glue);
                }
                if self.holds(cof) {
                    return self.whnf_mode(&open_fill_part(part, dst), keep_glue);
                }
                t.clone()
            }
            Term::GlueTy { cof, part_ty, .. } if !keep_glue && self.holds(cof) => {
                self.whnf_mode(&strengthen_witness(part_ty), false)
            }
            Term::GlueIntro { cof, part, .. } if self.holds(cof) => {
                self.whnf_mode(&strengthen_witness(part), keep_glue)
            }
            Term::Unglue(g) => {
                // under the glue cofibration every element is a point of
                // the part type and unglue maps it through the equivalence;
                // consult the type before reducing `g`, which would forget
                // the glue structure
                if let Some(gt) = self.quick_type(g) {
                    if let Term::GlueTy { cof, equiv, .. } = self.whnf_keep_glue(&gt) {
                        if self.holds(&cof) {
                            let f = fst(strengthen_witness(&equiv));
                            return self.whnf_mode(&app(f, (**g).clone()), keep_glue);
                        }
                    }
                }
                let gw = self.whnf(g);
                if let Term::GlueIntro { base, .. } = &gw {
                    return self.whnf_mode(base, keep_glue);
                }
                Term::Unglue(Box::new(gw))
            }
            Term::J { motive, base, scrut } => {
                let sw = self.whnf(scrut);
                if let Term::Refl(_) = &sw {
                    self.whnf_mode(base, keep_glue)
                } else {
                    Term::J { motive: motive.clone(), base: base.clone(), scrut: Box::new(sw) }
                }
            }
            Term::SuspElim { motive, north, south, merid, scrut } => {
                let sw = self.whnf(scrut);
                match sw {
                    Term::North => self.whnf_mode(north, keep_glue),
                    Term::South => self.whnf_mode(south, keep_glue),
                    other => Term::SuspElim {
                        motive: motive.clone(),
                        north: north.clone(),
                        south: south.clone(),
                        merid: merid.clone(),
                        scrut: Box::new(other),
                    },
                }
            }
            Term::SplitTy { p, q, left, right } => {
                if self.holds(p) {
                    self.whnf_mode(&strengthen_witness(left), keep_glue)
                } else if self.holds(q) {
                    self.whnf_mode(&strengthen_witness(right), keep_glue)
                } else {
                    t.clone()
                }
            }
            Term::SplitTm { p, q, left, right, .. } => {
                if self.holds(p) {
                    self.whnf_mode(&strengthen_witness(left), keep_glue)
                } else if self.holds(q) {
                    self.whnf_mode(&strengthen_witness(right), keep_glue)
                } else {
                    t.clone()
                }
            }
            _ => t.clone(),
        }
    }

    /// Type synthesis that trusts well-typedness: used by reduction and
    /// neutral comparison, where the inputs are already checked. Returns
    /// `None` when the shape cannot be synthesized.
    fn quick_type(&self, t: &Term) -> Option<Term> {
        Some(match t {
            Term::Var(k) => match self.tele.lookup(*k)? {
                Entry::TermVar(ty) => shift(ty, (*k + 1) as isize, 0),
                _ => return None,
            },
            Term::Const(n) => self.env.defs.get(n)?.ty.clone(),
            Term::TT => Term::UnitTy,
            Term::CUnit
            | Term::CPi(..)
            | Term::CSigma(..)
            | Term::CPath(..)
            | Term::CId(..) => Term::U,
            Term::Refl(x) => {
                let a = self.quick_type(x)?;
                id_ty(a, (**x).clone(), (**x).clone())
            }
            Term::App(f, a) => match self.whnf(&self.quick_type(f)?) {
                Term::Pi(_, cod) => open_term(&cod, (**a).clone()),
                _ => return None,
            },
            Term::Fst(p) => match self.whnf(&self.quick_type(p)?) {
                Term::Sigma(dom, _) => *dom,
                _ => return None,
            },
            Term::Snd(p) => match self.whnf(&self.quick_type(p)?) {
                Term::Sigma(_, cod) => open_term(&cod, fst((**p).clone())),
                _ => return None,
            },
            Term::PApp(p, r) => match self.whnf(&self.quick_type(p)?) {
                Term::PathTy(line, _, _) => open_interval(&line, r.clone()),
                _ => return None,
            },
            Term::Merid(x) => {
                path_ty(shift(&susp(self.quick_type(x)?), 1, 0), Term::North, Term::South)
            }
            Term::Fill { line, dst, .. } => open_interval(line, dst.clone()),
            Term::Unglue(g) => match self.whnf_keep_glue(&self.quick_type(g)?) {
                Term::GlueTy { base, .. } => *base,
                _ => return None,
            },
            Term::J { motive, scrut, .. } => match self.whnf(&self.quick_type(scrut)?) {
                Term::IdTy(_, _, b) => {
                    open_term(&open_term(motive, shift(scrut, 1, 0)), *b)
                }
                _ => return None,
            },
            Term::SuspElim { motive, scrut, .. } => open_term(motive, (**scrut).clone()),
            Term::MeridBeta { motive, north, south, merid, arg } => {
                merid_beta_ty(motive, north, south, merid, arg)
            }
            Term::AbsurdTm(ty) => (**ty).clone(),
            Term::SplitTm { motive, .. } => strengthen_witness(motive),
            _ => return None,
        })
    }

    // Type formation. Dispatches on source syntax: computed types are never
    // re-checked (instantiation preserves well-formedness).

    fn check_is_type(&self, t: &Term) -> Result<()> {
        if self.absurd {
            return Ok(());
        }
        match t {
            Term::U | Term::UnitTy => Ok(()),
            Term::AbsurdTy => {
                if self.holds(&Cof::Bot) {
                    Ok(())
                } else {
                    Err(TypeError::new("the absurd type requires an inconsistent context"))
                }
            }
            Term::Pi(a, b) | Term::Sigma(a, b) => {
                self.check_is_type(a)?;
                self.extend(Entry::TermVar((**a).clone())).check_is_type(b)
            }
            Term::El(c) => self.check(c, &Term::U),
            Term::IdTy(a, x, y) => {
                self.check_is_type(a)?;
                self.check(x, a)?;
                self.check(y, a)
            }
            Term::PathTy(line, x, y) => {
                self.extend(Entry::IntervalVar).check_is_type(line)?;
                self.check(x, &open_interval(line, IntervalTerm::E0))?;
                self.check(y, &open_interval(line, IntervalTerm::E1))
            }
            Term::SuspTy(a) => self.check_is_type(a),
            Term::GlueTy { base, cof, part_ty, equiv } => {
                self.check_is_type(base).seg("glue base")?;
                self.check_cof(cof)?;
                self.with_witness_cases(cof, |cw| {
                    cw.check_is_type(part_ty).seg("glue part type")?;
                    cw.check(equiv, &equiv_ty(part_ty, &shift(base, 1, 0)))
                        .seg("glue equivalence")
                })
            }
            Term::SplitTy { p, q, left, right } => {
                self.check_cof(p)?;
                self.check_cof(q)?;
                let total = Cof::or(p.clone(), q.clone());
                if !self.holds(&total) {
                    return Err(TypeError::new(format!(
                        "split guards `{}` do not cover this context",
                        print_cof_in(&self.tele, &total)
                    )));
                }
                self.with_witness_cases(p, |cw| cw.check_is_type(left).seg("left branch"))?;
                self.with_witness_cases(q, |cw| cw.check_is_type(right).seg("right branch"))?;
                self.with_witness_cases(&Cof::and(p.clone(), q.clone()), |cw| {
                    cw.conv_ty(left, right).seg("branch compatibility")
                })
            }
            Term::Var(_) | Term::Const(_) => Err(TypeError::new(format!(
                "`{}` is a code; wrap it in El to use it as a type",
                self.show(t)
            ))),
            other => Err(TypeError::new(format!(
                "`{}` is not a type",
                self.show(other)
            ))),
        }
    }

    // Bidirectional checking.

    fn check(&self, t: &Term, ty: &Term) -> Result<()> {
        if self.absurd {
            return Ok(());
        }
        match t {
            Term::Lam(body) => match self.whnf(ty) {
                Term::Pi(dom, cod) => {
                    self.extend(Entry::TermVar(*dom)).check(body, &cod)
                }
                other => Err(TypeError::mismatch(
                    "a lambda needs a function type",
                    self.show(&other),
                    "a lambda".into(),
                )),
            },
            Term::PLam(body) => match self.whnf(ty) {
                Term::PathTy(line, l, r) => {
                    self.extend(Entry::IntervalVar).check(body, &line)?;
                    self.conv(
                        &open_interval(body, IntervalTerm::E0),
                        &l,
                        &open_interval(&line, IntervalTerm::E0),
                    )
                    .seg("left endpoint")?;
                    self.conv(
                        &open_interval(body, IntervalTerm::E1),
                        &r,
                        &open_interval(&line, IntervalTerm::E1),
                    )
                    .seg("right endpoint")
                }
                other => Err(TypeError::mismatch(
                    "a path abstraction needs a path type",
                    self.show(&other),
                    "a path abstraction".into(),
                )),
            },
            Term::Pair(a, b) => match self.whnf(ty) {
                Term::Sigma(dom, cod) => {
                    self.check(a, &dom).seg("first component")?;
                    self.check(b, &open_term(&cod, (**a).clone())).seg("second component")
                }
                other => {
                    // fall back to inference for non-dependent pairs at
                    // whatever the ambient type turns out to be
                    let inferred = self.infer(t)?;
                    self.conv_ty(&inferred, &other)
                }
            },
            Term::North | Term::South => match self.whnf(ty) {
                Term::SuspTy(_) => Ok(()),
                other => Err(TypeError::mismatch(
                    "a pole needs a suspension type",
                    self.show(&other),
                    self.show(t),
                )),
            },
            Term::GlueIntro { cof, base, part } => match self.whnf_keep_glue(ty) {
                Term::GlueTy { base: bty, cof: gcof, part_ty, equiv } => {
                    self.check_cof(cof)?;
                    if !self.cof_equiv(cof, &gcof) {
                        return Err(TypeError::mismatch(
                            "glue cofibration mismatch",
                            print_cof_in(&self.tele, &gcof),
                            print_cof_in(&self.tele, cof),
                        ));
                    }
                    self.check(base, &bty).seg("glue base point")?;
                    self.with_witness_cases(&gcof, |cw| cw.check(part, &part_ty))
                        .seg("glue part")?;
                    self.for_each_case(&gcof, |cc| {
                        cc.conv(
                            &app(fst(strengthen_witness(&equiv)), strengthen_witness(part)),
                            base,
                            &bty,
                        )
                    })
                    .seg("glue boundary")
                }
                other => Err(TypeError::mismatch(
                    "a glue introduction needs a glue type",
                    self.show(&other),
                    "a glue introduction".into(),
                )),
            },
            _ => {
                let inferred = self.infer(t)?;
                self.conv_ty(&inferred, ty)
            }
        }
    }

    fn infer(&self, t: &Term) -> Result<Term> {
        match t {
            Term::Var(k) => match self.tele.lookup(*k) {
                Some(Entry::TermVar(ty)) => Ok(shift(ty, (*k + 1) as isize, 0)),
                Some(Entry::IntervalVar) => {
                    Err(TypeError::new(format!("index {k} is an interval variable, not a term")))
                }
                Some(Entry::CofWitness(_)) => {
                    Err(TypeError::new(format!("index {k} is a cofibration witness, not a term")))
                }
                None => Err(TypeError::new(format!("unbound variable index {k}"))),
            },
            Term::Const(n) => match self.env.defs.get(n) {
                Some(d) => Ok(d.ty.clone()),
                None => Err(TypeError::new(format!("unknown definition `{n}`"))),
            },
            Term::TT => Ok(Term::UnitTy),
            Term::CUnit => Ok(Term::U),
            Term::CPi(a, b) | Term::CSigma(a, b) => {
                self.check(a, &Term::U)?;
                self.extend(Entry::TermVar(Term::El(a.clone()))).check(b, &Term::U)?;
                Ok(Term::U)
            }
            Term::CPath(l, x, y) => {
                self.extend(Entry::IntervalVar).check(l, &Term::U)?;
                self.check(x, &Term::El(Box::new(open_interval(l, IntervalTerm::E0))))?;
                self.check(y, &Term::El(Box::new(open_interval(l, IntervalTerm::E1))))?;
                Ok(Term::U)
            }
            Term::CId(a, x, y) => {
                self.check(a, &Term::U)?;
                self.check(x, &Term::El(a.clone()))?;
                self.check(y, &Term::El(a.clone()))?;
                Ok(Term::U)
            }
            Term::App(f, x) => {
                let ft = self.infer(f)?;
                match self.whnf(&ft) {
                    Term::Pi(dom, cod) => {
                        self.check(x, &dom).seg("argument")?;
                        Ok(open_term(&cod, (**x).clone()))
                    }
                    other => Err(TypeError::mismatch(
                        "applied a value that is not a function",
                        "a function type".into(),
                        self.show(&other),
                    )),
                }
            }
            Term::Fst(p) => match self.whnf(&self.infer(p)?) {
                Term::Sigma(dom, _) => Ok(*dom),
                other => Err(TypeError::mismatch(
                    "projected from a value that is not a pair",
                    "a pair type".into(),
                    self.show(&other),
                )),
            },
            Term::Snd(p) => match self.whnf(&self.infer(p)?) {
                Term::Sigma(_, cod) => Ok(open_term(&cod, fst((**p).clone()))),
                other => Err(TypeError::mismatch(
                    "projected from a value that is not a pair",
                    "a pair type".into(),
                    self.show(&other),
                )),
            },
            Term::Pair(a, b) => {
                let at = self.infer(a)?;
                let bt = self.infer(b)?;
                Ok(Term::Sigma(Box::new(at), Box::new(shift(&bt, 1, 0))))
            }
            Term::Refl(x) => {
                let at = self.infer(x)?;
                Ok(id_ty(at, (**x).clone(), (**x).clone()))
            }
            Term::J { motive, base, scrut } => {
                let st = self.whnf(&self.infer(scrut)?);
                let Term::IdTy(a_ty, a, b) = st else {
                    return Err(TypeError::mismatch(
                        "J eliminates identifications",
                        "an identity type".into(),
                        self.show(&st),
                    ));
                };
                let cx = self.extend(Entry::TermVar((*a_ty).clone()));
                let q_ty = id_ty(shift(&a_ty, 1, 0), shift(&a, 1, 0), var(0));
                cx.extend(Entry::TermVar(q_ty)).check_is_type(motive).seg("J motive")?;
                let base_ty = open_term(&open_term(motive, refl(shift(&a, 1, 0))), (*a).clone());
                self.check(base, &base_ty).seg("J base case")?;
                Ok(open_term(&open_term(motive, shift(scrut, 1, 0)), (*b).clone()))
            }
            Term::PLam(body) => {
                let bt = self.extend(Entry::IntervalVar).infer(body)?;
                Ok(path_ty(
                    bt,
                    open_interval(body, IntervalTerm::E0),
                    open_interval(body, IntervalTerm::E1),
                ))
            }
            Term::PApp(p, r) => {
                self.check_interval(r)?;
                match self.whnf(&self.infer(p)?) {
                    Term::PathTy(line, _, _) => Ok(open_interval(&line, r.clone())),
                    other => Err(TypeError::mismatch(
                        "applied an interval to a value that is not a path",
                        "a path type".into(),
                        self.show(&other),
                    )),
                }
            }
            Term::Fill { src, dst, line, cof, part, cap } => {
                self.check_interval(src)?;
                self.check_interval(dst)?;
                self.check_cof(cof)?;
                self.extend(Entry::IntervalVar).check_is_type(line).seg("filling line")?;
                self.check(cap, &open_interval(line, src.clone())).seg("filling cap")?;
                let part_goal = shift(line, 1, 1);
                self.with_witness_cases(cof, |cw| {
                    cw.extend(Entry::IntervalVar).check(part, &part_goal)
                })
                .seg("partial element")?;
                self.for_each_case(cof, |cc| {
                    cc.conv(
                        &open_fill_part(part, src),
                        cap,
                        &open_interval(line, src.clone()),
                    )
                })
                .seg("cap boundary")?;
                Ok(open_interval(line, dst.clone()))
            }
            Term::Unglue(g) => match self.whnf_keep_glue(&self.infer(g)?) {
                Term::GlueTy { base, .. } => Ok(*base),
                other => Err(TypeError::mismatch(
                    "unglued a value that is not glued",
                    "a glue type".into(),
                    self.show(&other),
                )),
            },
            Term::Merid(x) => {
                let at = self.infer(x)?;
                Ok(path_ty(shift(&susp(at), 1, 0), Term::North, Term::South))
            }
            Term::SuspElim { motive, north, south, merid: me, scrut } => {
                let st = self.whnf(&self.infer(scrut)?);
                let Term::SuspTy(a_ty) = st else {
                    return Err(TypeError::mismatch(
                        "suspension elimination needs a suspension",
                        "a suspension type".into(),
                        self.show(&st),
                    ));
                };
                self.extend(Entry::TermVar(susp((*a_ty).clone())))
                    .check_is_type(motive)
                    .seg("suspension motive")?;
                self.check(north, &open_term(motive, Term::North)).seg("north case")?;
                self.check(south, &open_term(motive, Term::South)).seg("south case")?;
                self.extend(Entry::TermVar((*a_ty).clone()))
                    .check(me, &merid_case_ty(motive, north, south))
                    .seg("meridian case")?;
                Ok(open_term(motive, (**scrut).clone()))
            }
            Term::MeridBeta { motive, north, south, merid: me, arg } => {
                let a_ty = self.infer(arg)?;
                self.extend(Entry::TermVar(susp(a_ty.clone())))
                    .check_is_type(motive)
                    .seg("suspension motive")?;
                self.check(north, &open_term(motive, Term::North)).seg("north case")?;
                self.check(south, &open_term(motive, Term::South)).seg("south case")?;
                self.extend(Entry::TermVar(a_ty))
                    .check(me, &merid_case_ty(motive, north, south))
                    .seg("meridian case")?;
                Ok(merid_beta_ty(motive, north, south, me, arg))
            }
            Term::AbsurdTm(ty) => {
                if !self.holds(&Cof::Bot) {
                    return Err(TypeError::new(
                        "the absurd term requires an inconsistent context",
                    ));
                }
                self.check_is_type(ty)?;
                Ok((**ty).clone())
            }
            Term::SplitTm { p, q, motive, left, right } => {
                self.check_cof(p)?;
                self.check_cof(q)?;
                let total = Cof::or(p.clone(), q.clone());
                if !self.holds(&total) {
                    return Err(TypeError::new(format!(
                        "split guards `{}` do not cover this context",
                        print_cof_in(&self.tele, &total)
                    )));
                }
                self.with_witness_cases(&total, |cw| {
                    cw.check_is_type(motive).seg("split motive")
                })?;
                self.with_witness_cases(p, |cw| cw.check(left, motive).seg("left branch"))?;
                self.with_witness_cases(q, |cw| cw.check(right, motive).seg("right branch"))?;
                self.with_witness_cases(&Cof::and(p.clone(), q.clone()), |cw| {
                    cw.conv(left, right, motive).seg("branch compatibility")
                })?;
                Ok(strengthen_witness(motive))
            }
            Term::Lam(_) => Err(TypeError::new(
                "a bare lambda has no inferable type; it needs a checking context",
            )),
            Term::GlueIntro { .. } => Err(TypeError::new(
                "a glue introduction has no inferable type; it needs a checking context",
            )),
            Term::North | Term::South => Err(TypeError::new(
                "a pole has no inferable type; it needs a checking context",
            )),
            Term::U
            | Term::El(_)
            | Term::Pi(..)
            | Term::Sigma(..)
            | Term::UnitTy
            | Term::IdTy(..)
            | Term::PathTy(..)
            | Term::GlueTy { .. }
            | Term::SuspTy(_)
            | Term::AbsurdTy
            | Term::SplitTy { .. } => Err(TypeError::new(format!(
                "`{}` is a type; types do not have a type",
                self.show(t)
            ))),
        }
    }

    // Conversion. `conv` compares checked terms at a type, eta-expanding at
    // structured types; `conv_ty` compares types; `conv_neutral` compares
    // neutral spines and returns the synthesized type of both sides.

    fn conv_ty(&self, found: &Term, expected: &Term) -> Result<()> {
        // identical terms are convertible at any type; skipping the
        // eta-directed descent keeps large shared subtrees cheap
        if self.absurd || found == expected {
            return Ok(());
        }
        let wa = self.whnf(found);
        let wb = self.whnf(expected);
        match (&wa, &wb) {
            (Term::U, Term::U)
            | (Term::UnitTy, Term::UnitTy)
            | (Term::AbsurdTy, Term::AbsurdTy) => Ok(()),
            (Term::Pi(a1, b1), Term::Pi(a2, b2))
            | (Term::Sigma(a1, b1), Term::Sigma(a2, b2)) => {
                self.conv_ty(a1, a2)?;
                self.extend(Entry::TermVar((**a1).clone())).conv_ty(b1, b2)
            }
            (Term::PathTy(l1, x1, y1), Term::PathTy(l2, x2, y2)) => {
                self.extend(Entry::IntervalVar).conv_ty(l1, l2)?;
                self.conv(x1, x2, &open_interval(l1, IntervalTerm::E0))?;
                self.conv(y1, y2, &open_interval(l1, IntervalTerm::E1))
            }
            (Term::IdTy(a1, x1, y1), Term::IdTy(a2, x2, y2)) => {
                self.conv_ty(a1, a2)?;
                self.conv(x1, x2, a1)?;
                self.conv(y1, y2, a1)
            }
            (Term::SuspTy(a1), Term::SuspTy(a2)) => self.conv_ty(a1, a2),
            (
                Term::GlueTy { base: b1, cof: c1, part_ty: t1, equiv: e1 },
                Term::GlueTy { base: b2, cof: c2, part_ty: t2, equiv: e2 },
            ) => {
                self.conv_ty(b1, b2)?;
                if !self.cof_equiv(c1, c2) {
                    return Err(TypeError::mismatch(
                        "glue cofibrations differ",
                        print_cof_in(&self.tele, c2),
                        print_cof_in(&self.tele, c1),
                    ));
                }
                self.with_witness_cases(c1, |cw| {
                    cw.conv_ty(t1, t2)?;
                    cw.conv(e1, e2, &equiv_ty(t1, &shift(b1, 1, 0)))
                })
            }
            (Term::El(c1), Term::El(c2)) => self.conv(c1, c2, &Term::U),
            _ => Err(TypeError::mismatch(
                "types are not convertible",
                self.show(&wb),
                self.show(&wa),
            )),
        }
    }

    fn conv(&self, a: &Term, b: &Term, ty: &Term) -> Result<()> {
        if self.absurd || a == b {
            return Ok(());
        }
        // eta cases reduce each side once up front and project with the
        // reducing constructors; rebuilding `fst a`/`a x` around the raw
        // terms re-runs the whole reduction of `a` at every level, which
        // is exponential across nested eta descents
        match &self.whnf(ty) {
            Term::Pi(dom, cod) => {
                let aw = self.whnf(a);
                let bw = self.whnf(b);
                let cx = self.extend(Entry::TermVar((**dom).clone()));
                cx.conv(
                    &app_s(&shift(&aw, 1, 0), &var(0)),
                    &app_s(&shift(&bw, 1, 0), &var(0)),
                    cod,
                )
            }
            Term::Sigma(dom, cod) => {
                let aw = self.whnf(a);
                let bw = self.whnf(b);
                self.conv(&fst_s(&aw), &fst_s(&bw), dom)?;
                self.conv(&snd_s(&aw), &snd_s(&bw), &open_term(cod, fst_s(&aw)))
            }
            Term::PathTy(line, _, _) => {
                let aw = self.whnf(a);
                let bw = self.whnf(b);
                let cx = self.extend(Entry::IntervalVar);
                cx.conv(
                    &papp_s(&shift(&aw, 1, 0), crate::syntax::ivar(0)),
                    &papp_s(&shift(&bw, 1, 0), crate::syntax::ivar(0)),
                    line,
                )
            }
            Term::UnitTy | Term::AbsurdTy => Ok(()),
            Term::U => self.conv_code(a, b),
            Term::GlueTy { base, cof, part_ty, .. } => {
                self.conv(&Term::Unglue(Box::new(a.clone())), &Term::Unglue(Box::new(b.clone())), base)?;
                self.with_witness_cases(cof, |cw| {
                    cw.conv(&shift(a, 1, 0), &shift(b, 1, 0), part_ty)
                })
            }
            Term::IdTy(a_ty, _, _) => {
                let wa = self.whnf(a);
                let wb = self.whnf(b);
                match (&wa, &wb) {
                    (Term::Refl(x), Term::Refl(y)) => self.conv(x, y, a_ty),
                    (Term::Refl(_), _) | (_, Term::Refl(_)) => Err(TypeError::mismatch(
                        "terms are not convertible",
                        self.show(&wb),
                        self.show(&wa),
                    )),
                    _ => self.conv_neutral(&wa, &wb).map(|_| ()),
                }
            }
            Term::SuspTy(_) => {
                let wa = self.whnf(a);
                let wb = self.whnf(b);
                match (&wa, &wb) {
                    (Term::North, Term::North) | (Term::South, Term::South) => Ok(()),
                    (Term::North | Term::South, _) | (_, Term::North | Term::South) => {
                        Err(TypeError::mismatch(
                            "terms are not convertible",
                            self.show(&wb),
                            self.show(&wa),
                        ))
                    }
                    _ => self.conv_neutral(&wa, &wb).map(|_| ()),
                }
            }
            _ => self.conv_neutral(&self.whnf(a), &self.whnf(b)).map(|_| ()),
        }
    }

    /// Conversion of universe codes.
    fn conv_code(&self, a: &Term, b: &Term) -> Result<()> {
        let wa = self.whnf(a);
        let wb = self.whnf(b);
        let el = |c: &Term| Term::El(Box::new(c.clone()));
        match (&wa, &wb) {
            (Term::CUnit, Term::CUnit) => Ok(()),
            (Term::CPi(a1, b1), Term::CPi(a2, b2))
            | (Term::CSigma(a1, b1), Term::CSigma(a2, b2)) => {
                self.conv(a1, a2, &Term::U)?;
                self.extend(Entry::TermVar(el(a1))).conv(b1, b2, &Term::U)
            }
            (Term::CPath(l1, x1, y1), Term::CPath(l2, x2, y2)) => {
                self.extend(Entry::IntervalVar).conv(l1, l2, &Term::U)?;
                self.conv(x1, x2, &el(&open_interval(l1, IntervalTerm::E0)))?;
                self.conv(y1, y2, &el(&open_interval(l1, IntervalTerm::E1)))
            }
            (Term::CId(a1, x1, y1), Term::CId(a2, x2, y2)) => {
                self.conv(a1, a2, &Term::U)?;
                self.conv(x1, x2, &el(a1))?;
                self.conv(y1, y2, &el(a1))
            }
            (Term::CUnit | Term::CPi(..) | Term::CSigma(..) | Term::CPath(..) | Term::CId(..), _)
            | (_, Term::CUnit | Term::CPi(..) | Term::CSigma(..) | Term::CPath(..) | Term::CId(..)) => {
                Err(TypeError::mismatch(
                    "codes are not convertible",
                    self.show(&wb),
                    self.show(&wa),
                ))
            }
            _ => self.conv_neutral(&wa, &wb).map(|_| ()),
        }
    }

    /// Compares two weak-head-normal neutrals and returns their common
    /// synthesized type.
    fn conv_neutral(&self, a: &Term, b: &Term) -> Result<Term> {
        let fail = || -> Result<Term> {
            Err(TypeError::mismatch(
                "terms are not convertible",
                self.show(b),
                self.show(a),
            ))
        };
        match (a, b) {
            (Term::Var(k), Term::Var(j)) if k == j => match self.tele.lookup(*k) {
                Some(Entry::TermVar(ty)) => Ok(shift(ty, (*k + 1) as isize, 0)),
                _ => Err(TypeError::new(format!("index {k} is not a term variable"))),
            },
            (Term::App(f, x), Term::App(g, y)) => {
                let ft = self.conv_neutral(f, g)?;
                match self.whnf(&ft) {
                    Term::Pi(dom, cod) => {
                        self.conv(x, y, &dom)?;
                        Ok(open_term(&cod, (**x).clone()))
                    }
                    _ => Err(TypeError::new("application head has no function type")),
                }
            }
            (Term::Fst(p), Term::Fst(q)) => match self.whnf(&self.conv_neutral(p, q)?) {
                Term::Sigma(dom, _) => Ok(*dom),
                _ => Err(TypeError::new("projection head has no pair type")),
            },
            (Term::Snd(p), Term::Snd(q)) => match self.whnf(&self.conv_neutral(p, q)?) {
                Term::Sigma(_, cod) => Ok(open_term(&cod, fst((**p).clone()))),
                _ => Err(TypeError::new("projection head has no pair type")),
            },
            (Term::PApp(p, r), Term::PApp(q, s)) => {
                let pt = match (&**p, &**q) {
                    (Term::Merid(x), Term::Merid(y)) => {
                        let a_ty = self
                            .quick_type(x)
                            .ok_or_else(|| TypeError::new("cannot type a meridian argument"))?;
                        self.conv(x, y, &a_ty)?;
                        path_ty(shift(&susp(a_ty), 1, 0), Term::North, Term::South)
                    }
                    _ => self.conv_neutral(p, q)?,
                };
                match self.whnf(&pt) {
                    Term::PathTy(line, _, _) => {
                        if !self.ivl_eq(r, s) {
                            return Err(TypeError::mismatch(
                                "interval arguments differ",
                                format!("{s}"),
                                format!("{r}"),
                            ));
                        }
                        Ok(open_interval(&line, r.clone()))
                    }
                    _ => Err(TypeError::new("path application head has no path type")),
                }
            }
            (Term::Unglue(g), Term::Unglue(h)) => {
                let gt = self.conv_neutral(g, h)?;
                match self.whnf_keep_glue(&gt) {
                    Term::GlueTy { base, .. } => Ok(*base),
                    _ => Err(TypeError::new("unglue head has no glue type")),
                }
            }
            (
                Term::J { motive: m1, base: b1, scrut: s1 },
                Term::J { motive: m2, base: b2, scrut: s2 },
            ) => {
                let st = self.conv_neutral(s1, s2)?;
                let Term::IdTy(a_ty, x, y) = self.whnf(&st) else {
                    return Err(TypeError::new("J scrutinee has no identity type"));
                };
                let cx = self.extend(Entry::TermVar((*a_ty).clone()));
                let q_ty = id_ty(shift(&a_ty, 1, 0), shift(&x, 1, 0), var(0));
                cx.extend(Entry::TermVar(q_ty)).conv_ty(m1, m2)?;
                let base_ty = open_term(&open_term(m1, refl(shift(&x, 1, 0))), (*x).clone());
                self.conv(b1, b2, &base_ty)?;
                Ok(open_term(&open_term(m1, shift(s1, 1, 0)), (*y).clone()))
            }
            (
                Term::SuspElim { motive: m1, north: n1, south: so1, merid: me1, scrut: s1 },
                Term::SuspElim { motive: m2, north: n2, south: so2, merid: me2, scrut: s2 },
            ) => {
                let st = self.conv_neutral(s1, s2)?;
                let Term::SuspTy(a_ty) = self.whnf(&st) else {
                    return Err(TypeError::new("eliminator scrutinee has no suspension type"));
                };
                self.extend(Entry::TermVar(susp((*a_ty).clone()))).conv_ty(m1, m2)?;
                self.conv(n1, n2, &open_term(m1, Term::North))?;
                self.conv(so1, so2, &open_term(m1, Term::South))?;
                self.extend(Entry::TermVar((*a_ty).clone())).conv(
                    me1,
                    me2,
                    &merid_case_ty(m1, n1, so1),
                )?;
                Ok(open_term(m1, (**s1).clone()))
            }
            (
                Term::MeridBeta { motive: m1, north: n1, south: so1, merid: me1, arg: x1 },
                Term::MeridBeta { motive: m2, north: n2, south: so2, merid: me2, arg: x2 },
            ) => {
                let a_ty = self
                    .quick_type(x1)
                    .ok_or_else(|| TypeError::new("cannot type a meridian argument"))?;
                self.conv(x1, x2, &a_ty)?;
                self.extend(Entry::TermVar(susp(a_ty.clone()))).conv_ty(m1, m2)?;
                self.conv(n1, n2, &open_term(m1, Term::North))?;
                self.conv(so1, so2, &open_term(m1, Term::South))?;
                self.extend(Entry::TermVar(a_ty)).conv(me1, me2, &merid_case_ty(m1, n1, so1))?;
                Ok(merid_beta_ty(m1, n1, so1, me1, x1))
            }
            (
                Term::Fill { src, dst, line, cof, part, cap },
                Term::Fill { src: s2, dst: d2, line: l2, cof: c2, part: p2, cap: k2 },
            ) => {
                if !self.ivl_eq(src, s2) || !self.ivl_eq(dst, d2) {
                    return Err(TypeError::new("filler spans differ"));
                }
                self.extend(Entry::IntervalVar).conv_ty(line, l2)?;
                if !self.cof_equiv(cof, c2) {
                    return Err(TypeError::mismatch(
                        "filler cofibrations differ",
                        print_cof_in(&self.tele, c2),
                        print_cof_in(&self.tele, cof),
                    ));
                }
                let part_goal = shift(line, 1, 1);
                self.with_witness_cases(cof, |cw| {
                    cw.extend(Entry::IntervalVar).conv(part, p2, &part_goal)
                })?;
                self.conv(cap, k2, &open_interval(line, src.clone()))?;
                Ok(open_interval(line, dst.clone()))
            }
            (
                Term::SplitTm { p, q, motive, left, right },
                Term::SplitTm { p: p2, q: q2, motive: m2, left: l2, right: r2 },
            ) => {
                if !self.cof_equiv(p, p2) || !self.cof_equiv(q, q2) {
                    return Err(TypeError::new("split guards differ"));
                }
                let total = Cof::or(p.clone(), q.clone());
                self.with_witness_cases(&total, |cw| cw.conv_ty(motive, m2))?;
                self.with_witness_cases(p, |cw| cw.conv(left, l2, motive))?;
                self.with_witness_cases(q, |cw| cw.conv(right, r2, motive))?;
                Ok(strengthen_witness(motive))
            }
            (Term::AbsurdTm(t1), Term::AbsurdTm(t2)) => {
                self.conv_ty(t1, t2)?;
                Ok((**t1).clone())
            }
            _ => fail(),
        }
    }
}

// File-level checking and reporting.

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ItemStatus {
    Ok,
    Failed,
    ExpectedFailure,
    UnexpectedSuccess,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureInfo {
    pub path: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<String>,
    pub message: String,
}

impl From<TypeError> for FailureInfo {
    fn from(e: TypeError) -> FailureInfo {
        FailureInfo { path: e.path, expected: e.expected, found: e.found, message: e.message }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub definition: String,
    pub status: ItemStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub theory: String,
    pub ok: bool,
    pub items: Vec<ItemReport>,
}

pub struct FileOutcome {
    pub env: Env,
    pub report: CheckReport,
}

fn grade(definition: String, outcome: Option<TypeError>, must_fail: bool, ok: &mut bool) -> ItemReport {
    match (outcome, must_fail) {
        (None, false) => ItemReport { definition, status: ItemStatus::Ok, failure: None },
        (Some(e), false) => {
            *ok = false;
            ItemReport { definition, status: ItemStatus::Failed, failure: Some(e.into()) }
        }
        (Some(e), true) => ItemReport {
            definition,
            status: ItemStatus::ExpectedFailure,
            failure: Some(e.into()),
        },
        (None, true) => {
            *ok = false;
            ItemReport { definition, status: ItemStatus::UnexpectedSuccess, failure: None }
        }
    }
}

/// Checks a parsed file top to bottom. Failed definitions are reported and
/// skipped; later items see only the definitions that checked.
pub fn check_file(file: &SourceFile) -> Result<FileOutcome> {
    let theory = file
        .theory
        .ok_or_else(|| TypeError::new("missing #theory directive"))?;
    let mut env = Env::new(theory);
    let mut items = Vec::new();
    let mut ok = true;
    for item in &file.items {
        match item {
            FileItem::Def { name, ty, body, must_fail } => {
                let outcome = env.define(name, ty.clone(), body.clone()).err();
                items.push(grade(name.clone(), outcome, *must_fail, &mut ok));
            }
            FileItem::Check { judgment, must_fail } => {
                let label = print_judgment(judgment);
                let outcome = env.check_judgment(judgment).err();
                items.push(grade(label, outcome, *must_fail, &mut ok));
            }
        }
    }
    Ok(FileOutcome { env, report: CheckReport { theory: theory.as_str().to_string(), ok, items } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::parse_file;

    fn run(src: &str) -> CheckReport {
        let file = parse_file(src).unwrap_or_else(|e| panic!("parse error: {e}\n{src}"));
        check_file(&file).unwrap_or_else(|e| panic!("file error: {e}")).report
    }

    fn assert_ok(src: &str) {
        let report = run(src);
        for item in &report.items {
            assert!(
                matches!(item.status, ItemStatus::Ok | ItemStatus::ExpectedFailure),
                "item `{}` unexpectedly {:?}: {:?}",
                item.definition,
                item.status,
                item.failure
            );
        }
        assert!(report.ok);
    }

    #[test]
    fn functions_pairs_and_eta() {
        assert_ok(
            "#theory cart
def idfun : (A : U) -> El A -> El A = \\A. \\x. x
def swap : (A : U) -> (B : U) -> El A * El B -> El B * El A
  = \\A. \\B. \\p. (p.2 , p.1)
#check (\\A. \\x. idfun A x) = idfun : (A : U) -> El A -> El A
#check (\\A. \\B. \\p. (p.1 , p.2)) = (\\A. \\B. \\p. p)
  : (A : U) -> (B : U) -> El A * El B -> El A * El B
#check tt = tt : Unit
#check (\\x. tt) = (\\x. x) : Unit -> Unit
#fail
#check tt : U
#fail
def bad : Unit = \\x. x",
        );
    }

    #[test]
    fn universe_codes_decode() {
        assert_ok(
            "#theory cart
def code : U = c-pi c-unit (x. c-unit)
def use : El code = \\x. tt
#check use tt = tt : Unit
def pathcode : U = c-path (i. c-unit) tt tt
def p : El pathcode = <i> tt
#fail
def badcode : U = c-path (i. c-unit) tt (\\x. x)",
        );
    }

    #[test]
    fn paths_endpoints_and_eta() {
        assert_ok(
            "#theory cart
def constpath : (A : U) -> (a : El A) -> a ~[El A] a = \\A. \\a. <i> a
def endpoint0 : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> Unit -> El A
  = \\A. \\a. \\b. \\p. \\u. p @ 0
#check (\\A. \\a. \\b. \\p. \\u. a)
  = endpoint0 : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> Unit -> El A
#check (\\A. \\a. \\b. \\p. <i> p @ i) = (\\A. \\a. \\b. \\p. p)
  : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> a ~[El A] b
#fail
#check (\\A. \\a. \\b. \\p. a) = (\\A. \\a. \\b. \\p. b)
  : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> El A",
        );
    }

    #[test]
    fn fills_reduce_at_the_source_and_under_the_cofibration() {
        assert_ok(
            "#theory cart
-- coe over a degenerate span is the cap
#check (\\x. coe^{0->0} (i. Unit) x) = (\\x. x) : Unit -> Unit
-- a fill whose cofibration holds is its partial element at the target
def f : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> El A
  = \\A. \\a. \\b. \\p. fill^{0->1} (i. El A) [0 = 0 -> (i. p @ i)] a
#check f = (\\A. \\a. \\b. \\p. p @ 1) : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> El A
#check f = (\\A. \\a. \\b. \\p. b) : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> El A
-- boundary violation: the partial element disagrees with the cap
#fail
def g : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> El A
  = \\A. \\a. \\b. \\p. fill^{0->1} (i. El A) [0 = 0 -> (i. b)] a",
        );
    }

    #[test]
    fn split_terms_need_decided_guards() {
        assert_ok(
            "#theory cart
def pick : (A : U) -> (a : El A) -> a ~[El A] a
  = \\A. \\a. <i> fill^{0->1} (j. El A)
      [i = 0 -> (j. a) | i = 1 -> (j. a)] a
#fail
def stuck : (A : U) -> (a : El A) -> Unit -> El A
  = \\A. \\a. \\u. split-tm (El A) [0 = 1 -> a | 1 = 0 -> a]",
        );
    }

    #[test]
    fn absurdity_is_guarded() {
        assert_ok(
            "#theory cart
-- an absurd branch may produce anything
def useless : (A : U) -> (i : U) -> Unit = \\A. \\i. tt
#fail
def bad : Unit = absurd-tm Unit",
        );
    }

    #[test]
    fn suspension_computation() {
        assert_ok(
            "#theory cart
def collapse : (A : U) -> Susp (El A) -> Unit
  = \\A. \\s. susp-elim (t. Unit) tt tt (x. <i> tt) s
def loop : (A : U) -> (a : El A) -> north ~[Susp (El A)] south
  = \\A. \\a. merid a
#check (\\A. \\a. (merid a) @ 0) = (\\A. \\a. north)
  : (A : U) -> (a : El A) -> Susp (El A)
def mb : (A : U) -> (a : El A) ->
    (<i> susp-elim (t. Susp (El A)) north south (x. merid x) ((merid a) @ i))
      ~[(north ~[Susp (El A)] south)] (merid a)
  = \\A. \\a. merid-beta (t. Susp (El A)) north south (x. merid x) a",
        );
    }

    #[test]
    fn identity_elimination() {
        assert_ok(
            "#theory cart
def transport : (A : U) -> (P : El A -> U) -> (a : El A) -> (b : El A) ->
    Id (El A) a b -> El (P a) -> El (P b)
  = \\A. \\P. \\a. \\b. \\q. \\x. J (y. r. El (P a) -> El (P y)) (\\z. z) q x
#check (\\A. \\P. \\a. \\x. transport A P a a (refl a) x)
  = (\\A. \\P. \\a. \\x. x)
  : (A : U) -> (P : El A -> U) -> (a : El A) -> (x : El (P a)) -> El (P a)",
        );
    }

    #[test]
    fn glue_round_trip() {
        // the identity equivalence glued over a held cofibration: the glue
        // type collapses to its part, the intro checks its boundary, and
        // unglue computes through the equivalence
        let mut env = Env::new(TheoryName::Cart);
        let pole_ty = susp(Term::UnitTy);
        let e = crate::derived::id_equiv(&pole_ty);
        let ety = equiv_ty(&pole_ty, &pole_ty);
        env.define("idequiv", ety, e).expect("identity equivalence checks");
        let glue_ty = Term::GlueTy {
            base: Box::new(pole_ty.clone()),
            cof: Cof::Top,
            part_ty: Box::new(pole_ty.clone()),
            equiv: Box::new(Term::Const("idequiv".into())),
        };
        env.check_judgment(&Judgment::TypeWf(Telescope::new(), glue_ty.clone()))
            .expect("glue type forms");
        let intro = Term::GlueIntro {
            cof: Cof::Top,
            base: Box::new(Term::North),
            part: Box::new(Term::North),
        };
        env.define("gpt", glue_ty, intro).expect("glue intro checks");
        env.check_judgment(&Judgment::DefEq(
            Telescope::new(),
            Term::Unglue(Box::new(Term::Const("gpt".into()))),
            Term::North,
            pole_ty,
        ))
        .expect("unglue computes");
    }

    #[test]
    fn derived_contractibility_gadgets_check() {
        let mut env = Env::new(TheoryName::Cart);
        let claim = crate::derived::is_contr(&crate::derived::singleton_ty(
            &Term::UnitTy,
            &Term::TT,
        ));
        let witness = crate::derived::singleton_contr(&Term::UnitTy, &Term::TT);
        env.define("sing", claim, witness).expect("singletons contract");
        let e = crate::derived::id_equiv(&Term::UnitTy);
        env.define("ideq", equiv_ty(&Term::UnitTy, &Term::UnitTy), e)
            .expect("identity is an equivalence");
    }

    #[test]
    fn derived_path_algebra_checks() {
        // in a context with A : U, a b : El A, p : a ~ b
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::TermVar(Term::El(Box::new(var(0)))));
        tele.push(Entry::TermVar(Term::El(Box::new(var(1)))));
        tele.push(Entry::TermVar(path_ty(
            Term::El(Box::new(var(3))),
            var(1),
            var(0),
        )));
        let el_a = Term::El(Box::new(var(3)));
        let a = var(2);
        let b = var(1);
        let p = var(0);
        let env = Env::new(TheoryName::Cart);
        let sym = crate::derived::sym(&el_a, &a, &p);
        env.check_judgment(&Judgment::HasType(
            tele.clone(),
            sym,
            path_ty(shift(&el_a, 1, 0), b.clone(), a.clone()),
        ))
        .expect("sym lands backwards");
        let tr = crate::derived::trans(&el_a, &a, &p, &crate::derived::refl_path(&b));
        env.check_judgment(&Judgment::HasType(
            tele.clone(),
            tr,
            path_ty(shift(&el_a, 1, 0), a.clone(), b.clone()),
        ))
        .expect("trans lands forwards");
        // sym is an involution up to judgmental equality at each endpoint:
        // sym (sym p) and p agree at 0 and 1
        let symsym = {
            let s1 = crate::derived::sym(&el_a, &a, &p);
            crate::derived::sym(&el_a, &b, &s1)
        };
        env.check_judgment(&Judgment::DefEq(
            tele.clone(),
            papp(symsym, crate::syntax::i0()),
            a.clone(),
            el_a.clone(),
        ))
        .expect("double symmetry fixes the left endpoint");
    }

    #[test]
    fn report_serialization_shape() {
        let report = run("#theory dm\n#fail\ndef broken : Unit = tt tt\n");
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["theory"], "dm");
        assert_eq!(json["ok"], true);
        assert_eq!(json["items"][0]["status"], "expected-failure");
        assert!(json["items"][0]["failure"]["message"].is_string());
    }

    #[test]
    fn de_morgan_interval_operators_in_fills() {
        assert_ok(
            "#theory dm
def conn : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) ->
    Path (i. (p @ i) ~[El A] b) p (<j> b)
  = \\A. \\a. \\b. \\p. <i> <j> p @ (i \\/ j)
def symneg : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> b ~[El A] a
  = \\A. \\a. \\b. \\p. <i> p @ ~i
#check (\\A. \\a. \\b. \\p. <i> (symneg A a b p) @ ~i) = (\\A. \\a. \\b. \\p. <i> p @ ~(~i))
  : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> a ~[El A] b
#check (\\A. \\a. \\b. \\p. <i> p @ ~(~i)) = (\\A. \\a. \\b. \\p. p)
  : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> a ~[El A] b",
        );
    }

    #[test]
    fn cart_rejects_foreign_operators() {
        let report = run(
            "#theory cart
#fail
def bad : (A : U) -> (a : El A) -> (b : El A) -> (p : a ~[El A] b) -> b ~[El A] a
  = \\A. \\a. \\b. \\p. <i> p @ ~i",
        );
        assert!(report.ok);
    }
}
