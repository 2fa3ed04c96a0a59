//! Precedence-aware printing. `parse(print(t))` returns `t` exactly; the
//! round trip is enforced by tests on the corpus and on generated terms.

use super::{shift, Entry, Judgment, Telescope, Term};
use crate::cofsolve::Cof;
use crate::interval::{IntervalTerm, OpSym};
use std::collections::BTreeSet;
use std::fmt::Write;

// Term precedence levels, loosest first. A construct parenthesizes itself
// when printed into a context demanding a tighter level.
const LAM: u8 = 0;
const ARROW: u8 = 1;
const STAR: u8 = 2;
const PSUGAR: u8 = 3;
const APP: u8 = 4;
const ATOM: u8 = 5;

#[derive(Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Term,
    Interval,
    Witness,
}

struct Printer {
    /// Outermost first; parallel to the telescope under print.
    scope: Vec<(String, NameKind)>,
    /// Names that fresh binders must avoid: globals referenced by the term.
    avoid: BTreeSet<String>,
}

fn collect_consts(t: &Term, out: &mut BTreeSet<String>) {
    use Term::*;
    match t {
        Const(c) => {
            out.insert(c.clone());
        }
        Var(_) | U | CUnit | UnitTy | TT | North | South | AbsurdTy => {}
        El(a) | Lam(a) | Fst(a) | Snd(a) | Refl(a) | PLam(a) | Unglue(a) | SuspTy(a)
        | Merid(a) | AbsurdTm(a) | PApp(a, _) => collect_consts(a, out),
        CPi(a, b) | CSigma(a, b) | Pi(a, b) | Sigma(a, b) | Pair(a, b) | App(a, b) => {
            collect_consts(a, out);
            collect_consts(b, out);
        }
        CPath(a, b, c) | CId(a, b, c) | IdTy(a, b, c) | PathTy(a, b, c) => {
            collect_consts(a, out);
            collect_consts(b, out);
            collect_consts(c, out);
        }
        J { motive, base, scrut } => {
            collect_consts(motive, out);
            collect_consts(base, out);
            collect_consts(scrut, out);
        }
        Fill { line, part, cap, .. } => {
            collect_consts(line, out);
            collect_consts(part, out);
            collect_consts(cap, out);
        }
        GlueTy { base, part_ty, equiv, .. } => {
            collect_consts(base, out);
            collect_consts(part_ty, out);
            collect_consts(equiv, out);
        }
        GlueIntro { base, part, .. } => {
            collect_consts(base, out);
            collect_consts(part, out);
        }
        SuspElim { motive, north, south, merid, scrut } => {
            for t in [motive, north, south, merid, scrut] {
                collect_consts(t, out);
            }
        }
        MeridBeta { motive, north, south, merid, arg } => {
            for t in [motive, north, south, merid, arg] {
                collect_consts(t, out);
            }
        }
        SplitTy { left, right, .. } => {
            collect_consts(left, out);
            collect_consts(right, out);
        }
        SplitTm { motive, left, right, .. } => {
            collect_consts(motive, out);
            collect_consts(left, out);
            collect_consts(right, out);
        }
    }
}

/// True when the innermost binder of `body` is referenced, i.e. Var(0) or
/// interval Var(0) occurs at depth. Used to pick sugared non-dependent
/// forms, whose bodies are then safe to strengthen.
pub fn uses_binder(body: &Term) -> bool {
    fn refs(t: &Term, depth: usize) -> bool {
        use Term::*;
        let iv = |r: &IntervalTerm| {
            let mut vars = BTreeSet::new();
            r.vars(&mut vars);
            vars.contains(&depth)
        };
        let cf = |c: &Cof| {
            let mut vars = BTreeSet::new();
            c.vars(&mut vars);
            vars.contains(&depth)
        };
        match t {
            Var(k) => *k == depth,
            Const(_) | U | CUnit | UnitTy | TT | North | South | AbsurdTy => false,
            Lam(b) | PLam(b) => refs(b, depth + 1),
            El(a) | Fst(a) | Snd(a) | Refl(a) | Unglue(a) | SuspTy(a) | Merid(a)
            | AbsurdTm(a) => refs(a, depth),
            PApp(a, r) => refs(a, depth) || iv(r),
            CPi(a, b) | CSigma(a, b) | Pi(a, b) | Sigma(a, b) => {
                refs(a, depth) || refs(b, depth + 1)
            }
            Pair(a, b) | App(a, b) => refs(a, depth) || refs(b, depth),
            CPath(l, p, q) | PathTy(l, p, q) => {
                refs(l, depth + 1) || refs(p, depth) || refs(q, depth)
            }
            CId(a, x, y) | IdTy(a, x, y) => refs(a, depth) || refs(x, depth) || refs(y, depth),
            J { motive, base, scrut } => {
                refs(motive, depth + 2) || refs(base, depth) || refs(scrut, depth)
            }
            Fill { src, dst, line, cof, part, cap } => {
                iv(src)
                    || iv(dst)
                    || refs(line, depth + 1)
                    || cf(cof)
                    || refs(part, depth + 2)
                    || refs(cap, depth)
            }
            GlueTy { base, cof, part_ty, equiv } => {
                refs(base, depth) || cf(cof) || refs(part_ty, depth + 1) || refs(equiv, depth + 1)
            }
            GlueIntro { cof, base, part } => {
                cf(cof) || refs(base, depth) || refs(part, depth + 1)
            }
            SuspElim { motive, north, south, merid, scrut } => {
                refs(motive, depth + 1)
                    || refs(north, depth)
                    || refs(south, depth)
                    || refs(merid, depth + 1)
                    || refs(scrut, depth)
            }
            MeridBeta { motive, north, south, merid, arg } => {
                refs(motive, depth + 1)
                    || refs(north, depth)
                    || refs(south, depth)
                    || refs(merid, depth + 1)
                    || refs(arg, depth)
            }
            SplitTy { p, q, left, right } => {
                cf(p) || cf(q) || refs(left, depth + 1) || refs(right, depth + 1)
            }
            SplitTm { p, q, motive, left, right } => {
                cf(p)
                    || cf(q)
                    || refs(motive, depth + 1)
                    || refs(left, depth + 1)
                    || refs(right, depth + 1)
            }
        }
    }
    refs(body, 0)
}

impl Printer {
    fn new(avoid: BTreeSet<String>) -> Printer {
        Printer { scope: Vec::new(), avoid }
    }

    fn fresh(&self, kind: NameKind) -> String {
        if kind == NameKind::Witness {
            return "_".to_string();
        }
        let prefix = match kind {
            NameKind::Term => "x",
            NameKind::Interval => "i",
            NameKind::Witness => unreachable!(),
        };
        let mut n = self.scope.iter().filter(|(_, k)| *k == kind).count();
        loop {
            let cand = format!("{prefix}{n}");
            let taken = self.avoid.contains(&cand) || self.scope.iter().any(|(s, _)| *s == cand);
            if !taken {
                return cand;
            }
            n += 1;
        }
    }

    fn name_of(&self, k: usize) -> String {
        let n = self.scope.len();
        if k < n {
            self.scope[n - 1 - k].0.clone()
        } else {
            format!("?v{}", k - n)
        }
    }

    fn with_binder<R>(&mut self, kind: NameKind, f: impl FnOnce(&mut Printer, &str) -> R) -> R {
        let name = self.fresh(kind);
        self.scope.push((name.clone(), kind));
        let r = f(self, &name);
        self.scope.pop();
        r
    }

    fn interval(&self, r: &IntervalTerm, prec: u8, out: &mut String) {
        // interval precedence: join 0, meet 1, neg 2, atoms 3
        let level = match r {
            IntervalTerm::Op(OpSym::Join, _) => 0,
            IntervalTerm::Op(OpSym::Meet, _) => 1,
            IntervalTerm::Op(OpSym::Neg, _) => 2,
            _ => 3,
        };
        let parens = level < prec;
        if parens {
            out.push('(');
        }
        match r {
            IntervalTerm::Var(k) => out.push_str(&self.name_of(*k)),
            IntervalTerm::E0 => out.push('0'),
            IntervalTerm::E1 => out.push('1'),
            IntervalTerm::Op(OpSym::Neg, args) => {
                out.push('~');
                self.interval(&args[0], 2, out);
            }
            IntervalTerm::Op(op, args) => {
                let (lv, sym) = match op {
                    OpSym::Join => (0, " \\/ "),
                    OpSym::Meet => (1, " /\\ "),
                    OpSym::Neg => unreachable!(),
                };
                self.interval(&args[0], lv, out);
                out.push_str(sym);
                self.interval(&args[1], lv + 1, out);
            }
        }
        if parens {
            out.push(')');
        }
    }

    fn cof(&self, c: &Cof, prec: u8, out: &mut String) {
        // cof precedence: or 0, and 1, atoms 2
        let level = match c {
            Cof::Or(..) => 0,
            Cof::And(..) => 1,
            _ => 2,
        };
        let parens = level < prec;
        if parens {
            out.push('(');
        }
        match c {
            Cof::Eq(l, r) => {
                self.interval(l, 0, out);
                out.push_str(" = ");
                self.interval(r, 0, out);
            }
            Cof::Top => out.push_str("top"),
            Cof::Bot => out.push_str("bot"),
            Cof::And(p, q) => {
                self.cof(p, 1, out);
                out.push_str(" & ");
                self.cof(q, 2, out);
            }
            Cof::Or(p, q) => {
                self.cof(p, 0, out);
                out.push_str(" | ");
                self.cof(q, 1, out);
            }
        }
        if parens {
            out.push(')');
        }
    }

    /// `(x. body)` with a binder of the given kinds, outermost first.
    fn binder(&mut self, kinds: &[NameKind], body: &Term, out: &mut String) {
        out.push('(');
        self.binder_names(kinds, body, out);
        out.push(')');
    }

    fn binder_names(&mut self, kinds: &[NameKind], body: &Term, out: &mut String) {
        match kinds.split_first() {
            None => self.term(body, LAM, out),
            Some((k, rest)) => self.with_binder(*k, |pr, name| {
                out.push_str(name);
                out.push_str(". ");
                pr.binder_names(rest, body, out);
            }),
        }
    }

    fn atom_arg(&mut self, t: &Term, out: &mut String) {
        out.push(' ');
        self.term(t, ATOM, out);
    }

    /// Is this `Fill` the canonical empty-system coercion?
    fn as_coe(t: &Term) -> Option<(&IntervalTerm, &IntervalTerm, &Term, &Term)> {
        if let Term::Fill { src, dst, line, cof, part, cap } = t {
            if *cof == Cof::Bot {
                if let Term::AbsurdTm(ty) = &**part {
                    if **ty == super::shift_from(line, 1, 1) {
                        return Some((src, dst, line, cap));
                    }
                }
            }
        }
        None
    }

    fn term(&mut self, t: &Term, prec: u8, out: &mut String) {
        use Term::*;
        let level = match t {
            Lam(_) | PLam(_) => LAM,
            Pi(..) => ARROW,
            Sigma(..) => STAR,
            PathTy(l, _, _) if !uses_binder(l) => PSUGAR,
            Var(_) | Const(_) | U | CUnit | UnitTy | TT | North | South | AbsurdTy
            | Pair(..) | Fst(_) | Snd(_) => ATOM,
            _ => APP,
        };
        if level < prec {
            out.push('(');
            self.term(t, LAM, out);
            out.push(')');
            return;
        }
        match t {
            Var(k) => out.push_str(&self.name_of(*k)),
            Const(c) => out.push_str(c),
            U => out.push('U'),
            El(a) => {
                out.push_str("El");
                self.atom_arg(a, out);
            }
            CUnit => out.push_str("c-unit"),
            CPi(a, b) | CSigma(a, b) => {
                out.push_str(if matches!(t, CPi(..)) { "c-pi" } else { "c-sigma" });
                self.atom_arg(a, out);
                out.push(' ');
                self.binder(&[NameKind::Term], b, out);
            }
            CPath(l, p, q) => {
                out.push_str("c-path ");
                self.binder(&[NameKind::Interval], l, out);
                self.atom_arg(p, out);
                self.atom_arg(q, out);
            }
            CId(a, x, y) => {
                out.push_str("c-id");
                self.atom_arg(a, out);
                self.atom_arg(x, out);
                self.atom_arg(y, out);
            }
            Pi(a, b) => {
                if uses_binder(b) {
                    self.with_binder(NameKind::Term, |pr, name| {
                        // the binder name must be chosen before printing the
                        // domain, but the domain does not see it
                        out.push('(');
                        out.push_str(name);
                        out.push_str(" : ");
                        let mut dom = String::new();
                        pr.scope.pop();
                        pr.term(a, LAM, &mut dom);
                        pr.scope.push((name.to_string(), NameKind::Term));
                        out.push_str(&dom);
                        out.push_str(") -> ");
                        pr.term(b, ARROW, out);
                    });
                } else {
                    self.term(a, STAR, out);
                    out.push_str(" -> ");
                    self.term(&shift(b, -1, 0), ARROW, out);
                }
            }
            Sigma(a, b) => {
                if uses_binder(b) {
                    self.with_binder(NameKind::Term, |pr, name| {
                        out.push('(');
                        out.push_str(name);
                        out.push_str(" : ");
                        let mut dom = String::new();
                        pr.scope.pop();
                        pr.term(a, LAM, &mut dom);
                        pr.scope.push((name.to_string(), NameKind::Term));
                        out.push_str(&dom);
                        out.push_str(") * ");
                        pr.term(b, STAR, out);
                    });
                } else {
                    self.term(a, PSUGAR, out);
                    out.push_str(" * ");
                    self.term(&shift(b, -1, 0), STAR, out);
                }
            }
            Lam(b) => self.with_binder(NameKind::Term, |pr, name| {
                out.push('\\');
                out.push_str(name);
                out.push_str(". ");
                pr.term(b, LAM, out);
            }),
            App(f, x) => {
                self.term(f, APP, out);
                self.atom_arg(x, out);
            }
            Pair(a, b) => {
                out.push('(');
                self.term(a, LAM, out);
                out.push_str(" , ");
                self.term(b, LAM, out);
                out.push(')');
            }
            Fst(a) => {
                self.term(a, ATOM, out);
                out.push_str(".1");
            }
            Snd(a) => {
                self.term(a, ATOM, out);
                out.push_str(".2");
            }
            UnitTy => out.push_str("Unit"),
            TT => out.push_str("tt"),
            IdTy(a, x, y) => {
                out.push_str("Id");
                self.atom_arg(a, out);
                self.atom_arg(x, out);
                self.atom_arg(y, out);
            }
            Refl(a) => {
                out.push_str("refl");
                self.atom_arg(a, out);
            }
            J { motive, base, scrut } => {
                out.push_str("J ");
                self.binder(&[NameKind::Term, NameKind::Term], motive, out);
                self.atom_arg(base, out);
                self.atom_arg(scrut, out);
            }
            PathTy(l, a, b) => {
                if uses_binder(l) {
                    out.push_str("Path ");
                    self.binder(&[NameKind::Interval], l, out);
                    self.atom_arg(a, out);
                    self.atom_arg(b, out);
                } else {
                    self.term(a, APP, out);
                    out.push_str(" ~[");
                    self.term(&shift(l, -1, 0), LAM, out);
                    out.push_str("] ");
                    self.term(b, APP, out);
                }
            }
            PLam(b) => self.with_binder(NameKind::Interval, |pr, name| {
                out.push('<');
                out.push_str(name);
                out.push_str("> ");
                pr.term(b, LAM, out);
            }),
            PApp(p, r) => {
                self.term(p, APP, out);
                out.push_str(" @ ");
                self.interval(r, 0, out);
            }
            Fill { src, dst, line, cof, part, cap } => {
                if let Some((s, d, l, c)) = Printer::as_coe(t) {
                    out.push_str("coe^{");
                    self.interval(s, 0, out);
                    out.push_str("->");
                    self.interval(d, 0, out);
                    out.push_str("} ");
                    self.binder(&[NameKind::Interval], l, out);
                    self.atom_arg(c, out);
                    return;
                }
                out.push_str("fill^{");
                self.interval(src, 0, out);
                out.push_str("->");
                self.interval(dst, 0, out);
                out.push_str("} ");
                self.binder(&[NameKind::Interval], line, out);
                out.push_str(" [");
                self.cof(cof, 1, out);
                out.push_str(" -> ");
                // the surface binder shows only the interval; the witness
                // entry is anonymous
                self.with_binder(NameKind::Witness, |pr, _| {
                    pr.binder(&[NameKind::Interval], part, out);
                });
                out.push(']');
                self.atom_arg(cap, out);
            }
            GlueTy { base, cof, part_ty, equiv } => {
                out.push_str("Glue");
                self.atom_arg(base, out);
                out.push_str(" [");
                self.cof(cof, 1, out);
                out.push_str(" -> ");
                self.with_binder(NameKind::Witness, |pr, _| {
                    out.push('(');
                    pr.term(part_ty, LAM, out);
                    out.push_str(" , ");
                    pr.term(equiv, LAM, out);
                    out.push(')');
                });
                out.push(']');
            }
            GlueIntro { cof, base, part } => {
                out.push_str("glue");
                self.atom_arg(base, out);
                out.push_str(" [");
                self.cof(cof, 1, out);
                out.push_str(" -> ");
                self.with_binder(NameKind::Witness, |pr, _| {
                    pr.term(part, LAM, out);
                });
                out.push(']');
            }
            Unglue(g) => {
                out.push_str("unglue");
                self.atom_arg(g, out);
            }
            SuspTy(a) => {
                out.push_str("Susp");
                self.atom_arg(a, out);
            }
            North => out.push_str("north"),
            South => out.push_str("south"),
            Merid(a) => {
                out.push_str("merid");
                self.atom_arg(a, out);
            }
            SuspElim { motive, north, south, merid, scrut } => {
                out.push_str("susp-elim ");
                self.binder(&[NameKind::Term], motive, out);
                self.atom_arg(north, out);
                self.atom_arg(south, out);
                out.push(' ');
                self.binder(&[NameKind::Term], merid, out);
                self.atom_arg(scrut, out);
            }
            MeridBeta { motive, north, south, merid, arg } => {
                out.push_str("merid-beta ");
                self.binder(&[NameKind::Term], motive, out);
                self.atom_arg(north, out);
                self.atom_arg(south, out);
                out.push(' ');
                self.binder(&[NameKind::Term], merid, out);
                self.atom_arg(arg, out);
            }
            AbsurdTy => out.push_str("absurd-ty"),
            AbsurdTm(ty) => {
                out.push_str("absurd-tm");
                self.atom_arg(ty, out);
            }
            SplitTy { p, q, left, right } => {
                out.push_str("split-ty [");
                self.cof(p, 1, out);
                out.push_str(" -> ");
                self.with_binder(NameKind::Witness, |pr, _| pr.term(left, LAM, out));
                out.push_str(" | ");
                self.cof(q, 1, out);
                out.push_str(" -> ");
                self.with_binder(NameKind::Witness, |pr, _| pr.term(right, LAM, out));
                out.push(']');
            }
            SplitTm { p, q, motive, left, right } => {
                out.push_str("split-tm ");
                self.with_binder(NameKind::Witness, |pr, _| pr.term(motive, ATOM, out));
                out.push_str(" [");
                self.cof(p, 1, out);
                out.push_str(" -> ");
                self.with_binder(NameKind::Witness, |pr, _| pr.term(left, LAM, out));
                out.push_str(" | ");
                self.cof(q, 1, out);
                out.push_str(" -> ");
                self.with_binder(NameKind::Witness, |pr, _| pr.term(right, LAM, out));
                out.push(']');
            }
        }
    }
}

fn scope_of(tele: &Telescope, avoid: &BTreeSet<String>) -> Printer {
    let mut pr = Printer::new(avoid.clone());
    for e in &tele.entries {
        let kind = match e {
            Entry::TermVar(_) => NameKind::Term,
            Entry::IntervalVar => NameKind::Interval,
            Entry::CofWitness(_) => NameKind::Witness,
        };
        let name = pr.fresh(kind);
        pr.scope.push((name, kind));
    }
    pr
}

/// Prints a term whose free indices live in `tele`; telescope entries get
/// deterministic generated names.
pub fn print_term_in(tele: &Telescope, t: &Term) -> String {
    let mut avoid = BTreeSet::new();
    collect_consts(t, &mut avoid);
    let mut pr = scope_of(tele, &avoid);
    let mut out = String::new();
    pr.term(t, LAM, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    print_term_in(&Telescope::new(), t)
}

pub fn print_cof_in(tele: &Telescope, c: &Cof) -> String {
    let pr = scope_of(tele, &BTreeSet::new());
    let mut out = String::new();
    pr.cof(c, 0, &mut out);
    out
}

pub fn print_interval_in(tele: &Telescope, r: &IntervalTerm) -> String {
    let pr = scope_of(tele, &BTreeSet::new());
    let mut out = String::new();
    pr.interval(r, 0, &mut out);
    out
}

pub fn print_judgment(j: &Judgment) -> String {
    match j {
        Judgment::TypeWf(tele, t) => format!("type {}", print_term_in(tele, t)),
        Judgment::HasType(tele, t, ty) => {
            format!("{} : {}", print_term_in(tele, t), print_term_in(tele, ty))
        }
        Judgment::DefEq(tele, a, b, ty) => format!(
            "{} = {} : {}",
            print_term_in(tele, a),
            print_term_in(tele, b),
            print_term_in(tele, ty)
        ),
        Judgment::CofHolds(tele, c) => print_cof_in(tele, c),
    }
}

/// One item of a `.ctt` file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FileItem {
    Def { name: String, ty: Term, body: Term, must_fail: bool },
    Check { judgment: Judgment, must_fail: bool },
}

/// A parsed `.ctt` file.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SourceFile {
    pub theory: Option<crate::interval::TheoryName>,
    pub translate_check: bool,
    pub items: Vec<FileItem>,
}

pub fn print_file(f: &SourceFile) -> String {
    let mut out = String::new();
    if let Some(th) = f.theory {
        let _ = writeln!(out, "#theory {th}");
    }
    if f.translate_check {
        let _ = writeln!(out, "#translate-check");
    }
    for item in &f.items {
        out.push('\n');
        match item {
            FileItem::Def { name, ty, body, must_fail } => {
                if *must_fail {
                    let _ = writeln!(out, "#fail");
                }
                let _ = writeln!(out, "def {name} : {} =", print_term(ty));
                let _ = writeln!(out, "  {}", print_term(body));
            }
            FileItem::Check { judgment, must_fail } => {
                if *must_fail {
                    let _ = writeln!(out, "#fail");
                }
                let _ = writeln!(out, "#check {}", print_judgment(judgment));
            }
        }
    }
    out
}
