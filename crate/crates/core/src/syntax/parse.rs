//! Lexer and recursive-descent parser for the surface syntax and the
//! `.ctt` file format.
//!
//! Identifier resolution happens during parsing against a scope stack of
//! named binders, producing de Bruijn indices into the mixed telescope;
//! unknown names in term position become global references. Interval
//! variables and term variables are distinguished by the position they
//! occur in, never by spelling.

use super::print::{FileItem, SourceFile};
use super::{fill_multi, Judgment, Term};
use crate::cofsolve::Cof;
use crate::interval::{IntervalTerm, OpSym, TheoryName};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Pos {
    line: u32,
    col: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Num(u8),
    Directive(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    At,
    Pipe,
    Amp,
    Star,
    Tilde,
    Backslash,
    MeetSym,
    JoinSym,
    Arrow,
    Dot,
    Dot1,
    Dot2,
    Lt,
    Gt,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Directive(d) => format!("`#{d}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::At => "`@`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Star => "`*`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::MeetSym => "`/\\`".into(),
            Tok::JoinSym => "`\\/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Dot1 => "`.1`".into(),
            Tok::Dot2 => "`.2`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let (mut line, mut col) = (1u32, 1u32);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let err = |msg: String| ParseError { line: pos.line, col: pos.col, msg };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let simple = |t: Tok| Some(t);
        let tok = match c {
            '(' => simple(Tok::LParen),
            ')' => simple(Tok::RParen),
            '[' => simple(Tok::LBrack),
            ']' => simple(Tok::RBrack),
            '{' => simple(Tok::LBrace),
            '}' => simple(Tok::RBrace),
            ',' => simple(Tok::Comma),
            ':' => simple(Tok::Colon),
            '=' => simple(Tok::Equals),
            '@' => simple(Tok::At),
            '|' => simple(Tok::Pipe),
            '&' => simple(Tok::Amp),
            '*' => simple(Tok::Star),
            '~' => simple(Tok::Tilde),
            '<' => simple(Tok::Lt),
            '>' => simple(Tok::Gt),
            '^' => simple(Tok::Caret),
            _ => None,
        };
        if let Some(t) = tok {
            toks.push((t, pos));
            bump!();
            continue;
        }
        match c {
            '\\' => {
                if chars.get(i + 1) == Some(&'/') {
                    toks.push((Tok::JoinSym, pos));
                    bump!();
                    bump!();
                } else {
                    toks.push((Tok::Backslash, pos));
                    bump!();
                }
            }
            '/' => {
                if chars.get(i + 1) == Some(&'\\') {
                    toks.push((Tok::MeetSym, pos));
                    bump!();
                    bump!();
                } else {
                    return Err(err("stray `/`; did you mean `/\\`?".into()));
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((Tok::Arrow, pos));
                    bump!();
                    bump!();
                } else {
                    return Err(err("stray `-`; did you mean `->`?".into()));
                }
            }
            '.' => {
                let digit = chars.get(i + 1).copied();
                let after = chars.get(i + 2).copied();
                let tight = !after.map(is_ident_char).unwrap_or(false);
                match digit {
                    Some('1') if tight => {
                        toks.push((Tok::Dot1, pos));
                        bump!();
                        bump!();
                    }
                    Some('2') if tight => {
                        toks.push((Tok::Dot2, pos));
                        bump!();
                        bump!();
                    }
                    _ => {
                        toks.push((Tok::Dot, pos));
                        bump!();
                    }
                }
            }
            '#' => {
                bump!();
                let start = i;
                while i < chars.len() && (is_ident_char(chars[i]) || chars[i] == '-') {
                    bump!();
                }
                if start == i {
                    return Err(err("expected a directive name after `#`".into()));
                }
                let word: String = chars[start..i].iter().collect();
                toks.push((Tok::Directive(word), pos));
            }
            '0'..='9' => {
                if chars.get(i + 1).copied().map(is_ident_char).unwrap_or(false) {
                    return Err(err("numbers other than the endpoints 0 and 1 are not part of the language".into()));
                }
                match c {
                    '0' => toks.push((Tok::Num(0), pos)),
                    '1' => toks.push((Tok::Num(1), pos)),
                    _ => return Err(err(format!("unexpected digit `{c}`"))),
                }
                bump!();
            }
            c if is_ident_start(c) => {
                let start = i;
                loop {
                    bump!();
                    if i >= chars.len() {
                        break;
                    }
                    let c = chars[i];
                    if is_ident_char(c) {
                        continue;
                    }
                    // hyphenated names like susp-elim; `a->b` still lexes
                    // as three tokens because `>` is not an identifier char
                    if c == '-'
                        && chars.get(i + 1).copied().map(is_ident_start).unwrap_or(false)
                    {
                        continue;
                    }
                    break;
                }
                let word: String = chars[start..i].iter().collect();
                toks.push((Tok::Ident(word), pos));
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        }
    }
    toks.push((Tok::Eof, Pos { line, col }));
    Ok(toks)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ScopeKind {
    Term,
    Interval,
    Witness,
}

/// Keywords that head a composite form; they never resolve as variables and
/// never begin an application argument.
const FORM_KEYWORDS: &[&str] = &[
    "def", "El", "Id", "refl", "J", "Path", "fill", "coe", "Glue", "glue", "unglue", "Susp",
    "merid", "susp-elim", "merid-beta", "absurd-tm", "split-ty", "split-tm", "c-pi", "c-sigma",
    "c-path", "c-id", "top", "bot",
];

/// Keywords denoting complete atoms.
const ATOM_KEYWORDS: &[&str] =
    &["U", "Unit", "tt", "north", "south", "absurd-ty", "c-unit"];

pub struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    ix: usize,
    scope: Vec<(String, ScopeKind)>,
    /// When set, unknown interval names are appended and resolved by table
    /// position; used for command-line interval and cofibration arguments.
    free_intervals: Option<&'a mut Vec<String>>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, free_intervals: Option<&'a mut Vec<String>>) -> Result<Parser<'a>> {
        Ok(Parser { toks: lex(src)?, ix: 0, scope: Vec::new(), free_intervals })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.ix].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let ix = (self.ix + n).min(self.toks.len() - 1);
        &self.toks[ix].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.ix].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.ix].0.clone();
        if self.ix + 1 < self.toks.len() {
            self.ix += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(ParseError { line: p.line, col: p.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.advance();
            Ok(())
        } else {
            self.fail(format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => self.fail(format!("expected a name, found {}", other.describe())),
        }
    }

    fn binder_name(&mut self) -> Result<String> {
        let name = self.ident()?;
        if FORM_KEYWORDS.contains(&name.as_str()) || ATOM_KEYWORDS.contains(&name.as_str()) {
            return self.fail(format!("`{name}` is a reserved word"));
        }
        Ok(name)
    }

    fn lookup(&self, name: &str) -> Option<(usize, ScopeKind)> {
        self.scope
            .iter()
            .rev()
            .enumerate()
            .find(|(_, (n, _))| n == name && n != "_")
            .map(|(ix, (_, k))| (ix, *k))
    }

    // Terms, loosest level: lambdas and the binary type formers.

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Tok::Backslash => {
                self.advance();
                let name = self.binder_name()?;
                self.expect(Tok::Dot)?;
                self.scope.push((name, ScopeKind::Term));
                let body = self.term();
                self.scope.pop();
                Ok(super::lam(body?))
            }
            Tok::Lt => {
                self.advance();
                let name = self.binder_name()?;
                self.expect(Tok::Gt)?;
                self.scope.push((name, ScopeKind::Interval));
                let body = self.term();
                self.scope.pop();
                Ok(super::plam(body?))
            }
            _ => self.arrow_term(),
        }
    }

    fn arrow_term(&mut self) -> Result<Term> {
        // dependent binder lookahead: `(` name `:`
        if *self.peek() == Tok::LParen {
            if let Tok::Ident(_) = self.peek_at(1) {
                if *self.peek_at(2) == Tok::Colon {
                    self.advance();
                    let name = self.binder_name()?;
                    self.expect(Tok::Colon)?;
                    let dom = self.term()?;
                    self.expect(Tok::RParen)?;
                    let former = self.advance();
                    self.scope.push((name, ScopeKind::Term));
                    let body = match former {
                        Tok::Arrow => self.term().map(|b| super::pi(dom, b)),
                        Tok::Star => {
                            // the right operand of `*` sits at star level
                            self.star_term().map(|b| super::sigma(dom, b))
                        }
                        other => self.fail(format!(
                            "expected `->` or `*` after the binder, found {}",
                            other.describe()
                        )),
                    };
                    self.scope.pop();
                    return body;
                }
            }
        }
        let lhs = self.star_term()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.arrow_term()?;
            return Ok(super::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn star_term(&mut self) -> Result<Term> {
        let lhs = self.psugar_term()?;
        if *self.peek() == Tok::Star {
            self.advance();
            let rhs = self.star_term()?;
            return Ok(super::sigma(lhs, super::shift(&rhs, 1, 0)));
        }
        Ok(lhs)
    }

    fn psugar_term(&mut self) -> Result<Term> {
        let lhs = self.app_term()?;
        if *self.peek() == Tok::Tilde {
            self.advance();
            self.expect(Tok::LBrack)?;
            let ty = self.term()?;
            self.expect(Tok::RBrack)?;
            let rhs = self.app_term()?;
            return Ok(super::path(ty, lhs, rhs));
        }
        Ok(lhs)
    }

    fn is_atom_start(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(name) => !FORM_KEYWORDS.contains(&name.as_str()),
            _ => false,
        }
    }

    fn app_term(&mut self) -> Result<Term> {
        let mut head = self.head_form()?;
        loop {
            if *self.peek() == Tok::At {
                self.advance();
                let r = self.interval()?;
                head = super::papp(head, r);
            } else if self.is_atom_start() {
                let arg = self.atom()?;
                head = super::app(head, arg);
            } else {
                return Ok(head);
            }
        }
    }

    /// A binder group `(x. body)`, `(x. q. body)` etc., pushing the given
    /// scope kinds in source order.
    fn binder(&mut self, kinds: &[ScopeKind]) -> Result<Term> {
        self.expect(Tok::LParen)?;
        let mut pushed = 0;
        let mut result = Ok(());
        for kind in kinds {
            match self.binder_name() {
                Ok(name) => {
                    if let Err(e) = self.expect(Tok::Dot) {
                        result = Err(e);
                        break;
                    }
                    self.scope.push((name, *kind));
                    pushed += 1;
                }
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        let body = match result {
            Ok(()) => {
                let b = self.term();
                b.and_then(|b| self.expect(Tok::RParen).map(|_| b))
            }
            Err(e) => Err(e),
        };
        for _ in 0..pushed {
            self.scope.pop();
        }
        body
    }

    fn under_witness<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.scope.push(("_".into(), ScopeKind::Witness));
        let r = f(self);
        self.scope.pop();
        r
    }

    /// `^{r->s}` of fill and coe.
    fn fill_span(&mut self) -> Result<(IntervalTerm, IntervalTerm)> {
        self.expect(Tok::Caret)?;
        self.expect(Tok::LBrace)?;
        let src = self.interval()?;
        self.expect(Tok::Arrow)?;
        let dst = self.interval()?;
        self.expect(Tok::RBrace)?;
        Ok((src, dst))
    }

    fn head_form(&mut self) -> Result<Term> {
        let name = match self.peek() {
            Tok::Ident(name) if FORM_KEYWORDS.contains(&name.as_str()) => name.clone(),
            _ => return self.atom(),
        };
        self.advance();
        match name.as_str() {
            "El" => Ok(super::el(self.atom()?)),
            "Id" => Ok(super::id_ty(self.atom()?, self.atom()?, self.atom()?)),
            "refl" => Ok(super::refl(self.atom()?)),
            "J" => {
                let motive = self.binder(&[ScopeKind::Term, ScopeKind::Term])?;
                let base = self.atom()?;
                let scrut = self.atom()?;
                Ok(Term::J { motive: Box::new(motive), base: Box::new(base), scrut: Box::new(scrut) })
            }
            "Path" => {
                let line = self.binder(&[ScopeKind::Interval])?;
                Ok(super::path_ty(line, self.atom()?, self.atom()?))
            }
            "fill" => {
                let (src, dst) = self.fill_span()?;
                let line = self.binder(&[ScopeKind::Interval])?;
                self.expect(Tok::LBrack)?;
                let mut branches = Vec::new();
                if *self.peek() != Tok::RBrack {
                    loop {
                        let cof = self.cof_and()?;
                        self.expect(Tok::Arrow)?;
                        let body = self.under_witness(|p| p.binder(&[ScopeKind::Interval]))?;
                        branches.push((cof, body));
                        if *self.peek() == Tok::Pipe {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrack)?;
                let cap = self.atom()?;
                Ok(fill_multi(src, dst, line, branches, cap))
            }
            "coe" => {
                let (src, dst) = self.fill_span()?;
                let line = self.binder(&[ScopeKind::Interval])?;
                let cap = self.atom()?;
                Ok(super::coe(src, dst, line, cap))
            }
            "Glue" => {
                let base = self.atom()?;
                self.expect(Tok::LBrack)?;
                let cof = self.cof_and()?;
                self.expect(Tok::Arrow)?;
                let (part_ty, equiv) = self.under_witness(|p| {
                    p.expect(Tok::LParen)?;
                    let t = p.term()?;
                    p.expect(Tok::Comma)?;
                    let e = p.term()?;
                    p.expect(Tok::RParen)?;
                    Ok((t, e))
                })?;
                self.expect(Tok::RBrack)?;
                Ok(Term::GlueTy {
                    base: Box::new(base),
                    cof,
                    part_ty: Box::new(part_ty),
                    equiv: Box::new(equiv),
                })
            }
            "glue" => {
                let base = self.atom()?;
                self.expect(Tok::LBrack)?;
                let cof = self.cof_and()?;
                self.expect(Tok::Arrow)?;
                let part = self.under_witness(|p| p.term())?;
                self.expect(Tok::RBrack)?;
                Ok(Term::GlueIntro { cof, base: Box::new(base), part: Box::new(part) })
            }
            "unglue" => Ok(Term::Unglue(Box::new(self.atom()?))),
            "Susp" => Ok(super::susp(self.atom()?)),
            "merid" => Ok(super::merid(self.atom()?)),
            "susp-elim" | "merid-beta" => {
                let motive = self.binder(&[ScopeKind::Term])?;
                let n = self.atom()?;
                let s = self.atom()?;
                let m = self.binder(&[ScopeKind::Term])?;
                let last = self.atom()?;
                Ok(if name == "susp-elim" {
                    Term::SuspElim {
                        motive: Box::new(motive),
                        north: Box::new(n),
                        south: Box::new(s),
                        merid: Box::new(m),
                        scrut: Box::new(last),
                    }
                } else {
                    Term::MeridBeta {
                        motive: Box::new(motive),
                        north: Box::new(n),
                        south: Box::new(s),
                        merid: Box::new(m),
                        arg: Box::new(last),
                    }
                })
            }
            "absurd-tm" => Ok(Term::AbsurdTm(Box::new(self.atom()?))),
            "split-ty" => {
                let (p, left, q, right) = self.split_branches()?;
                Ok(Term::SplitTy {
                    p,
                    q,
                    left: Box::new(left),
                    right: Box::new(right),
                })
            }
            "split-tm" => {
                let motive = self.under_witness(|p| p.atom())?;
                let (p, left, q, right) = self.split_branches()?;
                Ok(Term::SplitTm {
                    p,
                    q,
                    motive: Box::new(motive),
                    left: Box::new(left),
                    right: Box::new(right),
                })
            }
            "c-pi" => Ok(Term::CPi(
                Box::new(self.atom()?),
                Box::new(self.binder(&[ScopeKind::Term])?),
            )),
            "c-sigma" => Ok(Term::CSigma(
                Box::new(self.atom()?),
                Box::new(self.binder(&[ScopeKind::Term])?),
            )),
            "c-path" => {
                let line = self.binder(&[ScopeKind::Interval])?;
                Ok(Term::CPath(Box::new(line), Box::new(self.atom()?), Box::new(self.atom()?)))
            }
            "c-id" => Ok(Term::CId(
                Box::new(self.atom()?),
                Box::new(self.atom()?),
                Box::new(self.atom()?),
            )),
            other => self.fail(format!("`{other}` cannot appear here")),
        }
    }

    fn split_branches(&mut self) -> Result<(Cof, Term, Cof, Term)> {
        self.expect(Tok::LBrack)?;
        let p = self.cof_and()?;
        self.expect(Tok::Arrow)?;
        let left = self.under_witness(|s| s.term())?;
        self.expect(Tok::Pipe)?;
        let q = self.cof_and()?;
        self.expect(Tok::Arrow)?;
        let right = self.under_witness(|s| s.term())?;
        self.expect(Tok::RBrack)?;
        Ok((p, left, q, right))
    }

    fn atom(&mut self) -> Result<Term> {
        let mut t = self.raw_atom()?;
        loop {
            match self.peek() {
                Tok::Dot1 => {
                    self.advance();
                    t = super::fst(t);
                }
                Tok::Dot2 => {
                    self.advance();
                    t = super::snd(t);
                }
                _ => return Ok(t),
            }
        }
    }

    fn raw_atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                if *self.peek() == Tok::Comma {
                    self.advance();
                    let u = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(super::pair(t, u));
                }
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                match name.as_str() {
                    "U" => {
                        self.advance();
                        return Ok(Term::U);
                    }
                    "Unit" => {
                        self.advance();
                        return Ok(Term::UnitTy);
                    }
                    "tt" => {
                        self.advance();
                        return Ok(Term::TT);
                    }
                    "north" => {
                        self.advance();
                        return Ok(Term::North);
                    }
                    "south" => {
                        self.advance();
                        return Ok(Term::South);
                    }
                    "absurd-ty" => {
                        self.advance();
                        return Ok(Term::AbsurdTy);
                    }
                    "c-unit" => {
                        self.advance();
                        return Ok(Term::CUnit);
                    }
                    _ => {}
                }
                if FORM_KEYWORDS.contains(&name.as_str()) {
                    return self.fail(format!(
                        "`{name}` starts a composite form; parenthesize it to use it as an argument"
                    ));
                }
                if name == "_" {
                    return self.fail("`_` is not a reference".to_string());
                }
                self.advance();
                match self.lookup(&name) {
                    Some((ix, ScopeKind::Term)) => Ok(Term::Var(ix)),
                    Some((_, ScopeKind::Interval)) => self.fail(format!(
                        "`{name}` is an interval variable and cannot stand as a term"
                    )),
                    Some((_, ScopeKind::Witness)) => {
                        self.fail(format!("`{name}` is a cofibration witness"))
                    }
                    None => Ok(Term::Const(name)),
                }
            }
            Tok::Num(n) => self.fail(format!(
                "the endpoint `{n}` is an interval term and cannot stand alone as a term"
            )),
            other => self.fail(format!("expected a term, found {}", other.describe())),
        }
    }

    // Interval expressions.

    fn interval(&mut self) -> Result<IntervalTerm> {
        let mut t = self.interval_meet()?;
        while *self.peek() == Tok::JoinSym {
            self.advance();
            let r = self.interval_meet()?;
            t = IntervalTerm::join(t, r);
        }
        Ok(t)
    }

    fn interval_meet(&mut self) -> Result<IntervalTerm> {
        let mut t = self.interval_neg()?;
        while *self.peek() == Tok::MeetSym {
            self.advance();
            let r = self.interval_neg()?;
            t = IntervalTerm::meet(t, r);
        }
        Ok(t)
    }

    fn interval_neg(&mut self) -> Result<IntervalTerm> {
        if *self.peek() == Tok::Tilde {
            self.advance();
            Ok(IntervalTerm::neg(self.interval_neg()?))
        } else {
            self.interval_atom()
        }
    }

    fn interval_atom(&mut self) -> Result<IntervalTerm> {
        match self.peek().clone() {
            Tok::Num(0) => {
                self.advance();
                Ok(IntervalTerm::E0)
            }
            Tok::Num(_) => {
                self.advance();
                Ok(IntervalTerm::E1)
            }
            Tok::LParen => {
                self.advance();
                let t = self.interval()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                if FORM_KEYWORDS.contains(&name.as_str()) || ATOM_KEYWORDS.contains(&name.as_str())
                {
                    return self.fail(format!("`{name}` is a reserved word"));
                }
                self.advance();
                match self.lookup(&name) {
                    Some((ix, ScopeKind::Interval)) => Ok(IntervalTerm::Var(ix)),
                    Some(_) => self.fail(format!("`{name}` is not an interval variable")),
                    None => match &mut self.free_intervals {
                        Some(table) => {
                            let ix = match table.iter().position(|n| *n == name) {
                                Some(ix) => ix,
                                None => {
                                    table.push(name);
                                    table.len() - 1
                                }
                            };
                            Ok(IntervalTerm::Var(ix))
                        }
                        None => self.fail(format!("unbound interval variable `{name}`")),
                    },
                }
            }
            other => self.fail(format!("expected an interval term, found {}", other.describe())),
        }
    }

    // Cofibration formulas.

    fn cof(&mut self) -> Result<Cof> {
        let mut c = self.cof_and()?;
        while *self.peek() == Tok::Pipe {
            self.advance();
            let d = self.cof_and()?;
            c = Cof::or(c, d);
        }
        Ok(c)
    }

    fn cof_and(&mut self) -> Result<Cof> {
        let mut c = self.cof_atom()?;
        while *self.peek() == Tok::Amp {
            self.advance();
            let d = self.cof_atom()?;
            c = Cof::and(c, d);
        }
        Ok(c)
    }

    fn cof_atom(&mut self) -> Result<Cof> {
        match self.peek().clone() {
            Tok::Ident(name) if name == "top" => {
                self.advance();
                Ok(Cof::Top)
            }
            Tok::Ident(name) if name == "bot" => {
                self.advance();
                Ok(Cof::Bot)
            }
            Tok::LParen => {
                // either a parenthesized formula or the left side of an
                // equation; try the formula reading first
                let save = self.ix;
                let attempt = (|| -> Result<Cof> {
                    self.advance();
                    let c = self.cof()?;
                    self.expect(Tok::RParen)?;
                    Ok(c)
                })();
                match attempt {
                    Ok(c) if *self.peek() != Tok::Equals => Ok(c),
                    _ => {
                        self.ix = save;
                        self.cof_eq()
                    }
                }
            }
            _ => self.cof_eq(),
        }
    }

    fn cof_eq(&mut self) -> Result<Cof> {
        let l = self.interval()?;
        self.expect(Tok::Equals)?;
        let r = self.interval()?;
        Ok(Cof::Eq(l, r))
    }

    // File items.

    fn file(&mut self) -> Result<SourceFile> {
        let mut out = SourceFile::default();
        let mut pending_fail = false;
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Directive(d) => match d.as_str() {
                    "theory" => {
                        self.advance();
                        let name = self.ident()?;
                        match TheoryName::parse(&name) {
                            Some(t) => {
                                if out.theory.is_some() {
                                    return self.fail("duplicate #theory directive");
                                }
                                out.theory = Some(t)
                            }
                            None => {
                                return self.fail(format!(
                                    "unknown theory `{name}`; expected cart, cart-rev, dl, or dm"
                                ))
                            }
                        }
                    }
                    "translate-check" => {
                        self.advance();
                        out.translate_check = true;
                    }
                    "fail" => {
                        self.advance();
                        if pending_fail {
                            return self.fail("duplicate #fail marker");
                        }
                        pending_fail = true;
                    }
                    "check" => {
                        self.advance();
                        let a = self.term()?;
                        let judgment = if *self.peek() == Tok::Equals {
                            self.advance();
                            let b = self.term()?;
                            self.expect(Tok::Colon)?;
                            let ty = self.term()?;
                            Judgment::DefEq(super::Telescope::new(), a, b, ty)
                        } else {
                            self.expect(Tok::Colon)?;
                            let ty = self.term()?;
                            Judgment::HasType(super::Telescope::new(), a, ty)
                        };
                        out.items.push(FileItem::Check {
                            judgment,
                            must_fail: std::mem::take(&mut pending_fail),
                        });
                    }
                    other => return self.fail(format!("unknown directive `#{other}`")),
                },
                Tok::Ident(word) if word == "def" => {
                    self.advance();
                    let name = self.binder_name()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.term()?;
                    self.expect(Tok::Equals)?;
                    let body = self.term()?;
                    out.items.push(FileItem::Def {
                        name,
                        ty,
                        body,
                        must_fail: std::mem::take(&mut pending_fail),
                    });
                }
                other => {
                    return self.fail(format!(
                        "expected a definition or directive, found {}",
                        other.describe()
                    ))
                }
            }
        }
        if pending_fail {
            return self.fail("#fail marker with no following item");
        }
        Ok(out)
    }

    fn finish<T>(mut self, value: T) -> Result<T> {
        if *self.peek() != Tok::Eof {
            return self.fail(format!("trailing input: {}", self.peek().describe()));
        }
        let _ = &mut self;
        Ok(value)
    }
}

/// Parses a closed term (globals allowed, no free variables).
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src, None)?;
    let t = p.term()?;
    p.finish(t)
}

/// Parses a `.ctt` file.
pub fn parse_file(src: &str) -> Result<SourceFile> {
    let mut p = Parser::new(src, None)?;
    let f = p.file()?;
    p.finish(f)
}

/// Parses an interval term over named free variables; `names` maps table
/// positions to variable indices and is extended on first sight.
pub fn parse_interval(src: &str, names: &mut Vec<String>) -> Result<IntervalTerm> {
    let mut p = Parser::new(src, Some(names))?;
    let t = p.interval()?;
    p.finish(t)
}

/// Parses a cofibration over named free variables.
pub fn parse_cof(src: &str, names: &mut Vec<String>) -> Result<Cof> {
    let mut p = Parser::new(src, Some(names))?;
    let c = p.cof()?;
    p.finish(c)
}

/// Surface names for the interval operators, used in diagnostics.
pub fn op_name(op: OpSym) -> &'static str {
    match op {
        OpSym::Meet => "/\\",
        OpSym::Join => "\\/",
        OpSym::Neg => "~",
    }
}

#[cfg(test)]
mod tests {
    use super::super::print::{print_file, print_term};
    use super::*;
    use crate::syntax::{self, Telescope};

    fn roundtrip(src: &str) -> Term {
        let t = parse_term(src).unwrap_or_else(|e| panic!("parse {src}: {e}"));
        let printed = print_term(&t);
        let back = parse_term(&printed)
            .unwrap_or_else(|e| panic!("reparse of `{printed}` (from `{src}`): {e}"));
        assert_eq!(back, t, "round trip through `{printed}` from `{src}`");
        t
    }

    #[test]
    fn parses_core_forms() {
        let t = roundtrip(r"\p. <i> p @ ~i");
        assert_eq!(
            t,
            syntax::lam(syntax::plam(syntax::papp(
                Term::Var(1),
                IntervalTerm::neg(IntervalTerm::Var(0))
            )))
        );
        let pair = roundtrip("(tt , tt).1");
        assert_eq!(pair, syntax::fst(syntax::pair(Term::TT, Term::TT)));
        roundtrip(r"\f. \x. f x x");
        roundtrip("(x : U) -> El x -> El x");
        roundtrip("(x : U) * El x");
        roundtrip("U * Unit -> Unit");
        roundtrip(r"\a. refl a");
        roundtrip(r"\a. \b. \p. J (x. q. Id U a x) p p");
        roundtrip(r"\a. (a , refl a)");
        roundtrip("Path (i. U) Unit Unit");
        roundtrip(r"\x. \y. x ~[Unit] y");
        roundtrip(r"\c. <i> merid c @ i");
        roundtrip(r"susp-elim (t. Unit) tt tt (a. <i> tt) north");
        roundtrip(r"merid-beta (t. Unit) tt tt (a. <i> tt) tt");
        roundtrip("c-pi c-unit (x. c-unit)");
        roundtrip("c-path (i. c-unit) tt tt");
        roundtrip("c-sigma c-unit (x. c-id c-unit tt tt)");
        roundtrip(r"\g. unglue g");
        roundtrip("absurd-ty");
        roundtrip(r"\x. absurd-tm Unit");
    }

    #[test]
    fn parses_fill_and_coe() {
        let t = roundtrip(r"\c. coe^{0->1} (i. Unit) c");
        match t {
            Term::Lam(b) => match *b {
                Term::Fill { cof, .. } => assert_eq!(cof, crate::cofsolve::Cof::Bot),
                other => panic!("expected fill, got {other:?}"),
            },
            other => panic!("expected lam, got {other:?}"),
        }
        roundtrip(r"<i> fill^{1->0} (j. Unit) [i = 0 -> (j. tt) | i = 1 -> (j. tt)] tt");
        // a single branch keeps its shape
        let single = roundtrip(r"<i> fill^{1->0} (j. Unit) [i = 0 -> (j. tt)] tt");
        match single {
            Term::PLam(b) => match *b {
                Term::Fill { part, .. } => assert_eq!(*part, Term::TT),
                other => panic!("expected fill, got {other:?}"),
            },
            other => panic!("expected plam, got {other:?}"),
        }
    }

    #[test]
    fn multi_branch_fill_desugars_to_split() {
        let t = parse_term(r"<i> fill^{1->0} (j. Unit) [i = 0 -> (j. tt) | i = 1 -> (j. tt)] tt")
            .unwrap();
        let Term::PLam(b) = t else { panic!() };
        let Term::Fill { cof, part, .. } = *b else { panic!() };
        assert_eq!(
            cof,
            Cof::or(
                Cof::eq(IntervalTerm::Var(0), IntervalTerm::E0),
                Cof::eq(IntervalTerm::Var(0), IntervalTerm::E1)
            )
        );
        let Term::SplitTm { p, q, .. } = *part else {
            panic!("expected split-tm dispatch")
        };
        // guards are shifted across the witness and interval entries
        assert_eq!(p, Cof::eq(IntervalTerm::Var(2), IntervalTerm::E0));
        assert_eq!(q, Cof::eq(IntervalTerm::Var(2), IntervalTerm::E1));
    }

    #[test]
    fn parses_glue_forms() {
        roundtrip(r"\a. \e. Glue Unit [(0 = 0 | 1 = 1) -> (Unit , e)]");
        roundtrip(r"\a. glue a [0 = 0 -> a]");
        roundtrip(r"\ty. split-ty [0 = 0 -> Unit | 1 = 1 -> ty]");
        roundtrip(r"split-tm Unit [0 = 0 -> tt | 1 = 1 -> tt]");
    }

    #[test]
    fn interval_and_cof_parsing() {
        let mut names = Vec::new();
        let t = parse_interval(r"i /\ (j \/ ~i)", &mut names).unwrap();
        assert_eq!(names, vec!["i".to_string(), "j".to_string()]);
        assert_eq!(
            t,
            IntervalTerm::meet(
                IntervalTerm::Var(0),
                IntervalTerm::join(IntervalTerm::Var(1), IntervalTerm::neg(IntervalTerm::Var(0)))
            )
        );
        let mut names = Vec::new();
        let c = parse_cof(r"(i = 0 | i = 1) & top", &mut names).unwrap();
        assert_eq!(
            c,
            Cof::and(
                Cof::or(
                    Cof::eq(IntervalTerm::Var(0), IntervalTerm::E0),
                    Cof::eq(IntervalTerm::Var(0), IntervalTerm::E1)
                ),
                Cof::Top
            )
        );
        let mut names = Vec::new();
        let c2 = parse_cof(r"(i \/ j) = 1", &mut names).unwrap();
        assert_eq!(
            c2,
            Cof::eq(
                IntervalTerm::join(IntervalTerm::Var(0), IntervalTerm::Var(1)),
                IntervalTerm::E1
            )
        );
    }

    #[test]
    fn operator_precedence() {
        // ~ binds tighter than /\ which binds tighter than \/
        let mut names = Vec::new();
        let t = parse_interval(r"~i /\ j \/ k", &mut names).unwrap();
        assert_eq!(
            t,
            IntervalTerm::join(
                IntervalTerm::meet(IntervalTerm::neg(IntervalTerm::Var(0)), IntervalTerm::Var(1)),
                IntervalTerm::Var(2)
            )
        );
        // * binds tighter than ->; both associate right
        let ty = parse_term("U -> U * U -> U").unwrap();
        assert_eq!(
            ty,
            syntax::arrow(
                Term::U,
                syntax::arrow(syntax::sigma(Term::U, Term::U), Term::U)
            )
        );
    }

    #[test]
    fn file_parsing() {
        let src = "#theory dm\n\n-- a definition and a judgment\ndef idfun : (x : Unit) -> Unit = \\x. x\n\n#check tt : Unit\n#fail\n#check tt : U\n";
        let f = parse_file(src).unwrap();
        assert_eq!(f.theory, Some(TheoryName::Dm));
        assert_eq!(f.items.len(), 3);
        match &f.items[0] {
            FileItem::Def { name, must_fail, .. } => {
                assert_eq!(name, "idfun");
                assert!(!must_fail);
            }
            other => panic!("expected def, got {other:?}"),
        }
        match &f.items[2] {
            FileItem::Check { must_fail, .. } => assert!(must_fail),
            other => panic!("expected check, got {other:?}"),
        }
        // files round-trip through the printer
        let printed = print_file(&f);
        let again = parse_file(&printed).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn error_positions() {
        let err = parse_term("(tt , ").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
        assert!(parse_term(r"\U. U").is_err(), "reserved words cannot bind");
        assert!(parse_term("p @ q r").is_err(), "interval exprs stop cleanly");
        let e = parse_file("#check tt = tt").unwrap_err();
        assert!(e.msg.contains("expected"), "{e}");
    }

    #[test]
    fn shadowing_and_scope_kinds() {
        // inner binder shadows outer
        let t = parse_term(r"\x. \x. x").unwrap();
        assert_eq!(t, syntax::lam(syntax::lam(Term::Var(0))));
        // interval names do not leak into term positions
        assert!(parse_term(r"<i> i").is_err());
        // term names do not leak into interval positions
        assert!(parse_term(r"\x. <i> x @ x").is_err());
        // unknown term names are globals
        assert_eq!(parse_term("someGlobal").unwrap(), Term::Const("someGlobal".into()));
    }

    #[test]
    fn print_open_terms_with_telescope_names() {
        use crate::syntax::Entry;
        let mut tele = Telescope::new();
        tele.push(Entry::TermVar(Term::U));
        tele.push(Entry::IntervalVar);
        let t = syntax::papp(syntax::plam(syntax::var(2)), IntervalTerm::Var(0));
        let s = super::super::print::print_term_in(&tele, &t);
        assert_eq!(s, "(<i1> x0) @ i0");
    }
}
