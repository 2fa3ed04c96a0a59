//! Interval theories and their word problems.
//!
//! A theory here is a single-sorted algebraic theory extending two constants
//! `0` and `1`. The catalog is closed: `cart` (no operators), `dl` (bounded
//! distributive lattice), and their extensions by a reversal operator,
//! `cart-rev` and `dm` (De Morgan algebra). Equality of terms, with or
//! without equational hypotheses, is decided by exhaustive evaluation in a
//! finite test algebra chosen so that enumeration agrees with derivability.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

/// Operator symbols appearing in the catalog.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OpSym {
    Meet,
    Join,
    Neg,
}

impl OpSym {
    pub fn arity(self) -> usize {
        match self {
            OpSym::Meet | OpSym::Join => 2,
            OpSym::Neg => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            OpSym::Meet => "/\\",
            OpSym::Join => "\\/",
            OpSym::Neg => "~",
        }
    }
}

/// Terms over an interval theory. `Var` is a de Bruijn reference to an
/// interval entry of the ambient telescope.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum IntervalTerm {
    Var(usize),
    E0,
    E1,
    Op(OpSym, Vec<IntervalTerm>),
}

impl IntervalTerm {
    pub fn meet(a: IntervalTerm, b: IntervalTerm) -> IntervalTerm {
        IntervalTerm::Op(OpSym::Meet, vec![a, b])
    }

    pub fn join(a: IntervalTerm, b: IntervalTerm) -> IntervalTerm {
        IntervalTerm::Op(OpSym::Join, vec![a, b])
    }

    pub fn neg(a: IntervalTerm) -> IntervalTerm {
        IntervalTerm::Op(OpSym::Neg, vec![a])
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            IntervalTerm::Var(k) => Some(*k),
            IntervalTerm::E0 | IntervalTerm::E1 => None,
            IntervalTerm::Op(_, args) => args.iter().filter_map(|a| a.max_var()).max(),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            IntervalTerm::Var(k) => {
                out.insert(*k);
            }
            IntervalTerm::E0 | IntervalTerm::E1 => {}
            IntervalTerm::Op(_, args) => {
                for a in args {
                    a.vars(out);
                }
            }
        }
    }

    /// Rename variables through `f`.
    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> IntervalTerm {
        match self {
            IntervalTerm::Var(k) => IntervalTerm::Var(f(*k)),
            IntervalTerm::E0 => IntervalTerm::E0,
            IntervalTerm::E1 => IntervalTerm::E1,
            IntervalTerm::Op(op, args) => {
                IntervalTerm::Op(*op, args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            IntervalTerm::Op(_, args) => 1 + args.iter().map(|a| a.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }
}

impl fmt::Display for IntervalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalTerm::Var(k) => write!(f, "i{k}"),
            IntervalTerm::E0 => write!(f, "0"),
            IntervalTerm::E1 => write!(f, "1"),
            IntervalTerm::Op(OpSym::Neg, args) => write!(f, "~{}", Paren(&args[0])),
            IntervalTerm::Op(op, args) => {
                write!(f, "{} {} {}", Paren(&args[0]), op.symbol(), Paren(&args[1]))
            }
        }
    }
}

struct Paren<'a>(&'a IntervalTerm);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            IntervalTerm::Op(op, _) if op.arity() == 2 => write!(f, "({})", self.0),
            t => write!(f, "{t}"),
        }
    }
}

/// Element of a test algebra carrier, always in `0..carrier`.
pub type Elem = u8;

/// Finite algebra used to decide the word problem of a theory.
#[derive(Clone, Debug)]
pub struct TestAlgebra {
    pub carrier: usize,
    pub e0: Elem,
    pub e1: Elem,
    /// One table per operator; binary tables are indexed row-major by
    /// `lhs * carrier + rhs`.
    pub tables: Vec<(OpSym, Vec<Elem>)>,
}

impl TestAlgebra {
    pub fn apply(&self, op: OpSym, args: &[Elem]) -> Result<Elem, TheoryError> {
        let (_, table) = self
            .tables
            .iter()
            .find(|(o, _)| *o == op)
            .ok_or(TheoryError::UnknownOperator(op))?;
        let mut idx = 0usize;
        for a in args {
            idx = idx * self.carrier + *a as usize;
        }
        Ok(table[idx])
    }
}

/// Equation schema; `Var(k)` for `k < vars` is a schema variable.
#[derive(Clone, Debug)]
pub struct Axiom {
    pub name: &'static str,
    pub vars: usize,
    pub lhs: IntervalTerm,
    pub rhs: IntervalTerm,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum TheoryName {
    Cart,
    CartRev,
    Dl,
    Dm,
}

impl TheoryName {
    pub fn parse(s: &str) -> Option<TheoryName> {
        match s {
            "cart" => Some(TheoryName::Cart),
            "cart-rev" => Some(TheoryName::CartRev),
            "dl" => Some(TheoryName::Dl),
            "dm" => Some(TheoryName::Dm),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TheoryName::Cart => "cart",
            TheoryName::CartRev => "cart-rev",
            TheoryName::Dl => "dl",
            TheoryName::Dm => "dm",
        }
    }

    pub fn all() -> [TheoryName; 4] {
        [TheoryName::Cart, TheoryName::CartRev, TheoryName::Dl, TheoryName::Dm]
    }

    /// The cataloged theory, built once and cached.
    pub fn theory(self) -> &'static IntervalTheory {
        static CART: OnceLock<IntervalTheory> = OnceLock::new();
        static CART_REV: OnceLock<IntervalTheory> = OnceLock::new();
        static DL: OnceLock<IntervalTheory> = OnceLock::new();
        static DM: OnceLock<IntervalTheory> = OnceLock::new();
        match self {
            TheoryName::Cart => CART.get_or_init(cart),
            TheoryName::CartRev => CART_REV.get_or_init(|| {
                extend_by_reversal(&cart()).expect("cart extends by reversal")
            }),
            TheoryName::Dl => DL.get_or_init(dl),
            TheoryName::Dm => {
                DM.get_or_init(|| extend_by_reversal(&dl()).expect("dl extends by reversal"))
            }
        }
    }
}

impl fmt::Display for TheoryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct IntervalTheory {
    pub name: TheoryName,
    pub operators: Vec<OpSym>,
    pub axioms: Vec<Axiom>,
    pub test_algebra: TestAlgebra,
    /// The value of the duality map at each operator, as a term over schema
    /// variables `Var(0..arity)`. Present exactly when the theory is
    /// self-dual with a chosen witness.
    pub duality: Option<Vec<(OpSym, IntervalTerm)>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("operator {0:?} is not part of this theory")]
    UnknownOperator(OpSym),
    #[error("theory {0} carries no duality map")]
    NoDuality(TheoryName),
    #[error("theory {0} already has a reversal operator")]
    AlreadyReversed(TheoryName),
    #[error("theory {0} is not self-dual: {1}")]
    NotSelfDual(TheoryName, String),
    #[error("variable i{0} has no value in the assignment")]
    UnboundVar(usize),
}

impl IntervalTheory {
    pub fn has_op(&self, op: OpSym) -> bool {
        self.operators.contains(&op)
    }

    pub fn duality_of(&self, op: OpSym) -> Result<&IntervalTerm, TheoryError> {
        let map = self.duality.as_ref().ok_or(TheoryError::NoDuality(self.name))?;
        map.iter()
            .find(|(o, _)| *o == op)
            .map(|(_, t)| t)
            .ok_or(TheoryError::UnknownOperator(op))
    }

    /// Checks the internal consistency of the theory data: distinct
    /// endpoints, every axiom valid in the test algebra, and the
    /// self-duality condition whenever a duality map is present.
    pub fn validate(&self) -> Result<(), TheoryError> {
        assert_ne!(self.test_algebra.e0, self.test_algebra.e1, "endpoints must differ");
        for ax in &self.axioms {
            for asg in assignments(self.test_algebra.carrier, ax.vars) {
                let l = eval_test_algebra(self, &asg, &ax.lhs)?;
                let r = eval_test_algebra(self, &asg, &ax.rhs)?;
                if l != r {
                    return Err(TheoryError::NotSelfDual(
                        self.name,
                        format!("axiom {} fails at {:?}", ax.name, asg),
                    ));
                }
            }
        }
        if self.duality.is_some() {
            let report = check_self_dual(self)?;
            if !report.passed() {
                return Err(TheoryError::NotSelfDual(self.name, report.failures.join("; ")));
            }
        }
        Ok(())
    }
}

fn var(k: usize) -> IntervalTerm {
    IntervalTerm::Var(k)
}

fn cart() -> IntervalTheory {
    IntervalTheory {
        name: TheoryName::Cart,
        operators: vec![],
        axioms: vec![],
        test_algebra: TestAlgebra { carrier: 2, e0: 0, e1: 1, tables: vec![] },
        duality: Some(vec![]),
    }
}

fn dl() -> IntervalTheory {
    use IntervalTerm::*;
    let meet = IntervalTerm::meet;
    let join = IntervalTerm::join;
    let axioms = vec![
        Axiom {
            name: "meet-assoc",
            vars: 3,
            lhs: meet(var(0), meet(var(1), var(2))),
            rhs: meet(meet(var(0), var(1)), var(2)),
        },
        Axiom {
            name: "join-assoc",
            vars: 3,
            lhs: join(var(0), join(var(1), var(2))),
            rhs: join(join(var(0), var(1)), var(2)),
        },
        Axiom { name: "meet-comm", vars: 2, lhs: meet(var(0), var(1)), rhs: meet(var(1), var(0)) },
        Axiom { name: "join-comm", vars: 2, lhs: join(var(0), var(1)), rhs: join(var(1), var(0)) },
        Axiom { name: "meet-unit", vars: 1, lhs: meet(var(0), E1), rhs: var(0) },
        Axiom { name: "join-unit", vars: 1, lhs: join(var(0), E0), rhs: var(0) },
        Axiom {
            name: "meet-absorb",
            vars: 2,
            lhs: meet(var(0), join(var(0), var(1))),
            rhs: var(0),
        },
        Axiom {
            name: "join-absorb",
            vars: 2,
            lhs: join(var(0), meet(var(0), var(1))),
            rhs: var(0),
        },
        Axiom {
            name: "distrib",
            vars: 3,
            lhs: meet(var(0), join(var(1), var(2))),
            rhs: join(meet(var(0), var(1)), meet(var(0), var(2))),
        },
    ];
    IntervalTheory {
        name: TheoryName::Dl,
        operators: vec![OpSym::Meet, OpSym::Join],
        axioms,
        test_algebra: TestAlgebra {
            carrier: 2,
            e0: 0,
            e1: 1,
            tables: vec![
                (OpSym::Meet, vec![0, 0, 0, 1]),
                (OpSym::Join, vec![0, 1, 1, 1]),
            ],
        },
        duality: Some(vec![
            (OpSym::Meet, IntervalTerm::join(var(0), var(1))),
            (OpSym::Join, IntervalTerm::meet(var(0), var(1))),
        ]),
    }
}

/// Elements of the four-element De Morgan test algebra. The two negation
/// fixpoints sit beside the swapped endpoints.
pub mod dm4 {
    use super::Elem;
    pub const A: Elem = 0;
    pub const E0: Elem = 1;
    pub const E1: Elem = 2;
    pub const B: Elem = 3;
}

fn dm4_algebra() -> TestAlgebra {
    // Encode x as a pair of booleans (hi, lo): a = 00, 0 = 01, 1 = 10,
    // b = 11. Meet and join act componentwise through the twist (meet on
    // firsts, join on seconds, and vice versa); negation swaps components.
    let enc = |hi: u8, lo: u8| 2 * hi + lo;
    let dec = |x: u8| (x / 2, x % 2);
    let mut meet = Vec::new();
    let mut join = Vec::new();
    for x in 0..4u8 {
        for y in 0..4u8 {
            let ((xh, xl), (yh, yl)) = (dec(x), dec(y));
            meet.push(enc(xh.min(yh), xl.max(yl)));
            join.push(enc(xh.max(yh), xl.min(yl)));
        }
    }
    let neg = (0..4u8).map(|x| {
        let (h, l) = dec(x);
        enc(l, h)
    });
    TestAlgebra {
        carrier: 4,
        e0: dm4::E0,
        e1: dm4::E1,
        tables: vec![
            (OpSym::Meet, meet),
            (OpSym::Join, join),
            (OpSym::Neg, neg.collect()),
        ],
    }
}

/// All assignments of `nvars` variables into a carrier of the given size,
/// in lexicographic order.
pub fn assignments(carrier: usize, nvars: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = carrier.pow(nvars as u32);
    (0..total).map(move |mut ix| {
        let mut asg = vec![0u8; nvars];
        for slot in asg.iter_mut().rev() {
            *slot = (ix % carrier) as Elem;
            ix /= carrier;
        }
        asg
    })
}

/// Evaluates a term in the theory's test algebra under an assignment of
/// elements to variables, indexed by variable number.
pub fn eval_test_algebra(
    theory: &IntervalTheory,
    assignment: &[Elem],
    t: &IntervalTerm,
) -> Result<Elem, TheoryError> {
    match t {
        IntervalTerm::Var(k) => {
            assignment.get(*k).copied().ok_or(TheoryError::UnboundVar(*k))
        }
        IntervalTerm::E0 => Ok(theory.test_algebra.e0),
        IntervalTerm::E1 => Ok(theory.test_algebra.e1),
        IntervalTerm::Op(op, args) => {
            let vals: Result<Vec<Elem>, _> =
                args.iter().map(|a| eval_test_algebra(theory, assignment, a)).collect();
            theory.test_algebra.apply(*op, &vals?)
        }
    }
}

fn span_vars(hyps: &[(IntervalTerm, IntervalTerm)], terms: &[&IntervalTerm]) -> usize {
    let mut n = 0;
    for (l, r) in hyps {
        n = n.max(l.max_var().map_or(0, |v| v + 1));
        n = n.max(r.max_var().map_or(0, |v| v + 1));
    }
    for t in terms {
        n = n.max(t.max_var().map_or(0, |v| v + 1));
    }
    n
}

/// Decides `hyps |- lhs = rhs` by enumerating all test-algebra assignments
/// that satisfy the hypotheses. Vacuously true when no assignment does.
pub fn equal_under(
    theory: &IntervalTheory,
    hyps: &[(IntervalTerm, IntervalTerm)],
    lhs: &IntervalTerm,
    rhs: &IntervalTerm,
) -> bool {
    let nvars = span_vars(hyps, &[lhs, rhs]);
    'outer: for asg in assignments(theory.test_algebra.carrier, nvars) {
        for (l, r) in hyps {
            let lv = eval_test_algebra(theory, &asg, l).expect("well-formed hypothesis");
            let rv = eval_test_algebra(theory, &asg, r).expect("well-formed hypothesis");
            if lv != rv {
                continue 'outer;
            }
        }
        let lv = eval_test_algebra(theory, &asg, lhs).expect("well-formed term");
        let rv = eval_test_algebra(theory, &asg, rhs).expect("well-formed term");
        if lv != rv {
            return false;
        }
    }
    true
}

/// True when some assignment satisfies every hypothesis.
pub fn satisfiable(theory: &IntervalTheory, hyps: &[(IntervalTerm, IntervalTerm)]) -> bool {
    let nvars = span_vars(hyps, &[]);
    'outer: for asg in assignments(theory.test_algebra.carrier, nvars) {
        for (l, r) in hyps {
            let lv = eval_test_algebra(theory, &asg, l).expect("well-formed hypothesis");
            let rv = eval_test_algebra(theory, &asg, r).expect("well-formed hypothesis");
            if lv != rv {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

// Normal forms. `cart` terms are their own normal forms; `cart-rev` reduces
// to one of 0, 1, i, ~i; `dl` and `dm` use an irredundant disjunctive normal
// form represented as an antichain of literal sets.

type Literal = (usize, bool);
type Monomial = BTreeSet<Literal>;
type Dnf = BTreeSet<Monomial>;

fn dnf_true() -> Dnf {
    let mut d = BTreeSet::new();
    d.insert(BTreeSet::new());
    d
}

fn dnf_of(theory: &IntervalTheory, t: &IntervalTerm, negated: bool) -> Dnf {
    match (t, negated) {
        (IntervalTerm::E0, false) | (IntervalTerm::E1, true) => BTreeSet::new(),
        (IntervalTerm::E1, false) | (IntervalTerm::E0, true) => dnf_true(),
        (IntervalTerm::Var(k), n) => {
            let mut m = BTreeSet::new();
            m.insert((*k, n));
            let mut d = BTreeSet::new();
            d.insert(m);
            d
        }
        (IntervalTerm::Op(OpSym::Neg, args), n) => dnf_of(theory, &args[0], !n),
        (IntervalTerm::Op(OpSym::Meet, args), false)
        | (IntervalTerm::Op(OpSym::Join, args), true) => {
            let l = dnf_of(theory, &args[0], negated);
            let r = dnf_of(theory, &args[1], negated);
            let mut out = BTreeSet::new();
            for a in &l {
                for b in &r {
                    out.insert(a.union(b).cloned().collect());
                }
            }
            reduce(out)
        }
        (IntervalTerm::Op(OpSym::Join, args), false)
        | (IntervalTerm::Op(OpSym::Meet, args), true) => {
            let mut l = dnf_of(theory, &args[0], negated);
            l.extend(dnf_of(theory, &args[1], negated));
            reduce(l)
        }
    }
}

/// Drops monomials strictly containing another monomial of the set.
fn reduce(d: Dnf) -> Dnf {
    d.iter()
        .filter(|m| !d.iter().any(|m2| *m2 != **m && m2.is_subset(m)))
        .cloned()
        .collect()
}

fn render_dnf(d: &Dnf) -> IntervalTerm {
    if d.is_empty() {
        return IntervalTerm::E0;
    }
    if d.contains(&BTreeSet::new()) {
        return IntervalTerm::E1;
    }
    let mut monomials: Vec<&Monomial> = d.iter().collect();
    monomials.sort_by_key(|m| (m.len(), m.iter().cloned().collect::<Vec<_>>()));
    let render_mono = |m: &Monomial| {
        let mut lits = m.iter().map(|(v, n)| {
            if *n {
                IntervalTerm::neg(var(*v))
            } else {
                var(*v)
            }
        });
        let first = lits.next().expect("nonempty monomial");
        lits.fold(first, IntervalTerm::meet)
    };
    let mut terms = monomials.into_iter().map(render_mono);
    let first = terms.next().expect("nonempty dnf");
    terms.fold(first, IntervalTerm::join)
}

/// Canonical form of a term. Two terms are equal in the theory exactly when
/// their normal forms coincide syntactically.
pub fn normalize(theory: &IntervalTheory, t: &IntervalTerm) -> IntervalTerm {
    match theory.name {
        TheoryName::Cart => t.clone(),
        TheoryName::CartRev => push_neg(t),
        TheoryName::Dl | TheoryName::Dm => render_dnf(&dnf_of(theory, t, false)),
    }
}

fn push_neg(t: &IntervalTerm) -> IntervalTerm {
    match t {
        IntervalTerm::Op(OpSym::Neg, args) => match push_neg(&args[0]) {
            IntervalTerm::E0 => IntervalTerm::E1,
            IntervalTerm::E1 => IntervalTerm::E0,
            IntervalTerm::Op(OpSym::Neg, mut inner) => inner.pop().expect("unary"),
            v => IntervalTerm::neg(v),
        },
        leaf => leaf.clone(),
    }
}

fn subst_template(tpl: &IntervalTerm, args: &[IntervalTerm]) -> IntervalTerm {
    match tpl {
        IntervalTerm::Var(k) => args[*k].clone(),
        IntervalTerm::E0 => IntervalTerm::E0,
        IntervalTerm::E1 => IntervalTerm::E1,
        IntervalTerm::Op(op, ts) => {
            IntervalTerm::Op(*op, ts.iter().map(|t| subst_template(t, args)).collect())
        }
    }
}

/// Syntactic dualization: swaps the endpoints, fixes variables, and maps
/// each operator through the theory's duality witness.
pub fn dualize(theory: &IntervalTheory, t: &IntervalTerm) -> Result<IntervalTerm, TheoryError> {
    match t {
        IntervalTerm::Var(k) => Ok(var(*k)),
        IntervalTerm::E0 => Ok(IntervalTerm::E1),
        IntervalTerm::E1 => Ok(IntervalTerm::E0),
        IntervalTerm::Op(op, args) => {
            let phi = theory.duality_of(*op)?.clone();
            let duals: Result<Vec<_>, _> = args.iter().map(|a| dualize(theory, a)).collect();
            Ok(subst_template(&phi, &duals?))
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SelfDualReport {
    /// Labels of failing axioms and operators; empty on success.
    pub failures: Vec<String>,
}

impl SelfDualReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the theory's duality map witnesses self-duality: every
/// dualized axiom is derivable, and dualization is an involution on each
/// operator up to derivable equality.
pub fn check_self_dual(theory: &IntervalTheory) -> Result<SelfDualReport, TheoryError> {
    if theory.duality.is_none() {
        return Err(TheoryError::NoDuality(theory.name));
    }
    let mut failures = Vec::new();
    for ax in &theory.axioms {
        let l = dualize(theory, &ax.lhs)?;
        let r = dualize(theory, &ax.rhs)?;
        if !equal_under(theory, &[], &l, &r) {
            failures.push(format!("axiom {}", ax.name));
        }
    }
    for op in &theory.operators {
        let generic = IntervalTerm::Op(*op, (0..op.arity()).map(var).collect());
        let twice = dualize(theory, &dualize(theory, &generic)?)?;
        if !equal_under(theory, &[], &twice, &generic) {
            failures.push(format!("operator {}", op.symbol()));
        }
    }
    Ok(SelfDualReport { failures })
}

/// Extends a self-dual theory with a reversal operator `~` satisfying
/// `~0 = 1`, `~1 = 0`, `~~i = i`, and `~(r(i..)) = phi(r)(~i..)` for every
/// operator `r` of the base theory.
pub fn extend_by_reversal(theory: &IntervalTheory) -> Result<IntervalTheory, TheoryError> {
    if theory.has_op(OpSym::Neg) {
        return Err(TheoryError::AlreadyReversed(theory.name));
    }
    let report = check_self_dual(theory)?;
    if !report.passed() {
        return Err(TheoryError::NotSelfDual(theory.name, report.failures.join("; ")));
    }

    let mut operators = theory.operators.clone();
    operators.push(OpSym::Neg);

    let mut axioms = theory.axioms.clone();
    axioms.push(Axiom { name: "neg-e0", vars: 0, lhs: IntervalTerm::neg(IntervalTerm::E0), rhs: IntervalTerm::E1 });
    axioms.push(Axiom { name: "neg-e1", vars: 0, lhs: IntervalTerm::neg(IntervalTerm::E1), rhs: IntervalTerm::E0 });
    axioms.push(Axiom {
        name: "neg-invol",
        vars: 1,
        lhs: IntervalTerm::neg(IntervalTerm::neg(var(0))),
        rhs: var(0),
    });
    for op in &theory.operators {
        let args: Vec<_> = (0..op.arity()).map(var).collect();
        let lhs = IntervalTerm::neg(IntervalTerm::Op(*op, args.clone()));
        let negged: Vec<_> = args.into_iter().map(IntervalTerm::neg).collect();
        let rhs = subst_template(theory.duality_of(*op)?, &negged);
        let name: &'static str = match op {
            OpSym::Meet => "neg-meet",
            OpSym::Join => "neg-join",
            OpSym::Neg => unreachable!("guarded above"),
        };
        axioms.push(Axiom { name, vars: op.arity(), lhs, rhs });
    }

    let mut duality = theory.duality.clone().expect("checked above");
    duality.push((OpSym::Neg, IntervalTerm::neg(var(0))));

    let (name, test_algebra) = match theory.name {
        TheoryName::Cart => {
            let mut alg = theory.test_algebra.clone();
            alg.tables.push((OpSym::Neg, vec![1, 0]));
            (TheoryName::CartRev, alg)
        }
        TheoryName::Dl => (TheoryName::Dm, dm4_algebra()),
        other => return Err(TheoryError::AlreadyReversed(other)),
    };

    let extended = IntervalTheory { name, operators, axioms, test_algebra, duality: Some(duality) };
    extended.validate()?;
    Ok(extended)
}

/// Head symbol accepted by [`twist_op`]: an operator of the target theory,
/// an endpoint, or the source theory's reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistHead {
    E0,
    E1,
    Neg,
    Op(OpSym),
}

/// One step of the interval twist: endpoints become swapped pairs, the
/// reversal swaps components, and a target operator acts on first
/// components directly and on second components through the duality map.
pub fn twist_op(
    theory: &IntervalTheory,
    head: TwistHead,
    args: &[(IntervalTerm, IntervalTerm)],
) -> Result<(IntervalTerm, IntervalTerm), TheoryError> {
    match head {
        TwistHead::E0 => Ok((IntervalTerm::E0, IntervalTerm::E1)),
        TwistHead::E1 => Ok((IntervalTerm::E1, IntervalTerm::E0)),
        TwistHead::Neg => {
            let (a, b) = args[0].clone();
            Ok((b, a))
        }
        TwistHead::Op(op) => {
            if !theory.has_op(op) {
                return Err(TheoryError::UnknownOperator(op));
            }
            let firsts: Vec<_> = args.iter().map(|(a, _)| a.clone()).collect();
            let seconds: Vec<_> = args.iter().map(|(_, b)| b.clone()).collect();
            let phi = theory.duality_of(op)?;
            Ok((IntervalTerm::Op(op, firsts), subst_template(phi, &seconds)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(name: TheoryName) -> &'static IntervalTheory {
        name.theory()
    }

    #[test]
    fn catalog_validates() {
        for name in TheoryName::all() {
            t(name).validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn dm4_negation_fixpoints() {
        let dm = t(TheoryName::Dm);
        assert_eq!(dm.test_algebra.apply(OpSym::Neg, &[dm4::A]).unwrap(), dm4::A);
        assert_eq!(dm.test_algebra.apply(OpSym::Neg, &[dm4::B]).unwrap(), dm4::B);
        assert_eq!(dm.test_algebra.apply(OpSym::Neg, &[dm4::E0]).unwrap(), dm4::E1);
        // ~i evaluates to a under i |-> a.
        let negi = IntervalTerm::neg(var(0));
        assert_eq!(eval_test_algebra(dm, &[dm4::A], &negi).unwrap(), dm4::A);
    }

    #[test]
    fn equal_under_examples() {
        let dl = t(TheoryName::Dl);
        // absorption
        assert!(equal_under(dl, &[], &IntervalTerm::meet(var(0), IntervalTerm::join(var(0), var(1))), &var(0)));
        // i /\ j = 1 |- i = 1
        assert!(equal_under(
            dl,
            &[(IntervalTerm::meet(var(0), var(1)), IntervalTerm::E1)],
            &var(0),
            &IntervalTerm::E1
        ));
        // double negation in cart-rev
        let cr = t(TheoryName::CartRev);
        assert!(equal_under(cr, &[], &IntervalTerm::neg(IntervalTerm::neg(var(0))), &var(0)));
        // no meet without 1: i /\ j != i in dl
        assert!(!equal_under(dl, &[], &IntervalTerm::meet(var(0), var(1)), &var(0)));
        // hypotheses are order-insensitive and vacuous hypotheses entail anything
        assert!(equal_under(dl, &[(IntervalTerm::E0, IntervalTerm::E1)], &var(0), &var(1)));
    }

    #[test]
    fn kleene_law_fails_in_dm() {
        // i /\ ~i <= j \/ ~j holds in Kleene but not De Morgan algebras, so
        // the four-element algebra must refute the equation form.
        let dm = t(TheoryName::Dm);
        let lhs = IntervalTerm::meet(
            IntervalTerm::meet(var(0), IntervalTerm::neg(var(0))),
            IntervalTerm::join(var(1), IntervalTerm::neg(var(1))),
        );
        let rhs = IntervalTerm::meet(var(0), IntervalTerm::neg(var(0)));
        assert!(!equal_under(dm, &[], &lhs, &rhs));
        // and i /\ ~i is not 0
        assert!(!equal_under(dm, &[], &IntervalTerm::meet(var(0), IntervalTerm::neg(var(0))), &IntervalTerm::E0));
    }

    #[test]
    fn normalize_examples() {
        let dl = t(TheoryName::Dl);
        // i /\ (i \/ j) -> i
        let nf = normalize(dl, &IntervalTerm::meet(var(0), IntervalTerm::join(var(0), var(1))));
        assert_eq!(nf, var(0));
        // (i \/ j) /\ (j \/ i) -> j \/ i? canonical ordering is by variable
        let nf2 = normalize(
            dl,
            &IntervalTerm::meet(IntervalTerm::join(var(0), var(1)), IntervalTerm::join(var(1), var(0))),
        );
        assert_eq!(nf2, IntervalTerm::join(var(0), var(1)));
        let dm = t(TheoryName::Dm);
        // ~(i /\ j) -> ~i \/ ~j
        let nf3 = normalize(dm, &IntervalTerm::neg(IntervalTerm::meet(var(0), var(1))));
        assert_eq!(
            nf3,
            IntervalTerm::join(IntervalTerm::neg(var(0)), IntervalTerm::neg(var(1)))
        );
        // cart-rev: ~~i -> i, ~0 -> 1
        let cr = t(TheoryName::CartRev);
        assert_eq!(normalize(cr, &IntervalTerm::neg(IntervalTerm::neg(var(0)))), var(0));
        assert_eq!(normalize(cr, &IntervalTerm::neg(IntervalTerm::E0)), IntervalTerm::E1);
    }

    #[test]
    fn normalize_idempotent_and_sound() {
        let dm = t(TheoryName::Dm);
        let terms = [
            IntervalTerm::meet(var(0), IntervalTerm::neg(var(0))),
            IntervalTerm::join(IntervalTerm::meet(var(0), var(1)), var(0)),
            IntervalTerm::neg(IntervalTerm::join(var(0), IntervalTerm::neg(var(1)))),
        ];
        for t0 in &terms {
            let n = normalize(dm, t0);
            assert_eq!(normalize(dm, &n), n, "idempotent on {t0}");
            assert!(equal_under(dm, &[], t0, &n), "sound on {t0}");
        }
    }

    #[test]
    fn dualize_and_self_dual() {
        let dl = t(TheoryName::Dl);
        let d = dualize(dl, &IntervalTerm::meet(var(0), IntervalTerm::E1)).unwrap();
        assert_eq!(d, IntervalTerm::join(var(0), IntervalTerm::E0));
        assert!(check_self_dual(dl).unwrap().passed());
        assert!(check_self_dual(t(TheoryName::Dm)).unwrap().passed());
        assert!(check_self_dual(t(TheoryName::Cart)).unwrap().passed());

        // The identity map on operators is not a duality for dl: the
        // dualized unit law i /\ 0 = i fails at i = 1.
        let mut broken = dl.clone();
        broken.duality = Some(vec![
            (OpSym::Meet, IntervalTerm::meet(var(0), var(1))),
            (OpSym::Join, IntervalTerm::join(var(0), var(1))),
        ]);
        let report = check_self_dual(&broken).unwrap();
        assert!(report.failures.iter().any(|f| f.contains("meet-unit")));
    }

    #[test]
    fn extend_by_reversal_guards() {
        let dm = t(TheoryName::Dm);
        match extend_by_reversal(dm) {
            Err(TheoryError::AlreadyReversed(TheoryName::Dm)) => {}
            other => panic!("expected reversal guard, got {other:?}"),
        }
    }

    #[test]
    fn twist_op_examples() {
        let dl = t(TheoryName::Dl);
        // meet on pairs: (i0,i1) /\T (j0,j1) = (i0 /\ j0, i1 \/ j1)
        let (a, b) = twist_op(
            dl,
            TwistHead::Op(OpSym::Meet),
            &[(var(0), var(1)), (var(2), var(3))],
        )
        .unwrap();
        assert_eq!(a, IntervalTerm::meet(var(0), var(2)));
        assert_eq!(b, IntervalTerm::join(var(1), var(3)));
        assert_eq!(twist_op(dl, TwistHead::E0, &[]).unwrap(), (IntervalTerm::E0, IntervalTerm::E1));
        assert_eq!(
            twist_op(dl, TwistHead::Neg, &[(var(0), var(1))]).unwrap(),
            (var(1), var(0))
        );
        // cart has no meet
        assert!(twist_op(t(TheoryName::Cart), TwistHead::Op(OpSym::Meet), &[(var(0), var(1)), (var(2), var(3))]).is_err());
    }
}
