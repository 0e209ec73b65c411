//! Immutable symbolic expression trees.
//!
//! Expressions are canonical by construction: Add and Mul children are
//! flattened and sorted, constants folded, like terms collected, and
//! same-base powers merged. Structural equality is decidable and cheap.
//! Canonicalization is not a zero-equivalence decision procedure; that is
//! the job of [`is_zero`] which combines [`simplify_basic`] with seeded
//! numeric sampling.

mod calculus;
mod eval;
mod parse;
mod zero;

pub use calculus::{
    apply_rewrites, differentiate, instantiate, substitute, substitute_many, RewriteRule,
};
pub use eval::{evaluate, Environment, EvalError};
pub use parse::{parse, ParseCtx, ParseError};
pub use zero::{is_zero, simplify_basic, ZeroVerdict};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A named function symbol of fixed arity, e.g. an arbitrary profile
/// function `W` of one argument or a potential shape `V` of three.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FnSym {
    pub name: String,
    pub arity: usize,
}

impl FnSym {
    pub fn new(name: &str, arity: usize) -> Self {
        FnSym { name: name.to_string(), arity }
    }
}

/// Built-in scalar functions with known derivatives and evaluation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Arctan,
    Arctan2,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Tan => "tan",
            Builtin::Exp => "exp",
            Builtin::Ln => "ln",
            Builtin::Sqrt => "sqrt",
            Builtin::Arctan => "arctan",
            Builtin::Arctan2 => "arctan2",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Arctan2 => 2,
            _ => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            "sin" => Builtin::Sin,
            "cos" => Builtin::Cos,
            "tan" => Builtin::Tan,
            "exp" => Builtin::Exp,
            "ln" => Builtin::Ln,
            "sqrt" => Builtin::Sqrt,
            "arctan" => Builtin::Arctan,
            "arctan2" => Builtin::Arctan2,
            _ => return None,
        })
    }
}

/// An f64 constant with total ordering and bitwise equality so that
/// expression nodes can be hashed and sorted. NaN is rejected at
/// construction.
#[derive(Clone, Copy, Debug)]
pub struct RealBits(pub f64);

impl PartialEq for RealBits {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}
impl Eq for RealBits {}
impl std::hash::Hash for RealBits {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}
impl PartialOrd for RealBits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RealBits {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Expression node. The variant order defines the canonical sort order
/// used inside Add and Mul, with constants first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Integer(BigInt),
    /// Invariant: lowest terms, positive denominator, never integral.
    Rational(BigRational),
    Real(RealBits),
    Symbol(String),
    /// Invariant: length >= 2, flattened, sorted, at most one leading
    /// constant, no zero terms, like terms merged.
    Add(Vec<Expr>),
    /// Invariant: length >= 2, flattened, sorted, at most one leading
    /// constant (never 0 or 1), same-base powers merged.
    Mul(Vec<Expr>),
    Pow(Expr, Expr),
    Apply(FnSym, Vec<Expr>),
    /// Partial derivative of a function symbol: multi-index entry k per
    /// argument slot means k derivatives in that slot. Invariant: the
    /// multi-index has the symbol's arity and at least one positive entry.
    Deriv(FnSym, Vec<u32>, Vec<Expr>),
    Builtin(Builtin, Vec<Expr>),
}

/// Reference-counted immutable expression.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Expr {}
impl std::hash::Hash for Expr {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}
impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            std::cmp::Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

/// Numeric constant value used during folding, with Int -> Rational ->
/// Real promotion.
#[derive(Clone, Debug)]
enum NumVal {
    Int(BigInt),
    Rat(BigRational),
    Real(f64),
}

impl NumVal {
    fn zero() -> Self {
        NumVal::Int(BigInt::zero())
    }
    fn one() -> Self {
        NumVal::Int(BigInt::one())
    }
    fn from_node(n: &Node) -> Option<NumVal> {
        match n {
            Node::Integer(i) => Some(NumVal::Int(i.clone())),
            Node::Rational(r) => Some(NumVal::Rat(r.clone())),
            Node::Real(r) => Some(NumVal::Real(r.0)),
            _ => None,
        }
    }
    fn to_f64(&self) -> f64 {
        match self {
            NumVal::Int(i) => i.to_f64().unwrap_or(f64::NAN),
            NumVal::Rat(r) => rational_to_f64(r),
            NumVal::Real(x) => *x,
        }
    }
    fn add(self, other: NumVal) -> NumVal {
        match (self, other) {
            (NumVal::Int(a), NumVal::Int(b)) => NumVal::Int(a + b),
            (NumVal::Real(a), b) => NumVal::Real(a + b.to_f64()),
            (a, NumVal::Real(b)) => NumVal::Real(a.to_f64() + b),
            (a, b) => NumVal::Rat(a.into_rat() + b.into_rat()),
        }
    }
    fn mul(self, other: NumVal) -> NumVal {
        match (self, other) {
            (NumVal::Int(a), NumVal::Int(b)) => NumVal::Int(a * b),
            (NumVal::Real(a), b) => NumVal::Real(a * b.to_f64()),
            (a, NumVal::Real(b)) => NumVal::Real(a.to_f64() * b),
            (a, b) => NumVal::Rat(a.into_rat() * b.into_rat()),
        }
    }
    fn into_rat(self) -> BigRational {
        match self {
            NumVal::Int(i) => BigRational::from_integer(i),
            NumVal::Rat(r) => r,
            NumVal::Real(_) => unreachable!("real promoted before rational arithmetic"),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            NumVal::Int(i) => i.is_zero(),
            NumVal::Rat(r) => r.is_zero(),
            NumVal::Real(x) => *x == 0.0,
        }
    }
    fn is_one(&self) -> bool {
        match self {
            NumVal::Int(i) => i.is_one(),
            NumVal::Rat(r) => r.is_one(),
            NumVal::Real(x) => *x == 1.0,
        }
    }
    fn to_expr(&self) -> Expr {
        match self {
            NumVal::Int(i) => Expr::from_bigint(i.clone()),
            NumVal::Rat(r) => Expr::from_rational(r.clone()),
            NumVal::Real(x) => Expr::real(*x),
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

impl Expr {
    fn new(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn int(i: i64) -> Expr {
        Expr::new(Node::Integer(BigInt::from(i)))
    }

    pub fn from_bigint(i: BigInt) -> Expr {
        Expr::new(Node::Integer(i))
    }

    /// Exact rational constant, reduced; integral values collapse to the
    /// Integer variant.
    pub fn rat(num: i64, den: i64) -> Expr {
        assert!(den != 0, "rational with zero denominator");
        Expr::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Expr {
        if r.is_integer() {
            Expr::new(Node::Integer(r.to_integer()))
        } else {
            Expr::new(Node::Rational(r))
        }
    }

    pub fn real(x: f64) -> Expr {
        assert!(!x.is_nan(), "NaN constant");
        Expr::new(Node::Real(RealBits(x)))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::new(Node::Symbol(name.to_string()))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(NumVal::from_node(self.node()), Some(v) if v.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(NumVal::from_node(self.node()), Some(v) if v.is_one())
    }

    pub fn is_const(&self) -> bool {
        NumVal::from_node(self.node()).is_some()
    }

    /// The value when the node is a numeric constant.
    pub fn const_f64(&self) -> Option<f64> {
        NumVal::from_node(self.node()).map(|v| v.to_f64())
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self.node() {
            Node::Integer(i) => i.to_i64(),
            _ => None,
        }
    }

    /// Canonical sum. Flattens, folds constants, collects like terms,
    /// drops zeros; an empty or fully cancelled sum is integer 0.
    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t.node() {
                Node::Add(children) => flat.extend(children.iter().cloned()),
                _ => flat.push(t),
            }
        }
        let mut const_sum = NumVal::zero();
        let mut by_core: BTreeMap<Expr, NumVal> = BTreeMap::new();
        for t in flat {
            if let Some(v) = NumVal::from_node(t.node()) {
                const_sum = const_sum.add(v);
                continue;
            }
            let (coeff, core) = split_coeff(&t);
            match by_core.remove(&core) {
                Some(prev) => {
                    let merged = prev.add(coeff);
                    if !merged.is_zero() {
                        by_core.insert(core, merged);
                    }
                }
                None => {
                    by_core.insert(core, coeff);
                }
            }
        }
        let mut out: Vec<Expr> = Vec::with_capacity(by_core.len() + 1);
        if !const_sum.is_zero() {
            out.push(const_sum.to_expr());
        }
        for (core, coeff) in by_core {
            if coeff.is_zero() {
                continue;
            }
            out.push(attach_coeff(coeff, core));
        }
        out.sort();
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::new(Node::Add(out)),
        }
    }

    pub fn add2(a: Expr, b: Expr) -> Expr {
        Expr::add(vec![a, b])
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(vec![a, Expr::neg(b)])
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::mul(vec![Expr::int(-1), e])
    }

    /// Canonical product. Flattens, folds constants (zero annihilates),
    /// merges powers with structurally equal bases.
    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f.node() {
                Node::Mul(children) => flat.extend(children.iter().cloned()),
                _ => flat.push(f),
            }
        }
        let mut const_prod = NumVal::one();
        let mut by_base: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
        let mut order: Vec<Expr> = Vec::new();
        for f in flat {
            if let Some(v) = NumVal::from_node(f.node()) {
                if v.is_zero() {
                    return Expr::zero();
                }
                const_prod = const_prod.mul(v);
                continue;
            }
            let (base, exp) = match f.node() {
                Node::Pow(b, e) => (b.clone(), e.clone()),
                _ => (f.clone(), Expr::one()),
            };
            match by_base.get_mut(&base) {
                Some(exps) => exps.push(exp),
                None => {
                    order.push(base.clone());
                    by_base.insert(base, vec![exp]);
                }
            }
        }
        let mut out: Vec<Expr> = Vec::with_capacity(order.len() + 1);
        for base in order {
            let exps = by_base.remove(&base).unwrap();
            let total = if exps.len() == 1 {
                exps.into_iter().next().unwrap()
            } else {
                Expr::add(exps)
            };
            let factor = Expr::pow(base, total);
            if let Some(v) = NumVal::from_node(factor.node()) {
                if v.is_zero() {
                    return Expr::zero();
                }
                const_prod = const_prod.mul(v);
            } else {
                out.push(factor);
            }
        }
        out.sort();
        if !const_prod.is_one() {
            if const_prod.is_zero() {
                return Expr::zero();
            }
            out.insert(0, const_prod.to_expr());
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::new(Node::Mul(out)),
        }
    }

    pub fn mul2(a: Expr, b: Expr) -> Expr {
        Expr::mul(vec![a, b])
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::mul(vec![a, Expr::pow(b, Expr::int(-1))])
    }

    /// Canonical power with exact folding for rational base and small
    /// integer exponent, power-of-power collapse for integer outer
    /// exponents, and distribution over products for integer exponents.
    /// Even integer powers of sqrt reduce to powers of the radicand.
    pub fn pow(base: Expr, exp: Expr) -> Expr {
        if let Some(e) = exp.as_i64() {
            if e == 0 {
                return Expr::one();
            }
            if e == 1 {
                return base;
            }
            match base.node() {
                Node::Integer(b) => {
                    if b.is_zero() {
                        if e > 0 {
                            return Expr::zero();
                        }
                    } else if e.unsigned_abs() <= 64 {
                        let r = BigRational::from_integer(b.clone());
                        return Expr::from_rational(exact_rat_pow(&r, e));
                    }
                }
                Node::Rational(r) => {
                    if e.unsigned_abs() <= 64 {
                        return Expr::from_rational(exact_rat_pow(r, e));
                    }
                }
                Node::Real(r) => {
                    return Expr::real(r.0.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32));
                }
                Node::Pow(b2, e2) => {
                    return Expr::pow(b2.clone(), Expr::mul2(e2.clone(), Expr::int(e)));
                }
                Node::Mul(fs) => {
                    let powered = fs.iter().map(|f| Expr::pow(f.clone(), Expr::int(e))).collect();
                    return Expr::mul(powered);
                }
                _ => {}
            }
        }
        if base.is_one_const() {
            return Expr::one();
        }
        if let Node::Rational(q) = exp.node() {
            let base_rat = match base.node() {
                Node::Integer(i) => Some(BigRational::from_integer(i.clone())),
                Node::Rational(r) => Some(r.clone()),
                _ => None,
            };
            if let Some(r) = base_rat {
                if r.is_zero() && q.is_positive() {
                    return Expr::zero();
                }
                if let (Some(p), Some(den)) = (q.numer().to_i64(), q.denom().to_u32()) {
                    if p.unsigned_abs() <= 64 && den <= 64 {
                        if let Some(root) = exact_rat_root(&r, den) {
                            return Expr::from_rational(exact_rat_pow(&root, p));
                        }
                    }
                }
            }
        }
        if let (Node::Real(b), Some(e)) = (base.node(), exp.const_f64()) {
            let v = b.0.powf(e);
            if v.is_finite() {
                return Expr::real(v);
            }
        }
        Expr::new(Node::Pow(base, exp))
    }

    pub fn apply(f: FnSym, args: Vec<Expr>) -> Expr {
        assert_eq!(f.arity, args.len(), "arity mismatch applying {}", f.name);
        Expr::new(Node::Apply(f, args))
    }

    /// Derivative node for a function symbol. An all-zero multi-index is
    /// a plain application.
    pub fn deriv(f: FnSym, index: Vec<u32>, args: Vec<Expr>) -> Expr {
        assert_eq!(f.arity, index.len(), "multi-index length for {}", f.name);
        assert_eq!(f.arity, args.len(), "arity mismatch applying {}", f.name);
        if index.iter().all(|&k| k == 0) {
            return Expr::apply(f, args);
        }
        Expr::new(Node::Deriv(f, index, args))
    }

    /// Builtin application. Square roots normalize to rational powers so
    /// radicals have a single canonical form; constant arguments fold.
    pub fn builtin(b: Builtin, mut args: Vec<Expr>) -> Expr {
        assert_eq!(b.arity(), args.len(), "arity mismatch applying {}", b.name());
        if b == Builtin::Sqrt {
            return Expr::pow(args.pop().unwrap(), Expr::rat(1, 2));
        }
        if args.iter().all(|a| matches!(a.node(), Node::Real(_))) {
            let xs: Vec<f64> = args.iter().map(|a| a.const_f64().unwrap()).collect();
            let v = match b {
                Builtin::Sin => xs[0].sin(),
                Builtin::Cos => xs[0].cos(),
                Builtin::Tan => xs[0].tan(),
                Builtin::Exp => xs[0].exp(),
                Builtin::Ln => xs[0].ln(),
                Builtin::Arctan => xs[0].atan(),
                Builtin::Arctan2 => xs[0].atan2(xs[1]),
                Builtin::Sqrt => unreachable!(),
            };
            if v.is_finite() {
                return Expr::real(v);
            }
        }
        if b != Builtin::Arctan2 {
            let a = &args[0];
            if a.is_zero_const() {
                match b {
                    Builtin::Sin | Builtin::Tan | Builtin::Arctan => return Expr::zero(),
                    Builtin::Cos | Builtin::Exp => return Expr::one(),
                    _ => {}
                }
            }
            if a.is_one_const() && b == Builtin::Ln {
                return Expr::zero();
            }
        }
        Expr::new(Node::Builtin(b, args))
    }

    /// All symbol names occurring in the expression.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |n| {
            if let Node::Symbol(s) = n {
                out.insert(s.clone());
            }
        });
        out
    }

    /// All function symbols occurring in Apply or Deriv nodes.
    pub fn function_symbols(&self) -> BTreeSet<FnSym> {
        let mut out = BTreeSet::new();
        self.walk(&mut |n| match n {
            Node::Apply(f, _) | Node::Deriv(f, _, _) => {
                out.insert(f.clone());
            }
            _ => {}
        });
        out
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        let mut found = false;
        self.walk(&mut |n| {
            if let Node::Symbol(s) = n {
                if s == name {
                    found = true;
                }
            }
        });
        found
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    fn walk(&self, f: &mut impl FnMut(&Node)) {
        f(self.node());
        match self.node() {
            Node::Add(xs) | Node::Mul(xs) => {
                for x in xs {
                    x.walk(f);
                }
            }
            Node::Pow(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Node::Apply(_, xs) | Node::Deriv(_, _, xs) | Node::Builtin(_, xs) => {
                for x in xs {
                    x.walk(f);
                }
            }
            _ => {}
        }
    }

    /// Children of this node, for generic tree transforms.
    pub(crate) fn rebuild(&self, children: Vec<Expr>) -> Expr {
        match self.node() {
            Node::Add(_) => Expr::add(children),
            Node::Mul(_) => Expr::mul(children),
            Node::Pow(_, _) => {
                let mut it = children.into_iter();
                let b = it.next().unwrap();
                let e = it.next().unwrap();
                Expr::pow(b, e)
            }
            Node::Apply(f, _) => Expr::apply(f.clone(), children),
            Node::Deriv(f, idx, _) => Expr::deriv(f.clone(), idx.clone(), children),
            Node::Builtin(b, _) => Expr::builtin(*b, children),
            _ => self.clone(),
        }
    }

    pub(crate) fn children(&self) -> Vec<Expr> {
        match self.node() {
            Node::Add(xs) | Node::Mul(xs) => xs.clone(),
            Node::Pow(a, b) => vec![a.clone(), b.clone()],
            Node::Apply(_, xs) | Node::Deriv(_, _, xs) | Node::Builtin(_, xs) => xs.clone(),
            _ => Vec::new(),
        }
    }
}

fn exact_rat_pow(r: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e < 0 { r.recip() } else { r.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Exact n-th root of a nonnegative rational, when one exists.
fn exact_rat_root(r: &BigRational, n: u32) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num_root = r.numer().nth_root(n);
    let den_root = r.denom().nth_root(n);
    let mut np = BigInt::one();
    let mut dp = BigInt::one();
    for _ in 0..n {
        np *= &num_root;
        dp *= &den_root;
    }
    if &np == r.numer() && &dp == r.denom() {
        Some(BigRational::new(num_root, den_root))
    } else {
        None
    }
}

/// Splits a canonical term into (numeric coefficient, coefficient-free
/// core) for like-term collection.
fn split_coeff(e: &Expr) -> (NumVal, Expr) {
    if let Node::Mul(fs) = e.node() {
        if let Some(v) = NumVal::from_node(fs[0].node()) {
            let rest: Vec<Expr> = fs[1..].to_vec();
            let core = if rest.len() == 1 {
                rest.into_iter().next().unwrap()
            } else {
                Expr::new(Node::Mul(rest))
            };
            return (v, core);
        }
    }
    (NumVal::one(), e.clone())
}

/// Inverse of split_coeff: rebuilds coefficient * core without a full
/// canonicalization pass (the inputs already are canonical).
fn attach_coeff(coeff: NumVal, core: Expr) -> Expr {
    if coeff.is_one() {
        return core;
    }
    let c = coeff.to_expr();
    match core.node() {
        Node::Mul(fs) => {
            let mut v = Vec::with_capacity(fs.len() + 1);
            v.push(c);
            v.extend(fs.iter().cloned());
            Expr::new(Node::Mul(v))
        }
        _ => Expr::new(Node::Mul(vec![c, core])),
    }
}

// ---------------------------------------------------------------------
// Printing. Output conforms to the parser grammar and round-trips to a
// structurally equal expression.

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_POW: u8 = 3;
const PREC_ATOM: u8 = 4;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, f, 0)
    }
}

fn node_prec(n: &Node) -> u8 {
    match n {
        Node::Add(_) => PREC_ADD,
        Node::Mul(_) => PREC_MUL,
        Node::Rational(_) => PREC_MUL,
        Node::Integer(i) => {
            if i.is_negative() {
                PREC_ADD
            } else {
                PREC_ATOM
            }
        }
        Node::Real(r) => {
            if r.0 < 0.0 {
                PREC_ADD
            } else {
                PREC_ATOM
            }
        }
        Node::Pow(_, _) => PREC_POW,
        _ => PREC_ATOM,
    }
}

/// Splits off a leading minus sign for additive printing.
fn sign_split(e: &Expr) -> (bool, Expr) {
    match e.node() {
        Node::Integer(i) if i.is_negative() => (true, Expr::from_bigint(-i.clone())),
        Node::Rational(r) if r.is_negative() => (true, Expr::from_rational(-r.clone())),
        Node::Real(r) if r.0 < 0.0 => (true, Expr::real(-r.0)),
        Node::Mul(fs) => {
            if let Some(v) = NumVal::from_node(fs[0].node()) {
                let neg = match &v {
                    NumVal::Int(i) => i.is_negative(),
                    NumVal::Rat(r) => r.is_negative(),
                    NumVal::Real(x) => *x < 0.0,
                };
                if neg {
                    let flipped = v.mul(NumVal::Int(BigInt::from(-1)));
                    let rest: Vec<Expr> = fs[1..].to_vec();
                    let core = if rest.len() == 1 {
                        rest.into_iter().next().unwrap()
                    } else {
                        Expr::new(Node::Mul(rest))
                    };
                    return (true, attach_coeff(flipped, core));
                }
            }
            (false, e.clone())
        }
        _ => (false, e.clone()),
    }
}

/// Writes a constant with no surrounding parentheses, as it appears at
/// the head of a product or as a standalone term.
fn write_const_raw(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match n {
        Node::Integer(i) => write!(f, "{}", i),
        Node::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        Node::Real(r) => write!(f, "{:?}", r.0),
        _ => unreachable!("constant node expected"),
    }
}

fn write_args(args: &[Expr], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write_prec(a, f, 0)?;
    }
    write!(f, ")")
}

fn write_prec(e: &Expr, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    if node_prec(e.node()) < min_prec {
        write!(f, "(")?;
        write_prec(e, f, 0)?;
        return write!(f, ")");
    }
    match e.node() {
        Node::Integer(_) | Node::Rational(_) | Node::Real(_) => write_const_raw(e.node(), f),
        Node::Symbol(s) => write!(f, "{}", s),
        Node::Add(terms) => {
            for (i, t) in terms.iter().enumerate() {
                let (neg, abs) = sign_split(t);
                if i == 0 {
                    if neg {
                        write!(f, "-")?;
                    }
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                write_prec(&abs, f, PREC_MUL)?;
            }
            Ok(())
        }
        Node::Mul(factors) => {
            for (i, x) in factors.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                if i == 0 && x.is_const() {
                    write_const_raw(x.node(), f)?;
                } else {
                    write_prec(x, f, PREC_POW)?;
                }
            }
            Ok(())
        }
        Node::Pow(b, e2) => {
            write_prec(b, f, PREC_ATOM)?;
            write!(f, "^")?;
            write_prec(e2, f, PREC_ATOM)
        }
        Node::Apply(fs, args) => {
            write!(f, "{}", fs.name)?;
            write_args(args, f)
        }
        Node::Deriv(fs, idx, args) => {
            write!(f, "{}__", fs.name)?;
            for (i, k) in idx.iter().enumerate() {
                if i > 0 {
                    write!(f, "_")?;
                }
                write!(f, "{}", k)?;
            }
            write_args(args, f)
        }
        Node::Builtin(b, args) => {
            write!(f, "{}", b.name())?;
            write_args(args, f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::sym("x")
    }
    fn y() -> Expr {
        Expr::sym("y")
    }

    #[test]
    fn add_collects_like_terms() {
        let e = Expr::add(vec![x(), x(), Expr::mul2(Expr::int(-2), x())]);
        assert_eq!(e, Expr::zero());
    }

    #[test]
    fn add_folds_constants_exactly() {
        let e = Expr::add(vec![Expr::rat(1, 3), Expr::rat(1, 6), Expr::rat(1, 2)]);
        assert_eq!(e, Expr::one());
    }

    #[test]
    fn mul_merges_powers() {
        let e = Expr::mul(vec![x(), Expr::pow(x(), Expr::int(2))]);
        assert_eq!(e, Expr::pow(x(), Expr::int(3)));
    }

    #[test]
    fn mul_zero_annihilates() {
        let e = Expr::mul(vec![x(), Expr::zero(), y()]);
        assert_eq!(e, Expr::zero());
    }

    #[test]
    fn pow_folds_rationals() {
        assert_eq!(Expr::pow(Expr::rat(2, 3), Expr::int(2)), Expr::rat(4, 9));
        assert_eq!(Expr::pow(Expr::int(2), Expr::int(-1)), Expr::rat(1, 2));
    }

    #[test]
    fn pow_of_pow_collapses_for_integer_outer() {
        let inner = Expr::pow(x(), Expr::sym("a"));
        let e = Expr::pow(inner, Expr::int(2));
        assert_eq!(e, Expr::pow(x(), Expr::mul2(Expr::int(2), Expr::sym("a"))));
    }

    #[test]
    fn sqrt_squared_is_radicand() {
        let r = Expr::builtin(Builtin::Sqrt, vec![Expr::add2(
            Expr::pow(y(), Expr::int(2)),
            Expr::pow(Expr::sym("z"), Expr::int(2)),
        )]);
        let e = Expr::pow(r.clone(), Expr::int(2));
        assert_eq!(
            e,
            Expr::add2(
                Expr::pow(y(), Expr::int(2)),
                Expr::pow(Expr::sym("z"), Expr::int(2))
            )
        );
        let inv = Expr::pow(r, Expr::int(-2));
        assert_eq!(
            inv,
            Expr::pow(
                Expr::add2(
                    Expr::pow(y(), Expr::int(2)),
                    Expr::pow(Expr::sym("z"), Expr::int(2))
                ),
                Expr::int(-1)
            )
        );
    }

    #[test]
    fn builtin_exact_special_values() {
        assert_eq!(Expr::builtin(Builtin::Sin, vec![Expr::zero()]), Expr::zero());
        assert_eq!(Expr::builtin(Builtin::Exp, vec![Expr::zero()]), Expr::one());
        assert_eq!(Expr::builtin(Builtin::Ln, vec![Expr::one()]), Expr::zero());
        assert_eq!(Expr::builtin(Builtin::Sqrt, vec![Expr::int(4)]), Expr::int(2));
    }

    #[test]
    fn display_is_readable() {
        let e = Expr::add(vec![
            Expr::mul(vec![Expr::int(-2), Expr::sym("u"), Expr::sym("v")]),
            Expr::pow(y(), Expr::int(2)),
        ]);
        assert_eq!(e.to_string(), "-2*u*v + y^2");
    }

    #[test]
    fn display_parenthesizes_sums_inside_products() {
        let e = Expr::mul2(Expr::int(2), Expr::add2(x(), y()));
        assert_eq!(e.to_string(), "2*(x + y)");
    }

    #[test]
    fn display_negative_exponent() {
        let e = Expr::pow(x(), Expr::int(-2));
        assert_eq!(e.to_string(), "x^(-2)");
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let a = Expr::mul(vec![y(), x(), Expr::int(3)]);
        let b = Expr::mul(vec![Expr::int(3), x(), y()]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
}
