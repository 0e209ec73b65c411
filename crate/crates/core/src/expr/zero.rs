//! Zero-equivalence testing: a symbolic tier that expands and collects,
//! then a numeric tier that samples seeded points and judges scaled
//! residuals.

use super::{Expr, Node};
use crate::expr::{Environment, EvalError};
use crate::verify::{scaled_residual, Sampler, Tolerance};
use std::collections::BTreeMap;

/// Expands products of sums and small positive integer powers of sums,
/// then rebuilds canonically so like terms collect. Identical
/// subexpressions subtracted from each other always reduce to zero.
pub fn simplify_basic(e: &Expr) -> Expr {
    expand(e)
}

const MAX_BINOMIAL_POWER: i64 = 8;

fn expand(e: &Expr) -> Expr {
    match e.node() {
        Node::Integer(_) | Node::Rational(_) | Node::Real(_) | Node::Symbol(_) => e.clone(),
        Node::Add(terms) => Expr::add(terms.iter().map(expand).collect()),
        Node::Mul(factors) => {
            let factors: Vec<Expr> = factors.iter().map(expand).collect();
            distribute(factors)
        }
        Node::Pow(b, x) => {
            let b = expand(b);
            let x = expand(x);
            if let Some(n) = x.as_i64() {
                if (2..=MAX_BINOMIAL_POWER).contains(&n) {
                    if let Node::Add(_) = b.node() {
                        let factors = vec![b; n as usize];
                        return distribute(factors);
                    }
                }
            }
            Expr::pow(b, x)
        }
        _ => {
            let children: Vec<Expr> = e.children().iter().map(expand).collect();
            e.rebuild(children)
        }
    }
}

/// Multiplies out a factor list, distributing over any Add factors.
fn distribute(factors: Vec<Expr>) -> Expr {
    let mut terms: Vec<Expr> = vec![Expr::one()];
    for f in factors {
        match f.node() {
            Node::Add(adds) => {
                let mut next = Vec::with_capacity(terms.len() * adds.len());
                for t in &terms {
                    for a in adds {
                        next.push(Expr::mul2(t.clone(), a.clone()));
                    }
                }
                terms = next;
            }
            _ => {
                for t in &mut terms {
                    *t = Expr::mul2(t.clone(), f.clone());
                }
            }
        }
    }
    Expr::add(terms)
}

/// Outcome of a zero test.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroVerdict {
    /// Reduced to literal zero by expansion and collection.
    SymbolicZero,
    /// Could not be reduced symbolically, but every sampled point gave a
    /// scaled residual at or below tolerance.
    NumericZero { max_scaled: f64 },
    /// A sampled point where the residual exceeds tolerance.
    NonZero {
        witness: BTreeMap<String, f64>,
        value: f64,
        scaled: f64,
    },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn max_scaled(&self) -> f64 {
        match self {
            ZeroVerdict::SymbolicZero => 0.0,
            ZeroVerdict::NumericZero { max_scaled } => *max_scaled,
            ZeroVerdict::NonZero { scaled, .. } => *scaled,
        }
    }
}

/// Expression size above which the symbolic tier is skipped; expansion
/// of very large residuals can blow up combinatorially, and the numeric
/// tier decides those directly.
const SYMBOLIC_NODE_LIMIT: usize = 10_000;

/// Decides whether `e` vanishes identically on the sampler's box. Free
/// symbols take sampled values; function symbols take seeded free jets
/// with a per-point seed derived from the sampler seed, so a pass means
/// the identity holds for arbitrary smooth profile functions to within
/// tolerance.
pub fn is_zero(e: &Expr, sampler: &Sampler, tol: Tolerance) -> Result<ZeroVerdict, EvalError> {
    if e.is_zero_const() {
        return Ok(ZeroVerdict::SymbolicZero);
    }
    let candidate = if e.node_count() <= SYMBOLIC_NODE_LIMIT {
        let s = simplify_basic(e);
        if s.is_zero_const() {
            return Ok(ZeroVerdict::SymbolicZero);
        }
        s
    } else {
        e.clone()
    };
    let points = sampler.points()?;
    let mut max_scaled = 0.0f64;
    for (i, point) in points.iter().enumerate() {
        let env = Environment {
            values: point.clone(),
            instantiations: BTreeMap::new(),
            jet_values: BTreeMap::new(),
            jet_seed: Some(sampler.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        };
        let sample = scaled_residual(&candidate, &env, tol)?;
        if sample.scaled > tol.rel {
            return Ok(ZeroVerdict::NonZero {
                witness: point.clone(),
                value: sample.value,
                scaled: sample.scaled,
            });
        }
        max_scaled = max_scaled.max(sample.scaled);
    }
    Ok(ZeroVerdict::NumericZero { max_scaled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, ParseCtx};

    fn p(src: &str) -> Expr {
        parse(src, &ParseCtx::new()).unwrap()
    }

    fn sampler() -> Sampler {
        Sampler::chart(42)
    }

    #[test]
    fn expansion_cancels_identical_differences() {
        let e = p("(u + v)^2 - u^2 - 2*u*v - v^2");
        assert_eq!(simplify_basic(&e), Expr::zero());
    }

    #[test]
    fn expansion_distributes_products() {
        let e = p("(u + v)*(u - v)");
        assert_eq!(simplify_basic(&e), p("u^2 - v^2"));
    }

    #[test]
    fn symbolic_zero_detected() {
        let e = p("(y + z)^3 - y^3 - 3*y^2*z - 3*y*z^2 - z^3");
        let v = is_zero(&e, &sampler(), Tolerance::default()).unwrap();
        assert_eq!(v, ZeroVerdict::SymbolicZero);
    }

    #[test]
    fn numeric_zero_for_trig_identity() {
        let e = p("sin(u)^2 + cos(u)^2 - 1");
        let v = is_zero(&e, &sampler(), Tolerance::default()).unwrap();
        assert!(matches!(v, ZeroVerdict::NumericZero { .. }), "{:?}", v);
    }

    #[test]
    fn nonzero_produces_checkable_witness() {
        let e = p("y*z - 1/10");
        let tol = Tolerance::default();
        let v = is_zero(&e, &sampler(), tol).unwrap();
        match v {
            ZeroVerdict::NonZero { witness, value, scaled } => {
                let env = Environment { values: witness, ..Environment::default() };
                let redo = scaled_residual(&e, &env, tol).unwrap();
                assert_eq!(redo.value, value);
                assert_eq!(redo.scaled, scaled);
                assert!(scaled > tol.rel);
            }
            other => panic!("expected NonZero, got {:?}", other),
        }
    }

    #[test]
    fn free_function_identity_passes() {
        let c = ParseCtx::new().with_function("W", 1);
        // Product rule residual for arbitrary W: d/du (u W) - W - u W' = 0.
        let e = crate::expr::differentiate(&parse("u*W(u)", &c).unwrap(), "u");
        let resid = Expr::sub(e, parse("W(u) + u*W__1(u)", &c).unwrap());
        let v = is_zero(&resid, &sampler(), Tolerance::default()).unwrap();
        assert_eq!(v, ZeroVerdict::SymbolicZero);
    }

    #[test]
    fn free_function_nonidentity_fails() {
        let c = ParseCtx::new().with_function("W", 1);
        let e = parse("W__1(u) - W(u)", &c).unwrap();
        let v = is_zero(&e, &sampler(), Tolerance::default()).unwrap();
        assert!(matches!(v, ZeroVerdict::NonZero { .. }));
    }

    #[test]
    fn determinism_same_seed_same_verdict() {
        let e = p("sin(u)^2 + cos(u)^2 - 1");
        let a = is_zero(&e, &sampler(), Tolerance::default()).unwrap();
        let b = is_zero(&e, &sampler(), Tolerance::default()).unwrap();
        assert_eq!(format!("{:?}", a), format!("{:?}", b));
    }

    #[test]
    fn exclusions_keep_points_off_singular_loci() {
        // 1/(y - z) blows up near y = z; exclusions keep the test stable.
        let s = Sampler::chart(7).exclude(p("y - z"), 1e-2);
        let e = p("(y - z)^(-1) - (y - z)^(-1)");
        assert!(is_zero(&e, &s, Tolerance::default()).unwrap().is_zero());
        for pt in s.points().unwrap() {
            assert!((pt["y"] - pt["z"]).abs() >= 1e-2);
        }
    }
}
