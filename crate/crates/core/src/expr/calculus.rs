//! Symbolic differentiation, substitution, function instantiation, and
//! derivative rewriting.

use super::{Builtin, Expr, FnSym, Node};
use std::collections::BTreeMap;

/// Partial derivative with respect to a coordinate symbol. Function
/// applications differentiate by the chain rule into derivative nodes.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    match e.node() {
        Node::Integer(_) | Node::Rational(_) | Node::Real(_) => Expr::zero(),
        Node::Symbol(s) => {
            if s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(terms) => Expr::add(terms.iter().map(|t| differentiate(t, var)).collect()),
        Node::Mul(factors) => {
            let mut terms = Vec::with_capacity(factors.len());
            for (i, fi) in factors.iter().enumerate() {
                let d = differentiate(fi, var);
                if d.is_zero_const() {
                    continue;
                }
                let mut parts = vec![d];
                for (j, fj) in factors.iter().enumerate() {
                    if i != j {
                        parts.push(fj.clone());
                    }
                }
                terms.push(Expr::mul(parts));
            }
            Expr::add(terms)
        }
        Node::Pow(b, x) => {
            let db = differentiate(b, var);
            let dx = differentiate(x, var);
            let mut terms = Vec::new();
            if !db.is_zero_const() {
                // x * b^(x-1) * b'
                terms.push(Expr::mul(vec![
                    x.clone(),
                    Expr::pow(b.clone(), Expr::sub(x.clone(), Expr::one())),
                    db,
                ]));
            }
            if !dx.is_zero_const() {
                // b^x * ln(b) * x'
                terms.push(Expr::mul(vec![
                    Expr::pow(b.clone(), x.clone()),
                    Expr::builtin(Builtin::Ln, vec![b.clone()]),
                    dx,
                ]));
            }
            Expr::add(terms)
        }
        Node::Apply(f, args) => chain_rule(f, &vec![0; f.arity], args, var),
        Node::Deriv(f, idx, args) => chain_rule(f, idx, args, var),
        Node::Builtin(b, args) => {
            let terms = match b {
                Builtin::Sin => vec![(
                    Expr::builtin(Builtin::Cos, vec![args[0].clone()]),
                    differentiate(&args[0], var),
                )],
                Builtin::Cos => vec![(
                    Expr::neg(Expr::builtin(Builtin::Sin, vec![args[0].clone()])),
                    differentiate(&args[0], var),
                )],
                Builtin::Tan => {
                    let t = Expr::builtin(Builtin::Tan, vec![args[0].clone()]);
                    vec![(
                        Expr::add2(Expr::one(), Expr::pow(t, Expr::int(2))),
                        differentiate(&args[0], var),
                    )]
                }
                Builtin::Exp => vec![(e.clone(), differentiate(&args[0], var))],
                Builtin::Ln => vec![(
                    Expr::pow(args[0].clone(), Expr::int(-1)),
                    differentiate(&args[0], var),
                )],
                Builtin::Arctan => vec![(
                    Expr::pow(
                        Expr::add2(Expr::one(), Expr::pow(args[0].clone(), Expr::int(2))),
                        Expr::int(-1),
                    ),
                    differentiate(&args[0], var),
                )],
                Builtin::Arctan2 => {
                    // d arctan2(a, b) = (b da - a db) / (a^2 + b^2)
                    let a = args[0].clone();
                    let b2 = args[1].clone();
                    let denom = Expr::pow(
                        Expr::add2(
                            Expr::pow(a.clone(), Expr::int(2)),
                            Expr::pow(b2.clone(), Expr::int(2)),
                        ),
                        Expr::int(-1),
                    );
                    vec![
                        (
                            Expr::mul2(b2.clone(), denom.clone()),
                            differentiate(&a, var),
                        ),
                        (
                            Expr::neg(Expr::mul2(a.clone(), denom)),
                            differentiate(&b2, var),
                        ),
                    ]
                }
                Builtin::Sqrt => unreachable!("sqrt normalizes to a rational power"),
            };
            Expr::add(
                terms
                    .into_iter()
                    .map(|(outer, inner)| Expr::mul2(outer, inner))
                    .collect(),
            )
        }
    }
}

fn chain_rule(f: &FnSym, idx: &[u32], args: &[Expr], var: &str) -> Expr {
    let mut terms = Vec::new();
    for (k, arg) in args.iter().enumerate() {
        let d = differentiate(arg, var);
        if d.is_zero_const() {
            continue;
        }
        let mut bumped = idx.to_vec();
        bumped[k] += 1;
        terms.push(Expr::mul2(
            Expr::deriv(f.clone(), bumped, args.to_vec()),
            d,
        ));
    }
    Expr::add(terms)
}

/// Replaces a symbol everywhere, rebuilding canonically.
pub fn substitute(e: &Expr, name: &str, replacement: &Expr) -> Expr {
    let mut map = BTreeMap::new();
    map.insert(name.to_string(), replacement.clone());
    substitute_many(e, &map)
}

/// Simultaneous substitution of several symbols.
pub fn substitute_many(e: &Expr, map: &BTreeMap<String, Expr>) -> Expr {
    if map.is_empty() {
        return e.clone();
    }
    match e.node() {
        Node::Symbol(s) => match map.get(s) {
            Some(r) => r.clone(),
            None => e.clone(),
        },
        Node::Integer(_) | Node::Rational(_) | Node::Real(_) => e.clone(),
        _ => {
            let children: Vec<Expr> =
                e.children().iter().map(|c| substitute_many(c, map)).collect();
            e.rebuild(children)
        }
    }
}

/// Formal parameter name for argument slot `i` (zero-based).
pub(crate) fn formal(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Replaces every application or derivative of `f` by the concrete body,
/// written in formal parameters x1..xk. Derivative nodes differentiate
/// the body in formal space before the arguments are substituted.
pub fn instantiate(e: &Expr, f: &FnSym, body: &Expr) -> Expr {
    match e.node() {
        Node::Apply(g, args) if g == f => {
            let args: Vec<Expr> = args.iter().map(|a| instantiate(a, f, body)).collect();
            bind_formals(body, &args)
        }
        Node::Deriv(g, idx, args) if g == f => {
            let args: Vec<Expr> = args.iter().map(|a| instantiate(a, f, body)).collect();
            let mut d = body.clone();
            for (slot, &k) in idx.iter().enumerate() {
                let name = formal(slot);
                for _ in 0..k {
                    d = differentiate(&d, &name);
                }
            }
            bind_formals(&d, &args)
        }
        Node::Symbol(_) | Node::Integer(_) | Node::Rational(_) | Node::Real(_) => e.clone(),
        _ => {
            let children: Vec<Expr> = e.children().iter().map(|c| instantiate(c, f, body)).collect();
            e.rebuild(children)
        }
    }
}

fn bind_formals(body: &Expr, args: &[Expr]) -> Expr {
    let mut map = BTreeMap::new();
    for (i, a) in args.iter().enumerate() {
        map.insert(formal(i), a.clone());
    }
    substitute_many(body, &map)
}

/// Rewrite rule for derivative closure: any derivative of `function` at
/// or above `threshold` is replaced by the matching derivative of
/// `replacement`, which is written in formal parameters x1..xk. Encodes
/// defining relations such as second-order linear systems satisfied by
/// profile functions.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub function: FnSym,
    pub threshold: Vec<u32>,
    pub replacement: Expr,
}

impl RewriteRule {
    pub fn new(function: FnSym, threshold: Vec<u32>, replacement: Expr) -> Self {
        assert_eq!(function.arity, threshold.len(), "threshold length for {}", function.name);
        assert!(
            threshold.iter().any(|&k| k > 0),
            "rewrite threshold must involve at least one derivative"
        );
        RewriteRule { function, threshold, replacement }
    }
}

/// Applies rewrite rules to a fixed point (bounded by an iteration cap
/// that no terminating rule set reaches in practice).
pub fn apply_rewrites(e: &Expr, rules: &[RewriteRule]) -> Expr {
    let mut cur = e.clone();
    for _ in 0..64 {
        let next = rewrite_once(&cur, rules);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    cur
}

fn rewrite_once(e: &Expr, rules: &[RewriteRule]) -> Expr {
    if let Node::Deriv(f, idx, args) = e.node() {
        for rule in rules {
            if &rule.function == f
                && idx.iter().zip(&rule.threshold).all(|(m, t)| m >= t)
            {
                let args: Vec<Expr> =
                    args.iter().map(|a| rewrite_once(a, rules)).collect();
                let mut d = rule.replacement.clone();
                for (slot, (&m, &t)) in idx.iter().zip(&rule.threshold).enumerate() {
                    let name = formal(slot);
                    for _ in 0..(m - t) {
                        d = differentiate(&d, &name);
                    }
                }
                return bind_formals(&d, &args);
            }
        }
    }
    match e.node() {
        Node::Symbol(_) | Node::Integer(_) | Node::Rational(_) | Node::Real(_) => e.clone(),
        _ => {
            let children: Vec<Expr> =
                e.children().iter().map(|c| rewrite_once(c, rules)).collect();
            e.rebuild(children)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, ParseCtx};

    fn p(src: &str) -> Expr {
        parse(src, &ParseCtx::new()).unwrap()
    }

    #[test]
    fn polynomial_derivative() {
        let e = p("y^3 + 2*y*z");
        let d = differentiate(&e, "y");
        assert_eq!(d, p("3*y^2 + 2*z"));
    }

    #[test]
    fn sqrt_derivative_lands_in_power_form() {
        let e = p("sqrt(y^2 + z^2)");
        let d = differentiate(&e, "y");
        assert_eq!(d, p("y*(y^2 + z^2)^(-1/2)"));
    }

    #[test]
    fn linearity() {
        let a = p("exp(u)*y");
        let b = p("u^2*z");
        let lhs = differentiate(&Expr::add2(a.clone(), b.clone()), "u");
        let rhs = Expr::add2(differentiate(&a, "u"), differentiate(&b, "u"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule_makes_derivative_nodes() {
        let c = ParseCtx::new().with_function("W", 1);
        let e = parse("W(u^2)", &c).unwrap();
        let d = differentiate(&e, "u");
        let expect = Expr::mul(vec![
            Expr::int(2),
            Expr::sym("u"),
            Expr::deriv(
                FnSym::new("W", 1),
                vec![1],
                vec![p("u^2")],
            ),
        ]);
        assert_eq!(d, expect);
    }

    #[test]
    fn mixed_partials_commute() {
        let c = ParseCtx::new().with_function("H", 3);
        let e = parse("H(u, y, z)*exp(y*z)", &c).unwrap();
        let dyz = differentiate(&differentiate(&e, "y"), "z");
        let dzy = differentiate(&differentiate(&e, "z"), "y");
        assert_eq!(dyz, dzy);
    }

    #[test]
    fn substitution_composes() {
        let e = p("u^2 + u*y");
        let s1 = substitute(&e, "u", &p("y + 1"));
        let expect = p("(y + 1)^2 + (y + 1)*y");
        assert_eq!(s1, expect);
    }

    #[test]
    fn simultaneous_substitution_avoids_capture() {
        let e = p("a*b");
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), p("b"));
        map.insert("b".to_string(), p("a"));
        assert_eq!(substitute_many(&e, &map), p("a*b"));
    }

    #[test]
    fn instantiate_plain_application() {
        let c = ParseCtx::new().with_function("V", 3);
        let e = parse("V(u, y, z)", &c).unwrap();
        let body = p("x1 + x2*x3");
        assert_eq!(instantiate(&e, &FnSym::new("V", 3), &body), p("u + y*z"));
    }

    #[test]
    fn instantiate_differentiates_in_formal_space() {
        let c = ParseCtx::new().with_function("W", 1);
        let e = parse("W__2(u^2)", &c).unwrap();
        let body = p("sin(x1)");
        // second derivative of sin is -sin, evaluated at u^2
        assert_eq!(
            instantiate(&e, &FnSym::new("W", 1), &body),
            p("-sin(u^2)")
        );
    }

    #[test]
    fn rewrite_replaces_high_derivatives() {
        // W'' -> -W, so W''' -> -W' and W'''' -> W.
        let w = FnSym::new("W", 1);
        let rule = RewriteRule::new(w.clone(), vec![2], p("-W(x1)"));
        let c = ParseCtx::new().with_function("W", 1);
        let e = parse("W__4(u) + W__3(u) + W__1(u)", &c).unwrap();
        let rewritten = apply_rewrites(&e, &[rule]);
        assert_eq!(rewritten, parse("W(u)", &c).unwrap());
    }

    #[test]
    fn rewrite_is_idempotent_at_fixed_point() {
        let w = FnSym::new("W", 1);
        let rule = RewriteRule::new(w.clone(), vec![2], p("-W(x1)"));
        let c = ParseCtx::new().with_function("W", 1);
        let e = parse("W__5(u)*y + W(u)", &c).unwrap();
        let once = apply_rewrites(&e, std::slice::from_ref(&rule));
        let twice = apply_rewrites(&once, &[rule]);
        assert_eq!(once, twice);
    }
}
