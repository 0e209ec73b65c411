//! Randomized invariants of the expression kernel, geometry layer, and
//! verification machinery. Each property encodes a contract the rest of
//! the engine relies on; the generators stay inside the numeric ranges
//! the samplers use so every check is decidable.

use std::collections::BTreeMap;

use ppwave_core::expr::{
    apply_rewrites, differentiate, evaluate, is_zero, parse, substitute, substitute_many,
    Builtin, Environment, Expr, FnSym, ParseCtx, RewriteRule, ZeroVerdict,
};
use ppwave_core::geometry::{build_ppwave_metric, christoffel, commutator, VectorField};
use ppwave_core::symmetry::{classify_conformal, ConformalVerdict};
use ppwave_core::verify::{residual_check, Sampler, Tolerance};

use proptest::prelude::*;

fn zero_ok(e: &Expr) -> bool {
    let sampler = Sampler::chart(7).with_count(24);
    is_zero(e, &sampler, Tolerance::default())
        .map(|v| v.is_zero())
        .unwrap_or(false)
}

fn small_rat() -> impl Strategy<Value = Expr> {
    (-3i64..=3, 1i64..=4).prop_map(|(n, d)| Expr::rat(n, d))
}

fn nonzero_small_rat() -> impl Strategy<Value = Expr> {
    (1i64..=3, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| {
        let r = Expr::rat(n, d);
        if neg {
            Expr::neg(r)
        } else {
            r
        }
    })
}

/// Affine form over the chart coordinates with small rational
/// coefficients; the optional mask drops coordinates.
fn affine_over(coords: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    (
        small_rat(),
        proptest::collection::vec(small_rat(), coords.len()),
    )
        .prop_map(move |(c0, cs)| {
            let mut terms = vec![c0];
            for (c, name) in cs.into_iter().zip(coords) {
                terms.push(Expr::mul2(c, Expr::sym(name)));
            }
            Expr::add(terms)
        })
}

fn affine() -> impl Strategy<Value = Expr> {
    affine_over(&["u", "v", "y", "z"])
}

/// One factor: an affine form, a small power of one, or a bounded
/// transcendental of one.
fn factor() -> impl Strategy<Value = Expr> {
    prop_oneof![
        4 => affine(),
        2 => (affine(), 2u32..=3).prop_map(|(a, k)| Expr::pow(a, Expr::int(k as i64))),
        1 => affine().prop_map(|a| Expr::builtin(Builtin::Sin, vec![a])),
        1 => affine().prop_map(|a| Expr::builtin(Builtin::Cos, vec![a])),
        1 => affine().prop_map(|a| Expr::builtin(Builtin::Exp, vec![a])),
    ]
}

/// Sum of up to three products of up to two factors.
fn expr() -> impl Strategy<Value = Expr> {
    proptest::collection::vec((factor(), factor()), 1..=3)
        .prop_map(|prods| Expr::add(prods.into_iter().map(|(a, b)| Expr::mul2(a, b)).collect()))
}

/// Polynomial profile in (u, y, z) only, as a metric input.
fn profile() -> impl Strategy<Value = Expr> {
    (
        affine_over(&["u", "y", "z"]),
        affine_over(&["u", "y", "z"]),
        affine_over(&["u", "y", "z"]),
    )
        .prop_map(|(a, b, c)| Expr::add2(Expr::mul2(a, b), c))
}

fn vfield() -> impl Strategy<Value = VectorField> {
    (affine(), affine(), affine(), affine()).prop_map(|(a, b, c, d)| [a, b, c, d])
}

/// Random polynomial in W(u) and its first few derivatives, built
/// through the parser's derivative syntax.
fn w_poly() -> impl Strategy<Value = Expr> {
    proptest::collection::vec((0u32..=3, 0u32..=3, -3i64..=3), 1..=3).prop_map(|terms| {
        let ctx = ParseCtx::new();
        let name = |k: u32| {
            if k == 0 {
                "W(u)".to_string()
            } else {
                format!("W__{}(u)", k)
            }
        };
        let mut sum = Vec::new();
        for (p, q, c) in terms {
            let src = format!("{}*{}*{}", c, name(p), name(q));
            sum.push(parse(&src, &ctx).expect("generated term"));
        }
        Expr::add(sum)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn display_then_parse_preserves_value(e in expr()) {
        let shown = format!("{}", e);
        let back = parse(&shown, &ParseCtx::new())
            .unwrap_or_else(|err| panic!("display output '{}' failed to parse: {}", shown, err));
        prop_assert!(zero_ok(&Expr::sub(e, back)), "round trip changed '{}'", shown);
    }

    #[test]
    fn differentiation_is_linear(a in expr(), b in expr(), ca in small_rat(), cb in small_rat()) {
        let combo = Expr::add2(
            Expr::mul2(ca.clone(), a.clone()),
            Expr::mul2(cb.clone(), b.clone()),
        );
        let lhs = differentiate(&combo, "y");
        let rhs = Expr::add2(
            Expr::mul2(ca, differentiate(&a, "y")),
            Expr::mul2(cb, differentiate(&b, "y")),
        );
        prop_assert!(zero_ok(&Expr::sub(lhs, rhs)));
    }

    #[test]
    fn differentiation_satisfies_product_rule(a in expr(), b in expr()) {
        let lhs = differentiate(&Expr::mul2(a.clone(), b.clone()), "z");
        let rhs = Expr::add2(
            Expr::mul2(differentiate(&a, "z"), b.clone()),
            Expr::mul2(a, differentiate(&b, "z")),
        );
        prop_assert!(zero_ok(&Expr::sub(lhs, rhs)));
    }

    #[test]
    fn derivative_matches_central_difference(e in expr()) {
        let base = [("u", 1.3), ("v", 0.7), ("y", 1.1), ("z", 0.9)];
        let env_at = |y: f64| {
            let mut env = Environment::new();
            for (name, value) in base {
                env = env.with_value(name, if name == "y" { y } else { value });
            }
            env
        };
        let d = evaluate(&differentiate(&e, "y"), &env_at(1.1)).unwrap();
        let h = 1e-5;
        let fp = evaluate(&e, &env_at(1.1 + h)).unwrap();
        let fm = evaluate(&e, &env_at(1.1 - h)).unwrap();
        let fd = (fp - fm) / (2.0 * h);
        let scale = 1.0 + d.abs() + fd.abs() + fp.abs() + fm.abs();
        prop_assert!(
            (d - fd).abs() <= 1e-4 * scale,
            "symbolic {} vs finite difference {}",
            d,
            fd
        );
    }

    #[test]
    fn substitution_composes(e in expr(), a in small_rat(), b in small_rat()) {
        let stepwise = substitute(&substitute(&e, "y", &a), "z", &b);
        let mut both = BTreeMap::new();
        both.insert("y".to_string(), a);
        both.insert("z".to_string(), b);
        let joint = substitute_many(&e, &both);
        prop_assert!(zero_ok(&Expr::sub(stepwise, joint)));
    }

    #[test]
    fn rewriting_reaches_a_fixed_point(e in w_poly()) {
        let x1 = Expr::sym("x1");
        let rules = vec![RewriteRule::new(
            FnSym::new("W", 1),
            vec![2],
            Expr::neg(Expr::apply(FnSym::new("W", 1), vec![x1])),
        )];
        let once = apply_rewrites(&e, &rules);
        let twice = apply_rewrites(&once, &rules);
        prop_assert!(zero_ok(&Expr::sub(once.clone(), twice)));
        let shown = format!("{}", once);
        for k in 2..=6 {
            prop_assert!(
                !shown.contains(&format!("W__{}", k)),
                "unreduced derivative in '{}'",
                shown
            );
        }
    }

    #[test]
    fn connection_is_metric_compatible(h in profile()) {
        let g = build_ppwave_metric(h).unwrap();
        let gamma = christoffel(&g);
        let coords = ["u", "v", "y", "z"];
        let mut sum = Expr::zero();
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let mut grad = differentiate(g.lower(i, j), coords[k]);
                    for l in 0..4 {
                        grad = Expr::sub(
                            grad,
                            Expr::add2(
                                Expr::mul2(gamma[l][k][i].clone(), g.lower(l, j).clone()),
                                Expr::mul2(gamma[l][k][j].clone(), g.lower(i, l).clone()),
                            ),
                        );
                    }
                    sum = Expr::add2(sum, Expr::mul2(grad.clone(), grad));
                }
            }
        }
        prop_assert!(zero_ok(&sum));
    }

    #[test]
    fn commutator_satisfies_jacobi(x in vfield(), y in vfield(), z in vfield()) {
        let mut sum = Expr::zero();
        let xyz = commutator(&x, &commutator(&y, &z));
        let yzx = commutator(&y, &commutator(&z, &x));
        let zxy = commutator(&z, &commutator(&x, &y));
        for i in 0..4 {
            let total = Expr::add(vec![xyz[i].clone(), yzx[i].clone(), zxy[i].clone()]);
            sum = Expr::add2(sum, Expr::mul2(total.clone(), total));
        }
        prop_assert!(zero_ok(&sum));
    }

    #[test]
    fn tolerance_acceptance_is_monotone(e in expr(), rel in 1e-12f64..1e-3) {
        let sampler = Sampler::chart(5).with_count(16);
        let tight = residual_check(&e, &sampler, Tolerance { rel, abs: rel * 1e-3 }).unwrap();
        let loose = residual_check(
            &e,
            &sampler,
            Tolerance { rel: rel * 100.0, abs: rel * 0.1 },
        )
        .unwrap();
        prop_assert!(!tight.passed || loose.passed);
    }

    #[test]
    fn nonzero_witness_reproduces_its_value(e in expr()) {
        let sampler = Sampler::chart(11).with_count(16);
        if let ZeroVerdict::NonZero { witness, value, .. } =
            is_zero(&e, &sampler, Tolerance::default()).unwrap()
        {
            let mut env = Environment::new();
            for (name, val) in &witness {
                env = env.with_value(name, *val);
            }
            let back = evaluate(&e, &env).unwrap();
            prop_assert!(
                (back - value).abs() <= 1e-9 * (1.0 + value.abs()),
                "witness recorded {} but re-evaluation gave {}",
                value,
                back
            );
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), n in 1usize..12) {
        let first = Sampler::chart(seed).with_count(n).points().unwrap();
        let second = Sampler::chart(seed).with_count(n).points().unwrap();
        prop_assert_eq!(first, second);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn uniform_scaling_classifies_as_homothety(
        a in small_rat(),
        b in small_rat(),
        c in small_rat(),
        w in nonzero_small_rat(),
    ) {
        let yy = Expr::sym("y");
        let zz = Expr::sym("z");
        let h = Expr::add(vec![
            Expr::mul(vec![Expr::rat(1, 2), a, yy.clone(), yy.clone()]),
            Expr::mul(vec![Expr::rat(1, 2), c, zz.clone(), zz.clone()]),
            Expr::mul(vec![b, yy.clone(), zz.clone()]),
        ]);
        let g = build_ppwave_metric(h).unwrap();
        let xi: VectorField = [
            Expr::zero(),
            Expr::mul2(Expr::int(2), Expr::mul2(w.clone(), Expr::sym("v"))),
            Expr::mul2(w.clone(), yy),
            Expr::mul2(w.clone(), zz),
        ];
        let sampler = Sampler::chart(3).with_count(16);
        let res = classify_conformal(&g, &xi, &sampler, Tolerance::default()).unwrap();
        prop_assert!(
            matches!(res.verdict, ConformalVerdict::Homothetic(_)),
            "expected homothety, got {}",
            res.verdict.label()
        );
        prop_assert!(zero_ok(&Expr::sub(res.psi, w)));
    }
}
