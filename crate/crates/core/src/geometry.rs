//! The pp-wave metric family and tensor calculus on it.
//!
//! Chart (u, v, y, z) with line element
//! ds^2 = -2 du dv - 2 H(u, y, z) du^2 + dy^2 + dz^2.
//! The wave profile H is any expression free of v. All operators here
//! are exact symbolic computations from the metric components.

use crate::expr::{differentiate, Expr};
use std::fmt;

/// Coordinate names in index order.
pub const COORDS: [&str; 4] = ["u", "v", "y", "z"];

pub type ScalarField = Expr;
pub type VectorField = [Expr; 4];
pub type Matrix4 = [[Expr; 4]; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryError {
    /// The wave profile may depend on u, y, z only.
    ProfileDependsOnV,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::ProfileDependsOnV => {
                write!(f, "wave profile depends on v; pp-wave profiles are H(u, y, z)")
            }
        }
    }
}

impl std::error::Error for GeometryError {}

/// A pp-wave metric with its exact inverse.
#[derive(Clone, Debug)]
pub struct Metric {
    pub h: Expr,
    lower: Matrix4,
    upper: Matrix4,
}

fn zero_matrix() -> Matrix4 {
    std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero()))
}

/// Builds the metric for a wave profile H(u, y, z).
pub fn build_ppwave_metric(h: Expr) -> Result<Metric, GeometryError> {
    if h.contains_symbol("v") {
        return Err(GeometryError::ProfileDependsOnV);
    }
    let mut lower = zero_matrix();
    lower[0][0] = Expr::mul2(Expr::int(-2), h.clone());
    lower[0][1] = Expr::int(-1);
    lower[1][0] = Expr::int(-1);
    lower[2][2] = Expr::one();
    lower[3][3] = Expr::one();
    let mut upper = zero_matrix();
    upper[0][1] = Expr::int(-1);
    upper[1][0] = Expr::int(-1);
    upper[1][1] = Expr::mul2(Expr::int(2), h.clone());
    upper[2][2] = Expr::one();
    upper[3][3] = Expr::one();
    Ok(Metric { h, lower, upper })
}

impl Metric {
    pub fn lower(&self, i: usize, j: usize) -> &Expr {
        &self.lower[i][j]
    }

    pub fn upper(&self, i: usize, j: usize) -> &Expr {
        &self.upper[i][j]
    }

    /// Covariant components as a matrix.
    pub fn components(&self) -> &Matrix4 {
        &self.lower
    }

    /// Contravariant components as a matrix.
    pub fn inverse_metric(&self) -> &Matrix4 {
        &self.upper
    }

    /// Symbolic determinant of the covariant components, by cofactor
    /// expansion. Identically -1 for every pp-wave profile.
    pub fn determinant(&self) -> Expr {
        det4(&self.lower)
    }

    /// Volume density sqrt(|det g|), identically 1 here; kept as an
    /// expression so operator formulas read like their textbook forms.
    pub fn sqrt_abs_det(&self) -> Expr {
        Expr::one()
    }
}

fn det3(m: &[[&Expr; 3]; 3]) -> Expr {
    let term = |a: &Expr, b: &Expr, c: &Expr| Expr::mul(vec![a.clone(), b.clone(), c.clone()]);
    Expr::add(vec![
        term(m[0][0], m[1][1], m[2][2]),
        Expr::neg(term(m[0][0], m[1][2], m[2][1])),
        Expr::neg(term(m[0][1], m[1][0], m[2][2])),
        term(m[0][1], m[1][2], m[2][0]),
        term(m[0][2], m[1][0], m[2][1]),
        Expr::neg(term(m[0][2], m[1][1], m[2][0])),
    ])
}

fn det4(m: &Matrix4) -> Expr {
    let mut terms = Vec::with_capacity(4);
    for col in 0..4 {
        let rows = [1, 2, 3];
        let cols: Vec<usize> = (0..4).filter(|&c| c != col).collect();
        let minor: [[&Expr; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| &m[rows[i]][cols[j]]));
        let mut t = Expr::mul2(m[0][col].clone(), det3(&minor));
        if col % 2 == 1 {
            t = Expr::neg(t);
        }
        terms.push(t);
    }
    Expr::add(terms)
}

/// Christoffel symbols of the second kind, indexed [k][i][j] for
/// Gamma^k_ij, from the general formula
/// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_il - d_l g_ij).
pub fn christoffel(metric: &Metric) -> [Matrix4; 4] {
    let g = &metric.lower;
    let ginv = &metric.upper;
    let mut out: [Matrix4; 4] = std::array::from_fn(|_| zero_matrix());
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..=i {
                let mut terms = Vec::new();
                for l in 0..4 {
                    if ginv[k][l].is_zero_const() {
                        continue;
                    }
                    let inner = Expr::add(vec![
                        differentiate(&g[l][j], COORDS[i]),
                        differentiate(&g[i][l], COORDS[j]),
                        Expr::neg(differentiate(&g[i][j], COORDS[l])),
                    ]);
                    terms.push(Expr::mul(vec![
                        Expr::rat(1, 2),
                        ginv[k][l].clone(),
                        inner,
                    ]));
                }
                let gamma = Expr::add(terms);
                out[k][i][j] = gamma.clone();
                out[k][j][i] = gamma;
            }
        }
    }
    out
}

/// Laplace-Beltrami operator on a scalar:
/// (1/sqrt|g|) d_i (sqrt|g| g^ij d_j f), with sqrt|g| = 1 here.
pub fn laplace_beltrami(metric: &Metric, f: &Expr) -> Expr {
    let grads: Vec<Expr> = COORDS.iter().map(|c| differentiate(f, c)).collect();
    let mut terms = Vec::new();
    for i in 0..4 {
        let mut flux = Vec::new();
        for j in 0..4 {
            if metric.upper[i][j].is_zero_const() {
                continue;
            }
            flux.push(Expr::mul2(metric.upper[i][j].clone(), grads[j].clone()));
        }
        terms.push(differentiate(&Expr::add(flux), COORDS[i]));
    }
    Expr::add(terms)
}

/// Lie derivative of the metric along a vector field:
/// (L_xi g)_ij = xi^k d_k g_ij + g_kj d_i xi^k + g_ik d_j xi^k.
pub fn lie_derivative_metric(metric: &Metric, xi: &VectorField) -> Matrix4 {
    lie_derivative_tensor(&metric.lower, xi)
}

/// Lie derivative of any covariant rank-2 tensor field.
pub fn lie_derivative_tensor(t: &Matrix4, xi: &VectorField) -> Matrix4 {
    let mut out = zero_matrix();
    for i in 0..4 {
        for j in 0..4 {
            let mut terms = Vec::new();
            for k in 0..4 {
                if !t[i][j].is_zero_const() {
                    terms.push(Expr::mul2(
                        xi[k].clone(),
                        differentiate(&t[i][j], COORDS[k]),
                    ));
                }
                if !t[k][j].is_zero_const() {
                    terms.push(Expr::mul2(
                        t[k][j].clone(),
                        differentiate(&xi[k], COORDS[i]),
                    ));
                }
                if !t[i][k].is_zero_const() {
                    terms.push(Expr::mul2(
                        t[i][k].clone(),
                        differentiate(&xi[k], COORDS[j]),
                    ));
                }
            }
            out[i][j] = Expr::add(terms);
        }
    }
    out
}

/// Coordinate divergence d_i xi^i, which is the covariant divergence
/// because the volume density is 1.
pub fn divergence(_metric: &Metric, xi: &VectorField) -> Expr {
    Expr::add(
        (0..4)
            .map(|i| differentiate(&xi[i], COORDS[i]))
            .collect(),
    )
}

/// Covariant Hessian of a scalar: f_;ij = d_i d_j f - Gamma^k_ij d_k f.
pub fn covariant_hessian(metric: &Metric, f: &Expr) -> Matrix4 {
    let gamma = christoffel(metric);
    let grads: Vec<Expr> = COORDS.iter().map(|c| differentiate(f, c)).collect();
    let mut out = zero_matrix();
    for i in 0..4 {
        for j in 0..=i {
            let mut terms = vec![differentiate(&grads[j], COORDS[i])];
            for k in 0..4 {
                if gamma[k][i][j].is_zero_const() || grads[k].is_zero_const() {
                    continue;
                }
                terms.push(Expr::neg(Expr::mul2(
                    gamma[k][i][j].clone(),
                    grads[k].clone(),
                )));
            }
            let hij = Expr::add(terms);
            out[i][j] = hij.clone();
            out[j][i] = hij;
        }
    }
    out
}

/// Commutator of vector fields: [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i.
pub fn commutator(x: &VectorField, y: &VectorField) -> VectorField {
    std::array::from_fn(|i| {
        let mut terms = Vec::new();
        for j in 0..4 {
            if !x[j].is_zero_const() {
                terms.push(Expr::mul2(x[j].clone(), differentiate(&y[i], COORDS[j])));
            }
            if !y[j].is_zero_const() {
                terms.push(Expr::neg(Expr::mul2(
                    y[j].clone(),
                    differentiate(&x[i], COORDS[j]),
                )));
            }
        }
        Expr::add(terms)
    })
}

/// The vacuum condition for this family: the field equations reduce to
/// the transverse Laplace equation H_yy + H_zz = 0.
pub fn vacuum_residual(metric: &Metric) -> Expr {
    Expr::add2(
        differentiate(&differentiate(&metric.h, "y"), "y"),
        differentiate(&differentiate(&metric.h, "z"), "z"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, simplify_basic, FnSym, ParseCtx};

    fn ctx() -> ParseCtx {
        ParseCtx::new().with_function("H", 3).with_function("f", 4)
    }

    fn p(src: &str) -> Expr {
        parse(src, &ctx()).unwrap()
    }

    fn free_metric() -> Metric {
        build_ppwave_metric(p("H(u, y, z)")).unwrap()
    }

    #[test]
    fn profile_must_not_depend_on_v() {
        assert_eq!(
            build_ppwave_metric(p("u*v")).unwrap_err(),
            GeometryError::ProfileDependsOnV
        );
        assert!(build_ppwave_metric(p("u*y^2")).is_ok());
    }

    #[test]
    fn inverse_is_exact() {
        let m = free_metric();
        for i in 0..4 {
            for j in 0..4 {
                let mut terms = Vec::new();
                for k in 0..4 {
                    terms.push(Expr::mul2(m.lower(i, k).clone(), m.upper(k, j).clone()));
                }
                let entry = simplify_basic(&Expr::add(terms));
                let expect = if i == j { Expr::one() } else { Expr::zero() };
                assert_eq!(entry, expect, "g g^-1 at ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn determinant_is_minus_one() {
        let m = free_metric();
        assert_eq!(simplify_basic(&m.determinant()), Expr::int(-1));
    }

    #[test]
    fn christoffel_matches_known_set() {
        let m = free_metric();
        let gamma = christoffel(&m);
        let h = FnSym::new("H", 3);
        let args = vec![Expr::sym("u"), Expr::sym("y"), Expr::sym("z")];
        let hu = Expr::deriv(h.clone(), vec![1, 0, 0], args.clone());
        let hy = Expr::deriv(h.clone(), vec![0, 1, 0], args.clone());
        let hz = Expr::deriv(h, vec![0, 0, 1], args);
        // Index order: u=0, v=1, y=2, z=3.
        let expected: Vec<((usize, usize, usize), Expr)> = vec![
            ((1, 0, 0), hu),
            ((2, 0, 0), hy.clone()),
            ((3, 0, 0), hz.clone()),
            ((1, 2, 0), hy),
            ((1, 3, 0), hz),
        ];
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let want = expected
                        .iter()
                        .find(|((ek, ei, ej), _)| {
                            (*ek, *ei, *ej) == (k, i, j) || (*ek, *ej, *ei) == (k, i, j)
                        })
                        .map(|(_, e)| e.clone())
                        .unwrap_or_else(Expr::zero);
                    assert_eq!(
                        gamma[k][i][j], want,
                        "Gamma^{}_{}{}",
                        COORDS[k], COORDS[i], COORDS[j]
                    );
                }
            }
        }
    }

    #[test]
    fn laplacian_matches_displayed_form() {
        let m = free_metric();
        let f = p("f(u, v, y, z)");
        let lap = laplace_beltrami(&m, &f);
        let displayed = p(
            "-2*f__1_1_0_0(u, v, y, z) + 2*H(u, y, z)*f__0_2_0_0(u, v, y, z) \
             + f__0_0_2_0(u, v, y, z) + f__0_0_0_2(u, v, y, z)",
        );
        assert_eq!(simplify_basic(&Expr::sub(lap, displayed)), Expr::zero());
    }

    #[test]
    fn covariantly_constant_null_field_is_killing() {
        let m = free_metric();
        let k: VectorField = [Expr::zero(), Expr::one(), Expr::zero(), Expr::zero()];
        let lie = lie_derivative_metric(&m, &k);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(lie[i][j], Expr::zero());
            }
        }
    }

    #[test]
    fn divergence_sums_coordinate_derivatives() {
        let m = free_metric();
        let xi: VectorField = [Expr::zero(), p("2*v"), p("y"), p("z")];
        assert_eq!(divergence(&m, &xi), Expr::int(4));
    }

    #[test]
    fn hessian_is_symmetric_and_corrects_with_christoffel() {
        let m = free_metric();
        let f = p("u^2*y");
        let hess = covariant_hessian(&m, &f);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(hess[i][j], hess[j][i]);
            }
        }
        // f_;uu = f_uu - H_u f_v - H_y f_y with f_v = 0, f_y = u^2.
        let expect = simplify_basic(&p("2*y - H__0_1_0(u, y, z)*u^2"));
        assert_eq!(simplify_basic(&hess[0][0]), expect);
    }

    #[test]
    fn commutator_is_antisymmetric() {
        let x: VectorField = [p("u"), p("-v"), Expr::zero(), Expr::zero()];
        let y: VectorField = [Expr::one(), Expr::zero(), Expr::zero(), Expr::zero()];
        let fwd = commutator(&x, &y);
        let bwd = commutator(&y, &x);
        for i in 0..4 {
            assert_eq!(simplify_basic(&Expr::add2(fwd[i].clone(), bwd[i].clone())), Expr::zero());
        }
        // [u d_u - v d_v, d_u] = -d_u.
        assert_eq!(fwd[0], Expr::int(-1));
        assert_eq!(fwd[1], Expr::zero());
    }

    #[test]
    fn lie_derivative_respects_brackets() {
        let m = build_ppwave_metric(p("u*y^2 + z^2")).unwrap();
        let x: VectorField = [p("u"), p("-v"), Expr::zero(), Expr::zero()];
        let y: VectorField = [Expr::one(), p("y*z"), p("z"), p("y")];
        let lhs = lie_derivative_metric(&m, &commutator(&x, &y));
        let lxly = lie_derivative_tensor(&lie_derivative_metric(&m, &y), &x);
        let lylx = lie_derivative_tensor(&lie_derivative_metric(&m, &x), &y);
        for i in 0..4 {
            for j in 0..4 {
                let rhs = Expr::sub(lxly[i][j].clone(), lylx[i][j].clone());
                assert_eq!(
                    simplify_basic(&Expr::sub(lhs[i][j].clone(), rhs)),
                    Expr::zero(),
                    "bracket compatibility at ({}, {})",
                    i,
                    j
                );
            }
        }
    }

    #[test]
    fn vacuum_residual_is_transverse_laplacian_of_profile() {
        let m = build_ppwave_metric(p("y^2 - z^2 + u*y")).unwrap();
        assert_eq!(vacuum_residual(&m), Expr::zero());
        let m2 = build_ppwave_metric(p("y^2 + z^2")).unwrap();
        assert_eq!(vacuum_residual(&m2), Expr::int(4));
    }
}
