//! The profile catalog: every isometry class of the pp-wave family,
//! with its printed generators, conformal factors, commutator table,
//! potential families, and wave-symmetry count, plus the verification
//! driver that machine-checks each claim. Printed forms that fail
//! verification carry an amendment with the derived correction and a
//! probe whose nonzero residual is the recorded evidence.

mod data;

use crate::expr::{
    apply_rewrites, evaluate, instantiate, is_zero, substitute_many, Environment, EvalError,
    Expr, FnSym, RewriteRule, ZeroVerdict,
};
use crate::geometry::{
    build_ppwave_metric, commutator, laplace_beltrami, vacuum_residual, GeometryError, Metric,
    VectorField,
};
use crate::symmetry::{
    classify_conformal_rules, first_jet_sampler, fit_structure_constants, kg_symmetry_residual,
    lift_to_point_symmetry, noether_condition_expr, noether_current, noether_gauge,
    onshell_divergence_expr, onshell_jet_sampler,
};
use crate::verify::{
    residual_check, CheckOutcome, ClaimKind, ClaimReport, ClaimStatus, Sampler, Tolerance, Witness,
};
use std::collections::BTreeMap;
use std::fmt;

// ---------------------------------------------------------------------
// Errors.

#[derive(Clone, Debug)]
pub enum CatalogError {
    UnknownClass(String),
    UnknownParameter(String),
    /// Bad input to a constructor: singular constants, u-dependent
    /// plane-wave coefficients, stray symbols in a function body.
    InvalidInput(String),
    Eval(EvalError),
    Geometry(GeometryError),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::UnknownClass(id) => write!(f, "unknown catalog class '{}'", id),
            CatalogError::UnknownParameter(name) => {
                write!(f, "parameter '{}' is not defined for this class", name)
            }
            CatalogError::InvalidInput(msg) => write!(f, "{}", msg),
            CatalogError::Eval(e) => write!(f, "evaluation failed: {}", e),
            CatalogError::Geometry(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for CatalogError {}

impl From<EvalError> for CatalogError {
    fn from(e: EvalError) -> Self {
        CatalogError::Eval(e)
    }
}

impl From<GeometryError> for CatalogError {
    fn from(e: GeometryError) -> Self {
        CatalogError::Geometry(e)
    }
}

// ---------------------------------------------------------------------
// Catalog data types.

/// Runtime evidence backing an amendment.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// Nothing to sample: the record itself is the resolution (label
    /// typos, omitted values, chart-reading normalizations).
    Documented,
    /// Expressions the printed form implies vanish identically. Every
    /// probe must come back nonzero; the first witness is recorded.
    NonzeroProbes(Vec<Expr>),
    /// A numeric claim where the derived value differs from the printed
    /// one; the derived value itself is the evidence.
    DerivedValue,
}

/// A printed claim that fails machine verification, together with the
/// correction that passes.
#[derive(Clone, Debug)]
pub struct Amendment {
    pub printed: String,
    pub corrected: String,
    pub note: String,
    pub evidence: Evidence,
}

impl Amendment {
    pub fn resolution(&self) -> &'static str {
        match self.evidence {
            Evidence::Documented => "documented",
            _ => "corrected-verified",
        }
    }
}

/// Expected conformal type of a cataloged generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedKind {
    Killing,
    Homothetic,
    SpecialConformal,
    ProperConformal,
}

impl ExpectedKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExpectedKind::Killing => "KV",
            ExpectedKind::Homothetic => "HV",
            ExpectedKind::SpecialConformal => "sp.CKV",
            ExpectedKind::ProperConformal => "proper CKV",
        }
    }
}

/// One cataloged symmetry generator.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub xi: VectorField,
    pub expected: ExpectedKind,
    /// Cataloged conformal factor; None for Killing fields.
    pub psi: Option<Expr>,
    /// How many independent fields this entry stands for (solution
    /// families like the plane-wave quadruple count more than once).
    pub multiplicity: usize,
    /// Amendment on the field components.
    pub amendment: Option<Amendment>,
    /// Amendment on the printed conformal factor.
    pub psi_amendment: Option<Amendment>,
}

/// A family of potentials invariant under one symmetry combination,
/// written as a prefactor times an arbitrary function V of three
/// invariant slots. General families keep c1..c6 symbolic.
#[derive(Clone, Debug)]
pub struct PotentialFamily {
    pub name: String,
    pub xi: VectorField,
    pub psi: Expr,
    pub v: Expr,
    /// Family-specific derivative closures (auxiliary profiles).
    pub rules: Vec<RewriteRule>,
    pub amendment: Option<Amendment>,
}

/// Expected commutator [basis_i, basis_j] = sum of coeff * basis_k.
#[derive(Clone, Debug)]
pub struct BracketClaim {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<(usize, Expr)>,
    pub amendment: Option<Amendment>,
}

/// A concrete basis with its printed bracket table. Pairs not listed
/// are covered by the closure fit, which also checks Jacobi.
#[derive(Clone, Debug)]
pub struct CommutatorSpec {
    pub names: Vec<String>,
    pub basis: Vec<VectorField>,
    pub brackets: Vec<BracketClaim>,
}

/// The printed wave-symmetry count for the class.
#[derive(Clone, Debug)]
pub struct CountClaim {
    pub printed: usize,
    pub amendment: Option<Amendment>,
}

/// One catalog entry: a profile family with everything claimed of it.
#[derive(Clone, Debug)]
pub struct PPWaveClass {
    pub id: String,
    pub description: String,
    /// Profile H with parameter defaults already substituted; arbitrary
    /// shapes remain as function symbols.
    pub h: Expr,
    /// Resolved parameter values, including derived ones.
    pub params: BTreeMap<String, Expr>,
    /// Class-wide derivative closures satisfied by profile functions.
    pub rules: Vec<RewriteRule>,
    /// Sampler exclusions: |expr| must stay at or above the bound.
    pub exclusions: Vec<(Expr, f64)>,
    pub generators: Vec<Generator>,
    pub potentials: Vec<PotentialFamily>,
    pub commutators: Option<CommutatorSpec>,
    pub count: CountClaim,
    pub vacuum_expected: bool,
    pub vacuum_note: String,
}

impl PPWaveClass {
    pub fn metric(&self) -> Result<Metric, CatalogError> {
        build_ppwave_metric(self.h.clone()).map_err(Into::into)
    }

    /// Chart sampler with this class's exclusions applied.
    pub fn sampler(&self, seed: u64, count: usize) -> Sampler {
        self.guard(Sampler::chart(seed).with_count(count))
    }

    /// Applies the class exclusions to any sampler.
    pub fn guard(&self, mut s: Sampler) -> Sampler {
        for (e, min_abs) in &self.exclusions {
            s = s.exclude(e.clone(), *min_abs);
        }
        s
    }

    /// The general potential family (arbitrary symmetry combination),
    /// when the class prints one.
    pub fn general_family(&self) -> Option<&PotentialFamily> {
        self.potentials.iter().find(|f| f.name == "V_G")
    }

    /// Derived wave-symmetry count: generators weighted by multiplicity.
    pub fn derived_count(&self) -> usize {
        self.generators.iter().map(|g| g.multiplicity).sum()
    }
}

/// A printed formula that fails verification, with the correction and
/// the recorded numeric evidence.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub class_id: String,
    pub claim: String,
    pub printed: String,
    pub corrected: String,
    pub note: String,
    pub witness: Option<Witness>,
    pub resolution: String,
}

// ---------------------------------------------------------------------
// Catalog access.

/// Canonical class ids in report order.
pub fn class_ids() -> &'static [&'static str] {
    data::ids()
}

fn normalize_id(id: &str) -> String {
    id.trim()
        .replace('\u{2212}', "-")
        .replace('\u{0398}', "Theta")
        .replace('\u{03b8}', "Theta")
        .replace('\u{03b4}', "delta")
}

/// Builds a catalog entry with its default parameters.
pub fn get_class(id: &str) -> Result<PPWaveClass, CatalogError> {
    get_class_with(id, &BTreeMap::new())
}

/// Builds a catalog entry with parameter overrides. Override names must
/// be parameters of the class or the family constants c1..c6.
pub fn get_class_with(
    id: &str,
    overrides: &BTreeMap<String, Expr>,
) -> Result<PPWaveClass, CatalogError> {
    let cid = normalize_id(id);
    let mut params = data::defaults(&cid).ok_or_else(|| CatalogError::UnknownClass(id.into()))?;
    for (name, value) in overrides {
        if is_constant_name(name) {
            continue;
        }
        if !params.contains_key(name) {
            return Err(CatalogError::UnknownParameter(name.clone()));
        }
        params.insert(name.clone(), value.clone());
    }
    data::build(&cid, &params)
}

fn is_constant_name(name: &str) -> bool {
    matches!(name, "c1" | "c2" | "c3" | "c4" | "c5" | "c6")
}

/// Default values for the family constants c1..c6.
pub fn default_constants() -> BTreeMap<String, Expr> {
    let mut m = BTreeMap::new();
    m.insert("c1".into(), Expr::int(1));
    m.insert("c2".into(), Expr::int(2));
    m.insert("c3".into(), Expr::int(3));
    m.insert("c4".into(), Expr::rat(1, 2));
    m.insert("c5".into(), Expr::rat(1, 5));
    m.insert("c6".into(), Expr::rat(1, 7));
    m
}

/// The fixed arbitrary-function bodies used for instantiation checks,
/// written in the formal slots x1..x3.
pub fn standard_bodies() -> [Expr; 3] {
    let x1 = Expr::sym("x1");
    let x2 = Expr::sym("x2");
    let x3 = Expr::sym("x3");
    [
        Expr::add2(x1.clone(), Expr::mul2(x2.clone(), x3.clone())),
        Expr::add2(
            Expr::builtin(crate::expr::Builtin::Sin, vec![x1.clone()]),
            Expr::pow(x2, Expr::int(2)),
        ),
        Expr::mul2(
            Expr::builtin(
                crate::expr::Builtin::Exp,
                vec![Expr::div(x3, Expr::int(5))],
            ),
            x1,
        ),
    ]
}

fn v_symbol() -> FnSym {
    FnSym::new("V", 3)
}

// ---------------------------------------------------------------------
// Constructors.

/// Solves the plane-wave profile system d'' = -(A d + B e),
/// e'' = -(B d + C e) for constant coefficients, returning four
/// independent (d, e) pairs via the eigen-decomposition of the
/// symmetric coefficient matrix: trigonometric for positive
/// eigenvalues, exponential for negative, polynomial for zero.
pub fn solve_plane_wave_basis(
    a: &Expr,
    b: &Expr,
    c: &Expr,
) -> Result<[(Expr, Expr); 4], CatalogError> {
    let mut vals = [0.0f64; 3];
    for (slot, (name, e)) in [("A", a), ("B", b), ("C", c)].iter().enumerate() {
        if e.contains_symbol("u") {
            return Err(CatalogError::InvalidInput(format!(
                "plane-wave coefficient {} depends on u; use a rewrite rule instead",
                name
            )));
        }
        vals[slot] = e.const_f64().ok_or_else(|| {
            CatalogError::InvalidInput(format!("plane-wave coefficient {} is not constant", name))
        })?;
    }
    let [av, bv, cv] = vals;
    let scale = 1.0f64.max(av.abs() + bv.abs() + cv.abs());
    let eps = 1e-12 * scale;

    // lambda = (A + C)/2 +- sqrt((A - C)^2 + 4 B^2)/2, exactly.
    let half_tr = Expr::mul2(Expr::rat(1, 2), Expr::add2(a.clone(), c.clone()));
    let disc = Expr::add2(
        Expr::pow(Expr::sub(a.clone(), c.clone()), Expr::int(2)),
        Expr::mul2(Expr::int(4), Expr::pow(b.clone(), Expr::int(2))),
    );
    let half_gap = Expr::mul2(
        Expr::rat(1, 2),
        Expr::builtin(crate::expr::Builtin::Sqrt, vec![disc]),
    );
    let lams = [
        Expr::add2(half_tr.clone(), half_gap.clone()),
        Expr::sub(half_tr, half_gap),
    ];

    let mut pairs: Vec<(Expr, Expr)> = Vec::with_capacity(4);
    for (idx, lam) in lams.into_iter().enumerate() {
        let lv = evaluate(&lam, &Environment::new())?;
        // Eigenvector (B, lambda - A), or an axis when B = 0; a repeated
        // eigenvalue with B = 0 uses one axis per branch.
        let (e1, e2) = if bv.abs() <= eps {
            if (av - cv).abs() <= eps {
                if idx == 0 {
                    (Expr::one(), Expr::zero())
                } else {
                    (Expr::zero(), Expr::one())
                }
            } else if (lv - av).abs() <= eps {
                (Expr::one(), Expr::zero())
            } else {
                (Expr::zero(), Expr::one())
            }
        } else {
            let raw = [b.clone(), Expr::sub(lam.clone(), a.clone())];
            let mags: Vec<f64> = raw
                .iter()
                .map(|e| {
                    evaluate(e, &Environment::new())
                        .map(f64::abs)
                        .unwrap_or(0.0)
                })
                .collect();
            let nonzero: Vec<usize> = (0..2).filter(|&i| mags[i] > eps).collect();
            if nonzero.is_empty() {
                return Err(CatalogError::InvalidInput(
                    "defective eigenstructure in plane-wave coefficients".into(),
                ));
            }
            let pivot = *nonzero
                .iter()
                .min_by(|&&i, &&j| mags[i].partial_cmp(&mags[j]).unwrap())
                .unwrap();
            let div = raw[pivot].clone();
            (
                Expr::div(raw[0].clone(), div.clone()),
                Expr::div(raw[1].clone(), div),
            )
        };
        let u = Expr::sym("u");
        let (f1, f2) = if lv > eps {
            let w = Expr::builtin(crate::expr::Builtin::Sqrt, vec![lam]);
            let wu = Expr::mul2(w, u);
            (
                Expr::builtin(crate::expr::Builtin::Cos, vec![wu.clone()]),
                Expr::builtin(crate::expr::Builtin::Sin, vec![wu]),
            )
        } else if lv < -eps {
            let s = Expr::builtin(crate::expr::Builtin::Sqrt, vec![Expr::neg(lam)]);
            let su = Expr::mul2(s, u);
            (
                Expr::builtin(crate::expr::Builtin::Exp, vec![su.clone()]),
                Expr::builtin(crate::expr::Builtin::Exp, vec![Expr::neg(su)]),
            )
        } else {
            (Expr::one(), u)
        };
        for f in [f1, f2] {
            pairs.push((Expr::mul2(f.clone(), e1.clone()), Expr::mul2(f, e2.clone())));
        }
    }
    Ok([
        pairs[0].clone(),
        pairs[1].clone(),
        pairs[2].clone(),
        pairs[3].clone(),
    ])
}

/// Instantiates the class's general potential family with a concrete
/// function body (in x1..x3) and constants, and probes the result for
/// singular constant configurations.
pub fn instantiate_potential(
    class: &PPWaveClass,
    body: &Expr,
    constants: &BTreeMap<String, Expr>,
) -> Result<Expr, CatalogError> {
    let fam = class.general_family().ok_or_else(|| {
        CatalogError::InvalidInput(format!(
            "class {} has no general potential family",
            class.id
        ))
    })?;
    for name in body.free_symbols() {
        if !matches!(name.as_str(), "x1" | "x2" | "x3") {
            return Err(CatalogError::InvalidInput(format!(
                "function body may use only x1..x3; found '{}'",
                name
            )));
        }
    }
    let mut cmap = default_constants();
    for (name, value) in constants {
        if !is_constant_name(name) {
            return Err(CatalogError::UnknownParameter(name.clone()));
        }
        cmap.insert(name.clone(), value.clone());
    }
    let v = substitute_many(&fam.v, &cmap);
    let v = instantiate(&v, &v_symbol(), body);

    // Probe two sample points so singular constant choices surface as
    // errors here rather than as claim failures downstream.
    let probe = class.sampler(7, 2);
    let points = probe.points().map_err(CatalogError::Eval)?;
    for (i, point) in points.iter().enumerate() {
        let mut env = crate::expr::Environment::default();
        env.values = point.clone();
        env.jet_seed = Some(7 ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        if let Err(e) = crate::expr::evaluate(&v, &env) {
            return Err(CatalogError::InvalidInput(format!(
                "constants make the potential singular: {}",
                e
            )));
        }
    }
    Ok(v)
}

/// Informational check of the Ricci-flatness criterion H_yy + H_zz = 0
/// for a profile.
pub fn vacuum_check(h: &Expr, seed: u64, tol: Tolerance) -> Result<CheckOutcome, CatalogError> {
    let g = build_ppwave_metric(h.clone())?;
    let r = vacuum_residual(&g);
    residual_check(&r, &Sampler::chart(seed), tol).map_err(Into::into)
}

// ---------------------------------------------------------------------
// Verification driver.

/// Options for claim verification runs.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerance,
    /// Run the variational cross-checks for every passing potential
    /// claim (off-shell condition and on-shell current divergence).
    pub noether: bool,
    /// Parameter and constant overrides applied before verification.
    pub params: BTreeMap<String, Expr>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 42,
            samples: 32,
            tol: Tolerance::default(),
            noether: true,
            params: BTreeMap::new(),
        }
    }
}

/// Number of jet points for the variational cross-checks.
const JET_SAMPLES: usize = 64;

/// All claims and discrepancy records for one class.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub class_id: String,
    pub claims: Vec<ClaimReport>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Aggregate counts over a suite run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub amended: usize,
}

/// A full verification run: ordered claims, deduplicated discrepancy
/// records, and the aggregate summary.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerance,
    pub claims: Vec<ClaimReport>,
    pub discrepancies: Vec<Discrepancy>,
    pub summary: Summary,
}

struct Emitter {
    class_id: String,
    seed: u64,
    samples: usize,
    tol: Tolerance,
    sampler: Sampler,
    claims: Vec<ClaimReport>,
    discrepancies: Vec<Discrepancy>,
}

impl Emitter {
    fn discrepancy_key(&self, kind: ClaimKind, subject: &str) -> String {
        format!("{} {} {}", self.class_id, kind.label(), subject)
    }

    /// Records one claim. `passed` refers to the corrected (cataloged)
    /// form; an attached amendment turns a corrected pass into an
    /// amended pass once its evidence checks out, and into a loud
    /// failure when a probe unexpectedly vanishes.
    fn claim(
        &mut self,
        kind: ClaimKind,
        subject: &str,
        passed: bool,
        max_scaled: f64,
        witness: Option<Witness>,
        detail: String,
        amendment: Option<&Amendment>,
    ) -> Result<(), EvalError> {
        let mut status = if passed { ClaimStatus::Pass } else { ClaimStatus::Fail };
        let mut witness = witness;
        let mut detail = detail;
        let mut discrepancy = None;

        if passed {
            if let Some(a) = amendment {
                match self.amendment_evidence(a)? {
                    Some(evidence) => {
                        status = ClaimStatus::AmendedPass;
                        // One record per defect: claims sharing an
                        // amendment (a family and its instantiations)
                        // point at the same row.
                        let key = match self
                            .discrepancies
                            .iter()
                            .find(|d| d.printed == a.printed)
                        {
                            Some(existing) => existing.claim.clone(),
                            None => {
                                let key = self.discrepancy_key(kind, subject);
                                self.discrepancies.push(Discrepancy {
                                    class_id: self.class_id.clone(),
                                    claim: key.clone(),
                                    printed: a.printed.clone(),
                                    corrected: a.corrected.clone(),
                                    note: a.note.clone(),
                                    witness: evidence,
                                    resolution: a.resolution().into(),
                                });
                                key
                            }
                        };
                        discrepancy = Some(key);
                    }
                    None => {
                        status = ClaimStatus::Fail;
                        detail = format!(
                            "{}; amendment probe vanished: the printed form verifies, so the \
                             recorded correction is unjustified",
                            detail
                        );
                        witness = Some(Witness {
                            point: BTreeMap::new(),
                            value: 0.0,
                            scaled: 0.0,
                            detail: "printed-form probe evaluated to zero".into(),
                        });
                    }
                }
            }
        } else if witness.is_none() {
            witness = Some(Witness {
                point: BTreeMap::new(),
                value: max_scaled,
                scaled: max_scaled,
                detail: "check failed without a sampled witness".into(),
            });
        }

        self.claims.push(ClaimReport {
            class_id: self.class_id.clone(),
            kind,
            subject: subject.to_string(),
            status,
            max_scaled,
            witness,
            seed: self.seed,
            samples: self.samples,
            detail,
            discrepancy,
        });
        Ok(())
    }

    /// Evaluates an amendment's evidence. Ok(Some(_)) accepts it with an
    /// optional witness; Ok(None) means a probe vanished.
    #[allow(clippy::type_complexity)]
    fn amendment_evidence(
        &self,
        a: &Amendment,
    ) -> Result<Option<Option<Witness>>, EvalError> {
        match &a.evidence {
            Evidence::Documented | Evidence::DerivedValue => Ok(Some(None)),
            Evidence::NonzeroProbes(probes) => {
                let mut first = None;
                for p in probes {
                    match is_zero(p, &self.sampler, self.tol)? {
                        ZeroVerdict::NonZero { witness, value, scaled } => {
                            if first.is_none() {
                                first = Some(Witness {
                                    point: witness,
                                    value,
                                    scaled,
                                    detail: "printed-form residual".into(),
                                });
                            }
                        }
                        _ => return Ok(None),
                    }
                }
                Ok(Some(first))
            }
        }
    }
}

fn apply_rules(e: &Expr, rules: &[RewriteRule]) -> Expr {
    if rules.is_empty() {
        e.clone()
    } else {
        apply_rewrites(e, rules)
    }
}

fn outcome_parts(out: CheckOutcome) -> (bool, f64, Option<Witness>) {
    (out.passed, out.max_scaled, out.witness)
}

/// Verifies every claim of one class. Claim failures are data in the
/// report; only malformed input (unknown class or parameter, singular
/// sampling) is an error.
pub fn verify_class(id: &str, opts: &VerifyOptions) -> Result<ClassReport, CatalogError> {
    let class = get_class_with(id, &opts.params)?;
    verify_built(&class, opts)
}

fn verify_built(class: &PPWaveClass, opts: &VerifyOptions) -> Result<ClassReport, CatalogError> {
    let g = class.metric()?;
    let sampler = class.sampler(opts.seed, opts.samples);
    let mut em = Emitter {
        class_id: class.id.clone(),
        seed: opts.seed,
        samples: opts.samples,
        tol: opts.tol,
        sampler: sampler.clone(),
        claims: Vec::new(),
        discrepancies: Vec::new(),
    };

    // Generators: conformal classification, factor match, wave equation.
    for gen in &class.generators {
        let res = classify_conformal_rules(&g, &gen.xi, &class.rules, &sampler, opts.tol)?;
        let got = res.verdict.label();
        let want = gen.expected.label();
        let ok = got == want;
        let witness = res.witness.clone().map(|fw| Witness {
            point: fw.point,
            value: fw.value,
            scaled: fw.scaled,
            detail: format!("conformal equation component {}", fw.component),
        });
        em.claim(
            ClaimKind::ConformalClass,
            &gen.name,
            ok,
            res.max_scaled(),
            witness,
            format!("expected {}, classified {}", want, got),
            gen.amendment.as_ref(),
        )?;

        if let Some(psi_cat) = &gen.psi {
            let resid = apply_rules(&Expr::sub(res.psi.clone(), psi_cat.clone()), &class.rules);
            let (passed, max_scaled, witness) =
                outcome_parts(residual_check(&resid, &sampler, opts.tol)?);
            em.claim(
                ClaimKind::ConformalFactor,
                &gen.name,
                passed,
                max_scaled,
                witness,
                format!("derived factor against cataloged {}", psi_cat),
                gen.psi_amendment.as_ref(),
            )?;

            let wave = apply_rules(&laplace_beltrami(&g, psi_cat), &class.rules);
            let (passed, max_scaled, witness) =
                outcome_parts(residual_check(&wave, &sampler, opts.tol)?);
            em.claim(
                ClaimKind::WavePsi,
                &gen.name,
                passed,
                max_scaled,
                witness,
                format!("wave equation for factor {}", psi_cat),
                None,
            )?;
        }
    }

    // Commutator table and algebra closure.
    if let Some(spec) = &class.commutators {
        for b in &spec.brackets {
            let com = commutator(&spec.basis[b.i], &spec.basis[b.j]);
            let mut passed = true;
            let mut max_scaled = 0.0f64;
            let mut witness = None;
            for c in 0..4 {
                let mut expected = Vec::new();
                for (k, coeff) in &b.coeffs {
                    expected.push(Expr::mul2(coeff.clone(), spec.basis[*k][c].clone()));
                }
                let resid = apply_rules(
                    &Expr::sub(com[c].clone(), Expr::add(expected)),
                    &class.rules,
                );
                let out = residual_check(&resid, &sampler, opts.tol)?;
                max_scaled = max_scaled.max(out.max_scaled);
                if !out.passed && witness.is_none() {
                    passed = false;
                    witness = out.witness;
                }
            }
            let rhs = if b.coeffs.is_empty() {
                "0".to_string()
            } else {
                b.coeffs
                    .iter()
                    .map(|(k, coeff)| format!("({}) {}", coeff, spec.names[*k]))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            let subject = format!("[{}, {}]", spec.names[b.i], spec.names[b.j]);
            em.claim(
                ClaimKind::Commutator,
                &subject,
                passed,
                max_scaled,
                witness,
                format!("expected {}", rhs),
                b.amendment.as_ref(),
            )?;
        }

        match fit_structure_constants(&spec.basis, &sampler, opts.tol) {
            Ok(fit) => {
                let worst = fit.max_residual().max(fit.jacobi_max());
                let passed = worst <= opts.tol.rel;
                em.claim(
                    ClaimKind::Commutator,
                    "closure",
                    passed,
                    worst,
                    None,
                    format!(
                        "fitted {}-dimensional algebra; max pair residual {:.3e}, Jacobi defect {:.3e}",
                        fit.dim,
                        fit.max_residual(),
                        fit.jacobi_max()
                    ),
                    None,
                )?;
            }
            Err(e) => {
                em.claim(
                    ClaimKind::Commutator,
                    "closure",
                    false,
                    1.0,
                    Some(Witness {
                        point: BTreeMap::new(),
                        value: f64::NAN,
                        scaled: 1.0,
                        detail: e.to_string(),
                    }),
                    "structure-constant fit failed".into(),
                    None,
                )?;
            }
        }
    }

    // Potential families: the generic family condition, then the fixed
    // instantiations, each passing one into the variational checks.
    let mut cmap = default_constants();
    for (name, value) in &opts.params {
        if is_constant_name(name) {
            cmap.insert(name.clone(), value.clone());
        }
    }
    for fam in &class.potentials {
        let mut rules_all = class.rules.clone();
        for rule in &fam.rules {
            rules_all.push(RewriteRule::new(
                rule.function.clone(),
                rule.threshold.clone(),
                substitute_many(&rule.replacement, &cmap),
            ));
        }
        let xi_c: VectorField =
            std::array::from_fn(|i| substitute_many(&fam.xi[i], &cmap));
        let psi_c = substitute_many(&fam.psi, &cmap);
        let v_gen = substitute_many(&fam.v, &cmap);

        let resid = apply_rules(
            &kg_symmetry_residual(&g, &xi_c, &psi_c, &v_gen),
            &rules_all,
        );
        let (passed, max_scaled, witness) =
            outcome_parts(residual_check(&resid, &sampler, opts.tol)?);
        em.claim(
            ClaimKind::KgPotential,
            &fam.name,
            passed,
            max_scaled,
            witness,
            "family condition with arbitrary V".into(),
            fam.amendment.as_ref(),
        )?;

        for body in standard_bodies() {
            let v_inst = instantiate(&v_gen, &v_symbol(), &body);
            let resid = apply_rules(
                &kg_symmetry_residual(&g, &xi_c, &psi_c, &v_inst),
                &rules_all,
            );
            let (passed, max_scaled, witness) =
                outcome_parts(residual_check(&resid, &sampler, opts.tol)?);
            let subject = format!("{} [{}]", fam.name, body);
            em.claim(
                ClaimKind::KgPotential,
                &subject,
                passed,
                max_scaled,
                witness,
                "instantiated potential".into(),
                fam.amendment.as_ref(),
            )?;
            if !(passed && opts.noether) {
                continue;
            }

            let cand = lift_to_point_symmetry(&xi_c, &psi_c);
            let gauge = noether_gauge(&g, &psi_c);
            let cond = apply_rules(
                &noether_condition_expr(&g, &v_inst, &cand, &gauge),
                &rules_all,
            );
            let js = class.guard(first_jet_sampler(opts.seed, JET_SAMPLES));
            let (passed, max_scaled, witness) =
                outcome_parts(residual_check(&cond, &js, opts.tol)?);
            em.claim(
                ClaimKind::NoetherCondition,
                &subject,
                passed,
                max_scaled,
                witness,
                format!("off-shell condition at {} first-jet points", JET_SAMPLES),
                None,
            )?;

            let current = noether_current(&g, &v_inst, &cand, &gauge);
            let div = apply_rules(
                &onshell_divergence_expr(&g, &v_inst, &current),
                &rules_all,
            );
            let os = class.guard(onshell_jet_sampler(opts.seed, JET_SAMPLES));
            let (passed, max_scaled, witness) =
                outcome_parts(residual_check(&div, &os, opts.tol)?);
            em.claim(
                ClaimKind::NoetherDivergence,
                &subject,
                passed,
                max_scaled,
                witness,
                format!("on-shell current divergence at {} jet points", JET_SAMPLES),
                None,
            )?;
        }
    }

    // Wave-symmetry count.
    {
        let derived = class.derived_count();
        let printed = class.count.printed;
        let ok = derived == printed;
        let witness = if ok {
            None
        } else {
            Some(Witness {
                point: BTreeMap::new(),
                value: derived as f64,
                scaled: derived.abs_diff(printed) as f64,
                detail: "derived generator count".into(),
            })
        };
        // An amendment is justified exactly when the derived count
        // disagrees with the printed one.
        let amendment = class.count.amendment.as_ref();
        let (passed, witness, detail) = match (ok, amendment) {
            (true, None) => (true, None, format!("{} wave symmetries", derived)),
            (true, Some(_)) => (
                false,
                witness,
                format!("derived count {} matches the printed value; amendment unjustified", derived),
            ),
            (false, Some(_)) => (
                true,
                witness,
                format!("printed {}, derived {}", printed, derived),
            ),
            (false, None) => (
                false,
                witness,
                format!("printed {}, derived {}", printed, derived),
            ),
        };
        em.claim(
            ClaimKind::Table5Count,
            "wave-symmetry count",
            passed,
            if ok { 0.0 } else { derived.abs_diff(printed) as f64 },
            witness,
            detail,
            if ok { None } else { amendment },
        )?;
    }

    // Ricci-flatness, informational note included.
    {
        let resid = vacuum_residual(&g);
        let out = residual_check(&resid, &sampler, opts.tol)?;
        let derived = out.passed;
        let ok = derived == class.vacuum_expected;
        let mut detail = format!(
            "expected {}, derived {}",
            if class.vacuum_expected { "vacuum" } else { "non-vacuum" },
            if derived { "vacuum" } else { "non-vacuum" },
        );
        if !class.vacuum_note.is_empty() {
            detail = format!("{}; {}", detail, class.vacuum_note);
        }
        let witness = if ok {
            None
        } else if derived {
            Some(Witness {
                point: BTreeMap::new(),
                value: 0.0,
                scaled: out.max_scaled,
                detail: "profile is Ricci-flat although cataloged as non-vacuum".into(),
            })
        } else {
            out.witness.clone()
        };
        em.claim(
            ClaimKind::Vacuum,
            "Ricci-flatness",
            ok,
            out.max_scaled,
            witness,
            detail,
            None,
        )?;
    }

    em.claims.sort_by(|a, b| {
        (a.kind, a.subject.as_str()).cmp(&(b.kind, b.subject.as_str()))
    });
    Ok(ClassReport {
        class_id: class.id.clone(),
        claims: em.claims,
        discrepancies: em.discrepancies,
    })
}

/// Runs verification over the given classes in canonical catalog order
/// and aggregates the claims, discrepancies, and summary counts.
pub fn run_suite(ids: &[String], opts: &VerifyOptions) -> Result<SuiteReport, CatalogError> {
    let order = class_ids();
    let mut normalized: Vec<String> = Vec::new();
    for id in ids {
        let cid = normalize_id(id);
        if !order.contains(&cid.as_str()) {
            return Err(CatalogError::UnknownClass(id.clone()));
        }
        if !normalized.contains(&cid) {
            normalized.push(cid);
        }
    }
    normalized.sort_by_key(|id| order.iter().position(|o| o == id).unwrap());

    let mut claims = Vec::new();
    let mut discrepancies = Vec::new();
    for id in &normalized {
        let report = verify_class(id, opts)?;
        claims.extend(report.claims);
        discrepancies.extend(report.discrepancies);
    }
    if !normalized.is_empty() {
        discrepancies.extend(data::global_discrepancies());
    }

    let mut summary = Summary::default();
    for c in &claims {
        match c.status {
            ClaimStatus::Pass => summary.pass += 1,
            ClaimStatus::Fail => summary.fail += 1,
            ClaimStatus::AmendedPass => summary.amended += 1,
        }
    }
    Ok(SuiteReport {
        seed: opts.seed,
        samples: opts.samples,
        tol: opts.tol,
        claims,
        discrepancies,
        summary,
    })
}

/// All class ids, owned, for suite runs over the whole catalog.
pub fn all_ids() -> Vec<String> {
    class_ids().iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::expr::ParseCtx;

    #[test]
    fn every_id_builds() {
        assert_eq!(class_ids().len(), 32);
        for id in class_ids() {
            let class = get_class(id).unwrap_or_else(|e| panic!("class {}: {}", id, e));
            assert_eq!(&class.id, id);
            assert!(!class.h.contains_symbol("v"), "profile of {} depends on v", id);
            class.metric().unwrap();
            for gen in &class.generators {
                assert_eq!(gen.psi.is_some(), gen.expected != ExpectedKind::Killing);
            }
        }
    }

    #[test]
    fn unicode_ids_normalize() {
        assert!(get_class("2ii(\u{0398}=0)").is_ok());
        assert!(get_class("8(\u{03b4}=0)").is_ok());
        assert!(get_class("2i(q=\u{2212}1)").is_ok());
        assert!(matches!(
            get_class("nosuch"),
            Err(CatalogError::UnknownClass(_))
        ));
    }

    #[test]
    fn unknown_parameter_rejected() {
        let mut overrides = BTreeMap::new();
        overrides.insert("nosuch".to_string(), Expr::int(1));
        assert!(matches!(
            get_class_with("6i", &overrides),
            Err(CatalogError::UnknownParameter(_))
        ));
    }

    #[test]
    fn plane_wave_basis_free_case() {
        let zero = Expr::zero();
        let basis = solve_plane_wave_basis(&zero, &zero, &zero).unwrap();
        let u = Expr::sym("u");
        assert_eq!(basis[0], (Expr::one(), Expr::zero()));
        assert_eq!(basis[1], (u.clone(), Expr::zero()));
        assert_eq!(basis[2], (Expr::zero(), Expr::one()));
        assert_eq!(basis[3], (Expr::zero(), u));
    }

    #[test]
    fn plane_wave_basis_isotropic_case() {
        let basis =
            solve_plane_wave_basis(&Expr::one(), &Expr::zero(), &Expr::one()).unwrap();
        // Both eigenvalues are 1: trigonometric solutions along the axes.
        for (d, e) in &basis {
            let ctx = ParseCtx::new();
            let env = crate::expr::Environment::default();
            let _ = (d, e, &ctx, &env);
        }
        let d0 = format!("{}", basis[0].0);
        assert!(d0.contains("cos"), "expected trigonometric solution, got {}", d0);
        assert!(basis[0].1.is_zero_const());
        assert!(basis[2].0.is_zero_const());
    }

    #[test]
    fn plane_wave_basis_rejects_u_dependent_input() {
        let a = parse("1/u^2", &ParseCtx::new()).unwrap();
        assert!(matches!(
            solve_plane_wave_basis(&a, &Expr::zero(), &Expr::zero()),
            Err(CatalogError::InvalidInput(_))
        ));
    }

    #[test]
    fn instantiate_potential_substitutes_body_and_constants() {
        let class = get_class("4").unwrap();
        let ctx = ParseCtx::new().with_symbol("x1").with_symbol("x2").with_symbol("x3");
        let body = parse("sin(x1) + x2^2 + x3", &ctx).unwrap();
        let mut constants = BTreeMap::new();
        constants.insert("c1".to_string(), Expr::int(1));
        constants.insert("c2".to_string(), Expr::int(2));
        let v = instantiate_potential(&class, &body, &constants).unwrap();
        // Slot 1 is v - (c1/c2) u = v - u/2; the result must contain it.
        let shown = format!("{}", v);
        assert!(shown.contains("sin"), "{}", shown);
        assert!(!v.contains_symbol("x1"));
        assert!(!v.contains_symbol("c1"));
    }

    #[test]
    fn instantiate_potential_rejects_singular_constants() {
        let class = get_class("6iii").unwrap();
        let ctx = ParseCtx::new().with_symbol("x1");
        let body = parse("x1", &ctx).unwrap();
        let mut constants = BTreeMap::new();
        constants.insert("c4".to_string(), Expr::zero());
        assert!(matches!(
            instantiate_potential(&class, &body, &constants),
            Err(CatalogError::InvalidInput(_))
        ));
    }

    #[test]
    fn empty_suite_is_empty() {
        let report = run_suite(&[], &VerifyOptions::default()).unwrap();
        assert!(report.claims.is_empty());
        assert!(report.discrepancies.is_empty());
        assert_eq!(report.summary, Summary::default());
    }

    #[test]
    fn single_class_suite_reports_expected_claims() {
        let report = run_suite(&["1".to_string()], &VerifyOptions::default()).unwrap();
        assert!(report.summary.fail == 0, "{:#?}", report.claims);
        let kinds: Vec<&str> = report.claims.iter().map(|c| c.kind.label()).collect();
        assert!(kinds.contains(&"conformal-class"));
        assert!(kinds.contains(&"table5-count"));
        assert!(kinds.contains(&"vacuum"));
    }

    #[test]
    fn suite_rejects_unknown_ids() {
        assert!(matches!(
            run_suite(&["nosuch".to_string()], &VerifyOptions::default()),
            Err(CatalogError::UnknownClass(_))
        ));
    }

    #[test]
    fn counts_are_internally_consistent() {
        for id in class_ids() {
            let class = get_class(id).unwrap();
            let derived = class.derived_count();
            match &class.count.amendment {
                None => assert_eq!(
                    derived, class.count.printed,
                    "count mismatch without amendment in class {}",
                    id
                ),
                Some(_) => assert_ne!(
                    derived, class.count.printed,
                    "amendment without mismatch in class {}",
                    id
                ),
            }
        }
    }
}
