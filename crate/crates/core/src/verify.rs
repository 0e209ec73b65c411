//! Seeded sampling, tolerances, and residual checks shared by the
//! zero-equivalence tester and the claim verifier.

use crate::expr::{evaluate, Environment, EvalError, Expr};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub use crate::catalog::run_suite;

/// Relative and absolute tolerances for scaled residual checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

/// Deterministic point sampler over coordinate boxes. The same seed and
/// intervals always produce the same point sequence, on every platform.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub seed: u64,
    /// Closed intervals per coordinate name, sampled uniformly.
    pub intervals: Vec<(String, f64, f64)>,
    pub count: usize,
    /// Points where any of these expressions is smaller in magnitude
    /// than the paired threshold are rejected and redrawn, keeping
    /// samples away from singular loci such as zeros of denominators.
    pub exclusions: Vec<(Expr, f64)>,
}

impl Sampler {
    pub fn new(seed: u64, intervals: Vec<(String, f64, f64)>) -> Self {
        Sampler { seed, intervals, count: 32, exclusions: Vec::new() }
    }

    /// The default coordinate box for pp-wave charts: u, y, z in
    /// [1/2, 2] (positive, away from coordinate singularities) and v in
    /// [-1, 1].
    pub fn chart(seed: u64) -> Self {
        Sampler::new(
            seed,
            vec![
                ("u".to_string(), 0.5, 2.0),
                ("v".to_string(), -1.0, 1.0),
                ("y".to_string(), 0.5, 2.0),
                ("z".to_string(), 0.5, 2.0),
            ],
        )
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn exclude(mut self, e: Expr, min_abs: f64) -> Self {
        self.exclusions.push((e, min_abs));
        self
    }

    pub fn with_param(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.intervals.push((name.to_string(), lo, hi));
        self
    }

    /// Draws the point sequence, rejection-sampling around exclusions.
    pub fn points(&self) -> Result<Vec<BTreeMap<String, f64>>, EvalError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count);
        let mut attempts = 0usize;
        while out.len() < self.count {
            attempts += 1;
            if attempts > 1000 * self.count.max(1) {
                return Err(EvalError::Domain(
                    "sampler exclusions reject nearly every point".to_string(),
                ));
            }
            let mut point = BTreeMap::new();
            for (name, lo, hi) in &self.intervals {
                point.insert(name.clone(), lo + (hi - lo) * unit_f64(&mut rng));
            }
            let mut ok = true;
            for (e, min_abs) in &self.exclusions {
                let env = Environment { values: point.clone(), ..Environment::default() };
                let v = evaluate(e, &env)?;
                if v.abs() < *min_abs {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(point);
            }
        }
        Ok(out)
    }
}

/// Uniform draw in [0, 1) with exactly 53 random bits, so results do not
/// depend on platform float quirks.
pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// One evaluation of an additive residual at one point: the raw sum and
/// the scaled magnitude described in [`scaled_residual`].
#[derive(Clone, Copy, Debug)]
pub struct ResidualSample {
    pub value: f64,
    pub scaled: f64,
}

/// Evaluates `e` as a sum of terms and scales the total against the
/// largest term magnitude: scaled = |sum| / (abs/rel + max_i |term_i|).
/// A cancellation-free zero then passes at `scaled <= rel` independent
/// of the overall magnitude of the terms, while tiny expressions are
/// judged against the absolute floor.
pub fn scaled_residual(e: &Expr, env: &Environment, tol: Tolerance) -> Result<ResidualSample, EvalError> {
    let terms: Vec<Expr> = match e.node() {
        crate::expr::Node::Add(ts) => ts.clone(),
        _ => vec![e.clone()],
    };
    let mut sum = 0.0;
    let mut max_term = 0.0f64;
    for t in &terms {
        let v = evaluate(t, env)?;
        sum += v;
        max_term = max_term.max(v.abs());
    }
    let scale = tol.abs / tol.rel + max_term;
    Ok(ResidualSample { value: sum, scaled: sum.abs() / scale })
}

// ---------------------------------------------------------------------
// Claim reports.

/// What kind of catalog claim a report line checks. The order here is
/// the report order within a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClaimKind {
    /// A generator classifies as its expected conformal type.
    ConformalClass,
    /// The derived conformal factor matches the cataloged one.
    ConformalFactor,
    /// A commutator table entry, or closure of a fitted algebra.
    Commutator,
    /// A potential family satisfies the reduced point-symmetry condition.
    KgPotential,
    /// The off-shell Noether condition on first jets.
    NoetherCondition,
    /// On-shell vanishing of the Noether current divergence.
    NoetherDivergence,
    /// The conformal factor solves the wave equation.
    WavePsi,
    /// The wave-symmetry count against the symmetry-count table.
    Table5Count,
    /// Whether the profile is Ricci-flat matches the cataloged claim.
    Vacuum,
}

impl ClaimKind {
    pub const ALL: [ClaimKind; 9] = [
        ClaimKind::ConformalClass,
        ClaimKind::ConformalFactor,
        ClaimKind::Commutator,
        ClaimKind::KgPotential,
        ClaimKind::NoetherCondition,
        ClaimKind::NoetherDivergence,
        ClaimKind::WavePsi,
        ClaimKind::Table5Count,
        ClaimKind::Vacuum,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ClaimKind::ConformalClass => "conformal-class",
            ClaimKind::ConformalFactor => "conformal-factor",
            ClaimKind::Commutator => "commutator",
            ClaimKind::KgPotential => "kg-potential",
            ClaimKind::NoetherCondition => "noether-condition",
            ClaimKind::NoetherDivergence => "noether-divergence",
            ClaimKind::WavePsi => "wave-psi",
            ClaimKind::Table5Count => "table5-count",
            ClaimKind::Vacuum => "vacuum",
        }
    }
}

/// Verdict on one claim. `AmendedPass` means the printed form fails but
/// a recorded correction passes; the report links the discrepancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimStatus {
    Pass,
    Fail,
    AmendedPass,
}

impl ClaimStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ClaimStatus::Pass => "pass",
            ClaimStatus::Fail => "fail",
            ClaimStatus::AmendedPass => "amended-pass",
        }
    }
}

/// A failing sample attached to a claim: where, the raw value, and the
/// scaled magnitude, with a note naming the offending component.
#[derive(Clone, Debug)]
pub struct Witness {
    pub point: BTreeMap<String, f64>,
    pub value: f64,
    pub scaled: f64,
    pub detail: String,
}

/// One verified claim about one catalog entry.
#[derive(Clone, Debug)]
pub struct ClaimReport {
    pub class_id: String,
    pub kind: ClaimKind,
    pub subject: String,
    pub status: ClaimStatus,
    pub max_scaled: f64,
    pub witness: Option<Witness>,
    pub seed: u64,
    pub samples: usize,
    /// Free-form context: what was checked, counts, corrected forms.
    pub detail: String,
    /// Key of the linked discrepancy record for amended passes.
    pub discrepancy: Option<String>,
}

/// Outcome of [`residual_check`].
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub passed: bool,
    pub max_scaled: f64,
    pub witness: Option<Witness>,
}

/// Samples `e` over the box and judges the scaled residual at every
/// point, short-circuiting on symbolic zero. Passing means the maximum
/// scaled residual stays at or below `tol.rel`.
pub fn residual_check(
    e: &Expr,
    sampler: &Sampler,
    tol: Tolerance,
) -> Result<CheckOutcome, EvalError> {
    match crate::expr::is_zero(e, sampler, tol)? {
        crate::expr::ZeroVerdict::NonZero { witness, value, scaled } => Ok(CheckOutcome {
            passed: false,
            max_scaled: scaled,
            witness: Some(Witness {
                point: witness,
                value,
                scaled,
                detail: String::new(),
            }),
        }),
        v => Ok(CheckOutcome { passed: true, max_scaled: v.max_scaled(), witness: None }),
    }
}
