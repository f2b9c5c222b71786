//! Wirtinger functionals and inequality verifiers.
//!
//! Functionals acting on a family take zero-extended prototypes on `(0, 1)`
//! and dilate them to `(0, Δ)` internally. Sampled suprema over a finite
//! family only bound the true supremum from below; every [`VerdictReport`]
//! states what its observed value certifies.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, input, Result};
use crate::function::{extremal_g, zero_class_check_relative, PolynomialFunc, RealFunction, ZeroClassSpec};
use crate::optimize::{self, Spacing};

mod classical;
mod functionals;
mod verdicts;

pub use classical::{beesack_check, brink_ratio, classical_wirtinger_check, estimate_ank};
pub use functionals::{v_delta, w_functional, w_functional_normalized, zygmund_params, zygmund_wo, zygmund_wo_at};
pub use verdicts::{
    natural_psi, nu_from_psi, orlicz_wbar, theorem31_check, theorem51_check, v0_lower_check, verify_thm71,
};

/// Margin slack below 1 still reported as satisfied.
pub const TOL_REPORT: f64 = 1e-6;
/// Zero-class membership tolerance for generated and user trials.
pub const ZERO_CLASS_TOL: f64 = 1e-9;

/// Default `p`/`q` grid: 24 log-spaced points on `[1.05, 50]`.
pub fn default_pq_grid() -> Vec<f64> {
    optimize::grid(1.05, 50.0, 24, Spacing::Log)
}

/// Default `Δ` grid: 25 log-spaced points on `[1e-3, 1e3]`.
pub fn default_delta_grid() -> Vec<f64> {
    optimize::grid(1e-3, 1e3, 25, Spacing::Log)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "wirtinger")]
    ClassicalWirtinger,
    #[serde(rename = "beesack")]
    Beesack,
    #[serde(rename = "ank")]
    EstimateAnk,
    #[serde(rename = "thm31")]
    Thm31,
    #[serde(rename = "thm41")]
    Thm41,
    #[serde(rename = "thm51")]
    Thm51,
    #[serde(rename = "thm61")]
    Thm61,
    #[serde(rename = "thm71")]
    Thm71,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::ClassicalWirtinger,
        TheoremId::Beesack,
        TheoremId::EstimateAnk,
        TheoremId::Thm31,
        TheoremId::Thm41,
        TheoremId::Thm51,
        TheoremId::Thm61,
        TheoremId::Thm71,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::ClassicalWirtinger => "wirtinger",
            TheoremId::Beesack => "beesack",
            TheoremId::EstimateAnk => "ank",
            TheoremId::Thm31 => "thm31",
            TheoremId::Thm41 => "thm41",
            TheoremId::Thm51 => "thm51",
            TheoremId::Thm61 => "thm61",
            TheoremId::Thm71 => "thm71",
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

/// Which way the checked inequality points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `observed ≤ bound`; margin `bound / observed`.
    AtMost,
    /// `observed ≥ bound`; margin `observed / bound`.
    AtLeast,
}

/// What the observed value certifies about the exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certified {
    /// Direct evaluation, exact up to quadrature and optimizer tolerances.
    Exact,
    /// Maximum over finitely many trials: a lower estimate of the supremum.
    LowerBoundOfSup,
    /// Infimum over a finite grid of a sampled supremum: neither side is certified.
    Neither,
}

/// A convention fixed where the underlying formulas admit more than one reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discrepancy {
    /// `|f|_p ≤ C|f'|_q` uses `C = K(q,p)`; the literal `K(p,q)` fails for `p > q`.
    KOrientation,
    /// `(T_Δ f)^(n) = Δ^{-n} T_Δ f^(n)`.
    DilationExponent,
    /// Zygmund fundamental function with `δ^{+1/q}`.
    ZygmundExponent,
    /// Beesack integrals taken over `[0, π/2]` on both sides.
    BeesackLimit,
    /// Core interval `[k/(n+1), (k+1)/(n+1)]` around the maximizer of `g_{n,k}`.
    CoreInterval,
    /// Normalized measure realised as a density `1/Δ` inside every integral.
    NormalizedMeasure,
    /// Moment orders restricted to the support `(A, B)` of the space.
    MomentClip,
}

impl Discrepancy {
    pub fn message(self) -> &'static str {
        match self {
            Discrepancy::KOrientation => {
                "sharp constant of |f|_p <= C |f'|_q is taken as K(q,p); the literal K(p,q) orientation is violated by x(1-x) for p > q"
            }
            Discrepancy::DilationExponent => {
                "dilation chain rule (T_D f)^(n) = D^(-n) T_D f^(n) is used; the n-th derivative term is D^n (T_D f)^(n) = T_D f^(n)"
            }
            Discrepancy::ZygmundExponent => {
                "Zygmund fundamental function uses D^(+1/q) (1 + |ln D|)^(gamma/q); the D^(-1/q) variant is available as an option"
            }
            Discrepancy::BeesackLimit => "Beesack integrals are taken over [0, pi/2] on both sides",
            Discrepancy::CoreInterval => {
                "core interval of g_{n,k} is [k/(n+1), (k+1)/(n+1)]; [alpha, beta] is empty for k > n/2"
            }
            Discrepancy::NormalizedMeasure => {
                "normalized-measure norms of non-Lebesgue spaces use the density 1/D inside every integral"
            }
            Discrepancy::MomentClip => "moment orders are restricted to the support (A, B) of each Grand Lebesgue space",
        }
    }
}

/// Outcome of a single inequality verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub theorem_id: TheoremId,
    #[serde(with = "crate::serde_float::map")]
    pub parameters: BTreeMap<String, f64>,
    #[serde(with = "crate::serde_float")]
    pub observed: f64,
    #[serde(with = "crate::serde_float")]
    pub bound: f64,
    pub direction: Direction,
    pub satisfied: bool,
    #[serde(with = "crate::serde_float")]
    pub margin: f64,
    pub samples: usize,
    pub skipped: usize,
    pub certified: Certified,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
}

impl VerdictReport {
    pub fn new(theorem_id: TheoremId, direction: Direction, observed: f64, bound: f64, certified: Certified) -> Self {
        let margin = margin(direction, observed, bound);
        Self {
            theorem_id,
            parameters: BTreeMap::new(),
            observed,
            bound,
            direction,
            satisfied: margin >= 1.0 - TOL_REPORT,
            margin,
            samples: 1,
            skipped: 0,
            certified,
            discrepancies: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn discrepancy(mut self, d: Discrepancy) -> Self {
        if !self.discrepancies.contains(&d) {
            self.discrepancies.push(d);
            self.discrepancies.sort();
        }
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Forces a failed verdict regardless of the margin (e.g. a divergent sweep).
    pub fn fail(mut self, reason: impl Into<String>) -> Self {
        self.satisfied = false;
        self.notes.push(reason.into());
        self
    }
}

fn margin(direction: Direction, observed: f64, bound: f64) -> f64 {
    let (num, den) = match direction {
        Direction::AtMost => (bound, observed),
        Direction::AtLeast => (observed, bound),
    };
    if num == 0.0 && den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Test functions for sampled suprema over `Z(n,k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrialFamily {
    /// The single extremal polynomial `g_{n,k}`.
    Extremal { n: usize, k: usize },
    /// `count` polynomials `r(x) x^k (1-x)^{n-k}` with `deg r = degree - n` and
    /// coefficients of `r` uniform in `[-1, 1]`.
    RandomZclass { n: usize, k: usize, degree: usize, count: usize, seed: u64 },
    /// Caller-supplied prototypes on `(0, 1)`.
    User { n: usize, k: usize, functions: Vec<PolynomialFunc> },
}

impl TrialFamily {
    pub fn extremal(n: usize, k: usize) -> Self {
        TrialFamily::Extremal { n, k }
    }

    pub fn random(n: usize, k: usize, degree: usize, count: usize, seed: u64) -> Self {
        TrialFamily::RandomZclass { n, k, degree, count, seed }
    }

    pub fn nk(&self) -> (usize, usize) {
        match self {
            TrialFamily::Extremal { n, k }
            | TrialFamily::RandomZclass { n, k, .. }
            | TrialFamily::User { n, k, .. } => (*n, *k),
        }
    }

    /// Materializes the family. Generated members lie in `Z(n,k)` exactly;
    /// user members are checked at [`ZERO_CLASS_TOL`] and rejected otherwise.
    pub fn generate(&self) -> Result<Vec<PolynomialFunc>> {
        let (n, k) = self.nk();
        let spec = ZeroClassSpec::new(n, k)?;
        match self {
            TrialFamily::Extremal { .. } => Ok(vec![extremal_g(n, k)?]),
            TrialFamily::RandomZclass { degree, count, seed, .. } => {
                if *degree < n {
                    return Err(domain(format!("random trials need degree >= n, got degree {degree} < {n}")));
                }
                let base = extremal_g(n, k)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..*count)
                    .map(|_| {
                        let r: Vec<f64> = (0..=degree - n).map(|_| rng.random_range(-1.0..=1.0)).collect();
                        base.product(&PolynomialFunc::new(r, base.domain()))
                    })
                    .collect())
            }
            TrialFamily::User { functions, .. } => {
                for (i, f) in functions.iter().enumerate() {
                    if !zero_class_check_relative(f, spec, ZERO_CLASS_TOL) {
                        return Err(input(format!("user trial {i} is not in Z({n},{k})")));
                    }
                }
                Ok(functions.iter().map(|f| f.clone().extended_by_zero()).collect())
            }
        }
    }
}
