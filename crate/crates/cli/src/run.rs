//! Dispatch of a validated [`RunConfig`] to the numerical routines.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::Value;
use wirtinger_core::constants::{ank_lower_bound, ank_lower_bound_orlicz, beesack_constant, brink_K, gnk_extrema};
use wirtinger_core::norms::{self, zygmund_fundamental};
use wirtinger_core::wirtinger::{
    self, beesack_check, classical_wirtinger_check, default_delta_grid, default_pq_grid, estimate_ank, orlicz_wbar,
    theorem31_check, theorem51_check, v0_lower_check, verify_thm71, w_functional, w_functional_normalized, zygmund_wo,
};
use wirtinger_core::{
    Discrepancy, FormulaId, FunctionHandle, Interval, OrliczGen, PsiGen, RealFunction, SpaceSpec, TheoremId,
    TrialFamily, VerdictReport,
};

use crate::config::{Command, FamilyKind, Functional, RunConfig};
use crate::report::{ConstantEntry, NormEntry, ReportDocument, ResultEntry, SampleEntry};
use crate::spec::{build_function, build_psi, build_space, FunctionInput};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const DEFAULT_NK: (usize, usize) = (2, 1);
const DEFAULT_RANDOM_COUNT: usize = 16;
const DEFAULT_THM71_P: [f64; 4] = [1.5, 2.0, 2.5, 3.0];

/// A failure while running: bad input or a numerical routine that errored.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{operation} failed: {source}")]
    Numerical {
        operation: &'static str,
        #[source]
        source: wirtinger_core::Error,
    },
}

trait Context<T> {
    fn during(self, operation: &'static str) -> Result<T, RunError>;
}

impl<T> Context<T> for wirtinger_core::Result<T> {
    fn during(self, operation: &'static str) -> Result<T, RunError> {
        self.map_err(|source| RunError::Numerical { operation, source })
    }
}

/// Accumulates results and deduplicated warnings in first-seen order.
#[derive(Default)]
struct Output {
    results: Vec<ResultEntry>,
    warnings: Vec<String>,
}

impl Output {
    fn warn(&mut self, d: Discrepancy) {
        let msg = d.message().to_string();
        if !self.warnings.contains(&msg) {
            self.warnings.push(msg);
        }
    }

    fn verdict(&mut self, v: VerdictReport) {
        for d in v.discrepancies.clone() {
            self.warn(d);
        }
        self.results.push(ResultEntry::Verdict(v));
    }
}

/// Runs the configured command. Output format and destination are the caller's concern.
pub fn run(cfg: &RunConfig) -> Result<ReportDocument, RunError> {
    let start = Instant::now();
    let mut out = Output::default();
    match cfg.command {
        Command::Norm => run_norm(cfg, &mut out)?,
        Command::Fundamental => run_fundamental(cfg, &mut out)?,
        Command::Constant => run_constant(cfg, &mut out)?,
        Command::Verify => run_verify(cfg, &mut out)?,
        Command::Sweep => run_sweep(cfg, &mut out)?,
    }
    let timing_ms = if cfg.record_timing { start.elapsed().as_millis().max(1) as u64 } else { 0 };
    Ok(ReportDocument {
        tool_version: TOOL_VERSION.to_string(),
        config_echo: cfg.clone(),
        results: out.results,
        timing_ms,
        warnings: out.warnings,
    })
}

fn function(cfg: &RunConfig) -> Result<Option<FunctionInput>, RunError> {
    cfg.function_spec.as_ref().map(|v| build_function(v).map_err(RunError::Input)).transpose()
}

fn spaces(cfg: &RunConfig) -> Result<Vec<SpaceSpec>, RunError> {
    cfg.space_specs
        .iter()
        .enumerate()
        .map(|(i, v)| build_space(v, &format!("space_specs[{i}]")).map_err(RunError::Input))
        .collect()
}

fn psi(v: Option<&Value>, path: &str, f: Option<&FunctionInput>) -> Result<PsiGen, RunError> {
    let default = Value::Object(Default::default());
    build_psi(v.unwrap_or(&default), path, f.and_then(FunctionInput::polynomial)).map_err(RunError::Input)
}

fn nk(cfg: &RunConfig) -> (usize, usize) {
    (cfg.params.n.unwrap_or(DEFAULT_NK.0), cfg.params.k.unwrap_or(DEFAULT_NK.1))
}

fn family(cfg: &RunConfig) -> TrialFamily {
    let (n, k) = nk(cfg);
    match cfg.family {
        FamilyKind::Extremal => TrialFamily::extremal(n, k),
        FamilyKind::Random => TrialFamily::random(
            n,
            k,
            cfg.params.degree.unwrap_or(n + 3),
            cfg.params.count.unwrap_or(DEFAULT_RANDOM_COUNT),
            cfg.params.seed.unwrap_or(0),
        ),
    }
}

fn delta_grid(cfg: &RunConfig) -> Vec<f64> {
    cfg.grids.delta_grid.clone().unwrap_or_else(default_delta_grid)
}

fn space_warnings(out: &mut Output, s: &SpaceSpec) {
    if matches!(s, SpaceSpec::GrandLebesgue(_)) {
        out.warn(Discrepancy::MomentClip);
    }
}

fn run_norm(cfg: &RunConfig, out: &mut Output) -> Result<(), RunError> {
    let f = function(cfg)?.ok_or_else(|| RunError::Input("function_spec is required".into()))?;
    let iv = f.domain();
    for s in spaces(cfg)? {
        space_warnings(out, &s);
        let value = norms::norm(f.as_real(), &s, iv).during("norm")?;
        out.results.push(ResultEntry::Norm(NormEntry {
            operation: "norm".into(),
            space: s.describe(),
            function: Some(f.label()),
            delta: None,
            value,
        }));
    }
    Ok(())
}

fn run_fundamental(cfg: &RunConfig, out: &mut Output) -> Result<(), RunError> {
    let delta = cfg.params.delta.ok_or_else(|| RunError::Input("params.delta is required".into()))?;
    for s in spaces(cfg)? {
        let value = match &s {
            SpaceSpec::Zygmund(z) => {
                out.warn(Discrepancy::ZygmundExponent);
                zygmund_fundamental(z.q, z.gamma, delta, cfg.params.exponent.unwrap_or_default())
            }
            other => norms::fundamental(other, delta),
        }
        .during("fundamental")?;
        space_warnings(out, &s);
        out.results.push(ResultEntry::Norm(NormEntry {
            operation: "fundamental".into(),
            space: s.describe(),
            function: None,
            delta: Some(delta),
            value,
        }));
    }
    Ok(())
}

fn run_constant(cfg: &RunConfig, out: &mut Output) -> Result<(), RunError> {
    let id = cfg.constant_id.ok_or_else(|| RunError::Input("constant_id is required".into()))?;
    let p = cfg.params.p.unwrap_or(2.0);
    let q = cfg.params.q.unwrap_or(2.0);
    let (n, k) = nk(cfg);
    let (nf, kf) = (n as f64, k as f64);
    let (params, value): (Vec<(&str, f64)>, f64) = match id {
        FormulaId::BrinkK => {
            out.warn(Discrepancy::KOrientation);
            (vec![("p", p), ("q", q)], brink_K(p, q).during("brink_K")?.value)
        }
        FormulaId::Beesack => {
            out.warn(Discrepancy::BeesackLimit);
            (vec![("p", p)], beesack_constant(p).during("beesack")?.value)
        }
        FormulaId::AnkLbGls => (vec![("n", nf), ("k", kf)], ank_lower_bound(n, k).during("ank_lb_gls")?.value),
        FormulaId::AnkLbOrlicz => {
            (vec![("n", nf), ("k", kf)], ank_lower_bound_orlicz(n, k).during("ank_lb_orlicz")?.value)
        }
        FormulaId::GnkMax => (vec![("n", nf), ("k", kf)], gnk_extrema(n, k).during("gnk_max")?.max.value),
        FormulaId::GnkCoreMin => {
            out.warn(Discrepancy::CoreInterval);
            (vec![("n", nf), ("k", kf)], gnk_extrema(n, k).during("gnk_core_min")?.core_min.value)
        }
    };
    out.results.push(ResultEntry::Constant(ConstantEntry {
        formula_id: id,
        parameters: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>(),
        value,
    }));
    Ok(())
}

fn two_spaces(cfg: &RunConfig, default: impl FnOnce() -> [SpaceSpec; 2]) -> Result<[SpaceSpec; 2], RunError> {
    let mut s = spaces(cfg)?;
    match s.len() {
        0 => Ok(default()),
        2 => {
            let y = s.pop().expect("two spaces");
            let x = s.pop().expect("two spaces");
            Ok([x, y])
        }
        n => Err(RunError::Input(format!("expected two spaces X and Y, got {n}"))),
    }
}

fn orlicz_of(s: SpaceSpec, index: usize) -> Result<OrliczGen, RunError> {
    match s {
        SpaceSpec::Orlicz(g) => Ok(g),
        other => Err(RunError::Input(format!("space_specs[{index}] must be an Orlicz space, got {}", other.tag()))),
    }
}

fn run_verify(cfg: &RunConfig, out: &mut Output) -> Result<(), RunError> {
    let theorem = cfg.theorem_id.ok_or_else(|| RunError::Input("theorem_id is required".into()))?;
    let (n, k) = nk(cfg);
    let verdict = match theorem {
        TheoremId::ClassicalWirtinger => {
            let f = match function(cfg)? {
                Some(f) => f.handle(),
                None => FunctionHandle::sin(2.0 * std::f64::consts::PI, Interval::unit()),
            };
            classical_wirtinger_check(&f, f.domain()).during("classical_wirtinger_check")?
        }
        TheoremId::Beesack => {
            let f = match function(cfg)? {
                Some(f) => f.handle(),
                None => FunctionHandle::sin(1.0, Interval::new(0.0, std::f64::consts::FRAC_PI_2).during("interval")?),
            };
            beesack_check(&f, cfg.params.p.unwrap_or(2.0)).during("beesack_check")?
        }
        TheoremId::EstimateAnk => {
            let p_grid = cfg.grids.p_grid.clone().unwrap_or_else(default_pq_grid);
            let q_grid = cfg.grids.q_grid.clone().unwrap_or_else(default_pq_grid);
            estimate_ank(&family(cfg), &p_grid, &q_grid).during("estimate_ank")?
        }
        TheoremId::Thm31 => {
            let [x, y] = two_spaces(cfg, || {
                [
                    SpaceSpec::GrandLebesgue(PsiGen::constant(1.0, 1.5, 4.0).expect("valid default generator")),
                    SpaceSpec::Lebesgue(2.0),
                ]
            })?;
            let fam = family(cfg);
            let cap = match cfg.params.cap {
                Some(c) => c,
                None => {
                    let grid = default_pq_grid();
                    estimate_ank(&TrialFamily::extremal(n, k), &grid, &grid).during("estimate_ank")?.observed
                }
            };
            theorem31_check(&x, &y, &fam, &delta_grid(cfg), cap).during("theorem31_check")?
        }
        TheoremId::Thm41 => {
            let psi = psi(cfg.psi.as_ref(), "psi", None)?;
            let nu = psi_nu(cfg)?;
            v0_lower_check(&psi, &nu, n, k, &delta_grid(cfg)).during("v0_lower_check")?
        }
        TheoremId::Thm51 => {
            let p = cfg.params.p.unwrap_or(3.0);
            let q = cfg.params.q.unwrap_or(2.0);
            let gamma = cfg.params.gamma.unwrap_or(1.0);
            let beta = cfg.params.beta.unwrap_or(1.0);
            theorem51_check(p, q, gamma, beta, &family(cfg)).during("theorem51_check")?
        }
        TheoremId::Thm61 => {
            let [x, y] = two_spaces(cfg, || {
                let g = OrliczGen::power(2.0).expect("valid default generator");
                [SpaceSpec::Orlicz(g.clone()), SpaceSpec::Orlicz(g)]
            })?;
            let (phi, phi1) = (orlicz_of(x, 0)?, orlicz_of(y, 1)?);
            orlicz_wbar(&phi, &phi1, n, k, &delta_grid(cfg)).during("orlicz_wbar")?
        }
        TheoremId::Thm71 => {
            let f = match function(cfg)? {
                Some(f) => f,
                None => FunctionInput::Polynomial(wirtinger_core::extremal_g(2, 1).during("extremal_g")?),
            };
            let Some(poly) = f.polynomial() else {
                return Err(RunError::Input("thm71 needs a polynomial or extremal function".into()));
            };
            let psi = psi(cfg.psi.as_ref(), "psi", Some(&f))?;
            let p_grid = cfg.grids.p_grid.clone().unwrap_or_else(|| DEFAULT_THM71_P.to_vec());
            verify_thm71(poly, &psi, &p_grid).during("verify_thm71")?
        }
    };
    out.verdict(verdict);
    Ok(())
}

fn psi_nu(cfg: &RunConfig) -> Result<PsiGen, RunError> {
    psi(cfg.nu.as_ref(), "nu", None)
}

fn run_sweep(cfg: &RunConfig, out: &mut Output) -> Result<(), RunError> {
    let functional = cfg.params.functional.unwrap_or_default();
    let (n, _) = nk(cfg);
    let trials = family(cfg).generate().during("trial family")?;
    let grid = delta_grid(cfg);
    out.warn(Discrepancy::DilationExponent);
    let eval: Box<dyn Fn(f64) -> wirtinger_core::Result<f64> + Sync + Send> = match functional {
        Functional::W | Functional::WNormalized => {
            if cfg.space_specs.len() != 2 {
                return Err(RunError::Input(format!("sweep of {:?} needs two spaces X and Y", functional.as_str())));
            }
            let [x, y] = two_spaces(cfg, || unreachable!("two spaces checked above"))?;
            space_warnings(out, &x);
            space_warnings(out, &y);
            if functional == Functional::W {
                Box::new(move |d| w_functional(&x, &y, n, d, &trials))
            } else {
                out.warn(Discrepancy::NormalizedMeasure);
                Box::new(move |d| w_functional_normalized(&x, &y, n, d, &trials))
            }
        }
        Functional::VDelta => {
            out.warn(Discrepancy::MomentClip);
            let psi = psi(cfg.psi.as_ref(), "psi", None)?;
            let nu = psi_nu(cfg)?;
            Box::new(move |d| {
                trials
                    .iter()
                    .try_fold(f64::NEG_INFINITY, |best, g| Ok(best.max(wirtinger::v_delta(g, &nu, &psi, n, d)?)))
            })
        }
        Functional::ZygmundWo => {
            out.warn(Discrepancy::ZygmundExponent);
            let p = cfg.params.p.unwrap_or(3.0);
            let q = cfg.params.q.unwrap_or(2.0);
            let gamma = cfg.params.gamma.unwrap_or(1.0);
            let beta = cfg.params.beta.unwrap_or(1.0);
            Box::new(move |d| zygmund_wo(p, q, gamma, beta, n, d, &trials))
        }
    };
    let values = grid
        .par_iter()
        .map(|&d| eval(d))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<wirtinger_core::Result<Vec<f64>>>()
        .during(functional.as_str())?;
    for (&delta, value) in grid.iter().zip(values) {
        out.results.push(ResultEntry::Sample(SampleEntry { functional: functional.as_str().into(), delta, value }));
    }
    Ok(())
}
