//! Classical Wirtinger, Beesack and Brink checks.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{Certified, Direction, Discrepancy, TheoremId, TrialFamily, VerdictReport, ZERO_CLASS_TOL};
use crate::constants::{ank_lower_bound, beesack_constant};
use crate::error::{domain, input, Error, Result};
use crate::function::{
    zero_class_check_relative, FunctionHandle, Interval, PolynomialFunc, RealFunction, ZeroClassSpec,
};
use crate::norms::lp_norm;
use crate::quadrature::{integrate, integrate_composed, QuadConfig};

const PRECONDITION_TOL: f64 = 1e-9;
const CHECK_QUAD: QuadConfig = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-12, max_depth: 60 };
const MEAN_QUAD: QuadConfig = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-12, max_depth: 60 };

fn first_derivative(f: &FunctionHandle) -> Result<FunctionHandle> {
    f.derivative(1).ok_or_else(|| input(format!("derivative of {} was not supplied", f.label())))
}

/// `|f|_2 ≤ ((b-a)/2π) |f'|_2` for `f(a) = f(b)` and `∫_a^b f = 0`.
pub fn classical_wirtinger_check(f: &FunctionHandle, iv: Interval) -> Result<VerdictReport> {
    let (a, b) = (iv.a(), iv.b());
    let jump = (f.eval(a) - f.eval(b)).abs();
    if jump > PRECONDITION_TOL {
        return Err(input(format!("f(a) = f(b) fails: |f(a) - f(b)| = {jump:e}")));
    }
    let mean = integrate(|x| f.eval(x), iv, &MEAN_QUAD)?.value;
    if mean.abs() > PRECONDITION_TOL {
        return Err(input(format!("zero-mean condition fails: integral of f = {mean:e}")));
    }
    let d = first_derivative(f)?;
    let observed = lp_norm(f, 2.0, iv)?.value;
    let bound = iv.len() / (2.0 * PI) * lp_norm(&d, 2.0, iv)?.value;
    Ok(VerdictReport::new(TheoremId::ClassicalWirtinger, Direction::AtMost, observed, bound, Certified::Exact)
        .param("a", a)
        .param("b", b))
}

/// `∫_0^{π/2} |u|^p ≤ C_p ∫_0^{π/2} |u'|^p` for `u(0) = 0`.
pub fn beesack_check(u: &FunctionHandle, p: f64) -> Result<VerdictReport> {
    let c = beesack_constant(p)?.value;
    let at_zero = u.eval(0.0).abs();
    if at_zero > PRECONDITION_TOL {
        return Err(input(format!("u(0) = 0 fails: |u(0)| = {at_zero:e}")));
    }
    let d = first_derivative(u)?;
    let iv = Interval::new(0.0, PI / 2.0)?;
    let lhs = integrate_composed(u, |y| y.abs().powf(p), iv, &CHECK_QUAD)?.value;
    let rhs = integrate_composed(&d, |y| y.abs().powf(p), iv, &CHECK_QUAD)?.value;
    Ok(VerdictReport::new(TheoremId::Beesack, Direction::AtMost, lhs, c * rhs, Certified::Exact)
        .param("p", p)
        .param("constant", c)
        .discrepancy(Discrepancy::BeesackLimit))
}

fn check_member(f: &PolynomialFunc, n: usize, k: usize) -> Result<()> {
    let spec = ZeroClassSpec::new(n, k)?;
    if zero_class_check_relative(f, spec, ZERO_CLASS_TOL) {
        Ok(())
    } else {
        Err(input(format!("function is not in Z({n},{k}) on {:?}", f.domain())))
    }
}

/// `|f|_p / (Δ^{n+1/p-1/q} |f^(n)|_q)` on the domain of `f`.
pub fn brink_ratio(f: &PolynomialFunc, n: usize, k: usize, p: f64, q: f64) -> Result<f64> {
    check_member(f, n, k)?;
    let iv = f.domain();
    let delta = iv.len();
    let top = lp_norm(f, p, iv)?.value;
    let bottom = lp_norm(&f.derivative(n), q, iv)?.value;
    if bottom == 0.0 {
        return Err(Error::DivisionByZero("n-th derivative norm"));
    }
    let scale = delta.powf(n as f64 + 1.0 / p - 1.0 / q);
    Ok(top / (scale * bottom))
}

/// Empirical `A(n,k)`: the largest Brink ratio over `family × p_grid × q_grid`
/// on `Δ = 1`, compared against the closed-form lower bound.
pub fn estimate_ank(family: &TrialFamily, p_grid: &[f64], q_grid: &[f64]) -> Result<VerdictReport> {
    let (n, k) = family.nk();
    let bound = ank_lower_bound(n, k)?.value;
    if p_grid.is_empty() || q_grid.is_empty() {
        return Err(domain("moment grids must be nonempty"));
    }
    if let Some(bad) = p_grid.iter().chain(q_grid).find(|&&x| !(x > 1.0)) {
        return Err(domain(format!("moment grids must lie in (1, inf), got {bad}")));
    }
    let trials = family.generate()?;
    let spec = ZeroClassSpec::new(n, k)?;
    // Per trial: None when skipped, otherwise the best ratio and where it occurs.
    let per_trial: Vec<Result<Option<(f64, f64, f64)>>> = trials
        .par_iter()
        .map(|f| {
            if !zero_class_check_relative(f, spec, ZERO_CLASS_TOL) {
                return Ok(None);
            }
            let iv = f.domain();
            let dn = f.derivative(n);
            let bottoms = q_grid.iter().map(|&q| Ok(lp_norm(&dn, q, iv)?.value)).collect::<Result<Vec<_>>>()?;
            if bottoms.contains(&0.0) {
                return Ok(None);
            }
            let mut best: Option<(f64, f64, f64)> = None;
            for &p in p_grid {
                let top = lp_norm(f, p, iv)?.value;
                for (&q, &bottom) in q_grid.iter().zip(&bottoms) {
                    let r = top / bottom;
                    if best.is_none_or(|(v, _, _)| r > v) {
                        best = Some((r, p, q));
                    }
                }
            }
            Ok(best)
        })
        .collect();
    let mut skipped = 0;
    let mut best: Option<(f64, f64, f64)> = None;
    for r in per_trial {
        match r? {
            None => skipped += 1,
            Some(c) => {
                if best.is_none_or(|b| c.0 > b.0) {
                    best = Some(c);
                }
            }
        }
    }
    let Some((observed, p_best, q_best)) = best else {
        return Err(input(format!("every one of the {} trials was skipped", trials.len())));
    };
    let mut report =
        VerdictReport::new(TheoremId::EstimateAnk, Direction::AtLeast, observed, bound, Certified::LowerBoundOfSup)
            .param("n", n as f64)
            .param("k", k as f64)
            .param("p_best", p_best)
            .param("q_best", q_best)
            .samples((trials.len() - skipped) * p_grid.len() * q_grid.len());
    report.skipped = skipped;
    if !observed.is_finite() {
        report = report.fail("sweep produced a non-finite ratio");
    }
    Ok(report)
}
