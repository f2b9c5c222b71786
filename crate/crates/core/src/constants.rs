//! Closed-form constants: the Brink constant `K(p,q)`, the Beesack constant
//! and the lower bounds for `A(n,k)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::{factorial, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    #[serde(rename = "brink_K")]
    BrinkK,
    Beesack,
    AnkLbGls,
    AnkLbOrlicz,
    GnkMax,
    GnkCoreMin,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::BrinkK => "brink_K",
            FormulaId::Beesack => "beesack",
            FormulaId::AnkLbGls => "ank_lb_gls",
            FormulaId::AnkLbOrlicz => "ank_lb_orlicz",
            FormulaId::GnkMax => "gnk_max",
            FormulaId::GnkCoreMin => "gnk_core_min",
        }
    }

    pub fn parse(s: &str) -> Option<FormulaId> {
        [
            FormulaId::BrinkK,
            FormulaId::Beesack,
            FormulaId::AnkLbGls,
            FormulaId::AnkLbOrlicz,
            FormulaId::GnkMax,
            FormulaId::GnkCoreMin,
        ]
        .into_iter()
        .find(|id| id.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantValue {
    pub value: f64,
    pub formula_id: FormulaId,
}

impl ConstantValue {
    fn new(value: f64, formula_id: FormulaId) -> Self {
        Self { value, formula_id }
    }
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// `K(p,q) = (q/2) (1 + p*/q)^{1/p} (1 + q/p*)^{-1/q} Γ(1/q + 1/p*) / (Γ(1/q) Γ(1/p*))`
/// with `p* = p/(p-1)`, evaluated as printed.
///
/// As printed, `K(p,q)` is the sharp constant of `|f|_q ≤ K |f'|_p` for
/// `f(0) = f(1) = 0`; see [`sobolev_constant`] for the orientation
/// `|f|_p ≤ C |f'|_q`.
#[allow(non_snake_case)]
pub fn brink_K(p: f64, q: f64) -> Result<ConstantValue> {
    if !(p > 1.0 && q > 1.0) || !(p.is_finite() && q.is_finite()) {
        return Err(domain(format!("K(p,q) needs finite p > 1 and q > 1, got ({p}, {q})")));
    }
    let ps = conjugate(p);
    let ln = (q / 2.0).ln() + (1.0 + ps / q).ln() / p - (1.0 + q / ps).ln() / q + ln_gamma(1.0 / q + 1.0 / ps)
        - ln_gamma(1.0 / q)
        - ln_gamma(1.0 / ps);
    Ok(ConstantValue::new(ln.exp(), FormulaId::BrinkK))
}

/// Sharp `C` in `|f|_p ≤ C |f'|_q` on `(0,1)` with `f(0) = f(1) = 0`,
/// i.e. `K(q,p)`.
pub fn sobolev_constant(p: f64, q: f64) -> Result<ConstantValue> {
    brink_K(q, p)
}

/// `(1/(p-1)) (p/2 / sin(π/p))^p`.
pub fn beesack_constant(p: f64) -> Result<ConstantValue> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain(format!("Beesack constant needs finite p > 1, got {p}")));
    }
    let v = (p / 2.0 / (PI / p).sin()).powf(p) / (p - 1.0);
    Ok(ConstantValue::new(v, FormulaId::Beesack))
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k > n {
        return Err(domain(format!("need n >= 1 and 0 <= k <= n, got (n, k) = ({n}, {k})")));
    }
    Ok(())
}

/// `k^k (n-k)^{n-k}` with `0^0 = 1`.
fn kk(n: usize, k: usize) -> f64 {
    let pw = |b: usize| if b == 0 { 1.0 } else { (b as f64).powi(b as i32) };
    pw(k) * pw(n - k)
}

/// `k^k (n-k)^{n-k} / (n! (n+1)^{n+1})`.
pub fn ank_lower_bound(n: usize, k: usize) -> Result<ConstantValue> {
    check_nk(n, k)?;
    let v = kk(n, k) / (factorial(n) * ((n + 1) as f64).powi(n as i32 + 1));
    Ok(ConstantValue::new(v, FormulaId::AnkLbGls))
}

/// `k^k (n-k)^{n-k} / (n! (n+1)^n)`.
pub fn ank_lower_bound_orlicz(n: usize, k: usize) -> Result<ConstantValue> {
    check_nk(n, k)?;
    let v = kk(n, k) / (factorial(n) * ((n + 1) as f64).powi(n as i32));
    Ok(ConstantValue::new(v, FormulaId::AnkLbOrlicz))
}

/// Closed-form extrema of `g_{n,k}(x) = x^k (1-x)^{n-k}` on `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnkExtrema {
    /// `k^k (n-k)^{n-k} / n^n`
    pub max: ConstantValue,
    /// `k^k (n-k)^{n-k} / (n+1)^n`, a lower bound for `g_{n,k}` on the core interval.
    pub core_min: ConstantValue,
    /// `k/(n+1)`
    pub alpha: f64,
    /// `(n-k)/(n+1)`
    pub beta: f64,
    /// `[k/(n+1), (k+1)/(n+1)] = [α, 1-β]`, which brackets the maximizer `k/n`.
    pub core: (f64, f64),
    /// `[α, β]` when nonempty (`k < n/2`).
    pub literal: Option<(f64, f64)>,
}

pub fn gnk_extrema(n: usize, k: usize) -> Result<GnkExtrema> {
    check_nk(n, k)?;
    let m = kk(n, k);
    let n1 = (n + 1) as f64;
    let alpha = k as f64 / n1;
    let beta = (n - k) as f64 / n1;
    Ok(GnkExtrema {
        max: ConstantValue::new(m / (n as f64).powi(n as i32), FormulaId::GnkMax),
        core_min: ConstantValue::new(m / n1.powi(n as i32), FormulaId::GnkCoreMin),
        alpha,
        beta,
        core: (alpha, (k + 1) as f64 / n1),
        literal: (alpha < beta).then_some((alpha, beta)),
    })
}
