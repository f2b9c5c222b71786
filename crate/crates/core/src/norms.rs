//! Norms and fundamental functions of the supported function spaces.
//!
//! * Lebesgue `|f|_p`, its normalized-measure variant and the sup-norm.
//! * Grand Lebesgue `||f||G(ψ) = sup_p |f|_p / ψ(p)` over the moment support `(A, B)`.
//! * Orlicz spaces with the variational norm `inf_v v⁻¹ [1 + ∫ Φ(v h)]`.
//! * Zygmund spaces `L_q (Log)^γ L`, realised as Orlicz spaces.
//!
//! Every integral here may carry a constant measure weight `w`
//! (`w = 1/Δ` gives the normalized measure `m_Δ`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::function::{Interval, RealFunction};
use crate::optimize::{self, golden_section_min, Goal, Spacing};
use crate::quadrature::{integrate_composed, QuadConfig, QuadError};

/// Largest moment order evaluated by quadrature; beyond it the sup-norm limit is used.
pub const P_MAX: f64 = 500.0;
/// Size of the log-spaced moment grid used for suprema over `p`.
pub const MOMENT_GRID: usize = 64;

const NORM_QUAD: QuadConfig = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-11, max_depth: 60 };
const ORLICZ_QUAD: QuadConfig = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-11, max_depth: 60 };
const CLIP_REL: f64 = 1e-9;
const REFINE_REL: f64 = 1e-10;
/// Golden-section tolerance in `ln v` for the Orlicz functional.
const LOG_V_TOL: f64 = 1e-10;
const BRACKET_DECADES: i32 = 6;
const MAX_EXPANSIONS: usize = 60;

/// A computed norm with a numerical-error estimate. `value` may be `+inf`
/// for divergent Grand Lebesgue norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    #[serde(with = "crate::serde_float")]
    pub value: f64,
    #[serde(with = "crate::serde_float")]
    pub error_estimate: f64,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        Self { value, error_estimate: 0.0 }
    }

    pub fn infinite() -> Self {
        Self { value: f64::INFINITY, error_estimate: 0.0 }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

pub type PsiFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Shape of a generating function `ψ`.
#[derive(Clone)]
pub enum PsiForm {
    /// `ψ(p) = c`
    Constant(f64),
    /// `ψ(p) = p^a`
    Power(f64),
    /// Piecewise-linear interpolation of `(p, ψ(p))` samples, clamped at the ends.
    Table(Vec<(f64, f64)>),
    Custom(String, PsiFn),
}

impl fmt::Debug for PsiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiForm::Constant(c) => write!(f, "Constant({c})"),
            PsiForm::Power(a) => write!(f, "Power({a})"),
            PsiForm::Table(t) => write!(f, "Table({} nodes)", t.len()),
            PsiForm::Custom(label, _) => write!(f, "Custom({label})"),
        }
    }
}

impl PsiForm {
    fn eval(&self, p: f64) -> f64 {
        match self {
            PsiForm::Constant(c) => *c,
            PsiForm::Power(a) => p.powf(*a),
            PsiForm::Table(t) => interpolate(t, p),
            PsiForm::Custom(_, f) => f(p),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PsiForm::Constant(_) => "constant",
            PsiForm::Power(_) => "power",
            PsiForm::Table(_) => "table",
            PsiForm::Custom(..) => "custom",
        }
    }
}

fn interpolate(t: &[(f64, f64)], p: f64) -> f64 {
    if p <= t[0].0 {
        return t[0].1;
    }
    for w in t.windows(2) {
        let ((p0, y0), (p1, y1)) = (w[0], w[1]);
        if p <= p1 {
            return y0 + (y1 - y0) * (p - p0) / (p1 - p0);
        }
    }
    t[t.len() - 1].1
}

/// Generating function of a Grand Lebesgue space with its moment support.
///
/// `ψ` is divided by its infimum over the moment grid at construction, so
/// `inf ψ = 1`; the divisor is kept as [`PsiGen::scale`].
#[derive(Debug, Clone)]
pub struct PsiGen {
    form: PsiForm,
    a: f64,
    b: f64,
    scale: f64,
}

impl PsiGen {
    pub fn new(form: PsiForm, a: f64, b: f64) -> Result<Self> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(domain(format!("moment support needs A >= 1, got {a}")));
        }
        if !(b > a) {
            return Err(domain(format!("moment support needs B > A, got ({a}, {b})")));
        }
        if let PsiForm::Table(t) = &form {
            if t.len() < 2 || t.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(domain("table generator needs at least two nodes with increasing p"));
            }
        }
        let mut gen = Self { form, a, b, scale: 1.0 };
        let grid = gen.moment_grid()?;
        let mut inf = f64::INFINITY;
        for &p in &grid {
            let v = gen.form.eval(p);
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("generating function must be positive and finite, psi({p}) = {v}")));
            }
            inf = inf.min(v);
        }
        gen.scale = inf;
        Ok(gen)
    }

    pub fn constant(c: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(PsiForm::Constant(c), a, b)
    }

    pub fn power(exponent: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(PsiForm::Power(exponent), a, b)
    }

    pub fn custom<F>(label: impl Into<String>, f: F, a: f64, b: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(PsiForm::Custom(label.into(), Arc::new(f)), a, b)
    }

    /// Normalized `ψ(p)`.
    pub fn eval(&self, p: f64) -> f64 {
        self.form.eval(p) / self.scale
    }

    /// `ψ(p)` before normalization.
    pub fn raw(&self, p: f64) -> f64 {
        self.form.eval(p)
    }

    /// Normalization divisor: `eval(p) = raw(p) / scale()`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn form(&self) -> &PsiForm {
        &self.form
    }

    /// Moment support `(A, B)`; `B` may be `+inf`.
    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Closed band actually scanned inside the open support.
    pub fn clipped_support(&self) -> Result<(f64, f64)> {
        let lo = self.a * (1.0 + CLIP_REL) + CLIP_REL;
        let hi = if self.b.is_finite() { self.b * (1.0 - CLIP_REL) } else { P_MAX };
        let hi = hi.min(P_MAX);
        if lo >= hi {
            return Err(domain(format!(
                "moment support ({}, {}) is empty after clipping to p <= {P_MAX}",
                self.a, self.b
            )));
        }
        Ok((lo, hi))
    }

    pub fn moment_grid(&self) -> Result<Vec<f64>> {
        let (lo, hi) = self.clipped_support()?;
        Ok(optimize::grid(lo, hi, MOMENT_GRID, Spacing::Log))
    }

    /// Normalized `lim_{p→∞} ψ(p)` when the support is unbounded above.
    pub fn limit_at_infinity(&self) -> Option<f64> {
        if self.b.is_finite() {
            return None;
        }
        let raw = match &self.form {
            PsiForm::Constant(c) => *c,
            PsiForm::Power(a) if *a > 0.0 => f64::INFINITY,
            PsiForm::Power(a) if *a == 0.0 => 1.0,
            PsiForm::Power(_) => 0.0,
            PsiForm::Table(t) => t[t.len() - 1].1,
            PsiForm::Custom(_, f) => f(1e12),
        };
        Some(raw / self.scale)
    }

    pub fn describe(&self) -> String {
        format!("{:?} on ({}, {})", self.form, self.a, self.b)
    }
}

pub type PhiFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum OrliczDescriptor {
    Power { p: f64 },
    Zygmund { q: f64, gamma: f64, c: f64 },
    Custom { label: String },
}

/// An Orlicz function `Φ` on `[0, ∞)`; evaluation applies it to `|u|`.
#[derive(Clone)]
pub struct OrliczGen {
    phi: PhiFn,
    descriptor: OrliczDescriptor,
}

impl fmt::Debug for OrliczGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczGen").field("descriptor", &self.descriptor).finish()
    }
}

/// Convexity spot-check nodes `2^-10 .. 2^10`.
fn spot_nodes() -> impl Iterator<Item = f64> {
    (-10..=10).map(|e| 2f64.powi(e))
}

fn spot_check(phi: &dyn Fn(f64) -> f64) -> std::result::Result<(), String> {
    if phi(0.0) != 0.0 {
        return Err(format!("Phi(0) must be 0, got {}", phi(0.0)));
    }
    let mut xs = vec![0.0];
    xs.extend(spot_nodes());
    let ys: Vec<f64> = xs.iter().map(|&u| phi(u)).collect();
    if let Some(i) = ys.iter().position(|y| !(y.is_finite() && *y >= 0.0)) {
        return Err(format!("Phi({}) = {} is not a finite non-negative value", xs[i], ys[i]));
    }
    let mut prev_slope = f64::NEG_INFINITY;
    for i in 0..xs.len() - 1 {
        let slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        if slope < -1e-15 * ys[i + 1].abs() {
            return Err(format!("Phi decreases on [{}, {}]", xs[i], xs[i + 1]));
        }
        if slope < prev_slope * (1.0 - 1e-10) - 1e-300 {
            return Err(format!("Phi is not convex near u = {}", xs[i]));
        }
        prev_slope = slope;
    }
    Ok(())
}

impl OrliczGen {
    fn validated(phi: PhiFn, descriptor: OrliczDescriptor) -> Result<Self> {
        spot_check(phi.as_ref()).map_err(Error::Construction)?;
        Ok(Self { phi, descriptor })
    }

    /// `Φ(u) = |u|^p`, `p ≥ 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(domain(format!("power Orlicz function needs p >= 1, got {p}")));
        }
        Self::validated(Arc::new(move |u: f64| u.abs().powf(p)), OrliczDescriptor::Power { p })
    }

    pub fn custom<F>(label: impl Into<String>, phi: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::validated(Arc::new(phi), OrliczDescriptor::Custom { label: label.into() })
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.phi)(u.abs())
    }

    pub fn descriptor(&self) -> &OrliczDescriptor {
        &self.descriptor
    }
}

/// `Φ(u) = |u|^q [ln(C + |u|)]^γ`.
///
/// An explicit `c` must satisfy `C ≥ e` and pass the convexity spot-check.
/// With `c = None`, `C` starts at `e` and doubles until the check passes.
pub fn zygmund_orlicz_gen(q: f64, gamma: f64, c: Option<f64>) -> Result<OrliczGen> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(domain(format!("Zygmund space needs q > 1, got {q}")));
    }
    if !gamma.is_finite() {
        return Err(domain(format!("Zygmund exponent gamma must be finite, got {gamma}")));
    }
    let build = |c: f64| -> PhiFn {
        if gamma == 0.0 {
            Arc::new(move |u: f64| u.abs().powf(q))
        } else {
            Arc::new(move |u: f64| {
                let u = u.abs();
                if u == 0.0 {
                    0.0
                } else {
                    u.powf(q) * (c + u).ln().powf(gamma)
                }
            })
        }
    };
    let descriptor = |c: f64| OrliczDescriptor::Zygmund { q, gamma, c };
    match c {
        Some(c) => {
            if !(c >= std::f64::consts::E) {
                return Err(domain(format!("Zygmund constant needs C >= e, got {c}")));
            }
            OrliczGen::validated(build(c), descriptor(c))
        }
        None => {
            let mut c = std::f64::consts::E;
            for _ in 0..64 {
                let phi = build(c);
                if spot_check(phi.as_ref()).is_ok() {
                    return Ok(OrliczGen { phi, descriptor: descriptor(c) });
                }
                c *= 2.0;
            }
            Err(Error::Construction(format!("no admissible Zygmund constant for q = {q}, gamma = {gamma}")))
        }
    }
}

/// A Zygmund space `L_q (Log)^γ L` with its Orlicz generator.
#[derive(Debug, Clone)]
pub struct ZygmundSpace {
    pub q: f64,
    pub gamma: f64,
    pub gen: OrliczGen,
}

impl ZygmundSpace {
    pub fn new(q: f64, gamma: f64, c: Option<f64>) -> Result<Self> {
        Ok(Self { q, gamma, gen: zygmund_orlicz_gen(q, gamma, c)? })
    }

    pub fn c(&self) -> f64 {
        match self.gen.descriptor {
            OrliczDescriptor::Zygmund { c, .. } => c,
            _ => unreachable!("Zygmund space always carries a Zygmund generator"),
        }
    }
}

/// A rearrangement-invariant space description.
#[derive(Debug, Clone)]
pub enum SpaceSpec {
    /// `L_p`, `p ∈ [1, ∞]`.
    Lebesgue(f64),
    GrandLebesgue(PsiGen),
    Orlicz(OrliczGen),
    Zygmund(ZygmundSpace),
}

impl SpaceSpec {
    pub fn lebesgue(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(domain(format!("Lebesgue exponent must be >= 1, got {p}")));
        }
        Ok(SpaceSpec::Lebesgue(p))
    }

    pub fn zygmund(q: f64, gamma: f64, c: Option<f64>) -> Result<Self> {
        Ok(SpaceSpec::Zygmund(ZygmundSpace::new(q, gamma, c)?))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SpaceSpec::Lebesgue(_) => "lebesgue",
            SpaceSpec::GrandLebesgue(_) => "gls",
            SpaceSpec::Orlicz(_) => "orlicz",
            SpaceSpec::Zygmund(_) => "zygmund",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SpaceSpec::Lebesgue(p) => format!("L_{p}"),
            SpaceSpec::GrandLebesgue(g) => format!("G(psi = {})", g.describe()),
            SpaceSpec::Orlicz(g) => format!("L(Phi = {:?})", g.descriptor()),
            SpaceSpec::Zygmund(z) => format!("L_{} (Log)^{} L, C = {}", z.q, z.gamma, z.c()),
        }
    }
}

/// Moments `p ↦ |f|_p` of one function on one interval, with the support,
/// breakpoints and sup-norm computed once.
struct Moments<'a> {
    f: &'a dyn RealFunction,
    iv: Interval,
    sup: f64,
}

impl<'a> Moments<'a> {
    fn new(f: &'a dyn RealFunction, iv: Interval) -> Self {
        Self { f, iv, sup: f.sup_abs(iv) }
    }

    fn lp(&self, p: f64) -> std::result::Result<NormValue, QuadError> {
        if p.is_infinite() {
            return Ok(NormValue::exact(self.sup));
        }
        if self.sup == 0.0 {
            return Ok(NormValue::exact(0.0));
        }
        let m = self.sup;
        let cfg = QuadConfig { abs_tol: NORM_QUAD.abs_tol * self.iv.len(), ..NORM_QUAD };
        let r = integrate_composed(self.f, |y| (y.abs() / m).powf(p), self.iv, &cfg)?;
        let value = m * r.value.powf(1.0 / p);
        let error_estimate = if r.value > 0.0 { value * r.error_estimate / (p * r.value) } else { 0.0 };
        Ok(NormValue { value, error_estimate })
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("moment order must be >= 1, got {p}")))
    }
}

/// `|f|_p = (∫_iv |f|^p)^{1/p}`; `p = ∞` gives the sup-norm.
pub fn lp_norm(f: &dyn RealFunction, p: f64, iv: Interval) -> Result<NormValue> {
    check_p(p)?;
    Ok(Moments::new(f, iv).lp(p)?)
}

/// `sup_{x ∈ iv} |f(x)|`; exact critical-point search for polynomials.
pub fn sup_norm(f: &dyn RealFunction, iv: Interval) -> NormValue {
    NormValue::exact(f.sup_abs(iv))
}

/// `Δ^{-1/p} |f|_p`, the norm with respect to the normalized measure `m_Δ`.
pub fn normalized_lp_norm(f: &dyn RealFunction, p: f64, iv: Interval) -> Result<NormValue> {
    lp_norm_weighted(f, p, iv, 1.0 / iv.len())
}

/// `|f|_p` with respect to the measure `w·dx`.
pub fn lp_norm_weighted(f: &dyn RealFunction, p: f64, iv: Interval, w: f64) -> Result<NormValue> {
    let n = lp_norm(f, p, iv)?;
    let s = if p.is_infinite() { 1.0 } else { w.powf(1.0 / p) };
    Ok(NormValue { value: s * n.value, error_estimate: s * n.error_estimate })
}

/// Supremum over the moment grid of `gen` with golden refinement. A
/// non-finite or non-convergent sample makes the whole outcome `+inf`.
fn moment_sup<F>(gen: &PsiGen, mut ratio: F, limit: Option<f64>) -> Result<NormValue>
where
    F: FnMut(f64) -> std::result::Result<NormValue, QuadError>,
{
    let grid = gen.moment_grid()?;
    let mut diverged = false;
    let mut worst_err = 0.0f64;
    let scan = optimize::scan_and_refine(
        |p| -> Result<f64> {
            match ratio(p) {
                Ok(v) => {
                    worst_err = worst_err.max(v.error_estimate);
                    if !v.value.is_finite() {
                        diverged = true;
                    }
                    Ok(v.value)
                }
                Err(QuadError::NonConvergence { .. }) | Err(QuadError::NonFinite { .. }) => {
                    diverged = true;
                    Ok(f64::INFINITY)
                }
                Err(e) => Err(e.into()),
            }
        },
        &grid,
        Goal::Max,
        REFINE_REL,
    )?;
    if diverged {
        return Ok(NormValue::infinite());
    }
    let mut value = scan.best.value;
    if let Some(l) = limit {
        value = value.max(l);
    }
    Ok(NormValue { value, error_estimate: worst_err })
}

/// `||f||G(ψ) = sup_{p ∈ (A,B)} |f|_p / ψ(p)`.
pub fn gls_norm(f: &dyn RealFunction, gen: &PsiGen, iv: Interval) -> Result<NormValue> {
    gls_norm_weighted(f, gen, iv, 1.0)
}

pub fn gls_norm_weighted(f: &dyn RealFunction, gen: &PsiGen, iv: Interval, w: f64) -> Result<NormValue> {
    let moments = Moments::new(f, iv);
    let limit = gen.limit_at_infinity().map(|l| if l.is_infinite() { 0.0 } else { moments.sup / l });
    moment_sup(
        gen,
        |p| {
            let n = moments.lp(p)?;
            let s = w.powf(1.0 / p) / gen.eval(p);
            Ok(NormValue { value: s * n.value, error_estimate: s * n.error_estimate })
        },
        limit,
    )
}

/// `φ(G(ψ), δ) = sup_{p ∈ (A,B)} δ^{1/p} / ψ(p)`.
pub fn gls_fundamental(gen: &PsiGen, delta: f64) -> Result<NormValue> {
    check_delta(delta)?;
    let limit = gen.limit_at_infinity().map(|l| if l.is_infinite() { 0.0 } else { 1.0 / l });
    moment_sup(gen, |p| Ok(NormValue::exact(delta.powf(1.0 / p) / gen.eval(p))), limit)
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("measure must be positive and finite, got {delta}")))
    }
}

/// Minimizes `v ↦ (1 + I(v)) / v` over `v > 0` by golden section on `ln v`
/// after expanding a decade bracket around `[1e-6, 1e6]`.
fn orlicz_functional<F>(mut integral: F) -> Result<NormValue>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let ln10 = std::f64::consts::LN_10;
    let mut worst_err = 0.0f64;
    let mut objective = |t: f64| -> Result<f64> {
        let v = t.exp();
        let (i, e) = integral(v)?;
        worst_err = worst_err.max(e / v);
        Ok((1.0 + i) / v)
    };
    let mut ts: Vec<f64> = (-BRACKET_DECADES..=BRACKET_DECADES).map(|d| d as f64 * ln10).collect();
    let mut vals = ts.iter().map(|&t| objective(t)).collect::<Result<Vec<_>>>()?;
    let mut expansions = 0;
    let idx = loop {
        let mut best = 0;
        for (i, &v) in vals.iter().enumerate() {
            if v < vals[best] {
                best = i;
            }
        }
        let last = vals.len() - 1;
        if best != 0 && best != last {
            break best;
        }
        if expansions >= MAX_EXPANSIONS {
            return Err(Error::Optimization(format!(
                "Orlicz functional is monotone over {} decades of v",
                vals.len() - 1
            )));
        }
        expansions += 1;
        if best == 0 {
            let t = ts[0] - ln10;
            vals.insert(0, objective(t)?);
            ts.insert(0, t);
        } else {
            let t = ts[last] + ln10;
            vals.push(objective(t)?);
            ts.push(t);
        }
    };
    let grid_best = vals[idx];
    let refined = golden_section_min(&mut objective, ts[idx - 1], ts[idx + 1], LOG_V_TOL)?;
    let value = refined.value.min(grid_best);
    Ok(NormValue { value, error_estimate: worst_err })
}

/// `||h||L(Φ) = inf_{v>0} v⁻¹ [1 + ∫_iv Φ(v h)]`.
pub fn luxemburg_norm(h: &dyn RealFunction, gen: &OrliczGen, iv: Interval) -> Result<NormValue> {
    luxemburg_norm_weighted(h, gen, iv, 1.0)
}

pub fn luxemburg_norm_weighted(h: &dyn RealFunction, gen: &OrliczGen, iv: Interval, w: f64) -> Result<NormValue> {
    if h.sup_abs(iv) == 0.0 {
        return Ok(NormValue::exact(0.0));
    }
    orlicz_functional(|v| {
        let r = integrate_composed(h, |y| gen.eval(v * y), iv, &ORLICZ_QUAD)?;
        Ok((w * r.value, w * r.error_estimate))
    })
}

/// `φ(L(Φ), δ) = inf_{v>0} v⁻¹ [1 + δ Φ(v)]`.
pub fn orlicz_fundamental(gen: &OrliczGen, delta: f64) -> Result<NormValue> {
    check_delta(delta)?;
    orlicz_functional(|v| Ok((gen.eval(v) * delta, 0.0)))
}

/// Sign of the exponent of `δ` in the Zygmund fundamental function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FundamentalExponent {
    /// `δ^{+1/q}`, vanishing at zero like every fundamental function.
    #[default]
    Positive,
    /// `δ^{-1/q}`.
    Negative,
}

/// `δ^{±1/q} (1 + |ln δ|)^{γ/q}`.
pub fn zygmund_fundamental(q: f64, gamma: f64, delta: f64, exponent: FundamentalExponent) -> Result<NormValue> {
    if !(q > 1.0) {
        return Err(domain(format!("Zygmund space needs q > 1, got {q}")));
    }
    check_delta(delta)?;
    let s = match exponent {
        FundamentalExponent::Positive => 1.0,
        FundamentalExponent::Negative => -1.0,
    };
    Ok(NormValue::exact(delta.powf(s / q) * (1.0 + delta.ln().abs()).powf(gamma / q)))
}

/// `φ(X, δ)`.
pub fn fundamental(space: &SpaceSpec, delta: f64) -> Result<NormValue> {
    check_delta(delta)?;
    match space {
        SpaceSpec::Lebesgue(p) if p.is_infinite() => Ok(NormValue::exact(1.0)),
        SpaceSpec::Lebesgue(p) => Ok(NormValue::exact(delta.powf(1.0 / p))),
        SpaceSpec::GrandLebesgue(g) => gls_fundamental(g, delta),
        SpaceSpec::Orlicz(g) => orlicz_fundamental(g, delta),
        SpaceSpec::Zygmund(z) => zygmund_fundamental(z.q, z.gamma, delta, FundamentalExponent::Positive),
    }
}

/// `||f||X` on `iv`.
pub fn norm(f: &dyn RealFunction, space: &SpaceSpec, iv: Interval) -> Result<NormValue> {
    norm_weighted(f, space, iv, 1.0)
}

/// `||f||X` with the Lebesgue measure replaced by `w·dx`.
pub fn norm_weighted(f: &dyn RealFunction, space: &SpaceSpec, iv: Interval, w: f64) -> Result<NormValue> {
    match space {
        SpaceSpec::Lebesgue(p) => lp_norm_weighted(f, *p, iv, w),
        SpaceSpec::GrandLebesgue(g) => gls_norm_weighted(f, g, iv, w),
        SpaceSpec::Orlicz(g) => luxemburg_norm_weighted(f, g, iv, w),
        SpaceSpec::Zygmund(z) => luxemburg_norm_weighted(f, &z.gen, iv, w),
    }
}

/// `R(f; X, Δ) = ||f||X / φ(X, Δ)` with `Δ = |iv|`.
pub fn r_functional(f: &dyn RealFunction, space: &SpaceSpec, iv: Interval) -> Result<NormValue> {
    let n = norm(f, space, iv)?;
    let phi = fundamental(space, iv.len())?;
    if phi.value == 0.0 {
        return Err(Error::DivisionByZero("fundamental function"));
    }
    Ok(NormValue { value: n.value / phi.value, error_estimate: n.error_estimate / phi.value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{extremal_g, FunctionHandle, PolynomialFunc};
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    fn one(delta: f64) -> PolynomialFunc {
        PolynomialFunc::constant(1.0, Interval::from_length(delta).unwrap())
    }

    #[test]
    fn lp_examples() {
        let g = extremal_g(2, 1).unwrap();
        let u = Interval::unit();
        assert_relative_eq!(lp_norm(&g, 2.0, u).unwrap().value, (1.0f64 / 30.0).sqrt(), max_relative = 1e-12);
        for p in [1.0, 2.5, 9.0] {
            assert_relative_eq!(lp_norm(&one(1.0), p, u).unwrap().value, 1.0, max_relative = 1e-15);
        }
        let s = FunctionHandle::sin(2.0 * PI, u);
        assert_relative_eq!(lp_norm(&s, 2.0, u).unwrap().value, 0.5f64.sqrt(), max_relative = 1e-11);
        assert!(lp_norm(&g, 0.5, u).is_err());
    }

    #[test]
    fn sup_examples() {
        let u = Interval::unit();
        assert_relative_eq!(sup_norm(&extremal_g(2, 1).unwrap(), u).value, 0.25, max_relative = 1e-15);
        assert_eq!(sup_norm(&PolynomialFunc::constant(-3.5, u), u).value, 3.5);
        assert_relative_eq!(sup_norm(&extremal_g(3, 1).unwrap(), u).value, 4.0 / 27.0, max_relative = 1e-14);
        let s = FunctionHandle::sin(2.0 * PI, u);
        assert_relative_eq!(sup_norm(&s, u).value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn normalized_examples() {
        for delta in [0.1, 1.0, 7.0] {
            let iv = Interval::from_length(delta).unwrap();
            assert_relative_eq!(normalized_lp_norm(&one(delta), 3.0, iv).unwrap().value, 1.0, max_relative = 1e-14);
        }
        let g = extremal_g(2, 1).unwrap();
        assert_relative_eq!(
            normalized_lp_norm(&g, 1.0, Interval::unit()).unwrap().value,
            1.0 / 6.0,
            max_relative = 1e-12
        );
        let iv4 = Interval::from_length(4.0).unwrap();
        assert_relative_eq!(normalized_lp_norm(&one(4.0), 2.0, iv4).unwrap().value, 1.0, max_relative = 1e-15);
        assert_relative_eq!(lp_norm(&one(4.0), 2.0, iv4).unwrap().value, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn gls_examples() {
        let u = Interval::unit();
        let flat = PsiGen::constant(1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(gls_norm(&one(1.0), &flat, u).unwrap().value, 1.0, max_relative = 1e-12);
        let linear = PsiGen::power(1.0, 1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(gls_norm(&one(1.0), &linear, u).unwrap().value, 1.0, max_relative = 1e-8);
        let g = extremal_g(2, 1).unwrap();
        let v = gls_norm(&g, &flat, u).unwrap().value;
        assert_relative_eq!(v, (1.0f64 / 30.0).sqrt(), max_relative = 1e-8);
    }

    #[test]
    fn gls_fundamental_examples() {
        let flat = PsiGen::constant(1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(gls_fundamental(&flat, 1.0).unwrap().value, 1.0, max_relative = 1e-15);
        assert_relative_eq!(gls_fundamental(&flat, 4.0).unwrap().value, 4.0, max_relative = 1e-8);
        assert_relative_eq!(gls_fundamental(&flat, 0.25).unwrap().value, 0.5, max_relative = 1e-8);
        assert!(gls_fundamental(&flat, 0.0).is_err());
    }

    #[test]
    fn psi_normalization() {
        let g = PsiGen::constant(3.0, 1.5, 3.0).unwrap();
        assert_eq!(g.scale(), 3.0);
        assert_eq!(g.eval(2.0), 1.0);
        assert!(PsiGen::constant(1.0, 0.5, 3.0).is_err());
        assert!(PsiGen::constant(1.0, 3.0, 3.0).is_err());
        assert!(PsiGen::constant(-1.0, 1.5, 3.0).is_err());
    }

    #[test]
    fn divergent_gls_norm_is_infinite() {
        // x^{-1/4} is in L_p only for p < 4.
        let f = FunctionHandle::new("x^-1/4", Interval::unit(), |x: f64| x.powf(-0.25));
        let gen = PsiGen::constant(1.0, 1.5, 6.0).unwrap();
        let n = gls_norm(&f, &gen, Interval::unit()).unwrap();
        assert!(n.is_infinite(), "{n:?}");
    }

    #[test]
    fn luxemburg_examples() {
        let u = Interval::unit();
        let sq = OrliczGen::power(2.0).unwrap();
        assert_relative_eq!(luxemburg_norm(&one(1.0), &sq, u).unwrap().value, 2.0, max_relative = 1e-12);
        for p in [1.5, 2.0, 3.0] {
            let gen = OrliczGen::power(p).unwrap();
            let expected = p * (p - 1.0).powf(1.0 / p - 1.0);
            assert_relative_eq!(luxemburg_norm(&one(1.0), &gen, u).unwrap().value, expected, max_relative = 1e-10);
        }
        // constant n! on (0, Δ)
        let cube = OrliczGen::power(3.0).unwrap();
        let delta = 2.5;
        let iv = Interval::from_length(delta).unwrap();
        let h = PolynomialFunc::constant(2.0, iv);
        let lhs = luxemburg_norm(&h, &cube, iv).unwrap().value;
        let rhs = 2.0 * orlicz_fundamental(&cube, delta).unwrap().value;
        assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
    }

    #[test]
    fn orlicz_fundamental_examples() {
        let sq = OrliczGen::power(2.0).unwrap();
        assert_relative_eq!(orlicz_fundamental(&sq, 1.0).unwrap().value, 2.0, max_relative = 1e-12);
        assert_relative_eq!(orlicz_fundamental(&sq, 4.0).unwrap().value, 4.0, max_relative = 1e-12);
        for delta in [0.3, 1.0, 6.0] {
            let iv = Interval::from_length(delta).unwrap();
            let a = luxemburg_norm(&one(delta), &sq, iv).unwrap().value;
            let b = orlicz_fundamental(&sq, delta).unwrap().value;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn monotone_orlicz_functional() {
        // Φ(u) = u: the infimum |h|_1 is approached as v → ∞ and reached once 1/v underflows the sum.
        let lin = OrliczGen::power(1.0).unwrap();
        assert_relative_eq!(orlicz_fundamental(&lin, 3.0).unwrap().value, 3.0, max_relative = 1e-12);
        // Φ ≡ 0: v⁻¹ decreases forever.
        let flat = OrliczGen::custom("zero", |_| 0.0).unwrap();
        let r = orlicz_fundamental(&flat, 1.0);
        assert!(matches!(r, Err(Error::Optimization(_))), "{r:?}");
    }

    #[test]
    fn zygmund_generator() {
        let g0 = zygmund_orlicz_gen(2.5, 0.0, Some(E)).unwrap();
        assert_eq!(g0.eval(1.7), 1.7f64.powf(2.5));
        let g1 = zygmund_orlicz_gen(2.0, 1.0, Some(E)).unwrap();
        assert_relative_eq!(g1.eval(1.0), (E + 1.0).ln(), max_relative = 1e-15);
        assert!((g1.eval(1.0) - 1.3133).abs() < 1e-4);
        assert_eq!(g1.eval(0.0), 0.0);
        assert!(zygmund_orlicz_gen(1.0, 1.0, None).is_err());
        assert!(zygmund_orlicz_gen(2.0, 1.0, Some(1.0)).is_err());
        let neg = zygmund_orlicz_gen(3.0, -1.0, None).unwrap();
        assert_eq!(neg.eval(0.0), 0.0);
    }

    #[test]
    fn zygmund_fundamental_examples() {
        for delta in [0.01, 1.0, 50.0] {
            let v = zygmund_fundamental(2.0, 0.0, delta, FundamentalExponent::Positive).unwrap().value;
            assert_relative_eq!(v, delta.sqrt(), max_relative = 1e-15);
        }
        assert_eq!(zygmund_fundamental(3.0, 2.0, 1.0, FundamentalExponent::Positive).unwrap().value, 1.0);
        let v = zygmund_fundamental(2.0, 2.0, E, FundamentalExponent::Positive).unwrap().value;
        assert_relative_eq!(v, E.sqrt() * 2.0, max_relative = 1e-15);
        assert!((v - 3.2974).abs() < 1e-4);
        let printed = zygmund_fundamental(2.0, 2.0, E, FundamentalExponent::Negative).unwrap().value;
        assert_relative_eq!(printed, 2.0 / E.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn fundamental_dispatch() {
        assert_relative_eq!(fundamental(&SpaceSpec::Lebesgue(2.0), 9.0).unwrap().value, 3.0, max_relative = 1e-15);
        for p in [1.0, 3.0, 40.0] {
            assert_eq!(fundamental(&SpaceSpec::Lebesgue(p), 1.0).unwrap().value, 1.0);
        }
        let gls = SpaceSpec::GrandLebesgue(PsiGen::constant(1.0, 1.0, 2.0).unwrap());
        assert_relative_eq!(fundamental(&gls, 0.25).unwrap().value, 0.5, max_relative = 1e-8);
    }

    #[test]
    fn r_functional_examples() {
        for delta in [0.01, 1.0, 30.0] {
            let iv = Interval::from_length(delta).unwrap();
            for p in [1.0, 2.0, 7.5] {
                let r = r_functional(&one(delta), &SpaceSpec::Lebesgue(p), iv).unwrap().value;
                assert_relative_eq!(r, 1.0, max_relative = 1e-14);
            }
            let orlicz = SpaceSpec::Orlicz(OrliczGen::power(3.0).unwrap());
            let r = r_functional(&one(delta), &orlicz, iv).unwrap().value;
            assert_relative_eq!(r, 1.0, max_relative = 1e-6);
            // T_Δ g_{2,1}'' is the constant -2
            let h = PolynomialFunc::constant(-2.0, iv);
            let r = r_functional(&h, &orlicz, iv).unwrap().value;
            assert_relative_eq!(r, 2.0, max_relative = 1e-8);
        }
        let g = extremal_g(2, 1).unwrap();
        let r = r_functional(&g, &SpaceSpec::Lebesgue(2.0), Interval::unit()).unwrap().value;
        assert_relative_eq!(r, (1.0f64 / 30.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn zygmund_consistency_with_power() {
        let u = Interval::unit();
        for q in [1.5, 2.0, 3.0] {
            let z = SpaceSpec::zygmund(q, 0.0, None).unwrap();
            let v = norm(&one(1.0), &z, u).unwrap().value;
            assert_relative_eq!(v, q * (q - 1.0).powf(1.0 / q - 1.0), max_relative = 1e-8);
        }
    }

    #[test]
    fn lyapunov_and_sup_limit() {
        let u = Interval::unit();
        for (n, k) in [(2, 1), (3, 1), (4, 2), (4, 3)] {
            let g = extremal_g(n, k).unwrap();
            let sup = sup_norm(&g, u).value;
            let mut prev = 0.0;
            for p in [1.0, 1.5, 2.0, 4.0, 10.0, 50.0] {
                let v = lp_norm(&g, p, u).unwrap().value;
                assert!(v >= prev * (1.0 - 1e-12));
                prev = v;
            }
            let v400 = lp_norm(&g, 400.0, u).unwrap().value;
            assert!((sup - v400) / sup <= 0.02, "({n},{k}): {v400} vs {sup}");
        }
    }

    #[test]
    fn homogeneity() {
        let u = Interval::unit();
        let g = extremal_g(3, 1).unwrap();
        let c = -3.7;
        let cg = g.scale(c);
        for p in [1.0, 2.5, 6.0] {
            let a = lp_norm(&cg, p, u).unwrap().value;
            let b = lp_norm(&g, p, u).unwrap().value;
            assert_relative_eq!(a, c.abs() * b, max_relative = 1e-12);
        }
        let sq = OrliczGen::power(2.5).unwrap();
        let a = luxemburg_norm(&cg, &sq, u).unwrap().value;
        let b = luxemburg_norm(&g, &sq, u).unwrap().value;
        assert_relative_eq!(a, c.abs() * b, max_relative = 1e-9);
        let gen = PsiGen::constant(1.0, 1.5, 4.0).unwrap();
        let a = gls_norm(&cg, &gen, u).unwrap().value;
        let b = gls_norm(&g, &gen, u).unwrap().value;
        assert_relative_eq!(a, c.abs() * b, max_relative = 1e-10);
    }
}
