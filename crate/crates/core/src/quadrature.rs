//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|value|)`. Nodes are interior, so
//! integrable endpoint singularities are never sampled directly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::{Interval, RealFunction};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on the number of bisections, independent of depth.
const MAX_SUBDIVISIONS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-9, max_depth: 60 }
    }
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self, QuadError> {
        let cfg = Self { abs_tol, rel_tol, max_depth };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), QuadError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(QuadError::Config(format!(
                "tolerances must be strictly positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge: best estimate {} ± {}", .best.value, .best.error_estimate)]
    NonConvergence { best: QuadResult },
    #[error("integrand returned NaN at x = {x}")]
    NotANumber { x: f64 },
    #[error("integrand is infinite at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid quadrature configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadError> {
    let v = f(x);
    if v.is_nan() {
        Err(QuadError::NotANumber { x })
    } else if v.is_infinite() {
        Err(QuadError::NonFinite { x })
    } else {
        Ok(v)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// One G7/K15 panel: `(kronrod value, error estimate)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let abs_half = half.abs();
    Ok((res_k * half, rescale_error(err, res_abs * abs_half, res_asc * abs_half)))
}

/// Integrates `f` over `iv`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, iv: Interval, cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    integrate_split(f, iv, &[], cfg)
}

/// Integrates `f` over `iv`, starting from panels split at `breakpoints`
/// (points outside `iv` are ignored).
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    iv: Interval,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > iv.a() && x < iv.b()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 4.0 * f64::EPSILON * iv.len());
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(iv.a());
    edges.extend(cuts);
    edges.push(iv.b());

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk15(&f, w[0], w[1])?;
        heap.push(Segment { a: w[0], b: w[1], value, error, depth: 0 });
    }

    let mut subdivisions = 0;
    loop {
        let (total, err) = heap.iter().chain(frozen.iter()).fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, error_estimate: err, subdivisions });
        }
        let best = QuadResult { value: total, error_estimate: err, subdivisions };
        let Some(seg) = heap.pop() else {
            return Err(QuadError::NonConvergence { best });
        };
        let mid = 0.5 * (seg.a + seg.b);
        if seg.depth >= cfg.max_depth || mid <= seg.a || mid >= seg.b {
            frozen.push(seg);
            continue;
        }
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(QuadError::NonConvergence { best });
        }
        let (v1, e1) = gk15(&f, seg.a, mid)?;
        let (v2, e2) = gk15(&f, mid, seg.b)?;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1, depth: seg.depth + 1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2, depth: seg.depth + 1 });
        subdivisions += 1;
    }
}

/// Integrates `transform(g(x))` over `iv`, clipped to the support of `g` when
/// `g` vanishes outside an interval, and pre-split at the breakpoints of `g`.
/// `transform(0)` must be zero when clipping applies.
pub fn integrate_composed<G, T>(g: &G, transform: T, iv: Interval, cfg: &QuadConfig) -> Result<QuadResult, QuadError>
where
    G: RealFunction + ?Sized,
    T: Fn(f64) -> f64,
{
    let region = match g.vanishes_outside() {
        Some(support) => match support.intersect(&iv) {
            Some(r) => r,
            None => return Ok(QuadResult { value: 0.0, error_estimate: 0.0, subdivisions: 0 }),
        },
        None => iv,
    };
    if let Some(c) = g.as_constant() {
        let v = checked(&|_| transform(c), region.a())?;
        return Ok(QuadResult { value: v * region.len(), error_estimate: 0.0, subdivisions: 0 });
    }
    let breaks = g.breakpoints(region);
    integrate_split(|x| transform(g.eval(x)), region, &breaks, cfg)
}
