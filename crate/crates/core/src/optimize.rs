//! Scalar optimization: grid scans and golden-section refinement.
//!
//! Every routine takes a fallible objective so quadrature failures inside a
//! norm evaluation surface to the caller instead of being swallowed.

/// `(√5 - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub arg: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `n` points spanning `[lo, hi]` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    match spacing {
        Spacing::Linear => {
            (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
        }
        Spacing::Log => {
            let (l, h) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (l + (h - l) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Golden-section search for a minimum of a unimodal objective on `[a, b]`.
pub fn golden_section_min<F, E>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Extremum, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            if c >= d {
                break;
            }
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            if d <= c {
                break;
            }
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { Extremum { arg: c, value: fc } } else { Extremum { arg: d, value: fd } })
}

pub fn golden_section_max<F, E>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Extremum, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let e = golden_section_min(|x| f(x).map(|v| -v), a, b, tol)?;
    Ok(Extremum { arg: e.arg, value: -e.value })
}

/// Which extremum a scan looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Min,
    Max,
}

impl Goal {
    fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Goal::Min => candidate < incumbent,
            Goal::Max => candidate > incumbent,
        }
    }
}

/// Outcome of [`scan_and_refine`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub best: Extremum,
    /// Index of the winning grid node before refinement.
    pub grid_index: usize,
    /// Every grid value, in grid order.
    pub samples: Vec<f64>,
}

/// Scans `points` (first node attaining the extremum wins), then refines by
/// golden section on the bracket formed by the neighbours of the winner.
/// The refined value replaces the grid value only when it is strictly better.
pub fn scan_and_refine<F, E>(mut f: F, points: &[f64], goal: Goal, rel_tol: f64) -> Result<ScanResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    assert!(!points.is_empty(), "scan needs at least one point");
    let mut samples = Vec::with_capacity(points.len());
    let mut best_i = 0;
    for (i, &x) in points.iter().enumerate() {
        let v = f(x)?;
        if i == 0 || goal.better(v, samples[best_i]) || samples[best_i].is_nan() {
            best_i = i;
        }
        samples.push(v);
    }
    let mut best = Extremum { arg: points[best_i], value: samples[best_i] };
    if points.len() >= 2 && best.value.is_finite() {
        let lo = points[best_i.saturating_sub(1)];
        let hi = points[(best_i + 1).min(points.len() - 1)];
        let tol = rel_tol * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let refined = match goal {
            Goal::Min => golden_section_min(&mut f, lo, hi, tol)?,
            Goal::Max => golden_section_max(&mut f, lo, hi, tol)?,
        };
        if goal.better(refined.value, best.value) {
            best = refined;
        }
    }
    Ok(ScanResult { best, grid_index: best_i, samples })
}
