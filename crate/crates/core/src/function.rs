//! Function representations used throughout the crate.
//!
//! Polynomials carry exact coefficient calculus (differentiation, dilation,
//! products) and can be extended by zero outside their interval, which is how
//! the zero class `Z(n,k)` prototypes on `[0, 1]` are continued to the half
//! line. Generic, non-polynomial inputs such as `sin` travel as a
//! [`FunctionHandle`] with an explicit derivative chain.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::optimize;

/// Grid resolution used to bracket sign changes of a polynomial.
pub const ROOT_GRID: usize = 1024;
/// Grid resolution used by sampled supremum searches.
pub const SUP_GRID: usize = 4096;

const STRIP_REL: f64 = 1e-14;

/// A bounded open interval `(a, b)` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(domain(format!("interval endpoints must be finite, got ({a}, {b})")));
        }
        if a >= b {
            return Err(domain(format!("interval requires a < b, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    /// The unit interval `(0, 1)`.
    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    /// `(0, delta)`.
    pub fn from_length(delta: f64) -> Result<Self> {
        Self::new(0.0, delta)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `Δ = b - a`.
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let a = self.a.max(other.a);
        let b = self.b.min(other.b);
        (a < b).then_some(Interval { a, b })
    }

    /// Image of the interval under `x ↦ θx`.
    pub fn scaled(&self, theta: f64) -> Interval {
        Interval { a: self.a * theta, b: self.b * theta }
    }

    /// `n + 1` equally spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let h = self.len() / n as f64;
        (0..=n).map(move |i| if i == n { self.b } else { self.a + h * i as f64 })
    }
}

/// Anything that can be evaluated on the real line and integrated by the
/// quadrature engine.
pub trait RealFunction: Send + Sync {
    fn eval(&self, x: f64) -> f64;

    fn domain(&self) -> Interval;

    /// `Some(support)` when the function is identically zero outside `support`.
    fn vanishes_outside(&self) -> Option<Interval> {
        None
    }

    /// Points of `iv` where `|f|` may have a kink. The quadrature engine
    /// splits the integration interval there.
    fn breakpoints(&self, _iv: Interval) -> Vec<f64> {
        Vec::new()
    }

    /// `Some(c)` when the function equals `c` everywhere on its support.
    fn as_constant(&self) -> Option<f64> {
        None
    }

    /// `sup |f|` over `iv`.
    fn sup_abs(&self, iv: Interval) -> f64 {
        sampled_sup_abs(|x| self.eval(x), iv)
    }
}

/// Dense sampling followed by golden-section refinement around the best sample.
pub(crate) fn sampled_sup_abs<F: Fn(f64) -> f64>(f: F, iv: Interval) -> f64 {
    let h = iv.len() / SUP_GRID as f64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, x) in iv.grid(SUP_GRID).enumerate() {
        let v = f(x).abs();
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let x0 = iv.a() + h * best_i as f64;
    let lo = (x0 - h).max(iv.a());
    let hi = (x0 + h).min(iv.b());
    let refined = optimize::golden_section_max(
        |x| Ok::<_, std::convert::Infallible>(f(x).abs()),
        lo,
        hi,
        1e-13 * iv.len().max(1e-300),
    )
    .map(|e| e.value)
    .unwrap_or(best);
    best.max(refined)
}

/// Exact-coefficient polynomial on an interval, stored in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFunc {
    coeffs: Vec<f64>,
    domain: Interval,
    extended_by_zero: bool,
}

impl PolynomialFunc {
    pub fn new(coeffs: Vec<f64>, domain: Interval) -> Self {
        let mut p = Self { coeffs, domain, extended_by_zero: false };
        p.strip();
        p
    }

    pub fn constant(c: f64, domain: Interval) -> Self {
        Self::new(vec![c], domain)
    }

    /// The monomial `x^m`.
    pub fn monomial(m: usize, domain: Interval) -> Self {
        let mut coeffs = vec![0.0; m + 1];
        coeffs[m] = 1.0;
        Self::new(coeffs, domain)
    }

    /// Same polynomial, evaluating to zero outside its domain.
    pub fn extended_by_zero(mut self) -> Self {
        self.extended_by_zero = true;
        self
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self.strip();
        self
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_extended_by_zero(&self) -> bool {
        self.extended_by_zero
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    // Drops trailing coefficients that are negligible on the domain: |c_i| R^i
    // against the largest such term, R = max(|a|, |b|).
    fn strip(&mut self) {
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
            return;
        }
        let r = self.domain.a().abs().max(self.domain.b().abs());
        let mut terms: Vec<f64> = Vec::with_capacity(self.coeffs.len());
        let mut rp = 1.0;
        for &c in &self.coeffs {
            terms.push(c.abs() * rp);
            rp *= r;
        }
        let scale = terms.iter().cloned().fold(0.0, f64::max);
        while self.coeffs.len() > 1 {
            let last = self.coeffs.len() - 1;
            let negligible = self.coeffs[last] == 0.0 || (scale.is_finite() && terms[last] <= STRIP_REL * scale);
            if !negligible {
                break;
            }
            self.coeffs.pop();
        }
    }

    /// Horner evaluation ignoring the zero extension.
    pub fn eval_raw(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Exact `order`-fold derivative.
    pub fn derivative(&self, order: usize) -> PolynomialFunc {
        if order == 0 {
            return self.clone();
        }
        if order > self.degree() {
            return PolynomialFunc { coeffs: vec![0.0], domain: self.domain, extended_by_zero: self.extended_by_zero };
        }
        let coeffs = (order..self.coeffs.len())
            .map(|i| {
                let falling: f64 = ((i + 1 - order)..=i).map(|j| j as f64).product();
                self.coeffs[i] * falling
            })
            .collect();
        PolynomialFunc { coeffs, domain: self.domain, extended_by_zero: self.extended_by_zero }
    }

    /// `x ↦ f(x/θ)` on the domain scaled by `θ`.
    pub fn dilate(&self, theta: f64) -> Result<PolynomialFunc> {
        check_theta(theta)?;
        let inv = 1.0 / theta;
        let mut s = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * s;
                s *= inv;
                v
            })
            .collect();
        Ok(PolynomialFunc { coeffs, domain: self.domain.scaled(theta), extended_by_zero: self.extended_by_zero })
    }

    pub fn scale(&self, c: f64) -> PolynomialFunc {
        PolynomialFunc::new(self.coeffs.iter().map(|&x| x * c).collect(), self.domain).extension_from(self)
    }

    fn extension_from(mut self, other: &PolynomialFunc) -> Self {
        self.extended_by_zero = other.extended_by_zero;
        self
    }

    /// Polynomial product; the domain and extension flag of `self` are kept.
    pub fn product(&self, other: &PolynomialFunc) -> PolynomialFunc {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolynomialFunc::new(coeffs, self.domain).extension_from(self)
    }

    /// Real roots inside `iv`, located by sign changes on a uniform grid
    /// followed by bisection. Exact zeros at grid nodes are reported as-is.
    pub fn real_roots(&self, iv: Interval) -> Vec<f64> {
        sign_change_roots(|x| self.eval_raw(x), iv, ROOT_GRID)
    }

    /// Stationary points inside `iv`.
    pub fn critical_points(&self, iv: Interval) -> Vec<f64> {
        if self.degree() < 2 {
            return Vec::new();
        }
        let d = self.derivative(1);
        sign_change_roots(|x| d.eval_raw(x), iv, SUP_GRID)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("dilation factor must be positive and finite, got {theta}")))
    }
}

fn sign_change_roots<F: Fn(f64) -> f64>(f: F, iv: Interval, grid: usize) -> Vec<f64> {
    let xs: Vec<f64> = iv.grid(grid).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if ys[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && ys[i + 1] != 0.0 && ys[i].signum() != ys[i + 1].signum() {
            roots.push(bisect(&f, xs[i], xs[i + 1], ys[i]));
        }
    }
    roots
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let s_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl RealFunction for PolynomialFunc {
    fn eval(&self, x: f64) -> f64 {
        if self.extended_by_zero && !self.domain.contains(x) {
            0.0
        } else {
            self.eval_raw(x)
        }
    }

    fn domain(&self) -> Interval {
        self.domain
    }

    fn vanishes_outside(&self) -> Option<Interval> {
        self.extended_by_zero.then_some(self.domain)
    }

    fn breakpoints(&self, iv: Interval) -> Vec<f64> {
        if self.degree() == 0 {
            return Vec::new();
        }
        self.real_roots(iv)
    }

    fn as_constant(&self) -> Option<f64> {
        (self.degree() == 0).then(|| self.coeffs[0])
    }

    fn sup_abs(&self, iv: Interval) -> f64 {
        let Some(inner) = (match self.vanishes_outside() {
            Some(s) => s.intersect(&iv),
            None => Some(iv),
        }) else {
            return 0.0;
        };
        let mut best = self.eval_raw(inner.a()).abs().max(self.eval_raw(inner.b()).abs());
        for x in self.critical_points(inner) {
            best = best.max(self.eval_raw(x).abs());
        }
        best
    }
}

impl Add for &PolynomialFunc {
    type Output = PolynomialFunc;

    fn add(self, rhs: &PolynomialFunc) -> PolynomialFunc {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0.0) + rhs.coeffs.get(i).copied().unwrap_or(0.0))
            .collect();
        PolynomialFunc::new(coeffs, self.domain).extension_from(self)
    }
}

impl Sub for &PolynomialFunc {
    type Output = PolynomialFunc;

    fn sub(self, rhs: &PolynomialFunc) -> PolynomialFunc {
        self + &(-rhs)
    }
}

impl Neg for &PolynomialFunc {
    type Output = PolynomialFunc;

    fn neg(self) -> PolynomialFunc {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &PolynomialFunc {
    type Output = PolynomialFunc;

    fn mul(self, c: f64) -> PolynomialFunc {
        self.scale(c)
    }
}

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A generic function with an optional chain of derivatives
/// (`derivatives[i]` is the `(i+1)`-th derivative).
#[derive(Clone)]
pub struct FunctionHandle {
    evaluator: Evaluator,
    derivatives: Vec<Evaluator>,
    domain: Interval,
    label: String,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("derivatives", &self.derivatives.len())
            .finish()
    }
}

impl FunctionHandle {
    pub fn new<F>(label: impl Into<String>, domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { evaluator: Arc::new(f), derivatives: Vec::new(), domain, label: label.into() }
    }

    pub fn with_derivatives(mut self, chain: Vec<Evaluator>) -> Self {
        self.derivatives = chain;
        self
    }

    /// `x ↦ sin(ω x)` with its first four derivatives.
    pub fn sin(omega: f64, domain: Interval) -> Self {
        let chain: Vec<Evaluator> = (1..=4)
            .map(|order: i32| {
                let amp = omega.powi(order);
                let e: Evaluator = match order % 4 {
                    1 => Arc::new(move |x: f64| amp * (omega * x).cos()),
                    2 => Arc::new(move |x: f64| -amp * (omega * x).sin()),
                    3 => Arc::new(move |x: f64| -amp * (omega * x).cos()),
                    _ => Arc::new(move |x: f64| amp * (omega * x).sin()),
                };
                e
            })
            .collect();
        Self::new(format!("sin({omega}x)"), domain, move |x| (omega * x).sin()).with_derivatives(chain)
    }

    /// Wraps a polynomial together with its first `orders` exact derivatives.
    pub fn from_polynomial(p: &PolynomialFunc, orders: usize) -> Self {
        let wrap = |q: PolynomialFunc| -> Evaluator { Arc::new(move |x| q.eval(x)) };
        let chain = (1..=orders).map(|j| wrap(p.derivative(j))).collect();
        Self {
            evaluator: wrap(p.clone()),
            derivatives: chain,
            domain: p.domain(),
            label: format!("poly{:?}", p.coeffs()),
        }
    }

    /// Identity `x ↦ x`.
    pub fn identity(domain: Interval) -> Self {
        Self::new("x", domain, |x| x).with_derivatives(vec![Arc::new(|_| 1.0), Arc::new(|_| 0.0)])
    }

    pub fn zero(domain: Interval) -> Self {
        Self::new("0", domain, |_| 0.0).with_derivatives(vec![Arc::new(|_| 0.0), Arc::new(|_| 0.0)])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn derivative_count(&self) -> usize {
        self.derivatives.len()
    }

    /// The `order`-th derivative, if the chain supplies it.
    pub fn derivative(&self, order: usize) -> Option<FunctionHandle> {
        if order == 0 {
            return Some(self.clone());
        }
        let evaluator = self.derivatives.get(order - 1)?.clone();
        Some(FunctionHandle {
            evaluator,
            derivatives: self.derivatives[order..].to_vec(),
            domain: self.domain,
            label: format!("d^{order}[{}]", self.label),
        })
    }

    /// `x ↦ f(x/θ)`; the `j`-th derivative picks up `θ^{-j}`.
    pub fn dilate(&self, theta: f64) -> Result<FunctionHandle> {
        check_theta(theta)?;
        let inv = 1.0 / theta;
        let wrap = |e: &Evaluator, factor: f64| -> Evaluator {
            let e = e.clone();
            Arc::new(move |x| factor * e(x * inv))
        };
        Ok(FunctionHandle {
            evaluator: wrap(&self.evaluator, 1.0),
            derivatives: self.derivatives.iter().enumerate().map(|(j, d)| wrap(d, inv.powi(j as i32 + 1))).collect(),
            domain: self.domain.scaled(theta),
            label: format!("{}∘(x/{theta})", self.label),
        })
    }
}

impl RealFunction for FunctionHandle {
    fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    fn domain(&self) -> Interval {
        self.domain
    }

    fn breakpoints(&self, iv: Interval) -> Vec<f64> {
        sign_change_roots(|x| (self.evaluator)(x), iv, ROOT_GRID)
    }
}

/// Derivative order `n` and left zero multiplicity `k` of the class `Z(n,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroClassSpec {
    n: usize,
    k: usize,
}

impl ZeroClassSpec {
    /// Accepts `n ≥ 2` and `0 ≤ k ≤ n`; empty derivative lists are vacuous.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("zero class needs n >= 2, got n = {n}")));
        }
        if k > n {
            return Err(domain(format!("zero class needs k <= n, got (n, k) = ({n}, {k})")));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// `true` iff `|f^(i)(a)| ≤ tol` for `i < k` and `|f^(j)(b)| ≤ tol` for `j < n - k`.
pub fn zero_class_check(f: &PolynomialFunc, spec: ZeroClassSpec, tol: f64) -> bool {
    let (a, b) = (f.domain().a(), f.domain().b());
    let left = (0..spec.k).all(|i| f.derivative(i).eval_raw(a).abs() <= tol);
    let right = (0..spec.n - spec.k).all(|j| f.derivative(j).eval_raw(b).abs() <= tol);
    left && right
}

/// Scale-aware variant of [`zero_class_check`]: each endpoint value is
/// compared against `tol` times the absolute sum of the terms it was
/// evaluated from, so dilated or rescaled members still pass.
pub fn zero_class_check_relative(f: &PolynomialFunc, spec: ZeroClassSpec, tol: f64) -> bool {
    let within = |p: &PolynomialFunc, x: f64| {
        let mut mag = 0.0;
        let mut xp = 1.0;
        for &c in p.coeffs() {
            mag += (c * xp).abs();
            xp *= x.abs();
        }
        p.eval_raw(x).abs() <= tol * mag.max(f64::MIN_POSITIVE)
    };
    let (a, b) = (f.domain().a(), f.domain().b());
    (0..spec.k).all(|i| within(&f.derivative(i), a)) && (0..spec.n - spec.k).all(|j| within(&f.derivative(j), b))
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// `g_{n,k}(x) = x^k (1-x)^{n-k}` on `[0, 1]`, zero for `x > 1`.
pub fn extremal_g(n: usize, k: usize) -> Result<PolynomialFunc> {
    if n == 0 || k > n {
        return Err(domain(format!("extremal family needs 0 <= k <= n and n >= 1, got (n, k) = ({n}, {k})")));
    }
    let mut coeffs = vec![0.0; n + 1];
    let m = n - k;
    for j in 0..=m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[k + j] = sign * binomial(m, j);
    }
    Ok(PolynomialFunc::new(coeffs, Interval::unit()).extended_by_zero())
}
