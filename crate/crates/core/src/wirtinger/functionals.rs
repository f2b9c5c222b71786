//! Two-space Wirtinger functionals on dilated prototypes.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::function::{Interval, PolynomialFunc, RealFunction};
use crate::norms::{
    fundamental, norm, norm_weighted, zygmund_fundamental, FundamentalExponent, NormValue, PsiGen, SpaceSpec,
    ZygmundSpace,
};

/// `T_Δ f` on `(0, Δ)` together with `Δ^n (T_Δ f)^(n)`.
pub(super) struct Dilated {
    pub f: PolynomialFunc,
    pub dn: PolynomialFunc,
    pub iv: Interval,
}

pub(super) fn dilated(proto: &PolynomialFunc, n: usize, delta: f64) -> Result<Dilated> {
    let f = proto.dilate(delta)?;
    let dn = f.derivative(n).scale(delta.powi(n as i32));
    let iv = f.domain();
    Ok(Dilated { f, dn, iv })
}

fn quotient(top: f64, bottom: f64) -> Result<f64> {
    if bottom == 0.0 {
        return Err(Error::DivisionByZero("n-th derivative norm"));
    }
    Ok(top / bottom)
}

fn nonzero(phi: NormValue, what: &'static str) -> Result<f64> {
    if phi.value == 0.0 {
        Err(Error::DivisionByZero(what))
    } else {
        Ok(phi.value)
    }
}

/// `R(T_Δ f; X, Δ) / R(Δ^n (T_Δ f)^(n); Y, Δ)` for one prototype.
pub(super) fn w_quotient(x: &SpaceSpec, y: &SpaceSpec, proto: &PolynomialFunc, n: usize, delta: f64) -> Result<f64> {
    let d = dilated(proto, n, delta)?;
    let len = d.iv.len();
    let rx = norm(&d.f, x, d.iv)?.value / nonzero(fundamental(x, len)?, "fundamental function of X")?;
    let ry = norm(&d.dn, y, d.iv)?.value / nonzero(fundamental(y, len)?, "fundamental function of Y")?;
    quotient(rx, ry)
}

fn family_sup<F>(family: &[PolynomialFunc], eval: F) -> Result<f64>
where
    F: Fn(&PolynomialFunc) -> Result<f64> + Sync + Send,
{
    if family.is_empty() {
        return Err(domain("trial family is empty"));
    }
    let values: Vec<Result<f64>> = family.par_iter().map(eval).collect();
    let mut best = f64::NEG_INFINITY;
    for v in values {
        let v = v?;
        if v > best || v.is_nan() {
            best = v;
        }
    }
    Ok(best)
}

/// `sup_f [R(f; X, Δ) : Δ^n R(f^(n); Y, Δ)]` over the family dilated to `(0, Δ)`.
pub fn w_functional(x: &SpaceSpec, y: &SpaceSpec, n: usize, delta: f64, family: &[PolynomialFunc]) -> Result<f64> {
    family_sup(family, |f| w_quotient(x, y, f, n, delta))
}

/// `sup_f ||f||_(Δ)X / (Δ^n ||f^(n)||_(Δ)Y)` with norms taken against the
/// normalized measure `dx/Δ`.
pub fn w_functional_normalized(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n: usize,
    delta: f64,
    family: &[PolynomialFunc],
) -> Result<f64> {
    family_sup(family, |proto| {
        let d = dilated(proto, n, delta)?;
        let w = 1.0 / d.iv.len();
        quotient(norm_weighted(&d.f, x, d.iv, w)?.value, norm_weighted(&d.dn, y, d.iv, w)?.value)
    })
}

/// `V_Δ(f; G(ν), G(ψ))` for one prototype.
pub fn v_delta(proto: &PolynomialFunc, nu: &PsiGen, psi: &PsiGen, n: usize, delta: f64) -> Result<f64> {
    let x = SpaceSpec::GrandLebesgue(nu.clone());
    let y = SpaceSpec::GrandLebesgue(psi.clone());
    w_quotient(&x, &y, proto, n, delta)
}

/// `r₀ = q + γ/(q(1+|ln Δ|))` and `s₀ = p - β/(p(1+|ln Δ|))`, with
/// `r₀ ∈ [q, q+1)` and `s₀ ∈ (0.5(1+p), p]` enforced.
pub fn zygmund_params(p: f64, q: f64, gamma: f64, beta: f64, delta: f64) -> Result<(f64, f64)> {
    if !(p > 1.0 && p.is_finite()) || !(q > 1.0 && q.is_finite()) {
        return Err(domain(format!("need finite p > 1 and q > 1, got p = {p}, q = {q}")));
    }
    if !(gamma >= 0.0 && beta >= 0.0) {
        return Err(domain(format!("need gamma >= 0 and beta >= 0, got {gamma}, {beta}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain(format!("need a positive finite length, got {delta}")));
    }
    let l = 1.0 + delta.ln().abs();
    let r0 = q + gamma / (q * l);
    let s0 = p - beta / (p * l);
    if !(r0 >= q && r0 < q + 1.0) {
        return Err(Error::Range(format!("r0 = {r0} leaves [{q}, {})", q + 1.0)));
    }
    if !(s0 > 0.5 * (1.0 + p) && s0 <= p) {
        return Err(Error::Range(format!("s0 = {s0} leaves ({}, {p}]", 0.5 * (1.0 + p))));
    }
    Ok((r0, s0))
}

fn zygmund_r(z: &ZygmundSpace, h: &PolynomialFunc, iv: Interval, exponent: FundamentalExponent) -> Result<f64> {
    let nv = crate::norms::luxemburg_norm(h, &z.gen, iv)?.value;
    let phi = zygmund_fundamental(z.q, z.gamma, iv.len(), exponent)?;
    Ok(nv / nonzero(phi, "Zygmund fundamental function")?)
}

/// `W°(Δ)` with `X = L_q (Log)^γ L`, `Y = L_p (Log)^{-β} L` and an explicit
/// fundamental-function exponent convention.
#[allow(clippy::too_many_arguments)]
pub fn zygmund_wo_at(
    p: f64,
    q: f64,
    gamma: f64,
    beta: f64,
    n: usize,
    delta: f64,
    family: &[PolynomialFunc],
    exponent: FundamentalExponent,
) -> Result<f64> {
    if !(gamma >= 0.0 && beta >= 0.0) {
        return Err(domain(format!("need gamma >= 0 and beta >= 0, got {gamma}, {beta}")));
    }
    let x = ZygmundSpace::new(q, gamma, None)?;
    let y = ZygmundSpace::new(p, -beta, None)?;
    family_sup(family, |proto| {
        let d = dilated(proto, n, delta)?;
        quotient(zygmund_r(&x, &d.f, d.iv, exponent)?, zygmund_r(&y, &d.dn, d.iv, exponent)?)
    })
}

/// `W°(Δ; p, q; n, k)` with the increasing fundamental function `Δ^{1/q}(1+|ln Δ|)^{γ/q}`.
pub fn zygmund_wo(
    p: f64,
    q: f64,
    gamma: f64,
    beta: f64,
    n: usize,
    delta: f64,
    family: &[PolynomialFunc],
) -> Result<f64> {
    zygmund_wo_at(p, q, gamma, beta, n, delta, family, FundamentalExponent::Positive)
}
