//! Benchmark fixtures shared by the criterion targets.

use wirtinger_core::{extremal_g, PolynomialFunc, PsiGen};

/// `g_{n,k}` prototypes used across benchmarks.
pub fn extremal_family() -> Vec<PolynomialFunc> {
    [(2, 1), (3, 1), (4, 2), (6, 3)].iter().map(|&(n, k)| extremal_g(n, k).expect("valid (n, k)")).collect()
}

/// `ψ ≡ 1` on `(1.5, 3)`.
pub fn flat_psi() -> PsiGen {
    PsiGen::constant(1.0, 1.5, 3.0).expect("valid generator")
}
