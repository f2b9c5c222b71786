//! Acceptance criteria 1-12. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; the process fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use statrs::function::beta::ln_beta;
use wirtinger_core::constants::brink_K;
use wirtinger_core::norms::{lp_norm, luxemburg_norm, orlicz_fundamental, sup_norm};
use wirtinger_core::wirtinger::{
    beesack_check, brink_ratio, classical_wirtinger_check, default_delta_grid, default_pq_grid, estimate_ank,
    natural_psi, nu_from_psi, orlicz_wbar, theorem31_check, theorem51_check, v0_lower_check, verify_thm71,
    w_functional,
};
use wirtinger_core::{extremal_g, FunctionHandle, Interval, OrliczGen, PolynomialFunc, PsiGen, SpaceSpec, TrialFamily};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn pow0(x: f64, e: f64) -> f64 {
    if x == 0.0 && e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn flat(a: f64, b: f64) -> PsiGen {
    PsiGen::constant(1.0, a, b).expect("valid generator")
}

fn c1_constant_oracle() -> Result<(), String> {
    let k = ok(brink_K(2.0, 2.0))?.value;
    ensure((k - 1.0 / PI).abs() <= 1e-10, || format!("K(2,2) = {k}, 1/pi = {}", 1.0 / PI))
}

fn c2_sharpness_anchors() -> Result<(), String> {
    let w = ok(classical_wirtinger_check(&FunctionHandle::sin(2.0 * PI, Interval::unit()), Interval::unit()))?;
    ensure((w.margin - 1.0).abs() <= 1e-6 && w.satisfied, || format!("wirtinger margin {}", w.margin))?;
    let half = ok(Interval::new(0.0, FRAC_PI_2))?;
    let b = ok(beesack_check(&FunctionHandle::sin(1.0, half), 2.0))?;
    ensure((b.margin - 1.0).abs() <= 1e-6 && b.satisfied, || format!("beesack margin {}", b.margin))
}

fn c3_quadrature_oracle() -> Result<(), String> {
    for n in 1..=4usize {
        for k in 0..=n {
            let g = ok(extremal_g(n, k))?;
            for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
                let got = ok(lp_norm(&g, p, Interval::unit()))?.value;
                let want = (ln_beta(k as f64 * p + 1.0, (n - k) as f64 * p + 1.0) / p).exp();
                ensure(rel(got, want) <= 1e-9, || format!("n={n} k={k} p={p}: {got} vs {want}"))?;
            }
        }
    }
    Ok(())
}

fn c4_extrema_oracle() -> Result<(), String> {
    for n in 1..=6usize {
        for k in 0..=n {
            let (nf, kf) = (n as f64, k as f64);
            let want = pow0(kf, kf) * pow0(nf - kf, nf - kf) / nf.powf(nf);
            let got = sup_norm(&ok(extremal_g(n, k))?, Interval::unit()).value;
            ensure((got - want).abs() <= 1e-12, || format!("n={n} k={k}: {got} vs {want}"))?;
        }
    }
    Ok(())
}

fn c5_gls_lower_bound() -> Result<(), String> {
    let psi = flat(1.5, 3.0);
    for (n, k) in [(2usize, 1usize), (3, 1), (3, 2)] {
        let (nf, kf) = (n as f64, k as f64);
        let bound = pow0(kf, kf) * pow0(nf - kf, nf - kf) / (factorial(n) * (nf + 1.0).powf(nf + 1.0));
        let r = ok(v0_lower_check(&psi, &psi, n, k, &default_delta_grid()))?;
        ensure(rel(r.bound, bound) <= 1e-14, || format!("({n},{k}) bound {} vs {bound}", r.bound))?;
        ensure(r.observed >= bound && r.margin >= 1.0 && r.satisfied, || format!("({n},{k}): {r:?}"))?;
    }
    Ok(())
}

fn c6_orlicz_lower_bound() -> Result<(), String> {
    let phi = ok(OrliczGen::power(2.0))?;
    let grid = default_delta_grid();
    let r = ok(orlicz_wbar(&phi, &phi, 2, 1, &grid))?;
    ensure(rel(r.bound, 1.0 / 18.0) <= 1e-14, || format!("bound {}", r.bound))?;
    ensure(r.satisfied && r.margin >= 1.0, || format!("{r:?}"))?;
    let g2 = ok(extremal_g(2, 1))?.derivative(2);
    for &d in &grid {
        let iv = ok(Interval::from_length(d))?;
        let r = ok(luxemburg_norm(&ok(g2.dilate(d))?, &phi, iv))?.value / ok(orlicz_fundamental(&phi, d))?.value;
        ensure((r - 2.0).abs() <= 1e-8, || format!("delta={d}: R = {r}, expected 2"))?;
    }
    Ok(())
}

fn c7_luxemburg_closed_form() -> Result<(), String> {
    let one = PolynomialFunc::constant(1.0, Interval::unit());
    for p in [1.5, 2.0, 3.0] {
        let gen = ok(OrliczGen::power(p))?;
        let want = p * (p - 1.0).powf(1.0 / p - 1.0);
        let got = ok(luxemburg_norm(&one, &gen, Interval::unit()))?.value;
        ensure((got - want).abs() <= 1e-8, || format!("p={p}: {got} vs {want}"))?;
        let fund = ok(orlicz_fundamental(&gen, 1.0))?.value;
        ensure(fund == got, || format!("p={p}: fundamental {fund} != norm {got}"))?;
    }
    Ok(())
}

fn c8_w_sweep() -> Result<(), String> {
    let family = TrialFamily::extremal(2, 1);
    let grid = default_delta_grid();
    ensure(grid.len() == 25 && grid[0] == 1e-3 && grid[24] == 1e3, || format!("grid {grid:?}"))?;
    let pq = default_pq_grid();
    let cap = ok(estimate_ank(&family, &pq, &pq))?.observed;
    for (p, q) in [(2.0, 2.0), (3.0, 2.0), (1.5, 4.0), (f64::INFINITY, 1.0)] {
        let (x, y) = (SpaceSpec::Lebesgue(p), SpaceSpec::Lebesgue(q));
        let r = ok(theorem31_check(&x, &y, &family, &grid, f64::INFINITY))?;
        let spread = r.parameters["spread"];
        ensure(spread <= 1.0 + 1e-3, || format!("L_{p}/L_{q}: spread {spread}"))?;
    }
    let x = SpaceSpec::GrandLebesgue(flat(1.5, 4.0));
    let r = ok(theorem31_check(&x, &SpaceSpec::Lebesgue(2.0), &family, &grid, cap))?;
    ensure(r.satisfied && r.observed < cap, || format!("GLS pair {} vs cap {cap}", r.observed))
}

fn c9_zygmund_boundedness() -> Result<(), String> {
    let r = ok(theorem51_check(3.0, 2.0, 1.0, 1.0, &TrialFamily::extremal(2, 1)))?;
    ensure(r.satisfied, || format!("{r:?}"))?;
    let fitted = r.parameters["fitted_constant"];
    ensure(r.observed <= 1.05 * fitted, || format!("max {} exceeds 1.05 x {fitted}", r.observed))
}

fn c10_gls_sobolev_bound() -> Result<(), String> {
    let g = ok(extremal_g(2, 1))?;
    let grid = [1.5, 2.0, 2.5, 3.0];
    let psi = flat(1.5, 3.0);
    for &p in &grid {
        let r = ok(verify_thm71(&g, &psi, &[p]))?;
        ensure(r.satisfied, || format!("flat psi, p={p}: {r:?}"))?;
    }
    // Natural choice: psi(q) = |f'|_q = (q+1)^(-1/q) for f' = 1 - 2x.
    let natural = ok(natural_psi(&g, 1.5, 3.0))?;
    let qs: Vec<f64> = (0..=400).map(|i| 1.5 + 1.5 * (i as f64 + 0.5) / 401.0).collect();
    for &p in &grid {
        let nu = ok(nu_from_psi(&natural, p, 1.5, 3.0))? * natural.scale();
        let brute = qs
            .iter()
            .map(|&q| brink_K(q, p).map(|k| k.value * (q + 1.0).powf(-1.0 / q)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        ensure(nu <= brute * (1.0 + 1e-9), || format!("p={p}: nu {nu} above grid minimum {brute}"))?;
        let lp = ok(lp_norm(&g, p, Interval::unit()))?.value;
        ensure(lp <= nu, || format!("p={p}: |f|_p = {lp} > nu(p) = {nu}"))?;
    }
    let r = ok(verify_thm71(&g, &natural, &grid))?;
    ensure(r.satisfied, || format!("natural psi: {r:?}"))
}

fn c11_homogeneity_and_dilation() -> Result<(), String> {
    let cases = [(2usize, 1usize, 101u64), (3, 1, 102), (3, 2, 103), (4, 2, 104)];
    let mut trials = 0;
    for (n, k, seed) in cases {
        let family = ok(TrialFamily::random(n, k, n + 3, 50, seed).generate())?;
        for (i, f) in family.iter().enumerate() {
            trials += 1;
            let c = 0.25 + 0.75 * i as f64;
            let (p, q) = (1.5 + (i % 4) as f64, 1.25 + (i % 3) as f64);
            let base = ok(brink_ratio(f, n, k, p, q))?;
            let scaled = ok(brink_ratio(&f.scale(c), n, k, p, q))?;
            ensure(rel(scaled, base) <= 1e-9, || format!("({n},{k}) trial {i}: homogeneity {scaled} vs {base}"))?;
            let (x, y) = (SpaceSpec::Lebesgue(p), SpaceSpec::Lebesgue(q));
            let one = std::slice::from_ref(f);
            let w1 = ok(w_functional(&x, &y, n, 1.0, one))?;
            let wc = ok(w_functional(&x, &y, n, 1.0, &[f.scale(-c)]))?;
            ensure(rel(wc, w1) <= 1e-9, || format!("({n},{k}) trial {i}: W homogeneity {wc} vs {w1}"))?;
            for delta in [1e-3, 0.37, 29.0, 1e3] {
                let wd = ok(w_functional(&x, &y, n, delta, one))?;
                ensure(rel(wd, w1) <= 1e-8, || format!("({n},{k}) trial {i}, delta={delta}: {wd} vs {w1}"))?;
            }
        }
    }
    ensure(trials == 200, || format!("{trials} trials"))
}

fn wirtinger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wirtinger")).args(args).output().expect("binary runs")
}

fn c12_cli_determinism_and_exit_codes() -> Result<(), String> {
    let sweep = [
        "sweep",
        "--space",
        r#"{"type":"gls","psi":{"form":"constant","a":1.5,"b":4}}"#,
        "--space",
        r#"{"type":"lebesgue","p":2}"#,
        "--family",
        "random",
        "--seed",
        "7",
        "--count",
        "6",
        "--delta-grid",
        "0.01,1,100",
    ];
    let (a, b) = (wirtinger(&sweep), wirtinger(&sweep));
    ensure(a.status.code() == Some(0), || format!("sweep exit {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "sweep output differs between runs".into())?;
    let expect = [
        (vec!["verify", "--theorem", "thm41", "--n", "2", "--k", "1", "--psi", "constant", "--nu", "constant"], 0),
        (vec!["verify", "--theorem", "thm31", "--cap", "1e-6"], 1),
        (vec!["norm", "--space", r#"{"type":"sobolev"}"#, "--function", r#"{"type":"extremal","n":2,"k":1}"#], 2),
        (vec!["fundamental", "--space", r#"{"type":"lebesgue","p":2}"#, "--delta", "-1"], 2),
    ];
    for (args, code) in expect {
        let out = wirtinger(&args);
        let err = String::from_utf8_lossy(&out.stderr);
        ensure(code != 2 || err.contains("failed") || err.contains("violation"), || format!("{args:?}: {err}"))?;
        ensure(out.status.code() == Some(code), || {
            format!(
                "{args:?}: exit {:?}, expected {code}; stderr {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            )
        })?;
    }
    Ok(())
}

const CRITERIA: [(&str, Check); 12] = [
    ("brink_K(2,2) = 1/pi", c1_constant_oracle),
    ("sharpness of the classical and Beesack checks", c2_sharpness_anchors),
    ("|g_nk|_p against the Beta-function oracle", c3_quadrature_oracle),
    ("sup |g_nk| closed form", c4_extrema_oracle),
    ("lower bound with flat psi and nu", c5_gls_lower_bound),
    ("Orlicz lower bound and the n! denominator", c6_orlicz_lower_bound),
    ("Luxemburg norm of 1 and the Orlicz fundamental function", c7_luxemburg_closed_form),
    ("delta sweep of W for Lebesgue and Grand Lebesgue pairs", c8_w_sweep),
    ("Zygmund W boundedness fit", c9_zygmund_boundedness),
    ("Grand Lebesgue Sobolev bound and the natural psi", c10_gls_sobolev_bound),
    ("homogeneity and dilation invariance on 200 trials", c11_homogeneity_and_dilation),
    ("CLI determinism and exit codes", c12_cli_determinism_and_exit_codes),
];

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
