//! JSON descriptions of functions, spaces and generating functions.
//!
//! Functions:
//! `{"type":"polynomial","coeffs":[..],"interval":[a,b],"extend_by_zero":false}`,
//! `{"type":"extremal","n":2,"k":1}`, `{"type":"sin","frequency":w,"interval":[a,b]}`.
//!
//! Spaces: `{"type":"lebesgue","p":2}` (`p` may be `"inf"`), `{"type":"gls","psi":{..}}`,
//! `{"type":"orlicz","p":2}` or `{"type":"orlicz","phi":"zygmund","q":2,"gamma":1}`,
//! `{"type":"zygmund","q":2,"gamma":1,"c":3}`.
//!
//! Generating functions: `{"form":"constant","value":1,"a":1.5,"b":3}`,
//! `{"form":"power","exponent":1}`, `{"form":"table","points":[[p,v],..]}` and,
//! where a function is at hand, `{"form":"natural"}` for `ψ(q) = |f'|_q`.

use serde_json::{Map, Value};
use wirtinger_core::norms::{zygmund_orlicz_gen, PsiForm};
use wirtinger_core::wirtinger::natural_psi;
use wirtinger_core::{
    extremal_g, Error, FunctionHandle, Interval, OrliczGen, PolynomialFunc, PsiGen, RealFunction, SpaceSpec,
};

use crate::config::{join, Checker};

pub const DEFAULT_PSI_SUPPORT: (f64, f64) = (1.5, 3.0);

/// A function given on the command line or in a config.
#[derive(Debug, Clone)]
pub enum FunctionInput {
    Polynomial(PolynomialFunc),
    Handle(FunctionHandle),
}

impl FunctionInput {
    pub fn as_real(&self) -> &dyn RealFunction {
        match self {
            FunctionInput::Polynomial(p) => p,
            FunctionInput::Handle(h) => h,
        }
    }

    pub fn domain(&self) -> Interval {
        self.as_real().domain()
    }

    pub fn polynomial(&self) -> Option<&PolynomialFunc> {
        match self {
            FunctionInput::Polynomial(p) => Some(p),
            FunctionInput::Handle(_) => None,
        }
    }

    /// A handle carrying at least the first derivative.
    pub fn handle(&self) -> FunctionHandle {
        match self {
            FunctionInput::Polynomial(p) => FunctionHandle::from_polynomial(p, p.degree() + 1),
            FunctionInput::Handle(h) => h.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionInput::Polynomial(p) => format!("poly{:?}", p.coeffs()),
            FunctionInput::Handle(h) => h.label().to_string(),
        }
    }
}

fn field<'a>(o: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    o.get(key)
}

fn interval(o: &Map<String, Value>, path: &str, c: &mut Checker) -> Option<Interval> {
    let Some(v) = field(o, "interval") else { return Some(Interval::unit()) };
    let p = join(path, "interval");
    let pair = v.as_array().filter(|a| a.len() == 2);
    let Some(pair) = pair else {
        c.push(p, "expected [a, b]");
        return None;
    };
    let a = c.real(&pair[0], &format!("{p}[0]"))?;
    let b = c.real(&pair[1], &format!("{p}[1]"))?;
    match Interval::new(a, b) {
        Ok(iv) => Some(iv),
        Err(e) => {
            c.push(p, e.to_string());
            None
        }
    }
}

fn required<'a>(o: &'a Map<String, Value>, key: &str, path: &str, c: &mut Checker) -> Option<&'a Value> {
    let v = o.get(key);
    if v.is_none() {
        c.push(join(path, key), "required field missing");
    }
    v
}

fn function_from(v: &Value, path: &str, c: &mut Checker) -> Option<FunctionInput> {
    let o = c.object(v, path)?;
    let tp = join(path, "type");
    let kind = required(o, "type", path, c).and_then(|t| c.one_of(t, &tp, &["polynomial", "extremal", "sin"]))?;
    match kind {
        0 => {
            c.known_keys(o, path, &["type", "coeffs", "interval", "extend_by_zero"]);
            let cp = join(path, "coeffs");
            let coeffs = required(o, "coeffs", path, c).and_then(|v| {
                let Some(items) = v.as_array().filter(|a| !a.is_empty()) else {
                    c.push(&cp, "expected a nonempty array of numbers");
                    return None;
                };
                let xs: Vec<Option<f64>> =
                    items.iter().enumerate().map(|(i, x)| c.real(x, &format!("{cp}[{i}]"))).collect();
                xs.into_iter().collect::<Option<Vec<f64>>>()
            });
            let iv = interval(o, path, c);
            let extend = match o.get("extend_by_zero") {
                None => false,
                Some(Value::Bool(b)) => *b,
                Some(_) => {
                    c.push(join(path, "extend_by_zero"), "expected true or false");
                    false
                }
            };
            let p = PolynomialFunc::new(coeffs?, iv?);
            Some(FunctionInput::Polynomial(if extend { p.extended_by_zero() } else { p }))
        }
        1 => {
            c.known_keys(o, path, &["type", "n", "k"]);
            let n = required(o, "n", path, c).and_then(|v| c.integer(v, &join(path, "n")));
            let k = required(o, "k", path, c).and_then(|v| c.integer(v, &join(path, "k")));
            match extremal_g(n? as usize, k? as usize) {
                Ok(g) => Some(FunctionInput::Polynomial(g)),
                Err(e) => {
                    c.push(path, e.to_string());
                    None
                }
            }
        }
        _ => {
            c.known_keys(o, path, &["type", "frequency", "interval"]);
            let w = required(o, "frequency", path, c).and_then(|v| c.real(v, &join(path, "frequency")));
            let iv = interval(o, path, c);
            Some(FunctionInput::Handle(FunctionHandle::sin(w?, iv?)))
        }
    }
}

fn psi_from(v: &Value, path: &str, natural: Option<&PolynomialFunc>, c: &mut Checker) -> Option<PsiGen> {
    let o = c.object(v, path)?;
    let form = match o.get("form") {
        Some(f) => c.one_of(f, &join(path, "form"), &["constant", "power", "table", "natural"])?,
        None => 0,
    };
    let allowed: &[&str] = match form {
        0 => &["form", "value", "a", "b"],
        1 => &["form", "exponent", "a", "b"],
        2 => &["form", "points", "a", "b"],
        _ => &["form", "a", "b"],
    };
    c.known_keys(o, path, allowed);
    let a = o.get("a").map_or(Some(DEFAULT_PSI_SUPPORT.0), |v| c.real(v, &join(path, "a")));
    let b = o.get("b").map_or(Some(DEFAULT_PSI_SUPPORT.1), |v| c.extended_real(v, &join(path, "b")));
    let built = match form {
        0 => {
            let value = o.get("value").map_or(Some(1.0), |v| c.real(v, &join(path, "value")));
            PsiGen::constant(value?, a?, b?)
        }
        1 => {
            let e = required(o, "exponent", path, c).and_then(|v| c.real(v, &join(path, "exponent")));
            PsiGen::power(e?, a?, b?)
        }
        2 => {
            let pp = join(path, "points");
            let points = required(o, "points", path, c).and_then(|v| table(v, &pp, c));
            PsiGen::new(PsiForm::Table(points?), a?, b?)
        }
        _ => match natural {
            Some(f) => natural_psi(f, a?, b?),
            None => {
                // Validation without a function at hand only checks the shape.
                a?;
                b?;
                return None;
            }
        },
    };
    match built {
        Ok(g) => Some(g),
        Err(e) => {
            c.push(path, e.to_string());
            None
        }
    }
}

fn table(v: &Value, path: &str, c: &mut Checker) -> Option<Vec<(f64, f64)>> {
    let Some(rows) = v.as_array().filter(|a| !a.is_empty()) else {
        c.push(path, "expected a nonempty array of [p, value] pairs");
        return None;
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        match row.as_array().filter(|r| r.len() == 2) {
            Some(r) => out.push((c.real(&r[0], &format!("{rp}[0]"))?, c.real(&r[1], &format!("{rp}[1]"))?)),
            None => {
                c.push(rp, "expected [p, value]");
                return None;
            }
        }
    }
    if out.windows(2).any(|w| !(w[1].0 > w[0].0)) || out.iter().any(|r| !(r.1 > 0.0)) {
        c.push(path, "table needs increasing p and positive values");
        return None;
    }
    Some(out)
}

fn space_from(v: &Value, path: &str, c: &mut Checker) -> Option<SpaceSpec> {
    let o = c.object(v, path)?;
    let tp = join(path, "type");
    let kind =
        required(o, "type", path, c).and_then(|t| c.one_of(t, &tp, &["lebesgue", "gls", "orlicz", "zygmund"]))?;
    let built: Result<SpaceSpec, Error> = match kind {
        0 => {
            c.known_keys(o, path, &["type", "p"]);
            let p = required(o, "p", path, c).and_then(|v| c.extended_real(v, &join(path, "p")))?;
            SpaceSpec::lebesgue(p)
        }
        1 => {
            c.known_keys(o, path, &["type", "psi"]);
            let default = Value::Object(Map::new());
            let psi = psi_from(o.get("psi").unwrap_or(&default), &join(path, "psi"), None, c)?;
            Ok(SpaceSpec::GrandLebesgue(psi))
        }
        2 => match o.get("phi").map(|f| c.one_of(f, &join(path, "phi"), &["power", "zygmund"])) {
            None | Some(Some(0)) => {
                c.known_keys(o, path, &["type", "phi", "p"]);
                let p = required(o, "p", path, c).and_then(|v| c.real(v, &join(path, "p")))?;
                OrliczGen::power(p).map(SpaceSpec::Orlicz)
            }
            Some(Some(_)) => {
                c.known_keys(o, path, &["type", "phi", "q", "gamma", "c"]);
                let (q, gamma, cc) = zygmund_fields(o, path, c)?;
                zygmund_orlicz_gen(q, gamma, cc).map(SpaceSpec::Orlicz)
            }
            Some(None) => return None,
        },
        _ => {
            c.known_keys(o, path, &["type", "q", "gamma", "c"]);
            let (q, gamma, cc) = zygmund_fields(o, path, c)?;
            SpaceSpec::zygmund(q, gamma, cc)
        }
    };
    match built {
        Ok(s) => Some(s),
        Err(e) => {
            c.push(path, e.to_string());
            None
        }
    }
}

fn zygmund_fields(o: &Map<String, Value>, path: &str, c: &mut Checker) -> Option<(f64, f64, Option<f64>)> {
    let q = required(o, "q", path, c).and_then(|v| c.real(v, &join(path, "q")));
    let gamma = required(o, "gamma", path, c).and_then(|v| c.real(v, &join(path, "gamma")));
    let cc = match o.get("c") {
        Some(v) => Some(c.real(v, &join(path, "c"))?),
        None => None,
    };
    Some((q?, gamma?, cc))
}

pub(crate) fn check_function(v: &Value, path: &str, c: &mut Checker) {
    function_from(v, path, c);
}

pub(crate) fn check_space(v: &Value, path: &str, c: &mut Checker) {
    space_from(v, path, c);
}

pub(crate) fn check_psi(v: &Value, path: &str, c: &mut Checker) {
    psi_from(v, path, None, c);
}

/// Builds from a JSON spec, turning the first violation into an error message.
fn build<T>(f: impl FnOnce(&mut Checker) -> Option<T>) -> Result<T, String> {
    let mut c = Checker::default();
    let out = f(&mut c);
    match (out, c.found.into_iter().next()) {
        (Some(t), None) => Ok(t),
        (_, Some((path, msg))) => Err(format!("{path}: {msg}")),
        (None, None) => Err("incomplete specification".to_string()),
    }
}

pub fn build_function(v: &Value) -> Result<FunctionInput, String> {
    build(|c| function_from(v, "function_spec", c))
}

pub fn build_space(v: &Value, path: &str) -> Result<SpaceSpec, String> {
    build(|c| space_from(v, path, c))
}

/// `natural` resolves against `f` when given.
pub fn build_psi(v: &Value, path: &str, natural: Option<&PolynomialFunc>) -> Result<PsiGen, String> {
    if natural.is_none() && v.get("form").and_then(Value::as_str) == Some("natural") {
        return Err(format!("{}: \"natural\" needs a polynomial function", join(path, "form")));
    }
    build(|c| psi_from(v, path, natural, c))
}

/// Expands a `--psi`/`--nu` argument: a bare form name or a JSON object.
pub fn psi_arg(s: &str) -> Result<Value, String> {
    let t = s.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| format!("invalid generator JSON: {e}"))
    } else {
        Ok(serde_json::json!({ "form": t }))
    }
}
