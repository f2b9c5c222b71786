//! Report documents and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use wirtinger_core::{FormulaId, NormValue, VerdictReport};

use crate::config::{Format, RunConfig};

/// A norm or fundamental-function evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEntry {
    pub operation: String,
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub value: NormValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub formula_id: FormulaId,
    #[serde(with = "wirtinger_core::serde_float::map")]
    pub parameters: BTreeMap<String, f64>,
    #[serde(with = "wirtinger_core::serde_float")]
    pub value: f64,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEntry {
    pub functional: String,
    pub delta: f64,
    #[serde(with = "wirtinger_core::serde_float")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultEntry {
    Verdict(VerdictReport),
    Norm(NormEntry),
    Constant(ConstantEntry),
    Sample(SampleEntry),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub config_echo: RunConfig,
    pub results: Vec<ResultEntry>,
    pub timing_ms: u64,
    pub warnings: Vec<String>,
}

impl ReportDocument {
    /// 0 when every verdict holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let violated = self.results.iter().any(|r| matches!(r, ResultEntry::Verdict(v) if !v.satisfied));
        i32::from(violated)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => to_csv(self),
            Format::Text => to_text(self),
        }
    }
}

/// Shortest decimal that parses back to `x` (never more than 17 significant
/// digits), with at least one fractional digit for integral values.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
    }
    let sci = format!("{x:e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.as_str();
    if (-5..17).contains(&exp) {
        if exp >= 0 {
            let e = exp as usize;
            let (int, frac) = if digits.len() > e + 1 {
                (digits[..=e].to_string(), digits[e + 1..].to_string())
            } else {
                (format!("{digits:0<width$}", width = e + 1), "0".to_string())
            };
            format!("{sign}{int}.{frac}")
        } else {
            format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else {
        let (head, tail) = digits.split_at(1);
        let tail = if tail.is_empty() { "0" } else { tail };
        format!("{sign}{head}.{tail}e{exp}")
    }
}

/// Pretty printer writing floats through [`format_f64`].
struct DigitsFormatter(PrettyFormatter<'static>);

impl Formatter for DigitsFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes any value as pretty JSON with 17-digit floats and a trailing newline.
pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, DigitsFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub fn to_json(doc: &ReportDocument) -> String {
    json_string(doc)
}

pub const CSV_HEADER: &str = "kind,id,label,observed,bound,satisfied,margin,value,error_estimate,delta";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format_f64(x)
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// One row per result under [`CSV_HEADER`]; inapplicable columns stay empty.
pub fn to_csv(doc: &ReportDocument) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &doc.results {
        let cols: [String; 10] = match r {
            ResultEntry::Verdict(v) => [
                "verdict".into(),
                v.theorem_id.as_str().into(),
                String::new(),
                num(v.observed),
                num(v.bound),
                v.satisfied.to_string(),
                num(v.margin),
                String::new(),
                String::new(),
                String::new(),
            ],
            ResultEntry::Norm(n) => [
                "norm".into(),
                n.operation.clone(),
                n.space.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                num(n.value.value),
                num(n.value.error_estimate),
                n.delta.map(num).unwrap_or_default(),
            ],
            ResultEntry::Constant(c) => [
                "constant".into(),
                c.formula_id.as_str().into(),
                params_label(&c.parameters),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                num(c.value),
                String::new(),
                String::new(),
            ],
            ResultEntry::Sample(s) => [
                "sample".into(),
                s.functional.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                num(s.value),
                String::new(),
                num(s.delta),
            ],
        };
        let cols: Vec<String> = cols.iter().map(|c| csv_field(c)).collect();
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

fn params_label(p: &BTreeMap<String, f64>) -> String {
    p.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect::<Vec<_>>().join(" ")
}

pub fn to_text(doc: &ReportDocument) -> String {
    let mut out = format!("wirtinger {}\n", doc.tool_version);
    for r in &doc.results {
        let line = match r {
            ResultEntry::Verdict(v) => format!(
                "{} {}: observed {} {} bound {} (margin {}, {} samples{})",
                if v.satisfied { "PASS" } else { "FAIL" },
                v.theorem_id.as_str(),
                num(v.observed),
                match v.direction {
                    wirtinger_core::wirtinger::Direction::AtMost => "<=",
                    wirtinger_core::wirtinger::Direction::AtLeast => ">=",
                },
                num(v.bound),
                num(v.margin),
                v.samples,
                if v.skipped > 0 { format!(", {} skipped", v.skipped) } else { String::new() },
            ),
            ResultEntry::Norm(n) => {
                let target = match (&n.function, n.delta) {
                    (Some(f), _) => format!("{f} in {}", n.space),
                    (None, Some(d)) => format!("{} at delta = {}", n.space, num(d)),
                    (None, None) => n.space.clone(),
                };
                format!("{} {target}: {} (+/- {})", n.operation, num(n.value.value), num(n.value.error_estimate))
            }
            ResultEntry::Constant(c) => {
                format!("{}({}) = {}", c.formula_id.as_str(), params_label(&c.parameters), num(c.value))
            }
            ResultEntry::Sample(s) => format!("{} at delta = {}: {}", s.functional, num(s.delta), num(s.value)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for w in &doc.warnings {
        out.push_str("warning: ");
        out.push_str(w);
        out.push('\n');
    }
    if doc.timing_ms > 0 {
        out.push_str(&format!("elapsed: {} ms\n", doc.timing_ms));
    }
    out
}
