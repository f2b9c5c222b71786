//! Run configuration, JSON schema validation and source locations for errors.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use wirtinger_core::{FormulaId, FundamentalExponent, TheoremId};

use crate::spec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Norm,
    Fundamental,
    Constant,
    Verify,
    Sweep,
}

impl Command {
    const NAMES: [&'static str; 5] = ["norm", "fundamental", "constant", "verify", "sweep"];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "text" => Some(Format::Text),
            _ => None,
        }
    }
}

/// Trial functions for sampled suprema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    #[default]
    Extremal,
    Random,
}

/// Functional evaluated by `sweep` at each grid length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    #[default]
    W,
    WNormalized,
    VDelta,
    ZygmundWo,
}

impl Functional {
    const NAMES: [&'static str; 4] = ["w", "w_normalized", "v_delta", "zygmund_wo"];

    pub fn as_str(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<FundamentalExponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<Functional>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_spec: Option<Value>,
    #[serde(default)]
    pub space_specs: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem_id: Option<TheoremId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_id: Option<FormulaId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Value>,
    #[serde(default)]
    pub family: FamilyKind,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub record_timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            function_spec: None,
            space_specs: Vec::new(),
            theorem_id: None,
            constant_id: None,
            psi: None,
            nu: None,
            family: FamilyKind::default(),
            params: Params::default(),
            grids: Grids::default(),
            output_path: None,
            format: Format::default(),
            record_timing: false,
        }
    }
}

/// One schema violation, located by its JSON path and, for file input, its line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.path, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Parse { offset: usize, line: usize, column: usize, message: String },
    #[error("{}", render(.0))]
    Schema(Vec<Violation>),
}

fn render(vs: &[Violation]) -> String {
    let lines: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("{} schema violation(s):\n  {}", vs.len(), lines.join("\n  "))
}

/// Parses and validates a JSON configuration, reporting every violation found.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let line = e.line();
        let column = e.column();
        let line_start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
        ConfigError::Parse {
            offset: (line_start + column.saturating_sub(1)).min(text.len()),
            line,
            column,
            message: e.to_string(),
        }
    })?;
    validate(value, Some(text))
}

/// Validates an in-memory configuration; violations carry no line numbers.
pub fn config_from_value(value: Value) -> Result<RunConfig, ConfigError> {
    validate(value, None)
}

const TOP_KEYS: [&str; 13] = [
    "command",
    "function_spec",
    "space_specs",
    "theorem_id",
    "constant_id",
    "psi",
    "nu",
    "family",
    "params",
    "grids",
    "output_path",
    "format",
    "record_timing",
];
const INT_PARAMS: [&str; 5] = ["n", "k", "seed", "count", "degree"];
const REAL_PARAMS: [&str; 6] = ["p", "q", "delta", "gamma", "beta", "cap"];
const GRID_KEYS: [&str; 3] = ["p_grid", "q_grid", "delta_grid"];

/// Collects violations with JSON paths.
#[derive(Default)]
pub(crate) struct Checker {
    pub(crate) found: Vec<(String, String)>,
}

impl Checker {
    pub(crate) fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.found.push((path.into(), message.into()));
    }

    pub(crate) fn object<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Map<String, Value>> {
        let o = v.as_object();
        if o.is_none() {
            self.push(path, "expected a JSON object");
        }
        o
    }

    pub(crate) fn known_keys(&mut self, o: &Map<String, Value>, path: &str, allowed: &[&str]) {
        for key in o.keys() {
            if !allowed.contains(&key.as_str()) {
                self.push(join(path, key), format!("unknown field; expected one of {}", allowed.join(", ")));
            }
        }
    }

    pub(crate) fn one_of(&mut self, v: &Value, path: &str, allowed: &[&str]) -> Option<usize> {
        match v.as_str() {
            Some(s) => {
                let i = allowed.iter().position(|a| *a == s);
                if i.is_none() {
                    self.push(path, format!("unknown value {s:?}; expected one of {}", allowed.join(", ")));
                }
                i
            }
            None => {
                self.push(path, format!("expected a string, one of {}", allowed.join(", ")));
                None
            }
        }
    }

    pub(crate) fn integer(&mut self, v: &Value, path: &str) -> Option<u64> {
        let i = v.as_u64();
        if i.is_none() {
            self.push(path, "expected a non-negative integer");
        }
        i
    }

    pub(crate) fn real(&mut self, v: &Value, path: &str) -> Option<f64> {
        let x = v.as_f64();
        if x.is_none() {
            self.push(path, "expected a number");
        }
        x
    }

    /// A number or the string `"inf"`.
    pub(crate) fn extended_real(&mut self, v: &Value, path: &str) -> Option<f64> {
        match v {
            Value::String(s) if s == "inf" => Some(f64::INFINITY),
            Value::Number(_) => v.as_f64(),
            _ => {
                self.push(path, "expected a number or \"inf\"");
                None
            }
        }
    }

    fn positive_list(&mut self, v: &Value, path: &str) {
        let Some(items) = v.as_array() else {
            self.push(path, "expected an array of numbers");
            return;
        };
        if items.is_empty() {
            self.push(path, "must not be empty");
        }
        for (i, item) in items.iter().enumerate() {
            let p = format!("{path}[{i}]");
            if let Some(x) = self.real(item, &p) {
                if !(x > 0.0 && x.is_finite()) {
                    self.push(p, format!("must be positive, got {x}"));
                }
            }
        }
    }
}

pub(crate) fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn validate(value: Value, text: Option<&str>) -> Result<RunConfig, ConfigError> {
    let mut c = Checker::default();
    check_top(&value, &mut c);
    if c.found.is_empty() {
        match serde_json::from_value::<RunConfig>(value) {
            Ok(cfg) => return Ok(cfg),
            Err(e) => c.push("", e.to_string()),
        }
    }
    let violations = c
        .found
        .into_iter()
        .map(|(path, message)| Violation {
            line: text.map(|t| line_of(t, &path)),
            path: if path.is_empty() { "<root>".to_string() } else { path },
            message,
        })
        .collect();
    Err(ConfigError::Schema(violations))
}

fn check_top(value: &Value, c: &mut Checker) {
    let Some(o) = c.object(value, "") else { return };
    c.known_keys(o, "", &TOP_KEYS);
    let command = match o.get("command") {
        Some(v) => c.one_of(v, "command", &Command::NAMES),
        None => {
            c.push("command", format!("required field missing; expected one of {}", Command::NAMES.join(", ")));
            None
        }
    };
    let theorem_names: Vec<&str> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
    let theorem = o.get("theorem_id").and_then(|v| c.one_of(v, "theorem_id", &theorem_names));
    if let Some(v) = o.get("constant_id") {
        c.one_of(v, "constant_id", &FORMULA_NAMES);
    }
    if let Some(v) = o.get("format") {
        c.one_of(v, "format", &["json", "csv", "text"]);
    }
    if let Some(v) = o.get("family") {
        c.one_of(v, "family", &["extremal", "random"]);
    }
    if let Some(v) = o.get("output_path") {
        if !v.is_string() {
            c.push("output_path", "expected a string");
        }
    }
    if let Some(v) = o.get("record_timing") {
        if !v.is_boolean() {
            c.push("record_timing", "expected true or false");
        }
    }
    if let Some(v) = o.get("function_spec") {
        spec::check_function(v, "function_spec", c);
    }
    let spaces = match o.get("space_specs") {
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                spec::check_space(item, &format!("space_specs[{i}]"), c);
            }
            items.as_slice()
        }
        Some(_) => {
            c.push("space_specs", "expected an array of space objects");
            &[]
        }
        None => &[],
    };
    for key in ["psi", "nu"] {
        if let Some(v) = o.get(key) {
            spec::check_psi(v, key, c);
        }
    }
    let params = o.get("params").and_then(|v| c.object(v, "params"));
    if let Some(params) = params {
        check_params(params, c);
    }
    if let Some(grids) = o.get("grids").and_then(|v| c.object(v, "grids")) {
        c.known_keys(grids, "grids", &GRID_KEYS);
        for key in GRID_KEYS {
            if let Some(v) = grids.get(key) {
                c.positive_list(v, &join("grids", key));
            }
        }
    }

    let has_param = |key: &str| params.is_some_and(|p| p.contains_key(key));
    match command.map(|i| Command::NAMES[i]) {
        Some("norm") => {
            if !o.contains_key("function_spec") {
                c.push("function_spec", "required for command \"norm\"");
            }
            if spaces.is_empty() {
                c.push("space_specs", "command \"norm\" needs at least one space");
            }
        }
        Some("fundamental") => {
            if spaces.is_empty() {
                c.push("space_specs", "command \"fundamental\" needs at least one space");
            }
            if !has_param("delta") {
                c.push("params.delta", "required for command \"fundamental\"");
            }
        }
        Some("constant") => {
            if !o.contains_key("constant_id") {
                c.push("constant_id", "required for command \"constant\"");
            }
        }
        Some("verify") => match theorem.map(|i| theorem_names[i]) {
            None if !o.contains_key("theorem_id") => c.push("theorem_id", "required for command \"verify\""),
            Some("thm31") if spaces.len() == 1 => c.push("space_specs", "thm31 needs two spaces X and Y"),
            Some("thm61") => {
                for (i, s) in spaces.iter().enumerate() {
                    if s.get("type").and_then(Value::as_str) != Some("orlicz") {
                        c.push(format!("space_specs[{i}].type"), "thm61 needs orlicz spaces");
                    }
                }
            }
            _ => {}
        },
        Some("sweep") => {
            let functional = params.and_then(|p| p.get("functional")).and_then(Value::as_str).unwrap_or("w");
            if matches!(functional, "w" | "w_normalized") && spaces.len() != 2 {
                c.push("space_specs", format!("sweep of {functional:?} needs exactly two spaces X and Y"));
            }
        }
        _ => {}
    }
}

fn check_params(o: &Map<String, Value>, c: &mut Checker) {
    let mut allowed: Vec<&str> = INT_PARAMS.to_vec();
    allowed.extend(REAL_PARAMS);
    allowed.extend(["exponent", "functional"]);
    c.known_keys(o, "params", &allowed);
    for key in INT_PARAMS {
        if let Some(v) = o.get(key) {
            c.integer(v, &join("params", key));
        }
    }
    for key in REAL_PARAMS {
        if let Some(v) = o.get(key) {
            c.real(v, &join("params", key));
        }
    }
    if let Some(v) = o.get("exponent") {
        c.one_of(v, "params.exponent", &["positive", "negative"]);
    }
    if let Some(v) = o.get("functional") {
        c.one_of(v, "params.functional", &Functional::NAMES);
    }
}

const FORMULA_NAMES: [&str; 6] = ["brink_K", "beesack", "ank_lb_gls", "ank_lb_orlicz", "gnk_max", "gnk_core_min"];

/// 1-based line of the deepest existing node on `path` (e.g. `space_specs[0].type`).
pub fn line_of(text: &str, path: &str) -> usize {
    let bytes = text.as_bytes();
    let mut pos = skip_ws(bytes, 0);
    let mut mark = pos;
    for seg in segments(path) {
        match locate(bytes, pos, &seg) {
            Some((at, value)) => (mark, pos) = (at, value),
            None => break,
        }
    }
    text[..mark.min(text.len())].matches('\n').count() + 1
}

enum Segment<'a> {
    Key(&'a str),
    Index(usize),
}

fn segments(path: &str) -> Vec<Segment<'_>> {
    let mut out = Vec::new();
    for part in path.split('.').filter(|s| !s.is_empty()) {
        let (key, rest) = part.split_once('[').map_or((part, ""), |(k, r)| (k, r));
        if !key.is_empty() {
            out.push(Segment::Key(key));
        }
        for idx in rest.split('[') {
            if let Ok(i) = idx.trim_end_matches(']').parse() {
                out.push(Segment::Index(i));
            }
        }
    }
    out
}

fn skip_ws(b: &[u8], mut pos: usize) -> usize {
    while pos < b.len() && b[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

fn skip_string(b: &[u8], mut pos: usize) -> usize {
    pos += 1;
    while pos < b.len() {
        match b[pos] {
            b'\\' => pos += 2,
            b'"' => return pos + 1,
            _ => pos += 1,
        }
    }
    pos
}

fn skip_value(b: &[u8], mut pos: usize) -> usize {
    match b.get(pos) {
        Some(b'"') => skip_string(b, pos),
        Some(b'{') | Some(b'[') => {
            let mut depth = 0usize;
            while pos < b.len() {
                match b[pos] {
                    b'"' => {
                        pos = skip_string(b, pos);
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            return pos + 1;
                        }
                    }
                    _ => {}
                }
                pos += 1;
            }
            pos
        }
        _ => {
            while pos < b.len() && !matches!(b[pos], b',' | b'}' | b']') && !b[pos].is_ascii_whitespace() {
                pos += 1;
            }
            pos
        }
    }
}

/// Start of the member (its key) and of its value for `seg` in the value at `pos`.
fn locate(b: &[u8], pos: usize, seg: &Segment<'_>) -> Option<(usize, usize)> {
    let (open, close) = match seg {
        Segment::Key(_) => (b'{', b'}'),
        Segment::Index(_) => (b'[', b']'),
    };
    if b.get(pos) != Some(&open) {
        return None;
    }
    let mut pos = skip_ws(b, pos + 1);
    let mut index = 0usize;
    while pos < b.len() && b[pos] != close {
        match seg {
            Segment::Key(k) => {
                let key_start = pos;
                let key_end = skip_string(b, pos);
                let key = &b[key_start + 1..key_end.saturating_sub(1).max(key_start + 1)];
                pos = skip_ws(b, key_end);
                pos = skip_ws(b, pos + 1);
                if key == k.as_bytes() {
                    return Some((key_start, pos));
                }
                pos = skip_value(b, pos);
            }
            Segment::Index(i) => {
                if index == *i {
                    return Some((pos, pos));
                }
                index += 1;
                pos = skip_value(b, pos);
            }
        }
        pos = skip_ws(b, pos);
        if b.get(pos) == Some(&b',') {
            pos = skip_ws(b, pos + 1);
        }
    }
    None
}
