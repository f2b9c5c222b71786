use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use wirtinger_cli::spec::psi_arg;
use wirtinger_cli::{config_from_value, parse_config, run, Format, RunConfig};

/// Numerical checks of Wirtinger-type inequalities in rearrangement-invariant spaces.
#[derive(Parser)]
#[command(name = "wirtinger", version)]
struct Cli {
    /// Read the run configuration from a JSON file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["json", "csv", "text"])]
    format: Option<String>,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand)]
enum Sub {
    /// Norm of a function in one or more spaces.
    #[command(allow_negative_numbers = true)]
    Norm(Common),
    /// Fundamental function of one or more spaces at `--delta`.
    #[command(allow_negative_numbers = true)]
    Fundamental(Common),
    /// A closed-form constant by formula id.
    #[command(allow_negative_numbers = true)]
    Constant {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verdict for one inequality.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        common: Common,
    },
    /// A functional evaluated over the delta grid.
    #[command(allow_negative_numbers = true)]
    Sweep(Common),
}

#[derive(Args, Default)]
struct Common {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    cap: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    degree: Option<u64>,
    /// Zygmund fundamental-function exponent: positive or negative.
    #[arg(long)]
    exponent: Option<String>,
    /// Sweep functional: w, w_normalized, v_delta or zygmund_wo.
    #[arg(long)]
    functional: Option<String>,
    /// Trial family: extremal or random.
    #[arg(long)]
    family: Option<String>,
    /// Function as JSON.
    #[arg(long)]
    function: Option<String>,
    /// Space as JSON; repeat for X and Y.
    #[arg(long)]
    space: Vec<String>,
    /// Generator name (constant, power, table, natural) or JSON object.
    #[arg(long)]
    psi: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    /// Comma-separated list.
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long)]
    q_grid: Option<String>,
    #[arg(long)]
    delta_grid: Option<String>,
}

fn json_arg(flag: &str, s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| format!("--{flag}: invalid JSON: {e}"))
}

fn grid_arg(flag: &str, s: &str) -> Result<Value, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map(|x| json!(x)).map_err(|_| format!("--{flag}: not a number: {t:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Value::Array)
}

fn config_value(command: &str, extra: Vec<(&str, Value)>, c: Common) -> Result<Value, String> {
    let mut top = Map::new();
    top.insert("command".into(), json!(command));
    for (k, v) in extra {
        top.insert(k.into(), v);
    }
    if let Some(f) = &c.function {
        top.insert("function_spec".into(), json_arg("function", f)?);
    }
    if !c.space.is_empty() {
        let spaces = c.space.iter().map(|s| json_arg("space", s)).collect::<Result<Vec<_>, _>>()?;
        top.insert("space_specs".into(), Value::Array(spaces));
    }
    if let Some(s) = &c.psi {
        top.insert("psi".into(), psi_arg(s).map_err(|e| format!("--psi: {e}"))?);
    }
    if let Some(s) = &c.nu {
        top.insert("nu".into(), psi_arg(s).map_err(|e| format!("--nu: {e}"))?);
    }
    if let Some(f) = c.family {
        top.insert("family".into(), json!(f));
    }
    let mut params = Map::new();
    for (key, v) in [("n", c.n), ("k", c.k), ("seed", c.seed), ("count", c.count), ("degree", c.degree)] {
        if let Some(v) = v {
            params.insert(key.into(), json!(v));
        }
    }
    for (key, v) in [("p", c.p), ("q", c.q), ("delta", c.delta), ("gamma", c.gamma), ("beta", c.beta), ("cap", c.cap)] {
        if let Some(v) = v {
            params.insert(key.into(), json!(v));
        }
    }
    for (key, v) in [("exponent", c.exponent), ("functional", c.functional)] {
        if let Some(v) = v {
            params.insert(key.into(), json!(v));
        }
    }
    if !params.is_empty() {
        top.insert("params".into(), Value::Object(params));
    }
    let mut grids = Map::new();
    for (key, v) in [("p_grid", &c.p_grid), ("q_grid", &c.q_grid), ("delta_grid", &c.delta_grid)] {
        if let Some(s) = v {
            grids.insert(key.into(), grid_arg(&key.replace('_', "-"), s)?);
        }
    }
    if !grids.is_empty() {
        top.insert("grids".into(), Value::Object(grids));
    }
    Ok(Value::Object(top))
}

fn load(cli: Cli) -> Result<RunConfig, String> {
    let mut cfg = match (cli.config, cli.command) {
        (Some(_), Some(_)) => return Err("--config cannot be combined with a subcommand".into()),
        (None, None) => return Err("nothing to do: give a subcommand or --config <path>".into()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(sub)) => {
            let value = match sub {
                Sub::Norm(c) => config_value("norm", vec![], c)?,
                Sub::Fundamental(c) => config_value("fundamental", vec![], c)?,
                Sub::Constant { id, common } => config_value("constant", vec![("constant_id", json!(id))], common)?,
                Sub::Verify { theorem, common } => {
                    config_value("verify", vec![("theorem_id", json!(theorem))], common)?
                }
                Sub::Sweep(c) => config_value("sweep", vec![], c)?,
            };
            config_from_value(value).map_err(|e| e.to_string())?
        }
    };
    if let Some(out) = cli.out {
        cfg.output_path = Some(out.display().to_string());
    }
    if let Some(f) = cli.format.as_deref().and_then(Format::parse) {
        cfg.format = f;
    }
    cfg.record_timing |= cli.timing;
    Ok(cfg)
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("WIRTINGER_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("WIRTINGER_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| load(cli)).and_then(|cfg| {
        let doc = run(&cfg).map_err(|e| e.to_string())?;
        let text = doc.render(cfg.format);
        match &cfg.output_path {
            Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}"))?,
            None => print!("{text}"),
        }
        Ok(doc.exit_code())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
