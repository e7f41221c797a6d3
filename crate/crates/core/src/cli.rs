//! Command-line front end for the `igusa` binary.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{IgusaError, Result};
use crate::oracle::{exp_sum, twisted_coeffs, OracleDomain};
use crate::padic::{DEFAULT_ENUM_CAP, DEFAULT_SPF_DEPTH};
use crate::report::{coeff_json, complex_json, render_text, run_newton, run_zeta, RunConfig, DEFAULT_KMAX};

/// Exit code when every requested check passed.
pub const EXIT_OK: i32 = 0;
/// Exit code when a consistency check failed.
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "igusa",
    version,
    about = "Exact Igusa local zeta functions of Newton non-degenerate polynomials",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    zeta: ZetaArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute Z(s, f, χ) with pole analysis and checks (the default).
    Zeta(ZetaArgs),
    /// Print the Newton polyhedron: vertices, facets, faces and dual cones.
    Newton(NewtonArgs),
    /// Brute-force / class-tree oracle: series coefficients or exponential sums.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Domain {
    #[default]
    All,
    Torus,
}

#[derive(Args, Debug, Clone)]
struct PolyArgs {
    /// Polynomial, e.g. "x^2*y^2+x^5+y^5".
    #[arg(long)]
    poly: Option<String>,
    /// Comma-separated variable order (default: inferred, x,y,z,w first).
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ZetaArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// The prime p (Z is computed over Q_p).
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    char_order: u32,
    #[arg(long, default_value_t = 1)]
    char_conductor: u32,
    /// auto | A | B
    #[arg(long, default_value = "auto")]
    mode: String,
    /// Number of series coefficients checked against the oracle (k = 0..K-1).
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: usize,
    /// Depth cap for the stationary-phase recursion.
    #[arg(long, default_value_t = DEFAULT_SPF_DEPTH)]
    spf_depth: usize,
    #[arg(long, env = "IGUSA_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// poles,theoremB,oracle,expsum | all | none
    #[arg(long, default_value = "poles,theoremB,oracle")]
    checks: String,
    /// JSON-lines file of run configurations, processed in parallel.
    #[arg(long, conflicts_with = "poly")]
    corpus: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct NewtonArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// The prime p.
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    char_order: u32,
    #[arg(long, default_value_t = 1)]
    char_conductor: u32,
    /// Number of coefficients (k = 0..K-1).
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: usize,
    #[arg(long, value_enum, default_value_t = Domain::All)]
    domain: Domain,
    #[arg(long, env = "IGUSA_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// Compute E(u p^-m) = p^{-nm} Σ exp(2πi u f(x)/p^m) instead of coefficients.
    #[arg(long)]
    expsum: bool,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[command(flatten)]
    output: OutputArgs,
}

impl PolyArgs {
    fn text(&self) -> Result<&str> {
        self.poly
            .as_deref()
            .ok_or_else(|| IgusaError::Config("--poly is required".into()))
    }
}

impl ZetaArgs {
    fn config(&self) -> Result<RunConfig> {
        let p = self.p.ok_or_else(|| IgusaError::Config("--p is required".into()))?;
        Ok(RunConfig {
            poly: self.poly.text()?.to_string(),
            vars: self.poly.vars.clone(),
            p,
            char_order: self.char_order,
            char_conductor: self.char_conductor,
            mode: self.mode.clone(),
            kmax: self.kmax,
            spf_depth: self.spf_depth,
            enum_cap: self.enum_cap,
            checks: Some(self.checks.clone()),
        })
    }
}

fn emit(output: &OutputArgs, json: &Value, text: impl FnOnce() -> String) -> Result<()> {
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(json).expect("serializable") + "\n",
        Format::Text => text(),
    };
    write_out(output, &body)
}

fn write_out(output: &OutputArgs, body: &str) -> Result<()> {
    let io_err = |e: io::Error| IgusaError::Config(format!("cannot write output: {e}"));
    match &output.out {
        Some(path) => fs::write(path, body).map_err(io_err),
        None => io::stdout().write_all(body.as_bytes()).map_err(io_err),
    }
}

fn report_failures(failures: &[String]) -> i32 {
    for f in failures {
        eprintln!("check failed: {f}");
    }
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_zeta(args: &ZetaArgs) -> Result<i32> {
    if let Some(path) = &args.corpus {
        return cmd_corpus(args, path);
    }
    let rep = run_zeta(&args.config()?)?;
    emit(&args.output, &rep.json, || render_text(&rep.json))?;
    Ok(report_failures(&rep.failures))
}

/// Each corpus line is a JSON run configuration; output is one JSON report per line.
fn cmd_corpus(args: &ZetaArgs, path: &PathBuf) -> Result<i32> {
    let file = fs::File::open(path)
        .map_err(|e| IgusaError::Config(format!("cannot open {}: {e}", path.display())))?;
    let mut configs = Vec::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| IgusaError::Config(format!("read error: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cfg: RunConfig = serde_json::from_str(trimmed)
            .map_err(|e| IgusaError::Config(format!("corpus line {}: {e}", i + 1)))?;
        configs.push((i + 1, cfg));
    }
    let results: Vec<_> = configs
        .par_iter()
        .map(|(line, cfg)| (*line, run_zeta(cfg)))
        .collect();
    let mut body = String::new();
    let mut failures = Vec::new();
    let mut worst_error = 0;
    for (line, res) in results {
        let v = match res {
            Ok(rep) => {
                failures.extend(rep.failures.iter().map(|f| format!("line {line}: {f}")));
                match args.output.format {
                    Format::Json => json!({"line": line, "report": rep.json}),
                    Format::Text => {
                        body.push_str(&format!("# line {line}\n{}\n", render_text(&rep.json)));
                        continue;
                    }
                }
            }
            Err(e) => {
                eprintln!("line {line}: {e}");
                worst_error = worst_error.max(e.exit_code());
                json!({"line": line, "error": e.to_string()})
            }
        };
        body.push_str(&serde_json::to_string(&v).expect("serializable"));
        body.push('\n');
    }
    write_out(&args.output, &body)?;
    let code = report_failures(&failures);
    Ok(code.max(worst_error))
}

fn cmd_newton(args: &NewtonArgs) -> Result<i32> {
    let mut cfg = RunConfig::new(args.poly.text()?, 2);
    cfg.vars = args.poly.vars.clone();
    let rep = run_newton(&cfg)?;
    emit(&args.output, &rep.json, || newton_text(&rep.json))?;
    Ok(EXIT_OK)
}

fn newton_text(v: &Value) -> String {
    let mut s = format!("f = {}\nvertices: {}\nfacets:\n", v["input"]["poly"].as_str().unwrap_or(""), v["newton"]["vertices"]);
    for fc in v["newton"]["facets"].as_array().into_iter().flatten() {
        s += &format!("  normal {}  m = {}  |a| = {}\n", fc["normal"], fc["m"], fc["abs"]);
    }
    s
}

fn cmd_oracle(args: &OracleArgs) -> Result<i32> {
    let mut cfg = RunConfig::new(args.poly.text()?, args.p);
    cfg.vars = args.poly.vars.clone();
    cfg.char_order = args.char_order;
    cfg.char_conductor = args.char_conductor;
    cfg.enum_cap = args.enum_cap;
    cfg.kmax = args.kmax;
    let f = cfg.polynomial()?;
    cfg.context()?;
    let vars = cfg.variables();
    let input = json!({"poly": f.display_with(&vars), "vars": vars, "p": args.p});
    if args.expsum {
        let (re, im) = exp_sum(&f, args.p, args.m, args.u, args.enum_cap)?;
        let v = json!({"input": input, "m": args.m, "u": args.u, "E": complex_json(re, im)});
        emit(&args.output, &v, || format!("E = {re:.15} + {im:.15}i\n"))?;
        return Ok(EXIT_OK);
    }
    let chi = cfg.character()?;
    let domain = match args.domain {
        Domain::All => OracleDomain::All,
        Domain::Torus => OracleDomain::Torus,
    };
    let coeffs = twisted_coeffs(&f, &chi, args.kmax - 1, &domain, args.enum_cap)?;
    let json_coeffs: Vec<Value> = coeffs.iter().map(coeff_json).collect();
    let v = json!({"input": input, "character": {"order": args.char_order, "conductor": args.char_conductor}, "coefficients": json_coeffs});
    emit(&args.output, &v, || {
        let items: Vec<String> = json_coeffs
            .iter()
            .map(|c| c.as_str().map(str::to_string).unwrap_or_else(|| c.to_string()))
            .collect();
        format!("[{}]\n", items.join(", "))
    })?;
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let res = match &cli.command {
        None => cmd_zeta(&cli.zeta),
        Some(Command::Zeta(a)) => cmd_zeta(a),
        Some(Command::Newton(a)) => cmd_newton(a),
        Some(Command::Oracle(a)) => cmd_oracle(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
