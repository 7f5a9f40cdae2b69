mod input;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multizeta::poles::{dirichlet_atlas, dirichlet_residue_numeric_check, polar_atlas};
use multizeta::{
    continue_eval, dirichlet_residue, eval_additive_direct, eval_dirichlet_direct, evaluate_dirichlet, residue,
    residue_numeric_check, Complex64, PoleStatus, ContinuationConfig, EvalPoint64, EvalResult64,
};
use rayon::prelude::*;
use serde::Serialize;

use input::{parse_characters, parse_grid, parse_hyperplane, parse_point, BuildError, Characters, InputError};
use output::{csv_header, csv_row, pair, r15, EvalRecord, HyperplaneRecord, PoleRecord, PropertyRecord, ResidueRecord, VerifyRecord};

#[derive(Parser)]
#[command(name = "multizeta", version, about = "Multiple zeta and multiple L-functions on all of C^r")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Direct summation inside the convergence domain
    Eval(EvalArgs),
    /// Analytic continuation, valid off the polar hyperplanes
    Continue(EvalArgs),
    /// Polar hyperplanes with status and provenance
    Poles(PolesArgs),
    /// Closed-form residue next to its numeric check
    Residue(ResidueArgs),
    /// Run the invariant suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Character specs: trivial:r, root:b/N, @file.json (comma separated, repeatable)
    #[arg(long = "chars", required = true, allow_hyphen_values = true)]
    chars: Vec<String>,
    /// Write output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

#[derive(Args)]
struct Tuning {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Minimum truncation size q
    #[arg(long)]
    q: Option<usize>,
    /// Minimum number of retained J columns
    #[arg(long = "K")]
    k: Option<usize>,
}

impl Tuning {
    fn config(&self) -> ContinuationConfig {
        let mut cfg = ContinuationConfig::with_tol(self.tol);
        cfg.q = self.q;
        if let Some(k) = self.k {
            cfg.k = k;
        }
        cfg
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    tuning: Tuning,
    /// Comma-separated coordinates, e.g. 3,2 or 0.5+14.1i,2
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    point: Option<String>,
    /// Real lattice x0:x1:nx,... (one axis per coordinate)
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Defaults to json for a point and csv for a grid
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct PolesArgs {
    #[command(flatten)]
    common: Common,
    /// Lowest level listed
    #[arg(long = "n-min", default_value_t = -4, allow_negative_numbers = true)]
    n_min: i64,
    /// Also list hyperplanes removed from the possible set, with the reason
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ResidueArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    tuning: Tuning,
    /// Hyperplane s_1 + ... + s_i = n as i:n
    #[arg(long, allow_hyphen_values = true)]
    hyperplane: String,
    /// The free coordinates (all but s_i), comma separated
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    rest: String,
    /// Largest approach distance of the numeric check
    #[arg(long, default_value_t = 1e-2)]
    radius: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only this module's properties
    #[arg(long)]
    module: Option<String>,
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

enum Failure {
    Input(String),
    Library(multizeta::Error),
    /// Already reported; exit 1.
    Reported,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<multizeta::Error> for Failure {
    fn from(e: multizeta::Error) -> Self {
        match e {
            multizeta::Error::InvalidInput(msg) => Failure::Input(msg),
            other => Failure::Library(other),
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Input(e) => e.into(),
            BuildError::Library(e) => e.into(),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialise");
    s.push('\n');
    s
}

fn emit(out: &Option<String>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|_| Failure::Reported)
        }
    }
}

fn check_depth(chars: &Characters, coords: &[Complex64], what: &str) -> Result<(), Failure> {
    if chars.depth() != coords.len() {
        return Err(Failure::Input(format!(
            "{what} has {} coordinates but {} characters were given",
            coords.len(),
            chars.depth()
        )));
    }
    Ok(())
}

fn eval_one(chars: &Characters, coords: &[Complex64], cfg: &ContinuationConfig, direct: bool) -> multizeta::Result<EvalResult64> {
    let p = EvalPoint64::new(coords.to_vec())?;
    match (chars, direct) {
        (Characters::Additive(t), true) => eval_additive_direct(t, &p, cfg.tol),
        (Characters::Dirichlet(t), true) => eval_dirichlet_direct(t, &p, cfg.tol),
        (Characters::Additive(t), false) => continue_eval(t, &p, cfg),
        (Characters::Dirichlet(t), false) => evaluate_dirichlet(t, &p, cfg),
    }
}

fn run_eval(args: &EvalArgs, direct: bool) -> Result<(), Failure> {
    let chars = parse_characters(&args.common.chars)?;
    let cfg = args.tuning.config();
    cfg.validate()?;
    if let Some(point) = &args.point {
        let coords = parse_point(point)?;
        check_depth(&chars, &coords, "--point")?;
        let r = eval_one(&chars, &coords, &cfg, direct)?;
        let text = match args.format.unwrap_or(Format::Json) {
            Format::Json => json(&EvalRecord::new(&coords, &r)),
            Format::Csv => format!("{}\n{}\n", csv_header(coords.len()), csv_row(&coords, &Ok(r))),
        };
        return emit(&args.common.out, &text);
    }
    let points = parse_grid(args.grid.as_deref().expect("clap requires --point or --grid"))?;
    check_depth(&chars, &points[0], "--grid")?;
    // par_iter keeps lattice order in the collected vector
    let results: Vec<_> = points.par_iter().map(|p| eval_one(&chars, p, &cfg, direct)).collect();
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = csv_header(points[0].len());
            s.push('\n');
            for (p, r) in points.iter().zip(&results) {
                s.push_str(&csv_row(p, r));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .zip(&results)
                .map(|(p, r)| match r {
                    Ok(r) => serde_json::to_value(EvalRecord::new(p, r)).expect("records serialise"),
                    Err(e) => serde_json::json!({
                        "point": p.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
                        "error": e.name(),
                    }),
                })
                .collect();
            json(&rows)
        }
    };
    emit(&args.common.out, &text)?;
    let failed = results.iter().filter(|r| r.is_err()).count();
    if failed > 0 {
        eprintln!("error: {failed} of {} grid points failed (see the error column)", points.len());
        return Err(Failure::Reported);
    }
    Ok(())
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run_poles(args: &PolesArgs) -> Result<(), Failure> {
    let chars = parse_characters(&args.common.chars)?;
    let reports = match &chars {
        Characters::Additive(t) => polar_atlas(t, args.n_min),
        Characters::Dirichlet(t) => dirichlet_atlas(t, args.n_min),
    };
    let records: Vec<PoleRecord> = reports
        .iter()
        .filter(|r| args.all || r.status != PoleStatus::Regular)
        .map(PoleRecord::from)
        .collect();
    let text = match args.format {
        Format::Json => json(&records),
        Format::Csv => {
            let mut s = String::from("index,level,equation,status,residue_factor,provenance\n");
            for r in &records {
                let cells = [
                    r.hyperplane.index.to_string(),
                    r.hyperplane.level.to_string(),
                    csv_quote(&r.hyperplane.equation),
                    r.status.to_string(),
                    csv_quote(r.residue_factor.as_deref().unwrap_or("")),
                    csv_quote(&r.provenance),
                ];
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    };
    emit(&args.common.out, &text)
}

fn run_residue(args: &ResidueArgs) -> Result<(), Failure> {
    let chars = parse_characters(&args.common.chars)?;
    let cfg = args.tuning.config();
    cfg.validate()?;
    let h = parse_hyperplane(&args.hyperplane)?;
    let rest = if args.rest.trim().is_empty() { vec![] } else { parse_point(&args.rest)? };
    if rest.len() + 1 != chars.depth() {
        return Err(Failure::Input(format!(
            "--rest needs {} coordinates for depth {}",
            chars.depth().saturating_sub(1),
            chars.depth()
        )));
    }
    if !(args.radius > 0.0 && args.radius < 0.5) {
        return Err(Failure::Input("--radius must lie in (0, 0.5)".into()));
    }
    let (formula, numeric) = match &chars {
        Characters::Additive(t) => (
            residue(t, &h, &rest, &cfg)?,
            residue_numeric_check(t, &h, &rest, args.radius, &cfg)?,
        ),
        Characters::Dirichlet(t) => (
            dirichlet_residue(t, &h, &rest, &cfg)?,
            dirichlet_residue_numeric_check(t, &h, &rest, args.radius, &cfg)?,
        ),
    };
    let p = multizeta::poles::chart_point(chars.depth(), &h, &rest)?;
    let record = ResidueRecord {
        hyperplane: HyperplaneRecord { index: h.index, level: h.level, equation: h.to_string() },
        point: p.coords().iter().map(|&z| pair(z)).collect(),
        formula: pair(formula),
        numeric: pair(numeric),
        difference: r15((formula - numeric).norm()),
        radius: args.radius,
    };
    emit(&args.common.out, &json(&record))
}

/// Byte-identical output for a repeated job.
fn determinism_check() -> (bool, String) {
    let job = || -> Option<String> {
        let chars = parse_characters(&["trivial:2".into()]).ok()?;
        let coords = parse_point("-1,4").ok()?;
        let r = eval_one(&chars, &coords, &ContinuationConfig::default(), false).ok()?;
        Some(json(&EvalRecord::new(&coords, &r)))
    };
    match (job(), job()) {
        (Some(a), Some(b)) if a == b => (true, format!("{} identical bytes", a.len())),
        (Some(_), Some(_)) => (false, "outputs differ".into()),
        _ => (false, "job failed".into()),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let known = multizeta::verify::modules();
    if let Some(m) = &args.module {
        if m != "cli" && !known.contains(&m.as_str()) {
            return Err(Failure::Input(format!("unknown module '{m}' (one of {}, cli)", known.join(", "))));
        }
    }
    let mut properties: Vec<PropertyRecord> = match args.module.as_deref() {
        Some("cli") => vec![],
        m => multizeta::verify::run(m)
            .into_iter()
            .map(|o| PropertyRecord { module: o.module, property: o.property, passed: o.passed, detail: o.detail })
            .collect(),
    };
    if args.module.as_deref().map_or(true, |m| m == "cli") {
        let (passed, detail) = determinism_check();
        properties.push(PropertyRecord { module: "cli", property: "output determinism", passed, detail });
    }
    let passed = properties.iter().filter(|p| p.passed).count();
    let failed = properties.len() - passed;
    for p in properties.iter().filter(|p| !p.passed) {
        eprintln!("FAIL {}: {} ({})", p.module, p.property, p.detail);
    }
    emit(&args.out, &json(&VerifyRecord { passed, failed, properties }))?;
    if failed > 0 {
        return Err(Failure::Reported);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => run_eval(a, true),
        Command::Continue(a) => run_eval(a, false),
        Command::Poles(a) => run_poles(a),
        Command::Residue(a) => run_residue(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: malformed input: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Reported) => ExitCode::from(1),
    }
}
