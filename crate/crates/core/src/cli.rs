//! Command-line front end. [`run`] parses arguments and returns the exit code
//! together with the text that would go to stdout, so it can be driven from tests.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chow::{ChowModel, ModelFile};
use crate::error::{Error, Result};
use crate::polar::checks::morse_check;
use crate::polar::{curve_volume, derivative_fd_check, zariski, PolarOptions};
use crate::presets::{preset, PRESET_NAMES};
use crate::rational::{self, QVec};
use crate::toric::{fan_file_to_chow, FanFile};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_MATH: i32 = 3;

/// Column order of `sweep` output.
pub const SWEEP_HEADER_PREFIX: &str = "t,volhat";

#[derive(Parser, Debug)]
#[command(name = "conezar", version, about = "Curve volumes, Zariski decompositions and polar transforms on cones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Built-in model (see `conezar presets`).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Model JSON file.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Relative tolerance for boundary decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, env = "CONEZAR_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 8)]
    pub multistart: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert a fan JSON file into a model file.
    Fan2chow { fan: PathBuf },
    /// List the built-in models.
    Presets,
    /// vol^ of a curve class.
    Volume {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Zariski decomposition of a big curve class.
    Zariski {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// d/dt vol^(α + tβ) at t = 0, with a finite-difference cross-check.
    Derivative {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Morse-type bigness criterion vol^(α) − n·B·β.
    Morse {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// vol^, B and the directional derivative along α + t·dir.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Run the acceptance suites.
    VerifyPaper {
        /// Suite name or criterion number; all suites when omitted.
        #[arg(long)]
        suite: Option<String>,
    },
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn from_error(e: &Error) -> Self {
        let code = if e.is_config() { EXIT_CONFIG } else { EXIT_MATH };
        Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(&e),
    };
    if let Some(path) = &cli.global.out {
        if let Err(e) = fs::write(path, &out.stdout) {
            return Outcome::from_error(&Error::Io(e));
        }
        out.stdout.clear();
    }
    out
}

struct Vector {
    f: Vec<f64>,
    exact: Option<QVec>,
}

/// Comma-separated decimals or `p/q` rationals; exact when every entry is rational.
fn parse_vector(s: &str, m: &ChowModel) -> Result<Vector> {
    let exact = rational::parse_qvec(s).ok();
    let f: Vec<f64> = match &exact {
        Some(q) => rational::to_f64_vec(q),
        None => s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{x}'"))))
            .collect::<Result<_>>()?,
    };
    if f.len() != m.rho() {
        return Err(Error::DimensionMismatch { expected: m.rho(), got: f.len() });
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("non-finite entry in '{s}'")));
    }
    Ok(Vector { f, exact })
}

fn load_model(g: &Global) -> Result<ChowModel> {
    match (&g.preset, &g.model) {
        (Some(p), None) => preset(p),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let file: ModelFile = serde_json::from_str(&text)?;
            ChowModel::from_file(&file).map_err(|e| match e {
                Error::InvalidModel(s) => Error::Parse(format!("model file: {s}")),
                other => other,
            })
        }
        (Some(_), Some(_)) => Err(Error::Parse("give exactly one of --preset and --model".into())),
        (None, None) => Err(Error::Parse("a model is required: --preset NAME or --model FILE".into())),
    }
}

fn options(g: &Global) -> PolarOptions {
    PolarOptions { tol: g.tol, ..PolarOptions::default() }.with_seed(g.seed).with_multistart(g.multistart)
}

/// Rounds to 12 significant digits and prints the shortest representation,
/// in exponent form outside `[1e-4, 1e15)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn render<T: Serialize>(value: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
        Format::Csv | Format::Pretty => {
            let v = serde_json::to_value(value)?;
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            let sep = if format == Format::Csv { "," } else { " = " };
            let mut s = if format == Format::Csv { "key,value\n".to_string() } else { String::new() };
            for (k, val) in rows {
                s.push_str(&format!("{k}{sep}{val}\n"));
            }
            Ok(s)
        }
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    use serde_json::Value;
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(xs) if xs.iter().all(|x| x.is_number()) => {
            let s = xs.iter().map(|x| sig12(x.as_f64().unwrap_or(f64::NAN))).collect::<Vec<_>>().join(" ");
            out.push((prefix.to_string(), s));
        }
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::Number(n) => out.push((prefix.to_string(), sig12(n.as_f64().unwrap_or(f64::NAN)))),
        other => out.push((prefix.to_string(), other.to_string().trim_matches('"').to_string())),
    }
}

#[derive(Serialize)]
struct VolumeOut<'a> {
    alpha: &'a [f64],
    volhat: f64,
    #[serde(rename = "B")]
    b: Vec<f64>,
    spread: f64,
    kkt_margin: f64,
    restarts: usize,
    seed: u64,
}

#[derive(Serialize)]
struct DerivativeOut<'a> {
    alpha: &'a [f64],
    beta: &'a [f64],
    derivative: f64,
    fd_steps: Vec<(f64, f64, f64)>,
    fd_passed: bool,
}

#[derive(Serialize)]
struct MorseOut<'a> {
    alpha: &'a [f64],
    beta: &'a [f64],
    #[serde(flatten)]
    report: crate::polar::checks::MorseReport,
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let opts = options(g);
    match &cli.command {
        Command::Fan2chow { fan } => {
            let text = fs::read_to_string(fan)?;
            let ff: FanFile = serde_json::from_str(&text)?;
            let m = fan_file_to_chow(&ff)?;
            Ok(Outcome::ok(serde_json::to_string_pretty(&m.to_file())? + "\n"))
        }
        Command::Presets => Ok(Outcome::ok(PRESET_NAMES.join("\n") + "\n")),
        Command::Volume { alpha } => {
            let m = load_model(g)?;
            let a = parse_vector(alpha, &m)?;
            let r = curve_volume(&m, &a.f, &opts)?;
            let out = VolumeOut {
                alpha: &a.f,
                volhat: r.value,
                b: r.minimizer,
                spread: r.spread,
                kkt_margin: r.kkt_margin,
                restarts: r.restarts.len(),
                seed: g.seed,
            };
            Ok(Outcome::ok(render(&out, g.format)?))
        }
        Command::Zariski { alpha } => {
            let m = load_model(g)?;
            let a = parse_vector(alpha, &m)?;
            let z = zariski(&m, &a.f, a.exact.as_deref(), &opts)?;
            Ok(Outcome::ok(render(&z, g.format)?))
        }
        Command::Derivative { alpha, beta } => {
            let m = load_model(g)?;
            let a = parse_vector(alpha, &m)?;
            let b = parse_vector(beta, &m)?;
            let fd = derivative_fd_check(&m, &a.f, &b.f, &opts)?;
            let out = DerivativeOut { alpha: &a.f, beta: &b.f, derivative: fd.analytic, fd_passed: fd.passed, fd_steps: fd.steps };
            Ok(Outcome::ok(render(&out, g.format)?))
        }
        Command::Morse { alpha, beta } => {
            let m = load_model(g)?;
            let a = parse_vector(alpha, &m)?;
            let b = parse_vector(beta, &m)?;
            if m.mov_curve().margin(&b.f) < -g.tol {
                return Err(Error::InvalidModel("β must be a movable curve class".into()));
            }
            let exact = a.exact.as_deref().zip(b.exact.as_deref());
            let report = morse_check(&m, &a.f, &b.f, exact, &opts)?;
            Ok(Outcome::ok(render(&MorseOut { alpha: &a.f, beta: &b.f, report }, g.format)?))
        }
        Command::Sweep { alpha, dir, t0, t1, steps } => {
            let m = load_model(g)?;
            let a = parse_vector(alpha, &m)?;
            let d = parse_vector(dir, &m)?;
            Ok(Outcome::ok(sweep(&m, &a.f, &d.f, *t0, *t1, *steps, &opts)?))
        }
        Command::VerifyPaper { suite } => {
            let cfg = VerifyConfig { seed: g.seed, opts: opts.clone() };
            let reports = match suite {
                Some(s) => {
                    let r = verify::run_suite(s, &cfg).ok_or_else(|| {
                        Error::Parse(format!("unknown suite '{s}'; known: {}", verify::suite_names().join(", ")))
                    })?;
                    vec![r]
                }
                None => verify::run_all(&cfg),
            };
            let passed = reports.iter().all(|r| r.passed);
            let text = match g.format {
                Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
                Format::Csv => {
                    let mut s = "criterion,suite,check,passed,detail\n".to_string();
                    for r in &reports {
                        for c in &r.checks {
                            s.push_str(&format!(
                                "{},{},{},{},{}\n",
                                r.criterion,
                                r.name,
                                csv_field(&c.name),
                                c.passed,
                                csv_field(&c.detail)
                            ));
                        }
                    }
                    s
                }
                Format::Pretty => {
                    let mut s = String::new();
                    for r in &reports {
                        s.push_str(&r.summary_line());
                        s.push('\n');
                        for c in &r.checks {
                            let mark = if c.passed { "ok  " } else { "FAIL" };
                            s.push_str(&format!("      {mark} {}: {}\n", c.name, c.detail));
                        }
                    }
                    s
                }
            };
            Ok(Outcome { code: if passed { EXIT_OK } else { EXIT_VERIFY }, stdout: text, stderr: String::new() })
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with header `t,volhat,B1..Bρ,derivative`; classes that are not big get
/// `vol^ = 0`, empty `B` and a `nan` derivative.
pub fn sweep(m: &ChowModel, alpha: &[f64], dir: &[f64], t0: f64, t1: f64, steps: usize, opts: &PolarOptions) -> Result<String> {
    if steps == 0 {
        return Err(Error::Parse("--steps must be positive".into()));
    }
    let rho = m.rho();
    let n = m.n() as f64;
    let mut s = String::from(SWEEP_HEADER_PREFIX);
    for i in 1..=rho {
        s.push_str(&format!(",B{i}"));
    }
    s.push_str(",derivative\n");
    for k in 0..=steps {
        let t = t0 + (t1 - t0) * k as f64 / steps as f64;
        let a: Vec<f64> = alpha.iter().zip(dir).map(|(x, d)| x + t * d).collect();
        let row: Vec<String> = match zariski(m, &a, None, opts) {
            Ok(z) => {
                let mut r = vec![sig12(t), sig12(z.value)];
                r.extend(z.b.iter().map(|x| sig12(*x)));
                r.push(sig12(n / (n - 1.0) * m.pair(&z.b, dir)));
                r
            }
            Err(Error::NotBig { .. }) => {
                let v = curve_volume(m, &a, opts).map(|r| r.value).unwrap_or(0.0);
                let mut r = vec![sig12(t), sig12(v)];
                r.extend(std::iter::repeat_n(String::new(), rho));
                r.push("nan".into());
                r
            }
            Err(e) => return Err(e),
        };
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(3.5), "3.5");
        assert_eq!(sig12(-2.0e-20), "-2e-20");
        assert_eq!(sig12(2.220446049250313e-16), "2.22044604925e-16");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn missing_model_is_config_error() {
        let o = run(["conezar", "volume", "--alpha", "1,1"]);
        assert_eq!(o.code, EXIT_CONFIG);
        let o = run(["conezar", "volume", "--preset", "proj-bundle-p1", "--alpha", "1,1,1"]);
        assert_eq!(o.code, EXIT_CONFIG);
    }

    #[test]
    fn non_big_is_math_error() {
        let o = run(["conezar", "zariski", "--preset", "proj-bundle-p1", "--alpha", "1,0"]);
        assert_eq!(o.code, EXIT_MATH, "{}", o.stderr);
    }
}
