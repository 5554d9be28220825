//! `rba`: command-line analysis of reality-based algebras.
//!
//! Exit codes: 0 when every check passes, 1 for a negative mathematical
//! verdict, 2 for input or usage errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rba_core::decomp;
use rba_core::degree;
use rba_core::indicator;
use rba_core::ingest::{from_group, from_scheme, CayleyTable, Scheme};
use rba_core::integrality::{self, build_rank7_example};
use rba_core::quaternion::{self, hilbert_symbol, Place, SplitVerdict};
use rba_core::report::{self, AnalysisReport};
use rba_core::validate::validate;
use rba_core::{Rba, RbaError, Scalar, ToleranceConfig};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "rba", version, about = "Analyze reality-based algebras with positive degree map")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Opts {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Residual tolerance (eps_residual).
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,
    /// Seed for the randomized numerical steps.
    #[arg(long, global = true, env = "RBA_SEED", default_value_t = 0)]
    seed: u64,
    /// Snap the structure constants to rationals and work exactly.
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Work in floating point even for rational input.
    #[arg(long, global = true)]
    float: bool,
    /// Write output to this file (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Full analysis of an .rba, .cayley or .scheme file, `-` for stdin, or
    /// every such file in a directory.
    Analyze { path: String },
    /// Check the axioms only.
    Validate { path: String },
    /// Quaternion symbol of the degree-2 component (one nonreal pair).
    Quaternion { path: String },
    /// Hilbert symbols of two nonzero rationals at the relevant places.
    #[command(allow_negative_numbers = true)]
    Hilbert {
        a: String,
        b: String,
        /// Only this place (a prime or `inf`).
        #[arg(long)]
        place: Option<String>,
    },
    /// Integrality of the structure constants and the rank-7 2-adic check.
    CheckIntegrality { path: String },
    /// Print a bundled example algebra.
    Example {
        #[arg(value_parser = ["rank7"])]
        name: String,
    },
    /// Convert a group Cayley table to .rba.
    FromGroup { path: String },
    /// Convert association-scheme relation matrices to .rba.
    FromScheme { path: String },
}

/// Error carrying the exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<RbaError>() {
            Some(e) if !e.is_input_error() => 1,
            _ => 2,
        };
        Failure { code, err }
    }
}

impl From<RbaError> for Failure {
    fn from(e: RbaError) -> Self {
        anyhow::Error::new(e).into()
    }
}

type CmdResult = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            if let Err(e) = emit(&cli.opts, &text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            match f.err.downcast_ref::<RbaError>() {
                Some(e) => eprintln!("error [{}]: {e}", e.code()),
                None => eprintln!("error: {:#}", f.err),
            }
            ExitCode::from(f.code)
        }
    }
}

fn tolerances(o: &Opts) -> Result<ToleranceConfig, Failure> {
    let mut tol = ToleranceConfig::with_seed(o.seed);
    if let Some(t) = o.tol {
        tol.eps_residual = t;
    }
    tol.validate()?;
    Ok(tol)
}

fn run(cli: &Cli) -> CmdResult {
    let o = &cli.opts;
    let tol = tolerances(o)?;
    match &cli.cmd {
        Cmd::Analyze { path } => analyze(path, o, &tol),
        Cmd::Validate { path } => {
            let rba = load(path, o, &tol)?;
            let rep = validate(&rba, &tol);
            let text = if o.json {
                canonical(&rep)?
            } else {
                let mut s = String::new();
                for c in &rep.checks {
                    s.push_str(&format!(
                        "{:<18} {}  max residual {:e}{}\n",
                        c.name,
                        if c.passed { "ok" } else { "FAIL" },
                        c.max_residual,
                        c.detail.as_deref().map(|d| format!("  {d}")).unwrap_or_default()
                    ));
                }
                s
            };
            Ok((text, rep.passed))
        }
        Cmd::Quaternion { path } => {
            let rba = load(path, o, &tol)?;
            let sym = quaternion::symbol(&rba, &tol)?;
            let ok = sym.overall != SplitVerdict::Division;
            let text = if o.json {
                canonical(&sym)?
            } else {
                let mut s = format!(
                    "pair ({}, {})  a = {}  beta = {}  ({:?})\n",
                    sym.pair.0, sym.pair.1, sym.a, sym.beta, sym.field_mode
                );
                for v in &sym.verdicts {
                    s.push_str(&format!("  (a, beta)_{} = {}\n", v.place, v.value));
                }
                s.push_str(&format!("verdict: {:?}\n", sym.overall));
                s
            };
            Ok((text, ok))
        }
        Cmd::Hilbert { a, b, place } => hilbert(a, b, place.as_deref(), o),
        Cmd::CheckIntegrality { path } => check_integrality(path, o, &tol),
        Cmd::Example { .. } => {
            let ex = build_rank7_example()?;
            let mut text = String::from("# rank-7 algebra with a quaternionic degree-2 component\n");
            text.push_str("# basis: b0 b1 b1* b2 b2* b3 b3*\n");
            text.push_str(&ex.rba.to_rba_string());
            Ok((text, true))
        }
        Cmd::FromGroup { path } => {
            let t = CayleyTable::parse(&read_input(path)?)?;
            Ok((from_group(&t)?.to_rba_string(), true))
        }
        Cmd::FromScheme { path } => {
            let s = Scheme::parse(&read_input(path)?)?;
            Ok((from_scheme(&s)?.to_rba_string(), true))
        }
    }
}

fn analyze(path: &str, o: &Opts, tol: &ToleranceConfig) -> CmdResult {
    let p = Path::new(path);
    if path != "-" && p.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(p)
            .with_context(|| format!("reading {path}"))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|f| matches!(f.extension().and_then(|e| e.to_str()), Some("rba" | "cayley" | "scheme")))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(anyhow!("no .rba, .cayley or .scheme files in {path}").into());
        }
        let mut all_ok = true;
        let mut json = serde_json::Map::new();
        let mut text = String::new();
        for f in files {
            let name = f.display().to_string();
            let rep = analyze_one(&name, o, tol)?;
            all_ok &= rep.passed;
            if o.json {
                json.insert(name, serde_json::to_value(&rep).map_err(anyhow::Error::from)?);
            } else {
                text.push_str(&format!("== {name}\n{}\n", rep.render_text()));
            }
        }
        if o.json {
            text = serde_json::to_string_pretty(&Value::Object(json)).map_err(anyhow::Error::from)? + "\n";
        }
        return Ok((text, all_ok));
    }
    let rep = analyze_one(path, o, tol)?;
    let text = if o.json { rep.to_canonical_json() + "\n" } else { rep.render_text() };
    Ok((text, rep.passed))
}

fn analyze_one(path: &str, o: &Opts, tol: &ToleranceConfig) -> Result<AnalysisReport, Failure> {
    let rba = load(path, o, tol)?;
    Ok(report::analyze(&rba, tol)?)
}

fn hilbert(a: &str, b: &str, place: Option<&str>, o: &Opts) -> CmdResult {
    let parse = |s: &str| -> Result<rba_core::Rational, Failure> {
        match s.parse::<Scalar>() {
            Ok(Scalar::Exact(q)) => Ok(q),
            _ => Err(RbaError::Domain(format!("'{s}' is not a rational number")).into()),
        }
    };
    let (qa, qb) = (parse(a)?, parse(b)?);
    let places = match place {
        Some(p) => vec![p.parse::<Place>()?],
        None => quaternion::relevant_places(&qa, &qb)?,
    };
    let mut values = Vec::new();
    for p in &places {
        values.push((*p, hilbert_symbol(&qa, &qb, *p)?));
    }
    let product = quaternion::hilbert_product(&qa, &qb)?;
    let split = values.iter().all(|(_, v)| *v == 1);
    let verdict = if split { "split" } else { "division" };
    let text = if o.json {
        let mut m = serde_json::Map::new();
        m.insert("a".into(), Value::String(qa.to_string()));
        m.insert("b".into(), Value::String(qb.to_string()));
        let mut pl = serde_json::Map::new();
        for (p, v) in &values {
            pl.insert(p.to_string(), Value::from(*v));
        }
        m.insert("places".into(), Value::Object(pl));
        m.insert("product".into(), Value::from(product));
        m.insert("verdict".into(), Value::String(verdict.into()));
        serde_json::to_string_pretty(&Value::Object(m)).map_err(anyhow::Error::from)? + "\n"
    } else {
        let mut s = String::new();
        for (p, v) in &values {
            s.push_str(&format!("({qa}, {qb})_{p} = {v}\n"));
        }
        s.push_str(&format!("product over all places: {product}\nverdict: {verdict}\n"));
        s
    };
    Ok((text, split))
}

fn check_integrality(path: &str, o: &Opts, tol: &ToleranceConfig) -> CmdResult {
    let rba = load(path, o, tol)?;
    let int = integrality::integral_check(&rba, tol);
    let mut two_adic = None;
    if rba.rank() == 7 && rba.real_count() == 1 {
        let dm = degree::degree_map(&rba, tol)?;
        let (rba, dm) = degree::standardize(&rba, &dm)?;
        let table = decomp::decompose(&rba, &dm, tol)?;
        if table.degrees() == [1, 1, 1, 2] {
            let ind = indicator::fs_indicator(&table, &rba, &dm, tol)?;
            indicator::rank7_trichotomy(&ind)?;
            two_adic = Some(integrality::two_adic_obstruction(&rba, &table)?);
        }
    }
    let text = if o.json {
        let mut m = serde_json::Map::new();
        m.insert("integral".into(), serde_json::to_value(&int).map_err(anyhow::Error::from)?);
        m.insert("two_adic".into(), serde_json::to_value(&two_adic).map_err(anyhow::Error::from)?);
        serde_json::to_string_pretty(&Value::Object(m)).map_err(anyhow::Error::from)? + "\n"
    } else {
        let mut s = format!("integral: {}\n", int.integral);
        for e in int.offending.iter().take(20) {
            s.push_str(&format!("  lambda {} {} {} = {}\n", e.i, e.j, e.k, e.value));
        }
        if int.offending.len() > 20 {
            s.push_str(&format!("  ... {} more\n", int.offending.len() - 20));
        }
        if let Some(t) = &two_adic {
            for r in &t.rows {
                let phi: Vec<String> = r.phi.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!(
                    "character {}: phi = ({})  relation {}  v2 = {:?}\n",
                    r.character,
                    phi.join(", "),
                    if r.relation_holds { "holds" } else { "fails" },
                    r.valuations
                ));
            }
            s.push_str(&format!("2-adic verdict: {:?}\n", t.verdict));
        }
        s
    };
    Ok((text, int.integral))
}

fn canonical<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    let v = serde_json::to_value(v).map_err(anyhow::Error::from)?;
    Ok(serde_json::to_string_pretty(&v).map_err(anyhow::Error::from)? + "\n")
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

enum Kind {
    Rba,
    Cayley,
    Scheme,
}

fn sniff(path: &str, text: &str) -> Kind {
    match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some("cayley") => return Kind::Cayley,
        Some("scheme") => return Kind::Scheme,
        Some("rba") => return Kind::Rba,
        _ => {}
    }
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    match first.split_whitespace().next() {
        Some("order") => Kind::Cayley,
        Some("points") => Kind::Scheme,
        _ => Kind::Rba,
    }
}

fn load(path: &str, o: &Opts, tol: &ToleranceConfig) -> Result<Rba, Failure> {
    let text = read_input(path)?;
    let rba = match sniff(path, &text) {
        Kind::Rba => Rba::parse(&text)?,
        Kind::Cayley => from_group(&CayleyTable::parse(&text)?)?,
        Kind::Scheme => from_scheme(&Scheme::parse(&text)?)?,
    };
    if o.exact {
        return Ok(rba.to_exact(tol.eps_zero)?);
    }
    if o.float {
        return Ok(rba.to_float());
    }
    Ok(rba)
}

fn emit(o: &Opts, text: &str) -> anyhow::Result<()> {
    match &o.out {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Some(path) => write_atomic(path, text)?,
    }
    Ok(())
}

fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| anyhow!("--out needs a file name"))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        bail!("renaming onto {}: {e}", path.display());
    }
    Ok(())
}
