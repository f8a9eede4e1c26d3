//! Command-line front end: argument parsing, file I/O and the text and
//! JSON reports of each command.

pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fermat::sampler::generic_deformation;
use crate::fermat::{dynamic_euler_total, DeformationSpec, DEFAULT_PRECISION};
use crate::gw::GwForm;
use crate::lines::enumerate::{enumerate_lines, DEFAULT_BUDGET};
use crate::lines::normal::{local_index_simple, normalize_line, LinePlane, LineNormalForm};
use crate::lines::oracle::{DoublePoints, Oracle};
use crate::lines::quintic::Quintic;
use crate::par;
use crate::rings::{FieldHandle, GaloisField, GwField, PrimeField, Rationals};
use verify::SuiteReport;

/// Largest random algebra in the trace suite over Q.
pub const Q_TRACE_DIM: usize = 4;

/// Exit code for a completed run whose checks failed.
pub const EXIT_CHECK_FAILED: i32 = 6;

#[derive(Parser, Debug, Clone)]
#[command(name = "gwlines", version, about = "Quadratically enriched line counts on quintic threefolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Q, F<p>, or F<p>^<e>:[c0,...,ce]
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// t-adic precision of the series solver.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Local index <det A> of a line on a quintic.
    Index { quintic: PathBuf, line: PathBuf },
    /// Type of a line from its double points, next to its local index.
    Type { quintic: PathBuf, line: PathBuf },
    /// Randomized property suites.
    Verify {
        #[arg(value_enum)]
        which: Suite,
    },
    /// Dynamic Euler number of the Fermat quintic over F_p.
    Fermat {
        /// Quintic JSON for the deformation direction; random when absent.
        #[arg(long)]
        deformation: Option<PathBuf>,
    },
    /// Census of the lines on a quintic over F_{q^d}, d <= max-degree.
    Enumerate {
        /// Quintic JSON; the Fermat quintic when absent.
        quintic: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        /// Chart points scanned per degree before giving up.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Normal forms and equality of diagonal forms, each given as "a,b,c".
    Gw { forms: Vec<String> },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ResDet,
    Tacnode,
    Cover,
    Theorem,
    Traces,
    Springer,
    Structural,
    Toy,
}

/// Everything a run depends on; equal configs give identical reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub field: Option<String>,
    pub seed: u64,
    pub trials: Option<usize>,
    pub precision: usize,
    pub jobs: usize,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> Self {
        let (command, inputs) = match &cli.command {
            Command::Index { quintic, line } => ("index", vec![quintic.clone(), line.clone()]),
            Command::Type { quintic, line } => ("type", vec![quintic.clone(), line.clone()]),
            Command::Verify { .. } => ("verify", vec![]),
            Command::Fermat { deformation } => ("fermat", deformation.iter().cloned().collect()),
            Command::Enumerate { quintic, .. } => ("enumerate", quintic.iter().cloned().collect()),
            Command::Gw { .. } => ("gw", vec![]),
        };
        RunConfig {
            command: command.into(),
            inputs,
            out: cli.out.clone(),
            field: cli.field.clone(),
            seed: cli.seed,
            trials: cli.trials,
            precision: cli.precision,
            jobs: cli.jobs,
        }
    }
}

/// A finished run: text for stdout, the JSON report, and the exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, code: 0 }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let loc = path.display().to_string();
    let s = fs::read_to_string(path).map_err(|e| Error::Parse { location: loc.clone(), message: e.to_string() })?;
    serde_json::from_str(&s).map_err(|e| Error::Parse {
        location: format!("{loc}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// `--field` if given, else the quintic's own field entry.
fn field_of(cli: &Cli, quintic: &Value) -> Result<FieldHandle> {
    match (cli.field.as_deref(), quintic.get("field").and_then(Value::as_str)) {
        (Some(f), _) | (None, Some(f)) => FieldHandle::parse(f),
        (None, None) => Err(Error::Parse { location: "quintic".into(), message: "no field given".into() }),
    }
}

fn prime_of(cli: &Cli, default: u64) -> Result<u64> {
    match cli.field.as_deref().map(FieldHandle::parse).transpose()? {
        None => Ok(default),
        Some(FieldHandle::PrimeField(p)) => Ok(p),
        Some(h) => Err(Error::Unsupported(format!("{h}: this command needs a prime field"))),
    }
}

fn show_forms<F: GwField>(k: &F, p: &[crate::binforms::BinaryForm<F::Elem>; 3]) -> Vec<String> {
    p.iter().map(|f| format!("[{}]", f.coeffs.iter().map(|c| k.format(c)).collect::<Vec<_>>().join(", "))).collect()
}

fn load_line<F: GwField>(k: &F, quintic: &Value, line: &Path) -> Result<LineNormalForm<F>> {
    let f = Quintic::from_json(k, quintic)?;
    let l = LinePlane::from_json(k, &read_json(line)?)?;
    normalize_line(&f, &l)
}

fn index_report<F: GwField>(k: &F, quintic: &Value, line: &Path) -> Result<Outcome> {
    let nf = load_line(k, quintic, line)?;
    let forms = show_forms(k, &nf.p);
    let d = nf.det_a();
    let mut text = format!("field {}\n", k.handle());
    for (i, f) in forms.iter().enumerate() {
        text += &format!("P{} = {f}\n", i + 1);
    }
    text += &format!("det A = {}\n", k.format(&d));
    let idx = local_index_simple(&nf)?;
    let class = k.class_rep(&d)?;
    text += &format!("square class <{}>\nlocal index {idx}\n", k.format(&class));
    let json = json!({
        "field": k.handle().to_string(),
        "p": forms,
        "det_a": k.format(&d),
        "class": k.format(&class),
        "index": idx.to_json(),
    });
    Ok(Outcome::ok(text, json))
}

fn cmd_index(cli: &Cli, quintic: &Path, line: &Path) -> Result<Outcome> {
    let q = read_json(quintic)?;
    match field_of(cli, &q)? {
        FieldHandle::Rationals => index_report(&Rationals, &q, line),
        FieldHandle::PrimeField(p) => index_report(&PrimeField::new(p)?, &q, line),
        h => index_report(&GaloisField::from_handle(&h)?, &q, line),
    }
}

fn cmd_type(cli: &Cli, quintic: &Path, line: &Path) -> Result<Outcome> {
    let q = read_json(quintic)?;
    let p = match field_of(cli, &q)? {
        FieldHandle::PrimeField(p) => p,
        h => return Err(Error::Unsupported(format!("{h}: the double-point search runs over prime fields"))),
    };
    let oracle = Oracle::new(p)?;
    let k = oracle.prime_field().clone();
    let nf = load_line(&k, &q, line)?;
    let idx = local_index_simple(&nf)?;
    let mut text = String::new();
    let points = match oracle.double_points(&nf.p)? {
        DoublePoints::Orbits(orbits) => {
            for o in &orbits {
                text += &format!(
                    "double point orbit: degree {}, multiplicity {}, norm of alpha {}{}\n",
                    o.residue_degree,
                    o.multiplicity,
                    o.norm,
                    if o.cusp { ", cusp" } else { "" }
                );
            }
            orbits
                .iter()
                .map(|o| json!({"degree": o.residue_degree, "multiplicity": o.multiplicity, "norm": o.norm, "cusp": o.cusp}))
                .collect::<Vec<_>>()
        }
        DoublePoints::Cover { q1, q2 } => {
            text += &format!("Gauss map factors through the cover ({:?} : {:?})\n", q1.coeffs, q2.coeffs);
            vec![json!({"cover": [q1.coeffs, q2.coeffs]})]
        }
    };
    let ty = oracle.type_of_line(&nf.p)?;
    let agree = ty.equals(&idx)?;
    text += &format!("type {ty}\nlocal index {idx}\nagree: {agree}\n");
    let json = json!({"field": k.handle().to_string(), "double_points": points, "type": ty.to_json(), "index": idx.to_json(), "agree": agree});
    Ok(Outcome { text, json, code: if agree { 0 } else { EXIT_CHECK_FAILED } })
}

fn generic_suite(cli: &Cli, which: Suite, trials: usize) -> Result<SuiteReport> {
    let field = cli.field.as_deref().unwrap_or("F7");
    let seed = cli.seed;
    macro_rules! each_field {
        ($f:path $(, $extra:expr)*) => {
            verify::over_field(
                field,
                |k, s| $f(k, trials, seed, $($extra,)* s),
                |k, s| $f(k, trials, seed, $($extra,)* s),
                |k, s| $f(k, trials, seed, $($extra,)* s),
            )
        };
    }
    match which {
        Suite::ResDet => each_field!(verify::res_det),
        Suite::Tacnode => each_field!(verify::tacnode),
        Suite::Cover => each_field!(verify::cover),
        Suite::Structural => each_field!(verify::structural),
        Suite::Traces => match FieldHandle::parse(field)? {
            FieldHandle::Rationals => {
                Ok(verify::traces(&Rationals, trials, seed, Q_TRACE_DIM, &verify::rational_sampler(), &verify::small_integer_sampler()))
            }
            _ => verify::over_field(
                field,
                |_, _| unreachable!(),
                |k, s| verify::traces(k, trials, seed, 25, s, s),
                |k, s| verify::traces(k, trials, seed, 25, s, s),
            ),
        },
        _ => unreachable!("prime-field suites are dispatched separately"),
    }
}

fn cmd_verify(cli: &Cli, which: Suite) -> Result<Outcome> {
    let trials = cli.trials.unwrap_or(match which {
        Suite::ResDet => 500,
        Suite::Theorem | Suite::Tacnode | Suite::Cover | Suite::Structural => 200,
        Suite::Springer => 100,
        Suite::Traces => 50,
        Suite::Toy => 20,
    });
    let report = match which {
        Suite::Theorem => verify::theorem(prime_of(cli, 7)?, trials, cli.seed)?,
        Suite::Springer => verify::springer(prime_of(cli, 7)?, trials, cli.seed)?,
        Suite::Toy => verify::toy(prime_of(cli, 7)?, trials, cli.seed)?,
        _ => generic_suite(cli, which, trials)?,
    };
    let code = if report.passed() { 0 } else { EXIT_CHECK_FAILED };
    Ok(Outcome { text: format!("{report}\n"), json: report.to_json(), code })
}

fn cmd_fermat(cli: &Cli, deformation: Option<&Path>) -> Result<Outcome> {
    let p = prime_of(cli, 7)?;
    let mut spec = match deformation {
        Some(path) => {
            let fp = PrimeField::new(p)?;
            DeformationSpec::new(Quintic::from_json(&fp, &read_json(path)?)?, cli.seed)?
        }
        None => generic_deformation(p, cli.seed)?,
    };
    spec.precision = cli.precision;
    let report = dynamic_euler_total(&spec)?;
    let mut text = String::from("kind  variety  degree  lines  valuation  traced class\n");
    for o in &report.orbits {
        text += &format!(
            "{}  {}  {}  {}  {}  {}\n",
            o.kind.name(),
            o.label,
            o.factor_degree,
            o.lines,
            o.valuation,
            o.traced
        );
    }
    text += "distinguished varieties:\n";
    for d in &report.indices {
        text += &format!("  {}: {}\n", d.label, d.index);
    }
    text += &report.to_string();
    let code = if report.all_checks_pass() { 0 } else { EXIT_CHECK_FAILED };
    Ok(Outcome { text, json: report.to_json(), code })
}

fn cmd_enumerate(cli: &Cli, quintic: Option<&Path>, max_degree: usize, budget: u64) -> Result<Outcome> {
    let (fp, f) = match quintic {
        Some(path) => {
            let q = read_json(path)?;
            let fp = match field_of(cli, &q)? {
                FieldHandle::PrimeField(p) => PrimeField::new(p)?,
                h => return Err(Error::Unsupported(format!("{h}: enumeration takes a quintic over a prime field"))),
            };
            let f = Quintic::from_json(&fp, &q)?;
            (fp, f)
        }
        None => {
            let fp = PrimeField::new(prime_of(cli, 11)?)?;
            let f = Quintic::fermat(&fp);
            (fp, f)
        }
    };
    let census = enumerate_lines(&f, max_degree, budget)?;
    let mut text = format!("lines over extensions of {} of degree <= {max_degree}\n", crate::rings::GwField::handle(&fp));
    for l in &census.lines {
        let idx = match &l.index {
            Ok(g) => g.to_string(),
            Err(rel) => format!("not simple: {rel}"),
        };
        text += &format!("degree {} span {:?} index {idx}\n", l.degree, l.span);
    }
    text += &format!("geometric lines {}, running sum {}\n", census.geometric_count, census.sum);
    if let Some(t) = &census.truncated {
        text += &format!("PARTIAL: {t}\n");
    }
    Ok(Outcome::ok(text, census.to_json()))
}

fn gw_report<F: GwField>(k: &F, forms: &[String]) -> Result<Outcome> {
    let parsed = forms
        .iter()
        .map(|s| {
            let entries = s.split(',').filter(|e| !e.trim().is_empty()).map(|e| k.parse(e.trim())).collect::<Result<Vec<_>>>()?;
            GwForm::diag(k, &entries)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    let mut out = Vec::new();
    for (s, g) in forms.iter().zip(&parsed) {
        let inv = g.invariants();
        text += &format!("<{s}> = {g}  rank {} disc {}", inv.rank, inv.disc);
        if let Some(sig) = inv.signature {
            text += &format!(" signature {sig}");
        }
        text += "\n";
        out.push(json!({"input": s, "form": g.to_json(), "display": g.to_string(), "invariants": inv.to_json()}));
    }
    let mut json = json!({"field": k.handle().to_string(), "forms": out});
    if let [a, b] = parsed.as_slice() {
        let eq = a.equals(b)?;
        text += &format!("equal: {eq}\n");
        json["equal"] = json!(eq);
    }
    Ok(Outcome::ok(text, json))
}

fn cmd_gw(cli: &Cli, forms: &[String]) -> Result<Outcome> {
    match FieldHandle::parse(cli.field.as_deref().unwrap_or("Q"))? {
        FieldHandle::Rationals => gw_report(&Rationals, forms),
        FieldHandle::PrimeField(p) => gw_report(&PrimeField::new(p)?, forms),
        h => gw_report(&GaloisField::from_handle(&h)?, forms),
    }
}

/// Runs the parsed command on a pool of `--jobs` threads.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    par::with_jobs(cli.jobs, || match &cli.command {
        Command::Index { quintic, line } => cmd_index(cli, quintic, line),
        Command::Type { quintic, line } => cmd_type(cli, quintic, line),
        Command::Verify { which } => cmd_verify(cli, *which),
        Command::Fermat { deformation } => cmd_fermat(cli, deformation.as_deref()),
        Command::Enumerate { quintic, max_degree, budget } => cmd_enumerate(cli, quintic.as_deref(), *max_degree, *budget),
        Command::Gw { forms } => cmd_gw(cli, forms),
    })
}

/// Parses `args`, runs, prints, writes `--out`, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.text);
            if let Some(path) = &cli.out {
                let body = serde_json::to_string_pretty(&o.json).expect("reports serialize");
                if let Err(e) = fs::write(path, body + "\n") {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 5;
                }
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("gwlines").chain(args.iter().copied())).unwrap()
    }

    fn temp(name: &str, body: &Value) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("gwlines-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        fs::write(&path, body.to_string()).unwrap();
        path
    }

    #[test]
    fn verify_is_deterministic() {
        let a = execute(&cli(&["verify", "res-det", "--field", "F7", "--trials", "20", "--seed", "4"])).unwrap();
        let b = execute(&cli(&["verify", "res-det", "--field", "F7", "--trials", "20", "--seed", "4"])).unwrap();
        assert_eq!(a.json.to_string(), b.json.to_string());
        assert_eq!(a.code, 0);
        assert_eq!(RunConfig::from(&cli(&["verify", "toy", "--seed", "4"])).command, "verify");
    }

    #[test]
    fn fermat_mult5_line_is_not_simple() {
        let k = PrimeField::new(11).unwrap();
        let f = temp("fermat.json", &Quintic::fermat(&k).to_json());
        // x0 = -x1, x2 = -x3 on x^5 summing to zero
        let line = temp("line.json", &json!({"span": [["1", "10", "0", "0", "0"], ["0", "0", "1", "10", "0"]]}));
        let err = execute(&cli(&["index", f.to_str().unwrap(), line.to_str().unwrap()])).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let off = temp("off.json", &json!({"span": [["1", "0", "0", "0", "0"], ["0", "1", "0", "0", "0"]]}));
        assert_eq!(execute(&cli(&["index", f.to_str().unwrap(), off.to_str().unwrap()])).unwrap_err().exit_code(), 2);
        let bad = temp("bad.json", &json!({"terms": 3}));
        assert_eq!(execute(&cli(&["index", bad.to_str().unwrap(), line.to_str().unwrap(), "--field", "F11"])).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn gw_compares_forms() {
        let o = execute(&cli(&["gw", "--field", "F7", "1,3", "1,-1"])).unwrap();
        assert_eq!(o.json["equal"], json!(true));
        let o = execute(&cli(&["gw", "1,1", "1,-1"])).unwrap();
        assert_eq!(o.json["equal"], json!(false));
    }
}
