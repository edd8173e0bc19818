use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use constcoef::connection::{christoffel_from_chart, curvature, torsion, Connection};
use constcoef::detector::{
    counting, detect, detect_conformal, joined_counts, verify_witness, ChartWitness, DetectConfig,
    Kind, Object,
};
use constcoef::exterior::{
    exterior_derivative, interior_form_vec, interior_vec_form, iota_pq, iota_star_qp,
    schouten_bracket,
};
use constcoef::oracle::{negative_corpus, positive_corpus};
use constcoef::{DiffForm, MultiVector};
use serde_json::{json, Value};

use crate::parse::{parse_chart, parse_connection, parse_form, parse_object, parse_point};

/// Exit code for usage, parse and I/O errors.
pub const ERROR_EXIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "constcoef",
    version,
    about = "Exterior calculus and constant-coefficient detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exterior derivative of a form.
    D(Flags),
    /// Wedge product of two objects of the same variance.
    Wedge(Flags),
    /// Interior product of a degree-1 object into an object of the dual variance.
    Ip(Flags),
    /// Schouten-Nijenhuis bracket of two multivectors.
    Sn(Flags),
    /// Volume duality between q-vectors and (n-q)-forms.
    Iota(Flags),
    /// Christoffel symbols of a chart.
    Christoffel(Flags),
    /// Torsion and curvature of a chart connection or a Gamma dump.
    Curvature(Flags),
    /// Decide whether an object has constant coefficients in some chart.
    Detect(Flags),
    /// Decide conformal constancy (constant up to a nonvanishing factor).
    DetectConformal(Flags),
    /// Equation and unknown counts of the Christoffel systems.
    Counting(Flags),
    /// Check that a supplied chart makes the coefficients constant.
    VerifyChart(Flags),
    /// Write labeled corpus samples.
    OracleGen(Flags),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Form,
    Vector,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Number of variables.
    #[arg(long)]
    pub n: usize,
    /// Object text, or `@path` to read it from a file. Repeatable.
    #[arg(long = "input", allow_hyphen_values = true)]
    pub inputs: Vec<String>,
    /// Chart file, `@path`.
    #[arg(long)]
    pub chart: Option<String>,
    /// Base point, e.g. `0,1/2,-3`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Random sample points for rank tests.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    /// Volume form or top multivector for `iota`; derivation-law form for `detect`.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    #[arg(long)]
    pub deg: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = CorpusKind::Form)]
    pub kind: CorpusKind,
    /// Generate certified non-constant samples.
    #[arg(long)]
    pub negative: bool,
    /// Directory for corpus files; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(text.to_string()),
    }
}

impl Flags {
    fn input(&self, k: usize) -> Result<Object> {
        let text = self
            .inputs
            .get(k)
            .ok_or_else(|| anyhow!("missing --input #{}", k + 1))?;
        Ok(parse_object(read_arg(text)?.trim(), self.n)?)
    }

    fn chart(&self) -> Result<Option<ChartWitness>> {
        match &self.chart {
            None => Ok(None),
            Some(text) => Ok(Some(parse_chart(&read_arg(text)?, self.n)?)),
        }
    }

    fn config(&self) -> Result<DetectConfig> {
        let base = match &self.point {
            Some(p) => Some(parse_point(p, self.n)?),
            None => None,
        };
        let derivation_form = match &self.omega {
            Some(t) => Some(parse_form(read_arg(t)?.trim(), self.n)?),
            None => None,
        };
        Ok(DetectConfig {
            chart: self.chart()?,
            base,
            samples: self.samples,
            seed: self.seed,
            derivation_form,
            ..DetectConfig::default()
        })
    }

    fn render(&self, command: &str, result: String) -> Output {
        if self.json {
            let doc = json!({ "schema": 1, "command": command, "result": result });
            Output::ok(pretty(&doc))
        } else {
            Output::ok(format!("{result}\n"))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn exact_chart(flags: &Flags) -> Result<constcoef::Chart> {
    match flags.chart()? {
        Some(ChartWitness::Exact(c)) => Ok(c),
        Some(ChartWitness::Formal(_)) => bail!("chart file has no inverse lines"),
        None => bail!("--chart is required"),
    }
}

fn full_blade(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::D(f) => match f.input(0)? {
            Object::Form(a) => Ok(f.render("d", exterior_derivative(&a).to_string())),
            Object::MultiVector(_) => bail!("d applies to forms"),
        },
        Command::Wedge(f) => {
            let out = match (f.input(0)?, f.input(1)?) {
                (Object::Form(a), Object::Form(b)) => a.wedge(&b)?.to_string(),
                (Object::MultiVector(a), Object::MultiVector(b)) => a.wedge(&b)?.to_string(),
                _ => bail!("wedge needs two objects of the same variance"),
            };
            Ok(f.render("wedge", out))
        }
        Command::Ip(f) => {
            let out = match (f.input(0)?, f.input(1)?) {
                (Object::MultiVector(x), Object::Form(a)) => interior_vec_form(&x, &a)?.to_string(),
                (Object::Form(w), Object::MultiVector(v)) => interior_form_vec(&w, &v)?.to_string(),
                _ => bail!("ip needs a degree-1 object and an object of the dual variance"),
            };
            Ok(f.render("ip", out))
        }
        Command::Sn(f) => match (f.input(0)?, f.input(1)?) {
            (Object::MultiVector(a), Object::MultiVector(b)) => {
                Ok(f.render("sn", schouten_bracket(&a, &b)?.to_string()))
            }
            _ => bail!("sn needs two multivectors"),
        },
        Command::Iota(f) => {
            let n = f.n;
            let omega = match &f.omega {
                Some(t) => Some(parse_object(read_arg(t)?.trim(), n)?),
                None => None,
            };
            let out = match (f.input(0)?, omega) {
                (Object::MultiVector(v), None) => {
                    iota_pq(&v, &DiffForm::basis(n, &full_blade(n))?)?.to_string()
                }
                (Object::MultiVector(v), Some(Object::Form(vol))) => iota_pq(&v, &vol)?.to_string(),
                (Object::Form(w), None) => {
                    iota_star_qp(&w, &MultiVector::basis(n, &full_blade(n))?)?.to_string()
                }
                (Object::Form(w), Some(Object::MultiVector(top))) => {
                    iota_star_qp(&w, &top)?.to_string()
                }
                _ => bail!("--omega must have the variance dual to the input"),
            };
            Ok(f.render("iota", out))
        }
        Command::Christoffel(f) => {
            let conn = christoffel_from_chart(&exact_chart(f)?);
            Ok(f.render("christoffel", conn.to_dump_string().trim_end().to_string()))
        }
        Command::Curvature(f) => {
            let conn: Connection = if f.chart.is_some() {
                christoffel_from_chart(&exact_chart(f)?)
            } else {
                let text = f
                    .inputs
                    .first()
                    .ok_or_else(|| anyhow!("--chart or --input <Gamma dump> required"))?;
                parse_connection(&read_arg(text)?, f.n)?
            };
            let mut lines = Vec::new();
            let t = torsion(&conn);
            if t.is_zero() {
                lines.push("torsion = 0".to_string());
            }
            for ((a, b, c), p) in t.nonzero() {
                lines.push(format!("T[{a}][{b}][{c}] = {p}"));
            }
            let r = curvature(&conn);
            if r.is_zero() {
                lines.push("curvature = 0".to_string());
            }
            for ((a, b, c, d), p) in r.nonzero() {
                lines.push(format!("R[{a}][{b}][{c}][{d}] = {p}"));
            }
            Ok(f.render("curvature", lines.join("\n")))
        }
        Command::Detect(f) | Command::DetectConformal(f) => {
            let obj = f.input(0)?;
            let cfg = f.config()?;
            let report = if matches!(cli.command, Command::Detect(_)) {
                detect(&obj, &cfg)?
            } else {
                detect_conformal(&obj, &cfg)?
            };
            let stdout = if f.json {
                pretty(&report.to_json())
            } else {
                report.to_string()
            };
            Ok(Output {
                stdout,
                code: report.exit_code(),
            })
        }
        Command::Counting(f) => {
            let deg = f.deg.ok_or_else(|| anyhow!("--deg is required"))?;
            let c = counting(f.n, deg)?;
            let j = joined_counts(f.n);
            if f.json {
                let doc = json!({
                    "schema": 1,
                    "n": c.n,
                    "deg": c.deg,
                    "rows_first_order": c.rows_first_order,
                    "rows_second_order": c.rows_second_order,
                    "unknowns_gamma": c.unknowns_gamma,
                    "unknowns_gamma_symmetric": c.unknowns_gamma_symmetric,
                    "unknowns_v": c.unknowns_v,
                    "comparisons": c.comparisons.iter().map(|k| json!({
                        "name": k.name,
                        "lhs": k.lhs,
                        "rhs": k.rhs,
                        "relation": k.relation.symbol(),
                        "holds": k.holds(),
                    })).collect::<Vec<_>>(),
                    "joined": { "equations": j.joined_equations, "unknowns": j.joined_unknowns },
                });
                return Ok(Output::ok(pretty(&doc)));
            }
            Ok(Output::ok(format!(
                "{c}(n-1)-vector system joined with prolongation and curvature: {} equations, {} unknowns\n",
                j.joined_equations, j.joined_unknowns
            )))
        }
        Command::VerifyChart(f) => {
            let obj = f.input(0)?;
            let chart = f.chart()?.ok_or_else(|| anyhow!("--chart is required"))?;
            let base = f.config()?.base_point(f.n)?;
            let check = verify_witness(&obj, &chart, &base)?;
            let mut s = format!("constant: {}\n", check.constant);
            if let Some(e) = &check.expressed {
                s.push_str(&format!("expressed: {e}\n"));
            }
            s.push_str(&format!("residual: {}\n", check.residual));
            if f.json {
                let doc = json!({
                    "schema": 1,
                    "constant": check.constant,
                    "expressed": check.expressed.as_ref().map(ToString::to_string),
                    "residual": check.residual.to_string(),
                });
                s = pretty(&doc);
            }
            Ok(Output {
                stdout: s,
                code: if check.constant { 0 } else { 1 },
            })
        }
        Command::OracleGen(f) => {
            let deg = f.deg.ok_or_else(|| anyhow!("--deg is required"))?;
            let kind = match f.kind {
                CorpusKind::Form => Kind::Form,
                CorpusKind::Vector => Kind::MultiVector,
            };
            let samples = if f.negative {
                negative_corpus(f.n, kind, deg, f.count, f.seed)?
            } else {
                positive_corpus(f.n, kind, deg, f.count, f.seed)?
            };
            let dumps: Vec<String> = samples.iter().map(|s| s.to_dump_string()).collect();
            match &f.out {
                Some(dir) => {
                    write_corpus(dir, &dumps)?;
                    Ok(Output::ok(format!(
                        "wrote {} samples to {}\n",
                        dumps.len(),
                        dir.display()
                    )))
                }
                None => Ok(Output::ok(dumps.join("---\n"))),
            }
        }
    }
}

fn write_corpus(dir: &Path, dumps: &[String]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (k, d) in dumps.iter().enumerate() {
        let path = dir.join(format!("sample_{k:04}.txt"));
        fs::write(&path, d).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Errors become
/// exit code [`ERROR_EXIT`] with the message on `Err`.
pub fn run_args<I, T>(args: I) -> std::result::Result<Output, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Output::ok(e.to_string())),
                _ => Err((ERROR_EXIT, e.to_string())),
            };
        }
    };
    run(&cli).map_err(|e| (ERROR_EXIT, format!("error: {e:#}\n")))
}
