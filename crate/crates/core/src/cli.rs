//! The `lieinv` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::covariant::{
    from_covariant, parse_equation_file, rescale_invariance_check, to_covariant, CovariantPDE, RescaleReport, ScalarPDE,
};
use crate::expr::normal::retan;
use crate::expr::sample::parse_seed;
use crate::expr::{parse_rational, Expr, Rat, SamplerConfig};
use crate::invariants::{run_pipeline, InvariantSet, PDETemplate, Pipeline};
use crate::jet::JetSpace;
use crate::liealg::{custom_entry, lookup, LieError, StructureConstants};
use crate::verify::fixtures::Table;
use crate::verify::suite::csv_field;
use crate::verify::{rows_for, run_fixture_suite};

#[derive(Debug, Parser)]
#[command(name = "lieinv", version, about = "Differential invariants and invariant second-order equations")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for sample points (decimal or 0x-prefixed hex).
    #[arg(long, global = true, env = "LIEINV_SEED", value_parser = seed_arg, default_value = "0xC0FFEE")]
    pub seed: u64,
    /// Sample points per zero test.
    #[arg(long, global = true, default_value_t = 32)]
    pub points: usize,
    /// Relative tolerance of zero tests.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Human-oriented expression forms and indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Emit results even when verification fails.
    #[arg(long, global = true)]
    pub unchecked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PipelineArg {
    Free,
    Transitive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Jacobi identity of an algebra file or catalog entry.
    Validate { input: String },
    /// Differential invariants and the invariant quasi-linear equation.
    Invariants {
        /// Catalog name (e.g. g3_7, so3) or algebra JSON file.
        algebra: String,
        #[arg(long, value_enum)]
        pipeline: Option<PipelineArg>,
        /// Number of invariant coordinates for the free pipeline.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Parameter values, `h=1/3`.
        #[arg(long = "params", value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Convert between an equation and its covariant form.
    Covariant {
        #[arg(long, conflicts_with = "from", required_unless_present = "from")]
        to: bool,
        #[arg(long)]
        from: bool,
        file: String,
    },
    /// Reproduce the published tables.
    Reproduce {
        /// `all` for every table.
        which: Option<String>,
        #[arg(long = "table", value_parser = table_arg)]
        tables: Vec<Table>,
        /// Per-algebra parameters, `g3_4:h=1/3`.
        #[arg(long = "params")]
        params: Vec<String>,
    },
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("`{s}` is not a decimal or hexadecimal seed"))
}

fn table_arg(s: &str) -> Result<Table, String> {
    s.parse()
}

/// Text for stdout and stderr plus the exit status.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

impl Outcome {
    fn ok(stdout: String, pass: bool) -> Outcome {
        Outcome { stdout, stderr: String::new(), status: if pass { 0 } else { 1 } }
    }

    fn error(module: &str, msg: impl std::fmt::Display) -> Outcome {
        Outcome { stdout: String::new(), stderr: format!("error[{module}]: {msg}\n"), status: 2 }
    }
}

impl Global {
    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig { seed: self.seed, points: self.points.max(1), tol: self.tol, ..SamplerConfig::default() }
    }

    fn json(&self, v: &Value) -> String {
        let mut s = if self.pretty {
            serde_json::to_string_pretty(v).expect("value serializes")
        } else {
            serde_json::to_string(v).expect("value serializes")
        };
        s.push('\n');
        s
    }

    fn show(&self, e: &Expr) -> String {
        if self.pretty {
            retan(e).to_string()
        } else {
            e.to_string()
        }
    }
}

/// Rounds floats to six significant digits so JSON output is stable.
fn stable(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r: f64 = format!("{x:.5e}").parse().unwrap_or(x);
            json!(r)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(stable).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stable(v))).collect()),
        other => other,
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    stable(serde_json::to_value(t).expect("serializable"))
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { input } => validate(&cli.global, input),
        Command::Invariants { algebra, pipeline, m, params } => invariants(&cli.global, algebra, *pipeline, *m, params),
        Command::Covariant { to, file, .. } => covariant(&cli.global, *to, file),
        Command::Reproduce { which, tables, params } => reproduce(&cli.global, which.as_deref(), tables, params),
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let out = execute(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.status
}

fn read_file(path: &str) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::error("io", format!("{path}: {e}")))
}

fn is_file_arg(s: &str) -> bool {
    s.ends_with(".json") || Path::new(s).is_file()
}

fn validate(g: &Global, input: &str) -> Outcome {
    let parsed = if is_file_arg(input) {
        match read_file(input) {
            Ok(text) => StructureConstants::from_json(&text).map(|(sc, _)| sc),
            Err(o) => return o,
        }
    } else {
        lookup(input, &BTreeMap::new()).map(|e| e.constants)
    };
    let (valid, dim, brackets, error) = match parsed.and_then(|sc| sc.validate().map(|()| sc)) {
        Ok(sc) => (true, sc.dim(), sc.describe(), None),
        Err(e @ LieError::JacobiViolation { .. }) => (false, 0, Vec::new(), Some(e.to_string())),
        Err(e) => return Outcome::error("liealg", e),
    };
    let stdout = match g.format {
        Format::Json => {
            let mut v = json!({ "input": input, "valid": valid });
            if valid {
                v["dim"] = json!(dim);
                v["brackets"] = json!(brackets);
            } else {
                v["error"] = json!(error);
            }
            g.json(&v)
        }
        Format::Csv => {
            let mut s = String::from("input,valid,detail\n");
            let detail = error.clone().unwrap_or_else(|| brackets.join("; "));
            let _ = writeln!(s, "{},{valid},{}", csv_field(input), csv_field(&detail));
            s
        }
        Format::Text => {
            let mut s = String::new();
            if valid {
                let _ = writeln!(s, "valid: dimension {dim}");
                for b in &brackets {
                    let _ = writeln!(s, "  {b}");
                }
            } else {
                let _ = writeln!(s, "invalid: {}", error.unwrap_or_default());
            }
            s
        }
    };
    Outcome::ok(stdout, valid)
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, Rat>, String> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected k=v, got `{item}`"))?;
        let r = parse_rational(v.trim()).ok_or_else(|| format!("`{v}` is not a rational number"))?;
        out.insert(k.trim().to_string(), r);
    }
    Ok(out)
}

fn invariants(g: &Global, algebra: &str, pipeline: Option<PipelineArg>, m: usize, params: &[String]) -> Outcome {
    let cfg = g.sampler();
    let params = match parse_params(params) {
        Ok(p) => p,
        Err(e) => return Outcome::error("cli", e),
    };
    let entry = if is_file_arg(algebra) {
        let text = match read_file(algebra) {
            Ok(t) => t,
            Err(o) => return o,
        };
        StructureConstants::from_json(&text).and_then(|(sc, file_params)| {
            sc.validate()?;
            let mut all = file_params;
            all.extend(params.clone());
            custom_entry("custom", sc, all, &cfg)
        })
    } else {
        lookup(algebra, &params)
    };
    let entry = match entry {
        Ok(e) => e,
        Err(e) => return Outcome::error("liealg", e),
    };
    let pipeline = match pipeline {
        Some(PipelineArg::Free) => Pipeline::Free,
        Some(PipelineArg::Transitive) => Pipeline::Transitive,
        None if entry.dim() == 1 => Pipeline::Free,
        None => Pipeline::Transitive,
    };
    let (set, template) = match run_pipeline(&entry, pipeline, m, &cfg) {
        Ok(r) => r,
        Err(e) => return Outcome::error("invariants", e),
    };
    let verified = set.verified();
    if !verified && !g.unchecked {
        let v = set.verification.as_ref().expect("verified above");
        return Outcome {
            stdout: String::new(),
            stderr: format!(
                "error[verify]: invariants failed verification (annihilated: {}, rank {} of {}); rerun with --unchecked to see them\n",
                v.annihilated, v.rank, v.expected_rank
            ),
            status: 1,
        };
    }
    Outcome::ok(render_invariants(g, &set, &template, m), verified)
}

fn render_invariants(g: &Global, set: &InvariantSet, template: &PDETemplate, m: usize) -> String {
    let params: BTreeMap<String, String> = set.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    match g.format {
        Format::Json => {
            let invariants: Vec<Value> =
                set.invariants.iter().map(|l| json!({ "label": l.label, "expr": g.show(&l.expr) })).collect();
            let mut v = json!({
                "algebra": set.algebra,
                "params": params,
                "pipeline": set.pipeline,
                "coords": set.space.coords().iter().map(|c| c.name().to_string()).collect::<Vec<_>>(),
                "dep": set.space.dep_name(),
                "invariants": invariants,
                "template": format!("{} = 0", template.display),
                "equation": format!("{} = 0", g.show(&template.lhs)),
                "verified": set.verified(),
                "verification": to_value(&set.verification),
                "seed": g.seed,
            });
            if set.pipeline == Pipeline::Free {
                v["m"] = json!(m);
            }
            g.json(&v)
        }
        Format::Csv => {
            let mut s = String::from("label,expr\n");
            for l in &set.invariants {
                let _ = writeln!(s, "{},{}", csv_field(&l.label), csv_field(&g.show(&l.expr)));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let p = if params.is_empty() {
                String::new()
            } else {
                format!(" ({})", params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", "))
            };
            let _ = writeln!(s, "{}{p}, pipeline {}", set.algebra, set.pipeline);
            let width = set.invariants.iter().map(|l| l.label.len()).max().unwrap_or(0);
            for l in &set.invariants {
                let _ = writeln!(s, "  {:<width$} = {}", l.label, g.show(&l.expr));
            }
            let _ = writeln!(s, "template: {} = 0", template.display);
            let _ = writeln!(s, "equation: {} = 0", g.show(&template.lhs));
            match &set.verification {
                Some(v) => {
                    let _ = writeln!(
                        s,
                        "verified: {} (annihilated: {}, rank {} of {})",
                        if v.pass() { "yes" } else { "no" },
                        v.annihilated,
                        v.rank,
                        v.expected_rank
                    );
                }
                None => s.push_str("verified: no\n"),
            }
            s
        }
    }
}

fn space_header(space: &JetSpace) -> String {
    let coords: Vec<&str> = space.coords().iter().map(|c| c.name()).collect();
    format!("coords: {}; dep: {}", coords.join(","), space.dep_name())
}

fn covariant(g: &Global, to: bool, file: &str) -> Outcome {
    let cfg = g.sampler();
    let text = match read_file(file) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let (space, lhs) = match parse_equation_file(&text) {
        Ok(r) => r,
        Err(e) => return Outcome::error("covariant", e),
    };
    let (out_space, out_lhs, kappa, report): (JetSpace, Expr, Option<i64>, RescaleReport) = if to {
        let t = to_covariant(&ScalarPDE::new(space, lhs));
        let report = rescale_invariance_check(&t, &cfg);
        (t.space, t.lhs, Some(t.kappa), report)
    } else {
        let t = CovariantPDE::new(space, lhs);
        let report = rescale_invariance_check(&t, &cfg);
        match from_covariant(&t, &cfg) {
            Ok(e) => (e.space, e.lhs, None, report),
            Err(e) => {
                let mut o = Outcome::error("covariant", e);
                o.status = 1;
                return o;
            }
        }
    };
    let pass = report.pass();
    let stdout = match g.format {
        Format::Json => {
            let mut v = json!({
                "direction": if to { "to" } else { "from" },
                "coords": out_space.coords().iter().map(|c| c.name().to_string()).collect::<Vec<_>>(),
                "dep": out_space.dep_name(),
                "lhs": g.show(&out_lhs),
                "rescale": to_value(&report),
            });
            if let Some(k) = kappa {
                v["kappa"] = json!(k);
            }
            g.json(&v)
        }
        Format::Csv => {
            let mut s = String::from("coords,dep,lhs,rescale_invariant\n");
            let coords: Vec<&str> = out_space.coords().iter().map(|c| c.name()).collect();
            let _ = writeln!(
                s,
                "{},{},{},{pass}",
                csv_field(&coords.join(" ")),
                out_space.dep_name(),
                csv_field(&g.show(&out_lhs))
            );
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", space_header(&out_space));
            let _ = writeln!(s, "lhs: {}", g.show(&out_lhs));
            if let Some(k) = kappa {
                let _ = writeln!(s, "# kappa: {k}");
            }
            let degree = report.degree.clone().unwrap_or_else(|| "none".into());
            let _ = writeln!(s, "# rescale invariant: {} (degree {degree})", if pass { "yes" } else { "no" });
            s
        }
    };
    Outcome::ok(stdout, pass)
}

fn reproduce(g: &Global, which: Option<&str>, tables: &[Table], params: &[String]) -> Outcome {
    let tables: Vec<Table> = match which {
        Some("all") => Table::ALL.to_vec(),
        Some(other) => return Outcome::error("cli", format!("unexpected argument `{other}` (expected `all`)")),
        None if tables.is_empty() => Table::ALL.to_vec(),
        None => tables.to_vec(),
    };
    let mut overrides: BTreeMap<String, BTreeMap<String, Rat>> = BTreeMap::new();
    for item in params {
        let Some((alg, kv)) = item.split_once(':') else {
            return Outcome::error("cli", format!("expected algebra:k=v, got `{item}`"));
        };
        let parsed = match parse_params(&kv.split(',').map(str::to_string).collect::<Vec<_>>()) {
            Ok(p) => p,
            Err(e) => return Outcome::error("cli", e),
        };
        overrides.entry(alg.to_string()).or_default().extend(parsed);
    }
    let cfg = g.sampler();
    let rows = rows_for(&tables, &overrides);
    let report = run_fixture_suite(&rows, tables.contains(&Table::ThreeDTransitive), &cfg);
    let stdout = match g.format {
        Format::Json => g.json(&to_value(&report)),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    Outcome::ok(stdout, report.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("lieinv").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn transitive_affine_text() {
        let o = run_args(&["invariants", "g2"]);
        assert_eq!(o.status, 0, "{}", o.stderr);
        assert!(o.stdout.contains("template: v_12 + b(v_1) = 0"), "{}", o.stdout);
    }

    #[test]
    fn csv_has_two_rows() {
        let o = run_args(&["invariants", "2g1", "--pipeline", "transitive", "--format", "csv"]);
        assert_eq!(o.stdout.lines().count(), 3, "{}", o.stdout);
    }

    #[test]
    fn json_keys_are_sorted() {
        let o = run_args(&["invariants", "g2", "--format", "json"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["pipeline"], "II");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn catalog_validation() {
        assert_eq!(run_args(&["validate", "so3"]).status, 0);
        assert_eq!(run_args(&["validate", "nope"]).status, 2);
    }

    #[test]
    fn unknown_flags_rejected() {
        assert!(Cli::try_parse_from(["lieinv", "invariants", "g2", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["lieinv", "reproduce", "--table", "4d"]).is_err());
    }

    #[test]
    fn params_parse() {
        let p = parse_params(&["h=1/3".into()]).unwrap();
        assert_eq!(p["h"], crate::expr::rat(1, 3));
        assert!(parse_params(&["h".into()]).is_err());
    }
}
