//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classification::{self, Family, FamilyDescriptor};
use crate::context::{ScanGuard, DEFAULT_MAX_SCAN, MAX_SCAN_ENV};
use crate::error::{Error, Result};
use crate::idempotents;
use crate::oracle::{self, VerifyOptions};
use crate::transform::Transformation;
use crate::variants::{self, normalize_sandwich, Normalization};
use crate::SCHEMA_VERSION;

#[derive(Debug, Parser)]
#[command(name = "sandwich-tn", version, about = "Isolated subsemigroups of variants of T_n")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Bound on n^n for commands that scan the semigroup.
    #[arg(long, global = true, env = MAX_SCAN_ENV, default_value_t = DEFAULT_MAX_SCAN)]
    max_scan: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalization, rank, kernel blocks and kernel type of alpha.
    Info { alpha: String },
    /// Idempotents of the variant, scanned and counted.
    Idempotents { alpha: String },
    /// All isolated, completely isolated, one-sided convex and convex subsemigroups.
    Classify {
        alpha: String,
        /// Include the members of every set.
        #[arg(long)]
        elements: bool,
    },
    /// Check the classification against the brute-force oracle.
    Verify {
        alpha: String,
        /// Largest number of idempotents for the subset scan.
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_SUBSETS)]
        max_subsets: usize,
        /// Use the pruned closure search when the subset scan is out of bounds.
        #[arg(long)]
        pruned: bool,
    },
    /// Closed-form counts only; no scanning.
    Count { alpha: String },
    /// Whether two sandwich elements give isomorphic variants.
    Iso { alpha1: String, alpha2: String },
}

fn parse_alpha(s: &str) -> Result<Transformation> {
    s.parse()
}

#[derive(Serialize)]
struct FamilyOut<'a> {
    descriptor: &'a FamilyDescriptor,
    cardinality: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Transformation>>,
}

fn families_json(list: &[Family], elements: bool) -> Vec<FamilyOut<'_>> {
    list.iter()
        .map(|f| FamilyOut {
            descriptor: &f.descriptor,
            cardinality: f.cardinality,
            elements: elements.then(|| f.set.elements().collect()),
        })
        .collect()
}

fn envelope(command: &str, nz: &Normalization, body: Value) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "context": nz,
    });
    if let (Value::Object(out), Value::Object(extra)) = (&mut v, body) {
        out.extend(extra);
    }
    v
}

fn describe_context(nz: &Normalization) -> String {
    let mut s = format!(
        "alpha = {}, n = {}, l = {}, blocks = {}",
        nz.normalized,
        nz.normalized.degree(),
        nz.l,
        nz.blocks
    );
    if nz.changed {
        s = format!("{} (normalized from {})", s, nz.input);
    }
    s
}

fn list_text(out: &mut String, name: &str, list: &[Family]) {
    out.push_str(&format!("{name}: {}\n", list.len()));
    for f in list {
        out.push_str(&format!("  |{}| {}\n", f.cardinality, f.descriptor));
    }
}

struct Output {
    text: String,
    json: Value,
    code: i32,
}

fn execute(cli: &Cli) -> Result<Output> {
    let guard = ScanGuard::new(cli.max_scan);
    match &cli.command {
        Command::Info { alpha } => {
            let nz = normalize_sandwich(&parse_alpha(alpha)?);
            let text = format!(
                "{}\nrepresentatives = {:?}\nkernel type = {:?}\n",
                describe_context(&nz),
                nz.reps,
                nz.kernel_type
            );
            Ok(Output {
                text,
                json: envelope("info", &nz, json!({})),
                code: 0,
            })
        }
        Command::Idempotents { alpha } => {
            let nz = normalize_sandwich(&parse_alpha(alpha)?);
            let report = idempotents::idempotent_report(&nz.context, guard)?;
            let mut text = format!("{}\n", describe_context(&nz));
            for i in &report.idempotents {
                text.push_str(&format!("  {} rank {}\n", i.eps, i.rank));
            }
            text.push_str(&format!(
                "scanned: {}, formula: {}, agree: {}\n",
                report.scanned, report.formula, report.agrees
            ));
            Ok(Output {
                text,
                json: envelope("idempotents", &nz, serde_json::to_value(&report).expect("serializable")),
                code: 0,
            })
        }
        Command::Classify { alpha, elements } => {
            let nz = normalize_sandwich(&parse_alpha(alpha)?);
            let c = classification::classify(&nz.context, guard)?;
            let mut text = format!("{}\n", describe_context(&nz));
            list_text(&mut text, "isolated", &c.isolated);
            list_text(&mut text, "completely isolated", &c.completely_isolated);
            list_text(&mut text, "left convex", &c.left_convex);
            list_text(&mut text, "right convex", &c.right_convex);
            list_text(&mut text, "convex", &c.convex);
            text.push_str(&format!(
                "count: enumerated {}, family total {}, closed form {}\n",
                c.isolated.len(),
                c.counts.family_total,
                c.counts.formula
            ));
            let body = json!({
                "isolated": families_json(&c.isolated, *elements),
                "completely_isolated": families_json(&c.completely_isolated, *elements),
                "left_convex": families_json(&c.left_convex, *elements),
                "right_convex": families_json(&c.right_convex, *elements),
                "convex": families_json(&c.convex, *elements),
                "counts": c.counts,
                "duplicates": c.duplicates,
            });
            Ok(Output {
                text,
                json: envelope("classify", &nz, body),
                code: 0,
            })
        }
        Command::Verify {
            alpha,
            max_subsets,
            pruned,
        } => {
            let nz = normalize_sandwich(&parse_alpha(alpha)?);
            let opts = VerifyOptions {
                guard,
                max_subsets: *max_subsets,
                pruned: *pruned,
            };
            let report = oracle::verify_classification(&nz.context, opts)?;
            let mut text = format!("{}\n", describe_context(&nz));
            let iso = &report.isolated;
            text.push_str(&format!(
                "isolated: {:?} ({}), oracle {}, classification {}\n",
                iso.status,
                iso.method,
                iso.oracle_count.map_or("-".to_string(), |c| c.to_string()),
                iso.classification_count
            ));
            for (kind, s) in &report.lists {
                text.push_str(&format!("{kind}: {:?} ({}), listed {}\n", s.status, s.method, s.expected));
            }
            text.push_str(&format!(
                "count: closed form {}, enumerated {}\nidempotents: {:?}\nverdict: {}\n",
                report.counts.formula, report.counts.enumerated, report.idempotents.status, report.verdict
            ));
            let code = if report.verdict == "fail" { 1 } else { 0 };
            Ok(Output {
                text,
                json: envelope("verify", &nz, serde_json::to_value(&report).expect("serializable")),
                code,
            })
        }
        Command::Count { alpha } => {
            let nz = normalize_sandwich(&parse_alpha(alpha)?);
            let report = classification::count_report(&nz.context, None);
            let mut text = format!("{}\n", describe_context(&nz));
            text.push_str(&format!("isolated count (closed form): {}\n", report.formula));
            for s in &report.formula_summands {
                text.push_str(&format!("  {}: {}\n", s.label, s.value));
            }
            text.push_str(&format!("isolated count (family total): {}\n", report.family_total));
            Ok(Output {
                text,
                json: envelope("count", &nz, json!({ "counts": report })),
                code: 0,
            })
        }
        Command::Iso { alpha1, alpha2 } => {
            let (a, b) = (parse_alpha(alpha1)?, parse_alpha(alpha2)?);
            let iso = variants::variants_isomorphic(&a, &b)?;
            Ok(Output {
                text: format!("isomorphic: {iso}\n"),
                json: json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "iso",
                    "alpha1": a,
                    "alpha2": b,
                    "kernel_type1": variants::kernel_type(&a),
                    "kernel_type2": variants::kernel_type(&b),
                    "isomorphic": iso,
                }),
                code: 0,
            })
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::NotSubsemigroup => 1,
        _ => 2,
    }
}

/// Runs the CLI on `args` (including the program name), writing to the given
/// streams, and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"))
            } else {
                write!(out, "{}", o.text)
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_code(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
