//! JSON problem interface for the `resolvekit` binary.
//!
//! A problem file names the variables (optionally marking one as the
//! family base), lists generator polynomials as strings, fixes the mark
//! and the pre-existing divisors, and selects a mode. The binary writes a
//! JSON report and, on request, a Graphviz rendering of the chart tree.
//!
//! Exit codes: `0` success (for families: every requested condition
//! holds), `1` a requested condition fails, `2` bad input, `3` the
//! computation could not finish.

use crate::exactalg::{parse_poly, CoeffKind, Poly, Rat, Ring};
use crate::families::{
    check_A, check_C, check_E, check_F, check_R, check_tau, ConditionReport, FamilyObject,
    Verdict,
};
use crate::geom::MarkedChart;
use crate::resolver::{principalize, resolve, resolve_embedded, Resolution, ResolveOptions};
use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Resolve the marked ideal.
    Resolve,
    /// Principalize the ideal (mark forced to 1).
    Principalize,
    /// Resolve until the strict transform is smooth with normal
    /// crossings.
    Embedded,
    /// Run the equiresolution condition checkers on a family.
    Family,
}

#[derive(Parser, Debug)]
#[command(
    name = "resolvekit",
    about = "Exact resolution of marked ideals and equiresolution checks for families"
)]
pub struct Args {
    /// What to do with the problem.
    #[arg(value_enum)]
    pub mode: Mode,
    /// Problem description (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the JSON report (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the chart tree in Graphviz DOT format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Base-point samples for the family checkers, e.g. `0,1,-1`.
    #[arg(long, value_delimiter = ',')]
    pub samples: Vec<String>,
    /// Truncation order for the infinitesimal-neighbourhood check.
    #[arg(long, default_value_t = 2)]
    pub truncation: usize,
    /// Cap on the number of transformation steps.
    #[arg(long, default_value_t = 64)]
    pub max_steps: usize,
    /// Which family conditions to check (default: all six).
    #[arg(long, value_delimiter = ',')]
    pub conditions: Vec<String>,
}

#[derive(Deserialize, Debug)]
pub struct ProblemSpec {
    /// Variable names, in order.
    pub vars: Vec<String>,
    /// The base variable of a family; must be one of `vars`.
    #[serde(default)]
    pub base: Option<String>,
    /// Generator polynomials, parsed over the rationals.
    pub gens: Vec<String>,
    /// The mark `b` of the marked ideal.
    #[serde(default = "one")]
    pub mark: u64,
    /// Names of variables cutting pre-existing divisors.
    #[serde(default)]
    pub divisors: Vec<String>,
}

fn one() -> u64 {
    1
}

fn load_chart(spec: &ProblemSpec, mode: Mode) -> Result<MarkedChart, String> {
    let names: Vec<&str> = spec.vars.iter().map(|s| s.as_str()).collect();
    let ring = match (&spec.base, mode) {
        (Some(b), Mode::Family) => Ring::with_base(&names, b, CoeffKind::Rational),
        (Some(_), _) => return Err("a base variable is only meaningful in family mode".into()),
        (None, Mode::Family) => return Err("family mode needs a base variable".into()),
        (None, _) => Ring::new(&names, CoeffKind::Rational),
    };
    let gens: Result<Vec<Poly>, String> = spec
        .gens
        .iter()
        .map(|s| parse_poly(&ring, s).map_err(|e| format!("in `{s}`: {e}")))
        .collect();
    let mut dvars = Vec::new();
    for d in &spec.divisors {
        let ix = spec
            .vars
            .iter()
            .position(|v| v == d)
            .ok_or_else(|| format!("divisor variable `{d}` is not a variable"))?;
        dvars.push(ix);
    }
    if spec.mark == 0 {
        return Err("the mark must be positive".into());
    }
    Ok(MarkedChart::root(&ring, gens?, spec.mark, &dvars))
}

fn resolution_report(res: &Resolution) -> Value {
    json!({
        "resolved": res.resolved(),
        "stopped_at": res.stopped_at,
        "steps": res.steps.iter().map(|s| json!({
            "step": s.step,
            "value": s.value.render(),
            "omega": s.omega.to_string(),
            "centers": s.centers.iter().map(|(node, names)| json!({
                "chart": node,
                "components": names,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "leaves": res.tree.leaves(),
        "tree": res.tree.to_json(),
    })
}

fn condition_value(rep: &ConditionReport) -> Value {
    serde_json::to_value(rep).expect("reports serialize")
}

fn write_output(args: &Args, report: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("valid JSON");
    match &args.out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_dot(args: &Args, res: &Resolution) -> Result<(), String> {
    if let Some(p) = &args.dot {
        std::fs::write(p, res.tree.to_dot()).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Run the CLI; returns the process exit code.
pub fn run(args: Args) -> i32 {
    match run_inner(&args) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn run_inner(args: &Args) -> Result<i32, (i32, String)> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| (2, format!("{}: {e}", args.input.display())))?;
    let spec: ProblemSpec = serde_json::from_str(&text).map_err(|e| (2, e.to_string()))?;
    let chart = load_chart(&spec, args.mode).map_err(|m| (2, m))?;
    let opts = ResolveOptions {
        max_steps: args.max_steps,
    };
    match args.mode {
        Mode::Resolve => {
            let res = resolve(chart, &opts).map_err(|e| (3, e.to_string()))?;
            write_dot(args, &res).map_err(|m| (3, m))?;
            write_output(args, &resolution_report(&res)).map_err(|m| (3, m))?;
            Ok(0)
        }
        Mode::Principalize => {
            let pr = principalize(chart, &opts).map_err(|e| (3, e.to_string()))?;
            write_dot(args, &pr.resolution).map_err(|m| (3, m))?;
            let mut rep = resolution_report(&pr.resolution);
            rep["preexisting_monomial"] = json!(pr.preexisting_monomial);
            write_output(args, &rep).map_err(|m| (3, m))?;
            Ok(0)
        }
        Mode::Embedded => {
            let res = resolve_embedded(chart, &opts).map_err(|e| (3, e.to_string()))?;
            write_dot(args, &res).map_err(|m| (3, m))?;
            write_output(args, &resolution_report(&res)).map_err(|m| (3, m))?;
            Ok(0)
        }
        Mode::Family => {
            let samples: Result<Vec<Rat>, _> = args
                .samples
                .iter()
                .map(|s| Rat::from_str(s).map_err(|e| (2, format!("sample `{s}`: {e}"))))
                .collect();
            let samples = samples?;
            let mut fam = FamilyObject::new(chart, samples.clone())
                .map_err(|e| (2, e.to_string()))?;
            fam.opts = opts;
            let requested: Vec<String> = if args.conditions.is_empty() {
                ["R", "A", "F", "C", "tau", "E"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            } else {
                args.conditions.clone()
            };
            let mut reports: Vec<ConditionReport> = Vec::new();
            for c in &requested {
                match c.as_str() {
                    "R" => reports.push(check_R(&fam)),
                    "A" => reports.push(check_A(&fam)),
                    "F" => reports.push(check_F(&fam)),
                    "C" => reports.push(check_C(&fam)),
                    "tau" => reports.push(check_tau(&fam)),
                    "E" => {
                        let pts: Vec<Rat> = if samples.is_empty() {
                            vec![Rat::from_integer(0.into())]
                        } else {
                            samples.clone()
                        };
                        for t0 in &pts {
                            reports.push(check_E(&fam, t0, args.truncation));
                        }
                    }
                    other => return Err((2, format!("unknown condition `{other}`"))),
                }
            }
            let all_hold = reports.iter().all(|r| r.verdict == Verdict::Holds);
            let report = json!({
                "conditions": reports.iter().map(condition_value).collect::<Vec<_>>(),
                "equiresolvable": all_hold,
            });
            write_output(args, &report).map_err(|m| (3, m))?;
            Ok(if all_hold { 0 } else { 1 })
        }
    }
}
