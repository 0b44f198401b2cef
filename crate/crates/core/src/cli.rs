//! Command-line front end. `run` is the whole program; the binary only
//! forwards `std::env::args` and the standard streams.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::Parser;

use crate::derivor::{derived_json, max_degree};
use crate::interp::{int_range, SynthConfig};
use crate::model::{render_model, Format};
use crate::pipeline::{build_problem, conclude, constraints_json, synthesize, Conclusion, PipelineConfig};
use crate::rational::{parse_rat, Rat};
use crate::solver::smtlib::{emit_smtlib, parse_smt_model};
use crate::solver::{SolveConfig, ValueOrder};

pub const EXIT_TERMINATING: i32 = 0;
pub const EXIT_UNKNOWN: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// A finite value domain given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain(pub Vec<Rat>);

fn domain_arg(s: &str) -> Result<Domain, String> {
    parse_domain(s).map(Domain)
}

/// Parses `lo..hi` (inclusive integers) or a comma list such as `0,1/2,1`.
pub fn parse_domain(s: &str) -> Result<Vec<Rat>, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
        let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        return Ok(int_range(lo, hi));
    }
    let mut v: Vec<Rat> = s
        .split(',')
        .map(|t| parse_rat(t).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

#[derive(Debug, Parser)]
#[command(
    name = "ossynth",
    version,
    about = "Synthesize a numeric model proving termination of an order-sorted rewrite module"
)]
pub struct Args {
    /// Module file.
    pub input: PathBuf,
    /// Print the generated theory as JSON and stop.
    #[arg(long)]
    pub dump_theory: bool,
    /// Print the derived parametric implications as JSON and stop.
    #[arg(long)]
    pub dump_derived: bool,
    /// Print parameters and polynomial constraints as JSON and stop.
    #[arg(long)]
    pub dump_constraints: bool,
    /// Write the constraint problem as an SMT-LIB script and stop.
    #[arg(long, value_name = "PATH")]
    pub smtlib_out: Option<PathBuf>,
    /// Use an external solver's model instead of the builtin search.
    #[arg(long, value_name = "PATH")]
    pub smt_model_in: Option<PathBuf>,
    #[arg(long, value_name = "lo..hi", value_parser = domain_arg)]
    pub coeff_domain: Option<Domain>,
    #[arg(long, value_name = "lo..hi", value_parser = domain_arg)]
    pub row_domain: Option<Domain>,
    #[arg(long, value_name = "lo..hi", value_parser = domain_arg)]
    pub const_domain: Option<Domain>,
    #[arg(long, value_name = "lo..hi", value_parser = domain_arg)]
    pub bound_domain: Option<Domain>,
    /// Multiplier grid for the builtin search.
    #[arg(long, value_name = "LIST", value_parser = domain_arg)]
    pub lambda_domain: Option<Domain>,
    /// Fixed value of the strictness margin.
    #[arg(long, value_name = "N", value_parser = parse_rat_arg)]
    pub delta: Option<Rat>,
    /// Sampled valuations per sentence during verification.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Search time limit in seconds.
    #[arg(long, default_value_t = 600)]
    pub timeout: u64,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Drop implications certified by 0/1 multipliers before elimination.
    #[arg(long)]
    pub prune_trivial: bool,
    /// Emit non-emptiness witnesses for inhabited sorts too.
    #[arg(long)]
    pub force_dummies: bool,
    /// Bound every sort of a component carrying `->`, not just its top.
    #[arg(long)]
    pub bound_all_sorts: bool,
    #[arg(long, value_enum, default_value = "smallest-magnitude")]
    pub value_order: ValueOrderArg,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ValueOrderArg {
    Ascending,
    SmallestMagnitude,
}

fn parse_rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

impl Args {
    pub fn pipeline_config(&self) -> PipelineConfig {
        let mut synth = SynthConfig::default();
        let set = |dst: &mut Vec<Rat>, src: &Option<Domain>| {
            if let Some(d) = src {
                dst.clone_from(&d.0);
            }
        };
        set(&mut synth.coeff_domain, &self.coeff_domain);
        set(&mut synth.row_domain, &self.row_domain);
        set(&mut synth.const_domain, &self.const_domain);
        set(&mut synth.bound_domain, &self.bound_domain);
        set(&mut synth.lambda_domain, &self.lambda_domain);
        if let Some(d) = self.delta {
            synth.delta_domain = vec![d];
        }
        synth.force_dummies = self.force_dummies;
        synth.bound_all_sorts = self.bound_all_sorts;
        PipelineConfig {
            synth,
            prune_trivial: self.prune_trivial,
        }
    }

    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            timeout: Some(Duration::from_secs(self.timeout)),
            value_order: match self.value_order {
                ValueOrderArg::Ascending => ValueOrder::Ascending,
                ValueOrderArg::SmallestMagnitude => ValueOrder::SmallestMagnitude,
            },
            ..SolveConfig::default()
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

/// Runs the program. Exit codes: 0 terminating, 1 unknown, 2 input or
/// usage error. Dump and emission modes stop early with 0.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match run_args(&args, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn run_args(args: &Args, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    let text = std::fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let cfg = args.pipeline_config();
    let problem = build_problem(&text, &cfg).map_err(|e| e.to_string())?;

    let last_dump = [args.dump_theory, args.dump_derived, args.dump_constraints]
        .iter()
        .rposition(|&b| b);
    if args.dump_theory {
        writeln!(out, "{}", pretty(&problem.theory.to_json())).map_err(io)?;
    }
    if args.dump_derived {
        let mut v = derived_json(&problem.implications, &problem.interp.table);
        v["max_degree"] = max_degree(&problem.implications).into();
        writeln!(out, "{}", pretty(&v)).map_err(io)?;
    }
    if args.dump_constraints {
        writeln!(out, "{}", pretty(&constraints_json(&problem))).map_err(io)?;
    }
    if let Some(path) = &args.smtlib_out {
        let script = emit_smtlib(&problem.constraints, &problem.interp.table);
        std::fs::write(path, script).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if last_dump.is_some() || args.smtlib_out.is_some() {
        return Ok(EXIT_TERMINATING);
    }

    let conclusion = match &args.smt_model_in {
        Some(path) => {
            let m = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let a = parse_smt_model(&m, &problem.interp.table).map_err(|e| e.to_string())?;
            conclude(&problem, &a, args.samples, args.seed)
        }
        None => synthesize(&problem, &args.solve_config(), args.samples, args.seed).conclusion,
    };
    print_conclusion(args, &conclusion, out).map_err(io)?;
    Ok(match conclusion.verdict.status {
        crate::model::VerdictStatus::ModelFoundTerminating => EXIT_TERMINATING,
        crate::model::VerdictStatus::Unknown => EXIT_UNKNOWN,
    })
}

fn print_conclusion(args: &Args, c: &Conclusion, out: &mut dyn Write) -> std::io::Result<()> {
    if args.json {
        return writeln!(out, "{}", pretty(&c.to_json()));
    }
    if let Some(m) = &c.model {
        write!(out, "{}", render_model(m, Format::Text))?;
    }
    if let Some(r) = &c.report {
        let samples: usize = r.sentences.iter().map(|s| s.samples).sum();
        writeln!(
            out,
            "verified {} sentences ({} samples, {} failures), {} structural certificates",
            r.sentences.len(),
            samples,
            r.failure_count(),
            r.structural.len()
        )?;
    }
    writeln!(out, "verdict: {}", c.verdict.label())?;
    for reason in &c.verdict.reasons {
        writeln!(out, "  {reason}")?;
    }
    Ok(())
}
