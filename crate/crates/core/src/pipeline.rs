//! Parse, generate the theory, parameterize, derive, eliminate.

use crate::derivor::{derive_sentence, prune_trivial, simplify, AffineImplication, DerivError};
use crate::farkas::{eliminate, FarkasCertificate, FarkasError, PolyConstraint, Rel};
use crate::frontend::{generate_theory, parse_module, FrontendError, Ostrs, Theory};
use crate::interp::{make_param_interp, structural_constraints, ParamInterp, SynthConfig};
use crate::model::{instantiate_model, report_json, termination_verdict, verify_model, ConcreteModel, Report, Verdict};
use crate::params::Poly;
use crate::rational::fmt_rat;
use crate::solver::{check_assignment, first_violation, solve, Assignment, SolveConfig, SolveOutcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error(transparent)]
    Farkas(#[from] FarkasError),
}

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub synth: SynthConfig,
    /// Also drop implications certified by 0/1 multipliers for every
    /// parameter value.
    pub prune_trivial: bool,
}

/// Everything produced before solving.
#[derive(Debug, Clone)]
pub struct Problem {
    pub trs: Ostrs,
    pub theory: Theory,
    pub interp: ParamInterp,
    /// Parametric reading of each theory sentence, same order.
    pub sentence_impls: Vec<AffineImplication>,
    /// Structural constraints followed by the surviving sentence readings;
    /// these are the ones handed to Farkas elimination.
    pub implications: Vec<AffineImplication>,
    /// Index into `implications` for each theory sentence that survived
    /// simplification.
    pub sentence_index: Vec<Option<usize>>,
    pub certificates: Vec<FarkasCertificate>,
    pub constraints: Vec<PolyConstraint>,
}

impl Problem {
    pub fn structural_len(&self) -> usize {
        self.implications.len() - self.sentence_index.iter().flatten().count()
    }
}

pub fn build_problem(text: &str, cfg: &PipelineConfig) -> Result<Problem, PipelineError> {
    let trs = parse_module(text)?;
    problem_from_trs(trs, cfg)
}

pub fn problem_from_trs(trs: Ostrs, cfg: &PipelineConfig) -> Result<Problem, PipelineError> {
    let theory = generate_theory(&trs)?;
    let mut interp = make_param_interp(&trs.sig, &cfg.synth);
    let structural = structural_constraints(&mut interp, &trs.sig, &cfg.synth);
    let sentence_impls = theory
        .sentences
        .iter()
        .map(|ts| derive_sentence(&ts.tag.to_string(), &ts.sentence, &interp))
        .collect::<Result<Vec<_>, _>>()?;
    let mut kept = simplify(sentence_impls.clone());
    if cfg.prune_trivial {
        kept = prune_trivial(kept, &Poly::param(interp.delta));
    }

    let mut implications = structural;
    let base = implications.len();
    let mut sentence_index = vec![None; sentence_impls.len()];
    let mut taken = vec![false; sentence_impls.len()];
    for (j, imp) in kept.iter().enumerate() {
        let i = (0..sentence_impls.len())
            .find(|&i| !taken[i] && sentence_impls[i] == *imp)
            .expect("kept implication comes from a sentence");
        taken[i] = true;
        sentence_index[i] = Some(base + j);
    }
    implications.extend(kept);

    let mut constraints = vec![PolyConstraint::new(
        Poly::param(interp.delta),
        Rel::Ge,
        Poly::int(1),
        "delta",
    )];
    let mut certificates = Vec::new();
    let lambda_domain = cfg.synth.lambda_domain.clone();
    for (i, imp) in implications.iter().enumerate() {
        let (cert, cs) = eliminate(imp, i + 1, &mut interp.table, &lambda_domain)?;
        certificates.push(cert);
        constraints.extend(cs);
    }
    Ok(Problem {
        trs,
        theory,
        interp,
        sentence_impls,
        implications,
        sentence_index,
        certificates,
        constraints,
    })
}

/// Model, verification report and verdict for a solved (or imported)
/// assignment.
#[derive(Debug, Clone)]
pub struct Conclusion {
    pub model: Option<ConcreteModel>,
    pub report: Option<Report>,
    pub verdict: Verdict,
}

pub fn conclude(problem: &Problem, a: &Assignment, samples: usize, seed: u64) -> Conclusion {
    let table = &problem.interp.table;
    match check_assignment(&problem.constraints, table, a) {
        Err(e) => return Conclusion::unknown(e.to_string()),
        Ok(false) => {
            let i = first_violation(&problem.constraints, table, a)
                .ok()
                .flatten()
                .unwrap_or(0);
            let c = &problem.constraints[i];
            return Conclusion::unknown(format!(
                "assignment violates constraint {} from {}: {}",
                i + 1,
                c.origin,
                c.display(table)
            ));
        }
        Ok(true) => {}
    }
    let model = match instantiate_model(a, &problem.trs.sig, &problem.interp) {
        Ok(m) => m,
        Err(e) => return Conclusion::unknown(e.to_string()),
    };
    let report = verify_model(&model, problem, samples, seed);
    let verdict = termination_verdict(&model, &report, &problem.trs.sig);
    Conclusion {
        model: Some(model),
        report: Some(report),
        verdict,
    }
}

impl Conclusion {
    pub fn unknown(reason: impl Into<String>) -> Conclusion {
        Conclusion {
            model: None,
            report: None,
            verdict: Verdict::unknown(reason),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        report_json(&self.verdict, self.report.as_ref(), self.model.as_ref())
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub outcome: SolveOutcome,
    pub conclusion: Conclusion,
}

/// Solve with the builtin search, then build and verify the model.
pub fn synthesize(problem: &Problem, solve_cfg: &SolveConfig, samples: usize, seed: u64) -> Synthesis {
    let outcome = solve(&problem.constraints, &problem.interp.table, solve_cfg);
    let conclusion = match &outcome {
        SolveOutcome::Solved(a, _) => conclude(problem, a, samples, seed),
        SolveOutcome::NoSolution(s) => Conclusion::unknown(format!(
            "search exhausted: no solution within the parameter domains ({} nodes)",
            s.nodes
        )),
        SolveOutcome::Timeout(s) => Conclusion::unknown(format!("search timed out after {} nodes", s.nodes)),
    };
    Synthesis { outcome, conclusion }
}

/// Parameters and constraints as JSON.
pub fn constraints_json(problem: &Problem) -> serde_json::Value {
    let table = &problem.interp.table;
    let params: Vec<serde_json::Value> = table
        .iter()
        .map(|(_, p)| {
            serde_json::json!({
                "name": p.name,
                "kind": p.kind,
                "domain": p.domain.iter().map(fmt_rat).collect::<Vec<_>>(),
            })
        })
        .collect();
    let constraints: Vec<serde_json::Value> = problem
        .constraints
        .iter()
        .map(|c| {
            serde_json::json!({
                "origin": c.origin,
                "lhs": c.lhs.display(table).to_string(),
                "rel": match c.rel { Rel::Eq => "=", Rel::Ge => ">=" },
                "rhs": c.rhs.display(table).to_string(),
            })
        })
        .collect();
    serde_json::json!({ "params": params, "constraints": constraints })
}
