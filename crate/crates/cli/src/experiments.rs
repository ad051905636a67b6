//! Experiment dispatch: every config kind produces a CSV (row-level
//! data) and a JSON summary embedding the config, the seed and the
//! artifact version. Output bytes depend only on the config and seed.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

use pqlab_core::commlab::{
    self,
    gen::{conversion_instance, two_sided_instance, ConversionInstance, InstanceKind},
    mutual_information, one_way_cost_single, one_way_cost_two_sided, single_input_transform,
    SingleInputProblem, TwoSidedProblem,
};
use pqlab_core::concepts::Concept;
use pqlab_core::learner::{run_trials, LearnerMode, QueryPolicy, TrialConfig, TrialStats};
use pqlab_core::speakability::{
    approx_cover_oracle, concepts_approximated_by, counting_audit, CountingAudit, CoverMode,
};
use pqlab_core::{Error, Result};

use crate::config::{
    CommConvertParams, CostSearchParams, CountingAuditParams, ExactLearnParams, Experiment,
    ExperimentConfig, InstanceKindParam, LearnSimParams, MinCoverParams, ModeParam, PolicyParam,
    ProblemParam, SiTransformParams,
};

/// Everything a run produces, before any file is written.
pub struct ExperimentOutput {
    pub summary: Value,
    pub csv: String,
    pub csv_name: String,
    pub json_name: String,
}

/// Floats in CSV cells carry 12 significant digits.
fn csv_f64(v: f64) -> String {
    format!("{v:.11e}")
}

fn summary_doc(cfg: &ExperimentConfig, results: Value, csv_name: &str) -> Result<Value> {
    let mut echo = serde_json::to_value(cfg)
        .map_err(|e| Error::InvalidArgument(format!("config echo failed: {e}")))?;
    if let Some(map) = echo.as_object_mut() {
        map.remove("out_dir");
    }
    Ok(json!({
        "artifact": "pqlab",
        "version": env!("CARGO_PKG_VERSION"),
        "config": echo,
        "results": results,
        "files": { "csv": csv_name },
    }))
}

pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let kind = cfg.experiment.kind();
    let (results, csv) = match &cfg.experiment {
        Experiment::LearnSim(p) => learn_sim(cfg.seed, p)?,
        Experiment::ExactLearn(p) => exact_learn(cfg.seed, p)?,
        Experiment::MinCover(p) => min_cover(p)?,
        Experiment::CountingAudit(p) => audit_experiment(p)?,
        Experiment::CommConvert(p) => comm_convert(cfg.seed, p)?,
        Experiment::SiTransform(p) => si_transform(cfg.seed, p)?,
        Experiment::CostSearch(p) => cost_search(p)?,
    };
    let csv_name = format!("{kind}.csv");
    Ok(ExperimentOutput {
        summary: summary_doc(cfg, results, &csv_name)?,
        csv,
        csv_name,
        json_name: format!("{kind}.json"),
    })
}

fn policy(p: PolicyParam) -> QueryPolicy {
    match p {
        PolicyParam::AllQueries => QueryPolicy::AllQueries,
        PolicyParam::UniformRandom => QueryPolicy::UniformRandom,
    }
}

fn parse_concept(s: &Option<String>) -> Result<Option<Concept>> {
    s.as_ref().map(|s| Concept::from_bit_string(s)).transpose()
}

#[derive(Serialize)]
struct TrialResults<'a> {
    asked: u64,
    give_ups: u64,
    answered: u64,
    correct: u64,
    give_up_rate: f64,
    correct_over_answered: Option<f64>,
    expected_give_up: f64,
    give_up_within_budget: bool,
    per_query: &'a BTreeMap<u64, pqlab_core::learner::QueryStats>,
}

fn trial_output(stats: &TrialStats, n: u64, k: u32) -> Result<(Value, String)> {
    let mut csv = String::from("trial,n,k,q,gave_up,ans_x,ans_b,correct\n");
    for r in &stats.records {
        let (ans_x, ans_b, correct) = match (&r.answer, r.correct) {
            (Some(a), Some(ok)) => (
                a.x.value().to_string(),
                u8::from(a.b).to_string(),
                ok.to_string(),
            ),
            _ => (String::new(), String::new(), String::new()),
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.trial, n, k, r.query, r.gave_up, ans_x, ans_b, correct
        ));
    }
    let results = TrialResults {
        asked: stats.asked,
        give_ups: stats.give_ups,
        answered: stats.answered,
        correct: stats.correct,
        give_up_rate: stats.give_ups as f64 / stats.asked as f64,
        correct_over_answered: (stats.answered > 0)
            .then(|| stats.correct as f64 / stats.answered as f64),
        expected_give_up: stats.expected_give_up,
        give_up_within_budget: stats.give_up_within_budget,
        per_query: &stats.per_query,
    };
    let value = serde_json::to_value(&results)
        .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?;
    Ok((value, csv))
}

fn learn_sim(seed: u64, p: &LearnSimParams) -> Result<(Value, String)> {
    let cfg = TrialConfig {
        modulus: p.n,
        mode: LearnerMode::Sampled { copies: p.k },
        trials: p.trials,
        seed,
        policy: policy(p.policy),
        concept: parse_concept(&p.concept)?,
    };
    let stats = run_trials(&cfg)?;
    trial_output(&stats, p.n, p.k)
}

fn exact_learn(seed: u64, p: &ExactLearnParams) -> Result<(Value, String)> {
    let cfg = TrialConfig {
        modulus: p.n,
        mode: LearnerMode::ExactOneExample,
        trials: p.trials,
        seed,
        policy: policy(p.policy),
        concept: parse_concept(&p.concept)?,
    };
    let stats = run_trials(&cfg)?;
    trial_output(&stats, p.n, 0)
}

fn cover_mode(m: ModeParam) -> CoverMode {
    match m {
        ModeParam::Exact => CoverMode::Exact,
        ModeParam::Greedy => CoverMode::Greedy,
    }
}

fn min_cover(p: &MinCoverParams) -> Result<(Value, String)> {
    let cert = approx_cover_oracle(p.n, cover_mode(p.mode))?;
    let mut csv = String::from("class,cover_index\n");
    for (class, idx) in &cert.coverage {
        csv.push_str(&format!("{class},{idx}\n"));
    }
    let value = serde_json::to_value(&cert)
        .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?;
    Ok((value, csv))
}

fn audit_experiment(p: &CountingAuditParams) -> Result<(Value, String)> {
    let cert = approx_cover_oracle(p.n, cover_mode(p.mode))?;
    let mut audits: Vec<CountingAudit> = Vec::new();
    let mut csv = String::from(
        "h_index,c0_size,q0_size,e0_size,nonisolated,forest_edges,entropy_gap,bit_sum,all_hold\n",
    );
    for (i, h) in cert.cover.iter().enumerate() {
        let c0 = concepts_approximated_by(h)?;
        let audit = counting_audit(h, &c0)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            i,
            audit.c0_size,
            audit.q0.len(),
            audit.e0.len(),
            audit.nonisolated_vertices,
            audit.forest_edges.len(),
            csv_f64(audit.entropy_gap),
            csv_f64(audit.sum_one_minus_h_iq),
            audit.checks.all_hold()
        ));
        audits.push(audit);
    }
    let results = json!({
        "cover_size": cert.cover.len(),
        "cover_minimal": cert.minimal,
        "all_hold_everywhere": audits.iter().all(|a| a.checks.all_hold()),
        "audits": serde_json::to_value(&audits)
            .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?,
    });
    Ok((results, csv))
}

fn comm_convert(seed: u64, p: &CommConvertParams) -> Result<(Value, String)> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let kind = match p.kind {
        InstanceKindParam::LowInformation => InstanceKind::LowInformation,
        InstanceKindParam::HighInformation => InstanceKind::HighInformation,
    };
    let ConversionInstance { family, problem } = conversion_instance(&mut rng, kind);
    let m = p.m.unwrap_or_else(|| mutual_information(&family));
    let report = commlab::convert_to_classical(
        &family,
        &problem,
        p.eps,
        m,
        p.draws,
        p.sample_cap,
        &mut rng,
    )?;
    let mut csv = String::from("x,prior,eps_x,kl_raw,kl_refined,per_x_ok,hit_rate\n");
    for x in 0..family.num_inputs() {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            x,
            csv_f64(family.prior().prob(x)),
            csv_f64(report.audit.eps_x[x]),
            csv_f64(report.audit.kl_raw[x]),
            csv_f64(report.audit.kl_refined[x]),
            report.audit.per_x_ok[x],
            csv_f64(report.per_input_hit[x]),
        ));
    }
    let results = json!({
        "instance": {
            "inputs": family.num_inputs(),
            "answers": family.num_answers(),
        },
        "report": serde_json::to_value(&report)
            .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?,
    });
    Ok((results, csv))
}

fn si_transform(seed: u64, p: &SiTransformParams) -> Result<(Value, String)> {
    if p.max_inputs < 3 {
        return Err(Error::InvalidArgument(
            "si-transform needs max_inputs of at least 3".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let two_sided = two_sided_instance(&mut rng, p.max_inputs);
    let transformed = single_input_transform(&two_sided, p.eps, p.tuple_cap)?;
    let cost_original = one_way_cost_two_sided(&two_sided, p.delta)?;
    let cost_transformed = one_way_cost_single(&transformed.problem, p.delta)?;
    let leq = cost_transformed.messages <= cost_original.messages;
    let mut csv = String::from(
        "nx,ny,nz,eps,delta,tuples,degenerate,orig_messages,orig_bits,trans_messages,trans_bits,trans_leq_orig\n",
    );
    csv.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
        two_sided.num_x(),
        two_sided.num_y(),
        two_sided.num_z(),
        csv_f64(p.eps),
        csv_f64(p.delta),
        transformed.tuple_count,
        transformed.degenerate_threshold,
        cost_original.messages,
        cost_original.bits,
        cost_transformed.messages,
        cost_transformed.bits,
        leq,
    ));
    let results = json!({
        "dims": { "x": two_sided.num_x(), "y": two_sided.num_y(), "z": two_sided.num_z() },
        "eps": p.eps,
        "delta": p.delta,
        "tuple_count": transformed.tuple_count,
        "degenerate_threshold": transformed.degenerate_threshold,
        "cost_original": serde_json::to_value(cost_original)
            .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?,
        "cost_transformed": serde_json::to_value(cost_transformed)
            .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?,
        "transformed_leq_original": leq,
    });
    Ok((results, csv))
}

fn build_problem(p: &ProblemParam) -> Result<BuiltProblem> {
    match p {
        ProblemParam::Single { valid, mu } => {
            let mu = match mu {
                Some(w) => commlab::Distribution::new(w.clone())?,
                None => commlab::Distribution::uniform(valid.len()),
            };
            Ok(BuiltProblem::Single(SingleInputProblem::new(
                valid.clone(),
                mu,
            )?))
        }
        ProblemParam::TwoSided {
            x,
            y,
            z,
            valid_triples,
            mu,
        } => {
            let mut valid = vec![false; x * y * z];
            for &(xi, yi, zi) in valid_triples {
                if xi >= *x || yi >= *y || zi >= *z {
                    return Err(Error::InvalidArgument(format!(
                        "triple ({xi}, {yi}, {zi}) outside the declared dimensions"
                    )));
                }
                valid[(xi * y + yi) * z + zi] = true;
            }
            let mu = mu
                .clone()
                .unwrap_or_else(|| vec![1.0 / (x * y) as f64; x * y]);
            Ok(BuiltProblem::TwoSided(TwoSidedProblem::new(
                *x, *y, *z, valid, mu,
            )?))
        }
        ProblemParam::ConceptClass { n } => Ok(BuiltProblem::Single(commlab::concept_to_comm(
            *n,
            commlab::DEFAULT_TUPLE_CAP,
        )?)),
    }
}

enum BuiltProblem {
    Single(SingleInputProblem),
    TwoSided(TwoSidedProblem),
}

fn cost_search(p: &CostSearchParams) -> Result<(Value, String)> {
    let (report, shape) = match build_problem(&p.problem)? {
        BuiltProblem::Single(prob) => (
            one_way_cost_single(&prob, p.eps)?,
            json!({ "type": "single", "inputs": prob.num_inputs(), "answers": prob.num_answers() }),
        ),
        BuiltProblem::TwoSided(prob) => (
            one_way_cost_two_sided(&prob, p.eps)?,
            json!({
                "type": "two-sided",
                "x": prob.num_x(), "y": prob.num_y(), "z": prob.num_z(),
            }),
        ),
    };
    let mut csv = String::from("messages,bits,achieved_error\n");
    csv.push_str(&format!(
        "{},{},{}\n",
        report.messages,
        report.bits,
        csv_f64(report.achieved_error)
    ));
    let results = json!({
        "problem": shape,
        "eps": p.eps,
        "report": serde_json::to_value(report)
            .map_err(|e| Error::InvalidArgument(format!("summary serialization failed: {e}")))?,
    });
    Ok((results, csv))
}
