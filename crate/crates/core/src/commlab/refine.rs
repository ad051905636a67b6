//! Refinement of an answer family against a relation: condition each
//! per-input answer distribution on correctness and audit the KL chain
//! that bounds how far the refined distributions drift from the answer
//! marginal.

use serde::Serialize;

use super::info::{kl_divergence, mutual_information, AnswerFamily, Distribution};
use super::problems::SingleInputProblem;
use super::COMM_TOL;
use crate::error::{Error, Result};

/// The refined family together with the per-input invalid mass `ε_x`.
#[derive(Clone, Debug)]
pub struct RefinedFamily {
    pub family: AnswerFamily,
    pub eps_x: Vec<f64>,
}

/// Zeroes out invalid answers and renormalizes each `μ_x` by `1 - ε_x`,
/// where `ε_x` is the invalid mass. Fails on any input whose answers
/// are never valid.
pub fn refine_family(f: &AnswerFamily, p: &SingleInputProblem) -> Result<RefinedFamily> {
    if f.num_inputs() != p.num_inputs() || f.num_answers() != p.num_answers() {
        return Err(Error::SizeMismatch(format!(
            "family is {}x{}, problem is {}x{}",
            f.num_inputs(),
            f.num_answers(),
            p.num_inputs(),
            p.num_answers()
        )));
    }
    let mut eps_x = Vec::with_capacity(f.num_inputs());
    let mut refined = Vec::with_capacity(f.num_inputs());
    for x in 0..f.num_inputs() {
        let cond = f.conditional(x);
        let valid_mass: f64 = (0..f.num_answers())
            .filter(|&z| p.is_valid(x, z))
            .map(|z| cond.prob(z))
            .sum();
        if valid_mass <= 1e-12 {
            return Err(Error::NoValidMass { input: x });
        }
        eps_x.push(1.0 - valid_mass);
        let probs = (0..f.num_answers())
            .map(|z| {
                if p.is_valid(x, z) {
                    cond.prob(z) / valid_mass
                } else {
                    0.0
                }
            })
            .collect();
        refined.push(Distribution::new(probs)?);
    }
    Ok(RefinedFamily {
        family: AnswerFamily::new(f.prior().clone(), refined)?,
        eps_x,
    })
}

/// The audited KL chain for a refinement. `per_x_ok[x]` checks
///
/// ```text
/// KL(μ'_x ‖ μ^B) ≤ (KL(μ_x ‖ μ^B) + log2(1/(1-ε_x))) / (1-ε_x)
/// ```
///
/// and the aggregate bound checks, with `ε = max_x ε_x` and
/// `m = I(A;B)`,
///
/// ```text
/// E_x[KL(μ'_x ‖ μ^B)] ≤ m/(1-ε) + log2(1/(1-ε))/(1-ε)  (< 2m/(1-ε)).
/// ```
///
/// The per-input step can genuinely fail when an input's invalid mass
/// sits on answers that are far more popular under the marginal than
/// under the input's own distribution; the booleans report rather than
/// assume. The simplified `2m/(1-ε)` form needs `m` at least about one
/// bit, so `simplified_ok` is informative only there.
#[derive(Clone, Debug, Serialize)]
pub struct RefineAudit {
    pub eps_x: Vec<f64>,
    pub eps_max: f64,
    pub kl_raw: Vec<f64>,
    pub kl_refined: Vec<f64>,
    pub per_x_bound: Vec<f64>,
    pub per_x_ok: Vec<bool>,
    pub mutual_info: f64,
    pub expected_refined_kl: f64,
    pub aggregate_bound: f64,
    pub aggregate_ok: bool,
    pub simplified_bound: f64,
    pub simplified_ok: bool,
}

impl RefineAudit {
    pub fn all_per_x_ok(&self) -> bool {
        self.per_x_ok.iter().all(|&b| b)
    }
}

/// Refines `f` against `p` and evaluates every inequality of the chain.
pub fn refine_audit(f: &AnswerFamily, p: &SingleInputProblem) -> Result<RefineAudit> {
    let refined = refine_family(f, p)?;
    let marginal = f.marginal();
    let mutual_info = mutual_information(f);

    let mut kl_raw = Vec::with_capacity(f.num_inputs());
    let mut kl_refined = Vec::with_capacity(f.num_inputs());
    let mut per_x_bound = Vec::with_capacity(f.num_inputs());
    let mut per_x_ok = Vec::with_capacity(f.num_inputs());
    let mut expected_refined_kl = 0.0;
    for x in 0..f.num_inputs() {
        let raw = kl_divergence(f.conditional(x), &marginal)?;
        let fine = kl_divergence(refined.family.conditional(x), &marginal)?;
        let keep = 1.0 - refined.eps_x[x];
        let bound = (raw + (1.0 / keep).log2()) / keep;
        kl_raw.push(raw);
        kl_refined.push(fine);
        per_x_bound.push(bound);
        per_x_ok.push(fine <= bound + COMM_TOL);
        expected_refined_kl += f.prior().prob(x) * fine;
    }

    let eps_max = refined.eps_x.iter().copied().fold(0.0, f64::max);
    let keep = 1.0 - eps_max;
    let aggregate_bound = mutual_info / keep + (1.0 / keep).log2() / keep;
    let simplified_bound = 2.0 * mutual_info / keep;
    Ok(RefineAudit {
        eps_x: refined.eps_x,
        eps_max,
        kl_raw,
        kl_refined,
        per_x_bound,
        per_x_ok,
        mutual_info,
        expected_refined_kl,
        aggregate_bound,
        aggregate_ok: expected_refined_kl <= aggregate_bound + COMM_TOL,
        simplified_bound,
        simplified_ok: expected_refined_kl < simplified_bound + COMM_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(valid: Vec<Vec<bool>>) -> SingleInputProblem {
        let n = valid.len();
        SingleInputProblem::new(valid, Distribution::uniform(n)).unwrap()
    }

    #[test]
    fn perfect_families_are_fixed_points() {
        let f = AnswerFamily::new(
            Distribution::uniform(2),
            vec![Distribution::point_mass(2, 0), Distribution::point_mass(2, 1)],
        )
        .unwrap();
        let p = problem(vec![vec![true, false], vec![false, true]]);
        let refined = refine_family(&f, &p).unwrap();
        assert_eq!(refined.eps_x, vec![0.0, 0.0]);
        for x in 0..2 {
            assert_eq!(
                refined.family.conditional(x).probs(),
                f.conditional(x).probs()
            );
        }
    }

    #[test]
    fn half_invalid_mass_becomes_a_point_mass() {
        let f = AnswerFamily::new(
            Distribution::uniform(1),
            vec![Distribution::uniform(2)],
        )
        .unwrap();
        let p = problem(vec![vec![true, false]]);
        let refined = refine_family(&f, &p).unwrap();
        assert!((refined.eps_x[0] - 0.5).abs() < 1e-12);
        assert_eq!(refined.family.conditional(0).probs(), &[1.0, 0.0]);
    }

    #[test]
    fn refinement_rejects_never_correct_inputs() {
        let f = AnswerFamily::new(
            Distribution::uniform(1),
            vec![Distribution::uniform(2)],
        )
        .unwrap();
        let p = problem(vec![vec![false, false]]);
        assert_eq!(
            refine_family(&f, &p).err(),
            Some(Error::NoValidMass { input: 0 })
        );
    }

    #[test]
    fn audit_flags_adversarial_refinements() {
        // Input 0 concentrates its invalid mass on the answer the
        // marginal loves: the per-input step of the chain fails, and the
        // audit must report that honestly.
        let f = AnswerFamily::new(
            Distribution::new(vec![0.1, 0.9]).unwrap(),
            vec![
                Distribution::new(vec![0.9, 0.1]).unwrap(),
                Distribution::new(vec![1.0 / 90.0, 89.0 / 90.0]).unwrap(),
            ],
        )
        .unwrap();
        let p = problem(vec![vec![true, false], vec![true, true]]);
        let audit = refine_audit(&f, &p).unwrap();
        assert!(!audit.per_x_ok[0]);
        assert!(audit.per_x_ok[1]);
    }

    #[test]
    fn audit_holds_for_input_independent_failure_noise() {
        // Every input pushes the same constant fraction of mass onto a
        // shared never-valid answer; the chain then holds with slack.
        let delta = 0.125;
        let f = AnswerFamily::new(
            Distribution::uniform(3),
            vec![
                Distribution::new(vec![1.0 - delta, 0.0, 0.0, delta]).unwrap(),
                Distribution::new(vec![0.0, 1.0 - delta, 0.0, delta]).unwrap(),
                Distribution::new(vec![0.0, 0.0, 1.0 - delta, delta]).unwrap(),
            ],
        )
        .unwrap();
        let p = problem(vec![
            vec![true, false, false, false],
            vec![false, true, false, false],
            vec![false, false, true, false],
        ]);
        let audit = refine_audit(&f, &p).unwrap();
        assert!(audit.all_per_x_ok());
        assert!(audit.aggregate_ok);
        assert!(audit.mutual_info >= 1.0);
        assert!(audit.simplified_ok);
        assert!((audit.eps_max - delta).abs() < 1e-12);
    }
}
