//! The predictive learner over the parity concept class, built on the
//! `qsim` primitives.
//!
//! Learning phase: measure the parity register of up to `k` example
//! copies in the ± basis, keep the first minus copy (otherwise give up,
//! probability `(1/2)^k`), measure its x register, shift. Testing phase:
//! a matching measurement on `m_q` plus parity discrimination produces
//! an answer `(a, C_a ⊕ C_{a+q})`, which is always valid.
//!
//! The phase-encoded one-example variant never gives up.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::concepts::{valid_answer, Answer, Concept};
use crate::error::{Error, Result};
use crate::modmath::{build_matching, ensure_odd_prime, Zmod};
use crate::qsim::{
    enumerate_matching, enumerate_pm_basis, enumerate_x_register, measure_matching,
    measure_pm_basis, measure_x_register, prepare_example, prepare_phase_example,
    shift_transform, distinguish_parity, Outcome, StateVector,
};

/// What the learner holds after a successful learning phase: the
/// measured anchor `x0` and the residual state `Σ_{k≠x0} (-1)^{C_k} |k⟩`
/// (up to a global phase). Answering a query consumes it.
#[derive(Clone, Debug)]
pub struct LearnerMemory {
    x0: Zmod,
    state: StateVector,
}

impl LearnerMemory {
    pub fn anchor(&self) -> Zmod {
        self.x0
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn modulus(&self) -> u64 {
        self.state.modulus()
    }
}

/// Result of the learning phase.
#[derive(Clone, Debug)]
pub enum Acquisition {
    /// Every ± measurement came out plus.
    GaveUp,
    Learned(LearnerMemory),
}

/// Runs the learning phase on `copies` example copies of `c`, measuring
/// them sequentially and keeping the first minus outcome.
pub fn acquire<R: Rng + ?Sized>(c: &Concept, copies: u32, rng: &mut R) -> Result<Acquisition> {
    if copies == 0 {
        return Err(Error::InvalidArgument(
            "the learning phase needs at least one example copy".into(),
        ));
    }
    let mut kept = None;
    for _ in 0..copies {
        let outcome = measure_pm_basis(&prepare_example(c), rng)?;
        if outcome.outcome == Outcome::Minus {
            kept = Some(outcome.post_state);
            break;
        }
    }
    let Some(pair_state) = kept else {
        return Ok(Acquisition::GaveUp);
    };
    let measured = measure_x_register(&pair_state, rng)?;
    let Outcome::X(x0) = measured.outcome else {
        unreachable!("x-register measurement yields X outcomes")
    };
    let x0 = Zmod::new(x0, c.modulus());
    let state = shift_transform(&measured.post_state, x0)?;
    Ok(Acquisition::Learned(LearnerMemory { x0, state }))
}

fn matching_answer<R: Rng + ?Sized>(
    state: &StateVector,
    x0: Zmod,
    q: u64,
    rng: &mut R,
) -> Result<Answer> {
    let n = state.modulus();
    let m = build_matching(n, x0, q)?;
    let branch = measure_matching(state, &m, rng)?;
    let Outcome::Edge(a, b) = branch.outcome else {
        unreachable!("matching measurement yields edge outcomes")
    };
    let bit = distinguish_parity(&branch.post_state, (a, b))?;
    Ok(Answer::new(Zmod::new(a, n), bit))
}

/// Answers a single testing query, consuming the memory: the state
/// collapses, so one acquisition supports exactly one answer.
pub fn answer_query<R: Rng + ?Sized>(
    mem: LearnerMemory,
    q: u64,
    rng: &mut R,
) -> Result<Answer> {
    matching_answer(&mem.state, mem.x0, q, rng)
}

/// The one-example variant: from a single phase-encoded example, answer
/// `q` without any give-up branch.
pub fn learn_exact<R: Rng + ?Sized>(c: &Concept, q: u64, rng: &mut R) -> Result<Answer> {
    let measured = measure_x_register(&prepare_phase_example(c), rng)?;
    let Outcome::X(x0) = measured.outcome else {
        unreachable!("x-register measurement yields X outcomes")
    };
    let x0 = Zmod::new(x0, c.modulus());
    let state = shift_transform(&measured.post_state, x0)?;
    matching_answer(&state, x0, q, rng)
}

/// The learning phase with every branch enumerated: the give-up
/// probability plus one weighted memory per anchor value.
#[derive(Clone, Debug)]
pub struct AcquireBranches {
    pub give_up_probability: f64,
    /// `(probability, memory)` pairs; probabilities sum to
    /// `1 - give_up_probability`.
    pub memories: Vec<(f64, LearnerMemory)>,
}

/// Enumerates the learning phase exactly. The kept copy's post-state is
/// the same whichever copy came out minus, so branches collapse to the
/// give-up mass `(P(plus))^k` and one branch per anchor.
pub fn enumerate_acquire(c: &Concept, copies: u32) -> Result<AcquireBranches> {
    if copies == 0 {
        return Err(Error::InvalidArgument(
            "the learning phase needs at least one example copy".into(),
        ));
    }
    let pm = enumerate_pm_basis(&prepare_example(c))?;
    let minus = pm.into_iter().find(|b| b.outcome == Outcome::Minus);
    let Some(minus) = minus else {
        return Ok(AcquireBranches {
            give_up_probability: 1.0,
            memories: Vec::new(),
        });
    };
    let give_up_probability = (1.0 - minus.probability).powi(copies as i32);
    let success = 1.0 - give_up_probability;
    let mut memories = Vec::new();
    for branch in enumerate_x_register(&minus.post_state)? {
        let Outcome::X(x0) = branch.outcome else {
            unreachable!()
        };
        let x0 = Zmod::new(x0, c.modulus());
        let state = shift_transform(&branch.post_state, x0)?;
        memories.push((success * branch.probability, LearnerMemory { x0, state }));
    }
    Ok(AcquireBranches {
        give_up_probability,
        memories,
    })
}

/// Enumerates the testing phase of a held memory for query `q`.
pub fn enumerate_answers(mem: &LearnerMemory, q: u64) -> Result<Vec<(f64, Answer)>> {
    let n = mem.modulus();
    let m = build_matching(n, mem.x0, q)?;
    let mut answers = Vec::new();
    for branch in enumerate_matching(&mem.state, &m)? {
        let Outcome::Edge(a, b) = branch.outcome else {
            unreachable!()
        };
        let bit = distinguish_parity(&branch.post_state, (a, b))?;
        answers.push((branch.probability, Answer::new(Zmod::new(a, n), bit)));
    }
    Ok(answers)
}

/// Enumerates every branch of the one-example learner for query `q`.
/// Probabilities sum to 1: there is no give-up branch.
pub fn enumerate_exact_answers(c: &Concept, q: u64) -> Result<Vec<(f64, Answer)>> {
    let n = c.modulus();
    let mut answers = Vec::new();
    for branch in enumerate_x_register(&prepare_phase_example(c))? {
        let Outcome::X(x0) = branch.outcome else {
            unreachable!()
        };
        let x0 = Zmod::new(x0, n);
        let state = shift_transform(&branch.post_state, x0)?;
        let mem = LearnerMemory { x0, state };
        for (p, a) in enumerate_answers(&mem, q)? {
            answers.push((branch.probability * p, a));
        }
    }
    Ok(answers)
}

/// Which learner the trial harness runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LearnerMode {
    /// The k-copy learner with its give-up branch.
    Sampled { copies: u32 },
    /// The phase-encoded one-example learner.
    ExactOneExample,
}

/// How the harness picks testing queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QueryPolicy {
    /// Every trial answers every query in `[1, N-1]`, re-acquiring per query.
    AllQueries,
    /// Every trial answers one uniformly random query.
    UniformRandom,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialConfig {
    pub modulus: u64,
    pub mode: LearnerMode,
    pub trials: u64,
    pub seed: u64,
    pub policy: QueryPolicy,
    /// Fixed target concept; a fresh random concept per trial when absent.
    pub concept: Option<Concept>,
}

/// One (trial, query) outcome. `answer` and `correct` are present iff
/// the learner did not give up; `stream` is the per-trial RNG stream.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub stream: u64,
    pub query: u64,
    pub gave_up: bool,
    pub answer: Option<Answer>,
    pub correct: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct QueryStats {
    pub asked: u64,
    pub gave_up: u64,
    pub answered: u64,
    pub correct: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialStats {
    pub asked: u64,
    pub give_ups: u64,
    pub answered: u64,
    pub correct: u64,
    pub per_query: BTreeMap<u64, QueryStats>,
    /// `(1/2)^k` for the k-copy learner, 0 for the exact learner.
    pub expected_give_up: f64,
    /// Whether the expected give-up rate stays within the 1/6 failure
    /// budget of the 5/6 success requirement (k ≥ 3; always for exact).
    pub give_up_within_budget: bool,
    pub records: Vec<TrialRecord>,
}

/// Runs seeded trials. Trial `t` owns RNG stream `t` of the seed, so
/// records are reproducible and independent of scheduling.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialStats> {
    ensure_odd_prime(cfg.modulus)?;
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if let LearnerMode::Sampled { copies: 0 } = cfg.mode {
        return Err(Error::InvalidArgument(
            "the learning phase needs at least one example copy".into(),
        ));
    }
    if let Some(c) = &cfg.concept {
        if c.modulus() != cfg.modulus {
            return Err(Error::ModulusMismatch {
                left: c.modulus(),
                right: cfg.modulus,
            });
        }
    }

    let n = cfg.modulus;
    let expected_give_up = match cfg.mode {
        LearnerMode::Sampled { copies } => 0.5f64.powi(copies as i32),
        LearnerMode::ExactOneExample => 0.0,
    };
    let mut stats = TrialStats {
        asked: 0,
        give_ups: 0,
        answered: 0,
        correct: 0,
        per_query: (1..n).map(|q| (q, QueryStats::default())).collect(),
        expected_give_up,
        give_up_within_budget: expected_give_up <= 1.0 / 6.0,
        records: Vec::new(),
    };

    for trial in 0..cfg.trials {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial);
        let concept = match &cfg.concept {
            Some(c) => c.clone(),
            None => Concept::random(n, &mut rng)?,
        };
        let queries: Vec<u64> = match cfg.policy {
            QueryPolicy::AllQueries => (1..n).collect(),
            QueryPolicy::UniformRandom => vec![rng.random_range(1..n)],
        };
        for q in queries {
            let answer = match cfg.mode {
                LearnerMode::Sampled { copies } => match acquire(&concept, copies, &mut rng)? {
                    Acquisition::GaveUp => None,
                    Acquisition::Learned(mem) => Some(answer_query(mem, q, &mut rng)?),
                },
                LearnerMode::ExactOneExample => Some(learn_exact(&concept, q, &mut rng)?),
            };
            let correct = answer
                .as_ref()
                .map(|a| valid_answer(&concept, q, a))
                .transpose()?;

            stats.asked += 1;
            let qs = stats.per_query.get_mut(&q).expect("query key pre-seeded");
            qs.asked += 1;
            match (&answer, correct) {
                (None, _) => {
                    stats.give_ups += 1;
                    qs.gave_up += 1;
                }
                (Some(_), Some(ok)) => {
                    stats.answered += 1;
                    qs.answered += 1;
                    if ok {
                        stats.correct += 1;
                        qs.correct += 1;
                    }
                }
                (Some(_), None) => unreachable!("answered implies graded"),
            }
            stats.records.push(TrialRecord {
                trial,
                stream: trial,
                query: q,
                gave_up: answer.is_none(),
                answer,
                correct,
            });
        }
    }
    Ok(stats)
}
