//! Communication problems: single-input relations with an input
//! distribution, two-sided relations, the single-input transformation,
//! and the problem constructors used by the learning reductions.

use serde::Serialize;

use super::info::Distribution;
use super::COMM_TOL;
use crate::concepts::{concept_classes, valid_answer, Answer};
use crate::error::{Error, Result};
use crate::modmath::Zmod;

/// Default cap on enumerated answer-tuple spaces.
pub const DEFAULT_TUPLE_CAP: u64 = 16384;

/// A relation `P ⊆ X × {0} × Z` (Bob gets no input) together with a
/// distribution over `X`.
#[derive(Clone, Debug, Serialize)]
pub struct SingleInputProblem {
    valid: Vec<Vec<bool>>,
    mu: Distribution,
}

impl SingleInputProblem {
    pub fn new(valid: Vec<Vec<bool>>, mu: Distribution) -> Result<Self> {
        if valid.is_empty() || valid[0].is_empty() {
            return Err(Error::InvalidArgument(
                "single-input problems need nonempty input and answer sets".into(),
            ));
        }
        let answers = valid[0].len();
        if valid.iter().any(|row| row.len() != answers) {
            return Err(Error::SizeMismatch(
                "validity rows must share the answer set".into(),
            ));
        }
        if mu.len() != valid.len() {
            return Err(Error::SizeMismatch(format!(
                "distribution over {} inputs, relation over {}",
                mu.len(),
                valid.len()
            )));
        }
        Ok(SingleInputProblem { valid, mu })
    }

    pub fn num_inputs(&self) -> usize {
        self.valid.len()
    }

    pub fn num_answers(&self) -> usize {
        self.valid[0].len()
    }

    pub fn is_valid(&self, x: usize, z: usize) -> bool {
        self.valid[x][z]
    }

    pub fn mu(&self) -> &Distribution {
        &self.mu
    }
}

/// A relation `P ⊆ X × Y × Z` with a distribution over `X × Y`.
#[derive(Clone, Debug, Serialize)]
pub struct TwoSidedProblem {
    num_x: usize,
    num_y: usize,
    num_z: usize,
    /// Flattened as `x·(|Y|·|Z|) + y·|Z| + z`.
    valid: Vec<bool>,
    /// Flattened as `x·|Y| + y`; sums to 1 within 1e-9.
    mu: Vec<f64>,
}

impl TwoSidedProblem {
    pub fn new(
        num_x: usize,
        num_y: usize,
        num_z: usize,
        valid: Vec<bool>,
        mu: Vec<f64>,
    ) -> Result<Self> {
        if num_x == 0 || num_y == 0 || num_z == 0 {
            return Err(Error::InvalidArgument(
                "two-sided problems need nonempty X, Y and Z".into(),
            ));
        }
        if valid.len() != num_x * num_y * num_z {
            return Err(Error::SizeMismatch(format!(
                "validity table has {} entries, expected {}",
                valid.len(),
                num_x * num_y * num_z
            )));
        }
        if mu.len() != num_x * num_y {
            return Err(Error::SizeMismatch(format!(
                "input distribution has {} entries, expected {}",
                mu.len(),
                num_x * num_y
            )));
        }
        if let Some(&p) = mu.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > COMM_TOL {
            return Err(Error::Unnormalized { sum });
        }
        Ok(TwoSidedProblem {
            num_x,
            num_y,
            num_z,
            valid,
            mu,
        })
    }

    pub fn num_x(&self) -> usize {
        self.num_x
    }

    pub fn num_y(&self) -> usize {
        self.num_y
    }

    pub fn num_z(&self) -> usize {
        self.num_z
    }

    pub fn is_valid(&self, x: usize, y: usize, z: usize) -> bool {
        self.valid[(x * self.num_y + y) * self.num_z + z]
    }

    pub fn mu(&self, x: usize, y: usize) -> f64 {
        self.mu[x * self.num_y + y]
    }

    /// Marginal distribution of the `X` coordinate.
    pub fn marginal_x(&self) -> Distribution {
        let weights = (0..self.num_x)
            .map(|x| (0..self.num_y).map(|y| self.mu(x, y)).sum())
            .collect();
        Distribution::from_weights(weights).expect("mu sums to 1")
    }

    /// Conditional distribution of `Y` given `X = x`; requires positive
    /// marginal mass on `x`.
    pub fn conditional_y(&self, x: usize) -> Result<Distribution> {
        let weights: Vec<f64> = (0..self.num_y).map(|y| self.mu(x, y)).collect();
        Distribution::from_weights(weights).map_err(|_| {
            Error::InvalidArgument(format!(
                "input {x} has zero marginal mass, conditional undefined"
            ))
        })
    }
}

/// Decodes answer-tuple index `t` into per-`y` answers, base `num_z`,
/// `y = 0` in the lowest digit.
pub fn decode_tuple(t: usize, num_y: usize, num_z: usize) -> Vec<usize> {
    let mut rest = t;
    (0..num_y)
        .map(|_| {
            let z = rest % num_z;
            rest /= num_z;
            z
        })
        .collect()
}

/// The single-input transformation of a two-sided problem.
#[derive(Clone, Debug, Serialize)]
pub struct TransformedProblem {
    pub problem: SingleInputProblem,
    pub tuple_count: u64,
    /// Set when `eps` does not exceed the smallest positive conditional
    /// mass: the threshold then accepts any tuple that is correct
    /// somewhere on the support.
    pub degenerate_threshold: bool,
}

/// Builds `P'`: Bob answers every `y` at once, and a tuple `(z_y)` is
/// valid for `x` iff `Pr_{y ~ μ_x}[(x, y, z_y) ∈ P] ≥ eps`. The marginal
/// of `μ` over `X` is carried over.
pub fn single_input_transform(
    p: &TwoSidedProblem,
    eps: f64,
    tuple_cap: u64,
) -> Result<TransformedProblem> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "transformation threshold must lie in (0, 1], got {eps}"
        )));
    }
    let tuples = (p.num_z as u64).checked_pow(p.num_y as u32);
    let tuples = match tuples {
        Some(t) if t <= tuple_cap => t,
        _ => {
            return Err(Error::CapExceeded {
                what: "answer tuple space",
                value: tuples.unwrap_or(u64::MAX),
                cap: tuple_cap,
            })
        }
    };

    let conditionals: Vec<Distribution> = (0..p.num_x)
        .map(|x| p.conditional_y(x))
        .collect::<Result<_>>()?;
    let min_positive = conditionals
        .iter()
        .flat_map(|d| d.probs().iter().copied())
        .filter(|&w| w > 0.0)
        .fold(f64::INFINITY, f64::min);

    let mut valid = vec![vec![false; tuples as usize]; p.num_x];
    for (x, row) in valid.iter_mut().enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let zs = decode_tuple(t, p.num_y, p.num_z);
            let hit: f64 = (0..p.num_y)
                .filter(|&y| p.is_valid(x, y, zs[y]))
                .map(|y| conditionals[x].prob(y))
                .sum();
            *slot = hit >= eps - COMM_TOL;
        }
    }
    Ok(TransformedProblem {
        problem: SingleInputProblem::new(valid, p.marginal_x())?,
        tuple_count: tuples,
        degenerate_threshold: eps <= min_positive + 1e-12,
    })
}

/// The single-input problem of answering every query about a hidden
/// parity concept at once: inputs are the concept classes over `Z_n`,
/// answers are full answer tuples over the queries `[1, n-1]` (each
/// digit encodes `(x, b)` as `2x + b`), and a tuple is valid iff at
/// least `⌈4(n-1)/5⌉` of its answers are.
pub fn concept_to_comm(n: u64, tuple_cap: u64) -> Result<SingleInputProblem> {
    let reps = concept_classes(n)?;
    let base = 2 * n;
    let tuples = base.checked_pow((n - 1) as u32);
    let tuples = match tuples {
        Some(t) if t <= tuple_cap => t,
        _ => {
            return Err(Error::CapExceeded {
                what: "answer tuple space",
                value: tuples.unwrap_or(u64::MAX),
                cap: tuple_cap,
            })
        }
    };
    let threshold = (4 * (n - 1)).div_ceil(5);

    let mut valid = vec![vec![false; tuples as usize]; reps.len()];
    for (ci, c) in reps.iter().enumerate() {
        for t in 0..tuples {
            let mut rest = t;
            let mut good = 0;
            for q in 1..n {
                let digit = rest % base;
                rest /= base;
                let a = Answer::new(Zmod::new(digit / 2, n), digit % 2 == 1);
                if valid_answer(c, q, &a)? {
                    good += 1;
                }
            }
            valid[ci][t as usize] = good >= threshold;
        }
    }
    SingleInputProblem::new(valid, Distribution::uniform(reps.len()))
}

/// The function-evaluation task: Alice holds a function from the family,
/// Bob holds a point, and the only valid output is the function's value
/// there. Uniform input distribution unless one is supplied.
pub fn func_eval_problem(
    funcs: &[Vec<usize>],
    num_points: usize,
    num_values: usize,
    mu: Option<Vec<f64>>,
) -> Result<TwoSidedProblem> {
    if funcs.is_empty() || num_points == 0 || num_values == 0 {
        return Err(Error::InvalidArgument(
            "the function family, domain and range must be nonempty".into(),
        ));
    }
    for f in funcs {
        if f.len() != num_points {
            return Err(Error::SizeMismatch(format!(
                "function table has {} entries, expected {num_points}",
                f.len()
            )));
        }
        if let Some(&v) = f.iter().find(|&&v| v >= num_values) {
            return Err(Error::InvalidArgument(format!(
                "function value {v} outside the range of {num_values} values"
            )));
        }
    }
    let mut valid = vec![false; funcs.len() * num_points * num_values];
    for (fi, f) in funcs.iter().enumerate() {
        for (x, &v) in f.iter().enumerate() {
            valid[(fi * num_points + x) * num_values + v] = true;
        }
    }
    let mu = mu.unwrap_or_else(|| {
        vec![1.0 / (funcs.len() * num_points) as f64; funcs.len() * num_points]
    });
    TwoSidedProblem::new(funcs.len(), num_points, num_values, valid, mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A two-sided total function f(x, y) = (x + y) mod nz for tests.
    fn mod_sum_problem(nx: usize, ny: usize, nz: usize) -> TwoSidedProblem {
        let mut valid = vec![false; nx * ny * nz];
        for x in 0..nx {
            for y in 0..ny {
                valid[(x * ny + y) * nz + (x + y) % nz] = true;
            }
        }
        let mu = vec![1.0 / (nx * ny) as f64; nx * ny];
        TwoSidedProblem::new(nx, ny, nz, valid, mu).unwrap()
    }

    #[test]
    fn transform_of_a_total_function_at_full_threshold() {
        let p = mod_sum_problem(3, 2, 3);
        let t = single_input_transform(&p, 1.0, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(t.tuple_count, 9);
        assert!(!t.degenerate_threshold);
        for x in 0..3 {
            for tuple in 0..9 {
                let zs = decode_tuple(tuple, 2, 3);
                let agrees = (0..2).all(|y| zs[y] == (x + y) % 3);
                assert_eq!(t.problem.is_valid(x, tuple), agrees, "x={x} t={tuple}");
            }
        }
    }

    #[test]
    fn transform_with_a_vanishing_threshold_is_flagged() {
        let p = mod_sum_problem(3, 2, 3);
        let t = single_input_transform(&p, 1e-6, DEFAULT_TUPLE_CAP).unwrap();
        assert!(t.degenerate_threshold);
        // Any tuple correct on at least one y qualifies.
        for x in 0..3 {
            for tuple in 0..9 {
                let zs = decode_tuple(tuple, 2, 3);
                let somewhere = (0..2).any(|y| zs[y] == (x + y) % 3);
                assert_eq!(t.problem.is_valid(x, tuple), somewhere);
            }
        }
        assert!(single_input_transform(&p, 0.0, DEFAULT_TUPLE_CAP).is_err());
        assert!(single_input_transform(&p, 1.0, 4).is_err());
    }

    #[test]
    fn concept_problem_accepts_relation_tuples() {
        let n = 3;
        let p = concept_to_comm(n, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(p.num_inputs(), 4);
        assert_eq!(p.num_answers(), 36);
        let reps = concept_classes(n).unwrap();
        for (ci, c) in reps.iter().enumerate() {
            // Tuple built from the relation: answer (0, parity(0, q)) per q.
            let digits: Vec<u64> = (1..n).map(|q| u64::from(c.parity(0, q))).collect();
            let t = digits
                .iter()
                .rev()
                .fold(0u64, |acc, &d| acc * (2 * n) + d);
            assert!(p.is_valid(ci, t as usize));

            // Tuple wrong on every query: flip both parity bits.
            let digits: Vec<u64> = (1..n).map(|q| u64::from(!c.parity(0, q))).collect();
            let t = digits
                .iter()
                .rev()
                .fold(0u64, |acc, &d| acc * (2 * n) + d);
            assert!(!p.is_valid(ci, t as usize));
        }
    }

    #[test]
    fn concept_problem_threshold_is_strict_at_n5() {
        let n = 5;
        let p = concept_to_comm(n, DEFAULT_TUPLE_CAP).unwrap();
        let reps = concept_classes(n).unwrap();
        let c = &reps[3];
        let ci = 3;
        // Correct on 3 of 4 queries: 3 < ⌈16/5⌉ = 4, rejected.
        let mut digits: Vec<u64> = (1..n).map(|q| u64::from(c.parity(0, q))).collect();
        digits[2] ^= 1; // break query 3
        let t = digits.iter().rev().fold(0u64, |acc, &d| acc * (2 * n) + d);
        assert!(!p.is_valid(ci, t as usize));

        // All four correct: accepted.
        let digits: Vec<u64> = (1..n).map(|q| u64::from(c.parity(0, q))).collect();
        let t = digits.iter().rev().fold(0u64, |acc, &d| acc * (2 * n) + d);
        assert!(p.is_valid(ci, t as usize));
    }

    #[test]
    fn function_evaluation_relation() {
        // All four functions {0,1} → {0,1}: eight triples.
        let funcs: Vec<Vec<usize>> = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let p = func_eval_problem(&funcs, 2, 2, None).unwrap();
        let triples = (0..4)
            .flat_map(|f| (0..2).map(move |x| (f, x)))
            .flat_map(|(f, x)| (0..2).map(move |z| (f, x, z)))
            .filter(|&(f, x, z)| p.is_valid(f, x, z))
            .count();
        assert_eq!(triples, 8);
        for (fi, f) in funcs.iter().enumerate() {
            for (x, &v) in f.iter().enumerate() {
                assert!(p.is_valid(fi, x, v));
                assert!(!p.is_valid(fi, x, 1 - v));
            }
        }
    }
}
