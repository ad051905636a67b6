//! Brute-force distributional one-way communication cost for tiny
//! instances: the smallest message alphabet under which a deterministic
//! protocol reaches the target error against the input distribution.
//!
//! For a fixed Alice map only the induced partition of `X` matters and
//! Bob's side is optimized greedily per message, so the search runs over
//! canonical set partitions (restricted growth strings) with a bounded
//! block count. Deterministic protocols suffice: for a fixed input
//! distribution, shared randomness is a mixture of deterministic
//! protocols and cannot beat the best one.

use serde::Serialize;

use super::problems::{SingleInputProblem, TwoSidedProblem};
use crate::error::{Error, Result};

/// Inputs are capped so subsets fit a byte and partitions stay tiny.
pub const COST_INPUT_CAP: usize = 8;
const TWO_SIDED_Y_CAP: usize = 4;
const TWO_SIDED_Z_CAP: usize = 8;
const SINGLE_Z_CAP: usize = 16384;
const ERR_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostReport {
    /// Smallest feasible message alphabet size.
    pub messages: usize,
    /// `⌈log2(messages)⌉`.
    pub bits: u32,
    /// Error of the best protocol found at that alphabet size.
    pub achieved_error: f64,
}

fn ceil_log2(c: usize) -> u32 {
    usize::BITS - (c - 1).leading_zeros()
}

/// Subset-mass table: `mass[s] = Σ_{x ∈ s} w[x]` for every subset of
/// the (≤ 8) inputs.
fn subset_masses(weights: &[f64]) -> Vec<f64> {
    let n = weights.len();
    let mut mass = vec![0.0; 1 << n];
    for s in 1usize..1 << n {
        let low = s.trailing_zeros() as usize;
        mass[s] = mass[s & (s - 1)] + weights[low];
    }
    mass
}

/// Enumerates set partitions of `0..n` into at most `max_blocks` blocks
/// as bitmask blocks, calling `f` on each.
fn for_each_partition<F: FnMut(&[usize])>(n: usize, max_blocks: usize, f: &mut F) {
    fn descend<F: FnMut(&[usize])>(
        n: usize,
        max_blocks: usize,
        next: usize,
        blocks: &mut Vec<usize>,
        f: &mut F,
    ) {
        if next == n {
            f(blocks);
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] |= 1 << next;
            descend(n, max_blocks, next + 1, blocks, f);
            blocks[i] &= !(1 << next);
        }
        if blocks.len() < max_blocks {
            blocks.push(1 << next);
            descend(n, max_blocks, next + 1, blocks, f);
            blocks.pop();
        }
    }
    let mut blocks = Vec::new();
    descend(n, max_blocks, 0, &mut blocks, f);
}

/// Smallest alphabet size for a single-input problem: Bob answers from
/// the message alone, so per block the best answer minimizes the
/// invalid mass inside the block.
pub fn one_way_cost_single(p: &SingleInputProblem, eps: f64) -> Result<CostReport> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::ProbabilityOutOfRange(eps));
    }
    let nx = p.num_inputs();
    let nz = p.num_answers();
    if nx > COST_INPUT_CAP {
        return Err(Error::CapExceeded {
            what: "cost-search inputs",
            value: nx as u64,
            cap: COST_INPUT_CAP as u64,
        });
    }
    if nz > SINGLE_Z_CAP {
        return Err(Error::CapExceeded {
            what: "cost-search answers",
            value: nz as u64,
            cap: SINGLE_Z_CAP as u64,
        });
    }
    let mass = subset_masses(p.mu().probs());
    // invalid_mask[z]: inputs for which z is invalid.
    let invalid_mask: Vec<usize> = (0..nz)
        .map(|z| (0..nx).filter(|&x| !p.is_valid(x, z)).fold(0, |m, x| m | (1 << x)))
        .collect();
    // Best achievable invalid mass per input subset.
    let mut block_err = vec![f64::INFINITY; 1 << nx];
    for (s, err) in block_err.iter_mut().enumerate() {
        *err = invalid_mask
            .iter()
            .map(|&im| mass[s & im])
            .fold(f64::INFINITY, f64::min);
    }

    for c in 1..=nx {
        let mut best = f64::INFINITY;
        for_each_partition(nx, c, &mut |blocks| {
            let err: f64 = blocks.iter().map(|&b| block_err[b]).sum();
            if err < best {
                best = err;
            }
        });
        if best <= eps + ERR_TOL {
            return Ok(CostReport {
                messages: c,
                bits: ceil_log2(c),
                achieved_error: best,
            });
        }
    }
    Err(Error::Infeasible {
        max_messages: nx,
        eps,
    })
}

/// Smallest alphabet size for a two-sided problem: Bob sees the message
/// and his own `y`, so per `(block, y)` the best answer minimizes the
/// invalid `μ(·, y)` mass inside the block.
pub fn one_way_cost_two_sided(p: &TwoSidedProblem, eps: f64) -> Result<CostReport> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::ProbabilityOutOfRange(eps));
    }
    let (nx, ny, nz) = (p.num_x(), p.num_y(), p.num_z());
    if nx > COST_INPUT_CAP {
        return Err(Error::CapExceeded {
            what: "cost-search inputs",
            value: nx as u64,
            cap: COST_INPUT_CAP as u64,
        });
    }
    if ny > TWO_SIDED_Y_CAP {
        return Err(Error::CapExceeded {
            what: "cost-search Bob inputs",
            value: ny as u64,
            cap: TWO_SIDED_Y_CAP as u64,
        });
    }
    if nz > TWO_SIDED_Z_CAP {
        return Err(Error::CapExceeded {
            what: "cost-search answers",
            value: nz as u64,
            cap: TWO_SIDED_Z_CAP as u64,
        });
    }
    // Per y: subset masses of the column weights and per-answer invalid sets.
    let mut column_mass = Vec::with_capacity(ny);
    let mut invalid_mask = Vec::with_capacity(ny);
    for y in 0..ny {
        let weights: Vec<f64> = (0..nx).map(|x| p.mu(x, y)).collect();
        column_mass.push(subset_masses(&weights));
        invalid_mask.push(
            (0..nz)
                .map(|z| {
                    (0..nx)
                        .filter(|&x| !p.is_valid(x, y, z))
                        .fold(0usize, |m, x| m | (1 << x))
                })
                .collect::<Vec<usize>>(),
        );
    }
    let mut block_err = vec![0.0; 1 << nx];
    for (s, err) in block_err.iter_mut().enumerate() {
        *err = (0..ny)
            .map(|y| {
                invalid_mask[y]
                    .iter()
                    .map(|&im| column_mass[y][s & im])
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
    }

    for c in 1..=nx {
        let mut best = f64::INFINITY;
        for_each_partition(nx, c, &mut |blocks| {
            let err: f64 = blocks.iter().map(|&b| block_err[b]).sum();
            if err < best {
                best = err;
            }
        });
        if best <= eps + ERR_TOL {
            return Ok(CostReport {
                messages: c,
                bits: ceil_log2(c),
                achieved_error: best,
            });
        }
    }
    Err(Error::Infeasible {
        max_messages: nx,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commlab::info::Distribution;

    fn equality_problem(n: usize) -> SingleInputProblem {
        let valid = (0..n)
            .map(|x| (0..n).map(|z| z == x).collect())
            .collect();
        SingleInputProblem::new(valid, Distribution::uniform(n)).unwrap()
    }

    #[test]
    fn constant_answer_needs_one_message() {
        let p = SingleInputProblem::new(
            vec![vec![true, false]; 4],
            Distribution::uniform(4),
        )
        .unwrap();
        let r = one_way_cost_single(&p, 0.0).unwrap();
        assert_eq!(r.messages, 1);
        assert_eq!(r.bits, 0);
        assert_eq!(r.achieved_error, 0.0);
    }

    #[test]
    fn equality_needs_the_full_alphabet_at_zero_error() {
        let r = one_way_cost_single(&equality_problem(4), 0.0).unwrap();
        assert_eq!(r.messages, 4);
        assert_eq!(r.bits, 2);
    }

    #[test]
    fn full_error_is_free() {
        let r = one_way_cost_single(&equality_problem(4), 1.0).unwrap();
        assert_eq!(r.messages, 1);
    }

    #[test]
    fn cost_is_monotone_in_the_error_budget() {
        let p = equality_problem(6);
        let mut last = usize::MAX;
        for eps in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
            let c = one_way_cost_single(&p, eps).unwrap().messages;
            assert!(c <= last);
            last = c;
        }
    }

    #[test]
    fn index_transfer_matches_the_constant_function_family() {
        // Constant functions: Alice must name the constant for zero error.
        let funcs: Vec<Vec<usize>> = (0..4).map(|v| vec![v; 3]).collect();
        let p = crate::commlab::problems::func_eval_problem(&funcs, 3, 4, None).unwrap();
        let r = one_way_cost_two_sided(&p, 0.0).unwrap();
        assert_eq!(r.messages, 4);
        assert_eq!(r.bits, 2);
    }

    #[test]
    fn singleton_family_needs_no_information() {
        let funcs = vec![vec![0usize, 1, 0]];
        let p = crate::commlab::problems::func_eval_problem(&funcs, 3, 2, None).unwrap();
        let r = one_way_cost_two_sided(&p, 0.0).unwrap();
        assert_eq!(r.messages, 1);
    }

    #[test]
    fn caps_are_enforced() {
        let p = equality_problem(4);
        assert!(one_way_cost_single(&p, -0.1).is_err());
        let big = SingleInputProblem::new(
            vec![vec![true; 2]; 9],
            Distribution::uniform(9),
        )
        .unwrap();
        assert!(matches!(
            one_way_cost_single(&big, 0.5),
            Err(Error::CapExceeded { .. })
        ));
    }
}
