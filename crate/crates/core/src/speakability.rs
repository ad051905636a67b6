//! Desk-scale evidence that no small hypothesis class approximates the
//! parity concept class: an exact minimal approximating-cover search for
//! tiny moduli, a greedy upper bound one size up, and a numeric audit of
//! the counting/entropy chain that lower-bounds cover sizes.
//!
//! Concepts are deduplicated by complement (a concept and its bitwise
//! complement induce the same relation, so the reduction is lossless)
//! and hypotheses by their coverage set before the set-cover search.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::concepts::{
    approximates, approximation_threshold, concept_classes, valid_answer, Answer, Concept,
    Hypothesis,
};
use crate::error::{Error, Result};
use crate::modmath::{ensure_odd_prime, Zmod};

/// Audit tolerance for the inequality checks.
pub const AUDIT_TOL: f64 = 1e-9;

/// Binary entropy in bits, with the `0·log 0 = 0` convention.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(h2(p))
}

fn h2(p: f64) -> f64 {
    let term = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.log2() };
    term(p) + term(1.0 - p)
}

/// Shannon entropy in bits of an empirical distribution given by counts.
fn entropy_of_counts<'a, I: IntoIterator<Item = &'a u64>>(counts: I, total: u64) -> f64 {
    let total = total as f64;
    counts
        .into_iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Per-modulus tables for fast hypothesis coverage: one bitmask over the
/// complement classes per `(q, x, b)` answer.
struct ClassTable {
    modulus: u64,
    reps: Vec<Concept>,
    /// `valid[q-1][x][b]`: classes for which `(x, b)` answers `q`.
    valid: Vec<Vec<[u64; 2]>>,
    threshold: u64,
}

impl ClassTable {
    fn build(n: u64) -> Result<ClassTable> {
        ensure_odd_prime(n)?;
        if n > 7 {
            return Err(Error::CapExceeded {
                what: "cover search modulus",
                value: n,
                cap: 7,
            });
        }
        let reps = concept_classes(n)?;
        let mut valid = vec![vec![[0u64; 2]; n as usize]; (n - 1) as usize];
        for (ci, c) in reps.iter().enumerate() {
            for q in 1..n {
                for x in 0..n {
                    let b = usize::from(c.parity(x, q));
                    valid[(q - 1) as usize][x as usize][b] |= 1 << ci;
                }
            }
        }
        Ok(ClassTable {
            modulus: n,
            reps,
            valid,
            threshold: approximation_threshold(n),
        })
    }

    fn universe(&self) -> u64 {
        if self.reps.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.reps.len()) - 1
        }
    }

    fn hypothesis_count(&self) -> u64 {
        (2 * self.modulus).pow((self.modulus - 1) as u32)
    }

    /// Coverage mask of the hypothesis encoded as base-2N digits
    /// (digit for query q is `2x + b`). Bit-sliced counting keeps the
    /// per-class valid-query count in three bit planes.
    fn coverage_of_code(&self, code: u64) -> u64 {
        let base = 2 * self.modulus;
        let (mut c0, mut c1, mut c2) = (0u64, 0u64, 0u64);
        let mut rest = code;
        for q in 1..self.modulus {
            let digit = rest % base;
            rest /= base;
            let mask = self.valid[(q - 1) as usize][(digit / 2) as usize][(digit % 2) as usize];
            let carry0 = c0 & mask;
            c0 ^= mask;
            let carry1 = c1 & carry0;
            c1 ^= carry0;
            c2 ^= carry1;
        }
        // Count per class is 4·c2 + 2·c1 + c0, at most N-1 ≤ 6.
        match self.threshold {
            2 => c2 | c1,
            3 => c2 | (c1 & c0),
            4 => c2,
            t => unreachable!("threshold {t} cannot occur for N ≤ 7"),
        }
    }

    fn hypothesis_from_code(&self, code: u64) -> Hypothesis {
        let n = self.modulus;
        let base = 2 * n;
        let mut rest = code;
        let answers = (1..n)
            .map(|_| {
                let digit = rest % base;
                rest /= base;
                Answer::new(Zmod::new(digit / 2, n), digit % 2 == 1)
            })
            .collect();
        Hypothesis::new(n, answers).expect("decoded hypothesis is well formed")
    }
}

/// Every complement class approximated by `h`, in class order. Computed
/// directly from the approximation predicate, independent of the
/// bitmask machinery the oracle uses.
pub fn concepts_approximated_by(h: &Hypothesis) -> Result<Vec<Concept>> {
    let mut out = Vec::new();
    for c in concept_classes(h.modulus())? {
        if approximates(h, &c)? {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoverMode {
    /// Exhaustive set cover with branch and bound; provably minimal.
    Exact,
    /// Greedy cover; an upper bound only.
    Greedy,
}

/// A cover of the concept classes by approximating hypotheses.
#[derive(Clone, Debug, Serialize)]
pub struct CoverCertificate {
    pub modulus: u64,
    pub mode: CoverMode,
    pub cover: Vec<Hypothesis>,
    /// Class representative bitstring → index of the first hypothesis in
    /// `cover` approximating it.
    pub coverage: BTreeMap<String, usize>,
    pub class_count: u64,
    pub hypotheses_enumerated: u64,
    /// Distinct nonempty coverage sets found (exact mode only).
    pub distinct_coverage_sets: Option<u64>,
    pub minimal: bool,
    pub method: String,
}

/// Searches for a small set of hypotheses that together approximate
/// every concept class over `Z_n`. Exact mode is limited to `n ≤ 5`
/// (the search space is exhausted); greedy mode to `n ≤ 7`.
pub fn approx_cover_oracle(n: u64, mode: CoverMode) -> Result<CoverCertificate> {
    match mode {
        CoverMode::Exact => {
            if n > 5 {
                return Err(Error::CapExceeded {
                    what: "exact cover modulus",
                    value: n,
                    cap: 5,
                });
            }
            exact_cover(n)
        }
        CoverMode::Greedy => greedy_cover(n),
    }
}

/// Distinct nonempty coverage masks with their smallest hypothesis code.
fn distinct_coverage_sets(table: &ClassTable) -> Vec<(u64, u64)> {
    let mut first_seen: HashMap<u64, u64> = HashMap::new();
    let mut order = Vec::new();
    for code in 0..table.hypothesis_count() {
        let mask = table.coverage_of_code(code);
        if mask != 0 && !first_seen.contains_key(&mask) {
            first_seen.insert(mask, code);
            order.push((mask, code));
        }
    }
    order
}

fn greedy_over_sets(universe: u64, sets: &[(u64, u64)]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut uncovered = universe;
    while uncovered != 0 {
        let (idx, _) = sets
            .iter()
            .enumerate()
            .max_by_key(|(idx, (mask, _))| ((mask & uncovered).count_ones(), std::cmp::Reverse(*idx)))
            .expect("nonempty set list");
        let gain = (sets[idx].0 & uncovered).count_ones();
        assert!(gain > 0, "no hypothesis covers the remaining classes");
        uncovered &= !sets[idx].0;
        chosen.push(idx);
    }
    chosen
}

struct CoverSearch<'a> {
    universe: u64,
    sets: &'a [(u64, u64)],
    /// For each class index, the sets covering it.
    covers: Vec<Vec<usize>>,
    max_set_size: u32,
    best: Vec<usize>,
}

impl CoverSearch<'_> {
    fn run(&mut self) {
        let mut chosen = Vec::new();
        self.descend(0, &mut chosen);
    }

    fn descend(&mut self, covered: u64, chosen: &mut Vec<usize>) {
        if covered == self.universe {
            let mut sorted = chosen.clone();
            sorted.sort_unstable();
            let mut best_sorted = self.best.clone();
            best_sorted.sort_unstable();
            if sorted.len() < self.best.len()
                || (sorted.len() == self.best.len() && sorted < best_sorted)
            {
                self.best = sorted;
            }
            return;
        }
        let uncovered = self.universe & !covered;
        let lower = uncovered.count_ones().div_ceil(self.max_set_size) as usize;
        // Equal-size completions stay in play for the lexicographic tie-break.
        if chosen.len() + lower > self.best.len() {
            return;
        }
        // Branch on the uncovered class with the fewest covering sets.
        let pivot = (0..64)
            .filter(|&c| uncovered >> c & 1 == 1)
            .min_by_key(|&c| self.covers[c as usize].len())
            .expect("some class is uncovered");
        let candidates = self.covers[pivot as usize].clone();
        for set_idx in candidates {
            if chosen.len() + 1 > self.best.len() {
                break;
            }
            chosen.push(set_idx);
            self.descend(covered | self.sets[set_idx].0, chosen);
            chosen.pop();
        }
    }
}

fn exact_cover(n: u64) -> Result<CoverCertificate> {
    let table = ClassTable::build(n)?;
    let sets = distinct_coverage_sets(&table);
    let universe = table.universe();

    let union_all = sets.iter().fold(0u64, |acc, (m, _)| acc | m);
    if union_all != universe {
        return Err(Error::InvalidArgument(format!(
            "no hypothesis approximates some class over Z_{n}"
        )));
    }

    let covers: Vec<Vec<usize>> = (0..table.reps.len())
        .map(|c| {
            sets.iter()
                .enumerate()
                .filter(|(_, (m, _))| m >> c & 1 == 1)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let max_set_size = sets.iter().map(|(m, _)| m.count_ones()).max().unwrap_or(1);

    let mut search = CoverSearch {
        universe,
        sets: &sets,
        covers,
        max_set_size,
        best: greedy_over_sets(universe, &sets),
    };
    search.run();

    let cover: Vec<Hypothesis> = search
        .best
        .iter()
        .map(|&i| table.hypothesis_from_code(sets[i].1))
        .collect();
    certificate(
        &table,
        cover,
        CoverMode::Exact,
        Some(sets.len() as u64),
        true,
        "exhaustive set cover over deduplicated hypothesis coverage sets, \
         branch and bound from a greedy incumbent"
            .into(),
    )
}

fn greedy_cover(n: u64) -> Result<CoverCertificate> {
    let table = ClassTable::build(n)?;
    let universe = table.universe();
    let total = table.hypothesis_count();
    let mut uncovered = universe;
    let mut cover = Vec::new();
    while uncovered != 0 {
        let mut best_code = None;
        let mut best_gain = 0u32;
        for code in 0..total {
            let gain = (table.coverage_of_code(code) & uncovered).count_ones();
            if gain > best_gain {
                best_gain = gain;
                best_code = Some(code);
            }
        }
        let Some(code) = best_code else {
            return Err(Error::InvalidArgument(format!(
                "no hypothesis approximates some class over Z_{n}"
            )));
        };
        uncovered &= !table.coverage_of_code(code);
        cover.push(table.hypothesis_from_code(code));
    }
    certificate(
        &table,
        cover,
        CoverMode::Greedy,
        None,
        false,
        "greedy cover, smallest hypothesis code wins ties; size is an upper bound".into(),
    )
}

fn certificate(
    table: &ClassTable,
    cover: Vec<Hypothesis>,
    mode: CoverMode,
    distinct: Option<u64>,
    minimal: bool,
    method: String,
) -> Result<CoverCertificate> {
    let mut coverage = BTreeMap::new();
    for rep in &table.reps {
        let idx = cover
            .iter()
            .position(|h| approximates(h, rep).unwrap_or(false))
            .ok_or_else(|| {
                Error::InvalidArgument(format!("cover misses class {}", rep.to_bit_string()))
            })?;
        coverage.insert(rep.to_bit_string(), idx);
    }
    Ok(CoverCertificate {
        modulus: table.modulus,
        mode,
        cover,
        coverage,
        class_count: table.reps.len() as u64,
        hypotheses_enumerated: table.hypothesis_count(),
        distinct_coverage_sets: distinct,
        minimal,
        method,
    })
}

/// The audited quantities of the counting argument for one instance
/// `(h0, C0)`: a hypothesis and a set of classes it approximates.
#[derive(Clone, Debug, Serialize)]
pub struct CountingAudit {
    pub modulus: u64,
    pub class_count: u64,
    pub c0_size: u64,
    /// Queries whose fixed answer is valid for at least 3/5 of `C0`.
    pub q0: Vec<u64>,
    /// Distinct undirected edges `{x_q, x_q + q}` over `q ∈ Q0`, with the
    /// queries mapping to each.
    pub e0: Vec<((u64, u64), Vec<u64>)>,
    pub edge_multiplicity_max: u64,
    pub nonisolated_vertices: u64,
    /// Spanning-forest edges of the graph on `E0` (union-find in
    /// ascending query order) and the smallest query per forest edge.
    pub forest_edges: Vec<(u64, u64)>,
    pub q0_prime: Vec<u64>,
    /// Entropy of the forest parity vector under the uniform concept
    /// distribution; equals `|Q0'|` as the parities are independent fair
    /// bits there.
    pub h_j_uniform: f64,
    /// The same entropy under the uniform distribution on `C0`.
    pub h_j_c0: f64,
    /// `log2(class_count / |C0|)`.
    pub entropy_gap: f64,
    /// `Σ_{q ∈ Q0'} (1 - H(I_q))` under the `C0` distribution.
    pub sum_one_minus_h_iq: f64,
    /// Per-query bias of the parity bit under `C0`, for `q ∈ Q0`.
    pub q0_bias: BTreeMap<u64, f64>,
    pub checks: AuditChecks,
    /// The asymptotic `√N/250` step is not machine-checked; only the
    /// finite chain above is.
    pub asymptotic_step_checked: bool,
}

/// One boolean per audited inequality, all at [`AUDIT_TOL`].
#[derive(Clone, Debug, Serialize)]
pub struct AuditChecks {
    /// `|Q0| ≥ (N-1)/6`
    pub q0_lower: bool,
    /// every undirected edge serves at most 2 queries
    pub edge_multiplicity: bool,
    /// `|E0| ≥ (N-1)/12`
    pub e0_lower: bool,
    /// non-isolated vertices `≥ √(2|E0|)`
    pub nonisolated_lower: bool,
    /// `|E0'| ≥ √((N-1)/24)`
    pub forest_lower: bool,
    /// `H_uniform(J) = |Q0'|`
    pub j_uniform_full_entropy: bool,
    /// `entropy_gap ≥ |Q0'| - H_{C0}(J)`
    pub gap_vs_j_entropy: bool,
    /// `|Q0'| - H_{C0}(J) ≥ Σ (1 - H(I_q))` (subadditivity)
    pub j_vs_bit_sum: bool,
    /// `entropy_gap ≥ Σ (1 - H(I_q))` (the chain end to end)
    pub gap_vs_bit_sum: bool,
    /// every `q ∈ Q0` has bias ≥ 3/5, hence `H(I_q) ≤ 49/50`
    pub bias_threshold: bool,
    /// `H(C) = H(J) + H(C|J)` under both distributions
    pub entropy_identity: bool,
}

impl AuditChecks {
    pub fn all_hold(&self) -> bool {
        self.q0_lower
            && self.edge_multiplicity
            && self.e0_lower
            && self.nonisolated_lower
            && self.forest_lower
            && self.j_uniform_full_entropy
            && self.gap_vs_j_entropy
            && self.j_vs_bit_sum
            && self.gap_vs_bit_sum
            && self.bias_threshold
            && self.entropy_identity
    }
}

/// Entropy bookkeeping for a parity vector over a set of concepts: the
/// joint distribution of `(I_q)_{q ∈ Q0'}` and the conditional sizes.
fn parity_vector_entropies(
    members: &[Concept],
    edges: &[(u64, u64)],
) -> (f64, f64, bool) {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for c in members {
        let mut key = 0u64;
        for (i, &(a, b)) in edges.iter().enumerate() {
            key |= u64::from(c.bit(a) ^ c.bit(b)) << i;
        }
        *counts.entry(key).or_insert(0) += 1;
    }
    let total = members.len() as u64;
    let h_j = entropy_of_counts(counts.values(), total);
    // Both distributions are uniform over their support, so
    // H(C | J = j) = log2(cell size).
    let h_c_given_j: f64 = counts
        .values()
        .map(|&c| (c as f64 / total as f64) * (c as f64).log2())
        .sum();
    let h_c = (total as f64).log2();
    let identity = (h_c - (h_j + h_c_given_j)).abs() <= AUDIT_TOL;
    (h_j, h_c_given_j, identity)
}

/// Audits the counting chain on `(h0, C0)`. `C0` must be nonempty and
/// every member (taken up to complement) approximated by `h0`.
pub fn counting_audit(h0: &Hypothesis, c0: &[Concept]) -> Result<CountingAudit> {
    let n = h0.modulus();
    if n > 7 {
        return Err(Error::CapExceeded {
            what: "audit modulus",
            value: n,
            cap: 7,
        });
    }
    if c0.is_empty() {
        return Err(Error::InvalidArgument(
            "the audited class subset is empty".into(),
        ));
    }
    let mut members: BTreeSet<Concept> = BTreeSet::new();
    for c in c0 {
        if c.modulus() != n {
            return Err(Error::ModulusMismatch {
                left: c.modulus(),
                right: n,
            });
        }
        if !approximates(h0, c)? {
            return Err(Error::InvalidArgument(format!(
                "hypothesis does not approximate {}",
                c.to_bit_string()
            )));
        }
        members.insert(c.class_representative());
    }
    let members: Vec<Concept> = members.into_iter().collect();
    let c0_size = members.len() as u64;
    let class_count = 1u64 << (n - 1);

    // Q0: queries answered validly for at least 3/5 of C0.
    let mut q0 = Vec::new();
    let mut q0_bias = BTreeMap::new();
    for q in 1..n {
        let a = h0.answer(q)?;
        let good = members
            .iter()
            .filter(|c| valid_answer(c, q, &a).unwrap_or(false))
            .count() as u64;
        if 5 * good >= 3 * c0_size {
            q0.push(q);
            q0_bias.insert(q, good as f64 / c0_size as f64);
        }
    }

    // E0: undirected edges {x_q, x_q+q}, each recording its queries.
    let mut edge_queries: BTreeMap<(u64, u64), Vec<u64>> = BTreeMap::new();
    let mut edge_order: Vec<(u64, u64)> = Vec::new();
    for &q in &q0 {
        let a = h0.answer(q)?;
        let u = a.x.value();
        let v = (a.x + q).value();
        let key = (u.min(v), u.max(v));
        let entry = edge_queries.entry(key).or_default();
        if entry.is_empty() {
            edge_order.push(key);
        }
        entry.push(q);
    }
    let e0: Vec<((u64, u64), Vec<u64>)> = edge_order
        .iter()
        .map(|k| (*k, edge_queries[k].clone()))
        .collect();
    let edge_multiplicity_max = e0.iter().map(|(_, qs)| qs.len() as u64).max().unwrap_or(0);

    let nonisolated: BTreeSet<u64> = e0.iter().flat_map(|((a, b), _)| [*a, *b]).collect();

    // Spanning forest by union-find, edges taken in ascending smallest-q
    // order; Q0' takes the smallest query of each forest edge.
    let mut sorted_edges: Vec<((u64, u64), u64)> = e0
        .iter()
        .map(|(e, qs)| (*e, *qs.iter().min().expect("nonempty")))
        .collect();
    sorted_edges.sort_by_key(|&(_, q)| q);
    let mut parent: Vec<usize> = (0..n as usize).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
        }
        parent[v]
    }
    let mut forest_edges = Vec::new();
    let mut q0_prime = Vec::new();
    for ((a, b), q) in sorted_edges {
        let ra = find(&mut parent, a as usize);
        let rb = find(&mut parent, b as usize);
        if ra != rb {
            parent[ra] = rb;
            forest_edges.push((a, b));
            q0_prime.push(q);
        }
    }

    // Entropies of the forest parity vector J.
    let all_reps = concept_classes(n)?;
    let (h_j_uniform, _, identity_uniform) = parity_vector_entropies(&all_reps, &forest_edges);
    let (h_j_c0, _, identity_c0) = parity_vector_entropies(&members, &forest_edges);

    let entropy_gap = (class_count as f64 / c0_size as f64).log2();
    let mut sum_one_minus_h_iq = 0.0;
    for &(a, b) in &forest_edges {
        let ones = members.iter().filter(|c| c.bit(a) ^ c.bit(b)).count() as f64;
        sum_one_minus_h_iq += 1.0 - h2(ones / c0_size as f64);
    }

    let nm1 = (n - 1) as f64;
    let q0_len = q0.len() as f64;
    let e0_len = e0.len() as f64;
    let forest_len = forest_edges.len() as f64;
    let checks = AuditChecks {
        q0_lower: q0_len + AUDIT_TOL >= nm1 / 6.0,
        edge_multiplicity: edge_multiplicity_max <= 2,
        e0_lower: e0_len + AUDIT_TOL >= nm1 / 12.0,
        nonisolated_lower: nonisolated.len() as f64 + AUDIT_TOL >= (2.0 * e0_len).sqrt(),
        forest_lower: forest_len + AUDIT_TOL >= (nm1 / 24.0).sqrt(),
        j_uniform_full_entropy: (h_j_uniform - forest_len).abs() <= AUDIT_TOL,
        gap_vs_j_entropy: entropy_gap + AUDIT_TOL >= forest_len - h_j_c0,
        j_vs_bit_sum: forest_len - h_j_c0 + AUDIT_TOL >= sum_one_minus_h_iq,
        gap_vs_bit_sum: entropy_gap + AUDIT_TOL >= sum_one_minus_h_iq,
        bias_threshold: q0_bias
            .values()
            .all(|&bias| bias + AUDIT_TOL >= 0.6 && h2(bias) <= 0.98 + AUDIT_TOL),
        entropy_identity: identity_uniform && identity_c0,
    };

    Ok(CountingAudit {
        modulus: n,
        class_count,
        c0_size,
        q0,
        e0,
        edge_multiplicity_max,
        nonisolated_vertices: nonisolated.len() as u64,
        forest_edges,
        q0_prime,
        h_j_uniform,
        h_j_c0,
        entropy_gap,
        sum_one_minus_h_iq,
        q0_bias,
        checks,
        asymptotic_step_checked: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(v: u64, n: u64) -> Zmod {
        Zmod::new(v, n)
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let h35 = binary_entropy(0.6).unwrap();
        assert!((h35 - 0.97095).abs() < 1e-4);
        assert!(h35 <= 49.0 / 50.0);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn coverage_masks_agree_with_the_predicate() {
        for n in [3u64, 5] {
            let table = ClassTable::build(n).unwrap();
            let step = if n == 3 { 1 } else { 37 };
            for code in (0..table.hypothesis_count()).step_by(step) {
                let h = table.hypothesis_from_code(code);
                let mask = table.coverage_of_code(code);
                for (ci, rep) in table.reps.iter().enumerate() {
                    assert_eq!(
                        mask >> ci & 1 == 1,
                        approximates(&h, rep).unwrap(),
                        "n={n} code={code} class={}",
                        rep.to_bit_string()
                    );
                }
            }
        }
    }

    #[test]
    fn approximated_set_examples() {
        let n = 3;
        // Both answers read C_1 (relative to C_0 = 0) with the same value:
        // the two classes with C_1 = 0.
        let h = Hypothesis::new(
            n,
            vec![Answer::new(zm(0, n), false), Answer::new(zm(1, n), false)],
        )
        .unwrap();
        let covered = concepts_approximated_by(&h).unwrap();
        let names: Vec<String> = covered.iter().map(|c| c.to_bit_string()).collect();
        assert_eq!(names, vec!["000", "001"]);

        // Contradictory constraints cover nothing.
        let h = Hypothesis::new(
            n,
            vec![Answer::new(zm(0, n), false), Answer::new(zm(1, n), true)],
        )
        .unwrap();
        assert!(concepts_approximated_by(&h).unwrap().is_empty());

        // A hypothesis built from the relation covers its concept.
        let c = Concept::from_bit_string("01011").unwrap();
        let h = Hypothesis::correct_for(&c);
        assert!(concepts_approximated_by(&h)
            .unwrap()
            .contains(&c.class_representative()));
    }

    #[test]
    fn exact_cover_n3_has_size_two() {
        let cert = approx_cover_oracle(3, CoverMode::Exact).unwrap();
        assert_eq!(cert.cover.len(), 2);
        assert!(cert.minimal);
        assert_eq!(cert.class_count, 4);
        assert_eq!(cert.coverage.len(), 4);
        // soundness: the recorded hypothesis really approximates each class
        for (bits, &idx) in &cert.coverage {
            let c = Concept::from_bit_string(bits).unwrap();
            assert!(approximates(&cert.cover[idx], &c).unwrap());
        }
    }

    #[test]
    fn greedy_is_an_upper_bound_on_exact() {
        for n in [3u64, 5] {
            let exact = approx_cover_oracle(n, CoverMode::Exact).unwrap();
            let greedy = approx_cover_oracle(n, CoverMode::Greedy).unwrap();
            assert!(greedy.cover.len() >= exact.cover.len());
            assert!(!greedy.minimal);
        }
    }

    #[test]
    fn exact_mode_rejects_large_moduli() {
        assert_eq!(
            approx_cover_oracle(7, CoverMode::Exact).err(),
            Some(Error::CapExceeded {
                what: "exact cover modulus",
                value: 7,
                cap: 5
            })
        );
    }

    #[test]
    fn audit_on_a_single_concept_instance() {
        let _n = 5;
        let c = Concept::from_bit_string("01011").unwrap();
        let h = Hypothesis::correct_for(&c);
        let audit = counting_audit(&h, std::slice::from_ref(&c)).unwrap();
        assert_eq!(audit.c0_size, 1);
        assert_eq!(audit.q0, vec![1, 2, 3, 4]);
        assert!(audit.checks.all_hold(), "{:#?}", audit.checks);
        // Singleton C0: every I_q is constant, so the bit sum is |Q0'|
        // and the gap is the full log of the class count.
        assert!((audit.entropy_gap - 4.0).abs() < 1e-12);
        assert_eq!(audit.sum_one_minus_h_iq, audit.q0_prime.len() as f64);
        assert!(audit.entropy_gap >= audit.sum_one_minus_h_iq);
        assert!(!audit.asymptotic_step_checked);
    }

    #[test]
    fn audit_rejects_bad_instances() {
        let n = 3;
        let c = Concept::from_bit_string("000").unwrap();
        let h = Hypothesis::correct_for(&c);
        assert!(counting_audit(&h, &[]).is_err());
        let far = Concept::from_bit_string("010").unwrap();
        assert!(counting_audit(&h, &[far]).is_err());
        let _ = n;
    }

    #[test]
    fn audits_hold_on_every_exact_cover_instance() {
        for n in [3u64, 5] {
            let cert = approx_cover_oracle(n, CoverMode::Exact).unwrap();
            for h0 in &cert.cover {
                let c0 = concepts_approximated_by(h0).unwrap();
                let audit = counting_audit(h0, &c0).unwrap();
                assert!(audit.checks.all_hold(), "n={n}: {:#?}", audit.checks);
                assert!(audit.q0.len() as f64 >= (n - 1) as f64 / 6.0);
            }
        }
    }
}
