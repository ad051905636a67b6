//! Residue arithmetic over `Z_N` and the stepped perfect matching `m_q`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A residue class modulo `N`, stored reduced into `[0, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zmod {
    value: u64,
    modulus: u64,
}

impl Zmod {
    /// Reduces `value` modulo `modulus`. Panics on a zero modulus.
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Zmod {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

impl std::ops::Add for Zmod {
    type Output = Zmod;

    fn add(self, rhs: Zmod) -> Zmod {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        Zmod::new(self.value + rhs.value, self.modulus)
    }
}

impl std::ops::Add<u64> for Zmod {
    type Output = Zmod;

    fn add(self, steps: u64) -> Zmod {
        Zmod::new(self.value + steps % self.modulus, self.modulus)
    }
}

impl std::fmt::Display for Zmod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Residues serialize as their value; the modulus is ambient in every
// containing structure.
impl Serialize for Zmod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

/// Deterministic trial-division primality check, fine for desk-scale N.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// N = 2 is rejected everywhere a matching exists: `Z_2 \ {x0}` has a
/// single vertex and cannot be matched.
pub fn ensure_odd_prime(n: u64) -> Result<()> {
    if n >= 3 && n % 2 == 1 && is_prime(n) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(n))
    }
}

/// The perfect matching `m_q` on `Z_N \ {x0}`: edge `i` joins
/// `x0 + (2i+1)q` to `x0 + (2i+2)q` for `i = 0 .. (N-3)/2`.
///
/// Edges are kept ordered so the second endpoint is always the first
/// plus `q`; answers are read from the first endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    modulus: u64,
    excluded: Zmod,
    step: u64,
    edges: Vec<(Zmod, Zmod)>,
}

impl Matching {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn excluded(&self) -> Zmod {
        self.excluded
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn edges(&self) -> &[(Zmod, Zmod)] {
        &self.edges
    }

    /// Edge set with both endpoints as plain integers, in construction order.
    pub fn edge_values(&self) -> Vec<(u64, u64)> {
        self.edges.iter().map(|(a, b)| (a.value(), b.value())).collect()
    }
}

/// Builds `m_q` for an odd prime `N`, excluded vertex `x0` and step
/// `q ∈ [1, N-1]`.
pub fn build_matching(n: u64, x0: Zmod, q: u64) -> Result<Matching> {
    ensure_odd_prime(n)?;
    if x0.modulus() != n {
        return Err(Error::ModulusMismatch {
            left: x0.modulus(),
            right: n,
        });
    }
    if q == 0 || q >= n {
        return Err(Error::QueryOutOfRange { q, n });
    }
    let edges = (0..=(n - 3) / 2)
        .map(|i| (x0 + (2 * i + 1) * q, x0 + (2 * i + 2) * q))
        .collect();
    Ok(Matching {
        modulus: n,
        excluded: x0,
        step: q,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(9));
        assert!(is_prime(101));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
    }

    #[test]
    fn primality_matches_trial_oracle() {
        // Independent oracle: count divisors directly.
        let naive = |n: u64| n >= 2 && (2..n).all(|d| !n.is_multiple_of(d));
        for n in 0..2000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn matching_examples() {
        let m = build_matching(5, Zmod::new(0, 5), 1).unwrap();
        assert_eq!(m.edge_values(), vec![(1, 2), (3, 4)]);

        let m = build_matching(5, Zmod::new(0, 5), 2).unwrap();
        assert_eq!(m.edge_values(), vec![(2, 4), (1, 3)]);

        let m = build_matching(3, Zmod::new(2, 3), 1).unwrap();
        assert_eq!(m.edge_values(), vec![(0, 1)]);
    }

    #[test]
    fn matching_rejects_bad_inputs() {
        assert_eq!(
            build_matching(9, Zmod::new(0, 9), 1),
            Err(Error::NotOddPrime(9))
        );
        assert_eq!(
            build_matching(2, Zmod::new(0, 2), 1),
            Err(Error::NotOddPrime(2))
        );
        assert_eq!(
            build_matching(5, Zmod::new(0, 5), 0),
            Err(Error::QueryOutOfRange { q: 0, n: 5 })
        );
        assert_eq!(
            build_matching(5, Zmod::new(0, 5), 5),
            Err(Error::QueryOutOfRange { q: 5, n: 5 })
        );
        assert_eq!(
            build_matching(5, Zmod::new(0, 7), 1),
            Err(Error::ModulusMismatch { left: 7, right: 5 })
        );
    }

    /// Cover, disjointness and orientation for every small instance.
    #[test]
    fn matching_is_perfect_on_small_primes() {
        for n in (3..=31).filter(|&n| n % 2 == 1 && is_prime(n)) {
            for x0 in 0..n {
                for q in 1..n {
                    let m = build_matching(n, Zmod::new(x0, n), q).unwrap();
                    let mut seen = BTreeSet::new();
                    for (a, b) in m.edge_values() {
                        assert_eq!((b + n - a) % n, q, "orientation n={n} x0={x0} q={q}");
                        assert!(seen.insert(a), "duplicate vertex {a}");
                        assert!(seen.insert(b), "duplicate vertex {b}");
                    }
                    let expected: BTreeSet<u64> = (0..n).filter(|&v| v != x0).collect();
                    assert_eq!(seen, expected, "cover n={n} x0={x0} q={q}");
                }
            }
        }
    }

    /// Compare m_q and m_{N-q} as undirected edge sets by direct
    /// enumeration; the enumerated fact at these sizes is equality.
    #[test]
    fn step_and_negated_step_enumerate_to_same_undirected_matching() {
        let undirected = |m: &Matching| -> BTreeSet<(u64, u64)> {
            m.edge_values()
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect()
        };
        for n in (3..=31).filter(|&n| n % 2 == 1 && is_prime(n)) {
            for x0 in 0..n {
                for q in 1..n {
                    let fwd = build_matching(n, Zmod::new(x0, n), q).unwrap();
                    let bwd = build_matching(n, Zmod::new(x0, n), n - q).unwrap();
                    assert_eq!(undirected(&fwd), undirected(&bwd), "n={n} x0={x0} q={q}");
                }
            }
        }
    }
}
