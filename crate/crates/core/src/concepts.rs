//! The relational concept class over `Z_N`: bitstrings `C ∈ {0,1}^N`
//! answering query `q` with any pair `(x, b)` satisfying
//! `C_x ⊕ C_{x+q} = b`, plus hypotheses and the approximation predicate.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modmath::{ensure_odd_prime, Zmod};

/// A concept: `N` bits indexed by `Z_N`, `N` an odd prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Concept {
    modulus: u64,
    bits: Vec<bool>,
}

impl Concept {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        let modulus = bits.len() as u64;
        ensure_odd_prime(modulus)?;
        Ok(Concept { modulus, bits })
    }

    /// Parses a bit-character string such as `"01011"`.
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!(
                    "concept strings contain only 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Concept::new(bits)
    }

    /// Decodes bit `x` of `code` into position `x`, for `n ≤ 63`.
    pub fn from_encoding(n: u64, code: u64) -> Result<Self> {
        assert!(n <= 63, "encodings only cover small moduli");
        Concept::new((0..n).map(|x| code >> x & 1 == 1).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Result<Self> {
        Concept::new((0..n).map(|_| rng.random::<bool>()).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn bit(&self, x: u64) -> bool {
        self.bits[(x % self.modulus) as usize]
    }

    /// The parity `C_x ⊕ C_{x+q}`.
    pub fn parity(&self, x: u64, q: u64) -> bool {
        self.bit(x) ^ self.bit(x % self.modulus + q % self.modulus)
    }

    pub fn complement(&self) -> Concept {
        Concept {
            modulus: self.modulus,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Canonical member of `{C, ¬C}`: the one with `C_0 = 0`. The two
    /// induce the same relation, so parity-level code may dedup by this.
    pub fn class_representative(&self) -> Concept {
        if self.bit(0) {
            self.complement()
        } else {
            self.clone()
        }
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn encoding(&self) -> u64 {
        assert!(self.modulus <= 63, "encodings only cover small moduli");
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (x, &b)| acc | (u64::from(b) << x))
    }
}

impl std::fmt::Display for Concept {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl Serialize for Concept {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bit_string())
    }
}

/// Every concept over `Z_n`, in encoding order.
pub fn all_concepts(n: u64) -> Result<Vec<Concept>> {
    ensure_odd_prime(n)?;
    (0..1u64 << n).map(|code| Concept::from_encoding(n, code)).collect()
}

/// One representative per complement class (`C_0 = 0`), in encoding order.
pub fn concept_classes(n: u64) -> Result<Vec<Concept>> {
    ensure_odd_prime(n)?;
    (0..1u64 << n)
        .filter(|code| code & 1 == 0)
        .map(|code| Concept::from_encoding(n, code))
        .collect()
}

/// An answer to a query: a position and a parity bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Answer {
    pub x: Zmod,
    pub b: bool,
}

impl Answer {
    pub fn new(x: Zmod, b: bool) -> Self {
        Answer { x, b }
    }
}

/// True iff `(a.x, a.b)` is a valid answer to query `q` for concept `c`,
/// i.e. `C_x ⊕ C_{x+q} = b`.
pub fn valid_answer(c: &Concept, q: u64, a: &Answer) -> Result<bool> {
    if q == 0 || q >= c.modulus() {
        return Err(Error::QueryOutOfRange { q, n: c.modulus() });
    }
    if a.x.modulus() != c.modulus() {
        return Err(Error::ModulusMismatch {
            left: a.x.modulus(),
            right: c.modulus(),
        });
    }
    Ok(c.parity(a.x.value(), q) == a.b)
}

/// The concept viewed as a relation: all `(q, x, b)` with
/// `b = C_x ⊕ C_{x+q}`, ordered by `(q, x)`. Cardinality `(N-1)·N`.
pub fn relation_of(c: &Concept) -> Vec<(u64, u64, bool)> {
    let n = c.modulus();
    (1..n)
        .flat_map(|q| (0..n).map(move |x| (q, x)))
        .map(|(q, x)| (q, x, c.parity(x, q)))
        .collect()
}

/// A total map from queries `[1, N-1]` to answers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hypothesis {
    modulus: u64,
    answers: Vec<Answer>,
}

impl Hypothesis {
    pub fn new(modulus: u64, answers: Vec<Answer>) -> Result<Self> {
        ensure_odd_prime(modulus)?;
        if answers.len() as u64 != modulus - 1 {
            return Err(Error::SizeMismatch(format!(
                "hypothesis over Z_{modulus} needs {} answers, got {}",
                modulus - 1,
                answers.len()
            )));
        }
        if let Some(a) = answers.iter().find(|a| a.x.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: a.x.modulus(),
                right: modulus,
            });
        }
        Ok(Hypothesis { modulus, answers })
    }

    /// The hypothesis answering every query `q` with `(0, C_0 ⊕ C_q)`;
    /// correct on all queries for `c`.
    pub fn correct_for(c: &Concept) -> Hypothesis {
        let n = c.modulus();
        let answers = (1..n)
            .map(|q| Answer::new(Zmod::new(0, n), c.parity(0, q)))
            .collect();
        Hypothesis { modulus: n, answers }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn answer(&self, q: u64) -> Result<Answer> {
        if q == 0 || q >= self.modulus {
            return Err(Error::QueryOutOfRange { q, n: self.modulus });
        }
        Ok(self.answers[(q - 1) as usize])
    }

    pub fn answers(&self) -> &[Answer] {
        &self.answers
    }

    /// Replaces the entry for query `q`.
    pub fn with_answer(&self, q: u64, a: Answer) -> Result<Hypothesis> {
        if q == 0 || q >= self.modulus {
            return Err(Error::QueryOutOfRange { q, n: self.modulus });
        }
        let mut answers = self.answers.clone();
        answers[(q - 1) as usize] = a;
        Hypothesis::new(self.modulus, answers)
    }
}

/// Number of correct queries required to approximate: `⌈2(N-1)/3⌉`,
/// the integer form of "valid on at least 2/3 of the uniform query mass".
pub fn approximation_threshold(n: u64) -> u64 {
    (2 * (n - 1)).div_ceil(3)
}

/// True iff `h` answers at least `⌈2(N-1)/3⌉` queries validly for `c`.
pub fn approximates(h: &Hypothesis, c: &Concept) -> Result<bool> {
    if h.modulus() != c.modulus() {
        return Err(Error::ModulusMismatch {
            left: h.modulus(),
            right: c.modulus(),
        });
    }
    let n = c.modulus();
    let mut good = 0;
    for q in 1..n {
        if valid_answer(c, q, &h.answer(q)?)? {
            good += 1;
        }
    }
    Ok(good >= approximation_threshold(n))
}
