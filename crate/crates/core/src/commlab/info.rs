//! Finite distributions, KL divergence and mutual information, all in
//! bits.

use rand::Rng;
use serde::Serialize;

use super::COMM_TOL;
use crate::error::{Error, Result};

/// A probability distribution over `0..len`, normalized within 1e-9.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument(
                "distributions need a nonempty support".into(),
            ));
        }
        if let Some(&p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > COMM_TOL {
            return Err(Error::Unnormalized { sum });
        }
        Ok(Distribution { probs })
    }

    /// Normalizes nonnegative weights with positive total mass.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || sum <= 0.0 {
            return Err(Error::Unnormalized { sum });
        }
        Distribution::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(len: usize) -> Self {
        Distribution {
            probs: vec![1.0 / len as f64; len],
        }
    }

    pub fn point_mass(len: usize, at: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[at] = 1.0;
        Distribution { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Inverse-CDF sampling from a caller-owned stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.probs.len() - 1
    }
}

/// `Σ_z P(z) log2(P(z)/Q(z))`, with `0·log(0/q) = 0`; positive infinity
/// when `P` puts mass where `Q` has none.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch(format!(
            "KL needs a shared support universe, got {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut total = 0.0;
    for (pi, qi) in p.probs.iter().zip(&q.probs) {
        if *pi == 0.0 {
            continue;
        }
        if *qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += pi * (pi / qi).log2();
    }
    Ok(total)
}

/// A prior over inputs together with one answer distribution per input;
/// the answer statistics of a protocol, which is all the conversion to
/// a classical protocol consumes.
#[derive(Clone, Debug, Serialize)]
pub struct AnswerFamily {
    prior: Distribution,
    per_input: Vec<Distribution>,
}

impl AnswerFamily {
    pub fn new(prior: Distribution, per_input: Vec<Distribution>) -> Result<Self> {
        if prior.len() != per_input.len() {
            return Err(Error::SizeMismatch(format!(
                "prior over {} inputs but {} answer distributions",
                prior.len(),
                per_input.len()
            )));
        }
        let answers = per_input[0].len();
        if per_input.iter().any(|d| d.len() != answers) {
            return Err(Error::SizeMismatch(
                "per-input answer distributions must share a support".into(),
            ));
        }
        Ok(AnswerFamily { prior, per_input })
    }

    pub fn num_inputs(&self) -> usize {
        self.prior.len()
    }

    pub fn num_answers(&self) -> usize {
        self.per_input[0].len()
    }

    pub fn prior(&self) -> &Distribution {
        &self.prior
    }

    pub fn conditional(&self, x: usize) -> &Distribution {
        &self.per_input[x]
    }

    /// The answer marginal `μ^B = Σ_x prior(x) · μ_x`.
    pub fn marginal(&self) -> Distribution {
        let mut probs = vec![0.0; self.num_answers()];
        for (x, dist) in self.per_input.iter().enumerate() {
            let w = self.prior.prob(x);
            for (z, p) in dist.probs().iter().enumerate() {
                probs[z] += w * p;
            }
        }
        Distribution { probs }
    }
}

/// `I(A;B) = E_{x ~ prior}[KL(μ_x ‖ μ^B)]` in bits.
pub fn mutual_information(f: &AnswerFamily) -> f64 {
    let marginal = f.marginal();
    (0..f.num_inputs())
        .filter(|&x| f.prior().prob(x) > 0.0)
        .map(|x| {
            f.prior().prob(x)
                * kl_divergence(f.conditional(x), &marginal).expect("shared support")
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn kl_examples() {
        let u2 = Distribution::uniform(2);
        assert_eq!(kl_divergence(&u2, &u2).unwrap(), 0.0);

        let point = Distribution::point_mass(2, 0);
        assert!((kl_divergence(&point, &u2).unwrap() - 1.0).abs() < 1e-12);

        let q = Distribution::point_mass(2, 1);
        assert_eq!(kl_divergence(&point, &q).unwrap(), f64::INFINITY);
    }

    #[test]
    fn distributions_validate() {
        assert!(Distribution::new(vec![0.5, 0.4]).is_err());
        assert!(Distribution::new(vec![1.2, -0.2]).is_err());
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.25; 4]).is_ok());
        assert!(kl_divergence(&Distribution::uniform(2), &Distribution::uniform(3)).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        // All conditionals equal: independent, zero information.
        let family = AnswerFamily::new(
            Distribution::uniform(3),
            vec![Distribution::uniform(4); 3],
        )
        .unwrap();
        assert!(mutual_information(&family).abs() < 1e-12);

        // Disjoint point masses under a uniform prior on two inputs: 1 bit.
        let family = AnswerFamily::new(
            Distribution::uniform(2),
            vec![Distribution::point_mass(2, 0), Distribution::point_mass(2, 1)],
        )
        .unwrap();
        assert!((mutual_information(&family) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_is_nonnegative_on_random_families() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let nx = rng.random_range(2..=6);
            let nz = rng.random_range(2..=6);
            let prior = Distribution::from_weights(
                (0..nx).map(|_| rng.random::<f64>() + 1e-3).collect(),
            )
            .unwrap();
            let per_input = (0..nx)
                .map(|_| {
                    Distribution::from_weights(
                        (0..nz).map(|_| rng.random::<f64>() + 1e-3).collect(),
                    )
              .unwrap()
                })
                .collect();
            let family = AnswerFamily::new(prior, per_input).unwrap();
            let info = mutual_information(&family);
            assert!(info >= -1e-12, "I = {info}");

            // Cross-check against the direct double-sum definition
            // I = Σ_{x,z} prior(x) μ_x(z) log2(μ_x(z) / μ^B(z)).
            let marginal = family.marginal();
            let direct: f64 = (0..family.num_inputs())
                .flat_map(|x| (0..family.num_answers()).map(move |z| (x, z)))
                .map(|(x, z)| {
                    let joint = family.prior().prob(x) * family.conditional(x).prob(z);
                    if joint == 0.0 {
                        0.0
                    } else {
                        joint * (family.conditional(x).prob(z) / marginal.prob(z)).log2()
                    }
                })
                .sum();
            assert!((info - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_respects_the_distribution() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let d = Distribution::new(vec![0.25, 0.75]).unwrap();
        let hits = (0..4000).filter(|_| d.sample(&mut rng) == 1).count();
        assert!((hits as f64 / 4000.0 - 0.75).abs() < 0.05);
    }
}
