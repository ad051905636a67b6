//! Seeded random instances for the communication experiments.
//!
//! Conversion instances model protocols whose failure mode is input
//! independent: every input leaks the same constant fraction `δ` of
//! mass onto a shared never-valid "abort" answer, and the rest sits on
//! that input's valid set. This keeps the per-input refinement KL step
//! exactly tight (the abort answer has identical mass under every
//! conditional and under the marginal), while the valid-side shape is
//! free to be near-uniform (low information) or peaked (one bit or
//! more).

use rand::Rng;

use super::info::{mutual_information, AnswerFamily, Distribution};
use super::problems::{SingleInputProblem, TwoSidedProblem};

/// How informative the per-input answer distributions are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// Near-uniform conditionals over dense valid sets; mutual
    /// information at most 0.15 bits, so conversion sample counts stay
    /// tiny.
    LowInformation,
    /// Peaked conditionals with mostly distinct favourite answers;
    /// mutual information at least 1 bit.
    HighInformation,
}

/// An answer family with a matching single-input problem (shared input
/// distribution).
#[derive(Clone, Debug)]
pub struct ConversionInstance {
    pub family: AnswerFamily,
    pub problem: SingleInputProblem,
}

/// Draws an instance of the requested kind with `|X|, |Z| ≤ 8`.
/// Regenerates until the mutual-information condition of the kind
/// holds, so the outcome is deterministic given the stream.
pub fn conversion_instance<R: Rng + ?Sized>(rng: &mut R, kind: InstanceKind) -> ConversionInstance {
    loop {
        let instance = draw_conversion(rng, kind);
        let info = mutual_information(&instance.family);
        let ok = match kind {
            InstanceKind::LowInformation => info <= 0.15,
            InstanceKind::HighInformation => info >= 1.0,
        };
        if ok {
            return instance;
        }
    }
}

fn draw_conversion<R: Rng + ?Sized>(rng: &mut R, kind: InstanceKind) -> ConversionInstance {
    let nx = rng.random_range(3..=8usize);
    let nz = rng.random_range(5..=8usize);
    let abort = nz - 1;
    let delta: f64 = rng.random_range(0.05..0.2);

    let mut valid = Vec::with_capacity(nx);
    let mut per_input = Vec::with_capacity(nx);
    for x in 0..nx {
        let keep: Vec<usize> = match kind {
            InstanceKind::LowInformation => {
                // dense: drop at most one non-abort answer
                let drop = if rng.random::<bool>() {
                    Some(rng.random_range(0..abort))
                } else {
                    None
                };
                (0..abort).filter(|&z| Some(z) != drop).collect()
            }
            InstanceKind::HighInformation => {
                let home = x % abort;
                (0..abort)
                    .filter(|&z| z == home || rng.random::<bool>())
                    .collect()
            }
        };
        let mut row = vec![false; nz];
        for &z in &keep {
            row[z] = true;
        }
        valid.push(row);

        let mut weights = vec![0.0; nz];
        for &z in &keep {
            weights[z] = match kind {
                InstanceKind::LowInformation => 1.0 + rng.random_range(0.0..0.1),
                InstanceKind::HighInformation => {
                    if z == x % abort {
                        10.0 + rng.random_range(0.0..2.0)
                    } else {
                        1.0
                    }
                }
            };
        }
        let total: f64 = weights.iter().sum();
        let mut probs: Vec<f64> = weights.iter().map(|w| w / total * (1.0 - delta)).collect();
        probs[abort] = delta;
        per_input.push(Distribution::new(probs).expect("constructed normalized"));
    }

    let prior = Distribution::from_weights(
        (0..nx).map(|_| rng.random_range(0.5..1.5)).collect(),
    )
    .expect("positive weights");
    let family = AnswerFamily::new(prior.clone(), per_input).expect("consistent shapes");
    let problem = SingleInputProblem::new(valid, prior).expect("consistent shapes");
    ConversionInstance { family, problem }
}

/// A random two-sided relation with every pair solvable and a strictly
/// positive input distribution. `|X| ≤ max_x ≤ 8`, `|Y| ≤ 3`, `|Z| ≤ 3`.
pub fn two_sided_instance<R: Rng + ?Sized>(rng: &mut R, max_x: usize) -> TwoSidedProblem {
    let nx = rng.random_range(3..=max_x.min(8));
    let ny = rng.random_range(2..=3usize);
    let nz = rng.random_range(2..=3usize);
    let mut valid = vec![false; nx * ny * nz];
    for x in 0..nx {
        for y in 0..ny {
            loop {
                let mut any = false;
                for z in 0..nz {
                    let v = rng.random::<bool>();
                    valid[(x * ny + y) * nz + z] = v;
                    any |= v;
                }
                if any {
                    break;
                }
            }
        }
    }
    let weights: Vec<f64> = (0..nx * ny).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mu = weights.into_iter().map(|w| w / total).collect();
    TwoSidedProblem::new(nx, ny, nz, valid, mu).expect("constructed well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn conversion_instances_meet_their_information_targets() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let low = conversion_instance(&mut rng, InstanceKind::LowInformation);
            assert!(mutual_information(&low.family) <= 0.15);
            let high = conversion_instance(&mut rng, InstanceKind::HighInformation);
            assert!(mutual_information(&high.family) >= 1.0);
        }
    }

    #[test]
    fn conversion_instances_share_a_constant_abort_mass() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        let inst = conversion_instance(&mut rng, InstanceKind::LowInformation);
        let abort = inst.family.num_answers() - 1;
        let first = inst.family.conditional(0).prob(abort);
        for x in 0..inst.family.num_inputs() {
            assert_eq!(inst.family.conditional(x).prob(abort), first);
            assert!(!inst.problem.is_valid(x, abort));
        }
    }

    #[test]
    fn two_sided_instances_are_always_solvable() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..50 {
            let p = two_sided_instance(&mut rng, 8);
            for x in 0..p.num_x() {
                for y in 0..p.num_y() {
                    assert!((0..p.num_z()).any(|z| p.is_valid(x, y, z)));
                    assert!(p.mu(x, y) > 0.0);
                }
            }
        }
    }
}
