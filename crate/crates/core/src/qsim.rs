//! Exact state-vector simulation of the five primitives the matching
//! learner needs: example preparation, the ± measurement of the parity
//! register, the computational measurement of the x register, the
//! `|j, x0⟩ → |j + x0, x0⟩` relabeling, and the projective matching
//! measurement with its two-outcome parity discrimination.
//!
//! States live on structured, labeled bases rather than qubit arrays:
//!
//! - [`Layout::QueryPointBit`]: triples `(j ∈ [N-1], x ∈ Z_N, i ∈ {0,1})`,
//! - [`Layout::QueryPoint`]: pairs `(j, x)` after the bit register is gone,
//! - [`Layout::Point`]: a single register over `Z_N`.
//!
//! Every measurement comes in two forms: `measure_*` samples one branch
//! from a caller-owned random stream, `enumerate_*` returns every branch
//! with its Born probability so expectations can be checked exactly.
//! Zero-probability branches are never returned by either form.

pub use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::modmath::{ensure_odd_prime, Matching, Zmod};

/// Tolerance for normalization and amplitude comparisons.
pub const AMP_TOL: f64 = 1e-9;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which labeled basis a state is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Triples `(j, x, i)` with `j ∈ [1, N-1]`, `x ∈ Z_N`, `i ∈ {0, 1}`.
    QueryPointBit,
    /// Pairs `(j, x)`.
    QueryPoint,
    /// Singletons `k ∈ Z_N`.
    Point,
}

impl Layout {
    fn dim(self, n: u64) -> usize {
        let n = n as usize;
        match self {
            Layout::QueryPointBit => (n - 1) * n * 2,
            Layout::QueryPoint => (n - 1) * n,
            Layout::Point => n,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Layout::QueryPointBit => "(j, x, i)",
            Layout::QueryPoint => "(j, x)",
            Layout::Point => "point",
        }
    }
}

/// A normalized complex amplitude vector over one of the labeled bases.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    modulus: u64,
    layout: Layout,
    amps: Vec<Complex64>,
}

/// One `(label, re, im)` row of the debug dump format.
#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeEntry {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

impl StateVector {
    /// Wraps raw amplitudes, checking length and unit norm (within
    /// [`AMP_TOL`]).
    pub fn new(modulus: u64, layout: Layout, amps: Vec<Complex64>) -> Result<Self> {
        ensure_odd_prime(modulus)?;
        let dim = layout.dim(modulus);
        if amps.len() != dim {
            return Err(Error::SizeMismatch(format!(
                "{} state over Z_{modulus} needs {dim} amplitudes, got {}",
                layout.name(),
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > AMP_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(StateVector {
            modulus,
            layout,
            amps,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(modulus: u64, layout: Layout, amps: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let scale = norm_sq.sqrt().recip();
        StateVector::new(modulus, layout, amps.into_iter().map(|a| a * scale).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn idx_jxi(&self, j: u64, x: u64, i: u8) -> usize {
        debug_assert!(self.layout == Layout::QueryPointBit);
        (((j - 1) * self.modulus + x) * 2) as usize + i as usize
    }

    fn idx_jx(&self, j: u64, x: u64) -> usize {
        debug_assert!(self.layout == Layout::QueryPoint);
        ((j - 1) * self.modulus + x) as usize
    }

    pub fn amp_jxi(&self, j: u64, x: u64, i: u8) -> Complex64 {
        self.amps[self.idx_jxi(j, x, i)]
    }

    pub fn amp_jx(&self, j: u64, x: u64) -> Complex64 {
        self.amps[self.idx_jx(j, x)]
    }

    pub fn amp_point(&self, k: u64) -> Complex64 {
        debug_assert!(self.layout == Layout::Point);
        self.amps[k as usize]
    }

    /// Amplitudes with the global phase fixed: the first nonzero entry
    /// is rotated to the positive real axis.
    pub fn phase_aligned(&self) -> Vec<Complex64> {
        let Some(first) = self.amps.iter().find(|a| a.norm_sqr() > 0.0) else {
            return self.amps.clone();
        };
        let phase = first.conj() / first.norm();
        self.amps.iter().map(|a| a * phase).collect()
    }

    /// Amplitude-wise equality after quotienting out the global phase.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.modulus != other.modulus || self.layout != other.layout {
            return false;
        }
        self.phase_aligned()
            .iter()
            .zip(other.phase_aligned())
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    fn label_of(&self, idx: usize) -> String {
        let n = self.modulus;
        match self.layout {
            Layout::QueryPointBit => {
                let i = idx % 2;
                let rest = idx / 2;
                let x = rest as u64 % n;
                let j = rest as u64 / n + 1;
                format!("j={j},x={x},i={i}")
            }
            Layout::QueryPoint => {
                let x = idx as u64 % n;
                let j = idx as u64 / n + 1;
                format!("j={j},x={x}")
            }
            Layout::Point => format!("k={idx}"),
        }
    }

    /// Debug dump: one `(label, re, im)` entry per nonzero amplitude.
    pub fn dump(&self) -> Vec<AmplitudeEntry> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(idx, a)| AmplitudeEntry {
                label: self.label_of(idx),
                re: a.re,
                im: a.im,
            })
            .collect()
    }
}

/// A measurement branch: its label, Born probability, and the
/// renormalized post-measurement state.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub outcome: Outcome,
    pub probability: f64,
    pub post_state: StateVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// The `|0⟩ + |1⟩` branch of the parity-register measurement.
    Plus,
    /// The `|0⟩ - |1⟩` branch.
    Minus,
    /// A computational outcome of the x register.
    X(u64),
    /// A two-dimensional matching subspace, labeled by its edge.
    Edge(u64, u64),
}

/// The training example for concept `C`: uniform amplitude
/// `1/√((N-1)·N)` on every valid triple `(j, x, C_x ⊕ C_{x+j})`.
pub fn prepare_example(c: &Concept) -> StateVector {
    let n = c.modulus();
    let dim = Layout::QueryPointBit.dim(n);
    let amp = (((n - 1) * n) as f64).sqrt().recip();
    let mut amps = vec![Complex64::ZERO; dim];
    for j in 1..n {
        for x in 0..n {
            let i = u8::from(c.parity(x, j));
            amps[(((j - 1) * n + x) * 2 + u64::from(i)) as usize] = Complex64::new(amp, 0.0);
        }
    }
    StateVector::new(n, Layout::QueryPointBit, amps).expect("uniform support is normalized")
}

/// The phase-encoded training example: amplitude
/// `(-1)^{C_x ⊕ C_{x+j}} / √((N-1)·N)` on every pair `(j, x)`.
pub fn prepare_phase_example(c: &Concept) -> StateVector {
    let n = c.modulus();
    let dim = Layout::QueryPoint.dim(n);
    let amp = (((n - 1) * n) as f64).sqrt().recip();
    let mut amps = vec![Complex64::ZERO; dim];
    for j in 1..n {
        for x in 0..n {
            let sign = if c.parity(x, j) { -amp } else { amp };
            amps[((j - 1) * n + x) as usize] = Complex64::new(sign, 0.0);
        }
    }
    StateVector::new(n, Layout::QueryPoint, amps).expect("uniform support is normalized")
}

fn expect_layout(s: &StateVector, expected: Layout) -> Result<()> {
    if s.layout() == expected {
        Ok(())
    } else {
        Err(Error::LayoutMismatch {
            expected: expected.name(),
            found: s.layout().name(),
        })
    }
}

/// Samples one branch according to its probability. Branch lists come
/// from the `enumerate_*` functions, so they are nonempty and contain
/// no zero-probability entries.
fn sample_branch<R: Rng + ?Sized>(
    mut branches: Vec<MeasurementOutcome>,
    rng: &mut R,
) -> MeasurementOutcome {
    debug_assert!(!branches.is_empty());
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for idx in 0..branches.len() {
        acc += branches[idx].probability;
        if u < acc {
            return branches.swap_remove(idx);
        }
    }
    let last = branches.len() - 1;
    branches.swap_remove(last)
}

/// All branches of measuring the parity register in the
/// `{|0⟩+|1⟩, |0⟩-|1⟩}` basis. Post-states live on `(j, x)` pairs with
/// amplitudes `(amp(j,x,0) ± amp(j,x,1))/√2`, renormalized.
pub fn enumerate_pm_basis(s: &StateVector) -> Result<Vec<MeasurementOutcome>> {
    expect_layout(s, Layout::QueryPointBit)?;
    let n = s.modulus();
    let mut branches = Vec::with_capacity(2);
    for (outcome, sign) in [(Outcome::Plus, 1.0), (Outcome::Minus, -1.0)] {
        let mut amps = Vec::with_capacity(Layout::QueryPoint.dim(n));
        for j in 1..n {
            for x in 0..n {
                amps.push((s.amp_jxi(j, x, 0) + sign * s.amp_jxi(j, x, 1)) * SQRT_HALF);
            }
        }
        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if probability > 0.0 {
            let scale = probability.sqrt().recip();
            let post = StateVector::new(
                n,
                Layout::QueryPoint,
                amps.into_iter().map(|a| a * scale).collect(),
            )?;
            branches.push(MeasurementOutcome {
                outcome,
                probability,
                post_state: post,
            });
        }
    }
    Ok(branches)
}

pub fn measure_pm_basis<R: Rng + ?Sized>(
    s: &StateVector,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    Ok(sample_branch(enumerate_pm_basis(s)?, rng))
}

/// All branches of measuring the x register in the computational basis.
/// Works on both `(j, x, i)` and `(j, x)` states; the post-state keeps
/// the layout, restricted to the measured `x`.
pub fn enumerate_x_register(s: &StateVector) -> Result<Vec<MeasurementOutcome>> {
    let n = s.modulus();
    let per_x: Box<dyn Fn(u64) -> Vec<usize>> = match s.layout() {
        Layout::QueryPointBit => Box::new(move |x| {
            (1..n)
                .flat_map(|j| [0u8, 1].map(|i| (((j - 1) * n + x) * 2) as usize + i as usize))
                .collect()
        }),
        Layout::QueryPoint => {
            Box::new(move |x| (1..n).map(|j| ((j - 1) * n + x) as usize).collect())
        }
        Layout::Point => {
            return Err(Error::LayoutMismatch {
                expected: "(j, x) or (j, x, i)",
                found: Layout::Point.name(),
            })
        }
    };
    let mut branches = Vec::new();
    for x in 0..n {
        let idxs = per_x(x);
        let probability: f64 = idxs.iter().map(|&i| s.amps[i].norm_sqr()).sum();
        if probability > 0.0 {
            let scale = probability.sqrt().recip();
            let mut amps = vec![Complex64::ZERO; s.amps.len()];
            for &i in &idxs {
                amps[i] = s.amps[i] * scale;
            }
            branches.push(MeasurementOutcome {
                outcome: Outcome::X(x),
                probability,
                post_state: StateVector::new(n, s.layout(), amps)?,
            });
        }
    }
    Ok(branches)
}

pub fn measure_x_register<R: Rng + ?Sized>(
    s: &StateVector,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    Ok(sample_branch(enumerate_x_register(s)?, rng))
}

/// The relabeling `|j, x0⟩ → |j + x0, x0⟩`, turning a pair state fixed
/// at `x0` into a single-register state supported on `Z_N \ {x0}`.
pub fn shift_transform(s: &StateVector, x0: Zmod) -> Result<StateVector> {
    expect_layout(s, Layout::QueryPoint)?;
    let n = s.modulus();
    if x0.modulus() != n {
        return Err(Error::ModulusMismatch {
            left: x0.modulus(),
            right: n,
        });
    }
    let anchor = x0.value();
    for j in 1..n {
        for x in 0..n {
            if x != anchor && s.amp_jx(j, x).norm_sqr() > 1e-24 {
                return Err(Error::MixedAnchor { expected: anchor });
            }
        }
    }
    let mut amps = vec![Complex64::ZERO; n as usize];
    for j in 1..n {
        amps[((j + anchor) % n) as usize] = s.amp_jx(j, anchor);
    }
    StateVector::new(n, Layout::Point, amps)
}

/// All branches of the projective matching measurement: one
/// two-dimensional subspace per edge of `m`, with probability
/// `|amp(a)|² + |amp(b)|²`. The `|x0⟩` completion outcome is required
/// to carry no amplitude and is never returned.
pub fn enumerate_matching(s: &StateVector, m: &Matching) -> Result<Vec<MeasurementOutcome>> {
    expect_layout(s, Layout::Point)?;
    let n = s.modulus();
    if m.modulus() != n {
        return Err(Error::ModulusMismatch {
            left: m.modulus(),
            right: n,
        });
    }
    let excluded = m.excluded().value();
    let excluded_mass = s.amp_point(excluded).norm_sqr();
    if excluded_mass > AMP_TOL {
        return Err(Error::ExcludedVertexMass {
            vertex: excluded,
            mass: excluded_mass,
        });
    }
    let mut branches = Vec::with_capacity(m.edges().len());
    for (a, b) in m.edge_values() {
        let probability = s.amp_point(a).norm_sqr() + s.amp_point(b).norm_sqr();
        if probability > 0.0 {
            let scale = probability.sqrt().recip();
            let mut amps = vec![Complex64::ZERO; n as usize];
            amps[a as usize] = s.amp_point(a) * scale;
            amps[b as usize] = s.amp_point(b) * scale;
            branches.push(MeasurementOutcome {
                outcome: Outcome::Edge(a, b),
                probability,
                post_state: StateVector::new(n, Layout::Point, amps)?,
            });
        }
    }
    Ok(branches)
}

pub fn measure_matching<R: Rng + ?Sized>(
    s: &StateVector,
    m: &Matching,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    Ok(sample_branch(enumerate_matching(s, m)?, rng))
}

/// Discriminates `|a⟩ + |b⟩` (parity 0) from `|a⟩ - |b⟩` (parity 1).
/// The two are orthogonal, so a pipeline post-state matches exactly
/// one of them; anything else signals an upstream bug.
pub fn distinguish_parity(post: &StateVector, edge: (u64, u64)) -> Result<bool> {
    expect_layout(post, Layout::Point)?;
    let (a, b) = edge;
    let plus = (post.amp_point(a) + post.amp_point(b)) * SQRT_HALF;
    let minus = (post.amp_point(a) - post.amp_point(b)) * SQRT_HALF;
    if (plus.norm() - 1.0).abs() <= AMP_TOL {
        Ok(false)
    } else if (minus.norm() - 1.0).abs() <= AMP_TOL {
        Ok(true)
    } else {
        Err(Error::AmbiguousParity { a, b })
    }
}
