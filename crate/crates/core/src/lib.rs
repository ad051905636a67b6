//! Exact simulation and counting experiments around hidden-parity
//! relational concepts over `Z_N`.
//!
//! The crate has three layers:
//!
//! - [`modmath`] and [`concepts`]: residue arithmetic, the stepped perfect
//!   matching `m_q`, the concept class of parity relations
//!   `C_x ⊕ C_{x+q} = b`, hypotheses and the approximation predicate;
//! - [`qsim`] and [`learner`]: exact state-vector simulation of the
//!   matching learner, in both sampled and fully enumerated branch modes;
//! - [`speakability`] and [`commlab`]: minimal approximating-cover search
//!   with counting/entropy audits, and a one-way communication toolkit
//!   (KL divergence, mutual information, quantum-to-classical protocol
//!   conversion, brute-force distributional cost search).
//!
//! Everything is deterministic given a seed; measurements expose an
//! enumerated mode returning every branch with its Born probability, so
//! expected values can be tested exactly instead of statistically.

pub mod commlab;
pub mod concepts;
pub mod error;
pub mod learner;
pub mod modmath;
pub mod qsim;
pub mod speakability;

pub use error::{Error, Result};
