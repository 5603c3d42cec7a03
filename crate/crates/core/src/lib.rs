//! Estimation bounds for the three Cartan parameters of a two-qubit gate.
//!
//! The crate models the non-local kernel `U = exp(-i Σ λ_j σ_j⊗σ_j)` and
//! evaluates how well a probe state lets one jointly estimate `λ`: the
//! quantum Fisher information matrix (QFIM), the Uhlmann curvature, the
//! scalar precision bound `p = Tr Q⁻¹`, and the sloppiness `s = 1/Det Q`.
//!
//! Layout:
//! - [`linalg`]: fixed-size complex matrices, Jacobi Hermitian eigensolver,
//!   3×3 symmetric inverse.
//! - [`states`]: pure and mixed two-qubit states, Bell basis, concurrence.
//! - [`cartan`]: kernel parameters, canonical domain, gate construction.
//! - [`metrology`]: QFIM routes (pure, closed forms, mixed), SLDs, curvature.
//! - [`optimal`]: optimal probe families and the precision–sloppiness frontier.
//! - [`sampling`]: random probes and Monte-Carlo scans.
//! - [`noise`]: bit-flip / depolarizing channels and precision scans.

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod error;
pub mod linalg;
pub mod metrology;
pub mod noise;
pub mod optimal;
pub mod sampling;
pub mod states;
pub mod tolerance;

pub use cartan::{build_gate, canonicalize, CartanGate, CartanParams, EquivalenceMove};
pub use error::{Error, Result};
pub use linalg::{hermitian_eig, sym3_inverse_det, EigenSystem, Mat2, Mat4, Matrix, Sym3Inverse};
pub use metrology::{
    derivatives_rho, qfim_closed_bell, qfim_closed_canonical, qfim_mixed, qfim_pure, sld_pure,
    uhlmann_pure, Qfim, UhlmannMatrix,
};
pub use noise::{
    apply_channel, noise_scan, noisy_precision, ChannelFamily, ChannelScope, NoiseChannel,
    NoiseScan, NoiseScanGrid, ProbeClass,
};
pub use optimal::{
    det_at_fixed_p, frontier, make_optimal, rx_generate, suboptimal_state, OptimalFamilySpec,
    RxPairing,
};
pub use sampling::{scan, ProbeKind, RngSpec, ScanRecord};
pub use states::{
    bloch_vector, concurrence_mixed, concurrence_pure, purity, Basis, BlochVector, CanonicalParams,
    DensityMatrix4, TwoQubitPureState,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
