//! Cartan kernel `U(λ) = exp(−i Σ_j λ_j σ_j⊗σ_j)`: parameters, reduction to
//! the canonical class vector set, and gate construction.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, Mat4};
use crate::states::{Basis, TwoQubitPureState};

/// The three kernel angles in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CartanParams(pub [f64; 3]);

impl CartanParams {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        CartanParams([l1, l2, l3])
    }

    pub fn zero() -> Self {
        CartanParams([0.0; 3])
    }

    pub fn l1(&self) -> f64 {
        self.0[0]
    }
    pub fn l2(&self) -> f64 {
        self.0[1]
    }
    pub fn l3(&self) -> f64 {
        self.0[2]
    }

    /// λ₊ = λ₁ + λ₂
    pub fn plus(&self) -> f64 {
        self.0[0] + self.0[1]
    }

    /// λ₋ = λ₁ − λ₂
    pub fn minus(&self) -> f64 {
        self.0[0] - self.0[1]
    }

    /// `π/2 > λ₁ ≥ λ₂ ≥ λ₃ ≥ 0` and `λ₁ + λ₂ ≤ π/2`.
    pub fn in_canonical_domain(&self) -> bool {
        let [a, b, c] = self.0;
        FRAC_PI_2 > a && a >= b && b >= c && c >= 0.0 && a + b <= FRAC_PI_2
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..3)
            .map(|k| (self.0[k] - other.0[k]).abs())
            .fold(0.0, f64::max)
    }
}

/// `σx⊗σx`, `σy⊗σy`, `σz⊗σz`. They commute pairwise.
pub fn generators() -> [Mat4; 3] {
    pauli::xyz().map(|s| kron(&s, &s))
}

/// The kernel in both representations.
#[derive(Clone, Copy, Debug)]
pub struct CartanGate {
    pub params: CartanParams,
    pub canonical: Mat4,
    /// Diagonal entries in the Bell basis (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
    pub bell_phases: [C64; 4],
}

impl CartanGate {
    pub fn matrix(&self, basis: Basis) -> Mat4 {
        match basis {
            Basis::Canonical => self.canonical,
            Basis::Bell => Mat4::from_diagonal(&self.bell_phases),
        }
    }
}

pub fn build_gate(params: &CartanParams) -> CartanGate {
    let [l1, l2, l3] = params.0;
    let lp = params.plus();
    let lm = params.minus();
    let em = C64::from_polar(1.0, -l3);
    let ep = C64::from_polar(1.0, l3);
    let mi = C64::new(0.0, -1.0);
    let z = C64::new(0.0, 0.0);

    let canonical = crate::linalg::Matrix([
        [em * lm.cos(), z, z, mi * em * lm.sin()],
        [z, ep * lp.cos(), mi * ep * lp.sin(), z],
        [z, mi * ep * lp.sin(), ep * lp.cos(), z],
        [mi * em * lm.sin(), z, z, em * lm.cos()],
    ]);
    let bell_phases = [
        C64::from_polar(1.0, -(l1 - l2 + l3)),
        C64::from_polar(1.0, l1 - l2 - l3),
        C64::from_polar(1.0, -(l1 + l2 - l3)),
        C64::from_polar(1.0, l1 + l2 + l3),
    ];
    CartanGate {
        params: *params,
        canonical,
        bell_phases,
    }
}

/// `U(λ)|ψ₀⟩`, returned in the probe's own basis.
pub fn apply_gate(params: &CartanParams, psi0: &TwoQubitPureState) -> TwoQubitPureState {
    let gate = build_gate(params);
    let a = psi0.amplitudes();
    let out = match psi0.basis() {
        Basis::Canonical => gate.canonical.mul_vec(a),
        Basis::Bell => [0, 1, 2, 3].map(|k| gate.bell_phases[k] * a[k]),
    };
    psi0.with_amplitudes(out)
}

/// Moves that preserve the local-equivalence class of a kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EquivalenceMove {
    /// `λ_k ↦ λ_k + multiple·π/2`.
    Shift { component: usize, multiple: i64 },
    /// `(λ_i, λ_j) ↦ (−λ_i, −λ_j)`.
    Reverse { first: usize, second: usize },
    /// `(λ_i, λ_j) ↦ (λ_j, λ_i)`.
    Swap { first: usize, second: usize },
}

impl EquivalenceMove {
    pub fn apply(&self, params: &CartanParams) -> CartanParams {
        let mut l = params.0;
        match *self {
            EquivalenceMove::Shift {
                component,
                multiple,
            } => {
                l[component] += multiple as f64 * FRAC_PI_2;
            }
            EquivalenceMove::Reverse { first, second } => {
                l[first] = -l[first];
                l[second] = -l[second];
            }
            EquivalenceMove::Swap { first, second } => l.swap(first, second),
        }
        CartanParams(l)
    }
}

pub fn replay(params: &CartanParams, moves: &[EquivalenceMove]) -> CartanParams {
    moves.iter().fold(*params, |acc, m| m.apply(&acc))
}

const CANONICALIZE_MAX_ITERATIONS: usize = 16;

/// Maps `λ` into the canonical class vector set using shift, reverse and swap
/// moves, returning the image and the move log.
///
/// Each round: reduce every component into `[0, π/2)`, sort descending, and if
/// `λ₁ + λ₂ > π/2` reflect `(λ₁, λ₂) ↦ (π/2 − λ₁, π/2 − λ₂)` by a reverse
/// followed by two shifts. Rounds repeat until the predicate holds.
pub fn canonicalize(params: &CartanParams) -> Result<(CartanParams, Vec<EquivalenceMove>)> {
    if params.0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!(
            "non-finite Cartan parameters {:?}",
            params.0
        )));
    }
    let mut l = params.0;
    let mut moves = Vec::new();

    for _ in 0..CANONICALIZE_MAX_ITERATIONS {
        for (k, x) in l.iter_mut().enumerate() {
            let mut r = x.rem_euclid(FRAC_PI_2);
            if r >= FRAC_PI_2 {
                r = 0.0;
            }
            let multiple = ((r - *x) / FRAC_PI_2).round() as i64;
            if multiple != 0 {
                moves.push(EquivalenceMove::Shift {
                    component: k,
                    multiple,
                });
            }
            *x = r;
        }

        for i in 0..3 {
            for j in 0..(2 - i) {
                if l[j] < l[j + 1] {
                    l.swap(j, j + 1);
                    moves.push(EquivalenceMove::Swap {
                        first: j,
                        second: j + 1,
                    });
                }
            }
        }

        if CartanParams(l).in_canonical_domain() {
            return Ok((CartanParams(l), moves));
        }

        if l[0] + l[1] > FRAC_PI_2 {
            moves.push(EquivalenceMove::Reverse {
                first: 0,
                second: 1,
            });
            moves.push(EquivalenceMove::Shift {
                component: 0,
                multiple: 1,
            });
            moves.push(EquivalenceMove::Shift {
                component: 1,
                multiple: 1,
            });
            l[0] = -l[0] + FRAC_PI_2;
            l[1] = -l[1] + FRAC_PI_2;
        }
    }
    Err(Error::Internal(format!(
        "canonicalization of {:?} did not reach the canonical domain in {} rounds",
        params.0, CANONICALIZE_MAX_ITERATIONS
    )))
}
