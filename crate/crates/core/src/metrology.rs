//! Quantum Fisher information matrices, symmetric logarithmic derivatives
//! and the Uhlmann curvature for the Cartan statistical model.
//!
//! Since the three generators `σ_jj` commute with each other and with
//! `U(λ)`, derivatives are exact: `∂_j|ψ_λ⟩ = −i σ_jj |ψ_λ⟩` and
//! `∂_j ρ_λ = −i [σ_jj, ρ_λ]`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::cartan::{apply_gate, build_gate, generators, CartanParams};
use crate::error::{Error, Result};
use crate::linalg::{self, det3, hermitian_eig, sym3_inverse_det, Mat4, Vector};
use crate::states::{Basis, CanonicalParams, DensityMatrix4, TwoQubitPureState};
use crate::tolerance;

/// A 3×3 QFIM with its scalar summaries.
///
/// `p = Tr Q⁻¹` and `s = 1/Det Q` are `+∞` when `Q` is flagged singular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Qfim {
    pub q: [[f64; 3]; 3],
    pub p: f64,
    pub s: f64,
    pub det: f64,
    pub singular: bool,
}

impl Qfim {
    pub fn from_matrix(q: [[f64; 3]; 3]) -> Self {
        let inv = sym3_inverse_det(&q);
        match inv.inverse {
            Some(m) => Qfim {
                q,
                p: m[0][0] + m[1][1] + m[2][2],
                s: 1.0 / inv.det,
                det: inv.det,
                singular: false,
            },
            None => Qfim {
                q,
                p: f64::INFINITY,
                s: f64::INFINITY,
                det: inv.det,
                singular: true,
            },
        }
    }

    /// `1/s = Det Q` (zero when singular).
    pub fn inverse_sloppiness(&self) -> f64 {
        if self.singular {
            0.0
        } else {
            self.det
        }
    }

    pub fn max_abs_diff(&self, other: &Qfim) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.q[i][j] - other.q[i][j]).abs());
            }
        }
        m
    }
}

/// Antisymmetric incompatibility matrix and its determinant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UhlmannMatrix {
    pub d: [[f64; 3]; 3],
    pub det: f64,
}

impl UhlmannMatrix {
    pub fn max_abs(&self) -> f64 {
        self.d.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `(|ψ_λ⟩, [∂₁ψ, ∂₂ψ, ∂₃ψ])` in the computational basis.
fn evolved_with_derivatives(
    psi0: &TwoQubitPureState,
    params: &CartanParams,
) -> (Vector<4>, [Vector<4>; 3]) {
    let psi = apply_gate(params, &psi0.change_basis(Basis::Canonical));
    let a = *psi.amplitudes();
    let minus_i = C64::new(0.0, -1.0);
    let d = generators().map(|g| g.mul_vec(&a).map(|z| z * minus_i));
    (a, d)
}

/// `⟨∂_jψ|∂_kψ⟩ − ⟨∂_jψ|ψ⟩⟨ψ|∂_kψ⟩`; real part ×4 is Q, imaginary part ×4 is D.
fn geometric_tensor(psi: &Vector<4>, d: &[Vector<4>; 3]) -> [[C64; 3]; 3] {
    let mut g = [[C64::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            g[j][k] =
                linalg::inner(&d[j], &d[k]) - linalg::inner(&d[j], psi) * linalg::inner(psi, &d[k]);
        }
    }
    g
}

/// Pure-state QFIM `Q_jk = 4 Re[⟨∂_jψ|∂_kψ⟩ − ⟨∂_jψ|ψ⟩⟨ψ|∂_kψ⟩]`.
pub fn qfim_pure(psi0: &TwoQubitPureState, params: &CartanParams) -> Qfim {
    let (psi, d) = evolved_with_derivatives(psi0, params);
    let g = geometric_tensor(&psi, &d);
    let mut q = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in j..3 {
            let v = 4.0 * 0.5 * (g[j][k].re + g[k][j].re);
            q[j][k] = v;
            q[k][j] = v;
        }
    }
    Qfim::from_matrix(q)
}

/// Pure-state curvature `D_jk = 4 Im[⟨∂_jψ|∂_kψ⟩ − ⟨∂_jψ|ψ⟩⟨ψ|∂_kψ⟩]`.
pub fn uhlmann_pure(psi0: &TwoQubitPureState, params: &CartanParams) -> UhlmannMatrix {
    let (psi, d) = evolved_with_derivatives(psi0, params);
    let g = geometric_tensor(&psi, &d);
    let mut m = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in (j + 1)..3 {
            let v = 4.0 * 0.5 * (g[j][k].im - g[k][j].im);
            m[j][k] = v;
            m[k][j] = -v;
        }
    }
    UhlmannMatrix {
        d: m,
        det: det3(&m),
    }
}

/// Element-wise closed form of the QFIM in the computational-basis
/// parametrization. Independent of `λ`.
pub fn qfim_closed_canonical(params: &CanonicalParams) -> Qfim {
    let CanonicalParams {
        alpha: a,
        beta: b,
        gamma: g,
        delta: d,
        phi_beta,
        phi_gamma,
        phi_delta,
    } = *params;
    let x = a * d * phi_delta.cos();
    let y = b * g * (phi_beta - phi_gamma).cos();
    let ad2 = a * a + d * d;
    let bg2 = b * b + g * g;

    let q11 = 4.0 * (1.0 - 2.0 * x - 2.0 * y) * (1.0 + 2.0 * x + 2.0 * y);
    let q22 = 4.0 * (1.0 - 2.0 * x + 2.0 * y) * (1.0 + 2.0 * x - 2.0 * y);
    let q33 = 16.0 * ad2 * bg2;
    let q12 = 4.0 * (-a * a + b * b + g * g - d * d + 4.0 * x * x - 4.0 * y * y);
    let q13 = 16.0 * (x * bg2 - y * ad2);
    let q23 = -16.0 * (x * bg2 + y * ad2);
    Qfim::from_matrix([[q11, q12, q13], [q12, q22, q23], [q13, q23, q33]])
}

/// Closed-form precision `p` for the computational-basis parametrization.
pub fn precision_closed_canonical(params: &CanonicalParams) -> f64 {
    let (ad, bg) = pair_factors(params);
    let CanonicalParams {
        alpha: a,
        beta: b,
        gamma: g,
        delta: d,
        ..
    } = *params;
    3.0 / 16.0 * ((a * a + d * d) / ad + (b * b + g * g) / bg)
}

/// Closed-form `1/s = Det Q` for the computational-basis parametrization.
pub fn inverse_sloppiness_closed_canonical(params: &CanonicalParams) -> f64 {
    let (ad, bg) = pair_factors(params);
    1024.0 * ad * bg
}

/// `α⁴ − 2α²δ² cos 2φδ + δ⁴` and `β⁴ − 2β²γ² cos 2(φβ − φγ) + γ⁴`.
fn pair_factors(params: &CanonicalParams) -> (f64, f64) {
    let CanonicalParams {
        alpha: a,
        beta: b,
        gamma: g,
        delta: d,
        phi_beta,
        phi_gamma,
        phi_delta,
    } = *params;
    let (a2, b2, g2, d2) = (a * a, b * b, g * g, d * d);
    let ad = a2 * a2 - 2.0 * a2 * d2 * (2.0 * phi_delta).cos() + d2 * d2;
    let bg = b2 * b2 - 2.0 * b2 * g2 * (2.0 * (phi_beta - phi_gamma)).cos() + g2 * g2;
    (ad, bg)
}

/// Closed-form QFIM in the Bell parametrization; depends only on the moduli
/// `b, c, d` (with `a² = 1 − b² − c² − d²`).
pub fn qfim_closed_bell(b: f64, c: f64, d: f64) -> Result<Qfim> {
    check_bell_moduli(b, c, d)?;
    let (b2, c2, d2) = (b * b, c * c, d * d);
    let q11 = 16.0 * (1.0 - b2 - d2) * (b2 + d2);
    let q22 = 16.0 * (1.0 - b2 - c2) * (b2 + c2);
    let q33 = 16.0 * (1.0 - c2 - d2) * (c2 + d2);
    let q12 = 16.0 * (b2 * b2 + b2 * (c2 + d2 - 1.0) + c2 * d2);
    let q13 = 16.0 * (d2 - (b2 + d2) * (c2 + d2));
    let q23 = 16.0 * (c2 * (b2 + d2 - 1.0) + b2 * d2 + c2 * c2);
    Ok(Qfim::from_matrix([
        [q11, q12, q13],
        [q12, q22, q23],
        [q13, q23, q33],
    ]))
}

fn check_bell_moduli(b: f64, c: f64, d: f64) -> Result<()> {
    for (name, v) in [("b", b), ("c", c), ("d", d)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::out_of_range(name, v, "Bell moduli lie in [0, 1]"));
        }
    }
    let n = b * b + c * c + d * d;
    if n > 1.0 + tolerance::NORMALIZATION_INPUT {
        return Err(Error::out_of_range("b² + c² + d²", n, "must not exceed 1"));
    }
    Ok(())
}

/// `p = (3/64)(1/a² + 1/b² + 1/c² + 1/d²)`; `+∞` when any modulus vanishes.
pub fn precision_closed_bell(b: f64, c: f64, d: f64) -> f64 {
    let a2 = 1.0 - b * b - c * c - d * d;
    if [a2, b * b, c * c, d * d].iter().any(|&w| w <= 0.0) {
        return f64::INFINITY;
    }
    3.0 / 64.0 * (1.0 / (b * b) + 1.0 / (c * c) + 1.0 / (d * d) + 1.0 / a2)
}

/// `1/s = 16384 a² b² c² d²`.
pub fn inverse_sloppiness_closed_bell(b: f64, c: f64, d: f64) -> f64 {
    let a2 = (1.0 - b * b - c * c - d * d).max(0.0);
    16384.0 * a2 * b * b * c * c * d * d
}

/// `ρ_λ = U(λ) ρ₀ U(λ)†`.
pub fn evolve_density(params: &CartanParams, rho0: &DensityMatrix4) -> Result<DensityMatrix4> {
    let u = build_gate(params).canonical;
    DensityMatrix4::new(rho0.matrix().conjugate_by(&u))
}

/// `∂_j ρ_λ = −i [σ_jj, ρ_λ]` for `ρ_λ = U(λ) ρ₀ U(λ)†`.
pub fn derivatives_rho(params: &CartanParams, rho0: &DensityMatrix4) -> [Mat4; 3] {
    let u = build_gate(params).canonical;
    derivatives_of_evolved(&rho0.matrix().conjugate_by(&u))
}

pub(crate) fn derivatives_of_evolved(rho: &Mat4) -> [Mat4; 3] {
    let minus_i = C64::new(0.0, -1.0);
    generators().map(|g| g.commutator(rho).scale(minus_i))
}

/// Mixed-state QFIM in the eigenbasis of `ρ`:
///
/// `Q_jk = Σ_{l,m : y_l + y_m > ε} 2 Re(⟨y_l|∂_jρ|y_m⟩⟨y_m|∂_kρ|y_l⟩) / (y_l + y_m)`
///
/// The double sum runs over all ordered pairs `(l, m)` including `l = m`;
/// pairs whose eigenvalue sum is below `ε = 1e-10` lie outside the support
/// and are dropped.
pub fn qfim_mixed(rho: &DensityMatrix4, drho: &[Mat4; 3]) -> Result<Qfim> {
    let eig = hermitian_eig(rho.matrix())?;
    let v = eig.vectors;
    let vh = v.adjoint();
    // derivatives in the eigenbasis
    let dm = drho.map(|d| vh * d * v);
    let mut q = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in j..3 {
            let mut acc = 0.0;
            for l in 0..4 {
                for m in 0..4 {
                    let denom = eig.values[l] + eig.values[m];
                    if denom <= tolerance::SUPPORT {
                        continue;
                    }
                    acc += 2.0 * (dm[j].0[l][m] * dm[k].0[m][l]).re / denom;
                }
            }
            q[j][k] = acc;
            q[k][j] = acc;
        }
    }
    Ok(Qfim::from_matrix(q))
}

/// Pure-state SLD `L = 2 ∂ρ = 2(|∂ψ⟩⟨ψ| + |ψ⟩⟨∂ψ|)`.
pub fn sld_pure(psi: &TwoQubitPureState, dpsi: &Vector<4>) -> Mat4 {
    let a = psi.canonical_amplitudes();
    (Mat4::outer(dpsi, &a) + Mat4::outer(&a, dpsi)).scale_real(2.0)
}

/// SLDs of the evolved state `U(λ)|ψ₀⟩` for the three parameters, together
/// with the evolved state.
pub fn slds_pure(
    psi0: &TwoQubitPureState,
    params: &CartanParams,
) -> (TwoQubitPureState, [Mat4; 3]) {
    let (a, d) = evolved_with_derivatives(psi0, params);
    let psi = TwoQubitPureState::from_unnormalized(a, Basis::Canonical);
    let l = d.map(|dj| sld_pure(&psi, &dj));
    (psi, l)
}
