//! Two-qubit pure and mixed states, the Bell basis, purity, concurrence and
//! single-qubit Bloch vectors.
//!
//! Bell basis order is fixed to Φ⁺, Φ⁻, Ψ⁺, Ψ⁻:
//! `(|00⟩+|11⟩)/√2, (|00⟩−|11⟩)/√2, (|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2`.
//! The Cartan kernel is diagonal in this basis with phases listed in the
//! same order.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, kron, pauli, Mat2, Mat4, Vector};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Canonical,
    Bell,
}

/// Columns are the Bell vectors in computational coordinates.
pub fn bell_basis() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    Mat4::from_real([
        [s, s, 0.0, 0.0],
        [0.0, 0.0, s, s],
        [0.0, 0.0, s, -s],
        [s, -s, 0.0, 0.0],
    ])
}

/// Amplitude/phase parametrization in the computational basis:
/// `(α, β e^{iφβ}, γ e^{iφγ}, δ e^{iφδ})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub phi_beta: f64,
    pub phi_gamma: f64,
    pub phi_delta: f64,
}

/// Normalized four-amplitude state tagged with the basis its amplitudes
/// refer to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateLiteral", into = "StateLiteral")]
pub struct TwoQubitPureState {
    amplitudes: Vector<4>,
    basis: Basis,
}

/// JSON form: `{"amplitudes": [[re, im], ...], "basis": "canonical"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateLiteral {
    pub amplitudes: [C64; 4],
    pub basis: Basis,
}

impl TryFrom<StateLiteral> for TwoQubitPureState {
    type Error = Error;
    fn try_from(lit: StateLiteral) -> Result<Self> {
        TwoQubitPureState::new(lit.amplitudes, lit.basis)
    }
}

impl From<TwoQubitPureState> for StateLiteral {
    fn from(s: TwoQubitPureState) -> Self {
        StateLiteral {
            amplitudes: s.amplitudes,
            basis: s.basis,
        }
    }
}

impl TwoQubitPureState {
    /// Accepts amplitudes whose squared norm is within 1e-10 of one and
    /// rescales them to unit norm.
    pub fn new(amplitudes: Vector<4>, basis: Basis) -> Result<Self> {
        let n2 = linalg::norm_sqr(&amplitudes);
        let deficit = 1.0 - n2;
        if !deficit.is_finite() || deficit.abs() > tolerance::NORMALIZATION_INPUT {
            return Err(Error::Normalization { deficit });
        }
        Ok(Self::from_unnormalized(amplitudes, basis))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub(crate) fn from_unnormalized(mut amplitudes: Vector<4>, basis: Basis) -> Self {
        let n = linalg::norm_sqr(&amplitudes).sqrt();
        for a in amplitudes.iter_mut() {
            *a /= n;
        }
        Self { amplitudes, basis }
    }

    pub fn basis_state(index: usize, basis: Basis) -> Self {
        let mut amps = [C64::new(0.0, 0.0); 4];
        amps[index] = C64::new(1.0, 0.0);
        Self {
            amplitudes: amps,
            basis,
        }
    }

    pub fn from_canonical_params(params: &CanonicalParams) -> Result<Self> {
        let CanonicalParams {
            alpha,
            beta,
            gamma,
            delta,
            phi_beta,
            phi_gamma,
            phi_delta,
        } = *params;
        for (name, v) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::out_of_range(
                    name,
                    v,
                    "amplitude moduli lie in [0, 1]",
                ));
            }
        }
        Self::new(
            [
                C64::new(alpha, 0.0),
                C64::from_polar(beta, phi_beta),
                C64::from_polar(gamma, phi_gamma),
                C64::from_polar(delta, phi_delta),
            ],
            Basis::Canonical,
        )
    }

    /// Bell-basis probe `(a, b e^{iφb}, c e^{iφc}, d e^{iφd})` with
    /// `a = √(1 − b² − c² − d²)`.
    pub fn from_bell_params(b: f64, c: f64, d: f64, phases: [f64; 3]) -> Result<Self> {
        for (name, v) in [("b", b), ("c", c), ("d", d)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::out_of_range(
                    name,
                    v,
                    "amplitude moduli lie in [0, 1]",
                ));
            }
        }
        let a2 = 1.0 - b * b - c * c - d * d;
        if a2 < -tolerance::NORMALIZATION_INPUT {
            return Err(Error::Normalization { deficit: a2 });
        }
        let a = a2.max(0.0).sqrt();
        Self::new(
            [
                C64::new(a, 0.0),
                C64::from_polar(b, phases[0]),
                C64::from_polar(c, phases[1]),
                C64::from_polar(d, phases[2]),
            ],
            Basis::Bell,
        )
    }

    pub fn amplitudes(&self) -> &Vector<4> {
        &self.amplitudes
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes)
    }

    pub fn change_basis(&self, target: Basis) -> Self {
        if target == self.basis {
            return *self;
        }
        let b = bell_basis();
        let amplitudes = match target {
            Basis::Canonical => b.mul_vec(&self.amplitudes),
            Basis::Bell => b.adjoint().mul_vec(&self.amplitudes),
        };
        Self {
            amplitudes,
            basis: target,
        }
    }

    /// Computational-basis amplitudes.
    pub fn canonical_amplitudes(&self) -> Vector<4> {
        self.change_basis(Basis::Canonical).amplitudes
    }

    pub fn bell_amplitudes(&self) -> Vector<4> {
        self.change_basis(Basis::Bell).amplitudes
    }

    /// Moduli and phases relative to the |00⟩ amplitude.
    pub fn canonical_params(&self) -> CanonicalParams {
        let a = self.canonical_amplitudes();
        let ref_phase = if a[0].norm() > 0.0 { a[0].arg() } else { 0.0 };
        let rel = |z: C64| {
            if z.norm() > 0.0 {
                z.arg() - ref_phase
            } else {
                0.0
            }
        };
        CanonicalParams {
            alpha: a[0].norm(),
            beta: a[1].norm(),
            gamma: a[2].norm(),
            delta: a[3].norm(),
            phi_beta: rel(a[1]),
            phi_gamma: rel(a[2]),
            phi_delta: rel(a[3]),
        }
    }

    /// |⟨self|other⟩|, independent of either state's basis tag.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let other = other.change_basis(self.basis);
        linalg::inner(&self.amplitudes, &other.amplitudes).norm()
    }

    /// `|ψ⟩⟨ψ|` in the computational basis.
    pub fn projector(&self) -> DensityMatrix4 {
        let a = self.canonical_amplitudes();
        DensityMatrix4 {
            matrix: Mat4::outer(&a, &a),
        }
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vector<4>) -> Self {
        Self {
            amplitudes,
            basis: self.basis,
        }
    }
}

/// 4×4 Hermitian, unit-trace, positive operator in the computational basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4 {
    matrix: Mat4,
}

impl DensityMatrix4 {
    pub fn new(matrix: Mat4) -> Result<Self> {
        matrix.check_hermitian()?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tolerance::TRACE {
            return Err(Error::Trace { trace });
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.values[0] < tolerance::POSITIVITY {
            return Err(Error::NotPositive {
                eigenvalue: eig.values[0],
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Mat4::identity().scale_real(0.25),
        }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    /// Reduced state of the leftmost qubit.
    pub fn partial_trace_second(&self) -> Mat2 {
        let m = &self.matrix.0;
        let mut r = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = m[2 * i][2 * j] + m[2 * i + 1][2 * j + 1];
            }
        }
        r
    }

    /// Reduced state of the rightmost qubit.
    pub fn partial_trace_first(&self) -> Mat2 {
        let m = &self.matrix.0;
        let mut r = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = m[i][j] + m[2 + i][2 + j];
            }
        }
        r
    }
}

impl From<TwoQubitPureState> for DensityMatrix4 {
    fn from(psi: TwoQubitPureState) -> Self {
        psi.projector()
    }
}

pub fn purity(rho: &DensityMatrix4) -> f64 {
    (*rho.matrix() * *rho.matrix()).trace().re
}

/// `2 |a₀₀ a₁₁ − a₀₁ a₁₀|` on computational amplitudes.
pub fn concurrence_pure(psi: &TwoQubitPureState) -> f64 {
    let a = psi.canonical_amplitudes();
    (2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0)
}

/// `max(0, Λ₁ − Λ₂ − Λ₃ − Λ₄)` with Λ the descending eigenvalues of
/// `R = √(√ρ ρ̃ √ρ)`, `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence_mixed(rho: &DensityMatrix4) -> Result<f64> {
    let eig = hermitian_eig(rho.matrix())?;
    if eig.values[0] < tolerance::POSITIVITY {
        return Err(Error::NotPositive {
            eigenvalue: eig.values[0],
        });
    }
    let sqrt_rho = eig.map_values(clamped_sqrt);
    let yy = kron(&pauli::y(), &pauli::y());
    let flipped = yy * rho.matrix().conj() * yy;
    let inner = (sqrt_rho * flipped * sqrt_rho).hermitian_part();
    let inner_eig = hermitian_eig(&inner)?;
    let mut lambdas: Vec<f64> = inner_eig.values.iter().map(|&y| clamped_sqrt(y)).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Square root with rounding-level values and tiny negatives mapped to zero.
/// Larger negatives propagate as NaN so they are never silently hidden.
pub(crate) fn clamped_sqrt(y: f64) -> f64 {
    if y.abs() <= tolerance::ROUNDOFF_FLOOR || (-tolerance::SQRT_CLAMP..0.0).contains(&y) {
        0.0
    } else {
        y.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn length(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `(1 + |r|²)/2`.
    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.length().powi(2))
    }
}

/// `r = (Tr σx ρ, Tr σy ρ, Tr σz ρ)` for a single-qubit state.
pub fn bloch_vector(rho: &Mat2) -> BlochVector {
    let [x, y, z] = pauli::xyz().map(|s| (s * *rho).trace().re);
    BlochVector { r: [x, y, z] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_state(rng: &mut impl Rng) -> TwoQubitPureState {
        let amps = [(); 4].map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        TwoQubitPureState::from_unnormalized(amps, Basis::Canonical)
    }

    #[test]
    fn canonical_params_basis_state() {
        let psi = TwoQubitPureState::from_canonical_params(&CanonicalParams {
            alpha: 1.0,
            beta: 0.0,
            gamma: 0.0,
            delta: 0.0,
            phi_beta: 0.3,
            phi_gamma: 1.1,
            phi_delta: 2.0,
        })
        .unwrap();
        assert_eq!(
            psi.fidelity(&TwoQubitPureState::basis_state(0, Basis::Canonical)),
            1.0
        );
    }

    #[test]
    fn canonical_params_first_separable_optimum() {
        let phi = 0.7;
        let s = FRAC_1_SQRT_2;
        let psi = TwoQubitPureState::from_canonical_params(&CanonicalParams {
            alpha: s,
            beta: s,
            gamma: 0.0,
            delta: 0.0,
            phi_beta: phi,
            phi_gamma: 0.0,
            phi_delta: 0.0,
        })
        .unwrap();
        let expected = TwoQubitPureState::new(
            [c(s, 0.0), C64::from_polar(s, phi), c(0.0, 0.0), c(0.0, 0.0)],
            Basis::Canonical,
        )
        .unwrap();
        assert!((psi.fidelity(&expected) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn canonical_params_psi3_class() {
        let phi = 1.3;
        let psi = TwoQubitPureState::from_canonical_params(&CanonicalParams {
            alpha: 0.3,
            beta: 0.2,
            gamma: (0.5_f64 - 0.04).sqrt(),
            delta: (0.5_f64 - 0.09).sqrt(),
            phi_beta: phi,
            phi_gamma: phi + PI / 2.0,
            phi_delta: PI / 2.0,
        })
        .unwrap();
        let a = psi.amplitudes();
        let e = [
            c(0.3, 0.0),
            C64::from_polar(0.2, phi),
            c(0.0, (0.5_f64 - 0.04).sqrt()) * C64::from_polar(1.0, phi),
            c(0.0, (0.5_f64 - 0.09).sqrt()),
        ];
        for k in 0..4 {
            assert!((a[k] - e[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn normalization_violation_reports_deficit() {
        let err = TwoQubitPureState::from_canonical_params(&CanonicalParams {
            alpha: 0.5,
            beta: 0.5,
            gamma: 0.0,
            delta: 0.0,
            phi_beta: 0.0,
            phi_gamma: 0.0,
            phi_delta: 0.0,
        })
        .unwrap_err();
        match err {
            Error::Normalization { deficit } => assert!((deficit - 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn basis_change_reads_off_definitions() {
        let s = FRAC_1_SQRT_2;
        let zz = TwoQubitPureState::basis_state(0, Basis::Canonical).change_basis(Basis::Bell);
        let e = [s, s, 0.0, 0.0];
        for k in 0..4 {
            assert!((zz.amplitudes()[k] - c(e[k], 0.0)).norm() < 1e-15);
        }
        let phi_plus =
            TwoQubitPureState::basis_state(0, Basis::Bell).change_basis(Basis::Canonical);
        let e = [s, 0.0, 0.0, s];
        for k in 0..4 {
            assert!((phi_plus.amplitudes()[k] - c(e[k], 0.0)).norm() < 1e-15);
        }
        let psi_minus = TwoQubitPureState::basis_state(3, Basis::Bell).canonical_amplitudes();
        assert!((psi_minus[1] - c(s, 0.0)).norm() < 1e-15);
        assert!((psi_minus[2] - c(-s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn expectation_value_invariant_under_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let xx = kron(&pauli::x(), &pauli::x());
        let b = bell_basis();
        let xx_bell = b.adjoint() * xx * b;
        for _ in 0..100 {
            let psi = random_state(&mut rng);
            let a = psi.amplitudes();
            let bell = psi.change_basis(Basis::Bell);
            let e1 = linalg::inner(a, &xx.mul_vec(a));
            let e2 = linalg::inner(bell.amplitudes(), &xx_bell.mul_vec(bell.amplitudes()));
            assert!((e1 - e2).norm() < 1e-12);
        }
    }

    #[test]
    fn concurrence_pure_cases() {
        let s = FRAC_1_SQRT_2;
        let bell = TwoQubitPureState::new(
            [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
            Basis::Canonical,
        )
        .unwrap();
        assert!((concurrence_pure(&bell) - 1.0).abs() < 1e-15);

        let prod = TwoQubitPureState::from_unnormalized(
            linalg::kron_vec(&[c(0.6, 0.0), c(0.0, 0.8)], &[c(0.3, 0.1), c(-0.2, 0.5)]),
            Basis::Canonical,
        );
        assert!(concurrence_pure(&prod) < 1e-15);

        // (0, 0, i/√2, i/√2): a₀₀a₁₁ − a₀₁a₁₀ = 0·(i/√2) − 0·(i/√2) = 0
        let ent = TwoQubitPureState::new(
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, s)],
            Basis::Canonical,
        )
        .unwrap();
        assert_eq!(concurrence_pure(&ent), 0.0);
    }

    #[test]
    fn concurrence_mixed_cases() {
        assert!(concurrence_mixed(&DensityMatrix4::maximally_mixed()).unwrap() < 1e-12);
        let phi_plus = TwoQubitPureState::basis_state(0, Basis::Bell);
        assert!((concurrence_mixed(&phi_plus.projector()).unwrap() - 1.0).abs() < 1e-8);
    }

    /// Werner-type mixture w|Φ⁺⟩⟨Φ⁺| + (1−w)I/4 at w = 1/2.
    #[test]
    fn concurrence_of_half_mixed_bell_state() {
        let phi_plus = TwoQubitPureState::basis_state(0, Basis::Bell).projector();
        let m = phi_plus.matrix().scale_real(0.5) + Mat4::identity().scale_real(0.125);
        let rho = DensityMatrix4::new(m).unwrap();
        // Independent route: Λ² are the eigenvalues of the non-Hermitian ρρ̃.
        // Here ρ̃ = ρ (the state is invariant under spin flip) so Λ are the
        // eigenvalues of ρ: 5/8, 1/8, 1/8, 1/8 → C = 5/8 − 3/8 = 1/4.
        let yy = kron(&pauli::y(), &pauli::y());
        let flipped = yy * rho.matrix().conj() * yy;
        assert!(flipped.max_abs_diff(rho.matrix()) < 1e-15);
        let got = concurrence_mixed(&rho).unwrap();
        assert!((got - 0.25).abs() < 1e-12, "{got}");
    }

    #[test]
    fn concurrence_mixed_matches_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let psi = random_state(&mut rng);
            let cm = concurrence_mixed(&psi.projector()).unwrap();
            assert!(
                (cm - concurrence_pure(&psi)).abs() < 1e-8,
                "{cm} vs {}",
                concurrence_pure(&psi)
            );
        }
    }

    #[test]
    fn purity_cases() {
        let psi = TwoQubitPureState::basis_state(2, Basis::Bell);
        assert!((purity(&psi.projector()) - 1.0).abs() < 1e-12);
        assert!((purity(&DensityMatrix4::maximally_mixed()) - 0.25).abs() < 1e-15);

        // ψ₁ = |0⟩⊗|+φ⟩ with half-probability flip of the first qubit: the two
        // branches have orthogonal support, so Tr ρ² = 2·(1/2)² = 1/2.
        let s = FRAC_1_SQRT_2;
        let psi1 = TwoQubitPureState::new(
            [c(s, 0.0), C64::from_polar(s, 0.4), c(0.0, 0.0), c(0.0, 0.0)],
            Basis::Canonical,
        )
        .unwrap();
        let x1 = kron(&pauli::x(), &pauli::identity());
        let rho0 = *psi1.projector().matrix();
        let m = rho0.scale_real(0.5) + rho0.conjugate_by(&x1).scale_real(0.5);
        let rho = DensityMatrix4::new(m).unwrap();
        assert!((purity(&rho) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bloch_vectors() {
        let zero = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(bloch_vector(&zero).r, [0.0, 0.0, 1.0]);
        let mixed = Mat2::identity().scale_real(0.5);
        assert_eq!(bloch_vector(&mixed).r, [0.0, 0.0, 0.0]);
        assert_eq!(bloch_vector(&mixed).purity(), 0.5);
        let plus = Mat2::from_real([[0.5, 0.5], [0.5, 0.5]]);
        let r = bloch_vector(&plus);
        assert!((r.r[0] - 1.0).abs() < 1e-15 && r.r[1].abs() < 1e-15 && r.r[2].abs() < 1e-15);
        assert!((r.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(matches!(
            DensityMatrix4::new(Mat4::identity()),
            Err(Error::Trace { .. })
        ));
        let neg = Mat4::from_real([
            [1.2, 0.0, 0.0, 0.0],
            [0.0, -0.2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(matches!(
            DensityMatrix4::new(neg),
            Err(Error::NotPositive { .. })
        ));
        let mut nh = Matrix::<4>::identity().scale_real(0.25);
        nh.0[0][1] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix4::new(nh),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn state_literal_json() {
        let json = r#"{"amplitudes": [[0.5,0],[0.5,0],[0,0.5],[0.5,0]], "basis": "bell"}"#;
        let psi: TwoQubitPureState = serde_json::from_str(json).unwrap();
        assert_eq!(psi.basis(), Basis::Bell);
        assert_eq!(psi.amplitudes()[2], c(0.0, 0.5));
        let bad = r#"{"amplitudes": [[0.5,0],[0.5,0],[0,0.5],[0.1,0]], "basis": "canonical"}"#;
        assert!(serde_json::from_str::<TwoQubitPureState>(bad).is_err());
        let back: TwoQubitPureState =
            serde_json::from_str(&serde_json::to_string(&psi).unwrap()).unwrap();
        assert_eq!(back, psi);
    }

    fn arb_state() -> impl Strategy<Value = TwoQubitPureState> {
        proptest::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                TwoQubitPureState::from_unnormalized(
                    [c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])],
                    Basis::Canonical,
                )
            })
    }

    proptest! {
        #[test]
        fn basis_change_is_involutive_and_norm_preserving(psi in arb_state()) {
            let bell = psi.change_basis(Basis::Bell);
            prop_assert!((bell.norm_sqr() - 1.0).abs() <= 1e-12);
            let back = bell.change_basis(Basis::Canonical);
            for k in 0..4 {
                prop_assert!((back.amplitudes()[k] - psi.amplitudes()[k]).norm() <= 1e-12);
            }
        }

        #[test]
        fn canonical_params_round_trip(psi in arb_state()) {
            let rebuilt = TwoQubitPureState::from_canonical_params(&psi.canonical_params()).unwrap();
            prop_assert!((rebuilt.fidelity(&psi) - 1.0).abs() <= 1e-12);
        }
    }
}
