//! Optimal probe families, the `R_x` block-rotation construction, and the
//! precision–sloppiness frontier together with the states that sit on it.
//!
//! All families here reach the global optimum `p = 3/4`, `1/s = 64` except
//! [`OptimalFamilySpec::SubOptimalAtP`], which walks the frontier at a
//! prescribed precision.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{Basis, TwoQubitPureState};

/// Slack on the `[0, 1/√2]` range check for α and β.
const AMPLITUDE_SLACK: f64 = 1e-12;

/// Which optimal (or frontier) family to build, with its parameters.
///
/// JSON form is internally tagged, e.g.
/// `{"family": "entangled", "alpha": 0.3, "beta": 0.2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum OptimalFamilySpec {
    /// One of the four product states; `index` is 1..=4.
    FactorizedSep {
        index: u8,
        #[serde(default)]
        phi: f64,
    },
    /// `(α, β e^{iφ}, ±i√(½−β²) e^{iφ}, ±i√(½−α²))` in the computational basis.
    /// The two signs are independent.
    Entangled {
        alpha: f64,
        beta: f64,
        #[serde(default = "plus")]
        plus_third: bool,
        #[serde(default = "plus")]
        plus_fourth: bool,
        #[serde(default)]
        phi: f64,
    },
    /// `(1, e^{iφb}, e^{iφc}, e^{iφd})/2` in the Bell basis.
    BellUniform {
        #[serde(default)]
        phases: [f64; 3],
    },
    /// Frontier state at precision `p`, see [`suboptimal_state`].
    #[serde(rename = "suboptimal")]
    SubOptimalAtP {
        p: f64,
        #[serde(default = "first")]
        position: u8,
        #[serde(default)]
        phases: [f64; 3],
    },
}

fn plus() -> bool {
    true
}

fn first() -> u8 {
    1
}

pub fn make_optimal(spec: &OptimalFamilySpec) -> Result<TwoQubitPureState> {
    match *spec {
        OptimalFamilySpec::FactorizedSep { index, phi } => factorized(index, phi),
        OptimalFamilySpec::Entangled {
            alpha,
            beta,
            plus_third,
            plus_fourth,
            phi,
        } => entangled(alpha, beta, plus_third, plus_fourth, phi),
        OptimalFamilySpec::BellUniform { phases } => {
            TwoQubitPureState::from_bell_params(0.5, 0.5, 0.5, phases)
        }
        OptimalFamilySpec::SubOptimalAtP {
            p,
            position,
            phases,
        } => suboptimal_state(p, position, phases),
    }
}

fn factorized(index: u8, phi: f64) -> Result<TwoQubitPureState> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let e = C64::from_polar(FRAC_1_SQRT_2, phi);
    let z = C64::new(0.0, 0.0);
    let amps = match index {
        1 => [h, e, z, z],
        2 => [h, z, e, z],
        3 => [z, e, z, h],
        4 => [z, z, e, h],
        _ => {
            return Err(Error::out_of_range(
                "index",
                index as f64,
                "factorized family has members 1..=4",
            ))
        }
    };
    TwoQubitPureState::new(amps, Basis::Canonical)
}

fn check_half_amplitude(name: &'static str, v: f64) -> Result<f64> {
    if !(0.0..=FRAC_1_SQRT_2 + AMPLITUDE_SLACK).contains(&v) {
        return Err(Error::out_of_range(name, v, "must lie in [0, 1/√2]"));
    }
    Ok((0.5 - v * v).max(0.0).sqrt())
}

fn entangled(
    alpha: f64,
    beta: f64,
    plus_third: bool,
    plus_fourth: bool,
    phi: f64,
) -> Result<TwoQubitPureState> {
    let rest_alpha = check_half_amplitude("alpha", alpha)?;
    let rest_beta = check_half_amplitude("beta", beta)?;
    let sign = |plus: bool| if plus { 1.0 } else { -1.0 };
    let phase = C64::from_polar(1.0, phi);
    let i = C64::new(0.0, 1.0);
    TwoQubitPureState::new(
        [
            C64::new(alpha, 0.0),
            phase * beta,
            i * phase * (sign(plus_third) * rest_beta),
            i * sign(plus_fourth) * rest_alpha,
        ],
        Basis::Canonical,
    )
}

/// Interleaving of the two rotated block states in [`rx_generate`].
///
/// The `(|00⟩, |11⟩)` block carries weight `1/√2` and the `(|01⟩, |10⟩)`
/// block carries `e^{iφ}/√2` with `φ = relative_phase`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RxPairing {
    pub relative_phase: f64,
}

/// Builds an optimal probe by rotating `|0⟩` about `x` inside each invariant
/// block of the kernel:
/// `(cos θa |00⟩ − i sin θa |11⟩ + e^{iφ}(cos θb |01⟩ − i sin θb |10⟩))/√2`.
pub fn rx_generate(theta_a: f64, theta_b: f64, pairing: RxPairing) -> TwoQubitPureState {
    let minus_i = C64::new(0.0, -1.0);
    let phase = C64::from_polar(FRAC_1_SQRT_2, pairing.relative_phase);
    let amps = [
        C64::new(FRAC_1_SQRT_2 * theta_a.cos(), 0.0),
        phase * theta_b.cos(),
        phase * minus_i * theta_b.sin(),
        minus_i * (FRAC_1_SQRT_2 * theta_a.sin()),
    ];
    TwoQubitPureState::from_unnormalized(amps, Basis::Canonical)
}

fn check_precision(p: f64) -> Result<()> {
    if p.is_nan() || p < 0.75 {
        return Err(Error::out_of_range("p", p, "precision is at least 3/4"));
    }
    Ok(())
}

fn frontier_radical(p: f64) -> f64 {
    ((p - 0.75) * (p - 0.1875)).sqrt()
}

/// Largest `1/s` reachable at precision `p`.
pub fn frontier(p: f64) -> Result<f64> {
    check_precision(p)?;
    if p.is_infinite() {
        return Ok(0.0);
    }
    let r = frontier_radical(p);
    let lo = 8.0 * p - 8.0 * r - 3.0;
    let hi = 8.0 * p + 8.0 * r + 3.0;
    Ok(lo * hi.powi(3) / (108.0 * p.powi(4)))
}

/// `(κ₁, κ₂)`: the repeated and the distinguished Bell modulus of the
/// frontier state at precision `p`. They satisfy `3κ₁² + κ₂² = 1`.
pub fn kappas(p: f64) -> Result<(f64, f64)> {
    check_precision(p)?;
    let r = frontier_radical(p);
    let k1 = 0.25 * ((8.0 * r + 8.0 * p + 3.0) / (3.0 * p)).sqrt();
    let k2 = 0.25 * ((8.0 * p - 8.0 * r - 3.0).max(0.0) / p).sqrt();
    Ok((k1, k2))
}

/// Frontier state in the Bell basis. With `position = 1` it is
/// `(κ₂, κ₁ e^{iφb}, κ₁ e^{iφc}, κ₁ e^{iφd})`; other positions move `κ₂`.
/// Phases always apply to components 2..=4.
pub fn suboptimal_state(p: f64, position: u8, phases: [f64; 3]) -> Result<TwoQubitPureState> {
    if !(1..=4).contains(&position) {
        return Err(Error::out_of_range(
            "position",
            position as f64,
            "κ₂ position is one of 1..=4",
        ));
    }
    let (k1, k2) = kappas(p)?;
    let mut amps = [C64::new(0.0, 0.0); 4];
    for (k, amp) in amps.iter_mut().enumerate() {
        let modulus = if k + 1 == position as usize { k2 } else { k1 };
        let phase = if k == 0 { 0.0 } else { phases[k - 1] };
        *amp = C64::from_polar(modulus, phase);
    }
    TwoQubitPureState::new(amps, Basis::Bell)
}

/// Squared fourth Bell modulus `d²` consistent with `(b, c)` at precision `p`.
///
/// `a²` and `d²` are the two roots of `x² − m x + m/K = 0` with
/// `m = 1 − b² − c²` and `K = 64p/3 − 1/b² − 1/c²`; the smaller one is returned.
pub fn fourth_modulus_sqr(b: f64, c: f64, p: f64) -> Result<f64> {
    let (m, k) = fixed_p_terms(b, c, p)?;
    let disc = m * m - 4.0 * m / k;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "no real d for b = {b}, c = {c}, p = {p}: discriminant {disc:.3e} < 0"
        )));
    }
    Ok(0.5 * (m - disc.sqrt()))
}

fn fixed_p_terms(b: f64, c: f64, p: f64) -> Result<(f64, f64)> {
    check_precision(p)?;
    for (name, v) in [("b", b), ("c", c)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::out_of_range(name, v, "must lie in (0, 1)"));
        }
    }
    let m = 1.0 - b * b - c * c;
    if m <= 0.0 {
        return Err(Error::out_of_range("1 − b² − c²", m, "must be positive"));
    }
    let denom = b * b * (64.0 * c * c * p - 3.0) - 3.0 * c * c;
    if denom <= 0.0 {
        return Err(Error::out_of_range(
            "b²(64c²p − 3) − 3c²",
            denom,
            "must be positive",
        ));
    }
    Ok((m, denom / (3.0 * b * b * c * c)))
}

/// `1/s` of the Bell-basis probe with moduli `b, c` and the fourth modulus
/// fixed by requiring precision `p`:
/// `49152 b⁴c⁴(1 − b² − c²) / (b²(64c²p − 3) − 3c²)`.
pub fn det_at_fixed_p(b: f64, c: f64, p: f64) -> Result<f64> {
    fourth_modulus_sqr(b, c, p)?;
    let m = 1.0 - b * b - c * c;
    let denom = b * b * (64.0 * c * c * p - 3.0) - 3.0 * c * c;
    Ok(49152.0 * (b * c).powi(4) * m / denom)
}
