//! Value parsers for comma-separated numeric flags.

use std::f64::consts::PI;

use anyhow::{anyhow, bail, Context, Result};
use cartan_metrology::{CanonicalParams, CartanParams, TwoQubitPureState};

fn parse_ratio(s: &str) -> Result<f64> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .with_context(|| format!("bad number {num:?}"))?;
            let den: f64 = den
                .trim()
                .parse()
                .with_context(|| format!("bad number {den:?}"))?;
            if den == 0.0 {
                bail!("zero denominator in {s:?}");
            }
            Ok(num / den)
        }
        None => s
            .trim()
            .parse()
            .with_context(|| format!("bad number {s:?}")),
    }
}

/// Radians, or a multiple of π: `pi`, `-pi/2`, `0.25pi`, `3pi/4`, `1/3pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    let Some((pre, post)) = s.split_once("pi") else {
        return parse_ratio(s);
    };
    let coefficient = match pre.trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => parse_ratio(c.trim_end_matches('*'))?,
    };
    let divisor = match post.trim() {
        "" => 1.0,
        d => {
            let d = d
                .strip_prefix('/')
                .ok_or_else(|| anyhow!("bad angle {s:?}"))?;
            parse_ratio(d)?
        }
    };
    if divisor == 0.0 {
        bail!("zero denominator in {s:?}");
    }
    let v = coefficient * PI / divisor;
    if !v.is_finite() {
        bail!("angle {s:?} is not finite");
    }
    Ok(v)
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_ratio).collect()
}

pub fn parse_angles(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_angle).collect()
}

pub fn parse_lambda(s: &str) -> Result<CartanParams> {
    let v = parse_angles(s)?;
    let [a, b, c] = v[..] else {
        bail!("--lambda takes 3 values, got {}", v.len());
    };
    Ok(CartanParams::new(a, b, c))
}

/// `α,β,γ,δ,φβ,φγ,φδ`; the phases may be omitted.
pub fn parse_state_canonical(s: &str) -> Result<TwoQubitPureState> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 && parts.len() != 7 {
        bail!(
            "--state-canonical takes 4 moduli and optionally 3 phases, got {} values",
            parts.len()
        );
    }
    let m: Vec<f64> = parts[..4]
        .iter()
        .map(|p| parse_ratio(p))
        .collect::<Result<_>>()?;
    let ph: Vec<f64> = match parts.len() {
        7 => parts[4..]
            .iter()
            .map(|p| parse_angle(p))
            .collect::<Result<_>>()?,
        _ => vec![0.0; 3],
    };
    Ok(TwoQubitPureState::from_canonical_params(
        &CanonicalParams {
            alpha: m[0],
            beta: m[1],
            gamma: m[2],
            delta: m[3],
            phi_beta: ph[0],
            phi_gamma: ph[1],
            phi_delta: ph[2],
        },
    )?)
}

/// Bell-basis moduli with optional phases:
/// `b,c,d` | `a,b,c,d` | `b,c,d,φb,φc,φd` | `a,b,c,d,φb,φc,φd`.
/// When `a` is given it must match `√(1 − b² − c² − d²)`.
pub fn parse_state_bell(s: &str) -> Result<TwoQubitPureState> {
    let parts: Vec<&str> = s.split(',').collect();
    let (n_moduli, has_phases) = match parts.len() {
        3 => (3, false),
        4 => (4, false),
        6 => (3, true),
        7 => (4, true),
        n => bail!("--state-bell takes 3, 4, 6 or 7 values, got {n}"),
    };
    let moduli: Vec<f64> = parts[..n_moduli]
        .iter()
        .map(|p| parse_ratio(p))
        .collect::<Result<_>>()?;
    let phases: [f64; 3] = if has_phases {
        let v: Vec<f64> = parts[n_moduli..]
            .iter()
            .map(|p| parse_angle(p))
            .collect::<Result<_>>()?;
        [v[0], v[1], v[2]]
    } else {
        [0.0; 3]
    };
    let (b, c, d) = match moduli[..] {
        [b, c, d] => (b, c, d),
        [a, b, c, d] => {
            if a < 0.0 {
                bail!("Bell modulus a = {a} must be non-negative");
            }
            let deficit = a * a + b * b + c * c + d * d - 1.0;
            if deficit.abs() > 1e-10 {
                bail!("state is not normalized: a² + b² + c² + d² − 1 = {deficit:.3e}");
            }
            (b, c, d)
        }
        _ => unreachable!(),
    };
    Ok(TwoQubitPureState::from_bell_params(b, c, d, phases)?)
}
