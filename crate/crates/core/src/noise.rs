//! Bit-flip and depolarizing noise acting on the probe before the kernel,
//! `ρ_λ = U(λ) ε(ρ₀) U(λ)†`, and precision scans over `(γ, φ)` grids.
//!
//! `Single` scope acts on the leftmost tensor factor (`σ ⊗ I`); `Both`
//! applies the single-qubit channel independently to each qubit.

use std::f64::consts::TAU;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanParams;
use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, Mat2, Mat4};
use crate::metrology::{derivatives_of_evolved, evolve_density, qfim_mixed, Qfim};
use crate::optimal::{make_optimal, OptimalFamilySpec};
use crate::sampling::{csv_error, csv_writer, format_real, parse_real, ScanMetadata};
use crate::states::{DensityMatrix4, TwoQubitPureState};

pub const NOISE_CSV_SCHEMA_VERSION: u32 = 1;
pub const NOISE_CSV_HEADER: [&str; 9] = [
    "class", "family", "scope", "lambda1", "lambda2", "lambda3", "gamma", "phi", "p",
];

macro_rules! labelled_enum {
    ($name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($label => Ok($name::$variant),)+
                    other => Err(Error::Domain(format!(
                        concat!("unknown ", stringify!($name), " {:?}"),
                        other
                    ))),
                }
            }
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelFamily {
    BitFlip,
    Depolarizing,
}

labelled_enum!(ChannelFamily { BitFlip => "bitflip", Depolarizing => "depolarizing" });

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelScope {
    /// Leftmost qubit only.
    Single,
    Both,
}

labelled_enum!(ChannelScope { Single => "single", Both => "both" });

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannel {
    family: ChannelFamily,
    scope: ChannelScope,
    gamma: f64,
}

impl NoiseChannel {
    pub fn new(family: ChannelFamily, scope: ChannelScope, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::out_of_range(
                "gamma",
                gamma,
                "noise strength lies in [0, 1]",
            ));
        }
        Ok(Self {
            family,
            scope,
            gamma,
        })
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    pub fn scope(&self) -> ChannelScope {
        self.scope
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn single_qubit_mixture(&self) -> Vec<(f64, Mat2)> {
        let g = self.gamma;
        let mut terms = vec![(1.0 - g, pauli::identity())];
        match self.family {
            ChannelFamily::BitFlip => terms.push((g, pauli::x())),
            ChannelFamily::Depolarizing => {
                terms.extend(pauli::xyz().into_iter().map(|s| (g / 3.0, s)))
            }
        }
        terms
    }

    /// Unitary mixture `ε(ρ) = Σ w_k V_k ρ V_k†`, zero-weight terms kept.
    pub fn mixture(&self) -> Vec<(f64, Mat4)> {
        let one = self.single_qubit_mixture();
        match self.scope {
            ChannelScope::Single => one
                .into_iter()
                .map(|(w, s)| (w, kron(&s, &pauli::identity())))
                .collect(),
            ChannelScope::Both => one
                .iter()
                .flat_map(|(wa, a)| one.iter().map(move |(wb, b)| (wa * wb, kron(a, b))))
                .collect(),
        }
    }

    /// `K_k = √w_k V_k`.
    pub fn kraus_operators(&self) -> Vec<Mat4> {
        self.mixture()
            .into_iter()
            .map(|(w, v)| v.scale_real(w.sqrt()))
            .collect()
    }
}

pub fn apply_channel(channel: &NoiseChannel, rho0: &DensityMatrix4) -> Result<DensityMatrix4> {
    let out = channel
        .mixture()
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .fold(Mat4::zeros(), |acc, (w, v)| {
            acc + rho0.matrix().conjugate_by(&v).scale_real(w)
        });
    DensityMatrix4::new(out)
}

/// QFIM of `U(λ) ε(|ψ₀⟩⟨ψ₀|) U(λ)†`.
pub fn noisy_qfim(
    psi0: &TwoQubitPureState,
    channel: &NoiseChannel,
    params: &CartanParams,
) -> Result<Qfim> {
    let noisy = apply_channel(channel, &psi0.projector())?;
    let rho = evolve_density(params, &noisy)?;
    let drho = derivatives_of_evolved(rho.matrix());
    qfim_mixed(&rho, &drho)
}

/// `p = Tr Q⁻¹` of the noisy model; `+∞` when `Q` is singular.
pub fn noisy_precision(
    psi0: &TwoQubitPureState,
    channel: &NoiseChannel,
    params: &CartanParams,
) -> Result<f64> {
    Ok(noisy_qfim(psi0, channel, params)?.p)
}

/// The three one-parameter probe classes used in noise scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeClass {
    /// `|0⟩ ⊗ (|0⟩ + e^{iφ}|1⟩)/√2`
    Psi1,
    /// `(|0⟩ + e^{iφ}|1⟩)/√2 ⊗ |0⟩`
    Psi2,
    /// Entangled optimal member with α = 0.3, β = 0.2.
    Psi3,
}

labelled_enum!(ProbeClass { Psi1 => "psi1", Psi2 => "psi2", Psi3 => "psi3" });

impl ProbeClass {
    pub fn state(self, phi: f64) -> TwoQubitPureState {
        let spec = match self {
            ProbeClass::Psi1 => OptimalFamilySpec::FactorizedSep { index: 1, phi },
            ProbeClass::Psi2 => OptimalFamilySpec::FactorizedSep { index: 2, phi },
            ProbeClass::Psi3 => OptimalFamilySpec::Entangled {
                alpha: 0.3,
                beta: 0.2,
                plus_third: true,
                plus_fourth: true,
                phi,
            },
        };
        make_optimal(&spec).expect("class parameters are in range")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScanGrid {
    pub gamma_points: usize,
    pub phi_points: usize,
    pub class: ProbeClass,
}

impl NoiseScanGrid {
    pub const DEFAULT_GAMMA_POINTS: usize = 101;
    pub const DEFAULT_PHI_POINTS: usize = 64;

    pub fn new(gamma_points: usize, phi_points: usize, class: ProbeClass) -> Result<Self> {
        for (name, n) in [("gamma_points", gamma_points), ("phi_points", phi_points)] {
            if n < 2 {
                return Err(Error::out_of_range(
                    name,
                    n as f64,
                    "grid needs at least 2 points",
                ));
            }
        }
        Ok(Self {
            gamma_points,
            phi_points,
            class,
        })
    }

    pub fn with_defaults(class: ProbeClass) -> Self {
        Self {
            gamma_points: Self::DEFAULT_GAMMA_POINTS,
            phi_points: Self::DEFAULT_PHI_POINTS,
            class,
        }
    }

    /// `γ_i = i/(n − 1)`, both ends included.
    pub fn gammas(&self) -> Vec<f64> {
        let last = (self.gamma_points - 1) as f64;
        (0..self.gamma_points).map(|i| i as f64 / last).collect()
    }

    /// `φ_j = 2πj/m` on `[0, 2π)`.
    pub fn phis(&self) -> Vec<f64> {
        let m = self.phi_points as f64;
        (0..self.phi_points).map(|j| TAU * j as f64 / m).collect()
    }
}

/// Precision over a `(γ, φ)` grid; `p[i][j]` is at `(gammas[i], phis[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScan {
    pub grid: NoiseScanGrid,
    pub family: ChannelFamily,
    pub scope: ChannelScope,
    pub lambda: CartanParams,
    pub gammas: Vec<f64>,
    pub phis: Vec<f64>,
    pub p: Vec<Vec<f64>>,
}

pub fn noise_scan(
    grid: &NoiseScanGrid,
    family: ChannelFamily,
    scope: ChannelScope,
    params: &CartanParams,
) -> Result<NoiseScan> {
    let grid = NoiseScanGrid::new(grid.gamma_points, grid.phi_points, grid.class)?;
    let gammas = grid.gammas();
    let phis = grid.phis();
    let probes: Vec<_> = phis.iter().map(|&phi| grid.class.state(phi)).collect();
    let p = gammas
        .par_iter()
        .map(|&gamma| {
            let channel = NoiseChannel::new(family, scope, gamma)?;
            probes
                .iter()
                .map(|psi| noisy_precision(psi, &channel, params))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NoiseScan {
        grid,
        family,
        scope,
        lambda: *params,
        gammas,
        phis,
        p,
    })
}

impl NoiseScan {
    pub fn metadata(&self) -> ScanMetadata {
        let mut meta = ScanMetadata::new(vec![
            ("class".into(), self.grid.class.to_string()),
            ("family".into(), self.family.to_string()),
            ("scope".into(), self.scope.to_string()),
            ("lambda".into(), self.lambda.0.map(format_real).join(",")),
            ("gamma_points".into(), self.grid.gamma_points.to_string()),
            ("gamma_range".into(), "0,1".into()),
            ("phi_points".into(), self.grid.phi_points.to_string()),
            ("phi_range".into(), "0,2pi".into()),
        ]);
        meta.schema_version = NOISE_CSV_SCHEMA_VERSION;
        meta
    }

    /// Rows in `(γ index, φ index)` order, preceded by `meta` (usually
    /// [`NoiseScan::metadata`], possibly extended).
    pub fn write_csv<W: Write>(&self, meta: &ScanMetadata, mut out: W) -> Result<()> {
        meta.write(&mut out)
            .map_err(|e| Error::Domain(format!("write error: {e}")))?;
        let mut w = csv_writer(out);
        w.write_record(NOISE_CSV_HEADER).map_err(csv_error)?;
        let [l1, l2, l3] = self.lambda.0.map(format_real);
        for (i, gamma) in self.gammas.iter().enumerate() {
            for (j, phi) in self.phis.iter().enumerate() {
                w.write_record([
                    self.grid.class.as_str(),
                    self.family.as_str(),
                    self.scope.as_str(),
                    &l1,
                    &l2,
                    &l3,
                    &format_real(*gamma),
                    &format_real(*phi),
                    &format_real(self.p[i][j]),
                ])
                .map_err(csv_error)?;
            }
        }
        w.flush()
            .map_err(|e| Error::Domain(format!("write error: {e}")))
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let (meta, body) = ScanMetadata::read(input)?;
        let count = |key: &str| -> Result<usize> {
            meta.get(key)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Domain(format!("metadata {key} missing or malformed")))
        };
        let (ng, nphi) = (count("gamma_points")?, count("phi_points")?);
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let header = reader.headers().map_err(csv_error)?.clone();
        if header.iter().ne(NOISE_CSV_HEADER) {
            return Err(Error::Domain(format!(
                "unexpected header, expected {}",
                NOISE_CSV_HEADER.join(",")
            )));
        }
        let rows = reader
            .records()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(csv_error)?;
        if rows.len() != ng * nphi {
            return Err(Error::Domain(format!(
                "expected {} rows for a {ng}×{nphi} grid, found {}",
                ng * nphi,
                rows.len()
            )));
        }
        let first = rows
            .first()
            .ok_or_else(|| Error::Domain("empty scan".into()))?;
        let class: ProbeClass = first[0].parse()?;
        let family: ChannelFamily = first[1].parse()?;
        let scope: ChannelScope = first[2].parse()?;
        let lambda = CartanParams::new(
            parse_real(&first[3], "lambda1")?,
            parse_real(&first[4], "lambda2")?,
            parse_real(&first[5], "lambda3")?,
        );
        let mut gammas = Vec::with_capacity(ng);
        let mut phis = Vec::with_capacity(nphi);
        let mut p = vec![Vec::with_capacity(nphi); ng];
        for (k, row) in rows.iter().enumerate() {
            let (i, j) = (k / nphi, k % nphi);
            if j == 0 {
                gammas.push(parse_real(&row[6], "gamma")?);
            }
            if i == 0 {
                phis.push(parse_real(&row[7], "phi")?);
            }
            p[i].push(parse_real(&row[8], "p")?);
        }
        Ok(NoiseScan {
            grid: NoiseScanGrid::new(ng, nphi, class)?,
            family,
            scope,
            lambda,
            gammas,
            phis,
            p,
        })
    }
}
