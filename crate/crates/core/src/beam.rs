//! Beam-level quantities built on a section's coupled law: free actuation,
//! short-circuit sensing and Euler-Bernoulli bending modes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::section::{
    reduce_section, ClosureModel, GeneralizedState, Section, SectionConstitutive,
};

/// Cantilever roots of `1 + cos λ·cosh λ = 0`; higher modes use `(n − ½)π`.
const CANTILEVER_ROOTS: [f64; 3] = [1.87510407, 4.69409113, 7.85475744];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Cantilever,
    SimplySupported,
}

impl Boundary {
    /// Dimensionless eigenvalue `λ_n` of mode `n` (1-based).
    pub fn eigenvalue(self, mode: usize) -> f64 {
        debug_assert!(mode >= 1);
        match self {
            Boundary::Cantilever => CANTILEVER_ROOTS
                .get(mode - 1)
                .copied()
                .unwrap_or((mode as f64 - 0.5) * PI),
            Boundary::SimplySupported => mode as f64 * PI,
        }
    }
}

impl FromStr for Boundary {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cantilever" => Ok(Boundary::Cantilever),
            "simply-supported" | "ss" => Ok(Boundary::SimplySupported),
            _ => Err(format!(
                "unknown boundary '{s}' (expected cantilever or simply-supported)"
            )),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Cantilever => "cantilever",
            Boundary::SimplySupported => "simply-supported",
        })
    }
}

/// Electrical condition of every terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Circuit {
    /// V = 0
    Short,
    /// q = 0
    Open,
}

impl FromStr for Circuit {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "short" => Ok(Circuit::Short),
            "open" => Ok(Circuit::Open),
            _ => Err(format!("unknown circuit '{s}' (expected short or open)")),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Circuit::Short => "short",
            Circuit::Open => "open",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beam {
    pub constitutive: SectionConstitutive,
    /// kg/m
    pub mass_per_length: f64,
    /// m
    pub length: f64,
    pub boundary: Boundary,
}

impl Beam {
    pub fn new(
        constitutive: SectionConstitutive,
        mass_per_length: f64,
        length: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        if !(mass_per_length > 0.0 && mass_per_length.is_finite()) {
            return Err(Error::InvalidBeam(
                "mass per length must be positive".into(),
            ));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidBeam("length must be positive".into()));
        }
        Ok(Self {
            constitutive,
            mass_per_length,
            length,
            boundary,
        })
    }

    pub fn from_section(
        section: &Section,
        closure: ClosureModel,
        length: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        Self::new(
            reduce_section(section, closure)?,
            section.mass_per_length(),
            length,
            boundary,
        )
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(
            self.constitutive.clone(),
            self.mass_per_length,
            length,
            self.boundary,
        )
    }
}

/// Strains of an unloaded section (N = M = 0) under the given voltages.
pub fn free_actuation_state(k: &SectionConstitutive, voltages: &[f64]) -> Result<GeneralizedState> {
    if voltages.len() != k.terminals() {
        return Err(Error::VoltageCount {
            expected: k.terminals(),
            got: voltages.len(),
        });
    }
    let kme = k.kme();
    let load = voltages
        .iter()
        .enumerate()
        .fold(Vector2::zeros(), |acc, (t, v)| {
            acc + Vector2::new(kme[(0, t)], kme[(1, t)]) * *v
        });
    let x = k
        .kmm()
        .lu()
        .solve(&(-load))
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or(Error::DegenerateSection)?;
    Ok(GeneralizedState::new(x[0], x[1], voltages.to_vec()))
}

/// Tip deflection of a voltage-actuated cantilever, `kappa·L²/2`, m.
pub fn cantilever_tip_deflection(beam: &Beam, voltages: &[f64]) -> Result<f64> {
    if beam.boundary != Boundary::Cantilever {
        return Err(Error::InvalidBeam(format!(
            "tip deflection needs a cantilever, got {}",
            beam.boundary
        )));
    }
    let state = free_actuation_state(&beam.constitutive, voltages)?;
    Ok(state.kappa * beam.length * beam.length / 2.0)
}

/// Short-circuit charge per unit length at each terminal for imposed strains, C/m.
pub fn sensor_charge(beam: &Beam, eps: f64, kappa: f64) -> Vec<f64> {
    let sensing = beam.constitutive.sensing();
    (0..sensing.nrows())
        .map(|t| sensing[(t, 0)] * eps + sensing[(t, 1)] * kappa)
        .collect()
}

/// Mechanical stiffness seen by the beam under a circuit condition.
pub fn mechanical_stiffness(k: &SectionConstitutive, circuit: Circuit) -> Result<Matrix2<f64>> {
    let kmm = k.kmm();
    if circuit == Circuit::Short || k.terminals() == 0 {
        return Ok(kmm);
    }
    let kme: DMatrix<f64> = k.kme();
    let cq_inv = k.cq().try_inverse().ok_or(Error::DegenerateSection)?;
    let extra = &kme * cq_inv * kme.transpose();
    Ok(kmm + Matrix2::from_iterator(extra.iter().copied()))
}

/// Bending stiffness with the axial force condensed out (N = 0), N·m².
pub fn effective_bending_stiffness(k: &SectionConstitutive, circuit: Circuit) -> Result<f64> {
    let m = mechanical_stiffness(k, circuit)?;
    if !(m[(0, 0)] > 0.0) {
        return Err(Error::DegenerateSection);
    }
    Ok(m[(1, 1)] - m[(0, 1)] * m[(1, 0)] / m[(0, 0)])
}

/// First `modes` bending frequencies, Hz.
pub fn modal_frequencies(beam: &Beam, circuit: Circuit, modes: usize) -> Result<Vec<f64>> {
    let d = effective_bending_stiffness(&beam.constitutive, circuit)?;
    let base = (d / (beam.mass_per_length * beam.length.powi(4))).sqrt() / (2.0 * PI);
    Ok((1..=modes)
        .map(|n| beam.boundary.eigenvalue(n).powi(2) * base)
        .collect())
}

/// `(f_open² − f_short²)/f_short²` for a 1-based mode number.
///
/// Every mode of a uniform beam has `f² ∝ D_eff`, so this is evaluated as
/// `(D_open − D_short)/D_short`, which avoids squaring the frequencies.
pub fn coupling_factor(beam: &Beam, mode: usize) -> Result<f64> {
    if mode == 0 {
        return Err(Error::NoSuchMode { index: 0, count: 0 });
    }
    let short = effective_bending_stiffness(&beam.constitutive, Circuit::Short)?;
    let open = effective_bending_stiffness(&beam.constitutive, Circuit::Open)?;
    Ok(((open - short) / short).max(0.0))
}
