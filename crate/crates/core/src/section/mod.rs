//! Layered cross-sections and their reduction to a coupled 1D law.
//!
//! Conventions, used everywhere in this crate:
//!
//! * `z` is the thickness coordinate, zero at the geometric mid-height of the
//!   stack, layers listed bottom to top.
//! * Axial strain is `S11(z) = eps + z·kappa`; positive `kappa` bends the
//!   beam concave toward +z. `N = b·∫T11 dz`, `M = b·∫z·T11 dz`.
//! * Each electroded layer sees the voltage `V` of its terminal applied
//!   top-minus-bottom, so the field along its poling axis is
//!   `E3 = −poling·V/h`. Material constants are always in the poling frame.
//! * The charge of terminal `t` per unit length is `q_t = b·Σ poling·mean(D3)`
//!   over the layers wired to it. With this sign the full matrix mapping
//!   `(eps, kappa, V)` to `(N, M, q)` is the symmetric Hessian of the section
//!   enthalpy, `[[Kmm, Kme], [Kmeᵀ, −Cq]]`.

mod compare;
mod constitutive;
mod oracle;
mod stress;

pub use compare::{compare_closures, ComparisonRow, ComparisonTable};
pub use constitutive::{
    capacitance_per_length, nsr_transverse_field, reduce_section, CapacitanceCondition,
    ClosureModel, SectionConstitutive, TransverseField,
};
pub use oracle::{discretized_oracle, OracleResult};
pub use stress::{
    recover_stress_profile, transverse_resultants, LayerStress, StressProfile, StressSample,
    DEFAULT_SAMPLES_PER_LAYER,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{MaterialDb, PlaneMaterial};

/// Orientation of a layer's polarization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Poling {
    #[serde(rename = "+z")]
    Up,
    #[serde(rename = "-z")]
    Down,
    #[serde(rename = "none")]
    None,
}

impl Poling {
    pub fn sign(self) -> f64 {
        match self {
            Poling::Up => 1.0,
            Poling::Down => -1.0,
            Poling::None => 0.0,
        }
    }
}

/// How electroded layers are gathered into terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wiring {
    /// All electroded layers share terminal 0.
    Parallel,
    /// One terminal per electroded layer, numbered bottom to top.
    Independent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub label: String,
    pub material: PlaneMaterial,
    /// m
    pub thickness: f64,
    pub poling: Poling,
    pub electroded: bool,
}

impl Layer {
    pub fn new(
        label: impl Into<String>,
        material: PlaneMaterial,
        thickness: f64,
        poling: Poling,
        electroded: bool,
    ) -> Self {
        Self {
            label: label.into(),
            material,
            thickness,
            poling,
            electroded,
        }
    }

    fn check(&self, index: usize) -> Result<()> {
        let fail = |reason: &str| Error::InvalidLayer {
            index,
            reason: reason.to_string(),
        };
        if !(self.thickness > 0.0 && self.thickness.is_finite()) {
            return Err(fail("thickness must be positive"));
        }
        self.material.validate().map_err(|e| fail(&e.to_string()))?;
        // A poled layer with zero in-plane coupling is a plain dielectric and
        // is accepted; an unpoled layer cannot carry coupling constants.
        if self.poling == Poling::None && self.material.is_piezoelectric() {
            return Err(fail("piezoelectric material needs a poling direction"));
        }
        if self.electroded && self.poling == Poling::None {
            return Err(fail("electroded elastic layer"));
        }
        Ok(())
    }
}

/// A validated stack of layers with resolved geometry and terminals.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    layers: Vec<Layer>,
    width: f64,
    z: Vec<f64>,
    wiring: Wiring,
    terminal_of: Vec<Option<usize>>,
    terminals: usize,
}

impl Section {
    pub fn new(width: f64, wiring: Wiring, layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::NoLayers);
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidSection("width must be positive".into()));
        }
        for (i, layer) in layers.iter().enumerate() {
            layer.check(i)?;
        }

        let total: f64 = layers.iter().map(|l| l.thickness).sum();
        let half = 0.5 * total;
        let mut z = Vec::with_capacity(layers.len() + 1);
        let mut acc = 0.0;
        z.push(-half);
        for layer in &layers {
            acc += layer.thickness;
            z.push(acc - half);
        }
        *z.last_mut().unwrap() = half;

        let mut terminal_of = Vec::with_capacity(layers.len());
        let mut next = 0;
        for layer in &layers {
            terminal_of.push(if layer.electroded {
                let t = match wiring {
                    Wiring::Parallel => 0,
                    Wiring::Independent => next,
                };
                next += 1;
                Some(t)
            } else {
                None
            });
        }
        let terminals = match wiring {
            Wiring::Parallel => usize::from(next > 0),
            Wiring::Independent => next,
        };

        Ok(Self {
            layers,
            width,
            z,
            wiring,
            terminal_of,
            terminals,
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// m
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Layer boundary coordinates, bottom to top, m.
    pub fn interfaces(&self) -> &[f64] {
        &self.z
    }

    pub fn wiring(&self) -> Wiring {
        self.wiring
    }

    pub fn thickness(&self) -> f64 {
        self.z[self.z.len() - 1] - self.z[0]
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals
    }

    pub fn terminal_of(&self, layer: usize) -> Option<usize> {
        self.terminal_of[layer]
    }

    /// Number of generalized coordinates: eps, kappa and one voltage per terminal.
    pub fn dof(&self) -> usize {
        2 + self.terminals
    }

    pub(crate) fn span(&self, layer: usize) -> Span {
        Span {
            z0: self.z[layer],
            z1: self.z[layer + 1],
        }
    }

    /// kg/m
    pub fn mass_per_length(&self) -> f64 {
        self.width
            * self
                .layers
                .iter()
                .map(|l| l.material.density * l.thickness)
                .sum::<f64>()
    }

    /// Same section with a different width.
    pub fn with_width(&self, width: f64) -> Result<Self> {
        Self::new(width, self.wiring, self.layers.clone())
    }

    /// Field along the poling axis of `layer` per unit generalized coordinate.
    pub(crate) fn field_row(&self, layer: usize) -> Option<(usize, f64)> {
        let l = &self.layers[layer];
        self.terminal_of[layer].map(|t| (2 + t, -l.poling.sign() / l.thickness))
    }
}

/// A closed interval of the thickness coordinate with its exact moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Span {
    pub z0: f64,
    pub z1: f64,
}

impl Span {
    pub fn len(&self) -> f64 {
        self.z1 - self.z0
    }
    pub fn mid(&self) -> f64 {
        0.5 * (self.z0 + self.z1)
    }
    /// ∫ z dz
    pub fn first(&self) -> f64 {
        self.len() * self.mid()
    }
    /// ∫ z² dz
    pub fn second(&self) -> f64 {
        let h = self.len();
        let c = self.mid();
        h * (c * c + h * h / 12.0)
    }
}

/// `c0 + c1·z`
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Linear {
    pub c0: f64,
    pub c1: f64,
}

impl Linear {
    pub const ZERO: Linear = Linear { c0: 0.0, c1: 0.0 };

    pub fn new(c0: f64, c1: f64) -> Self {
        Self { c0, c1 }
    }
    pub fn constant(c0: f64) -> Self {
        Self { c0, c1: 0.0 }
    }
    pub fn at(&self, z: f64) -> f64 {
        self.c0 + self.c1 * z
    }
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.c0 * s, self.c1 * s)
    }
    pub fn add(self, o: Self) -> Self {
        Self::new(self.c0 + o.c0, self.c1 + o.c1)
    }
    pub(crate) fn integral(&self, s: &Span) -> f64 {
        self.c0 * s.len() + self.c1 * s.first()
    }
    pub(crate) fn moment(&self, s: &Span) -> f64 {
        self.c0 * s.first() + self.c1 * s.second()
    }
}

/// Kinematic descriptors of the 1D model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeneralizedState {
    pub eps: f64,
    /// 1/m
    pub kappa: f64,
    /// One voltage per terminal, V.
    pub voltages: Vec<f64>,
}

impl GeneralizedState {
    pub fn new(eps: f64, kappa: f64, voltages: Vec<f64>) -> Self {
        Self {
            eps,
            kappa,
            voltages,
        }
    }

    pub fn mechanical(eps: f64, kappa: f64, terminals: usize) -> Self {
        Self::new(eps, kappa, vec![0.0; terminals])
    }

    pub fn as_vector(&self) -> Vec<f64> {
        let mut x = vec![self.eps, self.kappa];
        x.extend_from_slice(&self.voltages);
        x
    }

    pub(crate) fn check(&self, section: &Section) -> Result<()> {
        if self.voltages.len() != section.terminal_count() {
            return Err(Error::VoltageCount {
                expected: section.terminal_count(),
                got: self.voltages.len(),
            });
        }
        Ok(())
    }
}

/// Layup file contents (lengths in mm, as written on disk).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayupSpec {
    pub width_mm: f64,
    pub wiring: Wiring,
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    pub material: String,
    pub thickness_mm: f64,
    pub poling: Poling,
    pub electroded: bool,
}

impl LayupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedLayup(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedLayup(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Resolves materials and builds the section geometry and terminal map.
pub fn build_section(spec: &LayupSpec, db: &MaterialDb) -> Result<Section> {
    let layers = spec
        .layers
        .iter()
        .map(|l| {
            Ok(Layer::new(
                l.material.clone(),
                db.plane(&l.material)?,
                l.thickness_mm * 1e-3,
                l.poling,
                l.electroded,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Section::new(spec.width_mm * 1e-3, spec.wiring, layers)
}
