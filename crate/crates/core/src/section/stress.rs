use serde::Serialize;

use super::constitutive::{layer_fields, nsr_transverse_field};
use super::{ClosureModel, GeneralizedState, Linear, Section};
use crate::error::Result;

pub const DEFAULT_SAMPLES_PER_LAYER: usize = 11;

/// Layerwise-linear stresses of one layer, `T(z) = c0 + c1·z` in Pa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerStress {
    pub z0: f64,
    pub z1: f64,
    pub t11: Linear,
    pub t22: Linear,
    /// Transverse strain the closure assigned to this layer.
    pub s22: Linear,
    /// Field along the poling axis, V/m.
    pub e3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressSample {
    pub layer: usize,
    pub z: f64,
    pub t11: f64,
    pub t22: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressProfile {
    pub closure: ClosureModel,
    pub layers: Vec<LayerStress>,
    /// ∫T22 dz, N/m.
    pub n2: f64,
    /// ∫z·T22 dz, N.
    pub m2: f64,
}

impl StressProfile {
    /// Evenly spaced samples, endpoints included, `per_layer` points per layer.
    pub fn samples(&self, per_layer: usize) -> Vec<StressSample> {
        let per_layer = per_layer.max(2);
        let mut out = Vec::with_capacity(per_layer * self.layers.len());
        for (k, l) in self.layers.iter().enumerate() {
            for i in 0..per_layer {
                let z = if i + 1 == per_layer {
                    l.z1
                } else {
                    l.z0 + (l.z1 - l.z0) * i as f64 / (per_layer - 1) as f64
                };
                out.push(StressSample {
                    layer: k,
                    z,
                    t11: l.t11.at(z),
                    t22: l.t22.at(z),
                });
            }
        }
        out
    }

    pub fn max_abs_t22(&self) -> f64 {
        self.layers
            .iter()
            .flat_map(|l| [l.t22.at(l.z0).abs(), l.t22.at(l.z1).abs()])
            .fold(0.0, f64::max)
    }

    pub fn thickness(&self) -> f64 {
        match (self.layers.first(), self.layers.last()) {
            (Some(a), Some(b)) => b.z1 - a.z0,
            _ => 0.0,
        }
    }
}

/// Exact integrals of T22 and z·T22 over the thickness (per unit width).
pub fn transverse_resultants(profile: &StressProfile) -> (f64, f64) {
    profile.layers.iter().fold((0.0, 0.0), |(n2, m2), l| {
        let s = super::Span { z0: l.z0, z1: l.z1 };
        (n2 + l.t22.integral(&s), m2 + l.t22.moment(&s))
    })
}

/// Stresses implied by a closure at a given generalized state.
pub fn recover_stress_profile(
    section: &Section,
    closure: ClosureModel,
    state: &GeneralizedState,
) -> Result<StressProfile> {
    state.check(section)?;
    let field = match closure {
        ClosureModel::NSR => Some(nsr_transverse_field(section)?),
        _ => None,
    };
    let x = state.as_vector();
    let layers = layer_fields(section, closure, field.as_ref(), &x)
        .into_iter()
        .enumerate()
        .map(|(k, f)| {
            let s = section.span(k);
            LayerStress {
                z0: s.z0,
                z1: s.z1,
                t11: f.t11,
                t22: f.t22,
                s22: f.s22,
                e3: f.e3,
            }
        })
        .collect();
    let mut profile = StressProfile {
        closure,
        layers,
        n2: 0.0,
        m2: 0.0,
    };
    let (n2, m2) = transverse_resultants(&profile);
    profile.n2 = n2;
    profile.m2 = m2;
    Ok(profile)
}
