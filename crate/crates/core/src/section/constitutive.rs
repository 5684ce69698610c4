use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::{GeneralizedState, Linear, Section};
use crate::error::{Error, Result};

/// Hypothesis closing the transverse (22) fields left open by the kinematics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClosureModel {
    /// Null transverse deformation: S22 ≡ 0.
    ND,
    /// Null transverse stress: T22 ≡ 0 pointwise.
    NS,
    /// Null transverse stress resultants: ∫T22 = ∫z·T22 = 0.
    NSR,
}

impl ClosureModel {
    pub const ALL: [ClosureModel; 3] = [ClosureModel::ND, ClosureModel::NS, ClosureModel::NSR];

    pub fn as_str(self) -> &'static str {
        match self {
            ClosureModel::ND => "ND",
            ClosureModel::NS => "NS",
            ClosureModel::NSR => "NSR",
        }
    }
}

impl fmt::Display for ClosureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClosureModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nd" => Ok(ClosureModel::ND),
            "ns" => Ok(ClosureModel::NS),
            "nsr" => Ok(ClosureModel::NSR),
            _ => Err(format!("unknown model '{s}' (expected nd, ns or nsr)")),
        }
    }
}

/// Section-wide transverse strain `S22(z) = a + b·z` of the NSR closure,
/// one `(a, b)` pair per unit generalized coordinate (eps, kappa, V...).
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseField {
    pub rows: Vec<[f64; 2]>,
}

impl TransverseField {
    pub fn at(&self, x: &[f64]) -> Linear {
        let (a, b) = self
            .rows
            .iter()
            .zip(x)
            .fold((0.0, 0.0), |(a, b), (r, xi)| (a + r[0] * xi, b + r[1] * xi));
        Linear::new(a, b)
    }
}

/// Solves the two resultant conditions ∫T22 dz = 0, ∫z·T22 dz = 0 for the
/// coefficients of `S22 = a + b·z`, per unit generalized coordinate.
pub fn nsr_transverse_field(section: &Section) -> Result<TransverseField> {
    let mut lhs = Matrix2::zeros();
    for (k, layer) in section.layers().iter().enumerate() {
        let s = section.span(k);
        let q22 = layer.material.q22;
        lhs[(0, 0)] += q22 * s.len();
        lhs[(0, 1)] += q22 * s.first();
        lhs[(1, 1)] += q22 * s.second();
    }
    lhs[(1, 0)] = lhs[(0, 1)];
    let lu = lhs.lu();
    if !(lhs.determinant() > 0.0) {
        return Err(Error::SingularClosure);
    }

    let rows = (0..section.dof())
        .map(|j| {
            // The part of T22 that does not depend on S22: Q12·S11 − e32·E3.
            let mut rhs = Vector2::zeros();
            for (k, layer) in section.layers().iter().enumerate() {
                let s = section.span(k);
                let m = &layer.material;
                let s11 = unit_strain(j);
                let e3 = unit_field(section, k, j);
                let free = s11.scale(m.q12).add(Linear::constant(-m.e32 * e3));
                rhs[0] -= free.integral(&s);
                rhs[1] -= free.moment(&s);
            }
            let ab = lu.solve(&rhs).ok_or(Error::SingularClosure)?;
            Ok([ab[0], ab[1]])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransverseField { rows })
}

fn unit_strain(j: usize) -> Linear {
    match j {
        0 => Linear::new(1.0, 0.0),
        1 => Linear::new(0.0, 1.0),
        _ => Linear::ZERO,
    }
}

fn unit_field(section: &Section, layer: usize, j: usize) -> f64 {
    match section.field_row(layer) {
        Some((col, v)) if col == j => v,
        _ => 0.0,
    }
}

/// Linear fields in one layer for a given generalized state.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LayerFields {
    pub s22: Linear,
    pub e3: f64,
    pub t11: Linear,
    pub t22: Linear,
    pub d3: Linear,
}

pub(crate) fn layer_fields(
    section: &Section,
    closure: ClosureModel,
    field: Option<&TransverseField>,
    x: &[f64],
) -> Vec<LayerFields> {
    let s11 = Linear::new(x[0], x[1]);
    section
        .layers()
        .iter()
        .enumerate()
        .map(|(k, layer)| {
            let m = &layer.material;
            let e3 = section.field_row(k).map_or(0.0, |(col, v)| v * x[col]);
            let s22 = match closure {
                ClosureModel::ND => Linear::ZERO,
                ClosureModel::NS => s11
                    .scale(-m.q12)
                    .add(Linear::constant(m.e32 * e3))
                    .scale(1.0 / m.q22),
                ClosureModel::NSR => field.expect("NSR needs its transverse field").at(x),
            };
            let t11 = s11
                .scale(m.q11)
                .add(s22.scale(m.q12))
                .add(Linear::constant(-m.e31 * e3));
            let t22 = match closure {
                ClosureModel::NS => Linear::ZERO,
                _ => {
                    let t22 = s11
                        .scale(m.q12)
                        .add(s22.scale(m.q22))
                        .add(Linear::constant(-m.e32 * e3));
                    // below the rounding bound of its own terms: exact zero
                    let span = section.span(k);
                    let noise = [span.z0, span.z1].iter().all(|&z| {
                        let terms = (m.q12 * s11.at(z)).abs()
                            + (m.q22 * s22.at(z)).abs()
                            + (m.e32 * e3).abs();
                        t22.at(z).abs() <= 16.0 * f64::EPSILON * terms
                    });
                    if noise {
                        Linear::ZERO
                    } else {
                        t22
                    }
                }
            };
            let d3 = s11
                .scale(m.e31)
                .add(s22.scale(m.e32))
                .add(Linear::constant(m.eps33 * e3));
            LayerFields {
                s22,
                e3,
                t11,
                t22,
                d3,
            }
        })
        .collect()
}

/// Generalized forces `(N, M, q_1..q_T)` for a generalized state vector.
pub(crate) fn generalized_forces(
    section: &Section,
    closure: ClosureModel,
    field: Option<&TransverseField>,
    x: &[f64],
) -> Vec<f64> {
    let fields = layer_fields(section, closure, field, x);
    let mut out = vec![0.0; section.dof()];
    for (k, f) in fields.iter().enumerate() {
        let s = section.span(k);
        out[0] += f.t11.integral(&s);
        out[1] += f.t11.moment(&s);
        if let Some(t) = section.terminal_of(k) {
            let poling = section.layers()[k].poling.sign();
            out[2 + t] += poling * f.d3.integral(&s) / s.len();
        }
    }
    for v in &mut out {
        *v *= section.width();
    }
    out
}

/// The coupled 1D law of a section under one closure.
///
/// `matrix` is the full `(2+T)×(2+T)` map from `(eps, kappa, V...)` to
/// `(N, M, q...)`, assembled column by column from the recovered stresses
/// and electric displacements:
///
/// ```text
/// [N; M] = Kmm·[eps; kappa] + Kme·V
/// q      = Kmeᵀ·[eps; kappa] − Cq·V
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SectionConstitutive {
    pub closure: ClosureModel,
    pub matrix: DMatrix<f64>,
}

impl SectionConstitutive {
    pub fn from_matrix(closure: ClosureModel, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::InvalidSection(
                "constitutive matrix must be square with at least two rows".into(),
            ));
        }
        Ok(Self { closure, matrix })
    }

    pub fn terminals(&self) -> usize {
        self.matrix.nrows() - 2
    }

    pub fn kmm(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Force and moment per unit terminal voltage, 2×T.
    pub fn kme(&self) -> DMatrix<f64> {
        self.matrix.view((0, 2), (2, self.terminals())).into_owned()
    }

    /// Charge per unit (eps, kappa) at zero voltage, T×2. Equals `kme()ᵀ`.
    pub fn sensing(&self) -> DMatrix<f64> {
        self.matrix.view((2, 0), (self.terminals(), 2)).into_owned()
    }

    /// Blocked capacitance matrix per unit length, F/m.
    pub fn cq(&self) -> DMatrix<f64> {
        -self
            .matrix
            .view((2, 2), (self.terminals(), self.terminals()))
            .into_owned()
    }

    /// Extension stiffness, N.
    pub fn extension(&self) -> f64 {
        self.matrix[(0, 0)]
    }
    /// Extension–bending coupling, N·m.
    pub fn extension_bending(&self) -> f64 {
        self.matrix[(0, 1)]
    }
    /// Bending stiffness at short circuit, N·m².
    pub fn bending(&self) -> f64 {
        self.matrix[(1, 1)]
    }

    /// Largest `|K_ij − K_ji|` scaled by `sqrt(|K_ii·K_jj|)`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let scale = (self.matrix[(i, i)] * self.matrix[(j, j)]).abs().sqrt();
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)]).abs();
                worst = worst.max(if scale > 0.0 { d / scale } else { d });
            }
        }
        worst
    }

    /// Generalized forces for a state.
    pub fn apply(&self, state: &GeneralizedState) -> Result<Vec<f64>> {
        if state.voltages.len() != self.terminals() {
            return Err(Error::VoltageCount {
                expected: self.terminals(),
                got: state.voltages.len(),
            });
        }
        let x = nalgebra::DVector::from_vec(state.as_vector());
        Ok((&self.matrix * x).iter().copied().collect())
    }
}

/// Reduces a section to its 1D electromechanical law under `closure`.
pub fn reduce_section(section: &Section, closure: ClosureModel) -> Result<SectionConstitutive> {
    let field = match closure {
        ClosureModel::NSR => Some(nsr_transverse_field(section)?),
        _ => None,
    };
    let n = section.dof();
    let mut matrix = DMatrix::zeros(n, n);
    let mut unit = vec![0.0; n];
    for j in 0..n {
        unit.fill(0.0);
        unit[j] = 1.0;
        let col = generalized_forces(section, closure, field.as_ref(), &unit);
        matrix.set_column(j, &nalgebra::DVector::from_vec(col));
    }
    SectionConstitutive::from_matrix(closure, matrix)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacitanceCondition {
    /// Generalized strains held at zero.
    Blocked,
    /// Force- and moment-free (N = M = 0).
    Free,
}

/// Capacitance per unit length of one terminal, F/m, other terminals shorted.
pub fn capacitance_per_length(
    k: &SectionConstitutive,
    condition: CapacitanceCondition,
    terminal: usize,
) -> Result<f64> {
    if terminal >= k.terminals() {
        return Err(Error::NoSuchTerminal {
            index: terminal,
            count: k.terminals(),
        });
    }
    let blocked = k.cq()[(terminal, terminal)];
    match condition {
        CapacitanceCondition::Blocked => Ok(blocked),
        CapacitanceCondition::Free => {
            let g = Vector2::new(k.matrix[(0, 2 + terminal)], k.matrix[(1, 2 + terminal)]);
            let kmm_inv = k.kmm().try_inverse().ok_or(Error::DegenerateSection)?;
            Ok(blocked + g.dot(&(kmm_inv * g)))
        }
    }
}
