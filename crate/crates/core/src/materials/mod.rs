//! Piezoelectric and elastic material constants.
//!
//! All matrices use the Voigt order (11, 22, 33, 23, 13, 12) and SI units.
//! The poling axis of a piezoelectric material is its local 3-axis; a layer
//! poled along -z flips the sign of the field it sees, never the constants.

mod db;

pub use db::{load_material_db, parse_material_db, MaterialDb, MaterialRecord, BUILTIN_DB_JSON};

use nalgebra::{Cholesky, Matrix3, Matrix4, Matrix6, SMatrix};

use crate::error::{Error, Result};

/// 3×6 piezoelectric matrix (rows: field direction 1..3, columns: Voigt strain/stress).
pub type PiezoMatrix = SMatrix<f64, 3, 6>;

/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;

const SYMMETRY_TOL: f64 = 1e-12;

/// Full 3D material in stress-charge (e) form.
#[derive(Debug, Clone, PartialEq)]
pub struct Material3D {
    pub name: String,
    /// Elastic stiffness at constant electric field, Pa.
    pub c_e: Matrix6<f64>,
    /// Piezoelectric stress constants, C/m².
    pub e: PiezoMatrix,
    /// Permittivity at constant strain, F/m.
    pub eps_s: Matrix3<f64>,
    /// kg/m³
    pub density: f64,
    pub provenance: String,
}

/// Full 3D material in strain-charge (d) form, as vendor datasheets publish it.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialDForm {
    pub name: String,
    /// Elastic compliance at constant electric field, 1/Pa.
    pub s_e: Matrix6<f64>,
    /// Piezoelectric strain constants, m/V.
    pub d: PiezoMatrix,
    /// Permittivity at constant stress, F/m.
    pub eps_t: Matrix3<f64>,
    pub density: f64,
    pub provenance: String,
}

/// In-plane constants left after eliminating the thickness and shear stresses.
///
/// The condensed law, in the material's poling frame, reads
///
/// ```text
/// T11 = q11·S11 + q12·S22 − e31·E3
/// T22 = q12·S11 + q22·S22 − e32·E3
/// D3  = e31·S11 + e32·S22 + eps33·E3
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneMaterial {
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
    pub e31: f64,
    pub e32: f64,
    pub eps33: f64,
    pub density: f64,
}

fn is_symmetric<const N: usize>(m: &SMatrix<f64, N, N>) -> bool {
    let scale = m.amax();
    if !scale.is_finite() {
        return false;
    }
    (m - m.transpose()).amax() <= SYMMETRY_TOL * scale
}

fn is_positive_definite<const N: usize>(m: &SMatrix<f64, N, N>) -> bool
where
    nalgebra::Const<N>: nalgebra::DimMin<nalgebra::Const<N>, Output = nalgebra::Const<N>>,
{
    Cholesky::new(*m).is_some()
}

fn symmetrized<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (m + m.transpose()) * 0.5
}

fn invalid(name: &str, reason: &str) -> Error {
    Error::InvalidMaterial {
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

fn isotropic_compliance(youngs: f64, poisson: f64) -> Matrix6<f64> {
    let mut s = Matrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            s[(i, j)] = if i == j {
                1.0 / youngs
            } else {
                -poisson / youngs
            };
        }
    }
    let shear = 2.0 * (1.0 + poisson) / youngs;
    for i in 3..6 {
        s[(i, i)] = shear;
    }
    s
}

impl Material3D {
    /// Isotropic, non-piezoelectric material with vacuum permittivity.
    pub fn isotropic(name: &str, youngs: f64, poisson: f64, density: f64) -> Result<Self> {
        MaterialDForm::isotropic(name, youngs, poisson, density).to_e_form()
    }

    pub fn is_piezoelectric(&self) -> bool {
        self.e.iter().any(|&v| v != 0.0)
    }

    /// Checks the record invariants, naming the first one that fails.
    pub fn validate(&self) -> Result<()> {
        let name = &self.name;
        if !is_symmetric(&self.c_e) {
            return Err(invalid(name, "cE is not symmetric"));
        }
        if !is_positive_definite(&self.c_e) {
            return Err(invalid(name, "cE is not positive definite"));
        }
        if !is_symmetric(&self.eps_s) {
            return Err(invalid(name, "epsS is not symmetric"));
        }
        if !is_positive_definite(&self.eps_s) {
            return Err(invalid(name, "epsS is not positive definite"));
        }
        if !self.e.iter().all(|v| v.is_finite()) {
            return Err(invalid(name, "e has non-finite entries"));
        }
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(invalid(name, "density must be positive"));
        }
        Ok(())
    }

    pub fn condense(&self) -> Result<PlaneMaterial> {
        condense_to_plane(self)
    }
}

impl MaterialDForm {
    pub fn isotropic(name: &str, youngs: f64, poisson: f64, density: f64) -> Self {
        Self {
            name: name.to_string(),
            s_e: isotropic_compliance(youngs, poisson),
            d: PiezoMatrix::zeros(),
            eps_t: Matrix3::identity() * EPS0,
            density,
            provenance: format!("isotropic, E = {youngs} Pa, nu = {poisson}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let name = &self.name;
        if !is_symmetric(&self.s_e) {
            return Err(invalid(name, "sE is not symmetric"));
        }
        if !is_positive_definite(&self.s_e) {
            return Err(invalid(name, "sE is not positive definite"));
        }
        if !is_symmetric(&self.eps_t) {
            return Err(invalid(name, "epsT is not symmetric"));
        }
        if !is_positive_definite(&self.eps_t) {
            return Err(invalid(name, "epsT is not positive definite"));
        }
        if !self.d.iter().all(|v| v.is_finite()) {
            return Err(invalid(name, "d has non-finite entries"));
        }
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(invalid(name, "density must be positive"));
        }
        Ok(())
    }

    pub fn to_e_form(&self) -> Result<Material3D> {
        convert_d_to_e(self)
    }
}

/// Converts strain-charge constants to stress-charge constants:
/// `cE = sE⁻¹`, `e = d·cE`, `epsS = epsT − d·cE·dᵀ`.
pub fn convert_d_to_e(m: &MaterialDForm) -> Result<Material3D> {
    let c_e = m
        .s_e
        .try_inverse()
        .filter(|c| c.iter().all(|v| v.is_finite()))
        .ok_or(Error::NonInvertibleCompliance)?;
    let c_e = symmetrized(&c_e);
    let e = m.d * c_e;
    let eps_s = symmetrized(&(m.eps_t - m.d * c_e * m.d.transpose()));
    if !is_positive_definite(&eps_s) {
        return Err(Error::InconsistentConstants(format!(
            "{}: clamped permittivity is not positive definite",
            m.name
        )));
    }
    let out = Material3D {
        name: m.name.clone(),
        c_e,
        e,
        eps_s,
        density: m.density,
        provenance: m.provenance.clone(),
    };
    out.validate()
        .map_err(|err| Error::InconsistentConstants(err.to_string()))?;
    Ok(out)
}

/// Eliminates T33 and the three shear stresses, keeping S11, S22 and E3.
///
/// For materials whose shear terms decouple (isotropic, transversely
/// isotropic about z) this is the familiar `Q_ij = c_ij − c_i3·c_j3/c33`,
/// `e3i = e_3i − e_33·c_i3/c33`, `eps33 = epsS_33 + e_33²/c33`.
pub fn condense_to_plane(m: &Material3D) -> Result<PlaneMaterial> {
    let c33 = m.c_e[(2, 2)];
    if !(c33 > 0.0) {
        return Err(Error::DegenerateThicknessStiffness(c33));
    }
    // Passive Voigt components: 33, 23, 13, 12.
    const PASSIVE: [usize; 4] = [2, 3, 4, 5];
    let c_pp = Matrix4::from_fn(|i, j| m.c_e[(PASSIVE[i], PASSIVE[j])]);
    let c_pp_inv = c_pp
        .try_inverse()
        .ok_or(Error::DegenerateThicknessStiffness(c33))?;

    // Active rows of the enthalpy Hessian coupling to the passive strains:
    // S11, S22 through cE, E3 through -e3.
    let coupling = |row: usize, p: usize| -> f64 {
        match row {
            0 | 1 => m.c_e[(row, PASSIVE[p])],
            _ => -m.e[(2, PASSIVE[p])],
        }
    };
    let reduce = |r: usize, s: usize, full: f64| -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += coupling(r, i) * c_pp_inv[(i, j)] * coupling(s, j);
            }
        }
        full - acc
    };

    let q11 = reduce(0, 0, m.c_e[(0, 0)]);
    let q12 = reduce(0, 1, m.c_e[(0, 1)]);
    let q22 = reduce(1, 1, m.c_e[(1, 1)]);
    // Hessian entries (S_i, E3) are -e_3i; (E3, E3) is -eps33.
    let e31 = -reduce(0, 2, -m.e[(2, 0)]);
    let e32 = -reduce(1, 2, -m.e[(2, 1)]);
    let eps33 = -reduce(2, 2, -m.eps_s[(2, 2)]);

    Ok(PlaneMaterial {
        q11,
        q12,
        q22,
        e31,
        e32,
        eps33,
        density: m.density,
    })
}

impl PlaneMaterial {
    /// In-plane isotropic elastic constants `E/(1−ν²)`, `νE/(1−ν²)`.
    pub fn isotropic_elastic(youngs: f64, poisson: f64, density: f64) -> Self {
        let q11 = youngs / (1.0 - poisson * poisson);
        Self {
            q11,
            q12: poisson * q11,
            q22: q11,
            e31: 0.0,
            e32: 0.0,
            eps33: EPS0,
            density,
        }
    }

    pub fn is_piezoelectric(&self) -> bool {
        self.e31 != 0.0 || self.e32 != 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.q11,
            self.q12,
            self.q22,
            self.e31,
            self.e32,
            self.eps33,
            self.density,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(invalid("<plane>", "non-finite constant"));
        }
        if !(self.q11 > 0.0 && self.q11 * self.q22 - self.q12 * self.q12 > 0.0) {
            return Err(invalid(
                "<plane>",
                "in-plane stiffness not positive definite",
            ));
        }
        if !(self.eps33 > 0.0) {
            return Err(invalid("<plane>", "eps33 must be positive"));
        }
        if !(self.density > 0.0) {
            return Err(invalid("<plane>", "density must be positive"));
        }
        Ok(())
    }
}
