//! Mixed-formulation reference for the section reduction.
//!
//! Each layer is cut into `n` sublayers. The transverse stress T22 is an
//! independent unknown, linear in every sublayer, and enters through the
//! partial Legendre transform of the electric enthalpy in S22:
//!
//! ```text
//! Ψ(S11, T22, E3) = ½·Q̃·S11² − ẽ·E3·S11 − ½·ε̃·E3²
//!                 + (Q12/Q22)·S11·T22 − (e32/Q22)·E3·T22 − T22²/(2·Q22)
//! ```
//!
//! with `Q̃ = Q11 − Q12²/Q22`, `ẽ = e31 − e32·Q12/Q22`, `ε̃ = eps33 + e32²/Q22`.
//! The closures are imposed on the stress unknowns:
//!
//! * NS: T22 = 0, no unknowns.
//! * ND: T22 free in every sublayer; stationarity forces S22 = 0.
//! * NSR: T22 free, plus two multipliers enforcing ∫T22 = ∫z·T22 = 0.
//!   Stationarity gives S22 = λ1 + λ2·z, so the multipliers are the
//!   transverse-field coefficients.
//!
//! Integrals use two-point Gauss quadrature per sublayer, exact for the
//! quadratic integrands. The stress block is block-diagonal, so stress
//! unknowns are condensed sublayer by sublayer before the multiplier solve.

use nalgebra::{DMatrix, Matrix2, RowDVector};

use super::{ClosureModel, Section, SectionConstitutive};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub constitutive: SectionConstitutive,
    /// NSR only: 2×(2+T), multipliers per unit generalized coordinate.
    pub multipliers: Option<DMatrix<f64>>,
}

struct SublayerBlocks {
    /// stress–stress, 2×2 (negative definite)
    tt: Matrix2<f64>,
    /// stress–generalized, 2×n
    tx: DMatrix<f64>,
    /// stress–multiplier, 2×2
    tl: Matrix2<f64>,
}

pub fn discretized_oracle(
    section: &Section,
    closure: ClosureModel,
    sublayers: usize,
) -> Result<OracleResult> {
    let sublayers = sublayers.max(1);
    let n = section.dof();
    let gauss = [(-1.0 / 3f64.sqrt(), 1.0), (1.0 / 3f64.sqrt(), 1.0)];

    let mut kxx = DMatrix::<f64>::zeros(n, n);
    let mut blocks = Vec::new();

    for (k, layer) in section.layers().iter().enumerate() {
        let m = &layer.material;
        let q_t = m.q11 - m.q12 * m.q12 / m.q22;
        let e_t = m.e31 - m.e32 * m.q12 / m.q22;
        let eps_t = m.eps33 + m.e32 * m.e32 / m.q22;
        let r = m.q12 / m.q22;
        let p = m.e32 / m.q22;

        let mut field = RowDVector::<f64>::zeros(n);
        if let Some((col, v)) = section.field_row(k) {
            field[col] = v;
        }

        let span = section.span(k);
        let hs = span.len() / sublayers as f64;
        for s in 0..sublayers {
            let z0 = span.z0 + hs * s as f64;
            let zc = z0 + 0.5 * hs;
            let mut b = SublayerBlocks {
                tt: Matrix2::zeros(),
                tx: DMatrix::zeros(2, n),
                tl: Matrix2::zeros(),
            };
            for (xi, w) in gauss {
                let z = zc + 0.5 * hs * xi;
                let w = 0.5 * hs * w;
                let mut strain = RowDVector::<f64>::zeros(n);
                strain[0] = 1.0;
                strain[1] = z;
                // local stress basis (1, xi) keeps the blocks well scaled
                let phi = [1.0, xi];

                kxx += (strain.transpose() * &strain * q_t
                    - (strain.transpose() * &field + field.transpose() * &strain) * e_t
                    - field.transpose() * &field * eps_t)
                    * w;

                if closure != ClosureModel::NS {
                    let coupling = &strain * r - &field * p;
                    for a in 0..2 {
                        for c in 0..2 {
                            b.tt[(a, c)] -= w * phi[a] * phi[c] / m.q22;
                        }
                        b.tl[(a, 0)] += w * phi[a];
                        b.tl[(a, 1)] += w * phi[a] * z;
                        let mut row = b.tx.row_mut(a);
                        row += &coupling * (w * phi[a]);
                    }
                }
            }
            if closure != ClosureModel::NS {
                blocks.push(b);
            }
        }
    }

    let mut reduced = kxx;
    let mut multipliers = None;
    match closure {
        ClosureModel::NS => {}
        ClosureModel::ND => {
            for b in &blocks {
                let inv = b.tt.try_inverse().ok_or(Error::SingularClosure)?;
                let inv = DMatrix::from_iterator(2, 2, inv.iter().copied());
                reduced -= b.tx.transpose() * inv * &b.tx;
            }
        }
        ClosureModel::NSR => {
            // τ_s = −A⁻¹(R x + C λ);  Σ Cᵀτ_s = 0  ⇒  S λ = −P x
            let mut schur = Matrix2::zeros();
            let mut rhs = DMatrix::<f64>::zeros(2, n);
            let mut inverses = Vec::with_capacity(blocks.len());
            for b in &blocks {
                let inv = b.tt.try_inverse().ok_or(Error::SingularClosure)?;
                schur += b.tl.transpose() * inv * b.tl;
                let ct_ainv = b.tl.transpose() * inv;
                let ct_ainv = DMatrix::from_iterator(2, 2, ct_ainv.iter().copied());
                rhs += ct_ainv * &b.tx;
                inverses.push(inv);
            }
            let schur_inv = schur.try_inverse().ok_or(Error::SingularClosure)?;
            let schur_inv = DMatrix::from_iterator(2, 2, schur_inv.iter().copied());
            let dlambda = -(schur_inv * rhs);
            for (b, inv) in blocks.iter().zip(&inverses) {
                let inv = DMatrix::from_iterator(2, 2, inv.iter().copied());
                let tl = DMatrix::from_iterator(2, 2, b.tl.iter().copied());
                let dtau = -(inv * (&b.tx + tl * &dlambda));
                reduced += b.tx.transpose() * dtau;
            }
            multipliers = Some(dlambda);
        }
    }

    reduced *= section.width();
    Ok(OracleResult {
        constitutive: SectionConstitutive::from_matrix(closure, reduced)?,
        multipliers,
    })
}
