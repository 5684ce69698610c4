//! Laminated piezoelectric beams reduced to coupled 1D electromechanical laws.
//!
//! A layup of plane-stress-condensed materials becomes a symmetric matrix
//! mapping axial strain, curvature and terminal voltages to axial force,
//! bending moment and terminal charge. Three closures of the transverse
//! fields are available: null transverse strain (ND), null transverse stress
//! (NS) and null transverse stress resultants (NSR).
//!
//! ```
//! use piezolam::materials::MaterialDb;
//! use piezolam::section::{build_section, reduce_section, ClosureModel, LayupSpec};
//!
//! let spec = LayupSpec::from_json(include_str!("../data/sandwich.json")).unwrap();
//! let section = build_section(&spec, &MaterialDb::builtin()).unwrap();
//! let k = reduce_section(&section, ClosureModel::NSR).unwrap();
//! assert!(k.symmetry_defect() < 1e-12);
//! ```

pub mod beam;
pub mod cli;
pub mod error;
pub mod materials;
pub mod section;

pub use error::{Error, Result};
