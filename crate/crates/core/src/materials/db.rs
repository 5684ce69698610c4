use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Matrix3, Matrix6};
use serde::Deserialize;

use super::{
    condense_to_plane, convert_d_to_e, Material3D, MaterialDForm, PiezoMatrix, PlaneMaterial,
};
use crate::error::{Error, Result};

/// The two records that are always available: PZT-5H and Al-6061.
pub const BUILTIN_DB_JSON: &str = include_str!("../../data/materials.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDb {
    materials: Vec<RawMaterial>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    name: String,
    form: RawForm,
    #[serde(rename = "c_E_Pa")]
    c_e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "e_C_per_m2")]
    e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "eps_S_F_per_m")]
    eps_s: Option<Vec<Vec<f64>>>,
    #[serde(rename = "s_E_m2_per_N")]
    s_e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "d_m_per_V")]
    d: Option<Vec<Vec<f64>>>,
    #[serde(rename = "eps_T_F_per_m")]
    eps_t: Option<Vec<Vec<f64>>>,
    density_kg_m3: f64,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Deserialize, Clone, Copy)]
enum RawForm {
    #[serde(rename = "e")]
    E,
    #[serde(rename = "d")]
    D,
}

/// A database entry, kept in the form it was written in.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialRecord {
    E(Material3D),
    D(MaterialDForm),
}

impl MaterialRecord {
    pub fn name(&self) -> &str {
        match self {
            MaterialRecord::E(m) => &m.name,
            MaterialRecord::D(m) => &m.name,
        }
    }

    pub fn to_e_form(&self) -> Result<Material3D> {
        match self {
            MaterialRecord::E(m) => Ok(m.clone()),
            MaterialRecord::D(m) => convert_d_to_e(m),
        }
    }
}

/// Named, validated material records.
#[derive(Debug, Clone, Default)]
pub struct MaterialDb {
    records: BTreeMap<String, MaterialRecord>,
    /// Non-fatal notes produced while loading (e.g. shadowed built-ins).
    pub warnings: Vec<String>,
}

fn matrix<const R: usize, const C: usize>(
    name: &str,
    field: &str,
    rows: Option<Vec<Vec<f64>>>,
) -> Result<nalgebra::SMatrix<f64, R, C>> {
    let rows = rows
        .ok_or_else(|| Error::MalformedDatabase(format!("material {name}: missing \"{field}\"")))?;
    if rows.len() != R || rows.iter().any(|r| r.len() != C) {
        return Err(Error::MalformedDatabase(format!(
            "material {name}: \"{field}\" must be {R}x{C}"
        )));
    }
    Ok(nalgebra::SMatrix::from_fn(|i, j| rows[i][j]))
}

fn reject_other_form(name: &str, fields: &[(&str, bool)]) -> Result<()> {
    for (field, present) in fields {
        if *present {
            return Err(Error::MalformedDatabase(format!(
                "material {name}: \"{field}\" does not belong to this form"
            )));
        }
    }
    Ok(())
}

fn record_from_raw(raw: RawMaterial) -> Result<MaterialRecord> {
    let name = raw.name.clone();
    let record = match raw.form {
        RawForm::E => {
            reject_other_form(
                &name,
                &[
                    ("s_E_m2_per_N", raw.s_e.is_some()),
                    ("d_m_per_V", raw.d.is_some()),
                    ("eps_T_F_per_m", raw.eps_t.is_some()),
                ],
            )?;
            let m = Material3D {
                c_e: matrix::<6, 6>(&name, "c_E_Pa", raw.c_e)?,
                e: matrix::<3, 6>(&name, "e_C_per_m2", raw.e)?,
                eps_s: matrix::<3, 3>(&name, "eps_S_F_per_m", raw.eps_s)?,
                density: raw.density_kg_m3,
                provenance: raw.provenance,
                name,
            };
            m.validate()?;
            MaterialRecord::E(m)
        }
        RawForm::D => {
            reject_other_form(
                &name,
                &[
                    ("c_E_Pa", raw.c_e.is_some()),
                    ("e_C_per_m2", raw.e.is_some()),
                    ("eps_S_F_per_m", raw.eps_s.is_some()),
                ],
            )?;
            let s_e: Matrix6<f64> = matrix(&name, "s_E_m2_per_N", raw.s_e)?;
            let d: PiezoMatrix = matrix(&name, "d_m_per_V", raw.d)?;
            let eps_t: Matrix3<f64> = matrix(&name, "eps_T_F_per_m", raw.eps_t)?;
            let m = MaterialDForm {
                s_e,
                d,
                eps_t,
                density: raw.density_kg_m3,
                provenance: raw.provenance,
                name,
            };
            m.validate()?;
            convert_d_to_e(&m).map_err(|err| Error::InvalidMaterial {
                name: m.name.clone(),
                reason: err.to_string(),
            })?;
            MaterialRecord::D(m)
        }
    };
    Ok(record)
}

/// Parses a database document without merging in the built-ins.
pub fn parse_material_db(text: &str) -> Result<Vec<MaterialRecord>> {
    let raw: RawDb =
        serde_json::from_str(text).map_err(|e| Error::MalformedDatabase(e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(raw.materials.len());
    for entry in raw.materials {
        if !seen.insert(entry.name.clone()) {
            return Err(Error::DuplicateMaterial(entry.name));
        }
        out.push(record_from_raw(entry)?);
    }
    Ok(out)
}

/// Loads a database file on top of the built-in records.
///
/// An empty (or whitespace-only) file yields the built-ins. A record whose
/// name matches a built-in replaces it and leaves a warning.
pub fn load_material_db(path: &Path) -> Result<MaterialDb> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedDatabase(format!("{}: {e}", path.display())))?;
    let mut db = MaterialDb::builtin();
    if text.trim().is_empty() {
        return Ok(db);
    }
    for record in parse_material_db(&text)? {
        db.insert(record);
    }
    Ok(db)
}

impl MaterialDb {
    pub fn builtin() -> Self {
        let records = parse_material_db(BUILTIN_DB_JSON).expect("built-in materials are valid");
        Self {
            records: records
                .into_iter()
                .map(|r| (r.name().to_string(), r))
                .collect(),
            warnings: Vec::new(),
        }
    }

    /// Adds a record, replacing (with a warning) any record of the same name.
    pub fn insert(&mut self, record: MaterialRecord) {
        let name = record.name().to_string();
        if self.records.insert(name.clone(), record).is_some() {
            self.warnings.push(format!(
                "material {name} from file shadows the built-in record"
            ));
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn record(&self, name: &str) -> Option<&MaterialRecord> {
        self.records.get(name)
    }

    pub fn material(&self, name: &str) -> Result<Material3D> {
        self.record(name)
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))?
            .to_e_form()
    }

    pub fn plane(&self, name: &str) -> Result<PlaneMaterial> {
        condense_to_plane(&self.material(name)?)
    }
}
