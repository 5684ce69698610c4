use super::{capacitance_per_length, reduce_section, CapacitanceCondition, ClosureModel, Section};
use crate::error::Result;

/// One closure's headline numbers for terminal 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub closure: ClosureModel,
    /// Capacitance per unit line (constitutive, blocked), F/m.
    pub capacitance: f64,
    /// Force- and moment-free capacitance, F/m.
    pub capacitance_free: f64,
    /// N
    pub extension_stiffness: f64,
    /// Short-circuit bending stiffness, N·m².
    pub bending_stiffness: f64,
    /// Moment per unit voltage, N·m/V.
    pub bending_coupling: f64,
    /// `(capacitance − reference)/reference × 100`, when a reference is given.
    pub deviation_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    /// F/m
    pub reference: Option<f64>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn row(&self, closure: ClosureModel) -> &ComparisonRow {
        self.rows
            .iter()
            .find(|r| r.closure == closure)
            .expect("every closure has a row")
    }
}

pub fn compare_closures(section: &Section, reference: Option<f64>) -> Result<ComparisonTable> {
    let rows = ClosureModel::ALL
        .iter()
        .map(|&closure| {
            let k = reduce_section(section, closure)?;
            let (capacitance, capacitance_free, bending_coupling) = if k.terminals() > 0 {
                (
                    capacitance_per_length(&k, CapacitanceCondition::Blocked, 0)?,
                    capacitance_per_length(&k, CapacitanceCondition::Free, 0)?,
                    k.matrix[(1, 2)],
                )
            } else {
                (0.0, 0.0, 0.0)
            };
            Ok(ComparisonRow {
                closure,
                capacitance,
                capacitance_free,
                extension_stiffness: k.extension(),
                bending_stiffness: k.bending(),
                bending_coupling,
                deviation_percent: reference.map(|r| (capacitance - r) / r * 100.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonTable { reference, rows })
}
