//! Report rendering. Tables use display units (mm, nF/mm, N·m²); JSON and CSV
//! carry SI values with the unit in every field or column name.
//!
//! CSV columns, fixed:
//!
//! * reduce: `row,col,value_si,unit`
//! * compare: `model,capacitance_blocked_F_per_m,capacitance_free_F_per_m,extension_stiffness_N,bending_stiffness_N_m2,bending_coupling_N_m_per_V,deviation_percent`
//! * stress: `layer,z_m,t11_Pa,t22_Pa`
//! * capacitance: `model,condition,terminal,capacitance_F_per_m`
//! * beam-static: `quantity,terminal,value_si,unit`
//! * beam-modal: `mode,frequency_Hz,coupling_k2`

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use super::OutputFormat;
use crate::beam::{
    cantilever_tip_deflection, coupling_factor, free_actuation_state, modal_frequencies,
    sensor_charge, Beam, Boundary, Circuit,
};
use crate::error::{Error, Result};
use crate::section::{
    capacitance_per_length, compare_closures, recover_stress_profile, reduce_section,
    CapacitanceCondition, ClosureModel, GeneralizedState, Section, SectionConstitutive,
};

pub const SCHEMA_VERSION: u32 = 1;

/// F/m → nF/mm
const NF_PER_MM: f64 = 1e6;
const MM: f64 = 1e3;

fn to_json(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("report values serialize");
    s.push('\n');
    s
}

fn condition_name(c: CapacitanceCondition) -> &'static str {
    match c {
        CapacitanceCondition::Blocked => "blocked",
        CapacitanceCondition::Free => "free",
    }
}

fn matrix_units(terminals: usize) -> Vec<Vec<&'static str>> {
    let n = terminals + 2;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i.min(2), j.min(2)) {
                    (0, 0) => "N",
                    (0, 1) | (1, 0) => "N*m",
                    (1, 1) => "N*m^2",
                    (0, 2) | (2, 0) => "N/V",
                    (1, 2) | (2, 1) => "N*m/V",
                    _ => "F/m",
                })
                .collect()
        })
        .collect()
}

fn section_json(section: &Section) -> Value {
    json!({
        "width_m": section.width(),
        "thickness_m": section.thickness(),
        "interfaces_m": section.interfaces(),
        "terminals": section.terminal_count(),
        "mass_per_length_kg_per_m": section.mass_per_length(),
    })
}

pub fn reduce(section: &Section, closure: ClosureModel, format: OutputFormat) -> Result<String> {
    let k = reduce_section(section, closure)?;
    let n = k.matrix.nrows();
    let units = matrix_units(k.terminals());
    Ok(match format {
        OutputFormat::Json => {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| k.matrix[(i, j)]).collect())
                .collect();
            to_json(json!({
                "schema_version": SCHEMA_VERSION,
                "command": "reduce",
                "model": closure.as_str(),
                "section": section_json(section),
                "coordinates": coordinate_names(k.terminals()),
                "matrix": rows,
                "matrix_units": units,
            }))
        }
        OutputFormat::Csv => {
            let mut s = String::from("row,col,value_si,unit\n");
            for i in 0..n {
                for j in 0..n {
                    writeln!(s, "{i},{j},{:e},{}", k.matrix[(i, j)], units[i][j]).unwrap();
                }
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            writeln!(s, "Section constitutive law, {closure} closure").unwrap();
            writeln!(
                s,
                "  [N; M; q] = K [eps; kappa; V]   width {:.3} mm, thickness {:.3} mm",
                section.width() * MM,
                section.thickness() * MM
            )
            .unwrap();
            let names = coordinate_names(k.terminals());
            write!(s, "{:>8}", "").unwrap();
            for name in &names {
                write!(s, "{name:>16}").unwrap();
            }
            s.push('\n');
            for (i, name) in names.iter().enumerate() {
                write!(s, "{name:>8}").unwrap();
                for j in 0..n {
                    write!(s, "{:>16.6e}", k.matrix[(i, j)]).unwrap();
                }
                s.push('\n');
            }
            writeln!(
                s,
                "  units: A N, B N*m, D N*m^2, coupling N/V and N*m/V, Cq F/m"
            )
            .unwrap();
            s
        }
    })
}

fn coordinate_names(terminals: usize) -> Vec<String> {
    let mut v = vec!["eps".to_string(), "kappa".to_string()];
    v.extend((0..terminals).map(|t| format!("V{t}")));
    v
}

/// Rebuilds the constitutive law from a `reduce --output json` report.
pub fn constitutive_from_reduce_json(text: &str) -> Result<SectionConstitutive> {
    let bad = |m: &str| Error::InvalidSection(format!("reduce report: {m}"));
    let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let closure: ClosureModel = v["model"]
        .as_str()
        .ok_or_else(|| bad("missing model"))?
        .parse()
        .map_err(|e: String| bad(&e))?;
    let rows = v["matrix"]
        .as_array()
        .ok_or_else(|| bad("missing matrix"))?;
    let n = rows.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| bad("ragged matrix"))?;
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.as_f64().ok_or_else(|| bad("non-numeric entry"))?;
        }
    }
    SectionConstitutive::from_matrix(closure, m)
}

pub fn compare(section: &Section, reference: Option<f64>, format: OutputFormat) -> Result<String> {
    let table = compare_closures(section, reference)?;
    Ok(match format {
        OutputFormat::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "model": r.closure.as_str(),
                        "capacitance_blocked_F_per_m": r.capacitance,
                        "capacitance_free_F_per_m": r.capacitance_free,
                        "extension_stiffness_N": r.extension_stiffness,
                        "bending_stiffness_N_m2": r.bending_stiffness,
                        "bending_coupling_N_m_per_V": r.bending_coupling,
                        "deviation_percent": r.deviation_percent,
                    })
                })
                .collect();
            to_json(json!({
                "schema_version": SCHEMA_VERSION,
                "command": "compare",
                "deviation_convention": "(model - reference)/reference * 100",
                "reference_capacitance_F_per_m": reference,
                "section": section_json(section),
                "rows": rows,
            }))
        }
        OutputFormat::Csv => {
            let mut s = String::from(
                "model,capacitance_blocked_F_per_m,capacitance_free_F_per_m,extension_stiffness_N,\
                 bending_stiffness_N_m2,bending_coupling_N_m_per_V,deviation_percent\n",
            );
            for r in &table.rows {
                let dev = r
                    .deviation_percent
                    .map(|d| format!("{d:e}"))
                    .unwrap_or_default();
                writeln!(
                    s,
                    "{},{:e},{:e},{:e},{:e},{:e},{dev}",
                    r.closure,
                    r.capacitance,
                    r.capacitance_free,
                    r.extension_stiffness,
                    r.bending_stiffness,
                    r.bending_coupling
                )
                .unwrap();
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            writeln!(
                s,
                "Closure comparison, terminal 0, width {:.1} mm",
                section.width() * MM
            )
            .unwrap();
            if reference.is_some() {
                writeln!(s, "Deviation (%) = (model - reference)/reference * 100").unwrap();
            }
            let mut header = format!("{:<34}", "");
            for r in &table.rows {
                write!(header, "{:>12}", r.closure.as_str()).unwrap();
            }
            if reference.is_some() {
                write!(header, "{:>12}", "reference").unwrap();
            }
            writeln!(s, "{}", header.trim_end()).unwrap();
            let mut line = |label: &str, cells: Vec<String>, extra: Option<String>| {
                let mut l = format!("{label:<34}");
                for c in cells {
                    write!(l, "{c:>12}").unwrap();
                }
                if let Some(e) = extra {
                    write!(l, "{e:>12}").unwrap();
                }
                writeln!(s, "{}", l.trim_end()).unwrap();
            };
            let cells = |f: &dyn Fn(&crate::section::ComparisonRow) -> String| {
                table.rows.iter().map(f).collect::<Vec<_>>()
            };
            line(
                "Capacitance per unit line (nF/mm)",
                cells(&|r| format!("{:.3}", r.capacitance * NF_PER_MM)),
                reference.map(|v| format!("{:.3}", v * NF_PER_MM)),
            );
            if reference.is_some() {
                line(
                    "Deviation (%)",
                    cells(&|r| format!("{:+.2}", r.deviation_percent.unwrap_or(0.0))),
                    None,
                );
            }
            line(
                "Free capacitance (nF/mm)",
                cells(&|r| format!("{:.3}", r.capacitance_free * NF_PER_MM)),
                None,
            );
            line(
                "Extension stiffness A (MN)",
                cells(&|r| format!("{:.4}", r.extension_stiffness * 1e-6)),
                None,
            );
            line(
                "Bending stiffness D (N*m^2)",
                cells(&|r| format!("{:.4}", r.bending_stiffness)),
                None,
            );
            line(
                "Bending coupling (mN*m/V)",
                cells(&|r| format!("{:.5}", r.bending_coupling * 1e3)),
                None,
            );
            s
        }
    })
}

pub fn stress(
    section: &Section,
    closure: ClosureModel,
    state: &GeneralizedState,
    samples: usize,
    format: OutputFormat,
) -> Result<String> {
    let profile = recover_stress_profile(section, closure, state)?;
    let points = profile.samples(samples);
    Ok(match format {
        OutputFormat::Json => {
            let layers: Vec<Value> = profile
                .layers
                .iter()
                .map(|l| {
                    json!({
                        "z0_m": l.z0,
                        "z1_m": l.z1,
                        "t11_Pa": { "c0": l.t11.c0, "c1_per_m": l.t11.c1 },
                        "t22_Pa": { "c0": l.t22.c0, "c1_per_m": l.t22.c1 },
                        "s22": { "c0": l.s22.c0, "c1_per_m": l.s22.c1 },
                        "e3_V_per_m": l.e3,
                    })
                })
                .collect();
            let pts: Vec<Value> = points
                .iter()
                .map(|p| json!({ "layer": p.layer, "z_m": p.z, "t11_Pa": p.t11, "t22_Pa": p.t22 }))
                .collect();
            to_json(json!({
                "schema_version": SCHEMA_VERSION,
                "command": "stress",
                "model": closure.as_str(),
                "state": {
                    "eps": state.eps,
                    "kappa_per_m": state.kappa,
                    "voltages_V": state.voltages,
                },
                "n2_N_per_m": profile.n2,
                "m2_N": profile.m2,
                "layers": layers,
                "samples": pts,
            }))
        }
        OutputFormat::Csv => {
            let mut s = String::from("layer,z_m,t11_Pa,t22_Pa\n");
            for p in &points {
                writeln!(s, "{},{:e},{:e},{:e}", p.layer, p.z, p.t11, p.t22).unwrap();
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            writeln!(s, "Stress profile, {closure} closure").unwrap();
            writeln!(
                s,
                "  N2 = {:.6e} N/m, M2 = {:.6e} N",
                profile.n2, profile.m2
            )
            .unwrap();
            writeln!(
                s,
                "{:>6}{:>12}{:>16}{:>16}",
                "layer", "z (mm)", "T11 (MPa)", "T22 (MPa)"
            )
            .unwrap();
            for p in &points {
                writeln!(
                    s,
                    "{:>6}{:>12.5}{:>16.6}{:>16.6}",
                    p.layer,
                    p.z * MM,
                    p.t11 * 1e-6,
                    p.t22 * 1e-6
                )
                .unwrap();
            }
            s
        }
    })
}

pub fn capacitance(
    section: &Section,
    closure: ClosureModel,
    condition: CapacitanceCondition,
    terminal: usize,
    format: OutputFormat,
) -> Result<String> {
    let k = reduce_section(section, closure)?;
    let c = capacitance_per_length(&k, condition, terminal)?;
    let cond = condition_name(condition);
    Ok(match format {
        OutputFormat::Json => to_json(json!({
            "schema_version": SCHEMA_VERSION,
            "command": "capacitance",
            "model": closure.as_str(),
            "condition": cond,
            "terminal": terminal,
            "capacitance_F_per_m": c,
            "capacitance_nF_per_mm": c * NF_PER_MM,
        })),
        OutputFormat::Csv => format!(
            "model,condition,terminal,capacitance_F_per_m\n{closure},{cond},{terminal},{c:e}\n"
        ),
        OutputFormat::Table => format!(
            "{closure} {cond} capacitance, terminal {terminal}: {:.4} nF/mm\n",
            c * NF_PER_MM
        ),
    })
}

pub fn beam_static(
    section: &Section,
    closure: ClosureModel,
    length: f64,
    voltages: &[f64],
    sensing: Option<(f64, f64)>,
    format: OutputFormat,
) -> Result<String> {
    let beam = Beam::from_section(section, closure, length, Boundary::Cantilever)?;
    let state = free_actuation_state(&beam.constitutive, voltages)?;
    let tip = cantilever_tip_deflection(&beam, voltages)?;
    let charge = sensing.map(|(e, k)| (e, k, sensor_charge(&beam, e, k)));
    Ok(match format {
        OutputFormat::Json => {
            let sens = charge
                .as_ref()
                .map(|(e, k, q)| json!({ "eps": e, "kappa_per_m": k, "charge_C_per_m": q }));
            to_json(json!({
                "schema_version": SCHEMA_VERSION,
                "command": "beam-static",
                "model": closure.as_str(),
                "length_m": length,
                "voltages_V": voltages,
                "free_eps": state.eps,
                "free_kappa_per_m": state.kappa,
                "tip_deflection_m": tip,
                "sensing": sens,
            }))
        }
        OutputFormat::Csv => {
            let mut s = String::from("quantity,terminal,value_si,unit\n");
            writeln!(s, "free_eps,,{:e},1", state.eps).unwrap();
            writeln!(s, "free_kappa,,{:e},1/m", state.kappa).unwrap();
            writeln!(s, "tip_deflection,,{tip:e},m").unwrap();
            if let Some((_, _, q)) = &charge {
                for (t, v) in q.iter().enumerate() {
                    writeln!(s, "charge,{t},{v:e},C/m").unwrap();
                }
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            writeln!(
                s,
                "Cantilever, {closure} closure, L = {:.3} mm",
                length * MM
            )
            .unwrap();
            writeln!(s, "  free axial strain     {:.6e}", state.eps).unwrap();
            writeln!(s, "  free curvature        {:.6e} 1/m", state.kappa).unwrap();
            writeln!(s, "  tip deflection        {:.6e} mm", tip * MM).unwrap();
            if let Some((e, k, q)) = &charge {
                writeln!(
                    s,
                    "  sensing at eps = {e:e}, kappa = {k:e} 1/m (short circuit)"
                )
                .unwrap();
                for (t, v) in q.iter().enumerate() {
                    writeln!(s, "    terminal {t} charge  {v:.6e} C/m").unwrap();
                }
            }
            s
        }
    })
}

pub fn beam_modal(
    section: &Section,
    closure: ClosureModel,
    length: f64,
    boundary: Boundary,
    modes: usize,
    circuit: Circuit,
    format: OutputFormat,
) -> Result<String> {
    let beam = Beam::from_section(section, closure, length, boundary)?;
    let freqs = modal_frequencies(&beam, circuit, modes)?;
    let k2 = (1..=modes)
        .map(|m| coupling_factor(&beam, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(match format {
        OutputFormat::Json => {
            let rows: Vec<Value> = freqs
                .iter()
                .zip(&k2)
                .enumerate()
                .map(|(i, (f, k))| json!({ "mode": i + 1, "frequency_Hz": f, "coupling_k2": k }))
                .collect();
            to_json(json!({
                "schema_version": SCHEMA_VERSION,
                "command": "beam-modal",
                "model": closure.as_str(),
                "boundary": boundary.to_string(),
                "circuit": circuit.to_string(),
                "length_m": length,
                "mass_per_length_kg_per_m": beam.mass_per_length,
                "modes": rows,
            }))
        }
        OutputFormat::Csv => {
            let mut s = String::from("mode,frequency_Hz,coupling_k2\n");
            for (i, (f, k)) in freqs.iter().zip(&k2).enumerate() {
                writeln!(s, "{},{f:e},{k:e}", i + 1).unwrap();
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            writeln!(
                s,
                "{boundary} beam, {closure} closure, {circuit} circuit, L = {:.3} mm",
                length * MM
            )
            .unwrap();
            writeln!(s, "{:>6}{:>16}{:>14}", "mode", "f (Hz)", "k^2").unwrap();
            for (i, (f, k)) in freqs.iter().zip(&k2).enumerate() {
                writeln!(s, "{:>6}{f:>16.4}{k:>14.6}", i + 1).unwrap();
            }
            s
        }
    })
}
