//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Tolerances are pinned below.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    random_elastic, random_piezo, random_section, random_voltages, rng, scaled_distance, shipped,
};
use piezolam::beam::{
    cantilever_tip_deflection, coupling_factor, modal_frequencies, Beam, Boundary, Circuit,
};
use piezolam::cli::constitutive_from_reduce_json;
use piezolam::section::{
    capacitance_per_length, compare_closures, discretized_oracle, recover_stress_profile,
    reduce_section, CapacitanceCondition, ClosureModel, GeneralizedState, Layer, Poling, Section,
    Wiring,
};
use rand::Rng;

const NF_PER_MM: f64 = 1e6;

const C1_BAND: f64 = 0.08;
const C1_REFERENCE: f64 = 2.86;
const C1_REFERENCE_BAND: f64 = 0.05;
const C1_TARGETS: [(ClosureModel, f64); 3] = [
    (ClosureModel::ND, 2.09),
    (ClosureModel::NS, 3.62),
    (ClosureModel::NSR, 2.81),
];
const C1_RUNTIME: Duration = Duration::from_secs(1);
const C2_LAYUPS: usize = 1000;
const C2_TOL: f64 = 1e-10;
const C2_RUNTIME: Duration = Duration::from_secs(10);
const C3_LAYUPS: usize = 100;
const C3_SUBLAYERS: usize = 200;
const C3_TOL: f64 = 1e-8;
const C4_TOL: f64 = 1e-12;
const C5_TOL: f64 = 1e-12;
const C5_LAYUPS: usize = 200;
const C6_K2_TOL: f64 = 1e-12;
const C6_BIMORPH_BAND: f64 = 0.15;
const C6_BIMORPH_RATIO: f64 = 1.0;
const C6_BIMORPH_RATIO_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let section = shipped("sandwich");
    let table = compare_closures(&section, Some(C1_REFERENCE / NF_PER_MM)).unwrap();
    let elapsed = start.elapsed();

    let mut pass = true;
    let mut parts = Vec::new();
    for (model, target) in C1_TARGETS {
        let c = table.row(model).capacitance * NF_PER_MM;
        let dev = (c - target) / target;
        pass &= dev.abs() <= C1_BAND;
        parts.push(format!("{model} {c:.3} ({:+.1}%)", dev * 100.0));
    }
    let [nd, ns, nsr] = C1_TARGETS.map(|(m, _)| table.row(m).capacitance);
    let ordered = nd < nsr && nsr < ns;
    let nsr_dev = (nsr * NF_PER_MM - C1_REFERENCE) / C1_REFERENCE;
    pass &= ordered && nsr_dev.abs() <= C1_REFERENCE_BAND && elapsed < C1_RUNTIME;

    let free: Vec<String> = C1_TARGETS
        .iter()
        .map(|&(m, _)| format!("{m} {:.3}", table.row(m).capacitance_free * NF_PER_MM))
        .collect();
    println!(
        "    info: force/moment-free capacitance {} nF/mm (reported for information, see README)",
        free.join(", ")
    );
    Outcome::new(
        pass,
        format!(
            "blocked nF/mm {}; ND<NSR<NS {ordered}; NSR vs 2.86 {:+.2}%; {:.1} ms",
            parts.join(", "),
            nsr_dev * 100.0,
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    let mut nonzero = 0;
    for _ in 0..C2_LAYUPS {
        let s = random_section(&mut r);
        let state = GeneralizedState::new(
            r.random_range(-1e-3..1e-3),
            r.random_range(-1.0..1.0),
            random_voltages(&mut r, s.terminal_count()),
        );
        let p = recover_stress_profile(&s, ClosureModel::NSR, &state).unwrap();
        let h = s.thickness();
        let tmax = p.max_abs_t22();
        if tmax > 0.0 {
            nonzero += 1;
            worst = worst
                .max(p.n2.abs() / (tmax * h))
                .max(p.m2.abs() / (tmax * h * h));
        } else {
            worst = worst.max(if p.n2 == 0.0 && p.m2 == 0.0 {
                0.0
            } else {
                f64::INFINITY
            });
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst <= C2_TOL && elapsed < C2_RUNTIME,
        format!(
            "{C2_LAYUPS} layups ({nonzero} with T22 != 0), worst scaled resultant {worst:.2e} <= {C2_TOL:e}; {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..C3_LAYUPS {
        let s = random_section(&mut r);
        for c in ClosureModel::ALL {
            let analytic = reduce_section(&s, c).unwrap();
            let oracle = discretized_oracle(&s, c, C3_SUBLAYERS).unwrap();
            worst = worst.max(scaled_distance(
                &oracle.constitutive.matrix,
                &analytic.matrix,
            ));
        }
    }
    Outcome::new(
        worst <= C3_TOL,
        format!("{C3_LAYUPS} layups x 3 closures, n = {C3_SUBLAYERS}, worst distance {worst:.2e} <= {C3_TOL:e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut worst_single: f64 = 0.0;
    for i in 0..100 {
        let piezo = i % 2 == 0;
        let (material, poling) = if piezo {
            (random_piezo(&mut r), Poling::Up)
        } else {
            (random_elastic(&mut r), Poling::None)
        };
        let s = Section::new(
            r.random_range(1e-3..5e-2),
            Wiring::Parallel,
            vec![Layer::new(
                "m",
                material,
                r.random_range(1e-4..5e-3),
                poling,
                piezo,
            )],
        )
        .unwrap();
        let ns = reduce_section(&s, ClosureModel::NS).unwrap();
        let nsr = reduce_section(&s, ClosureModel::NSR).unwrap();
        worst_single = worst_single.max(scaled_distance(&nsr.matrix, &ns.matrix));
    }

    // elastic-only stacks with pure-dielectric electroded layers
    let mut worst_coupling: f64 = 0.0;
    let mut worst_cap: f64 = 0.0;
    for _ in 0..100 {
        let count = r.random_range(1..=5);
        let mut layers = Vec::new();
        let mut dielectrics = Vec::new();
        for _ in 0..count {
            let m = random_elastic(&mut r);
            let h = r.random_range(1e-4..2e-3);
            if r.random_bool(0.5) {
                dielectrics.push(m.eps33 / h);
                layers.push(Layer::new("d", m, h, Poling::Up, true));
            } else {
                layers.push(Layer::new("e", m, h, Poling::None, false));
            }
        }
        let b = r.random_range(1e-3..5e-2);
        let s = Section::new(b, Wiring::Parallel, layers).unwrap();
        for c in ClosureModel::ALL {
            let k = reduce_section(&s, c).unwrap();
            if k.terminals() == 0 {
                continue;
            }
            let scale =
                (k.extension() * k.cq()[(0, 0)]).sqrt() + (k.bending() * k.cq()[(0, 0)]).sqrt();
            worst_coupling = worst_coupling.max(k.kme().amax() / scale);
            let expected: f64 = b * dielectrics.iter().sum::<f64>();
            for cond in [CapacitanceCondition::Blocked, CapacitanceCondition::Free] {
                let cap = capacitance_per_length(&k, cond, 0).unwrap();
                worst_cap = worst_cap.max((cap - expected).abs() / expected);
            }
        }
    }
    Outcome::new(
        worst_single <= C4_TOL && worst_coupling <= C4_TOL && worst_cap <= C4_TOL,
        format!(
            "single layer NSR vs NS {worst_single:.2e}; dielectric stacks coupling {worst_coupling:.2e}, capacitance vs sum(eps33*b/h) {worst_cap:.2e} (tol {C4_TOL:e})"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut worst_sym: f64 = 0.0;
    for _ in 0..C5_LAYUPS {
        let s = random_section(&mut r);
        for c in ClosureModel::ALL {
            worst_sym = worst_sym.max(reduce_section(&s, c).unwrap().symmetry_defect());
        }
    }
    let sandwich = shipped("sandwich");
    let mut worst_dec: f64 = 0.0;
    for c in ClosureModel::ALL {
        let k = reduce_section(&sandwich, c).unwrap();
        let b = k.extension_bending().abs() / (k.extension() * k.bending()).sqrt();
        let gm = k.matrix[(0, 2)].abs().max(k.matrix[(2, 0)].abs())
            / (k.extension() * k.cq()[(0, 0)]).sqrt();
        worst_dec = worst_dec.max(b).max(gm);
    }
    Outcome::new(
        worst_sym <= C5_TOL && worst_dec <= C5_TOL,
        format!(
            "{C5_LAYUPS} layups x 3 closures, worst asymmetry {worst_sym:.2e}; sandwich |B|, |gm| scaled {worst_dec:.2e} (tol {C5_TOL:e})"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut freq_ok = true;
    let mut worst_k2: f64 = 0.0;
    let mut scaling_exact = true;
    for _ in 0..100 {
        let s = random_section(&mut r);
        if s.terminal_count() == 0 {
            continue;
        }
        let length = r.random_range(0.01..0.5);
        for c in ClosureModel::ALL {
            for bc in [Boundary::Cantilever, Boundary::SimplySupported] {
                let beam = Beam::from_section(&s, c, length, bc).unwrap();
                let short = modal_frequencies(&beam, Circuit::Short, 5).unwrap();
                let open = modal_frequencies(&beam, Circuit::Open, 5).unwrap();
                freq_ok &= open.iter().zip(&short).all(|(o, s)| o >= s);
                let k2 = coupling_factor(&beam, 1).unwrap();
                let scaled = beam
                    .with_length(length * r.random_range(0.1..10.0))
                    .unwrap();
                let k2s = coupling_factor(&scaled, 1).unwrap();
                if k2 > 0.0 {
                    worst_k2 = worst_k2.max((k2s - k2).abs() / k2);
                }
            }
            let beam = Beam::from_section(&s, c, length, Boundary::Cantilever).unwrap();
            let v = random_voltages(&mut r, s.terminal_count());
            let tip = cantilever_tip_deflection(&beam, &v).unwrap();
            for f in [2.0, 0.5, 4.0] {
                let longer = beam.with_length(length * f).unwrap();
                scaling_exact &= cantilever_tip_deflection(&longer, &v).unwrap() == tip * f * f;
            }
        }
    }

    // series bimorph: total stack h, each layer sees V/2 along its poling
    let bimorph = shipped("bimorph");
    let (length, volts) = (0.05, 100.0);
    let beam =
        Beam::from_section(&bimorph, ClosureModel::NS, length, Boundary::Cantilever).unwrap();
    let tip = cantilever_tip_deflection(&beam, &[volts / 2.0]).unwrap();
    let d31 = -3.2e-10;
    let h = bimorph.thickness();
    let classical = 1.5 * d31 * volts * length * length / (h * h);
    let ratio = tip.abs() / classical.abs();
    let bimorph_ok = (ratio - 1.0).abs() <= C6_BIMORPH_BAND
        && (ratio - C6_BIMORPH_RATIO).abs() <= C6_BIMORPH_RATIO_TOL;

    Outcome::new(
        freq_ok && worst_k2 <= C6_K2_TOL && scaling_exact && bimorph_ok,
        format!(
            "f_open >= f_short {freq_ok}; k2 L-invariance {worst_k2:.2e} <= {C6_K2_TOL:e}; tip ~ L^2 exact {scaling_exact}; \
             bimorph NS tip {:.4} mm vs classical {:.4} mm, ratio {ratio:.6}",
            tip.abs() * 1e3,
            classical.abs() * 1e3
        ),
    )
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_piezolam"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn criterion_7() -> Outcome {
    let layup = common::data_path("sandwich.json");
    let layup = layup.to_str().unwrap();

    let (code, text) = cli(&[
        "compare",
        "--layup",
        layup,
        "--reference-capacitance",
        "2.86nF/mm",
        "--output",
        "json",
    ]);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    let table = compare_closures(&shipped("sandwich"), Some(2.86e-6)).unwrap();
    let numbers_match = code == 0
        && report["rows"].as_array().unwrap().iter().all(|row| {
            let model: ClosureModel = row["model"].as_str().unwrap().parse().unwrap();
            row["capacitance_blocked_F_per_m"].as_f64() == Some(table.row(model).capacitance)
        });

    let (_, table_text) = cli(&[
        "compare",
        "--layup",
        layup,
        "--reference-capacitance",
        "2.86nF/mm",
    ]);
    let cap_line = table_text
        .lines()
        .find(|l| l.starts_with("Capacitance per unit line"))
        .unwrap_or_default()
        .to_string();
    let table_ok =
        cap_line.contains("2.010") && cap_line.contains("3.599") && cap_line.contains("2.772");

    let mut deterministic = true;
    let mut round_trip = true;
    for model in ["nd", "ns", "nsr"] {
        let args = [
            "reduce", "--layup", layup, "--model", model, "--output", "json",
        ];
        let (c1, first) = cli(&args);
        let (c2, second) = cli(&args);
        deterministic &= c1 == 0 && c2 == 0 && first == second;
        for format in ["table", "csv"] {
            let args = [
                "reduce", "--layup", layup, "--model", model, "--output", format,
            ];
            deterministic &= cli(&args).1 == cli(&args).1;
        }
        let back = constitutive_from_reduce_json(&first).unwrap();
        let direct = reduce_section(&shipped("sandwich"), model.parse().unwrap()).unwrap();
        round_trip &= back.closure == direct.closure
            && back
                .matrix
                .iter()
                .zip(direct.matrix.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits());
    }
    Outcome::new(
        numbers_match && table_ok && deterministic && round_trip,
        format!(
            "compare json matches library {numbers_match}; table row '{}'; byte-identical {deterministic}; bit-exact round trip {round_trip}",
            cap_line.split_whitespace().skip(4).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("sandwich capacitance per unit line", criterion_1),
        ("NSR resultant annihilation", criterion_2),
        ("oracle equivalence", criterion_3),
        ("degeneracy", criterion_4),
        ("symmetry and reciprocity", criterion_5),
        ("beam-level consistency", criterion_6),
        ("CLI determinism and round trip", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
