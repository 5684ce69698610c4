#![allow(dead_code)]

use std::path::PathBuf;

use piezolam::materials::{MaterialDb, PlaneMaterial, EPS0};
use piezolam::section::{build_section, Layer, LayupSpec, Poling, Section, Wiring};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn shipped(name: &str) -> Section {
    let spec = LayupSpec::from_path(&data_path(&format!("{name}.json"))).unwrap();
    build_section(&spec, &MaterialDb::builtin()).unwrap()
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

pub fn random_elastic(rng: &mut impl Rng) -> PlaneMaterial {
    let q11 = log_uniform(rng, 5e9, 300e9);
    let q22 = q11 * log_uniform(rng, 0.3, 3.0);
    let nu = rng.random_range(0.0..0.45);
    PlaneMaterial {
        q11,
        q12: nu * (q11 * q22).sqrt(),
        q22,
        e31: 0.0,
        e32: 0.0,
        eps33: EPS0 * log_uniform(rng, 1.0, 10.0),
        density: rng.random_range(1000.0..9000.0),
    }
}

pub fn random_piezo(rng: &mut impl Rng) -> PlaneMaterial {
    let base = random_elastic(rng);
    PlaneMaterial {
        e31: rng.random_range(-30.0..-1.0),
        e32: rng.random_range(-30.0..5.0),
        eps33: EPS0 * log_uniform(rng, 100.0, 4000.0),
        ..base
    }
}

pub fn random_layer(rng: &mut impl Rng, thickness: f64) -> Layer {
    if rng.random_bool(0.5) {
        let poling = if rng.random_bool(0.5) {
            Poling::Up
        } else {
            Poling::Down
        };
        Layer::new(
            "piezo",
            random_piezo(rng),
            thickness,
            poling,
            rng.random_bool(0.8),
        )
    } else {
        Layer::new(
            "elastic",
            random_elastic(rng),
            thickness,
            Poling::None,
            false,
        )
    }
}

/// 1 to 6 layers, thickness ratios log-uniform over 0.05 to 20, random wiring.
pub fn random_section(rng: &mut impl Rng) -> Section {
    let count = rng.random_range(1..=6);
    let base = log_uniform(rng, 1e-4, 2e-3);
    let layers = (0..count)
        .map(|_| {
            let h = base * log_uniform(rng, 0.05, 20.0);
            random_layer(rng, h)
        })
        .collect();
    let wiring = if rng.random_bool(0.5) {
        Wiring::Parallel
    } else {
        Wiring::Independent
    };
    Section::new(log_uniform(rng, 1e-3, 5e-2), wiring, layers).unwrap()
}

pub fn random_voltages(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-200.0..200.0)).collect()
}

/// Frobenius distance after scaling rows and columns by the reference diagonal.
pub fn scaled_distance(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    let d: Vec<f64> = (0..b.nrows()).map(|i| b[(i, i)].abs().sqrt()).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            let s = d[i] * d[j];
            num += ((a[(i, j)] - b[(i, j)]) / s).powi(2);
            den += (b[(i, j)] / s).powi(2);
        }
    }
    (num / den).sqrt()
}
