#![allow(dead_code)]

use hemifill::measure::{Atom, CircularMeasure};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_atomic(rng: &mut ChaCha8Rng, n: usize) -> CircularMeasure<f64> {
    let tau = std::f64::consts::TAU;
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let atoms = raw
        .into_iter()
        .map(|m| Atom {
            pos: rng.gen_range(0.0..tau),
            mass: m / total,
        })
        .collect();
    CircularMeasure::from_atoms(atoms).unwrap()
}

pub fn random_density(rng: &mut ChaCha8Rng, grid: usize, origin: f64) -> CircularMeasure<f64> {
    let masses: Vec<f64> = (0..grid).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = masses.iter().sum();
    let masses = masses.into_iter().map(|m| m / total).collect();
    CircularMeasure::from_cell_masses(origin, masses, vec![]).unwrap()
}

pub fn random_mixed(rng: &mut ChaCha8Rng, grid: usize, n_atoms: usize) -> CircularMeasure<f64> {
    let tau = std::f64::consts::TAU;
    let split = rng.gen_range(0.1..0.9);
    let masses: Vec<f64> = (0..grid).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = masses.iter().sum();
    let masses = masses.into_iter().map(|m| split * m / total).collect();
    let raw: Vec<f64> = (0..n_atoms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let at: f64 = raw.iter().sum();
    let atoms = raw
        .into_iter()
        .map(|m| Atom {
            pos: rng.gen_range(0.0..tau),
            mass: (1.0 - split) * m / at,
        })
        .collect();
    CircularMeasure::from_cell_masses(0.0, masses, atoms).unwrap()
}
