//! Test curves for the negativity of the Hessian and their derivative sign patterns,
//! checked with central differences. The 1/(n+1) factor of h is kept; it does not
//! change any sign.

use super::gradient;
use crate::error::{input, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

pub const FD_STEP: f64 = 1e-6;
pub const GRID: usize = 99;
/// Slack for the non-strict inequalities, which are equalities for repeated weights.
pub const CHAIN_TOL: f64 = 1e-7;

/// h(t·a) for positive weights with Σa = π/2 and t ∈ (0, 1).
pub fn gamma_curve(a: &[f64], t: f64) -> Result<Vec<f64>> {
    if a.len() < 2 || a.iter().any(|v| !(*v > 0.0)) || (a.iter().sum::<f64>() - FRAC_PI_2).abs() > 1e-12 {
        return input("weights must be positive with sum π/2");
    }
    if !(t > 0.0 && t < 1.0) {
        return input(format!("curve parameter {t} outside (0, 1)"));
    }
    let y: Vec<f64> = a.iter().map(|v| t * v).collect();
    gradient(a.len() - 1, 1.0, &y)
}

/// h((π/2 − b)t, bt, (1 − t)a) for a, b ∈ (0, π/4) and t ∈ (0, 1).
pub fn eta_curve(a: f64, b: f64, t: f64) -> Result<Vec<f64>> {
    if !(a > 0.0 && a < FRAC_PI_4 && b > 0.0 && b < FRAC_PI_4) {
        return input("curve constants must lie in (0, π/4)");
    }
    if !(t > 0.0 && t < 1.0) {
        return input(format!("curve parameter {t} outside (0, 1)"));
    }
    gradient(2, 1.0, &[(FRAC_PI_2 - b) * t, b * t, (1.0 - t) * a])
}

fn derivative(curve: impl Fn(f64) -> Result<Vec<f64>>, t: f64) -> Result<Vec<f64>> {
    let (p, m) = (curve(t + FD_STEP)?, curve(t - FD_STEP)?);
    Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect())
}

fn grid() -> impl Iterator<Item = f64> {
    (1..=GRID).map(|i| i as f64 / (GRID + 1) as f64)
}

/// Largest violation of γ′_{k+1} ≤ γ′_k and γ′_1 < 0 along the grid, for weights
/// sorted decreasingly. Non-positive means the chain holds.
pub fn gamma_violation(a: &[f64]) -> Result<f64> {
    let mut w = a.to_vec();
    w.sort_by(|x, y| y.total_cmp(x));
    let mut worst = f64::NEG_INFINITY;
    for t in grid() {
        let g = derivative(|s| gamma_curve(&w, s), t)?;
        worst = worst.max(g[0]);
        for k in 0..g.len() - 1 {
            worst = worst.max(g[k + 1] - g[k] - CHAIN_TOL);
        }
    }
    Ok(worst)
}

/// Largest violation of η′₃ > 0 and η′₁, η′₂ < 0 along the grid.
pub fn eta_violation(a: f64, b: f64) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for t in grid() {
        let g = derivative(|s| eta_curve(a, b, s), t)?;
        worst = worst.max(g[0]).max(g[1]).max(-g[2]);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixReport {
    pub tuples: usize,
    pub gamma_worst: f64,
    pub eta_worst: f64,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.gamma_worst < 0.0 && self.eta_worst < 0.0
    }
}

/// Random admissible tuples: weights for n = 1 and n = 2 and constants (a, b).
pub fn check_lemmas(seed: u64, tuples: usize) -> Result<AppendixReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gamma_worst = f64::NEG_INFINITY;
    let mut eta_worst = f64::NEG_INFINITY;
    for _ in 0..tuples {
        for d in [2, 3] {
            let w: Vec<f64> = (0..d).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            let a: Vec<f64> = w.iter().map(|v| FRAC_PI_2 * v / s).collect();
            gamma_worst = gamma_worst.max(gamma_violation(&a)?);
        }
        let a = rng.gen_range(0.01..FRAC_PI_4 - 0.01);
        let b = rng.gen_range(0.01..FRAC_PI_4 - 0.01);
        eta_worst = eta_worst.max(eta_violation(a, b)?);
    }
    Ok(AppendixReport { tuples, gamma_worst, eta_worst })
}
