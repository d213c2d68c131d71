//! The Rindler/Unruh pipeline: squeezing parameter, thermal occupation and
//! the geometric number distribution seen by a uniformly accelerated
//! observer restricted to one wedge.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Acceleration/frequency pair (natural units, both strictly positive).
#[derive(Debug, Clone, Copy)]
pub struct UnruhParams {
    pub acceleration: f64,
    pub frequency: f64,
}

impl UnruhParams {
    pub fn new(acceleration: f64, frequency: f64) -> Result<Self> {
        if acceleration <= 0.0 {
            return Err(Error::invalid(
                "acceleration",
                format!("must be positive, got {acceleration}"),
            ));
        }
        if frequency <= 0.0 {
            return Err(Error::invalid(
                "frequency",
                format!("must be positive, got {frequency}"),
            ));
        }
        Ok(UnruhParams {
            acceleration,
            frequency,
        })
    }
}

/// Two-mode squeezing parameter of the Minkowski vacuum across the Rindler
/// wedges: `r = atanh(exp(-pi omega / a))`.
pub fn unruh_squeezing(params: &UnruhParams) -> f64 {
    let x = (-PI * params.frequency / params.acceleration).exp();
    x.atanh()
}

/// Mean occupation of a Rindler mode: `1 / (exp(2 pi omega / a) - 1)`,
/// a Bose-Einstein distribution at the Unruh temperature `a / 2 pi`.
pub fn unruh_mean_number(params: &UnruhParams) -> f64 {
    1.0 / (2.0 * PI * params.frequency / params.acceleration).exp_m1()
}

/// Unruh temperature `T_U = a / 2 pi`.
pub fn unruh_temperature(acceleration: f64) -> f64 {
    acceleration / (2.0 * PI)
}

/// Number distribution of the reduced (single-wedge) thermal state:
/// `p_n = tanh^(2n) r / cosh^2 r` for `n = 0 ..= n_max`.
///
/// The truncated sum satisfies `sum p_n = 1 - tanh^(2(n_max+1)) r`.
pub fn rindler_number_distribution(r: f64, n_max: usize) -> Vec<f64> {
    let t2 = r.tanh().powi(2);
    let c2 = r.cosh().powi(2);
    let mut p = Vec::with_capacity(n_max + 1);
    let mut tn = 1.0;
    for _ in 0..=n_max {
        p.push(tn / c2);
        tn *= t2;
    }
    p
}
