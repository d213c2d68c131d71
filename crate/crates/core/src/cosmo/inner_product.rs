//! Klein-Gordon inner product on a constant-conformal-time slice (1+1,
//! conformally flat): `(u, v) = -i int dx (u d_eta v* - v* d_eta u)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Mode data sampled on a spatial grid: values and conformal-time
/// derivatives on the same slice.
#[derive(Debug, Clone)]
pub struct SampledMode {
    pub values: Vec<Complex64>,
    pub eta_derivatives: Vec<Complex64>,
}

impl SampledMode {
    /// Plane wave `e^{i(k x - omega eta)} / sqrt(2 omega L)` sampled on a
    /// periodic box of length `len * dx` at `eta = 0`.
    pub fn plane_wave(k: f64, omega: f64, grid: &SliceGrid) -> Self {
        let norm = 1.0 / (2.0 * omega * grid.length()).sqrt();
        let mut values = Vec::with_capacity(grid.len);
        let mut derivs = Vec::with_capacity(grid.len);
        for i in 0..grid.len {
            let x = grid.x0 + i as f64 * grid.dx;
            let u = Complex64::new(0.0, k * x).exp() * norm;
            values.push(u);
            derivs.push(u * Complex64::new(0.0, -omega));
        }
        SampledMode {
            values,
            eta_derivatives: derivs,
        }
    }
}

/// Uniform spatial grid for the slice integral.
#[derive(Debug, Clone, Copy)]
pub struct SliceGrid {
    pub x0: f64,
    pub dx: f64,
    pub len: usize,
    /// Periodic grids integrate with the rectangle rule (exact for Fourier
    /// modes); open grids use the composite trapezoid rule.
    pub periodic: bool,
}

impl SliceGrid {
    pub fn length(&self) -> f64 {
        self.dx * self.len as f64
    }
}

/// Klein-Gordon inner product of two sampled modes.
///
/// Satisfies `(u, v) = (v, u)*` and `(u*, v*) = -(v, u)` to quadrature
/// accuracy; `(u, u*) = 0` for definite-frequency modes.
pub fn kg_inner_product(u: &SampledMode, v: &SampledMode, grid: &SliceGrid) -> Result<Complex64> {
    let n = grid.len;
    if u.values.len() != n
        || u.eta_derivatives.len() != n
        || v.values.len() != n
        || v.eta_derivatives.len() != n
    {
        return Err(Error::DimensionMismatch {
            context: "kg_inner_product",
            expected: n,
            actual: u.values.len().min(v.values.len()),
        });
    }
    let integrand = |i: usize| -> Complex64 {
        u.values[i] * v.eta_derivatives[i].conj() - v.values[i].conj() * u.eta_derivatives[i]
    };
    let mut acc = Complex64::new(0.0, 0.0);
    if grid.periodic {
        for i in 0..n {
            acc += integrand(i);
        }
        acc *= grid.dx;
    } else {
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += integrand(i) * w;
        }
        acc *= grid.dx;
    }
    Ok(-Complex64::new(0.0, 1.0) * acc)
}
