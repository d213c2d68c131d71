//! Adaptive embedded Runge-Kutta integration.
//!
//! Dormand-Prince 5(4) with elementary step control, generic over the
//! state type so the same driver serves real symplectic matrices and
//! complex mode amplitudes. The systems integrated here are linear and
//! non-stiff, so an explicit pair is appropriate.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// State vector abstraction for the integrator.
pub trait OdeState: Clone {
    /// `self += a * other`.
    fn axpy_in_place(&mut self, a: f64, other: &Self);
    /// `self *= a`.
    fn scale_in_place(&mut self, a: f64);
    /// Scaled max-norm of the error `err` relative to `self` and `other`:
    /// `max_i |err_i| / (atol + rtol * max(|self_i|, |other_i|))`.
    fn error_ratio(&self, other: &Self, err: &Self, atol: f64, rtol: f64) -> f64;
}

impl OdeState for DMatrix<f64> {
    fn axpy_in_place(&mut self, a: f64, other: &Self) {
        self.zip_apply(other, |s, o| *s += a * o);
    }

    fn scale_in_place(&mut self, a: f64) {
        self.apply(|s| *s *= a);
    }

    fn error_ratio(&self, other: &Self, err: &Self, atol: f64, rtol: f64) -> f64 {
        let mut worst = 0.0_f64;
        for ((&y0, &y1), &e) in self.iter().zip(other.iter()).zip(err.iter()) {
            let scale = atol + rtol * y0.abs().max(y1.abs());
            worst = worst.max(e.abs() / scale);
        }
        worst
    }
}

impl OdeState for Vec<Complex64> {
    fn axpy_in_place(&mut self, a: f64, other: &Self) {
        for (s, o) in self.iter_mut().zip(other.iter()) {
            *s += a * o;
        }
    }

    fn scale_in_place(&mut self, a: f64) {
        for s in self.iter_mut() {
            *s *= a;
        }
    }

    fn error_ratio(&self, other: &Self, err: &Self, atol: f64, rtol: f64) -> f64 {
        let mut worst = 0.0_f64;
        for ((y0, y1), e) in self.iter().zip(other.iter()).zip(err.iter()) {
            let scale = atol + rtol * y0.norm().max(y1.norm());
            worst = worst.max(e.norm() / scale);
        }
        worst
    }
}

/// Integration options.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

// Dormand-Prince RK5(4)7M coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights coincide with the last A row (FSAL pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<S, F>(mut f: F, t0: f64, t1: f64, y0: S, opts: &OdeOptions) -> Result<S>
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    if t1 == t0 {
        return Ok(y0);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    // Conservative initial guess; the controller corrects it within a few steps.
    let mut h = (span / 100.0).min(1e-2) * dir;

    let mut steps = 0usize;
    loop {
        if (t - t1) * dir >= 0.0 {
            return Ok(y);
        }
        if steps >= opts.max_steps {
            return Err(Error::StepSizeUnderflow {
                t,
                detail: "maximum step count exceeded",
            });
        }
        if h.abs() < f64::EPSILON * t.abs().max(1.0) * 4.0 {
            return Err(Error::StepSizeUnderflow {
                t,
                detail: "step size below machine resolution (stiff or discontinuous generator?)",
            });
        }
        let mut last = false;
        if (t + h - t1) * dir >= 0.0 {
            h = t1 - t;
            last = true;
        }

        let mut ks: Vec<S> = Vec::with_capacity(7);
        ks.push(k1.clone());
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in ks.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    ys.axpy_in_place(h * a, kj);
                }
            }
            ks.push(f(t + C[stage + 1] * h, &ys));
        }

        let mut y5 = y.clone();
        for (i, ki) in ks.iter().enumerate() {
            if B5[i] != 0.0 {
                y5.axpy_in_place(h * B5[i], ki);
            }
        }

        // err = h * sum_i (b5_i - b4_i) k_i
        let mut err = ks[0].clone();
        err.scale_in_place(h * (B5[0] - B4[0]));
        for (i, ki) in ks.iter().enumerate().skip(1) {
            let w = B5[i] - B4[i];
            if w != 0.0 {
                err.axpy_in_place(h * w, ki);
            }
        }

        let ratio = y.error_ratio(&y5, &err, opts.abs_tol, opts.rel_tol);
        steps += 1;

        if ratio <= 1.0 {
            t += h;
            y = y5;
            if last && (t - t1) * dir >= 0.0 {
                return Ok(y);
            }
            k1 = ks.pop().expect("seven stages"); // FSAL: k7 evaluated at (t+h, y5)
            let grow = if ratio > 1e-30 {
                0.9 * ratio.powf(-0.2)
            } else {
                5.0
            };
            h *= grow.clamp(0.2, 5.0);
        } else {
            let shrink = 0.9 * ratio.powf(-0.2);
            h *= shrink.clamp(0.1, 0.9);
            // k1 unchanged: retry from the same point.
        }
    }
}
