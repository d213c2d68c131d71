//! Adaptive Gauss-Kronrod quadrature.
//!
//! Globally adaptive G7/K15 with a worst-interval priority queue. Used for
//! the oscillatory mode-amplitude integrals and the regulated Wightman
//! double integrals; the caller bounds subdivision depth through
//! `max_intervals` when the integrand's local phase derivative is known.

use num_complex::Complex64;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Scalar-like values a quadrature rule can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, a: f64) -> Self;
    fn abs(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, a: f64) -> Self {
        self * a
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, a: f64) -> Self {
        self * a
    }
    fn abs(self) -> f64 {
        self.norm()
    }
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// together with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7/K15 panel: returns (kronrod value, error estimate).
fn kronrod_panel<T, F>(f: &mut F, a: f64, b: f64) -> (T, f64)
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = f_center.scale(WGK[7]);
    let mut gauss = f_center.scale(WG[3]);
    let mut resabs = f_center.abs() * WGK[7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        let sum = f1.add(f2);
        kronrod = kronrod.add(sum.scale(WGK[j]));
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss.add(sum.scale(WG[j / 2]));
        }
    }

    let value = kronrod.scale(half);
    let raw_err = kronrod.add(gauss.scale(-1.0)).abs() * half.abs();
    // Standard QUADPACK-style rescaling keeps the estimate meaningful when
    // the integrand nearly cancels.
    let resabs = resabs * half.abs();
    let err = if resabs > 0.0 && raw_err > 0.0 {
        let scale = (200.0 * raw_err / resabs).powf(1.5);
        if scale < 1.0 {
            resabs * scale
        } else {
            raw_err
        }
    } else {
        raw_err
    };
    (value, err)
}

struct Segment<T> {
    err: f64,
    a: f64,
    b: f64,
    value: T,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptively integrate `f` over `[a, b]` to the requested tolerances.
///
/// `initial_splits` seeds the segment list with a uniform partition, which
/// matters for strongly oscillatory integrands where a single panel would
/// alias the phase.
pub fn integrate<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    initial_splits: usize,
    max_intervals: usize,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let splits = initial_splits.max(1);
    let mut heap: BinaryHeap<Segment<T>> = BinaryHeap::new();
    let mut evals = 0usize;
    let h = (b - a) / splits as f64;
    for i in 0..splits {
        let x0 = a + i as f64 * h;
        let x1 = if i + 1 == splits { b } else { x0 + h };
        let (v, e) = kronrod_panel(&mut f, x0, x1);
        evals += 15;
        heap.push(Segment {
            err: e,
            a: x0,
            b: x1,
            value: v,
        });
    }

    loop {
        let mut total = T::zero();
        let mut total_err = 0.0;
        for seg in heap.iter() {
            total = total.add(seg.value);
            total_err += seg.err;
        }
        let tol = abs_tol.max(rel_tol * total.abs());
        if total_err <= tol {
            return Ok(QuadResult {
                value: total,
                error: total_err,
                evaluations: evals,
            });
        }
        if heap.len() >= max_intervals {
            return Err(Error::QuadratureNonConvergence {
                a,
                b,
                estimate: total_err,
                tolerance: tol,
            });
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at machine resolution; accept what we have.
            heap.push(worst);
            let mut total = T::zero();
            let mut total_err = 0.0;
            for seg in heap.iter() {
                total = total.add(seg.value);
                total_err += seg.err;
            }
            return Ok(QuadResult {
                value: total,
                error: total_err,
                evaluations: evals,
            });
        }
        let (v1, e1) = kronrod_panel(&mut f, worst.a, mid);
        let (v2, e2) = kronrod_panel(&mut f, mid, worst.b);
        evals += 30;
        heap.push(Segment {
            err: e1,
            a: worst.a,
            b: mid,
            value: v1,
        });
        heap.push(Segment {
            err: e2,
            a: mid,
            b: worst.b,
            value: v2,
        });
    }
}

/// Convenience wrapper with sensible defaults for smooth integrands.
pub fn integrate_auto<T, F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate(f, a, b, rel_tol, 1e-300, 1, 4000)
}
