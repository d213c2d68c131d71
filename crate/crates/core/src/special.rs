//! Special functions: the Gauss hypergeometric function 2F1.
//!
//! Evaluation strategy by argument region (real parameters, real z < 1):
//!
//! * `|z| <= 0.5` — defining power series;
//! * `-8 < z < -0.5` — Pfaff transformation `z -> z/(z-1)`, which maps the
//!   argument into `(1/3, 8/9)` where the series still converges quickly;
//! * `z <= -8` — the `z -> 1/z` connection formula, required because the
//!   conformal-time evaluations push `z = -(t/l^3)^2` to magnitudes of
//!   1e20 and beyond, far outside the reach of series or Pfaff forms;
//! * `0.5 < z < 1` — the `z -> 1-z` connection formula.
//!
//! All connection formulas assume the generic (non-integer-difference)
//! parameter branch, which holds for every family used in this crate.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

const SERIES_EPS: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.abs() <= SERIES_EPS * sum.abs().max(1e-300) {
            return Ok(sum);
        }
    }
    Err(Error::SpecialFunction(format!(
        "2F1 series did not converge for a={a}, b={b}, c={c}, z={z}"
    )))
}

/// Gauss hypergeometric function 2F1(a, b; c; z) for real arguments, z < 1.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::SpecialFunction(format!(
            "2F1 undefined for non-positive integer c = {c}"
        )));
    }
    if z >= 1.0 {
        return Err(Error::SpecialFunction(format!(
            "2F1 argument z = {z} outside supported region z < 1"
        )));
    }
    // Polynomial cases terminate for any z.
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return hyp2f1_series(a, b, c, z);
    }

    if z.abs() <= 0.5 {
        hyp2f1_series(a, b, c, z)
    } else if z < -8.0 {
        hyp2f1_large_negative(a, b, c, z)
    } else if z < 0.0 {
        // Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)).
        let w = z / (z - 1.0);
        Ok((1.0 - z).powf(-a) * hyp2f1_series(a, c - b, c, w)?)
    } else {
        hyp2f1_near_one(a, b, c, z)
    }
}

fn hyp2f1_large_negative(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let ba = b - a;
    if (ba - ba.round()).abs() < 1e-8 {
        return Err(Error::SpecialFunction(format!(
            "2F1 1/z connection needs non-integer b - a (got {ba})"
        )));
    }
    let w = 1.0 / z;
    let term_a =
        gamma(c) * gamma(ba) / (gamma(b) * gamma(c - a)) * (-z).powf(-a)
            * hyp2f1_series(a, 1.0 - c + a, 1.0 - ba, w)?;
    let term_b =
        gamma(c) * gamma(-ba) / (gamma(a) * gamma(c - b)) * (-z).powf(-b)
            * hyp2f1_series(b, 1.0 - c + b, 1.0 + ba, w)?;
    Ok(term_a + term_b)
}

fn hyp2f1_near_one(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let cab = c - a - b;
    if (cab - cab.round()).abs() < 1e-8 {
        return Err(Error::SpecialFunction(format!(
            "2F1 1-z connection needs non-integer c - a - b (got {cab})"
        )));
    }
    let w = 1.0 - z;
    let term1 = gamma(c) * gamma(cab) / (gamma(c - a) * gamma(c - b))
        * hyp2f1_series(a, b, 1.0 - cab, w)?;
    let term2 = gamma(c) * gamma(-cab) / (gamma(a) * gamma(b))
        * w.powf(cab)
        * hyp2f1_series(c - a, c - b, 1.0 + cab, w)?;
    Ok(term1 + term2)
}
