//! Entanglement harvesting: the detector integrals `A` and `X`, harvesting
//! region boundaries and region maps.
//!
//! Detectors carry Gaussian switching `chi(tau) = exp(-tau^2 / 2 sigma^2)`
//! truncated at `+-6 sigma`; the leading-order entanglement condition is
//! `|X| > A` with
//! `A = lambda^2 int int chi chi' e^{-i Omega (tau - tau')} D+(x(tau); x(tau'))`
//! over the full plane along one trajectory, and
//! `X = -lambda^2 int_{tau' <= tau} chi chi' e^{i Omega (tau + tau')}
//!      [D+(x_a; x_b') + D+(x_b; x_a')]`.
//! The Wightman regulator runs over a fixed epsilon sequence and the limit
//! is Richardson-extrapolated to zero.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;

/// Detector arrangement / field state selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarvestCase {
    /// Comoving detectors in the de Sitter conformal vacuum (boundary only).
    ComovingDeSitter,
    /// Inertial detectors in a thermal Minkowski bath (boundary only).
    ThermalMinkowski,
    /// Static detectors in the Minkowski vacuum.
    MinkowskiVacuum,
    /// Uniformly accelerated detectors, same direction.
    ParallelAccel,
    /// Uniformly accelerated detectors, opposite directions.
    AntiParallelAccel,
}

/// Spacetime event `(t, x)`.
#[derive(Debug, Clone, Copy)]
pub struct Event {
    pub t: f64,
    pub x: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorLabel {
    A,
    B,
}

/// Harvesting setup. `rate` is the expansion rate or proper acceleration
/// kappa; `separation` is the distance of closest approach `L`.
#[derive(Debug, Clone)]
pub struct HarvestConfiguration {
    pub case: HarvestCase,
    pub rate: f64,
    pub separation: f64,
    pub gap: f64,
    pub sigma: f64,
    pub coupling: f64,
    /// Wightman regulator sequence (absolute), extrapolated to zero.
    pub regulators: Vec<f64>,
    pub quad_rel_tol: f64,
}

impl HarvestConfiguration {
    pub fn new(case: HarvestCase, rate: f64, separation: f64, gap: f64, sigma: f64) -> Result<Self> {
        let cfg = HarvestConfiguration {
            case,
            rate,
            separation,
            gap,
            sigma,
            coupling: 1.0,
            regulators: vec![1e-2 * sigma, 5e-3 * sigma, 2.5e-3 * sigma],
            quad_rel_tol: 1e-6,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rate", self.rate),
            ("separation", self.separation),
            ("gap", self.gap),
            ("sigma", self.sigma),
        ] {
            if v <= 0.0 {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if self.regulators.is_empty() {
            return Err(Error::invalid("regulators", "at least one regulator required"));
        }
        Ok(())
    }

    /// The Gaussian window should be narrow against the separation; this is
    /// a documented check, not a hard precondition.
    pub fn scale_warnings(&self) -> Vec<String> {
        if self.sigma > 0.5 * self.separation {
            vec![format!(
                "sigma = {} is not small against the separation L = {}",
                self.sigma, self.separation
            )]
        } else {
            Vec::new()
        }
    }

    fn window(&self, tau: f64) -> f64 {
        (-tau * tau / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Regulated Minkowski-vacuum Wightman function
/// `D+ = -1 / (4 pi^2 [(t - t' - i eps)^2 - |x - x'|^2])`.
pub fn wightman_minkowski(x: &Event, x_prime: &Event, eps: f64) -> Complex64 {
    let dt = Complex64::new(x.t - x_prime.t, -eps);
    let dx2 = (0..3).map(|i| (x.x[i] - x_prime.x[i]).powi(2)).sum::<f64>();
    -1.0 / (4.0 * PI * PI * (dt * dt - dx2))
}

/// Worldline of one detector at proper time `tau`.
///
/// Accelerated trajectories are the hyperbolae
/// `x_a = (1/kappa)[cosh(kappa tau) - 1] + L/2`,
/// `x_b = +-(1/kappa)[cosh(kappa tau) - 1] - L/2` (plus: parallel, minus:
/// anti-parallel), both with `t = sinh(kappa tau)/kappa`; closest approach
/// at `tau = 0` with separation `L`.
pub fn trajectory(
    case: HarvestCase,
    rate: f64,
    separation: f64,
    which: DetectorLabel,
    tau: f64,
) -> Result<Event> {
    let half = separation / 2.0;
    match case {
        HarvestCase::MinkowskiVacuum => Ok(Event {
            t: tau,
            x: [
                match which {
                    DetectorLabel::A => half,
                    DetectorLabel::B => -half,
                },
                0.0,
                0.0,
            ],
        }),
        HarvestCase::ParallelAccel | HarvestCase::AntiParallelAccel => {
            let t = (rate * tau).sinh() / rate;
            let reach = ((rate * tau).cosh() - 1.0) / rate;
            let x = match (case, which) {
                (_, DetectorLabel::A) => reach + half,
                (HarvestCase::ParallelAccel, DetectorLabel::B) => reach - half,
                (HarvestCase::AntiParallelAccel, DetectorLabel::B) => -reach - half,
                _ => unreachable!(),
            };
            Ok(Event { t, x: [x, 0.0, 0.0] })
        }
        HarvestCase::ComovingDeSitter | HarvestCase::ThermalMinkowski => Err(Error::invalid(
            "case",
            "no numeric trajectory: de Sitter / thermal cases are served by closed-form boundaries",
        )),
    }
}

/// Value with regulator-extrapolation diagnostics.
#[derive(Debug, Clone)]
pub struct RegulatedValue {
    /// Richardson extrapolation of the regulator sequence to zero.
    pub value: Complex64,
    /// Values at each regulator, in the configured order.
    pub per_regulator: Vec<Complex64>,
    /// True when successive regulator differences shrink.
    pub monotone: bool,
}

fn richardson(values: &[Complex64]) -> (Complex64, bool) {
    match values.len() {
        0 => (Complex64::new(0.0, 0.0), false),
        1 => (values[0], true),
        2 => (2.0 * values[1] - values[0], true),
        _ => {
            let n = values.len();
            let (i0, i1, i2) = (values[n - 3], values[n - 2], values[n - 1]);
            let r1 = 2.0 * i1 - i0;
            let r2 = 2.0 * i2 - i1;
            let extrap = (4.0 * r2 - r1) / 3.0;
            let monotone = (i2 - i1).norm() <= (i1 - i0).norm() + 1e-30;
            (extrap, monotone)
        }
    }
}

/// Double quadrature over the rotated window square in `(u, v) = (tau -
/// tau', tau + tau')` coordinates: outer adaptive in `u` (the light-cone
/// direction), inner adaptive in `v`.
fn double_quadrature<F>(
    cfg: &HarvestConfiguration,
    u_range: (f64, f64),
    f: F,
    rel_tol: f64,
) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let reach = 6.0 * cfg.sigma;
    let inner_tol = rel_tol * 0.1;
    let outer = quad::integrate(
        |u: f64| -> Complex64 {
            let v_max = 2.0 * reach - u.abs();
            if v_max <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            quad::integrate(
                |v: f64| f(u, v),
                -v_max,
                v_max,
                inner_tol,
                1e-300,
                4,
                4000,
            )
            .map(|r| r.value)
            .unwrap_or_else(|_| Complex64::new(f64::NAN, f64::NAN))
        },
        u_range.0,
        u_range.1,
        rel_tol,
        1e-300,
        16,
        8000,
    )?;
    if !outer.value.re.is_finite() || !outer.value.im.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            a: u_range.0,
            b: u_range.1,
            estimate: f64::NAN,
            tolerance: rel_tol,
        });
    }
    Ok(outer.value)
}

/// Single-detector excitation term `A` (real, non-negative) with regulator
/// extrapolation. By symmetry the same value applies to either detector of
/// a (anti-)parallel pair.
pub fn compute_a(cfg: &HarvestConfiguration) -> Result<RegulatedValue> {
    cfg.validate()?;
    let reach = 6.0 * cfg.sigma;
    let lambda2 = cfg.coupling * cfg.coupling;
    let per: Result<Vec<Complex64>> = cfg
        .regulators
        .iter()
        .map(|&eps| {
            let f = |u: f64, v: f64| -> Complex64 {
                let tau = 0.5 * (v + u);
                let tau_p = 0.5 * (v - u);
                let xa = trajectory(cfg.case, cfg.rate, cfg.separation, DetectorLabel::A, tau)
                    .expect("numeric case");
                let xa_p = trajectory(cfg.case, cfg.rate, cfg.separation, DetectorLabel::A, tau_p)
                    .expect("numeric case");
                let d = wightman_minkowski(&xa, &xa_p, eps);
                let window = cfg.window(tau) * cfg.window(tau_p);
                let phase = Complex64::new(0.0, -cfg.gap * u).exp();
                d * window * phase
            };
            // Jacobian d tau d tau' = du dv / 2.
            Ok(double_quadrature(cfg, (-2.0 * reach, 2.0 * reach), f, cfg.quad_rel_tol)? * 0.5
                * lambda2)
        })
        .collect();
    let per = per?;
    let (value, monotone) = richardson(&per);
    Ok(RegulatedValue {
        value,
        per_regulator: per,
        monotone,
    })
}

/// Two-detector coherence term `X` with regulator extrapolation.
pub fn compute_x(cfg: &HarvestConfiguration) -> Result<RegulatedValue> {
    cfg.validate()?;
    let reach = 6.0 * cfg.sigma;
    let lambda2 = cfg.coupling * cfg.coupling;
    let per: Result<Vec<Complex64>> = cfg
        .regulators
        .iter()
        .map(|&eps| {
            let f = |u: f64, v: f64| -> Complex64 {
                let tau = 0.5 * (v + u);
                let tau_p = 0.5 * (v - u);
                let xa = trajectory(cfg.case, cfg.rate, cfg.separation, DetectorLabel::A, tau)
                    .expect("numeric case");
                let xb = trajectory(cfg.case, cfg.rate, cfg.separation, DetectorLabel::B, tau)
                    .expect("numeric case");
                let xa_p = trajectory(cfg.case, cfg.rate, cfg.separation, DetectorLabel::A, tau_p)
                    .expect("numeric case");
                let xb_p = trajectory(cfg.case, cfg.rate, cfg.separation, DetectorLabel::B, tau_p)
                    .expect("numeric case");
                let d = wightman_minkowski(&xa, &xb_p, eps) + wightman_minkowski(&xb, &xa_p, eps);
                let window = cfg.window(tau) * cfg.window(tau_p);
                let phase = Complex64::new(0.0, cfg.gap * v).exp();
                d * window * phase
            };
            // Time ordering tau' <= tau restricts to u >= 0.
            Ok(double_quadrature(cfg, (0.0, 2.0 * reach), f, cfg.quad_rel_tol)? * (-0.5) * lambda2)
        })
        .collect();
    let per = per?;
    let (value, monotone) = richardson(&per);
    Ok(RegulatedValue {
        value,
        per_regulator: per,
        monotone,
    })
}

/// Closed-form harvesting condition in the scaled coordinates
/// `(L kappa, kappa sigma^2 Omega)`.
///
/// de Sitter comoving and parallel acceleration share
/// `L kappa / 2 < sin(kappa sigma^2 Omega)`; the thermal bath obeys
/// `(L kappa / 2) tanh(L kappa / 2) < sin^2(kappa sigma^2 Omega)`; the
/// Minkowski vacuum is the `kappa -> 0` limit `L/2 < sigma^2 Omega`.
pub fn region_boundary(case: HarvestCase, l_kappa: f64, kappa_sigma2_omega: f64) -> Result<bool> {
    if l_kappa < 0.0 || kappa_sigma2_omega < 0.0 {
        return Err(Error::invalid(
            "point",
            "region coordinates must lie in the positive quadrant",
        ));
    }
    let x = 0.5 * l_kappa;
    let y = kappa_sigma2_omega;
    match case {
        HarvestCase::ComovingDeSitter | HarvestCase::ParallelAccel => Ok(x < y.sin()),
        HarvestCase::ThermalMinkowski => Ok(x * x.tanh() < y.sin().powi(2)),
        HarvestCase::MinkowskiVacuum => Ok(x < y),
        HarvestCase::AntiParallelAccel => Err(Error::invalid(
            "case",
            "anti-parallel acceleration has no closed-form boundary; use the numeric map",
        )),
    }
}

/// Resonance distance `L_crit = (2/kappa)(1 - cos(kappa sigma^2 Omega))`,
/// in `[0, 4/kappa]`.
pub fn critical_distance(rate: f64, sigma: f64, gap: f64) -> Result<f64> {
    for (name, v) in [("rate", rate), ("sigma", sigma), ("gap", gap)] {
        if v <= 0.0 {
            return Err(Error::invalid(name, format!("must be positive, got {v}")));
        }
    }
    Ok(2.0 / rate * (1.0 - (rate * sigma * sigma * gap).cos()))
}

/// One cell of a harvesting region map.
#[derive(Debug, Clone)]
pub struct RegionCell {
    pub l_kappa: f64,
    pub kappa_sigma2_omega: f64,
    pub entangled: Option<bool>,
    /// Leading-order negativity estimate `max(0, |X| - A)` (numeric fill).
    pub negativity_estimate: Option<f64>,
    pub a: Option<f64>,
    pub x: Option<Complex64>,
    /// Set when the regulator extrapolation was non-monotone.
    pub flagged: bool,
    pub error: Option<String>,
}

/// Closed-form region map over the scaled-coordinate grid.
pub fn region_map(
    case: HarvestCase,
    l_kappa_grid: &[f64],
    ks2o_grid: &[f64],
) -> Result<Vec<RegionCell>> {
    let mut cells = Vec::with_capacity(l_kappa_grid.len() * ks2o_grid.len());
    for &lk in l_kappa_grid {
        for &ko in ks2o_grid {
            let entangled = region_boundary(case, lk, ko)?;
            cells.push(RegionCell {
                l_kappa: lk,
                kappa_sigma2_omega: ko,
                entangled: Some(entangled),
                negativity_estimate: None,
                a: None,
                x: None,
                flagged: false,
                error: None,
            });
        }
    }
    Ok(cells)
}

/// Numeric region map: each cell classified by `|X| > A` from the
/// quadrature pipeline. Only trajectory-backed cases are supported.
/// Per-cell failures are flagged in place; the map is still returned.
pub fn region_map_numeric(
    cfg: &HarvestConfiguration,
    l_kappa_grid: &[f64],
    ks2o_grid: &[f64],
) -> Result<Vec<RegionCell>> {
    if matches!(
        cfg.case,
        HarvestCase::ComovingDeSitter | HarvestCase::ThermalMinkowski
    ) {
        return Err(Error::invalid(
            "case",
            "numeric maps need a trajectory-backed case (static or accelerated)",
        ));
    }
    cfg.validate()?;
    let grid: Vec<(f64, f64)> = l_kappa_grid
        .iter()
        .flat_map(|&lk| ks2o_grid.iter().map(move |&ko| (lk, ko)))
        .collect();

    let cells: Vec<RegionCell> = grid
        .par_iter()
        .map(|&(lk, ko)| {
            let mut cell_cfg = cfg.clone();
            cell_cfg.separation = lk / cfg.rate;
            cell_cfg.gap = ko / (cfg.rate * cfg.sigma * cfg.sigma);
            let computed = compute_a(&cell_cfg).and_then(|a| Ok((a, compute_x(&cell_cfg)?)));
            match computed {
                Ok((a, x)) => {
                    let a_val = a.value.re;
                    let x_abs = x.value.norm();
                    RegionCell {
                        l_kappa: lk,
                        kappa_sigma2_omega: ko,
                        entangled: Some(x_abs > a_val),
                        negativity_estimate: Some((x_abs - a_val).max(0.0)),
                        a: Some(a_val),
                        x: Some(x.value),
                        flagged: !(a.monotone && x.monotone),
                        error: None,
                    }
                }
                Err(e) => RegionCell {
                    l_kappa: lk,
                    kappa_sigma2_omega: ko,
                    entangled: None,
                    negativity_estimate: None,
                    a: None,
                    x: None,
                    flagged: true,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(cells)
}
