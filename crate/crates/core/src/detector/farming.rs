//! Entanglement farming and the vibration-sensing response scan.
//!
//! Each farming cycle injects a fresh ground-state detector pair, evolves
//! the joint system for one cycle, records the pair's log-negativity, and
//! traces the detectors out, carrying the cavity state forward. For a
//! contracting cycle map the cavity approaches a metastable fixed point
//! and the harvested negativity converges, essentially independently of
//! the initial cavity state.

use rayon::prelude::*;

use super::{build_generator_with_frequency, cavity_layout, free_rotation, CavitySpec, DetectorSpec};
use crate::error::{Error, Result};
use crate::gaussian::{
    evolve_covariance, evolve_propagator, log_negativity_two_mode, purity, CovarianceState,
    PhaseSpaceLayout, SymplecticPropagator,
};
use crate::udw::SwitchingFunction;

/// Repeated-interaction protocol: two identical stationary detectors with
/// a shared compact coupling window inside each cycle.
#[derive(Debug, Clone)]
pub struct FarmingProtocol {
    pub detector_gap: f64,
    pub detector_positions: (f64, f64),
    pub coupling_amplitude: f64,
    /// Coupling window; must be compactly supported inside `[0, cycle]`.
    pub window: SwitchingFunction,
    pub cycle_duration: f64,
    pub max_cycles: usize,
    pub convergence_tol: f64,
    pub rel_tol: f64,
}

impl FarmingProtocol {
    fn validate(&self, cavity: &CavitySpec) -> Result<()> {
        if self.cycle_duration <= 0.0 {
            return Err(Error::invalid("cycle_duration", "must be positive"));
        }
        if self.max_cycles == 0 {
            return Err(Error::invalid("max_cycles", "at least one cycle required"));
        }
        if !self.window.is_compact() {
            return Err(Error::invalid(
                "window",
                "farming windows must be compactly supported (linear or smooth compact)",
            ));
        }
        if self.window.t_on < 0.0 || self.window.t_off > self.cycle_duration {
            return Err(Error::invalid(
                "window",
                format!(
                    "window [{}, {}] must sit inside one cycle [0, {}]",
                    self.window.t_on, self.window.t_off, self.cycle_duration
                ),
            ));
        }
        for &x in &[self.detector_positions.0, self.detector_positions.1] {
            if !(0.0..=cavity.length()).contains(&x) {
                return Err(Error::DetectorOutsideCavity {
                    x,
                    length: cavity.length(),
                    t: 0.0,
                });
            }
        }
        Ok(())
    }

    fn detectors(&self) -> Vec<DetectorSpec> {
        let window = self.window;
        let lambda = self.coupling_amplitude;
        let mk = |x: f64| {
            DetectorSpec::stationary(self.detector_gap, x, move |t| lambda * window.value(t))
        };
        vec![mk(self.detector_positions.0), mk(self.detector_positions.1)]
    }
}

/// Cavity-wall vibration: `L(t) = L + amplitude * sin(2 pi frequency t)`
/// entering the mode frequencies only.
#[derive(Debug, Clone, Copy)]
pub struct CavityPerturbation {
    pub amplitude: f64,
    pub frequency: f64,
}

/// Report of one farming run.
#[derive(Debug, Clone)]
pub struct FarmingReport {
    /// Harvested pair log-negativity per cycle.
    pub negativities: Vec<f64>,
    /// Cavity covariance after each cycle.
    pub cavity_snapshots: Vec<CovarianceState>,
    pub converged: bool,
    /// Last recorded negativity (the fixed-point value when converged).
    pub fixed_point_negativity: f64,
}

/// Propagator for one cycle starting at absolute time `t_start`.
///
/// Without a perturbation the coupling window is the only time dependence,
/// so the cycle splits into exact free rotations around an ODE solve over
/// the window support. With a perturbation the full cycle is integrated.
pub fn cycle_propagator(
    cavity: &CavitySpec,
    protocol: &FarmingProtocol,
    perturbation: Option<&CavityPerturbation>,
    t_start: f64,
) -> Result<SymplecticPropagator> {
    protocol.validate(cavity)?;
    let detectors = protocol.detectors();
    let layout = cavity_layout(cavity, 2);

    match perturbation {
        Some(p) if p.amplitude != 0.0 => {
            if p.amplitude.abs() / cavity.length() > 0.05 {
                return Err(Error::invalid(
                    "perturbation",
                    "relative wall displacement above 5% is outside the linear-response regime",
                ));
            }
            let base = *cavity;
            let pert = *p;
            let gen = build_generator_with_frequency(cavity, &detectors, move |n, t| {
                let length = base.length()
                    + pert.amplitude * (2.0 * std::f64::consts::PI * pert.frequency * t).sin();
                (n as f64 + 1.0) * std::f64::consts::PI / length
            });
            evolve_propagator(
                &gen,
                (t_start, t_start + protocol.cycle_duration),
                protocol.rel_tol,
            )
        }
        _ => {
            let frequencies: Vec<f64> = std::iter::repeat(protocol.detector_gap)
                .take(2)
                .chain((0..cavity.n_modes()).map(|n| cavity.mode_frequency(n)))
                .collect();
            let before = free_rotation(layout, &frequencies, protocol.window.t_on);
            let cav = *cavity;
            let gen = build_generator_with_frequency(cavity, &detectors, move |n, _t| {
                cav.mode_frequency(n)
            });
            let window = evolve_propagator(
                &gen,
                (protocol.window.t_on, protocol.window.t_off),
                protocol.rel_tol,
            )?;
            let after = free_rotation(
                layout,
                &frequencies,
                protocol.cycle_duration - protocol.window.t_off,
            );
            before.then(&window)?.then(&after)
        }
    }
}

/// Run the farming protocol from `initial_cavity`.
pub fn farm(
    cavity: &CavitySpec,
    protocol: &FarmingProtocol,
    initial_cavity: &CovarianceState,
) -> Result<FarmingReport> {
    farm_perturbed(cavity, protocol, initial_cavity, None)
}

/// Farming with an optional cavity-wall perturbation.
pub fn farm_perturbed(
    cavity: &CavitySpec,
    protocol: &FarmingProtocol,
    initial_cavity: &CovarianceState,
    perturbation: Option<&CavityPerturbation>,
) -> Result<FarmingReport> {
    protocol.validate(cavity)?;
    let cavity_only = PhaseSpaceLayout::new(0, cavity.n_modes())?;
    if initial_cavity.layout() != cavity_only {
        return Err(Error::DimensionMismatch {
            context: "farm",
            expected: cavity_only.dim(),
            actual: initial_cavity.layout().dim(),
        });
    }

    // The cycle map is time-invariant when unperturbed or when the
    // perturbation is commensurate with the cycle; cache the propagator.
    let commensurate = match perturbation {
        None => true,
        Some(p) => {
            p.amplitude == 0.0 || {
                let cycles = p.frequency * protocol.cycle_duration;
                (cycles - cycles.round()).abs() < 1e-9
            }
        }
    };
    let cached = if commensurate {
        Some(cycle_propagator(cavity, protocol, perturbation, 0.0)?)
    } else {
        None
    };

    let pair_ground = CovarianceState::vacuum(PhaseSpaceLayout::new(2, 0)?);
    let field_mode_indices: Vec<usize> = (2..2 + cavity.n_modes()).collect();

    let mut cavity_state = initial_cavity.clone();
    let mut negativities = Vec::new();
    let mut snapshots = Vec::new();
    let mut converged = false;

    for cycle in 0..protocol.max_cycles {
        let prop = match &cached {
            Some(p) => p.clone(),
            None => cycle_propagator(
                cavity,
                protocol,
                perturbation,
                cycle as f64 * protocol.cycle_duration,
            )?,
        };
        let joint = pair_ground.tensor(&cavity_state);
        let evolved = evolve_covariance(&joint, &prop)?;
        let pair = evolved.partial(&[0, 1])?;
        let e_n = log_negativity_two_mode(&pair)?;
        cavity_state = evolved.partial(&field_mode_indices)?;

        negativities.push(e_n);
        snapshots.push(cavity_state.clone());

        if cycle >= 1 && (e_n - negativities[cycle - 1]).abs() < protocol.convergence_tol {
            converged = true;
            break;
        }
    }

    let fixed_point_negativity = *negativities.last().expect("at least one cycle");
    Ok(FarmingReport {
        negativities,
        cavity_snapshots: snapshots,
        converged,
        fixed_point_negativity,
    })
}

/// One grid point of the vibration response scan.
#[derive(Debug, Clone)]
pub struct SeismoRow {
    pub amplitude: f64,
    pub frequency: f64,
    /// Change of the fixed-point negativity against the unperturbed run.
    pub delta_negativity: Option<f64>,
    pub converged: bool,
    pub error: Option<String>,
}

/// Rerun farming over a grid of wall-vibration amplitudes and frequencies
/// and report the change in fixed-point negativity per point.
///
/// Integration failures are reported per grid point, not raised.
pub fn seismograph_scan(
    cavity: &CavitySpec,
    protocol: &FarmingProtocol,
    amplitudes: &[f64],
    frequencies: &[f64],
) -> Result<Vec<SeismoRow>> {
    let vacuum = CovarianceState::vacuum(PhaseSpaceLayout::new(0, cavity.n_modes())?);
    let baseline = farm(cavity, protocol, &vacuum)?;

    let grid: Vec<(f64, f64)> = amplitudes
        .iter()
        .flat_map(|&a| frequencies.iter().map(move |&f| (a, f)))
        .collect();

    let rows: Vec<SeismoRow> = grid
        .par_iter()
        .map(|&(amplitude, frequency)| {
            if amplitude == 0.0 {
                // Identical generator: the response is exactly zero.
                return SeismoRow {
                    amplitude,
                    frequency,
                    delta_negativity: Some(0.0),
                    converged: baseline.converged,
                    error: None,
                };
            }
            let pert = CavityPerturbation {
                amplitude,
                frequency,
            };
            match farm_perturbed(cavity, protocol, &vacuum, Some(&pert)) {
                Ok(report) => SeismoRow {
                    amplitude,
                    frequency,
                    delta_negativity: Some(
                        report.fixed_point_negativity - baseline.fixed_point_negativity,
                    ),
                    converged: report.converged,
                    error: None,
                },
                Err(e) => SeismoRow {
                    amplitude,
                    frequency,
                    delta_negativity: None,
                    converged: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(rows)
}

/// Grid scan over `(gap, cycle duration, coupling)` maximising the
/// fixed-point negativity; used to locate farming working points.
pub fn scan_working_point(
    cavity: &CavitySpec,
    base: &FarmingProtocol,
    gaps: &[f64],
    cycles: &[f64],
    couplings: &[f64],
) -> Result<(FarmingProtocol, f64)> {
    let vacuum = CovarianceState::vacuum(PhaseSpaceLayout::new(0, cavity.n_modes())?);
    let grid: Vec<FarmingProtocol> = gaps
        .iter()
        .flat_map(|&g| {
            cycles.iter().flat_map(move |&c| {
                couplings.iter().map(move |&l| (g, c, l))
            })
        })
        .map(|(gap, cycle, lambda)| {
            let mut p = base.clone();
            p.detector_gap = gap;
            p.cycle_duration = cycle;
            p.coupling_amplitude = lambda;
            p
        })
        .collect();

    let scored: Vec<(usize, f64)> = grid
        .par_iter()
        .enumerate()
        .filter_map(|(i, proto)| match farm(cavity, proto, &vacuum) {
            Ok(rep) if rep.converged => Some((i, rep.fixed_point_negativity)),
            _ => None,
        })
        .collect();

    let best = scored
        .into_iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite negativities"))
        .ok_or_else(|| Error::invalid("scan", "no grid point converged"))?;
    Ok((grid[best.0].clone(), best.1))
}

/// Purity of the cavity reduction, exposed for protocol diagnostics.
pub fn cavity_purity(report: &FarmingReport) -> Vec<f64> {
    report.cavity_snapshots.iter().map(purity).collect()
}
