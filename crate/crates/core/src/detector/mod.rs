//! Oscillator detectors coupled to a Dirichlet cavity field.
//!
//! The Hamiltonian is the X-X model
//! `H = sum_n omega_n a_n^dag a_n + sum_j (dtau_j/dt) [ Omega_j a_dj^dag a_dj
//!      + sum_n lambda_j(t) v_n(x_j(t)) (a_dj + a_dj^dag)(a_n + a_n^dag) ]`
//! with Dirichlet mode functions `v_n(x) = sin(n pi x / L)` and frequencies
//! `omega_n = n pi / L` (mode normalisation is absorbed into the coupling
//! amplitude). Everything is assembled into a [`QuadraticGenerator`] and
//! evolved nonperturbatively through the symplectic flow.

mod farming;

pub use farming::*;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{
    evolve_covariance, evolve_propagator, CovarianceState, PhaseSpaceLayout, QuadraticGenerator,
    SymplecticPropagator,
};

/// Dirichlet cavity with a fixed mode truncation.
#[derive(Debug, Clone, Copy)]
pub struct CavitySpec {
    length: f64,
    n_modes: usize,
}

impl CavitySpec {
    pub fn new(length: f64, n_modes: usize) -> Result<Self> {
        if length <= 0.0 {
            return Err(Error::invalid(
                "length",
                format!("cavity length must be positive, got {length}"),
            ));
        }
        if n_modes == 0 {
            return Err(Error::invalid("n_modes", "at least one field mode required"));
        }
        Ok(CavitySpec { length, n_modes })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// `omega_n = n pi / L` for the 0-based mode index (mode 0 is `n = 1`).
    pub fn mode_frequency(&self, mode: usize) -> f64 {
        (mode as f64 + 1.0) * std::f64::consts::PI / self.length
    }

    /// `v_n(x) = sin(n pi x / L)`.
    pub fn mode_function(&self, mode: usize, x: f64) -> f64 {
        ((mode as f64 + 1.0) * std::f64::consts::PI * x / self.length).sin()
    }
}

/// One oscillator detector: gap, worldline, proper-time rate and windowed
/// coupling amplitude `lambda(t)`.
#[derive(Clone)]
pub struct DetectorSpec {
    pub gap: f64,
    position: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    proper_time_rate: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    coupling: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl DetectorSpec {
    pub fn new(
        gap: f64,
        position: impl Fn(f64) -> f64 + Send + Sync + 'static,
        proper_time_rate: impl Fn(f64) -> f64 + Send + Sync + 'static,
        coupling: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DetectorSpec {
            gap,
            position: Arc::new(position),
            proper_time_rate: Arc::new(proper_time_rate),
            coupling: Arc::new(coupling),
        }
    }

    /// Detector at rest (`dtau/dt = 1`) at a fixed position.
    pub fn stationary(
        gap: f64,
        x: f64,
        coupling: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DetectorSpec::new(gap, move |_| x, |_| 1.0, coupling)
    }

    pub fn position(&self, t: f64) -> f64 {
        (self.position)(t)
    }

    pub fn proper_time_rate(&self, t: f64) -> f64 {
        (self.proper_time_rate)(t)
    }

    pub fn coupling(&self, t: f64) -> f64 {
        (self.coupling)(t)
    }
}

/// Layout for `detectors.len()` detectors plus the cavity modes.
pub fn cavity_layout(cavity: &CavitySpec, n_detectors: usize) -> PhaseSpaceLayout {
    PhaseSpaceLayout::new(n_detectors, cavity.n_modes()).expect("nonempty layout")
}

/// Assemble the ladder-coefficient generator for detectors in a cavity
/// whose mode frequencies may carry explicit time dependence.
///
/// `w(t)` carries the free frequencies and the detector-mode couplings
/// `c_nj = (dtau_j/dt) lambda_j(t) v_n(x_j(t))`; `g(t)` carries the
/// counter-rotating partners, split symmetrically as `c_nj / 2` so that
/// `g_dn + g_nd` matches the single `a_d^dag a_n^dag` coefficient.
pub fn build_generator_with_frequency(
    cavity: &CavitySpec,
    detectors: &[DetectorSpec],
    frequency: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
) -> QuadraticGenerator {
    let layout = cavity_layout(cavity, detectors.len());
    let n_det = detectors.len();
    let n_field = cavity.n_modes();
    let dim = n_det + n_field;
    let cavity = *cavity;
    let frequency = Arc::new(frequency);

    let dets_w = detectors.to_vec();
    let freq_w = Arc::clone(&frequency);
    let w_of_t = move |t: f64| -> DMatrix<Complex64> {
        let mut w = DMatrix::zeros(dim, dim);
        for n in 0..n_field {
            w[(n_det + n, n_det + n)] = Complex64::new(freq_w(n, t), 0.0);
        }
        for (j, det) in dets_w.iter().enumerate() {
            let rate = det.proper_time_rate(t);
            w[(j, j)] = Complex64::new(rate * det.gap, 0.0);
            let lambda = det.coupling(t);
            if lambda != 0.0 {
                let x = det.position(t);
                for n in 0..n_field {
                    let c = rate * lambda * cavity.mode_function(n, x);
                    w[(j, n_det + n)] = Complex64::new(c, 0.0);
                    w[(n_det + n, j)] = Complex64::new(c, 0.0);
                }
            }
        }
        w
    };

    let dets_g = detectors.to_vec();
    let g_of_t = move |t: f64| -> DMatrix<Complex64> {
        let mut g = DMatrix::zeros(dim, dim);
        for (j, det) in dets_g.iter().enumerate() {
            let rate = det.proper_time_rate(t);
            let lambda = det.coupling(t);
            if lambda != 0.0 {
                let x = det.position(t);
                for n in 0..n_field {
                    let c = 0.5 * rate * lambda * cavity.mode_function(n, x);
                    g[(j, n_det + n)] = Complex64::new(c, 0.0);
                    g[(n_det + n, j)] = Complex64::new(c, 0.0);
                }
            }
        }
        g
    };

    QuadraticGenerator::new(layout, w_of_t, g_of_t)
}

/// Generator for a static cavity.
pub fn build_generator(cavity: &CavitySpec, detectors: &[DetectorSpec]) -> QuadraticGenerator {
    let cav = *cavity;
    build_generator_with_frequency(cavity, detectors, move |n, _t| cav.mode_frequency(n))
}

/// Check that every detector stays inside the cavity over `t_span`,
/// sampling the trajectories densely.
pub fn validate_positions(
    cavity: &CavitySpec,
    detectors: &[DetectorSpec],
    t_span: (f64, f64),
) -> Result<()> {
    const SAMPLES: usize = 512;
    for det in detectors {
        for i in 0..=SAMPLES {
            let t = t_span.0 + (t_span.1 - t_span.0) * i as f64 / SAMPLES as f64;
            let x = det.position(t);
            if !(0.0..=cavity.length()).contains(&x) {
                return Err(Error::DetectorOutsideCavity {
                    x,
                    length: cavity.length(),
                    t,
                });
            }
        }
    }
    Ok(())
}

/// Nonperturbative evolution of detectors + cavity over `t_span`.
pub fn simulate(
    cavity: &CavitySpec,
    detectors: &[DetectorSpec],
    initial: &CovarianceState,
    t_span: (f64, f64),
    rel_tol: f64,
) -> Result<CovarianceState> {
    let layout = cavity_layout(cavity, detectors.len());
    if initial.layout() != layout {
        return Err(Error::DimensionMismatch {
            context: "simulate",
            expected: layout.dim(),
            actual: initial.layout().dim(),
        });
    }
    validate_positions(cavity, detectors, t_span)?;
    let gen = build_generator(cavity, detectors);
    let prop = evolve_propagator(&gen, t_span, rel_tol)?;
    evolve_covariance(initial, &prop)
}

/// Exact free propagator (all couplings off) for stationary detectors:
/// a block rotation by `freq_i * dt` in each `(q_i, p_i)` plane.
pub(crate) fn free_rotation(
    layout: PhaseSpaceLayout,
    frequencies: &[f64],
    dt: f64,
) -> SymplecticPropagator {
    let n = layout.n_modes();
    debug_assert_eq!(frequencies.len(), n);
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for (i, &f) in frequencies.iter().enumerate() {
        let (sin, cos) = (f * dt).sin_cos();
        s[(layout.q_index(i), layout.q_index(i))] = cos;
        s[(layout.q_index(i), layout.p_index(i))] = sin;
        s[(layout.p_index(i), layout.q_index(i))] = -sin;
        s[(layout.p_index(i), layout.p_index(i))] = cos;
    }
    SymplecticPropagator::from_matrix(layout, s, dt).expect("rotations are symplectic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{f_sym_from_ladder, mean_excitation};
    use approx::assert_relative_eq;

    #[test]
    fn decoupled_generator_is_diagonal() {
        let cavity = CavitySpec::new(1.0, 3).unwrap();
        let det = DetectorSpec::stationary(2.0, 0.3, |_| 0.0);
        let gen = build_generator(&cavity, &[det]);
        let w = gen.w(0.0);
        let g = gen.g(0.0);
        assert_eq!(g.map(|z| z.norm()).max(), 0.0);
        assert_relative_eq!(w[(0, 0)].re, 2.0, epsilon = 1e-14);
        for n in 0..3 {
            assert_relative_eq!(
                w[(1 + n, 1 + n)].re,
                cavity.mode_frequency(n),
                epsilon = 1e-14
            );
        }
        assert_relative_eq!(w.map(|z| z.im.abs()).max(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn detector_at_node_decouples_from_that_mode() {
        // x = L/2 is the node of mode n = 2 (0-based index 1).
        let cavity = CavitySpec::new(1.0, 3).unwrap();
        let det = DetectorSpec::stationary(1.0, 0.5, |_| 0.7);
        let gen = build_generator(&cavity, &[det]);
        let w = gen.w(0.0);
        assert!(w[(0, 2)].norm() < 1e-14, "node coupling must vanish");
        assert!(w[(0, 1)].norm() > 0.1);
    }

    #[test]
    fn generator_matches_quadrature_expansion() {
        // One detector, one mode, constant lambda: x^T F x must reproduce
        // H = (gap/2)(q_d^2+p_d^2) + (omega/2)(q^2+p^2) + 2 c q_d q
        // (up to the ground-state constant), i.e. F_sym has 2c in the
        // q_d-q corner and the free frequencies on the diagonal.
        let cavity = CavitySpec::new(1.0, 1).unwrap();
        let lambda = 0.13;
        let x_d = 0.27;
        let det = DetectorSpec::stationary(1.9, x_d, move |_| lambda);
        let gen = build_generator(&cavity, &[det]);
        let c = lambda * cavity.mode_function(0, x_d);
        let fs = f_sym_from_ladder(&gen.w(0.0), &gen.g(0.0)).unwrap();
        let omega0 = cavity.mode_frequency(0);
        let expect = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.9, 2.0 * c, 0.0, 0.0,
                2.0 * c, omega0, 0.0, 0.0,
                0.0, 0.0, 1.9, 0.0,
                0.0, 0.0, 0.0, omega0,
            ],
        );
        assert_relative_eq!(fs, expect, epsilon = 1e-12);
    }

    #[test]
    fn decoupled_vacuum_stays_vacuum() {
        let cavity = CavitySpec::new(1.0, 2).unwrap();
        let det = DetectorSpec::stationary(1.0, 0.3, |_| 0.0);
        let layout = cavity_layout(&cavity, 1);
        let vac = CovarianceState::vacuum(layout);
        let out = simulate(&cavity, &[det], &vac, (0.0, 2.0), 1e-10).unwrap();
        assert!((out.sigma() - vac.sigma()).amax() < 1e-8);
    }

    #[test]
    fn decoupled_thermal_detector_unchanged() {
        let cavity = CavitySpec::new(1.0, 2).unwrap();
        let det = DetectorSpec::stationary(1.0, 0.3, |_| 0.0);
        let layout = cavity_layout(&cavity, 1);
        let initial = CovarianceState::thermal(layout, &[1.0, 0.0, 0.0]).unwrap();
        let out = simulate(&cavity, &[det], &initial, (0.0, 3.0), 1e-10).unwrap();
        assert_relative_eq!(
            mean_excitation(&out, 0).unwrap(),
            1.0,
            epsilon = 1e-8
        );
    }

    #[test]
    fn detector_outside_cavity_rejected() {
        let cavity = CavitySpec::new(1.0, 2).unwrap();
        let det = DetectorSpec::stationary(1.0, 1.5, |_| 0.1);
        let layout = cavity_layout(&cavity, 1);
        let vac = CovarianceState::vacuum(layout);
        assert!(matches!(
            simulate(&cavity, &[det], &vac, (0.0, 1.0), 1e-10),
            Err(Error::DetectorOutsideCavity { .. })
        ));
    }

    #[test]
    fn free_rotation_is_exact_propagator() {
        let cavity = CavitySpec::new(1.0, 2).unwrap();
        let det = DetectorSpec::stationary(1.3, 0.3, |_| 0.0);
        let gen = build_generator(&cavity, &[det]);
        let dt = 0.7;
        let prop = evolve_propagator(&gen, (0.0, dt), 1e-12).unwrap();
        let layout = cavity_layout(&cavity, 1);
        let rot = free_rotation(
            layout,
            &[1.3, cavity.mode_frequency(0), cavity.mode_frequency(1)],
            dt,
        );
        assert!((prop.matrix() - rot.matrix()).amax() < 1e-9);
    }
}
