//! Perturbative Unruh-DeWitt calculations.
//!
//! Two pipelines share this module:
//!
//! * the early-universe "echo": excitation probabilities of a comoving
//!   detector on GR versus effective-LQC backgrounds, and the late-time
//!   averaged relative-difference estimator;
//! * entanglement harvesting: the one- and two-detector integrals `A` and
//!   `X` over the regulated Minkowski Wightman function, closed-form
//!   harvesting boundaries, and region maps.
//!
//! Planck units: `l_p = 1` throughout.

mod echo;
mod harvest;
mod switching;

pub use echo::*;
pub use harvest::*;
pub use switching::*;

use crate::error::{Error, Result};
use crate::special::hyp2f1;
use statrs::function::gamma::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosmologyKind {
    Gr,
    Lqc,
}

/// Spatially flat FLRW background sourced by a massless scalar, on a
/// three-torus of side `torus_length`, in either classical (GR) or
/// effective loop-quantum-cosmology (LQC) dynamics.
///
/// GR: `a(t) = (pi_phi^2)^(1/6) t^(1/3) / L` (big bang at `t = 0`);
/// LQC: `a(t) = (l / L) (pi_phi^2)^(1/6) [1 + (t / l^3)^2]^(1/6)`
/// (bounce at `t = 0`), where `l` is the quantisation length. GR is the
/// pointwise `l -> 0` limit of LQC.
#[derive(Debug, Clone, Copy)]
pub struct CosmologyBackground {
    pub kind: CosmologyKind,
    pub pi_phi: f64,
    /// LQC quantisation length `l` (0 for GR).
    pub quantum_length: f64,
    pub torus_length: f64,
}

impl CosmologyBackground {
    pub fn gr(pi_phi: f64, torus_length: f64) -> Result<Self> {
        if pi_phi <= 0.0 {
            return Err(Error::invalid("pi_phi", "field momentum must be positive"));
        }
        if torus_length <= 0.0 {
            return Err(Error::invalid("torus_length", "must be positive"));
        }
        Ok(CosmologyBackground {
            kind: CosmologyKind::Gr,
            pi_phi,
            quantum_length: 0.0,
            torus_length,
        })
    }

    pub fn lqc(pi_phi: f64, quantum_length: f64, torus_length: f64) -> Result<Self> {
        if pi_phi <= 0.0 {
            return Err(Error::invalid("pi_phi", "field momentum must be positive"));
        }
        if quantum_length <= 0.0 {
            return Err(Error::invalid(
                "quantum_length",
                "LQC quantisation length must be positive",
            ));
        }
        if torus_length <= 0.0 {
            return Err(Error::invalid("torus_length", "must be positive"));
        }
        Ok(CosmologyBackground {
            kind: CosmologyKind::Lqc,
            pi_phi,
            quantum_length,
            torus_length,
        })
    }

    /// GR partner of this background (same `pi_phi` and torus).
    pub fn gr_partner(&self) -> CosmologyBackground {
        CosmologyBackground {
            kind: CosmologyKind::Gr,
            pi_phi: self.pi_phi,
            quantum_length: 0.0,
            torus_length: self.torus_length,
        }
    }

    /// Scale factor `a(t)`; GR requires `t > 0`.
    pub fn scale_factor(&self, t: f64) -> Result<f64> {
        let amp = self.pi_phi.powf(1.0 / 3.0) / self.torus_length;
        match self.kind {
            CosmologyKind::Gr => {
                if t <= 0.0 {
                    return Err(Error::invalid(
                        "t",
                        format!("GR scale factor undefined at t = {t} <= 0"),
                    ));
                }
                Ok(amp * t.powf(1.0 / 3.0))
            }
            CosmologyKind::Lqc => {
                let l = self.quantum_length;
                let x = t / (l * l * l);
                Ok(amp * l * ((x * x).ln_1p() / 6.0).exp())
            }
        }
    }

    /// Conformal time `eta(t) = int_0^t dt'/a(t')`; GR requires `t > 0`.
    pub fn conformal_time(&self, t: f64) -> Result<f64> {
        let amp = self.torus_length / self.pi_phi.powf(1.0 / 3.0);
        match self.kind {
            CosmologyKind::Gr => {
                if t <= 0.0 {
                    return Err(Error::invalid(
                        "t",
                        format!("GR conformal time undefined at t = {t} <= 0"),
                    ));
                }
                Ok(1.5 * amp * t.powf(2.0 / 3.0))
            }
            CosmologyKind::Lqc => {
                let l = self.quantum_length;
                if t == 0.0 {
                    return Ok(0.0);
                }
                let x = t / (l * l * l);
                let f = hyp2f1(1.0 / 6.0, 0.5, 1.5, -x * x)?;
                Ok(amp / l * t * f)
            }
        }
    }

    /// Late-time conformal offset `beta` with
    /// `eta_LQC(t) -> eta_GR(t) + beta` for `t >> l^3`:
    /// `beta = l^2 L sqrt(pi) Gamma(-1/3) / (2 pi_phi^(1/3) Gamma(1/6))`.
    pub fn eta_offset(&self) -> f64 {
        match self.kind {
            CosmologyKind::Gr => 0.0,
            CosmologyKind::Lqc => {
                let l = self.quantum_length;
                l * l * self.torus_length * std::f64::consts::PI.sqrt() * gamma(-1.0 / 3.0)
                    / (2.0 * self.pi_phi.powf(1.0 / 3.0) * gamma(1.0 / 6.0))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gr_rejects_nonpositive_time() {
        let bg = CosmologyBackground::gr(1000.0, 1.0).unwrap();
        assert!(bg.scale_factor(0.0).is_err());
        assert!(bg.conformal_time(-1.0).is_err());
    }

    #[test]
    fn lqc_eta_at_bounce_is_zero() {
        let bg = CosmologyBackground::lqc(1000.0, 1.0, 1.0).unwrap();
        assert_eq!(bg.conformal_time(0.0).unwrap(), 0.0);
    }

    #[test]
    fn gr_is_small_l_limit_of_lqc() {
        let gr = CosmologyBackground::gr(1000.0, 1.0).unwrap();
        let lqc = CosmologyBackground::lqc(1000.0, 1e-3, 1.0).unwrap();
        for &t in &[0.1, 1.0, 10.0] {
            let ratio = lqc.scale_factor(t).unwrap() / gr.scale_factor(t).unwrap();
            assert!((ratio - 1.0).abs() <= 1e-5, "t = {t}: ratio = {ratio}");
        }
    }

    #[test]
    fn conformal_time_derivative_is_inverse_scale_factor() {
        let bg = CosmologyBackground::lqc(1000.0, 0.7, 1.0).unwrap();
        for &t in &[0.05f64, 0.4, 3.0, 25.0] {
            let h = 1e-5 * t.max(0.1);
            let deriv = (bg.conformal_time(t + h).unwrap() - bg.conformal_time(t - h).unwrap())
                / (2.0 * h);
            assert_relative_eq!(
                deriv,
                1.0 / bg.scale_factor(t).unwrap(),
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn eta_offset_reached_at_late_times() {
        // eta_LQC(t) - eta_GR(t) -> beta for t >> l^3.
        let l = 1.0;
        let lqc = CosmologyBackground::lqc(1000.0, l, 1.0).unwrap();
        let gr = lqc.gr_partner();
        let t = 50.0 * l * l * l;
        let diff = lqc.conformal_time(t).unwrap() - gr.conformal_time(t).unwrap();
        let beta = lqc.eta_offset();
        assert!(beta < 0.0, "offset should be negative");
        assert!(
            (diff - beta).abs() <= 0.01 * beta.abs(),
            "diff = {diff}, beta = {beta}"
        );
    }
}
