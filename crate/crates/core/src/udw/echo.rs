//! Early-universe echo: comoving-detector excitation probabilities on GR
//! and LQC backgrounds, and the late-time averaged relative difference.
//!
//! The detector couples to the conformal vacuum of a massless conformal
//! scalar on the torus; one mode's contribution is
//! `I_n = int dt chi(t) / (a(t) sqrt(2 omega_n L^3))
//!        e^{-2 pi i n.x0 / L} e^{i (Omega t + omega_n eta(t))}`
//! with `omega_n = 2 pi |n| / L`, summed over lattice shells `0 < |n| <=
//! n_max`. The excitation probability for the protocol ending at time `T'`
//! uses the switching window re-terminated at `T'`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use super::{CosmologyBackground, CosmologyKind, SwitchingFunction};
use crate::error::{Error, Result};
use crate::quad;

/// Echo-detector configuration (Planck units).
#[derive(Debug, Clone)]
pub struct EchoConfig {
    /// Detector gap Omega.
    pub gap: f64,
    /// Coupling strength lambda.
    pub coupling: f64,
    /// Comoving position in `[0, L)^3`.
    pub position: [f64; 3],
    /// Switch-on time (after the bounce / bang).
    pub t_on: f64,
    /// Matching time: LQC and GR dynamics agree beyond it.
    pub t_match: f64,
    /// Start of the late-time estimator window.
    pub t_late: f64,
    /// End of the protocol and of the estimator window.
    pub t_end: f64,
    /// Lattice shell cutoff `|n| <= n_max`.
    pub n_max: u32,
    /// Averaging resolution (the coarse-graining time).
    pub resolution: f64,
    /// Relative tolerance of the mode-amplitude quadrature.
    pub quad_rel_tol: f64,
}

impl EchoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gap <= 0.0 {
            return Err(Error::invalid("gap", "detector gap must be positive"));
        }
        if self.n_max == 0 {
            return Err(Error::invalid("n_max", "at least one lattice shell required"));
        }
        if self.resolution <= 0.0 {
            return Err(Error::invalid("resolution", "averaging resolution must be positive"));
        }
        if !(self.t_on < self.t_match && self.t_match < self.t_late && self.t_late < self.t_end) {
            return Err(Error::invalid(
                "times",
                format!(
                    "need t_on < t_match < t_late < t_end, got {} / {} / {} / {}",
                    self.t_on, self.t_match, self.t_late, self.t_end
                ),
            ));
        }
        if self.t_on <= 0.0 {
            return Err(Error::invalid("t_on", "switch-on must be after the bang/bounce"));
        }
        if self.t_late - self.resolution <= self.t_on {
            return Err(Error::invalid(
                "resolution",
                "averaging window reaches before the switch-on time",
            ));
        }
        Ok(())
    }

    /// Scale-separation checks that are documented rather than enforced:
    /// a sub-Planckian gap `Omega << 1/l^3` and a resolution `>> l^3`.
    pub fn scale_warnings(&self, bg: &CosmologyBackground) -> Vec<String> {
        let mut warnings = Vec::new();
        if bg.kind == CosmologyKind::Lqc {
            let l3 = bg.quantum_length.powi(3);
            if self.gap * l3 > 0.1 {
                warnings.push(format!(
                    "gap {} is not sub-Planckian against 1/l^3 = {}",
                    self.gap,
                    1.0 / l3
                ));
            }
            if self.resolution < 3.0 * l3 {
                warnings.push(format!(
                    "resolution {} is not large against l^3 = {l3}",
                    self.resolution
                ));
            }
        }
        warnings
    }
}

/// Lattice shells `(|n|^2, multiplicity)` for `0 < |n| <= n_max`.
pub fn lattice_shells(n_max: u32) -> Vec<(u64, u64)> {
    let n = n_max as i64;
    let n2_max = n * n;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for nx in -n..=n {
        for ny in -n..=n {
            for nz in -n..=n {
                let n2 = nx * nx + ny * ny + nz * nz;
                if n2 > 0 && n2 <= n2_max {
                    *counts.entry(n2 as u64).or_insert(0) += 1;
                }
            }
        }
    }
    counts.into_iter().collect()
}

/// `|I|` contribution of a single angular frequency `omega = 2 pi sqrt(n^2) / L`,
/// without the unit-modulus position phase.
fn amplitude_for_omega(
    bg: &CosmologyBackground,
    sw: &SwitchingFunction,
    gap: f64,
    omega: f64,
    t_range: (f64, f64),
    rel_tol: f64,
) -> Result<Complex64> {
    let l3 = bg.torus_length.powi(3);
    let norm = 1.0 / (2.0 * omega * l3).sqrt();
    let mut background_error: Option<Error> = None;
    let integrand = |t: f64| -> Complex64 {
        let (a, eta) = match (bg.scale_factor(t), bg.conformal_time(t)) {
            (Ok(a), Ok(eta)) => (a, eta),
            (Err(e), _) | (_, Err(e)) => {
                background_error.get_or_insert(e);
                return Complex64::new(0.0, 0.0);
            }
        };
        let phase = Complex64::new(0.0, gap * t + omega * eta).exp();
        phase * (sw.value(t) * norm / a)
    };
    // Seed the panel list against phase aliasing: the local phase velocity
    // is Omega + omega_n d(eta)/dt.
    let eta_span = bg.conformal_time(t_range.1)? - bg.conformal_time(t_range.0)?;
    let total_phase = gap * (t_range.1 - t_range.0) + omega * eta_span;
    let splits = ((total_phase / std::f64::consts::PI).ceil() as usize + 2).min(4096);
    let result = quad::integrate(
        integrand,
        t_range.0,
        t_range.1,
        rel_tol,
        1e-13,
        splits,
        100_000,
    )?;
    if let Some(e) = background_error {
        return Err(e);
    }
    Ok(result.value)
}

/// Mode amplitude for lattice vector `n` (phase included), integrated over
/// the window of `sw` up to the protocol end `cfg.t_end`.
pub fn mode_amplitude(
    cfg: &EchoConfig,
    bg: &CosmologyBackground,
    sw: &SwitchingFunction,
    n: [i64; 3],
) -> Result<Complex64> {
    cfg.validate()?;
    let n2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if n2 == 0 {
        return Err(Error::invalid("n", "zero mode excluded"));
    }
    let l = bg.torus_length;
    let omega = 2.0 * std::f64::consts::PI * (n2 as f64).sqrt() / l;
    let dot = n[0] as f64 * cfg.position[0] + n[1] as f64 * cfg.position[1]
        + n[2] as f64 * cfg.position[2];
    let spatial_phase = Complex64::new(0.0, -2.0 * std::f64::consts::PI * dot / l).exp();
    let value = amplitude_for_omega(
        bg,
        sw,
        cfg.gap,
        omega,
        (cfg.t_on, cfg.t_end),
        cfg.quad_rel_tol,
    )?;
    Ok(spatial_phase * value)
}

/// Excitation probability and its truncation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct EchoProbability {
    pub value: f64,
    /// Contribution of the outermost shell band `(n_max - 1, n_max]`
    /// relative to the total: a proxy for the truncation tail.
    pub tail_ratio: f64,
    /// Set when the tail proxy exceeds 5%.
    pub flagged: bool,
}

/// `P_e = lambda^2 sum_n |I_n|^2` over shells `0 < |n| <= n_max`, for the
/// protocol that switches off at `t_end`.
pub fn excitation_probability(
    cfg: &EchoConfig,
    bg: &CosmologyBackground,
    sw: &SwitchingFunction,
) -> Result<EchoProbability> {
    excitation_probability_at(cfg, bg, sw, cfg.t_end)
}

/// `P_e(T_0, t_prime)`: the probability for the protocol re-terminated at
/// `t_prime` (the switching window's off-time moves with the end time).
pub fn excitation_probability_at(
    cfg: &EchoConfig,
    bg: &CosmologyBackground,
    sw: &SwitchingFunction,
    t_prime: f64,
) -> Result<EchoProbability> {
    cfg.validate()?;
    if t_prime <= cfg.t_on {
        return Err(Error::invalid("t_prime", "must lie after the switch-on time"));
    }
    let sw_t = SwitchingFunction::new(sw.kind, sw.t_on, t_prime, sw.delta)?;
    let shells = lattice_shells(cfg.n_max);
    let l = bg.torus_length;

    let contributions: Result<Vec<(u64, f64)>> = shells
        .par_iter()
        .map(|&(n2, mult)| {
            let omega = 2.0 * std::f64::consts::PI * (n2 as f64).sqrt() / l;
            let amp = amplitude_for_omega(
                bg,
                &sw_t,
                cfg.gap,
                omega,
                (cfg.t_on, t_prime),
                cfg.quad_rel_tol,
            )?;
            Ok((n2, mult as f64 * amp.norm_sqr()))
        })
        .collect();
    let contributions = contributions?;

    let lambda2 = cfg.coupling * cfg.coupling;
    let total: f64 = contributions.iter().map(|&(_, c)| c).sum();
    let band_floor = ((cfg.n_max as u64 - 1) * (cfg.n_max as u64 - 1)).max(0);
    let tail: f64 = contributions
        .iter()
        .filter(|&&(n2, _)| n2 > band_floor)
        .map(|&(_, c)| c)
        .sum();
    let tail_ratio = if total > 0.0 { tail / total } else { 0.0 };
    Ok(EchoProbability {
        value: lambda2 * total,
        tail_ratio,
        flagged: tail_ratio > 0.05,
    })
}

/// `Delta P_e = P_e^LQC - P_e^GR` against the GR partner background.
pub fn delta_probability(
    cfg: &EchoConfig,
    bg_lqc: &CosmologyBackground,
    sw: &SwitchingFunction,
) -> Result<f64> {
    if bg_lqc.kind != CosmologyKind::Lqc {
        return Err(Error::invalid("bg_lqc", "LQC background required"));
    }
    let gr = bg_lqc.gr_partner();
    let p_lqc = excitation_probability(cfg, bg_lqc, sw)?;
    let p_gr = excitation_probability(cfg, &gr, sw)?;
    Ok(p_lqc.value - p_gr.value)
}

/// Result of the late-time estimator.
#[derive(Debug, Clone)]
pub struct EchoEstimate {
    /// Resolution-averaged relative difference of excitation probabilities.
    pub value: f64,
    /// Averaged GR probability over the window (denominator scale).
    pub p_gr_mean: f64,
    pub warnings: Vec<String>,
}

/// Nested late-time average
/// `E = < <Delta P_e>_resolution / <P_e^GR>_resolution >_{[t_late, t_end]}`,
/// computed by composite trapezoid quadrature on a shared protocol-end grid.
pub fn estimator(
    cfg: &EchoConfig,
    bg_lqc: &CosmologyBackground,
    sw: &SwitchingFunction,
) -> Result<EchoEstimate> {
    cfg.validate()?;
    if bg_lqc.kind != CosmologyKind::Lqc {
        return Err(Error::invalid("bg_lqc", "LQC background required"));
    }
    let gr = bg_lqc.gr_partner();

    // Shared grid of protocol end times covering [t_late - resolution, t_end];
    // the inner average spans `inner` grid steps exactly.
    const INNER: usize = 12;
    let h = cfg.resolution / INNER as f64;
    let n_steps = ((cfg.t_end - (cfg.t_late - cfg.resolution)) / h).ceil() as usize;
    let t_grid: Vec<f64> = (0..=n_steps)
        .map(|i| cfg.t_end - (n_steps - i) as f64 * h)
        .collect();

    let jobs: Vec<(usize, CosmologyKind)> = (0..t_grid.len())
        .flat_map(|i| [(i, CosmologyKind::Lqc), (i, CosmologyKind::Gr)])
        .collect();
    let probs: Result<Vec<f64>> = jobs
        .par_iter()
        .map(|&(i, kind)| {
            let bg = match kind {
                CosmologyKind::Lqc => bg_lqc,
                CosmologyKind::Gr => &gr,
            };
            Ok(excitation_probability_at(cfg, bg, sw, t_grid[i])?.value)
        })
        .collect();
    let probs = probs?;
    let p_lqc: Vec<f64> = (0..t_grid.len()).map(|i| probs[2 * i]).collect();
    let p_gr: Vec<f64> = (0..t_grid.len()).map(|i| probs[2 * i + 1]).collect();

    // Trapezoid average of p over the `INNER` steps ending at index `i`.
    let window_mean = |p: &[f64], i: usize| -> f64 {
        let lo = i - INNER;
        let mut acc = 0.5 * (p[lo] + p[i]);
        for j in lo + 1..i {
            acc += p[j];
        }
        acc / INNER as f64
    };

    // Outer trapezoid average over protocol ends in [t_late, t_end].
    let mut num = 0.0;
    let mut weight = 0.0;
    let mut p_gr_acc = 0.0;
    let outer: Vec<usize> = (INNER..t_grid.len())
        .filter(|&i| t_grid[i] >= cfg.t_late - 1e-12)
        .collect();
    if outer.len() < 2 {
        return Err(Error::invalid(
            "t_late",
            "estimator window too short for the chosen resolution",
        ));
    }
    for (pos, &i) in outer.iter().enumerate() {
        let w = if pos == 0 || pos == outer.len() - 1 {
            0.5
        } else {
            1.0
        };
        let mean_gr = window_mean(&p_gr, i);
        let mean_dp = window_mean(&p_lqc, i) - mean_gr;
        num += w * mean_dp / mean_gr;
        p_gr_acc += w * mean_gr;
        weight += w;
    }

    Ok(EchoEstimate {
        value: num / weight,
        p_gr_mean: p_gr_acc / weight,
        warnings: cfg.scale_warnings(bg_lqc),
    })
}
