//! Detector switching functions.
//!
//! Four window shapes over `[t_on, t_off]` with ramp timescale `delta`:
//! always-on, linear ramps, tanh ramps, and a compactly supported smooth
//! window built from `S(x) = [1 - tanh(cot x)] / 2`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchingKind {
    /// `chi_1 = 1` for all t.
    Constant,
    /// `chi_2`: linear ramp up/down, exactly zero outside the window.
    LinearRamp,
    /// `chi_3`: tanh ramps, analytic everywhere (not compactly supported).
    TanhRamp,
    /// `chi_4`: compactly supported, continuous everywhere, plateau 1.
    SmoothCompact,
}

#[derive(Debug, Clone, Copy)]
pub struct SwitchingFunction {
    pub kind: SwitchingKind,
    pub t_on: f64,
    pub t_off: f64,
    pub delta: f64,
}

/// Ramp profile of the compact window: `S(x) = [1 - tanh(cot x)] / 2` on
/// `(0, pi)`, extended by its limits 0 and 1 outside.
pub fn smooth_ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= PI {
        1.0
    } else {
        0.5 * (1.0 - (1.0 / x.tan()).tanh())
    }
}

impl SwitchingFunction {
    pub fn new(kind: SwitchingKind, t_on: f64, t_off: f64, delta: f64) -> Result<Self> {
        if t_off <= t_on {
            return Err(Error::invalid(
                "t_off",
                format!("window must have t_on < t_off, got [{t_on}, {t_off}]"),
            ));
        }
        if delta <= 0.0 {
            return Err(Error::invalid(
                "delta",
                format!("ramp timescale must be positive, got {delta}"),
            ));
        }
        if kind == SwitchingKind::SmoothCompact && t_off - t_on < 2.0 * PI * delta {
            return Err(Error::invalid(
                "delta",
                "compact window needs t_off - t_on >= 2 pi delta for the ramps to fit",
            ));
        }
        Ok(SwitchingFunction {
            kind,
            t_on,
            t_off,
            delta,
        })
    }

    /// True when the window vanishes identically outside `[t_on, t_off]`.
    pub fn is_compact(&self) -> bool {
        matches!(
            self.kind,
            SwitchingKind::LinearRamp | SwitchingKind::SmoothCompact
        )
    }

    /// Evaluate the window at time `t`.
    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            SwitchingKind::Constant => 1.0,
            SwitchingKind::LinearRamp => {
                if t < self.t_on || t > self.t_off {
                    return 0.0;
                }
                let ramp = if t < 0.5 * (self.t_on + self.t_off) {
                    (t - self.t_on) / self.delta
                } else {
                    (self.t_off - t) / self.delta
                };
                ramp.clamp(0.0, 1.0)
            }
            SwitchingKind::TanhRamp => {
                ((t - self.t_on) / self.delta).tanh() - ((t - self.t_off) / self.delta).tanh()
                    + ((self.t_on - self.t_off) / self.delta).tanh()
            }
            SwitchingKind::SmoothCompact => {
                if t < self.t_on || t > self.t_off {
                    0.0
                } else if t < self.t_on + PI * self.delta {
                    smooth_ramp((t - self.t_on) / self.delta)
                } else if t >= self.t_off - PI * self.delta {
                    smooth_ramp((self.t_off - t) / self.delta)
                } else {
                    1.0
                }
            }
        }
    }
}
