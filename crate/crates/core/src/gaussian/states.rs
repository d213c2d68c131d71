//! Gaussian state catalog, tensor products and partial traces.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{symplectic_form, PhaseSpaceLayout, UNCERTAINTY_TOL};
use crate::error::{Error, Result};

/// Zero-mean Gaussian state as a real symmetric covariance matrix.
///
/// The constructor symmetrises round-off asymmetry and rejects matrices
/// violating the uncertainty relation `sigma + i Omega >= 0`.
#[derive(Debug, Clone)]
pub struct CovarianceState {
    layout: PhaseSpaceLayout,
    sigma: DMatrix<f64>,
}

impl CovarianceState {
    pub fn new(layout: PhaseSpaceLayout, sigma: DMatrix<f64>) -> Result<Self> {
        let d = layout.dim();
        if sigma.nrows() != d || sigma.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "CovarianceState::new",
                expected: d,
                actual: sigma.nrows(),
            });
        }
        let sym = (&sigma + sigma.transpose()).scale(0.5);
        let state = CovarianceState { layout, sigma: sym };
        let min_eig = state.min_uncertainty_eigenvalue();
        if min_eig < -UNCERTAINTY_TOL {
            return Err(Error::UncertaintyViolated { min_eig });
        }
        Ok(state)
    }

    /// Vacuum: `sigma = I` in this convention.
    pub fn vacuum(layout: PhaseSpaceLayout) -> Self {
        CovarianceState {
            layout,
            sigma: DMatrix::identity(layout.dim(), layout.dim()),
        }
    }

    /// Product thermal state with mean occupation `nbar[i]` in mode `i`.
    pub fn thermal(layout: PhaseSpaceLayout, nbar: &[f64]) -> Result<Self> {
        let n = layout.n_modes();
        if nbar.len() != n {
            return Err(Error::DimensionMismatch {
                context: "CovarianceState::thermal",
                expected: n,
                actual: nbar.len(),
            });
        }
        if let Some(bad) = nbar.iter().find(|&&v| v < 0.0) {
            return Err(Error::invalid(
                "nbar",
                format!("mean occupation must be non-negative, got {bad}"),
            ));
        }
        let mut sigma = DMatrix::zeros(2 * n, 2 * n);
        for (i, &nb) in nbar.iter().enumerate() {
            let v = 2.0 * nb + 1.0;
            sigma[(layout.q_index(i), layout.q_index(i))] = v;
            sigma[(layout.p_index(i), layout.p_index(i))] = v;
        }
        Ok(CovarianceState { layout, sigma })
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`.
    ///
    /// Diagonal `cosh 2r`, `q-q` block `+sinh 2r`, `p-p` block `-sinh 2r`;
    /// either single-mode reduction is thermal with `nbar = sinh^2 r`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let layout = PhaseSpaceLayout::new(0, 2).expect("two modes");
        let ch = (2.0 * r).cosh();
        let sh = (2.0 * r).sinh();
        let mut sigma = DMatrix::identity(4, 4).scale(ch);
        sigma[(0, 1)] = sh;
        sigma[(1, 0)] = sh;
        sigma[(2, 3)] = -sh;
        sigma[(3, 2)] = -sh;
        CovarianceState { layout, sigma }
    }

    pub fn layout(&self) -> PhaseSpaceLayout {
        self.layout
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Minimum eigenvalue of the Hermitian matrix `sigma + i Omega`.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let d = self.layout.dim();
        let omega = symplectic_form(self.layout);
        let mut h = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] = Complex64::new(self.sigma[(i, j)], omega[(i, j)]);
            }
        }
        let eig = SymmetricEigen::new(h);
        eig.eigenvalues.min()
    }

    /// Tensor product; detector modes of both factors precede field modes
    /// of both factors in the combined stacking order.
    pub fn tensor(&self, other: &CovarianceState) -> CovarianceState {
        let ma = self.layout.n_detectors();
        let mb = other.layout.n_detectors();
        let na = self.layout.n_field_modes();
        let nb = other.layout.n_field_modes();
        let layout = PhaseSpaceLayout::new(ma + mb, na + nb).expect("nonempty tensor");

        // New mode index of mode `i` from factor A / factor B.
        let map_a = |i: usize| if i < ma { i } else { mb + i };
        let map_b = |i: usize| if i < mb { ma + i } else { ma + na + i };

        let mut sigma = DMatrix::zeros(layout.dim(), layout.dim());
        let place = |sigma: &mut DMatrix<f64>,
                     src: &CovarianceState,
                     map: &dyn Fn(usize) -> usize| {
            let n_src = src.layout.n_modes();
            for i in 0..n_src {
                for j in 0..n_src {
                    let (qi, pi) = (src.layout.q_index(i), src.layout.p_index(i));
                    let (qj, pj) = (src.layout.q_index(j), src.layout.p_index(j));
                    let (nqi, npi) = (layout.q_index(map(i)), layout.p_index(map(i)));
                    let (nqj, npj) = (layout.q_index(map(j)), layout.p_index(map(j)));
                    sigma[(nqi, nqj)] = src.sigma[(qi, qj)];
                    sigma[(nqi, npj)] = src.sigma[(qi, pj)];
                    sigma[(npi, nqj)] = src.sigma[(pi, qj)];
                    sigma[(npi, npj)] = src.sigma[(pi, pj)];
                }
            }
        };
        place(&mut sigma, self, &map_a);
        place(&mut sigma, other, &map_b);
        CovarianceState { layout, sigma }
    }

    /// Gaussian partial trace: keep the listed modes (0-based, ascending).
    pub fn partial(&self, keep: &[usize]) -> Result<CovarianceState> {
        if keep.is_empty() {
            return Err(Error::invalid("keep", "mode subset must be nonempty"));
        }
        let n = self.layout.n_modes();
        let mut modes: Vec<usize> = keep.to_vec();
        modes.sort_unstable();
        modes.dedup();
        if let Some(&bad) = modes.iter().find(|&&m| m >= n) {
            return Err(Error::invalid(
                "keep",
                format!("mode index {bad} outside layout with {n} modes"),
            ));
        }
        let kept_detectors = modes
            .iter()
            .filter(|&&m| m < self.layout.n_detectors())
            .count();
        let layout = PhaseSpaceLayout::new(kept_detectors, modes.len() - kept_detectors)?;
        let mut sigma = DMatrix::zeros(layout.dim(), layout.dim());
        for (i_new, &i_old) in modes.iter().enumerate() {
            for (j_new, &j_old) in modes.iter().enumerate() {
                sigma[(layout.q_index(i_new), layout.q_index(j_new))] =
                    self.sigma[(self.layout.q_index(i_old), self.layout.q_index(j_old))];
                sigma[(layout.q_index(i_new), layout.p_index(j_new))] =
                    self.sigma[(self.layout.q_index(i_old), self.layout.p_index(j_old))];
                sigma[(layout.p_index(i_new), layout.q_index(j_new))] =
                    self.sigma[(self.layout.p_index(i_old), self.layout.q_index(j_old))];
                sigma[(layout.p_index(i_new), layout.p_index(j_new))] =
                    self.sigma[(self.layout.p_index(i_old), self.layout.p_index(j_old))];
            }
        }
        Ok(CovarianceState { layout, sigma })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn thermal_zero_is_vacuum() {
        let layout = PhaseSpaceLayout::new(0, 3).unwrap();
        let th = CovarianceState::thermal(layout, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(th.sigma(), CovarianceState::vacuum(layout).sigma());
    }

    #[test]
    fn thermal_rejects_negative_occupation() {
        let layout = PhaseSpaceLayout::new(0, 1).unwrap();
        assert!(CovarianceState::thermal(layout, &[-0.1]).is_err());
    }

    #[test]
    fn tms_zero_squeezing_is_vacuum() {
        let tms = CovarianceState::two_mode_squeezed(0.0);
        assert_eq!(tms.sigma(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn tms_reduction_is_thermal() {
        let r = 0.5;
        let tms = CovarianceState::two_mode_squeezed(r);
        let red = tms.partial(&[0]).unwrap();
        // (2 sinh^2 r + 1) = cosh 2r
        assert_relative_eq!(red.sigma()[(0, 0)], (2.0 * r).cosh(), epsilon = 1e-12);
        assert_relative_eq!(red.sigma()[(1, 1)], (2.0 * r).cosh(), epsilon = 1e-12);
        assert_relative_eq!(red.sigma()[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_full_subset_is_identity_operation() {
        let tms = CovarianceState::two_mode_squeezed(0.3);
        let full = tms.partial(&[0, 1]).unwrap();
        assert_relative_eq!(full.sigma().clone(), tms.sigma().clone(), epsilon = 1e-14);
    }

    #[test]
    fn partial_of_vacuum_is_vacuum() {
        let layout = PhaseSpaceLayout::new(1, 3).unwrap();
        let vac = CovarianceState::vacuum(layout);
        let red = vac.partial(&[0, 2]).unwrap();
        assert_eq!(red.layout().n_detectors(), 1);
        assert_eq!(red.layout().n_field_modes(), 1);
        assert_eq!(red.sigma(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn partial_rejects_empty_subset() {
        let vac = CovarianceState::vacuum(PhaseSpaceLayout::new(0, 2).unwrap());
        assert!(vac.partial(&[]).is_err());
    }

    #[test]
    fn uncertainty_violation_rejected() {
        let layout = PhaseSpaceLayout::new(0, 1).unwrap();
        let sigma = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert!(matches!(
            CovarianceState::new(layout, sigma),
            Err(Error::UncertaintyViolated { .. })
        ));
    }

    #[test]
    fn tensor_keeps_blocks_and_ordering() {
        let det_pair = CovarianceState::vacuum(PhaseSpaceLayout::new(2, 0).unwrap());
        let cavity = CovarianceState::thermal(PhaseSpaceLayout::new(0, 2).unwrap(), &[1.0, 2.0])
            .unwrap();
        let joint = det_pair.tensor(&cavity);
        assert_eq!(joint.layout().n_detectors(), 2);
        assert_eq!(joint.layout().n_field_modes(), 2);
        // Detector blocks are vacuum.
        assert_relative_eq!(joint.sigma()[(0, 0)], 1.0);
        assert_relative_eq!(joint.sigma()[(1, 1)], 1.0);
        // Field blocks carry the thermal occupations in order.
        assert_relative_eq!(joint.sigma()[(2, 2)], 3.0);
        assert_relative_eq!(joint.sigma()[(3, 3)], 5.0);
        // And the p-quadratures mirror them.
        let n = joint.layout().n_modes();
        assert_relative_eq!(joint.sigma()[(n + 2, n + 2)], 3.0);
        assert_relative_eq!(joint.sigma()[(n + 3, n + 3)], 5.0);
    }
}
