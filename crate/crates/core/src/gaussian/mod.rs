//! Phase-space engine for Gaussian states under quadratic Hamiltonians.
//!
//! Conventions (natural units, `hbar = 1`):
//!
//! * quadratures are stacked as `x = (q_d1..q_dM, q_1..q_N, p_d1..p_dM,
//!   p_1..p_N)^T` with `q = (a + a^dag)/sqrt(2)`, `p = i(a^dag - a)/sqrt(2)`;
//! * the symplectic form in this ordering is `Omega = [[0, I], [-I, 0]]`
//!   (note: `Omega` is the symplectic form throughout this module; detector
//!   energy gaps are named `gap` elsewhere to avoid the symbol clash);
//! * covariance entries are `sigma_ij = <x_i x_j + x_j x_i> - 2<x_i><x_j>`,
//!   so the vacuum is the identity matrix;
//! * a quadratic Hamiltonian written on ladder operators as
//!   `H = a^dag^T w a + a^dag^T g a^dag + a^T g^H a` maps to the quadrature
//!   form `H = x^T F x` with `F = [[A, X], [X^H, B]]`,
//!   `A = (w + g + g^H)/2`, `B = (w - g - g^H)/2`, `X = i(w - g + g^H)/2`;
//! * the propagator solves `dS/dt = Omega F_sym(t) S`, `F_sym = F + F^T`,
//!   `S(0) = I`, and states evolve as `sigma(t) = S sigma_0 S^T`.

mod measures;
mod states;

pub use measures::*;
pub use states::*;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};

/// Default relative tolerance for propagator integration.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Default absolute tolerance for propagator integration.
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
/// Tolerance floor below which `sigma + i Omega` eigenvalues are rejected.
pub const UNCERTAINTY_TOL: f64 = 1e-9;

/// Mode bookkeeping: `M` detector modes followed by `N` field modes.
///
/// Immutable once constructed; all matrix dimensions derive from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseSpaceLayout {
    n_detectors: usize,
    n_field_modes: usize,
}

impl PhaseSpaceLayout {
    pub fn new(n_detectors: usize, n_field_modes: usize) -> Result<Self> {
        if n_detectors + n_field_modes == 0 {
            return Err(Error::invalid("layout", "at least one mode required"));
        }
        Ok(PhaseSpaceLayout {
            n_detectors,
            n_field_modes,
        })
    }

    pub fn n_detectors(&self) -> usize {
        self.n_detectors
    }

    pub fn n_field_modes(&self) -> usize {
        self.n_field_modes
    }

    /// Total mode count `n = M + N`.
    pub fn n_modes(&self) -> usize {
        self.n_detectors + self.n_field_modes
    }

    /// Quadrature-space dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes()
    }

    /// Index of `q_mode` in the stacked quadrature vector.
    pub fn q_index(&self, mode: usize) -> usize {
        debug_assert!(mode < self.n_modes());
        mode
    }

    /// Index of `p_mode` in the stacked quadrature vector.
    pub fn p_index(&self, mode: usize) -> usize {
        debug_assert!(mode < self.n_modes());
        self.n_modes() + mode
    }
}

/// The symplectic form `[[0, I], [-I, 0]]` for the given layout.
pub fn symplectic_form(layout: PhaseSpaceLayout) -> DMatrix<f64> {
    let n = layout.n_modes();
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        omega[(i, n + i)] = 1.0;
        omega[(n + i, i)] = -1.0;
    }
    omega
}

/// Left-multiply by the symplectic form: `Omega * m` as a row shuffle.
pub(crate) fn omega_mul(m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    let n = d / 2;
    let mut out = DMatrix::zeros(d, m.ncols());
    for i in 0..n {
        for j in 0..m.ncols() {
            out[(i, j)] = m[(n + i, j)];
            out[(n + i, j)] = -m[(i, j)];
        }
    }
    out
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Assemble the quadrature-form coefficient matrix `F = [[A, X], [X^H, B]]`
/// from the ladder-form coefficients `w` (Hermitian) and `g`.
pub fn assemble_f(w: &DMatrix<Complex64>, g: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = w.nrows();
    if w.ncols() != n || g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "assemble_f",
            expected: n,
            actual: g.nrows().max(g.ncols()).max(w.ncols()),
        });
    }
    if hermiticity_defect(w) > 1e-12 {
        return Err(Error::invalid("w", "must be Hermitian to 1e-12"));
    }
    let gh = g.adjoint();
    let a = (w + g + &gh).scale(0.5);
    let b = (w - g - &gh).scale(0.5);
    let x = (w - g + &gh) * Complex64::new(0.0, 0.5);

    let mut f = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            f[(i, j)] = a[(i, j)];
            f[(i, n + j)] = x[(i, j)];
            f[(n + i, j)] = x[(j, i)].conj();
            f[(n + i, n + j)] = b[(i, j)];
        }
    }
    debug_assert!(hermiticity_defect(&f) <= 1e-12);
    Ok(f)
}

/// Real symmetric `F_sym = F + F^T = 2 Re F` for a Hermitian `F`.
pub fn f_sym_from_ladder(w: &DMatrix<Complex64>, g: &DMatrix<Complex64>) -> Result<DMatrix<f64>> {
    let f = assemble_f(w, g)?;
    let d = f.nrows();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(i, j)] = f[(i, j)].re + f[(j, i)].re;
        }
    }
    Ok(out)
}

/// Time-dependent provider of the ladder coefficient matrices `w(t)`, `g(t)`.
pub struct QuadraticGenerator {
    layout: PhaseSpaceLayout,
    w_of_t: Box<dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync>,
    g_of_t: Box<dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync>,
}

impl QuadraticGenerator {
    pub fn new(
        layout: PhaseSpaceLayout,
        w_of_t: impl Fn(f64) -> DMatrix<Complex64> + Send + Sync + 'static,
        g_of_t: impl Fn(f64) -> DMatrix<Complex64> + Send + Sync + 'static,
    ) -> Self {
        QuadraticGenerator {
            layout,
            w_of_t: Box::new(w_of_t),
            g_of_t: Box::new(g_of_t),
        }
    }

    pub fn layout(&self) -> PhaseSpaceLayout {
        self.layout
    }

    pub fn w(&self, t: f64) -> DMatrix<Complex64> {
        (self.w_of_t)(t)
    }

    pub fn g(&self, t: f64) -> DMatrix<Complex64> {
        (self.g_of_t)(t)
    }

    /// Hermitian quadrature-form matrix `F(t)`.
    pub fn f_matrix(&self, t: f64) -> Result<DMatrix<Complex64>> {
        assemble_f(&self.w(t), &self.g(t))
    }

    /// `F_sym(t) = F(t) + F(t)^T`, the real matrix entering the flow equation.
    pub fn f_sym(&self, t: f64) -> Result<DMatrix<f64>> {
        f_sym_from_ladder(&self.w(t), &self.g(t))
    }
}

/// Symplectic propagator `S(t)` with `S Omega S^T = Omega`, `det S = 1`.
#[derive(Debug, Clone)]
pub struct SymplecticPropagator {
    layout: PhaseSpaceLayout,
    matrix: DMatrix<f64>,
    t: f64,
}

impl SymplecticPropagator {
    /// Wrap an externally constructed symplectic matrix (validated).
    pub fn from_matrix(layout: PhaseSpaceLayout, matrix: DMatrix<f64>, t: f64) -> Result<Self> {
        if matrix.nrows() != layout.dim() || matrix.ncols() != layout.dim() {
            return Err(Error::DimensionMismatch {
                context: "SymplecticPropagator::from_matrix",
                expected: layout.dim(),
                actual: matrix.nrows(),
            });
        }
        let prop = SymplecticPropagator { layout, matrix, t };
        let defect = prop.symplectic_defect();
        if defect > 1e-6 {
            return Err(Error::invalid(
                "matrix",
                format!("not symplectic: |S Omega S^T - Omega|_max = {defect:.3e}"),
            ));
        }
        Ok(prop)
    }

    pub fn identity(layout: PhaseSpaceLayout) -> Self {
        SymplecticPropagator {
            layout,
            matrix: DMatrix::identity(layout.dim(), layout.dim()),
            t: 0.0,
        }
    }

    pub fn layout(&self) -> PhaseSpaceLayout {
        self.layout
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Max-norm of `S Omega S^T - Omega`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.layout);
        (&self.matrix * &omega * self.matrix.transpose() - omega).amax()
    }

    /// `|det S - 1|`.
    pub fn determinant_defect(&self) -> f64 {
        (self.matrix.clone().lu().determinant() - 1.0).abs()
    }

    /// Compose: `other` applied after `self`.
    pub fn then(&self, other: &SymplecticPropagator) -> Result<SymplecticPropagator> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch {
                context: "SymplecticPropagator::then",
                expected: self.layout.dim(),
                actual: other.layout.dim(),
            });
        }
        Ok(SymplecticPropagator {
            layout: self.layout,
            matrix: &other.matrix * &self.matrix,
            t: self.t + other.t,
        })
    }
}

/// Integrate `dS/dt = Omega F_sym(t) S` over `t_span` with `S(t_span.0) = I`.
///
/// `rel_tol` must lie in `[1e-13, 1e-4]`; the absolute tolerance is two
/// orders tighter, floored at 1e-14.
pub fn evolve_propagator(
    gen: &QuadraticGenerator,
    t_span: (f64, f64),
    rel_tol: f64,
) -> Result<SymplecticPropagator> {
    if !(1e-13..=1e-4).contains(&rel_tol) {
        return Err(Error::invalid(
            "rel_tol",
            format!("{rel_tol:e} outside [1e-13, 1e-4]"),
        ));
    }
    let dim = gen.layout().dim();
    let opts = OdeOptions {
        rel_tol,
        abs_tol: (rel_tol * 1e-2).max(1e-14),
        ..OdeOptions::default()
    };
    let mut failure: Option<Error> = None;
    let rhs = |t: f64, s: &DMatrix<f64>| -> DMatrix<f64> {
        match gen.f_sym(t) {
            Ok(fs) => omega_mul(&(fs * s)),
            Err(e) => {
                failure.get_or_insert(e);
                DMatrix::zeros(dim, dim)
            }
        }
    };
    let s = ode::integrate(
        rhs,
        t_span.0,
        t_span.1,
        DMatrix::identity(dim, dim),
        &opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SymplecticPropagator {
        layout: gen.layout(),
        matrix: s,
        t: t_span.1 - t_span.0,
    })
}

/// Schroedinger evolution of the covariance matrix: `sigma -> S sigma S^T`.
pub fn evolve_covariance(
    state: &CovarianceState,
    prop: &SymplecticPropagator,
) -> Result<CovarianceState> {
    if state.layout() != prop.layout() {
        return Err(Error::DimensionMismatch {
            context: "evolve_covariance",
            expected: state.layout().dim(),
            actual: prop.layout().dim(),
        });
    }
    let sigma = prop.matrix() * state.sigma() * prop.matrix().transpose();
    CovarianceState::new(state.layout(), sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn single_mode() -> PhaseSpaceLayout {
        PhaseSpaceLayout::new(0, 1).unwrap()
    }

    #[test]
    fn symplectic_form_smallest_size() {
        let omega = symplectic_form(single_mode());
        assert_eq!(omega, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
    }

    #[test]
    fn symplectic_form_squares_to_minus_identity() {
        for n in [1usize, 3, 5] {
            let layout = PhaseSpaceLayout::new(1, n - 1).unwrap();
            let omega = symplectic_form(layout);
            let sq = &omega * &omega;
            assert_relative_eq!(sq, -DMatrix::identity(2 * n, 2 * n), epsilon = 1e-14);
            assert_relative_eq!(omega.transpose(), -omega.clone(), epsilon = 1e-14);
        }
    }

    #[test]
    fn assemble_f_free_oscillator() {
        let omega0 = 1.7;
        let w = DMatrix::from_element(1, 1, Complex64::new(omega0, 0.0));
        let g = DMatrix::zeros(1, 1);
        let f = assemble_f(&w, &g).unwrap();
        assert_relative_eq!(f[(0, 0)].re, omega0 / 2.0, epsilon = 1e-14);
        assert_relative_eq!(f[(0, 1)].im, omega0 / 2.0, epsilon = 1e-14);
        assert_relative_eq!(f[(1, 0)].im, -omega0 / 2.0, epsilon = 1e-14);
        assert_relative_eq!(f[(1, 1)].re, omega0 / 2.0, epsilon = 1e-14);

        let fs = f_sym_from_ladder(&w, &g).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[omega0, 0.0, 0.0, omega0]);
        assert_relative_eq!(fs, expect, epsilon = 1e-14);
    }

    #[test]
    fn assemble_f_zero_hamiltonian() {
        let w = DMatrix::zeros(2, 2);
        let g = DMatrix::zeros(2, 2);
        let f = assemble_f(&w, &g).unwrap();
        assert_eq!(f.map(|z| z.norm()).max(), 0.0);
    }

    #[test]
    fn assemble_f_rejects_non_hermitian_w() {
        let mut w = DMatrix::zeros(2, 2);
        w[(0, 1)] = Complex64::new(1.0, 0.0);
        let g = DMatrix::zeros(2, 2);
        assert!(assemble_f(&w, &g).is_err());
    }

    #[test]
    fn zero_generator_is_identity() {
        let layout = PhaseSpaceLayout::new(0, 2).unwrap();
        let gen = QuadraticGenerator::new(
            layout,
            |_t| DMatrix::zeros(2, 2),
            |_t| DMatrix::zeros(2, 2),
        );
        let prop = evolve_propagator(&gen, (0.0, 7.3), 1e-10).unwrap();
        assert_relative_eq!(
            prop.matrix().clone(),
            DMatrix::identity(4, 4),
            epsilon = 1e-12
        );
    }

    #[test]
    fn free_mode_quarter_rotation() {
        let layout = single_mode();
        let gen = QuadraticGenerator::new(
            layout,
            |_t| DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
            |_t| DMatrix::zeros(1, 1),
        );
        let prop = evolve_propagator(&gen, (0.0, FRAC_PI_2), 1e-12).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!((prop.matrix() - expect).amax() < 1e-10);
    }

    #[test]
    fn propagator_rejects_out_of_range_tolerance() {
        let layout = single_mode();
        let gen = QuadraticGenerator::new(
            layout,
            |_t| DMatrix::zeros(1, 1),
            |_t| DMatrix::zeros(1, 1),
        );
        assert!(evolve_propagator(&gen, (0.0, 1.0), 1e-3).is_err());
        assert!(evolve_propagator(&gen, (0.0, 1.0), 1e-14).is_err());
    }

    #[test]
    fn vacuum_invariant_under_rotation() {
        let layout = single_mode();
        let gen = QuadraticGenerator::new(
            layout,
            |_t| DMatrix::from_element(1, 1, Complex64::new(2.0, 0.0)),
            |_t| DMatrix::zeros(1, 1),
        );
        let prop = evolve_propagator(&gen, (0.0, PI / 3.0), 1e-10).unwrap();
        let vac = CovarianceState::vacuum(layout);
        let out = evolve_covariance(&vac, &prop).unwrap();
        assert!((out.sigma() - DMatrix::identity(2, 2)).amax() < 1e-9);
    }

    #[test]
    fn squeezer_conjugation() {
        let layout = single_mode();
        let r: f64 = 0.4;
        let s = DMatrix::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
        let prop = SymplecticPropagator::from_matrix(layout, s, 1.0).unwrap();
        let vac = CovarianceState::vacuum(layout);
        let out = evolve_covariance(&vac, &prop).unwrap();
        assert_relative_eq!(out.sigma()[(0, 0)], (2.0 * r).exp(), epsilon = 1e-12);
        assert_relative_eq!(out.sigma()[(1, 1)], (-2.0 * r).exp(), epsilon = 1e-12);
    }

    #[test]
    fn layout_mismatch_is_an_error() {
        let l1 = PhaseSpaceLayout::new(0, 1).unwrap();
        let l2 = PhaseSpaceLayout::new(0, 2).unwrap();
        let state = CovarianceState::vacuum(l2);
        let prop = SymplecticPropagator::identity(l1);
        assert!(evolve_covariance(&state, &prop).is_err());
    }
}
