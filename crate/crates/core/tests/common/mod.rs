//! Shared oracle machinery for the integration tests.
//!
//! Everything here is deliberately independent of the library's evolution
//! path: truncated number-basis (Fock) quantum mechanics, a hand-rolled
//! scaling-and-squaring matrix exponential, and seeded random generators.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse operator in triplet form; ladder products touch at most one
/// entry per basis state, so dense algebra would be wasteful.
#[derive(Clone)]
pub struct SparseOp {
    pub dim: usize,
    pub triplets: Vec<(usize, usize, Complex64)>,
}

impl SparseOp {
    pub fn accumulate(
        &self,
        scale: Complex64,
        psi: &DVector<Complex64>,
        out: &mut DVector<Complex64>,
    ) {
        for &(i, j, v) in &self.triplets {
            out[i] += scale * v * psi[j];
        }
    }

    pub fn apply(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.dim);
        self.accumulate(Complex64::new(1.0, 0.0), psi, &mut out);
        out
    }

    pub fn adjoint(&self) -> SparseOp {
        SparseOp {
            dim: self.dim,
            triplets: self
                .triplets
                .iter()
                .map(|&(i, j, v)| (j, i, v.conj()))
                .collect(),
        }
    }

    pub fn scaled_sum(ops: &[(Complex64, &SparseOp)], dim: usize) -> SparseOp {
        let mut triplets = Vec::new();
        for &(c, op) in ops {
            for &(i, j, v) in &op.triplets {
                triplets.push((i, j, c * v));
            }
        }
        SparseOp { dim, triplets }
    }

    /// `self * other`, exploiting a column index on `self`.
    pub fn product(&self, other: &SparseOp) -> SparseOp {
        let mut by_col: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for &(i, j, v) in &self.triplets {
            by_col[j].push((i, v));
        }
        let mut triplets = Vec::new();
        for &(k, c, v) in &other.triplets {
            for &(r, w) in &by_col[k] {
                triplets.push((r, c, w * v));
            }
        }
        SparseOp {
            dim: self.dim,
            triplets,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.triplets {
            m[(i, j)] += v;
        }
        m
    }
}

/// Truncated multi-mode Fock space with per-mode dimensions.
pub struct FockSpace {
    pub dims: Vec<usize>,
}

impl FockSpace {
    pub fn new(dims: &[usize]) -> Self {
        FockSpace {
            dims: dims.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn stride(&self, mode: usize) -> usize {
        self.dims[mode + 1..].iter().product()
    }

    /// Annihilation operator of `mode` on the tensor space.
    pub fn annihilation(&self, mode: usize) -> SparseOp {
        let dim = self.dim();
        let stride = self.stride(mode);
        let d = self.dims[mode];
        let mut triplets = Vec::new();
        for idx in 0..dim {
            let n = (idx / stride) % d;
            if n >= 1 {
                triplets.push((idx - stride, idx, Complex64::new((n as f64).sqrt(), 0.0)));
            }
        }
        SparseOp { dim, triplets }
    }

    pub fn creation(&self, mode: usize) -> SparseOp {
        self.annihilation(mode).adjoint()
    }

    /// `q = (a + a^dag)/sqrt(2)`.
    pub fn quadrature_q(&self, mode: usize) -> SparseOp {
        let a = self.annihilation(mode);
        let ad = a.adjoint();
        let s = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
        SparseOp::scaled_sum(&[(s, &a), (s, &ad)], self.dim())
    }

    /// `p = i (a^dag - a)/sqrt(2)`.
    pub fn quadrature_p(&self, mode: usize) -> SparseOp {
        let a = self.annihilation(mode);
        let ad = a.adjoint();
        let s = Complex64::new(0.0, 1.0 / 2.0f64.sqrt());
        SparseOp::scaled_sum(&[(-s, &a), (s, &ad)], self.dim())
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Two-mode squeezed vacuum `(1/cosh r) sum tanh^n r |n n>`.
    pub fn two_mode_squeezed(&self, r: f64) -> DVector<Complex64> {
        assert_eq!(self.dims.len(), 2);
        let d = self.dims[0].min(self.dims[1]);
        let mut v = DVector::zeros(self.dim());
        let t = r.tanh();
        let mut amp = 1.0 / r.cosh();
        for n in 0..d {
            v[n * self.dims[1] + n] = Complex64::new(amp, 0.0);
            amp *= t;
        }
        v
    }

    /// Quadrature covariance in the `(q..., p...)` stacking:
    /// `sigma_ij = <x_i x_j + x_j x_i> - 2 <x_i><x_j>`.
    pub fn covariance(&self, psi: &DVector<Complex64>) -> DMatrix<f64> {
        let n = self.dims.len();
        let mut xs: Vec<SparseOp> = Vec::with_capacity(2 * n);
        for m in 0..n {
            xs.push(self.quadrature_q(m));
        }
        for m in 0..n {
            xs.push(self.quadrature_p(m));
        }
        let applied: Vec<DVector<Complex64>> = xs.iter().map(|x| x.apply(psi)).collect();
        let means: Vec<f64> = applied.iter().map(|xp| psi.dotc(xp).re).collect();
        let mut sigma = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..2 * n {
            for j in 0..2 * n {
                let corr = applied[i].dotc(&applied[j]).re;
                sigma[(i, j)] = 2.0 * corr - 2.0 * means[i] * means[j];
            }
        }
        sigma
    }

    /// Mean occupation of `mode`.
    pub fn mean_occupation(&self, psi: &DVector<Complex64>, mode: usize) -> f64 {
        let ap = self.annihilation(mode).apply(psi);
        ap.dotc(&ap).re
    }

    /// Logarithmic negativity of a pure two-mode state via the Schmidt
    /// decomposition: `E_N = 2 ln sum_i s_i`.
    pub fn log_negativity_pure(&self, psi: &DVector<Complex64>) -> f64 {
        assert_eq!(self.dims.len(), 2);
        let (d0, d1) = (self.dims[0], self.dims[1]);
        let mut coeff = DMatrix::<Complex64>::zeros(d0, d1);
        for i in 0..d0 {
            for j in 0..d1 {
                coeff[(i, j)] = psi[i * d1 + j];
            }
        }
        let svd = coeff.svd(false, false);
        let total: f64 = svd.singular_values.iter().sum();
        2.0 * total.max(1e-300).ln()
    }

    /// Logarithmic negativity of a two-mode density matrix by explicit
    /// partial transposition and eigenvalue summation:
    /// `E_N = ln(1 + 2 sum |lambda_-|)`.
    pub fn log_negativity_density(&self, rho: &DMatrix<Complex64>) -> f64 {
        assert_eq!(self.dims.len(), 2);
        let (d0, d1) = (self.dims[0], self.dims[1]);
        let idx = |i: usize, a: usize| i * d1 + a;
        let mut pt = DMatrix::<Complex64>::zeros(self.dim(), self.dim());
        for i in 0..d0 {
            for j in 0..d0 {
                for a in 0..d1 {
                    for b in 0..d1 {
                        pt[(idx(i, b), idx(j, a))] = rho[(idx(i, a), idx(j, b))];
                    }
                }
            }
        }
        let eig = nalgebra::SymmetricEigen::new(pt);
        let neg_sum: f64 = eig
            .eigenvalues
            .iter()
            .filter(|&&l| l < 0.0)
            .map(|l| -l)
            .sum();
        (1.0 + 2.0 * neg_sum).ln()
    }

    /// Density matrix of a pure state.
    pub fn density(&self, psi: &DVector<Complex64>) -> DMatrix<Complex64> {
        psi * psi.adjoint()
    }
}

/// Time-dependent Hamiltonian as a fixed operator basis with scalar
/// coefficients, so applying `H(t)` costs one sparse product per operator.
pub struct OperatorSum {
    pub operators: Vec<SparseOp>,
    pub coefficients: Box<dyn Fn(f64) -> Vec<Complex64>>,
}

impl OperatorSum {
    pub fn apply(&self, t: f64, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let coeffs = (self.coefficients)(t);
        assert_eq!(coeffs.len(), self.operators.len());
        let mut out = DVector::zeros(psi.len());
        for (op, c) in self.operators.iter().zip(coeffs) {
            if c != Complex64::default() {
                op.accumulate(c, psi, &mut out);
            }
        }
        out
    }
}

/// Fixed-step RK4 for the Schroedinger equation `i psi' = H(t) psi`.
pub fn schroedinger_rk4(
    hamiltonian: &OperatorSum,
    psi0: &DVector<Complex64>,
    t0: f64,
    t1: f64,
    dt: f64,
) -> DVector<Complex64> {
    let steps = ((t1 - t0) / dt).ceil() as usize;
    let h_step = (t1 - t0) / steps as f64;
    let mut psi = psi0.clone();
    let mut t = t0;
    let minus_i = Complex64::new(0.0, -1.0);
    for _ in 0..steps {
        let k1 = hamiltonian.apply(t, &psi) * minus_i;
        let k2 = hamiltonian.apply(
            t + 0.5 * h_step,
            &(&psi + &k1 * Complex64::new(0.5 * h_step, 0.0)),
        ) * minus_i;
        let k3 = hamiltonian.apply(
            t + 0.5 * h_step,
            &(&psi + &k2 * Complex64::new(0.5 * h_step, 0.0)),
        ) * minus_i;
        let k4 = hamiltonian.apply(t + h_step, &(&psi + &k3 * Complex64::new(h_step, 0.0)))
            * minus_i;
        psi += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
            * Complex64::new(h_step / 6.0, 0.0);
        t += h_step;
    }
    // Remove the integrator's tiny norm drift.
    let norm = psi.norm();
    psi / Complex64::new(norm, 0.0)
}

/// Ladder-form Hamiltonian `a^dag^T w(t) a + a^dag^T g(t) a^dag + a^T g(t)^H a`
/// as an [`OperatorSum`] over precomputed quadratic operator products.
pub fn ladder_hamiltonian(
    space: &FockSpace,
    w_fn: impl Fn(f64) -> DMatrix<Complex64> + 'static,
    g_fn: impl Fn(f64) -> DMatrix<Complex64> + 'static,
) -> OperatorSum {
    let n = space.dims.len();
    let ladder: Vec<SparseOp> = (0..n).map(|m| space.annihilation(m)).collect();
    let raise: Vec<SparseOp> = ladder.iter().map(|a| a.adjoint()).collect();
    let mut operators = Vec::new();
    for i in 0..n {
        for j in 0..n {
            operators.push(raise[i].product(&ladder[j])); // a_i^dag a_j
        }
    }
    for i in 0..n {
        for j in 0..n {
            operators.push(raise[i].product(&raise[j])); // a_i^dag a_j^dag
        }
    }
    for i in 0..n {
        for j in 0..n {
            operators.push(ladder[i].product(&ladder[j])); // a_i a_j
        }
    }
    let coefficients = move |t: f64| -> Vec<Complex64> {
        let w = w_fn(t);
        let g = g_fn(t);
        let mut c = Vec::with_capacity(3 * n * n);
        for i in 0..n {
            for j in 0..n {
                c.push(w[(i, j)]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                c.push(g[(i, j)]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                c.push(g[(j, i)].conj()); // (g^H)_{ij}
            }
        }
        c
    };
    OperatorSum {
        operators,
        coefficients: Box::new(coefficients),
    }
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = m.amax();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(s as i32);
    let dim = m.nrows();
    let mut result = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    for k in 1..=24 {
        term = (&term * &scaled) / k as f64;
        result += &term;
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Random Hermitian matrix with entries of scale `scale`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.gen_range(-scale..scale), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(
                rng.gen_range(-scale..scale),
                rng.gen_range(-scale..scale),
            );
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random complex matrix with entries of scale `scale`.
pub fn random_complex(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
        )
    })
}

/// Random symplectic matrix built from the exponential of a random
/// Hamiltonian flow (independent of the library's integrator).
pub fn random_symplectic(rng: &mut ChaCha8Rng, n_modes: usize, strength: f64) -> DMatrix<f64> {
    let w = random_hermitian(rng, n_modes, strength);
    let g = random_complex(rng, n_modes, strength * 0.5);
    let f_sym = curvedqi_core::gaussian::f_sym_from_ladder(&w, &g).expect("hermitian w");
    // Omega * F_sym
    let d = 2 * n_modes;
    let mut gen = DMatrix::zeros(d, d);
    for i in 0..n_modes {
        for j in 0..d {
            gen[(i, j)] = f_sym[(n_modes + i, j)];
            gen[(n_modes + i, j)] = -f_sym[(i, j)];
        }
    }
    expm(&gen)
}

/// Random physical covariance: a symplectic conjugation of a thermal state.
pub fn random_covariance(rng: &mut ChaCha8Rng, n_modes: usize, pure: bool) -> DMatrix<f64> {
    let s = random_symplectic(rng, n_modes, 0.6);
    let mut base = DMatrix::identity(2 * n_modes, 2 * n_modes);
    if !pure {
        for i in 0..n_modes {
            let v = 1.0 + rng.gen_range(0.0..2.0);
            base[(i, i)] = v;
            base[(n_modes + i, n_modes + i)] = v;
        }
    }
    &s * base * s.transpose()
}
