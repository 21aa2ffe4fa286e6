//! Resonant Jaynes-Cummings model with `hbar = 1`.
//!
//! Basis ordering for the joint atom-field space, used everywhere in this
//! crate: `index = atom * (n_max + 1) + n`, where `atom = 0` is the ground
//! level `|1>` and `atom = 1` the excited level `|2>`, and `n` counts photons.
//!
//! The Hamiltonian `H = w0/2 sigma_z + w0 a^dagger a + g (a sigma+ + a^dagger sigma-)`
//! conserves the excitation number, so the propagator is block diagonal:
//! the ground vacuum `|1,0>` alone, the dressed pairs `{|2,n>, |1,n+1>}`
//! for `n < n_max`, and the edge level `|2,n_max>` whose coupling partner lies
//! outside the cutoff.

use num_complex::Complex64;

use crate::linalg::{tensor_product, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Extra photon levels kept above the Poisson tail cutoff.
pub const GUARD_BAND: usize = 5;

const ATOM_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Atom-field coupling `g`.
    pub g: f64,
    /// Common atomic and field frequency `w0`.
    pub omega0: f64,
}

impl ModelParams {
    pub fn new(g: f64, omega0: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling g must be positive, got {g}")));
        }
        if !(omega0 >= 0.0 && omega0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be non-negative, got {omega0}"
            )));
        }
        Ok(ModelParams { g, omega0 })
    }

    /// Rabi frequency of the `{|2,n>, |1,n+1>}` pair: `g * sqrt(n + 1)`.
    pub fn rabi_frequency(&self, n: usize) -> f64 {
        self.g * ((n + 1) as f64).sqrt()
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { g: 1.0, omega0: 1.0 }
    }
}

/// Coherent field state `|theta>` truncated at `n_max` photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    theta: Complex64,
    n_max: usize,
    tail_tol: f64,
}

impl FieldConfig {
    /// Sizes the truncation with [`truncation_dim`].
    pub fn new(theta: Complex64, tail_tol: f64) -> Result<Self> {
        check_tail_tol(tail_tol)?;
        if !(theta.re.is_finite() && theta.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
        }
        let n_max = truncation_dim(theta.norm_sqr(), tail_tol);
        Ok(FieldConfig { theta, n_max, tail_tol })
    }

    /// Real amplitude `theta = sqrt(mean_photons)`.
    pub fn from_mean_photons(mean_photons: f64, tail_tol: f64) -> Result<Self> {
        if !(mean_photons >= 0.0 && mean_photons.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mean photon number must be non-negative, got {mean_photons}"
            )));
        }
        Self::new(Complex64::new(mean_photons.sqrt(), 0.0), tail_tol)
    }

    /// Explicit cutoff; rejected when the Poisson tail beyond `n_max` is not
    /// below `tail_tol`.
    pub fn with_n_max(theta: Complex64, n_max: usize, tail_tol: f64) -> Result<Self> {
        check_tail_tol(tail_tol)?;
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        let tail = poisson_tail(theta.norm_sqr(), n_max);
        if tail >= tail_tol {
            return Err(Error::InvalidParameter(format!(
                "Poisson tail {tail:e} beyond n_max={n_max} is not below {tail_tol:e}"
            )));
        }
        Ok(FieldConfig { theta, n_max, tail_tol })
    }

    pub fn theta(&self) -> Complex64 {
        self.theta
    }

    /// `|theta|^2`
    pub fn mean_photons(&self) -> f64 {
        self.theta.norm_sqr()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Number of field levels, `n_max + 1`.
    pub fn field_dim(&self) -> usize {
        self.n_max + 1
    }

    /// `(atom, field)` factor dimensions of the joint space.
    pub fn dims(&self) -> (usize, usize) {
        (ATOM_DIM, self.field_dim())
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        coherent_state(self.theta, self.n_max)
    }
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if tail_tol > 0.0 && tail_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tail_tol must lie in (0, 1), got {tail_tol}"
        )))
    }
}

/// Diagonal atomic state `lambda0 |1><1| + lambda1 |2><2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    lambda0: f64,
    lambda1: f64,
}

impl AtomState {
    /// Ground-state weight `lambda0`; `lambda1 = 1 - lambda0`.
    pub fn new(lambda0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda0) {
            return Err(Error::InvalidParameter(format!(
                "lambda0 must lie in [0, 1], got {lambda0}"
            )));
        }
        Ok(AtomState {
            lambda0,
            lambda1: 1.0 - lambda0,
        })
    }

    pub fn from_weights(lambda0: f64, lambda1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda0) || !(0.0..=1.0).contains(&lambda1) || (lambda0 + lambda1 - 1.0).abs() > 1e-12
        {
            return Err(Error::InvalidParameter(format!(
                "weights ({lambda0}, {lambda1}) are not a probability pair"
            )));
        }
        Ok(AtomState { lambda0, lambda1 })
    }

    pub fn ground() -> Self {
        AtomState {
            lambda0: 1.0,
            lambda1: 0.0,
        }
    }

    pub fn excited() -> Self {
        AtomState {
            lambda0: 0.0,
            lambda1: 1.0,
        }
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    /// `diag(lambda0, lambda1)` in the (ground, excited) ordering.
    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_real_diagonal(&[self.lambda0, self.lambda1]))
    }
}

/// Poisson probabilities `e^{-m} m^n / n!` for `n = 0..=n_last`, evaluated in
/// log space.
pub fn poisson_weights(mean: f64, n_last: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_last + 1);
    let ln_mean = if mean > 0.0 { mean.ln() } else { f64::NEG_INFINITY };
    let mut ln_fact = 0.0;
    for n in 0..=n_last {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let w = if n == 0 {
            (-mean).exp()
        } else if mean == 0.0 {
            0.0
        } else {
            (-mean + n as f64 * ln_mean - ln_fact).exp()
        };
        out.push(w);
    }
    out
}

/// `sum_{k > n} e^{-m} m^k / k!`, summed upward from `n + 1` until the terms
/// stop contributing.
pub fn poisson_tail(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_fact: f64 = (1..=n + 1).map(|k| (k as f64).ln()).sum();
    let mut k = n + 1;
    let mut tail = 0.0;
    loop {
        let term = (-mean + k as f64 * ln_mean - ln_fact).exp();
        tail += term;
        // Past the mode the terms decrease geometrically.
        if k as f64 > mean && (term <= tail * 1e-17 || term == 0.0) {
            break;
        }
        k += 1;
        ln_fact += (k as f64).ln();
    }
    tail
}

/// Smallest `N` whose Poisson(`mean_photons`) tail beyond `N` is below
/// `tail_tol`, plus [`GUARD_BAND`] levels.
pub fn truncation_dim(mean_photons: f64, tail_tol: f64) -> usize {
    let mut n = 0;
    while poisson_tail(mean_photons, n) >= tail_tol {
        n += 1;
    }
    n + GUARD_BAND
}

/// Amplitudes `e^{-|theta|^2/2} theta^n / sqrt(n!)` for `n = 0..=n_max`,
/// renormalized to unit norm.
pub fn coherent_amplitudes(theta: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut a = Complex64::new((-0.5 * theta.norm_sqr()).exp(), 0.0);
    amps.push(a);
    for n in 1..=n_max {
        a = a * theta / (n as f64).sqrt();
        amps.push(a);
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter().map(|z| z / norm).collect()
}

/// `|theta><theta|` on `n_max + 1` levels.
pub fn coherent_state(theta: Complex64, n_max: usize) -> DensityMatrix {
    let amps = coherent_amplitudes(theta, n_max);
    DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&amps, &amps))
}

/// Spectral data of one excitation-number block `{|2,n>, |1,n+1>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedBlock {
    pub n: usize,
    /// Eigenvalues `w0 (n + 1/2) + Omega_n` and `w0 (n + 1/2) - Omega_n`.
    pub phases: [f64; 2],
    /// Matching eigenvectors in the `(|2,n>, |1,n+1>)` basis.
    pub vectors: [[Complex64; 2]; 2],
}

pub fn dressed_block(n: usize, params: &ModelParams) -> DressedBlock {
    let centre = params.omega0 * (n as f64 + 0.5);
    let rabi = params.rabi_frequency(n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (p, m) = (Complex64::new(h, 0.0), Complex64::new(-h, 0.0));
    DressedBlock {
        n,
        phases: [centre + rabi, centre - rabi],
        vectors: [[p, p], [p, m]],
    }
}

impl DressedBlock {
    /// `sum_j e^{-i t E_j} |phi_j><phi_j|` as a 2x2 array.
    pub fn evolution(&self, t: f64) -> [[Complex64; 2]; 2] {
        let mut u = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (phase, v) in self.phases.iter().zip(&self.vectors) {
            let e = Complex64::from_polar(1.0, -phase * t);
            for i in 0..2 {
                for j in 0..2 {
                    u[i][j] += e * v[i] * v[j].conj();
                }
            }
        }
        u
    }
}

#[inline]
fn ground_index(n: usize) -> usize {
    n
}

#[inline]
fn excited_index(n: usize, n_max: usize) -> usize {
    (n_max + 1) + n
}

/// Truncated Hamiltonian on `2 (n_max + 1)` levels.
pub fn hamiltonian(params: &ModelParams, n_max: usize) -> ComplexMatrix {
    let dim = ATOM_DIM * (n_max + 1);
    let mut h = ComplexMatrix::zeros(dim, dim);
    let w0 = params.omega0;
    for n in 0..=n_max {
        h[(ground_index(n), ground_index(n))] = Complex64::new(-0.5 * w0 + w0 * n as f64, 0.0);
        h[(excited_index(n, n_max), excited_index(n, n_max))] = Complex64::new(0.5 * w0 + w0 * n as f64, 0.0);
    }
    for n in 0..n_max {
        let coupling = Complex64::new(params.rabi_frequency(n), 0.0);
        let (e, g) = (excited_index(n, n_max), ground_index(n + 1));
        h[(e, g)] = coupling;
        h[(g, e)] = coupling;
    }
    h
}

/// `U_t = exp(-i t H)` assembled from the dressed blocks.
pub fn propagator(t: f64, params: &ModelParams, n_max: usize) -> ComplexMatrix {
    let dim = ATOM_DIM * (n_max + 1);
    let w0 = params.omega0;
    let mut u = ComplexMatrix::zeros(dim, dim);
    u[(ground_index(0), ground_index(0))] = Complex64::from_polar(1.0, 0.5 * w0 * t);
    for n in 0..n_max {
        let block = dressed_block(n, params).evolution(t);
        let idx = [excited_index(n, n_max), ground_index(n + 1)];
        for i in 0..2 {
            for j in 0..2 {
                u[(idx[i], idx[j])] = block[i][j];
            }
        }
    }
    let edge = excited_index(n_max, n_max);
    u[(edge, edge)] = Complex64::from_polar(1.0, -w0 * (n_max as f64 + 0.5) * t);
    u
}

/// Initial product state `rho (x) omega` together with the model, ready to be
/// evolved to any time.
#[derive(Debug, Clone)]
pub struct JcSystem {
    atom: AtomState,
    field: FieldConfig,
    params: ModelParams,
    initial: DensityMatrix,
}

impl JcSystem {
    pub fn new(atom: AtomState, field: FieldConfig, params: ModelParams) -> Self {
        let initial = DensityMatrix::from_matrix_unchecked(tensor_product(
            atom.density_matrix().matrix(),
            field.density_matrix().matrix(),
        ));
        JcSystem {
            atom,
            field,
            params,
            initial,
        }
    }

    pub fn atom(&self) -> &AtomState {
        &self.atom
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dims(&self) -> (usize, usize) {
        self.field.dims()
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.initial
    }

    /// `U_t (rho (x) omega) U_t^dagger`
    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("time must be finite, got {t}")));
        }
        if t == 0.0 {
            return Ok(self.initial.clone());
        }
        let u = propagator(t, &self.params, self.field.n_max());
        Ok(self.initial.conjugate_by_unitary(&u))
    }

    /// Excited-level population `<2| rho_t^A |2>` read off the joint state.
    pub fn excited_population(&self, t: f64) -> Result<f64> {
        let state = self.state_at(t)?;
        let n_max = self.field.n_max();
        Ok((0..=n_max)
            .map(|n| state.matrix()[(excited_index(n, n_max), excited_index(n, n_max))].re)
            .sum())
    }
}

/// Joint state at time `t` for the given initial atom and field.
pub fn evolve(atom: &AtomState, field: &FieldConfig, params: &ModelParams, t: f64) -> Result<DensityMatrix> {
    JcSystem::new(*atom, *field, *params).state_at(t)
}

/// Closed-form excited-to-excited probability
/// `c(t) = e^{-m} sum_{n <= n_max} m^n/n! cos^2(Omega_n t)`.
pub fn transition_probability_closed(t: f64, mean_photons: f64, g: f64, n_max: usize) -> f64 {
    poisson_weights(mean_photons, n_max)
        .iter()
        .enumerate()
        .map(|(n, w)| w * (g * ((n + 1) as f64).sqrt() * t).cos().powi(2))
        .sum()
}

/// Closed-form scalars of the evolved state; the coherences `e2`, `e3` are
/// kept by magnitude only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoeffs {
    pub s: f64,
    pub c: f64,
    pub e1: f64,
    pub e4: f64,
    pub e2_mag: f64,
    pub e3_mag: f64,
}

pub fn closed_form_coeffs(t: f64, atom: &AtomState, field: &FieldConfig, params: &ModelParams) -> ClosedFormCoeffs {
    let weights = poisson_weights(field.mean_photons(), field.n_max());
    let (mut c, mut s, mut sin2) = (0.0, 0.0, 0.0);
    for (n, w) in weights.iter().enumerate() {
        let phase = params.rabi_frequency(n) * t;
        c += w * phase.cos().powi(2);
        s += w * phase.sin().powi(2);
        sin2 += w * (2.0 * phase).sin();
    }
    let (l0, l1) = (atom.lambda0(), atom.lambda1());
    let coherence = 0.5 * (l1 - l0).abs() * sin2.abs();
    ClosedFormCoeffs {
        s,
        c,
        e1: l0 * s + l1 * c,
        e4: l0 * c + l1 * s,
        e2_mag: coherence,
        e3_mag: coherence,
    }
}
