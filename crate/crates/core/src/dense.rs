//! Exact dense-matrix ground truth for small systems.
//!
//! Basis states are indexed big-endian: qubit 0 is the most significant bit,
//! matching `σ_0 ⊗ σ_1 ⊗ …`. Exponentials of Hermitian matrices go through
//! an eigendecomposition, or directly through the diagonal when every term
//! is ZZ.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{Gate, GatePattern};
use crate::error::{DaqcError, Result};
use crate::pauli::CouplingVector;
use crate::schedule::Schedule;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DEFAULT_QUBIT_CAP: usize = 10;
/// Entrywise Hermiticity tolerance, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const STATE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(DaqcError::SizeCap { n, cap })
    } else {
        Ok(())
    }
}

/// `P|b⟩ = phase·|target⟩` for a Pauli string `P`.
fn pauli_action(pattern: &GatePattern, basis: usize) -> (usize, Complex64) {
    let n = pattern.len();
    let mut target = basis;
    let mut phase = ONE;
    for (q, gate) in pattern.gates().iter().enumerate() {
        let shift = n - 1 - q;
        let bit = (basis >> shift) & 1;
        match gate {
            Gate::I => {}
            Gate::X => target ^= 1 << shift,
            Gate::Y => {
                target ^= 1 << shift;
                phase *= if bit == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
            }
            Gate::Z => {
                if bit == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (target, phase)
}

fn pauli_matrix(pattern: &GatePattern) -> CMatrix {
    let dim = 1usize << pattern.len();
    let mut m = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let (t, ph) = pauli_action(pattern, b);
        m[(t, b)] += ph;
    }
    m
}

/// `P A P†` for a Pauli string `P`, without forming `P`.
pub fn pauli_conjugate(pattern: &GatePattern, a: &CMatrix) -> CMatrix {
    let dim = a.nrows();
    let actions: Vec<(usize, Complex64)> = (0..dim).map(|b| pauli_action(pattern, b)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for (c, &(tc, pc)) in actions.iter().enumerate() {
        for (r, &(tr, pr)) in actions.iter().enumerate() {
            out[(tr, tc)] = pr * a[(r, c)] * pc.conj();
        }
    }
    out
}

fn is_diagonal(m: &CMatrix) -> bool {
    (0..m.ncols()).all(|c| (0..m.nrows()).all(|r| r == c || m[(r, c)] == ZERO))
}

fn hermitian_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for c in 0..m.ncols() {
        for r in 0..=c {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let scale = m.iter().fold(1.0_f64, |acc, v| acc.max(v.norm()));
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL * scale {
        Err(DaqcError::NotHermitian(dev))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DenseHamiltonian {
    n_qubits: usize,
    matrix: CMatrix,
    diagonal: bool,
}

impl DenseHamiltonian {
    pub fn from_matrix(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(DaqcError::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        check_hermitian(&matrix)?;
        let diagonal = is_diagonal(&matrix);
        Ok(Self { n_qubits, matrix, diagonal })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn diagonal_energies(&self) -> Vec<f64> {
        (0..self.dim()).map(|b| self.matrix[(b, b)].re).collect()
    }

    fn propagator(&self) -> Propagator {
        if self.diagonal {
            Propagator::Diagonal(self.diagonal_energies())
        } else {
            let eig = SymmetricEigen::new(self.matrix.clone());
            Propagator::Eigen {
                values: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            }
        }
    }
}

pub fn build_dense(h: &CouplingVector) -> Result<DenseHamiltonian> {
    build_dense_capped(h, DEFAULT_QUBIT_CAP)
}

/// `Σ_α h_α σ_i^μ σ_j^ν` as a `2^N × 2^N` matrix.
pub fn build_dense_capped(h: &CouplingVector, cap: usize) -> Result<DenseHamiltonian> {
    let n = h.n_qubits();
    check_cap(n, cap)?;
    let dim = 1usize << n;
    let mut matrix = CMatrix::zeros(dim, dim);
    for (key, &c) in h.iter() {
        if c == 0.0 {
            continue;
        }
        let mut pattern = GatePattern::identity(n);
        pattern = with_gate(pattern, key.i, Gate::from_axis(key.mu));
        pattern = with_gate(pattern, key.j, Gate::from_axis(key.nu));
        for b in 0..dim {
            let (t, ph) = pauli_action(&pattern, b);
            matrix[(t, b)] += ph * c;
        }
    }
    Ok(DenseHamiltonian {
        n_qubits: n,
        matrix,
        diagonal: h.is_zz_only(),
    })
}

fn with_gate(pattern: GatePattern, qubit: usize, gate: Gate) -> GatePattern {
    let mut gates = pattern.gates().to_vec();
    gates[qubit] = gate;
    GatePattern::new(gates)
}

/// Eigenvalues of a Hermitian matrix, unordered.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
}

/// Largest eigenvalue magnitude.
pub fn operator_norm(h: &DenseHamiltonian) -> Result<f64> {
    check_hermitian(&h.matrix)?;
    let values = if h.diagonal {
        h.diagonal_energies()
    } else {
        hermitian_eigenvalues(&h.matrix)
    };
    Ok(values.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
}

/// `√Tr(H†H)`.
pub fn frobenius_norm(h: &DenseHamiltonian) -> f64 {
    h.matrix.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral norm of an arbitrary square matrix.
pub fn operator_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let d = a - b;
    if is_diagonal(&d) {
        return (0..d.nrows()).fold(0.0_f64, |m, i| m.max(d[(i, i)].norm()));
    }
    let gram = d.adjoint() * &d;
    hermitian_eigenvalues(&gram)
        .into_iter()
        .fold(0.0_f64, f64::max)
        .max(0.0)
        .sqrt()
}

enum Propagator {
    Diagonal(Vec<f64>),
    Eigen { values: Vec<f64>, vectors: CMatrix },
}

impl Propagator {
    /// `exp(−i t H)`.
    fn at(&self, t: f64) -> CMatrix {
        match self {
            Propagator::Diagonal(e) => {
                CMatrix::from_diagonal(&CVector::from_iterator(e.len(), e.iter().map(|x| Complex64::from_polar(1.0, -t * x))))
            }
            Propagator::Eigen { values, vectors } => {
                let mut scaled = vectors.clone();
                for (c, lambda) in values.iter().enumerate() {
                    let phase = Complex64::from_polar(1.0, -t * lambda);
                    for r in 0..scaled.nrows() {
                        scaled[(r, c)] *= phase;
                    }
                }
                scaled * vectors.adjoint()
            }
        }
    }
}

/// `exp(−i t H)`.
pub fn evolution_operator(h: &DenseHamiltonian, t: f64) -> CMatrix {
    h.propagator().at(t)
}

/// Unitary implemented by running `schedule` on the device `h_real`.
///
/// `q = 1` is the plain block product `Π_k exp(−i t_k H^(k))`; larger `q`
/// splits every block time by `q` and repeats the whole sequence `q` times.
/// Block `k` is `P_k exp(−i t H_real) P_k†`, so one eigendecomposition of
/// `H_real` serves every block.
pub fn replay_unitary(schedule: &Schedule, h_real: &CouplingVector, q: usize) -> Result<CMatrix> {
    if q == 0 {
        return Err(DaqcError::Validation("Trotter step count must be at least 1".into()));
    }
    if h_real.n_qubits() != schedule.n_qubits {
        return Err(DaqcError::DimensionMismatch {
            expected: schedule.n_qubits,
            found: h_real.n_qubits(),
        });
    }
    let h = build_dense(h_real)?;
    let dim = h.dim();
    let steps = q as f64;

    if h.diagonal {
        let energies = h.diagonal_energies();
        let mut phases = vec![ONE; dim];
        for _ in 0..q {
            for (pattern, t) in schedule.blocks() {
                for (b, phase) in phases.iter_mut().enumerate() {
                    // Conjugation by a Pauli string permutes a diagonal.
                    let (src, _) = pauli_action(pattern, b);
                    *phase *= Complex64::from_polar(1.0, -(t / steps) * energies[src]);
                }
            }
        }
        return Ok(CMatrix::from_diagonal(&CVector::from_vec(phases)));
    }

    let propagator = h.propagator();
    let mut cycle = CMatrix::identity(dim, dim);
    for (pattern, t) in schedule.blocks() {
        let block = pauli_conjugate(pattern, &propagator.at(t / steps));
        cycle = block * cycle;
    }
    let mut total = CMatrix::identity(dim, dim);
    for _ in 0..q {
        total = &cycle * total;
    }
    Ok(total)
}

/// Observable as a real combination of Pauli strings.
#[derive(Debug, Clone)]
pub struct ObservableSpec {
    n_qubits: usize,
    terms: Vec<(f64, GatePattern)>,
    support: BTreeSet<usize>,
    op_norm: f64,
}

impl ObservableSpec {
    pub fn new(n_qubits: usize, terms: Vec<(f64, GatePattern)>) -> Result<Self> {
        check_cap(n_qubits, DEFAULT_QUBIT_CAP)?;
        if let Some((_, bad)) = terms.iter().find(|(_, p)| p.len() != n_qubits) {
            return Err(DaqcError::DimensionMismatch {
                expected: n_qubits,
                found: bad.len(),
            });
        }
        if terms.iter().any(|(w, _)| !w.is_finite()) {
            return Err(DaqcError::NonFinite("observable weight".into()));
        }
        let support = terms
            .iter()
            .filter(|(w, _)| *w != 0.0)
            .flat_map(|(_, p)| p.support())
            .collect();
        let mut spec = Self {
            n_qubits,
            terms,
            support,
            op_norm: 0.0,
        };
        let m = spec.matrix();
        spec.op_norm = hermitian_eigenvalues(&m).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        Ok(spec)
    }

    pub fn single_qubit(n_qubits: usize, qubit: usize, gate: Gate) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(DaqcError::Validation(format!("qubit {qubit} outside a {n_qubits}-qubit system")));
        }
        Self::new(n_qubits, vec![(1.0, GatePattern::with_gate_on(n_qubits, gate, &[qubit]))])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn op_norm(&self) -> f64 {
        self.op_norm
    }

    pub fn matrix(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for (w, p) in &self.terms {
            m += pauli_matrix(p) * Complex64::new(*w, 0.0);
        }
        m
    }
}

/// `‖[H, O]‖_op`.
pub fn commutator_norm(h: &DenseHamiltonian, observable: &ObservableSpec) -> Result<f64> {
    if h.n_qubits != observable.n_qubits {
        return Err(DaqcError::DimensionMismatch {
            expected: h.n_qubits,
            found: observable.n_qubits,
        });
    }
    let o = observable.matrix();
    let comm = &h.matrix * &o - &o * &h.matrix;
    // i[H, O] is Hermitian.
    let herm = comm * Complex64::new(0.0, 1.0);
    Ok(hermitian_eigenvalues(&herm).iter().fold(0.0_f64, |a, v| a.max(v.abs())))
}

#[derive(Debug, Clone)]
pub enum InitialState {
    /// `|0…0⟩`
    AllZero,
    /// `|+…+⟩`
    AllPlus,
    /// Product of independently Haar-random single-qubit states.
    RandomProduct { seed: u64 },
    Density(CMatrix),
}

impl InitialState {
    fn pure_vector(&self, n: usize) -> Option<CVector> {
        let single: Box<dyn FnMut(usize) -> [Complex64; 2]> = match self {
            InitialState::AllZero => Box::new(|_| [ONE, ZERO]),
            InitialState::AllPlus => {
                let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                Box::new(move |_| [a, a])
            }
            InitialState::RandomProduct { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Box::new(move |_| {
                    let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
                    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    let half = cos_theta.acos() / 2.0;
                    [Complex64::new(half.cos(), 0.0), Complex64::from_polar(half.sin(), phi)]
                })
            }
            InitialState::Density(_) => return None,
        };
        let mut single = single;
        let mut state = CVector::from_element(1, ONE);
        for q in 0..n {
            let amp = single(q);
            state = CVector::from_fn(state.len() * 2, |idx, _| state[idx / 2] * amp[idx % 2]);
        }
        Some(state)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if let InitialState::Density(rho) = self {
            let dim = 1usize << n;
            if rho.nrows() != dim || rho.ncols() != dim {
                return Err(DaqcError::InvalidState(format!("density matrix must be {dim} x {dim}")));
            }
            if hermitian_deviation(rho) > STATE_TOL {
                return Err(DaqcError::InvalidState("density matrix is not Hermitian".into()));
            }
            let trace: Complex64 = rho.diagonal().iter().sum();
            if (trace - ONE).norm() > STATE_TOL {
                return Err(DaqcError::InvalidState(format!("trace {trace} differs from 1")));
            }
            let min = hermitian_eigenvalues(rho).into_iter().fold(f64::INFINITY, f64::min);
            if min < -STATE_TOL {
                return Err(DaqcError::InvalidState(format!("negative eigenvalue {min}")));
            }
        }
        Ok(())
    }
}

/// `Tr(O U ρ₀ U†)`.
pub fn evolved_expectation(u: &CMatrix, observable: &ObservableSpec, state: &InitialState) -> Result<f64> {
    let n = observable.n_qubits;
    state.validate(n)?;
    let o = observable.matrix();
    let value = match state.pure_vector(n) {
        Some(psi) => {
            let phi = u * psi;
            (phi.adjoint() * (&o * &phi))[(0, 0)].re
        }
        None => {
            let InitialState::Density(rho) = state else { unreachable!() };
            (&o * u * rho * u.adjoint()).trace().re
        }
    };
    Ok(value)
}

/// `Δ_O = |Tr(O ρ) − Tr(O ρ′)|` between ideal evolution under `h_p` for
/// time `time` and the replayed schedule on `h_real`.
pub fn expectation_deviation(
    h_p: &CouplingVector,
    schedule: &Schedule,
    h_real: &CouplingVector,
    rho0: &InitialState,
    observable: &ObservableSpec,
    time: f64,
    q: usize,
) -> Result<f64> {
    if !(time > 0.0) {
        return Err(DaqcError::Validation(format!("evolution time must be positive, got {time}")));
    }
    let ideal = evolution_operator(&build_dense(h_p)?, time);
    let faulty = replay_unitary(schedule, h_real, q)?;
    let delta = (evolved_expectation(&ideal, observable, rho0)? - evolved_expectation(&faulty, observable, rho0)?).abs();
    if delta > 2.0 * observable.op_norm * (1.0 + 1e-9) + 1e-12 {
        return Err(DaqcError::InternalConsistency(format!(
            "expectation deviation {delta} exceeds 2‖O‖ = {}",
            2.0 * observable.op_norm
        )));
    }
    Ok(delta)
}
