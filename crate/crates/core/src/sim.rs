//! Dense statevector simulation.
//!
//! Basis index bit `q` is the value of qubit `q`. Every run is a
//! deterministic function of the circuit, the input state and the injected
//! random source.

use core::f64::consts::FRAC_1_SQRT_2;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

pub type Complex = Complex64;

/// Largest register accepted by [`StateVector`].
pub const MAX_QUBITS: usize = 26;
/// Largest register accepted by [`circuit_to_matrix`].
pub const MAX_MATRIX_QUBITS: usize = 12;

const NORM_DRIFT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Toffoli {
        controls: [usize; 2],
        target: usize,
    },
    Cswap {
        control: usize,
        targets: [usize; 2],
    },
    /// Moves qubit `i` to position `perm[i]`.
    QubitPerm(Vec<usize>),
    /// `|v>|w> -> |v>|w ⊕ table[v]>`, where `v` is read from `inputs`
    /// (`inputs[k]` is bit `k`) and the mask is written to `outputs`.
    OracleXor {
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        table: Vec<u64>,
    },
}

impl Gate {
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Cnot { .. } => "CNOT",
            Gate::Toffoli { .. } => "TOFFOLI",
            Gate::Cswap { .. } => "CSWAP",
            Gate::QubitPerm(_) => "QUBIT_PERM",
            Gate::OracleXor { .. } => "ORACLE_XOR",
        }
    }

    /// Cost in Toffoli gates: a controlled swap is three Toffolis.
    pub fn toffoli_cost(&self) -> usize {
        match self {
            Gate::Toffoli { .. } => 1,
            Gate::Cswap { .. } => 3,
            _ => 0,
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], *target],
            Gate::Cswap { control, targets } => vec![*control, targets[0], targets[1]],
            Gate::QubitPerm(perm) => (0..perm.len()).collect(),
            Gate::OracleXor {
                inputs, outputs, ..
            } => inputs.iter().chain(outputs).copied().collect(),
        }
    }

    fn validate(&self, qubit_count: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(q) = qs.iter().find(|&&q| q >= qubit_count) {
            return Err(Error::MalformedGate(format!(
                "{} touches qubit {q} of a {qubit_count}-qubit register",
                self.kind()
            )));
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::MalformedGate(format!(
                "{} repeats a qubit",
                self.kind()
            )));
        }
        match self {
            Gate::QubitPerm(perm) => {
                let mut targets = perm.clone();
                targets.sort_unstable();
                if perm.len() != qubit_count || targets != (0..qubit_count).collect::<Vec<_>>() {
                    return Err(Error::MalformedGate(
                        "QUBIT_PERM must permute every qubit".into(),
                    ));
                }
            }
            Gate::OracleXor {
                inputs,
                outputs,
                table,
            } => {
                if table.len() != 1 << inputs.len() {
                    return Err(Error::MalformedGate(format!(
                        "ORACLE_XOR table has {} entries for {} inputs",
                        table.len(),
                        inputs.len()
                    )));
                }
                if outputs.len() < 64 && table.iter().any(|&m| m >> outputs.len() != 0) {
                    return Err(Error::MalformedGate(
                        "ORACLE_XOR mask wider than the output register".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Self {
            qubit_count,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn from_gates(qubit_count: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(qubit_count);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn count(&self, kind: &str) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn toffoli_cost(&self) -> usize {
        self.gates.iter().map(Gate::toffoli_cost).sum()
    }

    /// Replaces each controlled swap by three Toffoli gates.
    pub fn decompose_cswaps(&self) -> Self {
        let gates = self
            .gates
            .iter()
            .flat_map(|g| match *g {
                Gate::Cswap {
                    control,
                    targets: [p, q],
                } => vec![
                    Gate::Toffoli {
                        controls: [control, p],
                        target: q,
                    },
                    Gate::Toffoli {
                        controls: [control, q],
                        target: p,
                    },
                    Gate::Toffoli {
                        controls: [control, p],
                        target: q,
                    },
                ],
                ref other => vec![other.clone()],
            })
            .collect();
        Self {
            qubit_count: self.qubit_count,
            gates,
        }
    }

    /// Applies the gates in order.
    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        if state.qubit_count() != self.qubit_count {
            return Err(Error::DimensionMismatch {
                expected: self.qubit_count,
                found: state.qubit_count(),
            });
        }
        for g in &self.gates {
            state.apply(g)?;
        }
        Ok(())
    }
}

pub fn run_circuit(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    let mut out = s.clone();
    c.run(&mut out)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: u64) -> Result<Self> {
        if qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "statevector qubit count",
                limit: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex::new(0.0, 0.0); 1 << qubits];
        let slot = amps
            .get_mut(index as usize)
            .ok_or(Error::DimensionMismatch {
                expected: 1 << qubits,
                found: index as usize,
            })?;
        *slot = Complex::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// Wraps explicit amplitudes; the length must be a power of two and the
    /// norm must be one.
    pub fn from_amplitudes(amps: Vec<Complex>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: amps.len().next_power_of_two(),
                found: amps.len(),
            });
        }
        let qubits = amps.len().trailing_zeros() as usize;
        if qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "statevector qubit count",
                limit: MAX_QUBITS,
            });
        }
        let s = Self { qubits, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::ZeroNorm);
        }
        Ok(s)
    }

    /// Equal superposition over the given basis indices.
    pub fn uniform_over(qubits: usize, indices: &[u64]) -> Result<Self> {
        let mut s = Self::zero(qubits)?;
        s.amps[0] = Complex::new(0.0, 0.0);
        let amp = Complex::new(1.0 / libm::sqrt(indices.len() as f64), 0.0);
        for &i in indices {
            *s.amps.get_mut(i as usize).ok_or(Error::DimensionMismatch {
                expected: 1 << qubits,
                found: i as usize,
            })? = amp;
        }
        Ok(s)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        #[cfg(debug_assertions)]
        let before = self.norm_sqr();
        match gate {
            Gate::H(q) => self.hadamard(*q),
            Gate::X(q) => self.swap_where(0, 1 << q),
            Gate::Cnot { control, target } => self.swap_where(1 << control, 1 << target),
            Gate::Toffoli { controls, target } => {
                self.swap_where((1 << controls[0]) | (1 << controls[1]), 1 << target)
            }
            Gate::Cswap { control, targets } => self.controlled_swap(*control, *targets),
            Gate::QubitPerm(perm) => self.permute_qubits(perm),
            Gate::OracleXor {
                inputs,
                outputs,
                table,
            } => self.oracle_xor(inputs, outputs, table),
        }
        #[cfg(debug_assertions)]
        debug_assert!(
            (self.norm_sqr() - before).abs() <= NORM_DRIFT,
            "norm drift after {}",
            gate.kind()
        );
        Ok(())
    }

    fn hadamard(&mut self, q: usize) {
        let bit = 1usize << q;
        let s = Complex::new(FRAC_1_SQRT_2, 0.0);
        for i in (0..self.amps.len()).filter(|i| i & bit == 0) {
            let (a, b) = (self.amps[i], self.amps[i | bit]);
            self.amps[i] = (a + b) * s;
            self.amps[i | bit] = (a - b) * s;
        }
    }

    /// Flips `flip` on every basis state whose `controls` bits are all set.
    fn swap_where(&mut self, controls: usize, flip: usize) {
        for i in 0..self.amps.len() {
            if i & controls == controls && i & flip == 0 {
                self.amps.swap(i, i | flip);
            }
        }
    }

    fn controlled_swap(&mut self, control: usize, [p, q]: [usize; 2]) {
        let (c, p, q) = (1usize << control, 1usize << p, 1usize << q);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & p != 0 && i & q == 0 {
                self.amps.swap(i, i ^ p ^ q);
            }
        }
    }

    fn permute_qubits(&mut self, perm: &[usize]) {
        let mut out = vec![Complex::new(0.0, 0.0); self.amps.len()];
        for (i, &amp) in self.amps.iter().enumerate() {
            let j = perm
                .iter()
                .enumerate()
                .filter(|(k, _)| i >> k & 1 == 1)
                .fold(0usize, |acc, (_, &to)| acc | 1 << to);
            out[j] = amp;
        }
        self.amps = out;
    }

    fn oracle_xor(&mut self, inputs: &[usize], outputs: &[usize], table: &[u64]) {
        let mut out = vec![Complex::new(0.0, 0.0); self.amps.len()];
        for (i, &amp) in self.amps.iter().enumerate() {
            let v = gather(i, inputs);
            out[i ^ scatter(table[v], outputs)] = amp;
        }
        self.amps = out;
    }

    /// Exact marginal distribution of `qubits` (`qubits[k]` is outcome bit `k`).
    pub fn probabilities(&self, qubits: &[usize]) -> Vec<f64> {
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[gather(i, qubits)] += a.norm_sqr();
        }
        probs
    }

    /// Projective measurement of `qubits`; collapses and renormalizes the
    /// state in place and returns the outcome.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubits: &[usize], rng: &mut R) -> Result<u64> {
        if qubits.is_empty() || qubits.iter().any(|&q| q >= self.qubits) {
            return Err(Error::MalformedGate(
                "measurement qubits out of range".into(),
            ));
        }
        let probs = self.probabilities(qubits);
        let total: f64 = probs.iter().sum();
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut outcome = probs
            .iter()
            .rposition(|&p| p > 0.0)
            .ok_or(Error::ZeroNorm)?;
        for (k, &p) in probs.iter().enumerate() {
            acc += p;
            if r < acc && p > 0.0 {
                outcome = k;
                break;
            }
        }
        let p = probs[outcome];
        if p <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / libm::sqrt(p);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if gather(i, qubits) == outcome {
                *a *= scale;
            } else {
                *a = Complex::new(0.0, 0.0);
            }
        }
        Ok(outcome as u64)
    }
}

/// Functional form of [`StateVector::measure`].
pub fn measure<R: Rng + ?Sized>(
    s: &StateVector,
    qubits: &[usize],
    rng: &mut R,
) -> Result<(u64, StateVector)> {
    let mut collapsed = s.clone();
    let outcome = collapsed.measure(qubits, rng)?;
    Ok((outcome, collapsed))
}

#[inline]
fn gather(i: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | ((i >> q) & 1) << k)
}

#[inline]
fn scatter(v: u64, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | ((v as usize >> k) & 1) << q)
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex) {
        self.data[row * self.dim + col] = v;
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        libm::sqrt(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).norm_sqr())
                .fold(0.0, f64::max),
        )
    }

    /// Largest deviation of `M M†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.matmul(&self.adjoint())
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }
}

/// The full unitary of `c`, column `j` being the image of `|j>`.
pub fn circuit_to_matrix(c: &Circuit) -> Result<CMatrix> {
    let q = c.qubit_count();
    if q > MAX_MATRIX_QUBITS {
        return Err(Error::Capacity {
            what: "matrix qubit count",
            limit: MAX_MATRIX_QUBITS,
        });
    }
    let dim = 1usize << q;
    let mut m = CMatrix::zeros(dim);
    for j in 0..dim {
        let mut s = StateVector::basis(q, j as u64)?;
        c.run(&mut s)?;
        for (i, a) in s.amplitudes().iter().enumerate() {
            m.set(i, j, *a);
        }
    }
    Ok(m)
}
