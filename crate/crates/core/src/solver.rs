//! Recovering a hidden subgroup of `W_n` from its coset oracle.
//!
//! A run has two sampling stages that share one simulator:
//!
//! 1. The base stage restricts the oracle to `N` (the `a` qubit stays at
//!    `|0>`) and runs the abelian algorithm on the `2n` low qubits. The kernel
//!    of the outcomes is `U ∩ N`.
//! 2. The Fourier stage prepares `Σ_g |g>|f(g)>`, optionally measures the
//!    label register, applies the transform of `W_n` and measures. Each
//!    outcome is uniform on `U^⊥` or on `(U^t)^⊥`. Once the outcomes span
//!    `<U^⊥, (U^t)^⊥>` in `phi` coordinates, the kernel of that span is
//!    `phi(U ∩ U^t)`.
//!
//! Each stage samples until its span has not grown for `2n + 2` rounds. The
//! union of both generator sets is accepted only if the oracle maps every
//! generator to the label of the identity; otherwise sampling resumes. Both
//! candidates always contain the true factors, so an accepted answer is
//! exact.

use alloc::vec::Vec;

use rand::Rng;

use crate::element::check_arity;
use crate::f2::{BitMatrix, BitVector, Span};
use crate::qft::qft_circuit;
use crate::sim::{Circuit, Gate, StateVector, MAX_QUBITS};
use crate::subgroup::{closure, perp_bruteforce, preimage_is_subgroup, random_subgroup};
use crate::{seeded_rng, Error, GroupElement, HiddenFunction, Result};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1998;

/// Rounds without span growth after which an abelian run counts as stable.
pub const STABLE_WINDOW: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverParams {
    pub n: u32,
    /// Budget of Fourier samples.
    pub max_rounds: usize,
    /// Budget of base-stage samples.
    pub base_rounds: usize,
    pub seed: u64,
    /// Measure the label register before the transform.
    pub retain_step4_measurement: bool,
}

impl SolverParams {
    pub fn new(n: u32) -> Self {
        let n_us = n as usize;
        Self {
            n,
            max_rounds: 6 * n_us + 10,
            base_rounds: 4 * n_us + 8,
            seed: DEFAULT_SEED,
            retain_step4_measurement: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn stagnation_window(&self) -> usize {
        2 * self.n as usize + 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub round: usize,
    pub element: GroupElement,
    /// Label seen when the label register was measured first.
    pub coset_label: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub n: u32,
    pub generators: Vec<GroupElement>,
    /// Fourier samples drawn.
    pub rounds_used: usize,
    pub base_rounds_used: usize,
    pub base_generators: Vec<GroupElement>,
    pub intersection_generators: Vec<GroupElement>,
    pub verified: bool,
    pub transcript: Vec<SampleRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianOutcome {
    /// RREF basis of the recovered subspace.
    pub basis: Vec<BitVector>,
    pub outcomes: Vec<BitVector>,
    /// The span had stopped growing (or was full) by the last round.
    pub stable: bool,
}

fn check_register(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            what: "simulated register",
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

fn label_bits(labels: &[u32]) -> usize {
    let max = labels.iter().copied().max().unwrap_or(0);
    (32 - max.leading_zeros()).max(1) as usize
}

/// One abelian round: Hadamards on `active`, an optional basis change,
/// the oracle, the inverse basis change, Hadamards, and a measurement of
/// `active`.
struct AbelianSampler {
    qubits: usize,
    prepare: Circuit,
    active: Vec<usize>,
}

impl AbelianSampler {
    fn new(
        inputs: usize,
        active: Vec<usize>,
        basis_change: &[Gate],
        table: &[u32],
    ) -> Result<Self> {
        let out_bits = label_bits(table);
        let qubits = inputs + out_bits;
        check_register(qubits)?;
        let mut prepare = Circuit::new(qubits);
        for &q in &active {
            prepare.push(Gate::H(q))?;
        }
        for g in basis_change {
            prepare.push(g.clone())?;
        }
        prepare.push(Gate::OracleXor {
            inputs: (0..inputs).collect(),
            outputs: (inputs..qubits).collect(),
            table: table.iter().map(|&l| u64::from(l)).collect(),
        })?;
        for g in basis_change.iter().rev() {
            prepare.push(g.clone())?;
        }
        for &q in &active {
            prepare.push(Gate::H(q))?;
        }
        Ok(Self {
            qubits,
            prepare,
            active,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BitVector> {
        let mut s = StateVector::zero(self.qubits)?;
        self.prepare.run(&mut s)?;
        let outcome = s.measure(&self.active, rng)?;
        Ok(BitVector::from_word(outcome, self.active.len()))
    }

    /// Samples until the span is stable for `window` rounds or `budget` runs
    /// out, continuing from `state`.
    fn run<R: Rng + ?Sized>(
        &self,
        state: &mut StageState,
        budget: usize,
        window: usize,
        rng: &mut R,
    ) -> Result<()> {
        while state.used < budget && state.since_growth < window {
            let v = self.sample(rng)?;
            state.record(v);
        }
        Ok(())
    }
}

#[derive(Default)]
struct StageState {
    span: Span,
    outcomes: Vec<BitVector>,
    used: usize,
    since_growth: usize,
}

impl StageState {
    fn record(&mut self, v: BitVector) {
        self.used += 1;
        if self.span.insert(v.clone()) {
            self.since_growth = 0;
        } else {
            self.since_growth += 1;
        }
        self.outcomes.push(v);
    }

    fn kernel(&self, len: usize) -> Vec<BitVector> {
        BitMatrix::from_rows(len, self.span.basis())
            .expect("uniform lengths")
            .kernel_basis()
    }
}

/// Abelian hidden subgroup algorithm on `F_2^m` for `rounds` rounds.
///
/// `oracle[v]` is the label of `v`. Each outcome lies in `V^⊥`; the
/// returned basis is the kernel of all outcomes.
pub fn abelian_hsp<R: Rng + ?Sized>(
    m: usize,
    oracle: &[u32],
    rounds: usize,
    rng: &mut R,
) -> Result<AbelianOutcome> {
    if oracle.len() != 1 << m {
        return Err(Error::LengthMismatch {
            expected: 1 << m,
            found: oracle.len(),
        });
    }
    let sampler = AbelianSampler::new(m, (0..m).collect(), &[], oracle)?;
    let mut state = StageState::default();
    sampler.run(&mut state, rounds, usize::MAX, rng)?;
    Ok(AbelianOutcome {
        basis: if m == 0 { Vec::new() } else { state.kernel(m) },
        stable: state.span.dim() == m || state.since_growth >= STABLE_WINDOW.min(rounds),
        outcomes: state.outcomes,
    })
}

fn base_sampler(f: &HiddenFunction) -> Result<AbelianSampler> {
    let n = f.n() as usize;
    AbelianSampler::new(2 * n + 1, (0..2 * n).collect(), &[], f.table())
}

/// Samples over `D = {(y, y; a)}`: Hadamards on `y` and `a`, with `y`
/// copied into `x` around the oracle.
fn diagonal_sampler(f: &HiddenFunction) -> Result<AbelianSampler> {
    let n = f.n() as usize;
    let copy: Vec<Gate> = (0..n)
        .map(|i| Gate::Cnot {
            control: n + i,
            target: i,
        })
        .collect();
    let active = (n..=2 * n).collect();
    AbelianSampler::new(2 * n + 1, active, &copy, f.table())
}

fn base_elements(n: u32, basis: &[BitVector]) -> Vec<GroupElement> {
    basis
        .iter()
        .map(|v| GroupElement::from_index(n, v.to_word()))
        .collect()
}

fn diagonal_elements(n: u32, basis: &[BitVector]) -> Vec<GroupElement> {
    basis
        .iter()
        .map(|v| {
            let w = v.to_word();
            let y = w & ((1 << n) - 1);
            GroupElement::new(n, y, y, w >> n & 1 == 1).expect("fits")
        })
        .collect()
}

/// Generators of `U ∩ N` from the base-stage samples alone.
pub fn solve_base_group(f: &HiddenFunction, params: &SolverParams) -> Result<Vec<GroupElement>> {
    let n = f.n();
    check_arity(n)?;
    let sampler = base_sampler(f)?;
    let mut rng = seeded_rng(params.seed, 1);
    let mut state = StageState::default();
    sampler.run(
        &mut state,
        params.base_rounds,
        params.stagnation_window(),
        &mut rng,
    )?;
    Ok(base_elements(n, &state.kernel(2 * n as usize)))
}

/// Finds the generator of a hidden subgroup of order at most two without
/// the non-abelian transform. `None` means `U` is trivial.
pub fn find_involution(f: &HiddenFunction, params: &SolverParams) -> Result<Option<GroupElement>> {
    let n = f.n();
    check_arity(n)?;
    let mut rng = seeded_rng(params.seed, 2);
    let rounds = params.base_rounds;

    let mut in_base = StageState::default();
    base_sampler(f)?.run(&mut in_base, rounds, usize::MAX, &mut rng)?;
    let from_base = base_elements(n, &in_base.kernel(2 * n as usize));

    let mut in_diag = StageState::default();
    diagonal_sampler(f)?.run(&mut in_diag, rounds, usize::MAX, &mut rng)?;
    let from_diag = diagonal_elements(n, &in_diag.kernel(n as usize + 1));

    if from_base.len() > 1 || from_diag.len() > 1 {
        return Err(Error::PromiseViolation(alloc::format!(
            "hidden subgroup has more than one involution ({} in N, {} in D)",
            1usize << from_base.len(),
            1usize << from_diag.len()
        )));
    }
    match (from_base.first(), from_diag.first()) {
        (Some(a), Some(b)) if a != b => Err(Error::PromiseViolation(alloc::format!(
            "distinct involutions {a} and {b}"
        ))),
        (a, b) => {
            let g = a.or(b).copied();
            if let Some(g) = g {
                if g.order() > 2 {
                    return Err(Error::PromiseViolation(alloc::format!(
                        "{g} is not an involution"
                    )));
                }
            }
            Ok(g)
        }
    }
}

/// One pass of oracle, optional label measurement, transform and
/// measurement of the group register.
pub struct FourierSampler {
    n: u32,
    qubits: usize,
    group_qubits: Vec<usize>,
    label_qubits: Vec<usize>,
    superpose: Circuit,
    transform: Circuit,
    retain_label_measurement: bool,
}

impl FourierSampler {
    pub fn new(f: &HiddenFunction, retain_label_measurement: bool) -> Result<Self> {
        let n = f.n();
        let group = 2 * n as usize + 1;
        let qubits = group + label_bits(f.table());
        check_register(qubits)?;
        let group_qubits: Vec<usize> = (0..group).collect();
        let label_qubits: Vec<usize> = (group..qubits).collect();
        let mut superpose = Circuit::new(qubits);
        for &q in &group_qubits {
            superpose.push(Gate::H(q))?;
        }
        superpose.push(Gate::OracleXor {
            inputs: group_qubits.clone(),
            outputs: label_qubits.clone(),
            table: f.table().iter().map(|&l| u64::from(l)).collect(),
        })?;
        let transform = Circuit::from_gates(qubits, qft_circuit(n).circuit.gates().to_vec())?;
        Ok(Self {
            n,
            qubits,
            group_qubits,
            label_qubits,
            superpose,
            transform,
            retain_label_measurement,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(GroupElement, Option<u32>)> {
        let mut s = StateVector::zero(self.qubits)?;
        self.superpose.run(&mut s)?;
        let label = if self.retain_label_measurement {
            Some(s.measure(&self.label_qubits, rng)? as u32)
        } else {
            None
        };
        self.transform.run(&mut s)?;
        let outcome = s.measure(&self.group_qubits, rng)?;
        Ok((GroupElement::from_index(self.n, outcome), label))
    }

    /// Exact distribution of the measured group element, indexed by basis
    /// index, with the label register left unmeasured.
    pub fn output_distribution(&self) -> Result<Vec<f64>> {
        let mut s = StateVector::zero(self.qubits)?;
        self.superpose.run(&mut s)?;
        self.transform.run(&mut s)?;
        Ok(s.probabilities(&self.group_qubits))
    }
}

/// A single Fourier sample (`round` is left at 0).
pub fn fourier_sample<R: Rng + ?Sized>(
    f: &HiddenFunction,
    params: &SolverParams,
    rng: &mut R,
) -> Result<SampleRecord> {
    let sampler = FourierSampler::new(f, params.retain_step4_measurement)?;
    let (element, coset_label) = sampler.sample(rng)?;
    Ok(SampleRecord {
        round: 0,
        element,
        coset_label,
    })
}

/// Recovers generators of the hidden subgroup of `f`.
pub fn solve(f: &HiddenFunction, params: &SolverParams) -> Result<SolveReport> {
    let n = f.n();
    check_arity(n)?;
    if params.n != n {
        return Err(Error::ArityMismatch {
            left: params.n,
            right: n,
        });
    }
    let len = 2 * n as usize + 1;
    let window = params.stagnation_window();
    let mut rng = seeded_rng(params.seed, 0);
    let base = base_sampler(f)?;
    let fourier = FourierSampler::new(f, params.retain_step4_measurement)?;
    let identity_label = f.eval(&GroupElement::identity(n));
    let in_kernel = |g: &GroupElement| f.eval(g) == identity_label;

    let mut base_state = StageState::default();
    let mut fourier_state = StageState::default();
    let mut transcript = Vec::new();

    loop {
        base.run(&mut base_state, params.base_rounds, window, &mut rng)?;
        while fourier_state.used < params.max_rounds && fourier_state.since_growth < window {
            let (element, coset_label) = fourier.sample(&mut rng)?;
            transcript.push(SampleRecord {
                round: fourier_state.used,
                element,
                coset_label,
            });
            fourier_state.record(element.phi());
        }

        let base_generators = base_elements(n, &base_state.kernel(2 * n as usize));
        let perp_basis = fourier_state.kernel(len);
        let closed = preimage_is_subgroup(n, &perp_basis);
        let intersection_generators: Vec<GroupElement> = perp_basis
            .iter()
            .map(|v| GroupElement::from_phi(n, v).expect("length 2n+1"))
            .collect();

        let base_ok = base_generators.iter().all(in_kernel);
        let fourier_ok = closed && intersection_generators.iter().all(in_kernel);
        let report = |verified| {
            let mut generators: Vec<GroupElement> = base_generators
                .iter()
                .chain(&intersection_generators)
                .copied()
                .filter(|g| !g.is_identity())
                .collect();
            generators.sort_unstable();
            generators.dedup();
            SolveReport {
                n,
                generators,
                rounds_used: fourier_state.used,
                base_rounds_used: base_state.used,
                base_generators: base_generators.clone(),
                intersection_generators: intersection_generators.clone(),
                verified,
                transcript: transcript.clone(),
            }
        };
        if base_ok && fourier_ok {
            return Ok(report(true));
        }
        let stuck = (!base_ok && base_state.used >= params.base_rounds)
            || (!fourier_ok && fourier_state.used >= params.max_rounds);
        if stuck {
            return Ok(report(false));
        }
        if !base_ok {
            base_state.since_growth = 0;
        }
        if !fourier_ok {
            fourier_state.since_growth = 0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuccessStats {
    pub i: usize,
    pub trials: usize,
    pub successes: usize,
    /// `1 - 2^(-i/4)`.
    pub bound: f64,
}

impl SuccessStats {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Binomial standard error of the rate.
    pub fn sigma(&self) -> f64 {
        let p = self.rate();
        libm::sqrt(p * (1.0 - p) / self.trials as f64)
    }
}

pub fn probability_bound(i: usize) -> f64 {
    1.0 - libm::exp2(-(i as f64) / 4.0)
}

/// One trial of the generation experiment: a random subgroup, then the
/// prefixes of one sample stream checked at every checkpoint for whether
/// they generate `<U^⊥, (U^t)^⊥>`.
pub fn success_trial(n: u32, seed: u64, trial: u64, checkpoints: &[usize]) -> Result<Vec<bool>> {
    check_arity(n)?;
    if n > 3 {
        return Err(Error::Capacity {
            what: "success experiment arity",
            limit: 3,
        });
    }
    let mut rng = seeded_rng(seed, trial);
    let u = random_subgroup(n, &mut rng);
    let swapped = u.conjugate_swap();
    let mut both = perp_bruteforce(n, u.elements())?;
    both.extend(perp_bruteforce(n, swapped.elements())?);
    let target = closure(n, &both);

    let f = HiddenFunction::build(&u);
    let sampler = FourierSampler::new(&f, true)?;
    let total = checkpoints.iter().copied().max().unwrap_or(0);
    let mut samples = Vec::with_capacity(total);
    for _ in 0..total {
        samples.push(sampler.sample(&mut rng)?.0);
    }
    Ok(checkpoints
        .iter()
        .map(|&i| closure(n, &samples[..i]) == target)
        .collect())
}

/// Runs `trials` independent trials (trial `k` uses stream `k` of `seed`).
pub fn success_sweep(
    n: u32,
    trials: usize,
    checkpoints: &[usize],
    seed: u64,
) -> Result<Vec<SuccessStats>> {
    let mut successes = alloc::vec![0usize; checkpoints.len()];
    for k in 0..trials {
        for (s, ok) in successes
            .iter_mut()
            .zip(success_trial(n, seed, k as u64, checkpoints)?)
        {
            *s += ok as usize;
        }
    }
    Ok(collect_stats(trials, checkpoints, &successes))
}

pub fn collect_stats(
    trials: usize,
    checkpoints: &[usize],
    successes: &[usize],
) -> Vec<SuccessStats> {
    checkpoints
        .iter()
        .zip(successes)
        .map(|(&i, &s)| SuccessStats {
            i,
            trials,
            successes: s,
            bound: probability_bound(i),
        })
        .collect()
}

/// Generation rate after `samples_per_trial` samples.
pub fn success_experiment<R: Rng + ?Sized>(
    n: u32,
    trials: usize,
    samples_per_trial: usize,
    rng: &mut R,
) -> Result<SuccessStats> {
    let seed = rng.gen();
    Ok(success_sweep(n, trials, &[samples_per_trial], seed)?[0])
}
