//! Fourier transform of `W_n`.
//!
//! The transform factors as
//! `H^{⊗2n} · CSWAP_a · H_a · CSWAP_a`: a swap of every `x_i` with `y_i`
//! controlled by the `a` qubit, a Hadamard on `a`, the same controlled swap
//! again, then Hadamards on all `x` and `y` qubits. Multiplied out it is
//!
//! ```text
//!           1   | A     A·Π |
//! DFT  =  ----  |           |      A = H^{⊗2n} (normalized), Π = x↔y swap
//!          √2   | A·Π   -A  |
//! ```
//!
//! whose entry at `(g, h)` is `(-1)^mu(g, h) / √(2^(2n+1))`.

use alloc::vec::Vec;

use crate::element::{check_arity, group_order, mu_bits, swap_halves};
use crate::sim::{CMatrix, Circuit, Complex, Gate};
use crate::{Error, Result};

/// Largest arity for dense matrices.
pub const MAX_MATRIX_ARITY: u32 = 3;
/// Largest arity for circuit construction.
pub const MAX_CIRCUIT_ARITY: u32 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QftVariant {
    /// With the trailing controlled-swap block; entries are `(-1)^mu`.
    #[default]
    Symmetric,
    /// Without the trailing block. Unitary, but not the `mu` form.
    Plain,
}

#[derive(Clone, Debug)]
pub struct QftBundle {
    pub n: u32,
    pub circuit: Circuit,
    pub toffoli_count: usize,
    pub hadamard_count: usize,
}

fn check_circuit_arity(n: u32) -> Result<()> {
    if n == 0 || n > MAX_CIRCUIT_ARITY {
        return Err(Error::InvalidArity(n));
    }
    Ok(())
}

fn swap_block(circuit: &mut Circuit, n: usize) {
    for i in 0..n {
        circuit
            .push(Gate::Cswap {
                control: 2 * n,
                targets: [i, n + i],
            })
            .expect("qubits in range");
    }
}

/// The symmetric transform on `2n + 1` qubits.
///
/// # Panics
/// If `n` is outside `1..=64`.
pub fn qft_circuit(n: u32) -> QftBundle {
    qft_circuit_variant(n, QftVariant::Symmetric).expect("arity in 1..=64")
}

pub fn qft_circuit_variant(n: u32, variant: QftVariant) -> Result<QftBundle> {
    check_circuit_arity(n)?;
    let m = n as usize;
    let mut circuit = Circuit::new(2 * m + 1);
    if variant == QftVariant::Symmetric {
        swap_block(&mut circuit, m);
    }
    circuit.push(Gate::H(2 * m))?;
    swap_block(&mut circuit, m);
    for q in 0..2 * m {
        circuit.push(Gate::H(q))?;
    }
    Ok(QftBundle {
        n,
        toffoli_count: circuit.toffoli_cost(),
        hadamard_count: circuit.count("H"),
        circuit,
    })
}

fn check_matrix_arity(n: u32) -> Result<()> {
    check_arity(n)?;
    if n > MAX_MATRIX_ARITY {
        return Err(Error::Capacity {
            what: "dense transform arity",
            limit: MAX_MATRIX_ARITY as usize,
        });
    }
    Ok(())
}

/// Assembles the transform from `A = H^{⊗2n}` and the swap permutation `Π`.
pub fn qft_matrix_block(n: u32) -> Result<CMatrix> {
    check_matrix_arity(n)?;
    let half = 1usize << (2 * n);
    let hadamard_scale = 1.0 / (1u64 << n) as f64;
    let a = CMatrix::from_fn(half, |r, c| {
        let sign = if (r & c).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        Complex::new(sign * hadamard_scale, 0.0)
    });
    let pi = CMatrix::from_fn(half, |r, c| {
        Complex::new(
            if r as u64 == swap_halves(n, c as u64) {
                1.0
            } else {
                0.0
            },
            0.0,
        )
    });
    let a_pi = a.matmul(&pi);
    let outer = core::f64::consts::FRAC_1_SQRT_2;
    Ok(CMatrix::from_fn(2 * half, |r, c| {
        let (rb, cb) = (r / half, c / half);
        let (r, c) = (r % half, c % half);
        let v = match (rb, cb) {
            (0, 0) => a.get(r, c),
            (1, 1) => -a.get(r, c),
            _ => a_pi.get(r, c),
        };
        v * outer
    }))
}

/// Entry `(g, h)` is `(-1)^mu(g, h) / √(2^(2n+1))`.
pub fn qft_matrix_entrywise(n: u32) -> Result<CMatrix> {
    let signs = qft_sign_matrix(n)?;
    let scale = 1.0 / libm::sqrt(group_order(n) as f64);
    let dim = signs.len();
    Ok(CMatrix::from_fn(dim, |r, c| {
        Complex::new(f64::from(signs[r][c]) * scale, 0.0)
    }))
}

/// The transform scaled by `√(2^(2n+1))`: a matrix of exact `±1` entries.
pub fn qft_sign_matrix(n: u32) -> Result<Vec<Vec<i8>>> {
    check_matrix_arity(n)?;
    let dim = group_order(n);
    Ok((0..dim)
        .map(|g| {
            (0..dim)
                .map(|h| if mu_bits(n, g, h) { -1 } else { 1 })
                .collect()
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateCountRow {
    pub n: u32,
    pub hadamards: usize,
    pub toffolis: usize,
    pub total: usize,
}

/// Gate counts of the symmetric transform for `n = 1..=n_max`.
pub fn gate_count_report(n_max: u32) -> Result<Vec<GateCountRow>> {
    check_circuit_arity(n_max)?;
    Ok((1..=n_max)
        .map(|n| {
            let b = qft_circuit(n);
            GateCountRow {
                n,
                hadamards: b.hadamard_count,
                toffolis: b.toffoli_count,
                total: b.hadamard_count + b.toffoli_count,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::circuit_to_matrix;

    const TOL: f64 = 1e-10;

    #[test]
    fn counts_for_small_n() {
        let b = qft_circuit(1);
        assert_eq!((b.hadamard_count, b.toffoli_count), (3, 6));
        assert_eq!(b.circuit.count("CSWAP"), 2);
        let b = qft_circuit(4);
        assert_eq!(b.hadamard_count, 9);
        assert!(b.toffoli_count <= 24);
        assert!(qft_circuit_variant(0, QftVariant::Symmetric).is_err());
        assert!(qft_circuit_variant(65, QftVariant::Symmetric).is_err());
    }

    #[test]
    fn report_rows_are_affine() {
        let rows = gate_count_report(64).unwrap();
        assert_eq!(
            rows[0],
            GateCountRow {
                n: 1,
                hadamards: 3,
                toffolis: 6,
                total: 9
            }
        );
        for r in rows {
            let n = r.n as usize;
            assert_eq!(r.hadamards, 2 * n + 1);
            assert_eq!(r.toffolis, 6 * n);
            assert_eq!(r.total, 8 * n + 1);
        }
    }

    #[test]
    fn entrywise_examples() {
        let m = qft_matrix_entrywise(1).unwrap();
        let s = 1.0 / 8f64.sqrt();
        assert!((m.get(0, 0).re - s).abs() < TOL);
        assert!((m.get(4, 4).re + s).abs() < TOL);
        for n in 1..=3 {
            let m = qft_matrix_entrywise(n).unwrap();
            assert!(m.max_abs_diff(&m.adjoint()) < TOL);
        }
        assert!(qft_matrix_entrywise(4).is_err());
    }

    #[test]
    fn block_matches_entrywise_and_circuit() {
        for n in 1..=2 {
            let block = qft_matrix_block(n).unwrap();
            let entry = qft_matrix_entrywise(n).unwrap();
            let circ = circuit_to_matrix(&qft_circuit(n).circuit).unwrap();
            assert!(block.max_abs_diff(&entry) < TOL);
            assert!(circ.max_abs_diff(&entry) < TOL);
        }
    }

    #[test]
    fn upper_left_block_is_abelian_transform() {
        let n = 2;
        let m = qft_matrix_block(n).unwrap();
        let half: usize = 1 << (2 * n);
        let scale = 1.0 / (group_order(n) as f64).sqrt();
        for r in 0..half {
            for c in 0..half {
                let sign = if (r & c).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                assert!((m.get(r, c).re - sign * scale).abs() < TOL);
            }
        }
    }

    #[test]
    fn plain_variant_is_unitary_but_different() {
        for n in 1..=2 {
            let plain = qft_circuit_variant(n, QftVariant::Plain).unwrap();
            assert_eq!(plain.toffoli_count, 3 * n as usize);
            let m = circuit_to_matrix(&plain.circuit).unwrap();
            assert!(m.unitarity_defect() < TOL);
            assert!(m.max_abs_diff(&qft_matrix_entrywise(n).unwrap()) > 0.1);
        }
    }
}
