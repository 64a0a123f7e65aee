//! Exact linear algebra over `F_2` on packed words.
//!
//! Bases come back in reduced row-echelon form: the pivot of a row is its
//! lowest set bit, rows are sorted by pivot, and every pivot column has a
//! single one. Two bases span the same space iff they are equal.

use core::fmt;
use core::str::FromStr;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bit vectors have positive length");
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    /// Low `len` bits of `word`, `len <= 64`.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        v.words[0] = if len == WORD {
            word
        } else {
            word & ((1 << len) - 1)
        };
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packs the vector into one word.
    ///
    /// # Panics
    /// If the vector is longer than 64 bits.
    pub fn to_word(&self) -> u64 {
        assert!(self.len <= WORD, "vector does not fit a word");
        self.words[0]
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Lowest set position.
    pub fn pivot(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    /// `self ^= other`.
    ///
    /// # Panics
    /// If the lengths differ.
    pub fn xor_assign(&mut self, other: &Self) {
        self.check_len(other).expect("length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Standard inner product over `F_2`.
    ///
    /// # Panics
    /// If the lengths differ.
    pub fn dot(&self, other: &Self) -> bool {
        self.check_len(other).expect("length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 1
            == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// Bits in index order, position 0 first.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason| Error::Parse {
            literal: String::from(s),
            reason,
        };
        if s.is_empty() {
            return Err(fail("empty bit string"));
        }
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(fail("bit strings contain only 0 and 1")),
            }
        }
        Ok(v)
    }
}

/// A rectangular matrix stored as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        Self {
            rows: Vec::new(),
            cols,
        }
    }

    pub fn identity(size: usize) -> Self {
        Self {
            rows: (0..size).map(|i| BitVector::unit(size, i)).collect(),
            cols: size,
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        check_lengths(&rows, cols)?;
        Ok(Self { rows, cols })
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        check_lengths(core::slice::from_ref(&row), self.cols)?;
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        rref(&self.rows).len()
    }

    /// Basis of `{v : M v = 0}`, of size `cols - rank`, in RREF.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let reduced = rref(&self.rows);
        let pivots: Vec<usize> = reduced.iter().map(|r| r.pivot().unwrap()).collect();
        let mut basis = Vec::with_capacity(self.cols - reduced.len());
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = BitVector::unit(self.cols, free);
            for (row, &p) in reduced.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        rref(&basis)
    }

    /// `M v` over `F_2`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        check_lengths(core::slice::from_ref(v), self.cols)?;
        let mut out = BitVector::zeros(self.rows.len().max(1));
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        Ok(out)
    }
}

fn check_lengths(vectors: &[BitVector], len: usize) -> Result<()> {
    match vectors.iter().find(|v| v.len() != len) {
        Some(v) => Err(Error::LengthMismatch {
            expected: len,
            found: v.len(),
        }),
        None => Ok(()),
    }
}

/// Reduced row-echelon basis of the span of `vectors` (zero rows dropped).
pub fn rref(vectors: &[BitVector]) -> Vec<BitVector> {
    let mut span = Span::default();
    for v in vectors {
        span.insert(v.clone());
    }
    span.basis()
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    m.kernel_basis()
}

/// Whether `v` lies in the span of `basis` (which need not be independent).
pub fn span_contains(basis: &[BitVector], v: &BitVector) -> Result<bool> {
    check_lengths(basis, v.len())?;
    let mut span = Span::default();
    for b in basis {
        span.insert(b.clone());
    }
    Ok(span.contains(v))
}

/// Basis of all vectors orthogonal to each of `vectors`.
pub fn orthogonal_complement(vectors: &[BitVector], ambient_len: usize) -> Result<Vec<BitVector>> {
    Ok(BitMatrix::from_rows(ambient_len, vectors.to_vec())?.kernel_basis())
}

/// Echelon basis that grows one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: Vec<BitVector>,
}

impl Span {
    fn reduce(&self, mut v: BitVector) -> BitVector {
        for r in &self.rows {
            let p = r.pivot().unwrap();
            if v.get(p) {
                v.xor_assign(r);
            }
        }
        v
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: BitVector) -> bool {
        if let Some(r) = self.rows.first() {
            assert_eq!(r.len(), v.len(), "length mismatch");
        }
        let v = self.reduce(v);
        let Some(p) = v.pivot() else {
            return false;
        };
        for r in &mut self.rows {
            if r.get(p) {
                r.xor_assign(&v);
            }
        }
        let at = self.rows.partition_point(|r| r.pivot().unwrap() < p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The basis in reduced row-echelon form.
    pub fn basis(&self) -> Vec<BitVector> {
        self.rows.clone()
    }
}
