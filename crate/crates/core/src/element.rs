//! Elements `(x, y; a)` of `W_n`.

use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use alloc::string::String;

use crate::f2::BitVector;
use crate::{Error, Result};

/// Largest supported arity; `2n + 1` bits must fit a `u64`.
pub const MAX_ARITY: u32 = 31;

pub(crate) fn check_arity(n: u32) -> Result<()> {
    if (1..=MAX_ARITY).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArity(n))
    }
}

/// Number of elements of `W_n`, `2^(2n+1)`.
pub fn group_order(n: u32) -> u64 {
    1u64 << (2 * n + 1)
}

#[inline]
fn low_mask(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// Exchanges the `x` and `y` fields of a packed word, leaving bit `2n` alone.
#[inline]
pub(crate) fn swap_halves(n: u32, bits: u64) -> u64 {
    let m = low_mask(n);
    let x = bits & m;
    let y = (bits >> n) & m;
    (bits & !((m << n) | m)) | (x << n) | y
}

/// Group law on packed words.
#[inline]
pub(crate) fn mul_bits(n: u32, g: u64, h: u64) -> u64 {
    let a_bit = 1u64 << (2 * n);
    if h & a_bit == 0 {
        g ^ h
    } else {
        swap_halves(n, g) ^ h
    }
}

/// `phi` on packed words: `(x, y; 1)` is sent to `(y, x, 1)`.
#[inline]
pub(crate) fn phi_bits(n: u32, g: u64) -> u64 {
    if g >> (2 * n) & 1 == 1 {
        swap_halves(n, g)
    } else {
        g
    }
}

/// `mu` on packed words, as the parity of the AND of the `phi` images.
#[inline]
pub(crate) fn mu_bits(n: u32, g: u64, h: u64) -> bool {
    (phi_bits(n, g) & phi_bits(n, h)).count_ones() & 1 == 1
}

/// An element `(x, y; a)` of `W_n = Z_2^n ≀ Z_2`.
///
/// Ordering follows the packed index, so sorted element lists are canonical.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    bits: u64,
    n: u32,
}

impl GroupElement {
    /// Builds `(x, y; a)`. Fails when `n` is out of range or `x`, `y` have
    /// bits above position `n`.
    pub fn new(n: u32, x: u64, y: u64, a: bool) -> Result<Self> {
        check_arity(n)?;
        if x > low_mask(n) || y > low_mask(n) {
            return Err(Error::LengthMismatch {
                expected: n as usize,
                found: 64 - x.max(y).leading_zeros() as usize,
            });
        }
        Ok(Self {
            bits: x | (y << n) | ((a as u64) << (2 * n)),
            n,
        })
    }

    /// The neutral element `(0, 0; 0)`.
    ///
    /// # Panics
    /// If `n` is outside `1..=MAX_ARITY`.
    pub fn identity(n: u32) -> Self {
        check_arity(n).expect("invalid arity");
        Self { bits: 0, n }
    }

    /// The swap element `t = (0, 0; 1)`.
    pub fn swap(n: u32) -> Self {
        check_arity(n).expect("invalid arity");
        Self {
            bits: 1 << (2 * n),
            n,
        }
    }

    /// Decodes a basis index.
    ///
    /// # Panics
    /// If `index >= 2^(2n+1)`.
    pub fn from_index(n: u32, index: u64) -> Self {
        assert!(
            index < group_order(n),
            "index {index} out of range for n = {n}"
        );
        Self { bits: index, n }
    }

    /// Iterates over all elements in index order.
    pub fn all(n: u32) -> impl Iterator<Item = Self> {
        check_arity(n).expect("invalid arity");
        (0..group_order(n)).map(move |bits| Self { bits, n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Basis index: `x | y << n | a << 2n`.
    pub fn index(&self) -> u64 {
        self.bits
    }

    pub fn x(&self) -> u64 {
        self.bits & low_mask(self.n)
    }

    pub fn y(&self) -> u64 {
        (self.bits >> self.n) & low_mask(self.n)
    }

    pub fn a(&self) -> bool {
        self.bits >> (2 * self.n) & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.bits == 0
    }

    /// Membership in the base group `N` (`a = 0`).
    pub fn in_base(&self) -> bool {
        !self.a()
    }

    /// Membership in the diagonal group `D` (`x = y`).
    pub fn in_diagonal(&self) -> bool {
        self.x() == self.y()
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        Ok(Self {
            bits: mul_bits(self.n, self.bits, rhs.bits),
            n: self.n,
        })
    }

    /// Base-group elements are involutions; otherwise the inverse is
    /// `g^3 = (y, x; 1)`.
    pub fn inverse(self) -> Self {
        if self.a() {
            self.swapped()
        } else {
            self
        }
    }

    /// `g^-1 · self · g`.
    ///
    /// # Panics
    /// If the arities differ.
    pub fn conjugate(self, g: Self) -> Self {
        g.inverse() * self * g
    }

    /// Conjugation by `t`, which exchanges `x` and `y`.
    pub fn swapped(self) -> Self {
        Self {
            bits: swap_halves(self.n, self.bits),
            n: self.n,
        }
    }

    /// Least `k >= 1` with `g^k = 1`; one of 1, 2, 4.
    pub fn order(self) -> u32 {
        let mut acc = self;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc * self;
            k += 1;
        }
        k
    }

    /// Image under the bijection `phi : W_n -> F_2^(2n+1)` as a packed word.
    pub fn phi_bits(&self) -> u64 {
        phi_bits(self.n, self.bits)
    }

    pub fn phi(&self) -> BitVector {
        BitVector::from_word(self.phi_bits(), (2 * self.n + 1) as usize)
    }

    /// Inverse of [`phi`](Self::phi).
    pub fn from_phi(n: u32, v: &BitVector) -> Result<Self> {
        check_arity(n)?;
        let len = (2 * n + 1) as usize;
        if v.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: v.len(),
            });
        }
        // phi is its own inverse on packed words.
        Ok(Self {
            bits: phi_bits(n, v.to_word()),
            n,
        })
    }

    /// The pairing `mu(g, h) = <phi(g), phi(h)>`.
    ///
    /// # Panics
    /// If the arities differ.
    pub fn mu(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "arity mismatch");
        mu_bits(self.n, self.bits, other.bits)
    }

    /// Parses a literal with a known arity.
    pub fn parse_with_arity(s: &str, n: u32) -> Result<Self> {
        let g: Self = s.parse()?;
        if g.n != n {
            return Err(Error::ArityMismatch {
                left: n,
                right: g.n,
            });
        }
        Ok(g)
    }
}

impl Mul for GroupElement {
    type Output = Self;

    /// # Panics
    /// If the arities differ.
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("arity mismatch")
    }
}

fn write_bits(f: &mut fmt::Formatter<'_>, value: u64, width: u32) -> fmt::Result {
    for i in (0..width).rev() {
        f.write_str(if value >> i & 1 == 1 { "1" } else { "0" })?;
    }
    Ok(())
}

/// Literal form `x|y|a`, most significant bit first, e.g. `101|010|1`.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, self.x(), self.n)?;
        f.write_str("|")?;
        write_bits(f, self.y(), self.n)?;
        f.write_str(if self.a() { "|1" } else { "|0" })
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason| Error::Parse {
            literal: String::from(s),
            reason,
        };
        let mut parts = s.trim().split('|');
        let (Some(xs), Some(ys), Some(as_), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(fail("expected three fields x|y|a"));
        };
        if xs.len() != ys.len() {
            return Err(fail("x and y must have the same width"));
        }
        let n = xs.len() as u32;
        if check_arity(n).is_err() {
            return Err(fail("width out of range"));
        }
        let bits = |field: &str| -> Result<u64> {
            field.chars().try_fold(0u64, |acc, c| match c {
                '0' => Ok(acc << 1),
                '1' => Ok(acc << 1 | 1),
                _ => Err(fail("fields must be binary")),
            })
        };
        let a = match as_ {
            "0" => false,
            "1" => true,
            _ => return Err(fail("a must be 0 or 1")),
        };
        Self::new(n, bits(xs)?, bits(ys)?, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    /// Wreath product law for `G ≀ S_2` written with an explicit permutation:
    /// `(g_1, g_2; τ)(g'_1, g'_2; τ') = (g_{τ'(1)} g'_1, g_{τ'(2)} g'_2; ττ')`.
    fn general_wreath_mul(n: u32, g: GroupElement, h: GroupElement) -> GroupElement {
        let perm = |a: bool| if a { [1usize, 0] } else { [0usize, 1] };
        let (gs, tau) = ([g.x(), g.y()], perm(g.a()));
        let (hs, tau2) = ([h.x(), h.y()], perm(h.a()));
        let comps: Vec<u64> = (0..2).map(|i| gs[tau2[i]] ^ hs[i]).collect();
        let composed = [tau[tau2[0]], tau[tau2[1]]];
        GroupElement::new(n, comps[0], comps[1], composed == [1, 0]).unwrap()
    }

    /// The three-case definition of the pairing.
    fn mu_by_cases(g: GroupElement, h: GroupElement) -> bool {
        let dot = |u: u64, v: u64| (u & v).count_ones() & 1 == 1;
        match (g.a(), h.a()) {
            (false, false) => dot(g.x(), h.x()) ^ dot(g.y(), h.y()),
            (true, true) => !(dot(g.x(), h.x()) ^ dot(g.y(), h.y())),
            _ => dot(g.x(), h.y()) ^ dot(h.x(), g.y()),
        }
    }

    #[test]
    fn identity_literals() {
        assert_eq!(GroupElement::identity(1).to_string(), "0|0|0");
        assert_eq!(GroupElement::identity(3).to_string(), "000|000|0");
    }

    #[test]
    fn powers_of_swap_type_elements() {
        for n in 1..=3 {
            for u in GroupElement::all(n).filter(|g| g.a()) {
                let (x, y) = (u.x(), u.y());
                assert_eq!(u * u, GroupElement::new(n, x ^ y, x ^ y, false).unwrap());
                assert_eq!(u * u * u, GroupElement::new(n, y, x, true).unwrap());
                assert!((u * u * u * u).is_identity());
                assert_eq!(u.conjugate(GroupElement::swap(n)), u.swapped());
            }
        }
    }

    #[test]
    fn base_conjugation_by_transversal_swaps_components() {
        let n = 2;
        for tau in GroupElement::all(n).filter(|g| g.a()) {
            for m in GroupElement::all(n).filter(|g| g.in_base()) {
                let expected = GroupElement::new(n, m.y(), m.x(), false).unwrap();
                assert_eq!(m.conjugate(tau), expected);
            }
        }
    }

    #[test]
    fn agrees_with_general_wreath_formula() {
        for n in 1..=2 {
            for g in GroupElement::all(n) {
                for h in GroupElement::all(n) {
                    assert_eq!(g * h, general_wreath_mul(n, g, h), "{g} * {h}");
                }
            }
        }
    }

    #[test]
    fn group_axioms_exhaustive() {
        for n in 1..=2 {
            let e = GroupElement::identity(n);
            for g in GroupElement::all(n) {
                assert_eq!(e * g, g);
                assert_eq!(g * e, g);
                assert!((g * g.inverse()).is_identity());
                assert!((g.inverse() * g).is_identity());
                assert_eq!(g.conjugate(e), g);
                let t = GroupElement::swap(n);
                assert_eq!(g.conjugate(t).conjugate(t), g);
                assert!([1, 2, 4].contains(&g.order()));
                for h in GroupElement::all(n) {
                    assert_eq!((g * h).conjugate(t), g.conjugate(t) * h.conjugate(t));
                    for k in GroupElement::all(n) {
                        assert_eq!((g * h) * k, g * (h * k));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_of_swap_type() {
        assert_eq!(el("10|01|1").inverse(), el("01|10|1"));
        assert_eq!(el("10|01|0").inverse(), el("10|01|0"));
    }

    #[test]
    fn orders() {
        assert_eq!(GroupElement::identity(2).order(), 1);
        assert_eq!(el("01|00|0").order(), 2);
        assert_eq!(el("11|11|1").order(), 2);
        for g in GroupElement::all(2).filter(|g| g.a() && g.x() != g.y()) {
            assert_eq!(g.order(), 4);
        }
    }

    #[test]
    fn phi_images() {
        let g = el("10|01|1");
        assert_eq!(g.phi_bits(), 0b1_10_01);
        let h = el("10|01|0");
        assert_eq!(h.phi_bits(), h.index());
        let images: std::collections::BTreeSet<u64> =
            GroupElement::all(2).map(|g| g.phi_bits()).collect();
        assert_eq!(images.len(), 32);
        for g in GroupElement::all(2) {
            assert_eq!(GroupElement::from_phi(2, &g.phi()).unwrap(), g);
        }
        assert!(GroupElement::from_phi(2, &BitVector::zeros(4)).is_err());
    }

    #[test]
    fn mu_examples() {
        let t = GroupElement::swap(1);
        assert!(t.mu(&t));
        assert!(el("1|0|0").mu(&el("0|1|1")));
        let e = GroupElement::identity(2);
        for h in GroupElement::all(2).filter(|h| !h.a()) {
            assert!(!e.mu(&h));
        }
    }

    #[test]
    fn mu_matches_case_definition_and_is_symmetric() {
        for n in 1..=2 {
            for g in GroupElement::all(n) {
                for h in GroupElement::all(n) {
                    assert_eq!(g.mu(&h), mu_by_cases(g, h), "{g} {h}");
                    assert_eq!(g.mu(&h), h.mu(&g));
                    // invariance under conjugation by t
                    assert_eq!(g.mu(&h), g.swapped().mu(&h.swapped()));
                    for u in GroupElement::all(n).filter(|u| u.in_base()) {
                        assert_eq!(g.mu(&(u * h)), g.mu(&u) ^ g.mu(&h));
                    }
                }
            }
        }
    }

    #[test]
    fn involutions_lie_in_base_or_diagonal() {
        for g in GroupElement::all(3) {
            if g.order() <= 2 {
                assert!(g.in_base() || g.in_diagonal(), "{g}");
            }
        }
        assert!(el("01|01|1").in_diagonal());
        let g = el("01|10|1");
        assert!(!g.in_base() && !g.in_diagonal());
    }

    #[test]
    fn literal_errors() {
        assert!("0a|b|c".parse::<GroupElement>().is_err());
        assert!("01|1|0".parse::<GroupElement>().is_err());
        assert!("01|10|2".parse::<GroupElement>().is_err());
        assert!("01|10".parse::<GroupElement>().is_err());
        assert!("|||".parse::<GroupElement>().is_err());
        assert!(GroupElement::parse_with_arity("01|10|1", 3).is_err());
        assert!(el("01|10|1").try_mul(GroupElement::identity(1)).is_err());
    }

    proptest! {
        #[test]
        fn literal_roundtrip(n in 1u32..=MAX_ARITY, raw in any::<u64>()) {
            let g = GroupElement::from_index(n, raw % group_order(n));
            prop_assert_eq!(g.to_string().parse::<GroupElement>().unwrap(), g);
            prop_assert_eq!(GroupElement::from_index(n, g.index()), g);
        }

        #[test]
        fn exponent_divides_four(n in 1u32..=20, raw in any::<u64>()) {
            let g = GroupElement::from_index(n, raw % group_order(n));
            prop_assert!(4 % g.order() == 0);
        }
    }
}
