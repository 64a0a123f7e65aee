//! Subgroups of `W_n`, their `mu`-perps and hidden functions.
//!
//! Subgroups are held as a generator list plus the materialized element set,
//! sorted by index. Equality is equality of element sets.

use core::fmt;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::element::{check_arity, group_order, mu_bits, phi_bits, swap_halves};
use crate::f2::{BitMatrix, BitVector, Span};
use crate::{Error, GroupElement, Result};

/// Largest arity for which element sets are materialized.
pub const MAX_CLOSURE_ARITY: u32 = 12;
/// Largest arity for full enumeration of `W_n` in brute-force oracles.
pub const MAX_BRUTE_FORCE_ARITY: u32 = 6;

/// Smallest subgroup containing `generators`, sorted by index.
///
/// # Panics
/// If `n > MAX_CLOSURE_ARITY` or a generator has another arity.
pub fn closure(n: u32, generators: &[GroupElement]) -> Vec<GroupElement> {
    assert!(
        n <= MAX_CLOSURE_ARITY,
        "closure of W_{n} is too large to materialize"
    );
    check_arity(n).expect("invalid arity");
    assert!(generators.iter().all(|g| g.n() == n), "arity mismatch");
    let gens: Vec<u64> = generators.iter().map(|g| g.index()).collect();
    let mut seen = vec![false; group_order(n) as usize];
    seen[0] = true;
    let mut found = vec![0u64];
    let mut head = 0;
    while head < found.len() {
        let g = found[head];
        head += 1;
        for &h in &gens {
            let p = crate::element::mul_bits(n, g, h);
            if !seen[p as usize] {
                seen[p as usize] = true;
                found.push(p);
            }
        }
    }
    found.sort_unstable();
    found
        .into_iter()
        .map(|i| GroupElement::from_index(n, i))
        .collect()
}

/// All products `a · b` with `a ∈ left`, `b ∈ right`, sorted and deduplicated.
pub fn product_set(left: &[GroupElement], right: &[GroupElement]) -> Vec<GroupElement> {
    let set: BTreeSet<GroupElement> = left
        .iter()
        .flat_map(|&a| right.iter().map(move |&b| a * b))
        .collect();
    set.into_iter().collect()
}

/// Whether `set` is closed under multiplication.
pub fn is_closed(set: &[GroupElement]) -> bool {
    set.iter()
        .all(|&a| set.iter().all(|&b| set.binary_search(&(a * b)).is_ok()))
}

#[derive(Clone)]
pub struct Subgroup {
    n: u32,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn generate(n: u32, generators: &[GroupElement]) -> Result<Self> {
        check_arity(n)?;
        if n > MAX_CLOSURE_ARITY {
            return Err(Error::Capacity {
                what: "subgroup closure arity",
                limit: MAX_CLOSURE_ARITY as usize,
            });
        }
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::ArityMismatch {
                left: n,
                right: g.n(),
            });
        }
        let generators: Vec<GroupElement> = generators
            .iter()
            .copied()
            .filter(|g| !g.is_identity())
            .collect();
        Ok(Self {
            n,
            elements: closure(n, &generators),
            generators,
        })
    }

    /// Wraps an element set that is known to be a subgroup and picks a
    /// generating set for it greedily.
    fn from_elements(n: u32, mut elements: Vec<GroupElement>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let mut generators = Vec::new();
        let mut current = closure(n, &[]);
        for &g in &elements {
            if current.binary_search(&g).is_err() {
                generators.push(g);
                current = closure(n, &generators);
            }
        }
        debug_assert_eq!(current, elements, "element set is not a subgroup");
        Self {
            n,
            generators,
            elements,
        }
    }

    pub fn trivial(n: u32) -> Self {
        Self::generate(n, &[]).expect("invalid arity")
    }

    pub fn whole(n: u32) -> Self {
        Self::from_elements(n, GroupElement::all(n).collect())
    }

    /// The base group `N = {(x, y; 0)}`.
    pub fn base(n: u32) -> Self {
        Self::from_elements(n, GroupElement::all(n).filter(|g| g.in_base()).collect())
    }

    /// The diagonal group `D = {(x, x; a)}`.
    pub fn diagonal(n: u32) -> Self {
        Self::from_elements(
            n,
            GroupElement::all(n).filter(|g| g.in_diagonal()).collect(),
        )
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.n == other.n && self.elements.iter().all(|g| other.contains(g))
    }

    /// `U ∩ N`.
    pub fn intersect_base(&self) -> Self {
        Self::from_elements(
            self.n,
            self.elements
                .iter()
                .copied()
                .filter(|g| g.in_base())
                .collect(),
        )
    }

    /// `U^t = t U t`, elementwise exchange of `x` and `y`.
    pub fn conjugate_swap(&self) -> Self {
        let mut elements: Vec<GroupElement> = self.elements.iter().map(|g| g.swapped()).collect();
        elements.sort_unstable();
        Self {
            n: self.n,
            generators: self.generators.iter().map(|g| g.swapped()).collect(),
            elements,
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self::from_elements(
            self.n,
            self.elements
                .iter()
                .copied()
                .filter(|g| other.contains(g))
                .collect(),
        ))
    }

    /// `(U ∩ N, U ∩ U^t)`; their setwise product is `U`.
    pub fn canonical_factorization(&self) -> (Self, Self) {
        let swapped = self.conjugate_swap();
        (
            self.intersect_base(),
            self.intersect(&swapped).expect("same arity"),
        )
    }

    /// `U = U^t`.
    pub fn is_balanced(&self) -> bool {
        self.elements.iter().all(|g| self.contains(&g.swapped()))
    }

    /// `[U : U ∩ N]`, either 1 or 2.
    pub fn base_index(&self) -> usize {
        if self.elements.iter().any(|g| g.a()) {
            2
        } else {
            1
        }
    }

    /// Brute-force `U^⊥`.
    pub fn perp(&self) -> Result<Vec<GroupElement>> {
        perp_bruteforce(self.n, &self.elements)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "> (order {})", self.order())
    }
}

/// All `g ∈ W_n` with `mu(g, s) = 0` for every `s ∈ set`, by enumeration.
pub fn perp_bruteforce(n: u32, set: &[GroupElement]) -> Result<Vec<GroupElement>> {
    check_arity(n)?;
    if n > MAX_BRUTE_FORCE_ARITY {
        return Err(Error::Capacity {
            what: "brute-force perp arity",
            limit: MAX_BRUTE_FORCE_ARITY as usize,
        });
    }
    Ok(GroupElement::all(n)
        .filter(|g| set.iter().all(|s| !g.mu(s)))
        .collect())
}

/// Basis (in `phi` coordinates, RREF) of the kernel of the matrix with rows
/// `phi(s)`.
pub fn perp_linear_basis(n: u32, set: &[GroupElement]) -> Result<Vec<BitVector>> {
    check_arity(n)?;
    let len = (2 * n + 1) as usize;
    let mut m = BitMatrix::new(len);
    for s in set {
        if s.n() != n {
            return Err(Error::ArityMismatch {
                left: n,
                right: s.n(),
            });
        }
        m.push_row(s.phi())?;
    }
    Ok(m.kernel_basis())
}

/// `U^⊥` through linear algebra: `phi^-1` of the kernel.
pub fn perp_linear(n: u32, set: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let basis = perp_linear_basis(n, set)?;
    if basis.len() > 24 {
        return Err(Error::Capacity {
            what: "perp enumeration dimension",
            limit: 24,
        });
    }
    let words: Vec<u64> = basis.iter().map(|b| b.to_word()).collect();
    let mut out: Vec<GroupElement> = (0u64..1 << words.len())
        .map(|mask| {
            let v = words
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, w)| acc ^ w);
            GroupElement::from_index(n, phi_bits(n, v))
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Whether `phi^-1(span(basis))` is a subgroup of `W_n`.
///
/// This holds exactly when the span avoids `a = 1` or is stable under the
/// exchange of the `x` and `y` coordinates.
pub fn preimage_is_subgroup(n: u32, basis: &[BitVector]) -> bool {
    let a_pos = (2 * n) as usize;
    if basis.iter().all(|b| !b.get(a_pos)) {
        return true;
    }
    let mut span = Span::default();
    for b in basis {
        span.insert(b.clone());
    }
    basis.iter().all(|b| {
        let len = b.len();
        span.contains(&BitVector::from_word(swap_halves(n, b.to_word()), len))
    })
}

/// Character sum `Σ_{x ∈ set} (-1)^mu(x, y)` over the integers.
pub fn character_sum(set: &[GroupElement], y: &GroupElement) -> i64 {
    set.iter()
        .map(|x| {
            if mu_bits(y.n(), x.index(), y.index()) {
                -1
            } else {
                1
            }
        })
        .sum()
}

/// A function on `W_n` that is constant on the left cosets `gU` and takes
/// distinct values on distinct cosets.
#[derive(Clone, Debug)]
pub struct HiddenFunction {
    n: u32,
    table: Vec<u32>,
    labels: u32,
    subgroup: Subgroup,
}

impl HiddenFunction {
    /// Labels cosets `0, 1, ...` in order of their smallest element.
    pub fn build(subgroup: &Subgroup) -> Self {
        let n = subgroup.n();
        let order = group_order(n) as usize;
        let mut table = vec![u32::MAX; order];
        let mut labels = 0u32;
        for g in 0..order {
            if table[g] != u32::MAX {
                continue;
            }
            let rep = GroupElement::from_index(n, g as u64);
            for &u in subgroup.elements() {
                table[(rep * u).index() as usize] = labels;
            }
            labels += 1;
        }
        Self {
            n,
            table,
            labels,
            subgroup: subgroup.clone(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eval(&self, g: &GroupElement) -> u32 {
        assert_eq!(g.n(), self.n, "arity mismatch");
        self.table[g.index() as usize]
    }

    /// Label array indexed by basis index.
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Number of labels, `[W_n : U]`.
    pub fn label_count(&self) -> u32 {
        self.labels
    }

    /// Width of the output register needed to hold every label.
    pub fn label_bits(&self) -> u32 {
        (32 - (self.labels - 1).leading_zeros()).max(1)
    }

    /// The planted subgroup. Solvers must not look at this.
    pub fn planted(&self) -> &Subgroup {
        &self.subgroup
    }
}

/// Every subgroup of `W_n` for `n ∈ {1, 2}`, ordered by (order, elements).
pub fn enumerate_subgroups(n: u32) -> Result<Vec<Subgroup>> {
    check_arity(n)?;
    if n > 2 {
        return Err(Error::Capacity {
            what: "subgroup enumeration arity",
            limit: 2,
        });
    }
    let cyclic: Vec<Subgroup> = {
        let mut seen = BTreeSet::new();
        GroupElement::all(n)
            .map(|g| Subgroup::generate(n, &[g]).unwrap())
            .filter(|s| seen.insert(s.elements.clone()))
            .collect()
    };
    let mut seen: BTreeSet<Vec<GroupElement>> = cyclic.iter().map(|s| s.elements.clone()).collect();
    let mut all = cyclic.clone();
    let mut head = 0;
    // Every subgroup is a join of cyclic subgroups.
    while head < all.len() {
        let current = all[head].clone();
        head += 1;
        for c in &cyclic {
            if c.is_subgroup_of(&current) {
                continue;
            }
            let mut gens = current.generators.clone();
            gens.extend_from_slice(&c.generators);
            let joined = Subgroup::generate(n, &gens)?;
            if seen.insert(joined.elements.clone()) {
                all.push(joined);
            }
        }
    }
    all.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(all)
}

/// Closure of `k` uniform elements, `k` uniform in `0..=2n+1`.
///
/// # Panics
/// If `n > MAX_BRUTE_FORCE_ARITY`.
pub fn random_subgroup<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Subgroup {
    assert!(
        n <= MAX_BRUTE_FORCE_ARITY,
        "random subgroups are drawn for n <= 6"
    );
    let k = rng.gen_range(0..=2 * n + 1);
    let gens: Vec<GroupElement> = (0..k)
        .map(|_| GroupElement::from_index(n, rng.gen_range(0..group_order(n))))
        .collect();
    Subgroup::generate(n, &gens).expect("valid arity")
}
