//! Brute-force property suites over small wreath products.
//!
//! For `n = 1` every property is checked on all ten subgroups. For `n = 2, 3`
//! it is checked on seeded random subgroups. The first failing instance of a
//! property is kept as a counterexample string.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::qft::{qft_circuit, qft_matrix_block, qft_matrix_entrywise};
use crate::sim::{circuit_to_matrix, StateVector};
use crate::subgroup::{
    character_sum, closure, enumerate_subgroups, is_closed, perp_bruteforce, product_set,
    random_subgroup,
};
use crate::{seeded_rng, Error, GroupElement, Result, Subgroup};

/// Largest arity the suites accept.
pub const MAX_SUITE_ARITY: u32 = 3;
/// Random subgroups drawn per run for `n > 1`.
pub const RANDOM_SUBJECTS: usize = 200;
/// Matrix and amplitude tolerance.
pub const TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Perp,
    Halves,
    Balanced,
    Corollary,
    Qft,
    Theorem6,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Lemma1,
        Suite::Perp,
        Suite::Halves,
        Suite::Balanced,
        Suite::Corollary,
        Suite::Qft,
        Suite::Theorem6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Perp => "perp",
            Suite::Halves => "halves",
            Suite::Balanced => "balanced",
            Suite::Corollary => "corollary",
            Suite::Qft => "qft",
            Suite::Theorem6 => "theorem6",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse {
                literal: s.into(),
                reason: "unknown suite",
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: usize,
    pub passed: usize,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            passed: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.checked
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: u32,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyResult::ok)
    }
}

/// The subgroups a suite runs over.
pub fn subjects(n: u32, seed: u64) -> Result<Vec<Subgroup>> {
    check_suite_arity(n)?;
    if n == 1 {
        return enumerate_subgroups(1);
    }
    let mut rng = seeded_rng(seed, u64::from(n));
    Ok((0..RANDOM_SUBJECTS)
        .map(|_| random_subgroup(n, &mut rng))
        .collect())
}

fn check_suite_arity(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArity(n));
    }
    if n > MAX_SUITE_ARITY {
        return Err(Error::Capacity {
            what: "property suite arity",
            limit: MAX_SUITE_ARITY as usize,
        });
    }
    Ok(())
}

fn show(set: &[GroupElement]) -> String {
    let items: Vec<String> = set.iter().map(|g| format!("{g}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn sorted(mut v: Vec<GroupElement>) -> Vec<GroupElement> {
    v.sort_unstable();
    v.dedup();
    v
}

pub fn run_suite(suite: Suite, n: u32, seed: u64) -> Result<SuiteReport> {
    let subjects = subjects(n, seed)?;
    let mut properties = Vec::new();
    for s in Suite::EACH {
        if suite == s || suite == Suite::All {
            properties.extend(run_one(s, n, seed, &subjects)?);
        }
    }
    Ok(SuiteReport {
        suite,
        n,
        seed,
        properties,
    })
}

fn run_one(suite: Suite, n: u32, seed: u64, subjects: &[Subgroup]) -> Result<Vec<PropertyResult>> {
    Ok(match suite {
        Suite::Lemma1 => alloc::vec![factorization(subjects)],
        Suite::Perp => alloc::vec![character_sums(n, subjects)?],
        Suite::Halves => alloc::vec![halves(n, subjects)?],
        Suite::Balanced => alloc::vec![balanced_iff_closed_perp(n, subjects)?],
        Suite::Corollary => corollaries(n, subjects)?,
        Suite::Qft => alloc::vec![qft_agreement(n)?],
        Suite::Theorem6 => transform_support(n, seed, subjects)?,
        Suite::All => Vec::new(),
    })
}

/// `(U ∩ N)(U ∩ U^t) = U`.
pub fn factorization(subjects: &[Subgroup]) -> PropertyResult {
    let mut r = PropertyResult::new("factorization through N and U meet U^t");
    for u in subjects {
        let (base, inter) = u.canonical_factorization();
        let product = product_set(base.elements(), inter.elements());
        r.check(product == u.elements(), || {
            format!("U = {u:?}: product {}", show(&product))
        });
    }
    r
}

/// `Σ_{x∈U} (-1)^mu(x, y)` is `|U|` on `U^⊥` and `0` elsewhere.
pub fn character_sums(n: u32, subjects: &[Subgroup]) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("perp character sum");
    for u in subjects {
        let perp = u.perp()?;
        let bad = GroupElement::all(n).find(|y| {
            let expected = if perp.binary_search(y).is_ok() {
                u.order() as i64
            } else {
                0
            };
            character_sum(u.elements(), y) != expected
        });
        r.check(bad.is_none(), || {
            let y = bad.expect("failing element");
            format!(
                "U = {u:?}, y = {y}: sum {}",
                character_sum(u.elements(), &y)
            )
        });
    }
    Ok(r)
}

/// A perp with an element outside `N` has exactly half of its elements in `N`.
pub fn halves(n: u32, subjects: &[Subgroup]) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("halves");
    for u in subjects {
        let perp = perp_bruteforce(n, u.elements())?;
        if !perp.iter().any(|g| g.a()) {
            continue;
        }
        let in_base = perp.iter().filter(|g| g.in_base()).count();
        r.check(2 * in_base == perp.len(), || {
            format!("U = {u:?}: {in_base} of {} in N", perp.len())
        });
    }
    Ok(r)
}

/// `U = U^t` exactly when `U^⊥` is closed under multiplication.
pub fn balanced_iff_closed_perp(n: u32, subjects: &[Subgroup]) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("balanced iff perp is a subgroup");
    for u in subjects {
        let perp = perp_bruteforce(n, u.elements())?;
        let closed = is_closed(&perp);
        r.check(u.is_balanced() == closed, || {
            format!(
                "U = {u:?}: balanced {}, perp {} closed {closed}",
                u.is_balanced(),
                show(&perp)
            )
        });
    }
    Ok(r)
}

pub fn corollaries(n: u32, subjects: &[Subgroup]) -> Result<Vec<PropertyResult>> {
    let mut swap = PropertyResult::new("perp of U^t is the swapped perp");
    let mut inter = PropertyResult::new("perp of U meet U^t joins both perps");
    let mut recon = PropertyResult::new("reconstruction: perp of both perps");
    let mut double = PropertyResult::new("galois: perp of perp");
    let mut order = PropertyResult::new("galois: inclusion reversing");

    let mut balanced = Vec::new();
    for u in subjects {
        let ut = u.conjugate_swap();
        let perp = u.perp()?;
        let perp_t = ut.perp()?;
        let swapped = sorted(perp.iter().map(|g| g.swapped()).collect());
        swap.check(perp_t == swapped, || {
            format!("U = {u:?}: {} vs {}", show(&perp_t), show(&swapped))
        });

        let meet = u.intersect(&ut)?;
        let mut both = perp.clone();
        both.extend(&perp_t);
        let joined = closure(n, &both);
        let meet_perp = meet.perp()?;
        inter.check(meet_perp == joined, || {
            format!("U = {u:?}: {} vs {}", show(&meet_perp), show(&joined))
        });

        let back = perp_bruteforce(n, &both)?;
        recon.check(back == meet.elements(), || {
            format!("U = {u:?}: {} vs {:?}", show(&back), meet)
        });

        if u.is_balanced() {
            let pp = perp_bruteforce(n, &perp)?;
            double.check(pp == u.elements(), || format!("U = {u:?}: {}", show(&pp)));
            balanced.push((u.clone(), perp));
        }
    }

    // V ⊆ U among balanced subjects, plus U with its balanced core in N
    let mut pairs: Vec<(Subgroup, Subgroup)> = Vec::new();
    for (u, _) in &balanced {
        let core = u
            .intersect_base()
            .intersect(&u.intersect_base().conjugate_swap())?;
        pairs.push((core, u.clone()));
        for (v, _) in &balanced {
            if n == 1 && v.is_subgroup_of(u) {
                pairs.push((v.clone(), u.clone()));
            }
        }
    }
    for (v, u) in pairs {
        let pu = u.perp()?;
        let pv = v.perp()?;
        order.check(pu.iter().all(|g| pv.binary_search(g).is_ok()), || {
            format!("V = {v:?} in U = {u:?}: {} not in {}", show(&pu), show(&pv))
        });
    }

    Ok(alloc::vec![swap, inter, recon, double, order])
}

/// Circuit, block and entrywise matrices coincide and are unitary.
pub fn qft_agreement(n: u32) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("qft three-way equality");
    let circ = circuit_to_matrix(&qft_circuit(n).circuit)?;
    let block = qft_matrix_block(n)?;
    let entry = qft_matrix_entrywise(n)?;
    for (name, d) in [
        ("circuit vs entrywise", circ.max_abs_diff(&entry)),
        ("block vs entrywise", block.max_abs_diff(&entry)),
        ("circuit vs block", circ.max_abs_diff(&block)),
        ("circuit unitarity", circ.unitarity_defect()),
        ("block unitarity", block.unitarity_defect()),
        ("entrywise unitarity", entry.unitarity_defect()),
    ] {
        r.check(d <= TOLERANCE, || {
            format!("n = {n}: {name} deviation {d:e}")
        });
    }
    Ok(r)
}

/// Transforms the uniform state on `set` and checks that it is supported
/// exactly on `support` with equal magnitudes.
pub fn transform_matches(n: u32, set: &[GroupElement], support: &[GroupElement]) -> Result<bool> {
    let qubits = 2 * n as usize + 1;
    let indices: Vec<u64> = set.iter().map(|g| g.index()).collect();
    let mut s = StateVector::uniform_over(qubits, &indices)?;
    qft_circuit(n).circuit.run(&mut s)?;
    let expected = 1.0 / libm::sqrt(support.len() as f64);
    Ok(s.amplitudes().iter().enumerate().all(|(i, amp)| {
        let inside = support
            .binary_search(&GroupElement::from_index(n, i as u64))
            .is_ok();
        let target = if inside { expected } else { 0.0 };
        (libm::sqrt(amp.norm_sqr()) - target).abs() <= TOLERANCE
    }))
}

pub fn transform_support(n: u32, seed: u64, subjects: &[Subgroup]) -> Result<Vec<PropertyResult>> {
    let mut subgroup_state = PropertyResult::new("transform of subgroup state");
    let mut coset_state = PropertyResult::new("transform of coset state");
    let mut rng = seeded_rng(seed, 100 + u64::from(n));
    for u in subjects {
        let perp = u.perp()?;
        subgroup_state.check(transform_matches(n, u.elements(), &perp)?, || {
            format!("U = {u:?}")
        });

        let g0 = GroupElement::from_index(n, rng.gen_range(0..crate::element::group_order(n)));
        let coset = sorted(u.elements().iter().map(|&h| g0 * h).collect());
        let support = if g0.in_base() {
            perp.clone()
        } else {
            u.conjugate_swap().perp()?
        };
        coset_state.check(transform_matches(n, &coset, &support)?, || {
            format!("U = {u:?}, g0 = {g0}")
        });
    }
    Ok(alloc::vec![subgroup_state, coset_state])
}
