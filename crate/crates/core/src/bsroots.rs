//! Bernstein-Sato roots as p-adic limits of ν-invariants.
//!
//! A p-adic integer α is a root exactly when its digit truncation
//! `|α_{<e}|` is a residue of a level-`e` ν-invariant for every `e`. The
//! search below works with a finite horizon `e_max`:
//!
//! 1. residue sets are built for levels `1..=e_max+1`, the extra level acting
//!    as a look-ahead that discards words which die one level later;
//! 2. digit words valid at every level are grown by tree search;
//! 3. each surviving word of length `e_max` is matched against eventually
//!    periodic expansions, shortest preperiod first, then shortest period,
//!    with `k + 2d ≤ e_max` so the period is seen at least twice;
//! 4. a candidate is kept only if it is negative and its truncations are
//!    valid at every computed level.
//!
//! Words that admit no such candidate are reported as unresolved.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fparith::{base_p_digits, DigitVector, PrimeModulus};
use crate::frobroot::PowerRoots;
use crate::groebner::Ideal;
use crate::invariants::{nu_invariants_with, FjEntry, NuSet};
use crate::padic::{rational_from_digits, split_negative, truncation_value, DigitStream, PadicRational};

/// Residues mod `p^e` of the level-`e` ν-invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationSet {
    pub level: u32,
    pub p: PrimeModulus,
    pub valid: BTreeSet<u64>,
}

impl TruncationSet {
    pub fn from_nu(nu: &NuSet) -> Self {
        TruncationSet {
            level: nu.level,
            p: nu.p,
            valid: nu.residues(),
        }
    }
}

pub fn valid_truncations(a: &Ideal, e: u32) -> Result<TruncationSet> {
    let mut roots = PowerRoots::new(&a.interreduced());
    Ok(TruncationSet::from_nu(&nu_invariants_with(&mut roots, e)?))
}

/// Truncation sets for levels `1..=top`, sharing one root cache.
pub fn truncation_sets(a: &Ideal, top: u32) -> Result<Vec<TruncationSet>> {
    let mut roots = PowerRoots::new(&a.interreduced());
    (1..=top)
        .map(|e| Ok(TruncationSet::from_nu(&nu_invariants_with(&mut roots, e)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsRootReport {
    /// Sorted ascending.
    pub roots: Vec<PadicRational>,
    /// Level-`e_max` digit words without a rational resolution.
    pub unresolved: Vec<DigitVector>,
    pub e_max: u32,
    /// Deepest level whose truncation set was consulted.
    pub checked_level: u32,
}

pub fn bernstein_sato_roots(a: &Ideal, e_max: u32) -> Result<BsRootReport> {
    if e_max < 2 {
        return Err(Error::Precondition("e_max must be at least 2".into()));
    }
    let sets = truncation_sets(a, e_max + 1)?;
    bs_roots_from_sets(&sets, e_max)
}

/// The search itself, given truncation sets for levels `1..=e_max+1` in order.
pub fn bs_roots_from_sets(sets: &[TruncationSet], e_max: u32) -> Result<BsRootReport> {
    if e_max < 2 {
        return Err(Error::Precondition("e_max must be at least 2".into()));
    }
    let top = e_max + 1;
    if sets.len() < top as usize || sets.iter().enumerate().any(|(i, s)| s.level != i as u32 + 1) {
        return Err(Error::Precondition(format!(
            "need truncation sets for levels 1..={top}"
        )));
    }
    let p = sets[0].p;
    let pb = p.get() as u64;

    // alive[e-1]: values in [0, p^e) whose every prefix is valid.
    let mut alive: Vec<BTreeSet<u64>> = Vec::with_capacity(top as usize);
    for (i, set) in sets.iter().take(top as usize).enumerate() {
        let e = i as u32 + 1;
        let layer: BTreeSet<u64> = if e == 1 {
            set.valid.clone()
        } else {
            let below = pb.pow(e - 1);
            set.valid
                .iter()
                .copied()
                .filter(|v| alive[i - 1].contains(&(v % below)))
                .collect()
        };
        alive.push(layer);
    }

    let m = pb.pow(e_max);
    let survivors: BTreeSet<u64> = alive[top as usize - 1].iter().map(|v| v % m).collect();

    let valid_everywhere =
        |alpha: &PadicRational| (1..=top).all(|e| alive[e as usize - 1].contains(&(truncation_value(alpha, e) as u64)));

    let len = e_max as usize;
    let mut roots: BTreeSet<PadicRational> = BTreeSet::new();
    let mut unresolved = Vec::new();
    for w in survivors {
        let word = base_p_digits(w as u128, p, len);
        let digits = word.digits();
        let mut found = None;
        'search: for k in 0..len {
            for d in 1..=len {
                if k + 2 * d > len {
                    break;
                }
                let consistent = (k..len).all(|i| digits[i] == digits[k + (i - k) % d]);
                if !consistent {
                    continue;
                }
                let stream = DigitStream::new(digits[..k].to_vec(), digits[k..k + d].to_vec(), p)?;
                let alpha = rational_from_digits(&stream)?;
                if alpha.is_negative() && valid_everywhere(&alpha) {
                    found = Some(alpha);
                    break 'search;
                }
            }
        }
        match found {
            Some(alpha) => {
                roots.insert(alpha);
            }
            None => unresolved.push(word),
        }
    }

    Ok(BsRootReport {
        roots: roots.into_iter().collect(),
        unresolved,
        e_max,
        checked_level: top,
    })
}

/// Compare root classes `β + Z` with `-λ + Z` over F-jumping numbers
/// `λ ∈ Z_(p)`, using the representatives from [`split_negative`].
pub fn verify_bs_vs_fjn(a: &Ideal, bs: &BsRootReport, fj: &[FjEntry]) -> Result<bool> {
    if !bs.unresolved.is_empty() {
        return Err(Error::Unresolved);
    }
    let p = a.ring().p();
    if bs.roots.iter().any(|b| b.p() != p) {
        return Err(Error::ContextMismatch);
    }
    let bs_classes: BTreeSet<PadicRational> = bs.roots.iter().map(|b| split_negative(b).1).collect();
    let mut fj_classes = BTreeSet::new();
    for entry in fj {
        let lambda = entry.value().ok_or(Error::Unresolved)?;
        if lambda.denom() % p.get() as i128 == 0 {
            continue;
        }
        let beta = PadicRational::from_ratio(-lambda, p)?;
        fj_classes.insert(split_negative(&beta).1);
    }
    Ok(bs_classes == fj_classes)
}
