//! Brute-force ν-invariants of monomial ideals, independent of the Gröbner
//! pipeline.
//!
//! For a monomial ideal `b`, `x^μ ∈ C^e(b)` exactly when
//! `x^(p^e μ + (p^e - 1)·1) ∈ b`. So `n` is a ν-invariant of level `e` iff
//! `n = max{s : x^(p^e μ + p^e - 1) ∈ a^s}` for some exponent vector `μ`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fparith::PrimeModulus;
use crate::groebner::Ideal;
use crate::invariants::NuSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<Vec<u32>>,
    n: usize,
    p: PrimeModulus,
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

impl MonomialIdeal {
    /// Keeps only the minimal exponent vectors.
    pub fn new(generators: Vec<Vec<u32>>, n: usize, p: PrimeModulus) -> Result<Self> {
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Precondition("exponent vector length differs from n".into()));
        }
        let mut gens: Vec<Vec<u32>> = generators.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let snapshot = gens.clone();
        gens.retain(|g| !snapshot.iter().any(|h| h != g && dominates(g, h)));
        Ok(MonomialIdeal { generators: gens, n, p })
    }

    /// `None` unless every generator is a single term.
    pub fn from_ideal(i: &Ideal) -> Option<Self> {
        let n = i.ring().nvars();
        let gens = i
            .generators()
            .iter()
            .map(|g| {
                g.is_monomial()
                    .then(|| g.leading_monomial().unwrap().exponents().to_vec())
            })
            .collect::<Option<Vec<_>>>()?;
        MonomialIdeal::new(gens, n, i.ring().p()).ok()
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }
}

/// Largest `s ≤ s_cap` with `x^mu ∈ a^s`; 0 when `x^mu ∉ a`.
///
/// Level `s` keeps the minimal sums `Σ c_i g_i ≤ mu` with `|c| = s`; a
/// dominated sum can never reach further than the one below it.
pub fn max_power_membership(mu: &[u64], a: &MonomialIdeal, s_cap: u64) -> u64 {
    let mut level: Vec<Vec<u64>> = vec![vec![0; a.n]];
    for s in 1..=s_cap {
        let mut next: BTreeSet<Vec<u64>> = BTreeSet::new();
        for v in &level {
            for g in &a.generators {
                let w: Vec<u64> = v.iter().zip(g).map(|(x, y)| x + *y as u64).collect();
                if w.iter().zip(mu).all(|(x, m)| x <= m) {
                    next.insert(w);
                }
            }
        }
        if next.is_empty() {
            return s - 1;
        }
        let all: Vec<Vec<u64>> = next.into_iter().collect();
        level = all
            .iter()
            .filter(|w| {
                !all.iter()
                    .any(|u| u != *w && u.iter().zip(w.iter()).all(|(x, y)| x <= y))
            })
            .cloned()
            .collect();
    }
    s_cap
}

pub fn monomial_nu_invariants(a: &MonomialIdeal, e: u32) -> Result<NuSet> {
    if e == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    if a.generators.is_empty() || a.generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
        return Err(Error::TrivialIdeal);
    }
    let q = a.p.power(e).ok_or(Error::Overflow("p^e exceeds u64"))?;
    let r = a.generators.len();
    let window = r as u64 * q;
    let max_deg = a
        .generators
        .iter()
        .map(|g| g.iter().map(|&x| x as u64).sum::<u64>())
        .max()
        .unwrap_or(0);
    let bound = r as u64 * max_deg;

    let mut members = BTreeSet::new();
    let mut mu = vec![0u64; a.n];
    loop {
        let target: Vec<u64> = mu.iter().map(|m| q * m + q - 1).collect();
        let s = max_power_membership(&target, a, window);
        if s < window {
            members.insert(s);
        }
        // Odometer over [0, bound]^n.
        let mut i = 0;
        loop {
            if i == a.n {
                return Ok(NuSet {
                    level: e,
                    r,
                    p: a.p,
                    members,
                });
            }
            if mu[i] < bound {
                mu[i] += 1;
                break;
            }
            mu[i] = 0;
            i += 1;
        }
    }
}
