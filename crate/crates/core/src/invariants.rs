//! ν-invariants, F-threshold approximants, test ideals through a stable
//! exponent, approximating-polynomial roots and F-jumping-number search.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::fparith::PrimeModulus;
use crate::frobroot::PowerRoots;
use crate::groebner::{Ideal, PowerTable};
use crate::Fraction;

/// Stable-exponent search stops after this many levels by default.
pub const DEFAULT_STABLE_CAP: u32 = 8;
/// Default number of extra levels checked by [`stable_exponent`].
pub const DEFAULT_DEPTH: u32 = 2;

/// Number of generators after linear interreduction; the window `[0, r p^e)`
/// and the Skoda bound use this count.
pub fn generator_count(a: &Ideal) -> usize {
    a.interreduced().generators().len()
}

fn check_nontrivial(a: &Ideal) -> Result<()> {
    if a.is_zero() || a.is_unit() {
        Err(Error::TrivialIdeal)
    } else {
        Ok(())
    }
}

fn level_size(p: PrimeModulus, e: u32) -> Result<u64> {
    p.power(e).ok_or(Error::Overflow("p^e exceeds u64"))
}

/// The level-`e` ν-invariants in `[0, r p^e)`; larger ones follow from
/// [`NuSet::contains`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuSet {
    pub level: u32,
    pub r: usize,
    pub p: PrimeModulus,
    pub members: BTreeSet<u64>,
}

impl NuSet {
    pub fn window(&self) -> u64 {
        self.r as u64 * self.p.power(self.level).expect("level fits")
    }

    /// Membership in the full (infinite) set, using that the part at or above
    /// `(r-1) p^e` repeats with period `p^e`.
    pub fn contains(&self, n: u64) -> bool {
        let q = self.p.power(self.level).expect("level fits");
        let window = self.window();
        if n < window {
            return self.members.contains(&n);
        }
        let base = window - q;
        self.members.contains(&(base + (n - base) % q))
    }

    /// Residues mod `p^e`.
    pub fn residues(&self) -> BTreeSet<u64> {
        let q = self.p.power(self.level).expect("level fits");
        self.members.iter().map(|n| n % q).collect()
    }
}

/// Jump positions of `n ↦ C^e(a^n)` for `n` in `[0, r p^e)`.
pub fn nu_invariants(a: &Ideal, e: u32) -> Result<NuSet> {
    check_nontrivial(a)?;
    let mut roots = PowerRoots::new(&a.interreduced());
    nu_invariants_with(&mut roots, e)
}

/// As [`nu_invariants`], reusing a root cache across levels.
pub fn nu_invariants_with(roots: &mut PowerRoots, e: u32) -> Result<NuSet> {
    let a = roots.ideal().clone();
    check_nontrivial(&a)?;
    if e == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let p = a.ring().p();
    let r = generator_count(&a);
    let window = r as u64 * level_size(p, e)?;
    let members = (0..window).filter(|&n| roots.jumps_at(n, e)).collect();
    Ok(NuSet {
        level: e,
        r,
        p,
        members,
    })
}

fn check_radical(a: &Ideal, j: &Ideal) -> Result<()> {
    let ring = a.ring();
    let maxdeg = a
        .generators()
        .iter()
        .chain(j.generators())
        .map(|g| g.total_degree())
        .max()
        .unwrap_or(1)
        .max(1);
    let bound = 2 * maxdeg * ring.nvars() as u64;
    let basis = j.reduced_basis();
    'gens: for f in a.generators() {
        let mut g = basis.normal_form(f);
        for _ in 1..bound {
            if g.is_zero() {
                continue 'gens;
            }
            g = basis.normal_form(&g.mul_unchecked(f));
        }
        if !g.is_zero() {
            return Err(Error::RadicalContainment {
                generator: f.to_string(),
                bound,
            });
        }
    }
    Ok(())
}

/// The largest `n` with `a^n ⊄ J^[p^e]`, i.e. with `C^e(a^n) ⊄ J`.
pub fn nu_j(a: &Ideal, j: &Ideal, e: u32) -> Result<u64> {
    check_nontrivial(a)?;
    if a.ring() != j.ring() {
        return Err(Error::ContextMismatch);
    }
    if j.is_unit() {
        return Err(Error::ImproperTarget);
    }
    check_radical(a, j)?;

    let a = a.interreduced();
    let r = generator_count(&a) as u64;
    let q = level_size(a.ring().p(), e)?;
    let mut roots = PowerRoots::new(&a);
    let mut powers = PowerTable::new(&a);
    let principal = a.is_principal();
    // C^e(a^0) = (1) is never inside a proper J.
    let mut n = 1u64;
    loop {
        let root = if principal || n < r * q {
            roots.root(n, e)
        } else {
            // Skoda: C^e(a^n) = a^k C^e(a^(n - k p^e)) once n - k p^e ≥ (r-1) p^e.
            let k = (n - (r - 1) * q) / q;
            let base = roots.root(n - k * q, e);
            powers.power(k as usize).product(&base)?
        };
        if j.contains_ideal(&root)? {
            return Ok(n - 1);
        }
        n += 1;
    }
}

pub fn f_threshold_estimate(a: &Ideal, j: &Ideal, e: u32) -> Result<Fraction> {
    let nu = nu_j(a, j, e)?;
    let q = level_size(a.ring().p(), e)?;
    Ok(Ratio::new(nu as i128, q as i128))
}

/// Outcome of the stable-exponent search.
#[derive(Debug, Clone)]
pub struct StableExponentReport {
    pub e0: u32,
    pub checked_depth: u32,
    /// `τ(a^n)` for `n = 0..=r`.
    pub witnesses: Vec<Ideal>,
}

pub fn stable_exponent(a: &Ideal, depth: u32) -> Result<StableExponentReport> {
    stable_exponent_capped(a, depth, DEFAULT_STABLE_CAP)
}

/// Least `e0 ≤ cap` with `C^e0(a^(n p^e0)) = C^(e0+d)(a^(n p^(e0+d)))` for
/// `n ≤ r`, `1 ≤ d ≤ depth`.
pub fn stable_exponent_capped(a: &Ideal, depth: u32, cap: u32) -> Result<StableExponentReport> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    check_nontrivial(a)?;
    let a = a.interreduced();
    let p = a.ring().p();
    let r = generator_count(&a) as u64;
    let mut roots = PowerRoots::new(&a);
    'levels: for e0 in 1..=cap {
        let mut witnesses = vec![Ideal::unit(a.ring())];
        for n in 1..=r {
            let base = roots.root(n * level_size(p, e0)?, e0);
            for d in 1..=depth {
                let deeper = roots.root(n * level_size(p, e0 + d)?, e0 + d);
                if base != deeper {
                    continue 'levels;
                }
            }
            witnesses.push(base);
        }
        return Ok(StableExponentReport {
            e0,
            checked_depth: depth,
            witnesses,
        });
    }
    Err(Error::NoStableExponent { cap, checked: cap })
}

/// Test ideals `τ(a^λ)` for `λ` with p-power denominator, given a stable
/// exponent. Results are cached by `λ`.
#[derive(Debug, Clone)]
pub struct TestIdeals {
    roots: PowerRoots,
    e0: u32,
    cache: HashMap<(u64, u32), Ideal>,
}

impl TestIdeals {
    pub fn new(a: &Ideal, e0: u32) -> Result<Self> {
        check_nontrivial(a)?;
        Ok(TestIdeals {
            roots: PowerRoots::new(&a.interreduced()),
            e0,
            cache: HashMap::new(),
        })
    }

    pub fn e0(&self) -> u32 {
        self.e0
    }

    /// `τ(a^(n/p^e)) = C^(e+e0)(a^(n p^e0))`.
    pub fn at(&mut self, mut n: u64, mut e: u32) -> Result<Ideal> {
        let p = self.roots.ideal().ring().p().get() as u64;
        while e > 0 && n.is_multiple_of(p) {
            n /= p;
            e -= 1;
        }
        if let Some(i) = self.cache.get(&(n, e)) {
            return Ok(i.clone());
        }
        let scale = level_size(self.roots.ideal().ring().p(), self.e0)?;
        let m = n
            .checked_mul(scale)
            .ok_or(Error::Overflow("power exponent exceeds u64"))?;
        let out = self.roots.root(m, e + self.e0);
        self.cache.insert((n, e), out.clone());
        Ok(out)
    }

    pub fn at_fraction(&mut self, lambda: Fraction) -> Result<Ideal> {
        let (n, e) = split_p_power(lambda, self.roots.ideal().ring().p())?;
        self.at(n, e)
    }
}

/// Write `λ = n / p^e` with `λ ≥ 0`.
pub fn split_p_power(lambda: Fraction, p: PrimeModulus) -> Result<(u64, u32)> {
    if *lambda.numer() < 0 {
        return Err(Error::MalformedLambda(format!("{lambda} is negative")));
    }
    let mut den = *lambda.denom();
    let mut e = 0u32;
    while den % p.get() as i128 == 0 {
        den /= p.get() as i128;
        e += 1;
    }
    if den != 1 {
        return Err(Error::MalformedLambda(format!(
            "{lambda} does not have a power of {p} as denominator"
        )));
    }
    let n = u64::try_from(*lambda.numer()).map_err(|_| Error::MalformedLambda("numerator too large".into()))?;
    Ok((n, e))
}

pub fn test_ideal(a: &Ideal, lambda: Fraction, e0: u32) -> Result<Ideal> {
    TestIdeals::new(a, e0)?.at_fraction(lambda)
}

/// Roots `k / p^e` of the level-`e` approximating polynomial, stored by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxPolyRoots {
    pub level: u32,
    pub p: PrimeModulus,
    pub numerators: BTreeSet<u64>,
}

impl ApproxPolyRoots {
    pub fn fractions(&self) -> Vec<Fraction> {
        let q = self.p.power(self.level).expect("level fits") as i128;
        self.numerators.iter().map(|&k| Ratio::new(k as i128, q)).collect()
    }
}

pub fn approx_poly_roots(a: &Ideal, e: u32) -> Result<ApproxPolyRoots> {
    Ok(approx_roots_from(&nu_invariants(a, e)?))
}

pub fn approx_roots_from(nu: &NuSet) -> ApproxPolyRoots {
    ApproxPolyRoots {
        level: nu.level,
        p: nu.p,
        numerators: nu.residues(),
    }
}

/// Whether some F-jumping number lies in `(k/p^e, (k+1)/p^e] + N`, read off
/// the level-`(e0+e)` approximating-polynomial roots.
pub fn f_jumping_in_interval(a: &Ideal, e0: u32, e: u32, k: u64) -> Result<bool> {
    let p = a.ring().p();
    if k >= level_size(p, e)? {
        return Err(Error::Precondition("k must lie in [0, p^e)".into()));
    }
    let roots = approx_poly_roots(a, e0 + e)?;
    let scale = level_size(p, e0)?;
    Ok(roots.numerators.iter().any(|m| m / scale == k))
}

/// The same question decided by comparing test ideals at the endpoints,
/// for every integer shift `s` in `[0, r)`.
pub fn f_jumping_in_interval_by_test_ideals(a: &Ideal, e0: u32, e: u32, k: u64) -> Result<bool> {
    let q = level_size(a.ring().p(), e)?;
    if k >= q {
        return Err(Error::Precondition("k must lie in [0, p^e)".into()));
    }
    let r = generator_count(a) as u64;
    let mut tau = TestIdeals::new(a, e0)?;
    for s in 0..r {
        if tau.at(s * q + k, e)? != tau.at(s * q + k + 1, e)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One F-jumping number located by refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FjEntry {
    /// Integer candidate at the right end of a flagged interval.
    Exact(Fraction),
    /// A flagged interval `(lo, hi]` with its simplest admissible fraction.
    Interval {
        lo: Fraction,
        hi: Fraction,
        candidate: Option<Fraction>,
    },
}

impl FjEntry {
    /// The exact value or candidate, if any.
    pub fn value(&self) -> Option<Fraction> {
        match self {
            FjEntry::Exact(v) => Some(*v),
            FjEntry::Interval { candidate, .. } => *candidate,
        }
    }
}

impl fmt::Display for FjEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FjEntry::Exact(v) => write!(f, "exact {v}"),
            FjEntry::Interval { lo, hi, candidate } => {
                write!(f, "({lo}, {hi}]")?;
                if let Some(c) = candidate {
                    write!(f, " candidate {c}")?;
                }
                Ok(())
            }
        }
    }
}

/// Largest period length tried for candidate denominators `p^d (p^m - 1)`.
pub const CANDIDATE_MAX_PERIOD: u32 = 12;

fn multiplicative_order_at_most(p: u64, q: u64, limit: u32) -> bool {
    if q == 1 {
        return true;
    }
    let mut x = p % q;
    for _ in 0..limit {
        if x == 1 {
            return true;
        }
        x = (x as u128 * p as u128 % q as u128) as u64;
    }
    false
}

/// Smallest-denominator fraction in `(lo, hi]` whose denominator divides
/// `p^d (p^m - 1)` with `d ≤ e` and `m ≤ CANDIDATE_MAX_PERIOD`.
pub fn candidate_in(lo: Fraction, hi: Fraction, p: PrimeModulus, e: u32) -> Option<Fraction> {
    let pe = p.power(e)?;
    let pb = p.get() as u64;
    for q in 1..=pe {
        let mut rest = q;
        let mut d = 0;
        while rest % pb == 0 {
            rest /= pb;
            d += 1;
        }
        if d > e || !multiplicative_order_at_most(pb, rest, CANDIDATE_MAX_PERIOD) {
            continue;
        }
        let num = (hi * Ratio::from_integer(q as i128)).floor().to_integer();
        let c = Ratio::new(num, q as i128);
        if c > lo && c <= hi {
            return Some(c);
        }
    }
    None
}

/// Locate F-jumping numbers in `(0, range_top]` to precision `p^-E`.
pub fn f_jumping_numbers(a: &Ideal, range_top: u64, precision: u32) -> Result<Vec<FjEntry>> {
    let st = stable_exponent(a, DEFAULT_DEPTH)?;
    f_jumping_numbers_with(a, st.e0, range_top, precision)
}

/// As [`f_jumping_numbers`] with a known stable exponent.
pub fn f_jumping_numbers_with(a: &Ideal, e0: u32, range_top: u64, precision: u32) -> Result<Vec<FjEntry>> {
    if precision == 0 {
        return Err(Error::Precondition("precision must be at least 1".into()));
    }
    let p = a.ring().p();
    let pb = p.get() as u64;
    let mut tau = TestIdeals::new(a, e0)?;
    let mut out = Vec::new();
    for s in 0..range_top {
        // Flagged k at the current level e, meaning a jump in
        // (s + k/p^e, s + (k+1)/p^e].
        let mut flagged: Vec<u64> = (0..pb).collect();
        for e in 1..=precision {
            let q = level_size(p, e)?;
            let mut next = Vec::new();
            for &k in &flagged {
                let lo = s * q + k;
                if tau.at(lo, e)? != tau.at(lo + 1, e)? {
                    next.push(k);
                }
            }
            if e < precision {
                flagged = next.iter().flat_map(|&k| (0..pb).map(move |j| k * pb + j)).collect();
            } else {
                flagged = next;
            }
        }
        let q = level_size(p, precision)? as i128;
        for k in flagged {
            let lo = Ratio::new(s as i128 * q + k as i128, q);
            let hi = Ratio::new(s as i128 * q + k as i128 + 1, q);
            let candidate = candidate_in(lo, hi, p, precision);
            out.push(match candidate {
                Some(c) if c.is_integer() => FjEntry::Exact(c),
                _ => FjEntry::Interval { lo, hi, candidate },
            });
        }
    }
    Ok(out)
}
