//! Executable forms of the identities the rest of the crate relies on. Each
//! function evaluates one law on concrete inputs, so the same checks serve
//! property tests, acceptance runs and ad-hoc self-tests.

use crate::bsroots::TruncationSet;
use crate::error::{Error, Result};
use crate::frobroot::{frobenius_root, PowerRoots};
use crate::groebner::{Ideal, PowerTable};
use crate::invariants::{generator_count, nu_invariants_with, NuSet};
use crate::padic::{digits_of_rational, rational_from_digits, truncation_value, PadicRational};

/// `C^e(I) ⊆ J ⟺ I ⊆ J^[p^e]`, and `I ⊆ C^e(I)^[p^e]`.
pub fn root_adjunction(i: &Ideal, j: &Ideal, e: u32) -> Result<bool> {
    let root = frobenius_root(i, e);
    let left = j.contains_ideal(&root)?;
    let right = j.bracket_power(e)?.contains_ideal(i)?;
    let unit = root.bracket_power(e)?.contains_ideal(i)?;
    Ok(left == right && unit)
}

/// `C^(e+d)(I) = C^e(C^d(I))`.
pub fn root_composition(i: &Ideal, e: u32, d: u32) -> bool {
    frobenius_root(i, e + d) == frobenius_root(&frobenius_root(i, d), e)
}

/// The root computed from the given generators agrees with the one computed
/// from the reduced basis.
pub fn root_generator_independence(i: &Ideal, e: u32) -> bool {
    frobenius_root(i, e) == frobenius_root(&i.canonical(), e)
}

/// `I ⊆ J ⟹ C^e(I) ⊆ C^e(J)`; vacuous when `I ⊄ J`.
pub fn root_monotone(i: &Ideal, j: &Ideal, e: u32) -> Result<bool> {
    if !j.contains_ideal(i)? {
        return Ok(true);
    }
    frobenius_root(j, e).contains_ideal(&frobenius_root(i, e))
}

/// `C^e(a^n) = a · C^e(a^(n-p^e))` for `n ≥ r p^e`, with the left side
/// expanded directly.
pub fn skoda_step(a: &Ideal, n: u64, e: u32) -> Result<bool> {
    let a = a.interreduced();
    let q = a.ring().p().power(e).ok_or(Error::Overflow("p^e exceeds u64"))?;
    let r = generator_count(&a) as u64;
    if n < r * q {
        return Err(Error::Precondition("Skoda needs n ≥ r p^e".into()));
    }
    let mut powers = PowerTable::new(&a);
    let left = frobenius_root(powers.power(n as usize), e);
    let right = a.product(&frobenius_root(powers.power((n - q) as usize), e))?;
    Ok(left == right)
}

/// Level `e+1` ν-invariants are level `e` ν-invariants.
pub fn nu_nesting(a: &Ideal, e: u32) -> Result<bool> {
    let mut roots = PowerRoots::new(&a.interreduced());
    let lower = nu_invariants_with(&mut roots, e)?;
    let upper = nu_invariants_with(&mut roots, e + 1)?;
    Ok(upper.members.iter().all(|&n| lower.contains(n)))
}

/// Level `e+1` truncations reduce mod `p^e` into level `e` truncations.
pub fn truncation_prefix_closure(a: &Ideal, e: u32) -> Result<bool> {
    let mut roots = PowerRoots::new(&a.interreduced());
    let lower = TruncationSet::from_nu(&nu_invariants_with(&mut roots, e)?);
    let upper = TruncationSet::from_nu(&nu_invariants_with(&mut roots, e + 1)?);
    let q = a.ring().p().power(e).ok_or(Error::Overflow("p^e exceeds u64"))?;
    Ok(upper.valid.iter().all(|v| lower.valid.contains(&(v % q))))
}

/// The tail law for ν-invariants computed on a window twice as wide.
pub fn nu_periodicity(a: &Ideal, e: u32) -> Result<bool> {
    let a = a.interreduced();
    let mut roots = PowerRoots::new(&a);
    let nu: NuSet = nu_invariants_with(&mut roots, e)?;
    let window = nu.window();
    let q = a.ring().p().power(e).ok_or(Error::Overflow("p^e exceeds u64"))?;
    for n in window..window + q {
        if roots.jumps_at(n, e) != nu.contains(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Digits then reconstruction returns the input, and each truncation agrees
/// with α mod `p^e` after clearing the denominator.
pub fn padic_round_trip(alpha: &PadicRational, e: u32) -> Result<bool> {
    let s = digits_of_rational(alpha);
    let back = rational_from_digits(&s)?;
    let q = (alpha.p().get() as i128)
        .checked_pow(e)
        .ok_or(Error::Overflow("p^e exceeds i128"))?;
    let t = truncation_value(alpha, e) as i128;
    let congruent = (alpha.denominator() * t - alpha.numerator()).rem_euclid(q) == 0;
    let dichotomy = s.period().digits().iter().all(|&d| d == 0) == (alpha.is_integer() && !alpha.is_negative())
        && s.preperiod().is_empty() == (alpha.ratio() >= (-1).into() && alpha.ratio() <= 0.into());
    Ok(back == *alpha && congruent && dichotomy)
}
