//! Rationals inside Z_(p): digit expansions, eventual periodicity,
//! reconstruction from digits and truncation values.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::fparith::{DigitVector, PrimeModulus};

/// A reduced fraction whose denominator is positive and prime to `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicRational {
    value: Ratio<i128>,
    p: PrimeModulus,
}

impl PadicRational {
    pub fn new(num: i128, den: i128, p: PrimeModulus) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::from_ratio(Ratio::new(num, den), p)
    }

    pub fn from_ratio(value: Ratio<i128>, p: PrimeModulus) -> Result<Self> {
        if value.denom() % p.get() as i128 == 0 {
            return Err(Error::Precondition(format!("{value} is not in Z_({p})")));
        }
        Ok(PadicRational { value, p })
    }

    pub fn integer(n: i128, p: PrimeModulus) -> Self {
        PadicRational {
            value: Ratio::from_integer(n),
            p,
        }
    }

    pub fn numerator(&self) -> i128 {
        *self.value.numer()
    }

    pub fn denominator(&self) -> i128 {
        *self.value.denom()
    }

    pub fn ratio(&self) -> Ratio<i128> {
        self.value
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator() < 0
    }

    pub fn neg(&self) -> Self {
        PadicRational {
            value: -self.value,
            p: self.p,
        }
    }
}

impl PartialOrd for PadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PadicRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value).then(self.p.cmp(&other.p))
    }
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An eventually periodic digit expansion, canonical: the period is primitive
/// and the preperiod minimal. Terminating expansions use period `(0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitStream {
    preperiod: DigitVector,
    period: DigitVector,
}

impl DigitStream {
    /// Builds and canonicalizes a stream; the period must be nonempty.
    pub fn new(pre: Vec<u32>, per: Vec<u32>, p: PrimeModulus) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::Precondition("empty period".into()));
        }
        if pre.iter().chain(per.iter()).any(|&d| d >= p.get()) {
            return Err(Error::Precondition("digit out of range".into()));
        }
        // Primitive period.
        let d = (1..=per.len())
            .find(|&d| per.len().is_multiple_of(d) && (0..per.len()).all(|i| per[i] == per[i % d]))
            .unwrap();
        let mut per: Vec<u32> = per[..d].to_vec();
        let mut pre = pre;
        // Minimal preperiod: absorb trailing preperiod digits into the period.
        while let Some(&last) = pre.last() {
            if last != per[per.len() - 1] {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(DigitStream {
            preperiod: DigitVector::new(pre, p),
            period: DigitVector::new(per, p),
        })
    }

    pub fn preperiod(&self) -> &DigitVector {
        &self.preperiod
    }

    pub fn period(&self) -> &DigitVector {
        &self.period
    }

    pub fn p(&self) -> PrimeModulus {
        self.period.base()
    }

    /// The `i`-th digit.
    pub fn digit(&self, i: usize) -> u32 {
        let k = self.preperiod.len();
        if i < k {
            self.preperiod.digits()[i]
        } else {
            let per = self.period.digits();
            per[(i - k) % per.len()]
        }
    }

    /// The first `len` digits.
    pub fn prefix(&self, len: usize) -> Vec<u32> {
        (0..len).map(|i| self.digit(i)).collect()
    }
}

impl fmt::Display for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
        let pre = join(self.preperiod.digits());
        if !pre.is_empty() {
            write!(f, "{pre} ")?;
        }
        write!(f, "| {} (repeat)", join(self.period.digits()))
    }
}

/// Digit extraction state: the value is `num / den` with `den` fixed.
struct DigitIter {
    num: i128,
    den: i128,
    den_inv: u32,
    p: PrimeModulus,
}

impl DigitIter {
    fn new(alpha: &PadicRational) -> Self {
        let p = alpha.p;
        let den_inv = p
            .inv(p.reduce_i128(alpha.denominator()))
            .expect("denominator prime to p");
        DigitIter {
            num: alpha.numerator(),
            den: alpha.denominator(),
            den_inv,
            p,
        }
    }

    fn next_digit(&mut self) -> u32 {
        let d = self.p.mul(self.p.reduce_i128(self.num), self.den_inv);
        self.num = (self.num - d as i128 * self.den) / self.p.get() as i128;
        d
    }
}

pub fn digits_of_rational(alpha: &PadicRational) -> DigitStream {
    let mut it = DigitIter::new(alpha);
    let mut seen: HashMap<i128, usize> = HashMap::new();
    let mut digits = Vec::new();
    // Distinct states give distinct expansions, so the first repeated state
    // marks the minimal preperiod and primitive period directly.
    loop {
        if let Some(&start) = seen.get(&it.num) {
            let per = digits[start..].to_vec();
            digits.truncate(start);
            return DigitStream::new(digits, per, alpha.p).expect("valid digits");
        }
        seen.insert(it.num, digits.len());
        digits.push(it.next_digit());
    }
}

/// Inverse of [`digits_of_rational`]:
/// `Σ pre_i p^i + p^k · (-|per| / (p^d - 1))`.
pub fn rational_from_digits(s: &DigitStream) -> Result<PadicRational> {
    const OVF: Error = Error::Overflow("p-adic value exceeds i128");
    let p = s.p();
    let k = s.preperiod.len() as u32;
    let d = s.period.len() as u32;
    let pre = s.preperiod.value().and_then(|v| i128::try_from(v).ok()).ok_or(OVF)?;
    let per = s.period.value().and_then(|v| i128::try_from(v).ok()).ok_or(OVF)?;
    let pb = p.get() as i128;
    let pk = pb.checked_pow(k).ok_or(OVF)?;
    let pd1 = pb.checked_pow(d).ok_or(OVF)? - 1;
    let g = per.gcd(&pd1);
    let tail = Ratio::new(-(per / g), pd1 / g);
    let tail = tail
        .numer()
        .checked_mul(pk)
        .map(|n| Ratio::new(n, *tail.denom()))
        .ok_or(OVF)?;
    let value = tail
        .numer()
        .checked_add(pre.checked_mul(*tail.denom()).ok_or(OVF)?)
        .ok_or(OVF)?;
    PadicRational::new(value, *tail.denom(), p)
}

/// `|α_{<e}| = Σ_{i<e} α_i p^i`, the representative of α mod p^e in `[0, p^e)`.
///
/// # Panics
/// If `p^e` does not fit in a `u128`.
pub fn truncation_value(alpha: &PadicRational, e: u32) -> u128 {
    let pb = alpha.p.get() as u128;
    assert!(pb.checked_pow(e).is_some(), "p^e exceeds u128");
    let mut it = DigitIter::new(alpha);
    let mut acc = 0u128;
    let mut scale = 1u128;
    for i in 0..e {
        acc += it.next_digit() as u128 * scale;
        if i + 1 < e {
            scale *= pb;
        }
    }
    acc
}

/// Checks `|(-λ)_{<ed}| = λ (p^{ed} - 1)` for `0 ≤ λ ≤ 1` with `(p^d - 1) λ ∈ Z`.
pub fn digit_sum_identity_check(lambda: &PadicRational, d: u32, e: u32) -> Result<bool> {
    let v = lambda.ratio();
    if v < Ratio::from_integer(0) || v > Ratio::from_integer(1) {
        return Err(Error::Precondition("λ must lie in [0, 1]".into()));
    }
    if d == 0 || e == 0 {
        return Err(Error::Precondition("d and e must be positive".into()));
    }
    let pb = lambda.p.get() as i128;
    let ovf = Error::Overflow("p^(ed) exceeds i128");
    let pd = pb.checked_pow(d).ok_or(ovf.clone())?;
    if !(v * Ratio::from_integer(pd - 1)).is_integer() {
        return Err(Error::Precondition("(p^d - 1) λ must be an integer".into()));
    }
    let ped = pb.checked_pow(e * d).ok_or(ovf)?;
    let rhs = v * Ratio::from_integer(ped - 1);
    Ok(rhs.is_integer() && truncation_value(&lambda.neg(), e * d) as i128 == rhs.to_integer())
}

/// `α = n + γ` with `γ ∈ [-1, 0]` purely periodic: `γ = 0` for nonnegative
/// integers, `γ = -1` for negative integers, and otherwise the representative
/// of `α + Z` in `(-1, 0)`.
pub fn split_negative(alpha: &PadicRational) -> (i128, PadicRational) {
    let p = alpha.p;
    if alpha.is_integer() {
        let n = alpha.numerator();
        return if n >= 0 {
            (n, PadicRational::integer(0, p))
        } else {
            (n + 1, PadicRational::integer(-1, p))
        };
    }
    let n = alpha.value.ceil().to_integer();
    let gamma = PadicRational {
        value: alpha.value - Ratio::from_integer(n),
        p,
    };
    (n, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn q(n: i128, d: i128, p: u64) -> PadicRational {
        PadicRational::new(n, d, pm(p)).unwrap()
    }

    #[test]
    fn rejects_p_in_denominator() {
        assert!(PadicRational::new(1, 5, pm(5)).is_err());
        assert!(PadicRational::new(5, 10, pm(5)).is_ok());
    }

    #[test]
    fn digit_examples() {
        let s = digits_of_rational(&q(-5, 6, 7));
        assert!(s.preperiod().is_empty());
        assert_eq!(s.period().digits(), &[5]);
        for p in [2u64, 3, 5, 7, 11] {
            let s = digits_of_rational(&q(-1, 1, p));
            assert!(s.preperiod().is_empty());
            assert_eq!(s.period().digits(), &[p as u32 - 1]);
        }
        let s = digits_of_rational(&q(-3, 2, 3));
        assert_eq!(s.preperiod().digits(), &[0]);
        assert_eq!(s.period().digits(), &[1]);
        assert_eq!(s.to_string(), "0 | 1 (repeat)");
    }

    #[test]
    fn terminating_uses_zero_period() {
        let s = digits_of_rational(&q(40, 1, 7));
        assert_eq!(s.preperiod().digits(), &[5, 5]);
        assert_eq!(s.period().digits(), &[0]);
        let z = digits_of_rational(&q(0, 1, 7));
        assert!(z.preperiod().is_empty());
        assert_eq!(z.period().digits(), &[0]);
    }

    #[test]
    fn reconstruction_examples() {
        let s = DigitStream::new(vec![1], vec![2], pm(3)).unwrap();
        assert_eq!(rational_from_digits(&s).unwrap(), q(-2, 1, 3));
        let s = DigitStream::new(vec![], vec![4], pm(5)).unwrap();
        assert_eq!(rational_from_digits(&s).unwrap(), q(-1, 1, 5));
        let s = DigitStream::new(vec![5], vec![0], pm(7)).unwrap();
        assert_eq!(rational_from_digits(&s).unwrap(), q(5, 1, 7));
    }

    #[test]
    fn canonicalization() {
        // (1 | 2 1 2 1) is the same stream as (| 1 2).
        let s = DigitStream::new(vec![1], vec![2, 1, 2, 1], pm(3)).unwrap();
        assert!(s.preperiod().is_empty());
        assert_eq!(s.period().digits(), &[1, 2]);
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation_value(&q(-5, 6, 7), 2), 40);
        assert_eq!(truncation_value(&q(-1, 1, 3), 3), 26);
        assert_eq!(truncation_value(&q(0, 1, 5), 4), 0);
        assert_eq!(truncation_value(&q(3, 1, 5), 0), 0);
    }

    #[test]
    fn digit_sum_examples() {
        assert!(digit_sum_identity_check(&q(5, 6, 7), 1, 2).unwrap());
        for p in [2u64, 3, 7] {
            assert!(digit_sum_identity_check(&q(1, 1, p), 1, 1).unwrap());
        }
        assert!(digit_sum_identity_check(&q(1, 2, 3), 1, 3).unwrap());
        assert!(digit_sum_identity_check(&q(3, 2, 3), 1, 1).is_err());
        assert!(digit_sum_identity_check(&q(1, 4, 7), 1, 1).is_err());
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_negative(&q(-5, 6, 7)), (0, q(-5, 6, 7)));
        assert_eq!(split_negative(&q(7, 6, 5)), (2, q(-5, 6, 5)));
        assert_eq!(split_negative(&q(3, 1, 5)), (3, q(0, 1, 5)));
        assert_eq!(split_negative(&q(-2, 1, 5)), (-1, q(-1, 1, 5)));
        assert_eq!(split_negative(&q(-7, 3, 2)), (-2, q(-1, 3, 2)));
    }
}
