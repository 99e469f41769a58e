//! Prime field arithmetic and base-p digit combinatorics.
//!
//! Field elements are stored as canonical residues in `[0, p)` with `p < 2^31`,
//! so every product fits in a `u64` before reduction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A prime `2 <= p < 2^31`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.0 as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, a: u32, mut k: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Inverse by Fermat; `a` must be a nonzero residue.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    /// Reduce a signed integer to its canonical residue.
    pub fn reduce_i128(self, v: i128) -> u32 {
        v.rem_euclid(self.0 as i128) as u32
    }

    /// `p^e` if it fits in a `u64`.
    pub fn power(self, e: u32) -> Option<u64> {
        (self.0 as u64).checked_pow(e)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of F_p together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: PrimeModulus,
}

impl FpScalar {
    pub fn new(value: i128, modulus: PrimeModulus) -> Self {
        FpScalar {
            value: modulus.reduce_i128(value),
            modulus,
        }
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        FpScalar { value: 0, modulus }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        FpScalar { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, k: u64) -> Self {
        FpScalar {
            value: self.modulus.pow(self.value, k),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpScalar {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpScalar {
            value: self.modulus.sub(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpScalar {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

pub fn fp_inv(a: FpScalar) -> Result<FpScalar> {
    Ok(FpScalar {
        value: a.modulus.inv(a.value)?,
        modulus: a.modulus,
    })
}

/// Little-endian base-p digits of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitVector {
    digits: Vec<u32>,
    base: PrimeModulus,
}

impl DigitVector {
    pub fn new(digits: Vec<u32>, base: PrimeModulus) -> Self {
        assert!(digits.iter().all(|&d| d < base.get()), "digit out of range");
        DigitVector { digits, base }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn base(&self) -> PrimeModulus {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `Σ d_i p^i`, or `None` on overflow.
    pub fn value(&self) -> Option<u128> {
        let p = self.base.get() as u128;
        let mut acc: u128 = 0;
        for &d in self.digits.iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(d as u128)?;
        }
        Some(acc)
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn base_p_digits(mut n: u128, p: PrimeModulus, len: usize) -> DigitVector {
    let b = p.get() as u128;
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        digits.push((n % b) as u32);
        n /= b;
    }
    DigitVector { digits, base: p }
}

/// Factorial tables below `p` so that `C(i, j) mod p` for `i, j < p`
/// costs two multiplications. Large primes fall back to a direct product.
#[derive(Debug, Clone)]
pub struct LucasTable {
    p: PrimeModulus,
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
}

const TABLE_LIMIT: u32 = 1 << 16;

impl LucasTable {
    pub fn new(p: PrimeModulus) -> Self {
        if p.get() > TABLE_LIMIT {
            return LucasTable {
                p,
                fact: Vec::new(),
                inv_fact: Vec::new(),
            };
        }
        let n = p.get() as usize;
        let mut fact = vec![1u32; n];
        for i in 1..n {
            fact[i] = p.mul(fact[i - 1], i as u32);
        }
        let mut inv_fact = vec![1u32; n];
        inv_fact[n - 1] = p.inv(fact[n - 1]).expect("(p-1)! is a unit");
        for i in (1..n).rev() {
            inv_fact[i - 1] = p.mul(inv_fact[i], i as u32);
        }
        LucasTable { p, fact, inv_fact }
    }

    fn small(&self, m: u32, n: u32) -> u32 {
        if n > m {
            return 0;
        }
        if !self.fact.is_empty() {
            let p = self.p;
            return p.mul(
                self.fact[m as usize],
                p.mul(self.inv_fact[n as usize], self.inv_fact[(m - n) as usize]),
            );
        }
        let p = self.p;
        let k = n.min(m - n);
        let (mut num, mut den) = (1u32, 1u32);
        for i in 0..k {
            num = p.mul(num, m - i);
            den = p.mul(den, i + 1);
        }
        p.mul(num, p.inv(den).expect("k < p"))
    }

    /// `C(m, n) mod p` via Lucas' theorem.
    pub fn binomial(&self, mut m: u128, mut n: u128) -> FpScalar {
        let b = self.p.get() as u128;
        let mut acc = 1u32;
        while n > 0 {
            let (mi, ni) = ((m % b) as u32, (n % b) as u32);
            if ni > mi {
                return FpScalar::zero(self.p);
            }
            acc = self.p.mul(acc, self.small(mi, ni));
            m /= b;
            n /= b;
        }
        FpScalar {
            value: acc,
            modulus: self.p,
        }
    }
}

pub fn lucas_binomial(m: u128, n: u128, p: PrimeModulus) -> FpScalar {
    LucasTable::new(p).binomial(m, n)
}

/// The scalar `(-1)^m C(|a| + r + m - 1, m)` with `r = a.len()`.
pub fn s_m_eigenvalue(m: u128, a: &[u64], p: PrimeModulus) -> FpScalar {
    let weight: u128 = a.iter().map(|&x| x as u128).sum();
    let top = weight + a.len() as u128 + m - 1;
    let c = lucas_binomial(top, m, p);
    if m % 2 == 1 {
        -c
    } else {
        c
    }
}

/// The `i`-th base-p digit of `|a|`, for `a` with entries below `p^e`.
pub fn s_pi_digit_eigenvalue(i: u32, e: u32, a: &[u64], p: PrimeModulus) -> Result<FpScalar> {
    if i >= e {
        return Err(Error::DigitIndexOutOfRange);
    }
    let pe = p.power(e).ok_or(Error::Overflow("p^e exceeds u64"))?;
    if let Some(&bad) = a.iter().find(|&&x| x >= pe) {
        return Err(Error::ExponentOutOfRange(bad));
    }
    let weight: u128 = a.iter().map(|&x| x as u128).sum();
    let digit = base_p_digits(weight, p, i as usize + 1).digits[i as usize];
    Ok(FpScalar {
        value: digit,
        modulus: p,
    })
}
