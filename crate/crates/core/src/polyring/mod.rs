//! Sparse polynomials over F_p with lex/grevlex orders.
//!
//! Terms are kept in a vector sorted strictly descending under the ring's
//! monomial order, with every stored coefficient nonzero. Equality is then
//! structural.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fparith::{FpScalar, PrimeModulus};

pub use parse::parse_poly;

/// Largest exponent any monomial may carry.
pub const MAX_EXPONENT: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Grevlex => {
                let (da, db) = (a.degree(), b.degree());
                if da != db {
                    return da.cmp(&db);
                }
                // Equal degree: the smaller exponent in the last differing
                // variable is the larger monomial.
                for (x, y) in a.0.iter().rev().zip(b.0.iter().rev()) {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Variable names, characteristic and term order of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
    p: PrimeModulus,
    order: MonomialOrder,
}

pub type Ring = Arc<VariableContext>;

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableContext {
    pub fn new<S: AsRef<str>>(names: &[S], p: PrimeModulus, order: MonomialOrder) -> Result<Ring> {
        if names.is_empty() {
            return Err(Error::InvalidVariables("no variables".into()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            if !is_identifier(n) {
                return Err(Error::InvalidVariables(format!("`{n}` is not an identifier")));
            }
            if out.iter().any(|m| m == n) {
                return Err(Error::InvalidVariables(format!("`{n}` repeated")));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(VariableContext { names: out, p, order }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub type Exponents = SmallVec<[u32; 4]>;

/// An exponent vector. The derived `Ord` is plain lexicographic and is only
/// used for map keys; term order comparisons go through [`MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Exponents);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_slice(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// Product; exponents are assumed to stay within `u32`.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = Exponents::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            let s = *a as u64 + *b as u64;
            if s > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            out.push(s as u32);
        }
        Ok(Monomial(out))
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A polynomial in canonical sparse form.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i128) -> Self {
        let v = ring.p().reduce_i128(c);
        let terms = if v == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), v)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn variable(ring: &Ring, i: usize) -> Self {
        let mut m = Monomial::one(ring.nvars());
        m.0[i] = 1;
        Self::term(ring, m, 1)
    }

    pub fn term(ring: &Ring, m: Monomial, c: u32) -> Self {
        assert_eq!(m.0.len(), ring.nvars(), "monomial length");
        let c = c % ring.p().get();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Build from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let p = ring.p();
        let order = ring.order();
        let mut v: Vec<(Monomial, u32)> = terms.into_iter().map(|(m, c)| (m, c % p.get())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = p.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Wrap terms already sorted descending, merged and nonzero.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> FpScalar {
        let c = self.terms.iter().find(|t| &t.0 == m).map_or(0, |t| t.1);
        FpScalar::new(c as i128, self.ring.p())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.1)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// `self + c * m * other`, merging sorted term lists.
    pub(crate) fn add_scaled(&self, c: u32, m: &Monomial, other: &Polynomial) -> Polynomial {
        let p = self.ring.p();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(mm, cc)| (mm.mul(m), p.mul(*cc, c))).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let t = b.next().unwrap();
                    if t.1 != 0 {
                        out.push(t);
                    }
                }
                Ordering::Equal => {
                    let x = a.next().unwrap();
                    let y = b.next().unwrap();
                    let s = p.add(x.1, y.1);
                    if s != 0 {
                        out.push((x.0.clone(), s));
                    }
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled(1, &Monomial::one(self.ring.nvars()), other))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let minus_one = self.ring.p().get() - 1;
        Ok(self.add_scaled(minus_one, &Monomial::one(self.ring.nvars()), other))
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.p().get() - 1)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let p = self.ring.p();
        let c = c % p.get();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), p.mul(*x, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Polynomial {
        let p = self.ring.p();
        let c = c % p.get();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        // Multiplying by a monomial preserves the order.
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(mm, x)| (mm.mul(m), p.mul(*x, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            return large.mul_term(&small.terms[0].0, small.terms[0].1);
        }
        let p = self.ring.p();
        let mut all = Vec::with_capacity(small.terms.len() * large.terms.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                all.push((ma.mul(mb), p.mul(*ca, *cb)));
            }
        }
        Polynomial::from_terms(&self.ring, all)
    }

    pub fn pow(&self, mut n: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Scale so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.p().inv(c).expect("nonzero coefficient")),
        }
    }

    /// `f^(p^e)`, computed term-wise.
    pub fn frobenius_power(&self, e: u32) -> Result<Polynomial> {
        if e == 0 {
            return Ok(self.clone());
        }
        let q = self
            .ring
            .p()
            .power(e)
            .filter(|&q| q <= MAX_EXPONENT)
            .ok_or(Error::ExponentOverflow)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut ex = Exponents::with_capacity(m.0.len());
            for &a in m.0.iter() {
                let v = a as u64 * q;
                if v > MAX_EXPONENT {
                    return Err(Error::ExponentOverflow);
                }
                ex.push(v as u32);
            }
            terms.push((Monomial(ex), *c));
        }
        // Scaling every exponent by q preserves both supported orders.
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Write `f = Σ g_μ^(p^e) x^μ` with `μ ∈ [0, p^e)^n`. Coefficients pass
    /// through unchanged since `c^(p^e) = c` in F_p.
    pub fn pe_decompose(&self, e: u32) -> BTreeMap<Monomial, Polynomial> {
        let q = self.ring.p().power(e).unwrap_or(u64::MAX);
        let mut parts: BTreeMap<Monomial, Vec<(Monomial, u32)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rem = Exponents::with_capacity(m.0.len());
            let mut quo = Exponents::with_capacity(m.0.len());
            for &a in m.0.iter() {
                rem.push((a as u64 % q) as u32);
                quo.push((a as u64 / q) as u32);
            }
            parts.entry(Monomial(rem)).or_default().push((Monomial(quo), *c));
        }
        parts
            .into_iter()
            .map(|(mu, ts)| (mu, Polynomial::from_terms(&self.ring, ts)))
            .collect()
    }

    fn fmt_monomial(&self, m: &Monomial, out: &mut String) {
        let mut first = true;
        for (i, &a) in m.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(&self.ring.names()[i]);
            if a > 1 {
                out.push('^');
                out.push_str(&a.to_string());
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            if m.is_one() {
                s.push_str(&c.to_string());
            } else {
                if *c != 1 {
                    s.push_str(&c.to_string());
                    s.push('*');
                }
                self.fmt_monomial(m, &mut s);
            }
        }
        f.write_str(&s)
    }
}

pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.mul(g)
}

pub fn frobenius_power(f: &Polynomial, e: u32) -> Result<Polynomial> {
    f.frobenius_power(e)
}

pub fn pe_decompose(f: &Polynomial, e: u32) -> BTreeMap<Monomial, Polynomial> {
    f.pe_decompose(e)
}
