//! Ideals of F_p[x_1..x_n]: Buchberger with reduced bases, membership,
//! equality, products, incremental powers and bracket powers.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::polyring::{same_ring, Monomial, Polynomial, Ring};

/// The unique reduced Gröbner basis: monic, autoreduced, sorted ascending by
/// leading monomial. Empty for the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedBasis {
    polys: Vec<Polynomial>,
}

impl ReducedBasis {
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    /// Normal form of `f` modulo this basis.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.polys)
    }
}

/// An ideal given by generators, with a lazily filled basis cache.
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: OnceLock<ReducedBasis>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{}", self)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl PartialEq for Ideal {
    /// Ideal equality; ideals of different rings are never equal.
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl Eq for Ideal {}

impl Ideal {
    /// Zero generators are dropped; a nonzero constant collapses the ideal to (1).
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Result<Ideal> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_generators(ring, generators))
    }

    pub(crate) fn from_generators(ring: &Ring, mut generators: Vec<Polynomial>) -> Ideal {
        generators.retain(|g| !g.is_zero());
        if generators.iter().any(|g| g.is_constant()) {
            return Ideal::unit(ring);
        }
        Ideal {
            ring: ring.clone(),
            generators,
            basis: OnceLock::new(),
        }
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
            basis: OnceLock::new(),
        }
    }

    pub fn unit(ring: &Ring) -> Ideal {
        let one = Polynomial::one(ring);
        let basis = OnceLock::new();
        let _ = basis.set(ReducedBasis {
            polys: vec![one.clone()],
        });
        Ideal {
            ring: ring.clone(),
            generators: vec![one],
            basis,
        }
    }

    pub fn principal(f: Polynomial) -> Ideal {
        let ring = f.ring().clone();
        Self::from_generators(&ring, vec![f])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.reduced_basis().is_unit()
    }

    pub fn is_principal(&self) -> bool {
        self.generators.len() == 1
    }

    pub fn is_monomial(&self) -> bool {
        self.generators.iter().all(|g| g.is_monomial())
    }

    /// Replace the generators by the reduced basis.
    pub fn canonical(&self) -> Ideal {
        let b = self.reduced_basis().clone();
        let cache = OnceLock::new();
        let _ = cache.set(b.clone());
        Ideal {
            ring: self.ring.clone(),
            generators: b.polys,
            basis: cache,
        }
    }

    pub fn reduced_basis(&self) -> &ReducedBasis {
        self.basis
            .get_or_init(|| compute_reduced_basis(&self.ring, &self.generators))
    }

    fn check_ring(&self, ring: &Ring) -> Result<()> {
        if same_ring(&self.ring, ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.check_ring(f.ring())?;
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.reduced_basis().normal_form(f).is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(&other.ring)?;
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(&other.ring)?;
        Ok(self.reduced_basis() == other.reduced_basis())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(&other.ring)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Ideal::from_generators(&self.ring, gens))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(&other.ring)?;
        Ok(Ideal::from_generators(
            &self.ring,
            product_generators(&self.generators, &other.generators),
        ))
    }

    /// `f · I`.
    pub fn multiply_by(&self, f: &Polynomial) -> Result<Ideal> {
        self.check_ring(f.ring())?;
        let gens = self.generators.iter().map(|g| g.mul_unchecked(f)).collect();
        Ok(Ideal::from_generators(&self.ring, gens))
    }

    /// `I^[p^e]`, generated by the `p^e`-th powers of the generators.
    pub fn bracket_power(&self, e: u32) -> Result<Ideal> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.frobenius_power(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::from_generators(&self.ring, gens))
    }

    /// Generators after linear interreduction (distinct leading monomials).
    pub fn interreduced(&self) -> Ideal {
        Ideal::from_generators(&self.ring, interreduce(&self.generators))
    }
}

pub fn reduced_basis(i: &Ideal) -> &ReducedBasis {
    i.reduced_basis()
}

pub fn ideal_contains(i: &Ideal, f: &Polynomial) -> Result<bool> {
    i.contains(f)
}

pub fn ideal_equals(i: &Ideal, j: &Ideal) -> Result<bool> {
    i.equals(j)
}

pub fn bracket_power(i: &Ideal, e: u32) -> Result<Ideal> {
    i.bracket_power(e)
}

pub fn ideal_power(i: &Ideal, n: usize, cache: &mut PowerTable) -> Result<Ideal> {
    if !same_ring(cache.base.ring(), i.ring()) || cache.base.generators() != i.interreduced().generators() {
        return Err(Error::Precondition("power table built for a different ideal".into()));
    }
    Ok(cache.power(n).clone())
}

fn product_generators(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for f in a {
        for g in b {
            out.push(f.mul_unchecked(g));
        }
    }
    out
}

/// Memoized powers `I^0, I^1, ...`, each built from the previous one and
/// interreduced.
#[derive(Debug, Clone)]
pub struct PowerTable {
    base: Ideal,
    powers: Vec<Ideal>,
}

impl PowerTable {
    pub fn new(i: &Ideal) -> PowerTable {
        let base = i.interreduced();
        PowerTable {
            powers: vec![Ideal::unit(i.ring())],
            base,
        }
    }

    pub fn base(&self) -> &Ideal {
        &self.base
    }

    pub fn power(&mut self, n: usize) -> &Ideal {
        while self.powers.len() <= n {
            let prev = self.powers.last().expect("I^0 present");
            let gens = if self.powers.len() == 1 {
                self.base.generators.clone()
            } else {
                interreduce(&product_generators(&prev.generators, &self.base.generators))
            };
            self.powers.push(Ideal::from_generators(&self.base.ring, gens));
        }
        &self.powers[n]
    }
}

/// Gaussian elimination on the coefficient vectors, giving a spanning set
/// with distinct leading monomials, fully back-reduced and monic. Rows whose
/// every term is divisible by a monomial row are dropped afterwards since
/// they are ideal-theoretically redundant.
pub fn interreduce(polys: &[Polynomial]) -> Vec<Polynomial> {
    let Some(first) = polys.first() else {
        return Vec::new();
    };
    let ring = first.ring().clone();
    let p = ring.p();
    let order = ring.order();

    let mut rows: Vec<Polynomial> = Vec::new();
    let mut pivot: HashMap<Monomial, usize> = HashMap::new();
    for f in polys {
        let mut work = f.clone();
        let mut rem: Vec<(Monomial, u32)> = Vec::new();
        // Reduce every term that sits on a pivot column.
        loop {
            let Some((m, c)) = work.terms().first().cloned() else {
                break;
            };
            if let Some(&r) = pivot.get(&m) {
                work = work.add_scaled(p.neg(c), &Monomial::one(ring.nvars()), &rows[r]);
            } else {
                rem.push((m, c));
                work = Polynomial::from_sorted(&ring, work.terms()[1..].to_vec());
            }
        }
        if rem.is_empty() {
            continue;
        }
        let row = Polynomial::from_sorted(&ring, rem).monic();
        pivot.insert(row.leading_monomial().unwrap().clone(), rows.len());
        rows.push(row);
    }

    // Back-substitute so that no row contains another row's pivot.
    rows.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut done: Vec<Polynomial> = Vec::with_capacity(rows.len());
    let mut done_pivot: HashMap<Monomial, usize> = HashMap::new();
    for row in rows {
        let lead = row.terms()[0].clone();
        let mut work = Polynomial::from_sorted(&ring, row.terms()[1..].to_vec());
        let mut out = vec![lead];
        loop {
            let Some((m, c)) = work.terms().first().cloned() else {
                break;
            };
            if let Some(&r) = done_pivot.get(&m) {
                work = work.add_scaled(p.neg(c), &Monomial::one(ring.nvars()), &done[r]);
            } else {
                out.push((m, c));
                work = Polynomial::from_sorted(&ring, work.terms()[1..].to_vec());
            }
        }
        done_pivot.insert(out[0].0.clone(), done.len());
        done.push(Polynomial::from_sorted(&ring, out));
    }

    let monos: Vec<Monomial> = done
        .iter()
        .filter(|f| f.is_monomial())
        .map(|f| f.leading_monomial().unwrap().clone())
        .collect();
    if monos.is_empty() {
        return done;
    }
    done.into_iter()
        .filter(|f| {
            let lm = f.leading_monomial().unwrap();
            !f.terms()
                .iter()
                .all(|(m, _)| monos.iter().any(|d| d.divides(m) && (!f.is_monomial() || d != lm)))
        })
        .collect()
}

/// Full reduction of `f` by `divisors` (assumed monic).
pub(crate) fn normal_form(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let ring = f.ring().clone();
    let p = ring.p();
    let mut work = f.clone();
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    loop {
        let Some((m, c)) = work.terms().first().cloned() else {
            break;
        };
        let div = divisors
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match div {
            Some(g) => {
                let lm = g.leading_monomial().unwrap();
                let coef = p.neg(p.mul(c, p.inv(g.leading_coefficient()).unwrap()));
                work = work.add_scaled(coef, &m.div(lm), g);
            }
            None => {
                rem.push((m, c));
                work = Polynomial::from_sorted(&ring, work.terms()[1..].to_vec());
            }
        }
    }
    Polynomial::from_sorted(&ring, rem)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(lg);
    let p = f.ring().p();
    // f and g are monic.
    let a = f.mul_term(&l.div(lf), 1);
    a.add_scaled(p.neg(1), &l.div(lg), g)
}

/// Buchberger with normal pair selection and both criteria.
fn groebner_basis(ring: &Ring, input: &[Polynomial]) -> Vec<Polynomial> {
    let order = ring.order();
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: Vec<(usize, usize, Monomial)> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();

    let add = |g: Polynomial,
               basis: &mut Vec<Polynomial>,
               pending: &mut Vec<(usize, usize, Monomial)>,
               pending_set: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        let lk = g.leading_monomial().unwrap().clone();
        basis.push(g);
        for (i, b) in basis[..k].iter().enumerate() {
            let li = b.leading_monomial().unwrap();
            pending.push((i, k, li.lcm(&lk)));
            pending_set.insert((i, k));
        }
    };

    for g in interreduce(input) {
        if g.is_constant() {
            return vec![Polynomial::one(ring)];
        }
        add(g, &mut basis, &mut pending, &mut pending_set);
    }

    while !pending.is_empty() {
        // Normal strategy: smallest lcm first, ties by index.
        let mut best = 0;
        for idx in 1..pending.len() {
            let (a, b) = (&pending[idx], &pending[best]);
            let c = order.cmp(&a.2, &b.2).then((a.0, a.1).cmp(&(b.0, b.1)));
            if c == Ordering::Less {
                best = idx;
            }
        }
        let (i, j, l) = pending.swap_remove(best);
        pending_set.remove(&(i, j));

        let (li, lj) = (
            basis[i].leading_monomial().unwrap(),
            basis[j].leading_monomial().unwrap(),
        );
        if li.coprime(lj) {
            continue;
        }
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&l)
                && !pending_set.contains(&key(i, k))
                && !pending_set.contains(&key(j, k))
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j]);
        let h = normal_form(&s, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return vec![Polynomial::one(ring)];
        }
        add(h.monic(), &mut basis, &mut pending, &mut pending_set);
    }
    basis
}

fn compute_reduced_basis(ring: &Ring, generators: &[Polynomial]) -> ReducedBasis {
    if generators.is_empty() {
        return ReducedBasis { polys: Vec::new() };
    }
    let order = ring.order();
    let gb = groebner_basis(ring, generators);

    // Minimal basis: drop elements whose leading monomial is divisible by an
    // earlier-kept or other leading monomial.
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (idx, g) in gb.iter().enumerate() {
        let lg = g.leading_monomial().unwrap();
        let redundant = gb.iter().enumerate().any(|(k, h)| {
            let lh = h.leading_monomial().unwrap();
            k != idx && lh.divides(lg) && (lh != lg || k < idx)
        });
        if !redundant {
            minimal.push(g.monic());
        }
    }

    let mut reduced = Vec::with_capacity(minimal.len());
    for (idx, g) in minimal.iter().enumerate() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, h)| h.clone())
            .collect();
        let lead = g.terms()[0].clone();
        let tail = Polynomial::from_sorted(ring, g.terms()[1..].to_vec());
        let nf = normal_form(&tail, &others);
        let mut terms = vec![lead];
        terms.extend(nf.into_terms());
        reduced.push(Polynomial::from_sorted(ring, terms));
    }
    reduced.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    ReducedBasis { polys: reduced }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fparith::PrimeModulus;
    use crate::polyring::{parse_poly, MonomialOrder, VariableContext};

    fn ring(p: u64) -> Ring {
        VariableContext::new(&["x", "y"], PrimeModulus::new(p).unwrap(), MonomialOrder::Grevlex).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(g, r).unwrap()).collect()).unwrap()
    }

    fn basis_strings(i: &Ideal) -> Vec<String> {
        i.reduced_basis().polys().iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn reduced_basis_examples() {
        let r = ring(7);
        assert_eq!(basis_strings(&ideal(&r, &["x^2", "x"])), vec!["x"]);
        assert_eq!(basis_strings(&ideal(&r, &["x+y", "x-y"])), vec!["y", "x"]);
        assert_eq!(basis_strings(&ideal(&r, &["x^2+y^3"])), vec!["y^3 + x^2"]);
        assert!(basis_strings(&Ideal::zero(&r)).is_empty());
    }

    #[test]
    fn nontrivial_basis() {
        // (x^2 - y, x*y - 1) contains x - y^2 and y^3 - 1.
        let r = ring(101);
        let i = ideal(&r, &["x^2 - y", "x*y - 1"]);
        assert!(i.contains(&parse_poly("x - y^2", &r).unwrap()).unwrap());
        assert!(i.contains(&parse_poly("y^3 - 1", &r).unwrap()).unwrap());
        assert!(!i.contains(&parse_poly("y - 1", &r).unwrap()).unwrap());
        assert_eq!(basis_strings(&i), vec!["y^2 + 100*x", "x*y + 100", "x^2 + 100*y"]);
    }

    #[test]
    fn membership_examples() {
        let r = ring(7);
        assert!(ideal(&r, &["x"]).contains(&parse_poly("x^3", &r).unwrap()).unwrap());
        assert!(!ideal(&r, &["x^2", "y^3"])
            .contains(&parse_poly("x*y", &r).unwrap())
            .unwrap());
        assert!(ideal(&r, &["x^2", "y^3"]).contains(&Polynomial::zero(&r)).unwrap());
        let other = ring(5);
        assert_eq!(
            ideal(&r, &["x"]).contains(&parse_poly("x", &other).unwrap()),
            Err(Error::ContextMismatch)
        );
    }

    #[test]
    fn equality_examples() {
        let r = ring(7);
        assert!(ideal(&r, &["x", "y"]).equals(&ideal(&r, &["y", "x"])).unwrap());
        assert!(!ideal(&r, &["x"]).equals(&ideal(&r, &["x^2"])).unwrap());
        assert!(ideal(&r, &["1"]).equals(&ideal(&r, &["x", "x+1"])).unwrap());
    }

    #[test]
    fn power_examples() {
        let r = ring(7);
        let mut t = PowerTable::new(&ideal(&r, &["x"]));
        assert_eq!(t.power(3), &ideal(&r, &["x^3"]));
        let m = ideal(&r, &["x^2", "y^3"]);
        let mut t = PowerTable::new(&m);
        assert_eq!(t.power(2), &ideal(&r, &["x^4", "x^2*y^3", "y^6"]));
        assert_eq!(t.power(2).generators().len(), 3);
        assert!(t.power(0).is_unit());
        let mut t2 = PowerTable::new(&m);
        assert_eq!(
            ideal_power(&m, 2, &mut t2).unwrap(),
            ideal(&r, &["x^4", "x^2*y^3", "y^6"])
        );
    }

    #[test]
    fn bracket_examples() {
        let r3 = ring(3);
        assert_eq!(
            ideal(&r3, &["x", "y"]).bracket_power(1).unwrap(),
            ideal(&r3, &["x^3", "y^3"])
        );
        let r2 = ring(2);
        assert_eq!(ideal(&r2, &["x+y"]).bracket_power(1).unwrap(), ideal(&r2, &["x^2+y^2"]));
        let i = ideal(&r3, &["x+y^2"]);
        assert_eq!(i.bracket_power(0).unwrap(), i);
    }

    #[test]
    fn interreduce_drops_dependencies() {
        let r = ring(7);
        let gens: Vec<Polynomial> = ["x+y", "2*x+2*y", "x-y", "x^2", "x^3+x^2"]
            .iter()
            .map(|g| parse_poly(g, &r).unwrap())
            .collect();
        let out = interreduce(&gens);
        let s: Vec<String> = out.iter().map(|f| f.to_string()).collect();
        assert_eq!(s, vec!["y", "x"]);
    }
}
