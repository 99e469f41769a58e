//! Frobenius roots `C^e(I)`: the smallest ideal `J` with `I ⊆ J^[p^e]`.
//!
//! Computed generator-wise from base-`p^e` decompositions. Powers of a
//! principal ideal go through a digit recursion instead of expanding `f^n`:
//! writing `n = n_0 + n_1 p + ... + n_{e-1} p^{e-1} + q p^e`,
//!
//! ```text
//! J_0 = (1),  J_{i+1} = C^1(f^{n_i} J_i),  C^e(f^n) = f^q J_e
//! ```
//!
//! which follows from `C^1(g^p H) = g C^1(H)`.

use std::collections::HashMap;

use crate::groebner::{interreduce, Ideal, PowerTable, ReducedBasis};
use crate::polyring::{Polynomial, Ring};

pub fn frobenius_root(i: &Ideal, e: u32) -> Ideal {
    if e == 0 || i.is_zero() {
        return i.clone();
    }
    let mut parts = Vec::new();
    for g in i.generators() {
        parts.extend(g.pe_decompose(e).into_values());
    }
    Ideal::from_generators(i.ring(), interreduce(&parts))
}

/// `[C^e(I^n) for n in 0..=n_max]`.
pub fn frobenius_root_chain(i: &Ideal, n_max: u64, e: u32) -> Vec<Ideal> {
    let mut roots = PowerRoots::new(i);
    (0..=n_max).map(|n| roots.root(n, e)).collect()
}

/// Digit-recursion state for a single polynomial `f`.
#[derive(Debug, Clone)]
struct PrincipalRoots {
    f: Polynomial,
    /// `f^0, ..., f^(p-1)`, then extended on demand for the `f^q` factor.
    powers: Vec<Polynomial>,
    interned: Vec<Ideal>,
    index: HashMap<ReducedBasis, usize>,
    steps: HashMap<(usize, u32), usize>,
}

impl PrincipalRoots {
    fn new(f: Polynomial) -> Self {
        let ring = f.ring().clone();
        let unit = Ideal::unit(&ring);
        let mut index = HashMap::new();
        index.insert(unit.reduced_basis().clone(), 0);
        PrincipalRoots {
            powers: vec![Polynomial::one(&ring)],
            f,
            interned: vec![unit],
            index,
            steps: HashMap::new(),
        }
    }

    fn ring(&self) -> &Ring {
        self.f.ring()
    }

    fn f_power(&mut self, k: u64) -> &Polynomial {
        while self.powers.len() as u64 <= k {
            let next = self.powers.last().unwrap().mul_unchecked(&self.f);
            self.powers.push(next);
        }
        &self.powers[k as usize]
    }

    fn intern(&mut self, i: Ideal) -> usize {
        let b = i.reduced_basis().clone();
        if let Some(&id) = self.index.get(&b) {
            return id;
        }
        let id = self.interned.len();
        self.interned.push(i.canonical());
        self.index.insert(b, id);
        id
    }

    fn step(&mut self, id: usize, digit: u32) -> usize {
        if let Some(&next) = self.steps.get(&(id, digit)) {
            return next;
        }
        let g = self.f_power(digit as u64).clone();
        let scaled = self.interned[id].multiply_by(&g).expect("same ring");
        let next = self.intern(frobenius_root(&scaled, 1));
        self.steps.insert((id, digit), next);
        next
    }

    /// `(q, id)` with `C^e(f^n) = f^q · interned[id]`.
    fn key(&mut self, n: u64, e: u32) -> (u64, usize) {
        let p = self.ring().p().get() as u64;
        let mut rest = n;
        let mut id = 0;
        for _ in 0..e {
            id = self.step(id, (rest % p) as u32);
            rest /= p;
        }
        (rest, id)
    }

    fn ideal_for(&mut self, (q, id): (u64, usize)) -> Ideal {
        if q == 0 {
            return self.interned[id].clone();
        }
        let g = self.f_power(q).clone();
        self.interned[id].multiply_by(&g).expect("same ring")
    }
}

#[derive(Debug, Clone)]
enum Strategy {
    Principal(PrincipalRoots),
    General(PowerTable),
}

/// Frobenius roots of powers `C^e(a^n)`, sharing work across `n` and `e`.
#[derive(Debug, Clone)]
pub struct PowerRoots {
    ideal: Ideal,
    strategy: Strategy,
    last: Option<((u64, u32), Ideal)>,
}

impl PowerRoots {
    pub fn new(a: &Ideal) -> Self {
        let strategy = if a.is_principal() && !a.is_unit() {
            Strategy::Principal(PrincipalRoots::new(a.generators()[0].clone()))
        } else {
            Strategy::General(PowerTable::new(a))
        };
        PowerRoots {
            ideal: a.clone(),
            strategy,
            last: None,
        }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn root(&mut self, n: u64, e: u32) -> Ideal {
        if let Some((key, ideal)) = &self.last {
            if *key == (n, e) {
                return ideal.clone();
            }
        }
        let out = match &mut self.strategy {
            Strategy::Principal(pr) => {
                let key = pr.key(n, e);
                pr.ideal_for(key)
            }
            Strategy::General(table) => frobenius_root(table.power(n as usize), e),
        };
        self.last = Some(((n, e), out.clone()));
        out
    }

    /// Whether `C^e(a^n) ≠ C^e(a^(n+1))`.
    pub fn jumps_at(&mut self, n: u64, e: u32) -> bool {
        if let Strategy::Principal(pr) = &mut self.strategy {
            let (k0, k1) = (pr.key(n, e), pr.key(n + 1, e));
            if k0.0 == k1.0 {
                // Multiplication by f^q is injective on ideals.
                return k0.1 != k1.1;
            }
            let (a, b) = (pr.ideal_for(k0), pr.ideal_for(k1));
            return a != b;
        }
        let a = self.root(n, e);
        let b = self.root(n + 1, e);
        a != b
    }
}
