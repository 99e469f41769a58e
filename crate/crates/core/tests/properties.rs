//! Randomized checks of the algebraic laws over small rings: at most three
//! variables, generators of degree at most 4, p in {2, 3, 5, 7}.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use fpinv_core::bsroots::{bernstein_sato_roots, valid_truncations};
use fpinv_core::fparith::{lucas_binomial, s_m_eigenvalue, s_pi_digit_eigenvalue, LucasTable};
use fpinv_core::frobroot::{frobenius_root, frobenius_root_chain};
use fpinv_core::groebner::{Ideal, PowerTable};
use fpinv_core::invariants::{
    approx_poly_roots, f_jumping_numbers, f_threshold_estimate, generator_count, nu_invariants, nu_j, stable_exponent,
    TestIdeals,
};
use fpinv_core::laws;
use fpinv_core::monomial_oracle::{monomial_nu_invariants, MonomialIdeal};
use fpinv_core::padic::{digit_sum_identity_check, split_negative, PadicRational};
use fpinv_core::polyring::Monomial;
use fpinv_core::{parse_poly, Fraction, MonomialOrder, Polynomial, PrimeModulus, Ring, VariableContext};

const PRIMES: [u64; 4] = [2, 3, 5, 7];
const NAMES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone)]
struct Case {
    p: u64,
    nvars: usize,
    gens: Vec<Vec<(Vec<u32>, u32)>>,
}

impl Case {
    fn ring(&self) -> Ring {
        VariableContext::new(
            &NAMES[..self.nvars],
            PrimeModulus::new(self.p).unwrap(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    fn ideal(&self, r: &Ring) -> Ideal {
        let polys = self.gens.iter().map(|g| poly(r, g)).collect();
        Ideal::new(r, polys).unwrap()
    }
}

fn poly(r: &Ring, terms: &[(Vec<u32>, u32)]) -> Polynomial {
    let n = r.nvars();
    Polynomial::from_terms(r, terms.iter().map(|(e, c)| (Monomial::from_slice(&e[..n]), *c)))
}

fn arb_exponent() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=4, 3).prop_map(|mut e| {
        while e.iter().sum::<u32>() > 4 {
            let i = (0..3).max_by_key(|&i| e[i]).unwrap();
            e[i] -= 1;
        }
        e
    })
}

fn arb_poly_terms(max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, u32)>> {
    prop::collection::vec((arb_exponent(), 1u32..7), 1..=max_terms)
}

fn arb_case_with(primes: Vec<u64>, max_gens: usize, max_terms: usize) -> impl Strategy<Value = Case> {
    (
        prop::sample::select(primes),
        1usize..=3,
        prop::collection::vec(arb_poly_terms(max_terms), 1..=max_gens),
    )
        .prop_map(|(p, nvars, gens)| Case { p, nvars, gens })
}

fn arb_case() -> impl Strategy<Value = Case> {
    arb_case_with(PRIMES.to_vec(), 2, 3)
}

/// Proper nonzero ideals cheap enough for ν computations at levels 1 and 2:
/// principal for any p, two generators only for p ≤ 3.
fn arb_nu_case() -> impl Strategy<Value = Case> {
    prop_oneof![arb_case_with(PRIMES.to_vec(), 1, 3), arb_case_with(vec![2, 3], 2, 2)]
}

fn nontrivial(a: &Ideal) -> bool {
    !a.is_zero() && !a.is_unit()
}

fn big_binomial(m: u64, n: u64) -> BigUint {
    if n > m {
        return BigUint::from(0u32);
    }
    let k = n.min(m - n);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // fparith

    #[test]
    fn lucas_matches_big_integers(m in 0u64..=10_000, n in 0u64..=10_000, pi in 0usize..4) {
        let p = PrimeModulus::new(PRIMES[pi]).unwrap();
        let exact = big_binomial(m, n) % BigUint::from(PRIMES[pi]);
        prop_assert_eq!(BigUint::from(lucas_binomial(m as u128, n as u128, p).value()), exact);
    }

    #[test]
    fn lucas_top_row_nonzero(pi in 0usize..4, e in 1u32..=4, b in 0u64..10_000) {
        let p = PrimeModulus::new(PRIMES[pi]).unwrap();
        let q = p.power(e).unwrap();
        let t = LucasTable::new(p);
        prop_assert!(!t.binomial((q - 1) as u128, (b % q) as u128).is_zero());
    }

    #[test]
    fn digit_eigenvalues_agree(pi in 0usize..4, e in 1u32..=3, r in 1usize..=3, seed in prop::collection::vec(0u64..1000, 3), i in 0u32..3) {
        let p = PrimeModulus::new(PRIMES[pi]).unwrap();
        let q = p.power(e).unwrap();
        let i = i % e;
        let a: Vec<u64> = seed[..r].iter().map(|x| x % q).collect();
        let dual: Vec<u64> = a.iter().map(|x| q - 1 - x).collect();
        let m = p.power(i).unwrap() as u128;
        let lhs = s_m_eigenvalue(m, &dual, p);
        prop_assert_eq!(lhs, s_pi_digit_eigenvalue(i, e, &a, p).unwrap());
        prop_assert_eq!(lhs.pow(PRIMES[pi]), lhs);
    }

    // polyring

    #[test]
    fn order_is_total_and_multiplicative(a in arb_exponent(), b in arb_exponent(), c in arb_exponent(), lex in any::<bool>()) {
        let o = if lex { MonomialOrder::Lex } else { MonomialOrder::Grevlex };
        let (ma, mb, mc) = (Monomial::from_slice(&a), Monomial::from_slice(&b), Monomial::from_slice(&c));
        prop_assert_eq!(o.cmp(&ma, &mb) == Ordering::Equal, a == b);
        prop_assert_eq!(o.cmp(&ma, &mb), o.cmp(&ma.mul(&mc), &mb.mul(&mc)));
        prop_assert_ne!(o.cmp(&ma.mul(&mc), &ma), Ordering::Less);
        if o.cmp(&ma, &mb) == Ordering::Less && o.cmp(&mb, &mc) == Ordering::Less {
            prop_assert_eq!(o.cmp(&ma, &mc), Ordering::Less);
        }
    }

    #[test]
    fn decompose_round_trip(case in arb_case(), e in 1u32..=2) {
        let r = case.ring();
        let f = poly(&r, &case.gens[0]);
        let mut acc = Polynomial::zero(&r);
        for (mu, g) in f.pe_decompose(e) {
            prop_assert!(!g.is_zero());
            prop_assert!(mu.exponents().iter().all(|&x| (x as u64) < r.p().power(e).unwrap()));
            acc = acc.add(&g.frobenius_power(e).unwrap().mul_term(&mu, 1)).unwrap();
        }
        prop_assert_eq!(acc, f);
    }

    #[test]
    fn decompose_ignores_term_order(case in arb_case()) {
        let r = case.ring();
        let mut reversed = case.gens[0].clone();
        reversed.reverse();
        prop_assert_eq!(poly(&r, &case.gens[0]).pe_decompose(1), poly(&r, &reversed).pe_decompose(1));
    }

    #[test]
    fn frobenius_composes(case in arb_case(), e in 0u32..=2, d in 0u32..=2) {
        let f = poly(&case.ring(), &case.gens[0]);
        prop_assert_eq!(f.frobenius_power(e + d).unwrap(), f.frobenius_power(d).unwrap().frobenius_power(e).unwrap());
    }

    #[test]
    fn render_parse_round_trip(case in arb_case()) {
        let r = case.ring();
        let f = poly(&r, &case.gens[0]);
        prop_assert_eq!(parse_poly(&f.to_string(), &r).unwrap(), f);
    }

    // groebner

    #[test]
    fn reduced_basis_is_deterministic_and_reduced(case in arb_case_with(PRIMES.to_vec(), 3, 3)) {
        let r = case.ring();
        let b1 = case.ideal(&r).reduced_basis().clone();
        let b2 = case.ideal(&r).reduced_basis().clone();
        prop_assert_eq!(&b1, &b2);
        let lms: Vec<&Monomial> = b1.polys().iter().map(|f| f.leading_monomial().unwrap()).collect();
        for (i, f) in b1.polys().iter().enumerate() {
            prop_assert_eq!(f.leading_coefficient(), 1);
            for (k, lm) in lms.iter().enumerate() {
                if k != i {
                    prop_assert!(f.terms().iter().all(|(m, _)| !lm.divides(m)));
                }
            }
        }
    }

    #[test]
    fn equality_iff_mutual_containment(c1 in arb_case_with(vec![3], 2, 2), c2 in arb_case_with(vec![3], 2, 2)) {
        let r = VariableContext::new(&NAMES, PrimeModulus::new(3).unwrap(), MonomialOrder::Grevlex).unwrap();
        let i = Case { nvars: 3, ..c1 }.ideal(&r);
        let j = Case { nvars: 3, ..c2 }.ideal(&r);
        let k = i.sum(&j).unwrap();
        let mutual = i.contains_ideal(&k).unwrap() && k.contains_ideal(&i).unwrap();
        prop_assert_eq!(i.equals(&k).unwrap(), mutual);
        prop_assert!(k.contains_ideal(&i).unwrap() && k.contains_ideal(&j).unwrap());
    }

    #[test]
    fn powers_cohere(case in arb_case_with(PRIMES.to_vec(), 2, 2), m in 0usize..=2, n in 0usize..=2) {
        let r = case.ring();
        let a = case.ideal(&r);
        let mut t = PowerTable::new(&a);
        let prod = t.power(m).clone().product(&t.power(n).clone()).unwrap();
        prop_assert_eq!(t.power(m + n).clone(), prod);
    }

    #[test]
    fn bracket_inside_ordinary_power(case in arb_case_with(vec![2, 3], 2, 2)) {
        let r = case.ring();
        let a = case.ideal(&r);
        let q = r.p().power(1).unwrap() as usize;
        let mut t = PowerTable::new(&a);
        let br = a.bracket_power(1).unwrap();
        prop_assert!(t.power(q).contains_ideal(&br).unwrap());
        if a.is_principal() {
            prop_assert_eq!(t.power(q).clone(), br);
        }
    }

    // frobroot

    #[test]
    fn root_monotone(c1 in arb_case(), c2 in arb_case(), e in 1u32..=2) {
        let r = VariableContext::new(&NAMES, PrimeModulus::new(c1.p).unwrap(), MonomialOrder::Grevlex).unwrap();
        let i = Case { nvars: 3, ..c1 }.ideal(&r);
        let j = i.sum(&Case { nvars: 3, p: c1.p, ..c2 }.ideal(&r)).unwrap();
        prop_assert!(laws::root_monotone(&i, &j, e).unwrap());
    }

    #[test]
    fn chain_is_decreasing(case in arb_nu_case()) {
        let r = case.ring();
        let a = case.ideal(&r);
        let chain = frobenius_root_chain(&a, 2 * r.p().get() as u64, 1);
        for w in chain.windows(2) {
            prop_assert!(w[0].contains_ideal(&w[1]).unwrap());
        }
    }

    // invariants

    #[test]
    fn nu_members_are_nu_j_values(case in arb_nu_case()) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let nu = nu_invariants(&a, 1).unwrap();
        let q = r.p().get() as u64;
        let mut roots = fpinv_core::frobroot::PowerRoots::new(&a.interreduced());
        for n in nu.members.iter().copied().filter(|&n| n < 2 * q) {
            let j = roots.root(n + 1, 1);
            prop_assert_eq!(nu_j(&a, &j, 1).unwrap(), n);
        }
    }

    #[test]
    fn nu_tail_is_periodic(case in arb_nu_case()) {
        let a = case.ideal(&case.ring());
        prop_assume!(nontrivial(&a));
        prop_assert!(laws::nu_periodicity(&a, 1).unwrap());
    }

    #[test]
    fn thresholds_increase(case in arb_case_with(PRIMES.to_vec(), 1, 3)) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let vars: Vec<String> = NAMES[..case.nvars].iter().map(|s| s.to_string()).collect();
        let m = Ideal::new(&r, vars.iter().map(|v| parse_poly(v, &r).unwrap()).collect()).unwrap();
        prop_assume!(m.contains_ideal(&a).unwrap());
        let t1 = f_threshold_estimate(&a, &m, 1).unwrap();
        let t2 = f_threshold_estimate(&a, &m, 2).unwrap();
        prop_assert!(t1 <= t2);
    }

    #[test]
    fn test_ideals_decrease_and_obey_skoda(case in arb_case_with(vec![2, 3], 1, 3)) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let e0 = stable_exponent(&a, 2).unwrap().e0;
        let mut tau = TestIdeals::new(&a, e0).unwrap();
        let q = r.p().get() as u64;
        let mut prev = tau.at(0, 1).unwrap();
        for n in 1..=2 * q {
            let cur = tau.at(n, 1).unwrap();
            prop_assert!(prev.contains_ideal(&cur).unwrap());
            prev = cur;
        }
        let rr = generator_count(&a) as u64;
        for n in rr * q..=(rr + 1) * q {
            let lhs = tau.at(n, 1).unwrap();
            let rhs = a.product(&tau.at(n - q, 1).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn principal_roots_match_jumping_numbers(case in arb_case_with(vec![2, 3, 5], 1, 3)) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let fj = f_jumping_numbers(&a, 1, 2).unwrap();
        prop_assume!(fj.iter().all(|e| e.value().is_some()));
        let q = r.p().get() as i128;
        let expected: BTreeSet<u64> = fj
            .iter()
            .map(|e| e.value().unwrap())
            .map(|l| ((l * Fraction::from_integer(q)).ceil().to_integer() - 1) as u64)
            .collect();
        prop_assert_eq!(approx_poly_roots(&a, 1).unwrap().numerators, expected);
    }

    // padic

    #[test]
    fn split_negative_is_a_decomposition(num in -10_000i128..10_000, den in 1i128..500, pi in 0usize..4) {
        let p = PrimeModulus::new(PRIMES[pi]).unwrap();
        prop_assume!(den % PRIMES[pi] as i128 != 0);
        let alpha = PadicRational::new(num, den, p).unwrap();
        let (n, gamma) = split_negative(&alpha);
        prop_assert_eq!(gamma.ratio() + Fraction::from_integer(n), alpha.ratio());
        prop_assert!(gamma.ratio() <= Fraction::from_integer(0) && gamma.ratio() >= Fraction::from_integer(-1));
        prop_assert!(fpinv_core::padic::digits_of_rational(&gamma).preperiod().is_empty());
    }

    // bsroots

    #[test]
    fn roots_are_negative_and_shift_closed(case in arb_case_with(vec![2, 3], 1, 2)) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let bs = bernstein_sato_roots(&a, 3).unwrap();
        let classes: BTreeSet<PadicRational> = bs.roots.iter().map(|b| split_negative(b).1).collect();
        let p = r.p();
        for b in &bs.roots {
            prop_assert!(b.is_negative());
            for e in 1..=bs.checked_level {
                let t = fpinv_core::padic::truncation_value(b, e) as u64;
                prop_assert!(valid_truncations(&a, e).unwrap().valid.contains(&t));
            }
            if bs.unresolved.is_empty() {
                let d0 = fpinv_core::padic::truncation_value(b, 1) as i128;
                let shifted = PadicRational::from_ratio((b.ratio() - Fraction::from_integer(d0)) / Fraction::from_integer(p.get() as i128), p).unwrap();
                prop_assert!(classes.contains(&split_negative(&shifted).1));
            }
        }
    }

    #[test]
    fn principal_roots_are_negated_jumping_numbers(case in arb_case_with(vec![2, 3], 1, 2)) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let bs = bernstein_sato_roots(&a, 4).unwrap();
        let fj = f_jumping_numbers(&a, 1, 4).unwrap();
        prop_assume!(bs.unresolved.is_empty() && fj.iter().all(|e| e.value().is_some()));
        let p = r.p().get() as i128;
        let expected: BTreeSet<Fraction> = fj
            .iter()
            .filter_map(|e| e.value())
            .filter(|l| *l > Fraction::from_integer(0) && *l <= Fraction::from_integer(1) && l.denom() % p != 0)
            .map(|l| -l)
            .collect();
        let got: BTreeSet<Fraction> = bs.roots.iter().map(|b| b.ratio()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn truncation_sets_stay_bounded(case in arb_case_with(vec![2, 3], 1, 2), e in 1u32..=2) {
        let r = case.ring();
        let a = case.ideal(&r);
        prop_assume!(nontrivial(&a));
        let e0 = stable_exponent(&a, 2).unwrap().e0;
        prop_assume!(e0 + e <= 4);
        let rr = generator_count(&a) as u64;
        let fj = f_jumping_numbers(&a, rr, 4).unwrap();
        let count = fj.len() as u64;
        let size = valid_truncations(&a, e0 + e).unwrap().valid.len() as u64;
        prop_assert!(size <= r.p().power(e0).unwrap() * count, "{} > p^{} * {}", size, e0, count);
    }

    // monomial_oracle

    #[test]
    fn oracle_matches_pipeline(p in prop::sample::select(vec![2u64, 3, 5]), nvars in 1usize..=2, gens in prop::collection::vec(arb_exponent(), 1..=2), e in 1u32..=2) {
        let pm = PrimeModulus::new(p).unwrap();
        let gens: Vec<Vec<u32>> = gens.into_iter().map(|g| g[..nvars].to_vec()).filter(|g| g.iter().any(|&x| x > 0)).collect();
        prop_assume!(!gens.is_empty());
        let mono = MonomialIdeal::new(gens, nvars, pm).unwrap();
        prop_assume!(mono.generators().len() as u64 * pm.power(e).unwrap() <= 200);
        let r = VariableContext::new(&NAMES[..nvars], pm, MonomialOrder::Grevlex).unwrap();
        let ideal = Ideal::new(&r, mono.generators().iter().map(|g| Polynomial::term(&r, Monomial::from_slice(g), 1)).collect()).unwrap();
        prop_assert_eq!(monomial_nu_invariants(&mono, e).unwrap().members, nu_invariants(&ideal, e).unwrap().members);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn root_adjunction(c1 in arb_case(), c2 in arb_case(), e in 1u32..=2) {
        let r = VariableContext::new(&NAMES, PrimeModulus::new(c1.p).unwrap(), MonomialOrder::Grevlex).unwrap();
        let i = Case { nvars: 3, ..c1 }.ideal(&r);
        let j = Case { nvars: 3, p: c1.p, ..c2 }.ideal(&r);
        prop_assert!(laws::root_adjunction(&i, &j, e).unwrap());
        prop_assert!(laws::root_adjunction(&i, &frobenius_root(&i, e), e).unwrap());
    }

    #[test]
    fn root_composition(case in arb_case(), e in 0u32..=2, d in 0u32..=2) {
        let a = case.ideal(&case.ring());
        prop_assert!(laws::root_composition(&a, e, d));
    }

    #[test]
    fn root_generator_independence(case in arb_case_with(PRIMES.to_vec(), 3, 3), e in 1u32..=2) {
        let a = case.ideal(&case.ring());
        prop_assert!(laws::root_generator_independence(&a, e));
    }

    #[test]
    fn skoda(case in arb_case_with(PRIMES.to_vec(), 2, 2), extra in 0u64..3) {
        let r = case.ring();
        let a = case.ideal(&r);
        let rr = generator_count(&a) as u64;
        prop_assume!(!a.is_zero() && (rr == 1 || r.p().get() <= 5));
        let n = rr * r.p().get() as u64 + extra;
        prop_assert!(laws::skoda_step(&a, n, 1).unwrap());
    }

    #[test]
    fn nu_nesting(case in arb_nu_case()) {
        let a = case.ideal(&case.ring());
        prop_assume!(nontrivial(&a));
        prop_assert!(laws::nu_nesting(&a, 1).unwrap());
    }

    #[test]
    fn truncation_prefix_closure(case in arb_nu_case()) {
        let a = case.ideal(&case.ring());
        prop_assume!(nontrivial(&a));
        prop_assert!(laws::truncation_prefix_closure(&a, 1).unwrap());
    }

    /// Denominators divide `p^d - 1` for `d ≤ 6`, so periods stay short enough
    /// for the reconstruction to fit in i128.
    #[test]
    fn padic_round_trip(num in -1_000_000i128..=1_000_000, x in 1i128..=100_000, d in 1u32..=6, pi in 0usize..4, e in 0u32..=6) {
        let p = PrimeModulus::new(PRIMES[pi]).unwrap();
        let period = (PRIMES[pi] as i128).pow(d) - 1;
        let den = period / num_integer::gcd(period, x);
        let alpha = PadicRational::new(num, den, p).unwrap();
        prop_assert!(laws::padic_round_trip(&alpha, e).unwrap());
    }

    #[test]
    fn digit_sum_identity(pi in 0usize..4, d in 1u32..=3, k in 0i128..=1000, e in 1u32..=3) {
        let p = PrimeModulus::new(PRIMES[pi]).unwrap();
        let period = (PRIMES[pi] as i128).pow(d) - 1;
        let lambda = PadicRational::new(k % (period + 1), period, p).unwrap();
        prop_assert!(digit_sum_identity_check(&lambda, d, e).unwrap());
    }
}
