use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;

use irreducible_cyclic::closed_forms::QuadraticValue;
use irreducible_cyclic::cyclotomy::{gaussian_periods_exact, RootOfUnitySum};
use irreducible_cyclic::ff::irreducible_polynomials;
use irreducible_cyclic::numtheory::{divisors, factorize, mult_order, pow_mod};
use irreducible_cyclic::oracle::{brute_weight_distribution_with, codeword, count_z};
use irreducible_cyclic::weights::{
    bounds, closed_form, code_params, divisibility, weight_from_period, CodeSpec, DispatchOptions, Strategy as Dispatch,
    WeightDistribution,
};
use irreducible_cyclic::{weight_distribution, FieldTower, TowerConfig};

/// `(p, s, m)` with `p^(s m) <= 2^10`.
const SMALL_TOWERS: &[(u64, u32, u32)] = &[
    (2, 1, 4), (2, 2, 2), (2, 1, 6), (2, 2, 3), (2, 3, 2), (2, 1, 8), (2, 2, 4), (2, 4, 2), (2, 1, 9), (2, 3, 3),
    (2, 1, 10), (2, 2, 5), (2, 5, 2), (3, 1, 2), (3, 1, 3), (3, 1, 4), (3, 2, 2), (3, 1, 6), (3, 2, 3), (3, 3, 2),
    (5, 1, 2), (5, 1, 3), (5, 1, 4), (5, 2, 2), (7, 1, 2), (7, 1, 3), (11, 1, 2), (13, 1, 2), (17, 1, 2),
    (19, 1, 2), (23, 1, 2), (29, 1, 2), (31, 1, 2),
];

fn small_spec() -> impl Strategy<Value = (CodeSpec, FieldTower)> {
    (0..SMALL_TOWERS.len(), any::<prop::sample::Index>()).prop_map(|(t, pick)| {
        let (p, s, m) = SMALL_TOWERS[t];
        let tower = FieldTower::build(p, s, m).unwrap();
        let ds = divisors(tower.r() - 1);
        let spec = code_params(p, s, m, ds[pick.index(ds.len())]).unwrap();
        (spec, tower)
    })
}

/// Parameters reaching the cubic, quartic and index-2 closed forms, which
/// depend on sign choices in their Diophantine data.
fn signed_closed_spec() -> impl Strategy<Value = CodeSpec> {
    prop_oneof![
        (prop::sample::select(vec![7u64, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97]), 1u32..=4)
            .prop_map(|(p, k)| code_params(p, 1, 3 * k, 3).unwrap()),
        (prop::sample::select(vec![5u64, 13, 17, 29, 37, 41, 53]), 1u32..=3)
            .prop_map(|(p, k)| code_params(p, 1, 4 * k, 4).unwrap()),
        (1u32..=6).prop_map(|k| code_params(2, 1, 3 * k, 7).unwrap()),
        (1u32..=2).prop_map(|k| code_params(2, 1, 21 * k, 49).unwrap()),
        (1u32..=3).prop_map(|k| code_params(3, 1, 5 * k, 11).unwrap()),
        (1u32..=2).prop_map(|k| code_params(2, 1, 11 * k, 23).unwrap()),
    ]
}

fn closed_only() -> DispatchOptions {
    DispatchOptions {
        budget: 0,
        ..DispatchOptions::default()
    }
}

fn check_invariants(spec: &CodeSpec, d: &WeightDistribution) -> Result<(), TestCaseError> {
    prop_assert_eq!(d.nonzero_codewords(), spec.q.pow(spec.m0) - 1u32);
    let div = divisibility(spec);
    let (lo, hi) = bounds(spec);
    for w in d.weights() {
        prop_assert!(!w.is_zero() && w <= &spec.n);
        prop_assert!((w % &div).is_zero(), "{} not divisible by {}", w, div);
        prop_assert!(w >= &lo && w <= &hi, "{} outside [{}, {}]", w, lo, hi);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn auto_matches_oracle((spec, tower) in small_spec()) {
        let auto = weight_distribution(&spec, Dispatch::Auto).unwrap();
        let brute = brute_weight_distribution_with(&spec, &tower, false).unwrap();
        prop_assert!(auto.same_multiset(&brute), "{} vs {}", auto, brute);
        check_invariants(&spec, &auto)?;
    }

    #[test]
    fn parallel_and_sequential_oracles_agree((spec, tower) in small_spec()) {
        let a = brute_weight_distribution_with(&spec, &tower, true).unwrap();
        let b = brute_weight_distribution_with(&spec, &tower, false).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn oracle_ignores_field_presentation((spec, tower) in small_spec()) {
        let degree = (spec.s * spec.m) as usize;
        let other = irreducible_polynomials(spec.p, degree)
            .find(|f| f.as_slice() != tower.modulus())
            .unwrap();
        let alt = FieldTower::with_modulus(spec.p, spec.s, spec.m, other, &TowerConfig::default()).unwrap();
        let a = brute_weight_distribution_with(&spec, &tower, false).unwrap();
        let b = brute_weight_distribution_with(&spec, &alt, false).unwrap();
        prop_assert!(a.same_multiset(&b));
    }

    #[test]
    fn zero_count_matches_period((spec, tower) in small_spec(), k in any::<u64>()) {
        let r = tower.r();
        let a = tower.alpha_pow((k % (r - 1)) as i128);
        let z = count_z(&spec, &tower, a).unwrap();
        let periods = gaussian_periods_exact(&tower, spec.n1).unwrap();
        let class = (k % (r - 1)) % spec.n1;
        let eta = periods.integer_values().unwrap()[class as usize];
        let q = tower.q() as i128;
        prop_assert_eq!(q * z as i128, q + r as i128 - 1 + (q - 1) * spec.n1 as i128 * eta as i128);
        let n = spec.n_u64().unwrap();
        let w = codeword(&spec, &tower, a).unwrap().weight() as u64;
        prop_assert_eq!(w, n - (z - 1) / spec.big_n);
        prop_assert_eq!(BigUint::from(w), weight_from_period(&spec, &BigInt::from(eta)).unwrap());
    }

    #[test]
    fn codewords_are_closed_under_shift((spec, tower) in small_spec(), k in any::<u64>()) {
        let beta = tower.alpha_pow((k % (tower.r() - 1)) as i128);
        let theta = tower.alpha_pow(spec.big_n as i128);
        let mut word = codeword(&spec, &tower, beta).unwrap().entries().to_vec();
        word.rotate_left(1);
        let shifted = codeword(&spec, &tower, tower.mul(beta, theta)).unwrap();
        prop_assert_eq!(word.as_slice(), shifted.entries());
    }

    #[test]
    fn sign_choices_do_not_change_weights(spec in signed_closed_spec()) {
        let plain = closed_form(&spec, &closed_only()).unwrap().unwrap();
        let flipped = closed_form(&spec, &DispatchOptions { flip_signs: true, ..closed_only() }).unwrap().unwrap();
        prop_assert!(plain.same_multiset(&flipped), "{} vs {}", plain, flipped);
        check_invariants(&spec, &plain)?;
    }

    #[test]
    fn closed_forms_respect_invariants(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]),
                                       s in 1u32..=3, m in 1u32..=6, pick in any::<prop::sample::Index>()) {
        let r = BigUint::from(p).pow(s * m);
        prop_assume!(r < BigUint::from(1u64 << 60));
        let r1 = u64::try_from(r - 1u32).unwrap();
        let ds = divisors(r1);
        let spec = code_params(p, s, m, ds[pick.index(ds.len())]).unwrap();
        if let Some(d) = closed_form(&spec, &closed_only()).unwrap() {
            check_invariants(&spec, &d)?;
        }
    }

    #[test]
    fn root_of_unity_sums_form_a_ring(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
                                      a in prop::collection::vec((0u64..11, -5i64..5), 0..6),
                                      b in prop::collection::vec((0u64..11, -5i64..5), 0..6),
                                      c in prop::collection::vec((0u64..11, -5i64..5), 0..6)) {
        let mk = |v: &[(u64, i64)]| RootOfUnitySum::from_terms(p, v.iter().map(|&(e, k)| (e % p, k)));
        let (x, y, z) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!((x.mul(&y).to_complex() - x.to_complex() * y.to_complex()).norm() < 1e-6);
        prop_assert_eq!(x.sub(&x), RootOfUnitySum::zero(p));
    }

    #[test]
    fn quadratic_norm_is_multiplicative(x1 in -50i64..50, y1 in -50i64..50, x2 in -50i64..50, y2 in -50i64..50,
                                        d in prop::sample::select(vec![-7i64, -11, -23, 5, 13, -3])) {
        let mk = |x: i64, y: i64| QuadraticValue::new((2 * x).into(), (2 * y).into(), d).unwrap();
        let (a, b) = (mk(x1, y1), mk(x2, y2));
        prop_assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.mul(&a.conj()).as_integer(), Some(a.norm()));
    }

    #[test]
    fn number_theory_helpers(n in 2u64..1_000_000_000, base in 2u64..1000) {
        let product: u64 = factorize(n).iter().map(|&(t, e)| t.pow(e)).product();
        prop_assert_eq!(product, n);
        if num_integer::gcd(base, n) == 1 {
            let k = mult_order(base, n).unwrap();
            prop_assert_eq!(pow_mod(base, k, n), 1 % n);
            for d in divisors(k) {
                if d < k {
                    prop_assert_ne!(pow_mod(base, d, n), 1 % n);
                }
            }
        }
    }
}
