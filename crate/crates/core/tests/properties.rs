//! Randomized algebraic properties of the exact kernel.

use proptest::prelude::*;

use spheremass_core::exactnum::{rat, rat_int, sqrt_upper, sum_exact, ExactValue, Rational};
use spheremass_core::xyfunc::{conformal_laplacian, BiPoly, XYRational};

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-2000i64..2000, 1i64..200).prop_map(|(n, d)| rat(n, d))
}

fn exact_value_strategy() -> impl Strategy<Value = ExactValue> {
    (rational_strategy(), rational_strategy()).prop_map(|(a, b)| ExactValue::new(a, b))
}

fn bipoly_strategy() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0u32..4, 0u32..4), -9i64..10), 0..6).prop_map(|terms| {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, rat_int(c));
        }
        p
    })
}

fn xyrational_strategy() -> impl Strategy<Value = XYRational> {
    (bipoly_strategy(), 0u32..4).prop_map(|(num, k)| XYRational::new(num, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_value_field_laws(
        u in exact_value_strategy(),
        v in exact_value_strategy(),
        w in exact_value_strategy(),
        r in rational_strategy(),
    ) {
        prop_assert_eq!(u.clone() + v.clone(), v.clone() + u.clone());
        prop_assert_eq!(
            (u.clone() + v.clone()) + w.clone(),
            u.clone() + (v.clone() + w.clone())
        );
        prop_assert_eq!(u.clone() - u.clone(), ExactValue::zero());
        let distributed = u.clone().scale(&r) + v.clone().scale(&r);
        prop_assert_eq!((u.clone() + v.clone()).scale(&r), distributed);
    }

    #[test]
    fn summation_order_independent(
        values in prop::collection::vec(exact_value_strategy(), 0..24),
        seed in any::<u64>(),
    ) {
        let mut shuffled = values.clone();
        // Cheap deterministic Fisher-Yates from the seed.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        prop_assert_eq!(sum_exact(values), sum_exact(shuffled));
    }

    #[test]
    fn enclosures_nest_in_digits(v in exact_value_strategy(), d1 in 1u32..12, extra in 1u32..8) {
        let coarse = v.enclosure(d1);
        let fine = v.enclosure(d1 + extra);
        prop_assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn sqrt_upper_contract(n in 0i64..2_000_000, d in 1i64..2_000_000) {
        let r = rat(n, d);
        let s = sqrt_upper(&r).unwrap();
        prop_assert!(&s * &s >= r.clone());
        // Relative slack at most 2e-6 (squared factor (1+2e-6) covers it).
        let slack: Rational = "1000002/1000000".parse().unwrap();
        prop_assert!(&s * &s <= r * slack);
    }

    #[test]
    fn mixed_partials_commute(u in xyrational_strategy()) {
        prop_assert_eq!(u.d_dx().d_dy(), u.d_dy().d_dx());
    }

    #[test]
    fn laplacian_is_linear(
        u in xyrational_strategy(),
        v in xyrational_strategy(),
        c in rational_strategy(),
    ) {
        let lhs = conformal_laplacian(&u.scale(&c).add(&v));
        let rhs = conformal_laplacian(&u).scale(&c).add(&conformal_laplacian(&v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonicalization_idempotent(u in xyrational_strategy()) {
        let again = XYRational::new(u.num().clone(), u.den_power());
        prop_assert_eq!(again, u);
    }
}

#[test]
fn sqrt_upper_random_batch() {
    // 1000 seeded random rationals: s^2 >= r with relative slack <= 2e-6.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let slack: Rational = "1000002/1000000".parse().unwrap();
    for _ in 0..1000 {
        let n: u64 = rng.gen_range(0..1_000_000_000);
        let d: u64 = rng.gen_range(1..1_000_000_000);
        let r = Rational::new(n.into(), d.into());
        let s = sqrt_upper(&r).unwrap();
        assert!(&s * &s >= r);
        assert!(&s * &s <= r * &slack);
    }
}
