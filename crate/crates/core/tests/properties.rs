use num_bigint::BigInt;
use proptest::prelude::*;

use supersingular::count::{count_affine_brute_force, infinity_count, within_weil_bound};
use supersingular::curves::m8_to_hyperelliptic;
use supersingular::ff::is_prime;
use supersingular::newton::valuation_supersingular;
use supersingular::zeta::l_polynomial_from_counts;
use supersingular::{
    count_points, count_sequence, family_of, field_specs, make_extension, newton_polygon,
    CountOptions, FamilyLabel, FpPoly, LPolynomial, PrimeModulus, ResidueStrategy,
    SuperellipticCurve,
};

const PRIMES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];

fn pm(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

/// A valid curve over a small prime, with `f` monic of degree 3 to 6.
fn curve() -> impl Strategy<Value = SuperellipticCurve> {
    (
        prop::sample::select(&PRIMES[..]),
        prop::sample::select(&[2u32, 3, 4, 5][..]),
        prop::collection::vec(0i64..17, 3..=6),
    )
        .prop_filter_map("singular or wild", |(p, m, mut f)| {
            f.push(1);
            SuperellipticCurve::from_integer(pm(p), m, &f).ok()
        })
}

fn q_of(c: &SuperellipticCurve, k: u32) -> u64 {
    (c.prime().get() as u64).pow(k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn translation_preserves_genus_and_counts(c in curve(), shift in 0u32..17) {
        let t = c.translate(shift % c.prime().get()).unwrap();
        prop_assert_eq!(t.genus(), c.genus());
        let opts = CountOptions::default();
        for k in 1..=2 {
            prop_assert_eq!(count_points(&t, k, &opts).unwrap(), count_points(&c, k, &opts).unwrap());
        }
    }

    #[test]
    fn strategies_match_oracle_and_weil(c in curve(), k in 1usize..=3) {
        prop_assume!(q_of(&c, k as u32) <= 5000);
        let ctx = make_extension(c.prime(), k).unwrap();
        let oracle = count_affine_brute_force(c.exponent(), c.polynomial(), &ctx)
            + infinity_count(&c, &ctx).unwrap();
        for s in [ResidueStrategy::Auto, ResidueStrategy::Exponentiation, ResidueStrategy::Table] {
            let n = count_points(&c, k, &CountOptions::default().with_strategy(s)).unwrap();
            prop_assert_eq!(n, oracle);
        }
        prop_assert!(within_weil_bound(oracle, ctx.order(), c.genus()));
    }

    #[test]
    fn zeta_predicts_counts_past_the_genus(c in curve()) {
        let g = c.genus();
        prop_assume!(g >= 1 && q_of(&c, g + 1) <= 200_000);
        let opts = CountOptions::default();
        let seq = count_sequence(&c, g as usize, &opts).unwrap();
        let l = l_polynomial_from_counts(c.prime(), g, &seq.counts).unwrap();
        let k = g as usize + 1;
        prop_assert_eq!(l.predicted_count(k), BigInt::from(count_points(&c, k, &opts).unwrap()));
    }

    #[test]
    fn quartic_cover_lands_in_m8(
        p in prop::sample::select(&PRIMES[1..]),
        h in prop::collection::vec(0u64..17, 3),
    ) {
        let mut h = h;
        h.push(1);
        let f3 = FpPoly::new(pm(p), &h);
        prop_assume!(f3.coeff(0) != 0 && f3.is_separable());
        let c = m8_to_hyperelliptic(&f3, pm(p)).unwrap();
        prop_assert_eq!(family_of(&c), FamilyLabel::M8);
        prop_assert_eq!(c.genus(), 3);
    }

    #[test]
    fn newton_polygon_of_functional_equation_polynomials(
        p in prop::sample::select(&PRIMES[..]),
        lower in prop::collection::vec(-400i64..400, 1..=6),
        scale in prop::collection::vec(0u32..3, 6),
    ) {
        // Any a_1..a_g with the tail forced by a_{2g-i} = p^{g-i} a_i.
        let mut coeffs = vec![BigInt::from(1)];
        for (i, &a) in lower.iter().enumerate() {
            coeffs.push(BigInt::from(a) * BigInt::from(p).pow(scale[i]));
        }
        let g = lower.len();
        let l = LPolynomial::from_lower_half(pm(p), &coeffs);
        let np = newton_polygon(&l);
        prop_assert!(np.is_symmetric());
        prop_assert_eq!(np.vertices.first(), Some(&(0, 0)));
        prop_assert_eq!(np.vertices.last(), Some(&(2 * g, g as u32)));
        prop_assert_eq!(np.total_multiplicity(), 2 * g as u32);
        prop_assert_eq!(np.is_supersingular(), valuation_supersingular(&l));
        prop_assert_eq!(np.p_rank(), np.slopes.iter().filter(|s| s.num == 0).map(|s| s.mult).sum::<u32>());
    }

    #[test]
    fn frobenius_order_divides_degree(p in 2u64..100_000) {
        prop_assume!(is_prime(p));
        for spec in field_specs() {
            if let Ok(t) = spec.frobenius_order(p) {
                prop_assert_eq!(spec.degree % t, 0);
                prop_assert_eq!(spec.splitting_count(p).unwrap() * t, spec.degree);
            }
        }
    }

    #[test]
    fn root_counts_sum_to_field_size(
        p in prop::sample::select(&PRIMES[..]),
        k in 1usize..=3,
        m in 2u64..=12,
    ) {
        prop_assume!(m % p != 0 && p.pow(k as u32) <= 5000);
        let ctx = make_extension(pm(p), k).unwrap();
        let total: u64 = ctx.elements().map(|c| ctx.mth_root_count(&c, m).unwrap()).sum();
        prop_assert_eq!(total, p.pow(k as u32));
    }
}
