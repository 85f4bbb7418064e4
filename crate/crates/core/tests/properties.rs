//! Property tests for the algebraic substrate: field axioms, order
//! axioms, series identities, and the Buchberger criterion on random
//! ideals.

use proptest::prelude::*;

use rank3_core::cyc::CycNum;
use rank3_core::groebner::{buchberger, BuchbergerOpts};
use rank3_core::monomial::{monomial_compare, PolyRing, Var};
use rank3_core::poly::Poly;
use rank3_core::rat::Rat;
use rank3_core::series::{power_sum_series, Series, SeriesVar};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d))
}

fn arb_cyc() -> impl Strategy<Value = CycNum> {
    [arb_rat(), arb_rat(), arb_rat(), arb_rat()].prop_map(CycNum::new)
}

fn arb_monomial() -> impl Strategy<Value = [u32; 3]> {
    [0u32..6, 0u32..6, 0u32..6]
}

fn arb_poly() -> impl Strategy<Value = Poly<Rat>> {
    proptest::collection::vec((arb_monomial(), -9i64..=9), 1..5).prop_map(|terms| {
        let ring = PolyRing::quotient3();
        Poly::from_terms(
            ring.clone(),
            terms
                .into_iter()
                .map(|(e, c)| (ring.monomial(&e).unwrap(), Rat::from_int(c)))
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyc_field_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
        let ab = &a + &b;
        prop_assert_eq!(&ab, &(&b + &a));
        prop_assert_eq!(&(&ab + &c), &(&a + &(&b + &c)));
        let abm = &a * &b;
        prop_assert_eq!(&abm, &(&b * &a));
        prop_assert_eq!(&(&abm * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&abm + &(&a * &c)));
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn cyc_conjugation_is_ring_involution(a in arb_cyc(), b in arb_cyc()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn monomial_order_is_total_and_multiplicative(
        ea in arb_monomial(),
        eb in arb_monomial(),
        ec in arb_monomial(),
    ) {
        let ring = PolyRing::quotient3();
        let a = ring.monomial(&ea).unwrap();
        let b = ring.monomial(&eb).unwrap();
        let c = ring.monomial(&ec).unwrap();
        let ab = monomial_compare(&ring, &a, &b).unwrap();
        // antisymmetry
        prop_assert_eq!(monomial_compare(&ring, &b, &a).unwrap(), ab.reverse());
        prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
        // multiplicativity: a >= b implies ac >= bc
        prop_assert_eq!(
            monomial_compare(&ring, &a.mul(&c), &b.mul(&c)).unwrap(),
            ab
        );
        // 1 is the least monomial: m >= 1 always
        let one = ring.one();
        prop_assert_ne!(
            monomial_compare(&ring, &a, &one).unwrap(),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn series_exp_log_round_trip(
        c1 in -6i64..=6, c2 in -6i64..=6, c3 in -6i64..=6,
    ) {
        let trunc = 7;
        // s has unit constant term: log then exp returns s
        let s = Series::from_coeffs(
            SeriesVar::T,
            trunc,
            Rat::zero(),
            vec![Rat::one(), Rat::from_int(c1), Rat::from_int(c2), Rat::from_int(c3)],
        );
        prop_assert_eq!(s.log().unwrap().exp().unwrap(), s.clone());
        // u has zero constant term: exp then log returns u
        let u = Series::from_coeffs(
            SeriesVar::T,
            trunc,
            Rat::zero(),
            vec![Rat::zero(), Rat::from_int(c1), Rat::from_int(c2), Rat::from_int(c3)],
        );
        prop_assert_eq!(u.exp().unwrap().log().unwrap(), u);
    }

    #[test]
    fn series_rational_powers_add(
        c1 in -4i64..=4, c2 in -4i64..=4,
        p in -3i64..=3, q in 1i64..=3,
        r in -3i64..=3, s in 1i64..=3,
    ) {
        let base = Series::from_coeffs(
            SeriesVar::T,
            6,
            Rat::zero(),
            vec![Rat::one(), Rat::from_int(c1), Rat::from_int(c2)],
        );
        let e1 = Rat::new(p, q);
        let e2 = Rat::new(r, s);
        let lhs = base.pow_rat(&e1).unwrap().mul(&base.pow_rat(&e2).unwrap());
        let rhs = base.pow_rat(&(&e1 + &e2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reciprocal_is_inverse(c1 in -5i64..=5, c2 in -5i64..=5, c0 in 1i64..=4) {
        let s = Series::from_coeffs(
            SeriesVar::T,
            6,
            Rat::zero(),
            vec![Rat::from_int(c0), Rat::from_int(c1), Rat::from_int(c2)],
        );
        let one = Series::one(SeriesVar::T, 6, Rat::zero());
        prop_assert_eq!(s.mul(&s.reciprocal().unwrap()), one);
    }

}

proptest! {
    // Random Groebner runs are the expensive cases; keep the sample small.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn buchberger_criterion_on_random_ideals(
        f in arb_poly(),
        g in arb_poly(),
        h in arb_poly(),
    ) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let gb = buchberger(&[f.clone(), g.clone()], BuchbergerOpts::default()).unwrap();
        // every S-polynomial of the basis reduces to zero
        for i in 0..gb.basis().len() {
            for j in (i + 1)..gb.basis().len() {
                let bi = &gb.basis()[i];
                let bj = &gb.basis()[j];
                let (mi, ci) = bi.leading().unwrap();
                let (mj, cj) = bj.leading().unwrap();
                let l = mi.lcm(mj);
                let s = bi
                    .mul_term(&l.try_div(mi).unwrap(), &ci.recip().unwrap())
                    .sub(&bj.mul_term(&l.try_div(mj).unwrap(), &cj.recip().unwrap()));
                prop_assert!(gb.reduce(&s).is_zero());
            }
        }
        // explicit ideal combinations are members
        let combo = f.mul(&h).add(&g.mul(&h.add(&Poly::one(f.ring().clone()))));
        prop_assert!(gb.contains(&combo));
    }
}

/// The generating identity behind the power sums: the formal integral of
/// the power-sum series is `log(sum b_i t^i)`, term by term.
#[test]
fn power_sum_series_integrates_to_log() {
    for n in 2u8..=4 {
        let order = 9;
        let s = power_sum_series(n, order).unwrap();
        let ring = PolyRing::rank(n);
        let proto = Poly::<Rat>::zero(ring.clone());
        // integral: coeff of t^m is S_{m-1} / m
        let integral = Series::from_coeff_fn(SeriesVar::T, order, proto.clone(), |m| {
            if m == 0 {
                proto.clone()
            } else {
                s.coeff(m - 1).scale(&Rat::new(1, m as i64))
            }
        });
        let base = Series::from_coeff_fn(SeriesVar::T, order, proto.clone(), |i| {
            if i == 0 {
                Poly::one(ring.clone())
            } else if i >= 2 && i <= n as usize {
                Poly::var(ring.clone(), Var::Beta(i as u8)).unwrap()
            } else {
                proto.clone()
            }
        });
        assert_eq!(integral, base.log().unwrap(), "rank {n}");
    }
}
