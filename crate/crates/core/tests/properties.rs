//! Property-based invariants across the library.

use num_complex::Complex;
use proptest::prelude::*;

use weyl_lab::characters::{
    char_value, monomial_in_char_basis, weyl_denominator, weyl_transport_angles, CharExpansion,
    TorusPoint,
};
use weyl_lab::clt::{ks_distance, normal_cdf};
use weyl_lab::dims::{bernoulli, g2_leading_term, siegel_leading_term};
use weyl_lab::measures::{inner_product, plancherel_density, st_density, TorusQuadrature};
use weyl_lab::root_systems::{build_root_system, GroupType, RootSystem, Weight};
use weyl_lab::sympow::{h_polynomial, h_via_determinant};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn rs(name: &str) -> RootSystem {
    build_root_system(GroupType::parse(name).unwrap()).unwrap()
}

fn group_names() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"])
}

fn angles(rank: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, rank)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn epsilon_is_determinant_and_homomorphism(name in group_names()) {
        let r = rs(name);
        for w in r.weyl_elements() {
            prop_assert_eq!(w.sign() as i64, w.det());
        }
        // exhaustive at small order, sampled otherwise
        let ws = r.weyl_elements();
        let step = (ws.len() * ws.len() / 400).max(1);
        let mut k = 0usize;
        for a in ws {
            for b in ws {
                k += 1;
                if ws.len() <= 50 || k % step == 0 {
                    let c = a.compose(b);
                    prop_assert_eq!(c.sign(), a.sign() * b.sign());
                }
            }
        }
    }

    #[test]
    fn weyl_orbit_sizes_divide_group_order(name in group_names(), seed in 0u64..1000) {
        let r = rs(name);
        let lam = random_dominant(&r, seed);
        let orbit = r.weyl_orbit(&lam).unwrap();
        prop_assert_eq!(r.weyl_order() % orbit.len(), 0);
        // dominantize maps the whole orbit back to lam
        for nu in &orbit {
            prop_assert_eq!(r.dominantize(nu), lam.clone());
        }
    }

    #[test]
    fn characters_are_weyl_invariant(name in group_names(), seed in 0u64..1000, th in angles(8)) {
        let r = rs(name);
        let lam = random_dominant(&r, seed);
        let t = TorusPoint::new(th[..r.rank()].to_vec());
        let base = char_value(&r, &lam, &t).unwrap();
        for w in r.weyl_elements().iter().step_by(3) {
            let v = char_value(&r, &lam, &weyl_transport_angles(w, &t)).unwrap();
            prop_assert!((v - base).norm() < 1e-7 * (1.0 + base.norm()));
        }
    }

    #[test]
    fn denominator_antisymmetry(name in group_names(), th in angles(8)) {
        // δ(w⋆t) = ε(w)·δ(t)
        let r = rs(name);
        let t = TorusPoint::new(th[..r.rank()].to_vec());
        let base = weyl_denominator(&r, &t);
        for w in r.weyl_elements().iter().step_by(5) {
            let v = weyl_denominator(&r, &weyl_transport_angles(w, &t));
            let expect = base * w.sign() as f64;
            prop_assert!((v - expect).norm() < 1e-8 * (1.0 + base.norm()));
        }
    }

    #[test]
    fn st_density_equals_denominator_squared(name in group_names(), th in angles(8)) {
        let r = rs(name);
        let t = TorusPoint::new(th[..r.rank()].to_vec());
        let a = st_density(&r, &t);
        let b = weyl_denominator(&r, &t).norm_sqr();
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + b));
        prop_assert!(a >= -1e-12);
    }

    #[test]
    fn plancherel_positive_and_near_st(name in group_names(), th in angles(8), p in 2u64..10_000) {
        let r = rs(name);
        let t = TorusPoint::new(th[..r.rank()].to_vec());
        let pl = plancherel_density(&r, p, &t).unwrap();
        prop_assert!(pl >= -1e-12);
        // crude p→∞ envelope: ratio within (1 ± 4/p)^{2|R⁺|}
        let st = st_density(&r, &t);
        if st > 1e-6 {
            let bound = (1.0 + 4.0 / p as f64).powi(2 * r.positive_roots().len() as i32);
            prop_assert!(pl / st <= bound && pl / st >= 1.0 / bound);
        }
    }

    #[test]
    fn quadrature_kills_inband_frequencies(c2a in -20i64..=20, c2b in -20i64..=20) {
        let q = TorusQuadrature::<f64>::new(2, 41).unwrap();
        let w = Weight::from_doubled(vec![c2a, c2b]);
        let v = q.integrate(|t| t.exponential(&w));
        let expect = if c2a == 0 && c2b == 0 { 1.0 } else { 0.0 };
        prop_assert!((v - Complex::new(expect, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inner_product_hermitian(seed in 0u64..500, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let a2 = rs("A2");
        let w = a2.fundamental_weights().to_vec();
        prop_assume!(c1 != 0.0 && c2 != 0.0);
        let lam = random_dominant(&a2, seed);
        let f = CharExpansion::new(&a2, [(w[0].clone(), c1), (lam, c2)]).unwrap();
        let g = CharExpansion::new(&a2, [(w[1].clone(), c2)]).unwrap();
        let band = 2 * f.bandwidth2(&a2).max(g.bandwidth2(&a2));
        let q = TorusQuadrature::for_band2(2, band).unwrap();
        let fg = inner_product(&a2, &q, &f, &g).unwrap();
        let gf = inner_product(&a2, &q, &g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-10 * (1.0 + fg.norm()));
    }

    #[test]
    fn monomial_expansion_leading_coefficient(name in group_names(), seed in 0u64..400) {
        let r = rs(name);
        let lam = random_dominant(&r, seed);
        let e: CharExpansion<f64> = monomial_in_char_basis(&r, &lam).unwrap();
        prop_assert_eq!(e.coefficient(&lam), 1.0);
        // every highest weight in the expansion is dominated by λ
        for mu in e.terms().keys() {
            prop_assert!(r.dominance_leq(mu, &lam));
        }
    }

    #[test]
    fn h_recurrence_matches_determinant(u in 0u32..=40, x in -2.0f64..2.0) {
        let a = h_polynomial(u).unwrap().eval_exact(x);
        let b = h_via_determinant(u, x).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn h_parity_identity(u in 0u32..=40, x in -2.0f64..2.0) {
        let h = h_polynomial(u).unwrap();
        let sign = if u % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((h.eval_exact(-x) - sign * h.eval_exact(x)).abs() < 1e-9);
    }

    #[test]
    fn ks_distance_bounds(xs in prop::collection::vec(-6.0f64..6.0, 2..200)) {
        let d = ks_distance(&xs).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn normal_cdf_monotone(a in -8.0f64..8.0, b in -8.0f64..8.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(normal_cdf(lo) <= normal_cdf(hi) + 1e-15);
    }

    #[test]
    fn bernoulli_odd_vanish_even_alternate(j in 1u32..=49) {
        let odd = bernoulli(2 * j + 1).unwrap();
        prop_assert!(odd.is_zero());
        // sign of B_{2j} alternates: (−1)^{j+1} B_{2j} > 0
        let even = bernoulli(2 * j).unwrap();
        prop_assert_eq!(even.is_positive(), j % 2 == 1);
    }

    #[test]
    fn siegel_positive(n in 1u32..=3, dk in 0u32..20, level in 3u64..500) {
        let k = n + 2 + dk;
        let v = siegel_leading_term(n, k, level).unwrap();
        prop_assert!(v.is_positive());
    }

    #[test]
    fn g2_term_linear_in_index(k in 2u32..400, num in 1i64..50, den in 1i64..50) {
        let ratio = BigRational::new(num.into(), den.into());
        let unit = BigRational::from_integer(1.into());
        let a = g2_leading_term(k, &ratio).unwrap();
        let b = g2_leading_term(k, &unit).unwrap() * &ratio;
        prop_assert_eq!(a, b);
    }
}

/// Small deterministic pseudo-random dominant weight from a seed.
fn random_dominant(r: &RootSystem, seed: u64) -> Weight {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let coeffs: Vec<i64> = (0..r.rank())
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((s >> 33) % 3) as i64
        })
        .collect();
    let mut lam = Weight::zero(r.rank());
    for (c, w) in coeffs.iter().zip(r.fundamental_weights()) {
        lam = lam.add(&w.scale(*c));
    }
    lam
}
