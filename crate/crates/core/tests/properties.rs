mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use ptolemy::eliminate::{gcd, resultant, MultiPoly};
use ptolemy::farey_dehn::{farey_walk, intersection_number, Letter, Slope};
use ptolemy::nz_core::snf::{solve_integer, to_big};
use ptolemy::nz_core::{check_nz_properties, parse_nz_fixture, smith_normal_form, NzSystem};
use ptolemy::triangulation::parse_gluing_table;

fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum())
                .collect()
        })
        .collect()
}

fn slope_strategy() -> impl Strategy<Value = Slope> {
    (-60i64..=60, 0i64..=60).prop_filter_map("p/q", |(p, q)| Slope::new(p, q).ok())
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..4, nvars), -5i64..=5), 0..6)
        .prop_map(move |ts| MultiPoly::from_terms(nvars, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangulation_text_round_trip(seed in 0u64..10_000, count in 0usize..6) {
        let t = random_relabelling(&whitehead(), &mut rng(seed), count);
        let back = parse_gluing_table(&t.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), t.to_text());
        prop_assert_eq!(back.gluings(), t.gluings());
        prop_assert_eq!(back.curves(), t.curves());
    }

    #[test]
    fn relabelling_keeps_nz_properties(seed in 0u64..10_000, count in 1usize..6) {
        let t = random_relabelling(&whitehead(), &mut rng(seed), count);
        let s = NzSystem::from_triangulation(&t).unwrap();
        let report = check_nz_properties(&s);
        prop_assert!(report.all_passed(), "{:?}", report);
        let back = parse_nz_fixture(&s.to_text()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn smith_normal_form_is_diagonal(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..5)) {
        let a = to_big(&rows);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&mul(&mul(&snf.u, &a), &snf.v), &snf.d);
        for (i, r) in snf.d.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        let diag = snf.diagonal();
        for i in 1..snf.rank {
            prop_assert!((&diag[i] % &diag[i - 1]).is_zero());
        }
        prop_assert!(diag.iter().skip(snf.rank).all(|x| x.is_zero()));
    }

    #[test]
    fn integer_solve_recovers_consistent_systems(
        rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 5), 1..5),
        x in prop::collection::vec(-4i64..=4, 5),
    ) {
        let c: Vec<i64> = rows.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let (sol, kernel) = solve_integer(&rows, &c).expect("integer solution exists");
        let a = to_big(&rows);
        let col: Vec<Vec<BigInt>> = sol.iter().map(|v| vec![v.clone()]).collect();
        let ax: Vec<BigInt> = mul(&a, &col).into_iter().map(|r| r[0].clone()).collect();
        prop_assert_eq!(ax, c.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        for k in kernel {
            let kc: Vec<Vec<BigInt>> = k.iter().map(|v| vec![v.clone()]).collect();
            prop_assert!(mul(&a, &kc).iter().all(|r| r[0].is_zero()));
        }
    }

    #[test]
    fn farey_walk_invariants(r in slope_strategy()) {
        let tri = [slope("3/1"), slope("2/1"), slope("1/0")];
        prop_assume!(!tri.contains(&r));
        let w = farey_walk(tri, r).unwrap();
        prop_assert_eq!(w.last().h, r);
        prop_assert_eq!(w.word.len(), w.steps.len() - 1);
        for t in w.triangles() {
            prop_assert_eq!(intersection_number(t[0], t[1]), 1);
            prop_assert_eq!(intersection_number(t[1], t[2]), 1);
            prop_assert_eq!(intersection_number(t[0], t[2]), 1);
        }
        let iota: Vec<u64> = w.steps.iter().map(|s| intersection_number(s.o, r)).collect();
        prop_assert!(iota.windows(2).all(|p| p[1] < p[0]), "{:?}", iota);
        for (k, letter) in w.word.iter().enumerate() {
            let (a, b) = (w.steps[k], w.steps[k + 1]);
            match letter {
                Letter::L => prop_assert!(b.p == a.p && b.o == a.s && b.s == a.h),
                Letter::R => prop_assert!(b.s == a.s && b.o == a.p && b.p == a.h),
            }
        }
    }

    #[test]
    fn slope_text_round_trip(s in slope_strategy()) {
        prop_assert_eq!(s.to_string().parse::<Slope>().unwrap(), s);
        prop_assert_eq!(intersection_number(s, s), 0);
    }

    #[test]
    fn intersection_number_symmetric(a in slope_strategy(), b in slope_strategy()) {
        prop_assert_eq!(intersection_number(a, b), intersection_number(b, a));
        let d = (a.p() * b.q() - a.q() * b.p()).unsigned_abs();
        prop_assert_eq!(intersection_number(a, b), d);
    }

    #[test]
    fn poly_text_round_trip(p in poly_strategy(3)) {
        prop_assert_eq!(MultiPoly::parse(&p.to_text(), 3).unwrap(), p);
    }

    #[test]
    fn gcd_contains_common_factor(f in poly_strategy(2), g in poly_strategy(2), h in poly_strategy(2)) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let d = gcd(&f.mul(&g), &f.mul(&h));
        prop_assert!(f.divides(&d), "f = {}, gcd = {}", f, d);
        prop_assert!(d.divides(&f.mul(&g)) && d.divides(&f.mul(&h)));
    }

    #[test]
    fn resultant_vanishes_on_common_factor(f in poly_strategy(2), g in poly_strategy(2), h in poly_strategy(2)) {
        prop_assume!(f.depends_on(0) && !g.is_zero() && !h.is_zero());
        let r = resultant(&f.mul(&g), &f.mul(&h), 0).unwrap();
        prop_assert!(r.is_zero());
    }
}
