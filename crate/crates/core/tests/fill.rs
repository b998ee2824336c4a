mod common;

use common::criteria::{check_eliminant, check_odd_twist};
use common::oracle::{PUBLISHED_4_1, PUBLISHED_5_2};
use common::*;
use ptolemy::farey_dehn::{check_fillable, fill, FillError, WalkError};
use ptolemy::nz_core::check_nz_properties;
use ptolemy::triangulation::{enumerate_closed_curves, CurveKind, PeripheralCurve};

#[test]
fn whitehead_cusp_one_is_fillable() {
    let report = check_fillable(&whitehead(), 1);
    assert!(report.all_passed(), "{report}");
    let hex = report.hexagon.unwrap();
    assert_eq!(hex.tets, [3, 4]);
    assert_eq!(hex.slopes.unwrap(), [slope("2/1"), slope("1/0"), slope("3/1")]);
}

#[test]
fn one_cusp_manifold_is_rejected() {
    let report = check_fillable(&figure8(), 0);
    assert!(report.failures().contains(&"cusps"));
    assert!(matches!(fill(&figure8(), 0, slope("1/1")), Err(FillError::NotFillable(_))));
}

#[test]
fn curve_through_hexagon_is_rejected() {
    let t = whitehead();
    let crossing = enumerate_closed_curves(&t, 0, 8, &[])
        .into_iter()
        .find(|c| c.iter().any(|s| s.tet == 3 || s.tet == 4))
        .expect("a cusp-0 curve meets tetrahedron 3 or 4");
    let curves: Vec<PeripheralCurve> = t
        .curves()
        .iter()
        .cloned()
        .map(|c| {
            if c.cusp == 0 && c.kind == CurveKind::Meridian {
                PeripheralCurve {
                    steps: crossing.clone(),
                    ..c
                }
            } else {
                c
            }
        })
        .collect();
    let t2 = t.with_curves(curves).unwrap();
    let report = check_fillable(&t2, 1);
    assert!(report.failures().contains(&"curves_avoid"), "{report}");
}

#[test]
fn boundary_slopes_are_extra_exceptional() {
    for r in ["1/0", "2/1", "3/1"] {
        let err = fill(&whitehead(), 1, slope(r)).unwrap_err();
        assert!(matches!(err, FillError::Walk(WalkError::ExtraExceptional(s)) if s == slope(r)), "{r}: {err}");
    }
}

#[test]
fn figure_eight_filling_frozen() {
    let f = fill_whitehead("-1/1");
    let s = &f.filled.nz;
    let rows: Vec<Vec<i64>> = s.rows().map(|r| r.coeffs.clone()).collect();
    assert_eq!(
        rows,
        vec![
            vec![1, 0, -1, -1, 0, 0, 0, 2, 1, 0],
            vec![0, 1, 1, 0, 0, 1, 1, 0, 0, 0],
            vec![-2, -1, 1, 2, 2, 1, -2, -2, -1, -2],
            vec![1, 0, -1, -1, -2, -2, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 2],
            vec![-1, -1, 0, -1, 0, 0, 0, 0, 0, 0],
            vec![-1, -2, 1, -1, 0, 0, 0, 0, 0, 0],
        ]
    );
    assert_eq!(s.c_vector(), vec![1, 2, -4, -1, 2, -1, -1]);
    assert_eq!(f.filled.b.0, vec![1, 1, 1, -1, 1, 0, 0, 0, 0, 1]);
    assert_eq!(f.filled.tet_names, vec!["Δ0", "Δ1", "Δ2", "Δ_{3/1}", "Δ_{2/1}"]);
    assert_eq!(f.walk.word_string(), "LL");
    assert!(check_nz_properties(s).all_passed());
}

#[test]
fn trefoil_filling_folds_immediately() {
    let f = fill_whitehead("1/1");
    assert_eq!(f.walk.n(), 0);
    assert_eq!(f.filled.nz.n, 3);
    assert!(f.filled.nz.dropped.len() == 1);
}

#[test]
fn filled_systems_satisfy_nz_properties() {
    for r in ["1/1", "1/2", "-1/1", "0/1", "5/2", "-7/3", "8/5"] {
        let f = fill_whitehead(r);
        let report = f.check_filled();
        assert!(report.all_passed(), "{r}: {report:?}");
        assert!(f.filled.nz.satisfied_by(&f.filled.b), "{r}");
        assert_eq!(f.filled.nz.n, f.filled_triangulation.n());
        assert_eq!(f.filled.nz.n, 3 + f.walk.n());
    }
}

#[test]
fn odd_twist_knots_small() {
    for n in 2..=6 {
        check_odd_twist(n).unwrap();
    }
}

#[test]
fn figure_eight_eliminant_divides() {
    check_eliminant("-1/1", PUBLISHED_4_1).unwrap();
}

#[test]
fn three_twist_eliminant_divides() {
    check_eliminant("1/2", PUBLISHED_5_2).unwrap();
}
