//! One check per acceptance criterion, each returning a short summary.

use super::oracle::{gluing_eliminant, published_to_ours, PUBLISHED_4_1, PUBLISHED_5_2};
use super::*;
use num_complex::Complex64;
use ptolemy::eliminate::{eliminate_gammas, gcd, normalize, sign_norm, to_ell_m, EliminationOptions, MultiPoly, PolySystem};
use ptolemy::farey_dehn::{farey_walk, fill, intersection_number, lst_ptolemy, Letter, Slope};
use rand::Rng;
use ptolemy::numeric_verify::{
    check_change_of_vars, continue_holonomy, solve_complete, solve_ptolemy_numeric,
};
use ptolemy::nz_core::{
    adjust_sign_vector_zero_at, check_nz_properties, solve_system, NzSystem, SignVector,
};
use ptolemy::triangulation::{curve_incidence, enumerate_closed_curves, CornerStep, CurveKind, PeripheralCurve};

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rotate_to_min(steps: &[CornerStep]) -> Vec<CornerStep> {
    let i = (0..steps.len()).min_by_key(|&i| steps[i]).unwrap();
    let mut v = steps[i..].to_vec();
    v.extend_from_slice(&steps[..i]);
    v
}

/// Rows of `s` matched one-to-one against the published matrix and C.
pub fn matches_published_whitehead(s: &NzSystem) -> Result<(), String> {
    let rows: Vec<(String, Vec<i64>, i64)> = s.rows().map(|r| (r.label.clone(), r.coeffs.clone(), r.c)).collect();
    ensure(rows.len() == WHITEHEAD_NZ.len(), || format!("{} rows", rows.len()))?;
    let mut used = vec![false; rows.len()];
    for (i, (label, coeffs)) in WHITEHEAD_NZ.iter().enumerate() {
        let found = rows
            .iter()
            .enumerate()
            .position(|(k, r)| !used[k] && r.0 == *label && r.1 == coeffs.to_vec() && r.2 == WHITEHEAD_C[i]);
        match found {
            Some(k) => used[k] = true,
            None => return Err(format!("published row {label} not reproduced")),
        }
    }
    Ok(())
}

pub fn criterion_1() -> Outcome {
    let t = whitehead();
    let s = NzSystem::from_triangulation(&t).map_err(|e| e.to_string())?;
    matches_published_whitehead(&s)?;

    // Every closed curve on cusp 0 avoiding tetrahedra 3 and 4, up to 12 steps.
    let curves = enumerate_closed_curves(&t, 0, 12, &[3, 4]);
    let row_of = |steps: &Vec<CornerStep>, kind| {
        let c = PeripheralCurve {
            cusp: 0,
            kind,
            steps: steps.clone(),
        };
        curve_incidence(&t, &c).map(|inc| (inc.nz_row(), -inc.c_total()))
    };
    for (kind, idx) in [(CurveKind::Meridian, 5), (CurveKind::Longitude, 6)] {
        let target = (WHITEHEAD_NZ[idx].1.to_vec(), WHITEHEAD_C[idx]);
        let hits: Vec<Vec<CornerStep>> = curves
            .iter()
            .filter(|c| row_of(c, kind).ok() == Some(target.clone()))
            .map(|c| rotate_to_min(c))
            .collect();
        ensure(!hits.is_empty(), || format!("no curve reproduces {}", WHITEHEAD_NZ[idx].0))?;
        let fixture = rotate_to_min(&t.curve(0, kind).unwrap().steps);
        ensure(hits.contains(&fixture), || {
            format!("fixture {} is not among the {} search hits", WHITEHEAD_NZ[idx].0, hits.len())
        })?;
    }
    Ok(format!("9 rows and C reproduced; cusp-0 curves found among {} searched", curves.len()))
}

pub fn criterion_2_3() -> (Outcome, Outcome) {
    let mut systems: Vec<(String, NzSystem)> = Vec::new();
    let t = whitehead();
    systems.push(("whitehead".into(), NzSystem::from_triangulation(&t).unwrap()));
    let mut fill_errors = Vec::new();
    let slopes = slopes_up_to(10);
    let mut filled = 0;
    for r in &slopes {
        match fill(&t, 1, *r) {
            Ok(f) => {
                filled += 1;
                systems.push((format!("fill {r}"), f.filled.nz.clone()));
                if !f.filled.nz.satisfied_by(&f.filled.b) {
                    fill_errors.push(format!("B(r) fails for {r}"));
                }
            }
            Err(e) => {
                if !["1/0", "2/1", "3/1"].contains(&r.to_string().as_str()) {
                    fill_errors.push(format!("{r}: {e}"));
                }
            }
        }
    }
    let mut g = rng(2);
    for i in 0..100 {
        let tr = random_relabelling(&t, &mut g, 3);
        systems.push((format!("relabelling {i}"), NzSystem::from_triangulation(&tr).unwrap()));
    }
    let sympl_fail: Vec<String> = systems
        .iter()
        .filter(|(_, s)| !check_nz_properties(s).all_passed())
        .map(|(n, _)| n.clone())
        .collect();
    let c2 = if sympl_fail.is_empty() && fill_errors.is_empty() {
        Ok(format!("{} systems ({} fillings, 100 relabellings) pass all five clauses", systems.len(), filled))
    } else {
        Err(format!("failures: {:?} {:?}", sympl_fail, fill_errors))
    };

    let sign_fail: Vec<String> = systems
        .iter()
        .filter(|(_, s)| solve_system(s).map(|b| !s.satisfied_by(&b)).unwrap_or(true))
        .map(|(n, _)| n.clone())
        .collect();
    let s = &systems[0].1;
    let published = SignVector(WHITEHEAD_B.to_vec());
    let c3 = (|| {
        ensure(sign_fail.is_empty(), || format!("NZ♭·B ≠ C♭ on {sign_fail:?}"))?;
        ensure(s.satisfied_by(&published), || "published B does not solve".into())?;
        let adj = adjust_sign_vector_zero_at(&published, s, 3, 4).map_err(|e| e.to_string())?;
        ensure(adj == published, || format!("adjustment moved B to {adj}"))?;
        Ok(format!("{} systems solved exactly; published B verified and fixed", systems.len()))
    })();
    (c2, c3)
}

/// Compares the equations of `p` carrying `label` with printed LaTeX.
fn equation_matches(p: &ptolemy::ptolemy_gen::PtolemySystem, label: &str, latex: &str) -> Result<(), String> {
    let eq = p
        .equations
        .iter()
        .find(|e| e.label.as_deref() == Some(label) || (e.label.is_none() && e.tet.map(|j| format!("Δ{j}")) == Some(label.to_string())))
        .ok_or_else(|| format!("no equation {label}"))?;
    let got = eq.named(&p.gamma_labels, &|s| s.to_string());
    let want = latex_terms(latex);
    ensure(got == want, || format!("{label}: got {got:?}, printed {want:?}"))
}

fn identified_pair(p: &ptolemy::ptolemy_gen::PtolemySystem) -> Vec<(String, String)> {
    p.identifications
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (p.gamma_labels[a].clone(), p.gamma_labels[b].clone());
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect()
}

/// Layered equations and identification of the odd twist knot with `2N+1` crossings.
pub fn check_odd_twist(n: i64) -> Result<(), String> {
    let f = fill(&whitehead(), 1, Slope::new(1, n).unwrap()).map_err(|e| e.to_string())?;
    let lst = lst_ptolemy(&f.walk);
    let (eqs, (a, b)) = odd_twist_expected(n);
    ensure(lst.equations.len() == eqs.len(), || {
        format!("N = {n}: {} layered equations, expected {}", lst.equations.len(), eqs.len())
    })?;
    for (label, latex) in &eqs {
        equation_matches(&lst, label, latex)?;
    }
    let pair = if a <= b { (a, b) } else { (b, a) };
    ensure(identified_pair(&lst) == vec![pair.clone()], || {
        format!("N = {n}: identification {:?}, expected {pair:?}", identified_pair(&lst))
    })
}

pub fn criterion_4() -> Outcome {
    let f = fill_whitehead("-1/1");
    let outside = f.outside_equations().map_err(|e| e.to_string())?;
    ensure(outside.equations.len() == 3, || "three outside equations expected".into())?;
    for (label, latex) in OUTSIDE_EQUATIONS {
        equation_matches(&outside, label, latex)?;
    }
    let lst = lst_ptolemy(&f.walk);
    equation_matches(&lst, "Δ_{3/1}", DELTA_3_1)?;
    equation_matches(&lst, "Δ_{2/1}", DELTA_2_1)?;
    ensure(
        identified_pair(&lst) == vec![("0/1".to_string(), "1/0".to_string())],
        || "4_1 identification".into(),
    )?;
    for n in 2..=12 {
        check_odd_twist(n)?;
    }
    Ok("outside set, 4_1, 5_2, 7_2, 9_2 and N = 4..12 equal term for term".into())
}

pub fn criterion_5() -> Outcome {
    let t = whitehead();
    let mut count = 0;
    for r in slopes_up_to(10) {
        if count == 50 {
            break;
        }
        let Ok(f) = fill(&t, 1, r) else { continue };
        let a = f.combined_ptolemy().map_err(|e| e.to_string())?.structural_form();
        let b = f.filled_ptolemy().map_err(|e| e.to_string())?.structural_form();
        ensure(a == b, || format!("{r}: layered and assembled equations differ"))?;
        count += 1;
    }
    ensure(count == 50, || format!("only {count} slopes"))?;
    Ok("50 slopes: outside ∪ layered equals assembled system".into())
}

fn lm_points(r: &str) -> Result<(ptolemy::farey_dehn::Filling, Vec<(Complex64, Complex64)>), String> {
    let f = fill_whitehead(r);
    let sol = solve_complete(&f.filled.nz).map_err(|e| e.to_string())?;
    let targets: Vec<Complex64> = (1..=20)
        .map(|k| Complex64::new(0.03 * k as f64, 0.02 * k as f64))
        .collect();
    let pts = continue_holonomy(&f.filled.nz, &sol.shapes, &targets).map_err(|e| e.to_string())?;
    Ok((f, pts.into_iter().map(|p| (p.L, p.M)).collect()))
}

/// Eliminant of the filled Ptolemy system, in `L, M`.
pub fn eliminant(f: &ptolemy::farey_dehn::Filling) -> MultiPoly {
    let p = f.filled_ptolemy().unwrap();
    eliminate_gammas(&PolySystem::from_ptolemy(&p), &EliminationOptions::default())
        .unwrap()
        .normalized
}

/// Checks one knot: oracle geometric factor divides, published polynomial
/// divides, and the eliminant vanishes on continued points.
pub fn check_eliminant(r: &str, published: &str) -> Result<String, String> {
    let (f, pts) = lm_points(r)?;
    let e = eliminant(&f);
    let vanish = pts.iter().map(|&(l, m)| e.relative_value(&[l, m])).fold(0.0, f64::max);
    ensure(vanish < 1e-8, || format!("{r}: eliminant relative value {vanish:.2e}"))?;

    let e_lm = to_ell_m(&sign_norm(&e));
    ensure(e_lm.halved, || "sign norm has odd exponents".into())?;
    let g = gluing_eliminant(&f.filled.nz);
    let common = normalize(&gcd(&g, &e_lm.poly));
    let rest = g.div_exact(&common).ok_or("gcd does not divide")?;
    let ell_m: Vec<[Complex64; 2]> = pts.iter().map(|&(l, m)| [l * l, m * m]).collect();
    // The factor of the oracle vanishing on the continued points is geometric.
    let on_common = ell_m.iter().map(|p| common.relative_value(p)).fold(0.0, f64::max);
    let on_rest = ell_m.iter().map(|p| rest.relative_value(p)).fold(f64::INFINITY, f64::min);
    ensure(!common.is_constant() && on_common < 1e-8, || {
        format!("{r}: common factor does not vanish ({on_common:.2e})")
    })?;
    ensure(rest.is_constant() || on_rest > 1e-6, || {
        format!("{r}: geometric points also on the cofactor ({on_rest:.2e})")
    })?;
    ensure(common.divides(&e_lm.poly), || "geometric factor does not divide".into())?;

    let a = published_to_ours(&MultiPoly::parse(published, 2).unwrap());
    ensure(a.divides(&e), || format!("{r}: published polynomial does not divide"))?;
    Ok(format!("max |E| {vanish:.1e}"))
}

pub fn criterion_6() -> Outcome {
    let a = check_eliminant("-1/1", PUBLISHED_4_1)?;
    let b = check_eliminant("1/2", PUBLISHED_5_2)?;
    Ok(format!("4_1 ({a}), 5_2 ({b}): oracle factor and published polynomial divide"))
}

/// Shapes of the complete structure against shapes rebuilt from a numeric
/// Ptolemy solution at `L = M = 1`.
pub fn check_closure(r: &str) -> Result<f64, String> {
    let f = fill_whitehead(r);
    let s = &f.filled.nz;
    let sol = solve_complete(s).map_err(|e| e.to_string())?;
    ensure(sol.geometric, || format!("{r}: not geometric"))?;
    let p = f.filled_ptolemy().map_err(|e| e.to_string())?;
    let one = Complex64::new(1.0, 0.0);
    let found = solve_ptolemy_numeric(&p, one, one);
    let best = found
        .solutions
        .iter()
        .filter_map(|g| check_change_of_vars(&sol.shapes, s, &f.filled.b, &g.gamma, one, one).ok())
        .filter(|rep| rep.degenerate.is_empty())
        .map(|rep| rep.max_deviation)
        .fold(f64::INFINITY, f64::min);
    ensure(best < 1e-9, || format!("{r}: best deviation {best:.2e}"))?;
    Ok(best)
}

pub fn criterion_7() -> Outcome {
    let a = check_closure("-1/1")?;
    let b = check_closure("1/2")?;
    Ok(format!("deviation 4_1 {a:.1e}, 5_2 {b:.1e}"))
}

/// First slope from `tri` whose word is `word`.
pub fn slope_with_word(tri: [Slope; 3], word: &str) -> Option<Slope> {
    slopes_up_to(12)
        .into_iter()
        .find(|&r| farey_walk(tri, r).map(|w| w.word_string() == word).unwrap_or(false))
}

pub fn random_walk_decreases(walks: usize, seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let tri = [slope("0/1"), slope("1/0"), slope("1/1")];
    let mut done = 0;
    while done < walks {
        let p: i64 = g.gen_range(-400..=400);
        let q: i64 = g.gen_range(1..=400);
        let Ok(r) = Slope::new(p, q) else { continue };
        let Ok(w) = farey_walk(tri, r) else { continue };
        let iota: Vec<u64> = w.steps.iter().map(|s| intersection_number(s.o, r)).collect();
        ensure(iota.windows(2).all(|x| x[1] < x[0]), || format!("{r}: ι not decreasing {iota:?}"))?;
        done += 1;
    }
    Ok(())
}

pub fn criterion_8() -> Outcome {
    let tri = [slope("3/1"), slope("2/1"), slope("1/0")];
    let w = farey_walk(tri, slope("-1/1")).map_err(|e| e.to_string())?;
    let os: Vec<String> = w.steps[..w.n()].iter().map(|s| s.o.to_string()).collect();
    ensure(os == ["3/1", "2/1"], || format!("tetrahedra {os:?}"))?;
    ensure(w.word.first() == Some(&Letter::L), || "step 1 is not L".into())?;
    ensure(w.fold_edge() == slope("1/1"), || "fold edge".into())?;
    let (p, s) = w.identified();
    ensure(
        [p, s] == [slope("1/0"), slope("0/1")] || [p, s] == [slope("0/1"), slope("1/0")],
        || "identification".into(),
    )?;
    let r = slope_with_word(tri, "RRL").ok_or("no RRL slope")?;
    let w = farey_walk(tri, r).unwrap();
    ensure(w.steps[0].s == w.steps[1].s && w.steps[1].s == w.steps[2].s, || format!("{r}: s changes"))?;
    random_walk_decreases(1000, 8)?;
    Ok(format!("4_1 walk as printed; RRL at {r} keeps s; 1000 random walks decrease"))
}
