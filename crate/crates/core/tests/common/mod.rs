#![allow(dead_code)]

pub mod criteria;
pub mod oracle;

use num_complex::Complex64;
use ptolemy::farey_dehn::{fill, Filling, Slope};
use ptolemy::ptolemy_gen::NamedTerm;
use ptolemy::triangulation::{parse_gluing_table, Perm, Triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn whitehead() -> Triangulation {
    parse_gluing_table(&fixture_text("whitehead.tri")).unwrap()
}

pub fn figure8() -> Triangulation {
    parse_gluing_table(&fixture_text("figure8.tri")).unwrap()
}

pub fn slope(s: &str) -> Slope {
    s.parse().unwrap()
}

/// Whitehead filling along `r`, filling cusp 1.
pub fn fill_whitehead(r: &str) -> Filling {
    fill(&whitehead(), 1, slope(r)).unwrap()
}

/// Published Whitehead NZ matrix, rows as printed.
pub const WHITEHEAD_NZ: [(&str, [i64; 10]); 9] = [
    ("0(23)", [1, 0, -1, -1, -2, -2, 0, 0, 0, 0]),
    ("3/1", [0, 1, 1, 0, 0, 1, 1, 0, 1, 0]),
    ("2/1", [1, 0, -1, -1, 0, 0, 0, 1, 0, 1]),
    ("1/0", [-2, -1, 1, 2, 2, 1, -1, -1, -1, -1]),
    ("e", [0; 10]),
    ("m0", [-1, -1, 0, -1, 0, 0, 0, 0, 0, 0]),
    ("l0", [-1, -2, 1, -1, 0, 0, 0, 0, 0, 0]),
    ("m1", [0, 0, 0, 0, 0, 0, 1, 0, -1, 0]),
    ("l1", [0, 0, 0, 0, 0, 0, 0, 1, 0, -1]),
];

pub const WHITEHEAD_C: [i64; 9] = [-1, 2, 1, -2, 0, -1, -1, 0, 0];

pub const WHITEHEAD_B: [i64; 10] = [1, 1, 1, -1, 1, 0, 0, 0, 0, 0];

/// Published equations, LaTeX source as printed.
pub const OUTSIDE_EQUATIONS: [(&str, &str); 3] = [
    (
        "Δ0",
        r"-\ell^{1/2}m^{-1/2}\gamma_{0(23)}\gamma_{2/1} -\ell^{1/2}m^{-1}\gamma_{3/1}\gamma_{1/0} - \gamma_{1/0}^2",
    ),
    (
        "Δ1",
        r"-m^{1/2}\gamma_{3/1}\gamma_{1/0} - \ell^{1/2}m^{-1/2}\gamma_{1/0}^2 - \gamma_{0(23)}\gamma_{2/1}",
    ),
    ("Δ2", r"\gamma_{1/0}^2 - \gamma_{1/0}\gamma_{3/1} - \gamma_{0(23)}^2"),
];

pub const DELTA_3_1: &str = r"\gamma_{3/1}\gamma_{1/1} +\gamma_{2/1}^2 - \gamma_{1/0}^2";
pub const DELTA_2_1: &str = r"-\gamma_{2/1}\gamma_{0/1} + \gamma_{1/1}^2 - \gamma_{1/0}^2";
pub const DELTA_1_0: &str = r"\gamma_{1/0}\gamma_{1/2} + \gamma_{1/1}^2 - \gamma_{0/1}^2";
pub const DELTA_1_1: &str = r"-\gamma_{1/1}\gamma_{1/3} + \gamma_{1/2}^2 - \gamma_{0/1}^2";

/// The general twist-knot equation with `k` substituted.
pub fn twist_equation(k: i64) -> String {
    format!(
        r"-\gamma_{{1/{}}}\gamma_{{1/{}}} + \gamma_{{1/{}}}^2 - \gamma_{{0/1}}^2",
        k,
        k + 2,
        k + 1
    )
}

/// Expected layered-solid-torus equations (label, LaTeX) and the identified
/// pair for the twist knot with `2N + 1` crossings, `N ≥ 2`.
///
/// Tetrahedra `Δ_{1/k}` for `2 ≤ k ≤ N − 3` follow the general formula;
/// the final identification is `γ_{0/1} = γ_{1/(N−1)}`.
pub fn odd_twist_expected(n: i64) -> (Vec<(String, String)>, (String, String)) {
    let mut eqs = vec![
        ("Δ_{3/1}".to_string(), DELTA_3_1.to_string()),
        ("Δ_{2/1}".to_string(), DELTA_2_1.to_string()),
    ];
    match n {
        2 => return (eqs, ("1/1".into(), "0/1".into())),
        3 => {
            eqs.push(("Δ_{1/0}".into(), DELTA_1_0.into()));
            return (eqs, ("1/2".into(), "0/1".into()));
        }
        _ => {}
    }
    eqs.push(("Δ_{1/0}".into(), DELTA_1_0.into()));
    eqs.push(("Δ_{1/1}".into(), DELTA_1_1.into()));
    for k in 2..=n - 3 {
        eqs.push((format!("Δ_{{1/{k}}}"), twist_equation(k)));
    }
    (eqs, (format!("1/{}", n - 1), "0/1".into()))
}

fn split_terms(src: &str) -> Vec<(i8, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1i8;
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '{' => {
                depth += 1;
                cur.push(ch);
            }
            '}' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    out
}

/// Exponent after `^`, in halves: `{1/2}` → 1, `{-1}` → −2, `2` → 4.
fn half_exponent(rest: &str) -> (i64, &str) {
    let Some(r) = rest.strip_prefix('^') else {
        return (2, rest);
    };
    let (body, tail) = if let Some(r) = r.strip_prefix('{') {
        let end = r.find('}').unwrap();
        (&r[..end], &r[end + 1..])
    } else {
        (&r[..1], &r[1..])
    };
    let v = match body.split_once('/') {
        Some((a, "2")) => a.parse::<i64>().unwrap(),
        Some(_) => panic!("unexpected exponent {body}"),
        None => 2 * body.parse::<i64>().unwrap(),
    };
    (v, tail)
}

/// One printed equation as sorted `(sign, L exponent, M exponent, γ, γ)` terms.
pub fn latex_terms(src: &str) -> Vec<NamedTerm> {
    let mut out = Vec::new();
    for (sign, term) in split_terms(src) {
        let (mut l, mut m) = (0i64, 0i64);
        let mut gammas: Vec<String> = Vec::new();
        let mut rest = term.as_str();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix(r"\ell") {
                let (e, t) = half_exponent(r);
                l += e;
                rest = t;
            } else if let Some(r) = rest.strip_prefix('m') {
                let (e, t) = half_exponent(r);
                m += e;
                rest = t;
            } else if let Some(r) = rest.strip_prefix(r"\gamma_{") {
                let end = r.find('}').unwrap();
                let label = r[..end].to_string();
                let (e, t) = half_exponent(&r[end + 1..]);
                for _ in 0..e / 2 {
                    gammas.push(label.clone());
                }
                rest = t;
            } else {
                panic!("cannot read `{rest}` in `{term}`");
            }
        }
        assert_eq!(gammas.len(), 2, "quadratic term expected in `{term}`");
        gammas.sort();
        out.push((sign, l, m, gammas[0].clone(), gammas[1].clone()));
    }
    out.sort();
    out
}

/// Every slope `p/q` with `|p|, |q| ≤ bound`, each once.
pub fn slopes_up_to(bound: i64) -> Vec<Slope> {
    let mut out: Vec<Slope> = Vec::new();
    for p in -bound..=bound {
        for q in 0..=bound {
            if let Ok(s) = Slope::new(p, q) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Relabels `count` random tetrahedra by random even permutations.
pub fn random_relabelling(t: &Triangulation, rng: &mut ChaCha8Rng, count: usize) -> Triangulation {
    let evens = Perm::even_perms();
    let mut out = t.clone();
    for _ in 0..count {
        let tet = rng.gen_range(0..t.n());
        let p = evens[rng.gen_range(0..evens.len())];
        out = out.relabel_tet(tet, p).unwrap();
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Li₂(z)` for `|z| ≤ 1`, `Re z ≤ 1/2`, via the Bernoulli series in `−log(1 − z)`.
fn li2_small(z: Complex64) -> Complex64 {
    const TERMS: usize = 40;
    // b[n] = B_n / (n + 1)!.
    let mut bern = vec![0.0f64; TERMS];
    bern[0] = 1.0;
    for m in 1..TERMS {
        let mut s = 0.0;
        let mut binom = 1.0;
        for (k, bk) in bern.iter().enumerate().take(m) {
            s += binom * bk;
            binom *= (m + 1 - k) as f64 / (k + 1) as f64;
        }
        bern[m] = -s / (m + 1) as f64;
    }
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let mut fact = 1.0;
    let mut p = u;
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, b) in bern.iter().enumerate() {
        fact *= (n + 1) as f64;
        sum += p * (b / fact);
        p *= u;
    }
    sum
}

/// Bloch–Wigner dilogarithm `Im Li₂(z) + arg(1 − z) log|z|`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let d = |w: Complex64| li2_small(w).im + (one - w).arg() * w.norm().ln();
    // D(z) = −D(1/z) = −D(1 − z) = D(1 − 1/z) = D(1/(1 − z)) = −D(z/(z − 1)).
    let images: [(Complex64, f64); 6] = [
        (z, 1.0),
        (one / z, -1.0),
        (one - z, -1.0),
        (one - one / z, 1.0),
        (one / (one - z), 1.0),
        (z / (z - one), -1.0),
    ];
    let (w, s) = images
        .into_iter()
        .find(|(w, _)| w.norm() <= 1.0 + 1e-12 && w.re <= 0.5 + 1e-12)
        .expect("one image lies in the unit disc left of 1/2");
    s * d(w)
}

pub fn volume(shapes: &[Complex64]) -> f64 {
    shapes.iter().map(|&z| bloch_wigner(z)).sum()
}

pub const VOLUME_4_1: f64 = 2.029883212819307;
pub const VOLUME_5_2: f64 = 2.828122088330783;
pub const VOLUME_WHITEHEAD: f64 = 3.663862376708876;
