//! Eliminant of the shape gluing equations, computed without Ptolemy variables.
//!
//! Variables are `ℓ, m, z_1, …, z_n`. Each kept edge row gives
//! `Π z^d (1 − z)^{−d'} = (−1)^C`, and the meridian and longitude rows give the
//! same product equal to `(−1)^C m` and `(−1)^C ℓ`. Shapes are eliminated by
//! resultants; factors `z` and `1 − z` are discarded as degenerate.

use num_bigint::BigInt;
use ptolemy::eliminate::{gcd, normalize, MultiPoly};
use ptolemy::nz_core::NzSystem;

fn one_minus(nv: usize, v: usize) -> MultiPoly {
    MultiPoly::one(nv).sub(&MultiPoly::var(nv, v))
}

fn gluing_poly(nv: usize, n: usize, coeffs: &[i64], c: i64, holonomy: Option<usize>) -> MultiPoly {
    let mut num = MultiPoly::one(nv);
    let mut den = MultiPoly::one(nv);
    for j in 0..n {
        let z = MultiPoly::var(nv, 2 + j);
        let w = one_minus(nv, 2 + j);
        let (d, dp) = (coeffs[2 * j], coeffs[2 * j + 1]);
        if d > 0 {
            num = num.mul(&z.pow(d as u32));
        } else if d < 0 {
            den = den.mul(&z.pow((-d) as u32));
        }
        if dp > 0 {
            den = den.mul(&w.pow(dp as u32));
        } else if dp < 0 {
            num = num.mul(&w.pow((-dp) as u32));
        }
    }
    let sign = if c.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut rhs = den.scale(&BigInt::from(sign));
    if let Some(h) = holonomy {
        rhs = rhs.mul(&MultiPoly::var(nv, h));
    }
    num.sub(&rhs)
}

fn strip_degenerate(p: MultiPoly, n: usize) -> MultiPoly {
    let nv = p.nvars();
    let mut mono = p.monomial_content();
    mono[0] = 0;
    mono[1] = 0;
    let mut p = p.div_monomial(&mono);
    for j in 0..n {
        let w = one_minus(nv, 2 + j);
        while p.depends_on(2 + j) {
            match p.div_exact(&w) {
                Some(q) => p = q,
                None => break,
            }
        }
    }
    normalize(&p)
}

/// Polynomial in `(ℓ, m)` (two variables) vanishing on the deformation
/// variety of a one-cusped system.
pub fn gluing_eliminant(s: &NzSystem) -> MultiPoly {
    let n = s.n;
    let nv = 2 + n;
    let mut polys = Vec::new();
    for (i, r) in s.edge_rows.iter().enumerate() {
        if !s.dropped.contains(&i) {
            polys.push(gluing_poly(nv, n, &r.coeffs, r.c, None));
        }
    }
    let m = s.meridian(0);
    polys.push(gluing_poly(nv, n, &m.coeffs, m.c, Some(1)));
    let l = s.longitude(0);
    polys.push(gluing_poly(nv, n, &l.coeffs, l.c, Some(0)));
    let mut polys: Vec<MultiPoly> = polys
        .into_iter()
        .map(|p| strip_degenerate(p, n))
        .filter(|p| !p.is_constant())
        .collect();

    for j in (0..n).rev() {
        let v = 2 + j;
        let Some(pi) = polys
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depends_on(v))
            .min_by_key(|(_, p)| (p.degree_in(v), p.len()))
            .map(|(i, _)| i)
        else {
            continue;
        };
        let pivot = polys.remove(pi);
        let mut next = Vec::with_capacity(polys.len());
        for g in polys {
            if !g.depends_on(v) {
                next.push(g);
                continue;
            }
            let mut r = ptolemy::eliminate::resultant(&pivot, &g, v).unwrap();
            if r.is_zero() {
                // Common factor: split it off and eliminate the cofactors.
                let h = gcd(&pivot, &g);
                let (a, b) = (pivot.div_exact(&h).unwrap(), g.div_exact(&h).unwrap());
                r = if a.depends_on(v) && b.depends_on(v) {
                    ptolemy::eliminate::resultant(&a, &b, v).unwrap()
                } else {
                    b
                };
            }
            next.push(strip_degenerate(r, n));
        }
        polys = next.into_iter().filter(|p| !p.is_constant()).collect();
    }
    let mut g = MultiPoly::zero(nv);
    for p in &polys {
        g = gcd(&g, p);
    }
    normalize(&g.narrow(2))
}

/// `A(L, M)` under `L ↦ −1/(L M²)`, denominators cleared.
pub fn published_to_ours(a: &MultiPoly) -> MultiPoly {
    let ma = a.degree_in(0);
    let shift = a
        .terms()
        .keys()
        .map(|e| 2 * e[0] as i64 - e[1] as i64)
        .max()
        .unwrap()
        .max(0);
    normalize(&MultiPoly::from_terms(
        2,
        a.terms().iter().map(|(e, c)| {
            let c = if e[0] % 2 == 1 { -c.clone() } else { c.clone() };
            (vec![ma - e[0], (e[1] as i64 - 2 * e[0] as i64 + shift) as u32], c)
        }),
    ))
}

/// Published A-polynomials in the meridian and longitude eigenvalues.
pub const PUBLISHED_4_1: &str = "L^2 M^4 - L M^8 + L M^6 + 2 * L M^4 + L M^2 - L + M^4";
pub const PUBLISHED_5_2: &str = "1 - L + 2 * L M^2 + 2 * L M^4 - L M^8 + L M^10 + L^2 M^4 - L^2 M^6 \
     + 2 * L^2 M^10 + 2 * L^2 M^12 - L^2 M^14 + L^3 M^14";
