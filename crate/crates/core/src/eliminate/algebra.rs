use super::poly::MultiPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResultantError {
    #[error("polynomial does not involve the eliminated variable")]
    Degenerate,
}

/// Sylvester matrix of `f` and `g` with respect to `v`.
pub fn sylvester(f: &MultiPoly, g: &MultiPoly, v: usize) -> Vec<Vec<MultiPoly>> {
    let nv = f.nvars();
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MultiPoly::zero(nv); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MultiPoly::zero(nv); size];
        for (k, c) in gc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one(0);
    }
    let nv = a[0][0].nvars();
    let mut sign = false;
    let mut prev = MultiPoly::one(nv);
    for k in 0..n {
        if a[k][k].is_zero() {
            // Prefer the sparsest non-zero pivot below.
            let p = (k + 1..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].len());
            match p {
                Some(p) => {
                    a.swap(k, p);
                    sign = !sign;
                }
                None => return MultiPoly::zero(nv),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step divides exactly");
            }
            a[i][k] = MultiPoly::zero(nv);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Resultant of `f` and `g` with respect to `v`.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly, ResultantError> {
    if !f.depends_on(v) || !g.depends_on(v) {
        return Err(ResultantError::Degenerate);
    }
    Ok(bareiss_det(sylvester(f, g, v)))
}

/// Highest-index variable occurring in either polynomial.
fn main_var(a: &MultiPoly, b: &MultiPoly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.depends_on(v) || b.depends_on(v))
}

/// Content of `p` as a polynomial in `v`: gcd of its coefficients.
pub fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = MultiPoly::zero(p.nvars());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return MultiPoly::constant(p.nvars(), p.content());
        }
    }
    g
}

fn with_positive_lead(p: MultiPoly) -> MultiPoly {
    match p.leading_term() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Greatest common divisor, with positive leading coefficient.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return with_positive_lead(b.clone());
    }
    if b.is_zero() {
        return with_positive_lead(a.clone());
    }
    let nv = a.nvars();
    let Some(v) = main_var(a, b) else {
        let ca = a.terms().values().next().unwrap();
        let cb = b.terms().values().next().unwrap();
        return MultiPoly::constant(nv, ca.gcd(cb));
    };
    if !a.depends_on(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.depends_on(v) {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    // Primitive remainder sequence.
    loop {
        let r = p.pseudo_rem(&q, v);
        if r.is_zero() {
            break;
        }
        if !r.depends_on(v) {
            return with_positive_lead(c);
        }
        p = q;
        let cr = content_in(&r, v);
        q = r.div_exact(&cr).expect("content divides");
    }
    let cq = content_in(&q, v);
    let q = q.div_exact(&cq).expect("content divides");
    with_positive_lead(c.mul(&q))
}

/// Product of the distinct irreducible factors, up to units.
pub fn square_free(p: &MultiPoly) -> MultiPoly {
    let mut f = p.clone();
    for v in 0..p.nvars() {
        if !f.depends_on(v) {
            continue;
        }
        let g = gcd(&f, &f.derivative(v));
        if g.depends_on(v) {
            f = f.div_exact(&g).expect("gcd divides");
        }
    }
    f
}

/// Strips integer content and the common monomial, and makes the
/// lexicographically leading coefficient positive.
pub fn normalize(p: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let m = p.monomial_content();
    let c = p.content();
    with_positive_lead(p.div_monomial(&m).div_integer(&c))
}

pub fn normalize_with(p: &MultiPoly, square_free_part: bool) -> MultiPoly {
    let f = normalize(p);
    if square_free_part {
        normalize(&square_free(&f))
    } else {
        f
    }
}

/// Result of rewriting a polynomial in `L, M` in terms of `ℓ = L², m = M²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllM {
    pub poly: MultiPoly,
    /// False when an odd exponent blocked the rewrite; `poly` is then unchanged.
    pub halved: bool,
}

pub fn to_ell_m(p: &MultiPoly) -> EllM {
    let even = p.terms().keys().all(|e| e[0] % 2 == 0 && e[1] % 2 == 0);
    if !even {
        return EllM {
            poly: p.clone(),
            halved: false,
        };
    }
    let poly = MultiPoly::from_terms(
        p.nvars(),
        p.terms().iter().map(|(e, c)| {
            let mut e = e.clone();
            e[0] /= 2;
            e[1] /= 2;
            (e, c.clone())
        }),
    );
    EllM { poly, halved: true }
}

/// `E(L,M) E(−L,M) E(L,−M) E(−L,−M)`, which has only even powers of L and M.
pub fn sign_norm(p: &MultiPoly) -> MultiPoly {
    let nv = p.nvars();
    let flip = |l: bool, m: bool| {
        let mut mask = vec![false; nv];
        mask[0] = l;
        mask[1] = m;
        p.flip_signs(&mask)
    };
    p.mul(&flip(true, false))
        .mul(&flip(false, true))
        .mul(&flip(true, true))
}

/// Integer gcd of all coefficients, for callers holding raw BigInts.
pub fn int_gcd(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Whether `p` is ± a single monomial.
pub fn is_monomial(p: &MultiPoly) -> bool {
    p.len() == 1
}

pub fn is_unit(p: &MultiPoly) -> bool {
    p.len() == 1 && p.is_constant() && p.terms().values().next().unwrap().abs().is_one()
}
