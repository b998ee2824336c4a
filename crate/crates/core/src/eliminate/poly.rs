use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial with integer coefficients over `nvars` ordered
/// variables. Variable 0 is `L`, 1 is `M`, and `2 + k` is `g<k>`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

pub fn var_name(i: usize) -> String {
    match i {
        0 => "L".into(),
        1 => "M".into(),
        _ => format!("g{}", i - 2),
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, 1)
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            add_term(&mut p.terms, e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Same polynomial over `nvars` variables, the new ones unused.
    pub fn widen(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(nvars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables, which must not occur.
    pub fn narrow(&self, nvars: usize) -> Self {
        assert!(self.terms.keys().all(|e| e[nvars..].iter().all(|&x| x == 0)));
        MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e[..nvars].to_vec(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut terms, e.clone(), c.clone());
        }
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                add_term(&mut terms, e, c1 * c2);
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`; entry `i` multiplies `v^i`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        if self.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            let i = e[v] as usize;
            let mut e = e.clone();
            e[v] = 0;
            out[i].terms.insert(e, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, nvars: usize, coeffs: &[MultiPoly]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e = e.clone();
                e[v] += i as u32;
                add_term(&mut terms, e, x.clone());
            }
        }
        MultiPoly { nvars, terms }
    }

    /// Polynomial substitution of `v ↦ q`.
    pub fn substitute(&self, v: usize, q: &MultiPoly) -> Self {
        let coeffs = self.coeffs_in(v);
        let mut out = Self::zero(self.nvars);
        let mut power = Self::one(self.nvars);
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                power = power.mul(q);
            }
            if !c.is_zero() {
                out = out.add(&c.mul(&power));
            }
        }
        out
    }

    /// `f(v ↦ num/den) · den^{deg_v f}`; returns the cleared exponent `deg_v f`.
    pub fn substitute_rational(&self, v: usize, num: &MultiPoly, den: &MultiPoly) -> (Self, u32) {
        let coeffs = self.coeffs_in(v);
        let d = coeffs.len() - 1;
        let mut num_pows = vec![Self::one(self.nvars)];
        let mut den_pows = vec![Self::one(self.nvars)];
        for i in 1..=d {
            num_pows.push(num_pows[i - 1].mul(num));
            den_pows.push(den_pows[i - 1].mul(den));
        }
        let mut out = Self::zero(self.nvars);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&c.mul(&num_pows[i]).mul(&den_pows[d - i]));
            }
        }
        (out, d as u32)
    }

    /// Replaces variable `v` by variable `w`.
    pub fn rename(&self, v: usize, w: usize) -> Self {
        if v == w {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let x = e[v];
            e[v] = 0;
            e[w] += x;
            add_term(&mut terms, e, c.clone());
        }
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// `f(±x_0, ±x_1, …)` with the given sign per variable.
    pub fn flip_signs(&self, negate: &[bool]) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let odd = e
                        .iter()
                        .zip(negate)
                        .filter(|(&x, &n)| n && x % 2 == 1)
                        .count();
                    (e.clone(), if odd % 2 == 1 { -c } else { c.clone() })
                })
                .collect(),
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                add_term(&mut terms, e2, c * BigInt::from(e[v]));
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Exponentwise minimum over all terms.
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn div_monomial(&self, exps: &[u32]) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn div_integer(&self, k: &BigInt) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / k)).collect(),
        }
    }

    /// Lexicographically largest exponent vector and its coefficient.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (de, dc) = d.leading_term().unwrap();
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (q, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let term = MultiPoly::monomial(self.nvars, qe.clone(), q.clone());
            rem = rem.sub(&d.mul(&term));
            add_term(&mut quot, qe, q);
        }
        Some(MultiPoly {
            nvars: self.nvars,
            terms: quot,
        })
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Pseudo-remainder of `self` by `d` in variable `v`.
    pub fn pseudo_rem(&self, d: &MultiPoly, v: usize) -> MultiPoly {
        let dd = d.degree_in(v);
        let dcoeffs = d.coeffs_in(v);
        let lc = dcoeffs[dd as usize].clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let rd = r.degree_in(v);
            let rlc = r.coeffs_in(v)[rd as usize].clone();
            let mut shift = vec![0u32; self.nvars];
            shift[v] = rd - dd;
            r = r.mul(&lc).sub(&d.mul(&rlc).mul_monomial(&shift));
        }
        r
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            s += big_to_f64(c) * monomial_value(e, point);
        }
        s
    }

    /// `|f(p)| / max_t |c_t p^{e_t}|`, a scale-free vanishing measure.
    pub fn relative_value(&self, point: &[Complex64]) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for (e, c) in &self.terms {
            let t = big_to_f64(c) * monomial_value(e, point);
            scale = scale.max(t.norm());
            s += t;
        }
        if scale == 0.0 {
            0.0
        } else {
            s.norm() / scale
        }
    }

    /// Canonical text, terms in decreasing lexicographic order.
    pub fn to_text(&self) -> String {
        self.to_text_with(&var_name)
    }

    pub fn to_text_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| {
                    if x == 1 {
                        name(v)
                    } else {
                        format!("{}^{x}", name(v))
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&factors.join(" "));
            } else {
                out.push_str(&format!("{a} * {}", factors.join(" ")));
            }
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output over `nvars` variables.
    pub fn parse(text: &str, nvars: usize) -> Result<MultiPoly, String> {
        parse_poly(text, nvars)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn add_term(terms: &mut BTreeMap<Vec<u32>, BigInt>, e: Vec<u32>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&e) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                terms.remove(&e);
            }
        }
        None => {
            terms.insert(e, c);
        }
    }
}

pub fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn monomial_value(e: &[u32], point: &[Complex64]) -> Complex64 {
    let mut m = Complex64::new(1.0, 0.0);
    for (v, &x) in e.iter().enumerate() {
        if x > 0 {
            m *= point[v].powu(x);
        }
    }
    m
}

pub fn var_index(name: &str) -> Option<usize> {
    match name {
        "L" => Some(0),
        "M" => Some(1),
        _ => name.strip_prefix('g')?.parse::<usize>().ok().map(|k| k + 2),
    }
}

fn parse_poly(text: &str, nvars: usize) -> Result<MultiPoly, String> {
    let s = text.trim();
    if s == "0" {
        return Ok(MultiPoly::zero(nvars));
    }
    // Split into signed terms at top-level ` + ` / ` - `.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut neg = false;
    let mut cur = String::new();
    let mut rest = s;
    if let Some(r) = rest.strip_prefix('-') {
        neg = true;
        rest = r;
    }
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    for tok in tokens {
        match tok {
            "+" | "-" => {
                if cur.trim().is_empty() {
                    return Err(format!("dangling `{tok}`"));
                }
                terms.push((neg, std::mem::take(&mut cur)));
                neg = tok == "-";
            }
            _ => {
                cur.push(' ');
                cur.push_str(tok);
            }
        }
    }
    if cur.trim().is_empty() {
        return Err("empty term".into());
    }
    terms.push((neg, cur));

    let mut out = MultiPoly::zero(nvars);
    for (neg, t) in terms {
        let t = t.trim();
        let (coef, mono) = match t.split_once('*') {
            Some((c, m)) => (
                c.trim()
                    .parse::<BigInt>()
                    .map_err(|_| format!("bad coefficient in `{t}`"))?,
                m.trim(),
            ),
            None => match t.parse::<BigInt>() {
                Ok(c) => (c, ""),
                Err(_) => (BigInt::one(), t),
            },
        };
        let mut e = vec![0u32; nvars];
        for f in mono.split_whitespace() {
            let (name, pow) = match f.split_once('^') {
                Some((n, p)) => (n, p.parse::<u32>().map_err(|_| format!("bad exponent in `{f}`"))?),
                None => (f, 1),
            };
            let v = var_index(name).ok_or_else(|| format!("unknown variable `{name}`"))?;
            if v >= nvars {
                return Err(format!("variable `{name}` outside {nvars} variables"));
            }
            e[v] += pow;
        }
        let c = if neg { -coef } else { coef };
        out = out.add(&MultiPoly::monomial(nvars, e, c));
    }
    Ok(out)
}
