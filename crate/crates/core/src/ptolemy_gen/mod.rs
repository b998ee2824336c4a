//! Ptolemy equations, one per tetrahedron.
//!
//! For tetrahedron `j` with sign pair `(B_j, B'_j)` and cusp entries
//! `μ, μ', λ, λ'` the equation reads
//!
//! ```text
//! (−1)^{B'_j} L^{−μ_j} M^{λ_j} γ_{j(01)} γ_{j(23)}
//!   + (−1)^{B_j} L^{−μ'_j} M^{λ'_j} γ_{j(02)} γ_{j(13)}
//!   − γ_{j(03)} γ_{j(12)} = 0
//! ```
//!
//! with `L = ℓ^{1/2}` and `M = m^{1/2}`, so exponents are stored as integers.

use crate::eliminate::MultiPoly;
use crate::nz_core::{NzSystem, SignVector};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PtolemyTerm {
    pub sign: i8,
    /// Exponent of `L = ℓ^{1/2}`.
    pub l_exp: i64,
    /// Exponent of `M = m^{1/2}`.
    pub m_exp: i64,
    pub gammas: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtolemyEquation {
    pub tet: Option<usize>,
    /// Display name, e.g. `Δ_{3/1}` for a layered tetrahedron.
    pub label: Option<String>,
    pub terms: Vec<PtolemyTerm>,
}

/// Equations over named γ variables.
///
/// `normalized` lists the γ set to 1; `identifications` pairs `(a, b)` mean
/// `γ_a ≡ γ_b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PtolemySystem {
    pub gamma_labels: Vec<String>,
    pub equations: Vec<PtolemyEquation>,
    pub normalized: Vec<usize>,
    pub identifications: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PtolemyError {
    #[error("system has {0} cusps; fill all but one first")]
    MultiCusp(usize),
    #[error("the NZ system carries no per-tetrahedron edge table")]
    NoEdgeTable,
    #[error("sign vector has length {got}, expected {expected}")]
    SignLength { got: usize, expected: usize },
    #[error("unknown γ label `{0}`")]
    UnknownGamma(String),
}

/// A term as `(sign, L exponent, M exponent, sorted γ labels)`.
pub type NamedTerm = (i8, i64, i64, String, String);

impl PtolemyEquation {
    /// Terms with labels in place of indices, sorted; equal equations compare equal.
    pub fn named(&self, labels: &[String], alias: &dyn Fn(&str) -> String) -> Vec<NamedTerm> {
        let mut out: Vec<NamedTerm> = self
            .terms
            .iter()
            .map(|t| {
                let a = alias(&labels[t.gammas.0]);
                let b = alias(&labels[t.gammas.1]);
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (t.sign, t.l_exp, t.m_exp, a, b)
            })
            .collect();
        out.sort();
        out
    }
}

fn gamma_text(labels: &[String], (a, b): (usize, usize)) -> String {
    if a == b {
        format!("γ_{{{}}}^2", labels[a])
    } else {
        format!("γ_{{{}}} γ_{{{}}}", labels[a], labels[b])
    }
}

fn half_power(var: &str, e: i64) -> Option<String> {
    match e {
        0 => None,
        _ if e % 2 == 0 && e / 2 == 1 => Some(var.to_string()),
        _ if e % 2 == 0 => Some(format!("{var}^{{{}}}", e / 2)),
        _ => Some(format!("{var}^{{{}/2}}", e)),
    }
}

impl PtolemySystem {
    pub fn gamma_index(&self, label: &str) -> Option<usize> {
        self.gamma_labels.iter().position(|l| l == label)
    }

    /// Index of a γ label, appending it if new.
    pub fn intern(&mut self, label: &str) -> usize {
        match self.gamma_index(label) {
            Some(i) => i,
            None => {
                self.gamma_labels.push(label.to_string());
                self.gamma_labels.len() - 1
            }
        }
    }

    /// Canonical representative of each γ under the identifications.
    pub fn representatives(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.gamma_labels.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.identifications {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        (0..parent.len()).map(|x| find(&mut parent, x)).collect()
    }

    /// Appends the equations of `other`, merging γ by label.
    pub fn absorb(&mut self, other: &PtolemySystem) {
        let map: Vec<usize> = other.gamma_labels.iter().map(|l| self.intern(l)).collect();
        for eq in &other.equations {
            let mut eq = eq.clone();
            for t in &mut eq.terms {
                t.gammas = (map[t.gammas.0], map[t.gammas.1]);
            }
            self.equations.push(eq);
        }
        for &(a, b) in &other.identifications {
            self.identifications.push((map[a], map[b]));
        }
        for &k in &other.normalized {
            if !self.normalized.contains(&map[k]) {
                self.normalized.push(map[k]);
            }
        }
    }

    /// Renders one equation with ℓ^{1/2}, m^{1/2} exponents.
    pub fn render_equation(&self, eq: &PtolemyEquation) -> String {
        let mut out = String::new();
        for (i, t) in eq.terms.iter().enumerate() {
            let sign = if t.sign < 0 { "-" } else { "+" };
            if i == 0 {
                if t.sign < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mut factors: Vec<String> = Vec::new();
            factors.extend(half_power("ℓ", t.l_exp));
            factors.extend(half_power("m", t.m_exp));
            factors.push(gamma_text(&self.gamma_labels, t.gammas));
            out.push_str(&factors.join(" "));
        }
        out.push_str(" = 0");
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for eq in &self.equations {
            match (&eq.label, eq.tet) {
                (Some(l), _) => out.push_str(&format!("{l}: ")),
                (None, Some(j)) => out.push_str(&format!("Δ{j}: ")),
                (None, None) => out.push_str("    "),
            }
            out.push_str(&self.render_equation(eq));
            out.push('\n');
        }
        for &(a, b) in &self.identifications {
            out.push_str(&format!(
                "identify γ_{{{}}} = γ_{{{}}}\n",
                self.gamma_labels[a], self.gamma_labels[b]
            ));
        }
        for &k in &self.normalized {
            out.push_str(&format!("set γ_{{{}}} = 1\n", self.gamma_labels[k]));
        }
        out
    }

    /// Every equation as labelled terms, with identified γ replaced by their
    /// representatives; sorted, so equal systems compare equal.
    pub fn structural_form(&self) -> Vec<Vec<NamedTerm>> {
        let reps = self.representatives();
        let alias_map: BTreeMap<String, String> = self
            .gamma_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), self.gamma_labels[reps[i]].clone()))
            .collect();
        let alias = |s: &str| alias_map.get(s).cloned().unwrap_or_else(|| s.to_string());
        let mut out: Vec<Vec<NamedTerm>> = self
            .equations
            .iter()
            .map(|e| e.named(&self.gamma_labels, &alias))
            .collect();
        out.sort();
        out
    }
}

/// The equation of tetrahedron `j`, with ℓ and m taken from `cusp`.
pub fn tet_equation(
    sys: &NzSystem,
    b: &SignVector,
    j: usize,
    cusp: usize,
) -> Result<PtolemyEquation, PtolemyError> {
    let edges = sys.tet_edges.as_ref().ok_or(PtolemyError::NoEdgeTable)?;
    if b.0.len() != 2 * sys.n {
        return Err(PtolemyError::SignLength {
            got: b.0.len(),
            expected: 2 * sys.n,
        });
    }
    let m = &sys.meridian(cusp).coeffs;
    let l = &sys.longitude(cusp).coeffs;
    let (mu, mu_p) = (m[2 * j], m[2 * j + 1]);
    let (la, la_p) = (l[2 * j], l[2 * j + 1]);
    let e = edges[j];
    let parity = |x: i64| if x.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(PtolemyEquation {
        tet: Some(j),
        label: None,
        terms: vec![
            PtolemyTerm {
                sign: parity(b.b_prime(j)),
                l_exp: -mu,
                m_exp: la,
                gammas: (e[0], e[5]),
            },
            PtolemyTerm {
                sign: parity(b.b(j)),
                l_exp: -mu_p,
                m_exp: la_p,
                gammas: (e[1], e[4]),
            },
            PtolemyTerm {
                sign: -1,
                l_exp: 0,
                m_exp: 0,
                gammas: (e[2], e[3]),
            },
        ],
    })
}

/// Equations of the listed tetrahedra using the peripheral data of `cusp`.
/// γ indices are the edge-row indices of `sys`.
pub fn equations_for(
    sys: &NzSystem,
    b: &SignVector,
    cusp: usize,
    tets: &[usize],
) -> Result<PtolemySystem, PtolemyError> {
    let equations = tets
        .iter()
        .map(|&j| tet_equation(sys, b, j, cusp))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PtolemySystem {
        gamma_labels: sys.edge_rows.iter().map(|r| r.label.clone()).collect(),
        equations,
        normalized: sys.dropped.first().copied().into_iter().collect(),
        identifications: Vec::new(),
    })
}

/// The full system of a one-cusped manifold.
pub fn ptolemy_equations(sys: &NzSystem, b: &SignVector) -> Result<PtolemySystem, PtolemyError> {
    if sys.cusp_count != 1 {
        return Err(PtolemyError::MultiCusp(sys.cusp_count));
    }
    let tets: Vec<usize> = (0..sys.n).collect();
    equations_for(sys, b, 0, &tets)
}

/// Chooses which γ is set to 1.
pub fn normalize_gamma(p: &mut PtolemySystem, label: &str) -> Result<(), PtolemyError> {
    let k = p
        .gamma_index(label)
        .ok_or_else(|| PtolemyError::UnknownGamma(label.to_string()))?;
    p.normalized = vec![k];
    Ok(())
}

/// Equations as polynomials in `L, M, g0, g1, …`, each multiplied by the
/// monomial `L^a M^b` that clears negative exponents; `(a, b)` is returned
/// alongside.
#[allow(non_snake_case)]
pub fn as_LM_polynomials(p: &PtolemySystem) -> Vec<(MultiPoly, (i64, i64))> {
    let nvars = 2 + p.gamma_labels.len();
    p.equations
        .iter()
        .map(|eq| {
            let sl = -eq.terms.iter().map(|t| t.l_exp).min().unwrap_or(0).min(0);
            let sm = -eq.terms.iter().map(|t| t.m_exp).min().unwrap_or(0).min(0);
            let mut poly = MultiPoly::zero(nvars);
            for t in &eq.terms {
                let mut exps = vec![0u32; nvars];
                exps[0] = (t.l_exp + sl) as u32;
                exps[1] = (t.m_exp + sm) as u32;
                exps[2 + t.gammas.0] += 1;
                exps[2 + t.gammas.1] += 1;
                poly = poly.add(&MultiPoly::monomial(nvars, exps, t.sign as i64));
            }
            (poly, (sl, sm))
        })
        .collect()
}
