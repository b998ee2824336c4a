//! Exact polynomial arithmetic and elimination of the γ variables.

pub mod algebra;
pub mod poly;

pub use algebra::{gcd, normalize, normalize_with, resultant, sign_norm, square_free, to_ell_m, EllM};
pub use poly::MultiPoly;

use crate::ptolemy_gen::{as_LM_polynomials, PtolemySystem};
use std::fmt::Write;

/// Polynomials in `L, M, g0, g1, …` with the γ bookkeeping of a Ptolemy system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub gamma_labels: Vec<String>,
    pub polys: Vec<MultiPoly>,
    pub normalized: Vec<usize>,
    pub identifications: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EliminateError {
    #[error("eliminant vanishes identically; refine strategy")]
    Vanishes,
    #[error("no equations to eliminate from")]
    Empty,
    #[error("polynomial list line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug)]
pub struct EliminationOptions {
    /// Substitute variables that occur linearly with a monomial coefficient first.
    pub linear_first: bool,
    /// γ indices to eliminate first, most urgent first. Others follow in
    /// decreasing index order, so fresh layered variables go before older ones.
    pub order: Vec<usize>,
    /// Report the square-free part as the normalized eliminant.
    pub square_free: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions {
            linear_first: true,
            order: Vec::new(),
            square_free: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Elimination {
    /// Eliminant in `L, M` as produced by the elimination.
    pub raw: MultiPoly,
    pub normalized: MultiPoly,
    /// Any further `L, M` polynomials left over.
    pub extra: Vec<MultiPoly>,
    pub log: Vec<String>,
}

impl PolySystem {
    pub fn from_ptolemy(p: &PtolemySystem) -> PolySystem {
        PolySystem {
            gamma_labels: p.gamma_labels.clone(),
            polys: as_LM_polynomials(p).into_iter().map(|(f, _)| f).collect(),
            normalized: p.normalized.clone(),
            identifications: p.identifications.clone(),
        }
    }

    pub fn nvars(&self) -> usize {
        2 + self.gamma_labels.len()
    }

    /// Text form: `gammas`, `normalize`, `identify` and one `poly` line each.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "gammas {}", self.gamma_labels.join(" ")).unwrap();
        for &k in &self.normalized {
            writeln!(out, "normalize {}", self.gamma_labels[k]).unwrap();
        }
        for &(a, b) in &self.identifications {
            writeln!(out, "identify {} {}", self.gamma_labels[a], self.gamma_labels[b]).unwrap();
        }
        for p in &self.polys {
            writeln!(out, "poly {}", p.to_text()).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<PolySystem, EliminateError> {
        let mut labels: Option<Vec<String>> = None;
        let mut normalized = Vec::new();
        let mut identifications = Vec::new();
        let mut polys = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
            let err = |message: String| EliminateError::Parse { line, message };
            let find = |labels: &Option<Vec<String>>, l: &str| -> Result<usize, EliminateError> {
                labels
                    .as_ref()
                    .and_then(|ls| ls.iter().position(|x| x == l))
                    .ok_or_else(|| EliminateError::Parse {
                        line,
                        message: format!("unknown γ label `{l}` (is `gammas` given first?)"),
                    })
            };
            match head {
                "gammas" => labels = Some(rest.split_whitespace().map(String::from).collect()),
                "normalize" => normalized.push(find(&labels, rest.trim())?),
                "identify" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(err("identify takes two labels".into()));
                    }
                    identifications.push((find(&labels, parts[0])?, find(&labels, parts[1])?));
                }
                "poly" => {
                    let nv = 2 + labels.as_ref().map_or(0, |l| l.len());
                    polys.push(MultiPoly::parse(rest, nv).map_err(err)?);
                }
                _ => return Err(err(format!("unrecognised line `{s}`"))),
            }
        }
        Ok(PolySystem {
            gamma_labels: labels.unwrap_or_default(),
            polys,
            normalized,
            identifications,
        })
    }
}

fn representatives(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

fn clean(polys: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for p in polys {
        let f = normalize(&p);
        if !f.is_zero() && !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Eliminates every γ, leaving a polynomial in `L, M`.
pub fn eliminate_gammas(sys: &PolySystem, opts: &EliminationOptions) -> Result<Elimination, EliminateError> {
    if sys.polys.is_empty() {
        return Err(EliminateError::Empty);
    }
    let nv = sys.nvars();
    let ng = sys.gamma_labels.len();
    let name = |k: usize| sys.gamma_labels[k].clone();
    let mut log = Vec::new();

    let reps = representatives(ng, &sys.identifications);
    let mut polys: Vec<MultiPoly> = sys
        .polys
        .iter()
        .map(|p| {
            let mut f = p.clone();
            for k in 0..ng {
                if reps[k] != k {
                    f = f.rename(2 + k, 2 + reps[k]);
                }
            }
            f
        })
        .collect();
    for &k in &sys.normalized {
        let r = reps[k];
        let one = MultiPoly::one(nv);
        polys = polys.iter().map(|p| p.substitute(2 + r, &one)).collect();
        log.push(format!("set γ_{{{}}} = 1", name(r)));
    }
    let mut polys = clean(polys);

    // Elimination priority: listed variables first, then decreasing index.
    let mut priority: Vec<usize> = opts.order.iter().map(|&k| reps[k]).collect();
    for k in (0..ng).rev() {
        if reps[k] == k && !priority.contains(&k) {
            priority.push(k);
        }
    }

    loop {
        let present: Vec<usize> = priority
            .iter()
            .copied()
            .filter(|&k| polys.iter().any(|p| p.depends_on(2 + k)))
            .collect();
        if present.is_empty() {
            break;
        }

        if opts.linear_first {
            let mut found = None;
            'search: for &k in &present {
                let v = 2 + k;
                let mut best: Option<usize> = None;
                for (i, p) in polys.iter().enumerate() {
                    if p.degree_in(v) == 1 && p.coeffs_in(v)[1].len() == 1 {
                        if best.map_or(true, |b| p.len() < polys[b].len()) {
                            best = Some(i);
                        }
                    }
                }
                if let Some(i) = best {
                    found = Some((i, k));
                    break 'search;
                }
            }
            if let Some((i, k)) = found {
                let v = 2 + k;
                let f = polys.remove(i);
                let c = f.coeffs_in(v);
                let (a, b) = (&c[1], &c[0]);
                let num = b.neg();
                polys = polys
                    .iter()
                    .map(|g| {
                        if g.depends_on(v) {
                            g.substitute_rational(v, &num, a).0
                        } else {
                            g.clone()
                        }
                    })
                    .collect();
                polys = clean(polys);
                log.push(format!("solve γ_{{{}}} linearly", name(k)));
                continue;
            }
        }

        // Resultant step on the variable of least degree.
        let k = *present
            .iter()
            .min_by_key(|&&k| {
                polys
                    .iter()
                    .map(|p| p.degree_in(2 + k))
                    .max()
                    .unwrap_or(0)
            })
            .unwrap();
        let v = 2 + k;
        let pivot_idx = polys
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depends_on(v))
            .min_by_key(|(_, p)| (p.degree_in(v), p.len()))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = polys.remove(pivot_idx);
        let mut next = Vec::with_capacity(polys.len());
        for g in &polys {
            if g.depends_on(v) {
                let r = resultant(&pivot, g, v).map_err(|_| EliminateError::Vanishes)?;
                if r.is_zero() {
                    return Err(EliminateError::Vanishes);
                }
                next.push(r);
            } else {
                next.push(g.clone());
            }
        }
        polys = clean(next);
        log.push(format!("resultant in γ_{{{}}}", name(k)));
    }

    if polys.is_empty() {
        return Err(EliminateError::Vanishes);
    }
    let mut lm: Vec<MultiPoly> = polys.iter().map(|p| p.narrow(2)).collect();
    lm.sort_by_key(|p| (p.total_degree(), p.len()));
    let raw = lm.remove(0);
    let normalized = normalize_with(&raw, opts.square_free);
    Ok(Elimination {
        raw,
        normalized,
        extra: lm,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_equation_with_normalized_gamma() {
        let sys = PolySystem {
            gamma_labels: vec!["x".into()],
            polys: vec![MultiPoly::parse("L g0^2 - M g0^2", 3).unwrap()],
            normalized: vec![0],
            identifications: vec![],
        };
        let e = eliminate_gammas(&sys, &EliminationOptions::default()).unwrap();
        assert_eq!(e.normalized, MultiPoly::parse("L - M", 2).unwrap());
    }

    #[test]
    fn empty_system_is_rejected() {
        let sys = PolySystem {
            gamma_labels: vec![],
            polys: vec![],
            normalized: vec![],
            identifications: vec![],
        };
        assert_eq!(
            eliminate_gammas(&sys, &EliminationOptions::default()).unwrap_err(),
            EliminateError::Empty
        );
    }

    #[test]
    fn text_round_trip() {
        let sys = PolySystem {
            gamma_labels: vec!["1/0".into(), "0/1".into()],
            polys: vec![MultiPoly::parse("-2 * L M^3 g0 g1 + g1^2 - 7", 4).unwrap()],
            normalized: vec![0],
            identifications: vec![(0, 1)],
        };
        assert_eq!(PolySystem::parse(&sys.to_text()).unwrap(), sys);
    }
}
