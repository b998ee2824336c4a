//! Neumann–Zagier matrices, their symplectic properties, and integer sign vectors.
//!
//! Coordinates come in pairs `(x_j, x'_j)`, one pair per tetrahedron.

pub mod format;
pub mod snf;

use crate::triangulation::{
    curve_incidence, CurveIncidence, CurveKind, IncidenceMatrix, Perm, Triangulation,
    TriangulationError,
};
use std::fmt;

pub use format::parse_nz_fixture;
pub use snf::{rank, smith_normal_form, Snf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Edge,
    Meridian(usize),
    Longitude(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NzRow {
    pub kind: RowKind,
    pub label: String,
    pub coeffs: Vec<i64>,
    pub c: i64,
}

/// Edge rows first, then `(m_k, l_k)` for every cusp.
///
/// `tet_edges[j][e]` is the edge-row index of edge `e` (in `EDGES` order)
/// of tetrahedron `j`, when known. `dropped` lists the edge rows removed by
/// [`reduce_flat`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NzSystem {
    pub n: usize,
    pub cusp_count: usize,
    pub edge_rows: Vec<NzRow>,
    pub cusp_rows: Vec<NzRow>,
    pub dropped: Vec<usize>,
    pub tet_edges: Option<Vec<[usize; 6]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NzError {
    #[error("vector lengths differ: {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("cusp {cusp} has no {kind} curve")]
    MissingCurve { cusp: usize, kind: &'static str },
    #[error("no integer solution to NZ·B = C")]
    NoIntegerSolution,
    #[error("no labelling makes the first n−n_c edge rows independent with some c_k ≠ 2")]
    NoGoodLabelling,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("NZ fixture line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// `(B_1, B'_1, …, B_n, B'_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(pub Vec<i64>);

impl SignVector {
    pub fn zeros(n: usize) -> Self {
        SignVector(vec![0; 2 * n])
    }

    pub fn b(&self, j: usize) -> i64 {
        self.0[2 * j]
    }

    pub fn b_prime(&self, j: usize) -> i64 {
        self.0[2 * j + 1]
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `Σ_j (v_j w'_j − v'_j w_j)`.
pub fn omega(v: &[i64], w: &[i64]) -> Result<i64, NzError> {
    if v.len() != w.len() || v.len() % 2 != 0 {
        return Err(NzError::LengthMismatch(v.len(), w.len()));
    }
    Ok(v.chunks(2)
        .zip(w.chunks(2))
        .map(|(a, b)| a[0] * b[1] - a[1] * b[0])
        .sum())
}

/// Pairwise rotation `(x, y) ↦ (−y, x)`.
pub fn j_rotate(v: &[i64]) -> Vec<i64> {
    v.chunks(2).flat_map(|p| [-p[1], p[0]]).collect()
}

pub fn mat_vec(rows: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    rows.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Builds the system from an incidence matrix and one (meridian, longitude)
/// incidence pair per cusp.
pub fn build_nz(
    inc: &IncidenceMatrix,
    curves: &[(CurveIncidence, CurveIncidence)],
    edge_labels: &[String],
) -> NzSystem {
    let n = inc.n;
    let edge_rows = (0..n)
        .map(|k| {
            let coeffs = (0..n)
                .flat_map(|j| {
                    let [a, b, c] = inc.get(k, j);
                    [a - c, b - c]
                })
                .collect();
            NzRow {
                kind: RowKind::Edge,
                label: edge_labels
                    .get(k)
                    .cloned()
                    .unwrap_or_else(|| format!("E{k}")),
                coeffs,
                c: 2 - inc.c_total(k),
            }
        })
        .collect();
    let mut cusp_rows = Vec::with_capacity(2 * curves.len());
    for (k, (m, l)) in curves.iter().enumerate() {
        cusp_rows.push(NzRow {
            kind: RowKind::Meridian(k),
            label: format!("m{k}"),
            coeffs: m.nz_row(),
            c: -m.c_total(),
        });
        cusp_rows.push(NzRow {
            kind: RowKind::Longitude(k),
            label: format!("l{k}"),
            coeffs: l.nz_row(),
            c: -l.c_total(),
        });
    }
    let cusp_count = curves.len();
    NzSystem {
        n,
        cusp_count,
        edge_rows,
        cusp_rows,
        dropped: (n.saturating_sub(cusp_count)..n).collect(),
        tet_edges: None,
    }
}

impl NzSystem {
    /// NZ data of a triangulation carrying a meridian and longitude on every cusp.
    pub fn from_triangulation(t: &Triangulation) -> Result<NzSystem, NzError> {
        let mut curves = Vec::with_capacity(t.cusp_count());
        for cusp in 0..t.cusp_count() {
            let m = t.curve(cusp, CurveKind::Meridian).ok_or(NzError::MissingCurve {
                cusp,
                kind: "meridian",
            })?;
            let l = t.curve(cusp, CurveKind::Longitude).ok_or(NzError::MissingCurve {
                cusp,
                kind: "longitude",
            })?;
            let mi = curve_incidence(t, m).map_err(|source| TriangulationError::Curve { index: cusp, source })?;
            let li = curve_incidence(t, l).map_err(|source| TriangulationError::Curve { index: cusp, source })?;
            curves.push((mi, li));
        }
        let mut sys = build_nz(&t.incidence_matrix(), &curves, &t.edge_labels());
        sys.tet_edges = Some(t.edge_table().to_vec());
        Ok(sys)
    }

    pub fn rows(&self) -> impl Iterator<Item = &NzRow> {
        self.edge_rows.iter().chain(self.cusp_rows.iter())
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.rows().map(|r| r.coeffs.clone()).collect()
    }

    pub fn c_vector(&self) -> Vec<i64> {
        self.rows().map(|r| r.c).collect()
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_rows.iter().position(|r| r.label == label)
    }

    pub fn meridian(&self, cusp: usize) -> &NzRow {
        &self.cusp_rows[2 * cusp]
    }

    pub fn longitude(&self, cusp: usize) -> &NzRow {
        &self.cusp_rows[2 * cusp + 1]
    }

    /// Reorders edge rows: new row `i` is old row `order[i]`.
    pub fn permute_edges(&self, order: &[usize]) -> NzSystem {
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let mut dropped: Vec<usize> = self.dropped.iter().map(|&d| inverse[d]).collect();
        dropped.sort_unstable();
        NzSystem {
            n: self.n,
            cusp_count: self.cusp_count,
            edge_rows: order.iter().map(|&o| self.edge_rows[o].clone()).collect(),
            cusp_rows: self.cusp_rows.clone(),
            dropped,
            tet_edges: self
                .tet_edges
                .as_ref()
                .map(|te| te.iter().map(|row| row.map(|k| inverse[k])).collect()),
        }
    }

    /// Whether `NZ · b = C` holds exactly for the full system.
    pub fn satisfied_by(&self, b: &SignVector) -> bool {
        b.0.len() == 2 * self.n && mat_vec(&self.matrix(), &b.0) == self.c_vector()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NzReport {
    pub clauses: Vec<Clause>,
}

impl NzReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for NzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{:<4} {status}", c.name)?;
            if let Some(w) = &c.witness {
                write!(f, "  {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks the five symplectic clauses: edge rows pairwise ω-orthogonal (i),
/// orthogonal to cusp rows (ii), ω(m_j, l_k) = 2δ_jk (iii),
/// edge rank n − n_c (iv) and total rank n + n_c (v).
pub fn check_nz_properties(s: &NzSystem) -> NzReport {
    let w = |a: &NzRow, b: &NzRow| omega(&a.coeffs, &b.coeffs).unwrap_or(i64::MIN);
    let mut clauses = Vec::with_capacity(5);

    let mut witness = None;
    'i: for (x, a) in s.edge_rows.iter().enumerate() {
        for b in &s.edge_rows[x + 1..] {
            let v = w(a, b);
            if v != 0 {
                witness = Some(format!("ω({}, {}) = {v}", a.label, b.label));
                break 'i;
            }
        }
    }
    clauses.push(Clause {
        name: "i",
        passed: witness.is_none(),
        witness,
    });

    let mut witness = None;
    'ii: for a in &s.edge_rows {
        for b in &s.cusp_rows {
            let v = w(a, b);
            if v != 0 {
                witness = Some(format!("ω({}, {}) = {v}", a.label, b.label));
                break 'ii;
            }
        }
    }
    clauses.push(Clause {
        name: "ii",
        passed: witness.is_none(),
        witness,
    });

    let mut witness = None;
    'iii: for j in 0..s.cusp_count {
        for k in 0..s.cusp_count {
            let expect = if j == k { 2 } else { 0 };
            let pairs = [
                (s.meridian(j), s.longitude(k), expect),
                (s.meridian(j), s.meridian(k), 0),
                (s.longitude(j), s.longitude(k), 0),
            ];
            for (a, b, e) in pairs {
                let v = w(a, b);
                if v != e {
                    witness = Some(format!("ω({}, {}) = {v}, expected {e}", a.label, b.label));
                    break 'iii;
                }
            }
        }
    }
    clauses.push(Clause {
        name: "iii",
        passed: witness.is_none(),
        witness,
    });

    let edge: Vec<Vec<i64>> = s.edge_rows.iter().map(|r| r.coeffs.clone()).collect();
    let re = rank(&edge);
    let want = s.n.saturating_sub(s.cusp_count);
    clauses.push(Clause {
        name: "iv",
        passed: re == want,
        witness: (re != want).then(|| format!("edge rank {re}, expected {want}")),
    });

    let rt = rank(&s.matrix());
    let want = s.n + s.cusp_count;
    clauses.push(Clause {
        name: "v",
        passed: rt == want,
        witness: (rt != want).then(|| format!("rank {rt}, expected {want}")),
    });
    NzReport { clauses }
}

/// Lexicographically earliest set of `n − n_c` independent edge rows
/// containing a row with `C ≠ 0`.
pub fn choose_kept_rows(s: &NzSystem) -> Option<Vec<usize>> {
    let n = s.edge_rows.len();
    let k = n.checked_sub(s.cusp_count)?;
    if k == 0 {
        return Some(Vec::new());
    }
    let rows: Vec<Vec<i64>> = s.edge_rows.iter().map(|r| r.coeffs.clone()).collect();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let chosen: Vec<Vec<i64>> = combo.iter().map(|&i| rows[i].clone()).collect();
        if combo.iter().any(|&i| s.edge_rows[i].c != 0) && rank(&chosen) == k {
            return Some(combo);
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if combo[i] < n - k + i {
                combo[i] += 1;
                for x in i + 1..k {
                    combo[x] = combo[x - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Puts the chosen rows first (original order kept) and marks the rest as dropped.
pub fn order_kept_first(s: &NzSystem, kept: &[usize]) -> NzSystem {
    let mut order: Vec<usize> = kept.to_vec();
    order.extend((0..s.edge_rows.len()).filter(|i| !kept.contains(i)));
    let mut out = s.permute_edges(&order);
    out.dropped = (kept.len()..s.edge_rows.len()).collect();
    out
}

#[derive(Clone, Debug)]
pub struct GoodLabelling {
    pub triangulation: Triangulation,
    pub system: NzSystem,
    /// The one tetrahedron relabelled, if any, with its vertex permutation.
    pub relabelled: Option<(usize, Perm)>,
}

/// Reorders edges, cycling the labels of at most one tetrahedron, so the first
/// `n − n_c` edge rows are independent and one of them has `c_k ≠ 2`.
pub fn good_labelling(t: &Triangulation, s: &NzSystem) -> Result<GoodLabelling, NzError> {
    if let Some(kept) = choose_kept_rows(s) {
        return Ok(GoodLabelling {
            triangulation: t.clone(),
            system: order_kept_first(s, &kept),
            relabelled: None,
        });
    }
    let cycle2 = Perm::CYCLE_ABC.compose(Perm::CYCLE_ABC);
    for j in 0..t.n() {
        for p in [Perm::CYCLE_ABC, cycle2] {
            let rt = t.relabel_tet(j, p)?;
            let rs = NzSystem::from_triangulation(&rt)?;
            if let Some(kept) = choose_kept_rows(&rs) {
                return Ok(GoodLabelling {
                    triangulation: rt,
                    system: order_kept_first(&rs, &kept),
                    relabelled: Some((j, p)),
                });
            }
        }
    }
    Err(NzError::NoGoodLabelling)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSystem {
    pub rows: Vec<Vec<i64>>,
    pub c: Vec<i64>,
    pub labels: Vec<String>,
    pub dropped: Vec<usize>,
}

/// Removes the dropped edge rows.
pub fn reduce_flat(s: &NzSystem) -> FlatSystem {
    let mut rows = Vec::new();
    let mut c = Vec::new();
    let mut labels = Vec::new();
    for (i, r) in s.edge_rows.iter().enumerate() {
        if !s.dropped.contains(&i) {
            rows.push(r.coeffs.clone());
            c.push(r.c);
            labels.push(r.label.clone());
        }
    }
    for r in &s.cusp_rows {
        rows.push(r.coeffs.clone());
        c.push(r.c);
        labels.push(r.label.clone());
    }
    FlatSystem {
        rows,
        c,
        labels,
        dropped: s.dropped.clone(),
    }
}

/// Integer `B` with `rows · B = c`, reduced modulo the kernel.
pub fn solve_sign_vector(rows: &[Vec<i64>], c: &[i64]) -> Result<SignVector, NzError> {
    if rows.len() != c.len() {
        return Err(NzError::LengthMismatch(rows.len(), c.len()));
    }
    let (x, kernel) = snf::solve_integer(rows, c).ok_or(NzError::NoIntegerSolution)?;
    let x = snf::reduce_by_kernel(x, &kernel);
    let b = snf::to_i64(&x).ok_or(NzError::NoIntegerSolution)?;
    Ok(SignVector(b))
}

/// Sign vector of the whole system. Solving every edge row, not only the
/// flat ones, keeps `B` constant across tetrahedra that share all their edges.
pub fn solve_system(s: &NzSystem) -> Result<SignVector, NzError> {
    solve_sign_vector(&s.matrix(), &s.c_vector())
}

/// Edge rows whose entries at `(t1, t2)` are `(0,1,0,1)` and `(1,0,1,0)`.
pub fn pair_rows(s: &NzSystem, t1: usize, t2: usize) -> Option<(usize, usize)> {
    let at = |r: &NzRow| {
        [
            r.coeffs[2 * t1],
            r.coeffs[2 * t1 + 1],
            r.coeffs[2 * t2],
            r.coeffs[2 * t2 + 1],
        ]
    };
    let f = s.edge_rows.iter().position(|r| at(r) == [0, 1, 0, 1])?;
    let h = s.edge_rows.iter().position(|r| at(r) == [1, 0, 1, 0])?;
    Some((f, h))
}

/// `B + B_1·J R_f − B'_1·J R_h`, which vanishes on both tetrahedra of the pair.
pub fn adjust_sign_vector_zero_at(
    b: &SignVector,
    s: &NzSystem,
    t1: usize,
    t2: usize,
) -> Result<SignVector, NzError> {
    if !s.satisfied_by(b) {
        return Err(NzError::Precondition("B does not solve NZ·B = C".into()));
    }
    let (f, h) = pair_rows(s, t1, t2).ok_or_else(|| {
        NzError::Precondition(format!(
            "no edge rows with entries (0,1,0,1) and (1,0,1,0) at tetrahedra {t1}, {t2}"
        ))
    })?;
    let (b1, b1p) = (b.b(t1), b.b_prime(t1));
    let jf = j_rotate(&s.edge_rows[f].coeffs);
    let jh = j_rotate(&s.edge_rows[h].coeffs);
    let out: Vec<i64> = (0..b.0.len())
        .map(|i| b.0[i] + b1 * jf[i] - b1p * jh[i])
        .collect();
    let out = SignVector(out);
    if out.b(t1) != 0 || out.b_prime(t1) != 0 || out.b(t2) != 0 || out.b_prime(t2) != 0 {
        return Err(NzError::Precondition(format!(
            "B differs between tetrahedra {t1} and {t2}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_basics() {
        assert_eq!(omega(&[1, 0], &[0, 1]).unwrap(), 1);
        assert_eq!(omega(&[3, -2, 1, 5], &[3, -2, 1, 5]).unwrap(), 0);
        assert!(omega(&[1, 0], &[1, 0, 0]).is_err());
    }

    #[test]
    fn j_rotation() {
        assert_eq!(j_rotate(&[1, 2, -3, 4]), vec![-2, 1, -4, -3]);
    }

    #[test]
    fn zero_matrix_fails_rank_and_cusp_clauses() {
        let zero = |kind, label: &str| NzRow {
            kind,
            label: label.into(),
            coeffs: vec![0; 4],
            c: 0,
        };
        let s = NzSystem {
            n: 2,
            cusp_count: 1,
            edge_rows: vec![zero(RowKind::Edge, "E0"), zero(RowKind::Edge, "E1")],
            cusp_rows: vec![zero(RowKind::Meridian(0), "m0"), zero(RowKind::Longitude(0), "l0")],
            dropped: vec![1],
            tet_edges: None,
        };
        let r = check_nz_properties(&s);
        let failed: Vec<&str> = r.clauses.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert_eq!(failed, vec!["iii", "iv", "v"]);
    }

    #[test]
    fn zero_c_gives_zero_b() {
        let b = solve_sign_vector(&[vec![1, 2, 0, 1]], &[0]).unwrap();
        assert_eq!(b.0, vec![0; 4]);
    }
}
