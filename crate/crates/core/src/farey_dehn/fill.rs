//! Dehn filling of a cusp met by exactly two tetrahedra.
//!
//! Two independent constructions are provided. [`assemble_filled`] edits
//! the NZ matrix of the unfilled manifold column by column; the
//! [`filled_triangulation`] route glues a layered solid torus into the
//! actual triangulation and recomputes everything from scratch.

use super::slope::{intersection_number, Slope};
use super::walk::{farey_walk, lst_ptolemy, FareyWalk, Letter, WalkError};
use crate::nz_core::{
    adjust_sign_vector_zero_at, check_nz_properties, mat_vec, solve_system, Clause, NzError, NzRow,
    NzSystem, RowKind, SignVector,
};
use crate::ptolemy_gen::{equations_for, ptolemy_equations, PtolemyError, PtolemySystem};
use crate::triangulation::perm::face_vertices;
use crate::triangulation::{
    edge_index, CurveKind, Gluing, PeripheralCurve, Perm, Triangulation, TriangulationError, EDGES,
    EDGE_TYPES,
};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FillError {
    #[error("cusp cannot be filled: {0}")]
    NotFillable(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Nz(#[from] NzError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Ptolemy(#[from] PtolemyError),
    #[error("filled systems disagree: {0}")]
    Mismatch(String),
}

/// Where a cusp meets the rest of the triangulation.
///
/// `tets` are `Δ1, Δ2` and `vertices` their ideal vertices on the cusp. The
/// edge classes `h, f, g` are the a-, b- and c-edges opposite those vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hexagon {
    pub cusp: usize,
    pub tets: [usize; 2],
    pub vertices: [u8; 2],
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub h: usize,
    /// Slopes of `f, g, h` read from their labels.
    pub slopes: Option<[Slope; 3]>,
}

#[derive(Clone, Debug)]
pub struct FillableReport {
    pub clauses: Vec<Clause>,
    pub hexagon: Option<Hexagon>,
}

impl FillableReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

impl fmt::Display for FillableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(f, "{mark} {}: {w}", c.name)?,
                None => writeln!(f, "{mark} {}", c.name)?,
            }
        }
        if let Some(Hexagon { slopes: Some([sf, sg, sh]), .. }) = &self.hexagon {
            writeln!(f, "boundary slopes f={sf} g={sg} h={sh}")?;
        }
        Ok(())
    }
}

fn clause(name: &'static str, witness: Option<String>) -> Clause {
    Clause {
        name,
        passed: witness.is_none(),
        witness,
    }
}

/// Edge of type `x` (0 = a, 1 = b, 2 = c) in the face opposite `v`.
fn opposite_edge(v: u8, x: usize) -> usize {
    (0..6)
        .find(|&e| EDGE_TYPES[e].index() == x && EDGES[e].0 != v && EDGES[e].1 != v)
        .unwrap()
}

fn hexagon_of(t: &Triangulation, cusp: usize) -> Result<Hexagon, String> {
    if cusp >= t.cusp_count() {
        return Err(format!("cusp {cusp} out of range"));
    }
    let verts = t.cusp_vertices(cusp);
    if verts.len() != 2 || verts[0].0 == verts[1].0 {
        return Err(format!("cusp meets {} tetrahedron vertices: {verts:?}", verts.len()));
    }
    let tets = [verts[0].0, verts[1].0];
    let vertices = [verts[0].1, verts[1].1];
    let mut e_members = Vec::new();
    for i in 0..2 {
        for e in 0..6 {
            let (a, b) = EDGES[e];
            if a == vertices[i] || b == vertices[i] {
                e_members.push(t.edge_of(tets[i], e));
            }
        }
    }
    let e = e_members[0];
    if e_members.iter().any(|&k| k != e) || t.edge_classes()[e].members.len() != 6 {
        return Err("the six edges into the cusp are not a single edge class of valence six".into());
    }
    let class = |i: usize, x: usize| t.edge_of(tets[i], opposite_edge(vertices[i], x));
    let mut fgh = [0usize; 3];
    for x in 0..3 {
        if class(0, x) != class(1, x) {
            return Err(format!(
                "{} and {} differ",
                t.edge_label(class(0, x)),
                t.edge_label(class(1, x))
            ));
        }
        fgh[x] = class(0, x);
    }
    let [h, f, g] = fgh;
    if f == g || g == h || f == h || fgh.contains(&e) {
        return Err("opposite edges f, g, h are not three distinct classes".into());
    }
    let slopes = [f, g, h]
        .iter()
        .map(|&k| t.edge_label(k).parse::<Slope>().ok())
        .collect::<Option<Vec<_>>>()
        .map(|v| [v[0], v[1], v[2]]);
    Ok(Hexagon {
        cusp,
        tets,
        vertices,
        e,
        f,
        g,
        h,
        slopes,
    })
}

fn at(row: &NzRow, tets: [usize; 2]) -> [i64; 4] {
    let [t1, t2] = tets;
    [
        row.coeffs[2 * t1],
        row.coeffs[2 * t1 + 1],
        row.coeffs[2 * t2],
        row.coeffs[2 * t2 + 1],
    ]
}

/// Checks that `cusp` can be filled by a layered solid torus.
pub fn check_fillable(t: &Triangulation, cusp: usize) -> FillableReport {
    let mut clauses = Vec::new();
    clauses.push(clause(
        "cusps",
        (t.cusp_count() < 2 || cusp >= t.cusp_count())
            .then(|| format!("{} cusp(s); filling needs at least two", t.cusp_count())),
    ));
    let hex = hexagon_of(t, cusp);
    clauses.push(clause("two_tetrahedra", hex.as_ref().err().cloned()));
    let Ok(hex) = hex else {
        return FillableReport {
            clauses,
            hexagon: None,
        };
    };
    let others: Vec<&PeripheralCurve> = t.curves().iter().filter(|c| c.cusp != cusp).collect();
    let crossing = others
        .iter()
        .find(|c| c.steps.iter().any(|s| hex.tets.contains(&s.tet)))
        .map(|c| format!("{} of cusp {} enters tetrahedron {} or {}", c.kind.short_name(), c.cusp, hex.tets[0], hex.tets[1]));
    clauses.push(clause("curves_avoid", crossing));

    match NzSystem::from_triangulation(t) {
        Err(e) => clauses.push(clause("nz_form", Some(e.to_string()))),
        Ok(s) => {
            let e_row = &s.edge_rows[hex.e];
            clauses.push(clause(
                "e_row_zero",
                e_row.coeffs.iter().any(|&x| x != 0).then(|| format!("row {} is not zero", e_row.label)),
            ));
            let want = [(hex.f, [0, 1, 0, 1]), (hex.g, [-1, -1, -1, -1]), (hex.h, [1, 0, 1, 0])];
            let bad = want
                .iter()
                .find(|(k, p)| at(&s.edge_rows[*k], hex.tets) != *p)
                .map(|(k, p)| format!("row {} has {:?}, expected {p:?}", s.edge_rows[*k].label, at(&s.edge_rows[*k], hex.tets)));
            clauses.push(clause("patterns", bad));

            let m = s.meridian(cusp);
            let l = s.longitude(cusp);
            let mut filled_bad = None;
            for r in [m, l] {
                let outside = r
                    .coeffs
                    .chunks(2)
                    .enumerate()
                    .any(|(j, p)| !hex.tets.contains(&j) && (p[0] != 0 || p[1] != 0));
                let v = at(r, hex.tets);
                if outside || v[0] != -v[2] || v[1] != -v[3] {
                    filled_bad = Some(format!("row {} is not supported antisymmetrically on Δ1, Δ2", r.label));
                }
            }
            let (vm, vl) = (at(m, hex.tets), at(l, hex.tets));
            if vm[0] * vl[1] - vm[1] * vl[0] == 0 && filled_bad.is_none() {
                filled_bad = Some("meridian and longitude entries are dependent".into());
            }
            clauses.push(clause("filled_cusp_rows", filled_bad));

            let stray = s
                .rows()
                .enumerate()
                .filter(|(i, r)| {
                    !matches!(i, x if *x == hex.e || *x == hex.f || *x == hex.g || *x == hex.h)
                        && !matches!(r.kind, RowKind::Meridian(k) | RowKind::Longitude(k) if k == cusp)
                })
                .find(|(_, r)| at(r, hex.tets) != [0; 4])
                .map(|(_, r)| format!("row {} is non-zero at Δ1, Δ2", r.label));
            clauses.push(clause("other_rows_zero", stray));
        }
    }

    let slope_bad = match hex.slopes {
        None => Some(format!(
            "labels {}, {}, {} are not all slopes",
            t.edge_label(hex.f),
            t.edge_label(hex.g),
            t.edge_label(hex.h)
        )),
        Some(sl) => {
            let pairs = [(0, 1), (1, 2), (0, 2)];
            pairs
                .iter()
                .find(|&&(i, j)| intersection_number(sl[i], sl[j]) != 1)
                .map(|&(i, j)| format!("ι({}, {}) ≠ 1", sl[i], sl[j]))
        }
    };
    clauses.push(clause("boundary_slopes", slope_bad));
    FillableReport {
        clauses,
        hexagon: Some(hex),
    }
}

/// Cyclic relabelling count of `Δ1, Δ2` that makes `g` the slope `p_0`.
pub fn relabel_cycles(hex: &Hexagon, p0: Slope) -> Option<usize> {
    let [f, g, h] = hex.slopes?;
    if p0 == g {
        Some(0)
    } else if p0 == f {
        Some(1)
    } else if p0 == h {
        Some(2)
    } else {
        None
    }
}

/// NZ data after filling, from the matrix construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilledSystem {
    pub nz: NzSystem,
    pub b: SignVector,
    /// Original tetrahedron index for kept tetrahedra, `None` for layered ones.
    pub origin: Vec<Option<usize>>,
    /// Display names, `Δj` or `Δ_{o_k}`.
    pub tet_names: Vec<String>,
}

/// Builds `NZ(r)`, `C(r)` and `B(r)` from the unfilled system.
///
/// `e_label` names the edge into the filled cusp; `tets` are `Δ1, Δ2`.
/// Requires `B` to vanish on `Δ1, Δ2` and the c-edge row `g` to carry the
/// slope `p_0` (see [`relabel_cycles`]).
pub fn assemble_filled(
    s: &NzSystem,
    b: &SignVector,
    walk: &FareyWalk,
    cusp: usize,
    tets: [usize; 2],
    e_label: &str,
) -> Result<FilledSystem, FillError> {
    let pre = |m: String| FillError::Precondition(m);
    if !s.satisfied_by(b) {
        return Err(pre("B does not solve NZ·B = C".into()));
    }
    if [b.b(tets[0]), b.b_prime(tets[0]), b.b(tets[1]), b.b_prime(tets[1])] != [0; 4] {
        return Err(pre("B is not zero on Δ1, Δ2".into()));
    }
    let e = s
        .edge_index(e_label)
        .ok_or_else(|| pre(format!("no edge row `{e_label}`")))?;
    let find = |p: [i64; 4]| s.edge_rows.iter().position(|r| at(r, tets) == p);
    let (f, g, h) = match (find([0, 1, 0, 1]), find([-1, -1, -1, -1]), find([1, 0, 1, 0])) {
        (Some(f), Some(g), Some(h)) => (f, g, h),
        _ => return Err(pre("rows f, g, h not found at Δ1, Δ2".into())),
    };
    let slope_of = |k: usize| {
        s.edge_rows[k]
            .label
            .parse::<Slope>()
            .map_err(|_| pre(format!("row {} is not labelled by a slope", s.edge_rows[k].label)))
    };
    let mut row_of: HashMap<Slope, usize> = HashMap::new();
    for k in [f, g, h] {
        row_of.insert(slope_of(k)?, k);
    }
    let mut initial = walk.initial.to_vec();
    initial.sort();
    let mut have: Vec<Slope> = row_of.keys().copied().collect();
    have.sort();
    if initial != have {
        return Err(pre("walk does not start at the boundary slopes".into()));
    }
    let first = walk.steps[0];
    if slope_of(g)? != first.p {
        return Err(pre(format!(
            "c-edge row is {}, but p_0 = {}; relabel Δ1, Δ2 first",
            s.edge_rows[g].label, first.p
        )));
    }

    let keep: Vec<usize> = (0..s.n).filter(|j| !tets.contains(j)).collect();
    let restrict = |r: &NzRow| -> Vec<i64> {
        keep.iter().flat_map(|&j| [r.coeffs[2 * j], r.coeffs[2 * j + 1]]).collect()
    };

    // NZ_0 and C_0.
    let mut index: Vec<Option<usize>> = vec![None; s.edge_rows.len()];
    let mut rows: Vec<NzRow> = Vec::new();
    for (k, r) in s.edge_rows.iter().enumerate() {
        if k == e {
            continue;
        }
        index[k] = Some(rows.len());
        rows.push(NzRow {
            kind: RowKind::Edge,
            label: r.label.clone(),
            coeffs: restrict(r),
            c: r.c,
        });
    }
    let mut row_of: HashMap<Slope, usize> = row_of.into_iter().map(|(sl, k)| (sl, index[k].unwrap())).collect();
    rows[row_of[&first.p]].c += 2;
    let mut cusp_rows: Vec<NzRow> = Vec::new();
    for r in &s.cusp_rows {
        let kind = match r.kind {
            RowKind::Meridian(k) | RowKind::Longitude(k) if k == cusp => continue,
            RowKind::Meridian(k) => RowKind::Meridian(if k > cusp { k - 1 } else { k }),
            RowKind::Longitude(k) => RowKind::Longitude(if k > cusp { k - 1 } else { k }),
            RowKind::Edge => unreachable!(),
        };
        let label = match kind {
            RowKind::Meridian(k) => format!("m{k}"),
            RowKind::Longitude(k) => format!("l{k}"),
            RowKind::Edge => unreachable!(),
        };
        cusp_rows.push(NzRow {
            kind,
            label,
            coeffs: restrict(r),
            c: r.c,
        });
    }
    let mut tet_edges: Option<Vec<[usize; 6]>> = s.tet_edges.as_ref().map(|te| {
        keep.iter()
            .map(|&j| te[j].map(|k| index[k].expect("kept tetrahedra avoid e")))
            .collect()
    });
    let mut origin: Vec<Option<usize>> = keep.iter().map(|&j| Some(j)).collect();
    let mut tet_names: Vec<String> = keep.iter().map(|j| format!("Δ{j}")).collect();
    let mut bv: Vec<i64> = keep.iter().flat_map(|&j| [b.b(j), b.b_prime(j)]).collect();

    // One column pair and one new edge row per layered tetrahedron.
    for (k, w) in walk.steps[..walk.n()].iter().enumerate() {
        for r in rows.iter_mut().chain(cusp_rows.iter_mut()) {
            r.coeffs.extend([0, 0]);
        }
        let width = rows[0].coeffs.len();
        let mut new_row = vec![0i64; width];
        new_row[width - 2] = 1;
        let (o, p, sr) = (row_of[&w.o], row_of[&w.p], row_of[&w.s]);
        rows[o].coeffs[width - 2] = 1;
        rows[p].coeffs[width - 2] = -2;
        rows[p].coeffs[width - 1] = -2;
        rows[sr].coeffs[width - 1] = 2;
        rows[p].c -= 2;
        let hr = rows.len();
        rows.push(NzRow {
            kind: RowKind::Edge,
            label: w.h.to_string(),
            coeffs: new_row,
            c: 2,
        });
        row_of.insert(w.h, hr);
        if let Some(te) = tet_edges.as_mut() {
            te.push([o, sr, p, p, sr, hr]);
        }
        origin.push(None);
        tet_names.push(format!("Δ_{{{}}}", w.o));
        let sign = if k > 0 && walk.word[k - 1] == Letter::L { 1 } else { 0 };
        bv.extend([0, sign]);
    }

    // Fold: the rows of p_N and s_N become their sum.
    let (pn, sn) = walk.identified();
    let (a, z) = {
        let (x, y) = (row_of[&pn], row_of[&sn]);
        (x.min(y), x.max(y))
    };
    let merged: Vec<i64> = rows[a].coeffs.iter().zip(&rows[z].coeffs).map(|(x, y)| x + y).collect();
    rows[a].c += rows[z].c - 2;
    rows[a].coeffs = merged;
    rows.remove(z);
    let remap = |k: usize| -> usize {
        if k == z {
            a
        } else if k > z {
            k - 1
        } else {
            k
        }
    };
    if let Some(te) = tet_edges.as_mut() {
        for row in te.iter_mut() {
            *row = row.map(remap);
        }
    }

    let n = keep.len() + walk.n();
    let cusp_count = s.cusp_count - 1;
    let mut dropped: Vec<usize> = Vec::new();
    for &d in &s.dropped {
        if let Some(k) = index[d] {
            let k = remap(k);
            if !dropped.contains(&k) {
                dropped.push(k);
            }
        }
    }
    dropped.truncate(cusp_count);
    let mut fill = rows.len();
    while dropped.len() < cusp_count && fill > 0 {
        fill -= 1;
        if !dropped.contains(&fill) {
            dropped.push(fill);
        }
    }
    dropped.sort_unstable();

    let nz = NzSystem {
        n,
        cusp_count,
        edge_rows: rows,
        cusp_rows,
        dropped,
        tet_edges,
    };
    let b = SignVector(bv);
    if mat_vec(&nz.matrix(), &b.0) != nz.c_vector() {
        return Err(FillError::Mismatch("NZ(r)·B(r) ≠ C(r)".into()));
    }
    Ok(FilledSystem {
        nz,
        b,
        origin,
        tet_names,
    })
}

/// Slopes of the three edges of a face, keyed by the vertex opposite each
/// edge within the face.
fn face_slopes(edge_slope: &dyn Fn(usize, usize) -> Option<Slope>, tet: usize, u: u8) -> Option<[(u8, Slope); 3]> {
    let fv = face_vertices(u);
    let mut out = [(0u8, Slope::INFINITY); 3];
    for (i, &v) in fv.iter().enumerate() {
        let others: Vec<u8> = fv.iter().copied().filter(|&w| w != v).collect();
        out[i] = (v, edge_slope(tet, edge_index(others[0], others[1]))?);
    }
    Some(out)
}

/// Gluing of face `(ta, ua)` onto `(tb, ub)` sending the edge of slope `x`
/// to the edge of slope `sigma(x)`.
fn match_faces(
    edge_slope: &dyn Fn(usize, usize) -> Option<Slope>,
    (ta, ua): (usize, u8),
    (tb, ub): (usize, u8),
    sigma: &dyn Fn(Slope) -> Slope,
) -> Option<Perm> {
    let fa = face_slopes(edge_slope, ta, ua)?;
    let fb = face_slopes(edge_slope, tb, ub)?;
    let mut img = [0u8; 4];
    img[ua as usize] = ub;
    for (v, x) in fa {
        let (w, _) = fb.iter().find(|(_, y)| *y == sigma(x))?;
        img[v as usize] = *w;
    }
    Perm::new(img)
}

/// The filled triangulation itself: `Δ1, Δ2` removed, a layered solid torus
/// glued on and folded. Tetrahedra keep their order, layered ones follow.
///
/// Edge classes take the earliest name among their members, ranked by row
/// order in `names` for old classes and by birth for new slopes.
pub fn filled_triangulation(
    t: &Triangulation,
    hex: &Hexagon,
    walk: &FareyWalk,
    names: &NzSystem,
) -> Result<Triangulation, FillError> {
    let [sf, sg, sh] = hex
        .slopes
        .ok_or_else(|| FillError::Precondition("boundary edges are not labelled by slopes".into()))?;
    let class_slope: HashMap<usize, Slope> = [(hex.f, sf), (hex.g, sg), (hex.h, sh)].into_iter().collect();
    let keep: Vec<usize> = (0..t.n()).filter(|j| !hex.tets.contains(j)).collect();
    let mut new_index: Vec<Option<usize>> = vec![None; t.n()];
    for (i, &j) in keep.iter().enumerate() {
        new_index[j] = Some(i);
    }
    let nk = keep.len();
    let n = nk + walk.n();
    let lst: Vec<[Slope; 6]> = walk.steps[..walk.n()]
        .iter()
        .map(|w| [w.o, w.s, w.p, w.p, w.s, w.h])
        .collect();
    let edge_slope = |tet: usize, e: usize| -> Option<Slope> {
        if tet < nk {
            class_slope.get(&t.edge_of(keep[tet], e)).copied()
        } else {
            Some(lst[tet - nk][e])
        }
    };

    let mut gluings: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    let mut boundary: Vec<(usize, u8)> = Vec::new();
    for (i, &j) in keep.iter().enumerate() {
        for u in 0..4u8 {
            let g = t.gluing(j, u);
            match new_index[g.tet] {
                Some(target) => gluings[i][u as usize] = Some(Gluing { tet: target, perm: g.perm }),
                None => boundary.push((i, u)),
            }
        }
    }
    if boundary.len() != 2 {
        return Err(FillError::Precondition(format!(
            "{} faces border Δ1 ∪ Δ2; expected 2",
            boundary.len()
        )));
    }
    let mut set = |a: (usize, u8), b: (usize, u8), p: Perm| {
        gluings[a.0][a.1 as usize] = Some(Gluing { tet: b.0, perm: p });
        gluings[b.0][b.1 as usize] = Some(Gluing {
            tet: a.0,
            perm: p.inverse(),
        });
    };
    let id = |x: Slope| x;
    for k in 0..walk.n() {
        let tet = nk + k;
        let (x, y) = (boundary[0], boundary[1]);
        let mut done = false;
        for (fa, fb) in [(x, y), (y, x)] {
            let p3 = match_faces(&edge_slope, (tet, 3), fa, &id);
            let p2 = match_faces(&edge_slope, (tet, 2), fb, &id);
            if let (Some(p3), Some(p2)) = (p3, p2) {
                if p3.is_odd() && p2.is_odd() {
                    set((tet, 3), fa, p3);
                    set((tet, 2), fb, p2);
                    done = true;
                    break;
                }
            }
        }
        if !done {
            return Err(FillError::Mismatch(format!("layer {k} admits no orientation-reversing gluing")));
        }
        boundary = vec![(tet, 1), (tet, 0)];
    }
    let (pn, sn) = walk.identified();
    let swap = |x: Slope| {
        if x == pn {
            sn
        } else if x == sn {
            pn
        } else {
            x
        }
    };
    let fold = match_faces(&edge_slope, boundary[0], boundary[1], &swap)
        .filter(|p| p.is_odd())
        .ok_or_else(|| FillError::Mismatch("fold is not orientation reversing".into()))?;
    set(boundary[0], boundary[1], fold);
    let gluings: Vec<[Gluing; 4]> = gluings
        .into_iter()
        .map(|faces| faces.map(|g| g.expect("every face glued")))
        .collect();

    let bare = Triangulation::new(gluings.clone(), Vec::new(), BTreeMap::new())?;
    let mut curves = Vec::new();
    for c in t.curves().iter().filter(|c| c.cusp != hex.cusp) {
        let mut steps = c.steps.clone();
        for st in &mut steps {
            st.tet = new_index[st.tet].ok_or_else(|| {
                FillError::Precondition(format!("{} of cusp {} meets Δ1 or Δ2", c.kind.short_name(), c.cusp))
            })?;
        }
        let cusp = bare.cusp_of(steps[0].tet, steps[0].vertex);
        curves.push(PeripheralCurve {
            cusp,
            kind: c.kind,
            steps,
        });
    }
    curves.sort_by_key(|c| (c.cusp, c.kind != CurveKind::Meridian));

    let mut best: BTreeMap<usize, ((usize, usize), String, (usize, usize))> = BTreeMap::new();
    for (class, cl) in bare.edge_classes().iter().enumerate() {
        for m in &cl.members {
            let candidate = if m.tet < nk {
                let name = t.edge_label(t.edge_of(keep[m.tet], m.edge));
                let rank = names.edge_index(&name).unwrap_or(usize::MAX);
                Some(((0, rank), name))
            } else if m.edge == 5 {
                let k = m.tet - nk;
                Some(((1, k), walk.steps[k].h.to_string()))
            } else {
                None
            };
            if let Some((key, name)) = candidate {
                let better = best.get(&class).map_or(true, |(k, _, _)| key < *k);
                if better {
                    best.insert(class, (key, name, (m.tet, m.edge)));
                }
            }
        }
    }
    let labels: BTreeMap<(usize, usize), String> = best.into_values().map(|(_, name, at)| (at, name)).collect();
    Ok(Triangulation::new(gluings, curves, labels)?)
}

/// Row-by-row comparison keyed by edge label.
pub fn systems_agree(a: &NzSystem, b: &NzSystem) -> Result<(), String> {
    if a.n != b.n || a.cusp_count != b.cusp_count {
        return Err(format!("sizes ({}, {}) vs ({}, {})", a.n, a.cusp_count, b.n, b.cusp_count));
    }
    if a.edge_rows.len() != b.edge_rows.len() {
        return Err("edge row counts differ".into());
    }
    for r in &a.edge_rows {
        let k = b.edge_index(&r.label).ok_or_else(|| format!("edge {} missing", r.label))?;
        let q = &b.edge_rows[k];
        if q.coeffs != r.coeffs || q.c != r.c {
            return Err(format!("edge {}: {:?} C={} vs {:?} C={}", r.label, r.coeffs, r.c, q.coeffs, q.c));
        }
    }
    for (r, q) in a.cusp_rows.iter().zip(&b.cusp_rows) {
        if r.kind != q.kind || r.coeffs != q.coeffs || r.c != q.c {
            return Err(format!("cusp row {} differs", r.label));
        }
    }
    if let (Some(ta), Some(tb)) = (&a.tet_edges, &b.tet_edges) {
        for (j, (x, y)) in ta.iter().zip(tb).enumerate() {
            let la: Vec<&str> = x.iter().map(|&k| a.edge_rows[k].label.as_str()).collect();
            let lb: Vec<&str> = y.iter().map(|&k| b.edge_rows[k].label.as_str()).collect();
            if la != lb {
                return Err(format!("tetrahedron {j}: {la:?} vs {lb:?}"));
            }
        }
    }
    Ok(())
}

/// Everything produced by filling one cusp along one slope.
#[derive(Clone, Debug)]
pub struct Filling {
    pub walk: FareyWalk,
    pub hexagon: Hexagon,
    /// Unfilled triangulation after relabelling `Δ1, Δ2`.
    pub triangulation: Triangulation,
    /// Times `Δ1, Δ2` were cycled by a → b → c.
    pub cycles: usize,
    pub unfilled: NzSystem,
    /// Sign vector of the unfilled system, zero on `Δ1, Δ2`.
    pub b: SignVector,
    pub filled: FilledSystem,
    pub filled_triangulation: Triangulation,
}

/// Checks, walks, relabels, solves for `B` and fills by both routes,
/// failing if they disagree.
pub fn fill(t: &Triangulation, cusp: usize, r: Slope) -> Result<Filling, FillError> {
    let report = check_fillable(t, cusp);
    if !report.all_passed() {
        return Err(FillError::NotFillable(report.failures().join(", ")));
    }
    let hex = report.hexagon.unwrap();
    let walk = farey_walk(hex.slopes.unwrap(), r)?;
    let cycles = relabel_cycles(&hex, walk.steps[0].p).expect("p_0 is a boundary slope");
    let mut prepared = t.clone();
    let mut p = Perm::IDENTITY;
    for _ in 0..cycles {
        p = Perm::CYCLE_ABC.compose(p);
    }
    if cycles > 0 {
        for &j in &hex.tets {
            prepared = prepared.relabel_tet(j, p)?;
        }
    }
    let hex = hexagon_of(&prepared, cusp).map_err(FillError::NotFillable)?;
    let unfilled = NzSystem::from_triangulation(&prepared)?;
    let b = adjust_sign_vector_zero_at(&solve_system(&unfilled)?, &unfilled, hex.tets[0], hex.tets[1])?;
    let e_label = unfilled.edge_rows[hex.e].label.clone();
    let filled = assemble_filled(&unfilled, &b, &walk, cusp, hex.tets, &e_label)?;
    let tri = filled_triangulation(&prepared, &hex, &walk, &unfilled)?;
    let direct = NzSystem::from_triangulation(&tri)?;
    systems_agree(&filled.nz, &direct).map_err(FillError::Mismatch)?;
    Ok(Filling {
        walk,
        hexagon: hex,
        triangulation: prepared,
        cycles,
        unfilled,
        b,
        filled,
        filled_triangulation: tri,
    })
}

impl Filling {
    /// Equations of the tetrahedra outside the layered solid torus, from the
    /// unfilled data.
    pub fn outside_equations(&self) -> Result<PtolemySystem, FillError> {
        let s = &self.unfilled;
        if s.cusp_count != 2 {
            return Err(PtolemyError::MultiCusp(s.cusp_count - 1).into());
        }
        let other = 1 - self.hexagon.cusp;
        let tets: Vec<usize> = (0..s.n).filter(|j| !self.hexagon.tets.contains(j)).collect();
        let mut p = equations_for(s, &self.b, other, &tets)?;
        p.normalized.clear();
        Ok(p)
    }

    /// Outside equations together with those of the layered solid torus,
    /// normalized like the filled system.
    pub fn combined_ptolemy(&self) -> Result<PtolemySystem, FillError> {
        let mut p = self.outside_equations()?;
        p.absorb(&lst_ptolemy(&self.walk));
        if let Some(&d) = self.filled.nz.dropped.first() {
            let k = p.intern(&self.filled.nz.edge_rows[d].label);
            p.normalized = vec![k];
        }
        Ok(p)
    }

    /// Equations generated directly from `NZ(r)` and `B(r)`.
    pub fn filled_ptolemy(&self) -> Result<PtolemySystem, FillError> {
        let mut p = ptolemy_equations(&self.filled.nz, &self.filled.b)?;
        for (eq, name) in p.equations.iter_mut().zip(&self.filled.tet_names) {
            eq.label = Some(name.clone());
        }
        Ok(p)
    }

    pub fn check_filled(&self) -> crate::nz_core::NzReport {
        check_nz_properties(&self.filled.nz)
    }
}
