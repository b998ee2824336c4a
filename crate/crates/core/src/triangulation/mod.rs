//! Labelled ideal triangulations.
//!
//! Faces are indexed by their opposite vertex, so face `F012` is face 3.
//! A gluing of face `u` of tetrahedron `t` records the target tetrahedron
//! and the vertex permutation; the target face is the one opposite
//! `perm(u)`.

pub mod curves;
pub mod format;
pub mod perm;

use std::collections::BTreeMap;

pub use curves::{
    curve_incidence, enumerate_closed_curves, CornerStep, CurveError, CurveIncidence, CurveKind,
    PeripheralCurve,
};
pub use format::parse_gluing_table;
pub use perm::Perm;

/// Tetrahedron edges in canonical order.
pub const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Oriented labelling: a-edges are 01 and 23, b-edges 02 and 13, c-edges 03 and 12.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    A,
    B,
    C,
}

pub const EDGE_TYPES: [EdgeType; 6] = [
    EdgeType::A,
    EdgeType::B,
    EdgeType::C,
    EdgeType::C,
    EdgeType::B,
    EdgeType::A,
];

impl EdgeType {
    pub fn index(self) -> usize {
        match self {
            EdgeType::A => 0,
            EdgeType::B => 1,
            EdgeType::C => 2,
        }
    }
}

pub fn edge_index(u: u8, v: u8) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    EDGES
        .iter()
        .position(|&e| e == (a, b))
        .expect("edge endpoints must be distinct vertices 0..4")
}

pub fn edge_name(tet: usize, edge: usize) -> String {
    let (a, b) = EDGES[edge];
    format!("{tet}({a}{b})")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMember {
    pub tet: usize,
    pub edge: usize,
    /// Orientation relative to the first member of the class.
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub id: usize,
    pub members: Vec<EdgeMember>,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspTriangle {
    pub tet: usize,
    pub vertex: u8,
    /// For each corner vertex `w != vertex`: (w, edge class of edge vertex–w).
    pub corners: Vec<(u8, usize)>,
    /// For each side, named by its opposite corner `w`: (w, neighbour triangle index, neighbour's opposite corner).
    pub neighbours: Vec<(u8, usize, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspTriangulation {
    pub cusp: usize,
    pub triangles: Vec<CuspTriangle>,
    pub vertex_count: usize,
}

impl CuspTriangulation {
    pub fn euler_characteristic(&self) -> i64 {
        let f = self.triangles.len() as i64;
        self.vertex_count as i64 - 3 * f / 2 + f
    }
}

/// Rows indexed by edge class, columns by tetrahedron, entries (a, b, c).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub n: usize,
    pub entries: Vec<Vec<[i64; 3]>>,
}

impl IncidenceMatrix {
    pub fn get(&self, k: usize, j: usize) -> [i64; 3] {
        self.entries[k][j]
    }

    /// Row k as (a_{k,1}, b_{k,1}, c_{k,1}, …).
    pub fn row(&self, k: usize) -> Vec<i64> {
        self.entries[k].iter().flat_map(|t| t.iter().copied()).collect()
    }

    pub fn c_total(&self, k: usize) -> i64 {
        self.entries[k].iter().map(|t| t[2]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("empty triangulation")]
    Empty,
    #[error("boundary faces unsupported: face {face} of tetrahedron {tet} is unglued")]
    BoundaryFace { tet: usize, face: String },
    #[error("face {face} of tetrahedron {tet} is glued to itself")]
    SelfGluedFace { tet: usize, face: String },
    #[error("gluing of face {face} of tetrahedron {tet} is not an involution")]
    NotInvolutive { tet: usize, face: String },
    #[error("gluing of face {face} of tetrahedron {tet} preserves orientation")]
    OrientationViolation { tet: usize, face: String },
    #[error("gluing target tetrahedron {target} out of range")]
    TargetOutOfRange { target: usize },
    #[error("edge {edge} is identified with itself reversed")]
    NonOrientableEdge { edge: String },
    #[error("{edges} edge classes for {tets} tetrahedra")]
    EdgeCount { edges: usize, tets: usize },
    #[error("cusp {cusp} has Euler characteristic {euler}")]
    CuspEuler { cusp: usize, euler: i64 },
    #[error("curve {index}: {source}")]
    Curve { index: usize, source: CurveError },
    #[error("conflicting labels {first} and {second} on edge class {class}")]
    LabelConflict {
        class: usize,
        first: String,
        second: String,
    },
    #[error("label key {key} is not a tetrahedron edge")]
    LabelKey { key: String },
    #[error("relabelling of tetrahedron {tet} must be an even permutation")]
    OddRelabelling { tet: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    curves: Vec<PeripheralCurve>,
    labels: BTreeMap<(usize, usize), String>,
    edge_of: Vec<[usize; 6]>,
    classes: Vec<EdgeClass>,
    cusp_of: Vec<[usize; 4]>,
    cusp_count: usize,
}

struct UnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Joins x and y with relative parity `rel`; false on a parity conflict.
    fn union(&mut self, x: usize, y: usize, rel: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == rel;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        self.parity[hi] = px ^ py ^ rel;
        true
    }
}

pub(crate) fn face_name(u: u8) -> String {
    let f = perm::face_vertices(u);
    format!("F{}{}{}", f[0], f[1], f[2])
}

impl Triangulation {
    /// Validates a closed gluing table and computes edge classes and cusps.
    pub fn new(
        gluings: Vec<[Gluing; 4]>,
        curves: Vec<PeripheralCurve>,
        labels: BTreeMap<(usize, usize), String>,
    ) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        for (t, faces) in gluings.iter().enumerate() {
            for u in 0..4u8 {
                let g = faces[u as usize];
                if g.tet >= n {
                    return Err(TriangulationError::TargetOutOfRange { target: g.tet });
                }
                let back = gluings[g.tet][g.perm.apply(u) as usize];
                if g.tet == t && g.perm.apply(u) == u {
                    return Err(TriangulationError::SelfGluedFace {
                        tet: t,
                        face: face_name(u),
                    });
                }
                if back.tet != t || back.perm.compose(g.perm) != Perm::IDENTITY {
                    return Err(TriangulationError::NotInvolutive {
                        tet: t,
                        face: face_name(u),
                    });
                }
                if !g.perm.is_odd() {
                    return Err(TriangulationError::OrientationViolation {
                        tet: t,
                        face: face_name(u),
                    });
                }
            }
        }

        let mut uf = UnionFind::new(6 * n);
        for (t, faces) in gluings.iter().enumerate() {
            for u in 0..4u8 {
                let g = faces[u as usize];
                let fv = perm::face_vertices(u);
                for i in 0..3 {
                    for j in i + 1..3 {
                        let (a, b) = (fv[i], fv[j]);
                        let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                        let x = 6 * t + edge_index(a, b);
                        let y = 6 * g.tet + edge_index(pa, pb);
                        if !uf.union(x, y, pa > pb) {
                            return Err(TriangulationError::NonOrientableEdge {
                                edge: edge_name(t, edge_index(a, b)),
                            });
                        }
                    }
                }
            }
        }
        let mut root_to_class: BTreeMap<usize, usize> = BTreeMap::new();
        let mut edge_of = vec![[0usize; 6]; n];
        let mut classes: Vec<EdgeClass> = Vec::new();
        for (t, row) in edge_of.iter_mut().enumerate() {
            for (e, slot) in row.iter_mut().enumerate() {
                let (root, par) = uf.find(6 * t + e);
                let next = root_to_class.len();
                let k = *root_to_class.entry(root).or_insert(next);
                if k == classes.len() {
                    classes.push(EdgeClass {
                        id: k,
                        members: Vec::new(),
                        label: None,
                    });
                }
                *slot = k;
                classes[k].members.push(EdgeMember {
                    tet: t,
                    edge: e,
                    reversed: par,
                });
            }
        }
        for c in classes.iter_mut() {
            let first = c.members[0].reversed;
            for m in c.members.iter_mut() {
                m.reversed ^= first;
            }
        }
        if classes.len() != n {
            return Err(TriangulationError::EdgeCount {
                edges: classes.len(),
                tets: n,
            });
        }

        for (&(t, e), name) in &labels {
            if t >= n || e >= 6 {
                return Err(TriangulationError::LabelKey {
                    key: format!("{t}:{e}"),
                });
            }
            let k = edge_of[t][e];
            match &classes[k].label {
                Some(prev) if prev != name => {
                    return Err(TriangulationError::LabelConflict {
                        class: k,
                        first: prev.clone(),
                        second: name.clone(),
                    })
                }
                _ => classes[k].label = Some(name.clone()),
            }
        }

        let mut cuf = UnionFind::new(4 * n);
        for (t, faces) in gluings.iter().enumerate() {
            for u in 0..4u8 {
                let g = faces[u as usize];
                for v in perm::face_vertices(u) {
                    cuf.union(4 * t + v as usize, 4 * g.tet + g.perm.apply(v) as usize, false);
                }
            }
        }
        let mut root_to_cusp: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cusp_of = vec![[0usize; 4]; n];
        for (t, row) in cusp_of.iter_mut().enumerate() {
            for (v, slot) in row.iter_mut().enumerate() {
                let (root, _) = cuf.find(4 * t + v);
                let next = root_to_cusp.len();
                *slot = *root_to_cusp.entry(root).or_insert(next);
            }
        }
        let cusp_count = root_to_cusp.len();

        let tri = Triangulation {
            gluings,
            curves,
            labels,
            edge_of,
            classes,
            cusp_of,
            cusp_count,
        };
        for ct in tri.cusp_triangulations() {
            let chi = ct.euler_characteristic();
            if chi != 0 {
                return Err(TriangulationError::CuspEuler {
                    cusp: ct.cusp,
                    euler: chi,
                });
            }
        }
        for (i, c) in tri.curves.iter().enumerate() {
            curves::validate_curve(&tri, c)
                .map_err(|source| TriangulationError::Curve { index: i, source })?;
        }
        Ok(tri)
    }

    pub fn n(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    pub fn cusp_count(&self) -> usize {
        self.cusp_count
    }

    pub fn cusp_of(&self, tet: usize, vertex: u8) -> usize {
        self.cusp_of[tet][vertex as usize]
    }

    pub fn edge_of(&self, tet: usize, edge: usize) -> usize {
        self.edge_of[tet][edge]
    }

    /// Edge class of each of the six edges of every tetrahedron.
    pub fn edge_table(&self) -> &[[usize; 6]] {
        &self.edge_of
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    /// Label of an edge class, defaulting to `t(uv)` of its first member.
    pub fn edge_label(&self, k: usize) -> String {
        let c = &self.classes[k];
        c.label
            .clone()
            .unwrap_or_else(|| edge_name(c.members[0].tet, c.members[0].edge))
    }

    pub fn edge_labels(&self) -> Vec<String> {
        (0..self.n()).map(|k| self.edge_label(k)).collect()
    }

    pub fn labels(&self) -> &BTreeMap<(usize, usize), String> {
        &self.labels
    }

    pub fn curves(&self) -> &[PeripheralCurve] {
        &self.curves
    }

    pub fn curve(&self, cusp: usize, kind: CurveKind) -> Option<&PeripheralCurve> {
        self.curves
            .iter()
            .find(|c| c.cusp == cusp && c.kind == kind)
    }

    /// Same gluings and labels with a different set of peripheral curves.
    pub fn with_curves(&self, curves: Vec<PeripheralCurve>) -> Result<Self, TriangulationError> {
        Triangulation::new(self.gluings.clone(), curves, self.labels.clone())
    }

    pub fn with_labels(
        &self,
        labels: BTreeMap<(usize, usize), String>,
    ) -> Result<Self, TriangulationError> {
        Triangulation::new(self.gluings.clone(), self.curves.clone(), labels)
    }

    /// Tetrahedra whose vertices meet the given cusp, with multiplicity.
    pub fn cusp_vertices(&self, cusp: usize) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for t in 0..self.n() {
            for v in 0..4u8 {
                if self.cusp_of(t, v) == cusp {
                    out.push((t, v));
                }
            }
        }
        out
    }

    pub fn cusp_triangulations(&self) -> Vec<CuspTriangulation> {
        let n = self.n();
        let mut out = Vec::with_capacity(self.cusp_count);
        for cusp in 0..self.cusp_count {
            let verts = self.cusp_vertices(cusp);
            let index: BTreeMap<(usize, u8), usize> =
                verts.iter().enumerate().map(|(i, &tv)| (tv, i)).collect();
            let mut triangles = Vec::with_capacity(verts.len());
            for &(t, v) in &verts {
                let mut corners = Vec::with_capacity(3);
                let mut neighbours = Vec::with_capacity(3);
                for w in 0..4u8 {
                    if w == v {
                        continue;
                    }
                    corners.push((w, self.edge_of(t, edge_index(v, w))));
                    let g = self.gluing(t, w);
                    let nv = g.perm.apply(v);
                    neighbours.push((w, index[&(g.tet, nv)], g.perm.apply(w)));
                }
                triangles.push(CuspTriangle {
                    tet: t,
                    vertex: v,
                    corners,
                    neighbours,
                });
            }
            // Vertices of the cusp surface are classes of corners (t, v, w).
            let mut uf = UnionFind::new(16 * n);
            let key = |t: usize, v: u8, w: u8| 16 * t + 4 * v as usize + w as usize;
            for &(t, v) in &verts {
                for x in 0..4u8 {
                    if x == v {
                        continue;
                    }
                    let g = self.gluing(t, x);
                    for w in 0..4u8 {
                        if w != v && w != x {
                            uf.union(
                                key(t, v, w),
                                key(g.tet, g.perm.apply(v), g.perm.apply(w)),
                                false,
                            );
                        }
                    }
                }
            }
            let mut roots = std::collections::BTreeSet::new();
            for &(t, v) in &verts {
                for w in 0..4u8 {
                    if w != v {
                        roots.insert(uf.find(key(t, v, w)).0);
                    }
                }
            }
            out.push(CuspTriangulation {
                cusp,
                triangles,
                vertex_count: roots.len(),
            });
        }
        out
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let n = self.n();
        let mut entries = vec![vec![[0i64; 3]; n]; n];
        for t in 0..n {
            for e in 0..6 {
                entries[self.edge_of(t, e)][t][EDGE_TYPES[e].index()] += 1;
            }
        }
        IncidenceMatrix { n, entries }
    }

    /// Relabels the vertices of tetrahedron `tet`: old vertex v becomes `perm(v)`.
    /// Gluings, curves and labels are transported; `perm` must be even.
    pub fn relabel_tet(&self, tet: usize, perm: Perm) -> Result<Self, TriangulationError> {
        if perm.is_odd() {
            return Err(TriangulationError::OddRelabelling { tet });
        }
        let sigma = |s: usize| if s == tet { perm } else { Perm::IDENTITY };
        let n = self.n();
        let mut gluings = vec![[Gluing { tet: 0, perm: Perm::IDENTITY }; 4]; n];
        for s in 0..n {
            for u in 0..4u8 {
                let g = self.gluing(s, u);
                let new_perm = sigma(g.tet).compose(g.perm).compose(sigma(s).inverse());
                gluings[s][sigma(s).apply(u) as usize] = Gluing {
                    tet: g.tet,
                    perm: new_perm,
                };
            }
        }
        let curves = self
            .curves
            .iter()
            .map(|c| PeripheralCurve {
                cusp: c.cusp,
                kind: c.kind,
                steps: c
                    .steps
                    .iter()
                    .map(|st| CornerStep {
                        tet: st.tet,
                        vertex: sigma(st.tet).apply(st.vertex),
                        corner: sigma(st.tet).apply(st.corner),
                        dir: st.dir,
                    })
                    .collect(),
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|(&(s, e), name)| {
                let (a, b) = EDGES[e];
                let p = sigma(s);
                ((s, edge_index(p.apply(a), p.apply(b))), name.clone())
            })
            .collect();
        Triangulation::new(gluings, curves, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const WHITEHEAD: &str = "\
[gluings]
0: F012=3(021) F013=1(213) F023=2(130) F123=1(230)
1: F012=4(102) F013=2(132) F023=0(312) F123=0(103)
2: F012=2(203) F013=0(302) F023=2(102) F123=1(031)
3: F012=0(021) F013=4(103) F023=4(203) F123=4(213)
4: F012=1(102) F013=3(103) F023=3(203) F123=3(213)
";

    #[test]
    fn whitehead_edge_classes_and_cusps() {
        let t = parse_gluing_table(WHITEHEAD).unwrap();
        assert_eq!(t.n(), 5);
        assert_eq!(t.cusp_count(), 2);
        let cts = t.cusp_triangulations();
        assert_eq!(cts[1].triangles.len(), 2);
        assert_eq!(cts[0].triangles.len() + cts[1].triangles.len(), 20);
        for c in t.edge_classes() {
            assert!(!c.members.is_empty());
        }
    }

    #[test]
    fn incidence_column_sums() {
        let t = parse_gluing_table(WHITEHEAD).unwrap();
        let inc = t.incidence_matrix();
        for j in 0..5 {
            for x in 0..3 {
                let s: i64 = (0..5).map(|k| inc.get(k, j)[x]).sum();
                assert_eq!(s, 2);
            }
        }
    }

    #[test]
    fn relabel_roundtrip() {
        let t = parse_gluing_table(WHITEHEAD).unwrap();
        let r = t.relabel_tet(2, Perm::CYCLE_ABC).unwrap();
        let back = r
            .relabel_tet(2, Perm::CYCLE_ABC.inverse())
            .unwrap();
        assert_eq!(back, t);
    }
}
