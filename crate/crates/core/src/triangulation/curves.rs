//! Peripheral curves as sequences of corner-cutting arcs in cusp triangles.
//!
//! The cusp triangle at vertex `v` of a tetrahedron has one corner per
//! other vertex `w`. Viewed from `v`, corners `(w, x, y)` run anticlockwise
//! when `(v, w, x, y)` is an even arrangement. An arc turning anticlockwise
//! around corner `w` enters through the side opposite `y` and leaves through
//! the side opposite `x`.

use super::perm::is_even_arrangement;
use super::{edge_index, Triangulation, EDGE_TYPES};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerStep {
    pub tet: usize,
    pub vertex: u8,
    pub corner: u8,
    /// +1 anticlockwise, −1 clockwise.
    pub dir: i8,
}

impl CornerStep {
    pub fn reversed(self) -> CornerStep {
        CornerStep {
            dir: -self.dir,
            ..self
        }
    }

    /// The other two corners in anticlockwise order after `corner`.
    fn ccw_others(self) -> (u8, u8) {
        let mut others = (0..4u8).filter(|&u| u != self.vertex && u != self.corner);
        let x = others.next().unwrap();
        let y = others.next().unwrap();
        if is_even_arrangement(self.vertex, self.corner, x, y) {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Faces (named by opposite vertex) through which the arc enters and leaves.
    pub fn entry_exit(self) -> (u8, u8) {
        let (x, y) = self.ccw_others();
        if self.dir > 0 {
            (y, x)
        } else {
            (x, y)
        }
    }
}

impl fmt::Display for CornerStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.dir > 0 { "+1" } else { "-1" };
        write!(f, "({},{},{},{})", self.tet, self.vertex, self.corner, sign)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    Meridian,
    Longitude,
}

impl CurveKind {
    pub fn short_name(self) -> &'static str {
        match self {
            CurveKind::Meridian => "m",
            CurveKind::Longitude => "l",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralCurve {
    pub cusp: usize,
    pub kind: CurveKind,
    pub steps: Vec<CornerStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("step {index} is not a corner of a cusp triangle")]
    InvalidStep { index: usize },
    #[error("step {index} lies on cusp {found}, expected cusp {expected}")]
    WrongCusp {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("backtracking: step {index} is immediately reversed")]
    Backtracking { index: usize },
    #[error("step {index} does not continue across the side its predecessor leaves through")]
    Disconnected { index: usize },
    #[error("open curve: the last step does not lead back to the first")]
    OpenCurve,
}

/// Signed a/b/c counts per tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveIncidence {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
}

impl CurveIncidence {
    pub fn zeros(n: usize) -> Self {
        CurveIncidence {
            a: vec![0; n],
            b: vec![0; n],
            c: vec![0; n],
        }
    }

    pub fn c_total(&self) -> i64 {
        self.c.iter().sum()
    }

    /// NZ row (a−c, b−c) per tetrahedron.
    pub fn nz_row(&self) -> Vec<i64> {
        (0..self.a.len())
            .flat_map(|j| [self.a[j] - self.c[j], self.b[j] - self.c[j]])
            .collect()
    }
}

/// The arc that follows `step` after crossing the side it leaves through,
/// given as (tetrahedron, cusp vertex, entry face).
fn crossing(t: &Triangulation, step: CornerStep) -> (usize, u8, u8) {
    let (_, exit) = step.entry_exit();
    let g = t.gluing(step.tet, exit);
    (g.tet, g.perm.apply(step.vertex), g.perm.apply(exit))
}

fn step_is_valid(t: &Triangulation, s: CornerStep) -> bool {
    s.tet < t.n() && s.vertex < 4 && s.corner < 4 && s.vertex != s.corner && (s.dir == 1 || s.dir == -1)
}

pub(crate) fn validate_curve(t: &Triangulation, curve: &PeripheralCurve) -> Result<(), CurveError> {
    let steps = &curve.steps;
    for (i, &s) in steps.iter().enumerate() {
        if !step_is_valid(t, s) {
            return Err(CurveError::InvalidStep { index: i });
        }
        let found = t.cusp_of(s.tet, s.vertex);
        if found != curve.cusp {
            return Err(CurveError::WrongCusp {
                index: i,
                found,
                expected: curve.cusp,
            });
        }
    }
    let len = steps.len();
    for i in 0..len {
        let s = steps[i];
        let next = steps[(i + 1) % len];
        if len > 1 && next == s.reversed() {
            return Err(CurveError::Backtracking { index: (i + 1) % len });
        }
        let (tet, vertex, entry) = crossing(t, s);
        let ok = next.tet == tet && next.vertex == vertex && next.entry_exit().0 == entry;
        if !ok {
            return Err(if i + 1 == len {
                CurveError::OpenCurve
            } else {
                CurveError::Disconnected { index: i + 1 }
            });
        }
    }
    Ok(())
}

/// Signed counts of arcs around a-, b- and c-corners in each tetrahedron.
pub fn curve_incidence(t: &Triangulation, curve: &PeripheralCurve) -> Result<CurveIncidence, CurveError> {
    validate_curve(t, curve)?;
    let mut inc = CurveIncidence::zeros(t.n());
    for s in &curve.steps {
        let d = s.dir as i64;
        match EDGE_TYPES[edge_index(s.vertex, s.corner)] {
            super::EdgeType::A => inc.a[s.tet] += d,
            super::EdgeType::B => inc.b[s.tet] += d,
            super::EdgeType::C => inc.c[s.tet] += d,
        }
    }
    Ok(inc)
}

/// All closed arcs sequences on `cusp` with at most `max_steps` steps that
/// avoid the tetrahedra in `avoid` and never repeat a step. Each cyclic curve
/// is reported once, rotated to start at its smallest step.
pub fn enumerate_closed_curves(
    t: &Triangulation,
    cusp: usize,
    max_steps: usize,
    avoid: &[usize],
) -> Vec<Vec<CornerStep>> {
    let mut starts = Vec::new();
    for (tet, v) in t.cusp_vertices(cusp) {
        if avoid.contains(&tet) {
            continue;
        }
        for w in 0..4u8 {
            if w == v {
                continue;
            }
            for dir in [1i8, -1] {
                starts.push(CornerStep {
                    tet,
                    vertex: v,
                    corner: w,
                    dir,
                });
            }
        }
    }
    let successors = |s: CornerStep| -> Vec<CornerStep> {
        let (tet, vertex, entry) = crossing(t, s);
        let mut out = Vec::with_capacity(2);
        for corner in 0..4u8 {
            if corner == vertex || corner == entry {
                continue;
            }
            for dir in [1i8, -1] {
                let cand = CornerStep {
                    tet,
                    vertex,
                    corner,
                    dir,
                };
                if cand.entry_exit().0 == entry {
                    out.push(cand);
                }
            }
        }
        out
    };
    let mut found = Vec::new();
    let mut path: Vec<CornerStep> = Vec::new();
    fn dfs(
        path: &mut Vec<CornerStep>,
        max_steps: usize,
        avoid: &[usize],
        successors: &dyn Fn(CornerStep) -> Vec<CornerStep>,
        found: &mut Vec<Vec<CornerStep>>,
    ) {
        let last = *path.last().unwrap();
        for s in successors(last) {
            if avoid.contains(&s.tet) {
                continue;
            }
            if s == path[0] {
                found.push(path.clone());
                continue;
            }
            if s < path[0] || path.contains(&s) || path.len() >= max_steps {
                continue;
            }
            path.push(s);
            dfs(path, max_steps, avoid, successors, found);
            path.pop();
        }
    }
    for s in starts {
        path.clear();
        path.push(s);
        dfs(&mut path, max_steps, avoid, &successors, &mut found);
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}
