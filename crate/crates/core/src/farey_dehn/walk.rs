use super::slope::{intersection_number, Slope};
use crate::ptolemy_gen::{PtolemyEquation, PtolemySystem, PtolemyTerm};
use std::fmt::{self, Write};

/// Turn taken when stepping into the next Farey triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    L,
    R,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::L => "L",
            Letter::R => "R",
        })
    }
}

/// Slopes of step `k`: old `o`, port `p`, starboard `s` and heading `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub o: Slope,
    pub p: Slope,
    pub s: Slope,
    pub h: Slope,
}

/// Path through the Farey graph from an initial triangle to a filling slope.
///
/// `steps[k]` for `k = 0..=N`; step `k < N` adds the layered tetrahedron
/// `Δ_{o_k}`, step `N` is the fold. `word[k − 1]` is the letter of step `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyWalk {
    pub initial: [Slope; 3],
    pub target: Slope,
    pub steps: Vec<WalkStep>,
    pub word: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("{a} and {b} are not Farey neighbours")]
    NotFareyTriangle { a: Slope, b: Slope },
    #[error("slope {0} is a vertex of the initial triangle (extra-exceptional filling)")]
    ExtraExceptional(Slope),
    #[error("step {step}: slopes {a} and {b} tie for the largest intersection {iota} with the target")]
    Tie { step: usize, a: Slope, b: Slope, iota: u64 },
    #[error("walk exceeded {0} steps")]
    IterationCap(usize),
}

const MAX_STEPS: usize = 100_000;

/// Orders a Farey triangle anticlockwise as `(o, s, p)`: decreasing cyclic
/// order of slope values with `1/0` greatest.
fn orient(tri: [Slope; 3], o: Slope) -> (Slope, Slope) {
    let mut sorted = tri;
    sorted.sort_by(|a, b| b.cmp(a));
    let i = sorted.iter().position(|&x| x == o).unwrap();
    (sorted[(i + 1) % 3], sorted[(i + 2) % 3])
}

pub fn farey_walk(initial: [Slope; 3], r: Slope) -> Result<FareyWalk, WalkError> {
    for i in 0..3 {
        for j in i + 1..3 {
            if intersection_number(initial[i], initial[j]) != 1 {
                return Err(WalkError::NotFareyTriangle {
                    a: initial[i],
                    b: initial[j],
                });
            }
        }
    }
    if initial.contains(&r) {
        return Err(WalkError::ExtraExceptional(r));
    }
    let mut tri = initial;
    let mut steps: Vec<WalkStep> = Vec::new();
    loop {
        let k = steps.len();
        if k >= MAX_STEPS {
            return Err(WalkError::IterationCap(MAX_STEPS));
        }
        let iota = tri.map(|x| intersection_number(x, r));
        let best = *iota.iter().max().unwrap();
        let at: Vec<usize> = (0..3).filter(|&i| iota[i] == best).collect();
        if at.len() > 1 {
            return Err(WalkError::Tie {
                step: k,
                a: tri[at[0]],
                b: tri[at[1]],
                iota: best,
            });
        }
        let o = tri[at[0]];
        let (s, p) = orient(tri, o);
        let h = [s.plus(p), s.minus(p)]
            .into_iter()
            .flatten()
            .find(|&x| x != o)
            .expect("Farey neighbours have two distinct mediants");
        steps.push(WalkStep { o, p, s, h });
        if h == r {
            break;
        }
        tri = [p, s, h];
    }
    let word = letters(&steps).expect("consecutive steps share a Farey edge");
    Ok(FareyWalk {
        initial,
        target: r,
        steps,
        word,
    })
}

/// Letters recovered from the `o/p/s` tracks: step `k` is L when
/// `o_k = s_{k−1}, p_k = p_{k−1}, s_k = h_{k−1}`, and R when
/// `o_k = p_{k−1}, p_k = h_{k−1}, s_k = s_{k−1}`.
pub fn letters(steps: &[WalkStep]) -> Option<Vec<Letter>> {
    steps
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if b.o == a.s && b.p == a.p && b.s == a.h {
                Some(Letter::L)
            } else if b.o == a.p && b.p == a.h && b.s == a.s {
                Some(Letter::R)
            } else {
                None
            }
        })
        .collect()
}

impl FareyWalk {
    /// Number of layered tetrahedra.
    pub fn n(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.n() == 0
    }

    pub fn last(&self) -> WalkStep {
        *self.steps.last().unwrap()
    }

    pub fn fold_edge(&self) -> Slope {
        self.last().o
    }

    /// The pair `(p_N, s_N)` identified by the fold.
    pub fn identified(&self) -> (Slope, Slope) {
        let w = self.last();
        (w.p, w.s)
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|l| l.to_string()).collect()
    }

    /// Triangles `T_0, …, T_{N+1}`.
    pub fn triangles(&self) -> Vec<[Slope; 3]> {
        let mut out: Vec<[Slope; 3]> = self.steps.iter().map(|w| [w.o, w.s, w.p]).collect();
        let w = self.last();
        out.push([w.h, w.s, w.p]);
        out
    }

    /// Slopes in order of appearance: the initial three, then `h_0, h_1, …`.
    pub fn slopes_by_birth(&self) -> Vec<Slope> {
        let mut out = self.initial.to_vec();
        out.extend(self.steps.iter().map(|w| w.h));
        out
    }

    /// Table with one row per layered tetrahedron, then word and fold.
    pub fn table(&self) -> String {
        let mut rows: Vec<[String; 6]> = vec![["k", "o", "p", "s", "h", "letter"].map(String::from)];
        for (k, w) in self.steps[..self.n()].iter().enumerate() {
            let letter = if k == 0 { "-".to_string() } else { self.word[k - 1].to_string() };
            rows.push([
                k.to_string(),
                w.o.to_string(),
                w.p.to_string(),
                w.s.to_string(),
                w.h.to_string(),
                letter,
            ]);
        }
        let widths: Vec<usize> = (0..6)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap())
            .collect();
        let mut out = String::new();
        for r in &rows {
            let cells: Vec<String> = (0..6).map(|c| format!("{:<w$}", r[c], w = widths[c])).collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        let word = if self.word.is_empty() {
            "(empty)".to_string()
        } else {
            self.word_string()
        };
        writeln!(out, "word {word}").unwrap();
        let (p, s) = self.identified();
        writeln!(out, "fold {}; identify {}={}", self.fold_edge(), p, s).unwrap();
        out
    }
}

fn gamma_term(sys: &mut PtolemySystem, sign: i8, a: Slope, b: Slope) -> PtolemyTerm {
    let x = sys.intern(&a.to_string());
    let y = sys.intern(&b.to_string());
    PtolemyTerm {
        sign,
        l_exp: 0,
        m_exp: 0,
        gammas: (x.min(y), x.max(y)),
    }
}

/// Equations of the layered solid torus plus the fold identification.
///
/// Tetrahedron `Δ_{o_k}` contributes `±γ_{o_k}γ_{h_k} + γ_{s_k}² − γ_{p_k}² = 0`
/// with `−` exactly when `k > 0` and letter `k` is L.
pub fn lst_ptolemy(walk: &FareyWalk) -> PtolemySystem {
    let mut sys = PtolemySystem::default();
    for s in walk.initial {
        sys.intern(&s.to_string());
    }
    for (k, w) in walk.steps[..walk.n()].iter().enumerate() {
        let sign = if k > 0 && walk.word[k - 1] == Letter::L { -1 } else { 1 };
        let terms = vec![
            gamma_term(&mut sys, sign, w.o, w.h),
            gamma_term(&mut sys, 1, w.s, w.s),
            gamma_term(&mut sys, -1, w.p, w.p),
        ];
        sys.equations.push(PtolemyEquation {
            tet: None,
            label: Some(format!("Δ_{{{}}}", w.o)),
            terms,
        });
    }
    let (p, s) = walk.identified();
    let a = sys.intern(&p.to_string());
    let b = sys.intern(&s.to_string());
    sys.identifications.push((a, b));
    sys
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Slope {
        x.parse().unwrap()
    }

    fn whitehead_triangle() -> [Slope; 3] {
        [s("3/1"), s("2/1"), s("1/0")]
    }

    #[test]
    fn figure_eight_walk() {
        let w = farey_walk(whitehead_triangle(), s("-1/1")).unwrap();
        assert_eq!(w.n(), 2);
        assert_eq!(w.steps[0].o, s("3/1"));
        assert_eq!(w.steps[1].o, s("2/1"));
        assert_eq!(w.word, vec![Letter::L, Letter::L]);
        assert_eq!(w.fold_edge(), s("1/1"));
        assert_eq!(w.identified(), (s("1/0"), s("0/1")));
        assert!(w.table().ends_with("fold 1/1; identify 1/0=0/1\n"));
    }

    #[test]
    fn five_two_walk() {
        let w = farey_walk(whitehead_triangle(), s("1/2")).unwrap();
        assert_eq!(w.word_string(), "LR");
        assert_eq!(w.fold_edge(), s("1/0"));
        assert_eq!(w.identified(), (s("0/1"), s("1/1")));
    }

    #[test]
    fn vertex_slope_is_extra_exceptional() {
        let e = farey_walk([s("0/1"), s("1/0"), s("1/1")], s("1/1")).unwrap_err();
        assert_eq!(e, WalkError::ExtraExceptional(s("1/1")));
    }

    #[test]
    fn degenerate_walk() {
        let w = farey_walk(whitehead_triangle(), s("1/1")).unwrap();
        assert!(w.is_degenerate());
        assert_eq!(w.fold_edge(), s("3/1"));
        assert_eq!(w.identified(), (s("1/0"), s("2/1")));
        let p = lst_ptolemy(&w);
        assert!(p.equations.is_empty());
        assert_eq!(p.identifications.len(), 1);
    }

    #[test]
    fn non_triangle_rejected() {
        assert!(matches!(
            farey_walk([s("0/1"), s("2/1"), s("1/0")], s("5/3")),
            Err(WalkError::NotFareyTriangle { .. })
        ));
    }
}
