//! Numeric solutions of the gluing equations and end-to-end checks of the
//! symbolic pipeline.
//!
//! Logarithms use the principal branch, argument in `(−π, π]`.

mod ptolemy;

pub use ptolemy::{
    ptolemy_jacobian, ptolemy_residual, solve_ptolemy_numeric, PtolemyNumeric, PtolemySolution, ReducedPtolemy,
};

use crate::nz_core::{NzSystem, SignVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

pub type C64 = Complex64;

pub const ITERATION_CAP: usize = 100;
pub const RANDOM_SEEDS: usize = 20;
pub const GLUING_TOLERANCE: f64 = 1e-12;
const SEED: u64 = 0x5eed_0001;
const DEGENERATE: f64 = 1e-10;

fn i_pi() -> C64 {
    C64::new(0.0, PI)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("Newton did not converge within {cap} iterations from {seeds} seeds (best residual {best:.3e})")]
    NonConvergence { cap: usize, seeds: usize, best: f64 },
    #[error("shape of tetrahedron {0} is degenerate (0 or 1)")]
    Degenerate(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Shape parameters `z_j` of the tetrahedra.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeVector {
    pub z: Vec<C64>,
}

impl ShapeVector {
    pub fn new(z: Vec<C64>) -> Result<ShapeVector, NumericError> {
        if let Some(j) = z.iter().position(|&x| is_degenerate(x)) {
            return Err(NumericError::Degenerate(j));
        }
        Ok(ShapeVector { z })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `z' = 1/(1 − z)`.
    pub fn z_prime(&self) -> Vec<C64> {
        self.z.iter().map(|&z| 1.0 / (1.0 - z)).collect()
    }

    /// `z'' = −1/(z z')`.
    pub fn z_double_prime(&self) -> Vec<C64> {
        self.z
            .iter()
            .zip(self.z_prime())
            .map(|(&z, zp)| -1.0 / (z * zp))
            .collect()
    }

    /// `(Z_1, Z'_1, …, Z_n, Z'_n)`, principal logarithms.
    pub fn logs(&self) -> Vec<C64> {
        self.z
            .iter()
            .zip(self.z_prime())
            .flat_map(|(&z, zp)| [z.ln(), zp.ln()])
            .collect()
    }

    /// `Z''_j = iπ − Z_j − Z'_j`.
    pub fn log_double_prime(&self) -> Vec<C64> {
        self.logs().chunks(2).map(|p| i_pi() - p[0] - p[1]).collect()
    }

    /// Largest violation of `z z' z'' = −1`, `z + 1/z' − 1 = 0` and
    /// `exp(Z'') = z''`.
    pub fn identity_residual(&self) -> f64 {
        let zp = self.z_prime();
        let zpp = self.z_double_prime();
        let lzpp = self.log_double_prime();
        let mut r = 0.0f64;
        for j in 0..self.len() {
            let z = self.z[j];
            r = r.max((z * zp[j] * zpp[j] + 1.0).norm());
            r = r.max((z + 1.0 / zp[j] - 1.0).norm());
            r = r.max((lzpp[j].exp() - zpp[j]).norm());
        }
        r
    }

    pub fn is_geometric(&self) -> bool {
        self.z.iter().all(|z| z.im > 0.0)
    }
}

fn is_degenerate(z: C64) -> bool {
    !z.re.is_finite() || !z.im.is_finite() || z.norm() < DEGENERATE || (1.0 - z).norm() < DEGENERATE
}

/// Kept edge rows plus one meridian row per cusp: a square system in `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSystem {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
    pub c: Vec<i64>,
    /// Index of each cusp's meridian among `rows`.
    pub meridians: Vec<usize>,
}

impl GluingSystem {
    pub fn new(s: &NzSystem) -> GluingSystem {
        let mut rows = Vec::new();
        let mut c = Vec::new();
        for (i, r) in s.edge_rows.iter().enumerate() {
            if !s.dropped.contains(&i) {
                rows.push(r.coeffs.clone());
                c.push(r.c);
            }
        }
        let mut meridians = Vec::new();
        for k in 0..s.cusp_count {
            let m = s.meridian(k);
            meridians.push(rows.len());
            rows.push(m.coeffs.clone());
            c.push(m.c);
        }
        GluingSystem {
            n: s.n,
            rows,
            c,
            meridians,
        }
    }

    /// `row · Z − iπ c − target`, with `targets` the meridian log-holonomies.
    pub fn residual(&self, z: &[C64], targets: &[C64]) -> Vec<C64> {
        let logs = ShapeVector { z: z.to_vec() }.logs();
        let mut out: Vec<C64> = self
            .rows
            .iter()
            .zip(&self.c)
            .map(|(r, &c)| log_row(r, &logs) - i_pi() * c as f64)
            .collect();
        for (k, &i) in self.meridians.iter().enumerate() {
            out[i] -= targets.get(k).copied().unwrap_or_default();
        }
        out
    }

    /// `∂/∂z_j = d_j/z_j + d'_j/(1 − z_j)`.
    pub fn jacobian(&self, z: &[C64]) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows.len(), self.n, |k, j| {
            let (d, dp) = (self.rows[k][2 * j] as f64, self.rows[k][2 * j + 1] as f64);
            d / z[j] + dp / (1.0 - z[j])
        })
    }

    fn newton(&self, start: &[C64], targets: &[C64]) -> Option<(Vec<C64>, usize, f64)> {
        let mut z = start.to_vec();
        for it in 0..=ITERATION_CAP {
            if z.iter().any(|&x| is_degenerate(x)) {
                return None;
            }
            let f = self.residual(&z, targets);
            let res = max_norm(&f);
            if !res.is_finite() {
                return None;
            }
            if res < GLUING_TOLERANCE * 0.1 || it == ITERATION_CAP {
                return (res < GLUING_TOLERANCE).then_some((z, it, res));
            }
            let step = self.jacobian(&z).lu().solve(&DVector::from_vec(f))?;
            for (x, dx) in z.iter_mut().zip(step.iter()) {
                *x -= dx;
            }
            if it > 5 && step.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-15 {
                let f = self.residual(&z, targets);
                let res = max_norm(&f);
                return (res < GLUING_TOLERANCE).then_some((z, it + 1, res));
            }
        }
        None
    }
}

fn log_row(row: &[i64], logs: &[C64]) -> C64 {
    row.iter().zip(logs).map(|(&a, &l)| a as f64 * l).sum()
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Log-holonomies `(log m_k, log ℓ_k)`: `row · Z − iπ c` for each cusp row pair.
pub fn holonomies(s: &NzSystem, shapes: &ShapeVector) -> Vec<(C64, C64)> {
    let logs = shapes.logs();
    (0..s.cusp_count)
        .map(|k| {
            let m = s.meridian(k);
            let l = s.longitude(k);
            (
                log_row(&m.coeffs, &logs) - i_pi() * m.c as f64,
                log_row(&l.coeffs, &logs) - i_pi() * l.c as f64,
            )
        })
        .collect()
}

/// `(L, M) = (exp(log ℓ/2), exp(log m/2))` for a one-cusped system.
#[allow(non_snake_case)]
pub fn eigenvalues(h: (C64, C64)) -> (C64, C64) {
    ((h.1 * 0.5).exp(), (h.0 * 0.5).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompleteSolution {
    pub shapes: ShapeVector,
    /// `(log m_k, log ℓ_k)` per cusp.
    pub holonomy: Vec<(C64, C64)>,
    /// Max-norm of the edge and meridian residuals.
    pub residual: f64,
    /// Max-norm of every edge and cusp residual, dropped rows included.
    pub full_residual: f64,
    pub geometric: bool,
    /// 0 for the regular seed, `k` for random seed `k`.
    pub seed: usize,
    pub iterations: usize,
}

/// Full residual vector: every edge row, then meridian and longitude per cusp.
pub fn full_residual(s: &NzSystem, shapes: &ShapeVector) -> Vec<C64> {
    let logs = shapes.logs();
    s.rows()
        .map(|r| log_row(&r.coeffs, &logs) - i_pi() * r.c as f64)
        .collect()
}

/// Start points: the regular shape `exp(iπ/3)` everywhere, then
/// `RANDOM_SEEDS` draws from `[−0.5, 1.5] × [0.2, 1.5]`.
pub fn gluing_seeds(n: usize) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![vec![C64::from_polar(1.0, PI / 3.0); n]];
    for _ in 0..RANDOM_SEEDS {
        out.push(
            (0..n)
                .map(|_| C64::new(rng.gen_range(-0.5..1.5), rng.gen_range(0.2..1.5)))
                .collect(),
        );
    }
    out
}

/// Complete structure: gluing equations with zero meridian holonomy.
///
/// Returns the first geometric solution over the seeds, else the first
/// converged one with `geometric = false`.
pub fn solve_complete(s: &NzSystem) -> Result<CompleteSolution, NumericError> {
    let g = GluingSystem::new(s);
    if g.rows.len() != g.n {
        return Err(NumericError::Dimension(format!(
            "{} equations in {} shapes",
            g.rows.len(),
            g.n
        )));
    }
    let targets = vec![C64::default(); s.cusp_count];
    let seeds = gluing_seeds(s.n);
    let mut fallback: Option<CompleteSolution> = None;
    let mut best = f64::INFINITY;
    for (k, seed) in seeds.iter().enumerate() {
        let Some((z, iterations, residual)) = g.newton(seed, &targets) else {
            let r = max_norm(&g.residual(seed, &targets));
            if r.is_finite() {
                best = best.min(r);
            }
            continue;
        };
        let shapes = ShapeVector { z };
        let sol = CompleteSolution {
            holonomy: holonomies(s, &shapes),
            full_residual: max_norm(&full_residual(s, &shapes)),
            geometric: shapes.is_geometric(),
            shapes,
            residual,
            seed: k,
            iterations,
        };
        if sol.geometric {
            return Ok(sol);
        }
        fallback.get_or_insert(sol);
    }
    fallback.ok_or(NumericError::NonConvergence {
        cap: ITERATION_CAP,
        seeds: seeds.len(),
        best,
    })
}

/// A point on the deformation path of a one-cusped structure.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedPoint {
    pub shapes: ShapeVector,
    pub log_m: C64,
    pub log_l: C64,
    pub L: C64,
    pub M: C64,
}

/// Follows the solution from `start` as the meridian log-holonomy moves
/// through `targets`, one Newton solve per target.
pub fn continue_holonomy(
    s: &NzSystem,
    start: &ShapeVector,
    targets: &[C64],
) -> Result<Vec<DeformedPoint>, NumericError> {
    if s.cusp_count != 1 {
        return Err(NumericError::Dimension(format!(
            "continuation needs one cusp, found {}",
            s.cusp_count
        )));
    }
    let g = GluingSystem::new(s);
    let mut z = start.z.clone();
    let mut out = Vec::new();
    for &t in targets {
        let (next, _, _) = g.newton(&z, &[t]).ok_or(NumericError::NonConvergence {
            cap: ITERATION_CAP,
            seeds: 1,
            best: f64::NAN,
        })?;
        z = next;
        let shapes = ShapeVector { z: z.clone() };
        let h = holonomies(s, &shapes)[0];
        let (l, m) = eigenvalues(h);
        out.push(DeformedPoint {
            shapes,
            log_m: h.0,
            log_l: h.1,
            L: l,
            M: m,
        });
    }
    Ok(out)
}

/// `Γ̄` with `Z − πiB = (−J)(NZ♭)ᵀ Γ̄`, by least squares.
///
/// Entries follow the kept edge rows, then `(meridian, longitude)` per cusp.
pub fn gamma_log_coordinates(
    s: &NzSystem,
    b: &SignVector,
    shapes: &ShapeVector,
) -> Result<(Vec<C64>, f64), NumericError> {
    let n = s.n;
    if shapes.len() != n || b.0.len() != 2 * n {
        return Err(NumericError::Dimension(format!(
            "{} tetrahedra, {} shapes, {} sign entries",
            n,
            shapes.len(),
            b.0.len()
        )));
    }
    let flat: Vec<&Vec<i64>> = s
        .edge_rows
        .iter()
        .enumerate()
        .filter(|(i, _)| !s.dropped.contains(i))
        .map(|(_, r)| &r.coeffs)
        .chain(s.cusp_rows.iter().map(|r| &r.coeffs))
        .collect();
    // Column k of (−J)(NZ♭)ᵀ is (d'_k1, −d_k1, d'_k2, −d_k2, …).
    let a = DMatrix::from_fn(2 * n, flat.len(), |i, k| {
        let j = i / 2;
        let v = if i % 2 == 0 { flat[k][2 * j + 1] } else { -flat[k][2 * j] };
        C64::new(v as f64, 0.0)
    });
    let logs = shapes.logs();
    let rhs = DVector::from_fn(2 * n, |i, _| logs[i] - i_pi() * b.0[i] as f64);
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&rhs, 1e-10)
        .map_err(|e| NumericError::Dimension(e.to_string()))?;
    let res = (&a * &x - &rhs).iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok((x.iter().copied().collect(), res))
}

/// γ on all edge rows (dropped rows set to 1) and `(L, M)` from the
/// least-squares `Γ̄` of a one-cusped system.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFromShapes {
    pub gamma: Vec<C64>,
    pub L: C64,
    pub M: C64,
    pub residual: f64,
}

pub fn gamma_from_shapes(s: &NzSystem, b: &SignVector, shapes: &ShapeVector) -> Result<GammaFromShapes, NumericError> {
    if s.cusp_count != 1 {
        return Err(NumericError::Dimension("one cusp expected".into()));
    }
    let (x, residual) = gamma_log_coordinates(s, b, shapes)?;
    let mut gamma = vec![C64::new(1.0, 0.0); s.edge_rows.len()];
    let mut it = x.iter();
    for (i, g) in gamma.iter_mut().enumerate() {
        if !s.dropped.contains(&i) {
            *g = it.next().unwrap().exp();
        }
    }
    let x_m = *it.next().unwrap();
    let x_l = *it.next().unwrap();
    // x_m = −log ℓ / 2 and x_l = log m / 2.
    Ok(GammaFromShapes {
        gamma,
        L: (-x_m).exp(),
        M: x_l.exp(),
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChangeOfVarsReport {
    /// `|z_rec − z|` per tetrahedron.
    pub z_deviation: Vec<f64>,
    /// `|z'_rec − z'|` per tetrahedron.
    pub z_prime_deviation: Vec<f64>,
    pub max_deviation: f64,
    /// Tetrahedra whose reconstructed shape is 0 or 1.
    pub degenerate: Vec<usize>,
}

impl ChangeOfVarsReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.degenerate.is_empty() && self.max_deviation < tol
    }
}

/// Reconstructs
/// `z_j = (−1)^{B_j} L^{−μ'_j} M^{λ'_j} Π_k γ_k^{d'_kj}` and
/// `z'_j = (−1)^{B'_j} L^{μ_j} M^{−λ_j} Π_k γ_k^{−d_kj}`
/// over the kept edge rows `k`, with `L² = ℓ`, `M² = m`, and compares with
/// `shapes`. `gamma` is indexed by edge row; dropped rows are ignored.
#[allow(non_snake_case)]
pub fn reconstruct_shapes(s: &NzSystem, b: &SignVector, gamma: &[C64], L: C64, M: C64) -> (Vec<C64>, Vec<C64>) {
    let pw = |x: C64, e: i64| x.powi(e as i32);
    let mu = &s.meridian(0).coeffs;
    let la = &s.longitude(0).coeffs;
    let mut z = Vec::with_capacity(s.n);
    let mut zp = Vec::with_capacity(s.n);
    for j in 0..s.n {
        let sign = |e: i64| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let mut a = sign(b.b(j)) * pw(L, -mu[2 * j + 1]) * pw(M, la[2 * j + 1]);
        let mut c = sign(b.b_prime(j)) * pw(L, mu[2 * j]) * pw(M, -la[2 * j]);
        for (k, r) in s.edge_rows.iter().enumerate() {
            if s.dropped.contains(&k) {
                continue;
            }
            a *= pw(gamma[k], r.coeffs[2 * j + 1]);
            c *= pw(gamma[k], -r.coeffs[2 * j]);
        }
        z.push(a);
        zp.push(c);
    }
    (z, zp)
}

#[allow(non_snake_case)]
pub fn check_change_of_vars(
    shapes: &ShapeVector,
    s: &NzSystem,
    b: &SignVector,
    gamma: &[C64],
    L: C64,
    M: C64,
) -> Result<ChangeOfVarsReport, NumericError> {
    if s.cusp_count != 1 {
        return Err(NumericError::Dimension("one cusp expected".into()));
    }
    if shapes.len() != s.n || gamma.len() != s.edge_rows.len() || b.0.len() != 2 * s.n {
        return Err(NumericError::Dimension(format!(
            "{} tetrahedra, {} shapes, {} γ for {} edge rows",
            s.n,
            shapes.len(),
            gamma.len(),
            s.edge_rows.len()
        )));
    }
    let (z, zp) = reconstruct_shapes(s, b, gamma, L, M);
    let target_p = shapes.z_prime();
    let z_deviation: Vec<f64> = z.iter().zip(&shapes.z).map(|(a, b)| (a - b).norm()).collect();
    let z_prime_deviation: Vec<f64> = zp.iter().zip(&target_p).map(|(a, b)| (a - b).norm()).collect();
    let degenerate = (0..s.n).filter(|&j| is_degenerate(z[j])).collect();
    let max_deviation = z_deviation
        .iter()
        .chain(&z_prime_deviation)
        .copied()
        .fold(0.0, f64::max);
    Ok(ChangeOfVarsReport {
        z_deviation,
        z_prime_deviation,
        max_deviation,
        degenerate,
    })
}

/// Machine-readable summary of a complete-structure solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeReport {
    pub converged: bool,
    pub geometric: bool,
    pub residual: f64,
    pub full_residual: f64,
    pub seed: usize,
    pub iterations: usize,
    /// `[re, im]` per tetrahedron.
    pub shapes: Vec<[f64; 2]>,
    /// Per-row residuals, edge rows then cusp rows.
    pub row_residuals: Vec<f64>,
    pub error: Option<String>,
}

pub fn shape_report(s: &NzSystem) -> ShapeReport {
    match solve_complete(s) {
        Ok(sol) => ShapeReport {
            converged: true,
            geometric: sol.geometric,
            residual: sol.residual,
            full_residual: sol.full_residual,
            seed: sol.seed,
            iterations: sol.iterations,
            shapes: sol.shapes.z.iter().map(|z| [z.re, z.im]).collect(),
            row_residuals: full_residual(s, &sol.shapes).iter().map(|x| x.norm()).collect(),
            error: None,
        },
        Err(e) => ShapeReport {
            converged: false,
            geometric: false,
            residual: f64::NAN,
            full_residual: f64::NAN,
            seed: 0,
            iterations: 0,
            shapes: Vec::new(),
            row_residuals: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}
