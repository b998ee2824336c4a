use super::C64;
use crate::eliminate::MultiPoly;
use crate::ptolemy_gen::{as_LM_polynomials, PtolemySystem};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PTOLEMY_TOLERANCE: f64 = 1e-10;
pub const PTOLEMY_SEEDS: usize = 40;
const SEED: u64 = 0x5eed_0002;
const CAP: usize = 100;

/// Ptolemy polynomials with identified γ merged and normalized γ fixed to 1.
#[derive(Clone, Debug)]
pub struct ReducedPtolemy {
    pub polys: Vec<MultiPoly>,
    /// `∂f/∂g_i` for every γ variable `i`.
    derivs: Vec<Vec<MultiPoly>>,
    pub reps: Vec<usize>,
    /// Free γ representatives, in the order used for unknown vectors.
    pub unknowns: Vec<usize>,
    pub ngamma: usize,
}

impl ReducedPtolemy {
    pub fn new(p: &PtolemySystem) -> ReducedPtolemy {
        let polys: Vec<MultiPoly> = as_LM_polynomials(p).into_iter().map(|(f, _)| f).collect();
        let ngamma = p.gamma_labels.len();
        let derivs = polys
            .iter()
            .map(|f| (0..ngamma).map(|i| f.derivative(2 + i)).collect())
            .collect();
        let reps = p.representatives();
        let fixed: Vec<usize> = p.normalized.iter().map(|&k| reps[k]).collect();
        let mut unknowns: Vec<usize> = reps.clone();
        unknowns.sort_unstable();
        unknowns.dedup();
        unknowns.retain(|r| !fixed.contains(r));
        ReducedPtolemy {
            polys,
            derivs,
            reps,
            unknowns,
            ngamma,
        }
    }

    /// Full γ vector from the unknowns.
    pub fn expand(&self, x: &[C64]) -> Vec<C64> {
        (0..self.ngamma)
            .map(|i| {
                self.unknowns
                    .iter()
                    .position(|&u| u == self.reps[i])
                    .map_or(C64::new(1.0, 0.0), |k| x[k])
            })
            .collect()
    }

    #[allow(non_snake_case)]
    fn point(&self, gamma: &[C64], L: C64, M: C64) -> Vec<C64> {
        let mut pt = vec![L, M];
        pt.extend_from_slice(gamma);
        pt
    }

    #[allow(non_snake_case)]
    pub fn residual(&self, x: &[C64], L: C64, M: C64) -> Vec<C64> {
        let pt = self.point(&self.expand(x), L, M);
        self.polys.iter().map(|f| f.eval_complex(&pt)).collect()
    }

    /// Largest scale-free residual `|f| / max term`.
    #[allow(non_snake_case)]
    pub fn relative_residual(&self, x: &[C64], L: C64, M: C64) -> f64 {
        let pt = self.point(&self.expand(x), L, M);
        self.polys.iter().map(|f| f.relative_value(&pt)).fold(0.0, f64::max)
    }

    #[allow(non_snake_case)]
    pub fn jacobian(&self, x: &[C64], L: C64, M: C64) -> DMatrix<C64> {
        let pt = self.point(&self.expand(x), L, M);
        let mut j = DMatrix::zeros(self.polys.len(), self.unknowns.len());
        for (e, row) in self.derivs.iter().enumerate() {
            for (i, d) in row.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                if let Some(k) = self.unknowns.iter().position(|&u| u == self.reps[i]) {
                    j[(e, k)] += d.eval_complex(&pt);
                }
            }
        }
        j
    }

    /// Damped Gauss–Newton; the system may have one more equation than unknowns.
    #[allow(non_snake_case)]
    fn gauss_newton(&self, start: Vec<C64>, L: C64, M: C64) -> Option<Vec<C64>> {
        let norm = |v: &[C64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let mut x = start;
        let mut f = self.residual(&x, L, M);
        for _ in 0..CAP {
            if self.relative_residual(&x, L, M) < PTOLEMY_TOLERANCE * 0.01 {
                break;
            }
            let jac = self.jacobian(&x, L, M);
            let rhs = DVector::from_vec(f.clone());
            let step = jac.svd(true, true).solve(&rhs, 1e-13).ok()?;
            let mut t = 1.0;
            let mut improved = false;
            for _ in 0..12 {
                let trial: Vec<C64> = x.iter().zip(step.iter()).map(|(a, d)| a - d * t).collect();
                let ft = self.residual(&trial, L, M);
                if norm(&ft) < norm(&f) {
                    x = trial;
                    f = ft;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        let ok = x.iter().all(|g| g.norm() > 1e-6 && g.norm() < 1e6)
            && self.relative_residual(&x, L, M) < PTOLEMY_TOLERANCE;
        ok.then_some(x)
    }
}

/// Residual of every equation at a full γ vector, with no normalization.
#[allow(non_snake_case)]
pub fn ptolemy_residual(p: &PtolemySystem, gamma: &[C64], L: C64, M: C64) -> Vec<C64> {
    let mut pt = vec![L, M];
    pt.extend_from_slice(gamma);
    as_LM_polynomials(p)
        .into_iter()
        .map(|(f, _)| f.eval_complex(&pt))
        .collect()
}

/// Jacobian in the free unknowns of the reduced system.
#[allow(non_snake_case)]
pub fn ptolemy_jacobian(r: &ReducedPtolemy, x: &[C64], L: C64, M: C64) -> DMatrix<C64> {
    r.jacobian(x, L, M)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtolemySolution {
    /// Indexed like `gamma_labels`.
    pub gamma: Vec<C64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtolemyNumeric {
    pub solutions: Vec<PtolemySolution>,
    pub seeds: usize,
}

/// Multi-start Gauss–Newton at fixed `(L, M)` from `PTOLEMY_SEEDS` seeds
/// with real and imaginary parts in `[−2, 2]`; distinct solutions only.
#[allow(non_snake_case)]
pub fn solve_ptolemy_numeric(p: &PtolemySystem, L: C64, M: C64) -> PtolemyNumeric {
    let r = ReducedPtolemy::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut found: Vec<PtolemySolution> = Vec::new();
    for _ in 0..PTOLEMY_SEEDS {
        let start: Vec<C64> = (0..r.unknowns.len())
            .map(|_| C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let Some(x) = r.gauss_newton(start, L, M) else {
            continue;
        };
        let residual = r.relative_residual(&x, L, M);
        let gamma = r.expand(&x);
        let dup = found.iter().any(|s| {
            s.gamma
                .iter()
                .zip(&gamma)
                .all(|(a, b)| (a - b).norm() <= 1e-6 * (1.0 + a.norm()))
        });
        if !dup {
            found.push(PtolemySolution { gamma, residual });
        }
    }
    PtolemyNumeric {
        solutions: found,
        seeds: PTOLEMY_SEEDS,
    }
}
