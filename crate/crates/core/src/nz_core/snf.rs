use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.v.len()))
            .map(|i| self.d[i][i].clone())
            .collect()
    }
}

pub fn to_big(a: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[dst] -= q * y;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let p = d[t][t].clone();
            for i in t + 1..m {
                let q = d[i][t].div_floor(&p);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
            }
            for j in t + 1..n {
                let q = d[t][j].div_floor(&p);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
            }
            let mut small: Option<(usize, usize)> = None;
            for i in t + 1..m {
                if !d[i][t].is_zero() && small.map_or(true, |(a, b)| d[i][t].abs() < d[a][b].abs()) {
                    small = Some((i, t));
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() && small.map_or(true, |(a, b)| d[t][j].abs() < d[a][b].abs()) {
                    small = Some((t, j));
                }
            }
            if let Some((i, j)) = small {
                if j == t {
                    d.swap(t, i);
                    u.swap(t, i);
                } else {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[i][j].is_multiple_of(&p) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    Snf { u, d, v, rank: t }
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a = to_big(rows);
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..n {
                let val = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = val;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn cost(x: &[BigInt]) -> (BigInt, BigInt) {
    let max = x.iter().map(|v| v.abs()).max().unwrap_or_default();
    let sum = x.iter().map(|v| v.abs()).sum();
    (max, sum)
}

/// A particular integer solution of `A x = c` and a kernel basis, or `None`
/// when no integer solution exists.
pub fn solve_integer(a: &[Vec<i64>], c: &[i64]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let n = a.first().map_or(0, |r| r.len());
    let snf = smith_normal_form(&to_big(a));
    let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
    let uc = mat_vec(&snf.u, &cb);
    let mut y = vec![BigInt::zero(); n];
    for (i, val) in uc.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = val.div_rem(&snf.d[i][i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !val.is_zero() {
            return None;
        }
    }
    let x = mat_vec(&snf.v, &y);
    let kernel = (snf.rank..n)
        .map(|j| snf.v.iter().map(|row| row[j].clone()).collect())
        .collect();
    Some((x, kernel))
}

/// Greedily shrinks `x` by adding ± kernel vectors while (max |x_i|, Σ|x_i|) decreases.
pub fn reduce_by_kernel(mut x: Vec<BigInt>, kernel: &[Vec<BigInt>]) -> Vec<BigInt> {
    loop {
        let mut improved = false;
        for k in kernel {
            for sign in [1i32, -1] {
                let cand: Vec<BigInt> = x
                    .iter()
                    .zip(k)
                    .map(|(a, b)| a + BigInt::from(sign) * b)
                    .collect();
                if cost(&cand) < cost(&x) {
                    x = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            return x;
        }
    }
}

pub fn to_i64(x: &[BigInt]) -> Option<Vec<i64>> {
    x.iter().map(|v| v.to_i64()).collect()
}
