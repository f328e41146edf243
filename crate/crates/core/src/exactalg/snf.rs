//! Smith normal form over the integers.
//!
//! Elimination always pivots on an entry of least absolute value in the
//! active submatrix, which keeps intermediate entries small on the sparse
//! 0/±1 matrices the cochain complexes produce.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`, `d_i ≥ 0`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_0, …, d_{min(r,c)-1}` (trailing ones may be zero).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut r = Reducer::new(a, true, true);
    r.run();
    let (d, u, v) = r.finish();
    Smith {
        u: u.expect("u tracked"),
        d,
        v: v.expect("v tracked"),
    }
}

/// Nonzero diagonal entries of the Smith form, in divisibility order.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reducer::new(a, false, false);
    r.run();
    let (d, _, _) = r.finish();
    (0..d.rows().min(d.cols()))
        .map(|i| d[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

/// Smith form with only the right transform; used for kernels.
pub(crate) fn smith_right(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut r = Reducer::new(a, false, true);
    r.run();
    let (d, _, v) = r.finish();
    (d, v.expect("v tracked"))
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows()
}

fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_rows(cols, &rows)
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn new(a: &IntMatrix, track_u: bool, track_v: bool) -> Self {
        Reducer {
            a: to_rows(a),
            u: track_u.then(|| to_rows(&IntMatrix::identity(a.rows()))),
            v: track_v.then(|| to_rows(&IntMatrix::identity(a.cols()))),
            rows: a.rows(),
            cols: a.cols(),
        }
    }

    fn finish(self) -> (IntMatrix, Option<IntMatrix>, Option<IntMatrix>) {
        let (rows, cols) = (self.rows, self.cols);
        (
            from_rows(cols, self.a),
            self.u.map(|u| from_rows(rows, u)),
            self.v.map(|v| from_rows(cols, v)),
        )
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q · row_k
    fn row_axpy(&mut self, i: usize, k: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
            let (src, dst) = if i < k {
                let (lo, hi) = m.split_at_mut(k);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = m.split_at_mut(i);
                (&lo[k], &mut hi[0])
            };
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
        apply(&mut self.a, i, k, q);
        if let Some(u) = &mut self.u {
            apply(u, i, k, q);
        }
    }

    /// col_j -= q · col_k
    fn col_axpy(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in &mut self.a {
            if !row[k].is_zero() {
                let delta = q * &row[k];
                row[j] -= delta;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v {
                if !row[k].is_zero() {
                    let delta = q * &row[k];
                    row[j] -= delta;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        let (i, j, _) = best.unwrap();
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &pivot;
                    if !q.is_zero() {
                        self.row_axpy(i, t, &q);
                    }
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &pivot;
                    if !q.is_zero() {
                        self.col_axpy(j, t, &q);
                    }
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a remainder smaller than the pivot survived; promote it
                    let mut best: Option<(bool, usize, BigInt)> = None;
                    for i in t + 1..self.rows {
                        let x = self.a[i][t].abs();
                        if !x.is_zero() && best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                            best = Some((true, i, x));
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = self.a[t][j].abs();
                        if !x.is_zero() && best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                            best = Some((false, j, x));
                        }
                    }
                    match best {
                        Some((true, i, _)) => self.swap_rows(t, i),
                        Some((false, j, _)) => self.swap_cols(t, j),
                        None => unreachable!("dirty implies a nonzero remainder"),
                    }
                    continue;
                }
                let offender = (t + 1..self.rows).find(|&i| {
                    self.a[i][t + 1..]
                        .iter()
                        .any(|x| !x.is_zero() && !x.is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.row_axpy(t, i, &-BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}
