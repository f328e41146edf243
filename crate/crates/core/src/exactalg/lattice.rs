use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::snf::{smith_normal_form, smith_right};
use super::IntMatrix;

/// A sublattice of `Z^dim`, kept as a row-style Hermite normal form basis:
/// basis vector `k` has its first nonzero entry (the pivot, positive) at
/// column `pivots[k]`, pivots strictly increase, and every entry sitting in
/// another vector's pivot column is reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_generators<I>(dim: usize, generators: I) -> Self
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        let mut lattice = Self::zero(dim);
        for g in generators {
            lattice.insert(g);
        }
        lattice.normalize();
        lattice
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_columns(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.columns())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Basis vectors as the columns of a `dim × rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.basis)
    }

    /// True iff the lattice is all of `Z^dim`.
    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.basis.iter().zip(&self.pivots).all(|(b, &p)| b[p].is_one())
    }

    fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "generator of wrong length");
        loop {
            let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
                return;
            };
            match self.pivots.binary_search(&lead) {
                Ok(k) => {
                    let b = &mut self.basis[k];
                    if v[lead].is_multiple_of(&b[lead]) {
                        let q = &v[lead] / &b[lead];
                        axpy(&mut v, &q, b);
                    } else {
                        let ext = b[lead].extended_gcd(&v[lead]);
                        let (bl, vl) = (&b[lead] / &ext.gcd, &v[lead] / &ext.gcd);
                        let combined: Vec<BigInt> = b
                            .iter()
                            .zip(&v)
                            .map(|(x, y)| &ext.x * x + &ext.y * y)
                            .collect();
                        let rest: Vec<BigInt> =
                            v.iter().zip(b.iter()).map(|(y, x)| &bl * y - &vl * x).collect();
                        *b = combined;
                        if b[lead].is_negative() {
                            b.iter_mut().for_each(|x| *x = -std::mem::take(x));
                        }
                        v = rest;
                    }
                }
                Err(pos) => {
                    if v[lead].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.basis.insert(pos, v);
                    self.pivots.insert(pos, lead);
                    return;
                }
            }
        }
    }

    fn normalize(&mut self) {
        for k in 0..self.basis.len() {
            let p = self.pivots[k];
            let (above, rest) = self.basis.split_at_mut(k);
            let row = &rest[0];
            for other in above.iter_mut() {
                let q = other[p].div_floor(&row[p]);
                if !q.is_zero() {
                    axpy(other, &q, row);
                }
            }
        }
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "vector of wrong length");
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = v[p].div_rem(&b[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                axpy(&mut v, &q, b);
            }
            coords.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// True iff every column of `m` lies in the lattice.
    pub fn contains_columns(&self, m: &IntMatrix) -> bool {
        assert_eq!(m.rows(), self.dim, "matrix of wrong height");
        (0..m.cols()).all(|j| self.contains(&m.column(j)))
    }

    /// True iff `other` is a sublattice of `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Canonical representative of `v` modulo the lattice: every pivot
    /// coordinate is brought into `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&b[p]);
            if !q.is_zero() {
                axpy(&mut v, &q, b);
            }
        }
        v
    }
}

/// v -= q · w
fn axpy(v: &mut [BigInt], q: &BigInt, w: &[BigInt]) {
    for (x, y) in v.iter_mut().zip(w) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Basis (as columns) of the integer kernel `{x : a·x = 0}`.
///
/// Taken from the trailing columns of the right Smith transform, so the
/// basis is saturated.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (d, v) = smith_right(a);
    let rank = (0..d.rows().min(d.cols()))
        .take_while(|&i| !d[(i, i)].is_zero())
        .count();
    v.submatrix(0..a.cols(), rank..a.cols())
}

/// Some integer solution of `a·x = b`, or `None` if there is none. Free
/// variables of the Smith form are set to zero, so the answer is a
/// deterministic function of `(a, b)`.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side of wrong length");
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut w = vec![BigInt::zero(); a.cols()];
    for (i, x) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = x.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                w[i] = q;
            }
            _ => {
                if !x.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(s.v.mul_vec(&w))
}
