//! Smith normal form of integer matrices and integer kernels.
//!
//! The transforms are computed over arbitrary-precision integers; only the
//! kernel bases, which are LLL-reduced, are returned as `i64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;
pub type BigMatrix = Vec<Vec<BigInt>>;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with
/// `d[0][0] | d[1][1] | ...`, all diagonal entries non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: BigMatrix,
    pub d: BigMatrix,
    pub v: BigMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        diagonal(&self.d).iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        diagonal(&self.d)
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn to_big(m: &IntMatrix) -> BigMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn matmul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "matrix shape mismatch");
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn diagonal(d: &BigMatrix) -> Vec<BigInt> {
    let cols = d.first().map_or(0, Vec::len);
    (0..d.len().min(cols)).map(|i| d[i][i].clone()).collect()
}

/// The quotient of `a` by `p` rounded to the nearest integer.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(p);
    if (r * 2u32).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

struct Work {
    a: BigMatrix,
    u: BigMatrix,
    v: BigMatrix,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// row[target] += q * row[src]
    fn add_row(&mut self, target: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let d = q * &self.a[src][j];
            self.a[target][j] += d;
        }
        for j in 0..self.rows {
            let d = q * &self.u[src][j];
            self.u[target][j] += d;
        }
    }

    /// col[target] += q * col[src]
    fn add_col(&mut self, target: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let d = q * &self.a[i][src];
            self.a[i][target] += d;
        }
        for i in 0..self.cols {
            let d = q * &self.v[i][src];
            self.v[i][target] += d;
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a[i].iter_mut().for_each(|x| *x = -&*x);
        self.u[i].iter_mut().for_each(|x| *x = -&*x);
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut w = Work {
        a: to_big(m),
        u: to_big(&identity(rows)),
        v: to_big(&identity(cols)),
        rows,
        cols,
    };
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.min_pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = nearest_quotient(&w.a[i][t], &p);
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                dirty |= !w.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = nearest_quotient(&w.a[t][j], &p);
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                dirty |= !w.a[t][j].is_zero();
            }
            if !dirty {
                // pivot must divide the rest of the block
                let bad =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => w.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if let Some((bi, bj)) = w.min_pivot(t) {
                w.swap_rows(t, bi);
                w.swap_cols(t, bj);
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    Snf {
        u: w.u,
        d: w.a,
        v: w.v,
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram–Schmidt coefficients μ and squared norms of the orthogonalized rows.
fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = b[i]
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = dot(&bi, &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

/// LLL reduction (δ = 3/4) of linearly independent integer rows, exact.
fn lll(b: &mut [Vec<BigInt>]) {
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    while k < b.len() {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(b);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let row = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&row) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(b);
        if norms[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

/// An LLL-reduced basis of the integer kernel `{v ∈ ℤⁿ : m·v = 0}`, as
/// rows. `cols` is needed when `m` has no rows.
pub fn kernel_basis(m: &IntMatrix, cols: usize) -> Result<Vec<Vec<i64>>> {
    if m.is_empty() {
        return Ok(identity(cols));
    }
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let mut basis: Vec<Vec<BigInt>> = (rank..cols)
        .map(|j| (0..cols).map(|i| snf.v[i][j].clone()).collect())
        .collect();
    lll(&mut basis);
    basis
        .into_iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    x.to_i64().ok_or_else(|| {
                        Error::Unsupported(format!("kernel vector entry {x} exceeds i64"))
                    })
                })
                .collect()
        })
        .collect()
}

/// The integer vectors orthogonal to every row of `vectors` (all of length
/// `dim`).
pub fn annihilator(vectors: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    kernel_basis(&vectors.to_vec(), dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_its_own_form() {
        let s = smith_normal_form(&identity(3));
        assert_eq!(s.d, to_big(&identity(3)));
    }

    #[test]
    fn nearest_quotients() {
        for (a, p, q) in [
            (7, 4, 2),
            (5, 4, 1),
            (-7, 4, -2),
            (7, -4, -2),
            (-7, -4, 2),
            (5, -4, -1),
        ] {
            assert_eq!(
                nearest_quotient(&BigInt::from(a), &BigInt::from(p)),
                BigInt::from(q),
                "{a}/{p}"
            );
        }
    }

    #[test]
    fn diag_two_three() {
        let m = vec![vec![2, 0], vec![0, 3]];
        let s = smith_normal_form(&m);
        assert_eq!(s.d, to_big(&vec![vec![1, 0], vec![0, 6]]));
        assert_eq!(matmul(&matmul(&s.u, &to_big(&m)), &s.v), s.d);
    }

    #[test]
    fn row_vector() {
        let m = vec![vec![1, 2]];
        let s = smith_normal_form(&m);
        assert_eq!(s.d, to_big(&vec![vec![1, 0]]));
        assert_eq!(matmul(&matmul(&s.u, &to_big(&m)), &s.v), s.d);
    }

    #[test]
    fn zero_and_empty() {
        let s = smith_normal_form(&vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(s.rank(), 0);
        assert_eq!(kernel_basis(&vec![], 2).unwrap(), identity(2));
    }

    #[test]
    fn kernels() {
        let k = kernel_basis(&vec![vec![1, -1]], 2).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
        assert_eq!(k[0][0].abs(), 1);
        assert!(kernel_basis(&vec![vec![2]], 1).unwrap().is_empty());
        let k = kernel_basis(&vec![vec![1, 2]], 2).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0] + 2 * k[0][1], 0);
    }

    #[test]
    fn kernel_basis_is_reduced() {
        let k = kernel_basis(&vec![vec![1, 1, 1, 1]], 4).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.iter().flatten().all(|x| x.abs() <= 1), "{k:?}");
    }
}
