//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's arithmetic.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod gen;
pub mod golden;
pub mod kleene;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Pt = Option<(Q, Q)>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Chord–tangent addition on y² = x³ + ax + b, written from the textbook
/// formulas.
pub fn curve_add(a: &Q, p: &Pt, r: &Pt) -> Pt {
    let (x1, y1) = match p {
        None => return r.clone(),
        Some(v) => v,
    };
    let (x2, y2) = match r {
        None => return p.clone(),
        Some(v) => v,
    };
    let lambda = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return None;
        }
        (q(3) * x1 * x1 + a) / (q(2) * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &lambda * &lambda - x1 - x2;
    let y3 = lambda * (x1 - &x3) - y1;
    Some((x3, y3))
}

/// Rotation addition on x² + y² = 1 with identity (1, 0), stored as `None`.
pub fn circle_add(p: &Pt, r: &Pt) -> Pt {
    let one = (q(1), q(0));
    let (x1, y1) = p.clone().unwrap_or(one.clone());
    let (x2, y2) = r.clone().unwrap_or(one);
    let x = &x1 * &x2 - &y1 * &y2;
    let y = x1 * y2 + x2 * y1;
    if x == q(1) && y.is_zero() {
        None
    } else {
        Some((x, y))
    }
}

pub fn is_square(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| Q::new(n, d))
}

/// Points with x = n/d, |n| ≤ h, 1 ≤ d ≤ h, found by trying every x.
pub fn brute_points(rhs: impl Fn(&Q) -> Q, h: i64) -> Vec<Pt> {
    let mut out = vec![None];
    let mut seen = std::collections::BTreeSet::new();
    for d in 1..=h {
        for n in -h..=h {
            if n.gcd(&d) != 1 {
                continue;
            }
            let x = qf(n, d);
            if !seen.insert(x.clone()) {
                continue;
            }
            if let Some(y) = is_square(&rhs(&x)) {
                out.push(Some((x.clone(), y.clone())));
                if !y.is_zero() {
                    out.push(Some((x, -y)));
                }
            }
        }
    }
    out
}

pub fn curve_rhs(a: i64, b: i64) -> impl Fn(&Q) -> Q {
    move |x: &Q| x * x * x + q(a) * x + q(b)
}

pub fn circle_rhs(x: &Q) -> Q {
    q(1) - x * x
}

/// Order of `p` under `add` if at most `limit`.
pub fn order(add: impl Fn(&Pt, &Pt) -> Pt, p: &Pt, limit: u64) -> Option<u64> {
    let mut acc = p.clone();
    for k in 1..=limit {
        if acc.is_none() {
            return Some(k);
        }
        acc = add(&acc, p);
    }
    None
}

/// Torsion of y² = x³ + ax + b for integer a, b by Nagell–Lutz exhaustion:
/// torsion points are integral with y = 0 or y² | 4a³ + 27b²; each candidate
/// is confirmed by computing its multiples.
pub fn nagell_lutz_torsion(a: i64, b: i64) -> Vec<Pt> {
    let disc = (4 * a.pow(3) + 27 * b.pow(2)).abs();
    let aq = q(a);
    let mut out = vec![None];
    let mut ys: Vec<i64> = vec![0];
    for y in 1..=((disc as f64).sqrt() as i64 + 1) {
        if disc % (y * y) == 0 {
            ys.push(y);
            ys.push(-y);
        }
    }
    // |x|³ ≤ y² + |a||x| + |b| bounds x
    let xmax = ((disc + b.abs()) as f64).cbrt() as i64 + a.abs() + 2;
    for y in ys {
        for x in -xmax..=xmax {
            if x * x * x + a * x + b == y * y {
                let p = Some((q(x), q(y)));
                if order(|u, v| curve_add(&aq, u, v), &p, 12).is_some() {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    // fraction-free Bareiss elimination
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: dᵢ = Δᵢ / Δᵢ₋₁ where Δᵢ is
/// the gcd of all i×i minors.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Naive diagonalization by elementary row and column operations, then the
/// diagonal is normalized with gcd/lcm swaps into a divisibility chain.
pub fn invariant_factors_by_elimination(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &f * &a[t][j];
                    a[i][j] -= v;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let f = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let v = &f * &a[i][t];
                    a[i][j] -= v;
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        diag.push(a[t][t].abs());
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}
