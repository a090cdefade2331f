//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are numbered from 1 and rendered as `x1, x2, ...`. For a tuple of
//! `n` group points the coordinates of point `j` (1-based) occupy variables
//! `x(2j-1)` and `x(2j)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::Rational;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Exponents, Rational>,
}

/// Graded lexicographic comparison: total degree first, then the exponent of
/// `x1`, `x2`, ... in turn.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    /// The variable `x{index}` (1-based).
    pub fn var(arity: usize, index: usize) -> Result<Self> {
        if index == 0 || index > arity {
            return Err(Error::input(format!(
                "variable x{index} out of range for arity {arity}"
            )));
        }
        let mut e = vec![0; arity];
        e[index - 1] = 1;
        let mut p = Self::zero(arity);
        p.add_term(e, Rational::one());
        Ok(p)
    }

    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::input(format!(
                    "exponent vector of length {} for arity {arity}",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// True iff variable `x{index}` (1-based) occurs with a nonzero exponent.
    pub fn uses_var(&self, index: usize) -> bool {
        self.terms.keys().any(|e| e[index - 1] > 0)
    }

    /// Re-embeds the polynomial into a larger variable space; variable `i`
    /// moves to `offset + i`.
    pub fn embed(&self, arity: usize, offset: usize) -> Result<Self> {
        if offset + self.arity > arity {
            return Err(Error::input("embedding does not fit".to_string()));
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; arity];
            ne[offset..offset + self.arity].copy_from_slice(e);
            (ne, c.clone())
        });
        Self::from_terms(arity, terms)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero(self.arity);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.arity, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(
            self.arity, other.arity,
            "polynomial arity mismatch ({} vs {})",
            self.arity, other.arity
        );
    }

    /// Exact value at a point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::input(format!(
                "point has {} coordinates, polynomial arity is {}",
                point.len(),
                self.arity
            )));
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes values for the trailing `values.len()` variables, leaving a
    /// polynomial in the leading ones.
    pub fn partial_evaluate(&self, values: &[Rational]) -> Result<Self> {
        if values.len() > self.arity {
            return Err(Error::input(format!(
                "{} substitution values for arity {}",
                values.len(),
                self.arity
            )));
        }
        let keep = self.arity - values.len();
        let mut p = Self::zero(keep);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for (y, &k) in values.iter().zip(&e[keep..]) {
                if k > 0 {
                    coeff *= num_traits::pow(y.clone(), k as usize);
                }
            }
            p.add_term(e[..keep].to_vec(), coeff);
        }
        Ok(p)
    }

    /// Renders in the S-expression syntax accepted by the formula parser.
    pub fn to_sexpr(&self) -> String {
        self.to_sexpr_with(|i| format!("x{i}"))
    }

    /// Like [`MultiPoly::to_sexpr`] with a custom name for variable `i`
    /// (1-based).
    pub fn to_sexpr_with(&self, name: impl Fn(usize) -> String) -> String {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mut factors: Vec<String> = Vec::new();
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(name(i + 1)),
                        _ => factors.push(format!("(^ {} {k})", name(i + 1))),
                    }
                }
                if factors.is_empty() {
                    c.to_string()
                } else if c.is_one() && factors.len() == 1 {
                    factors.pop().unwrap()
                } else if c.is_one() {
                    format!("(* {})", factors.join(" "))
                } else {
                    format!("(* {c} {})", factors.join(" "))
                }
            })
            .collect();
        if rendered.len() == 1 {
            rendered.into_iter().next().unwrap()
        } else {
            format!("(+ {})", rendered.join(" "))
        }
    }
}

/// `Σ pᵢ²`. Over an ordered field its zero set is the common zero set of the
/// `pᵢ`.
pub fn sum_of_squares_combine(ps: &[MultiPoly]) -> Result<MultiPoly> {
    let first = ps
        .first()
        .ok_or_else(|| Error::input("sum of squares of an empty list"))?;
    let arity = first.arity();
    if let Some(p) = ps.iter().find(|p| p.arity() != arity) {
        return Err(Error::input(format!(
            "arity mismatch in sum of squares: {} vs {arity}",
            p.arity()
        )));
    }
    Ok(ps
        .iter()
        .fold(MultiPoly::zero(arity), |acc, p| &acc + &(p * p)))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{k}", v + 1)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_arity(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_arity(rhs);
        let mut p = MultiPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};
    use proptest::prelude::*;

    fn x(arity: usize, i: usize) -> MultiPoly {
        MultiPoly::var(arity, i).unwrap()
    }

    fn c(arity: usize, v: i64) -> MultiPoly {
        MultiPoly::constant(arity, int(v))
    }

    #[test]
    fn eval_examples() {
        let p = &x(2, 1).pow(2) - &x(2, 2);
        assert_eq!(p.eval(&[int(2), int(4)]).unwrap(), int(0));
        assert_eq!(
            MultiPoly::zero(3).eval(&[int(1), int(2), int(3)]).unwrap(),
            int(0)
        );
        let curve = &(&x(2, 1).pow(3) - &c(2, 2)) - &x(2, 2).pow(2);
        assert_eq!(curve.eval(&[int(3), int(5)]).unwrap(), int(0));
        assert!(p.eval(&[int(1)]).is_err());
    }

    #[test]
    fn sum_of_squares_examples() {
        let s = sum_of_squares_combine(&[x(1, 1)]).unwrap();
        assert_eq!(s, x(1, 1).pow(2));
        let s = sum_of_squares_combine(&[x(2, 1), x(2, 2)]).unwrap();
        assert_eq!(s.to_string(), "x1^2 + x2^2");
        let s = sum_of_squares_combine(&[&x(2, 1) - &c(2, 1), &x(2, 2) - &c(2, 1)]).unwrap();
        assert_eq!(s.eval(&[int(1), int(1)]).unwrap(), int(0));
        assert_eq!(s.eval(&[int(1), int(2)]).unwrap(), int(1));
        assert!(sum_of_squares_combine(&[]).is_err());
        assert!(sum_of_squares_combine(&[x(1, 1), x(2, 1)]).is_err());
    }

    #[test]
    fn partial_evaluate_examples() {
        // variables: x1 = X1, x2 = Y1, x3 = Y2
        let q = &x(2, 1) * &x(2, 2);
        assert_eq!(
            q.partial_evaluate(&[int(3)]).unwrap(),
            x(1, 1).scale(&int(3))
        );
        let q = &x(2, 1).pow(2) - &x(2, 2);
        assert!(q.partial_evaluate(&[int(2), int(4)]).unwrap().is_zero());
        let q = &(&x(3, 1).pow(2) - &(&x(3, 2) * &x(3, 1))) + &x(3, 3);
        let r = q.partial_evaluate(&[int(3), int(5)]).unwrap();
        assert_eq!(r.to_string(), "x1^2 - 3*x1 + 5");
        assert!(q.partial_evaluate(&vec![int(1); 4]).is_err());
    }

    #[test]
    fn display_is_graded_lex() {
        let p = MultiPoly::from_terms(
            2,
            vec![
                (vec![0, 0], frac(-1, 2)),
                (vec![0, 2], int(1)),
                (vec![1, 1], int(-3)),
                (vec![3, 0], int(1)),
                (vec![1, 0], int(2)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "x1^3 - 3*x1*x2 + x2^2 + 2*x1 - 1/2");
        assert_eq!(
            p.to_sexpr(),
            "(+ (^ x1 3) (* -3 x1 x2) (^ x2 2) (* 2 x1) -1/2)"
        );
    }

    fn small_poly(arity: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..3, arity), -4i64..5, 1i64..4),
            0..5,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(arity, ts.into_iter().map(|(e, n, d)| (e, frac(n, d)))).unwrap()
        })
    }

    fn small_point(arity: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-6i64..7, 1i64..5).prop_map(|(n, d)| frac(n, d)), arity)
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in (-50i64..50, 1i64..20), b in (-50i64..50, 1i64..20), c in (-50i64..50, 1i64..20)) {
            let (a, b, c) = (frac(a.0, a.1), frac(b.0, b.1), frac(c.0, c.1));
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn eval_is_ring_homomorphism(p in small_poly(3), q in small_poly(3), pt in small_point(3)) {
            let (ep, eq) = (p.eval(&pt).unwrap(), q.eval(&pt).unwrap());
            prop_assert_eq!((&p + &q).eval(&pt).unwrap(), &ep + &eq);
            prop_assert_eq!((&p * &q).eval(&pt).unwrap(), ep * eq);
        }

        #[test]
        fn sum_of_squares_zero_set(p in small_poly(2), q in small_poly(2), pt in small_point(2)) {
            let s = sum_of_squares_combine(&[p.clone(), q.clone()]).unwrap();
            let both = p.eval(&pt).unwrap().is_zero() && q.eval(&pt).unwrap().is_zero();
            prop_assert_eq!(both, s.eval(&pt).unwrap().is_zero());
        }

        #[test]
        fn partial_evaluate_commutes(q in small_poly(4), xs in small_point(2), ys in small_point(2)) {
            let r = q.partial_evaluate(&ys).unwrap();
            let mut full = xs.clone();
            full.extend(ys.iter().cloned());
            prop_assert_eq!(r.eval(&xs).unwrap(), q.eval(&full).unwrap());
        }
    }
}
