//! Rational points of a one-dimensional algebraic group over ℚ: a Weierstrass
//! curve `y² = x³ + ax + b` or the unit circle `x² + y² = 1`.
//!
//! The identity is an abstract [`Point::Identity`] tag. On a curve it is the
//! point at infinity; on the circle it stands for `(1, 0)`, and any computed
//! `(1, 0)` is normalized to the tag.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{height_of, int, parse_rational, rational_sqrt, Rational};

/// Mazur: the order of a rational torsion point on an elliptic curve is at
/// most 12.
pub const MAX_TORSION_ORDER: u64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Curve { a: Rational, b: Rational },
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Identity,
    Affine { x: Rational, y: Rational },
}

impl Point {
    pub fn affine(x: Rational, y: Rational) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Point::Identity)
    }

    pub fn coords(&self) -> Option<(&Rational, &Rational)> {
        match self {
            Point::Identity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }

    pub fn x(&self) -> Option<&Rational> {
        self.coords().map(|c| c.0)
    }

    /// Naive height of the x-coordinate; the identity has height 0.
    pub fn naive_height(&self) -> BigInt {
        match self {
            Point::Identity => BigInt::zero(),
            Point::Affine { x, .. } => height_of(x),
        }
    }
}

/// Orders by naive height, then x, then y; the identity comes first.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Identity, Point::Identity) => Ordering::Equal,
            (Point::Identity, _) => Ordering::Less,
            (_, Point::Identity) => Ordering::Greater,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => height_of(x1)
                .cmp(&height_of(x2))
                .then_with(|| x1.cmp(x2))
                .then_with(|| y1.cmp(y2)),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Identity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "O" {
            return Ok(Point::Identity);
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::input(format!("point must be \"O\" or \"(x, y)\": {s:?}")))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::input(format!("point must be \"O\" or \"(x, y)\": {s:?}")))?;
        Ok(Point::affine(parse_rational(x)?, parse_rational(y)?))
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Finite torsion subgroup in invariant-factor form: the element with residue
/// vector `c` is `Σ cᵢ·generators[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup {
    pub factors: Vec<u64>,
    pub generators: Vec<Point>,
}

impl TorsionGroup {
    pub fn trivial() -> Self {
        TorsionGroup {
            factors: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// All residue vectors in lexicographic order.
    pub fn residues(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|r| {
                    (0..f).map(move |c| {
                        let mut r = r.clone();
                        r.push(c);
                        r
                    })
                })
                .collect();
        }
        out
    }

    pub fn element(&self, backend: &Backend, residues: &[u64]) -> Point {
        residues
            .iter()
            .zip(&self.generators)
            .fold(Point::Identity, |acc, (&c, g)| {
                backend.sum(&acc, &backend.mul_unchecked(c as i64, g))
            })
    }

    /// Structure of the finite group formed by `elements` (which must be closed
    /// under the group law and contain the identity). Rational torsion groups
    /// are either cyclic or `Z/2 x Z/2m`.
    pub fn from_elements(backend: &Backend, elements: &BTreeSet<Point>) -> Self {
        let n = elements.len() as u64;
        if n <= 1 {
            return Self::trivial();
        }
        let with_order: Vec<(u64, &Point)> = elements
            .iter()
            .map(|p| (backend.order(p, n).expect("element of a finite group"), p))
            .collect();
        let max_order = with_order.iter().map(|(o, _)| *o).max().unwrap();
        let pick = |candidates: Vec<&Point>| -> Point {
            // smallest in point order, preferring the representative with y ≥ 0
            let best = candidates.into_iter().min().unwrap().clone();
            match &best {
                Point::Affine { y, .. } if y.is_negative() => {
                    let inv = backend.neg(&best);
                    if elements.contains(&inv) {
                        inv
                    } else {
                        best
                    }
                }
                _ => best,
            }
        };
        let big = pick(
            with_order
                .iter()
                .filter(|(o, _)| *o == max_order)
                .map(|(_, p)| *p)
                .collect(),
        );
        if max_order == n {
            return TorsionGroup {
                factors: vec![n],
                generators: vec![big],
            };
        }
        let cyclic: BTreeSet<Point> = (0..max_order)
            .map(|k| backend.mul_unchecked(k as i64, &big))
            .collect();
        let small = pick(
            with_order
                .iter()
                .filter(|(o, p)| *o == 2 && !cyclic.contains(*p))
                .map(|(_, p)| *p)
                .collect(),
        );
        TorsionGroup {
            factors: vec![2, max_order],
            generators: vec![small, big],
        }
    }

    pub fn describe(&self) -> String {
        if self.is_trivial() {
            "trivial".to_string()
        } else {
            self.factors
                .iter()
                .map(|f| format!("Z/{f}"))
                .collect::<Vec<_>>()
                .join(" x ")
        }
    }
}

impl Backend {
    pub fn curve(a: Rational, b: Rational) -> Result<Self> {
        let backend = Backend::Curve { a, b };
        backend.validate()?;
        Ok(backend)
    }

    /// `4a³ + 27b²` for a curve; `None` for the circle.
    pub fn discriminant_term(&self) -> Option<Rational> {
        match self {
            Backend::Curve { a, b } => Some(int(4) * a * a * a + int(27) * b * b),
            Backend::Circle => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.discriminant_term() {
            Some(d) if d.is_zero() => Err(Error::Validation(
                "singular curve: 4a^3+27b^2 = 0".to_string(),
            )),
            _ => Ok(()),
        }
    }

    /// Canonical text used to key caches: `a=..,b=..` or `circle`.
    pub fn fingerprint(&self) -> String {
        match self {
            Backend::Curve { a, b } => format!("a={a},b={b}"),
            Backend::Circle => "circle".to_string(),
        }
    }

    /// Right-hand side `x³ + ax + b` (curve) or `1 - x²` (circle).
    fn rhs(&self, x: &Rational) -> Rational {
        match self {
            Backend::Curve { a, b } => x * x * x + a * x + b,
            Backend::Circle => Rational::one() - x * x,
        }
    }

    pub fn on_variety(&self, p: &Point) -> bool {
        match p {
            Point::Identity => true,
            Point::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    /// Normalizes the circle's `(1, 0)` to the identity tag.
    pub fn normalize(&self, p: Point) -> Point {
        match (&self, &p) {
            (Backend::Circle, Point::Affine { x, y }) if x.is_one() && y.is_zero() => {
                Point::Identity
            }
            _ => p,
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if self.on_variety(p) {
            Ok(())
        } else {
            Err(Error::input(format!("point {p} is not on the variety")))
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Identity => Point::Identity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.sum(p, q))
    }

    /// Group law without the on-variety check; callers guarantee it.
    pub(crate) fn sum(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Identity, _) => return q.clone(),
            (_, Point::Identity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        match self {
            Backend::Curve { a, .. } => {
                let slope = if x1 == x2 {
                    if *y1 == -y2 {
                        return Point::Identity;
                    }
                    (int(3) * x1 * x1 + a) / (int(2) * y1)
                } else {
                    (y2 - y1) / (x2 - x1)
                };
                let x3 = &slope * &slope - x1 - x2;
                let y3 = slope * (x1 - &x3) - y1;
                Point::affine(x3, y3)
            }
            Backend::Circle => {
                let x3 = x1 * x2 - y1 * y2;
                let y3 = x1 * y2 + x2 * y1;
                self.normalize(Point::affine(x3, y3))
            }
        }
    }

    pub fn scalar_mul(&self, k: i64, p: &Point) -> Result<Point> {
        self.check_point(p)?;
        Ok(self.mul_unchecked(k, p))
    }

    pub(crate) fn mul_unchecked(&self, k: i64, p: &Point) -> Point {
        let mut base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = Point::Identity;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.sum(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.sum(&base, &base);
            }
        }
        acc
    }

    /// Order of `p` if it is at most `limit`.
    pub fn order(&self, p: &Point, limit: u64) -> Option<u64> {
        let mut acc = p.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Some(k);
            }
            acc = self.sum(&acc, p);
        }
        None
    }

    pub fn is_torsion(&self, p: &Point) -> bool {
        match self {
            Backend::Curve { .. } => self.order(p, MAX_TORSION_ORDER).is_some(),
            Backend::Circle => self.order(p, 4).is_some(),
        }
    }

    /// Every point with `x = u/v`, `|u| ≤ bound`, `1 ≤ v ≤ bound`,
    /// `gcd(u, v) = 1` and rational `y`, both signs of `y`, plus the identity.
    /// Sorted by height, then x, then y.
    pub fn enumerate_rational_points(&self, bound: u64) -> Vec<Point> {
        let mut out = BTreeSet::new();
        out.insert(Point::Identity);
        let n = bound as i64;
        for v in 1..=n {
            for u in -n..=n {
                if u.gcd(&v) != 1 {
                    continue;
                }
                let x = Rational::new(BigInt::from(u), BigInt::from(v));
                if let Some(y) = rational_sqrt(&self.rhs(&x)) {
                    out.insert(self.normalize(Point::affine(x.clone(), -&y)));
                    out.insert(self.normalize(Point::affine(x, y)));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Number of connected components of the real locus: 2 iff the cubic has
    /// three real roots, i.e. `4a³ + 27b² < 0`.
    pub fn real_components(&self) -> u8 {
        match self.discriminant_term() {
            Some(d) if d.is_negative() => 2,
            _ => 1,
        }
    }

    /// True iff `p` lies on the connected component of the identity. With two
    /// components this is the unbounded branch `x ≥ e₃` (largest root). Points
    /// of the curve never lie strictly between the two larger roots, and the
    /// positive critical point `√(−a/3)` of the cubic lies there, so the test
    /// is `x > √(−a/3)`, decided exactly as `x > 0 ∧ 3x² + a > 0`.
    pub fn component_of(&self, p: &Point) -> bool {
        match (self, p) {
            (_, Point::Identity) | (Backend::Circle, _) => true,
            (Backend::Curve { a, .. }, Point::Affine { x, .. }) => {
                if self.real_components() == 1 {
                    return true;
                }
                x.is_positive() && (int(3) * x * x + a).is_positive()
            }
        }
    }

    /// Rational torsion subgroup. Curves: Nagell–Lutz candidates on an
    /// integral model, confirmed by exact multiples up to Mazur's bound.
    /// Circle: `{(±1, 0), (0, ±1)}`.
    pub fn torsion_subgroup(&self) -> TorsionGroup {
        TorsionGroup::from_elements(self, &self.torsion_points())
    }

    pub fn torsion_points(&self) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        out.insert(Point::Identity);
        match self {
            Backend::Circle => {
                for (x, y) in [(-1, 0), (0, 1), (0, -1)] {
                    out.insert(Point::affine(int(x), int(y)));
                }
            }
            Backend::Curve { a, b } => {
                let scale = minimal_integral_scale(a.denom(), b.denom());
                let u2 = &scale * &scale;
                let u3 = &u2 * &scale;
                let big_a = (a * Rational::from_integer(&u2 * &u2)).to_integer();
                let big_b = (b * Rational::from_integer(&u3 * &u3)).to_integer();
                let disc: BigInt =
                    BigInt::from(4) * &big_a * &big_a * &big_a + BigInt::from(27) * &big_b * &big_b;
                let mut candidates: Vec<(BigInt, BigInt)> = Vec::new();
                let mut ys = square_divisor_roots(&disc.abs());
                ys.insert(0, BigInt::zero());
                for y in ys {
                    let c = &big_b - &y * &y;
                    for x in integer_roots_depressed_cubic(&big_a, &c) {
                        candidates.push((x.clone(), y.clone()));
                        if !y.is_zero() {
                            candidates.push((x, -&y));
                        }
                    }
                }
                let u2q = Rational::from_integer(u2);
                let u3q = Rational::from_integer(u3);
                for (x, y) in candidates {
                    let p = Point::affine(
                        Rational::from_integer(x) / &u2q,
                        Rational::from_integer(y) / &u3q,
                    );
                    debug_assert!(self.on_variety(&p));
                    if self.order(&p, MAX_TORSION_ORDER).is_some() {
                        out.insert(p);
                    }
                }
            }
        }
        out
    }

    /// The subgroup generated by finitely many torsion points.
    pub fn torsion_closure(&self, gens: &[Point]) -> BTreeSet<Point> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([Point::Identity]);
        while let Some(p) = queue.pop_front() {
            if !seen.insert(p.clone()) {
                continue;
            }
            for g in gens {
                let q = self.sum(&p, g);
                if !seen.contains(&q) {
                    queue.push_back(q);
                }
            }
        }
        seen
    }
}

/// Smallest `u > 0` with `a·u⁴` and `b·u⁶` integral, given the denominators.
fn minimal_integral_scale(den_a: &BigInt, den_b: &BigInt) -> BigInt {
    let mut u = BigInt::one();
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    for d in [den_a, den_b] {
        let (factors, rest) = trial_factor(d);
        primes.extend(factors.into_iter().map(|(p, _)| p));
        if !rest.is_one() {
            // unfactored cofactor: treated as a single prime
            primes.insert(rest);
        }
    }
    for p in primes {
        let k = valuation(den_a, &p)
            .div_ceil(4)
            .max(valuation(den_b, &p).div_ceil(6));
        for _ in 0..k {
            u *= &p;
        }
    }
    u
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Trial division up to `TRIAL_LIMIT`; returns the prime powers found and
/// the unfactored cofactor (1 when fully factored).
fn trial_factor(n: &BigInt) -> (Vec<(BigInt, u32)>, BigInt) {
    const TRIAL_LIMIT: u64 = 1_000_000;
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let bp = BigInt::from(p);
    if n > BigInt::one() && &bp * &bp > n {
        out.push((n, 1));
        n = BigInt::one();
    }
    (out, n)
}

/// All `y > 0` with `y² | n`, ascending. A cofactor left over by trial
/// division contributes only when it is itself a perfect square.
fn square_divisor_roots(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return Vec::new();
    }
    let (mut factors, rest) = trial_factor(n);
    if !rest.is_one() {
        if let Some(r) = crate::num::int_sqrt_exact(&rest) {
            factors.push((r, 2));
        }
    }
    let mut roots = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for r in &roots {
            let mut acc = r.clone();
            for _ in 0..=e / 2 {
                next.push(acc.clone());
                acc *= &p;
            }
        }
        roots = next;
    }
    roots.sort();
    roots
}

/// Integer roots of `x³ + a·x + c`, by bisection on each monotone stretch.
fn integer_roots_depressed_cubic(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| x * x * x + a * x + c;
    let bound = BigInt::one() + a.abs().max(c.abs());
    let mut pieces: Vec<(BigInt, BigInt, bool)> = Vec::new();
    if !a.is_negative() {
        pieces.push((-&bound, bound.clone(), true));
    } else {
        let m = ((-a) / BigInt::from(3)).sqrt();
        pieces.push((-&bound, -&m - 1, true));
        pieces.push((-&m, m.clone(), false));
        pieces.push((&m + 1, bound.clone(), true));
    }
    let mut roots = BTreeSet::new();
    for (mut lo, mut hi, increasing) in pieces {
        while lo <= hi {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            let v = f(&mid);
            if v.is_zero() {
                roots.insert(mid);
                break;
            }
            if v.is_positive() == increasing {
                hi = mid - 1;
            } else {
                lo = mid + 1;
            }
        }
    }
    roots.into_iter().collect()
}
