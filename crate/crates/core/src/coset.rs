//! Characters `χ_k(a₁,…,aₙ) = k₁a₁ + … + kₙaₙ`, their kernels on Γⁿ, the
//! sets `D_{k,e} = χ_k⁻¹(eΓ) ∩ Γⁿ`, and finite unions of cosets of `(lΓ)ⁿ`.
//!
//! A [`CosetUnion`] is a set of residues in `(Γ/lΓ)ⁿ`. Binary operations
//! first bring both operands to the least common multiple of their moduli,
//! after which union, intersection and complement (relative to Γⁿ) are plain
//! set operations. Every quotient enumeration is checked against a size
//! ceiling.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fg::{product_of_ranges, Binner, Coords, GammaSpec, Histogram, Quotient};
use crate::formula::Qf;
use crate::group::Point;
use crate::num::{lcm_u64, Rational};
use crate::snf::kernel_basis;

pub const DEFAULT_CEILING: u64 = 1_000_000;

/// Integer character `k = (k₁,…,kₙ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn new(k: Vec<i64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::input("a character needs at least one entry"));
        }
        Ok(Character(k))
    }

    pub fn zero(n: usize) -> Self {
        Character(vec![0; n])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// `χ_k` applied to a tuple of points.
    pub fn apply(&self, gamma: &GammaSpec, points: &[Point]) -> Point {
        let b = gamma.backend();
        self.0
            .iter()
            .zip(points)
            .fold(Point::Identity, |acc, (&k, p)| {
                b.sum(&acc, &b.mul_unchecked(k, p))
            })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Character {
    type Err = Error;

    /// Accepts `1,-1` or `(1,-1)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let k = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::input(format!("bad character entry {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Character::new(k)
    }
}

/// Exact description of `ker χ_k ∩ Γⁿ` in Γ-coordinates. Since Γ is the
/// direct sum of its free and torsion parts, the kernel is the sum of an
/// integer lattice in `ℤ^{rn}` and a finite set of torsion residue tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDesc {
    pub n: usize,
    pub rank: usize,
    /// Basis rows of length `r·n`; entries `[j·r .. (j+1)·r]` belong to point `j`.
    pub free_lattice: Vec<Vec<i64>>,
    /// Torsion residue tuples, flattened, `n` blocks of one entry per
    /// torsion factor.
    pub torsion_solutions: Vec<Vec<u64>>,
}

impl KernelDesc {
    /// The `j`-th generator as a tuple of coordinates (lattice basis first,
    /// then torsion solutions).
    pub fn generators(&self, tors_len: usize) -> Vec<Vec<Coords>> {
        let r = self.rank;
        let lattice = self.free_lattice.iter().map(|v| {
            (0..self.n)
                .map(|j| Coords {
                    free: v[j * r..(j + 1) * r].to_vec(),
                    tors: vec![0; tors_len],
                })
                .collect()
        });
        let tors = self.torsion_solutions.iter().map(|t| {
            (0..self.n)
                .map(|j| Coords {
                    free: vec![0; r],
                    tors: t[j * tors_len..(j + 1) * tors_len].to_vec(),
                })
                .collect()
        });
        lattice.chain(tors).collect()
    }
}

/// Finite union of cosets of `(lΓ)ⁿ`, stored as residues of `(Γ/lΓ)ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetUnion {
    n: usize,
    quotient: Quotient,
    residues: BTreeSet<Vec<u64>>,
    coarsened: bool,
}

impl CosetUnion {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.quotient.modulus
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// Flattened residue tuples: `n` blocks, each a residue of `Γ/lΓ`.
    pub fn residues(&self) -> &BTreeSet<Vec<u64>> {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// True if the union was produced from kernel cosets of infinite index
    /// and so only over-approximates them.
    pub fn coarsened(&self) -> bool {
        self.coarsened
    }

    /// Residue tuples split per point.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<&[u64]>> {
        let d = self.quotient.moduli.len();
        let n = self.n;
        self.residues
            .iter()
            .map(move |r| (0..n).map(|j| &r[j * d..(j + 1) * d]).collect())
    }

    /// Representatives of every residue tuple, realized in Γⁿ.
    pub fn representatives(&self, gamma: &GammaSpec) -> Vec<(Vec<Coords>, Vec<Point>)> {
        self.tuples()
            .map(|t| {
                let coords: Vec<Coords> =
                    t.iter().map(|r| self.quotient.representative(r)).collect();
                let points = coords.iter().map(|c| gamma.realize_unchecked(c)).collect();
                (coords, points)
            })
            .collect()
    }

    /// Membership of a tuple given in Γ-coordinates.
    pub fn contains_coords(&self, coords: &[Coords]) -> bool {
        coords.len() == self.n && self.residues.contains(&self.reduce(coords))
    }

    fn reduce(&self, coords: &[Coords]) -> Vec<u64> {
        coords
            .iter()
            .flat_map(|c| self.quotient.reduce(c))
            .collect()
    }
}

fn render_residue(r: &[u64]) -> String {
    let parts: Vec<String> = r.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

impl fmt::Display for CosetUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .tuples()
            .map(|t| {
                if t.len() == 1 {
                    render_residue(t[0])
                } else {
                    let parts: Vec<String> = t.iter().map(|r| render_residue(r)).collect();
                    format!("({})", parts.join(", "))
                }
            })
            .collect();
        write!(f, "mod {}: {{{}}}", self.quotient.modulus, items.join(", "))
    }
}

/// Outcome of a membership query that needs to decompose points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    True,
    False,
    Undecided { bound: u64 },
}

impl From<bool> for Membership {
    fn from(b: bool) -> Self {
        if b {
            Membership::True
        } else {
            Membership::False
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::True => write!(f, "true"),
            Membership::False => write!(f, "false"),
            Membership::Undecided { bound } => write!(f, "undecided(bound={bound})"),
        }
    }
}

/// Coset computations over a fixed Γ with a quotient-size ceiling.
#[derive(Clone, Copy, Debug)]
pub struct CosetEngine<'g> {
    gamma: &'g GammaSpec,
    ceiling: u64,
}

impl<'g> CosetEngine<'g> {
    pub fn new(gamma: &'g GammaSpec) -> Self {
        Self::with_ceiling(gamma, DEFAULT_CEILING)
    }

    pub fn with_ceiling(gamma: &'g GammaSpec, ceiling: u64) -> Self {
        CosetEngine { gamma, ceiling }
    }

    pub fn gamma(&self) -> &'g GammaSpec {
        self.gamma
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    fn tors_factors(&self) -> &[u64] {
        &self.gamma.torsion().factors
    }

    fn check_size(&self, size: u128) -> Result<()> {
        if size > self.ceiling as u128 {
            return Err(Error::Ceiling {
                attempted: size,
                ceiling: self.ceiling,
            });
        }
        Ok(())
    }

    fn tuple_moduli(&self, q: &Quotient, n: usize) -> Result<Vec<u64>> {
        let size = q.size().checked_pow(n as u32).unwrap_or(u128::MAX);
        self.check_size(size)?;
        Ok(q.moduli.repeat(n))
    }

    /// `(Γ/lΓ)ⁿ`, the whole of Γⁿ.
    pub fn full(&self, n: usize, l: u64) -> Result<CosetUnion> {
        let q = self.gamma.quotient(l);
        let moduli = self.tuple_moduli(&q, n)?;
        Ok(CosetUnion {
            n,
            quotient: q,
            residues: product_of_ranges(&moduli).into_iter().collect(),
            coarsened: false,
        })
    }

    pub fn empty(&self, n: usize, l: u64) -> Result<CosetUnion> {
        if l == 0 {
            return Err(Error::input("modulus must be positive"));
        }
        Ok(CosetUnion {
            n,
            quotient: self.gamma.quotient(l),
            residues: BTreeSet::new(),
            coarsened: false,
        })
    }

    /// Builds a union from explicit residue tuples given as coordinates.
    pub fn from_coords(&self, l: u64, tuples: &[Vec<Coords>]) -> Result<CosetUnion> {
        let n = tuples.first().map_or(1, Vec::len);
        let mut u = self.empty(n, l)?;
        for t in tuples {
            if t.len() != n {
                return Err(Error::input("tuples of different lengths"));
            }
            for c in t {
                self.gamma.check_coords(c)?;
            }
            u.residues.insert(u.reduce(t));
        }
        Ok(u)
    }

    /// `ker χ_k ∩ Γⁿ`.
    pub fn kernel_lattice(&self, k: &Character) -> Result<KernelDesc> {
        let n = k.arity();
        let r = self.gamma.rank();
        let matrix: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut row = vec![0; r * n];
                for (j, &kj) in k.0.iter().enumerate() {
                    row[j * r + i] = kj;
                }
                row
            })
            .collect();
        let mut free_lattice = if r == 0 {
            Vec::new()
        } else {
            kernel_basis(&matrix, r * n)?
        };
        for v in &mut free_lattice {
            if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let factors = self.tors_factors();
        let tuple_moduli = factors.repeat(n);
        let size: u128 = tuple_moduli.iter().map(|&m| m as u128).product();
        self.check_size(size)?;
        let torsion_solutions = product_of_ranges(&tuple_moduli)
            .into_iter()
            .filter(|t| {
                factors.iter().enumerate().all(|(i, &f)| {
                    let s: i128 =
                        k.0.iter()
                            .enumerate()
                            .map(|(j, &kj)| kj as i128 * t[j * factors.len() + i] as i128)
                            .sum();
                    s.rem_euclid(f as i128) == 0
                })
            })
            .collect();
        Ok(KernelDesc {
            n,
            rank: r,
            free_lattice,
            torsion_solutions,
        })
    }

    /// `D_{k,e} = χ_k⁻¹(eΓ) ∩ Γⁿ` at modulus `e`: the kernel of the induced
    /// map `(Γ/eΓ)ⁿ → Γ/eΓ`.
    pub fn dke(&self, k: &Character, e: u64) -> Result<CosetUnion> {
        if e == 0 {
            return Err(Error::input("modulus e must be positive"));
        }
        let n = k.arity();
        let q = self.gamma.quotient(e);
        let d = q.moduli.len();
        let moduli = self.tuple_moduli(&q, n)?;
        let residues = product_of_ranges(&moduli)
            .into_iter()
            .filter(|t| {
                let image = k.0.iter().enumerate().fold(vec![0; d], |acc, (j, &kj)| {
                    q.add(&acc, &q.scale(kj, &t[j * d..(j + 1) * d]))
                });
                image.iter().all(|&x| x == 0)
            })
            .collect();
        Ok(CosetUnion {
            n,
            quotient: q,
            residues,
            coarsened: false,
        })
    }

    /// The same set of tuples re-expressed modulo `lΓ`.
    pub fn rescale(&self, u: &CosetUnion, l: u64) -> Result<CosetUnion> {
        if l == 0 || !l.is_multiple_of(u.modulus()) {
            return Err(Error::input(format!(
                "cannot rescale a mod-{} union to modulus {l}",
                u.modulus()
            )));
        }
        if l == u.modulus() {
            return Ok(u.clone());
        }
        let q = self.gamma.quotient(l);
        let coarse = &u.quotient.moduli.repeat(u.n);
        let residues = if u.residues.is_empty() {
            BTreeSet::new()
        } else {
            let moduli = self.tuple_moduli(&q, u.n)?;
            product_of_ranges(&moduli)
                .into_iter()
                .filter(|t| {
                    let down: Vec<u64> = t.iter().zip(coarse).map(|(&x, &m)| x % m).collect();
                    u.residues.contains(&down)
                })
                .collect()
        };
        Ok(CosetUnion {
            n: u.n,
            quotient: q,
            residues,
            coarsened: u.coarsened,
        })
    }

    fn common(&self, a: &CosetUnion, b: &CosetUnion) -> Result<(CosetUnion, CosetUnion)> {
        if a.n != b.n {
            return Err(Error::input(format!("arity mismatch: {} vs {}", a.n, b.n)));
        }
        let l = lcm_u64(a.modulus(), b.modulus());
        Ok((self.rescale(a, l)?, self.rescale(b, l)?))
    }

    fn combine(
        &self,
        a: &CosetUnion,
        b: &CosetUnion,
        op: impl Fn(&BTreeSet<Vec<u64>>, &BTreeSet<Vec<u64>>) -> BTreeSet<Vec<u64>>,
    ) -> Result<CosetUnion> {
        let (a, b) = self.common(a, b)?;
        Ok(CosetUnion {
            n: a.n,
            residues: op(&a.residues, &b.residues),
            coarsened: a.coarsened || b.coarsened,
            quotient: a.quotient,
        })
    }

    pub fn union(&self, a: &CosetUnion, b: &CosetUnion) -> Result<CosetUnion> {
        self.combine(a, b, |x, y| x.union(y).cloned().collect())
    }

    pub fn intersect(&self, a: &CosetUnion, b: &CosetUnion) -> Result<CosetUnion> {
        self.combine(a, b, |x, y| x.intersection(y).cloned().collect())
    }

    pub fn difference(&self, a: &CosetUnion, b: &CosetUnion) -> Result<CosetUnion> {
        self.combine(a, b, |x, y| x.difference(y).cloned().collect())
    }

    /// Complement in Γⁿ.
    pub fn complement(&self, u: &CosetUnion) -> Result<CosetUnion> {
        let full = self.full(u.n, u.modulus())?;
        Ok(CosetUnion {
            residues: full.residues.difference(&u.residues).cloned().collect(),
            ..full
        })
    }

    /// Decomposes each point within the coefficient box and tests its
    /// residue tuple.
    pub fn member(&self, u: &CosetUnion, tuple: &[Point], bound: u64) -> Result<Membership> {
        if tuple.len() != u.n {
            return Err(Error::input(format!(
                "union has arity {}, tuple has {} points",
                u.n,
                tuple.len()
            )));
        }
        let table = self.gamma.box_table(bound);
        let mut coords = Vec::with_capacity(tuple.len());
        for p in tuple {
            self.gamma.backend().check_point(p)?;
            match table.lookup(&self.gamma.backend().normalize(p.clone())) {
                Some(c) => coords.push(c.clone()),
                None => return Ok(Membership::Undecided { bound }),
            }
        }
        Ok(u.contains_coords(&coords).into())
    }

    /// Image of `⋃ (gᵢ + ker χ_{kᵢ} ∩ Γⁿ)` in `(Γ/lΓ)ⁿ`. The image is exact
    /// only when every kernel contains `(lΓ)ⁿ`; otherwise the result
    /// over-approximates the kernel cosets and is flagged as coarsened.
    pub fn from_kernel_cosets(
        &self,
        pairs: &[(Vec<Coords>, Character)],
        l: u64,
    ) -> Result<CosetUnion> {
        let n = pairs.first().map_or(1, |(g, _)| g.len());
        let mut out = self.empty(n, l)?;
        let q = out.quotient.clone();
        let d = q.moduli.len();
        let moduli = q.moduli.repeat(n);
        let size: u128 = q.size().checked_pow(n as u32).unwrap_or(u128::MAX);
        self.check_size(size)?;
        let add = |a: &[u64], b: &[u64]| -> Vec<u64> {
            a.iter()
                .zip(b)
                .zip(&moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect()
        };
        let exponent = self.tors_factors().iter().copied().fold(1, lcm_u64);
        let r = self.gamma.rank();
        for (g, k) in pairs {
            if g.len() != n || k.arity() != n {
                return Err(Error::input("base and character arities must agree"));
            }
            for c in g {
                self.gamma.check_coords(c)?;
            }
            let exact = k.0.iter().all(|&kj| {
                let lk = (l as i128) * (kj as i128);
                lk == 0 || (r == 0 && lk % exponent as i128 == 0)
            });
            out.coarsened |= !exact;
            let kernel = self.kernel_lattice(k)?;
            let gens: Vec<Vec<u64>> = kernel
                .generators(self.tors_factors().len())
                .iter()
                .map(|t| out.reduce(t))
                .collect();
            let zero = vec![0u64; n * d];
            let mut seen: BTreeSet<Vec<u64>> = BTreeSet::from([zero.clone()]);
            let mut queue = VecDeque::from([zero]);
            while let Some(v) = queue.pop_front() {
                for h in &gens {
                    let w = add(&v, h);
                    if seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
            let shift = out.reduce(g);
            out.residues.extend(seen.iter().map(|v| add(v, &shift)));
        }
        Ok(out)
    }

    /// Membership in the induced set `E ∩ u`, where `E` is cut out by the
    /// quantifier-free condition on the `2n` point coordinates. A tuple whose
    /// identity slot is referenced by the condition lies outside the affine
    /// chart and is not a member.
    pub fn induced_member(
        &self,
        qf: &Qf,
        u: &CosetUnion,
        tuple: &[Point],
        bound: u64,
    ) -> Result<Membership> {
        let mut assignment = Vec::with_capacity(2 * tuple.len());
        for (j, p) in tuple.iter().enumerate() {
            match p.coords() {
                Some((x, y)) => {
                    assignment.push(x.clone());
                    assignment.push(y.clone());
                }
                None if qf.uses_var(2 * j + 1) || qf.uses_var(2 * j + 2) => {
                    return Ok(Membership::False)
                }
                None => {
                    assignment.push(Rational::default());
                    assignment.push(Rational::default());
                }
            }
        }
        if !qf.eval(&assignment)? {
            return Ok(Membership::False);
        }
        self.member(u, tuple, bound)
    }

    /// Histogram of x-coordinates of union members among the affine points
    /// of the coefficient box with height at most `height_bound`. Only
    /// `n = 1` is supported.
    pub fn density_sample(
        &self,
        u: &CosetUnion,
        lo: &Rational,
        hi: &Rational,
        height_bound: u64,
        bins: usize,
        coeff_bound: u64,
    ) -> Result<Histogram> {
        if u.n != 1 {
            return Err(Error::Unsupported(format!(
                "density sampling needs arity 1, got {}",
                u.n
            )));
        }
        let mut binner = Binner::new(lo, hi, bins)?;
        for (c, p) in self.gamma.bounded_points(height_bound, coeff_bound) {
            if u.contains_coords(std::slice::from_ref(&c)) {
                binner.add(p.x().expect("bounded points are affine"));
            }
        }
        Ok(binner.finish())
    }
}
