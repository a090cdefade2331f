//! Finitely generated subgroups Γ = ⟨g₁, …, g_r⟩ ⊕ T of the rational points.
//!
//! Generators are input; nothing here computes Mordell–Weil generators. Points
//! of Γ are addressed by [`Coords`]: integer coefficients on the free
//! generators plus one residue per torsion invariant factor. Membership is
//! only semi-decidable by search, so [`Decomposition::Undecided`] carries the
//! coefficient bound that was exhausted.
//!
//! Searches over coefficient boxes are exponential in the rank: a box of bound
//! `B` has `(2B+1)^r · |T|` points.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Backend, Point, TorsionGroup};
use crate::num::Rational;
use crate::snf::kernel_basis;

pub const DEFAULT_COEFF_BOUND: u64 = 16;
pub const DEFAULT_AUDIT_BOUND: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coords {
    pub free: Vec<i64>,
    pub tors: Vec<u64>,
}

impl Coords {
    pub fn max_norm(&self) -> u64 {
        self.free
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Shortest-first: max-norm of the free part, then free coefficients
/// lexicographically, then torsion residues.
impl Ord for Coords {
    fn cmp(&self, other: &Self) -> Ordering {
        self.max_norm()
            .cmp(&other.max_norm())
            .then_with(|| self.free.cmp(&other.free))
            .then_with(|| self.tors.cmp(&other.tors))
    }
}

impl PartialOrd for Coords {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "free=[{}] tors=[{}]", join(&self.free), join(&self.tors))
    }
}

/// Ordering of tuples of coordinates: max-norm over the whole tuple first,
/// then lexicographic.
pub fn tuple_cmp(a: &[Coords], b: &[Coords]) -> Ordering {
    let norm = |t: &[Coords]| t.iter().map(Coords::max_norm).max().unwrap_or(0);
    norm(a).cmp(&norm(b)).then_with(|| {
        let fa = a.iter().flat_map(|c| c.free.iter());
        let fb = b.iter().flat_map(|c| c.free.iter());
        fa.cmp(fb).then_with(|| {
            let ta = a.iter().flat_map(|c| c.tors.iter());
            let tb = b.iter().flat_map(|c| c.tors.iter());
            ta.cmp(tb)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Found(Coords),
    Undecided { bound: u64 },
}

impl Decomposition {
    pub fn coords(&self) -> Option<&Coords> {
        match self {
            Decomposition::Found(c) => Some(c),
            Decomposition::Undecided { .. } => None,
        }
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decomposition::Found(c) => write!(f, "{c}"),
            Decomposition::Undecided { bound } => write!(f, "undecided(bound={bound})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSpec {
    backend: Backend,
    free_gens: Vec<Point>,
    torsion: TorsionGroup,
}

/// All points of Γ whose free coefficients lie in `[-bound, bound]`, in
/// shortest-first order, with a reverse index from point to coordinates.
#[derive(Clone, Debug)]
pub struct BoxTable {
    pub bound: u64,
    entries: Vec<(Coords, Point)>,
    index: HashMap<Point, usize>,
}

impl BoxTable {
    pub fn entries(&self) -> &[(Coords, Point)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Shortest coordinates of `p` inside the box.
    pub fn lookup(&self, p: &Point) -> Option<&Coords> {
        self.index.get(p).map(|&i| &self.entries[i].0)
    }

    pub fn decompose(&self, p: &Point) -> Decomposition {
        match self.lookup(p) {
            Some(c) => Decomposition::Found(c.clone()),
            None => Decomposition::Undecided { bound: self.bound },
        }
    }

    /// Index tuples into [`entries`](Self::entries) for `n` points, ordered
    /// by [`tuple_cmp`].
    pub fn tuples(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        let total = (self.entries.len() as u128).saturating_pow(n as u32);
        if total > MAX_TUPLES as u128 {
            return Err(Error::Ceiling {
                attempted: total,
                ceiling: MAX_TUPLES,
            });
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..self.entries.len()).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        if n > 1 {
            let coords = |t: &[usize]| -> Vec<Coords> {
                t.iter().map(|&i| self.entries[i].0.clone()).collect()
            };
            out.sort_by_cached_key(|t| TupleKey(coords(t)));
        }
        Ok(out)
    }
}

/// Upper limit on the number of tuples a block search will enumerate.
pub const MAX_TUPLES: u64 = 4_000_000;

#[derive(PartialEq, Eq)]
struct TupleKey(Vec<Coords>);

impl Ord for TupleKey {
    fn cmp(&self, other: &Self) -> Ordering {
        tuple_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for TupleKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Γ/lΓ ≅ (ℤ/l)^r ⊕ ⊕ᵢ ℤ/gcd(l, tᵢ). Residue vectors hold one entry per
/// coordinate: `r` free entries modulo `l` followed by one entry per torsion
/// factor modulo `gcd(l, tᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quotient {
    pub modulus: u64,
    pub moduli: Vec<u64>,
    pub rank: usize,
}

impl Quotient {
    pub fn new(rank: usize, torsion_factors: &[u64], modulus: u64) -> Self {
        assert!(modulus >= 1, "quotient modulus must be positive");
        let mut moduli = vec![modulus; rank];
        moduli.extend(torsion_factors.iter().map(|&t| t.gcd(&modulus)));
        Quotient {
            modulus,
            moduli,
            rank,
        }
    }

    pub fn size(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    /// Invariant factors of the quotient (entries equal to 1 dropped).
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut f: Vec<u64> = self.moduli.iter().copied().filter(|&m| m > 1).collect();
        f.sort_unstable();
        f
    }

    pub fn describe(&self) -> String {
        let f = self.invariant_factors();
        if f.is_empty() {
            "trivial".to_string()
        } else {
            f.iter()
                .map(|m| format!("Z/{m}"))
                .collect::<Vec<_>>()
                .join(" x ")
        }
    }

    pub fn reduce(&self, c: &Coords) -> Vec<u64> {
        let l = self.modulus as i64;
        let mut v: Vec<u64> = c.free.iter().map(|&m| m.rem_euclid(l) as u64).collect();
        v.extend(
            c.tors
                .iter()
                .zip(&self.moduli[self.rank..])
                .map(|(&t, &m)| t % m),
        );
        v
    }

    /// Canonical coordinates of a residue: the residue entries themselves.
    pub fn representative(&self, residue: &[u64]) -> Coords {
        Coords {
            free: residue[..self.rank].iter().map(|&m| m as i64).collect(),
            tors: residue[self.rank..].to_vec(),
        }
    }

    /// Every residue vector, lexicographically.
    pub fn residues(&self) -> Vec<Vec<u64>> {
        product_of_ranges(&self.moduli)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn scale(&self, k: i64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| ((k as i128 * x as i128).rem_euclid(m as i128)) as u64)
            .collect()
    }
}

pub(crate) fn product_of_ranges(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &m in moduli {
        out = out
            .into_iter()
            .flat_map(|r| {
                (0..m).map(move |c| {
                    let mut r = r.clone();
                    r.push(c);
                    r
                })
            })
            .collect();
    }
    out
}

/// Finite quotient Γ/lΓ with a transversal realized in Γ.
#[derive(Clone, Debug)]
pub struct GammaMod {
    pub quotient: Quotient,
    pub transversal: Vec<(Vec<u64>, Coords, Point)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dependence {
    /// Shortest nonzero relation `k` with `Σ kᵢ·pᵢ` torsion, normalized so
    /// the first nonzero entry is positive.
    Dependent(Vec<i64>),
    Independent,
    Undecided {
        index: usize,
        bound: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub lo: String,
    pub hi: String,
    pub edges: Vec<String>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Accumulates exact x-values into `bins` equal-width bins of `[lo, hi]`;
/// `hi` falls into the last bin.
pub(crate) struct Binner {
    lo: Rational,
    hi: Rational,
    bins: usize,
    counts: Vec<u64>,
}

impl Binner {
    pub(crate) fn new(lo: &Rational, hi: &Rational, bins: usize) -> Result<Self> {
        if lo >= hi {
            return Err(Error::input(format!("empty interval [{lo}, {hi}]")));
        }
        if bins == 0 {
            return Err(Error::input("bins must be at least 1"));
        }
        Ok(Binner {
            lo: lo.clone(),
            hi: hi.clone(),
            bins,
            counts: vec![0; bins],
        })
    }

    pub(crate) fn bin_of(&self, x: &Rational) -> Option<usize> {
        if x < &self.lo || x > &self.hi {
            return None;
        }
        let pos = (x - &self.lo) * Rational::from_integer(BigInt::from(self.bins))
            / (&self.hi - &self.lo);
        let idx = pos.floor().to_integer();
        let idx: usize = idx.try_into().unwrap_or(usize::MAX);
        Some(idx.min(self.bins - 1))
    }

    pub(crate) fn add(&mut self, x: &Rational) {
        if let Some(i) = self.bin_of(x) {
            self.counts[i] += 1;
        }
    }

    pub(crate) fn edge(&self, i: usize) -> Rational {
        &self.lo + (&self.hi - &self.lo) * Rational::new(BigInt::from(i), BigInt::from(self.bins))
    }

    pub(crate) fn finish(self) -> Histogram {
        Histogram {
            lo: self.lo.to_string(),
            hi: self.hi.to_string(),
            edges: (0..=self.bins).map(|i| self.edge(i).to_string()).collect(),
            counts: self.counts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityEvidence {
    pub cells_in_component: usize,
    pub cells_hit: usize,
    /// `cells_hit / cells_in_component`, as an exact fraction string.
    pub coverage: String,
    pub finite_group: bool,
    pub low_coverage: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityViolation {
    pub point: Point,
    pub n: u64,
    pub multiple_coords: Coords,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomRow {
    pub n: u64,
    pub quotient_size: String,
    pub quotient: String,
    pub purity_checked: usize,
    pub purity_violations: Vec<PurityViolation>,
}

/// Bounded evidence for the axioms of the theory of (ℝ, Γ). Density and
/// purity results are evidence within the search bounds, not proofs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub density: DensityEvidence,
    pub rows: Vec<AxiomRow>,
    pub ml_conditions: String,
}

/// Cell grid `[lo, hi]` split into `bins` parts.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub lo: Rational,
    pub hi: Rational,
    pub bins: usize,
}

impl GammaSpec {
    /// Builds Γ from an explicit free/torsion split and audits the free
    /// generators for independence up to [`DEFAULT_AUDIT_BOUND`].
    pub fn new(backend: Backend, free_gens: Vec<Point>, torsion: TorsionGroup) -> Result<Self> {
        Self::with_audit(backend, free_gens, torsion, DEFAULT_AUDIT_BOUND)
    }

    pub fn with_audit(
        backend: Backend,
        free_gens: Vec<Point>,
        torsion: TorsionGroup,
        audit_bound: u64,
    ) -> Result<Self> {
        backend.validate()?;
        for g in free_gens.iter().chain(&torsion.generators) {
            backend.check_point(g)?;
        }
        for (g, &f) in torsion.generators.iter().zip(&torsion.factors) {
            if backend.order(g, f) != Some(f) {
                return Err(Error::Validation(format!(
                    "torsion generator {g} does not have order {f}"
                )));
            }
        }
        let gamma = GammaSpec {
            backend,
            free_gens,
            torsion,
        };
        gamma.audit_independence(audit_bound)?;
        Ok(gamma)
    }

    /// Splits a generator list into torsion and free parts. The torsion part
    /// of Γ is the subgroup generated by the torsion generators.
    pub fn from_generators(
        backend: Backend,
        gens: &[Point],
        claimed_rank: Option<usize>,
    ) -> Result<Self> {
        backend.validate()?;
        for g in gens {
            backend.check_point(g)?;
        }
        let (tors, free): (Vec<Point>, Vec<Point>) =
            gens.iter().cloned().partition(|g| backend.is_torsion(g));
        if let Some(r) = claimed_rank {
            if r != free.len() {
                return Err(Error::Validation(format!(
                    "claimed rank {r} but {} non-torsion generators",
                    free.len()
                )));
            }
        }
        let elements = backend.torsion_closure(&tors);
        let torsion = TorsionGroup::from_elements(&backend, &elements);
        Self::new(backend, free, torsion)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn free_generators(&self) -> &[Point] {
        &self.free_gens
    }

    pub fn torsion(&self) -> &TorsionGroup {
        &self.torsion
    }

    pub fn rank(&self) -> usize {
        self.free_gens.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_gens.is_empty()
    }

    pub fn zero_coords(&self) -> Coords {
        Coords {
            free: vec![0; self.rank()],
            tors: vec![0; self.torsion.factors.len()],
        }
    }

    pub fn check_coords(&self, c: &Coords) -> Result<()> {
        if c.free.len() != self.rank() || c.tors.len() != self.torsion.factors.len() {
            return Err(Error::input(format!(
                "coordinates {c} do not match rank {} with {} torsion factors",
                self.rank(),
                self.torsion.factors.len()
            )));
        }
        if let Some((t, f)) = c
            .tors
            .iter()
            .zip(&self.torsion.factors)
            .find(|(t, f)| t >= f)
        {
            return Err(Error::input(format!(
                "torsion residue {t} out of range 0..{f}"
            )));
        }
        Ok(())
    }

    pub fn realize(&self, c: &Coords) -> Result<Point> {
        self.check_coords(c)?;
        Ok(self.realize_unchecked(c))
    }

    pub(crate) fn realize_unchecked(&self, c: &Coords) -> Point {
        let free = c
            .free
            .iter()
            .zip(&self.free_gens)
            .fold(Point::Identity, |acc, (&k, g)| {
                self.backend.sum(&acc, &self.backend.mul_unchecked(k, g))
            });
        self.backend
            .sum(&free, &self.torsion.element(&self.backend, &c.tors))
    }

    /// Coordinate-wise sum, torsion residues reduced.
    pub fn add_coords(&self, a: &Coords, b: &Coords) -> Coords {
        self.combine_coords(&[(1, a), (1, b)])
    }

    /// `Σ kᵢ·cᵢ` in coordinates.
    pub fn combine_coords(&self, terms: &[(i64, &Coords)]) -> Coords {
        let mut out = self.zero_coords();
        for (k, c) in terms {
            for (o, x) in out.free.iter_mut().zip(&c.free) {
                *o += k * x;
            }
            for ((o, x), &f) in out.tors.iter_mut().zip(&c.tors).zip(&self.torsion.factors) {
                *o = ((*o as i128 + *k as i128 * *x as i128).rem_euclid(f as i128)) as u64;
            }
        }
        out
    }

    /// Every coordinate vector with free coefficients in `[-bound, bound]`,
    /// shortest first, together with its point.
    pub fn box_table(&self, bound: u64) -> BoxTable {
        let b = bound as i64;
        let backend = &self.backend;
        // multiples[i][m + b] = m·gᵢ
        let multiples: Vec<Vec<Point>> = self
            .free_gens
            .iter()
            .map(|g| {
                let mut pos = vec![Point::Identity];
                for _ in 0..b {
                    let next = backend.sum(pos.last().unwrap(), g);
                    pos.push(next);
                }
                let mut row: Vec<Point> = pos[1..].iter().rev().map(|p| backend.neg(p)).collect();
                row.extend(pos);
                row
            })
            .collect();
        let tors: Vec<(Vec<u64>, Point)> = self
            .torsion
            .residues()
            .into_iter()
            .map(|r| {
                let p = self.torsion.element(backend, &r);
                (r, p)
            })
            .collect();
        let mut free: Vec<(Vec<i64>, Point)> = vec![(Vec::new(), Point::Identity)];
        for row in &multiples {
            free = free
                .into_iter()
                .flat_map(|(c, p)| {
                    row.iter().enumerate().map(move |(i, q)| {
                        let mut c = c.clone();
                        c.push(i as i64 - b);
                        (c, backend.sum(&p, q))
                    })
                })
                .collect();
        }
        let mut entries: Vec<(Coords, Point)> = free
            .iter()
            .flat_map(|(fc, fp)| {
                tors.iter().map(move |(tc, tp)| {
                    (
                        Coords {
                            free: fc.clone(),
                            tors: tc.clone(),
                        },
                        backend.sum(fp, tp),
                    )
                })
            })
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (_, p)) in entries.iter().enumerate() {
            index.entry(p.clone()).or_insert(i);
        }
        BoxTable {
            bound,
            entries,
            index,
        }
    }

    /// Fails if some nonzero `k` with `|kᵢ| ≤ bound` puts `Σ kᵢ·gᵢ` in the
    /// torsion subgroup.
    pub fn audit_independence(&self, bound: u64) -> Result<()> {
        if self.free_gens.is_empty() {
            return Ok(());
        }
        let probe = GammaSpec {
            backend: self.backend.clone(),
            free_gens: self.free_gens.clone(),
            torsion: TorsionGroup::trivial(),
        };
        let table = probe.box_table(bound);
        let torsion = self.backend.torsion_points();
        for (c, p) in table.entries() {
            if c.free.iter().any(|&k| k != 0) && torsion.contains(p) {
                return Err(Error::Validation(format!(
                    "free generators are dependent: coefficients [{}] give a torsion point",
                    join(&c.free)
                )));
            }
        }
        Ok(())
    }

    /// Shortest coordinates of `p` with free coefficients in
    /// `[-bound, bound]`, or `Undecided`.
    pub fn decompose(&self, p: &Point, bound: u64) -> Result<Decomposition> {
        self.backend.check_point(p)?;
        Ok(self.box_table(bound).decompose(p))
    }

    /// Coordinates of some `q ∈ Γ` with `n·q = p`, if one exists.
    pub fn divisible_in_gamma(&self, p: &Point, n: u64, bound: u64) -> Result<Option<Coords>> {
        let c = match self.decompose(p, bound)? {
            Decomposition::Found(c) => c,
            Decomposition::Undecided { bound } => {
                return Err(Error::Precondition(format!(
                    "{p} has no coordinates within bound {bound}"
                )))
            }
        };
        Ok(self.divide_coords(&c, n))
    }

    pub fn divide_coords(&self, c: &Coords, n: u64) -> Option<Coords> {
        if n == 0 {
            return None;
        }
        let ni = n as i64;
        if c.free.iter().any(|m| m % ni != 0) {
            return None;
        }
        let free = c.free.iter().map(|m| m / ni).collect();
        let mut tors = Vec::with_capacity(c.tors.len());
        for (&t, &f) in c.tors.iter().zip(&self.torsion.factors) {
            // n·x ≡ t (mod f)
            tors.push((0..f).find(|&x| (x * n) % f == t)?);
        }
        Some(Coords { free, tors })
    }

    pub fn quotient(&self, l: u64) -> Quotient {
        Quotient::new(self.rank(), &self.torsion.factors, l)
    }

    /// Γ/lΓ with one representative per class, realized in Γ.
    pub fn gamma_mod(&self, l: u64) -> Result<GammaMod> {
        if l == 0 {
            return Err(Error::input("modulus must be at least 1"));
        }
        let quotient = self.quotient(l);
        let transversal = quotient
            .residues()
            .into_iter()
            .map(|r| {
                let c = quotient.representative(&r);
                let p = self.realize_unchecked(&c);
                (r, c, p)
            })
            .collect();
        Ok(GammaMod {
            quotient,
            transversal,
        })
    }

    /// Shortest nonzero `k` with `Σ kᵢ·pᵢ` torsion. The SNF kernel of the
    /// free-coordinate matrix decides dependence and gives a first relation;
    /// an exhaustive search below its norm then makes it shortest.
    pub fn linear_dependence(&self, points: &[Point], bound: u64) -> Result<Dependence> {
        for p in points {
            self.backend.check_point(p)?;
        }
        let table = self.box_table(bound);
        let mut cols = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            match table.lookup(p) {
                Some(c) => cols.push(c.free.clone()),
                None => return Ok(Dependence::Undecided { index: i, bound }),
            }
        }
        shortest_relation(&cols, self.rank())
    }

    /// Counts of x-coordinates of Γ points with free coefficients bounded by
    /// `coeff_bound` and naive height at most `height_bound`.
    pub fn projection_density(
        &self,
        lo: &Rational,
        hi: &Rational,
        height_bound: u64,
        bins: usize,
        coeff_bound: u64,
    ) -> Result<Histogram> {
        let mut binner = Binner::new(lo, hi, bins)?;
        for p in self.bounded_points(height_bound, coeff_bound) {
            binner.add(p.1.x().unwrap());
        }
        Ok(binner.finish())
    }

    /// Affine points of the coefficient box with naive height ≤ `height_bound`.
    pub fn bounded_points(&self, height_bound: u64, coeff_bound: u64) -> Vec<(Coords, Point)> {
        let hb = BigInt::from(height_bound);
        self.box_table(coeff_bound)
            .entries
            .into_iter()
            .filter(|(_, p)| !p.is_identity() && p.naive_height() <= hb)
            .collect()
    }

    pub fn check_axioms_bounded(
        &self,
        n_max: u64,
        height_bound: u64,
        grid: &SampleGrid,
        coeff_bound: u64,
    ) -> Result<AxiomReport> {
        let points = self.backend.enumerate_rational_points(height_bound);
        self.check_axioms_with_points(n_max, height_bound, &points, grid, coeff_bound)
    }

    /// As [`GammaSpec::check_axioms_bounded`], with the enumerated points
    /// supplied by the caller (for example from a cache).
    pub fn check_axioms_with_points(
        &self,
        n_max: u64,
        height_bound: u64,
        enumerated: &[Point],
        grid: &SampleGrid,
        coeff_bound: u64,
    ) -> Result<AxiomReport> {
        let density = self.density_evidence(grid, height_bound, coeff_bound)?;
        let table = self.box_table(coeff_bound);
        let mut rows = Vec::new();
        for n in 1..=n_max.max(1) {
            let mut checked = 0;
            let mut violations = Vec::new();
            for q in enumerated {
                let multiple = self.backend.mul_unchecked(n as i64, q);
                if let Some(c) = table.lookup(&multiple) {
                    checked += 1;
                    if table.lookup(q).is_none() {
                        violations.push(PurityViolation {
                            point: q.clone(),
                            n,
                            multiple_coords: c.clone(),
                        });
                    }
                }
            }
            let quotient = self.quotient(n);
            rows.push(AxiomRow {
                n,
                quotient_size: quotient.size().to_string(),
                quotient: quotient.describe(),
                purity_checked: checked,
                purity_violations: violations,
            });
        }
        Ok(AxiomReport {
            density,
            rows,
            ml_conditions: "checked per polynomial by ml verify; not sampled here".to_string(),
        })
    }

    fn density_evidence(
        &self,
        grid: &SampleGrid,
        height_bound: u64,
        coeff_bound: u64,
    ) -> Result<DensityEvidence> {
        let binner = Binner::new(&grid.lo, &grid.hi, grid.bins)?;
        let in_component: Vec<bool> = (0..grid.bins)
            .map(|i| self.cell_meets_identity_component(&binner.edge(i), &binner.edge(i + 1)))
            .collect();
        let mut hit = vec![false; grid.bins];
        for (_, p) in self.bounded_points(height_bound, coeff_bound) {
            if self.backend.component_of(&p) {
                if let Some(i) = binner.bin_of(p.x().unwrap()) {
                    hit[i] = true;
                }
            }
        }
        let cells = in_component.iter().filter(|&&b| b).count();
        let cells_hit = (0..grid.bins)
            .filter(|&i| in_component[i] && hit[i])
            .count();
        let coverage = if cells == 0 {
            Rational::zero()
        } else {
            Rational::new(BigInt::from(cells_hit), BigInt::from(cells))
        };
        let low = coverage < Rational::new(BigInt::from(1), BigInt::from(2));
        Ok(DensityEvidence {
            cells_in_component: cells,
            cells_hit,
            coverage: coverage.to_string(),
            finite_group: self.is_finite(),
            low_coverage: low || self.is_finite(),
        })
    }

    /// Whether the cell `[c0, c1]` meets the x-projection of the identity
    /// component of the real locus.
    fn cell_meets_identity_component(&self, c0: &Rational, c1: &Rational) -> bool {
        match &self.backend {
            Backend::Circle => {
                let one = Rational::from_integer(BigInt::from(1));
                c1 >= &-one.clone() && c0 <= &one
            }
            Backend::Curve { a, b } => {
                // the projection is [e, ∞) for the largest root e
                let f = c1 * c1 * c1 + a * c1 + b;
                if f.is_negative() {
                    return false;
                }
                let three = Rational::from_integer(BigInt::from(3));
                self.backend.real_components() == 1
                    || (c1.is_positive() && (three * c1 * c1 + a).is_positive())
            }
        }
    }
}

/// Shortest nonzero integer relation among columns (each of length `rank`),
/// or `Independent`.
pub(crate) fn shortest_relation(cols: &[Vec<i64>], rank: usize) -> Result<Dependence> {
    let m = cols.len();
    if m == 0 {
        return Ok(Dependence::Independent);
    }
    let matrix: Vec<Vec<i64>> = (0..rank)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let basis = kernel_basis(&matrix, m)?;
    if basis.is_empty() {
        return Ok(Dependence::Independent);
    }
    let is_relation = |k: &[i64]| {
        (0..rank).all(|i| k.iter().zip(cols).map(|(kj, c)| kj * c[i]).sum::<i64>() == 0)
    };
    let normalize = |mut k: Vec<i64>| {
        if k.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            k.iter_mut().for_each(|x| *x = -*x);
        }
        k
    };
    let norm = |k: &[i64]| k.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let mut best = basis
        .into_iter()
        .map(normalize)
        .min_by(|a, b| norm(a).cmp(&norm(b)).then_with(|| a.cmp(b)))
        .unwrap();
    let best_norm = norm(&best);
    // exhaustive below the basis norm, when affordable
    let side = 2 * best_norm as u128 - 1;
    if best_norm > 1 && side.checked_pow(m as u32).is_some_and(|s| s <= 1_000_000) {
        let r = best_norm as i64 - 1;
        let ranges = vec![(2 * r + 1) as u64; m];
        let mut found: Option<Vec<i64>> = None;
        for v in product_of_ranges(&ranges) {
            let k: Vec<i64> = v.iter().map(|&x| x as i64 - r).collect();
            if k.iter().all(|&x| x == 0) || !is_relation(&k) {
                continue;
            }
            let k = normalize(k);
            if found
                .as_ref()
                .is_none_or(|f| norm(&k).cmp(&norm(f)).then_with(|| k.cmp(f)).is_lt())
            {
                found = Some(k);
            }
        }
        if let Some(f) = found {
            best = f;
        }
    } else if best_norm == 1 {
        // norm 1 is already minimal; pick the lexicographically least such relation
        if 3u128.checked_pow(m as u32).is_some_and(|s| s <= 1_000_000) {
            let ranges = vec![3u64; m];
            for v in product_of_ranges(&ranges) {
                let k: Vec<i64> = v.iter().map(|&x| x as i64 - 1).collect();
                if k.iter().any(|&x| x != 0) && is_relation(&k) {
                    let k = normalize(k);
                    if k < best {
                        best = k;
                    }
                }
            }
        }
    }
    Ok(Dependence::Dependent(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};

    fn p35() -> Point {
        Point::affine(int(3), int(5))
    }

    pub(crate) fn gamma_p() -> GammaSpec {
        let e = Backend::curve(int(0), int(-2)).unwrap();
        GammaSpec::from_generators(e, &[p35()], Some(1)).unwrap()
    }

    fn gamma_t6() -> GammaSpec {
        let e = Backend::curve(int(0), int(1)).unwrap();
        GammaSpec::from_generators(e, &[Point::affine(int(2), int(3))], Some(0)).unwrap()
    }

    fn free(v: &[i64]) -> Coords {
        Coords {
            free: v.to_vec(),
            tors: vec![],
        }
    }

    fn two_p() -> Point {
        Point::affine(frac(129, 100), frac(-383, 1000))
    }

    #[test]
    fn realize_examples() {
        let g = gamma_p();
        assert_eq!(g.realize(&g.zero_coords()).unwrap(), Point::Identity);
        assert_eq!(g.realize(&free(&[2])).unwrap(), two_p());
        let t = gamma_t6();
        assert_eq!(t.torsion().factors, vec![6]);
        let c = Coords {
            free: vec![],
            tors: vec![3],
        };
        assert_eq!(t.realize(&c).unwrap(), Point::affine(int(-1), int(0)));
        assert!(t
            .realize(&Coords {
                free: vec![],
                tors: vec![6]
            })
            .is_err());
        assert!(g.realize(&free(&[1, 2])).is_err());
    }

    #[test]
    fn decompose_examples() {
        let g = gamma_p();
        assert_eq!(
            g.decompose(&Point::Identity, 4).unwrap(),
            Decomposition::Found(g.zero_coords())
        );
        assert_eq!(
            g.decompose(&two_p(), 2).unwrap(),
            Decomposition::Found(free(&[2]))
        );
        assert!(g.decompose(&Point::affine(int(2), int(1)), 4).is_err());
        // 3P is in Γ but outside the box of bound 2
        let three_p = g.realize(&free(&[3])).unwrap();
        assert_eq!(
            g.decompose(&three_p, 2).unwrap(),
            Decomposition::Undecided { bound: 2 }
        );
        // a point of ⟨P⟩ that is not in ⟨2P⟩
        let e = g.backend().clone();
        let g2 = GammaSpec::from_generators(e, &[two_p()], None).unwrap();
        assert_eq!(
            g2.decompose(&p35(), 16).unwrap(),
            Decomposition::Undecided { bound: 16 }
        );
    }

    #[test]
    fn divisibility_examples() {
        let g = gamma_p();
        assert_eq!(
            g.divisible_in_gamma(&two_p(), 1, 4).unwrap(),
            Some(free(&[2]))
        );
        assert_eq!(
            g.divisible_in_gamma(&two_p(), 2, 4).unwrap(),
            Some(free(&[1]))
        );
        assert_eq!(g.divisible_in_gamma(&p35(), 2, 4).unwrap(), None);
        let far = g.realize(&free(&[5])).unwrap();
        assert!(matches!(
            g.divisible_in_gamma(&far, 5, 2),
            Err(Error::Precondition(_))
        ));
        let t = gamma_t6();
        // the order-2 point is 3·(2,3); in Z/6 it is divisible by 3 but only
        // by elements of order 6 or 2
        let two_torsion = Point::affine(int(-1), int(0));
        let q = t.divisible_in_gamma(&two_torsion, 3, 1).unwrap().unwrap();
        assert_eq!(
            t.backend().mul_unchecked(3, &t.realize(&q).unwrap()),
            two_torsion
        );
        assert_eq!(
            t.divisible_in_gamma(&Point::affine(int(2), int(3)), 2, 1)
                .unwrap(),
            None
        );
    }

    #[test]
    fn gamma_mod_examples() {
        let g = gamma_p();
        let m = g.gamma_mod(1).unwrap();
        assert_eq!(m.transversal.len(), 1);
        assert_eq!(m.transversal[0].2, Point::Identity);
        let m = g.gamma_mod(4).unwrap();
        assert_eq!(m.quotient.invariant_factors(), vec![4]);
        let pts: Vec<Point> = m.transversal.iter().map(|t| t.2.clone()).collect();
        let expect: Vec<Point> = (0..4).map(|k| g.realize(&free(&[k])).unwrap()).collect();
        assert_eq!(pts, expect);
        let t = gamma_t6();
        assert_eq!(t.gamma_mod(2).unwrap().quotient.size(), 2);
        assert_eq!(t.gamma_mod(4).unwrap().quotient.size(), 2);
        assert_eq!(t.gamma_mod(3).unwrap().quotient.size(), 3);
    }

    #[test]
    fn dependence_examples() {
        let g = gamma_p();
        assert_eq!(
            g.linear_dependence(&[p35(), p35()], 4).unwrap(),
            Dependence::Dependent(vec![1, -1])
        );
        assert_eq!(
            g.linear_dependence(&[p35(), two_p()], 4).unwrap(),
            Dependence::Dependent(vec![2, -1])
        );
        assert_eq!(
            g.linear_dependence(&[p35()], 4).unwrap(),
            Dependence::Independent
        );
        let far = g.realize(&free(&[5])).unwrap();
        assert_eq!(
            g.linear_dependence(&[p35(), far], 2).unwrap(),
            Dependence::Undecided { index: 1, bound: 2 }
        );
        // torsion points are dependent on their own
        let t = gamma_t6();
        assert_eq!(
            t.linear_dependence(&[Point::affine(int(2), int(3))], 1)
                .unwrap(),
            Dependence::Dependent(vec![1])
        );
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let g = gamma_p();
        let e = g.backend().clone();
        let err = GammaSpec::from_generators(e.clone(), &[p35(), two_p()], None).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(GammaSpec::from_generators(e, &[p35()], Some(2)).is_err());
    }

    #[test]
    fn density_examples() {
        let g = gamma_p();
        let h = g
            .projection_density(&int(0), &int(10), 200, 10, 16)
            .unwrap();
        assert_eq!(h.counts[1], 2, "x = 129/100 from ±2P");
        assert_eq!(h.counts[3], 2, "x = 3 from ±P");
        let one = g.projection_density(&int(0), &int(10), 200, 1, 16).unwrap();
        assert_eq!(one.total(), h.total());
        let empty = g
            .projection_density(&int(-10), &int(-5), 200, 4, 16)
            .unwrap();
        assert_eq!(empty.total(), 0);
        assert!(g.projection_density(&int(1), &int(1), 10, 1, 1).is_err());
    }

    #[test]
    fn axiom_report() {
        let g = gamma_p();
        let grid = SampleGrid {
            lo: int(0),
            hi: int(10),
            bins: 10,
        };
        let r = g.check_axioms_bounded(3, 100, &grid, 16).unwrap();
        assert_eq!(r.rows[1].quotient_size, "2");
        assert_eq!(r.rows[2].quotient_size, "3");
        assert!(r.rows.iter().all(|row| row.purity_violations.is_empty()));
        assert!(r.rows[1].purity_checked > 0);

        let t = gamma_t6();
        let r = t.check_axioms_bounded(2, 20, &grid, 4).unwrap();
        assert!(r.density.finite_group && r.density.low_coverage);

        let e = g.backend().clone();
        let wrong = GammaSpec::from_generators(e, &[two_p()], None).unwrap();
        let r = wrong.check_axioms_bounded(2, 100, &grid, 16).unwrap();
        let v = &r.rows[1].purity_violations;
        assert!(v.iter().any(|v| v.point == p35() && v.n == 2));
    }
}
