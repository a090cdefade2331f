//! Polynomial systems on Γⁿ: bounded solution search, verification of
//! claimed decompositions
//!
//! ```text
//! V(p) ∩ Γⁿ = ⋃ᵢ gᵢ + (ker χ_{kᵢ} ∩ Γⁿ)
//! ```
//!
//! and a heuristic search for such a decomposition.
//!
//! All three work inside a coefficient box, so a verified decomposition is
//! only verified up to that box and the verdict says so.
//!
//! **Identity convention.** The identity has no affine coordinates. A tuple
//! with the identity in slot `j` is tested against `p` only if `p` does not
//! mention that slot's variables `X(2j-1)`, `X(2j)`; otherwise it is skipped
//! and reported separately in [`Solutions::skipped`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coset::Character;
use crate::error::{Error, Result};
use crate::fg::{BoxTable, Coords, GammaSpec};
use crate::group::Point;
use crate::num::Rational;
use crate::poly::MultiPoly;
use crate::snf::annihilator;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tuple {
    pub coords: Vec<Coords>,
    pub points: Vec<Point>,
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(Point::to_string).collect();
        write!(f, "({})", pts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solutions {
    pub bound: u64,
    pub tuples: Vec<Tuple>,
    /// Box tuples not tested because `p` reads coordinates of an identity slot.
    pub skipped: Vec<Vec<Coords>>,
}

/// What a box tuple means for `p`.
enum Status {
    Skipped,
    Solution,
    Other,
}

/// A coefficient box for `n`-tuples together with the evaluation of `p`.
struct Search<'a> {
    table: BoxTable,
    tuples: Vec<Vec<usize>>,
    p: &'a MultiPoly,
    slot_used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(gamma: &GammaSpec, p: &'a MultiPoly, n: usize, bound: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("n must be at least 1"));
        }
        if p.arity() != 2 * n {
            return Err(Error::input(format!(
                "polynomial has arity {}, expected 2n = {}",
                p.arity(),
                2 * n
            )));
        }
        let table = gamma.box_table(bound);
        let tuples = table.tuples(n)?;
        let slot_used = (0..n)
            .map(|j| p.uses_var(2 * j + 1) || p.uses_var(2 * j + 2))
            .collect();
        Ok(Search {
            table,
            tuples,
            p,
            slot_used,
        })
    }

    fn coords(&self, t: &[usize]) -> Vec<Coords> {
        t.iter()
            .map(|&i| self.table.entries()[i].0.clone())
            .collect()
    }

    fn points(&self, t: &[usize]) -> Vec<Point> {
        t.iter()
            .map(|&i| self.table.entries()[i].1.clone())
            .collect()
    }

    fn tuple(&self, t: &[usize]) -> Tuple {
        Tuple {
            coords: self.coords(t),
            points: self.points(t),
        }
    }

    fn status(&self, t: &[usize]) -> Result<Status> {
        let mut assignment = Vec::with_capacity(2 * t.len());
        for (&i, &used) in t.iter().zip(&self.slot_used) {
            match self.table.entries()[i].1.coords() {
                Some((x, y)) => {
                    assignment.push(x.clone());
                    assignment.push(y.clone());
                }
                None if used => return Ok(Status::Skipped),
                None => {
                    assignment.push(Rational::zero());
                    assignment.push(Rational::zero());
                }
            }
        }
        Ok(if self.p.eval(&assignment)?.is_zero() {
            Status::Solution
        } else {
            Status::Other
        })
    }
}

/// Every tuple of the coefficient box (all torsion residues) on which `p`
/// vanishes, shortest first.
pub fn solutions_bounded(
    gamma: &GammaSpec,
    p: &MultiPoly,
    n: usize,
    bound: u64,
) -> Result<Solutions> {
    let search = Search::new(gamma, p, n, bound)?;
    let mut out = Solutions {
        bound,
        tuples: Vec::new(),
        skipped: Vec::new(),
    };
    for t in &search.tuples {
        match search.status(t)? {
            Status::Skipped => out.skipped.push(search.coords(t)),
            Status::Solution => out.tuples.push(search.tuple(t)),
            Status::Other => {}
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MlPair {
    pub base: Vec<Coords>,
    pub k: Character,
}

/// A claimed decomposition `⋃ gᵢ + ker χ_{kᵢ}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlDecomposition {
    pub pairs: Vec<MlPair>,
}

impl MlDecomposition {
    /// Pairs with base zero, one per character.
    pub fn through_zero(gamma: &GammaSpec, ks: &[Character]) -> Self {
        MlDecomposition {
            pairs: ks
                .iter()
                .map(|k| MlPair {
                    base: vec![gamma.zero_coords(); k.arity()],
                    k: k.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad decomposition: {e}")))
    }
}

impl fmt::Display for MlDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|pair| {
                let base: Vec<String> = pair.base.iter().map(Coords::to_string).collect();
                format!("base ({}) k={}", base.join("; "), pair.k)
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// A solution of `p` in none of the claimed cosets.
    MissingFromUnion,
    /// A tuple in some claimed coset on which `p` does not vanish.
    NotASolution,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::MissingFromUnion => "missing-from-union",
            Direction::NotASolution => "not-a-solution",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified { bound: u64 },
    Counterexample { tuple: Tuple, direction: Direction },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified { bound } => write!(f, "verified(bound={bound})"),
            Verdict::Counterexample { tuple, direction } => {
                write!(f, "counterexample: {direction} {tuple}")
            }
            Verdict::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
        }
    }
}

struct Claims {
    pairs: Vec<(Character, Point)>,
}

impl Claims {
    fn new(gamma: &GammaSpec, d: &MlDecomposition, n: usize) -> Result<Self> {
        let mut pairs = Vec::with_capacity(d.pairs.len());
        for pair in &d.pairs {
            if pair.base.len() != n || pair.k.arity() != n {
                return Err(Error::input(format!(
                    "pair with base {} points and character {} does not have arity {n}",
                    pair.base.len(),
                    pair.k
                )));
            }
            let base = pair
                .base
                .iter()
                .map(|c| gamma.realize(c))
                .collect::<Result<Vec<_>>>()?;
            pairs.push((pair.k.clone(), pair.k.apply(gamma, &base)));
        }
        Ok(Claims { pairs })
    }

    /// Some `χ_{kᵢ}(points) = χ_{kᵢ}(gᵢ)`, by exact point arithmetic.
    fn covers(&self, gamma: &GammaSpec, points: &[Point]) -> bool {
        self.pairs
            .iter()
            .any(|(k, target)| &k.apply(gamma, points) == target)
    }
}

/// Checks both inclusions over the coefficient box, in shortest-first
/// order; the first failing tuple is reported.
pub fn verify_decomposition(
    gamma: &GammaSpec,
    p: &MultiPoly,
    n: usize,
    d: &MlDecomposition,
    bound: u64,
) -> Result<Verdict> {
    let search = Search::new(gamma, p, n, bound)?;
    let claims = Claims::new(gamma, d, n)?;
    for t in &search.tuples {
        let solution = match search.status(t)? {
            Status::Skipped => continue,
            Status::Solution => true,
            Status::Other => false,
        };
        let points = search.points(t);
        let covered = claims.covers(gamma, &points);
        if solution != covered {
            let direction = if solution {
                Direction::MissingFromUnion
            } else {
                Direction::NotASolution
            };
            return Ok(Verdict::Counterexample {
                tuple: search.tuple(t),
                direction,
            });
        }
    }
    Ok(Verdict::Verified { bound })
}

/// Re-checks a counterexample from scratch: the tuple realizes its
/// coordinates, and `p` and the character equations disagree in the
/// reported direction.
pub fn counterexample_is_valid(
    gamma: &GammaSpec,
    p: &MultiPoly,
    d: &MlDecomposition,
    tuple: &Tuple,
    direction: Direction,
) -> bool {
    let n = tuple.points.len();
    if tuple.coords.len() != n
        || tuple
            .coords
            .iter()
            .zip(&tuple.points)
            .any(|(c, q)| gamma.realize(c).ok().as_ref() != Some(q))
    {
        return false;
    }
    let mut assignment = Vec::new();
    for q in &tuple.points {
        let Some((x, y)) = q.coords() else {
            return false;
        };
        assignment.push(x.clone());
        assignment.push(y.clone());
    }
    let Ok(value) = p.eval(&assignment) else {
        return false;
    };
    let Ok(claims) = Claims::new(gamma, d, n) else {
        return false;
    };
    let covered = claims.covers(gamma, &tuple.points);
    match direction {
        Direction::MissingFromUnion => value.is_zero() && !covered,
        Direction::NotASolution => !value.is_zero() && covered,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suggestion {
    Found {
        decomposition: MlDecomposition,
        verdict: Verdict,
    },
    Inconclusive {
        reason: String,
        unexplained: Vec<Tuple>,
    },
}

impl fmt::Display for Suggestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suggestion::Found {
                decomposition,
                verdict,
            } => write!(f, "{decomposition}\n{verdict}"),
            Suggestion::Inconclusive {
                reason,
                unexplained,
            } => {
                write!(f, "inconclusive: {reason}")?;
                for t in unexplained {
                    write!(f, "\n  {t}")?;
                }
                Ok(())
            }
        }
    }
}

/// Limit on how many solutions feed the pairwise difference step.
const DIFFERENCE_SAMPLE: usize = 40;

fn flat_free(coords: &[Coords]) -> Vec<i64> {
    coords.iter().flat_map(|c| c.free.iter().copied()).collect()
}

/// Characters to try: annihilators of pairwise differences of solutions,
/// then the small box `{-2..2}ⁿ`, each normalized and deduplicated.
fn candidate_characters(gamma: &GammaSpec, sols: &[Tuple], n: usize) -> Result<Vec<Character>> {
    let r = gamma.rank();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |mut k: Vec<i64>| {
        if k.iter().all(|&x| x == 0) {
            return;
        }
        let g = k.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if r > 0 {
            k.iter_mut().for_each(|x| *x /= g);
        }
        if k.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            k.iter_mut().for_each(|x| *x = -*x);
        }
        if seen.insert(k.clone()) {
            out.push(Character(k));
        }
    };
    if r > 0 {
        let sample = &sols[..sols.len().min(DIFFERENCE_SAMPLE)];
        for (i, a) in sample.iter().enumerate() {
            let fa = flat_free(&a.coords);
            for b in &sample[i + 1..] {
                let fb = flat_free(&b.coords);
                // rows: one equation Σⱼ kⱼ·(b−a)ⱼᵢ = 0 per free coordinate i
                let rows: Vec<Vec<i64>> = (0..r)
                    .map(|i| (0..n).map(|j| fb[j * r + i] - fa[j * r + i]).collect())
                    .collect();
                for k in annihilator(&rows, n)? {
                    push(k);
                }
            }
        }
    }
    let mut small: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        small = small
            .into_iter()
            .flat_map(|v| {
                (-2..=2).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    small.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.clone()));
    for k in small {
        push(k);
    }
    Ok(out)
}

/// Searches for a decomposition of the bounded solution set into kernel
/// cosets and returns it only if it verifies at the same bound.
pub fn suggest_decomposition(
    gamma: &GammaSpec,
    p: &MultiPoly,
    n: usize,
    bound: u64,
) -> Result<Suggestion> {
    let search = Search::new(gamma, p, n, bound)?;
    let mut status = Vec::with_capacity(search.tuples.len());
    for t in &search.tuples {
        status.push(search.status(t)?);
    }
    let sols: Vec<usize> = (0..search.tuples.len())
        .filter(|&i| matches!(status[i], Status::Solution))
        .collect();
    let sol_tuples: Vec<Tuple> = sols
        .iter()
        .map(|&i| search.tuple(&search.tuples[i]))
        .collect();
    let all_coords: Vec<Vec<Coords>> = search.tuples.iter().map(|t| search.coords(t)).collect();

    // For each candidate, the classes of χ_k all of whose tested members
    // solve p; each class is a coset g + ker χ_k cut to the box.
    let mut cosets: Vec<(Character, Vec<usize>)> = Vec::new();
    for k in candidate_characters(gamma, &sol_tuples, n)? {
        let mut classes: HashMap<Coords, (bool, Vec<usize>)> = HashMap::new();
        let mut order: Vec<Coords> = Vec::new();
        for (i, c) in all_coords.iter().enumerate() {
            if matches!(status[i], Status::Skipped) {
                continue;
            }
            let terms: Vec<(i64, &Coords)> = k.0.iter().copied().zip(c).collect();
            let image = gamma.combine_coords(&terms);
            let entry = classes.entry(image.clone()).or_insert_with(|| {
                order.push(image);
                (true, Vec::new())
            });
            match status[i] {
                Status::Solution => entry.1.push(i),
                _ => entry.0 = false,
            }
        }
        for image in order {
            let (clean, members) = classes.remove(&image).expect("class recorded");
            if clean && !members.is_empty() {
                cosets.push((k.clone(), members));
            }
        }
    }

    let mut uncovered: BTreeSet<usize> = sols.iter().copied().collect();
    let mut pairs = Vec::new();
    while !uncovered.is_empty() {
        let best = cosets
            .iter()
            .enumerate()
            .map(|(ci, (_, m))| (m.iter().filter(|i| uncovered.contains(i)).count(), ci))
            .filter(|&(gain, _)| gain > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, ci)) = best else { break };
        let (k, members) = &cosets[ci];
        for i in members {
            uncovered.remove(i);
        }
        pairs.push(MlPair {
            base: all_coords[members[0]].clone(),
            k: k.clone(),
        });
    }
    if !uncovered.is_empty() {
        return Ok(Suggestion::Inconclusive {
            reason: format!(
                "{} of {} solutions lie in no kernel coset contained in the solution set",
                uncovered.len(),
                sols.len()
            ),
            unexplained: uncovered
                .iter()
                .map(|&i| search.tuple(&search.tuples[i]))
                .collect(),
        });
    }
    let decomposition = MlDecomposition { pairs };
    let verdict = verify_decomposition(gamma, p, n, &decomposition, bound)?;
    if verdict.is_verified() {
        Ok(Suggestion::Found {
            decomposition,
            verdict,
        })
    } else {
        Ok(Suggestion::Inconclusive {
            reason: format!("candidate decomposition failed to verify: {verdict}"),
            unexplained: Vec::new(),
        })
    }
}
