//! Quantitative geometry of cyclic subgroups in a free group.
//!
//! Distances are word lengths of `u⁻¹v` computed on [`PowerWord`]s, so they
//! stay exact for astronomically large exponents. The hyperbolicity
//! constant `δ` is taken from the [`GroupDescriptor`] and kept symbolic in
//! every formula.

use std::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::words::{all_reduced_words, GroupDescriptor, PowerWord, Word};

/// Word-metric distance `|u⁻¹v|`.
pub fn distance(u: &PowerWord, v: &PowerWord) -> BigUint {
    u.inverse().multiply(v).length()
}

fn nontrivial(g: &Word) -> Result<()> {
    if g.is_identity() {
        Err(Error::TrivialElement)
    } else {
        Ok(())
    }
}

/// A finite sequence of points `x_0, ..., x_q` with the parameters of the
/// local-to-global divergence test.
#[derive(Clone, Debug)]
pub struct DelzantSequence {
    points: Vec<PowerWord>,
    a: u64,
    delta: u64,
}

impl DelzantSequence {
    pub fn new(points: Vec<PowerWord>, a: u64, delta: u64) -> Result<DelzantSequence> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: points.len() });
        }
        Ok(DelzantSequence { points, a, delta })
    }

    pub fn points(&self) -> &[PowerWord] {
        &self.points
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// The index interval `J`.
    pub fn index_interval(&self) -> Range<usize> {
        0..self.points.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> BigUint {
        distance(&self.points[i], &self.points[j])
    }

    /// Index of the first triple `(n, n+1, n+2)` violating the local gap
    /// condition, if any.
    pub fn first_hypothesis_failure(&self) -> Result<Option<usize>> {
        if self.points.len() < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: self.points.len() });
        }
        let slack = BigUint::from(2 * self.delta + self.a);
        let steps: Vec<BigUint> = (0..self.points.len() - 1).map(|n| self.distance(n, n + 1)).collect();
        Ok((0..self.points.len() - 2).find(|&n| {
            let far = self.distance(n, n + 2);
            let step = steps[n].clone().max(steps[n + 1].clone());
            far < step + &slack
        }))
    }

    /// First pair `(n, p)` with `d(x_n, x_p) < a|n - p|`, if any.
    pub fn first_conclusion_failure(&self) -> Option<(usize, usize)> {
        let q = self.points.len();
        (0..q)
            .flat_map(|n| (n + 1..q).map(move |p| (n, p)))
            .find(|&(n, p)| self.distance(n, p) < BigUint::from(self.a) * BigUint::from(p - n))
    }
}

pub fn delzant_hypothesis(seq: &DelzantSequence) -> Result<bool> {
    Ok(seq.first_hypothesis_failure()?.is_none())
}

pub fn delzant_conclusion(seq: &DelzantSequence) -> bool {
    seq.first_conclusion_failure().is_none()
}

/// Linear growth data of `⟨g⟩`: `|g^n| = n|c| + 2|u|` for `g = u c u⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthData {
    pub g: Word,
    pub core_length: usize,
    pub conjugator_length: usize,
    pub c: usize,
}

impl GrowthData {
    /// Exact `|g^n|` for `n ≠ 0`, and 0 for `n = 0`.
    pub fn power_length(&self, n: &BigInt) -> BigUint {
        if n.is_zero() {
            return BigUint::zero();
        }
        n.magnitude() * self.core_length + 2 * self.conjugator_length
    }
}

pub fn growth_constant(g: &Word) -> Result<GrowthData> {
    nontrivial(g)?;
    let form = g.cyclic_form();
    Ok(GrowthData {
        g: g.clone(),
        core_length: form.core.len(),
        conjugator_length: form.conjugator.len(),
        c: form.core.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcConstant {
    pub g: Word,
    pub e_valid: usize,
    pub e_min: Option<usize>,
}

/// Quasiconvexity constant of `⟨g⟩`. With a search range `R`, also finds
/// the least `E` such that every vertex of every geodesic `[g^n, g^m]`,
/// `|n|, |m| ≤ R`, lies within `E` of some power of `g`.
pub fn qc_constant(g: &Word, search_range: Option<u32>) -> Result<QcConstant> {
    nontrivial(g)?;
    let form = g.cyclic_form();
    let e_valid = form.conjugator.len() + form.core.len();
    let e_min = search_range.map(|r| empirical_qc(g, form.core.len(), r));
    Ok(QcConstant { g: g.clone(), e_valid, e_min })
}

fn empirical_qc(g: &Word, core_len: usize, range: u32) -> usize {
    // translating by g^-n reduces [g^n, g^m] to [1, g^d] with d = m - n
    (1..=2 * range as i64)
        .into_par_iter()
        .map(|d| {
            let path = g.pow(d);
            (0..=path.len())
                .map(|i| {
                    let prefix = Word::from_letters(path.letters()[..i].iter().copied());
                    let back = prefix.inverse();
                    // |p⁻¹g^j| ≥ C|j| - |p| exceeds |p| once C|j| > 2|p|
                    let reach = (2 * i / core_len) as i64;
                    (-reach..=reach).map(|j| back.multiply(&g.pow(j)).len()).min().unwrap_or(0)
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// `E(g) = ⟨r⟩` where `r` is the primitive root of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commensurator {
    pub g: Word,
    pub root: Word,
    pub g_exponent: usize,
}

impl Commensurator {
    /// The integer `k` with `h = r^k`, if `h ∈ E(g)`.
    pub fn exponent_of(&self, h: &Word) -> Option<i64> {
        if h.is_identity() {
            return Some(0);
        }
        let (root, e) = h.primitive_root().ok()?;
        if root == self.root {
            Some(e as i64)
        } else if root == self.root.inverse() {
            Some(-(e as i64))
        } else {
            None
        }
    }

    pub fn contains(&self, h: &Word) -> bool {
        self.exponent_of(h).is_some()
    }
}

pub fn commensurator(g: &Word) -> Result<Commensurator> {
    nontrivial(g)?;
    let (root, g_exponent) = g.primitive_root()?;
    Ok(Commensurator { g: g.clone(), root, g_exponent })
}

pub fn in_commensurator(g: &Word, h: &Word) -> Result<bool> {
    Ok(commensurator(g)?.contains(h))
}

/// Generator `r^k` of `⟨g1⟩ ∩ ⟨g2⟩` with `g1^index1 = r^k = g2^index2`
/// (indices signed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicMeet {
    pub generator: Word,
    pub index_in_first: i64,
    pub index_in_second: i64,
}

pub fn cyclic_intersection(g1: &Word, g2: &Word) -> Result<Option<CyclicMeet>> {
    let first = commensurator(g1)?;
    let (Some(k1), Some(k2)) = (first.exponent_of(g1), first.exponent_of(g2)) else {
        return Ok(None);
    };
    let k = k1.abs().lcm(&k2.abs());
    Ok(Some(CyclicMeet { generator: first.root.pow(k), index_in_first: k / k1, index_in_second: k / k2 }))
}

/// Number of elements of length at most `radius` in the free group of the
/// given rank.
pub fn ball_size(rank: usize, radius: u64) -> BigUint {
    if rank == 1 {
        return BigUint::from(2 * radius + 1);
    }
    let k = BigUint::from(rank);
    let sphere_ratio = BigUint::from(2 * rank - 1);
    let exp = u32::try_from(radius).expect("radius fits in u32");
    BigUint::one() + &k * (sphere_ratio.pow(exp) - 1u32) / (&k - 1u32)
}

/// The constant `K(g, c)` and the intermediate quantities it is built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KBound {
    pub g: Word,
    pub c: Word,
    pub e: u64,
    pub delta: u64,
    pub ball_radius: u64,
    pub ball_count: BigUint,
    pub k: BigUint,
}

impl KBound {
    /// `L = 2E + 2|c| + 4δ`, `N' = |B(L)|`, `K = 2N'(2E+1) + 2|c| + 8δ`.
    pub fn from_parts(rank: usize, g: Word, c: Word, e: u64, delta: u64) -> KBound {
        let c_len = c.len() as u64;
        let ball_radius = 2 * e + 2 * c_len + 4 * delta;
        let ball_count = ball_size(rank, ball_radius);
        let k = BigUint::from(2u32) * &ball_count * (2 * e + 1) + 2 * c_len + 8 * delta;
        KBound { g, c, e, delta, ball_radius, ball_count, k }
    }
}

fn require_outside(g: &Word, c: &Word) -> Result<()> {
    if in_commensurator(g, c)? {
        return Err(Error::CommensuratorViolation { g: g.to_string(), c: c.to_string() });
    }
    Ok(())
}

pub fn k_bound(descriptor: &GroupDescriptor, g: &Word, c: &Word) -> Result<KBound> {
    descriptor.check(g)?;
    descriptor.check(c)?;
    require_outside(g, c)?;
    let e = qc_constant(g, None)?.e_valid as u64;
    Ok(KBound::from_parts(descriptor.rank(), g.clone(), c.clone(), e, descriptor.delta()))
}

/// Least `K ≥ 0` with `|g^n c g^m| ≥ |g^n| + |g^m| - K` for `|n|, |m| ≤ range`.
pub fn k_empirical(g: &Word, c: &Word, range: i64) -> Result<BigUint> {
    require_outside(g, c)?;
    let powers: Vec<PowerWord> = (-range..=range).map(|n| PowerWord::power(g, n)).collect();
    let middle = PowerWord::from_word(c);
    let best = powers
        .par_iter()
        .map(|left| {
            let lc = left.multiply(&middle);
            powers
                .iter()
                .map(|right| {
                    let sum = BigInt::from(left.length()) + BigInt::from(right.length());
                    sum - BigInt::from(lc.multiply(right).length())
                })
                .max()
                .expect("nonempty range")
        })
        .max()
        .expect("nonempty range");
    Ok(best.to_biguint().unwrap_or_default())
}

/// A solution of `h⁻¹ g^n h = g^m` found by [`conjugate_power_scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateSolution {
    pub h: Word,
    pub n: i64,
    pub m: i64,
}

#[derive(Clone, Debug, Default)]
pub struct ConjugacyScan {
    pub conjugators_checked: usize,
    /// Solutions with `|m| ≠ |n|`.
    pub unequal: Vec<ConjugateSolution>,
    /// Solutions with `m = -n`.
    pub inverted: Vec<ConjugateSolution>,
}

/// Exhaustively solves `h⁻¹ g^n h = g^m` over `|h| ≤ max_h` and
/// `1 ≤ |n|, |m| ≤ max_exp`.
pub fn conjugate_power_scan(descriptor: &GroupDescriptor, g: &Word, max_h: usize, max_exp: i64) -> Result<ConjugacyScan> {
    descriptor.check(g)?;
    nontrivial(g)?;
    let exps: Vec<i64> = (-max_exp..=max_exp).filter(|&e| e != 0).collect();
    let powers: Vec<(i64, Word)> = exps.iter().map(|&e| (e, g.pow(e))).collect();
    let hs = all_reduced_words(descriptor.rank(), max_h);
    let found: Vec<ConjugateSolution> = hs
        .par_iter()
        .flat_map_iter(|h| {
            let hi = h.inverse();
            let powers = &powers;
            powers.iter().flat_map(move |(n, gn)| {
                let conj = hi.multiply(gn).multiply(h);
                powers
                    .iter()
                    .filter(move |(_, gm)| *gm == conj)
                    .map(move |(m, _)| ConjugateSolution { h: h.clone(), n: *n, m: *m })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let mut scan = ConjugacyScan { conjugators_checked: hs.len(), ..Default::default() };
    for s in found {
        if s.m.abs() != s.n.abs() {
            scan.unequal.push(s);
        } else if s.m == -s.n {
            scan.inverted.push(s);
        }
    }
    Ok(scan)
}
