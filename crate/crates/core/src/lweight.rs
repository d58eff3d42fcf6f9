//! Laurent monomials in the variables `Y[i,a]` and the classical weight
//! lattice of type A.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A single variable `Y[node, shift]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub node: u32,
    pub shift: i64,
}

impl Generator {
    pub fn new(node: u32, shift: i64) -> Self {
        Generator { node, shift }
    }
}

/// An element of the free abelian group on the `Y[i,a]`, `1 <= i <= rank`.
///
/// Factors are kept sorted by (node, shift) with no zero exponents, so
/// structural equality is equality in the group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LWeight {
    rank: u32,
    factors: Vec<(Generator, i32)>,
}

impl LWeight {
    pub fn one(rank: u32) -> Self {
        LWeight { rank, factors: Vec::new() }
    }

    pub fn y(rank: u32, node: i64, shift: i64) -> Result<Self> {
        if node < 1 || node > rank as i64 {
            return Err(Error::NodeOutOfRange { node, rank });
        }
        Ok(LWeight { rank, factors: vec![(Generator::new(node as u32, shift), 1)] })
    }

    /// `Y[node, shift]`, or the identity when the node falls outside
    /// `[1, rank]`. This is the boundary convention used throughout.
    pub fn y_or_one(rank: u32, node: i64, shift: i64) -> Self {
        Self::y(rank, node, shift).unwrap_or_else(|_| Self::one(rank))
    }

    pub fn from_factors<I>(rank: u32, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, i32)>,
    {
        let mut acc: BTreeMap<Generator, i32> = BTreeMap::new();
        for (node, shift, e) in factors {
            if node < 1 || node > rank as i64 {
                return Err(Error::NodeOutOfRange { node, rank });
            }
            *acc.entry(Generator::new(node as u32, shift)).or_insert(0) += e;
        }
        Ok(LWeight { rank, factors: acc.into_iter().filter(|&(_, e)| e != 0).collect() })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn factors(&self) -> &[(Generator, i32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, node: u32, shift: i64) -> i32 {
        match self.factors.binary_search_by(|(g, _)| g.cmp(&Generator::new(node, shift))) {
            Ok(k) => self.factors[k].1,
            Err(_) => 0,
        }
    }

    pub fn checked_mul(&self, other: &LWeight) -> Result<LWeight> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(self.merge(other, 1))
    }

    pub fn checked_div(&self, other: &LWeight) -> Result<LWeight> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(self.merge(other, -1))
    }

    // self * other^sign, by merging the two sorted factor lists.
    fn merge(&self, other: &LWeight, sign: i32) -> LWeight {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, sign * b[j].1));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(g, e)| (g, sign * e)));
        LWeight { rank: self.rank, factors: out }
    }

    pub fn inverse(&self) -> LWeight {
        LWeight { rank: self.rank, factors: self.factors.iter().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> LWeight {
        if k == 0 {
            return LWeight::one(self.rank);
        }
        LWeight { rank: self.rank, factors: self.factors.iter().map(|&(g, e)| (g, e * k)).collect() }
    }

    pub fn is_dominant(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e > 0)
    }

    /// Total degree, the sum of all exponents.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }

    /// The classical weight: `Y[i,a]` maps to the i-th fundamental weight.
    pub fn weight(&self) -> Weight {
        let mut c = vec![0i64; self.rank as usize];
        for &(g, e) in &self.factors {
            c[g.node as usize - 1] += e as i64;
        }
        Weight(c)
    }

    fn map_generators(&self, rank: u32, f: impl Fn(Generator) -> Option<Generator>) -> LWeight {
        let mut fs: Vec<(Generator, i32)> = self.factors.iter().filter_map(|&(g, e)| f(g).map(|h| (h, e))).collect();
        fs.sort_by_key(|&(g, _)| g);
        // Maps used here are injective, so no exponents need combining.
        LWeight { rank, factors: fs }
    }

    /// The spectral shift `Y[i,a] -> Y[i,a+s]`.
    pub fn shift_by(&self, s: i64) -> LWeight {
        self.map_generators(self.rank, |g| Some(Generator::new(g.node, g.shift + s)))
    }

    /// Right dual: `Y[i,a] -> Y[n+1-i, a+n+1]`.
    pub fn dual_star(&self) -> LWeight {
        let n = self.rank;
        self.map_generators(n, |g| Some(Generator::new(n + 1 - g.node, g.shift + n as i64 + 1)))
    }

    /// Left dual: `Y[i,a] -> Y[n+1-i, a-n-1]`.
    pub fn left_dual_star(&self) -> LWeight {
        let n = self.rank;
        self.map_generators(n, |g| Some(Generator::new(n + 1 - g.node, g.shift - n as i64 - 1)))
    }

    /// The involution `Y[i,a] -> Y[n+1-i, -a]`.
    pub fn omega_involution(&self) -> LWeight {
        let n = self.rank;
        self.map_generators(n, |g| Some(Generator::new(n + 1 - g.node, -g.shift)))
    }

    /// Restriction to the nodes `lo..=hi`, renumbered from 1.
    pub fn restrict(&self, lo: u32, hi: u32) -> Result<LWeight> {
        if lo < 1 || hi > self.rank || lo > hi {
            return Err(Error::Parse(format!("interval [{lo},{hi}] is not inside [1,{}]", self.rank)));
        }
        Ok(self.map_generators(hi - lo + 1, |g| {
            (lo..=hi).contains(&g.node).then(|| Generator::new(g.node - lo + 1, g.shift))
        }))
    }

    /// Parse the text form produced by `Display`, e.g. `Y[1,0]·Y[2,3]^-1`.
    pub fn parse(rank: u32, s: &str) -> Result<LWeight> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(LWeight::one(rank));
        }
        let mut fs = Vec::new();
        for part in s.split(['·', '*']) {
            let part = part.trim();
            let bad = || Error::Parse(format!("bad factor `{part}`"));
            let body = part.strip_prefix("Y[").ok_or_else(bad)?;
            let close = body.find(']').ok_or_else(bad)?;
            let (inside, rest) = (&body[..close], &body[close + 1..]);
            let (i, a) = inside.split_once(',').ok_or_else(bad)?;
            let i: i64 = i.trim().parse().map_err(|_| bad())?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let e: i32 = match rest.strip_prefix('^') {
                Some(e) => e.trim().parse().map_err(|_| bad())?,
                None if rest.is_empty() => 1,
                None => return Err(bad()),
            };
            fs.push((i, a, e));
        }
        LWeight::from_factors(rank, fs)
    }

    /// Parse the command line form `node:shift[^exp],...`.
    pub fn parse_compact(rank: u32, s: &str) -> Result<LWeight> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(LWeight::one(rank));
        }
        let mut fs = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let bad = || Error::Parse(format!("bad factor `{part}`, expected node:shift[^exp]"));
            let (i, rest) = part.split_once(':').ok_or_else(bad)?;
            let (a, e) = match rest.split_once('^') {
                Some((a, e)) => (a, e.trim().parse::<i32>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let i: i64 = i.trim().parse().map_err(|_| bad())?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            fs.push((i, a, e));
        }
        LWeight::from_factors(rank, fs)
    }

    /// Inverse of `parse_compact`.
    pub fn to_compact(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(
                |&(g, e)| {
                    if e == 1 {
                        format!("{}:{}", g.node, g.shift)
                    } else {
                        format!("{}:{}^{}", g.node, g.shift, e)
                    }
                },
            )
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for LWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, &(g, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "Y[{},{}]", g.node, g.shift)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Panics on a rank mismatch; use [`LWeight::checked_mul`] on untrusted input.
impl Mul<&LWeight> for &LWeight {
    type Output = LWeight;
    fn mul(self, rhs: &LWeight) -> LWeight {
        self.checked_mul(rhs).expect("rank mismatch in LWeight product")
    }
}

impl Mul for LWeight {
    type Output = LWeight;
    fn mul(self, rhs: LWeight) -> LWeight {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    i: u32,
    a: i64,
    e: i32,
}

#[derive(Serialize, Deserialize)]
struct LWeightJson {
    n: u32,
    factors: Vec<FactorJson>,
}

impl Serialize for LWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LWeightJson {
            n: self.rank,
            factors: self.factors.iter().map(|&(g, e)| FactorJson { i: g.node, a: g.shift, e }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LWeight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LWeightJson::deserialize(d)?;
        LWeight::from_factors(j.n, j.factors.into_iter().map(|f| (f.i as i64, f.a, f.e)))
            .map_err(serde::de::Error::custom)
    }
}

/// `alpha_{i,a} = Y[i-1,a]^-1 Y[i,a-1] Y[i,a+1] Y[i+1,a]^-1`.
pub fn simple_affine_root(rank: u32, node: u32, shift: i64) -> Result<LWeight> {
    if node < 1 || node > rank {
        return Err(Error::NodeOutOfRange { node: node as i64, rank });
    }
    let i = node as i64;
    let mut fs = vec![(i, shift - 1, 1), (i, shift + 1, 1)];
    if i > 1 {
        fs.push((i - 1, shift, -1));
    }
    if i < rank as i64 {
        fs.push((i + 1, shift, -1));
    }
    LWeight::from_factors(rank, fs)
}

/// Exponents of the simple affine roots in an element of `Q^+`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootDecomposition {
    pub rank: u32,
    pub exponents: BTreeMap<(u32, i64), u32>,
}

impl RootDecomposition {
    pub fn to_lweight(&self) -> LWeight {
        let mut out = LWeight::one(self.rank);
        for (&(i, a), &m) in &self.exponents {
            let r = simple_affine_root(self.rank, i, a).expect("node in range");
            out = &out * &r.pow(m as i32);
        }
        out
    }
}

/// Write `x` as a product of simple affine roots with nonnegative exponents,
/// or return `None` when `x` is not in `Q^+`.
///
/// The root `alpha_{i,a}` is the only root reaching shift `a+1`, so the
/// factors of largest shift in `x` determine the roots of largest shift.
/// Peeling those off repeatedly terminates because every root in the answer
/// has shift at least one above the smallest shift present in `x`.
pub fn decompose_in_q_plus(x: &LWeight) -> Option<RootDecomposition> {
    let rank = x.rank();
    let mut dec = RootDecomposition { rank, exponents: BTreeMap::new() };
    if x.is_one() {
        return Some(dec);
    }
    let floor = x.factors().iter().map(|(g, _)| g.shift).min()?;
    let mut rest = x.clone();
    while !rest.is_one() {
        let top = rest.factors().iter().map(|(g, _)| g.shift).max()?;
        if top - 1 < floor + 1 {
            return None;
        }
        let peel: Vec<(u32, i32)> =
            rest.factors().iter().filter(|(g, _)| g.shift == top).map(|&(g, e)| (g.node, e)).collect();
        for (node, e) in peel {
            if e < 0 {
                return None;
            }
            let r = simple_affine_root(rank, node, top - 1).ok()?;
            rest = &rest * &r.pow(-e);
            *dec.exponents.entry((node, top - 1)).or_insert(0) += e as u32;
        }
    }
    Some(dec)
}

/// `x <= y` in the partial order `y x^-1 in Q^+`.
pub fn lweight_le(x: &LWeight, y: &LWeight) -> bool {
    match y.checked_div(x) {
        Ok(q) => q.is_one() || decompose_in_q_plus(&q).is_some(),
        Err(_) => false,
    }
}

/// A classical weight in fundamental weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: u32) -> Self {
        Weight(vec![0; rank as usize])
    }

    pub fn rank(&self) -> u32 {
        self.0.len() as u32
    }

    /// The fundamental weight, or zero off the Dynkin diagram.
    pub fn fundamental(rank: u32, node: i64) -> Self {
        let mut w = Weight::zero(rank);
        if node >= 1 && node <= rank as i64 {
            w.0[node as usize - 1] = 1;
        }
        w
    }

    /// `alpha_i = 2 omega_i - omega_{i-1} - omega_{i+1}`.
    pub fn simple_root(rank: u32, node: u32) -> Self {
        let i = node as i64;
        Weight::fundamental(rank, i) + Weight::fundamental(rank, i)
            - Weight::fundamental(rank, i - 1)
            - Weight::fundamental(rank, i + 1)
    }

    pub fn scale(&self, k: i64) -> Self {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Coordinates in the simple roots, if the weight lies in the root
    /// lattice. Uses the closed form of the inverse Cartan matrix of type A.
    pub fn root_coordinates(&self) -> Option<Vec<i64>> {
        let n = self.0.len() as i64;
        (1..=n)
            .map(|i| {
                let num: i64 = (1..=n).map(|j| i.min(j) * (n + 1 - i.max(j)) * self.0[j as usize - 1]).sum();
                (num % (n + 1) == 0).then_some(num / (n + 1))
            })
            .collect()
    }

    pub fn in_q_plus(&self) -> bool {
        self.root_coordinates().is_some_and(|c| c.iter().all(|&x| x >= 0))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}
