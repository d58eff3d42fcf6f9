//! Finite integer combinations of ℓ-weights.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec;
use crate::limits;
use crate::lweight::LWeight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    rank: u32,
    terms: BTreeMap<LWeight, i64>,
}

impl Character {
    pub fn zero(rank: u32) -> Self {
        Character { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: u32) -> Self {
        Self::monomial(LWeight::one(rank))
    }

    pub fn monomial(m: LWeight) -> Self {
        let rank = m.rank();
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        Character { rank, terms }
    }

    /// Sum the given terms, dropping anything that cancels.
    pub fn from_terms<I: IntoIterator<Item = (LWeight, i64)>>(rank: u32, it: I) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in it {
            if m.rank() != rank {
                return Err(Error::RankMismatch(rank, m.rank()));
            }
            *terms.entry(m).or_insert(0) += c;
        }
        terms.retain(|_, c| *c != 0);
        limits::check_terms(terms.len())?;
        Ok(Character { rank, terms })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LWeight, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &LWeight> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &LWeight) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn contains(&self, m: &LWeight) -> bool {
        self.terms.contains_key(m)
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.terms.values().all(|&c| c == 1)
    }

    /// Sum of all coefficients, the dimension of a module with this character.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn dominant_monomials(&self) -> Vec<LWeight> {
        self.terms.keys().filter(|m| m.is_dominant()).cloned().collect()
    }

    /// Keep only the monomials satisfying `keep`.
    pub fn truncate(&self, keep: impl Fn(&LWeight) -> bool) -> Character {
        Character {
            rank: self.rank,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Character {
        if k == 0 {
            return Character::zero(self.rank);
        }
        Character { rank: self.rank, terms: self.terms.iter().map(|(m, &c)| (m.clone(), c * k)).collect() }
    }

    pub fn add(&self, other: &Character) -> Result<Character> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            *terms.entry(m.clone()).or_insert(0) += c;
        }
        terms.retain(|_, c| *c != 0);
        limits::check_terms(terms.len())?;
        Ok(Character { rank: self.rank, terms })
    }

    pub fn sub(&self, other: &Character) -> Result<Character> {
        self.add(&other.scale(-1))
    }

    /// Apply a monomial map termwise (used for inflation and duals).
    pub fn map_monomials(&self, rank: u32, f: impl Fn(&LWeight) -> LWeight) -> Result<Character> {
        Character::from_terms(rank, self.terms.iter().map(|(m, &c)| (f(m), c)))
    }

    /// The product, computed in parallel over the terms of `self`. Fails if
    /// the result would exceed the configured term cap.
    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let lhs: Vec<(&LWeight, i64)> = big.terms().collect();
        let rhs: Vec<(&LWeight, i64)> = small.terms().collect();
        let cap = limits::max_terms();
        let acc = exec::fold(
            &lhs,
            HashMap::<LWeight, i64>::new,
            |mut acc, &(m, c)| {
                if acc.len() <= cap {
                    for &(n, d) in &rhs {
                        *acc.entry(m * n).or_insert(0) += c * d;
                    }
                }
                acc
            },
            |a, b| if a.len() >= b.len() { merge_into(a, b) } else { merge_into(b, a) },
        );
        // A partial accumulator past the cap stops growing, so the merged
        // size is the conservative test here.
        limits::check_terms(acc.len())?;
        let terms: BTreeMap<LWeight, i64> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        limits::check_terms(terms.len())?;
        Ok(Character { rank: self.rank, terms })
    }

    /// Product of a list of characters, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Character>>(rank: u32, it: I) -> Result<Character> {
        let mut acc = Character::one(rank);
        for c in it {
            acc = acc.mul(c)?;
        }
        Ok(acc)
    }
}

fn merge_into(mut a: HashMap<LWeight, i64>, b: HashMap<LWeight, i64>) -> HashMap<LWeight, i64> {
    for (m, c) in b {
        *a.entry(m).or_insert(0) += c;
    }
    a
}

/// Coefficient of `target` in the product of `factors`, without expanding
/// the whole product: the factor list is split in two, each half is
/// expanded, and matching pairs are counted.
pub fn coefficient_in_product(factors: &[Character], target: &LWeight) -> Result<i64> {
    let rank = target.rank();
    if let Some(f) = factors.iter().find(|f| f.rank() != rank) {
        return Err(Error::RankMismatch(rank, f.rank()));
    }
    if factors.is_empty() {
        return Ok(if target.is_one() { 1 } else { 0 });
    }
    // Balance the halves by size so neither expansion dominates.
    let total: f64 = factors.iter().map(|f| (f.len().max(1) as f64).ln()).sum();
    let mut split = 0;
    let mut run = 0.0;
    while split < factors.len() && run + (factors[split].len().max(1) as f64).ln() <= total / 2.0 {
        run += (factors[split].len().max(1) as f64).ln();
        split += 1;
    }
    let left = Character::product(rank, &factors[..split])?;
    let right = Character::product(rank, &factors[split..])?;
    let pairs: Vec<(&LWeight, i64)> = left.terms().collect();
    let sum = exec::fold(
        &pairs,
        || 0i64,
        |acc, &(m, c)| {
            let need = target.checked_div(m).expect("ranks checked");
            acc + c * right.coefficient(&need)
        },
        |a, b| a + b,
    );
    Ok(sum)
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            if abs != 1 {
                write!(f, "{abs}·")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: LWeight,
    mult: i64,
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, &c) in &self.terms {
            seq.serialize_element(&TermJson { monomial: m.clone(), mult: c })?;
        }
        seq.end()
    }
}

impl Character {
    /// JSON has no room for the rank of an empty character, so parsing takes
    /// it explicitly.
    pub fn from_json(rank: u32, s: &str) -> Result<Character> {
        let terms: Vec<TermJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Character::from_terms(rank, terms.into_iter().map(|t| (t.monomial, t.mult)))
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<TermJson> = Vec::deserialize(d)?;
        let rank = terms.first().map(|t| t.monomial.rank()).unwrap_or(0);
        Character::from_terms(rank, terms.into_iter().map(|t| (t.monomial, t.mult))).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(rank: u32, terms: &[(&str, i64)]) -> Character {
        Character::from_terms(rank, terms.iter().map(|&(m, c)| (LWeight::parse(rank, m).unwrap(), c))).unwrap()
    }

    #[test]
    fn product_of_fundamentals_sl2() {
        let a = ch(1, &[("Y[1,0]", 1), ("Y[1,2]^-1", 1)]);
        let b = ch(1, &[("Y[1,2]", 1), ("Y[1,4]^-1", 1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.coefficient(&LWeight::one(1)), 1);
        assert_eq!(p.total(), 4);
        assert_eq!(exec::sequential(|| a.mul(&b)).unwrap(), p);
    }

    #[test]
    fn cancellation_and_sums() {
        let a = ch(1, &[("Y[1,0]", 2)]);
        assert!(a.sub(&a).unwrap().is_empty());
        assert_eq!(a.scale(-1).to_string(), "-2·Y[1,0]");
    }

    #[test]
    fn meet_in_the_middle_matches_expansion() {
        let f = |s| ch(1, &[(&format!("Y[1,{s}]") as &str, 1), (&format!("Y[1,{}]^-1", s + 2) as &str, 1)]);
        let fs: Vec<Character> = vec![f(0), f(2), f(0), f(4), f(2)];
        let full = Character::product(1, &fs).unwrap();
        for m in full.monomials() {
            assert_eq!(coefficient_in_product(&fs, m).unwrap(), full.coefficient(m));
        }
        let absent = LWeight::parse(1, "Y[1,40]").unwrap();
        assert_eq!(coefficient_in_product(&fs, &absent).unwrap(), 0);
    }

    #[test]
    fn term_cap_is_enforced() {
        let f = |s: i64| ch(1, &[(&format!("Y[1,{s}]") as &str, 1), (&format!("Y[1,{}]^-1", s + 2) as &str, 1)]);
        let r = limits::with_max_terms(3, || f(0).mul(&f(10)));
        assert_eq!(r, Err(Error::CharacterTooLarge { cap: 3 }));
    }

    #[test]
    fn json_round_trip() {
        let a = ch(2, &[("Y[1,0]", 1), ("Y[1,2]^-1·Y[2,1]", 1)]);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with(r#"[{"monomial":{"n":2,"factors":[{"i":1,"a":0,"e":1}]},"mult":1}"#));
        assert_eq!(Character::from_json(2, &s).unwrap(), a);
    }
}
