//! The inflation map from rank `ibar` to rank `n = i(ibar+1) - 1`, sending
//! `Y[j,a]` to `Y[ij, ia]`, and the related subgroups and identities.

use serde::Serialize;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::exec;
use crate::lweight::{simple_affine_root, LWeight, Weight};
use crate::paths::{enumerate_paths, Path};
use crate::qcharacter::{snake_char, verify_identity, PrimeSnake, RingExpression};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InflationTriple {
    pub ibar: u32,
    pub i: u32,
    pub n: u32,
}

impl InflationTriple {
    pub fn new(ibar: u32, i: u32, n: u32) -> Result<Self> {
        if ibar == 0 || i == 0 || n + 1 != i * (ibar + 1) {
            return Err(Error::Inflation(format!("need n+1 = i(ibar+1), got ibar={ibar}, i={i}, n={n}")));
        }
        Ok(InflationTriple { ibar, i, n })
    }

    fn ii(&self) -> i64 {
        self.i as i64
    }

    fn check_rank(&self, x: &LWeight) -> Result<()> {
        if x.rank() != self.ibar {
            return Err(Error::RankMismatch(self.ibar, x.rank()));
        }
        Ok(())
    }

    pub fn phi(&self, x: &LWeight) -> Result<LWeight> {
        self.check_rank(x)?;
        let i = self.ii();
        LWeight::from_factors(self.n, x.factors().iter().map(|&(g, e)| (i * g.node as i64, i * g.shift, e)))
    }

    pub fn phi_char(&self, c: &Character) -> Result<Character> {
        if c.rank() != self.ibar {
            return Err(Error::RankMismatch(self.ibar, c.rank()));
        }
        c.map_monomials(self.n, |m| self.phi(m).expect("rank checked"))
    }

    /// Whether every generator of `x` has node and shift divisible by `i`.
    pub fn in_image(&self, x: &LWeight) -> bool {
        let i = self.ii();
        x.rank() == self.n && x.factors().iter().all(|&(g, _)| g.node as i64 % i == 0 && g.shift.rem_euclid(i) == 0)
    }

    pub fn phi_inverse(&self, x: &LWeight) -> Result<LWeight> {
        if !self.in_image(x) {
            return Err(Error::NotInImage(x.to_string()));
        }
        let i = self.ii();
        LWeight::from_factors(self.ibar, x.factors().iter().map(|&(g, e)| (g.node as i64 / i, g.shift / i, e)))
    }

    /// `omega_j -> omega_{ij}` on classical weights.
    pub fn phi_weight(&self, w: &Weight) -> Result<Weight> {
        if w.rank() != self.ibar {
            return Err(Error::RankMismatch(self.ibar, w.rank()));
        }
        let mut out = Weight::zero(self.n);
        for (j, &c) in w.0.iter().enumerate() {
            out.0[(j + 1) * self.i as usize - 1] = c;
        }
        Ok(out)
    }

    /// `phi(alpha_j)` as the double sum `sum_{p=1}^{i} sum_{s=p-i}^{i-p} alpha_{ij+s}`.
    pub fn phi_simple_root_sum(&self, j: u32) -> Result<Weight> {
        self.check_index(j)?;
        let (i, j) = (self.ii(), j as i64);
        let mut out = Weight::zero(self.n);
        for p in 1..=i {
            for s in (p - i)..=(i - p) {
                out = out + Weight::simple_root(self.n, (i * j + s) as u32);
            }
        }
        Ok(out)
    }

    fn check_index(&self, j: u32) -> Result<()> {
        if j < 1 || j > self.ibar {
            return Err(Error::NodeOutOfRange { node: j as i64, rank: self.ibar });
        }
        Ok(())
    }

    /// `Phi(alpha_{j,a})`.
    pub fn phi_root(&self, j: u32, a: i64) -> Result<LWeight> {
        self.check_index(j)?;
        self.phi(&simple_affine_root(self.ibar, j, a)?)
    }

    /// The product of rank-`n` roots `alpha_{node, c + base}` where `base`
    /// is supplied by the caller, over the index pattern
    ///
    /// `prod_{k=1}^{i-1} prod_{p=1}^{k} alpha_{i(j-1)+k, base-k+2p-2} alpha_{i(j+1)-k, base-k+2p-2}`
    /// `* prod_{p=1}^{i} alpha_{ij, base-i+2p-2}`.
    fn root_pattern(&self, j: u32, base: i64) -> Result<LWeight> {
        self.check_index(j)?;
        let (i, jj, n) = (self.ii(), j as i64, self.n);
        let mut out = LWeight::one(n);
        for k in 1..i {
            for p in 1..=k {
                let c = base - k + 2 * p - 2;
                out = &out * &simple_affine_root(n, (i * (jj - 1) + k) as u32, c)?;
                out = &out * &simple_affine_root(n, (i * (jj + 1) - k) as u32, c)?;
            }
        }
        for p in 1..=i {
            out = &out * &simple_affine_root(n, (i * jj) as u32, base - i + 2 * p - 2)?;
        }
        Ok(out)
    }

    /// The root pattern for `Phi(alpha_{j,a})` with base `i(a+1)`. It comes
    /// out as `Phi(alpha_{j,a})` moved by `i - 1`.
    pub fn shifted_root_product(&self, j: u32, a: i64) -> Result<LWeight> {
        self.root_pattern(j, self.ii() * (a + 1))
    }

    /// The same pattern centred at `ia`, i.e. base `ia + 1`. This is the
    /// version that actually equals `Phi(alpha_{j,a})`.
    pub fn centred_root_product(&self, j: u32, a: i64) -> Result<LWeight> {
        self.root_pattern(j, self.ii() * a + 1)
    }

    pub fn inflate_path(&self, p: &Path) -> Result<Path> {
        if p.n() != self.ibar {
            return Err(Error::RankMismatch(self.ibar, p.n()));
        }
        let i = self.ii();
        let v = p.values();
        let mut out = Vec::with_capacity(self.n as usize + 2);
        for (j, &pj) in v.iter().enumerate() {
            if j + 1 == v.len() {
                out.push(i * pj);
                break;
            }
            let up = v[j + 1] > pj;
            for jp in 0..i {
                out.push(if up { i * pj + jp } else { i * pj - jp });
            }
        }
        Path::new(self.n, out)
    }

    /// `r -> g(ir)/i`, defined when every corner and endpoint `m` of `g`
    /// has `m` and `g(m)` divisible by `i`.
    pub fn deflate_path(&self, g: &Path) -> Result<Path> {
        if g.n() != self.n {
            return Err(Error::RankMismatch(self.n, g.n()));
        }
        let i = self.ii();
        let marks =
            g.corners_plus().into_iter().chain(g.corners_minus()).map(|r| r as usize).chain([0, self.n as usize + 1]);
        for m in marks {
            if (m as i64) % i != 0 || g.at(m).rem_euclid(i) != 0 {
                return Err(Error::NotInImage(format!("path {:?} has a corner at {m}", g.values())));
            }
        }
        let values: Vec<i64> = (0..=self.ibar as usize + 1).map(|r| g.at(r * self.i as usize) / i).collect();
        Path::new(self.ibar, values)
    }

    /// Prime snake images: the image of the q-character of `V(omega)` equals
    /// the part of the q-character of `V(Phi(omega))` lying in the image.
    pub fn verify_inflpaths(&self, omega: &PrimeSnake) -> Result<bool> {
        if omega.n() != self.ibar {
            return Err(Error::RankMismatch(self.ibar, omega.n()));
        }
        let small = self.phi_char(&snake_char(omega)?)?;
        let big_snake = PrimeSnake::from_lweight(&self.phi(&omega.to_lweight())?)?;
        let big = snake_char(&big_snake)?.truncate(|m| self.in_image(m));
        Ok(small == big)
    }

    pub fn index_set(&self) -> Vec<i64> {
        (1..=self.ibar as i64).map(|k| k * self.ii()).collect()
    }

    fn check_in_i(&self, j: i64) -> Result<()> {
        if j < self.ii() || j > self.n as i64 || j % self.ii() != 0 {
            return Err(Error::Hypothesis(format!("{j} is not in {{i, 2i, ..., ibar i}}")));
        }
        Ok(())
    }

    /// `0` on `2iZ` and `-i` on `i(2Z-1)`.
    pub fn epsilon(&self, j: i64) -> Result<i64> {
        self.check_in_i(j)?;
        Ok(self.eps(j))
    }

    // Also used for differences of indices, which are multiples of i but
    // may fall outside the index set.
    fn eps(&self, j: i64) -> i64 {
        if j.rem_euclid(2 * self.ii()) == 0 {
            0
        } else {
            -self.ii()
        }
    }

    /// `f_j = Y[j, 3 eps_j] Y[j, -eps_j - 2i]`.
    pub fn f_weight(&self, j: i64) -> Result<LWeight> {
        let e = self.epsilon(j)?;
        LWeight::from_factors(self.n, [(j, 3 * e, 1), (j, -e - 2 * self.ii(), 1)])
    }

    /// `omega(j,k) = prod Y[j', 3 eps_{j'}]` over `j' = j, j+i, ..., k`; the
    /// identity when `j > k`.
    pub fn interval_weight(&self, j: i64, k: i64) -> Result<LWeight> {
        if j > k {
            return Ok(LWeight::one(self.n));
        }
        self.check_in_i(j)?;
        self.check_in_i(k)?;
        let mut fs = Vec::new();
        let mut t = j;
        while t <= k {
            fs.push((t, 3 * self.eps(t), 1));
            t += self.ii();
        }
        LWeight::from_factors(self.n, fs)
    }

    /// `Y[m, -2i - eps_m]`.
    pub fn lower_weight(&self, m: i64) -> Result<LWeight> {
        let e = self.epsilon(m)?;
        LWeight::y(self.n, m, -2 * self.ii() - e)
    }

    // Y[j, c] with the boundary convention.
    fn y(&self, j: i64, c: i64) -> LWeight {
        LWeight::y_or_one(self.n, j, c)
    }

    /// Generators `Y[ij, ia]` with `j` in `[1, ibar]`, `j - a` even and
    /// `a <= 0` (and `a >= -3` for the smaller subgroup).
    pub fn in_h(&self, x: &LWeight, level_one: bool) -> bool {
        let i = self.ii();
        x.rank() == self.n
            && x.factors().iter().all(|&(g, _)| {
                let (node, shift) = (g.node as i64, g.shift);
                if node % i != 0 || shift.rem_euclid(i) != 0 {
                    return false;
                }
                let (j, a) = (node / i, shift / i);
                (j - a) % 2 == 0 && a <= 0 && (!level_one || a >= -3)
            })
    }

    pub fn classify_pr(&self, x: &LWeight) -> Option<PrElement> {
        let idx = self.index_set();
        for &j in &idx {
            if self.f_weight(j).ok().as_ref() == Some(x) {
                return Some(PrElement::F(j));
            }
            if self.lower_weight(j).ok().as_ref() == Some(x) {
                return Some(PrElement::Lower(j));
            }
            for &k in idx.iter().filter(|&&k| k >= j) {
                if self.interval_weight(j, k).ok().as_ref() == Some(x) {
                    return Some(PrElement::Interval(j, k));
                }
            }
        }
        None
    }

    /// The sufficient condition for `V(pi1) ⊗ V(pi2)` to be simple, for
    /// `pi1`, `pi2` in the distinguished set, checked clause by clause in
    /// the given order of the pair.
    pub fn irredcrit(&self, pi1: &LWeight, pi2: &LWeight) -> Result<bool> {
        let c1 =
            self.classify_pr(pi1).ok_or_else(|| Error::Hypothesis(format!("{pi1} is not in the distinguished set")))?;
        let c2 =
            self.classify_pr(pi2).ok_or_else(|| Error::Hypothesis(format!("{pi2} is not in the distinguished set")))?;
        let i = self.ii();
        Ok(match (c1, c2) {
            (PrElement::F(_), _) => true,
            (PrElement::Interval(j, k), PrElement::Interval(m, r)) => {
                m != k + i
                    && (j == m
                        || k <= m
                        || k == r
                        || (j < m && m < k && k < r && self.eps(k - m) == 0)
                        || (j < m && m < r && r < k && self.eps(r - m) == -i))
            }
            (PrElement::Lower(_), PrElement::Lower(_)) => true,
            (PrElement::Lower(j), PrElement::Interval(m, r)) => j < m || j > r,
            _ => false,
        })
    }

    /// `[V(Y[p,3e])][V(Y[p,-2i-e])] = [V(f_p)] + [V(Y[p-i, e-i])][V(Y[p+i, e-i])]`, `e = eps_p`.
    pub fn indstep_i(&self, p: i64) -> Result<(RingExpression, RingExpression)> {
        let e = self.epsilon(p)?;
        let i = self.ii();
        let lhs = RingExpression::product(self.n, vec![self.y(p, 3 * e), self.lower_weight(p)?]);
        let rhs = RingExpression::product(self.n, vec![self.f_weight(p)?])
            .plus(RingExpression::product(self.n, vec![self.y(p - i, e - i), self.y(p + i, e - i)]));
        Ok((lhs, rhs))
    }

    pub fn verify_indstep_i(&self, p: i64) -> Result<bool> {
        let (l, r) = self.indstep_i(p)?;
        verify_identity(&l, &r)
    }

    /// The second identity, for `j < k`:
    /// `[V(Y[j,-2i-e_j])][V(omega(j,k))] = [V(f_j)][V(omega(j+i,k))] + [V(Y[j-i, e_j-i])][V(f_{j+i} omega(j+2i,k))]`.
    pub fn indstep_ii(&self, j: i64, k: i64) -> Result<(RingExpression, RingExpression)> {
        self.check_pair(j, k)?;
        let (i, e) = (self.ii(), self.eps(j));
        let lhs = RingExpression::product(self.n, vec![self.lower_weight(j)?, self.interval_weight(j, k)?]);
        let tail = &self.f_weight(j + i)? * &self.interval_weight(j + 2 * i, k)?;
        let rhs = RingExpression::product(self.n, vec![self.f_weight(j)?, self.interval_weight(j + i, k)?])
            .plus(RingExpression::product(self.n, vec![self.y(j - i, e - i), tail]));
        Ok((lhs, rhs))
    }

    /// The third identity, for `j < k`:
    /// `[V(Y[j,3e_j])][V(omega(j+i,k))] = [V(omega(j,k))] + [V(pi)]`.
    pub fn indstep_iii(&self, j: i64, k: i64) -> Result<(RingExpression, RingExpression)> {
        self.check_pair(j, k)?;
        let (i, e) = (self.ii(), self.eps(j));
        let lhs = RingExpression::product(self.n, vec![self.y(j, 3 * e), self.interval_weight(j + i, k)?]);
        let mut pi = vec![self.y(j - i, e - i)];
        if k == j + i {
            pi.push(self.y(j + 2 * i, self.eps(j + i) - i));
        } else {
            pi.push(&self.f_weight(j + 2 * i)? * &self.interval_weight(j + 3 * i, k)?);
        }
        let rhs = RingExpression::product(self.n, vec![self.interval_weight(j, k)?])
            .plus(RingExpression::product(self.n, pi));
        Ok((lhs, rhs))
    }

    fn check_pair(&self, j: i64, k: i64) -> Result<()> {
        self.check_in_i(j)?;
        self.check_in_i(k)?;
        if j >= k {
            return Err(Error::Hypothesis(format!("need j < k, got {j}, {k}")));
        }
        Ok(())
    }

    /// Every way of writing a monomial of `W(Phi(omega))` as a product of
    /// single path monomials, one path per fundamental factor: whenever the
    /// product lies in `H` or is dominant, each path must deflate.
    pub fn weyl_monomial_factor_check(&self, omega: &LWeight) -> Result<bool> {
        self.check_rank(omega)?;
        let trivial = InflationTriple { ibar: self.ibar, i: 1, n: self.ibar };
        if !omega.is_dominant() || !trivial.in_h(omega, false) {
            return Err(Error::Hypothesis(format!("{omega} is not in the dominant part of H for rank {}", self.ibar)));
        }
        let big = self.phi(omega)?;
        let mut families: Vec<Vec<Path>> = Vec::new();
        for &(g, e) in big.factors() {
            let ps = enumerate_paths(g.node, g.shift, self.n)?;
            for _ in 0..e {
                families.push(ps.clone());
            }
        }
        if families.is_empty() {
            return Ok(true);
        }
        let mono: Vec<Vec<LWeight>> = families.iter().map(|f| f.iter().map(Path::monomial).collect()).collect();
        let deflates: Vec<Vec<bool>> =
            families.iter().map(|f| f.iter().map(|p| self.deflate_path(p).is_ok()).collect()).collect();
        let firsts: Vec<usize> = (0..families[0].len()).collect();
        Ok(exec::all(&firsts, |&k0| {
            let mut idx = vec![k0];
            self.factor_walk(&mono, &deflates, &mut idx)
        }))
    }

    fn factor_walk(&self, mono: &[Vec<LWeight>], ok: &[Vec<bool>], idx: &mut Vec<usize>) -> bool {
        if idx.len() == mono.len() {
            let pi = idx.iter().enumerate().fold(LWeight::one(self.n), |acc, (s, &k)| &acc * &mono[s][k]);
            if pi.is_dominant() || self.in_h(&pi, false) {
                return idx.iter().enumerate().all(|(s, &k)| ok[s][k]);
            }
            return true;
        }
        for k in 0..mono[idx.len()].len() {
            idx.push(k);
            let good = self.factor_walk(mono, ok, idx);
            idx.pop();
            if !good {
                return false;
            }
        }
        true
    }
}

/// Members of the distinguished set of dominant monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrElement {
    F(i64),
    Interval(i64, i64),
    Lower(i64),
}

/// Outcome of an identity check that needs every class to be a prime snake.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityCheck {
    Holds,
    Fails,
    Skipped(String),
}

/// Evaluate an identity, reporting a skip rather than an error when some
/// class is not a prime snake.
pub fn check_identity(lhs: &RingExpression, rhs: &RingExpression) -> Result<IdentityCheck> {
    for (_, classes) in lhs.terms.iter().chain(&rhs.terms) {
        for w in classes {
            if PrimeSnake::from_lweight(w).is_err() {
                return Ok(IdentityCheck::Skipped(format!("non-snake class {w}")));
            }
        }
    }
    Ok(if verify_identity(lhs, rhs)? { IdentityCheck::Holds } else { IdentityCheck::Fails })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lweight::decompose_in_q_plus;
    use crate::paths::lowest_path;

    fn t(ibar: u32, i: u32, n: u32) -> InflationTriple {
        InflationTriple::new(ibar, i, n).unwrap()
    }

    #[test]
    fn triples() {
        assert!(InflationTriple::new(2, 2, 5).is_ok());
        assert!(InflationTriple::new(1, 2, 3).is_ok());
        assert!(InflationTriple::new(2, 1, 2).is_ok());
        assert!(InflationTriple::new(1, 1, 2).is_err());
    }

    #[test]
    fn phi_on_generators() {
        let tr = t(2, 2, 5);
        let x = LWeight::parse(2, "Y[1,-1]").unwrap();
        assert_eq!(tr.phi(&x).unwrap().to_string(), "Y[2,-2]");
        assert!(tr.phi(&LWeight::one(2)).unwrap().is_one());
        assert_eq!(tr.phi_inverse(&tr.phi(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn phi_of_simple_roots_matches_the_double_sum() {
        for tr in [t(1, 1, 1), t(2, 2, 5), t(1, 2, 3), t(3, 2, 7), t(2, 3, 8), t(1, 4, 7)] {
            for j in 1..=tr.ibar {
                let direct = tr.phi_weight(&Weight::simple_root(tr.ibar, j)).unwrap();
                assert_eq!(direct, tr.phi_simple_root_sum(j).unwrap());
            }
        }
    }

    #[test]
    fn root_products() {
        for tr in [t(1, 1, 1), t(3, 1, 3), t(2, 2, 5), t(1, 2, 3), t(3, 2, 7), t(2, 3, 8), t(1, 4, 7)] {
            for j in 1..=tr.ibar {
                for a in -3..4 {
                    let direct = tr.phi_root(j, a).unwrap();
                    assert_eq!(tr.centred_root_product(j, a).unwrap(), direct);
                    // Base i(a+1) gives the same product moved by i-1.
                    let shifted = direct.shift_by(tr.i as i64 - 1);
                    assert_eq!(tr.shifted_root_product(j, a).unwrap(), shifted);
                    assert!(decompose_in_q_plus(&direct).is_some());
                }
            }
        }
    }

    #[test]
    fn path_inflation() {
        let tr = t(2, 2, 5);
        for k in 1..=2 {
            for p in enumerate_paths(k, 1, 2).unwrap() {
                let g = tr.inflate_path(&p).unwrap();
                assert_eq!(g.family(), (2 * k, 2));
                assert_eq!(g.monomial(), tr.phi(&p.monomial()).unwrap());
                assert_eq!(tr.deflate_path(&g).unwrap(), p);
            }
        }
        let low = tr.inflate_path(&lowest_path(1, 3, 2).unwrap()).unwrap();
        assert_eq!(low, lowest_path(2, 6, 5).unwrap());
        let odd = Path::new(5, vec![2, 1, 2, 3, 4, 5, 6]).unwrap();
        assert!(tr.deflate_path(&odd).is_err());
    }

    #[test]
    fn epsilon_and_special_weights() {
        let tr = t(1, 1, 1);
        assert_eq!(tr.epsilon(1).unwrap(), -1);
        assert_eq!(tr.f_weight(1).unwrap().to_string(), "Y[1,-3]·Y[1,-1]");
        let tr = t(2, 2, 5);
        assert_eq!(tr.epsilon(2).unwrap(), -2);
        assert_eq!(tr.epsilon(4).unwrap(), 0);
        assert!(tr.epsilon(3).is_err());
        assert_eq!(tr.f_weight(2).unwrap().to_string(), "Y[2,-6]·Y[2,-2]");
        assert_eq!(tr.interval_weight(4, 4).unwrap().to_string(), "Y[4,0]");
        for j in tr.index_set() {
            assert!(tr.in_h(&tr.f_weight(j).unwrap(), true));
            assert!(tr.in_h(&tr.lower_weight(j).unwrap(), true));
            for k in tr.index_set().into_iter().filter(|&k| k >= j) {
                assert!(tr.in_h(&tr.interval_weight(j, k).unwrap(), true));
            }
        }
    }

    #[test]
    fn irredcrit_clauses() {
        let tr = t(3, 2, 7);
        let f = tr.f_weight(2).unwrap();
        let w = |j, k| tr.interval_weight(j, k).unwrap();
        assert!(tr.irredcrit(&f, &w(2, 4)).unwrap());
        assert!(!tr.irredcrit(&w(2, 2), &w(4, 6)).unwrap());
        assert!(tr.irredcrit(&w(2, 4), &w(2, 4)).unwrap());
        assert!(tr.irredcrit(&tr.lower_weight(2).unwrap(), &w(4, 6)).unwrap());
        assert!(!tr.irredcrit(&tr.lower_weight(4).unwrap(), &w(2, 6)).unwrap());
        assert!(tr.irredcrit(&LWeight::parse(7, "Y[1,0]").unwrap(), &f).is_err());
    }

    #[test]
    fn first_identity_small() {
        for tr in [t(2, 1, 2), t(2, 2, 5)] {
            for p in tr.index_set() {
                assert!(tr.verify_indstep_i(p).unwrap(), "{tr:?} p={p}");
            }
        }
    }

    #[test]
    fn inflpaths_fundamentals() {
        let tr = t(2, 2, 5);
        for j in 1..=2 {
            let s = PrimeSnake::new(2, vec![(j, 0)]).unwrap();
            assert!(tr.verify_inflpaths(&s).unwrap());
        }
    }

    #[test]
    fn weyl_factor_check_fundamentals() {
        let tr = t(2, 2, 5);
        for x in ["Y[1,-1]", "Y[2,0]", "Y[1,-1]·Y[2,-2]"] {
            assert!(tr.weyl_monomial_factor_check(&LWeight::parse(2, x).unwrap()).unwrap());
        }
        assert!(tr.weyl_monomial_factor_check(&LWeight::parse(2, "Y[1,0]").unwrap()).is_err());
    }
}
