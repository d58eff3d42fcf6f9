//! q-characters of prime snake modules and identities between them.

use std::fmt;

use serde::Serialize;

use crate::character::{coefficient_in_product, Character};
use crate::error::{Error, Result};
use crate::lweight::LWeight;
use crate::paths::noncrossing_monomials;
use crate::segments::{in_s_mrn, reducibility_witness, ReducibilityWitness, Segment, SegmentContext};

/// A dominant monomial `Y[i_1,a_1] ... Y[i_k,a_k]` whose factors, sorted by
/// shift, have consecutive gaps `a_p - a_{p-1}` in `S_{i_p, i_{p-1}, n}`.
/// The empty snake stands for the trivial module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeSnake {
    n: u32,
    factors: Vec<(u32, i64)>,
}

impl PrimeSnake {
    pub fn new(n: u32, mut factors: Vec<(u32, i64)>) -> Result<PrimeSnake> {
        if let Some(&(i, _)) = factors.iter().find(|&&(i, _)| i < 1 || i > n) {
            return Err(Error::NodeOutOfRange { node: i as i64, rank: n });
        }
        factors.sort_by_key(|&(i, a)| (a, i));
        for w in factors.windows(2) {
            let ((i0, a0), (i1, a1)) = (w[0], w[1]);
            if !in_s_mrn(a1 - a0, i1, i0, n) {
                return Err(Error::NotPrimeSnake(format!(
                    "gap {} between Y[{i0},{a0}] and Y[{i1},{a1}] is not in S_{{{i1},{i0},{n}}}",
                    a1 - a0
                )));
            }
        }
        Ok(PrimeSnake { n, factors })
    }

    pub fn from_lweight(x: &LWeight) -> Result<PrimeSnake> {
        if !x.is_dominant() {
            return Err(Error::NotDominant(x.to_string()));
        }
        let mut fs = Vec::new();
        for &(g, e) in x.factors() {
            for _ in 0..e {
                fs.push((g.node, g.shift));
            }
        }
        PrimeSnake::new(x.rank(), fs)
    }

    pub fn segment(ctx: &SegmentContext, s: &Segment) -> PrimeSnake {
        PrimeSnake::new(ctx.n, s.entries().iter().map(|&a| (ctx.i, a)).collect()).expect("a segment is a prime snake")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Factors in increasing shift order.
    pub fn factors(&self) -> &[(u32, i64)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn to_lweight(&self) -> LWeight {
        LWeight::from_factors(self.n, self.factors.iter().map(|&(i, a)| (i as i64, a, 1))).expect("nodes checked")
    }
}

impl fmt::Display for PrimeSnake {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_lweight())
    }
}

/// The q-character of `V(omega)` for a prime snake: one term for each
/// strictly non-crossing tuple of paths, each with multiplicity one.
pub fn snake_char(s: &PrimeSnake) -> Result<Character> {
    let fams: Vec<(u32, i64)> = s.factors.clone();
    let monos = noncrossing_monomials(&fams, s.n)?;
    Character::from_terms(s.n, monos.into_iter().map(|m| (m, 1)))
}

pub fn fundamental_char(n: u32, i: u32, a: i64) -> Result<Character> {
    snake_char(&PrimeSnake::new(n, vec![(i, a)])?)
}

/// Characters of the fundamental modules whose tensor product is `W(omega)`.
pub fn weyl_factors(omega: &LWeight) -> Result<Vec<Character>> {
    if !omega.is_dominant() && !omega.is_one() {
        return Err(Error::NotDominant(omega.to_string()));
    }
    let mut out = Vec::new();
    for &(g, e) in omega.factors() {
        let f = fundamental_char(omega.rank(), g.node, g.shift)?;
        for _ in 0..e {
            out.push(f.clone());
        }
    }
    Ok(out)
}

/// The q-character of the local Weyl module, the product of fundamentals.
pub fn weyl_char(omega: &LWeight) -> Result<Character> {
    Character::product(omega.rank(), &weyl_factors(omega)?)
}

/// The two correction weights of the extended T-system for the chain
/// `(i_1,a_1), ..., (i_{k+1}, a_{k+1})`:
/// factor `p` of `omega^±` is `Y[(i_p+i_{p+1} ± (a_p-a_{p+1}))/2, (a_p+a_{p+1} ± (i_p-i_{p+1}))/2]`,
/// dropped when the node leaves `[1, n]`.
pub fn tsystem_pm(n: u32, chain: &[(u32, i64)]) -> (LWeight, LWeight) {
    let mut plus = LWeight::one(n);
    let mut minus = LWeight::one(n);
    for w in chain.windows(2) {
        let ((i0, a0), (i1, a1)) = ((w[0].0 as i64, w[0].1), (w[1].0 as i64, w[1].1));
        let node_sum = i0 + i1;
        let shift_sum = a0 + a1;
        let (dn, ds) = (a0 - a1, i0 - i1);
        plus = &plus * &LWeight::y_or_one(n, (node_sum + dn) / 2, (shift_sum + ds) / 2);
        minus = &minus * &LWeight::y_or_one(n, (node_sum - dn) / 2, (shift_sum - ds) / 2);
    }
    (plus, minus)
}

/// Split a snake into its prime pieces.
///
/// Consecutive factors `(i, a)`, `(j, b)` of a snake satisfy
/// `b - a >= |i - j| + 2` with `b - a = i - j` mod 2; the snake is cut
/// wherever `b - a` lies above `S_{j,i,n}`. The simple module of a snake is
/// the tensor product of the simple modules of its pieces, so this is the
/// only non-prime case whose character is available here.
pub fn snake_components(x: &LWeight) -> Result<Vec<PrimeSnake>> {
    if !x.is_dominant() && !x.is_one() {
        return Err(Error::NotDominant(x.to_string()));
    }
    let n = x.rank();
    let mut fs = Vec::new();
    for &(g, e) in x.factors() {
        for _ in 0..e {
            fs.push((g.node, g.shift));
        }
    }
    fs.sort_by_key(|&(i, a)| (a, i));
    let mut pieces: Vec<Vec<(u32, i64)>> = Vec::new();
    for (k, &(j, b)) in fs.iter().enumerate() {
        if k > 0 {
            let (i, a) = fs[k - 1];
            let (d, di) = (b - a, (i as i64 - j as i64).abs());
            if d < di + 2 || (d - di) % 2 != 0 {
                return Err(Error::NotPrimeSnake(format!(
                    "{x} is not a snake: Y[{i},{a}] and Y[{j},{b}] are too close"
                )));
            }
            if in_s_mrn(d, j, i, n) {
                pieces.last_mut().expect("started").push((j, b));
                continue;
            }
        }
        pieces.push(vec![(j, b)]);
    }
    pieces.into_iter().map(|f| PrimeSnake::new(n, f)).collect()
}

/// The character of `V(x)` for a snake `x`, as the product over its prime
/// pieces.
pub fn simple_char(x: &LWeight) -> Result<Character> {
    let chars: Vec<Character> = snake_components(x)?.iter().map(snake_char).collect::<Result<_>>()?;
    Character::product(x.rank(), &chars)
}

/// A signed sum of products of classes `[V(omega)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingExpression {
    pub n: u32,
    pub terms: Vec<(i64, Vec<LWeight>)>,
}

impl RingExpression {
    pub fn product(n: u32, classes: Vec<LWeight>) -> Self {
        RingExpression { n, terms: vec![(1, classes)] }
    }

    pub fn plus(mut self, other: RingExpression) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// Replace every class by the character of its simple module. Each class
    /// must be a snake (see [`snake_components`]) or trivial.
    pub fn expand(&self) -> Result<Character> {
        let mut acc = Character::zero(self.n);
        for (c, classes) in &self.terms {
            let chars: Vec<Character> = classes.iter().map(simple_char).collect::<Result<_>>()?;
            acc = acc.add(&Character::product(self.n, &chars)?.scale(*c))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RingExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, classes)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if *c < 0 { "-" } else { "+" })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            if c.abs() != 1 {
                write!(f, "{}·", c.abs())?;
            }
            let parts: Vec<String> = classes.iter().map(|w| format!("[V({w})]")).collect();
            write!(f, "{}", if parts.is_empty() { "1".to_string() } else { parts.join("") })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TSystem {
    pub lhs: RingExpression,
    pub rhs: RingExpression,
    pub pi_plus: LWeight,
    pub pi_minus: LWeight,
}

/// The extended T-system relation for a pair of prime snakes
/// `omega = (i_1,a_1)...(i_k,a_k)` and `omega' = (i_2,a_2)...(i_k,a_k)(j,b)`
/// with `b - a_k` in `S_{j, i_k, n}`:
///
/// `[V(omega)][V(omega')] = [V(omega Y[j,b])][V(omega' Y[j,b]^-1)] + [V(omega^+)][V(omega^-)]`.
pub fn ext_tsystem(omega: &PrimeSnake, omega2: &PrimeSnake) -> Result<TSystem> {
    let n = omega.n;
    if omega2.n != n {
        return Err(Error::RankMismatch(n, omega2.n));
    }
    let (w, w2) = (omega.factors(), omega2.factors());
    let k = w.len();
    if k == 0 || w2.len() != k {
        return Err(Error::Hypothesis("the two snakes must have the same positive length".into()));
    }
    if w[1..] != w2[..k - 1] {
        return Err(Error::Hypothesis(format!("{omega2} does not continue {omega} after dropping its first factor")));
    }
    let (j, b) = w2[k - 1];
    let (ik, ak) = w[k - 1];
    if !in_s_mrn(b - ak, j, ik, n) {
        return Err(Error::Hypothesis(format!("{} is not in S_{{{j},{ik},{n}}}", b - ak)));
    }
    let mut chain = w.to_vec();
    chain.push((j, b));
    let (pi_plus, pi_minus) = tsystem_pm(n, &chain);
    let extra = LWeight::y(n, j as i64, b)?;
    let lhs = RingExpression::product(n, vec![omega.to_lweight(), omega2.to_lweight()]);
    let rhs = RingExpression::product(n, vec![&omega.to_lweight() * &extra, &omega2.to_lweight() * &extra.inverse()])
        .plus(RingExpression::product(n, vec![pi_plus.clone(), pi_minus.clone()]));
    Ok(TSystem { lhs, rhs, pi_plus, pi_minus })
}

pub fn verify_identity(lhs: &RingExpression, rhs: &RingExpression) -> Result<bool> {
    Ok(lhs.expand()? == rhs.expand()?)
}

/// Coefficient of `omega^+ omega^-` in the character of the first product on
/// the right hand side; the relation predicts zero.
pub fn tsystem_pm_coefficient(t: &TSystem) -> Result<i64> {
    let classes = &t.rhs.terms[0].1;
    let chars: Vec<Character> = classes.iter().map(simple_char).collect::<Result<_>>()?;
    coefficient_in_product(&chars, &(&t.pi_plus * &t.pi_minus))
}

/// Whether `V(Y[i_1,a_1]) ⊗ ... ⊗ V(Y[i_k,a_k])`, in the listed order, is a
/// highest weight module: no consecutive gap `a_j - a_{j-1}` lies in
/// `S_{i_j, i_{j-1}, n}`.
pub fn hw_order_admissible(n: u32, factors: &[(u32, i64)]) -> bool {
    factors.windows(2).all(|w| !in_s_mrn(w[1].1 - w[0].1, w[1].0, w[0].0, n))
}

/// A tensor product of fundamentals is simple when the highest weight
/// condition holds for the list and for its reverse.
pub fn fundamental_tensor_irreducible(n: u32, factors: &[(u32, i64)]) -> bool {
    let mut rev = factors.to_vec();
    rev.reverse();
    hw_order_admissible(n, factors) && hw_order_admissible(n, &rev)
}

/// A tensor product of KR modules attached to segments is simple exactly
/// when the segments are pairwise in general position.
pub fn tensor_irreducible_kr(ctx: &SegmentContext, segs: &[Segment]) -> bool {
    segs.iter()
        .enumerate()
        .all(|(k, a)| segs[k + 1..].iter().all(|b| crate::segments::position(ctx, a, b).is_general()))
}

/// Every prime snake of rank `n` with at most `max_len` factors, first
/// shift `0` and all shifts in `[0, window]`. Ordered by length, then
/// lexicographically in the factor list.
pub fn enumerate_prime_snakes(n: u32, max_len: usize, window: i64) -> Vec<PrimeSnake> {
    fn grow(n: u32, max_len: usize, window: i64, cur: &mut Vec<(u32, i64)>, out: &mut Vec<Vec<(u32, i64)>>) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        let (i0, a0) = *cur.last().expect("nonempty");
        for j in 1..=n {
            for d in crate::segments::s_mrn(j, i0, n) {
                if a0 + d <= window {
                    cur.push((j, a0 + d));
                    grow(n, max_len, window, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut all = Vec::new();
    if max_len == 0 {
        return Vec::new();
    }
    for i in 1..=n {
        grow(n, max_len, window, &mut vec![(i, 0)], &mut all);
    }
    all.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    all.into_iter().map(|f| PrimeSnake { n, factors: f }).collect()
}

/// Dominant `pi` that can head a map `W(pi) -> V(pi1) ⊗ V(pi2)`, filtered by
/// the two necessary conditions `pi pi1^-1 in wt V(pi2)` and
/// `(pi^*)^-1 pi2^* in wt V(pi1)`. Sorted.
pub fn hom_candidates(pi1: &PrimeSnake, pi2: &PrimeSnake) -> Result<Vec<LWeight>> {
    if pi1.n != pi2.n {
        return Err(Error::RankMismatch(pi1.n, pi2.n));
    }
    let (c1, c2) = (snake_char(pi1)?, snake_char(pi2)?);
    let (w1, w2) = (pi1.to_lweight(), pi2.to_lweight());
    let w2_star = w2.dual_star();
    let mut out: Vec<LWeight> = c2
        .monomials()
        .map(|m| &w1 * m)
        .filter(|pi| pi.is_dominant() || pi.is_one())
        .filter(|pi| c1.contains(&(&pi.dual_star().inverse() * &w2_star)))
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessCertificate {
    pub witness: ReducibilityWitness,
    /// Coefficient in `chi(V(omega_{i,a})) chi(V(omega_{i,b}))`; must be positive.
    pub in_pair: i64,
    /// Coefficient in the character of the coarser triple product; must be 0.
    pub in_triple: i64,
}

impl WitnessCertificate {
    pub fn holds(&self) -> bool {
        self.in_pair > 0 && self.in_triple == 0
    }
}

/// Build and check the reducibility witness for a pair of segments.
///
/// The triple product is `W(before) ⊗ V(overlap) ⊗ W(after)`, where the
/// overlap module is represented by the first product of its T-system, the
/// snake on the merged chain times the snake on the shared middle.
pub fn certify_witness(ctx: &SegmentContext, a: &Segment, b: &Segment) -> Result<Option<WitnessCertificate>> {
    let Some(w) = reducibility_witness(ctx, a, b) else {
        return Ok(None);
    };
    let n = ctx.n;
    let pair = [snake_char(&PrimeSnake::segment(ctx, a))?, snake_char(&PrimeSnake::segment(ctx, b))?];
    let in_pair = coefficient_in_product(&pair, &w.monomial)?;
    let mut triple = Vec::new();
    for &x in w.a_before.iter().chain(&w.b_before) {
        triple.push(fundamental_char(n, ctx.i, x)?);
    }
    let snake_on = |xs: &[i64]| PrimeSnake::new(n, xs.iter().map(|&x| (ctx.i, x)).collect());
    triple.push(snake_char(&snake_on(&w.pattern.merged)?)?);
    triple.push(snake_char(&snake_on(w.pattern.middle())?)?);
    for &x in w.a_after.iter().chain(&w.b_after) {
        triple.push(fundamental_char(n, ctx.i, x)?);
    }
    let in_triple = coefficient_in_product(&triple, &w.monomial)?;
    Ok(Some(WitnessCertificate { witness: w, in_pair, in_triple }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lweight::decompose_in_q_plus;

    fn lw(n: u32, s: &str) -> LWeight {
        LWeight::parse(n, s).unwrap()
    }

    fn snake(n: u32, s: &str) -> PrimeSnake {
        PrimeSnake::from_lweight(&lw(n, s)).unwrap()
    }

    #[test]
    fn general_snakes_split_into_prime_pieces() {
        let w = lw(3, "Y[1,1]·Y[1,7]");
        let parts = snake_components(&w).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(simple_char(&w).unwrap(), weyl_char(&w).unwrap());
        let w = lw(4, "Y[3,1]·Y[4,4]·Y[4,8]");
        assert_eq!(snake_components(&w).unwrap().len(), 2);
        assert!(snake_components(&lw(3, "Y[1,0]·Y[2,0]")).is_err());
        assert!(snake_components(&lw(3, "Y[1,0]·Y[1,3]")).is_err());
    }

    // The path model for a whole snake agrees with the product over pieces.
    #[test]
    fn pieces_agree_with_whole_snake_paths() {
        for n in 1..=4u32 {
            let mut chains: Vec<Vec<(u32, i64)>> = (1..=n).map(|i| vec![(i, 0)]).collect();
            let mut k = 0;
            while k < chains.len() {
                let c = chains[k].clone();
                k += 1;
                if c.len() == 3 {
                    continue;
                }
                let (i, a) = *c.last().unwrap();
                for j in 1..=n {
                    let di = (i as i64 - j as i64).abs();
                    let mut d = di + 2;
                    while a + d <= 12 {
                        let mut e = c.clone();
                        e.push((j, a + d));
                        chains.push(e);
                        d += 2;
                    }
                }
            }
            for c in chains.iter().filter(|c| c.len() > 1) {
                let w = LWeight::from_factors(n, c.iter().map(|&(i, a)| (i as i64, a, 1))).unwrap();
                let whole =
                    Character::from_terms(n, noncrossing_monomials(c, n).unwrap().into_iter().map(|m| (m, 1))).unwrap();
                assert_eq!(simple_char(&w).unwrap(), whole, "{w}");
            }
        }
    }

    #[test]
    fn snake_validation() {
        assert!(PrimeSnake::from_lweight(&lw(1, "Y[1,0]·Y[1,2]")).is_ok());
        assert!(PrimeSnake::from_lweight(&lw(1, "Y[1,0]·Y[1,4]")).is_err());
        assert!(PrimeSnake::from_lweight(&lw(1, "Y[1,0]^2")).is_err());
        assert!(PrimeSnake::from_lweight(&lw(1, "Y[1,2]^-1")).is_err());
    }

    #[test]
    fn small_characters() {
        let c = snake_char(&snake(1, "Y[1,0]")).unwrap();
        assert_eq!(c.to_string(), "Y[1,0] + Y[1,2]^-1");
        let c = snake_char(&snake(1, "Y[1,0]·Y[1,2]")).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.contains(&lw(1, "Y[1,2]^-1·Y[1,4]^-1")));
        let c = snake_char(&snake(2, "Y[1,0]")).unwrap();
        let want = ["Y[1,0]", "Y[1,2]^-1·Y[2,1]", "Y[2,3]^-1"];
        assert_eq!(c.len(), 3);
        for m in want {
            assert_eq!(c.coefficient(&lw(2, m)), 1);
        }
        assert_eq!(snake_char(&PrimeSnake::new(3, vec![]).unwrap()).unwrap(), Character::one(3));
    }

    #[test]
    fn snake_characters_have_one_dominant_term() {
        for s in ["Y[1,0]·Y[2,3]", "Y[2,0]·Y[2,4]", "Y[1,0]·Y[3,4]·Y[2,7]"] {
            let sn = snake(3, s);
            let c = snake_char(&sn).unwrap();
            assert!(c.is_multiplicity_free());
            assert_eq!(c.dominant_monomials(), vec![sn.to_lweight()]);
            for m in c.monomials() {
                assert!(
                    decompose_in_q_plus(&sn.to_lweight().checked_div(m).unwrap()).is_some() || m == &sn.to_lweight()
                );
            }
        }
    }

    #[test]
    fn sl2_tsystem() {
        let t = ext_tsystem(&snake(1, "Y[1,0]"), &snake(1, "Y[1,2]")).unwrap();
        assert!(t.pi_plus.is_one() && t.pi_minus.is_one());
        assert!(verify_identity(&t.lhs, &t.rhs).unwrap());
        assert_eq!(t.rhs.to_string(), "[V(Y[1,0]·Y[1,2])][V(1)] + [V(1)][V(1)]");
        assert_eq!(tsystem_pm_coefficient(&t).unwrap(), 0);
    }

    #[test]
    fn rank_three_tsystem_corrections() {
        let t = ext_tsystem(&snake(3, "Y[2,0]"), &snake(3, "Y[2,2]")).unwrap();
        assert_eq!(t.pi_plus.to_string(), "Y[1,1]");
        assert_eq!(t.pi_minus.to_string(), "Y[3,1]");
        assert!(verify_identity(&t.lhs, &t.rhs).unwrap());
    }

    #[test]
    fn tsystem_rejects_mismatched_pairs() {
        assert!(ext_tsystem(&snake(1, "Y[1,0]"), &snake(1, "Y[1,6]")).is_err());
        assert!(ext_tsystem(&snake(2, "Y[1,0]·Y[1,2]"), &snake(2, "Y[1,4]·Y[1,6]")).is_err());
    }

    #[test]
    fn admissible_orders() {
        assert!(fundamental_tensor_irreducible(1, &[(1, 0), (1, 4)]));
        assert!(!hw_order_admissible(1, &[(1, 0), (1, 2)]));
        assert!(hw_order_admissible(1, &[(1, 2), (1, 0)]));
    }

    #[test]
    fn hom_candidates_sl2() {
        let got = hom_candidates(&snake(1, "Y[1,2]"), &snake(1, "Y[1,0]")).unwrap();
        assert_eq!(got, vec![LWeight::one(1), lw(1, "Y[1,0]·Y[1,2]")]);
        let got = hom_candidates(&snake(1, "Y[1,0]"), &snake(1, "Y[1,0]")).unwrap();
        assert_eq!(got, vec![lw(1, "Y[1,0]^2")]);
    }

    #[test]
    fn witness_certificates_small() {
        let ctx = SegmentContext::new(2, 3).unwrap();
        let a = Segment::new(&ctx, vec![0, 2, 6, 10]).unwrap();
        let b = Segment::new(&ctx, vec![4]).unwrap();
        let cert = certify_witness(&ctx, &a, &b).unwrap().unwrap();
        assert!(cert.holds(), "{cert:?}");
        let c = Segment::new(&ctx, vec![2, 6]).unwrap();
        assert!(certify_witness(&ctx, &a, &c).unwrap().is_none());
    }
}
