//! Segments of shifts at a fixed node, their relative position, and the
//! unique factorization of a Kirillov–Reshetikhin product into segments in
//! general position.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lweight::LWeight;
use crate::qcharacter::tsystem_pm;

/// The node `i` and rank `n` that segments are measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SegmentContext {
    pub i: u32,
    pub n: u32,
}

impl SegmentContext {
    pub fn new(i: u32, n: u32) -> Result<Self> {
        if n == 0 || i < 1 || i > n {
            return Err(Error::NodeOutOfRange { node: i as i64, rank: n });
        }
        Ok(SegmentContext { i, n })
    }

    /// Largest element of the reducibility set, `2 min(i, n+1-i)`.
    pub fn reach(&self) -> i64 {
        2 * self.i.min(self.n + 1 - self.i) as i64
    }

    /// Membership in `S_{i,n}`: the even numbers from 2 to `reach`.
    pub fn in_s(&self, d: i64) -> bool {
        d >= 2 && d <= self.reach() && d % 2 == 0
    }

    pub fn dual(&self) -> SegmentContext {
        SegmentContext { i: self.n + 1 - self.i, n: self.n }
    }
}

/// `S_{i,n}` listed in increasing order.
pub fn s_set(i: u32, n: u32) -> Vec<i64> {
    let m = i.min(n + 1 - i) as i64;
    (1..=m).map(|j| 2 * j).collect()
}

/// `S_{m,r,n} = {2p + 2 - m - r : max(m,r) <= p <= min(m+r-1, n)}`.
pub fn s_mrn(m: u32, r: u32, n: u32) -> Vec<i64> {
    let (m, r, n) = (m as i64, r as i64, n as i64);
    (m.max(r)..=(m + r - 1).min(n)).map(|p| 2 * p + 2 - m - r).collect()
}

pub fn in_s_mrn(d: i64, m: u32, r: u32, n: u32) -> bool {
    let (m, r, n) = (m as i64, r as i64, n as i64);
    let twice_p = d + m + r - 2;
    twice_p % 2 == 0 && (m.max(r)..=(m + r - 1).min(n)).contains(&(twice_p / 2))
}

pub fn is_segment(ctx: &SegmentContext, xs: &[i64]) -> bool {
    !xs.is_empty() && xs.windows(2).all(|w| ctx.in_s(w[1] - w[0]))
}

/// A nonempty increasing run of shifts with consecutive gaps in `S_{i,n}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Segment(Vec<i64>);

impl Segment {
    pub fn new(ctx: &SegmentContext, xs: Vec<i64>) -> Result<Segment> {
        if !is_segment(ctx, &xs) {
            return Err(Error::InvalidSegment(format!("{xs:?} is not an ({},{})-segment", ctx.i, ctx.n)));
        }
        Ok(Segment(xs))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn last(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    /// `omega_{i,a}`, the product of `Y[i, a_k]`.
    pub fn to_lweight(&self, ctx: &SegmentContext) -> LWeight {
        node_product(ctx.n, ctx.i, &self.0, 1)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `prod_k Y[node, shifts_k]^e`, or 1 if the node is off the diagram.
pub(crate) fn node_product(rank: u32, node: u32, shifts: &[i64], e: i32) -> LWeight {
    if node < 1 || node > rank {
        return LWeight::one(rank);
    }
    LWeight::from_factors(rank, shifts.iter().map(|&a| (node as i64, a, e))).expect("node in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneralReason {
    /// The segments are more than `reach` apart.
    FarApart,
    /// Their shifts have opposite parity.
    ParityMismatch,
    /// The shorter one sits inside the longer one.
    Contained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "position", rename_all = "snake_case")]
pub enum Position {
    General {
        reason: GeneralReason,
    },
    /// `evidence` is a segment inside the union that is longer than both.
    Special {
        evidence: Segment,
    },
}

impl Position {
    pub fn is_general(&self) -> bool {
        matches!(self, Position::General { .. })
    }
}

/// Decide whether two segments are in general position.
///
/// The verdict comes from the closed form test on endpoints, parity and
/// containment. When that test says special, a longer segment inside the
/// union is produced by adding one entry of the shorter segment to the
/// longer one, either at an end or strictly between two of its entries.
pub fn position(ctx: &SegmentContext, a: &Segment, b: &Segment) -> Position {
    let (a, b) = if a.len() >= b.len() { (a.entries(), b.entries()) } else { (b.entries(), a.entries()) };
    let reach = ctx.reach();
    let (a1, ar, b1, bm) = (a[0], a[a.len() - 1], b[0], b[b.len() - 1]);
    if (b1 - a1).rem_euclid(2) == 1 {
        return Position::General { reason: GeneralReason::ParityMismatch };
    }
    if b1 - ar > reach || a1 - bm > reach {
        return Position::General { reason: GeneralReason::FarApart };
    }
    if b.iter().all(|x| a.binary_search(x).is_ok()) {
        return Position::General { reason: GeneralReason::Contained };
    }
    for &x in b {
        let extended: Option<Vec<i64>> = if ctx.in_s(x - ar) {
            Some(a.iter().copied().chain([x]).collect())
        } else if ctx.in_s(a1 - x) {
            Some([x].into_iter().chain(a.iter().copied()).collect())
        } else {
            a.windows(2).position(|w| w[0] < x && x < w[1]).map(|k| {
                let mut v = a.to_vec();
                v.insert(k + 1, x);
                v
            })
        };
        if let Some(v) = extended {
            debug_assert!(is_segment(ctx, &v));
            return Position::Special { evidence: Segment(v) };
        }
    }
    unreachable!("endpoint test and witness search disagree on {a:?}, {b:?}")
}

/// The longest segment contained in a finite set of shifts.
///
/// Filling in intermediate entries only shortens gaps, so the answer is the
/// longest run of consecutive same parity entries with gaps at most `reach`.
pub fn longest_segment_within(ctx: &SegmentContext, xs: &[i64]) -> Option<Segment> {
    let mut best: Option<Vec<i64>> = None;
    for parity in 0..2 {
        let mut class: Vec<i64> = xs.iter().copied().filter(|x| x.rem_euclid(2) == parity).collect();
        class.sort_unstable();
        class.dedup();
        let mut run: Vec<i64> = Vec::new();
        for x in class {
            if run.last().is_some_and(|&l| x - l > ctx.reach()) {
                run.clear();
            }
            run.push(x);
            if best.as_ref().is_none_or(|b| run.len() > b.len()) {
                best = Some(run.clone());
            }
        }
    }
    best.map(Segment)
}

/// Factor a multiset of shifts into segments pairwise in general position.
///
/// Repeatedly take the smallest remaining shift and peel off the longest
/// segment that starts there. Output is sorted by first entry, then by
/// length (longest first), then lexicographically.
pub fn factorize(ctx: &SegmentContext, shifts: &[i64]) -> Vec<Segment> {
    let mut left: BTreeMap<i64, usize> = BTreeMap::new();
    for &x in shifts {
        *left.entry(x).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    while let Some((&start, _)) = left.iter().next() {
        let mut seg = vec![start];
        loop {
            let cur = *seg.last().unwrap();
            let next = left.range(cur + 1..).map(|(&y, _)| y).find(|y| (y - cur) % 2 == 0);
            match next {
                Some(y) if y - cur <= ctx.reach() => seg.push(y),
                _ => break,
            }
        }
        for x in &seg {
            let c = left.get_mut(x).unwrap();
            *c -= 1;
            if *c == 0 {
                left.remove(x);
            }
        }
        out.push(Segment(seg));
    }
    sort_canonical(&mut out);
    out
}

pub fn sort_canonical(segs: &mut [Segment]) {
    segs.sort_by(|x, y| x.first().cmp(&y.first()).then(y.len().cmp(&x.len())).then(x.0.cmp(&y.0)));
}

/// The segment `a + n + 1`, which lives at node `n+1-i`.
pub fn star(ctx: &SegmentContext, a: &Segment) -> (SegmentContext, Segment) {
    let shift = ctx.n as i64 + 1;
    (ctx.dual(), Segment(a.0.iter().map(|x| x + shift).collect()))
}

/// Two overlapping stretches `a[j..=j+p]` and `b[m..=m+p]` which together
/// form a T-system configuration. Indices are zero based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapPattern {
    pub j: usize,
    pub m: usize,
    pub p: usize,
    /// Whether the stretch of `a` starts first.
    pub a_first: bool,
    /// `(c_0, ..., c_{p+1})`: the earlier stretch is `c_0..c_p`, the later
    /// one is `c_1..c_{p+1}`.
    pub merged: Vec<i64>,
}

impl OverlapPattern {
    pub fn earlier(&self) -> &[i64] {
        &self.merged[..=self.p]
    }

    pub fn later(&self) -> &[i64] {
        &self.merged[1..]
    }

    pub fn middle(&self) -> &[i64] {
        &self.merged[1..=self.p]
    }
}

/// Find the lexicographically smallest `(j, m, p)` overlap pattern.
///
/// Besides the ordering conditions on the neighbours (with `-inf`/`+inf`
/// past the ends) and the shift-by-one matching, the two stretches must
/// merge into a chain whose end gaps lie in `S_{i,n}`. For `p >= 1` that is
/// automatic; for `p = 0` it rules out two far apart singletons.
pub fn tsys_overlap(ctx: &SegmentContext, a: &Segment, b: &Segment) -> Option<OverlapPattern> {
    let (a, b) = (a.entries(), b.entries());
    let at = |v: &[i64], k: isize| -> i64 {
        if k < 0 {
            i64::MIN
        } else {
            v.get(k as usize).copied().unwrap_or(i64::MAX)
        }
    };
    for j in 0..a.len() {
        for m in 0..b.len() {
            let mut p = 0;
            while j + p < a.len() && m + p < b.len() {
                let (ji, mi, pi) = (j as isize, m as isize, p as isize);
                let lower = at(a, ji - 1).max(at(b, mi - 1)) < a[j].min(b[m]);
                let upper = at(a, ji + pi + 1).min(at(b, mi + pi + 1)) > a[j + p].max(b[m + p]);
                let a_first = a[j] < b[m];
                let shifted = if a_first {
                    (1..=p).all(|k| a[j + k] == b[m + k - 1])
                } else {
                    (1..=p).all(|k| a[j + k - 1] == b[m + k])
                };
                if lower && upper && a[j] != b[m] && shifted {
                    let merged: Vec<i64> = if a_first {
                        a[j..=j + p].iter().copied().chain([b[m + p]]).collect()
                    } else {
                        b[m..=m + p].iter().copied().chain([a[j + p]]).collect()
                    };
                    if ctx.in_s(merged[1] - merged[0]) && ctx.in_s(merged[p + 1] - merged[p]) {
                        return Some(OverlapPattern { j, m, p, a_first, merged });
                    }
                }
                p += 1;
            }
        }
    }
    None
}

/// A monomial that certifies reducibility of `V(omega_{i,a}) ⊗ V(omega_{i,b})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityWitness {
    pub pattern: OverlapPattern,
    pub pi_plus: LWeight,
    pub pi_minus: LWeight,
    pub monomial: LWeight,
    pub a_before: Vec<i64>,
    pub a_after: Vec<i64>,
    pub b_before: Vec<i64>,
    pub b_after: Vec<i64>,
}

/// Build the witness monomial for a pair in special position, or `None` if
/// the pair is in general position.
///
/// The monomial combines the highest parts of the stretches before the
/// overlap, the product of the two T-system correction weights on the
/// overlap, and the lowest parts of the stretches after it.
pub fn reducibility_witness(ctx: &SegmentContext, a: &Segment, b: &Segment) -> Option<ReducibilityWitness> {
    if position(ctx, a, b).is_general() {
        return None;
    }
    let pat = tsys_overlap(ctx, a, b)?;
    let n = ctx.n;
    let seq: Vec<(u32, i64)> = pat.merged.iter().map(|&c| (ctx.i, c)).collect();
    let (pi_plus, pi_minus) = tsystem_pm(n, &seq);
    let (ae, be) = (a.entries(), b.entries());
    let a_before = ae[..pat.j].to_vec();
    let a_after = ae[pat.j + pat.p + 1..].to_vec();
    let b_before = be[..pat.m].to_vec();
    let b_after = be[pat.m + pat.p + 1..].to_vec();
    let dual_node = n + 1 - ctx.i;
    let up = |v: &[i64]| v.iter().map(|x| x + n as i64 + 1).collect::<Vec<_>>();
    let monomial = &(&(&(&node_product(n, ctx.i, &a_before, 1) * &node_product(n, ctx.i, &b_before, 1))
        * &(&pi_plus * &pi_minus))
        * &node_product(n, dual_node, &up(&a_after), -1))
        * &node_product(n, dual_node, &up(&b_after), -1);
    Some(ReducibilityWitness { pattern: pat, pi_plus, pi_minus, monomial, a_before, a_after, b_before, b_after })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(ctx: &SegmentContext, xs: &[i64]) -> Segment {
        Segment::new(ctx, xs.to_vec()).unwrap()
    }

    // The defining test: special iff the union holds a segment longer than
    // both. The longest segment is found by trying every subset.
    fn special_by_subsets(ctx: &SegmentContext, a: &[i64], b: &[i64]) -> bool {
        let mut u: Vec<i64> = a.iter().chain(b).copied().collect();
        u.sort_unstable();
        u.dedup();
        let need = a.len().max(b.len());
        (0u32..1 << u.len()).any(|mask| {
            let sub: Vec<i64> = (0..u.len()).filter(|k| mask >> k & 1 == 1).map(|k| u[k]).collect();
            sub.len() > need && is_segment(ctx, &sub)
        })
    }

    #[test]
    fn reducibility_sets() {
        assert_eq!(s_set(2, 3), vec![2, 4]);
        assert_eq!(s_set(1, 3), vec![2]);
        assert_eq!(s_set(3, 5), vec![2, 4, 6]);
        assert_eq!(s_mrn(1, 1, 1), vec![2]);
        assert_eq!(s_mrn(2, 2, 3), vec![2, 4]);
        assert_eq!(s_mrn(1, 3, 3), vec![4]);
        for n in 1..7 {
            for m in 1..=n {
                for r in 1..=n {
                    for d in -3..20 {
                        assert_eq!(in_s_mrn(d, m, r, n), s_mrn(m, r, n).contains(&d));
                    }
                }
                assert_eq!(s_mrn(m, m, n), s_set(m, n));
            }
        }
    }

    #[test]
    fn golden_factorization() {
        let ctx = SegmentContext::new(2, 3).unwrap();
        let f = factorize(&ctx, &[0, 6, 4, 2, 10, 16, 10]);
        let got: Vec<Vec<i64>> = f.iter().map(|s| s.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 2, 4, 6, 10], vec![10], vec![16]]);
    }

    #[test]
    fn node_one_splits_wide_gaps() {
        let c23 = SegmentContext::new(2, 3).unwrap();
        let c13 = SegmentContext::new(1, 3).unwrap();
        assert!(is_segment(&c23, &[0, 4, 6, 10]));
        let got: Vec<Vec<i64>> = factorize(&c13, &[0, 4, 6, 10]).iter().map(|s| s.0.clone()).collect();
        assert_eq!(got, vec![vec![0], vec![4, 6], vec![10]]);
    }

    #[test]
    fn position_examples() {
        let ctx = SegmentContext::new(2, 3).unwrap();
        let a = seg(&ctx, &[0, 2, 6, 10]);
        assert_eq!(position(&ctx, &a, &seg(&ctx, &[4])), Position::Special { evidence: seg(&ctx, &[0, 2, 4, 6, 10]) });
        assert!(position(&ctx, &a, &seg(&ctx, &[3])).is_general());
        assert!(position(&ctx, &a, &seg(&ctx, &[2, 6])).is_general());
        assert!(position(&ctx, &a, &seg(&ctx, &[20])).is_general());
        assert!(!position(&ctx, &a, &seg(&ctx, &[14])).is_general());
    }

    #[test]
    fn overlap_examples() {
        let ctx = SegmentContext::new(2, 3).unwrap();
        let p = tsys_overlap(&ctx, &seg(&ctx, &[0, 2, 6, 10]), &seg(&ctx, &[4])).unwrap();
        assert_eq!((p.j, p.m, p.p, p.a_first), (1, 0, 0, true));
        assert_eq!(p.merged, vec![2, 4]);
        let ctx = SegmentContext::new(1, 1).unwrap();
        let p = tsys_overlap(&ctx, &seg(&ctx, &[0, 2]), &seg(&ctx, &[2, 4])).unwrap();
        assert_eq!((p.j, p.m, p.p), (0, 0, 1));
        assert_eq!(p.earlier(), &[0, 2]);
        assert_eq!(p.later(), &[2, 4]);
        // Far apart singletons are not a T-system pair.
        assert!(tsys_overlap(&ctx, &seg(&ctx, &[0]), &seg(&ctx, &[10])).is_none());
    }

    #[test]
    fn witness_shape_sl2() {
        let ctx = SegmentContext::new(1, 1).unwrap();
        let w = reducibility_witness(&ctx, &seg(&ctx, &[0]), &seg(&ctx, &[2])).unwrap();
        assert!(w.pi_plus.is_one() && w.pi_minus.is_one());
        assert!(w.monomial.is_one());
    }

    fn arb_case() -> impl Strategy<Value = (SegmentContext, Vec<i64>, Vec<i64>)> {
        (1u32..=5).prop_flat_map(|n| (1..=n).prop_map(move |i| SegmentContext { i, n })).prop_flat_map(|ctx| {
            let reach = ctx.reach();
            let s = (0i64..12, prop::collection::vec(1..=reach / 2, 0..4)).prop_map(|(x0, gaps)| {
                let mut v = vec![x0];
                for g in gaps {
                    v.push(v.last().unwrap() + 2 * g);
                }
                v
            });
            (Just(ctx), s.clone(), s)
        })
    }

    proptest! {
        #[test]
        fn position_matches_definition((ctx, a, b) in arb_case()) {
            let sa = seg(&ctx, &a);
            let sb = seg(&ctx, &b);
            let pos = position(&ctx, &sa, &sb);
            prop_assert_eq!(pos.is_general(), !special_by_subsets(&ctx, &a, &b));
            prop_assert_eq!(pos.is_general(), position(&ctx, &sb, &sa).is_general());
            if let Position::Special { evidence } = pos {
                prop_assert!(evidence.len() > a.len().max(b.len()));
                prop_assert!(evidence.entries().iter().all(|x| a.contains(x) || b.contains(x)));
            }
        }

        #[test]
        fn general_and_meeting_means_nested((ctx, a, b) in arb_case()) {
            let (sa, sb) = (seg(&ctx, &a), seg(&ctx, &b));
            if position(&ctx, &sa, &sb).is_general() && a.iter().any(|x| b.contains(x)) {
                let (small, big) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
                prop_assert!(small.iter().all(|x| big.contains(x)));
            }
        }

        #[test]
        fn overlap_exists_iff_special((ctx, a, b) in arb_case()) {
            let (sa, sb) = (seg(&ctx, &a), seg(&ctx, &b));
            let special = !position(&ctx, &sa, &sb).is_general();
            prop_assert_eq!(tsys_overlap(&ctx, &sa, &sb).is_some(), special);
        }

        #[test]
        fn factorization_is_sound(
            ctx in (1u32..=5).prop_flat_map(|n| (1..=n).prop_map(move |i| SegmentContext { i, n })),
            xs in prop::collection::vec(-6i64..12, 0..9)
        ) {
            let f = factorize(&ctx, &xs);
            let mut flat: Vec<i64> = f.iter().flat_map(|s| s.0.clone()).collect();
            let mut sorted = xs.clone();
            flat.sort_unstable();
            sorted.sort_unstable();
            prop_assert_eq!(flat, sorted);
            for (k, s) in f.iter().enumerate() {
                prop_assert!(is_segment(&ctx, s.entries()));
                for t in &f[k + 1..] {
                    prop_assert!(position(&ctx, s, t).is_general());
                }
            }
        }

        #[test]
        fn longest_within_matches_subsets((ctx, a, b) in arb_case()) {
            let mut u: Vec<i64> = a.iter().chain(&b).copied().collect();
            u.sort_unstable();
            u.dedup();
            let best = longest_segment_within(&ctx, &u).unwrap();
            prop_assert!(is_segment(&ctx, best.entries()));
            let longer = (0u32..1 << u.len()).any(|mask| {
                let sub: Vec<i64> = (0..u.len()).filter(|k| mask >> k & 1 == 1).map(|k| u[k]).collect();
                sub.len() > best.len() && is_segment(&ctx, &sub)
            });
            prop_assert!(!longer);
        }
    }
}
