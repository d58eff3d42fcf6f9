//! The acceptance checks, each built from an independent oracle where one
//! exists. Reports contain no timings so repeated runs compare byte for byte.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exec;
use crate::imaginary::{
    certificate_dim_one, certificate_dim_one_squared, classify_dominant_targets, imaginary_weight,
    path_factorization_holds, repeated_dual_factor_absent, ImaginaryInput,
};
use crate::inflation::InflationTriple;
use crate::lweight::{LWeight, Weight};
use crate::paths::{enumerate_paths, g_path, lowest_path, p_path, Path};
use crate::qcharacter::{
    enumerate_prime_snakes, ext_tsystem, snake_char, tsystem_pm_coefficient, verify_identity, PrimeSnake,
};
use crate::segments::{factorize, is_segment, position, sort_canonical, Position, Segment, SegmentContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Smoke,
    Desk,
}

impl std::str::FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "smoke" => Ok(Profile::Smoke),
            "desk" => Ok(Profile::Desk),
            _ => Err(format!("unknown profile {s:?} (expected smoke or desk)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub profile: Profile,
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionResult::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let _ = writeln!(s, "criterion {:>2} {} {}", c.id, if c.passed() { "PASS" } else { "FAIL" }, c.title);
            for k in &c.checks {
                let _ = writeln!(s, "    {} {}: {}", if k.passed { "ok  " } else { "FAIL" }, k.name, k.detail);
            }
        }
        s
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    fn result(&mut self, name: &str, r: Result<(bool, String)>) {
        match r {
            Ok((p, d)) => self.check(name, p, d),
            Err(e) => self.check(name, false, format!("error: {e}")),
        }
    }

    fn done(self, id: u32, title: &'static str) -> CriterionResult {
        CriterionResult { id, title, checks: self.checks }
    }
}

pub const TITLES: [&str; 11] = [
    "golden factorization",
    "position test against brute force",
    "factorization soundness and uniqueness",
    "path model",
    "prime snake characters",
    "extended T-system",
    "reducibility witnesses",
    "inflation",
    "first induction identity",
    "imaginary certificates",
    "determinism",
];

pub fn run_criterion(id: u32, profile: Profile) -> CriterionResult {
    let title = TITLES[(id - 1) as usize];
    let b = match id {
        1 => golden_factorization(),
        2 => position_oracle(profile),
        3 => factorization_uniqueness(profile),
        4 => path_model(profile),
        5 => prime_snake_characters(profile),
        6 => tsystem(profile),
        7 => witnesses(profile),
        8 => inflation(profile),
        9 => indstep(profile),
        10 => imaginary(profile),
        11 => determinism(profile),
        _ => panic!("no criterion {id}"),
    };
    b.done(id, title)
}

/// Criteria 1 to 10. Determinism is checked by comparing two of these.
pub fn run_all(profile: Profile) -> Report {
    Report { profile, criteria: (1..=10).map(|k| run_criterion(k, profile)).collect() }
}

/// Criteria 1 to 10 followed by the determinism check, which reruns them
/// once and compares the rendered reports.
pub fn run_suite(profile: Profile) -> Report {
    let mut first = run_all(profile);
    let second = run_all(profile).render();
    let x = first.render();
    let mut b = Builder::new();
    b.check("repeat run", x == second, format!("{} report bytes", x.len()));
    first.criteria.push(b.done(11, TITLES[10]));
    first
}

fn determinism(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let (x, y) = (run_all(profile).render(), run_all(profile).render());
    b.check("repeat run", x == y, format!("{} report bytes", x.len()));
    b
}

fn ctx(i: u32, n: u32) -> SegmentContext {
    SegmentContext::new(i, n).expect("valid context")
}

fn golden_factorization() -> Builder {
    let mut b = Builder::new();
    let got: Vec<Vec<i64>> =
        factorize(&ctx(2, 3), &[0, 6, 4, 2, 10, 16, 10]).iter().map(|s| s.entries().to_vec()).collect();
    let want = vec![vec![0, 2, 4, 6, 10], vec![10], vec![16]];
    b.check("(2,3) (0,6,4,2,10,16,10)", got == want, format!("{got:?}"));
    b
}

/// All segments with entries in `[lo, hi]` and at most `max_len` entries.
pub fn all_segments(c: &SegmentContext, lo: i64, hi: i64, max_len: usize) -> Vec<Segment> {
    fn grow(c: &SegmentContext, hi: i64, max_len: usize, cur: &mut Vec<i64>, out: &mut Vec<Segment>) {
        out.push(Segment::new(c, cur.clone()).expect("built from gaps in S"));
        if cur.len() == max_len {
            return;
        }
        let last = *cur.last().expect("nonempty");
        for d in (2..=c.reach()).step_by(2) {
            if last + d <= hi {
                cur.push(last + d);
                grow(c, hi, max_len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for x in lo..=hi {
        grow(c, hi, max_len, &mut vec![x], &mut out);
    }
    out
}

// Longest chain inside the union whose consecutive gaps lie in S, by
// dynamic programming over the sorted union. Independent of the endpoint test.
fn longest_chain(c: &SegmentContext, a: &[i64], b: &[i64]) -> usize {
    let u: BTreeSet<i64> = a.iter().chain(b).copied().collect();
    let u: Vec<i64> = u.into_iter().collect();
    let mut best = vec![1usize; u.len()];
    for k in 0..u.len() {
        for l in 0..k {
            if c.in_s(u[k] - u[l]) {
                best[k] = best[k].max(best[l] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

fn position_oracle(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let (max_n, hi, max_len) = match profile {
        Profile::Smoke => (3, 8, 3),
        Profile::Desk => (5, 12, 4),
    };
    for n in 1..=max_n {
        for i in 1..=n {
            let c = ctx(i, n);
            let segs = all_segments(&c, 0, hi, max_len);
            let idx: Vec<usize> = (0..segs.len()).collect();
            let (pairs, bad) = exec::fold(
                &idx,
                || (0u64, 0u64),
                |(p, bad), &k| {
                    let mut bad = bad;
                    let x = &segs[k];
                    for y in &segs[k..] {
                        let special = longest_chain(&c, x.entries(), y.entries()) > x.len().max(y.len());
                        let ok = match position(&c, x, y) {
                            Position::General { .. } => !special,
                            Position::Special { evidence } => {
                                special
                                    && evidence.len() > x.len().max(y.len())
                                    && evidence
                                        .entries()
                                        .iter()
                                        .all(|e| x.entries().contains(e) || y.entries().contains(e))
                            }
                        };
                        bad += u64::from(!ok);
                    }
                    (p + (segs.len() - k) as u64, bad)
                },
                |a, b| (a.0 + b.0, a.1 + b.1),
            );
            b.check(
                &format!("(i,n)=({i},{n})"),
                bad == 0,
                format!("{} segments, {pairs} pairs, {bad} disagreements", segs.len()),
            );
        }
    }
    b
}

// Every way to split the multiset into segments pairwise in general position,
// each split in canonical order.
fn admissible_partitions(c: &SegmentContext, xs: &[i64]) -> BTreeSet<Vec<Vec<i64>>> {
    fn go(c: &SegmentContext, xs: &[i64], k: usize, blocks: &mut Vec<Vec<i64>>, out: &mut BTreeSet<Vec<Vec<i64>>>) {
        if k == xs.len() {
            let mut segs = Vec::new();
            for bl in blocks.iter() {
                let mut v = bl.clone();
                v.sort_unstable();
                if !is_segment(c, &v) {
                    return;
                }
                segs.push(Segment::new(c, v).expect("checked"));
            }
            for (p, s) in segs.iter().enumerate() {
                if segs[p + 1..].iter().any(|t| !position(c, s, t).is_general()) {
                    return;
                }
            }
            sort_canonical(&mut segs);
            out.insert(segs.iter().map(|s| s.entries().to_vec()).collect());
            return;
        }
        for bl in 0..blocks.len() {
            blocks[bl].push(xs[k]);
            go(c, xs, k + 1, blocks, out);
            blocks[bl].pop();
        }
        blocks.push(vec![xs[k]]);
        go(c, xs, k + 1, blocks, out);
        blocks.pop();
    }
    let mut out = BTreeSet::new();
    go(c, xs, 0, &mut Vec::new(), &mut out);
    out
}

fn factorization_uniqueness(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let trials = match profile {
        Profile::Smoke => 500,
        Profile::Desk => 10_000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let cases: Vec<(u32, u32, Vec<i64>)> = (0..trials)
        .map(|_| {
            let n = rng.gen_range(1..=5u32);
            let i = rng.gen_range(1..=n);
            let size = rng.gen_range(1..=8usize);
            (i, n, (0..size).map(|_| rng.gen_range(0..=14i64)).collect())
        })
        .collect();
    let outcome = exec::map(&cases, |(i, n, xs)| {
        let c = ctx(*i, *n);
        let f = factorize(&c, xs);
        let mut flat: Vec<i64> = f.iter().flat_map(|s| s.entries().to_vec()).collect();
        let mut sorted = xs.clone();
        flat.sort_unstable();
        sorted.sort_unstable();
        let concat = flat == sorted;
        let general = f.iter().enumerate().all(|(k, s)| f[k + 1..].iter().all(|t| position(&c, s, t).is_general()));
        let mut rev = xs.clone();
        rev.reverse();
        let idem = f.iter().all(|s| factorize(&c, s.entries()) == vec![s.clone()]) && factorize(&c, &rev) == f;
        let unique = (xs.len() <= 6).then(|| {
            let parts = admissible_partitions(&c, xs);
            let mine: Vec<Vec<i64>> = f.iter().map(|s| s.entries().to_vec()).collect();
            parts.len() == 1 && parts.contains(&mine)
        });
        (concat, general, idem, unique)
    });
    type Outcome = (bool, bool, bool, Option<bool>);
    let count = |pred: &dyn Fn(&Outcome) -> bool| outcome.iter().filter(|o| pred(o)).count();
    let brute = count(&|o| o.3.is_some());
    b.check("concatenation", count(&|o| !o.0) == 0, format!("{trials} multisets"));
    b.check("pairwise general position", count(&|o| !o.1) == 0, format!("{trials} multisets"));
    b.check("idempotence", count(&|o| !o.2) == 0, format!("{trials} multisets"));
    b.check(
        "unique partition",
        count(&|o| o.3 == Some(false)) == 0,
        format!("{brute} multisets of size <= 6 searched"),
    );
    b
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

fn path_model(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let (count_n, corner_n, pims_n) = match profile {
        Profile::Smoke => (6, 4, 3),
        Profile::Desk => (10, 6, 5),
    };
    b.result(
        "path counts",
        (|| {
            let mut checked = 0;
            for n in 1..=count_n {
                for i in 1..=n {
                    if enumerate_paths(i, 0, n)?.len() as u64 != binomial(n as u64 + 1, i as u64) {
                        return Ok((false, format!("|P_{{{i},0}}| wrong at n={n}")));
                    }
                    checked += 1;
                }
            }
            Ok((true, format!("{checked} families, n <= {count_n}")))
        })(),
    );
    b.result(
        "corner characterizations",
        (|| {
            let mut checked = 0;
            for n in 1..=corner_n {
                for j in 1..=n {
                    for a in [0i64, 1] {
                        let all = enumerate_paths(j, a, n)?;
                        let mmax = j.min(n + 1 - j);
                        let (jj, n1) = (j as i64, n as i64 + 1);
                        let g_set: BTreeSet<Path> = (1..=mmax).map(|m| g_path(m, j, a, n)).collect::<Result<_>>()?;
                        let p_set: BTreeSet<Path> = (1..=mmax).map(|m| p_path(m, j, a, n)).collect::<Result<_>>()?;
                        let g_want: BTreeSet<Path> =
                            all.iter().filter(|p| p.corners_minus() == vec![n + 1 - j]).cloned().collect();
                        let p_want: BTreeSet<Path> =
                            all.iter().filter(|p| p.corners_minus() == vec![j]).cloned().collect();
                        if g_set != g_want || p_set != p_want {
                            return Ok((false, format!("corner set mismatch at n={n}, j={j}, a={a}")));
                        }
                        for m in 0..=mmax as i64 {
                            let y = |node: i64, shift: i64, e: i32| (node, shift, e);
                            let g_mono = if m == 0 {
                                vec![y(jj, a, 1)]
                            } else if 2 * jj > n1 {
                                vec![
                                    y(n1 - jj - m, a - n1 + 2 * jj + m, 1),
                                    y(n1 - jj, a - n1 + 2 * jj + 2 * m, -1),
                                    y(jj + m, a + m, 1),
                                ]
                            } else {
                                vec![
                                    y(jj - m, a + m, 1),
                                    y(n1 - jj, a + n1 - 2 * jj + 2 * m, -1),
                                    y(n1 - jj + m, a + n1 - 2 * jj + m, 1),
                                ]
                            };
                            let p_mono = if m == 0 {
                                vec![y(jj, a, 1)]
                            } else {
                                vec![y(jj - m, a + m, 1), y(jj, a + 2 * m, -1), y(jj + m, a + m, 1)]
                            };
                            let keep = |v: Vec<(i64, i64, i32)>| {
                                LWeight::from_factors(
                                    n,
                                    v.into_iter().filter(|&(node, _, _)| node >= 1 && node <= n as i64),
                                )
                            };
                            if g_path(m as u32, j, a, n)?.monomial() != keep(g_mono)?
                                || p_path(m as u32, j, a, n)?.monomial() != keep(p_mono)?
                            {
                                return Ok((false, format!("monomial mismatch at n={n}, j={j}, m={m}")));
                            }
                            checked += 1;
                        }
                    }
                }
            }
            Ok((true, format!("{checked} (n,j,a,m) cases, n <= {corner_n}")))
        })(),
    );
    b.result(
        "sandwich",
        (|| {
            let mut checked = 0u64;
            for n in 1..=pims_n {
                for i in 1..=n {
                    for m1 in 1..=3i64 {
                        for m2 in 1..=3i64 {
                            let (a, bb) = (-2 * m1, 0);
                            let c = 2 * m2;
                            let lo = lowest_path(i, a, n)?;
                            let hi = crate::paths::dual_path(i, c, n)?;
                            for p in enumerate_paths(i, bb, n)? {
                                if !(0..=n as usize + 1).all(|r| lo.at(r) < p.at(r) && p.at(r) < hi.at(r)) {
                                    return Ok((false, format!("violated at n={n}, i={i}")));
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
            Ok((true, format!("{checked} paths, n <= {pims_n}")))
        })(),
    );
    b
}

fn prime_snake_characters(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let max_n = match profile {
        Profile::Smoke => 3,
        Profile::Desk => 5,
    };
    for n in 1..=max_n {
        let snakes = enumerate_prime_snakes(n, 3, 12);
        let bad = exec::map(&snakes, |s| {
            snake_char(s).map(|c| c.is_multiplicity_free() && c.dominant_monomials() == vec![s.to_lweight()])
        })
        .into_iter()
        .filter(|r| !matches!(r, Ok(true)))
        .count();
        b.check(&format!("n={n}"), bad == 0, format!("{} snakes, {bad} failures", snakes.len()));
    }
    b
}

fn tsystem(profile: Profile) -> Builder {
    let mut b = Builder::new();
    b.result(
        "n=1 dimensions 2·2 = 3+1",
        (|| {
            let w = PrimeSnake::new(1, vec![(1, 0)])?;
            let w2 = PrimeSnake::new(1, vec![(1, 2)])?;
            let t = ext_tsystem(&w, &w2)?;
            let dims: Vec<i64> = t
                .rhs
                .terms
                .iter()
                .map(|(_, cl)| {
                    cl.iter().map(|x| snake_char(&PrimeSnake::from_lweight(x).unwrap()).unwrap().total()).product()
                })
                .collect();
            let lhs = snake_char(&w)?.total() * snake_char(&w2)?.total();
            Ok((
                verify_identity(&t.lhs, &t.rhs)? && lhs == 4 && dims == vec![3, 1],
                format!("{lhs} = {} + {}", dims[0], dims[1]),
            ))
        })(),
    );
    let (max_r, pairs): (usize, &[(u32, u32)]) = match profile {
        Profile::Smoke => (2, &[(1, 2), (2, 3)]),
        Profile::Desk => (3, &[(1, 1), (1, 2), (1, 3), (2, 3), (2, 4)]),
    };
    for &(i, n) in pairs {
        b.result(
            &format!("KR pairs (i,n)=({i},{n})"),
            (|| {
                let c = ctx(i, n);
                let mut cases = Vec::new();
                for seg in all_segments(&c, 0, 12, max_r + 1) {
                    if seg.len() >= 2 && seg.first() == 0 {
                        let e = seg.entries();
                        let k = e.len() - 1;
                        cases.push((
                            PrimeSnake::new(n, e[..k].iter().map(|&x| (i, x)).collect())?,
                            PrimeSnake::new(n, e[1..].iter().map(|&x| (i, x)).collect())?,
                        ));
                    }
                }
                let outcomes = exec::map(&cases, |(w, w2)| -> Result<bool> {
                    let t = ext_tsystem(w, w2)?;
                    Ok(verify_identity(&t.lhs, &t.rhs)? && tsystem_pm_coefficient(&t)? == 0)
                });
                let bad = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
                Ok((bad == 0, format!("{} pairs with r <= {max_r}, {bad} failures", cases.len())))
            })(),
        );
    }
    b
}

fn witnesses(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let (hi, max_len, limit) = match profile {
        Profile::Smoke => (6, 2, Some(5)),
        Profile::Desk => (8, 3, None),
    };
    for (i, n) in [(2u32, 3u32), (2, 4)] {
        let c = ctx(i, n);
        let segs = all_segments(&c, 0, hi, max_len);
        let mut pairs = Vec::new();
        for (k, x) in segs.iter().enumerate() {
            for y in &segs[k + 1..] {
                if !position(&c, x, y).is_general() {
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
        if let Some(l) = limit {
            pairs.truncate(l);
        }
        let outcomes = exec::map(&pairs, |(x, y)| {
            crate::qcharacter::certify_witness(&c, x, y).map(|w| w.is_some_and(|w| w.holds()))
        });
        let bad = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
        b.check(
            &format!("(i,n)=({i},{n})"),
            bad == 0 && pairs.len() >= 5,
            format!("{} special pairs, {bad} without a valid witness", pairs.len()),
        );
    }
    b
}

fn inflation(profile: Profile) -> Builder {
    let mut b = Builder::new();
    let triples = [(2u32, 2u32, 5u32), (1, 2, 3)];
    for (ibar, i, n) in triples {
        let t = InflationTriple::new(ibar, i, n).expect("valid triple");
        let tag = format!("({ibar},{i},{n})");
        b.result(
            &format!("inflpaths {tag}"),
            (|| {
                let snakes: Vec<PrimeSnake> = enumerate_prime_snakes(ibar, 2, 8);
                let mut checked = 0;
                for s in &snakes {
                    if !t.verify_inflpaths(s)? {
                        return Ok((false, format!("fails for {s}")));
                    }
                    checked += 1;
                }
                Ok((true, format!("{checked} snakes with at most 2 factors")))
            })(),
        );
        b.result(
            &format!("root product, base i(a+1) {tag}"),
            (|| {
                let mut bad = Vec::new();
                for j in 1..=ibar {
                    for a in -2..=2 {
                        if t.shifted_root_product(j, a)? != t.phi_root(j, a)? {
                            bad.push((j, a));
                        }
                    }
                }
                let detail = if bad.is_empty() {
                    "equal".to_string()
                } else {
                    format!(
                        "{} of {} cases differ; the base i(a+1) product is Phi(alpha) shifted by i-1 = {}",
                        bad.len(),
                        5 * ibar,
                        i - 1
                    )
                };
                Ok((bad.is_empty(), detail))
            })(),
        );
        b.result(
            &format!("root product, base ia+1 {tag}"),
            (|| {
                for j in 1..=ibar {
                    for a in -2..=2 {
                        if t.centred_root_product(j, a)? != t.phi_root(j, a)? {
                            return Ok((false, format!("differs at j={j}, a={a}")));
                        }
                    }
                }
                Ok((true, "equal".into()))
            })(),
        );
        b.result(
            &format!("partial order {tag}"),
            (|| {
                let mut checked = 0;
                let range = -3i64..=3;
                let mut coords = vec![*range.start(); ibar as usize];
                loop {
                    let w = Weight(coords.clone());
                    if w.in_q_plus() != t.phi_weight(&w)?.in_q_plus() {
                        return Ok((false, format!("order differs at {coords:?}")));
                    }
                    checked += 1;
                    let Some(k) = coords.iter().position(|&x| x < *range.end()) else { break };
                    coords[k] += 1;
                    for x in &mut coords[..k] {
                        *x = *range.start();
                    }
                }
                for j in 1..=ibar {
                    if t.phi_weight(&Weight::simple_root(ibar, j))? != t.phi_simple_root_sum(j)? {
                        return Ok((false, format!("phi(alpha_{j}) sum differs")));
                    }
                }
                Ok((true, format!("{checked} weight differences, both directions")))
            })(),
        );
        b.result(
            &format!("path round trip {tag}"),
            (|| {
                let mut checked = 0;
                for k in 1..=ibar {
                    for a in [-1i64, 0, 1] {
                        let ps = enumerate_paths(k, a, ibar)?;
                        let big: Vec<Path> = ps.iter().map(|p| t.inflate_path(p)).collect::<Result<_>>()?;
                        for (p, g) in ps.iter().zip(&big) {
                            if g.family() != (i * k, i as i64 * a)
                                || g.monomial() != t.phi(&p.monomial())?
                                || &t.deflate_path(g)? != p
                            {
                                return Ok((false, format!("round trip fails for {:?}", p.values())));
                            }
                            checked += 1;
                        }
                        for (x, gx) in ps.iter().zip(&big) {
                            for (y, gy) in ps.iter().zip(&big) {
                                if x.strictly_below(y) != gx.strictly_below(gy) {
                                    return Ok((false, "strict order not preserved".into()));
                                }
                            }
                        }
                        let image: BTreeSet<Path> = big.into_iter().collect();
                        for g in enumerate_paths(i * k, i as i64 * a, n)? {
                            if t.deflate_path(&g).is_ok() != image.contains(&g) {
                                return Ok((
                                    false,
                                    format!("deflate accepts a path outside the image: {:?}", g.values()),
                                ));
                            }
                        }
                    }
                }
                Ok((true, format!("{checked} paths")))
            })(),
        );
    }
    let _ = profile;
    b
}

fn indstep(_profile: Profile) -> Builder {
    let mut b = Builder::new();
    // The triple written (1,1,2) violates n+1 = i(ibar+1); the rank-two
    // reading with i = 1 is (2,1,2).
    for (ibar, i, n) in [(2u32, 1u32, 2u32), (2, 2, 5), (3, 2, 7)] {
        b.result(
            &format!("(ibar,i,n)=({ibar},{i},{n})"),
            (|| {
                let t = InflationTriple::new(ibar, i, n)?;
                let idx = t.index_set();
                for &p in &idx {
                    if !t.verify_indstep_i(p)? {
                        return Ok((false, format!("fails at p={p}")));
                    }
                }
                Ok((true, format!("p in {idx:?}")))
            })(),
        );
    }
    b
}

fn imaginary(profile: Profile) -> Builder {
    let mut b = Builder::new();
    b.result(
        "rank three weight",
        (|| {
            let inp = ImaginaryInput::new(3, 2, vec![4, 6])?;
            let w = imaginary_weight(&inp);
            let want = LWeight::parse(3, "Y[2,6]·Y[1,3]·Y[3,3]·Y[2,0]")?;
            Ok((w == want && path_factorization_holds(&inp)?, format!("{w}")))
        })(),
    );
    let max_n = match profile {
        Profile::Smoke => 3,
        Profile::Desk => 4,
    };
    let snakes: Vec<PrimeSnake> = (1..=max_n).flat_map(|n| enumerate_prime_snakes(n, 3, 10)).collect();
    let outcomes = exec::map(&snakes, |s| -> Result<bool> {
        Ok(certificate_dim_one(s)? == 1 && certificate_dim_one_squared(s)? == 1 && repeated_dual_factor_absent(s)?)
    });
    let bad = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
    b.check("dim one", bad == 0, format!("{} snakes with n <= {max_n}, {bad} failures", snakes.len()));
    for (n, i, bs) in [(3u32, 2u32, vec![4i64, 6]), (4, 2, vec![0, 2])] {
        b.result(
            &format!("classification ({n},{i},{},{bs:?})", bs.len()),
            (|| {
                let inp = ImaginaryInput::new(n, i, bs.clone())?;
                let c = classify_dominant_targets(&inp)?;
                let kept: Vec<String> = c.double_filtered().iter().map(|m| m.to_string()).collect();
                Ok((c.passes, format!("{} dominant candidates, kept {{{}}}", c.targets.len(), kept.join(", "))))
            })(),
        );
    }
    b
}
