//! Lattice paths on `[0, n+1]` with unit steps, their corner monomials, and
//! strictly non-crossing tuples of paths.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::limits;
use crate::lweight::LWeight;

/// A path `p: [0, n+1] -> Z` with steps of `±1`. It belongs to the family
/// `P_{i,a}` where `i` is its number of down steps and `a = p(0) - i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Path {
    n: u32,
    values: Vec<i64>,
}

impl Path {
    pub fn new(n: u32, values: Vec<i64>) -> Result<Path> {
        if values.len() != n as usize + 2 {
            return Err(Error::Path(format!("expected {} values, got {}", n + 2, values.len())));
        }
        if values.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::Path(format!("{values:?} has a step other than ±1")));
        }
        Ok(Path { n, values })
    }

    /// Build a path by joining waypoints `(r, p(r))` with straight runs.
    /// The first and last waypoints must sit at `0` and `n + 1`.
    pub fn from_waypoints(n: u32, pts: &[(i64, i64)]) -> Result<Path> {
        let bad = || Error::Path(format!("waypoints {pts:?} do not describe a path on [0,{}]", n + 1));
        if pts.first().map(|p| p.0) != Some(0) || pts.last().map(|p| p.0) != Some(n as i64 + 1) {
            return Err(bad());
        }
        let mut values = vec![pts[0].1];
        for w in pts.windows(2) {
            let ((r0, v0), (r1, v1)) = (w[0], w[1]);
            if r1 < r0 || (v1 - v0).abs() != r1 - r0 {
                return Err(bad());
            }
            let step = (v1 - v0).signum();
            for k in 1..=(r1 - r0) {
                values.push(v0 + step * k);
            }
        }
        Path::new(n, values)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn at(&self, r: usize) -> i64 {
        self.values[r]
    }

    /// `(i, a)` with this path in `P_{i,a}`.
    pub fn family(&self) -> (u32, i64) {
        let downs = self.values.windows(2).filter(|w| w[1] < w[0]).count() as u32;
        (downs, self.values[0] - downs as i64)
    }

    /// Interior local minima.
    pub fn corners_plus(&self) -> Vec<u32> {
        (1..=self.n as usize)
            .filter(|&r| self.values[r - 1] == self.values[r] + 1 && self.values[r + 1] == self.values[r] + 1)
            .map(|r| r as u32)
            .collect()
    }

    /// Interior local maxima.
    pub fn corners_minus(&self) -> Vec<u32> {
        (1..=self.n as usize)
            .filter(|&r| self.values[r - 1] == self.values[r] - 1 && self.values[r + 1] == self.values[r] - 1)
            .map(|r| r as u32)
            .collect()
    }

    /// `prod_{r in c+} Y[r, p(r)] * prod_{r in c-} Y[r, p(r)]^-1`.
    pub fn monomial(&self) -> LWeight {
        let plus = self.corners_plus().into_iter().map(|r| (r as i64, self.values[r as usize], 1));
        let minus = self.corners_minus().into_iter().map(|r| (r as i64, self.values[r as usize], -1));
        LWeight::from_factors(self.n, plus.chain(minus)).expect("corners are interior nodes")
    }

    /// `self(r) < other(r)` for every `r`.
    pub fn strictly_below(&self, other: &Path) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a < b)
    }
}

fn check_family(i: u32, n: u32) -> Result<()> {
    limits::check_rank(n)?;
    if n == 0 || i < 1 || i > n {
        return Err(Error::NodeOutOfRange { node: i as i64, rank: n });
    }
    Ok(())
}

/// All of `P_{i,a}`, in lexicographic order of values (down steps first).
pub fn enumerate_paths(i: u32, a: i64, n: u32) -> Result<Vec<Path>> {
    check_family(i, n)?;
    fn go(n: u32, downs_left: u32, cur: &mut Vec<i64>, out: &mut Vec<Path>) {
        let steps_left = n as usize + 2 - cur.len();
        if steps_left == 0 {
            out.push(Path { n, values: cur.clone() });
            return;
        }
        let last = *cur.last().unwrap();
        if downs_left > 0 {
            cur.push(last - 1);
            go(n, downs_left - 1, cur, out);
            cur.pop();
        }
        if (downs_left as usize) < steps_left {
            cur.push(last + 1);
            go(n, downs_left, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, i, &mut vec![i as i64 + a], &mut out);
    Ok(out)
}

/// The lowest path `p_{i,a}`: down to `(i, a)`, then up. Its monomial is `Y[i,a]`.
pub fn lowest_path(i: u32, a: i64, n: u32) -> Result<Path> {
    check_family(i, n)?;
    Path::from_waypoints(n, &[(0, i as i64 + a), (i as i64, a), (n as i64 + 1, n as i64 + 1 - i as i64 + a)])
}

/// The highest path `p*_{i,a}`: up to `(n+1-i, a+n+1)`, then down. Its
/// monomial is `Y[n+1-i, a+n+1]^-1`.
pub fn dual_path(i: u32, a: i64, n: u32) -> Result<Path> {
    check_family(i, n)?;
    let (i, n) = (i as i64, n as i64);
    Path::from_waypoints(n as u32, &[(0, i + a), (n + 1 - i, a + n + 1), (n + 1, n + 1 - i + a)])
}

fn check_m(j: u32, m: u32, n: u32) -> Result<()> {
    check_family(j, n)?;
    if m > j.min(n + 1 - j) {
        return Err(Error::Path(format!("m = {m} exceeds min({j}, {})", n + 1 - j)));
    }
    Ok(())
}

/// The path `g^m_{j,a}`: for `m > 0` its only local maximum is at `n+1-j`.
pub fn g_path(m: u32, j: u32, a: i64, n: u32) -> Result<Path> {
    check_m(j, m, n)?;
    let (m, j, n1) = (m as i64, j as i64, n as i64 + 1);
    let pts = if 2 * j <= n1 {
        [
            (0, j + a),
            (j - m, a + m),
            (n1 - j, a + n1 - 2 * j + 2 * m),
            (n1 - j + m, a + n1 - 2 * j + m),
            (n1, n1 - j + a),
        ]
    } else {
        [
            (0, j + a),
            (n1 - j - m, a - n1 + 2 * j + m),
            (n1 - j, a - n1 + 2 * j + 2 * m),
            (j + m, a + m),
            (n1, n1 - j + a),
        ]
    };
    Path::from_waypoints(n, &pts)
}

/// The path `p^m_{j,a}`: for `m > 0` its only local maximum is at `j`.
pub fn p_path(m: u32, j: u32, a: i64, n: u32) -> Result<Path> {
    check_m(j, m, n)?;
    let (m, j, n1) = (m as i64, j as i64, n as i64 + 1);
    Path::from_waypoints(n, &[(0, j + a), (j - m, a + m), (j, a + 2 * m), (j + m, a + m), (n1, n1 - j + a)])
}

/// Whether `omega(p)` dominates `omega(q)`, i.e. `omega(p) omega(q)^-1` lies
/// in `Q^+`. For paths of one family this is `p <= q` pointwise.
pub fn dominates(p: &Path, q: &Path) -> Result<bool> {
    if p.n != q.n || p.family() != q.family() {
        return Err(Error::Path("paths come from different families".into()));
    }
    Ok(p.values.iter().zip(&q.values).all(|(a, b)| a <= b))
}

/// Tuple version of [`dominates`], componentwise.
pub fn tuple_dominates(p: &[Path], q: &[Path]) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::Path("tuples of different lengths".into()));
    }
    for (x, y) in p.iter().zip(q) {
        if !dominates(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_noncrossing(tuple: &[Path]) -> bool {
    tuple.windows(2).all(|w| w[0].strictly_below(&w[1]))
}

pub fn tuple_monomial(tuple: &[Path]) -> LWeight {
    let n = tuple.first().map(|p| p.n).unwrap_or(0);
    tuple.iter().fold(LWeight::one(n), |acc, p| &acc * &p.monomial())
}

/// Every strictly non-crossing tuple `(p_1, ..., p_k)` with `p_s` in
/// `P_{i_s, a_s}`. The families must be listed with nondecreasing shifts.
///
/// Depth first with pruning: a partial tuple is only extended by paths lying
/// strictly above its last entry. The first coordinate is split across
/// workers.
pub fn enumerate_noncrossing(families: &[(u32, i64)], n: u32) -> Result<Vec<Vec<Path>>> {
    let sets = family_sets(families, n)?;
    if sets.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let tuples = exec::flat_map(&sets[0], |p0| {
        let mut out = Vec::new();
        let mut cur = vec![p0.clone()];
        extend(&sets, &mut cur, &mut |t| out.push(t.to_vec()));
        out
    });
    limits::check_terms(tuples.len())?;
    Ok(tuples)
}

/// The monomials of all strictly non-crossing tuples, without keeping the
/// tuples themselves.
pub fn noncrossing_monomials(families: &[(u32, i64)], n: u32) -> Result<Vec<LWeight>> {
    let sets = family_sets(families, n)?;
    if sets.is_empty() {
        return Ok(vec![LWeight::one(n)]);
    }
    let monos: Vec<LWeight> = sets.iter().flat_map(|s| s.iter().map(Path::monomial)).collect();
    let offsets: Vec<usize> = sets
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.len();
            Some(o)
        })
        .collect();
    let cap = limits::max_terms();
    let firsts: Vec<usize> = (0..sets[0].len()).collect();
    let parts = exec::map(&firsts, |&k0| {
        let mut out = Vec::new();
        let mut idx = vec![k0];
        extend_idx(&sets, &mut idx, &mut |ix| {
            if out.len() <= cap {
                let m = ix.iter().enumerate().fold(LWeight::one(n), |acc, (s, &k)| &acc * &monos[offsets[s] + k]);
                out.push(m);
            }
        });
        out
    });
    let total: usize = parts.iter().map(Vec::len).sum();
    limits::check_terms(total)?;
    Ok(parts.into_iter().flatten().collect())
}

fn family_sets(families: &[(u32, i64)], n: u32) -> Result<Vec<Vec<Path>>> {
    if families.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err(Error::Path("families must have nondecreasing shifts".into()));
    }
    families.iter().map(|&(i, a)| enumerate_paths(i, a, n)).collect()
}

fn extend(sets: &[Vec<Path>], cur: &mut Vec<Path>, emit: &mut impl FnMut(&[Path])) {
    let s = cur.len();
    if s == sets.len() {
        emit(cur);
        return;
    }
    for p in &sets[s] {
        if cur[s - 1].strictly_below(p) {
            cur.push(p.clone());
            extend(sets, cur, emit);
            cur.pop();
        }
    }
}

fn extend_idx(sets: &[Vec<Path>], idx: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    let s = idx.len();
    if s == sets.len() {
        emit(idx);
        return;
    }
    let prev = &sets[s - 1][idx[s - 1]];
    for (k, p) in sets[s].iter().enumerate() {
        if prev.strictly_below(p) {
            idx.push(k);
            extend_idx(sets, idx, emit);
            idx.pop();
        }
    }
}

/// Draw paths as polylines in a standalone SVG document.
pub fn paths_svg(paths: &[Path]) -> String {
    const UNIT: i64 = 30;
    const PAD: i64 = 20;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
    let n1 = paths.first().map(|p| p.n as i64 + 1).unwrap_or(1);
    let lo = paths.iter().flat_map(|p| p.values.iter().copied()).min().unwrap_or(0);
    let hi = paths.iter().flat_map(|p| p.values.iter().copied()).max().unwrap_or(0);
    let (w, h) = (n1 * UNIT + 2 * PAD, (hi - lo) * UNIT + 2 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for r in 0..=n1 {
        let x = PAD + r * UNIT;
        let _ = writeln!(s, r##"<line x1="{x}" y1="{PAD}" x2="{x}" y2="{}" stroke="#ddd"/>"##, h - PAD);
    }
    for (k, p) in paths.iter().enumerate() {
        let pts: Vec<String> = p
            .values
            .iter()
            .enumerate()
            .map(|(r, &v)| format!("{},{}", PAD + r as i64 * UNIT, PAD + (v - lo) * UNIT))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            COLORS[k % COLORS.len()]
        );
    }
    s.push_str("</svg>\n");
    s
}
