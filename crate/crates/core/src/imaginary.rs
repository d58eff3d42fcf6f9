//! Highest ℓ-weights of the imaginary family built from an `(i,n)`-segment
//! and its dual, plus the finite checks that the argument for them rests on.

use serde::Serialize;

use crate::character::{coefficient_in_product, Character};
use crate::error::{Error, Result};
use crate::exec;
use crate::lweight::{decompose_in_q_plus, simple_affine_root, LWeight};
use crate::paths::{g_path, is_noncrossing, tuple_monomial, Path};
use crate::qcharacter::{snake_char, weyl_factors, PrimeSnake};
use crate::segments::{is_segment, SegmentContext};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImaginaryInput {
    pub n: u32,
    pub i: u32,
    pub b: Vec<i64>,
}

impl ImaginaryInput {
    pub fn new(n: u32, i: u32, b: Vec<i64>) -> Result<Self> {
        let fail = |m: String| Err(Error::Hypothesis(m));
        if n < 3 {
            return fail(format!("need n >= 3, got {n}"));
        }
        if i < 2 || i > n - 1 {
            return fail(format!("need i in [2, n-1], got i={i}, n={n}"));
        }
        if 2 * i > n + 1 {
            return fail(format!("need 2i <= n+1, got i={i}, n={n}"));
        }
        if b.len() < 2 {
            return fail(format!("need r >= 2 entries, got {}", b.len()));
        }
        let ctx = SegmentContext::new(i, n)?;
        if !is_segment(&ctx, &b) {
            return fail(format!("{b:?} is not an ({i},{n})-segment"));
        }
        if let Some(w) = b.windows(2).find(|w| w[1] - w[0] >= 2 * i as i64) {
            return fail(format!("gap {} - {} is not below 2i = {}", w[1], w[0], 2 * i));
        }
        Ok(ImaginaryInput { n, i, b })
    }

    pub fn r(&self) -> usize {
        self.b.len()
    }

    /// `a_k = b_k - n - 1`.
    pub fn a(&self) -> Vec<i64> {
        self.b.iter().map(|&x| x - self.n as i64 - 1).collect()
    }

    /// `s_j = (b_{j-1} - b_j + 2i)/2` for `j = 2..r`, indexed from `j = 2`.
    pub fn s(&self) -> Vec<i64> {
        self.b.windows(2).map(|w| (w[0] - w[1] + 2 * self.i as i64) / 2).collect()
    }

    pub fn kr(&self) -> LWeight {
        LWeight::from_factors(self.n, self.b.iter().map(|&x| (self.i as i64, x, 1))).expect("node in range")
    }

    pub fn dual_kr(&self) -> LWeight {
        let j = (self.n + 1 - self.i) as i64;
        LWeight::from_factors(self.n, self.a().into_iter().map(|x| (j, x, 1))).expect("node in range")
    }

    /// The `j`-th member of the candidate family (`1 <= j <= r`):
    /// `Y[i,b_j] prod_{p=2}^{j} Y[i-s_p, b_{p-1}-s_p] Y[n+1-i+s_p, a_p+s_p] * Y[n+1-i, a_1]`.
    /// The member `j = r` is the imaginary weight itself.
    pub fn truncated_weight(&self, j: usize) -> LWeight {
        let (n, i) = (self.n as i64, self.i as i64);
        let (a, s) = (self.a(), self.s());
        let mut fs = vec![(i, self.b[j - 1], 1), (n + 1 - i, a[0], 1)];
        for p in 2..=j {
            let sp = s[p - 2];
            fs.push((i - sp, self.b[p - 2] - sp, 1));
            fs.push((n + 1 - i + sp, a[p - 1] + sp, 1));
        }
        LWeight::from_factors(self.n, fs).expect("nodes in range")
    }

    /// The tuple `(g^0_{n+1-i,a_1}, g^{s_2}_{n+1-i,a_2}, ..., g^{s_r}_{n+1-i,a_r})`.
    pub fn path_tuple(&self) -> Result<Vec<Path>> {
        let j = self.n + 1 - self.i;
        let (a, s) = (self.a(), self.s());
        let mut out = vec![g_path(0, j, a[0], self.n)?];
        for p in 1..self.r() {
            out.push(g_path(s[p - 1] as u32, j, a[p], self.n)?);
        }
        Ok(out)
    }
}

pub fn imaginary_weight(input: &ImaginaryInput) -> LWeight {
    input.truncated_weight(input.r())
}

/// `omega = Y[i,b] * omega(p)` for the path tuple above, which must also be
/// non-crossing.
pub fn path_factorization_holds(input: &ImaginaryInput) -> Result<bool> {
    let tuple = input.path_tuple()?;
    Ok(is_noncrossing(&tuple) && &input.kr() * &tuple_monomial(&tuple) == imaginary_weight(input))
}

fn left_dual_snake(pi: &PrimeSnake) -> Result<PrimeSnake> {
    PrimeSnake::from_lweight(&pi.to_lweight().left_dual_star())
}

/// Number of pairs `(m1, m2)` of ℓ-weights of `V(pi)` and `V(*pi)`, counted
/// with multiplicity, with `m1 m2 = 1`.
pub fn certificate_dim_one(pi: &PrimeSnake) -> Result<i64> {
    let c = snake_char(pi)?;
    let d = snake_char(&left_dual_snake(pi)?)?;
    Ok(c.terms().map(|(m, k)| k * d.coefficient(&m.inverse())).sum())
}

/// The same count for `V ⊗ V` with `V = V(pi) ⊗ V(*pi)`.
pub fn certificate_dim_one_squared(pi: &PrimeSnake) -> Result<i64> {
    let c = snake_char(pi)?;
    let d = snake_char(&left_dual_snake(pi)?)?;
    coefficient_in_product(&[c.clone(), c, d.clone(), d], &LWeight::one(pi.n()))
}

/// No ℓ-weight of `V(pi) ⊗ V(*pi)` carries `Y[n+1-i_1, c_1-n-1]` with
/// exponent two or more, where `(i_1, c_1)` is the lowest factor of `pi`.
pub fn repeated_dual_factor_absent(pi: &PrimeSnake) -> Result<bool> {
    let Some(&(i1, c1)) = pi.factors().first() else {
        return Ok(true);
    };
    let n = pi.n();
    let (node, shift) = (n + 1 - i1, c1 - n as i64 - 1);
    let top = |c: &Character| c.monomials().map(|m| m.exponent(node, shift)).max().unwrap_or(0);
    let c = snake_char(pi)?;
    let d = snake_char(&left_dual_snake(pi)?)?;
    Ok(top(&c) + top(&d) < 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "j", rename_all = "snake_case")]
pub enum TargetShape {
    Unit,
    Omega,
    Truncated(usize),
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct Target {
    pub monomial: LWeight,
    pub in_weyl: bool,
    pub shape: TargetShape,
    pub dual_filter: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub targets: Vec<Target>,
    pub passes: bool,
}

impl Classification {
    /// Monomials that lie in the Weyl module and pass the dual filter.
    pub fn double_filtered(&self) -> Vec<&LWeight> {
        self.targets.iter().filter(|t| t.in_weyl && t.dual_filter).map(|t| &t.monomial).collect()
    }
}

/// Every dominant monomial `Y[i,b] * m` with `m` an ℓ-weight of the dual KR
/// module, tagged with whether it occurs in the Weyl module of the imaginary
/// weight, which member of the truncated family it is, and whether
/// `(pi^*)^{-1} Y[i,b]` is an ℓ-weight of `V(Y[i,b])`.
pub fn classify_dominant_targets(input: &ImaginaryInput) -> Result<Classification> {
    let omega = imaginary_weight(input);
    let kr = input.kr();
    let dual = snake_char(&PrimeSnake::from_lweight(&input.dual_kr())?)?;
    let kr_char = snake_char(&PrimeSnake::from_lweight(&kr)?)?;
    let weyl = weyl_factors(&omega)?;
    let family: Vec<LWeight> = (1..input.r()).map(|j| input.truncated_weight(j)).collect();

    let cands: Vec<LWeight> = dual.monomials().map(|m| &kr * m).filter(|m| m.is_dominant()).collect();
    let targets = exec::map(&cands, |m| {
        let in_weyl = coefficient_in_product(&weyl, m).map(|c| c > 0);
        let shape = if m.is_one() {
            TargetShape::Unit
        } else if *m == omega {
            TargetShape::Omega
        } else if let Some(j) = family.iter().position(|f| f == m) {
            TargetShape::Truncated(j + 1)
        } else {
            TargetShape::Other
        };
        let probe = &m.dual_star().inverse() * &kr;
        in_weyl.map(|in_weyl| Target { monomial: m.clone(), in_weyl, shape, dual_filter: kr_char.contains(&probe) })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let shapes_ok = targets.iter().filter(|t| t.in_weyl).all(|t| t.shape != TargetShape::Other);
    let mut both: Vec<&LWeight> = targets.iter().filter(|t| t.in_weyl && t.dual_filter).map(|t| &t.monomial).collect();
    both.sort();
    let mut expect = vec![&omega];
    let one = LWeight::one(input.n);
    expect.push(&one);
    expect.sort();
    let passes = shapes_ok && both == expect;
    Ok(Classification { targets, passes })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImaginaryCertificate {
    pub omega: LWeight,
    pub dominant: bool,
    pub path_factorization: bool,
    pub dim_one: i64,
    pub dim_one_squared: i64,
    pub classification: Classification,
}

impl ImaginaryCertificate {
    pub fn all_pass(&self) -> bool {
        self.dominant
            && self.path_factorization
            && self.dim_one == 1
            && self.dim_one_squared == 1
            && self.classification.passes
    }
}

pub fn certify(input: &ImaginaryInput) -> Result<ImaginaryCertificate> {
    let omega = imaginary_weight(input);
    let kr = PrimeSnake::from_lweight(&input.kr())?;
    Ok(ImaginaryCertificate {
        dominant: omega.is_dominant(),
        path_factorization: path_factorization_holds(input)?,
        dim_one: certificate_dim_one(&kr)?,
        dim_one_squared: certificate_dim_one_squared(&kr)?,
        classification: classify_dominant_targets(input)?,
        omega,
    })
}

/// Weights attached to an open node range `J = (j, k)`: `pi` supported on
/// `J`, `pi1` and `pi2` supported off it.
#[derive(Clone, Debug, Serialize)]
pub struct Dsub {
    pub pi: LWeight,
    pub pi_prime: LWeight,
    pub prime_pi: LWeight,
    pub pi_plus: LWeight,
    pub pi_minus: LWeight,
    /// The root product with shifts `c_p + t + 1`, missing the `r - j_p` term.
    pub alpha_unshifted: LWeight,
    /// The root product with shifts `c_p + (r - j_p) + t + 1`.
    pub alpha: LWeight,
    /// `pi1 pi^+ pi2`, and the two highest weights of the target tensor product.
    pub plus_source: LWeight,
    pub plus_targets: (LWeight, LWeight),
    /// `pi1 pi^- pi2`, likewise.
    pub minus_source: LWeight,
    pub minus_targets: (LWeight, LWeight),
}

impl Dsub {
    /// `pi' pi alpha^{-1} = pi^+`.
    pub fn identity_holds(&self) -> bool {
        self.plus_identity(&self.alpha)
    }

    pub fn identity_holds_unshifted(&self) -> bool {
        self.plus_identity(&self.alpha_unshifted)
    }

    fn plus_identity(&self, alpha: &LWeight) -> bool {
        &(&self.pi_prime * &self.pi) * &alpha.inverse() == self.pi_plus
    }

    /// `pi 'pi (pi^-)^{-1}` lies in `Q^+`.
    pub fn minus_in_q_plus(&self) -> bool {
        decompose_in_q_plus(&(&(&self.pi * &self.prime_pi) * &self.pi_minus.inverse())).is_some()
    }
}

pub fn dsub_weights(n: u32, j: u32, k: u32, pi: &LWeight, pi1: &LWeight, pi2: &LWeight) -> Result<Dsub> {
    if j >= k || k > n + 1 || k - j < 2 {
        return Err(Error::Hypothesis(format!("J = ({j}, {k}) is not a nonempty range inside [1, {n}]")));
    }
    for w in [pi, pi1, pi2] {
        if w.rank() != n {
            return Err(Error::RankMismatch(n, w.rank()));
        }
        if !w.is_dominant() && !w.is_one() {
            return Err(Error::NotDominant(w.to_string()));
        }
    }
    let inside = |node: u32| node > j && node < k;
    if pi.factors().iter().any(|&(g, _)| !inside(g.node)) {
        return Err(Error::Hypothesis(format!("{pi} is not supported on ({j}, {k})")));
    }
    if [pi1, pi2].iter().any(|w| w.factors().iter().any(|&(g, _)| inside(g.node))) {
        return Err(Error::Hypothesis(format!("pi1, pi2 must avoid ({j}, {k})")));
    }
    let (jj, kk) = (j as i64, k as i64);
    let y = |node: i64, shift: i64| LWeight::y_or_one(n, node, shift);
    let mut d = Dsub {
        pi: pi.clone(),
        pi_prime: LWeight::one(n),
        prime_pi: LWeight::one(n),
        pi_plus: LWeight::one(n),
        pi_minus: LWeight::one(n),
        alpha_unshifted: LWeight::one(n),
        alpha: LWeight::one(n),
        plus_source: LWeight::one(n),
        plus_targets: (LWeight::one(n), LWeight::one(n)),
        minus_source: LWeight::one(n),
        minus_targets: (LWeight::one(n), LWeight::one(n)),
    };
    for &(g, e) in pi.factors() {
        let (jp, c) = (g.node as i64, g.shift);
        for _ in 0..e {
            d.pi_prime = &d.pi_prime * &y(kk + jj - jp, c + kk - jj);
            d.prime_pi = &d.prime_pi * &y(kk + jj - jp, c - kk + jj);
            d.pi_plus = &(&d.pi_plus * &y(jj, c + jp - jj)) * &y(kk, c + kk - jp);
            d.pi_minus = &(&d.pi_minus * &y(jj, c - jp + jj)) * &y(kk, c - kk + jp);
            for r in jp..kk {
                for t in 0..(jp - jj) {
                    let node = (r - t) as u32;
                    d.alpha_unshifted = &d.alpha_unshifted * &simple_affine_root(n, node, c + t + 1)?;
                    d.alpha = &d.alpha * &simple_affine_root(n, node, c + (r - jp) + t + 1)?;
                }
            }
        }
    }
    d.plus_source = &(pi1 * &d.pi_plus) * pi2;
    d.plus_targets = (pi1 * &d.pi_prime, pi * pi2);
    d.minus_source = &(pi1 * &d.pi_minus) * pi2;
    d.minus_targets = (pi1 * pi, &d.prime_pi * pi2);
    Ok(d)
}

/// `omega_0 = prod_{p=2}^{r} Y[n+1-s_p, a_p-i+s_p]`.
pub fn omega_zero(input: &ImaginaryInput) -> LWeight {
    let (n, i) = (input.n as i64, input.i as i64);
    let (a, s) = (input.a(), input.s());
    LWeight::from_factors(input.n, (1..input.r()).map(|p| (n + 1 - s[p - 1], a[p] - i + s[p - 1], 1)))
        .expect("node in range")
}

/// The two instances of [`dsub_weights`] used for the imaginary family.
/// The first has source `Y[n+1-i, a]` and targets `(omega_2, omega_0)`;
/// the second, read on the minus side, has source `Y[i, b]` and targets
/// `(omega_0^*, omega_1)`.
pub fn dsub_instances(input: &ImaginaryInput) -> Result<(Dsub, Dsub)> {
    let (n, i) = (input.n, input.i);
    let a = input.a();
    let w0 = omega_zero(input);
    let first = dsub_weights(n, n + 1 - i, n + 1, &w0, &LWeight::y(n, (n + 1 - i) as i64, a[0])?, &LWeight::one(n))?;
    let last_b = *input.b.last().expect("r >= 2");
    let second = dsub_weights(n, 0, i, &w0.dual_star(), &LWeight::one(n), &LWeight::y(n, i as i64, last_b)?)?;
    Ok((first, second))
}

/// `omega_1` and `omega_2` with `omega = omega_1 omega_2`.
pub fn omega_split(input: &ImaginaryInput) -> (LWeight, LWeight) {
    let (n, i) = (input.n as i64, input.i as i64);
    let (a, s) = (input.a(), input.s());
    let last_b = *input.b.last().expect("r >= 2");
    let mut w1 = vec![(i, last_b, 1)];
    let mut w2 = vec![(n + 1 - i, a[0], 1)];
    for p in 1..input.r() {
        let sp = s[p - 1];
        w1.push((i - sp, input.b[p - 1] - sp, 1));
        w2.push((n + 1 - i + sp, a[p] + sp, 1));
    }
    (LWeight::from_factors(input.n, w1).expect("in range"), LWeight::from_factors(input.n, w2).expect("in range"))
}

#[derive(Clone, Debug, Serialize)]
pub struct A2Family {
    pub r1: u32,
    pub r2: u32,
    pub b1: i64,
    pub b2: i64,
    pub pi: LWeight,
    pub left_dual: LWeight,
    pub product: LWeight,
}

/// The rank-two evaluation-type snake `Y[1, b_1..] Y[2, b_2..]` with
/// `b_1 - 3 = b_2 + 2 r_2 - 2`, its left dual, and their product.
pub fn a2_family(r1: u32, r2: u32, b1: i64) -> Result<A2Family> {
    if r1 < 2 || r2 < 2 {
        return Err(Error::Hypothesis(format!("need r1, r2 >= 2, got {r1}, {r2}")));
    }
    let b2 = b1 - 1 - 2 * r2 as i64;
    let string = |node: i64, start: i64, len: u32| (0..len as i64).map(move |t| (node, start + 2 * t, 1));
    let pi = LWeight::from_factors(2, string(1, b1, r1).chain(string(2, b2, r2)))?;
    let left_dual = LWeight::from_factors(2, string(1, b2 - 3, r2).chain(string(2, b1 - 3, r1)))?;
    debug_assert_eq!(left_dual, pi.left_dual_star());
    let product = &left_dual * &pi;
    Ok(A2Family { r1, r2, b1, b2, pi, left_dual, product })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rank_three() -> ImaginaryInput {
        ImaginaryInput::new(3, 2, vec![4, 6]).unwrap()
    }

    #[test]
    fn rank_three_weight() {
        let inp = rank_three();
        assert_eq!(inp.s(), vec![1]);
        assert_eq!(inp.a(), vec![0, 2]);
        let w = imaginary_weight(&inp);
        assert_eq!(w, LWeight::parse(3, "Y[2,6]·Y[1,3]·Y[3,3]·Y[2,0]").unwrap());
        assert!(path_factorization_holds(&inp).unwrap());
        let (w1, w2) = omega_split(&inp);
        assert_eq!(&w1 * &w2, w);
    }

    #[test]
    fn hypotheses() {
        assert!(ImaginaryInput::new(3, 2, vec![4, 8]).is_err());
        assert!(ImaginaryInput::new(3, 2, vec![4]).is_err());
        assert!(ImaginaryInput::new(4, 3, vec![0, 2]).is_err());
        assert!(ImaginaryInput::new(2, 2, vec![0, 2]).is_err());
        assert!(ImaginaryInput::new(3, 2, vec![4, 5]).is_err());
        let inp = ImaginaryInput::new(5, 3, vec![0, 2]).unwrap();
        assert!(imaginary_weight(&inp).is_dominant());
        assert!(path_factorization_holds(&inp).unwrap());
    }

    #[test]
    fn dim_one_small() {
        let p = PrimeSnake::new(1, vec![(1, 0)]).unwrap();
        assert_eq!(certificate_dim_one(&p).unwrap(), 1);
        assert_eq!(certificate_dim_one_squared(&p).unwrap(), 1);
        let p = PrimeSnake::new(3, vec![(2, 4), (2, 6)]).unwrap();
        assert_eq!(certificate_dim_one(&p).unwrap(), 1);
        assert_eq!(certificate_dim_one_squared(&p).unwrap(), 1);
        assert!(repeated_dual_factor_absent(&p).unwrap());
    }

    #[test]
    fn rank_three_classification() {
        let inp = rank_three();
        let c = classify_dominant_targets(&inp).unwrap();
        assert!(c.passes, "{:#?}", c.targets);
        let top = &inp.kr() * &inp.dual_kr();
        assert!(c.targets.iter().any(|t| t.monomial == top));
        assert!(c.targets.iter().any(|t| t.monomial == inp.truncated_weight(1)));
        let cert = certify(&inp).unwrap();
        assert!(cert.all_pass());
    }

    #[test]
    fn dsub_identity() {
        let pi = LWeight::parse(3, "Y[1,0]").unwrap();
        let d = dsub_weights(3, 0, 4, &pi, &LWeight::one(3), &LWeight::one(3)).unwrap();
        assert!(d.pi_plus.is_one());
        assert!(d.identity_holds());
        assert!(!d.identity_holds_unshifted());
        let one = LWeight::one(3);
        let e = dsub_weights(3, 0, 4, &one, &one, &one).unwrap();
        assert!(e.pi_plus.is_one() && e.alpha.is_one() && e.identity_holds());
        assert!(dsub_weights(3, 1, 3, &pi, &one, &one).is_err());
    }

    #[test]
    fn dsub_instances_reproduce_sources() {
        for inp in [
            rank_three(),
            ImaginaryInput::new(5, 3, vec![0, 2, 6]).unwrap(),
            ImaginaryInput::new(4, 2, vec![0, 2]).unwrap(),
        ] {
            let (first, second) = dsub_instances(&inp).unwrap();
            let (w1, w2) = omega_split(&inp);
            assert_eq!(first.plus_source, inp.dual_kr());
            assert_eq!(first.plus_targets, (w2, omega_zero(&inp)));
            assert_eq!(second.minus_source, inp.kr());
            assert_eq!(second.minus_targets, (omega_zero(&inp).dual_star(), w1));
            assert!(first.identity_holds() && second.identity_holds());
            assert!(second.minus_in_q_plus());
        }
    }

    #[test]
    fn a2() {
        let f = a2_family(2, 2, 3).unwrap();
        assert_eq!(f.b2, -2);
        assert_eq!(f.left_dual, f.pi.left_dual_star());
        assert!(f.product.is_dominant());
        assert_eq!(f.product.weight(), f.pi.weight() + f.left_dual.weight());
        assert!(PrimeSnake::from_lweight(&f.pi).is_ok());
        assert!(a2_family(1, 2, 0).is_err());
    }

    proptest! {
        #[test]
        fn dsub_identity_random(
            n in 3u32..7,
            raw in prop::collection::vec((0u32..10, -6i64..6), 0..4),
            jk in (0u32..3, 2u32..6),
        ) {
            let j = jk.0.min(n - 1);
            let k = (j + jk.1).min(n + 1);
            prop_assume!(k - j >= 2);
            let facs: Vec<(i64, i64, i32)> = raw.iter().map(|&(x, c)| ((j + 1 + x % (k - j - 1)) as i64, c, 1)).collect();
            let pi = LWeight::from_factors(n, facs).unwrap();
            let one = LWeight::one(n);
            let d = dsub_weights(n, j, k, &pi, &one, &one).unwrap();
            prop_assert!(d.identity_holds());
            prop_assert!(d.minus_in_q_plus());
        }
    }
}
