//! Growth series of the generating set and the counting lower bound on the diameter.
//!
//! Inverse growth polynomials come from pairwise-commuting subsets of the
//! alphabet (trace monoid inversion). All arithmetic here is exact.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_system::{LieType, RootSystem};

/// Polynomial in `t` with integer coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthPoly {
    coeffs: Vec<BigInt>,
}

impl GrowthPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = GrowthPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        GrowthPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial `c t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients as decimal strings, for serialization without precision loss.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        GrowthPoly { coeffs }
    }

    /// `self(inner(t))` by Horner's rule.
    pub fn compose(&self, inner: &GrowthPoly) -> Self {
        let mut acc = GrowthPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &GrowthPoly::new(vec![c.clone()]);
        }
        acc
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_quadratic(&self, t: &QuadraticValue) -> QuadraticValue {
        let mut acc = QuadraticValue::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + &QuadraticValue::integer(c.clone());
        }
        acc
    }
}

impl fmt::Display for GrowthPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &GrowthPoly {
    type Output = GrowthPoly;
    fn add(self, rhs: &GrowthPoly) -> GrowthPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        GrowthPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &GrowthPoly {
    type Output = GrowthPoly;
    fn sub(self, rhs: &GrowthPoly) -> GrowthPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        GrowthPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &GrowthPoly {
    type Output = GrowthPoly;
    fn mul(self, rhs: &GrowthPoly) -> GrowthPoly {
        if self.is_zero() || rhs.is_zero() {
            return GrowthPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        GrowthPoly::new(coeffs)
    }
}

/// Exact element `a + b√3` of the real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticValue {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadraticValue {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadraticValue { a, b }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn rational(a: BigRational) -> Self {
        QuadraticValue { a, b: BigRational::zero() }
    }

    pub fn integer(a: BigInt) -> Self {
        Self::rational(BigRational::from_integer(a))
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadraticValue {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    /// `4 + 2√3`, the growth rate of the doubled alphabet.
    pub fn growth_base() -> Self {
        Self::from_ints(4, 2)
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = Self::from_ints(1, 0);
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of `a + b√3`, decided by comparing `a²` with `3b²` when the parts disagree.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (sa, _) => {
                let three = BigRational::from_integer(3.into());
                let lhs = &self.a * &self.a;
                let rhs = three * &self.b * &self.b;
                match lhs.cmp(&rhs) {
                    // Irrationality of √3 rules out equality with both parts nonzero.
                    Ordering::Greater => sa,
                    _ => sa.reverse(),
                }
            }
        }
    }
}

impl Add for &QuadraticValue {
    type Output = QuadraticValue;
    fn add(self, rhs: &QuadraticValue) -> QuadraticValue {
        QuadraticValue { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &QuadraticValue {
    type Output = QuadraticValue;
    fn sub(self, rhs: &QuadraticValue) -> QuadraticValue {
        QuadraticValue { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Neg for &QuadraticValue {
    type Output = QuadraticValue;
    fn neg(self) -> QuadraticValue {
        QuadraticValue { a: -&self.a, b: -&self.b }
    }
}

impl Mul for &QuadraticValue {
    type Output = QuadraticValue;
    fn mul(self, rhs: &QuadraticValue) -> QuadraticValue {
        let three = BigRational::from_integer(3.into());
        QuadraticValue {
            a: &self.a * &rhs.a + three * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

/// Generators as vertices; an edge means the two generators commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationGraph {
    labels: Vec<String>,
    commute: Vec<u64>,
}

impl CommutationGraph {
    /// Graph with no commuting pairs.
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() > 64 {
            return Err(Error::GraphTooLarge(labels.len()));
        }
        let commute = vec![0; labels.len()];
        Ok(CommutationGraph { labels, commute })
    }

    pub fn edgeless(r: usize) -> Result<Self> {
        Self::new((1..=r).map(|i| format!("s{i}")).collect())
    }

    pub fn complete(r: usize) -> Result<Self> {
        let mut g = Self::edgeless(r)?;
        for i in 0..r {
            for j in i + 1..r {
                g.add_commuting(i, j);
            }
        }
        Ok(g)
    }

    /// Generators of type `A_n`: neighbours on the path fail to commute.
    pub fn path(n: usize) -> Result<Self> {
        let mut g = Self::new((1..=n).map(|i| format!("e{i}")).collect())?;
        for i in 0..n {
            for j in i + 2..n {
                g.add_commuting(i, j);
            }
        }
        Ok(g)
    }

    /// Simple root generators, commuting exactly when the Dynkin vertices are not joined.
    pub fn dynkin(rs: &RootSystem) -> Result<Self> {
        let n = rs.rank();
        let mut g = Self::new((1..=n).map(|i| format!("e{i}")).collect())?;
        for i in 1..=n {
            for j in i + 1..=n {
                if rs.simple_roots_commute(i, j) {
                    g.add_commuting(i - 1, j - 1);
                }
            }
        }
        Ok(g)
    }

    /// The alphabet `e_i, e'_i` with all four relations per commuting pair,
    /// plus `e_i e'_i = e'_i e_i` since both lie in one root subgroup.
    pub fn doubled(base: &CommutationGraph) -> Result<Self> {
        let n = base.len();
        let mut labels: Vec<String> = base.labels.clone();
        labels.extend(base.labels.iter().map(|l| format!("{l}'")));
        let mut g = Self::new(labels)?;
        for i in 0..n {
            g.add_commuting(i, i + n);
            for j in i + 1..n {
                if base.commutes(i, j) {
                    g.add_commuting(i, j);
                    g.add_commuting(i + n, j);
                    g.add_commuting(i, j + n);
                    g.add_commuting(i + n, j + n);
                }
            }
        }
        Ok(g)
    }

    pub fn add_commuting(&mut self, i: usize, j: usize) {
        if i != j {
            self.commute[i] |= 1 << j;
            self.commute[j] |= 1 << i;
        }
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.commute[i] >> j & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// `Σ_T (-t)^{|T|}` over pairwise-commuting subsets `T`.
pub fn clique_polynomial(g: &CommutationGraph) -> Result<GrowthPoly> {
    if g.len() > 64 {
        return Err(Error::GraphTooLarge(g.len()));
    }
    let full = if g.len() == 64 { u64::MAX } else { (1u64 << g.len()) - 1 };
    let mut memo = HashMap::new();
    Ok(clique_rec(g, full, &mut memo))
}

// Split on the lowest vertex v: subsets avoiding v, plus v joined to subsets of its commuting set.
fn clique_rec(g: &CommutationGraph, mask: u64, memo: &mut HashMap<u64, GrowthPoly>) -> GrowthPoly {
    if mask == 0 {
        return GrowthPoly::one();
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << v);
    let without = clique_rec(g, rest, memo);
    let with = clique_rec(g, rest & g.commute[v], memo).shift(1);
    let out = &without - &with;
    memo.insert(mask, out.clone());
    out
}

fn check_rank(lie_type: LieType, n: usize) -> Result<()> {
    if n < lie_type.min_rank() {
        return Err(Error::UnsupportedRank { label: lie_type.label(), rank: n, min: lie_type.min_rank() });
    }
    Ok(())
}

/// `P(A_k)` for `k = -2..=n`, indexed by `k + 2`.
fn path_polys(n: usize) -> Vec<GrowthPoly> {
    let t = GrowthPoly::monomial(1, 1);
    let mut out = vec![GrowthPoly::zero(), GrowthPoly::one(), GrowthPoly::one()];
    for k in 1..=n {
        let next = &out[k + 1] - &(&t * &out[k]);
        out.push(next);
    }
    out
}

/// Inverse growth polynomial of the simple generators `e_1..e_n`.
pub fn p_polynomial(lie_type: LieType, n: usize) -> Result<GrowthPoly> {
    check_rank(lie_type, n)?;
    let a = path_polys(n);
    Ok(match lie_type {
        LieType::A | LieType::B | LieType::C => a[n + 2].clone(),
        LieType::D => {
            let shifted = if n >= 3 { a[n - 3].shift(3) } else { GrowthPoly::zero() };
            &a[n + 2] - &shifted
        }
    })
}

/// Inverse growth polynomial of the doubled alphabet, `P(2t - t²)`.
pub fn q_polynomial(lie_type: LieType, n: usize) -> Result<GrowthPoly> {
    let p = p_polynomial(lie_type, n)?;
    Ok(p.compose(&GrowthPoly::from_i64(&[0, 2, -1])))
}

/// First `max_degree + 1` coefficients of `1 / q`.
pub fn monoid_counts(q: &GrowthPoly, max_degree: usize) -> Result<Vec<BigInt>> {
    let q0 = q.coeff(0);
    if q0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !q0.is_one() {
        return Err(Error::NotApplicable(format!("constant term {q0} is not 1")));
    }
    let mut out: Vec<BigInt> = Vec::with_capacity(max_degree + 1);
    out.push(BigInt::one());
    for m in 1..=max_degree {
        let mut acc = BigInt::zero();
        for k in 1..=m.min(q.coeffs.len().saturating_sub(1)) {
            acc -= &q.coeffs[k] * &out[m - k];
        }
        out.push(acc);
    }
    Ok(out)
}

fn quarter() -> BigRational {
    BigRational::new(1.into(), 4.into())
}

/// `P(1/4)` evaluated exactly.
pub fn quarter_evaluation(lie_type: LieType, n: usize) -> Result<BigRational> {
    Ok(p_polynomial(lie_type, n)?.eval_rational(&quarter()))
}

/// Closed form of `P(1/4)`: `(n+2)/2^{n+1}` for A, B, C and `(n+7)/2^{n+2}` for D.
pub fn quarter_closed_form(lie_type: LieType, n: usize) -> BigRational {
    let (num, exp) = match lie_type {
        LieType::D => (n + 7, n + 2),
        _ => (n + 2, n + 1),
    };
    BigRational::new(BigInt::from(num), BigInt::one() << exp)
}

/// Closed form of `P(A_n)` at `t = 3/16`, where `u = √(1-4t) = 1/2`.
pub fn path_closed_form_at_three_sixteenths(n: usize) -> BigRational {
    let u = BigRational::new(1.into(), 2.into());
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    let plus = (&one + &u) / &two;
    let minus = (&one - &u) / &two;
    let k = (n + 2) as i32;
    (num_traits::pow::Pow::pow(&plus, k) - num_traits::pow::Pow::pow(&minus, k)) / u
}

/// `2^{n+2} (4 + 2√3)^m`.
pub fn word_count_bound(n: usize, m: u32) -> QuadraticValue {
    let scale = QuadraticValue::integer(BigInt::one() << (n + 2));
    &scale * &QuadraticValue::growth_base().pow(m)
}

/// Two lower bounds on the diameter with respect to the standard generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiameterBound {
    /// Floor of a certified lower bound on the counting estimate, clamped at 0.
    pub lower_bound: u64,
    /// Diameter of the abelianization `(Z/p)^n` under `±1` steps.
    pub abelianization_bound: u64,
}

impl DiameterBound {
    pub fn best(&self) -> u64 {
        self.lower_bound.max(self.abelianization_bound)
    }
}

/// Certified bracket `lo <= ln x <= hi` for rational `x >= 1`.
pub fn ln_bracket(x: &BigRational) -> (BigRational, BigRational) {
    assert!(*x >= BigRational::one(), "ln_bracket needs x >= 1");
    let two = BigRational::from_integer(2.into());
    let mut k: u64 = 0;
    let mut y = x.clone();
    while y >= two {
        y /= &two;
        k += 1;
    }
    let (l2_lo, l2_hi) = atanh_bracket(&BigRational::new(1.into(), 3.into()));
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let (ly_lo, ly_hi) = atanh_bracket(&z);
    let kk = BigRational::from_integer(k.into());
    (
        &kk * &l2_lo * &two + ly_lo * &two,
        &kk * &l2_hi * &two + ly_hi * &two,
    )
}

// atanh z = Σ z^{2j+1}/(2j+1) for 0 <= z <= 1/3; tail bounded by a geometric series.
fn atanh_bracket(z: &BigRational) -> (BigRational, BigRational) {
    const TERMS: u32 = 40;
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = BigRational::zero();
    for j in 0..TERMS {
        sum += &power / BigRational::from_integer((2 * j + 1).into());
        power *= &z2;
    }
    let tail = &power / (BigRational::from_integer((2 * TERMS + 1).into()) * (BigRational::one() - &z2));
    let hi = &sum + tail;
    (sum, hi)
}

/// Rational bracket of `4 + 2√3` from Pell convergents of `√3`.
fn growth_base_bracket() -> (BigRational, BigRational) {
    // 191861² = 3·110771² - 2 and 262087² = 3·151316² + 1.
    let lo = BigRational::new(191861.into(), 110771.into());
    let hi = BigRational::new(262087.into(), 151316.into());
    let four = BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    (&four + &two * lo, four + two * hi)
}

/// Certified lower bound on
/// `[(n²/2) ln p - (n+3) ln 2 + (1/2) ln 3] / ln(4+2√3)`, as an exact rational.
pub fn counting_bound_rational(n: usize, p: u64) -> BigRational {
    let int = |v: u64| BigRational::from_integer(v.into());
    let half = BigRational::new(1.into(), 2.into());
    let (lp_lo, _) = ln_bracket(&int(p));
    let (_, l2_hi) = ln_bracket(&int(2));
    let (l3_lo, _) = ln_bracket(&int(3));
    let numerator =
        &half * int((n * n) as u64) * lp_lo - int(n as u64 + 3) * l2_hi + &half * l3_lo;
    let (base_lo, base_hi) = growth_base_bracket();
    // A negative numerator is bounded below by dividing by the smaller denominator.
    let base = if numerator.is_negative() { base_lo } else { base_hi };
    let (den_lo, den_hi) = ln_bracket(&base);
    let den = if numerator.is_negative() { den_lo } else { den_hi };
    numerator / den
}

/// Counting and abelianization lower bounds on the diameter.
pub fn diameter_lower_bound(lie_type: LieType, n: usize, p: u64) -> Result<DiameterBound> {
    check_rank(lie_type, n)?;
    if !crate::field::Modulus::new(p).is_ok() {
        return Err(Error::BadModulus(p));
    }
    let q = counting_bound_rational(n, p);
    let lower_bound = if q.is_negative() {
        0
    } else {
        q.to_integer().to_u64().unwrap_or(u64::MAX)
    };
    let abelianization_bound = n as u64 * (p / 2);
    Ok(DiameterBound { lower_bound, abelianization_bound })
}

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    #[serde(rename = "type")]
    pub lie_type: char,
    pub n: usize,
    pub p: u64,
    pub lower_bound: u64,
    pub abelianization_bound: u64,
}

pub const BOUNDS_CSV_HEADER: &str = "type,n,p,lower_bound,abelianization_bound";

impl BoundsRow {
    pub fn new(lie_type: LieType, n: usize, p: u64) -> Result<Self> {
        let b = diameter_lower_bound(lie_type, n, p)?;
        Ok(BoundsRow {
            lie_type: lie_type.label(),
            n,
            p,
            lower_bound: b.lower_bound,
            abelianization_bound: b.abelianization_bound,
        })
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.lie_type, self.n, self.p, self.lower_bound, self.abelianization_bound
        )
    }
}
