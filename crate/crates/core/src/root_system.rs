//! Positive roots of the classical types and the per-row decomposition of
//! the positive system.
//!
//! Roots are coefficient vectors over the simple roots `α_1, …, α_n`;
//! simple roots are indexed from 1 in every public signature, with the
//! `D_n` fork at `α_{n-1}`, `α_n`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::chevalley::StructureConstants;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
}

impl LieType {
    pub fn min_rank(self) -> usize {
        match self {
            LieType::A => 1,
            LieType::B | LieType::C => 2,
            LieType::D => 3,
        }
    }

    pub fn label(self) -> char {
        match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
        }
    }

    pub fn all() -> [LieType; 4] {
        [LieType::A, LieType::B, LieType::C, LieType::D]
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(LieType::A),
            "B" | "b" => Ok(LieType::B),
            "C" | "c" => Ok(LieType::C),
            "D" | "d" => Ok(LieType::D),
            other => Err(Error::UnknownType(other.to_string())),
        }
    }
}

/// A positive root written in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    coeffs: Vec<u32>,
}

impl Root {
    pub fn new(coeffs: Vec<u32>) -> Self {
        Root { coeffs }
    }

    /// Sum of `alpha_lo..=alpha_hi` (1-based, inclusive) in rank `n`.
    fn interval(n: usize, lo: usize, hi: usize) -> Vec<u32> {
        let mut c = vec![0; n];
        for x in c.iter_mut().take(hi).skip(lo - 1) {
            *x += 1;
        }
        c
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `α_j`, 1-based.
    pub fn coeff(&self, j: usize) -> u32 {
        self.coeffs[j - 1]
    }

    pub fn height(&self) -> u32 {
        self.coeffs.iter().sum()
    }

    /// 1-based index of the first simple root with nonzero coefficient.
    pub fn leading_index(&self) -> usize {
        self.coeffs.iter().position(|&c| c > 0).map(|x| x + 1).unwrap_or(0)
    }

    /// `self > other` in the root order: the difference is a nonzero
    /// nonnegative combination of simple roots.
    pub fn dominates(&self, other: &Root) -> bool {
        self != other && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b)
    }

    pub fn is_simple(&self) -> bool {
        self.height() == 1
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if c > 1 {
                write!(f, "{c}")?;
            }
            write!(f, "a{}", j + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The positive roots of one classical type and rank.
#[derive(Debug, Clone)]
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
}

impl RootSystem {
    /// Enumerates the positive roots family by family:
    ///
    /// | root | parameters | types |
    /// |------|------------|-------|
    /// | `Σ_{j=i}^k α_j` | `1 ≤ i ≤ k ≤ n` | all (not `α_{n-1}+α_n` in D) |
    /// | `Σ_{j=i}^n α_j + Σ_{j=k}^n α_j` | `i < k ≤ n` | B |
    /// | `Σ_{j=i}^n α_j + Σ_{j=k}^{n-1} α_j` | `i ≤ k < n` | C |
    /// | `Σ_{j=i}^{n-2} α_j + α_n` | `i ≤ n-2` | D |
    /// | `Σ_{j=i}^n α_j + Σ_{j=k}^{n-2} α_j` | `i < k ≤ n-2` | D |
    pub fn new(lie_type: LieType, rank: usize) -> Result<Self> {
        let min = lie_type.min_rank();
        if rank < min {
            return Err(Error::UnsupportedRank { label: lie_type.label(), rank, min });
        }
        let n = rank;
        let add = |a: Vec<u32>, b: Vec<u32>| -> Vec<u32> { a.iter().zip(&b).map(|(x, y)| x + y).collect() };
        let mut coeffs: Vec<Vec<u32>> = Vec::new();
        for i in 1..=n {
            for k in i..=n {
                if lie_type == LieType::D && i == n - 1 && k == n {
                    continue;
                }
                coeffs.push(Root::interval(n, i, k));
            }
        }
        match lie_type {
            LieType::A => {}
            LieType::B => {
                for i in 1..=n {
                    for k in i + 1..=n {
                        coeffs.push(add(Root::interval(n, i, n), Root::interval(n, k, n)));
                    }
                }
            }
            LieType::C => {
                for i in 1..=n {
                    for k in i..n {
                        coeffs.push(add(Root::interval(n, i, n), Root::interval(n, k, n - 1)));
                    }
                }
            }
            LieType::D => {
                for i in 1..=n - 2 {
                    let mut c = Root::interval(n, i, n - 2);
                    c[n - 1] += 1;
                    coeffs.push(c);
                }
                for i in 1..=n - 2 {
                    for k in i + 1..=n - 2 {
                        coeffs.push(add(Root::interval(n, i, n), Root::interval(n, k, n - 2)));
                    }
                }
            }
        }
        let mut roots: Vec<Root> = coeffs.into_iter().map(Root::new).collect();
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coeffs.cmp(&a.coeffs)));
        roots.dedup();
        let index = roots.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();
        Ok(RootSystem { lie_type, rank, roots, index })
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Side length of the defining matrix representation.
    pub fn matrix_dim(&self) -> usize {
        match self.lie_type {
            LieType::A => self.rank + 1,
            LieType::B => 2 * self.rank + 1,
            LieType::C | LieType::D => 2 * self.rank,
        }
    }

    /// Positive roots sorted by height (ties broken so that `α_1` comes first).
    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, id: usize) -> &Root {
        &self.roots[id]
    }

    pub fn index_of(&self, root: &Root) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn contains(&self, root: &Root) -> bool {
        self.index.contains_key(root)
    }

    /// `α_i`, 1-based.
    pub fn simple_root(&self, i: usize) -> Root {
        Root::interval(self.rank, i, i).into()
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (1..=self.rank).map(|i| self.simple_root(i)).collect()
    }

    /// Id of `α_i`, 1-based.
    pub fn simple_id(&self, i: usize) -> usize {
        self.index[&self.simple_root(i)]
    }

    /// `i·a + j·b` when it is a positive root.
    pub fn root_sum(&self, a: &Root, b: &Root, i: u32, j: u32) -> Option<Root> {
        let c: Vec<u32> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| i * x + j * y).collect();
        let r = Root::new(c);
        self.contains(&r).then_some(r)
    }

    /// Roots `α` with `α = α_i` or `α > α_i` and no `j < i` with `α > α_j`.
    pub fn circ_roots(&self, i: usize) -> Result<Vec<usize>> {
        self.check_row(i)?;
        Ok((0..self.roots.len()).filter(|&id| self.roots[id].leading_index() == i).collect())
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::RowOutOfRange { index: i, rank: self.rank })
        } else {
            Ok(())
        }
    }

    /// Whether the root subgroups of `α_i` and `α_j` commute, i.e. the Dynkin
    /// vertices are not joined.
    pub fn simple_roots_commute(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        self.root_sum(&self.simple_root(i), &self.simple_root(j), 1, 1).is_none()
    }
}

impl From<Vec<u32>> for Root {
    fn from(c: Vec<u32>) -> Self {
        Root::new(c)
    }
}

/// Ordered row data: `Φ°ⁱ`, the height-ordered `Φⁱ = β_1 < … < β_{r_i}`, the
/// step maps `f`, `m`, the kernel root and prefix products `d_l`.
#[derive(Debug, Clone)]
pub struct RowPlan {
    pub lie_type: LieType,
    pub rank: usize,
    pub row_index: usize,
    pub circ_roots: Vec<usize>,
    /// `β_1, …, β_{r_i}` as root ids.
    pub ordered_roots: Vec<usize>,
    /// `f(j)` for `j = 1..=r_i` (1-based simple indices); entry 0 is `f(1) = i`.
    pub f: Vec<usize>,
    pub m: Vec<u32>,
    pub kernel_root: Option<usize>,
    pub long_root: Option<usize>,
    /// `c_{1,m(j)}` for `j = 1..=r_i`, with entry 0 set to 1.
    pub step_constants: Vec<Rational64>,
    /// `d_l = Π_{j=2}^l c_{1,m(j)}`; entry 0 is `d_1 = 1`.
    pub d: Vec<Rational64>,
    /// Kernel generation constant `d` (absent without a kernel).
    pub kernel_d: Option<Rational64>,
}

impl RowPlan {
    pub fn build(rs: &RootSystem, sc: &StructureConstants, i: usize) -> Result<Self> {
        let circ_roots = rs.circ_roots(i)?;
        let n = rs.rank();
        let lt = rs.lie_type();
        let long_root = (lt == LieType::C).then(|| {
            let mut c = Root::interval(n, i, n - 1);
            for x in c.iter_mut() {
                *x *= 2;
            }
            c[n - 1] += 1;
            rs.index_of(&Root::new(c)).expect("gamma_i is a root")
        });
        let kernel_root = if circ_roots.len() <= 1 {
            None
        } else {
            match lt {
                LieType::A => None,
                LieType::B => rs.index_of(&Root::interval(n, i, n).into()),
                LieType::C => long_root,
                LieType::D => {
                    let mut c = Root::interval(n, i, n - 2);
                    c[n - 1] += 1;
                    rs.index_of(&Root::new(c))
                }
            }
        };
        if let Some(k) = kernel_root {
            debug_assert!(circ_roots.contains(&k));
        }
        let mut ordered: Vec<usize> = circ_roots.iter().copied().filter(|&id| Some(id) != kernel_root).collect();
        ordered.sort_by_key(|&id| rs.root(id).height());
        let mut f = vec![i];
        let mut m = vec![1];
        let mut step_constants = vec![Rational64::one()];
        let mut d = vec![Rational64::one()];
        for j in 1..ordered.len() {
            let prev = rs.root(ordered[j - 1]);
            let cur = rs.root(ordered[j]);
            let diff: Vec<i64> = cur.coeffs.iter().zip(&prev.coeffs).map(|(a, b)| *a as i64 - *b as i64).collect();
            let nz: Vec<usize> = (0..n).filter(|&x| diff[x] != 0).collect();
            if nz.len() != 1 || !(1..=2).contains(&diff[nz[0]]) {
                return Err(Error::Mismatch(format!("row {i}: {cur} - {prev} is not a multiple of a simple root")));
            }
            let fj = nz[0] + 1;
            let mj = diff[nz[0]] as u32;
            let c = sc.coefficient(ordered[j - 1], rs.simple_id(fj), 1, mj).ok_or_else(|| {
                Error::Mismatch(format!("row {i}: no structure constant for step {j}"))
            })?;
            f.push(fj);
            m.push(mj);
            step_constants.push(c);
            d.push(d[j - 1] * c);
        }
        let mut plan = RowPlan {
            lie_type: lt,
            rank: n,
            row_index: i,
            circ_roots,
            ordered_roots: ordered,
            f,
            m,
            kernel_root,
            long_root,
            step_constants,
            d,
            kernel_d: None,
        };
        plan.kernel_d = plan.compute_kernel_d(rs, sc);
        Ok(plan)
    }

    fn compute_kernel_d(&self, rs: &RootSystem, sc: &StructureConstants) -> Option<Rational64> {
        let kernel = self.kernel_root?;
        let h = self.middle();
        let n = self.rank;
        let an = rs.simple_id(n);
        let two = Rational64::from_integer(2);
        match self.lie_type {
            LieType::A => None,
            LieType::B => {
                let c11 = sc.coefficient(self.beta(h - 1), an, 1, 1)?;
                debug_assert_eq!(sc.root_of(self.beta(h - 1), an, 1, 1), Some(kernel));
                Some(two * self.d_at(h - 1) * c11)
            }
            LieType::C => {
                let c21 = sc.coefficient(self.beta(h - 1), an, 2, 1)?;
                Some(two * self.d_at(h - 1) * self.d_at(h - 1) * c21)
            }
            LieType::D => {
                let c11 = sc.coefficient(self.beta(h - 2), an, 1, 1)?;
                Some(self.d_at(h - 2) * c11)
            }
        }
    }

    /// `r_i = |Φⁱ|`.
    pub fn r(&self) -> usize {
        self.ordered_roots.len()
    }

    /// `n - i + 1`, the position of the middle of the row.
    pub fn middle(&self) -> usize {
        self.rank - self.row_index + 1
    }

    /// `β_l`, 1-based.
    pub fn beta(&self, l: usize) -> usize {
        self.ordered_roots[l - 1]
    }

    /// `f(l)`, 1-based.
    pub fn f_at(&self, l: usize) -> usize {
        self.f[l - 1]
    }

    pub fn m_at(&self, l: usize) -> u32 {
        self.m[l - 1]
    }

    /// `d_l`, 1-based.
    pub fn d_at(&self, l: usize) -> Rational64 {
        self.d[l - 1]
    }

    /// The factor acquired at step `l` when `ε_{β_{l-1}}(s)` is conjugated as
    /// `x⁻¹·y·x` with `x = ε_{α_{f(l)}}(t)`: the new coordinate is
    /// `(-1)^{m+1} c_{1,m} s t^m`.
    pub fn conjugation_factor(&self, l: usize) -> Rational64 {
        let c = self.step_constants[l - 1];
        if self.m_at(l).is_multiple_of(2) {
            -c
        } else {
            c
        }
    }

    /// Prefix product of conjugation factors, `D_l = ±d_l`.
    pub fn conj_prefix(&self, l: usize) -> Rational64 {
        (2..=l).fold(Rational64::one(), |acc, j| acc * self.conjugation_factor(j))
    }

    /// True when the row is a single simple root subgroup with nothing to
    /// quotient (last row of B and C; last two rows of D).
    pub fn is_simple_row(&self) -> bool {
        self.circ_roots.len() == 1
    }

    pub fn heights(&self, rs: &RootSystem) -> Vec<u32> {
        self.ordered_roots.iter().map(|&id| rs.root(id).height()).collect()
    }
}

/// Whether `|x|` is a power of two.
pub fn is_power_of_two(x: Rational64) -> bool {
    let x = x.abs();
    let (n, d) = (*x.numer(), *x.denom());
    n > 0 && (n as u64).is_power_of_two() && (d as u64).is_power_of_two() && (n == 1 || d == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(lt: LieType, n: usize) -> usize {
        RootSystem::new(lt, n).unwrap().len()
    }

    #[test]
    fn root_counts() {
        for n in 1..=8 {
            assert_eq!(count(LieType::A, n), n * (n + 1) / 2);
        }
        for n in 2..=8 {
            assert_eq!(count(LieType::B, n), n * n);
            assert_eq!(count(LieType::C, n), n * n);
        }
        for n in 3..=8 {
            assert_eq!(count(LieType::D, n), n * n - n);
        }
        assert_eq!(count(LieType::D, 5), 20);
    }

    #[test]
    fn rank_floors() {
        assert!(RootSystem::new(LieType::A, 0).is_err());
        assert!(RootSystem::new(LieType::B, 1).is_err());
        assert!(RootSystem::new(LieType::C, 1).is_err());
        let err = RootSystem::new(LieType::D, 2).unwrap_err();
        assert!(err.to_string().contains("at least 3"));
        assert!(RootSystem::new(LieType::D, 3).is_ok());
    }

    #[test]
    fn simple_roots_are_height_one() {
        for lt in LieType::all() {
            let rs = RootSystem::new(lt, 5).unwrap();
            let h1: Vec<_> = rs.positive_roots().iter().filter(|r| r.height() == 1).cloned().collect();
            assert_eq!(h1.len(), 5);
            for r in rs.simple_roots() {
                assert!(h1.contains(&r));
            }
        }
    }

    #[test]
    fn rank_one() {
        let rs = RootSystem::new(LieType::A, 1).unwrap();
        assert_eq!(rs.positive_roots(), &[Root::new(vec![1])]);
    }

    #[test]
    fn root_sums() {
        let a3 = RootSystem::new(LieType::A, 3).unwrap();
        let (a1, a2, a3r) = (a3.simple_root(1), a3.simple_root(2), a3.simple_root(3));
        assert_eq!(a3.root_sum(&a1, &a2, 1, 1), Some(Root::new(vec![1, 1, 0])));
        assert_eq!(a3.root_sum(&a1, &a3r, 1, 1), None);
        assert!(a3.contains(&Root::new(vec![1, 1, 1])));
        let c2 = RootSystem::new(LieType::C, 2).unwrap();
        let g = c2.root_sum(&c2.simple_root(1), &c2.simple_root(2), 2, 1);
        assert_eq!(g, Some(Root::new(vec![2, 1])));
    }

    #[test]
    fn circ_roots_examples() {
        let a3 = RootSystem::new(LieType::A, 3).unwrap();
        let row1: Vec<Root> = a3.circ_roots(1).unwrap().into_iter().map(|id| a3.root(id).clone()).collect();
        assert_eq!(row1, vec![Root::new(vec![1, 0, 0]), Root::new(vec![1, 1, 0]), Root::new(vec![1, 1, 1])]);
        assert_eq!(a3.circ_roots(2).unwrap().len(), 2);
        assert_eq!(a3.circ_roots(3).unwrap().len(), 1);
        assert!(a3.circ_roots(4).is_err());

        let d5 = RootSystem::new(LieType::D, 5).unwrap();
        let row2: Vec<Root> = d5.circ_roots(2).unwrap().into_iter().map(|id| d5.root(id).clone()).collect();
        let expected = [
            vec![0, 1, 0, 0, 0],
            vec![0, 1, 1, 0, 0],
            vec![0, 1, 1, 1, 0],
            vec![0, 1, 1, 0, 1],
            vec![0, 1, 1, 1, 1],
            vec![0, 1, 2, 1, 1],
        ];
        assert_eq!(row2.len(), 6);
        for e in expected {
            assert!(row2.contains(&Root::new(e)));
        }
    }

    #[test]
    fn circ_rows_partition_the_positive_roots() {
        for lt in LieType::all() {
            for n in lt.min_rank()..=7 {
                let rs = RootSystem::new(lt, n).unwrap();
                let total: usize = (1..=n).map(|i| rs.circ_roots(i).unwrap().len()).sum();
                assert_eq!(total, rs.len());
            }
        }
    }

    #[test]
    fn circ_rows_are_abelian_except_long_root() {
        for lt in LieType::all() {
            for n in lt.min_rank()..=6 {
                let rs = RootSystem::new(lt, n).unwrap();
                for i in 1..=n {
                    let row = rs.circ_roots(i).unwrap();
                    let mut sums = Vec::new();
                    for &a in &row {
                        for &b in &row {
                            if let Some(s) = rs.root_sum(rs.root(a), rs.root(b), 1, 1) {
                                sums.push(s);
                            }
                        }
                    }
                    if lt == LieType::C {
                        let mut g = Root::interval(n, i, n - 1);
                        g.iter_mut().for_each(|x| *x *= 2);
                        g[n - 1] += 1;
                        let g = Root::new(g);
                        assert!(sums.iter().all(|s| *s == g));
                        for &a in &row {
                            let ra = rs.root(a);
                            if *ra != g {
                                let diff: Vec<u32> = g.coeffs().iter().zip(ra.coeffs()).map(|(x, y)| x - y).collect();
                                assert!(row.iter().any(|&b| rs.root(b).coeffs() == diff.as_slice()));
                            }
                        }
                    } else {
                        assert!(sums.is_empty(), "{lt}{n} row {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn dynkin_commutation() {
        let d5 = RootSystem::new(LieType::D, 5).unwrap();
        assert!(!d5.simple_roots_commute(3, 5));
        assert!(!d5.simple_roots_commute(3, 4));
        assert!(d5.simple_roots_commute(4, 5));
        assert!(d5.simple_roots_commute(1, 3));
    }
}
