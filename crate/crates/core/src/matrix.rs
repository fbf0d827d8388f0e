//! Dense square matrices over Z/pZ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u64,
    dim: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn identity(modulus: Modulus, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        FpMatrix { p: modulus.value(), dim, entries }
    }

    pub fn zero(modulus: Modulus, dim: usize) -> Self {
        FpMatrix { p: modulus.value(), dim, entries: vec![0; dim * dim] }
    }

    /// Builds from row-major residues (reduced mod p).
    pub fn from_rows(modulus: Modulus, dim: usize, values: &[i64]) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::Mismatch(format!("expected {} entries, got {}", dim * dim, values.len())));
        }
        let entries = values.iter().map(|&v| modulus.reduce(v)).collect();
        Ok(FpMatrix { p: modulus.value(), dim, entries })
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.p).expect("validated at construction")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.dim + c] = v % self.p;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| self.get(r, c) == u64::from(r == c)))
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        (0..self.dim).all(|r| (0..=r).all(|c| self.get(r, c) == u64::from(r == c)))
    }

    fn check_compatible(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p || self.dim != other.dim {
            return Err(Error::Mismatch(format!(
                "({}x{} mod {}) vs ({}x{} mod {})",
                self.dim, self.dim, self.p, other.dim, other.dim, other.p
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_compatible(other)?;
        let n = self.dim;
        let p = self.p;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j];
                    if b != 0 {
                        out[i * n + j] = (out[i * n + j] + a * b) % p;
                    }
                }
            }
        }
        Ok(FpMatrix { p, dim: n, entries: out })
    }

    pub fn transpose(&self) -> FpMatrix {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    /// Inverse of a unit upper triangular matrix by back-substitution.
    pub fn inverse_unipotent(&self) -> Result<FpMatrix> {
        if !self.is_unit_upper_triangular() {
            return Err(Error::NotInGroup("matrix is not unit upper triangular".into()));
        }
        let n = self.dim;
        let m = self.modulus();
        let mut inv = FpMatrix::identity(m, n);
        // Column j of the inverse solves U x = e_j from the bottom up.
        for j in 0..n {
            for i in (0..j).rev() {
                let mut acc = 0u64;
                for k in i + 1..=j {
                    acc = m.add(acc, m.mul(self.get(i, k), inv.get(k, j)));
                }
                inv.entries[i * n + j] = m.neg(acc);
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination mod p.
    pub fn determinant(&self) -> u64 {
        let n = self.dim;
        let m = self.modulus();
        let mut a = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = m.neg(det);
            }
            let pv = a[col * n + col];
            det = m.mul(det, pv);
            let pinv = m.inv(pv);
            for r in col + 1..n {
                let factor = m.mul(a[r * n + col], pinv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    a[r * n + c] = m.sub(a[r * n + c], m.mul(factor, a[col * n + c]));
                }
            }
        }
        det
    }

    /// Row-major entries lifted to `(-p/2, p/2)`.
    pub fn to_signed_rows(&self) -> Vec<Vec<i64>> {
        let m = self.modulus();
        (0..self.dim).map(|r| (0..self.dim).map(|c| m.lift_symmetric(self.get(r, c))).collect()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.dim).map(|r| self.entries[r * self.dim..(r + 1) * self.dim].to_vec()).collect()
    }
}

/// Group commutator `a·b·a⁻¹·b⁻¹` of unit upper triangular matrices.
pub fn commutator(a: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    a.check_compatible(b)?;
    let ai = a.inverse_unipotent()?;
    let bi = b.inverse_unipotent()?;
    a.mul(b)?.mul(&ai)?.mul(&bi)
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix({}x{} mod {})", self.dim, self.dim, self.p)?;
        for r in self.to_signed_rows() {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}
