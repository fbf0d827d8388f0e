//! Arithmetic in the prime field Z/pZ with residues kept in `[0, p)`.

use crate::error::{Error, Result};

/// An odd prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

/// Reference prime used when recognizing structure constants.
pub const REFERENCE_PRIME: u64 = 10007;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Modulus {
    /// Accepts odd primes below 2^31 so that products fit in a `u64`.
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Modulus(p))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 - 2)
    }

    pub fn half(self) -> u64 {
        self.0.div_ceil(2)
    }

    /// Representative in `(-p/2, p/2)`.
    pub fn lift_symmetric(self, a: u64) -> i64 {
        let a = a % self.0;
        if a > self.0 / 2 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }

    /// Residue of a rational `num / den` with `den` prime to p.
    pub fn from_ratio(self, num: i64, den: i64) -> u64 {
        let n = self.reduce(num);
        let d = self.reduce(den);
        self.mul(n, self.inv(d))
    }
}
