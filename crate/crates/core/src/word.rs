//! Words in the generators `ε_{α_i}(±1)` and their evaluation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chevalley::Realization;
use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::matrix::FpMatrix;
use crate::root_system::LieType;

/// One generator: `ε_{α_index}(sign)`, with `index` 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub positive: bool,
}

impl Letter {
    pub fn new(index: usize, positive: bool) -> Self {
        Letter { index, positive }
    }

    pub fn inverse(self) -> Self {
        Letter { index: self.index, positive: !self.positive }
    }

    /// `+i` or `-i`.
    pub fn signed(self) -> i64 {
        if self.positive {
            self.index as i64
        } else {
            -(self.index as i64)
        }
    }

    pub fn from_signed(v: i64) -> Result<Self> {
        if v == 0 {
            return Err(Error::Parse("letter 0 is not a generator".into()));
        }
        Ok(Letter { index: v.unsigned_abs() as usize, positive: v > 0 })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn append(&mut self, other: &Word) {
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn concat(mut self, other: &Word) -> Word {
        self.append(other);
        self
    }

    /// `ε_{α_index}(count)` as `|count|` copies of one signed letter.
    pub fn power(index: usize, count: i64) -> Word {
        let l = Letter::new(index, count > 0);
        Word { letters: vec![l; count.unsigned_abs() as usize] }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `w^k`; negative `k` repeats the inverse.
    pub fn repeat(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// The commutator word `a·b·a⁻¹·b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        let mut w = a.clone();
        w.append(b);
        w.append(&a.inverse());
        w.append(&b.inverse());
        w
    }

    /// `w⁻¹·c·w`.
    pub fn conjugate(c: &Word, w: &Word) -> Word {
        let mut out = w.inverse();
        out.append(c);
        out.append(w);
        out
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    pub fn from_signed(values: &[i64]) -> Result<Word> {
        values.iter().map(|&v| Letter::from_signed(v)).collect::<Result<Vec<_>>>().map(Word::from_letters)
    }

    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Left-to-right product of the generators.
    pub fn evaluate(&self, real: &Realization) -> Result<FpMatrix> {
        let rs = real.root_system();
        let n = rs.rank();
        if let Some(bad) = self.letters.iter().find(|l| l.index == 0 || l.index > n) {
            return Err(Error::OutOfRange(format!("letter {} outside 1..={n}", bad.signed())));
        }
        let md = real.modulus();
        let ids: Vec<usize> = (1..=n).map(|i| rs.simple_id(i)).collect();
        let mut m = real.identity();
        for l in &self.letters {
            let c = if l.positive { 1 } else { md.neg(1) };
            real.mul_root_right(&mut m, ids[l.index - 1], c);
        }
        Ok(m)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_signed().iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Wire format of a word: a header plus signed letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFile {
    #[serde(rename = "type")]
    pub lie_type: LieType,
    pub n: usize,
    pub p: u64,
    pub word: Vec<i64>,
}

impl WordFile {
    pub fn new(lie_type: LieType, n: usize, modulus: Modulus, word: &Word) -> Self {
        WordFile { lie_type, n, p: modulus.value(), word: word.to_signed() }
    }

    pub fn to_word(&self) -> Result<Word> {
        let w = Word::from_signed(&self.word)?;
        if w.max_index() > self.n {
            return Err(Error::OutOfRange(format!("letter index {} exceeds rank {}", w.max_index(), self.n)));
        }
        Ok(w)
    }
}
