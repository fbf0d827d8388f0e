//! Constructive words for elements of `U`.
//!
//! Row `i` is handled in the abelian quotient `U_i = U_i'/V_i` first: the
//! simple root by repetition, heights `2..=k` by square-root splitting into
//! commutators, and heights above `k` by a binary expansion into `θ`-word
//! pairs. The kernel coordinate is corrected last by an exact word in `V_i`.
//!
//! Coefficients below are "effective": conjugating `ε_{β_{l-1}}(s)` as
//! `x⁻¹·y·x` with `x = ε_{α_{f(l)}}(t)` produces `e_l·s·t^{m(l)}` at `β_l`,
//! where `e_l = (-1)^{m(l)+1} c_{1,m(l)}`, and `E_l = Π_{j≤l} e_j`. In rows
//! without an `m = 2` step `E_l = d_l`.

use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use crate::chevalley::{RowCoordinates, UnipotentGroup};
use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::matrix::FpMatrix;
use crate::root_system::{LieType, RootSystem, RowPlan};
use crate::word::Word;

/// `⌊log₂ p⌋`.
pub fn floor_log2(p: u64) -> usize {
    63 - p.leading_zeros() as usize
}

fn isqrt(s: u64) -> u64 {
    let mut t = (s as f64).sqrt() as u64;
    while t * t > s {
        t -= 1;
    }
    while (t + 1) * (t + 1) <= s {
        t += 1;
    }
    t
}

fn residue(md: Modulus, c: Rational64) -> u64 {
    md.from_ratio(*c.numer(), *c.denom())
}

/// Last position of the ascending run `β_1 … β_{n-i+1}`, capped by `r_i`.
fn middle(plan: &RowPlan) -> usize {
    plan.middle().min(plan.r())
}

/// `ε_{α_i}(s)` as `|s|` copies of `ε_{α_i}(±1)`, `s` lifted to `(-p/2, p/2)`.
pub fn simple_word(md: Modulus, index: usize, s: u64) -> Word {
    Word::power(index, md.lift_symmetric(s))
}

/// `θ_{k,r}` with an arbitrary word standing for `ε_{β_k}(·)`: the letters
/// `ε_{f(k+r-1)}(-s_r) … ε_{f(k+1)}(-s_2) · base · ε_{f(k+1)}(s_2) … ε_{f(k+r-1)}(s_r)`.
pub fn theta_with_base(plan: &RowPlan, k: usize, base: &Word, conj: &[i64]) -> Result<Word> {
    let top = k + conj.len();
    if k == 0 || top > plan.r() {
        return Err(Error::OutOfRange(format!("theta_({k},{}) exceeds r_i = {}", conj.len() + 1, plan.r())));
    }
    let mut w = Word::new();
    for (q, &s) in conj.iter().enumerate().rev() {
        w.append(&Word::power(plan.f_at(k + 1 + q), -s));
    }
    w.append(base);
    for (q, &s) in conj.iter().enumerate() {
        w.append(&Word::power(plan.f_at(k + 1 + q), s));
    }
    Ok(w)
}

/// `θ_{1,r}(s_1, …, s_r)` with `s_1` realized on `α_i`.
pub fn theta_simple(md: Modulus, plan: &RowPlan, s: &[i64]) -> Result<Word> {
    let base = simple_word(md, plan.row_index, md.reduce(s[0]));
    theta_with_base(plan, 1, &base, &s[1..])
}

/// `θ_{k,r}(s_1, …, s_r)`, where the base `ε_{β_k}(s_1)` is realized by the
/// simple (k = 1) or medium-height construction.
pub fn theta_word(g: &UnipotentGroup, plan: &RowPlan, k: usize, s: &[u64]) -> Result<Word> {
    let md = g.modulus();
    if s.is_empty() {
        return Err(Error::OutOfRange("theta needs at least one scalar".into()));
    }
    let base = if k == 1 {
        simple_word(md, plan.row_index, s[0])
    } else {
        if k > plan.r() {
            return Err(Error::OutOfRange(format!("theta start {k} exceeds r_i = {}", plan.r())));
        }
        let e = residue(md, plan.conj_prefix(k));
        medium_word(md, plan, k, md.mul(s[0], md.inv(e)))
    };
    let conj: Vec<i64> = s[1..].iter().map(|&x| md.lift_symmetric(x)).collect();
    theta_with_base(plan, k, &base, &conj)
}

/// Quotient coordinates of `θ_{k,r}(s_1, …, s_r)` at `β_1 … β_{r_i}` when
/// the positions `k..k+r-1` do not straddle the middle of the row.
pub fn theta_coordinates(md: Modulus, plan: &RowPlan, k: usize, s: &[u64]) -> Vec<u64> {
    let mut t = vec![0u64; plan.r()];
    let mut acc = s[0] % md.value();
    t[k - 1] = acc;
    for (q, &sj) in s.iter().enumerate().skip(1) {
        let l = k + q;
        let e = residue(md, plan.conjugation_factor(l));
        acc = md.mul(acc, md.mul(e, md.pow(sj, plan.m_at(l) as u64)));
        t[l - 1] = acc;
    }
    t
}

/// `θ_{1,l}(a)·θ_{1,l-1}(-a_1, a_2, …, a_{l-1})`, which is `ε_{β_l}` of
/// `E_l·a_1·Π_{q=2}^l a_q^{m(q)}` in the quotient, for `l ≤ n-i+1`.
pub fn pair_word(md: Modulus, plan: &RowPlan, a: &[i64]) -> Result<Word> {
    let l = a.len();
    if l == 0 || l > middle(plan) {
        return Err(Error::OutOfRange(format!("pair word of length {l} beyond the middle of row {}", plan.row_index)));
    }
    if l == 1 {
        return Ok(Word::power(plan.row_index, a[0]));
    }
    let first = theta_simple(md, plan, a)?;
    let mut b = a[..l - 1].to_vec();
    b[0] = -b[0];
    Ok(first.concat(&theta_simple(md, plan, &b)?))
}

/// A word for `ε_{β_l}(E_l)` in the quotient, at most `8l` letters.
pub fn generator(md: Modulus, plan: &RowPlan, l: usize) -> Result<Word> {
    let h = middle(plan);
    if l == 0 || l > plan.r() {
        return Err(Error::OutOfRange(format!("position {l} outside 1..={}", plan.r())));
    }
    if l <= h {
        return pair_word(md, plan, &vec![1; l]);
    }
    let base = generator(md, plan, h)?;
    let first = theta_with_base(plan, h, &base, &vec![1; l - h])?;
    let second = theta_with_base(plan, h, &base.inverse(), &vec![1; l - h - 1])?;
    Ok(first.concat(&second))
}

/// Exponents `a_1 … a_h ∈ {1, 2}` with `Π a_q^{m(q)} = 2^e` over the first
/// `n-i+1` positions, filling from the left.
pub fn power_vector(plan: &RowPlan, e: usize) -> Option<Vec<i64>> {
    let h = middle(plan);
    let mh = plan.m_at(h) as usize;
    let mut a = vec![1i64; h];
    let low = if e < h {
        e
    } else if e >= mh && e - mh < h {
        a[h - 1] = 2;
        e - mh
    } else {
        return None;
    };
    for x in a.iter_mut().take(low) {
        *x = 2;
    }
    Some(a)
}

/// Largest `e` that [`power_vector`] supports.
pub fn max_power(plan: &RowPlan) -> usize {
    let h = middle(plan);
    h - 1 + plan.m_at(h) as usize
}

/// A word for `ε_{β_l}(s·E_l)` in the quotient with `s ∈ [0, p)`, by the
/// split `s = t² + (s - t²)`, `t = ⌊√s⌋`, into two commutators.
pub fn medium_word(md: Modulus, plan: &RowPlan, l: usize, s: u64) -> Word {
    if l == 1 {
        return simple_word(md, plan.row_index, s);
    }
    let gen = generator(md, plan, l - 1).expect("position in range");
    let f = plan.f_at(l);
    let t = isqrt(s);
    let r = s - t * t;
    let comm = |x: i64, y: i64| {
        if x == 0 || y == 0 {
            Word::new()
        } else {
            Word::commutator(&gen.repeat(x), &Word::power(f, y))
        }
    };
    let (t, r) = (t as i64, r as i64);
    if plan.m_at(l) == 1 {
        comm(t, t).concat(&comm(1, r))
    } else {
        comm(-1, t).concat(&comm(-r, 1))
    }
}

/// A word for `ε_{β_l}(s·d_l)` in `U_i`, `2 ≤ l ≤ r_i`.
pub fn medium_root_word(md: Modulus, plan: &RowPlan, l: usize, s: u64) -> Result<Word> {
    if l < 2 || l > plan.r() {
        return Err(Error::OutOfRange(format!("medium position {l} outside 2..={}", plan.r())));
    }
    let w = medium_word(md, plan, l, s % md.value());
    Ok(if plan.d_at(l) == plan.conj_prefix(l) { w } else { w.inverse() })
}

fn bits_for_layer(md: Modulus, plan: &RowPlan, k: usize, values: &[u64], j: usize) -> Vec<u8> {
    (1..=plan.r())
        .map(|l| {
            if l <= k {
                return 0;
            }
            let two_e = md.mul(2, residue(md, plan.conj_prefix(l)));
            let w = md.mul(values[l - 1], md.inv(two_e));
            ((w >> j) & 1) as u8
        })
        .collect()
}

/// One binary layer: `Π_{l>k} ε_{β_l}(2^{j+1} E_l b(l, j))` in the quotient.
pub fn tail_layer(md: Modulus, plan: &RowPlan, j: usize, bits: &[u8]) -> Result<Word> {
    let h = middle(plan);
    let r = plan.r();
    let mut w = Word::new();
    // Positions up to the middle: θ_{1,L}(a_1)·θ_{1,L}(a_2).
    if let Some(last) = (1..=h).rev().find(|&l| bits[l - 1] == 1) {
        if last <= j {
            return Err(Error::Mismatch(format!("bit layer {j} reaches position {last}")));
        }
        let mut a1 = vec![1i64; last];
        let mut a2 = vec![1i64; last];
        for q in 1..=j.min(last) {
            a1[q - 1] = 2;
            a2[q - 1] = if q == 1 { -2 } else { 2 };
        }
        // Prefix of a_2 in units of 2^j: -ρ_q with ρ_q = 1 - 2b_q.
        let rho = |q: usize| if q <= j { 1 } else { 1 - 2 * bits[q - 1] as i64 };
        for q in j + 1..=last {
            if j == 0 && q == 1 {
                a2[0] = -rho(1);
            } else if plan.m_at(q) == 1 {
                a2[q - 1] = rho(q) * rho(q - 1);
            }
        }
        w.append(&theta_simple(md, plan, &a1)?);
        w.append(&theta_simple(md, plan, &a2)?);
        // An m = 2 step squares its conjugator, so the top position follows
        // its predecessor; add the missing copy when they disagree.
        if plan.m_at(last) == 2 && last > 1 && rho(last) != rho(last - 1) {
            let a = power_vector(plan, j + 1).ok_or_else(|| Error::Mismatch("no power vector".into()))?;
            w.append(&pair_word(md, plan, &a)?);
        }
    }
    // Positions past the middle: θ_{h,L-h+1}(±t; a) with t = 2^e E_h.
    if let Some(last) = (h + 1..=r).rev().find(|&l| bits[l - 1] == 1) {
        let e = j.min(max_power(plan));
        let zone = j - e;
        let base = pair_word(md, plan, &power_vector(plan, e).expect("e within range"))?;
        let len = last - h;
        let mut a1 = vec![1i64; len];
        let mut a2 = vec![1i64; len];
        let rho = |q: usize| if q - h <= zone { 1 } else { 1 - 2 * bits[q - 1] as i64 };
        for q in h + 1..=last {
            if q - h <= zone {
                a1[q - h - 1] = 2;
                a2[q - h - 1] = 2;
            } else {
                a2[q - h - 1] = rho(q) * rho(q - 1);
            }
        }
        w.append(&theta_with_base(plan, h, &base, &a1)?);
        w.append(&theta_with_base(plan, h, &base.inverse(), &a2)?);
    }
    Ok(w)
}

/// Word for `Π_{l>k} ε_{β_l}(values[l-1])` in the quotient, one binary
/// layer per bit `j = 0..=⌊log₂ p⌋`.
pub fn tail_word(md: Modulus, plan: &RowPlan, k: usize, values: &[u64]) -> Result<Word> {
    let mut w = Word::new();
    for j in 0..=floor_log2(md.value()) {
        let bits = bits_for_layer(md, plan, k, values, j);
        if bits.contains(&1) {
            w.append(&tail_layer(md, plan, j, &bits)?);
        }
    }
    Ok(w)
}

fn kernel_parts(plan: &RowPlan) -> Result<(usize, Rational64)> {
    if plan.kernel_root.is_none() {
        return Err(Error::NotApplicable(format!("row {} has no kernel", plan.row_index)));
    }
    let d = plan.kernel_d.expect("kernel rows carry d");
    let anchor = match plan.lie_type {
        LieType::B | LieType::C => plan.middle() - 1,
        LieType::D => plan.middle() - 2,
        LieType::A => unreachable!(),
    };
    Ok((anchor, d))
}

/// `ε_{β_l}(u·d_l)`, exact in `U_i'` for `l` below the middle.
fn scaled_generator(md: Modulus, plan: &RowPlan, l: usize, u: i64) -> Word {
    let g = generator(md, plan, l).expect("position in range");
    let sign = if plan.d_at(l) == plan.conj_prefix(l) { 1 } else { -1 };
    g.repeat(u * sign)
}

/// Square-root construction: `ε_β(s·d)` from commutators into the kernel.
fn kernel_word_sqrt(md: Modulus, plan: &RowPlan, s: u64) -> Result<Word> {
    let (anchor, _) = kernel_parts(plan)?;
    let n = plan.rank;
    let t = isqrt(s) as i64;
    let r = (s - isqrt(s) * isqrt(s)) as i64;
    let comm = |u: i64, v: i64| {
        if u == 0 || v == 0 {
            Word::new()
        } else {
            Word::commutator(&scaled_generator(md, plan, anchor, u), &Word::power(n, v))
        }
    };
    Ok(match plan.lie_type {
        LieType::B => comm(t, t).concat(&comm(-t, -t)).concat(&comm(1, r)).concat(&comm(-1, -r)),
        LieType::C => comm(t, 1).concat(&comm(-t, 1)).concat(&comm(1, r)).concat(&comm(-1, r)),
        LieType::D => comm(t, t).concat(&comm(1, r)),
        LieType::A => unreachable!(),
    })
}

/// Words whose product lies in `V_i`, with exponent vector `t` of length
/// `n-i+1`. In B and D this is a pair of `θ_{1,n-i+1}` words. In C such a
/// pair multiplies to 1, so the pair of commutators `[Y, x]·[Y⁻¹, x]` with
/// `Y = θ_{1,n-i}(t_1, …, t_{n-i})` and `x = ε_{α_n}(t_{n-i+1})` is used.
fn kernel_theta_pair(md: Modulus, plan: &RowPlan, t: &[i64]) -> Result<Word> {
    let h = t.len();
    let mut second = t.to_vec();
    second[0] = -second[0];
    match plan.lie_type {
        LieType::B => second[h - 1] = -second[h - 1],
        LieType::C => {
            let y = theta_simple(md, plan, &t[..h - 1])?;
            let x = Word::power(plan.rank, t[h - 1]);
            return Ok(Word::commutator(&y, &x).concat(&Word::commutator(&y.inverse(), &x)));
        }
        LieType::D => second[h - 1] = 0,
        LieType::A => unreachable!(),
    }
    Ok(theta_simple(md, plan, t)?.concat(&theta_simple(md, plan, &second)?))
}

/// Exponent vector for `2^e` times the unit pair.
fn kernel_power_vector(plan: &RowPlan, e: usize) -> Option<Vec<i64>> {
    let h = plan.middle();
    let mut t = vec![1i64; h];
    match plan.lie_type {
        LieType::B => {
            if e > h {
                return None;
            }
            t[..e].iter_mut().for_each(|x| *x = 2);
        }
        LieType::C => {
            let (pairs, odd) = (e / 2, e % 2 == 1);
            if pairs > h - 1 {
                return None;
            }
            t[..pairs].iter_mut().for_each(|x| *x = 2);
            if odd {
                t[h - 1] = 2;
            }
        }
        LieType::D => {
            t[h - 2] = 0;
            if e > h - 1 {
                return None;
            }
            let low = e.min(h - 2);
            t[..low].iter_mut().for_each(|x| *x = 2);
            if e == h - 1 {
                t[h - 1] = 2;
            }
        }
        LieType::A => return None,
    }
    Some(t)
}

/// Kernel coordinate of the unit pair `kernel_theta_pair(1, …, 1)`; equal
/// to `d` in every row.
pub fn binary_kernel_scale(g: &UnipotentGroup, plan: &RowPlan) -> Result<u64> {
    let kernel = plan.kernel_root.ok_or_else(|| Error::NotApplicable("no kernel".into()))?;
    let md = g.modulus();
    let unit = kernel_power_vector(plan, 0).expect("e = 0 always fits");
    let m = kernel_theta_pair(md, plan, &unit)?.evaluate(&g.real)?;
    let ((r, c), lead) = g.real.lead(kernel);
    let lambda = md.mul(m.get(r, c), md.inv(md.reduce(lead)));
    if lambda == 0 || g.real.root_element_by_id(kernel, lambda) != m {
        return Err(Error::Mismatch(format!("row {}: unit theta pair is not a kernel element", plan.row_index)));
    }
    Ok(lambda)
}

/// Binary construction: `ε_β(s·d)` as a product of `θ` pairs, one per bit.
/// The unit pair realizes `ε_β(d)` (see [`binary_kernel_scale`]).
fn kernel_word_binary(md: Modulus, plan: &RowPlan, s: u64) -> Result<Word> {
    kernel_parts(plan)?;
    let mut w = Word::new();
    for e in 0..=floor_log2(md.value()) {
        if (s >> e) & 1 == 1 {
            let t = kernel_power_vector(plan, e)
                .ok_or_else(|| Error::Mismatch(format!("bit {e} does not fit row {}", plan.row_index)))?;
            w.append(&kernel_theta_pair(md, plan, &t)?);
        }
    }
    Ok(w)
}

/// A word for `ε_β(s·d)` exactly, where `β` is the kernel root of row `i`.
pub fn kernel_word(g: &UnipotentGroup, plan: &RowPlan, s: u64) -> Result<Word> {
    kernel_parts(plan)?;
    let md = g.modulus();
    let s = s % md.value();
    if s == 0 {
        return Ok(Word::new());
    }
    if uses_sqrt_kernel(plan, md) {
        kernel_word_sqrt(md, plan, s)
    } else {
        kernel_word_binary(md, plan, s)
    }
}

/// Whether the kernel of this row is generated by the square-root method.
pub fn uses_sqrt_kernel(plan: &RowPlan, md: Modulus) -> bool {
    plan.middle() <= floor_log2(md.value())
}

/// Word lengths spent on one row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RowLengths {
    pub simple: usize,
    pub medium: usize,
    pub tail: usize,
    pub kernel: usize,
}

impl RowLengths {
    pub fn total(&self) -> usize {
        self.simple + self.medium + self.tail + self.kernel
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub word: Word,
    pub rows: Vec<RowLengths>,
}

/// Word for one row's element `row_matrix(c_i)` of `U_i'`.
pub fn synthesize_row(g: &UnipotentGroup, coords: &RowCoordinates) -> Result<(Word, RowLengths)> {
    let md = g.modulus();
    let plan = g.plan(coords.row_index);
    let values: Vec<u64> = plan.ordered_roots.iter().map(|&id| coords.get(id)).collect();
    let r = plan.r();
    let k = floor_log2(md.value()).min(r);
    let mut lengths = RowLengths::default();

    let mut w = simple_word(md, plan.row_index, values[0]);
    lengths.simple = w.len();
    for l in 2..=k {
        let e = residue(md, plan.conj_prefix(l));
        let part = medium_word(md, plan, l, md.mul(values[l - 1], md.inv(e)));
        lengths.medium += part.len();
        w.append(&part);
    }
    let tail = tail_word(md, plan, k, &values)?;
    lengths.tail = tail.len();
    w.append(&tail);

    let target = g.real.row_matrix(coords)?;
    let residual = w.evaluate(&g.real)?.inverse_unipotent()?.mul(&target)?;
    match plan.kernel_root {
        None if residual.is_identity() => {}
        None => return Err(Error::Mismatch(format!("row {}: quotient word is not exact", plan.row_index))),
        Some(kernel) => {
            let ((rr, cc), lead) = g.real.lead(kernel);
            let x = md.mul(residual.get(rr, cc), md.inv(md.reduce(lead)));
            if g.real.root_element_by_id(kernel, x) != residual {
                return Err(Error::Mismatch(format!("row {}: residual leaves the kernel", plan.row_index)));
            }
            let d = residue(md, plan.kernel_d.expect("kernel rows carry d"));
            let kw = kernel_word(g, plan, md.mul(x, md.inv(d)))?;
            lengths.kernel = kw.len();
            w.append(&kw);
        }
    }
    Ok((w, lengths))
}

/// A word evaluating exactly to `u`, row by row in ascending order.
pub fn synthesize(g: &UnipotentGroup, u: &FpMatrix) -> Result<Synthesis> {
    let rows = g.real.peel_rows(u)?;
    let mut word = Word::new();
    let mut lengths = Vec::with_capacity(rows.len());
    for row in &rows {
        let (w, l) = synthesize_row(g, row)?;
        word.append(&w);
        lengths.push(l);
    }
    Ok(Synthesis { word, rows: lengths })
}

/// Per-row budget terms, each an exact integer ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowBudget {
    pub simple: u64,
    pub medium: u64,
    pub tail: u64,
    pub kernel: u64,
}

impl RowBudget {
    pub fn total(&self) -> u64 {
        self.simple + self.medium + self.tail + self.kernel
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthBudget {
    pub rows: Vec<RowBudget>,
    pub total: u64,
}

/// Rounds up with a relative margin well above f64 error.
fn ceil_up(x: f64) -> u64 {
    (x * (1.0 + 1e-12) + 1e-9).ceil() as u64
}

/// `|Φⁱ|` for each row.
pub fn row_sizes(rs: &RootSystem) -> Vec<usize> {
    (1..=rs.rank())
        .map(|i| {
            let c = rs.circ_roots(i).expect("valid row").len();
            if rs.lie_type() != LieType::A && c > 1 {
                c - 1
            } else {
                c
            }
        })
        .collect()
}

/// The per-row sum
/// `p/2 + (48/ln²2)√p ln²p + 32 r_i (log₂p + 1) + (32/ln 2) ln p (√p + 1) + 8(n-i+1)(log₂p + 1)`.
pub fn length_budget(rs: &RootSystem, p: u64) -> LengthBudget {
    let n = rs.rank();
    let pf = p as f64;
    let ln2 = std::f64::consts::LN_2;
    let lp = pf.ln();
    let log2p = pf.log2();
    let sq = pf.sqrt();
    let simple = p.div_ceil(2);
    let medium = ceil_up(48.0 / (ln2 * ln2) * sq * lp * lp);
    let rows: Vec<RowBudget> = row_sizes(rs)
        .into_iter()
        .enumerate()
        .map(|(idx, r)| {
            let i = idx + 1;
            RowBudget {
                simple,
                medium,
                tail: ceil_up(32.0 * r as f64 * (log2p + 1.0)),
                kernel: ceil_up(32.0 / ln2 * lp * (sq + 1.0)) + ceil_up(8.0 * (n - i + 1) as f64 * (log2p + 1.0)),
            }
        })
        .collect();
    let total = rows.iter().map(RowBudget::total).sum();
    LengthBudget { rows, total }
}

/// Whether `|x|` is an integral power of two (as used by the `d` constants).
pub fn is_power_of_two_ratio(x: Rational64) -> bool {
    crate::root_system::is_power_of_two(x.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(lt: LieType, n: usize, p: u64) -> UnipotentGroup {
        UnipotentGroup::new(lt, n, p).unwrap()
    }

    fn random_element(g: &UnipotentGroup, rng: &mut ChaCha8Rng) -> FpMatrix {
        let p = g.modulus().value();
        let coords: Vec<u64> = (0..g.rs.len()).map(|_| rng.gen_range(0..p)).collect();
        let order: Vec<usize> = (0..g.rs.len()).collect();
        g.real.ordered_product(&order, &coords)
    }

    fn quotient_values(g: &UnipotentGroup, plan: &RowPlan, m: &FpMatrix) -> Vec<u64> {
        let rows = g.real.peel_rows(m).unwrap();
        let row = &rows[plan.row_index - 1];
        for (idx, other) in rows.iter().enumerate() {
            if idx + 1 != plan.row_index {
                assert!(other.is_zero(), "word left row {}", plan.row_index);
            }
        }
        plan.ordered_roots.iter().map(|&id| row.get(id)).collect()
    }

    #[test]
    fn simple_word_lengths() {
        let md = Modulus::new(7).unwrap();
        assert!(simple_word(md, 2, 0).is_empty());
        assert_eq!(simple_word(md, 2, 5).to_signed(), vec![-2, -2]);
        for s in 0..7 {
            assert!(simple_word(md, 1, s).len() <= 3);
        }
    }

    #[test]
    fn theta_matrix_in_a3() {
        let g = group(LieType::A, 3, 101);
        let plan = g.plan(1);
        let w = theta_word(&g, plan, 1, &[3, 5, 7]).unwrap();
        let m = w.evaluate(&g.real).unwrap();
        assert_eq!(m.get(0, 1), 3);
        assert_eq!(m.get(0, 2), 15);
        assert_eq!(m.get(0, 3), 105 % 101);
        assert_eq!(w.len(), 3 + 2 * 5 + 2 * 7);
    }

    #[test]
    fn theta_inverse_identity() {
        let md = Modulus::new(11).unwrap();
        for lt in LieType::all() {
            let g = group(lt, 4, 11);
            for plan in &g.plans {
                let r = plan.r();
                let s: Vec<i64> = (0..r).map(|q| [1, -2, 2, -1][q % 4]).collect();
                let mut t = s.clone();
                t[0] = -t[0];
                let w = theta_simple(md, plan, &s).unwrap().concat(&theta_simple(md, plan, &t).unwrap());
                assert!(w.evaluate(&g.real).unwrap().is_identity(), "{lt} row {}", plan.row_index);
            }
        }
    }

    #[test]
    fn generators_hit_one_position() {
        for lt in LieType::all() {
            for n in lt.min_rank()..=5 {
                let g = group(lt, n, 13);
                let md = g.modulus();
                for plan in &g.plans {
                    for l in 1..=plan.r() {
                        let w = generator(md, plan, l).unwrap();
                        assert!(w.len() <= 8 * l, "{lt}{n} row {} l {l}: {}", plan.row_index, w.len());
                        let v = quotient_values(&g, plan, &w.evaluate(&g.real).unwrap());
                        let mut want = vec![0; plan.r()];
                        want[l - 1] = residue(md, plan.conj_prefix(l));
                        assert_eq!(v, want, "{lt}{n} row {} l {l}", plan.row_index);
                    }
                }
            }
        }
    }

    #[test]
    fn medium_words_match_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for lt in LieType::all() {
            for n in lt.min_rank()..=5 {
                let g = group(lt, n, 101);
                let md = g.modulus();
                for plan in &g.plans {
                    for l in 2..=plan.r() {
                        let s = rng.gen_range(0..101);
                        let w = medium_root_word(md, plan, l, s).unwrap();
                        let t = isqrt(s).max(1);
                        assert!(w.len() as u64 <= 48 * l as u64 * (t + 1));
                        let v = quotient_values(&g, plan, &w.evaluate(&g.real).unwrap());
                        let mut want = vec![0; plan.r()];
                        want[l - 1] = md.mul(s, residue(md, plan.d_at(l)));
                        assert_eq!(v, want, "{lt}{n} row {} l {l}", plan.row_index);
                    }
                }
            }
        }
    }

    #[test]
    fn tail_words_match_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for lt in LieType::all() {
            for n in lt.min_rank()..=7 {
                for p in [5u64, 7, 17] {
                    let g = group(lt, n, p);
                    let md = g.modulus();
                    let k = floor_log2(p);
                    for plan in &g.plans {
                        if plan.r() <= k {
                            continue;
                        }
                        for _ in 0..5 {
                            let mut values: Vec<u64> = (0..plan.r()).map(|_| rng.gen_range(0..p)).collect();
                            values[..k].iter_mut().for_each(|x| *x = 0);
                            let w = tail_word(md, plan, k, &values).unwrap();
                            let bound = 32 * plan.r() * (k + 1);
                            assert!(w.len() <= bound, "{lt}{n} p{p} row {}: {} > {bound}", plan.row_index, w.len());
                            let v = quotient_values(&g, plan, &w.evaluate(&g.real).unwrap());
                            assert_eq!(v, values, "{lt}{n} p{p} row {}", plan.row_index);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_words_are_exact() {
        for lt in [LieType::B, LieType::C, LieType::D] {
            for n in lt.min_rank()..=6 {
                for p in [5u64, 11, 101] {
                    let g = group(lt, n, p);
                    let md = g.modulus();
                    for plan in g.plans.iter().filter(|pl| pl.kernel_root.is_some()) {
                        let d = residue(md, plan.kernel_d.unwrap());
                        for s in [1u64, 2, p / 2, p - 1] {
                            let w = kernel_word(&g, plan, s).unwrap();
                            let want = g.real.root_element_by_id(plan.kernel_root.unwrap(), md.mul(s, d));
                            assert_eq!(w.evaluate(&g.real).unwrap(), want, "{lt}{n} p{p} row {} s {s}", plan.row_index);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unit_kernel_pair_realizes_d() {
        for lt in [LieType::B, LieType::C, LieType::D] {
            for n in lt.min_rank()..=6 {
                let g = group(lt, n, 10007);
                for plan in g.plans.iter().filter(|pl| pl.kernel_root.is_some()) {
                    let d = residue(g.modulus(), plan.kernel_d.unwrap());
                    assert_eq!(binary_kernel_scale(&g, plan).unwrap(), d, "{lt}{n} row {}", plan.row_index);
                    assert!(is_power_of_two_ratio(plan.kernel_d.unwrap()));
                }
            }
        }
    }

    #[test]
    fn kernel_branch_lengths() {
        for lt in [LieType::B, LieType::C, LieType::D] {
            for n in lt.min_rank()..=9 {
                for p in [3u64, 5, 31, 101] {
                    let g = group(lt, n, p);
                    let md = g.modulus();
                    let big_k = floor_log2(p) as u64;
                    for plan in g.plans.iter().filter(|pl| pl.kernel_root.is_some()) {
                        let h = plan.middle() as u64;
                        let bound = if uses_sqrt_kernel(plan, md) {
                            32 * h * (isqrt(p) + 2)
                        } else if lt == LieType::C {
                            16 * h * (big_k + 1)
                        } else {
                            8 * h * (big_k + 1)
                        };
                        for s in (0..p).step_by((p as usize / 25).max(1)).chain([p - 1]) {
                            let len = kernel_word(&g, plan, s).unwrap().len() as u64;
                            assert!(len <= bound, "{lt}{n} p{p} row {} s {s}: {len} > {bound}", plan.row_index);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn synthesis_is_exact_and_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for lt in LieType::all() {
            for n in lt.min_rank()..=5 {
                for p in [5u64, 17, 101] {
                    let g = group(lt, n, p);
                    let budget = length_budget(&g.rs, p).total;
                    for _ in 0..4 {
                        let u = random_element(&g, &mut rng);
                        let syn = synthesize(&g, &u).unwrap();
                        assert_eq!(syn.word.evaluate(&g.real).unwrap(), u, "{lt}{n} p{p}");
                        assert!(syn.word.len() as u64 <= budget);
                        assert_eq!(syn.rows.iter().map(RowLengths::total).sum::<usize>(), syn.word.len());
                    }
                }
            }
        }
    }
}
