//! Binary-expansion combinatorics of natural numbers.
//!
//! Every index `n` is a `u64` read through its binary digits `n_j`. The
//! characters used throughout the crate are the leading position `|n|`, the
//! lowest position `[n]`, their difference `rho(n)`, and the variation
//! `V(n) = n_0 + sum_k |n_k - n_{k-1}|`. Maximal runs of one-bits ("blocks")
//! and the band spectrum `A_s` built from them drive the weights of the
//! maximal operators.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Result, WfError};

/// A natural number together with its binary digits, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicIndex {
    n: u64,
    bits: Vec<u8>,
}

impl DyadicIndex {
    pub fn value(&self) -> u64 {
        self.n
    }

    /// `bits()[j]` is the digit `n_j`; the last stored digit is 1 unless `n = 0`.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

pub fn expand(n: u64) -> DyadicIndex {
    let len = (u64::BITS - n.leading_zeros()) as usize;
    let bits = (0..len).map(|j| ((n >> j) & 1) as u8).collect();
    DyadicIndex { n, bits }
}

/// `|n|`, the position of the highest one-bit.
pub fn lead(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(WfError::ZeroIndex);
    }
    Ok(63 - n.leading_zeros())
}

/// `[n]`, the position of the lowest one-bit.
pub fn low(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(WfError::ZeroIndex);
    }
    Ok(n.trailing_zeros())
}

pub fn rho(n: u64) -> Result<u32> {
    Ok(lead(n)? - low(n)?)
}

/// Number of digit changes when reading `n` upwards from a leading zero at
/// position -1. Always twice the number of blocks.
pub fn variation(n: u64) -> u32 {
    // n ^ (n << 1) marks every j with n_j != n_{j-1}; the u128 keeps the
    // change above bit 63.
    let wide = n as u128;
    (wide ^ (wide << 1)).count_ones()
}

/// Sum of the powers after the `position`-th largest one-bit.
///
/// With `n = 2^{n_1} + ... + 2^{n_r}` and `n_1 > ... > n_r`, returns
/// `2^{n_{position+1}} + ... + 2^{n_r}` for `1 <= position <= r`.
pub fn tail(n: u64, position: usize) -> Result<u64> {
    let terms = n.count_ones() as usize;
    if position == 0 || position > terms {
        return Err(WfError::TailOutOfRange { position, terms });
    }
    let mut rest = n;
    for _ in 0..position {
        rest &= !(1u64 << (63 - rest.leading_zeros()));
    }
    Ok(rest)
}

/// One maximal run of one-bits, covering positions `lower..=upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub lower: u32,
    pub upper: u32,
}

impl Block {
    pub fn value(&self) -> u64 {
        let width = self.upper - self.lower + 1;
        let run = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        run << self.lower
    }
}

/// Blocks of an index in ascending order; consecutive blocks are separated
/// by at least one zero digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn reconstruct(&self) -> u64 {
        self.blocks.iter().map(Block::value).sum()
    }
}

pub fn blocks(n: u64) -> Result<BlockDecomposition> {
    if n == 0 {
        return Err(WfError::ZeroIndex);
    }
    let mut out = Vec::new();
    let mut rest = n;
    while rest != 0 {
        let lower = rest.trailing_zeros();
        let run = (rest >> lower).trailing_ones();
        let upper = lower + run - 1;
        out.push(Block { lower, upper });
        rest &= !Block { lower, upper }.value();
    }
    Ok(BlockDecomposition { blocks: out })
}

/// Block endpoints of a family of indices sharing the leading bit `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandSpectrum {
    pub s: u32,
    pub members: Vec<u64>,
    pub lowers: Vec<u32>,
    pub uppers: Vec<u32>,
    pub union: Vec<u32>,
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
}

impl BandSpectrum {
    /// `|A_s|`.
    pub fn card(&self) -> usize {
        self.r3
    }
}

/// Returns true when `2^s <= n < 2^{s+1}`.
pub fn in_band(n: u64, s: u32) -> bool {
    n != 0 && 63 - n.leading_zeros() == s
}

pub fn band_spectrum(s: u32, family: &[u64]) -> Result<BandSpectrum> {
    if s >= u64::BITS {
        return Err(WfError::InvalidBand(s));
    }
    let mut lowers = BTreeSet::new();
    let mut uppers = BTreeSet::new();
    for &m in family {
        if !in_band(m, s) {
            return Err(WfError::OutOfBand { index: m, band: s });
        }
        for b in blocks(m)?.blocks() {
            lowers.insert(b.lower);
            uppers.insert(b.upper);
        }
    }
    let union: Vec<u32> = lowers.union(&uppers).copied().collect();
    let lowers: Vec<u32> = lowers.into_iter().collect();
    let uppers: Vec<u32> = uppers.into_iter().collect();
    Ok(BandSpectrum {
        s,
        members: family.to_vec(),
        r1: lowers.len(),
        r2: uppers.len(),
        r3: union.len(),
        lowers,
        uppers,
        union,
    })
}

fn check_family_band(s: u32) -> Result<()> {
    // 2^{s+1} must still fit.
    if s == 0 || s >= u64::BITS - 1 {
        return Err(WfError::InvalidBand(s));
    }
    Ok(())
}

/// `alpha_k^s = 2^s + 2^{k+1} - 1` for `k = 0..s`, ascending.
pub fn alpha_sequence(s: u32) -> Result<Vec<u64>> {
    check_family_band(s)?;
    Ok((0..s).map(|k| (1u64 << s) + (1u64 << (k + 1)) - 1).collect())
}

/// `beta_k^s = 2^{s+1} - 2^k` for `k = 0..s`, returned in ascending value
/// order (that is, `k` from `s - 1` down to 0).
pub fn beta_sequence(s: u32) -> Result<Vec<u64>> {
    check_family_band(s)?;
    Ok((0..s).rev().map(|k| (1u64 << (s + 1)) - (1u64 << k)).collect())
}
