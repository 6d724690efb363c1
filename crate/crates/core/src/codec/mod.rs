//! Data-node side: CRC framing, grouping into information vectors, evaluation
//! encoding and shard assembly.
//!
//! Position `j` of a codeword holds `u(alpha^j)`, where `u(x)` is the
//! information polynomial of the group. With that convention every codeword
//! has `alpha^1 .. alpha^(n - k_hat)` as roots, which is what the error
//! decoder relies on.

pub mod crc;
pub mod shard;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

pub use shard::{Manifest, Shard, ShardHeader};

/// CRC bits appended to every information group.
pub const CRC_WIDTH: u32 = 32;

/// An `(n, k_hat)` Reed-Solomon code over a fixed field.
#[derive(Debug, Clone)]
pub struct CodeParams {
    field: Arc<Field>,
    k_hat: usize,
}

impl CodeParams {
    pub fn new(field: Arc<Field>, k_hat: usize) -> Result<Self> {
        if k_hat == 0 || k_hat >= field.n() {
            return Err(Error::InvalidParams(format!(
                "k_hat must satisfy 1 <= k_hat < n = {}, got {k_hat}",
                field.n()
            )));
        }
        Ok(Self { field, k_hat })
    }

    /// Convenience constructor using the default primitive polynomial.
    pub fn with_width(m: u32, k_hat: usize) -> Result<Self> {
        Self::new(Arc::new(Field::with_default_poly(m)?), k_hat)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn k_hat(&self) -> usize {
        self.k_hat
    }

    /// Most errors correctable alongside `erasures` erasures.
    pub fn error_budget(&self, erasures: usize) -> usize {
        (self.n() - self.k_hat).saturating_sub(erasures) / 2
    }

    /// Payload bits carried by one group once its CRC is in place.
    pub fn group_data_bits(&self) -> Result<usize> {
        let total = self.k_hat * self.m() as usize;
        if total <= CRC_WIDTH as usize {
            return Err(Error::GroupTooSmall {
                k_hat: self.k_hat,
                m: self.m(),
                crc_width: CRC_WIDTH,
            });
        }
        Ok(total - CRC_WIDTH as usize)
    }

    /// Number of groups for a payload of `payload_len` bytes (at least one).
    pub fn group_count(&self, payload_len: u64) -> Result<usize> {
        let d = self.group_data_bits()? as u64;
        Ok((payload_len * 8).div_ceil(d).max(1) as usize)
    }
}

/// The `k_hat` information symbols of one group, CRC bits included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupVector(pub Vec<Elem>);

/// The `n` coded symbols of one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword(pub Vec<Elem>);

/// Growable MSB-first bit buffer.
#[derive(Debug, Default, Clone)]
struct Bits {
    bytes: Vec<u8>,
    len: usize,
}

impl Bits {
    fn with_capacity(bits: usize) -> Self {
        Self { bytes: Vec::with_capacity(bits.div_ceil(8)), len: 0 }
    }

    fn push(&mut self, bit: u8) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit != 0 {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    fn push_word(&mut self, word: u32, width: u32) {
        for shift in (0..width).rev() {
            self.push(((word >> shift) & 1) as u8);
        }
    }
}

#[inline]
fn bit_at(bytes: &[u8], i: usize) -> u8 {
    bytes.get(i / 8).map_or(0, |b| (b >> (7 - i % 8)) & 1)
}

fn read_word(bytes: &[u8], start: usize, width: u32) -> u32 {
    (0..width as usize).fold(0, |acc, k| (acc << 1) | bit_at(bytes, start + k) as u32)
}

fn symbols_to_bits(symbols: &[Elem], m: u32) -> Bits {
    let mut bits = Bits::with_capacity(symbols.len() * m as usize);
    for &s in symbols {
        bits.push_word(s as u32, m);
    }
    bits
}

/// Split `data` into CRC-protected groups of `k_hat` symbols.
pub fn frame_payload(data: &[u8], params: &CodeParams) -> Result<Vec<GroupVector>> {
    let d = params.group_data_bits()?;
    let groups = params.group_count(data.len() as u64)?;
    let m = params.m();
    let total_bits = data.len() * 8;
    let out = (0..groups)
        .map(|g| {
            let start = g * d;
            let mut chunk = Bits::with_capacity(d);
            for i in start..start + d {
                chunk.push(if i < total_bits { bit_at(data, i) } else { 0 });
            }
            let crc = crc::crc32_bits(&chunk.bytes, d);
            chunk.push_word(crc, CRC_WIDTH);
            let symbols = (0..params.k_hat())
                .map(|s| read_word(&chunk.bytes, s * m as usize, m) as Elem)
                .collect();
            GroupVector(symbols)
        })
        .collect();
    Ok(out)
}

/// Recompute the CRC over a group's data bits and compare with the embedded one.
pub fn crc_test(u: &GroupVector, params: &CodeParams) -> bool {
    let Ok(d) = params.group_data_bits() else {
        return false;
    };
    if u.0.len() != params.k_hat() {
        return false;
    }
    let bits = symbols_to_bits(&u.0, params.m());
    crc::crc32_bits(&bits.bytes, d) == read_word(&bits.bytes, d, CRC_WIDTH)
}

/// Inverse of [`frame_payload`]: strip CRCs and padding.
pub fn unframe_payload(groups: &[GroupVector], params: &CodeParams, payload_len: u64) -> Result<Vec<u8>> {
    let expected = params.group_count(payload_len)?;
    if groups.len() != expected {
        return Err(Error::LengthMismatch { payload_len, expected, actual: groups.len() });
    }
    let d = params.group_data_bits()?;
    let mut out = Bits::with_capacity(payload_len as usize * 8);
    let wanted = payload_len as usize * 8;
    'groups: for g in groups {
        if g.0.len() != params.k_hat() {
            return Err(Error::WrongCount { expected: params.k_hat(), actual: g.0.len() });
        }
        let bits = symbols_to_bits(&g.0, params.m());
        for i in 0..d {
            if out.len == wanted {
                break 'groups;
            }
            out.push(bit_at(&bits.bytes, i));
        }
    }
    Ok(out.bytes)
}

/// `c_j = u(alpha^j)` for `j = 0..n`.
pub fn encode_group(u: &GroupVector, params: &CodeParams) -> Codeword {
    let f = params.field();
    let c = (0..params.n())
        .map(|j| {
            // Horner with x = alpha^j: multiplying by x is one log-table add.
            u.0.iter().rev().fold(0, |acc, &coef| f.mul_alpha_pow(acc, j) ^ coef)
        })
        .collect();
    Codeword(c)
}

/// Distribute the encoded groups: shard `j` receives symbol `j` of every group.
pub fn make_shards(groups: &[GroupVector], params: &CodeParams, payload_len: u64) -> Result<Vec<Shard>> {
    if groups.is_empty() {
        return Err(Error::InvalidParams("no groups to encode".into()));
    }
    let codewords: Vec<Codeword> = groups.par_iter().map(|u| encode_group(u, params)).collect();
    let n = params.n();
    let mut shards: Vec<Shard> = (0..n)
        .map(|j| Shard {
            header: ShardHeader {
                m: params.m() as u8,
                crc_width: CRC_WIDTH as u8,
                n: n as u32,
                k_hat: params.k_hat() as u32,
                position: j as u32,
                group_count: groups.len() as u32,
                payload_len,
            },
            symbols: Vec::with_capacity(groups.len()),
        })
        .collect();
    for cw in &codewords {
        for (shard, &c) in shards.iter_mut().zip(&cw.0) {
            shard.symbols.push(c);
        }
    }
    Ok(shards)
}

/// True iff `c(alpha^i) = 0` for `i = 1..=n-k_hat`, with `c(x) = sum c_j x^j`.
pub fn parity_check(c: &Codeword, params: &CodeParams) -> bool {
    let f = params.field();
    if c.0.len() != params.n() {
        return false;
    }
    (1..=params.n() - params.k_hat()).all(|i| {
        c.0.iter().rev().fold(0, |acc, &cj| f.mul_alpha_pow(acc, i) ^ cj) == 0
    })
}
