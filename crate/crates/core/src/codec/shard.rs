//! On-disk shard layout (little-endian throughout):
//!
//! ```text
//!  0..4   magic "PRS1"
//!  4      m
//!  5      crc width r
//!  6..8   reserved, zero
//!  8..12  n
//! 12..16  k_hat
//! 16..20  position j
//! 20..24  group count
//! 24..32  payload length in bytes
//! 32..    group_count symbols, u16 each
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Elem;

pub const MAGIC: &[u8; 4] = b"PRS1";
pub const HEADER_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardHeader {
    pub m: u8,
    pub crc_width: u8,
    pub n: u32,
    pub k_hat: u32,
    pub position: u32,
    pub group_count: u32,
    pub payload_len: u64,
}

impl ShardHeader {
    /// True when two shards belong to the same encoding.
    pub fn same_encoding(&self, other: &ShardHeader) -> bool {
        (self.m, self.crc_width, self.n, self.k_hat, self.group_count, self.payload_len)
            == (other.m, other.crc_width, other.n, other.k_hat, other.group_count, other.payload_len)
    }
}

/// One storage node's symbols, one per group, plus its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shard {
    pub header: ShardHeader,
    pub symbols: Vec<Elem>,
}

impl Shard {
    pub fn position(&self) -> usize {
        self.header.position as usize
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(HEADER_LEN + 2 * self.symbols.len());
        out.extend_from_slice(MAGIC);
        out.push(h.m);
        out.push(h.crc_width);
        out.extend_from_slice(&[0, 0]);
        out.extend_from_slice(&h.n.to_le_bytes());
        out.extend_from_slice(&h.k_hat.to_le_bytes());
        out.extend_from_slice(&h.position.to_le_bytes());
        out.extend_from_slice(&h.group_count.to_le_bytes());
        out.extend_from_slice(&h.payload_len.to_le_bytes());
        for s in &self.symbols {
            out.extend_from_slice(&s.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::ShardFormat(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[0..4] != MAGIC {
            return Err(Error::ShardFormat("bad magic".into()));
        }
        if bytes[6..8] != [0, 0] {
            return Err(Error::ShardFormat("reserved bytes are not zero".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let header = ShardHeader {
            m: bytes[4],
            crc_width: bytes[5],
            n: u32_at(8),
            k_hat: u32_at(12),
            position: u32_at(16),
            group_count: u32_at(20),
            payload_len: u64::from_le_bytes(bytes[24..32].try_into().unwrap()),
        };
        if !(3..=16).contains(&header.m) || header.n != (1u32 << header.m) - 1 {
            return Err(Error::ShardFormat(format!("inconsistent m={} n={}", header.m, header.n)));
        }
        if header.position >= header.n || header.k_hat == 0 || header.k_hat >= header.n {
            return Err(Error::ShardFormat("position or k_hat out of range".into()));
        }
        let body = &bytes[HEADER_LEN..];
        if body.len() != 2 * header.group_count as usize {
            return Err(Error::ShardFormat(format!(
                "expected {} symbol bytes, found {}",
                2 * header.group_count,
                body.len()
            )));
        }
        let symbols: Vec<Elem> = body.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect();
        if symbols.iter().any(|&s| s as u32 > header.n) {
            return Err(Error::ShardFormat("symbol outside the field".into()));
        }
        Ok(Self { header, symbols })
    }
}

/// Encoding parameters written next to the shards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub m: u32,
    pub prim_poly: u32,
    pub n: usize,
    pub k_hat: usize,
    pub crc_width: u32,
    pub group_count: usize,
    pub payload_len: u64,
    /// CRC-32 of the whole original file.
    pub file_crc32: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Shard {
        Shard {
            header: ShardHeader {
                m: 10,
                crc_width: 32,
                n: 1023,
                k_hat: 401,
                position: 17,
                group_count: 3,
                payload_len: 1234,
            },
            symbols: vec![1, 1022, 513],
        }
    }

    #[test]
    fn layout_is_fixed() {
        let bytes = sample().to_bytes();
        assert_eq!(bytes.len(), 38);
        assert_eq!(&bytes[..4], b"PRS1");
        assert_eq!(bytes[4], 10);
        assert_eq!(bytes[5], 32);
        assert_eq!(&bytes[8..12], &1023u32.to_le_bytes());
        assert_eq!(&bytes[16..20], &17u32.to_le_bytes());
        assert_eq!(&bytes[24..32], &1234u64.to_le_bytes());
        assert_eq!(&bytes[32..34], &[1, 0]);
        assert_eq!(&bytes[34..36], &[0xFE, 0x03]);
        assert_eq!(Shard::from_bytes(&bytes).unwrap(), sample());
    }

    #[test]
    fn rejects_malformed() {
        let good = sample().to_bytes();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(Shard::from_bytes(&bad).is_err());
        assert!(Shard::from_bytes(&good[..good.len() - 1]).is_err());
        assert!(Shard::from_bytes(&good[..10]).is_err());
        let mut bad = good.clone();
        bad[16..20].copy_from_slice(&2000u32.to_le_bytes());
        assert!(Shard::from_bytes(&bad).is_err());
        let mut bad = good;
        bad[34..36].copy_from_slice(&1024u16.to_le_bytes());
        assert!(Shard::from_bytes(&bad).is_err());
    }
}
