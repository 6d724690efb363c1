//! CRC-32 (poly 0x04C11DB7, reflected, init and xor-out all ones) over bit
//! strings whose length need not be a multiple of eight.
//!
//! A bit string is split MSB-first into bytes. Whole bytes are fed exactly
//! as the usual byte-oriented CRC-32 does (least significant bit first), so
//! byte-aligned input yields the familiar checksum. A trailing partial byte
//! keeps its bits in the high positions and is fed the same way, LSB-first
//! over the occupied bits only.

const REFLECTED_POLY: u32 = 0xEDB8_8320;

static TABLE: [u32; 256] = build_table();

const fn build_table() -> [u32; 256] {
    let mut table = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        let mut c = i as u32;
        let mut k = 0;
        while k < 8 {
            c = if c & 1 != 0 { (c >> 1) ^ REFLECTED_POLY } else { c >> 1 };
            k += 1;
        }
        table[i] = c;
        i += 1;
    }
    table
}

#[derive(Debug, Clone, Copy)]
pub struct Crc32 {
    state: u32,
}

impl Default for Crc32 {
    fn default() -> Self {
        Self::new()
    }
}

impl Crc32 {
    pub fn new() -> Self {
        Self { state: !0 }
    }

    pub fn update_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.state = TABLE[((self.state ^ b as u32) & 0xFF) as usize] ^ (self.state >> 8);
        }
    }

    #[inline]
    fn update_bit(&mut self, bit: u8) {
        let mix = (self.state ^ bit as u32) & 1;
        self.state >>= 1;
        if mix != 0 {
            self.state ^= REFLECTED_POLY;
        }
    }

    /// Feed the top `bits` bits (1..=7) of `byte`.
    pub fn update_partial(&mut self, byte: u8, bits: u32) {
        debug_assert!((1..8).contains(&bits));
        for shift in (8 - bits)..8 {
            self.update_bit((byte >> shift) & 1);
        }
    }

    pub fn finish(self) -> u32 {
        !self.state
    }
}

/// CRC-32 of the first `len_bits` bits of `bytes` (MSB-first).
pub fn crc32_bits(bytes: &[u8], len_bits: usize) -> u32 {
    let full = len_bits / 8;
    let rest = (len_bits % 8) as u32;
    let mut crc = Crc32::new();
    crc.update_bytes(&bytes[..full]);
    if rest > 0 {
        crc.update_partial(bytes[full], rest);
    }
    crc.finish()
}

pub fn crc32(bytes: &[u8]) -> u32 {
    crc32_bits(bytes, bytes.len() * 8)
}
