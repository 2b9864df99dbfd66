use crate::error::{Error, Result};

/// Appends `v` as little-endian 7-bit groups, high bit set on all but the last byte.
#[inline]
pub fn vbyte_encode(mut v: u64, out: &mut Vec<u8>) {
    debug_assert!(v < 1 << 56);
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

/// Decodes one value from the front of `bytes`, returning it with the number
/// of bytes consumed.
#[inline]
pub fn vbyte_decode(bytes: &[u8]) -> Result<(u64, usize)> {
    let mut v = 0u64;
    for (i, &b) in bytes.iter().enumerate().take(8) {
        v |= ((b & 0x7f) as u64) << (7 * i);
        if b & 0x80 == 0 {
            return Ok((v, i + 1));
        }
    }
    Err(Error::format(if bytes.len() < 8 {
        "truncated vbyte value"
    } else {
        "vbyte value longer than 8 bytes"
    }))
}
