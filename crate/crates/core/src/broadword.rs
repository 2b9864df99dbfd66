//! Word-level bit tricks shared by the succinct structures.
//!
//! Words are read LSB-first: the symbol at sequence position `p` is bit
//! `p % 64` of word `p / 64`. A set bit is an open parenthesis (`+1`), a clear
//! bit a close parenthesis (`-1`). Byte lanes are numbered from the least
//! significant byte, so lane `i` covers sequence positions `8i..8i+8`.

/// `0x0101..01`: one in the low bit of every byte lane.
pub const ONES_STEP_8: u64 = 0x0101_0101_0101_0101;
/// `0x8080..80`: the high bit of every byte lane.
pub const MSBS_STEP_8: u64 = 0x8080_8080_8080_8080;

const fn build_min_excess() -> [i8; 256] {
    let mut table = [0i8; 256];
    let mut b = 0;
    while b < 256 {
        let mut excess = 0i8;
        let mut min = i8::MAX;
        let mut bit = 0;
        while bit < 8 {
            excess += if (b >> bit) & 1 == 1 { 1 } else { -1 };
            if excess < min {
                min = excess;
            }
            bit += 1;
        }
        table[b] = min;
        b += 1;
    }
    table
}

const fn build_byte_crossing() -> [[u8; 8]; 256] {
    // CROSSING[b][d - 1]: first bit where a scan entering byte `b` with
    // relative excess `d` reaches zero, or 8 when it does not.
    let mut table = [[8u8; 8]; 256];
    let mut b = 0;
    while b < 256 {
        let mut d = 1;
        while d <= 8 {
            let mut excess = d as i32;
            let mut bit = 0;
            while bit < 8 {
                excess += if (b >> bit) & 1 == 1 { 1 } else { -1 };
                if excess == 0 {
                    table[b][d - 1] = bit as u8;
                    break;
                }
                bit += 1;
            }
            d += 1;
        }
        b += 1;
    }
    table
}

/// Minimum prefix sum over the nonempty prefixes of each byte.
static MIN_EXCESS: [i8; 256] = build_min_excess();

/// Solution table used by the byte-by-byte reference search.
static BYTE_CROSSING: [[u8; 8]; 256] = build_byte_crossing();

/// Lane `i` of the result holds the number of ones in byte `i` of `w`.
#[inline]
pub fn byte_counts(w: u64) -> u64 {
    let x = w - ((w >> 1) & 0x5555_5555_5555_5555);
    let x = (x & 0x3333_3333_3333_3333) + ((x >> 2) & 0x3333_3333_3333_3333);
    (x + (x >> 4)) & 0x0f0f_0f0f_0f0f_0f0f
}

/// Minimum over the nonempty prefixes of the `±1` walk spelled by `b`; in `[-8, 1]`.
#[inline]
pub fn byte_min_excess(b: u8) -> i8 {
    MIN_EXCESS[b as usize]
}

/// Lane `i` holds `max(0, -byte_min_excess(byte i))`.
///
/// Bytes whose walk never drops below its entry level get 0; combined with an
/// entry excess of at least 1 they are never marked by [`lanes_leq`].
#[inline]
pub fn min_excess_lanes(w: u64) -> u64 {
    let mut lanes = 0u64;
    for i in 0..8 {
        let m = MIN_EXCESS[((w >> (8 * i)) & 0xff) as usize];
        lanes |= ((-m).max(0) as u64) << (8 * i);
    }
    lanes
}

/// Lane `i` holds the excess entering byte `i`, given excess `e_w` before bit 0.
///
/// Lanes are exact up to the first lane whose true value is negative; past
/// that point the borrow corrupts them. A search only needs the lanes up to
/// the byte containing the crossing, which all precede the first negative lane.
#[inline]
pub fn lane_excess(w: u64, e_w: i64) -> u64 {
    let c8 = byte_counts(w);
    let step = (c8 << 1).wrapping_sub(8 * ONES_STEP_8);
    (e_w as u64).wrapping_add(step << 8).wrapping_mul(ONES_STEP_8)
}

/// Marks (high bit of the lane) every lane where `x_i <= y_i`.
///
/// `y` lanes must be below 128; the high bit of each `x` lane is ignored.
#[inline]
pub fn lanes_leq(x: u64, y: u64) -> u64 {
    ((y | MSBS_STEP_8).wrapping_sub(x & !MSBS_STEP_8)) & MSBS_STEP_8
}

/// Index of the lowest marked lane.
#[inline]
pub fn first_marked_lane(l: u64) -> Option<u32> {
    if l == 0 {
        None
    } else {
        Some(l.trailing_zeros() / 8)
    }
}

#[inline]
fn low_mask(nbits: u32) -> u64 {
    if nbits >= 64 {
        u64::MAX
    } else {
        (1u64 << nbits) - 1
    }
}

/// Forward search inside one word.
///
/// Scans the low `nbits` bits of `w` starting from relative excess `d >= 1`
/// and returns the first bit at which the walk reaches 0. On failure returns
/// the relative excess after the `nbits` symbols.
#[inline]
pub fn find_zero_in_word(w: u64, d: u64, nbits: u32) -> Result<u32, u64> {
    debug_assert!(d >= 1 && nbits <= 64);
    let w = w & low_mask(nbits);
    let after = || d + 2 * w.count_ones() as u64 - nbits as u64;
    if d > nbits as u64 {
        return Err(after());
    }
    let e8 = lane_excess(w, d as i64);
    let m8 = min_excess_lanes(w);
    let Some(byte) = first_marked_lane(lanes_leq(e8, m8)) else {
        return Err(after());
    };
    let mut excess = (e8 >> (8 * byte)) & 0xff;
    let b = (w >> (8 * byte)) & 0xff;
    for bit in 0..8 {
        if (b >> bit) & 1 == 1 {
            excess += 1;
        } else {
            excess -= 1;
            if excess == 0 {
                let pos = 8 * byte + bit;
                return if pos < nbits { Ok(pos) } else { Err(after()) };
            }
        }
    }
    unreachable!("marked byte without a crossing")
}

/// Byte-at-a-time reference for [`find_zero_in_word`], driven by a
/// per-(byte, excess) solution table.
pub fn find_zero_in_word_bytewise(w: u64, d: u64, nbits: u32) -> Result<u32, u64> {
    let w = w & low_mask(nbits);
    let mut excess = d;
    for byte in 0..8u32 {
        let b = ((w >> (8 * byte)) & 0xff) as usize;
        if excess <= 8 {
            let bit = BYTE_CROSSING[b][excess as usize - 1];
            if bit < 8 {
                let pos = 8 * byte + bit as u32;
                return if pos < nbits {
                    Ok(pos)
                } else {
                    Err(d + 2 * w.count_ones() as u64 - nbits as u64)
                };
            }
        }
        excess = excess + 2 * (b as u64).count_ones() as u64 - 8;
    }
    Err(d + 2 * w.count_ones() as u64 - nbits as u64)
}

/// Maps the low `nbits` bits of `w`, read backwards, to a forward word:
/// bit `k` of the result is the complement of bit `nbits - 1 - k` of `w`.
#[inline]
pub fn reverse_complement(w: u64, nbits: u32) -> u64 {
    debug_assert!((1..=64).contains(&nbits));
    (!w).reverse_bits() >> (64 - nbits)
}

/// Position of the `k`-th (0-based) set bit of `w`. `k` must be below `w.count_ones()`.
#[inline]
pub fn select_in_word(w: u64, k: u32) -> u32 {
    debug_assert!(k < w.count_ones());
    let prefix = byte_counts(w).wrapping_mul(ONES_STEP_8);
    // Number of byte lanes whose inclusive prefix count is <= k.
    let byte = lanes_leq(prefix, k as u64 * ONES_STEP_8).count_ones();
    let before = if byte == 0 {
        0
    } else {
        ((prefix >> (8 * (byte - 1))) & 0xff) as u32
    };
    let mut b = (w >> (8 * byte)) & 0xff;
    for _ in 0..(k - before) {
        b &= b - 1;
    }
    8 * byte + b.trailing_zeros()
}
