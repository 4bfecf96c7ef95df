//! Quantization and Morton (Z-order) keys for planar points.
//!
//! Coordinates are mapped by a uniform-scale affine map onto a `2^bits` grid.
//! Shift `j` adds `j * ceil(2^bits / 3)` to both grid coordinates, so shifted
//! coordinates need `bits + 1` bits; with `bits <= 31` a key fits in a `u64`.
//! The y coordinate supplies the high bit of every interleaved pair.

use crate::error::{Error, Result};
use crate::event::EventSequence;
use crate::predicates::Point2;

pub const DEFAULT_BITS: u32 = 31;
/// Number of shifted Z-orders kept for the plane (`d + 1`).
pub const SHIFTS: usize = 3;
/// Bits per coordinate in a key (grid bits plus one overflow bit, rounded to
/// the full word).
pub const KEY_LEVELS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MortonKey {
    pub shift: u8,
    pub code: u64,
}

impl MortonKey {
    pub fn new(code: u64, shift: u8) -> Self {
        MortonKey { shift, code }
    }
}

/// Spreads the low 32 bits of `v` into the even bit positions.
#[inline]
pub fn spread(v: u64) -> u64 {
    let mut x = v & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[inline]
pub fn compact(v: u64) -> u64 {
    let mut x = v & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    x = (x | (x >> 16)) & 0x0000_0000_ffff_ffff;
    x
}

#[inline]
pub fn interleave(x: u64, y: u64) -> u64 {
    spread(x) | (spread(y) << 1)
}

#[inline]
pub fn deinterleave(code: u64) -> (u64, u64) {
    (compact(code), compact(code >> 1))
}

/// Level of the smallest quadtree cell containing both codes; level `l`
/// cells have side `2^l` grid units.
#[inline]
pub fn lca_level(a: u64, b: u64) -> u32 {
    let x = a ^ b;
    if x == 0 {
        0
    } else {
        (64 - x.leading_zeros()).div_ceil(2)
    }
}

/// Smallest code inside the level-`level` cell containing `code`.
#[inline]
pub fn cell_prefix(code: u64, level: u32) -> u64 {
    if level >= KEY_LEVELS {
        0
    } else {
        code & !((1u64 << (2 * level)) - 1)
    }
}

/// Largest code inside the level-`level` cell containing `code`.
#[inline]
pub fn cell_last(code: u64, level: u32) -> u64 {
    if level >= KEY_LEVELS {
        u64::MAX
    } else {
        code | ((1u64 << (2 * level)) - 1)
    }
}

/// Uniform-scale map from the plane onto the integer grid `[0, 2^bits)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantizer {
    origin: Point2,
    scale: f64,
    bits: u32,
}

impl Quantizer {
    pub fn new(origin: Point2, extent: f64, bits: u32) -> Result<Self> {
        if !(1..=31).contains(&bits) {
            return Err(Error::InvalidParameter(format!(
                "grid bits must be in 1..=31, got {bits}"
            )));
        }
        let cells = ((1u64 << bits) - 1) as f64;
        let scale = if extent > 0.0 { extent / cells } else { 1.0 };
        Ok(Quantizer {
            origin,
            scale,
            bits,
        })
    }

    /// Quantizer covering the bounding square of a planar sequence.
    pub fn for_sequence(seq: &EventSequence, bits: u32) -> Result<Self> {
        seq.require_dim(2)?;
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for k in 0..seq.len() {
            let p = seq.xy(k);
            for m in 0..2 {
                lo[m] = lo[m].min(p[m]);
                hi[m] = hi[m].max(p[m]);
            }
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        Quantizer::new(lo, extent, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn grid_max(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    /// Per-coordinate offset of shift `j`.
    pub fn shift_offset(&self, j: usize) -> u64 {
        let side = 1u64 << self.bits;
        j as u64 * side.div_ceil(SHIFTS as u64)
    }

    fn raw(&self, v: f64, m: usize) -> f64 {
        ((v - self.origin[m]) / self.scale).floor()
    }

    pub fn quantize(&self, p: Point2) -> Result<[u64; 2]> {
        let mut g = [0u64; 2];
        for m in 0..2 {
            let r = self.raw(p[m], m);
            if !(r >= 0.0) || r > self.grid_max() as f64 + 1.0 {
                return Err(Error::OutOfBounds { value: p[m] });
            }
            g[m] = (r as u64).min(self.grid_max());
        }
        Ok(g)
    }

    /// Like [`Quantizer::quantize`], but clamps points outside the domain onto
    /// its boundary.
    pub fn quantize_clamped(&self, p: Point2) -> [u64; 2] {
        let mut g = [0u64; 2];
        for m in 0..2 {
            let r = self.raw(p[m], m);
            g[m] = if r.is_nan() || r <= 0.0 {
                0
            } else {
                (r.min(self.grid_max() as f64) as u64).min(self.grid_max())
            };
        }
        g
    }

    pub fn key_of_grid(&self, g: [u64; 2], shift: usize) -> Result<MortonKey> {
        if shift >= SHIFTS {
            return Err(Error::InvalidShift(shift));
        }
        let off = self.shift_offset(shift);
        Ok(MortonKey::new(interleave(g[0] + off, g[1] + off), shift as u8))
    }

    pub fn encode(&self, p: Point2, shift: usize) -> Result<MortonKey> {
        self.key_of_grid(self.quantize(p)?, shift)
    }

    pub fn encode_clamped(&self, p: Point2, shift: usize) -> Result<MortonKey> {
        self.key_of_grid(self.quantize_clamped(p), shift)
    }

    /// Closed box in real coordinates that contains every point whose
    /// unshifted code lies in the given cell, padded by one grid unit.
    pub fn cell_box(&self, code: u64, level: u32) -> (Point2, Point2) {
        let (gx, gy) = deinterleave(cell_prefix(code, level));
        let side = if level >= KEY_LEVELS {
            2f64.powi(KEY_LEVELS as i32)
        } else {
            (1u64 << level) as f64
        };
        let lo = [
            self.origin[0] + (gx as f64 - 1.0) * self.scale,
            self.origin[1] + (gy as f64 - 1.0) * self.scale,
        ];
        let hi = [
            self.origin[0] + (gx as f64 + side + 1.0) * self.scale,
            self.origin[1] + (gy as f64 + side + 1.0) * self.scale,
        ];
        (lo, hi)
    }
}
