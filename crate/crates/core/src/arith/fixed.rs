//! Signed Q3.w fixed-point numbers: 3 integer bits (sign included) and `w`
//! fractional bits in a `3 + w` bit two's-complement word.

use std::fmt;
use std::ops::{Add, Sub};

/// Integer bits of every Q3.w value, sign bit included.
pub const INT_BITS: u32 = 3;

/// Largest supported fractional width; raw words must fit an `i64`.
pub const MAX_FRAC_BITS: u32 = 60;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedPointValue {
    frac_bits: u32,
    raw: i64,
}

/// Reduces `raw` to a `bits`-wide two's-complement value.
fn wrap(raw: i128, bits: u32) -> i64 {
    let modulus = 1i128 << bits;
    let mut v = raw.rem_euclid(modulus);
    if v >= modulus >> 1 {
        v -= modulus;
    }
    v as i64
}

impl FixedPointValue {
    /// Wraps `raw` into the Q3.`frac_bits` range.
    pub fn from_raw(frac_bits: u32, raw: i64) -> Self {
        assert!(frac_bits <= MAX_FRAC_BITS, "Q3.{frac_bits} is too wide");
        FixedPointValue {
            frac_bits,
            raw: wrap(raw as i128, INT_BITS + frac_bits),
        }
    }

    /// `num / den` rounded to the nearest multiple of `2^-frac_bits` (ties away from zero).
    pub fn from_ratio(num: i64, den: i64, frac_bits: u32) -> Self {
        assert!(den != 0, "zero denominator");
        let scaled = (num as i128) << frac_bits;
        let (scaled, den) = if den < 0 {
            (-scaled, -(den as i128))
        } else {
            (scaled, den as i128)
        };
        let half = den / 2;
        let q = if scaled >= 0 {
            (scaled + half) / den
        } else {
            -((-scaled + half) / den)
        };
        FixedPointValue {
            frac_bits,
            raw: wrap(q, INT_BITS + frac_bits),
        }
    }

    pub fn one(frac_bits: u32) -> Self {
        FixedPointValue::from_raw(frac_bits, 1i64 << frac_bits)
    }

    pub fn frac_bits(self) -> u32 {
        self.frac_bits
    }

    /// Two's-complement integer; the represented value is `raw / 2^w`.
    pub fn raw(self) -> i64 {
        self.raw
    }

    /// The `3 + w` bit pattern as an unsigned word.
    pub fn bits(self) -> u64 {
        (self.raw as u64) & ((1u64 << (INT_BITS + self.frac_bits)) - 1)
    }

    pub fn to_f64(self) -> f64 {
        self.raw as f64 / (1u64 << self.frac_bits) as f64
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        (self.frac_bits == rhs.frac_bits).then(|| FixedPointValue {
            frac_bits: self.frac_bits,
            raw: wrap(
                self.raw as i128 + rhs.raw as i128,
                INT_BITS + self.frac_bits,
            ),
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        (self.frac_bits == rhs.frac_bits).then(|| FixedPointValue {
            frac_bits: self.frac_bits,
            raw: wrap(
                self.raw as i128 - rhs.raw as i128,
                INT_BITS + self.frac_bits,
            ),
        })
    }

    /// Product truncated to Q3.`frac_bits`: the exact Q6.(w1+w2) product
    /// loses its top 3 integer bits (wraparound) and its low fractional bits
    /// (floor toward negative infinity).
    pub fn mul_trunc(self, rhs: Self, frac_bits: u32) -> Self {
        let wide = self.frac_bits + rhs.frac_bits;
        assert!(
            frac_bits <= wide,
            "cannot widen Q3.{}*Q3.{} to Q3.{frac_bits}",
            self.frac_bits,
            rhs.frac_bits
        );
        let product = self.raw as i128 * rhs.raw as i128;
        let shifted = product >> (wide - frac_bits);
        FixedPointValue {
            frac_bits,
            raw: wrap(shifted, INT_BITS + frac_bits),
        }
    }
}

impl Add for FixedPointValue {
    type Output = FixedPointValue;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs)
            .expect("fixed-point operands must share the fractional width")
    }
}

impl Sub for FixedPointValue {
    type Output = FixedPointValue;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs)
            .expect("fixed-point operands must share the fractional width")
    }
}

impl fmt::Debug for FixedPointValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q3.{}({})", self.frac_bits, self.to_f64())
    }
}
