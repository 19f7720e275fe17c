//! Production-width (32/64-bit) integer comparison of float bit patterns.
//!
//! A float is reinterpreted, never converted, as a two's complement
//! integer of the same width. [`flint_ge`] is the general operator for two
//! unknown operands. Inside tree inference the split value is a build-time
//! constant, so its sign is resolved once by [`encode_split`]: negative
//! splits store the bits of `-s` and compare against the feature with its
//! sign bit flipped, which keeps at least one operand non-negative.
//!
//! The operators treat `-0 < +0`. A split of `-0` is rewritten to `+0`
//! when encoded, after which `feature <= split` agrees with IEEE `<=` for
//! every non-NaN feature.

use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::MiniFloatFormat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlintError {
    #[error("NaN has no FLInt encoding")]
    NaN,
    #[error("split value {0} is not finite")]
    NonFiniteSplit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FloatWidth {
    #[serde(rename = "f32")]
    Single,
    #[serde(rename = "f64")]
    Double,
}

impl FloatWidth {
    pub fn bits(&self) -> u32 {
        match self {
            FloatWidth::Single => 32,
            FloatWidth::Double => 64,
        }
    }

    pub fn format(&self) -> MiniFloatFormat {
        match self {
            FloatWidth::Single => MiniFloatFormat::SINGLE,
            FloatWidth::Double => MiniFloatFormat::DOUBLE,
        }
    }

    pub fn sign_mask(&self) -> SignMask {
        SignMask { width: *self }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FloatWidth::Single => "f32",
            FloatWidth::Double => "f64",
        }
    }

    /// Whether `v` survives a round trip through this width bit-for-bit.
    pub fn represents(&self, v: f64) -> bool {
        match self {
            FloatWidth::Single => ((v as f32) as f64).to_bits() == v.to_bits(),
            FloatWidth::Double => true,
        }
    }

    /// Hex rendering of the raw bits of `v` at this width, zero padded.
    pub fn hex_bits(&self, v: f64) -> String {
        match self {
            FloatWidth::Single => format!("{:#010x}", (v as f32).to_bits()),
            FloatWidth::Double => format!("{:#018x}", v.to_bits()),
        }
    }
}

impl fmt::Display for FloatWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FloatWidth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f32" | "single" => Ok(FloatWidth::Single),
            "f64" | "double" => Ok(FloatWidth::Double),
            _ => Err(format!("unknown width '{s}', expected f32 or f64")),
        }
    }
}

/// The MSB-only pattern of a width, `1 << (k - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignMask {
    width: FloatWidth,
}

impl SignMask {
    pub fn width(&self) -> FloatWidth {
        self.width
    }

    /// The mask as a signed integer of the width, sign-extended to i64.
    pub fn value(&self) -> i64 {
        match self.width {
            FloatWidth::Single => i32::MIN as i64,
            FloatWidth::Double => i64::MIN,
        }
    }
}

/// Signed integer types that carry a float's bit pattern.
pub trait SignedBits:
    Copy + Ord + Eq + BitXor<Output = Self> + fmt::Debug + fmt::LowerHex + Send + Sync + bytemuck::Pod
{
    const ZERO: Self;
    const SIGN_MASK: Self;

    fn to_i64(self) -> i64;
    /// Keeps the low bits of `v`.
    fn truncate_i64(v: i64) -> Self;
}

impl SignedBits for i32 {
    const ZERO: Self = 0;
    const SIGN_MASK: Self = i32::MIN;

    fn to_i64(self) -> i64 {
        self as i64
    }

    fn truncate_i64(v: i64) -> Self {
        v as i32
    }
}

impl SignedBits for i64 {
    const ZERO: Self = 0;
    const SIGN_MASK: Self = i64::MIN;

    fn to_i64(self) -> i64 {
        self
    }

    fn truncate_i64(v: i64) -> Self {
        v
    }
}

/// Host float types with a same-width signed bit carrier.
pub trait FlintFloat: Copy + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + bytemuck::Pod + 'static {
    type Bits: SignedBits;
    const WIDTH: FloatWidth;

    /// Bit reinterpretation as a signed integer.
    fn to_signed_bits(self) -> Self::Bits;
    fn from_signed_bits(bits: Self::Bits) -> Self;
    /// Narrowing cast from f64 (exact for values this width represents).
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn is_nan(self) -> bool;
    fn is_finite(self) -> bool;
}

impl FlintFloat for f32 {
    type Bits = i32;
    const WIDTH: FloatWidth = FloatWidth::Single;

    #[inline]
    fn to_signed_bits(self) -> i32 {
        self.to_bits() as i32
    }

    fn from_signed_bits(bits: i32) -> Self {
        f32::from_bits(bits as u32)
    }

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn is_nan(self) -> bool {
        f32::is_nan(self)
    }

    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
}

impl FlintFloat for f64 {
    type Bits = i64;
    const WIDTH: FloatWidth = FloatWidth::Double;

    #[inline]
    fn to_signed_bits(self) -> i64 {
        self.to_bits() as i64
    }

    fn from_signed_bits(bits: i64) -> Self {
        f64::from_bits(bits as u64)
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn is_nan(self) -> bool {
        f64::is_nan(self)
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// Raw bit pattern of `value` as a signed integer. NaN is rejected.
pub fn bits_of<F: FlintFloat>(value: F) -> Result<F::Bits, FlintError> {
    if value.is_nan() {
        return Err(FlintError::NaN);
    }
    Ok(value.to_signed_bits())
}

/// `FP(x) >= FP(y)` on raw patterns, with `-0 < +0`. Integer and logic
/// operations only.
#[inline]
pub fn flint_ge<I: SignedBits>(x: I, y: I) -> bool {
    (x >= y) ^ (x < I::ZERO && y < I::ZERO && x != y)
}

/// A split value with its sign resolved at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodedSplit<I> {
    pub constant: I,
    pub negative_case: bool,
}

impl<I: SignedBits> EncodedSplit<I> {
    /// `FP(feature) <= FP(split)`.
    #[inline(always)]
    pub fn le(&self, feature_bits: I) -> bool {
        if self.negative_case {
            self.constant <= (feature_bits ^ I::SIGN_MASK)
        } else {
            feature_bits <= self.constant
        }
    }
}

/// Encodes a finite split. `-0` becomes `+0`; a negative split stores the
/// bits of its magnitude and flags the swapped comparison.
pub fn encode<F: FlintFloat>(split: F) -> Result<EncodedSplit<F::Bits>, FlintError> {
    if split.is_nan() {
        return Err(FlintError::NaN);
    }
    if !split.is_finite() {
        return Err(FlintError::NonFiniteSplit(split.to_f64()));
    }
    let bits = split.to_signed_bits();
    Ok(if bits == F::Bits::SIGN_MASK {
        EncodedSplit {
            constant: F::Bits::ZERO,
            negative_case: false,
        }
    } else if bits >= F::Bits::ZERO {
        EncodedSplit {
            constant: bits,
            negative_case: false,
        }
    } else {
        EncodedSplit {
            constant: bits ^ F::Bits::SIGN_MASK,
            negative_case: true,
        }
    })
}

/// Width-erased split encoding, for diagnostics, codegen and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlintSplit {
    /// Bit pattern at the split's width, sign-extended to i64.
    pub constant: i64,
    pub negative_case: bool,
    pub width: FloatWidth,
    pub original_value: String,
}

impl FlintSplit {
    fn from_encoded<I: SignedBits>(e: EncodedSplit<I>, width: FloatWidth, original: String) -> Self {
        FlintSplit {
            constant: e.constant.to_i64(),
            negative_case: e.negative_case,
            width,
            original_value: original,
        }
    }

    /// The constant as an unsigned hex literal at the split's width.
    pub fn hex(&self) -> String {
        match self.width {
            FloatWidth::Single => format!("{:#010x}", self.constant as u32),
            FloatWidth::Double => format!("{:#018x}", self.constant as u64),
        }
    }
}

pub fn encode_split_f32(split: f32) -> Result<FlintSplit, FlintError> {
    Ok(FlintSplit::from_encoded(
        encode(split)?,
        FloatWidth::Single,
        format!("{split:?}"),
    ))
}

pub fn encode_split_f64(split: f64) -> Result<FlintSplit, FlintError> {
    Ok(FlintSplit::from_encoded(
        encode(split)?,
        FloatWidth::Double,
        format!("{split:?}"),
    ))
}

/// Encodes `split` at `width`. For `Single` the value is narrowed first.
pub fn encode_split(split: f64, width: FloatWidth) -> Result<FlintSplit, FlintError> {
    match width {
        FloatWidth::Single => encode_split_f32(split as f32),
        FloatWidth::Double => encode_split_f64(split),
    }
}

/// `FP(feature) <= FP(split)` for a width-erased split. `feature_bits` is
/// the feature's pattern at the split's width (sign-extended or not; only
/// the low bits are used).
pub fn flint_le_split(feature_bits: i64, split: &FlintSplit) -> bool {
    match split.width {
        FloatWidth::Single => EncodedSplit {
            constant: split.constant as i32,
            negative_case: split.negative_case,
        }
        .le(i32::truncate_i64(feature_bits)),
        FloatWidth::Double => EncodedSplit {
            constant: split.constant,
            negative_case: split.negative_case,
        }
        .le(feature_bits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> f32 {
        s.parse().unwrap()
    }

    // Split values as stored in a trained model. Their six-place decimals
    // round back to a neighbouring float.
    const S_10: u32 = 0x41213087;
    const S_11: u32 = 0x413f986e;
    const S_10430: u32 = 0x4622fa08;
    const S_NEG_2: u32 = 0xc03bddde;

    fn split(bits: u32) -> f32 {
        f32::from_bits(bits)
    }

    #[test]
    fn model_splits_sit_one_ulp_from_printed_decimals() {
        assert_eq!(format!("{:.6}", split(S_10)), "10.074347");
        assert_eq!(format!("{:.6}", split(S_NEG_2)), "-2.935417");
        // nearest-rounded printed decimals land one ulp away
        for (dec, bits) in [
            ("10.074347", S_10),
            ("11.974715", S_11),
            ("10430.507324", S_10430),
            ("-2.935417", S_NEG_2),
        ] {
            let parsed = f(dec).to_bits() as i64;
            assert_eq!((parsed - bits as i64).abs(), 1, "{dec}");
        }
    }

    #[test]
    fn bits_of_examples() {
        assert_eq!(bits_of(split(S_10)).unwrap(), 0x41213087);
        assert_eq!(bits_of(f("10.074347")).unwrap(), 0x41213086);
        assert_eq!(bits_of(1.0f32).unwrap(), 0x3f800000);
        assert_eq!(bits_of(0.0f32).unwrap(), 0);
        assert_eq!(bits_of(f32::NAN), Err(FlintError::NaN));
        // infinities are allowed here
        assert_eq!(bits_of(f32::INFINITY).unwrap(), 0x7f800000);
    }

    #[test]
    fn ge_examples() {
        let a = bits_of(split(S_10)).unwrap();
        let b = bits_of(split(S_11)).unwrap();
        assert!(!flint_ge(a, b));
        let n = bits_of(split(S_NEG_2)).unwrap();
        assert!(flint_ge(n, n));
        assert!(!flint_ge(bits_of(-1.0f32).unwrap(), bits_of(1.0f32).unwrap()));
    }

    #[test]
    fn ge_orders_negative_zero_below_positive_zero() {
        let pz = bits_of(0.0f32).unwrap();
        let nz = bits_of(-0.0f32).unwrap();
        assert!(flint_ge(pz, nz));
        assert!(!flint_ge(nz, pz));
    }

    #[test]
    fn encode_examples() {
        let s = encode_split_f32(split(S_10)).unwrap();
        assert_eq!((s.constant, s.negative_case), (0x41213087, false));
        let s = encode_split_f32(split(S_11)).unwrap();
        assert_eq!(s.hex(), "0x413f986e");
        let s = encode_split_f32(split(S_10430)).unwrap();
        assert_eq!(s.hex(), "0x4622fa08");
        let s = encode_split_f32(split(S_NEG_2)).unwrap();
        assert_eq!((s.constant, s.negative_case), (0x403bddde, true));
        assert_eq!(s.hex(), "0x403bddde");
        let s = encode_split_f32(-0.0).unwrap();
        assert_eq!((s.constant, s.negative_case), (0, false));
        assert!(encode_split_f32(f32::NAN).is_err());
        assert!(encode_split_f64(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn le_split_examples() {
        let s10 = encode_split_f32(split(S_10)).unwrap();
        assert!(flint_le_split(bits_of(10.0f32).unwrap() as i64, &s10));
        let neg = encode_split_f32(split(S_NEG_2)).unwrap();
        assert!(flint_le_split(bits_of(split(S_NEG_2)).unwrap() as i64, &neg));
        let five = encode_split_f32(5.0).unwrap();
        assert!(flint_le_split(bits_of(-0.0f32).unwrap() as i64, &five));
    }

    #[test]
    fn le_split_zero_cases_follow_ieee() {
        for split in [0.0f32, -0.0] {
            let e = encode(split).unwrap();
            for feat in [0.0f32, -0.0, 1e-45, -1e-45] {
                assert_eq!(e.le(feat.to_signed_bits()), feat <= split, "{feat} <= {split}");
            }
        }
        let e = encode(-1e-45f32).unwrap();
        for feat in [0.0f32, -0.0, -1e-45, -2e-45] {
            assert_eq!(e.le(feat.to_signed_bits()), feat <= -1e-45);
        }
    }

    #[test]
    fn double_width_uses_bit_63() {
        let s = encode_split_f64(-2.5).unwrap();
        assert!(s.negative_case);
        assert_eq!(s.constant, 2.5f64.to_bits() as i64);
        assert_eq!(FloatWidth::Double.sign_mask().value(), i64::MIN);
        assert!(flint_le_split((-3.0f64).to_bits() as i64, &s));
        assert!(!flint_le_split((-2.0f64).to_bits() as i64, &s));
    }

    #[test]
    fn width_representability() {
        assert!(FloatWidth::Single.represents(0.5));
        assert!(!FloatWidth::Single.represents(0.1));
        assert_eq!(FloatWidth::Single.hex_bits(1.0), "0x3f800000");
        assert_eq!(FloatWidth::Double.hex_bits(1.0), "0x3ff0000000000000");
    }
}
