//! Exact interpretations of k-bit vectors as floating point (FP), two's
//! complement (SI) and unsigned (UI) numbers, and an exhaustive checker
//! for the ordering statements that justify integer-only float comparison.
//!
//! Everything here works on parameterized mini-float layouts `(k, j, x)`:
//! one sign bit, `j` exponent bits, `x` mantissa bits. IEEE single and
//! double precision are the `(32, 8, 23)` and `(64, 11, 52)` instances.
//!
//! FP values are carried as [`ExactValue`] dyadic rationals, so the oracle
//! never touches host floating point. Negative zero orders strictly below
//! positive zero. Exponent-all-ones patterns (IEEE Inf/NaN) are decoded
//! with the normal formula and get ordinary large magnitudes.

#![allow(clippy::unusual_byte_groupings)] // sign_exponent_mantissa

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Default upper bound on `k` for exhaustive pair enumeration (2^24 pairs).
pub const DEFAULT_MAX_CHECK_BITS: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("total bits {k} must equal 1 + exponent bits {j} + mantissa bits {x}")]
    LayoutMismatch { k: u32, j: u32, x: u32 },
    #[error("mini-float total bits must be within 3..=16, got {0}")]
    TotalBitsOutOfRange(u32),
    #[error("exponent bits must be at least 2, got {0}")]
    ExponentTooNarrow(u32),
    #[error("mantissa bits must be at least 1, got {0}")]
    MantissaTooNarrow(u32),
    #[error("bit pattern {bits:#x} does not fit in {k} bits")]
    PatternTooWide { bits: u64, k: u32 },
    #[error("cannot parse format '{0}', expected k,j,x")]
    Unparseable(String),
}

/// Bit layout of a floating point format: sign, exponent and mantissa widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MiniFloatFormat {
    total_bits: u32,
    exponent_bits: u32,
    mantissa_bits: u32,
}

impl MiniFloatFormat {
    /// The IEEE 754 single precision layout.
    pub const SINGLE: MiniFloatFormat = MiniFloatFormat {
        total_bits: 32,
        exponent_bits: 8,
        mantissa_bits: 23,
    };

    /// The IEEE 754 double precision layout.
    pub const DOUBLE: MiniFloatFormat = MiniFloatFormat {
        total_bits: 64,
        exponent_bits: 11,
        mantissa_bits: 52,
    };

    /// The default exhaustive verification format, `(8, 4, 3)`.
    pub const DEFAULT: MiniFloatFormat = MiniFloatFormat {
        total_bits: 8,
        exponent_bits: 4,
        mantissa_bits: 3,
    };

    pub fn new(total_bits: u32, exponent_bits: u32, mantissa_bits: u32) -> Result<Self, FormatError> {
        if !(3..=16).contains(&total_bits) {
            return Err(FormatError::TotalBitsOutOfRange(total_bits));
        }
        if exponent_bits < 2 {
            return Err(FormatError::ExponentTooNarrow(exponent_bits));
        }
        if mantissa_bits < 1 {
            return Err(FormatError::MantissaTooNarrow(mantissa_bits));
        }
        if total_bits != 1 + exponent_bits + mantissa_bits {
            return Err(FormatError::LayoutMismatch {
                k: total_bits,
                j: exponent_bits,
                x: mantissa_bits,
            });
        }
        Ok(MiniFloatFormat {
            total_bits,
            exponent_bits,
            mantissa_bits,
        })
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    pub fn exponent_bits(&self) -> u32 {
        self.exponent_bits
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.mantissa_bits
    }

    /// `2^(j-1) - 1`.
    pub fn bias(&self) -> i64 {
        (1i64 << (self.exponent_bits - 1)) - 1
    }

    /// Number of distinct bit patterns, `2^k`.
    pub fn pattern_count(&self) -> u128 {
        1u128 << self.total_bits
    }

    fn value_mask(&self) -> u64 {
        if self.total_bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.total_bits) - 1
        }
    }

    fn sign_mask(&self) -> u64 {
        1u64 << (self.total_bits - 1)
    }

    /// Every bit vector of this format in ascending unsigned order.
    ///
    /// Only meaningful for the small formats; panics for k > 32.
    pub fn patterns(&self) -> impl Iterator<Item = BitVec> + '_ {
        assert!(
            self.total_bits <= 32,
            "refusing to enumerate 2^{} patterns",
            self.total_bits
        );
        (0..(1u64 << self.total_bits)).map(move |bits| BitVec { bits, format: *self })
    }
}

impl fmt::Display for MiniFloatFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.total_bits, self.exponent_bits, self.mantissa_bits)
    }
}

impl FromStr for MiniFloatFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| FormatError::Unparseable(s.to_string()))?;
        match parts.as_slice() {
            [k, j, x] => MiniFloatFormat::new(*k, *j, *x),
            _ => Err(FormatError::Unparseable(s.to_string())),
        }
    }
}

/// A k-bit vector together with the layout used to interpret it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVec {
    bits: u64,
    format: MiniFloatFormat,
}

impl BitVec {
    pub fn new(bits: u64, format: MiniFloatFormat) -> Result<Self, FormatError> {
        if bits & !format.value_mask() != 0 {
            return Err(FormatError::PatternTooWide {
                bits,
                k: format.total_bits,
            });
        }
        Ok(BitVec { bits, format })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn format(&self) -> MiniFloatFormat {
        self.format
    }

    /// Bit `i`, counted from the least significant end.
    pub fn bit(&self, i: u32) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn sign_bit(&self) -> bool {
        self.bit(self.format.total_bits - 1)
    }

    pub fn exponent_field(&self) -> u64 {
        (self.bits >> self.format.mantissa_bits) & ((1u64 << self.format.exponent_bits) - 1)
    }

    pub fn mantissa_field(&self) -> u64 {
        self.bits & ((1u64 << self.format.mantissa_bits) - 1)
    }

    /// The same magnitude bits with the sign bit inverted.
    pub fn flip_sign(&self) -> BitVec {
        BitVec {
            bits: self.bits ^ self.format.sign_mask(),
            format: self.format,
        }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.format.total_bits as usize;
        let j = self.format.exponent_bits as usize;
        let s = format!("{:0width$b}", self.bits, width = k);
        write!(f, "0b{}_{}_{}", &s[..1], &s[1..1 + j], &s[1 + j..])
    }
}

/// An exact dyadic rational `(-1)^negative * numerator * 2^exponent`.
///
/// Canonical form keeps the numerator odd (or zero with exponent 0), so
/// structural equality is value equality. Zero is signed and `-0 < +0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactValue {
    negative: bool,
    numerator: BigUint,
    exponent: i64,
}

impl ExactValue {
    pub fn new(negative: bool, numerator: BigUint, exponent: i64) -> Self {
        if numerator.is_zero() {
            return ExactValue {
                negative,
                numerator,
                exponent: 0,
            };
        }
        let tz = numerator.trailing_zeros().unwrap_or(0);
        ExactValue {
            negative,
            numerator: numerator >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        ExactValue::new(false, BigUint::zero(), 0)
    }

    pub fn negative_zero() -> Self {
        ExactValue::new(true, BigUint::zero(), 0)
    }

    pub fn from_integer(v: i64) -> Self {
        ExactValue::new(v < 0, BigUint::from(v.unsigned_abs()), 0)
    }

    /// Decomposes a finite host double by arithmetic alone (halving and
    /// doubling, both exact in binary floating point), never by reading its
    /// bit pattern. Returns `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        let negative = v < 0.0 || (v == 0.0 && (1.0 / v) < 0.0);
        let mut m = v.abs();
        let mut exponent = 0i64;
        while m.fract() != 0.0 {
            m *= 2.0;
            exponent -= 1;
        }
        const TWO_POW_53: f64 = 9_007_199_254_740_992.0;
        while m >= TWO_POW_53 {
            m /= 2.0;
            exponent += 1;
        }
        Some(ExactValue::new(negative, BigUint::from(m as u64), exponent))
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn abs(&self) -> Self {
        ExactValue {
            negative: false,
            numerator: self.numerator.clone(),
            exponent: self.exponent,
        }
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let top_a = self.exponent + self.numerator.bits() as i64;
        let top_b = other.exponent + other.numerator.bits() as i64;
        if top_a != top_b {
            return top_a.cmp(&top_b);
        }
        let low = self.exponent.min(other.exponent);
        let a = &self.numerator << (self.exponent - low) as usize;
        let b = &other.numerator << (other.exponent - low) as usize;
        a.cmp(&b)
    }

    /// Lossy conversion, for display only.
    pub fn to_f64_lossy(&self) -> f64 {
        let m = self.numerator.to_f64().unwrap_or(f64::INFINITY);
        let v = m * 2f64.powi(self.exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
        if self.negative {
            -v
        } else {
            v
        }
    }
}

impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.negative, other.negative) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.cmp_magnitude(other),
            (true, true) => other.cmp_magnitude(self),
        }
    }
}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        if self.exponent == 0 || self.is_zero() {
            write!(f, "{sign}{}", self.numerator)
        } else {
            write!(f, "{sign}{}*2^{}", self.numerator, self.exponent)
        }
    }
}

/// Two's complement interpretation: the MSB weighs `-2^(k-1)`.
pub fn interpret_si(b: BitVec) -> i64 {
    let k = b.format.total_bits;
    let mut sum: i128 = 0;
    for i in 0..k - 1 {
        if b.bit(i) {
            sum += 1i128 << i;
        }
    }
    if b.bit(k - 1) {
        sum -= 1i128 << (k - 1);
    }
    sum as i64
}

/// Unsigned interpretation: plain positional weights.
pub fn interpret_ui(b: BitVec) -> u64 {
    (0..b.format.total_bits).filter(|&i| b.bit(i)).map(|i| 1u64 << i).sum()
}

fn decode(b: BitVec, negative: bool) -> ExactValue {
    let x = b.format.mantissa_bits as i64;
    let bias = b.format.bias();
    let e = b.exponent_field();
    let m = b.mantissa_field();
    if e == 0 {
        // denormalized: exponent -bias+1, no implicit one
        ExactValue::new(negative, BigUint::from(m), 1 - bias - x)
    } else {
        let significand = BigUint::from(m) + (BigUint::from(1u8) << x as usize);
        ExactValue::new(negative, significand, e as i64 - bias - x)
    }
}

/// Floating point interpretation as an exact value.
pub fn interpret_fp(b: BitVec) -> ExactValue {
    decode(b, b.sign_bit())
}

/// `|FP(B)|`: the floating point interpretation with the sign ignored.
pub fn interpret_fp_abs(b: BitVec) -> ExactValue {
    decode(b, false)
}

/// `FP(X) >= FP(Y)` using only signed integer comparisons and logic:
/// `(SI(X) >= SI(Y)) XOR (SI(X) < 0 && SI(Y) < 0 && SI(X) != SI(Y))`.
pub fn flint_ge_general(xb: BitVec, yb: BitVec) -> bool {
    debug_assert_eq!(xb.format, yb.format);
    let x = interpret_si(xb);
    let y = interpret_si(yb);
    (x >= y) ^ (x < 0 && y < 0 && x != y)
}

/// `FP(X) >= FP(Y)` when the sign of X is inspected first: for negative X
/// both operands are negated (sign bit flipped) and exchanged, which leaves
/// at least one non-negative operand in the integer comparison.
pub fn flint_ge_sign_known(xb: BitVec, yb: BitVec) -> bool {
    debug_assert_eq!(xb.format, yb.format);
    if interpret_si(xb) < 0 {
        interpret_si(yb.flip_sign()) >= interpret_si(xb.flip_sign())
    } else {
        interpret_si(xb) >= interpret_si(yb)
    }
}

/// Mutation fixture: the general operator with its both-negative
/// correction term removed. Exists so the checker can be shown to fail.
pub fn ge_without_negative_correction(xb: BitVec, yb: BitVec) -> bool {
    interpret_si(xb) >= interpret_si(yb)
}

/// The ordering statements the checker knows how to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statement {
    /// `FP(X) = FP(Y) <=> X = Y <=> SI(X) = SI(Y)`.
    Lemma1,
    /// Same sign bit: `|FP(X)| > |FP(Y)| <=> SI(X) > SI(Y)`.
    Lemma2,
    /// Both sign bits 0: `FP(X) > FP(Y) <=> SI(X) > SI(Y)`.
    Lemma3,
    /// Both sign bits 1: `FP(X) >= FP(Y) <=> SI(X) <= SI(Y)`.
    Lemma4,
    /// Different sign bits: `FP(X) > FP(Y) <=> SI(X) > SI(Y)`.
    Lemma5,
    /// Both sign bits 1: `FP(X) > FP(Y) <=> SI(X) < SI(Y)`.
    Lemma6,
    /// Two-case rule: invert the integer order iff both FP values are
    /// negative and distinct.
    Corollary1,
    /// The XOR operator, [`flint_ge_general`].
    Theorem1,
    /// The sign-first operator, [`flint_ge_sign_known`].
    Theorem2,
}

impl Statement {
    pub const ALL: [Statement; 9] = [
        Statement::Lemma1,
        Statement::Lemma2,
        Statement::Lemma3,
        Statement::Lemma4,
        Statement::Lemma5,
        Statement::Lemma6,
        Statement::Corollary1,
        Statement::Theorem1,
        Statement::Theorem2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Statement::Lemma1 => "lemma1",
            Statement::Lemma2 => "lemma2",
            Statement::Lemma3 => "lemma3",
            Statement::Lemma4 => "lemma4",
            Statement::Lemma5 => "lemma5",
            Statement::Lemma6 => "lemma6",
            Statement::Corollary1 => "corollary1",
            Statement::Theorem1 => "theorem1",
            Statement::Theorem2 => "theorem2",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Statement::ALL
            .iter()
            .copied()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown statement '{s}'"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("format {format} has {bits} bits; exhaustive checking is bounded to k <= {max} ({max_pairs} pairs)")]
    FormatTooLarge {
        format: MiniFloatFormat,
        bits: u32,
        max: u32,
        max_pairs: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckLimits {
    pub max_bits: u32,
}

impl Default for CheckLimits {
    fn default() -> Self {
        CheckLimits {
            max_bits: DEFAULT_MAX_CHECK_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub x: BitVec,
    pub y: BitVec,
    pub fp_x: ExactValue,
    pub fp_y: ExactValue,
    pub si_x: i64,
    pub si_y: i64,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X={} (FP={}, SI={}) Y={} (FP={}, SI={})",
            self.x, self.fp_x, self.si_x, self.y, self.fp_y, self.si_y
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub subject: String,
    pub format: MiniFloatFormat,
    /// Ordered pairs visited, always `2^(2k)`.
    pub pairs_enumerated: u64,
    /// Pairs satisfying the statement's precondition.
    pub pairs_applicable: u64,
    /// Lexicographically smallest violating `(X, Y)` by unsigned bits.
    pub counterexample: Option<Counterexample>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Per-pattern facts precomputed once per format: SI value, and dense
/// ranks of FP and |FP| under exact rational order.
struct PatternTable {
    format: MiniFloatFormat,
    si: Vec<i64>,
    fp_rank: Vec<u32>,
    abs_rank: Vec<u32>,
    fp_negative: Vec<bool>,
    fp: Vec<ExactValue>,
}

fn dense_ranks(values: &[ExactValue]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut ranks = vec![0u32; values.len()];
    let mut rank = 0u32;
    for w in 0..order.len() {
        if w > 0 && values[order[w]] != values[order[w - 1]] {
            rank += 1;
        }
        ranks[order[w]] = rank;
    }
    ranks
}

impl PatternTable {
    fn build(format: MiniFloatFormat) -> Self {
        let patterns: Vec<BitVec> = format.patterns().collect();
        let fp: Vec<ExactValue> = patterns.iter().map(|&b| interpret_fp(b)).collect();
        let abs: Vec<ExactValue> = patterns.iter().map(|&b| interpret_fp_abs(b)).collect();
        let zero = ExactValue::zero();
        PatternTable {
            format,
            si: patterns.iter().map(|&b| interpret_si(b)).collect(),
            fp_rank: dense_ranks(&fp),
            abs_rank: dense_ranks(&abs),
            fp_negative: fp.iter().map(|v| *v < zero).collect(),
            fp,
        }
    }

    fn bitvec(&self, i: usize) -> BitVec {
        BitVec {
            bits: i as u64,
            format: self.format,
        }
    }

    fn sign(&self, i: usize) -> bool {
        self.bitvec(i).sign_bit()
    }

    fn fp_ge(&self, x: usize, y: usize) -> bool {
        self.fp_rank[x] >= self.fp_rank[y]
    }

    /// `None` when the pair falls outside the statement's precondition.
    fn holds(&self, st: Statement, x: usize, y: usize) -> Option<bool> {
        let (sx, sy) = (self.si[x], self.si[y]);
        let (fx, fy) = (self.fp_rank[x], self.fp_rank[y]);
        match st {
            Statement::Lemma1 => {
                let fp_eq = fx == fy;
                let bits_eq = x == y;
                let si_eq = sx == sy;
                Some(fp_eq == bits_eq && bits_eq == si_eq)
            }
            Statement::Lemma2 => {
                (self.sign(x) == self.sign(y)).then(|| (self.abs_rank[x] > self.abs_rank[y]) == (sx > sy))
            }
            Statement::Lemma3 => (!self.sign(x) && !self.sign(y)).then_some((fx > fy) == (sx > sy)),
            Statement::Lemma4 => (self.sign(x) && self.sign(y)).then_some((fx >= fy) == (sx <= sy)),
            Statement::Lemma5 => (self.sign(x) != self.sign(y)).then_some((fx > fy) == (sx > sy)),
            Statement::Lemma6 => (self.sign(x) && self.sign(y)).then_some((fx > fy) == (sx < sy)),
            Statement::Corollary1 => {
                let rhs = if self.fp_negative[x] && self.fp_negative[y] && fx != fy {
                    sx < sy
                } else {
                    sx >= sy
                };
                Some(self.fp_ge(x, y) == rhs)
            }
            Statement::Theorem1 => Some(self.fp_ge(x, y) == flint_ge_general(self.bitvec(x), self.bitvec(y))),
            Statement::Theorem2 => Some(self.fp_ge(x, y) == flint_ge_sign_known(self.bitvec(x), self.bitvec(y))),
        }
    }

    fn counterexample(&self, x: usize, y: usize) -> Counterexample {
        Counterexample {
            x: self.bitvec(x),
            y: self.bitvec(y),
            fp_x: self.fp[x].clone(),
            fp_y: self.fp[y].clone(),
            si_x: self.si[x],
            si_y: self.si[y],
        }
    }

    fn scan(&self, subject: String, mut pred: impl FnMut(usize, usize) -> Option<bool>) -> CheckResult {
        let n = self.si.len();
        let mut applicable = 0u64;
        let mut counterexample = None;
        for x in 0..n {
            for y in 0..n {
                match pred(x, y) {
                    None => {}
                    Some(ok) => {
                        applicable += 1;
                        if !ok && counterexample.is_none() {
                            counterexample = Some(self.counterexample(x, y));
                        }
                    }
                }
            }
        }
        CheckResult {
            subject,
            format: self.format,
            pairs_enumerated: (n as u64) * (n as u64),
            pairs_applicable: applicable,
            counterexample,
        }
    }
}

fn check_bounds(format: MiniFloatFormat, limits: &CheckLimits) -> Result<(), CheckError> {
    if format.total_bits > limits.max_bits {
        return Err(CheckError::FormatTooLarge {
            format,
            bits: format.total_bits,
            max: limits.max_bits,
            max_pairs: 1u128 << (2 * limits.max_bits),
        });
    }
    Ok(())
}

/// Exhaustively checks one statement over all ordered pairs of the format.
pub fn check_theorem(
    format: MiniFloatFormat,
    statement: Statement,
    limits: &CheckLimits,
) -> Result<CheckResult, CheckError> {
    Ok(check_statements(format, &[statement], limits)?.remove(0))
}

/// Checks several statements, sharing the per-format pattern table.
pub fn check_statements(
    format: MiniFloatFormat,
    statements: &[Statement],
    limits: &CheckLimits,
) -> Result<Vec<CheckResult>, CheckError> {
    check_bounds(format, limits)?;
    let table = PatternTable::build(format);
    Ok(statements
        .iter()
        .map(|&st| table.scan(st.name().to_string(), |x, y| table.holds(st, x, y)))
        .collect())
}

/// Checks an arbitrary candidate `>=` operator against the exact oracle on
/// every ordered pair.
pub fn check_operator(
    format: MiniFloatFormat,
    name: &str,
    op: impl Fn(BitVec, BitVec) -> bool,
    limits: &CheckLimits,
) -> Result<CheckResult, CheckError> {
    check_bounds(format, limits)?;
    let table = PatternTable::build(format);
    Ok(table.scan(name.to_string(), |x, y| {
        Some(table.fp_ge(x, y) == op(table.bitvec(x), table.bitvec(y)))
    }))
}
