//! Sampled equivalence suite for the production widths.
//!
//! Hardware float comparison is the oracle here. Each run checks:
//!
//! * `flint_ge` against `>=` on uniformly random finite pairs and on the
//!   full cross product of a fixed edge set (zeros, denormal and normal
//!   extremes, ones, infinities and their bit-space neighbours);
//! * the signed-zero convention separately, since `flint_ge` orders
//!   `-0 < +0` where IEEE says they are equal;
//! * the split path `encode(s).le(f)` against `f <= s`;
//! * that the sign-flip form of the negative-split test agrees with the
//!   general operator;
//! * that the exact decoder agrees with the host's float decoding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::flint::{encode, flint_ge, FlintFloat, FloatWidth, SignedBits};
use crate::oracle::{interpret_fp, BitVec, ExactValue};

/// Bumped whenever the edge set composition changes.
pub const EDGE_SET_VERSION: u32 = 1;

/// Recorded default seed for sampled runs.
pub const DEFAULT_SEED: u64 = 42;

/// At most this many sampled features are crossed with every edge split.
const SPLIT_FEATURE_SAMPLES: usize = 4096;

/// At most this many patterns go through the (slow) exact decoder.
const DECODE_SAMPLES: u64 = 100_000;

const MISMATCH_KEEP: usize = 16;

/// Non-negative edge magnitudes as raw bits, before neighbours are added.
fn edge_magnitudes(width: FloatWidth) -> Vec<u64> {
    match width {
        FloatWidth::Single => vec![
            0,
            1,           // smallest denormal
            0x007f_ffff, // largest denormal
            0x0080_0000, // smallest normal
            0x7f7f_ffff, // largest finite
            0x7f80_0000, // infinity
            1.0f32.to_bits() as u64,
            0.5f32.to_bits() as u64,
            2.0f32.to_bits() as u64,
            0x4121_3087, // 10.074347
            0x403b_ddde, // 2.935417
        ],
        FloatWidth::Double => vec![
            0,
            1,
            0x000f_ffff_ffff_ffff,
            0x0010_0000_0000_0000,
            0x7fef_ffff_ffff_ffff,
            0x7ff0_0000_0000_0000,
            1.0f64.to_bits(),
            0.5f64.to_bits(),
            2.0f64.to_bits(),
            10.074347f64.to_bits(),
            2.935417f64.to_bits(),
        ],
    }
}

/// The fixed edge set for a width: every edge magnitude and its bit-space
/// neighbours (staying at or below infinity), with both signs. Sorted by
/// unsigned bit pattern, deduplicated.
pub fn edge_set_bits(width: FloatWidth) -> Vec<u64> {
    let inf = match width {
        FloatWidth::Single => 0x7f80_0000u64,
        FloatWidth::Double => 0x7ff0_0000_0000_0000u64,
    };
    let sign = 1u64 << (width.bits() - 1);
    let mut out = Vec::new();
    for m in edge_magnitudes(width) {
        for cand in [m.checked_sub(1), Some(m), m.checked_add(1)].into_iter().flatten() {
            if cand <= inf {
                out.push(cand);
                out.push(cand | sign);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn edge_set<F: FlintFloat>() -> Vec<F> {
    edge_set_bits(F::WIDTH)
        .into_iter()
        .map(|b| F::from_signed_bits(F::Bits::truncate_i64(b as i64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub width: FloatWidth,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: &'static str,
    pub x_bits: String,
    pub y_bits: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub width: String,
    pub seed: u64,
    pub samples: u64,
    pub edge_set_version: u32,
    pub edge_set_len: usize,
    pub ge_pairs: u64,
    pub signed_zero_pairs: u64,
    pub split_pairs: u64,
    pub algebra_pairs: u64,
    pub decode_checks: u64,
    pub mismatch_count: u64,
    /// The first few mismatches, in discovery order.
    pub mismatches: Vec<Mismatch>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn total_checks(&self) -> u64 {
        self.ge_pairs + self.signed_zero_pairs + self.split_pairs + self.algebra_pairs + self.decode_checks
    }

    fn record<F: FlintFloat>(&mut self, check: &'static str, x: F, y: F) {
        self.mismatch_count += 1;
        if self.mismatches.len() < MISMATCH_KEEP {
            self.mismatches.push(Mismatch {
                check,
                x_bits: format!("{:#x}", x.to_signed_bits()),
                y_bits: format!("{:#x}", y.to_signed_bits()),
            });
        }
    }
}

fn is_zero_pair<F: FlintFloat>(x: F, y: F) -> bool {
    let zero = F::from_f64(0.0);
    x == zero && y == zero && x.to_signed_bits() != y.to_signed_bits()
}

struct Checker<F: FlintFloat> {
    report: SuiteReport,
    _width: std::marker::PhantomData<F>,
}

impl<F: FlintFloat> Checker<F> {
    fn ge(&mut self, x: F, y: F) {
        let got = flint_ge(x.to_signed_bits(), y.to_signed_bits());
        if is_zero_pair(x, y) {
            // -0 < +0 holds instead of IEEE equality
            self.report.signed_zero_pairs += 1;
            let x_is_pos = x.to_signed_bits() == F::Bits::ZERO;
            if got != x_is_pos {
                self.report.record("signed-zero", x, y);
            }
        } else {
            self.report.ge_pairs += 1;
            if got != (x >= y) {
                self.report.record("ge", x, y);
            }
        }
    }

    /// `feature <= split` via the encoded split; split must be finite.
    fn split(&mut self, feature: F, split: F) {
        let enc = match encode(split) {
            Ok(e) => e,
            Err(_) => return,
        };
        self.report.split_pairs += 1;
        if enc.le(feature.to_signed_bits()) != (feature <= split) {
            self.report.record("split", feature, split);
        }
    }

    /// For a negative finite split, the sign-flip form equals the general
    /// operator's `split >= feature`.
    fn algebra(&mut self, feature: F, split: F) {
        let s = split.to_signed_bits();
        if !(split.is_finite() && s < F::Bits::ZERO) {
            return;
        }
        self.report.algebra_pairs += 1;
        let f = feature.to_signed_bits();
        let flipped = (s ^ F::Bits::SIGN_MASK) <= (f ^ F::Bits::SIGN_MASK);
        if flipped != flint_ge(s, f) {
            self.report.record("negative-path", feature, split);
        }
    }

    /// Finite values only: the exact model decodes exponent-all-ones
    /// patterns by the normal formula, the host as infinities.
    fn decode(&mut self, v: F) {
        if !v.is_finite() {
            return;
        }
        self.report.decode_checks += 1;
        let bits = v.to_signed_bits().to_i64() as u64 & width_mask(F::WIDTH);
        let bv = BitVec::new(bits, F::WIDTH.format()).expect("pattern fits width");
        if ExactValue::from_f64(v.to_f64()) != Some(interpret_fp(bv)) {
            self.report.record("decode", v, v);
        }
    }
}

fn width_mask(width: FloatWidth) -> u64 {
    match width {
        FloatWidth::Single => u32::MAX as u64,
        FloatWidth::Double => u64::MAX,
    }
}

fn random_finite<F: FlintFloat, R: Rng>(rng: &mut R) -> F {
    loop {
        let bits: u64 = rng.gen();
        let v = F::from_signed_bits(F::Bits::truncate_i64(bits as i64));
        if v.is_finite() {
            return v;
        }
    }
}

fn run_typed<F: FlintFloat>(cfg: &SuiteConfig) -> SuiteReport {
    let edges: Vec<F> = edge_set();
    let mut c = Checker::<F> {
        report: SuiteReport {
            width: F::WIDTH.to_string(),
            seed: cfg.seed,
            samples: cfg.samples,
            edge_set_version: EDGE_SET_VERSION,
            edge_set_len: edges.len(),
            ..Default::default()
        },
        _width: std::marker::PhantomData,
    };

    for &x in &edges {
        for &y in &edges {
            c.ge(x, y);
            c.split(x, y);
            c.algebra(x, y);
        }
        c.decode(x);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sampled_features = Vec::with_capacity(SPLIT_FEATURE_SAMPLES);
    for i in 0..cfg.samples {
        let x: F = random_finite(&mut rng);
        let y: F = random_finite(&mut rng);
        c.ge(x, y);
        c.split(x, y);
        c.algebra(x, y);
        if i < DECODE_SAMPLES {
            c.decode(x);
        }
        if sampled_features.len() < SPLIT_FEATURE_SAMPLES {
            sampled_features.push(x);
        }
    }

    for &s in &edges {
        for &f in &sampled_features {
            c.split(f, s);
            c.algebra(f, s);
        }
    }
    c.report
}

/// Runs the whole suite for one width. Deterministic for a given config.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    match cfg.width {
        FloatWidth::Single => run_typed::<f32>(cfg),
        FloatWidth::Double => run_typed::<f64>(cfg),
    }
}
