use proptest::prelude::*;

use flint::bench::{geomean, population_variance};
use flint::codegen::{emit_ifelse, verify_source, Flavor};
use flint::flint::{bits_of, encode, flint_ge, FloatWidth};
use flint::inference::{prepare, ComparisonStrategy};
use flint::model::Forest;
use flint::synth::{synth_forest, synth_rows, SynthParams};

fn non_nan_f32() -> impl Strategy<Value = f32> {
    any::<u32>()
        .prop_map(f32::from_bits)
        .prop_filter("NaN", |v| !v.is_nan())
}

fn non_nan_f64() -> impl Strategy<Value = f64> {
    any::<u64>()
        .prop_map(f64::from_bits)
        .prop_filter("NaN", |v| !v.is_nan())
}

/// Host `>=` with -0 ordered below +0.
fn total_ge_f32(x: f32, y: f32) -> bool {
    if x == 0.0 && y == 0.0 {
        !(x.is_sign_negative() && y.is_sign_positive())
    } else {
        x >= y
    }
}

fn total_ge_f64(x: f64, y: f64) -> bool {
    if x == 0.0 && y == 0.0 {
        !(x.is_sign_negative() && y.is_sign_positive())
    } else {
        x >= y
    }
}

fn width() -> impl Strategy<Value = FloatWidth> {
    prop_oneof![Just(FloatWidth::Single), Just(FloatWidth::Double)]
}

proptest! {
    #[test]
    fn ge_matches_host_f32(x in non_nan_f32(), y in non_nan_f32()) {
        prop_assert_eq!(flint_ge(bits_of(x).unwrap(), bits_of(y).unwrap()), total_ge_f32(x, y));
    }

    #[test]
    fn ge_matches_host_f64(x in non_nan_f64(), y in non_nan_f64()) {
        prop_assert_eq!(flint_ge(bits_of(x).unwrap(), bits_of(y).unwrap()), total_ge_f64(x, y));
    }

    #[test]
    fn ge_matches_host_near_each_other(x in non_nan_f32(), d in -3i32..=3) {
        let y = f32::from_bits((x.to_bits() as i32).wrapping_add(d) as u32);
        prop_assume!(!y.is_nan());
        prop_assert_eq!(flint_ge(bits_of(x).unwrap(), bits_of(y).unwrap()), total_ge_f32(x, y));
    }

    #[test]
    fn encoded_split_matches_host_le(x in non_nan_f32(), s in non_nan_f32()) {
        prop_assume!(s.is_finite());
        prop_assert_eq!(encode(s).unwrap().le(bits_of(x).unwrap()), x <= s);
    }

    #[test]
    fn encoded_split_matches_host_le_f64(x in non_nan_f64(), s in non_nan_f64()) {
        prop_assume!(s.is_finite());
        prop_assert_eq!(encode(s).unwrap().le(bits_of(x).unwrap()), x <= s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strategies_agree_on_synth_forests(
        trees in 1usize..6,
        depth in 1usize..14,
        features in 1usize..10,
        classes in 1usize..5,
        seed in any::<u64>(),
        width in width(),
    ) {
        let forest = synth_forest(&SynthParams::new(trees, depth, features, classes, seed).with_width(width));
        let ds = synth_rows(&forest, 200, seed ^ 0x5eed);
        let host = prepare(&forest, ComparisonStrategy::HostFloat);
        let flint = prepare(&forest, ComparisonStrategy::Flint);
        for row in ds.rows() {
            prop_assert_eq!(host.trace(row).unwrap(), flint.trace(row).unwrap());
            prop_assert_eq!(host.predict_forest(row).unwrap(), flint.predict_forest(row).unwrap());
        }
    }

    #[test]
    fn emission_is_deterministic_and_well_formed(
        trees in 1usize..4,
        depth in 1usize..10,
        seed in any::<u64>(),
        width in width(),
    ) {
        let forest = synth_forest(&SynthParams::new(trees, depth, 6, 3, seed).with_width(width));
        for flavor in [Flavor::Float, Flavor::Flint] {
            let a = emit_ifelse(&forest, flavor);
            prop_assert_eq!(a.text(), emit_ifelse(&forest, flavor).text());
            let report = verify_source(&a);
            prop_assert!(report.passed(), "{:?}", report.violations);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), width in width()) {
        let forest = synth_forest(&SynthParams::new(3, 6, 5, 2, seed).with_width(width));
        let text = serde_json::to_string(&forest.to_json()).unwrap();
        prop_assert_eq!(Forest::from_json_str(&text).unwrap(), forest);
    }
}

proptest! {
    #[test]
    fn geomean_lies_between_extremes(xs in prop::collection::vec(0.01f64..100.0, 1..20)) {
        let g = geomean(&xs);
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(0.0, f64::max);
        prop_assert!(g >= lo * (1.0 - 1e-12) && g <= hi * (1.0 + 1e-12));
        prop_assert!(population_variance(&xs) >= 0.0);
    }

    #[test]
    fn geomean_of_constant_is_constant(x in 0.01f64..100.0, n in 1usize..10) {
        prop_assert!((geomean(&vec![x; n]) - x).abs() <= x * 1e-12);
        prop_assert!(population_variance(&vec![x; n]).abs() <= 1e-9 * x * x);
    }
}
