//! Deterministic pseudorandom forests and fuzzed feature rows for testing
//! and benchmarking without a trained model.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flint::FloatWidth;
use crate::model::{Dataset, Forest, Tree, TreeNode};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub n_features: usize,
    pub n_classes: usize,
    pub seed: u64,
    pub width: FloatWidth,
    /// Splits are drawn from `[-split_range, split_range]`.
    pub split_range: f64,
    /// Probability that a non-root node below `max_depth` becomes a leaf.
    pub leaf_probability: f64,
    /// Trees stop growing inner nodes beyond this count.
    pub max_inner_nodes: usize,
}

impl SynthParams {
    pub fn new(n_trees: usize, max_depth: usize, n_features: usize, n_classes: usize, seed: u64) -> Self {
        SynthParams {
            n_trees,
            max_depth,
            n_features,
            n_classes,
            seed,
            width: FloatWidth::Single,
            split_range: 100.0,
            leaf_probability: 0.3,
            max_inner_nodes: 2048,
        }
    }

    pub fn with_width(mut self, width: FloatWidth) -> Self {
        self.width = width;
        self
    }
}

fn draw_split<R: Rng>(rng: &mut R, p: &SynthParams) -> f64 {
    let v = match rng.gen_range(0..20) {
        0 => 0.0,
        1 => -0.0,
        2 => rng.gen_range(-1.0..1.0) * 1e-3,
        _ => rng.gen_range(-p.split_range..=p.split_range),
    };
    match p.width {
        FloatWidth::Single => v as f32 as f64,
        FloatWidth::Double => v,
    }
}

fn grow<R: Rng>(rng: &mut R, p: &SynthParams, nodes: &mut Vec<TreeNode>, depth: usize, inner: &mut usize) -> usize {
    let id = nodes.len();
    let make_inner =
        depth < p.max_depth && *inner < p.max_inner_nodes && (depth == 0 || !rng.gen_bool(p.leaf_probability));
    if !make_inner {
        let prediction = (0..p.n_classes).map(|_| rng.gen_range(0.0..1.0)).collect();
        nodes.push(TreeNode::Leaf { prediction });
        return id;
    }
    *inner += 1;
    nodes.push(TreeNode::Leaf { prediction: Vec::new() });
    let feature = rng.gen_range(0..p.n_features);
    let split = draw_split(rng, p);
    let left = grow(rng, p, nodes, depth + 1, inner);
    let right = grow(rng, p, nodes, depth + 1, inner);
    nodes[id] = TreeNode::Inner {
        feature,
        split,
        left,
        right,
    };
    id
}

/// Builds a forest of at most `max_depth` per tree. The root is always an
/// inner node when `max_depth >= 1`.
///
/// # Panics
/// If any count parameter is zero.
pub fn synth_forest(p: &SynthParams) -> Forest {
    assert!(
        p.n_trees >= 1 && p.max_depth >= 1 && p.n_features >= 1 && p.n_classes >= 1,
        "synth parameters must be >= 1"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let trees = (0..p.n_trees)
        .map(|_| {
            let mut nodes = Vec::new();
            let mut inner = 0;
            grow(&mut rng, p, &mut nodes, 0, &mut inner);
            Tree::new(nodes)
        })
        .collect();
    let metadata = BTreeMap::from([
        ("source".to_string(), "synth".to_string()),
        ("n_trees".to_string(), p.n_trees.to_string()),
        ("max_depth".to_string(), p.max_depth.to_string()),
        ("seed".to_string(), p.seed.to_string()),
    ]);
    Forest::new(p.width, p.n_features, p.n_classes, trees, metadata).expect("synthesized forest is valid")
}

fn split_values_by_feature(forest: &Forest) -> Vec<Vec<f64>> {
    let mut per = vec![Vec::new(); forest.n_features()];
    for t in forest.trees() {
        for n in t.nodes() {
            if let TreeNode::Inner { feature, split, .. } = n {
                per[*feature].push(*split);
            }
        }
    }
    per
}

fn neighbour(v: f64, width: FloatWidth, up: bool) -> f64 {
    match width {
        FloatWidth::Single => {
            let b = (v as f32).to_bits();
            let n = if up { b.wrapping_add(1) } else { b.wrapping_sub(1) };
            let f = f32::from_bits(n);
            if f.is_nan() {
                v
            } else {
                f as f64
            }
        }
        FloatWidth::Double => {
            let n = if up {
                v.to_bits().wrapping_add(1)
            } else {
                v.to_bits().wrapping_sub(1)
            };
            let f = f64::from_bits(n);
            if f.is_nan() {
                v
            } else {
                f
            }
        }
    }
}

fn specials(width: FloatWidth) -> Vec<f64> {
    match width {
        FloatWidth::Single => vec![
            0.0,
            -0.0,
            f32::from_bits(1) as f64,
            -(f32::from_bits(1) as f64),
            f32::from_bits(0x007f_ffff) as f64,
            -(f32::from_bits(0x007f_ffff) as f64),
            f32::MIN_POSITIVE as f64,
            f32::MAX as f64,
            f32::MIN as f64,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ],
        FloatWidth::Double => vec![
            0.0,
            -0.0,
            f64::from_bits(1),
            -f64::from_bits(1),
            f64::from_bits(0x000f_ffff_ffff_ffff),
            -f64::from_bits(0x000f_ffff_ffff_ffff),
            f64::MIN_POSITIVE,
            f64::MAX,
            f64::MIN,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ],
    }
}

/// Rows aimed at the forest's decision boundaries: exact split values,
/// their bit-space neighbours, signed zeros, denormals, infinities and
/// uniform values. Labels are drawn uniformly from the forest's classes.
pub fn synth_rows(forest: &Forest, n_rows: usize, seed: u64) -> Dataset {
    let width = forest.width();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_feature = split_values_by_feature(forest);
    let specials = specials(width);
    let nf = forest.n_features();
    let mut features = Vec::with_capacity(n_rows * nf);
    for _ in 0..n_rows {
        for splits in per_feature.iter().take(nf) {
            let v = match rng.gen_range(0..10) {
                0..=2 if !splits.is_empty() => *splits.choose(&mut rng).expect("non-empty"),
                3 if !splits.is_empty() => neighbour(*splits.choose(&mut rng).expect("non-empty"), width, rng.gen()),
                4 => *specials.choose(&mut rng).expect("non-empty"),
                _ => rng.gen_range(-150.0..150.0),
            };
            features.push(match width {
                FloatWidth::Single => v as f32 as f64,
                FloatWidth::Double => v,
            });
        }
    }
    let labels = (0..n_rows)
        .map(|_| rng.gen_range(0..forest.n_classes() as u32))
        .collect();
    Dataset::new(width, nf, features, Some(labels)).expect("synthesized rows are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_is_a_stump() {
        let f = synth_forest(&SynthParams::new(1, 1, 2, 2, 7));
        assert_eq!(f.trees().len(), 1);
        let t = &f.trees()[0];
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.inner_count(), 1);
    }

    #[test]
    fn deterministic() {
        let p = SynthParams::new(5, 10, 8, 3, 1);
        assert_eq!(synth_forest(&p), synth_forest(&p));
        let f = synth_forest(&p);
        assert_eq!(synth_rows(&f, 50, 2), synth_rows(&f, 50, 2));
    }

    #[test]
    fn respects_max_depth_and_exercises_both_split_paths() {
        for width in [FloatWidth::Single, FloatWidth::Double] {
            let f = synth_forest(&SynthParams::new(10, 12, 8, 3, 5).with_width(width));
            assert!(f.max_depth() <= 12);
            let splits: Vec<f64> = f
                .trees()
                .iter()
                .flat_map(|t| t.nodes())
                .filter_map(|n| match n {
                    TreeNode::Inner { split, .. } => Some(*split),
                    _ => None,
                })
                .collect();
            assert!(splits.iter().any(|s| *s < 0.0));
            assert!(splits.iter().any(|s| *s > 0.0));
            assert!(splits.contains(&0.0));
        }
    }

    #[test]
    fn rows_include_edge_values() {
        let f = synth_forest(&SynthParams::new(3, 5, 4, 2, 11));
        let ds = synth_rows(&f, 2000, 4);
        let vals = ds.features();
        assert!(vals.iter().any(|v| v.is_infinite()));
        assert!(vals.iter().any(|v| *v == 0.0 && v.is_sign_negative()));
        assert!(vals.iter().any(|v| *v != 0.0 && v.abs() < f32::MIN_POSITIVE as f64));
    }
}
