//! Native-tree interpreter with a pluggable split comparison.
//!
//! A [`Forest`] is flattened into per-tree parallel arrays. Under
//! [`ComparisonStrategy::Flint`] every split is encoded once during
//! [`prepare`], rows are reinterpreted as signed integers, and traversal
//! performs integer comparisons only. Class selection under `Flint` also
//! compares score bit patterns rather than floats.
//!
//! Leaf scores are summed across trees in tree order, starting from +0.0,
//! and the argmax breaks ties toward the lowest class index.

use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flint::{encode, flint_ge, EncodedSplit, FlintFloat, FlintSplit, FloatWidth, SignedBits};
use crate::model::{Dataset, Forest, TreeNode};

const LEAF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComparisonStrategy {
    #[serde(rename = "float")]
    HostFloat,
    #[serde(rename = "flint")]
    Flint,
}

impl ComparisonStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComparisonStrategy::HostFloat => "float",
            ComparisonStrategy::Flint => "flint",
        }
    }
}

impl fmt::Display for ComparisonStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ComparisonStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" | "host" | "hostfloat" => Ok(ComparisonStrategy::HostFloat),
            "flint" => Ok(ComparisonStrategy::Flint),
            _ => Err(format!("unknown strategy '{s}', expected float or flint")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("row has {found} features, model expects {expected}")]
    FeatureCount { expected: usize, found: usize },
    #[error("dataset width {dataset} does not match model width {model}")]
    WidthMismatch { model: FloatWidth, dataset: FloatWidth },
    #[error("row {row}: label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { row: usize, label: u32, n_classes: usize },
    #[error("feature {col} is NaN")]
    NaNFeature { col: usize },
}

#[cfg(test)]
thread_local! {
    static FLOAT_COMPARISONS: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

#[cfg(test)]
pub(crate) fn float_comparisons() -> u64 {
    FLOAT_COMPARISONS.with(|c| c.get())
}

#[inline(always)]
fn host_le<F: PartialOrd>(a: F, b: F) -> bool {
    #[cfg(test)]
    FLOAT_COMPARISONS.with(|c| c.set(c.get() + 1));
    a <= b
}

#[inline(always)]
fn host_gt<F: PartialOrd>(a: F, b: F) -> bool {
    #[cfg(test)]
    FLOAT_COMPARISONS.with(|c| c.set(c.get() + 1));
    a > b
}

#[derive(Debug, Clone, PartialEq)]
enum SplitTable<F: FlintFloat> {
    Host(Vec<F>),
    Flint(Vec<EncodedSplit<F::Bits>>),
}

/// One tree as parallel arrays indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedTree<F: FlintFloat> {
    /// `LEAF` marks a leaf node.
    feature: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    splits: SplitTable<F>,
    /// Leaf node id -> row into `predictions`; unused for inner nodes.
    leaf_row: Vec<u32>,
    predictions: Vec<f64>,
    n_classes: usize,
}

/// Where a row ended up in one tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafTrace {
    pub leaf: usize,
    /// Inner nodes visited on the way.
    pub steps: usize,
}

impl<F: FlintFloat> PreparedTree<F> {
    fn build(nodes: &[TreeNode], n_classes: usize, strategy: ComparisonStrategy) -> Self {
        let n = nodes.len();
        let mut t = PreparedTree {
            feature: vec![LEAF; n],
            left: vec![0; n],
            right: vec![0; n],
            splits: match strategy {
                ComparisonStrategy::HostFloat => SplitTable::Host(Vec::with_capacity(n)),
                ComparisonStrategy::Flint => SplitTable::Flint(Vec::with_capacity(n)),
            },
            leaf_row: vec![0; n],
            predictions: Vec::new(),
            n_classes,
        };
        for (id, node) in nodes.iter().enumerate() {
            let split = match node {
                TreeNode::Inner {
                    feature,
                    split,
                    left,
                    right,
                } => {
                    t.feature[id] = *feature as u32;
                    t.left[id] = *left as u32;
                    t.right[id] = *right as u32;
                    F::from_f64(*split)
                }
                TreeNode::Leaf { prediction } => {
                    t.leaf_row[id] = (t.predictions.len() / n_classes.max(1)) as u32;
                    t.predictions.extend_from_slice(prediction);
                    F::from_f64(0.0)
                }
            };
            match &mut t.splits {
                SplitTable::Host(v) => v.push(split),
                SplitTable::Flint(v) => v.push(encode(split).expect("validated forest has finite splits")),
            }
        }
        t
    }

    #[inline]
    fn walk_host(&self, splits: &[F], row: &[F]) -> LeafTrace {
        let mut i = 0usize;
        let mut steps = 0;
        loop {
            let f = self.feature[i];
            if f == LEAF {
                return LeafTrace { leaf: i, steps };
            }
            steps += 1;
            i = if host_le(row[f as usize], splits[i]) {
                self.left[i]
            } else {
                self.right[i]
            } as usize;
        }
    }

    #[inline]
    fn walk_flint(&self, splits: &[EncodedSplit<F::Bits>], row: &[F::Bits]) -> LeafTrace {
        let mut i = 0usize;
        let mut steps = 0;
        loop {
            let f = self.feature[i];
            if f == LEAF {
                return LeafTrace { leaf: i, steps };
            }
            steps += 1;
            i = if splits[i].le(row[f as usize]) {
                self.left[i]
            } else {
                self.right[i]
            } as usize;
        }
    }

    /// Walks from the root until a leaf: left when `row[FI] <= SP`.
    #[inline]
    pub fn trace(&self, row: &[F]) -> LeafTrace {
        match &self.splits {
            SplitTable::Host(s) => self.walk_host(s, row),
            SplitTable::Flint(s) => self.walk_flint(s, bytemuck::cast_slice(row)),
        }
    }

    pub fn leaf_prediction(&self, leaf: usize) -> &[f64] {
        let r = self.leaf_row[leaf] as usize * self.n_classes;
        &self.predictions[r..r + self.n_classes]
    }

    /// Prediction row of the leaf `row` reaches.
    pub fn predict(&self, row: &[F]) -> &[f64] {
        self.leaf_prediction(self.trace(row).leaf)
    }

    pub fn node_count(&self) -> usize {
        self.feature.len()
    }

    fn flint_splits(&self) -> Vec<Option<FlintSplit>> {
        (0..self.node_count())
            .map(|i| {
                if self.feature[i] == LEAF {
                    return None;
                }
                let (constant, negative_case) = match &self.splits {
                    SplitTable::Flint(s) => (s[i].constant.to_i64(), s[i].negative_case),
                    SplitTable::Host(s) => {
                        let e = encode(s[i]).expect("finite split");
                        (e.constant.to_i64(), e.negative_case)
                    }
                };
                Some(FlintSplit {
                    constant,
                    negative_case,
                    width: F::WIDTH,
                    original_value: format!("{:?}", self.host_split(i)),
                })
            })
            .collect()
    }

    fn host_split(&self, i: usize) -> F {
        match &self.splits {
            SplitTable::Host(s) => s[i],
            SplitTable::Flint(s) => {
                let c = s[i].constant;
                F::from_signed_bits(if s[i].negative_case { c ^ F::Bits::SIGN_MASK } else { c })
            }
        }
    }
}

/// A forest flattened for one width and one comparison strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedEnsemble<F: FlintFloat> {
    strategy: ComparisonStrategy,
    n_features: usize,
    n_classes: usize,
    trees: Vec<PreparedTree<F>>,
}

impl<F: FlintFloat> PreparedEnsemble<F> {
    fn build(forest: &Forest, strategy: ComparisonStrategy) -> Self {
        debug_assert_eq!(forest.width(), F::WIDTH);
        PreparedEnsemble {
            strategy,
            n_features: forest.n_features(),
            n_classes: forest.n_classes(),
            trees: forest
                .trees()
                .iter()
                .map(|t| PreparedTree::build(t.nodes(), forest.n_classes(), strategy))
                .collect(),
        }
    }

    pub fn trees(&self) -> &[PreparedTree<F>] {
        &self.trees
    }

    pub fn strategy(&self) -> ComparisonStrategy {
        self.strategy
    }

    /// Summed leaf scores. `row` must have `n_features` entries.
    pub fn scores_into(&self, row: &[F], scores: &mut [f64]) {
        scores.iter_mut().for_each(|s| *s = 0.0);
        for t in &self.trees {
            for (s, p) in scores.iter_mut().zip(t.predict(row)) {
                *s += p;
            }
        }
    }

    pub fn argmax(&self, scores: &[f64]) -> usize {
        let mut best = 0;
        match self.strategy {
            ComparisonStrategy::HostFloat => {
                for c in 1..scores.len() {
                    if host_gt(scores[c], scores[best]) {
                        best = c;
                    }
                }
            }
            ComparisonStrategy::Flint => {
                let bits: &[i64] = bytemuck::cast_slice(scores);
                for c in 1..bits.len() {
                    if !flint_ge(bits[best], bits[c]) {
                        best = c;
                    }
                }
            }
        }
        best
    }

    pub fn predict_row(&self, row: &[F], scores: &mut [f64]) -> usize {
        self.scores_into(row, scores);
        self.argmax(scores)
    }

    /// Classifies every row of a row-major matrix; returns the sum of the
    /// predicted class indices so timed passes cannot be optimized away.
    pub fn run_pass(&self, matrix: &[F]) -> usize {
        let mut scores = vec![0.0; self.n_classes];
        matrix
            .chunks_exact(self.n_features)
            .map(|row| self.predict_row(row, &mut scores))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PreparedForest {
    Single(PreparedEnsemble<f32>),
    Double(PreparedEnsemble<f64>),
}

macro_rules! dispatch {
    ($self:expr, $e:ident => $body:expr) => {
        match $self {
            PreparedForest::Single($e) => $body,
            PreparedForest::Double($e) => $body,
        }
    };
}

/// Flattens a validated forest. Under `Flint` each split is encoded here,
/// resolving its sign case once.
pub fn prepare(forest: &Forest, strategy: ComparisonStrategy) -> PreparedForest {
    match forest.width() {
        FloatWidth::Single => PreparedForest::Single(PreparedEnsemble::build(forest, strategy)),
        FloatWidth::Double => PreparedForest::Double(PreparedEnsemble::build(forest, strategy)),
    }
}

fn typed_row<F: FlintFloat>(row: &[f64]) -> Result<Vec<F>, InferenceError> {
    row.iter()
        .enumerate()
        .map(|(col, v)| {
            if v.is_nan() {
                Err(InferenceError::NaNFeature { col })
            } else {
                Ok(F::from_f64(*v))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowPrediction {
    pub class: usize,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    pub rows: Vec<RowPrediction>,
    /// Fraction of rows whose class matches the label, when labels exist
    /// and the dataset is non-empty.
    pub accuracy: Option<f64>,
}

impl PreparedForest {
    pub fn width(&self) -> FloatWidth {
        match self {
            PreparedForest::Single(_) => FloatWidth::Single,
            PreparedForest::Double(_) => FloatWidth::Double,
        }
    }

    pub fn strategy(&self) -> ComparisonStrategy {
        dispatch!(self, e => e.strategy)
    }

    pub fn n_features(&self) -> usize {
        dispatch!(self, e => e.n_features)
    }

    pub fn n_classes(&self) -> usize {
        dispatch!(self, e => e.n_classes)
    }

    pub fn n_trees(&self) -> usize {
        dispatch!(self, e => e.trees.len())
    }

    fn check_len(&self, row: &[f64]) -> Result<(), InferenceError> {
        if row.len() != self.n_features() {
            return Err(InferenceError::FeatureCount {
                expected: self.n_features(),
                found: row.len(),
            });
        }
        Ok(())
    }

    /// Per-tree leaf reached by `row` (values at the forest's width).
    pub fn trace(&self, row: &[f64]) -> Result<Vec<LeafTrace>, InferenceError> {
        self.check_len(row)?;
        dispatch!(self, e => {
            let r = typed_row(row)?;
            Ok(e.trees.iter().map(|t| t.trace(&r)).collect())
        })
    }

    /// The prediction row of the leaf tree `tree` reaches.
    pub fn predict_tree(&self, tree: usize, row: &[f64]) -> Result<Vec<f64>, InferenceError> {
        self.check_len(row)?;
        dispatch!(self, e => {
            let r = typed_row(row)?;
            Ok(e.trees[tree].predict(&r).to_vec())
        })
    }

    /// Summed leaf score vector over all trees.
    pub fn predict_scores(&self, row: &[f64]) -> Result<Vec<f64>, InferenceError> {
        self.check_len(row)?;
        let mut scores = vec![0.0; self.n_classes()];
        dispatch!(self, e => {
            let r = typed_row(row)?;
            e.scores_into(&r, &mut scores);
        });
        Ok(scores)
    }

    /// Class index with the highest summed score, lowest index on ties.
    pub fn predict_forest(&self, row: &[f64]) -> Result<usize, InferenceError> {
        Ok(self.predict_row(row)?.class)
    }

    /// Class and summed scores in one traversal.
    pub fn predict_row(&self, row: &[f64]) -> Result<RowPrediction, InferenceError> {
        let scores = self.predict_scores(row)?;
        let class = dispatch!(self, e => e.argmax(&scores));
        Ok(RowPrediction { class, scores })
    }

    /// Width-erased view of every inner node's encoded split, per tree.
    pub fn flint_splits(&self) -> Vec<Vec<Option<FlintSplit>>> {
        dispatch!(self, e => e.trees.iter().map(|t| t.flint_splits()).collect())
    }
}

/// Classifies every row; computes accuracy when the dataset has labels.
pub fn predict_dataset(pf: &PreparedForest, ds: &Dataset) -> Result<Predictions, InferenceError> {
    if ds.width() != pf.width() {
        return Err(InferenceError::WidthMismatch {
            model: pf.width(),
            dataset: ds.width(),
        });
    }
    if ds.n_features() != pf.n_features() {
        return Err(InferenceError::FeatureCount {
            expected: pf.n_features(),
            found: ds.n_features(),
        });
    }
    if let Some(labels) = ds.labels() {
        if let Some((row, &label)) = labels.iter().enumerate().find(|(_, &l)| l as usize >= pf.n_classes()) {
            return Err(InferenceError::LabelOutOfRange {
                row,
                label,
                n_classes: pf.n_classes(),
            });
        }
    }
    let n_classes = pf.n_classes();
    let rows: Vec<RowPrediction> = dispatch!(pf, e => {
        let matrix: Vec<_> = ds.features().iter().map(|v| FlintFloat::from_f64(*v)).collect();
        matrix
            .chunks_exact(e.n_features)
            .map(|row| {
                let mut scores = vec![0.0; n_classes];
                let class = e.predict_row(row, &mut scores);
                RowPrediction { class, scores }
            })
            .collect()
    });
    let accuracy = match ds.labels() {
        Some(labels) if !labels.is_empty() => {
            let hits = rows.iter().zip(labels).filter(|(p, &l)| p.class == l as usize).count();
            Some(hits as f64 / labels.len() as f64)
        }
        _ => None,
    };
    Ok(Predictions { rows, accuracy })
}

/// `row_index,predicted_class,score_0,...` with one line per input row.
pub fn write_predictions_csv(p: &Predictions, n_classes: usize, out: impl io::Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["row_index".to_string(), "predicted_class".to_string()];
    header.extend((0..n_classes).map(|c| format!("score_{c}")));
    w.write_record(&header)?;
    for (i, r) in p.rows.iter().enumerate() {
        let mut rec = vec![i.to_string(), r.class.to_string()];
        rec.extend(r.scores.iter().map(|s| format!("{s:?}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Tree;
    use crate::synth::{synth_forest, synth_rows, SynthParams};
    use std::collections::BTreeMap;

    fn stump(split: f32, feature: usize, n_features: usize) -> Forest {
        Forest::new(
            FloatWidth::Single,
            n_features,
            2,
            vec![Tree::new(vec![
                TreeNode::Inner {
                    feature,
                    split: split as f64,
                    left: 1,
                    right: 2,
                },
                TreeNode::Leaf {
                    prediction: vec![1.0, 0.0],
                },
                TreeNode::Leaf {
                    prediction: vec![0.0, 1.0],
                },
            ])],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn prepare_encodes_negative_split() {
        let f = stump(f32::from_bits(0xc03bddde), 0, 1);
        let pf = prepare(&f, ComparisonStrategy::Flint);
        let s = pf.flint_splits()[0][0].clone().unwrap();
        assert_eq!((s.constant, s.negative_case), (0x403bddde, true));
    }

    #[test]
    fn prepare_rewrites_negative_zero() {
        let pf = prepare(&stump(-0.0, 0, 1), ComparisonStrategy::Flint);
        let s = pf.flint_splits()[0][0].clone().unwrap();
        assert_eq!((s.constant, s.negative_case), (0, false));
    }

    #[test]
    fn host_prepare_keeps_split_bits() {
        let f = synth_forest(&SynthParams::new(3, 6, 4, 2, 2));
        let pf = prepare(&f, ComparisonStrategy::HostFloat);
        let PreparedForest::Single(e) = &pf else { panic!() };
        for (pt, t) in e.trees.iter().zip(f.trees()) {
            for (i, n) in t.nodes().iter().enumerate() {
                if let TreeNode::Inner { split, .. } = n {
                    assert_eq!(pt.host_split(i).to_bits(), (*split as f32).to_bits());
                }
            }
        }
        assert_eq!(prepare(&f, ComparisonStrategy::HostFloat), pf);
    }

    #[test]
    fn stump_traversal() {
        let f = stump(f32::from_bits(0x41213087), 3, 4);
        for strategy in [ComparisonStrategy::HostFloat, ComparisonStrategy::Flint] {
            let pf = prepare(&f, strategy);
            assert_eq!(pf.trace(&[0.0, 0.0, 0.0, 10.0]).unwrap()[0].leaf, 1);
            assert_eq!(pf.trace(&[0.0, 0.0, 0.0, 11.0]).unwrap()[0].leaf, 2);
            assert_eq!(pf.predict_tree(0, &[0.0, 0.0, 0.0, 11.0]).unwrap(), vec![0.0, 1.0]);
        }
    }

    #[test]
    fn leaf_only_tree() {
        let f = Forest::new(
            FloatWidth::Double,
            2,
            3,
            vec![Tree::new(vec![TreeNode::Leaf {
                prediction: vec![0.0, 5.0, 1.0],
            }])],
            BTreeMap::new(),
        )
        .unwrap();
        let pf = prepare(&f, ComparisonStrategy::Flint);
        assert_eq!(pf.trace(&[1.0, 2.0]).unwrap(), vec![LeafTrace { leaf: 0, steps: 0 }]);
        assert_eq!(pf.predict_forest(&[1.0, 2.0]).unwrap(), 1);
    }

    #[test]
    fn aggregation_and_ties() {
        let leaf_tree = |p: Vec<f64>| Tree::new(vec![TreeNode::Leaf { prediction: p }]);
        let f = Forest::new(
            FloatWidth::Single,
            1,
            2,
            vec![leaf_tree(vec![1.0, 0.0]), leaf_tree(vec![0.0, 1.0])],
            BTreeMap::new(),
        )
        .unwrap();
        for s in [ComparisonStrategy::HostFloat, ComparisonStrategy::Flint] {
            let pf = prepare(&f, s);
            assert_eq!(pf.predict_forest(&[0.0]).unwrap(), 0);
            assert_eq!(pf.predict_scores(&[0.0]).unwrap(), vec![1.0, 1.0]);
        }
        let one = synth_forest(&SynthParams::new(1, 4, 3, 3, 8));
        let t = one.trees()[0].clone();
        let three = Forest::new(FloatWidth::Single, 3, 3, vec![t.clone(), t.clone(), t], BTreeMap::new()).unwrap();
        let (p1, p3) = (
            prepare(&one, ComparisonStrategy::Flint),
            prepare(&three, ComparisonStrategy::Flint),
        );
        for row in synth_rows(&one, 200, 1).rows() {
            assert_eq!(p1.predict_forest(row).unwrap(), p3.predict_forest(row).unwrap());
        }
    }

    #[test]
    fn flint_argmax_handles_negative_scores() {
        let f = synth_forest(&SynthParams::new(1, 1, 1, 3, 1));
        let PreparedForest::Single(e) = prepare(&f, ComparisonStrategy::Flint) else {
            panic!()
        };
        assert_eq!(e.argmax(&[-3.0, -1.0, -2.0]), 1);
        assert_eq!(e.argmax(&[-1.0, -1.0, -5.0]), 0);
        assert_eq!(e.argmax(&[0.0, 2.0, 2.0]), 1);
    }

    #[test]
    fn flint_strategy_performs_no_float_comparisons() {
        let f = synth_forest(&SynthParams::new(5, 8, 6, 3, 3));
        let ds = synth_rows(&f, 300, 5);
        let flint = prepare(&f, ComparisonStrategy::Flint);
        let host = prepare(&f, ComparisonStrategy::HostFloat);

        let before = float_comparisons();
        predict_dataset(&flint, &ds).unwrap();
        assert_eq!(float_comparisons() - before, 0);

        let before = float_comparisons();
        predict_dataset(&host, &ds).unwrap();
        assert!(float_comparisons() - before > 0);
    }

    #[test]
    fn path_length_bounded_by_node_count() {
        let f = synth_forest(&SynthParams::new(4, 15, 5, 2, 21));
        let pf = prepare(&f, ComparisonStrategy::Flint);
        for row in synth_rows(&f, 200, 2).rows() {
            for (trace, t) in pf.trace(row).unwrap().iter().zip(f.trees()) {
                assert!(trace.steps < t.node_count());
                assert!(trace.steps <= f.max_depth());
            }
        }
    }

    #[test]
    fn dataset_errors_and_empty() {
        let f = stump(1.0, 0, 2);
        let pf = prepare(&f, ComparisonStrategy::Flint);
        let empty = Dataset::new(FloatWidth::Single, 2, vec![], Some(vec![])).unwrap();
        let p = predict_dataset(&pf, &empty).unwrap();
        assert!(p.rows.is_empty());
        assert_eq!(p.accuracy, None);

        let wrong = Dataset::new(FloatWidth::Single, 3, vec![0.0; 3], None).unwrap();
        assert_eq!(
            predict_dataset(&pf, &wrong).unwrap_err(),
            InferenceError::FeatureCount { expected: 2, found: 3 }
        );
        let bad_label = Dataset::new(FloatWidth::Single, 2, vec![0.0; 2], Some(vec![2])).unwrap();
        assert!(matches!(
            predict_dataset(&pf, &bad_label),
            Err(InferenceError::LabelOutOfRange { .. })
        ));
        assert!(matches!(
            pf.trace(&[f64::NAN, 0.0]),
            Err(InferenceError::NaNFeature { col: 0 })
        ));
    }

    #[test]
    fn accuracy_for_correct_labels() {
        let f = stump(0.5, 0, 1);
        let ds = Dataset::new(FloatWidth::Single, 1, vec![0.0, 1.0, -4.0], Some(vec![0, 1, 0])).unwrap();
        let p = predict_dataset(&prepare(&f, ComparisonStrategy::Flint), &ds).unwrap();
        assert_eq!(p.accuracy, Some(1.0));
    }

    #[test]
    fn predictions_csv_layout() {
        let p = Predictions {
            rows: vec![RowPrediction {
                class: 1,
                scores: vec![0.25, 1.0],
            }],
            accuracy: None,
        };
        let mut out = Vec::new();
        write_predictions_csv(&p, 2, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "row_index,predicted_class,score_0,score_1\n0,1,0.25,1.0\n"
        );
    }
}
