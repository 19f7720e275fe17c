//! Random forest data model, its JSON file format, and tabular datasets.
//!
//! Model file (UTF-8 JSON):
//!
//! ```json
//! {"version": 1, "width": "f32", "n_features": 4, "n_classes": 2,
//!  "trees": [{"nodes": [
//!     {"feature": 3, "split_hex": "0x41213087", "split_dec": "10.074347", "left": 1, "right": 2},
//!     {"leaf": [1.0, 0.0]},
//!     {"leaf": [0.0, 1.0]}]}],
//!  "metadata": {"source": "example"}}
//! ```
//!
//! Node ids are array positions and the root is node 0. `split_hex` is the
//! raw bit pattern at the forest's width and is authoritative; `split_dec`
//! is a human-readable mirror that is written but never read back.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::flint::FloatWidth;

pub const MODEL_VERSION: u64 = 1;

/// Where in a forest an error was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeLocation {
    pub tree: usize,
    pub node: usize,
}

impl fmt::Display for NodeLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tree {} node {}", self.tree, self.node)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model not found: {0}")]
    NotFound(PathBuf),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("model JSON parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{msg}, {at}")]
    Node { at: NodeLocation, msg: String },
    #[error("forest must contain at least one tree")]
    NoTrees,
    #[error("invalid forest: {0}")]
    Forest(String),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset not found: {0}")]
    NotFound(PathBuf),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row} column {col}: cannot parse '{cell}' as a number")]
    NotNumeric { row: usize, col: usize, cell: String },
    #[error("row {row} column {col}: NaN is not allowed")]
    NaN { row: usize, col: usize },
    #[error("row {row}: expected {expected} cells, found {found}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("row {row}: label '{cell}' is not a non-negative integer")]
    BadLabel { row: usize, cell: String },
    #[error("dataset has no feature columns")]
    NoFeatures,
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Inner {
        feature: usize,
        /// Exactly representable at the forest's width.
        split: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        prediction: Vec<f64>,
    },
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn new(nodes: Vec<TreeNode>) -> Self {
        Tree { nodes }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn inner_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_leaf()).count()
    }

    /// Longest root-to-leaf path in edges. Assumes a validated tree.
    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, d)) = stack.pop() {
            match &self.nodes[id] {
                TreeNode::Leaf { .. } => best = best.max(d),
                TreeNode::Inner { left, right, .. } => {
                    stack.push((*left, d + 1));
                    stack.push((*right, d + 1));
                }
            }
        }
        best
    }

    fn validate(&self, tree: usize, width: FloatWidth, n_features: usize, n_classes: usize) -> Result<(), ModelError> {
        let at = |node| NodeLocation { tree, node };
        if self.nodes.is_empty() {
            return Err(ModelError::Node {
                at: at(0),
                msg: "tree has no nodes".into(),
            });
        }
        let n = self.nodes.len();
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                TreeNode::Inner {
                    feature,
                    split,
                    left,
                    right,
                } => {
                    if *left >= n || *right >= n {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: "child index out of bounds".into(),
                        });
                    }
                    if *feature >= n_features {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: format!("feature index {feature} out of range for {n_features} features"),
                        });
                    }
                    if split.is_nan() {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: "split value is NaN".into(),
                        });
                    }
                    if !split.is_finite() {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: "split value is infinite".into(),
                        });
                    }
                    if !width.represents(*split) {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: format!("split value {split} is not representable as {width}"),
                        });
                    }
                }
                TreeNode::Leaf { prediction } => {
                    if prediction.len() != n_classes {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: format!("leaf has {} scores, expected {n_classes}", prediction.len()),
                        });
                    }
                    if prediction.iter().any(|p| !p.is_finite()) {
                        return Err(ModelError::Node {
                            at: at(id),
                            msg: "leaf score is not finite".into(),
                        });
                    }
                }
            }
        }
        // Every node reached exactly once from the root: no cycles, no
        // sharing, nothing unreachable.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            if seen[id] {
                return Err(ModelError::Node {
                    at: at(id),
                    msg: "node reached twice (cycle or shared child)".into(),
                });
            }
            seen[id] = true;
            if let TreeNode::Inner { left, right, .. } = &self.nodes[id] {
                stack.push(*right);
                stack.push(*left);
            }
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return Err(ModelError::Node {
                at: at(id),
                msg: "node unreachable from root".into(),
            });
        }
        Ok(())
    }
}

/// A validated random forest. Construction fails rather than yield a
/// partially valid value.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    width: FloatWidth,
    n_features: usize,
    n_classes: usize,
    trees: Vec<Tree>,
    metadata: BTreeMap<String, String>,
}

impl Forest {
    pub fn new(
        width: FloatWidth,
        n_features: usize,
        n_classes: usize,
        trees: Vec<Tree>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self, ModelError> {
        if trees.is_empty() {
            return Err(ModelError::NoTrees);
        }
        if n_features == 0 {
            return Err(ModelError::Forest("n_features must be at least 1".into()));
        }
        if n_classes == 0 {
            return Err(ModelError::Forest("n_classes must be at least 1".into()));
        }
        for (i, t) in trees.iter().enumerate() {
            t.validate(i, width, n_features, n_classes)?;
        }
        Ok(Forest {
            width,
            n_features,
            n_classes,
            trees,
            metadata,
        })
    }

    pub fn width(&self) -> FloatWidth {
        self.width
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn max_depth(&self) -> usize {
        self.trees.iter().map(Tree::depth).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        self.trees.iter().map(Tree::node_count).sum()
    }

    pub fn to_json(&self) -> Value {
        let trees: Vec<Value> = self
            .trees
            .iter()
            .map(|t| {
                let nodes: Vec<Value> = t
                    .nodes
                    .iter()
                    .map(|n| match n {
                        TreeNode::Inner {
                            feature,
                            split,
                            left,
                            right,
                        } => json!({
                            "feature": feature,
                            "split_hex": self.width.hex_bits(*split),
                            "split_dec": decimal_at_width(*split, self.width),
                            "left": left,
                            "right": right,
                        }),
                        TreeNode::Leaf { prediction } => json!({ "leaf": prediction }),
                    })
                    .collect();
                json!({ "nodes": nodes })
            })
            .collect();
        json!({
            "version": MODEL_VERSION,
            "width": self.width,
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "trees": trees,
            "metadata": self.metadata,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        Forest::from_json(&serde_json::from_str(text)?)
    }

    pub fn from_json(v: &Value) -> Result<Self, ModelError> {
        let obj = v
            .as_object()
            .ok_or_else(|| ModelError::Schema("top level must be an object".into()))?;
        let version = required_u64(obj, "version", "top level")?;
        if version != MODEL_VERSION {
            return Err(ModelError::Schema(format!("unsupported model version {version}")));
        }
        let width: FloatWidth = serde_json::from_value(
            obj.get("width")
                .cloned()
                .ok_or_else(|| ModelError::Schema("missing field 'width'".into()))?,
        )
        .map_err(|_| ModelError::Schema("field 'width' must be \"f32\" or \"f64\"".into()))?;
        let n_features = required_u64(obj, "n_features", "top level")? as usize;
        let n_classes = required_u64(obj, "n_classes", "top level")? as usize;
        let trees_v = obj
            .get("trees")
            .and_then(Value::as_array)
            .ok_or_else(|| ModelError::Schema("missing array field 'trees'".into()))?;
        let mut trees = Vec::with_capacity(trees_v.len());
        for (ti, tv) in trees_v.iter().enumerate() {
            let nodes_v = tv
                .get("nodes")
                .and_then(Value::as_array)
                .ok_or_else(|| ModelError::Schema(format!("tree {ti}: missing array field 'nodes'")))?;
            let nodes = nodes_v
                .iter()
                .enumerate()
                .map(|(ni, nv)| parse_node(nv, width, NodeLocation { tree: ti, node: ni }))
                .collect::<Result<Vec<_>, _>>()?;
            trees.push(Tree::new(nodes));
        }
        let metadata = match obj.get("metadata") {
            None | Some(Value::Null) => BTreeMap::new(),
            Some(Value::Object(m)) => m
                .iter()
                .map(|(k, v)| {
                    let s = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    (k.clone(), s)
                })
                .collect(),
            Some(_) => return Err(ModelError::Schema("field 'metadata' must be an object".into())),
        };
        Forest::new(width, n_features, n_classes, trees, metadata)
    }
}

/// Shortest decimal that round-trips at the given width.
pub fn decimal_at_width(v: f64, width: FloatWidth) -> String {
    match width {
        FloatWidth::Single => format!("{:?}", v as f32),
        FloatWidth::Double => format!("{v:?}"),
    }
}

fn required_u64(obj: &Map<String, Value>, key: &str, ctx: &str) -> Result<u64, ModelError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| ModelError::Schema(format!("{ctx}: field '{key}' must be a non-negative integer")))
}

fn parse_split_hex(s: &str, width: FloatWidth) -> Option<f64> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"))?;
    match width {
        FloatWidth::Single => u32::from_str_radix(digits, 16).ok().map(|b| f32::from_bits(b) as f64),
        FloatWidth::Double => u64::from_str_radix(digits, 16).ok().map(f64::from_bits),
    }
}

fn parse_node(v: &Value, width: FloatWidth, at: NodeLocation) -> Result<TreeNode, ModelError> {
    let schema = |msg: String| ModelError::Node { at, msg };
    let obj = v.as_object().ok_or_else(|| schema("node must be an object".into()))?;
    if let Some(leaf) = obj.get("leaf") {
        let scores = leaf
            .as_array()
            .ok_or_else(|| schema("field 'leaf' must be an array of numbers".into()))?
            .iter()
            .map(|s| s.as_f64())
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| schema("field 'leaf' must be an array of numbers".into()))?;
        return Ok(TreeNode::Leaf { prediction: scores });
    }
    let index = |key: &str| -> Result<usize, ModelError> {
        obj.get(key)
            .ok_or_else(|| schema(format!("missing field '{key}'")))?
            .as_u64()
            .map(|i| i as usize)
            .ok_or_else(|| schema(format!("field '{key}' must be a non-negative integer")))
    };
    let feature = index("feature")?;
    let hex = obj
        .get("split_hex")
        .ok_or_else(|| schema("missing field 'split_hex'".into()))?
        .as_str()
        .ok_or_else(|| schema("field 'split_hex' must be a string".into()))?;
    let split = parse_split_hex(hex, width)
        .ok_or_else(|| schema(format!("split_hex '{hex}' is not a {}-bit hex pattern", width.bits())))?;
    Ok(TreeNode::Inner {
        feature,
        split,
        left: index("left")?,
        right: index("right")?,
    })
}

pub fn load_forest(path: impl AsRef<Path>) -> Result<Forest, ModelError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => ModelError::NotFound(path.to_path_buf()),
        _ => ModelError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    Forest::from_json_str(&text)
}

pub fn save_forest(forest: &Forest, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(&forest.to_json())?;
    text.push('\n');
    fs::write(path, text).map_err(|e| ModelError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Row-major feature matrix with optional integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    width: FloatWidth,
    n_features: usize,
    /// Values exactly representable at `width`.
    features: Vec<f64>,
    labels: Option<Vec<u32>>,
}

impl Dataset {
    pub fn new(
        width: FloatWidth,
        n_features: usize,
        features: Vec<f64>,
        labels: Option<Vec<u32>>,
    ) -> Result<Self, DatasetError> {
        if n_features == 0 {
            return Err(DatasetError::NoFeatures);
        }
        if !features.len().is_multiple_of(n_features) {
            return Err(DatasetError::Invalid(format!(
                "{} values do not fill rows of {n_features}",
                features.len()
            )));
        }
        let n_rows = features.len() / n_features;
        if let Some(pos) = features.iter().position(|v| v.is_nan()) {
            return Err(DatasetError::NaN {
                row: pos / n_features,
                col: pos % n_features,
            });
        }
        if let Some(pos) = features.iter().position(|v| !width.represents(*v)) {
            return Err(DatasetError::Invalid(format!(
                "row {} column {}: value not representable as {width}",
                pos / n_features,
                pos % n_features
            )));
        }
        if let Some(l) = &labels {
            if l.len() != n_rows {
                return Err(DatasetError::Invalid(format!("{} labels for {n_rows} rows", l.len())));
            }
        }
        Ok(Dataset {
            width,
            n_features,
            features,
            labels,
        })
    }

    pub fn width(&self) -> FloatWidth {
        self.width
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_rows(&self) -> usize {
        self.features.len() / self.n_features
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_features)
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }
}

/// Reads a CSV with a header row. A final column named `label` holds
/// integer classes; every other cell is parsed directly at `width`.
pub fn load_dataset(path: impl AsRef<Path>, width: FloatWidth) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => DatasetError::NotFound(path.to_path_buf()),
        _ => DatasetError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    read_dataset(file, width)
}

pub fn read_dataset(reader: impl io::Read, width: FloatWidth) -> Result<Dataset, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let has_label = headers.iter().next_back().map(|h| h.trim() == "label").unwrap_or(false);
    let n_cols = headers.len();
    let n_features = if has_label { n_cols - 1 } else { n_cols };
    if n_features == 0 {
        return Err(DatasetError::NoFeatures);
    }
    let mut features = Vec::new();
    let mut labels = has_label.then(Vec::new);
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != n_cols {
            return Err(DatasetError::Ragged {
                row,
                expected: n_cols,
                found: rec.len(),
            });
        }
        for (col, cell) in rec.iter().take(n_features).enumerate() {
            let cell = cell.trim();
            let v = match width {
                FloatWidth::Single => cell.parse::<f32>().map(|v| v as f64),
                FloatWidth::Double => cell.parse::<f64>(),
            }
            .map_err(|_| DatasetError::NotNumeric {
                row,
                col,
                cell: cell.to_string(),
            })?;
            if v.is_nan() {
                return Err(DatasetError::NaN { row, col });
            }
            features.push(v);
        }
        if let Some(labels) = labels.as_mut() {
            let cell = rec[n_features].trim();
            let l = cell.parse::<u32>().map_err(|_| DatasetError::BadLabel {
                row,
                cell: cell.to_string(),
            })?;
            labels.push(l);
        }
    }
    Dataset::new(width, n_features, features, labels)
}

/// Writes a dataset in the format [`read_dataset`] accepts. Values use the
/// shortest decimal that parses back to the same bits.
pub fn write_dataset(ds: &Dataset, writer: impl io::Write) -> Result<(), DatasetError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..ds.n_features).map(|i| format!("f{i}")).collect();
    if ds.labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, row) in ds.rows().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| decimal_at_width(*v, ds.width)).collect();
        if let Some(l) = &ds.labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| DatasetError::Io {
        path: PathBuf::from("<writer>"),
        source: e,
    })?;
    Ok(())
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| DatasetError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    write_dataset(ds, io::BufWriter::new(file))
}
