//! C99 if-else tree emitter.
//!
//! Every inner node becomes `if(test){left}else{right}` and every leaf a
//! `return` of its score row. Nesting is indented by one space per level.
//! The `Flint` flavor loads features through an integer pointer and
//! compares them against hex constants; negative splits swap operands and
//! XOR the loaded bits with the sign mask, so no comparison ever involves
//! two negative patterns.
//!
//! Output is a pure function of the forest and flavor. Trees deeper than
//! [`TESTED_NESTING`] are emitted as usual but have not been compiled in
//! the test suite.

use std::fmt::{self, Write};

use crate::flint::{encode_split, FloatWidth};
use crate::model::{Forest, TreeNode};

/// Deepest if-nesting exercised by the tests.
pub const TESTED_NESTING: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Float,
    Flint,
}

impl Flavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::Float => "float",
            Flavor::Flint => "flint",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" => Ok(Flavor::Float),
            "flint" => Ok(Flavor::Flint),
            _ => Err(format!("unknown flavor '{s}', expected float or flint")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub inner: usize,
    pub leaves: usize,
    pub max_nesting: usize,
    pub negative_splits: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CodegenStats {
    pub nodes: usize,
    pub max_nesting: usize,
    pub negative_splits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSource {
    pub flavor: Flavor,
    pub width: FloatWidth,
    pub n_features: usize,
    pub n_classes: usize,
    pub prelude: String,
    /// One leaf table plus `tree_<i>` function per tree.
    pub trees: Vec<String>,
    pub tree_stats: Vec<TreeStats>,
    /// `predict_ensemble` and its helpers.
    pub ensemble: String,
    pub stats: CodegenStats,
}

impl GeneratedSource {
    pub fn text(&self) -> String {
        let mut s = self.prelude.clone();
        for t in &self.trees {
            s.push_str(t);
        }
        s.push_str(&self.ensemble);
        s
    }
}

fn int_type(width: FloatWidth) -> &'static str {
    match width {
        FloatWidth::Single => "int",
        FloatWidth::Double => "int64_t",
    }
}

fn float_type(width: FloatWidth) -> &'static str {
    match width {
        FloatWidth::Single => "float",
        FloatWidth::Double => "double",
    }
}

/// Shortest literal that parses back to the same value at `width`.
fn float_literal(v: f64, width: FloatWidth) -> String {
    match width {
        FloatWidth::Single => format!("{:?}f", v as f32),
        FloatWidth::Double => format!("{v:?}"),
    }
}

fn split_test(feature: usize, split: f64, width: FloatWidth, flavor: Flavor) -> (String, bool) {
    match flavor {
        Flavor::Float => (format!("pX[{feature}] <= {}", float_literal(split, width)), split < 0.0),
        Flavor::Flint => {
            let s = encode_split(split, width).expect("validated forest has finite splits");
            let it = int_type(width);
            let load = format!("(*((({it} *)(pX))+{feature}))");
            let constant = format!("(({it})({}))", s.hex());
            if s.negative_case {
                (format!("{constant}<=({load}^FLINT_SIGN_MASK)"), true)
            } else {
                (format!("{load}<={constant}"), false)
            }
        }
    }
}

struct TreeEmitter<'a> {
    nodes: &'a [TreeNode],
    index: usize,
    width: FloatWidth,
    flavor: Flavor,
    leaf_slot: Vec<usize>,
    body: String,
    stats: TreeStats,
}

impl TreeEmitter<'_> {
    fn emit(&mut self, id: usize, level: usize) {
        let pad = " ".repeat(level);
        match &self.nodes[id] {
            TreeNode::Inner {
                feature,
                split,
                left,
                right,
            } => {
                let (test, negative) = split_test(*feature, *split, self.width, self.flavor);
                self.stats.inner += 1;
                self.stats.negative_splits += negative as usize;
                self.stats.max_nesting = self.stats.max_nesting.max(level);
                writeln!(self.body, "{pad}if({test}){{").unwrap();
                self.emit(*left, level + 1);
                writeln!(self.body, "{pad}}} else {{").unwrap();
                self.emit(*right, level + 1);
                writeln!(self.body, "{pad}}}").unwrap();
            }
            TreeNode::Leaf { .. } => {
                self.stats.leaves += 1;
                writeln!(
                    self.body,
                    "{pad}return tree_{}_leaves[{}];",
                    self.index, self.leaf_slot[id]
                )
                .unwrap();
            }
        }
    }
}

fn emit_tree(index: usize, nodes: &[TreeNode], forest: &Forest, flavor: Flavor) -> (String, TreeStats) {
    let mut leaf_slot = vec![0; nodes.len()];
    let mut rows = Vec::new();
    for (id, n) in nodes.iter().enumerate() {
        if let TreeNode::Leaf { prediction } = n {
            leaf_slot[id] = rows.len();
            let vals: Vec<String> = prediction.iter().map(|v| format!("{v:?}")).collect();
            rows.push(format!(" {{{}}}", vals.join(", ")));
        }
    }
    let mut out = String::new();
    writeln!(
        out,
        "\nstatic const double tree_{index}_leaves[{}][{}] = {{\n{}\n}};\n",
        rows.len(),
        forest.n_classes(),
        rows.join(",\n")
    )
    .unwrap();
    let arg = match flavor {
        Flavor::Float => format!("const {} *pX", float_type(forest.width())),
        Flavor::Flint => "const void *pX".to_string(),
    };
    writeln!(out, "static const double *tree_{index}({arg}) {{").unwrap();
    let mut e = TreeEmitter {
        nodes,
        index,
        width: forest.width(),
        flavor,
        leaf_slot,
        body: String::new(),
        stats: TreeStats::default(),
    };
    e.emit(0, 1);
    out.push_str(&e.body);
    out.push_str("}\n");
    (out, e.stats)
}

fn emit_prelude(forest: &Forest, flavor: Flavor) -> String {
    let mut s = format!(
        "/* flint codegen: {} trees, {} features, {} classes, {}, {} */\n\n#include <stdint.h>\n#include <string.h>\n",
        forest.trees().len(),
        forest.n_features(),
        forest.n_classes(),
        forest.width(),
        flavor
    );
    if flavor == Flavor::Flint {
        match forest.width() {
            FloatWidth::Single => {
                s.push_str("\n#define FLINT_SIGN_MASK (-2147483647 - 1)\n");
                s.push_str("typedef char flint_int_is_32_bits[sizeof(int) == 4 ? 1 : -1];\n");
            }
            FloatWidth::Double => {
                s.push_str("\n#define FLINT_SIGN_MASK (-INT64_C(9223372036854775807) - 1)\n");
            }
        }
    }
    s
}

fn emit_ensemble(forest: &Forest, flavor: Flavor) -> String {
    let nc = forest.n_classes();
    let mut s = String::new();
    let arg = match flavor {
        Flavor::Float => format!("const {} *pX", float_type(forest.width())),
        Flavor::Flint => "const void *pX".to_string(),
    };
    if flavor == Flavor::Flint {
        s.push_str(
            "\nstatic int flint_ge(int64_t x, int64_t y) {\n return (x >= y) ^ (x < 0 && y < 0 && x != y);\n}\n",
        );
    }
    writeln!(s, "\nint predict_ensemble({arg}, double *scores) {{").unwrap();
    s.push_str(" const double *leaf;\n int c, best = 0;\n");
    if flavor == Flavor::Flint {
        s.push_str(" int64_t best_bits, bits;\n");
    }
    writeln!(s, " for(c = 0; c < {nc}; ++c) scores[c] = 0.0;").unwrap();
    for i in 0..forest.trees().len() {
        writeln!(s, " leaf = tree_{i}(pX);").unwrap();
        writeln!(s, " for(c = 0; c < {nc}; ++c) scores[c] += leaf[c];").unwrap();
    }
    match flavor {
        Flavor::Float => {
            writeln!(s, " for(c = 1; c < {nc}; ++c){{").unwrap();
            s.push_str("  if(scores[c] > scores[best]) best = c;\n }\n");
        }
        Flavor::Flint => {
            s.push_str(" memcpy(&best_bits, &scores[0], sizeof best_bits);\n");
            writeln!(s, " for(c = 1; c < {nc}; ++c){{").unwrap();
            s.push_str("  memcpy(&bits, &scores[c], sizeof bits);\n");
            s.push_str("  if(!flint_ge(best_bits, bits)){\n   best = c;\n   best_bits = bits;\n  }\n }\n");
        }
    }
    s.push_str(" return best;\n}\n");
    s
}

/// Emits one function per tree plus `predict_ensemble`, which sums leaf
/// rows in tree order and returns the argmax (lowest index on ties).
pub fn emit_ifelse(forest: &Forest, flavor: Flavor) -> GeneratedSource {
    let mut trees = Vec::new();
    let mut tree_stats = Vec::new();
    let mut stats = CodegenStats::default();
    for (i, t) in forest.trees().iter().enumerate() {
        let (text, ts) = emit_tree(i, t.nodes(), forest, flavor);
        stats.nodes += ts.inner + ts.leaves;
        stats.max_nesting = stats.max_nesting.max(ts.max_nesting);
        stats.negative_splits += ts.negative_splits;
        trees.push(text);
        tree_stats.push(ts);
    }
    GeneratedSource {
        flavor,
        width: forest.width(),
        n_features: forest.n_features(),
        n_classes: forest.n_classes(),
        prelude: emit_prelude(forest, flavor),
        trees,
        tree_stats,
        ensemble: emit_ensemble(forest, flavor),
        stats,
    }
}

/// A `main()` that reads a dataset CSV (first argument), classifies each
/// row through `predict_ensemble`, and prints the predictions CSV.
/// With `--bench N` it instead times N full passes and prints one
/// nanosecond count per line followed by a checksum line.
pub fn emit_harness(forest: &Forest, flavor: Flavor) -> String {
    let (ft, parse) = match forest.width() {
        FloatWidth::Single => ("float", "strtof"),
        FloatWidth::Double => ("double", "strtod"),
    };
    let (cell, arg, loader) = match flavor {
        Flavor::Float => (
            ft.to_string(),
            format!("const {ft} *pX"),
            format!("static void load_feature({ft} *dst, const char *text, char **end) {{\n *dst = {parse}(text, end);\n}}\n"),
        ),
        Flavor::Flint => {
            let it = int_type(forest.width());
            (
                it.to_string(),
                "const void *pX".to_string(),
                format!(
                    "/* the only place feature bits are reinterpreted */\nstatic void load_feature({it} *dst, const char *text, char **end) {{\n {ft} v = {parse}(text, end);\n memcpy(dst, &v, sizeof v);\n}}\n"
                ),
            )
        }
    };
    let mut s = String::new();
    writeln!(
        s,
        "/* flint harness: {} features, {} classes, {}, {} */\n",
        forest.n_features(),
        forest.n_classes(),
        forest.width(),
        flavor
    )
    .unwrap();
    s.push_str(HARNESS_INCLUDES);
    writeln!(
        s,
        "\n#define N_FEATURES {}\n#define N_CLASSES {}\n",
        forest.n_features(),
        forest.n_classes()
    )
    .unwrap();
    writeln!(s, "typedef {cell} cell_t;\n").unwrap();
    writeln!(s, "int predict_ensemble({arg}, double *scores);\n").unwrap();
    s.push_str(&loader);
    s.push_str(HARNESS_BODY);
    s
}

const HARNESS_INCLUDES: &str = "#define _POSIX_C_SOURCE 199309L
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <time.h>
";

const HARNESS_BODY: &str = r#"
static char *read_all(const char *path) {
 FILE *f = fopen(path, "rb");
 char *buf;
 long n;
 if(!f) return NULL;
 fseek(f, 0, SEEK_END);
 n = ftell(f);
 fseek(f, 0, SEEK_SET);
 buf = malloc((size_t)n + 1);
 if(buf && fread(buf, 1, (size_t)n, f) != (size_t)n){
  free(buf);
  buf = NULL;
 }
 if(buf) buf[n] = '\0';
 fclose(f);
 return buf;
}

static long long now_ns(void) {
 struct timespec ts;
 clock_gettime(CLOCK_MONOTONIC, &ts);
 return (long long)ts.tv_sec * 1000000000LL + ts.tv_nsec;
}

int main(int argc, char **argv) {
 char *text, *p, *line_end;
 cell_t *rows = NULL;
 double scores[N_CLASSES];
 size_t n_rows = 0, cap = 0, r;
 int cols = 1, has_label = 0, reps = 0, c;
 if(argc != 2 && !(argc == 4 && strcmp(argv[2], "--bench") == 0)){
  fprintf(stderr, "usage: %s data.csv [--bench N]\n", argv[0]);
  return 2;
 }
 if(argc == 4) reps = atoi(argv[3]);
 text = read_all(argv[1]);
 if(!text){
  fprintf(stderr, "cannot read %s\n", argv[1]);
  return 3;
 }
 line_end = strchr(text, '\n');
 if(!line_end) line_end = text + strlen(text);
 for(p = text; p < line_end; ++p) cols += *p == ',';
 for(p = line_end; p > text && (p[-1] == '\r' || p[-1] == ' '); --p);
 has_label = p - text >= 5 && strncmp(p - 5, "label", 5) == 0 && (p - text == 5 || p[-6] == ',');
 if(cols - has_label != N_FEATURES){
  fprintf(stderr, "expected %d features, found %d\n", N_FEATURES, cols - has_label);
  return 3;
 }
 p = *line_end ? line_end + 1 : line_end;
 while(*p){
  char *end;
  if(*p == '\n' || *p == '\r'){
   ++p;
   continue;
  }
  if(n_rows == cap){
   cap = cap ? cap * 2 : 64;
   rows = realloc(rows, cap * N_FEATURES * sizeof *rows);
   if(!rows) return 3;
  }
  for(c = 0; c < N_FEATURES; ++c){
   load_feature(&rows[n_rows * N_FEATURES + c], p, &end);
   if(end == p){
    fprintf(stderr, "row %lu column %d: not a number\n", (unsigned long)n_rows, c);
    return 3;
   }
   p = end;
   if(*p == ',') ++p;
  }
  while(*p && *p != '\n') ++p;
  ++n_rows;
 }
 if(reps > 0){
  long long checksum = 0;
  int k;
  for(k = 0; k < reps; ++k){
   long long t0 = now_ns();
   for(r = 0; r < n_rows; ++r) checksum += predict_ensemble(&rows[r * N_FEATURES], scores);
   printf("%lld\n", now_ns() - t0);
  }
  printf("checksum,%lld\n", checksum);
 } else {
  printf("row_index,predicted_class");
  for(c = 0; c < N_CLASSES; ++c) printf(",score_%d", c);
  printf("\n");
  for(r = 0; r < n_rows; ++r){
   int cls = predict_ensemble(&rows[r * N_FEATURES], scores);
   printf("%lu,%d", (unsigned long)r, cls);
   for(c = 0; c < N_CLASSES; ++c) printf(",%.17g", scores[c]);
   printf("\n");
  }
 }
 free(rows);
 free(text);
 return 0;
}
"#;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// True when `s` holds a decimal floating literal such as `1.5`, `2e-3`
/// or `7f`. Hex integers are not floats.
fn has_float_literal(s: &str) -> bool {
    s.split(|c: char| !(c.is_ascii_alphanumeric() || c == '.' || c == '_'))
        .filter(|t| !t.is_empty())
        .any(|t| {
            let first = t.as_bytes()[0];
            if !(first.is_ascii_digit() || (first == b'.' && t.len() > 1)) {
                return false;
            }
            if t.starts_with("0x") || t.starts_with("0X") {
                return false;
            }
            t.contains('.') || t.contains(['e', 'E']) || t.ends_with(['f', 'F'])
        })
}

/// Checks emitted text without compiling it: brace balance, one
/// if/else per inner node and one return per leaf in each tree function,
/// and, for the Flint flavor, no float operands in any split test.
pub fn verify_source(g: &GeneratedSource) -> StructureReport {
    let mut report = StructureReport::default();
    let mut line_no = g.prelude.lines().count();

    for (i, tree) in g.trees.iter().enumerate() {
        let (mut ifs, mut elses, mut returns) = (0, 0, 0);
        let mut first = line_no + 1;
        for line in tree.lines() {
            line_no += 1;
            let t = line.trim_start();
            if t.starts_with(&format!("static const double *tree_{i}(")) {
                first = line_no;
            }
            if let Some(test) = t.strip_prefix("if(") {
                ifs += 1;
                if g.flavor == Flavor::Flint && (test.contains("pX[") || has_float_literal(test)) {
                    report.violations.push(Violation {
                        line: line_no,
                        message: "float operand in comparison".to_string(),
                    });
                }
            } else if t == "} else {" {
                elses += 1;
            } else if t.starts_with("return ") {
                returns += 1;
            }
        }
        let want = g.tree_stats.get(i).copied().unwrap_or_default();
        if ifs != want.inner || elses != want.inner {
            report.violations.push(Violation {
                line: first,
                message: format!("tree_{i}: {ifs} if and {elses} else for {} inner nodes", want.inner),
            });
        }
        if returns != want.leaves {
            report.violations.push(Violation {
                line: first,
                message: format!("tree_{i}: {returns} returns for {} leaves", want.leaves),
            });
        }
    }

    let mut open_lines = Vec::new();
    for (n, line) in g.text().lines().enumerate() {
        for ch in line.chars() {
            match ch {
                '{' => open_lines.push(n + 1),
                '}' if open_lines.pop().is_none() => {
                    report.violations.push(Violation {
                        line: n + 1,
                        message: "unmatched '}'".to_string(),
                    });
                }
                _ => {}
            }
        }
    }
    for l in open_lines {
        report.violations.push(Violation {
            line: l,
            message: "unclosed '{'".to_string(),
        });
    }
    report
}
