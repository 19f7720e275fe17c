//! C ABI over the flint toolkit.
//!
//! Every function returns a [`FlintStatus`] (or a plain value when it
//! cannot fail). On failure a message is kept per thread and can be read
//! with [`flint_last_error`]. Handles are opaque and must be released with
//! their matching `_free` function. Panics never cross the boundary; they
//! are reported as `FLINT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flint::codegen::{emit_harness, emit_ifelse, Flavor};
use flint::flint::{encode, flint_ge, FloatWidth};
use flint::inference::{prepare, ComparisonStrategy, InferenceError, PreparedForest};
use flint::model::{load_forest, Forest, ModelError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlintStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotFound = 3,
    Io = 4,
    InvalidModel = 5,
    WidthMismatch = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlintStrategy {
    Float = 0,
    Flint = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlintFlavor {
    Float = 0,
    Flint = 1,
}

/// A loaded, validated forest.
pub struct FlintForest(Forest);

/// A forest flattened for one comparison strategy.
pub struct FlintPrepared(PreparedForest);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Failure = (FlintStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FlintStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FlintStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FlintStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (FlintStatus::NullPointer, format!("{what} is null"))
}

fn model_failure(e: ModelError) -> Failure {
    let status = match e {
        ModelError::NotFound(_) => FlintStatus::NotFound,
        ModelError::Io { .. } => FlintStatus::Io,
        _ => FlintStatus::InvalidModel,
    };
    (status, e.to_string())
}

fn inference_failure(e: InferenceError) -> Failure {
    (FlintStatus::InvalidArgument, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (FlintStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn forest_ref<'a>(f: *const FlintForest) -> Result<&'a Forest, Failure> {
    f.as_ref().map(|f| &f.0).ok_or_else(|| null("forest"))
}

unsafe fn prepared_ref<'a>(p: *const FlintPrepared) -> Result<&'a PreparedForest, Failure> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("prepared forest"))
}

/// Message describing the last failure on this thread, or "" after a
/// success. Valid until the next flint call on the same thread.
#[no_mangle]
pub extern "C" fn flint_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn flint_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads and validates a model JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_load(path: *const c_char, out: *mut *mut FlintForest) -> FlintStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = load_forest(path).map_err(model_failure)?;
        *out = Box::into_raw(Box::new(FlintForest(f)));
        Ok(())
    })
}

/// Parses and validates a model from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_from_json(json: *const c_char, out: *mut *mut FlintForest) -> FlintStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = Forest::from_json_str(text).map_err(model_failure)?;
        *out = Box::into_raw(Box::new(FlintForest(f)));
        Ok(())
    })
}

/// # Safety
/// `forest` must come from a flint loader and not be freed twice. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_free(forest: *mut FlintForest) {
    if !forest.is_null() {
        drop(Box::from_raw(forest));
    }
}

/// 32 or 64, or 0 for a null handle.
///
/// # Safety
/// `forest` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_width_bits(forest: *const FlintForest) -> u32 {
    forest.as_ref().map_or(0, |f| f.0.width().bits())
}

/// # Safety
/// `forest` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_n_features(forest: *const FlintForest) -> usize {
    forest.as_ref().map_or(0, |f| f.0.n_features())
}

/// # Safety
/// `forest` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_n_classes(forest: *const FlintForest) -> usize {
    forest.as_ref().map_or(0, |f| f.0.n_classes())
}

/// # Safety
/// `forest` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn flint_forest_n_trees(forest: *const FlintForest) -> usize {
    forest.as_ref().map_or(0, |f| f.0.trees().len())
}

/// Flattens a forest for inference. The forest may be freed afterwards.
///
/// # Safety
/// `forest` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flint_prepare(
    forest: *const FlintForest,
    strategy: FlintStrategy,
    out: *mut *mut FlintPrepared,
) -> FlintStatus {
    guard(|| {
        let f = forest_ref(forest)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = match strategy {
            FlintStrategy::Float => ComparisonStrategy::HostFloat,
            FlintStrategy::Flint => ComparisonStrategy::Flint,
        };
        *out = Box::into_raw(Box::new(FlintPrepared(prepare(f, s))));
        Ok(())
    })
}

/// # Safety
/// `prepared` must come from [`flint_prepare`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn flint_prepared_free(prepared: *mut FlintPrepared) {
    if !prepared.is_null() {
        drop(Box::from_raw(prepared));
    }
}

unsafe fn predict_rows(
    p: *const FlintPrepared,
    width: FloatWidth,
    rows: &dyn Fn(usize) -> f64,
    n_rows: usize,
    n_features: usize,
    classes_out: *mut u32,
    scores_out: *mut f64,
) -> Result<(), Failure> {
    let p = prepared_ref(p)?;
    if p.width() != width {
        return Err((
            FlintStatus::WidthMismatch,
            format!("model width is {}, rows are {}", p.width(), width),
        ));
    }
    if classes_out.is_null() {
        return Err(null("classes_out"));
    }
    if n_features != p.n_features() {
        return Err(inference_failure(InferenceError::FeatureCount {
            expected: p.n_features(),
            found: n_features,
        }));
    }
    let nc = p.n_classes();
    let mut row = vec![0.0; n_features];
    for r in 0..n_rows {
        for (c, v) in row.iter_mut().enumerate() {
            *v = rows(r * n_features + c);
        }
        let pred = p.predict_row(&row).map_err(inference_failure)?;
        *classes_out.add(r) = pred.class as u32;
        if !scores_out.is_null() {
            ptr::copy_nonoverlapping(pred.scores.as_ptr(), scores_out.add(r * nc), nc);
        }
    }
    Ok(())
}

/// Classifies `n_rows` row-major f32 rows of `n_features` values each.
/// Writes one class per row to `classes_out` and, when `scores_out` is
/// not null, `n_rows * n_classes` summed scores.
///
/// # Safety
/// Buffers must hold the stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn flint_predict_f32(
    prepared: *const FlintPrepared,
    rows: *const f32,
    n_rows: usize,
    n_features: usize,
    classes_out: *mut u32,
    scores_out: *mut f64,
) -> FlintStatus {
    guard(|| {
        if rows.is_null() && n_rows > 0 {
            return Err(null("rows"));
        }
        let get = |i: usize| *rows.add(i) as f64;
        predict_rows(
            prepared,
            FloatWidth::Single,
            &get,
            n_rows,
            n_features,
            classes_out,
            scores_out,
        )
    })
}

/// f64 counterpart of [`flint_predict_f32`].
///
/// # Safety
/// Buffers must hold the stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn flint_predict_f64(
    prepared: *const FlintPrepared,
    rows: *const f64,
    n_rows: usize,
    n_features: usize,
    classes_out: *mut u32,
    scores_out: *mut f64,
) -> FlintStatus {
    guard(|| {
        if rows.is_null() && n_rows > 0 {
            return Err(null("rows"));
        }
        let get = |i: usize| *rows.add(i);
        predict_rows(
            prepared,
            FloatWidth::Double,
            &get,
            n_rows,
            n_features,
            classes_out,
            scores_out,
        )
    })
}

/// Encodes a split so that `feature <= split` becomes `bits <= constant`,
/// or `constant <= (bits ^ sign_mask)` when `negative_case` is set.
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn flint_encode_split_f32(
    split: f32,
    constant: *mut i32,
    negative_case: *mut bool,
) -> FlintStatus {
    guard(|| {
        if constant.is_null() || negative_case.is_null() {
            return Err(null("output"));
        }
        let e = encode(split).map_err(|e| (FlintStatus::InvalidArgument, e.to_string()))?;
        *constant = e.constant;
        *negative_case = e.negative_case;
        Ok(())
    })
}

/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn flint_encode_split_f64(
    split: f64,
    constant: *mut i64,
    negative_case: *mut bool,
) -> FlintStatus {
    guard(|| {
        if constant.is_null() || negative_case.is_null() {
            return Err(null("output"));
        }
        let e = encode(split).map_err(|e| (FlintStatus::InvalidArgument, e.to_string()))?;
        *constant = e.constant;
        *negative_case = e.negative_case;
        Ok(())
    })
}

/// `x >= y` for the floats whose bit patterns are `x` and `y`, with
/// -0 ordered below +0.
#[no_mangle]
pub extern "C" fn flint_ge_i32(x: i32, y: i32) -> bool {
    flint_ge(x, y)
}

#[no_mangle]
pub extern "C" fn flint_ge_i64(x: i64, y: i64) -> bool {
    flint_ge(x, y)
}

/// Emits C source for the forest (or its harness main when `harness` is
/// set). Release the string with [`flint_string_free`].
///
/// # Safety
/// `forest` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flint_codegen(
    forest: *const FlintForest,
    flavor: FlintFlavor,
    harness: bool,
    out: *mut *mut c_char,
) -> FlintStatus {
    guard(|| {
        let f = forest_ref(forest)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let flavor = match flavor {
            FlintFlavor::Float => Flavor::Float,
            FlintFlavor::Flint => Flavor::Flint,
        };
        let text = if harness {
            emit_harness(f, flavor)
        } else {
            emit_ifelse(f, flavor).text()
        };
        *out = CString::new(text).expect("emitted C has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from a flint function returning an owned string.
#[no_mangle]
pub unsafe extern "C" fn flint_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
