//! C interface to the harmonic-polynomial library.
//!
//! Conventions: every fallible call returns a [`LevyqStatus`]; results come
//! back through out-pointers. On failure the out-pointer is left untouched
//! and [`levyq_last_error`] returns a message describing the problem. Models
//! and polynomials are opaque handles freed by their `_free` functions;
//! strings returned through out-pointers are freed by
//! [`levyq_string_free`]. A panic never crosses the boundary; it is caught
//! and reported as `LEVYQ_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use levyq::models::LevyModel;
use levyq::render::{self, VarStyle};
use levyq::sim::{self, SimConfig};
use levyq::{gamma, harmonic, kailath_segall, limits, selftest, vars};
use levyq::{Error, SparsePoly};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LevyqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Malformed input: model spec, config JSON, rational, or argument range.
    InvalidArgument = 3,
    /// The requested degree exceeds the configured global bound.
    OrderLimit = 4,
    /// The model's moment data is truncated below the requested degree.
    Truncated = 5,
    /// The operation is not defined for this model (no sampler, no
    /// enumerable jumps, degenerate statistic).
    Unsupported = 6,
    /// Invariant violation or a caught panic.
    Internal = 7,
}

/// Opaque process model handle.
pub struct LevyqModel {
    inner: LevyModel,
}

/// Opaque polynomial handle; remembers which variable naming it renders
/// with (`x1, x2, ...` for cumulant and variation polynomials, `x, t, ...`
/// for space-time polynomials).
pub struct LevyqPoly {
    poly: SparsePoly,
    style: VarStyle,
}

/// Output naming for [`levyq_poly_render`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LevyqFormat {
    Plain = 0,
    Latex = 1,
    /// The JSON term-list form; it round-trips through the library parser.
    Json = 2,
}

/// One Monte Carlo gate result. `pass` reports whether the estimate lies
/// within the gate width of the target.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LevyqVerdict {
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub pass: bool,
    pub n_paths: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("no interior nul");
    });
}

fn status_of(e: &Error) -> LevyqStatus {
    match e {
        Error::OrderLimit { .. } => LevyqStatus::OrderLimit,
        Error::Truncated { .. } => LevyqStatus::Truncated,
        Error::NoSampler(_)
        | Error::VariationsUnsupported(_)
        | Error::DegenerateStatistic(_)
        | Error::NotInSpan(_) => LevyqStatus::Unsupported,
        Error::Internal(_) => LevyqStatus::Internal,
        _ => LevyqStatus::InvalidArgument,
    }
}

/// Run a fallible body, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> LevyqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LevyqStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("panic caught at the C boundary");
            LevyqStatus::Internal
        }
    }
}

fn null_error(name: &str) -> LevyqStatus {
    set_last_error(&format!("argument `{name}` is null"));
    LevyqStatus::NullPointer
}

/// Read a C string argument; reports null and UTF-8 problems.
unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, LevyqStatus> {
    if ptr.is_null() {
        return Err(null_error(name));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error(&format!("argument `{name}` is not valid UTF-8"));
        LevyqStatus::Utf8
    })
}

/// Message for the most recent failure on this thread, as a NUL-terminated
/// string. The pointer stays valid until the next failing call on the same
/// thread; never free it.
#[no_mangle]
pub extern "C" fn levyq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a named model spec (`brownian`, `poisson:RATE`, `gamma`,
/// `cp-lognormal`, `sum:A+B`).
///
/// # Safety
/// `spec` must point to a NUL-terminated string; `out` must be a valid
/// pointer to a model-handle slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_model_parse(
    spec: *const c_char,
    out: *mut *mut LevyqModel,
) -> LevyqStatus {
    if out.is_null() {
        return null_error("out");
    }
    let spec = match read_str(spec, "spec") {
        Ok(s) => s,
        Err(code) => return code,
    };
    guard(|| {
        let inner = LevyModel::parse(spec)?;
        *out = Box::into_raw(Box::new(LevyqModel { inner }));
        Ok(())
    })
}

/// Build a model from config JSON: `{"sigma2": "p/q", "m": ["p/q", ...]}`.
///
/// # Safety
/// `json` must point to a NUL-terminated string; `out` must be a valid
/// pointer to a model-handle slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_model_from_json(
    json: *const c_char,
    out: *mut *mut LevyqModel,
) -> LevyqStatus {
    if out.is_null() {
        return null_error("out");
    }
    let json = match read_str(json, "json") {
        Ok(s) => s,
        Err(code) => return code,
    };
    guard(|| {
        let inner = LevyModel::from_config_str(json)?;
        *out = Box::into_raw(Box::new(LevyqModel { inner }));
        Ok(())
    })
}

/// Canonical name of the model, as a fresh string for
/// [`levyq_string_free`].
///
/// # Safety
/// `model` must be a live handle from a constructor; `out` must be a valid
/// pointer to a string slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_model_name(
    model: *const LevyqModel,
    out: *mut *mut c_char,
) -> LevyqStatus {
    if model.is_null() {
        return null_error("model");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let name = (*model).inner.name.clone();
        *out = CString::new(name)
            .map_err(|_| Error::Internal("model name holds a NUL byte".into()))?
            .into_raw();
        Ok(())
    })
}

/// Release a model handle. Null is a no-op.
///
/// # Safety
/// `model` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn levyq_model_free(model: *mut LevyqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// The cumulant-to-moment polynomial of the given degree, in `x1..xn`.
///
/// # Safety
/// `out` must be a valid pointer to a polynomial-handle slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_gamma(n: u32, out: *mut *mut LevyqPoly) -> LevyqStatus {
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let g = gamma::gamma_recurrence(n as usize)?;
        *out = Box::into_raw(Box::new(LevyqPoly {
            poly: g.poly,
            style: VarStyle::Indexed,
        }));
        Ok(())
    })
}

/// The time-space harmonic polynomial `Q_n(x, t)` of the model.
///
/// # Safety
/// `model` must be a live handle; `out` must be a valid pointer to a
/// polynomial-handle slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_harmonic(
    model: *const LevyqModel,
    n: u32,
    out: *mut *mut LevyqPoly,
) -> LevyqStatus {
    if model.is_null() {
        return null_error("model");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let q = harmonic::q_closed(&(*model).inner, n as usize)?;
        *out = Box::into_raw(Box::new(LevyqPoly {
            poly: q.poly,
            style: VarStyle::SpaceTime,
        }));
        Ok(())
    })
}

/// The Kailath-Segall polynomial of the given degree, in `x1..xn`.
///
/// # Safety
/// `out` must be a valid pointer to a polynomial-handle slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_ks(n: u32, out: *mut *mut LevyqPoly) -> LevyqStatus {
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let p = kailath_segall::ks_recurrence(n as usize)?;
        *out = Box::into_raw(Box::new(LevyqPoly {
            poly: p.poly,
            style: VarStyle::Indexed,
        }));
        Ok(())
    })
}

/// The moment `E[X_t^n]` of the model as a polynomial in `t`.
///
/// # Safety
/// `model` must be a live handle; `out` must be a valid pointer to a
/// polynomial-handle slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_moment(
    model: *const LevyqModel,
    n: u32,
    out: *mut *mut LevyqPoly,
) -> LevyqStatus {
    if model.is_null() {
        return null_error("model");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let mu = (*model).inner.moment_poly(n as usize)?;
        *out = Box::into_raw(Box::new(LevyqPoly {
            poly: mu,
            style: VarStyle::SpaceTime,
        }));
        Ok(())
    })
}

/// Release a polynomial handle. Null is a no-op.
///
/// # Safety
/// `poly` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn levyq_poly_free(poly: *mut LevyqPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Render a polynomial in the requested format, as a fresh string for
/// [`levyq_string_free`]. The JSON form is the bare term array.
///
/// # Safety
/// `poly` must be a live handle; `out` must be a valid pointer to a string
/// slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_poly_render(
    poly: *const LevyqPoly,
    format: LevyqFormat,
    out: *mut *mut c_char,
) -> LevyqStatus {
    if poly.is_null() {
        return null_error("poly");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let handle = &*poly;
        let text = match format {
            LevyqFormat::Plain => render::plain(&handle.poly, handle.style),
            LevyqFormat::Latex => render::latex(&handle.poly, handle.style),
            LevyqFormat::Json => {
                serde_json::to_string(&render::json_terms(&handle.poly, handle.style))
                    .map_err(|e| Error::Internal(e.to_string()))?
            }
        };
        *out = CString::new(text)
            .map_err(|_| Error::Internal("rendered text holds a NUL byte".into()))?
            .into_raw();
        Ok(())
    })
}

/// Evaluate a polynomial at the point `values`, where `values[i]` binds the
/// variable with id `i` in the handle's naming (`x1`/`x` is id 0, `x2`/`t`
/// is id 1, and so on). For space-time polynomials the constant `e^{1/2}`
/// is bound automatically. Variables at ids past `len` are an error.
///
/// # Safety
/// `poly` must be a live handle; `values` must point to `len` doubles;
/// `out` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn levyq_poly_eval(
    poly: *const LevyqPoly,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> LevyqStatus {
    if poly.is_null() {
        return null_error("poly");
    }
    if values.is_null() && len > 0 {
        return null_error("values");
    }
    if out.is_null() {
        return null_error("out");
    }
    let values = if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(values, len)
    };
    guard(|| {
        let handle = &*poly;
        let value = handle.poly.eval_f64(|v| {
            if handle.style == VarStyle::SpaceTime && v == vars::E {
                return Some(sim::eps_half());
            }
            values.get(v as usize).copied()
        })?;
        *out = value;
        Ok(())
    })
}

/// Release a string returned through an out-pointer. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn levyq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Current global degree bound.
#[no_mangle]
pub extern "C" fn levyq_max_order() -> u32 {
    limits::max_order() as u32
}

/// Set the global degree bound (process-wide).
#[no_mangle]
pub extern "C" fn levyq_set_max_order(limit: u32) {
    limits::set_max_order(limit as usize);
}

/// Monte Carlo martingale gate: draws `n_paths` seeded paths and fills
/// `out[0]` with the verdict on `mean Q_n(X_t, t) = 0` and `out[1]` with
/// the verdict on the `s` to `t` increment. A failing gate still returns
/// `LEVYQ_STATUS_OK`; inspect the `pass` fields.
///
/// # Safety
/// `model` must be a live handle; `out` must point to two verdict slots.
#[no_mangle]
pub unsafe extern "C" fn levyq_verify_martingale(
    model: *const LevyqModel,
    n: u32,
    s: f64,
    t: f64,
    n_paths: usize,
    seed: u64,
    out: *mut LevyqVerdict,
) -> LevyqStatus {
    if model.is_null() {
        return null_error("model");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let config = SimConfig::new((*model).inner.clone(), vec![s, t], n_paths, seed)?;
        let verdicts = sim::mc_martingale_test(&config, n as usize, s, t)?;
        for (i, v) in verdicts.iter().enumerate() {
            *out.add(i) = LevyqVerdict {
                estimate: v.estimate,
                std_error: v.std_error,
                target: v.target,
                pass: v.pass,
                n_paths: v.n_paths as u64,
            };
        }
        Ok(())
    })
}

/// Monte Carlo orthogonality gate on the iterated-integral product
/// `P^(n) P^(m)` at time `t`. A failing gate still returns
/// `LEVYQ_STATUS_OK`; inspect the `pass` field.
///
/// # Safety
/// `model` must be a live handle; `out` must point to one verdict slot.
#[no_mangle]
pub unsafe extern "C" fn levyq_verify_orthogonality(
    model: *const LevyqModel,
    n: u32,
    m: u32,
    t: f64,
    n_paths: usize,
    seed: u64,
    out: *mut LevyqVerdict,
) -> LevyqStatus {
    if model.is_null() {
        return null_error("model");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let config = SimConfig::new((*model).inner.clone(), vec![t], n_paths, seed)?;
        let v = sim::mc_orthogonality_test(&config, n as usize, m as usize, t)?;
        *out = LevyqVerdict {
            estimate: v.estimate,
            std_error: v.std_error,
            target: v.target,
            pass: v.pass,
            n_paths: v.n_paths as u64,
        };
        Ok(())
    })
}

/// Run the deterministic symbolic identity suite; returns the number of
/// failed checks (zero on a healthy build).
#[no_mangle]
pub extern "C" fn levyq_selftest() -> u32 {
    match catch_unwind(selftest::run_all) {
        Ok(checks) => checks.iter().filter(|c| !c.pass).count() as u32,
        Err(_) => {
            set_last_error("panic caught at the C boundary");
            u32::MAX
        }
    }
}
