//! C ABI over the growth-scale toolkit.
//!
//! Expressions live behind the opaque [`PqExpr`] handle; astronomically
//! large values cross the boundary as [`PqTower`] (level, mantissa) pairs;
//! every fallible call returns a [`PqStatus`] and leaves a message for
//! [`pq_last_error`] on failure. All functions tolerate null pointers and
//! catch panics, so no misuse can unwind across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pqgrowth::error::Error;
use pqgrowth::funfam::{EntireExpr, GrowthObject, MaxModulus};
use pqgrowth::growth::{self, EstimatorParams, GrowthClass, GrowthEstimate};
use pqgrowth::oracle::{self, OracleParams, Verdict};
use pqgrowth::tower::TowerReal;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The expression text does not parse.
    Syntax = 3,
    /// The expression uses a negative coefficient.
    NegativeCoefficient = 4,
    /// A numeric argument is outside its domain.
    InvalidValue = 5,
    /// The operation is undefined for these values.
    Domain = 6,
    /// A value left the representable range.
    Overflow = 7,
    /// The measurement could not be classified.
    Indeterminate = 8,
    /// The series oracle's guard radius was exceeded.
    GuardRadius = 9,
    /// The sandwich's lower argument was not positive.
    NonpositiveArgument = 10,
    /// Profile parameters violate admissibility.
    Admissibility = 11,
    /// No index pair was found in the scanned range.
    NotFound = 12,
    /// A statement's hypotheses do not hold.
    HypothesisViolated = 13,
    /// An internal panic was caught.
    Panic = 14,
}

/// Opaque handle to a parsed entire-function expression.
pub struct PqExpr {
    obj: GrowthObject,
}

/// A tower value `exp^[level](mantissa)`. Constructors canonicalize, so
/// any finite mantissa is accepted on input; outputs keep the mantissa in
/// `[1, e)` for level >= 1.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PqTower {
    pub level: u32,
    pub mantissa: f64,
}

/// Limit class of a growth estimate.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PqClass {
    Infinity = 0,
    Zero = 1,
    Unit = 2,
    Finite = 3,
}

/// A (p,q)-order estimate: tail limsup (`rho`), tail liminf (`lambda`),
/// and the fitted residual slope of the quotient sequence.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PqEstimate {
    pub rho: f64,
    pub lambda: f64,
    pub slope: f64,
    pub class: PqClass,
    pub converged: bool,
}

/// A detected index pair with its order estimate.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PqIndexPair {
    pub p: u32,
    pub q: u32,
    pub order: PqEstimate,
    /// Whether order and lower order coincide.
    pub regular: bool,
}

/// Verdict of an interval comparison.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PqVerdict {
    Pass = 0,
    Inconclusive = 1,
    Fail = 2,
}

/// One composition-sandwich check: rigorous enclosures of the lower
/// bound, the composition, and the upper bound at radius `r`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PqSandwich {
    pub r: f64,
    pub lower_lo: f64,
    pub lower_hi: f64,
    pub mid_lo: f64,
    pub mid_hi: f64,
    pub upper_lo: f64,
    pub upper_hi: f64,
    pub verdict: PqVerdict,
    /// True when the lower bound degenerated to [0, 0] because its
    /// argument was not positive at this radius.
    pub lower_vacuous: bool,
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(e: &Error) -> PqStatus {
    set_error(e.to_string());
    match e {
        Error::Syntax { .. } => PqStatus::Syntax,
        Error::NegativeCoefficient { .. } => PqStatus::NegativeCoefficient,
        Error::InvalidValue(_) => PqStatus::InvalidValue,
        Error::Domain(_) => PqStatus::Domain,
        Error::Overflow(_) => PqStatus::Overflow,
        Error::Indeterminate(_) => PqStatus::Indeterminate,
        Error::GuardRadius(_) => PqStatus::GuardRadius,
        Error::NonpositiveArgument(_) => PqStatus::NonpositiveArgument,
        Error::Admissibility(_) => PqStatus::Admissibility,
        Error::NotFound(_) => PqStatus::NotFound,
        Error::HypothesisViolated(_) => PqStatus::HypothesisViolated,
    }
}

fn null_argument(what: &str) -> PqStatus {
    set_error(format!("{what} must not be null"));
    PqStatus::NullArgument
}

/// Run `body` with panics converted to `PqStatus::Panic`.
fn guarded(body: impl FnOnce() -> PqStatus) -> PqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            PqStatus::Panic
        }
    }
}

fn tower_in(t: PqTower) -> Result<TowerReal, Error> {
    TowerReal::new(t.level, t.mantissa)
}

fn tower_out(v: &TowerReal) -> PqTower {
    PqTower {
        level: v.level(),
        mantissa: v.mantissa(),
    }
}

fn estimate_out(est: &GrowthEstimate) -> PqEstimate {
    PqEstimate {
        rho: est.limsup,
        lambda: est.liminf,
        slope: est.slope,
        class: match est.class {
            GrowthClass::Infinity => PqClass::Infinity,
            GrowthClass::Zero => PqClass::Zero,
            GrowthClass::Unit => PqClass::Unit,
            GrowthClass::Finite => PqClass::Finite,
        },
        converged: est.converged,
    }
}

/// Shared deref for handle arguments.
///
/// # Safety
/// `expr` must be null or a pointer from `pq_expr_parse` that has not been
/// freed.
unsafe fn expr_ref<'a>(expr: *const PqExpr) -> Option<&'a PqExpr> {
    expr.as_ref()
}

/// Parse an expression (grammar: `z^3`, `exp[2](z^4)`, sums, products,
/// nonnegative constants, and `o` for composition) into a new handle.
/// The handle must be released with [`pq_expr_free`].
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must point to writable
/// memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_expr_parse(src: *const c_char, out: *mut *mut PqExpr) -> PqStatus {
    guarded(|| {
        if src.is_null() {
            return null_argument("src");
        }
        if out.is_null() {
            return null_argument("out");
        }
        let text = match CStr::from_ptr(src).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("expression text is not valid UTF-8".into());
                return PqStatus::InvalidUtf8;
            }
        };
        let parsed: Result<EntireExpr, Error> = text.parse();
        match parsed.and_then(GrowthObject::from_expr) {
            Ok(obj) => {
                *out = Box::into_raw(Box::new(PqExpr { obj }));
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Write the canonical text of an expression into `buf` (NUL-terminated,
/// truncated to `cap` bytes). `needed` receives the full length including
/// the NUL, so a second call with a larger buffer can fetch a truncated
/// result; `buf` may be null when only the length is wanted.
///
/// # Safety
/// `expr` must be a live handle; `buf`, when non-null, must have `cap`
/// writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn pq_expr_print(
    expr: *const PqExpr,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> PqStatus {
    guarded(|| {
        let Some(handle) = expr_ref(expr) else {
            return null_argument("expr");
        };
        let text = handle
            .obj
            .expr()
            .map(ToString::to_string)
            .unwrap_or_else(|| handle.obj.description());
        if !needed.is_null() {
            *needed = text.len() + 1;
        }
        if !buf.is_null() && cap > 0 {
            let n = text.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        PqStatus::Ok
    })
}

/// Release a handle from [`pq_expr_parse`]. Null is ignored.
///
/// # Safety
/// `expr` must be null or a handle that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn pq_expr_free(expr: *mut PqExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Maximum modulus `M(r)` as a tower value.
///
/// # Safety
/// `expr` must be a live handle; `out` must point to writable memory for
/// one `PqTower`.
#[no_mangle]
pub unsafe extern "C" fn pq_max_modulus(
    expr: *const PqExpr,
    r: PqTower,
    out: *mut PqTower,
) -> PqStatus {
    guarded(|| {
        let Some(handle) = expr_ref(expr) else {
            return null_argument("expr");
        };
        if out.is_null() {
            return null_argument("out");
        }
        match tower_in(r).and_then(|r| handle.obj.max_modulus(&r)) {
            Ok(v) => {
                *out = tower_out(&v);
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// The radius `r` with `M(r) = value`, to relative tolerance `rel_tol`
/// (pass 0 for the default 1e-9).
///
/// # Safety
/// `expr` must be a live handle; `out` must point to writable memory for
/// one `PqTower`.
#[no_mangle]
pub unsafe extern "C" fn pq_inverse_max_modulus(
    expr: *const PqExpr,
    value: PqTower,
    rel_tol: f64,
    out: *mut PqTower,
) -> PqStatus {
    guarded(|| {
        let Some(handle) = expr_ref(expr) else {
            return null_argument("expr");
        };
        if out.is_null() {
            return null_argument("out");
        }
        let tol = if rel_tol > 0.0 { rel_tol } else { 1e-9 };
        let result =
            tower_in(value).and_then(|v| growth::inverse_max_modulus(&handle.obj, &v, tol));
        match result {
            Ok(r) => {
                *out = tower_out(&r);
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Estimate the (p,q)-order of the expression with default estimator
/// settings.
///
/// # Safety
/// `expr` must be a live handle; `out` must point to writable memory for
/// one `PqEstimate`.
#[no_mangle]
pub unsafe extern "C" fn pq_order(
    expr: *const PqExpr,
    p: u32,
    q: u32,
    out: *mut PqEstimate,
) -> PqStatus {
    guarded(|| {
        let Some(handle) = expr_ref(expr) else {
            return null_argument("expr");
        };
        if out.is_null() {
            return null_argument("out");
        }
        match growth::pq_order(&handle.obj, p, q, &EstimatorParams::default()) {
            Ok(est) => {
                *out = estimate_out(&est);
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Scan for the expression's index pair with default estimator settings.
///
/// # Safety
/// `expr` must be a live handle; `out` must point to writable memory for
/// one `PqIndexPair`.
#[no_mangle]
pub unsafe extern "C" fn pq_index_pair(expr: *const PqExpr, out: *mut PqIndexPair) -> PqStatus {
    guarded(|| {
        let Some(handle) = expr_ref(expr) else {
            return null_argument("expr");
        };
        if out.is_null() {
            return null_argument("out");
        }
        match growth::detect_index_pair(&handle.obj, &EstimatorParams::default()) {
            Ok(found) => {
                *out = PqIndexPair {
                    p: found.p,
                    q: found.q,
                    order: estimate_out(&found.order),
                    regular: found.regular,
                };
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Estimate the relative (p,q)-order of `f` with respect to `g` with
/// default estimator settings.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must point to writable memory
/// for one `PqEstimate`.
#[no_mangle]
pub unsafe extern "C" fn pq_relative_order(
    f: *const PqExpr,
    g: *const PqExpr,
    p: u32,
    q: u32,
    out: *mut PqEstimate,
) -> PqStatus {
    guarded(|| {
        let Some(fh) = expr_ref(f) else {
            return null_argument("f");
        };
        let Some(gh) = expr_ref(g) else {
            return null_argument("g");
        };
        if out.is_null() {
            return null_argument("out");
        }
        match growth::relative_pq_order(&fh.obj, &gh.obj, p, q, &EstimatorParams::default()) {
            Ok(est) => {
                *out = estimate_out(&est);
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Check the composition sandwich `M_f(M_g(r/2)/8 - |g(0)|) <= M_{f o g}(r)
/// <= M_f(M_g(r))` with the series oracle at radius `r`. `n_terms` is the
/// starting truncation order (pass 0 for the default).
///
/// # Safety
/// `f` and `g` must be live handles; `out` must point to writable memory
/// for one `PqSandwich`.
#[no_mangle]
pub unsafe extern "C" fn pq_check_sandwich(
    f: *const PqExpr,
    g: *const PqExpr,
    r: f64,
    n_terms: usize,
    out: *mut PqSandwich,
) -> PqStatus {
    guarded(|| {
        let Some(fh) = expr_ref(f) else {
            return null_argument("f");
        };
        let Some(gh) = expr_ref(g) else {
            return null_argument("g");
        };
        if out.is_null() {
            return null_argument("out");
        }
        let (Some(fe), Some(ge)) = (fh.obj.expr(), gh.obj.expr()) else {
            set_error("sandwich checks need expression operands".into());
            return PqStatus::InvalidValue;
        };
        let mut params = OracleParams::default();
        if n_terms > 0 {
            params.n_terms = n_terms;
        }
        match oracle::check_sandwich(fe, ge, r, params) {
            Ok(rec) => {
                *out = PqSandwich {
                    r: rec.r,
                    lower_lo: rec.lower.lo,
                    lower_hi: rec.lower.hi,
                    mid_lo: rec.middle.lo,
                    mid_hi: rec.middle.hi,
                    upper_lo: rec.upper.lo,
                    upper_hi: rec.upper.hi,
                    verdict: match rec.verdict {
                        Verdict::Pass => PqVerdict::Pass,
                        Verdict::Inconclusive => PqVerdict::Inconclusive,
                        Verdict::Fail => PqVerdict::Fail,
                    },
                    lower_vacuous: rec.lower_vacuous,
                };
                PqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Copy the last error message into `buf` (NUL-terminated, truncated to
/// `cap` bytes) and return the full message length excluding the NUL.
/// With a null `buf` only the length is returned.
///
/// # Safety
/// `buf`, when non-null, must have `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pq_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn parse(src: &str) -> *mut PqExpr {
        let c = CString::new(src).unwrap();
        let mut handle: *mut PqExpr = ptr::null_mut();
        let status = unsafe { pq_expr_parse(c.as_ptr(), &mut handle) };
        assert_eq!(status, PqStatus::Ok, "parse {src:?}");
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn parse_print_roundtrip() {
        let h = parse("exp[2](z^3)");
        let mut buf = [0 as c_char; 64];
        let mut needed = 0usize;
        let status =
            unsafe { pq_expr_print(h, buf.as_mut_ptr(), buf.len(), &mut needed) };
        assert_eq!(status, PqStatus::Ok);
        let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
        assert_eq!(needed, text.len() + 1);
        let h2 = parse(text);
        unsafe {
            pq_expr_free(h);
            pq_expr_free(h2);
        }
    }

    #[test]
    fn order_and_index_pair_agree() {
        let h = parse("exp(z^3)");
        let mut est = PqEstimate {
            rho: 0.0,
            lambda: 0.0,
            slope: 0.0,
            class: PqClass::Infinity,
            converged: false,
        };
        assert_eq!(unsafe { pq_order(h, 2, 1, &mut est) }, PqStatus::Ok);
        assert!((est.rho - 3.0).abs() < 1e-6);
        assert!((est.lambda - 3.0).abs() < 1e-6);
        assert_eq!(est.class, PqClass::Finite);

        let mut pair = PqIndexPair {
            p: 0,
            q: 0,
            order: est,
            regular: false,
        };
        assert_eq!(unsafe { pq_index_pair(h, &mut pair) }, PqStatus::Ok);
        assert_eq!((pair.p, pair.q), (2, 1));
        assert!(pair.regular);
        unsafe { pq_expr_free(h) };
    }

    #[test]
    fn tower_values_cross_the_boundary() {
        let h = parse("exp(z^2)");
        let r = PqTower {
            level: 0,
            mantissa: 10.0,
        };
        let mut m = PqTower {
            level: 0,
            mantissa: 0.0,
        };
        assert_eq!(unsafe { pq_max_modulus(h, r, &mut m) }, PqStatus::Ok);
        // M(10) = e^100, still within float range
        let value = TowerReal::new(m.level, m.mantissa)
            .unwrap()
            .to_real()
            .unwrap();
        assert!((value - 100f64.exp()).abs() <= 1e-9 * 100f64.exp());
        assert!(m.level >= 1 && m.mantissa >= 1.0 && m.mantissa < std::f64::consts::E);

        let mut back = PqTower {
            level: 0,
            mantissa: 0.0,
        };
        assert_eq!(
            unsafe { pq_inverse_max_modulus(h, m, 0.0, &mut back) },
            PqStatus::Ok
        );
        let r_back = TowerReal::new(back.level, back.mantissa)
            .unwrap()
            .to_real()
            .unwrap();
        assert!((r_back - 10.0).abs() < 1e-8, "r = {r_back}");
        unsafe { pq_expr_free(h) };
    }

    #[test]
    fn sandwich_record_crosses_the_boundary() {
        let f = parse("exp(z)");
        let g = parse("exp(z)");
        let mut rec = PqSandwich {
            r: 0.0,
            lower_lo: 0.0,
            lower_hi: 0.0,
            mid_lo: 0.0,
            mid_hi: 0.0,
            upper_lo: 0.0,
            upper_hi: 0.0,
            verdict: PqVerdict::Fail,
            lower_vacuous: false,
        };
        assert_eq!(
            unsafe { pq_check_sandwich(f, g, 2.0, 0, &mut rec) },
            PqStatus::Ok
        );
        assert_eq!(rec.verdict, PqVerdict::Pass);
        assert!(rec.lower_vacuous);
        assert!(rec.mid_lo > 1000.0 && rec.mid_hi < 2000.0);
        unsafe {
            pq_expr_free(f);
            pq_expr_free(g);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        let c = CString::new("z^2 + (-1)*z").unwrap();
        let mut handle: *mut PqExpr = ptr::null_mut();
        let status = unsafe { pq_expr_parse(c.as_ptr(), &mut handle) };
        assert_eq!(status, PqStatus::NegativeCoefficient);
        assert!(handle.is_null());
        let mut buf = [0 as c_char; 256];
        let len = unsafe { pq_last_error(buf.as_mut_ptr(), buf.len()) };
        assert!(len > 0);
        let msg = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
        assert!(!msg.is_empty());

        assert_eq!(
            unsafe { pq_order(ptr::null(), 2, 1, ptr::null_mut()) },
            PqStatus::NullArgument
        );
    }
}
