//! C ABI for the betacoal library.
//!
//! Every fallible function returns a [`BcStatus`] and writes its result
//! through an out pointer. On failure the message is kept per thread and can
//! be read with [`bc_last_error_message`]. Objects are opaque handles that
//! must be released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use betacoal::asymptotics::{expansion_coeffs, moment_expansion, ExpansionCoeffs};
use betacoal::exact::{exact_distribution, exact_moments, MomentTable};
use betacoal::rates::{collision_rate, jump_pmf, total_rate, BetaParams, JumpPmf};
use betacoal::simulation::{sample_collisions, SimConfig};
use betacoal::{special, Error, Limits};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcStatus {
    Ok = 0,
    /// Argument outside the domain of the function.
    Domain = 1,
    Divergence = 2,
    /// Refused by a resource cap; nothing was computed.
    Resource = 3,
    EmptyInput = 4,
    ThreadPool = 5,
    NullPointer = 6,
    /// The caller's buffer is shorter than the result.
    BufferTooSmall = 7,
    /// Internal failure; please report it.
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BcStatus, msg: impl Into<String>) -> BcStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> BcStatus {
    let status = match e {
        Error::Domain(_) => BcStatus::Domain,
        Error::Divergence(_) => BcStatus::Divergence,
        Error::Resource { .. } => BcStatus::Resource,
        Error::EmptyInput(_) => BcStatus::EmptyInput,
        Error::ThreadPool(_) => BcStatus::ThreadPool,
    };
    fail(status, e.to_string())
}

/// Runs `f` with panics turned into [`BcStatus::Panic`].
fn guarded(f: impl FnOnce() -> BcStatus) -> BcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(BcStatus::Panic, "internal panic"),
    }
}

/// Writes `value` through `out` or reports the library error.
unsafe fn write_out<T>(out: *mut T, value: betacoal::Result<T>) -> BcStatus {
    if out.is_null() {
        return fail(BcStatus::NullPointer, "null output pointer");
    }
    match value {
        Ok(v) => {
            out.write(v);
            BcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Message of the last failure on this thread, or null if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// ln Γ(x) for x > 0.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_log_gamma(x: f64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, special::log_gamma(x)))
}

/// Ψ(x) for x > 0.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_digamma(x: f64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, special::digamma(x)))
}

/// Ψ'(x) for x > 0.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_trigamma(x: f64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, special::trigamma(x)))
}

/// ζ(s, b) for s > 1, b > 0.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_hurwitz_zeta(s: f64, b: f64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, special::hurwitz_zeta(s, b)))
}

/// r! ζ(r + 1, b).
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_levy_moment(r: u32, b: f64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, special::levy_moment(r, b)))
}

/// H(n, b) = b/(b+n−1) + Ψ(b+n−1) − Ψ(b) − 1.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_h(n: u64, b: f64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, special::h_fn(n, b)))
}

/// g_nk for Λ = beta(a, b).
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_collision_rate(a: f64, b: f64, n: u64, k: u64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, BetaParams::new(a, b).and_then(|p| collision_rate(p, n, k))))
}

/// g_n = Σ_k g_nk for Λ = beta(a, b).
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn bc_total_rate(a: f64, b: f64, n: u64, out: *mut f64) -> BcStatus {
    guarded(|| write_out(out, BetaParams::new(a, b).and_then(|p| total_rate(p, n))))
}

/// Standard normal distribution function.
#[no_mangle]
pub extern "C" fn bc_normal_cdf(x: f64) -> f64 {
    special::normal_cdf(x)
}

/// Boxes `value` into `*out`.
unsafe fn new_handle<T>(out: *mut *mut T, value: betacoal::Result<T>) -> BcStatus {
    if out.is_null() {
        return fail(BcStatus::NullPointer, "null handle pointer");
    }
    out.write(ptr::null_mut());
    match value {
        Ok(v) => {
            out.write(Box::into_raw(Box::new(v)));
            BcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

unsafe fn handle_ref<'a, T>(h: *const T) -> Option<&'a T> {
    h.as_ref()
}

/// Law of the first jump I_n of the beta(2, b) block-counting chain.
pub struct BcJumpPmf(JumpPmf);

/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_jump_pmf_new(n: u64, b: f64, out: *mut *mut BcJumpPmf) -> BcStatus {
    guarded(|| new_handle(out, jump_pmf(n, b).map(BcJumpPmf)))
}

/// Number of atoms, n − 1; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle from [`bc_jump_pmf_new`].
#[no_mangle]
pub unsafe extern "C" fn bc_jump_pmf_len(h: *const BcJumpPmf) -> usize {
    handle_ref(h).map_or(0, |p| p.0.probs.len())
}

/// P{I_n = k}, zero outside 1..n−1.
///
/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bc_jump_pmf_prob(h: *const BcJumpPmf, k: u64, out: *mut f64) -> BcStatus {
    guarded(|| match handle_ref(h) {
        Some(p) => write_out(out, Ok(p.0.prob(k))),
        None => fail(BcStatus::NullPointer, "null jump pmf handle"),
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bc_jump_pmf_free(h: *mut BcJumpPmf) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Exact moments E X_n^k for n ≤ n_max, k ≤ k_max.
pub struct BcMomentTable(MomentTable);

/// Builds the table under the default resource caps.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_moment_table_new(
    n_max: usize,
    k_max: usize,
    b: f64,
    out: *mut *mut BcMomentTable,
) -> BcStatus {
    guarded(|| {
        new_handle(out, exact_moments(n_max, k_max, b, &Limits::default()).map(BcMomentTable))
    })
}

/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bc_moment_table_get(
    h: *const BcMomentTable,
    n: usize,
    k: usize,
    out: *mut f64,
) -> BcStatus {
    guarded(|| match handle_ref(h) {
        Some(t) if n >= 1 && n <= t.0.n_max && k <= t.0.k_max => write_out(out, Ok(t.0.moment(n, k))),
        Some(t) => fail(
            BcStatus::Domain,
            format!("(n, k) = ({n}, {k}) outside the table 1..={} x 0..={}", t.0.n_max, t.0.k_max),
        ),
        None => fail(BcStatus::NullPointer, "null moment table handle"),
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bc_moment_table_free(h: *mut BcMomentTable) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Expansion constants m_1, m_2, c, α and r_1..r_K.
pub struct BcExpansionCoeffs(ExpansionCoeffs);

/// Fields readable through [`bc_expansion_coeffs_get`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcCoeff {
    M1 = 0,
    M2 = 1,
    C = 2,
    Alpha = 3,
    VarianceCoefficient = 4,
}

/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_expansion_coeffs_new(
    k_max: u32,
    b: f64,
    out: *mut *mut BcExpansionCoeffs,
) -> BcStatus {
    guarded(|| new_handle(out, expansion_coeffs(k_max, b).map(BcExpansionCoeffs)))
}

/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bc_expansion_coeffs_get(
    h: *const BcExpansionCoeffs,
    which: BcCoeff,
    out: *mut f64,
) -> BcStatus {
    guarded(|| match handle_ref(h) {
        Some(c) => {
            let c = &c.0;
            let v = match which {
                BcCoeff::M1 => c.m1,
                BcCoeff::M2 => c.m2,
                BcCoeff::C => c.c,
                BcCoeff::Alpha => c.alpha,
                BcCoeff::VarianceCoefficient => c.variance_coefficient(),
            };
            write_out(out, Ok(v))
        }
        None => fail(BcStatus::NullPointer, "null coefficients handle"),
    })
}

/// r_k for 1 ≤ k ≤ k_max.
///
/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bc_expansion_coeffs_r(
    h: *const BcExpansionCoeffs,
    k: u32,
    out: *mut f64,
) -> BcStatus {
    guarded(|| match handle_ref(h) {
        Some(c) => match c.0.r.get((k as usize).wrapping_sub(1)) {
            Some(&r) => write_out(out, Ok(r)),
            None => fail(BcStatus::Domain, format!("r_{k} outside 1..={}", c.0.r.len())),
        },
        None => fail(BcStatus::NullPointer, "null coefficients handle"),
    })
}

/// α^k log^{2k} n + r_k log^{2k−1} n.
///
/// # Safety
/// `h` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bc_moment_expansion(
    h: *const BcExpansionCoeffs,
    n: u64,
    k: u32,
    out: *mut f64,
) -> BcStatus {
    guarded(|| match handle_ref(h) {
        Some(c) => write_out(out, moment_expansion(n, k, &c.0)),
        None => fail(BcStatus::NullPointer, "null coefficients handle"),
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bc_expansion_coeffs_free(h: *mut BcExpansionCoeffs) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Copies `values` into a caller buffer of `len` elements.
unsafe fn fill_buffer<T: Copy>(values: &[T], buf: *mut T, len: usize) -> BcStatus {
    if buf.is_null() {
        return fail(BcStatus::NullPointer, "null output buffer");
    }
    if len < values.len() {
        return fail(
            BcStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        );
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    BcStatus::Ok
}

/// Writes P{X_n = j}, j = 0..n−1, into `buf` (at least n doubles).
///
/// # Safety
/// `buf` must be null or valid for writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bc_exact_distribution(n: usize, b: f64, buf: *mut f64, len: usize) -> BcStatus {
    guarded(|| match exact_distribution(n, b, &Limits::default()) {
        Ok(pmf) => fill_buffer(&pmf.probs, buf, len),
        Err(e) => from_error(e),
    })
}

/// Draws `reps` samples of X_n into `buf` (at least `reps` values). The
/// samples depend only on `seed` and the parameters, not on `workers`.
///
/// # Safety
/// `buf` must be null or valid for writing `len` values.
#[no_mangle]
pub unsafe extern "C" fn bc_sample_collisions(
    n: u64,
    b: f64,
    reps: u64,
    seed: u64,
    workers: usize,
    buf: *mut u64,
    len: usize,
) -> BcStatus {
    guarded(|| {
        if (len as u64) < reps {
            return fail(
                BcStatus::BufferTooSmall,
                format!("buffer holds {len} values, {reps} needed"),
            );
        }
        let cfg = SimConfig::new(n, b, reps, seed).with_workers(workers);
        match sample_collisions(&cfg, &Limits::default()) {
            Ok(xs) => fill_buffer(&xs, buf, len),
            Err(e) => from_error(e),
        }
    })
}
