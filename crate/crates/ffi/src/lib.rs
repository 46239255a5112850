//! C ABI over the core library: opaque presentation handles, integer
//! status codes, and caller-freed strings. Every entry point catches
//! panics, so no unwind crosses the boundary. Fallible calls leave a
//! message readable through [`wp4m_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wp4m::adjan_rabin::{build_pw, build_qw, check_condition_21, AdjanRabinError};
use wp4m::enumerate::{enumerate_cosets, Outcome, Strategy};
use wp4m::handles::{render_slide_moves, slide_reduce};
use wp4m::presentations::parse_presentation;
use wp4m::quotients::{hom_count, FiniteTarget, TargetKind};
use wp4m::word_problem::{syllable_reduce, Verdict};
use wp4m::words::{parse_word, GeneratorName};
use wp4m::Presentation;

/// Result of every fallible call. Matches the command-line exit codes
/// for the first four values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wp4mStatus {
    Ok = 0,
    ParseError = 1,
    PreconditionViolated = 2,
    BoundExceeded = 3,
    NullArgument = 4,
    InternalPanic = 5,
}

/// Coset definition order for [`wp4m_enumerate_order`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wp4mStrategy {
    Hlt = 0,
    Felsch = 1,
}

/// Finite hom-count target for [`wp4m_hom_count`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wp4mTarget {
    S3 = 0,
    A4 = 1,
    S4 = 2,
    S5 = 3,
}

/// Opaque handle to a finitely presented group.
pub struct Wp4mPresentation {
    inner: Presentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).expect("NUL stripped");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn guarded(f: impl FnOnce() -> Wp4mStatus) -> Wp4mStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            Wp4mStatus::InternalPanic
        }
    }
}

/// Borrows a handle; reports through the status instead of dereferencing null.
unsafe fn borrow<'a>(p: *const Wp4mPresentation) -> Result<&'a Presentation, Wp4mStatus> {
    match p.as_ref() {
        Some(h) => Ok(&h.inner),
        None => {
            set_error("null presentation handle");
            Err(Wp4mStatus::NullArgument)
        }
    }
}

unsafe fn c_text<'a>(s: *const c_char) -> Result<&'a str, Wp4mStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(Wp4mStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        Wp4mStatus::ParseError
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> Wp4mStatus {
    let owned = CString::new(text.replace('\0', " ")).expect("NUL stripped");
    unsafe { *out = owned.into_raw() };
    Wp4mStatus::Ok
}

fn certificate_status(e: &AdjanRabinError) -> Wp4mStatus {
    match e {
        AdjanRabinError::UnknownGenerator(_) => Wp4mStatus::ParseError,
        _ => Wp4mStatus::PreconditionViolated,
    }
}

/// Message from the most recent failing call on this thread, empty when
/// none. The pointer stays valid until the next failing call on the
/// same thread; do not free it.
///
/// # Safety
/// Always safe to call; the returned pointer must not outlive the next
/// failing call on this thread.
#[no_mangle]
pub unsafe extern "C" fn wp4m_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by any `wp4m_` call. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wp4m_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the presentation file format (`gens:` and `rel:` lines) and
/// stores a fresh handle in `out`.
///
/// # Safety
/// `text` must be null or NUL-terminated; `out` must point to writable
/// memory. On success the caller owns the handle and must release it
/// with [`wp4m_presentation_free`].
#[no_mangle]
pub unsafe extern "C" fn wp4m_presentation_parse(
    text: *const c_char,
    out: *mut *mut Wp4mPresentation,
) -> Wp4mStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Wp4mStatus::NullArgument;
        }
        let text = match c_text(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_presentation(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(Wp4mPresentation { inner: p }));
                Wp4mStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                Wp4mStatus::ParseError
            }
        }
    })
}

/// Releases a handle returned by this library. Null is a no-op.
///
/// # Safety
/// `p` must be null or a handle previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wp4m_presentation_free(p: *mut Wp4mPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Renders the presentation in its file format; the caller frees the
/// string with [`wp4m_string_free`]. Returns null on a null handle.
///
/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn wp4m_presentation_render(p: *const Wp4mPresentation) -> *mut c_char {
    match catch_unwind(AssertUnwindSafe(|| {
        let p = borrow(p).ok()?;
        let owned = CString::new(p.render()).expect("render has no NUL");
        Some(owned.into_raw())
    })) {
        Ok(Some(s)) => s,
        _ => ptr::null_mut(),
    }
}

/// Number of generators; 0 on a null handle.
///
/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn wp4m_presentation_generator_count(p: *const Wp4mPresentation) -> usize {
    borrow(p).map_or(0, |p| p.generators().len())
}

/// Number of relators; 0 on a null handle.
///
/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn wp4m_presentation_relator_count(p: *const Wp4mPresentation) -> usize {
    borrow(p).map_or(0, |p| p.relators().len())
}

unsafe fn derive_presentation(
    seed: *const Wp4mPresentation,
    word: *const c_char,
    out: *mut *mut Wp4mPresentation,
    pw: bool,
) -> Wp4mStatus {
    if out.is_null() {
        set_error("null output pointer");
        return Wp4mStatus::NullArgument;
    }
    let seed = match borrow(seed) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let word = match c_text(word) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let w = match seed.word(word) {
        Ok(w) => w,
        Err(e) => {
            set_error(&e.to_string());
            return Wp4mStatus::ParseError;
        }
    };
    let cert = match check_condition_21(seed) {
        Ok(c) => c,
        Err(e) => {
            set_error(&e.to_string());
            return certificate_status(&e);
        }
    };
    let built = if pw {
        build_pw(seed, &w, &cert).map(|(p, _)| p)
    } else {
        build_qw(seed, &w, &cert)
    };
    match built {
        Ok(p) => {
            *out = Box::into_raw(Box::new(Wp4mPresentation { inner: p }));
            Wp4mStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            certificate_status(&e)
        }
    }
}

/// Builds the padded presentation Q_w for a word over the seed and
/// stores a fresh handle in `out`.
///
/// # Safety
/// `seed` must be a live handle; `word` a NUL-terminated string; `out`
/// writable. The caller owns the new handle on success.
#[no_mangle]
pub unsafe extern "C" fn wp4m_build_qw(
    seed: *const Wp4mPresentation,
    word: *const c_char,
    out: *mut *mut Wp4mPresentation,
) -> Wp4mStatus {
    guarded(|| derive_presentation(seed, word, out, false))
}

/// Builds the two-generator presentation P_w for a word over the seed
/// and stores a fresh handle in `out`.
///
/// # Safety
/// `seed` must be a live handle; `word` a NUL-terminated string; `out`
/// writable. The caller owns the new handle on success.
#[no_mangle]
pub unsafe extern "C" fn wp4m_build_pw(
    seed: *const Wp4mPresentation,
    word: *const c_char,
    out: *mut *mut Wp4mPresentation,
) -> Wp4mStatus {
    guarded(|| derive_presentation(seed, word, out, true))
}

/// Runs coset enumeration over the trivial subgroup. On completion
/// writes the group order to `out_order`; when the coset budget runs
/// out, returns `BoundExceeded` and leaves `out_order` untouched.
///
/// # Safety
/// `p` must be a live handle and `out_order` writable.
#[no_mangle]
pub unsafe extern "C" fn wp4m_enumerate_order(
    p: *const Wp4mPresentation,
    max_cosets: usize,
    strategy: Wp4mStrategy,
    out_order: *mut u64,
) -> Wp4mStatus {
    guarded(|| {
        if out_order.is_null() {
            set_error("null output pointer");
            return Wp4mStatus::NullArgument;
        }
        let p = match borrow(p) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let strategy = match strategy {
            Wp4mStrategy::Hlt => Strategy::Hlt,
            Wp4mStrategy::Felsch => Strategy::Felsch,
        };
        match enumerate_cosets(p, strategy, max_cosets, None) {
            Outcome::Finite(table) => {
                *out_order = table.order() as u64;
                Wp4mStatus::Ok
            }
            Outcome::BoundExceeded { max_cosets, .. } => {
                set_error(&format!("coset budget of {max_cosets} exhausted"));
                Wp4mStatus::BoundExceeded
            }
        }
    })
}

/// Counts homomorphisms into the chosen target using `jobs` worker
/// threads and writes the count to `out_count`.
///
/// # Safety
/// `p` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn wp4m_hom_count(
    p: *const Wp4mPresentation,
    target: Wp4mTarget,
    jobs: usize,
    out_count: *mut u64,
) -> Wp4mStatus {
    guarded(|| {
        if out_count.is_null() {
            set_error("null output pointer");
            return Wp4mStatus::NullArgument;
        }
        let p = match borrow(p) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let kind = match target {
            Wp4mTarget::S3 => TargetKind::S3,
            Wp4mTarget::A4 => TargetKind::A4,
            Wp4mTarget::S4 => TargetKind::S4,
            Wp4mTarget::S5 => TargetKind::S5,
        };
        *out_count = hom_count(p, &FiniteTarget::standard(kind), jobs);
        Wp4mStatus::Ok
    })
}

/// Reduces a tuple with gcd 1 to (1,0,...,0) and stores the move script
/// (`sub r s xN` and `perm ...` lines) in `out_script`; the caller
/// frees it with [`wp4m_string_free`].
///
/// # Safety
/// `entries` must point to `len` readable values and `out_script` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn wp4m_slide_moves(
    entries: *const u64,
    len: usize,
    out_script: *mut *mut c_char,
) -> Wp4mStatus {
    guarded(|| {
        if entries.is_null() || out_script.is_null() {
            set_error("null argument");
            return Wp4mStatus::NullArgument;
        }
        let tuple = std::slice::from_raw_parts(entries, len);
        match slide_reduce(tuple) {
            Ok(seq) => give_string(render_slide_moves(&seq.moves), out_script),
            Err(e) => {
                set_error(&e.to_string());
                Wp4mStatus::PreconditionViolated
            }
        }
    })
}

/// Decides a word in the free product of cyclic groups of the given
/// orders (generators are named x1..xn). Writes 1 to `out_trivial` for
/// the identity, else 0; when nontrivial and `out_normal_form` is not
/// null, also stores the syllable normal form for the caller to free
/// with [`wp4m_string_free`].
///
/// # Safety
/// `orders` must point to `len` readable values, `word` must be
/// NUL-terminated, `out_trivial` writable, and `out_normal_form` null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn wp4m_cyclic_word_verdict(
    orders: *const u64,
    len: usize,
    word: *const c_char,
    out_trivial: *mut u8,
    out_normal_form: *mut *mut c_char,
) -> Wp4mStatus {
    guarded(|| {
        if orders.is_null() || out_trivial.is_null() {
            set_error("null argument");
            return Wp4mStatus::NullArgument;
        }
        let orders = std::slice::from_raw_parts(orders, len);
        if let Some(q) = orders.iter().find(|q| **q < 2) {
            set_error(&format!("cyclic order {q} is below 2"));
            return Wp4mStatus::PreconditionViolated;
        }
        let word = match c_text(word) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let gens: Vec<GeneratorName> = (1..=len)
            .map(|i| GeneratorName::new(&format!("x{i}")).expect("x<i> is a valid name"))
            .collect();
        let w = match parse_word(word, &gens) {
            Ok(w) => w,
            Err(e) => {
                set_error(&e.to_string());
                return Wp4mStatus::ParseError;
            }
        };
        let table = gens.iter().cloned().zip(orders.iter().copied()).collect();
        match syllable_reduce(&w, &table) {
            Verdict::Trivial => {
                *out_trivial = 1;
                if !out_normal_form.is_null() {
                    *out_normal_form = ptr::null_mut();
                }
                Wp4mStatus::Ok
            }
            Verdict::NonTrivial(nf) => {
                *out_trivial = 0;
                if !out_normal_form.is_null() {
                    return give_string(nf.render(), out_normal_form);
                }
                Wp4mStatus::Ok
            }
        }
    })
}
