//! C ABI for ltrgen.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `_free` function. Strings returned through `out` parameters are
//! NUL-terminated UTF-8 owned by the caller and released with
//! [`ltrgen_string_free`]. Every function returns an [`LtrgenStatus`]; on
//! failure [`ltrgen_last_error_message`] describes the error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ltrgen::cli::{format_candidates, load_generator, GenerateFlags, GenerateInput};
use ltrgen::model::parse_template_line;
use ltrgen::{DiagnosticKind, Generator, Placeholders, WordEquivalence};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtrgenStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownWord = 4,
    Internal = 5,
}

/// Loaded lexicons, grammar and templates, ready for generation.
pub struct LtrgenSession {
    generator: Generator,
    placeholders: Placeholders,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("NUL bytes removed"));
}

struct Failure(LtrgenStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LtrgenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LtrgenStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            LtrgenStatus::Internal
        }
    }
}

/// Reads a required string argument.
///
/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn required<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(LtrgenStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LtrgenStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

/// # Safety
/// As for [`required`]; null means absent.
unsafe fn optional<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        required(p, name).map(Some)
    }
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(LtrgenStatus::Internal, "output contains NUL".into()))?;
    // SAFETY: callers check `out` for null before producing output.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Creates a session from file contents. `grammar`, `phrasal_templates` and
/// `templates` may be null; phrasal templates need a grammar.
///
/// # Safety
/// String arguments must be null or NUL-terminated. `out` must be a valid
/// pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ltrgen_session_new(
    src_lexicon: *const c_char,
    tgt_lexicon: *const c_char,
    grammar: *const c_char,
    phrasal_templates: *const c_char,
    templates: *const c_char,
    out: *mut *mut LtrgenSession,
) -> LtrgenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(LtrgenStatus::NullArgument, "`out` is null".into()));
        }
        *out = ptr::null_mut();
        let input = GenerateInput {
            equivalences: "",
            src_lexicon: required(src_lexicon, "src_lexicon")?,
            tgt_lexicon: required(tgt_lexicon, "tgt_lexicon")?,
            templates: optional(templates, "templates")?,
            phrasal_templates: optional(phrasal_templates, "phrasal_templates")?,
            grammar: optional(grammar, "grammar")?,
            placeholders: None,
        };
        let generator = load_generator(&input, &GenerateFlags::default())
            .map_err(|e| Failure(LtrgenStatus::ParseError, e.to_string()))?;
        let session = LtrgenSession { generator, placeholders: Placeholders::default() };
        *out = Box::into_raw(Box::new(session));
        Ok(())
    })
}

/// Releases a session. Null is ignored.
///
/// # Safety
/// `session` must be null or a handle from [`ltrgen_session_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ltrgen_session_free(session: *mut LtrgenSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Generates candidates for one `words <-> words` line and writes them in
/// candidate-file format to `out`. Returns `UnknownWord`, with `out` left
/// null, when a source word is missing from the source lexicon.
///
/// # Safety
/// `session` must be a live handle, `equivalence` NUL-terminated, and `out`
/// valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ltrgen_session_generate(
    session: *const LtrgenSession,
    equivalence: *const c_char,
    out: *mut *mut c_char,
) -> LtrgenStatus {
    guard(|| {
        if session.is_null() || out.is_null() {
            return Err(Failure(LtrgenStatus::NullArgument, "`session` or `out` is null".into()));
        }
        *out = ptr::null_mut();
        let session = &*session;
        let line = required(equivalence, "equivalence")?;
        let we = WordEquivalence::parse(line, &session.placeholders, false)
            .map_err(|e| Failure(LtrgenStatus::ParseError, e.to_string()))?;
        let outcome = session.generator.generate(&we);
        if outcome.candidates.is_empty() {
            if let Some(d) = outcome.diagnostics.iter().find(|d| d.kind == DiagnosticKind::UnknownWord && d.detail.contains("blocked")) {
                return Err(Failure(LtrgenStatus::UnknownWord, d.detail.clone()));
            }
        }
        give_string(format_candidates(&[outcome]), out)
    })
}

/// Writes the canonical form of a template line (`n(X) <-> n(X)` becomes
/// `n(A) <-> n(A)`) to `out`.
///
/// # Safety
/// `template` must be NUL-terminated and `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ltrgen_canonicalize_template(
    template: *const c_char,
    out: *mut *mut c_char,
) -> LtrgenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(LtrgenStatus::NullArgument, "`out` is null".into()));
        }
        *out = ptr::null_mut();
        let text = required(template, "template")?;
        let t = parse_template_line(text).map_err(|e| Failure(LtrgenStatus::ParseError, e.to_string()))?;
        give_string(t.canonicalize().to_string(), out)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ltrgen_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ltrgen_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
