//! C ABI over `chirp_papr`.
//!
//! Handles are opaque pointers created by `cp_*_new` and released with the
//! matching `cp_*_free`. Every fallible call returns a [`CpStatus`]; on
//! failure a description is kept per thread and can be fetched with
//! [`cp_last_error_message`]. Complex buffers are arrays of [`CpComplex`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chirp_papr::metrics::{analytic_ofdm_ccdf, ccdf, papr_db};
use chirp_papr::spreading::Spreader;
use chirp_papr::transforms::default_stride;
use chirp_papr::{
    AfdmParams, Complex64, Error, Modulator, SpreadingKind, Transmitter, WaveformKind,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LengthMismatch = 3,
    Unsupported = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpWaveform {
    Ofdm = 0,
    Ocdm = 1,
    Afdm = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpSpreading {
    None = 0,
    Wht = 1,
    Dct = 2,
    /// `param` is the root; 0 selects root 1.
    Zc = 3,
    /// `param` is the interleaver stride; 0 selects the default.
    InterleavedDft = 4,
}

/// Opaque modulator handle.
pub struct CpModulator(Modulator);

/// Opaque spreader handle.
pub struct CpSpreader(Spreader);

/// Opaque spreader + modulator handle.
pub struct CpTransmitter(Transmitter);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::LengthMismatch { .. } => CpStatus::LengthMismatch,
        Error::IncompatibleCombination { .. } => CpStatus::Unsupported,
        Error::Io { .. } => CpStatus::Internal,
        _ => CpStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (CpStatus, String)>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CpStatus::Internal
        }
    }
}

fn lib(e: Error) -> (CpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CpStatus, String) {
    (CpStatus::NullPointer, format!("{what} is null"))
}

fn waveform(kind: CpWaveform, c1: f64, c2: f64) -> Result<WaveformKind, (CpStatus, String)> {
    Ok(match kind {
        CpWaveform::Ofdm => WaveformKind::Ofdm,
        CpWaveform::Ocdm => WaveformKind::Ocdm,
        CpWaveform::Afdm => WaveformKind::Afdm(AfdmParams::new(c1, c2).map_err(lib)?),
    })
}

fn spreading(kind: CpSpreading, param: usize, len: usize) -> SpreadingKind {
    match kind {
        CpSpreading::None => SpreadingKind::None,
        CpSpreading::Wht => SpreadingKind::Wht,
        CpSpreading::Dct => SpreadingKind::Dct,
        CpSpreading::Zc => SpreadingKind::zc(if param == 0 { 1 } else { param }),
        CpSpreading::InterleavedDft => SpreadingKind::interleaved_dft(if param == 0 {
            default_stride(len)
        } else {
            param
        }),
    }
}

/// # Safety
/// `p` must be null or point to `len` readable values.
unsafe fn read_in(p: *const CpComplex, len: usize) -> Result<Vec<Complex64>, (CpStatus, String)> {
    if p.is_null() {
        return Err(null("input"));
    }
    let s = unsafe { std::slice::from_raw_parts(p, len) };
    Ok(s.iter().map(|c| Complex64::new(c.re, c.im)).collect())
}

/// # Safety
/// `p` must be null or point to `v.len()` writable values.
unsafe fn write_out(p: *mut CpComplex, v: &[Complex64]) -> Result<(), (CpStatus, String)> {
    if p.is_null() {
        return Err(null("output"));
    }
    let s = unsafe { std::slice::from_raw_parts_mut(p, v.len()) };
    for (o, c) in s.iter_mut().zip(v) {
        *o = CpComplex { re: c.re, im: c.im };
    }
    Ok(())
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), (CpStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (nul
/// terminated, truncated to `buf_len`). Returns the full message length
/// excluding the nul, or 0 when there is no error recorded.
///
/// # Safety
/// `buf` must be null or point to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cp_last_error_message(buf: *mut c_char, buf_len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && buf_len > 0 {
            let n = bytes.len().min(buf_len - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Creates a modulator. `c1`/`c2` are used only for AFDM.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_modulator_new(
    kind: CpWaveform,
    len: usize,
    c1: f64,
    c2: f64,
    out: *mut *mut CpModulator,
) -> CpStatus {
    guard(|| {
        let m = Modulator::new(waveform(kind, c1, c2)?, len).map_err(lib)?;
        unsafe { store(out, CpModulator(m)) }
    })
}

/// # Safety
/// `m` must come from `cp_modulator_new`; `input`/`output` hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn cp_modulator_modulate(
    m: *const CpModulator,
    input: *const CpComplex,
    output: *mut CpComplex,
    len: usize,
) -> CpStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("modulator"))?;
        let x = unsafe { read_in(input, len)? };
        let s = m.0.modulate(&x).map_err(lib)?;
        unsafe { write_out(output, &s) }
    })
}

/// # Safety
/// As for [`cp_modulator_modulate`].
#[no_mangle]
pub unsafe extern "C" fn cp_modulator_demodulate(
    m: *const CpModulator,
    input: *const CpComplex,
    output: *mut CpComplex,
    len: usize,
) -> CpStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("modulator"))?;
        let s = unsafe { read_in(input, len)? };
        let x = m.0.demodulate(&s).map_err(lib)?;
        unsafe { write_out(output, &x) }
    })
}

/// # Safety
/// `m` must be null or come from `cp_modulator_new`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cp_modulator_free(m: *mut CpModulator) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Creates a spreader. `param` is the ZC root or interleaver stride (0 for
/// the default) and is ignored otherwise.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_spreader_new(
    kind: CpSpreading,
    param: usize,
    len: usize,
    out: *mut *mut CpSpreader,
) -> CpStatus {
    guard(|| {
        let s = Spreader::new(spreading(kind, param, len), len).map_err(lib)?;
        unsafe { store(out, CpSpreader(s)) }
    })
}

/// # Safety
/// `s` must come from `cp_spreader_new`; `input`/`output` hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn cp_spreader_spread(
    s: *const CpSpreader,
    input: *const CpComplex,
    output: *mut CpComplex,
    len: usize,
) -> CpStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("spreader"))?;
        let x = unsafe { read_in(input, len)? };
        let y = s.0.spread(&x).map_err(lib)?;
        unsafe { write_out(output, &y) }
    })
}

/// # Safety
/// As for [`cp_spreader_spread`].
#[no_mangle]
pub unsafe extern "C" fn cp_spreader_despread(
    s: *const CpSpreader,
    input: *const CpComplex,
    output: *mut CpComplex,
    len: usize,
) -> CpStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("spreader"))?;
        let y = unsafe { read_in(input, len)? };
        let x = s.0.despread(&y).map_err(lib)?;
        unsafe { write_out(output, &x) }
    })
}

/// # Safety
/// `s` must be null or come from `cp_spreader_new`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cp_spreader_free(s: *mut CpSpreader) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Spreading followed by modulation.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_transmitter_new(
    spread: CpSpreading,
    param: usize,
    kind: CpWaveform,
    len: usize,
    c1: f64,
    c2: f64,
    out: *mut *mut CpTransmitter,
) -> CpStatus {
    guard(|| {
        let t = Transmitter::new(spreading(spread, param, len), waveform(kind, c1, c2)?, len)
            .map_err(lib)?;
        unsafe { store(out, CpTransmitter(t)) }
    })
}

/// # Safety
/// `t` must come from `cp_transmitter_new`; `input`/`output` hold `len`
/// values.
#[no_mangle]
pub unsafe extern "C" fn cp_transmitter_transmit(
    t: *const CpTransmitter,
    input: *const CpComplex,
    output: *mut CpComplex,
    len: usize,
) -> CpStatus {
    guard(|| {
        let t = unsafe { t.as_ref() }.ok_or_else(|| null("transmitter"))?;
        let x = unsafe { read_in(input, len)? };
        let s = t.0.transmit(&x).map_err(lib)?;
        unsafe { write_out(output, &s) }
    })
}

/// # Safety
/// As for [`cp_transmitter_transmit`].
#[no_mangle]
pub unsafe extern "C" fn cp_transmitter_receive(
    t: *const CpTransmitter,
    input: *const CpComplex,
    output: *mut CpComplex,
    len: usize,
) -> CpStatus {
    guard(|| {
        let t = unsafe { t.as_ref() }.ok_or_else(|| null("transmitter"))?;
        let s = unsafe { read_in(input, len)? };
        let x = t.0.receive(&s).map_err(lib)?;
        unsafe { write_out(output, &x) }
    })
}

/// # Safety
/// `t` must be null or come from `cp_transmitter_new`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cp_transmitter_free(t: *mut CpTransmitter) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

/// PAPR of `signal` in dB.
///
/// # Safety
/// `signal` holds `len` values; `out_db` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_papr_db(
    signal: *const CpComplex,
    len: usize,
    out_db: *mut f64,
) -> CpStatus {
    guard(|| {
        let s = unsafe { read_in(signal, len)? };
        let p = papr_db(&s).map_err(lib)?;
        if out_db.is_null() {
            return Err(null("out_db"));
        }
        unsafe { *out_db = p };
        Ok(())
    })
}

/// Closed-form CCDF of the PAPR of `n` i.i.d. complex Gaussian samples.
#[no_mangle]
pub extern "C" fn cp_analytic_ofdm_ccdf(n: usize, papr0_db: f64) -> f64 {
    analytic_ofdm_ccdf(n, papr0_db)
}

/// Empirical CCDF: `out_probs[i]` = fraction of `samples_db` strictly above
/// `grid_db[i]`. The grid must be strictly ascending.
///
/// # Safety
/// `samples_db` holds `n_samples` values, `grid_db` and `out_probs` hold
/// `n_grid` values.
#[no_mangle]
pub unsafe extern "C" fn cp_ccdf(
    samples_db: *const f64,
    n_samples: usize,
    grid_db: *const f64,
    n_grid: usize,
    out_probs: *mut f64,
) -> CpStatus {
    guard(|| {
        if samples_db.is_null() {
            return Err(null("samples_db"));
        }
        if grid_db.is_null() {
            return Err(null("grid_db"));
        }
        if out_probs.is_null() {
            return Err(null("out_probs"));
        }
        let samples = unsafe { std::slice::from_raw_parts(samples_db, n_samples) };
        let grid = unsafe { std::slice::from_raw_parts(grid_db, n_grid) };
        let curve = ccdf(samples, grid).map_err(lib)?;
        let out = unsafe { std::slice::from_raw_parts_mut(out_probs, n_grid) };
        out.copy_from_slice(&curve.probabilities);
        Ok(())
    })
}
