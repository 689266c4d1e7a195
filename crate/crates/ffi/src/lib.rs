//! C ABI over `nlocal`.
//!
//! States and networks are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`NlStatus`]; on failure the
//! message is available from [`nl_last_error`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! released with [`nl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nlocal::entanglement::concurrence;
use nlocal::harness::{run_campaign, CampaignConfig, Claim, Ensemble};
use nlocal::measures::VmaxMode;
use nlocal::network::{analyze_with, b_value, AnalysisOptions, NetworkSpec, Topology};
use nlocal::optimizer::{maximize, OptimizerConfig};
use nlocal::qstate::{make_state, RandomKind, StateFamily, TwoQubitState};
use nlocal::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotPhysical = 5,
    WrongTopology = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlTopology {
    Linear = 0,
    Star = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlVmaxMode {
    Printed = 0,
    Exact = 1,
}

/// Opaque two-qubit state.
pub struct NlState(TwoQubitState);

/// Opaque network.
pub struct NlNetwork(NetworkSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> NlStatus {
    match err {
        Error::Parse(_) => NlStatus::Parse,
        Error::NotPhysical(_) | Error::InvalidParameter { .. } => NlStatus::NotPhysical,
        Error::WrongTopology { .. } => NlStatus::WrongTopology,
        Error::Source { source, .. } => status_of(source),
        _ => NlStatus::InvalidArgument,
    }
}

struct Failure(NlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NlStatus::NullPointer, format!("`{what}` is NULL"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            NlStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(NlStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NULs").into_raw()
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn nl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a state from a JSON source descriptor, e.g.
/// `{"family":"werner","v":0.8}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_state_from_json(json: *const c_char, out: *mut *mut NlState) -> NlStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let family: StateFamily = serde_json::from_str(text).map_err(Error::from)?;
        let state = make_state(&family)?;
        write_out(out, Box::into_raw(Box::new(NlState(state))), "out")
    })
}

/// Builds a state from row-major real and imaginary parts (16 doubles each;
/// `im` may be NULL for a real matrix).
///
/// # Safety
/// `re` must point to 16 doubles, `im` to 16 doubles or NULL.
#[no_mangle]
pub unsafe extern "C" fn nl_state_from_matrix(re: *const f64, im: *const f64, out: *mut *mut NlState) -> NlStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let grid = |p: *const f64| {
            let mut m = [[0.0; 4]; 4];
            if !p.is_null() {
                let flat = std::slice::from_raw_parts(p, 16);
                for (k, &x) in flat.iter().enumerate() {
                    m[k / 4][k % 4] = x;
                }
            }
            m
        };
        let state = TwoQubitState::from_parts(&grid(re), &grid(im))?;
        write_out(out, Box::into_raw(Box::new(NlState(state))), "out")
    })
}

/// # Safety
/// `state` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nl_state_free(state: *mut NlState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_state_concurrence(state: *const NlState, out: *mut f64) -> NlStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        write_out(out, concurrence(&state.0).value(), "out")
    })
}

/// Writes the correlation-tensor singular values `e1 ≥ e2 ≥ e3`.
///
/// # Safety
/// `state` must be a live handle; `out` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn nl_state_singular_values(state: *const NlState, out: *mut f64) -> NlStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let values = state.0.singular_triple().as_array();
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&values);
        Ok(())
    })
}

/// Builds a network from a JSON descriptor
/// `{"topology":"linear"|"star","sources":[...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_network_from_json(json: *const c_char, out: *mut *mut NlNetwork) -> NlStatus {
    guard(|| {
        let net = NetworkSpec::from_json(read_str(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(NlNetwork(net))), "out")
    })
}

/// Builds a network from `n` state handles, which are copied.
///
/// # Safety
/// `states` must point to `n` live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_network_new(
    topology: NlTopology,
    states: *const *const NlState,
    n: usize,
    out: *mut *mut NlNetwork,
) -> NlStatus {
    guard(|| {
        if states.is_null() {
            return Err(null("states"));
        }
        let sources = std::slice::from_raw_parts(states, n)
            .iter()
            .enumerate()
            .map(|(i, &p)| p.as_ref().map(|s| s.0.clone()).ok_or_else(|| null(&format!("states[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let topology = match topology {
            NlTopology::Linear => Topology::Linear,
            NlTopology::Star => Topology::Star,
        };
        let net = NetworkSpec::new(topology, sources)?;
        write_out(out, Box::into_raw(Box::new(NlNetwork(net))), "out")
    })
}

/// # Safety
/// `network` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nl_network_free(network: *mut NlNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Closed-form maximal violation `B` for the network's topology.
///
/// # Safety
/// `network` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_network_b_value(network: *const NlNetwork, out: *mut f64) -> NlStatus {
    guard(|| {
        let net = network.as_ref().ok_or_else(|| null("network"))?;
        write_out(out, b_value(&net.0), "out")
    })
}

/// Full bound report as JSON.
///
/// # Safety
/// `network` must be a live handle; `out_json` must be writable. Free the
/// result with `nl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn nl_network_analyze(
    network: *const NlNetwork,
    vmax_mode: NlVmaxMode,
    out_json: *mut *mut c_char,
) -> NlStatus {
    guard(|| {
        let net = network.as_ref().ok_or_else(|| null("network"))?;
        let vmax_mode = match vmax_mode {
            NlVmaxMode::Printed => VmaxMode::Printed,
            NlVmaxMode::Exact => VmaxMode::Exact,
        };
        let report = analyze_with(&net.0, &AnalysisOptions { vmax_mode });
        let json = serde_json::to_string(&report).map_err(Error::from)?;
        write_out(out_json, into_c_string(json), "out_json")
    })
}

/// Numerical maximum of the inequality over settings (`starts` multi-start
/// runs, deterministic in `seed`).
///
/// # Safety
/// `network` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_network_optimize(
    network: *const NlNetwork,
    seed: u64,
    starts: u32,
    out_value: *mut f64,
) -> NlStatus {
    guard(|| {
        let net = network.as_ref().ok_or_else(|| null("network"))?;
        let config = OptimizerConfig {
            starts: starts.max(1) as usize,
            ..OptimizerConfig::default()
        };
        let result = maximize(&net.0, &config, seed)?;
        write_out(out_value, result.value, "out_value")
    })
}

/// Runs a seeded campaign. `claim` is a claim id such as `"conj1"`;
/// `ensemble` a random ensemble name such as `"mixed-ginibre"`. Writes the
/// JSON report and the number of violations.
///
/// # Safety
/// String arguments must be NUL-terminated; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_run_campaign(
    claim: *const c_char,
    n: usize,
    trials: usize,
    ensemble: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
    out_violations: *mut usize,
) -> NlStatus {
    guard(|| {
        let claim = Claim::from_id(read_str(claim, "claim")?)?;
        let name = read_str(ensemble, "ensemble")?;
        let kind: RandomKind = serde_json::from_value(serde_json::Value::String(name.to_string()))
            .map_err(|_| Failure(NlStatus::InvalidArgument, format!("unknown ensemble `{name}`")))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let report = run_campaign(&CampaignConfig::new(claim, n, trials, Ensemble::random(kind), seed))?;
        write_out(out_violations, report.violations.len(), "out_violations")?;
        let json = serde_json::to_string(&report).map_err(Error::from)?;
        write_out(out_json, into_c_string(json), "out_json")
    })
}
