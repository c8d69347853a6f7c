//! The report envelope, exit codes, and number formatting shared by all
//! commands.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::{json, Value};
use tetrablock::hyperbolic::{BlaschkeMap, HyperbolicDistance};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INVARIANT: i32 = 65;
pub const EXIT_VERIFICATION: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Invariant(_) => EXIT_INVARIANT,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Invariant(m) => write!(f, "invariant violated: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<tetrablock::Error> for CliError {
    fn from(e: tetrablock::Error) -> Self {
        Self::Invariant(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Value,
    pub schema_version: u32,
}

/// What a command hands back to `main`: the envelope, a plain-text rendering
/// and the exit code.
pub struct Outcome {
    pub envelope: Envelope,
    pub text: String,
    pub exit: i32,
}

impl Outcome {
    pub fn new(command: &str, inputs: Value, results: Value, diagnostics: Value, text: String) -> Self {
        Self {
            envelope: Envelope {
                command: command.into(),
                inputs,
                results,
                diagnostics,
                schema_version: SCHEMA_VERSION,
            },
            text,
            exit: 0,
        }
    }

    pub fn with_exit(mut self, exit: i32) -> Self {
        self.exit = exit;
        self
    }
}

pub fn raw(v: f64) -> Value {
    json!({ "raw": v })
}

pub fn distance(d: HyperbolicDistance) -> Value {
    json!({ "m_scale": d.m_scale, "p_scale": d.p_scale })
}

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complexes(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn blaschke(b: &BlaschkeMap) -> Value {
    match b.constant_offset() {
        Some(c) => json!({ "constant": complex(c) }),
        None => json!({
            "unimodular_factor": complex(b.unimodular_factor()),
            "zeros": complexes(b.zeros()),
            "scale": raw(b.scale()),
        }),
    }
}

/// `a+bi` with 17 significant digits per component.
pub fn complex_text(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", sig17(z.re), sign, sig17(z.im.abs()))
}

/// 17 significant digits: positional notation for moderate exponents,
/// scientific otherwise; never locale dependent.
pub fn sig17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        s
    } else {
        let s = format!("{v:.16e}");
        match s.split_once('e') {
            Some((mantissa, e)) if mantissa.contains('.') => {
                format!("{}e{e}", mantissa.trim_end_matches('0').trim_end_matches('.'))
            }
            _ => s,
        }
    }
}
