//! CSV output with fixed schemas: 9 significant digits, `.` decimal point,
//! LF line endings, written atomically.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::config::ms_to_kmh;
use crate::eigen::Mode;
use crate::error::{Error, Result};
use crate::response::{EnvelopeResult, ResponseHistory};
use crate::studies::{SpanPoint, SweepPoint};

pub const MODES_HEADER: &str = "mode,freq_hz,beta,lambda,Mf,Mt";
pub const HISTORY_HEADER: &str = "t,u,udot2,theta";
pub const ENVELOPE_HEADER: &str = "v_kmh,max_u_m,max_a_ms2";
pub const SWEEP_HEADER: &str = "param_value,f1_hz,max_u_m,max_a_ms2";
pub const SWEEP_DAF_HEADER: &str = "param_value,f1_hz,max_u_m,max_a_ms2,daf";

/// Formats like C's `%.9g`.
pub fn fmt_g9(v: f64) -> String {
    const P: i32 = 9;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn push_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

pub fn modes_csv(modes: &[Mode]) -> String {
    let mut out = format!("{MODES_HEADER}\n");
    for m in modes {
        push_row(
            &mut out,
            &[
                m.index.to_string(),
                fmt_g9(m.frequency_hz()),
                fmt_g9(m.beta),
                m.lambda.map(fmt_g9).unwrap_or_default(),
                fmt_g9(m.modal_mass_flex),
                fmt_g9(m.modal_mass_tors),
            ],
        );
    }
    out
}

/// The `theta` column is empty when the history has no twist.
pub fn history_csv(h: &ResponseHistory) -> String {
    let mut out = String::with_capacity(48 * h.times.len());
    out.push_str(HISTORY_HEADER);
    out.push('\n');
    for i in 0..h.times.len() {
        let theta = h.theta.as_ref().map(|t| fmt_g9(t[i])).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_g9(h.times[i]),
            fmt_g9(h.u[i]),
            fmt_g9(h.u_ddot[i]),
            theta
        );
    }
    out
}

pub fn envelope_csv(e: &EnvelopeResult) -> String {
    let mut out = format!("{ENVELOPE_HEADER}\n");
    for i in 0..e.len() {
        push_row(
            &mut out,
            &[
                fmt_g9(ms_to_kmh(e.speeds[i])),
                fmt_g9(e.max_abs_u[i]),
                fmt_g9(e.max_abs_u_ddot[i]),
            ],
        );
    }
    out
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for p in points {
        push_row(
            &mut out,
            &[
                fmt_g9(p.value),
                fmt_g9(p.f1_hz),
                fmt_g9(p.max_u),
                fmt_g9(p.max_a),
            ],
        );
    }
    out
}

/// Span study rows at the second resonance peak, with the DAF column.
pub fn span_csv(points: &[SpanPoint]) -> String {
    let mut out = format!("{SWEEP_DAF_HEADER}\n");
    for p in points {
        push_row(
            &mut out,
            &[
                fmt_g9(p.span),
                fmt_g9(p.f1_hz),
                fmt_g9(p.max_u),
                fmt_g9(p.max_a),
                fmt_g9(p.daf),
            ],
        );
    }
    out
}

/// Writes `contents` to a temporary file beside `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| {
        io_err(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "no file name",
        ))
    })?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}
