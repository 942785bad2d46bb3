//! CSV of the factorization residual over the probability tetrahedron.

use std::io::Write;

use spooky_core::tables::{paraboloid_sample, ParaboloidPoint};

use crate::error::CliError;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const HEADER: [&str; 4] = ["p00", "p01", "p10", "residual"];

/// Formats like C's `%.{sig}g`: shortest of fixed and scientific notation,
/// trailing zeros removed. Negative zero prints as `0`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn figure_points(grid: usize) -> Result<Vec<ParaboloidPoint>, CliError> {
    Ok(paraboloid_sample(grid)?)
}

pub fn write_csv<W: Write>(points: &[ParaboloidPoint], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Output(e.into());
    w.write_record(HEADER).map_err(csv_err)?;
    for p in points {
        w.write_record(
            [p.p00, p.p01, p.p10, p.residual].map(|v| format_sig(v, SIGNIFICANT_DIGITS)),
        )
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_style_formatting() {
        assert_eq!(format_sig(0.25, 12), "0.25");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(-0.0625, 12), "-0.0625");
        assert_eq!(format_sig(1.5e-5, 12), "1.5e-05");
        assert_eq!(format_sig(0.0001, 12), "0.0001");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(99.5, 3), "99.5");
        assert_eq!(format_sig(999.96, 4), "1000");
    }

    #[test]
    fn csv_has_header_and_one_row_per_point() {
        let pts = figure_points(4).unwrap();
        let mut buf = Vec::new();
        write_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p00,p01,p10,residual"));
        assert_eq!(lines.count(), pts.len());
    }

    #[test]
    fn small_grid_is_rejected() {
        assert_eq!(figure_points(1).unwrap_err().exit_code(), 2);
    }
}
