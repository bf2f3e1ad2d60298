//! Fixed CSV column contract for sweep records and revival events.

use num_complex::Complex64;
use qcorr_core::measures::{CorrelationRecord, DiscordMethod};
use qcorr_core::sweep::RevivalEvent;
use qcorr_core::xstate::XState;

pub const RECORD_HEADER: &str = "gt,n,r,p11,p22,p33,p44,re_c23,im_c23,concurrence,discord,classical_corr,mutual_info";
pub const EVENT_HEADER: &str = "kind,gt_start,gt_end,peak_value";

/// Trace/positivity tolerance when re-validating a parsed row. Twelve
/// significant digits per population can leave ~2e-12 of trace error.
const PARSE_TOL: f64 = 1e-10;

/// `%.12g`-style formatting: twelve significant digits, trailing zeros
/// trimmed, exponent form outside `[1e-5, 1e12)`.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One record row (no trailing newline).
pub fn format_record(rec: &CorrelationRecord, n: u32, r: f64) -> String {
    let s = &rec.state;
    let fields = [
        fmt_sig12(rec.gt),
        n.to_string(),
        fmt_sig12(r),
        fmt_sig12(s.p11()),
        fmt_sig12(s.p22()),
        fmt_sig12(s.p33()),
        fmt_sig12(s.p44()),
        fmt_sig12(s.c23().re),
        fmt_sig12(s.c23().im),
        fmt_sig12(rec.concurrence),
        fmt_sig12(rec.discord),
        fmt_sig12(rec.classical_correlation),
        fmt_sig12(rec.mutual_information),
    ];
    fields.join(",")
}

pub fn format_event(ev: &RevivalEvent) -> String {
    format!(
        "{},{},{},{}",
        ev.kind.as_str(),
        fmt_sig12(ev.gt_start),
        fmt_sig12(ev.gt_end),
        fmt_sig12(ev.peak_value)
    )
}

/// A parsed record row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub n: u32,
    pub r: f64,
    pub record: CorrelationRecord,
}

/// Parses one data row back into a record and re-checks its invariants.
pub fn parse_record(line: &str, method: DiscordMethod) -> Result<CsvRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 13 {
        return Err(format!("expected 13 columns, found {}", fields.len()));
    }
    let num = |i: usize| -> Result<f64, String> {
        let v: f64 = fields[i].parse().map_err(|e| format!("column {i}: {e}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("column {i} is not finite"))
        }
    };
    let n: u32 = fields[1].parse().map_err(|e| format!("column 1: {e}"))?;
    let state = XState::with_tolerance(
        num(3)?,
        num(4)?,
        num(5)?,
        num(6)?,
        Complex64::new(num(7)?, num(8)?),
        PARSE_TOL,
    )
    .map_err(|e| e.to_string())?;
    let record = CorrelationRecord {
        gt: num(0)?,
        state,
        concurrence: num(9)?,
        discord: num(10)?,
        classical_correlation: num(11)?,
        mutual_information: num(12)?,
        discord_method: method,
    };
    record.check()?;
    Ok(CsvRecord { n, r: num(2)?, record })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig12_examples() {
        assert_eq!(fmt_sig12(0.0), "0");
        assert_eq!(fmt_sig12(-0.0), "0");
        assert_eq!(fmt_sig12(1.0), "1");
        assert_eq!(fmt_sig12(0.25), "0.25");
        assert_eq!(fmt_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_sig12(50.0), "50");
        assert_eq!(fmt_sig12(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig12(-2.0e-17), "-2e-17");
        assert_eq!(fmt_sig12(0.0001234), "0.0001234");
    }

    proptest! {
        #[test]
        fn sig12_keeps_twelve_digits(x in -1e3f64..1e3) {
            let parsed: f64 = fmt_sig12(x).parse().unwrap();
            prop_assert!((parsed - x).abs() <= 5e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn wrong_column_count_rejected() {
        assert!(parse_record("1,2,3", DiscordMethod::ClosedForm).is_err());
    }
}
