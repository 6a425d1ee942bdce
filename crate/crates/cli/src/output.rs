//! Deterministic text emission: fixed 12-significant-digit floats, `\n`
//! line endings, stable column and key order, so identical configurations
//! produce byte-identical files.

use qteleport::{Error, Result};

use crate::config::OutputSet;
use crate::sweep::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown format '{other}' (choose csv or json)"
            ))),
        }
    }
}

/// Shortest decimal (printf %g style) rendering at 12 significant digits.
/// Infinities print as `inf`/`-inf` for the threshold output.
pub fn format_significant(x: f64) -> String {
    const SIG: usize = 12;
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIG - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= SIG as i32 || exp < -4 {
        let trimmed = digits.trim_end_matches('0');
        out.push_str(&trimmed[..1]);
        if trimmed.len() > 1 {
            out.push('.');
            out.push_str(&trimmed[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    } else if exp >= 0 {
        let head = exp as usize + 1;
        out.push_str(&digits[..head]);
        let frac = digits[head..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(format_significant).unwrap_or_default()
}

fn opt_json(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format_significant(x),
        Some(x) => format!("\"{}\"", format_significant(x)),
        None => "null".to_string(),
    }
}

fn json_number(x: f64) -> String {
    opt_json(Some(x))
}

/// Column labels in emission order, `avg_fidelity` expanding to its
/// quadrature and closed-form pair.
fn selected_columns(outputs: &OutputSet) -> Vec<&'static str> {
    let mut cols = vec!["kappa_t"];
    if outputs.avg_fidelity {
        cols.push("avg_fidelity_quadrature");
        cols.push("avg_fidelity_closed");
    }
    if outputs.concurrence {
        cols.push("concurrence");
    }
    if outputs.eof {
        cols.push("eof");
    }
    if outputs.groverian {
        cols.push("groverian");
    }
    if outputs.ppt {
        cols.push("ppt_min_eig");
    }
    cols
}

fn row_value(row: &SweepRow, column: &str) -> Option<f64> {
    match column {
        "kappa_t" => Some(row.kappa_t),
        "avg_fidelity_quadrature" => row.avg_fidelity_quadrature,
        "avg_fidelity_closed" => row.avg_fidelity_closed,
        "concurrence" => row.concurrence,
        "eof" => row.eof,
        "groverian" => row.groverian,
        "ppt_min_eig" => row.ppt_min_eig,
        _ => unreachable!("column names are fixed"),
    }
}

pub fn sweep_csv(rows: &[SweepRow], outputs: &OutputSet) -> String {
    let cols = selected_columns(outputs);
    let mut text = cols.join(",");
    text.push('\n');
    for row in rows {
        let fields: Vec<String> = cols.iter().map(|c| opt(row_value(row, c))).collect();
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    text
}

pub fn sweep_json(rows: &[SweepRow], outputs: &OutputSet) -> String {
    let cols = selected_columns(outputs);
    let mut text = String::from("[\n");
    let body: Vec<String> = rows
        .iter()
        .map(|row| {
            let fields: Vec<String> = cols
                .iter()
                .map(|c| format!("\"{c}\":{}", opt_json(row_value(row, c))))
                .collect();
            format!("{{{}}}", fields.join(","))
        })
        .collect();
    text.push_str(&body.join(",\n"));
    text.push_str("\n]\n");
    text
}

/// One-record output for the scalar commands: a header/value CSV pair or a
/// single JSON object. Values are (name, rendered CSV field, rendered JSON
/// value) triples prepared by the caller.
pub struct Record {
    fields: Vec<(&'static str, String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self { fields: Vec::new() }
    }

    pub fn text(mut self, name: &'static str, value: &str) -> Self {
        self.fields.push((name, value.to_string(), format!("\"{value}\"")));
        self
    }

    pub fn number(mut self, name: &'static str, value: f64) -> Self {
        self.fields.push((name, format_significant(value), json_number(value)));
        self
    }

    pub fn optional(mut self, name: &'static str, value: Option<f64>) -> Self {
        self.fields.push((name, opt(value), opt_json(value)));
        self
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let header: Vec<&str> = self.fields.iter().map(|(n, _, _)| *n).collect();
                let values: Vec<&str> =
                    self.fields.iter().map(|(_, v, _)| v.as_str()).collect();
                format!("{}\n{}\n", header.join(","), values.join(","))
            }
            OutputFormat::Json => {
                let body: Vec<String> = self
                    .fields
                    .iter()
                    .map(|(n, _, j)| format!("\"{n}\":{j}"))
                    .collect();
                format!("{{{}}}\n", body.join(","))
            }
        }
    }
}

impl Default for Record {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(-0.0), "0");
        assert_eq!(format_significant(1.0), "1");
        assert_eq!(format_significant(-2.5), "-2.5");
        assert_eq!(format_significant(0.01), "0.01");
        assert_eq!(format_significant(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_significant(0.7892931470571474), "0.789293147057");
        assert_eq!(format_significant(1e-5), "1e-5");
        assert_eq!(format_significant(-3.25e-7), "-3.25e-7");
        assert_eq!(format_significant(1.23456789012345e14), "1.23456789012e14");
        assert_eq!(format_significant(123.0), "123");
        assert_eq!(format_significant(0.9999999999999), "1");
        assert_eq!(format_significant(f64::INFINITY), "inf");
        assert_eq!(format_significant(f64::NEG_INFINITY), "-inf");
        // grid values of the default sweep render cleanly
        assert_eq!(format_significant(7.0 * 0.01), "0.07");
        assert_eq!(format_significant(29.0 * 0.01), "0.29");
        assert_eq!(format_significant(100.0 * 0.01), "1");
    }

    #[test]
    fn record_rendering() {
        let rec = Record::new()
            .text("noise", "xz")
            .number("kappa_t", 0.25)
            .optional("pmax", None);
        assert_eq!(rec.render(OutputFormat::Csv), "noise,kappa_t,pmax\nxz,0.25,\n");
        assert_eq!(
            rec.render(OutputFormat::Json),
            "{\"noise\":\"xz\",\"kappa_t\":0.25,\"pmax\":null}\n"
        );
        let inf = Record::new().number("classical_threshold_kt", f64::INFINITY);
        assert_eq!(inf.render(OutputFormat::Csv), "classical_threshold_kt\ninf\n");
        assert_eq!(
            inf.render(OutputFormat::Json),
            "{\"classical_threshold_kt\":\"inf\"}\n"
        );
    }
}
