//! Result rows and their CSV form.

use std::io::Write;

use bilinear_torsion::C64;
use serde_json::json;

/// One CSV row: `experiment, params, value_re, value_im, tolerance, pass`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub params: Vec<(String, String)>,
    pub value: C64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Row {
    pub fn new(experiment: &str, value: C64) -> Self {
        Row { experiment: experiment.into(), params: Vec::new(), value, tolerance: None, pass: true }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn checked(mut self, tolerance: f64, pass: bool) -> Self {
        self.tolerance = Some(tolerance);
        self.pass = pass;
        self
    }

    fn params_field(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

/// `a + bi` with shortest round-trip formatting.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", z.re, z.im.abs())
}

/// JSON array of rows, complex values as `[re, im]`.
pub fn write_json<W: Write>(mut out: W, rows: &[Row]) -> std::io::Result<()> {
    let doc: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "experiment": r.experiment,
                "params": r.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
                "value": [r.value.re, r.value.im],
                "tolerance": r.tolerance,
                "pass": r.pass,
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["experiment", "params", "value_re", "value_im", "tolerance", "pass"])?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.params_field(),
            r.value.re.to_string(),
            r.value.im.to_string(),
            r.tolerance.map(|t| t.to_string()).unwrap_or_default(),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
