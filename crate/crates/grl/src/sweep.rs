//! Integrate a scenario template over a grid of parameter values.
//!
//! A template is a scenario file in which `{{name}}` placeholders stand for
//! parameters; every combination of grid values is substituted, parsed and
//! integrated in turn.

use std::io;

use grl_core::grl::{grl_integrate_with, GrlOptions};

use crate::format::parse_scenario;
use crate::report::magnitude_text;
use crate::InputError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

impl std::str::FromStr for Axis {
    type Err = String;

    /// `name=v1,v2,...`
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, values) = s.split_once('=').ok_or_else(|| format!("expected name=v1,v2,... in {s:?}"))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("bad parameter name {name:?}"));
        }
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            return Err(format!("parameter {name} has no values"));
        }
        Ok(Axis { name: name.to_string(), values })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub parameters: Vec<String>,
    pub value: Option<String>,
    pub error_bound: Option<String>,
    pub exists: bool,
    pub integrable: bool,
    pub method: &'static str,
}

/// Every combination of axis values, first axis slowest.
pub fn combinations(axes: &[Axis]) -> Vec<Vec<String>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut row = prefix.clone();
                    row.push(v.clone());
                    row
                })
            })
            .collect()
    })
}

pub fn substitute(template: &str, axes: &[Axis], values: &[String]) -> String {
    axes.iter().zip(values).fold(template.to_string(), |text, (axis, v)| text.replace(&format!("{{{{{}}}}}", axis.name), v))
}

pub fn sweep(template: &str, source: &str, axes: &[Axis], options: &GrlOptions) -> Result<Vec<SweepRow>, InputError> {
    let mut rows = Vec::new();
    for values in combinations(axes) {
        let text = substitute(template, axes, &values);
        let label = axes.iter().zip(&values).map(|(a, v)| format!("{}={v}", a.name)).collect::<Vec<_>>().join(" ");
        let scenario = parse_scenario(&text, &format!("{source} [{label}]"))?;
        let report = grl_integrate_with(&scenario, options);
        rows.push(SweepRow {
            parameters: values,
            value: report.value.as_ref().map(magnitude_text),
            error_bound: report.value.as_ref().filter(|v| v.error_bound() > 0.0).map(|v| format!("{:e}", v.error_bound())),
            exists: report.rl.exists,
            integrable: report.integrable,
            method: report.rl.method.name(),
        });
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: io::Write>(axes: &[Axis], rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    header.extend(["value", "error_bound", "exists", "integrable", "method"]);
    w.write_record(&header)?;
    for row in rows {
        let mut record = row.parameters.clone();
        record.push(row.value.clone().unwrap_or_default());
        record.push(row.error_bound.clone().unwrap_or_default());
        record.push(row.exists.to_string());
        record.push(row.integrable.to_string());
        record.push(row.method.to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
