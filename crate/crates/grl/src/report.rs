//! Human and structured renderings of integration and suite reports.

use std::fmt::Write as _;
use std::io;

use grl_core::grl::Survival;
use grl_core::partition::{EnvelopeTrace, Verdict};
use grl_core::rational::format_q;
use grl_core::suite::{Instance, SuiteReport};
use grl_core::{GrlReport, Magnitude, PropertyFlags};
use serde::Serialize;

use crate::format::{CapacityFile, NuFile, Rational};

/// `"p/q"`, `"inf"`, or a decimal whose error bound is reported separately.
pub fn magnitude_text(m: &Magnitude) -> String {
    match m {
        Magnitude::Exact(v) => format_q(v),
        Magnitude::Approx { value, .. } => format!("{value}"),
        Magnitude::Infinite => "inf".into(),
    }
}

fn error_text(m: &Magnitude) -> Option<String> {
    match m {
        Magnitude::Approx { error, .. } => Some(format!("{error:e}")),
        _ => None,
    }
}

/// Envelope bounds carry their error inline.
fn bound_text(m: &Magnitude) -> String {
    match m {
        Magnitude::Approx { value, error } => format!("{value} +/- {error:e}"),
        _ => magnitude_text(m),
    }
}

#[derive(Debug, Serialize)]
pub struct ReportFile {
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<String>,
    pub exists: bool,
    pub integrable: bool,
    pub method: &'static str,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Serialize)]
pub struct Diagnostics {
    pub assume_nu_zero_at_origin: bool,
    pub nu_mass_at_origin: String,
    /// Where the sums run off to when the integral does not exist.
    pub divergent_value: Option<String>,
    pub survival: String,
    pub envelope: Option<EnvelopeFile>,
}

#[derive(Debug, Serialize)]
pub struct EnvelopeFile {
    pub verdict: String,
    pub levels: Vec<LevelFile>,
}

#[derive(Debug, Serialize)]
pub struct LevelFile {
    pub depth: u32,
    pub lower: String,
    pub upper: String,
}

fn envelope_file(trace: &EnvelopeTrace) -> EnvelopeFile {
    EnvelopeFile {
        verdict: verdict_text(&trace.verdict),
        levels: trace
            .levels
            .iter()
            .map(|l| LevelFile { depth: l.depth, lower: bound_text(&l.lower), upper: bound_text(&l.upper) })
            .collect(),
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Converged(m) => format!("converged({})", bound_text(m)),
        Verdict::Diverged => "diverged".into(),
        Verdict::Inconclusive => "inconclusive".into(),
    }
}

fn survival_text(s: &Survival) -> String {
    match s {
        Survival::Step(u) => u.to_string(),
        Survival::Power(u) => u.to_string(),
    }
}

impl ReportFile {
    pub fn of(report: &GrlReport) -> Self {
        ReportFile {
            value: report.value.as_ref().map(magnitude_text),
            error_bound: report.value.as_ref().and_then(error_text),
            exists: report.rl.exists,
            integrable: report.integrable,
            method: report.rl.method.name(),
            diagnostics: Diagnostics {
                assume_nu_zero_at_origin: report.assume_nu_zero_at_origin,
                nu_mass_at_origin: bound_text(&report.nu_mass_at_origin),
                divergent_value: report.rl.divergent_value.as_ref().map(bound_text),
                survival: survival_text(&report.survival),
                envelope: report.rl.trace.as_ref().map(envelope_file),
            },
        }
    }
}

pub fn report_json(report: &GrlReport) -> String {
    serde_json::to_string_pretty(&ReportFile::of(report)).expect("reports always serialize")
}

pub fn report_human(report: &GrlReport) -> String {
    let mut out = String::new();
    let value = match &report.value {
        Some(v) => bound_text(v),
        None => "does not exist".into(),
    };
    writeln!(out, "value:       {value}").unwrap();
    writeln!(out, "integrable:  {}", report.integrable).unwrap();
    writeln!(out, "method:      {}", report.rl.method.name()).unwrap();
    if let Some(d) = &report.rl.divergent_value {
        writeln!(out, "sums tend to {}", bound_text(d)).unwrap();
    }
    writeln!(out, "survival:    {}", survival_text(&report.survival)).unwrap();
    writeln!(
        out,
        "nu({{0}}):     {} ({})",
        bound_text(&report.nu_mass_at_origin),
        if report.assume_nu_zero_at_origin { "assumed zero" } else { "no assumption" }
    )
    .unwrap();
    if let Some(trace) = &report.rl.trace {
        write!(out, "envelope:    {} after {} levels", verdict_text(&trace.verdict), trace.levels.len()).unwrap();
        if let Some(last) = trace.levels.last() {
            write!(out, ", last [{}, {}]", bound_text(&last.lower), bound_text(&last.upper)).unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct FlagsFile {
    pub monotone: bool,
    pub fuzzy: bool,
    pub submodular: bool,
    pub additive: bool,
    pub subadditive: bool,
    pub superadditive: bool,
}

impl From<PropertyFlags> for FlagsFile {
    fn from(f: PropertyFlags) -> Self {
        FlagsFile {
            monotone: f.monotone,
            fuzzy: f.fuzzy,
            submodular: f.submodular,
            additive: f.additive,
            subadditive: f.subadditive,
            superadditive: f.superadditive,
        }
    }
}

pub fn flags_human(flags: &PropertyFlags) -> String {
    let rows = [
        ("monotone", flags.monotone),
        ("fuzzy", flags.fuzzy),
        ("submodular", flags.submodular),
        ("additive", flags.additive),
        ("subadditive", flags.subadditive),
        ("superadditive", flags.superadditive),
    ];
    rows.iter().map(|(name, v)| format!("{name:<14}{}\n", if *v { "yes" } else { "no" })).collect()
}

#[derive(Debug, Serialize)]
pub struct InstanceFile {
    pub mu: CapacityFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<CapacityFile>,
    pub nu: NuFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu2: Option<NuFile>,
    pub f: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Rational>>,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales: Option<(Rational, Rational)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_set: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct PhiFile {
    pub map: Vec<usize>,
    pub target_size: usize,
}

fn rationals(v: &[grl_core::Q]) -> Vec<Rational> {
    v.iter().map(|x| Rational(x.clone())).collect()
}

impl InstanceFile {
    pub fn of(inst: &Instance) -> Self {
        InstanceFile {
            mu: CapacityFile::of(&inst.mu),
            mu2: inst.mu2.as_ref().map(CapacityFile::of),
            nu: NuFile::of(&inst.nu),
            nu2: inst.nu2.as_ref().map(NuFile::of),
            f: rationals(&inst.f),
            g: inst.g.as_deref().map(rationals),
            a: inst.a.indices().collect(),
            b: inst.b.map(|b| b.indices().collect()),
            scales: inst.scales.as_ref().map(|(a, b)| (Rational(a.clone()), Rational(b.clone()))),
            phi: inst.phi.as_ref().map(|(map, t)| PhiFile { map: map.clone(), target_size: t.size() }),
            null_set: inst.null_set.map(|z| z.indices().collect()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessFile {
    pub seed: u64,
    pub instance: InstanceFile,
}

#[derive(Debug, Serialize)]
pub struct TheoremFile {
    pub id: String,
    pub statement: &'static str,
    pub instances: usize,
    pub skipped: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<WitnessFile>,
}

#[derive(Debug, Serialize)]
pub struct ControlFile {
    pub id: String,
    pub instances: usize,
    pub violations: usize,
    pub fired: bool,
    pub counterexample: Option<WitnessFile>,
}

#[derive(Debug, Serialize)]
pub struct SuiteFile {
    pub seed: u64,
    pub instances_per_theorem: usize,
    pub passed: bool,
    pub failed: usize,
    pub theorems: Vec<TheoremFile>,
    pub controls: Vec<ControlFile>,
    /// The only field that differs between runs with equal flags.
    pub wall_clock_ms: Option<u128>,
}

impl SuiteFile {
    pub fn of(report: &SuiteReport, seed: u64, instances_per_theorem: usize) -> Self {
        SuiteFile {
            seed,
            instances_per_theorem,
            passed: report.passed(),
            failed: report.failed(),
            theorems: report
                .counts
                .iter()
                .map(|c| TheoremFile {
                    id: c.theorem.to_string(),
                    statement: c.theorem.statement(),
                    instances: c.instances,
                    skipped: c.skipped,
                    passed: c.passed,
                    failed: c.failed,
                    failures: c
                        .failures
                        .iter()
                        .filter_map(|o| {
                            o.witness.as_ref().map(|w| WitnessFile { seed: o.seed, instance: InstanceFile::of(w) })
                        })
                        .collect(),
                })
                .collect(),
            controls: report
                .controls
                .iter()
                .map(|c| ControlFile {
                    id: c.theorem.to_string(),
                    instances: c.instances,
                    violations: c.violations,
                    fired: c.fired(),
                    counterexample: c
                        .first_violation
                        .as_ref()
                        .map(|(seed, inst)| WitnessFile { seed: *seed, instance: InstanceFile::of(inst) }),
                })
                .collect(),
            wall_clock_ms: report.wall_clock_ms,
        }
    }
}

pub fn suite_json(report: &SuiteReport, seed: u64, instances_per_theorem: usize) -> String {
    serde_json::to_string_pretty(&SuiteFile::of(report, seed, instances_per_theorem)).expect("reports always serialize")
}

pub fn suite_human(report: &SuiteReport) -> String {
    let mut out = String::new();
    writeln!(out, "{:<5}{:>10}{:>9}{:>8}{:>8}  statement", "id", "instances", "skipped", "passed", "failed").unwrap();
    for c in &report.counts {
        writeln!(
            out,
            "{:<5}{:>10}{:>9}{:>8}{:>8}  {}",
            c.theorem.to_string(),
            c.instances,
            c.skipped,
            c.passed,
            c.failed,
            c.theorem.statement()
        )
        .unwrap();
    }
    for c in &report.controls {
        writeln!(
            out,
            "control {}: {} violations in {} instances ({})",
            c.theorem,
            c.violations,
            c.instances,
            if c.fired() { "fired" } else { "DID NOT FIRE" }
        )
        .unwrap();
    }
    for c in &report.counts {
        for o in &c.failures {
            if let Some(w) = &o.witness {
                writeln!(out, "\n{} failed for seed {}:\n{w}", c.theorem, o.seed).unwrap();
            }
        }
    }
    if let Some(ms) = report.wall_clock_ms {
        writeln!(out, "wall clock: {ms} ms").unwrap();
    }
    writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" }).unwrap();
    out
}

/// One row per theorem: `id,instances,skipped,passed,failed`.
pub fn write_suite_csv<W: io::Write>(report: &SuiteReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "instances", "skipped", "passed", "failed"])?;
    for c in &report.counts {
        w.write_record([
            c.theorem.to_string(),
            c.instances.to_string(),
            c.skipped.to_string(),
            c.passed.to_string(),
            c.failed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
