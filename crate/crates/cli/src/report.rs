//! Report documents. JSON keys come out in declaration order and every
//! float is rounded to 9 significant digits, so identical runs produce
//! byte-identical files.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use txunc_core::propagation::UncertaintyBudget;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

fn sig_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_f64(round_sig(*v)),
        None => s.serialize_none(),
    }
}

fn text_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn text_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_owned(), text_num)
}

#[derive(Debug, Serialize)]
pub struct BudgetRow {
    pub input: String,
    #[serde(serialize_with = "sig")]
    pub partial: f64,
    #[serde(serialize_with = "sig")]
    pub term: f64,
    #[serde(serialize_with = "sig")]
    pub share_percent: f64,
}

pub fn budget_rows(budget: &UncertaintyBudget) -> Vec<BudgetRow> {
    budget
        .contributions
        .iter()
        .map(|c| BudgetRow {
            input: c.input.clone(),
            partial: c.partial,
            term: c.term,
            share_percent: budget.share_percent(&c.input).unwrap_or(0.0),
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct McBlock {
    #[serde(serialize_with = "sig")]
    pub empirical_std: f64,
    #[serde(serialize_with = "sig_opt")]
    pub agreement_ratio: Option<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// The truncated half of a `--policy both` calibration.
#[derive(Debug, Serialize)]
pub struct TruncatedBlock {
    #[serde(serialize_with = "sig")]
    pub combined_unc: f64,
    #[serde(serialize_with = "sig_opt")]
    pub relative_unc: Option<f64>,
    pub budget: Vec<BudgetRow>,
}

#[derive(Debug, Serialize)]
pub struct BudgetReport {
    pub command: &'static str,
    #[serde(serialize_with = "sig")]
    pub value: f64,
    #[serde(serialize_with = "sig")]
    pub combined_unc: f64,
    #[serde(serialize_with = "sig_opt")]
    pub relative_unc: Option<f64>,
    pub budget: Vec<BudgetRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<TruncatedBlock>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig_opt")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<McBlock>,
    pub flags: Vec<String>,
}

impl BudgetReport {
    pub fn new(command: &'static str, budget: &UncertaintyBudget) -> Self {
        Self {
            command,
            value: budget.value,
            combined_unc: budget.combined,
            relative_unc: budget.relative(),
            budget: budget_rows(budget),
            policy: None,
            truncated: None,
            gap: None,
            mc: None,
            flags: Vec::new(),
        }
    }
}

fn budget_table(out: &mut String, rows: &[BudgetRow]) {
    let width = rows.iter().map(|r| r.input.len()).max().unwrap_or(5).max(5);
    let _ = writeln!(
        out,
        "  {:<width$}  {:>16}  {:>16}  {:>10}",
        "input", "partial", "term", "share %"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "  {:<width$}  {:>16}  {:>16}  {:>10}",
            r.input,
            text_num(r.partial),
            text_num(r.term),
            format!("{:.2}", r.share_percent)
        );
    }
}

fn flags_text(out: &mut String, flags: &[String]) {
    for f in flags {
        let _ = writeln!(out, "flag: {f}");
    }
}

impl BudgetReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(p) = self.policy {
            let _ = writeln!(out, "policy: {p}");
        }
        let _ = writeln!(out, "value: {}", text_num(self.value));
        let _ = writeln!(out, "combined uncertainty: {}", text_num(self.combined_unc));
        let _ = writeln!(out, "relative uncertainty: {}", text_opt(self.relative_unc));
        budget_table(&mut out, &self.budget);
        if let Some(t) = &self.truncated {
            let _ = writeln!(
                out,
                "truncated combined uncertainty: {}",
                text_num(t.combined_unc)
            );
            let _ = writeln!(
                out,
                "truncated relative uncertainty: {}",
                text_opt(t.relative_unc)
            );
            budget_table(&mut out, &t.budget);
        }
        if let Some(gap) = self.gap {
            let _ = writeln!(out, "budget gap (complete - truncated): {}", text_num(gap));
        }
        if let Some(mc) = &self.mc {
            let _ = writeln!(
                out,
                "monte carlo: empirical std {} agreement ratio {} ({} samples, seed {})",
                text_num(mc.empirical_std),
                text_opt(mc.agreement_ratio),
                mc.samples,
                mc.seed
            );
        }
        flags_text(&mut out, &self.flags);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SequenceEntry {
    pub sequence: String,
    pub frequency: String,
    #[serde(serialize_with = "sig")]
    pub value: f64,
    #[serde(serialize_with = "sig")]
    pub delta_f: f64,
    pub degenerate: bool,
}

#[derive(Debug, Serialize)]
pub struct SimulationBlock {
    pub flips: u64,
    pub seed: u64,
    pub heads: u64,
    #[serde(serialize_with = "sig")]
    pub f: f64,
    #[serde(serialize_with = "sig")]
    pub delta_f: f64,
    pub degenerate: bool,
}

#[derive(Debug, Serialize)]
pub struct CoverageBlock {
    pub batches: u64,
    pub flips: u64,
    #[serde(serialize_with = "sig")]
    pub k: f64,
    #[serde(serialize_with = "sig")]
    pub fraction: f64,
}

#[derive(Debug, Serialize)]
pub struct CoinReport {
    pub command: &'static str,
    pub n: u32,
    pub sequences: Vec<SequenceEntry>,
    pub simulation: SimulationBlock,
    pub coverage: CoverageBlock,
    pub flags: Vec<String>,
}

impl CoinReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(
            out,
            "{:<w$}  {:>9}  {:>12}",
            "sequence",
            "f(H)",
            "delta_f",
            w = (self.n as usize).max(8)
        );
        for s in &self.sequences {
            let _ = writeln!(
                out,
                "{:<w$}  {:>9}  {:>12}{}",
                s.sequence,
                s.frequency,
                text_num(s.delta_f),
                if s.degenerate { "  (degenerate)" } else { "" },
                w = (self.n as usize).max(8)
            );
        }
        let sim = &self.simulation;
        let _ = writeln!(
            out,
            "simulated: {} heads in {} flips (seed {}): f = {} ± {}",
            sim.heads,
            sim.flips,
            sim.seed,
            text_num(sim.f),
            text_num(sim.delta_f)
        );
        let c = &self.coverage;
        let _ = writeln!(
            out,
            "coverage: f ± {}·delta_f contains 0.5 in {} of {} batches of {} flips",
            text_num(c.k),
            text_num(c.fraction),
            c.batches,
            c.flips
        );
        flags_text(&mut out, &self.flags);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct ReplicatesReport {
    pub command: &'static str,
    pub n: usize,
    #[serde(serialize_with = "sig")]
    pub mean: f64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig_opt")]
    pub bias: Option<f64>,
    #[serde(serialize_with = "sig")]
    pub dispersion: f64,
    pub flags: Vec<String>,
}

impl ReplicatesReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "replicates: {}", self.n);
        let _ = writeln!(out, "mean: {}", text_num(self.mean));
        if let Some(b) = self.bias {
            let _ = writeln!(out, "bias (accuracy): {}", text_num(b));
        }
        let _ = writeln!(
            out,
            "dispersion (precision, n-1): {}",
            text_num(self.dispersion)
        );
        flags_text(&mut out, &self.flags);
        out
    }
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Report {
    Budget(BudgetReport),
    Coin(CoinReport),
    Replicates(ReplicatesReport),
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        match self {
            Report::Budget(r) => r.to_text(),
            Report::Coin(r) => r.to_text(),
            Report::Replicates(r) => r.to_text(),
        }
    }
}
