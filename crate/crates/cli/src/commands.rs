use std::path::{Path, PathBuf};

use clap::ValueEnum;
use txunc_core::coinflip::{self, enumerate_sequences, frequency_uncertainty, simulate_flips};
use txunc_core::montecarlo::{self, mc_propagate, McConfig};
use txunc_core::propagation::{propagate, Inputs};
use txunc_core::txrf::{
    budget_gap, calibrate_sensitivity, quantify_with, replicate_stats, BudgetPolicy,
    CalibrationInputs, SensitivityRecord, TxrfSample, QUANTIFY_MODEL,
};
use txunc_core::{Measurement, Model};

use crate::error::CliError;
use crate::input::{self, CalibrateFile, PropagateFile, QuantifyFile, ReplicatesFile, Source};
use crate::report::{
    budget_rows, BudgetReport, CoinReport, CoverageBlock, McBlock, ReplicatesReport, Report,
    SequenceEntry, SimulationBlock, TruncatedBlock,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Propagate,
    Quantify,
    Calibrate,
    McCheck,
    CoinDemo,
    Replicates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Complete,
    Truncated,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_COIN_FLIPS: u64 = 1_000_000;
pub const DEFAULT_COIN_N: u32 = 3;
pub const COVERAGE_BATCHES: u64 = 10_000;
pub const COVERAGE_FLIPS: u64 = 100;

const NORMAL_FLAG: &str = "normal-input-distributions";
const WALD_FLAG: &str = "wald-convention: delta_f = sqrt(f(1-f)/n)";

/// Everything a run needs, validated per command before any computation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub policy: Option<PolicyArg>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub format: Format,
    pub n: Option<u32>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let name = self
            .command
            .to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_owned();
        if self.command != Command::CoinDemo && self.input_path.is_none() {
            return Err(CliError::usage(format!("`{name}` requires --input")));
        }
        if self.command == Command::CoinDemo && self.input_path.is_some() {
            return Err(CliError::usage("`coin-demo` takes no --input"));
        }
        if self.policy.is_some() && !matches!(self.command, Command::Calibrate | Command::Quantify)
        {
            return Err(CliError::usage(format!(
                "--policy does not apply to `{name}`"
            )));
        }
        if self.n.is_some() && self.command != Command::CoinDemo {
            return Err(CliError::usage(format!("--n does not apply to `{name}`")));
        }
        if (self.seed.is_some() || self.samples.is_some())
            && matches!(
                self.command,
                Command::Propagate | Command::Calibrate | Command::Replicates
            )
        {
            return Err(CliError::usage(format!(
                "--seed/--samples do not apply to `{name}`"
            )));
        }
        if self.samples == Some(0) {
            return Err(CliError::usage("--samples must be at least 1"));
        }
        Ok(())
    }

    fn input(&self) -> &Path {
        self.input_path.as_deref().expect("validated")
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Propagate => run_propagate(cfg, false),
        Command::McCheck => run_propagate(cfg, true),
        Command::Quantify => run_quantify(cfg),
        Command::Calibrate => run_calibrate(cfg),
        Command::CoinDemo => run_coin_demo(cfg),
        Command::Replicates => run_replicates(cfg),
    }
}

fn mc_block(
    cfg: &RunConfig,
    src: &Source,
    model: &Model,
    inputs: &Inputs,
) -> Result<McBlock, CliError> {
    let samples = cfg.samples.unwrap_or(DEFAULT_MC_SAMPLES);
    let seed = cfg.seed.unwrap_or(montecarlo::DEFAULT_SEED);
    let mc_cfg =
        McConfig::new(samples, seed).map_err(|e| CliError::from_mc(e, src.at("inputs")))?;
    let r =
        mc_propagate(model, inputs, &mc_cfg).map_err(|e| CliError::from_mc(e, src.at("inputs")))?;
    Ok(McBlock {
        empirical_std: r.empirical_std,
        agreement_ratio: r.agreement_ratio,
        samples: r.sample_count,
        seed,
    })
}

fn run_propagate(cfg: &RunConfig, with_mc: bool) -> Result<Report, CliError> {
    let (file, src) = input::load::<PropagateFile>(cfg.input())?;
    let model = src.model("model", &file.model)?;
    let inputs = src.inputs("inputs", &file.inputs)?;
    let budget =
        propagate(&model, &inputs).map_err(|e| CliError::from_propagation(e, src.at("inputs")))?;
    let mut report = BudgetReport::new(if with_mc { "mc-check" } else { "propagate" }, &budget);
    if with_mc {
        report.mc = Some(mc_block(cfg, &src, &model, &inputs)?);
        report.flags.push(NORMAL_FLAG.into());
    }
    Ok(Report::Budget(report))
}

fn poisson_flags(src: &Source) -> impl Iterator<Item = String> + '_ {
    src.poisson_defaults
        .iter()
        .map(|k| format!("poisson-default: {k}.unc = sqrt(value)"))
}

fn run_quantify(cfg: &RunConfig) -> Result<Report, CliError> {
    let (file, mut src) = input::load::<QuantifyFile>(cfg.input())?;
    let analyte_intensity = src.intensity("analyte.intensity", &file.analyte.intensity)?;
    let standard_intensity = src.intensity("standard.intensity", &file.standard.intensity)?;
    let concentration = src.measurement("standard.concentration", &file.standard.concentration)?;
    let s_y = src.measurement("sensitivities.analyte", &file.sensitivities.analyte)?;
    let s_p = src.measurement("sensitivities.standard", &file.sensitivities.standard)?;
    let sample = TxrfSample::new(
        file.analyte.name.clone(),
        analyte_intensity,
        file.standard.name.clone(),
        standard_intensity,
        concentration,
    )
    .map_err(|e| CliError::from_txrf(e, src.at("standard")))?;
    let (_, budget) = quantify_with(&sample, s_y, s_p)
        .map_err(|e| CliError::from_txrf(e, src.at("sensitivities")))?;
    let mut report = BudgetReport::new("quantify", &budget);
    if cfg.samples.is_some() || cfg.seed.is_some() {
        let model = Model::parse(QUANTIFY_MODEL).expect("built-in model parses");
        let inputs: Inputs = budget
            .contributions
            .iter()
            .map(|c| (c.input.clone(), c.measurement))
            .collect();
        report.mc = Some(mc_block(cfg, &src, &model, &inputs)?);
        report.flags.push(NORMAL_FLAG.into());
    }
    if cfg.policy.is_some() {
        report
            .flags
            .push("policy-not-applicable: sensitivities are supplied as measured values".into());
    }
    report.flags.extend(poisson_flags(&src));
    Ok(Report::Budget(report))
}

fn calibrate(
    inputs: &CalibrationInputs,
    policy: BudgetPolicy,
    src: &Source,
) -> Result<SensitivityRecord, CliError> {
    calibrate_sensitivity(inputs, policy).map_err(|e| CliError::from_txrf(e, src.at("ref")))
}

fn run_calibrate(cfg: &RunConfig) -> Result<Report, CliError> {
    let (file, mut src) = input::load::<CalibrateFile>(cfg.input())?;
    let r = &file.reference;
    let ref_sensitivity = Measurement::new(r.sensitivity.value.unwrap_or(1.0), r.sensitivity.unc)
        .map_err(|e| {
        CliError::input(
            src.at("ref.sensitivity"),
            match e {
                txunc_core::MeasurementError::NegativeUncertainty(u) => {
                    format!("NegativeUncertainty: {u}")
                }
                other => other.to_string(),
            },
        )
    })?;
    let inputs = CalibrationInputs {
        element: "element".into(),
        ref_sensitivity,
        ref_intensity: src.intensity("ref.intensity", &r.intensity)?,
        ref_concentration: src.measurement("ref.concentration", &r.concentration)?,
        element_intensity: src.intensity("element.intensity", &file.element.intensity)?,
        element_concentration: src
            .measurement("element.concentration", &file.element.concentration)?,
    };
    let policy = cfg.policy.unwrap_or(PolicyArg::Complete);
    let mut report = match policy {
        PolicyArg::Complete | PolicyArg::Truncated => {
            let p = if policy == PolicyArg::Complete {
                BudgetPolicy::Complete
            } else {
                BudgetPolicy::Truncated
            };
            let rec = calibrate(&inputs, p, &src)?;
            let mut report = BudgetReport::new("calibrate", &rec.budget);
            report.policy = Some(p.as_str());
            if p == BudgetPolicy::Truncated && inputs.ref_sensitivity.std_uncertainty() > 0.0 {
                report
                    .flags
                    .push("truncated-budget: reference sensitivity uncertainty excluded".into());
            }
            report
        }
        PolicyArg::Both => {
            let complete = calibrate(&inputs, BudgetPolicy::Complete, &src)?;
            let truncated = calibrate(&inputs, BudgetPolicy::Truncated, &src)?;
            let gap = budget_gap(&complete, &truncated)
                .map_err(|e| CliError::from_txrf(e, src.at("ref")))?;
            let mut report = BudgetReport::new("calibrate", &complete.budget);
            report.policy = Some("both");
            report.truncated = Some(TruncatedBlock {
                combined_unc: truncated.budget.combined,
                relative_unc: truncated.budget.relative(),
                budget: budget_rows(&truncated.budget),
            });
            report.gap = Some(gap);
            report
        }
    };
    report.flags.extend(poisson_flags(&src));
    Ok(Report::Budget(report))
}

fn run_coin_demo(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(DEFAULT_COIN_N);
    let table = enumerate_sequences(n).map_err(|e| CliError::usage(format!("--n: {e}")))?;
    let sequences = table
        .rows
        .iter()
        .map(|row| {
            let f = row.frequency.as_f64();
            SequenceEntry {
                sequence: row.sequence.clone(),
                frequency: row.frequency.to_string(),
                value: f,
                delta_f: frequency_uncertainty(f, u64::from(n))
                    .expect("enumerated frequencies are in range"),
                degenerate: row.frequency.heads == 0 || row.frequency.heads == n,
            }
        })
        .collect();
    let flips = cfg.samples.unwrap_or(DEFAULT_COIN_FLIPS);
    let seed = cfg.seed.unwrap_or(coinflip::DEFAULT_SEED);
    let est =
        simulate_flips(flips, seed).map_err(|e| CliError::usage(format!("--samples: {e}")))?;
    let fraction = coinflip::coverage(COVERAGE_BATCHES, COVERAGE_FLIPS, seed, 2.0)
        .map_err(|e| CliError::Computation(e.to_string()))?;
    Ok(Report::Coin(CoinReport {
        command: "coin-demo",
        n,
        sequences,
        simulation: SimulationBlock {
            flips,
            seed,
            heads: est.heads,
            f: est.f,
            delta_f: est.delta_f,
            degenerate: est.is_degenerate(),
        },
        coverage: CoverageBlock {
            batches: COVERAGE_BATCHES,
            flips: COVERAGE_FLIPS,
            k: 2.0,
            fraction,
        },
        flags: vec![WALD_FLAG.into()],
    }))
}

fn run_replicates(cfg: &RunConfig) -> Result<Report, CliError> {
    let (file, src) = input::load::<ReplicatesFile>(cfg.input())?;
    let stats = replicate_stats(&file.values, file.reference)
        .map_err(|e| CliError::from_txrf(e, src.at("values")))?;
    Ok(Report::Replicates(ReplicatesReport {
        command: "replicates",
        n: stats.n,
        mean: stats.mean,
        bias: stats.bias,
        dispersion: stats.dispersion,
        flags: Vec::new(),
    }))
}
