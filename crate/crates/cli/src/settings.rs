//! Resolution of flags, config file and defaults into one experiment.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use lss_sense::sim::{ChannelModel, ExperimentConfig, NoiseModel};
use lss_sense::DetectorKind;

use crate::args::RunArgs;
use crate::error::{CliError, CliResult};
use crate::format::fmt_g;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    snr_db: Option<f64>,
    pfa: Option<OneOrMany>,
    trials: Option<usize>,
    seed: Option<u64>,
    channel: Option<String>,
    noise: Option<String>,
    detectors: Option<Vec<String>>,
    out: Option<PathBuf>,
    snr_list: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

fn load(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Everything a run depends on, after precedence is applied.
#[derive(Debug, Clone)]
pub struct Settings {
    pub command: &'static str,
    pub m: usize,
    pub l: usize,
    pub snr_db: f64,
    pub pfa: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub channel: ChannelModel,
    pub noise: NoiseModel,
    pub detectors: Vec<DetectorKind>,
    pub snr_list: Vec<f64>,
    pub out: PathBuf,
}

/// Per-command defaults that differ.
pub struct Defaults {
    pub pfa: Vec<f64>,
    pub snr_list: Vec<f64>,
}

impl Settings {
    pub fn resolve(
        command: &'static str,
        args: &RunArgs,
        snr_list: Option<&[f64]>,
        defaults: Defaults,
    ) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => load(path)?,
            None => FileConfig::default(),
        };
        let m = args.m.or(file.m).ok_or_else(|| CliError::Usage("--M is required".into()))?;
        let l = args.l.or(file.l).ok_or_else(|| CliError::Usage("--L is required".into()))?;
        let channel = args.channel.clone().or(file.channel).unwrap_or_else(|| "uncorrelated".into());
        let noise = args.noise.clone().or(file.noise).unwrap_or_else(|| "calibrated:1".into());
        let detectors = match args.detectors.clone().or(file.detectors) {
            Some(names) => names
                .iter()
                .map(|n| n.parse::<DetectorKind>().map_err(|e| CliError::Usage(e.to_string())))
                .collect::<CliResult<Vec<_>>>()?,
            None => DetectorKind::HIGH_DIMENSIONAL.to_vec(),
        };
        let settings = Self {
            command,
            m,
            l,
            snr_db: args.snr_db.or(file.snr_db).unwrap_or(-10.0),
            pfa: args.pfa.clone().or(file.pfa.map(OneOrMany::into_vec)).unwrap_or(defaults.pfa),
            trials: args.trials.or(file.trials).unwrap_or(10_000),
            seed: args.seed.or(file.seed).unwrap_or(0),
            channel: parse_channel(&channel)?,
            noise: parse_noise(&noise)?,
            detectors,
            snr_list: snr_list.map(<[f64]>::to_vec).or(file.snr_list).unwrap_or(defaults.snr_list),
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        };
        settings.experiment().validate()?;
        Ok(settings)
    }

    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            m: self.m,
            l: self.l,
            snr_db: self.snr_db,
            channel: self.channel,
            noise: self.noise,
            trials: self.trials,
            seed: self.seed,
            detectors: self.detectors.clone(),
            pfa_grid: self.pfa.clone(),
        }
    }

    /// `key=value` lines in a fixed order; the digest is taken over this text.
    pub fn canonical(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[f64]| v.iter().map(|x| fmt_g(*x)).collect::<Vec<_>>().join(",");
        vec![
            ("command", self.command.to_string()),
            ("M", self.m.to_string()),
            ("L", self.l.to_string()),
            ("snr_db", fmt_g(self.snr_db)),
            ("pfa", list(&self.pfa)),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("channel", channel_name(&self.channel)),
            ("noise", noise_name(&self.noise)),
            ("detectors", self.detectors.iter().map(|d| d.label()).collect::<Vec<_>>().join(",")),
            ("snr_list", list(&self.snr_list)),
        ]
    }

    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in self.canonical() {
            hasher.update(format!("{k}={v}\n").as_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

pub fn parse_channel(s: &str) -> CliResult<ChannelModel> {
    let s = s.trim().to_ascii_lowercase();
    let model = match s.split_once(':') {
        None if s == "uncorrelated" => ChannelModel::Uncorrelated,
        None if s == "exp" => ChannelModel::ExponentialCorrelated { rho: ChannelModel::DEFAULT_RHO },
        Some(("exp", rho)) => ChannelModel::ExponentialCorrelated { rho: number(rho, "channel correlation")? },
        _ => return Err(CliError::Usage(format!("unknown channel `{s}`; use uncorrelated or exp:<rho>"))),
    };
    model.validate()?;
    Ok(model)
}

pub fn parse_noise(s: &str) -> CliResult<NoiseModel> {
    let s = s.trim().to_ascii_lowercase();
    let parts: Vec<&str> = s.split(':').collect();
    let model = match parts.as_slice() {
        ["calibrated"] => NoiseModel::Calibrated { variance: 1.0 },
        ["calibrated", var] => NoiseModel::Calibrated { variance: number(var, "noise variance")? },
        ["uncalibrated"] => NoiseModel::Uncalibrated { lo: 0.5, hi: 1.5 },
        ["uncalibrated", lo, hi] => {
            NoiseModel::Uncalibrated { lo: number(lo, "noise level")?, hi: number(hi, "noise level")? }
        }
        _ => {
            return Err(CliError::Usage(format!(
                "unknown noise model `{s}`; use calibrated:<var> or uncalibrated:<lo>:<hi>"
            )))
        }
    };
    model.validate()?;
    Ok(model)
}

fn number(s: &str, what: &str) -> CliResult<f64> {
    s.parse().map_err(|_| CliError::Usage(format!("{what} `{s}` is not a number")))
}

pub fn channel_name(c: &ChannelModel) -> String {
    match c {
        ChannelModel::Uncorrelated => "uncorrelated".into(),
        ChannelModel::ExponentialCorrelated { rho } => format!("exp:{}", fmt_g(*rho)),
    }
}

pub fn noise_name(n: &NoiseModel) -> String {
    match n {
        NoiseModel::Calibrated { variance } => format!("calibrated:{}", fmt_g(*variance)),
        NoiseModel::Uncalibrated { lo, hi } => format!("uncalibrated:{}:{}", fmt_g(*lo), fmt_g(*hi)),
    }
}
