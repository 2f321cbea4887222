use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use asp_core::corpus::ReportFormat;
use asp_core::graph::PreprocessPolicy;
use asp_core::tuner::{Aggregator, SweepGrid};
use serde::{Deserialize, Serialize};

use crate::cli::CommonArgs;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    pub articles: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub cluster_map: Option<PathBuf>,
    pub grade_table: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AspSection {
    pub damping: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
    pub deterministic: bool,
    /// Citing window in years, used for citation counts and, when
    /// `window_asp_graph` is set, for the graph the solver sees.
    pub window: u32,
    pub window_asp_graph: bool,
}

impl Default for AspSection {
    fn default() -> Self {
        let c = asp_core::AspConfig::default();
        AspSection {
            damping: c.damping,
            epsilon: c.epsilon,
            max_iterations: c.max_iterations,
            deterministic: c.deterministic,
            window: 5,
            window_asp_graph: false,
        }
    }
}

impl AspSection {
    pub fn engine_config(&self) -> asp_core::AspConfig {
        asp_core::AspConfig {
            damping: self.damping,
            epsilon: self.epsilon,
            max_iterations: self.max_iterations,
            deterministic: self.deterministic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSection {
    pub d_values: Vec<f64>,
    pub w_values: Vec<u32>,
    /// Defaults to the policy's analysis years.
    pub years: Option<(i32, i32)>,
    pub aggregator: Aggregator,
    pub window_asp_graph: bool,
}

impl Default for SweepSection {
    fn default() -> Self {
        let g = SweepGrid::<f64>::default();
        SweepSection {
            d_values: g.d_values,
            w_values: g.w_values,
            years: None,
            aggregator: Aggregator::L1,
            window_asp_graph: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StatsSection {
    pub tail_quantile: f64,
    pub top_articles: usize,
    pub intensity_scale: f64,
    pub intensity_zero_diagonal: bool,
    pub high_asp_percentile: f64,
    pub low_ncit_percentile: f64,
}

impl Default for StatsSection {
    fn default() -> Self {
        StatsSection {
            tail_quantile: 0.9,
            top_articles: 100,
            intensity_scale: 1.0,
            intensity_zero_diagonal: false,
            high_asp_percentile: 75.0,
            low_ncit_percentile: 50.0,
        }
    }
}

/// Effective configuration of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub format: ReportFormat,
    /// Worker threads; 0 picks the number of cores.
    pub threads: usize,
    pub paths: Paths,
    pub policy: PreprocessPolicy,
    pub asp: AspSection,
    pub sweep: SweepSection,
    pub stats: StatsSection,
}

/// Where the effective configuration came from.
#[derive(Debug, Default)]
pub struct Provenance {
    pub command: String,
    pub config_file: Option<PathBuf>,
    pub overridden: Vec<&'static str>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Defaults, overlaid by the config file, overlaid by flags.
    pub fn resolve(args: &CommonArgs, command: &str) -> Result<(Self, Provenance)> {
        let mut cfg = match &args.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let mut prov = Provenance {
            command: command.to_string(),
            config_file: args.config.clone(),
            overridden: Vec::new(),
        };
        macro_rules! set {
            ($flag:expr, $field:expr, $name:literal) => {
                if let Some(v) = $flag.clone() {
                    $field = v.into();
                    prov.overridden.push($name);
                }
            };
        }
        set!(args.articles, cfg.paths.articles, "paths.articles");
        set!(args.edges, cfg.paths.edges, "paths.edges");
        set!(args.graph, cfg.paths.graph, "paths.graph");
        set!(args.cluster_map, cfg.paths.cluster_map, "paths.cluster_map");
        set!(args.grade_table, cfg.paths.grade_table, "paths.grade_table");
        set!(args.out, cfg.paths.out, "paths.out");
        set!(args.format, cfg.format, "format");
        set!(args.threads, cfg.threads, "threads");
        set!(args.d, cfg.asp.damping, "asp.damping");
        set!(args.window, cfg.asp.window, "asp.window");
        set!(args.epsilon, cfg.asp.epsilon, "asp.epsilon");
        set!(args.max_iterations, cfg.asp.max_iterations, "asp.max_iterations");
        set!(args.window_asp_graph, cfg.asp.window_asp_graph, "asp.window_asp_graph");
        set!(args.d_values, cfg.sweep.d_values, "sweep.d_values");
        set!(args.w_values, cfg.sweep.w_values, "sweep.w_values");
        Ok((cfg, prov))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.paths.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn sweep_grid(&self) -> SweepGrid<f64> {
        SweepGrid {
            d_values: self.sweep.d_values.clone(),
            w_values: self.sweep.w_values.clone(),
            years: self.sweep.years.unwrap_or(self.policy.analysis_years),
        }
    }

    /// Banner plus the effective configuration as TOML.
    pub fn provenance_text(&self, prov: &Provenance) -> Result<String> {
        let mut s = String::new();
        writeln!(s, "# asp {} {}", prov.command, env!("CARGO_PKG_VERSION"))?;
        writeln!(s, "# precedence: flags > config file > defaults")?;
        match &prov.config_file {
            Some(p) => writeln!(s, "# config file: {}", p.display())?,
            None => writeln!(s, "# config file: none")?,
        }
        if prov.overridden.is_empty() {
            writeln!(s, "# flag overrides: none")?;
        } else {
            writeln!(s, "# flag overrides: {}", prov.overridden.join(", "))?;
        }
        s.push('\n');
        s.push_str(&toml::to_string_pretty(self)?);
        Ok(s)
    }
}
