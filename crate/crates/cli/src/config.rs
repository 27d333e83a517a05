use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iterasym_core::orbit::PrecisionPolicy;
use serde::{Deserialize, Serialize};

pub const DEFAULT_DIGITS: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Csv,
    /// Expansions only.
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Template,
    Derive,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Paper,
    Templates,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[value(name = "3")]
    #[serde(rename = "3")]
    Three,
    Addendum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableSelector {
    Paper(u8),
    Section(Section),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Estimate {
        map: String,
    },
    Table {
        selector: TableSelector,
    },
    Expand {
        map: String,
        order: Option<String>,
        source: Source,
    },
    Verify {
        suite: Suite,
        tolerance_digits: u32,
    },
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub target_digits: u32,
    pub guard_digits: Option<u32>,
    pub k_max: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub fixtures: Option<PathBuf>,
}

impl RunConfig {
    pub fn policy(&self) -> PrecisionPolicy {
        self.policy_for(self.target_digits)
    }

    pub fn policy_for(&self, target: u32) -> PrecisionPolicy {
        match self.guard_digits {
            Some(g) => PrecisionPolicy::new(target, g),
            None => PrecisionPolicy::auto(target, self.k_max.unwrap_or(1000)),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "iterasym",
    version,
    about = "Asymptotic constants of nonlinear recurrences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Decimal digits requested in each constant.
    #[arg(long, global = true, env = "ITERASYM_PRECISION_DEFAULT", default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,
    /// Extra working digits (default: 15 + log10 of the depth).
    #[arg(long, global = true)]
    pub guard_digits: Option<u32>,
    /// Iteration depth override (product depth, doubling depth, or first fit depth).
    #[arg(long, global = true)]
    pub k_max: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for tables and suites (default: all processors).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory whose fixture files replace the built-in ones.
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Estimate the constant of one map.
    Estimate {
        #[arg(long)]
        map: String,
    },
    /// Reproduce a table of constants.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with = "section", required_unless_present = "section")]
        paper_table: Option<u8>,
        #[arg(long, value_enum)]
        section: Option<Section>,
    },
    /// Print an exact asymptotic expansion.
    Expand {
        #[arg(long)]
        map: String,
        /// Truncation order, e.g. 6 or 5/2.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value_t = Source::Template)]
        source: Source,
    },
    /// Check fixtures and reference constants.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        tolerance_digits: u32,
    },
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let command = match cli.command {
            CliCommand::Estimate { map } => Command::Estimate { map },
            CliCommand::Table {
                paper_table,
                section,
            } => Command::Table {
                selector: match (paper_table, section) {
                    (Some(t), _) => TableSelector::Paper(t),
                    (None, Some(s)) => TableSelector::Section(s),
                    (None, None) => unreachable!("clap requires one selector"),
                },
            },
            CliCommand::Expand { map, order, source } => Command::Expand { map, order, source },
            CliCommand::Verify {
                suite,
                tolerance_digits,
            } => Command::Verify {
                suite,
                tolerance_digits,
            },
        };
        let c = cli.common;
        RunConfig {
            command,
            target_digits: c.digits,
            guard_digits: c.guard_digits,
            k_max: c.k_max,
            format: c.format,
            out: c.out,
            jobs: c.jobs,
            fixtures: c.fixtures,
        }
    }
}
