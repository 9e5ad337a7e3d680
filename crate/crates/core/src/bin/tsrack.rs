use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tsrack::cli::{self, Cache, CliError, InvariantKind};
use tsrack::RackInput;

#[derive(Parser)]
#[command(
    name = "tsrack",
    version,
    about = "Finite racks, (t,s)-racks and enhanced rack counting invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: Format,
    /// Result cache directory; caching is off when unset.
    #[arg(long, global = true, env = "TSRACK_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Count,
    Writhe,
    Additive,
    SEnh,
}

impl From<Kind> for InvariantKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Count => InvariantKind::Count,
            Kind::Writhe => InvariantKind::Writhe,
            Kind::Additive => InvariantKind::Additive,
            Kind::SEnh => InvariantKind::SEnh,
        }
    }
}

#[derive(Args)]
struct RackArg {
    /// Inline JSON (t,s)-rack spec, or a file with a JSON spec or rack matrix.
    #[arg(long)]
    rack: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the rack axioms.
    ValidateRack(RackArg),
    /// Print the rack rank and per-element kink orders.
    RackRank(RackArg),
    /// Build a (t,s)-rack from its JSON description and print its rack matrix.
    MakeTsrack(RackArg),
    /// Decide whether two racks are isomorphic.
    IsoCheck {
        #[arg(long)]
        rack: String,
        #[arg(long)]
        rack2: String,
    },
    /// Compute one invariant of one link.
    Invariant {
        #[arg(long)]
        rack: String,
        /// `pd: ...`, `braid: strands: letters`, `unknots: k`, or a file.
        #[arg(long)]
        link: String,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Group a list of named links by invariant value.
    Table {
        #[arg(long)]
        rack: String,
        /// File with one `name<TAB>link spec` per line.
        #[arg(long)]
        link: PathBuf,
        #[arg(long, value_enum, default_value = "additive")]
        kind: Kind,
        /// Require strict coefficient inequality on the whole support.
        #[arg(long)]
        strict_order: bool,
    },
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json serializes") + "\n"
}

fn describe(rack: &RackInput) -> String {
    match rack {
        RackInput::Module { rack, .. } => rack.to_string(),
        RackInput::Matrix(r) => format!("rack matrix of order {}", r.size()),
    }
}

fn cache(dir: &Option<PathBuf>) -> Result<Option<Cache>, CliError> {
    dir.as_deref().map(Cache::new).transpose()
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::ValidateRack(a) => {
            let rack = cli::load_rack(&a.rack)?;
            let fr = rack.finite_rack();
            Ok(if json {
                pretty(json!({"valid": true, "order": fr.size(), "quandle": fr.is_quandle(), "rack": rack.canonical()}))
            } else {
                let kind = if fr.is_quandle() { "quandle" } else { "rack" };
                format!("valid {kind} of order {}: {}\n", fr.size(), describe(&rack))
            })
        }
        Command::RackRank(a) => {
            let rack = cli::load_rack(&a.rack)?;
            let rank = rack.finite_rack().rank();
            Ok(if json {
                pretty(json!({"rank": rank.rank, "per_element": rank.per_element}))
            } else {
                let per: Vec<String> = rank.per_element.iter().map(u64::to_string).collect();
                format!("rank {}\nper element: {}\n", rank.rank, per.join(" "))
            })
        }
        Command::MakeTsrack(a) => {
            let rack = cli::load_rack(&a.rack)?;
            let Some(ts) = rack.ts_rack() else {
                return Err(CliError::Validation("make-tsrack needs a (t,s)-rack spec".into()));
            };
            let fr = ts.to_finite_rack();
            Ok(if json {
                let elements: Vec<Vec<u64>> = (0..ts.size()).map(|x| ts.vector(x)).collect();
                pretty(json!({
                    "spec": rack.canonical(),
                    "description": ts.to_string(),
                    "order": ts.size(),
                    "rank": ts.kink_order(),
                    "elements": elements,
                    "matrix": fr.matrix(),
                }))
            } else {
                fr.to_string()
            })
        }
        Command::IsoCheck { rack, rack2 } => {
            let (a, b) = (cli::load_rack(rack)?, cli::load_rack(rack2)?);
            let report = cli::iso_check(&a, &b)?;
            Ok(if json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            })
        }
        Command::Invariant { rack, link, kind } => {
            let rack = cli::load_rack(rack)?;
            let link = cli::load_link(link)?;
            let c = cache(&cli.cache_dir)?;
            let r = cli::compute_cached(&rack, &link, (*kind).into(), c.as_ref())?;
            Ok(if json { r.to_json() + "\n" } else { r.to_text() })
        }
        Command::Table {
            rack,
            link,
            kind,
            strict_order,
        } => {
            let rack = cli::load_rack(rack)?;
            let text = std::fs::read_to_string(link).map_err(|e| CliError::Io {
                path: Path::new(link).to_path_buf(),
                source: e,
            })?;
            let links =
                cli::parse_link_list(&text).map_err(|e| CliError::Parse(format!("{}: {}", link.display(), e)))?;
            let c = cache(&cli.cache_dir)?;
            let t = cli::table_command(&rack, &links, (*kind).into(), c.as_ref(), *strict_order);
            for f in &t.failures {
                log::warn!("{} (line {}) skipped: {}", f.link, f.line, f.error);
            }
            Ok(if json { t.to_json() + "\n" } else { t.to_text() })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
