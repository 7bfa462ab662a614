use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::debug;
use terwilliger_core::groups::GroupDescriptor;
use terwilliger_core::report::{conjecture_check, run_report, ReportError, Route, RunConfig, Stages};
use terwilliger_core::tables::TableFormat;

/// Terwilliger algebras of conjugacy class schemes.
///
/// Every flag can also be set through an environment variable named
/// `TERW_<FLAG>`, e.g. `TERW_GROUP=sym:5`.
#[derive(Debug, Parser)]
#[command(name = "terwilliger", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class scheme, intersection numbers and T0.
    Scheme,
    /// Character table and the permutation character of the stabilizer.
    Characters,
    /// Orbital block table of the centralizer algebra.
    Centralizer,
    /// Switching closure up to the Terwilliger algebra.
    Terwilliger,
    /// Wedderburn decomposition of T.
    Wedderburn,
    /// Thinness of the irreducible modules.
    Thinness,
    /// Strict inclusion test at the ([n-1,1],[n-1,1]) block.
    Conjecture,
    /// The full pipeline.
    Report,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Args)]
struct Opts {
    /// `sym:N` or `file:PATH` (Cayley table).
    #[arg(long, global = true, env = "TERW_GROUP", default_value = "sym:4")]
    group: GroupDescriptor,
    /// Working prime; repeat for a second one.
    #[arg(long = "prime", global = true, env = "TERW_PRIME", value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long, global = true, env = "TERW_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "TERW_MAX_WIDTH", default_value_t = 6)]
    max_width: usize,
    /// Prune the closure with the centralizer block table.
    #[arg(long, global = true, env = "TERW_BOUNDS", value_enum, default_value = "on")]
    bounds: Toggle,
    /// md, csv or json.
    #[arg(long, global = true, env = "TERW_FORMAT", default_value = "md")]
    format: TableFormat,
    /// Class labels to keep in block tables, e.g. `[4,1],[5]`.
    #[arg(long, global = true, env = "TERW_BLOCKS", value_parser = parse_blocks)]
    blocks: Option<BlockList>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "TERW_THREADS", default_value_t = 0)]
    threads: usize,
    /// orbital or raw.
    #[arg(long, global = true, env = "TERW_ROUTE", default_value = "orbital")]
    route: Route,
}

#[derive(Debug, Clone)]
struct BlockList(Vec<String>);

/// Splits on commas outside brackets.
fn parse_blocks(s: &str) -> Result<BlockList, String> {
    let mut labels = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                labels.push(std::mem::take(&mut current));
                continue;
            }
            c if c.is_whitespace() => continue,
            _ => {}
        }
        if depth < 0 {
            return Err(format!("unbalanced brackets in {s:?}"));
        }
        current.push(ch);
    }
    if depth != 0 {
        return Err(format!("unbalanced brackets in {s:?}"));
    }
    labels.push(current);
    if labels.iter().any(String::is_empty) {
        return Err(format!("empty label in {s:?}"));
    }
    Ok(BlockList(labels))
}

impl Opts {
    fn config(&self) -> RunConfig {
        RunConfig {
            group: self.group.clone(),
            primes: self.primes.clone(),
            seed: self.seed,
            max_width: self.max_width,
            use_bounds: matches!(self.bounds, Toggle::On),
            route: self.route,
        }
    }
}

fn stages(command: &Command) -> Stages {
    match command {
        Command::Scheme | Command::Conjecture => Stages::NONE,
        Command::Characters => Stages { characters: true, ..Stages::NONE },
        Command::Centralizer => Stages { centralizer: true, ..Stages::NONE },
        Command::Terwilliger => Stages { closure: true, ..Stages::NONE },
        Command::Wedderburn | Command::Thinness => Stages { wedderburn: true, ..Stages::NONE },
        Command::Report => Stages::ALL,
    }
}

fn run(cli: &Cli) -> Result<(String, bool), ReportError> {
    let cfg = cli.opts.config();
    debug!("{cfg:?}");
    if let Command::Conjecture = cli.command {
        let GroupDescriptor::Symmetric(n) = cfg.group else {
            return Err(ReportError::Config("conjecture needs a symmetric group".into()));
        };
        let c = conjecture_check(n, &cfg)?;
        let out = match cli.opts.format {
            TableFormat::Json => serde_json::to_string_pretty(&c).expect("serializable"),
            TableFormat::Csv => format!("t_block,tilde_block,strict\n{},{},{}", c.t_block, c.tilde_block, c.strict),
            TableFormat::Markdown => {
                format!("T block {}, T~ block {}, strict {}", c.t_block, c.tilde_block, c.strict)
            }
        };
        return Ok((out, true));
    }
    let report = run_report(&cfg, stages(&cli.command))?;
    let out = report.render(cli.opts.format, cli.opts.blocks.as_ref().map(|b| b.0.as_slice()))?;
    Ok((out, report.passed()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if cli.opts.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.opts.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, passed)) => {
            println!("{}", out.trim_end());
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: internal checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_lists_split_outside_brackets() {
        assert_eq!(parse_blocks("[3,1], [4]").unwrap().0, vec!["[3,1]", "[4]"]);
        assert_eq!(parse_blocks("[1^4]").unwrap().0, vec!["[1^4]"]);
        assert!(parse_blocks("[3,1").is_err());
        assert!(parse_blocks("[4],").is_err());
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["terwilliger", "report", "--group", "sym:5", "--prime", "101", "--prime", "103"]).unwrap();
        assert_eq!(cli.opts.primes, vec![101, 103]);
        assert!(matches!(cli.opts.group, GroupDescriptor::Symmetric(5)));
        assert!(Cli::try_parse_from(["terwilliger", "report", "--bounds", "maybe"]).is_err());
    }
}
