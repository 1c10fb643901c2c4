use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use cremona_lab::{Builtin, ClassKind, Outcome, UsageError, BUNDLED_CORPUS};

#[derive(Parser)]
#[command(
    name = "cremona-lab",
    version,
    about = "Exact checks on Del Pezzo lattices, plane Cremona maps and de Jonquieres elements"
)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel verification.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// List exceptional or conic bundle classes on the blow-up of r points.
    Enumerate {
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "exc")]
        kind: ClassKind,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Report on a Picard lattice matrix.
    Weyl {
        #[arg(
            long,
            value_enum,
            conflicts_with = "matrix",
            required_unless_present = "matrix"
        )]
        builtin: Option<Builtin>,
        /// Row-major JSON integer matrix in the basis (E1..Er, L).
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, value_enum)]
        report: Option<Format>,
    },
    /// Compose maps; the last one is applied first.
    Compose {
        #[arg(long, default_value = "P2")]
        ambient: String,
        #[arg(required = true, num_args = 1..)]
        maps: Vec<String>,
        /// Fail unless the composite equals this map.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Order of a map, searched up to the cap.
    Order {
        #[arg(long, default_value = "P2")]
        ambient: String,
        map: String,
        #[arg(long, default_value_t = 5040)]
        cap: u64,
        #[arg(long)]
        expect: Option<u64>,
    },
    /// de Jonquieres elements, given as "a11, a12, a21, a22; b11, b12, b21, b22".
    Jonq {
        #[arg(long)]
        element: String,
        #[arg(long)]
        analyze: bool,
        /// Replace the element by its k-th power first.
        #[arg(long)]
        power: Option<u64>,
    },
    /// Verify generator table rows.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Run every table and identity check.
    VerifyTables,
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Verify the rows of a corpus file, or the bundled tables.
    Run { file: Option<PathBuf> },
    /// List row names.
    List { file: Option<PathBuf> },
}

fn read_corpus(file: &Option<PathBuf>) -> anyhow::Result<String> {
    match file {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))
            .map_err(|e| UsageError(format!("{e:#}")).into()),
        None => Ok(BUNDLED_CORPUS.to_string()),
    }
}

fn run(cli: Cli) -> anyhow::Result<(Outcome, bool)> {
    let mut json = cli.json;
    let out = match cli.cmd {
        Cmd::Enumerate { r, kind, format } => {
            json |= matches!(format, Some(Format::Json));
            cremona_lab::enumerate(r, kind)?
        }
        Cmd::Weyl {
            builtin,
            matrix,
            report,
        } => {
            json |= matches!(report, Some(Format::Json));
            match (builtin, matrix) {
                (Some(b), _) => cremona_lab::weyl_builtin(b)?,
                (None, Some(m)) => cremona_lab::weyl_matrix(&m)?,
                (None, None) => unreachable!("clap requires one of the two"),
            }
        }
        Cmd::Compose {
            ambient,
            maps,
            expect,
        } => cremona_lab::compose_maps(&ambient, &maps, expect.as_deref())?,
        Cmd::Order {
            ambient,
            map,
            cap,
            expect,
        } => cremona_lab::order_map(&ambient, &map, cap, expect)?,
        Cmd::Jonq {
            element,
            analyze,
            power,
        } => cremona_lab::jonq(&element, analyze, power)?,
        Cmd::Corpus {
            action: CorpusAction::Run { file },
        } => cremona_lab::corpus_run(&read_corpus(&file)?)?,
        Cmd::Corpus {
            action: CorpusAction::List { file },
        } => cremona_lab::corpus_list(&read_corpus(&file)?)?,
        Cmd::VerifyTables => cremona_lab::verify_tables(),
    };
    Ok((out, json))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((out, json)) => {
            println!(
                "{}",
                if json {
                    out.render_json()
                } else {
                    out.text.clone()
                }
            );
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}
