use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gemtri::diagram::export_diagram;
use gemtri::embedding::rho_min;
use gemtri::invariants::{first_homology, pi1_presentation};
use gemtri::io::{batch, parse_gem, run_cached, Cache, ModeChoice, RunOptions, RunRecord};
use gemtri::trisection::apex_candidates;
use gemtri::Error;

#[derive(Parser)]
#[command(name = "gemtri", version, about = "Trisections and trisection diagrams from gems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one gem file
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: PipelineArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
    },
    /// Run many gem files; one summary line per file
    Batch {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        opts: PipelineArgs,
    },
    /// Census, genus and homology of a gem without trisecting it
    Info { file: PathBuf },
}

#[derive(Args)]
struct PipelineArgs {
    /// cyclic permutation, e.g. "0,1,2,3,4"
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep")]
    eps: Option<Vec<usize>>,
    /// try all cyclic permutations
    #[arg(long)]
    sweep: bool,
    #[arg(long = "apex-color")]
    apex: Option<usize>,
    /// exhaustive search budget when minimizing k
    #[arg(long = "minimize-k", default_value_t = 0)]
    budget: u64,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// write results into this directory instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// result cache directory
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Closed,
    Gts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Dot,
    Svg,
}

impl OutFormat {
    fn ext(self) -> &'static str {
        match self {
            OutFormat::Json => "json",
            OutFormat::Dot => "dot",
            OutFormat::Svg => "svg",
        }
    }
}

impl PipelineArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            eps: self.eps.clone(),
            sweep: self.sweep,
            apex: self.apex,
            budget: self.budget,
            mode: match self.mode {
                ModeArg::Auto => ModeChoice::Auto,
                ModeArg::Closed => ModeChoice::Closed,
                ModeArg::Gts => ModeChoice::Gts,
            },
        }
    }

    fn cache(&self) -> Result<Option<Cache>, Error> {
        Ok(match &self.cache {
            Some(dir) => Some(Cache::open(dir)?),
            None => None,
        })
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "gem".into(), |s| s.to_string_lossy().into_owned())
}

fn emit(out: Option<&Path>, name: &str, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), bytes)?;
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn run(file: &Path, args: &PipelineArgs, format: OutFormat) -> Result<(), Error> {
    let gem = parse_gem(&std::fs::read(file)?)?;
    let cache = args.cache()?;
    let (bytes, _) = run_cached(&gem, &args.options(), cache.as_ref())?;
    let bytes = if format == OutFormat::Json {
        bytes
    } else {
        let record: RunRecord =
            serde_json::from_slice(&bytes).map_err(|e| Error::Internal(format!("cached record: {e}")))?;
        export_diagram(&record.diagram, format.ext())?
    };
    emit(args.out.as_deref(), &format!("{}.{}", stem(file), format.ext()), &bytes)
}

fn run_batch(files: &[PathBuf], args: &PipelineArgs) -> Result<i32, Error> {
    let cache = args.cache()?;
    let rows = batch(files, &args.options(), cache.as_ref());
    let mut code = 0;
    for row in &rows {
        let path = row.path.display();
        match &row.output {
            Ok(bytes) => {
                let r: RunRecord =
                    serde_json::from_slice(bytes).map_err(|e| Error::Internal(format!("record: {e}")))?;
                println!(
                    "{path}\tok\tgenus={}\tk={}\tapex={}\tcached={}",
                    r.certificate.genus, r.certificate.k, r.apex, row.cache_hit
                );
                if let Some(dir) = &args.out {
                    emit(Some(dir), &format!("{}.json", stem(&row.path)), bytes)?;
                }
            }
            Err(e) => {
                println!("{path}\terror\texit={}\t{e}", e.exit_code());
                code = code.max(e.exit_code());
            }
        }
    }
    Ok(code)
}

fn info(file: &Path) -> Result<(), Error> {
    let gem = parse_gem(&std::fs::read(file)?)?;
    let g = &gem.graph;
    let (best, perms) = rho_min(g);
    let census = g.census();
    let v = json!({
        "name": gem.name,
        "n": g.n(),
        "order": g.order(),
        "bipartite": g.is_bipartite(),
        "hat_residues": (0..=g.n()).map(|c| census.hat(c)).collect::<Vec<_>>(),
        "apex_candidates": apex_candidates(g),
        "regular_genus": best,
        "minimizing_permutations": perms
            .iter()
            .map(|p| p.as_slice().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>(),
        "h1": first_homology(g).to_string(),
        "pi1_generators": pi1_presentation(g).reduce().generators,
        "attestations": gem.attestations,
    });
    emit(None, "", &serde_json::to_vec_pretty(&v).map_err(|e| Error::Internal(e.to_string()))?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { file, opts, format } => run(file, opts, *format).map(|_| 0),
        Command::Batch { files, opts } => run_batch(files, opts),
        Command::Info { file } => info(file).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("gemtri: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
