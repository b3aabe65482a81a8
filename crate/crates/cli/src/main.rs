//! Command-line front end: generation, seed selection, agent selection and
//! the experiment drivers.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crosslayer::agents::asmtc;
use crosslayer::experiment::{fig3, fig4, fig5, fig6, write_rows, CsvRow, ExperimentConfig};
use crosslayer::graph::io::{write_adhoc, write_mapping, write_social};
use crosslayer::kv::KeyValues;
use crosslayer::seeding::{celf_select, greedy_select};
use crosslayer::Error;

#[derive(Parser)]
#[command(name = "crosslayer", version, about = "Agent selection for influence maximization over ad-hoc networks")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extra `key=value` override; repeatable. Flags win over the file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the generated ad-hoc layer, mapping and friendship graph.
    Gen,
    /// Select seeds with CELF (or plain greedy).
    Seeds {
        #[arg(long)]
        greedy: bool,
    },
    /// Run agent selection and save the assignment.
    Agents,
    /// Run one experiment driver: fig3, fig4, fig5 or fig6.
    Experiment { which: String },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Invariant(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let mut kv = match &cli.config {
        Some(path) => KeyValues::parse(&fs::read_to_string(path)?)?,
        None => KeyValues::default(),
    };
    for item in &cli.set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects KEY=VALUE, got `{item}`")))?;
        kv.set(k.trim(), v.trim());
    }
    if let Some(seed) = cli.seed {
        kv.set("seed", seed);
    }
    if let Some(out) = &cli.out {
        kv.set("out", out.display());
    }
    Ok(ExperimentConfig::from_kv(&kv)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Failure::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Run(Error::Invariant(e.to_string())))?;
    }
    let cfg = load_config(&cli)?;
    fs::create_dir_all(&cfg.out)?;
    match &cli.command {
        Command::Gen => gen(&cfg),
        Command::Seeds { greedy } => seeds(&cfg, *greedy),
        Command::Agents => agents(&cfg),
        Command::Experiment { which } => experiment(&cfg, which),
    }
}

fn create(dir: &Path, name: &str) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Flattens a serializable value into `prefix.key = value` lines.
fn key_values<T: Serialize>(prefix: &str, value: &T, out: &mut Vec<String>) {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    walk(&format!("{prefix}.{k}"), v, out);
                }
            }
            Value::String(s) => out.push(format!("{prefix} = {s}")),
            other => out.push(format!("{prefix} = {other}")),
        }
    }
    walk(prefix, &serde_json::to_value(value).expect("diagnostics serialize"), out);
}

fn emit(dir: &Path, name: &str, lines: &[String]) -> io::Result<()> {
    let mut f = create(dir, name)?;
    let mut stdout = io::stdout().lock();
    for line in lines {
        writeln!(f, "{line}")?;
        writeln!(stdout, "{line}")?;
    }
    f.flush()
}

fn gen(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let built = cfg.build()?;
    let inst = &built.instance;
    let mut f = create(&cfg.out, "manet.txt")?;
    write_adhoc(inst.adhoc(), &mut f)?;
    f.flush()?;
    let mut f = create(&cfg.out, "social.txt")?;
    write_social(inst.social(), &mut f)?;
    f.flush()?;
    let mut f = create(&cfg.out, "mapping.txt")?;
    write_mapping(inst.mapping(), inst.social(), inst.adhoc(), &mut f)?;
    f.flush()?;

    let mut lines = vec![
        format!("nodes = {}", inst.node_count()),
        format!("social_edges = {}", inst.social().edge_count()),
        format!("manet_edges = {}", inst.adhoc().edge_count()),
        format!("manet_mean_degree = {}", inst.adhoc().mean_degree()),
    ];
    if let Some(d) = &built.manet_diag {
        key_values("manet", d, &mut lines);
    }
    if let Some(d) = &built.social_diag {
        key_values("social", d, &mut lines);
    }
    key_values("layers", &built.layers, &mut lines);
    emit(&cfg.out, "diagnostics.txt", &lines)?;
    Ok(())
}

fn seeds(cfg: &ExperimentConfig, greedy: bool) -> Result<(), Failure> {
    let inst = cfg.build()?.instance;
    let pool = cfg.pool();
    let k = cfg.k.min(inst.node_count());
    let sel = if greedy {
        greedy_select(inst.social(), k, &pool, &cfg.selection)?
    } else {
        celf_select(inst.social(), k, &pool, &cfg.selection)?
    };
    let mut f = create(&cfg.out, "seeds.csv")?;
    sel.write_csv(inst.social(), &mut f)?;
    f.flush()?;
    let lines = vec![
        format!("method = {}", if greedy { "greedy" } else { "celf" }),
        format!("k = {k}"),
        format!("trials = {}", pool.trials),
        format!("spread = {}", sel.spread()),
        format!("lookups = {}", sel.lookups()),
    ];
    emit(&cfg.out, "seeds_summary.txt", &lines)?;
    Ok(())
}

fn agents(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let inst = cfg.build()?.instance;
    let out = asmtc(&inst, &cfg.asmtc)?;
    let mut f = create(&cfg.out, "agents.csv")?;
    out.assignment.write_csv(inst.social(), &mut f)?;
    f.flush()?;
    let mut f = create(&cfg.out, "agents_ledger.csv")?;
    out.ledger.write_csv(&mut f)?;
    f.flush()?;
    let lines = vec![
        format!("objective_initial = {}", out.objective_initial),
        format!("objective_after_election = {}", out.objective_after_das),
        format!("objective_final = {}", out.objective_final),
        format!("elections = {}", out.elections.len()),
        format!("reduction_rounds = {}", out.rounds.len()),
        format!("agents = {}", out.assignment.agent_set().len()),
        format!("delegated = {}", out.assignment.delegated_count()),
        format!("control_hops = {}", out.ledger.control_hops),
    ];
    emit(&cfg.out, "agents_summary.txt", &lines)?;
    Ok(())
}

fn write_table<R: CsvRow>(cfg: &ExperimentConfig, name: &str, rows: &[R]) -> Result<(), Failure> {
    let mut f = create(&cfg.out, name)?;
    write_rows(rows, &mut f)?;
    f.flush()?;
    write_rows(rows, io::stdout().lock())?;
    Ok(())
}

fn experiment(cfg: &ExperimentConfig, which: &str) -> Result<(), Failure> {
    match which {
        "fig3" => write_table(cfg, "fig3.csv", &fig3(cfg, &cfg.build()?.instance)?),
        "fig4" => write_table(cfg, "fig4.csv", &fig4(cfg)?),
        "fig5" => write_table(cfg, "fig5.csv", &fig5(cfg, &cfg.build()?.instance)?),
        "fig6" => write_table(cfg, "fig6.csv", &fig6(cfg)?),
        other => Err(Failure::Usage(format!(
            "unknown experiment `{other}`, expected fig3, fig4, fig5 or fig6"
        ))),
    }
}
