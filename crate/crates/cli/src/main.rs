use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use placenav::config::Config;
use placenav::harness::analysis::{grid_scans, sample_fields};
use placenav::harness::records::step_counts_by_strategy;
use placenav::harness::{
    converged_summary, load_records, run_experiment1, run_experiment2, run_goal_seeking,
    run_mapping_phase, save_records, summarize, FieldGrid, StrategySpec,
};
use placenav::snapshot::Snapshot;
use placenav::world::{load_environment, EnvironmentSpec};

#[derive(Parser)]
#[command(name = "placenav", version, about = "Multiscale place-cell navigation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn place fields and adjacencies by a reward-free random walk.
    Map {
        env: PathBuf,
        #[arg(long, default_value = "configs/desk.toml")]
        config: PathBuf,
        #[arg(long, default_value_t = 5000)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "snapshot.bin")]
        out: PathBuf,
    },
    /// Run one goal-seeking episode from a snapshot.
    Seek {
        env: PathBuf,
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, default_value = "multiscale")]
        strategy: String,
        /// Keep every weight plastic and learn from reaching the goal.
        #[arg(long)]
        learn: bool,
        #[arg(long, default_value_t = 5000)]
        max_steps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Per-step decision log (CSV).
        #[arg(long)]
        log: Option<PathBuf>,
        /// Where to store the weights after a learning episode.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mapping, one replay, then frozen evaluation trials per strategy.
    Exp1 {
        config: PathBuf,
        #[arg(long, default_value = "results/exp1")]
        out: PathBuf,
    },
    /// Learning curves from scratch for every strategy.
    Exp2 {
        config: PathBuf,
        #[arg(long, default_value = "results/exp2")]
        out: PathBuf,
    },
    /// Render place fields or a reward map of one scale as a bitmap.
    Render {
        what: RenderKind,
        #[arg(long)]
        snapshot: PathBuf,
        /// Scale index or name.
        #[arg(long)]
        scale: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 50)]
        res: usize,
        /// Single place cell to render; the population maximum otherwise.
        #[arg(long)]
        cell: Option<usize>,
    },
    /// Per-strategy mean, SEM and one-way ANOVA of a results table.
    Stats { results: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderKind {
    Placefields,
    Rewardmap,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Map {
            env,
            config,
            steps,
            seed,
            out,
        } => map(&env, &config, steps, seed, &out),
        Command::Seek {
            env,
            snapshot,
            strategy,
            learn,
            max_steps,
            seed,
            log,
            out,
        } => seek(&env, &snapshot, &strategy, learn, max_steps, seed, log.as_deref(), out.as_deref()),
        Command::Exp1 { config, out } => exp1(&config, &out),
        Command::Exp2 { config, out } => exp2(&config, &out),
        Command::Render {
            what,
            snapshot,
            scale,
            out,
            res,
            cell,
        } => render(what, &snapshot, &scale, &out, res, cell),
        Command::Stats { results } => stats(&results),
    }
}

fn load_env(path: &Path) -> Result<EnvironmentSpec> {
    load_environment(path).with_context(|| format!("loading arena {}", path.display()))
}

fn map(env_path: &Path, config: &Path, steps: u64, seed: u64, out: &Path) -> Result<()> {
    let cfg = Config::load(config).with_context(|| format!("loading {}", config.display()))?;
    let env = load_env(env_path)?;
    let stacks = run_mapping_phase(&cfg.model, &env, steps, seed)?;
    let snapshot = Snapshot {
        model: cfg.model,
        env,
        stacks,
    };
    snapshot.save(out)?;
    println!("mapped {steps} steps; snapshot {} ({})", out.display(), snapshot.hash());
    Ok(())
}

fn strategy_for(model: &placenav::config::ModelConfig, name: &str) -> Result<StrategySpec> {
    if name == "multiscale" {
        return Ok(StrategySpec::all_scales(model));
    }
    match model.scale_index(name) {
        Some(k) => Ok(StrategySpec {
            name: name.to_string(),
            scales: vec![k],
        }),
        None => bail!("unknown strategy {name}"),
    }
}

#[allow(clippy::too_many_arguments)]
fn seek(
    env_path: &Path,
    snapshot_path: &Path,
    strategy: &str,
    learn: bool,
    max_steps: u64,
    seed: u64,
    log: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let env = load_env(env_path)?;
    let mut snapshot = Snapshot::load(snapshot_path)?;
    let spec = strategy_for(&snapshot.model, strategy)?;
    let model = snapshot.model.clone();
    let r = run_goal_seeking(
        &mut snapshot.stacks,
        &env,
        &model,
        &spec,
        max_steps,
        learn,
        seed,
        log.is_some(),
    );
    println!(
        "{strategy}: {} steps, reached goal {}, explored {} steps",
        r.steps, r.reached_goal, r.explore_steps
    );
    if let Some(path) = log {
        let mut w = csv::Writer::from_path(path)?;
        for row in &r.log {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    if let Some(path) = out {
        snapshot.env = env;
        snapshot.save(path)?;
    }
    Ok(())
}

fn print_summary(records: &[placenav::harness::TrialRecord]) -> Result<()> {
    let groups = step_counts_by_strategy(records);
    let names: Vec<&str> = groups.iter().map(|(n, _)| n.as_str()).collect();
    let values: Vec<Vec<f64>> = groups.iter().map(|(_, v)| v.clone()).collect();
    let summary = summarize(&values)?;
    for (name, g) in names.iter().zip(&summary.groups) {
        println!("{name:>12}: n {:>4} mean {:>9.1} sem {:>8.1}", g.n, g.mean, g.sem);
    }
    match (summary.f, summary.p) {
        (Some(f), Some(p)) => println!(
            "ANOVA F({}, {}) = {f:.3}, p = {p:.3e}",
            summary.df_between, summary.df_within
        ),
        _ => println!("ANOVA undefined: no within-group variance"),
    }
    Ok(())
}

fn exp1(config: &Path, out: &Path) -> Result<()> {
    let cfg = Config::load(config).with_context(|| format!("loading {}", config.display()))?;
    let envs = cfg
        .experiment1
        .environments
        .iter()
        .map(|e| load_env(&Config::resolve(config, e)))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(out)?;
    let results = run_experiment1(&cfg, &envs)?;
    let mut all = Vec::new();
    for res in &results {
        let env = &res.snapshot.env;
        res.snapshot.save(out.join(format!("{}.snapshot", env.name)))?;
        println!("== {} (learning episode {} steps)", env.name, res.learning.steps);
        print_summary(&res.records)?;
        all.extend(res.records.iter().cloned());
    }
    save_records(out.join("records.csv"), &all)?;
    println!("wrote {}", out.join("records.csv").display());
    Ok(())
}

fn exp2(config: &Path, out: &Path) -> Result<()> {
    let cfg = Config::load(config).with_context(|| format!("loading {}", config.display()))?;
    let env = load_env(&Config::resolve(config, &cfg.experiment2.environment))?;
    fs::create_dir_all(out)?;
    let res = run_experiment2(&cfg, &env);
    save_records(out.join("records.csv"), &res.records)?;
    let mut w = csv::Writer::from_path(out.join("delta_steps.csv"))?;
    w.write_record(["strategy", "index", "delta_steps"])?;
    for (name, deltas) in &res.delta_steps {
        for (i, d) in deltas.iter().enumerate() {
            w.write_record([name.clone(), i.to_string(), d.to_string()])?;
        }
    }
    w.flush()?;
    let from = cfg.experiment2.skip_episodes;
    println!("converged step counts (episodes {from}..):");
    for s in &cfg.strategies {
        let g = converged_summary(&res.records, &s.name, from);
        println!("{:>12}: mean {:>9.1} sem {:>8.1}", s.name, g.mean, g.sem);
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn render(
    what: RenderKind,
    snapshot_path: &Path,
    scale: &str,
    out: &Path,
    res: usize,
    cell: Option<usize>,
) -> Result<()> {
    let snapshot = Snapshot::load(snapshot_path)?;
    let k = match scale.parse::<usize>() {
        Ok(k) => k,
        Err(_) => snapshot
            .model
            .scale_index(scale)
            .with_context(|| format!("unknown scale {scale}"))?,
    };
    let stack = snapshot
        .stacks
        .get(k)
        .with_context(|| format!("snapshot has {} scales", snapshot.stacks.len()))?;
    let env = &snapshot.env;
    let scans = grid_scans(env, &snapshot.model, res);
    let sample = sample_fields(stack, env, &scans, res);
    let grid = match (what, cell) {
        (RenderKind::Rewardmap, _) => sample.reward_map(stack),
        (RenderKind::Placefields, Some(i)) => {
            if i >= sample.n_pc {
                bail!("scale {} has {} place cells", stack.name, sample.n_pc);
            }
            sample.field_of(i)
        }
        (RenderKind::Placefields, None) => FieldGrid {
            res,
            width: env.width,
            height: env.height,
            values: sample
                .rates
                .iter()
                .map(|r| r.iter().copied().fold(0.0, f64::max))
                .collect(),
        },
    };
    grid.render(out)?;
    println!(
        "wrote {} ({res}×{res}, min {:.4}, max {:.4})",
        out.display(),
        grid.min(),
        grid.max()
    );
    Ok(())
}

fn stats(path: &Path) -> Result<()> {
    let records = load_records(path).with_context(|| format!("reading {}", path.display()))?;
    print_summary(&records)
}
