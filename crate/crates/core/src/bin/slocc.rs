use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use slocc_core::catalog;
use slocc_core::optimize::{self, AnnealConfig, SearchConfig};
use slocc_core::scheme::{matching_total, parse_spins, perfect_matchings};
use slocc_core::slocc::{fidelity, genuine_threshold, make_target, post_select, TargetClass};
use slocc_core::verify::{self, sig12};
use slocc_core::{Error, Scheme, Statistics};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VANISHING: u8 = 3;

#[derive(Parser)]
#[command(name = "slocc", version, about = "Entangled states of identical particles under sLOCC post-selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Post-select a scheme file and report probability, fidelities and the output state.
    Simulate {
        file: PathBuf,
        /// Target class to compare against; repeatable.
        #[arg(long = "target")]
        targets: Vec<TargetClass>,
    },
    /// Write a named catalog scheme as JSON.
    Catalog {
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        stats: Statistics,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every catalog entry against its reference values.
    Verify,
    /// Sample the fidelity/probability trade-off and write it as CSV.
    Tradeoff {
        #[arg(long)]
        class: TargetClass,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        stats: Statistics,
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Annealing steps per fidelity bin after sampling; 0 keeps raw sample maxima.
        #[arg(long, default_value_t = AnnealConfig::default().steps)]
        anneal_steps: u64,
    },
    /// List the perfect matchings behind one spin configuration's amplitude.
    Matchings {
        file: PathBuf,
        #[arg(long)]
        sigma: String,
    },
}

/// Failure with the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::VanishingState) { EXIT_VANISHING } else { EXIT_USAGE };
        Failure(code, e.to_string())
    }
}

fn load_scheme(path: &Path) -> Result<Scheme, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    Scheme::from_json(&text).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn simulate(file: &Path, targets: &[TargetClass]) -> Result<(), Failure> {
    let s = load_scheme(file)?;
    let n = s.n();
    let goals = targets.iter().map(|&c| make_target(c, n)).collect::<Result<Vec<_>, _>>()?;
    println!("scheme: {}", s.label);
    println!("n: {n}");
    println!("statistics: {}", s.stats());
    match post_select(&s) {
        Ok(out) => {
            println!("probability: {}", sig12(out.probability));
            for t in &goals {
                println!("fidelity[{}]: {}", t.class, sig12(fidelity(&out, t)?));
            }
            println!("state:");
            println!("{}", out.to_json());
            Ok(())
        }
        Err(Error::VanishingState) => {
            println!("probability: {}", sig12(0.0));
            for t in &goals {
                println!("fidelity[{}]: {}", t.class, sig12(0.0));
            }
            Err(Error::VanishingState.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn write_catalog(name: &str, n: usize, stats: Statistics, out: &Path) -> Result<(), Failure> {
    let s = catalog::build(name, n, stats)?;
    fs::write(out, s.to_json()).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", out.display())))?;
    println!("wrote {} ({})", out.display(), s.label);
    Ok(())
}

fn run_verify() -> Result<(), Failure> {
    let rows = verify::run(&catalog::entries())?;
    for r in &rows {
        println!("{r}");
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    println!("{} rows, {} passed, {} failed", rows.len(), rows.len() - failed, failed);
    if failed > 0 {
        return Err(Failure(EXIT_VERIFY_FAIL, format!("{failed} verification rows failed")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn tradeoff(
    class: TargetClass,
    n: usize,
    stats: Statistics,
    threshold: f64,
    samples: u64,
    seed: u64,
    out: &Path,
    anneal_steps: u64,
) -> Result<(), Failure> {
    let t = optimize::templates_for(class, n, stats)?;
    let target = make_target(class, n)?;
    let mut cfg = SearchConfig::new(samples, seed);
    if anneal_steps > 0 {
        cfg.anneal = Some(AnnealConfig { steps: anneal_steps, ..Default::default() });
    }
    if let Ok(g) = genuine_threshold(class, n) {
        if threshold < g {
            eprintln!("warning: threshold {} is below the genuine-entanglement bound {}", sig12(threshold), sig12(g));
        }
    }
    let points = match optimize::sample_tradeoff(&t, &target, threshold, &cfg) {
        Ok(p) => p,
        Err(Error::EmptyResult) => {
            eprintln!("warning: no sample reached fidelity {}", sig12(threshold));
            Vec::new()
        }
        Err(e) => return Err(e.into()),
    };
    let file = fs::File::create(out).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", out.display())))?;
    optimize::write_tradeoff_csv(std::io::BufWriter::new(file), &t, &points)?;
    if let Some(g) = optimize::global_max(&points) {
        println!(
            "max probability {} in fidelity bin [{}, {}] (F = {})",
            sig12(g.max_probability),
            sig12(g.fidelity_bin_low),
            sig12(g.fidelity_bin_high),
            sig12(g.fidelity)
        );
    }
    println!("wrote {} bins to {}", points.len(), out.display());
    Ok(())
}

fn complex_str(z: slocc_core::Amplitude) -> String {
    format!("{}{}{}i", sig12(z.re), if z.im < 0.0 { "-" } else { "+" }, sig12(z.im.abs()))
}

fn matchings(file: &Path, sigma: &str) -> Result<(), Failure> {
    let s = load_scheme(file)?;
    let spins = parse_spins(sigma)?;
    let list = perfect_matchings(&s, &spins)?;
    println!("sigma: {sigma}");
    for m in &list {
        let perm: Vec<String> = m.perm.iter().map(|p| p.to_string()).collect();
        println!("regions->particles [{}]  product {}  sign {:+}", perm.join(" "), complex_str(m.product), m.sign);
    }
    let total = matching_total(&list);
    println!("matchings: {}", list.len());
    println!("total: {}", complex_str(total));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { file, targets } => simulate(&file, &targets),
        Command::Catalog { name, n, stats, out } => write_catalog(&name, n, stats, &out),
        Command::Verify => run_verify(),
        Command::Tradeoff { class, n, stats, threshold, samples, seed, out, anneal_steps } => {
            tradeoff(class, n, stats, threshold, samples, seed, &out, anneal_steps)
        }
        Command::Matchings { file, sigma } => matchings(&file, &sigma),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
