use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use patail::bi_embedding::simulate_embedded_degrees;
use patail::degree_law::{expected_tail_counts, TheoreticalLaw};
use patail::experiments::{consistency_sweep, run_to_dir, write_consistency_csv, ExperimentConfig};
use patail::pa_graph::{read_degrees, write_degrees, write_edges_csv};
use patail::rng::mix_seed;
use patail::tail_estimation::{
    alpha_hat, hill, kn_default, ks_distance, min_distance_select_with, ScanOptions, SelectionRule, DEFAULT_K_MIN,
};
use patail::{grow, Error, Model, PaParams, SortedSample};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "patail", version, about = "Preferential attachment graphs and tail-index estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one graph and write its edges and/or degrees
    Generate {
        #[arg(long)]
        model: Model,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// edge list CSV (`step,source,target`)
        #[arg(long)]
        edges: Option<PathBuf>,
        /// degree file, one integer per line; stdout if neither output is given
        #[arg(long)]
        degrees: Option<PathBuf>,
    },
    /// Limiting degree law, and optionally the expected tail-count table
    Theory {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        kmax: u64,
        /// `k,p_k,p_gt_k` output; stdout by default
        #[arg(long)]
        out: Option<PathBuf>,
        /// write `m,k,mu_gt_k,eps_gt_k` for m = 1..=n here (needs --model and --n)
        #[arg(long, requires_all = ["model", "n"])]
        counts: Option<PathBuf>,
        #[arg(long)]
        model: Option<Model>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Estimate the tail index of a degree file ("-" reads stdin)
    Estimate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Mindist)]
        method: Method,
        /// number of upper order statistics for --method hill
        #[arg(long, conflicts_with = "kn_auto")]
        k: Option<usize>,
        /// use k = ceil(sqrt(n log n)) for --method hill
        #[arg(long)]
        kn_auto: bool,
        #[arg(long, default_value_t = DEFAULT_K_MIN)]
        kmin: usize,
        /// threshold fitting rule for --method mindist
        #[arg(long, value_enum, default_value_t = Rule::Plfit)]
        rule: Rule,
        /// write the scanned `k,hill,alpha_hat,d` curve here
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Embedded continuous-time runs: `rep,T_n,w_hat,sigma_hat_1,max_scaled_degree`
    Embed {
        #[arg(long)]
        model: Model,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a replication sweep from a TOML config
    Replicate {
        config: PathBuf,
        /// overrides `output_dir` from the config
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// overrides `workers` from the config
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Mean Hill estimate at k_n on Model A graphs
    Consistency {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,1")]
        deltas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "10000,100000")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Hill,
    Mindist,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Plfit,
    Hill,
}

impl From<Rule> for SelectionRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Plfit => SelectionRule::Plfit,
            Rule::Hill => SelectionRule::Hill,
        }
    }
}

#[derive(Serialize)]
struct Estimate {
    n: usize,
    k: usize,
    alpha_hat: f64,
    d_k: f64,
}

fn output(path: Option<&Path>) -> patail::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn input(path: &Path) -> patail::Result<Box<dyn BufRead>> {
    Ok(if path == Path::new("-") {
        Box::new(BufReader::new(io::stdin().lock()))
    } else {
        Box::new(BufReader::new(File::open(path)?))
    })
}

fn run(cli: Cli) -> patail::Result<()> {
    match cli.command {
        Command::Generate {
            model,
            delta,
            n,
            seed,
            edges,
            degrees,
        } => {
            let g = grow(&PaParams::new(model, delta, n)?, seed)?;
            if let Some(p) = &edges {
                write_edges_csv(&g, output(Some(p))?)?;
            }
            if degrees.is_some() || edges.is_none() {
                write_degrees(g.degrees(), output(degrees.as_deref())?)?;
            }
        }
        Command::Theory {
            delta,
            kmax,
            out,
            counts,
            model,
            n,
        } => {
            let law = TheoreticalLaw::new(delta)?;
            let mut w = output(out.as_deref())?;
            writeln!(w, "k,p_k,p_gt_k")?;
            for k in 1..=kmax {
                writeln!(w, "{k},{},{}", law.pmf(k), law.tail(k))?;
            }
            w.flush()?;
            if let (Some(path), Some(model), Some(n)) = (counts, model, n) {
                let table = expected_tail_counts(model, delta, n, kmax as usize)?;
                let mut w = output(Some(&path))?;
                writeln!(w, "m,k,mu_gt_k,eps_gt_k")?;
                for m in 1..=n {
                    for k in 0..=kmax as usize {
                        writeln!(w, "{m},{k},{},{}", table.mu_gt(m, k), table.eps_gt(m, k))?;
                    }
                }
                w.flush()?;
            }
        }
        Command::Estimate {
            input: path,
            method,
            k,
            kn_auto,
            kmin,
            rule,
            curve,
        } => {
            let degrees = read_degrees(input(&path)?)?;
            let sample = SortedSample::from_degrees(&degrees)?;
            let n = sample.len();
            let est = match method {
                Method::Hill => {
                    let k = match (k, kn_auto) {
                        (Some(k), _) => k,
                        (None, true) => kn_default(n),
                        (None, false) => return Err(Error::Config("--method hill needs --k or --kn-auto".into())),
                    };
                    let est = Estimate {
                        n,
                        k,
                        alpha_hat: alpha_hat(&sample, k)?,
                        d_k: ks_distance(&sample, k)?,
                    };
                    if let Some(p) = &curve {
                        let mut w = output(Some(p))?;
                        writeln!(w, "k,hill,alpha_hat,d")?;
                        writeln!(w, "{k},{},{},{}", hill(&sample, k)?, est.alpha_hat, est.d_k)?;
                        w.flush()?;
                    }
                    est
                }
                Method::Mindist => {
                    let opts = ScanOptions {
                        k_min: kmin,
                        k_max: None,
                        rule: rule.into(),
                    };
                    let fit = min_distance_select_with(&sample, &opts)?;
                    if let Some(p) = &curve {
                        let mut w = output(Some(p))?;
                        writeln!(w, "k,hill,alpha_hat,d")?;
                        for c in &fit.curve {
                            writeln!(w, "{},{},{},{}", c.k, c.hill, c.alpha_hat, c.d)?;
                        }
                        w.flush()?;
                    }
                    Estimate {
                        n,
                        k: fit.k_star,
                        alpha_hat: fit.alpha_hat,
                        d_k: fit.d_min,
                    }
                }
            };
            let json = serde_json::to_string(&est).map_err(|e| Error::Io(e.to_string()))?;
            println!("{json}");
        }
        Command::Embed {
            model,
            delta,
            n,
            reps,
            seed,
            out,
        } => {
            let mut w = output(out.as_deref())?;
            writeln!(w, "rep,T_n,w_hat,sigma_hat_1,max_scaled_degree")?;
            for rep in 0..reps {
                let tr = simulate_embedded_degrees(model, delta, n, mix_seed(seed, rep as u64))?;
                writeln!(
                    w,
                    "{rep},{},{},{},{}",
                    tr.terminal_time(),
                    tr.w_hat(),
                    tr.sigma_hat_1(),
                    tr.max_scaled_degree()
                )?;
            }
            w.flush()?;
        }
        Command::Replicate {
            config,
            output_dir,
            workers,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(d) = output_dir {
                cfg.output_dir = d;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let table = run_to_dir(&cfg)?;
            for c in &table.summary {
                println!(
                    "{} delta={} n={}: mean alpha_hat {:.4} (se {:.4}, {} fits, {} failed)",
                    c.model, c.delta, c.n, c.mean_alpha_hat, c.se, c.reps, c.failures
                );
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Consistency {
            deltas,
            ns,
            reps,
            seed,
            out,
        } => {
            let cells = consistency_sweep(&deltas, &ns, reps, seed)?;
            let mut w = output(out.as_deref())?;
            write_consistency_csv(&cells, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("patail: {e}");
            match e {
                Error::Config(_)
                | Error::InvalidDelta(_)
                | Error::InvalidSize(_)
                | Error::InvalidParameter(_)
                | Error::KOutOfRange { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
