//! `vcut` — global minimum vertex-cut solver CLI.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use vcut_core::cut::{brute_force_global_min_cut, GlobalCut};
use vcut_core::driver::{
    generate_instance, solve, Family, SolveOptions, SolveReport, Strategy, Verdict,
};
use vcut_core::error::Error;
use vcut_core::estimators::{
    degree_estimation, directed_heavy_degree_estimation, heavy_vertex, subgraph_oracle,
    subgraph_oracle_bulk, w_max_log2_of, DirectedCapView, OracleConfig, OracleMode,
};
use vcut_core::graph::WeightedGraph;
use vcut_core::rng::RngStream;
use vcut_core::subroutine::Mode;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_COMPLETE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "vcut", about = "Global minimum vertex-cut solver", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    M32,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Desk,
    Forced,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Gnm,
    Planted,
    Starmix,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "desk")]
        mode: ModeArg,
        /// Verify the result against the exhaustive oracle.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 64)]
        max_alg3_reps: u32,
        /// Machine-readable JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance file.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        wmax: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Planted family: light-side size (default n/4).
        #[arg(long)]
        lsize: Option<usize>,
        /// Planted family: separator size (default n/5).
        #[arg(long)]
        ssize: Option<usize>,
    },
    /// Run the solver over every instance in a directory, CSV report.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Empirical error rates of the sampled estimators.
    OracleStats {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Invariant(_) | Error::Io(_) => EXIT_PARSE,
                Error::CompleteGraph => EXIT_COMPLETE,
                Error::Infeasible(_) | Error::SizeLimit { .. } => EXIT_USAGE,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve {
            input,
            strategy,
            seed,
            mode,
            verify,
            max_alg3_reps,
            json,
        } => {
            let text = std::fs::read_to_string(&input)?;
            let g = WeightedGraph::parse(&text)?;
            let options = SolveOptions {
                strategy: match strategy {
                    StrategyArg::Auto => Strategy::Auto,
                    StrategyArg::M32 => Strategy::M32,
                },
                mode: match mode {
                    ModeArg::Desk => Mode::Desk,
                    ModeArg::Forced => Mode::Forced,
                },
                seed,
                max_alg3_reps,
                verify,
                ..SolveOptions::default()
            };
            let report = solve(&g, &options)?;
            if json {
                println!("{}", wire_json(&report));
            } else {
                print_human(&report);
            }
            if verify && report.verified != Verdict::Optimal {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            family,
            n,
            m,
            wmax,
            seed,
            out,
            lsize,
            ssize,
        } => {
            let family = match family {
                FamilyArg::Gnm => Family::Gnm,
                FamilyArg::Planted => Family::PlantedCut {
                    l_size: lsize.unwrap_or((n / 4).max(1)),
                    s_size: ssize.unwrap_or((n / 5).max(1)),
                },
                FamilyArg::Starmix => Family::StarMix,
            };
            let generated = generate_instance(n, m, wmax, family, seed)?;
            let mut text = generated.graph.to_instance_string();
            if let Some((l, s, r)) = generated.plant {
                text.push_str(&format!(
                    "c planted L={:?} S={:?} R={:?}\n",
                    ids1(&l),
                    ids1(&s),
                    ids1(&r)
                ));
            }
            std::fs::write(&out, text)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            suite,
            trials,
            seed,
            report,
            strategy,
        } => {
            let mut rows =
                vec!["instance,n,m,strategy,seed,value,opt,match,wall_ms".to_string()];
            let mut entries: Vec<PathBuf> = std::fs::read_dir(&suite)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::M32 => Strategy::M32,
            };
            for path in entries {
                let Ok(text) = std::fs::read_to_string(&path) else {
                    continue;
                };
                let Ok(g) = WeightedGraph::parse(&text) else {
                    continue;
                };
                let opt = match brute_force_global_min_cut(&g, 24) {
                    Ok(GlobalCut::Cut(c)) => Some(c.value),
                    _ => None,
                };
                for trial in 0..trials {
                    let options = SolveOptions {
                        strategy,
                        seed: seed.wrapping_add(trial),
                        ..SolveOptions::default()
                    };
                    let start = Instant::now();
                    let result = solve(&g, &options);
                    let wall = start.elapsed().as_millis();
                    let name = path.file_name().unwrap().to_string_lossy();
                    match result {
                        Ok(rep) => {
                            let (opt_s, matched) = match opt {
                                Some(o) => (o.to_string(), (rep.value == o).to_string()),
                                None => (String::new(), String::new()),
                            };
                            rows.push(format!(
                                "{name},{},{},{},{},{},{opt_s},{matched},{wall}",
                                g.n(),
                                g.m(),
                                strategy.name(),
                                options.seed,
                                rep.value
                            ));
                        }
                        Err(e) => {
                            rows.push(format!(
                                "{name},{},{},{},{},error:{e},,,{wall}",
                                g.n(),
                                g.m(),
                                strategy.name(),
                                options.seed
                            ));
                        }
                    }
                }
            }
            std::fs::write(&report, rows.join("\n") + "\n")?;
            println!("wrote {}", report.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleStats { trials, seed } => {
            oracle_stats(trials, seed);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn ids1(v: &[u32]) -> Vec<u32> {
    v.iter().map(|&x| x + 1).collect()
}

/// Wire format: fixed key order, 1-based vertex ids.
fn wire_json(report: &SolveReport) -> String {
    let verified = match &report.verified {
        Verdict::Optimal => "optimal".to_string(),
        Verdict::ValidButSuboptimal { gap } => format!("valid-but-suboptimal({gap})"),
        Verdict::Invalid => "invalid".to_string(),
        Verdict::Unknown => "unknown".to_string(),
    };
    format!(
        "{{\"value\": {}, \"L\": {:?}, \"S\": {:?}, \"R\": {:?}, \"algorithm\": {}, \"seed\": {}, \"verified\": {}}}",
        report.value,
        ids1(&report.cut.l),
        ids1(&report.cut.s),
        ids1(&report.cut.r),
        serde_json::to_string(&report.algorithm).unwrap(),
        report.seed,
        serde_json::to_string(&verified).unwrap(),
    )
}

fn print_human(report: &SolveReport) {
    println!("value      {}", report.value);
    println!("L          {:?}", ids1(&report.cut.l));
    println!("S          {:?}", ids1(&report.cut.s));
    println!("R          {:?}", ids1(&report.cut.r));
    println!("algorithm  {}", report.algorithm);
    println!("seed       {}", report.seed);
    println!("mode       {}", report.mode);
    let verified = match &report.verified {
        Verdict::Optimal => "optimal".to_string(),
        Verdict::ValidButSuboptimal { gap } => format!("valid-but-suboptimal({gap})"),
        Verdict::Invalid => "invalid".to_string(),
        Verdict::Unknown => "unknown".to_string(),
    };
    println!("verified   {verified}");
    for (stage, ms) in &report.timings_ms {
        println!("{stage:<10} {ms}");
    }
}

struct ArcList {
    n: usize,
    arcs: Vec<(u32, u32, u128)>,
}

impl DirectedCapView for ArcList {
    fn node_count(&self) -> usize {
        self.n
    }
    fn out_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)> {
        self.arcs
            .iter()
            .filter(|&&(f, _, c)| f == v && c >= min_cap)
            .map(|&(_, t, c)| (t, c))
            .collect()
    }
    fn in_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)> {
        self.arcs
            .iter()
            .filter(|&&(_, t, c)| t == v && c >= min_cap)
            .map(|&(f, _, c)| (f, c))
            .collect()
    }
}

/// Measures err-event frequencies of the sampled estimators against exact
/// recounts, at the reference thresholds.
fn oracle_stats(trials: u64, seed: u64) {
    let root = RngStream::new(seed);
    let mut deg_err = 0u64;
    let mut dir_err = 0u64;
    let mut heavy_err = 0u64;
    let mut bulk_mismatch = 0u64;

    use rand::Rng;
    for trial in 0..trials {
        let stream = root.child(trial);
        let mut rng = stream.rng();
        let n = rng.gen_range(8..=20usize);
        let gen = generate_instance(
            n,
            rng.gen_range(n..(n * (n - 1) / 2)),
            rng.gen_range(1..=16),
            Family::Gnm,
            trial,
        );
        let Ok(gen) = gen else { continue };
        let g = gen.graph;
        let z: Vec<u32> = (0..n as u32).filter(|_| rng.gen::<bool>()).collect();
        let z_prime: Vec<u32> = (0..n as u32).collect();
        let tau = rng.gen_range(1..=4) as f64;
        let w_log2 = w_max_log2_of(&g);
        let l = (n as f64).log2() * w_log2;

        // Undirected degree estimation err events.
        let a = degree_estimation(&g, &z, &z_prime, tau, w_log2, &stream.child(1), 1.0);
        let exact = |v: u32| -> usize {
            g.neighbors(v).iter().filter(|u| z.contains(u)).count()
        };
        let err = a.iter().any(|&v| (exact(v) as f64) < tau)
            || z_prime.iter().any(|&v| {
                !a.contains(&v) && exact(v) as f64 >= 1000.0 * tau * l
            });
        deg_err += u64::from(err);

        // Directed variant over the split-like arc list of g.
        let arcs: Vec<(u32, u32, u128)> = g
            .edges()
            .iter()
            .flat_map(|&(u, v)| {
                [
                    (u, v, g.weight(v) as u128 + 1),
                    (v, u, g.weight(u) as u128 + 1),
                ]
            })
            .collect();
        let net = ArcList { n, arcs };
        let c_star = 4u128;
        let dir = directed_heavy_degree_estimation(
            &net,
            &z,
            &z_prime,
            tau,
            c_star,
            w_log2,
            &stream.child(2),
            1.0,
        );
        let exact_dir = |v: u32| -> usize {
            net.out_arcs_at_least(v, c_star)
                .iter()
                .filter(|(u, _)| z_prime.contains(u))
                .count()
        };
        let err = dir.iter().any(|&v| (exact_dir(v) as f64) < tau)
            || z.iter().any(|&v| {
                !dir.contains(&v) && exact_dir(v) as f64 >= 1000.0 * tau * l
            });
        dir_err += u64::from(err);

        // Heavy vertex: a miss only errs above the heavy threshold.
        let z_p: Vec<u32> = z_prime.iter().copied().filter(|v| !z.contains(v)).collect();
        let witness = heavy_vertex(
            &net,
            &z,
            &z_p,
            tau as u64,
            c_star,
            w_log2,
            &stream.child(3),
            1.0,
        );
        let exact_in = |v: u32| -> usize {
            net.in_arcs_at_least(v, c_star)
                .iter()
                .filter(|(u, _)| z.contains(u))
                .count()
        };
        let err = match witness {
            Some(w) => {
                w.sources.len() < tau as usize
                    || w.sources.iter().any(|&u| {
                        !net.out_arcs_at_least(u, c_star)
                            .iter()
                            .any(|&(t, _)| t == w.vertex)
                    })
            }
            None => z_p
                .iter()
                .any(|&v| exact_in(v) as f64 >= 1000.0 * tau * l),
        };
        heavy_err += u64::from(err);

        // Bulk oracle low-side edge lists must match per-query calls.
        let config = OracleConfig {
            mode: OracleMode::Exact,
            ..Default::default()
        };
        let queries = vec![z.clone(), z_p.clone()];
        let bulk = subgraph_oracle_bulk(&g, &queries, 0.2, &stream.child(4), &config);
        for (i, q) in queries.iter().enumerate() {
            let single = subgraph_oracle(&g, q, 0.2, &stream.child(4).child(i as u64), &config);
            if single.e_prime != bulk.responses[i].e_prime {
                bulk_mismatch += 1;
            }
        }
    }

    let pct = |x: u64| 100.0 * x as f64 / trials.max(1) as f64;
    println!("estimator            err-events  rate");
    println!("degree-estimation    {deg_err:>10}  {:.3}%", pct(deg_err));
    println!("directed-variant     {dir_err:>10}  {:.3}%", pct(dir_err));
    println!("heavy-vertex         {heavy_err:>10}  {:.3}%", pct(heavy_err));
    println!("bulk-e-prime-diffs   {bulk_mismatch:>10}  {:.3}%", pct(bulk_mismatch));
}
