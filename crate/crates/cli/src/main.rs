//! `segcover`: solve, check and generate segment covering instances.
//!
//! Exit codes: 0 success, 1 infeasible, 2 parse or usage error, 3 search
//! budget exhausted.

mod run;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segcover::io::{
    gen_random, gen_strip_arb, parse_cover, parse_graph, parse_instance, serialize_cover, serialize_instance,
    vertex_cover_reduction, ClassTag, CoverFile, Instance, Mode,
};
use segcover::{covers, verify_cover};

use run::{digest, run, Algorithm, Failure, Options, RunReport};

#[derive(Parser)]
#[command(name = "segcover", version, about = "Cover line segments with axis-parallel unit squares")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct SolveFlags {
    /// Shift parameter for hv1-ptas.
    #[arg(long)]
    k: Option<usize>,
    /// Branch-and-bound node budget.
    #[arg(long, default_value_t = segcover::exact::DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Let the exact solver run on more than 16 segments.
    #[arg(long)]
    force: bool,
}

impl SolveFlags {
    fn options(&self) -> Options {
        Options { k: self.k, budget: self.budget, force: self.force }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and write the cover.
    Solve {
        #[arg(long)]
        alg: Algorithm,
        #[arg(short, long)]
        input: PathBuf,
        /// Cover file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Stage trace and inequality checks of discrete-16, as TSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Also solve exactly and report the ratio.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Check a cover file against an instance.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        cover: PathBuf,
    },
    /// Generate a seeded random instance.
    Gen {
        /// h1us, h1, hv1, arb, discrete or strip-arb.
        #[arg(long)]
        class: String,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinates lie in [0, bbox].
        #[arg(long, default_value_t = 10)]
        bbox: i64,
        /// Number of squares for discrete instances (default: n).
        #[arg(short, long)]
        m: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the discrete instance encoding a vertex cover problem.
    ReduceVc {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run several algorithms on one instance and tabulate the results.
    Compare {
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', required = true)]
        algs: Vec<Algorithm>,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Time algorithms on generated instances of growing size.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        algs: Vec<Algorithm>,
        #[arg(long)]
        class: ClassTag,
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        flags: SolveFlags,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    res.map_err(Failure::Usage)
}

fn exact_size(inst: &Instance, opts: &Options) -> Result<usize, Failure> {
    Ok(run(Algorithm::Exact, inst, opts)?.cover.len())
}

fn report(alg: Algorithm, inst: &Instance, size: usize, elapsed: std::time::Duration, exact: Option<usize>) -> RunReport {
    RunReport { algorithm: alg.name().into(), digest: digest(inst), size, time_ms: elapsed.as_secs_f64() * 1e3, exact }
}

fn cmd_solve(
    alg: Algorithm,
    input: &Path,
    output: Option<&Path>,
    trace: Option<&Path>,
    with_exact: bool,
    opts: &Options,
) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let outcome = run(alg, &inst, opts)?;
    write_out(output, &serialize_cover(&CoverFile::from_cover(alg.name(), &outcome.cover)))?;
    if let Some(path) = trace {
        let text = match &outcome.discrete {
            Some(sol) => sol.trace_tsv(),
            None => return Err(Failure::Usage("--trace is only produced by discrete-16".into())),
        };
        fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(sol) = &outcome.discrete {
        for c in sol.checks.iter().filter(|c| !c.holds) {
            eprintln!("warning: inequality {} fails: {} > {}", c.name, c.lhs, c.rhs);
        }
    }
    let exact = if with_exact { Some(exact_size(&inst, opts)?) } else { None };
    eprintln!("{}", RunReport::HEADER);
    eprintln!("{}", report(alg, &inst, outcome.cover.len(), outcome.elapsed, exact));
    Ok(())
}

fn cmd_verify(input: &Path, cover_path: &Path) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let file = parse_cover(&read(cover_path)?).map_err(|e| Failure::Usage(format!("{}: {e}", cover_path.display())))?;
    let mut problems = Vec::new();
    if inst.mode == Mode::Discrete {
        for (j, t) in file.squares.iter().enumerate() {
            if !inst.squares.contains(t) {
                problems.push(format!("square {j} at ({}, {}) is not an instance square", t.x, t.y));
            }
        }
    }
    let mut assigned = vec![false; inst.segments.len()];
    for &(k, t) in &file.assignments {
        let Some(seg) = inst.segments.get(k) else {
            problems.push(format!("ASSIGN names segment {k}, but the instance has {}", inst.segments.len()));
            continue;
        };
        if std::mem::replace(&mut assigned[k], true) {
            problems.push(format!("segment {k} is assigned twice"));
        } else if !covers(&file.squares[t], seg) {
            problems.push(format!("segment {k} is assigned square {t}, which does not cover it"));
        }
    }
    for (k, seg) in inst.segments.iter().enumerate() {
        if !file.squares.iter().any(|t| covers(t, seg)) {
            problems.push(format!("segment {k} is not covered by any square"));
        } else if !assigned[k] {
            problems.push(format!("segment {k} has no ASSIGN line"));
        }
    }
    if problems.is_empty() {
        let cover = file.to_cover(inst.segments.len()).map_err(Failure::Infeasible)?;
        let rep = verify_cover(&inst.segments, &cover)?;
        println!("feasible\t{}\tduplicates\t{}", rep.size, rep.duplicate_squares);
        return Ok(());
    }
    for p in &problems {
        eprintln!("{p}");
    }
    Err(Failure::Infeasible(format!("cover is infeasible ({} problems)", problems.len())))
}

fn cmd_gen(class: &str, n: usize, seed: u64, bbox: i64, m: Option<usize>, output: Option<&Path>) -> Result<(), Failure> {
    let inst = if class == "strip-arb" {
        gen_strip_arb(n, seed, bbox)
    } else {
        let class: ClassTag = class.parse().map_err(Failure::Usage)?;
        gen_random(class, n, seed, bbox, m)
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    write_out(output, &serialize_instance(&inst))
}

fn cmd_reduce_vc(graph: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let g = parse_graph(&read(graph)?).map_err(|e| Failure::Usage(format!("{}: {e}", graph.display())))?;
    write_out(output, &serialize_instance(&vertex_cover_reduction(&g)))
}

fn cmd_compare(algs: &[Algorithm], input: &Path, with_exact: bool, opts: &Options) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let exact = if with_exact { Some(exact_size(&inst, opts)?) } else { None };
    println!("{}", RunReport::HEADER);
    for &alg in algs {
        let outcome = run(alg, &inst, opts)?;
        println!("{}", report(alg, &inst, outcome.cover.len(), outcome.elapsed, exact));
    }
    Ok(())
}

fn cmd_bench(algs: &[Algorithm], class: ClassTag, sizes: &[usize], seed: u64, opts: &Options) -> Result<(), Failure> {
    println!("alg\tclass\tn\tsize\ttime_ms");
    for &n in sizes {
        let bbox = (n as i64 / 10).max(10);
        let inst = gen_random(class, n, seed, bbox, None).map_err(|e| Failure::Usage(e.to_string()))?;
        for &alg in algs {
            let outcome = run(alg, &inst, opts)?;
            println!("{alg}\t{class}\t{n}\t{}\t{:.3}", outcome.cover.len(), outcome.elapsed.as_secs_f64() * 1e3);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Solve { alg, input, output, trace, exact, flags } => {
            cmd_solve(*alg, input, output.as_deref(), trace.as_deref(), *exact, &flags.options())
        }
        Command::Verify { input, cover } => cmd_verify(input, cover),
        Command::Gen { class, n, seed, bbox, m, output } => cmd_gen(class, *n, *seed, *bbox, *m, output.as_deref()),
        Command::ReduceVc { graph, output } => cmd_reduce_vc(graph, output.as_deref()),
        Command::Compare { algs, input, exact, flags } => cmd_compare(algs, input, *exact, &flags.options()),
        Command::Bench { algs, class, sizes, seed, flags } => cmd_bench(algs, *class, sizes, *seed, &flags.options()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
