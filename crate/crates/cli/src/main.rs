use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sp_equitable::generators::{gen_family, gen_random_k4_free, Family};
use sp_equitable::io::{coloring_from_json, coloring_to_json, graph_to_dot, parse_edge_list, write_edge_list};
use sp_equitable::oracle::{enumerate_connected_graphs, oracle_equitable};
use sp_equitable::solver::trace::to_json_lines;
use sp_equitable::solver::{min_colors, solve_traced, SolveOptions, TraceRecord};
use sp_equitable::sp_tree::is_normal_form;
use sp_equitable::{decompose, is_equitable, normalize, Error, Graph};

/// Instances up to this size are cross-checked against the exact oracle.
const ORACLE_MAX_N: usize = 7;

#[derive(Parser)]
#[command(name = "spcolor", version, about = "Equitable colorings of K4-minor-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color a graph equitably with k colors.
    Color {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: u32,
        /// Coloring JSON destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the reduction trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Verify that a coloring is a proper equitable k-coloring.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Write the SP-decomposition tree of a connected graph.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        normalize: bool,
        /// Emit DOT instead of JSON.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate a gadget family member or a random K4-minor-free graph.
    Gen {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        family: Option<String>,
        /// Family size parameter.
        #[arg(long, default_value_t = 1)]
        size: u32,
        /// Vertex count of a random instance.
        #[arg(long, requires = "seed")]
        random: Option<u32>,
        /// Probability of dropping each edge of the random SP graph.
        #[arg(long, default_value_t = 0.0)]
        drop: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Write DOT instead of an edge list.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide equitable k-colorability by exhaustive search.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Solve and verify many instances.
    Stress {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 7)]
        max_n: u32,
        #[arg(long, default_value_t = 100)]
        iters: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.1)]
        drop: f64,
        #[arg(long, value_enum, default_value_t = KPolicy::Tight)]
        k_policy: KPolicy,
        /// Where failing instances and traces are written.
        #[arg(long, default_value = "stress-dumps")]
        dump_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum KPolicy {
    /// Only the smallest admissible k.
    Tight,
    /// Every k from the bound up to the vertex count.
    All,
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => 3,
            Error::PartialColoring(_) | Error::ColorOutOfRange(..) => 1,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, body: &str) -> CmdResult {
    fs::write(path, body).map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, body: &str) -> CmdResult {
    match path {
        Some(p) => write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(parse_edge_list(&read(path)?)?)
}

fn write_trace(path: &Path, trace: &[TraceRecord]) -> CmdResult {
    write(path, &to_json_lines(trace)?)
}

fn color(input: &Path, k: u32, output: Option<&Path>, trace: Option<&Path>) -> CmdResult {
    let g = read_graph(input)?;
    let sol = match solve_traced(&g, k, SolveOptions::default()) {
        Ok(sol) => sol,
        Err((e @ Error::Invariant(_), partial)) => {
            let dump = trace.map(Path::to_path_buf).unwrap_or_else(|| input.with_extension("trace.jsonl"));
            write_trace(&dump, &partial)?;
            return Err(Failure::new(3, format!("{e}; trace written to {}", dump.display())));
        }
        Err((e, _)) => return Err(e.into()),
    };
    if !is_equitable(&g, &sol.coloring)? {
        return Err(Failure::new(1, "solver output failed verification"));
    }
    if let Some(p) = trace {
        write_trace(p, &sol.trace)?;
    }
    emit(output, &(coloring_to_json(&sol.coloring)? + "\n"))?;
    eprintln!("profile: {:?}", sol.coloring.class_sizes());
    Ok(())
}

fn check(input: &Path, coloring: &Path, k: u32) -> CmdResult {
    let g = read_graph(input)?;
    let c = coloring_from_json(&read(coloring)?)?;
    if c.k != k {
        return Err(Failure::new(1, format!("coloring uses k = {}, expected {k}", c.k)));
    }
    if !is_equitable(&g, &c)? {
        return Err(Failure::new(1, "coloring is not a proper equitable coloring"));
    }
    println!("ok: profile {:?}", c.class_sizes());
    Ok(())
}

fn decompose_cmd(input: &Path, norm: bool, dot: bool, output: &Path) -> CmdResult {
    let g = read_graph(input)?;
    let mut t = decompose(&g)?;
    if norm {
        t = normalize(&t)?;
        if !is_normal_form(&t) {
            return Err(Failure::new(3, "normalized tree is not in normal form"));
        }
    }
    let body = if dot { t.to_dot() } else { t.to_json()? + "\n" };
    write(output, &body)
}

#[allow(clippy::too_many_arguments)]
fn gen(
    family: Option<&str>,
    size: u32,
    random: Option<u32>,
    drop: f64,
    seed: Option<u64>,
    dot: bool,
    output: Option<&Path>,
) -> CmdResult {
    let (g, header) = match (family, random) {
        (Some(name), _) => {
            let fam: Family = name.parse()?;
            let (g, (a, b)) = gen_family(fam, size)?;
            (g, format!("# {name} {size}, poles {a} {b}\n"))
        }
        (None, Some(n)) => {
            let seed = seed.ok_or_else(|| Failure::new(2, "--random needs --seed"))?;
            let g = gen_random_k4_free(n, drop, seed)?;
            (g, format!("# random n={n} drop={drop} seed={seed}\n"))
        }
        (None, None) => return Err(Failure::new(2, "give --family or --random")),
    };
    let body = if dot { graph_to_dot(&g, None) } else { header + &write_edge_list(&g) };
    emit(output, &body)
}

fn oracle(input: &Path, k: u32) -> CmdResult {
    let g = read_graph(input)?;
    if k == 0 {
        return Err(Failure::new(2, "k must be positive"));
    }
    let r = oracle_equitable(&g, k);
    println!("feasible: {} ({} nodes explored)", r.feasible, r.nodes_explored);
    match r.witness {
        Some(w) => {
            println!("{}", coloring_to_json(&w)?);
            Ok(())
        }
        None => Err(Failure::new(1, format!("no equitable {k}-coloring"))),
    }
}

struct Instance {
    label: String,
    g: Graph,
    k: u32,
}

enum Outcome {
    Pass,
    Fail(String),
    Broken(String, Vec<TraceRecord>),
}

fn run_instance(inst: &Instance) -> Outcome {
    match solve_traced(&inst.g, inst.k, SolveOptions::default()) {
        Ok(sol) => {
            if !matches!(is_equitable(&inst.g, &sol.coloring), Ok(true)) {
                return Outcome::Fail("output is not equitable".into());
            }
            if inst.g.vertex_count() <= ORACLE_MAX_N && !oracle_equitable(&inst.g, inst.k).feasible {
                return Outcome::Fail("oracle reports infeasible".into());
            }
            Outcome::Pass
        }
        Err((e @ Error::Invariant(_), trace)) => Outcome::Broken(e.to_string(), trace),
        Err((e, _)) => Outcome::Fail(e.to_string()),
    }
}

fn ks(g: &Graph, policy: KPolicy) -> Vec<u32> {
    let lo = min_colors(g);
    match policy {
        KPolicy::Tight => vec![lo],
        KPolicy::All => (lo..=(g.vertex_count() as u32).max(lo)).collect(),
    }
}

fn stress(
    mode: Mode,
    max_n: u32,
    iters: u64,
    seed: Option<u64>,
    drop: f64,
    policy: KPolicy,
    dump_dir: &Path,
) -> CmdResult {
    let mut instances = Vec::new();
    match mode {
        Mode::Exhaustive => {
            for n in 1..=max_n {
                for (i, g) in enumerate_connected_graphs(n).enumerate() {
                    if g.has_k4_minor() {
                        continue;
                    }
                    for k in ks(&g, policy) {
                        let label = format!("n{n}-{i}-k{k}");
                        instances.push(Instance { label, g: g.clone(), k });
                    }
                }
            }
        }
        Mode::Random => {
            let base = seed.ok_or_else(|| Failure::new(2, "--mode random needs --seed"))?;
            if max_n < 1 {
                return Err(Failure::new(2, "--max-n must be positive"));
            }
            for i in 0..iters {
                let s = base.wrapping_add(i);
                let n = 1 + (s.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 33) as u32 % max_n;
                let g = gen_random_k4_free(n, drop, s)?;
                for k in ks(&g, policy) {
                    let label = format!("seed{s}-n{n}-k{k}");
                    instances.push(Instance { label, g: g.clone(), k });
                }
            }
        }
    }
    let outcomes: Vec<Outcome> = instances.par_iter().map(run_instance).collect();
    let mut failed = 0;
    let mut broken = 0;
    for (inst, out) in instances.iter().zip(outcomes) {
        let (msg, trace) = match out {
            Outcome::Pass => continue,
            Outcome::Fail(m) => {
                failed += 1;
                (m, None)
            }
            Outcome::Broken(m, t) => {
                broken += 1;
                (m, Some(t))
            }
        };
        fs::create_dir_all(dump_dir).map_err(|e| Failure::new(2, format!("cannot create {}: {e}", dump_dir.display())))?;
        let body = format!("# k = {}\n# {msg}\n{}", inst.k, write_edge_list(&inst.g));
        write(&dump_dir.join(format!("{}.txt", inst.label)), &body)?;
        if let Some(t) = trace {
            write_trace(&dump_dir.join(format!("{}.trace.jsonl", inst.label)), &t)?;
        }
        eprintln!("{}: {msg}", inst.label);
    }
    println!(
        "{} instances, {} passed, {failed} failed, {broken} invariant violations",
        instances.len(),
        instances.len() - failed - broken
    );
    if broken > 0 {
        Err(Failure::new(3, format!("invariant violations dumped to {}", dump_dir.display())))
    } else if failed > 0 {
        Err(Failure::new(1, format!("failures dumped to {}", dump_dir.display())))
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Color { input, k, output, trace } => color(&input, k, output.as_deref(), trace.as_deref()),
        Command::Check { input, coloring, k } => check(&input, &coloring, k),
        Command::Decompose {
            input,
            normalize,
            dot,
            output,
        } => decompose_cmd(&input, normalize, dot, &output),
        Command::Gen {
            family,
            size,
            random,
            drop,
            seed,
            dot,
            output,
        } => gen(family.as_deref(), size, random, drop, seed, dot, output.as_deref()),
        Command::Oracle { input, k } => oracle(&input, k),
        Command::Stress {
            mode,
            max_n,
            iters,
            seed,
            drop,
            k_policy,
            dump_dir,
        } => stress(mode, max_n, iters, seed, drop, k_policy, &dump_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
