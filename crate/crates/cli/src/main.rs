//! `swclosure`: subword/superword closures of context-free grammars.
//!
//! Exit status is 0 on success (including "equal" and "maybe-equal"), 1 when
//! a distinguishing word was found and 2 on usage, parse or budget errors.

mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use subword_closure::closure::{build_closure_nfa_capped, state_bound, DEFAULT_NAIVE_CAP};
use subword_closure::equiv::{equiv_closed_with, EquivOptions, Verdict, DEFAULT_PAIR_BUDGET};
use subword_closure::generators::{gen_blowup, gen_cube_nfa, gen_dnf_nfa, gen_lk, gen_pow2, mutate, DnfFormula, Scenario};
use subword_closure::grammar::Grammar;
use subword_closure::inequiv::{check_inequiv, InequivConfig, InequivStatus};
use subword_closure::nfa::Nfa;
use subword_closure::qnf::to_simple_qnf;
use subword_closure::{Direction, Side, Word};

#[derive(Parser)]
#[command(name = "swclosure", version, about = "Subword closures of context-free languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the downward-closure NFA of a grammar.
    Closure {
        grammar: PathBuf,
        /// Write the NFA here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a Graphviz rendering (`<output>.dot`, or stdout).
        #[arg(long)]
        dot: bool,
        /// Refuse to build more states than this.
        #[arg(long, default_value_t = DEFAULT_NAIVE_CAP)]
        state_cap: usize,
    },
    /// Close an NFA under subwords or superwords.
    ClosureNfa {
        nfa: PathBuf,
        #[arg(long, value_enum, default_value_t = Dir::Down)]
        dir: Dir,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dot: bool,
    },
    /// Decide equality of the closures of two grammars or NFAs.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Dir::Down)]
        dir: Dir,
        /// Maximum number of product states to explore.
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        node_budget: usize,
    },
    /// Search for a word separating two grammars.
    Inequiv {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        /// Wall-clock budget in seconds (0 disables it).
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
        /// Product-state budget for each closure comparison.
        #[arg(long, default_value_t = 1_000_000)]
        node_budget: usize,
        #[arg(long)]
        no_short_scan: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Write a generated grammar or NFA.
    Gen(GenArgs),
    /// Closure sizes and timings for a grammar family.
    Bench {
        #[arg(value_enum)]
        family: bench::Family,
        n_max: usize,
        /// Print comma-separated values instead of an aligned table.
        #[arg(long)]
        csv: bool,
        /// Largest `n` for which the minimal DFA is computed.
        #[arg(long, default_value_t = 2)]
        dfa_max_n: usize,
    },
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// `{a^(2^n)}` by repeated squaring.
    Pow2 { n: usize },
    /// Words over {0,1} of length `2^(n+1)+1` with two 0s `2^n` letters apart.
    Lk { n: usize },
    /// `A_k -> A_i A_j` for all `i, j < k`.
    Blowup { n: usize },
    /// NFA of the satisfying assignments of a DNF formula.
    ///
    /// Clauses are separated by `|`, literals by `&`; a literal is `x<i>` or
    /// `!x<i>`, e.g. `x0 & !x1 | x1`.
    Dnf {
        #[arg(long)]
        vars: usize,
        formula: String,
    },
    /// NFA accepting every 0/1 word of length `n`.
    Cube { n: usize },
    /// A seeded single-rule edit of a grammar.
    Mutate {
        grammar: PathBuf,
        #[arg(long)]
        scenario: Scenario,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Down,
    Up,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Direction {
        match d {
            Dir::Down => Direction::Down,
            Dir::Up => Direction::Up,
        }
    }
}

enum Input {
    Grammar(Grammar),
    Nfa(Nfa),
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_grammar(path: &Path) -> anyhow::Result<Grammar> {
    Grammar::parse(&read(path)?).with_context(|| format!("{}", path.display()))
}

/// Grammar or NFA, told apart by the first meaningful line.
fn read_input(path: &Path) -> anyhow::Result<Input> {
    let text = read(path)?;
    let header = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    if header.starts_with("nfa") {
        Ok(Input::Nfa(Nfa::parse(&text).with_context(|| format!("{}", path.display()))?))
    } else {
        Ok(Input::Grammar(Grammar::parse(&text).with_context(|| format!("{}", path.display()))?))
    }
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_nfa(a: &Nfa, output: Option<&Path>, dot: bool) -> anyhow::Result<()> {
    write_out(output, &a.write_text())?;
    if dot {
        match output {
            Some(p) => {
                let mut name = p.as_os_str().to_owned();
                name.push(".dot");
                write_out(Some(Path::new(&name)), &a.to_dot())?;
            }
            None => write_out(None, &a.to_dot())?,
        }
    }
    Ok(())
}

fn witness_line(side: Side, w: &Word) -> String {
    format!("{side}\t{w}")
}

fn parse_dnf(vars: usize, formula: &str) -> anyhow::Result<DnfFormula> {
    let mut clauses = Vec::new();
    for clause in formula.split('|') {
        let mut lits = Vec::new();
        for lit in clause.split('&').map(str::trim).filter(|l| !l.is_empty()) {
            let (positive, var) = match lit.strip_prefix('!').or_else(|| lit.strip_prefix('~')) {
                Some(v) => (false, v.trim()),
                None => (true, lit),
            };
            let Some(i) = var.strip_prefix('x').and_then(|i| i.parse::<usize>().ok()) else {
                bail!("bad literal `{lit}` (expected x<i> or !x<i>)");
            };
            lits.push((i, positive));
        }
        if lits.is_empty() {
            bail!("empty clause in `{formula}`");
        }
        clauses.push(lits);
    }
    Ok(DnfFormula::new(vars, &clauses)?)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Closure { grammar, output, dot, state_cap } => {
            let g = read_grammar(&grammar)?;
            let q = to_simple_qnf(&g)?;
            let a = build_closure_nfa_capped(&q, state_cap)?;
            let n = q.grammar().nonterminals().len();
            write_nfa(&a, output.as_deref(), dot)?;
            let report = format!("states: {} (bound 2·3^(n-1) = {} for n = {})", a.state_count(), state_bound(n), n);
            if output.is_some() {
                println!("{report}");
            } else {
                eprintln!("{report}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ClosureNfa { nfa, dir, output, dot } => {
            let a = Nfa::parse(&read(&nfa)?).with_context(|| format!("{}", nfa.display()))?;
            let c = match Direction::from(dir) {
                Direction::Down => a.close_down(),
                Direction::Up => a.close_up(),
            };
            write_nfa(&c, output.as_deref(), dot)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { a, b, dir, node_budget } => {
            let dir = Direction::from(dir);
            let to_nfa = |path: &Path| -> anyhow::Result<Nfa> {
                match read_input(path)? {
                    Input::Nfa(a) => Ok(a),
                    Input::Grammar(g) if dir == Direction::Down => {
                        Ok(subword_closure::closure::downward_nfa_capped(&g, DEFAULT_NAIVE_CAP)?)
                    }
                    Input::Grammar(_) => bail!("{}: --dir up needs NFA inputs", path.display()),
                }
            };
            let (na, nb) = (to_nfa(&a)?, to_nfa(&b)?);
            let opts = EquivOptions { pair_budget: node_budget, deadline: None };
            match equiv_closed_with(&na, &nb, dir, &opts)?.0 {
                Verdict::Equal => {
                    println!("equal");
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Separated { witness, side } => {
                    println!("{}", witness_line(side, &witness));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Inequiv { g1, g2, max_depth, budget, node_budget, no_short_scan, jobs } => {
            let (g1, g2) = (read_grammar(&g1)?, read_grammar(&g2)?);
            if !budget.is_finite() || budget < 0.0 {
                bail!("--budget must be a non-negative number of seconds");
            }
            let cfg = InequivConfig {
                max_depth,
                time_budget: (budget > 0.0).then(|| Duration::from_secs_f64(budget)),
                node_budget,
                scan_short_words: !no_short_scan,
                parallel_tasks: jobs.max(1),
                ..InequivConfig::default()
            };
            let report = check_inequiv(&g1, &g2, &cfg)?;
            match report.status {
                InequivStatus::Inequivalent { witness, side } => {
                    println!("{}", witness_line(side, &witness));
                    eprintln!("{}", report.stats);
                    Ok(ExitCode::from(1))
                }
                InequivStatus::MaybeEqual => {
                    println!("maybe-equal");
                    println!("{}", report.stats);
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Gen(GenArgs { family, output }) => {
            let text = match family {
                GenFamily::Pow2 { n } => gen_pow2(n).to_string(),
                GenFamily::Lk { n } => {
                    if n == 0 {
                        bail!("lk needs n >= 1");
                    }
                    gen_lk(n).to_string()
                }
                GenFamily::Blowup { n } => gen_blowup(n).to_string(),
                GenFamily::Dnf { vars, formula } => gen_dnf_nfa(&parse_dnf(vars, &formula)?).write_text(),
                GenFamily::Cube { n } => gen_cube_nfa(n).write_text(),
                GenFamily::Mutate { grammar, scenario, seed } => mutate(&read_grammar(&grammar)?, scenario, seed)?.to_string(),
            };
            write_out(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { family, n_max, csv, dfa_max_n } => {
            let rows = bench::run(family, n_max, dfa_max_n);
            print!("{}", bench::render(&rows, csv));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
