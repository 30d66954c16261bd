use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use omega_core::constructions::{compare_outputs, eliminate_lookaround, twowst_to_sst_sf, Runnable};
use omega_core::monoid::DEFAULT_CAP;
use omega_core::sst::build_output_graph;
use omega_core::words::render;
use omega_core::{RunResult, UpWord};
use omega_trans::format::{load_machine, print_machine, Machine};
use omega_trans::{dot, gen, show};

#[derive(Parser)]
#[command(name = "omega-trans", version, about = "Run and analyse transducers over ultimately periodic words")]
struct Cli {
    /// Cap on monoid elements and construction states.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Seed for sampled corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of output letters to compute.
    #[arg(short, global = true, default_value_t = 20)]
    k: usize,
    /// Last column of output graphs.
    #[arg(long, global = true, default_value_t = 12)]
    horizon: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Print the first k output letters on a word `PREFIX(PERIOD)^w`.
    Run { file: PathBuf, word: String },
    /// Compare two machines on a corpus; exits with 1 on any mismatch.
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        /// One word per line; sampled from --seed when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Number of sampled words.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Write the TSV report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decide aperiodicity of a dma, sst or 2wst; exits with 1 if it fails.
    CheckAperiodic { file: PathBuf },
    /// Decide 1-boundedness of an sst; exits with 1 if it fails.
    #[command(name = "check-1bounded")]
    Check1Bounded { file: PathBuf },
    /// Print the transition monoid of a dma or sst.
    Monoid { file: PathBuf },
    /// Print the behaviour matrices of a 2wst on a finite word.
    Behavior {
        file: PathBuf,
        word: String,
        /// Place the word right after the end-marker, followed by this
        /// ω-word, instead of printing every context.
        #[arg(long)]
        right: Option<String>,
    },
    /// Build the output graph of an sst on a word.
    Graph {
        file: PathBuf,
        word: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compile between machine kinds.
    Compile {
        #[arg(value_enum)]
        what: CompileKind,
        file: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Remove look-around from an sstsf (a 2wst is compiled first).
    EliminateLa {
        file: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CompileKind {
    #[value(name = "2wst-to-sst")]
    TwowstToSst,
}

/// Exit status of a verb that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

fn runnable(m: &Machine) -> Result<&dyn Runnable> {
    Ok(match m {
        Machine::Sst(t) => t,
        Machine::TwoWst(t) => t,
        Machine::Fot(t) => t,
        Machine::SstSf(t) => t,
        Machine::Dma(_) | Machine::Dfa(_) => bail!("a {} file does not produce output", m.kind()),
    })
}

fn load(path: &Path) -> Result<Machine> {
    load_machine(path).with_context(|| format!("loading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict_line(aperiodic: bool, size: usize, witness: Option<&[char]>) -> String {
    match (aperiodic, witness) {
        (true, _) | (false, None) => format!("aperiodic: {aperiodic} (monoid size {size})"),
        (false, Some(w)) => format!("aperiodic: false (monoid size {size}), witness: {}", show::word(w)),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.verb {
        Verb::Run { file, word } => {
            let m = load(file)?;
            let w = UpWord::parse(word)?;
            match runnable(&m)?.run_prefix(&w, cli.k)? {
                RunResult::Output(o) => {
                    println!("{}", render(&o));
                    Ok(Outcome::Ok)
                }
                RunResult::Rejected => {
                    println!("rejected");
                    Ok(Outcome::Failed)
                }
                RunResult::Stuck => {
                    println!("stuck");
                    Ok(Outcome::Failed)
                }
            }
        }
        Verb::Compare { file1, file2, corpus, samples, report } => {
            let (m1, m2) = (load(file1)?, load(file2)?);
            let (r1, r2) = (runnable(&m1)?, runnable(&m2)?);
            if r1.input_alphabet() != r2.input_alphabet() {
                bail!("the machines read different alphabets");
            }
            let words = match corpus {
                Some(p) => {
                    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    gen::parse_corpus(&text)?
                }
                None => gen::corpus(cli.seed, r1.input_alphabet().symbols(), *samples, 8, 3),
            };
            let rows = compare_outputs(r1, r2, &words, cli.k);
            write_or_print(report.as_deref(), &show::report_tsv(&rows))?;
            let bad = rows.iter().filter(|r| !r.agrees()).count();
            eprintln!("{} words, {bad} disagreements", rows.len());
            Ok(if bad == 0 { Outcome::Ok } else { Outcome::Failed })
        }
        Verb::CheckAperiodic { file } => {
            let v = match load(file)? {
                Machine::Dma(d) => d.is_aperiodic(cli.cap)?,
                Machine::Sst(t) => t.is_aperiodic(cli.cap)?,
                Machine::TwoWst(t) => t.is_aperiodic(cli.cap)?,
                m => bail!("check-aperiodic needs a dma, sst or 2wst, got {}", m.kind()),
            };
            println!("{}", verdict_line(v.aperiodic, v.size, v.witness.as_deref()));
            Ok(if v.aperiodic { Outcome::Ok } else { Outcome::Failed })
        }
        Verb::Check1Bounded { file } => {
            let Machine::Sst(t) = load(file)? else { bail!("check-1bounded needs an sst") };
            let ok = t.is_1_bounded(cli.cap)?;
            println!("1-bounded: {ok}");
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
        Verb::Monoid { file } => {
            match load(file)? {
                Machine::Dma(d) => {
                    let m = d.monoid(cli.cap)?;
                    println!("{} elements", m.len());
                    for (i, (e, w)) in m.elements.iter().zip(&m.words).enumerate() {
                        print!("#{i} {}\n{}", show::word(w), show::trans_matrix(e, &d.states));
                    }
                }
                Machine::Sst(t) => {
                    let m = t.monoid(cli.cap)?;
                    println!("{} elements", m.len());
                    for (i, (e, w)) in m.elements.iter().zip(&m.words).enumerate() {
                        print!("#{i} {}\n{}", show::word(w), show::flow_matrix(e, &t.states, &t.vars));
                    }
                }
                m => bail!("monoid needs a dma or sst, got {}", m.kind()),
            }
            Ok(Outcome::Ok)
        }
        Verb::Behavior { file, word, right } => {
            let Machine::TwoWst(t) = load(file)? else { bail!("behavior needs a 2wst") };
            let w: Vec<char> = word.chars().collect();
            if let Some(r) = right {
                let q = t.anchored_quads(&w, &UpWord::parse(r)?)?;
                print!("{}", show::quads(&q, t.states()));
                return Ok(Outcome::Ok);
            }
            let b = t.behavior_of(&w)?;
            let ahead = t.lookahead().map(|a| a.states.as_slice());
            let behind = t.lookbehind().map(|d| d.states.as_slice());
            for (ctx, q) in &b.quads {
                if ahead.is_some() || behind.is_some() {
                    println!("context {}", show::context(ctx, ahead, behind));
                }
                print!("{}", show::quads(q, t.states()));
            }
            Ok(Outcome::Ok)
        }
        Verb::Graph { file, word, dot: path } => {
            let Machine::Sst(t) = load(file)? else { bail!("graph needs an sst") };
            let w = UpWord::parse(word)?;
            let g = build_output_graph(&t, &w, cli.horizon, cli.cap)?;
            write_or_print(path.as_deref(), &dot::output_graph_dot(&g))?;
            Ok(Outcome::Ok)
        }
        Verb::Compile { what: CompileKind::TwowstToSst, file, o } => {
            let Machine::TwoWst(t) = load(file)? else { bail!("2wst-to-sst needs a 2wst") };
            let s = twowst_to_sst_sf(&t)?;
            write_or_print(o.as_deref(), &print_machine(&Machine::SstSf(s)))?;
            Ok(Outcome::Ok)
        }
        Verb::EliminateLa { file, o } => {
            let s = match load(file)? {
                Machine::SstSf(s) => s,
                Machine::TwoWst(t) => twowst_to_sst_sf(&t)?,
                Machine::Sst(t) => omega_core::constructions::SstSf::from_sst(&t),
                m => bail!("eliminate-la needs an sstsf, 2wst or sst, got {}", m.kind()),
            };
            let e = eliminate_lookaround(&s, cli.cap)?;
            eprintln!("{} configurations, {} states, {} variables", e.configs.len(), e.sst.states.len(), e.sst.vars.len());
            write_or_print(o.as_deref(), &print_machine(&Machine::Sst(e.sst)))?;
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
