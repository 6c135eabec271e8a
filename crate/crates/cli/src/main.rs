//! `puremin`: validate, inspect, diagnose and reduce chain complexes from
//! JSON files, compute dimensions and run the property suites.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use puremin::harness::suites::{self, SuiteReport};
use puremin::harness::gallery;
use puremin::json::{self, complex_to_string, parse_complex_or_module};
use puremin::resolution::DIMENSION_NOTE;
use puremin::{diagnose, free_resolution, reduce, CanonicalForm, ChainComplex, Dimension, DimensionKind, Error, RingSpec};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "puremin", version, about = "Purity and minimality of chain complexes over computable rings")]
struct Cli {
    /// Print the stable JSON form instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check that a complex or module file is well formed.
    Validate { file: PathBuf },
    /// Homology in every stored degree, as canonical forms.
    Homology { file: PathBuf },
    /// Acyclicity, contractibility and the minimality flags.
    Diagnose { file: PathBuf },
    /// Split off a contractible part, leaving a pure-minimal complex.
    Reduce {
        file: PathBuf,
        /// Write the reduction trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the reduced complex here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat FILE as a trace and check it instead.
        #[arg(long, conflicts_with_all = ["trace", "out"])]
        replay: bool,
    },
    /// Projective or flat dimension from a reduced free resolution.
    Dimension {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Pd)]
        kind: Kind,
        #[arg(long, default_value_t = puremin::resolution::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Run one property suite, or all of them.
    Harness {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the suite's own case count.
        #[arg(long)]
        cases: Option<u64>,
        /// Defaults to the suite's own ring; not allowed with `all`.
        #[arg(long)]
        ring: Option<String>,
        /// Write every counterexample complex into this directory.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
    /// Print or write a gallery complex.
    Example {
        name: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pd,
    Fd,
}

/// What went wrong, by exit code.
enum Fail {
    /// 1: a suite failed or the request was refused.
    Refused(String),
    /// 2: the input could not be read or is malformed.
    Input(String),
    /// 3: a name or request the library does not handle.
    Unsupported(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let msg = e.to_string();
        match e {
            Error::Refused(_) => Fail::Refused(msg),
            Error::Unsupported(_) | Error::UnknownName(_) | Error::NotFinite(_) | Error::NonProjective { .. } => {
                Fail::Unsupported(msg)
            }
            _ => Fail::Input(msg),
        }
    }
}

type Out = Result<(), Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Out {
    std::fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ChainComplex, Fail> {
    parse_complex_or_module(&read(path)?).map_err(|e| match e {
        Error::InvalidComplex(_) | Error::Json(_) => Fail::Input(format!("{}: {e}", path.display())),
        e => e.into(),
    })
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn shape_label(c: &ChainComplex) -> String {
    let degs = c.degrees();
    if c.is_periodic() {
        format!("periodic with period {}", degs.len())
    } else {
        format!("degrees {}..{}", degs[0], degs[degs.len() - 1])
    }
}

fn ranks(c: &ChainComplex) -> BTreeMap<i64, usize> {
    c.degrees().into_iter().map(|d| (d, c.gens(d))).collect()
}

fn ranks_line(c: &ChainComplex) -> String {
    ranks(c).iter().map(|(d, g)| format!("{d}:{g}")).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct Validated {
    valid: bool,
    ring: RingSpec,
    periodic: bool,
    generators: BTreeMap<i64, usize>,
}

fn validate(json: bool, file: &Path) -> Out {
    let c = load(file)?;
    if json {
        print_json(&Validated { valid: true, ring: c.ring().clone(), periodic: c.is_periodic(), generators: ranks(&c) });
    } else {
        println!("valid complex over {}, {}", c.ring(), shape_label(&c));
        println!("generators {}", ranks_line(&c));
    }
    Ok(())
}

#[derive(Serialize)]
struct HomologyOut {
    ring: RingSpec,
    homology: BTreeMap<i64, CanonicalForm>,
}

fn homology(json: bool, file: &Path) -> Out {
    let c = load(file)?;
    let h: BTreeMap<i64, CanonicalForm> = c.degrees().into_iter().map(|d| (d, c.homology(d).canonical_form())).collect();
    if json {
        print_json(&HomologyOut { ring: c.ring().clone(), homology: h });
    } else {
        println!("R = {}", c.ring());
        for (d, f) in h {
            println!("H_{d} = {f}");
        }
    }
    Ok(())
}

fn diagnosis(json: bool, file: &Path) -> Out {
    let c = load(file)?;
    let d = diagnose(&c);
    if json {
        print_json(&d);
    } else {
        println!("{d}");
        println!("notes:");
        for n in &d.notes {
            println!("  {n}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Reduced {
    moves: usize,
    split_generators: BTreeMap<i64, usize>,
    reduced: json::ComplexDto,
}

fn reduction(json: bool, file: &Path, trace: Option<&Path>, out: Option<&Path>, replay: bool) -> Out {
    let red = if replay {
        json::replay_trace(&read(file)?).map_err(|e| Fail::Input(format!("{}: {e}", file.display())))?
    } else {
        reduce(&load(file)?)?
    };
    if let Some(p) = trace {
        write(p, &json::trace_to_string(&red))?;
    }
    if let Some(p) = out {
        write(p, &complex_to_string(&red.reduced))?;
    }
    if json {
        print_json(&Reduced { moves: red.moves.len(), split_generators: ranks(&red.split_part), reduced: (&red.reduced).into() });
        return Ok(());
    }
    if replay {
        println!("trace checked: iso data verified, moves reproduced");
    }
    println!("{} moves", red.moves.len());
    println!("split off (contractible) {}", ranks_line(&red.split_part));
    println!("reduced (pure-minimal)   {}", ranks_line(&red.reduced));
    if red.reduced.total_rank() == 0 {
        println!("the reduced complex is zero");
    }
    Ok(())
}

#[derive(Serialize)]
struct DimensionOut {
    kind: DimensionKind,
    cutoff: usize,
    value: Dimension,
    resolution_generators: BTreeMap<i64, usize>,
    periodic_from: Option<(i64, i64)>,
    note: &'static str,
}

fn dimension(json: bool, file: &Path, kind: Kind, cutoff: usize) -> Out {
    let c = load(file)?;
    let kind = match kind {
        Kind::Pd => DimensionKind::Projective,
        Kind::Fd => DimensionKind::Flat,
    };
    let res = free_resolution(&c, cutoff)?;
    let value = res.dimension();
    if json {
        print_json(&DimensionOut {
            kind,
            cutoff,
            value,
            resolution_generators: ranks(&res.complex),
            periodic_from: res.periodic,
            note: DIMENSION_NOTE,
        });
        return Ok(());
    }
    let label = match kind {
        DimensionKind::Projective => "pd",
        DimensionKind::Flat => "fd",
    };
    println!("{label} = {value}");
    println!("resolution {}", ranks_line(&res.complex));
    if let Some((start, period)) = res.periodic {
        println!("syzygies repeat from degree {start} with period {period}");
    }
    println!("note: {DIMENSION_NOTE}");
    Ok(())
}

fn harness(json: bool, suite: &str, seed: u64, cases: Option<u64>, ring: Option<&str>, dir: Option<&Path>) -> Out {
    let ring: Option<RingSpec> = match ring {
        Some(s) => Some(s.parse().map_err(|e: Error| Fail::Input(format!("--ring: {e}")))?),
        None => None,
    };
    let reports: Vec<SuiteReport> = if suite == "all" {
        if ring.is_some() {
            return Err(Fail::Input("--ring needs a single --suite".into()));
        }
        suites::run_all(seed, cases)
    } else {
        vec![suites::run_suite(suite, ring.as_ref(), seed, cases)?]
    };
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Fail::Input(format!("{}: {e}", dir.display())))?;
        for r in &reports {
            for cx in r.failures.iter().chain(&r.expected_counterexamples) {
                for (role, dto) in &cx.complexes {
                    let name = format!("{}_{}_{}.json", r.suite, cx.case, role);
                    let text = serde_json::to_string_pretty(dto).expect("serializable");
                    write(&dir.join(name), &text)?;
                }
            }
        }
    }
    if json {
        if reports.len() == 1 {
            print_json(&reports[0]);
        } else {
            print_json(&reports);
        }
    } else {
        for r in &reports {
            println!("{r}");
            for f in &r.failures {
                println!("  case {} (seed {}): {}", f.case, f.seed, f.message);
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Fail::Refused(format!("{failed} of {} suites failed", reports.len())));
    }
    Ok(())
}

fn example(name: &str, emit: Option<&Path>) -> Out {
    let c = gallery(name)?;
    let text = complex_to_string(&c);
    match emit {
        Some(p) => {
            write(p, &text)?;
            eprintln!("wrote {name} to {}", p.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let j = cli.json;
    let out = match &cli.verb {
        Verb::Validate { file } => validate(j, file),
        Verb::Homology { file } => homology(j, file),
        Verb::Diagnose { file } => diagnosis(j, file),
        Verb::Reduce { file, trace, out, replay } => reduction(j, file, trace.as_deref(), out.as_deref(), *replay),
        Verb::Dimension { file, kind, cutoff } => dimension(j, file, *kind, *cutoff),
        Verb::Harness { suite, seed, cases, ring, counterexamples } => {
            harness(j, suite, *seed, *cases, ring.as_deref(), counterexamples.as_deref())
        }
        Verb::Example { name, emit } => example(name, emit.as_deref()),
    };
    let (code, msg) = match out {
        Ok(()) => return ExitCode::SUCCESS,
        Err(Fail::Refused(m)) => (1, m),
        Err(Fail::Input(m)) => (2, m),
        Err(Fail::Unsupported(m)) => (3, m),
    };
    eprintln!("puremin: {msg}");
    ExitCode::from(code)
}
