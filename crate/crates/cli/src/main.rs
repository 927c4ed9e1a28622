//! `latmod` command-line front end.
//!
//! Exit codes: 0 success or property true, 1 property false or a
//! verification counterexample, 2 input error, 3 internal error or cap
//! exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latmod::catalog::{catalog_load, default_catalog_dir, filter_corpus, Predicate};
use latmod::congruence::{all_congruences, maximum_graded_quotient, DEFAULT_CONGRUENCE_CAP};
use latmod::constructions::{named_lattice, Family, FamilyParams};
use latmod::enumeration::{enumerate_lattices, DEFAULT_MAX_SIZE};
use latmod::format::{export_dot, parse_named_lattice_file, write_lattice_file, Report};
use latmod::harness::{
    certify_corpus, generating_pairs, pq_suite, universal_property_check_with, verify_lemma_suite, verify_theorem1,
    DEFAULT_GRID_CAP,
};
use latmod::properties::is_graded;
use latmod::{Error, Lattice, Property};

#[derive(Parser)]
#[command(name = "latmod", version, about = "Finite lattice checks: gradedness, left modularity, supersolvability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate lattice properties.
    Check {
        file: PathBuf,
        /// Property name or `all`.
        #[arg(long, default_value = "all")]
        property: String,
        #[arg(long)]
        json: bool,
    },
    /// Count or list all congruences.
    Congruences {
        file: PathBuf,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_CONGRUENCE_CAP)]
        cap: usize,
    },
    /// Write the maximum graded quotient, if it exists.
    GradedQuotient {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_CONGRUENCE_CAP)]
        cap: usize,
    },
    /// Build a named lattice, e.g. `partition --n 4` or `chain:2*chain:3`.
    Construct {
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate lattices up to a size and store those matching the filters.
    Enumerate {
        #[arg(long)]
        max_size: usize,
        /// Comma-separated properties, each optionally negated with `!`.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
        /// Catalog directory (defaults to $LATMOD_CACHE).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite over a corpus.
    Verify {
        suite: Suite,
        /// Catalog directory to read instead of enumerating.
        #[arg(long, conflicts_with = "max_size")]
        corpus: Option<PathBuf>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Largest sequence length for the `pq` suite.
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// Bound on `r · s` for down-set grids.
        #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
        grid_cap: usize,
        /// Directory for offending lattice files.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Write the Hasse diagram in DOT.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    n: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<i64>,
    #[arg(long, value_delimiter = ',')]
    factors: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theorem1,
    Lemmas,
    Pq,
    Birkhoff,
    Universal,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Lemmas => "lemmas",
            Suite::Pq => "pq",
            Suite::Birkhoff => "birkhoff",
            Suite::Universal => "universal",
        }
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::TooLarge { .. } | Error::CapExceeded { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { file, property, json } => check(&file, &property, json),
        Command::Congruences {
            file,
            count,
            list,
            json,
            cap,
        } => congruences(&file, count || !list, json, cap),
        Command::GradedQuotient {
            file,
            output,
            json,
            cap,
        } => graded_quotient(&file, output.as_deref(), json, cap),
        Command::Construct { family, params, output } => construct(&family, params, output.as_deref()),
        Command::Enumerate {
            max_size,
            filter,
            out,
            cap,
            json,
        } => enumerate(max_size, &filter, out, cap, json),
        Command::Verify {
            suite,
            corpus,
            max_size,
            json,
            t,
            grid_cap,
            dump,
        } => verify(suite, corpus, max_size, json, t, grid_cap, dump.as_deref()),
        Command::ExportDot { file, output } => {
            let (_, lattice) = load(&file)?;
            emit(output.as_deref(), &export_dot(&lattice, None))?;
            Ok(true)
        }
    }
}

fn load(path: &Path) -> Result<(Option<String>, Lattice), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_named_lattice_file(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(mut report: Report, started: Instant) {
    report
        .timings
        .insert("total_ms".into(), started.elapsed().as_secs_f64() * 1e3);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
}

fn check(file: &Path, property: &str, json: bool) -> Outcome {
    let started = Instant::now();
    let (_, lattice) = load(file)?;
    let properties: Vec<Property> = if property == "all" {
        Property::ALL.to_vec()
    } else {
        vec![Property::parse(property).ok_or_else(|| Failure::Input(format!("unknown property `{property}`")))?]
    };
    let reports: Vec<_> = properties.iter().map(|p| p.evaluate(&lattice)).collect();
    let verdict = reports.iter().all(|r| r.verdict);
    if json {
        let mut report = Report::new("check", Some(lattice.canonical_form().to_hex()), verdict);
        report.witnesses = reports.iter().map(|r| serde_json::to_value(r).expect("serializes")).collect();
        print_report(report, started);
    } else {
        for r in &reports {
            let detail = match (&r.witness, &r.counterexample) {
                (_, Some(c)) => format!(" (counterexample {c:?})"),
                (Some(w), None) => format!(" (witness {w:?})"),
                (None, None) => String::new(),
            };
            println!("{}: {}{detail}", r.property, r.verdict);
        }
    }
    Ok(verdict)
}

fn congruences(file: &Path, count_only: bool, json: bool, cap: usize) -> Outcome {
    let started = Instant::now();
    let (_, lattice) = load(file)?;
    let all = all_congruences(&lattice, cap)?;
    if json {
        let mut report = Report::new("congruences", Some(lattice.canonical_form().to_hex()), true);
        report.witnesses = if count_only {
            vec![json!({ "count": all.len() })]
        } else {
            all.iter().map(|c| json!(c.classes())).collect()
        };
        print_report(report, started);
    } else if count_only {
        println!("{}", all.len());
    } else {
        for c in &all {
            let blocks: Vec<String> = c
                .classes()
                .iter()
                .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                .collect();
            println!("{}", blocks.join(" | "));
        }
    }
    Ok(true)
}

fn graded_quotient(file: &Path, output: Option<&Path>, json: bool, cap: usize) -> Outcome {
    let started = Instant::now();
    let (name, lattice) = load(file)?;
    let quotient = maximum_graded_quotient(&lattice, cap)?;
    let key = Some(lattice.canonical_form().to_hex());
    match quotient {
        Some(q) => {
            let qname = name.map(|n| format!("{n}/g"));
            let text = write_lattice_file(&q.lattice, qname.as_deref());
            if json {
                if let Some(path) = output {
                    emit(Some(path), &text)?;
                }
                let mut report = Report::new("graded-quotient", key, true);
                report.witnesses = vec![json!({
                    "quotient": serde_json::from_str::<Value>(&text).expect("valid JSON"),
                    "projection": q.projection,
                })];
                print_report(report, started);
            } else {
                emit(output, &text)?;
            }
            Ok(true)
        }
        None => {
            if json {
                print_report(Report::new("graded-quotient", key, false), started);
            } else {
                eprintln!("no maximum graded quotient: the quotient by the common refinement is not graded");
            }
            Ok(false)
        }
    }
}

fn construct(family: &str, p: ParamArgs, output: Option<&Path>) -> Outcome {
    let params = FamilyParams {
        k: p.k,
        n: p.n,
        m: p.m,
        r: p.r,
        s: p.s,
        factors: p.factors,
    };
    let family: Family = if family.contains([':', '*']) {
        family.parse()?
    } else {
        Family::from_params(family, &params)?
    };
    let lattice = named_lattice(&family)?;
    emit(output, &write_lattice_file(&lattice, Some(&family.to_string())))?;
    Ok(true)
}

fn enumerate(max_size: usize, filter: &[String], out: Option<PathBuf>, cap: usize, json: bool) -> Outcome {
    let started = Instant::now();
    let predicates = filter
        .iter()
        .filter(|f| !f.trim().is_empty())
        .map(|f| Predicate::parse(f).ok_or_else(|| Failure::Input(format!("unknown filter `{f}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let dir = out.unwrap_or_else(default_catalog_dir);
    let catalog = filter_corpus(enumerate_lattices(max_size, cap)?, &predicates, &dir)?;
    catalog.save()?;
    if json {
        let mut report = Report::new("enumerate", None, true);
        report.witnesses = vec![json!({ "stored": catalog.len(), "dir": dir.display().to_string() })];
        print_report(report, started);
    } else {
        println!("stored {} lattices in {}", catalog.len(), dir.display());
    }
    Ok(true)
}

fn corpus(dir: Option<PathBuf>, max_size: Option<usize>) -> Result<Vec<Lattice>, Failure> {
    match dir {
        Some(dir) => Ok(catalog_load(dir)?.lattices()?.into_iter().map(|(_, l)| l).collect()),
        None => Ok(enumerate_lattices(max_size.unwrap_or(8), DEFAULT_MAX_SIZE)?.collect()),
    }
}

fn verify(
    suite: Suite,
    dir: Option<PathBuf>,
    max_size: Option<usize>,
    json: bool,
    t: usize,
    grid_cap: usize,
    dump: Option<&Path>,
) -> Outcome {
    let started = Instant::now();
    let lattices = corpus(dir, max_size)?;
    let (witnesses, summary): (Vec<Value>, String) = match suite {
        Suite::Theorem1 => {
            let s = verify_theorem1(&lattices, dump, grid_cap)?;
            let text = format!(
                "checked {}, graded and left modular {}, supersolvable {}, certified {}, over cap {}, violations {}",
                s.checked,
                s.graded_left_modular,
                s.supersolvable,
                s.certified,
                s.over_cap,
                s.violations.len()
            );
            let mut w = vec![json!({
                "checked": s.checked,
                "graded_left_modular": s.graded_left_modular,
                "supersolvable": s.supersolvable,
                "certified": s.certified,
                "over_cap": s.over_cap,
                "violations": s.violations.len(),
            })];
            w.extend(s.violations.iter().map(|v| serde_json::to_value(v).expect("serializes")));
            (w, text)
        }
        Suite::Lemmas => {
            let mut w = Vec::new();
            for l in &lattices {
                let report = verify_lemma_suite(l, DEFAULT_CONGRUENCE_CAP)?;
                for r in report.all().into_iter().filter(|r| !r.verdict) {
                    w.push(json!({ "lattice_key": l.canonical_form().to_hex(), "report": r }));
                }
            }
            let text = format!("checked {}, failing checks {}", lattices.len(), w.len());
            (w, text)
        }
        Suite::Pq => {
            let mut w = Vec::new();
            let mut applicable = 0;
            for l in &lattices {
                if !is_graded(l).verdict {
                    continue;
                }
                applicable += 1;
                for r in pq_suite(l, t, false) {
                    w.push(json!({ "lattice_key": l.canonical_form().to_hex(), "report": r }));
                }
            }
            let text = format!("graded lattices {applicable}, t <= {t}, violations {}", w.len());
            (w, text)
        }
        Suite::Birkhoff => {
            let bad = certify_corpus(&lattices, grid_cap)?;
            let w: Vec<Value> = bad
                .iter()
                .map(|(i, r)| json!({ "lattice_key": lattices[*i].canonical_form().to_hex(), "refutation": r }))
                .collect();
            let text = format!("checked {}, refuted {}", lattices.len(), w.len());
            (w, text)
        }
        Suite::Universal => {
            let mut w = Vec::new();
            let mut grids = Vec::new();
            let mut checked = 0usize;
            for l in lattices.iter().filter(|l| is_graded(l).verdict) {
                for (chain, x) in generating_pairs(l) {
                    let k = chain.length();
                    while grids.len() <= k {
                        grids.push(latmod::constructions::grid_quotient(grids.len())?);
                    }
                    checked += 1;
                    let r = universal_property_check_with(&grids[k], l, &chain, x)?;
                    if !r.verdict {
                        w.push(json!({
                            "lattice_key": l.canonical_form().to_hex(),
                            "chain": chain.elements(),
                            "w": x,
                            "report": r,
                        }));
                    }
                }
            }
            let text = format!("checked {checked} (chain, w) pairs, failures {}", w.len());
            (w, text)
        }
    };
    let verdict = match suite {
        Suite::Theorem1 => witnesses.len() == 1,
        _ => witnesses.is_empty(),
    };
    if json {
        let mut report = Report::new(&format!("verify-{}", suite.name()), None, verdict);
        report.witnesses = witnesses;
        print_report(report, started);
    } else {
        println!("{}: {summary}", suite.name());
    }
    Ok(verdict)
}
