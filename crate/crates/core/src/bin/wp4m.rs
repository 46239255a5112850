//! Command-line front end: one subcommand per construction or oracle.
//! Every command emits a deterministic `key = value` report, to stdout or
//! to `--out`. Exit codes: 0 success, 1 parse or IO error, 2 precondition
//! violation, 3 enumeration bound exceeded under `--require-finite`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use wp4m::adjan_rabin::{
    build_pw, build_qw, check_condition_21, collapse_certificate, AdjanRabinError,
};
use wp4m::enumerate::{enumerate_cosets, Outcome, Strategy, DEFAULT_MAX_COSETS};
use wp4m::handles::{render_slide_moves, slide_reduce, TrivialityVerdict};
use wp4m::pipeline::{
    run_pipeline, write_markov_section, EnumerationRequest, PipelineError, PipelineOptions,
};
use wp4m::presentations::parse_presentation;
use wp4m::quotients::{hom_count, FiniteTarget, TargetKind};
use wp4m::report::{comma_list, Report};
use wp4m::word_problem::{syllable_reduce, Verdict};
use wp4m::words::{parse_word, GeneratorName, Word};
use wp4m::Presentation;

const EXIT_PARSE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wp4m",
    version,
    about = "Group-presentation toolkit: order certificates, two-generator \
             reductions, finite oracles, and handle bookkeeping"
)]
struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the finite-order certificate on a seed presentation.
    Check21 {
        /// Presentation file.
        file: PathBuf,
    },
    /// Build the padded presentation Q_w for a word over the seed.
    BuildQw {
        /// Seed presentation file.
        file: PathBuf,
        /// Word over the seed generators.
        #[arg(long)]
        word: String,
    },
    /// Build the two-generator presentation P_w and its elimination log.
    BuildPw {
        /// Seed presentation file.
        file: PathBuf,
        /// Word over the seed generators.
        #[arg(long)]
        word: String,
    },
    /// Run bounded coset enumeration over the trivial subgroup.
    Enumerate {
        /// Presentation file.
        file: PathBuf,
        /// Bound on the number of cosets ever defined.
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Definition order: hlt or felsch.
        #[arg(long, default_value = "hlt", value_parser = Strategy::from_str)]
        strategy: Strategy,
        /// Exit 3 if the enumeration does not complete within the bound.
        #[arg(long)]
        require_finite: bool,
    },
    /// Count homomorphisms into fixed finite targets.
    Homcount {
        /// Presentation file.
        file: PathBuf,
        /// Target group, repeatable: s3, a4, s4, or s5.
        #[arg(long = "target", required = true, value_parser = TargetKind::from_str)]
        targets: Vec<TargetKind>,
        /// Worker threads for the assignment search.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Reduce a tuple to (1,0,...,0) by recorded subtract and permute moves.
    Slides {
        /// Comma-separated nonnegative entries with gcd 1.
        #[arg(long, value_delimiter = ',', required = true)]
        tuple: Vec<u64>,
    },
    /// Word-problem oracle for a free product of finite cyclic groups.
    WpOracle {
        /// Comma-separated cyclic orders, each at least 2; generator i is x<i>.
        #[arg(long, value_delimiter = ',', required = true)]
        cyclic: Vec<u64>,
        /// Word over x1..xn.
        #[arg(long)]
        word: String,
    },
    /// Summarize the handle complex of a presentation and predict its boundary.
    Markov {
        /// Presentation file.
        file: PathBuf,
        /// Use the reduced complex (one fewer alpha handle).
        #[arg(long)]
        reduced: bool,
        /// Triviality verdict to predict under: trivial, nontrivial, or unknown.
        #[arg(long, default_value = "unknown", value_parser = parse_verdict)]
        verdict: TrivialityVerdict,
    },
    /// Full run over one seed and word: certificate, Q_w, P_w, basis check,
    /// hom-counts, and optional enumeration and handle sections.
    Pipeline {
        /// Seed presentation file.
        file: PathBuf,
        /// Word over the seed generators.
        #[arg(long)]
        word: String,
        /// Target group, repeatable: s3, a4, s4, or s5.
        #[arg(long = "target", default_value = "s3", value_parser = TargetKind::from_str)]
        targets: Vec<TargetKind>,
        /// Worker threads for hom-counting.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also enumerate cosets of the two-generator presentation.
        #[arg(long)]
        enumerate: bool,
        /// Bound on the number of cosets ever defined.
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Definition order: hlt or felsch.
        #[arg(long, default_value = "hlt", value_parser = Strategy::from_str)]
        strategy: Strategy,
        /// Append the handle-complex section.
        #[arg(long)]
        markov: bool,
        /// Use the reduced complex in the handle section.
        #[arg(long)]
        reduced: bool,
        /// Exit 3 if a requested enumeration does not complete.
        #[arg(long)]
        require_finite: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let (text, code) = match &cli.command {
        Command::Check21 { file } => (cmd_check21(file)?, 0),
        Command::BuildQw { file, word } => (cmd_build_qw(file, word)?, 0),
        Command::BuildPw { file, word } => (cmd_build_pw(file, word)?, 0),
        Command::Enumerate {
            file,
            max_cosets,
            strategy,
            require_finite,
        } => cmd_enumerate(file, *max_cosets, *strategy, *require_finite)?,
        Command::Homcount {
            file,
            targets,
            jobs,
        } => (cmd_homcount(file, targets, *jobs)?, 0),
        Command::Slides { tuple } => (cmd_slides(tuple)?, 0),
        Command::WpOracle { cyclic, word } => (cmd_wp_oracle(cyclic, word)?, 0),
        Command::Markov {
            file,
            reduced,
            verdict,
        } => (cmd_markov(file, *reduced, *verdict)?, 0),
        Command::Pipeline {
            file,
            word,
            targets,
            jobs,
            enumerate,
            max_cosets,
            strategy,
            markov,
            reduced,
            require_finite,
        } => {
            let opts = PipelineOptions {
                targets: targets.clone(),
                jobs: *jobs,
                enumerate: enumerate.then_some(EnumerationRequest {
                    max_cosets: *max_cosets,
                    strategy: *strategy,
                }),
                markov: *markov,
                reduced: *reduced,
            };
            cmd_pipeline(file, word, &opts, *require_finite)?
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(code)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    parse_presentation(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn certificate_failure(e: AdjanRabinError) -> Failure {
    match e {
        AdjanRabinError::UnknownGenerator(_) => Failure::parse(e.to_string()),
        _ => Failure::precondition(e.to_string()),
    }
}

fn parse_verdict(s: &str) -> Result<TrivialityVerdict, String> {
    match s {
        "trivial" => Ok(TrivialityVerdict::ProvedTrivial),
        "nontrivial" => Ok(TrivialityVerdict::ProvedNonTrivial),
        "unknown" => Ok(TrivialityVerdict::Unknown),
        other => Err(format!(
            "unknown verdict `{other}` (expected trivial, nontrivial, or unknown)"
        )),
    }
}

/// Report spelling for a word; the empty word prints as `1`.
fn word_text(w: &Word) -> String {
    if w.is_empty() {
        "1".to_owned()
    } else {
        w.render()
    }
}

fn cmd_check21(file: &Path) -> Result<String, Failure> {
    let seed = read_presentation(file)?;
    let cert = check_condition_21(&seed).map_err(certificate_failure)?;
    let collapse = collapse_certificate(&cert);
    let mut report = Report::new();
    report
        .kv("cert.indices", comma_list(cert.indices.iter().map(|i| i + 1)))
        .kv("cert.orders", comma_list(&cert.orders))
        .kv("cert.qmax", cert.q_max)
        .kv("cert.bezout", comma_list(&cert.bezout))
        .kv("cert.squares", comma_list(&collapse.squared_orders))
        .kv("cert.squares.bezout", comma_list(&collapse.bezout_sq));
    Ok(report.render())
}

fn seed_word_cert(
    file: &Path,
    word: &str,
) -> Result<(Presentation, Word, wp4m::adjan_rabin::Condition21), Failure> {
    let seed = read_presentation(file)?;
    let cert = check_condition_21(&seed).map_err(certificate_failure)?;
    let w = seed
        .word(word)
        .map_err(|e| Failure::parse(e.to_string()))?;
    Ok((seed, w, cert))
}

fn cmd_build_qw(file: &Path, word: &str) -> Result<String, Failure> {
    let (seed, w, cert) = seed_word_cert(file, word)?;
    let qw = build_qw(&seed, &w, &cert).map_err(certificate_failure)?;
    Ok(qw.render())
}

fn cmd_build_pw(file: &Path, word: &str) -> Result<String, Failure> {
    let (seed, w, cert) = seed_word_cert(file, word)?;
    let (pw, log) = build_pw(&seed, &w, &cert).map_err(certificate_failure)?;
    let mut text = pw.render();
    // log lines are comments so the output stays a loadable presentation
    for step in &log {
        text.push_str(&format!(
            "# elim {} via rel {}: {} = {}\n",
            step.gen.as_str(),
            step.relator_index + 1,
            step.gen.as_str(),
            word_text(&step.solution),
        ));
    }
    Ok(text)
}

fn cmd_enumerate(
    file: &Path,
    max_cosets: usize,
    strategy: Strategy,
    require_finite: bool,
) -> Result<(String, u8), Failure> {
    let p = read_presentation(file)?;
    let mut report = Report::new();
    let mut code = 0;
    match enumerate_cosets(&p, strategy, max_cosets, None) {
        Outcome::Finite(table) => {
            report.kv("order", table.order());
        }
        Outcome::BoundExceeded { max_cosets, .. } => {
            report.kv("bound-exceeded at", max_cosets);
            if require_finite {
                code = EXIT_BOUND;
            }
        }
    }
    Ok((report.render(), code))
}

fn cmd_homcount(file: &Path, targets: &[TargetKind], jobs: usize) -> Result<String, Failure> {
    let p = read_presentation(file)?;
    let mut report = Report::new();
    for kind in targets {
        let target = FiniteTarget::standard(*kind);
        report.kv(
            &format!("homcount.{}", kind.name()),
            hom_count(&p, &target, jobs),
        );
    }
    Ok(report.render())
}

fn cmd_slides(tuple: &[u64]) -> Result<String, Failure> {
    let seq = slide_reduce(tuple).map_err(|e| Failure::precondition(e.to_string()))?;
    let mut report = Report::new();
    report.kv("initial", comma_list(&seq.initial));
    for line in render_slide_moves(&seq.moves).lines() {
        report.raw(line);
    }
    report.kv("final", comma_list(&seq.final_tuple));
    Ok(report.render())
}

fn cmd_wp_oracle(cyclic: &[u64], word: &str) -> Result<String, Failure> {
    if let Some(q) = cyclic.iter().find(|q| **q < 2) {
        return Err(Failure::precondition(format!(
            "cyclic order {q} is below 2"
        )));
    }
    let gens: Vec<GeneratorName> = (1..=cyclic.len())
        .map(|i| GeneratorName::new(&format!("x{i}")).expect("x<i> is a valid name"))
        .collect();
    let orders: BTreeMap<GeneratorName, u64> =
        gens.iter().cloned().zip(cyclic.iter().copied()).collect();
    let w = parse_word(word, &gens).map_err(|e| Failure::parse(e.to_string()))?;
    let mut report = Report::new();
    match syllable_reduce(&w, &orders) {
        Verdict::Trivial => {
            report.kv("verdict", "trivial");
        }
        Verdict::NonTrivial(nf) => {
            report
                .kv("verdict", "nontrivial")
                .kv("normal-form", nf.render());
        }
    }
    Ok(report.render())
}

fn cmd_markov(file: &Path, reduced: bool, verdict: TrivialityVerdict) -> Result<String, Failure> {
    let p = read_presentation(file)?;
    let mut report = Report::new();
    write_markov_section(&mut report, &p, reduced, verdict)
        .map_err(|e| Failure::precondition(e.to_string()))?;
    Ok(report.render())
}

fn cmd_pipeline(
    file: &Path,
    word: &str,
    opts: &PipelineOptions,
    require_finite: bool,
) -> Result<(String, u8), Failure> {
    let seed = read_presentation(file)?;
    let outcome = run_pipeline(&seed, word, opts).map_err(|e| match e {
        PipelineError::Word(err) => Failure::parse(err.to_string()),
        PipelineError::Certificate(err) => certificate_failure(err),
    })?;
    let code = if outcome.bound_exceeded && require_finite {
        EXIT_BOUND
    } else {
        0
    };
    Ok((outcome.report.render(), code))
}
