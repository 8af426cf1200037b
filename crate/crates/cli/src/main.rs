use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use menger_core::certificate::{verify_certificate, verify_equivariant, EmbeddingCertificate};
use menger_core::hypothesis::{
    check_hypotheses_action, check_hypotheses_family, max_orbit_size, HypothesisReport,
};
use menger_core::io::{load_action, load_family, load_observable, load_space, LoadedAction};
use menger_core::oracle::cover_sweep;
use menger_core::pipeline::{
    embed_equivariant, embed_family, equivariant_setup, genericity_sample, orbit_vector, EmbedOptions,
};
use menger_core::separation::DEFAULT_EXACT_CAP;
use menger_core::witness::exhaustive_oracle;
use menger_core::{Backend, Error, FiniteSpace, MapFamily, Observable};

/// Exit codes by outcome class.
const EXIT_INPUT: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_CONSTRUCTION: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

#[derive(Parser)]
#[command(name = "menger", version, about = "Injective orbit maps of finite group actions and map families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the dimension hypotheses.
    Check(CheckArgs),
    /// Build a certified perturbation with an injective orbit map.
    Embed(EmbedArgs),
    /// Re-verify a certificate against its inputs.
    Verify(VerifyArgs),
    /// Run the exhaustive lemma oracle and the cover sweeps.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    action: Option<PathBuf>,
    #[arg(long)]
    family: Option<PathBuf>,
    /// Group enumeration cap, overriding the action file.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    r: usize,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Cells,
    Bricks,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Cells => Backend::Cells,
            BackendArg::Bricks => Backend::Bricks,
        }
    }
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    eps: f64,
    /// Seed for sampling f0 when --f0 is not given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Starting observable; sampled uniformly from --seed when absent.
    #[arg(long)]
    f0: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "cells")]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// Certificate path; the coordinates CSV goes next to it.
    #[arg(long)]
    out: PathBuf,
    /// Also report how many of this many seeded f0 are already injective.
    #[arg(long)]
    genericity: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    certificate: PathBuf,
    #[command(flatten)]
    inputs: Inputs,
    /// The starting observable, when the certificate was built from a file.
    #[arg(long)]
    f0: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Lemmas,
    Covers,
    All,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum, default_value = "all")]
    scope: Scope,
    /// Cover builds per backend.
    #[arg(long, default_value_t = 50)]
    builds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// An error together with the exit code of its outcome class.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IndexOutOfRange { .. }
        | Error::InvalidInput { .. }
        | Error::EmptySet(_)
        | Error::GroupCapExceeded { .. }
        | Error::Io(_)
        | Error::Json(_) => EXIT_INPUT,
        Error::HypothesisFailed(_) => EXIT_HYPOTHESIS,
        Error::Verification(_) => EXIT_VERIFICATION,
        Error::GroundMismatch { .. }
        | Error::DiagonalPair(_)
        | Error::NotIntersective
        | Error::NotInjective(_)
        | Error::NotBijective(_)
        | Error::CoverInfeasible(_)
        | Error::Precondition(_)
        | Error::GridInfeasible(_)
        | Error::BudgetExhausted { .. } => EXIT_CONSTRUCTION,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn sha256_file(path: &Path) -> Result<String, Failure> {
    let bytes = fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::new(EXIT_INPUT, e))?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

enum Subject {
    Action(LoadedAction),
    Family(MapFamily),
}

struct Loaded {
    space: FiniteSpace,
    subject: Subject,
    hashes: BTreeMap<String, String>,
}

fn hash_inputs(inputs: &Inputs) -> Result<BTreeMap<String, String>, Failure> {
    let mut hashes = BTreeMap::new();
    hashes.insert("space".to_string(), sha256_file(&inputs.space)?);
    match (&inputs.action, &inputs.family) {
        (Some(a), None) => hashes.insert("action".to_string(), sha256_file(a)?),
        (None, Some(f)) => hashes.insert("family".to_string(), sha256_file(f)?),
        _ => return Err(Failure::new(EXIT_INPUT, anyhow!("pass exactly one of --action, --family"))),
    };
    Ok(hashes)
}

fn load(inputs: &Inputs) -> Result<Loaded, Failure> {
    let hashes = hash_inputs(inputs)?;
    let space = load_space(&inputs.space)?;
    let subject = match (&inputs.action, &inputs.family) {
        (Some(a), _) => Subject::Action(load_action(a, space.clone(), inputs.cap)?),
        (_, Some(f)) => Subject::Family(load_family(f, space.clone())?),
        _ => unreachable!("checked by hash_inputs"),
    };
    Ok(Loaded {
        space,
        subject,
        hashes,
    })
}

fn print_report(title: &str, report: &HypothesisReport) {
    println!("{title} (r = {})", report.r);
    for e in &report.entries {
        println!("  {e}");
    }
    println!("  verdict: {}", if report.passed { "pass" } else { "FAIL" });
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(EXIT_INPUT, e))?;
    fs::write(path, text + "\n")
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| Failure::new(EXIT_INPUT, e))
}

fn check_r(r: usize) -> Result<(), Failure> {
    if r == 0 {
        return Err(Failure::new(EXIT_INPUT, anyhow!("--r must be at least 1")));
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Outcome {
    check_r(args.r)?;
    let loaded = load(&args.inputs)?;
    let report = match &loaded.subject {
        Subject::Action(la) => {
            let report = check_hypotheses_action(&la.action, args.r, max_orbit_size(&la.action));
            print_report("periodic-point inequalities dim (G,X)_N < (r/2)N", &report);
            report
        }
        Subject::Family(fam) => {
            let report = check_hypotheses_family(fam, args.r, true);
            print_report("partition inequalities dim X_P < (r/2)|P|", &report);
            report
        }
    };
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_HYPOTHESIS,
            anyhow!("hypothesis failed: {}", report.failure_summary()),
        ))
    }
}

fn coordinates_csv(cert: &EmbeddingCertificate, fam: &MapFamily) -> String {
    let mut out = String::from("point");
    for label in &cert.labels {
        for l in 0..cert.r {
            write!(out, ",{label}_{l}").expect("string write");
        }
    }
    out.push('\n');
    for (x, &orig) in cert.source_points.iter().enumerate() {
        write!(out, "{orig}").expect("string write");
        for v in orbit_vector(&cert.observable, fam, x) {
            write!(out, ",{v}").expect("string write");
        }
        out.push('\n');
    }
    out
}

fn csv_path(out: &Path) -> PathBuf {
    out.with_extension("csv")
}

fn target_points(loaded: &Loaded) -> usize {
    match &loaded.subject {
        Subject::Action(_) => loaded.space.n_points(),
        Subject::Family(fam) => fam.target().n_points(),
    }
}

/// Runs the embedding and returns the certificate with the family its
/// orbit table refers to.
fn construct(
    subject: &Subject,
    r: usize,
    eps: f64,
    f0: &Observable,
    opts: &EmbedOptions,
) -> Result<(EmbeddingCertificate, MapFamily), Error> {
    match subject {
        Subject::Action(la) => {
            let window = la.window.as_deref();
            let cert = embed_equivariant(&la.action, window, r, eps, f0, opts)?;
            let setup = equivariant_setup(&la.action, window, r, opts.exact_cap)?;
            Ok((cert, setup.family))
        }
        Subject::Family(fam) => Ok((embed_family(fam, r, eps, f0, opts)?, fam.clone())),
    }
}

fn cmd_embed(args: EmbedArgs) -> Outcome {
    check_r(args.r)?;
    if !(args.eps > 0.0 && args.eps.is_finite()) {
        return Err(Failure::new(EXIT_INPUT, anyhow!("--eps must be positive")));
    }
    let mut loaded = load(&args.inputs)?;
    let target_points = target_points(&loaded);
    let (f0, seed) = match &args.f0 {
        Some(p) => {
            loaded.hashes.insert("f0".to_string(), sha256_file(p)?);
            (load_observable(p)?, None)
        }
        None => (Observable::sample(target_points, args.r, args.seed), Some(args.seed)),
    };
    let opts = EmbedOptions {
        backend: args.backend.into(),
        exact_cap: args.exact_cap,
        ..EmbedOptions::default()
    };
    let (mut cert, fam) = construct(&loaded.subject, args.r, args.eps, &f0, &opts)?;
    cert.seed = seed;
    cert.input_hashes = loaded.hashes;
    write_json(&args.out, &cert)?;
    let csv = csv_path(&args.out);
    fs::write(&csv, coordinates_csv(&cert, &fam))
        .with_context(|| format!("writing {}", csv.display()))
        .map_err(|e| Failure::new(EXIT_INPUT, e))?;
    println!(
        "margin {} displacement {} steps {} blocks {}",
        cert.margin.map_or("none".to_string(), |m| m.to_string()),
        cert.displacement,
        cert.perturbation_steps,
        cert.blocks.len()
    );
    println!("wrote {} and {}", args.out.display(), csv.display());

    if let Some(k) = args.genericity {
        let report = genericity_sample(&fam, args.r, args.eps, 0..k, &opts);
        println!(
            "genericity: {}/{} sampled f0 already injective ({:.3}), {}/{} certified after perturbation ({:.3})",
            report.injective_before,
            report.samples,
            report.fraction_before,
            report.certified_after,
            report.samples,
            report.success_rate
        );
    }
    match cert.margin {
        Some(m) if m <= 0.0 => Err(Failure::new(
            EXIT_CONSTRUCTION,
            anyhow!("certificate margin is not positive"),
        )),
        _ => Ok(()),
    }
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let text = fs::read_to_string(&args.certificate)
        .with_context(|| format!("reading {}", args.certificate.display()))
        .map_err(|e| Failure::new(EXIT_INPUT, e))?;
    let cert: EmbeddingCertificate = menger_core::io::parse(&text)?;
    let mismatch = |msg: String| Failure::new(EXIT_VERIFICATION, anyhow!(msg));
    // compare hashes before parsing, so a swapped input reads as a mismatch
    let mut hashes = hash_inputs(&args.inputs)?;
    if let Some(p) = &args.f0 {
        hashes.insert("f0".to_string(), sha256_file(p)?);
    }
    for (role, hash) in &hashes {
        match cert.input_hashes.get(role) {
            Some(stored) if stored == hash => {}
            Some(stored) => {
                return Err(mismatch(format!(
                    "input hash mismatch for {role}: certificate has {stored}, file has {hash}"
                )))
            }
            None => return Err(mismatch(format!("certificate records no {role} input"))),
        }
    }
    for role in cert.input_hashes.keys() {
        if !hashes.contains_key(role) {
            if role == "f0" {
                return Err(Failure::new(
                    EXIT_INPUT,
                    anyhow!("certificate was built from an f0 file; pass it with --f0"),
                ));
            }
            return Err(mismatch(format!("certificate records a {role} input that was not given")));
        }
    }
    let loaded = load(&args.inputs)?;
    let verdict = match &loaded.subject {
        Subject::Action(la) => verify_equivariant(&cert, &la.action, la.window.as_deref()),
        Subject::Family(fam) => verify_certificate(&cert, fam),
    };
    verdict.map_err(|e| match e {
        Error::Verification(_) => Failure::new(EXIT_VERIFICATION, e),
        // anything else while re-deriving the claims is a mismatch too
        other => mismatch(format!("re-derivation failed: {other}")),
    })?;

    let expected_f0 = match (&args.f0, cert.seed) {
        (Some(p), _) => load_observable(p)?,
        (None, Some(seed)) => Observable::sample(target_points(&loaded), cert.r, seed),
        (None, None) => return Err(mismatch("certificate records neither a seed nor an f0 file".into())),
    };
    if serde_json::to_string(&expected_f0).ok() != serde_json::to_string(&cert.f0).ok() {
        return Err(mismatch("f0 does not match its seed or file".into()));
    }
    // the construction is deterministic: rebuilding must reproduce every field
    let opts = EmbedOptions {
        backend: cert.backend,
        all_partitions: cert.all_partitions,
        exact_cap: cert.exact_cap,
    };
    let (mut rebuilt, _) = construct(&loaded.subject, cert.r, cert.eps, &expected_f0, &opts)
        .map_err(|e| mismatch(format!("rebuilding failed: {e}")))?;
    rebuilt.seed = cert.seed;
    rebuilt.input_hashes = cert.input_hashes.clone();
    let fields = |c: &EmbeddingCertificate| match serde_json::to_value(c) {
        Ok(serde_json::Value::Object(m)) => m,
        _ => unreachable!("certificates serialize to objects"),
    };
    let (stored, fresh) = (fields(&cert), fields(&rebuilt));
    if let Some(key) = stored.keys().find(|k| stored.get(*k) != fresh.get(*k)) {
        return Err(mismatch(format!("field `{key}` differs from a fresh rebuild")));
    }
    println!(
        "verified: margin {} displacement {}",
        cert.margin.map_or("none".to_string(), |m| m.to_string()),
        cert.displacement
    );
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Outcome {
    let mut failures = 0;
    if matches!(args.scope, Scope::Lemmas | Scope::All) {
        let s = exhaustive_oracle(4, 3, 3);
        println!("lemmas: {} failures / {} instances", s.failures, s.instances);
        failures += s.failures;
    }
    if matches!(args.scope, Scope::Covers | Scope::All) {
        for backend in [Backend::Cells, Backend::Bricks] {
            let s = cover_sweep(backend, args.builds, args.seed);
            println!("covers ({backend}): {} violations / {} builds", s.violations, s.builds);
            for f in &s.failures {
                println!("  {f}");
            }
            failures += s.violations;
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFICATION, anyhow!("{failures} oracle failures")))
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("MENGER_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("MENGER_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap's own usage-error code would collide with the hypothesis class
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INPUT);
    }
    let outcome = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
