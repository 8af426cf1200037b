//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Embeddings in criteria 4, 5 and 7 go through the `menger` binary; the
//! rest call the library directly. Every certificate produced here is
//! replayed by the independent oracle in `core/tests/common/replay.rs`
//! for criteria 3 and 6.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::naive::{exhaustive_sweep, random_sweep};
use common::replay::replay;
use menger_core::doubled::Kind;
use menger_core::io::{load_action, load_family, load_space};
use menger_core::oracle::cover_sweep;
use menger_core::pipeline::{embed_family, equivariant_setup, genericity_sample, BlockStatus};
use menger_core::witness::exhaustive_oracle;
use menger_core::{
    fixtures, Backend, EmbedOptions, EmbeddingCertificate, MapFamily, Observable,
};

/// Runtime ceilings, in seconds, for the criteria that have one.
const LEMMA_ORACLE_SECS: u64 = 30;
const COVER_SWEEP_SECS: u64 = 10;
const END_TO_END_SECS: u64 = 5;
const BRUTE_FORCE_SECS: u64 = 10;

/// Randomized builds per backend.
const COVER_BUILDS: usize = 50;
/// Seeds sampled for the genericity report.
const GENERICITY_SEEDS: u64 = 100;
/// Perturbation size of every end-to-end run.
const EPS: f64 = 0.05;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn menger(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_menger"))
        .args(args)
        .output()
        .expect("menger binary runs");
    let text = format!(
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    (out.status.code().unwrap_or(-1), text)
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

/// Certificates collected along the way, with the family each one covers.
#[derive(Default)]
struct Runs {
    certs: Vec<(String, EmbeddingCertificate, MapFamily)>,
}

impl Runs {
    fn add(&mut self, name: &str, cert: EmbeddingCertificate, fam: MapFamily) {
        self.certs.push((name.to_string(), cert, fam));
    }
}

/// An embed through the CLI: exit code, certificate, and the family the
/// certificate refers to.
struct CliEmbed {
    code: i32,
    elapsed: Duration,
    cert_path: PathBuf,
    cert: Option<EmbeddingCertificate>,
    output: String,
}

fn cli_embed(dir: &Path, name: &str, space: &str, action: &str, extra: &[&str]) -> CliEmbed {
    let cert_path = dir.join(format!("{name}.json"));
    let (sp, ac) = (fixture(space), fixture(action));
    let mut args = vec![
        "embed",
        "--space",
        sp.to_str().unwrap(),
        "--action",
        ac.to_str().unwrap(),
        "--out",
        cert_path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let start = Instant::now();
    let (code, output) = menger(&args);
    let elapsed = start.elapsed();
    let cert = std::fs::read_to_string(&cert_path)
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok());
    CliEmbed {
        code,
        elapsed,
        cert_path,
        cert,
        output,
    }
}

fn action_family(space: &str, action: &str, r: usize, cert: &EmbeddingCertificate) -> MapFamily {
    let s = load_space(&fixture(space)).unwrap();
    let la = load_action(&fixture(action), s, None).unwrap();
    equivariant_setup(&la.action, la.window.as_deref(), r, cert.exact_cap)
        .unwrap()
        .family
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = exhaustive_oracle(4, 3, 3);
    let t = start.elapsed();
    outcome(
        s.failures == 0 && s.instances > 0 && t < Duration::from_secs(LEMMA_ORACLE_SECS),
        format!(
            "{} failures / {} instances with |W| ≤ 4, |V1|, |V2| ≤ 3 in {} (limit {LEMMA_ORACLE_SECS} s)",
            s.failures,
            s.instances,
            secs(t)
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let cells = cover_sweep(Backend::Cells, COVER_BUILDS, 0);
    let bricks = cover_sweep(Backend::Bricks, COVER_BUILDS, 0);
    let t = start.elapsed();
    outcome(
        cells.violations + bricks.violations == 0
            && cells.builds == COVER_BUILDS
            && bricks.builds == COVER_BUILDS
            && t < Duration::from_secs(COVER_SWEEP_SECS),
        format!(
            "cells {} violations / {} builds, bricks {} / {} in {} (limit {COVER_SWEEP_SECS} s) {:?}",
            cells.violations,
            cells.builds,
            bricks.violations,
            bricks.builds,
            secs(t),
            cells.failures.iter().chain(&bricks.failures).collect::<Vec<_>>()
        ),
    )
}

fn criterion_4(dir: &Path, runs: &mut Runs) -> Outcome {
    let run = cli_embed(
        dir,
        "z3",
        "circle9.json",
        "z3_circle9.json",
        &["--r", "1", "--eps", "0.05", "--seed", "0"],
    );
    let Some(cert) = run.cert else {
        return outcome(false, format!("exit {}: {}", run.code, run.output.trim()));
    };
    // exhaustive injectivity from the emitted coordinates
    let csv = std::fs::read_to_string(run.cert_path.with_extension("csv")).unwrap();
    let rows: Vec<Vec<u64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|v| v.parse::<f64>().unwrap().to_bits()).collect())
        .collect();
    let mut pairs = 0;
    let mut collisions = 0;
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            pairs += 1;
            if rows[a] == rows[b] {
                collisions += 1;
            }
        }
    }
    let margin = cert.margin.unwrap_or(0.0);
    let pass = run.code == 0
        && margin > 0.0
        && cert.displacement <= EPS
        && pairs == 36
        && collisions == 0
        && run.elapsed < Duration::from_secs(END_TO_END_SECS);
    let detail = format!(
        "Z/3 on circle(9), r = 1: margin {margin:.3e} > 0, displacement {:.3e} ≤ {EPS}, {collisions} collisions / {pairs} pairs, {} (limit {END_TO_END_SECS} s)",
        cert.displacement,
        secs(run.elapsed)
    );
    let fam = action_family("circle9.json", "z3_circle9.json", 1, &cert);
    runs.add("z3", cert, fam);
    outcome(pass, detail)
}

fn criterion_5(dir: &Path, runs: &mut Runs) -> Outcome {
    let f0 = fixture("invariant_f0_circle8.json");
    let run = cli_embed(
        dir,
        "antipodal",
        "circle8.json",
        "antipodal_circle8.json",
        &["--r", "2", "--eps", "0.05", "--f0", f0.to_str().unwrap()],
    );
    let start = Instant::now();
    let (sp, ac) = (fixture("circle8.json"), fixture("antipodal_circle8.json"));
    let (code_r1, _) = menger(&[
        "embed",
        "--space",
        sp.to_str().unwrap(),
        "--action",
        ac.to_str().unwrap(),
        "--r",
        "1",
        "--eps",
        "0.05",
        "--out",
        dir.join("antipodal_r1.json").to_str().unwrap(),
    ]);
    let (check_r1, _) = menger(&[
        "check",
        "--space",
        sp.to_str().unwrap(),
        "--action",
        ac.to_str().unwrap(),
        "--r",
        "1",
    ]);
    let elapsed = run.elapsed + start.elapsed();
    let Some(cert) = run.cert else {
        return outcome(false, format!("exit {}: {}", run.code, run.output.trim()));
    };
    let gate = cert.action_hypothesis.as_ref().is_some_and(|h| h.passed);
    let intersective = cert
        .blocks
        .iter()
        .filter(|b| b.kind == Kind::Intersective && b.status == BlockStatus::Separated)
        .count();
    let margin = cert.margin.unwrap_or(0.0);
    let pass = run.code == 0
        && gate
        && margin > 0.0
        && intersective > 0
        && code_r1 == 2
        && check_r1 == 2
        && elapsed < Duration::from_secs(END_TO_END_SECS);
    let detail = format!(
        "antipodal circle(8): r = 2 hypotheses {}, margin {margin:.3e}, {intersective} intersective blocks perturbed; r = 1 exits {code_r1} (embed) and {check_r1} (check); {} (limit {END_TO_END_SECS} s)",
        if gate { "pass" } else { "fail" },
        secs(elapsed)
    );
    let fam = action_family("circle8.json", "antipodal_circle8.json", 2, &cert);
    runs.add("antipodal", cert, fam);
    outcome(pass, detail)
}

fn rotation_family(n: usize, step: usize) -> MapFamily {
    let a = fixtures::rotation_action(n, step);
    equivariant_setup(&a, None, 1, menger_core::separation::DEFAULT_EXACT_CAP)
        .unwrap()
        .family
}

/// Injections of circle(n) into a path of m points.
fn scattered(n: usize, m: usize, maps: Vec<Vec<usize>>) -> MapFamily {
    let labels = (0..maps.len()).map(|k| format!("g{k}")).collect();
    MapFamily::new(fixtures::circle(n), fixtures::path(m), maps, labels).unwrap()
}

/// Library runs from starting points that force many blocks to be
/// perturbed, on both backends.
fn multi_block_runs(runs: &mut Runs) {
    let cases: Vec<(&str, MapFamily, usize)> = vec![
        (
            "z3-constant",
            rotation_family(9, 3),
            1,
        ),
        (
            "z4-constant",
            rotation_family(8, 2),
            2,
        ),
        (
            "family-constant",
            load_family(&fixture("family_circle9.json"), fixtures::circle(9)).unwrap(),
            2,
        ),
        (
            "scattered-a",
            scattered(8, 11, vec![vec![1, 9, 7, 3, 2, 10, 8, 4], vec![6, 10, 1, 3, 0, 2, 7, 8]]),
            2,
        ),
        (
            "scattered-b",
            scattered(7, 7, vec![vec![6, 4, 5, 3, 1, 0, 2], vec![2, 4, 0, 5, 6, 3, 1], vec![6, 4, 0, 3, 2, 1, 5]]),
            2,
        ),
        (
            "scattered-c",
            scattered(
                9,
                12,
                vec![
                    vec![1, 2, 11, 3, 8, 4, 9, 6, 10],
                    vec![8, 4, 11, 9, 6, 5, 1, 0, 7],
                    vec![1, 2, 5, 8, 4, 0, 11, 3, 6],
                ],
            ),
            2,
        ),
    ];
    for (name, fam, r) in cases {
        for backend in [Backend::Cells, Backend::Bricks] {
            let n = fam.target().n_points();
            let f0 = Observable::new(r, vec![vec![0.5; r]; n]).unwrap();
            let opts = EmbedOptions {
                backend,
                ..EmbedOptions::default()
            };
            match embed_family(&fam, r, EPS, &f0, &opts) {
                Ok(cert) => runs.add(&format!("{name}-{backend}"), cert, fam.clone()),
                Err(e) => panic!("{name} with {backend}: {e}"),
            }
        }
    }
}

fn criterion_3(runs: &Runs) -> Outcome {
    let mut perturbations = 0;
    let mut bad = Vec::new();
    for (name, cert, fam) in &runs.certs {
        let rep = replay(cert, fam);
        perturbations += rep.perturbations;
        let abc: Vec<&String> = rep
            .violations
            .iter()
            .filter(|v| v.contains("(a)") || v.contains("(b)") || v.contains("(c)") || v.contains("eps"))
            .collect();
        if !abc.is_empty() {
            bad.push(format!("{name}: {abc:?}"));
        }
    }
    outcome(
        bad.is_empty() && perturbations > 0,
        format!(
            "(a) exact ≤ budget and ≤ eps, (b), (c) over {perturbations} perturbations in {} runs; {} counterexamples {bad:?}",
            runs.certs.len(),
            bad.len()
        ),
    )
}

fn criterion_6(runs: &Runs) -> Outcome {
    let mut multi = 0;
    let mut bad = Vec::new();
    for (name, cert, fam) in &runs.certs {
        let rep = replay(cert, fam);
        if !rep.multi_block {
            continue;
        }
        multi += 1;
        let persistence: Vec<&String> = rep
            .violations
            .iter()
            .filter(|v| v.contains("not separated") || v.contains("eps") || v.contains("differs"))
            .collect();
        let margins_ok = cert
            .blocks
            .iter()
            .all(|b| b.margin_after.is_none_or(|m| m > 0.0));
        if !persistence.is_empty() || !margins_ok || cert.displacement > cert.eps {
            bad.push(format!("{name}: {persistence:?}"));
        }
    }
    outcome(
        bad.is_empty() && multi > 0,
        format!(
            "{multi} multi-block runs, handled pairs stay separated after every block, displacement ≤ eps; failures {bad:?}"
        ),
    )
}

fn flip_bit(cert_path: &Path, out: &Path, pointer: &str) {
    let text = std::fs::read_to_string(cert_path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let slot = v.pointer_mut(pointer).expect("field present");
    let x = slot.as_f64().unwrap();
    *slot = serde_json::json!(f64::from_bits(x.to_bits() ^ 1));
    std::fs::write(out, serde_json::to_string(&v).unwrap()).unwrap();
}

fn criterion_7(dir: &Path, runs: &mut Runs) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let window = cli_embed(
        dir,
        "window",
        "circle12.json",
        "rotation_circle12_window.json",
        &["--r", "2", "--eps", "0.05", "--seed", "3"],
    );
    if let Some(cert) = window.cert.clone() {
        let fam = action_family("circle12.json", "rotation_circle12_window.json", 2, &cert);
        runs.add("window", cert, fam);
    }
    let cases = [
        ("z3", "circle9.json", "z3_circle9.json"),
        ("antipodal", "circle8.json", "antipodal_circle8.json"),
        ("window", "circle12.json", "rotation_circle12_window.json"),
    ];
    for (name, space, action) in cases {
        let cert_path = dir.join(format!("{name}.json"));
        let (sp, ac) = (fixture(space), fixture(action));
        let f0 = fixture("invariant_f0_circle8.json");
        let verify = |c: &Path, a: &Path| {
            let mut args = vec![
                "verify",
                "--certificate",
                c.to_str().unwrap(),
                "--space",
                sp.to_str().unwrap(),
                "--action",
                a.to_str().unwrap(),
            ];
            if name == "antipodal" {
                args.extend(["--f0", f0.to_str().unwrap()]);
            }
            menger(&args)
        };
        let (ok, text) = verify(&cert_path, &ac);
        let cert: EmbeddingCertificate =
            serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
        let printed = format!(
            "verified: margin {} displacement {}",
            cert.margin.map_or("none".to_string(), |m| m.to_string()),
            cert.displacement
        );
        let round_trip = ok == 0 && text.contains(&printed);
        let tampered = dir.join(format!("{name}_tampered.json"));
        let mut tamper_codes = Vec::new();
        for pointer in [
            "/observable/values/0/0",
            "/margin",
            "/displacement",
            "/f0/values/1/0",
            "/budget_total",
            "/lipschitz_before",
        ] {
            flip_bit(&cert_path, &tampered, pointer);
            tamper_codes.push(verify(&tampered, &ac).0);
        }
        let wrong = fixture(if name == "z3" { "antipodal_circle8.json" } else { "z3_circle9.json" });
        let (wrong_code, _) = verify(&cert_path, &wrong);
        let ok_case = round_trip && tamper_codes.iter().all(|&c| c == 4) && wrong_code == 4;
        pass &= ok_case;
        notes.push(format!(
            "{name}: verify {ok}, bit flips {tamper_codes:?}, wrong action {wrong_code}"
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let ex = exhaustive_sweep();
    let rnd = random_sweep(17, 2000);
    let t = start.elapsed();
    outcome(
        ex.discrepancies + rnd.discrepancies == 0 && t < Duration::from_secs(BRUTE_FORCE_SECS),
        format!(
            "{} exhaustive + {} random families (≤ 8 points, N ≤ 3), {} discrepancies in {} (limit {BRUTE_FORCE_SECS} s)",
            ex.families,
            rnd.families,
            ex.discrepancies + rnd.discrepancies,
            secs(t)
        ),
    )
}

fn criterion_9() -> Outcome {
    let fam = rotation_family(9, 3);
    let report = genericity_sample(&fam, 1, EPS, 0..GENERICITY_SEEDS, &EmbedOptions::default());
    outcome(
        report.success_rate == 1.0 && report.samples == GENERICITY_SEEDS as usize,
        format!(
            "Z/3 on circle(9), {} seeds: {:.2} injective before perturbation, {:.2} certified after",
            report.samples, report.fraction_before, report.success_rate
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Runs::default();
    let c1 = criterion_1();
    let c2 = criterion_2();
    let c4 = criterion_4(dir.path(), &mut runs);
    let c5 = criterion_5(dir.path(), &mut runs);
    let c7 = criterion_7(dir.path(), &mut runs);
    multi_block_runs(&mut runs);
    let c3 = criterion_3(&runs);
    let c6 = criterion_6(&runs);
    let c8 = criterion_8();
    let c9 = criterion_9();
    let results = [
        (1, "lemma oracle", c1),
        (2, "cover sweep", c2),
        (3, "perturbation properties", c3),
        (4, "Z/3 end to end", c4),
        (5, "antipodal end to end", c5),
        (6, "persistence", c6),
        (7, "certificate round trip", c7),
        (8, "brute-force equivalence", c8),
        (9, "genericity", c9),
    ];
    let mut failed = 0;
    for (k, name, o) in &results {
        println!(
            "criterion {k} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
