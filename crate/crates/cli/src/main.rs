//! `meshpat` — count mesh-pattern occurrences, compute joint distributions over
//! S_n, verify the catalogued joint equidistributions at finite depth, discover
//! candidate shadings from scratch, and emit bijection traces.
//!
//! Exit codes: 0 verified/ok, 1 mathematical counterexample, 2 usage or parse
//! error.

use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use meshpat::bij::verify_bijection;
use meshpat::catalog::{
    catalog_shadings, discover_candidates, resolve_pair, shading_literal, Catalog,
};
use meshpat::dist::{is_jointly_equidistributed, joint_distribution, EquidistReport};
use meshpat::forms::t_closed;
use meshpat::occur::count_occurrences;
use meshpat::perm::Permutation;
use meshpat::{MeshPattern, Status, Technique};

#[derive(Parser)]
#[command(name = "meshpat", version, about, max_term_width = 100)]
struct Cli {
    /// Worker threads (also via MESHPAT_JOBS; default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count occurrences of a mesh pattern in a permutation.
    Count {
        /// Pattern literal, e.g. "132:(0,0)(1,1)(1,2)(3,1)".
        pattern: String,
        /// Permutation in one-line notation ("24513", or comma-separated).
        permutation: String,
    },
    /// Check joint equidistribution of a catalog pair or two pattern literals.
    CheckPair {
        /// Catalog id (e.g. X1_19) or two pattern literals.
        #[arg(num_args = 1..=2, required = true)]
        pair: Vec<String>,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify catalog tables: equidistribution sweeps plus the checks attached
    /// to each entry's technique (bijection or closed form).
    VerifyTables {
        /// Tables to verify, e.g. "2", "2,3", or "2..8".
        #[arg(long, default_value = "2..8")]
        tables: String,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
    },
    /// Enumerate all 1024 minus-antipodal shadings and report those whose
    /// 123/132 pair is jointly equidistributed up to the depth.
    Discover {
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit the swap trace of the registered bijection on a permutation.
    BijectionTrace {
        /// Catalog id (e.g. X2_10) or two pattern literals, then a permutation.
        #[arg(num_args = 2..=3, required = true)]
        args: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs.or_else(|| {
        std::env::var("MESHPAT_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(jobs) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("meshpat: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("meshpat: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Count {
            pattern,
            permutation,
        } => {
            let q: MeshPattern = pattern
                .parse()
                .with_context(|| format!("bad pattern {pattern:?}"))?;
            let pi: Permutation = permutation
                .parse()
                .with_context(|| format!("bad permutation {permutation:?}"))?;
            println!("{}", count_occurrences(&pi, &q));
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckPair { pair, nmax, format } => check_pair(&pair, nmax, format),
        Command::VerifyTables { tables, nmax } => verify_tables(&tables, nmax),
        Command::Discover { nmax, format } => discover(nmax, format),
        Command::BijectionTrace { args } => bijection_trace(&args),
    }
}

fn technique_label(t: Technique) -> &'static str {
    match t {
        Technique::Symmetry => "symmetry",
        Technique::Swap => "swap",
        Technique::Recurrence => "recurrence",
        Technique::SingleSwap => "single-swap",
        Technique::Open => "open",
    }
}

fn verdict_label(status: Option<Status>, holds: bool) -> &'static str {
    match (status, holds) {
        (_, false) => "refuted-at-depth",
        (Some(Status::Conjectured), true) => "supported-at-depth",
        _ => "verified-at-depth",
    }
}

fn check_pair(pair: &[String], nmax: usize, format: Format) -> anyhow::Result<ExitCode> {
    let catalog = Catalog::load()?;
    let (label, q1, q2) = resolve_pair(&catalog, pair)?;
    let status = catalog.get(&label).ok().map(|e| e.status);
    let report = is_jointly_equidistributed(&q1, &q2, nmax)?;
    let verdict = verdict_label(status, report.holds);
    emit_pair_report(&label, nmax, verdict, &report, format);
    Ok(if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn emit_pair_report(
    label: &str,
    nmax: usize,
    verdict: &str,
    report: &EquidistReport,
    format: Format,
) {
    match format {
        Format::Json => {
            let out = serde_json::json!({
                "pair": label,
                "nmax": nmax,
                "verdict": verdict,
                "first_failure": report.first_failure.map(|(n, k, l, ckl, clk)| {
                    serde_json::json!({"n": n, "k": k, "l": l, "count_kl": ckl, "count_lk": clk})
                }),
                "distributions": report.distributions,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
        }
        Format::Csv => {
            println!("n,k,l,count");
            for d in &report.distributions {
                print!("{}", d.csv_rows());
            }
            eprintln!("{label}: {verdict}");
            if let Some((n, k, l, ckl, clk)) = report.first_failure {
                eprintln!("witness: n={n} ({k},{l})={ckl} but ({l},{k})={clk}");
            }
        }
    }
}

fn parse_tables(spec: &str) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u8 = a.trim().parse().context("bad table range")?;
            let b: u8 = b.trim().parse().context("bad table range")?;
            out.extend(a..=b);
        } else {
            out.push(part.parse().context("bad table number")?);
        }
    }
    out.retain(|t| (2..=8).contains(t));
    out.sort_unstable();
    out.dedup();
    anyhow::ensure!(!out.is_empty(), "no tables selected from {spec:?}");
    Ok(out)
}

fn verify_tables(tables: &str, nmax: usize) -> anyhow::Result<ExitCode> {
    let tables = parse_tables(tables)?;
    let catalog = Catalog::load()?;
    let map_n = nmax.min(6);
    let mut pass = 0usize;
    let mut fail = 0usize;
    for &t in &tables {
        for e in catalog.table(t) {
            let mut cells: Vec<String> = Vec::new();
            let mut ok = true;

            let report = is_jointly_equidistributed(&e.q1, &e.q2, nmax)?;
            let verdict = verdict_label(Some(e.status), report.holds);
            if report.holds {
                cells.push(format!("jd={verdict}"));
            } else {
                ok = false;
                let (n, k, l, ckl, clk) = report.first_failure.expect("failed report");
                cells.push(format!("jd=FAIL n={n} ({k},{l})={ckl} vs ({l},{k})={clk}"));
            }

            if let Some(map) = &e.map {
                let vb = verify_bijection(|pi| map.apply(pi, &e.q1, &e.q2), &e.q1, &e.q2, map_n);
                if vb.ok {
                    cells.push(format!("map[{}]=pass(n={map_n})", map.family()));
                } else {
                    ok = false;
                    cells.push(format!(
                        "map[{}]=FAIL {}",
                        map.family(),
                        vb.failure.unwrap_or_default()
                    ));
                }
            }

            if e.technique == Technique::Recurrence {
                let mut closed_ok = true;
                for n in 2..=nmax.min(7) {
                    let d = joint_distribution(&e.q1, &e.q2, n)?;
                    for k in 0..n as u16 {
                        for l in 0..n as u16 {
                            if u128::from(d.get(k, l)) != t_closed(n, k as usize, l as usize)? {
                                closed_ok = false;
                            }
                        }
                    }
                }
                if closed_ok {
                    cells.push("closed-form=pass".into());
                } else {
                    ok = false;
                    cells.push("closed-form=FAIL".into());
                }
            }

            if ok {
                pass += 1;
            } else {
                fail += 1;
            }
            println!(
                "TABLE {t} {:<18} {:<12} {}",
                e.id,
                technique_label(e.technique),
                cells.join(" ")
            );
        }
    }
    println!(
        "verified {} entries: {pass} pass, {fail} fail (nmax={nmax})",
        pass + fail
    );
    Ok(if fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn discover(nmax: usize, format: Format) -> anyhow::Result<ExitCode> {
    anyhow::ensure!(
        nmax >= 5,
        "discovery below depth 5 is meaningless; pass --nmax 5 or more"
    );
    let catalog = Catalog::load()?;
    let report = discover_candidates(&catalog, nmax)?;
    let known = catalog_shadings(&catalog);
    let passing_set: std::collections::BTreeSet<Vec<(u8, u8)>> =
        report.passing.iter().map(|d| d.shading.clone()).collect();
    let missing: Vec<&Vec<(u8, u8)>> = known.iter().filter(|s| !passing_set.contains(*s)).collect();
    let unlisted: Vec<&meshpat::catalog::DiscoveredShading> = report
        .passing
        .iter()
        .filter(|d| d.catalog_ids.is_empty())
        .collect();

    match format {
        Format::Json => {
            let out = serde_json::json!({
                "nmax": nmax,
                "passing_count": report.passing.len(),
                "inverse_orbit_count": report.orbit_count,
                "catalog_shading_count": known.len(),
                "catalog_shadings_missing_from_result": missing.len(),
                "unlisted_candidates": unlisted.iter().map(|d| shading_literal(&d.shading)).collect::<Vec<_>>(),
                "passing": report.passing,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
        }
        Format::Csv => {
            println!("shading,orbit,catalog_ids");
            for d in &report.passing {
                println!(
                    "{},{},{}",
                    shading_literal(&d.shading),
                    shading_literal(&d.orbit),
                    d.catalog_ids.join(";")
                );
            }
            eprintln!(
                "passing={} orbits={} catalog={} missing={} unlisted={}",
                report.passing.len(),
                report.orbit_count,
                known.len(),
                missing.len(),
                unlisted.len()
            );
        }
    }
    Ok(if missing.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn bijection_trace(args: &[String]) -> anyhow::Result<ExitCode> {
    let catalog = Catalog::load()?;
    let (pair_args, perm_text) = args.split_at(args.len() - 1);
    let pi: Permutation = perm_text[0]
        .parse()
        .with_context(|| format!("bad permutation {:?}", perm_text[0]))?;
    let (label, q1, q2, map) = match pair_args {
        [id] => {
            let e = catalog.get(id)?;
            let map = e.map.clone().ok_or_else(|| {
                anyhow::anyhow!(
                    "{} has no registered bijection (status {:?})",
                    e.id,
                    e.status
                )
            })?;
            (e.id.clone(), e.q1.clone(), e.q2.clone(), map)
        }
        [a, b] => {
            // two literals run the generic swap chain
            let q1: MeshPattern = a.parse().with_context(|| format!("bad pattern {a:?}"))?;
            let q2: MeshPattern = b.parse().with_context(|| format!("bad pattern {b:?}"))?;
            (
                format!("{q1} vs {q2}"),
                q1,
                q2,
                meshpat::bij::MapKind::SwapChain,
            )
        }
        _ => anyhow::bail!("expected a pair id or two pattern literals"),
    };
    let (_, steps) = map
        .apply_traced(&pi, &q1, &q2)
        .with_context(|| format!("map for {label} failed on {pi}"))?;
    let rows: Vec<serde_json::Value> = steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            serde_json::json!({
                "step": i + 1,
                "swap": [s.swap.0, s.swap.1],
                "result": s.result.to_string(),
            })
        })
        .collect();
    println!("{}", serde_json::to_string(&rows).expect("serializable"));
    Ok(ExitCode::SUCCESS)
}
