use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use pindist::generators::generate_in;
use pindist::pinned::{distance_set, second_moment_identity_rhs, sweep_second_moments};
use pindist::verify::{bisector_check, field_axioms_check, PairSelection, PinAnalysis};
use pindist::{SetSpec, Space, VerificationReport, GENERATOR_ID};
use serde_json::json;

use crate::config::{CommonArgs, Resolved, RunConfig};

/// Field orders up to this get the exhaustive O(q^3) axiom check.
const FIELD_AXIOMS_MAX_Q: u32 = 49;
/// Spaces up to this size get an exhaustive bisector check.
const BISECTOR_EXHAUSTIVE_MAX: u64 = 81;
/// Spaces up to this size get a sampled bisector check.
const BISECTOR_SAMPLED_MAX: u64 = 4096;
const BISECTOR_SAMPLES: usize = 200;

fn unix_timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn stamp(report: &mut VerificationReport, resolved: &Resolved) {
    let m = &mut report.metadata;
    m.insert("config".into(), serde_json::to_value(&resolved.config).expect("config serializes"));
    m.insert("modulus".into(), json!(resolved.field.modulus()));
    m.insert("generator".into(), json!(GENERATOR_ID));
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    let hash = report.content_hash();
    report.metadata.insert("content_hash".into(), json!(hash));
    report.metadata.insert("timestamp".into(), json!(unix_timestamp()));
}

fn space_for(resolved: &Resolved) -> Result<Space> {
    let c = &resolved.config;
    Ok(Space::with_cap(resolved.field.clone(), c.d, c.cap)?)
}

pub fn field_info(args: &CommonArgs) -> Result<bool> {
    let resolved = args.resolve()?;
    let f = &resolved.field;
    let info = json!({
        "p": f.characteristic(),
        "k": f.degree(),
        "q": f.order(),
        "modulus": f.modulus(),
        "tables": f.has_tables(),
    });
    println!("{}", serde_json::to_string_pretty(&info)?);
    Ok(true)
}

pub fn verify(args: &CommonArgs) -> Result<bool> {
    let resolved = args.resolve()?;
    let c = &resolved.config;
    let space = space_for(&resolved)?;
    let set = generate_in(&space, &resolved.spec)?;
    let q = space.field().order();

    let mut reports = Vec::new();
    if q <= FIELD_AXIOMS_MAX_Q {
        reports.push(field_axioms_check(space.field()));
    }
    let analysis = PinAnalysis::new(&set, c.backend)?;
    reports.push(analysis.second_moment_identity()?);
    reports.push(analysis.pigeonhole_audit(c.a)?);
    reports.push(analysis.main_theorem(c.a)?);
    reports.push(analysis.pin_form());
    if set.len() >= q as usize {
        reports.push(analysis.corollary(c.a)?);
    }
    if space.size() <= BISECTOR_EXHAUSTIVE_MAX {
        reports.push(bisector_check(&space, PairSelection::Exhaustive)?);
    } else if space.size() <= BISECTOR_SAMPLED_MAX {
        reports.push(bisector_check(&space, PairSelection::Sampled(BISECTOR_SAMPLES))?);
    }
    for r in &mut reports {
        stamp(r, &resolved);
    }

    match &c.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (i, r) in reports.iter().enumerate() {
                let path = dir.join(format!("{i:02}-{}.json", r.check));
                fs::write(&path, r.to_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&reports)?),
    }
    for r in &reports {
        eprintln!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.check);
    }
    if let Some(failed) = reports.iter().find(|r| !r.passed) {
        eprintln!("first failing report:\n{}", failed.to_json());
        return Ok(false);
    }
    Ok(true)
}

fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

pub fn sweep(args: &CommonArgs) -> Result<bool> {
    let resolved = args.resolve()?;
    let c = &resolved.config;
    let space = space_for(&resolved)?;
    let set = generate_in(&space, &resolved.spec)?;
    let result = sweep_second_moments(&set, c.backend)?;

    let mut csv = String::from("pin_index,second_moment,pinned_count\n");
    for (y, (m, pc)) in result.second_moments().iter().zip(result.pinned_counts()).enumerate() {
        writeln!(csv, "{y},{m},{pc}").unwrap();
    }
    let total = result.total();
    let rhs = second_moment_identity_rhs(space.field().order() as u64, space.dim(), set.len() as u64)?;
    let summary = json!({
        "schema": "pindist-sweep/1",
        "config": c,
        "modulus": resolved.field.modulus(),
        "generator": GENERATOR_ID,
        "set_size": set.len(),
        "pins": result.len(),
        "total_second_moment": total,
        "identity_rhs": rhs,
        "totals_match": total == rhs,
    });
    let summary = serde_json::to_string_pretty(&summary)? + "\n";
    match &c.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            let sp = summary_path(path);
            fs::write(&sp, &summary).with_context(|| format!("writing {}", sp.display()))?;
        }
        None => {
            std::io::stdout().write_all(csv.as_bytes())?;
            eprint!("{summary}");
        }
    }
    if total != rhs {
        eprintln!("total second moment {total} differs from the identity value {rhs}");
    }
    Ok(total == rhs)
}

pub fn experiment(args: &CommonArgs, trials: u64, sizes: &[u64]) -> Result<bool> {
    let resolved = args.resolve()?;
    let c: &RunConfig = &resolved.config;
    let space = space_for(&resolved)?;
    let (num, den) = (c.a.num() as u128, c.a.den() as u128);
    let q = space.field().order() as u128;
    let pins = space.size();

    let mut csv = String::from(
        "size,trial,seed,pins,pin_success,pin_success_fraction,good_pins,good_pin_fraction,distance_set_size\n",
    );
    let mut ok = true;
    for &size in sizes {
        for trial in 0..trials {
            let seed = c.seed.wrapping_add(trial);
            let spec = SetSpec::Random { size, seed };
            let set = generate_in(&space, &spec)?;
            let analysis = PinAnalysis::new(&set, c.backend)?;
            let success = analysis
                .sweep()
                .pinned_counts()
                .iter()
                .filter(|&&pc| 2 * num * pc as u128 >= den * q)
                .count();
            let good = analysis.good_pins(c.a)?.len();
            if num * (good as u128) < (num - den) * pins as u128 {
                eprintln!("good-pin bound violated for size {size}, seed {seed}");
                ok = false;
            }
            let distances = distance_set(&set).len();
            writeln!(
                csv,
                "{size},{trial},{seed},{pins},{success},{:.6},{good},{:.6},{distances}",
                success as f64 / pins as f64,
                good as f64 / pins as f64,
            )
            .unwrap();
        }
    }
    match &c.out {
        Some(path) => fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(ok)
}
