//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use pindist::generators::generate_in;
use pindist::geometry::sphere;
use pindist::pinned::{second_moment_identity_rhs, sweep_second_moments};
use pindist::verify::{bisector_check, field_axioms_check, PairSelection, PinAnalysis};
use pindist::{make_field, Backend, PointSet, RationalParam, SetSpec, Space, SweepResult};

type Outcome = Result<String, String>;

/// (p, k, d) cells for the second-moment, theorem, corollary and
/// Cauchy-Schwarz criteria.
const CELLS: &[(u64, u32, usize)] = &[
    (3, 1, 2), (5, 1, 2), (7, 1, 2), (3, 2, 2), (5, 2, 2), (3, 3, 2), (7, 2, 2),
    (3, 1, 3), (5, 1, 3), (7, 1, 3),
];
const RANDOM_SETS_PER_CELL: u64 = 50;
const A_VALUES: &[(u64, u64)] = &[(3, 2), (2, 1), (4, 1)];

const NAIVE_PERF_LIMIT: Duration = Duration::from_secs(60);
const DFT_PERF_LIMIT: Duration = Duration::from_secs(30);
const CHARSUM_TOLERANCE: f64 = 1e-6;

fn space(p: u64, k: u32, d: usize) -> Space {
    Space::new(Arc::new(make_field(p, k).unwrap()), d).unwrap()
}

fn a(num: u64, den: u64) -> RationalParam {
    RationalParam::new(num, den).unwrap()
}

struct CellData {
    space: Space,
    sets: Vec<(PointSet, SweepResult)>,
}

fn structured_specs(d: usize) -> Vec<String> {
    let ones = vec!["1"; d].join(",");
    let mut origin = vec!["0"; d];
    origin[0] = "1";
    let subspace = if d == 2 { "subspace:1,2".to_string() } else { "subspace:1,0,0:0,1,2".to_string() };
    vec![
        "full".into(),
        "sphere:0".into(),
        "sphere:1".into(),
        format!("line:{}:{}", origin.join(","), ones),
        subspace,
        // singleton: the equality case of Cauchy-Schwarz
        "random:1:seed=5".into(),
    ]
}

/// Random sizes spread quadratically over 0..=q^d so that small sets are
/// well represented.
fn random_specs(cell: usize, n: u64) -> Vec<SetSpec> {
    let last = RANDOM_SETS_PER_CELL - 1;
    (0..RANDOM_SETS_PER_CELL)
        .map(|i| SetSpec::Random { size: n * i * i / (last * last), seed: 1000 * cell as u64 + i })
        .collect()
}

fn cells() -> &'static [CellData] {
    static DATA: OnceLock<Vec<CellData>> = OnceLock::new();
    DATA.get_or_init(|| {
        CELLS
            .iter()
            .enumerate()
            .map(|(ci, &(p, k, d))| {
                let s = space(p, k, d);
                let mut specs: Vec<SetSpec> =
                    structured_specs(d).iter().map(|t| SetSpec::parse(t).unwrap()).collect();
                specs.extend(random_specs(ci, s.size()));
                let sets = specs
                    .iter()
                    .map(|spec| {
                        let set = generate_in(&s, spec).unwrap();
                        let sweep = sweep_second_moments(&set, Backend::Naive).unwrap();
                        (set, sweep)
                    })
                    .collect();
                CellData { space: s, sets }
            })
            .collect()
    })
}

fn label(s: &Space) -> String {
    format!("F_{}^{}, d={}", s.field().characteristic(), s.field().degree(), s.dim())
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for cell in cells() {
        for (set, sweep) in &cell.sets {
            let an = PinAnalysis::from_sweep(set, sweep.clone());
            let r = an.second_moment_identity().map_err(|e| e.to_string())?;
            let s = &cell.space;
            let rhs = second_moment_identity_rhs(s.field().order() as u64, s.dim(), set.len() as u64).unwrap();
            if !r.passed || sweep.total() != rhs {
                return Err(format!(
                    "{} set {}: total {} != {}",
                    label(s), set.descriptor(), sweep.total(), rhs
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} sets across {} cells, exact equality", CELLS.len()))
}

fn criterion_2() -> Outcome {
    let mut pairs = 0u128;
    let mut worst = 0.0f64;
    for p_k in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        for d in [2usize, 3] {
            let s = space(p_k.0, p_k.1, d);
            let r = bisector_check(&s, PairSelection::Exhaustive).map_err(|e| e.to_string())?;
            let dev = match r.witness("charsum_max_abs_deviation") {
                Some(pindist::verify::WitnessValue::Real(v)) => *v,
                _ => return Err("missing deviation witness".into()),
            };
            worst = worst.max(dev);
            if !r.passed || dev > CHARSUM_TOLERANCE {
                return Err(format!("{}: bisector check failed (max deviation {dev:e})", label(&s)));
            }
            pairs += r.integer_witness("pairs_checked").unwrap();
        }
    }
    Ok(format!("{pairs} unordered pairs exact; character sums within {worst:.1e} (tol {CHARSUM_TOLERANCE:e})"))
}

fn criterion_3() -> Outcome {
    let mut runs = 0;
    for cell in cells() {
        for (set, sweep) in &cell.sets {
            let an = PinAnalysis::from_sweep(set, sweep.clone());
            for &(num, den) in A_VALUES {
                let r = an.main_theorem(a(num, den)).map_err(|e| e.to_string())?;
                if !r.passed {
                    return Err(format!("{} set {} a={num}/{den}:\n{}", label(&cell.space), set.descriptor(), r.to_json()));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (set, a) runs: size bound and pinned bound hold on every good pin"))
}

fn criterion_4() -> Outcome {
    let mut runs = 0;
    for cell in cells() {
        let q = cell.space.field().order() as usize;
        for (set, sweep) in cell.sets.iter().filter(|(s, _)| s.len() >= q) {
            let an = PinAnalysis::from_sweep(set, sweep.clone());
            let r = an.corollary(a(2, 1)).map_err(|e| e.to_string())?;
            if !r.passed {
                return Err(format!("{} set {}:\n{}", label(&cell.space), set.descriptor(), r.to_json()));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} sets with |E| >= q, a = 2"))
}

fn criterion_5() -> Outcome {
    let mut runs = 0;
    for p in [3u64, 5, 7, 11, 13] {
        for d in [2usize, 3] {
            let s = space(p, 1, d);
            for i in 0..20u64 {
                let size = (s.size() * (i + 1)) / 21;
                let set = generate_in(&s, &SetSpec::Random { size, seed: 77 + i }).unwrap();
                let naive = sweep_second_moments(&set, Backend::Naive).map_err(|e| e.to_string())?;
                let dft = sweep_second_moments(&set, Backend::Dft).map_err(|e| e.to_string())?;
                if naive != dft {
                    return Err(format!("{} set {} differs between backends", label(&s), set.descriptor()));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} sets, entrywise equal second moments and pinned counts"))
}

fn criterion_6() -> Outcome {
    let mut runs = 0;
    let mut singleton_equalities = 0;
    for cell in cells() {
        for (set, sweep) in &cell.sets {
            let r = PinAnalysis::from_sweep(set, sweep.clone()).pin_form();
            if !r.passed {
                return Err(format!("{} set {} pin {:?}", label(&cell.space), set.descriptor(), r.counterexample_pin));
            }
            if set.len() == 1 {
                if r.integer_witness("equality_pins") != Some(cell.space.size() as u128) {
                    return Err(format!("{}: singleton does not attain equality everywhere", label(&cell.space)));
                }
                singleton_equalities += 1;
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} sets, every pin; equality on all pins for {singleton_equalities} singletons"))
}

fn criterion_7() -> Outcome {
    let fixture: serde_json::Value =
        serde_json::from_str(include_str!("fixtures/f3_plane_full.json")).map_err(|e| e.to_string())?;
    let s = space(3, 1, 2);
    let full = PointSet::full(s.clone());
    let sizes: Vec<usize> = s.field().elements().map(|t| sphere(&s, t).unwrap().len()).collect();
    let an = PinAnalysis::new(&full, Backend::Naive).map_err(|e| e.to_string())?;
    let good = an.good_pins(a(2, 1)).map_err(|e| e.to_string())?;
    let checks = [
        ("sphere sizes", serde_json::json!(sizes), &fixture["sphere_sizes"]),
        ("second moments", serde_json::json!(an.sweep().second_moments()), &fixture["second_moments"]),
        ("pinned counts", serde_json::json!(an.sweep().pinned_counts()), &fixture["pinned_counts"]),
        ("total", serde_json::json!(an.sweep().total() as u64), &fixture["total_second_moment"]),
        ("good pins", serde_json::json!(good), &fixture["good_pins"]),
    ];
    for (what, got, want) in checks {
        if &got != want {
            return Err(format!("{what}: got {got}, fixture {want}"));
        }
    }
    Ok("sphere sizes (1,4,4), per-pin 33, total 297, Y = all 9 pins".into())
}

fn criterion_8() -> Outcome {
    let s = space(31, 1, 3);
    let set = generate_in(&s, &SetSpec::Random { size: 5000, seed: 8 }).unwrap();
    let start = Instant::now();
    let naive = sweep_second_moments(&set, Backend::Naive).map_err(|e| e.to_string())?;
    let naive_time = start.elapsed();
    let rhs = second_moment_identity_rhs(31, 3, 5000).unwrap();
    if naive.total() != rhs {
        return Err("naive sweep total is wrong".into());
    }

    let s = space(127, 1, 2);
    let set = generate_in(&s, &SetSpec::Random { size: 8000, seed: 8 }).unwrap();
    let start = Instant::now();
    let dft = sweep_second_moments(&set, Backend::Dft).map_err(|e| e.to_string())?;
    let dft_time = start.elapsed();
    if dft.total() != second_moment_identity_rhs(127, 2, 8000).unwrap() {
        return Err("dft sweep total is wrong".into());
    }
    let detail = format!(
        "naive q=31 d=3 |E|=5000: {:.2}s (limit {}s); dft q=127 d=2 |E|=8000: {:.2}s (limit {}s); {} threads",
        naive_time.as_secs_f64(),
        NAIVE_PERF_LIMIT.as_secs(),
        dft_time.as_secs_f64(),
        DFT_PERF_LIMIT.as_secs(),
        rayon::current_num_threads(),
    );
    if naive_time > NAIVE_PERF_LIMIT || dft_time > DFT_PERF_LIMIT {
        return Err(detail);
    }
    Ok(detail)
}

fn criterion_9() -> Outcome {
    let mut orders = Vec::new();
    for p in (3u64..=49).step_by(2).filter(|&p| pindist::field::is_prime(p)) {
        let mut k = 1;
        while p.pow(k) <= 49 {
            let f = make_field(p, k).map_err(|e| e.to_string())?;
            let r = field_axioms_check(&f);
            if !r.passed {
                return Err(format!("F_{p}^{k}: element {:?} violates an axiom", r.counterexample_pin));
            }
            orders.push(f.order());
            k += 1;
        }
    }
    orders.sort_unstable();
    Ok(format!("{} fields exhaustively: q in {:?}", orders.len(), orders))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "second-moment average identity", criterion_1),
        (2, "bisector hyperplane count", criterion_2),
        (3, "good-pin size and pinned distance bound", criterion_3),
        (4, "corollary for |E| >= q", criterion_4),
        (5, "naive vs dft sweep equivalence", criterion_5),
        (6, "Cauchy-Schwarz pinned bound", criterion_6),
        (7, "F_3^2 worked micro-oracle", criterion_7),
        (8, "sweep performance", criterion_8),
        (9, "field axioms for q <= 49", criterion_9),
    ];
    // Warm the shared cell data outside of any single criterion's timing.
    let start = Instant::now();
    let sets: usize = cells().iter().map(|c| c.sets.len()).sum();
    println!("prepared {sets} point sets and sweeps in {:.2}s", start.elapsed().as_secs_f64());

    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL  {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
