//! Acceptance suite. Runs every criterion, prints one `PASS`/`FAIL` line per
//! criterion with its measured values, and exits non-zero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nlocal::entanglement::concurrence;
use nlocal::harness::{
    frontier_scan, frontiers_nested, region_scan, run_campaign, CampaignConfig, Claim, Ensemble, RegionGrid,
};
use nlocal::measures::{delta_n, measure_with, werner_delta, VmaxMode};
use nlocal::network::{b_linear, b_star, b_value, NetworkSpec, Topology};
use nlocal::optimizer::{maximize, OptimizerConfig};
use nlocal::qstate::{make_state, random_state, RandomKind, StateFamily, TwoQubitState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240531;

type Outcome = Result<String, String>;

fn state(family: StateFamily) -> TwoQubitState {
    make_state(&family).expect("valid family")
}

fn bell() -> TwoQubitState {
    state(StateFamily::Bell { index: 0 })
}

fn within(label: &str, value: f64, target: f64, tol: f64) -> Outcome {
    let msg = format!("{label} = {value:.10} (target {target} ± {tol:e})");
    if (value - target).abs() <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let failed = parts.iter().any(Result::is_err);
    let text = parts
        .into_iter()
        .map(|p| match p {
            Ok(s) => s,
            Err(s) => format!("[x] {s}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

fn runtime(label: &str, elapsed: Duration, limit: Duration) -> Outcome {
    let msg = format!("{label} took {elapsed:.2?} (limit {limit:?})");
    if elapsed < limit {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn three_source_star() -> Outcome {
    let json = include_str!("../networks/star3_one_separable.json");
    let start = Instant::now();
    let net = NetworkSpec::from_json(json).map_err(|e| e.to_string())?;
    let b = b_star(&net).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    all(vec![
        within("B_star", b, 1.01332, 1e-4),
        runtime("evaluation", elapsed, Duration::from_millis(1)),
    ])
}

fn five_source_star() -> Outcome {
    let mut sources = vec![bell(); 4];
    sources.push(state(StateFamily::Werner { v: 0.25 }));
    let star = NetworkSpec::star(sources.clone()).unwrap();
    let chain = NetworkSpec::linear(sources).unwrap();
    let b_lin = b_linear(&chain).unwrap();
    let chain_part = if b_lin <= 1.0 + 1e-12 {
        Ok(format!("B_linear = {b_lin:.10} ≤ 1"))
    } else {
        Err(format!("B_linear = {b_lin:.10} > 1"))
    };
    all(vec![within("B_star", b_star(&star).unwrap(), 2f64.powf(0.1), 1e-9), chain_part])
}

fn measures_of_example_states() -> Outcome {
    let pure = [0.8, 0.8, 0.9].map(|c| state(StateFamily::PureSchmidt { c })).to_vec();
    let mixed = [0.8, 0.8, 0.9].map(|p| state(StateFamily::HorodeckiMix { p })).to_vec();
    let m = |sources: &[TwoQubitState], topology| {
        let net = NetworkSpec::new(topology, sources.to_vec()).unwrap();
        measure_with(b_value(&net), VmaxMode::Printed).m
    };
    all(vec![
        within("M'_lin", m(&pure, Topology::Linear), 0.6169, 1e-3),
        within("M''_lin", m(&mixed, Topology::Linear), 0.1771, 1e-3),
        within("M'_star", m(&pure, Topology::Star), 0.7268, 1e-3),
        within("M''_star", m(&mixed, Topology::Star), 0.4267, 1e-3),
    ])
}

fn werner_advantage() -> Outcome {
    let vis = [0.28, 0.97, 0.97, 0.97];
    let formula = werner_delta(&vis, VmaxMode::Printed).unwrap();
    let sources: Vec<_> = vis.iter().map(|&v| state(StateFamily::Werner { v })).collect();
    let from_states = delta_n(&sources, VmaxMode::Printed).unwrap();
    all(vec![
        within("D4 (visibilities)", formula, 0.0133, 5e-4),
        within("D4 (states)", from_states, 0.0133, 5e-4),
    ])
}

fn concurrence_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=9 {
        let p = k as f64 / 10.0;
        worst = worst.max((concurrence(&state(StateFamily::HorodeckiMix { p })).value() - p).abs());
    }
    // Subclass x4 = y1 = 0, physical when y2² ≤ x2 x3.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_sub: f64 = 0.0;
    for _ in 0..500 {
        let w: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let total: f64 = w.iter().sum();
        let (x1, x2, x3) = (w[0] / total, w[1] / total, w[2] / total);
        let y2 = rng.random::<f64>() * (x2 * x3).sqrt();
        let s = state(StateFamily::XState { x1, x2, x3, x4: 0.0, y1: 0.0, y2 });
        worst_sub = worst_sub.max((concurrence(&s).value() - 2.0 * y2).abs());
    }
    let bells: f64 = (0..4)
        .map(|index| (concurrence(&state(StateFamily::Bell { index })).value() - 1.0).abs())
        .fold(0.0, f64::max);
    let mixed = concurrence(&TwoQubitState::maximally_mixed()).value();
    let check = |label: &str, err: f64| {
        let msg = format!("{label} max error {err:.2e}");
        if err <= 1e-10 {
            Ok(msg)
        } else {
            Err(msg)
        }
    };
    all(vec![
        check("Horodecki p", worst),
        check("X subclass 2y2", worst_sub),
        check("Bell", bells),
        check("I/4", mixed),
    ])
}

fn tightness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let (mut worst_lin, mut worst_star): (f64, f64) = (0.0, 0.0);
    let mut networks = 0;
    for kind in [RandomKind::PureSchmidt, RandomKind::Rank2Bd] {
        for i in 0..1000 {
            let n = 2 + i % 3;
            let sources: Vec<_> = (0..n).map(|_| random_state(&mut rng, kind)).collect();
            let k: f64 = sources.iter().map(|s| concurrence(s).value()).product();
            let lin = b_linear(&NetworkSpec::linear(sources.clone()).unwrap()).unwrap();
            let star = b_star(&NetworkSpec::star(sources).unwrap()).unwrap();
            worst_lin = worst_lin.max((lin - (1.0 + k).sqrt()).abs());
            worst_star = worst_star.max((star - (1.0 + k.powf(2.0 / n as f64)).sqrt()).abs());
            networks += 1;
        }
    }
    let elapsed = start.elapsed();
    let check = |label: &str, err: f64| {
        let msg = format!("{label} max |gap| {err:.2e} over {networks} networks");
        if err <= 1e-9 {
            Ok(msg)
        } else {
            Err(msg)
        }
    };
    all(vec![
        check("chain", worst_lin),
        check("star", worst_star),
        runtime("suite", elapsed, Duration::from_secs(5)),
    ])
}

fn optimizer_oracle() -> Outcome {
    let start = Instant::now();
    let config = OptimizerConfig::default();
    let mut parts = Vec::new();
    for topology in [Topology::Linear, Topology::Star] {
        for n in [2, 3] {
            let mut worst: f64 = 0.0;
            let mut worst_signed = 0.0;
            let mut outside = 0;
            for i in 0..100 {
                let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
                rng.set_stream((i + 1000 * n) as u64);
                let sources = (0..n).map(|_| random_state(&mut rng, RandomKind::MixedGinibre)).collect();
                let net = NetworkSpec::new(topology, sources).unwrap();
                let value = maximize(&net, &config, SEED + i as u64).unwrap().value;
                let gap = value - b_value(&net);
                if gap.abs() > 1e-6 {
                    outside += 1;
                }
                if gap.abs() > worst {
                    worst = gap.abs();
                    worst_signed = gap;
                }
            }
            let msg = format!("{topology} n={n}: {outside}/100 outside, worst optimizer − closed form {worst_signed:+.2e}");
            parts.push(if outside == 0 { Ok(msg) } else { Err(msg) });
        }
    }
    parts.push(runtime("suite", start.elapsed(), Duration::from_secs(60)));
    all(parts)
}

fn campaign_summary(cfg: &CampaignConfig) -> Outcome {
    let r = run_campaign(cfg).map_err(|e| e.to_string())?;
    let msg = format!(
        "{} n={} {}: {} violations in {} evaluated, min margin {:.3e}",
        r.claim,
        r.n,
        r.ensemble,
        r.violations.len(),
        r.evaluated,
        r.min_margin.unwrap_or(f64::NAN)
    );
    if r.violations.is_empty() && r.evaluated > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn conjecture_campaigns() -> Outcome {
    let mut parts = Vec::new();
    for claim in [Claim::Conj1, Claim::Conj2] {
        for n in [4, 5] {
            let cfg = CampaignConfig::new(claim, n, 1000, Ensemble::random(RandomKind::MixedGinibre), SEED + 8);
            parts.push(campaign_summary(&cfg));
        }
    }
    all(parts)
}

fn no_go_campaigns() -> Outcome {
    let mut parts = Vec::new();
    for n in 3usize..=6 {
        let ensemble = Ensemble::Random { kind: RandomKind::MixedGinibre, separable: n.div_ceil(2) };
        parts.push(campaign_summary(&CampaignConfig::new(Claim::Thm7, n, 1000, ensemble, SEED + 9)));
    }
    for n in 2..=5 {
        let ensemble = Ensemble::Random { kind: RandomKind::MixedGinibre, separable: 1 };
        let r = run_campaign(&CampaignConfig::new(Claim::Thm1, n, 1000, ensemble, SEED + 10)).unwrap();
        let max_b = r.records.iter().map(|t| t.b).fold(f64::NEG_INFINITY, f64::max);
        let msg = format!("thm1 n={n} one separable: max B_linear {max_b:.12} over {} trials", r.records.len());
        parts.push(if max_b <= 1.0 + 1e-12 && r.records.len() == 1000 { Ok(msg) } else { Err(msg) });
    }
    all(parts)
}

fn star_entangled_probe() -> Outcome {
    let mut sources = vec![bell(); 4];
    sources.push(state(StateFamily::Werner { v: 0.34 }));
    let r = run_campaign(&CampaignConfig::new(Claim::Thm5, 5, 1, Ensemble::Fixed(sources), SEED)).unwrap();
    let Some(v) = r.violations.first() else {
        return Err("no violation record".into());
    };
    let dump = if v.reverified && v.sources.len() == 5 && v.sources.iter().all(|s| matches!(s, StateFamily::Explicit { .. })) {
        Ok(format!("violation record reverified from {} dumped matrices", v.sources.len()))
    } else {
        Err("violation record incomplete".into())
    };
    all(vec![within("margin", v.margin, -0.06329, 1e-4), dump])
}

fn boundary_straddles(grid: &RegionGrid) -> Outcome {
    let side = grid.resolution + 1;
    let step = 1.0 / grid.resolution as f64;
    let mut flips = 0;
    let mut bad = 0;
    for flat in 0..grid.cells.len() {
        let idx: Vec<usize> = (0..grid.n).map(|d| flat / side.pow((grid.n - 1 - d) as u32) % side).collect();
        let here = grid.cell(&idx);
        for d in 0..grid.n {
            if idx[d] + 1 == side {
                continue;
            }
            let mut up = idx.clone();
            up[d] += 1;
            let next = grid.cell(&up);
            if here.detected != next.detected {
                flips += 1;
                let (lo, hi) = if here.detected { (next, here) } else { (here, next) };
                // Products on either side bracket the threshold, each within one cell step of it.
                let cell = hi.product - lo.product;
                let ok = lo.product <= grid.threshold
                    && hi.product > grid.threshold
                    && grid.threshold - lo.product <= cell + 1e-12
                    && hi.product - grid.threshold <= cell + 1e-12
                    && cell <= step + 1e-12;
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    let msg = format!(
        "{} n={} threshold {:.6}: {flips} boundary pairs, {bad} misplaced",
        grid.topology, grid.n, grid.threshold
    );
    if flips > 0 && bad == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn thresholds() -> Outcome {
    let lin = region_scan(Topology::Linear, 3, 40).unwrap();
    let star = region_scan(Topology::Star, 3, 40).unwrap();
    let thresholds = all(vec![
        within("chain threshold", lin.threshold, 0.5, 1e-15),
        within("star threshold", star.threshold, 2f64.powf(-1.5), 1e-15),
    ]);
    let nested = frontiers_nested(&frontier_scan(&[3, 4, 5, 6], 200).unwrap());
    let frontier = if nested {
        Ok("frontiers for n = 3..6 nested inward".to_string())
    } else {
        Err("frontiers for n = 3..6 not nested".to_string())
    };
    all(vec![thresholds, boundary_straddles(&lin), boundary_straddles(&star), frontier])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("three-source star value", three_source_star),
        ("five-source star value and chain non-violation", five_source_star),
        ("nonlocality measures of the example states", measures_of_example_states),
        ("Werner star advantage", werner_advantage),
        ("concurrence suite", concurrence_suite),
        ("upper-bound saturation", tightness),
        ("optimizer matches closed form", optimizer_oracle),
        ("lower-bound conjecture campaigns", conjecture_campaigns),
        ("separable no-go campaigns", no_go_campaigns),
        ("entangled star bound probe", star_entangled_probe),
        ("thresholds and frontiers", thresholds),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
