//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every check prints its verdict line; exits nonzero if any check fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lambda_tree::gibbs::{fields_from_ratios, is_consistent, propagate, Interaction};
use lambda_tree::ground::{brute_force_minima, generators_for, realize};
use lambda_tree::model::{LambdaParams, Region};
use lambda_tree::poly::{count_positive_real_roots, Poly};
use lambda_tree::solver::{
    bisect_sign_change, case_identity_check, count_ti_roots, reduced_map, reduced_roots, sign_changes,
    threshold_regime, thresholds, ti_map, two_periodic_report, BoltzmannWeights, CanonicalParams, Case, PrintedForm,
    Regime, AUDIT_TOL, ZERO_BAND,
};
use lambda_tree::{FieldRatios, TreeShape};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THETA_D: f64 = 0.323591553488076;

const ROOT_CHECK_FLOOR: f64 = 0.01;

type Outcome = Result<String, String>;

type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn case_ii(x: f64) -> BoltzmannWeights {
    BoltzmannWeights::new(x, 1.0, x).unwrap()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn thresholds_at_ten() -> Outcome {
    let start = Instant::now();
    let t = thresholds(10.0).ok_or("no thresholds at b = 10")?;
    let elapsed = start.elapsed();
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    ensure(rel(t.x1, 2.0) < 1e-12 && rel(t.x2, 5.0) < 1e-12, || format!("x1={} x2={}", t.x1, t.x2))?;
    let (e1, e2) = (rel(t.eps1, 1.0 / 32.0), rel(t.eps2, 4.0 / 125.0));
    ensure(e1 < 1e-12 && e2 < 1e-12, || format!("eps rel errors {e1:e}, {e2:e}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("eps1={} eps2={} rel err {e1:.1e}/{e2:.1e} in {elapsed:?}", t.eps1, t.eps2))
}

fn regime_map() -> Outcome {
    let grid: Vec<CanonicalParams> = (0..50)
        .flat_map(|i| {
            let b = 2.0 + 18.0 * i as f64 / 49.0;
            (0..50).map(move |j| CanonicalParams::new(1e-3 * 1000f64.powf(j as f64 / 49.0), b).unwrap())
        })
        .collect();
    let start = Instant::now();
    let counts: Vec<usize> = grid.iter().map(|c| reduced_roots(c).len()).collect();
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;

    let mut tally = [0usize; 4];
    for (c, &found) in grid.iter().zip(&counts) {
        let (a, b) = (c.a_can, c.b_can);
        let (regime, _) = threshold_regime(c);
        ensure(found == regime.root_count(), || format!("a={a} b={b}: {found} roots, thresholds say {regime:?}"))?;
        if regime != Regime::Two {
            let exact = Poly::new(c.cubic().coeffs().iter().map(|&v| BigRational::from_float(v).unwrap()).collect());
            let sturm = count_positive_real_roots(&exact);
            ensure(sturm == found, || format!("a={a} b={b}: Sturm count {sturm}, isolation {found}"))?;
        }
        tally[regime.root_count()] += 1;
    }
    ensure(tally[3] > 0, || "no grid point in the three-root regime".into())?;
    Ok(format!(
        "2500 points agree with the thresholds and the exact Sturm count (1 root: {}, 2: {}, 3: {}); isolation took {elapsed:?}",
        tally[1], tally[2], tally[3]
    ))
}

fn theta_d() -> Outcome {
    let d = |x: f64| two_periodic_report(&case_ii(x)).unwrap();
    let xs: Vec<f64> = (1..=2000).map(|i| i as f64 / 2000.0).collect();
    let reports: Vec<_> = xs.iter().map(|&x| d(x)).collect();
    let vals: Vec<f64> = reports.iter().map(|r| r.discriminant).collect();
    let tol: Vec<f64> = reports.iter().map(|r| ZERO_BAND * r.discriminant_scale()).collect();
    let changes = sign_changes(&vals, &tol);
    ensure(changes.len() == 1, || format!("{} sign changes of D on (0, 1]", changes.len()))?;
    let i = changes[0];
    let theta = bisect_sign_change(|x| d(x).discriminant, xs[i], xs[i + 1]).map_err(|e| e.to_string())?;
    ensure((theta - THETA_D).abs() < 1e-9, || format!("sign change at {theta}"))?;

    // below about 1e-2 the roots grow like 1/x̄², and an absolute residual of
    // 1e-9 drops under the spacing of doubles near them
    let checked = xs.iter().zip(&reports).filter(|(&x, _)| (ROOT_CHECK_FLOOR..theta).contains(&x));
    for (&x, r) in checked {
        ensure(r.quad[1] < 0.0 && r.discriminant > 0.0, || format!("x={x}: B={} D={}", r.quad[1], r.discriminant))?;
        ensure(r.proper_roots.len() == 2, || format!("x={x}: {} proper roots", r.proper_roots.len()))?;
        let w = case_ii(x);
        let f = |u| reduced_map(u, &w);
        for &u in &r.proper_roots {
            ensure(u > 0.0 && (u - f(f(u))).abs() < 1e-9 && (u - f(u)).abs() > 1e-6, || {
                format!("x={x}: root {u} has |u-f(f(u))|={:e}, |u-f(u)|={:e}", (u - f(f(u))).abs(), (u - f(u)).abs())
            })?;
        }
    }
    Ok(format!(
        "single sign change at {theta:.15}, |err| = {:.1e}; roots checked on [{ROOT_CHECK_FLOOR}, theta_D)",
        (theta - THETA_D).abs()
    ))
}

fn negativity() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for case in [Case::I, Case::III] {
        let grid = case.default_grid();
        ensure(grid.len() == 100, || format!("{case:?} grid has {} samples", grid.len()))?;
        for params in grid {
            let r = two_periodic_report(&case.weights(&params).unwrap()).unwrap();
            ensure(r.discriminant < 0.0, || format!("{case:?} at {params:?}: D = {}", r.discriminant))?;
            ensure(!r.two_periodic_exists, || format!("{case:?} at {params:?}: proper 2-periodic roots"))?;
            worst = worst.max(r.discriminant / r.discriminant_scale());
        }
    }
    Ok(format!("D < 0 at all 200 samples (max D/(B²+4|AC|) = {worst:.3e})"))
}

fn periodic_without_ti_transition() -> Outcome {
    let witnesses: Vec<f64> = (1..200)
        .map(|i| THETA_D * i as f64 / 200.0)
        .filter(|&x| {
            let w = case_ii(x);
            two_periodic_report(&w).unwrap().two_periodic_exists && count_ti_roots(&w).regime == Regime::Unique
        })
        .collect();
    ensure(!witnesses.is_empty(), || "no witness in the case (ii) sweep".into())?;
    Ok(format!("{} of 199 points below theta_D, e.g. x = {:.6}", witnesses.len(), witnesses[0]))
}

fn consistency() -> Outcome {
    let start = Instant::now();
    let inter = Interaction::from_lambda(&LambdaParams::new(0.4, -0.3, 0.8, 1.2).unwrap());
    let shape = TreeShape::binary(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_ok, mut weakest_bad) = (0.0f64, f64::INFINITY);
    for trial in 0..20 {
        let mut leaves = FieldRatios::new(shape, 3);
        for x in shape.level(2) {
            leaves.set(&x, vec![rng.gen_range(-2.0f64..2.0).exp(), rng.gen_range(-2.0f64..2.0).exp()]).unwrap();
        }
        let u = propagate(&inter, &leaves).map_err(|e| e.to_string())?;
        let h = fields_from_ratios(&u, rng.gen_range(-1.0..1.0)).map_err(|e| e.to_string())?;
        let ok = is_consistent(&inter, shape, &h).map_err(|e| e.to_string())?;
        ensure(ok.pass && ok.max_deviation < 1e-10, || format!("trial {trial}: deviation {:e}", ok.max_deviation))?;
        worst_ok = worst_ok.max(ok.max_deviation);

        let x = shape.coord_of(shape.level_range(1).start + rng.gen_range(0..2));
        let k = rng.gen_range(0..2);
        let mut bad = h.clone();
        let mut v = bad.get(&x).unwrap().to_vec();
        v[k] += 0.1;
        bad.set(&x, v).unwrap();
        let r = is_consistent(&inter, shape, &bad).map_err(|e| e.to_string())?;
        ensure(!r.pass && r.max_deviation > 1e-4, || {
            format!("trial {trial}: perturbed deviation {:e}", r.max_deviation)
        })?;
        weakest_bad = weakest_bad.min(r.max_deviation);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(2))?;
    Ok(format!("max deviation {worst_ok:.1e}, perturbed min {weakest_bad:.1e}, in {elapsed:?}"))
}

fn ground_state_oracle() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut checked = 0;
    for region in Region::ALL {
        let p = region.representative();
        let start = Instant::now();
        let minima = brute_force_minima(&p, 2, 1e-12).map_err(|e| e.to_string())?;
        for g in generators_for(region, 4).generators {
            let cfg = realize(&g, 2).map_err(|e| e.to_string())?;
            ensure(minima.binary_search(&cfg).is_ok(), || format!("{region}: {cfg} is not a brute-force minimum"))?;
            checked += 1;
        }
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(1))?;
        slowest = slowest.max(elapsed);
    }
    Ok(format!("{checked} generators found among the minima, slowest region {slowest:?}"))
}

fn invariant_line() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut g = || 10f64.powf(rng.gen_range(-2.0..2.0));
        let w = BoltzmannWeights::new(g(), g(), g()).unwrap();
        let u2 = g();
        let dev = (ti_map((1.0, u2), &w).0 - 1.0).abs();
        ensure(dev <= 1e-14, || format!("{w:?}, u2={u2}: first component off by {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("1000 samples, max |u1' - 1| = {worst:e}"))
}

fn identity_audit() -> Outcome {
    let mut lines = Vec::new();
    for case in Case::ALL {
        let audit =
            case_identity_check(case, PrintedForm::Factorized, &case.default_grid()).map_err(|e| e.to_string())?;
        lines.push(format!("{case:?} max rel dev {:.1e}", audit.max_rel_dev));
    }
    let pinned = [vec![0.2], vec![0.5], vec![2.0]];
    let audit = case_identity_check(Case::II, PrintedForm::Factorized, &pinned).map_err(|e| e.to_string())?;
    for s in &audit.samples {
        ensure(s.rel_dev <= AUDIT_TOL, || format!("case ii at {:?}: rel dev {:e}", s.params, s.rel_dev))?;
    }
    Ok(format!("{}; case II at 0.2/0.5/2 within {:.1e}", lines.join(", "), audit.max_rel_dev))
}

fn main() -> ExitCode {
    let checks: [Check; 9] = [
        ("thresholds at b = 10", thresholds_at_ten),
        ("regime map on 50x50 grid", regime_map),
        ("theta_D in case (ii)", theta_d),
        ("case (i)/(iii) negativity", negativity),
        ("2-periodic without TI transition", periodic_without_ti_transition),
        ("consistency at n = 2", consistency),
        ("ground-state oracle at depth 2", ground_state_oracle),
        ("invariant line", invariant_line),
        ("printed discriminant audit", identity_audit),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
