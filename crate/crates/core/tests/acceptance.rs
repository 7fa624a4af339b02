//! End-to-end acceptance checks. Each test prints one PASS/FAIL line to
//! stderr (uncaptured) and then asserts.

use std::f64::consts::{E, TAU};
use std::io::Write;

use cf_tailbound::bounds::{
    certify_compact_support, corollary1_bound, corollary1_forms, remark1_majorant_check,
    theorem1_bound, theorem2_bound, theorem3_right, BoundOptions, Side,
};
use cf_tailbound::cf::{empirical_cf, make_catalog_cf, CatalogSpec, CharFn};
use cf_tailbound::cli::{self, BoundRecord, CertifyRecord, SweepRecord};
use cf_tailbound::oracle::{self, empirical_tail, log_grid, ViolationReport};
use cf_tailbound::trigpoly::TrigPoly;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Cauchy, Distribution, StandardNormal};

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance {n} [{verdict}] {name}: {detail}");
    assert!(pass, "acceptance {n} ({name}) failed: {detail}");
}

fn cf(spec: &str) -> CharFn<f64> {
    make_catalog_cf(&spec.parse::<CatalogSpec>().unwrap()).unwrap()
}

fn opts() -> BoundOptions<f64> {
    BoundOptions::default()
}

#[test]
fn a1_soundness_sweep() {
    let suite = oracle::default_suite();
    let planned: usize = suite.iter().map(|(_, p)| p.requests.len()).sum();
    let report_ = oracle::run_default_suite(None, opts()).unwrap();
    let pass = report_.passed() && report_.skipped.is_empty() && report_.checked == planned;
    report(
        1,
        "soundness sweep",
        pass,
        &format!(
            "{} bounds checked of {planned} planned, {} violations, {} skipped",
            report_.checked,
            report_.violations.len(),
            report_.skipped.len()
        ),
    );
}

#[test]
fn a2_numeric_anchors() {
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    let mut check = |name: &str, got: f64, derived: f64, printed: f64, tol: f64| {
        let ok = (got - derived).abs() <= tol;
        lines.push(format!(
            "{name}: got {got:.9}, derived {derived:.9} (|diff| {:.1e}, tol {tol:.0e}; printed reference {printed} differs from derived by {:.1e})",
            (got - derived).abs(),
            (printed - derived).abs()
        ));
        if !ok {
            failures.push(name.to_string());
        }
    };

    let one_minus_cos = TrigPoly::cosine(vec![1.0, -1.0]).unwrap();
    let b = theorem1_bound(&cf("cauchy:0,1"), &one_minus_cos, 1.0, &opts()).unwrap();
    check("cauchy theorem1 1-cos s=1", b.bound, 2.0 / E, 2.0 / E, 1e-9);

    // int_0^1 (e^{u^2/2} - 1) du = sum_{n>=1} 1 / (2^n n! (2n+1))
    let mut num = 0.0;
    let mut term = 1.0;
    for n in 1..40 {
        term /= 2.0 * n as f64;
        num += term / (2 * n + 1) as f64;
    }
    let derived = num / ((4.0f64).sinh() / 4.0 - 1.0);
    let b = theorem2_bound(&cf("normal:0,1"), 4.0, 1.0, &opts()).unwrap();
    check("normal theorem2 A=4 s=1", b.bound, derived, 0.033484, 1e-6);

    // int_0^s (1/(1-u) - 1) du = -ln(1-s) - s
    let derived = 5.0 / ((2.5f64).exp() - 3.5) * (2.0f64.ln() - 0.5);
    let b = theorem3_right(&cf("exponential:1"), 5.0, 0.5, Some(0.0), &opts()).unwrap();
    check("exponential theorem3-right A=5 s=0.5 F(+0)=0", b.bound, derived, 0.111229, 1e-6);

    // int_0^s u^2/(1-u^2) du = atanh(s) - s
    let derived = ((0.5f64).atanh() - 0.5) / (0.5 * ((1.5f64).sinh() / 1.5 - 1.0));
    let b = theorem2_bound(&cf("laplace:0,1"), 3.0, 0.5, &opts()).unwrap();
    check("laplace theorem2 A=3 s=0.5", b.bound, derived, 0.235051, 1e-6);

    let detail = format!("{}; failed: {:?}", lines.join("; "), failures);
    report(2, "numeric anchors", failures.is_empty(), &detail);
}

#[test]
fn a3_corollary_routes_agree() {
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    let mut cases = 0;
    for spec in ["cauchy:0,1", "normal:0,1", "laplace:0,1", "uniform:-1,1"] {
        let c = cf(spec);
        for k in 1..=6 {
            for s in [0.25, 0.5, 1.0, 2.0, 4.0] {
                let f = corollary1_forms(&c, k, s, &opts()).unwrap();
                let allowed = 1e-9 + f.budget;
                worst = worst.max(f.gap() / allowed);
                cases += 1;
                if f.gap() > allowed {
                    bad.push(format!("{spec} k={k} s={s}: gap {:.2e} > {:.2e}", f.gap(), allowed));
                }
            }
        }
    }
    report(
        3,
        "sin^2k expansion vs central differences",
        bad.is_empty(),
        &format!("{cases} cases, worst gap/allowed = {worst:.3}; {bad:?}"),
    );
}

#[test]
fn a4_moment_majorant() {
    let us = [0.01, 0.1, 0.5, 1.0];
    let mut worst = f64::INFINITY;
    let mut pass = true;
    for spec in ["normal:0,1", "uniform:-1,1"] {
        for k in 1..=3 {
            let r = remark1_majorant_check(&cf(spec), k, &us).unwrap();
            worst = worst.min(r.worst_slack);
            pass &= r.passed && r.worst_slack >= -1e-10;
        }
    }
    report(4, "central-difference moment majorant", pass, &format!("worst slack {worst:.3e} (allowed >= -1e-10)"));
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn a5_tail_order_recovery() {
    let thresholds = log_grid(10.0, 1e3, 21);
    let mut lines = Vec::new();
    let mut pass = true;
    for (spec, alpha) in [("cauchy:0,1", 1.0), ("stable:0.5,1", 0.5), ("stable:1.5,1", 1.5), ("linnik:2,1", 2.0)] {
        let c = cf(spec);
        let bounds: Vec<f64> = thresholds
            .iter()
            .map(|&a| corollary1_bound(&c, 1, TAU / a, &opts()).unwrap().bound)
            .collect();
        let xs: Vec<f64> = thresholds.iter().map(|a| a.ln()).collect();
        let ys: Vec<f64> = bounds.iter().map(|b| b.ln()).collect();
        let m = slope(&xs, &ys);
        let ok = (m + alpha).abs() <= 0.1;
        pass &= ok;
        lines.push(format!("{spec} slope {m:.3} vs {:.1}", -alpha));
    }
    // Laplace has exponential tails; check soundness instead of a slope.
    let lap = cf("laplace:0,1");
    let lap_oracle = oracle::oracle_for(&"laplace:0,1".parse().unwrap()).unwrap();
    let sound = thresholds
        .iter()
        .all(|&a| corollary1_bound(&lap, 1, TAU / a, &opts()).unwrap().bound + 1e-9 >= lap_oracle.two_sided_tail(a));
    pass &= sound;
    lines.push(format!("laplace sound: {sound}"));
    report(5, "tail order from sin^2 bounds", pass, &lines.join("; "));
}

#[test]
fn a6_compact_support_certification() {
    let o = opts();
    let inside = certify_compact_support(&cf("uniform:-1,1"), 1.5, 1e-6, 200.0, &o).unwrap();
    let outside = certify_compact_support(&cf("uniform:-1,1"), 0.8, 1e-6, 200.0, &o).unwrap();
    let point = certify_compact_support(&cf("point_mass:0"), 0.1, 1e-12, 200.0, &o).unwrap();
    let pass = inside.certified
        && inside.s_max_probed <= 200.0
        && !outside.certified
        && outside.best_bound >= 0.2 - 1e-9
        && point.certified
        && point.best_bound == 0.0;
    report(
        6,
        "compact support certification",
        pass,
        &format!(
            "uniform A=1.5 certified={} best {:.3e}; A=0.8 certified={} best {:.6}; point mass certified={} best {}",
            inside.certified, inside.best_bound, outside.certified, outside.best_bound, point.certified, point.best_bound
        ),
    );
}

#[test]
fn a7_empirical_exactness() {
    let mut rng = StdRng::seed_from_u64(0x5eed_cf07);
    let p = TrigPoly::cosine(vec![1.0, -1.0]).unwrap();
    let mut violations = Vec::new();
    for trial in 0..50 {
        let xs: Vec<f64> = if trial % 2 == 0 {
            (0..200).map(|_| StandardNormal.sample(&mut rng)).collect()
        } else {
            let c = Cauchy::new(0.0, 1.0).unwrap();
            (0..200).map(|_| c.sample(&mut rng)).collect()
        };
        let s: f64 = rng.random_range(0.2..=3.0);
        let b = theorem1_bound(&empirical_cf(&xs).unwrap(), &p, s, &opts()).unwrap();
        let truth = empirical_tail(&xs, TAU / s, Side::TwoSided).unwrap();
        if b.bound + 1e-9 < truth {
            violations.push(format!("trial {trial} s={s:.3}: {} < {truth}", b.bound));
        }
    }
    report(7, "empirical exactness", violations.is_empty(), &format!("50 trials, violations {violations:?}"));
}

#[test]
fn a8_small_s_blow_up() {
    let c = cf("exponential:1");
    let b = theorem3_right(&c, 5.0, 1e-3, None, &opts()).unwrap();
    let conservative = theorem3_right(&c, 5.0, 1e-3, Some(1.0), &opts()).unwrap();
    let pass = b.raw_bound > 1e3 && b.bound == 1.0;
    report(
        8,
        "right-tail bound blows up as s -> 0",
        pass,
        &format!(
            "exponential(1) A=5 s=1e-3: raw {:.6} clamped {:.6} (with F(+0)=1: raw {:.3}); required raw > 1e3 and clamped = 1",
            b.raw_bound, b.bound, conservative.raw_bound
        ),
    );
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cf-tailbound").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn roundtrips<T>(text: &str) -> bool
where
    T: serde::de::DeserializeOwned + serde::Serialize + PartialEq,
{
    let Ok(parsed) = serde_json::from_str::<T>(text) else { return false };
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    again == text && serde_json::from_str::<T>(&again).is_ok_and(|p| p == parsed)
}

#[test]
fn a9_cli_contract() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    let mut rng = StdRng::seed_from_u64(7);
    let mut text = String::from("# standard normal\n\n");
    for _ in 0..200 {
        let x: f64 = StandardNormal.sample(&mut rng);
        text.push_str(&format!("{x}\n"));
    }
    std::fs::write(&samples, text).unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let sp = samples.to_str().unwrap();

    let examples: Vec<(Vec<&str>, i32)> = vec![
        (vec!["bound", "--dist", "cauchy:0,1", "--method", "theorem1", "--cos", "1,-1", "--sin", "--s", "1"], 0),
        (vec!["bound", "--dist", "exponential:1", "--method", "theorem3-right", "--A", "5", "--s", "0.5"], 0),
        (vec!["bound", "--dist", "cauchy:0,1", "--method", "theorem2", "--A", "1", "--s", "0.1"], 2),
        (vec!["sweep", "--dist", "cauchy:0,1", "--method", "theorem1", "--cos", "1,-1", "--axis", "s", "--from", "0.1", "--to", "2", "--count", "20"], 0),
        (vec!["sweep", "--dist", "normal:0,1", "--method", "theorem2", "--axis", "A", "--from", "1", "--to", "6", "--count", "6"], 0),
        (vec!["sweep", "--dist", "point_mass:0", "--method", "corollary1", "--axis", "k", "--from", "1", "--to", "6", "--s", "1"], 0),
        (vec!["verify"], 0),
        (vec!["verify", "--inject-fault", "halve-bounds"], 1),
        (vec!["verify", "--samples", sp], 0),
        (vec!["certify", "--dist", "uniform:-1,1", "--A", "1.5"], 0),
        (vec!["certify", "--dist", "uniform:-1,1", "--A", "0.8"], 3),
        (vec!["certify", "--dist", "cauchy:0,1", "--A", "1"], 2),
        (vec!["ecf", "--samples", sp, "--method", "theorem1", "--cos", "1,-1", "--s", "1", "--compare-empirical"], 0),
        (vec!["ecf", "--samples", empty.to_str().unwrap(), "--method", "theorem1", "--cos", "1,-1", "--s", "1"], 2),
    ];
    let mut failures = Vec::new();
    for (args, want) in &examples {
        let (code, _, err) = run_cli(args);
        if code != *want {
            failures.push(format!("{args:?}: exit {code}, want {want} ({})", err.trim()));
        }
    }

    let dists = ["normal:0,1", "laplace:0,2", "exponential:1.5", "uniform:-2,1", "cauchy:1,0.5", "point_mass:0.3"];
    let analytic = ["normal:0,1", "laplace:0,2", "exponential:1.5", "uniform:-2,1"];
    let entire = ["normal:0,1", "uniform:-2,1", "point_mass:0.3"];
    let mut rng = StdRng::seed_from_u64(2024);
    let mut trips = 0;
    for i in 0..100 {
        let a = format!("{:.3}", rng.random_range(0.5..6.0));
        let s = format!("{:.3}", rng.random_range(0.05..0.45));
        let k = rng.random_range(1..=5).to_string();
        let dist = dists[rng.random_range(0..dists.len())];
        let adist = analytic[rng.random_range(0..analytic.len())];
        let edist = entire[rng.random_range(0..entire.len())];
        let (args, kind): (Vec<&str>, &str) = match i % 6 {
            0 => (vec!["bound", "--dist", dist, "--method", "theorem1", "--cos", "1,-1", "--sin=1,-0.5", "--s", &s], "bound"),
            1 => (vec!["bound", "--dist", dist, "--method", "corollary1", "--k", &k, "--A", &a], "bound"),
            2 => (vec!["bound", "--dist", adist, "--method", "theorem2", "--A", &a, "--s", &s], "bound"),
            3 => (vec!["bound", "--dist", adist, "--method", "theorem3-left", "--A", &a], "bound"),
            4 => (vec!["sweep", "--dist", dist, "--method", "corollary1", "--axis", "k", "--from", "1", "--to", &k, "--A", &a, "--format", "json"], "sweep"),
            _ => (vec!["certify", "--dist", edist, "--A", &a, "--s-max", "50"], "certify"),
        };
        let (code, out, err) = run_cli(&args);
        let ok = match kind {
            "bound" => code == 0 && roundtrips::<BoundRecord>(&out),
            "sweep" => code == 0 && roundtrips::<SweepRecord>(&out),
            _ => (code == 0 || code == 3) && roundtrips::<CertifyRecord>(&out),
        };
        if ok {
            trips += 1;
        } else {
            failures.push(format!("round trip {args:?}: exit {code} {}", err.trim()));
        }
    }
    let (code, out, _) = run_cli(&["verify", "--inject-fault", "halve-bounds", "--format", "json"]);
    if !(code == 1 && roundtrips::<ViolationReport>(&out)) {
        failures.push("verify report round trip".into());
    }
    report(
        9,
        "command-line contract",
        failures.is_empty(),
        &format!("{} exit-code examples, {trips}/100 JSON round trips; failures {failures:?}", examples.len()),
    );
}
