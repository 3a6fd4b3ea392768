//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsrq_core::assessment::{compose_vsr, normalize, StateThresholds};
use vsrq_core::clustering::{fuzzy_cluster, CenterInit, FcmParams, SampleMatrix};
use vsrq_core::codemetrics::{scan_source, LanguageProfile};
use vsrq_core::config::{WeightGroup, C_PROFILE};
use vsrq_core::evaluation::{metrics, ConfusionMatrix};
use vsrq_core::indicators::{damage_severity, halstead_term, Halstead, SeverityVector};
use vsrq_core::pipeline::calibrate;
use vsrq_core::projection::{optimize_direction, pp_objective, DirectionVector, PpParams};
use vsrq_core::weighting::ahp_weights;
use vsrq_core::{AssessmentConfig, ClassificationRule, Interval, Orientation, VehicleState};

const AHP_TOL: f64 = 1e-3;
const PERCENT_TOL: f64 = 0.01;
const DEGENERATE_TOL: f64 = 1e-9;
const COLUMN_SUM_TOL: f64 = 1e-9;
const LABEL_AGREEMENT: f64 = 0.99;
const GRID_RATIO: f64 = 0.99;
const HALSTEAD_TOL: f64 = 1e-12;
const NORMALIZE_TOL: f64 = 1e-12;
const INTERVAL_OPS: usize = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn ahp_reproduction() -> Outcome {
    let expected: [(WeightGroup, &[f64]); 5] = [
        (WeightGroup::Index, &[0.3636, 0.3182, 0.1818, 0.1364]),
        (WeightGroup::ALL[1], &[0.1321, 0.1132, 0.1698, 0.1510, 0.0943, 0.0755, 0.0943, 0.1698]),
        (WeightGroup::ALL[2], &[0.3478, 0.2174, 0.1305, 0.3043]),
        (WeightGroup::ALL[3], &[0.1111, 0.3333, 0.5556]),
        (WeightGroup::ALL[4], &[0.5000, 0.1875, 0.3125]),
    ];
    let cfg = AssessmentConfig::builtin();
    let mut worst: f64 = 0.0;
    for (g, want) in expected {
        let got = ahp_weights(cfg.matrix(g)).weights;
        check(got.len() == want.len(), format!("{} has {} weights", g.key(), got.len()))?;
        for (k, (a, b)) in got.iter().zip(want).enumerate() {
            worst = worst.max((a - b).abs());
            check((a - b).abs() <= AHP_TOL, format!("{} member {k}: {a:.4} vs {b:.4}", g.key()))?;
        }
    }
    Ok(format!("22 weights, max deviation {worst:.2e}"))
}

fn confusion_metrics() -> Outcome {
    let cols = [
        ("VSRQ", ConfusionMatrix { tp: 47, fp: 78, tn: 1542, fn_: 17 }, [94.36, 37.60, 73.43]),
        ("AVSDA", ConfusionMatrix { tp: 41, fp: 103, tn: 1517, fn_: 23 }, [92.52, 28.47, 64.06]),
    ];
    let mut parts = Vec::new();
    for (name, cm, want) in cols {
        let m = metrics(&cm);
        let got = [m.accuracy, m.precision, m.recall].map(|v| v.map_or(f64::NAN, |x| x * 100.0));
        for (g, w) in got.iter().zip(want) {
            check((g - w).abs() <= PERCENT_TOL, format!("{name}: {g:.4}% vs {w}%"))?;
        }
        parts.push(format!("{name} {:.2}/{:.2}/{:.2}", got[0], got[1], got[2]));
    }
    Ok(parts.join(", "))
}

fn severity_rule() -> Outcome {
    let d = damage_severity(&SeverityVector::new(6, 3, 5, 4).unwrap());
    check(d == 6, format!("got {d}"))?;
    Ok("(6,3,5,4) -> 6".into())
}

fn containment() -> Outcome {
    let cal = calibrate(&AssessmentConfig::builtin()).map_err(|e| e.to_string())?;
    for g in &cal.groups {
        for (w, i) in g.ahp.weights.iter().zip(&g.interval) {
            check(i.contains(*w), format!("{}: {w:.4} outside {i}", g.group))?;
        }
    }
    let cfg = AssessmentConfig::from_overlay_str(r#"{"fuzzification": {"delta": 0}}"#).map_err(|e| e.to_string())?;
    let flat = calibrate(&cfg).map_err(|e| e.to_string())?;
    for g in &flat.groups {
        for (w, i) in g.ahp.weights.iter().zip(&g.interval) {
            check(
                (i.lo() - w).abs() <= DEGENERATE_TOL && (i.hi() - w).abs() <= DEGENERATE_TOL,
                format!("{}: delta=0 gives {i} for {w}", g.group),
            )?;
        }
    }
    Ok("defaults contained; delta=0 collapses to AHP".into())
}

fn openpilot_end_to_end() -> Outcome {
    let aggregates = [iv(0.5729, 0.9437), iv(0.6385, 0.8052), iv(0.7245, 0.8282), iv(0.4756, 0.5601)];
    let weights = [iv(0.2949, 0.3702), iv(0.2778, 0.4013), iv(0.1527, 0.1911), iv(0.1211, 0.1435)];
    let (vsr, _) = compose_vsr(&aggregates, &weights).map_err(|e| e.to_string())?;
    check(vsr.overlaps(&iv(0.514567, 0.911115)), format!("{vsr} misses the published interval"))?;
    check((0.506..=0.903).contains(&vsr.mid()), format!("midpoint {:.6}", vsr.mid()))?;
    let state = StateThresholds::default().state_of(ClassificationRule::Conservative.pick(&vsr));
    check(state == VehicleState::Dangerous, format!("state {state:?}"))?;
    Ok(format!("VSR {vsr:.6}, Dangerous"))
}

fn fcm_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let centers = [[0.25, 0.3], [0.75, 0.7]];
    let rows: Vec<Vec<f64>> = (0..200)
        .map(|i| centers[i % 2].iter().map(|m| (m + rng.random_range(-0.12..0.12f64)).clamp(0.0, 1.0)).collect())
        .collect();
    let data = SampleMatrix::new(rows).map_err(|e| e.to_string())?;
    let params = FcmParams { clusters: 2, init: CenterInit::Random { seed: 42 }, ..FcmParams::default() };
    let r = fuzzy_cluster(&data, &params).map_err(|e| e.to_string())?;
    check(r.column_sum_drift <= COLUMN_SUM_TOL, format!("column sums drift {:.2e}", r.column_sum_drift))?;
    for (k, w) in r.objective_trace.windows(2).enumerate() {
        check(w[1] <= w[0] * (1.0 + 1e-12), format!("objective rose at iteration {}", k + 1))?;
    }
    let c: Vec<Vec<f64>> = (0..2).map(|e| r.centers.center(e)).collect();
    let d2 = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    let hard = r.membership.hard_labels();
    let agree = (0..200)
        .filter(|&i| {
            let nearest = usize::from(d2(data.row(i), &c[1]) < d2(data.row(i), &c[0]));
            hard[i] == nearest
        })
        .count();
    check(agree as f64 >= LABEL_AGREEMENT * 200.0, format!("{agree}/200 labels agree"))?;
    Ok(format!("{} iterations, {agree}/200 agree", r.iterations))
}

fn pp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<f64>> = (0..40)
        .map(|i| {
            let a = if i % 2 == 0 { 0.15 } else { 0.85 };
            vec![(a + rng.random_range(-0.05..0.05f64)).clamp(0.0, 1.0), rng.random_range(0.3..0.7)]
        })
        .collect();
    let data = SampleMatrix::new(rows).map_err(|e| e.to_string())?;
    let params = PpParams::default();
    let r = optimize_direction(&data, &params).map_err(|e| e.to_string())?;
    let mut best = f64::MIN;
    for deg in 0..=90 {
        let t = (deg as f64).to_radians();
        let l = DirectionVector::normalized(vec![t.cos().max(0.0), t.sin().max(0.0)]).map_err(|e| e.to_string())?;
        best = best.max(pp_objective(&data, &l, params.window_factor).map_err(|e| e.to_string())?);
    }
    check(r.objective_value >= GRID_RATIO * best, format!("{:.6} vs grid {best:.6}", r.objective_value))?;
    Ok(format!("search {:.6} / grid {best:.6}", r.objective_value))
}

fn code_metric_oracle() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/metrics/clamp.c");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    check(text.lines().count() <= 50, "fixture longer than 50 lines")?;
    let m = scan_source(&text, &LanguageProfile::from_json(C_PROFILE).map_err(|e| e.to_string())?);
    check((m.loc, m.blank_lines, m.comment_lines) == (17, 2, 2), format!("lines {:?}", (m.loc, m.blank_lines, m.comment_lines)))?;
    let want = Halstead { n1: 27, n2: 14, big_n1: 62, big_n2: 36 };
    check(m.halstead == want, format!("halstead {:?}", m.halstead))?;
    check(m.decision_points == 5, format!("decisions {}", m.decision_points))?;
    let unit = halstead_term(&Halstead { n1: 1, n2: 1, big_n1: 1, big_n2: 1 });
    check((unit - 1.0 / 1500.0).abs() <= HALSTEAD_TOL, format!("unit term {unit}"))?;
    Ok("clamp.c 17/2/2 lines, n1=27 n2=14 N1=62 N2=36, 5 decisions".into())
}

fn normalization_endpoints() -> Outcome {
    let (lo, hi) = (2.0, 11.5);
    let cases = [
        (Orientation::Cost, lo, 0.0),
        (Orientation::Cost, hi, 1.0),
        (Orientation::Benefit, lo, 1.0),
        (Orientation::Benefit, hi, 0.0),
    ];
    for (o, raw, want) in cases {
        let got = normalize(raw, lo, hi, o).map_err(|e| e.to_string())?;
        check((got - want).abs() <= NORMALIZE_TOL, format!("{o:?} {raw} -> {got}"))?;
    }
    Ok("cost (lo,hi)->(0,1), benefit (lo,hi)->(1,0)".into())
}

fn interval_fuzzing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let draw = |rng: &mut ChaCha8Rng| {
        let (a, b): (f64, f64) = (rng.random_range(-1e3..1e3), rng.random_range(-1e3..1e3));
        iv(a.min(b), a.max(b))
    };
    for k in 0..INTERVAL_OPS {
        let a = draw(&mut rng);
        let (got, want) = if rng.random_bool(0.5) {
            let b = draw(&mut rng);
            let ends = [a.lo() + b.lo(), a.lo() + b.hi(), a.hi() + b.lo(), a.hi() + b.hi()];
            (a.add(b), ends)
        } else {
            let s: f64 = rng.random_range(0.0..100.0);
            (a.scale(s).map_err(|e| e.to_string())?, [s * a.lo(), s * a.hi(), s * a.lo(), s * a.hi()])
        };
        let lo = want.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = want.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        check(got.lo() == lo && got.hi() == hi, format!("op {k}: {got} vs [{lo}, {hi}]"))?;
    }
    Ok(format!("{INTERVAL_OPS} operations exact"))
}

fn determinism() -> Outcome {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/openpilot.json");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_vsrq"))
            .arg("assess")
            .arg(&fixture)
            .args(["--seed", "42", "--out"])
            .arg(&out)
            .env_remove("VSRQ_CONFIG_DIR")
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), format!("run {run} exited with {}", status.status))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    check(outputs[0] == outputs[1], "reports differ")?;
    Ok(format!("2 runs, {} identical bytes", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("AHP reproduction", ahp_reproduction),
        ("confusion metrics", confusion_metrics),
        ("severity rule", severity_rule),
        ("interval weight containment", containment),
        ("OpenPilot end-to-end", openpilot_end_to_end),
        ("FCM properties", fcm_properties),
        ("projection pursuit oracle", pp_oracle),
        ("code-metric oracle", code_metric_oracle),
        ("normalization endpoints", normalization_endpoints),
        ("interval arithmetic fuzzing", interval_fuzzing),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
