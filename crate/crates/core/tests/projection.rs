use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsrq_core::clustering::SampleMatrix;
use vsrq_core::projection::{optimize_direction, optimize_direction_observed, pp_objective, DirectionVector, PpParams};

/// Indicator 0 splits the samples into two groups, indicator 1 is noise
/// around a constant.
fn separated(n: usize, seed: u64) -> SampleMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|i| {
            let a = if i % 2 == 0 { 0.15 } else { 0.85 };
            vec![
                (a + rng.random_range(-0.05..0.05f64)).clamp(0.0, 1.0),
                0.5 + rng.random_range(-0.01..0.01f64),
            ]
        })
        .collect();
    SampleMatrix::new(rows).unwrap()
}

fn random_2d(n: usize, seed: u64) -> SampleMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SampleMatrix::new((0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect()).unwrap()
}

fn grid_best(data: &SampleMatrix, window: f64) -> f64 {
    (0..=90)
        .map(|deg| {
            let t = (deg as f64).to_radians();
            let l = DirectionVector::normalized(vec![t.cos().max(0.0), t.sin().max(0.0)]).unwrap();
            pp_objective(data, &l, window).unwrap()
        })
        .fold(f64::MIN, f64::max)
}

// Brute-force spread-times-density, written out from the definition.
fn objective_oracle(data: &SampleMatrix, l: &[f64], window: f64) -> f64 {
    let z: Vec<f64> = data.rows().iter().map(|r| r[0] * l[0] + r[1] * l[1]).collect();
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let a = (z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let b = window * a;
    let mut d = 0.0;
    for i in 0..z.len() {
        for k in 0..z.len() {
            let r = (z[i] - z[k]).abs();
            if b - r >= 0.0 {
                d += b - r;
            }
        }
    }
    a * d
}

#[test]
fn beats_grid_search_on_separated_data() {
    let data = separated(40, 3);
    let r = optimize_direction(&data, &PpParams::default()).unwrap();
    let best = grid_best(&data, 0.1);
    assert!(r.objective_value >= 0.99 * best, "{} vs grid {best}", r.objective_value);
    assert!(r.objective_weights[0] > 0.9, "{:?}", r.objective_weights);
}

#[test]
fn beats_grid_search_on_random_data() {
    for seed in [1, 2, 3] {
        let data = random_2d(30, seed);
        let r = optimize_direction(&data, &PpParams { seed, ..PpParams::default() }).unwrap();
        let best = grid_best(&data, 0.1);
        assert!(r.objective_value >= 0.99 * best, "seed {seed}: {} vs grid {best}", r.objective_value);
    }
}

#[test]
fn objective_matches_double_loop() {
    let data = SampleMatrix::new(vec![vec![0.1, 0.9], vec![0.4, 0.2], vec![0.45, 0.25], vec![0.8, 0.6]]).unwrap();
    let l = [0.6, 0.8];
    let got = pp_objective(&data, &DirectionVector::new(l.to_vec()).unwrap(), 0.5).unwrap();
    assert!((got - objective_oracle(&data, &l, 0.5)).abs() <= 1e-12);
}

#[test]
fn best_seen_and_deterministic() {
    let data = random_2d(25, 11);
    let mut seen = f64::MIN;
    let r = optimize_direction_observed(&data, &PpParams::default(), |_, v| seen = seen.max(v)).unwrap();
    assert!(r.objective_value >= seen);
    let again = optimize_direction(&data, &PpParams::default()).unwrap();
    assert_eq!(r, again);
    let s: f64 = r.objective_weights.iter().sum();
    assert!((s - 1.0).abs() <= 1e-9 && r.objective_weights.iter().all(|&w| w >= 0.0));
}

proptest! {
    #[test]
    fn objective_ignores_sample_order(seed in any::<u64>(), angle in 0.0f64..90.0, rot in 0usize..20) {
        let data = random_2d(20, seed);
        let t = angle.to_radians();
        let l = DirectionVector::normalized(vec![t.cos(), t.sin()]).unwrap();
        let mut rows = data.rows().to_vec();
        rows.rotate_left(rot);
        rows.reverse();
        let shuffled = SampleMatrix::new(rows).unwrap();
        let a = pp_objective(&data, &l, 0.1).unwrap();
        let b = pp_objective(&shuffled, &l, 0.1).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn objective_ignores_a_common_shift(seed in any::<u64>(), shift in 0.0f64..0.3) {
        // A shift along the direction moves every projection by the same amount.
        let data = random_2d(15, seed);
        let l = DirectionVector::new(vec![1.0, 0.0]).unwrap();
        let moved = SampleMatrix::new(
            data.rows().iter().map(|r| vec![(r[0] * 0.7 + shift).min(1.0), r[1]]).collect(),
        ).unwrap();
        let base = SampleMatrix::new(data.rows().iter().map(|r| vec![r[0] * 0.7, r[1]]).collect()).unwrap();
        let a = pp_objective(&base, &l, 0.1).unwrap();
        let b = pp_objective(&moved, &l, 0.1).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-6));
    }
}
