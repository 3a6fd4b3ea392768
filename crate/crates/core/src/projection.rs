//! Projection pursuit search for objective indicator weights.
//!
//! A direction `l` on the non-negative unit sphere projects every sample to a
//! scalar. The index rewarded is spread (sample standard deviation of the
//! projections) times local density (how many projection pairs fall within a
//! window of radius `b`). Weights are the squared direction components.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::SampleMatrix;
use crate::error::{Error, Result};

/// Unit-norm direction with non-negative components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionVector(Vec<f64>);

impl DirectionVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::validation("direction", "components must be non-negative"));
        }
        let n2: f64 = components.iter().map(|c| c * c).sum();
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::validation("direction", format!("squared norm is {n2}, expected 1")));
        }
        Ok(Self(components))
    }

    /// Scale an arbitrary non-negative, non-zero vector onto the sphere.
    pub fn normalized(mut components: Vec<f64>) -> Result<Self> {
        for c in components.iter_mut() {
            if !c.is_finite() || *c < 0.0 {
                *c = 0.0;
            }
        }
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Numeric("cannot normalize the zero vector".into()));
        }
        Self::new(components.into_iter().map(|c| c / norm).collect())
    }

    /// Unit vector along axis `k` of a `dim`-dimensional space.
    pub fn axis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Dimension(format!("axis {k} of {dim}")));
        }
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        Self::new(v)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Squared components; these sum to one.
    pub fn weights(&self) -> Vec<f64> {
        self.0.iter().map(|c| c * c).collect()
    }
}

pub fn project(data: &SampleMatrix, l: &DirectionVector) -> Result<Vec<f64>> {
    if l.dim() != data.indicators() {
        return Err(Error::Dimension(format!(
            "direction has {} components, data has {} indicators",
            l.dim(),
            data.indicators()
        )));
    }
    Ok(data
        .rows()
        .iter()
        .map(|r| r.iter().zip(l.components()).map(|(z, c)| z * c).sum())
        .collect())
}

/// Unit step: 1 for non-negative arguments.
pub fn unit_step(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Spread-times-density index of a set of projections.
pub fn projection_index(projections: &[f64], window_factor: f64) -> Result<f64> {
    let x = projections.len();
    if x < 2 {
        return Err(Error::Infeasible(format!("projection index needs 2 samples, got {x}")));
    }
    let mean = projections.iter().sum::<f64>() / x as f64;
    let var = projections.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (x as f64 - 1.0);
    let spread = var.sqrt();
    let b = window_factor * spread;
    let mut density = 0.0;
    for &pi in projections {
        for &pa in projections {
            let gap = b - (pi - pa).abs();
            density += gap * unit_step(gap);
        }
    }
    Ok(spread * density)
}

pub fn pp_objective(data: &SampleMatrix, l: &DirectionVector, window_factor: f64) -> Result<f64> {
    projection_index(&project(data, l)?, window_factor)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PpParams {
    pub seed: u64,
    pub population: usize,
    pub generations: usize,
    pub window_factor: f64,
}

impl Default for PpParams {
    fn default() -> Self {
        Self {
            seed: 42,
            population: 60,
            generations: 200,
            window_factor: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PpResult {
    pub best_direction: DirectionVector,
    pub objective_value: f64,
    pub projections: Vec<f64>,
    pub objective_weights: Vec<f64>,
    pub evaluations: usize,
}

const TOURNAMENT: usize = 2;
const BLEND_ALPHA: f64 = 0.5;
const MUTATION_SIGMA: f64 = 0.1;
const ELITES: usize = 2;

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let normal: Normal<f64> = Normal::new(0.0, 1.0).expect("unit normal");
    loop {
        let v: Vec<f64> = (0..dim).map(|_| normal.sample(rng).abs()).collect();
        if v.iter().any(|c| *c > 0.0) {
            return v;
        }
    }
}

fn to_sphere(rng: &mut ChaCha8Rng, v: Vec<f64>) -> DirectionVector {
    let dim = v.len();
    DirectionVector::normalized(v)
        .or_else(|_| DirectionVector::normalized(random_direction(rng, dim)))
        .expect("random direction is non-zero")
}

/// Seeded real-coded genetic search over the non-negative unit sphere.
pub fn optimize_direction(data: &SampleMatrix, params: &PpParams) -> Result<PpResult> {
    optimize_direction_observed(data, params, |_, _| {})
}

/// As [`optimize_direction`], calling `observe` with every evaluated
/// candidate and its objective.
pub fn optimize_direction_observed<F>(
    data: &SampleMatrix,
    params: &PpParams,
    mut observe: F,
) -> Result<PpResult>
where
    F: FnMut(&DirectionVector, f64),
{
    let x = data.samples();
    let y = data.indicators();
    if x < 2 || y < 1 {
        return Err(Error::Infeasible(format!(
            "projection pursuit needs at least 2 samples and 1 indicator, got {x}x{y}"
        )));
    }
    if params.population < 2 {
        return Err(Error::Infeasible("population must be at least 2".into()));
    }
    if !(params.window_factor.is_finite() && params.window_factor >= 0.0) {
        return Err(Error::Infeasible("window factor must be non-negative".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mutation = Normal::new(0.0, MUTATION_SIGMA).expect("positive sigma");

    let evaluate = |pop: &[DirectionVector]| -> Result<Vec<f64>> {
        pop.par_iter()
            .map(|l| pp_objective(data, l, params.window_factor))
            .collect()
    };

    let mut population: Vec<DirectionVector> = if y == 1 {
        vec![DirectionVector::axis(1, 0)?]
    } else {
        (0..params.population)
            .map(|_| {
                let v = random_direction(&mut rng, y);
                to_sphere(&mut rng, v)
            })
            .collect()
    };
    let mut scores = evaluate(&population)?;
    let mut evaluations = population.len();
    for (l, s) in population.iter().zip(&scores) {
        observe(l, *s);
    }

    let mut best_idx = argmax(&scores);
    let mut best = (population[best_idx].clone(), scores[best_idx]);

    if y > 1 {
        for _ in 0..params.generations {
            let mut ranked: Vec<usize> = (0..population.len()).collect();
            ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
            let mut next: Vec<DirectionVector> =
                ranked.iter().take(ELITES).map(|&i| population[i].clone()).collect();

            while next.len() < params.population {
                let p1 = tournament(&mut rng, &scores);
                let p2 = tournament(&mut rng, &scores);
                let a = population[p1].components();
                let b = population[p2].components();
                let mut child: Vec<f64> = a
                    .iter()
                    .zip(b)
                    .map(|(&u, &v)| {
                        let (lo, hi) = (u.min(v), u.max(v));
                        let span = hi - lo;
                        rng.random_range((lo - BLEND_ALPHA * span)..=(hi + BLEND_ALPHA * span))
                    })
                    .collect();
                let rate = 1.0 / y as f64;
                for c in child.iter_mut() {
                    if rng.random_bool(rate) {
                        *c += mutation.sample(&mut rng);
                    }
                }
                for c in child.iter_mut() {
                    *c = c.abs();
                }
                next.push(to_sphere(&mut rng, child));
            }

            // elites keep their scores; only offspring are evaluated
            let offspring = evaluate(&next[ELITES.min(next.len())..])?;
            evaluations += offspring.len();
            for (l, s) in next[ELITES.min(next.len())..].iter().zip(&offspring) {
                observe(l, *s);
            }
            let mut next_scores: Vec<f64> =
                ranked.iter().take(ELITES).map(|&i| scores[i]).collect();
            next_scores.extend(offspring);

            population = next;
            scores = next_scores;
            best_idx = argmax(&scores);
            if scores[best_idx] > best.1 {
                best = (population[best_idx].clone(), scores[best_idx]);
            }
        }
    }

    let (direction, value) = best;
    let projections = project(data, &direction)?;
    Ok(PpResult {
        objective_weights: direction.weights(),
        best_direction: direction,
        objective_value: value,
        projections,
        evaluations,
    })
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

fn tournament(rng: &mut ChaCha8Rng, scores: &[f64]) -> usize {
    let mut winner = rng.random_range(0..scores.len());
    for _ in 1..TOURNAMENT {
        let c = rng.random_range(0..scores.len());
        if scores[c] > scores[winner] {
            winner = c;
        }
    }
    winner
}
