//! Fuzzy c-means cluster analysis over normalized sample matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Row-major `samples x indicators` matrix with entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: Vec<Vec<f64>>,
    cols: usize,
}

impl SampleMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "sample {i} has {} values, expected {cols}",
                    r.len()
                )));
            }
            for (j, &v) in r.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::out_of_range(format!("sample[{i}][{j}]"), v, 0.0, 1.0));
                }
            }
        }
        Ok(Self { rows, cols })
    }

    pub fn samples(&self) -> usize {
        self.rows.len()
    }

    pub fn indicators(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<SampleMatrix> {
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Dimension(format!("column {c} out of range")));
        }
        Ok(SampleMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect(),
            cols: cols.len(),
        })
    }
}

/// `clusters x samples` membership degrees; every column sums to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipMatrix {
    entries: Vec<Vec<f64>>,
}

impl MembershipMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let a = entries.len();
        if a == 0 {
            return Err(Error::Dimension("membership matrix has no clusters".into()));
        }
        let x = entries[0].len();
        if entries.iter().any(|r| r.len() != x) {
            return Err(Error::Dimension("ragged membership matrix".into()));
        }
        for i in 0..x {
            let mut s = 0.0;
            for (e, row) in entries.iter().enumerate() {
                let p = row[i];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::out_of_range(format!("membership[{e}][{i}]"), p, 0.0, 1.0));
                }
                s += p;
            }
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::validation(
                    format!("membership column {i}"),
                    format!("sums to {s}, expected 1"),
                ));
            }
        }
        Ok(Self { entries })
    }

    pub fn clusters(&self) -> usize {
        self.entries.len()
    }

    pub fn samples(&self) -> usize {
        self.entries[0].len()
    }

    pub fn get(&self, cluster: usize, sample: usize) -> f64 {
        self.entries[cluster][sample]
    }

    pub fn column(&self, sample: usize) -> Vec<f64> {
        self.entries.iter().map(|r| r[sample]).collect()
    }

    /// Cluster with the largest membership for each sample; ties go to the
    /// lower index.
    pub fn hard_labels(&self) -> Vec<usize> {
        (0..self.samples())
            .map(|i| {
                let mut best = 0;
                for e in 1..self.clusters() {
                    if self.entries[e][i] > self.entries[best][i] {
                        best = e;
                    }
                }
                best
            })
            .collect()
    }
}

/// `indicators x clusters`; column `e` is the center of cluster `e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterCenters {
    entries: Vec<Vec<f64>>,
}

impl ClusterCenters {
    /// Build from one coordinate vector per cluster.
    pub fn from_centers(centers: &[Vec<f64>]) -> Result<Self> {
        let y = centers.first().map_or(0, Vec::len);
        if centers.iter().any(|c| c.len() != y) {
            return Err(Error::Dimension("centers differ in dimension".into()));
        }
        for (e, c) in centers.iter().enumerate() {
            for (j, &v) in c.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::out_of_range(format!("center[{e}][{j}]"), v, 0.0, 1.0));
                }
            }
        }
        let entries = (0..y).map(|j| centers.iter().map(|c| c[j]).collect()).collect();
        Ok(Self { entries })
    }

    pub fn clusters(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn indicators(&self) -> usize {
        self.entries.len()
    }

    pub fn center(&self, e: usize) -> Vec<f64> {
        self.entries.iter().map(|r| r[e]).collect()
    }

    fn all_centers(&self) -> Vec<Vec<f64>> {
        (0..self.clusters()).map(|e| self.center(e)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CenterInit {
    /// Uniform random coordinates in `[0, 1]` from a seeded generator.
    Random { seed: u64 },
    Given(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcmParams {
    pub clusters: usize,
    pub fuzzifier: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub init: CenterInit,
}

impl Default for FcmParams {
    fn default() -> Self {
        Self {
            clusters: 3,
            fuzzifier: 2.0,
            tolerance: 1e-6,
            max_iterations: 300,
            init: CenterInit::Random { seed: 42 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FcmResult {
    pub membership: MembershipMatrix,
    pub centers: ClusterCenters,
    /// Objective after each membership update.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest deviation of any membership column sum from 1 over all
    /// iterations.
    pub column_sum_drift: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Membership column for one sample given all centers.
fn memberships_for(point: &[f64], centers: &[Vec<f64>], m: f64) -> Vec<f64> {
    let d2: Vec<f64> = centers.iter().map(|c| sq_dist(point, c)).collect();
    let zeros = d2.iter().filter(|&&d| d == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        return d2.iter().map(|&d| if d == 0.0 { share } else { 0.0 }).collect();
    }
    let exp = 1.0 / (m - 1.0);
    let inv: Vec<f64> = d2.iter().map(|d| (1.0 / d).powf(exp)).collect();
    let total: f64 = inv.iter().sum();
    inv.iter().map(|v| v / total).collect()
}

fn objective(data: &SampleMatrix, u: &[Vec<f64>], centers: &[Vec<f64>], m: f64) -> f64 {
    let mut j = 0.0;
    for (e, c) in centers.iter().enumerate() {
        for i in 0..data.samples() {
            j += u[e][i].powf(m) * sq_dist(data.row(i), c);
        }
    }
    j
}

/// Alternating-optimization fuzzy c-means. On return clusters are ordered by
/// ascending Euclidean norm of their centers, so a higher cluster index means
/// a riskier class.
pub fn fuzzy_cluster(data: &SampleMatrix, params: &FcmParams) -> Result<FcmResult> {
    let x = data.samples();
    let y = data.indicators();
    let a = params.clusters;
    if a < 2 {
        return Err(Error::Infeasible(format!("need at least 2 clusters, got {a}")));
    }
    if a > x {
        return Err(Error::Infeasible(format!("{a} clusters for {x} samples")));
    }
    if !(params.fuzzifier > 1.0 && params.fuzzifier.is_finite()) {
        return Err(Error::Infeasible(format!("fuzzifier must exceed 1, got {}", params.fuzzifier)));
    }
    if !(params.tolerance > 0.0) {
        return Err(Error::Infeasible(format!("tolerance must be positive, got {}", params.tolerance)));
    }
    let m = params.fuzzifier;

    let mut centers: Vec<Vec<f64>> = match &params.init {
        CenterInit::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..a).map(|_| (0..y).map(|_| rng.random::<f64>()).collect()).collect()
        }
        CenterInit::Given(c) => {
            ClusterCenters::from_centers(c)?;
            if c.len() != a || c.iter().any(|v| v.len() != y) {
                return Err(Error::Dimension(format!(
                    "initial centers must be {a} vectors of length {y}"
                )));
            }
            c.clone()
        }
    };

    let mut u = vec![vec![0.0; x]; a];
    let mut trace = Vec::new();
    let mut drift = 0.0f64;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < params.max_iterations {
        iterations += 1;
        let mut max_change = 0.0f64;
        for i in 0..x {
            let col = memberships_for(data.row(i), &centers, m);
            let s: f64 = col.iter().sum();
            drift = drift.max((s - 1.0).abs());
            for (e, p) in col.into_iter().enumerate() {
                max_change = max_change.max((p - u[e][i]).abs());
                u[e][i] = p;
            }
        }
        trace.push(objective(data, &u, &centers, m));

        for (e, center) in centers.iter_mut().enumerate() {
            let weights: Vec<f64> = (0..x).map(|i| u[e][i].powf(m)).collect();
            let total: f64 = weights.iter().sum();
            if total > 0.0 {
                for (j, cj) in center.iter_mut().enumerate() {
                    let v = (0..x).map(|i| weights[i] * data.row(i)[j]).sum::<f64>() / total;
                    *cj = v.clamp(0.0, 1.0);
                }
            }
        }

        if max_change < params.tolerance {
            converged = true;
            break;
        }
    }

    // risk ordering
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by(|&p, &q| norm(&centers[p]).total_cmp(&norm(&centers[q])).then(p.cmp(&q)));
    let sorted_centers: Vec<Vec<f64>> = order.iter().map(|&e| centers[e].clone()).collect();
    let sorted_u: Vec<Vec<f64>> = order.iter().map(|&e| u[e].clone()).collect();

    Ok(FcmResult {
        membership: MembershipMatrix { entries: sorted_u },
        centers: ClusterCenters::from_centers(&sorted_centers)?,
        objective_trace: trace,
        iterations,
        converged,
        column_sum_drift: drift,
    })
}

/// Class value per sample: membership-weighted mean of the 1-based cluster
/// index.
pub fn class_eigenvalue(p: &MembershipMatrix) -> Vec<f64> {
    (0..p.samples())
        .map(|i| {
            (0..p.clusters())
                .map(|e| p.get(e, i) * (e + 1) as f64)
                .sum()
        })
        .collect()
}

/// Partition crispness averaged over samples: 1 when every sample belongs
/// wholly to one cluster, 0 when every membership is `1/a`.
pub fn sensitivity_coefficient(p: &MembershipMatrix) -> Result<f64> {
    let a = p.clusters();
    if a < 2 {
        return Err(Error::Infeasible("sensitivity needs at least 2 clusters".into()));
    }
    let x = p.samples();
    if x == 0 {
        return Err(Error::Infeasible("sensitivity needs at least one sample".into()));
    }
    let af = a as f64;
    let mean = (0..x)
        .map(|i| {
            let top = (0..a).map(|e| p.get(e, i)).fold(0.0, f64::max);
            (af * top - 1.0) / (af - 1.0)
        })
        .sum::<f64>()
        / x as f64;
    Ok(mean.clamp(0.0, 1.0))
}

/// Nearest center for a point, by squared Euclidean distance.
pub fn nearest_center(point: &[f64], centers: &ClusterCenters) -> usize {
    let all = centers.all_centers();
    let mut best = 0;
    for e in 1..all.len() {
        if sq_dist(point, &all[e]) < sq_dist(point, &all[best]) {
            best = e;
        }
    }
    best
}
