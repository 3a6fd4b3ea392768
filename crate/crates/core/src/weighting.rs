//! Crisp AHP and interval fuzzy AHP weight calibration.

use serde::Serialize;

use crate::error::{Error, Issue, Result};
use crate::interval::Interval;

const RECIPROCAL_TOL: f64 = 1e-6;
const SCALE_MIN: f64 = 1.0 / 9.0;
const SCALE_MAX: f64 = 9.0;

/// Saaty random consistency index for n = 1..=15.
const RANDOM_INDEX: [f64; 15] = [
    0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59,
];

pub const CONSISTENCY_THRESHOLD: f64 = 0.1;

/// Reciprocal pairwise-comparison matrix on the 1/9..9 scale.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgmentMatrix {
    n: usize,
    entries: Vec<f64>,
}

fn scale_issue(i: usize, j: usize, v: f64) -> Option<Issue> {
    let slack = 1e-9;
    if !(v.is_finite() && v >= SCALE_MIN - slack && v <= SCALE_MAX + slack) {
        Some(Issue::new(
            format!("[{i}][{j}]"),
            format!("judgment {v} outside [1/9, 9]"),
        ))
    } else {
        None
    }
}

fn check_square(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::Dimension(format!("judgment matrix needs n >= 2, got {n}")));
    }
    if n > RANDOM_INDEX.len() {
        return Err(Error::Dimension(format!(
            "judgment matrix larger than {} is not supported",
            RANDOM_INDEX.len()
        )));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", r.len())));
        }
    }
    Ok(n)
}

impl JudgmentMatrix {
    /// Strict constructor: unit diagonal and reciprocity within 1e-6.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = check_square(rows)?;
        let mut issues = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                issues.extend(scale_issue(i, j, v));
                if i == j && (v - 1.0).abs() > RECIPROCAL_TOL {
                    issues.push(Issue::new(format!("[{i}][{i}]"), "diagonal must be 1"));
                }
                if j < i && (v * rows[j][i] - 1.0).abs() > RECIPROCAL_TOL {
                    issues.push(Issue::new(
                        format!("[{i}][{j}]"),
                        format!("not reciprocal to [{j}][{i}] = {}", rows[j][i]),
                    ));
                }
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(Self {
            n,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    /// Lenient constructor for tables printed with rounded entries:
    /// reciprocal pairs may disagree by a relative `tolerance`, after which
    /// the lower triangle is rebuilt as `1 / upper`. Returns the largest
    /// deviation that was repaired.
    pub fn from_rounded(rows: &[Vec<f64>], tolerance: f64) -> Result<(Self, f64)> {
        let n = check_square(rows)?;
        let mut issues = Vec::new();
        let mut worst = 0.0f64;
        let mut fixed = rows.to_vec();
        for i in 0..n {
            for j in 0..n {
                issues.extend(scale_issue(i, j, rows[i][j]));
            }
            if (rows[i][i] - 1.0).abs() > RECIPROCAL_TOL {
                issues.push(Issue::new(format!("[{i}][{i}]"), "diagonal must be 1"));
            }
            fixed[i][i] = 1.0;
            for j in (i + 1)..n {
                let dev = (rows[i][j] * rows[j][i] - 1.0).abs();
                if dev > tolerance {
                    issues.push(Issue::new(
                        format!("[{j}][{i}]"),
                        format!(
                            "{} is not reciprocal to [{i}][{j}] = {} (tolerance {tolerance})",
                            rows[j][i], rows[i][j]
                        ),
                    ));
                }
                worst = worst.max(dev);
                fixed[j][i] = 1.0 / rows[i][j];
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok((Self::new(&fixed)?, worst))
    }

    /// Perfectly consistent matrix with entries `w_i / w_j`.
    pub fn from_ratios(w: &[f64]) -> Result<Self> {
        if w.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::validation("", "ratio weights must be positive"));
        }
        let rows: Vec<Vec<f64>> = w
            .iter()
            .map(|wi| w.iter().map(|wj| wi / wj).collect())
            .collect();
        Self::new(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AhpResult {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
    pub consistency_index: f64,
    pub consistency_ratio: f64,
}

impl AhpResult {
    pub fn is_consistent(&self) -> bool {
        self.consistency_ratio < CONSISTENCY_THRESHOLD
    }
}

/// Row geometric-mean weights with Saaty's consistency ratio.
pub fn ahp_weights(m: &JudgmentMatrix) -> AhpResult {
    let n = m.dim();
    let geo: Vec<f64> = (0..n)
        .map(|i| {
            let log_sum: f64 = (0..n).map(|j| m.get(i, j).ln()).sum();
            (log_sum / n as f64).exp()
        })
        .collect();
    let total: f64 = geo.iter().sum();
    let weights: Vec<f64> = geo.iter().map(|g| g / total).collect();

    let lambda_max = (0..n)
        .map(|i| {
            let mw: f64 = (0..n).map(|j| m.get(i, j) * weights[j]).sum();
            mw / weights[i]
        })
        .sum::<f64>()
        / n as f64;
    let ci = ((lambda_max - n as f64) / (n as f64 - 1.0)).max(0.0);
    let ri = RANDOM_INDEX[n - 1];
    let cr = if ri > 0.0 { ci / ri } else { 0.0 };
    AhpResult {
        weights,
        lambda_max,
        consistency_index: ci,
        consistency_ratio: cr,
    }
}

/// Pair of lower/upper judgment matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalJudgmentMatrix {
    lower: Vec<Vec<f64>>,
    upper: Vec<Vec<f64>>,
}

impl IntervalJudgmentMatrix {
    pub fn new(lower: Vec<Vec<f64>>, upper: Vec<Vec<f64>>) -> Result<Self> {
        let n = check_square(&lower)?;
        if check_square(&upper)? != n {
            return Err(Error::Dimension("lower and upper matrices differ in size".into()));
        }
        let mut issues = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (lo, hi) = (lower[i][j], upper[i][j]);
                issues.extend(scale_issue(i, j, lo).map(|e| Issue::new(format!("lower{}", e.path), e.message)));
                issues.extend(scale_issue(i, j, hi).map(|e| Issue::new(format!("upper{}", e.path), e.message)));
                if lo > hi {
                    issues.push(Issue::new(format!("[{i}][{j}]"), format!("lower {lo} exceeds upper {hi}")));
                }
                if i == j && ((lo - 1.0).abs() > RECIPROCAL_TOL || (hi - 1.0).abs() > RECIPROCAL_TOL) {
                    issues.push(Issue::new(format!("[{i}][{i}]"), "diagonal must be [1, 1]"));
                }
                if j < i {
                    let ok = (lo * upper[j][i] - 1.0).abs() <= RECIPROCAL_TOL
                        && (hi * lower[j][i] - 1.0).abs() <= RECIPROCAL_TOL;
                    if !ok {
                        issues.push(Issue::new(
                            format!("[{i}][{j}]"),
                            format!("interval not reciprocal to [{j}][{i}]"),
                        ));
                    }
                }
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(Self { lower, upper })
    }

    /// Widen each upper-triangle judgment to `[v / (1 + delta), v * (1 + delta)]`
    /// (clipped to the 1/9..9 scale) and mirror it reciprocally below the diagonal.
    pub fn fuzzify(m: &JudgmentMatrix, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::validation("delta", format!("must be non-negative, got {delta}")));
        }
        let n = m.dim();
        let mut lower = vec![vec![1.0; n]; n];
        let mut upper = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = m.get(i, j);
                let lo = (v / (1.0 + delta)).clamp(SCALE_MIN, SCALE_MAX);
                let hi = (v * (1.0 + delta)).clamp(SCALE_MIN, SCALE_MAX);
                lower[i][j] = lo;
                upper[i][j] = hi;
                lower[j][i] = 1.0 / hi;
                upper[j][i] = 1.0 / lo;
            }
        }
        Self::new(lower, upper)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Vec<f64>] {
        &self.lower
    }

    pub fn upper(&self) -> &[Vec<f64>] {
        &self.upper
    }

    pub fn entry(&self, i: usize, j: usize) -> (f64, f64) {
        (self.lower[i][j], self.upper[i][j])
    }
}

/// Interval weights from column-sum reciprocals of the bound matrices,
/// scaled by the square roots of their totals.
pub fn ifahp_weights(m: &IntervalJudgmentMatrix) -> Result<Vec<Interval>> {
    let n = m.dim();
    let col_recip = |mat: &[Vec<f64>]| -> Result<Vec<f64>> {
        (0..n)
            .map(|j| {
                let s: f64 = (0..n).map(|i| mat[i][j]).sum();
                if s > 0.0 && s.is_finite() {
                    Ok(1.0 / s)
                } else {
                    Err(Error::Numeric(format!("column {j} sums to {s}")))
                }
            })
            .collect()
    };
    let gamma_lo = col_recip(&m.upper)?;
    let gamma_hi = col_recip(&m.lower)?;
    let mu = gamma_lo.iter().sum::<f64>().sqrt();
    let nu = gamma_hi.iter().sum::<f64>().sqrt();
    gamma_lo
        .iter()
        .zip(&gamma_hi)
        .map(|(lo, hi)| Interval::new(mu * lo, nu * hi))
        .collect()
}

/// Slack for the crisp-inside-interval check; a zero-width interval and the
/// crisp weight it came from differ only by rounding.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Indices `j` where the crisp weight falls outside its interval weight.
pub fn containment_violations(gamma: &[Interval], crisp: &[f64]) -> Result<Vec<usize>> {
    if gamma.len() != crisp.len() {
        return Err(Error::Dimension(format!(
            "{} interval weights vs {} crisp weights",
            gamma.len(),
            crisp.len()
        )));
    }
    Ok(gamma
        .iter()
        .zip(crisp)
        .enumerate()
        .filter(|(_, (g, w))| **w < g.lo() - CONTAINMENT_TOL || **w > g.hi() + CONTAINMENT_TOL)
        .map(|(j, _)| j)
        .collect())
}

/// True when every crisp weight lies inside its interval weight.
pub fn crisp_within_intervals(gamma: &[Interval], crisp: &[f64]) -> Result<bool> {
    Ok(containment_violations(gamma, crisp)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_matrix() {
        let m = JudgmentMatrix::new(&vec![vec![1.0; 3]; 3]).unwrap();
        let r = ahp_weights(&m);
        for w in &r.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(r.consistency_ratio.abs() < 1e-12);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(JudgmentMatrix::new(&[vec![1.0]]), Err(Error::Dimension(_))));
        assert!(matches!(
            JudgmentMatrix::new(&[vec![1.0, 2.0], vec![0.5]]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn strict_constructor_checks() {
        assert!(JudgmentMatrix::new(&[vec![1.0, 2.0], vec![0.4, 1.0]]).is_err());
        assert!(JudgmentMatrix::new(&[vec![1.0, 10.0], vec![0.1, 1.0]]).is_err());
        assert!(JudgmentMatrix::new(&[vec![2.0, 1.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn rounded_tables_are_repaired() {
        let rows = vec![
            vec![1.0, 1.143, 2.0],
            vec![0.875, 1.0, 1.75],
            vec![0.5, 0.571, 1.0],
        ];
        let (m, worst) = JudgmentMatrix::from_rounded(&rows, 5e-3).unwrap();
        assert!(worst > 0.0 && worst < 1e-3);
        assert!((m.get(1, 0) * m.get(0, 1) - 1.0).abs() < 1e-12);
        assert!(JudgmentMatrix::from_rounded(&[vec![1.0, 2.0], vec![0.6, 1.0]], 5e-3).is_err());
    }

    #[test]
    fn inconsistent_matrix_has_positive_cr() {
        let rows = vec![
            vec![1.0, 9.0, 1.0 / 9.0],
            vec![1.0 / 9.0, 1.0, 9.0],
            vec![9.0, 1.0 / 9.0, 1.0],
        ];
        let r = ahp_weights(&JudgmentMatrix::new(&rows).unwrap());
        assert!(r.consistency_ratio > CONSISTENCY_THRESHOLD);
        assert!(!r.is_consistent());
    }

    #[test]
    fn degenerate_interval_recovers_ahp() {
        let m = JudgmentMatrix::from_ratios(&[8.0, 7.0, 4.0, 3.0]).unwrap();
        let crisp = ahp_weights(&m).weights;
        let g = ifahp_weights(&IntervalJudgmentMatrix::fuzzify(&m, 0.0).unwrap()).unwrap();
        for (gi, wi) in g.iter().zip(&crisp) {
            assert!(gi.width() < 1e-12);
            assert!((gi.lo() - wi).abs() < 1e-12);
        }
    }

    #[test]
    fn fuzzified_index_layer_contains_ahp() {
        let m = JudgmentMatrix::from_ratios(&[8.0, 7.0, 4.0, 3.0]).unwrap();
        let crisp = ahp_weights(&m).weights;
        let g = ifahp_weights(&IntervalJudgmentMatrix::fuzzify(&m, 0.15).unwrap()).unwrap();
        assert!(crisp_within_intervals(&g, &crisp).unwrap());
        for (gi, p) in g.iter().zip([0.3636, 0.3182, 0.1818, 0.1364]) {
            assert!(gi.contains(p), "{gi} should contain {p}");
        }
    }

    #[test]
    fn containment_check_cases() {
        let g = vec![Interval::new(0.2949, 0.3702).unwrap()];
        assert!(crisp_within_intervals(&g, &[0.3636]).unwrap());
        assert!(crisp_within_intervals(&g, &[0.2949]).unwrap());
        assert!(!crisp_within_intervals(&g, &[0.4]).unwrap());
        assert_eq!(containment_violations(&g, &[0.1]).unwrap(), vec![0]);
        assert!(matches!(crisp_within_intervals(&g, &[0.1, 0.2]), Err(Error::Dimension(_))));
    }

    #[test]
    fn interval_matrix_validation() {
        let ok = IntervalJudgmentMatrix::new(
            vec![vec![1.0, 2.0], vec![1.0 / 3.0, 1.0]],
            vec![vec![1.0, 3.0], vec![0.5, 1.0]],
        );
        assert!(ok.is_ok());
        let inverted = IntervalJudgmentMatrix::new(
            vec![vec![1.0, 3.0], vec![0.5, 1.0]],
            vec![vec![1.0, 2.0], vec![1.0 / 3.0, 1.0]],
        );
        assert!(inverted.is_err());
        let not_recip = IntervalJudgmentMatrix::new(
            vec![vec![1.0, 2.0], vec![0.25, 1.0]],
            vec![vec![1.0, 3.0], vec![0.5, 1.0]],
        );
        assert!(not_recip.is_err());
    }

    fn arb_weights() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(1.0f64..9.0, 2..8)
    }

    proptest! {
        #[test]
        fn consistent_matrix_reproduces_ratios(w in arb_weights()) {
            let m = JudgmentMatrix::from_ratios(&w).unwrap();
            let r = ahp_weights(&m);
            let total: f64 = w.iter().sum();
            prop_assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for (a, b) in r.weights.iter().zip(&w) {
                prop_assert!(*a > 0.0);
                prop_assert!((a - b / total).abs() < 1e-12);
            }
            prop_assert!(r.consistency_ratio < 1e-9);
        }

        #[test]
        fn widening_never_shrinks(w in arb_weights(), d1 in 0.0f64..0.3, extra in 0.0f64..0.3) {
            let m = JudgmentMatrix::from_ratios(&w).unwrap();
            let narrow = ifahp_weights(&IntervalJudgmentMatrix::fuzzify(&m, d1).unwrap()).unwrap();
            let wide = ifahp_weights(&IntervalJudgmentMatrix::fuzzify(&m, d1 + extra).unwrap()).unwrap();
            for (a, b) in narrow.iter().zip(&wide) {
                prop_assert!(b.lo() <= a.lo() + 1e-12 && a.hi() <= b.hi() + 1e-12);
            }
        }

        #[test]
        fn interval_weights_contain_crisp(w in arb_weights(), d in 0.0f64..0.5) {
            let m = JudgmentMatrix::from_ratios(&w).unwrap();
            let crisp = ahp_weights(&m).weights;
            let g = ifahp_weights(&IntervalJudgmentMatrix::fuzzify(&m, d).unwrap()).unwrap();
            for (gi, wi) in g.iter().zip(&crisp) {
                prop_assert!(gi.lo() <= wi + 1e-12 && *wi <= gi.hi() + 1e-12);
            }
        }
    }
}
