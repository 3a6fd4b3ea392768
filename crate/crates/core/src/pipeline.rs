//! End-to-end orchestration: weight calibration and system assessment.

use serde::Serialize;

use crate::assessment::{
    compute_vsr, fuse_weights, renormalize_midpoints, risk_matrix, AssessmentReport, ClassificationRule, FusedWeights,
    RiskMatrixCell, WeightEntry,
};
use crate::clustering::{fuzzy_cluster, sensitivity_coefficient, SampleMatrix};
use crate::config::{AssessmentConfig, WeightGroup};
use crate::description::SystemDescription;
use crate::error::{Error, Issue, Result};
use crate::indicator::{FirstOrder, IndicatorId, SubIndicator};
use crate::indicators::damage_severity;
use crate::interval::Interval;
use crate::projection::optimize_direction;
use crate::tree::{IndicatorNode, IndicatorTree};
use crate::weighting::{ahp_weights, containment_violations, ifahp_weights, AhpResult, IntervalJudgmentMatrix};

pub const WEIGHT_REPORT_SCHEMA_VERSION: u32 = 1;

/// Rho used when samples exist but clustering is switched off.
pub const FALLBACK_RHO: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupCalibration {
    pub group: String,
    pub members: Vec<IndicatorId>,
    pub ahp: AhpResult,
    pub consistent: bool,
    pub interval: Vec<Interval>,
    /// True when every crisp weight lies inside its interval weight.
    pub containment: bool,
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub groups: Vec<GroupCalibration>,
    pub tree: IndicatorTree,
    pub warnings: Vec<String>,
}

/// AHP and I-FAHP weights for every group, the consistency gate and the
/// crisp-inside-interval check, assembled into an [`IndicatorTree`].
pub fn calibrate(cfg: &AssessmentConfig) -> Result<Calibration> {
    let mut groups = Vec::with_capacity(5);
    let mut warnings = Vec::new();
    let mut issues = Vec::new();
    for g in WeightGroup::ALL {
        let m = cfg.matrix(g);
        let ahp = ahp_weights(m);
        let consistent = ahp.consistency_ratio <= cfg.consistency_threshold;
        if !consistent {
            let msg = format!(
                "consistency ratio {:.4} exceeds {}",
                ahp.consistency_ratio, cfg.consistency_threshold
            );
            if cfg.strict_consistency {
                issues.push(Issue::new(format!("matrices.{}", g.key()), msg));
            } else {
                warnings.push(format!("matrices.{}: {msg}", g.key()));
            }
        }
        let interval_matrix = match &cfg.interval_matrices[g.position()] {
            Some(im) => im.clone(),
            None => IntervalJudgmentMatrix::fuzzify(m, cfg.delta)?,
        };
        let interval = ifahp_weights(&interval_matrix)?;
        let members = g.members();
        let violations = containment_violations(&interval, &ahp.weights)?;
        for &k in &violations {
            issues.push(Issue::new(
                format!("intervalMatrices.{}", g.key()),
                format!(
                    "AHP weight of {} ({:.4}) lies outside its interval weight {:.4}",
                    members[k], ahp.weights[k], interval[k]
                ),
            ));
        }
        groups.push(GroupCalibration {
            group: g.key().to_string(),
            members,
            consistent,
            containment: violations.is_empty(),
            ahp,
            interval,
        });
    }
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }

    let node = |id: IndicatorId, crisp: f64, iv: Interval| {
        let spec = cfg.spec(id);
        IndicatorNode {
            id,
            name: spec.name.clone(),
            orientation: spec.orientation,
            bands: spec.bands.clone(),
            crisp_weight: crisp,
            interval_weight: iv,
        }
    };
    let index: Vec<IndicatorNode> = FirstOrder::ALL
        .iter()
        .map(|&f| node(f.into(), groups[0].ahp.weights[f.position()], groups[0].interval[f.position()]))
        .collect();
    let subs: Vec<IndicatorNode> = SubIndicator::ALL
        .iter()
        .map(|&s| {
            let gc = &groups[1 + s.parent().position()];
            let k = s.rank_in_group();
            node(s.into(), gc.ahp.weights[k], gc.interval[k])
        })
        .collect();
    let tree = IndicatorTree::new(index, subs, cfg.vsr_bands.clone())?;
    Ok(Calibration { groups, tree, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoSource {
    Override,
    Clustering,
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RhoInfo {
    pub value: f64,
    pub source: RhoSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusteringSummary {
    pub clusters: usize,
    pub iterations: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub centers: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObjectiveGroup {
    pub group: String,
    pub direction: Vec<f64>,
    pub objective_value: f64,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObjectiveWeighting {
    pub rho: RhoInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clustering: Option<ClusteringSummary>,
    pub groups: Vec<ObjectiveGroup>,
}

/// Sample aggregates for the index layer, using the crisp sub-weights.
fn index_layer_samples(samples: &SampleMatrix, tree: &IndicatorTree) -> Result<SampleMatrix> {
    let rows = samples
        .rows()
        .iter()
        .map(|row| {
            FirstOrder::ALL
                .iter()
                .map(|f| {
                    let v: f64 = f.subs().iter().map(|&s| tree.sub_node(s).crisp_weight * row[s.position()]).sum();
                    v.clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();
    SampleMatrix::new(rows)
}

/// Rho from clustering (or override/fallback) and projection-pursuit weights
/// for each group, computed on normalized samples.
pub fn objective_weighting(cfg: &AssessmentConfig, tree: &IndicatorTree, samples: &SampleMatrix) -> Result<ObjectiveWeighting> {
    let mut clustering = None;
    let rho = if let Some(r) = cfg.rho {
        RhoInfo {
            value: r,
            source: RhoSource::Override,
        }
    } else if cfg.clustering.enabled {
        let res = fuzzy_cluster(samples, &cfg.clustering.params)?;
        let value = sensitivity_coefficient(&res.membership)?;
        clustering = Some(ClusteringSummary {
            clusters: res.centers.clusters(),
            iterations: res.iterations,
            converged: res.converged,
            final_objective: res.objective_trace.last().copied().unwrap_or(0.0),
            centers: (0..res.centers.clusters()).map(|e| res.centers.center(e)).collect(),
        });
        RhoInfo {
            value,
            source: RhoSource::Clustering,
        }
    } else {
        RhoInfo {
            value: FALLBACK_RHO,
            source: RhoSource::Fallback,
        }
    };

    let mut groups = Vec::with_capacity(5);
    for g in WeightGroup::ALL {
        let data = match g {
            WeightGroup::Index => index_layer_samples(samples, tree)?,
            WeightGroup::Sub(f) => {
                let cols: Vec<usize> = f.subs().iter().map(|s| s.position()).collect();
                samples.select_columns(&cols)?
            }
        };
        let res = optimize_direction(&data, &cfg.projection)?;
        groups.push(ObjectiveGroup {
            group: g.key().to_string(),
            direction: res.best_direction.components().to_vec(),
            objective_value: res.objective_value,
            weights: res.objective_weights,
        });
    }
    Ok(ObjectiveWeighting { rho, clustering, groups })
}

/// Blend interval weights with objective weights and renormalize each group.
pub fn fused_weights(tree: &IndicatorTree, objective: Option<&ObjectiveWeighting>) -> Result<FusedWeights> {
    let Some(obj) = objective else {
        return Ok(FusedWeights::from_tree(tree));
    };
    let rho = obj.rho.value;
    let mut index = Vec::new();
    let mut subs = vec![None; 18];
    for (g, og) in WeightGroup::ALL.iter().zip(&obj.groups) {
        let members = g.members();
        let subjective: Vec<Interval> = members.iter().map(|&id| tree.node(id).interval_weight).collect();
        let fused = renormalize_midpoints(&fuse_weights(&subjective, &og.weights, rho)?)?;
        for (k, id) in members.iter().enumerate() {
            let entry = WeightEntry {
                id: *id,
                subjective: subjective[k],
                objective: Some(og.weights[k]),
                fused: fused[k],
            };
            match id {
                IndicatorId::Index(_) => index.push(entry),
                IndicatorId::Sub(s) => subs[s.position()] = Some(entry),
            }
        }
    }
    Ok(FusedWeights {
        rho: Some(rho),
        index,
        subs: subs.into_iter().map(|e| e.expect("every sub-indicator belongs to a group")).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightReport {
    pub schema_version: u32,
    pub groups: Vec<GroupCalibration>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveWeighting>,
    pub fused: FusedWeights,
    pub risk_matrix: Vec<RiskMatrixCell>,
    pub warnings: Vec<String>,
}

/// Calibrated weights, plus objective correction when the description
/// carries samples.
pub fn weight_report(
    cfg: &AssessmentConfig,
    system: Option<&SystemDescription>,
    rule: ClassificationRule,
) -> Result<WeightReport> {
    let cal = calibrate(cfg)?;
    let mut warnings = cfg.warnings.clone();
    warnings.extend(cal.warnings.iter().cloned());
    let objective = match system {
        Some(d) if d.samples.is_some() => {
            let raw = d.raw_values(cfg)?;
            let bounds = d.bounds(&raw)?;
            let samples = d.normalize_samples(cfg, &bounds)?.expect("samples present");
            Some(objective_weighting(cfg, &cal.tree, &samples)?)
        }
        _ => None,
    };
    let fused = fused_weights(&cal.tree, objective.as_ref())?;
    let risk_matrix = risk_matrix(&cal.tree, &fused.index_weights(), &cfg.thresholds, rule);
    Ok(WeightReport {
        schema_version: WEIGHT_REPORT_SCHEMA_VERSION,
        groups: cal.groups,
        objective,
        fused,
        risk_matrix,
        warnings,
    })
}

impl WeightReport {
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for g in &self.groups {
            let _ = writeln!(
                s,
                "[{}] lambda_max={:.4} CI={:.4} CR={:.4}{}",
                g.group,
                g.ahp.lambda_max,
                g.ahp.consistency_index,
                g.ahp.consistency_ratio,
                if g.consistent { "" } else { "  (inconsistent)" }
            );
            for (k, id) in g.members.iter().enumerate() {
                let _ = writeln!(s, "  {:<5} AHP {:.4}  I-FAHP {:.4}", id.code(), g.ahp.weights[k], g.interval[k]);
            }
        }
        if let Some(o) = &self.objective {
            let _ = writeln!(s, "\nrho = {:.6} ({:?})", o.rho.value, o.rho.source);
        }
        let _ = writeln!(s, "\nFused weights:");
        for e in self.fused.index.iter().chain(&self.fused.subs) {
            let _ = writeln!(s, "  {:<5} {:.4}", e.id.code(), e.fused);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

/// Run the full assessment for one system description.
pub fn assess(cfg: &AssessmentConfig, system: &SystemDescription, rule: ClassificationRule) -> Result<AssessmentReport> {
    let cal = calibrate(cfg)?;
    let raw = system.raw_values(cfg)?;
    let bounds = system.bounds(&raw)?;
    let norm = system.normalize_target(cfg, &raw, &bounds)?;
    let objective = match system.normalize_samples(cfg, &bounds)? {
        Some(samples) => Some(objective_weighting(cfg, &cal.tree, &samples)?),
        None => None,
    };
    let weights = fused_weights(&cal.tree, objective.as_ref())?;
    let mut report = compute_vsr(&system.name, &norm, &weights, &cal.tree, &cfg.thresholds, rule)?;
    for r in &mut report.indicators {
        r.raw = Some(raw[&r.id]);
        r.bounds = Some(bounds[r.id.position()]);
    }
    report.damage_severity = system.damage.as_ref().map(damage_severity);
    report.warnings.extend(cfg.warnings.iter().cloned());
    report.warnings.extend(cal.warnings);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_calibration_is_consistent_and_contained() {
        let cal = calibrate(&AssessmentConfig::builtin()).unwrap();
        assert!(cal.groups.iter().all(|g| g.consistent && g.containment));
        assert!(cal.warnings.is_empty());
        let w = &cal.groups[0].ahp.weights;
        for (got, want) in w.iter().zip([0.3636, 0.3182, 0.1818, 0.1364]) {
            assert!((got - want).abs() < 1e-3);
        }
    }

    #[test]
    fn strict_gate_rejects_inconsistent_matrix() {
        let overlay = r#"{"consistency": {"threshold": 0.1, "strict": true},
            "matrices": {"VCCR": {"order": ["C1","C2","C3"], "values": [[1,"1/3",1],[3,1,1],[1,1,1]]}}}"#;
        let cfg = AssessmentConfig::from_overlay_str(overlay).unwrap();
        assert!(matches!(calibrate(&cfg), Err(Error::Validation(_))));
        let lenient = overlay.replace("\"strict\": true", "\"strict\": false");
        let cfg = AssessmentConfig::from_overlay_str(&lenient).unwrap();
        let cal = calibrate(&cfg).unwrap();
        assert_eq!(cal.warnings.len(), 1);
        assert!(!cal.groups[3].consistent);
    }

    #[test]
    fn containment_violation_names_indicators() {
        let overlay = r#"{"intervalMatrices": {"VHIR": {"order": ["H1","H2","H3"],
            "lower": [[1,"1/3","1/2"],[2,1,1],[1,1,1]],
            "upper": [[1,"1/2",1],[3,1,1],[2,1,1]]}}}"#;
        let cfg = AssessmentConfig::from_overlay_str(overlay).unwrap();
        let Err(Error::Validation(v)) = calibrate(&cfg) else { panic!("expected a violation") };
        assert!(v.iter().any(|i| i.message.contains("H1")), "{v:?}");
    }
}
