//! Normalization, weight fusion, VSR composition and classification.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::band::{BandLabel, BandTable};
use crate::error::{Error, Result};
use crate::indicator::{FirstOrder, IndicatorId, SubIndicator};
use crate::interval::{self, Interval};
use crate::tree::{IndicatorTree, Orientation};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Map a raw indicator onto `[0, 1]` within `[lo, hi]`.
///
/// `Cost` gives `(raw - lo) / (hi - lo)`; `Benefit` gives
/// `(hi - raw) / (hi - lo)`.
pub fn normalize(raw: f64, lo: f64, hi: f64, orientation: Orientation) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::validation(
            "normalization bounds",
            format!("need lo < hi, got [{lo}, {hi}]"),
        ));
    }
    if !(raw >= lo && raw <= hi) {
        return Err(Error::out_of_range("raw indicator value", raw, lo, hi));
    }
    let span = hi - lo;
    let v = match orientation {
        Orientation::Cost => (raw - lo) / span,
        Orientation::Benefit => (hi - raw) / span,
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Normalized values for all 18 sub-indicators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedIndicators([f64; 18]);

impl NormalizedIndicators {
    pub fn new(values: [f64; 18]) -> Result<Self> {
        for (s, v) in SubIndicator::ALL.iter().zip(values) {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::out_of_range(format!("normalized {s}"), v, 0.0, 1.0));
            }
        }
        Ok(Self(values))
    }

    pub fn from_map(values: &BTreeMap<SubIndicator, f64>) -> Result<Self> {
        let missing: Vec<String> = SubIndicator::ALL
            .iter()
            .filter(|s| !values.contains_key(s))
            .map(|s| format!("{} ({})", s.code(), s.acronym()))
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteInput(missing));
        }
        Self::new(std::array::from_fn(|k| values[&SubIndicator::ALL[k]]))
    }

    pub fn uniform(v: f64) -> Result<Self> {
        Self::new([v; 18])
    }

    pub fn get(&self, s: SubIndicator) -> f64 {
        self.0[s.position()]
    }

    pub fn values(&self) -> &[f64; 18] {
        &self.0
    }
}

/// `rho * subjective + (1 - rho) * objective`, endpoint-wise.
pub fn fuse_weights(subjective: &[Interval], objective: &[f64], rho: f64) -> Result<Vec<Interval>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::out_of_range("rho", rho, 0.0, 1.0));
    }
    if subjective.len() != objective.len() {
        return Err(Error::Dimension(format!(
            "{} subjective vs {} objective weights",
            subjective.len(),
            objective.len()
        )));
    }
    let total: f64 = objective.iter().sum();
    if objective.iter().any(|o| *o < 0.0) || (total - 1.0).abs() > 1e-6 {
        return Err(Error::validation("objective weights", format!("must be non-negative and sum to 1, got {total}")));
    }
    subjective
        .iter()
        .zip(objective)
        .map(|(s, &o)| {
            let base = Interval::point((1.0 - rho) * o)?;
            Ok(s.scale(rho)?.add(base))
        })
        .collect()
}

/// Rescale a group of interval weights so their midpoints sum to one.
pub fn renormalize_midpoints(weights: &[Interval]) -> Result<Vec<Interval>> {
    let total: f64 = weights.iter().map(Interval::mid).sum();
    if !(total > 0.0) {
        return Err(Error::Numeric(format!("weight midpoints sum to {total}")));
    }
    weights.iter().map(|w| w.scale(1.0 / total)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightEntry {
    pub id: IndicatorId,
    pub subjective: Interval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    pub fused: Interval,
}

/// Final interval weights for every node, with their sources kept for audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FusedWeights {
    /// Blend coefficient, absent when no objective weights were available.
    pub rho: Option<f64>,
    pub index: Vec<WeightEntry>,
    pub subs: Vec<WeightEntry>,
}

impl FusedWeights {
    /// Use interval weights as given, with no objective component.
    pub fn subjective_only(index: [Interval; 4], subs: [Interval; 18]) -> Self {
        let entry = |id: IndicatorId, w: Interval| WeightEntry {
            id,
            subjective: w,
            objective: None,
            fused: w,
        };
        Self {
            rho: None,
            index: FirstOrder::ALL.iter().zip(index).map(|(&f, w)| entry(f.into(), w)).collect(),
            subs: SubIndicator::ALL.iter().zip(subs).map(|(&s, w)| entry(s.into(), w)).collect(),
        }
    }

    pub fn from_tree(tree: &IndicatorTree) -> Self {
        Self::subjective_only(tree.index_interval_weights(), tree.sub_interval_weights())
    }

    pub fn index_weight(&self, f: FirstOrder) -> Interval {
        self.index[f.position()].fused
    }

    pub fn sub_weight(&self, s: SubIndicator) -> Interval {
        self.subs[s.position()].fused
    }

    pub fn index_weights(&self) -> [Interval; 4] {
        std::array::from_fn(|k| self.index[k].fused)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassificationRule {
    /// Use the upper end of the VSR interval.
    #[default]
    Conservative,
    Midpoint,
    /// Use the lower end of the VSR interval.
    Optimistic,
}

impl ClassificationRule {
    pub fn pick(self, v: &Interval) -> f64 {
        match self {
            ClassificationRule::Conservative => v.hi(),
            ClassificationRule::Midpoint => v.mid(),
            ClassificationRule::Optimistic => v.lo(),
        }
    }
}

impl FromStr for ClassificationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conservative" => Ok(Self::Conservative),
            "midpoint" => Ok(Self::Midpoint),
            "optimistic" => Ok(Self::Optimistic),
            _ => Err(Error::Parse {
                format: "classification rule",
                message: format!("unknown rule `{s}` (conservative|midpoint|optimistic)"),
            }),
        }
    }
}

impl fmt::Display for ClassificationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassificationRule::Conservative => "conservative",
            ClassificationRule::Midpoint => "midpoint",
            ClassificationRule::Optimistic => "optimistic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VehicleState {
    Steady,
    Critical,
    Dangerous,
}

impl fmt::Display for VehicleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StateThresholds {
    pub critical_at: f64,
    pub dangerous_at: f64,
}

impl Default for StateThresholds {
    fn default() -> Self {
        Self {
            critical_at: 0.506,
            dangerous_at: 0.758,
        }
    }
}

impl StateThresholds {
    pub fn state_of(&self, v: f64) -> VehicleState {
        if v >= self.dangerous_at {
            VehicleState::Dangerous
        } else if v >= self.critical_at {
            VehicleState::Critical
        } else {
            VehicleState::Steady
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BandTriple {
    pub lo: BandLabel,
    pub mid: BandLabel,
    pub hi: BandLabel,
}

impl BandTriple {
    pub fn of(v: &Interval, table: &BandTable) -> Result<Self> {
        Ok(Self {
            lo: table.classify(v.lo())?.label,
            mid: table.classify(v.mid())?.label,
            hi: table.classify(v.hi())?.label,
        })
    }
}

/// Bands at the ends and midpoint of `vsr`, and the vehicle state under `rule`.
pub fn classify(
    vsr: &Interval,
    table: &BandTable,
    thresholds: &StateThresholds,
    rule: ClassificationRule,
) -> Result<(BandTriple, VehicleState)> {
    Ok((BandTriple::of(vsr, table)?, thresholds.state_of(rule.pick(vsr))))
}

/// Weighted additive aggregation of index aggregates into the VSR interval,
/// clipped to `[0, 1]`. The flag reports whether clipping happened.
pub fn compose_vsr(aggregates: &[Interval; 4], index_weights: &[Interval; 4]) -> Result<(Interval, bool)> {
    let mut terms = Vec::with_capacity(4);
    for (a, w) in aggregates.iter().zip(index_weights) {
        terms.push(w.mul_nonneg(*a)?);
    }
    Ok(interval::sum(terms).clamp_unit())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubResult {
    pub id: SubIndicator,
    pub acronym: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 2]>,
    pub normalized: f64,
    pub band: BandLabel,
    pub weight: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexResult {
    pub id: FirstOrder,
    pub weight: Interval,
    pub aggregate: Interval,
    pub bands: BandTriple,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankedComponent {
    pub id: SubIndicator,
    pub acronym: &'static str,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AssessmentReport {
    pub schema_version: u32,
    pub system: String,
    pub rule: ClassificationRule,
    pub weights: FusedWeights,
    pub indicators: Vec<SubResult>,
    pub indices: Vec<IndexResult>,
    pub vsr: Interval,
    pub vsr_bands: BandTriple,
    pub state: VehicleState,
    pub vulnerable: Vec<RankedComponent>,
    /// True when an aggregate or the VSR had to be clipped to `[0, 1]`.
    pub clipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damage_severity: Option<u8>,
    pub warnings: Vec<String>,
}

/// Per-index aggregates `sum(sub-weight * value)`, clipped to `[0, 1]`.
pub fn index_aggregates(norm: &NormalizedIndicators, w: &FusedWeights) -> Result<([Interval; 4], bool)> {
    let mut clipped = false;
    let mut out = [Interval::ZERO; 4];
    for f in FirstOrder::ALL {
        let mut terms = Vec::new();
        for &s in f.subs() {
            terms.push(w.sub_weight(s).scale(norm.get(s))?);
        }
        let (agg, cut) = interval::sum(terms).clamp_unit();
        clipped |= cut;
        out[f.position()] = agg;
    }
    Ok((out, clipped))
}

/// Full VSR computation for one system.
pub fn compute_vsr(
    system: &str,
    norm: &NormalizedIndicators,
    weights: &FusedWeights,
    tree: &IndicatorTree,
    thresholds: &StateThresholds,
    rule: ClassificationRule,
) -> Result<AssessmentReport> {
    let (aggregates, agg_clipped) = index_aggregates(norm, weights)?;
    let (vsr, vsr_clipped) = compose_vsr(&aggregates, &weights.index_weights())?;
    let (vsr_bands, state) = classify(&vsr, tree.vsr_bands(), thresholds, rule)?;

    let mut indicators = Vec::with_capacity(18);
    for s in SubIndicator::ALL {
        let v = norm.get(s);
        indicators.push(SubResult {
            id: s,
            acronym: s.acronym(),
            raw: None,
            bounds: None,
            normalized: v,
            band: tree.sub_node(s).bands.classify(v)?.label,
            weight: weights.sub_weight(s),
        });
    }
    let mut indices = Vec::with_capacity(4);
    for f in FirstOrder::ALL {
        let agg = aggregates[f.position()];
        indices.push(IndexResult {
            id: f,
            weight: weights.index_weight(f),
            aggregate: agg,
            bands: BandTriple::of(&agg, &tree.index_node(f).bands)?,
        });
    }

    Ok(AssessmentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        system: system.to_string(),
        rule,
        weights: weights.clone(),
        indicators,
        indices,
        vsr,
        vsr_bands,
        state,
        vulnerable: rank_components(norm, weights),
        clipped: agg_clipped || vsr_clipped,
        damage_severity: None,
        warnings: Vec::new(),
    })
}

/// Sub-indicators by descending midpoint contribution to the VSR; ties keep
/// canonical order.
pub fn rank_components(norm: &NormalizedIndicators, w: &FusedWeights) -> Vec<RankedComponent> {
    let mut ranked: Vec<RankedComponent> = SubIndicator::ALL
        .iter()
        .map(|&s| RankedComponent {
            id: s,
            acronym: s.acronym(),
            contribution: w.index_weight(s.parent()).mid() * w.sub_weight(s).mid() * norm.get(s),
        })
        .collect();
    ranked.sort_by(|a, b| b.contribution.total_cmp(&a.contribution).then(a.id.cmp(&b.id)));
    ranked
}

/// VSR range reachable when each index aggregate spans the given band.
pub fn risk_matrix_cell(bands: &[Interval; 4], index_weights: &[Interval; 4]) -> Interval {
    let lo: f64 = bands.iter().zip(index_weights).map(|(b, w)| w.lo() * b.lo()).sum();
    let hi: f64 = bands.iter().zip(index_weights).map(|(b, w)| w.hi() * b.hi()).sum();
    let lo = lo.clamp(0.0, 1.0);
    let hi = hi.clamp(lo, 1.0);
    Interval::new(lo, hi).expect("clamped endpoints are ordered")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RiskMatrixCell {
    pub ecr: BandLabel,
    pub vcr: BandLabel,
    pub vccr: BandLabel,
    pub vhir: BandLabel,
    pub range: Interval,
    pub state: VehicleState,
}

/// All 5^4 band combinations of the four indices.
pub fn risk_matrix(
    tree: &IndicatorTree,
    index_weights: &[Interval; 4],
    thresholds: &StateThresholds,
    rule: ClassificationRule,
) -> Vec<RiskMatrixCell> {
    let band_iv = |f: FirstOrder, l: BandLabel| {
        let b = tree.index_node(f).bands.band(l);
        Interval::new(b.lo, b.hi).expect("band edges ordered")
    };
    let mut cells = Vec::with_capacity(625);
    for e in BandLabel::ALL {
        for v in BandLabel::ALL {
            for c in BandLabel::ALL {
                for h in BandLabel::ALL {
                    let bands = [
                        band_iv(FirstOrder::Ecr, e),
                        band_iv(FirstOrder::Vcr, v),
                        band_iv(FirstOrder::Vccr, c),
                        band_iv(FirstOrder::Vhir, h),
                    ];
                    let range = risk_matrix_cell(&bands, index_weights);
                    cells.push(RiskMatrixCell {
                        ecr: e,
                        vcr: v,
                        vccr: c,
                        vhir: h,
                        range,
                        state: thresholds.state_of(rule.pick(&range)),
                    });
                }
            }
        }
    }
    cells
}

impl AssessmentReport {
    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "System: {}", self.system);
        let _ = writeln!(s, "VSR: {:.6}  ({} rule)", self.vsr, self.rule);
        let _ = writeln!(
            s,
            "Bands: lo={} mid={} hi={}",
            self.vsr_bands.lo, self.vsr_bands.mid, self.vsr_bands.hi
        );
        let _ = writeln!(s, "State: {}", self.state);
        match self.weights.rho {
            Some(r) => {
                let _ = writeln!(s, "rho: {r:.6}");
            }
            None => {
                let _ = writeln!(s, "rho: n/a (subjective weights only)");
            }
        }
        if let Some(d) = self.damage_severity {
            let _ = writeln!(s, "Damage severity: {d}");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<6} {:<24} {:<24} {:<18}", "Index", "Weight", "Aggregate", "Band (mid)");
        for i in &self.indices {
            let _ = writeln!(
                s,
                "{:<6} {:<24} {:<24} {:<18}",
                i.id.code(),
                format!("{:.4}", i.weight),
                format!("{:.4}", i.aggregate),
                i.bands.mid.display_name()
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:<4} {:<6} {:>12} {:>10} {:<18} {:<20}",
            "Id", "Name", "Raw", "Norm", "Band", "Weight"
        );
        for r in &self.indicators {
            let raw = r.raw.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
            let _ = writeln!(
                s,
                "{:<4} {:<6} {:>12} {:>10.4} {:<18} {:<20}",
                r.id.code(),
                r.acronym,
                raw,
                r.normalized,
                r.band.display_name(),
                format!("{:.4}", r.weight)
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "Most vulnerable components:");
        for (k, c) in self.vulnerable.iter().take(5).enumerate() {
            let _ = writeln!(s, "  {}. {:<4} {:<6} {:.6}", k + 1, c.id.code(), c.acronym, c.contribution);
        }
        if self.clipped {
            let _ = writeln!(s, "\nnote: aggregates were clipped to [0, 1]");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
