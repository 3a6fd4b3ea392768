//! Assessment configuration: embedded defaults, directory overrides and user
//! overlays, validated into [`AssessmentConfig`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::assessment::{ClassificationRule, StateThresholds};
use crate::band::{BandLabel, BandTable};
use crate::clustering::{CenterInit, FcmParams};
use crate::error::{Error, Issue, Result};
use crate::indicator::{FirstOrder, IndicatorId, SubIndicator};
use crate::projection::PpParams;
use crate::tree::Orientation;
use crate::weighting::{IntervalJudgmentMatrix, JudgmentMatrix};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const CONFIG_DIR_ENV: &str = "VSRQ_CONFIG_DIR";

/// Relative reciprocity deviation repaired silently-with-warning on load.
pub const RECIPROCITY_REPAIR_TOL: f64 = 5e-3;

/// The files making up a config set, each contributing disjoint top-level keys.
pub const DEFAULT_FILES: [(&str, &str); 4] = [
    ("config.json", include_str!("../defaults/config.json")),
    ("matrices.json", include_str!("../defaults/matrices.json")),
    ("bands.json", include_str!("../defaults/bands.json")),
    ("severity_rubric.json", include_str!("../defaults/severity_rubric.json")),
];

pub const C_PROFILE: &str = include_str!("../defaults/profiles/c.json");
pub const PYTHON_PROFILE: &str = include_str!("../defaults/profiles/python.json");

/// A weighting group: the four indices, or the sub-indicators of one index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WeightGroup {
    Index,
    Sub(FirstOrder),
}

impl WeightGroup {
    pub const ALL: [WeightGroup; 5] = [
        WeightGroup::Index,
        WeightGroup::Sub(FirstOrder::Ecr),
        WeightGroup::Sub(FirstOrder::Vcr),
        WeightGroup::Sub(FirstOrder::Vccr),
        WeightGroup::Sub(FirstOrder::Vhir),
    ];

    pub fn key(self) -> &'static str {
        match self {
            WeightGroup::Index => "index",
            WeightGroup::Sub(f) => f.code(),
        }
    }

    pub fn position(self) -> usize {
        match self {
            WeightGroup::Index => 0,
            WeightGroup::Sub(f) => 1 + f.position(),
        }
    }

    pub fn members(self) -> Vec<IndicatorId> {
        match self {
            WeightGroup::Index => FirstOrder::ALL.iter().map(|&f| f.into()).collect(),
            WeightGroup::Sub(f) => f.subs().iter().map(|&s| s.into()).collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Judgment {
    Number(f64),
    Text(String),
}

fn judgment_value(j: &Judgment) -> std::result::Result<f64, String> {
    match j {
        Judgment::Number(v) => Ok(*v),
        Judgment::Text(t) => {
            let t = t.trim();
            let parsed = match t.split_once('/') {
                Some((a, b)) => match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
                    (Ok(a), Ok(b)) if b != 0.0 => Some(a / b),
                    _ => None,
                },
                None => t.parse::<f64>().ok(),
            };
            parsed.filter(|v| v.is_finite()).ok_or_else(|| format!("`{t}` is not a number or fraction"))
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct MatrixDoc {
    order: Vec<String>,
    values: Vec<Vec<Judgment>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct IntervalMatrixDoc {
    order: Vec<String>,
    lower: Vec<Vec<Judgment>>,
    upper: Vec<Vec<Judgment>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct IndicatorDoc {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    orientation: Orientation,
    bands: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct FuzzDoc {
    delta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ConsistencyDoc {
    threshold: f64,
    strict: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SeverityDoc {
    in_vehicle: [f64; 5],
    v2i: [f64; 3],
    attacks: [f64; 4],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct HistoryDoc {
    half_life_years: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ClusteringDoc {
    enabled: bool,
    clusters: usize,
    fuzzifier: f64,
    tolerance: f64,
    max_iterations: usize,
    seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ProjectionDoc {
    seed: u64,
    population: usize,
    generations: usize,
    window_factor: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ClassificationDoc {
    rule: ClassificationRule,
    critical_at: f64,
    dangerous_at: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct EvaluationDoc {
    positive_from: BandLabel,
}

/// One row of the damage-severity rubric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RubricRow {
    pub levels: [u8; 2],
    pub safety: String,
    pub privacy: String,
    pub financial: String,
    pub operational: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSpec {
    pub id: IndicatorId,
    pub name: String,
    pub orientation: Orientation,
    pub bands: BandTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringConfig {
    pub enabled: bool,
    pub params: FcmParams,
}

/// Fully validated configuration.
#[derive(Debug, Clone)]
pub struct AssessmentConfig {
    /// Canonical order: the four indices, then the 18 sub-indicators.
    pub indicators: Vec<IndicatorSpec>,
    pub vsr_bands: BandTable,
    /// Crisp matrices in canonical member order, indexed by [`WeightGroup::position`].
    pub matrices: Vec<JudgmentMatrix>,
    /// Explicit interval matrices; a `None` slot is fuzzified from the crisp one.
    pub interval_matrices: Vec<Option<IntervalJudgmentMatrix>>,
    pub delta: f64,
    pub consistency_threshold: f64,
    pub strict_consistency: bool,
    pub bus_severity: [f64; 5],
    pub v2i_severity: [f64; 3],
    pub attack_severity: [f64; 4],
    pub half_life_years: f64,
    pub clustering: ClusteringConfig,
    pub projection: PpParams,
    pub rho: Option<f64>,
    pub rule: ClassificationRule,
    pub thresholds: StateThresholds,
    pub positive_from: BandLabel,
    pub severity_rubric: Vec<RubricRow>,
    /// Repairs applied while loading.
    pub warnings: Vec<String>,
}

/// Recursively overlay `top` onto `base`. Objects merge key by key; any
/// other value, arrays included, replaces what was there.
pub fn deep_merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => deep_merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn parse_object(name: &str, text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        format: "configuration",
        message: format!("{name}: {e}"),
    })?;
    if !v.is_object() {
        return Err(Error::Parse {
            format: "configuration",
            message: format!("{name}: top level must be an object"),
        });
    }
    Ok(v)
}

/// The built-in config set as one merged document.
pub fn embedded_document() -> Value {
    let mut doc = Value::Object(Map::new());
    for (name, text) in DEFAULT_FILES {
        deep_merge(&mut doc, parse_object(name, text).expect("embedded defaults are valid JSON"));
    }
    doc
}

/// The default document, with any files present in `dir` replacing their
/// built-in counterparts.
pub fn directory_document(dir: &Path) -> Result<Value> {
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "config directory not found"),
        ));
    }
    let mut doc = Value::Object(Map::new());
    for (name, builtin) in DEFAULT_FILES {
        let path = dir.join(name);
        let part = if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            parse_object(&path.display().to_string(), &text)?
        } else {
            parse_object(name, builtin)?
        };
        deep_merge(&mut doc, part);
    }
    Ok(doc)
}

/// Default document honouring `VSRQ_CONFIG_DIR`.
pub fn default_document() -> Result<Value> {
    match std::env::var_os(CONFIG_DIR_ENV) {
        Some(dir) if !dir.is_empty() => directory_document(&PathBuf::from(dir)),
        _ => Ok(embedded_document()),
    }
}

fn section<T: DeserializeOwned>(doc: &Map<String, Value>, key: &str, issues: &mut Vec<Issue>) -> Option<T> {
    match doc.get(key) {
        None => {
            issues.push(Issue::new(key, "missing"));
            None
        }
        Some(v) => match serde_json::from_value(v.clone()) {
            Ok(t) => Some(t),
            Err(e) => {
                issues.push(Issue::new(key, e.to_string()));
                None
            }
        },
    }
}

fn check_positive(path: &str, v: f64, issues: &mut Vec<Issue>) {
    if !(v.is_finite() && v > 0.0) {
        issues.push(Issue::new(path, format!("must be positive, got {v}")));
    }
}

fn check_weights(path: &str, w: &[f64], issues: &mut Vec<Issue>) {
    for (k, v) in w.iter().enumerate() {
        if !(v.is_finite() && *v >= 0.0) {
            issues.push(Issue::new(format!("{path}[{k}]"), format!("must be non-negative, got {v}")));
        }
    }
}

/// Map a document `order` list onto canonical member positions.
fn permutation(path: &str, order: &[String], group: WeightGroup, issues: &mut Vec<Issue>) -> Option<Vec<usize>> {
    let members = group.members();
    if order.len() != members.len() {
        issues.push(Issue::new(
            format!("{path}.order"),
            format!("expected {} entries, got {}", members.len(), order.len()),
        ));
        return None;
    }
    let mut perm = Vec::with_capacity(order.len());
    let mut ok = true;
    for (k, name) in order.iter().enumerate() {
        match name.parse::<IndicatorId>().ok().and_then(|id| members.iter().position(|m| *m == id)) {
            Some(p) if !perm.contains(&p) => perm.push(p),
            _ => {
                issues.push(Issue::new(
                    format!("{path}.order[{k}]"),
                    format!("`{name}` is not a distinct member of {}", group.key()),
                ));
                ok = false;
            }
        }
    }
    ok.then_some(perm)
}

/// Decode a judgment grid and place it in canonical order.
fn grid(path: &str, rows: &[Vec<Judgment>], perm: &[usize], issues: &mut Vec<Issue>) -> Option<Vec<Vec<f64>>> {
    let n = perm.len();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        issues.push(Issue::new(path, format!("must be a {n}x{n} matrix")));
        return None;
    }
    let mut out = vec![vec![0.0; n]; n];
    let mut ok = true;
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            match judgment_value(cell) {
                Ok(v) => out[perm[i]][perm[j]] = v,
                Err(m) => {
                    issues.push(Issue::new(format!("{path}[{i}][{j}]"), m));
                    ok = false;
                }
            }
        }
    }
    ok.then_some(out)
}

fn prefix_issues(prefix: &str, e: Error, issues: &mut Vec<Issue>) {
    match e {
        Error::Validation(v) => {
            for i in v {
                let sep = if i.path.starts_with('[') || i.path.is_empty() { "" } else { "." };
                issues.push(Issue::new(format!("{prefix}{sep}{}", i.path), i.message));
            }
        }
        other => issues.push(Issue::new(prefix, other.to_string())),
    }
}

const KNOWN_KEYS: [&str; 14] = [
    "schemaVersion",
    "indicators",
    "vsrBands",
    "matrices",
    "intervalMatrices",
    "fuzzification",
    "consistency",
    "severityWeights",
    "history",
    "clustering",
    "projection",
    "rho",
    "classification",
    "evaluation",
];

impl AssessmentConfig {
    /// Defaults (honouring `VSRQ_CONFIG_DIR`), optionally overlaid with a
    /// user file.
    pub fn load(user: Option<&Path>) -> Result<Self> {
        let mut doc = default_document()?;
        if let Some(path) = user {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            deep_merge(&mut doc, parse_object(&path.display().to_string(), &text)?);
        }
        Self::from_document(&doc)
    }

    /// Built-in defaults only, ignoring the environment.
    pub fn builtin() -> Self {
        Self::from_document(&embedded_document()).expect("built-in defaults validate")
    }

    /// Overlay JSON text onto the built-in defaults.
    pub fn from_overlay_str(text: &str) -> Result<Self> {
        let mut doc = embedded_document();
        deep_merge(&mut doc, parse_object("overlay", text)?);
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &Value) -> Result<Self> {
        let Some(doc) = doc.as_object() else {
            return Err(Error::validation("", "configuration must be an object"));
        };
        let mut issues = Vec::new();
        let mut warnings = Vec::new();
        for key in doc.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) && key != "severityRubric" {
                issues.push(Issue::new(key.clone(), "unknown key"));
            }
        }
        if let Some(v) = section::<u32>(doc, "schemaVersion", &mut issues) {
            if v != CONFIG_SCHEMA_VERSION {
                issues.push(Issue::new("schemaVersion", format!("unsupported version {v}")));
            }
        }

        // Indicators and bands.
        let mut indicators = Vec::new();
        if let Some(map) = section::<BTreeMap<String, Value>>(doc, "indicators", &mut issues) {
            let mut by_id: BTreeMap<IndicatorId, (String, Value)> = BTreeMap::new();
            for (k, v) in map {
                match k.parse::<IndicatorId>() {
                    Ok(id) => {
                        if by_id.insert(id, (k.clone(), v)).is_some() {
                            issues.push(Issue::new(format!("indicators.{k}"), "duplicate indicator"));
                        }
                    }
                    Err(_) => issues.push(Issue::new(format!("indicators.{k}"), "unknown indicator")),
                }
            }
            for id in IndicatorId::all() {
                let Some((key, v)) = by_id.remove(&id) else {
                    issues.push(Issue::new(format!("indicators.{}", id.code()), "missing"));
                    continue;
                };
                let path = format!("indicators.{key}");
                let d: IndicatorDoc = match serde_json::from_value(v) {
                    Ok(d) => d,
                    Err(e) => {
                        issues.push(Issue::new(path, e.to_string()));
                        continue;
                    }
                };
                match BandTable::from_ranges(&d.bands) {
                    Ok((bands, repairs)) => {
                        for r in repairs {
                            warnings.push(format!(
                                "{path}.bands: closed gap at {} upper edge {} -> {}",
                                r.label.display_name(),
                                r.from,
                                r.to
                            ));
                        }
                        let name = d.name.unwrap_or_else(|| match id {
                            IndicatorId::Index(f) => f.name().to_string(),
                            IndicatorId::Sub(s) => s.name().to_string(),
                        });
                        indicators.push(IndicatorSpec {
                            id,
                            name,
                            orientation: d.orientation,
                            bands,
                        });
                    }
                    Err(e) => prefix_issues(&format!("{path}.bands"), e, &mut issues),
                }
            }
        }

        let mut vsr_bands = None;
        if let Some(b) = section::<Vec<[f64; 2]>>(doc, "vsrBands", &mut issues) {
            match BandTable::from_ranges(&b) {
                Ok((t, repairs)) => {
                    for r in repairs {
                        warnings.push(format!(
                            "vsrBands: closed gap at {} upper edge {} -> {}",
                            r.label.display_name(),
                            r.from,
                            r.to
                        ));
                    }
                    vsr_bands = Some(t);
                }
                Err(e) => prefix_issues("vsrBands", e, &mut issues),
            }
        }

        // Judgment matrices.
        let mut matrices: Vec<Option<JudgmentMatrix>> = vec![None; 5];
        if let Some(map) = section::<BTreeMap<String, Value>>(doc, "matrices", &mut issues) {
            for k in map.keys() {
                if !WeightGroup::ALL.iter().any(|g| g.key() == k) {
                    issues.push(Issue::new(format!("matrices.{k}"), "unknown weighting group"));
                }
            }
            for g in WeightGroup::ALL {
                let path = format!("matrices.{}", g.key());
                let Some(v) = map.get(g.key()) else {
                    issues.push(Issue::new(path, "missing"));
                    continue;
                };
                let d: MatrixDoc = match serde_json::from_value(v.clone()) {
                    Ok(d) => d,
                    Err(e) => {
                        issues.push(Issue::new(path, e.to_string()));
                        continue;
                    }
                };
                let Some(perm) = permutation(&path, &d.order, g, &mut issues) else { continue };
                let Some(rows) = grid(&format!("{path}.values"), &d.values, &perm, &mut issues) else {
                    continue;
                };
                match JudgmentMatrix::new(&rows) {
                    Ok(m) => matrices[g.position()] = Some(m),
                    Err(Error::Validation(_)) => match JudgmentMatrix::from_rounded(&rows, RECIPROCITY_REPAIR_TOL) {
                        Ok((m, dev)) => {
                            warnings.push(format!(
                                "{path}: rebuilt lower triangle from upper (max reciprocity deviation {dev:.2e})"
                            ));
                            matrices[g.position()] = Some(m);
                        }
                        Err(e) => prefix_issues(&format!("{path}.values"), e, &mut issues),
                    },
                    Err(e) => prefix_issues(&format!("{path}.values"), e, &mut issues),
                }
            }
        }

        let mut interval_matrices: Vec<Option<IntervalJudgmentMatrix>> = vec![None; 5];
        if let Some(Some(map)) = section::<Option<BTreeMap<String, Value>>>(doc, "intervalMatrices", &mut issues) {
            for (k, v) in map {
                let path = format!("intervalMatrices.{k}");
                let Some(g) = WeightGroup::ALL.iter().copied().find(|g| g.key() == k) else {
                    issues.push(Issue::new(path, "unknown weighting group"));
                    continue;
                };
                let d: IntervalMatrixDoc = match serde_json::from_value(v) {
                    Ok(d) => d,
                    Err(e) => {
                        issues.push(Issue::new(path, e.to_string()));
                        continue;
                    }
                };
                let Some(perm) = permutation(&path, &d.order, g, &mut issues) else { continue };
                let lower = grid(&format!("{path}.lower"), &d.lower, &perm, &mut issues);
                let upper = grid(&format!("{path}.upper"), &d.upper, &perm, &mut issues);
                if let (Some(lower), Some(upper)) = (lower, upper) {
                    match IntervalJudgmentMatrix::new(lower, upper) {
                        Ok(m) => interval_matrices[g.position()] = Some(m),
                        Err(e) => prefix_issues(&path, e, &mut issues),
                    }
                }
            }
        }

        let fuzz = section::<FuzzDoc>(doc, "fuzzification", &mut issues);
        if let Some(f) = &fuzz {
            if !(f.delta.is_finite() && f.delta >= 0.0) {
                issues.push(Issue::new("fuzzification.delta", format!("must be non-negative, got {}", f.delta)));
            }
        }
        let consistency = section::<ConsistencyDoc>(doc, "consistency", &mut issues);
        if let Some(c) = &consistency {
            check_positive("consistency.threshold", c.threshold, &mut issues);
        }
        let severity = section::<SeverityDoc>(doc, "severityWeights", &mut issues);
        if let Some(s) = &severity {
            check_weights("severityWeights.inVehicle", &s.in_vehicle, &mut issues);
            check_weights("severityWeights.v2i", &s.v2i, &mut issues);
            check_weights("severityWeights.attacks", &s.attacks, &mut issues);
        }
        let history = section::<HistoryDoc>(doc, "history", &mut issues);
        if let Some(h) = &history {
            check_positive("history.halfLifeYears", h.half_life_years, &mut issues);
        }
        let clustering = section::<ClusteringDoc>(doc, "clustering", &mut issues);
        if let Some(c) = &clustering {
            if c.clusters < 2 {
                issues.push(Issue::new("clustering.clusters", format!("need at least 2, got {}", c.clusters)));
            }
            if !(c.fuzzifier.is_finite() && c.fuzzifier > 1.0) {
                issues.push(Issue::new("clustering.fuzzifier", format!("must exceed 1, got {}", c.fuzzifier)));
            }
            check_positive("clustering.tolerance", c.tolerance, &mut issues);
            if c.max_iterations == 0 {
                issues.push(Issue::new("clustering.maxIterations", "must be at least 1"));
            }
        }
        let projection = section::<ProjectionDoc>(doc, "projection", &mut issues);
        if let Some(p) = &projection {
            if p.population < 2 {
                issues.push(Issue::new("projection.population", format!("need at least 2, got {}", p.population)));
            }
            check_positive("projection.windowFactor", p.window_factor, &mut issues);
        }
        let rho = section::<Option<f64>>(doc, "rho", &mut issues).flatten();
        if let Some(r) = rho {
            if !(0.0..=1.0).contains(&r) {
                issues.push(Issue::new("rho", format!("must lie in [0, 1], got {r}")));
            }
        }
        let classification = section::<ClassificationDoc>(doc, "classification", &mut issues);
        if let Some(c) = &classification {
            if !(0.0 <= c.critical_at && c.critical_at <= c.dangerous_at && c.dangerous_at <= 1.0) {
                issues.push(Issue::new(
                    "classification",
                    format!("need 0 <= criticalAt <= dangerousAt <= 1, got {} and {}", c.critical_at, c.dangerous_at),
                ));
            }
        }
        let evaluation = section::<EvaluationDoc>(doc, "evaluation", &mut issues);

        let mut severity_rubric = Vec::new();
        if doc.contains_key("severityRubric") {
            if let Some(rows) = section::<Vec<RubricRow>>(doc, "severityRubric", &mut issues) {
                let mut next = 0u8;
                for (k, r) in rows.iter().enumerate() {
                    if r.levels[0] != next || r.levels[1] < r.levels[0] {
                        issues.push(Issue::new(
                            format!("severityRubric[{k}].levels"),
                            format!("expected a range starting at {next}"),
                        ));
                    }
                    next = r.levels[1].saturating_add(1);
                }
                if !rows.is_empty() && next != 10 {
                    issues.push(Issue::new("severityRubric", "levels must cover 0..=9"));
                }
                severity_rubric = rows;
            }
        }

        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        // Every section parsed, so the unwraps below cannot fail.
        let (fuzz, consistency, severity, history) =
            (fuzz.unwrap(), consistency.unwrap(), severity.unwrap(), history.unwrap());
        let (clustering, projection, classification, evaluation) =
            (clustering.unwrap(), projection.unwrap(), classification.unwrap(), evaluation.unwrap());
        Ok(Self {
            indicators,
            vsr_bands: vsr_bands.unwrap(),
            matrices: matrices.into_iter().map(Option::unwrap).collect(),
            interval_matrices,
            delta: fuzz.delta,
            consistency_threshold: consistency.threshold,
            strict_consistency: consistency.strict,
            bus_severity: severity.in_vehicle,
            v2i_severity: severity.v2i,
            attack_severity: severity.attacks,
            half_life_years: history.half_life_years,
            clustering: ClusteringConfig {
                enabled: clustering.enabled,
                params: FcmParams {
                    clusters: clustering.clusters,
                    fuzzifier: clustering.fuzzifier,
                    tolerance: clustering.tolerance,
                    max_iterations: clustering.max_iterations,
                    init: CenterInit::Random { seed: clustering.seed },
                },
            },
            projection: PpParams {
                seed: projection.seed,
                population: projection.population,
                generations: projection.generations,
                window_factor: projection.window_factor,
            },
            rho,
            rule: classification.rule,
            thresholds: StateThresholds {
                critical_at: classification.critical_at,
                dangerous_at: classification.dangerous_at,
            },
            positive_from: evaluation.positive_from,
            severity_rubric,
            warnings,
        })
    }

    pub fn spec(&self, id: IndicatorId) -> &IndicatorSpec {
        let k = match id {
            IndicatorId::Index(f) => f.position(),
            IndicatorId::Sub(s) => 4 + s.position(),
        };
        &self.indicators[k]
    }

    pub fn sub_spec(&self, s: SubIndicator) -> &IndicatorSpec {
        self.spec(s.into())
    }

    pub fn matrix(&self, g: WeightGroup) -> &JudgmentMatrix {
        &self.matrices[g.position()]
    }

    /// Override both generator seeds.
    pub fn set_seed(&mut self, seed: u64) {
        self.clustering.params.init = CenterInit::Random { seed };
        self.projection.seed = seed;
    }
}
