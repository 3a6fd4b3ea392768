//! Ingested facts about one vehicle system and the raw indicator values they
//! yield.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::assessment::{normalize, NormalizedIndicators};
use crate::clustering::SampleMatrix;
use crate::codemetrics::{to_metric_inputs, ScanReport};
use crate::config::AssessmentConfig;
use crate::error::{Error, Issue, Result};
use crate::indicator::{FirstOrder, SubIndicator};
use crate::indicators::{
    code_complexity_risks, ecu_coupling, history_risks, in_vehicle_comm_risk, u2v_comm_risk, v2i_comm_risk,
    v2v_comm_risk, AttackCounts, CodeModule, CommCounts, CommInventory, CouplingGraph, HistoryRecords, RecallRecord,
    SeverityVector,
};

pub const DESCRIPTION_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum EcuDoc {
    Edges(EdgesDoc),
    Adjacency(AdjacencyDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct EdgesDoc {
    subsystems: usize,
    #[serde(default)]
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct AdjacencyDoc {
    adjacency: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CommDoc {
    #[serde(default)]
    counts: CommCounts,
    bus_severity: Option<[f64; 5]>,
    v2i_severity: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CodeDoc {
    modules: Option<Vec<CodeModule>>,
    scan_report: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct HistoryDoc {
    #[serde(default)]
    recalls: Vec<RecallRecord>,
    #[serde(default)]
    performance_limit_accidents: u64,
    #[serde(default)]
    attacks: AttackCounts,
    attack_severity: Option<[f64; 4]>,
    half_life_years: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SamplesDoc {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DescriptionDoc {
    schema_version: u32,
    name: String,
    #[serde(default)]
    ecu: BTreeMap<String, EcuDoc>,
    communication: Option<CommDoc>,
    code: Option<CodeDoc>,
    history: Option<HistoryDoc>,
    #[serde(default)]
    precomputed: BTreeMap<String, f64>,
    #[serde(default)]
    normalization: BTreeMap<String, [f64; 2]>,
    samples: Option<SamplesDoc>,
    damage: Option<SeverityVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodeSource {
    Modules(Vec<CodeModule>),
    /// Path to a scan report, resolved by [`SystemDescription::load`].
    ScanReport(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Communication {
    pub counts: CommCounts,
    pub bus_severity: Option<[f64; 5]>,
    pub v2i_severity: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub recalls: Vec<RecallRecord>,
    pub performance_limit_accidents: u64,
    pub attacks: AttackCounts,
    pub attack_severity: Option<[f64; 4]>,
    pub half_life_years: Option<f64>,
}

/// Raw indicator values of comparable systems, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSamples {
    rows: Vec<[f64; 18]>,
}

impl RawSamples {
    pub fn rows(&self) -> &[[f64; 18]] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemDescription {
    pub name: String,
    pub ecu: BTreeMap<SubIndicator, CouplingGraph>,
    pub communication: Option<Communication>,
    pub code: Option<CodeSource>,
    pub history: Option<History>,
    /// Raw values supplied directly; these take precedence over computed ones.
    pub precomputed: BTreeMap<SubIndicator, f64>,
    pub normalization: BTreeMap<SubIndicator, [f64; 2]>,
    pub samples: Option<RawSamples>,
    pub damage: Option<SeverityVector>,
}

fn sub_key(path: &str, key: &str, issues: &mut Vec<Issue>) -> Option<SubIndicator> {
    match key.parse::<SubIndicator>() {
        Ok(s) => Some(s),
        Err(_) => {
            issues.push(Issue::new(format!("{path}.{key}"), "not a sub-indicator"));
            None
        }
    }
}

impl SystemDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DescriptionDoc = serde_json::from_str(text).map_err(|e| Error::json("system description", e))?;
        let mut issues = Vec::new();
        if doc.schema_version != DESCRIPTION_SCHEMA_VERSION {
            issues.push(Issue::new("schemaVersion", format!("unsupported version {}", doc.schema_version)));
        }
        if doc.name.trim().is_empty() {
            issues.push(Issue::new("name", "must not be empty"));
        }

        let mut ecu = BTreeMap::new();
        for (k, v) in &doc.ecu {
            let Some(s) = sub_key("ecu", k, &mut issues) else { continue };
            if s.parent() != FirstOrder::Ecr {
                issues.push(Issue::new(format!("ecu.{k}"), "not an ECU sub-indicator"));
                continue;
            }
            let g = match v {
                EcuDoc::Edges(e) => CouplingGraph::from_edges(e.subsystems, &e.edges),
                EcuDoc::Adjacency(a) => CouplingGraph::from_matrix(&a.adjacency),
            };
            match g {
                Ok(g) => {
                    ecu.insert(s, g);
                }
                Err(e) => issues.push(Issue::new(format!("ecu.{k}"), e.to_string())),
            }
        }

        let code = match doc.code {
            None => None,
            Some(CodeDoc {
                modules: Some(m),
                scan_report: None,
            }) => {
                for (k, module) in m.iter().enumerate() {
                    if let Err(e) = module.validate() {
                        issues.push(Issue::new(format!("code.modules[{k}]"), e.to_string()));
                    }
                }
                Some(CodeSource::Modules(m))
            }
            Some(CodeDoc {
                modules: None,
                scan_report: Some(p),
            }) => Some(CodeSource::ScanReport(p)),
            Some(_) => {
                issues.push(Issue::new("code", "give exactly one of `modules` or `scanReport`"));
                None
            }
        };

        let mut precomputed = BTreeMap::new();
        for (k, v) in &doc.precomputed {
            let Some(s) = sub_key("precomputed", k, &mut issues) else { continue };
            if !v.is_finite() {
                issues.push(Issue::new(format!("precomputed.{k}"), "must be finite"));
            }
            precomputed.insert(s, *v);
        }
        let mut normalization = BTreeMap::new();
        for (k, b) in &doc.normalization {
            let Some(s) = sub_key("normalization", k, &mut issues) else { continue };
            if !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1]) {
                issues.push(Issue::new(format!("normalization.{k}"), format!("need lo < hi, got [{}, {}]", b[0], b[1])));
            }
            normalization.insert(s, *b);
        }

        let samples = match doc.samples {
            None => None,
            Some(sd) => {
                let mut cols = Vec::with_capacity(sd.columns.len());
                for (k, c) in sd.columns.iter().enumerate() {
                    match c.parse::<SubIndicator>() {
                        Ok(s) if !cols.contains(&s) => cols.push(s),
                        _ => issues.push(Issue::new(format!("samples.columns[{k}]"), format!("`{c}` is not a distinct sub-indicator"))),
                    }
                }
                let missing: Vec<&str> = SubIndicator::ALL.iter().filter(|s| !cols.contains(s)).map(|s| s.code()).collect();
                if !missing.is_empty() && cols.len() == sd.columns.len() {
                    issues.push(Issue::new("samples.columns", format!("missing {}", missing.join(", "))));
                }
                let mut rows = Vec::with_capacity(sd.rows.len());
                if issues.is_empty() {
                    for (r, row) in sd.rows.iter().enumerate() {
                        if row.len() != 18 {
                            issues.push(Issue::new(format!("samples.rows[{r}]"), format!("expected 18 values, got {}", row.len())));
                            continue;
                        }
                        if row.iter().any(|v| !v.is_finite()) {
                            issues.push(Issue::new(format!("samples.rows[{r}]"), "values must be finite"));
                            continue;
                        }
                        let mut out = [0.0; 18];
                        for (c, s) in cols.iter().enumerate() {
                            out[s.position()] = row[c];
                        }
                        rows.push(out);
                    }
                }
                Some(RawSamples { rows })
            }
        };

        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(Self {
            name: doc.name,
            ecu,
            communication: doc.communication.map(|c| Communication {
                counts: c.counts,
                bus_severity: c.bus_severity,
                v2i_severity: c.v2i_severity,
            }),
            code,
            history: doc.history.map(|h| History {
                recalls: h.recalls,
                performance_limit_accidents: h.performance_limit_accidents,
                attacks: h.attacks,
                attack_severity: h.attack_severity,
                half_life_years: h.half_life_years,
            }),
            precomputed,
            normalization,
            samples,
            damage: doc.damage,
        })
    }

    /// Read a description file, loading a referenced scan report relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut d = Self::from_json(&text)?;
        if let Some(CodeSource::ScanReport(rel)) = &d.code {
            let full = path.parent().unwrap_or(Path::new(".")).join(rel);
            let report_text = std::fs::read_to_string(&full).map_err(|e| Error::io(&full, e))?;
            let report = ScanReport::from_json(&report_text)?;
            d.code = Some(CodeSource::Modules(to_metric_inputs(&report)));
        }
        Ok(d)
    }

    /// Raw values for all 18 sub-indicators, or the list of those that
    /// cannot be derived.
    pub fn raw_values(&self, cfg: &AssessmentConfig) -> Result<BTreeMap<SubIndicator, f64>> {
        let mut raw = BTreeMap::new();
        for (s, g) in &self.ecu {
            raw.insert(*s, ecu_coupling(g));
        }
        if let Some(c) = &self.communication {
            let inv = CommInventory::new(
                c.counts.clone(),
                c.bus_severity.unwrap_or(cfg.bus_severity),
                c.v2i_severity.unwrap_or(cfg.v2i_severity),
            )?;
            raw.insert(SubIndicator::V1, in_vehicle_comm_risk(&inv));
            raw.insert(SubIndicator::V2, u2v_comm_risk(&inv));
            raw.insert(SubIndicator::V3, v2v_comm_risk(&inv));
            raw.insert(SubIndicator::V4, v2i_comm_risk(&inv));
        }
        match &self.code {
            Some(CodeSource::Modules(m)) => {
                let r = code_complexity_risks(m)?;
                raw.insert(SubIndicator::C1, r.loc);
                raw.insert(SubIndicator::C2, r.halstead);
                raw.insert(SubIndicator::C3, r.cyclomatic);
            }
            Some(CodeSource::ScanReport(p)) => {
                return Err(Error::validation(
                    "code.scanReport",
                    format!("{} was not loaded; read the description from a file", p.display()),
                ))
            }
            None => {}
        }
        if let Some(h) = &self.history {
            let records = HistoryRecords {
                recalls: h.recalls.clone(),
                half_life_years: h.half_life_years.unwrap_or(cfg.half_life_years),
                performance_limit_accidents: h.performance_limit_accidents,
                attacks: h.attacks,
                attack_severity: h.attack_severity.unwrap_or(cfg.attack_severity),
            };
            let r = history_risks(&records)?;
            raw.insert(SubIndicator::H1, r.functional);
            raw.insert(SubIndicator::H2, r.expected_functional);
            raw.insert(SubIndicator::H3, r.security);
        }
        raw.extend(self.precomputed.iter().map(|(k, v)| (*k, *v)));

        let missing: Vec<String> = SubIndicator::ALL
            .iter()
            .filter(|s| !raw.contains_key(s))
            .map(|s| format!("{} ({})", s.code(), s.acronym()))
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteInput(missing));
        }
        Ok(raw)
    }

    /// Normalization bounds per sub-indicator: explicit bounds, else the
    /// range of the samples together with the target value.
    pub fn bounds(&self, raw: &BTreeMap<SubIndicator, f64>) -> Result<[[f64; 2]; 18]> {
        let mut out = [[0.0; 2]; 18];
        let mut missing = Vec::new();
        for s in SubIndicator::ALL {
            if let Some(b) = self.normalization.get(&s) {
                out[s.position()] = *b;
                continue;
            }
            let Some(samples) = &self.samples else {
                missing.push(format!("normalization bounds for {} ({})", s.code(), s.acronym()));
                continue;
            };
            let mut lo = raw[&s];
            let mut hi = lo;
            for row in samples.rows() {
                lo = lo.min(row[s.position()]);
                hi = hi.max(row[s.position()]);
            }
            out[s.position()] = [lo, hi];
        }
        if !missing.is_empty() {
            return Err(Error::IncompleteInput(missing));
        }
        let degenerate: Vec<Issue> = SubIndicator::ALL
            .iter()
            .filter(|s| !(out[s.position()][0] < out[s.position()][1]))
            .map(|s| {
                let [lo, hi] = out[s.position()];
                Issue::new(format!("normalization.{}", s.code()), format!("degenerate bounds [{lo}, {hi}]"))
            })
            .collect();
        if !degenerate.is_empty() {
            return Err(Error::Validation(degenerate));
        }
        Ok(out)
    }

    pub fn normalize_target(
        &self,
        cfg: &AssessmentConfig,
        raw: &BTreeMap<SubIndicator, f64>,
        bounds: &[[f64; 2]; 18],
    ) -> Result<NormalizedIndicators> {
        let mut v = [0.0; 18];
        for s in SubIndicator::ALL {
            let [lo, hi] = bounds[s.position()];
            v[s.position()] = normalize(raw[&s], lo, hi, cfg.sub_spec(s).orientation)
                .map_err(|e| Error::validation(format!("{} ({})", s.code(), s.acronym()), e.to_string()))?;
        }
        NormalizedIndicators::new(v)
    }

    /// Normalized sample matrix in canonical column order, if samples exist.
    pub fn normalize_samples(&self, cfg: &AssessmentConfig, bounds: &[[f64; 2]; 18]) -> Result<Option<SampleMatrix>> {
        let Some(samples) = &self.samples else { return Ok(None) };
        let mut rows = Vec::with_capacity(samples.rows().len());
        for (r, row) in samples.rows().iter().enumerate() {
            let mut out = Vec::with_capacity(18);
            for s in SubIndicator::ALL {
                let [lo, hi] = bounds[s.position()];
                out.push(
                    normalize(row[s.position()], lo, hi, cfg.sub_spec(s).orientation)
                        .map_err(|e| Error::validation(format!("samples.rows[{r}].{}", s.code()), e.to_string()))?,
                );
            }
            rows.push(out);
        }
        SampleMatrix::new(rows).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_sections_listed() {
        let d = SystemDescription::from_json(
            r#"{"schemaVersion":1,"name":"x","communication":{"counts":{"canLow":2}}}"#,
        )
        .unwrap();
        match d.raw_values(&AssessmentConfig::builtin()).unwrap_err() {
            Error::IncompleteInput(v) => {
                assert_eq!(v.len(), 14);
                assert!(v[0].starts_with("E1"));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn precomputed_fills_gaps() {
        let mut pre = String::new();
        for s in SubIndicator::ALL {
            pre.push_str(&format!("\"{}\": 0.5,", s.code()));
        }
        pre.pop();
        let d = SystemDescription::from_json(&format!(r#"{{"schemaVersion":1,"name":"x","precomputed":{{{pre}}}}}"#)).unwrap();
        let raw = d.raw_values(&AssessmentConfig::builtin()).unwrap();
        assert_eq!(raw.len(), 18);
        assert!(matches!(d.bounds(&raw), Err(Error::IncompleteInput(_))));
    }

    #[test]
    fn structural_errors() {
        assert!(SystemDescription::from_json("[]").is_err());
        let bad = r#"{"schemaVersion":2,"name":"","ecu":{"V1":{"subsystems":2},"E1":{"subsystems":2,"edges":[[0,0]]}}}"#;
        match SystemDescription::from_json(bad).unwrap_err() {
            Error::Validation(v) => assert_eq!(v.len(), 4, "{v:?}"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn ecu_forms_agree() {
        let d = SystemDescription::from_json(
            r#"{"schemaVersion":1,"name":"x","ecu":{
                "E1":{"subsystems":3,"edges":[[0,1],[1,2]]},
                "EMCR2":{"adjacency":[[0,1,0],[1,0,1],[0,1,0]]}}}"#,
        );
        assert!(d.is_err());
        let d = SystemDescription::from_json(
            r#"{"schemaVersion":1,"name":"x","ecu":{
                "E1":{"subsystems":3,"edges":[[0,1],[1,2]]},
                "TCCR":{"adjacency":[[0,1,0],[1,0,1],[0,1,0]]}}}"#,
        )
        .unwrap();
        assert_eq!(ecu_coupling(&d.ecu[&SubIndicator::E1]), ecu_coupling(&d.ecu[&SubIndicator::E2]));
    }
}
