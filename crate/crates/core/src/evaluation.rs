//! Confusion metrics for vulnerable-component identification and the
//! bug-count versus risk-ratio curve.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::band::{BandLabel, BandTable};
use crate::error::{Error, Issue, Result};

pub const SCORES_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LabeledItem {
    pub id: String,
    /// `None` until derived from a component score.
    pub predicted: Option<bool>,
    pub actual: bool,
    pub bug_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LabeledCorpus {
    items: Vec<LabeledItem>,
}

fn parse_bool(field: &str) -> Option<bool> {
    match field.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" | "t" => Some(true),
        "0" | "false" | "no" | "n" | "f" => Some(false),
        _ => None,
    }
}

impl LabeledCorpus {
    pub fn new(items: Vec<LabeledItem>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let dups: Vec<Issue> = items
            .iter()
            .enumerate()
            .filter(|(_, it)| !seen.insert(it.id.as_str()))
            .map(|(k, it)| Issue::new(format!("items[{k}]"), format!("duplicate component id `{}`", it.id)))
            .collect();
        if !dups.is_empty() {
            return Err(Error::Validation(dups));
        }
        Ok(Self { items })
    }

    /// Parse the delimiter-separated corpus format: `id, predicted, actual,
    /// bugCount` per line. The delimiter is tab if the first data line has
    /// one, comma otherwise. Blank lines and `#` comments are skipped, as is
    /// a leading header whose first field is `id`. An empty or `-` predicted
    /// field leaves the prediction to be derived.
    pub fn parse(text: &str) -> Result<Self> {
        let first_data = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .unwrap_or("");
        let delimiter = if first_data.contains('\t') { b'\t' } else { b',' };
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let mut items = Vec::new();
        let mut issues = Vec::new();
        let mut first = true;
        for record in reader.records() {
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line());
                    issues.push(Issue::new(format!("line {line}"), e.to_string()));
                    continue;
                }
            };
            let line = record.position().map_or(0, |p| p.line());
            let fields: Vec<&str> = record.iter().collect();
            if fields.iter().all(|f| f.is_empty()) {
                continue;
            }
            let header = first && fields[0].eq_ignore_ascii_case("id");
            first = false;
            if header {
                continue;
            }
            let at = format!("line {line}");
            if fields.len() != 4 {
                issues.push(Issue::new(at, format!("expected 4 fields, found {}", fields.len())));
                continue;
            }
            if fields[0].is_empty() {
                issues.push(Issue::new(at, "empty component id"));
                continue;
            }
            let predicted = match fields[1] {
                "" | "-" => None,
                f => match parse_bool(f) {
                    Some(b) => Some(b),
                    None => {
                        issues.push(Issue::new(at, format!("predicted: `{f}` is not a boolean")));
                        continue;
                    }
                },
            };
            let Some(actual) = parse_bool(fields[2]) else {
                issues.push(Issue::new(at, format!("actual: `{}` is not a boolean", fields[2])));
                continue;
            };
            let Ok(bug_count) = fields[3].parse::<u64>() else {
                issues.push(Issue::new(at, format!("bugCount: `{}` is not a non-negative integer", fields[3])));
                continue;
            };
            items.push(LabeledItem {
                id: fields[0].to_string(),
                predicted,
                actual,
                bug_count,
            });
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Self::new(items)
    }

    pub fn items(&self) -> &[LabeledItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Fill missing predictions: a component is predicted risky when its
    /// score falls in `positive_from` or a more severe band. Existing
    /// predictions are kept.
    pub fn with_derived_predictions(
        &self,
        scores: &ComponentScores,
        table: &BandTable,
        positive_from: BandLabel,
    ) -> Result<Self> {
        let missing: Vec<String> = self
            .items
            .iter()
            .filter(|it| it.predicted.is_none() && !scores.scores.contains_key(&it.id))
            .map(|it| format!("score for `{}`", it.id))
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteInput(missing));
        }
        let mut items = self.items.clone();
        for it in items.iter_mut().filter(|it| it.predicted.is_none()) {
            let label = table.classify(scores.scores[&it.id])?.label;
            it.predicted = Some(label >= positive_from);
        }
        Ok(Self { items })
    }
}

/// Per-component VSR midpoints keyed by component id.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ComponentScores {
    pub schema_version: u32,
    pub scores: BTreeMap<String, f64>,
}

impl ComponentScores {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::json("component scores", e))?;
        if s.schema_version != SCORES_SCHEMA_VERSION {
            return Err(Error::validation(
                "schemaVersion",
                format!("unsupported version {}", s.schema_version),
            ));
        }
        let bad: Vec<Issue> = s
            .scores
            .iter()
            .filter(|(_, v)| !(0.0..=1.0).contains(*v))
            .map(|(k, v)| Issue::new(format!("scores.{k}"), format!("{v} is outside [0, 1]")))
            .collect();
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Every item must carry a prediction; see
/// [`LabeledCorpus::with_derived_predictions`].
pub fn confusion(c: &LabeledCorpus) -> Result<ConfusionMatrix> {
    let unpredicted: Vec<String> = c
        .items
        .iter()
        .filter(|it| it.predicted.is_none())
        .map(|it| format!("prediction for `{}`", it.id))
        .collect();
    if !unpredicted.is_empty() {
        return Err(Error::IncompleteInput(unpredicted));
    }
    let mut m = ConfusionMatrix::default();
    for it in &c.items {
        match (it.predicted == Some(true), it.actual) {
            (true, true) => m.tp += 1,
            (true, false) => m.fp += 1,
            (false, false) => m.tn += 1,
            (false, true) => m.fn_ += 1,
        }
    }
    Ok(m)
}

/// Fractions in `[0, 1]`; `None` marks a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(m: &ConfusionMatrix) -> Metrics {
    Metrics {
        accuracy: ratio(m.tp + m.tn, m.total()),
        precision: ratio(m.tp, m.tp + m.fp),
        recall: ratio(m.tp, m.tp + m.fn_),
    }
}

/// A fraction as a percentage rounded half-up to two decimals.
pub fn percent_2dp(fraction: f64) -> f64 {
    // The nudge keeps exact halves such as 0.734375 from landing below .5
    // after the multiplication.
    let scaled = fraction * 10_000.0;
    (scaled + 0.5 + 1e-9).floor() / 100.0
}

pub fn format_percent(v: Option<f64>) -> String {
    match v {
        Some(f) => format!("{:.2}", percent_2dp(f)),
        None => "undefined".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub bug_count: u64,
    pub mean_ratio: f64,
    pub components: usize,
}

/// Group components by reported bug count and average each group's risk
/// ratio: the upper edge of the band the score falls in over the upper edge
/// of the top band.
pub fn risk_ratio_curve(c: &LabeledCorpus, scores: &ComponentScores, table: &BandTable) -> Result<Vec<CurvePoint>> {
    let missing: Vec<String> = c
        .items
        .iter()
        .filter(|it| !scores.scores.contains_key(&it.id))
        .map(|it| format!("score for `{}`", it.id))
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteInput(missing));
    }
    let top = table.bands()[4].hi;
    let mut groups: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for it in &c.items {
        let r = table.classify(scores.scores[&it.id])?.hi / top;
        let g = groups.entry(it.bug_count).or_default();
        g.0 += r;
        g.1 += 1;
    }
    Ok(groups
        .into_iter()
        .map(|(bug_count, (sum, n))| CurvePoint {
            bug_count,
            mean_ratio: sum / n as f64,
            components: n,
        })
        .collect())
}

pub fn curve_to_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from("bugCount,meanRatio,components\n");
    for p in points {
        s.push_str(&format!("{},{:.6},{}\n", p.bug_count, p.mean_ratio, p.components));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    #[test]
    fn published_columns() {
        let m = metrics(&cm(47, 78, 1542, 17));
        assert!((m.accuracy.unwrap() * 100.0 - 94.36).abs() <= 0.01);
        assert!((m.precision.unwrap() * 100.0 - 37.60).abs() <= 0.01);
        assert!((m.recall.unwrap() * 100.0 - 73.43).abs() <= 0.01);
        let m = metrics(&cm(41, 103, 1517, 23));
        assert!((m.accuracy.unwrap() * 100.0 - 92.52).abs() <= 0.01);
        assert!((m.precision.unwrap() * 100.0 - 28.47).abs() <= 0.01);
        assert!((m.recall.unwrap() * 100.0 - 64.06).abs() <= 0.01);
    }

    #[test]
    fn undefined_markers() {
        let m = metrics(&cm(0, 0, 5, 3));
        assert_eq!(m.precision, None);
        assert_eq!(m.recall, Some(0.0));
        let m = metrics(&ConfusionMatrix::default());
        assert_eq!((m.accuracy, m.precision, m.recall), (None, None, None));
        assert_eq!(format_percent(None), "undefined");
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(percent_2dp(0.734375), 73.44);
        assert_eq!(percent_2dp(0.376), 37.6);
        assert_eq!(percent_2dp(0.12344), 12.34);
    }

    #[test]
    fn parse_formats() {
        let text = "id,predicted,actual,bugCount\n# note\na.c,1,true,3\nb.c,-,0,0\n\nc.c,,no,1\n";
        let c = LabeledCorpus::parse(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.items()[0].predicted, Some(true));
        assert_eq!(c.items()[1].predicted, None);
        assert_eq!(c.items()[2].bug_count, 1);
        assert!(matches!(confusion(&c), Err(Error::IncompleteInput(v)) if v.len() == 2));
        let tabbed = LabeledCorpus::parse("a.c\t1\t1\t3\nb.c\t\t0\t0\n").unwrap();
        assert_eq!(tabbed.items()[1].predicted, None);
    }

    #[test]
    fn parse_errors_collected() {
        let err = LabeledCorpus::parse("a,1,1\nb,maybe,1,2\nc,1,1,-4\n").unwrap_err();
        match err {
            Error::Validation(v) => assert_eq!(v.len(), 3),
            e => panic!("{e}"),
        }
        assert!(LabeledCorpus::parse("a,1,1,1\na,0,0,0\n").is_err());
    }

    #[test]
    fn empty_corpus() {
        let c = LabeledCorpus::parse("").unwrap();
        assert_eq!(confusion(&c).unwrap(), ConfusionMatrix::default());
    }
}
