//! Five-level risk bands over `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Issue, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BandLabel {
    Normal,
    Slight,
    SlightlySerious,
    Serious,
    ExtremelySerious,
}

impl BandLabel {
    pub const ALL: [BandLabel; 5] = [
        BandLabel::Normal,
        BandLabel::Slight,
        BandLabel::SlightlySerious,
        BandLabel::Serious,
        BandLabel::ExtremelySerious,
    ];

    pub fn display_name(self) -> &'static str {
        match self {
            BandLabel::Normal => "Normal",
            BandLabel::Slight => "Slight",
            BandLabel::SlightlySerious => "Slightly Serious",
            BandLabel::Serious => "Serious",
            BandLabel::ExtremelySerious => "Extremely Serious",
        }
    }
}

impl fmt::Display for BandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for BandLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        BandLabel::ALL
            .into_iter()
            .find(|b| format!("{b:?}").eq_ignore_ascii_case(&key))
            .ok_or_else(|| Error::Parse {
                format: "band label",
                message: format!("unknown band `{s}`"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskBand {
    pub label: BandLabel,
    pub lo: f64,
    pub hi: f64,
}

/// An adjacent-edge mismatch that was snapped closed when a table was built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeRepair {
    /// Band whose upper edge was moved.
    pub label: BandLabel,
    pub from: f64,
    pub to: f64,
}

/// Five contiguous bands covering `[0, 1]`.
///
/// Membership is half-open `[lo, hi)` except for the top band, which also
/// contains `1.0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandTable {
    bands: [RiskBand; 5],
}

impl BandTable {
    /// Build from five `(lo, hi)` ranges in severity order. A gap between
    /// neighbours is closed by moving the lower band's upper edge onto the
    /// upper band's lower edge; each move is returned. Overlaps are rejected.
    pub fn from_ranges(ranges: &[[f64; 2]]) -> Result<(BandTable, Vec<EdgeRepair>)> {
        if ranges.len() != 5 {
            return Err(Error::validation(
                "",
                format!("expected 5 bands, got {}", ranges.len()),
            ));
        }
        let mut issues = Vec::new();
        for (i, r) in ranges.iter().enumerate() {
            if !(r[0].is_finite() && r[1].is_finite()) {
                issues.push(Issue::new(format!("[{i}]"), "band edge is not finite"));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        let mut bands = [RiskBand {
            label: BandLabel::Normal,
            lo: 0.0,
            hi: 0.0,
        }; 5];
        for (i, (label, r)) in BandLabel::ALL.into_iter().zip(ranges).enumerate() {
            bands[i] = RiskBand {
                label,
                lo: r[0],
                hi: r[1],
            };
        }
        let mut repairs = Vec::new();
        for i in 0..4 {
            let next_lo = bands[i + 1].lo;
            if bands[i].hi > next_lo {
                issues.push(Issue::new(
                    format!("[{i}]"),
                    format!("overlaps the next band ({} > {next_lo})", bands[i].hi),
                ));
            } else if bands[i].hi < next_lo {
                repairs.push(EdgeRepair {
                    label: bands[i].label,
                    from: bands[i].hi,
                    to: next_lo,
                });
                bands[i].hi = next_lo;
            }
        }
        if bands[0].lo != 0.0 {
            issues.push(Issue::new("[0]", "lowest band must start at 0"));
        }
        if bands[4].hi != 1.0 {
            issues.push(Issue::new("[4]", "highest band must end at 1"));
        }
        for (i, b) in bands.iter().enumerate() {
            if !(b.lo < b.hi) {
                issues.push(Issue::new(
                    format!("[{i}]"),
                    format!("empty band [{}, {}]", b.lo, b.hi),
                ));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok((BandTable { bands }, repairs))
    }

    pub fn bands(&self) -> &[RiskBand; 5] {
        &self.bands
    }

    pub fn band(&self, label: BandLabel) -> &RiskBand {
        &self.bands[label as usize]
    }

    /// The unique band containing `value`.
    pub fn classify(&self, value: f64) -> Result<&RiskBand> {
        band_of(value, &self.bands)
    }
}

/// Locate `value` in an ordered, contiguous band list.
pub fn band_of(value: f64, bands: &[RiskBand]) -> Result<&RiskBand> {
    let (first, last) = match (bands.first(), bands.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Dimension("empty band list".into())),
    };
    if !(value >= first.lo && value <= last.hi) {
        return Err(Error::out_of_range("band value", value, first.lo, last.hi));
    }
    if value == last.hi {
        return Ok(last);
    }
    bands
        .iter()
        .find(|b| b.lo <= value && value < b.hi)
        .ok_or_else(|| Error::out_of_range("band value", value, first.lo, last.hi))
}
