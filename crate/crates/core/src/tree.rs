//! The calibrated indicator hierarchy: one node per index and sub-indicator.

use serde::{Deserialize, Serialize};

use crate::band::BandTable;
use crate::error::{Error, Issue, Result};
use crate::indicator::{FirstOrder, IndicatorId, SubIndicator};
use crate::interval::Interval;
use crate::weighting::CONTAINMENT_TOL;

const SUM_TOL: f64 = 1e-6;

/// Whether a larger raw value means more risk (`Cost`) or less (`Benefit`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Cost,
    Benefit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndicatorNode {
    pub id: IndicatorId,
    pub name: String,
    pub orientation: Orientation,
    pub bands: BandTable,
    pub crisp_weight: f64,
    pub interval_weight: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndicatorTree {
    index: Vec<IndicatorNode>,
    subs: Vec<IndicatorNode>,
    vsr_bands: BandTable,
}

impl IndicatorTree {
    /// `index` must hold one node per [`FirstOrder`] and `subs` one node per
    /// [`SubIndicator`], each in canonical order.
    pub fn new(index: Vec<IndicatorNode>, subs: Vec<IndicatorNode>, vsr_bands: BandTable) -> Result<Self> {
        let mut issues = Vec::new();
        let expect_index: Vec<IndicatorId> = FirstOrder::ALL.iter().map(|&f| f.into()).collect();
        let expect_subs: Vec<IndicatorId> = SubIndicator::ALL.iter().map(|&s| s.into()).collect();
        if index.iter().map(|n| n.id).collect::<Vec<_>>() != expect_index {
            issues.push(Issue::new("index", "expected ECR, VCR, VCCR, VHIR in order"));
        }
        if subs.iter().map(|n| n.id).collect::<Vec<_>>() != expect_subs {
            issues.push(Issue::new("subs", "expected E1..E8, V1..V4, C1..C3, H1..H3 in order"));
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }

        let check_sum = |what: String, nodes: &[&IndicatorNode], issues: &mut Vec<Issue>| {
            let s: f64 = nodes.iter().map(|n| n.crisp_weight).sum();
            if (s - 1.0).abs() > SUM_TOL {
                issues.push(Issue::new(what, format!("crisp weights sum to {s}, expected 1")));
            }
        };
        check_sum("index".into(), &index.iter().collect::<Vec<_>>(), &mut issues);
        for f in FirstOrder::ALL {
            let group: Vec<&IndicatorNode> = f.subs().iter().map(|s| &subs[s.position()]).collect();
            check_sum(f.code().into(), &group, &mut issues);
        }
        for n in index.iter().chain(&subs) {
            let (w, iv) = (n.crisp_weight, n.interval_weight);
            if w < iv.lo() - CONTAINMENT_TOL || w > iv.hi() + CONTAINMENT_TOL {
                issues.push(Issue::new(
                    n.id.code(),
                    format!(
                        "crisp weight {:.6} outside interval weight {:.6}",
                        n.crisp_weight, n.interval_weight
                    ),
                ));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(Self {
            index,
            subs,
            vsr_bands,
        })
    }

    pub fn index_node(&self, f: FirstOrder) -> &IndicatorNode {
        &self.index[f.position()]
    }

    pub fn sub_node(&self, s: SubIndicator) -> &IndicatorNode {
        &self.subs[s.position()]
    }

    pub fn node(&self, id: IndicatorId) -> &IndicatorNode {
        match id {
            IndicatorId::Index(f) => self.index_node(f),
            IndicatorId::Sub(s) => self.sub_node(s),
        }
    }

    pub fn index_nodes(&self) -> &[IndicatorNode] {
        &self.index
    }

    pub fn sub_nodes(&self) -> &[IndicatorNode] {
        &self.subs
    }

    pub fn vsr_bands(&self) -> &BandTable {
        &self.vsr_bands
    }

    pub fn index_interval_weights(&self) -> [Interval; 4] {
        std::array::from_fn(|k| self.index[k].interval_weight)
    }

    pub fn sub_interval_weights(&self) -> [Interval; 18] {
        std::array::from_fn(|k| self.subs[k].interval_weight)
    }
}
