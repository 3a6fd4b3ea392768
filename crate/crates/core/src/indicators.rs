//! Raw second-order indicator values computed from system facts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected calling relation between the subsystems of one ECU system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    adjacency: Vec<Vec<bool>>,
}

impl CouplingGraph {
    pub fn empty(subsystems: usize) -> Self {
        Self {
            adjacency: vec![vec![false; subsystems]; subsystems],
        }
    }

    /// Build from an undirected edge list. Duplicate edges collapse; self
    /// loops and out-of-range endpoints are rejected.
    pub fn from_edges(subsystems: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(subsystems);
        for &(i, j) in edges {
            if i >= subsystems || j >= subsystems {
                return Err(Error::Dimension(format!(
                    "edge ({i}, {j}) references a subsystem outside 0..{subsystems}"
                )));
            }
            if i == j {
                return Err(Error::validation(
                    format!("edge ({i}, {j})"),
                    "a subsystem cannot call itself in the coupling relation",
                ));
            }
            g.adjacency[i][j] = true;
            g.adjacency[j][i] = true;
        }
        Ok(g)
    }

    /// Build from a full 0/1 matrix, which must be square, symmetric and
    /// zero on the diagonal.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::empty(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "adjacency row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::validation(format!("[{i}][{j}]"), "entries must be 0 or 1"));
                }
                g.adjacency[i][j] = v == 1;
            }
        }
        for i in 0..n {
            if g.adjacency[i][i] {
                return Err(Error::validation(format!("[{i}][{i}]"), "diagonal must be 0"));
            }
            for j in 0..i {
                if g.adjacency[i][j] != g.adjacency[j][i] {
                    return Err(Error::validation(
                        format!("[{i}][{j}]"),
                        "adjacency matrix must be symmetric",
                    ));
                }
            }
        }
        Ok(g)
    }

    pub fn subsystem_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }
}

/// Number of calling relationships: the sum of the indicator over all ordered
/// pairs, halved.
pub fn ecu_coupling(g: &CouplingGraph) -> f64 {
    let ordered: usize = g
        .adjacency
        .iter()
        .map(|row| row.iter().filter(|&&c| c).count())
        .sum();
    ordered as f64 / 2.0
}

/// Module counts per communication technology, plus the severity weights that
/// scale them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct CommCounts {
    pub lin: u64,
    pub can_low: u64,
    pub can_high: u64,
    pub flexray: u64,
    pub most: u64,
    pub dsrc: u64,
    /// VANET modules used for vehicle-to-vehicle traffic.
    pub vanet_v2v: u64,
    /// VANET modules used for vehicle-to-infrastructure traffic.
    pub vanet_v2i: u64,
    pub wifi: u64,
    pub cellular: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommInventory {
    pub counts: CommCounts,
    /// Attack severity per in-vehicle bus: LIN, CAN-L, CAN-H, FlexRay, MOST.
    pub bus_severity: [f64; 5],
    /// Damage degree per V2I link: VANET, Wi-Fi, cellular.
    pub v2i_severity: [f64; 3],
}

pub const DEFAULT_BUS_SEVERITY: [f64; 5] = [1.0, 1.0, 2.0, 2.0, 1.0];
pub const DEFAULT_V2I_SEVERITY: [f64; 3] = [1.0, 1.0, 1.0];
pub const DEFAULT_ATTACK_SEVERITY: [f64; 4] = [1.0, 1.0, 1.0, 1.0];
pub const DEFAULT_HALF_LIFE_YEARS: f64 = 3.0;

fn check_weights(what: &str, w: &[f64]) -> Result<()> {
    for (k, v) in w.iter().enumerate() {
        if !(v.is_finite() && *v >= 0.0) {
            return Err(Error::validation(
                format!("{what}[{k}]"),
                format!("severity weight must be a finite non-negative number, got {v}"),
            ));
        }
    }
    Ok(())
}

impl CommInventory {
    pub fn new(counts: CommCounts, bus_severity: [f64; 5], v2i_severity: [f64; 3]) -> Result<Self> {
        check_weights("busSeverity", &bus_severity)?;
        check_weights("v2iSeverity", &v2i_severity)?;
        Ok(Self {
            counts,
            bus_severity,
            v2i_severity,
        })
    }
}

pub fn in_vehicle_comm_risk(inv: &CommInventory) -> f64 {
    let c = &inv.counts;
    let n = [c.lin, c.can_low, c.can_high, c.flexray, c.most];
    inv.bus_severity
        .iter()
        .zip(n)
        .map(|(w, k)| w * k as f64)
        .sum()
}

pub fn u2v_comm_risk(inv: &CommInventory) -> f64 {
    inv.counts.dsrc as f64
}

pub fn v2v_comm_risk(inv: &CommInventory) -> f64 {
    inv.counts.vanet_v2v as f64
}

pub fn v2i_comm_risk(inv: &CommInventory) -> f64 {
    let c = &inv.counts;
    let n = [c.vanet_v2i, c.wifi, c.cellular];
    inv.v2i_severity
        .iter()
        .zip(n)
        .map(|(w, k)| w * k as f64)
        .sum()
}

/// Halstead token counts for one code module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Halstead {
    /// Distinct operators.
    pub n1: u64,
    /// Distinct operands.
    pub n2: u64,
    /// Total operators.
    #[serde(rename = "N1")]
    pub big_n1: u64,
    /// Total operands.
    #[serde(rename = "N2")]
    pub big_n2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlFlow {
    pub edges: u64,
    pub nodes: u64,
}

impl ControlFlow {
    pub fn cyclomatic(&self) -> f64 {
        self.edges as f64 - self.nodes as f64 + 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CodeModule {
    pub id: String,
    pub loc: u64,
    pub halstead: Halstead,
    pub cfg: ControlFlow,
}

impl CodeModule {
    pub fn validate(&self) -> Result<()> {
        let h = &self.halstead;
        if h.big_n1 + h.big_n2 > 0 && h.n1 + h.n2 == 0 {
            return Err(Error::validation(
                format!("module {}", self.id),
                "token occurrences without any distinct operator or operand",
            ));
        }
        if self.cfg.nodes == 0 {
            return Err(Error::validation(
                format!("module {}", self.id),
                "control-flow graph needs at least one node",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodeRisks {
    pub loc: f64,
    pub halstead: f64,
    pub cyclomatic: f64,
}

/// `(N1 + N2) * log2(n1 + n2) / 3000`, zero for a module without tokens.
pub fn halstead_term(h: &Halstead) -> f64 {
    let vocabulary = h.n1 + h.n2;
    if vocabulary == 0 {
        return 0.0;
    }
    (h.big_n1 + h.big_n2) as f64 * (vocabulary as f64).log2() / 3000.0
}

pub fn code_complexity_risks(modules: &[CodeModule]) -> Result<CodeRisks> {
    let mut out = CodeRisks {
        loc: 0.0,
        halstead: 0.0,
        cyclomatic: 0.0,
    };
    for m in modules {
        m.validate()?;
        out.loc += m.loc as f64;
        out.halstead += halstead_term(&m.halstead);
        out.cyclomatic += m.cfg.cyclomatic();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RecallRecord {
    pub recalls: u64,
    pub repairs: u64,
    pub age_years: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackCounts {
    pub vehicle: u64,
    pub terminal: u64,
    pub network: u64,
    pub cloud: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryRecords {
    pub recalls: Vec<RecallRecord>,
    pub half_life_years: f64,
    pub performance_limit_accidents: u64,
    pub attacks: AttackCounts,
    pub attack_severity: [f64; 4],
}

impl HistoryRecords {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_life_years.is_finite() && self.half_life_years > 0.0) {
            return Err(Error::validation(
                "halfLifeYears",
                format!("must be positive, got {}", self.half_life_years),
            ));
        }
        for (d, r) in self.recalls.iter().enumerate() {
            if !(r.age_years.is_finite() && r.age_years >= 0.0) {
                return Err(Error::validation(
                    format!("recalls[{d}].ageYears"),
                    format!("must be non-negative, got {}", r.age_years),
                ));
            }
        }
        check_weights("attackSeverity", &self.attack_severity)
    }
}

/// Forgetting factor for a record `age` years old.
pub fn forgetting_factor(age_years: f64, half_life_years: f64) -> f64 {
    (-age_years / half_life_years).exp2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistoryRisks {
    pub functional: f64,
    pub expected_functional: f64,
    pub security: f64,
}

pub fn history_risks(h: &HistoryRecords) -> Result<HistoryRisks> {
    h.validate()?;
    let functional = h
        .recalls
        .iter()
        .map(|r| r.recalls as f64 + forgetting_factor(r.age_years, h.half_life_years) * r.repairs as f64)
        .sum();
    let a = &h.attacks;
    let security = h
        .attack_severity
        .iter()
        .zip([a.vehicle, a.terminal, a.network, a.cloud])
        .map(|(w, n)| w * n as f64)
        .sum();
    Ok(HistoryRisks {
        functional,
        expected_functional: h.performance_limit_accidents as f64,
        security,
    })
}

/// Damage severity along safety, privacy, financial and operational axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[u8; 4]", into = "[u8; 4]")]
pub struct SeverityVector([u8; 4]);

impl SeverityVector {
    pub fn new(safety: u8, privacy: u8, financial: u8, operational: u8) -> Result<Self> {
        Self::try_from([safety, privacy, financial, operational])
    }

    pub fn components(&self) -> [u8; 4] {
        self.0
    }
}

impl TryFrom<[u8; 4]> for SeverityVector {
    type Error = Error;

    fn try_from(v: [u8; 4]) -> Result<Self> {
        if let Some(k) = v.iter().position(|&d| d > 9) {
            return Err(Error::out_of_range(format!("severity D{}", k + 1), v[k] as f64, 0.0, 9.0));
        }
        Ok(Self(v))
    }
}

impl From<SeverityVector> for [u8; 4] {
    fn from(v: SeverityVector) -> Self {
        v.0
    }
}

/// Overall damage level: the worst of the four axes.
pub fn damage_severity(v: &SeverityVector) -> u8 {
    v.0.iter().copied().max().unwrap_or(0)
}
