//! Identifiers for the two-level indicator hierarchy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// First-order risk index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FirstOrder {
    /// ECU coupling risk.
    Ecr,
    /// Vehicle communication risk.
    Vcr,
    /// Vehicle code complexity risk.
    Vccr,
    /// Vehicle historical security-issue risk.
    Vhir,
}

impl FirstOrder {
    pub const ALL: [FirstOrder; 4] = [
        FirstOrder::Ecr,
        FirstOrder::Vcr,
        FirstOrder::Vccr,
        FirstOrder::Vhir,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FirstOrder::Ecr => "ECR",
            FirstOrder::Vcr => "VCR",
            FirstOrder::Vccr => "VCCR",
            FirstOrder::Vhir => "VHIR",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FirstOrder::Ecr => "ECU coupling risk",
            FirstOrder::Vcr => "Vehicle communication risk",
            FirstOrder::Vccr => "Vehicle code complexity risk",
            FirstOrder::Vhir => "Vehicle history security issue risk",
        }
    }

    pub fn position(self) -> usize {
        self as usize
    }

    /// Sub-indicators of this index, in canonical order.
    pub fn subs(self) -> &'static [SubIndicator] {
        use SubIndicator::*;
        match self {
            FirstOrder::Ecr => &[E1, E2, E3, E4, E5, E6, E7, E8],
            FirstOrder::Vcr => &[V1, V2, V3, V4],
            FirstOrder::Vccr => &[C1, C2, C3],
            FirstOrder::Vhir => &[H1, H2, H3],
        }
    }
}

/// Second-order indicator. Each variant belongs to exactly one [`FirstOrder`]
/// family, so an id can never point at a sub-indicator of the wrong index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubIndicator {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
    V1,
    V2,
    V3,
    V4,
    C1,
    C2,
    C3,
    H1,
    H2,
    H3,
}

impl SubIndicator {
    pub const ALL: [SubIndicator; 18] = {
        use SubIndicator::*;
        [
            E1, E2, E3, E4, E5, E6, E7, E8, V1, V2, V3, V4, C1, C2, C3, H1, H2, H3,
        ]
    };

    pub fn parent(self) -> FirstOrder {
        use SubIndicator::*;
        match self {
            E1 | E2 | E3 | E4 | E5 | E6 | E7 | E8 => FirstOrder::Ecr,
            V1 | V2 | V3 | V4 => FirstOrder::Vcr,
            C1 | C2 | C3 => FirstOrder::Vccr,
            H1 | H2 | H3 => FirstOrder::Vhir,
        }
    }

    /// Column index in an 18-wide indicator vector.
    pub fn position(self) -> usize {
        self as usize
    }

    /// Position among the siblings of the same index.
    pub fn rank_in_group(self) -> usize {
        self.parent()
            .subs()
            .iter()
            .position(|s| *s == self)
            .expect("sub-indicator listed under its parent")
    }

    pub fn code(self) -> &'static str {
        use SubIndicator::*;
        match self {
            E1 => "E1",
            E2 => "E2",
            E3 => "E3",
            E4 => "E4",
            E5 => "E5",
            E6 => "E6",
            E7 => "E7",
            E8 => "E8",
            V1 => "V1",
            V2 => "V2",
            V3 => "V3",
            V4 => "V4",
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
            H1 => "H1",
            H2 => "H2",
            H3 => "H3",
        }
    }

    pub fn acronym(self) -> &'static str {
        use SubIndicator::*;
        match self {
            E1 => "EMCR",
            E2 => "TCCR",
            E3 => "EPCR",
            E4 => "ESCR",
            E5 => "MRCR",
            E6 => "ACCR",
            E7 => "LKCR",
            E8 => "AECR",
            V1 => "IVCR",
            V2 => "U2VCR",
            V3 => "V2VCR",
            V4 => "V2ICR",
            C1 => "LOCM",
            C2 => "HCM",
            C3 => "CCM",
            H1 => "HPSF",
            H2 => "HPESF",
            H3 => "HPIS",
        }
    }

    pub fn name(self) -> &'static str {
        use SubIndicator::*;
        match self {
            E1 => "Engine management system coupling",
            E2 => "Transmission control unit coupling",
            E3 => "Electric power steering coupling",
            E4 => "Body stability control coupling",
            E5 => "Active suspension system coupling",
            E6 => "Adaptive cruise control coupling",
            E7 => "Lane keeping coupling",
            E8 => "Automatic emergency braking coupling",
            V1 => "In-vehicle communication",
            V2 => "User-to-vehicle communication",
            V3 => "Vehicle-to-vehicle communication",
            V4 => "Vehicle-to-infrastructure communication",
            C1 => "Lines of source code",
            C2 => "Operator and operand complexity",
            C3 => "Cyclomatic complexity",
            H1 => "Functional safety history",
            H2 => "Expected functional safety history",
            H3 => "Information security history",
        }
    }
}

/// Either a first-order index or one of its sub-indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndicatorId {
    Index(FirstOrder),
    Sub(SubIndicator),
}

impl IndicatorId {
    pub fn all() -> impl Iterator<Item = IndicatorId> {
        FirstOrder::ALL
            .into_iter()
            .map(IndicatorId::Index)
            .chain(SubIndicator::ALL.into_iter().map(IndicatorId::Sub))
    }

    pub fn code(self) -> &'static str {
        match self {
            IndicatorId::Index(f) => f.code(),
            IndicatorId::Sub(s) => s.code(),
        }
    }

    pub fn index(self) -> FirstOrder {
        match self {
            IndicatorId::Index(f) => f,
            IndicatorId::Sub(s) => s.parent(),
        }
    }

    pub fn sub(self) -> Option<SubIndicator> {
        match self {
            IndicatorId::Index(_) => None,
            IndicatorId::Sub(s) => Some(s),
        }
    }
}

impl From<FirstOrder> for IndicatorId {
    fn from(f: FirstOrder) -> Self {
        IndicatorId::Index(f)
    }
}

impl From<SubIndicator> for IndicatorId {
    fn from(s: SubIndicator) -> Self {
        IndicatorId::Sub(s)
    }
}

impl fmt::Display for FirstOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl fmt::Display for SubIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl fmt::Display for IndicatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

fn unknown(s: &str) -> Error {
    Error::Parse {
        format: "indicator id",
        message: format!("unknown indicator `{s}`"),
    }
}

impl FromStr for FirstOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        FirstOrder::ALL
            .into_iter()
            .find(|f| f.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| unknown(s))
    }
}

/// Accepts both the short code (`E1`) and the acronym (`EMCR`). `HPEFS` is
/// accepted as an alias for `HPESF`.
impl FromStr for SubIndicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.eq_ignore_ascii_case("HPEFS") {
            return Ok(SubIndicator::H2);
        }
        SubIndicator::ALL
            .into_iter()
            .find(|x| x.code().eq_ignore_ascii_case(s) || x.acronym().eq_ignore_ascii_case(s))
            .ok_or_else(|| unknown(s))
    }
}

impl FromStr for IndicatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.parse::<FirstOrder>()
            .map(IndicatorId::Index)
            .or_else(|_| s.parse::<SubIndicator>().map(IndicatorId::Sub))
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.code())
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(FirstOrder);
string_serde!(SubIndicator);
string_serde!(IndicatorId);
