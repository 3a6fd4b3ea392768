//! Interval-valued vehicle security risk scoring for connected-vehicle systems.
//!
//! Raw indicators (ECU coupling, communication exposure, code complexity,
//! history) are normalized, weighted with interval fuzzy AHP blended with
//! objective projection-pursuit weights, and folded into a VSR interval that
//! is banded and mapped onto a vehicle state.

pub mod assessment;
pub mod band;
pub mod clustering;
pub mod codemetrics;
pub mod config;
pub mod description;
pub mod error;
pub mod evaluation;
pub mod indicator;
pub mod indicators;
pub mod interval;
pub mod pipeline;
pub mod projection;
pub mod tree;
pub mod weighting;

pub use assessment::{AssessmentReport, ClassificationRule, FusedWeights, VehicleState};
pub use config::AssessmentConfig;
pub use description::SystemDescription;
pub use band::{BandLabel, BandTable, RiskBand};
pub use error::{Error, Issue, Result};
pub use indicator::{FirstOrder, IndicatorId, SubIndicator};
pub use interval::Interval;
pub use tree::{IndicatorTree, Orientation};
