//! Closed intervals over non-negative scores.
//!
//! Only the operations that weighted additive aggregation needs are provided:
//! addition, scaling by a non-negative real, and the product of two
//! non-negative intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed range `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Zero-width interval at `v`.
    pub fn point(v: f64) -> Result<Self> {
        Self::new(v, v)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    pub fn scale(self, s: f64) -> Result<Interval> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::NegativeScale(s));
        }
        Ok(Interval {
            lo: s * self.lo,
            hi: s * self.hi,
        })
    }

    /// Product of two intervals whose endpoints are all non-negative.
    pub fn mul_nonneg(self, other: Interval) -> Result<Interval> {
        if self.lo < 0.0 || other.lo < 0.0 {
            return Err(Error::Numeric(format!(
                "interval product needs non-negative operands, got {self} and {other}"
            )));
        }
        Ok(Interval {
            lo: self.lo * other.lo,
            hi: self.hi * other.hi,
        })
    }

    /// Intersect with `[0, 1]`; returns the clamped interval and whether
    /// anything was cut off.
    pub fn clamp_unit(self) -> (Interval, bool) {
        let lo = self.lo.clamp(0.0, 1.0);
        let hi = self.hi.clamp(0.0, 1.0);
        (Interval { lo, hi }, lo != self.lo || hi != self.hi)
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

/// Sum of intervals; empty input yields `[0, 0]`.
pub fn sum<I: IntoIterator<Item = Interval>>(items: I) -> Interval {
    items.into_iter().fold(Interval::ZERO, Interval::add)
}
