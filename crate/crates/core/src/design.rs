//! Two-stage SMART designs, their embedded DTRs, consistency indicators,
//! and inverse-probability-of-treatment weights.
//!
//! Designs are labeled by which participants are re-randomized after the
//! first stage:
//!
//! * `I`   — everyone is re-randomized (8 embedded DTRs)
//! * `II`  — only non-responders are re-randomized (4 embedded DTRs)
//! * `III` — only non-responders to the first-stage treatment coded `+1`
//!   are re-randomized (3 embedded DTRs)
//!
//! An embedded DTR is coded as a triple `(a1, a2R, a2NR)`: the recommended
//! first-stage treatment, the second-stage treatment recommended for
//! responders, and the second-stage treatment recommended for
//! non-responders, each in `{-1, 0, 1}` with `0` meaning "not re-randomized".

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which subsets of participants are re-randomized after stage one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DesignKind {
    /// All participants re-randomized.
    I,
    /// Only non-responders re-randomized.
    II,
    /// Only non-responders to first-stage treatment `+1` re-randomized.
    III,
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignKind::I => write!(f, "I"),
            DesignKind::II => write!(f, "II"),
            DesignKind::III => write!(f, "III"),
        }
    }
}

impl FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" | "1" => Ok(DesignKind::I),
            "II" | "ii" | "2" => Ok(DesignKind::II),
            "III" | "iii" | "3" => Ok(DesignKind::III),
            other => Err(Error::invalid(format!(
                "unknown design '{other}' (expected I, II, or III)"
            ))),
        }
    }
}

/// A two-stage SMART design with its randomization probabilities.
///
/// `p1` is the probability of assignment to first-stage treatment `+1`;
/// `p2` is the probability of assignment to second-stage treatment `+1`
/// among the re-randomized. Both must lie strictly in (0, 1) (positivity).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmartDesign {
    pub kind: DesignKind,
    #[serde(default = "half")]
    pub p1: f64,
    #[serde(default = "half")]
    pub p2: f64,
}

fn half() -> f64 {
    0.5
}

impl SmartDesign {
    pub fn new(kind: DesignKind, p1: f64, p2: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::invalid(format!("p1 = {p1} must lie strictly in (0, 1)")));
        }
        if !(p2 > 0.0 && p2 < 1.0) {
            return Err(Error::invalid(format!("p2 = {p2} must lie strictly in (0, 1)")));
        }
        Ok(SmartDesign { kind, p1, p2 })
    }

    /// The design with both randomizations at probability 0.5.
    pub fn balanced(kind: DesignKind) -> Self {
        SmartDesign { kind, p1: 0.5, p2: 0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.kind, self.p1, self.p2).map(|_| ())
    }

    /// Whether a participant with the given first-stage arm and response
    /// status is re-randomized under this design.
    pub fn rerandomized(&self, a1: i8, responder: bool) -> bool {
        match self.kind {
            DesignKind::I => true,
            DesignKind::II => !responder,
            DesignKind::III => a1 == 1 && !responder,
        }
    }

    /// The embedded DTRs in canonical order: lexicographically descending
    /// on `(a1, a2R, a2NR)`. The ordering is fixed so contrast indices are
    /// stable across runs.
    pub fn dtrs(&self) -> Vec<EmbeddedDtr> {
        match self.kind {
            DesignKind::I => {
                let mut out = Vec::with_capacity(8);
                for a1 in [1i8, -1] {
                    for a2r in [1i8, -1] {
                        for a2nr in [1i8, -1] {
                            out.push(EmbeddedDtr { a1, a2r, a2nr });
                        }
                    }
                }
                out
            }
            DesignKind::II => vec![
                EmbeddedDtr { a1: 1, a2r: 0, a2nr: 1 },
                EmbeddedDtr { a1: 1, a2r: 0, a2nr: -1 },
                EmbeddedDtr { a1: -1, a2r: 0, a2nr: 1 },
                EmbeddedDtr { a1: -1, a2r: 0, a2nr: -1 },
            ],
            DesignKind::III => vec![
                EmbeddedDtr { a1: 1, a2r: 0, a2nr: 1 },
                EmbeddedDtr { a1: 1, a2r: 0, a2nr: -1 },
                EmbeddedDtr { a1: -1, a2r: 0, a2nr: 0 },
            ],
        }
    }

    /// Whether `d` is one of this design's embedded DTRs.
    pub fn is_embedded(&self, d: EmbeddedDtr) -> bool {
        if d.a1 != 1 && d.a1 != -1 {
            return false;
        }
        match self.kind {
            DesignKind::I => matches!(d.a2r, 1 | -1) && matches!(d.a2nr, 1 | -1),
            DesignKind::II => d.a2r == 0 && matches!(d.a2nr, 1 | -1),
            DesignKind::III => {
                d.a2r == 0
                    && if d.a1 == 1 { matches!(d.a2nr, 1 | -1) } else { d.a2nr == 0 }
            }
        }
    }

    /// Treatment-sequence cells that occur with positive probability under
    /// this design, as `(a1, responder, a2)` with `responder = None` when
    /// the design treats both response strata as the same sequence (the
    /// `a1 = -1` arm of design III, where nobody is re-randomized).
    pub fn sequences(&self) -> Vec<(i8, Option<bool>, i8)> {
        match self.kind {
            DesignKind::I => {
                let mut out = Vec::with_capacity(8);
                for a1 in [1i8, -1] {
                    for r in [true, false] {
                        for a2 in [1i8, -1] {
                            out.push((a1, Some(r), a2));
                        }
                    }
                }
                out
            }
            DesignKind::II => vec![
                (1, Some(true), 0),
                (1, Some(false), 1),
                (1, Some(false), -1),
                (-1, Some(true), 0),
                (-1, Some(false), 1),
                (-1, Some(false), -1),
            ],
            DesignKind::III => vec![
                (1, Some(true), 0),
                (1, Some(false), 1),
                (1, Some(false), -1),
                (-1, None, 0),
            ],
        }
    }

    pub fn response_rate(&self, a1: i8, r_plus: f64, r_minus: f64) -> f64 {
        if a1 == 1 {
            r_plus
        } else {
            r_minus
        }
    }
}

impl fmt::Display for SmartDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// An embedded DTR coded `(a1, a2R, a2NR)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddedDtr {
    pub a1: i8,
    pub a2r: i8,
    pub a2nr: i8,
}

impl EmbeddedDtr {
    pub fn new(a1: i8, a2r: i8, a2nr: i8) -> Result<Self> {
        if a1 != 1 && a1 != -1 {
            return Err(Error::invalid(format!("a1 = {a1} must be -1 or 1")));
        }
        for (name, v) in [("a2R", a2r), ("a2NR", a2nr)] {
            if !matches!(v, -1 | 0 | 1) {
                return Err(Error::invalid(format!("{name} = {v} must be in {{-1, 0, 1}}")));
            }
        }
        Ok(EmbeddedDtr { a1, a2r, a2nr })
    }
}

impl fmt::Display for EmbeddedDtr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a1, self.a2r, self.a2nr)
    }
}

impl FromStr for EmbeddedDtr {
    type Err = Error;

    /// Parses `"1,0,-1"` (optionally parenthesized / spaced).
    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = cleaned.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("cannot parse DTR from '{s}'")));
        }
        let vals: Result<Vec<i8>> = parts
            .iter()
            .map(|p| {
                p.parse::<i8>()
                    .map_err(|_| Error::invalid(format!("cannot parse DTR component '{p}'")))
            })
            .collect();
        let v = vals?;
        EmbeddedDtr::new(v[0], v[1], v[2])
    }
}

/// One participant's observed data: first-stage treatment, response status,
/// second-stage treatment (0 when not re-randomized), and the complete
/// repeated-measures outcome vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord {
    pub a1: i8,
    pub r: bool,
    pub a2: i8,
    pub y: Vec<f64>,
}

impl SubjectRecord {
    pub fn new(a1: i8, r: bool, a2: i8, y: Vec<f64>) -> Self {
        SubjectRecord { a1, r, a2, y }
    }

    /// Checks the record against the design's treatment-path constraints:
    /// `a2 = 0` exactly when the subject is not re-randomized, and the
    /// outcome vector is complete.
    pub fn validate_for(&self, design: &SmartDesign) -> Result<()> {
        if self.a1 != 1 && self.a1 != -1 {
            return Err(Error::invalid(format!("record a1 = {} must be -1 or 1", self.a1)));
        }
        let rerand = design.rerandomized(self.a1, self.r);
        if rerand && !matches!(self.a2, 1 | -1) {
            return Err(Error::invalid(format!(
                "re-randomized subject must have a2 in {{-1, 1}}, got {}",
                self.a2
            )));
        }
        if !rerand && self.a2 != 0 {
            return Err(Error::invalid(format!(
                "subject not re-randomized under design {} must have a2 = 0, got {}",
                design.kind, self.a2
            )));
        }
        if self.y.is_empty() {
            return Err(Error::invalid("outcome vector is empty".to_string()));
        }
        if self.y.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("outcome vector contains non-finite values".to_string()));
        }
        Ok(())
    }
}

/// Whether the record's observed treatment path is consistent with DTR `d`.
///
/// Implements the design-specific indicator table:
///
/// * I:   `1{A1=a1} (1{A2=a2R} R + 1{A2=a2NR}(1-R))`
/// * II:  `1{A1=a1} (R + 1{A2=a2NR}(1-R))`
/// * III: `1{A1=a1} (1{a1=-1} + 1{a1=1}(R + 1{A2=a2NR}(1-R)))`
pub fn consistency_indicator(
    design: &SmartDesign,
    d: EmbeddedDtr,
    rec: &SubjectRecord,
) -> Result<bool> {
    if !design.is_embedded(d) {
        return Err(Error::DtrNotEmbedded { dtr: d.to_string(), design: design.kind.to_string() });
    }
    if rec.a1 != d.a1 {
        return Ok(false);
    }
    let ok = match design.kind {
        DesignKind::I => {
            if rec.r {
                rec.a2 == d.a2r
            } else {
                rec.a2 == d.a2nr
            }
        }
        DesignKind::II => rec.r || rec.a2 == d.a2nr,
        DesignKind::III => {
            if d.a1 == -1 {
                true
            } else {
                rec.r || rec.a2 == d.a2nr
            }
        }
    };
    Ok(ok)
}

/// The inverse-probability-of-treatment weight
/// `I^{(d)} / (P(A1 = a1) * P(A2 = a2 | A1, R))`.
///
/// The second-stage factor is 1 for subjects who are not re-randomized.
/// Returns 0 for records inconsistent with `d`.
pub fn weight(design: &SmartDesign, d: EmbeddedDtr, rec: &SubjectRecord) -> Result<f64> {
    if !consistency_indicator(design, d, rec)? {
        return Ok(0.0);
    }
    let p_first = if rec.a1 == 1 { design.p1 } else { 1.0 - design.p1 };
    let p_second = if design.rerandomized(rec.a1, rec.r) {
        if rec.a2 == 1 {
            design.p2
        } else {
            1.0 - design.p2
        }
    } else {
        1.0
    };
    Ok(1.0 / (p_first * p_second))
}
