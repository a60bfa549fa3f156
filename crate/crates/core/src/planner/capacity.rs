//! Payload and deflection capacity data.
//!
//! Payload entries are keyed by object diameter, approach direction and
//! whether the finger carries the hinge chain. An entry may be `null` when the
//! configuration could not be measured (unhinged fingers twist on 20 mm
//! objects). Deflection curves exist only for the horizontal approach and map
//! a fraction of that configuration's maximum payload to a deflection in mm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PlanError;
use crate::perception::Approach;

pub const DEFAULT_CAPACITY_JSON: &str = include_str!("../../data/capacity.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEntry {
    pub diameter_mm: f64,
    pub approach: Approach,
    pub hinged: bool,
    pub max_payload_kg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeflectionCurve {
    pub hinged: bool,
    pub diameter_mm: f64,
    /// (payload fraction, deflection mm), increasing in both.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapacityFile {
    #[serde(default)]
    label: String,
    reference_diameter_mm: f64,
    entries: Vec<CapacityEntry>,
    #[serde(default)]
    deflection_curves: Vec<DeflectionCurve>,
}

/// (approach, hinged) -> sorted (diameter, payload)
type Series = BTreeMap<(ApproachKey, bool), Vec<(f64, Option<f64>)>>;

/// Immutable, validated capacity table.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityModel {
    label: String,
    reference_diameter_mm: f64,
    series: Series,
    curves: Vec<DeflectionCurve>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum ApproachKey {
    Horizontal,
    Vertical,
}

impl From<Approach> for ApproachKey {
    fn from(a: Approach) -> Self {
        match a {
            Approach::Horizontal => Self::Horizontal,
            Approach::Vertical => Self::Vertical,
        }
    }
}

fn violation(msg: impl Into<String>) -> PlanError {
    PlanError::InvariantViolation(msg.into())
}

/// Piecewise-linear interpolation on sorted `(x, y)` samples, clamped at the
/// ends.
fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = points.partition_point(|p| p.0 <= x);
    let (x0, y0) = points[i - 1];
    let (x1, y1) = points[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Parse and validate a capacity table.
pub fn load_capacity_model(bytes: &[u8]) -> Result<CapacityModel, PlanError> {
    let file: CapacityFile = serde_json::from_slice(bytes).map_err(|e| PlanError::Parse(e.to_string()))?;
    CapacityModel::from_parts(file)
}

impl Default for CapacityModel {
    fn default() -> Self {
        load_capacity_model(DEFAULT_CAPACITY_JSON.as_bytes()).expect("bundled capacity table is valid")
    }
}

impl CapacityModel {
    fn from_parts(file: CapacityFile) -> Result<Self, PlanError> {
        if file.entries.is_empty() {
            return Err(violation("capacity table has no entries"));
        }
        if !(file.reference_diameter_mm > 0.0) {
            return Err(violation("reference diameter must be positive"));
        }
        let mut series: Series = BTreeMap::new();
        for e in &file.entries {
            if !(e.diameter_mm > 0.0) || !e.diameter_mm.is_finite() {
                return Err(violation(format!("bad diameter {}", e.diameter_mm)));
            }
            if let Some(p) = e.max_payload_kg {
                if !(p >= 0.0) || !p.is_finite() {
                    return Err(violation(format!("bad payload {p} at {} mm", e.diameter_mm)));
                }
            }
            let row = series.entry((e.approach.into(), e.hinged)).or_default();
            if row.iter().any(|r| r.0 == e.diameter_mm) {
                return Err(violation(format!("duplicate entry at {} mm", e.diameter_mm)));
            }
            row.push((e.diameter_mm, e.max_payload_kg));
        }
        for row in series.values_mut() {
            row.sort_by(|a, b| a.0.total_cmp(&b.0));
        }

        let model = Self {
            label: file.label,
            reference_diameter_mm: file.reference_diameter_mm,
            series,
            curves: file.deflection_curves,
        };
        model.check_hinge_dominance()?;
        model.check_curves()?;
        Ok(model)
    }

    fn check_hinge_dominance(&self) -> Result<(), PlanError> {
        for approach in [ApproachKey::Horizontal, ApproachKey::Vertical] {
            let (Some(h), Some(u)) = (self.series.get(&(approach, true)), self.series.get(&(approach, false))) else {
                continue;
            };
            for &(d, pu) in u {
                let ph = h.iter().find(|r| r.0 == d).and_then(|r| r.1);
                if let (Some(ph), Some(pu)) = (ph, pu) {
                    if ph < pu {
                        return Err(violation(format!(
                            "hinged payload {ph} kg below unhinged {pu} kg at {d} mm ({approach:?})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_curves(&self) -> Result<(), PlanError> {
        for c in &self.curves {
            if c.points.len() < 2 {
                return Err(violation("deflection curve needs at least two samples"));
            }
            if c.points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite() || p.0 < 0.0 || p.1 < 0.0) {
                return Err(violation("deflection samples must be finite and non-negative"));
            }
            if !c.points.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(violation(format!("deflection curve (hinged = {}) is not strictly increasing", c.hinged)));
            }
            self.curve_payload(c)?;
        }
        if self.curves.iter().filter(|c| c.hinged).count() > 1 || self.curves.iter().filter(|c| !c.hinged).count() > 1 {
            return Err(violation("at most one deflection curve per hinge configuration"));
        }
        let (Some(h), Some(u)) = (self.deflection_curve(true), self.deflection_curve(false)) else {
            return Ok(());
        };
        let h_abs = self.absolute_curve(h)?;
        let u_abs = self.absolute_curve(u)?;
        let overlap = h_abs.last().unwrap().0.min(u_abs.last().unwrap().0);
        let samples = h_abs.iter().chain(u_abs.iter()).map(|p| p.0).filter(|&kg| kg <= overlap);
        for kg in samples {
            let (dh, du) = (interpolate(&h_abs, kg), interpolate(&u_abs, kg));
            if dh >= du {
                return Err(violation(format!("hinged deflection {dh} mm not below unhinged {du} mm at {kg} kg")));
            }
        }
        Ok(())
    }

    /// Maximum payload the curve's fractions refer to.
    fn curve_payload(&self, c: &DeflectionCurve) -> Result<f64, PlanError> {
        self.series
            .get(&(ApproachKey::Horizontal, c.hinged))
            .and_then(|row| row.iter().find(|r| r.0 == c.diameter_mm))
            .and_then(|r| r.1)
            .ok_or_else(|| {
                violation(format!(
                    "deflection curve (hinged = {}) has no horizontal payload entry at {} mm",
                    c.hinged, c.diameter_mm
                ))
            })
    }

    fn absolute_curve(&self, c: &DeflectionCurve) -> Result<Vec<(f64, f64)>, PlanError> {
        let p = self.curve_payload(c)?;
        Ok(c.points.iter().map(|&(f, d)| (f * p, d)).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn reference_diameter_mm(&self) -> f64 {
        self.reference_diameter_mm
    }

    pub fn deflection_curve(&self, hinged: bool) -> Option<&DeflectionCurve> {
        self.curves.iter().find(|c| c.hinged == hinged)
    }

    /// Deflection curve with payload expressed in kg.
    pub fn deflection_curve_kg(&self, hinged: bool) -> Option<Vec<(f64, f64)>> {
        self.deflection_curve(hinged).and_then(|c| self.absolute_curve(c).ok())
    }

    /// Measured entries for one configuration, sorted by diameter.
    pub fn entries(&self, approach: Approach, hinged: bool) -> &[(f64, Option<f64>)] {
        self.series.get(&(approach.into(), hinged)).map_or(&[], Vec::as_slice)
    }

    /// Maximum payload for a diameter: nearest entry outside the measured
    /// range, linear interpolation inside it. Touching an unmeasured entry
    /// yields `MissingCapacityData`.
    pub fn payload(&self, diameter_mm: f64, approach: Approach, hinged: bool) -> Result<f64, PlanError> {
        let missing = || PlanError::MissingCapacityData { diameter_mm, approach, hinged };
        let row = self.series.get(&(approach.into(), hinged)).ok_or_else(missing)?;
        let first = row.first().ok_or_else(missing)?;
        let last = row.last().ok_or_else(missing)?;
        if diameter_mm <= first.0 {
            return first.1.ok_or_else(missing);
        }
        if diameter_mm >= last.0 {
            return last.1.ok_or_else(missing);
        }
        let i = row.partition_point(|r| r.0 <= diameter_mm);
        let (d0, p0) = row[i - 1];
        let (d1, p1) = row[i];
        if d0 == diameter_mm {
            return p0.ok_or_else(missing);
        }
        let (p0, p1) = (p0.ok_or_else(missing)?, p1.ok_or_else(missing)?);
        Ok(p0 + (p1 - p0) * (diameter_mm - d0) / (d1 - d0))
    }

    /// Largest measured payload of a configuration as (diameter, kg).
    pub fn max_payload(&self, approach: Approach, hinged: bool) -> Option<(f64, f64)> {
        self.entries(approach, hinged).iter().filter_map(|&(d, p)| p.map(|p| (d, p))).max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Hinged over unhinged payload at the reference diameter.
    pub fn hinged_gain(&self, approach: Approach) -> Result<f64, PlanError> {
        let d = self.reference_diameter_mm;
        Ok(self.payload(d, approach, true)? / self.payload(d, approach, false)?)
    }

    /// Predicted horizontal-approach deflection for a payload in kg. Beyond
    /// the curve's last sample the last deflection is returned.
    pub fn predict_deflection(&self, hinged: bool, mass_kg: f64) -> Result<f64, PlanError> {
        let curve = self.deflection_curve(hinged).ok_or(PlanError::MissingCapacityData {
            diameter_mm: self.reference_diameter_mm,
            approach: Approach::Horizontal,
            hinged,
        })?;
        let abs = self.absolute_curve(curve)?;
        Ok(interpolate(&abs, mass_kg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> Result<CapacityModel, PlanError> {
        load_capacity_model(text.as_bytes())
    }

    #[test]
    fn shipped_table_loads() {
        let m = CapacityModel::default();
        assert!(m.label().contains("illustrative"));
        assert_eq!(m.reference_diameter_mm(), 80.0);
    }

    #[test]
    fn unhinged_small_diameter_is_missing() {
        let m = CapacityModel::default();
        assert!(matches!(m.payload(20.0, Approach::Horizontal, false), Err(PlanError::MissingCapacityData { .. })));
        assert!(m.payload(20.0, Approach::Horizontal, true).is_ok());
        // bracketed by the missing entry
        assert!(m.payload(30.0, Approach::Vertical, false).is_err());
    }

    #[test]
    fn interpolates_between_diameters() {
        let m = CapacityModel::default();
        let p = m.payload(95.0, Approach::Vertical, true).unwrap();
        assert!((p - 0.5 * (1.32 + 0.95)).abs() < 1e-12);
        assert_eq!(m.payload(200.0, Approach::Vertical, true).unwrap(), 0.55);
    }

    #[test]
    fn empty_table_is_rejected() {
        let err = table(r#"{"reference_diameter_mm": 80, "entries": []}"#).unwrap_err();
        assert!(matches!(err, PlanError::InvariantViolation(_)));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(table("{ entries"), Err(PlanError::Parse(_))));
    }

    #[test]
    fn hinged_below_unhinged_is_rejected() {
        let text = r#"{"reference_diameter_mm": 80, "entries": [
            {"diameter_mm": 80, "approach": "vertical", "hinged": true, "max_payload_kg": 0.5},
            {"diameter_mm": 80, "approach": "vertical", "hinged": false, "max_payload_kg": 0.9}]}"#;
        assert!(matches!(table(text), Err(PlanError::InvariantViolation(_))));
    }

    #[test]
    fn crossing_deflection_curves_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_CAPACITY_JSON).unwrap();
        v["deflection_curves"][0]["points"] = serde_json::json!([[0.0, 0.5], [0.2, 30.0], [1.0, 60.0]]);
        let err = table(&v.to_string()).unwrap_err();
        assert!(matches!(err, PlanError::InvariantViolation(m) if m.contains("not below")));
    }

    #[test]
    fn non_monotone_curve_is_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_CAPACITY_JSON).unwrap();
        v["deflection_curves"][1]["points"] = serde_json::json!([[0.0, 2.0], [0.5, 1.0], [1.0, 48.0]]);
        assert!(matches!(table(&v.to_string()), Err(PlanError::InvariantViolation(_))));
    }

    #[test]
    fn deflection_prediction() {
        let m = CapacityModel::default();
        assert_eq!(m.predict_deflection(true, 0.0).unwrap(), 0.5);
        let full = m.payload(80.0, Approach::Horizontal, false).unwrap();
        assert!((m.predict_deflection(false, full).unwrap() - 48.0).abs() < 1e-12);
        assert!(m.predict_deflection(false, 10.0).unwrap() == 48.0);
    }
}
