//! Report-friendly numbers: a decimal value paired with an exact rational
//! string whenever the quantity was computed in exact arithmetic.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// A real number as serialised in reports. `exact` is present only for
/// values that were computed exactly (vertex-count averages and the like),
/// never reconstructed from floating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReal {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<String>,
}

impl ExactReal {
    pub fn from_rational(r: Rational64) -> Self {
        ExactReal {
            value: *r.numer() as f64 / *r.denom() as f64,
            exact: Some(rational_string(r)),
        }
    }

    pub fn approx(value: f64) -> Self {
        ExactReal { value, exact: None }
    }
}

/// `"18/5"`, or just `"18"` for integers.
pub fn rational_string(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rendering() {
        assert_eq!(rational_string(Rational64::new(18, 5)), "18/5");
        assert_eq!(rational_string(Rational64::new(36, 2)), "18");
        assert_eq!(rational_string(Rational64::new(-7, 3)), "-7/3");
    }

    #[test]
    fn exact_real_round_trips_through_json() {
        let x = ExactReal::from_rational(Rational64::new(107, 7));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<ExactReal>(&json).unwrap(), x);
        let y = ExactReal::approx(1.5);
        let json = serde_json::to_string(&y).unwrap();
        assert!(!json.contains("exact"));
        assert_eq!(serde_json::from_str::<ExactReal>(&json).unwrap(), y);
    }
}
