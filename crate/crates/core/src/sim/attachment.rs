//! Attachment functions mapping an in-degree to a positive weight.

use crate::{Error, Result};

/// A per-degree attachment weight `A_k`, strictly positive for all `k ≥ 0`.
///
/// `A_k` is identifiable only up to a positive scale factor, so none of the
/// forms is normalized.
#[derive(Debug, Clone, PartialEq)]
pub enum AttachmentFunction {
    /// `max(k, 1)^exponent`.
    PowerLaw { exponent: f64 },
    /// `max(k, 1) / (1 + damping·ln(max(k, 1)))`, the log-damped form used
    /// for citation kernels. Requires `damping ≥ 0`.
    LogDamped { damping: f64 },
    /// `k + offset` with `offset > 0`.
    Linear { offset: f64 },
    /// Explicit per-degree values; degrees beyond the table hold the last
    /// value, so simulated degrees may exceed the observed maximum.
    Tabulated(Vec<f64>),
}

impl AttachmentFunction {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PowerLaw { exponent } => {
                if !exponent.is_finite() {
                    return Err(Error::InvalidParameter(
                        "power-law exponent must be finite".into(),
                    ));
                }
            }
            Self::LogDamped { damping } => {
                if !damping.is_finite() || *damping < 0.0 {
                    return Err(Error::InvalidParameter(
                        "log damping coefficient must be finite and non-negative".into(),
                    ));
                }
            }
            Self::Linear { offset } => {
                if !offset.is_finite() || *offset <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "linear attachment offset must be finite and positive".into(),
                    ));
                }
            }
            Self::Tabulated(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidParameter(
                        "tabulated attachment function must have at least one value".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                    return Err(Error::InvalidParameter(
                        "tabulated attachment values must be finite and positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Evaluate `A_k`.
    #[inline]
    pub fn value(&self, degree: u64) -> f64 {
        match self {
            Self::PowerLaw { exponent } => (degree.max(1) as f64).powf(*exponent),
            Self::LogDamped { damping } => {
                let m = degree.max(1) as f64;
                m / (1.0 + damping * m.ln())
            }
            Self::Linear { offset } => degree as f64 + offset,
            Self::Tabulated(values) => values[(degree as usize).min(values.len() - 1)],
        }
    }

    /// Materialize values for degrees `0..len`.
    pub fn table(&self, len: usize) -> Vec<f64> {
        (0..len as u64).map(|k| self.value(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_floors_degree_at_one() {
        let a = AttachmentFunction::PowerLaw { exponent: 1.0 };
        assert_eq!(a.value(0), 1.0);
        assert_eq!(a.value(1), 1.0);
        assert_eq!(a.value(3), 3.0);
    }

    #[test]
    fn log_damped_values() {
        let a = AttachmentFunction::LogDamped { damping: 0.5 };
        assert_eq!(a.value(0), 1.0);
        assert_eq!(a.value(1), 1.0);
        let k = 10.0f64;
        assert!((a.value(10) - k / (1.0 + 0.5 * k.ln())).abs() < 1e-15);
    }

    #[test]
    fn tabulated_holds_last_value() {
        let a = AttachmentFunction::Tabulated(vec![1.0, 2.0, 5.0]);
        assert_eq!(a.value(2), 5.0);
        assert_eq!(a.value(100), 5.0);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(AttachmentFunction::Linear { offset: 0.0 }.validate().is_err());
        assert!(AttachmentFunction::LogDamped { damping: -0.1 }.validate().is_err());
        assert!(AttachmentFunction::Tabulated(vec![1.0, 0.0]).validate().is_err());
        assert!(AttachmentFunction::Tabulated(vec![]).validate().is_err());
        assert!(AttachmentFunction::PowerLaw { exponent: 0.75 }.validate().is_ok());
    }
}
