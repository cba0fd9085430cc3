//! Domain types shared by every module.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on `Σp = 1` accepted by [`ProbVector::new`].
pub const PROB_SUM_TOLERANCE: f64 = 1e-9;

/// A gain observed by the agent. True gains lie in `[0, 1]`; noisy gains
/// (after Laplace perturbation) are unbounded.
pub type Gain = f64;

/// Zero-based arm index. Arm `i` here is arm `i + 1` in one-based notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ArmIndex(pub usize);

impl ArmIndex {
    /// Checks `index < arms`.
    pub fn checked(index: usize, arms: usize) -> Result<Self> {
        if index < arms {
            Ok(ArmIndex(index))
        } else {
            Err(Error::OutOfBounds {
                what: "arm",
                index,
                lo: 0,
                hi: arms.saturating_sub(1),
            })
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for ArmIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A probability distribution over `K` arms.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates that every entry is finite and non-negative and that the
    /// entries sum to one within [`PROB_SUM_TOLERANCE`].
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::invalid("p", "empty probability vector"));
        }
        if let Some((i, x)) = p.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(Error::invalid("p", format!("entry {i} is {x}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::invalid("p", format!("entries sum to {sum}")));
        }
        Ok(ProbVector(p))
    }

    pub(crate) fn from_normalized(p: Vec<f64>) -> Self {
        debug_assert!(ProbVector::new(p.clone()).is_ok(), "{p:?}");
        ProbVector(p)
    }

    pub fn uniform(arms: usize) -> Self {
        ProbVector(vec![1.0 / arms as f64; arms])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, arm: ArmIndex) -> f64 {
        self.0[arm.0]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// An `(ε, δ)` privacy loss. Smaller is more private; budgets are only
/// partially ordered (componentwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || epsilon.is_nan() {
            return Err(Error::invalid("epsilon", format!("{epsilon} is not >= 0")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::invalid("delta", format!("{delta} is not in [0, 1)")));
        }
        Ok(PrivacyBudget { epsilon, delta })
    }

    /// Pure ε-differential privacy (δ = 0).
    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// True when both components are no larger than `other`'s.
    pub fn is_at_least_as_private_as(&self, other: &PrivacyBudget) -> bool {
        self.epsilon <= other.epsilon && self.delta <= other.delta
    }
}

impl PartialOrd for PrivacyBudget {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (
            self.epsilon.partial_cmp(&other.epsilon)?,
            self.delta.partial_cmp(&other.delta)?,
        ) {
            (a, b) if a == b => Some(a),
            (Ordering::Equal, b) => Some(b),
            (a, Ordering::Equal) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for PrivacyBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ε = {}, δ = {})", self.epsilon, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prob_vector_rejects_bad_input() {
        assert!(ProbVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVector::new(vec![1.0 + 1e-10, -1e-10]).is_err());
        assert!(ProbVector::new(vec![0.5, 0.5 + 2e-9]).is_err());
        assert!(ProbVector::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(ProbVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
    }

    #[test]
    fn arm_index_bounds() {
        assert_eq!(ArmIndex::checked(3, 4), Ok(ArmIndex(3)));
        assert!(matches!(
            ArmIndex::checked(4, 4),
            Err(Error::OutOfBounds { index: 4, hi: 3, .. })
        ));
    }

    #[test]
    fn budget_validation_and_order() {
        assert!(PrivacyBudget::new(-0.1, 0.0).is_err());
        assert!(PrivacyBudget::new(1.0, 1.0).is_err());
        assert!(PrivacyBudget::new(1.0, -1e-3).is_err());
        assert!(PrivacyBudget::new(f64::NAN, 0.0).is_err());

        let a = PrivacyBudget::new(1.0, 1e-6).unwrap();
        let b = PrivacyBudget::new(2.0, 1e-6).unwrap();
        let c = PrivacyBudget::new(0.5, 1e-3).unwrap();
        assert!(a < b);
        assert!(a.is_at_least_as_private_as(&b));
        assert_eq!(a.partial_cmp(&c), None);
        assert_eq!(a.partial_cmp(&a), Some(Ordering::Equal));
    }
}
