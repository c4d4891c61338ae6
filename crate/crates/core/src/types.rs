//! Domain types shared by every module: decision and objective vectors,
//! evaluated individuals, box bounds and the Pareto dominance relation.
//!
//! All objectives are minimized.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::rng::RngHandle;

/// A point of the search space.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector(Vec<f64>);

impl DecisionVector {
    /// Builds a decision vector, rejecting non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for DecisionVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for DecisionVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A point of the objective space.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// An evaluated solution: the decision vector with its cached objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub decision: DecisionVector,
    pub objectives: ObjectiveVector,
}

impl Individual {
    pub fn new(decision: DecisionVector, objectives: ObjectiveVector) -> Self {
        Self {
            decision,
            objectives,
        }
    }
}

/// Axis-aligned box constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (index, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBounds {
                    index,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lo, hi]` for all `n` variables.
    pub fn uniform(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo; n], alloc::vec![hi; n])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.len()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Errors with the first violating coordinate, if any.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: x.len(),
            });
        }
        for (index, &value) in x.iter().enumerate() {
            let (lower, upper) = (self.lower[index], self.upper[index]);
            if !(lower <= value && value <= upper) {
                return Err(Error::OutOfBounds {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }

    /// Projects every coordinate onto its interval in place.
    pub fn clamp_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.len());
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(lo, hi);
        }
    }

    pub fn sample(&self, rng: &mut RngHandle) -> DecisionVector {
        let values = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.uniform_in(lo, hi))
            .collect();
        DecisionVector::from_raw(values)
    }
}

/// Projects `x` onto the box.
pub fn clamp(x: &DecisionVector, bounds: &Bounds) -> DecisionVector {
    let mut values = x.0.clone();
    bounds.clamp_in_place(&mut values);
    DecisionVector(values)
}

/// Outcome of comparing two objective vectors under minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    ADominatesB,
    BDominatesA,
    Equal,
    Incomparable,
}

impl Dominance {
    pub fn mirrored(self) -> Self {
        match self {
            Dominance::ADominatesB => Dominance::BDominatesA,
            Dominance::BDominatesA => Dominance::ADominatesB,
            other => other,
        }
    }
}

/// Pareto comparison of two objective vectors of equal length.
pub fn dominance(a: &[f64], b: &[f64]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(compare(a, b))
}

/// Unchecked variant of [`dominance`] for hot loops.
#[inline]
pub fn compare(a: &[f64], b: &[f64]) -> Dominance {
    debug_assert_eq!(a.len(), b.len());
    let mut a_better = false;
    let mut b_better = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            a_better = true;
        } else if y < x {
            b_better = true;
        }
        if a_better && b_better {
            return Dominance::Incomparable;
        }
    }
    match (a_better, b_better) {
        (true, false) => Dominance::ADominatesB,
        (false, true) => Dominance::BDominatesA,
        (false, false) => Dominance::Equal,
        (true, true) => Dominance::Incomparable,
    }
}

/// `a ⪯ b`: no coordinate of `a` exceeds the one of `b`.
#[inline]
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn dominance_examples() {
        assert_eq!(dominance(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), Dominance::Equal);
        assert_eq!(
            dominance(&[1.0, 2.0], &[2.0, 2.0]).unwrap(),
            Dominance::ADominatesB
        );
        assert_eq!(
            dominance(&[1.0, 3.0], &[3.0, 1.0]).unwrap(),
            Dominance::Incomparable
        );
        assert!(matches!(
            dominance(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn clamp_examples() {
        let b1 = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let x = DecisionVector::new(vec![0.5]).unwrap();
        assert_eq!(clamp(&x, &b1).as_slice(), &[0.5]);
        let x = DecisionVector::new(vec![-0.2]).unwrap();
        assert_eq!(clamp(&x, &b1).as_slice(), &[0.0]);
        let b2 = Bounds::uniform(2, 0.0, 1.0).unwrap();
        let x = DecisionVector::new(vec![1.7, 0.3]).unwrap();
        assert_eq!(clamp(&x, &b2).as_slice(), &[1.0, 0.3]);
    }

    #[test]
    fn bounds_validation() {
        assert!(Bounds::new(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![1.0, 2.0]).is_err());
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        assert!(b.check(&[0.0, 1.5]).is_err());
        assert!(b.check(&[0.0, 1.0]).is_ok());
        assert!(DecisionVector::new(vec![f64::NAN]).is_err());
    }

    fn small_vec(d: usize) -> impl Strategy<Value = Vec<f64>> {
        // A coarse lattice so that equal coordinates actually occur.
        proptest::collection::vec((0i32..4).prop_map(f64::from), d)
    }

    proptest! {
        #[test]
        fn dominance_is_mirrored(a in small_vec(3), b in small_vec(3)) {
            prop_assert_eq!(compare(&a, &b), compare(&b, &a).mirrored());
        }

        #[test]
        fn strict_dominance_is_a_strict_partial_order(
            a in small_vec(3), b in small_vec(3), c in small_vec(3)
        ) {
            prop_assert_ne!(compare(&a, &a), Dominance::ADominatesB);
            if compare(&a, &b) == Dominance::ADominatesB {
                prop_assert_ne!(compare(&b, &a), Dominance::ADominatesB);
                if compare(&b, &c) == Dominance::ADominatesB {
                    prop_assert_eq!(compare(&a, &c), Dominance::ADominatesB);
                }
            }
        }

        #[test]
        fn clamp_is_idempotent(x in proptest::collection::vec(-3.0f64..3.0, 4)) {
            let b = Bounds::uniform(4, -1.0, 1.0).unwrap();
            let x = DecisionVector::new(x).unwrap();
            let once = clamp(&x, &b);
            prop_assert!(b.contains(&once));
            prop_assert_eq!(clamp(&once, &b), once);
        }
    }
}
