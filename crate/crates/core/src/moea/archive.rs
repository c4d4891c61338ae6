use alloc::vec::Vec;

use crate::types::{compare, weakly_dominates, Dominance, Individual};

/// Mutually non-dominated individuals found so far.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Archive {
    members: Vec<Individual>,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `ind` unless some member weakly dominates it; members it
    /// dominates are dropped. Returns whether it was added.
    pub fn insert(&mut self, ind: &Individual) -> bool {
        let f = ind.objectives.as_slice();
        if self
            .members
            .iter()
            .any(|m| weakly_dominates(m.objectives.as_slice(), f))
        {
            return false;
        }
        self.members
            .retain(|m| compare(f, m.objectives.as_slice()) != Dominance::ADominatesB);
        self.members.push(ind.clone());
        true
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn objectives(&self) -> impl Iterator<Item = &[f64]> {
        self.members.iter().map(|m| m.objectives.as_slice())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngHandle;
    use crate::types::{DecisionVector, ObjectiveVector};
    use alloc::vec;

    fn ind(f: &[f64]) -> Individual {
        Individual::new(DecisionVector::new(vec![0.0]).unwrap(), ObjectiveVector::from(f.to_vec()))
    }

    #[test]
    fn insert_rules() {
        let mut a = Archive::new();
        assert!(a.insert(&ind(&[1.0, 2.0])));
        assert!(a.insert(&ind(&[2.0, 1.0])));
        assert!(!a.insert(&ind(&[2.0, 2.0])));
        assert!(!a.insert(&ind(&[1.0, 2.0])));
        assert_eq!(a.len(), 2);
        assert!(a.insert(&ind(&[0.5, 0.5])));
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn stays_mutually_non_dominated() {
        let mut rng = RngHandle::new(3);
        let mut a = Archive::new();
        let mut rejected: Vec<Vec<f64>> = Vec::new();
        for _ in 0..2000 {
            let f = [rng.uniform(), rng.uniform(), rng.uniform()];
            if !a.insert(&ind(&f)) {
                rejected.push(f.to_vec());
            }
            let m: Vec<&[f64]> = a.objectives().collect();
            for i in 0..m.len() {
                for j in 0..m.len() {
                    assert!(i == j || compare(m[i], m[j]) == Dominance::Incomparable);
                }
            }
        }
        // a rejected point never comes back
        for f in &rejected {
            assert!(a.objectives().any(|m| weakly_dominates(m, f)));
        }
    }
}
