use alloc::vec::Vec;
use core::cmp::Ordering;

use super::sorting::{crowding_distance, fast_nondominated_sort};
use super::{binary_tournament, Archive, Strategy};
use crate::rng::RngHandle;
use crate::types::Individual;

/// Rank-then-crowding selection.
#[derive(Default)]
pub(crate) struct Nsga2 {
    rank: Vec<usize>,
    crowding: Vec<f64>,
}

impl Nsga2 {
    /// Ranks and crowding of `pool`, plus the indices kept when cutting it
    /// to `keep` members.
    fn assess(&mut self, pool: &[Individual], keep: usize) -> Vec<usize> {
        let objs: Vec<&[f64]> = pool.iter().map(|p| p.objectives.as_slice()).collect();
        let fronts = fast_nondominated_sort(&objs);
        self.rank = alloc::vec![0; pool.len()];
        self.crowding = alloc::vec![0.0; pool.len()];
        let mut chosen = Vec::with_capacity(keep);
        for (k, front) in fronts.iter().enumerate() {
            let pts: Vec<&[f64]> = front.iter().map(|&i| objs[i]).collect();
            for (&i, c) in front.iter().zip(crowding_distance(&pts)) {
                self.rank[i] = k;
                self.crowding[i] = c;
            }
            if chosen.len() + front.len() <= keep {
                chosen.extend_from_slice(front);
            } else if chosen.len() < keep {
                let mut last = front.clone();
                last.sort_by(|&a, &b| self.crowding[b].total_cmp(&self.crowding[a]).then(a.cmp(&b)));
                last.truncate(keep - chosen.len());
                chosen.extend(last);
            }
        }
        chosen.sort_unstable();
        chosen
    }
}

impl Strategy for Nsga2 {
    fn prepare(&mut self, population: &[Individual], _rng: &mut RngHandle) {
        self.assess(population, population.len());
    }

    fn parent(&mut self, population: &[Individual], rng: &mut RngHandle) -> usize {
        binary_tournament(population.len(), rng, |i, j| {
            self.rank[i]
                .cmp(&self.rank[j])
                .then(self.crowding[j].partial_cmp(&self.crowding[i]).unwrap_or(Ordering::Equal))
        })
    }

    fn survive(
        &mut self,
        pool: Vec<Individual>,
        mu: usize,
        _archive: Option<&Archive>,
        _rng: &mut RngHandle,
    ) -> Vec<Individual> {
        let chosen = self.assess(&pool, mu);
        self.rank = chosen.iter().map(|&i| self.rank[i]).collect();
        self.crowding = chosen.iter().map(|&i| self.crowding[i]).collect();
        take(pool, &chosen)
    }
}

/// Moves the members at the sorted `indices` out of `pool`.
pub(crate) fn take(pool: Vec<Individual>, indices: &[usize]) -> Vec<Individual> {
    let mut keep = alloc::vec![false; pool.len()];
    for &i in indices {
        keep[i] = true;
    }
    pool.into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}
