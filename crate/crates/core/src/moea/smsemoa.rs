use alloc::vec::Vec;

use super::sorting::{fast_nondominated_sort, ranks_from_fronts};
use super::{binary_tournament, Archive, Strategy};
use crate::metrics::{hv_contributions, hv_contributions_2d};
use crate::rng::RngHandle;
use crate::types::Individual;

/// Steady-state hypervolume selection.
pub(crate) struct SmsEmoa {
    offset: f64,
    rank: Vec<usize>,
}

impl SmsEmoa {
    pub(crate) fn new(offset: f64) -> Self {
        Self {
            offset,
            rank: Vec::new(),
        }
    }
}

/// Position within `front` of the member with the smallest exclusive
/// hypervolume, the reference point being the front's per-objective
/// maximum plus `offset`. Ties go to the earliest member.
pub fn least_contributor<P: AsRef<[f64]>>(front: &[P], offset: f64) -> usize {
    if front.len() == 1 {
        return 0;
    }
    let d = front[0].as_ref().len();
    let reference: Vec<f64> = (0..d)
        .map(|i| {
            front
                .iter()
                .map(|p| p.as_ref()[i])
                .fold(f64::NEG_INFINITY, f64::max)
                + offset
        })
        .collect();
    let contrib = if d == 2 {
        hv_contributions_2d(front, &reference)
    } else {
        hv_contributions(front, &reference)
    };
    let mut best = 0;
    for (i, c) in contrib.iter().enumerate() {
        if *c < contrib[best] {
            best = i;
        }
    }
    best
}

impl Strategy for SmsEmoa {
    fn prepare(&mut self, population: &[Individual], _rng: &mut RngHandle) {
        let objs: Vec<&[f64]> = population.iter().map(|p| p.objectives.as_slice()).collect();
        self.rank = ranks_from_fronts(&fast_nondominated_sort(&objs), objs.len());
    }

    fn parent(&mut self, population: &[Individual], rng: &mut RngHandle) -> usize {
        binary_tournament(population.len(), rng, |i, j| self.rank[i].cmp(&self.rank[j]))
    }

    fn survive(
        &mut self,
        mut pool: Vec<Individual>,
        mu: usize,
        _archive: Option<&Archive>,
        _rng: &mut RngHandle,
    ) -> Vec<Individual> {
        while pool.len() > mu {
            let objs: Vec<&[f64]> = pool.iter().map(|p| p.objectives.as_slice()).collect();
            let fronts = fast_nondominated_sort(&objs);
            let mut rank = ranks_from_fronts(&fronts, objs.len());
            let worst = fronts.last().expect("non-empty pool");
            let pts: Vec<&[f64]> = worst.iter().map(|&i| objs[i]).collect();
            let victim = worst[least_contributor(&pts, self.offset)];
            rank.remove(victim);
            pool.remove(victim);
            self.rank = rank;
        }
        pool
    }
}
