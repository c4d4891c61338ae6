use alloc::vec;
use alloc::vec::Vec;

use super::{Archive, Strategy};
use crate::rng::RngHandle;
use crate::types::Individual;

/// Approximation-guided selection against the archive of all
/// non-dominated points seen.
pub(crate) struct Age;

/// Shift `p` needs to weakly dominate `a`.
fn gap(p: &[f64], a: &[f64]) -> f64 {
    p.iter()
        .zip(a)
        .map(|(x, y)| x - y)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Order in which `pool` members are greedily removed so that each removal
/// increases α(archive, remaining) the least. Ties are broken by the summed
/// increase over the archive points the member serves, then at random.
/// Returns the first `count` removals.
pub fn age_removal_order<A: AsRef<[f64]>, P: AsRef<[f64]>>(
    archive: &[A],
    pool: &[P],
    count: usize,
    rng: &mut RngHandle,
) -> Vec<usize> {
    let n = pool.len();
    let mut alive = vec![true; n];
    // per archive point: (best value, best index, second value, second index)
    let scan = |a: &[f64], alive: &[bool]| {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = (f64::INFINITY, usize::MAX);
        for (j, p) in pool.iter().enumerate() {
            if !alive[j] {
                continue;
            }
            let v = gap(p.as_ref(), a);
            if v < best.0 {
                second = best;
                best = (v, j);
            } else if v < second.0 {
                second = (v, j);
            }
        }
        (best, second)
    };
    let mut serve: Vec<((f64, usize), (f64, usize))> =
        archive.iter().map(|a| scan(a.as_ref(), &alive)).collect();

    let mut removed = Vec::with_capacity(count);
    for _ in 0..count.min(n) {
        // largest best value owned by each member, and the worst second
        // value among the points it owns
        let mut own_max = vec![f64::NEG_INFINITY; n];
        let mut own_second = vec![f64::NEG_INFINITY; n];
        let mut increase = vec![0.0; n];
        for &((bv, bi), (sv, _)) in &serve {
            if bi == usize::MAX {
                continue;
            }
            own_max[bi] = own_max[bi].max(bv);
            own_second[bi] = own_second[bi].max(sv);
            increase[bi] += sv - bv;
        }
        let (mut top, mut top_at, mut runner) = (f64::NEG_INFINITY, usize::MAX, f64::NEG_INFINITY);
        for (j, &v) in own_max.iter().enumerate() {
            if v > top {
                runner = top;
                top = v;
                top_at = j;
            } else if v > runner {
                runner = v;
            }
        }
        let mut ties: Vec<usize> = Vec::new();
        let mut best_key = (f64::INFINITY, f64::INFINITY);
        for j in (0..n).filter(|&j| alive[j]) {
            let others = if j == top_at { runner } else { top };
            let key = (others.max(own_second[j]), increase[j]);
            let ord = key.0.total_cmp(&best_key.0).then(key.1.total_cmp(&best_key.1));
            if ord.is_lt() {
                best_key = key;
                ties.clear();
                ties.push(j);
            } else if ord.is_eq() {
                ties.push(j);
            }
        }
        let victim = if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.index(ties.len())]
        };
        alive[victim] = false;
        removed.push(victim);
        for (a, s) in archive.iter().zip(serve.iter_mut()) {
            if s.0 .1 == victim || s.1 .1 == victim {
                *s = scan(a.as_ref(), &alive);
            }
        }
    }
    removed
}

impl Strategy for Age {
    fn prepare(&mut self, _population: &[Individual], _rng: &mut RngHandle) {}

    fn parent(&mut self, population: &[Individual], rng: &mut RngHandle) -> usize {
        rng.index(population.len())
    }

    fn survive(
        &mut self,
        pool: Vec<Individual>,
        mu: usize,
        archive: Option<&Archive>,
        rng: &mut RngHandle,
    ) -> Vec<Individual> {
        let archive = archive.expect("selection needs the archive");
        let a: Vec<&[f64]> = archive.objectives().collect();
        let p: Vec<&[f64]> = pool.iter().map(|x| x.objectives.as_slice()).collect();
        let gone = age_removal_order(&a, &p, pool.len() - mu, rng);
        let mut keep = vec![true; pool.len()];
        for i in gone {
            keep[i] = false;
        }
        pool.into_iter()
            .zip(keep)
            .filter_map(|(x, k)| k.then_some(x))
            .collect()
    }
}
