use alloc::vec;
use alloc::vec::Vec;

use super::nsga2::take;
use super::{binary_tournament, Archive, Strategy};
use crate::rng::RngHandle;
use crate::types::{compare, Dominance, Individual};

/// Strength-Pareto fitness with k-th nearest neighbour density; the
/// population doubles as the archive.
#[derive(Default)]
pub(crate) struct Spea2 {
    fitness: Vec<f64>,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Raw fitness plus density, lower is better. Below 1 means non-dominated.
pub(crate) fn spea2_fitness(objs: &[&[f64]]) -> Vec<f64> {
    let n = objs.len();
    let mut strength = vec![0usize; n];
    let mut beats = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && compare(objs[i], objs[j]) == Dominance::ADominatesB {
                strength[i] += 1;
                beats[j].push(i);
            }
        }
    }
    let k = (libm::sqrt(n as f64) as usize).clamp(1, n.saturating_sub(1).max(1));
    (0..n)
        .map(|i| {
            let raw: usize = beats[i].iter().map(|&j| strength[j]).sum();
            let mut d: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| distance(objs[i], objs[j])).collect();
            let sigma = if d.is_empty() {
                0.0
            } else {
                let kk = (k - 1).min(d.len() - 1);
                *d.select_nth_unstable_by(kk, f64::total_cmp).1
            };
            raw as f64 + 1.0 / (sigma + 2.0)
        })
        .collect()
}

/// Repeatedly drops the member whose sorted distances to the others are
/// lexicographically smallest until `keep` remain. Returns survivors.
pub(crate) fn truncate(objs: &[&[f64]], candidates: &[usize], keep: usize) -> Vec<usize> {
    let m = candidates.len();
    let dist: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| distance(objs[candidates[a]], objs[candidates[b]]))
                .collect()
        })
        .collect();
    let mut lists: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            let mut l: Vec<f64> = (0..m).filter(|&b| b != a).map(|b| dist[a][b]).collect();
            l.sort_by(f64::total_cmp);
            l
        })
        .collect();
    let mut alive = vec![true; m];
    for _ in keep..m {
        let mut worst: Option<usize> = None;
        for a in (0..m).filter(|&a| alive[a]) {
            let smaller = match worst {
                None => true,
                Some(w) => lists[a]
                    .iter()
                    .zip(&lists[w])
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .is_some_and(|o| o.is_lt()),
            };
            if smaller {
                worst = Some(a);
            }
        }
        let w = worst.expect("more candidates than survivors");
        alive[w] = false;
        for a in (0..m).filter(|&a| alive[a]) {
            let l = &mut lists[a];
            let pos = l.partition_point(|x| x.total_cmp(&dist[a][w]).is_lt());
            l.remove(pos);
        }
    }
    (0..m).filter(|&a| alive[a]).map(|a| candidates[a]).collect()
}

impl Strategy for Spea2 {
    fn prepare(&mut self, population: &[Individual], _rng: &mut RngHandle) {
        let objs: Vec<&[f64]> = population.iter().map(|p| p.objectives.as_slice()).collect();
        self.fitness = spea2_fitness(&objs);
    }

    fn parent(&mut self, population: &[Individual], rng: &mut RngHandle) -> usize {
        binary_tournament(population.len(), rng, |i, j| self.fitness[i].total_cmp(&self.fitness[j]))
    }

    fn survive(
        &mut self,
        pool: Vec<Individual>,
        mu: usize,
        _archive: Option<&Archive>,
        _rng: &mut RngHandle,
    ) -> Vec<Individual> {
        let objs: Vec<&[f64]> = pool.iter().map(|p| p.objectives.as_slice()).collect();
        let fitness = spea2_fitness(&objs);
        let front: Vec<usize> = (0..pool.len()).filter(|&i| fitness[i] < 1.0).collect();
        let mut chosen = if front.len() > mu {
            truncate(&objs, &front, mu)
        } else {
            let mut order: Vec<usize> = (0..pool.len()).collect();
            order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
            order.truncate(mu);
            order
        };
        chosen.sort_unstable();
        self.fitness = chosen.iter().map(|&i| fitness[i]).collect();
        take(pool, &chosen)
    }
}
