use alloc::vec;
use alloc::vec::Vec;

use libm::exp;

use super::nsga2::take;
use super::{binary_tournament, Archive, Strategy};
use crate::rng::RngHandle;
use crate::types::Individual;

/// Indicator-based selection with the additive ε indicator.
pub(crate) struct Ibea {
    kappa: f64,
    fitness: Vec<f64>,
}

impl Ibea {
    pub(crate) fn new(kappa: f64) -> Self {
        Self {
            kappa,
            fitness: Vec::new(),
        }
    }
}

/// Pairwise ε indicator on objectives scaled to [0, 1] over the pool:
/// `ind[a][b]` is the smallest shift letting `a` weakly dominate `b`.
pub(crate) fn epsilon_matrix(objs: &[&[f64]]) -> Vec<Vec<f64>> {
    let n = objs.len();
    let d = objs.first().map_or(0, |o| o.len());
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for o in objs {
        for i in 0..d {
            lo[i] = lo[i].min(o[i]);
            hi[i] = hi[i].max(o[i]);
        }
    }
    let scaled: Vec<Vec<f64>> = objs
        .iter()
        .map(|o| {
            (0..d)
                .map(|i| {
                    let r = hi[i] - lo[i];
                    if r > 0.0 { (o[i] - lo[i]) / r } else { 0.0 }
                })
                .collect()
        })
        .collect();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    scaled[a]
                        .iter()
                        .zip(&scaled[b])
                        .map(|(x, y)| x - y)
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect()
        })
        .collect()
}

/// Fitness `F(x) = Σ_{y≠x} −exp(−I(y,x)/(c·κ))`, higher is better, with the
/// scale `c` returned alongside.
pub(crate) fn ibea_fitness(ind: &[Vec<f64>], kappa: f64) -> (Vec<f64>, f64) {
    let n = ind.len();
    let mut c = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            if a != b {
                c = c.max(ind[a][b].abs());
            }
        }
    }
    if c == 0.0 {
        c = 1.0;
    }
    let f = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| -exp(-ind[y][x] / (c * kappa)))
                .sum()
        })
        .collect();
    (f, c)
}

impl Strategy for Ibea {
    fn prepare(&mut self, population: &[Individual], _rng: &mut RngHandle) {
        let objs: Vec<&[f64]> = population.iter().map(|p| p.objectives.as_slice()).collect();
        self.fitness = ibea_fitness(&epsilon_matrix(&objs), self.kappa).0;
    }

    fn parent(&mut self, population: &[Individual], rng: &mut RngHandle) -> usize {
        binary_tournament(population.len(), rng, |i, j| self.fitness[j].total_cmp(&self.fitness[i]))
    }

    fn survive(
        &mut self,
        pool: Vec<Individual>,
        mu: usize,
        _archive: Option<&Archive>,
        _rng: &mut RngHandle,
    ) -> Vec<Individual> {
        let objs: Vec<&[f64]> = pool.iter().map(|p| p.objectives.as_slice()).collect();
        let ind = epsilon_matrix(&objs);
        let (mut fitness, c) = ibea_fitness(&ind, self.kappa);
        let mut alive = vec![true; pool.len()];
        for _ in mu..pool.len() {
            let worst = (0..pool.len())
                .filter(|&i| alive[i])
                .min_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)))
                .expect("pool larger than mu");
            alive[worst] = false;
            for z in (0..pool.len()).filter(|&z| alive[z]) {
                fitness[z] += exp(-ind[worst][z] / (c * self.kappa));
            }
        }
        let chosen: Vec<usize> = (0..pool.len()).filter(|&i| alive[i]).collect();
        self.fitness = chosen.iter().map(|&i| fitness[i]).collect();
        take(pool, &chosen)
    }
}
