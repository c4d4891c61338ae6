//! A (μ/μ_w, λ) covariance matrix adaptation evolution strategy, configured
//! as (2,4), for minimizing scalar objectives over a box.
//!
//! The search runs in coordinates normalized to `[0, 1]^n`. Candidates are
//! clamped to the box before evaluation and the clamped points drive the
//! update, so the mean never leaves the box.

use alloc::vec::Vec;

use libm::{exp, log, sqrt};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::rng::RngHandle;
use crate::types::{Bounds, DecisionVector};

/// Default strategy parameters for a given dimension and population sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct CmaSettings {
    pub mu: usize,
    pub lambda: usize,
    pub weights: Vec<f64>,
    pub mu_eff: f64,
    pub c_sigma: f64,
    pub d_sigma: f64,
    pub c_c: f64,
    pub c_1: f64,
    pub c_mu: f64,
    pub chi_n: f64,
    pub initial_sigma: f64,
}

impl CmaSettings {
    pub fn new(n: usize, mu: usize, lambda: usize) -> Self {
        let nf = n as f64;
        let raw: Vec<f64> = (1..=mu)
            .map(|i| log(mu as f64 + 0.5) - log(i as f64))
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
        let d_sigma =
            1.0 + 2.0 * (sqrt((mu_eff - 1.0) / (nf + 1.0)) - 1.0).max(0.0) + c_sigma;
        let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
        let c_1 = 2.0 / ((nf + 1.3) * (nf + 1.3) + mu_eff);
        let c_mu = (1.0 - c_1)
            .min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0) * (nf + 2.0) + mu_eff));
        let chi_n = sqrt(nf) * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
        Self {
            mu,
            lambda,
            weights,
            mu_eff,
            c_sigma,
            d_sigma,
            c_c,
            c_1,
            c_mu,
            chi_n,
            initial_sigma: 0.3,
        }
    }

    /// The (2,4) configuration used for seeding.
    pub fn two_four(n: usize) -> Self {
        Self::new(n, 2, 4)
    }
}

/// Adaptation stops once the sampling scale in normalized coordinates drops
/// below this or the covariance conditioning exceeds [`MAX_CONDITION`];
/// sampling then continues from the frozen distribution.
pub const MIN_SCALE: f64 = 1e-14;
pub const MAX_CONDITION: f64 = 1e14;

#[derive(Debug, Clone, PartialEq)]
pub struct CmaResult {
    pub best_x: DecisionVector,
    pub best_f: f64,
    pub evals_used: u64,
}

/// Mutable search state of one CMA-ES run.
#[derive(Debug, Clone)]
pub struct CmaEs {
    settings: CmaSettings,
    bounds: Bounds,
    mean: DVector<f64>,
    sigma: f64,
    cov: DMatrix<f64>,
    basis: DMatrix<f64>,
    scales: DVector<f64>,
    inv_sqrt_cov: DMatrix<f64>,
    path_sigma: DVector<f64>,
    path_c: DVector<f64>,
    generation: u64,
    eigen_generation: u64,
    frozen: bool,
    evals: u64,
    best: Option<(Vec<f64>, f64)>,
}

impl CmaEs {
    /// Starts from a uniformly random mean inside the box.
    pub fn new(settings: CmaSettings, bounds: Bounds, rng: &mut RngHandle) -> Self {
        let n = bounds.len();
        let mean = DVector::from_fn(n, |_, _| rng.uniform());
        Self {
            sigma: settings.initial_sigma,
            settings,
            bounds,
            mean,
            cov: DMatrix::identity(n, n),
            basis: DMatrix::identity(n, n),
            scales: DVector::from_element(n, 1.0),
            inv_sqrt_cov: DMatrix::identity(n, n),
            path_sigma: DVector::zeros(n),
            path_c: DVector::zeros(n),
            generation: 0,
            eigen_generation: 0,
            frozen: false,
            evals: 0,
            best: None,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn evaluations(&self) -> u64 {
        self.evals
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn best_f(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.1)
    }

    fn to_box(&self, y: &DVector<f64>) -> Vec<f64> {
        let mut x: Vec<f64> = y
            .iter()
            .enumerate()
            .map(|(i, v)| self.bounds.lower()[i] + v * self.bounds.width(i))
            .collect();
        // rounding may leave the box by an ulp
        self.bounds.clamp_in_place(&mut x);
        x
    }

    fn evaluate(&mut self, y: &DVector<f64>, objective: &mut impl FnMut(&[f64]) -> f64) -> f64 {
        let x = self.to_box(y);
        let mut f = objective(&x);
        if !f.is_finite() {
            f = f64::INFINITY;
        }
        self.evals += 1;
        if self.best.as_ref().is_none_or(|b| f < b.1) {
            self.best = Some((x, f));
        }
        f
    }

    fn sample(&self, rng: &mut RngHandle) -> DVector<f64> {
        let n = self.mean.len();
        let z = DVector::from_fn(n, |_, _| rng.standard_normal());
        let step = &self.basis * z.component_mul(&self.scales);
        let mut y = &self.mean + step * self.sigma;
        for v in y.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        y
    }

    /// Samples and evaluates `count` candidates. A full generation
    /// (`count == lambda`) also updates the distribution; a shorter one only
    /// spends the remaining budget.
    pub fn step(
        &mut self,
        objective: &mut impl FnMut(&[f64]) -> f64,
        count: usize,
        rng: &mut RngHandle,
    ) {
        let mut candidates: Vec<(DVector<f64>, f64)> = Vec::with_capacity(count);
        for _ in 0..count {
            let y = self.sample(rng);
            let f = self.evaluate(&y, objective);
            candidates.push((y, f));
        }
        if count < self.settings.lambda || self.frozen {
            self.generation += 1;
            return;
        }
        candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
        self.update(&candidates);
    }

    fn update(&mut self, ranked: &[(DVector<f64>, f64)]) {
        let s = &self.settings;
        let n = self.mean.len() as f64;
        let old_mean = self.mean.clone();
        let mut new_mean = DVector::zeros(self.mean.len());
        for (w, (y, _)) in s.weights.iter().zip(ranked) {
            new_mean += y * *w;
        }
        let steps: Vec<DVector<f64>> = ranked[..s.mu]
            .iter()
            .map(|(y, _)| (y - &old_mean) / self.sigma)
            .collect();
        let mean_step = (&new_mean - &old_mean) / self.sigma;
        self.mean = new_mean;

        let cs = s.c_sigma;
        self.path_sigma = &self.path_sigma * (1.0 - cs)
            + (&self.inv_sqrt_cov * &mean_step) * sqrt(cs * (2.0 - cs) * s.mu_eff);
        let ps_norm = self.path_sigma.norm();
        let decay = 1.0 - libm::pow(1.0 - cs, 2.0 * (self.generation + 1) as f64);
        let h_sigma = ps_norm / sqrt(decay) < (1.4 + 2.0 / (n + 1.0)) * s.chi_n;
        let hs = if h_sigma { 1.0 } else { 0.0 };
        let cc = s.c_c;
        self.path_c =
            &self.path_c * (1.0 - cc) + &mean_step * (hs * sqrt(cc * (2.0 - cc) * s.mu_eff));

        let keep = 1.0 - s.c_1 - s.c_mu + (1.0 - hs) * s.c_1 * cc * (2.0 - cc);
        let mut cov = &self.cov * keep + (&self.path_c * self.path_c.transpose()) * s.c_1;
        for (w, y) in s.weights.iter().zip(&steps) {
            cov += (y * y.transpose()) * (s.c_mu * w);
        }
        debug_assert!(
            (&cov - cov.transpose()).amax() <= 1e-12 * cov.amax().max(1.0),
            "covariance lost symmetry"
        );
        self.cov = (&cov + cov.transpose()) * 0.5;
        self.sigma *= exp((cs / s.d_sigma) * (ps_norm / s.chi_n - 1.0));
        self.generation += 1;

        let interval = s.lambda as f64 / (s.c_1 + s.c_mu) / n / 10.0;
        if (self.generation - self.eigen_generation) as f64 > interval {
            self.decompose();
        }
    }

    fn decompose(&mut self) {
        self.eigen_generation = self.generation;
        let eig = SymmetricEigen::new(self.cov.clone());
        let min = eig.eigenvalues.min();
        let max = eig.eigenvalues.max();
        let healthy = min > 0.0
            && max.is_finite()
            && max / min <= MAX_CONDITION
            && self.sigma.is_finite()
            && self.sigma * sqrt(max) >= MIN_SCALE;
        if !healthy {
            self.frozen = true;
            return;
        }
        debug_assert!(min > 0.0, "covariance is not positive definite");
        self.scales = eig.eigenvalues.map(sqrt);
        let inv = eig.eigenvalues.map(|v| 1.0 / sqrt(v));
        self.inv_sqrt_cov = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
        self.basis = eig.eigenvectors;
    }

    pub fn into_result(self) -> Result<CmaResult> {
        let (x, f) = self.best.ok_or(Error::EmptySet)?;
        Ok(CmaResult {
            best_x: DecisionVector::from_raw(x),
            best_f: f,
            evals_used: self.evals,
        })
    }
}

/// Minimizes `objective` over `bounds` with a (2,4)-CMA-ES using exactly
/// `eval_budget` evaluations. Non-finite objective values rank last.
pub fn cma_minimize(
    mut objective: impl FnMut(&[f64]) -> f64,
    bounds: &Bounds,
    eval_budget: u64,
    rng: &mut RngHandle,
) -> Result<CmaResult> {
    let settings = CmaSettings::two_four(bounds.len());
    let lambda = settings.lambda as u64;
    if eval_budget < lambda {
        return Err(Error::Config(alloc::format!(
            "CMA-ES budget {eval_budget} is below lambda = {lambda}"
        )));
    }
    let mut es = CmaEs::new(settings, bounds.clone(), rng);
    while es.evaluations() < eval_budget {
        let count = (eval_budget - es.evaluations()).min(lambda) as usize;
        es.step(&mut objective, count, rng);
    }
    es.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn default_parameters_for_two_four() {
        let s = CmaSettings::two_four(10);
        assert_eq!((s.mu, s.lambda), (2, 4));
        assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(s.weights[0] > s.weights[1] && s.weights[1] > 0.0);
        // w ∝ (ln 2.5, ln 1.25)
        let expected = log(2.5) / (log(2.5) + log(1.25));
        assert!((s.weights[0] - expected).abs() < 1e-15);
        assert!(s.c_1 + s.c_mu < 1.0 && s.c_sigma < 1.0 && s.c_c < 1.0);
    }

    #[test]
    fn budget_accounting() {
        let b = Bounds::uniform(3, -1.0, 1.0).unwrap();
        let r = cma_minimize(sphere, &b, 4, &mut RngHandle::new(1)).unwrap();
        assert_eq!(r.evals_used, 4);
        let r = cma_minimize(sphere, &b, 3333, &mut RngHandle::new(1)).unwrap();
        assert_eq!(r.evals_used, 3333);
        assert!(matches!(
            cma_minimize(sphere, &b, 3, &mut RngHandle::new(1)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn single_generation_at_budget_four() {
        let b = Bounds::uniform(3, -1.0, 1.0).unwrap();
        let mut rng = RngHandle::new(8);
        let mut es = CmaEs::new(CmaSettings::two_four(3), b, &mut rng);
        let mut calls = 0;
        es.step(&mut |x: &[f64]| { calls += 1; sphere(x) }, 4, &mut rng);
        assert_eq!((es.generation(), es.evaluations(), calls), (1, 4, 4));
    }

    #[test]
    fn flat_objective() {
        let b = Bounds::uniform(5, 2.0, 3.0).unwrap();
        let r = cma_minimize(|_| 0.0, &b, 400, &mut RngHandle::new(5)).unwrap();
        assert_eq!(r.best_f, 0.0);
        assert!(b.contains(&r.best_x));
    }

    #[test]
    fn non_finite_values_rank_last() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let r = cma_minimize(
            |x| if x[0] > 0.0 { f64::NAN } else { sphere(x) },
            &b,
            2000,
            &mut RngHandle::new(4),
        )
        .unwrap();
        assert!(r.best_f.is_finite() && r.best_f < 1e-6);
        assert!(r.best_x[0] <= 0.0);
    }

    #[test]
    fn optimum_on_the_boundary() {
        // Minimum at the lower corner, which clamping must reach.
        let b = Bounds::uniform(6, 0.0, 1.0).unwrap();
        let r = cma_minimize(|x| x.iter().sum(), &b, 2000, &mut RngHandle::new(12)).unwrap();
        assert!(r.best_f < 1e-6, "{}", r.best_f);
    }

    #[test]
    fn deterministic_given_seed() {
        let b = Bounds::uniform(4, -5.0, 5.0).unwrap();
        let a = cma_minimize(sphere, &b, 1000, &mut RngHandle::new(77)).unwrap();
        let c = cma_minimize(sphere, &b, 1000, &mut RngHandle::new(77)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn invariants_along_the_run() {
        let b = Bounds::uniform(8, -5.0, 5.0).unwrap();
        let mut rng = RngHandle::new(99);
        let mut es = CmaEs::new(CmaSettings::two_four(8), b.clone(), &mut rng);
        let mut previous = f64::INFINITY;
        let mut seen = Vec::new();
        let mut objective = |x: &[f64]| {
            seen.push(x.to_vec());
            // an ill-conditioned ellipsoid
            x.iter()
                .enumerate()
                .map(|(i, v)| libm::pow(10.0, i as f64 / 2.0) * v * v)
                .sum::<f64>()
        };
        for _ in 0..1500 {
            es.step(&mut objective, 4, &mut rng);
            assert!(es.best_f() <= previous);
            previous = es.best_f();
            let c = es.covariance();
            assert!((c - c.transpose()).amax() <= 1e-12);
            assert!(es.sigma() > 0.0 && es.sigma().is_finite());
            if !es.is_frozen() {
                assert!(SymmetricEigen::new(c.clone()).eigenvalues.min() > 0.0);
            }
        }
        assert!(seen.iter().all(|x| b.contains(x)));
        assert!(es.best_f() < 1e-8, "{}", es.best_f());
    }

    #[test]
    fn sphere_converges() {
        let b = Bounds::uniform(10, -5.0, 5.0).unwrap();
        let mut ok = 0;
        for seed in 0..20 {
            let r = cma_minimize(sphere, &b, 50_000, &mut RngHandle::new(seed)).unwrap();
            if r.best_f < 1e-9 {
                ok += 1;
            }
        }
        assert!(ok >= 19, "{ok}/20");
    }
}
