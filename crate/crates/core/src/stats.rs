//! Median-ratio comparison and the two-sided Wilcoxon–Mann–Whitney
//! rank-sum test behind the `>`, `<`, `=` table markers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Significance level of every comparison.
pub const SIGNIFICANCE: f64 = 0.05;

/// Samples up to this combined size without ties use the exact null
/// distribution of `U`.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Mann–Whitney `U` of the first sample.
    pub u: f64,
    pub p_value: f64,
    pub exact: bool,
}

/// Midranks of the pooled sample plus the tie term `sum (t^3 - t)`.
fn midranks(pooled: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        // positions i..j share the average of ranks i+1..=j
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Number of arrangements yielding each `U` in `0..=m*n` under the null.
fn u_distribution(m: usize, n: usize) -> Vec<u64> {
    // table[j][u] for the current first-sample size, j = second-sample size
    let mut table: Vec<Vec<u64>> = (0..=n).map(|_| vec![1]).collect();
    for i in 1..=m {
        let mut next: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
        next.push(vec![1; 1]);
        for j in 1..=n {
            let mut row = vec![0u64; i * j + 1];
            // last element from the first sample: it beats all j others
            for (u, &c) in table[j].iter().enumerate() {
                row[u + j] += c;
            }
            // last element from the second sample
            for (u, &c) in next[j - 1].iter().enumerate() {
                row[u] += c;
            }
            next.push(row);
        }
        table = next;
    }
    table.pop().unwrap_or_default()
}

/// Two-sided Mann–Whitney `U` test. Exact for small tie-free samples,
/// otherwise normal approximation with tie and continuity corrections.
pub fn ranksum_test(a: &[f64], b: &[f64]) -> Result<RankSumResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (m, n) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let rank_sum: f64 = ranks[..m].iter().sum();
    let u = rank_sum - (m * (m + 1)) as f64 / 2.0;
    let mn = (m * n) as f64;

    if m + n <= EXACT_LIMIT && ties == 0.0 {
        let counts = u_distribution(m, n);
        let total: u64 = counts.iter().sum();
        let k = u.round() as usize;
        let lower: u64 = counts[..=k].iter().sum();
        let upper: u64 = counts[k..].iter().sum();
        let tail = lower.min(upper) as f64 / total as f64;
        return Ok(RankSumResult {
            u,
            p_value: (2.0 * tail).min(1.0),
            exact: true,
        });
    }

    let big_n = (m + n) as f64;
    let variance = mn / 12.0 * ((big_n + 1.0) - ties / (big_n * (big_n - 1.0)));
    let p_value = if variance <= 0.0 {
        1.0
    } else {
        let z = ((u - mn / 2.0).abs() - 0.5).max(0.0) / libm::sqrt(variance);
        libm::erfc(z / core::f64::consts::SQRT_2).min(1.0)
    };
    Ok(RankSumResult {
        u,
        p_value,
        exact: false,
    })
}

/// Median with the midpoint convention for even sizes.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Ok(if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// Seeding significantly better.
    Better,
    /// Seeding significantly worse.
    Worse,
    Insignificant,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Better => ">",
            Symbol::Worse => "<",
            Symbol::Insignificant => "=",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            ">" => Ok(Symbol::Better),
            "<" => Ok(Symbol::Worse),
            "=" => Ok(Symbol::Insignificant),
            other => Err(Error::Config(alloc::format!("unknown symbol `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonCell {
    /// `median(unseeded) / median(seeded)`; above 1 when seeding helps.
    pub ratio: f64,
    pub symbol: Symbol,
    pub p_value: f64,
    pub n_unseeded: usize,
    pub n_seeded: usize,
}

/// One table entry: a comparison, or a dash when the algorithm never
/// completed its first iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableCell {
    Compared(ComparisonCell),
    NotRun,
}

/// Compares final approximation constants (smaller is better) of unseeded
/// and seeded runs.
pub fn compare(unseeded: &[f64], seeded: &[f64]) -> Result<ComparisonCell> {
    let mu = median(unseeded)?;
    let ms = median(seeded)?;
    let test = ranksum_test(unseeded, seeded)?;
    let ratio = if ms == 0.0 {
        if mu == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        mu / ms
    };
    let symbol = if test.p_value >= SIGNIFICANCE || ms == mu {
        Symbol::Insignificant
    } else if ms < mu {
        Symbol::Better
    } else {
        Symbol::Worse
    };
    Ok(ComparisonCell {
        ratio,
        symbol,
        p_value: test.p_value,
        n_unseeded: unseeded.len(),
        n_seeded: seeded.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngHandle;
    use proptest::prelude::*;

    /// Exact two-sided p-value by enumerating every split of the pooled
    /// sample (tie-free input).
    fn permutation_p(a: &[f64], b: &[f64]) -> f64 {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let n = pooled.len();
        let m = a.len();
        let u_of = |mask: u32| -> f64 {
            let mut u = 0.0;
            for i in 0..n {
                if mask & (1 << i) == 0 {
                    continue;
                }
                for j in 0..n {
                    if mask & (1 << j) == 0 && pooled[i] > pooled[j] {
                        u += 1.0;
                    }
                }
            }
            u
        };
        let observed = u_of((1u32 << m) - 1);
        let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != m {
                continue;
            }
            let u = u_of(mask);
            total += 1;
            if u <= observed {
                le += 1;
            }
            if u >= observed {
                ge += 1;
            }
        }
        (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
    }

    #[test]
    fn exact_small_case() {
        let r = ranksum_test(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert!(r.exact);
        assert_eq!(r.u, 0.0);
        assert!((r.p_value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_matches_enumeration() {
        let mut rng = RngHandle::new(44);
        for _ in 0..60 {
            let m = 1 + rng.index(6);
            let n = 1 + rng.index(6);
            let a: Vec<f64> = (0..m).map(|_| rng.uniform()).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.uniform() + 0.2).collect();
            let r = ranksum_test(&a, &b).unwrap();
            assert!(r.exact);
            assert!((r.p_value - permutation_p(&a, &b)).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_samples() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let r = ranksum_test(&a, &a).unwrap();
        assert_eq!(r.u, 100.0 * 100.0 / 2.0);
        assert!(r.p_value >= 0.99);
        let c = compare(&a, &a).unwrap();
        assert_eq!(c.ratio, 1.0);
        assert_eq!(c.symbol, Symbol::Insignificant);
    }

    #[test]
    fn separated_samples() {
        let mut rng = RngHandle::new(3);
        let a: Vec<f64> = (0..100).map(|_| rng.uniform()).collect();
        let b: Vec<f64> = (0..100).map(|_| 2.0 + rng.uniform()).collect();
        let r = ranksum_test(&a, &b).unwrap();
        assert!(!r.exact);
        assert!(r.p_value < 1e-15);
        // Fully separated size-8 subsamples: only the two extreme splits
        // out of C(16, 8) are as extreme.
        let r8 = ranksum_test(&a[..8], &b[..8]).unwrap();
        assert!((r8.p_value - 2.0 / 12870.0).abs() < 1e-15);
    }

    #[test]
    fn compare_examples() {
        let two = vec![2.0; 100];
        let one = vec![1.0; 100];
        let c = compare(&two, &one).unwrap();
        assert_eq!((c.ratio, c.symbol), (2.0, Symbol::Better));
        assert!(c.p_value < SIGNIFICANCE);
        let c = compare(&one, &two).unwrap();
        assert_eq!((c.ratio, c.symbol), (0.5, Symbol::Worse));
        let c = compare(&one, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(c.ratio, f64::INFINITY);
        assert!(compare(&[], &one).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]).unwrap(), 2.5);
        assert!(median(&[]).is_err());
    }

    #[test]
    fn null_rejection_rate() {
        let mut rng = RngHandle::new(2024);
        let trials = 4000;
        let mut rejected = 0;
        for _ in 0..trials {
            let a: Vec<f64> = (0..100).map(|_| rng.uniform()).collect();
            let b: Vec<f64> = (0..100).map(|_| rng.uniform()).collect();
            if ranksum_test(&a, &b).unwrap().p_value < SIGNIFICANCE {
                rejected += 1;
            }
        }
        let rate = rejected as f64 / trials as f64;
        assert!((rate - 0.05).abs() < 0.015, "{rate}");
    }

    proptest! {
        #[test]
        fn two_sided_symmetry(
            a in proptest::collection::vec(0i32..20, 1..30),
            b in proptest::collection::vec(0i32..20, 1..30),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let ab = ranksum_test(&a, &b).unwrap().p_value;
            let ba = ranksum_test(&b, &a).unwrap().p_value;
            prop_assert!((ab - ba).abs() < 1e-12);
        }

        #[test]
        fn invariant_under_monotone_transform(
            a in proptest::collection::vec(-5.0f64..5.0, 1..25),
            b in proptest::collection::vec(-5.0f64..5.0, 1..25),
        ) {
            let t = |v: &Vec<f64>| -> Vec<f64> { v.iter().map(|x| libm::exp(*x) * 3.0 + 1.0).collect() };
            let p0 = ranksum_test(&a, &b).unwrap().p_value;
            let p1 = ranksum_test(&t(&a), &t(&b)).unwrap().p_value;
            prop_assert!((p0 - p1).abs() < 1e-12);
        }
    }
}
