//! Process-wide cache of reference-front samples.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use moseed_core::problems::{Benchmark, Problem};
use moseed_core::{ObjectiveVector, RngHandle};

/// Every front sample is drawn from this seed so all runs of a process, and
/// all processes, score against the same reference set.
pub const FRONT_SEED: u64 = 0x5eed_f207;

type Cell = Arc<OnceLock<Arc<[ObjectiveVector]>>>;

fn cache() -> &'static Mutex<HashMap<(String, usize), Cell>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, usize), Cell>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The sample of `size` front points for `problem`, built once per process.
/// Concurrent callers for the same key wait for the first to finish.
pub fn front_sample(problem: &Benchmark, size: usize) -> Arc<[ObjectiveVector]> {
    let cell = {
        let mut map = cache().lock().expect("front cache poisoned");
        map.entry((problem.name().to_string(), size)).or_default().clone()
    };
    cell.get_or_init(|| {
        problem
            .sample_front(size, &mut RngHandle::new(FRONT_SEED))
            .into()
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use moseed_core::problems::benchmark;

    #[test]
    fn built_once_and_shared() {
        let p = benchmark("zdt3").unwrap();
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let p = p.clone();
                std::thread::spawn(move || front_sample(&p, 777))
            })
            .collect();
        let samples: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for s in &samples {
            assert!(Arc::ptr_eq(s, &samples[0]));
        }
        assert_eq!(samples[0].len(), 777);
        assert!(!Arc::ptr_eq(&front_sample(&p, 778), &samples[0]));
    }
}
