//! Execution strategy for the data-parallel loops (closure saturation per
//! source node, CSV row scans, batch verification).
//!
//! With the `parallel` feature the `Parallel` strategy runs on rayon's global
//! pool; without it every strategy degrades to the sequential loop.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Sums `f` over a slice.
pub fn sum_by<T, F>(exec: Exec, items: &[T], f: F) -> (u64, u64)
where
    T: Sync,
    F: Fn(&T) -> (u64, u64) + Sync + Send,
{
    let add = |a: (u64, u64), b: (u64, u64)| (a.0 + b.0, a.1 + b.1);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).reduce(|| (0, 0), add),
        _ => items.iter().map(f).fold((0, 0), add),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Exec::Sequential, &xs, |x| x * 2);
        let par = map(Exec::Parallel, &xs, |x| x * 2);
        assert_eq!(seq, par);
        let f = |x: &u64| (x % 3, 1);
        assert_eq!(sum_by(Exec::Sequential, &xs, f), sum_by(Exec::Parallel, &xs, f));
    }
}
