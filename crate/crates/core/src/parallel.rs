//! Grid fan-out. With the `parallel` feature, points are evaluated on a rayon
//! pool; without it every mode runs sequentially. Output order always follows
//! input order.

/// How many evaluators a grid map may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    #[default]
    Sequential,
    /// `0` means the rayon default (one thread per core).
    Threads(usize),
}

impl Parallelism {
    pub fn from_threads(threads: usize) -> Self {
        if threads == 1 {
            Parallelism::Sequential
        } else {
            Parallelism::Threads(threads)
        }
    }
}

/// Applies `f` to every item, returning results in input order.
pub fn par_map<T, R, F>(items: &[T], par: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match par {
        Parallelism::Sequential => items.iter().map(f).collect(),
        Parallelism::Threads(n) => threaded(items, n, f),
    }
}

#[cfg(feature = "parallel")]
fn threaded<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    if threads == 0 {
        return run();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(run),
        Err(err) => {
            log::warn!("thread pool unavailable ({err}), running sequentially");
            items.iter().map(&f).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn threaded<T, R, F>(items: &[T], _threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..500).collect();
        let seq = par_map(&items, Parallelism::Sequential, |x| x * x);
        let par = par_map(&items, Parallelism::Threads(3), |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[499], 499 * 499);
    }
}
