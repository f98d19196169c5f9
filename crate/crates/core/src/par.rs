//! Thin shim over rayon so the crate builds with a sequential fallback when
//! the `parallel` feature is disabled.

/// Maps `f` over `items`, preserving order. Runs on a rayon pool of
/// `jobs` threads when the `parallel` feature is enabled and `jobs != 1`
/// (`jobs == 0` uses all available threads); otherwise runs sequentially.
pub fn map_indexed<T, U, F>(items: &[T], jobs: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if jobs != 1 {
            let run = || items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
            return if jobs == 0 {
                run()
            } else {
                match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                    Ok(pool) => pool.install(run),
                    Err(_) => run(),
                }
            };
        }
    }
    let _ = jobs;
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map_indexed(&xs, 1, |i, x| x * 3 + i as u64);
        let par = map_indexed(&xs, 0, |i, x| x * 3 + i as u64);
        assert_eq!(seq, par);
    }
}
