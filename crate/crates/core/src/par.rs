//! Switch between rayon and plain iteration.
//!
//! Without the `parallel` feature every [`Execution`] runs sequentially.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

pub fn filter_slice<T, F>(exec: Execution, items: Vec<T>, keep: F) -> Vec<T>
where
    T: Send + Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().filter(|t| keep(t)).collect();
    }
    let _ = exec;
    items.into_iter().filter(|t| keep(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let a = map_range(Execution::Parallel, 100, |i| i * i);
        let b = map_range(Execution::Sequential, 100, |i| i * i);
        assert_eq!(a, b);
        let v: Vec<u32> = (0..50).collect();
        assert_eq!(
            filter_slice(Execution::Parallel, v.clone(), |x| x % 3 == 0),
            filter_slice(Execution::Sequential, v, |x| x % 3 == 0)
        );
    }
}
