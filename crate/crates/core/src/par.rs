//! Order-preserving data parallelism, sequential without the `parallel`
//! feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

pub fn filter<T: Send>(items: Vec<T>, keep: impl Fn(&T) -> bool + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().filter(|x| keep(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().filter(|x| keep(x)).collect()
    }
}
