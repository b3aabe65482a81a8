//! Order-preserving parallel map; sequential when the `parallel` feature is
//! off (e.g. on wasm).

#[cfg(feature = "parallel")]
pub(crate) fn map_init<S, T, I, F>(len: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map_init(init, f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_init<S, T, I, F>(len: usize, init: I, f: F) -> Vec<T>
where
    I: Fn() -> S,
    F: Fn(&mut S, usize) -> T,
{
    let mut state = init();
    (0..len).map(|i| f(&mut state, i)).collect()
}
