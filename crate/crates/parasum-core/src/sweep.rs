//! Trial engine for the property sweeps.
//!
//! Trials are embarrassingly parallel: each derives its own RNG stream from
//! `(seed, trial index)`, so results are order-independent. With the
//! `parallel` feature (on by default) trials run on the rayon pool;
//! without it they run sequentially. `run_trials_seq` is always available
//! for single-threaded timing.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `f` over `0..trials`, sequentially, preserving order.
pub fn run_trials_seq<R, F>(trials: u64, f: F) -> Vec<R>
where
    F: Fn(u64) -> R,
{
    (0..trials).map(f).collect()
}

/// Evaluate `f` over `0..trials` on the rayon pool, preserving order.
#[cfg(feature = "parallel")]
pub fn run_trials_par<R, F>(trials: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

/// Default dispatch: parallel when the feature is enabled.
#[cfg(feature = "parallel")]
pub fn run_trials<R, F>(trials: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    run_trials_par(trials, f)
}

/// Default dispatch: sequential fallback without the `parallel` feature.
#[cfg(not(feature = "parallel"))]
pub fn run_trials<R, F>(trials: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    run_trials_seq(trials, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let out = run_trials(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: u64| {
            let mut rng = crate::gen::trial_rng(99, i);
            let m = crate::gen::matrix_gaussian(&mut rng, 4, 4);
            m.frobenius_norm()
        };
        let seq = run_trials_seq(32, f);
        let par = run_trials_par(32, f);
        // Bit-for-bit: each trial's computation is independent of ordering.
        assert_eq!(
            seq.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            par.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }
}
