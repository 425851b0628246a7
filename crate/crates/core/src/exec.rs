//! Thread control for line-wise operator application.
//!
//! Serial by default. Every parallel code path processes independent grid
//! lines with the same per-line arithmetic as the serial path, so results do
//! not depend on the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use ndarray::{ArrayD, ArrayViewD, Axis, Zip};

static THREADS: AtomicUsize = AtomicUsize::new(1);
static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// Caps line-wise parallelism at `n` threads. `n <= 1` restores serial
/// execution. The pool is created on the first call with `n > 1` and keeps
/// that size for the life of the process.
pub fn set_threads(n: usize) {
    if n > 1 {
        let _ = POOL.get_or_init(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build thread pool")
        });
    }
    THREADS.store(n.max(1), Ordering::SeqCst);
}

pub fn threads() -> usize {
    THREADS.load(Ordering::SeqCst)
}

/// Applies `f` to every lane of `input` along `axis`, writing the
/// corresponding lane of the result. `f` receives contiguous copies.
pub(crate) fn map_lanes<F>(input: &ArrayViewD<'_, f64>, axis: usize, f: F) -> ArrayD<f64>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let mut out = ArrayD::<f64>::zeros(input.raw_dim());
    let len = input.shape()[axis];
    let kernel = |lane_in: ndarray::ArrayView1<'_, f64>, mut lane_out: ndarray::ArrayViewMut1<'_, f64>| {
        let src: Vec<f64> = lane_in.iter().copied().collect();
        let mut dst = vec![0.0; len];
        f(&src, &mut dst);
        for (o, v) in lane_out.iter_mut().zip(dst) {
            *o = v;
        }
    };
    let zip = Zip::from(input.lanes(Axis(axis))).and(out.lanes_mut(Axis(axis)));
    match POOL.get() {
        Some(pool) if threads() > 1 => pool.install(|| zip.par_for_each(kernel)),
        _ => zip.for_each(kernel),
    }
    out
}
