//! Working precision for newly created [`Real`](super::Real) values.
//!
//! Arithmetic between existing values keeps the wider of the two operand
//! precisions; only constants, conversions and parsing consult the working
//! precision. It is a process-wide default that a thread may override for the
//! duration of a closure with [`with_bits`].

use std::cell::Cell;
use std::sync::atomic::{AtomicU32, Ordering};

pub const DEFAULT_BITS: u32 = 256;
pub const MIN_BITS: u32 = 53;

static GLOBAL_BITS: AtomicU32 = AtomicU32::new(DEFAULT_BITS);

thread_local! {
    static LOCAL_BITS: Cell<Option<u32>> = const { Cell::new(None) };
}

pub fn working_bits() -> u32 {
    LOCAL_BITS
        .with(Cell::get)
        .unwrap_or_else(|| GLOBAL_BITS.load(Ordering::Relaxed))
}

/// Sets the process-wide default. Threads inside [`with_bits`] are unaffected.
pub fn set_default_bits(bits: u32) {
    GLOBAL_BITS.store(bits.max(MIN_BITS), Ordering::Relaxed);
}

pub fn default_bits() -> u32 {
    GLOBAL_BITS.load(Ordering::Relaxed)
}

struct Restore(Option<u32>);

impl Drop for Restore {
    fn drop(&mut self) {
        LOCAL_BITS.with(|c| c.set(self.0));
    }
}

/// Runs `f` with the calling thread's working precision set to `bits`.
pub fn with_bits<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    let prev = LOCAL_BITS.with(|c| c.replace(Some(bits.max(MIN_BITS))));
    let _restore = Restore(prev);
    f()
}

/// Maps `f` over `items` on the rayon pool, carrying the caller's working
/// precision into every worker. Output order matches input order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    use rayon::prelude::*;
    let bits = working_bits();
    items.par_iter().map(|it| with_bits(bits, || f(it))).collect()
}
