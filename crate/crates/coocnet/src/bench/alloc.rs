//! Allocation tracking for peak-memory measurement.
//!
//! [`TrackingAllocator`] wraps the system allocator and maintains two
//! process-wide counters: live heap bytes and a resettable high-water mark.
//! The library never installs it; binaries that want memory measurements
//! opt in with
//!
//! ```ignore
//! #[global_allocator]
//! static ALLOC: coocnet::bench::TrackingAllocator = coocnet::bench::TrackingAllocator;
//! ```
//!
//! The counters are plain relaxed atomics, so the hook costs two atomic
//! operations per allocation and allocates nothing itself. Measurement
//! validity is single-threaded by contract: concurrent allocation from
//! other threads lands in the same counters.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Flipped on the first allocation that passes through the hook; proves the
/// hook is really the process allocator.
static INSTALLED: AtomicBool = AtomicBool::new(false);
/// Live heap bytes (allocated minus freed).
static CURRENT: AtomicU64 = AtomicU64::new(0);
/// High-water mark of `CURRENT` since the last reset.
static PEAK: AtomicU64 = AtomicU64::new(0);

/// System-allocator wrapper that counts live bytes and tracks their peak.
pub struct TrackingAllocator;

fn on_alloc(size: usize) {
    INSTALLED.store(true, Ordering::Relaxed);
    let now = CURRENT.fetch_add(size as u64, Ordering::Relaxed) + size as u64;
    PEAK.fetch_max(now, Ordering::Relaxed);
}

fn on_free(size: usize) {
    CURRENT.fetch_sub(size as u64, Ordering::Relaxed);
}

unsafe impl GlobalAlloc for TrackingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let ptr = unsafe { System.alloc(layout) };
        if !ptr.is_null() {
            on_alloc(layout.size());
        }
        ptr
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let ptr = unsafe { System.alloc_zeroed(layout) };
        if !ptr.is_null() {
            on_alloc(layout.size());
        }
        ptr
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        on_free(layout.size());
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let new_ptr = unsafe { System.realloc(ptr, layout, new_size) };
        if !new_ptr.is_null() {
            // account the net change only; the transient old+new overlap
            // inside the allocator is not "net bytes allocated"
            if new_size >= layout.size() {
                on_alloc(new_size - layout.size());
            } else {
                on_free(layout.size() - new_size);
            }
        }
        new_ptr
    }
}

/// Whether any allocation has passed through [`TrackingAllocator`], i.e.
/// whether it is the process global allocator.
pub fn hook_installed() -> bool {
    INSTALLED.load(Ordering::Relaxed)
}

pub(crate) fn live_bytes() -> u64 {
    CURRENT.load(Ordering::Relaxed)
}

pub(crate) fn reset_peak(to: u64) {
    PEAK.store(to, Ordering::Relaxed);
}

pub(crate) fn peak_bytes() -> u64 {
    PEAK.load(Ordering::Relaxed)
}
