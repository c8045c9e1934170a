//! This binary deliberately does NOT install the tracking allocator, so
//! measurement must refuse to run rather than silently report zeros.

use coocnet::{measure_run, BenchError};

#[test]
fn measure_run_requires_the_allocation_hook() {
    let err = measure_run(|| 42u32).unwrap_err();
    assert!(
        matches!(err, BenchError::HookNotInstalled),
        "expected HookNotInstalled, got {err:?}"
    );
}
