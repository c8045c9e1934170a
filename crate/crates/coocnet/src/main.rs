use coocnet::TrackingAllocator;

// The binary opts in to the allocation hook so `coocnet bench` can report
// peak heap usage; the library itself never installs a global allocator.
#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

fn main() {
    std::process::exit(coocnet::cli::dispatch(std::env::args_os()));
}
