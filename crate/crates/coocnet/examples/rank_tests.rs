//! Run the paired and unpaired rank tests on small samples and show how
//! they switch from exact enumeration to the normal approximation.
//!
//!     cargo run --example rank_tests

use coocnet::{mann_whitney_u, wilcoxon_signed_rank};

fn main() {
    // Paired: the same five tasks timed under two configurations.
    let before = [12.4, 11.9, 13.1, 12.7, 12.2];
    let after = [10.1, 10.8, 10.5, 11.0, 9.9];
    let w = wilcoxon_signed_rank(&after, &before).expect("differences are nonzero");
    println!(
        "wilcoxon: statistic {:.1}, p = {:.4} ({:?} mode)",
        w.statistic, w.p_value, w.mode
    );

    // Unpaired: pooled samples from two independent groups.
    let group_a = [0.31, 0.27, 0.35, 0.29];
    let group_b = [0.45, 0.52, 0.48, 0.41, 0.50];
    let u = mann_whitney_u(&group_a, &group_b).expect("samples are non-empty");
    println!(
        "mann-whitney: statistic {:.1}, p = {:.4} ({:?} mode)",
        u.statistic, u.p_value, u.mode
    );

    // Larger samples exceed the exact-enumeration bounds and fall back to
    // the tie-corrected normal approximation.
    let big_a: Vec<f64> = (0..40).map(|i| (i % 7) as f64 + 0.1 * i as f64).collect();
    let big_b: Vec<f64> = (0..40).map(|i| (i % 5) as f64 + 0.11 * i as f64).collect();
    let approx = mann_whitney_u(&big_a, &big_b).expect("samples are non-empty");
    println!(
        "mann-whitney on 40 vs 40: statistic {:.1}, p = {:.4} ({:?} mode)",
        approx.statistic, approx.p_value, approx.mode
    );
    let paired = wilcoxon_signed_rank(&big_a, &big_b).expect("differences are nonzero");
    println!(
        "wilcoxon on 40 pairs: statistic {:.1}, p = {:.4} ({:?} mode)",
        paired.statistic, paired.p_value, paired.mode
    );
}
