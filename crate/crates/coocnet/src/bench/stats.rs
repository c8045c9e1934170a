//! Rank-based significance tests for benchmark samples.
//!
//! Two non-parametric tests with the conventions fixed as follows so
//! results are comparable across runs and implementations:
//!
//! * Wilcoxon signed-rank (paired): differences `x - y`, zero differences
//!   dropped, midranks for tied magnitudes, statistic `W = min(W+, W-)`.
//! * Mann-Whitney U (independent): pooled midranks, `U = min(U_a, U_b)`.
//!
//! Both report exact two-sided p-values when the null space is small
//! enough to enumerate (all `2^k` sign assignments for Wilcoxon with
//! `k <= 20`; all `C(n, n_a) <= 100_000` group assignments for
//! Mann-Whitney) and fall back to the normal approximation with tie and
//! continuity corrections otherwise. Ranks are handled as doubled integers
//! so midranks never touch floating point until the final statistic.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

/// Largest number of nonzero differences for which the Wilcoxon p-value is
/// computed by exact enumeration.
pub const WILCOXON_EXACT_MAX_N: usize = 20;

/// Largest number of group assignments for which the Mann-Whitney p-value
/// is computed by exact enumeration.
pub const MANN_WHITNEY_EXACT_MAX_COMBOS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "wilcoxon")]
    Wilcoxon,
    #[serde(rename = "mann-whitney")]
    MannWhitney,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "normal-approximation")]
    NormalApprox,
}

/// Outcome of one significance test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    /// Two-sided p-value, always in (0, 1].
    pub p_value: f64,
    pub method: Method,
    pub mode: Mode,
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("test requires non-empty samples")]
    EmptySample,
    #[error("paired test requires equal lengths, got {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("all paired differences are zero; no signal to test")]
    AllZeroDifferences,
}

/// Paired Wilcoxon signed-rank test on samples `x` and `y`.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut diffs: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(StatsError::AllZeroDifferences);
    }
    diffs.sort_unstable_by(|a, b| a.abs().total_cmp(&b.abs()));
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (dranks, ties) = doubled_midranks(&magnitudes);

    let k = diffs.len();
    let dw_plus: u64 = diffs
        .iter()
        .zip(&dranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, &r)| r)
        .sum();
    let total = (k as u64) * (k as u64 + 1);
    let dw = dw_plus.min(total - dw_plus);
    let statistic = dw as f64 / 2.0;

    if k <= WILCOXON_EXACT_MAX_N {
        Ok(TestResult {
            statistic,
            p_value: wilcoxon_exact_p(&dranks, dw),
            method: Method::Wilcoxon,
            mode: Mode::Exact,
        })
    } else {
        Ok(TestResult {
            statistic,
            p_value: wilcoxon_approx_p(statistic, k, &ties),
            method: Method::Wilcoxon,
            mode: Mode::NormalApprox,
        })
    }
}

/// Independent two-sample Mann-Whitney U test.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_unstable_by(|p, q| p.0.total_cmp(&q.0));
    let values: Vec<f64> = pooled.iter().map(|p| p.0).collect();
    let (dranks, ties) = doubled_midranks(&values);

    let d_ra: u64 = pooled
        .iter()
        .zip(&dranks)
        .filter(|((_, in_a), _)| *in_a)
        .map(|(_, &r)| r)
        .sum();
    let d_ua = d_ra - (na as u64) * (na as u64 + 1);
    let d_u = d_ua.min(2 * (na as u64) * (nb as u64) - d_ua);
    let statistic = d_u as f64 / 2.0;

    let ns = na.min(nb);
    if binomial_capped(n as u64, ns as u64, MANN_WHITNEY_EXACT_MAX_COMBOS)
        <= MANN_WHITNEY_EXACT_MAX_COMBOS
    {
        Ok(TestResult {
            statistic,
            p_value: mann_whitney_exact_p(&dranks, ns, 2 * (na as u64) * (nb as u64), d_u),
            method: Method::MannWhitney,
            mode: Mode::Exact,
        })
    } else {
        Ok(TestResult {
            statistic,
            p_value: mann_whitney_approx_p(statistic, na, nb, &ties),
            method: Method::MannWhitney,
            mode: Mode::NormalApprox,
        })
    }
}

/// Doubled midranks for already-sorted values, plus tie group sizes.
/// Element at 0-based positions `i..j` (one tie group) gets doubled rank
/// `i + j + 1`, i.e. twice the average of 1-based ranks `i+1..=j`.
fn doubled_midranks(sorted: &[f64]) -> (Vec<u64>, Vec<u64>) {
    let n = sorted.len();
    let mut ranks = vec![0u64; n];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && sorted[j] == sorted[i] {
            j += 1;
        }
        let doubled = (i + j + 1) as u64;
        for r in &mut ranks[i..j] {
            *r = doubled;
        }
        ties.push((j - i) as u64);
        i = j;
    }
    (ranks, ties)
}

/// Exact two-sided p for Wilcoxon: distribution of the doubled positive
/// rank sum over all `2^k` sign assignments, by subset-sum counting.
fn wilcoxon_exact_p(dranks: &[u64], dw_obs: u64) -> f64 {
    let total: u64 = dranks.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0u64;
    for &r in dranks {
        reach += r;
        let mut s = reach;
        while s >= r {
            counts[s as usize] += counts[(s - r) as usize];
            s -= 1;
        }
    }
    let below: u64 = counts[..=dw_obs as usize].iter().sum();
    let all = (1u64) << dranks.len();
    (2.0 * below as f64 / all as f64).min(1.0)
}

fn wilcoxon_approx_p(statistic: f64, k: usize, ties: &[u64]) -> f64 {
    let kf = k as f64;
    let mean = kf * (kf + 1.0) / 4.0;
    let tie_term: f64 = ties
        .iter()
        .map(|&t| {
            let t = t as f64;
            (t * t * t - t) / 48.0
        })
        .sum();
    let var = kf * (kf + 1.0) * (2.0 * kf + 1.0) / 24.0 - tie_term;
    two_sided_normal_p(statistic, mean, var)
}

/// Exact two-sided p for Mann-Whitney: iterate every assignment of the
/// smaller group's positions among the pooled ranks and count assignments
/// whose `min(U_a, U_b)` falls at or below the observed one. Counting the
/// min statistic covers both tails directly, so no doubling is applied;
/// with ties the two one-sided tails differ and doubling either one would
/// break label symmetry. In tie-free data this equals the classical
/// "double the smaller tail" convention.
fn mann_whitney_exact_p(dranks: &[u64], ns: usize, d_u_total: u64, d_u_obs: u64) -> f64 {
    let n = dranks.len();
    let offset = (ns as u64) * (ns as u64 + 1);
    let mut picks: Vec<usize> = (0..ns).collect();
    let mut hits = 0u64;
    let mut combos = 0u64;
    loop {
        combos += 1;
        let d_r: u64 = picks.iter().map(|&i| dranks[i]).sum();
        let d_u_side = d_r - offset;
        if d_u_side.min(d_u_total - d_u_side) <= d_u_obs {
            hits += 1;
        }
        // advance to the next combination in lexicographic order
        let mut i = ns;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if picks[i] != i + n - ns {
                picks[i] += 1;
                for j in (i + 1)..ns {
                    picks[j] = picks[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    hits as f64 / combos as f64
}

fn mann_whitney_approx_p(statistic: f64, na: usize, nb: usize, ties: &[u64]) -> f64 {
    let (naf, nbf) = (na as f64, nb as f64);
    let n = naf + nbf;
    let tie_sum: f64 = ties
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let mean = naf * nbf / 2.0;
    let var = naf * nbf / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    two_sided_normal_p(statistic, mean, var)
}

/// Two-sided p from the normal approximation with continuity correction.
/// The statistic is always the min side, so the correction moves it half a
/// step toward the mean. Zero variance (fully tied data) carries no
/// evidence against the null.
fn two_sided_normal_p(statistic: f64, mean: f64, var: f64) -> f64 {
    if var <= 0.0 {
        return 1.0;
    }
    let z = (statistic - mean + 0.5) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * normal.cdf(z)).min(1.0)
}

/// `C(n, k)`, saturating just above `cap` so callers can compare cheaply.
fn binomial_capped(n: u64, k: u64, cap: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn wilcoxon_all_positive_diffs() {
        let r = wilcoxon_signed_rank(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_close(r.p_value, 0.25);
        assert_eq!(r.method, Method::Wilcoxon);
        assert_eq!(r.mode, Mode::Exact);
    }

    #[test]
    fn wilcoxon_tied_magnitudes_midrank() {
        // diffs are +1 and -1: both get midrank 1.5
        let r = wilcoxon_signed_rank(&[2.0, 2.0], &[1.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 1.5);
        assert_close(r.p_value, 1.0);
    }

    #[test]
    fn wilcoxon_identical_samples_degenerate() {
        let err = wilcoxon_signed_rank(&[1.0, 2.0], &[1.0, 2.0]).unwrap_err();
        assert!(matches!(err, StatsError::AllZeroDifferences));
    }

    #[test]
    fn wilcoxon_drops_zero_diffs_only() {
        // one zero pair dropped, the rest behave as the k=3 example
        let r = wilcoxon_signed_rank(&[5.0, 2.0, 4.0, 6.0], &[5.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_close(r.p_value, 0.25);
    }

    #[test]
    fn wilcoxon_rejects_bad_shapes() {
        assert!(matches!(
            wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]).unwrap_err(),
            StatsError::LengthMismatch(1, 2)
        ));
        assert!(matches!(
            wilcoxon_signed_rank(&[], &[]).unwrap_err(),
            StatsError::EmptySample
        ));
    }

    #[test]
    fn wilcoxon_switches_to_normal_above_limit() {
        let n = WILCOXON_EXACT_MAX_N + 1;
        let x: Vec<f64> = (0..n).map(|i| (i + 2) as f64 * 1.37).collect();
        let y: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.mode, Mode::NormalApprox);
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
    }

    #[test]
    fn mann_whitney_separated_samples() {
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_close(r.p_value, 1.0 / 3.0);
        assert_eq!(r.method, Method::MannWhitney);
        assert_eq!(r.mode, Mode::Exact);
    }

    #[test]
    fn mann_whitney_identical_multisets() {
        let r = mann_whitney_u(&[5.0, 5.0], &[5.0, 5.0]).unwrap();
        assert_close(r.p_value, 1.0);
    }

    #[test]
    fn mann_whitney_single_observations() {
        let r = mann_whitney_u(&[1.0], &[2.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_close(r.p_value, 1.0);
    }

    #[test]
    fn mann_whitney_rejects_empty() {
        assert!(matches!(
            mann_whitney_u(&[], &[1.0]).unwrap_err(),
            StatsError::EmptySample
        ));
        assert!(matches!(
            mann_whitney_u(&[1.0], &[]).unwrap_err(),
            StatsError::EmptySample
        ));
    }

    #[test]
    fn mann_whitney_switches_to_normal_when_too_many_combos() {
        // C(22, 11) = 705,432 > 100,000
        let a: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..11).map(|i| i as f64 + 0.5).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.mode, Mode::NormalApprox);
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
    }

    #[test]
    fn binomial_capped_values() {
        assert_eq!(binomial_capped(4, 2, 100), 6);
        assert_eq!(binomial_capped(18, 9, 100_000), 48_620);
        assert_eq!(binomial_capped(22, 11, 100_000), 100_001);
        assert_eq!(binomial_capped(5, 0, 100), 1);
    }

    // Independent oracles. The Wilcoxon oracle ranks by counting
    // comparisons and enumerates sign assignments as bitmasks; the
    // Mann-Whitney oracle uses the direct pair-count definition of U and
    // enumerates group assignments recursively. Neither shares code with
    // the implementation above.

    fn oracle_ranks(magnitudes: &[f64]) -> Vec<f64> {
        magnitudes
            .iter()
            .map(|&v| {
                let less = magnitudes.iter().filter(|&&u| u < v).count();
                let equal = magnitudes.iter().filter(|&&u| u == v).count();
                less as f64 + (equal as f64 + 1.0) / 2.0
            })
            .collect()
    }

    fn oracle_wilcoxon(diffs: &[f64]) -> (f64, f64) {
        let k = diffs.len();
        let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
        let ranks = oracle_ranks(&magnitudes);
        let w_plus: f64 = diffs
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| **d > 0.0)
            .map(|(_, r)| *r)
            .sum();
        let total: f64 = ranks.iter().sum();
        let w = w_plus.min(total - w_plus);
        let mut at_or_below = 0u64;
        for mask in 0u64..(1 << k) {
            let s: f64 = ranks
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| *r)
                .sum();
            if s <= w + 1e-9 {
                at_or_below += 1;
            }
        }
        (w, (2.0 * at_or_below as f64 / (1u64 << k) as f64).min(1.0))
    }

    fn oracle_u_of(a: &[f64], b: &[f64]) -> f64 {
        let mut u = 0.0;
        for &x in a {
            for &y in b {
                if x > y {
                    u += 1.0;
                } else if x == y {
                    u += 0.5;
                }
            }
        }
        u
    }

    fn oracle_mann_whitney(a: &[f64], b: &[f64]) -> (f64, f64) {
        let ua = oracle_u_of(a, b);
        let ub = oracle_u_of(b, a);
        let u = ua.min(ub);
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let mut hits = 0u64;
        let mut combos = 0u64;
        let mut chosen = Vec::new();
        assignments(&pooled, a.len(), 0, &mut chosen, &mut |group_a, group_b| {
            combos += 1;
            let u_a = oracle_u_of(group_a, group_b);
            let u_b = oracle_u_of(group_b, group_a);
            if u_a.min(u_b) <= u + 1e-9 {
                hits += 1;
            }
        });
        (u, hits as f64 / combos as f64)
    }

    fn assignments(
        pool: &[f64],
        na: usize,
        from: usize,
        chosen: &mut Vec<usize>,
        visit: &mut impl FnMut(&[f64], &[f64]),
    ) {
        if chosen.len() == na {
            let group_a: Vec<f64> = chosen.iter().map(|&i| pool[i]).collect();
            let group_b: Vec<f64> = (0..pool.len())
                .filter(|i| !chosen.contains(i))
                .map(|i| pool[i])
                .collect();
            visit(&group_a, &group_b);
            return;
        }
        let needed = na - chosen.len();
        for i in from..=(pool.len() - needed) {
            chosen.push(i);
            assignments(pool, na, i + 1, chosen, visit);
            chosen.pop();
        }
    }

    fn small_values() -> impl Strategy<Value = f64> {
        // small integer-ish grid: plenty of ties and clean float equality
        (-3i32..=3).prop_map(|v| v as f64 * 0.5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn wilcoxon_exact_matches_oracle(
            pairs in proptest::collection::vec((small_values(), small_values()), 1..=10)
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let diffs: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
            match wilcoxon_signed_rank(&x, &y) {
                Ok(r) => {
                    prop_assert_eq!(r.mode, Mode::Exact);
                    let (w, p) = oracle_wilcoxon(&diffs);
                    prop_assert!((r.statistic - w).abs() < 1e-9);
                    prop_assert!((r.p_value - p).abs() < 1e-9);
                    prop_assert!(r.p_value > 0.0 && r.p_value <= 1.0);
                }
                Err(e) => {
                    prop_assert!(diffs.is_empty(), "unexpected error {e:?}");
                }
            }
        }

        #[test]
        fn mann_whitney_exact_matches_oracle(
            a in proptest::collection::vec(small_values(), 1..=5),
            b in proptest::collection::vec(small_values(), 1..=5),
        ) {
            let r = mann_whitney_u(&a, &b).unwrap();
            prop_assert_eq!(r.mode, Mode::Exact);
            let (u, p) = oracle_mann_whitney(&a, &b);
            prop_assert!((r.statistic - u).abs() < 1e-9);
            prop_assert!((r.p_value - p).abs() < 1e-9);
            prop_assert!(r.p_value > 0.0 && r.p_value <= 1.0);
        }

        #[test]
        fn mann_whitney_symmetric_in_labels(
            a in proptest::collection::vec(small_values(), 1..=6),
            b in proptest::collection::vec(small_values(), 1..=6),
        ) {
            let r1 = mann_whitney_u(&a, &b).unwrap();
            let r2 = mann_whitney_u(&b, &a).unwrap();
            prop_assert_eq!(r1.p_value, r2.p_value);
            prop_assert_eq!(r1.statistic, r2.statistic);
        }

        #[test]
        fn wilcoxon_invariant_under_pair_order(
            pairs in proptest::collection::vec((small_values(), small_values()), 2..=8),
            swap_a in 0usize..8,
            swap_b in 0usize..8,
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let mut shuffled = pairs.clone();
            shuffled.swap(swap_a % pairs.len(), swap_b % pairs.len());
            let xs: Vec<f64> = shuffled.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = shuffled.iter().map(|p| p.1).collect();
            match (wilcoxon_signed_rank(&x, &y), wilcoxon_signed_rank(&xs, &ys)) {
                (Ok(r1), Ok(r2)) => {
                    prop_assert_eq!(r1.statistic, r2.statistic);
                    prop_assert_eq!(r1.p_value, r2.p_value);
                }
                (Err(_), Err(_)) => {}
                (r1, r2) => prop_assert!(false, "divergent outcomes {r1:?} vs {r2:?}"),
            }
        }

        #[test]
        fn approx_close_to_exact_at_wilcoxon_boundary(seed_vals in proptest::collection::vec(-1000i64..1000, 20)) {
            // distinct integer-valued diffs: tie-free by construction
            let mut diffs: Vec<f64> = Vec::new();
            for (i, v) in seed_vals.iter().enumerate() {
                let sign = if *v >= 0 { 1.0 } else { -1.0 };
                diffs.push(sign * (1000.0 * (i as f64 + 1.0) + (*v as f64).abs()));
            }
            let x: Vec<f64> = diffs.clone();
            let y = vec![0.0; diffs.len()];
            let exact = wilcoxon_signed_rank(&x, &y).unwrap();
            prop_assert_eq!(exact.mode, Mode::Exact);
            let approx_p = wilcoxon_approx_p(exact.statistic, diffs.len(), &vec![1; diffs.len()]);
            prop_assert!(
                (exact.p_value - approx_p).abs() <= 0.03,
                "exact {} vs approx {}", exact.p_value, approx_p
            );
        }

        #[test]
        fn approx_close_to_exact_at_mann_whitney_boundary(
            a_vals in proptest::collection::vec(0u32..1_000_000, 9),
            b_vals in proptest::collection::vec(0u32..1_000_000, 9),
        ) {
            // C(18, 9) = 48,620: exact, but close to the cutoff
            let a: Vec<f64> = a_vals.iter().enumerate().map(|(i, v)| *v as f64 + i as f64 * 1e-7 + 0.1).collect();
            let b: Vec<f64> = b_vals.iter().enumerate().map(|(i, v)| *v as f64 + i as f64 * 1e-7 + 0.2).collect();
            let exact = mann_whitney_u(&a, &b).unwrap();
            prop_assert_eq!(exact.mode, Mode::Exact);
            let approx_p = mann_whitney_approx_p(exact.statistic, a.len(), b.len(), &vec![1; a.len() + b.len()]);
            prop_assert!(
                (exact.p_value - approx_p).abs() <= 0.03,
                "exact {} vs approx {}", exact.p_value, approx_p
            );
        }
    }
}
