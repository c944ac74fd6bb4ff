//! Brute-force reference implementations, kept deliberately independent of
//! the library's bit-vector and search machinery: sets are `BTreeSet`s,
//! addition is explicit mixed-radix arithmetic, and maximization is full
//! enumeration over bit masks.

use std::collections::BTreeSet;

pub fn naive_add(factors: &[u64], i: u64, j: u64) -> u64 {
    let mut strides = vec![1u64; factors.len()];
    for t in (0..factors.len().saturating_sub(1)).rev() {
        strides[t] = strides[t + 1] * factors[t + 1];
    }
    let mut out = 0;
    for (&f, &s) in factors.iter().zip(&strides) {
        let ci = i / s % f;
        let cj = j / s % f;
        out += (ci + cj) % f * s;
    }
    out
}

pub fn naive_sumset(factors: &[u64], a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            out.insert(naive_add(factors, x, y));
        }
    }
    out
}

pub fn naive_iterated(factors: &[u64], a: &BTreeSet<u64>, k: u32) -> BTreeSet<u64> {
    assert!(k >= 1);
    let mut acc = a.clone();
    for _ in 1..k {
        acc = naive_sumset(factors, &acc, a);
    }
    acc
}

/// `kA + (k-1)C` with the zero-fold convention `0C = {0}`.
pub fn naive_shifted_iterated(
    factors: &[u64],
    a: &BTreeSet<u64>,
    c: &BTreeSet<u64>,
    k: u32,
) -> BTreeSet<u64> {
    let folds = naive_iterated(factors, a, k);
    if k == 1 {
        return folds;
    }
    let shifts = naive_iterated(factors, c, k - 1);
    naive_sumset(factors, &folds, &shifts)
}

pub fn naive_is_shifted_sum_free(
    factors: &[u64],
    a: &BTreeSet<u64>,
    c: &BTreeSet<u64>,
    k: u32,
    l: u32,
) -> bool {
    if a.is_empty() {
        return true;
    }
    let lhs = naive_shifted_iterated(factors, a, c, k);
    let rhs = naive_shifted_iterated(factors, a, c, l);
    lhs.is_disjoint(&rhs)
}

pub fn mask_to_set(mask: u64, order: u64) -> BTreeSet<u64> {
    (0..order).filter(|&i| (mask >> i) & 1 != 0).collect()
}

/// First differing element decides; the mask without it is smaller. This is
/// the order in which the library breaks witness ties.
pub fn bit_pattern_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let bit = (a ^ b).trailing_zeros();
    (a >> bit) & 1 == 0
}

/// Exhaustive maximum over all `2^order` subsets. Returns the cardinality
/// and the bit-pattern-minimal maximum witness.
pub fn naive_max_shifted(
    factors: &[u64],
    c: &BTreeSet<u64>,
    k: u32,
    l: u32,
) -> (u64, BTreeSet<u64>) {
    let order: u64 = factors.iter().product();
    assert!(order <= 22, "enumeration oracle is for small groups only");
    let mut best_card = 0u64;
    let mut best_mask = 0u64;
    for mask in 0..(1u64 << order) {
        let a = mask_to_set(mask, order);
        let card = a.len() as u64;
        if !naive_is_shifted_sum_free(factors, &a, c, k, l) {
            continue;
        }
        if card > best_card || (card == best_card && bit_pattern_less(mask, best_mask)) {
            best_card = card;
            best_mask = mask;
        }
    }
    (best_card, mask_to_set(best_mask, order))
}

pub fn naive_max_sum_free(factors: &[u64], k: u32, l: u32) -> (u64, BTreeSet<u64>) {
    let zero: BTreeSet<u64> = [0u64].into_iter().collect();
    naive_max_shifted(factors, &zero, k, l)
}
