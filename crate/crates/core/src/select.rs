//! Order-statistic selection for picking the best-ranked `m` keys.
//!
//! Keys are `(value, id)` pairs ranked by larger value first, then smaller
//! id; ids are assumed distinct, so the ranking is a strict total order and
//! the selected set is independent of pivot luck. The main entry point is
//! an introselect: randomized pivots with a median-of-medians fallback once
//! the depth budget runs out, so the worst case stays linear.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::graph::Weight;

pub type Key = (Weight, usize);

/// True when `a` ranks strictly before `b`.
#[inline]
fn ranks_before(a: Key, b: Key) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Partitions `keys` around the pivot at `pivot_idx`; returns the pivot's
/// final index. Everything before it ranks before the pivot.
fn partition(keys: &mut [Key], pivot_idx: usize) -> usize {
    let last = keys.len() - 1;
    keys.swap(pivot_idx, last);
    let pivot = keys[last];
    let mut store = 0;
    for i in 0..last {
        if ranks_before(keys[i], pivot) {
            keys.swap(i, store);
            store += 1;
        }
    }
    keys.swap(store, last);
    store
}

/// Index of the median-of-medians pivot within `keys`.
fn mom_pivot(keys: &mut [Key]) -> usize {
    if keys.len() <= 5 {
        insertion_sort(keys);
        return keys.len() / 2;
    }
    let mut medians = 0;
    for group in 0..keys.len() / 5 {
        let start = group * 5;
        insertion_sort_range(keys, start, start + 5);
        keys.swap(medians, start + 2);
        medians += 1;
    }
    select_in_place(&mut keys[..medians], medians / 2, true);
    medians / 2
}

fn insertion_sort(keys: &mut [Key]) {
    let len = keys.len();
    insertion_sort_range(keys, 0, len);
}

fn insertion_sort_range(keys: &mut [Key], lo: usize, hi: usize) {
    for i in lo + 1..hi {
        let mut j = i;
        while j > lo && ranks_before(keys[j], keys[j - 1]) {
            keys.swap(j, j - 1);
            j -= 1;
        }
    }
}

fn select_in_place(keys: &mut [Key], k: usize, force_mom: bool) {
    let mut slice: &mut [Key] = keys;
    let mut k = k;
    let mut budget = 2 * (usize::BITS - slice.len().leading_zeros()) as usize + 8;
    let mut rng = SmallRng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ slice.len() as u64);
    loop {
        if slice.len() <= 8 {
            insertion_sort(slice);
            return;
        }
        let pivot_idx = if force_mom || budget == 0 {
            mom_pivot(slice)
        } else {
            budget -= 1;
            rng.gen_range(0..slice.len())
        };
        let p = partition(slice, pivot_idx);
        match k.cmp(&p) {
            std::cmp::Ordering::Equal => return,
            std::cmp::Ordering::Less => slice = &mut { slice }[..p],
            std::cmp::Ordering::Greater => {
                slice = &mut { slice }[p + 1..];
                k -= p + 1;
            }
        }
    }
}

/// Rearranges `keys` so the `m` best-ranked keys occupy `keys[..m]`
/// (internally unordered). Expected linear time via randomized pivots with
/// an automatic worst-case-linear fallback.
pub fn select_top(keys: &mut [Key], m: usize) {
    assert!(m <= keys.len());
    if m == 0 || m == keys.len() {
        return;
    }
    select_in_place(keys, m - 1, false);
}

/// Same contract as [`select_top`] but always drives pivots by
/// median-of-medians, exercising the deterministic worst-case path.
pub fn select_top_mom(keys: &mut [Key], m: usize) {
    assert!(m <= keys.len());
    if m == 0 || m == keys.len() {
        return;
    }
    select_in_place(keys, m - 1, true);
}
