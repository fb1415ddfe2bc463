//! Deterministic enumeration of dyadic points: interval extremes first, then
//! midpoints of ever finer levels.

/// The `i`-th point of `0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...`.
pub fn dyadic_value(i: u64) -> f64 {
    match i {
        0 => 0.0,
        1 => 1.0,
        _ => {
            let m = i - 1;
            let k = 64 - m.leading_zeros(); // level, m in [2^(k-1), 2^k)
            let j = m - (1u64 << (k - 1));
            (2 * j + 1) as f64 / (k as f64).exp2()
        }
    }
}

/// Level of index `i`: 0 for the two extremes, `k` for the odd multiples of
/// `2^-k`.
pub fn dyadic_level(i: u64) -> u32 {
    if i < 2 {
        0
    } else {
        64 - (i - 1).leading_zeros()
    }
}

fn first_index(level: u32) -> u64 {
    if level == 0 {
        0
    } else {
        (1u64 << (level - 1)) + 1
    }
}

fn level_size(level: u32) -> u128 {
    if level == 0 {
        2
    } else {
        1u128.checked_shl(level - 1).unwrap_or(u128::MAX)
    }
}

/// Number of index tuples in `dims` dimensions whose levels sum to `total`.
fn tuples_with_level_sum(dims: usize, total: u32) -> u128 {
    // ways[t] for the dimensions processed so far
    let mut ways = vec![0u128; total as usize + 1];
    ways[0] = 1;
    for _ in 0..dims {
        let mut next = vec![0u128; total as usize + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for l in 0..=(total as usize - t) {
                let add = w.saturating_mul(level_size(l as u32));
                next[t + l] = next[t + l].saturating_add(add);
            }
        }
        ways = next;
    }
    ways[total as usize]
}

/// The `n`-th tuple of per-dimension dyadic indices, ordered by total level
/// and lexicographically within a level. In one dimension this is the plain
/// sequence `0, 1, 2, ...`.
pub fn nth_grid_point(dims: usize, n: u64) -> Vec<u64> {
    if dims == 0 {
        return Vec::new();
    }
    let mut total = 0u32;
    let mut rem = n as u128;
    loop {
        let count = tuples_with_level_sum(dims, total);
        if rem < count {
            break;
        }
        rem -= count;
        total += 1;
    }
    let mut out = Vec::with_capacity(dims);
    let mut left = total;
    for d in 0..dims {
        let rest_dims = dims - d - 1;
        if rest_dims == 0 {
            // the last level is forced
            out.push(first_index(left) + rem as u64);
            break;
        }
        for level in 0..=left {
            let tail = tuples_with_level_sum(rest_dims, left - level);
            let block = level_size(level).saturating_mul(tail);
            if rem < block {
                out.push(first_index(level) + (rem / tail) as u64);
                rem %= tail;
                left -= level;
                break;
            }
            rem -= block;
        }
    }
    out
}
