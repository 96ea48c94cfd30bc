//! Upper bound on `dim A_k` in odd codimension from counting hair patterns.

/// Partitions of `x` into exactly `y` positive parts.
pub fn young_diagrams(x: usize, y: usize) -> u64 {
    fn go(x: usize, y: usize, max: usize) -> u64 {
        if y == 0 {
            return (x == 0) as u64;
        }
        if x < y {
            return 0;
        }
        (1..=max.min(x - (y - 1))).map(|first| go(x - first, y - 1, first)).sum()
    }
    go(x, y, x)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `1 + sum over 1 <= m <= k/2 of (m-1)! * N(k-m, m)`.
pub fn young_bound(k: usize) -> u64 {
    1 + (1..=k / 2).map(|m| factorial(m - 1) * young_diagrams(k - m, m)).sum::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds() {
        assert_eq!(young_bound(2), 2);
        assert_eq!(young_bound(3), 2);
        assert_eq!(young_bound(4), 3);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(young_diagrams(4, 2), 2);
        assert_eq!(young_diagrams(2, 3), 0);
        assert_eq!(young_diagrams(6, 3), 3);
    }
}
