//! Word-slice helpers for fixed-width adjacency rows.

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn test(row: &[u64], i: usize) -> bool {
    (row[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize) {
    row[i / 64] |= 1u64 << (i % 64);
}

#[inline]
pub(crate) fn clear(row: &mut [u64], i: usize) {
    row[i / 64] &= !(1u64 << (i % 64));
}

#[inline]
pub(crate) fn count(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
pub(crate) fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

/// Lowest set bit, if any.
#[inline]
pub(crate) fn first(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Mask with bits `0..n` set.
pub(crate) fn full(n: usize) -> Vec<u64> {
    let mut out = vec![u64::MAX; words_for(n)];
    let rem = n % 64;
    if rem != 0 {
        if let Some(last) = out.last_mut() {
            *last = (1u64 << rem) - 1;
        }
    }
    out
}

pub(crate) fn iter_ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut word = w;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * 64 + tz)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_mask_edges() {
        assert_eq!(full(0), Vec::<u64>::new());
        assert_eq!(full(3), vec![0b111]);
        assert_eq!(full(64), vec![u64::MAX]);
        assert_eq!(full(65), vec![u64::MAX, 1]);
    }

    #[test]
    fn iterates_across_words() {
        let mut row = vec![0u64; 3];
        for i in [0, 63, 64, 130] {
            set(&mut row, i);
        }
        assert_eq!(iter_ones(&row).collect::<Vec<_>>(), vec![0, 63, 64, 130]);
        assert_eq!(count(&row), 4);
        assert_eq!(first(&row), Some(0));
        clear(&mut row, 0);
        assert_eq!(first(&row), Some(63));
        assert!(test(&row, 130));
    }
}
