//! Party subsets as bitmasks.
//!
//! Party `i` (0-based) occupies bit `i`. A simplex is a nonempty subset;
//! its dimension is `size(mask) - 1`.

/// Subset of parties, bit `i` = party `i`.
pub type Subset = u32;

/// Number of parties in the subset.
pub fn size(mask: Subset) -> usize {
    mask.count_ones() as usize
}

/// Simplex dimension: |J| - 1. The empty mask (augmentation cell) has dimension -1.
pub fn dimension(mask: Subset) -> i32 {
    mask.count_ones() as i32 - 1
}

/// Full subset on `n` parties.
pub fn full(n: usize) -> Subset {
    assert!(n <= 31);
    (1u32 << n) - 1
}

pub fn contains(mask: Subset, party: usize) -> bool {
    mask >> party & 1 == 1
}

pub fn is_subset_of(a: Subset, b: Subset) -> bool {
    a & !b == 0
}

/// Party indices in ascending order.
pub fn members(mask: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| contains(mask, *i))
}

/// All nonempty subsets of the full set on `n` parties, ascending by mask.
pub fn all_nonempty(n: usize) -> impl Iterator<Item = Subset> {
    1..=full(n)
}

/// Codimension-1 faces: the subset minus one member at a time.
pub fn facets(mask: Subset) -> impl Iterator<Item = Subset> {
    members(mask).map(move |i| mask & !(1u32 << i))
}

/// All nonempty subsets of `mask`, ascending by value.
pub fn nonempty_subsets_of(mask: Subset) -> Vec<Subset> {
    let mut out = Vec::with_capacity((1usize << size(mask)) - 1);
    let mut s = mask;
    loop {
        if s != 0 {
            out.push(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facets_of_triple() {
        let fs: Vec<Subset> = facets(0b111).collect();
        assert_eq!(fs, vec![0b110, 0b101, 0b011]);
    }

    #[test]
    fn subsets_of_pair() {
        assert_eq!(nonempty_subsets_of(0b101), vec![0b001, 0b100, 0b101]);
    }

    #[test]
    fn full_mask() {
        assert_eq!(full(3), 0b111);
        assert_eq!(size(full(10)), 10);
        assert_eq!(dimension(0b1), 0);
        assert_eq!(dimension(0), -1);
    }
}
