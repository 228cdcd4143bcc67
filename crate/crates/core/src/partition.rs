//! Integer partitions as weakly decreasing sequences of positive parts.

/// Sorts descending and drops zero parts.
pub fn normalize(parts: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = parts.iter().copied().filter(|&x| x > 0).collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}

/// Transposes the Young diagram: part `j` of the result counts the parts
/// strictly greater than `j`.
pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let p = normalize(parts);
    let largest = p.first().copied().unwrap_or(0);
    (0..largest)
        .map(|j| p.iter().take_while(|&&x| x > j).count())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_conjugates() {
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
        assert_eq!(conjugate(&[1, 0, 3]), vec![2, 1, 1]);
        assert_eq!(conjugate(&[5, 1]), vec![2, 1, 1, 1, 1]);
        assert!(conjugate(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(parts in prop::collection::vec(0usize..12, 0..10)) {
            prop_assert_eq!(conjugate(&conjugate(&parts)), normalize(&parts));
            let total: usize = parts.iter().sum();
            prop_assert_eq!(conjugate(&parts).iter().sum::<usize>(), total);
        }
    }
}
