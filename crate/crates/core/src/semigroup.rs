//! Numerical semigroups stored by their gap sets, together with Apéry sets
//! and the `m`-height partition of the gaps.

use std::fmt;

use num::integer::gcd;

use crate::error::{Error, Result};
use crate::partition;

/// A cofinite additive submonoid of the nonnegative integers.
///
/// The sorted gap list is the ground truth. The full monoid of nonnegative
/// integers is the semigroup with no gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    gaps: Vec<u64>,
    minimal_generators: Vec<u64>,
}

impl NumericalSemigroup {
    /// The semigroup of all nonnegative integers.
    pub fn full() -> Self {
        Self {
            gaps: Vec::new(),
            minimal_generators: vec![1],
        }
    }

    /// Builds the semigroup generated by `gens`.
    ///
    /// Membership is sieved on `[0, (min - 1) * max]`, which always contains
    /// the Frobenius number of a generator set with gcd 1.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if gens.contains(&0) {
            return Err(Error::ZeroElement);
        }
        let g = gens.iter().copied().fold(0, gcd);
        if g != 1 {
            return Err(Error::InfiniteGapSet(g));
        }
        let lo = *gens.iter().min().unwrap();
        let hi = *gens.iter().max().unwrap();
        let bound = ((lo - 1) * hi) as usize;
        let mut member = vec![false; bound + 1];
        member[0] = true;
        for x in 1..=bound {
            member[x] = gens
                .iter()
                .any(|&g| g as usize <= x && member[x - g as usize]);
        }
        let gaps = (1..=bound as u64).filter(|&x| !member[x as usize]).collect();
        Ok(Self::with_gaps(gaps))
    }

    /// Builds the semigroup whose complement is exactly `gaps`.
    ///
    /// The input may be unsorted and contain repeats. Fails with the first
    /// pair of members (by sum, then by smaller summand) whose sum is a gap.
    pub fn from_gaps(gaps: &[u64]) -> Result<Self> {
        let mut gaps = gaps.to_vec();
        gaps.sort_unstable();
        gaps.dedup();
        if gaps.first() == Some(&0) {
            return Err(Error::ZeroElement);
        }
        for &gap in &gaps {
            for s in 1..=gap / 2 {
                let t = gap - s;
                if gaps.binary_search(&s).is_err() && gaps.binary_search(&t).is_err() {
                    return Err(Error::ClosureViolation(s, t, gap));
                }
            }
        }
        Ok(Self::with_gaps(gaps))
    }

    fn with_gaps(gaps: Vec<u64>) -> Self {
        let mut s = Self {
            gaps,
            minimal_generators: Vec::new(),
        };
        s.minimal_generators = s.compute_minimal_generators();
        s
    }

    // Minimal generators are bounded by F + multiplicity.
    fn compute_minimal_generators(&self) -> Vec<u64> {
        let limit = self.frobenius().unwrap_or(0) + self.multiplicity();
        (1..=limit)
            .filter(|&x| self.contains(x))
            .filter(|&x| !(1..=x / 2).any(|s| self.contains(s) && self.contains(x - s)))
            .collect()
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    /// Number of gaps.
    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    /// Largest gap, or `None` for the full semigroup.
    pub fn frobenius(&self) -> Option<u64> {
        self.gaps.last().copied()
    }

    pub fn minimal_generators(&self) -> &[u64] {
        &self.minimal_generators
    }

    /// Smallest nonzero member.
    pub fn multiplicity(&self) -> u64 {
        (1..).find(|&x| self.contains(x)).unwrap()
    }

    pub fn is_full(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        match self.frobenius() {
            Some(f) if x <= f => self.gaps.binary_search(&x).is_err(),
            _ => true,
        }
    }

    /// The semigroup obtained by adjoining the Frobenius number; `None` for
    /// the full semigroup.
    pub fn parent(&self) -> Option<Self> {
        let (_, rest) = self.gaps.split_last()?;
        Some(Self::with_gaps(rest.to_vec()))
    }

    fn require_member(&self, m: u64) -> Result<()> {
        if m == 0 || !self.contains(m) {
            return Err(Error::NotAMember(m));
        }
        Ok(())
    }

    /// Apéry set with respect to the nonzero member `m`.
    pub fn apery_set(&self, m: u64) -> Result<AperySet> {
        self.require_member(m)?;
        let values: Vec<u64> = (0..m)
            .map(|i| {
                let mut x = i;
                while !self.contains(x) {
                    x += m;
                }
                x
            })
            .collect();
        let mut counts = vec![0usize; m as usize];
        for &g in &self.gaps {
            counts[(g % m) as usize] += 1;
        }
        for (i, (&a, &c)) in values.iter().zip(&counts).enumerate() {
            if a != m * c as u64 + i as u64 {
                return Err(Error::Invariant(format!(
                    "a_{i} = {a} but m*A_{i} + {i} = {}",
                    m * c as u64 + i as u64
                )));
            }
        }
        Ok(AperySet { m, values, counts })
    }

    /// Counts of gaps by `m`-height `floor(k / m)`.
    pub fn height_partition(&self, m: u64) -> Result<HeightPartition> {
        self.require_member(m)?;
        let mut counts = Vec::new();
        for &g in &self.gaps {
            let h = (g / m) as usize;
            if counts.len() <= h {
                counts.resize(h + 1, 0);
            }
            counts[h] += 1;
        }
        Ok(HeightPartition { m, counts })
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .minimal_generators
            .iter()
            .map(|g| g.to_string())
            .collect();
        write!(f, "<{}>", gens.join(","))
    }
}

/// Least member of each residue class modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperySet {
    m: u64,
    values: Vec<u64>,
    counts: Vec<usize>,
}

impl AperySet {
    /// Assembles an Apéry set without any validation. Intended for
    /// negative controls that need a deliberately wrong set.
    pub fn from_parts_unchecked(m: u64, values: Vec<u64>, counts: Vec<usize>) -> Self {
        Self { m, values, counts }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `a_0, ..., a_{m-1}` indexed by residue.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `A_0, ..., A_{m-1}`, the number of gaps in each residue class.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Values in increasing order.
    pub fn sorted(&self) -> Vec<u64> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, x: u64) -> bool {
        self.values.get((x % self.m) as usize) == Some(&x)
    }

    /// Checks the defining properties of an Apéry set of `s`.
    pub fn check_invariants(&self, s: &NumericalSemigroup) -> Result<()> {
        let m = self.m;
        let fail = |msg: String| Err(Error::Invariant(msg));
        if self.values.len() != m as usize || self.counts.len() != m as usize {
            return fail(format!("expected {m} residues"));
        }
        if self.values[0] != 0 || self.counts[0] != 0 {
            return fail("a_0 and A_0 must vanish".into());
        }
        for (i, (&a, &c)) in self.values.iter().zip(&self.counts).enumerate() {
            let i = i as u64;
            if a % m != i {
                return fail(format!("a_{i} = {a} is not congruent to {i} mod {m}"));
            }
            if a != m * c as u64 + i {
                return fail(format!("a_{i} = {a} differs from m*A_{i} + {i}"));
            }
            if !s.contains(a) {
                return fail(format!("a_{i} = {a} is not a member"));
            }
            if a >= m && s.contains(a - m) {
                return fail(format!("a_{i} - m = {} is a member", a - m));
            }
        }
        Ok(())
    }

    /// Each residue class with `A_i > 0` starts with the gap chain
    /// `i, i + m, ..., i + m (A_i - 1)`.
    pub fn check_gap_chains(&self, s: &NumericalSemigroup) -> Result<()> {
        for (i, &c) in self.counts.iter().enumerate() {
            for j in 0..c as u64 {
                let x = i as u64 + j * self.m;
                if s.contains(x) {
                    return Err(Error::Invariant(format!(
                        "{x} should be a gap in residue class {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Compares `S` with `S^(m) + m Z_{>=0}` on `[0, F + 2m]`.
    pub fn check_reconstruction(&self, s: &NumericalSemigroup) -> Result<()> {
        let top = s.frobenius().unwrap_or(0) + 2 * self.m;
        for x in 0..=top {
            let via_apery = x >= self.values[(x % self.m) as usize];
            if via_apery != s.contains(x) {
                return Err(Error::Invariant(format!(
                    "membership of {x} disagrees with the Apéry decomposition"
                )));
            }
        }
        Ok(())
    }
}

/// `b_i(S)`: the number of gaps with `floor(k / m) = i`, for `i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightPartition {
    m: u64,
    counts: Vec<usize>,
}

impl HeightPartition {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Whether the residue counts `A_i` form the conjugate partition.
    pub fn is_conjugate_to(&self, apery: &AperySet) -> bool {
        partition::conjugate(apery.counts()) == self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force closure of a generator set on a window; independent of the
    // sieve in from_generators.
    fn closure_oracle(gens: &[u64], window: u64) -> Vec<u64> {
        let mut members = std::collections::BTreeSet::from([0u64]);
        loop {
            let next: Vec<u64> = members
                .iter()
                .flat_map(|&s| gens.iter().map(move |&g| s + g))
                .filter(|&x| x <= window && !members.contains(&x))
                .collect();
            if next.is_empty() {
                break;
            }
            members.extend(next);
        }
        (0..=window).filter(|x| !members.contains(x)).collect()
    }

    #[test]
    fn three_five() {
        let s = NumericalSemigroup::from_generators(&[3, 5]).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 4, 7]);
        assert_eq!(s.frobenius(), Some(7));
        assert_eq!(s.frobenius(), Some(3 * 5 - 3 - 5));
        assert_eq!(s.gaps(), closure_oracle(&[3, 5], 40).as_slice());
        assert_eq!(s.minimal_generators(), &[3, 5]);
        assert_eq!(s.multiplicity(), 3);
        assert!(s.contains(8));
        assert!(!s.contains(7));
        assert_eq!(s.to_string(), "<3,5>");
    }

    #[test]
    fn sieve_matches_closure_oracle() {
        for gens in [&[4u64, 6, 9][..], &[5, 7, 11], &[2, 7], &[6, 10, 15], &[7, 8, 9, 10]] {
            let s = NumericalSemigroup::from_generators(gens).unwrap();
            assert_eq!(s.gaps(), closure_oracle(gens, 200).as_slice(), "{gens:?}");
        }
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let s = NumericalSemigroup::from_generators(&[3, 5, 6, 9, 10]).unwrap();
        assert_eq!(s.minimal_generators(), &[3, 5]);
    }

    #[test]
    fn full_semigroup() {
        let s = NumericalSemigroup::from_generators(&[1]).unwrap();
        assert!(s.is_full());
        assert_eq!(s, NumericalSemigroup::full());
        assert_eq!(s.frobenius(), None);
        assert!(s.contains(0));
        assert_eq!(NumericalSemigroup::from_gaps(&[]).unwrap(), s);
        assert_eq!(s.apery_set(4).unwrap().values(), &[0, 1, 2, 3]);
        assert!(s.height_partition(3).unwrap().counts().is_empty());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            NumericalSemigroup::from_generators(&[4, 6]),
            Err(Error::InfiniteGapSet(2))
        );
        assert_eq!(
            NumericalSemigroup::from_generators(&[]),
            Err(Error::EmptyGenerators)
        );
        assert_eq!(
            NumericalSemigroup::from_gaps(&[2]),
            Err(Error::ClosureViolation(1, 1, 2))
        );
        assert_eq!(NumericalSemigroup::from_gaps(&[0, 1]), Err(Error::ZeroElement));
    }

    #[test]
    fn from_gaps_round_trip() {
        let s = NumericalSemigroup::from_gaps(&[7, 1, 4, 2, 2]).unwrap();
        assert_eq!(s, NumericalSemigroup::from_generators(&[3, 5]).unwrap());
    }

    #[test]
    fn apery_sets_of_three_five() {
        let s = NumericalSemigroup::from_generators(&[3, 5]).unwrap();
        let a3 = s.apery_set(3).unwrap();
        assert_eq!(a3.values(), &[0, 10, 5]);
        assert_eq!(a3.counts(), &[0, 3, 1]);
        let a5 = s.apery_set(5).unwrap();
        assert_eq!(a5.values(), &[0, 6, 12, 3, 9]);
        assert_eq!(a5.counts(), &[0, 1, 2, 0, 1]);
        for a in [&a3, &a5] {
            a.check_invariants(&s).unwrap();
            a.check_gap_chains(&s).unwrap();
            a.check_reconstruction(&s).unwrap();
        }
        assert_eq!(s.apery_set(4), Err(Error::NotAMember(4)));
        assert_eq!(s.apery_set(0), Err(Error::NotAMember(0)));
    }

    #[test]
    fn corrupted_apery_set_is_rejected() {
        let s = NumericalSemigroup::from_generators(&[3, 5]).unwrap();
        let bad = AperySet::from_parts_unchecked(3, vec![0, 13, 5], vec![0, 4, 1]);
        assert!(bad.check_invariants(&s).is_err());
        assert!(bad.check_reconstruction(&s).is_err());
    }

    #[test]
    fn height_partition_of_three_five() {
        let s = NumericalSemigroup::from_generators(&[3, 5]).unwrap();
        let b = s.height_partition(3).unwrap();
        assert_eq!(b.counts(), &[2, 1, 1]);
        assert_eq!(b.total(), s.genus());
        assert!(b.is_conjugate_to(&s.apery_set(3).unwrap()));
        assert_eq!(partition::conjugate(&[3, 1]), vec![2, 1, 1]);
    }

    #[test]
    fn parent_adjoins_frobenius() {
        let s = NumericalSemigroup::from_generators(&[3, 5]).unwrap();
        let p = s.parent().unwrap();
        assert_eq!(p.gaps(), &[1, 2, 4]);
        assert!(NumericalSemigroup::full().parent().is_none());
    }
}
