//! Seeded random instances for the identity suites.
//!
//! Each instance draws from its own stream, seeded from `(seed, index)`, so
//! results do not depend on the order in which instances are evaluated.

use std::collections::HashSet;

use num::integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::identities::FunctionTable;
use crate::rational::{ratio, Rational};
use crate::semigroup::NumericalSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Distribution {
    pub min_generators: usize,
    pub max_generators: usize,
    pub smallest_generator: u64,
    pub largest_generator: u64,
    pub max_frobenius: u64,
    pub max_m: u64,
}

impl Default for Distribution {
    fn default() -> Self {
        Self {
            min_generators: 2,
            max_generators: 4,
            smallest_generator: 2,
            largest_generator: 20,
            max_frobenius: 60,
            max_m: 12,
        }
    }
}

/// Random stream for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Rejection-samples generator lists until one has gcd 1, Frobenius number
/// within bounds, and some member in `2..=max_m`.
pub fn random_semigroup(rng: &mut impl Rng, dist: &Distribution) -> NumericalSemigroup {
    loop {
        let count = rng.gen_range(dist.min_generators..=dist.max_generators);
        let gens: Vec<u64> = (0..count)
            .map(|_| rng.gen_range(dist.smallest_generator..=dist.largest_generator))
            .collect();
        if gens.iter().copied().fold(0, gcd) != 1 {
            continue;
        }
        let Ok(s) = NumericalSemigroup::from_generators(&gens) else {
            continue;
        };
        if s.frobenius().unwrap_or(0) > dist.max_frobenius {
            continue;
        }
        if (2..=dist.max_m).any(|m| s.contains(m)) {
            return s;
        }
    }
}

/// A uniformly chosen member of `s` in `2..=max_m`, if there is one.
pub fn random_member(rng: &mut impl Rng, s: &NumericalSemigroup, max_m: u64) -> Option<u64> {
    let members: Vec<u64> = (2..=max_m).filter(|&m| s.contains(m)).collect();
    (!members.is_empty()).then(|| members[rng.gen_range(0..members.len())])
}

/// `(S, m)` from the distribution.
pub fn random_instance(rng: &mut impl Rng, dist: &Distribution) -> (NumericalSemigroup, u64) {
    let s = random_semigroup(rng, dist);
    let m = random_member(rng, &s, dist.max_m).expect("sampled semigroups have a small member");
    (s, m)
}

/// Numerator in `[-10^6, 10^6]`, denominator in `[1, 100]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=100))
}

/// Distinct random rationals on `0..=n_max`.
pub fn random_injective_table(rng: &mut impl Rng, n_max: u64) -> FunctionTable {
    let mut seen = HashSet::new();
    let mut values = Vec::with_capacity(n_max as usize + 1);
    while values.len() <= n_max as usize {
        let r = random_rational(rng);
        if seen.insert(r.clone()) {
            values.push(r);
        }
    }
    FunctionTable::new(values)
}

/// Random rationals on `0..=n_max` drawn from a small pool, with
/// `f(1) = f(0)` so that the table is never injective on `{0, ..., m-1}`.
pub fn random_table_with_repeats(rng: &mut impl Rng, n_max: u64) -> FunctionTable {
    let mut values: Vec<Rational> = (0..=n_max)
        .map(|_| ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
        .collect();
    if values.len() > 1 {
        values[1] = values[0].clone();
    }
    FunctionTable::new(values)
}
