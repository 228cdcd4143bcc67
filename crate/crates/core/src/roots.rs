//! Finite crystallographic root systems: positive roots generated from the
//! Cartan matrix, heights, and tabulated Coxeter exponents.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            "D" => Ok(Self::D),
            "E" => Ok(Self::E),
            "F" => Ok(Self::F),
            "G" => Ok(Self::G),
            other => Err(Error::InvalidArgument(format!("unknown root system type {other:?}"))),
        }
    }
}

/// Type and rank, e.g. `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootLabel {
    pub kind: RootType,
    pub rank: usize,
}

impl RootLabel {
    pub fn new(kind: RootType, rank: usize) -> Result<Self> {
        let ok = match kind {
            RootType::A => rank >= 1,
            RootType::B | RootType::C => rank >= 2,
            RootType::D => rank >= 4,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        };
        if !ok || rank > 8 {
            return Err(Error::InvalidArgument(format!(
                "no root system {kind:?}{rank} of rank at most 8"
            )));
        }
        Ok(Self { kind, rank })
    }

    /// Every supported system of rank at most 8.
    pub fn all() -> Vec<Self> {
        use RootType::*;
        [A, B, C, D, E, F, G]
            .into_iter()
            .flat_map(|kind| (1..=8).filter_map(move |rank| Self::new(kind, rank).ok()))
            .collect()
    }

    /// Coxeter exponents in increasing order.
    pub fn exponents(&self) -> Vec<u64> {
        let n = self.rank as u64;
        let mut e: Vec<u64> = match self.kind {
            RootType::A => (1..=n).collect(),
            RootType::B | RootType::C => (1..=n).map(|i| 2 * i - 1).collect(),
            RootType::D => (1..n).map(|i| 2 * i - 1).chain([n - 1]).collect(),
            RootType::E => match n {
                6 => vec![1, 4, 5, 7, 8, 11],
                7 => vec![1, 5, 7, 9, 11, 13, 17],
                _ => vec![1, 7, 11, 13, 17, 19, 23, 29],
            },
            RootType::F => vec![1, 5, 7, 11],
            RootType::G => vec![1, 5],
        };
        e.sort_unstable();
        e
    }

    /// Cartan matrix `a_ij = 2 (α_i, α_j) / (α_i, α_i)` in Bourbaki
    /// numbering.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.kind {
            RootType::A | RootType::B | RootType::C => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            RootType::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            RootType::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            RootType::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            RootType::G => link(0, 1),
        }
        match self.kind {
            // α_n short.
            RootType::B => a[n - 1][n - 2] = -2,
            // α_n long.
            RootType::C => a[n - 2][n - 1] = -2,
            // α_1, α_2 long; α_3, α_4 short.
            RootType::F => a[2][1] = -2,
            // α_1 short, α_2 long.
            RootType::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

impl FromStr for RootLabel {
    type Err = Error;

    /// Parses `G2`, `e8`, `A3`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| {
            Error::InvalidArgument(format!("root system label {s:?} lacks a rank"))
        })?;
        let kind: RootType = s[..split].parse()?;
        let rank = s[split..]
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rank in {s:?}")))?;
        Self::new(kind, rank)
    }
}

/// Positive roots in simple-root coordinates, with their heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    label: RootLabel,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    exponents: Vec<u64>,
}

impl RootSystem {
    /// Generates the positive roots layer by layer. For a root `β` of the
    /// current height and a simple root `α_i` with `β ≠ α_i`, the `α_i`-string
    /// through `β` runs from `β - r α_i` to `β + s α_i` with
    /// `r - s = <β, α_i^∨>`, and `r` is read off the lower layers.
    pub fn build(label: RootLabel) -> Result<Self> {
        let cartan = label.cartan();
        let n = label.rank;
        let simple: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut roots = simple.clone();
        let mut layer = simple;
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    if beta.iter().enumerate().all(|(j, &c)| c == i64::from(i == j)) {
                        continue;
                    }
                    let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
                    let mut r = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if !known.contains(&down) {
                            break;
                        }
                        r += 1;
                    }
                    if r - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            layer = next;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let rs = Self {
            label,
            cartan,
            positive_roots: roots,
            exponents: label.exponents(),
        };
        rs.check_invariants()?;
        Ok(rs)
    }

    pub fn label(&self) -> RootLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Degrees of the basic invariants, `e_i + 1`.
    pub fn degrees(&self) -> Vec<u64> {
        self.exponents.iter().map(|e| e + 1).collect()
    }

    /// Heights of the positive roots, sorted.
    pub fn heights(&self) -> Vec<u64> {
        self.positive_roots
            .iter()
            .map(|r| r.iter().sum::<i64>() as u64)
            .collect()
    }

    /// `b_i` for `i = 1..=max height`, stored at index `i - 1`.
    pub fn height_counts(&self) -> Vec<usize> {
        let heights = self.heights();
        let top = heights.iter().copied().max().unwrap_or(0) as usize;
        let mut b = vec![0; top];
        for h in heights {
            b[h as usize - 1] += 1;
        }
        b
    }

    /// Whether the height counts form the conjugate of the exponent
    /// partition.
    pub fn heights_conjugate_to_exponents(&self) -> bool {
        let exps: Vec<usize> = self.exponents.iter().map(|&e| e as usize).collect();
        crate::partition::conjugate(&exps) == self.height_counts()
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(format!("{}: {msg}", self.label)));
        let total: u64 = self.exponents.iter().sum();
        if self.positive_roots.len() as u64 != total {
            return fail(format!(
                "{} positive roots but the exponents sum to {total}",
                self.positive_roots.len()
            ));
        }
        let b = self.height_counts();
        if b.first() != Some(&self.rank()) {
            return fail("the height-1 roots are not exactly the simple roots".into());
        }
        if b.len() as u64 != *self.exponents.last().unwrap() {
            return fail("maximal height differs from the largest exponent".into());
        }
        if !self.heights_conjugate_to_exponents() {
            return fail("height counts are not conjugate to the exponents".into());
        }
        Ok(())
    }
}

/// Dense polynomial with integer coefficients, lowest degree first.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// `p * (q^d - 1)`.
fn mul_cyclotomic_like(p: &IntPoly, d: usize) -> IntPoly {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    trim(out)
}

/// `p / (q^d - 1)`, failing unless the division is exact.
fn div_cyclotomic_like(p: &IntPoly, d: usize) -> Option<IntPoly> {
    if p.is_empty() {
        return Some(Vec::new());
    }
    if p.len() <= d {
        return None;
    }
    // p = Q (q^d - 1) gives p_j = Q_{j-d} - Q_j.
    let deg_q = p.len() - 1 - d;
    let mut quotient = vec![BigInt::zero(); deg_q + 1];
    for j in 0..=deg_q {
        let below = if j >= d { quotient[j - d].clone() } else { BigInt::zero() };
        quotient[j] = below - &p[j];
    }
    let quotient = trim(quotient);
    (mul_cyclotomic_like(&quotient, d) == *p).then_some(quotient)
}

/// `1 + q + ... + q^e`.
fn q_integer_poly(e: u64) -> IntPoly {
    vec![BigInt::one(); e as usize + 1]
}

fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `prod_i (q^{e_i + 1} - 1)/(q - 1)`.
pub fn solomon_product(rs: &RootSystem) -> IntPoly {
    rs.exponents()
        .iter()
        .fold(vec![BigInt::one()], |acc, &e| mul(&acc, &q_integer_poly(e)))
}

/// `prod_r (q^{ht(r) + 1} - 1)/(q^{ht(r)} - 1)`, normalized by exact
/// division of the numerator product by each denominator factor.
pub fn macdonald_product(rs: &RootSystem) -> Result<IntPoly> {
    let heights = rs.heights();
    let numerator = heights
        .iter()
        .fold(vec![BigInt::one()], |acc, &h| mul_cyclotomic_like(&acc, h as usize + 1));
    heights.iter().try_fold(numerator, |acc, &h| {
        div_cyclotomic_like(&acc, h as usize).ok_or_else(|| {
            Error::Invariant(format!("{}: product is not a polynomial", rs.label()))
        })
    })
}

pub fn format_int_poly(p: &IntPoly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let coeff = if c.is_one() && k > 0 { String::new() } else { c.abs().to_string() };
            let var = match k {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{k}"),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            format!("{sign} {coeff}{var}")
        })
        .collect();
    terms.join(" ").trim_start_matches("+ ").to_string()
}
