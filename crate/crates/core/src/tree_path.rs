//! The canonical path `S = S_n - S_{n-1} - ... - S_0 = Z_{>=0}` in the tree of
//! numerical semigroups and the generic difference relations along it.
//!
//! `S_i` keeps exactly the `i` smallest gaps of `S`, so each edge adjoins the
//! Frobenius number `c_i` of `S_i`. Along an edge the Apéry set changes in a
//! single residue class: `c_i + m` is replaced by `c_i`. The common part
//! `T_i` has `m - 1` elements.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::semigroup::{AperySet, NumericalSemigroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathVertex {
    pub semigroup: NumericalSemigroup,
    pub apery: AperySet,
}

/// The edge `S_i - S_{i-1}`, for `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub index: usize,
    /// `c_i = F(S_i)`.
    pub frobenius_added: u64,
    /// `T_i`, sorted.
    pub t_set: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPath {
    m: u64,
    vertices: Vec<PathVertex>,
    steps: Vec<PathStep>,
}

impl CanonicalPath {
    /// Materializes every vertex with its Apéry set and checks the
    /// one-element update law on each edge.
    pub fn new(s: &NumericalSemigroup, m: u64) -> Result<Self> {
        s.apery_set(m)?;
        let gaps = s.gaps();
        let vertices = (0..=gaps.len())
            .map(|i| {
                let semigroup = NumericalSemigroup::from_gaps(&gaps[..i])?;
                let apery = semigroup.apery_set(m)?;
                Ok(PathVertex { semigroup, apery })
            })
            .collect::<Result<Vec<_>>>()?;
        let steps = (1..=gaps.len())
            .map(|i| Self::check_step(&vertices[i], &vertices[i - 1], i, gaps[i - 1], m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { m, vertices, steps })
    }

    fn check_step(
        child: &PathVertex,
        parent: &PathVertex,
        index: usize,
        c: u64,
        m: u64,
    ) -> Result<PathStep> {
        let broken = |what: &str| Err(Error::Invariant(format!("step {index} (c = {c}): {what}")));
        if child.semigroup.frobenius() != Some(c) {
            return broken("c is not the Frobenius number of S_i");
        }
        if !child.apery.contains(c + m) {
            return broken("c + m missing from the Apéry set of S_i");
        }
        if !parent.apery.contains(c) {
            return broken("c missing from the Apéry set of S_(i-1)");
        }
        let changed: Vec<usize> = (0..m as usize)
            .filter(|&r| child.apery.values()[r] != parent.apery.values()[r])
            .collect();
        if changed != [(c % m) as usize] {
            return broken("Apéry sets differ outside the residue class of c");
        }
        let t_set: Vec<u64> = child.apery.sorted().into_iter().filter(|&a| a != c + m).collect();
        let t_parent: Vec<u64> = parent.apery.sorted().into_iter().filter(|&a| a != c).collect();
        if t_set != t_parent || t_set.len() != m as usize - 1 {
            return broken("the two descriptions of T_i disagree");
        }
        Ok(PathStep {
            index,
            frobenius_added: c,
            t_set,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Path length `n`, the genus of the base semigroup.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `S_0, ..., S_n`.
    pub fn vertices(&self) -> &[PathVertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &PathVertex {
        &self.vertices[i]
    }

    /// `S = S_n`.
    pub fn base(&self) -> &PathVertex {
        self.vertices.last().unwrap()
    }

    /// Steps `1..=n`; `steps()[i - 1]` is the edge `S_i - S_{i-1}`.
    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }
}

/// An exact value `H(S_i)` for every vertex of a path, indexed by `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFunction {
    values: Vec<Rational>,
}

impl VertexFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn from_fn(path: &CanonicalPath, mut h: impl FnMut(usize, &PathVertex) -> Rational) -> Self {
        Self::new(
            path.vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| h(i, v))
                .collect(),
        )
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    fn on(&self, path: &CanonicalPath) -> Result<&[Rational]> {
        if self.values.len() != path.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "vertex function has {} values for a path with {} vertices",
                self.values.len(),
                path.len() + 1
            )));
        }
        Ok(&self.values)
    }
}

/// `(sum_i (H(S_{i+1}) - H(S_i)), H(S_n) - H(S_0))`.
pub fn telescoping_sum(h: &VertexFunction, path: &CanonicalPath) -> Result<(Rational, Rational)> {
    let v = h.on(path)?;
    let lhs = v.windows(2).map(|w| &w[1] - &w[0]).sum();
    let rhs = &v[v.len() - 1] - &v[0];
    Ok((lhs, rhs))
}

/// `(prod_i H(S_{i+1}) / H(S_i), H(S_n) / H(S_0))`; every value must be
/// nonzero.
pub fn telescoping_product(
    h: &VertexFunction,
    path: &CanonicalPath,
) -> Result<(Rational, Rational)> {
    let v = h.on(path)?;
    if let Some(i) = v.iter().position(Zero::is_zero) {
        return Err(Error::UndefinedFraction(format!("H(S_{i}) = 0")));
    }
    let lhs = v
        .windows(2)
        .fold(Rational::one(), |acc, w| acc * &w[1] / &w[0]);
    let rhs = &v[v.len() - 1] / &v[0];
    Ok((lhs, rhs))
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Cofactors of the first row of the `p x p` matrix whose remaining rows are
/// `fixed_rows`; `D(y) = sum_j y_j * cofactor_j`.
pub fn first_row_cofactors(fixed_rows: &[Vec<Rational>], p: usize) -> Result<Vec<Rational>> {
    if fixed_rows.len() + 1 != p || fixed_rows.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidArgument(format!(
            "fixed rows must form a {}x{p} matrix",
            p.saturating_sub(1)
        )));
    }
    Ok((0..p)
        .map(|j| {
            let minor: Vec<Vec<Rational>> = fixed_rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = determinant(&minor);
            if j % 2 == 1 {
                -d
            } else {
                d
            }
        })
        .collect())
}

/// Sum of `p x p` determinants whose first rows are consecutive windows of
/// the edge differences of `H`, against the single determinant of the
/// telescoped row. Both are linear in the first row, so they agree.
pub fn determinant_relation(
    h: &VertexFunction,
    path: &CanonicalPath,
    p: usize,
    fixed_rows: &[Vec<Rational>],
) -> Result<(Rational, Rational)> {
    let v = h.on(path)?;
    let n = path.len();
    if p == 0 || p > n {
        return Err(Error::InvalidArgument(format!(
            "window size p = {p} must lie in 1..={n}"
        )));
    }
    let cofactors = first_row_cofactors(fixed_rows, p)?;
    // Left: each determinant in full. Right: cofactor expansion of the
    // telescoped row.
    let lhs = (0..=n - p)
        .map(|i| {
            let mut matrix = vec![(1..=p).map(|j| &v[i + j] - &v[i + j - 1]).collect()];
            matrix.extend(fixed_rows.iter().cloned());
            determinant(&matrix)
        })
        .sum();
    let rhs = (1..=p)
        .map(|j| &v[n - p + j] - &v[j - 1])
        .zip(&cofactors)
        .map(|(y, c)| y * c)
        .sum();
    Ok((lhs, rhs))
}
