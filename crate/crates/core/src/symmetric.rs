//! Exact symmetric-function kernel: elementary and complete homogeneous
//! symmetric functions, products of linear factors, and divided differences.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_ratio_string, Rational};

/// Univariate polynomial in `z` with exact rational coefficients, lowest
/// degree first. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        Self { coeffs }
    }

    /// `z + c`.
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![c, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * z + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn to_ratio_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(to_ratio_string).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// `e_k(xs)`, via the running expansion of `prod (t + x_i)`.
pub fn elementary(k: usize, xs: &[Rational]) -> Rational {
    if k > xs.len() {
        return Rational::zero();
    }
    let mut e = vec![Rational::zero(); k + 1];
    e[0] = Rational::one();
    for (seen, x) in xs.iter().enumerate() {
        for j in (1..=k.min(seen + 1)).rev() {
            let add = x * &e[j - 1];
            e[j] += add;
        }
    }
    e.swap_remove(k)
}

/// `h_k(xs)`, via `h_k(x_1..x_j) = h_k(x_1..x_{j-1}) + x_j h_{k-1}(x_1..x_j)`.
pub fn complete(k: usize, xs: &[Rational]) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    let mut h = vec![Rational::zero(); k + 1];
    h[0] = Rational::one();
    for x in xs {
        for j in 1..=k {
            let add = x * &h[j - 1];
            h[j] += add;
        }
    }
    h.swap_remove(k)
}

/// `e_k` with the convention `e_k = 0` for negative `k`.
pub fn elementary_signed(k: i64, xs: &[Rational]) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        elementary(k as usize, xs)
    }
}

/// `h_k` with the convention `h_k = 0` for negative `k`.
pub fn complete_signed(k: i64, xs: &[Rational]) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        complete(k as usize, xs)
    }
}

/// Sign of the constant in each linear factor of [`product_poly`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorSign {
    Plus,
    Minus,
}

/// `prod_i (z + x_i)` or `prod_i (z - x_i)`.
pub fn product_poly(xs: &[Rational], sign: FactorSign) -> Poly {
    xs.iter().fold(Poly::one(), |acc, x| {
        let c = match sign {
            FactorSign::Plus => x.clone(),
            FactorSign::Minus => -x,
        };
        &acc * &Poly::linear(c)
    })
}

/// Divided difference of the polynomial `w` on distinct nodes, in Lagrange
/// form `sum_j w(x_j) / prod_{k != j} (x_j - x_k)`.
pub fn divided_difference(w: &Poly, nodes: &[Rational]) -> Result<Rational> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument(
            "divided difference needs at least one node".into(),
        ));
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[i + 1..].contains(a) {
            return Err(Error::ConfluentNodes(to_ratio_string(a)));
        }
    }
    let mut total = Rational::zero();
    for (j, xj) in nodes.iter().enumerate() {
        let denom = nodes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .fold(Rational::one(), |acc, (_, xk)| acc * (xj - xk));
        total += w.eval(xj) / denom;
    }
    Ok(total)
}

fn require_two(xs: &[Rational]) -> Result<()> {
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "recurrence needs at least two variables".into(),
        ));
    }
    Ok(())
}

/// `e_k(x_2..x_p) - e_k(x_1..x_{p-1}) == (x_p - x_1) e_{k-1}(x_2..x_{p-1})`.
pub fn e_recurrence_check(xs: &[Rational], k: usize) -> Result<bool> {
    require_two(xs)?;
    let p = xs.len();
    let lhs = elementary(k, &xs[1..]) - elementary(k, &xs[..p - 1]);
    let rhs = (&xs[p - 1] - &xs[0]) * elementary_signed(k as i64 - 1, &xs[1..p - 1]);
    Ok(lhs == rhs)
}

/// The same difference with `e_k` rather than `e_{k-1}` on the right. This
/// form is false in general; it is kept as a negative control.
pub fn e_recurrence_same_index_check(xs: &[Rational], k: usize) -> Result<bool> {
    require_two(xs)?;
    let p = xs.len();
    let lhs = elementary(k, &xs[1..]) - elementary(k, &xs[..p - 1]);
    let rhs = (&xs[p - 1] - &xs[0]) * elementary(k, &xs[1..p - 1]);
    Ok(lhs == rhs)
}

/// `h_k(x_2..x_p) - h_k(x_1..x_{p-1}) == (x_p - x_1) h_{k-1}(x_1..x_p)`.
pub fn h_recurrence_check(xs: &[Rational], k: usize) -> Result<bool> {
    require_two(xs)?;
    let p = xs.len();
    let lhs = complete(k, &xs[1..]) - complete(k, &xs[..p - 1]);
    let rhs = (&xs[p - 1] - &xs[0]) * complete_signed(k as i64 - 1, xs);
    Ok(lhs == rhs)
}

/// Coefficients `0..=order` of `z^p prod_i (z - x_i)^{-1}` as a power series
/// in `1/z`, i.e. of `prod_i (1 - x_i u)^{-1}` in `u`.
pub fn inverse_product_series(xs: &[Rational], order: usize) -> Vec<Rational> {
    let mut series = vec![Rational::zero(); order + 1];
    series[0] = Rational::one();
    for x in xs {
        let mut powers = Vec::with_capacity(order + 1);
        let mut p = Rational::one();
        for _ in 0..=order {
            powers.push(p.clone());
            p *= x;
        }
        let mut next = vec![Rational::zero(); order + 1];
        for (i, a) in series.iter().enumerate() {
            for (j, b) in powers.iter().enumerate().take(order + 1 - i) {
                next[i + j] += a * b;
            }
        }
        series = next;
    }
    series
}

/// Default truncation order for [`inverse_product_series`] checks.
pub const DEFAULT_SERIES_ORDER: usize = 8;
