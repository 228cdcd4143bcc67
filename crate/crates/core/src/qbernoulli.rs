//! Numerical evaluation of the generalized q-Bernoulli family
//! `B^{(α)}_{k;q}(t; λ)` and its shifted variant `B^{(α)}_{n;q^l;y}(t; λ)`.
//!
//! The base family is defined by the generating function
//!
//! ```text
//! (-z)^α Σ_{n≥0} c_n λ^n q^{n+t} exp([n+t]_q z) = Σ_k B_k(t) z^k / k!,
//! c_n = [α]_q [α+1]_q ... [α+n-1]_q / ([1]_q ... [n]_q),
//! ```
//!
//! so the coefficient of `z^k` is read off term by term:
//! `B_k(t) = (-1)^α k!/(k-α)! Σ_n c_n λ^n q^{n+t} [n+t]_q^{k-α}` for `k ≥ α`
//! and zero below. The series converges for `|λ| q < 1`, `0 < q < 1`.
//!
//! Only integer orders `α ≥ 0` are supported.

use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_TERMS: usize = 100_000;
/// Tolerance for the tightened pass of the truncation stability check.
pub const TIGHT_TRUNCATION_TOL: f64 = 1e-17;
/// Residual bound for the difference relation and the per-point difference
/// of the semigroup test function.
pub const DIFFERENCE_TOLERANCE: f64 = 1e-9;
/// Residual bound for the specialized sum identities.
pub const SPECIALIZATION_TOLERANCE: f64 = 1e-8;
/// Bound on the change of a value when the truncation is tightened.
pub const STABILITY_TOLERANCE: f64 = 1e-10;

// Consecutive negligible terms required before the series is cut.
const NEGLIGIBLE_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBernoulliParams {
    pub q: f64,
    pub l: u32,
    pub y: f64,
    pub alpha: u32,
    pub lambda: f64,
    pub truncation_tol: f64,
    pub max_terms: usize,
}

impl QBernoulliParams {
    pub fn new(q: f64, l: u32, y: f64, alpha: u32, lambda: f64) -> Result<Self> {
        let p = Self {
            q,
            l,
            y,
            alpha,
            lambda,
            truncation_tol: DEFAULT_TRUNCATION_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        };
        p.validate()?;
        Ok(p)
    }

    /// `q = 0.5, l = 1, y = 0, α = 1, λ = 0.25`.
    pub fn standard() -> Self {
        Self::new(0.5, 1, 0.0, 1, 0.25).unwrap()
    }

    // Negated comparisons so that NaN parameters are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.q > 0.0 && self.q < 1.0) {
            return bad(format!("q = {} must lie in (0, 1)", self.q));
        }
        if self.l == 0 {
            return bad("l must be positive".into());
        }
        if !(self.lambda.abs() * self.q.powi(self.l as i32) < 1.0) {
            return bad(format!(
                "|λ| q^l = {} must be below 1",
                self.lambda.abs() * self.q.powi(self.l as i32)
            ));
        }
        if !self.y.is_finite() {
            return bad("y must be finite".into());
        }
        if !(self.truncation_tol > 0.0) || self.max_terms == 0 {
            return bad("truncation settings must be positive".into());
        }
        Ok(())
    }

    pub fn with_alpha(self, alpha: u32) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_tolerance(self, truncation_tol: f64) -> Self {
        Self {
            truncation_tol,
            ..self
        }
    }

    /// `λ q^{l(α-1)}`, the multiplier in the difference relation.
    pub fn multiplier(&self) -> f64 {
        self.lambda * self.q.powf(self.l as f64 * (self.alpha as f64 - 1.0))
    }
}

/// `[x]_q = (q^x - 1)/(q - 1)`, with the limit `x` at `q = 1`.
pub fn q_number(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x
    } else {
        (q.powf(x) - 1.0) / (q - 1.0)
    }
}

/// Neumaier compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn falling_factorial(k: u32, j: u32) -> f64 {
    (0..j).map(|i| (k - i) as f64).product()
}

/// `B^{(α)}_{k;q}(t; λ)` with `q`, `α`, `λ` taken from `params`.
pub fn base_eval(k: u32, t: f64, params: &QBernoulliParams) -> Result<f64> {
    let QBernoulliParams {
        q, alpha, lambda, ..
    } = *params;
    if k < alpha {
        return Ok(0.0);
    }
    let power = (k - alpha) as i32;
    let q_t = q.powf(t);
    let mut c = 1.0;
    let mut lambda_q_n = 1.0;
    let mut sum = CompensatedSum::default();
    let mut negligible = 0;
    let mut last_term = f64::INFINITY;
    for n in 0..params.max_terms {
        if n > 0 {
            c *= q_number((alpha + n as u32 - 1) as f64, q) / q_number(n as f64, q);
            lambda_q_n *= lambda * q;
        }
        if c == 0.0 {
            negligible = NEGLIGIBLE_RUN;
            break;
        }
        let q_nt = lambda_q_n * q_t;
        let bracket = q_number(n as f64 + t, q);
        let term = c * q_nt * bracket.powi(power);
        sum.add(term);
        last_term = term.abs();
        if last_term <= params.truncation_tol * sum.value().abs() {
            negligible += 1;
            if negligible >= NEGLIGIBLE_RUN {
                break;
            }
        } else {
            negligible = 0;
        }
    }
    if negligible < NEGLIGIBLE_RUN {
        return Err(Error::Convergence {
            max_terms: params.max_terms,
            last_term,
        });
    }
    let sign = if alpha % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * falling_factorial(k, alpha) * sum.value())
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `B^{(α)}_{n;q^l;y}(t; λ) = Σ_k C(n,k) q^{l(k-α+1)y} [l]_q^k B^{(α)}_{k;q^l}(t-1; λ)`.
pub fn shifted_eval(n: u32, t: f64, params: &QBernoulliParams) -> Result<f64> {
    let ql = params.q.powi(params.l as i32);
    let base_params = QBernoulliParams { q: ql, ..*params };
    let l_q = q_number(params.l as f64, params.q);
    let mut sum = CompensatedSum::default();
    for k in 0..=n {
        let b = base_eval(k, t - 1.0, &base_params)?;
        if b == 0.0 {
            continue;
        }
        let weight = binomial_f64(n, k)
            * ql.powf((k as f64 - params.alpha as f64 + 1.0) * params.y)
            * l_q.powi(k as i32);
        sum.add(weight * b);
    }
    Ok(sum.value())
}

fn require_order(n: u32, params: &QBernoulliParams) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("Bernoulli order n must be at least 1".into()));
    }
    if params.alpha == 0 {
        return Err(Error::InvalidArgument("α must be at least 1".into()));
    }
    Ok(())
}

/// Both sides of `λ q^{l(α-1)} B_n(t+1) - B_n(t) = n [l]_q B^{(α-1)}_{n-1}(t)`.
pub fn difference_sides(n: u32, t: f64, params: &QBernoulliParams) -> Result<(f64, f64)> {
    require_order(n, params)?;
    let lhs = params.multiplier() * shifted_eval(n, t + 1.0, params)? - shifted_eval(n, t, params)?;
    let lowered = params.with_alpha(params.alpha - 1);
    let rhs = n as f64 * q_number(params.l as f64, params.q) * shifted_eval(n - 1, t, &lowered)?;
    Ok((lhs, rhs))
}

/// Absolute residual of the difference relation at `t`.
pub fn verify_difference_relation(n: u32, t: f64, params: &QBernoulliParams) -> Result<f64> {
    let (lhs, rhs) = difference_sides(n, t, params)?;
    Ok((lhs - rhs).abs())
}

/// Test function for the semigroup identity:
/// `f(i) = (λ q^{l(α-1)})^{floor((x+i)/m)} B^{(α)}_{n;q^l;y}(i/m; λ)`.
#[derive(Debug, Clone, Copy)]
pub struct SemigroupQFunction {
    pub params: QBernoulliParams,
    pub n: u32,
    pub m: u64,
    pub x: f64,
}

impl SemigroupQFunction {
    fn weight(&self, i: u64) -> f64 {
        let exponent = ((self.x + i as f64) / self.m as f64).floor();
        self.params.multiplier().powf(exponent)
    }

    pub fn eval(&self, i: u64) -> Result<f64> {
        Ok(self.weight(i) * shifted_eval(self.n, i as f64 / self.m as f64, &self.params)?)
    }

    /// Closed form of `f(i + m) - f(i)` given by the difference relation.
    pub fn difference(&self, i: u64) -> Result<f64> {
        require_order(self.n, &self.params)?;
        let lowered = self.params.with_alpha(self.params.alpha - 1);
        let scale = self.n as f64 * q_number(self.params.l as f64, self.params.q);
        Ok(self.weight(i) * scale * shifted_eval(self.n - 1, i as f64 / self.m as f64, &lowered)?)
    }

    /// `|f(i + m) - f(i) - difference(i)|`.
    pub fn difference_residual(&self, i: u64) -> Result<f64> {
        Ok((self.eval(i + self.m)? - self.eval(i)? - self.difference(i)?).abs())
    }
}

/// Builds `f` on `0..=top` for the semigroup specialization.
pub fn build_f_semigroup(
    params: &QBernoulliParams,
    n: u32,
    m: u64,
    x: f64,
    top: u64,
) -> Result<Vec<f64>> {
    params.validate()?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let f = SemigroupQFunction {
        params: *params,
        n,
        m,
        x,
    };
    (0..=top).map(|i| f.eval(i)).collect()
}

/// Test function for the root-system specialization:
/// `f(i) = (λ q^{l(α-1)})^i B^{(α)}_{n;q^l;y}(i; λ)`.
pub fn root_q_function(params: &QBernoulliParams, n: u32, i: u64) -> Result<f64> {
    Ok(params.multiplier().powi(i as i32) * shifted_eval(n, i as f64, params)?)
}

/// `|B(tol) - B(1e-17)|` for the base family at `(k, t)`.
pub fn truncation_shift(k: u32, t: f64, params: &QBernoulliParams) -> Result<f64> {
    let loose = base_eval(k, t, params)?;
    let tight = base_eval(k, t, &params.with_tolerance(TIGHT_TRUNCATION_TOL))?;
    Ok((loose - tight).abs())
}
