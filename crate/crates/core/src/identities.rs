//! Two-sided verification of the Apéry-set identities along the canonical
//! path.
//!
//! Every verifier evaluates the left side (a sum over path steps `i = 1..=n`
//! and subsets `J` of `T_i`) and the right side (subset sums over `S^(m)`
//! minus subset sums over `{0, ..., m-1}`) from their defining enumerations.
//! Neither side is derived from the other. On inequality the report names the
//! first step whose contribution disagrees with the vertex-wise difference.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num::{BigInt, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::qbernoulli::{self, QBernoulliParams, SemigroupQFunction};
use crate::rational::{binomial, binomial_u128, to_ratio_string, uint, Rational};
use crate::report::{IdentityReport, ReportValue};
use crate::semigroup::{AperySet, NumericalSemigroup};
use crate::symmetric::{self, divided_difference, FactorSign, Poly};
use crate::tree_path::CanonicalPath;

/// Largest number of `p`-subsets of an Apéry set that a verifier enumerates.
pub const SUBSET_LIMIT: u128 = 100_000;

/// An exact rational function on `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    values: Vec<Rational>,
    injective: bool,
}

impl FunctionTable {
    pub fn new(values: Vec<Rational>) -> Self {
        let distinct: std::collections::HashSet<&Rational> = values.iter().collect();
        let injective = distinct.len() == values.len();
        Self { values, injective }
    }

    pub fn from_fn(n_max: u64, f: impl FnMut(u64) -> Rational) -> Self {
        Self::new((0..=n_max).map(f).collect())
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// Panics outside the domain; verifiers check coverage up front.
    pub fn value(&self, i: u64) -> &Rational {
        &self.values[i as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Whether all values on the whole domain are distinct.
    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn require_domain(&self, need: u64) -> Result<()> {
        if self.values.is_empty() || self.n_max() < need {
            return Err(Error::DomainTooSmall {
                need,
                have: self.values.len() as u64 - 1,
            });
        }
        Ok(())
    }

    /// Fails with the first colliding pair among `points`.
    pub fn require_injective_on(&self, points: impl IntoIterator<Item = u64>) -> Result<()> {
        let mut seen: HashMap<&Rational, u64> = HashMap::new();
        for a in points {
            if let Some(&b) = seen.get(self.value(a)) {
                return Err(Error::NotInjective(b, a));
            }
            seen.insert(self.value(a), a);
        }
        Ok(())
    }

    fn image(&self, points: &[u64]) -> Vec<Rational> {
        points.iter().map(|&a| self.value(a).clone()).collect()
    }
}

type CustomFn = dyn Fn(&[Rational]) -> Rational + Send + Sync;

/// A user-supplied function of `p` rationals, evaluated on arguments in the
/// order `f{J}` (increasing `J`) followed by the extra point.
#[derive(Clone)]
pub struct CustomFunction {
    pub name: String,
    pub func: Arc<CustomFn>,
}

impl CustomFunction {
    pub fn new(name: &str, func: impl Fn(&[Rational]) -> Rational + Send + Sync + 'static) -> Self {
        Self {
            name: name.to_string(),
            func: Arc::new(func),
        }
    }
}

impl fmt::Debug for CustomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFunction({})", self.name)
    }
}

/// The function `F(x_1, ..., x_p)` summed over subsets.
#[derive(Debug, Clone)]
pub enum SymmetricKind {
    Elementary(usize),
    Complete(usize),
    PowerSum(u32),
    /// `prod (z + x_i)`, polynomial valued.
    ProductZ,
    /// `prod (z - x_i)^{-1}` at a fixed rational `z`.
    InverseProductZ(Rational),
    DividedDifference(Poly),
    Custom(CustomFunction),
}

impl SymmetricKind {
    /// Evaluates `F`; scalar results are constant polynomials.
    pub fn eval(&self, xs: &[Rational]) -> Result<Poly> {
        Ok(match self {
            Self::Elementary(k) => Poly::constant(symmetric::elementary(*k, xs)),
            Self::Complete(k) => Poly::constant(symmetric::complete(*k, xs)),
            Self::PowerSum(k) => Poly::constant(
                xs.iter().map(|x| crate::rational::pow(x, *k)).sum(),
            ),
            Self::ProductZ => symmetric::product_poly(xs, FactorSign::Plus),
            Self::InverseProductZ(z) => {
                let mut acc = Rational::one();
                for x in xs {
                    let d = z - x;
                    if d.is_zero() {
                        return Err(Error::PoleHit(to_ratio_string(z)));
                    }
                    acc /= d;
                }
                Poly::constant(acc)
            }
            Self::DividedDifference(w) => Poly::constant(divided_difference(w, xs)?),
            Self::Custom(c) => Poly::constant((c.func)(xs)),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Self::Elementary(k) => format!("e_{k}"),
            Self::Complete(k) => format!("h_{k}"),
            Self::PowerSum(k) => format!("p_{k}"),
            Self::ProductZ => "prod(z+x)".into(),
            Self::InverseProductZ(z) => format!("prod(z-x)^-1 at z={}", to_ratio_string(z)),
            Self::DividedDifference(w) => format!("divided difference of {w}"),
            Self::Custom(c) => c.name.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricSpec {
    pub kind: SymmetricKind,
    pub p: usize,
}

/// Values that can be multiplied along a subset and summed over subsets.
trait SubsetWeight: Clone {
    fn empty_sum() -> Self;
    fn empty_product() -> Self;
    fn times(&self, other: &Self) -> Self;
    fn plus(&mut self, other: &Self);
}

impl SubsetWeight for Rational {
    fn empty_sum() -> Self {
        Zero::zero()
    }
    fn empty_product() -> Self {
        One::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&mut self, other: &Self) {
        *self += other;
    }
}

impl SubsetWeight for Poly {
    fn empty_sum() -> Self {
        Poly::zero()
    }
    fn empty_product() -> Self {
        Poly::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&mut self, other: &Self) {
        *self = &*self + other;
    }
}

/// `sum over r-subsets I of prod_{j in I} weights[j]`, enumerating every
/// subset in lexicographic order and sharing prefix products.
fn subset_product_sum<W: SubsetWeight>(weights: &[W], r: usize) -> W {
    fn walk<W: SubsetWeight>(weights: &[W], start: usize, r: usize, prefix: &W, acc: &mut W) {
        if r == 0 {
            acc.plus(prefix);
            return;
        }
        for j in start..=weights.len() - r {
            walk(weights, j + 1, r - 1, &prefix.times(&weights[j]), acc);
        }
    }
    let mut acc = W::empty_sum();
    if r <= weights.len() {
        walk(weights, 0, r, &W::empty_product(), &mut acc);
    }
    acc
}

/// Values of `f` on a finite point set written as `values[a] / scale` with a
/// common positive denominator, so inner enumerations run over integers.
struct Scaled {
    scale: BigInt,
    values: HashMap<u64, BigInt>,
}

impl Scaled {
    fn new(f: &FunctionTable, points: impl IntoIterator<Item = u64>) -> Self {
        let points: Vec<u64> = points.into_iter().collect();
        let scale = points
            .iter()
            .fold(BigInt::one(), |acc, &a| acc.lcm(f.value(a).denom()));
        let values = points
            .iter()
            .map(|&a| {
                let v = f.value(a);
                (a, v.numer() * (&scale / v.denom()))
            })
            .collect();
        Self { scale, values }
    }

    fn get(&self, a: u64) -> &BigInt {
        &self.values[&a]
    }

    fn image(&self, points: &[u64]) -> Vec<BigInt> {
        points.iter().map(|&a| self.values[&a].clone()).collect()
    }

    /// `x / B^k`.
    fn unscale(&self, x: BigInt, k: usize) -> Rational {
        Rational::new(x, num::pow(self.scale.clone(), k))
    }

    /// `B^{-r} q(Bz)` as a polynomial in `z`.
    fn unscale_poly(&self, q: &ZPoly, r: usize) -> Poly {
        let denom = num::pow(self.scale.clone(), r);
        let mut power = BigInt::one();
        let mut coeffs = Vec::with_capacity(q.0.len());
        for c in &q.0 {
            coeffs.push(Rational::new(c * &power, denom.clone()));
            power *= &self.scale;
        }
        Poly::new(coeffs)
    }
}

/// Integer polynomial, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
struct ZPoly(Vec<BigInt>);

impl SubsetWeight for ZPoly {
    fn empty_sum() -> Self {
        ZPoly(Vec::new())
    }
    fn empty_product() -> Self {
        ZPoly(vec![BigInt::one()])
    }
    fn times(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly(out)
    }
    fn plus(&mut self, other: &Self) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), BigInt::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }
}

impl SubsetWeight for BigInt {
    fn empty_sum() -> Self {
        Zero::zero()
    }
    fn empty_product() -> Self {
        One::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&mut self, other: &Self) {
        *self += other;
    }
}

/// `e_k` of integers via the coefficients of `prod (1 + x t)`.
fn int_elementary(k: usize, xs: &[BigInt]) -> BigInt {
    let mut e = vec![BigInt::zero(); k + 1];
    e[0] = BigInt::one();
    for x in xs {
        for j in (1..=k).rev() {
            let add = x * &e[j - 1];
            e[j] += add;
        }
    }
    e.swap_remove(k)
}

/// `h_k` of integers via the coefficients of `prod 1/(1 - x t)`.
fn int_complete(k: usize, xs: &[BigInt]) -> BigInt {
    let mut h = vec![BigInt::zero(); k + 1];
    h[0] = BigInt::one();
    for x in xs {
        for j in 1..=k {
            let add = x * &h[j - 1];
            h[j] += add;
        }
    }
    h.swap_remove(k)
}

/// Lagrange-form divided differences of `w` at nodes `F_j / B`.
///
/// With `W = L w` integral and of degree `D`, and `A_j = sum_d W_d F_j^d B^{D-d}`,
/// `Δ(w; F/B) = B^{n-1-D} / L * sum_j A_j / prod_{k != j} (F_j - F_k)` on `n`
/// nodes. [`Self::subset_sum`] returns sums of the inner sum over many node
/// sets; [`Self::unscale`] applies the prefactor.
struct ScaledDividedDifference<'a> {
    coeffs: Vec<BigInt>,
    coeff_denom: BigInt,
    scale: &'a BigInt,
}

impl<'a> ScaledDividedDifference<'a> {
    fn new(w: &Poly, sc: &'a Scaled) -> Self {
        let coeff_denom = w
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let degree = w.coeffs().len().saturating_sub(1);
        let coeffs = w
            .coeffs()
            .iter()
            .enumerate()
            .map(|(d, c)| c.numer() * (&coeff_denom / c.denom()) * num::pow(sc.scale.clone(), degree - d))
            .collect();
        Self {
            coeffs,
            coeff_denom,
            scale: &sc.scale,
        }
    }

    fn numerator(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |v, c| v * x + c)
    }

    /// `sum over subsets J of sum_{j in J} A_j / prod_{k in J, k != j} (F_j - F_k)`,
    /// with every subset given as indices into `ground`.
    ///
    /// Term `j` of subset `J` is rewritten over the full-ground denominator
    /// `Q_j = prod_{k != j} (F_j - F_k)` by multiplying with the factors for
    /// `k` outside `J`, so the enumeration itself stays in integers.
    fn subset_sum(&self, ground: &[BigInt], subsets: impl Iterator<Item = Vec<usize>>) -> Rational {
        let n = ground.len();
        let diff: Vec<Vec<BigInt>> = ground
            .iter()
            .map(|x| ground.iter().map(|y| x - y).collect())
            .collect();
        let mut weights = vec![BigInt::zero(); n];
        let mut inside = vec![false; n];
        for subset in subsets {
            inside.iter_mut().for_each(|b| *b = false);
            for &j in &subset {
                inside[j] = true;
            }
            for &j in &subset {
                let outside: BigInt = (0..n).filter(|&k| !inside[k]).map(|k| &diff[j][k]).product();
                weights[j] += outside;
            }
        }
        let mut acc = Rational::zero();
        for (j, weight) in weights.into_iter().enumerate() {
            if weight.is_zero() {
                continue;
            }
            let full: BigInt = (0..n).filter(|&k| k != j).map(|k| &diff[j][k]).product();
            acc += Rational::new(self.numerator(&ground[j]) * weight, full);
        }
        acc
    }

    fn unscale(&self, sum: Rational, nodes: usize) -> Rational {
        let degree = self.coeffs.len().saturating_sub(1) as i32;
        let exponent = nodes as i32 - 1 - degree;
        let b = Rational::from_integer(self.scale.clone());
        sum * num::pow::Pow::pow(&b, exponent) / Rational::from_integer(self.coeff_denom.clone())
    }
}

/// Path and Apéry data for one `(S, m)` pair, shared by all verifiers.
#[derive(Debug, Clone)]
pub struct Verifier {
    path: CanonicalPath,
}

impl Verifier {
    pub fn new(s: &NumericalSemigroup, m: u64) -> Result<Self> {
        Ok(Self {
            path: CanonicalPath::new(s, m)?,
        })
    }

    pub fn path(&self) -> &CanonicalPath {
        &self.path
    }

    pub fn semigroup(&self) -> &NumericalSemigroup {
        &self.path.base().semigroup
    }

    pub fn m(&self) -> u64 {
        self.path.m()
    }

    pub fn apery(&self) -> &AperySet {
        &self.path.base().apery
    }

    /// `0..m`.
    fn residues(&self) -> Vec<u64> {
        (0..self.m()).collect()
    }

    /// Largest argument any verifier passes to `f`.
    pub fn required_domain(&self) -> u64 {
        match self.semigroup().frobenius() {
            Some(fr) => fr + self.m(),
            None => self.m() - 1,
        }
    }

    /// `I_m`, `C(S)`, `C(S) + m` and `S^(m)`.
    pub fn relevant_points(&self) -> BTreeSet<u64> {
        let m = self.m();
        let gaps = self.semigroup().gaps();
        (0..m)
            .chain(gaps.iter().copied())
            .chain(gaps.iter().map(|g| g + m))
            .chain(self.apery().values().iter().copied())
            .collect()
    }

    fn check_p(&self, p: usize) -> Result<()> {
        let m = self.m() as usize;
        if p == 0 || p > m {
            return Err(Error::InvalidArgument(format!("p = {p} must lie in 1..={m}")));
        }
        let count = binomial_u128(m as u64, p as u64);
        if count > SUBSET_LIMIT {
            return Err(Error::EnumerationTooLarge {
                count,
                limit: SUBSET_LIMIT,
            });
        }
        Ok(())
    }

    fn check_injective(&self, f: &FunctionTable) -> Result<()> {
        f.require_injective_on(self.relevant_points())
    }

    /// `(f(c_i + m) - f(c_i), c_i, T_i)` for each step.
    fn steps<'a>(&'a self, f: &'a FunctionTable) -> impl Iterator<Item = (Rational, u64, &'a [u64])> {
        let m = self.m();
        self.path.steps().iter().map(move |st| {
            let c = st.frobenius_added;
            (f.value(c + m) - f.value(c), c, st.t_set.as_slice())
        })
    }

    /// `sum over p-subsets I of the vertex Apéry set of F(f{I})`.
    fn vertex_sum(&self, vertex: usize, f: &FunctionTable, kind: &SymmetricKind, p: usize) -> Result<Poly> {
        let set = self.path.vertex(vertex).apery.sorted();
        let mut acc = Poly::zero();
        for subset in set.iter().copied().combinations(p) {
            acc = &acc + &kind.eval(&f.image(&subset))?;
        }
        Ok(acc)
    }

    /// First step whose contribution differs from `H(S_i) - H(S_(i-1))`.
    fn step_witness(
        &self,
        f: &FunctionTable,
        kind: &SymmetricKind,
        p: usize,
        step_terms: &[Poly],
    ) -> Option<String> {
        for (i, term) in step_terms.iter().enumerate() {
            let child = self.vertex_sum(i + 1, f, kind, p).ok()?;
            let parent = self.vertex_sum(i, f, kind, p).ok()?;
            if *term != &child - &parent {
                let c = self.path.steps()[i].frobenius_added;
                return Some(format!(
                    "step {} (c = {c}): contribution {term} but H(S_i) - H(S_(i-1)) = {}",
                    i + 1,
                    &child - &parent
                ));
            }
        }
        Some("every step matches; the totals differ".into())
    }

    fn finish(
        &self,
        name: &str,
        lhs: &Poly,
        rhs: &Poly,
        witness: impl FnOnce() -> Option<String>,
    ) -> IdentityReport {
        let equal = lhs == rhs;
        let as_value = |p: &Poly| match p.degree() {
            None | Some(0) => ReportValue::from(&p.coeff(0)),
            Some(_) => ReportValue::from(p),
        };
        IdentityReport::exact(name, as_value(lhs), as_value(rhs), equal)
            .with_witness(if equal { None } else { witness() })
    }

    /// `sum_{i in C(S)} (f(i+m) - f(i)) = sum_{i<m} (f(a_i) - f(i))`.
    pub fn gassert_shor(&self, f: &FunctionTable) -> Result<IdentityReport> {
        self.gassert_shor_with_apery(self.apery(), f)
    }

    /// As [`Self::gassert_shor`] with the right side read from `apery`; on
    /// failure the witness is the first residue class whose two
    /// contributions disagree.
    pub fn gassert_shor_with_apery(&self, apery: &AperySet, f: &FunctionTable) -> Result<IdentityReport> {
        let m = self.m();
        f.require_domain(self.required_domain())?;
        if let Some(&top) = apery.values().iter().max() {
            f.require_domain(top)?;
        }
        let gaps = self.semigroup().gaps();
        let lhs: Rational = gaps.iter().map(|&g| f.value(g + m) - f.value(g)).sum();
        let rhs: Rational = (0..m)
            .map(|i| f.value(apery.values()[i as usize]) - f.value(i))
            .sum();
        let witness = || {
            (0..m).find_map(|r| {
                let by_gaps: Rational = gaps
                    .iter()
                    .filter(|&&g| g % m == r)
                    .map(|&g| f.value(g + m) - f.value(g))
                    .sum();
                let a = apery.values()[r as usize];
                let by_apery = f.value(a) - f.value(r);
                (by_gaps != by_apery).then(|| {
                    format!(
                        "residue class {r}: gap chain contributes {} but f(a_{r}) - f({r}) = {} with a_{r} = {a}",
                        to_ratio_string(&by_gaps),
                        to_ratio_string(&by_apery)
                    )
                })
            })
        };
        let equal = lhs == rhs;
        Ok(
            IdentityReport::exact("gassert-shor", (&lhs).into(), (&rhs).into(), equal)
                .with_witness(if equal { None } else { witness() }),
        )
    }

    /// The general subset identity for an arbitrary `F` of `p` arguments.
    pub fn general(&self, f: &FunctionTable, spec: &SymmetricSpec) -> Result<IdentityReport> {
        let p = spec.p;
        self.check_p(p)?;
        f.require_domain(self.required_domain())?;
        if matches!(spec.kind, SymmetricKind::DividedDifference(_)) {
            self.check_injective(f)?;
        }
        let mut step_terms = Vec::with_capacity(self.path.len());
        for (_, c, t) in self.steps(f) {
            let up = f.value(c + self.m()).clone();
            let down = f.value(c).clone();
            let mut term = Poly::zero();
            for j in t.iter().copied().combinations(p - 1) {
                let mut xs = f.image(&j);
                xs.push(up.clone());
                let with_up = spec.kind.eval(&xs)?;
                *xs.last_mut().unwrap() = down.clone();
                let with_down = spec.kind.eval(&xs)?;
                term = &term + &(&with_up - &with_down);
            }
            step_terms.push(term);
        }
        let lhs = step_terms.iter().fold(Poly::zero(), |acc, t| &acc + t);
        let mut rhs = Poly::zero();
        for subset in self.apery().sorted().into_iter().combinations(p) {
            rhs = &rhs + &spec.kind.eval(&f.image(&subset))?;
        }
        for subset in self.residues().into_iter().combinations(p) {
            rhs = &rhs - &spec.kind.eval(&f.image(&subset))?;
        }
        Ok(self
            .finish("general", &lhs, &rhs, || {
                self.step_witness(f, &spec.kind, p, &step_terms)
            })
            .param("F", spec.kind.name())
            .param("p", p))
    }

    /// `f` on the relevant points as integers over a common denominator.
    fn scaled(&self, f: &FunctionTable) -> Scaled {
        Scaled::new(f, self.relevant_points())
    }

    /// Products `prod (z + f(a))` over subsets, compared coefficient-wise.
    pub fn prop1(&self, f: &FunctionTable, p: usize) -> Result<IdentityReport> {
        self.check_p(p)?;
        f.require_domain(self.required_domain())?;
        let sc = self.scaled(f);
        // prod_{a in I} (z + f(a)) = B^{-|I|} Q(Bz) with Q(w) = prod (w + F_a).
        let factors = |points: &[u64]| -> Vec<ZPoly> {
            points
                .iter()
                .map(|&a| ZPoly(vec![sc.get(a).clone(), BigInt::one()]))
                .collect()
        };
        let step_terms: Vec<Poly> = self
            .steps(f)
            .map(|(diff, _, t)| sc.unscale_poly(&subset_product_sum(&factors(t), p - 1), p - 1).scale(&diff))
            .collect();
        let lhs = step_terms.iter().fold(Poly::zero(), |acc, t| &acc + t);
        let rhs = &sc.unscale_poly(&subset_product_sum(&factors(&self.apery().sorted()), p), p)
            - &sc.unscale_poly(&subset_product_sum(&factors(&self.residues()), p), p);
        Ok(self
            .finish("prop1", &lhs, &rhs, || {
                self.step_witness(f, &SymmetricKind::ProductZ, p, &step_terms)
            })
            .param("p", p))
    }

    /// Degree bound `d` such that agreement of both sides of the
    /// inverse-product identity at `d + 1` non-pole points proves it.
    ///
    /// With `V` the distinct values of `f` on the relevant points, every term
    /// times `Q(z) = prod_{v in V} (z - v)^μ` is a polynomial of degree at most
    /// `μ |V| - p`, where `μ = 1` when `f` is injective there and `p + 1`
    /// otherwise.
    pub fn prop2_degree_bound(&self, f: &FunctionTable, p: usize) -> usize {
        let points = self.relevant_points();
        let values: BTreeSet<&Rational> = points.iter().map(|&a| f.value(a)).collect();
        let mu = if values.len() == points.len() { 1 } else { p + 1 };
        (mu * values.len()).saturating_sub(p)
    }

    /// `count` distinct integers above every value of `f` on the relevant
    /// points.
    pub fn prop2_samples(&self, f: &FunctionTable, count: usize) -> Vec<Rational> {
        let top = self
            .relevant_points()
            .iter()
            .map(|&a| num::Signed::abs(f.value(a)).ceil())
            .max()
            .unwrap_or_else(Rational::zero);
        (1..=count).map(|j| &top + uint(j as u64)).collect()
    }

    /// Products `prod (z - f(a))^{-1}` over subsets, compared at each sample.
    pub fn prop2(&self, f: &FunctionTable, p: usize, z_samples: &[Rational]) -> Result<IdentityReport> {
        self.check_p(p)?;
        f.require_domain(self.required_domain())?;
        let sc = self.scaled(f);
        let points: Vec<u64> = self.relevant_points().into_iter().collect();
        let mut lhs_values = Vec::with_capacity(z_samples.len());
        let mut rhs_values = Vec::with_capacity(z_samples.len());
        let mut first_bad = None;
        for (s, z) in z_samples.iter().enumerate() {
            // With z = u/v: 1/(z - f(a)) = C / D_a, C = Bv, D_a = Bu - v F_a.
            let c = &sc.scale * z.denom();
            let mut d: HashMap<u64, BigInt> = HashMap::new();
            for &a in &points {
                let da = &sc.scale * z.numer() - z.denom() * sc.get(a);
                if da.is_zero() {
                    return Err(Error::PoleHit(format!("{} = f({a})", to_ratio_string(z))));
                }
                d.insert(a, da);
            }
            // sum over r-subsets I of prod_{a in I} 1/(z - f(a)).
            let inverse_sum = |pts: &[u64], r: usize| -> Rational {
                let ds: Vec<BigInt> = pts.iter().map(|a| d[a].clone()).collect();
                let all: BigInt = ds.iter().product();
                // Over the common denominator, subset I contributes the
                // product of D over its complement.
                let numer = subset_product_sum(&ds, ds.len() - r);
                Rational::new(numer * num::pow(c.clone(), r), all)
            };
            let mut step_terms = Vec::with_capacity(self.path.len());
            for (diff, ci, t) in self.steps(f) {
                let outer = Rational::new(c.clone() * &c, &d[&ci] * &d[&(ci + self.m())]);
                step_terms.push(Poly::constant(diff * outer * inverse_sum(t, p - 1)));
            }
            let lhs: Rational = step_terms.iter().map(|t| t.coeff(0)).sum();
            let rhs = inverse_sum(&self.apery().sorted(), p) - inverse_sum(&self.residues(), p);
            if lhs != rhs && first_bad.is_none() {
                let kind = SymmetricKind::InverseProductZ(z.clone());
                let detail = self.step_witness(f, &kind, p, &step_terms).unwrap_or_default();
                first_bad = Some(format!("sample {s} (z = {}): {detail}", to_ratio_string(z)));
            }
            lhs_values.push(lhs);
            rhs_values.push(rhs);
        }
        let bound = self.prop2_degree_bound(f, p);
        let equal = first_bad.is_none();
        Ok(IdentityReport::exact(
            "prop2",
            lhs_values.as_slice().into(),
            rhs_values.as_slice().into(),
            equal,
        )
        .with_witness(first_bad)
        .param("p", p)
        .param("degree_bound", bound)
        .param("samples", z_samples.len())
        .param("certified", equal && z_samples.len() > bound))
    }

    /// Prop 2 at `degree_bound + 1` automatically chosen samples.
    pub fn prop2_certified(&self, f: &FunctionTable, p: usize) -> Result<IdentityReport> {
        self.check_p(p)?;
        f.require_domain(self.required_domain())?;
        let samples = self.prop2_samples(f, self.prop2_degree_bound(f, p) + 1);
        self.prop2(f, p, &samples)
    }

    /// `sum_i (f(c_i+m) - f(c_i)) sum_J e_{k-1}(f{J})` against `e_k` subset sums.
    pub fn prop3(&self, f: &FunctionTable, p: usize, k: usize) -> Result<IdentityReport> {
        self.check_p(p)?;
        if k == 0 || k > p {
            return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={p}")));
        }
        f.require_domain(self.required_domain())?;
        let sc = self.scaled(f);
        // e_k(f{I}) = e_k(F{I}) / B^k.
        let step_terms: Vec<Poly> = self
            .steps(f)
            .map(|(diff, _, t)| {
                let inner: BigInt = t
                    .iter()
                    .copied()
                    .combinations(p - 1)
                    .map(|j| int_elementary(k - 1, &sc.image(&j)))
                    .sum();
                Poly::constant(diff * sc.unscale(inner, k - 1))
            })
            .collect();
        let side = |points: Vec<u64>| -> BigInt {
            points
                .into_iter()
                .combinations(p)
                .map(|i| int_elementary(k, &sc.image(&i)))
                .sum()
        };
        let lhs = step_terms.iter().fold(Poly::zero(), |acc, t| &acc + t);
        let rhs = Poly::constant(sc.unscale(side(self.apery().sorted()) - side(self.residues()), k));
        Ok(self
            .finish("prop3", &lhs, &rhs, || {
                self.step_witness(f, &SymmetricKind::Elementary(k), p, &step_terms)
            })
            .param("p", p)
            .param("k", k))
    }

    /// `sum_i (f(c_i+m) - f(c_i)) sum_J h_{k-1}(f{J}, f(c_i), f(c_i+m))`
    /// against `h_k` subset sums.
    pub fn prop4(&self, f: &FunctionTable, p: usize, k: usize) -> Result<IdentityReport> {
        self.check_p(p)?;
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        f.require_domain(self.required_domain())?;
        let sc = self.scaled(f);
        let m = self.m();
        let step_terms: Vec<Poly> = self
            .steps(f)
            .map(|(diff, c, t)| {
                let inner: BigInt = t
                    .iter()
                    .copied()
                    .combinations(p - 1)
                    .map(|mut j| {
                        j.extend([c, c + m]);
                        int_complete(k - 1, &sc.image(&j))
                    })
                    .sum();
                Poly::constant(diff * sc.unscale(inner, k - 1))
            })
            .collect();
        let side = |points: Vec<u64>| -> BigInt {
            points
                .into_iter()
                .combinations(p)
                .map(|i| int_complete(k, &sc.image(&i)))
                .sum()
        };
        let lhs = step_terms.iter().fold(Poly::zero(), |acc, t| &acc + t);
        let rhs = Poly::constant(sc.unscale(side(self.apery().sorted()) - side(self.residues()), k));
        Ok(self
            .finish("prop4", &lhs, &rhs, || {
                self.step_witness(f, &SymmetricKind::Complete(k), p, &step_terms)
            })
            .param("p", p)
            .param("k", k))
    }

    /// Divided differences of `w` on `p + 1` nodes per step term against
    /// divided differences on `p`-subsets. Requires `f` injective on the
    /// relevant points.
    pub fn prop5(&self, f: &FunctionTable, p: usize, w: &Poly) -> Result<IdentityReport> {
        self.check_p(p)?;
        f.require_domain(self.required_domain())?;
        self.check_injective(f)?;
        let sc = self.scaled(f);
        let dd = ScaledDividedDifference::new(w, &sc);
        let m = self.m();
        let step_terms: Vec<Poly> = self
            .steps(f)
            .map(|(diff, c, t)| {
                // Ground set T_i, c_i, c_i + m; subsets J + {c_i, c_i + m}.
                let mut ground_points = t.to_vec();
                ground_points.extend([c, c + m]);
                let ground = sc.image(&ground_points);
                let n = t.len();
                let subsets = (0..n).combinations(p - 1).map(|mut j| {
                    j.extend([n, n + 1]);
                    j
                });
                let inner = dd.subset_sum(&ground, subsets);
                Poly::constant(diff * dd.unscale(inner, p + 1))
            })
            .collect();
        let side = |points: Vec<u64>| -> Rational {
            let ground = sc.image(&points);
            dd.subset_sum(&ground, (0..points.len()).combinations(p))
        };
        let lhs = step_terms.iter().fold(Poly::zero(), |acc, t| &acc + t);
        let rhs = Poly::constant(dd.unscale(side(self.apery().sorted()) - side(self.residues()), p));
        let kind = SymmetricKind::DividedDifference(w.clone());
        Ok(self
            .finish("prop5", &lhs, &rhs, || self.step_witness(f, &kind, p, &step_terms))
            .param("p", p)
            .param("w", w.to_ratio_strings()))
    }

    fn require_prop6(&self, k: u32, p: usize) -> Result<()> {
        let m = self.m() as usize;
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if p == 0 || p >= m {
            return Err(Error::InvalidArgument(format!("p = {p} must lie in 1..{m}")));
        }
        self.check_p(p)
    }

    /// `sum_{j=1}^k C(k,j) c^{k-j} m^j = (c + m)^k - c^k`, expanded.
    fn binomial_correction(&self, c: u64, k: u32) -> BigInt {
        let m = BigInt::from(self.m());
        let c = BigInt::from(c);
        (1..=k)
            .map(|j| binomial(k as u64, j as u64) * num::pow(c.clone(), (k - j) as usize) * num::pow(m.clone(), j as usize))
            .sum()
    }

    /// `prod over p-subsets I of the nonzero part of the vertex Apéry set of
    /// sum_{a in I} a^k`.
    fn power_sum_product(set: &[u64], p: usize, k: u32) -> BigInt {
        set.iter()
            .copied()
            .filter(|&a| a != 0)
            .combinations(p)
            .map(|i| i.iter().map(|&a| num::pow(BigInt::from(a), k as usize)).sum::<BigInt>())
            .product()
    }

    /// The multiplicative specialization with `H = prod_I sum_{a in I} a^k`.
    pub fn prop6(&self, k: u32, p: usize) -> Result<IdentityReport> {
        self.require_prop6(k, p)?;
        let mut factors = Vec::with_capacity(self.path.len());
        for st in self.path.steps() {
            let c = st.frobenius_added;
            let correction = Rational::from_integer(self.binomial_correction(c, k));
            let c_k = num::pow(BigInt::from(c), k as usize);
            let nonzero: Vec<u64> = st.t_set.iter().copied().filter(|&a| a != 0).collect();
            let mut factor = Rational::one();
            for j in nonzero.into_iter().combinations(p - 1) {
                let denom: BigInt = j.iter().map(|&a| num::pow(BigInt::from(a), k as usize)).sum::<BigInt>() + &c_k;
                if denom.is_zero() {
                    return Err(Error::Invariant("zero power-sum denominator".into()));
                }
                factor *= Rational::one() + &correction / Rational::from_integer(denom);
            }
            factors.push(factor);
        }
        let lhs: Rational = factors.iter().product();
        let rhs = Rational::new(
            Self::power_sum_product(&self.apery().sorted(), p, k),
            Self::power_sum_product(&self.residues(), p, k),
        );
        let equal = lhs == rhs;
        let witness = || {
            factors.iter().enumerate().find_map(|(i, factor)| {
                let child = Self::power_sum_product(&self.path.vertex(i + 1).apery.sorted(), p, k);
                let parent = Self::power_sum_product(&self.path.vertex(i).apery.sorted(), p, k);
                let ratio = Rational::new(child, parent);
                (*factor != ratio).then(|| {
                    format!(
                        "step {} (c = {}): factor {} but H(S_i)/H(S_(i-1)) = {}",
                        i + 1,
                        self.path.steps()[i].frobenius_added,
                        to_ratio_string(factor),
                        to_ratio_string(&ratio)
                    )
                })
            })
        };
        Ok(
            IdentityReport::exact("prop6", (&lhs).into(), (&rhs).into(), equal)
                .with_witness(if equal { None } else { witness() })
                .param("p", p)
                .param("k", k),
        )
    }

    /// The `p = m - 1` display of the multiplicative specialization, with a
    /// single factor per step built from all of `T_i`.
    pub fn prop6_top(&self, k: u32) -> Result<IdentityReport> {
        let m = self.m();
        if m < 2 {
            return Err(Error::InvalidArgument("m must be at least 2".into()));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let pow = |a: u64| num::pow(BigInt::from(a), k as usize);
        let lhs: Rational = self
            .path
            .steps()
            .iter()
            .map(|st| {
                let c = st.frobenius_added;
                let denom: BigInt = st.t_set.iter().map(|&a| pow(a)).sum::<BigInt>() + pow(c);
                Rational::one()
                    + Rational::new(self.binomial_correction(c, k), denom)
            })
            .product();
        let rhs = Rational::new(
            self.apery().values().iter().map(|&a| pow(a)).sum(),
            (0..m).map(pow).sum(),
        );
        let equal = lhs == rhs;
        Ok(IdentityReport::exact("prop6-top", (&lhs).into(), (&rhs).into(), equal)
            .param("p", m - 1)
            .param("k", k))
    }

    /// The `p = 1` display: `prod_i (1 + m / c_i) = prod_{a in S^(m), a > 0} a / (m-1)!`.
    pub fn prop6_linear(&self) -> Result<IdentityReport> {
        let m = self.m();
        if m < 2 {
            return Err(Error::InvalidArgument("m must be at least 2".into()));
        }
        let lhs: Rational = self
            .path
            .steps()
            .iter()
            .map(|st| Rational::one() + Rational::new(BigInt::from(m), BigInt::from(st.frobenius_added)))
            .product();
        let numer: BigInt = self.apery().values().iter().filter(|&&a| a != 0).map(|&a| BigInt::from(a)).product();
        let factorial: BigInt = (1..m).map(BigInt::from).product();
        let rhs = Rational::new(numer, factorial);
        let equal = lhs == rhs;
        Ok(IdentityReport::exact("prop6-linear", (&lhs).into(), (&rhs).into(), equal).param("p", 1))
    }

    /// The Gassert–Shor identity for the q-Bernoulli test function, in
    /// floating point.
    pub fn qbernoulli_gs(&self, params: &QBernoulliParams, n: u32, x: f64) -> Result<IdentityReport> {
        params.validate()?;
        let m = self.m();
        let f = SemigroupQFunction {
            params: *params,
            n,
            m,
            x,
        };
        let mut lhs = 0.0;
        for &g in self.semigroup().gaps() {
            lhs += f.difference(g)?;
        }
        let mut rhs = 0.0;
        for (i, &a) in self.apery().values().iter().enumerate() {
            rhs += f.eval(a)? - f.eval(i as u64)?;
        }
        Ok(
            IdentityReport::numeric("qbernoulli-gassert-shor", lhs, rhs, qbernoulli::SPECIALIZATION_TOLERANCE)
                .param("q", params.q)
                .param("l", params.l)
                .param("y", params.y)
                .param("alpha", params.alpha)
                .param("lambda", params.lambda)
                .param("n", n)
                .param("x", x),
        )
    }
}

pub fn verify_gassert_shor(s: &NumericalSemigroup, m: u64, f: &FunctionTable) -> Result<IdentityReport> {
    Verifier::new(s, m)?.gassert_shor(f)
}

pub fn verify_general(
    s: &NumericalSemigroup,
    m: u64,
    f: &FunctionTable,
    spec: &SymmetricSpec,
) -> Result<IdentityReport> {
    Verifier::new(s, m)?.general(f, spec)
}

pub fn verify_prop1(s: &NumericalSemigroup, m: u64, f: &FunctionTable, p: usize) -> Result<IdentityReport> {
    Verifier::new(s, m)?.prop1(f, p)
}

pub fn verify_prop2(
    s: &NumericalSemigroup,
    m: u64,
    f: &FunctionTable,
    p: usize,
    z_samples: &[Rational],
) -> Result<IdentityReport> {
    Verifier::new(s, m)?.prop2(f, p, z_samples)
}

pub fn verify_prop3(s: &NumericalSemigroup, m: u64, f: &FunctionTable, p: usize, k: usize) -> Result<IdentityReport> {
    Verifier::new(s, m)?.prop3(f, p, k)
}

pub fn verify_prop4(s: &NumericalSemigroup, m: u64, f: &FunctionTable, p: usize, k: usize) -> Result<IdentityReport> {
    Verifier::new(s, m)?.prop4(f, p, k)
}

pub fn verify_prop5(s: &NumericalSemigroup, m: u64, f: &FunctionTable, p: usize, w: &Poly) -> Result<IdentityReport> {
    Verifier::new(s, m)?.prop5(f, p, w)
}

pub fn verify_prop6(s: &NumericalSemigroup, m: u64, k: u32, p: usize) -> Result<IdentityReport> {
    Verifier::new(s, m)?.prop6(k, p)
}

pub fn verify_qbernoulli_gs(
    s: &NumericalSemigroup,
    m: u64,
    params: &QBernoulliParams,
    n: u32,
    x: f64,
) -> Result<IdentityReport> {
    Verifier::new(s, m)?.qbernoulli_gs(params, n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn three_five() -> Verifier {
        Verifier::new(&NumericalSemigroup::from_generators(&[3, 5]).unwrap(), 3).unwrap()
    }

    fn squares(n: u64) -> FunctionTable {
        FunctionTable::from_fn(n, |i| uint(i * i))
    }

    // f(i) = i^2 + i/7 + 1/(i+2): distinct and far from polynomial.
    fn generic(n: u64) -> FunctionTable {
        FunctionTable::from_fn(n, |i| uint(i * i) + ratio(i as i64, 7) + ratio(1, i as i64 + 2))
    }

    #[test]
    fn subset_product_sum_matches_elementary() {
        let xs: Vec<Rational> = [2, 3, 5, 7].iter().map(|&x| int(x)).collect();
        for r in 0..=5 {
            assert_eq!(subset_product_sum(&xs, r), symmetric::elementary(r, &xs));
        }
    }

    #[test]
    fn scaled_evaluations_match_rational_ones() {
        let f = generic(12);
        let points: Vec<u64> = vec![1, 3, 4, 8, 11];
        let sc = Scaled::new(&f, points.iter().copied());
        let xs = f.image(&points);
        for k in 0..=3 {
            assert_eq!(sc.unscale(int_elementary(k, &sc.image(&points)), k), symmetric::elementary(k, &xs));
            assert_eq!(sc.unscale(int_complete(k, &sc.image(&points)), k), symmetric::complete(k, &xs));
        }
        let w = &Poly::monomial(4) - &Poly::linear(ratio(2, 3));
        let dd = ScaledDividedDifference::new(&w, &sc);
        for r in 1..=4 {
            let expected: Rational = (0..points.len())
                .combinations(r)
                .map(|idx| {
                    let nodes: Vec<Rational> = idx.iter().map(|&i| xs[i].clone()).collect();
                    divided_difference(&w, &nodes).unwrap()
                })
                .sum();
            let got = dd.unscale(dd.subset_sum(&sc.image(&points), (0..points.len()).combinations(r)), r);
            assert_eq!(got, expected, "r = {r}");
        }
    }

    #[test]
    fn worked_gassert_shor() {
        let r = three_five().gassert_shor(&squares(10)).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, ReportValue::Scalar("120/1".into()));
        assert_eq!(r.rhs, ReportValue::Scalar("120/1".into()));
    }

    #[test]
    fn corrupted_apery_is_caught_with_its_residue() {
        let v = three_five();
        let bad = AperySet::from_parts_unchecked(3, vec![0, 7, 5], vec![0, 2, 1]);
        let r = v.gassert_shor_with_apery(&bad, &squares(10)).unwrap();
        assert!(!r.equal);
        assert!(r.witness.unwrap().starts_with("residue class 1"));
    }

    #[test]
    fn domain_is_checked() {
        assert_eq!(
            three_five().gassert_shor(&squares(9)),
            Err(Error::DomainTooSmall { need: 10, have: 9 })
        );
    }

    #[test]
    fn general_symmetric_and_not() {
        let v = three_five();
        let f = generic(10);
        for p in 1..=3 {
            for kind in [SymmetricKind::Elementary(2), SymmetricKind::PowerSum(3), SymmetricKind::ProductZ] {
                let r = v.general(&f, &SymmetricSpec { kind, p }).unwrap();
                assert!(r.equal, "{r:?}");
            }
        }
        // x_1 - 2 x_2 depends on argument order.
        let skew = CustomFunction::new("x1-2x2", |xs| &xs[0] - int(2) * &xs[1]);
        let spec = SymmetricSpec {
            kind: SymmetricKind::Custom(skew),
            p: 2,
        };
        let r = v.general(&f, &spec).unwrap();
        assert!(!r.equal);
        assert!(r.witness.unwrap().starts_with("step"));
    }

    #[test]
    fn propositions_on_three_five() {
        let v = three_five();
        let f = generic(10);
        for p in 1..=3 {
            assert!(v.prop1(&f, p).unwrap().equal);
            let r = v.prop2_certified(&f, p).unwrap();
            assert!(r.equal && r.params["certified"] == true, "{r:?}");
            for k in 1..=4 {
                if k <= p {
                    assert!(v.prop3(&f, p, k).unwrap().equal);
                }
                assert!(v.prop4(&f, p, k).unwrap().equal);
            }
            for j in 0..=3 {
                let w = Poly::monomial(p - 1 + j);
                assert!(v.prop5(&f, p, &w).unwrap().equal);
            }
        }
    }

    #[test]
    fn prop1_is_polynomial_valued() {
        let r = three_five().prop1(&squares(10), 2).unwrap();
        assert!(matches!(r.lhs, ReportValue::Vector(_)));
    }

    #[test]
    fn prop2_degree_bound_depends_on_injectivity() {
        let v = three_five();
        // Relevant points: 0..=2, gaps 1,2,4,7, shifted 4,5,7,10, Apéry 0,5,10.
        assert_eq!(v.relevant_points().len(), 7);
        assert_eq!(v.prop2_degree_bound(&generic(10), 2), 5);
        let parity = FunctionTable::from_fn(10, |i| uint(i % 2));
        assert_eq!(v.prop2_degree_bound(&parity, 2), 4);
        assert!(v.prop2_certified(&parity, 2).unwrap().equal);
    }

    #[test]
    fn prop5_requires_injectivity() {
        let parity = FunctionTable::from_fn(10, |i| uint(i % 2));
        let err = three_five().prop5(&parity, 1, &Poly::one()).unwrap_err();
        assert!(matches!(err, Error::NotInjective(_, _)));
    }

    #[test]
    fn multiplicative_specializations() {
        let v = three_five();
        let r = v.prop6(1, 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, ReportValue::Scalar("25/1".into()));
        assert!(v.prop6_linear().unwrap().equal);
        assert_eq!(v.prop6_linear().unwrap().rhs, ReportValue::Scalar("25/1".into()));
        for k in 1..=4 {
            assert!(v.prop6(k, 2).unwrap().equal);
            assert!(v.prop6_top(k).unwrap().equal);
        }
        assert!(v.prop6(1, 3).is_err());
    }

    #[test]
    fn p_range_and_enumeration_budget() {
        let v = three_five();
        assert!(v.prop1(&squares(10), 0).is_err());
        assert!(v.prop1(&squares(10), 4).is_err());
        let s = NumericalSemigroup::from_generators(&[40, 41]).unwrap();
        let wide = Verifier::new(&s, 40).unwrap();
        let f = FunctionTable::from_fn(wide.required_domain(), uint);
        assert!(matches!(wide.prop1(&f, 10), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn qbernoulli_specialization() {
        let r = three_five()
            .qbernoulli_gs(&QBernoulliParams::standard(), 2, 0.0)
            .unwrap();
        assert!(r.equal, "{r:?}");
    }
}
