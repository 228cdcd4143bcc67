//! Height/exponent identities on root systems and the two floor-function
//! identities that come from the same partial-summation argument.

use num::Zero;

use crate::error::{Error, Result};
use crate::identities::FunctionTable;
use crate::qbernoulli::{self, q_number, shifted_eval, QBernoulliParams};
use crate::rational::{uint, Rational};
use crate::report::{IdentityReport, ReportValue};
use crate::roots::{format_int_poly, macdonald_product, solomon_product, RootSystem};

/// Solomon and Macdonald forms of the Poincaré polynomial, compared exactly.
pub fn verify_poincare_products(rs: &RootSystem) -> Result<IdentityReport> {
    let solomon = solomon_product(rs);
    let macdonald = macdonald_product(rs)?;
    let equal = solomon == macdonald;
    let witness = (!equal).then(|| {
        format!(
            "Solomon {} vs Macdonald {}",
            format_int_poly(&solomon),
            format_int_poly(&macdonald)
        )
    });
    let coeffs = |p: &Vec<num::BigInt>| ReportValue::Vector(p.iter().map(|c| format!("{c}/1")).collect());
    Ok(
        IdentityReport::exact("poincare", coeffs(&solomon), coeffs(&macdonald), equal)
            .with_witness(witness)
            .param("system", rs.label().to_string()),
    )
}

fn require_heights(rs: &RootSystem, f: &FunctionTable) -> Result<u64> {
    let top = rs.exponents().last().copied().unwrap_or(0) + 1;
    f.require_domain(top)?;
    Ok(top)
}

/// `sum_r (f(ht r + 1) - f(ht r)) = sum_i (f(e_i + 1) - f(1))`.
pub fn verify_height_sum(rs: &RootSystem, f: &FunctionTable) -> Result<IdentityReport> {
    require_heights(rs, f)?;
    let lhs: Rational = rs
        .heights()
        .iter()
        .map(|&h| f.value(h + 1) - f.value(h))
        .sum();
    let rhs: Rational = rs
        .exponents()
        .iter()
        .map(|&e| f.value(e + 1) - f.value(1))
        .sum();
    let equal = lhs == rhs;
    Ok(
        IdentityReport::exact("height-sum", (&lhs).into(), (&rhs).into(), equal)
            .with_witness((!equal).then(|| height_layer_witness(rs)))
            .param("system", rs.label().to_string()),
    )
}

fn height_layer_witness(rs: &RootSystem) -> String {
    format!(
        "height counts {:?} vs exponents {:?}",
        rs.height_counts(),
        rs.exponents()
    )
}

/// `prod_r f(ht r + 1)/f(ht r) = prod_i f(e_i + 1)/f(1)`.
pub fn verify_height_product(rs: &RootSystem, f: &FunctionTable) -> Result<IdentityReport> {
    let top = require_heights(rs, f)?;
    if let Some(i) = (1..=top).find(|&i| f.value(i).is_zero()) {
        return Err(Error::UndefinedFraction(format!("f({i}) = 0")));
    }
    let lhs: Rational = rs
        .heights()
        .iter()
        .map(|&h| f.value(h + 1) / f.value(h))
        .product();
    let rhs: Rational = rs
        .exponents()
        .iter()
        .map(|&e| f.value(e + 1) / f.value(1))
        .product();
    let equal = lhs == rhs;
    Ok(
        IdentityReport::exact("height-product", (&lhs).into(), (&rhs).into(), equal)
            .with_witness((!equal).then(|| height_layer_witness(rs)))
            .param("system", rs.label().to_string()),
    )
}

/// `sum_r g(ht r) = sum_i sum_{h=1}^{e_i} g(h)`.
pub fn verify_layer_counting(rs: &RootSystem, g: &FunctionTable) -> Result<IdentityReport> {
    require_heights(rs, g)?;
    let lhs: Rational = rs.heights().iter().map(|&h| g.value(h).clone()).sum();
    let rhs: Rational = rs
        .exponents()
        .iter()
        .flat_map(|&e| 1..=e)
        .map(|h| g.value(h).clone())
        .sum();
    let equal = lhs == rhs;
    Ok(
        IdentityReport::exact("layer-counting", (&lhs).into(), (&rhs).into(), equal)
            .with_witness((!equal).then(|| height_layer_witness(rs)))
            .param("system", rs.label().to_string()),
    )
}

/// `M(k) = { i > 0 : k/i - floor(k/i) >= 1/2 }`, by the fractional-part test.
pub fn m_set(k: u64) -> Vec<u64> {
    let half = Rational::new(1.into(), 2.into());
    (1..=2 * k)
        .filter(|&i| {
            let ratio = Rational::new(k.into(), i.into());
            ratio.fract() >= half
        })
        .collect()
}

fn require_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    Ok(())
}

/// `sum_{i<=2k} f(i) (floor(2k/i) - 2 floor(k/i)) = sum_{i in M(k)} f(i)`.
pub fn verify_mk_identity(k: u64, f: &FunctionTable) -> Result<IdentityReport> {
    require_k(k)?;
    f.require_domain(2 * k)?;
    let lhs: Rational = (1..=2 * k)
        .map(|i| f.value(i) * uint(2 * k / i) - f.value(i) * uint(2 * (k / i)))
        .sum();
    let members = m_set(k);
    let rhs: Rational = members.iter().map(|&i| f.value(i).clone()).sum();
    let equal = lhs == rhs;
    Ok(IdentityReport::exact("mk", (&lhs).into(), (&rhs).into(), equal)
        .with_witness((!equal).then(|| format!("M({k}) = {members:?}")))
        .param("k", k))
}

/// `sum_{i<=k} f(i) (floor(k/i) - floor((k-1)/i)) = sum_{i | k} f(i)`.
pub fn verify_divisor_identity(k: u64, f: &FunctionTable) -> Result<IdentityReport> {
    require_k(k)?;
    f.require_domain(k)?;
    let lhs: Rational = (1..=k)
        .map(|i| f.value(i) * uint(k / i) - f.value(i) * uint((k - 1) / i))
        .sum();
    let divisors: Vec<u64> = (1..=k).filter(|&i| k.is_multiple_of(i)).collect();
    let rhs: Rational = divisors.iter().map(|&i| f.value(i).clone()).sum();
    let equal = lhs == rhs;
    Ok(IdentityReport::exact("divisor", (&lhs).into(), (&rhs).into(), equal)
        .with_witness((!equal).then(|| format!("divisors of {k}: {divisors:?}")))
        .param("k", k))
}

/// Root-system identity for `f(i) = (λ q^{l(α-1)})^i B^{(α)}_{n;q^l;y}(i; λ)`:
/// `n [l]_q sum_r (λ q^{l(α-1)})^{ht r} B^{(α-1)}_{n-1}(ht r) = sum_i (f(e_i+1) - f(1))`.
pub fn verify_height_qbernoulli(rs: &RootSystem, params: &QBernoulliParams, n: u32) -> Result<IdentityReport> {
    params.validate()?;
    if n == 0 || params.alpha == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and α >= 1".into()));
    }
    let lowered = params.with_alpha(params.alpha - 1);
    let multiplier = params.multiplier();
    let mut lhs = 0.0;
    for &h in &rs.heights() {
        lhs += multiplier.powi(h as i32) * shifted_eval(n - 1, h as f64, &lowered)?;
    }
    lhs *= n as f64 * q_number(params.l as f64, params.q);
    let f1 = qbernoulli::root_q_function(params, n, 1)?;
    let mut rhs = 0.0;
    for &e in rs.exponents() {
        rhs += qbernoulli::root_q_function(params, n, e + 1)? - f1;
    }
    Ok(
        IdentityReport::numeric("height-qbernoulli", lhs, rhs, qbernoulli::SPECIALIZATION_TOLERANCE)
            .param("system", rs.label().to_string())
            .param("q", params.q)
            .param("l", params.l)
            .param("y", params.y)
            .param("alpha", params.alpha)
            .param("lambda", params.lambda)
            .param("n", n),
    )
}

/// `f(i) = i^2` on `0..=top`, the running example for the height identity.
pub fn squares(top: u64) -> FunctionTable {
    FunctionTable::from_fn(top, |i| uint(i * i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::roots::RootLabel;

    fn system(s: &str) -> RootSystem {
        RootSystem::build(s.parse::<RootLabel>().unwrap()).unwrap()
    }

    #[test]
    fn a2_squares() {
        let r = verify_height_sum(&system("A2"), &squares(10)).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, ReportValue::Scalar("11/1".into()));
    }

    #[test]
    fn constant_function_gives_zero() {
        let f = FunctionTable::from_fn(10, |_| int(5));
        let r = verify_height_sum(&system("G2"), &f).unwrap();
        assert_eq!(r.lhs, ReportValue::Scalar("0/1".into()));
        assert!(r.equal);
    }

    #[test]
    fn multiplicative_rejects_zero() {
        let through_zero = FunctionTable::from_fn(10, |i| int(i as i64 - 2));
        let err = verify_height_product(&system("A2"), &through_zero).unwrap_err();
        assert!(matches!(err, Error::UndefinedFraction(_)));
        let shifted = FunctionTable::from_fn(10, |i| uint(i + 1));
        assert!(verify_height_product(&system("B3"), &shifted).unwrap().equal);
    }

    #[test]
    fn m_sets() {
        assert_eq!(m_set(1), vec![2]);
        assert_eq!(m_set(2), vec![3, 4]);
        let id = FunctionTable::from_fn(4, uint);
        let r = verify_mk_identity(2, &id).unwrap();
        assert!(r.equal);
        assert_eq!(r.rhs, ReportValue::Scalar("7/1".into()));
    }

    #[test]
    fn divisors() {
        let id = FunctionTable::from_fn(6, uint);
        let r = verify_divisor_identity(6, &id).unwrap();
        assert_eq!(r.rhs, ReportValue::Scalar("12/1".into()));
        assert!(r.equal);
        let one = FunctionTable::from_fn(13, |_| int(1));
        assert_eq!(
            verify_divisor_identity(13, &one).unwrap().lhs,
            ReportValue::Scalar("2/1".into())
        );
    }

    #[test]
    fn poincare_small() {
        let r = verify_poincare_products(&system("A2")).unwrap();
        assert!(r.equal);
        assert_eq!(
            r.lhs,
            ReportValue::Vector(["1/1", "2/1", "2/1", "1/1"].map(String::from).to_vec())
        );
    }

    #[test]
    fn qbernoulli_root_identity() {
        let params = QBernoulliParams::standard();
        for s in ["A2", "G2"] {
            let r = verify_height_qbernoulli(&system(s), &params, 2).unwrap();
            assert!(r.residual.unwrap() < 1e-9, "{s}: {:?}", r.residual);
        }
        let high = params.with_alpha(3);
        let r = verify_height_qbernoulli(&system("A2"), &high, 2).unwrap();
        assert_eq!(r.residual, Some(0.0));
    }
}
