//! Seeded identity suites: which checks run on each random instance.
//!
//! Instance `i` of a run with seed `s` draws everything from
//! [`instance_rng`]`(s, i)`, so instances can be evaluated in any order or in
//! parallel and still produce identical records.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::identities::{FunctionTable, SymmetricKind, SymmetricSpec, Verifier};
use crate::qbernoulli::{self, QBernoulliParams, SemigroupQFunction};
use crate::rational::{binomial_u128, uint, Rational};
use crate::report::{IdentityReport, InstanceRecord, ReportValue};
use crate::root_identities::{
    verify_divisor_identity, verify_height_sum, verify_height_product, verify_height_qbernoulli,
    verify_layer_counting, verify_mk_identity, verify_poincare_products,
};
use crate::roots::{RootLabel, RootSystem};
use crate::sampling::{
    instance_rng, random_injective_table, random_instance, random_rational,
    random_table_with_repeats, Distribution,
};
use crate::semigroup::NumericalSemigroup;
use crate::symmetric::Poly;
use crate::tree_path::{determinant_relation, telescoping_product, telescoping_sum, VertexFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    GassertShor,
    General,
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Prop6,
    Telescoping,
    Structure,
    QBernoulli,
    Roots,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::GassertShor,
        Suite::General,
        Suite::Prop1,
        Suite::Prop2,
        Suite::Prop3,
        Suite::Prop4,
        Suite::Prop5,
        Suite::Prop6,
        Suite::Telescoping,
        Suite::Structure,
        Suite::QBernoulli,
        Suite::Roots,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GassertShor => "gassert-shor",
            Suite::General => "general",
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3 => "prop3",
            Suite::Prop4 => "prop4",
            Suite::Prop5 => "prop5",
            Suite::Prop6 => "prop6",
            Suite::Telescoping => "telescoping",
            Suite::Structure => "structure",
            Suite::QBernoulli => "qbernoulli",
            Suite::Roots => "roots",
        }
    }

    /// Whether the suite works on `(S, m)` instances.
    pub fn uses_semigroup(self) -> bool {
        self != Suite::Roots
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub distribution: Distribution,
    /// Subset counts `binomial(m, p)` above this are skipped.
    pub max_subsets: u128,
    pub max_k: usize,
    /// Draw `f` from a small pool so that it repeats values.
    pub non_injective: bool,
    pub qbernoulli: QBernoulliParams,
    pub bernoulli_order: u32,
    /// Random vertex functions per path in the telescoping suite.
    pub vertex_functions: usize,
    pub max_window: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            distribution: Distribution::default(),
            max_subsets: 10_000,
            max_k: 4,
            non_injective: false,
            qbernoulli: QBernoulliParams::standard(),
            bernoulli_order: 2,
            vertex_functions: 100,
            max_window: 4,
        }
    }
}

/// Where instances come from: fresh random draws, or one fixed pair.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    Random,
    Fixed(NumericalSemigroup, u64),
}

fn table(rng: &mut impl Rng, n_max: u64, opts: &SuiteOptions) -> FunctionTable {
    if opts.non_injective {
        random_table_with_repeats(rng, n_max)
    } else {
        random_injective_table(rng, n_max)
    }
}

fn admissible_p(m: u64, opts: &SuiteOptions) -> impl Iterator<Item = usize> + '_ {
    (1..=m as usize).filter(move |&p| binomial_u128(m, p as u64) <= opts.max_subsets)
}

/// Records for instance `index` of `suite`.
pub fn run_instance(
    suite: Suite,
    seed: u64,
    index: u64,
    source: &InstanceSource,
    opts: &SuiteOptions,
) -> Result<Vec<InstanceRecord>> {
    let mut rng = instance_rng(seed, index);
    if suite == Suite::Roots {
        return roots_instance(&mut rng, index);
    }
    let (s, m) = match source {
        InstanceSource::Random => random_instance(&mut rng, &opts.distribution),
        InstanceSource::Fixed(s, m) => (s.clone(), *m),
    };
    let verifier = Verifier::new(&s, m)?;
    let reports = semigroup_reports(suite, &verifier, &mut rng, opts)?;
    Ok(reports
        .into_iter()
        .map(|r| InstanceRecord::new(Some((&s, m)), r))
        .collect())
}

fn semigroup_reports(
    suite: Suite,
    v: &Verifier,
    rng: &mut impl Rng,
    opts: &SuiteOptions,
) -> Result<Vec<IdentityReport>> {
    let m = v.m();
    let mut out = Vec::new();
    match suite {
        Suite::GassertShor => {
            let f = table(rng, v.required_domain(), opts);
            out.push(v.gassert_shor(&f)?);
        }
        Suite::General => {
            let f = table(rng, v.required_domain(), opts);
            for p in admissible_p(m, opts) {
                let k = rng.gen_range(1..=opts.max_k);
                let kind = match rng.gen_range(0..4) {
                    0 => SymmetricKind::Elementary(k.min(p)),
                    1 => SymmetricKind::Complete(k),
                    2 => SymmetricKind::PowerSum(k as u32),
                    _ => SymmetricKind::ProductZ,
                };
                out.push(v.general(&f, &SymmetricSpec { kind, p })?);
            }
        }
        Suite::Prop1 => {
            let f = table(rng, v.required_domain(), opts);
            for p in admissible_p(m, opts) {
                out.push(v.prop1(&f, p)?);
            }
        }
        Suite::Prop2 => {
            let f = table(rng, v.required_domain(), opts);
            for p in admissible_p(m, opts) {
                out.push(v.prop2_certified(&f, p)?);
            }
        }
        Suite::Prop3 => {
            let f = table(rng, v.required_domain(), opts);
            for p in admissible_p(m, opts) {
                for k in 1..=p.min(opts.max_k) {
                    out.push(v.prop3(&f, p, k)?);
                }
            }
        }
        Suite::Prop4 => {
            let f = table(rng, v.required_domain(), opts);
            for p in admissible_p(m, opts) {
                for k in 1..=opts.max_k {
                    out.push(v.prop4(&f, p, k)?);
                }
            }
        }
        Suite::Prop5 => {
            let f = table(rng, v.required_domain(), opts);
            for p in admissible_p(m, opts) {
                for j in 0..=3 {
                    out.push(v.prop5(&f, p, &Poly::monomial(p - 1 + j))?);
                }
            }
        }
        Suite::Prop6 => {
            let mut ps = vec![1, 2, m as usize - 1];
            ps.retain(|&p| p >= 1 && p < m as usize);
            ps.dedup();
            for k in 1..=opts.max_k as u32 {
                for &p in &ps {
                    out.push(v.prop6(k, p)?);
                }
                out.push(v.prop6_top(k)?);
            }
            out.push(v.prop6_linear()?);
        }
        Suite::Telescoping => telescoping_reports(v, rng, opts, &mut out)?,
        Suite::Structure => structure_reports(v, &mut out),
        Suite::QBernoulli => qbernoulli_reports(v, rng, opts, &mut out)?,
        Suite::Roots => unreachable!("handled by the caller"),
    }
    Ok(out)
}

fn pair(name: &str, (lhs, rhs): (Rational, Rational)) -> IdentityReport {
    let equal = lhs == rhs;
    IdentityReport::exact(name, (&lhs).into(), (&rhs).into(), equal)
}

fn telescoping_reports(
    v: &Verifier,
    rng: &mut impl Rng,
    opts: &SuiteOptions,
    out: &mut Vec<IdentityReport>,
) -> Result<()> {
    let path = v.path();
    for _ in 0..opts.vertex_functions {
        let h = VertexFunction::from_fn(path, |_, _| random_rational(rng));
        out.push(pair("telescoping-sum", telescoping_sum(&h, path)?));
        let nonzero = VertexFunction::new(
            h.values()
                .iter()
                .map(|x| if num::Zero::is_zero(x) { uint(1) } else { x.clone() })
                .collect(),
        );
        out.push(pair("telescoping-product", telescoping_product(&nonzero, path)?));
        let max_p = opts.max_window.min(path.len());
        if max_p == 0 {
            continue;
        }
        let p = rng.gen_range(1..=max_p);
        let fixed: Vec<Vec<Rational>> = (1..p)
            .map(|_| (0..p).map(|_| random_rational(rng)).collect())
            .collect();
        out.push(
            pair("determinant-relation", determinant_relation(&h, path, p, &fixed)?)
                .param("p", p),
        );
    }
    Ok(())
}

fn check(name: &str, result: Result<()>, value: ReportValue) -> IdentityReport {
    let ok = result.is_ok();
    IdentityReport::exact(name, value.clone(), value, ok).with_witness(result.err().map(|e| e.to_string()))
}

fn structure_reports(v: &Verifier, out: &mut Vec<IdentityReport>) {
    let s = v.semigroup();
    let apery = v.apery();
    let values = ReportValue::Vector(apery.values().iter().map(|a| format!("{a}/1")).collect());
    out.push(check("apery-invariants", apery.check_invariants(s), values.clone()));
    out.push(check("gap-chains", apery.check_gap_chains(s), values.clone()));
    out.push(check("window-reconstruction", apery.check_reconstruction(s), values.clone()));
    // The path constructor already rejects any step that is not a
    // one-element Apéry update; re-check each vertex independently here.
    let path_ok = v.path().vertices().iter().try_for_each(|vertex| {
        let fresh = vertex.semigroup.apery_set(v.m())?;
        if fresh != vertex.apery {
            return Err(Error::Invariant("stored Apéry set differs from a fresh computation".into()));
        }
        Ok(())
    });
    out.push(check("path-updates", path_ok, values));
    let heights = s.height_partition(v.m());
    let conj = match heights {
        Ok(b) if b.is_conjugate_to(apery) => Ok(()),
        Ok(b) => Err(Error::Invariant(format!(
            "height counts {:?} are not conjugate to A = {:?}",
            b.counts(),
            apery.counts()
        ))),
        Err(e) => Err(e),
    };
    let counts = ReportValue::Vector(apery.counts().iter().map(|a| format!("{a}/1")).collect());
    out.push(check("height-conjugacy", conj, counts));
}

fn qbernoulli_reports(
    v: &Verifier,
    rng: &mut impl Rng,
    opts: &SuiteOptions,
    out: &mut Vec<IdentityReport>,
) -> Result<()> {
    let params = &opts.qbernoulli;
    let n = opts.bernoulli_order;
    let m = v.m();
    let x = rng.gen_range(0.0..m as f64);
    out.push(v.qbernoulli_gs(params, n, x)?);
    let f = SemigroupQFunction {
        params: *params,
        n,
        m,
        x,
    };
    let top = v.semigroup().frobenius().unwrap_or(0);
    let mut worst = 0.0f64;
    for i in 0..=top {
        worst = worst.max(f.difference_residual(i)?);
    }
    out.push(
        IdentityReport::numeric("qbernoulli-difference", worst, 0.0, qbernoulli::DIFFERENCE_TOLERANCE)
            .param("n", n)
            .param("x", x),
    );
    Ok(())
}

/// Instance `index` of the roots suite checks every system with fresh
/// random functions, and the floor identities at `k = index + 1`.
fn roots_instance(rng: &mut impl Rng, index: u64) -> Result<Vec<InstanceRecord>> {
    let mut reports = Vec::new();
    for label in RootLabel::all() {
        let rs = RootSystem::build(label)?;
        let top = rs.exponents().last().copied().unwrap_or(0) + 1;
        let f = random_injective_table(rng, top);
        let g = random_injective_table(rng, top);
        reports.push(verify_poincare_products(&rs)?);
        reports.push(verify_height_sum(&rs, &f)?);
        reports.push(verify_layer_counting(&rs, &g)?);
        // Injective tables can still take the value zero once.
        if (1..=top).all(|i| !num::Zero::is_zero(f.value(i))) {
            reports.push(verify_height_product(&rs, &f)?);
        }
    }
    let k = index + 1;
    let floor_f = random_injective_table(rng, 2 * k);
    reports.push(verify_mk_identity(k, &floor_f)?);
    reports.push(verify_divisor_identity(k, &floor_f)?);
    Ok(reports.into_iter().map(|r| InstanceRecord::new(None, r)).collect())
}

/// Records that do not depend on the seed: the q-Bernoulli difference
/// relation on its parameter grid, truncation stability, and the worked
/// root-system specializations.
pub fn fixed_records(suite: Suite, opts: &SuiteOptions) -> Result<Vec<InstanceRecord>> {
    if suite != Suite::QBernoulli {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let base = &opts.qbernoulli;
    for report in difference_grid(base)? {
        out.push(InstanceRecord::new(None, report));
    }
    for label in ["A2", "G2"] {
        let rs = RootSystem::build(label.parse()?)?;
        out.push(InstanceRecord::new(
            None,
            verify_height_qbernoulli(&rs, base, opts.bernoulli_order)?,
        ));
    }
    let mut worst = 0.0f64;
    for k in 0..=4 {
        for t in [0.0, 0.5, 1.0] {
            worst = worst.max(qbernoulli::truncation_shift(k, t, base)?);
        }
    }
    out.push(InstanceRecord::new(
        None,
        IdentityReport::numeric("truncation-stability", worst, 0.0, qbernoulli::STABILITY_TOLERANCE),
    ));
    Ok(out)
}

/// The difference relation over `q in {0.3, 0.5, 0.7}`, `λ in {0.1, 0.25}`,
/// `l in {1, 2}`, `t in {0, 0.5, 1}`, `n in {1, 2, 3}`, `α in {1, 2}` and
/// `y in {0, 0.5}`, reduced to one report per `(q, λ, l)` cell.
pub fn difference_grid(base: &QBernoulliParams) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for q in [0.3, 0.5, 0.7] {
        for lambda in [0.1, 0.25] {
            for l in [1, 2] {
                let mut worst = 0.0f64;
                for alpha in [1, 2] {
                    for y in [0.0, 0.5] {
                        let params = QBernoulliParams::new(q, l, y, alpha, lambda)?
                            .with_tolerance(base.truncation_tol);
                        for n in 1..=3 {
                            for t in [0.0, 0.5, 1.0] {
                                worst = worst.max(qbernoulli::verify_difference_relation(n, t, &params)?);
                            }
                        }
                    }
                }
                out.push(
                    IdentityReport::numeric("qbernoulli-difference", worst, 0.0, qbernoulli::DIFFERENCE_TOLERANCE)
                        .param("q", q)
                        .param("lambda", lambda)
                        .param("l", l),
                );
            }
        }
    }
    Ok(out)
}
