//! Verification suites over one model, assembled into deterministic reports.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::{CalogeroError, ClosureForm, Model};
use crate::laxops::{LaxOperators, Letter};
use crate::polyring::{Poly, RatFun};
use crate::rootsys::{Family, RepKind, RepSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Lax,
    Closure,
    Commutators,
    Dtype,
    Msum,
    Basis,
    Hermite,
}

impl Suite {
    /// Member suites of `all`, in report order.
    pub const MEMBERS: [Suite; 7] =
        [Suite::Lax, Suite::Closure, Suite::Commutators, Suite::Dtype, Suite::Msum, Suite::Basis, Suite::Hermite];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Lax => "lax",
            Suite::Closure => "closure",
            Suite::Commutators => "commutators",
            Suite::Dtype => "dtype",
            Suite::Msum => "msum",
            Suite::Basis => "basis",
            Suite::Hermite => "hermite",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CalogeroError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(Suite::All)
            .chain(Suite::MEMBERS)
            .find(|x| x.name() == s)
            .ok_or_else(|| CalogeroError::Usage(format!("unknown suite {s:?}")))
    }
}

/// Degrees, levels, seed and fault switch shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Largest degree of the invariant test polynomials.
    pub max_degree: u32,
    /// Largest eigenvalue level for the basis and Hermite suites.
    pub max_level: u32,
    /// Seeds the random invariant test polynomial.
    pub seed: u64,
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_degree: 4, max_level: 6, seed: 0, inject_fault: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Case {
    fn from_residual(id: String, r: Poly) -> Case {
        if r.is_zero() {
            Case::pass(id)
        } else {
            Case::fail(id, "nonzero residual", Some(poly_json(&r)))
        }
    }

    fn pass(id: String) -> Case {
        Case { id, status: Status::Pass, witness: None, detail: None }
    }

    fn fail(id: String, detail: impl Into<String>, witness: Option<Value>) -> Case {
        Case { id, status: Status::Fail, witness, detail: Some(detail.into()) }
    }

    fn check(id: String, ok: bool, detail: impl Into<String>) -> Case {
        if ok {
            Case::pass(id)
        } else {
            Case::fail(id, detail, None)
        }
    }

    fn note(mut self, detail: impl Into<String>) -> Case {
        self.detail = Some(detail.into());
        self
    }
}

fn poly_json(p: &Poly) -> Value {
    serde_json::to_value(p).expect("polynomials serialise")
}

fn ratfun_json(f: &RatFun) -> Value {
    serde_json::to_value(f).expect("rational functions serialise")
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemRecord {
    pub name: String,
    pub family: String,
    pub rank: usize,
    pub dim: usize,
    pub backend: String,
    pub couplings: std::collections::BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetRecord {
    pub max_fd: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    pub test_degree: u32,
    pub max_level: u32,
    pub seed: u64,
    pub inject_fault: bool,
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub system: SystemRecord,
    pub cases: Vec<Case>,
    pub budget: BudgetRecord,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }
}

/// One unit of work: an id and a computation producing its cases.
type Job<'a> = (String, Box<dyn Fn() -> Result<Vec<Case>, CalogeroError> + Send + Sync + 'a>);

struct Outcome {
    cases: Vec<Case>,
    skipped: Vec<String>,
}

/// Runs jobs in parallel, keeping their declared order. Resource errors
/// become skip records, internal errors failed cases; any other error
/// aborts the suite.
fn run_jobs(jobs: Vec<Job<'_>>) -> Result<Outcome, CalogeroError> {
    let results: Vec<(String, Result<Vec<Case>, CalogeroError>)> =
        jobs.into_par_iter().map(|(id, job)| (id, job())).collect();
    let mut out = Outcome { cases: Vec::new(), skipped: Vec::new() };
    for (id, r) in results {
        match r {
            Ok(cases) => out.cases.extend(cases),
            Err(CalogeroError::Resource(msg)) => out.skipped.push(format!("{id}: {msg}")),
            // a broken invariant inside a case is a verification failure
            Err(CalogeroError::Internal(msg)) => out.cases.push(Case::fail(id, msg, None)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Invariant test polynomials: the `η` products up to `max_degree` and one
/// random combination of them drawn from the seed.
pub fn test_polynomials(model: &Model, max_degree: u32, seed: u64) -> Result<Vec<Poly>, CalogeroError> {
    let mut basis = model.invariant_basis(max_degree)?;
    if basis.len() > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = model.root_system().backend();
        let mut p = Poly::zero(model.nvars(), b);
        for q in &basis {
            let num: i64 = rng.gen_range(-3..=3);
            let den: i64 = rng.gen_range(1..=3);
            p.add_scaled(q, &b.from_ratio(num, den));
        }
        if !p.is_zero() {
            basis.push(p);
        }
    }
    Ok(basis)
}

fn lax_jobs<'a>(model: &'a Model, tests: &'a [Poly], cfg: &SuiteConfig) -> Vec<Job<'a>> {
    let mut sets: Vec<Arc<LaxOperators>> = vec![model.standard().clone()];
    sets.extend(model.spinor().cloned());
    sets.extend(model.antispinor().cloned());
    let fault = cfg.inject_fault;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for ops in sets {
        let ops = if fault {
            let value = &model.root_system().root(0).coupling + &model.root_system().backend().one();
            Arc::new(ops.with_lax_coupling(0, value))
        } else {
            ops
        };
        let kind = ops.repset().kind().name();
        for (i, p) in tests.iter().enumerate() {
            let deg = p.degree().unwrap_or(0);
            for k in 0..=1u32 {
                if deg + k > cfg.max_degree {
                    continue;
                }
                for sign in [Letter::APlus, Letter::AMinus] {
                    let id = format!("lax/{kind}/{sign}/p{i}/w{k}");
                    let ops = ops.clone();
                    let budget = *model.budget();
                    jobs.push((
                        id.clone(),
                        Box::new(move || {
                            budget.check_expansion(1, ops.dim(), deg + k)?;
                            let v = if k == 0 { ops.seed(p) } else { ops.seed_weighted(p, k) };
                            let verdict = ops.verify_lax_equation(&v, sign)?;
                            Ok(vec![if verdict.pass {
                                Case::pass(id.clone())
                            } else {
                                Case::fail(
                                    id.clone(),
                                    verdict.detail.unwrap_or_default(),
                                    verdict.witness.as_ref().map(ratfun_json),
                                )
                            }])
                        }),
                    ));
                }
            }
        }
    }
    jobs
}

fn closure_jobs<'a>(model: &'a Model, tests: &'a [Poly], cfg: &SuiteConfig) -> Vec<Job<'a>> {
    let faulty = cfg.inject_fault.then(|| lax_fault(model));
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for j in 1..=model.rank() {
        let f = model.degree(j).expect("j in range");
        let mut forms = vec![ClosureForm::Full];
        if f % 2 == 0 {
            forms.push(ClosureForm::Even);
        }
        for form in forms {
            for (i, p) in tests.iter().enumerate() {
                let id = format!("closure/j{j}/{}/p{i}", form.name());
                let m = faulty.clone().unwrap_or_else(|| model.clone());
                let deg = p.degree().unwrap_or(0);
                let budget = *model.budget();
                jobs.push((
                    id.clone(),
                    Box::new(move || {
                        budget.check_expansion(f, 0, deg)?;
                        Ok(vec![Case::from_residual(id.clone(), m.verify_closure(j, p, form)?)])
                    }),
                ));
            }
        }
    }
    jobs
}

fn lax_fault(model: &Model) -> Model {
    let rs = model.root_system();
    model.with_lax_fault(0, &rs.root(0).coupling + &rs.backend().one())
}

fn commutator_jobs<'a>(model: &'a Model, tests: &'a [Poly], cfg: &SuiteConfig) -> Vec<Job<'a>> {
    let alternate = cfg.inject_fault;
    let budget = *model.budget();
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let r = model.rank();
    for j in 1..=r {
        let fj = model.degree(j).expect("j in range");
        if fj % 2 == 1 {
            continue;
        }
        for (i, p) in tests.iter().enumerate() {
            let id = format!("commutators/conserved/j{j}/p{i}");
            let deg = p.degree().unwrap_or(0);
            jobs.push((
                id.clone(),
                Box::new(move || {
                    budget.check_expansion(fj, 0, deg)?;
                    Ok(vec![Case::from_residual(id.clone(), model.conserved_residual(j, p)?)])
                }),
            ));
        }
    }
    for j in 1..=r {
        for k in j + 1..=r {
            let fj = model.degree(j).expect("j in range");
            let fk = model.degree(k).expect("k in range");
            for (i, p) in tests.iter().enumerate() {
                let deg = p.degree().unwrap_or(0);
                let id = format!("commutators/extremes/j{j}k{k}/p{i}");
                jobs.push((
                    id.clone(),
                    Box::new(move || {
                        budget.check_expansion(fj + fk, 0, deg)?;
                        let (c, a) = model.extremes_residual(j, k, p)?;
                        Ok(vec![
                            Case::from_residual(format!("{id}/creation"), c),
                            Case::from_residual(format!("{id}/annihilation"), a),
                        ])
                    }),
                ));
                let id = format!("commutators/sum-rule/j{j}k{k}/p{i}");
                jobs.push((
                    id.clone(),
                    Box::new(move || {
                        budget.check_expansion(fj + fk, 0, deg)?;
                        let sums = model.commutator_sums(j, k, p, alternate)?;
                        Ok(sums
                            .into_iter()
                            .enumerate()
                            .map(|(n, s)| Case::from_residual(format!("{id}/n{n}"), s))
                            .collect())
                    }),
                ));
            }
            if fj % 2 == 0 && fk % 2 == 0 {
                let id = format!("commutators/involution/j{j}k{k}");
                jobs.push((
                    id.clone(),
                    Box::new(move || {
                        let mut found = None;
                        for (i, p) in tests.iter().enumerate() {
                            if p.degree().unwrap_or(0) + fj + fk > budget.max_degree {
                                continue;
                            }
                            if !model.involution_residual(j, k, p)?.is_zero() {
                                found = Some(i);
                                break;
                            }
                        }
                        // reported, not asserted
                        let detail = match found {
                            Some(i) => format!("non-commuting witness p{i}"),
                            None => "no witness among the test polynomials".into(),
                        };
                        Ok(vec![Case::pass(id.clone()).note(detail)])
                    }),
                ));
            }
        }
    }
    jobs
}

fn dtype_jobs<'a>(model: &'a Model, cfg: &SuiteConfig) -> Vec<Job<'a>> {
    let fault = cfg.inject_fault;
    vec![(
        "dtype".into(),
        Box::new(move || {
            let m = if fault { model.with_spinor_sign_fault() } else { model.clone() };
            let report = m.dtype_check()?;
            let id = format!("dtype/eta{}", report.r);
            Ok(vec![if report.proportional {
                Case::pass(id).note(format!("coefficient {}", report.coefficient.unwrap_or_default()))
            } else {
                Case::fail(id, "not a multiple of the product of all coordinates", Some(poly_json(&report.eta)))
            }])
        }),
    )]
}

fn msum_jobs<'a>(model: &'a Model, cfg: &SuiteConfig) -> Vec<Job<'a>> {
    let fault = cfg.inject_fault;
    let rs = model.root_system();
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for kind in RepKind::ALL {
        let Ok(set) = RepSet::build(rs, kind) else { continue };
        let id = format!("msum/{}", kind.name());
        jobs.push((
            id.clone(),
            Box::new(move || {
                let set = if fault {
                    // send weight 0 where weight 1 should go
                    let target = set.reflect(0, 1);
                    set.with_permutation_entry(0, 0, target)
                } else {
                    set.clone()
                };
                let closure = set.check_closure();
                let ops = LaxOperators::new_unchecked(rs.clone(), Arc::new(set));
                let verdict = ops.verify_m_sum_rule();
                Ok(vec![
                    Case::check(format!("{id}/closure"), closure.pass, closure.detail.unwrap_or_default()),
                    if verdict.pass {
                        Case::pass(format!("{id}/sum")).note(format!("dimension {}", ops.dim()))
                    } else {
                        Case::fail(
                            format!("{id}/sum"),
                            verdict.detail.unwrap_or_default(),
                            verdict.witness.as_ref().map(ratfun_json),
                        )
                    },
                ])
            }),
        ));
    }
    jobs
}

fn basis_jobs<'a>(model: &'a Model, cfg: &SuiteConfig) -> Vec<Job<'a>> {
    let fault = cfg.inject_fault;
    let max_level = cfg.max_level;
    let mut jobs: Vec<Job<'_>> = vec![(
        "basis".into(),
        Box::new(move || {
            let mut states = model.eigenbasis(max_level)?;
            if fault {
                let dup = states.last().expect("the ground state").clone();
                states.push(dup);
            }
            let report = model.basis_report(max_level, &states);
            let mut cases: Vec<Case> = states
                .iter()
                .map(|s| {
                    Case::check(format!("basis/eigen/n{}", state_id(&s.n)), s.verified, "H̃P differs from E·P")
                })
                .collect();
            cases.push(Case::check("basis/independent".into(), report.independent, report.failure.clone().unwrap_or_default()));
            cases.push(Case::check("basis/counts".into(), report.counts_match, "level counts differ from the spectrum"));
            Ok(cases)
        }),
    )];
    let level = max_level.min(4);
    for j in 1..=model.rank() {
        let id = format!("basis/heisenberg/j{j}");
        jobs.push((
            id.clone(),
            Box::new(move || {
                let mut cases = Vec::new();
                for s in model.eigenbasis(level)? {
                    let d = model.heisenberg_on(j, &s.n, &s.poly)?;
                    let check = model.check_heisenberg(&d, &s.poly, s.eigenvalue)?;
                    let cid = format!("{id}/n{}", state_id(&s.n));
                    cases.push(if check.pass() {
                        Case::pass(cid)
                    } else {
                        Case::fail(cid, check.failure.unwrap_or_default(), None)
                    });
                }
                Ok(cases)
            }),
        ));
    }
    jobs
}

fn hermite_jobs(model: &Model, cfg: &SuiteConfig) -> Result<Vec<Job<'static>>, CalogeroError> {
    let free = Arc::new(Model::new(model.root_system().free_limit(), *model.budget())?);
    // the fault builds the interacting eigenfunctions instead
    let source = Arc::new(if cfg.inject_fault {
        let rs = model.root_system();
        if rs.positive_roots().iter().all(|r| r.coupling.is_zero()) {
            let mut one = std::collections::BTreeMap::new();
            one.insert(crate::rootsys::Orbit::All, num_rational::BigRational::from_integer(1.into()));
            Model::new(rs.with_couplings(&one)?, *model.budget())?
        } else {
            model.clone()
        }
    } else {
        (*free).clone()
    });
    let max_level = cfg.max_level;
    let mut jobs: Vec<Job<'static>> = Vec::new();
    {
        let free = free.clone();
        jobs.push((
            "hermite/ground-energy".into(),
            Box::new(move || {
                let r = free.hermite_report(&vec![0; free.rank()], 0, &Poly::one(free.nvars(), free.root_system().backend()));
                Ok(vec![Case::check(
                    "hermite/ground-energy".into(),
                    r.ground_state_energy == r.expected_ground_state_energy,
                    format!("E0 = {}, expected {}", r.ground_state_energy, r.expected_ground_state_energy),
                )])
            }),
        ));
    }
    for level in 0..=max_level {
        let free = free.clone();
        let source = source.clone();
        let id = format!("hermite/level{level}");
        jobs.push((
            id.clone(),
            Box::new(move || {
                let states = source.eigenbasis(level)?;
                let mut cases = Vec::new();
                let span = super::hermite::hermite_span(free.root_system(), level);
                for s in states.iter().filter(|s| s.eigenvalue == level) {
                    let cid = format!("{id}/n{}", state_id(&s.n));
                    cases.push(Case::check(cid, span.contains(&s.poly), "outside the Hermite-product span"));
                }
                Ok(cases)
            }),
        ));
    }
    Ok(jobs)
}

fn state_id(n: &[u32]) -> String {
    n.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn system_record(model: &Model) -> SystemRecord {
    let rs = model.root_system();
    SystemRecord {
        name: rs.name(),
        family: rs.spec().family.to_string(),
        rank: rs.spec().rank,
        dim: rs.dim(),
        backend: rs.backend().name(),
        couplings: rs.couplings().iter().map(|(k, v)| (k.to_string(), v.to_exact_string())).collect(),
    }
}

/// Runs one suite (or all of them) on `model`.
pub fn run_suite(model: &Model, suite: Suite, cfg: &SuiteConfig) -> Result<Report, CalogeroError> {
    let members: Vec<Suite> = if suite == Suite::All { Suite::MEMBERS.to_vec() } else { vec![suite] };
    let is_d = model.root_system().spec().family == Family::D;
    if suite == Suite::Dtype && !is_d {
        return Err(CalogeroError::Usage("the dtype suite needs a D-type system".into()));
    }
    let needs_tests = members.iter().any(|s| matches!(s, Suite::Lax | Suite::Closure | Suite::Commutators));
    let tests = if needs_tests { test_polynomials(model, cfg.max_degree, cfg.seed)? } else { Vec::new() };
    let mut jobs: Vec<Job<'_>> = Vec::new();
    let mut skipped = Vec::new();
    for s in members {
        match s {
            Suite::Lax => jobs.extend(lax_jobs(model, &tests, cfg)),
            Suite::Closure => jobs.extend(closure_jobs(model, &tests, cfg)),
            Suite::Commutators => jobs.extend(commutator_jobs(model, &tests, cfg)),
            Suite::Dtype if is_d => jobs.extend(dtype_jobs(model, cfg)),
            Suite::Dtype => skipped.push("dtype: not a D-type system".to_string()),
            Suite::Msum => jobs.extend(msum_jobs(model, cfg)),
            Suite::Basis => jobs.extend(basis_jobs(model, cfg)),
            Suite::Hermite => jobs.extend(hermite_jobs(model, cfg)?),
            Suite::All => unreachable!("expanded above"),
        }
    }
    let outcome = run_jobs(jobs)?;
    skipped.extend(outcome.skipped);
    let budget = model.budget();
    Ok(Report {
        suite: suite.name().to_string(),
        system: system_record(model),
        cases: outcome.cases,
        budget: BudgetRecord {
            max_fd: budget.max_fd,
            max_degree: budget.max_degree,
            max_terms: budget.max_terms,
            test_degree: cfg.max_degree,
            max_level: cfg.max_level,
            seed: cfg.seed,
            inject_fault: cfg.inject_fault,
            skipped,
        },
    })
}
