//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines show up under a plain `cargo test`.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;

use calogero::calogero::{ClosureForm, Model};
use calogero::laxops::{Budget, LaxOperators, Letter};
use calogero::polyring::{Backend, Poly};
use calogero::rootsys::{Couplings, Family, RepKind, RepSet, RootSystem, RootSystemSpec};

type Outcome = Result<String, String>;

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn samples() -> Vec<BigRational> {
    vec![ratio(1, 2), ratio(1, 1), ratio(5, 3)]
}

fn build(spec: RootSystemSpec, couplings: &Couplings) -> Model {
    let rs = RootSystem::build(spec, couplings, None).expect("shipped system");
    Model::new(rs, Budget::default()).expect("model")
}

/// The eight systems of the eigenbasis criterion with their level bounds.
fn eigen_systems() -> Vec<(RootSystemSpec, u32)> {
    vec![
        (RootSystemSpec::new(Family::A, 2), 8),
        (RootSystemSpec::new(Family::A, 3), 8),
        (RootSystemSpec::new(Family::A, 4), 8),
        (RootSystemSpec::new(Family::B, 2), 8),
        (RootSystemSpec::new(Family::B, 3), 6),
        (RootSystemSpec::new(Family::D, 3), 8),
        (RootSystemSpec::new(Family::D, 4), 6),
        (RootSystemSpec::new(Family::G, 2), 8),
    ]
}

/// Every assignment of sample values to the orbits of `spec`.
fn coupling_grid(spec: &RootSystemSpec) -> Vec<Couplings> {
    let mut grid = vec![Couplings::new()];
    for orbit in spec.orbits() {
        grid = grid
            .into_iter()
            .flat_map(|c| samples().into_iter().map(move |g| c.clone().with(orbit, g)))
            .collect();
    }
    grid
}

/// One fixed mixed-coupling model per system.
fn mixed(spec: RootSystemSpec) -> Model {
    let mut c = Couplings::new();
    for (i, orbit) in spec.orbits().into_iter().enumerate() {
        c = c.with(orbit, if i == 0 { ratio(5, 3) } else { ratio(1, 2) });
    }
    build(spec, &c)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for (spec, level) in eigen_systems() {
        let start = Instant::now();
        let mut reference: Option<Vec<(Vec<u32>, u32)>> = None;
        let grid = coupling_grid(&spec);
        for c in &grid {
            let m = build(spec, c);
            let states = m.eigenbasis(level).map_err(err)?;
            let report = m.basis_report(level, &states);
            if !report.pass() {
                return Err(format!("{} {:?}: {}", spec.name(), c, report.failure.unwrap_or_default()));
            }
            let spectrum: Vec<(Vec<u32>, u32)> = states.iter().map(|s| (s.n.clone(), s.eigenvalue)).collect();
            match &reference {
                None => reference = Some(spectrum),
                Some(r) if *r != spectrum => return Err(format!("{}: eigenvalues depend on the couplings", spec.name())),
                Some(_) => {}
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(120) {
            return Err(format!("{} took {:.1} s", spec.name(), took.as_secs_f64()));
        }
        notes.push(format!("{}:{}x{}", spec.name(), grid.len(), reference.map_or(0, |r| r.len())));
    }
    Ok(notes.join(" "))
}

fn criterion_2() -> Outcome {
    let mut checks = 0;
    for (spec, _) in eigen_systems() {
        let m = mixed(spec);
        let states = m.eigenbasis(4).map_err(err)?;
        for j in 1..=m.rank() {
            if m.degree(j).map_err(err)? > 6 {
                continue;
            }
            for s in &states {
                let d = m.heisenberg_on(j, &s.n, &s.poly).map_err(err)?;
                let check = m.check_heisenberg(&d, &s.poly, s.eigenvalue).map_err(err)?;
                if !check.pass() {
                    return Err(format!("{} j={j} P{:?}: {}", spec.name(), s.n, check.failure.unwrap_or_default()));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} decompositions"))
}

fn criterion_3() -> Outcome {
    let mut checks = 0;
    for spec in [RootSystemSpec::new(Family::A, 3), RootSystemSpec::new(Family::B, 2)] {
        let m = mixed(spec);
        let basis = m.invariant_basis(6).map_err(err)?;
        for j in 1..=m.rank() {
            let f = m.degree(j).map_err(err)?;
            let forms = if f % 2 == 0 { vec![ClosureForm::Full, ClosureForm::Even] } else { vec![ClosureForm::Full] };
            for form in forms {
                for p in &basis {
                    if !m.verify_closure(j, p, form).map_err(err)?.is_zero() {
                        return Err(format!("{} j={j} {} on {p}", spec.name(), form.name()));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} residuals vanish"))
}

fn criterion_4() -> Outcome {
    let mut checks = 0;
    for spec in [RootSystemSpec::new(Family::A, 3), RootSystemSpec::new(Family::B, 2), RootSystemSpec::new(Family::G, 2)] {
        let m = mixed(spec);
        let ops = m.standard();
        for p in m.invariant_basis(3).map_err(err)? {
            let deg = p.degree().unwrap_or(0);
            for k in 0..=(3 - deg) {
                let v = if k == 0 { ops.seed(&p) } else { ops.seed_weighted(&p, k) };
                for sign in [Letter::APlus, Letter::AMinus] {
                    let verdict = ops.verify_lax_equation(&v, sign).map_err(err)?;
                    if !verdict.pass {
                        return Err(format!("{} {sign} seed {p} weight {k}: {}", spec.name(), verdict.detail.unwrap_or_default()));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} seeds"))
}

fn shipped() -> Vec<RootSystemSpec> {
    let mut v: Vec<RootSystemSpec> = (2..=5).map(|r| RootSystemSpec::new(Family::A, r)).collect();
    v.extend((2..=4).map(|r| RootSystemSpec::new(Family::B, r)));
    v.extend((2..=4).map(|r| RootSystemSpec::new(Family::C, r)));
    v.extend((3..=5).map(|r| RootSystemSpec::new(Family::D, r)));
    v.extend((6..=8).map(|r| RootSystemSpec::new(Family::E, r)));
    v.push(RootSystemSpec::new(Family::F, 4));
    v.push(RootSystemSpec::new(Family::G, 2));
    v.push(RootSystemSpec::new(Family::G, 2).planar());
    v.extend([5, 7, 8, 12].map(RootSystemSpec::dihedral));
    v.push(RootSystemSpec::new(Family::H, 3));
    v.push(RootSystemSpec::new(Family::H, 4));
    v
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut sets = 0;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for spec in shipped() {
        let rs = Arc::new(RootSystem::build(spec, &Couplings::uniform_int(1), None).map_err(err)?);
        for kind in RepKind::ALL {
            let Ok(rep) = RepSet::build(&rs, kind) else { continue };
            seen.insert(format!("{}/{}", spec.name(), kind.name()), rep.len());
            let ops = LaxOperators::new(rs.clone(), Arc::new(rep)).map_err(err)?;
            let verdict = ops.verify_m_sum_rule();
            if !verdict.pass {
                return Err(format!("{} {}: {}", spec.name(), kind.name(), verdict.detail.unwrap_or_default()));
            }
            sets += 1;
        }
    }
    for (key, d) in [("E6/minimal-27", 27), ("E7/minimal-56", 56), ("E8/all-roots", 240), ("F4/short-roots", 24), ("H3/all-roots", 30), ("H4/all-roots", 120)] {
        if seen.get(key) != Some(&d) {
            return Err(format!("{key} missing or of the wrong size: {:?}", seen.get(key)));
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(10) {
        return Err(format!("{sets} sets took {:.1} s", took.as_secs_f64()));
    }
    Ok(format!("{sets} sets in {:.2} s", took.as_secs_f64()))
}

fn criterion_6() -> Outcome {
    let mut checks = 0;
    for (spec, _) in eigen_systems() {
        for c in coupling_grid(&spec) {
            let m = build(spec, &c);
            let one = Poly::one(m.nvars(), Backend::Rational);
            for j in 1..=m.rank() {
                let beta = m.beta(j, &one).map_err(err)?;
                let f = beta.f as usize;
                if !beta.coefficient(f).is_zero() {
                    return Err(format!("{} j={j}: β_(f;-f)·1 = {}", spec.name(), beta.coefficient(f)));
                }
                if let Some(l) = (0..=f).find(|&l| 2 * l > f && !beta.coefficient(l).is_zero()) {
                    return Err(format!("{} j={j}: component l={l} survives on the ground state", spec.name()));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} coordinates"))
}

fn criterion_7() -> Outcome {
    let mut checks = 0;
    for spec in [RootSystemSpec::new(Family::A, 4), RootSystemSpec::new(Family::B, 2)] {
        let m = mixed(spec);
        let basis = m.invariant_basis(4).map_err(err)?;
        for j in 1..=m.rank() {
            for k in (j + 1)..=m.rank() {
                for p in &basis {
                    let (creation, annihilation) = m.extremes_residual(j, k, p).map_err(err)?;
                    if !creation.is_zero() || !annihilation.is_zero() {
                        return Err(format!("{} j={j} k={k} on {p}", spec.name()));
                    }
                    checks += 1;
                }
            }
        }
    }
    let m = mixed(RootSystemSpec::new(Family::A, 3));
    let (j, k) = (1, 2);
    if (m.degree(j).map_err(err)?, m.degree(k).map_err(err)?) != (2, 3) {
        return Err("A2 degree order changed".into());
    }
    for p in m.invariant_basis(3).map_err(err)? {
        let sums = m.commutator_sums(j, k, &p, false).map_err(err)?;
        if let Some(n) = sums.iter().position(|r| !r.is_zero()) {
            return Err(format!("A2 sum rule slice n={n} on {p}"));
        }
        checks += sums.len();
    }
    Ok(format!("{checks} commutators"))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for r in [3, 4] {
        let m = build(RootSystemSpec::new(Family::D, r), &Couplings::uniform_int(1));
        let report = m.dtype_check().map_err(err)?;
        if !report.proportional {
            return Err(format!("D{r}: eta({r}) = {}", report.eta));
        }
        notes.push(format!("D{r}: {}·q1⋯q{r}", report.coefficient.unwrap_or_default()));
    }
    Ok(notes.join(", "))
}

fn criterion_9() -> Outcome {
    let mut checks = 0;
    for (spec, level) in eigen_systems() {
        let rs = RootSystem::build(spec, &Couplings::uniform_int(1), None).map_err(err)?.free_limit();
        let m = Model::new(rs, Budget::default()).map_err(err)?;
        for s in m.eigenbasis(level).map_err(err)? {
            let report = m.hermite_report(&s.n, s.eigenvalue, &s.poly);
            if !s.verified || !report.pass() {
                return Err(format!(
                    "{} P{:?}: member {} E0 {} vs {}",
                    spec.name(),
                    s.n,
                    report.member,
                    report.ground_state_energy,
                    report.expected_ground_state_energy
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} free eigenfunctions"))
}

/// Degrees read off the classification table, in the library's order.
fn table_degrees(spec: &RootSystemSpec) -> Vec<u32> {
    let r = spec.rank as u32;
    match spec.family {
        Family::A => (2..=r).chain([1]).collect(),
        Family::B | Family::C => (1..=r).map(|k| 2 * k).collect(),
        Family::D => (1..r).map(|k| 2 * k).chain([r]).collect(),
        Family::E => match r {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
        },
        Family::F => vec![2, 6, 8, 12],
        Family::G => vec![2, 6],
        Family::I2 => vec![2, spec.m.expect("dihedral order")],
        Family::H if r == 3 => vec![2, 6, 10],
        Family::H => vec![2, 12, 20, 30],
    }
}

fn expected_dim(spec: &RootSystemSpec, kind: RepKind) -> Option<usize> {
    let r = spec.rank;
    Some(match (spec.family, kind) {
        (Family::A, RepKind::Vector) => r,
        (Family::B | Family::C | Family::D, RepKind::Vector) => 2 * r,
        (Family::D, RepKind::Spinor | RepKind::Antispinor) => 1 << (r - 1),
        (Family::E, RepKind::Minimal27) if r == 6 => 27,
        (Family::E, RepKind::Minimal56) if r == 7 => 56,
        (Family::E, RepKind::AllRoots) if r == 8 => 240,
        (Family::F, RepKind::LongRoots | RepKind::ShortRoots) => 24,
        (Family::G, RepKind::LongRoots | RepKind::ShortRoots) => 6,
        (Family::I2, RepKind::MgonVertices) => spec.m? as usize,
        (Family::H, RepKind::AllRoots) => if r == 3 { 30 } else { 120 },
        _ => return None,
    })
}

fn criterion_10() -> Outcome {
    let mut families = std::collections::BTreeSet::new();
    let mut sets = 0;
    for spec in shipped() {
        let rs = RootSystem::build(spec, &Couplings::uniform_int(1), None).map_err(err)?;
        if rs.degrees() != table_degrees(&spec).as_slice() {
            return Err(format!("{}: degrees {:?}", spec.name(), rs.degrees()));
        }
        families.insert(match spec.family {
            Family::E | Family::H => spec.name(),
            f => f.to_string(),
        });
        for kind in RepKind::ALL {
            let built = RepSet::build(&rs, kind).ok().map(|s| s.len());
            match (built, expected_dim(&spec, kind)) {
                (Some(d), Some(want)) if d != want => {
                    return Err(format!("{} {}: dimension {d}, expected {want}", spec.name(), kind.name()))
                }
                (None, Some(_)) => return Err(format!("{} {} is missing", spec.name(), kind.name())),
                (Some(_), Some(_)) => sets += 1,
                _ => {}
            }
        }
    }
    if families.len() != 12 {
        return Err(format!("covered {} families: {families:?}", families.len()));
    }
    let b2 = RootSystem::build(RootSystemSpec::new(Family::B, 2), &Couplings::uniform_int(1), None).map_err(err)?;
    let spectrum = b2.spectrum_levels(8);
    let reported = spectrum.levels.iter().find(|l| l.level == 8).map_or(0, |l| l.degeneracy);
    let enumerated = (0..=4u32).flat_map(|a| (0..=2u32).map(move |b| 2 * a + 4 * b)).filter(|&e| e == 8).count();
    if reported != enumerated || reported != 3 {
        return Err(format!("B2 level 8: reported {reported}, enumerated {enumerated}"));
    }
    Ok(format!("12 families, {sets} set dimensions, B2 level 8 = {reported}"))
}

fn criterion_11() -> Outcome {
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_calogero")).args(args).output().map_err(err)?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {}", out.status));
        }
        Ok(out.stdout)
    };
    let mut bytes = 0;
    for system in [["--type", "B", "--rank", "2"], ["--type", "A", "--rank", "3"]] {
        let mut args = vec!["verify", "--suite", "all", "--format", "json", "--seed", "11"];
        args.extend(system);
        let first = run(&args)?;
        let second = run(&args)?;
        if first != second {
            return Err(format!("{system:?}: outputs differ"));
        }
        bytes += first.len();
    }
    Ok(format!("{bytes} identical bytes"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("eigenbasis", criterion_1),
        ("heisenberg decomposition", criterion_2),
        ("closure relations", criterion_3),
        ("lax equation", criterion_4),
        ("M sum rule", criterion_5),
        ("ground-state annihilation", criterion_6),
        ("commuting extremes and sum rule", criterion_7),
        ("D-type coordinates", criterion_8),
        ("free limit", criterion_9),
        ("structural data", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
