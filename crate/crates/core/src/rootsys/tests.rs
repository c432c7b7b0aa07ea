use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::polyring::{dot, Backend, Poly, RatFun};

fn build(spec: RootSystemSpec) -> RootSystem {
    RootSystem::build(spec, &Couplings::uniform_int(1), None).unwrap()
}

fn shipped() -> Vec<RootSystemSpec> {
    vec![
        RootSystemSpec::new(Family::A, 2),
        RootSystemSpec::new(Family::A, 4),
        RootSystemSpec::new(Family::B, 2),
        RootSystemSpec::new(Family::B, 3),
        RootSystemSpec::new(Family::C, 3),
        RootSystemSpec::new(Family::D, 3),
        RootSystemSpec::new(Family::D, 4),
        RootSystemSpec::new(Family::E, 6),
        RootSystemSpec::new(Family::E, 7),
        RootSystemSpec::new(Family::E, 8),
        RootSystemSpec::new(Family::F, 4),
        RootSystemSpec::new(Family::G, 2),
        RootSystemSpec::new(Family::G, 2).planar(),
        RootSystemSpec::dihedral(5),
        RootSystemSpec::dihedral(7),
        RootSystemSpec::dihedral(8),
        RootSystemSpec::dihedral(12),
        RootSystemSpec::new(Family::H, 3),
        RootSystemSpec::new(Family::H, 4),
    ]
}

#[test]
fn degree_table() {
    let cases: Vec<(RootSystemSpec, Vec<u32>)> = vec![
        (RootSystemSpec::new(Family::A, 3), vec![2, 3, 1]),
        (RootSystemSpec::new(Family::B, 2), vec![2, 4]),
        (RootSystemSpec::new(Family::C, 3), vec![2, 4, 6]),
        (RootSystemSpec::new(Family::D, 4), vec![2, 4, 6, 4]),
        (RootSystemSpec::new(Family::E, 6), vec![2, 5, 6, 8, 9, 12]),
        (RootSystemSpec::new(Family::E, 7), vec![2, 6, 8, 10, 12, 14, 18]),
        (RootSystemSpec::new(Family::E, 8), vec![2, 8, 12, 14, 18, 20, 24, 30]),
        (RootSystemSpec::new(Family::F, 4), vec![2, 6, 8, 12]),
        (RootSystemSpec::new(Family::G, 2), vec![2, 6]),
        (RootSystemSpec::dihedral(7), vec![2, 7]),
        (RootSystemSpec::new(Family::H, 3), vec![2, 6, 10]),
        (RootSystemSpec::new(Family::H, 4), vec![2, 12, 20, 30]),
    ];
    for (spec, want) in cases {
        assert_eq!(build(spec).degrees(), want.as_slice(), "{}", spec.name());
    }
}

#[test]
fn root_counts_match_exponents() {
    for spec in shipped() {
        let rs = build(spec);
        // |Δ₊| equals the sum of the exponents f_j - 1
        let expected: u32 = rs.degrees().iter().map(|f| f - 1).sum();
        assert_eq!(rs.positive_roots().len() as u32, expected, "{}", spec.name());
        let lie_rank = rs.degrees().iter().filter(|&&f| f > 1).count();
        assert_eq!(rs.simple_roots().len(), lie_rank, "{}", spec.name());
    }
}

#[test]
fn chamber_vector_is_positive() {
    for spec in shipped() {
        let rs = build(spec);
        let rho = rs.chamber_vector();
        for root in rs.positive_roots() {
            assert!(dot(&root.vector, &rho).signum() > 0, "{}", spec.name());
        }
        for (w, a) in rs.fundamental_coweights().iter().zip(rs.simple_roots()) {
            assert!(dot(w, &a.vector).is_one());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = rs.sample_chamber_point(&mut rng);
        assert!(rs.positive_roots().iter().all(|r| dot(&r.vector, &x).signum() > 0));
    }
}

#[test]
fn b2_positive_roots() {
    let c = Couplings::parse("long=1,short=1/2").unwrap();
    let rs = RootSystem::build(RootSystemSpec::new(Family::B, 2), &c, None).unwrap();
    let mut got: Vec<(String, Orbit)> = rs
        .positive_roots()
        .iter()
        .map(|r| (format!("{:?}", r.vector.iter().map(ToString::to_string).collect::<Vec<_>>()), r.orbit))
        .collect();
    got.sort();
    let mut want = vec![
        ("[\"1\", \"-1\"]".to_string(), Orbit::Long),
        ("[\"1\", \"1\"]".to_string(), Orbit::Long),
        ("[\"1\", \"0\"]".to_string(), Orbit::Short),
        ("[\"0\", \"1\"]".to_string(), Orbit::Short),
    ];
    want.sort();
    assert_eq!(got, want);
    assert_eq!(rs.ground_state_energy(), Backend::Rational.from_i64(4));
}

#[test]
fn c_is_b_with_orbit_names_swapped() {
    let b = build(RootSystemSpec::new(Family::B, 3));
    let c = build(RootSystemSpec::new(Family::C, 3));
    for (x, y) in b.positive_roots().iter().zip(c.positive_roots()) {
        assert_eq!(x.vector, y.vector);
        assert_ne!(x.orbit, y.orbit);
    }
}

#[test]
fn repset_dimensions_and_closure() {
    let cases = [
        (RootSystemSpec::new(Family::A, 3), RepKind::Vector, 3),
        (RootSystemSpec::new(Family::B, 3), RepKind::Vector, 6),
        (RootSystemSpec::new(Family::C, 2), RepKind::Vector, 4),
        (RootSystemSpec::new(Family::D, 4), RepKind::Vector, 8),
        (RootSystemSpec::new(Family::D, 4), RepKind::Spinor, 8),
        (RootSystemSpec::new(Family::D, 5), RepKind::Antispinor, 16),
        (RootSystemSpec::new(Family::E, 6), RepKind::Minimal27, 27),
        (RootSystemSpec::new(Family::E, 7), RepKind::Minimal56, 56),
        (RootSystemSpec::new(Family::E, 8), RepKind::AllRoots, 240),
        (RootSystemSpec::new(Family::F, 4), RepKind::ShortRoots, 24),
        (RootSystemSpec::new(Family::F, 4), RepKind::LongRoots, 24),
        (RootSystemSpec::new(Family::G, 2), RepKind::ShortRoots, 6),
        (RootSystemSpec::new(Family::G, 2).planar(), RepKind::LongRoots, 6),
        (RootSystemSpec::dihedral(7), RepKind::MgonVertices, 7),
        (RootSystemSpec::dihedral(8), RepKind::MgonVertices, 8),
        (RootSystemSpec::dihedral(12), RepKind::MgonVertices, 12),
        (RootSystemSpec::new(Family::H, 3), RepKind::AllRoots, 30),
        (RootSystemSpec::new(Family::H, 4), RepKind::AllRoots, 120),
    ];
    for (spec, kind, d) in cases {
        let rs = build(spec);
        let set = RepSet::build(&rs, kind).unwrap();
        assert_eq!(set.len(), d, "{} {kind}", spec.name());
        assert!(set.check_closure().pass);
    }
}

#[test]
fn invalid_repset_pairing() {
    let b2 = build(RootSystemSpec::new(Family::B, 2));
    assert!(matches!(RepSet::build(&b2, RepKind::Spinor), Err(RootSystemError::Usage(_))));
    let a2 = build(RootSystemSpec::new(Family::A, 3));
    assert!(matches!(RepSet::build(&a2, RepKind::ShortRoots), Err(RootSystemError::Usage(_))));
    let e8 = build(RootSystemSpec::new(Family::E, 8));
    assert!(RepSet::build(&e8, RepKind::Minimal27).is_err());
}

#[test]
fn corrupted_spinor_fails_closure() {
    let rs = build(RootSystemSpec::new(Family::D, 4));
    let good = RepSet::build(&rs, RepKind::Spinor).unwrap();
    let mut weights = good.weights().to_vec();
    weights[3][0] = -&weights[3][0];
    let bad = RepSet::from_weights(&rs, RepKind::Spinor, weights).unwrap();
    let report = bad.check_closure();
    assert!(!report.pass);
    assert!(report.root.is_some() && report.weight.is_some());
    let tampered = good.with_permutation_entry(0, 0, 1);
    assert!(!tampered.check_closure().pass);
}

#[test]
fn float_dihedral_closure() {
    let rs = build(RootSystemSpec::dihedral(7));
    assert_eq!(rs.backend(), Backend::Float);
    assert!(RepSet::build(&rs, RepKind::MgonVertices).unwrap().check_closure().pass);
}

#[test]
fn ground_state_energy_formula() {
    let g = BigRational::new(3.into(), 7.into());
    let a1 = RootSystem::build(RootSystemSpec::new(Family::A, 2), &Couplings::uniform(g.clone()), None).unwrap();
    assert_eq!(a1.ground_state_energy(), Backend::Rational.lift(&(g + BigRational::from_integer(1.into()))));
    // slope in each coupling equals the orbit size
    let spec = RootSystemSpec::new(Family::F, 4);
    let e = |long: i64, short: i64| {
        let c = Couplings::new()
            .with(Orbit::Long, BigRational::from_integer(long.into()))
            .with(Orbit::Short, BigRational::from_integer(short.into()));
        RootSystem::build(spec, &c, None).unwrap().ground_state_energy()
    };
    assert_eq!(&e(2, 1) - &e(1, 1), Backend::Rational.from_i64(12));
    assert_eq!(&e(1, 2) - &e(1, 1), Backend::Rational.from_i64(12));
    let free = build(RootSystemSpec::new(Family::E, 6)).free_limit();
    assert_eq!(free.ground_state_energy(), Backend::Rational.from_i64(3));
}

#[test]
fn non_positive_coupling_rejected() {
    let r = RootSystem::build(RootSystemSpec::new(Family::A, 3), &Couplings::uniform_int(0), None);
    assert!(matches!(r, Err(RootSystemError::Domain(_))));
    let r = RootSystem::build(RootSystemSpec::new(Family::E, 9), &Couplings::uniform_int(1), None);
    assert!(matches!(r, Err(RootSystemError::Usage(_))));
}

#[test]
fn log_gradient_a1() {
    let g = Backend::Rational.from_ratio(5, 2);
    let rs = RootSystem::build(
        RootSystemSpec::new(Family::A, 2),
        &Couplings::uniform(BigRational::new(5.into(), 2.into())),
        None,
    )
    .unwrap();
    let b = Backend::Rational;
    let w = rs.log_gradient_w(&[b.one(), b.zero()]).unwrap();
    let want = RatFun::from(-Poly::var(2, 0, b)).add(
        &RatFun::new(Poly::constant(2, g), [(0, 1)].into(), rs.forms()),
        rs.forms(),
    );
    assert_eq!(w, want);
    let free = rs.free_limit().log_gradient_w(&[b.one(), b.zero()]).unwrap();
    assert_eq!(free, RatFun::from(-Poly::var(2, 0, b)));
}

/// Independent count: multisets of degrees summing to `n`.
fn partitions_into(degrees: &[u32], n: u32) -> usize {
    let mut ways = vec![0usize; n as usize + 1];
    ways[0] = 1;
    for &f in degrees {
        for k in f as usize..=n as usize {
            ways[k] += ways[k - f as usize];
        }
    }
    ways[n as usize]
}

#[test]
fn spectrum_degeneracies() {
    let c = Couplings::parse("long=1,short=1/2").unwrap();
    let rs = RootSystem::build(RootSystemSpec::new(Family::B, 2), &c, None).unwrap();
    let sp = rs.spectrum_levels(8);
    let level8: Vec<Vec<u32>> = sp.states.iter().filter(|s| s.level == 8).map(|s| s.n.clone()).collect();
    assert_eq!(level8, vec![vec![4, 0], vec![2, 1], vec![0, 2]]);
    assert_eq!(sp.levels[8].degeneracy, 3);
    assert_eq!(sp.levels[0].degeneracy, 1);
    let other = RootSystem::build(RootSystemSpec::new(Family::B, 2), &Couplings::uniform_int(3), None).unwrap();
    let deg = |s: &Spectrum| s.levels.iter().map(|l| l.degeneracy).collect::<Vec<_>>();
    assert_eq!(deg(&sp), deg(&other.spectrum_levels(8)));
    for spec in shipped() {
        let rs = build(spec);
        let sp = rs.spectrum_levels(20);
        for l in &sp.levels {
            assert_eq!(l.degeneracy, partitions_into(rs.degrees(), l.level), "{} level {}", spec.name(), l.level);
        }
    }
}

#[test]
fn reflections_permute_roots() {
    for spec in shipped() {
        let rs = build(spec);
        let n = rs.positive_roots().len();
        for a in 0..n {
            let mut seen = vec![false; n];
            for k in 0..n {
                let (j, neg) = rs.reflect_root(a, k);
                assert!(!seen[j]);
                seen[j] = true;
                // only the root itself changes sign under a simple reflection
                if rs.simple_indices().contains(&a) {
                    assert_eq!(neg, k == a);
                }
            }
        }
    }
}

#[test]
fn reflected_ratfun_matches_pointwise() {
    let rs = build(RootSystemSpec::new(Family::B, 3));
    let w = rs.log_gradient_w(&rs.positive_roots()[0].vector.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = rs.sample_chamber_point(&mut rng);
    for a in 0..rs.positive_roots().len() {
        let lhs = rs.reflect_ratfun(a, &w).eval(&x, rs.forms()).unwrap();
        let rhs = w.eval(&rs.reflect_vector(a, &x), rs.forms()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn backend_override() {
    let rs = RootSystem::build(RootSystemSpec::new(Family::B, 2), &Couplings::uniform_int(1), Some(Backend::Float))
        .unwrap();
    assert_eq!(rs.backend(), Backend::Float);
    assert!(RootSystem::build(RootSystemSpec::dihedral(7), &Couplings::uniform_int(1), Some(Backend::Rational))
        .is_err());
}
