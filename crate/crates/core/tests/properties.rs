use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use calogero::calogero::{ClosureForm, Model};
use calogero::laxops::{Budget, LaxOperators};
use calogero::polyring::{Backend, Monomial, Poly};
use calogero::rootsys::{quantum_numbers, Couplings, Family, Orbit, RepKind, RepSet, RootSystem, RootSystemSpec};

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u16..3, nvars), -5i64..=5, 1i64..=4), 0..6).prop_map(move |terms| {
        let mut p = Poly::zero(nvars, Backend::Rational);
        for (exps, a, b) in terms {
            p.add_term(Monomial::new(exps), Backend::Rational.from_ratio(a, b));
        }
        p
    })
}

fn coupling() -> impl Strategy<Value = BigRational> {
    (1i64..=9, 1i64..=5).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn b2(gl: BigRational, gs: BigRational) -> Model {
    let c = Couplings::new().with(Orbit::Long, gl).with(Orbit::Short, gs);
    Model::new(RootSystem::build(RootSystemSpec::new(Family::B, 2), &c, None).unwrap(), Budget::default()).unwrap()
}

fn a2(g: BigRational) -> Model {
    let rs = RootSystem::build(RootSystemSpec::new(Family::A, 3), &Couplings::uniform(g), None).unwrap();
    Model::new(rs, Budget::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(p in poly(3), q in poly(3), r in poly(3)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn leibniz_rule(p in poly(3), q in poly(3), i in 0usize..3) {
        let lhs = (&p * &q).partial(i);
        let rhs = &(&p.partial(i) * &q) + &(&p * &q.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reflections_are_involutions(p in poly(2), a in 0usize..4) {
        let rs = RootSystem::build(RootSystemSpec::new(Family::B, 2), &Couplings::uniform_int(1), None).unwrap();
        prop_assert_eq!(rs.reflect_poly(a, &rs.reflect_poly(a, &p)), p);
    }

    #[test]
    fn multiplying_by_a_root_form_divides_back(p in poly(2), a in 0usize..4) {
        let rs = RootSystem::build(RootSystemSpec::new(Family::B, 2), &Couplings::uniform_int(1), None).unwrap();
        let form = Poly::linear(&rs.root(a).vector, Backend::Rational);
        prop_assert_eq!((&p * &form).try_divide_linear(&form), Some(p));
    }

    #[test]
    fn spectrum_counts_partitions(degrees in prop::collection::vec(1u32..7, 1..4), level in 0u32..12) {
        let counted = quantum_numbers(&degrees, level).iter().filter(|s| s.level == level).count();
        fn brute(d: &[u32], n: u32) -> usize {
            match d.split_first() {
                None => usize::from(n == 0),
                Some((&f, rest)) => (0..=n / f).map(|k| brute(rest, n - k * f)).sum(),
            }
        }
        prop_assert_eq!(counted, brute(&degrees, level));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn b2_eigenfunctions_for_any_coupling(gl in coupling(), gs in coupling(), n1 in 0u32..3, n2 in 0u32..2) {
        let m = b2(gl, gs);
        let e = m.build_eigenfunction(&[n1, n2]).unwrap();
        prop_assert!(e.verified);
        prop_assert_eq!(e.eigenvalue, 2 * n1 + 4 * n2);
    }

    #[test]
    fn hamiltonian_is_linear(g in coupling(), a in -4i64..=4, b in -4i64..=4) {
        let m = a2(g);
        let basis = m.invariant_basis(4).unwrap();
        let (p, q) = (&basis[1], &basis[basis.len() - 1]);
        let (sa, sb) = (Backend::Rational.from_i64(a), Backend::Rational.from_i64(b));
        let lhs = m.hamiltonian(&(&p.scale(&sa) + &q.scale(&sb))).unwrap();
        let rhs = &m.hamiltonian(p).unwrap().scale(&sa) + &m.hamiltonian(q).unwrap().scale(&sb);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closure_holds_for_any_coupling(g in coupling(), pick in 0usize..6) {
        let m = a2(g);
        let basis = m.invariant_basis(4).unwrap();
        let p = &basis[pick % basis.len()];
        for j in 1..=m.rank() {
            prop_assert!(m.verify_closure(j, p, ClosureForm::Full).unwrap().is_zero());
        }
        prop_assert!(m.verify_closure(1, p, ClosureForm::Even).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_components_sum_to_eta_p(gl in coupling(), gs in coupling(), j in 1usize..=2, n1 in 0u32..2) {
        let m = b2(gl, gs);
        let s = m.build_eigenfunction(&[n1, 0]).unwrap();
        let d = m.heisenberg_on(j, &s.n, &s.poly).unwrap();
        prop_assert_eq!(d.sum(), &m.eta(j).unwrap() * &s.poly);
        prop_assert!(m.check_heisenberg(&d, &s.poly, s.eigenvalue).unwrap().pass());
    }

    #[test]
    fn m_sum_rule_for_any_coupling(g in coupling(), spinor in any::<bool>()) {
        let rs = Arc::new(RootSystem::build(RootSystemSpec::new(Family::D, 4), &Couplings::uniform(g), None).unwrap());
        let kind = if spinor { RepKind::Spinor } else { RepKind::Vector };
        let ops = LaxOperators::new(rs.clone(), Arc::new(RepSet::build(&rs, kind).unwrap())).unwrap();
        prop_assert!(ops.verify_m_sum_rule().pass);
    }

    #[test]
    fn creation_raises_energy(g in coupling(), n in 0u32..3) {
        let m = a2(g);
        let e = m.build_eigenfunction(&[n, 0, 0]).unwrap();
        let raised = m.creation(2, &e.poly).unwrap();
        let energy = Backend::Rational.from_i64(i64::from(e.eigenvalue + 3));
        prop_assert_eq!(m.hamiltonian(&raised).unwrap(), raised.scale(&energy));
    }
}
