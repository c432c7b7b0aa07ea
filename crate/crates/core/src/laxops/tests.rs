use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::polyring::{Backend, Poly, RatFun, Scalar};
use crate::rootsys::{Couplings, Family, RepKind, RepSet, RootSystem, RootSystemSpec};

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn system(spec: RootSystemSpec, g: BigRational) -> Arc<RootSystem> {
    Arc::new(RootSystem::build(spec, &Couplings::uniform(g), None).unwrap())
}

fn ops(rs: &Arc<RootSystem>, kind: RepKind) -> LaxOperators {
    LaxOperators::new(rs.clone(), Arc::new(RepSet::build(rs, kind).unwrap())).unwrap()
}

fn a1(g: BigRational) -> (Arc<RootSystem>, LaxOperators) {
    let rs = system(RootSystemSpec::new(Family::A, 2), g);
    let o = ops(&rs, RepKind::Vector);
    (rs, o)
}

fn q(n: usize, i: usize) -> Poly {
    Poly::var(n, i, Backend::Rational)
}

fn c(n: usize, x: BigRational) -> Poly {
    Poly::constant(n, Scalar::Rational(x))
}

fn q2(n: usize) -> Poly {
    (0..n).fold(Poly::zero(n, Backend::Rational), |acc, i| &acc + &(&q(n, i) * &q(n, i)))
}

#[test]
fn a_minus_kills_constants() {
    let (_, o) = a1(ratio(1, 1));
    let v = o.seed(&Poly::one(2, Backend::Rational));
    assert!(o.apply(Letter::AMinus, &v).unwrap().is_zero());
}

#[test]
fn a_plus_on_constant_and_twice() {
    let g = ratio(5, 3);
    let (_, o) = a1(g.clone());
    let one = o.seed(&Poly::one(2, Backend::Rational));
    let v = o.apply(Letter::APlus, &one).unwrap();
    for mu in 0..o.dim() {
        let expected = o.weight_form(mu).scale(&Backend::Rational.from_i64(2));
        assert_eq!(v.entry(mu).as_poly().unwrap(), &expected);
    }
    let w = o.apply(Letter::APlus, &v).unwrap();
    let four = Backend::Rational.from_i64(4);
    for mu in 0..o.dim() {
        let wq = o.weight_form(mu);
        let expected = &(wq * wq).scale(&four) - &c(2, ratio(2, 1) + &g * ratio(2, 1));
        assert_eq!(w.entry(mu).as_poly().unwrap(), &expected);
    }
    assert_eq!(o.total_sum(&v).as_poly().unwrap(), &(&q(2, 0) + &q(2, 1)).scale(&Backend::Rational.from_i64(2)));
}

#[test]
fn word_orders_on_constant() {
    let g = ratio(1, 2);
    let (_, o) = a1(g.clone());
    let one = o.seed(&Poly::one(2, Backend::Rational));
    let pm: LaxWord = "A+ A-".parse().unwrap();
    let mp: LaxWord = "A- A+".parse().unwrap();
    assert_eq!(pm.signature(), 0);
    assert!(o.apply_word(&pm, &one).unwrap().is_zero());
    let r = o.apply_word(&mp, &one).unwrap();
    let expected = c(2, ratio(-2, 1) - &g * ratio(2, 1));
    for mu in 0..o.dim() {
        assert_eq!(r.entry(mu).as_poly().unwrap(), &expected);
    }
    assert_eq!(o.apply_word(&LaxWord::new(vec![]), &one).unwrap(), one);
}

#[test]
fn generating_a1_examples() {
    let g = ratio(5, 3);
    let (_, o) = a1(g.clone());
    let one = Poly::one(2, Backend::Rational);
    let b = o.generating_apply(2, &one, &Budget::default()).unwrap();
    assert_eq!(b.i_power, 2);
    let k = ratio(-4, 1) - &g * ratio(4, 1);
    assert_eq!(b.beta[0], &q2(2).scale(&Backend::Rational.from_i64(4)) + &c(2, k.clone()));
    assert_eq!(b.beta[1], c(2, k));
    assert!(b.beta[2].is_zero());
    let b1 = o.generating_apply(1, &one, &Budget::default()).unwrap();
    assert_eq!(b1.beta[0], (&q(2, 0) + &q(2, 1)).scale(&Backend::Rational.from_i64(2)));
    assert!(b1.beta[1].is_zero());
}

#[test]
fn generating_at_minus_one_is_power_sum() {
    let rs = system(RootSystemSpec::new(Family::B, 2), ratio(2, 3));
    let o = ops(&rs, RepKind::Vector);
    for f in 1..=4u32 {
        let p = q2(2);
        let b = o.generating_apply(f, &p, &Budget::default()).unwrap();
        let mut alt = Poly::zero(2, Backend::Rational);
        for (l, x) in b.beta.iter().enumerate() {
            alt.add_scaled(x, &Backend::Rational.from_i64(if l % 2 == 0 { 1 } else { -1 }));
        }
        let mut power = Poly::zero(2, Backend::Rational);
        for mu in 0..o.dim() {
            power = &power + &o.weight_form(mu).pow(f);
        }
        assert_eq!(alt, (&power * &p).scale(&Backend::Rational.from_i64(1 << f)), "f = {f}");
    }
}

#[test]
fn non_invariant_seed_rejected() {
    let (_, o) = a1(ratio(1, 1));
    let e = o.generating_apply(2, &q(2, 0), &Budget::default()).unwrap_err();
    assert!(matches!(e, LaxError::Domain(_)));
}

#[test]
fn annihilators_kill_ground_state() {
    for spec in [RootSystemSpec::new(Family::A, 3), RootSystemSpec::new(Family::B, 2), RootSystemSpec::new(Family::G, 2)] {
        let rs = system(spec, ratio(3, 2));
        let o = ops(&rs, RepKind::default_for(&rs));
        let one = Poly::one(rs.dim(), rs.backend());
        for f in 1..=4 {
            let b = o.generating_apply(f, &one, &Budget::default()).unwrap();
            assert!(b.beta[f as usize].is_zero());
        }
    }
}

#[test]
fn total_sums() {
    let rs = system(RootSystemSpec::new(Family::D, 4), ratio(1, 1));
    let sp = ops(&rs, RepKind::Spinor);
    let one = sp.seed(&Poly::one(4, Backend::Rational));
    assert_eq!(sp.total_sum(&one).as_poly().unwrap(), &c(4, ratio(8, 1)));
    let rs = system(RootSystemSpec::new(Family::B, 2), ratio(1, 1));
    let v = ops(&rs, RepKind::Vector);
    let sq = v.seed_weighted(&Poly::one(2, Backend::Rational), 2);
    assert_eq!(v.total_sum(&sq).as_poly().unwrap(), &q2(2).scale(&Backend::Rational.from_i64(2)));
}

#[test]
fn m_sum_rule_on_shipped_sets() {
    let specs = [
        RootSystemSpec::new(Family::A, 4),
        RootSystemSpec::new(Family::B, 3),
        RootSystemSpec::new(Family::D, 4),
        RootSystemSpec::new(Family::F, 4),
        RootSystemSpec::new(Family::G, 2),
        RootSystemSpec::new(Family::H, 3),
        RootSystemSpec::new(Family::E, 6),
    ];
    for spec in specs {
        let rs = system(spec, ratio(1, 1));
        for kind in RepKind::ALL {
            let Ok(set) = RepSet::build(&rs, kind) else { continue };
            let o = LaxOperators::new(rs.clone(), Arc::new(set)).unwrap();
            let verdict = o.verify_m_sum_rule();
            assert!(verdict.pass, "{} {}: {:?}", rs.name(), kind.name(), verdict.detail);
        }
    }
}

#[test]
fn corrupted_table_fails_m_sum_rule() {
    let rs = system(RootSystemSpec::new(Family::B, 3), ratio(1, 1));
    let set = RepSet::build(&rs, RepKind::Vector).unwrap();
    let target = set.reflect(0, 1);
    let bad = set.with_permutation_entry(0, 0, target);
    assert!(LaxOperators::new(rs.clone(), Arc::new(bad.clone())).is_err());
    let o = LaxOperators::new_unchecked(rs, Arc::new(bad));
    let verdict = o.verify_m_sum_rule();
    assert!(!verdict.pass);
    assert!(verdict.detail.unwrap().contains("root 0"));
}

#[test]
fn n_kills_constants() {
    let rs = system(RootSystemSpec::new(Family::B, 3), ratio(2, 5));
    let o = ops(&rs, RepKind::Vector);
    let v = o.seed(&Poly::one(3, Backend::Rational));
    assert!(o.apply(Letter::N, &v).unwrap().is_zero());
}

#[test]
fn lax_equation_a2() {
    let rs = system(RootSystemSpec::new(Family::A, 3), ratio(5, 3));
    let o = ops(&rs, RepKind::Vector);
    let v = o.seed(&q2(3));
    for sign in [Letter::APlus, Letter::AMinus] {
        let verdict = o.verify_lax_equation(&v, sign).unwrap();
        assert!(verdict.pass, "{sign}: {:?}", verdict.detail);
    }
    let w = o.seed_weighted(&q2(3), 1);
    assert!(o.verify_lax_equation(&w, Letter::APlus).unwrap().pass);
}

#[test]
fn lax_equation_free_limit() {
    let rs = Arc::new(system(RootSystemSpec::new(Family::B, 2), ratio(1, 1)).free_limit());
    let o = ops(&rs, RepKind::Vector);
    let v = o.seed_weighted(&q2(2), 1);
    for sign in [Letter::APlus, Letter::AMinus] {
        assert!(o.verify_lax_equation(&v, sign).unwrap().pass);
    }
}

#[test]
fn lax_fault_detected() {
    let rs = system(RootSystemSpec::new(Family::A, 3), ratio(1, 1));
    let o = ops(&rs, RepKind::Vector).with_lax_coupling(0, Backend::Rational.from_i64(2));
    // on a weight-independent seed every divided difference vanishes
    assert!(o.verify_lax_equation(&o.seed(&q2(3)), Letter::APlus).unwrap().pass);
    let v = o.seed_weighted(&q2(3), 1);
    assert!(!o.verify_lax_equation(&v, Letter::APlus).unwrap().pass);
}

#[test]
fn equivariance_checks() {
    let rs = system(RootSystemSpec::new(Family::B, 2), ratio(1, 1));
    let o = ops(&rs, RepKind::Vector);
    let one = o.seed(&Poly::one(2, Backend::Rational));
    assert!(o.verify_equivariance(&one).pass);
    let lin = o.seed_weighted(&Poly::one(2, Backend::Rational), 1);
    assert!(o.verify_equivariance(&lin).pass);
    let bad = lin.with_entry(0, RatFun::zero(2, Backend::Rational));
    assert!(!o.verify_equivariance(&bad).pass);
}

/// A random equivariant vector: `v_μ = Σ_k P_k (μ·q)^k` with invariant `P_k`.
fn random_equivariant(o: &LaxOperators, rng: &mut ChaCha8Rng) -> EquivariantVec {
    let n = o.nvars();
    let inv = [Poly::one(n, o.backend()), q2(n)];
    let mut entries = vec![Poly::zero(n, o.backend()); o.dim()];
    for k in 0..=2u32 {
        let p = inv[rng.gen_range(0..2)].scale(&o.backend().from_i64(rng.gen_range(-3..=3)));
        let s = o.seed_weighted(&p, k);
        for (e, x) in entries.iter_mut().zip(s.polys().unwrap()) {
            *e = &*e + &x;
        }
    }
    EquivariantVec::from_polys(entries)
}

#[test]
fn plus_minus_difference_is_twice_q() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [RootSystemSpec::new(Family::A, 3), RootSystemSpec::new(Family::B, 3), RootSystemSpec::new(Family::G, 2)] {
        let rs = system(spec, ratio(3, 4));
        let o = ops(&rs, RepKind::default_for(&rs));
        let v = random_equivariant(&o, &mut rng);
        let d = o.apply(Letter::APlus, &v).unwrap().sub(&o.apply(Letter::AMinus, &v).unwrap(), o.forms());
        assert_eq!(d, o.apply(Letter::Q, &v).unwrap().scale(&Backend::Rational.from_i64(2)));
        for letter in [Letter::APlus, Letter::AMinus, Letter::Q, Letter::N] {
            let w = o.apply(letter, &v).unwrap();
            assert!(o.verify_equivariance(&w).pass, "{letter}");
            if letter != Letter::N {
                assert!(w.is_polynomial());
            }
        }
    }
}

#[test]
fn signature_shift() {
    let rs = system(RootSystemSpec::new(Family::B, 2), ratio(1, 3));
    let o = ops(&rs, RepKind::Vector);
    let p = q2(2);
    for text in ["A+ A+ A-", "A- A-", "A+ A- A+ A+"] {
        let word: LaxWord = text.parse().unwrap();
        let ts = |x: &Poly| -> Poly {
            o.total_sum(&o.apply_word(&word, &o.seed(x)).unwrap()).into_poly().unwrap()
        };
        let h = |x: &Poly| crate::calogero::hamiltonian_poly(&rs, x).unwrap();
        let lhs = &h(&ts(&p)) - &ts(&h(&p));
        assert_eq!(lhs, ts(&p).scale(&Backend::Rational.from_i64(word.signature() as i64)), "{text}");
    }
}

#[test]
fn budget_refuses_large_expansion() {
    let rs = system(RootSystemSpec::new(Family::E, 8), ratio(1, 1));
    let o = ops(&rs, RepKind::AllRoots);
    let e = o.generating_apply(2, &Poly::one(8, Backend::Rational), &Budget::default()).unwrap_err();
    assert!(matches!(e, LaxError::Resource(_)));
}
