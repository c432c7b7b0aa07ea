//! Explicit coordinates for every family.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::spec::{Embedding, Family, Orbit, RootSystemSpec};
use crate::polyring::{Backend, Scalar};

pub(crate) struct RawSystem {
    pub dim: usize,
    /// Full root system (both signs).
    pub roots: Vec<(Vec<Scalar>, Orbit)>,
    /// Generic vector defining positivity.
    pub generic: Vec<Scalar>,
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Backend::Rational.from_i64(x)).collect()
}

fn unit(dim: usize, i: usize, sign: i64, b: Backend) -> Vec<Scalar> {
    (0..dim).map(|k| if k == i { b.from_i64(sign) } else { b.zero() }).collect()
}

fn pm_pairs(dim: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            for si in [1, -1] {
                for sj in [1, -1] {
                    let mut v = vec![0i64; dim];
                    v[i] = si;
                    v[j] = sj;
                    out.push(ints(&v));
                }
            }
        }
    }
    out
}

fn descending(dim: usize, b: Backend) -> Vec<Scalar> {
    (0..dim).map(|i| b.from_i64((dim - i) as i64)).collect()
}

fn powers_of_two(dim: usize, b: Backend) -> Vec<Scalar> {
    (0..dim).map(|i| b.from_i64(1 << i)).collect()
}

fn labelled(vs: Vec<Vec<Scalar>>, o: Orbit) -> Vec<(Vec<Scalar>, Orbit)> {
    vs.into_iter().map(|v| (v, o)).collect()
}

/// `½(±1, ..., ±1)` in `dim` coordinates; `parity` selects the number of
/// minus signs mod 2 (`None` keeps all).
pub(crate) fn half_sign_vectors(dim: usize, parity: Option<u32>) -> Vec<Vec<Scalar>> {
    let b = Backend::Rational;
    (0u32..1 << dim)
        .filter(|mask| parity.is_none_or(|p| mask.count_ones() % 2 == p))
        .map(|mask| {
            (0..dim)
                .map(|i| if mask >> i & 1 == 1 { b.from_ratio(-1, 2) } else { b.from_ratio(1, 2) })
                .collect()
        })
        .collect()
}

fn e8_roots() -> Vec<Vec<Scalar>> {
    let mut out = pm_pairs(8);
    out.extend(half_sign_vectors(8, Some(0)));
    out
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    crate::polyring::dot(a, b)
}

pub(crate) fn e7_alpha() -> Vec<Scalar> {
    ints(&[0, 0, 0, 0, 0, 0, 1, 1])
}

pub(crate) fn e6_pair() -> (Vec<Scalar>, Vec<Scalar>) {
    (ints(&[0, 0, 0, 0, 0, 0, 1, 1]), ints(&[0, 0, 0, 0, 0, 1, -1, 0]))
}

pub(crate) fn e_roots(rank: usize) -> Vec<Vec<Scalar>> {
    let all = e8_roots();
    match rank {
        8 => all,
        7 => {
            let a = e7_alpha();
            all.into_iter().filter(|v| dot(v, &a).is_zero()).collect()
        }
        _ => {
            let (a1, a2) = e6_pair();
            all.into_iter()
                .filter(|v| dot(v, &a1).is_zero() && dot(v, &a2).is_zero())
                .collect()
        }
    }
}

/// Weights of the 56 of E7: `β - α/2` for E8 roots with `β·α = 1`.
pub(crate) fn e7_minimal() -> Vec<Vec<Scalar>> {
    let a = e7_alpha();
    let half = Backend::Rational.from_ratio(1, 2);
    e8_roots()
        .into_iter()
        .filter(|v| dot(v, &a).is_one())
        .map(|v| v.iter().zip(&a).map(|(x, y)| x - &(&half * y)).collect())
        .collect()
}

/// Weights of the 27 of E6: `β - (2a1 + a2)/3` for E8 roots with `β·a1 = 1`, `β·a2 = 0`.
pub(crate) fn e6_minimal() -> Vec<Vec<Scalar>> {
    let (a1, a2) = e6_pair();
    let b = Backend::Rational;
    let shift: Vec<Scalar> = a1
        .iter()
        .zip(&a2)
        .map(|(x, y)| &(&(&b.from_i64(2) * x) + y) * &b.from_ratio(1, 3))
        .collect();
    e8_roots()
        .into_iter()
        .filter(|v| dot(v, &a1).is_one() && dot(v, &a2).is_zero())
        .map(|v| v.iter().zip(&shift).map(|(x, y)| x - y).collect())
        .collect()
}

fn q5(a: BigRational, b: BigRational) -> Scalar {
    Backend::Quadratic(5).quadratic(a, b).expect("quadratic backend")
}

/// `(1/2, τ/2, 1/(2τ))` in Q(sqrt 5).
fn golden_halves() -> [Scalar; 3] {
    [
        q5(rat(1, 2), rat(0, 1)),
        q5(rat(1, 4), rat(1, 4)),
        q5(rat(-1, 4), rat(1, 4)),
    ]
}

fn sign_patterns(values: &[Scalar]) -> Vec<Vec<Scalar>> {
    let nz: Vec<usize> = (0..values.len()).filter(|&i| !values[i].is_zero()).collect();
    (0u32..1 << nz.len())
        .map(|mask| {
            let mut v = values.to_vec();
            for (bit, &i) in nz.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    v[i] = -&v[i];
                }
            }
            v
        })
        .collect()
}

fn even_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut all);
    all.retain(|p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        inversions % 2 == 0
    });
    all
}

fn h_roots(rank: usize) -> Vec<Vec<Scalar>> {
    let b = Backend::Quadratic(5);
    let [half, half_tau, half_inv] = golden_halves();
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..rank {
        out.push(unit(rank, i, 1, b));
        out.push(unit(rank, i, -1, b));
    }
    if rank == 3 {
        let base = [half_inv, half, half_tau];
        for shift in 0..3 {
            let v: Vec<Scalar> = (0..3).map(|k| base[(k + shift) % 3].clone()).collect();
            out.extend(sign_patterns(&v));
        }
    } else {
        let lift = |v: Vec<Scalar>| -> Vec<Scalar> { v.into_iter().map(|x| x.to_backend(b).unwrap()).collect() };
        out.extend(half_sign_vectors(4, None).into_iter().map(lift));
        let base = [half_tau, half, half_inv, b.zero()];
        for p in even_permutations(4) {
            let v: Vec<Scalar> = (0..4).map(|k| base[p[k]].clone()).collect();
            out.extend(sign_patterns(&v));
        }
    }
    out
}

/// Rotation by `2π/m` for the exact dihedral realizations.
fn exact_rotation(m: u32) -> (Backend, [[Scalar; 2]; 2], Vec<Scalar>) {
    match m {
        8 => {
            let b = Backend::Quadratic(2);
            let c = b.quadratic(rat(0, 1), rat(1, 2)).unwrap();
            // odd orbit starts at (1, tan(π/8)) = (1, sqrt2 - 1)
            let start = vec![b.one(), b.quadratic(rat(-1, 1), rat(1, 1)).unwrap()];
            (b, [[c.clone(), -&c], [c.clone(), c]], start)
        }
        12 => {
            let b = Backend::Quadratic(3);
            let c = b.quadratic(rat(0, 1), rat(1, 2)).unwrap();
            let s = b.from_ratio(1, 2);
            // (1, tan(π/12)) = (1, 2 - sqrt3)
            let start = vec![b.one(), b.quadratic(rat(2, 1), rat(-1, 1)).unwrap()];
            (b, [[c.clone(), -&s], [s, c]], start)
        }
        _ => unreachable!("no exact realization"),
    }
}

fn rotate(r: &[[Scalar; 2]; 2], v: &[Scalar]) -> Vec<Scalar> {
    vec![&(&r[0][0] * &v[0]) + &(&r[0][1] * &v[1]), &(&r[1][0] * &v[0]) + &(&r[1][1] * &v[1])]
}

fn orbit_of(r: &[[Scalar; 2]; 2], start: Vec<Scalar>, count: u32) -> Vec<Vec<Scalar>> {
    let mut out = vec![start];
    for _ in 1..count {
        let next = rotate(r, out.last().unwrap());
        out.push(next);
    }
    out
}

fn float_vec(theta: f64, scale: f64) -> Vec<Scalar> {
    vec![Scalar::Float(scale * theta.cos()), Scalar::Float(scale * theta.sin())]
}

fn dihedral_roots(m: u32, backend: Backend) -> Vec<(Vec<Scalar>, Orbit)> {
    let even = m % 2 == 0;
    if backend.is_exact() {
        let (b, rot, odd_start) = exact_rotation(m);
        let mut out = labelled(orbit_of(&rot, vec![b.one(), b.zero()], m), Orbit::Short);
        out.extend(labelled(orbit_of(&rot, odd_start, m), Orbit::Long));
        return out;
    }
    let step = std::f64::consts::PI / f64::from(m);
    (0..2 * m)
        .map(|k| {
            let theta = step * f64::from(k);
            let orbit = match (even, k % 2) {
                (false, _) => Orbit::All,
                (true, 0) => Orbit::Short,
                (true, _) => Orbit::Long,
            };
            (float_vec(theta, 1.0), orbit)
        })
        .collect()
}

/// Vertices `R_m` of the regular m-gon, `k = 1..m`.
pub(crate) fn mgon_vertices(m: u32, backend: Backend) -> Vec<Vec<Scalar>> {
    if backend.is_exact() {
        let (b, rot, _) = exact_rotation(m);
        let mut v = rotate(&rot, &[b.one(), b.zero()]);
        let mut out = Vec::new();
        for _ in 0..m {
            out.push(v.clone());
            v = rotate(&rot, &v);
        }
        return out;
    }
    let t0 = if m % 2 == 0 { 0.0 } else { std::f64::consts::PI / (2.0 * f64::from(m)) };
    (1..=m)
        .map(|k| float_vec(2.0 * std::f64::consts::PI * f64::from(k) / f64::from(m) + t0, 1.0))
        .collect()
}

fn g2_planar() -> Vec<(Vec<Scalar>, Orbit)> {
    let b = Backend::Quadratic(3);
    let q = |a: (i64, i64), s: (i64, i64)| b.quadratic(rat(a.0, a.1), rat(s.0, s.1)).unwrap();
    let half = q((1, 2), (0, 1));
    let hs3 = q((0, 1), (1, 2));
    let short = vec![b.one(), b.zero()];
    let long = vec![q((3, 2), (0, 1)), hs3.clone()];
    let rot = [[half.clone(), -&hs3], [hs3, half]];
    let mut out = labelled(orbit_of(&rot, short, 6), Orbit::Short);
    out.extend(labelled(orbit_of(&rot, long, 6), Orbit::Long));
    out
}

pub(crate) fn raw_system(spec: &RootSystemSpec, backend: Backend) -> RawSystem {
    let r = spec.rank;
    let rb = Backend::Rational;
    match spec.family {
        Family::A => {
            let mut roots = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    if i != j {
                        let mut v = vec![0i64; r];
                        v[i] = 1;
                        v[j] = -1;
                        roots.push((ints(&v), Orbit::All));
                    }
                }
            }
            RawSystem { dim: r, roots, generic: descending(r, rb) }
        }
        Family::B | Family::C => {
            // C_r shares the B_r coordinates; only the orbit names swap
            let (pairs, singles) = if spec.family == Family::B {
                (Orbit::Long, Orbit::Short)
            } else {
                (Orbit::Short, Orbit::Long)
            };
            let mut roots = labelled(pm_pairs(r), pairs);
            for i in 0..r {
                roots.push((unit(r, i, 1, rb), singles));
                roots.push((unit(r, i, -1, rb), singles));
            }
            RawSystem { dim: r, roots, generic: descending(r, rb) }
        }
        Family::D => RawSystem {
            dim: r,
            roots: labelled(pm_pairs(r), Orbit::All),
            generic: descending(r, rb),
        },
        Family::E => RawSystem {
            dim: 8,
            roots: labelled(e_roots(r), Orbit::All),
            generic: powers_of_two(8, rb),
        },
        Family::F => {
            let mut roots = labelled(pm_pairs(4), Orbit::Long);
            for i in 0..4 {
                roots.push((unit(4, i, 1, rb), Orbit::Short));
                roots.push((unit(4, i, -1, rb), Orbit::Short));
            }
            roots.extend(labelled(half_sign_vectors(4, None), Orbit::Short));
            RawSystem { dim: 4, roots, generic: powers_of_two(4, rb) }
        }
        Family::G if spec.embedding == Embedding::Planar => RawSystem {
            dim: 2,
            roots: g2_planar(),
            generic: vec![Backend::Quadratic(3).one(), Backend::Quadratic(3).from_ratio(1, 60)],
        },
        Family::G => {
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        let mut v = [0i64; 3];
                        v[i] = 1;
                        v[j] = -1;
                        roots.push((ints(&v), Orbit::Short));
                    }
                }
                let mut v = [-1i64; 3];
                v[i] = 2;
                roots.push((ints(&v), Orbit::Long));
                roots.push((ints(&v.map(|x| -x)), Orbit::Long));
            }
            RawSystem { dim: 3, roots, generic: ints(&[4, 2, 1]) }
        }
        Family::H => {
            let b = Backend::Quadratic(5);
            RawSystem {
                dim: r,
                roots: labelled(h_roots(r), Orbit::All),
                generic: powers_of_two(r, b),
            }
        }
        Family::I2 => {
            let m = spec.m.expect("validated");
            RawSystem {
                dim: 2,
                roots: dihedral_roots(m, backend),
                generic: vec![backend.one(), backend.from_ratio(1, 10 * i64::from(m))],
            }
        }
    }
}

/// Table of invariant degrees.
pub(crate) fn degrees(spec: &RootSystemSpec) -> Vec<u32> {
    let r = spec.rank as u32;
    match spec.family {
        Family::A => (2..=r).chain(std::iter::once(1)).collect(),
        Family::B | Family::C => (1..=r).map(|k| 2 * k).collect(),
        Family::D => (1..r).map(|k| 2 * k).chain(std::iter::once(r)).collect(),
        Family::E => match r {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
        },
        Family::F => vec![2, 6, 8, 12],
        Family::G => vec![2, 6],
        Family::I2 => vec![2, spec.m.expect("validated")],
        Family::H => match r {
            3 => vec![2, 6, 10],
            _ => vec![2, 12, 20, 30],
        },
    }
}
