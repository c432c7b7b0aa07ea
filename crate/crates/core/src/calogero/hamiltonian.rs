use crate::polyring::{Division, Poly, RatFun};
use crate::rootsys::RootSystem;

use super::CalogeroError;

/// `H̃P = -½ΔP + q·∇P - Σ_{Δ₊} g (ρ·∇P)/(ρ·q)` on an invariant polynomial.
///
/// Fails with a domain error when `P` is not invariant.
pub fn hamiltonian_apply(rs: &RootSystem, p: &Poly) -> Result<Poly, CalogeroError> {
    for &a in rs.simple_indices() {
        if rs.reflect_poly(a, p) != *p {
            return Err(CalogeroError::Domain(format!(
                "the Hamiltonian acts on invariant polynomials; reflection {a} moves the input"
            )));
        }
    }
    hamiltonian_poly(rs, p)
}

/// As [`hamiltonian_apply`] without the invariance check; every division
/// must still be exact.
pub fn hamiltonian_poly(rs: &RootSystem, p: &Poly) -> Result<Poly, CalogeroError> {
    let b = rs.backend();
    let mut out = p.euler();
    out.add_scaled(&p.laplacian(), &b.from_ratio(-1, 2));
    for (i, root) in rs.positive_roots().iter().enumerate() {
        if root.coupling.is_zero() {
            continue;
        }
        let d = p.directional_derivative(&root.vector)?;
        if d.is_zero() {
            continue;
        }
        match d.divide_linear(rs.forms().form(i))? {
            Division::Exact(q) => out.add_scaled(&q, &-&root.coupling),
            Division::Indivisible { .. } => {
                return Err(CalogeroError::Internal(format!(
                    "(ρ·∇)P is not divisible by ρ·q for root {i}"
                )))
            }
        }
    }
    Ok(out)
}

/// The same differential operator on a rational function.
pub fn hamiltonian_ratfun(rs: &RootSystem, f: &RatFun) -> RatFun {
    if let Some(p) = f.as_poly() {
        if let Ok(h) = hamiltonian_poly(rs, p) {
            return h.into();
        }
    }
    let forms = rs.forms();
    let b = rs.backend();
    // each denominator factor is homogeneous of degree one
    let den_degree: u32 = f.denominator().values().sum();
    let mut euler_num = f.numerator().euler();
    euler_num.add_scaled(f.numerator(), &b.from_i64(-i64::from(den_degree)));
    let mut out = RatFun::new(euler_num, f.denominator().clone(), forms);
    out = out.add(&f.laplacian(forms).scale(&b.from_ratio(-1, 2)), forms);
    for (i, root) in rs.positive_roots().iter().enumerate() {
        if root.coupling.is_zero() {
            continue;
        }
        let d = f.directional_derivative(&root.vector, forms).expect("matching length");
        if d.is_zero() {
            continue;
        }
        out = out.add(&d.divide_by_form(i, 1, forms).scale(&-&root.coupling), forms);
    }
    out
}
