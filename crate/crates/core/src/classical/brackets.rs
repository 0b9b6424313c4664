use super::grid::{AxisId, PhaseField};
use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// `∂A/∂q ∂B/∂p − ∂A/∂p ∂B/∂q`
pub fn bracket_qp<T: Real>(a: &PhaseField<T>, b: &PhaseField<T>) -> Result<PhaseField<T>> {
    a.same_grid(b)?;
    let lhs = a.derivative(AxisId::Q).try_mul(&b.derivative(AxisId::P))?;
    let rhs = a.derivative(AxisId::P).try_mul(&b.derivative(AxisId::Q))?;
    lhs.try_sub(&rhs)
}

/// `−∂A/∂t ∂B/∂s + ∂A/∂s ∂B/∂t`
pub fn bracket_ts<T: Real>(a: &PhaseField<T>, b: &PhaseField<T>) -> Result<PhaseField<T>> {
    a.same_grid(b)?;
    let lhs = a.derivative(AxisId::S).try_mul(&b.derivative(AxisId::T))?;
    let rhs = a.derivative(AxisId::T).try_mul(&b.derivative(AxisId::S))?;
    lhs.try_sub(&rhs)
}

/// Generalized bracket `{A,B}_qp − {A,B}_ts`.
pub fn bracket_w<T: Real>(a: &PhaseField<T>, b: &PhaseField<T>) -> Result<PhaseField<T>> {
    bracket_qp(a, b)?.try_sub(&bracket_ts(a, b)?)
}

/// Tolerance used to accept `∂H/∂s = 1`, `∂H/∂t = 0`, relative to `max(1, |H|)`.
pub const FORM_TOL: f64 = 1e-8;

/// Max-abs of `{H, ρ}_W` over interior nodes.
///
/// `h` must have the form `H(q,p) + s`; this is checked on the grid.
pub fn liouville_residual<T: Real>(h: &PhaseField<T>, rho: &PhaseField<T>) -> Result<T> {
    h.same_grid(rho)?;
    check_total_form(h)?;
    Ok(bracket_w(h, rho)?.interior_max_abs())
}

fn check_total_form<T: Real>(h: &PhaseField<T>) -> Result<()> {
    let tol = lit::<T>(FORM_TOL) * h.interior_max_abs().max(T::one());
    let hs = h.derivative(AxisId::S);
    let ht = h.derivative(AxisId::T);
    for i in h.grid().interior_indices() {
        let ds = (hs.values()[i] - T::one()).abs();
        let dt = ht.values()[i].abs();
        if ds > tol || dt > tol {
            return Err(Error::Contract(format!(
                "Hamilton function is not of the form H(q,p)+s: |dH/ds - 1| = {ds}, |dH/dt| = {dt}"
            )));
        }
    }
    Ok(())
}
