//! Weyl-ordered polynomial operators in `q̂`, `p̂`.
//!
//! A [`PolyOp`] is a commutative symbol `Σ c_mn q^m p^n`; realizing it maps
//! every monomial to the average over all distinct interleavings of `m`
//! copies of `q̂` and `n` copies of `p̂`. The symmetrized product `A ∘ B` of
//! two symbols is their commutative product followed by Weyl ordering.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::hilbert::{build_qp, lie_bracket, ComplexOperator};
use crate::scalar::{lit, modulus, re, Hbar, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Q,
    P,
}

/// Polynomial symbol in `(q, p)` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyOp<T: Real> {
    terms: BTreeMap<(u32, u32), Complex<T>>,
    hbar: Hbar<T>,
}

impl<T: Real> PolyOp<T> {
    pub fn zero(hbar: Hbar<T>) -> Self {
        Self {
            terms: BTreeMap::new(),
            hbar,
        }
    }

    /// `coeff · q^m p^n`.
    pub fn monomial(m: u32, n: u32, coeff: T, hbar: Hbar<T>) -> Self {
        Self::zero(hbar).with_term(m, n, re(coeff))
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = ((u32, u32), Complex<T>)>,
        hbar: Hbar<T>,
    ) -> Self {
        let mut out = Self::zero(hbar);
        for ((m, n), c) in terms {
            out = out.with_term(m, n, c);
        }
        out
    }

    /// `(p² + ω² q²)/2`.
    pub fn oscillator(omega: T, hbar: Hbar<T>) -> Self {
        let half = lit::<T>(0.5);
        Self::zero(hbar)
            .with_term(0, 2, re(half))
            .with_term(2, 0, re(half * omega * omega))
    }

    /// Adds `coeff · q^m p^n` to the polynomial.
    pub fn with_term(mut self, m: u32, n: u32, coeff: Complex<T>) -> Self {
        let entry = self
            .terms
            .entry((m, n))
            .or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *entry += coeff;
        if *entry == Complex::new(T::zero(), T::zero()) {
            self.terms.remove(&(m, n));
        }
        self
    }

    #[inline]
    pub fn hbar(&self) -> Hbar<T> {
        self.hbar
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex<T>)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coefficient(&self, m: u32, n: u32) -> Complex<T> {
        self.terms
            .get(&(m, n))
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree `m + n`; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(m, n)| m + n).max().unwrap_or(0)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.im == T::zero())
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * factor)), self.hbar)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, n), c) in other.terms() {
            out = out.with_term(m, n, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(re(-T::one())))
    }

    /// Commutative symbol product.
    pub fn symbol_product(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.hbar);
        for ((m1, n1), c1) in self.terms() {
            for ((m2, n2), c2) in other.terms() {
                out = out.with_term(m1 + m2, n1 + n2, c1 * c2);
            }
        }
        out
    }

    /// Formal partial derivative.
    pub fn derivative(&self, variable: Variable) -> Self {
        let mut out = Self::zero(self.hbar);
        for ((m, n), c) in self.terms() {
            match variable {
                Variable::Q if m > 0 => {
                    out = out.with_term(m - 1, n, c * re(lit::<T>(m as f64)));
                }
                Variable::P if n > 0 => {
                    out = out.with_term(m, n - 1, c * re(lit::<T>(n as f64)));
                }
                _ => {}
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weyl-symmetrized `q̂^m p̂^n` realized with `dim`-truncated ladder matrices.
///
/// Built from the recursion `S(m, n) = q̂ S(m−1, n) + p̂ S(m, n−1)` for the
/// sum over all interleavings, then divided by `C(m+n, m)`.
pub fn weyl_monomial<T: Real>(
    m: u32,
    n: u32,
    dim: usize,
    hbar: Hbar<T>,
) -> Result<ComplexOperator<T>> {
    let (q, p) = build_qp(dim, hbar)?;
    Ok(weyl_from_qp(m, n, &q, &p))
}

fn weyl_from_qp<T: Real>(
    m: u32,
    n: u32,
    q: &ComplexOperator<T>,
    p: &ComplexOperator<T>,
) -> ComplexOperator<T> {
    let dim = q.dim();
    let (mu, nu) = (m as usize, n as usize);
    let mut table: Vec<Vec<ComplexOperator<T>>> = Vec::with_capacity(mu + 1);
    for i in 0..=mu {
        let mut row: Vec<ComplexOperator<T>> = Vec::with_capacity(nu + 1);
        for j in 0..=nu {
            let entry = match (i, j) {
                (0, 0) => ComplexOperator::identity(dim),
                (0, _) => p * &row[j - 1],
                (_, 0) => q * &table[i - 1][0],
                _ => &(q * &table[i - 1][j]) + &(p * &row[j - 1]),
            };
            row.push(entry);
        }
        table.push(row);
    }
    let sum = table.swap_remove(mu).swap_remove(nu);
    let out = sum.scale_real(lit::<T>(1.0 / binomial(m + n, m)));
    // average of mutually adjoint words
    let sym = (&out + &out.adjoint()).scale_real(lit::<T>(0.5));
    sym.certify_hermitian().unwrap_or(out)
}

/// Linear combination of Weyl-ordered monomials.
pub fn realize<T: Real>(poly: &PolyOp<T>, dim: usize) -> Result<ComplexOperator<T>> {
    let (q, p) = build_qp(dim, poly.hbar)?;
    let mut out = ComplexOperator::zeros(dim);
    for ((m, n), c) in poly.terms() {
        out = &out + &weyl_from_qp(m, n, &q, &p).scale(c);
    }
    if poly.has_real_coefficients() {
        out = out.certify_hermitian()?;
    }
    Ok(out)
}

/// Formal derivative; see [`PolyOp::derivative`].
pub fn poly_derivative<T: Real>(poly: &PolyOp<T>, variable: Variable) -> PolyOp<T> {
    poly.derivative(variable)
}

/// Both sides of `(1/iħ)[Ĥ, ρ̂] = ∂Ĥ/∂q̂ ∘ ∂ρ̂/∂p̂ − ∂Ĥ/∂p̂ ∘ ∂ρ̂/∂q̂` compared on
/// the central block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingCheck<T: Real> {
    /// Max-entry norm of `LHS − RHS` on the central block.
    pub residual: T,
    /// `max(1, ‖LHS‖_max, ‖RHS‖_max)` on the same block.
    pub scale: T,
    /// Rows/columns `< block` are compared.
    pub block: usize,
}

impl<T: Real> OrderingCheck<T> {
    pub fn relative(&self) -> T {
        self.residual / self.scale
    }
}

/// Full report for the bracket/ordering identity; see [`ordering_residual`].
pub fn ordering_check<T: Real>(h: &PolyOp<T>, rho: &PolyOp<T>, dim: usize) -> Result<OrderingCheck<T>> {
    if h.hbar != rho.hbar {
        return Err(Error::Contract(
            "H and rho carry different hbar values".into(),
        ));
    }
    let margin = (h.degree() + rho.degree()) as usize;
    let block = dim.saturating_sub(margin);
    if block == 0 {
        return Err(Error::Validation(format!(
            "dim {dim} leaves no central block for total degree {margin}"
        )));
    }
    let h_op = realize(h, dim)?;
    let rho_op = realize(rho, dim)?;
    let lhs = lie_bracket(&h_op, &rho_op, h.hbar)?;

    let rhs_symbol = h
        .derivative(Variable::Q)
        .symbol_product(&rho.derivative(Variable::P))
        .sub(&h.derivative(Variable::P).symbol_product(&rho.derivative(Variable::Q)));
    let rhs = realize(&rhs_symbol, dim)?;

    let diff = &lhs - &rhs;
    let mut residual = T::zero();
    for j in 0..block {
        for i in 0..block {
            residual = residual.max(modulus(diff.get(i, j)));
        }
    }
    let scale = T::one()
        .max(lhs.max_abs_leading(block))
        .max(rhs.max_abs_leading(block));
    Ok(OrderingCheck {
        residual,
        scale,
        block,
    })
}

/// Max-entry norm of `LHS − RHS` of the symmetrized-product bracket identity,
/// restricted to indices `< dim − (deg H + deg ρ)`.
pub fn ordering_residual<T: Real>(h: &PolyOp<T>, rho: &PolyOp<T>, dim: usize) -> Result<T> {
    Ok(ordering_check(h, rho, dim)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hb() -> Hbar<f64> {
        Hbar::default()
    }

    /// Brute force: average of every word with `m` q's and `n` p's.
    fn interleaving_oracle(m: u32, n: u32, dim: usize, hbar: Hbar<f64>) -> ComplexOperator<f64> {
        let (q, p) = build_qp(dim, hbar).unwrap();
        let len = m + n;
        let mut sum = ComplexOperator::zeros(dim);
        let mut count = 0.0;
        for mask in 0u32..(1 << len) {
            if mask.count_ones() != m {
                continue;
            }
            let mut word = ComplexOperator::identity(dim);
            for bit in 0..len {
                let factor = if mask & (1 << bit) != 0 { &q } else { &p };
                word = &word * factor;
            }
            sum = &sum + &word;
            count += 1.0;
        }
        sum.scale_real(1.0 / count)
    }

    #[test]
    fn monomials_match_interleaving_enumeration() {
        for (m, n) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
            let fast = weyl_monomial(m, n, 12, Hbar::new(0.8).unwrap()).unwrap();
            let slow = interleaving_oracle(m, n, 12, Hbar::new(0.8).unwrap());
            assert!((&fast - &slow).max_abs() < 1e-12, "({m},{n})");
        }
    }

    #[test]
    fn qp_monomial_is_anticommutator_half() {
        let (q, p) = build_qp(8, hb()).unwrap();
        let want = (&(&q * &p) + &(&p * &q)).scale_real(0.5);
        let got = weyl_monomial(1, 1, 8, hb()).unwrap();
        assert!((&got - &want).max_abs() < 1e-14);
    }

    #[test]
    fn pure_powers_need_no_ordering() {
        let (q, _) = build_qp(8, hb()).unwrap();
        let got = weyl_monomial(2, 0, 8, hb()).unwrap();
        assert!((&got - &(&q * &q)).max_abs() < 1e-14);
    }

    #[test]
    fn two_one_monomial_averages_three_words() {
        let (q, p) = build_qp(9, hb()).unwrap();
        let qqp = &(&q * &q) * &p;
        let qpq = &(&q * &p) * &q;
        let pqq = &(&p * &q) * &q;
        let want = (&(&qqp + &qpq) + &pqq).scale_real(1.0 / 3.0);
        let got = weyl_monomial(2, 1, 9, hb()).unwrap();
        assert!((&got - &want).max_abs() < 1e-13);
    }

    #[test]
    fn monomials_are_hermitian() {
        for m in 0..4 {
            for n in 0..4 {
                let w = weyl_monomial(m, n, 10, hb()).unwrap();
                assert!(w.hermiticity_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn realize_kinetic_term() {
        let (_, p) = build_qp(6, hb()).unwrap();
        let got = realize(&PolyOp::monomial(0, 2, 0.5, hb()), 6).unwrap();
        assert!((&got - &(&p * &p).scale_real(0.5)).max_abs() < 1e-14);
        assert_eq!(realize(&PolyOp::zero(hb()), 6).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn realized_oscillator_spectrum() {
        let h = realize(&PolyOp::oscillator(1.0, hb()), 40).unwrap();
        let e = crate::hilbert::hermitian_eigen(&h).unwrap();
        for n in 0..10 {
            assert!((e.values()[n] - (n as f64 + 0.5)).abs() < 1e-8);
        }
    }

    #[test]
    fn formal_derivatives() {
        let q2p = PolyOp::monomial(2, 1, 1.0, hb());
        assert_eq!(q2p.derivative(Variable::Q), PolyOp::monomial(1, 1, 2.0, hb()));
        let kin = PolyOp::monomial(0, 2, 0.5, hb());
        assert_eq!(poly_derivative(&kin, Variable::P), PolyOp::monomial(0, 1, 1.0, hb()));
        assert!(PolyOp::monomial(0, 3, 1.0, hb()).derivative(Variable::Q).is_zero());
    }

    #[test]
    fn ordering_kinetic_against_position() {
        let h = PolyOp::monomial(0, 2, 0.5, hb());
        let rho = PolyOp::monomial(1, 0, 1.0, hb());
        let r = ordering_check(&h, &rho, 16).unwrap();
        assert!(r.residual < 1e-12);
        assert_eq!(r.block, 13);
    }

    #[test]
    fn ordering_canonical_pair() {
        let h = PolyOp::monomial(1, 0, 1.0, hb());
        let rho = PolyOp::monomial(0, 1, 1.0, hb());
        assert!(ordering_residual(&h, &rho, 16).unwrap() < 1e-13);
    }

    #[test]
    fn ordering_squares() {
        let hbar = Hbar::new(0.6).unwrap();
        let h = PolyOp::monomial(2, 0, 1.0, hbar);
        let rho = PolyOp::monomial(0, 2, 1.0, hbar);
        let r = ordering_check(&h, &rho, 24).unwrap();
        assert!(r.residual <= 1e-10 * r.scale);
    }

    #[test]
    fn ordering_rejects_mismatched_hbar() {
        let h = PolyOp::monomial(1, 0, 1.0, hb());
        let rho = PolyOp::monomial(0, 1, 1.0, Hbar::new(2.0).unwrap());
        assert!(matches!(ordering_check(&h, &rho, 8), Err(Error::Contract(_))));
    }

    #[test]
    fn ordering_degree_three_is_reported_not_exact() {
        let h = PolyOp::monomial(3, 0, 1.0, hb());
        let rho = PolyOp::monomial(0, 3, 1.0, hb());
        let r = ordering_check(&h, &rho, 24).unwrap();
        // Weyl ordering leaves an O(ħ²) Moyal correction at this degree
        assert!(r.residual.is_finite());
        assert!(r.residual > 1e-6);
    }
}
