//! Dense complex operator algebra on finite-dimensional Hilbert factors.
//!
//! Composite operators on `space ⊗ time` always use the space factor as the
//! slow (outer) index: composite index `i * d_time + a`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::scalar::{from_usize, lit, modulus, re, tol, Hbar, Real};
use crate::{Error, Result};

/// Largest composite dimension [`tensor`] will build.
pub const MAX_DIM: usize = 4096;

/// Tolerance used to certify Hermiticity (max entry of `A − A†`, relative to
/// `max(1, ‖A‖_max)`).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense square complex matrix acting on a finite-dimensional factor or on a
/// tensor product of factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator<T: Real> {
    matrix: DMatrix<Complex<T>>,
    hermitian: bool,
}

impl<T: Real> ComplexOperator<T> {
    pub fn new(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() == 0 {
            return Err(Error::Dimension("operator dimension must be positive".into()));
        }
        Ok(Self {
            matrix,
            hermitian: false,
        })
    }

    /// Builds an operator and certifies it Hermitian.
    pub fn hermitian(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        Self::new(matrix)?.certify_hermitian()
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    /// Real diagonal operator.
    pub fn from_diagonal(values: &[T]) -> Self {
        let diag = DVector::from_iterator(values.len(), values.iter().map(|&v| re(v)));
        Self {
            matrix: DMatrix::from_diagonal(&diag),
            hermitian: true,
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self {
            matrix: DMatrix::from_fn(dim, dim, f),
            hermitian: false,
        }
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &StateVector<T>, bra: &StateVector<T>) -> Self {
        Self {
            matrix: &ket.amplitudes * bra.amplitudes.adjoint(),
            hermitian: false,
        }
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &StateVector<T>) -> Self {
        Self {
            matrix: &v.amplitudes * v.amplitudes.adjoint(),
            hermitian: true,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.matrix
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.matrix[(row, col)]
    }

    /// True when the operator carries a Hermiticity certificate.
    #[inline]
    pub fn is_certified_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |A − A†|` over all entries.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                let d = modulus(self.matrix[(i, j)] - self.matrix[(j, i)].conj());
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Checks `max |A − A†| ≤ 1e−12 · max(1, ‖A‖_max)` and sets the flag.
    pub fn certify_hermitian(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        let bound = tol::<T>(HERMITIAN_TOL) * self.max_abs().max(T::one());
        if defect > bound {
            return Err(Error::Validation(format!(
                "operator is not Hermitian: max |A - A^dagger| = {defect}"
            )));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.matrix
            .iter()
            .fold(T::zero(), |acc, z| acc.max(modulus(*z)))
    }

    /// Largest entry modulus restricted to rows and columns `< limit`.
    pub fn max_abs_leading(&self, limit: usize) -> T {
        let limit = limit.min(self.dim());
        let mut worst = T::zero();
        for j in 0..limit {
            for i in 0..limit {
                worst = worst.max(modulus(self.matrix[(i, j)]));
            }
        }
        worst
    }

    pub fn frobenius(&self) -> T {
        self.matrix
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            matrix: &self.matrix * factor,
            hermitian: self.hermitian && factor.im == T::zero(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(re(factor))
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        if v.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "cannot apply a dim-{} operator to a dim-{} vector",
                self.dim(),
                v.dim()
            )));
        }
        Ok(StateVector {
            amplitudes: &self.matrix * &v.amplitudes,
        })
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &StateVector<T>) -> Result<Complex<T>> {
        let av = self.apply(v)?;
        Ok(v.inner(&av))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(self * other)
    }

    /// Integer power by repeated multiplication; `A^0 = I`.
    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..exponent {
            out = &out * self;
        }
        out.hermitian = self.hermitian;
        out
    }
}

impl<'a, T: Real> Add<&'a ComplexOperator<T>> for &'a ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn add(self, rhs: &'a ComplexOperator<T>) -> ComplexOperator<T> {
        ComplexOperator {
            matrix: &self.matrix + &rhs.matrix,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl<'a, T: Real> Sub<&'a ComplexOperator<T>> for &'a ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn sub(self, rhs: &'a ComplexOperator<T>) -> ComplexOperator<T> {
        ComplexOperator {
            matrix: &self.matrix - &rhs.matrix,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl<'a, T: Real> Mul<&'a ComplexOperator<T>> for &'a ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn mul(self, rhs: &'a ComplexOperator<T>) -> ComplexOperator<T> {
        ComplexOperator {
            matrix: &self.matrix * &rhs.matrix,
            hermitian: false,
        }
    }
}

impl<T: Real> Neg for &ComplexOperator<T> {
    type Output = ComplexOperator<T>;

    fn neg(self) -> ComplexOperator<T> {
        ComplexOperator {
            matrix: -&self.matrix,
            hermitian: self.hermitian,
        }
    }
}

fn same_dim<T: Real>(a: &ComplexOperator<T>, b: &ComplexOperator<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "operator dimensions differ: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: DVector<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: DVector<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("state dimension must be positive".into()));
        }
        if amplitudes.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Validation("state amplitudes must be finite".into()));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_slice(values: &[Complex<T>]) -> Result<Self> {
        Self::new(DVector::from_column_slice(values))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            amplitudes: DVector::zeros(dim),
        }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    #[inline]
    pub fn get(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn is_normalized(&self, tolerance: T) -> bool {
        (self.norm() - T::one()).abs() <= tolerance
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() {
            return Err(Error::Degenerate("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(re(T::one() / n)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            amplitudes: &self.amplitudes * factor,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "vector dimensions differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self {
            amplitudes: &self.amplitudes + &other.amplitudes,
        })
    }

    /// `|self⟩ ⊗ |other⟩` with `self` as the outer index.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        checked_dim(self.dim(), other.dim())?;
        Ok(Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        })
    }

    /// Largest amplitude modulus.
    pub fn max_abs(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc.max(modulus(*z)))
    }
}

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T: Real> {
    values: Vec<T>,
    vectors: DMatrix<Complex<T>>,
}

impl<T: Real> EigenSystem<T> {
    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Eigenvector matrix `V` (columns are eigenvectors).
    #[inline]
    pub fn vectors(&self) -> &DMatrix<Complex<T>> {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> Result<StateVector<T>> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(StateVector {
            amplitudes: self.vectors.column(index).into_owned(),
        })
    }

    /// `V diag(E) V†`.
    pub fn reconstruct(&self) -> ComplexOperator<T> {
        let diag = DVector::from_iterator(self.len(), self.values.iter().map(|&v| re(v)));
        let scaled = &self.vectors * DMatrix::from_diagonal(&diag);
        ComplexOperator {
            matrix: scaled * self.vectors.adjoint(),
            hermitian: true,
        }
    }
}

/// Which tensor factor [`partial_trace`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Space,
    Time,
}

fn checked_dim(a: usize, b: usize) -> Result<usize> {
    match a.checked_mul(b) {
        Some(d) if d <= MAX_DIM => Ok(d),
        _ => Err(Error::Dimension(format!(
            "composite dimension {a}x{b} exceeds the maximum {MAX_DIM}"
        ))),
    }
}

/// Kronecker product `A ⊗ B` with `A` as the outer index.
pub fn tensor<T: Real>(a: &ComplexOperator<T>, b: &ComplexOperator<T>) -> Result<ComplexOperator<T>> {
    checked_dim(a.dim(), b.dim())?;
    Ok(ComplexOperator {
        matrix: a.matrix.kronecker(&b.matrix),
        hermitian: a.hermitian && b.hermitian,
    })
}

/// `AB − BA`.
pub fn commutator<T: Real>(
    a: &ComplexOperator<T>,
    b: &ComplexOperator<T>,
) -> Result<ComplexOperator<T>> {
    same_dim(a, b)?;
    Ok(ComplexOperator {
        matrix: &a.matrix * &b.matrix - &b.matrix * &a.matrix,
        hermitian: false,
    })
}

/// Quantum Lie bracket `(1/iħ)[A, B]`.
pub fn lie_bracket<T: Real>(
    a: &ComplexOperator<T>,
    b: &ComplexOperator<T>,
    hbar: Hbar<T>,
) -> Result<ComplexOperator<T>> {
    let c = commutator(a, b)?;
    // 1/(iħ) = −i/ħ
    Ok(c.scale(Complex::new(T::zero(), -T::one() / hbar.get())))
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
///
/// Ordering inside a degenerate block is whatever the solver produced.
pub fn hermitian_eigen<T: Real>(h: &ComplexOperator<T>) -> Result<EigenSystem<T>> {
    let h = if h.is_certified_hermitian() {
        h.clone()
    } else {
        h.clone().certify_hermitian()?
    };
    let n = h.dim();
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (&h.matrix + h.matrix.adjoint()) * re(lit::<T>(0.5));
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

/// Truncated position and momentum matrices in the number basis,
/// `q = √(ħ/2)(a + a†)` and `p = i√(ħ/2)(a† − a)`.
///
/// `[q, p] = iħ` holds on the leading `(dim − 1)` block; the last diagonal
/// entry carries the truncation defect `−(dim − 1)·iħ`.
pub fn build_qp<T: Real>(
    dim: usize,
    hbar: Hbar<T>,
) -> Result<(ComplexOperator<T>, ComplexOperator<T>)> {
    if dim < 2 {
        return Err(Error::Validation(format!(
            "q/p truncation needs dim >= 2, got {dim}"
        )));
    }
    let amp = (hbar.get() / lit::<T>(2.0)).sqrt();
    let mut q = DMatrix::zeros(dim, dim);
    let mut p = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        // ⟨n−1|a|n⟩ = √n
        let a = amp * from_usize::<T>(n).sqrt();
        q[(n - 1, n)] = re(a);
        q[(n, n - 1)] = re(a);
        p[(n - 1, n)] = Complex::new(T::zero(), -a);
        p[(n, n - 1)] = Complex::new(T::zero(), a);
    }
    Ok((
        ComplexOperator {
            matrix: q,
            hermitian: true,
        },
        ComplexOperator {
            matrix: p,
            hermitian: true,
        },
    ))
}

/// Reduced operator on one factor of a `d_space ⊗ d_time` composite.
pub fn partial_trace<T: Real>(
    rho: &ComplexOperator<T>,
    keep: Factor,
    dims: (usize, usize),
) -> Result<ComplexOperator<T>> {
    let (ds, dt) = dims;
    if ds == 0 || dt == 0 || ds.checked_mul(dt) != Some(rho.dim()) {
        return Err(Error::Dimension(format!(
            "cannot split a dim-{} operator as {ds}x{dt}",
            rho.dim()
        )));
    }
    let m = &rho.matrix;
    let matrix = match keep {
        Factor::Space => DMatrix::from_fn(ds, ds, |i, j| {
            (0..dt).fold(Complex::new(T::zero(), T::zero()), |acc, a| {
                acc + m[(i * dt + a, j * dt + a)]
            })
        }),
        Factor::Time => DMatrix::from_fn(dt, dt, |a, b| {
            (0..ds).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
                acc + m[(i * dt + a, i * dt + b)]
            })
        }),
    };
    Ok(ComplexOperator {
        matrix,
        hermitian: rho.hermitian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let out = tensor(
            &ComplexOperator::<f64>::identity(2),
            &ComplexOperator::identity(3),
        )
        .unwrap();
        assert_eq!(out, ComplexOperator::identity(6));
    }

    #[test]
    fn tensor_diag_with_identity_repeats_outer_entries() {
        let a = ComplexOperator::from_diagonal(&[2.0, 5.0]);
        let out = tensor(&a, &ComplexOperator::identity(2)).unwrap();
        assert_eq!(out, ComplexOperator::from_diagonal(&[2.0, 2.0, 5.0, 5.0]));
    }

    #[test]
    fn tensor_rejects_oversized_composites() {
        let a = ComplexOperator::<f64>::identity(65);
        let b = ComplexOperator::<f64>::identity(64);
        assert!(matches!(tensor(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn commutator_checks_dimensions() {
        let a = ComplexOperator::<f64>::identity(2);
        let b = ComplexOperator::<f64>::identity(3);
        assert!(matches!(commutator(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn self_commutator_vanishes() {
        let (q, _) = build_qp::<f64>(6, Hbar::default()).unwrap();
        assert_eq!(commutator(&q, &q).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn canonical_commutator_with_truncation_defect() {
        let hbar = Hbar::new(0.7).unwrap();
        let (q, p) = build_qp::<f64>(8, hbar).unwrap();
        let comm = commutator(&q, &p).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j && i < 7 {
                    c(0.0, 0.7)
                } else if i == 7 && j == 7 {
                    c(0.0, -0.7 * 7.0)
                } else {
                    c(0.0, 0.0)
                };
                assert_abs_diff_eq!(comm.get(i, j).re, expected.re, epsilon = 1e-14);
                assert_abs_diff_eq!(comm.get(i, j).im, expected.im, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn lie_bracket_of_q_and_p_is_identity_on_leading_block() {
        let hbar = Hbar::new(2.5).unwrap();
        let (q, p) = build_qp::<f64>(10, hbar).unwrap();
        let b = lie_bracket(&q, &p, hbar).unwrap();
        let defect = (&b - &ComplexOperator::identity(10)).max_abs_leading(9);
        assert!(defect < 1e-13);
    }

    #[test]
    fn build_qp_dim2_matches_ladder_construction() {
        let (q, p) = build_qp::<f64>(2, Hbar::default()).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(q.get(0, 1).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(q.get(1, 0).re, h, epsilon = 1e-15);
        assert_eq!(q.get(0, 0), c(0.0, 0.0));
        assert_abs_diff_eq!(p.get(0, 1).im, -h, epsilon = 1e-15);
        assert_abs_diff_eq!(p.get(1, 0).im, h, epsilon = 1e-15);
    }

    #[test]
    fn build_qp_rejects_dim_one() {
        assert!(matches!(
            build_qp::<f64>(1, Hbar::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn q_and_p_hermitian_for_all_small_dims() {
        for dim in 2..=64 {
            let (q, p) = build_qp::<f64>(dim, Hbar::default()).unwrap();
            assert_eq!(q.hermiticity_defect(), 0.0);
            assert_eq!(p.hermiticity_defect(), 0.0);
        }
    }

    #[test]
    fn ground_state_position_variance_is_half_hbar() {
        let hbar = Hbar::new(1.3).unwrap();
        for dim in 3..10 {
            let (q, _) = build_qp::<f64>(dim, hbar).unwrap();
            let q2 = &q * &q;
            let ground = StateVector::basis(dim, 0).unwrap();
            let v = q2.expectation(&ground).unwrap();
            assert_abs_diff_eq!(v.re, 0.65, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigen_of_diagonal_sorts_values() {
        let h = ComplexOperator::from_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eigen(&h).unwrap();
        assert_eq!(e.values(), &[1.0, 2.0, 3.0]);
        // eigenvector for 1.0 is ±e_1 up to phase
        let v = e.vector(0).unwrap();
        assert_abs_diff_eq!(modulus(v.get(1)), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigen_of_pauli_x() {
        let h = ComplexOperator::hermitian(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert_abs_diff_eq!(e.values()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values()[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let a = ComplexOperator::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        assert!(matches!(hermitian_eigen(&a), Err(Error::Validation(_))));
    }

    #[test]
    fn truncated_oscillator_low_spectrum() {
        let (q, p) = build_qp::<f64>(40, Hbar::default()).unwrap();
        let h = (&(&q * &q) + &(&p * &p)).scale_real(0.5);
        let e = hermitian_eigen(&h).unwrap();
        for n in 0..3 {
            assert_abs_diff_eq!(e.values()[n], n as f64 + 0.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn partial_trace_of_product_keeps_scaled_factor() {
        let a = ComplexOperator::from_diagonal(&[1.0, -2.0]);
        let b = ComplexOperator::from_diagonal(&[0.25, 0.5, 2.0]);
        let ab = tensor(&a, &b).unwrap();
        let red = partial_trace(&ab, Factor::Space, (2, 3)).unwrap();
        assert!((&red - &a.scale_real(2.75)).max_abs() < 1e-14);
        let red_t = partial_trace(&ab, Factor::Time, (2, 3)).unwrap();
        assert!((&red_t - &b.scale_real(-1.0)).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let rho = ComplexOperator::<f64>::identity(6);
        assert!(partial_trace(&rho, Factor::Space, (4, 2)).is_err());
    }

    #[test]
    fn state_vector_basics() {
        let v = StateVector::<f64>::basis(3, 1).unwrap();
        assert!(v.is_normalized(1e-15));
        assert!(StateVector::<f64>::basis(3, 3).is_err());
        let w = v.tensor(&StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(w.get(2), c(1.0, 0.0));
    }
}
