//! Discretized time factor.
//!
//! The time axis is an `N`-point periodic grid `t_a = a·Δt`. Its conjugate
//! `ŝ` is diagonal in the discrete Fourier basis with the centered ladder
//! `s_k = 2πħ k̃ / (N Δt)`, `k̃ = k − ⌊N/2⌋`. In the t-representation `ŝ`
//! acts as the spectral `+iħ ∂/∂t`, so `⟨t_a|s_k⟩ = exp(−i s_k t_a / ħ)/√N`
//! and `(1/iħ)[t̂, ŝ] ≈ −1` on states localized away from the wrap.
//!
//! With this sign `exp(−(i/ħ)Δt ŝ)` advances wavefunctions,
//! `ψ(t_a) ↦ ψ(t_{a+1})`, which moves the ket `|t_a⟩` to `|t_{a−1}⟩`.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::hilbert::{lie_bracket, ComplexOperator, StateVector};
use crate::scalar::{cis, from_usize, lit, modulus, re, tol, Hbar, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClockSpace<T: Real> {
    n_points: usize,
    dt: T,
    hbar: Hbar<T>,
    t_values: Vec<T>,
    s_values: Vec<T>,
    /// Unitary `F` with `F[k, a] = ⟨s_k|t_a⟩`.
    fourier: DMatrix<Complex<T>>,
    t_op: ComplexOperator<T>,
    s_op: ComplexOperator<T>,
}

/// Outcome of the exponentiated (Weyl) commutation check `UV = ωVU`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylPair<T: Real> {
    pub phase: Complex<T>,
    pub residual: T,
}

impl<T: Real> ClockSpace<T> {
    pub fn build(n_points: usize, dt: T, hbar: Hbar<T>) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::Validation(format!(
                "clock needs at least 2 points, got {n_points}"
            )));
        }
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(Error::Validation(format!("clock step must be positive, got {dt}")));
        }
        let n = n_points;
        let half = n / 2;
        let nf = from_usize::<T>(n);
        let two_pi = T::two_pi();
        let step = two_pi * hbar.get() / (nf * dt);

        let t_values: Vec<T> = (0..n).map(|a| from_usize::<T>(a) * dt).collect();
        let s_values: Vec<T> = (0..n)
            .map(|k| lit::<T>(k as f64 - half as f64) * step)
            .collect();

        let norm = T::one() / nf.sqrt();
        let fourier = DMatrix::from_fn(n, n, |k, a| {
            // reduce k̃·a mod N before forming the angle
            let kt = k as i64 - half as i64;
            let r = (kt * a as i64).rem_euclid(n as i64);
            cis(two_pi * from_usize::<T>(r as usize) / nf) * norm
        });

        let diag = nalgebra::DVector::from_iterator(n, s_values.iter().map(|&s| re(s)));
        let raw = fourier.adjoint() * DMatrix::from_diagonal(&diag) * &fourier;
        let s_matrix = (&raw + raw.adjoint()) * re(lit::<T>(0.5));
        let s_op = ComplexOperator::hermitian(s_matrix)?;
        let t_op = ComplexOperator::from_diagonal(&t_values);

        Ok(Self {
            n_points,
            dt,
            hbar,
            t_values,
            s_values,
            fourier,
            t_op,
            s_op,
        })
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn dt(&self) -> T {
        self.dt
    }

    #[inline]
    pub fn hbar(&self) -> Hbar<T> {
        self.hbar
    }

    /// Length of the periodic time axis, `N Δt`.
    pub fn period(&self) -> T {
        from_usize::<T>(self.n_points) * self.dt
    }

    #[inline]
    pub fn t_values(&self) -> &[T] {
        &self.t_values
    }

    /// Ascending s-ladder.
    #[inline]
    pub fn s_values(&self) -> &[T] {
        &self.s_values
    }

    #[inline]
    pub fn fourier(&self) -> &DMatrix<Complex<T>> {
        &self.fourier
    }

    #[inline]
    pub fn t_operator(&self) -> &ComplexOperator<T> {
        &self.t_op
    }

    #[inline]
    pub fn s_operator(&self) -> &ComplexOperator<T> {
        &self.s_op
    }

    /// Spacing of the s-ladder, `2πħ / (N Δt)`.
    pub fn ladder_step(&self) -> T {
        T::two_pi() * self.hbar.get() / self.period()
    }

    /// Centered frequency index `k̃ = k − ⌊N/2⌋`.
    pub fn centered_index(&self, k: usize) -> i64 {
        k as i64 - (self.n_points / 2) as i64
    }

    /// Storage index of the centered frequency `k̃`, if it is on the ladder.
    pub fn index_of_centered(&self, centered: i64) -> Option<usize> {
        let k = centered + (self.n_points / 2) as i64;
        (0..self.n_points as i64).contains(&k).then_some(k as usize)
    }

    /// Index of `s = 0`.
    pub fn zero_frequency_index(&self) -> usize {
        self.n_points / 2
    }

    /// `|t_a⟩`, the a-th standard basis vector.
    pub fn time_ket(&self, a: usize) -> Result<StateVector<T>> {
        StateVector::basis(self.n_points, a)
    }

    /// `|s_k⟩` in the t-basis (k-th column of `F†`).
    pub fn s_ket(&self, k: usize) -> Result<StateVector<T>> {
        if k >= self.n_points {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.n_points,
            });
        }
        let col = self.fourier.row(k).adjoint();
        StateVector::new(col)
    }

    /// `exp(−(i/ħ) τ ŝ)` evaluated in the s-eigenbasis.
    pub fn s_propagator(&self, tau: T) -> ComplexOperator<T> {
        let n = self.n_points;
        let hbar = self.hbar.get();
        let phases = nalgebra::DVector::from_iterator(
            n,
            self.s_values.iter().map(|&s| cis(-tau * s / hbar)),
        );
        let m = self.fourier.adjoint() * DMatrix::from_diagonal(&phases) * &self.fourier;
        ComplexOperator::new(m).expect("square by construction")
    }

    /// Cyclic shift `U = exp(−(i/ħ) Δt ŝ)`.
    pub fn shift_operator(&self) -> ComplexOperator<T> {
        self.s_propagator(self.dt)
    }

    /// Clock phase `V = exp((i/ħ) · step · t̂)`, diagonal with entries `exp(2πi a/N)`.
    pub fn clock_phase_operator(&self) -> ComplexOperator<T> {
        let n = self.n_points;
        let nf = from_usize::<T>(n);
        ComplexOperator::from_fn(n, |i, j| {
            if i == j {
                cis(T::two_pi() * from_usize::<T>(i) / nf)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Measures `ω` in `UV = ωVU` by least squares and reports
    /// `‖UV − ωVU‖_max`. For this build `ω = exp(+2πi/N)`.
    pub fn weyl_pair_check(&self) -> WeylPair<T> {
        let u = self.shift_operator();
        let v = self.clock_phase_operator();
        let uv = &u * &v;
        let vu = &v * &u;
        let num = vu.matrix().dotc(uv.matrix());
        let den = vu.matrix().norm_squared();
        let phase = num / re(den);
        let residual = (&uv - &vu.scale(phase)).max_abs();
        WeylPair { phase, residual }
    }

    /// `(1/iħ)[t̂, ŝ]`.
    pub fn canonical_bracket(&self) -> ComplexOperator<T> {
        lie_bracket(&self.t_op, &self.s_op, self.hbar).expect("same dimension")
    }

    /// `⟨probe|(1/iħ)[t̂, ŝ]|probe⟩`; close to −1 for probes well inside the
    /// grid in both t and s.
    pub fn commutator_defect(&self, probe: &StateVector<T>) -> Result<Complex<T>> {
        if probe.dim() != self.n_points {
            return Err(Error::Dimension(format!(
                "probe has dim {}, clock has {} points",
                probe.dim(),
                self.n_points
            )));
        }
        if !probe.is_normalized(tol::<T>(1e-10)) {
            return Err(Error::Validation(format!(
                "probe must be normalized, norm = {}",
                probe.norm()
            )));
        }
        self.canonical_bracket().expectation(probe)
    }

    /// Normalized discrete Gaussian `∝ exp(−(t − center)²/(4σ²))`, so that
    /// `|ψ|²` has standard deviation `σ`.
    pub fn gaussian_probe(&self, center: T, sigma: T) -> Result<StateVector<T>> {
        if !(sigma > T::zero()) {
            return Err(Error::Validation(format!("probe width must be positive, got {sigma}")));
        }
        let four = lit::<T>(4.0);
        let amps: Vec<Complex<T>> = self
            .t_values
            .iter()
            .map(|&t| {
                let x = t - center;
                re((-(x * x) / (four * sigma * sigma)).exp())
            })
            .collect();
        StateVector::from_slice(&amps)?.normalized()
    }

    /// Gaussian probe centered mid-grid.
    pub fn centered_probe(&self, sigma: T) -> Result<StateVector<T>> {
        let mid = self.t_values[self.n_points / 2];
        self.gaussian_probe(mid, sigma)
    }

    /// `max_{k≠l} |⟨s_k|t_a⟩⟨t_a|s_l⟩|`, the largest off-diagonal entry of
    /// `|t_a⟩⟨t_a|` in the s-basis (equal to `1/N`).
    pub fn sharp_time_overlap(&self, a: usize) -> Result<T> {
        if a >= self.n_points {
            return Err(Error::IndexOutOfRange {
                index: a,
                len: self.n_points,
            });
        }
        let mut worst = T::zero();
        for k in 0..self.n_points {
            for l in 0..self.n_points {
                if k != l {
                    let v = modulus(self.fourier[(k, a)] * self.fourier[(l, a)].conj());
                    worst = worst.max(v);
                }
            }
        }
        Ok(worst)
    }
}
