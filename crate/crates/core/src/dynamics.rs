//! Quantum dynamics on `H_space ⊗ H_time`.
//!
//! The total Hamiltonian is `H(q̂, p̂) ⊗ I + I ⊗ ŝ`. The operator derivative
//! with respect to `t̂` is `(1/iħ)[ŝ, ·]`, so the dynamical equation reads
//! `[I⊗ŝ, ρ̂] = [H⊗I, ρ̂]`. Its solutions are dyad sums
//! `Σ c_ij |E_i⟩⟨E_j| ⊗ |s_k(i)⟩⟨s_k(j)|` with `s_k(i) − s_k(j) = E_i − E_j`,
//! which on a finite clock requires every included gap to sit on the
//! s-ladder.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::clock::ClockSpace;
use crate::hilbert::{
    build_qp, commutator, hermitian_eigen, lie_bracket, partial_trace, tensor, ComplexOperator,
    EigenSystem, Factor, StateVector,
};
use crate::scalar::{from_usize, lit, modulus, re, to_f64, tol, Hbar, Real};
use crate::weylprod::{realize, PolyOp};
use crate::{Error, Result};

/// Default tolerance for placing energy gaps on the s-ladder.
pub const COMMENSURATION_TOL: f64 = 1e-9;

/// The space factor: a Hermitian `H(q̂, p̂)` with its eigensystem.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSystem<T: Real> {
    hamiltonian: ComplexOperator<T>,
    eigen: EigenSystem<T>,
    q_op: ComplexOperator<T>,
    p_op: ComplexOperator<T>,
    hbar: Hbar<T>,
}

impl<T: Real> SpaceSystem<T> {
    pub fn new(hamiltonian: ComplexOperator<T>, hbar: Hbar<T>) -> Result<Self> {
        let hamiltonian = hamiltonian.certify_hermitian()?;
        let eigen = hermitian_eigen(&hamiltonian)?;
        let (q_op, p_op) = build_qp(hamiltonian.dim().max(2), hbar)?;
        Ok(Self {
            hamiltonian,
            eigen,
            q_op,
            p_op,
            hbar,
        })
    }

    /// `ω (p̂² + q̂²)/2` in the number basis, Weyl-ordered.
    pub fn oscillator(dim: usize, omega: T, hbar: Hbar<T>) -> Result<Self> {
        let h = realize(&PolyOp::oscillator(T::one(), hbar), dim)?.scale_real(omega);
        Self::new(h, hbar)
    }

    /// Diagonal Hamiltonian with the given energies.
    pub fn from_energies(energies: &[T], hbar: Hbar<T>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Validation("space needs at least one level".into()));
        }
        Self::new(ComplexOperator::from_diagonal(energies), hbar)
    }

    pub fn from_poly(poly: &PolyOp<T>, dim: usize) -> Result<Self> {
        Self::new(realize(poly, dim)?, poly.hbar())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    #[inline]
    pub fn hamiltonian(&self) -> &ComplexOperator<T> {
        &self.hamiltonian
    }

    #[inline]
    pub fn eigen(&self) -> &EigenSystem<T> {
        &self.eigen
    }

    #[inline]
    pub fn energies(&self) -> &[T] {
        self.eigen.values()
    }

    #[inline]
    pub fn q_op(&self) -> &ComplexOperator<T> {
        &self.q_op
    }

    #[inline]
    pub fn p_op(&self) -> &ComplexOperator<T> {
        &self.p_op
    }

    #[inline]
    pub fn hbar(&self) -> Hbar<T> {
        self.hbar
    }

    /// Operator norm `max |E_i|`.
    pub fn norm(&self) -> T {
        self.energies()
            .iter()
            .fold(T::zero(), |acc, e| acc.max(e.abs()))
    }

    pub fn level(&self, index: usize) -> Result<StateVector<T>> {
        self.eigen.vector(index)
    }
}

fn check_hbar<T: Real>(space: &SpaceSystem<T>, clock: &ClockSpace<T>) -> Result<()> {
    if space.hbar() != clock.hbar() {
        return Err(Error::Contract(format!(
            "space hbar {} differs from clock hbar {}",
            space.hbar().get(),
            clock.hbar().get()
        )));
    }
    Ok(())
}

fn composite_dim<T: Real>(space: &SpaceSystem<T>, clock: &ClockSpace<T>) -> usize {
    space.dim() * clock.n_points()
}

fn check_composite<T: Real>(
    dim: usize,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<()> {
    let want = composite_dim(space, clock);
    if dim != want {
        return Err(Error::Dimension(format!(
            "composite object has dim {dim}, expected {}x{} = {want}",
            space.dim(),
            clock.n_points()
        )));
    }
    Ok(())
}

/// `H ⊗ I`.
pub fn space_part<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<ComplexOperator<T>> {
    tensor(space.hamiltonian(), &ComplexOperator::identity(clock.n_points()))
}

/// `I ⊗ ŝ`.
pub fn clock_part<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<ComplexOperator<T>> {
    tensor(&ComplexOperator::identity(space.dim()), clock.s_operator())
}

/// `I ⊗ t̂`.
pub fn time_part<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<ComplexOperator<T>> {
    tensor(&ComplexOperator::identity(space.dim()), clock.t_operator())
}

/// `H(q̂, p̂) ⊗ I + I ⊗ ŝ`.
pub fn total_hamiltonian<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<ComplexOperator<T>> {
    check_hbar(space, clock)?;
    let h = &space_part(space, clock)? + &clock_part(space, clock)?;
    h.certify_hermitian()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergCheck<T: Real> {
    /// `‖[H⊗I, I⊗t̂]‖_max`; exactly zero for commuting factors.
    pub exact_part: T,
    /// `⟨Ψ|(1/iħ)[I⊗ŝ, I⊗t̂]|Ψ⟩` for a mid-grid Gaussian probe; ideally `+1`.
    pub clock_part: Complex<T>,
    /// `‖[Ĥ_total, I⊗t̂] − I⊗[ŝ, t̂]‖_max`.
    pub identity_defect: T,
}

/// Default probe width `Δt √N / 2` used by [`heisenberg_check`].
pub fn default_probe_width<T: Real>(clock: &ClockSpace<T>) -> T {
    clock.dt() * from_usize::<T>(clock.n_points()).sqrt() / lit::<T>(2.0)
}

/// Heisenberg relation between the total Hamiltonian and `I ⊗ t̂`.
pub fn heisenberg_check<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<HeisenbergCheck<T>> {
    let probe = clock.centered_probe(default_probe_width(clock))?;
    heisenberg_check_with_probe(space, clock, &probe)
}

pub fn heisenberg_check_with_probe<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    time_probe: &StateVector<T>,
) -> Result<HeisenbergCheck<T>> {
    check_hbar(space, clock)?;
    let hbar = clock.hbar();
    let h_space = space_part(space, clock)?;
    let s_big = clock_part(space, clock)?;
    let t_big = time_part(space, clock)?;

    let exact_part = commutator(&h_space, &t_big)?.max_abs();

    let total = &h_space + &s_big;
    let lhs = commutator(&total, &t_big)?;
    let rhs = tensor(
        &ComplexOperator::identity(space.dim()),
        &commutator(clock.s_operator(), clock.t_operator())?,
    )?;
    let identity_defect = (&lhs - &rhs).max_abs();

    let probe = space.level(0)?.tensor(time_probe)?;
    let clock_part = lie_bracket(&s_big, &t_big, hbar)?.expectation(&probe)?;

    Ok(HeisenbergCheck {
        exact_part,
        clock_part,
        identity_defect,
    })
}

/// `‖[I⊗ŝ, ρ̂] − [H⊗I, ρ̂]‖_max`.
///
/// With `∂ρ̂/∂t̂ := (1/iħ)[ŝ, ρ̂]` this is also the residual of
/// `∂ρ̂/∂t̂ = (1/iħ)[H, ρ̂]` scaled by ħ.
pub fn vn_residual<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<T> {
    check_composite(rho.dim(), space, clock)?;
    let s_big = clock_part(space, clock)?;
    let h_big = space_part(space, clock)?;
    let diff = &commutator(&s_big, rho)? - &commutator(&h_big, rho)?;
    Ok(diff.max_abs())
}

/// Same difference as [`vn_residual`], with the max-entry norm taken in the
/// energy ⊗ s eigenbasis instead of the energy ⊗ t basis.
///
/// An entry there is `ρ_(ik),(jl) · ((s_k − s_l) − (E_i − E_j))`, so a
/// dyad off the constraint by one ladder step shows its full coefficient,
/// while t-basis entries carry an extra `1/N`.
pub fn vn_residual_eigenbasis<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<T> {
    check_composite(rho.dim(), space, clock)?;
    let s_big = clock_part(space, clock)?;
    let h_big = space_part(space, clock)?;
    let diff = &commutator(&s_big, rho)? - &commutator(&h_big, rho)?;
    let w = space.eigen().vectors().kronecker(&clock.fourier().adjoint());
    let rotated = w.adjoint() * diff.matrix() * &w;
    Ok(rotated.iter().fold(T::zero(), |acc, z| acc.max(modulus(*z))))
}

/// Operator time derivative `(1/iħ)[I⊗ŝ, ρ̂]`.
pub fn time_derivative<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<ComplexOperator<T>> {
    check_composite(rho.dim(), space, clock)?;
    lie_bracket(&clock_part(space, clock)?, rho, clock.hbar())
}

/// Coefficients, energy levels and their s-ladder assignment of a
/// stationary solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution<T: Real> {
    levels: Vec<usize>,
    coeffs: DMatrix<Complex<T>>,
    level_to_s: Vec<usize>,
    s_offset: T,
}

impl<T: Real> SpectralSolution<T> {
    #[inline]
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    #[inline]
    pub fn coeffs(&self) -> &DMatrix<Complex<T>> {
        &self.coeffs
    }

    /// Clock s-index assigned to each included level, in `levels` order.
    #[inline]
    pub fn level_to_s(&self) -> &[usize] {
        &self.level_to_s
    }

    #[inline]
    pub fn s_offset(&self) -> T {
        self.s_offset
    }

    /// `max |(s_k(i) − s_k(j)) − (E_i − E_j)|` over included pairs.
    pub fn assignment_defect(&self, space: &SpaceSystem<T>, clock: &ClockSpace<T>) -> T {
        let e = space.energies();
        let s = clock.s_values();
        let mut worst = T::zero();
        for (a, (&li, &ki)) in self.levels.iter().zip(&self.level_to_s).enumerate() {
            for (&lj, &kj) in self.levels[a..].iter().zip(&self.level_to_s[a..]) {
                let d = ((s[ki] - s[kj]) - (e[li] - e[lj])).abs();
                worst = worst.max(d);
            }
        }
        worst
    }
}

fn check_levels<T: Real>(space: &SpaceSystem<T>, levels: &[usize]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Validation("at least one energy level is required".into()));
    }
    for &l in levels {
        if l >= space.dim() {
            return Err(Error::IndexOutOfRange {
                index: l,
                len: space.dim(),
            });
        }
    }
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != levels.len() {
        return Err(Error::Validation("energy levels must be distinct".into()));
    }
    Ok(())
}

/// Places each level on the s-ladder at `s = E_i − E_ref + s_offset`, where
/// `E_ref` is the lowest included energy.
pub fn assign_levels<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    levels: &[usize],
    s_offset: T,
    tolerance: T,
) -> Result<Vec<usize>> {
    check_hbar(space, clock)?;
    check_levels(space, levels)?;
    let e = space.energies();
    let e_ref = levels
        .iter()
        .map(|&l| e[l])
        .fold(e[levels[0]], |a, b| a.min(b));
    let step = clock.ladder_step();

    let mut assignment = Vec::with_capacity(levels.len());
    let mut worst: Option<(usize, T, T, T)> = None;
    for &l in levels {
        let target = e[l] - e_ref + s_offset;
        let centered = (target / step).round();
        let deviation = (centered * step - target).abs();
        let centered_i = to_f64(centered) as i64;
        let slot = clock.index_of_centered(centered_i);
        let allowed = tolerance * T::one().max(target.abs());
        let deviation = if slot.is_none() { T::max_value().unwrap_or(deviation) } else { deviation };
        if deviation > allowed && worst.is_none_or(|w| deviation > w.3) {
            worst = Some((l, e[l], target, deviation));
        }
        assignment.push(slot.unwrap_or(0));
    }
    if let Some((level, energy, target, deviation)) = worst {
        return Err(Error::Commensuration {
            level,
            energy: to_f64(energy),
            target: to_f64(target),
            deviation: to_f64(deviation),
        });
    }
    Ok(assignment)
}

fn check_coeffs<T: Real>(coeffs: &DMatrix<Complex<T>>, n: usize) -> Result<()> {
    if coeffs.nrows() != n || coeffs.ncols() != n {
        return Err(Error::Dimension(format!(
            "coefficient matrix is {}x{}, expected {n}x{n}",
            coeffs.nrows(),
            coeffs.ncols()
        )));
    }
    let c = ComplexOperator::hermitian(coeffs.clone())
        .map_err(|_| Error::Validation("coefficients must be Hermitian".into()))?;
    validate_psd(&c, "coefficients")
}

fn validate_psd<T: Real>(op: &ComplexOperator<T>, what: &str) -> Result<()> {
    let e = hermitian_eigen(op)
        .map_err(|_| Error::Validation(format!("{what} must be Hermitian")))?;
    let scale = T::one().max(op.max_abs());
    let floor = -tol::<T>(1e-10) * scale;
    if e.values()[0] < floor {
        return Err(Error::Validation(format!(
            "{what} must be positive semidefinite, lowest eigenvalue {}",
            e.values()[0]
        )));
    }
    if !(op.trace().re > T::zero()) {
        return Err(Error::Validation(format!("{what} must have positive trace")));
    }
    Ok(())
}

/// Composite vector `|E_i⟩ ⊗ |s_k⟩`.
fn dyad_vector<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    level: usize,
    k: usize,
) -> Result<StateVector<T>> {
    space.level(level)?.tensor(&clock.s_ket(k)?)
}

/// `Σ c_ij |E_i⟩⟨E_j| ⊗ |s_k(i)⟩⟨s_k(j)|` for an explicit assignment, with no
/// commensuration check.
pub fn dyad_sum<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    coeffs: &DMatrix<Complex<T>>,
    levels: &[usize],
    level_to_s: &[usize],
) -> Result<ComplexOperator<T>> {
    check_levels(space, levels)?;
    if level_to_s.len() != levels.len() {
        return Err(Error::Dimension("assignment length differs from levels".into()));
    }
    check_coeffs(coeffs, levels.len())?;
    let dim = composite_dim(space, clock);
    let mut w = DMatrix::zeros(dim, levels.len());
    for (col, (&l, &k)) in levels.iter().zip(level_to_s).enumerate() {
        let v = dyad_vector(space, clock, l, k)?;
        w.set_column(col, v.amplitudes());
    }
    let rho = &w * coeffs * w.adjoint();
    let rho = (&rho + rho.adjoint()) * re(lit::<T>(0.5));
    ComplexOperator::hermitian(rho)
}

/// Stationary solution of `[ŝ, ρ̂] = [H, ρ̂]` built from the given
/// coefficients over the given energy levels.
pub fn solve_stationary<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    coeffs: &DMatrix<Complex<T>>,
    levels: &[usize],
    s_offset: T,
) -> Result<(SpectralSolution<T>, ComplexOperator<T>)> {
    solve_stationary_with_tol(
        space,
        clock,
        coeffs,
        levels,
        s_offset,
        lit::<T>(COMMENSURATION_TOL),
    )
}

pub fn solve_stationary_with_tol<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    coeffs: &DMatrix<Complex<T>>,
    levels: &[usize],
    s_offset: T,
    tolerance: T,
) -> Result<(SpectralSolution<T>, ComplexOperator<T>)> {
    let level_to_s = assign_levels(space, clock, levels, s_offset, tolerance)?;
    let rho = dyad_sum(space, clock, coeffs, levels, &level_to_s)?;
    Ok((
        SpectralSolution {
            levels: levels.to_vec(),
            coeffs: coeffs.clone(),
            level_to_s,
            s_offset,
        },
        rho,
    ))
}

/// `|ψ⟩ = Σ_i c_i |E_i⟩ ⊗ |s_k(i)⟩` with `s_offset = 0`.
pub fn pure_state<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    amps: &[Complex<T>],
    levels: &[usize],
) -> Result<StateVector<T>> {
    pure_state_with_offset(space, clock, amps, levels, T::zero())
}

pub fn pure_state_with_offset<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    amps: &[Complex<T>],
    levels: &[usize],
    s_offset: T,
) -> Result<StateVector<T>> {
    if amps.len() != levels.len() {
        return Err(Error::Dimension(format!(
            "{} amplitudes for {} levels",
            amps.len(),
            levels.len()
        )));
    }
    let norm2 = amps.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr());
    if (norm2 - T::one()).abs() > tol::<T>(1e-10) {
        return Err(Error::Validation(format!(
            "amplitudes must satisfy sum |c_i|^2 = 1, got {norm2}"
        )));
    }
    let assignment = assign_levels(space, clock, levels, s_offset, lit::<T>(COMMENSURATION_TOL))?;
    let mut psi = StateVector::zeros(composite_dim(space, clock));
    for ((&c, &l), &k) in amps.iter().zip(levels).zip(&assignment) {
        psi = psi.try_add(&dyad_vector(space, clock, l, k)?.scale(c))?;
    }
    Ok(psi)
}

/// Time derivative used by [`schrodinger_residual_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeDerivative {
    /// `iħ ∂/∂t` realized by the clock's `ŝ`.
    Spectral,
    /// Periodic second-order central differences.
    CentralDifference,
}

/// Residual of `iħ ∂ψ/∂t = H ψ` on the time grid with the spectral derivative.
pub fn schrodinger_residual<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    psi: &StateVector<T>,
) -> Result<T> {
    schrodinger_residual_with(space, clock, psi, TimeDerivative::Spectral)
}

/// Slices `psi` into `ψ(·, t_a)`, compares `iħ ∂ψ/∂t` with `H ψ` and returns
/// the max-norm of the difference.
///
/// Grid amplitudes are converted to wavefunction samples with `1/√Δt`
/// (δ-normalized time kets), so the value is comparable across clocks with
/// different `Δt`.
pub fn schrodinger_residual_with<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    psi: &StateVector<T>,
    derivative: TimeDerivative,
) -> Result<T> {
    check_composite(psi.dim(), space, clock)?;
    let n = clock.n_points();
    let ds = space.dim();
    let hbar = clock.hbar().get();
    let amps = psi.amplitudes();

    // rows: space index, columns: time index
    let grid = DMatrix::from_fn(ds, n, |i, a| amps[i * n + a]);
    let lhs = match derivative {
        TimeDerivative::Spectral => {
            let s = clock.s_operator().matrix();
            // (ŝ ψ_i)^T = ψ_i^T ŝ^T
            &grid * s.transpose()
        }
        TimeDerivative::CentralDifference => {
            let factor = Complex::new(T::zero(), hbar / (lit::<T>(2.0) * clock.dt()));
            DMatrix::from_fn(ds, n, |i, a| {
                let next = grid[(i, (a + 1) % n)];
                let prev = grid[(i, (a + n - 1) % n)];
                (next - prev) * factor
            })
        }
    };
    let rhs = space.hamiltonian().matrix() * &grid;
    let worst = (lhs - rhs)
        .iter()
        .fold(T::zero(), |acc, z| acc.max(modulus(*z)));
    Ok(worst / clock.dt().sqrt())
}

fn validate_density<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<()> {
    check_composite(rho.dim(), space, clock)?;
    validate_psd(rho, "density operator")
}

/// `P(t_a) = ⟨t_a| Tr_space ρ̂ |t_a⟩ / Tr ρ̂`.
pub fn time_distribution<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<Vec<T>> {
    validate_density(rho, space, clock)?;
    let reduced = partial_trace(rho, Factor::Time, (space.dim(), clock.n_points()))?;
    let total = rho.trace().re;
    Ok((0..clock.n_points())
        .map(|a| reduced.get(a, a).re / total)
        .collect())
}

/// Time distribution conditioned on the space factor being found in
/// `detector`: `P(t_a) ∝ (⟨φ| ⊗ ⟨t_a|) ρ̂ (|φ⟩ ⊗ |t_a⟩)`.
pub fn conditioned_time_distribution<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    detector: &StateVector<T>,
) -> Result<Vec<T>> {
    validate_density(rho, space, clock)?;
    if detector.dim() != space.dim() {
        return Err(Error::Dimension(format!(
            "detector state has dim {}, space has {}",
            detector.dim(),
            space.dim()
        )));
    }
    let phi = detector.normalized()?;
    let n = clock.n_points();
    let m = rho.matrix();
    let ds = space.dim();
    let mut weights = Vec::with_capacity(n);
    for a in 0..n {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..ds {
            let ci = phi.get(i).conj();
            if ci == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            for j in 0..ds {
                acc += ci * m[(i * n + a, j * n + a)] * phi.get(j);
            }
        }
        weights.push(acc.re);
    }
    let total = weights.iter().fold(T::zero(), |acc, &w| acc + w);
    if !(total > T::zero()) {
        return Err(Error::Degenerate(
            "state has no weight on the detector state".into(),
        ));
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// `Tr((H ⊗ I) ρ̂) / Tr ρ̂`.
pub fn energy_mean<T: Real>(
    rho: &ComplexOperator<T>,
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
) -> Result<T> {
    check_composite(rho.dim(), space, clock)?;
    let total = rho.trace();
    if modulus(total) <= T::zero() {
        return Err(Error::Degenerate("density operator has zero trace".into()));
    }
    let h_big = space_part(space, clock)?;
    Ok(((&h_big * rho).trace() / total).re)
}

/// `|E_i⟩⟨E_i| ⊗ |t_a⟩⟨t_a|`, a state with sharp energy and sharp time.
pub fn sharp_time_state<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    level: usize,
    t_index: usize,
) -> Result<ComplexOperator<T>> {
    let e = ComplexOperator::projector(&space.level(level)?);
    let t = ComplexOperator::projector(&clock.time_ket(t_index)?);
    tensor(&e, &t)
}

/// [`vn_residual`] of the sharp energy/time state.
pub fn sharp_time_residual<T: Real>(
    space: &SpaceSystem<T>,
    clock: &ClockSpace<T>,
    level: usize,
    t_index: usize,
) -> Result<T> {
    let rho = sharp_time_state(space, clock, level, t_index)?;
    vn_residual(&rho, space, clock)
}

/// Smallest nonzero `|s_k − s_l|` times the largest off-diagonal entry of
/// `|t_a⟩⟨t_a|` in the s-basis: a floor for [`sharp_time_residual`].
pub fn sharp_time_lower_bound<T: Real>(clock: &ClockSpace<T>, t_index: usize) -> Result<T> {
    let s = clock.s_values();
    let min_gap = s
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .filter(|g| *g > T::zero())
        .fold(T::max_value().unwrap_or(T::one()), |a, b| a.min(b));
    Ok(min_gap * clock.sharp_time_overlap(t_index)?)
}

/// Stationary coefficients `c_ij = c_i c_j*` of a pure superposition.
pub fn rank_one_coeffs<T: Real>(amps: &[Complex<T>]) -> DMatrix<Complex<T>> {
    let v = DVector::from_column_slice(amps);
    &v * v.adjoint()
}
