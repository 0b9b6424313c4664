use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use timeop_core::clock::ClockSpace;
use timeop_core::dynamics::{
    energy_mean, solve_stationary, time_distribution, vn_residual, SpaceSystem,
};
use timeop_core::hilbert::{partial_trace, ComplexOperator, Factor};
use timeop_core::Hbar;

const N: usize = 16;

fn hbar() -> Hbar<f64> {
    Hbar::new(1.0).unwrap()
}

/// Δt = 2π/N gives a unit s-ladder step.
fn unit_clock(n: usize) -> ClockSpace<f64> {
    ClockSpace::build(n, std::f64::consts::TAU / n as f64, hbar()).unwrap()
}

/// Integer energies, all on the unit ladder.
fn integer_space() -> SpaceSystem<f64> {
    SpaceSystem::from_energies(&[0.0, 1.0, 3.0, 4.0, 6.0], hbar()).unwrap()
}

fn psd(k: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), k * k).prop_map(move |v| {
        let a = DMatrix::from_iterator(k, k, v.into_iter().map(|(x, y)| Complex64::new(x, y)));
        let m = &a * a.adjoint() + DMatrix::identity(k, k) * Complex64::new(1e-3, 0.0);
        let tr = m.trace();
        m / tr
    })
}

fn level_subset() -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..5).collect::<Vec<_>>(), 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constructed_solutions_are_exact(
        (levels, c) in level_subset().prop_flat_map(|l| { let k = l.len(); (Just(l), psd(k)) }),
        offset in -2i32..=1,
    ) {
        let space = integer_space();
        let clock = unit_clock(N);
        let (sol, rho) = solve_stationary(&space, &clock, &c, &levels, offset as f64).unwrap();
        prop_assert!(sol.assignment_defect(&space, &clock) < 1e-9);
        let r = vn_residual(&rho, &space, &clock).unwrap();
        prop_assert!(r <= 1e-10 * rho.max_abs().max(1.0), "{r}");
    }

    #[test]
    fn offset_is_irrelevant(
        (levels, c) in level_subset().prop_flat_map(|l| { let k = l.len(); (Just(l), psd(k)) }),
        offset in 1i32..4,
    ) {
        let space = integer_space();
        let clock = unit_clock(N);
        let (_, a) = solve_stationary(&space, &clock, &c, &levels, 0.0).unwrap();
        let (_, b) = solve_stationary(&space, &clock, &c, &levels, -(offset as f64)).unwrap();
        let ra = vn_residual(&a, &space, &clock).unwrap();
        let rb = vn_residual(&b, &space, &clock).unwrap();
        prop_assert!((ra - rb).abs() < 1e-12);
        let pa = time_distribution(&a, &space, &clock).unwrap();
        let pb = time_distribution(&b, &space, &clock).unwrap();
        for (x, y) in pa.iter().zip(&pb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let ea = energy_mean(&a, &space, &clock).unwrap();
        let eb = energy_mean(&b, &space, &clock).unwrap();
        prop_assert!((ea - eb).abs() < 1e-12);
    }

    #[test]
    fn energy_mean_survives_clock_refinement(
        (levels, c) in level_subset().prop_flat_map(|l| { let k = l.len(); (Just(l), psd(k)) }),
    ) {
        let space = integer_space();
        let coarse = unit_clock(N);
        // Same Δt, twice the points: the ladder step halves and stays compatible.
        let fine = ClockSpace::build(2 * N, coarse.dt(), hbar()).unwrap();
        let (_, a) = solve_stationary(&space, &coarse, &c, &levels, 0.0).unwrap();
        let (_, b) = solve_stationary(&space, &fine, &c, &levels, 0.0).unwrap();
        let ea = energy_mean(&a, &space, &coarse).unwrap();
        let eb = energy_mean(&b, &space, &fine).unwrap();
        prop_assert!((ea - eb).abs() < 1e-10);
        // and agrees with the space-only reduced density
        let red = partial_trace(&a, Factor::Space, (space.dim(), N)).unwrap();
        let direct = (space.hamiltonian() * &red).trace().re / red.trace().re;
        prop_assert!((ea - direct).abs() < 1e-12);
    }

    #[test]
    fn single_level_distribution_is_uniform(level in 0usize..5, offset in -2i32..2) {
        let space = integer_space();
        let clock = unit_clock(N);
        let c = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let (_, rho) = solve_stationary(&space, &clock, &c, &[level], offset as f64).unwrap();
        let p = time_distribution(&rho, &space, &clock).unwrap();
        let uniform = 1.0 / N as f64;
        prop_assert!(p.iter().all(|x| (x - uniform).abs() <= 1e-10));
        // variance of t under P equals the uniform-grid variance
        let t = clock.t_values();
        let mean: f64 = t.iter().zip(&p).map(|(t, p)| t * p).sum();
        let var: f64 = t.iter().zip(&p).map(|(t, p)| (t - mean).powi(2) * p).sum();
        let umean = t.iter().sum::<f64>() / N as f64;
        let uvar = t.iter().map(|t| (t - umean).powi(2)).sum::<f64>() / N as f64;
        prop_assert!((var - uvar).abs() < 1e-10);
    }
}

#[test]
fn s_kets_carry_energy_phases() {
    let space = integer_space();
    let clock = unit_clock(N);
    let levels = [0, 2, 4];
    let c = DMatrix::identity(3, 3) * Complex64::new(1.0 / 3.0, 0.0);
    let offset = 1.0;
    let (sol, _) = solve_stationary(&space, &clock, &c, &levels, offset).unwrap();
    let e = space.energies();
    let e_ref = levels.iter().map(|&l| e[l]).fold(f64::INFINITY, f64::min);
    let norm = 1.0 / (N as f64).sqrt();
    for (i, &l) in levels.iter().enumerate() {
        let k = sol.level_to_s()[i];
        let shifted = e[l] - e_ref + offset;
        assert!((clock.s_values()[k] - shifted).abs() < 1e-9);
        let ket = clock.s_ket(k).unwrap();
        for (a, &t) in clock.t_values().iter().enumerate() {
            let want = Complex64::from_polar(norm, -shifted * t);
            assert!((ket.get(a) - want).norm() < 1e-12, "level {l} node {a}");
        }
    }
}

#[test]
fn hermitian_solution_operator() {
    let space = integer_space();
    let clock = unit_clock(N);
    let c = DMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.5, 0.0),
        Complex64::new(0.2, 0.3),
        Complex64::new(0.2, -0.3),
        Complex64::new(0.5, 0.0),
    ]);
    let (_, rho) = solve_stationary(&space, &clock, &c, &[1, 3], 0.0).unwrap();
    let rho: &ComplexOperator<f64> = &rho;
    assert!(rho.hermiticity_defect() < 1e-14);
    assert!((rho.trace().re - 1.0).abs() < 1e-12);
}
