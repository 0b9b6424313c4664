//! Registered scenarios. Each one reproduces one group of checks and returns
//! a JSON payload plus a CSV table.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use timeop_core::classical::{
    analytic_solution, bracket_qp, bracket_ts, bracket_w, build_solution, liouville_residual,
    mean_value, space_hamiltonian_field, total_hamiltonian_field, Axis, AxisId,
    DerivativeBackend, Grid, PhaseField, SpaceHamiltonian,
};
use timeop_core::clock::ClockSpace;
use timeop_core::dynamics::{
    clock_part, conditioned_time_distribution, dyad_sum, energy_mean, heisenberg_check,
    default_probe_width, pure_state_with_offset, rank_one_coeffs, schrodinger_residual,
    schrodinger_residual_with, sharp_time_lower_bound, sharp_time_residual, solve_stationary,
    space_part, time_distribution, vn_residual, vn_residual_eigenbasis, SpaceSystem,
    TimeDerivative,
};
use timeop_core::hilbert::{
    commutator, hermitian_eigen, partial_trace, ComplexOperator, Factor, StateVector,
};
use timeop_core::weylprod::{ordering_check, PolyOp};
use timeop_core::Hbar;

use crate::config::{CoeffSpec, Resolver};
use crate::CliError;

pub struct Outcome {
    pub payload: Value,
    pub csv: String,
}

type Runner = fn(&mut Resolver) -> Result<Outcome, CliError>;

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub run: Runner,
}

pub const SCENARIOS: [Scenario; 8] = [
    Scenario {
        name: "vn-exact",
        description: "two-level commensurate stationary solution and a one-step perturbed assignment",
        run: vn_exact,
    },
    Scenario {
        name: "sharp-time",
        description: "residuals of sharp energy/time product states against the s-ladder bound",
        run: sharp_time,
    },
    Scenario {
        name: "schrodinger-recovery",
        description: "three-level pure state: spectral residual and central-difference refinement",
        run: schrodinger_recovery,
    },
    Scenario {
        name: "weyl-clock",
        description: "Weyl pair phases, commutator trace and the Heisenberg check on a Gaussian probe",
        run: weyl_clock,
    },
    Scenario {
        name: "ordering-audit",
        description: "symmetrized-product identity for monomial pairs up to degree 2, degree 3 reported",
        run: ordering_audit,
    },
    Scenario {
        name: "classical-convergence",
        description: "Liouville residual refinement study and random bracket property scan",
        run: classical_convergence,
    },
    Scenario {
        name: "mean-values",
        description: "classical means under a shifted s0 and quantum energy mean vs reduced density",
        run: mean_values,
    },
    Scenario {
        name: "time-dispersion",
        description: "time distributions of a single level and of an equal two-level superposition",
        run: time_dispersion,
    },
];

pub fn find(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

fn hbar_of(r: &mut Resolver) -> Result<Hbar<f64>, CliError> {
    Ok(Hbar::new(r.hbar())?)
}

fn complex_matrix(rows: &[Vec<f64>]) -> DMatrix<Complex64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))
}

fn max_abs_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn ladder_energies(dim: usize, spacing: f64) -> Vec<f64> {
    (0..dim).map(|k| k as f64 * spacing).collect()
}

/// Spectral norm of `[I⊗ŝ, ρ̂] − [H⊗I, ρ̂]`.
fn vn_operator_norm(
    rho: &ComplexOperator<f64>,
    space: &SpaceSystem<f64>,
    clock: &ClockSpace<f64>,
) -> Result<f64, CliError> {
    let s_big = clock_part(space, clock)?;
    let h_big = space_part(space, clock)?;
    let diff = &commutator(&s_big, rho)? - &commutator(&h_big, rho)?;
    // i·(anti-Hermitian) is Hermitian
    let herm = ComplexOperator::hermitian(diff.scale(Complex64::new(0.0, 1.0)).into_matrix())?;
    let e = hermitian_eigen(&herm)?;
    Ok(e.values().iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
}

fn vn_exact(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let dim = r.space_dim(2);
    let n = r.clock_points(32);
    let de = r.delta_e(1.0);
    let dt = r.clock_dt_with(|| TAU * hbar.get() / (n as f64 * de));
    let levels = r.levels((0..dim).collect());
    let coeffs = r.coeffs(CoeffSpec::Equal);

    let energies = ladder_energies(dim, de);
    let space = SpaceSystem::from_energies(&energies, hbar)?;
    let clock = ClockSpace::build(n, dt, hbar)?;
    let c = complex_matrix(&coeffs.matrix(levels.len())?);
    let (sol, rho) = solve_stationary(&space, &clock, &c, &levels, 0.0)?;
    let residual = vn_residual(&rho, &space, &clock)?;
    let residual_eig = vn_residual_eigenbasis(&rho, &space, &clock)?;
    let rho_norm = rho.frobenius();

    // Move the last level one ladder step (down if it already sits at the top).
    let mut shifted = sol.level_to_s().to_vec();
    let last = shifted.len() - 1;
    shifted[last] = if shifted[last] + 1 < n {
        shifted[last] + 1
    } else {
        shifted[last] - 1
    };
    let rho_p = dyad_sum(&space, &clock, &c, &levels, &shifted)?;
    let perturbed = vn_residual(&rho_p, &space, &clock)?;
    let perturbed_eig = vn_residual_eigenbasis(&rho_p, &space, &clock)?;
    let perturbed_op = vn_operator_norm(&rho_p, &space, &clock)?;
    let max_c = max_abs_entry(&c);
    let threshold = de / 2.0 * max_c;

    let s = clock.s_values();
    let mut csv = String::from("assignment,level,s_index,s_value\n");
    for (tag, map) in [("solution", sol.level_to_s()), ("perturbed", &shifted[..])] {
        for (&l, &k) in levels.iter().zip(map) {
            writeln!(csv, "{tag},{l},{k},{}", s[k]).unwrap();
        }
    }
    Ok(Outcome {
        payload: json!({
            "energies": energies,
            "ladder_step": clock.ladder_step(),
            "level_to_s": sol.level_to_s(),
            "assigned_s": sol.level_to_s().iter().map(|&k| s[k]).collect::<Vec<_>>(),
            "vn_residual": residual,
            "vn_residual_eigenbasis": residual_eig,
            "rho_frobenius": rho_norm,
            "perturbation": {
                "level_to_s": shifted,
                "vn_residual": perturbed,
                "vn_residual_eigenbasis": perturbed_eig,
                "vn_residual_operator_norm": perturbed_op,
                "max_abs_coeff": max_c,
                "threshold": threshold,
            },
        }),
        csv,
    })
}

fn sharp_time(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let dim = r.space_dim(2);
    let n = r.clock_points(16);
    let de = r.delta_e(1.0);
    let dt = r.clock_dt_with(|| TAU * hbar.get() / (n as f64 * de));
    let space = SpaceSystem::from_energies(&ladder_energies(dim, de), hbar)?;
    let clock = ClockSpace::build(n, dt, hbar)?;

    let mut rows = Vec::new();
    let mut csv = String::from("level,t_index,residual,lower_bound\n");
    let (mut min_res, mut min_margin) = (f64::INFINITY, f64::INFINITY);
    for level in 0..dim {
        for a in 0..n {
            let res = sharp_time_residual(&space, &clock, level, a)?;
            let bound = sharp_time_lower_bound(&clock, a)?;
            min_res = min_res.min(res);
            min_margin = min_margin.min(res - bound);
            writeln!(csv, "{level},{a},{res},{bound}").unwrap();
            rows.push(json!({"level": level, "t_index": a, "residual": res, "lower_bound": bound}));
        }
    }
    Ok(Outcome {
        payload: json!({
            "cases": rows,
            "min_residual": min_res,
            "min_margin_over_bound": min_margin,
        }),
        csv,
    })
}

fn schrodinger_recovery(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let dim = r.space_dim(10);
    let de = r.delta_e(1.0);
    let n0 = r.clock_points(64);
    let levels = r.levels(vec![0, 1, 2]);
    let omega = de / hbar.get();
    // Half-quantum ladder step puts every (n + 1/2)ħω on the ladder.
    let dt0 = r.clock_dt_with(|| 2.0 * TAU * hbar.get() / (n0 as f64 * de));

    let space = SpaceSystem::oscillator(dim, omega, hbar)?;
    let e = space.energies();
    let e_ref = levels.iter().map(|&l| e[l]).fold(f64::INFINITY, f64::min);
    let amp = Complex64::new(1.0 / (levels.len() as f64).sqrt(), 0.0);
    let amps = vec![amp; levels.len()];
    let h_norm = space.norm();

    let clock = ClockSpace::build(n0, dt0, hbar)?;
    let psi = pure_state_with_offset(&space, &clock, &amps, &levels, e_ref)?;
    let spectral = schrodinger_residual(&space, &clock, &psi)?;

    let mut points = Vec::new();
    let mut dts = Vec::new();
    let mut residuals = Vec::new();
    let mut csv = String::from("clock_points,dt,central_difference_residual\n");
    for k in 0..3 {
        let n = n0 << k;
        let dt = dt0 / (1 << k) as f64;
        let clock = ClockSpace::build(n, dt, hbar)?;
        let psi = pure_state_with_offset(&space, &clock, &amps, &levels, e_ref)?;
        let res = schrodinger_residual_with(&space, &clock, &psi, TimeDerivative::CentralDifference)?;
        writeln!(csv, "{n},{dt},{res}").unwrap();
        points.push(n);
        dts.push(dt);
        residuals.push(res);
    }
    let orders: Vec<f64> = residuals
        .windows(2)
        .zip(dts.windows(2))
        .map(|(r, d)| (r[0] / r[1]).ln() / (d[0] / d[1]).ln())
        .collect();
    Ok(Outcome {
        payload: json!({
            "energies": levels.iter().map(|&l| e[l]).collect::<Vec<_>>(),
            "h_norm": h_norm,
            "spectral": {
                "clock_points": n0,
                "residual": spectral,
                "relative": spectral / h_norm,
            },
            "central_difference": {
                "clock_points": points,
                "dt": dts,
                "residuals": residuals,
                "orders": orders,
            },
        }),
        csv,
    })
}

fn weyl_clock(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let dt = r.clock_dt(0.25);
    let n_probe = r.clock_points(64);
    let dim = r.space_dim(4);

    let mut rows = Vec::new();
    let mut csv = String::from("n,residual,phase_re,phase_im,omega_pow_n_defect,bracket_trace\n");
    for n in [2usize, 4, 8, 16, 64] {
        let clock = ClockSpace::build(n, dt, hbar)?;
        let w = clock.weyl_pair_check();
        let defect = (w.phase.powu(n as u32) - Complex64::new(1.0, 0.0)).norm();
        let expected = Complex64::from_polar(1.0, TAU / n as f64);
        let trace = clock.canonical_bracket().trace();
        writeln!(csv, "{n},{},{},{},{defect},{}", w.residual, w.phase.re, w.phase.im, trace.norm()).unwrap();
        rows.push(json!({
            "n": n,
            "residual": w.residual,
            "phase": [w.phase.re, w.phase.im],
            "expected_phase": [expected.re, expected.im],
            "omega_pow_n_defect": defect,
            "bracket_trace": [trace.re, trace.im],
        }));
    }

    let clock = ClockSpace::build(n_probe, dt, hbar)?;
    let space = SpaceSystem::oscillator(dim, 1.0, hbar)?;
    let h = heisenberg_check(&space, &clock)?;
    Ok(Outcome {
        payload: json!({
            "weyl": rows,
            "heisenberg": {
                "clock_points": n_probe,
                "probe_width": default_probe_width(&clock),
                "exact_part": h.exact_part,
                "clock_part": [h.clock_part.re, h.clock_part.im],
                "ideal": 1.0,
                "relative_error": (h.clock_part - Complex64::new(1.0, 0.0)).norm(),
                "identity_defect": h.identity_defect,
            },
        }),
        csv,
    })
}

fn monomial_name(m: u32, n: u32) -> String {
    format!("q^{m} p^{n}")
}

fn ordering_audit(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let max_dim = r.space_dim(48);
    if max_dim < 16 {
        return Err(CliError::Config("ordering-audit needs space_dim >= 16".into()));
    }
    let dims: Vec<usize> = (16..=max_dim).step_by(8).collect();
    let low: Vec<(u32, u32)> = (0..=2u32).flat_map(|m| (0..=2 - m).map(move |n| (m, n))).collect();

    let mut sector = Vec::new();
    let mut worst = 0.0f64;
    let mut csv = String::from("h,rho,degree,dim,residual,scale,relative\n");
    for &(hm, hn) in &low {
        for &(rm, rn) in &low {
            let h = PolyOp::monomial(hm, hn, 1.0, hbar);
            let rho = PolyOp::monomial(rm, rn, 1.0, hbar);
            let mut pair_worst = 0.0f64;
            for &d in &dims {
                let c = ordering_check(&h, &rho, d)?;
                pair_worst = pair_worst.max(c.relative());
                writeln!(csv, "{},{},2,{d},{},{},{}", monomial_name(hm, hn), monomial_name(rm, rn), c.residual, c.scale, c.relative()).unwrap();
            }
            worst = worst.max(pair_worst);
            sector.push(json!({
                "h": monomial_name(hm, hn),
                "rho": monomial_name(rm, rn),
                "max_relative": pair_worst,
            }));
        }
    }

    let audit_dim = *dims.last().unwrap_or(&16);
    let mut degree3 = Vec::new();
    for &(hm, hn) in &[(3u32, 0u32), (2, 1), (1, 2), (0, 3)] {
        for &(rm, rn) in low.iter().filter(|&&(m, n)| m + n > 0) {
            let h = PolyOp::monomial(hm, hn, 1.0, hbar);
            let rho = PolyOp::monomial(rm, rn, 1.0, hbar);
            let c = ordering_check(&h, &rho, audit_dim)?;
            writeln!(csv, "{},{},3,{audit_dim},{},{},{}", monomial_name(hm, hn), monomial_name(rm, rn), c.residual, c.scale, c.relative()).unwrap();
            degree3.push(json!({
                "h": monomial_name(hm, hn),
                "rho": monomial_name(rm, rn),
                "dim": audit_dim,
                "residual": c.residual,
                "relative": c.relative(),
            }));
        }
    }
    Ok(Outcome {
        payload: json!({
            "dims": dims,
            "sector": sector,
            "sector_max_relative": worst,
            "degree3": degree3,
        }),
        csv,
    })
}

fn gauss(x: f64, w: f64) -> f64 {
    (-0.5 * x * x / (w * w)).exp() / (w * TAU.sqrt())
}

fn convergence_grid(n: usize) -> Result<Grid<f64>, CliError> {
    Ok(Grid::new(
        Axis::closed(-6.0, 6.0, n)?,
        Axis::closed(-6.0, 6.0, n)?,
        Axis::closed(0.0, 1.0, n)?,
        Axis::closed(-2.0, 2.0, 9)?,
    ))
}

fn random_field(g: Grid<f64>, rng: &mut ChaCha8Rng) -> PhaseField<f64> {
    let c: Vec<f64> = (0..8).map(|_| rng.random_range(-2.0..2.0)).collect();
    PhaseField::from_fn(g, DerivativeBackend::CentralDifference, move |q, p, t, s| {
        c[0] + c[1] * q * p
            + c[2] * (q + c[3] * t).sin()
            + c[4] * (p * s).cos()
            + c[5] * s * t
            + c[6] * (-(q * q + p * p)).exp()
            + c[7] * q * s * s
    })
}

type FieldBracket =
    fn(&PhaseField<f64>, &PhaseField<f64>) -> timeop_core::Result<PhaseField<f64>>;

fn classical_convergence(r: &mut Resolver) -> Result<Outcome, CliError> {
    let sizes = r.grid(vec![16, 32, 64]);
    let seed = r.seed();
    if sizes.len() < 2 || sizes.iter().any(|&n| n < 3) {
        return Err(CliError::Config("grid needs at least two sizes, each >= 3".into()));
    }
    let backend = DerivativeBackend::CentralDifference;
    let rho0 = |q: f64, p: f64| gauss(q - 1.0, 1.0) * gauss(p - 0.5, 1.0);

    let mut studies = serde_json::Map::new();
    let mut csv = String::from("hamiltonian,n,step,residual\n");
    for (name, h) in [
        ("free_particle", SpaceHamiltonian::FreeParticle),
        ("oscillator", SpaceHamiltonian::Oscillator { omega: 1.0 }),
    ] {
        let mut steps = Vec::new();
        let mut residuals = Vec::new();
        for &n in &sizes {
            let g = convergence_grid(n)?;
            let rho = analytic_solution(&h, rho0, 0.0, 1.0, g, backend)?;
            let hf = total_hamiltonian_field(&h, g, backend);
            let res = liouville_residual(&hf, &rho)?;
            let step = g.axis(AxisId::Q).step();
            writeln!(csv, "{name},{n},{step},{res}").unwrap();
            steps.push(step);
            residuals.push(res);
        }
        let orders: Vec<f64> = residuals
            .windows(2)
            .zip(steps.windows(2))
            .map(|(r, h)| (r[0] / r[1]).ln() / (h[0] / h[1]).ln())
            .collect();
        studies.insert(
            name.to_string(),
            json!({"grid": sizes, "steps": steps, "residuals": residuals, "orders": orders}),
        );
    }

    // leapfrog-built density on the finest grid, for comparison with the
    // closed-form transport
    let finest = convergence_grid(*sizes.last().unwrap())?;
    let osc = SpaceHamiltonian::Oscillator { omega: 1.0 };
    let built = build_solution(&osc, rho0, 0.0, 1.0, finest, backend)?;
    let built_res = liouville_residual(&total_hamiltonian_field(&osc, finest, backend), &built)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Grid::new(
        Axis::closed(-1.0, 1.0, 7)?,
        Axis::closed(-1.0, 1.0, 7)?,
        Axis::closed(0.0, 1.0, 7)?,
        Axis::closed(-1.0, 1.0, 7)?,
    );
    let samples = 8;
    let brackets: [(&str, FieldBracket); 3] =
        [("qp", bracket_qp), ("ts", bracket_ts), ("w", bracket_w)];
    let mut scan = serde_json::Map::new();
    let mut anti = [0.0f64; 3];
    let mut bilin = [0.0f64; 3];
    for _ in 0..samples {
        let a = random_field(g, &mut rng);
        let b = random_field(g, &mut rng);
        let c = random_field(g, &mut rng);
        let x: f64 = rng.random_range(-3.0..3.0);
        let combo = a.scale(x).try_add(&b)?;
        for (k, (_, br)) in brackets.iter().enumerate() {
            let ab = br(&a, &b)?;
            let scale = ab.interior_max_abs().max(1.0);
            anti[k] = anti[k].max(ab.try_add(&br(&b, &a)?)?.interior_max_abs() / scale);
            let lhs = br(&combo, &c)?;
            let rhs = br(&a, &c)?.scale(x).try_add(&br(&b, &c)?)?;
            let scale = lhs.interior_max_abs().max(1.0);
            bilin[k] = bilin[k].max(lhs.try_sub(&rhs)?.interior_max_abs() / scale);
        }
    }
    for (k, (name, _)) in brackets.iter().enumerate() {
        scan.insert(
            name.to_string(),
            json!({"antisymmetry": anti[k], "bilinearity": bilin[k]}),
        );
    }

    Ok(Outcome {
        payload: json!({
            "studies": studies,
            "leapfrog_oscillator_residual": built_res,
            "bracket_scan": {"samples": samples, "seed": seed, "relative_defects": scan},
        }),
        csv,
    })
}

fn mean_values(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let s0 = r.s0(0.75);
    let grid_sizes = r.grid(vec![32]);
    let n = *grid_sizes.last().unwrap();
    let dim = r.space_dim(8);
    let clock_n = r.clock_points(16);
    let levels = r.levels(vec![0, 1, 2]);
    let coeffs = r.coeffs(CoeffSpec::Mixed);
    let dt = r.clock_dt_with(|| TAU * hbar.get() / clock_n as f64);

    // classical part
    let g = Grid::new(
        Axis::closed(-7.0, 7.0, n)?,
        Axis::closed(-7.0, 7.0, n)?,
        Axis::closed(0.0, 1.0, 9)?,
        Axis::closed(-8.0, 8.0, 33)?,
    );
    let backend = DerivativeBackend::CentralDifference;
    let h = SpaceHamiltonian::Oscillator { omega: 1.0 };
    let rho0 = |q: f64, p: f64| gauss(q - 1.0, 1.0) * gauss(p, 1.0);
    let base = build_solution(&h, rho0, 0.0, 1.0, g, backend)?;
    let moved = build_solution(&h, rho0, s0, 1.0, g, backend)?;
    let h_space = space_hamiltonian_field(&h, g, backend);
    let h_total = total_hamiltonian_field(&h, g, backend);
    let mut csv = String::from("t,mean_h_s0_zero,mean_h_s0,mean_total_s0\n");
    let (mut invariance, mut shift_err) = (0.0f64, 0.0f64);
    let mut means = Vec::new();
    for it in 0..g.axis(AxisId::T).len() {
        let a = mean_value(&h_space, &base, it)?;
        let b = mean_value(&h_space, &moved, it)?;
        let tot = mean_value(&h_total, &moved, it)?;
        invariance = invariance.max((a - b).abs());
        shift_err = shift_err.max((tot - b - s0).abs());
        let t = g.axis(AxisId::T).value(it);
        writeln!(csv, "{t},{a},{b},{tot}").unwrap();
        means.push(json!({"t": t, "h_s0_zero": a, "h_s0": b, "total_s0": tot}));
    }

    // quantum part
    let space = SpaceSystem::oscillator(dim, 1.0, hbar)?;
    let clock = ClockSpace::build(clock_n, dt, hbar)?;
    let c = complex_matrix(&coeffs.matrix(levels.len())?);
    let (_, rho) = solve_stationary(&space, &clock, &c, &levels, 0.0)?;
    let trace_mean = energy_mean(&rho, &space, &clock)?;
    let reduced = partial_trace(&rho, Factor::Space, (space.dim(), clock.n_points()))?;
    let reduced_mean = (space.hamiltonian() * &reduced).trace().re / reduced.trace().re;

    Ok(Outcome {
        payload: json!({
            "classical": {
                "s0": s0,
                "means": means,
                "max_s0_invariance_defect": invariance,
                "max_total_shift_defect": shift_err,
            },
            "quantum": {
                "energy_mean": trace_mean,
                "reduced_density_mean": reduced_mean,
                "difference": (trace_mean - reduced_mean).abs(),
            },
        }),
        csv,
    })
}

fn time_dispersion(r: &mut Resolver) -> Result<Outcome, CliError> {
    let hbar = hbar_of(r)?;
    let n = r.clock_points(32);
    let de = r.delta_e(1.0);
    let dt = r.clock_dt_with(|| TAU * hbar.get() / (n as f64 * de));
    let phase = r.phase(0.3);

    let space = SpaceSystem::from_energies(&[0.0, de], hbar)?;
    let clock = ClockSpace::build(n, dt, hbar)?;
    let uniform = 1.0 / n as f64;

    let one = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    let (_, single) = solve_stationary(&space, &clock, &one, &[0], 0.0)?;
    let p_single = time_distribution(&single, &space, &clock)?;
    let single_dev = p_single.iter().fold(0.0f64, |a, p| a.max((p - uniform).abs()));

    let amps = [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -phase),
    ];
    let (_, sup) = solve_stationary(&space, &clock, &rank_one_coeffs(&amps), &[0, 1], 0.0)?;
    let marginal = time_distribution(&sup, &space, &clock)?;
    let marginal_dev = marginal.iter().fold(0.0f64, |a, p| a.max((p - uniform).abs()));
    let detector = StateVector::from_slice(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)])?
        .normalized()?;
    let p_sup = conditioned_time_distribution(&sup, &space, &clock, &detector)?;

    let raw: Vec<f64> = clock
        .t_values()
        .iter()
        .map(|t| 1.0 + (de * t / hbar.get() + phase).cos())
        .collect();
    let total: f64 = raw.iter().sum();
    let model: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let sup_dev = p_sup
        .iter()
        .zip(&model)
        .fold(0.0f64, |a, (p, m)| a.max((p - m).abs()));

    let mut csv = String::from("t,single_level,superposition_marginal,superposition_conditioned,model\n");
    for (a, t) in clock.t_values().iter().enumerate() {
        writeln!(csv, "{t},{},{},{},{}", p_single[a], marginal[a], p_sup[a], model[a]).unwrap();
    }
    Ok(Outcome {
        payload: json!({
            "t": clock.t_values(),
            "single_level": {
                "distribution": p_single,
                "max_deviation_from_uniform": single_dev,
            },
            "superposition": {
                "phase": phase,
                "marginal": marginal,
                "marginal_max_deviation_from_uniform": marginal_dev,
                "detector": "(|E0> + |E1>)/sqrt(2)",
                "conditioned": p_sup,
                "model": model,
                "max_deviation_from_model": sup_dev,
            },
        }),
        csv,
    })
}
