use super::flow::SpaceHamiltonian;
use super::grid::{AxisId, DerivativeBackend, Grid, PhaseField};
use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Sampled total Hamilton function `H(q,p) + s`.
pub fn total_hamiltonian_field<T: Real>(
    h: &SpaceHamiltonian<T>,
    grid: Grid<T>,
    backend: DerivativeBackend,
) -> PhaseField<T> {
    PhaseField::from_fn(grid, backend, |q, p, _, s| h.value(q, p) + s)
}

/// Sampled `H(q,p)` alone, constant along `t` and `s`.
pub fn space_hamiltonian_field<T: Real>(
    h: &SpaceHamiltonian<T>,
    grid: Grid<T>,
    backend: DerivativeBackend,
) -> PhaseField<T> {
    PhaseField::from_fn(grid, backend, |q, p, _, _| h.value(q, p))
}

/// Gaussian in `s` centred at `s0`, normalized so its grid sum times `Δs` is 1.
pub fn mollifier<T: Real>(grid: &Grid<T>, s0: T, sigma_s: T) -> Result<Vec<T>> {
    let axis = grid.axis(AxisId::S);
    let min_width = axis.step() + axis.step();
    if !(sigma_s >= min_width) || !sigma_s.is_finite() {
        return Err(Error::Validation(format!(
            "mollifier width {sigma_s} is below twice the s step {}",
            axis.step()
        )));
    }
    let half = lit::<T>(0.5);
    let raw: Vec<T> = (0..axis.len())
        .map(|i| {
            let x = (axis.value(i) - s0) / sigma_s;
            (-half * x * x).exp()
        })
        .collect();
    let mass = raw.iter().fold(T::zero(), |a, &v| a + v) * axis.step();
    if !(mass > T::zero()) {
        return Err(Error::Degenerate(format!("mollifier at s0 = {s0} has no mass on the grid")));
    }
    Ok(raw.into_iter().map(|v| v / mass).collect())
}

/// `ρ(q,p,t,s) = ρ₀(Φ₋ₜ(q,p)) δσ(s − s₀)`, with the flow taken by leapfrog
/// steps of size `Δt`.
pub fn build_solution<T: Real>(
    h: &SpaceHamiltonian<T>,
    rho0: impl Fn(T, T) -> T,
    s0: T,
    sigma_s: T,
    grid: Grid<T>,
    backend: DerivativeBackend,
) -> Result<PhaseField<T>> {
    h.validate()?;
    let t_axis = *grid.axis(AxisId::T);
    let dt = t_axis.step();
    // Bring t = 0 to the first t node before stepping along the axis.
    let t0 = t_axis.min();
    let lead = (t0.abs() / dt).ceil();
    let lead_steps = crate::scalar::to_f64(lead) as usize;
    let lead_dt = if lead_steps > 0 {
        t0 / lead
    } else {
        T::zero()
    };

    let [nq, np, nt, _] = grid.shape();
    let mut spatial = vec![T::zero(); nq * np * nt];
    for iq in 0..nq {
        for ip in 0..np {
            let (mut q, mut p) = (
                grid.axis(AxisId::Q).value(iq),
                grid.axis(AxisId::P).value(ip),
            );
            for _ in 0..lead_steps {
                (q, p) = h.leapfrog_step(q, p, -lead_dt);
            }
            let base = (iq * np + ip) * nt;
            for it in 0..nt {
                spatial[base + it] = rho0(q, p);
                (q, p) = h.leapfrog_step(q, p, -dt);
            }
        }
    }
    assemble(grid, backend, &spatial, s0, sigma_s)
}

/// Same as [`build_solution`] with the closed-form flow instead of leapfrog.
pub fn analytic_solution<T: Real>(
    h: &SpaceHamiltonian<T>,
    rho0: impl Fn(T, T) -> T,
    s0: T,
    sigma_s: T,
    grid: Grid<T>,
    backend: DerivativeBackend,
) -> Result<PhaseField<T>> {
    h.validate()?;
    let [nq, np, nt, _] = grid.shape();
    let mut spatial = vec![T::zero(); nq * np * nt];
    for iq in 0..nq {
        for ip in 0..np {
            let (q, p) = (
                grid.axis(AxisId::Q).value(iq),
                grid.axis(AxisId::P).value(ip),
            );
            for it in 0..nt {
                let t = grid.axis(AxisId::T).value(it);
                let (qb, pb) = h.exact_flow(q, p, -t);
                spatial[(iq * np + ip) * nt + it] = rho0(qb, pb);
            }
        }
    }
    assemble(grid, backend, &spatial, s0, sigma_s)
}

fn assemble<T: Real>(
    grid: Grid<T>,
    backend: DerivativeBackend,
    spatial: &[T],
    s0: T,
    sigma_s: T,
) -> Result<PhaseField<T>> {
    let delta = mollifier(&grid, s0, sigma_s)?;
    let ns = delta.len();
    let values = (0..grid.len())
        .map(|i| spatial[i / ns] * delta[i % ns])
        .collect();
    PhaseField::new(grid, values, backend)
}

/// `Σ_{q,p} ρ ΔqΔp` for each `s` node of one `t` slice.
pub fn s_marginal<T: Real>(rho: &PhaseField<T>, t_index: usize) -> Result<Vec<T>> {
    let grid = rho.grid();
    let [nq, np, nt, ns] = grid.shape();
    if t_index >= nt {
        return Err(Error::IndexOutOfRange {
            index: t_index,
            len: nt,
        });
    }
    let area = grid.axis(AxisId::Q).step() * grid.axis(AxisId::P).step();
    let mut out = vec![T::zero(); ns];
    for iq in 0..nq {
        for ip in 0..np {
            for (is, slot) in out.iter_mut().enumerate() {
                *slot += rho.get(iq, ip, t_index, is) * area;
            }
        }
    }
    Ok(out)
}

/// `∫∫∫ A ρ dq dp ds / ∫∫∫ ρ dq dp ds` on one `t` slice.
pub fn mean_value<T: Real>(
    observable: &PhaseField<T>,
    rho: &PhaseField<T>,
    t_index: usize,
) -> Result<T> {
    observable.same_grid(rho)?;
    let grid = rho.grid();
    let [nq, np, nt, ns] = grid.shape();
    if t_index >= nt {
        return Err(Error::IndexOutOfRange {
            index: t_index,
            len: nt,
        });
    }
    let vol = grid.slice_volume();
    let (mut num, mut mass) = (T::zero(), T::zero());
    for iq in 0..nq {
        for ip in 0..np {
            for is in 0..ns {
                let i = grid.index(iq, ip, t_index, is);
                let w = rho.values()[i] * vol;
                num += observable.values()[i] * w;
                mass += w;
            }
        }
    }
    if !(mass.abs() > T::zero()) || !mass.is_finite() {
        return Err(Error::Degenerate(format!(
            "density slice t_index = {t_index} has mass {mass}"
        )));
    }
    Ok(num / mass)
}

#[cfg(test)]
mod tests {
    use super::super::brackets::liouville_residual;
    use super::super::grid::Axis;
    use super::*;

    const CD: DerivativeBackend = DerivativeBackend::CentralDifference;

    fn grid(n: usize) -> Grid<f64> {
        Grid::new(
            Axis::closed(-6.0, 6.0, n).unwrap(),
            Axis::closed(-6.0, 6.0, n).unwrap(),
            Axis::closed(0.0, 1.0, n).unwrap(),
            Axis::closed(-6.0, 6.0, 25).unwrap(),
        )
    }

    fn gauss(x: f64, w: f64) -> f64 {
        (-0.5 * x * x / (w * w)).exp() / (w * (2.0 * std::f64::consts::PI).sqrt())
    }

    #[test]
    fn s_marginal_is_mollified_delta() {
        let g = grid(17);
        let rho = build_solution(
            &SpaceHamiltonian::FreeParticle,
            |q, p| gauss(q, 1.0) * gauss(p, 1.0),
            0.25,
            1.0,
            g,
            CD,
        )
        .unwrap();
        let delta = mollifier(&g, 0.25, 1.0).unwrap();
        let marginal = s_marginal(&rho, 3).unwrap();
        let ds = g.axis(AxisId::S).step();
        let mass: f64 = delta.iter().sum::<f64>() * ds;
        assert!((mass - 1.0).abs() < 1e-12);
        let qp_mass: f64 = marginal.iter().sum::<f64>() * ds;
        assert!((qp_mass - 1.0).abs() < 1e-6, "{qp_mass}");
    }

    #[test]
    fn unresolvable_width_rejected() {
        let g = grid(9);
        let step = g.axis(AxisId::S).step();
        let r = build_solution(&SpaceHamiltonian::FreeParticle, |_, _| 1.0, 0.0, 1.9 * step, g, CD);
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn leapfrog_matches_exact_for_free_particle() {
        let g = grid(13);
        let f = |q: f64, p: f64| gauss(q - 0.5, 0.8) * gauss(p, 1.0);
        let h = SpaceHamiltonian::FreeParticle;
        let a = build_solution(&h, f, 0.0, 1.0, g, CD).unwrap();
        let b = analytic_solution(&h, f, 0.0, 1.0, g, CD).unwrap();
        assert!(a.try_sub(&b).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn ridge_follows_free_trajectory() {
        let n = 41;
        let g = Grid::new(
            Axis::closed(-3.0, 3.0, n).unwrap(),
            Axis::closed(-3.0, 3.0, n).unwrap(),
            Axis::closed(0.0, 2.0, 11).unwrap(),
            Axis::closed(-1.0, 1.0, 9).unwrap(),
        );
        let (q0, p0) = (-1.2, 0.9);
        let w = 0.15;
        let rho = build_solution(
            &SpaceHamiltonian::FreeParticle,
            |q, p| gauss(q - q0, w) * gauss(p - p0, w),
            0.0,
            0.5,
            g,
            CD,
        )
        .unwrap();
        let dq = g.axis(AxisId::Q).step();
        for it in 0..11 {
            let t = g.axis(AxisId::T).value(it);
            let mut best = (0, f64::MIN);
            for iq in 0..n {
                for ip in 0..n {
                    let v = rho.get(iq, ip, it, 4);
                    if v > best.1 {
                        best = (iq, v);
                    }
                }
            }
            let q_peak = g.axis(AxisId::Q).value(best.0);
            assert!((q_peak - (q0 + p0 * t)).abs() <= dq, "t={t} peak={q_peak}");
        }
    }

    #[test]
    fn gaussian_momentum_moment() {
        let n = 61;
        let g = Grid::new(
            Axis::closed(-12.0, 12.0, 91).unwrap(),
            Axis::closed(-8.0, 8.0, n).unwrap(),
            Axis::closed(0.0, 1.0, 3).unwrap(),
            Axis::closed(-2.0, 2.0, 9).unwrap(),
        );
        let (pbar, sp) = (0.7, 1.1);
        let h = SpaceHamiltonian::FreeParticle;
        let rho = build_solution(&h, |q, p| gauss(q, 1.0) * gauss(p - pbar, sp), 0.0, 1.0, g, CD).unwrap();
        let obs = space_hamiltonian_field(&h, g, CD);
        for it in 0..3 {
            let m = mean_value(&obs, &rho, it).unwrap();
            assert!((m - 0.5 * (sp * sp + pbar * pbar)).abs() < 1e-6, "{m}");
        }
        let one = PhaseField::constant(g, CD, 1.0);
        assert!((mean_value(&one, &rho, 1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mean_invariant_under_s0() {
        let g = grid(21);
        let h = SpaceHamiltonian::Oscillator { omega: 1.0 };
        let f = |q: f64, p: f64| gauss(q - 1.0, 1.0) * gauss(p, 1.0);
        let a = build_solution(&h, f, -0.3, 1.0, g, CD).unwrap();
        let b = build_solution(&h, f, 0.2, 1.0, g, CD).unwrap();
        let hs = space_hamiltonian_field(&h, g, CD);
        let ht = total_hamiltonian_field(&h, g, CD);
        let ma = mean_value(&hs, &a, 4).unwrap();
        let mb = mean_value(&hs, &b, 4).unwrap();
        assert!((ma - mb).abs() < 1e-12);
        let shifted = mean_value(&ht, &b, 4).unwrap();
        assert!((shifted - mb - 0.2).abs() < 1e-6, "{}", shifted - mb);
    }

    #[test]
    fn zero_mass_slice() {
        let g = grid(9);
        let rho = PhaseField::constant(g, CD, 0.0);
        let one = PhaseField::constant(g, CD, 1.0);
        assert!(matches!(mean_value(&one, &rho, 0), Err(Error::Degenerate(_))));
        assert!(matches!(mean_value(&one, &rho, 9), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn built_solution_has_small_residual() {
        let g = grid(25);
        let h = SpaceHamiltonian::Oscillator { omega: 1.0 };
        let rho = build_solution(&h, |q, p| gauss(q - 1.0, 1.0) * gauss(p, 1.0), 0.0, 1.0, g, CD).unwrap();
        let hf = total_hamiltonian_field(&h, g, CD);
        let r = liouville_residual(&hf, &rho).unwrap();
        assert!(r < 0.05, "{r}");
    }
}
