use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Space part `H(q, p)` of the total Hamilton function, unit mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceHamiltonian<T: Real> {
    /// `p²/2`
    FreeParticle,
    /// `p²/2 + ω² q²/2`
    Oscillator { omega: T },
}

impl<T: Real> SpaceHamiltonian<T> {
    pub fn value(&self, q: T, p: T) -> T {
        let half = lit::<T>(0.5);
        match *self {
            Self::FreeParticle => half * p * p,
            Self::Oscillator { omega } => half * (p * p + omega * omega * q * q),
        }
    }

    /// `−∂H/∂q`
    pub fn force(&self, q: T) -> T {
        match *self {
            Self::FreeParticle => T::zero(),
            Self::Oscillator { omega } => -omega * omega * q,
        }
    }

    /// Closed-form flow `(q, p) ↦ (q(t), p(t))`; negative `t` runs backwards.
    pub fn exact_flow(&self, q: T, p: T, t: T) -> (T, T) {
        match *self {
            Self::FreeParticle => (q + p * t, p),
            Self::Oscillator { omega } => {
                let (s, c) = (omega * t).sin_cos();
                (q * c + p / omega * s, -q * omega * s + p * c)
            }
        }
    }

    /// One kick-drift-kick step of size `dt` (may be negative).
    #[inline]
    pub fn leapfrog_step(&self, q: T, p: T, dt: T) -> (T, T) {
        let half = lit::<T>(0.5) * dt;
        let p_half = p + half * self.force(q);
        let q_new = q + dt * p_half;
        (q_new, p_half + half * self.force(q_new))
    }

    pub fn validate(&self) -> Result<()> {
        if let Self::Oscillator { omega } = *self {
            if !(omega > T::zero()) || !omega.is_finite() {
                return Err(Error::Validation(format!("oscillator frequency {omega} must be positive")));
            }
        }
        Ok(())
    }
}

/// Sampled Hamiltonian flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    t_samples: Vec<T>,
    q_of_t: Vec<T>,
    p_of_t: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    /// Leapfrog integration from `(q0, p0)` at `t = 0`, `steps` steps of `dt`.
    pub fn integrate(h: &SpaceHamiltonian<T>, q0: T, p0: T, dt: T, steps: usize) -> Result<Self> {
        h.validate()?;
        if !(dt != T::zero()) || !dt.is_finite() {
            return Err(Error::Validation("time step must be finite and non-zero".into()));
        }
        let mut t_samples = Vec::with_capacity(steps + 1);
        let mut q_of_t = Vec::with_capacity(steps + 1);
        let mut p_of_t = Vec::with_capacity(steps + 1);
        let (mut q, mut p) = (q0, p0);
        for k in 0..=steps {
            t_samples.push(dt * lit::<T>(k as f64));
            q_of_t.push(q);
            p_of_t.push(p);
            (q, p) = h.leapfrog_step(q, p, dt);
        }
        Ok(Self {
            t_samples,
            q_of_t,
            p_of_t,
        })
    }

    pub fn t_samples(&self) -> &[T] {
        &self.t_samples
    }

    pub fn q(&self) -> &[T] {
        &self.q_of_t
    }

    pub fn p(&self) -> &[T] {
        &self.p_of_t
    }

    pub fn len(&self) -> usize {
        self.t_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_samples.is_empty()
    }

    /// Largest `|H(q(t),p(t)) − H(q(0),p(0))|` along the samples.
    pub fn energy_drift(&self, h: &SpaceHamiltonian<T>) -> T {
        let e0 = h.value(self.q_of_t[0], self.p_of_t[0]);
        self.q_of_t
            .iter()
            .zip(&self.p_of_t)
            .fold(T::zero(), |acc, (&q, &p)| acc.max((h.value(q, p) - e0).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle_leapfrog_is_exact() {
        let h = SpaceHamiltonian::<f64>::FreeParticle;
        let tr = Trajectory::integrate(&h, 0.3, -1.2, 0.1, 20).unwrap();
        for k in 0..tr.len() {
            let t = tr.t_samples()[k];
            assert!((tr.q()[k] - (0.3 - 1.2 * t)).abs() < 1e-13);
            assert_eq!(tr.p()[k], -1.2);
        }
    }

    #[test]
    fn oscillator_energy_bounded_and_second_order() {
        let h = SpaceHamiltonian::Oscillator { omega: 1.5 };
        let t_end = 4.0;
        let mut errs = Vec::new();
        for steps in [100usize, 200] {
            let dt = t_end / steps as f64;
            let tr = Trajectory::integrate(&h, 1.0, 0.0, dt, steps).unwrap();
            assert!(tr.energy_drift(&h) < 10.0 * dt * dt);
            let (qe, _) = h.exact_flow(1.0, 0.0, t_end);
            errs.push((tr.q()[steps] - qe).abs());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn exact_flow_inverts_with_negative_time() {
        let h = SpaceHamiltonian::Oscillator { omega: 0.7_f64 };
        let (q, p) = h.exact_flow(0.4, -0.9, 2.3);
        let (q0, p0) = h.exact_flow(q, p, -2.3);
        assert!((q0 - 0.4).abs() < 1e-14 && (p0 + 0.9).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SpaceHamiltonian::Oscillator { omega: -1.0 }.validate().is_err());
        assert!(Trajectory::integrate(&SpaceHamiltonian::<f64>::FreeParticle, 0.0, 0.0, 0.0, 3).is_err());
    }
}
