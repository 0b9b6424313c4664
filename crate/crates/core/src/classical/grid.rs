use std::io::Write;

use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::{Error, Result};

/// One axis of a rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis<T: Real> {
    min: T,
    n: usize,
    step: T,
    periodic: bool,
}

impl<T: Real> Axis<T> {
    /// `n` nodes spanning `[min, max]` inclusive.
    pub fn closed(min: T, max: T, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Validation(format!("axis needs at least 3 nodes, got {n}")));
        }
        let step = (max - min) / from_usize::<T>(n - 1);
        if !(step > T::zero()) {
            return Err(Error::Validation("axis step must be positive".into()));
        }
        Ok(Self {
            min,
            n,
            step,
            periodic: false,
        })
    }

    /// `n` nodes on a periodic interval of the given length starting at `min`.
    pub fn periodic(min: T, length: T, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Validation(format!("axis needs at least 3 nodes, got {n}")));
        }
        let step = length / from_usize::<T>(n);
        if !(step > T::zero()) {
            return Err(Error::Validation("axis step must be positive".into()));
        }
        Ok(Self {
            min,
            n,
            step,
            periodic: true,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    #[inline]
    pub fn min(&self) -> T {
        self.min
    }

    #[inline]
    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    #[inline]
    pub fn value(&self, i: usize) -> T {
        self.min + from_usize::<T>(i) * self.step
    }

    /// Node range used for residuals: all nodes on a periodic axis, the
    /// boundary nodes dropped otherwise.
    pub fn interior(&self) -> std::ops::Range<usize> {
        if self.periodic {
            0..self.n
        } else {
            1..self.n - 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisId {
    Q = 0,
    P = 1,
    T = 2,
    S = 3,
}

impl AxisId {
    pub const ALL: [AxisId; 4] = [AxisId::Q, AxisId::P, AxisId::T, AxisId::S];

    pub fn name(self) -> &'static str {
        match self {
            AxisId::Q => "q",
            AxisId::P => "p",
            AxisId::T => "t",
            AxisId::S => "s",
        }
    }
}

/// Rectangular `(q, p, t, s)` grid; `s` is the fastest index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T: Real> {
    axes: [Axis<T>; 4],
}

impl<T: Real> Grid<T> {
    pub fn new(q: Axis<T>, p: Axis<T>, t: Axis<T>, s: Axis<T>) -> Self {
        Self { axes: [q, p, t, s] }
    }

    #[inline]
    pub fn axis(&self, id: AxisId) -> &Axis<T> {
        &self.axes[id as usize]
    }

    pub fn shape(&self) -> [usize; 4] {
        [self.axes[0].n, self.axes[1].n, self.axes[2].n, self.axes[3].n]
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> [usize; 4] {
        let [_, np, nt, ns] = self.shape();
        [np * nt * ns, nt * ns, ns, 1]
    }

    #[inline]
    pub fn index(&self, iq: usize, ip: usize, it: usize, is: usize) -> usize {
        let st = self.strides();
        iq * st[0] + ip * st[1] + it * st[2] + is
    }

    pub fn coords(&self, flat: usize) -> [usize; 4] {
        let st = self.strides();
        let sh = self.shape();
        [
            flat / st[0],
            (flat / st[1]) % sh[1],
            (flat / st[2]) % sh[2],
            flat % sh[3],
        ]
    }

    pub fn point(&self, flat: usize) -> [T; 4] {
        let c = self.coords(flat);
        [
            self.axes[0].value(c[0]),
            self.axes[1].value(c[1]),
            self.axes[2].value(c[2]),
            self.axes[3].value(c[3]),
        ]
    }

    /// `Δq Δp Δs`, the weight of a node in a fixed-t slice.
    pub fn slice_volume(&self) -> T {
        self.axes[0].step * self.axes[1].step * self.axes[3].step
    }

    /// Flat indices of every interior node.
    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let [rq, rp, rt, rs] = [
            self.axes[0].interior(),
            self.axes[1].interior(),
            self.axes[2].interior(),
            self.axes[3].interior(),
        ];
        rq.flat_map(move |iq| {
            let (rp, rt, rs) = (rp.clone(), rt.clone(), rs.clone());
            rp.flat_map(move |ip| {
                let (rt, rs) = (rt.clone(), rs.clone());
                rt.flat_map(move |it| rs.clone().map(move |is| self.index(iq, ip, it, is)))
            })
        })
    }
}

/// How partial derivatives are taken on a [`PhaseField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeBackend {
    /// Second-order central differences; one-sided second-order stencils on
    /// the boundary nodes of non-periodic axes.
    #[default]
    CentralDifference,
    /// Trigonometric differentiation on periodic axes, central differences on
    /// the others.
    Spectral,
}

/// Real samples on a `(q, p, t, s)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField<T: Real> {
    grid: Grid<T>,
    values: Vec<T>,
    backend: DerivativeBackend,
}

impl<T: Real> PhaseField<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>, backend: DerivativeBackend) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            backend,
        })
    }

    pub fn from_fn(
        grid: Grid<T>,
        backend: DerivativeBackend,
        mut f: impl FnMut(T, T, T, T) -> T,
    ) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let [q, p, t, s] = grid.point(i);
                f(q, p, t, s)
            })
            .collect();
        Self {
            grid,
            values,
            backend,
        }
    }

    /// The coordinate function of one axis.
    pub fn coordinate(grid: Grid<T>, backend: DerivativeBackend, axis: AxisId) -> Self {
        Self::from_fn(grid, backend, |q, p, t, s| match axis {
            AxisId::Q => q,
            AxisId::P => p,
            AxisId::T => t,
            AxisId::S => s,
        })
    }

    pub fn constant(grid: Grid<T>, backend: DerivativeBackend, value: T) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
            backend,
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn backend(&self) -> DerivativeBackend {
        self.backend
    }

    pub fn with_backend(mut self, backend: DerivativeBackend) -> Self {
        self.backend = backend;
        self
    }

    #[inline]
    pub fn get(&self, iq: usize, ip: usize, it: usize, is: usize) -> T {
        self.values[self.grid.index(iq, ip, it, is)]
    }

    pub(crate) fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::AxisMismatch(
                "fields are sampled on different grids".into(),
            ));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            backend: self.backend,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|v| v * factor)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            backend: self.backend,
        }
    }

    /// Max `|value|` over interior nodes.
    pub fn interior_max_abs(&self) -> T {
        self.grid
            .interior_indices()
            .fold(T::zero(), |acc, i| acc.max(self.values[i].abs()))
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    /// Checks the probability-density invariants: samples `≥ −1e−12` and
    /// finite total mass.
    pub fn check_density(&self) -> Result<()> {
        let floor = -lit::<T>(1e-12);
        if let Some(v) = self.values.iter().find(|v| **v < floor || !v.is_finite()) {
            return Err(Error::Validation(format!(
                "density sample {v} is negative or not finite"
            )));
        }
        Ok(())
    }

    /// Partial derivative along `axis` with the field's backend.
    pub fn derivative(&self, axis: AxisId) -> Self {
        let ax = *self.grid.axis(axis);
        let stride = self.grid.strides()[axis as usize];
        let n = ax.len();
        let block = n * stride;
        let spectral = self.backend == DerivativeBackend::Spectral && ax.is_periodic();
        let dmat = spectral.then(|| spectral_matrix(n, ax.step()));

        let mut out = vec![T::zero(); self.values.len()];
        let mut line = vec![T::zero(); n];
        let mut dline = vec![T::zero(); n];
        for outer in 0..self.values.len() / block {
            for inner in 0..stride {
                let base = outer * block + inner;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = self.values[base + i * stride];
                }
                match &dmat {
                    Some(d) => {
                        for (j, slot) in dline.iter_mut().enumerate() {
                            *slot = d[j * n..(j + 1) * n]
                                .iter()
                                .zip(&line)
                                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
                        }
                    }
                    None => central_difference(&line, ax.step(), ax.is_periodic(), &mut dline),
                }
                for (i, &v) in dline.iter().enumerate() {
                    out[base + i * stride] = v;
                }
            }
        }
        Self {
            grid: self.grid,
            values: out,
            backend: self.backend,
        }
    }

    /// CSV snapshot: header `q,p,t,s,value`, one node per line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "q,p,t,s,value")?;
        for (i, &v) in self.values.iter().enumerate() {
            let [q, p, t, s] = self.grid.point(i);
            writeln!(
                w,
                "{},{},{},{},{}",
                to_f64(q),
                to_f64(p),
                to_f64(t),
                to_f64(s),
                to_f64(v)
            )?;
        }
        Ok(())
    }
}

fn central_difference<T: Real>(line: &[T], h: T, periodic: bool, out: &mut [T]) {
    let n = line.len();
    let two_h = h + h;
    for i in 1..n - 1 {
        out[i] = (line[i + 1] - line[i - 1]) / two_h;
    }
    if periodic {
        out[0] = (line[1] - line[n - 1]) / two_h;
        out[n - 1] = (line[0] - line[n - 2]) / two_h;
    } else {
        let three = lit::<T>(3.0);
        let four = lit::<T>(4.0);
        out[0] = (-three * line[0] + four * line[1] - line[2]) / two_h;
        out[n - 1] = (three * line[n - 1] - four * line[n - 2] + line[n - 3]) / two_h;
    }
}

/// Row-major trigonometric differentiation matrix for `n` nodes with
/// spacing `h` on a periodic interval of length `n h`.
fn spectral_matrix<T: Real>(n: usize, h: T) -> Vec<T> {
    let nf = from_usize::<T>(n);
    let scale = T::two_pi() / (nf * h);
    let half = lit::<T>(0.5);
    let mut d = vec![T::zero(); n * n];
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            let diff = j as i64 - k as i64;
            let sign = if diff.rem_euclid(2) == 0 { T::one() } else { -T::one() };
            let x = T::pi() * lit::<T>(diff as f64) / nf;
            let kernel = if n.is_multiple_of(2) {
                x.cos() / x.sin()
            } else {
                T::one() / x.sin()
            };
            d[j * n + k] = half * sign * kernel * scale;
        }
    }
    d
}
