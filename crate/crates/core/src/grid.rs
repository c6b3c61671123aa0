//! Periodic square grids and sampled fields on them.

use ndarray::{Array2, Zip};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square periodic grid on [−L, L)² with `n` points per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicGrid<T> {
    n: usize,
    half_width: T,
}

impl<T: Real> PeriodicGrid<T> {
    pub fn new(n: usize, half_width: T) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 16, got {n}"
            )));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        Ok(Self { n, half_width })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Grid spacing h = 2L/n.
    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_width / T::from_index(self.n)
    }

    pub fn cell_area(&self) -> T {
        let h = self.spacing();
        h * h
    }

    /// x_j = −L + j·h.
    pub fn coord(&self, j: usize) -> T {
        -self.half_width + T::from_index(j) * self.spacing()
    }

    /// Index of the grid point at the origin.
    pub fn center_index(&self) -> usize {
        self.n / 2
    }

    /// Angular wavenumber of FFT bin `j`; the Nyquist bin is reported as +n/2.
    pub fn wavenumber(&self, j: usize) -> T {
        let k = if j <= self.n / 2 {
            j as f64
        } else {
            j as f64 - self.n as f64
        };
        T::lit(k) * T::PI() / self.half_width
    }

    /// Same domain with `factor` times more points per axis.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.n * factor, self.half_width)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.n == other.n && self.half_width == other.half_width
    }
}

/// Samples of a function on a [`PeriodicGrid`]; `values[[i, j]]` sits at (x_i, x_j).
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    grid: PeriodicGrid<T>,
    values: Array2<T>,
}

impl<T: Real> GridField<T> {
    pub fn new(grid: PeriodicGrid<T>, values: Array2<T>) -> Result<Self> {
        if values.dim() != (grid.n(), grid.n()) {
            return Err(Error::InvalidArgument(format!(
                "field shape {:?} does not match grid size {}",
                values.dim(),
                grid.n()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "field contains non-finite values".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_values_unchecked(grid: PeriodicGrid<T>, values: Array2<T>) -> Self {
        debug_assert_eq!(values.dim(), (grid.n(), grid.n()));
        Self { grid, values }
    }

    pub fn zeros(grid: PeriodicGrid<T>) -> Self {
        Self {
            grid,
            values: Array2::zeros((grid.n(), grid.n())),
        }
    }

    /// Samples `f(x₁, x₂)` at every grid point.
    pub fn from_fn(grid: PeriodicGrid<T>, f: impl Fn(T, T) -> T) -> Self {
        let values = Array2::from_shape_fn((grid.n(), grid.n()), |(i, j)| {
            f(grid.coord(i), grid.coord(j))
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    pub fn into_values(self) -> Array2<T> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// ∫ f dx by the periodic trapezoid (rectangle) rule.
    pub fn integral(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v) * self.grid.cell_area()
    }

    pub fn mean(&self) -> T {
        let n = T::from_index(self.grid.n() * self.grid.n());
        self.values.iter().fold(T::zero(), |acc, &v| acc + v) / n
    }

    pub fn l2_norm(&self) -> T {
        (self.values.iter().fold(T::zero(), |acc, &v| acc + v * v) * self.grid.cell_area()).sqrt()
    }

    pub fn sup_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.mapv(f),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert!(
            self.grid.same_as(&other.grid),
            "fields live on different grids"
        );
        let mut values = self.values.clone();
        Zip::from(&mut values)
            .and(&other.values)
            .for_each(|a, &b| *a = f(*a, b));
        Self {
            grid: self.grid,
            values,
        }
    }

    /// self + s·other.
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + s * b)
    }

    pub fn scaled(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert!(
            self.grid.same_as(&other.grid),
            "fields live on different grids"
        );
        Zip::from(&self.values)
            .and(&other.values)
            .fold(T::zero(), |acc, &a, &b| acc.max((a - b).abs()))
    }
}
