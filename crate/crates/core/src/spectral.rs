//! Fourier-multiplier calculus on a [`PeriodicGrid`].

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::grid::{GridField, PeriodicGrid};
use crate::scalar::Real;

/// Unnormalized 2D DFT coefficients, indexed like the physical array.
pub type Spectrum<T> = Array2<Complex<T>>;

/// Cached FFT plans and wavenumbers for one grid.
#[derive(Clone)]
pub struct Spectral<T: Real> {
    grid: PeriodicGrid<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    k: Vec<T>,
}

impl<T: Real> std::fmt::Debug for Spectral<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("grid", &self.grid)
            .finish()
    }
}

fn transpose_square<C: Copy>(data: &mut [C], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// (i k)^order.
fn ik_pow<T: Real>(k: T, order: u32) -> Complex<T> {
    match order % 4 {
        0 => Complex::new(k.powi(order as i32), T::zero()),
        1 => Complex::new(T::zero(), k.powi(order as i32)),
        2 => Complex::new(-k.powi(order as i32), T::zero()),
        _ => Complex::new(T::zero(), -k.powi(order as i32)),
    }
}

impl<T: Real> Spectral<T> {
    pub fn new(grid: PeriodicGrid<T>) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k: (0..n).map(|j| grid.wavenumber(j)).collect(),
        }
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        &self.grid
    }

    fn fft2(&self, data: &mut Spectrum<T>, plan: &Arc<dyn Fft<T>>) {
        let n = self.grid.n();
        let slice = data.as_slice_mut().expect("spectrum arrays are contiguous");
        plan.process(slice);
        transpose_square(slice, n);
        plan.process(slice);
        transpose_square(slice, n);
    }

    pub fn forward(&self, f: &GridField<T>) -> Spectrum<T> {
        assert!(
            self.grid.same_as(f.grid()),
            "field grid does not match transform grid"
        );
        let mut data = f.values().mapv(|v| Complex::new(v, T::zero()));
        if !data.is_standard_layout() {
            data = data.as_standard_layout().to_owned();
        }
        self.fft2(&mut data, &self.forward);
        data
    }

    /// Inverse transform keeping the real part.
    pub fn inverse(&self, mut spec: Spectrum<T>) -> GridField<T> {
        self.fft2(&mut spec, &self.inverse);
        let norm = T::from_index(self.grid.n() * self.grid.n());
        GridField::from_values_unchecked(self.grid, spec.mapv(|c| c.re / norm))
    }

    /// Multiplies the spectrum by `symbol(i, j, k₁, k₂)` and transforms back.
    pub fn apply_symbol(
        &self,
        spec: &Spectrum<T>,
        symbol: impl Fn(usize, usize, T, T) -> Complex<T>,
    ) -> GridField<T> {
        let mut out = spec.clone();
        for ((i, j), c) in out.indexed_iter_mut() {
            *c = *c * symbol(i, j, self.k[i], self.k[j]);
        }
        self.inverse(out)
    }

    /// ∂₁^o1 ∂₂^o2 from a precomputed spectrum. Odd derivatives drop the Nyquist bin.
    pub fn derivative_from(&self, spec: &Spectrum<T>, o1: u32, o2: u32) -> GridField<T> {
        let nyq = self.grid.n() / 2;
        self.apply_symbol(spec, |i, j, k1, k2| {
            if (o1 % 2 == 1 && i == nyq) || (o2 % 2 == 1 && j == nyq) {
                Complex::new(T::zero(), T::zero())
            } else {
                ik_pow(k1, o1) * ik_pow(k2, o2)
            }
        })
    }

    pub fn derivative(&self, f: &GridField<T>, o1: u32, o2: u32) -> GridField<T> {
        self.derivative_from(&self.forward(f), o1, o2)
    }

    pub fn gradient(&self, f: &GridField<T>) -> [GridField<T>; 2] {
        let s = self.forward(f);
        [
            self.derivative_from(&s, 1, 0),
            self.derivative_from(&s, 0, 1),
        ]
    }

    /// (∂₁₁, ∂₁₂, ∂₂₂).
    pub fn hessian(&self, f: &GridField<T>) -> [GridField<T>; 3] {
        let s = self.forward(f);
        [
            self.derivative_from(&s, 2, 0),
            self.derivative_from(&s, 1, 1),
            self.derivative_from(&s, 0, 2),
        ]
    }

    pub fn laplacian(&self, f: &GridField<T>) -> GridField<T> {
        let s = self.forward(f);
        self.apply_symbol(&s, |_, _, k1, k2| {
            Complex::new(-(k1 * k1 + k2 * k2), T::zero())
        })
    }

    /// Solves `P(k) χ̂ = f̂` for a real symbol that vanishes only at k = 0. The
    /// mean of `rhs` is removed first and returned; the solution has zero mean.
    pub fn solve_symbol_zero_mean(
        &self,
        rhs: &GridField<T>,
        symbol: impl Fn(T, T) -> T,
    ) -> (GridField<T>, T) {
        let mean = rhs.mean();
        let s = self.forward(rhs);
        let sol = self.apply_symbol(&s, |i, j, k1, k2| {
            if i == 0 && j == 0 {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::one() / symbol(k1, k2), T::zero())
            }
        });
        (sol, mean)
    }

    /// Zero-mean solution of −Δφ = rhs − mean(rhs); returns (φ, mean).
    pub fn solve_neg_laplacian(&self, rhs: &GridField<T>) -> (GridField<T>, T) {
        self.solve_symbol_zero_mean(rhs, |k1, k2| k1 * k1 + k2 * k2)
    }

    /// Whether bin `i` survives 2/3-rule truncation.
    pub fn keeps_mode(&self, i: usize) -> bool {
        let n = self.grid.n();
        let m = if i <= n / 2 { i } else { n - i };
        3 * m <= n
    }

    /// 2/3-rule truncation in spectral space (in place).
    pub fn truncate_spectrum(&self, spec: &mut Spectrum<T>) {
        for ((i, j), c) in spec.indexed_iter_mut() {
            if !(self.keeps_mode(i) && self.keeps_mode(j)) {
                *c = Complex::new(T::zero(), T::zero());
            }
        }
    }

    pub fn dealias(&self, f: &GridField<T>) -> GridField<T> {
        let mut s = self.forward(f);
        self.truncate_spectrum(&mut s);
        self.inverse(s)
    }

    /// Band-limited (trigonometric) interpolation onto a grid `factor` times finer.
    pub fn interpolate(&self, f: &GridField<T>, factor: usize) -> Result<GridField<T>> {
        let fine_grid = self.grid.refined(factor)?;
        if factor == 1 {
            return Ok(f.clone());
        }
        let fine = Spectral::new(fine_grid);
        let spec = self.forward(f);
        let n = self.grid.n();
        let nf = fine_grid.n();
        let half = n / 2;
        let scale = T::from_index(factor * factor);
        // Each coarse bin maps to one fine bin, except Nyquist which splits evenly
        // between +n/2 and −n/2 to keep the interpolant real.
        let targets = |i: usize| -> Vec<(usize, T)> {
            if i < half {
                vec![(i, T::one())]
            } else if i > half {
                vec![(i + nf - n, T::one())]
            } else {
                vec![(half, T::lit(0.5)), (nf - half, T::lit(0.5))]
            }
        };
        let mut out: Spectrum<T> = Array2::from_elem((nf, nf), Complex::new(T::zero(), T::zero()));
        for ((i, j), c) in spec.indexed_iter() {
            for (ti, wi) in targets(i) {
                for (tj, wj) in targets(j) {
                    out[[ti, tj]] = out[[ti, tj]] + *c * (wi * wj * scale);
                }
            }
        }
        Ok(fine.inverse(out))
    }
}
