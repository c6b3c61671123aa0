//! Initial data for the fully nonlinear equation built from a quasilinear problem
//! □v = A_l ∂_l (N_{μδ} ∂_μ v ∂_δ v), with v recovered as v = A_i ∂_i u.
//!
//! Two constructions exist depending on the time component of A:
//!
//! * A₀ = 0 (case a): φ and ψ are line integrals of v₀ and v₁ along the
//!   characteristic direction (1, A₂/A₁), starting from the left edge of the box.
//! * A₀ ≠ 0 (case b): φ = χ solves the constant-coefficient elliptic problem
//!   (A₁∂₁ + A₂∂₂)²χ − A₀²Δχ = −A₀∂ₜv + A₁∂₁v + A₂∂₂v + A₀² N(∂v, ∂v) at t = 0,
//!   and ψ = (v₀ − A₁∂₁χ − A₂∂₂χ)/A₀.
//!
//! The prototype ∂ₜ(|∂ₜv|² − |∇v|²) is the case-b instance with A = (1, 0, 0),
//! where the elliptic problem is a Poisson equation.

use ndarray::Array2;
use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{GridField, PeriodicGrid};
use crate::nullform::{NullFormTensor, QuasiNullForm};
use crate::scalar::Real;
use crate::spectral::Spectral;

/// Relative amplitude above which data counts as present outside the inner box.
const SUPPORT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct QuasilinearIVP<T: Real> {
    pub form: QuasiNullForm<T>,
    pub v0: GridField<T>,
    pub v1: GridField<T>,
}

impl<T: Real> QuasilinearIVP<T> {
    pub fn new(form: QuasiNullForm<T>, v0: GridField<T>, v1: GridField<T>) -> Result<Self> {
        if !v0.grid().same_as(v1.grid()) {
            return Err(Error::InvalidArgument(
                "v0 and v1 must share one grid".into(),
            ));
        }
        Ok(Self { form, v0, v1 })
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        self.v0.grid()
    }
}

/// □u = N(∂²u, ∂²u) with u(0) = φ, ∂ₜu(0) = ψ and a symmetrized tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct FullyNonlinearIVP<T: Real> {
    tensor: NullFormTensor<T>,
    phi: GridField<T>,
    psi: GridField<T>,
}

impl<T: Real> FullyNonlinearIVP<T> {
    pub fn new(tensor: NullFormTensor<T>, phi: GridField<T>, psi: GridField<T>) -> Result<Self> {
        if !tensor.is_symmetric() {
            return Err(Error::InvalidArgument(
                "tensor must satisfy the pair symmetries; symmetrize it first".into(),
            ));
        }
        if !phi.grid().same_as(psi.grid()) {
            return Err(Error::InvalidArgument(
                "phi and psi must share one grid".into(),
            ));
        }
        Ok(Self { tensor, phi, psi })
    }

    pub fn tensor(&self) -> &NullFormTensor<T> {
        &self.tensor
    }

    pub fn phi(&self) -> &GridField<T> {
        &self.phi
    }

    pub fn psi(&self) -> &GridField<T> {
        &self.psi
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        self.phi.grid()
    }
}

/// Data-quality notes attached to a transformation result.
#[derive(Clone, Debug, PartialEq)]
pub enum TransformWarning {
    /// The periodic elliptic solve dropped this mean from the right-hand side.
    MeanRemoved { mean: f64 },
    /// Input data is not negligible outside the centered box of half-width L/2.
    SupportOutsideInnerBox {
        field: &'static str,
        relative_max: f64,
    },
    /// The line integral over the whole box does not vanish, so φ or ψ does
    /// not decay as x₁ → +∞ and is discontinuous across the periodic seam.
    NonDecayingLineIntegral {
        field: &'static str,
        relative_max: f64,
    },
}

#[derive(Clone, Debug)]
pub struct Transformed<T: Real> {
    pub ivp: FullyNonlinearIVP<T>,
    pub warnings: Vec<TransformWarning>,
}

fn support_warning<T: Real>(f: &GridField<T>, name: &'static str) -> Option<TransformWarning> {
    let grid = f.grid();
    let half = grid.half_width() * T::lit(0.5);
    let global = f.sup_abs();
    if global == T::zero() {
        return None;
    }
    let mut outside = T::zero();
    for ((i, j), &v) in f.values().indexed_iter() {
        if grid.coord(i).abs() > half || grid.coord(j).abs() > half {
            outside = outside.max(v.abs());
        }
    }
    let rel = (outside / global).to_f64_lossy();
    (rel > SUPPORT_TOL).then_some(TransformWarning::SupportOutsideInnerBox {
        field: name,
        relative_max: rel,
    })
}

/// Cumulative line integral (1/A₁)∫_{−L}^{x₁} f(s, x₂ + slope·(s − x₁)) ds.
///
/// Interpolation in x₂ is spectral (a phase shift of each x₂-Fourier mode), and
/// the cumulative trapezoid sums carry the h²/12 endpoint correction, which
/// makes the quadrature fourth order in h for smooth integrands.
fn slanted_antiderivative<T: Real>(f: &GridField<T>, a1: T, slope: T) -> GridField<T> {
    let grid = *f.grid();
    let n = grid.n();
    let h = grid.spacing();
    let spectral = Spectral::new(grid);
    let df = {
        let s = spectral.forward(f);
        spectral
            .derivative_from(&s, 1, 0)
            .axpy(slope, &spectral.derivative_from(&s, 0, 1))
    };

    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let row_spectra = |g: &GridField<T>| -> Array2<Complex<T>> {
        let mut data = g.values().mapv(|v| Complex::new(v, T::zero()));
        fwd.process(data.as_slice_mut().expect("contiguous"));
        data
    };
    let vals = row_spectra(f);
    let dvals = row_spectra(&df);

    let zero = Complex::new(T::zero(), T::zero());
    let kappa: Vec<T> = (0..n).map(|q| grid.wavenumber(q)).collect();
    // Phase e^{iκ slope x₁} carries the x₂-shift of the line through (x₁, ·).
    let phase = |i: usize, q: usize| -> Complex<T> {
        if q == n / 2 {
            zero
        } else {
            let a = kappa[q] * slope * grid.coord(i);
            Complex::new(a.cos(), a.sin())
        }
    };

    let half = T::lit(0.5);
    let corr = h * h / T::lit(12.0);
    let mut out = Array2::from_elem((n, n), zero);
    for q in 0..n {
        let b: Vec<Complex<T>> = (0..n).map(|j| vals[[j, q]] * phase(j, q)).collect();
        let db: Vec<Complex<T>> = (0..n).map(|j| dvals[[j, q]] * phase(j, q)).collect();
        let mut running = zero;
        for i in 0..n {
            if i > 0 {
                running = running + (b[i - 1] + b[i]) * (half * h);
            }
            let corrected = running - (db[i] - db[0]) * corr;
            out[[i, q]] = corrected * phase(i, q).conj();
        }
    }
    let norm = T::from_index(n);
    inv.process(out.as_slice_mut().expect("contiguous"));
    GridField::from_values_unchecked(grid, out.mapv(|c| c.re / (norm * a1)))
}

/// Case A₀ = 0: φ, ψ as line integrals along the characteristic direction.
pub fn transform_case_a<T: Real>(ivp: &QuasilinearIVP<T>) -> Result<Transformed<T>> {
    let [a0, a1, a2] = ivp.form.a;
    if a0 != T::zero() {
        return Err(Error::WrongCase(format!(
            "case a requires A0 = 0, got A0 = {a0}"
        )));
    }
    if a1 == T::zero() {
        return Err(Error::Unsupported(
            "case a requires A1 != 0 (rotate coordinates first)".into(),
        ));
    }
    let slope = a2 / a1;
    let phi = slanted_antiderivative(&ivp.v0, a1, slope);
    let psi = slanted_antiderivative(&ivp.v1, a1, slope);

    let mut warnings: Vec<_> = [
        support_warning(&ivp.v0, "v0"),
        support_warning(&ivp.v1, "v1"),
    ]
    .into_iter()
    .flatten()
    .collect();
    for (field, name) in [(&phi, "phi"), (&psi, "psi")] {
        let n = field.grid().n();
        let global = field.sup_abs();
        if global > T::zero() {
            let last = field
                .values()
                .row(n - 1)
                .iter()
                .fold(T::zero(), |m, v| m.max(v.abs()));
            let rel = (last / global).to_f64_lossy();
            if rel > SUPPORT_TOL {
                warnings.push(TransformWarning::NonDecayingLineIntegral {
                    field: name,
                    relative_max: rel,
                });
            }
        }
    }
    let tensor = ivp.form.lift().symmetrize();
    Ok(Transformed {
        ivp: FullyNonlinearIVP::new(tensor, phi, psi)?,
        warnings,
    })
}

/// Right-hand side −A₀∂ₜv + A₁∂₁v + A₂∂₂v + A₀² N_{μδ}∂_μv ∂_δv of the case-b
/// elliptic problem, with ∂v = (vt0, ∂₁v₀, ∂₂v₀).
pub fn case_b_rhs<T: Real>(
    form: &QuasiNullForm<T>,
    v0: &GridField<T>,
    vt0: &GridField<T>,
) -> GridField<T> {
    let spectral = Spectral::new(*v0.grid());
    let [d1, d2] = spectral.gradient(v0);
    let [a0, a1, a2] = form.a;
    let values = ndarray::Zip::from(vt0.values())
        .and(d1.values())
        .and(d2.values())
        .map_collect(|&vt, &g1, &g2| {
            -a0 * vt + a1 * g1 + a2 * g2 + a0 * a0 * form.quadratic_form([vt, g1, g2])
        });
    GridField::from_values_unchecked(*v0.grid(), values)
}

/// Fourier symbol of (A₁∂₁ + A₂∂₂)² − A₀²Δ.
fn case_b_symbol<T: Real>(a: [T; 3]) -> impl Fn(T, T) -> T {
    move |k1, k2| {
        let d = a[1] * k1 + a[2] * k2;
        a[0] * a[0] * (k1 * k1 + k2 * k2) - d * d
    }
}

/// Applies (A₁∂₁ + A₂∂₂)² − A₀²Δ spectrally; used for residual checks.
pub fn case_b_operator<T: Real>(a: [T; 3], chi: &GridField<T>) -> GridField<T> {
    let spectral = Spectral::new(*chi.grid());
    let s = spectral.forward(chi);
    let sym = case_b_symbol(a);
    spectral.apply_symbol(&s, |_, _, k1, k2| Complex::new(sym(k1, k2), T::zero()))
}

/// Case A₀ ≠ 0: φ = χ from the elliptic problem, ψ = (v₀ − A₁∂₁χ − A₂∂₂χ)/A₀.
/// `vt0` supplies ∂ₜv(0), which the quasilinear data alone does not determine.
pub fn transform_case_b<T: Real>(
    ivp: &QuasilinearIVP<T>,
    vt0: &GridField<T>,
) -> Result<Transformed<T>> {
    let [a0, a1, a2] = ivp.form.a;
    if a0 == T::zero() {
        return Err(Error::WrongCase("case b requires A0 != 0".into()));
    }
    if a1 * a1 + a2 * a2 >= a0 * a0 {
        return Err(Error::DegenerateOperator(format!(
            "A1^2 + A2^2 = {} must be below A0^2 = {}",
            a1 * a1 + a2 * a2,
            a0 * a0
        )));
    }
    if !vt0.grid().same_as(ivp.grid()) {
        return Err(Error::InvalidArgument(
            "vt0 must share the data grid".into(),
        ));
    }
    let spectral = Spectral::new(*ivp.grid());
    let rhs = case_b_rhs(&ivp.form, &ivp.v0, vt0);
    let (chi, mean) = spectral.solve_symbol_zero_mean(&rhs, case_b_symbol(ivp.form.a));
    let [c1, c2] = spectral.gradient(&chi);
    let psi = ivp.v0.axpy(-a1, &c1).axpy(-a2, &c2).scaled(T::one() / a0);

    let mut warnings: Vec<_> = [
        support_warning(&ivp.v0, "v0"),
        support_warning(&ivp.v1, "v1"),
    ]
    .into_iter()
    .flatten()
    .collect();
    if mean != T::zero() {
        warnings.push(TransformWarning::MeanRemoved {
            mean: mean.to_f64_lossy(),
        });
    }
    let tensor = ivp.form.lift().symmetrize();
    Ok(Transformed {
        ivp: FullyNonlinearIVP::new(tensor, chi, psi)?,
        warnings,
    })
}

/// Right-hand side |v₁|² − |∇v₀|² − v₁ of the prototype Poisson problem.
pub fn prototype_rhs<T: Real>(v0: &GridField<T>, v1: &GridField<T>) -> GridField<T> {
    let spectral = Spectral::new(*v0.grid());
    let [d1, d2] = spectral.gradient(v0);
    let grad_sq = d1.zip_with(&d2, |a, b| a * a + b * b);
    v1.map(|v| v * v - v).zip_with(&grad_sq, |a, g| a - g)
}

/// □v = ∂ₜ(|∂ₜv|² − |∇v|²) mapped to □u = |∂ₜ²u|² − |∂ₜ∇u|² with
/// u(0) = (−Δ)⁻¹(|v₁|² − |∇v₀|² − v₁) and ∂ₜu(0) = v₀.
pub fn transform_prototype<T: Real>(
    v0: &GridField<T>,
    v1: &GridField<T>,
) -> Result<Transformed<T>> {
    if !v0.grid().same_as(v1.grid()) {
        return Err(Error::InvalidArgument(
            "v0 and v1 must share one grid".into(),
        ));
    }
    let spectral = Spectral::new(*v0.grid());
    let rhs = prototype_rhs(v0, v1);
    let (phi, mean) = spectral.solve_neg_laplacian(&rhs);
    let mut warnings: Vec<_> = [support_warning(v0, "v0"), support_warning(v1, "v1")]
        .into_iter()
        .flatten()
        .collect();
    if mean != T::zero() {
        warnings.push(TransformWarning::MeanRemoved {
            mean: mean.to_f64_lossy(),
        });
    }
    Ok(Transformed {
        ivp: FullyNonlinearIVP::new(NullFormTensor::prototype().symmetrize(), phi, v0.clone())?,
        warnings,
    })
}

/// v = A₀∂ₜu + A₁∂₁u + A₂∂₂u with spectral spatial derivatives.
pub fn reconstruct_v<T: Real>(
    u: &GridField<T>,
    ut: &GridField<T>,
    form: &QuasiNullForm<T>,
) -> Result<GridField<T>> {
    if !u.grid().same_as(ut.grid()) {
        return Err(Error::InvalidArgument(
            "u and ut must share one grid".into(),
        ));
    }
    let [a0, a1, a2] = form.a;
    let mut v = ut.scaled(a0);
    if a1 != T::zero() || a2 != T::zero() {
        let [d1, d2] = Spectral::new(*u.grid()).gradient(u);
        v = v.axpy(a1, &d1).axpy(a2, &d2);
    }
    Ok(v)
}
