//! Vector-field diagnostics evaluated on solver snapshots.
//!
//! Everything here works from one time slice (t, u, ∂ₜu, w = ∂ₜ²u). Time
//! derivatives of Γu are obtained from the expanded commutator formulas, so no
//! finite differences in time are needed.

mod fit;
mod ghost;
mod ratios;

pub use fit::{fit_growth, fit_growth_window, hk_lambda_norm, DecayFit};
pub use ghost::{ghost_energy, GhostEnergy};
pub use ratios::{good_derivative_check, ks_ratio, lemma31_ratio, Ratio, LEMMA31_FLOOR};

use ndarray::Array2;

use crate::grid::{GridField, PeriodicGrid};
use crate::nullform::NullFormTensor;
use crate::scalar::Real;
use crate::solver::WaveState;
use crate::spectral::Spectral;

/// The commuting fields ∂ₜ, ∂₁, ∂₂, Ω = x₁∂₂ − x₂∂₁, Lᵢ = t∂ᵢ + xᵢ∂ₜ and the
/// modified scaling S̃ = t∂ₜ + x·∇ − 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VectorField {
    Dt,
    D1,
    D2,
    Omega,
    L1,
    L2,
    ScalingMod,
}

impl VectorField {
    pub const ALL: [VectorField; 7] = [
        VectorField::Dt,
        VectorField::D1,
        VectorField::D2,
        VectorField::Omega,
        VectorField::L1,
        VectorField::L2,
        VectorField::ScalingMod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VectorField::Dt => "dt",
            VectorField::D1 => "d1",
            VectorField::D2 => "d2",
            VectorField::Omega => "omega",
            VectorField::L1 => "L1",
            VectorField::L2 => "L2",
            VectorField::ScalingMod => "S~",
        }
    }
}

/// A scalar field f together with its space-time gradient (∂ₜf, ∂₁f, ∂₂f).
#[derive(Clone, Debug)]
pub struct Jet<T> {
    pub value: GridField<T>,
    pub grad: [GridField<T>; 3],
}

/// Derivatives of u on one time slice, shared by all diagnostics.
#[derive(Clone, Debug)]
pub struct GammaContext<T> {
    pub t: T,
    pub u: GridField<T>,
    pub ut: GridField<T>,
    pub w: GridField<T>,
    /// ∂₁u, ∂₂u.
    pub du: [GridField<T>; 2],
    /// ∂₁uₜ, ∂₂uₜ.
    pub dut: [GridField<T>; 2],
    /// ∂₁₁u, ∂₁₂u, ∂₂₂u.
    pub hess: [GridField<T>; 3],
    pub x: [GridField<T>; 2],
}

fn pointwise<T: Real>(grid: PeriodicGrid<T>, f: impl Fn(usize, usize) -> T) -> GridField<T> {
    GridField::from_values_unchecked(
        grid,
        Array2::from_shape_fn((grid.n(), grid.n()), |(i, j)| f(i, j)),
    )
}

impl<T: Real> GammaContext<T> {
    /// `w` must be ∂ₜ²u at the same time, as returned by the solver.
    pub fn new(spectral: &Spectral<T>, state: &WaveState<T>, w: &GridField<T>) -> Self {
        let grid = *state.grid();
        Self {
            t: state.t(),
            u: state.u().clone(),
            ut: state.ut().clone(),
            w: w.clone(),
            du: spectral.gradient(state.u()),
            dut: spectral.gradient(state.ut()),
            hess: spectral.hessian(state.u()),
            x: [
                GridField::from_fn(grid, |x1, _| x1),
                GridField::from_fn(grid, |_, x2| x2),
            ],
        }
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        self.u.grid()
    }

    fn q(&self, i: usize, j: usize) -> &GridField<T> {
        match (i, j) {
            (0, 0) => &self.hess[0],
            (1, 1) => &self.hess[2],
            _ => &self.hess[1],
        }
    }

    /// The jet of u itself.
    pub fn base_jet(&self) -> Jet<T> {
        Jet {
            value: self.u.clone(),
            grad: [self.ut.clone(), self.du[0].clone(), self.du[1].clone()],
        }
    }
}

/// Γu and its space-time gradient from the expanded formulas.
pub fn apply_gamma<T: Real>(ctx: &GammaContext<T>, field: VectorField) -> Jet<T> {
    let grid = *ctx.grid();
    let t = ctx.t;
    let two = T::lit(2.0);
    let v = |f: &GridField<T>, i: usize, j: usize| f.values()[[i, j]];
    let (u, ut, w) = (&ctx.u, &ctx.ut, &ctx.w);
    let [u1, u2] = &ctx.du;
    let [p1, p2] = &ctx.dut;
    let [x1, x2] = &ctx.x;
    let make = |value: GridField<T>, g0: GridField<T>, g1: GridField<T>, g2: GridField<T>| Jet {
        value,
        grad: [g0, g1, g2],
    };
    match field {
        VectorField::Dt => make(ut.clone(), w.clone(), p1.clone(), p2.clone()),
        VectorField::D1 | VectorField::D2 => {
            let k = if field == VectorField::D1 { 0 } else { 1 };
            make(
                ctx.du[k].clone(),
                ctx.dut[k].clone(),
                ctx.q(k, 0).clone(),
                ctx.q(k, 1).clone(),
            )
        }
        VectorField::Omega => {
            let (q11, q12, q22) = (ctx.q(0, 0), ctx.q(0, 1), ctx.q(1, 1));
            make(
                pointwise(grid, |i, j| {
                    -v(x2, i, j) * v(u1, i, j) + v(x1, i, j) * v(u2, i, j)
                }),
                pointwise(grid, |i, j| {
                    -v(x2, i, j) * v(p1, i, j) + v(x1, i, j) * v(p2, i, j)
                }),
                pointwise(grid, |i, j| {
                    -v(x2, i, j) * v(q11, i, j) + v(u2, i, j) + v(x1, i, j) * v(q12, i, j)
                }),
                pointwise(grid, |i, j| {
                    -v(u1, i, j) - v(x2, i, j) * v(q12, i, j) + v(x1, i, j) * v(q22, i, j)
                }),
            )
        }
        VectorField::L1 | VectorField::L2 => {
            let k = if field == VectorField::L1 { 0 } else { 1 };
            let xk = &ctx.x[k];
            let uk = &ctx.du[k];
            let pk = &ctx.dut[k];
            let spatial = |m: usize| {
                let qkm = ctx.q(k, m);
                let pm = &ctx.dut[m];
                let delta = k == m;
                pointwise(grid, |i, j| {
                    let base = t * v(qkm, i, j) + v(xk, i, j) * v(pm, i, j);
                    if delta {
                        base + v(ut, i, j)
                    } else {
                        base
                    }
                })
            };
            make(
                pointwise(grid, |i, j| t * v(uk, i, j) + v(xk, i, j) * v(ut, i, j)),
                pointwise(grid, |i, j| {
                    v(uk, i, j) + t * v(pk, i, j) + v(xk, i, j) * v(w, i, j)
                }),
                spatial(0),
                spatial(1),
            )
        }
        VectorField::ScalingMod => {
            let spatial = |m: usize| {
                let (qa, qb) = (ctx.q(0, m), ctx.q(1, m));
                let pm = &ctx.dut[m];
                let um = &ctx.du[m];
                pointwise(grid, |i, j| {
                    t * v(pm, i, j) + v(x1, i, j) * v(qa, i, j) + v(x2, i, j) * v(qb, i, j)
                        - v(um, i, j)
                })
            };
            make(
                pointwise(grid, |i, j| {
                    t * v(ut, i, j) + v(x1, i, j) * v(u1, i, j) + v(x2, i, j) * v(u2, i, j)
                        - two * v(u, i, j)
                }),
                pointwise(grid, |i, j| {
                    t * v(w, i, j) + v(x1, i, j) * v(p1, i, j) + v(x2, i, j) * v(p2, i, j)
                        - v(ut, i, j)
                }),
                spatial(0),
                spatial(1),
            )
        }
    }
}

/// Value of Γ applied to a field whose jet is known: ∂ₜf, ∂ᵢf, x₁∂₂f − x₂∂₁f,
/// t∂ᵢf + xᵢ∂ₜf or t∂ₜf + x·∇f − 2f.
pub fn apply_to_jet<T: Real>(
    ctx: &GammaContext<T>,
    jet: &Jet<T>,
    field: VectorField,
) -> GridField<T> {
    let grid = *ctx.grid();
    let t = ctx.t;
    let two = T::lit(2.0);
    let v = |f: &GridField<T>, i: usize, j: usize| f.values()[[i, j]];
    let [x1, x2] = &ctx.x;
    let [ft, f1, f2] = &jet.grad;
    let f = &jet.value;
    match field {
        VectorField::Dt => ft.clone(),
        VectorField::D1 => f1.clone(),
        VectorField::D2 => f2.clone(),
        VectorField::Omega => pointwise(grid, |i, j| {
            v(x1, i, j) * v(f2, i, j) - v(x2, i, j) * v(f1, i, j)
        }),
        VectorField::L1 => pointwise(grid, |i, j| t * v(f1, i, j) + v(x1, i, j) * v(ft, i, j)),
        VectorField::L2 => pointwise(grid, |i, j| t * v(f2, i, j) + v(x2, i, j) * v(ft, i, j)),
        VectorField::ScalingMod => pointwise(grid, |i, j| {
            t * v(ft, i, j) + v(x1, i, j) * v(f1, i, j) + v(x2, i, j) * v(f2, i, j)
                - two * v(f, i, j)
        }),
    }
}

/// ½∫|∂f|² for a jet.
fn jet_energy<T: Real>(jet: &Jet<T>) -> T {
    let grid = jet.value.grid();
    let mut sum = T::zero();
    for g in &jet.grad {
        sum = sum + g.values().iter().fold(T::zero(), |a, &x| a + x * x);
    }
    T::lit(0.5) * sum * grid.cell_area()
}

/// ½∫|∂Γu|² for each of the seven fields, in [`VectorField::ALL`] order.
pub fn energy_terms<T: Real>(ctx: &GammaContext<T>) -> [T; 7] {
    VectorField::ALL.map(|f| jet_energy(&apply_gamma(ctx, f)))
}

/// E₁ = ½∫(uₜ² + |∇u|²); E₂ adds ½∫|∂Γu|² over the seven first-order fields.
pub fn energy<T: Real>(ctx: &GammaContext<T>, order: u32) -> crate::Result<T> {
    let e1 = jet_energy(&ctx.base_jet());
    match order {
        1 => Ok(e1),
        2 => Ok(energy_terms(ctx).iter().fold(e1, |a, &b| a + b)),
        _ => Err(crate::Error::InvalidArgument(format!(
            "energy order must be 1 or 2, got {order}"
        ))),
    }
}

/// One row of the experiment table.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    pub e1: f64,
    pub e2: f64,
    pub ghost_e: f64,
    pub ghost_g: f64,
    pub ks_ratio: f64,
    pub good_deriv_ratio: f64,
    pub lemma31_ratio: f64,
    pub picard_max_iters: usize,
}

/// Computes a full [`EnergyReport`] for one snapshot.
pub fn report<T: Real>(
    spectral: &Spectral<T>,
    tensor: &NullFormTensor<T>,
    state: &WaveState<T>,
    w: &GridField<T>,
    picard_max_iters: usize,
    ghost_oversample: usize,
) -> crate::Result<EnergyReport> {
    let ctx = GammaContext::new(spectral, state, w);
    let e1 = energy(&ctx, 1)?;
    let terms = energy_terms(&ctx);
    let e2 = terms.iter().fold(e1, |a, &b| a + b);
    let ghost = ghost_energy(spectral, state, ghost_oversample)?;
    Ok(EnergyReport {
        t: state.t().to_f64_lossy(),
        e1: e1.to_f64_lossy(),
        e2: e2.to_f64_lossy(),
        ghost_e: ghost.weighted.to_f64_lossy(),
        ghost_g: ghost.flux.to_f64_lossy(),
        ks_ratio: ks_ratio(&ctx).value.to_f64_lossy(),
        good_deriv_ratio: good_derivative_check(&ctx).value.to_f64_lossy(),
        lemma31_ratio: lemma31_ratio(&ctx, tensor).value.to_f64_lossy(),
        picard_max_iters,
    })
}
