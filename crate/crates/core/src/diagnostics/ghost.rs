//! Alinhac ghost-weight energy with q(σ) = arctan σ, σ = r − t.

use crate::error::Result;
use crate::scalar::Real;
use crate::solver::WaveState;
use crate::spectral::Spectral;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostEnergy<T> {
    /// ½∫e^q |∂u|².
    pub weighted: T,
    /// G = Σᵢ∫ e^q/(1+σ²) (ωᵢ∂ₜu + ∂ᵢu)².
    pub flux: T,
}

/// Evaluates both ghost quadratures. For linear solutions the two satisfy
/// d/dt weighted + ½ flux = 0.
///
/// The weight is only Lipschitz at r = 0, so the integrands are evaluated
/// after band-limited interpolation onto a grid `oversample` times finer
/// (1 disables it). At the origin ω is taken along ∇u.
pub fn ghost_energy<T: Real>(
    spectral: &Spectral<T>,
    state: &WaveState<T>,
    oversample: usize,
) -> Result<GhostEnergy<T>> {
    let [u1, u2] = spectral.gradient(state.u());
    let ut = spectral.interpolate(state.ut(), oversample)?;
    let u1 = spectral.interpolate(&u1, oversample)?;
    let u2 = spectral.interpolate(&u2, oversample)?;
    let grid = *ut.grid();
    let t = state.t();
    let half = T::lit(0.5);

    let mut weighted = T::zero();
    let mut flux = T::zero();
    for ((i, j), &vt) in ut.values().indexed_iter() {
        let (x1, x2) = (grid.coord(i), grid.coord(j));
        let g1 = u1.values()[[i, j]];
        let g2 = u2.values()[[i, j]];
        let r = x1.hypot(x2);
        let sigma = r - t;
        let eq = sigma.atan().exp();
        weighted = weighted + half * eq * (vt * vt + g1 * g1 + g2 * g2);
        let (w1, w2) = if r > T::zero() {
            (x1 / r, x2 / r)
        } else {
            let g = g1.hypot(g2);
            if g > T::zero() {
                (g1 / g, g2 / g)
            } else {
                (T::one(), T::zero())
            }
        };
        let a = w1 * vt + g1;
        let b = w2 * vt + g2;
        flux = flux + eq / (T::one() + sigma * sigma) * (a * a + b * b);
    }
    let area = grid.cell_area();
    Ok(GhostEnergy {
        weighted: weighted * area,
        flux: flux * area,
    })
}
