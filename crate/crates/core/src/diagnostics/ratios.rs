//! Pointwise weighted-decay quotients.

use super::{apply_gamma, apply_to_jet, GammaContext, VectorField};
use crate::nullform::NullFormTensor;
use crate::scalar::{bracket, Real};

/// Denominators of [`lemma31_ratio`] below this fraction of their maximum over
/// the exterior region are skipped; there both sides are rounding noise.
pub const LEMMA31_FLOOR: f64 = 1e-6;

/// A quotient together with a flag raised when its denominator vanished.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio<T> {
    pub value: T,
    pub degenerate: bool,
}

impl<T: Real> Ratio<T> {
    fn new(num: T, den: T) -> Self {
        if den > T::zero() {
            Self {
                value: num / den,
                degenerate: false,
            }
        } else {
            Self {
                value: T::zero(),
                degenerate: true,
            }
        }
    }
}

fn is_center<T: Real>(ctx: &GammaContext<T>, i: usize, j: usize) -> bool {
    let c = ctx.grid().center_index();
    i == c && j == c
}

/// sup ⟨t+r⟩^½⟨t−r⟩^½|u| over Σ_{|a|≤2}‖Γᵃu‖, with Γᵃ ranging over all 57
/// compositions of at most two fields. The centre cell is excluded.
pub fn ks_ratio<T: Real>(ctx: &GammaContext<T>) -> Ratio<T> {
    let grid = *ctx.grid();
    let t = ctx.t;
    let mut num = T::zero();
    for ((i, j), &u) in ctx.u.values().indexed_iter() {
        if is_center(ctx, i, j) {
            continue;
        }
        let r = grid.coord(i).hypot(grid.coord(j));
        num = num.max((bracket(t + r) * bracket(t - r)).sqrt() * u.abs());
    }
    let mut den = ctx.u.l2_norm();
    for a in VectorField::ALL {
        let jet = apply_gamma(ctx, a);
        den = den + jet.value.l2_norm();
        for b in VectorField::ALL {
            den = den + apply_to_jet(ctx, &jet, b).l2_norm();
        }
    }
    Ratio::new(num, den)
}

/// sup |(t+r)(∂ₜ+∂ᵣ)u| / (Σ_Γ|Γu| + 2|u|) over the grid minus the centre cell.
///
/// Since (t+r)(∂ₜ+∂ᵣ) = S̃ + 2 + ω₁L₁ + ω₂L₂, the quotient is at most one.
pub fn good_derivative_check<T: Real>(ctx: &GammaContext<T>) -> Ratio<T> {
    let grid = *ctx.grid();
    let gammas: Vec<_> = VectorField::ALL
        .iter()
        .map(|&f| apply_gamma(ctx, f).value)
        .collect();
    let two = T::lit(2.0);
    let mut best = T::zero();
    let mut any = false;
    for ((i, j), &u) in ctx.u.values().indexed_iter() {
        if is_center(ctx, i, j) {
            continue;
        }
        let (x1, x2) = (grid.coord(i), grid.coord(j));
        let r = x1.hypot(x2);
        let radial = (x1 * ctx.du[0].values()[[i, j]] + x2 * ctx.du[1].values()[[i, j]]) / r;
        let num = ((ctx.t + r) * (ctx.ut.values()[[i, j]] + radial)).abs();
        let den = gammas
            .iter()
            .fold(two * u.abs(), |a, g| a + g.values()[[i, j]].abs());
        if den > T::zero() {
            any = true;
            best = best.max(num / den);
        }
    }
    Ratio {
        value: best,
        degenerate: !any,
    }
}

/// sup over r ≥ ⟨t⟩/2 of r|N(∂²u,∂²u)| / (Σ_Γ|∂Γu| + |∂u|)².
pub fn lemma31_ratio<T: Real>(ctx: &GammaContext<T>, tensor: &NullFormTensor<T>) -> Ratio<T> {
    let grid = *ctx.grid();
    let jets: Vec<_> = VectorField::ALL
        .iter()
        .map(|&f| apply_gamma(ctx, f))
        .collect();
    let base = ctx.base_jet();
    let norm3 = |g: &[crate::grid::GridField<T>; 3], i: usize, j: usize| {
        g.iter()
            .fold(T::zero(), |a, f| a + f.values()[[i, j]].powi(2))
            .sqrt()
    };
    let rmin = bracket(ctx.t) * T::lit(0.5);

    let mut candidates = Vec::new();
    let mut den_max = T::zero();
    for i in 0..grid.n() {
        for j in 0..grid.n() {
            let r = grid.coord(i).hypot(grid.coord(j));
            if r < rmin {
                continue;
            }
            let s = jets
                .iter()
                .fold(norm3(&base.grad, i, j), |a, jet| a + norm3(&jet.grad, i, j));
            let den = s * s;
            den_max = den_max.max(den);
            candidates.push((i, j, r, den));
        }
    }
    if den_max == T::zero() {
        return Ratio {
            value: T::zero(),
            degenerate: true,
        };
    }
    let floor = den_max * T::lit(LEMMA31_FLOOR);
    let v = |f: &crate::grid::GridField<T>, i: usize, j: usize| f.values()[[i, j]];
    let mut best = T::zero();
    for (i, j, r, den) in candidates {
        if den < floor {
            continue;
        }
        let (p1, p2) = (v(&ctx.dut[0], i, j), v(&ctx.dut[1], i, j));
        let (a, b, c) = (
            v(&ctx.hess[0], i, j),
            v(&ctx.hess[1], i, j),
            v(&ctx.hess[2], i, j),
        );
        let h = [[v(&ctx.w, i, j), p1, p2], [p1, a, b], [p2, b, c]];
        best = best.max(r * tensor.contract(&h, &h).abs() / den);
    }
    Ratio {
        value: best,
        degenerate: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridField, PeriodicGrid};
    use crate::solver::WaveState;
    use crate::spectral::Spectral;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(t: f64, u: GridField<f64>, ut: GridField<f64>, w: GridField<f64>) -> GammaContext<f64> {
        let g = *u.grid();
        GammaContext::new(&Spectral::new(g), &WaveState::new(t, u, ut).unwrap(), &w)
    }

    fn smooth_random(g: PeriodicGrid<f64>, rng: &mut ChaCha8Rng) -> GridField<f64> {
        let c: Vec<(f64, f64, f64)> = (0..4)
            .map(|_| {
                (
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        GridField::from_fn(g, |x, y| {
            c.iter()
                .map(|&(a, b, s)| s * (-((x - a).powi(2) + (y - b).powi(2)) / 2.0).exp())
                .sum()
        })
    }

    #[test]
    fn zero_state_ratios() {
        let g = PeriodicGrid::new(16, 3.0).unwrap();
        let z = GridField::zeros(g);
        let c = ctx(0.0, z.clone(), z.clone(), z);
        let ks = ks_ratio(&c);
        assert_eq!(ks.value, 0.0);
        assert!(ks.degenerate);
        assert_eq!(good_derivative_check(&c).value, 0.0);
        assert_eq!(lemma31_ratio(&c, &NullFormTensor::prototype()).value, 0.0);
    }

    #[test]
    fn good_derivative_identity_and_bound() {
        let g = PeriodicGrid::new(64, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in [0.0, 0.7, 3.0] {
            let c = ctx(
                t,
                smooth_random(g, &mut rng),
                smooth_random(g, &mut rng),
                smooth_random(g, &mut rng),
            );
            assert!(good_derivative_check(&c).value <= 1.0 + 1e-6);
            let s = apply_gamma(&c, VectorField::ScalingMod).value;
            let l1 = apply_gamma(&c, VectorField::L1).value;
            let l2 = apply_gamma(&c, VectorField::L2).value;
            let scale = c.u.sup_abs() + c.ut.sup_abs() + s.sup_abs();
            for ((i, j), &u) in c.u.values().indexed_iter() {
                let (x1, x2) = (g.coord(i), g.coord(j));
                let r = x1.hypot(x2);
                if r == 0.0 {
                    continue;
                }
                let lhs = (t + r)
                    * (c.ut.values()[[i, j]]
                        + (x1 * c.du[0].values()[[i, j]] + x2 * c.du[1].values()[[i, j]]) / r);
                let rhs = s.values()[[i, j]]
                    + 2.0 * u
                    + (x1 * l1.values()[[i, j]] + x2 * l2.values()[[i, j]]) / r;
                assert!((lhs - rhs).abs() <= 1e-10 * scale * (1.0 + t + r));
            }
        }
    }

    #[test]
    fn ks_ratio_at_time_zero_matches_direct_evaluation() {
        let g = PeriodicGrid::new(32, 6.0f64).unwrap();
        let u = GridField::from_fn(g, |x, y| (-(x * x + y * y) / 2.0).exp());
        let z = GridField::zeros(g);
        let c = ctx(0.0, u.clone(), z.clone(), z);
        let ks = ks_ratio(&c);
        let mut num: f64 = 0.0;
        for ((i, j), &v) in u.values().indexed_iter() {
            if (i, j) != (16, 16) {
                let r = g.coord(i).hypot(g.coord(j));
                num = num.max((1.0 + r * r).sqrt() * v.abs());
            }
        }
        assert!(ks.value > 0.0 && !ks.degenerate);
        // With ut = w = 0 at t = 0 the denominator is at least ‖u‖ + ‖∂₁u‖ + ‖∂₂u‖.
        let sp = Spectral::new(g);
        let [d1, d2] = sp.gradient(&u);
        assert!(ks.value <= num / (u.l2_norm() + d1.l2_norm() + d2.l2_norm()));
    }
}
