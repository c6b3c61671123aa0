//! Method-of-lines integration of □u = N(∂²u, ∂²u) on a periodic grid.
//!
//! The right-hand side depends on w = ∂ₜ²u itself through the (0,0) slot of the
//! space-time Hessian, so every stage solves w = Δu + N(H(w), H(w)) by Picard
//! iteration before taking the classical RK4 step on (u, ∂ₜu).

use ndarray::{Array2, Zip};

use crate::error::{Error, Result};
use crate::grid::{GridField, PeriodicGrid};
use crate::nullform::{Mat3, NullFormTensor};
use crate::scalar::Real;
use crate::spectral::Spectral;
use crate::transform::FullyNonlinearIVP;

/// Contraction factor above which the Picard branch is reported as ambiguous.
pub const AMBIGUITY_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub dt: T,
    pub picard_tol: T,
    pub picard_max: usize,
    pub dealias: bool,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(dt: T, picard_tol: T, picard_max: usize, dealias: bool) -> Result<Self> {
        let cfg = Self {
            dt,
            picard_tol,
            picard_max,
            dealias,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults: picard_tol = 1e−10, picard_max = 50, dealiasing on.
    pub fn with_dt(dt: T) -> Result<Self> {
        Self::new(dt, T::lit(1e-10), 50, true)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.picard_tol > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "picard_tol must be positive, got {}",
                self.picard_tol
            )));
        }
        if self.picard_max == 0 {
            return Err(Error::InvalidArgument(
                "picard_max must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// (t, u, ∂ₜu) on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState<T> {
    t: T,
    u: GridField<T>,
    ut: GridField<T>,
}

impl<T: Real> WaveState<T> {
    pub fn new(t: T, u: GridField<T>, ut: GridField<T>) -> Result<Self> {
        if !u.grid().same_as(ut.grid()) {
            return Err(Error::InvalidArgument(
                "u and ut must share one grid".into(),
            ));
        }
        if !(t >= T::zero()) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time must be finite and nonnegative, got {t}"
            )));
        }
        if !u.is_finite() || !ut.is_finite() {
            return Err(Error::InvalidArgument(
                "state contains non-finite values".into(),
            ));
        }
        Ok(Self { t, u, ut })
    }

    pub fn zeros(grid: PeriodicGrid<T>) -> Self {
        Self {
            t: T::zero(),
            u: GridField::zeros(grid),
            ut: GridField::zeros(grid),
        }
    }

    pub fn from_ivp(ivp: &FullyNonlinearIVP<T>) -> Self {
        Self {
            t: T::zero(),
            u: ivp.phi().clone(),
            ut: ivp.psi().clone(),
        }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn u(&self) -> &GridField<T> {
        &self.u
    }

    pub fn ut(&self) -> &GridField<T> {
        &self.ut
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        self.u.grid()
    }

    /// Same fields with ∂ₜu negated, for time-reversal checks.
    pub fn reversed(&self) -> Self {
        Self {
            t: self.t,
            u: self.u.clone(),
            ut: self.ut.scaled(-T::one()),
        }
    }

    pub fn at_time(mut self, t: T) -> Self {
        self.t = t;
        self
    }
}

/// Space-time Hessian ∂_α∂_β u stored as its six independent components.
#[derive(Clone, Debug)]
pub struct HessianField<T> {
    pub wtt: GridField<T>,
    pub wt1: GridField<T>,
    pub wt2: GridField<T>,
    pub w11: GridField<T>,
    pub w12: GridField<T>,
    pub w22: GridField<T>,
}

impl<T: Real> HessianField<T> {
    /// Spatial parts from u and ∂ₜu; `wtt` supplied by the caller.
    pub fn assemble(
        spectral: &Spectral<T>,
        u: &GridField<T>,
        ut: &GridField<T>,
        wtt: GridField<T>,
    ) -> Self {
        let [wt1, wt2] = spectral.gradient(ut);
        let [w11, w12, w22] = spectral.hessian(u);
        Self {
            wtt,
            wt1,
            wt2,
            w11,
            w12,
            w22,
        }
    }

    /// Symmetric 3×3 Hessian at grid point (i, j).
    pub fn at(&self, i: usize, j: usize) -> Mat3<T> {
        let p = [i, j];
        let tt = self.wtt.values()[p];
        let t1 = self.wt1.values()[p];
        let t2 = self.wt2.values()[p];
        let a = self.w11.values()[p];
        let b = self.w12.values()[p];
        let c = self.w22.values()[p];
        [[tt, t1, t2], [t1, a, b], [t2, b, c]]
    }
}

/// Result of the pointwise solve for ∂ₜ²u.
#[derive(Clone, Debug)]
pub struct UttSolution<T> {
    pub w: GridField<T>,
    pub iterations: usize,
    /// sup |∂/∂w of the fixed-point map| at the solution.
    pub contraction: T,
    pub ambiguous: bool,
}

/// Snapshot handed to the observer during [`WaveSolver::evolve`].
#[derive(Debug)]
pub struct Snapshot<'a, T> {
    pub step: usize,
    pub state: &'a WaveState<T>,
    pub w: &'a GridField<T>,
    /// Largest Picard count over all stages since the previous snapshot.
    pub picard_max_iters: usize,
    pub ambiguous: bool,
}

#[derive(Clone, Debug)]
pub struct EvolveOutcome<T> {
    pub state: WaveState<T>,
    pub steps: usize,
    pub picard_max_iters: usize,
}

/// Coefficients of the pointwise quadratic N(H(w),H(w)) = a₂w² + a₁w + a₀.
struct Quadratic<T> {
    a2: T,
    a1: Array2<T>,
    a0: Array2<T>,
}

#[derive(Clone, Debug)]
pub struct WaveSolver<T: Real> {
    tensor: NullFormTensor<T>,
    cfg: SolverConfig<T>,
    spectral: Spectral<T>,
    linear_weights: Mat3<T>,
}

impl<T: Real> WaveSolver<T> {
    pub fn new(
        tensor: NullFormTensor<T>,
        grid: PeriodicGrid<T>,
        cfg: SolverConfig<T>,
    ) -> Result<Self> {
        cfg.validate()?;
        let tensor = tensor.symmetrize();
        let mut linear_weights = [[T::zero(); 3]; 3];
        for (mu, row) in linear_weights.iter_mut().enumerate() {
            for (nu, w) in row.iter_mut().enumerate() {
                if (mu, nu) != (0, 0) {
                    *w = tensor.get(0, 0, mu, nu) + tensor.get(mu, nu, 0, 0);
                }
            }
        }
        Ok(Self {
            tensor,
            cfg,
            spectral: Spectral::new(grid),
            linear_weights,
        })
    }

    pub fn tensor(&self) -> &NullFormTensor<T> {
        &self.tensor
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.cfg
    }

    pub fn spectral(&self) -> &Spectral<T> {
        &self.spectral
    }

    pub fn grid(&self) -> &PeriodicGrid<T> {
        self.spectral.grid()
    }

    /// First or second spatial derivatives: order 1 gives [∂₁f, ∂₂f], order 2
    /// gives [∂₁₁f, ∂₁₂f, ∂₂₂f].
    pub fn spatial_derivatives(&self, f: &GridField<T>, order: u32) -> Result<Vec<GridField<T>>> {
        match order {
            1 => Ok(self.spectral.gradient(f).into()),
            2 => Ok(self.spectral.hessian(f).into()),
            _ => Err(Error::InvalidArgument(format!(
                "derivative order must be 1 or 2, got {order}"
            ))),
        }
    }

    fn filter(&self, f: GridField<T>) -> GridField<T> {
        if self.cfg.dealias {
            self.spectral.dealias(&f)
        } else {
            f
        }
    }

    fn quadratic(&self, hess: &HessianField<T>) -> Quadratic<T> {
        let n = self.grid().n();
        let mut a1 = Array2::zeros((n, n));
        let mut a0 = Array2::zeros((n, n));
        let lw = &self.linear_weights;
        Zip::indexed(&mut a1)
            .and(&mut a0)
            .for_each(|(i, j), a1, a0| {
                let mut k = hess.at(i, j);
                k[0][0] = T::zero();
                let mut lin = T::zero();
                for mu in 0..3 {
                    for nu in 0..3 {
                        lin = lin + lw[mu][nu] * k[mu][nu];
                    }
                }
                *a1 = lin;
                *a0 = self.tensor.contract(&k, &k);
            });
        Quadratic {
            a2: self.tensor.get(0, 0, 0, 0),
            a1,
            a0,
        }
    }

    /// Solves w = Δu + N(H(w), H(w)) with H(w)₀₀ = w, H₀ᵢ = ∂ᵢuₜ, Hᵢⱼ = ∂ᵢ∂ⱼu.
    ///
    /// Iterates w⁰ = Δu, wᵏ⁺¹ = Δu + P[N(H(wᵏ), H(wᵏ))], where P is the 2/3-rule
    /// filter when dealiasing is on and the identity otherwise, until
    /// sup|wᵏ⁺¹ − wᵏ| ≤ picard_tol·sup|wᵏ⁺¹|.
    pub fn solve_utt(&self, state: &WaveState<T>) -> Result<UttSolution<T>> {
        let lap = self.spectral.laplacian(&state.u);
        let hess = HessianField::assemble(&self.spectral, &state.u, &state.ut, lap.clone());
        let q = self.quadratic(&hess);
        let a2 = q.a2;
        let filtered_lap = self.filter(lap.clone());
        // Under the filter only P w enters the nonlinearity; P wᵏ⁺¹ = PΔu + P[N].
        let mut w = lap.clone();
        let mut w_in = filtered_lap.clone();
        let tol = self.cfg.picard_tol;
        for iteration in 1..=self.cfg.picard_max {
            let raw = Zip::from(w_in.values())
                .and(&q.a1)
                .and(&q.a0)
                .map_collect(|&x, &b, &c| a2 * x * x + b * x + c);
            let nl = self.filter(GridField::from_values_unchecked(*self.grid(), raw));
            let next = lap.zip_with(&nl, |a, b| a + b);
            let next_in = if self.cfg.dealias {
                filtered_lap.zip_with(&nl, |a, b| a + b)
            } else {
                next.clone()
            };
            let (change, worst) = max_diff_at(&next, &w);
            let scale = next.sup_abs();
            if !change.is_finite() || !scale.is_finite() {
                return Err(self.non_convergence(state.t, worst, change));
            }
            w = next;
            w_in = next_in;
            if change <= tol * scale {
                let contraction = Zip::from(w_in.values())
                    .and(&q.a1)
                    .fold(T::zero(), |m, &x, &b| {
                        m.max((T::lit(2.0) * a2 * x + b).abs())
                    });
                return Ok(UttSolution {
                    w,
                    iterations: iteration,
                    contraction,
                    ambiguous: contraction.to_f64_lossy() > AMBIGUITY_THRESHOLD,
                });
            }
            if iteration == self.cfg.picard_max {
                return Err(self.non_convergence(state.t, worst, change));
            }
        }
        unreachable!("picard_max >= 1 is validated")
    }

    fn non_convergence(&self, t: T, point: (usize, usize), residual: T) -> Error {
        Error::NonConvergence {
            t: t.to_f64_lossy(),
            point,
            residual: residual.to_f64_lossy(),
        }
    }

    fn check_step(&self, dt: T) -> Result<()> {
        let limit = T::lit(0.5) * self.grid().spacing();
        if dt > limit {
            return Err(Error::InvalidArgument(format!(
                "dt = {dt} exceeds the stability bound 0.5 h = {limit}"
            )));
        }
        Ok(())
    }

    fn check_grid(&self, state: &WaveState<T>) -> Result<()> {
        if !state.grid().same_as(self.grid()) {
            return Err(Error::InvalidArgument(
                "state grid does not match solver grid".into(),
            ));
        }
        Ok(())
    }

    /// One RK4 step of size `cfg.dt`.
    pub fn step(&self, state: &WaveState<T>) -> Result<WaveState<T>> {
        self.check_grid(state)?;
        let k1 = self.solve_utt(state)?;
        Ok(self.rk4(state, &k1.w, self.cfg.dt)?.0)
    }

    /// RK4 step reusing the stage-one solve `w1`; returns the new state and the
    /// largest Picard count over the three remaining stages.
    fn rk4(
        &self,
        s: &WaveState<T>,
        w1: &GridField<T>,
        dt: T,
    ) -> Result<(WaveState<T>, usize, bool)> {
        self.check_step(dt)?;
        let half = dt * T::lit(0.5);
        let stage = |t: T, u: GridField<T>, ut: GridField<T>| WaveState { t, u, ut };

        let s2 = stage(s.t + half, s.u.axpy(half, &s.ut), s.ut.axpy(half, w1));
        let k2 = self.solve_utt(&s2)?;
        let s3 = stage(s.t + half, s.u.axpy(half, &s2.ut), s.ut.axpy(half, &k2.w));
        let k3 = self.solve_utt(&s3)?;
        let s4 = stage(s.t + dt, s.u.axpy(dt, &s3.ut), s.ut.axpy(dt, &k3.w));
        let k4 = self.solve_utt(&s4)?;

        let sixth = dt / T::lit(6.0);
        let two = T::lit(2.0);
        let mut u = s.u.values().clone();
        Zip::from(&mut u)
            .and(s.ut.values())
            .and(s2.ut.values())
            .and(s3.ut.values())
            .and(s4.ut.values())
            .for_each(|u, &a, &b, &c, &d| *u = *u + sixth * (a + two * b + two * c + d));
        let mut ut = s.ut.values().clone();
        Zip::from(&mut ut)
            .and(w1.values())
            .and(k2.w.values())
            .and(k3.w.values())
            .and(k4.w.values())
            .for_each(|v, &a, &b, &c, &d| *v = *v + sixth * (a + two * b + two * c + d));
        let grid = *self.grid();
        let iters = k2.iterations.max(k3.iterations).max(k4.iterations);
        let ambiguous = k2.ambiguous || k3.ambiguous || k4.ambiguous;
        Ok((
            stage(
                s.t + dt,
                GridField::from_values_unchecked(grid, u),
                GridField::from_values_unchecked(grid, ut),
            ),
            iters,
            ambiguous,
        ))
    }

    /// Integrates from the IVP data to `t_end`, calling `observer` at step 0,
    /// every `report_every` steps and at the final time. The final step is
    /// shortened so the run stops exactly at `t_end`; times are computed as
    /// step·dt to avoid accumulated drift.
    pub fn evolve<F>(
        &self,
        ivp: &FullyNonlinearIVP<T>,
        t_end: T,
        report_every: usize,
        mut observer: F,
    ) -> Result<EvolveOutcome<T>>
    where
        F: FnMut(&Snapshot<'_, T>) -> Result<()>,
    {
        if !(t_end > T::zero()) || !t_end.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "t_end must be positive, got {t_end}"
            )));
        }
        if report_every == 0 {
            return Err(Error::InvalidArgument(
                "report_every must be at least 1".into(),
            ));
        }
        let dt = self.cfg.dt;
        self.check_step(dt)?;
        let mut state = WaveState::from_ivp(ivp);
        self.check_grid(&state)?;

        let ratio = (t_end / dt).to_f64_lossy();
        let steps = ((ratio - 1e-9).ceil() as usize).max(1);
        let mut pending_iters = 0usize;
        let mut pending_ambiguous = false;
        let mut overall = 0usize;
        for step in 0..=steps {
            let sol = self.solve_utt(&state)?;
            pending_iters = pending_iters.max(sol.iterations);
            pending_ambiguous |= sol.ambiguous;
            if step % report_every == 0 || step == steps {
                observer(&Snapshot {
                    step,
                    state: &state,
                    w: &sol.w,
                    picard_max_iters: pending_iters,
                    ambiguous: pending_ambiguous,
                })?;
                overall = overall.max(pending_iters);
                pending_iters = 0;
                pending_ambiguous = false;
            }
            if step == steps {
                break;
            }
            let t_next = if step + 1 == steps {
                t_end
            } else {
                T::from_index(step + 1) * dt
            };
            let (next, iters, ambiguous) = self.rk4(&state, &sol.w, t_next - state.t)?;
            pending_iters = pending_iters.max(iters);
            pending_ambiguous |= ambiguous;
            state = next.at_time(t_next);
        }
        Ok(EvolveOutcome {
            state,
            steps,
            picard_max_iters: overall,
        })
    }
}

fn max_diff_at<T: Real>(a: &GridField<T>, b: &GridField<T>) -> (T, (usize, usize)) {
    let mut best = T::zero();
    let mut at = (0, 0);
    for ((p, &x), &y) in a.values().indexed_iter().zip(b.values().iter()) {
        let d = (x - y).abs();
        if d > best || d.is_nan() {
            best = d;
            at = p;
            if d.is_nan() {
                break;
            }
        }
    }
    (best, at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn box_grid(n: usize) -> PeriodicGrid<f64> {
        PeriodicGrid::new(n, PI).unwrap()
    }

    fn cfg(dt: f64, dealias: bool) -> SolverConfig<f64> {
        SolverConfig::new(dt, 1e-12, 60, dealias).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(0.0, 1e-10, 5, true).is_err());
        assert!(SolverConfig::new(0.1, 0.0, 5, true).is_err());
        assert!(SolverConfig::new(0.1, 1e-10, 0, true).is_err());
        let d = SolverConfig::with_dt(0.1).unwrap();
        assert_eq!((d.picard_tol, d.picard_max, d.dealias), (1e-10, 50, true));
    }

    #[test]
    fn zero_tensor_gives_laplacian_in_one_iteration() {
        let g = box_grid(32);
        let solver = WaveSolver::new(NullFormTensor::zero(), g, cfg(0.05, true)).unwrap();
        let u = GridField::from_fn(g, |x, y| (x + y).sin() + (2.0 * x).cos() * y.sin());
        let state = WaveState::new(0.0, u.clone(), GridField::zeros(g)).unwrap();
        let sol = solver.solve_utt(&state).unwrap();
        assert_eq!(sol.iterations, 1);
        assert_eq!(sol.w, solver.spectral().laplacian(&u));
        assert_eq!(sol.contraction, 0.0);
    }

    #[test]
    fn prototype_fixed_point_matches_quadratic_formula() {
        let g = box_grid(32);
        let a = 0.1;
        let solver = WaveSolver::new(NullFormTensor::prototype(), g, cfg(0.05, false)).unwrap();
        let u = GridField::from_fn(g, |x, _| -a * x.cos());
        let state = WaveState::new(0.0, u, GridField::zeros(g)).unwrap();
        let sol = solver.solve_utt(&state).unwrap();
        let c = g.center_index();
        let expected = (1.0 - (1.0 - 4.0 * a).sqrt()) / 2.0;
        assert!((sol.w.values()[[c, c]] - expected).abs() < 1e-11);
        // Pointwise residual of w = Δu + N(H(w),H(w)).
        let lap = solver.spectral().laplacian(state.u());
        let hess = HessianField::assemble(solver.spectral(), state.u(), state.ut(), sol.w.clone());
        for ((i, j), &w) in sol.w.values().indexed_iter() {
            let h = hess.at(i, j);
            let r = w - lap.values()[[i, j]] - solver.tensor().contract(&h, &h);
            assert!(r.abs() <= 1e-10 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn prototype_without_real_root_fails() {
        let g = box_grid(32);
        for dealias in [false, true] {
            let solver =
                WaveSolver::new(NullFormTensor::prototype(), g, cfg(0.05, dealias)).unwrap();
            let u = GridField::from_fn(g, |x, _| -x.cos());
            let state = WaveState::new(1.5, u, GridField::zeros(g)).unwrap();
            match solver.solve_utt(&state) {
                Err(Error::NonConvergence { t, .. }) => assert_eq!(t, 1.5),
                other => panic!("expected NonConvergence, got {other:?}"),
            }
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = box_grid(16);
        let solver = WaveSolver::new(NullFormTensor::prototype(), g, cfg(0.1, true)).unwrap();
        let next = solver.step(&WaveState::zeros(g)).unwrap();
        assert_eq!(next.u().sup_abs(), 0.0);
        assert_eq!(next.ut().sup_abs(), 0.0);
        assert!((next.t() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn stability_guard() {
        let g = box_grid(16);
        let h = g.spacing();
        let solver = WaveSolver::new(NullFormTensor::zero(), g, cfg(0.6 * h, true)).unwrap();
        assert!(matches!(
            solver.step(&WaveState::zeros(g)),
            Err(Error::InvalidArgument(_))
        ));
    }

    fn standing_wave_error(dt: f64, t_end: f64) -> f64 {
        let g = box_grid(16);
        let solver = WaveSolver::new(NullFormTensor::zero(), g, cfg(dt, true)).unwrap();
        let phi = GridField::from_fn(g, |x, y| x.cos() * y.cos());
        let ivp = FullyNonlinearIVP::new(NullFormTensor::zero(), phi, GridField::zeros(g)).unwrap();
        let out = solver.evolve(&ivp, t_end, usize::MAX, |_| Ok(())).unwrap();
        assert!((out.state.t() - t_end).abs() < 1e-12);
        let exact = GridField::from_fn(g, |x, y| (2f64.sqrt() * t_end).cos() * x.cos() * y.cos());
        out.state.u().max_abs_diff(&exact)
    }

    #[test]
    fn standing_wave_fourth_order() {
        let e1 = standing_wave_error(0.1, 2.0);
        let e2 = standing_wave_error(0.05, 2.0);
        assert!(e1 < 1e-4);
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn final_step_lands_on_t_end() {
        let g = PeriodicGrid::new(16, 8.0).unwrap();
        let solver = WaveSolver::new(NullFormTensor::zero(), g, cfg(0.3, true)).unwrap();
        let ivp = FullyNonlinearIVP::new(
            NullFormTensor::zero(),
            GridField::zeros(g),
            GridField::zeros(g),
        )
        .unwrap();
        let mut times = Vec::new();
        let out = solver
            .evolve(&ivp, 1.0, 2, |s| {
                times.push((s.step, s.state.t()));
                Ok(())
            })
            .unwrap();
        assert_eq!(out.steps, 4);
        assert_eq!(times, vec![(0, 0.0), (2, 0.6), (4, 1.0)]);
    }

    #[test]
    fn linear_time_reversal() {
        let g = box_grid(32);
        let solver = WaveSolver::new(NullFormTensor::zero(), g, cfg(0.01, true)).unwrap();
        let phi = GridField::from_fn(g, |x, y| (-(x * x + y * y)).exp());
        let psi = GridField::from_fn(g, |x, y| x.sin() * (2.0 * y).cos());
        let ivp = FullyNonlinearIVP::new(NullFormTensor::zero(), phi.clone(), psi.clone()).unwrap();
        let fwd = solver
            .evolve(&ivp, 1.0, usize::MAX, |_| Ok(()))
            .unwrap()
            .state
            .reversed();
        let back_ivp =
            FullyNonlinearIVP::new(NullFormTensor::zero(), fwd.u().clone(), fwd.ut().clone())
                .unwrap();
        let back = solver
            .evolve(&back_ivp, 1.0, usize::MAX, |_| Ok(()))
            .unwrap()
            .state
            .reversed();
        assert!(back.u().max_abs_diff(&phi) < 1e-8);
        assert!(back.ut().max_abs_diff(&psi) < 1e-8);
    }

    #[test]
    fn f32_smoke() {
        let g = PeriodicGrid::<f32>::new(16, std::f32::consts::PI).unwrap();
        let solver = WaveSolver::new(
            NullFormTensor::prototype(),
            g,
            SolverConfig::new(0.1f32, 1e-6, 30, true).unwrap(),
        )
        .unwrap();
        let u = GridField::from_fn(g, |x, y| 0.01 * x.cos() * y.cos());
        let next = solver
            .step(&WaveState::new(0.0, u, GridField::zeros(g)).unwrap())
            .unwrap();
        assert!(next.u().is_finite());
    }
}
