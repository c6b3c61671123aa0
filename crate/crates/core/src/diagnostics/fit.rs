//! Power-law fits of energy series and the weighted initial-data norm.

use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::scalar::Real;
use crate::spectral::Spectral;

/// Least-squares fit log E = log C + γ log t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub gamma_hat: f64,
    pub t_window: (f64, f64),
    /// Sum of squared residuals of log E.
    pub residual: f64,
}

/// Fits all samples; requires at least 8 points, all with t ≥ 1 and E > 0.
pub fn fit_growth(series: &[(f64, f64)]) -> Result<DecayFit> {
    if series.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "growth fit needs at least 8 samples, got {}",
            series.len()
        )));
    }
    if let Some(&(t, _)) = series.iter().find(|(t, _)| !(*t >= 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "growth fit needs t >= 1, got t = {t}"
        )));
    }
    if let Some(&(t, e)) = series.iter().find(|(_, e)| !(*e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy must be positive, got {e} at t = {t}"
        )));
    }
    let n = series.len() as f64;
    let xs: Vec<f64> = series.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|(_, e)| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "growth fit needs at least two distinct times".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let (t0, t1) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(t, _)| {
            (a.min(t), b.max(t))
        });
    Ok(DecayFit {
        gamma_hat: slope,
        t_window: (t0, t1),
        residual,
    })
}

/// Fits the samples with t₀ ≤ t ≤ t₁.
pub fn fit_growth_window(series: &[(f64, f64)], t0: f64, t1: f64) -> Result<DecayFit> {
    if !(t0 >= 1.0 && t1 > t0) {
        return Err(Error::InvalidArgument(format!(
            "invalid fit window ({t0}, {t1})"
        )));
    }
    let eps = 1e-9 * t1;
    let window: Vec<_> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= t0 - eps && t <= t1 + eps)
        .collect();
    fit_growth(&window)
}

/// Σ_{|a|≤k−1} (‖∇Λᵃφ‖ + ‖Λᵃψ‖) with Λ = {∂₁, ∂₂, x·∇, Ω}, all derivatives spectral.
pub fn hk_lambda_norm<T: Real>(phi: &GridField<T>, psi: &GridField<T>, k: u32) -> Result<T> {
    if !phi.grid().same_as(psi.grid()) {
        return Err(Error::InvalidArgument(
            "phi and psi must share one grid".into(),
        ));
    }
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be 1 or 2, got {k}")));
    }
    let sp = Spectral::new(*phi.grid());
    let grad_norm = |f: &GridField<T>| {
        let [a, b] = sp.gradient(f);
        (a.l2_norm().powi(2) + b.l2_norm().powi(2)).sqrt()
    };
    let mut total = grad_norm(phi) + psi.l2_norm();
    if k == 2 {
        let x1 = GridField::from_fn(*phi.grid(), |x, _| x);
        let x2 = GridField::from_fn(*phi.grid(), |_, y| y);
        let lambdas = |f: &GridField<T>| -> [GridField<T>; 4] {
            let [d1, d2] = sp.gradient(f);
            let radial = x1
                .zip_with(&d1, |x, d| x * d)
                .zip_with(&x2.zip_with(&d2, |y, d| y * d), |a, b| a + b);
            let rot = x1
                .zip_with(&d2, |x, d| x * d)
                .zip_with(&x2.zip_with(&d1, |y, d| y * d), |a, b| a - b);
            [d1, d2, radial, rot]
        };
        for (lp, ls) in lambdas(phi).iter().zip(lambdas(psi).iter()) {
            total = total + grad_norm(lp) + ls.l2_norm();
        }
    }
    Ok(total)
}
