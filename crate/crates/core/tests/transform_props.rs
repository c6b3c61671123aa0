use std::f64::consts::PI;

use proptest::prelude::*;

use nullwave::transform::{
    case_b_operator, case_b_rhs, prototype_rhs, reconstruct_v, transform_case_a, transform_case_b,
    transform_prototype,
};
use nullwave::{GridField, PeriodicGrid, QuasiNullForm, QuasilinearIVP, Spectral};

/// Smooth periodic data from a few low Fourier modes.
fn modes() -> impl Strategy<Value = Vec<(i32, i32, f64, f64)>> {
    prop::collection::vec((-3i32..=3, -3i32..=3, -1.0..1.0f64, 0.0..6.3f64), 1..5)
}

fn band_limited(g: PeriodicGrid<f64>, m: &[(i32, i32, f64, f64)]) -> GridField<f64> {
    GridField::from_fn(g, |x, y| {
        m.iter()
            .map(|&(k1, k2, a, p)| a * (k1 as f64 * x + k2 as f64 * y + p).cos())
            .sum()
    })
}

fn symmetric() -> impl Strategy<Value = [[f64; 3]; 3]> {
    prop::array::uniform6(-1.0..1.0f64)
        .prop_map(|[a, b, c, d, e, f]| [[a, b, c], [b, d, e], [c, e, f]])
}

/// A with A₁² + A₂² ≤ 0.8·A₀², so the elliptic operator stays uniformly elliptic.
fn elliptic_direction() -> impl Strategy<Value = [f64; 3]> {
    (
        prop_oneof![-2.0..-0.5f64, 0.5..2.0f64],
        0.0..0.8f64,
        0.0..6.3f64,
    )
        .prop_map(|(a0, s, th)| {
            [
                a0,
                a0.abs() * s.sqrt() * th.cos(),
                a0.abs() * s.sqrt() * th.sin(),
            ]
        })
}

fn rel(a: &GridField<f64>, b: &GridField<f64>) -> f64 {
    a.axpy(-1.0, b).l2_norm() / b.l2_norm().max(1e-300)
}

fn zero_mean(f: &GridField<f64>) -> GridField<f64> {
    let m = f.mean();
    f.map(|v| v - m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn case_b_round_trip_and_elliptic_residual(
        a in elliptic_direction(),
        m in symmetric(),
        m0 in modes(),
        m1 in modes(),
        scale in 0.01..0.5f64,
    ) {
        let g = PeriodicGrid::new(32, PI).unwrap();
        let form = QuasiNullForm::new(a, m).unwrap();
        let v0 = band_limited(g, &m0).scaled(scale);
        let v1 = band_limited(g, &m1).scaled(scale);
        let ivp = QuasilinearIVP::new(form.clone(), v0.clone(), v1.clone()).unwrap();
        let out = transform_case_b(&ivp, &v1).unwrap();
        let back = reconstruct_v(out.ivp.phi(), out.ivp.psi(), &form).unwrap();
        prop_assert!(rel(&back, &v0) <= 1e-10, "round trip {}", rel(&back, &v0));
        let rhs = zero_mean(&case_b_rhs(&form, &v0, &v1));
        if rhs.l2_norm() > 1e-12 {
            let lhs = case_b_operator(a, out.ivp.phi());
            prop_assert!(rel(&lhs, &rhs) <= 1e-10, "elliptic {}", rel(&lhs, &rhs));
        }
        prop_assert!(out.ivp.tensor().is_symmetric());
    }

    #[test]
    fn prototype_poisson_residual(m0 in modes(), m1 in modes(), scale in 0.01..0.5f64) {
        let g = PeriodicGrid::new(32, PI).unwrap();
        let v0 = band_limited(g, &m0).scaled(scale);
        let v1 = band_limited(g, &m1).scaled(scale);
        let out = transform_prototype(&v0, &v1).unwrap();
        prop_assert_eq!(out.ivp.psi(), &v0);
        let rhs = zero_mean(&prototype_rhs(&v0, &v1));
        let lhs = Spectral::new(g).laplacian(out.ivp.phi()).scaled(-1.0);
        prop_assert!(rel(&lhs, &rhs) <= 1e-10);
    }

    /// With v₀ = A₁∂₁g + A₂∂₂g for a centred Gaussian g, the line integral is g.
    /// Slopes are kept ≤ 1 so the bump stays resolved along the slanted lines.
    #[test]
    fn case_a_recovers_directional_antiderivative(
        a1 in prop_oneof![-2.0..-0.5f64, 0.5..2.0f64],
        slope in -1.0..1.0f64,
        width in 0.8..1.2f64,
    ) {
        let a2 = a1 * slope;
        let g = PeriodicGrid::new(256, 8.0).unwrap();
        let gauss = GridField::from_fn(g, |x, y| (-(x * x + y * y) / (width * width)).exp());
        let spectral = Spectral::new(g);
        let [d1, d2] = spectral.gradient(&gauss);
        let v0 = d1.scaled(a1).axpy(a2, &d2);
        let form = QuasiNullForm::new([0.0, a1, a2], QuasiNullForm::<f64>::prototype().m).unwrap();
        let ivp = QuasilinearIVP::new(form.clone(), v0.clone(), GridField::zeros(g)).unwrap();
        let out = transform_case_a(&ivp).unwrap();
        let err = out.ivp.phi().max_abs_diff(&gauss);
        prop_assert!(err <= 1e-5, "phi error {err}");
        // A_i ∂_i φ = v₀ at t = 0.
        let back = reconstruct_v(out.ivp.phi(), out.ivp.psi(), &form).unwrap();
        prop_assert!(back.max_abs_diff(&v0) <= 1e-4 * v0.sup_abs());
    }
}
