//! Coefficient algebra of quadratic null forms N_{αβμν} ∂_α∂_β u ∂_μ∂_ν u in 2+1 dimensions.
//!
//! Indices run over {0, 1, 2} with 0 the time direction. The storage and the
//! purely algebraic operations (symmetrization, contraction, lifting of a
//! quasilinear form) are generic over any `Copy + Num` scalar, so they can be
//! checked exactly with rationals. The light-cone tests need trigonometry and
//! are only available for [`Real`] scalars.

use std::fmt;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense 3×3 matrix, used for pointwise space-time Hessians.
pub type Mat3<T> = [[T; 3]; 3];

/// Number of space-time indices.
pub const DIM: usize = 3;

#[inline]
fn flat(a: usize, b: usize, m: usize, n: usize) -> usize {
    ((a * DIM + b) * DIM + m) * DIM + n
}

fn all_indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..81).map(|i| (i / 27, (i / 9) % 3, (i / 3) % 3, i % 3))
}

/// Rank-4 coefficient array N_{αβμν}.
#[derive(Clone, PartialEq)]
pub struct NullFormTensor<T> {
    coeffs: [T; 81],
    symmetric: bool,
}

impl<T: Copy + Num> NullFormTensor<T> {
    pub fn zero() -> Self {
        Self {
            coeffs: [T::zero(); 81],
            symmetric: true,
        }
    }

    /// Builds a tensor from a generating function of the four indices.
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut coeffs = [T::zero(); 81];
        for (a, b, m, n) in all_indices() {
            coeffs[flat(a, b, m, n)] = f(a, b, m, n);
        }
        Self::from_coeffs(coeffs)
    }

    /// Builds a tensor from sparse `((α, β, μ, ν), value)` entries; repeated
    /// indices accumulate.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize, usize, usize), T)>,
    {
        let mut coeffs = [T::zero(); 81];
        for ((a, b, m, n), v) in entries {
            let i = flat(a, b, m, n);
            coeffs[i] = coeffs[i] + v;
        }
        Self::from_coeffs(coeffs)
    }

    fn from_coeffs(coeffs: [T; 81]) -> Self {
        let symmetric = all_indices().all(|(a, b, m, n)| {
            let c = coeffs[flat(a, b, m, n)];
            c == coeffs[flat(b, a, m, n)] && c == coeffs[flat(a, b, n, m)]
        });
        Self { coeffs, symmetric }
    }

    /// The nonlinearity of □u = |∂ₜ²u|² − |∂ₜ∇u|²: entries
    /// [0,0,0,0] = 1 and [0,1,0,1] = [0,2,0,2] = −1.
    pub fn prototype() -> Self {
        let one = T::one();
        let neg = T::zero() - one;
        Self::from_entries([
            ((0, 0, 0, 0), one),
            ((0, 1, 0, 1), neg),
            ((0, 2, 0, 2), neg),
        ])
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, m: usize, n: usize) -> T {
        self.coeffs[flat(a, b, m, n)]
    }

    pub fn coeffs(&self) -> &[T; 81] {
        &self.coeffs
    }

    /// Whether both pair symmetries hold entrywise.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Ñ = ¼(N_{αβμν} + N_{βαμν} + N_{αβνμ} + N_{βανμ}).
    pub fn symmetrize(&self) -> Self {
        let two = T::one() + T::one();
        let four = two * two;
        let mut coeffs = [T::zero(); 81];
        for (a, b, m, n) in all_indices() {
            // Sum in canonical index order so all four images get identical bits.
            let (a, b) = (a.min(b), a.max(b));
            let (m, n) = (m.min(n), m.max(n));
            let s = self.get(a, b, m, n)
                + self.get(b, a, m, n)
                + self.get(a, b, n, m)
                + self.get(b, a, n, m);
            coeffs[flat(a, b, m, n)] = s / four;
        }
        for (a, b, m, n) in all_indices() {
            coeffs[flat(a, b, m, n)] = coeffs[flat(a.min(b), a.max(b), m.min(n), m.max(n))];
        }
        Self::from_coeffs(coeffs)
    }

    /// Σ N_{αβμν} h_{αβ} k_{μν}.
    pub fn contract(&self, h: &Mat3<T>, k: &Mat3<T>) -> T {
        let mut acc = T::zero();
        for a in 0..DIM {
            for b in 0..DIM {
                let hab = h[a][b];
                let mut inner = T::zero();
                for m in 0..DIM {
                    for n in 0..DIM {
                        inner = inner + self.get(a, b, m, n) * k[m][n];
                    }
                }
                acc = acc + hab * inner;
            }
        }
        acc
    }

    /// Quartic form N_{αβμν} X_α X_β X_μ X_ν at an arbitrary space-time vector.
    pub fn quartic_form(&self, x: [T; 3]) -> T {
        let mut xx = [[T::zero(); 3]; 3];
        for a in 0..DIM {
            for b in 0..DIM {
                xx[a][b] = x[a] * x[b];
            }
        }
        self.contract(&xx, &xx)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs;
        for (c, o) in coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c = *c + *o;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut coeffs = self.coeffs;
        for c in coeffs.iter_mut() {
            *c = *c * s;
        }
        Self {
            coeffs,
            symmetric: self.symmetric,
        }
    }

    /// Nonzero entries in index order.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize, usize, usize), T)> {
        all_indices()
            .map(|ix| (ix, self.get(ix.0, ix.1, ix.2, ix.3)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

impl<T: Real> NullFormTensor<T> {
    /// Checked constructor from a dense coefficient array.
    pub fn new(coeffs: [T; 81]) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coefficient at flat index {i}"
            )));
        }
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// Degree-4 symbol on the light cone at X = (1, cos θ, sin θ).
    pub fn null_symbol(&self, d: ConeDirection<T>) -> T {
        self.quartic_form(d.point())
    }

    /// Null-condition test. The symbol θ ↦ N(X,X,X,X) is a trigonometric
    /// polynomial of degree ≤ 4, so its 16-point discrete Fourier transform
    /// recovers it exactly; the tensor is null iff every coefficient is below
    /// `tol · max|N|`.
    pub fn is_null(&self, tol: T) -> Result<bool> {
        check_tol(tol)?;
        let samples: Vec<T> = (0..16)
            .map(|j| self.null_symbol(ConeDirection::equispaced(j, 16)))
            .collect();
        Ok(fourier_magnitudes(&samples)
            .into_iter()
            .all(|c| c <= tol * self.max_abs()))
    }
}

impl<T: fmt::Debug + Copy + Num> fmt::Debug for NullFormTensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NullFormTensor")
            .field("nonzero", &self.nonzero_entries())
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Magnitudes |c_k|, k = 0..=n/2, of the normalized DFT of real samples.
fn fourier_magnitudes<T: Real>(samples: &[T]) -> Vec<T> {
    let n = samples.len();
    let nf = T::from_index(n);
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (T::zero(), T::zero());
            for (j, &f) in samples.iter().enumerate() {
                let phase = T::TAU() * T::from_index((j * k) % n) / nf;
                re = re + f * phase.cos();
                im = im - f * phase.sin();
            }
            (re * re + im * im).sqrt() / nf
        })
        .collect()
}

/// Quasilinear nonlinearity A_l ∂_l (N_{μδ} ∂_μ v ∂_δ v): a direction A and a
/// symmetric form m = N_{μδ}.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiNullForm<T> {
    pub a: [T; 3],
    pub m: Mat3<T>,
}

impl<T: Copy + Num> QuasiNullForm<T> {
    /// Requires `m` to be exactly symmetric.
    pub fn new(a: [T; 3], m: Mat3<T>) -> Result<Self> {
        for i in 0..DIM {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "form m is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { a, m })
    }

    /// Minkowski form diag(1, −1, −1) along A = (1, 0, 0), i.e. ∂ₜ(|∂ₜv|² − |∇v|²).
    pub fn prototype() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            a: [o, z, z],
            m: [[o, z, z], [z, z - o, z], [z, z, z - o]],
        }
    }

    /// A = 0 reduces the equation to the linear wave equation.
    pub fn is_degenerate(&self) -> bool {
        self.a.iter().all(|c| c.is_zero())
    }

    /// T_{αβγδ} = A_α A_γ m_{βδ}, so that contracting twice with the Hessian
    /// gives A_λ A_ν N_{μδ} ∂²_{λμ}u ∂²_{νδ}u.
    pub fn lift(&self) -> NullFormTensor<T> {
        NullFormTensor::from_fn(|a, b, g, d| self.a[a] * self.a[g] * self.m[b][d])
    }

    /// m(X, X).
    pub fn quadratic_form(&self, x: [T; 3]) -> T {
        let mut acc = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                acc = acc + self.m[i][j] * x[i] * x[j];
            }
        }
        acc
    }
}

impl<T: Real> QuasiNullForm<T> {
    /// m(X, X) vanishes on the cone; degree ≤ 2 in θ, so 8 samples suffice.
    pub fn is_null(&self, tol: T) -> Result<bool> {
        check_tol(tol)?;
        let scale = self
            .m
            .iter()
            .flatten()
            .fold(T::zero(), |acc, c| acc.max(c.abs()));
        let samples: Vec<T> = (0..8)
            .map(|j| self.quadratic_form(ConeDirection::equispaced(j, 8).point()))
            .collect();
        Ok(fourier_magnitudes(&samples)
            .into_iter()
            .all(|c| c <= tol * scale))
    }
}

/// Free-function spelling of [`NullFormTensor::symmetrize`].
pub fn symmetrize<T: Copy + Num>(n: &NullFormTensor<T>) -> NullFormTensor<T> {
    n.symmetrize()
}

/// Free-function spelling of [`QuasiNullForm::lift`].
pub fn lift_quasi<T: Copy + Num>(q: &QuasiNullForm<T>) -> NullFormTensor<T> {
    q.lift()
}

/// Direction X = (1, cos θ, sin θ) on the forward light cone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeDirection<T> {
    theta: T,
}

impl<T: Real> ConeDirection<T> {
    /// Angle reduced to [0, 2π).
    pub fn new(theta: T) -> Self {
        let tau = T::TAU();
        let mut t = theta % tau;
        if t < T::zero() {
            t = t + tau;
        }
        Self { theta: t }
    }

    /// j-th of `count` equispaced directions.
    pub fn equispaced(j: usize, count: usize) -> Self {
        Self::new(T::TAU() * T::from_index(j) / T::from_index(count))
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn point(&self) -> [T; 3] {
        [T::one(), self.theta.cos(), self.theta.sin()]
    }
}

/// Gradient split ∂u = Y⁻ D⁻u + R with Y⁻ = (1, −ω).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameSplit<T> {
    /// D⁻u = (∂ₜu − ∂ᵣu)/2, the transversal ("bad") derivative.
    pub dminus: T,
    /// Remainder R u collecting the derivatives tangent to the cone.
    pub good: [T; 3],
}

impl<T: Real> FrameSplit<T> {
    pub fn reconstruct(&self, omega: [T; 2]) -> [T; 3] {
        let y = [T::one(), -omega[0], -omega[1]];
        [
            y[0] * self.dminus + self.good[0],
            y[1] * self.dminus + self.good[1],
            y[2] * self.dminus + self.good[2],
        ]
    }
}

/// Decomposes a space-time gradient (uₜ, u₁, u₂) along the radial direction ω.
pub fn frame_decompose<T: Real>(grad: [T; 3], omega: [T; 2]) -> Result<FrameSplit<T>> {
    let norm = (omega[0] * omega[0] + omega[1] * omega[1]).sqrt();
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if !((norm - T::one()).abs() <= tol) {
        return Err(Error::InvalidArgument(format!(
            "omega must be a unit vector, |omega| = {norm}"
        )));
    }
    let half = T::lit(0.5);
    let dminus = half * (grad[0] - (omega[0] * grad[1] + omega[1] * grad[2]));
    let y = [T::one(), -omega[0], -omega[1]];
    let good = [
        grad[0] - y[0] * dminus,
        grad[1] - y[1] * dminus,
        grad[2] - y[2] * dminus,
    ];
    Ok(FrameSplit { dminus, good })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut impl Rng) -> NullFormTensor<f64> {
        NullFormTensor::from_fn(|_, _, _, _| rng.gen_range(-1.0..1.0))
    }

    fn random_sym(rng: &mut impl Rng) -> Mat3<f64> {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let v = rng.gen_range(-1.0..1.0);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        m
    }

    // Independent 81-term loop, written without the row-inner factorization.
    fn naive_contract(n: &NullFormTensor<f64>, h: &Mat3<f64>, k: &Mat3<f64>) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                for m in 0..3 {
                    for nn in 0..3 {
                        s += n.coeffs()[27 * a + 9 * b + 3 * m + nn] * h[a][b] * k[m][nn];
                    }
                }
            }
        }
        s
    }

    #[test]
    fn symmetrize_zero_and_single_entry() {
        let z = NullFormTensor::<f64>::zero().symmetrize();
        assert!(z.coeffs().iter().all(|&c| c == 0.0));
        assert!(z.is_symmetric());

        let n = NullFormTensor::from_entries([((0, 1, 0, 0), 2.0)]);
        assert!(!n.is_symmetric());
        let s = n.symmetrize();
        assert!(s.is_symmetric());
        assert_eq!(s.get(0, 1, 0, 0), 1.0);
        assert_eq!(s.get(1, 0, 0, 0), 1.0);
        assert_eq!(s.nonzero_entries().len(), 2);
    }

    #[test]
    fn symmetrize_is_idempotent_and_exact_over_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = NullFormTensor::from_fn(|_, _, _, _| {
            Ratio::new(rng.gen_range(-50i64..50), rng.gen_range(1i64..9))
        });
        let s = n.symmetrize();
        assert_eq!(s.symmetrize(), s);
        let h = [
            [Ratio::from(1), Ratio::new(1, 2), Ratio::from(3)],
            [Ratio::new(1, 2), Ratio::from(-2), Ratio::new(5, 7)],
            [Ratio::from(3), Ratio::new(5, 7), Ratio::from(0)],
        ];
        let k = [
            [Ratio::from(2), Ratio::from(-1), Ratio::new(1, 3)],
            [Ratio::from(-1), Ratio::new(4, 9), Ratio::from(1)],
            [Ratio::new(1, 3), Ratio::from(1), Ratio::from(-6)],
        ];
        assert_eq!(n.contract(&h, &k), s.contract(&h, &k));
    }

    #[test]
    fn symmetrization_preserves_contraction_on_random_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = random_tensor(&mut rng);
            let s = n.symmetrize();
            let (h, k) = (random_sym(&mut rng), random_sym(&mut rng));
            let before = naive_contract(&n, &h, &k);
            let after = naive_contract(&s, &h, &k);
            assert!((before - after).abs() <= 1e-12 * before.abs().max(1.0));
        }
    }

    #[test]
    fn contract_examples() {
        let p = NullFormTensor::<f64>::prototype();
        let mut h = [[0.0; 3]; 3];
        h[0][0] = 1.0;
        assert_eq!(p.contract(&h, &h), 1.0);
        let zero = [[0.0; 3]; 3];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = random_tensor(&mut rng);
        assert_eq!(n.contract(&zero, &random_sym(&mut rng)), 0.0);
        for _ in 0..200 {
            let (h, k) = (random_sym(&mut rng), random_sym(&mut rng));
            let oracle = naive_contract(&n, &h, &k);
            assert!((n.contract(&h, &k) - oracle).abs() <= 1e-14 * oracle.abs().max(1.0));
        }
    }

    #[test]
    fn symbol_examples() {
        let p = NullFormTensor::<f64>::prototype();
        let e = NullFormTensor::from_entries([((0, 0, 0, 0), 1.0)]);
        for j in 0..37 {
            let d = ConeDirection::new(0.17 * j as f64);
            assert!(p.null_symbol(d).abs() < 1e-15);
            assert!((e.null_symbol(d) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn lifted_symbol_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let q = QuasiNullForm::new(
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ],
                random_sym(&mut rng),
            )
            .unwrap();
            let lift = q.lift();
            let d = ConeDirection::new(rng.gen_range(0.0..6.3));
            let x = d.point();
            let ax = q.a[0] * x[0] + q.a[1] * x[1] + q.a[2] * x[2];
            let mut mxx = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    mxx += q.m[i][j] * x[i] * x[j];
                }
            }
            let direct = ax * ax * mxx;
            assert!((lift.null_symbol(d) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn is_null_examples() {
        assert!(NullFormTensor::<f64>::zero().is_null(1e-10).unwrap());
        assert!(NullFormTensor::<f64>::prototype().is_null(1e-10).unwrap());
        assert!(!NullFormTensor::from_entries([((0, 0, 0, 0), 1.0)])
            .is_null(1e-10)
            .unwrap());
        assert!(matches!(
            NullFormTensor::<f64>::zero().is_null(0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(NullFormTensor::<f64>::zero().is_null(-1.0).is_err());
    }

    #[test]
    fn null_verdict_is_scale_invariant() {
        let p = NullFormTensor::<f64>::prototype();
        let e = NullFormTensor::from_entries([((0, 0, 0, 0), 1.0)]);
        for s in [1e-8, 1e-3, 1.0, 1e5] {
            assert!(p.scale(s).is_null(1e-10).unwrap());
            assert!(!e.scale(s).is_null(1e-10).unwrap());
        }
    }

    #[test]
    fn quasi_null_examples() {
        let z = [0.0; 3];
        let mink = QuasiNullForm::<f64>::prototype();
        assert!(mink.is_null(1e-12).unwrap());
        let id = QuasiNullForm::new(
            [1.0, 0.0, 0.0],
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        )
        .unwrap();
        assert!(!id.is_null(1e-12).unwrap());
        let zero = QuasiNullForm::new([1.0, 0.0, 0.0], [z; 3]).unwrap();
        assert!(zero.is_null(1e-12).unwrap());
        assert!(QuasiNullForm::new(
            [1.0, 0.0, 0.0],
            [[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
        )
        .is_err());
    }

    #[test]
    fn lift_examples() {
        let lifted = QuasiNullForm::<f64>::prototype().lift();
        assert_eq!(lifted, NullFormTensor::prototype());
        let degenerate = QuasiNullForm::new(
            [0.0; 3],
            [[1.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 3.0]],
        )
        .unwrap();
        assert!(degenerate.is_degenerate());
        assert!(degenerate.lift().coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn frame_examples() {
        let w = [0.6f64, 0.8];
        let out = frame_decompose([-1.0, w[0], w[1]], w).unwrap();
        assert!((out.dminus + 1.0).abs() < 1e-15);
        assert!(out.good.iter().all(|g| g.abs() < 1e-15));

        let inc = frame_decompose([1.0, w[0], w[1]], w).unwrap();
        assert!(inc.dminus.abs() < 1e-15);
        assert_eq!(inc.good, [1.0, w[0], w[1]]);

        assert!(frame_decompose([1.0, 0.0, 0.0], [1.0, 1.0]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let th: f64 = rng.gen_range(0.0..6.3);
            let om = [th.cos(), th.sin()];
            let g = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let back = frame_decompose(g, om).unwrap().reconstruct(om);
            for i in 0..3 {
                assert!((back[i] - g[i]).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn cone_direction_wraps() {
        let d = ConeDirection::new(-0.5_f64);
        assert!(d.theta() >= 0.0 && d.theta() < std::f64::consts::TAU);
        let x = d.point();
        assert!((x[0] * x[0] - x[1] * x[1] - x[2] * x[2]).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let p = NullFormTensor::<f32>::prototype().symmetrize();
        assert!(p.is_null(1e-5).unwrap());
        assert!(!NullFormTensor::<f32>::from_entries([((0, 0, 0, 0), 1.0)])
            .is_null(1e-5)
            .unwrap());
    }
}
