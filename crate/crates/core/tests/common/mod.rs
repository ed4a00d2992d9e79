//! Reference computations that avoid the crate's eigendecomposition path.
#![allow(dead_code)]

use qfisher::{CMatrix, CVector, Complex, Scenario};

/// `exp(−iHθ)` by scaling and squaring of a Taylor series.
pub fn expm_taylor(h: &CMatrix, theta: f64) -> CMatrix {
    let n = h.nrows();
    let a = h * Complex::new(0.0, -theta);
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = &a / Complex::new(2f64.powi(squarings as i32), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &scaled / Complex::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `p_k(θ) = |⟨k|exp(−iHθ)|ψ₀⟩|²` through the Taylor exponential.
pub fn probabilities(s: &Scenario, theta: f64) -> Vec<f64> {
    let psi: CVector = expm_taylor(s.hamiltonian.matrix(), theta) * s.probe.amplitudes();
    s.basis.matrix().ad_mul(&psi).iter().map(|z| z.norm_sqr()).collect()
}

/// Fisher information `Σ ṗ²/p` from a five-point stencil of [`probabilities`].
pub fn fisher_five_point(s: &Scenario, theta: f64, h: f64) -> f64 {
    let at = |t| probabilities(s, t);
    let (m2, m1, p1, p2) = (at(theta - 2.0 * h), at(theta - h), at(theta + h), at(theta + 2.0 * h));
    let p0 = at(theta);
    (0..p0.len())
        .filter(|&k| p0[k] > 1e-9)
        .map(|k| {
            let d = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
            d * d / p0[k]
        })
        .sum()
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Wigner small-d element `d^j_{m′m}(β)` from the explicit factorial sum
/// (Condon–Shortley phases).
pub fn wigner_d(twice_j: i64, twice_mp: i64, twice_m: i64, beta: f64) -> f64 {
    let jpm = (twice_j + twice_m) / 2;
    let jmm = (twice_j - twice_m) / 2;
    let jpmp = (twice_j + twice_mp) / 2;
    let jmmp = (twice_j - twice_mp) / 2;
    let mpmm = (twice_mp - twice_m) / 2;
    let pre = (factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm)).sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let lo = 0.max(-mpmm);
    let hi = jpm.min(jmmp);
    let mut sum = 0.0;
    for k in lo..=hi {
        let sign = if (mpmm + k) % 2 == 0 { 1.0 } else { -1.0 };
        let den = factorial(jpm - k) * factorial(k) * factorial(jmmp - k) * factorial(mpmm + k);
        sum += sign / den
            * c.powi((twice_j - mpmm - 2 * k) as i32)
            * s.powi((mpmm + 2 * k) as i32);
    }
    pre * sum
}

/// Eigenvalues of a real symmetric 3×3 matrix, ascending, by the
/// trigonometric solution of the characteristic cubic.
pub fn symmetric3_eigenvalues(a: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut e = [e1, e2, e3];
    e.sort_by(|x, y| x.partial_cmp(y).unwrap());
    e
}

pub fn scenario_from_seed(seed: u64, dim: usize) -> Scenario {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Scenario::new(
        qfisher::sampling::random_state(dim, &mut rng),
        qfisher::sampling::random_hermitian(dim, 1.0, &mut rng),
        qfisher::sampling::random_basis(dim, &mut rng),
    )
    .unwrap()
}
