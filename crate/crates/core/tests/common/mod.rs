//! Test-only oracles and statistics, kept independent of the library's
//! numerical paths.
#![allow(dead_code)]

use esfp::{SymTensor3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficients of `det(λI − m) = λ³ − c2·λ² + c1·λ − c0`.
fn char_poly(m: &SymTensor3) -> impl Fn(f64) -> f64 {
    let c2 = m.xx + m.yy + m.zz;
    let c1 = m.xx * m.yy + m.xx * m.zz + m.yy * m.zz - m.xy * m.xy - m.xz * m.xz - m.yz * m.yz;
    let c0 = m.xx * (m.yy * m.zz - m.yz * m.yz) - m.xy * (m.xy * m.zz - m.yz * m.xz)
        + m.xz * (m.xy * m.yz - m.yy * m.xz);
    move |l: f64| ((l - c2) * l + c1) * l - c0
}

fn bisect(p: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut plo = p(lo);
    if plo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let pm = p(mid);
        if pm == 0.0 {
            return mid;
        }
        if (pm < 0.0) == (plo < 0.0) {
            lo = mid;
            plo = pm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues by sign-change bisection of the characteristic polynomial.
///
/// The cubic's critical points split a Gershgorin bracket into three
/// monotone pieces, each holding one root.
pub fn eigenvalues_bisection(m: &SymTensor3) -> [f64; 3] {
    let p = char_poly(m);
    let r = |d: f64, a: f64, b: f64| (d - a.abs() - b.abs(), d + a.abs() + b.abs());
    let (a0, b0) = r(m.xx, m.xy, m.xz);
    let (a1, b1) = r(m.yy, m.xy, m.yz);
    let (a2, b2) = r(m.zz, m.xz, m.yz);
    let lo = a0.min(a1).min(a2) - 1.0;
    let hi = b0.max(b1).max(b2) + 1.0;

    let c2 = m.trace();
    let c1 = m.xx * m.yy + m.xx * m.zz + m.yy * m.zz - m.xy * m.xy - m.xz * m.xz - m.yz * m.yz;
    let disc = (c2 * c2 - 3.0 * c1).max(0.0).sqrt();
    let k1 = ((c2 - disc) / 3.0).clamp(lo, hi);
    let k2 = ((c2 + disc) / 3.0).clamp(lo, hi);
    [bisect(&p, lo, k1), bisect(&p, k1, k2), bisect(&p, k2, hi)]
}

/// Random SPD tensor `R·diag(λ)·Rᵀ` with eigenvalues spread over up to
/// `spread` decades and a uniformly random rotation.
pub fn random_spd(rng: &mut impl Rng, spread: f64) -> SymTensor3 {
    let lam: [f64; 3] = std::array::from_fn(|_| 10f64.powf(-spread * rng.random::<f64>()));
    rotated_diagonal(rng, lam)
}

/// `R·diag(lam)·Rᵀ` for a uniformly random rotation `R`.
pub fn rotated_diagonal(rng: &mut impl Rng, lam: [f64; 3]) -> SymTensor3 {
    // random unit quaternion
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let tau = std::f64::consts::TAU;
    let (w, x, y, z) = (
        (1.0 - u1).sqrt() * (tau * u2).sin(),
        (1.0 - u1).sqrt() * (tau * u2).cos(),
        u1.sqrt() * (tau * u3).sin(),
        u1.sqrt() * (tau * u3).cos(),
    );
    let r = [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ];
    let e = |i: usize, j: usize| (0..3).map(|k| r[i][k] * lam[k] * r[j][k]).sum::<f64>();
    SymTensor3::new(e(0, 0), e(1, 1), e(2, 2), e(0, 1), e(0, 2), e(1, 2))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-component standard errors of the diagonal of the temperature tensor
/// and of the heat flux (ρ = 1), from the centred velocities.
#[derive(Debug, Clone, Copy)]
pub struct MomentErrors {
    pub theta_diag: Vector3,
    pub heat_flux: Vector3,
}

pub fn moment_errors(v: &[Vector3]) -> MomentErrors {
    let n = v.len() as f64;
    let u = v.iter().fold(Vector3::ZERO, |a, &b| a + b) / n;
    // running sums of each per-particle quantity and of its square
    let mut s = [0.0; 6];
    let mut s2 = [0.0; 6];
    for &w in v {
        let d = w - u;
        let e = 0.5 * d.norm_squared();
        let x = [d.x * d.x, d.y * d.y, d.z * d.z, d.x * e, d.y * e, d.z * e];
        for k in 0..6 {
            s[k] += x[k];
            s2[k] += x[k] * x[k];
        }
    }
    let se = |k: usize| {
        let mean = s[k] / n;
        ((s2[k] / n - mean * mean).max(0.0) * n / (n - 1.0) / n).sqrt()
    };
    MomentErrors {
        theta_diag: Vector3::new(se(0), se(1), se(2)),
        heat_flux: Vector3::new(se(3), se(4), se(5)),
    }
}

/// Sample excess kurtosis of one component.
pub fn excess_kurtosis(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}
