//! Small fixed-size linear algebra for velocity vectors and symmetric 3×3
//! tensors.
//!
//! Everything here is a plain value type. The eigenvalue routine uses the
//! closed-form trigonometric solution of the characteristic cubic and the
//! factorization is a hand-unrolled Cholesky, so no heap allocation happens
//! on the per-step path.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Pivots at or below this value make [`cholesky`] fail.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// A velocity (or any other) 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn splat(v: f64) -> Self {
        Self::new(v, v, v)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Component by zero-based index.
    pub fn get(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("Vector3 index {i} out of range"),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Symmetric outer product `self ⊗ self`.
    pub fn outer_self(self) -> SymTensor3 {
        SymTensor3 {
            xx: self.x * self.x,
            yy: self.y * self.y,
            zz: self.z * self.z,
            xy: self.x * self.y,
            xz: self.x * self.z,
            yz: self.y * self.z,
        }
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for Vector3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vector3 {
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
        self.z += o.z;
    }
}

impl Sub for Vector3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vector3> for f64 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        v * self
    }
}

impl Div<f64> for Vector3 {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Symmetric 3×3 tensor stored by its six independent components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor3 {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub xy: f64,
    pub xz: f64,
    pub yz: f64,
}

impl SymTensor3 {
    pub const ZERO: SymTensor3 = SymTensor3::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: SymTensor3 = SymTensor3::diagonal(1.0, 1.0, 1.0);

    pub const fn new(xx: f64, yy: f64, zz: f64, xy: f64, xz: f64, yz: f64) -> Self {
        Self {
            xx,
            yy,
            zz,
            xy,
            xz,
            yz,
        }
    }

    pub const fn diagonal(xx: f64, yy: f64, zz: f64) -> Self {
        Self::new(xx, yy, zz, 0.0, 0.0, 0.0)
    }

    pub fn isotropic(s: f64) -> Self {
        Self::diagonal(s, s, s)
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy + self.zz
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        self.xx * (self.yy * self.zz - self.yz * self.yz)
            - self.xy * (self.xy * self.zz - self.yz * self.xz)
            + self.xz * (self.xy * self.yz - self.yy * self.xz)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: Vector3) -> Vector3 {
        Vector3::new(
            self.xx * v.x + self.xy * v.y + self.xz * v.z,
            self.xy * v.x + self.yy * v.y + self.yz * v.z,
            self.xz * v.x + self.yz * v.y + self.zz * v.z,
        )
    }

    pub fn diag(&self) -> Vector3 {
        Vector3::new(self.xx, self.yy, self.zz)
    }

    /// Off-diagonal components in `(xy, xz, yz)` order.
    pub fn off_diag(&self) -> Vector3 {
        Vector3::new(self.xy, self.xz, self.yz)
    }

    /// Diagonal component by zero-based index.
    pub fn diag_component(&self, i: usize) -> f64 {
        self.diag().get(i)
    }

    pub fn to_matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.xx, self.xy, self.xz],
            [self.xy, self.yy, self.yz],
            [self.xz, self.yz, self.zz],
        ]
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        [self.xx, self.yy, self.zz, self.xy, self.xz, self.yz]
            .into_iter()
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Scaled sum `a·self + b·other`, component by component.
    pub fn lerp_with(&self, a: f64, other: &SymTensor3, b: f64) -> SymTensor3 {
        SymTensor3 {
            xx: a * self.xx + b * other.xx,
            yy: a * self.yy + b * other.yy,
            zz: a * self.zz + b * other.zz,
            xy: a * self.xy + b * other.xy,
            xz: a * self.xz + b * other.xz,
            yz: a * self.yz + b * other.yz,
        }
    }

    /// Frobenius norm of the commutator `self·other − other·self`.
    pub fn commutator_norm(&self, other: &SymTensor3) -> f64 {
        let a = self.to_matrix();
        let b = other.to_matrix();
        let mut sum = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let mut c = 0.0;
                for k in 0..3 {
                    c += a[i][k] * b[k][j] - b[i][k] * a[k][j];
                }
                sum += c * c;
            }
        }
        sum.sqrt()
    }
}

impl Add for SymTensor3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.lerp_with(1.0, &o, 1.0)
    }
}

impl AddAssign for SymTensor3 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for SymTensor3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.lerp_with(1.0, &o, -1.0)
    }
}

impl Mul<f64> for SymTensor3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.lerp_with(s, &SymTensor3::ZERO, 0.0)
    }
}

/// Lower-triangular factor `A` with `A·Aᵀ` equal to the factored tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerTriangular3 {
    pub a11: f64,
    pub a21: f64,
    pub a22: f64,
    pub a31: f64,
    pub a32: f64,
    pub a33: f64,
}

impl LowerTriangular3 {
    pub const IDENTITY: LowerTriangular3 = LowerTriangular3 {
        a11: 1.0,
        a21: 0.0,
        a22: 1.0,
        a31: 0.0,
        a32: 0.0,
        a33: 1.0,
    };

    pub fn apply(&self, v: Vector3) -> Vector3 {
        Vector3::new(
            self.a11 * v.x,
            self.a21 * v.x + self.a22 * v.y,
            self.a31 * v.x + self.a32 * v.y + self.a33 * v.z,
        )
    }

    /// Reconstruct `A·Aᵀ`.
    pub fn gram(&self) -> SymTensor3 {
        SymTensor3 {
            xx: self.a11 * self.a11,
            yy: self.a21 * self.a21 + self.a22 * self.a22,
            zz: self.a31 * self.a31 + self.a32 * self.a32 + self.a33 * self.a33,
            xy: self.a11 * self.a21,
            xz: self.a11 * self.a31,
            yz: self.a21 * self.a31 + self.a22 * self.a32,
        }
    }
}

/// Free-function form of [`SymTensor3::trace`].
pub fn trace(m: &SymTensor3) -> f64 {
    m.trace()
}

/// Free-function form of [`SymTensor3::det`].
pub fn det(m: &SymTensor3) -> f64 {
    m.det()
}

/// Free-function form of [`SymTensor3::apply`].
pub fn apply(m: &SymTensor3, v: Vector3) -> Vector3 {
    m.apply(v)
}

/// Eigenvalues of a symmetric tensor in ascending order, from the
/// trigonometric solution of the characteristic cubic.
///
/// The tensor is shifted by `trace/3` and scaled to unit spread, so the
/// depressed cubic has roots `2·cos(φ + 2πk/3)` with `cos 3φ = det(B)/2`.
/// The cosine argument is clamped to `[-1, 1]` since rounding pushes it past
/// the boundary when two eigenvalues coincide.
pub fn eigenvalues_cardan(m: &SymTensor3) -> [f64; 3] {
    let mean = m.trace() / 3.0;
    let off = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
    let (dx, dy, dz) = (m.xx - mean, m.yy - mean, m.zz - mean);
    let spread2 = dx * dx + dy * dy + dz * dz + 2.0 * off;
    if spread2 == 0.0 || !spread2.is_finite() {
        return [mean; 3];
    }
    let p = (spread2 / 6.0).sqrt();
    let b = SymTensor3::new(dx / p, dy / p, dz / p, m.xy / p, m.xz / p, m.yz / p);
    let r = (b.det() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;

    let largest = mean + 2.0 * p * phi.cos();
    let smallest = mean + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let middle = 3.0 * mean - largest - smallest;

    let mut out = [smallest, middle, largest];
    // middle is recovered from the trace and can cross a neighbour by an ulp
    out.sort_by(f64::total_cmp);
    out
}

/// Cholesky factorization `m = A·Aᵀ` with `A` lower triangular.
pub fn cholesky(m: &SymTensor3) -> Result<LowerTriangular3> {
    let pivot = |value: f64, index: usize| -> Result<f64> {
        if value > PIVOT_FLOOR && value.is_finite() {
            Ok(value.sqrt())
        } else {
            Err(Error::NotPositiveDefinite {
                pivot: index,
                value,
            })
        }
    };
    let a11 = pivot(m.xx, 1)?;
    let a21 = m.xy / a11;
    let a31 = m.xz / a11;
    let a22 = pivot(m.yy - a21 * a21, 2)?;
    let a32 = (m.yz - a31 * a21) / a22;
    let a33 = pivot(m.zz - a31 * a31 - a32 * a32, 3)?;
    Ok(LowerTriangular3 {
        a11,
        a21,
        a22,
        a31,
        a32,
        a33,
    })
}

/// SPD test with the default floor of zero.
pub fn is_spd(m: &SymTensor3) -> bool {
    is_spd_with_floor(m, 0.0)
}

/// True when every eigenvalue strictly exceeds `floor`.
pub fn is_spd_with_floor(m: &SymTensor3, floor: f64) -> bool {
    eigenvalues_cardan(m)[0] > floor
}
