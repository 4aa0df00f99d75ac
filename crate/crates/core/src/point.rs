//! Points of `C^1` and `C^2` and complex linear forms on them.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of `C^m`, `m ∈ {1, 2}`. Serialized as a list of `[re, im]` pairs.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Point {
    coords: [Complex64; 2],
    dim: u8,
}

impl Point {
    pub fn one(z: Complex64) -> Self {
        Self {
            coords: [z, Complex64::new(0.0, 0.0)],
            dim: 1,
        }
    }

    pub fn two(z1: Complex64, z2: Complex64) -> Self {
        Self {
            coords: [z1, z2],
            dim: 2,
        }
    }

    pub fn real1(x: f64) -> Self {
        Self::one(Complex64::new(x, 0.0))
    }

    pub fn real2(x1: f64, x2: f64) -> Self {
        Self::two(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    pub fn zeros(dim: usize) -> Self {
        let mut p = Self::one(Complex64::new(0.0, 0.0));
        p.dim = dim as u8;
        p
    }

    pub fn from_slice(coords: &[Complex64]) -> Option<Self> {
        match coords {
            [z] => Some(Self::one(*z)),
            [z1, z2] => Some(Self::two(*z1, *z2)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords[..self.dim as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for z in out.coords.iter_mut().take(self.dim()) {
            *z *= s;
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Point) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for k in 0..self.dim() {
            out.coords[k] += other.coords[k];
        }
        out
    }

    pub fn sub(&self, other: &Point) -> Self {
        self.add(&other.scale_real(-1.0))
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    /// Hermitian inner product `Σ z_k conj(w_k)`.
    pub fn inner(&self, other: &Point) -> Complex64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Real inner product of the underlying `R^{2m}` vectors.
    pub fn real_inner(&self, other: &Point) -> f64 {
        self.inner(other).re
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl TryFrom<Vec<Complex64>> for Point {
    type Error = String;

    fn try_from(v: Vec<Complex64>) -> Result<Self, Self::Error> {
        Point::from_slice(&v).ok_or_else(|| format!("point must have 1 or 2 coordinates, got {}", v.len()))
    }
}

impl From<Point> for Vec<Complex64> {
    fn from(p: Point) -> Self {
        p.coords().to_vec()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

/// `ℓ(z) = Σ a_k z_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    coeffs: Vec<Complex64>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// The coordinate function `z_k` on `C^dim`.
    pub fn coordinate(dim: usize, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }

    pub fn eval(&self, z: &Point) -> Complex64 {
        self.coeffs.iter().zip(z.coords()).map(|(a, z)| a * z).sum()
    }

    /// The point `conj(a)/|a|²`, on which `ℓ` takes the value 1 with least norm.
    pub fn dual_point(&self) -> Point {
        let n2 = self.norm().powi(2);
        let conj: Vec<Complex64> = self.coeffs.iter().map(|a| a.conj() / n2).collect();
        Point::from_slice(&conj).expect("form dimension is 1 or 2")
    }
}
