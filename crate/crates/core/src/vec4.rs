//! Points and vectors of R⁴ with the standard Euclidean inner product.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    /// Standard basis vector `e_{i+1}` (zero-based index).
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 4];
        c[i] = 1.0;
        Vec4(c)
    }

    pub fn e1() -> Self {
        Self::basis(0)
    }
    pub fn e2() -> Self {
        Self::basis(1)
    }
    pub fn e3() -> Self {
        Self::basis(2)
    }
    pub fn e4() -> Self {
        Self::basis(3)
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(&self) -> Vec4 {
        *self / self.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Component of `self` orthogonal to the unit vector `unit`.
    pub fn reject(&self, unit: &Vec4) -> Vec4 {
        *self - *unit * self.dot(unit)
    }

    /// Squared area of the parallelogram spanned by `self` and `other`.
    pub fn wedge_norm_squared(&self, other: &Vec4) -> f64 {
        let d = self.dot(other);
        (self.norm_squared() * other.norm_squared() - d * d).max(0.0)
    }

    /// Ternary cross product: the vector orthogonal to `a`, `b`, `c` whose length is
    /// the 3-volume they span, oriented so that `(a, b, c, out)` is positive.
    pub fn cross3(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
        let m = |i: usize, j: usize, k: usize| {
            a.0[i] * (b.0[j] * c.0[k] - b.0[k] * c.0[j]) - a.0[j] * (b.0[i] * c.0[k] - b.0[k] * c.0[i])
                + a.0[k] * (b.0[i] * c.0[j] - b.0[j] * c.0[i])
        };
        // Cofactor expansion of det[a; b; c; e_i] along the last row.
        Vec4([-m(1, 2, 3), m(0, 2, 3), -m(0, 1, 3), m(0, 1, 2)])
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        for i in 0..4 {
            self.0[i] += o.0[i];
        }
    }
}

impl SubAssign for Vec4 {
    fn sub_assign(&mut self, o: Vec4) {
        for i in 0..4 {
            self.0[i] -= o.0[i];
        }
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, k: f64) -> Vec4 {
        Vec4(self.0.map(|x| x * k))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

impl Div<f64> for Vec4 {
    type Output = Vec4;
    fn div(self, k: f64) -> Vec4 {
        Vec4(self.0.map(|x| x / k))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|x| -x))
    }
}
