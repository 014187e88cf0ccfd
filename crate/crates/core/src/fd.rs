//! Central finite-difference stencils.

use std::ops::{Add, Mul, Sub};

/// Values that finite differences can be formed of.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>> Linear for T {}

/// Fourth-order first derivative.
pub fn d1<T: Linear, F: Fn(f64) -> T>(f: F, x: f64, h: f64) -> T {
    let a = f(x + h) - f(x - h);
    let b = f(x + 2.0 * h) - f(x - 2.0 * h);
    (a * 8.0 - b) * (1.0 / (12.0 * h))
}

/// Fourth-order second derivative.
pub fn d2<T: Linear, F: Fn(f64) -> T>(f: F, x: f64, h: f64) -> T {
    let c = f(x);
    let a = f(x + h) + f(x - h);
    let b = f(x + 2.0 * h) + f(x - 2.0 * h);
    (a * 16.0 - b - c * 30.0) * (1.0 / (12.0 * h * h))
}

/// Weights for derivatives of order 1 to 4 on seven equally spaced samples,
/// in units of the sample spacing.
pub const SEVEN_POINT: [[f64; 7]; 4] = [
    [-1.0 / 60.0, 9.0 / 60.0, -45.0 / 60.0, 0.0, 45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0],
    [2.0 / 180.0, -27.0 / 180.0, 270.0 / 180.0, -490.0 / 180.0, 270.0 / 180.0, -27.0 / 180.0, 2.0 / 180.0],
    [1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0],
    [-1.0 / 6.0, 2.0, -13.0 / 2.0, 28.0 / 3.0, -13.0 / 2.0, 2.0, -1.0 / 6.0],
];

/// Applies `SEVEN_POINT[order - 1]` to `window` (length 7, centred).
pub fn seven_point<T: Linear>(window: &[T], order: usize) -> T {
    let w = &SEVEN_POINT[order - 1];
    let mut acc = window[0] * w[0];
    for k in 1..7 {
        acc = acc + window[k] * w[k];
    }
    acc
}
