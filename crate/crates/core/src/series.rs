//! Truncated power series in one variable `t` with complex coefficients.

use std::ops::{Add, Mul};

use num_complex::Complex64;

/// `t^order_offset * sum_{k=0}^{N} coefficients[k] t^k`, truncated at absolute
/// order `N + order_offset` for products with the same truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    pub coefficients: Vec<Complex64>,
    pub order_offset: i32,
}

impl PowerSeries {
    /// The constant `c` with `len` stored coefficients.
    pub fn constant(c: Complex64, len: usize) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); len];
        if len > 0 {
            coefficients[0] = c;
        }
        PowerSeries {
            coefficients,
            order_offset: 0,
        }
    }

    /// `sum_k f(k) t^k` for `k < len`.
    pub fn from_fn<F: Fn(usize) -> Complex64>(len: usize, f: F) -> Self {
        PowerSeries {
            coefficients: (0..len).map(f).collect(),
            order_offset: 0,
        }
    }

    /// `exp(z t)`.
    pub fn exp_linear(z: Complex64, len: usize) -> Self {
        let mut coefficients = Vec::with_capacity(len);
        let mut c = Complex64::new(1.0, 0.0);
        for k in 0..len {
            coefficients.push(c);
            c = c * z / (k + 1) as f64;
        }
        PowerSeries {
            coefficients,
            order_offset: 0,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shifted(mut self, k: i32) -> Self {
        self.order_offset += k;
        self
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for x in &mut self.coefficients {
            *x *= c;
        }
        self
    }

    /// Coefficient of `t^n` (zero outside the stored range).
    pub fn coefficient(&self, n: i32) -> Complex64 {
        let k = n - self.order_offset;
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients
            .get(k as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    /// Cauchy product; keeps as many coefficients as the shorter factor.
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let len = self.coefficients.len().min(rhs.coefficients.len());
        let coefficients = (0..len)
            .map(|k| {
                (0..=k)
                    .map(|i| self.coefficients[i] * rhs.coefficients[k - i])
                    .sum()
            })
            .collect();
        PowerSeries {
            coefficients,
            order_offset: self.order_offset + rhs.order_offset,
        }
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    /// Sum, re-based at the smaller offset and truncated at the lower top order.
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let lo = self.order_offset.min(rhs.order_offset);
        let top = (self.order_offset + self.coefficients.len() as i32)
            .min(rhs.order_offset + rhs.coefficients.len() as i32);
        let coefficients = (lo..top.max(lo))
            .map(|n| self.coefficient(n) + rhs.coefficient(n))
            .collect();
        PowerSeries {
            coefficients,
            order_offset: lo,
        }
    }
}
