//! Small complex-arithmetic helpers with attention to cancellation.

use std::f64::consts::PI;

use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `exp(w) - 1` without cancellation for small `|w|`.
pub fn expm1(w: Complex64) -> Complex64 {
    let (a, b) = (w.re, w.im);
    let em1 = a.exp_m1();
    let s = (0.5 * b).sin();
    Complex64::new(em1 * b.cos() - 2.0 * s * s, a.exp() * b.sin())
}

/// Principal `ln(1 + w)`, accurate for small `|w|`.
pub fn ln1p(w: Complex64) -> Complex64 {
    let (u, v) = (w.re, w.im);
    if w.norm() < 0.5 {
        Complex64::new(0.5 * (2.0 * u + u * u + v * v).ln_1p(), v.atan2(1.0 + u))
    } else {
        (Complex64::new(1.0, 0.0) + w).ln()
    }
}

/// `exp(2 pi i z)`.
pub fn e2pi(z: Complex64) -> Complex64 {
    (2.0 * PI * I * z).exp()
}

/// Wraps the imaginary part into `(-pi, pi]`.
pub fn wrap_log(w: Complex64) -> Complex64 {
    let mut im = w.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    Complex64::new(w.re, im)
}

/// Relative distance `|a/b - 1|` of two numbers given by their logarithms.
pub fn rel_err_log(log_a: Complex64, log_b: Complex64) -> f64 {
    expm1(wrap_log(log_a - log_b)).norm()
}

/// Relative distance `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Neumaier-compensated complex summation in a fixed order.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(s: f64, x: f64, c: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *c += (s - t) + x;
    } else {
        *c += (x - t) + s;
    }
    t
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        let re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        let im = two_sum(self.sum.im, x.im, &mut self.comp.im);
        self.sum = Complex64::new(re, im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<T: IntoIterator<Item = Complex64>>(iter: T) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Parses `"re,im"` (or `"re"`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next()?.parse().ok()?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().ok()?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return None;
    }
    Some(Complex64::new(re, im))
}

/// Parses `"re,im;re,im;..."`.
pub fn parse_complex_list(s: &str) -> Option<Vec<Complex64>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_complex)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm1_matches_naive_away_from_zero() {
        let w = Complex64::new(0.7, -1.3);
        assert!((expm1(w) - (w.exp() - 1.0)).norm() < 1e-15);
        let tiny = Complex64::new(1e-12, 2e-12);
        assert!(rel_err(expm1(tiny), tiny) < 1e-11);
    }

    #[test]
    fn ln1p_small_and_large() {
        let w = Complex64::new(1e-13, -3e-13);
        assert!(rel_err(ln1p(w), w) < 1e-12);
        let w = Complex64::new(2.0, 1.0);
        assert!((ln1p(w) - Complex64::new(3.0, 1.0).ln()).norm() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let xs = [1e16, 1.0, -1e16, 1.0].map(|x| Complex64::new(x, -x));
        let s: CompensatedSum = xs.into_iter().collect();
        assert_eq!(s.value(), Complex64::new(2.0, -2.0));
    }

    #[test]
    fn log_relative_error_ignores_branch() {
        let a = Complex64::new(0.3, 1.0);
        assert!(rel_err_log(a, a + 2.0 * PI * I * 3.0) < 1e-14);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_complex("1.5, -2"), Some(Complex64::new(1.5, -2.0)));
        assert_eq!(
            parse_complex_list("1,0;0,1"),
            Some(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)])
        );
        assert_eq!(parse_complex("a,b"), None);
    }
}
