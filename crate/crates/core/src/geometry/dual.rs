//! First-order dual numbers over the local coordinates `(z, omega_1..omega_4, r)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value with gradient: `d[0] = d/dz`, `d[1..5]` = tangential gradient, `d[5] = d/dr`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual6 {
    pub v: f64,
    pub d: [f64; 6],
}

impl Dual6 {
    pub fn new(v: f64, d: [f64; 6]) -> Self {
        Dual6 { v, d }
    }

    pub fn constant(v: f64) -> Self {
        Dual6 { v, d: [0.0; 6] }
    }

    pub fn dz(&self) -> f64 {
        self.d[0]
    }

    pub fn dperp(&self) -> [f64; 4] {
        [self.d[1], self.d[2], self.d[3], self.d[4]]
    }

    pub fn dr(&self) -> f64 {
        self.d[5]
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.v;
        let s = -inv * inv;
        Dual6 {
            v: inv,
            d: self.d.map(|x| s * x),
        }
    }

    pub fn scale(self, a: f64) -> Self {
        Dual6 {
            v: a * self.v,
            d: self.d.map(|x| a * x),
        }
    }
}

impl Add for Dual6 {
    type Output = Dual6;
    fn add(self, o: Dual6) -> Dual6 {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d) {
            *a += b;
        }
        Dual6 { v: self.v + o.v, d }
    }
}

impl Sub for Dual6 {
    type Output = Dual6;
    fn sub(self, o: Dual6) -> Dual6 {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d) {
            *a -= b;
        }
        Dual6 { v: self.v - o.v, d }
    }
}

impl Mul for Dual6 {
    type Output = Dual6;
    fn mul(self, o: Dual6) -> Dual6 {
        let mut d = [0.0; 6];
        for i in 0..6 {
            d[i] = self.d[i] * o.v + self.v * o.d[i];
        }
        Dual6 { v: self.v * o.v, d }
    }
}

impl Div for Dual6 {
    type Output = Dual6;
    fn div(self, o: Dual6) -> Dual6 {
        self * o.recip()
    }
}

impl Neg for Dual6 {
    type Output = Dual6;
    fn neg(self) -> Dual6 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Dual6 {
    type Output = Dual6;
    fn add(self, o: f64) -> Dual6 {
        Dual6 {
            v: self.v + o,
            d: self.d,
        }
    }
}

impl Mul<f64> for Dual6 {
    type Output = Dual6;
    fn mul(self, o: f64) -> Dual6 {
        self.scale(o)
    }
}

/// Dot product of two dual 4-vectors.
pub fn ddot(a: &[Dual6; 4], b: &[Dual6; 4]) -> Dual6 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let x = Dual6::new(2.0, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let y = Dual6::new(3.0, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let f = x * x / y + x * 4.0;
        assert_eq!(f.v, 4.0 / 3.0 + 8.0);
        assert!((f.d[0] - (4.0 / 3.0 + 4.0)).abs() < 1e-15);
        assert!((f.d[5] + 4.0 / 9.0).abs() < 1e-15);
    }
}
