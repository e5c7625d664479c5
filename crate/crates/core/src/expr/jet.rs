use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value together with its first and second derivative in `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Jet2 { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Jet2::new(value, 0.0, 0.0)
    }

    /// The independent variable seeded at `r`.
    pub const fn variable(r: f64) -> Self {
        Jet2::new(r, 1.0, 0.0)
    }

    /// Compose with a scalar function given its value and two derivatives
    /// at `self.value`.
    #[inline]
    pub fn chain(self, g: f64, g1: f64, g2: f64) -> Self {
        Jet2 {
            value: g,
            d1: g1 * self.d1,
            d2: g2 * self.d1 * self.d1 + g1 * self.d2,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Self {
        let t = self.value.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm; caller guarantees a positive value.
    pub fn ln(self) -> Self {
        let x = self.value;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    /// Square root; caller guarantees a positive value.
    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    /// Integer power, exact at zero for non-negative exponents.
    pub fn powi(self, k: i32) -> Self {
        let x = self.value;
        let kf = k as f64;
        let g1 = if k == 0 { 0.0 } else { kf * x.powi(k - 1) };
        let g2 = if k == 0 || k == 1 {
            0.0
        } else {
            kf * (kf - 1.0) * x.powi(k - 2)
        };
        self.chain(x.powi(k), g1, g2)
    }

    /// Real power; caller guarantees a positive value.
    pub fn powf(self, c: f64) -> Self {
        let x = self.value;
        let g = x.powf(c);
        self.chain(g, c * g / x, c * (c - 1.0) * g / (x * x))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let w = self.value / o.value;
        let w1 = (self.d1 - w * o.d1) / o.value;
        let w2 = (self.d2 - 2.0 * w1 * o.d1 - w * o.d2) / o.value;
        Jet2::new(w, w1, w2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        Jet2::new(self.value * k, self.d1 * k, self.d2 * k)
    }
}
