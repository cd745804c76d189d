//! Double-double arithmetic for compensated series summation.
//!
//! Unevaluated sums hi + lo with |lo| <= ulp(hi)/2, giving roughly 106 bits of
//! precision. Only the handful of operations the series kernels need.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        quick_two_sum(s, e)
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p, e)
    }

    /// Divide by an ordinary double (exact integer denominators in practice).
    pub fn div_f64(self, d: f64) -> Dd {
        let q0 = self.hi / d;
        let (p, e) = two_prod(q0, d);
        let r = (self.hi - p - e + self.lo) / d;
        quick_two_sum(q0, r)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let e = b - (s - a);
    Dd { hi: s, lo: e }
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn from_complex(c: num_complex::Complex64) -> CDd {
        CDd {
            re: Dd::from_f64(c.re),
            im: Dd::from_f64(c.im),
        }
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, other: CDd) -> CDd {
        CDd {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    pub fn mul(self, other: CDd) -> CDd {
        CDd {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    pub fn div_f64(self, d: f64) -> CDd {
        CDd {
            re: self.re.div_f64(d),
            im: self.im.div_f64(d),
        }
    }

    pub fn norm(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}
