//! Outward-rounded interval arithmetic over f64, and rectangular complex
//! intervals. Arithmetic results are computed in round-to-nearest and then
//! widened by one ulp per endpoint, which encloses the exactly rounded
//! result. Library transcendentals (ln, atan2, exp) are faithful to well
//! under 2 ulps on this platform; their results are widened by 4 ulps.
//!
//! No rounding-mode state is touched, so values are safe to share across
//! threads.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, steps: u32) -> f64 {
    let mut y = x;
    for _ in 0..steps {
        y = y.next_down();
    }
    y
}

fn up(x: f64, steps: u32) -> f64 {
    let mut y = x;
    for _ in 0..steps {
        y = y.next_up();
    }
    y
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn pi() -> Interval {
        Interval { lo: down(std::f64::consts::PI, 1), hi: up(std::f64::consts::PI, 1) }
    }

    /// [x - r, x + r] with outward rounding.
    pub fn ball(x: f64, r: f64) -> Interval {
        Interval { lo: down(x - r, 1), hi: up(x + r, 1) }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo, 1)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Upper bound of |x| over the interval.
    pub fn abs_upper(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound of |x| over the interval; 0 when it straddles zero.
    pub fn abs_lower(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn abs(&self) -> Interval {
        Interval { lo: self.abs_lower(), hi: self.abs_upper() }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn square(&self) -> Interval {
        let (a, b) = (self.lo, self.hi);
        let candidates = [a * a, b * b];
        let hi = up(candidates[0].max(candidates[1]), 1);
        let lo = if a <= 0.0 && b >= 0.0 {
            0.0
        } else {
            down(candidates[0].min(candidates[1]), 1).max(0.0)
        };
        Interval { lo, hi }
    }

    pub fn sqrt(&self) -> Interval {
        debug_assert!(self.lo >= 0.0);
        Interval { lo: down(self.lo.max(0.0).sqrt(), 1).max(0.0), hi: up(self.hi.sqrt(), 1) }
    }

    pub fn ln(&self) -> Interval {
        debug_assert!(self.lo > 0.0, "ln of interval touching zero: {self}");
        Interval { lo: down(self.lo.ln(), 4), hi: up(self.hi.ln(), 4) }
    }

    pub fn exp(&self) -> Interval {
        Interval { lo: down(self.lo.exp(), 4).max(0.0), hi: up(self.hi.exp(), 4) }
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }

    pub fn recip(&self) -> Interval {
        assert!(
            !(self.lo <= 0.0 && self.hi >= 0.0),
            "division by an interval containing zero: {self}"
        );
        Interval { lo: down(1.0 / self.hi, 1), hi: up(1.0 / self.lo, 1) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: down(self.lo + rhs.lo, 1), hi: up(self.hi + rhs.hi, 1) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: down(self.lo - rhs.hi, 1), hi: up(self.hi - rhs.lo, 1) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let products = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = products.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = products.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self * rhs.recip()
    }
}

/// Rectangular complex interval.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn point(re: f64, im: f64) -> ComplexInterval {
        ComplexInterval { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn new(re: Interval, im: Interval) -> ComplexInterval {
        ComplexInterval { re, im }
    }

    /// Box of radius r around a point.
    pub fn ball(z: num_complex::Complex64, r: f64) -> ComplexInterval {
        ComplexInterval { re: Interval::ball(z.re, r), im: Interval::ball(z.im, r) }
    }

    pub fn one() -> ComplexInterval {
        ComplexInterval { re: Interval::ONE, im: Interval::ZERO }
    }

    pub fn contains(&self, z: num_complex::Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn midpoint(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.midpoint(), self.im.midpoint())
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval { re: self.re, im: -self.im }
    }

    pub fn norm_sq(&self) -> Interval {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Interval {
        self.norm_sq().sqrt()
    }

    /// Upper bound of |z| over the box.
    pub fn abs_upper(&self) -> f64 {
        self.abs().hi
    }

    pub fn abs_lower(&self) -> f64 {
        self.norm_sq().sqrt().lo
    }

    pub fn recip(&self) -> ComplexInterval {
        let n = self.norm_sq();
        ComplexInterval { re: self.re / n, im: -self.im / n }
    }

    /// Principal argument; requires the box to avoid the branch cut
    /// (anything touching the non-positive real axis with im straddling 0).
    pub fn arg(&self) -> Interval {
        assert!(
            self.im.lo > 0.0 || self.im.hi < 0.0 || self.re.lo > 0.0,
            "argument of a box touching the branch cut: {self:?}"
        );
        let corners = [
            (self.re.lo, self.im.lo),
            (self.re.lo, self.im.hi),
            (self.re.hi, self.im.lo),
            (self.re.hi, self.im.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (x, y) in corners {
            let a = y.atan2(x);
            lo = lo.min(a);
            hi = hi.max(a);
        }
        Interval { lo: down(lo, 4), hi: up(hi, 4) }
    }

    /// Principal logarithm as (ln |z|, arg z); box must avoid 0 and the cut.
    pub fn ln(&self) -> ComplexInterval {
        let n = self.norm_sq();
        ComplexInterval { re: n.ln().scale(0.5), im: self.arg() }
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> ComplexInterval {
        ComplexInterval { re: -self.re, im: -self.im }
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for ComplexInterval {
    type Output = ComplexInterval;
    fn div(self, rhs: ComplexInterval) -> ComplexInterval {
        self * rhs.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn finite() -> impl Strategy<Value = f64> {
        (-1e6f64..1e6).prop_filter("nonzeroish", |x| x.abs() > 1e-12)
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_points(a in finite(), b in finite(), r in 0.0f64..0.5) {
            let ia = Interval::ball(a, r);
            let ib = Interval::ball(b, r);
            prop_assert!((ia + ib).contains(a + b));
            prop_assert!((ia - ib).contains(a - b));
            prop_assert!((ia * ib).contains(a * b));
            if ib.abs_lower() > 0.0 {
                prop_assert!((ia / ib).contains(a / b));
            }
            prop_assert!(ia.square().contains(a * a));
        }

        #[test]
        fn transcendentals_enclose_points(a in 1e-6f64..1e6) {
            let ia = Interval::ball(a, a * 1e-9);
            prop_assert!(ia.ln().contains(a.ln()));
            if a < 300.0 {
                prop_assert!(ia.exp().contains(a.exp()));
            }
            prop_assert!(ia.sqrt().contains(a.sqrt()));
        }

        #[test]
        fn complex_ops_enclose_points(
            re in finite(), im in 1e-6f64..1e5, r in 0.0f64..1e-3
        ) {
            let z = num_complex::Complex64::new(re, im);
            let iz = ComplexInterval::ball(z, r);
            prop_assert!((iz * iz).contains(z * z));
            prop_assert!(iz.recip().contains(1.0 / z));
            prop_assert!(iz.arg().contains(z.arg()));
            prop_assert!(iz.ln().contains(z.ln()));
        }
    }

    #[test]
    fn pi_interval_brackets() {
        let pi = Interval::pi();
        assert!(pi.lo < std::f64::consts::PI || pi.hi > std::f64::consts::PI);
        assert!(pi.width() < 1e-15);
    }
}
