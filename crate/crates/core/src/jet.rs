//! Third-order jet arithmetic.
//!
//! A [`Jet3`] carries a function value and its first three derivatives with
//! respect to a single variable. Arithmetic and elementary-function
//! composition propagate all four coordinates, so evaluating a profile
//! expression on the jet of the identity yields the profile's value and
//! derivatives at that point in one pass, with no finite differencing.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Distance-to-pole guard for tan: arguments where |cos t| falls below this
/// are rejected instead of producing huge, meaningless coordinates.
pub const TAN_POLE_GUARD: f64 = 1e-8;

/// Value plus first three derivatives of a one-variable function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Domain failure during jet arithmetic. Carries the operation name and the
/// offending value so callers can report where evaluation left the domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet whose value coordinate is zero")]
    DivisionByZero,
    #[error("{op}: argument {arg} outside the function's domain")]
    Domain { op: &'static str, arg: f64 },
}

impl Jet3 {
    pub const fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Jet3 { c0, c1, c2, c3 }
    }

    /// Jet of the constant function c.
    pub const fn constant(c: f64) -> Self {
        Jet3::new(c, 0.0, 0.0, 0.0)
    }

    /// Jet of the identity function at t: (t, 1, 0, 0).
    pub const fn variable(t: f64) -> Self {
        Jet3::new(t, 1.0, 0.0, 0.0)
    }

    /// Composes phi with this jet, given d = [phi(c0), phi'(c0), phi''(c0),
    /// phi'''(c0)]. Faa di Bruno through order 3.
    fn compose(self, d: [f64; 4]) -> Jet3 {
        let u1 = self.c1;
        let u2 = self.c2;
        let u3 = self.c3;
        Jet3 {
            c0: d[0],
            c1: d[1] * u1,
            c2: d[1] * u2 + d[2] * u1 * u1,
            c3: d[1] * u3 + 3.0 * d[2] * u1 * u2 + d[3] * u1 * u1 * u1,
        }
    }

    /// Quotient of jets. Fails when the divisor's value coordinate is zero.
    pub fn div(self, v: Jet3) -> Result<Jet3, JetError> {
        if v.c0 == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        // Back-substitute w in u = w * v order by order; better conditioned
        // than forming the reciprocal jet when |v.c0| is small.
        let r = 1.0 / v.c0;
        let w0 = self.c0 * r;
        let w1 = (self.c1 - w0 * v.c1) * r;
        let w2 = (self.c2 - 2.0 * w1 * v.c1 - w0 * v.c2) * r;
        let w3 = (self.c3 - 3.0 * w2 * v.c1 - 3.0 * w1 * v.c2 - w0 * v.c3) * r;
        Ok(Jet3::new(w0, w1, w2, w3))
    }

    pub fn sin(self) -> Jet3 {
        let (s, c) = self.c0.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Jet3 {
        let (s, c) = self.c0.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(self) -> Result<Jet3, JetError> {
        if self.c0.cos().abs() < TAN_POLE_GUARD {
            return Err(JetError::Domain { op: "tan", arg: self.c0 });
        }
        let t = self.c0.tan();
        let d1 = 1.0 + t * t;
        Ok(self.compose([t, d1, 2.0 * t * d1, d1 * (2.0 + 6.0 * t * t)]))
    }

    pub fn exp(self) -> Jet3 {
        let e = self.c0.exp();
        self.compose([e, e, e, e])
    }

    /// Natural logarithm. Requires a strictly positive value coordinate.
    pub fn log(self) -> Result<Jet3, JetError> {
        if self.c0 <= 0.0 {
            return Err(JetError::Domain { op: "log", arg: self.c0 });
        }
        let r = 1.0 / self.c0;
        Ok(self.compose([self.c0.ln(), r, -r * r, 2.0 * r * r * r]))
    }

    /// Square root. Requires a strictly positive value coordinate (the
    /// derivative has a pole at zero).
    pub fn sqrt(self) -> Result<Jet3, JetError> {
        if self.c0 <= 0.0 {
            return Err(JetError::Domain { op: "sqrt", arg: self.c0 });
        }
        let s = self.c0.sqrt();
        let d1 = 0.5 / s;
        let d2 = -0.5 * d1 / self.c0;
        let d3 = -1.5 * d2 / self.c0;
        Ok(self.compose([s, d1, d2, d3]))
    }

    pub fn sinh(self) -> Jet3 {
        let s = self.c0.sinh();
        let c = self.c0.cosh();
        self.compose([s, c, s, c])
    }

    pub fn cosh(self) -> Jet3 {
        let s = self.c0.sinh();
        let c = self.c0.cosh();
        self.compose([c, s, c, s])
    }

    pub fn tanh(self) -> Jet3 {
        let t = self.c0.tanh();
        let d1 = 1.0 - t * t;
        self.compose([t, d1, -2.0 * t * d1, d1 * (6.0 * t * t - 2.0)])
    }

    pub fn atan(self) -> Jet3 {
        let x = self.c0;
        let q = 1.0 / (1.0 + x * x);
        self.compose([
            x.atan(),
            q,
            -2.0 * x * q * q,
            (6.0 * x * x - 2.0) * q * q * q,
        ])
    }

    /// Integer power. 0^0 follows the f64 convention (= 1).
    pub fn powi(self, n: i32) -> Jet3 {
        match n {
            0 => Jet3::constant(1.0),
            1 => self,
            _ => {
                let x = self.c0;
                let nf = n as f64;
                let d0 = x.powi(n);
                let d1 = nf * x.powi(n - 1);
                let d2 = nf * (nf - 1.0) * x.powi(n - 2);
                let d3 = nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3);
                self.compose([d0, d1, d2, d3])
            }
        }
    }

    /// Real power. Non-integer exponents require a strictly positive base;
    /// integer-valued exponents delegate to [`Jet3::powi`].
    pub fn powf(self, p: f64) -> Result<Jet3, JetError> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            let n = p as i32;
            if n < 0 && self.c0 == 0.0 {
                return Err(JetError::Domain { op: "pow", arg: self.c0 });
            }
            return Ok(self.powi(n));
        }
        if self.c0 <= 0.0 {
            return Err(JetError::Domain { op: "pow", arg: self.c0 });
        }
        let x = self.c0;
        let d0 = x.powf(p);
        let d1 = p * x.powf(p - 1.0);
        let d2 = p * (p - 1.0) * x.powf(p - 2.0);
        let d3 = p * (p - 1.0) * (p - 2.0) * x.powf(p - 3.0);
        Ok(self.compose([d0, d1, d2, d3]))
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, v: Jet3) -> Jet3 {
        Jet3::new(self.c0 + v.c0, self.c1 + v.c1, self.c2 + v.c2, self.c3 + v.c3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, v: Jet3) -> Jet3 {
        Jet3::new(self.c0 - v.c0, self.c1 - v.c1, self.c2 - v.c2, self.c3 - v.c3)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.c0, -self.c1, -self.c2, -self.c3)
    }
}

// Leibniz through order 3:
//   (uv)''  = u''v + 2u'v' + uv''
//   (uv)''' = u'''v + 3u''v' + 3u'v'' + uv'''
impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, v: Jet3) -> Jet3 {
        Jet3 {
            c0: self.c0 * v.c0,
            c1: self.c1 * v.c0 + self.c0 * v.c1,
            c2: self.c2 * v.c0 + 2.0 * self.c1 * v.c1 + self.c0 * v.c2,
            c3: self.c3 * v.c0
                + 3.0 * self.c2 * v.c1
                + 3.0 * self.c1 * v.c2
                + self.c0 * v.c3,
        }
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, s: f64) -> Jet3 {
        Jet3::new(self.c0 * s, self.c1 * s, self.c2 * s, self.c3 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(u: Jet3, v: Jet3, tol: f64) -> bool {
        (u.c0 - v.c0).abs() <= tol
            && (u.c1 - v.c1).abs() <= tol
            && (u.c2 - v.c2).abs() <= tol
            && (u.c3 - v.c3).abs() <= tol
    }

    #[test]
    fn identity_jet() {
        assert_eq!(Jet3::variable(3.5), Jet3::new(3.5, 1.0, 0.0, 0.0));
    }

    #[test]
    fn square_of_variable() {
        let t = Jet3::variable(2.0);
        assert_eq!(t * t, Jet3::new(4.0, 4.0, 2.0, 0.0));
    }

    #[test]
    fn unit_division() {
        let one = Jet3::constant(1.0);
        assert_eq!(one.div(one).unwrap(), one);
    }

    #[test]
    fn pythagorean_identity() {
        let t = Jet3::variable(0.3);
        let p = t.sin() * t.sin() + t.cos() * t.cos();
        assert!(close(p, Jet3::constant(1.0), 1e-14));
    }

    #[test]
    fn neg_log_cos_at_zero() {
        let t = Jet3::variable(0.0);
        let j = -(t.cos().log().unwrap());
        assert!(close(j, Jet3::new(0.0, 0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn exp_at_zero() {
        assert_eq!(Jet3::variable(0.0).exp(), Jet3::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn log_at_half() {
        let j = Jet3::variable(0.5).log().unwrap();
        assert!(close(j, Jet3::new(0.5f64.ln(), 2.0, -4.0, 16.0), 1e-12));
    }

    #[test]
    fn division_by_zero_jet() {
        let e = Jet3::constant(1.0).div(Jet3::constant(0.0));
        assert_eq!(e, Err(JetError::DivisionByZero));
    }

    #[test]
    fn tan_pole_guard() {
        let near_pole = Jet3::variable(std::f64::consts::FRAC_PI_2);
        match near_pole.tan() {
            Err(JetError::Domain { op: "tan", .. }) => {}
            other => panic!("expected tan pole rejection, got {other:?}"),
        }
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(Jet3::variable(0.0).log().is_err());
        assert!(Jet3::variable(-1.0).log().is_err());
    }

    #[test]
    fn sqrt_matches_powf() {
        let t = Jet3::variable(1.7);
        let a = t.sqrt().unwrap();
        let b = t.powf(0.5).unwrap();
        assert!(close(a, b, 1e-13));
    }

    #[test]
    fn powi_negative_exponent() {
        let t = Jet3::variable(2.0);
        let direct = t.powi(-2);
        let via_div = Jet3::constant(1.0).div(t * t).unwrap();
        assert!(close(direct, via_div, 1e-14));
    }

    // Cheap deterministic pseudo-random stream for the ring-axiom sweeps.
    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
    }

    fn random_jet(state: &mut u64) -> Jet3 {
        Jet3::new(lcg(state), lcg(state), lcg(state), lcg(state))
    }

    #[test]
    fn ring_axioms_hold() {
        let mut s = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            let u = random_jet(&mut s);
            let v = random_jet(&mut s);
            let w = random_jet(&mut s);
            assert!(close((u + v) * w, u * w + v * w, 1e-13));
            assert!(close(u * v, v * u, 1e-13));
            assert!(close((u * v) * w, u * (v * w), 1e-12));
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        // The achievable round-trip accuracy is limited by the rounding of
        // u*v itself: recovering u from fl(u*v) amplifies that rounding by
        // roughly |v1|^2/|v0|^3, so near |v0| = 0.1 the floor sits at a few
        // 1e-12 even with exact division afterwards. We assert 1e-12 away
        // from that corner and 5e-12 down to |v0| > 0.1.
        let mut s = 0x2545f4914f6cdd1du64;
        let mut tried = 0;
        while tried < 200 {
            let u = random_jet(&mut s);
            let v = random_jet(&mut s);
            if v.c0.abs() <= 0.1 {
                continue;
            }
            tried += 1;
            let back = (u * v).div(v).unwrap();
            assert!(close(back, u, 5e-12));
            if v.c0.abs() > 0.3 {
                assert!(close(back, u, 1e-12));
            }
        }
    }

    #[test]
    fn chain_rule_on_nested_composition() {
        // d/dt sin(exp(t)) = cos(exp t) exp t, checked against hand values at t = 0.4.
        let t = Jet3::variable(0.4);
        let j = t.exp().sin();
        let e = 0.4f64.exp();
        assert!((j.c0 - e.sin()).abs() < 1e-14);
        assert!((j.c1 - e.cos() * e).abs() < 1e-13);
        // f'' = (cos(e^t) - sin(e^t) e^t) e^t
        assert!((j.c2 - (e.cos() - e.sin() * e) * e).abs() < 1e-13);
        // f''' = e^t cos(e^t) - 3 e^{2t} sin(e^t) - e^{3t} cos(e^t)
        assert!((j.c3 - (e * e.cos() - 3.0 * e * e * e.sin() - e * e * e * e.cos())).abs() < 1e-12);
    }
}
