//! Rational functions as unreduced numerator/denominator pairs.
//!
//! No multivariate gcd is computed: equality and zero tests go through
//! cross-multiplication, which is exact and decidable. `reduce_with` offers
//! targeted cancellation against a known factor basis where intermediate
//! growth would otherwise hurt (derivative chains, report strings).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{Indet, JetPoly, NVARS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: JetPoly,
    pub den: JetPoly,
}

impl RatFunc {
    pub fn new(num: JetPoly, den: JetPoly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RatFunc { num, den }
    }

    pub fn from_poly(p: JetPoly) -> RatFunc {
        RatFunc { num: p, den: JetPoly::one() }
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::from_poly(JetPoly::int(n))
    }

    pub fn var(v: Indet) -> RatFunc {
        RatFunc::from_poly(JetPoly::var(v))
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_int(0)
    }

    pub fn one() -> RatFunc {
        RatFunc::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eq_exact(&self, other: &RatFunc) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    pub fn recip(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale_int(&self, n: i64) -> RatFunc {
        RatFunc { num: self.num.scale_int(n), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &JetPoly) -> RatFunc {
        RatFunc { num: &self.num * p, den: self.den.clone() }
    }

    /// The polynomial this function equals, when it is one.
    pub fn to_poly(&self) -> Option<JetPoly> {
        self.num.exact_div(&self.den)
    }

    /// Value at a point; None when the denominator vanishes there.
    pub fn eval(&self, pt: &[BigRational; NVARS]) -> Option<BigRational> {
        let d = self.den.eval(pt);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(pt) / d)
    }

    /// Cancel factors from the given basis that divide both parts, plus any
    /// common monomial factor. Keeps this representation small through long
    /// derivative chains; correctness never depends on it.
    pub fn reduce_with(&mut self, basis: &[JetPoly]) {
        if self.num.is_zero() {
            self.den = JetPoly::one();
            return;
        }
        let common = common_monomial(&self.num, &self.den);
        if common != super::poly::Mono::ONE {
            let mut m = JetPoly::zero();
            m.add_term(common, num_traits::One::one());
            self.num = self.num.exact_div(&m).unwrap();
            self.den = self.den.exact_div(&m).unwrap();
        }
        loop {
            let mut progressed = false;
            for b in basis {
                if b.max_degree() == 0 {
                    continue;
                }
                while let (Some(n2), Some(d2)) = (self.num.exact_div(b), self.den.exact_div(b)) {
                    self.num = n2;
                    self.den = d2;
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
    }
}

fn common_monomial(a: &JetPoly, b: &JetPoly) -> super::poly::Mono {
    let mut min = [u8::MAX; NVARS];
    for p in [a, b] {
        for (m, _) in p.terms() {
            for i in 0..NVARS {
                min[i] = min[i].min(m.0[i]);
            }
        }
    }
    super::poly::Mono(min)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        // Shared denominator: skip the cross product. This is what keeps
        // repeated add/derive cycles from doubling the representation.
        if self.den == rhs.den {
            return RatFunc { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RatFunc {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RatFunc { num: &self.num * &rhs.den, den: &self.den * &rhs.num }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == JetPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
