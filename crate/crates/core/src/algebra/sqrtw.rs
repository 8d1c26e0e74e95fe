//! The quadratic extension by S = sqrt(W).
//!
//! An element is plain + radical * S with rational-function parts and a
//! fixed radicand polynomial W (S^2 = W). Zero testing is decidable: the
//! element vanishes iff both parts do, because S is not a rational function
//! (W is squarefree in every mode used here).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::JetPoly;
use super::ratfunc::RatFunc;

#[derive(Debug, Clone)]
pub struct SqrtWExpr {
    pub plain: RatFunc,
    pub radical: RatFunc,
    pub w: JetPoly,
}

impl SqrtWExpr {
    pub fn new(plain: RatFunc, radical: RatFunc, w: JetPoly) -> SqrtWExpr {
        SqrtWExpr { plain, radical, w }
    }

    pub fn from_rat(r: RatFunc, w: &JetPoly) -> SqrtWExpr {
        SqrtWExpr { plain: r, radical: RatFunc::zero(), w: w.clone() }
    }

    pub fn sqrt_w(w: &JetPoly) -> SqrtWExpr {
        SqrtWExpr { plain: RatFunc::zero(), radical: RatFunc::one(), w: w.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_zero() && self.radical.is_zero()
    }

    pub fn scale(&self, r: &RatFunc) -> SqrtWExpr {
        SqrtWExpr { plain: &self.plain * r, radical: &self.radical * r, w: self.w.clone() }
    }

    pub fn scale_int(&self, n: i64) -> SqrtWExpr {
        SqrtWExpr { plain: self.plain.scale_int(n), radical: self.radical.scale_int(n), w: self.w.clone() }
    }

    pub fn eq_exact(&self, other: &SqrtWExpr) -> bool {
        (self - other).is_zero()
    }

    /// Multiplicative inverse via the conjugate:
    /// 1/(p + r S) = (p - r S) / (p^2 - r^2 W).
    pub fn recip(&self) -> SqrtWExpr {
        let wr = RatFunc::from_poly(self.w.clone());
        let norm = &(&self.plain * &self.plain) - &(&(&self.radical * &self.radical) * &wr);
        assert!(!norm.is_zero(), "inverting a zero divisor in the sqrt(W) extension");
        SqrtWExpr {
            plain: &self.plain / &norm,
            radical: &(-&self.radical) / &norm,
            w: self.w.clone(),
        }
    }

    pub fn div(&self, other: &SqrtWExpr) -> SqrtWExpr {
        self * &other.recip()
    }

    pub fn reduce_with(&mut self, basis: &[JetPoly]) {
        self.plain.reduce_with(basis);
        self.radical.reduce_with(basis);
    }

    fn assert_same_w(&self, other: &SqrtWExpr) {
        assert_eq!(self.w, other.w, "mixing sqrt(W) extensions with different radicands");
    }
}

impl Add for &SqrtWExpr {
    type Output = SqrtWExpr;
    fn add(self, rhs: &SqrtWExpr) -> SqrtWExpr {
        self.assert_same_w(rhs);
        SqrtWExpr {
            plain: &self.plain + &rhs.plain,
            radical: &self.radical + &rhs.radical,
            w: self.w.clone(),
        }
    }
}

impl Sub for &SqrtWExpr {
    type Output = SqrtWExpr;
    fn sub(self, rhs: &SqrtWExpr) -> SqrtWExpr {
        self + &(-rhs)
    }
}

impl Mul for &SqrtWExpr {
    type Output = SqrtWExpr;
    fn mul(self, rhs: &SqrtWExpr) -> SqrtWExpr {
        self.assert_same_w(rhs);
        let wr = RatFunc::from_poly(self.w.clone());
        SqrtWExpr {
            plain: &(&self.plain * &rhs.plain) + &(&(&self.radical * &rhs.radical) * &wr),
            radical: &(&self.plain * &rhs.radical) + &(&self.radical * &rhs.plain),
            w: self.w.clone(),
        }
    }
}

impl Neg for &SqrtWExpr {
    type Output = SqrtWExpr;
    fn neg(self) -> SqrtWExpr {
        SqrtWExpr { plain: -&self.plain, radical: -&self.radical, w: self.w.clone() }
    }
}

impl fmt::Display for SqrtWExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({}) * sqrt({})", self.plain, self.radical, self.w)
    }
}
