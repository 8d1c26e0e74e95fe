//! Sparse multivariate polynomials over exact rationals.
//!
//! The indeterminate set is fixed: third- and fourth-order jet coordinates
//! f1..f4 and g1..g4 of two profile functions, the relation coefficients a
//! and b, and two scalars lam and m used by the degenerate-case analysis.
//! Terms live in a BTreeMap keyed by exponent vectors, so iteration order,
//! printing, and leading-term selection are all deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const NVARS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Indet {
    F1,
    F2,
    F3,
    F4,
    G1,
    G2,
    G3,
    G4,
    A,
    B,
    Lam,
    M,
}

impl Indet {
    pub const ALL: [Indet; NVARS] = [
        Indet::F1,
        Indet::F2,
        Indet::F3,
        Indet::F4,
        Indet::G1,
        Indet::G2,
        Indet::G3,
        Indet::G4,
        Indet::A,
        Indet::B,
        Indet::Lam,
        Indet::M,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Indet::F1 => "f1",
            Indet::F2 => "f2",
            Indet::F3 => "f3",
            Indet::F4 => "f4",
            Indet::G1 => "g1",
            Indet::G2 => "g2",
            Indet::G3 => "g3",
            Indet::G4 => "g4",
            Indet::A => "a",
            Indet::B => "b",
            Indet::Lam => "lam",
            Indet::M => "m",
        }
    }
}

/// Exponent vector. The derived Ord is lexicographic over the fixed
/// variable order, which is a valid monomial order (1 is smallest and the
/// order respects multiplication), so leading-term division below is sound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mono(pub [u8; NVARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; NVARS]);

    pub fn var(v: Indet) -> Mono {
        let mut e = [0u8; NVARS];
        e[v.index()] = 1;
        Mono(e)
    }

    pub fn mul(self, other: Mono) -> Mono {
        let mut e = [0u8; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i].checked_add(other.0[i]).expect("monomial exponent overflow");
        }
        Mono(e)
    }

    /// other / self, if self divides other exponentwise.
    pub fn divides_into(self, other: Mono) -> Option<Mono> {
        let mut e = [0u8; NVARS];
        for i in 0..NVARS {
            e[i] = other.0[i].checked_sub(self.0[i])?;
        }
        Some(Mono(e))
    }

    pub fn degree(self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JetPoly {
    terms: BTreeMap<Mono, BigRational>,
}

impl JetPoly {
    pub fn zero() -> JetPoly {
        JetPoly::default()
    }

    pub fn one() -> JetPoly {
        JetPoly::int(1)
    }

    pub fn int(n: i64) -> JetPoly {
        JetPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn constant(c: BigRational) -> JetPoly {
        let mut p = JetPoly::zero();
        p.add_term(Mono::ONE, c);
        p
    }

    pub fn var(v: Indet) -> JetPoly {
        let mut p = JetPoly::zero();
        p.add_term(Mono::var(v), BigRational::one());
        p
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(Mono, &BigRational)> {
        self.terms.last_key_value().map(|(m, c)| (*m, c))
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: Indet) -> bool {
        self.terms.keys().any(|m| m.0[v.index()] > 0)
    }

    pub fn pow(&self, n: u32) -> JetPoly {
        let mut out = JetPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> JetPoly {
        if c.is_zero() {
            return JetPoly::zero();
        }
        let mut out = JetPoly::zero();
        for (m, k) in &self.terms {
            out.terms.insert(*m, k * c);
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> JetPoly {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn eval(&self, pt: &[BigRational; NVARS]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                for _ in 0..m.0[i] {
                    t *= &pt[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Replace `v` by `rep` everywhere.
    pub fn subst(&self, v: Indet, rep: &JetPoly) -> JetPoly {
        let vi = v.index();
        // Cache powers of the replacement.
        let max_e = self.terms.keys().map(|m| m.0[vi]).max().unwrap_or(0);
        let mut pows = Vec::with_capacity(max_e as usize + 1);
        pows.push(JetPoly::one());
        for k in 1..=max_e {
            let next = &pows[k as usize - 1] * rep;
            pows.push(next);
        }
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            let e = m.0[vi];
            let mut rest = *m;
            rest.0[vi] = 0;
            let mut term = JetPoly::zero();
            term.add_term(rest, c.clone());
            out = &out + &(&term * &pows[e as usize]);
        }
        out
    }

    /// Exact polynomial quotient self / d, or None when d does not divide
    /// self. Standard leading-term long division under the lex monomial
    /// order; any non-cancellable leading term means a nonzero remainder.
    pub fn exact_div(&self, d: &JetPoly) -> Option<JetPoly> {
        let (dm, dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = JetPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = dm.divides_into(rm)?;
            let qc = rc / dc;
            let mut t = JetPoly::zero();
            t.add_term(qm, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl Add for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c.clone());
        }
        out
    }
}

impl Add for JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: JetPoly) -> JetPoly {
        &self + &rhs
    }
}

impl Sub for JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: JetPoly) -> JetPoly {
        &self - &rhs
    }
}

impl Mul for JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: JetPoly) -> JetPoly {
        &self * &rhs
    }
}

impl Neg for JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        -&self
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending order so the leading term comes first.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if !mag.is_one() || m.degree() == 0 {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for v in Indet::ALL {
                let e = m.0[v.index()];
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                if e == 1 {
                    write!(f, "{}", v.name())?;
                } else {
                    write!(f, "{}^{}", v.name(), e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Indet) -> JetPoly {
        JetPoly::var(x)
    }

    #[test]
    fn ring_basics() {
        let f1 = v(Indet::F1);
        let g1 = v(Indet::G1);
        let sum = &f1 + &g1;
        let sq = &sum * &sum;
        let expanded = &(&(&f1 * &f1) + &(&f1 * &g1).scale_int(2)) + &(&g1 * &g1);
        assert_eq!(sq, expanded);
        assert!((&sq - &expanded).is_zero());
        assert_eq!(sq.max_degree(), 2);
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn zero_is_never_stored() {
        let f1 = v(Indet::F1);
        let diff = &f1 - &f1;
        assert!(diff.is_zero());
        assert_eq!(diff.num_terms(), 0);
        let mut p = JetPoly::zero();
        p.add_term(Mono::var(Indet::A), BigRational::zero());
        assert!(p.is_zero());
    }

    #[test]
    fn exact_division_round_trips() {
        let p = &(&v(Indet::F1) * &v(Indet::F1)) + &JetPoly::one(); // 1 + f1^2
        let q = &(&v(Indet::G1) * &v(Indet::G1)) + &JetPoly::one();
        let prod = &p * &q;
        assert_eq!(prod.exact_div(&p), Some(q.clone()));
        assert_eq!(prod.exact_div(&q), Some(p.clone()));
        // Not divisible: remainder appears.
        let bad = &prod + &JetPoly::one();
        assert_eq!(bad.exact_div(&p), None);
        assert_eq!(v(Indet::F1).exact_div(&v(Indet::G1)), None);
    }

    #[test]
    fn substitution_expands_powers() {
        // (f3)^2 + f3 with f3 -> 2 lam f1 f2^2
        let f3 = v(Indet::F3);
        let p = &(&f3 * &f3) + &f3;
        let rep = &(&v(Indet::Lam) * &v(Indet::F1)) * &(&v(Indet::F2) * &v(Indet::F2));
        let rep = rep.scale_int(2);
        let s = p.subst(Indet::F3, &rep);
        let expect = &(&rep * &rep) + &rep;
        assert_eq!(s, expect);
        assert!(!s.contains_var(Indet::F3));
    }

    #[test]
    fn eval_matches_structure() {
        use num_traits::FromPrimitive;
        let p = &(&v(Indet::F1) * &v(Indet::G1)).scale_int(3) + &JetPoly::int(-7);
        let mut pt: [BigRational; NVARS] =
            std::array::from_fn(|_| BigRational::from_i64(0).unwrap());
        pt[Indet::F1.index()] = BigRational::new(BigInt::from(1), BigInt::from(2));
        pt[Indet::G1.index()] = BigRational::from_i64(4).unwrap();
        let got = p.eval(&pt);
        assert_eq!(got, BigRational::from_i64(-1).unwrap());
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&v(Indet::F1) * &v(Indet::F1)).scale_int(-2) + &(&v(Indet::A) * &v(Indet::B));
        assert_eq!(p.to_string(), "-2*f1^2 + a*b");
        assert_eq!(JetPoly::zero().to_string(), "0");
        assert_eq!(JetPoly::int(1).to_string(), "1");
    }
}
