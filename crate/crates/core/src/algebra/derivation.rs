//! The two derivations d/dx and d/dy on the jet indeterminates.
//!
//! d/dx maps f1 -> f2 -> f3 -> f4 and kills every g-variable and scalar;
//! d/dy is the mirror image. Extension to polynomials is by linearity and
//! Leibniz, to quotients by the quotient rule, and to the sqrt(W) extension
//! by dS = dW/(2 sqrt(W)). A fourth derivative of a profile has no stored
//! successor, so differentiating f4 or g4 is an error rather than silently
//! wrong.

use super::poly::{Indet, JetPoly, NVARS};
use super::ratfunc::RatFunc;
use super::sqrtw::SqrtWExpr;
use super::AlgebraError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    /// Image of one indeterminate: Ok(None) means derivative zero.
    fn image(self, v: Indet) -> Result<Option<Indet>, AlgebraError> {
        Ok(match (self, v) {
            (Axis::X, Indet::F1) => Some(Indet::F2),
            (Axis::X, Indet::F2) => Some(Indet::F3),
            (Axis::X, Indet::F3) => Some(Indet::F4),
            (Axis::X, Indet::F4) => return Err(AlgebraError::JetOrderExceeded("f4")),
            (Axis::Y, Indet::G1) => Some(Indet::G2),
            (Axis::Y, Indet::G2) => Some(Indet::G3),
            (Axis::Y, Indet::G3) => Some(Indet::G4),
            (Axis::Y, Indet::G4) => return Err(AlgebraError::JetOrderExceeded("g4")),
            _ => None,
        })
    }
}

pub fn d_poly(axis: Axis, p: &JetPoly) -> Result<JetPoly, AlgebraError> {
    let mut out = JetPoly::zero();
    for (m, c) in p.terms() {
        for i in 0..NVARS {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let v = Indet::ALL[i];
            let Some(img) = axis.image(v)? else { continue };
            // c * e * x^(m - e_i) * img
            let mut stripped = *m;
            stripped.0[i] -= 1;
            out.add_term(
                stripped.mul(super::poly::Mono::var(img)),
                c * num_rational::BigRational::from_integer(num_bigint::BigInt::from(e)),
            );
        }
    }
    Ok(out)
}

pub fn d_rat(axis: Axis, r: &RatFunc) -> Result<RatFunc, AlgebraError> {
    let dn = d_poly(axis, &r.num)?;
    let dd = d_poly(axis, &r.den)?;
    Ok(RatFunc::new(
        &(&dn * &r.den) - &(&r.num * &dd),
        &r.den * &r.den,
    ))
}

pub fn d_sqrt(axis: Axis, e: &SqrtWExpr) -> Result<SqrtWExpr, AlgebraError> {
    let dp = d_rat(axis, &e.plain)?;
    let dr = d_rat(axis, &e.radical)?;
    // d(r S) = r' S + r dW/(2 sqrt(W)) = (r' + r dW/(2W)) S.
    let dw = d_poly(axis, &e.w)?;
    let shift = &e.radical * &RatFunc::new(dw, e.w.scale_int(2));
    Ok(SqrtWExpr::new(dp, &dr + &shift, e.w.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: Indet) -> JetPoly {
        JetPoly::var(x)
    }

    /// Random polynomial of degree <= 4 over the differentiable variables
    /// (f4/g4 excluded so a single derivative never overflows the jet).
    fn random_poly(rng: &mut ChaCha8Rng) -> JetPoly {
        let vars = [
            Indet::F1,
            Indet::F2,
            Indet::F3,
            Indet::G1,
            Indet::G2,
            Indet::G3,
            Indet::A,
            Indet::B,
            Indet::Lam,
            Indet::M,
        ];
        let mut p = JetPoly::zero();
        for _ in 0..rng.gen_range(1..=6) {
            let mut term = JetPoly::int(rng.gen_range(-9i64..=9));
            for _ in 0..rng.gen_range(0..=4) {
                term = &term * &v(vars[rng.gen_range(0..vars.len())]);
            }
            p = &p + &term;
        }
        p
    }

    #[test]
    fn basic_images() {
        let p = &(&v(Indet::F1) * &v(Indet::F1)) * &v(Indet::G2); // f1^2 g2
        let dx = d_poly(Axis::X, &p).unwrap();
        assert_eq!(dx, (&(&v(Indet::F1) * &v(Indet::F2)) * &v(Indet::G2)).scale_int(2));
        let dy = d_poly(Axis::Y, &p).unwrap();
        assert_eq!(dy, &(&v(Indet::F1) * &v(Indet::F1)) * &v(Indet::G3));
        assert!(d_poly(Axis::X, &v(Indet::A)).unwrap().is_zero());
        assert!(d_poly(Axis::X, &v(Indet::F4)).is_err());
        assert!(d_poly(Axis::Y, &v(Indet::F4)).unwrap().is_zero());
    }

    #[test]
    fn leibniz_holds_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            for axis in [Axis::X, Axis::Y] {
                let lhs = d_poly(axis, &(&p * &q)).unwrap();
                let rhs = &(&d_poly(axis, &p).unwrap() * &q) + &(&p * &d_poly(axis, &q).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn partials_commute_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let p = random_poly(&mut rng);
            let xy = d_poly(Axis::Y, &d_poly(Axis::X, &p).unwrap()).unwrap();
            let yx = d_poly(Axis::X, &d_poly(Axis::Y, &p).unwrap()).unwrap();
            assert_eq!(xy, yx);
        }
    }

    #[test]
    fn quotient_and_radical_rules() {
        // d/dx (f1/f2) = (f2^2 - f1 f3)/f2^2 ... numerator f2*f2 - f1*f3.
        let r = RatFunc::new(v(Indet::F1), v(Indet::F2));
        let dr = d_rat(Axis::X, &r).unwrap();
        let expect = RatFunc::new(
            &(&v(Indet::F2) * &v(Indet::F2)) - &(&v(Indet::F1) * &v(Indet::F3)),
            &v(Indet::F2) * &v(Indet::F2),
        );
        assert!(dr.eq_exact(&expect));

        // W = 1 + f1^2 + g1^2: dS/dx = f1 f2 / sqrt(W) = f1 f2 S / W.
        let w = &(&JetPoly::one() + &(&v(Indet::F1) * &v(Indet::F1))) + &(&v(Indet::G1) * &v(Indet::G1));
        let s = SqrtWExpr::sqrt_w(&w);
        let ds = d_sqrt(Axis::X, &s).unwrap();
        assert!(ds.plain.is_zero());
        let expect = RatFunc::new(&v(Indet::F1) * &v(Indet::F2), w.clone());
        assert!(ds.radical.eq_exact(&expect));

        // S * S = W recovers dW = 2 S dS.
        let dw = d_poly(Axis::X, &w).unwrap();
        let two_s_ds = (&s * &ds).scale_int(2);
        assert!(two_s_ds.radical.is_zero());
        assert!(two_s_ds.plain.eq_exact(&RatFunc::from_poly(dw)));
    }
}
