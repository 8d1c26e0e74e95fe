//! Mode-indexed construction of the linear Weingarten identity chains.
//!
//! Everything here is built from four mode constants. With eps the causal
//! sign of the ambient (Euclidean +1, Lorentzian +1 or -1 by the profile's
//! causal character) the auxiliary polynomials are
//!
//!   p = 1 + eps*f1^2,   q = 1 + g1^2 (Euclidean) or -1 + g1^2 (Lorentzian),
//!   W = 1 + f1^2 + g1^2 (Euclidean) or 1 + eps*f1^2 - g1^2 (Lorentzian),
//!
//! and the separated curvature pair is F = f2/p, G = eps*g2/q. Two derived
//! signs steer the shared constructors: `cy` composes the y-branch with the
//! x-branch (-1 Euclidean, eps Lorentzian) and `et` weights the /p groups of
//! the third-order combination (+1 Euclidean, eps Lorentzian). `k_sign` is
//! the sign of the Gauss curvature numerator f2*g2.
//!
//! Verifiers in `verify` consume these constructors; the `Mutation` enum
//! lists the deliberate single-site defects used to prove the verifiers can
//! fail.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::derivation::{d_rat, Axis};
use super::poly::{Indet, JetPoly};
use super::ratfunc::RatFunc;
use super::sqrtw::SqrtWExpr;

fn pv(v: Indet) -> JetPoly {
    JetPoly::var(v)
}

fn rv(v: Indet) -> RatFunc {
    RatFunc::var(v)
}

fn rp(p: JetPoly) -> RatFunc {
    RatFunc::from_poly(p)
}

fn f1f2() -> JetPoly {
    &pv(Indet::F1) * &pv(Indet::F2)
}

fn g1g2() -> JetPoly {
    &pv(Indet::G1) * &pv(Indet::G2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    Euclidean,
    LorentzSpacelike,
    LorentzTimelike,
}

impl ChainMode {
    pub const ALL: [ChainMode; 3] = [
        ChainMode::Euclidean,
        ChainMode::LorentzSpacelike,
        ChainMode::LorentzTimelike,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ChainMode::Euclidean => "euclidean",
            ChainMode::LorentzSpacelike => "lorentz-spacelike",
            ChainMode::LorentzTimelike => "lorentz-timelike",
        }
    }

    pub fn is_euclidean(self) -> bool {
        matches!(self, ChainMode::Euclidean)
    }

    /// Causal sign of the f-profile direction.
    pub fn eps(self) -> i64 {
        match self {
            ChainMode::LorentzSpacelike => -1,
            _ => 1,
        }
    }

    /// Weight of the /p groups in the third-order combination.
    pub fn et(self) -> i64 {
        if self.is_euclidean() {
            1
        } else {
            self.eps()
        }
    }

    /// Sign composing the y-branch with the x-branch.
    pub fn cy(self) -> i64 {
        if self.is_euclidean() {
            -1
        } else {
            self.eps()
        }
    }

    /// Sign of the Gauss curvature numerator f2*g2.
    pub fn k_sign(self) -> i64 {
        if self.is_euclidean() {
            1
        } else {
            -1
        }
    }

    /// Sign of dW/dy relative to 2*g1*g2.
    pub fn sy(self) -> i64 {
        if self.is_euclidean() {
            1
        } else {
            -1
        }
    }

    /// The b-group sign of the fifth-order combination that validates
    /// against the derivative of the cleared relation.
    pub fn natural_b_sign(self) -> i64 {
        if self.is_euclidean() {
            1
        } else {
            self.eps()
        }
    }

    pub fn p_name(self) -> &'static str {
        match self {
            ChainMode::LorentzSpacelike => "1-f1^2",
            _ => "1+f1^2",
        }
    }

    pub fn q_name(self) -> &'static str {
        if self.is_euclidean() {
            "1+g1^2"
        } else {
            "-1+g1^2"
        }
    }

    pub fn w_name(self) -> &'static str {
        match self {
            ChainMode::Euclidean => "1+f1^2+g1^2",
            ChainMode::LorentzSpacelike => "1-f1^2-g1^2",
            ChainMode::LorentzTimelike => "1+f1^2-g1^2",
        }
    }
}

/// A deliberate single-site defect. Each one is applied at exactly one
/// construction site, so it breaks exactly the verifier that owns the site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// F built as f2/(1 - eps*f1^2) when the bracket combination is
    /// re-derived from the definitions.
    PerturbFDefinition,
    /// Coefficient 6 of the mixed-derivative square identity becomes 5.
    SquareIdentityCoeff5,
    /// The -4*f1*f2*W term of the cleared-relation x-derivative becomes -3.
    DisplayFourWToThreeW,
    /// The leading 2*f1*f2*g1*g2*(..) term of the second factor flips sign.
    FlipPhiTermSign,
    /// The lambda substitution sends g3 to -2*lam*g1*g2^2 instead of
    /// +2*lam*g1*g2^2.
    FlipLambdaSubstitutionSign,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::PerturbFDefinition,
        Mutation::SquareIdentityCoeff5,
        Mutation::DisplayFourWToThreeW,
        Mutation::FlipPhiTermSign,
        Mutation::FlipLambdaSubstitutionSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::PerturbFDefinition => "perturb-f-definition",
            Mutation::SquareIdentityCoeff5 => "square-identity-coeff-5",
            Mutation::DisplayFourWToThreeW => "display-four-w-to-three-w",
            Mutation::FlipPhiTermSign => "flip-phi-term-sign",
            Mutation::FlipLambdaSubstitutionSign => "flip-lambda-substitution-sign",
        }
    }

    pub fn from_name(s: &str) -> Option<Mutation> {
        Mutation::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// The polynomials and rational functions of one ambient mode.
#[derive(Debug, Clone)]
pub struct ModeData {
    pub mode: ChainMode,
    pub p: JetPoly,
    pub q: JetPoly,
    pub w: JetPoly,
    pub cap_f: RatFunc,
    pub cap_g: RatFunc,
}

impl ModeData {
    pub fn new(mode: ChainMode) -> ModeData {
        let eps = mode.eps();
        let f1sq = &pv(Indet::F1) * &pv(Indet::F1);
        let g1sq = &pv(Indet::G1) * &pv(Indet::G1);
        let p = &JetPoly::one() + &f1sq.scale_int(eps);
        let q = if mode.is_euclidean() {
            &JetPoly::one() + &g1sq
        } else {
            &JetPoly::int(-1) + &g1sq
        };
        let w = if mode.is_euclidean() {
            &(&JetPoly::one() + &f1sq) + &g1sq
        } else {
            &(&JetPoly::one() + &f1sq.scale_int(eps)) - &g1sq
        };
        let cap_f = RatFunc::new(pv(Indet::F2), p.clone());
        let cap_g = RatFunc::new(pv(Indet::G2).scale_int(eps), q.clone());
        ModeData { mode, p, q, w, cap_f, cap_g }
    }

    pub fn s(&self) -> SqrtWExpr {
        SqrtWExpr::sqrt_w(&self.w)
    }

    fn radical(&self, r: RatFunc) -> SqrtWExpr {
        SqrtWExpr::new(RatFunc::zero(), r, self.w.clone())
    }

    pub fn pq(&self) -> JetPoly {
        &self.p * &self.q
    }

    /// Mean curvature numerator f2*q + eps*g2*p.
    pub fn h_num(&self) -> JetPoly {
        &(&pv(Indet::F2) * &self.q) + &(&pv(Indet::G2) * &self.p).scale_int(self.mode.eps())
    }

    /// H = (f2*q + eps*g2*p) / (2*W^(3/2)). The W^(-3/2) is produced by
    /// inverting S*W in the extension, a different route than the printed
    /// S/W^2 forms it gets compared against.
    pub fn mean_curvature(&self) -> SqrtWExpr {
        let s_times_w = self.radical(rp(self.w.clone()));
        s_times_w.recip().scale(&RatFunc::new(self.h_num(), JetPoly::int(2)))
    }

    /// K = k_sign * f2*g2 / W^2.
    pub fn gauss_curvature(&self) -> RatFunc {
        RatFunc::new(
            (&pv(Indet::F2) * &pv(Indet::G2)).scale_int(self.mode.k_sign()),
            &self.w * &self.w,
        )
    }

    /// The homogeneous curvature combination written over W^2:
    /// a*(f2*q + eps*g2*p)*S/W^2 + k_sign*b*f2*g2/W^2.
    pub fn homogeneous_display(&self) -> SqrtWExpr {
        let w2 = &self.w * &self.w;
        SqrtWExpr::new(
            RatFunc::new(
                (&(&pv(Indet::B) * &pv(Indet::F2)) * &pv(Indet::G2)).scale_int(self.mode.k_sign()),
                w2.clone(),
            ),
            RatFunc::new(&pv(Indet::A) * &self.h_num(), w2),
            self.w.clone(),
        )
    }

    /// a*(F+G)*S + k_sign*eps*b*F*G with the supplied F and G.
    pub fn efg_combination(&self, cap_f: &RatFunc, cap_g: &RatFunc) -> SqrtWExpr {
        let sum = cap_f + cap_g;
        let prod = cap_f * cap_g;
        SqrtWExpr::new(
            (&rv(Indet::B) * &prod).scale_int(self.mode.k_sign() * self.mode.eps()),
            &rv(Indet::A) * &sum,
            self.w.clone(),
        )
    }

    /// The bracket form with the quotients written out literally.
    pub fn bracket_form(&self) -> SqrtWExpr {
        let f_lit = RatFunc::new(pv(Indet::F2), self.p.clone());
        let g_lit = RatFunc::new(pv(Indet::G2).scale_int(self.mode.eps()), self.q.clone());
        self.efg_combination(&f_lit, &g_lit)
    }

    /// The sqrt relation a*(F+G)*S + b*F*G - v*W^2/(p*q); v is the sign of
    /// the right-hand side being read (the validated reading is v = +1 in
    /// every mode).
    pub fn sqrt_relation(&self, v: i64) -> SqrtWExpr {
        let prod = &self.cap_f * &self.cap_g;
        let plain = &(&rv(Indet::B) * &prod)
            - &RatFunc::new((&self.w * &self.w).scale_int(v), self.pq());
        SqrtWExpr::new(plain, &rv(Indet::A) * &(&self.cap_f + &self.cap_g), self.w.clone())
    }

    /// The relation cleared of denominators:
    /// a*(f2*q + eps*g2*p)*S + eps*b*f2*g2 - W^2.
    pub fn cleared_relation(&self) -> SqrtWExpr {
        let plain = &(&(&pv(Indet::B) * &pv(Indet::F2)) * &pv(Indet::G2))
            .scale_int(self.mode.eps())
            - &(&self.w * &self.w);
        SqrtWExpr::new(rp(plain), rp(&pv(Indet::A) * &self.h_num()), self.w.clone())
    }

    pub fn cap_f_prime(&self) -> RatFunc {
        d_rat(Axis::X, &self.cap_f).expect("third-order jets suffice for F'")
    }

    pub fn cap_g_prime(&self) -> RatFunc {
        d_rat(Axis::Y, &self.cap_g).expect("third-order jets suffice for G'")
    }

    /// The multiplier 2*et/p + 2*cy/q that carries the W^2 elimination in
    /// the third-order reconstruction.
    pub fn elimination_multiplier(&self) -> RatFunc {
        &RatFunc::new(JetPoly::int(2 * self.mode.et()), self.p.clone())
            + &RatFunc::new(JetPoly::int(2 * self.mode.cy()), self.q.clone())
    }

    /// (a-bracket, b-bracket) of the third-order combination:
    ///   a: F'/(f1*f2) + 2*et*(F+G)/p + cy*G'/(g1*g2) + 2*cy*(F+G)/q
    ///   b: the same four groups, each carrying the complementary factor.
    pub fn third_brackets(&self) -> (RatFunc, RatFunc) {
        let et = self.mode.et();
        let cy = self.mode.cy();
        let fp = self.cap_f_prime();
        let gp = self.cap_g_prime();
        let sum = &self.cap_f + &self.cap_g;
        let over_ff = RatFunc::new(JetPoly::one(), f1f2());
        let over_gg = RatFunc::new(JetPoly::one(), g1g2());
        let over_p = RatFunc::new(JetPoly::int(2 * et), self.p.clone());
        let over_q = RatFunc::new(JetPoly::int(2 * cy), self.q.clone());
        let mut a_br = &(&(&fp * &over_ff) + &(&sum * &over_p))
            + &(&(&gp * &over_gg).scale_int(cy) + &(&sum * &over_q));
        let prod = &self.cap_f * &self.cap_g;
        let mut b_br = &(&(&(&fp * &self.cap_g) * &over_ff) + &(&prod * &over_p))
            + &(&(&(&self.cap_f * &gp) * &over_gg).scale_int(cy) + &(&prod * &over_q));
        let basis = [self.p.clone(), self.q.clone()];
        a_br.reduce_with(&basis);
        b_br.reduce_with(&basis);
        (a_br, b_br)
    }

    pub fn third_display(&self) -> SqrtWExpr {
        let (a_br, b_br) = self.third_brackets();
        SqrtWExpr::new(&rv(Indet::B) * &b_br, &rv(Indet::A) * &a_br, self.w.clone())
    }

    /// (a-bracket, b-bracket) of the fifth-order combination:
    ///   a: f3*q/(f1*f2) + 2*g2 + 2*cy*f2 + cy*et*p*g3/(g1*g2)
    ///   b: sb*cy*(f2*g3/(g1*g2) + cy*g2*f3/(f1*f2))
    /// where sb is the searched b-group sign.
    pub fn fifth_brackets(&self, sb: i64) -> (RatFunc, RatFunc) {
        let et = self.mode.et();
        let cy = self.mode.cy();
        let a_br = &(&RatFunc::new(&pv(Indet::F3) * &self.q, f1f2())
            + &rv(Indet::G2).scale_int(2))
            + &(&rv(Indet::F2).scale_int(2 * cy)
                + &RatFunc::new((&self.p * &pv(Indet::G3)).scale_int(cy * et), g1g2()));
        let core = &RatFunc::new(&pv(Indet::F2) * &pv(Indet::G3), g1g2())
            + &RatFunc::new((&pv(Indet::G2) * &pv(Indet::F3)).scale_int(cy), f1f2());
        (a_br, core.scale_int(sb * cy))
    }

    pub fn fifth_display(&self, sb: i64) -> SqrtWExpr {
        let (a_br, b_br) = self.fifth_brackets(sb);
        SqrtWExpr::new(&rv(Indet::B) * &b_br, &rv(Indet::A) * &a_br, self.w.clone())
    }

    /// What the x-derivative of the sqrt relation prints as:
    /// a*(F'*S + (F+G)*eps*f1*f2*S/W) + b*F'*G
    ///   - 4*eps*f1*f2*W/(p*q) + 2*eps*f1*f2*W^2/(p^2*q).
    pub fn relation_x_derivative_display(&self) -> SqrtWExpr {
        let eps = self.mode.eps();
        let fp = self.cap_f_prime();
        let sum = &self.cap_f + &self.cap_g;
        let rad = &rv(Indet::A)
            * &(&fp + &(&sum * &RatFunc::new(f1f2().scale_int(eps), self.w.clone())));
        let w2 = &self.w * &self.w;
        let plain = &(&(&rv(Indet::B) * &(&fp * &self.cap_g))
            - &RatFunc::new((&f1f2() * &self.w).scale_int(4 * eps), self.pq()))
            + &RatFunc::new(
                (&f1f2() * &w2).scale_int(2 * eps),
                &(&self.p * &self.p) * &self.q,
            );
        SqrtWExpr::new(plain, rad, self.w.clone())
    }

    /// The y-counterpart. The middle product has two candidate readings, so
    /// the caller supplies it; see `y_display_b_term_*`.
    pub fn relation_y_derivative_display(&self, b_term: &RatFunc) -> SqrtWExpr {
        let sy = self.mode.sy();
        let gp = self.cap_g_prime();
        let sum = &self.cap_f + &self.cap_g;
        let rad = &rv(Indet::A)
            * &(&gp + &(&sum * &RatFunc::new(g1g2().scale_int(sy), self.w.clone())));
        let w2 = &self.w * &self.w;
        let plain = &(&(&rv(Indet::B) * b_term)
            - &RatFunc::new((&g1g2() * &self.w).scale_int(4 * sy), self.pq()))
            + &RatFunc::new(
                (&g1g2() * &w2).scale_int(2),
                &(&self.q * &self.q) * &self.p,
            );
        SqrtWExpr::new(plain, rad, self.w.clone())
    }

    /// The middle term exactly as printed: b multiplies F'*G.
    pub fn y_display_b_term_literal(&self) -> RatFunc {
        &self.cap_f_prime() * &self.cap_g
    }

    /// The symmetric reading: b multiplies F*G'.
    pub fn y_display_b_term_symmetric(&self) -> RatFunc {
        &self.cap_f * &self.cap_g_prime()
    }

    /// The divided difference of the first derivative pair, with the
    /// symmetric terms already cancelled:
    /// [a*F'*S + b*F'*G]/(f1*f2) + 2*W^2/(p^2*q)
    ///   - [a*G'*S + b*F*G']/(g1*g2) - 2*W^2/(p*q^2).
    pub fn divided_difference_display(&self) -> SqrtWExpr {
        let fp = self.cap_f_prime();
        let gp = self.cap_g_prime();
        let over_ff = RatFunc::new(JetPoly::one(), f1f2());
        let over_gg = RatFunc::new(JetPoly::one(), g1g2());
        let w2 = &self.w * &self.w;
        let rad = &rv(Indet::A) * &(&(&fp * &over_ff) - &(&gp * &over_gg));
        let plain = &(&(&rv(Indet::B)
            * &(&(&(&fp * &self.cap_g) * &over_ff) - &(&(&self.cap_f * &gp) * &over_gg)))
            + &RatFunc::new(w2.scale_int(2), &(&self.p * &self.p) * &self.q))
            - &RatFunc::new(w2.scale_int(2), &(&self.q * &self.q) * &self.p);
        SqrtWExpr::new(plain, rad, self.w.clone())
    }

    /// What the x-derivative of the cleared relation prints as:
    /// a*(f3*q + 2*f1*f2*g2)*S + a*(f2*q + eps*g2*p)*eps*f1*f2*S/W
    ///   + eps*b*f3*g2 - w_coeff*eps*f1*f2*W,  canonically w_coeff = 4.
    pub fn cleared_x_derivative_display(&self, w_coeff: i64) -> SqrtWExpr {
        let eps = self.mode.eps();
        let lead = &(&pv(Indet::F3) * &self.q) + &(&f1f2() * &pv(Indet::G2)).scale_int(2);
        let rad = &(&rv(Indet::A) * &rp(lead))
            + &(&rv(Indet::A)
                * &RatFunc::new((&self.h_num() * &f1f2()).scale_int(eps), self.w.clone()));
        let plain = &(&(&pv(Indet::B) * &pv(Indet::F3)) * &pv(Indet::G2)).scale_int(eps)
            - &(&f1f2() * &self.w).scale_int(w_coeff * eps);
        SqrtWExpr::new(rp(plain), rad, self.w.clone())
    }

    /// The y-counterpart:
    /// a*(2*f2*g1*g2 + eps*g3*p)*S + a*(f2*q + eps*g2*p)*sy*g1*g2*S/W
    ///   + eps*b*f2*g3 - 4*sy*g1*g2*W.
    pub fn cleared_y_derivative_display(&self) -> SqrtWExpr {
        let eps = self.mode.eps();
        let sy = self.mode.sy();
        let lead = &(&pv(Indet::F2) * &g1g2()).scale_int(2)
            + &(&pv(Indet::G3) * &self.p).scale_int(eps);
        let rad = &(&rv(Indet::A) * &rp(lead))
            + &(&rv(Indet::A)
                * &RatFunc::new((&self.h_num() * &g1g2()).scale_int(sy), self.w.clone()));
        let plain = &(&(&pv(Indet::B) * &pv(Indet::F2)) * &pv(Indet::G3)).scale_int(eps)
            - &(&g1g2() * &self.w).scale_int(4 * sy);
        SqrtWExpr::new(rp(plain), rad, self.w.clone())
    }

    /// First factor of the cross-product numerator:
    /// f1*f2^2*g3 + cy*f3*g1*g2^2.
    pub fn phi1(&self) -> JetPoly {
        let t1 = &(&f1f2() * &pv(Indet::F2)) * &pv(Indet::G3);
        let t2 = &(&pv(Indet::F3) * &g1g2()) * &pv(Indet::G2);
        &t1 + &t2.scale_int(self.mode.cy())
    }

    /// Second factor of the cross-product numerator, written literally per
    /// mode. `flip_first` negates the leading 2*f1*f2*g1*g2*(..) term.
    pub fn phi2(&self, flip_first: bool) -> JetPoly {
        let eps = self.mode.eps();
        let ffgg = &f1f2() * &g1g2();
        let (t1, t2, t3);
        if self.mode.is_euclidean() {
            t1 = (&ffgg * &(&pv(Indet::F2) - &pv(Indet::G2))).scale_int(2);
            t2 = &(&f1f2() * &self.p) * &pv(Indet::G3);
            t3 = (&(&pv(Indet::F3) * &self.q) * &g1g2()).scale_int(-1);
        } else {
            t1 = (&ffgg * &(&pv(Indet::F2) + &pv(Indet::G2).scale_int(eps))).scale_int(2);
            let f1sq_eps = &(&pv(Indet::F1) * &pv(Indet::F1)) + &JetPoly::int(eps);
            t2 = &(&f1f2() * &f1sq_eps) * &pv(Indet::G3);
            let g1sq_m1 = &(&pv(Indet::G1) * &pv(Indet::G1)) - &JetPoly::one();
            t3 = (&(&pv(Indet::F3) * &g1g2()) * &g1sq_m1).scale_int(eps);
        }
        &(if flip_first { -&t1 } else { t1 }) + &(&t2 + &t3)
    }

    /// Denominator cleared from the third-order brackets.
    pub fn d3_clear(&self) -> JetPoly {
        &(&f1f2() * &g1g2()) * &(&self.pq() * &self.pq())
    }

    /// Denominator cleared from the fifth-order brackets.
    pub fn d5_clear(&self) -> JetPoly {
        &f1f2() * &g1g2()
    }
}

/// The four rational functions of the two bracket equations, read as
/// P1*S = Q1 and P2*S = Q2. Q1 keeps the third-order b-group on the left
/// side (uncrossed), Q2 carries the fifth-order b-group across the equality;
/// this mixed reading is what makes the cross product P1*Q2 - P2*Q1 a
/// nonzero multiple of the two factors instead of vanishing identically.
#[derive(Debug, Clone)]
pub struct BracketPairs {
    pub p1: RatFunc,
    pub q1: RatFunc,
    pub p2: RatFunc,
    pub q2: RatFunc,
}

pub fn build_bracket_pairs(data: &ModeData, sb: i64) -> BracketPairs {
    let (a3, b3) = data.third_brackets();
    let (a5, b5) = data.fifth_brackets(sb);
    BracketPairs {
        p1: &rv(Indet::A) * &a3,
        q1: &rv(Indet::B) * &b3,
        p2: &rv(Indet::A) * &a5,
        q2: -&(&rv(Indet::B) * &b5),
    }
}

pub fn subst_rat(r: &RatFunc, v: Indet, rep: &JetPoly) -> RatFunc {
    RatFunc::new(r.num.subst(v, rep), r.den.subst(v, rep))
}

pub fn subst_sqrt(e: &SqrtWExpr, v: Indet, rep: &JetPoly) -> SqrtWExpr {
    SqrtWExpr::new(
        subst_rat(&e.plain, v, rep),
        subst_rat(&e.radical, v, rep),
        e.w.subst(v, rep),
    )
}

pub fn half_of(v: Indet) -> JetPoly {
    pv(v).scale(&BigRational::new(BigInt::from(1), BigInt::from(2)))
}
