//! Translation surfaces and their curvature.
//!
//! A translation surface is a graph built from two one-variable profiles.
//! In Euclidean space it is z = f(x) + g(y). In Lorentz-Minkowski space
//! (inner product x^2 + y^2 - z^2) the same construction appears in three
//! charts: spacelike surfaces as z = f(x) + g(y), timelike ones as
//! y = f(x) + g(z) or x = f(y) + g(z). The curvature formulas below keep the
//! profile derivatives f', f'', g', g'' and the metric factor
//! W = 1 + eps f'^2 - g'^2 (Lorentz) or W = 1 + f'^2 + g'^2 (Euclidean).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_profile, EvalError, ExprAst, ParseError};
use crate::jet::{Jet3, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    #[serde(rename = "euclidean")]
    Euclidean,
    /// z = f(x) + g(y), induced metric positive definite where W > 0.
    #[serde(rename = "lorentz-spacelike")]
    LorentzSpacelike,
    /// y = f(x) + g(z).
    #[serde(rename = "lorentz-timelike-xz")]
    LorentzTimelikeXZ,
    /// x = f(y) + g(z).
    #[serde(rename = "lorentz-timelike-yz")]
    LorentzTimelikeYZ,
}

impl Ambient {
    pub fn is_lorentzian(self) -> bool {
        self != Ambient::Euclidean
    }

    /// Causal sign: -1 for spacelike surfaces, +1 for timelike ones.
    /// Meaningless for Euclidean ambient.
    pub fn epsilon(self) -> f64 {
        match self {
            Ambient::LorentzSpacelike => -1.0,
            _ => 1.0,
        }
    }
}

/// One profile function: either a parsed expression or a closed-form family
/// member evaluated directly in jet arithmetic.
#[derive(Debug, Clone)]
pub enum Profile {
    Expr { source: String, ast: ExprAst },
    /// Identically zero.
    Zero,
    /// t^2.
    Square,
    /// -log(cos(lambda^2 t))/lambda^2. With its partner [`Profile::ScherkG`]
    /// this builds the minimal translation surface whose Gauss curvature at
    /// the origin is -lambda^4; the inner scale lambda^2 makes the pair
    /// minimal for every lambda, not only lambda = 1.
    ScherkF { lambda: f64 },
    /// +log(cos(lambda^2 t))/lambda^2.
    ScherkG { lambda: f64 },
    /// Tabulated solution of f'' = lambda (1 + f'^2), interpolated.
    Sampled(SampledProfile),
}

/// Profile given by rows (x, f, f') of an integrated table, evaluated with
/// cubic Hermite pieces. The second and third jet coordinates come from the
/// generating equation itself: f'' = lambda (1 + f'^2) and its derivative
/// f''' = 2 lambda f' f''.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    /// (x, f, f') rows with strictly increasing x.
    pub rows: std::sync::Arc<Vec<(f64, f64, f64)>>,
    pub lambda: f64,
}

impl SampledProfile {
    pub fn span(&self) -> (f64, f64) {
        (self.rows.first().map(|r| r.0).unwrap_or(0.0), self.rows.last().map(|r| r.0).unwrap_or(0.0))
    }

    fn eval(&self, t: f64) -> Result<Jet3, JetError> {
        let rows = &self.rows;
        let (lo, hi) = self.span();
        if rows.len() < 2 || t < lo || t > hi {
            return Err(JetError::Domain { op: "sampled profile", arg: t });
        }
        // Last interval whose left node is <= t.
        let i = rows.partition_point(|r| r.0 <= t).saturating_sub(1).min(rows.len() - 2);
        let (x0, f0, p0) = rows[i];
        let (x1, f1, p1) = rows[i + 1];
        let h = x1 - x0;
        let s = (t - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let c0 = f0 * h00 + h * p0 * h10 + f1 * h01 + h * p1 * h11;
        // f' interpolated from the (x, f') table with slopes given by the
        // generating equation at the nodes.
        let q0 = self.lambda * (1.0 + p0 * p0);
        let q1 = self.lambda * (1.0 + p1 * p1);
        let c1 = p0 * h00 + h * q0 * h10 + p1 * h01 + h * q1 * h11;
        let c2 = self.lambda * (1.0 + c1 * c1);
        let c3 = 2.0 * self.lambda * c1 * c2;
        Ok(Jet3::new(c0, c1, c2, c3))
    }
}

impl Profile {
    pub fn from_source(source: &str) -> Result<Profile, ParseError> {
        let ast = parse_profile(source)?;
        Ok(Profile::Expr { source: source.to_string(), ast })
    }

    pub fn eval(&self, t: f64) -> Result<Jet3, EvalError> {
        let family = |r: Result<Jet3, JetError>| {
            r.map_err(|inner| EvalError { inner, start: 0, end: 0 })
        };
        match self {
            Profile::Expr { ast, .. } => ast.eval_jet(t),
            Profile::Zero => Ok(Jet3::constant(0.0)),
            Profile::Square => {
                let v = Jet3::variable(t);
                Ok(v * v)
            }
            Profile::ScherkF { lambda } => {
                let mu = lambda * lambda;
                let u = Jet3::variable(t) * mu;
                family(u.cos().log()).map(|j| j * (-1.0 / mu))
            }
            Profile::ScherkG { lambda } => {
                let mu = lambda * lambda;
                let u = Jet3::variable(t) * mu;
                family(u.cos().log()).map(|j| j * (1.0 / mu))
            }
            Profile::Sampled(table) => family(table.eval(t)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TranslationSurface {
    pub f: Profile,
    pub g: Profile,
    pub ambient: Ambient,
    pub domain_f: (f64, f64),
    pub domain_g: (f64, f64),
}

/// Curvature data at one grid point. When `valid` is false the flagged
/// quantities are NaN and `invalid_reason` says why the point was rejected
/// (profile domain error, or non-positive W on a Lorentzian surface; in the
/// latter case `w` still carries the computed value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub x: f64,
    pub y: f64,
    pub h: f64,
    pub k: f64,
    pub w: f64,
    pub valid: bool,
    pub invalid_reason: Option<&'static str>,
}

impl CurvatureSample {
    fn invalid(x: f64, y: f64, w: f64, reason: &'static str) -> Self {
        CurvatureSample { x, y, h: f64::NAN, k: f64::NAN, w, valid: false, invalid_reason: Some(reason) }
    }
}

/// Uniform sampling grid. Row-major order: x is the outer (row) index, y the
/// inner one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_start: f64,
    pub x_stop: f64,
    pub x_count: usize,
    pub y_start: f64,
    pub y_stop: f64,
    pub y_count: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), SurfaceError> {
        if self.x_count < 2 || self.y_count < 2 {
            return Err(SurfaceError::InvalidGrid("each axis needs at least 2 points".into()));
        }
        if !(self.x_start < self.x_stop) || !(self.y_start < self.y_stop) {
            return Err(SurfaceError::InvalidGrid("start must be below stop on each axis".into()));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_start, self.x_stop, self.x_count)
    }

    pub fn ys(&self) -> Vec<f64> {
        linspace(self.y_start, self.y_stop, self.y_count)
    }
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let step = (stop - start) / (count - 1) as f64;
    (0..count).map(|i| start + step * i as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid leaves the surface's domain rectangle")]
    GridOutsideDomain,
    #[error("no admissible samples")]
    NoAdmissibleSamples,
    #[error("degenerate metric at ({x}, {y}): |EG - F^2| = {det:.3e}")]
    DegenerateMetric { x: f64, y: f64, det: f64 },
}

impl TranslationSurface {
    /// H, K, W at (x, y) from the profile jets.
    ///
    /// Euclidean: W = 1 + f'^2 + g'^2,
    ///   H = (f''(1+g'^2) + g''(1+f'^2)) / (2 W^(3/2)),
    ///   K = f''g'' / W^2.
    /// Lorentzian (eps = -1 spacelike, +1 timelike): W = 1 + eps f'^2 - g'^2,
    ///   H = eps(-eps f''(1-g'^2) + g''(1+eps f'^2)) / (2 W^(3/2)),
    ///   K = -f''g'' / W^2,
    /// valid only where W > 0.
    pub fn translation_curvature(&self, x: f64, y: f64) -> CurvatureSample {
        let (fj, gj) = match (self.f.eval(x), self.g.eval(y)) {
            (Ok(fj), Ok(gj)) => (fj, gj),
            _ => return CurvatureSample::invalid(x, y, f64::NAN, "profile domain error"),
        };
        let (f1, f2) = (fj.c1, fj.c2);
        let (g1, g2) = (gj.c1, gj.c2);
        match self.ambient {
            Ambient::Euclidean => {
                let w = 1.0 + f1 * f1 + g1 * g1;
                let h = (f2 * (1.0 + g1 * g1) + g2 * (1.0 + f1 * f1)) / (2.0 * w.powf(1.5));
                let k = f2 * g2 / (w * w);
                CurvatureSample { x, y, h, k, w, valid: true, invalid_reason: None }
            }
            _ => {
                let eps = self.ambient.epsilon();
                let w = 1.0 + eps * f1 * f1 - g1 * g1;
                if w <= 0.0 {
                    return CurvatureSample::invalid(x, y, w, "metric not positive (W <= 0)");
                }
                let h = eps * (-eps * f2 * (1.0 - g1 * g1) + g2 * (1.0 + eps * f1 * f1))
                    / (2.0 * w.powf(1.5));
                let k = -f2 * g2 / (w * w);
                CurvatureSample { x, y, h, k, w, valid: true, invalid_reason: None }
            }
        }
    }

    /// Position and partial derivatives of the graph chart at (x, y), for the
    /// general-parametrization engine and for mesh export.
    pub fn graph_immersion(&self, x: f64, y: f64) -> Result<ImmersionJet, EvalError> {
        let fj = self.f.eval(x)?;
        let gj = self.g.eval(y)?;
        let (f0, f1, f2) = (fj.c0, fj.c1, fj.c2);
        let (g0, g1, g2) = (gj.c0, gj.c1, gj.c2);
        let z = f0 + g0;
        Ok(match self.ambient {
            // Graph z = f(x) + g(y); parameters (u, v) = (x, y).
            Ambient::Euclidean | Ambient::LorentzSpacelike => ImmersionJet {
                pos: [x, y, z],
                xu: [1.0, 0.0, f1],
                xv: [0.0, 1.0, g1],
                xuu: [0.0, 0.0, f2],
                xuv: [0.0; 3],
                xvv: [0.0, 0.0, g2],
            },
            // Graph y = f(x) + g(z); parameters (u, v) = (x, z).
            Ambient::LorentzTimelikeXZ => ImmersionJet {
                pos: [x, z, y],
                xu: [1.0, f1, 0.0],
                xv: [0.0, g1, 1.0],
                xuu: [0.0, f2, 0.0],
                xuv: [0.0; 3],
                xvv: [0.0, g2, 0.0],
            },
            // Graph x = f(y) + g(z); parameters (u, v) = (z, y), in that
            // order so the normal orientation matches the profile formulas.
            Ambient::LorentzTimelikeYZ => ImmersionJet {
                pos: [z, x, y],
                xu: [g1, 0.0, 1.0],
                xv: [f1, 1.0, 0.0],
                xuu: [g2, 0.0, 0.0],
                xuv: [0.0; 3],
                xvv: [f2, 0.0, 0.0],
            },
        })
    }

    /// Samples the grid row-major. Invalid points are kept, flagged; only a
    /// grid with no valid point at all is an error.
    pub fn sample_grid(&self, grid: &GridSpec) -> Result<Vec<CurvatureSample>, SurfaceError> {
        grid.validate()?;
        if grid.x_start < self.domain_f.0
            || grid.x_stop > self.domain_f.1
            || grid.y_start < self.domain_g.0
            || grid.y_stop > self.domain_g.1
        {
            return Err(SurfaceError::GridOutsideDomain);
        }
        let ys = grid.ys();
        let mut out = Vec::with_capacity(grid.x_count * grid.y_count);
        for x in grid.xs() {
            for &y in &ys {
                out.push(self.translation_curvature(x, y));
            }
        }
        if out.iter().all(|s| !s.valid) {
            return Err(SurfaceError::NoAdmissibleSamples);
        }
        Ok(out)
    }
}

/// First and second partial derivatives of an immersion at a point.
#[derive(Debug, Clone, Copy)]
pub struct ImmersionJet {
    pub pos: [f64; 3],
    pub xu: [f64; 3],
    pub xv: [f64; 3],
    pub xuu: [f64; 3],
    pub xuv: [f64; 3],
    pub xvv: [f64; 3],
}

fn dot(ambient: Ambient, a: [f64; 3], b: [f64; 3]) -> f64 {
    let zsign = if ambient.is_lorentzian() { -1.0 } else { 1.0 };
    a[0] * b[0] + a[1] * b[1] + zsign * a[2] * b[2]
}

fn cross(ambient: Ambient, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    if ambient.is_lorentzian() {
        [c[0], c[1], -c[2]]
    } else {
        c
    }
}

/// Curvature from first/second fundamental forms of an arbitrary immersion:
/// H = eps (eG - 2fF + gE) / (2(EG - F^2)), K = eps (eg - f^2)/(EG - F^2),
/// with eps = 1 in the Euclidean case.
pub fn general_curvature(
    im: &ImmersionJet,
    ambient: Ambient,
    x: f64,
    y: f64,
) -> Result<CurvatureSample, SurfaceError> {
    let e1 = dot(ambient, im.xu, im.xu);
    let f1 = dot(ambient, im.xu, im.xv);
    let g1 = dot(ambient, im.xv, im.xv);
    let det = e1 * g1 - f1 * f1;
    if det.abs() < 1e-12 {
        return Err(SurfaceError::DegenerateMetric { x, y, det });
    }
    let n = cross(ambient, im.xu, im.xv);
    let nn = dot(ambient, n, n);
    let scale = 1.0 / nn.abs().sqrt();
    let n = [n[0] * scale, n[1] * scale, n[2] * scale];
    let le = dot(ambient, im.xuu, n);
    let lf = dot(ambient, im.xuv, n);
    let lg = dot(ambient, im.xvv, n);
    let eps = if ambient.is_lorentzian() { ambient.epsilon() } else { 1.0 };
    let h = eps * (le * g1 - 2.0 * lf * f1 + lg * e1) / (2.0 * det);
    let k = eps * (le * lg - lf * lf) / det;
    // The metric factor W equals EG - F^2 up to the chart's sign: it is
    // det for graphs over (x, y), -det for the timelike charts.
    let w = match ambient {
        Ambient::Euclidean | Ambient::LorentzSpacelike => det,
        _ => -det,
    };
    let valid = !ambient.is_lorentzian() || w > 0.0;
    Ok(CurvatureSample {
        x,
        y,
        h,
        k,
        w,
        valid,
        invalid_reason: if valid { None } else { Some("metric not positive (W <= 0)") },
    })
}

/// Serialized surface document.
///
/// ```json
/// { "ambient": "euclidean", "f": "t^2", "g": {"family": "scherk", "lambda": 1.0},
///   "domain_f": [-1.0, 1.0], "domain_g": [-1.0, 1.0] }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub ambient: Ambient,
    pub f: ProfileSpec,
    pub g: ProfileSpec,
    pub domain_f: [f64; 2],
    pub domain_g: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Expression(String),
    Family {
        family: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
    },
}

/// Which slot of the surface a profile occupies; the Scherk family's two
/// profiles differ by sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    F,
    G,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("profile expression: {0}")]
    Expr(#[from] ParseError),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` needs lambda > 0, got {lambda}")]
    BadLambda { family: String, lambda: f64 },
    #[error("domain bounds must satisfy lo < hi, got [{0}, {1}]")]
    BadDomain(f64, f64),
}

impl ProfileSpec {
    pub fn build(&self, slot: Slot) -> Result<Profile, SpecError> {
        match self {
            ProfileSpec::Expression(src) => Ok(Profile::from_source(src)?),
            ProfileSpec::Family { family, lambda } => match family.as_str() {
                "plane" => Ok(Profile::Zero),
                "cylinder" => Ok(match slot {
                    Slot::F => Profile::Square,
                    Slot::G => Profile::Zero,
                }),
                "paraboloid" => Ok(Profile::Square),
                "scherk" => {
                    let lambda = lambda.unwrap_or(1.0);
                    if !(lambda > 0.0) {
                        return Err(SpecError::BadLambda { family: family.clone(), lambda });
                    }
                    Ok(match slot {
                        Slot::F => Profile::ScherkF { lambda },
                        Slot::G => Profile::ScherkG { lambda },
                    })
                }
                other => Err(SpecError::UnknownFamily(other.to_string())),
            },
        }
    }
}

impl Profile {
    /// Serializable form; `None` for tabulated profiles, which have no
    /// expression-level description.
    pub fn to_spec(&self) -> Option<ProfileSpec> {
        match self {
            Profile::Expr { source, .. } => Some(ProfileSpec::Expression(source.clone())),
            Profile::Zero => Some(ProfileSpec::Expression("0".to_string())),
            Profile::Square => Some(ProfileSpec::Expression("t^2".to_string())),
            Profile::ScherkF { lambda } | Profile::ScherkG { lambda } => Some(ProfileSpec::Family {
                family: "scherk".to_string(),
                lambda: Some(*lambda),
            }),
            Profile::Sampled(_) => None,
        }
    }
}

impl TranslationSurface {
    pub fn from_spec(spec: &SurfaceSpec) -> Result<Self, SpecError> {
        for d in [spec.domain_f, spec.domain_g] {
            if !(d[0] < d[1]) {
                return Err(SpecError::BadDomain(d[0], d[1]));
            }
        }
        Ok(TranslationSurface {
            f: spec.f.build(Slot::F)?,
            g: spec.g.build(Slot::G)?,
            ambient: spec.ambient,
            domain_f: (spec.domain_f[0], spec.domain_f[1]),
            domain_g: (spec.domain_g[0], spec.domain_g[1]),
        })
    }

    /// Serializable form; `None` when either profile is tabulated.
    pub fn to_spec(&self) -> Option<SurfaceSpec> {
        Some(SurfaceSpec {
            ambient: self.ambient,
            f: self.f.to_spec()?,
            g: self.g.to_spec()?,
            domain_f: [self.domain_f.0, self.domain_f.1],
            domain_g: [self.domain_g.0, self.domain_g.1],
        })
    }
}
