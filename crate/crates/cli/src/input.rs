//! Flag parsing beyond clap: grid syntax, surface resolution, exit-code
//! mapping.

use clap::Args;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use weingarten_core::{
    make_family, Ambient, Family, GridSpec, Profile, SurfaceError, SurfaceSpec,
    TranslationSurface,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, expressions, JSON, or parameters: exit 2.
    Spec(String),
    /// The grid produced nothing usable: exit 3.
    NoValidData(String),
    /// I/O or serialization trouble: exit 1.
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Spec(_) => 2,
            CliError::NoValidData(_) => 3,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }

    pub fn from_surface(e: SurfaceError) -> CliError {
        match e {
            SurfaceError::NoAdmissibleSamples => CliError::NoValidData(e.to_string()),
            _ => CliError::Spec(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Spec(m)
            | CliError::NoValidData(m)
            | CliError::Io(m)
            | CliError::Internal(m) => f.write_str(m),
        }
    }
}

/// Surface selection shared by curvature, fit, and mesh: a closed-form
/// family, an inline expression pair, or a JSON document.
#[derive(Args)]
pub struct SurfaceArgs {
    /// Closed-form family: plane, cylinder, paraboloid, or scherk.
    #[arg(long, conflicts_with_all = ["f", "g", "surface"])]
    pub family: Option<String>,
    /// Scherk parameter (> 0); defaults to 1.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Profile expression f(t) for the x direction.
    #[arg(long, requires = "g", conflicts_with = "surface")]
    pub f: Option<String>,
    /// Profile expression g(t) for the y direction.
    #[arg(long, requires = "f", conflicts_with = "surface")]
    pub g: Option<String>,
    /// Ambient space for --f/--g: euclidean, lorentz-spacelike,
    /// lorentz-timelike-xz, or lorentz-timelike-yz.
    #[arg(long)]
    pub ambient: Option<String>,
    /// Path to a surface JSON document.
    #[arg(long)]
    pub surface: Option<PathBuf>,
}

pub fn parse_family(
    name: &str,
    lambda: Option<f64>,
    profile: Option<&str>,
) -> Result<Family, CliError> {
    let family = match name {
        "plane" => Family::Plane,
        "cylinder" => Family::Cylinder(profile.unwrap_or("t^2").to_string()),
        "paraboloid" => Family::Paraboloid,
        "scherk" => Family::Scherk(lambda.unwrap_or(1.0)),
        other => {
            return Err(CliError::Spec(format!(
                "unknown family '{other}' (expected plane, cylinder, paraboloid, or scherk)"
            )))
        }
    };
    if lambda.is_some() && !matches!(family, Family::Scherk(_)) {
        return Err(CliError::Spec("--lambda applies only to the scherk family".into()));
    }
    if profile.is_some() && !matches!(family, Family::Cylinder(_)) {
        return Err(CliError::Spec("--profile applies only to the cylinder family".into()));
    }
    Ok(family)
}

fn parse_ambient(s: &str) -> Result<Ambient, CliError> {
    match s {
        "euclidean" => Ok(Ambient::Euclidean),
        "lorentz-spacelike" => Ok(Ambient::LorentzSpacelike),
        "lorentz-timelike-xz" => Ok(Ambient::LorentzTimelikeXZ),
        "lorentz-timelike-yz" => Ok(Ambient::LorentzTimelikeYZ),
        other => Err(CliError::Spec(format!("unknown ambient '{other}'"))),
    }
}

pub fn resolve_surface(
    args: &SurfaceArgs,
    grid: &GridSpec,
) -> Result<TranslationSurface, CliError> {
    if let Some(path) = &args.surface {
        if args.lambda.is_some() || args.ambient.is_some() {
            return Err(CliError::Spec(
                "--lambda/--ambient conflict with --surface; set them in the document".into(),
            ));
        }
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Spec(format!("cannot read {}: {e}", path.display())))?;
        let spec: SurfaceSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Spec(format!("bad surface JSON in {}: {e}", path.display())))?;
        return TranslationSurface::from_spec(&spec).map_err(|e| CliError::Spec(e.to_string()));
    }
    if let Some(name) = &args.family {
        if args.ambient.is_some() {
            return Err(CliError::Spec(
                "--ambient applies to --f/--g surfaces; families are Euclidean".into(),
            ));
        }
        let family = parse_family(name, args.lambda, None)?;
        return make_family(&family).map_err(|e| CliError::Spec(e.to_string()));
    }
    if let (Some(f), Some(g)) = (&args.f, &args.g) {
        if args.lambda.is_some() {
            return Err(CliError::Spec("--lambda applies only to --family scherk".into()));
        }
        let ambient = match &args.ambient {
            Some(s) => parse_ambient(s)?,
            None => Ambient::Euclidean,
        };
        // Inline surfaces carry no declared domain; adopt the grid's span.
        return Ok(TranslationSurface {
            f: Profile::from_source(f).map_err(|e| CliError::Spec(e.to_string()))?,
            g: Profile::from_source(g).map_err(|e| CliError::Spec(e.to_string()))?,
            ambient,
            domain_f: (grid.x_start, grid.x_stop),
            domain_g: (grid.y_start, grid.y_stop),
        });
    }
    Err(CliError::Spec("no surface given: use --family, --f/--g, or --surface".into()))
}

/// `start:stop:count,start:stop:count`, x axis first.
pub fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let (xs, ys) = s
        .split_once(',')
        .ok_or_else(|| CliError::Spec(format!("grid '{s}' needs two comma-separated axes")))?;
    let (x_start, x_stop, x_count) = parse_axis(xs)?;
    let (y_start, y_stop, y_count) = parse_axis(ys)?;
    let grid = GridSpec { x_start, x_stop, x_count, y_start, y_stop, y_count };
    grid.validate().map_err(|e| CliError::Spec(e.to_string()))?;
    Ok(grid)
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(CliError::Spec(format!("axis '{s}' must be start:stop:count")));
    };
    let bad = |what: &str| CliError::Spec(format!("axis '{s}': bad {what}"));
    Ok((
        start.parse().map_err(|_| bad("start"))?,
        stop.parse().map_err(|_| bad("stop"))?,
        count.parse().map_err(|_| bad("count"))?,
    ))
}
