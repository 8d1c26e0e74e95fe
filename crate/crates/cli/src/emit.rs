//! Output formatting and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use weingarten_core::{CurvatureSample, GridSpec, ProfileRow, TranslationSurface};

use crate::input::CliError;

/// 17 significant digits: round-trips f64 exactly and keeps files
/// byte-stable across runs.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn curvature_csv(samples: &[CurvatureSample]) -> String {
    let mut out = String::from("x,y,H,K,W,valid\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f(s.x),
            fmt_f(s.y),
            fmt_f(s.h),
            fmt_f(s.k),
            fmt_f(s.w),
            s.valid
        ));
    }
    out
}

pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("x,f,fp\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", fmt_f(r.x), fmt_f(r.f), fmt_f(r.fp)));
    }
    out
}

/// Wavefront OBJ: one `v` line per valid grid vertex (row-major, x outer),
/// one quad face per cell whose four corners are all valid. Face indices are
/// 1-based positions among the emitted vertices.
pub fn mesh_obj(
    surface: &TranslationSurface,
    grid: &GridSpec,
    samples: &[CurvatureSample],
) -> Result<String, CliError> {
    let (nx, ny) = (grid.x_count, grid.y_count);
    debug_assert_eq!(samples.len(), nx * ny);
    let mut index = vec![0usize; nx * ny];
    let mut vertices = String::new();
    let mut emitted = 0usize;
    for (i, s) in samples.iter().enumerate() {
        if !s.valid {
            continue;
        }
        let im = surface
            .graph_immersion(s.x, s.y)
            .map_err(|e| CliError::Internal(format!("immersion at valid sample: {e}")))?;
        emitted += 1;
        index[i] = emitted;
        vertices.push_str(&format!(
            "v {} {} {}\n",
            fmt_f(im.pos[0]),
            fmt_f(im.pos[1]),
            fmt_f(im.pos[2])
        ));
    }
    let mut faces = String::new();
    let mut quads = 0usize;
    for ix in 0..nx - 1 {
        for iy in 0..ny - 1 {
            let a = index[ix * ny + iy];
            let b = index[(ix + 1) * ny + iy];
            let c = index[(ix + 1) * ny + iy + 1];
            let d = index[ix * ny + iy + 1];
            if a > 0 && b > 0 && c > 0 && d > 0 {
                quads += 1;
                faces.push_str(&format!("f {a} {b} {c} {d}\n"));
            }
        }
    }
    if quads == 0 {
        return Err(CliError::NoValidData("no grid cell has four valid corners".into()));
    }
    Ok(format!("# translation surface mesh: {emitted} vertices, {quads} quads\n{vertices}{faces}"))
}

/// Write to the destination's directory under a temporary name, then rename
/// into place, so failures never leave a partial file at the target path.
/// `None` writes to standard output.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    let Some(path) = out else {
        return std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()));
    };
    let mut tmp_name = path
        .file_name()
        .ok_or_else(|| CliError::Spec(format!("output path {} has no file name", path.display())))?
        .to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let write = || -> std::io::Result<()> {
        fs::write(&tmp, content)?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Io(format!("writing {}: {e}", path.display()))
    })
}
