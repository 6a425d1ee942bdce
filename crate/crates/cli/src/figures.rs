//! Curve-data emission: one CSV per curve on the default exposure grid,
//! covering the entanglement decay of the same-axis and isotropic channels,
//! the different-axis fidelity/entanglement bundle, and the three-qubit
//! channel's fidelity with its classical threshold.

use std::fs;
use std::path::{Path, PathBuf};

use qteleport::channels::{analytic_channel, Axis, NoiseKind, NoiseSpec};
use qteleport::entanglement::{
    concurrence_mixed, eof_from_concurrence, groverian_from_concurrence,
};
use qteleport::teleport::{average_fidelity_closed_form, classical_threshold_kt};
use qteleport::{Error, Result};

use crate::output::format_significant;
use crate::sweep::grid_points;

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write '{}': {e}", path.display())))
}

fn write_curve(path: &Path, quantity: &str, points: &[(f64, f64)]) -> Result<()> {
    let mut text = format!("kappa_t,{quantity}\n");
    for (kt, v) in points {
        text.push_str(&format_significant(*kt));
        text.push(',');
        text.push_str(&format_significant(*v));
        text.push('\n');
    }
    write_text(path, &text)
}

struct MeasurePoint {
    kt: f64,
    avg_fidelity: f64,
    concurrence: f64,
    eof: f64,
    groverian: f64,
}

fn measures_curve(kind: NoiseKind, grid: &[f64]) -> Result<Vec<MeasurePoint>> {
    let mut rows = Vec::with_capacity(grid.len());
    for &kt in grid {
        let spec = NoiseSpec::new(kind, kt)?;
        let rho = analytic_channel(&spec)?;
        let c = concurrence_mixed(&rho)?;
        rows.push(MeasurePoint {
            kt,
            avg_fidelity: average_fidelity_closed_form(&spec),
            concurrence: c,
            eof: eof_from_concurrence(c)?,
            groverian: groverian_from_concurrence(c)?,
        });
    }
    Ok(rows)
}

/// Writes the curve files for one figure into `directory` (created if
/// missing) and returns the paths.
pub fn emit_figure_data(figure: u8, directory: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(directory).map_err(|e| {
        Error::InvalidArgument(format!("cannot create '{}': {e}", directory.display()))
    })?;
    let grid = grid_points(0.0, 1.0, 0.01);
    let mut written = Vec::new();
    let mut emit = |name: &str, quantity: &str, pts: &[(f64, f64)]| -> Result<()> {
        let path = directory.join(name);
        write_curve(&path, quantity, pts)?;
        written.push(path);
        Ok(())
    };
    match figure {
        2 => {
            let pairs = [
                ("same_axis", NoiseKind::SameAxis(Axis::X)),
                ("isotropic", NoiseKind::Isotropic),
            ];
            for (label, kind) in pairs {
                let rows = measures_curve(kind, &grid)?;
                let eof: Vec<(f64, f64)> = rows.iter().map(|r| (r.kt, r.eof)).collect();
                let grov: Vec<(f64, f64)> = rows.iter().map(|r| (r.kt, r.groverian)).collect();
                emit(&format!("fig2_eof_{label}.csv"), "eof", &eof)?;
                emit(&format!("fig2_groverian_{label}.csv"), "groverian", &grov)?;
            }
        }
        3 => {
            let rows = measures_curve(NoiseKind::DifferentAxis(Axis::X, Axis::Z), &grid)?;
            let fid: Vec<(f64, f64)> = rows.iter().map(|r| (r.kt, r.avg_fidelity)).collect();
            let con: Vec<(f64, f64)> = rows.iter().map(|r| (r.kt, r.concurrence)).collect();
            let eof: Vec<(f64, f64)> = rows.iter().map(|r| (r.kt, r.eof)).collect();
            let grov: Vec<(f64, f64)> = rows.iter().map(|r| (r.kt, r.groverian)).collect();
            emit("fig3_avg_fidelity_different_axis.csv", "avg_fidelity", &fid)?;
            emit("fig3_concurrence_different_axis.csv", "concurrence", &con)?;
            emit("fig3_eof_different_axis.csv", "eof", &eof)?;
            emit("fig3_groverian_different_axis.csv", "groverian", &grov)?;
        }
        4 => {
            let fid: Vec<(f64, f64)> = grid
                .iter()
                .map(|&kt| {
                    NoiseSpec::new(NoiseKind::WSameAxisX, kt)
                        .map(|s| (kt, average_fidelity_closed_form(&s)))
                })
                .collect::<Result<_>>()?;
            emit("fig4_avg_fidelity_w.csv", "avg_fidelity", &fid)?;
            let threshold = classical_threshold_kt(NoiseKind::WSameAxisX);
            let path = directory.join("fig4_thresholds.csv");
            write_text(
                &path,
                &format!(
                    "channel,classical_threshold_kt\nw,{}\n",
                    format_significant(threshold)
                ),
            )?;
            written.push(path);
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "no figure {other}; available figures are 2, 3 and 4"
            )))
        }
    }
    Ok(written)
}
