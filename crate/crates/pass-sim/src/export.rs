//! Plot-ready data export. CSV files carry the resolved scenario as `#`
//! comment lines followed by one header row and the data section; numbers are
//! written with 17 significant digits so re-reading reproduces the in-memory
//! values exactly. JSON variants carry the same data plus the solved
//! configuration for provenance. Nothing time-dependent is written, so equal
//! inputs give byte-identical files.

use crate::coupling::{CouplingSolution, PassConfiguration};
use crate::error::{PassError, Result};
use crate::farfield::FarFieldPattern;
use crate::sim::SimulationResult;
use crate::slab::{ModeSolution, SlabGeometry};
use num_complex::Complex64;
use serde_json::json;
use std::io::Write;
use std::path::Path;

/// Full round-trip precision: 17 significant digits.
pub fn fmt_full(x: f64) -> String {
    format!("{:.16e}", x)
}

fn open(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| PassError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    let file = std::fs::File::create(path)
        .map_err(|e| PassError::Io(format!("cannot create {}: {e}", path.display())))?;
    Ok(std::io::BufWriter::new(file))
}

fn write_csv(
    path: &Path,
    header_lines: &[String],
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut out = open(path)?;
    for line in header_lines {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{}", columns.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Parsed CSV: comment lines (without the `# ` prefix), column names, and raw
/// field strings per row.
#[derive(Debug, Clone)]
pub struct CsvData {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvData {
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| PassError::Io(format!("column {name:?} not found")))
    }

    pub fn f64_column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column_index(name)?;
        self.rows
            .iter()
            .map(|row| {
                row[idx]
                    .parse::<f64>()
                    .map_err(|e| PassError::Io(format!("bad number {:?}: {e}", row[idx])))
            })
            .collect()
    }

    /// The data section: header row plus all data rows, as written.
    pub fn data_section(&self) -> String {
        let mut s = self.columns.join(",");
        for row in &self.rows {
            s.push('\n');
            s.push_str(&row.join(","));
        }
        s
    }
}

/// Reads back a CSV written by this module.
pub fn read_csv(path: &Path) -> Result<CsvData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PassError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut comments = Vec::new();
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(stripped) = line.strip_prefix('#') {
            comments.push(stripped.trim_start().to_string());
        } else if columns.is_empty() {
            columns = line.split(',').map(str::to_string).collect();
        } else if !line.is_empty() {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    if columns.is_empty() {
        return Err(PassError::Io(format!(
            "{} has no column header",
            path.display()
        )));
    }
    Ok(CsvData {
        comments,
        columns,
        rows,
    })
}

fn write_json_value(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut out = open(path)?;
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| PassError::Io(format!("cannot serialize {}: {e}", path.display())))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Pattern export: phi_deg, re_F, im_F, G, D, plus the oracle field when one
/// was computed alongside.
pub fn write_pattern_csv(
    path: &Path,
    header_lines: &[String],
    pattern: &FarFieldPattern,
    oracle: Option<&[Complex64]>,
) -> Result<()> {
    let mut columns = vec!["phi_deg", "re_F", "im_F", "G", "D"];
    if oracle.is_some() {
        columns.push("oracle_re_F");
        columns.push("oracle_im_F");
    }
    let mut rows = Vec::with_capacity(pattern.len());
    for i in 0..pattern.len() {
        let mut row = vec![
            fmt_full(pattern.angles()[i].to_degrees()),
            fmt_full(pattern.complex_pattern()[i].re),
            fmt_full(pattern.complex_pattern()[i].im),
            fmt_full(pattern.power_pattern()[i]),
            fmt_full(pattern.directivity()[i]),
        ];
        if let Some(oracle) = oracle {
            row.push(fmt_full(oracle[i].re));
            row.push(fmt_full(oracle[i].im));
        }
        rows.push(row);
    }
    write_csv(path, header_lines, &columns, &rows)
}

/// JSON pattern export carrying the solved configuration for provenance.
pub fn write_pattern_json(
    path: &Path,
    scenario: &serde_json::Value,
    cfg: &PassConfiguration,
    coupling: &CouplingSolution,
    pattern: &FarFieldPattern,
    oracle: Option<&[Complex64]>,
) -> Result<()> {
    let samples: Vec<serde_json::Value> = (0..pattern.len())
        .map(|i| {
            let mut sample = json!({
                "phi_deg": pattern.angles()[i].to_degrees(),
                "re_f": pattern.complex_pattern()[i].re,
                "im_f": pattern.complex_pattern()[i].im,
                "g": pattern.power_pattern()[i],
                "d": pattern.directivity()[i],
            });
            if let Some(oracle) = oracle {
                sample["oracle_re_f"] = json!(oracle[i].re);
                sample["oracle_im_f"] = json!(oracle[i].im);
            }
            sample
        })
        .collect();
    let value = json!({
        "scenario": scenario,
        "configuration": cfg,
        "coupling": coupling,
        "samples": samples,
    });
    write_json_value(path, &value)
}

/// Mode report rows for the main guide and the PA slab.
pub fn write_modes_csv(
    path: &Path,
    header_lines: &[String],
    entries: &[(&str, &SlabGeometry, &ModeSolution)],
) -> Result<()> {
    let columns = [
        "slab",
        "width_mm",
        "v_number",
        "u",
        "w",
        "beta_x_rad_per_m",
        "beta_y_rad_per_m",
        "sigma_per_m",
        "lambda_g_mm",
    ];
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|(label, geom, mode)| {
            vec![
                label.to_string(),
                fmt_full(geom.width() * 1e3),
                fmt_full(mode.v_num),
                fmt_full(mode.u),
                fmt_full(mode.w),
                fmt_full(mode.beta_x),
                fmt_full(mode.beta_y),
                fmt_full(mode.sigma),
                fmt_full(mode.guided_wavelength() * 1e3),
            ]
        })
        .collect();
    write_csv(path, header_lines, &columns, &rows)
}

pub fn write_modes_json(
    path: &Path,
    scenario: &serde_json::Value,
    entries: &[(&str, &SlabGeometry, &ModeSolution)],
) -> Result<()> {
    let slabs: Vec<serde_json::Value> = entries
        .iter()
        .map(|(label, geom, mode)| {
            json!({
                "slab": label,
                "geometry": geom,
                "mode": mode,
                "lambda_g_m": mode.guided_wavelength(),
            })
        })
        .collect();
    write_json_value(path, &json!({ "scenario": scenario, "slabs": slabs }))
}

/// Coupled-power sweep versus PA length: the symmetric pair and the
/// single-PA reference.
pub fn write_coupling_csv(
    path: &Path,
    header_lines: &[String],
    rows: &[(f64, f64, f64)],
) -> Result<()> {
    let columns = ["ls_mm", "coupled_power_pair", "coupled_power_single"];
    let data: Vec<Vec<String>> = rows
        .iter()
        .map(|(ls, pair, single)| vec![fmt_full(ls * 1e3), fmt_full(*pair), fmt_full(*single)])
        .collect();
    write_csv(path, header_lines, &columns, &data)
}

pub fn write_coupling_json(
    path: &Path,
    scenario: &serde_json::Value,
    coupling: &CouplingSolution,
    rows: &[(f64, f64, f64)],
) -> Result<()> {
    let samples: Vec<serde_json::Value> = rows
        .iter()
        .map(|(ls, pair, single)| {
            json!({"ls_mm": ls * 1e3, "coupled_power_pair": pair, "coupled_power_single": single})
        })
        .collect();
    let value = json!({
        "scenario": scenario,
        "coupling": coupling,
        "coupling_length_mm": coupling.coupling_length() * 1e3,
        "samples": samples,
    });
    write_json_value(path, &value)
}

/// Spectral-efficiency curves: one row per scheme and SNR point.
pub fn write_linksim_csv(
    path: &Path,
    header_lines: &[String],
    result: &SimulationResult,
) -> Result<()> {
    let columns = ["scheme", "snr_db", "mean_rate_bps_hz", "num_drops", "seed"];
    let mut rows = Vec::new();
    for scheme in &result.schemes {
        for (snr, rate) in result.plan.snr_grid_db.iter().zip(&scheme.mean_rate) {
            rows.push(vec![
                scheme.scheme.label().to_string(),
                fmt_full(*snr),
                fmt_full(*rate),
                result.plan.num_drops.to_string(),
                result.plan.rng_seed.to_string(),
            ]);
        }
    }
    write_csv(path, header_lines, &columns, &rows)
}

pub fn write_linksim_json(
    path: &Path,
    scenario: &serde_json::Value,
    result: &SimulationResult,
) -> Result<()> {
    let schemes: Vec<serde_json::Value> = result
        .schemes
        .iter()
        .map(|s| {
            json!({
                "scheme": s.scheme.label(),
                "snr_db": result.plan.snr_grid_db,
                "mean_rate_bps_hz": s.mean_rate,
            })
        })
        .collect();
    let value = json!({
        "scenario": scenario,
        "plan": result.plan,
        "schemes": schemes,
    });
    write_json_value(path, &value)
}

/// Optional per-drop trace: placements and directional channel gains.
pub fn write_trace_csv(
    path: &Path,
    header_lines: &[String],
    result: &SimulationResult,
) -> Result<()> {
    let columns = ["scheme", "drop", "x_ue_m", "x_p_m", "channel_gain"];
    let mut rows = Vec::new();
    for scheme in &result.schemes {
        for (i, x_ue) in result.ue_positions.iter().enumerate() {
            rows.push(vec![
                scheme.scheme.label().to_string(),
                i.to_string(),
                fmt_full(*x_ue),
                fmt_full(scheme.chosen_positions[i]),
                fmt_full(scheme.channel_gains[i]),
            ]);
        }
    }
    write_csv(path, header_lines, &columns, &rows)
}
