//! Deterministic file outputs: the time-series CSV, the self-describing
//! binary field format, run manifests, audit-report rendering, and the
//! fixed-point sweep CSV.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::auditor::AuditReport;
use crate::dynamics::{RunOutcome, Trajectory};
use crate::error::{Error, Result};
use crate::estimates::{FixedPointResult, FixedPointStatus};
use crate::field::{Rank, RealField};
use crate::grid::Grid;

/// Magic prefix of the binary field layout.
pub const FIELD_MAGIC: &[u8; 8] = b"NSTFLD01";

/// 17 significant digits: enough to reproduce any f64 bit pattern.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub const TIMESERIES_COLUMNS: &str = "t,l2_v,l2_V,h1_u,h1_v,h1_V,l2_div_v,Psi,chi0,X,Y,X0_v,X0_u,G,K,D1,D2,energy_residual";

/// Write the per-sample diagnostics as CSV with deterministic formatting.
pub fn write_timeseries(trajectory: &Trajectory, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(TIMESERIES_COLUMNS);
    out.push('\n');
    for r in &trajectory.ledger.rows {
        let cells = [
            r.t,
            r.l2_v,
            r.l2_big_v,
            r.h1_u,
            r.h1_v,
            r.h1_big_v,
            r.l2_div_v,
            r.psi,
            r.chi0,
            r.x_sq.sqrt(),
            r.y_sq.sqrt(),
            r.x0_v,
            r.x0_u,
            r.g,
            r.k,
            r.d1,
            r.d2,
            r.energy_residual,
        ];
        let line: Vec<String> = cells.iter().map(|&x| fmt(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Binary layout: magic, little-endian u32 grid_n, u32 rank multiplicity,
/// then rank·n³ little-endian f64 samples in row-major order.
pub fn write_field(f: &RealField, path: &Path) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(FIELD_MAGIC)?;
    file.write_all(&(f.grid.n() as u32).to_le_bytes())?;
    file.write_all(&(f.rank.multiplicity() as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(f.data.len() * 8);
    for x in &f.data {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    file.write_all(&buf)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<RealField> {
    let mut file = fs::File::open(path)?;
    let mut magic = [0u8; 8];
    file.read_exact(&mut magic)?;
    if &magic != FIELD_MAGIC {
        return Err(Error::Usage(format!(
            "{} is not a field file (bad magic)",
            path.display()
        )));
    }
    let mut word = [0u8; 4];
    file.read_exact(&mut word)?;
    let n = u32::from_le_bytes(word) as usize;
    file.read_exact(&mut word)?;
    let mult = u32::from_le_bytes(word) as usize;
    let rank = match mult {
        1 => Rank::Scalar,
        3 => Rank::Vector3,
        other => {
            return Err(Error::Usage(format!(
                "field file rank multiplicity must be 1 or 3, got {other}"
            )))
        }
    };
    let grid = Grid::new(n)?;
    let count = mult * grid.point_count();
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * count {
        return Err(Error::Usage(format!(
            "field file payload is {} bytes, expected {}",
            bytes.len(),
            8 * count
        )));
    }
    let data: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(RealField { grid, rank, data })
}

/// SHA-256 of the little-endian sample bytes, as lowercase hex.
pub fn field_hash(f: &RealField) -> String {
    let mut hasher = Sha256::new();
    for x in &f.data {
        hasher.update(x.to_le_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One manifest per run: config echo, code version, wall clock, initial
/// field hashes, outcome.
pub fn write_manifest(
    path: &Path,
    config_echo: &str,
    wall_seconds: f64,
    hash_big_v0: &str,
    hash_v0: &str,
    outcome: RunOutcome,
    scenario_notes: &str,
) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!(
        "outcome = {}\n",
        match outcome {
            RunOutcome::Completed => "completed".to_string(),
            RunOutcome::BlownUp { step, t } => format!("blown-up step={step} t={t:e}"),
        }
    ));
    out.push_str(&format!("wall_clock_seconds = {wall_seconds:.3}\n"));
    out.push_str(&format!("hash_V0 = {hash_big_v0}\n"));
    out.push_str(&format!("hash_v0 = {hash_v0}\n"));
    if !scenario_notes.is_empty() {
        out.push_str(scenario_notes);
    }
    out.push_str("\n[config]\n");
    out.push_str(config_echo);
    fs::write(path, out)?;
    Ok(())
}

/// One structured record per check plus a fixed-width summary table.
pub fn render_audit_reports(reports: &[AuditReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("check {}\n", r.check_id));
        out.push_str(&format!("  status: {}\n", r.status.as_str()));
        out.push_str(&format!(
            "  max_relative_residual: {}\n",
            fmt(r.max_relative_residual)
        ));
        if let Some(c) = r.fitted_constant {
            out.push_str(&format!("  fitted_constant: {}\n", fmt(c)));
        }
        out.push_str(&format!("  worst_time: {}\n", fmt(r.worst_time)));
        for n in &r.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(&format!("  samples: {}\n", r.details.len()));
        out.push('\n');
    }
    out.push_str("summary\n");
    out.push_str(&format!(
        "{:<24} {:<16} {:>14} {:>14}\n",
        "check", "status", "residual", "fitted_c"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<24} {:<16} {:>14.3e} {:>14}\n",
            r.check_id,
            r.status.as_str(),
            r.max_relative_residual,
            r.fitted_constant
                .map(|c| format!("{c:.3e}"))
                .unwrap_or_else(|| "-".into()),
        ));
    }
    out
}

pub fn write_audit_reports(reports: &[AuditReport], path: &Path) -> Result<()> {
    fs::write(path, render_audit_reports(reports))?;
    Ok(())
}

/// One CSV row per solved tuple of the parameter sweep.
pub fn write_fixed_point_csv(rows: &[(f64, FixedPointResult)], path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("nu,A,iterations,contraction_modulus,converged,lower_bound_ok,damped,status\n");
    for (nu, r) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(*nu),
            fmt(r.a),
            r.iterations,
            fmt(r.contraction_modulus),
            r.converged,
            r.lower_bound_ok,
            r.damped,
            match r.status {
                FixedPointStatus::Converged => "converged",
                FixedPointStatus::NonContraction => "non-contraction",
                FixedPointStatus::RegimeViolation => "regime-violation",
                FixedPointStatus::NonFinite => "non-finite",
            }
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealField;

    #[test]
    fn field_file_round_trips() {
        let grid = Grid::new(8).unwrap();
        let f = RealField::vector_from_fn(grid, |x, y, z| [x.sin(), y.cos(), z]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.fld");
        write_field(&f, &path).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(f.rank, back.rank);
        assert!(f
            .data
            .iter()
            .zip(&back.data)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.fld");
        std::fs::write(&path, b"NOTAFLD0restofit").unwrap();
        assert!(read_field(&path).is_err());
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let grid = Grid::new(8).unwrap();
        let f = RealField::scalar_from_fn(grid, |x, _, _| x.sin());
        let g = RealField::scalar_from_fn(grid, |x, _, _| x.cos());
        assert_eq!(field_hash(&f), field_hash(&f));
        assert_ne!(field_hash(&f), field_hash(&g));
        assert_eq!(field_hash(&f).len(), 64);
    }

    #[test]
    fn formatting_carries_17_significant_digits() {
        let s = fmt(std::f64::consts::PI);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back.to_bits(), std::f64::consts::PI.to_bits());
    }
}
