//! `klim transform`: bridge operations on stored trajectories.

use std::path::Path;

use kuramoto_limits::{
    cl_to_measure, mfl_to_cl_circle, CircularDensity, DriftRule, Geometry, GridDensityState,
    InteractionKernel, LabelField, LabelGrid,
};

use crate::csv::read_table;
use crate::simulate::{sidecar, with_writer};
use crate::CliError;

fn input_error(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {msg}", path.display()))
}

/// Reads the long-format `t,theta,f` file written by `simulate` in mfl-grid mode.
pub fn read_density_trajectory(path: &Path) -> Result<Vec<GridDensityState>, CliError> {
    let table = read_table(path).map_err(|e| input_error(path, e))?;
    let (Some(ct), Some(cf)) = (table.column("t"), table.column("f")) else {
        return Err(input_error(path, "expected columns t,theta,f"));
    };
    let mut states: Vec<GridDensityState> = Vec::new();
    let mut current: Option<(f64, Vec<f64>)> = None;
    for row in &table.rows {
        match &mut current {
            Some((t, values)) if *t == row[ct] => values.push(row[cf]),
            _ => {
                if let Some((t, values)) = current.take() {
                    states.push(GridDensityState {
                        density: CircularDensity::new(values)?,
                        time: t,
                    });
                }
                current = Some((row[ct], vec![row[cf]]));
            }
        }
    }
    if let Some((t, values)) = current {
        states.push(GridDensityState {
            density: CircularDensity::new(values)?,
            time: t,
        });
    }
    if states.is_empty() {
        return Err(input_error(path, "no density slices"));
    }
    let n = states[0].density.values().len();
    if states.iter().any(|s| s.density.values().len() != n) {
        return Err(input_error(path, "slices have different cell counts"));
    }
    Ok(states)
}

/// Reads the wide `t,x_0,…` trajectory written by `simulate` in ds/cl mode.
pub fn read_position_trajectory(path: &Path) -> Result<Vec<(f64, LabelField)>, CliError> {
    let table = read_table(path).map_err(|e| input_error(path, e))?;
    if table.header.first().map(String::as_str) != Some("t") || table.header.len() < 2 {
        return Err(input_error(path, "expected columns t,x_0,x_1,…"));
    }
    table
        .rows
        .iter()
        .map(|row| {
            Ok((
                row[0],
                LabelField::new(row[1..].to_vec(), Geometry::Circle)?,
            ))
        })
        .collect()
}

pub fn mfl_to_cl(
    input: &Path,
    output: Option<&Path>,
    n_labels: usize,
    kernel: &InteractionKernel,
    rule: DriftRule,
) -> Result<(), CliError> {
    let traj = read_density_trajectory(input)?;
    let grid = LabelGrid::new(n_labels)?;
    let out = mfl_to_cl_circle(&traj, kernel, &grid, rule)?;
    let xi = grid.points();
    with_writer(output, |w| {
        w.header(&["t", "xi", "x"])?;
        for (t, field) in out.times.iter().zip(&out.fields) {
            for (s, x) in xi.iter().zip(field.values()) {
                w.row(&[*t, *s, *x])?;
            }
        }
        Ok(())
    })?;
    if let Some(path) = output {
        let drift: Vec<_> = out
            .times
            .iter()
            .zip(&out.drift)
            .map(|(t, c)| serde_json::json!({ "t": t, "C": c }))
            .collect();
        let text = serde_json::to_string_pretty(&drift).expect("drift serializes") + "\n";
        let drift_path = sidecar(path, ".drift.json");
        std::fs::write(&drift_path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", drift_path.display())))?;
    }
    Ok(())
}

pub fn cl_to_measure_file(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let traj = read_position_trajectory(input)?;
    with_writer(output, |w| {
        w.header(&["t", "x", "weight"])?;
        for (t, field) in &traj {
            let m = cl_to_measure(field);
            for (x, wt) in m.positions().iter().zip(m.weights()) {
                w.row(&[*t, *x, *wt])?;
            }
        }
        Ok(())
    })
}
