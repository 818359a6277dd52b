//! `klim simulate`: one run of the particle, continuum or mean-field solver.

use std::io::Write;
use std::path::{Path, PathBuf};

use kuramoto_limits::circle::ThetaGrid;
use kuramoto_limits::Complex64;
use kuramoto_limits::{
    cl_simulate, discrete_twisted_state, ds_simulate, manifold_field, mfl_simulate_grid,
    mfl_simulate_spectral, twisted_field, CircularDensity, FourierDensity, LabelField, LabelGrid,
    OAPoint, ParticleState, TimeStepping, Trajectory,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{InitialCondition, Mode, RunConfig};
use crate::csv::{read_table, CsvWriter};
use crate::CliError;

fn stepping(cfg: &RunConfig) -> TimeStepping {
    TimeStepping::new(cfg.dt, cfg.t_end).with_output_every(cfg.output_every)
}

fn input_error(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {msg}", path.display()))
}

/// Positions for particle and label runs.
fn initial_positions(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let n = cfg.size;
    let labels = LabelGrid::new(n)?;
    Ok(match &cfg.initial {
        InitialCondition::Uniform if cfg.mode == Mode::Ds => {
            discrete_twisted_state(n, 1, 0.0)?.positions().to_vec()
        }
        InitialCondition::Uniform => twisted_field(&labels, 1, 0.0).values().to_vec(),
        InitialCondition::Twisted { winding, q } if cfg.mode == Mode::Ds => {
            discrete_twisted_state(n, *winding, *q)?
                .positions()
                .to_vec()
        }
        InitialCondition::Twisted { winding, q } => {
            twisted_field(&labels, *winding, *q).values().to_vec()
        }
        InitialCondition::Oa { alpha, beta, q } => {
            manifold_field(&labels, &OAPoint::new(*alpha, *beta)?, *q)?
                .values()
                .to_vec()
        }
        InitialCondition::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..n)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect()
        }
        InitialCondition::File(path) => {
            let table = read_table(path).map_err(|e| input_error(path, e))?;
            let col = table
                .column("x")
                .ok_or_else(|| input_error(path, "missing column 'x'"))?;
            let xs: Vec<f64> = table.rows.iter().map(|r| r[col]).collect();
            if xs.len() != n {
                return Err(input_error(
                    path,
                    format!("{} positions for size {n}", xs.len()),
                ));
            }
            xs
        }
    })
}

fn initial_density(cfg: &RunConfig) -> Result<CircularDensity, CliError> {
    let n = cfg.size;
    Ok(match &cfg.initial {
        InitialCondition::Uniform => CircularDensity::uniform(n)?,
        InitialCondition::Oa { alpha, beta, .. } => {
            let p = OAPoint::new(*alpha, *beta)?;
            CircularDensity::from_fn(n, |t| p.density(t))?.normalized()
        }
        InitialCondition::File(path) => {
            let table = read_table(path).map_err(|e| input_error(path, e))?;
            let col = table
                .column("f")
                .ok_or_else(|| input_error(path, "missing column 'f'"))?;
            let values: Vec<f64> = table.rows.iter().map(|r| r[col]).collect();
            if values.len() != n {
                return Err(input_error(
                    path,
                    format!("{} density values for n_cells = {n}", values.len()),
                ));
            }
            CircularDensity::new(values)?
        }
        _ => unreachable!("rejected by config validation"),
    })
}

fn initial_modes(cfg: &RunConfig) -> Result<FourierDensity, CliError> {
    let n = cfg.size;
    Ok(match &cfg.initial {
        InitialCondition::Uniform => FourierDensity::uniform(n),
        InitialCondition::Oa { alpha, beta, .. } => {
            FourierDensity::new(OAPoint::new(*alpha, *beta)?.fourier_modes(n))?
        }
        InitialCondition::File(path) => {
            let table = read_table(path).map_err(|e| input_error(path, e))?;
            let (Some(k), Some(re), Some(im)) = (
                table.column("n"),
                table.column("re_c"),
                table.column("im_c"),
            ) else {
                return Err(input_error(path, "expected columns n,re_c,im_c"));
            };
            let mut modes = vec![Complex64::new(0.0, 0.0); n + 1];
            modes[0] = Complex64::new(1.0, 0.0);
            for row in &table.rows {
                let idx = row[k];
                if idx.fract() != 0.0 || idx < 0.0 || idx as usize > n {
                    return Err(input_error(
                        path,
                        format!("mode index {idx} outside 0..={n}"),
                    ));
                }
                modes[idx as usize] = Complex64::new(row[re], row[im]);
            }
            FourierDensity::new(modes)?
        }
        _ => unreachable!("rejected by config validation"),
    })
}

fn write_positions(path: Option<&Path>, traj: &Trajectory) -> Result<(), CliError> {
    let n = traj.states.first().map_or(0, Vec::len);
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|j| format!("x_{j}")));
    with_writer(path, |w| {
        w.header(&header)?;
        let mut row = Vec::with_capacity(n + 1);
        for (t, state) in traj.times.iter().zip(&traj.states) {
            row.clear();
            row.push(*t);
            row.extend_from_slice(state);
            w.row(&row)?;
        }
        Ok(())
    })
}

fn write_modes(path: Option<&Path>, traj: &Trajectory<Complex64>) -> Result<(), CliError> {
    let n = traj.states.first().map_or(1, Vec::len) - 1;
    let mut header = vec!["t".to_string()];
    for k in 1..=n {
        header.push(format!("re_c{k}"));
        header.push(format!("im_c{k}"));
    }
    with_writer(path, |w| {
        w.header(&header)?;
        for (t, c) in traj.times.iter().zip(&traj.states) {
            let mut row = vec![*t];
            for m in &c[1..] {
                row.push(m.re);
                row.push(m.im);
            }
            w.row(&row)?;
        }
        Ok(())
    })
}

fn write_densities(
    path: Option<&Path>,
    states: &[kuramoto_limits::GridDensityState],
) -> Result<(), CliError> {
    with_writer(path, |w| {
        w.header(&["t", "theta", "f"])?;
        for s in states {
            let grid: ThetaGrid = s.density.grid();
            for (j, f) in s.density.values().iter().enumerate() {
                w.row(&[s.time, grid.node(j), *f])?;
            }
        }
        Ok(())
    })
}

/// Runs `body` against a CSV writer on `path`, or on standard output.
pub(crate) fn with_writer(
    path: Option<&Path>,
    body: impl FnOnce(&mut CsvWriter<Box<dyn Write>>) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(
            std::fs::File::create(p)
                .map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = CsvWriter::new(sink);
    body(&mut w)
        .and_then(|_| w.finish())
        .map_err(|e| CliError::Output(e.to_string()))
}

/// `<output>.meta.json` next to a data file.
pub(crate) fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_meta(path: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    let meta = serde_json::json!({
        "tool": "klim",
        "version": env!("CARGO_PKG_VERSION"),
        "mode": cfg.mode.name(),
        "seed": cfg.seed,
        "config": cfg.document,
    });
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n";
    let meta_path = sidecar(path, ".meta.json");
    std::fs::write(&meta_path, text)
        .map_err(|e| CliError::Output(format!("{}: {e}", meta_path.display())))
}

pub fn run(cfg: &RunConfig, output: Option<&Path>) -> Result<(), CliError> {
    let output = output.or(cfg.output.as_deref());
    let stepping = stepping(cfg);
    match cfg.mode {
        Mode::Ds => {
            let mut s = ParticleState::circle(initial_positions(cfg)?)?;
            if let Some(w) = &cfg.frequencies {
                s = s.with_frequencies(w.clone())?;
            }
            write_positions(output, &ds_simulate(&s, &cfg.kernel, &stepping)?)?;
        }
        Mode::Cl => {
            let x0 = LabelField::new(initial_positions(cfg)?, kuramoto_limits::Geometry::Circle)?;
            write_positions(output, &cl_simulate(&x0, &cfg.kernel, &stepping)?)?;
        }
        Mode::MflSpectral => {
            write_modes(
                output,
                &mfl_simulate_spectral(&initial_modes(cfg)?, &stepping, cfg.closure)?,
            )?;
        }
        Mode::MflGrid => {
            write_densities(
                output,
                &mfl_simulate_grid(&initial_density(cfg)?, &cfg.kernel, &stepping)?,
            )?;
        }
    }
    if let Some(path) = output {
        write_meta(path, cfg)?;
    }
    Ok(())
}
