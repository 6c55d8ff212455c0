//! State documents and model selection.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qcmm::models::{read_table_csv, BewModel};
use qcmm::{
    bew_d7, load_tabulated, BewMode, BewSpec, D7Params, DensityMatrix4, FanoParams, Interpolation,
    ParametricD7Model,
};
use serde::Deserialize;

use crate::args::{CommonArgs, InterpArg, ModeArg};
use crate::error::{CliError, CliResult};

/// Exactly one of the three keys must be present.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDocument {
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    fano: Option<FanoParams>,
    d7: Option<D7Params>,
}

/// A parsed state plus its seven parameters when it was given that way.
#[derive(Debug, Clone)]
pub struct StateInput {
    pub rho: DensityMatrix4,
    pub d7: Option<D7Params>,
    pub source: String,
}

pub fn parse_state_json(text: &str) -> CliResult<StateInput> {
    let doc: StateDocument =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("state JSON: {e}")))?;
    let given = [doc.matrix.is_some(), doc.fano.is_some(), doc.d7.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(CliError::Parse(
            "state JSON needs exactly one of \"matrix\", \"fano\", \"d7\"".into(),
        ));
    }
    if let Some(rows) = doc.matrix {
        if rows.len() != 4 {
            return Err(CliError::Parse(format!("\"matrix\" has {} rows, expected 4", rows.len())));
        }
        let mut entries = qcmm::eigen::zero();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != 4 {
                return Err(CliError::Parse(format!(
                    "\"matrix\" row {i} has {} entries, expected 4",
                    row.len()
                )));
            }
            for (j, [re, im]) in row.iter().enumerate() {
                entries[i][j] = Complex64::new(*re, *im);
            }
        }
        return Ok(StateInput {
            rho: DensityMatrix4::from_entries(entries),
            d7: None,
            source: "matrix".into(),
        });
    }
    if let Some(f) = doc.fano {
        return Ok(StateInput { rho: f.to_matrix(), d7: None, source: "fano".into() });
    }
    let d = doc.d7.expect("one key present");
    Ok(StateInput { rho: d.to_fano().to_matrix(), d7: Some(d), source: "d7".into() })
}

/// `--input FILE` or `--model bew --x X`.
pub fn read_state(args: &CommonArgs) -> CliResult<StateInput> {
    if let Some(path) = &args.input {
        let text = read_file(path)?;
        return parse_state_json(&text);
    }
    if args.model.is_some() {
        let x = args
            .x
            .ok_or_else(|| CliError::Usage("--model bew needs --x for a single state".into()))?;
        let d = bew_d7(x)?;
        return Ok(StateInput {
            rho: d.to_fano().to_matrix(),
            d7: Some(d),
            source: format!("bew x={x:?}"),
        });
    }
    Err(CliError::Usage("give --input FILE or --model bew --x X".into()))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// A family selected on the command line, with its default sweep.
pub struct ModelChoice {
    pub model: Box<dyn ParametricD7Model>,
    pub default_grid: (f64, f64, usize),
    pub description: String,
}

pub fn bew_spec(mode: Option<ModeArg>, gamma: Option<f64>) -> CliResult<BewSpec> {
    let mode = match mode.unwrap_or(ModeArg::X) {
        ModeArg::X => BewMode::ParameterX,
        ModeArg::Decay => BewMode::Decay,
        ModeArg::Growth => BewMode::Growth,
    };
    Ok(BewSpec::new(mode, gamma.unwrap_or(1.0))?)
}

pub fn bew_choice(spec: BewSpec) -> ModelChoice {
    let default_grid = match spec.mode {
        BewMode::ParameterX => (0.0, 1.0, 101),
        BewMode::Decay | BewMode::Growth => (0.0, 5.0, 501),
    };
    let description = match spec.mode {
        BewMode::ParameterX => "bew mode=x".to_string(),
        BewMode::Decay => format!("bew mode=decay gamma={:?}", spec.gamma),
        BewMode::Growth => format!("bew mode=growth gamma={:?}", spec.gamma),
    };
    ModelChoice { model: Box::new(BewModel::new(spec)), default_grid, description }
}

pub fn read_model(args: &CommonArgs) -> CliResult<ModelChoice> {
    if let Some(path) = &args.input {
        let text = read_file(path)?;
        let rows = read_table_csv(text.as_bytes())
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let interp = match args.interp {
            InterpArg::Linear => Interpolation::Linear,
            InterpArg::Cubic => Interpolation::CubicMonotone,
        };
        let table = load_tabulated(&rows, interp)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let (lo, hi) = table.domain();
        return Ok(ModelChoice {
            model: Box::new(table),
            default_grid: (lo, hi, 101),
            description: format!("table {}", path.display()),
        });
    }
    if args.model.is_some() {
        if args.x.is_some() {
            return Err(CliError::Usage("--x selects a single state; sweeps use --lo/--hi".into()));
        }
        return Ok(bew_choice(bew_spec(args.mode, args.gamma)?));
    }
    Err(CliError::Usage("give --input TABLE.csv or --model bew".into()))
}
