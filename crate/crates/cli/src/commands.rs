//! One function per subcommand; each returns the full output text.

use qcmm::cmm::signed_root;
use qcmm::ppt::{d7_eigenvalues, d7_pt_eigenvalues, eigenvalues_hermitian4};
use qcmm::trajectory::{linspace, DEFAULT_COARSE_N};
use qcmm::{
    classify_phc, coords_from_d7, decompose_to_fano, find_crossings, invariance_residual,
    lightcone_reference, partial_transpose, project_d7, quad_distances, region_of,
    trace_trajectory, validate_density, BewMode, DiffOptions, Qubit, TraceOptions,
    TrajectoryPoint,
};
use serde_json::{json, Value};

use crate::args::{Command, CommonArgs, Emit, Format, ModeArg};
use crate::error::{CliError, CliResult};
use crate::input::{bew_choice, bew_spec, read_model, read_state, ModelChoice};
use crate::table::{fmt_f64, Cell, Table};

pub const TRAJECTORY_COLUMNS: [&str; 24] = [
    "theta", "x", "t_minus", "u_minus", "v_plus", "w_minus", "t_plus", "u_plus", "v_minus",
    "w_plus", "s1_sq", "s2_sq", "s1t_sq", "s2t_sq", "region", "speed1", "speed2", "speed1t",
    "speed2t", "qspeed1_sq", "qspeed2_sq", "qspeed1t_sq", "qspeed2t_sq", "min_eig",
];

pub const SPEED_COLUMNS: [&str; 11] = [
    "theta", "t_minus", "t_plus", "speed1", "speed2", "speed1t", "speed2t", "qspeed1_sq",
    "qspeed2_sq", "qspeed1t_sq", "qspeed2t_sq",
];

/// Text destined for `--out` or standard output, plus the exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

pub fn run(cmd: &Command) -> CliResult<Outcome> {
    let args = cmd.args();
    if !positive(args.tol) || !positive(args.bisect_tol) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    if let Some(h) = args.h {
        if !positive(h) {
            return Err(CliError::Usage("--h must be positive".into()));
        }
    }
    if args.emit.is_some() && !matches!(cmd, Command::Trajectory(_)) {
        return Err(CliError::Usage("--emit applies to `trajectory` only".into()));
    }
    match cmd {
        Command::Validate(a) => validate(a),
        Command::Analyze(a) => analyze(a),
        Command::Trajectory(a) => trajectory(a),
        Command::Speeds(a) => speeds(a),
        Command::Crossings(a) => crossings(a),
    }
}

/// False for NaN as well as for non-positive values.
fn positive(v: f64) -> bool {
    v > 0.0
}

fn report_format(args: &CommonArgs, command: &str) -> CliResult<bool> {
    match args.format {
        None => Ok(false),
        Some(Format::Json) => Ok(true),
        Some(Format::Csv) => {
            Err(CliError::Usage(format!("`{command}` prints text (default) or --format json")))
        }
    }
}

fn validate(args: &CommonArgs) -> CliResult<Outcome> {
    let json_out = report_format(args, "validate")?;
    let state = read_state(args)?;
    let report = validate_density(&state.rho, args.tol);
    let mut doc = json!({ "source": state.source, "valid": report.is_valid() });
    merge(&mut doc, serde_json::to_value(report).expect("plain struct"));
    if !report.is_valid() {
        doc["failures"] = Value::from(report.failure_summary());
    }
    Ok(Outcome { text: render(&doc, json_out), code: if report.is_valid() { 0 } else { 2 } })
}

fn analyze(args: &CommonArgs) -> CliResult<Outcome> {
    let json_out = report_format(args, "analyze")?;
    let state = read_state(args)?;
    let report = validate_density(&state.rho, args.tol);
    if !report.is_valid() {
        return Err(CliError::Invalid(report.failure_summary()));
    }
    let fano = decompose_to_fano(&state.rho)?;
    let spectrum = eigenvalues_hermitian4(&state.rho)?;
    let pt_spectrum = eigenvalues_hermitian4(&partial_transpose(&state.rho, Qubit::Second)?)?;
    let phc = classify_phc(&state.rho, args.tol)?;

    let d7 = match state.d7 {
        Some(d) => Ok(d),
        None => project_d7(&fano, args.tol),
    };
    let cmm = match d7 {
        Ok(d) => {
            let coords = coords_from_d7(&d);
            let quad = quad_distances(&coords);
            json!({
                "d7": d,
                "coords": coords,
                "quad": quad,
                "invariance_residual": invariance_residual(&quad),
                "region": region_of(&quad, args.tol),
                "closed_form_spectrum": d7_eigenvalues(&d).values,
                "closed_form_pt_spectrum": d7_pt_eigenvalues(&d).values,
            })
        }
        Err(e @ qcmm::Error::NotD7Class(_)) => json!({ "status": "n/a", "reason": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    let doc = json!({
        "source": state.source,
        "validation": report,
        "fano": fano,
        "spectrum": spectrum.values,
        "pt_spectrum": pt_spectrum.values,
        "phc": phc,
        "cmm": cmm,
    });
    Ok(Outcome::ok(render(&doc, json_out)))
}

/// The model, grid and provenance of a sweep.
struct Sweep {
    choice: ModelChoice,
    grid: Vec<f64>,
    lo: f64,
    hi: f64,
}

fn preset_mode(emit: Emit) -> BewMode {
    match emit {
        Emit::Fig5 | Emit::Fig7 => BewMode::Decay,
        _ => BewMode::ParameterX,
    }
}

fn resolve_choice(args: &CommonArgs) -> CliResult<ModelChoice> {
    let Some(emit) = args.emit else {
        return read_model(args);
    };
    if args.input.is_some() || args.x.is_some() {
        return Err(CliError::Usage("--emit presets use the built-in bew family".into()));
    }
    let wanted = match preset_mode(emit) {
        BewMode::Decay => ModeArg::Decay,
        _ => ModeArg::X,
    };
    if args.mode.is_some_and(|m| m != wanted) {
        return Err(CliError::Usage(format!(
            "--emit {} fixes --mode {}",
            emit_name(emit),
            mode_name(wanted)
        )));
    }
    Ok(bew_choice(bew_spec(Some(wanted), args.gamma)?))
}

fn resolve_sweep(args: &CommonArgs, min_n: usize) -> CliResult<Sweep> {
    let choice = resolve_choice(args)?;
    let (dlo, dhi, dn) = choice.default_grid;
    let lo = args.lo.unwrap_or(dlo);
    let hi = args.hi.unwrap_or(dhi);
    let n = args.n.unwrap_or(dn);
    if n < min_n {
        return Err(CliError::Usage(format!("--n must be at least {min_n}, got {n}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Usage(format!("need finite --lo < --hi, got [{lo}, {hi}]")));
    }
    Ok(Sweep { choice, grid: linspace(lo, hi, n), lo, hi })
}

fn trace_options(args: &CommonArgs) -> TraceOptions {
    let diff = DiffOptions { step: args.h, ..DiffOptions::default() };
    TraceOptions { tol: args.tol, diff }
}

fn meta(command: &str, args: &CommonArgs, sweep: &Sweep) -> Value {
    let opts = trace_options(args);
    let mut tolerances = json!({
        "tol": args.tol,
        "eps_den": opts.diff.eps_den,
        "h": args.h,
    });
    if command == "crossings" {
        tolerances["bisect_tol"] = Value::from(args.bisect_tol);
    }
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "emit": args.emit.map(emit_name),
        "model": sweep.choice.description,
        "tolerances": tolerances,
        "grid": { "lo": sweep.lo, "hi": sweep.hi, "n": sweep.grid.len() },
    })
}

fn table_output(command: &str, args: &CommonArgs, sweep: &Sweep, table: &Table) -> String {
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let doc = json!({ "meta": meta(command, args, sweep), "points": table.json_rows() });
            pretty(&doc)
        }
    }
}

fn trajectory(args: &CommonArgs) -> CliResult<Outcome> {
    let sweep = resolve_sweep(args, 2)?;
    let table = match args.emit {
        Some(Emit::Cone) => cone_table(&sweep.grid)?,
        emit => {
            let points = trace_trajectory(sweep.choice.model.as_ref(), &sweep.grid, &trace_options(args))?;
            match emit {
                None => full_table(&points),
                Some(e) => preset_table(e, &points),
            }
        }
    };
    Ok(Outcome::ok(table_output("trajectory", args, &sweep, &table)))
}

fn x_cell(p: &TrajectoryPoint) -> Cell {
    p.x_value.map_or(Cell::Empty, Cell::Num)
}

fn region_cell(p: &TrajectoryPoint) -> Cell {
    Cell::Text(p.region.label.code().to_string())
}

/// Speeds of the four branches, then their quadrispeed squares. A stalled
/// clock gives `inf` speed and `-inf` squared quadrispeed.
fn motion_cells(p: &TrajectoryPoint) -> Vec<Cell> {
    let k = &p.kinematics;
    let speeds = k.speeds().map(|s| Cell::opt(s, f64::INFINITY));
    let qspeeds = k.qspeeds_sq().map(|q| Cell::opt(q, f64::NEG_INFINITY));
    speeds.into_iter().chain(qspeeds).collect()
}

fn full_table(points: &[TrajectoryPoint]) -> Table {
    let mut t = Table::new(&TRAJECTORY_COLUMNS);
    for p in points {
        let c = &p.coords;
        let q = &p.quad;
        let mut row = vec![Cell::Num(p.theta), x_cell(p)];
        row.extend(c.branch1().into_iter().chain(c.branch2()).map(Cell::Num));
        row.extend(q.as_array().into_iter().map(Cell::Num));
        row.push(region_cell(p));
        row.extend(motion_cells(p));
        row.push(Cell::Num(p.min_eigenvalue));
        t.push(row);
    }
    t
}

fn preset_table(emit: Emit, points: &[TrajectoryPoint]) -> Table {
    let columns: &[&'static str] = match emit {
        Emit::Fig2 => &["x", "t_minus", "v_plus", "t_plus", "v_minus"],
        Emit::Fig3 => &["x", "t_minus", "v_minus", "t_plus", "v_plus", "region"],
        Emit::Fig4 => &["x", "s1", "s2"],
        Emit::Fig5 => &["theta", "x", "s1", "s2"],
        Emit::Fig6 => &["x", "s1t_sq", "s2t_sq", "region"],
        Emit::Fig7 => &["theta", "x", "s1t_sq", "s2t_sq", "region"],
        Emit::Cone => unreachable!("cone rows do not come from a trajectory"),
    };
    let mut t = Table::new(columns);
    for p in points {
        let c = &p.coords;
        let q = &p.quad;
        let n = Cell::Num;
        let row = match emit {
            Emit::Fig2 => vec![x_cell(p), n(c.t_minus), n(c.v_plus), n(c.t_plus), n(c.v_minus)],
            Emit::Fig3 => vec![
                x_cell(p),
                n(c.t_minus),
                n(c.v_minus),
                n(c.t_plus),
                n(c.v_plus),
                region_cell(p),
            ],
            Emit::Fig4 => vec![x_cell(p), n(signed_root(q.s1_sq)), n(signed_root(q.s2_sq))],
            Emit::Fig5 => vec![
                n(p.theta),
                x_cell(p),
                n(signed_root(q.s1_sq)),
                n(signed_root(q.s2_sq)),
            ],
            Emit::Fig6 => vec![x_cell(p), n(q.s1t_sq), n(q.s2t_sq), region_cell(p)],
            Emit::Fig7 => vec![n(p.theta), x_cell(p), n(q.s1t_sq), n(q.s2t_sq), region_cell(p)],
            Emit::Cone => unreachable!(),
        };
        t.push(row);
    }
    t
}

fn cone_table(grid: &[f64]) -> CliResult<Table> {
    let mut t = Table::new(&["x", "t", "u", "v", "w"]);
    for &x in grid {
        let mut row = vec![Cell::Num(x)];
        row.extend(lightcone_reference(x)?.into_iter().map(Cell::Num));
        t.push(row);
    }
    Ok(t)
}

fn speeds(args: &CommonArgs) -> CliResult<Outcome> {
    let sweep = resolve_sweep(args, 2)?;
    let points = trace_trajectory(sweep.choice.model.as_ref(), &sweep.grid, &trace_options(args))?;
    let mut t = Table::new(&SPEED_COLUMNS);
    for p in &points {
        let mut row = vec![Cell::Num(p.theta), Cell::Num(p.coords.t_minus), Cell::Num(p.coords.t_plus)];
        row.extend(motion_cells(p));
        t.push(row);
    }
    Ok(Outcome::ok(table_output("speeds", args, &sweep, &t)))
}

fn crossings(args: &CommonArgs) -> CliResult<Outcome> {
    let mut defaults = args.clone();
    defaults.n = Some(args.n.unwrap_or(DEFAULT_COARSE_N));
    let sweep = resolve_sweep(&defaults, 2)?;
    let scan = find_crossings(
        sweep.choice.model.as_ref(),
        sweep.lo,
        sweep.hi,
        sweep.grid.len(),
        args.bisect_tol,
    )?;
    for w in &scan.warnings {
        eprintln!("warning: {w}");
    }
    let mut t = Table::new(&["theta_star", "kind", "driver", "refinement_width", "indicator"]);
    for e in &scan.events {
        t.push(vec![
            Cell::Num(e.theta_star),
            Cell::Text(e.kind.to_string()),
            Cell::Text(e.driver.column().to_string()),
            Cell::Num(e.refinement_width),
            Cell::Num(e.indicator),
        ]);
    }
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Csv => t.to_csv(),
        Format::Json => {
            let warnings: Vec<Value> = scan
                .warnings
                .iter()
                .map(|w| json!({ "cell_lo": w.cell_lo, "cell_hi": w.cell_hi }))
                .collect();
            pretty(&json!({
                "meta": meta("crossings", &defaults, &sweep),
                "events": t.json_rows(),
                "warnings": warnings,
            }))
        }
    };
    Ok(Outcome::ok(text))
}

fn emit_name(e: Emit) -> &'static str {
    match e {
        Emit::Fig2 => "fig2",
        Emit::Fig3 => "fig3",
        Emit::Fig4 => "fig4",
        Emit::Fig5 => "fig5",
        Emit::Fig6 => "fig6",
        Emit::Fig7 => "fig7",
        Emit::Cone => "cone",
    }
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::X => "x",
        ModeArg::Decay => "decay",
        ModeArg::Growth => "growth",
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

fn render(v: &Value, json_out: bool) -> String {
    if json_out {
        return pretty(v);
    }
    let mut out = String::new();
    render_text(v, "", &mut out);
    out
}

/// `dotted.key: value` lines; arrays of scalars stay on one line.
fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(child, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                render_text(child, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&scalar_text(v));
            out.push('\n');
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), fmt_f64),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
