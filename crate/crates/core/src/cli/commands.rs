use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::document::OperatorDocument;
use super::tables::{
    detect_kind, format_females, replay_conjecture, replay_ergodic, replay_trajectory,
    write_conjecture_csv, write_ergodic_csv, write_trajectory_csv, CsvKind, ReplayReport,
};
use super::{Command, ConjectureArgs, PolicyArg, StartArgs, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use crate::analysis::{conjecture_scan, count_first_row, uniform_simplex, FPolicy, ScanParameters};
use crate::classify::classify;
use crate::cubic::{validate_stochastic, CubicMatrix};
use crate::dynamics::{
    cesaro_averages, find_fixed_points, fixed_points_v0_m2, log_schedule, trajectory,
};
use crate::error::{QsoError, Result};
use crate::operators::{Preset, PRESET_NAMES};
use crate::simplex::SimplexPoint;

fn exit_code(e: &QsoError) -> i32 {
    match e {
        QsoError::Json(_) | QsoError::Document(_) | QsoError::Csv(_) | QsoError::Io(_) => {
            EXIT_USAGE
        }
        _ => EXIT_DOMAIN,
    }
}

pub(super) fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Validate { file, symmetrize } => validate(out, err, &file, symmetrize),
        Command::Trajectory {
            file,
            start,
            steps,
            tol,
            output,
        } => run_trajectory(out, err, &file, &start, steps, tol, output.as_deref()),
        Command::FixedPoints { file, starts, seed } => fixed_points(out, err, &file, starts, seed),
        Command::Ergodic {
            file,
            start,
            n,
            output,
        } => ergodic(out, err, &file, &start, n, output.as_deref()),
        Command::Conjecture(args) => conjecture(out, err, args),
        Command::Presets {
            emit,
            params,
            output,
        } => presets(out, err, emit.as_deref(), &params, output.as_deref()),
        Command::Replay {
            csv,
            operator,
            m,
            iterations,
            tol,
        } => replay(out, err, &csv, operator.as_deref(), m, iterations, tol),
    };
    result.unwrap_or_else(|(code, msg)| {
        // a closed stderr leaves nothing to report to
        let _ = writeln!(err, "error: {msg}");
        code
    })
}

type CmdResult = std::result::Result<i32, (i32, String)>;

fn fail(e: QsoError) -> (i32, String) {
    (exit_code(&e), e.to_string())
}

fn io_fail(e: std::io::Error) -> (i32, String) {
    fail(QsoError::Io(e))
}

fn load_matrix(file: &Path) -> std::result::Result<CubicMatrix, (i32, String)> {
    let doc = OperatorDocument::load(file).map_err(fail)?;
    doc.matrix().map_err(fail)
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        _ => s.to_string(),
    }
}

fn fmt_point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|&v| fmt_num(v)).collect();
    format!("({})", parts.join(", "))
}

fn fmt_set(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn validate(out: &mut dyn Write, err: &mut dyn Write, file: &Path, symmetrize: bool) -> CmdResult {
    let doc = OperatorDocument::load(file).map_err(fail)?;
    for w in doc.warnings() {
        writeln!(err, "warning: {w}").map_err(io_fail)?;
    }
    let raw = doc.expand_raw(symmetrize).map_err(fail)?;
    let report = validate_stochastic(&raw);
    if !report.ok {
        writeln!(
            out,
            "stochastic: no ({} violation(s))",
            report.violations.len()
        )
        .map_err(io_fail)?;
        for v in &report.violations {
            writeln!(out, "  {v}").map_err(io_fail)?;
        }
        return Ok(EXIT_DOMAIN);
    }
    let p = CubicMatrix::try_from(raw).map_err(fail)?;
    let class = classify(&p);
    let counts = count_first_row(&p);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("stochastic: yes\nstates: {}\n", p.n());
    text += &format!("volterra: {}\n", yes_no(class.is_volterra));
    text += &format!(
        "strictly non-volterra: {}\n",
        yes_no(class.is_strictly_non_volterra)
    );
    if class.is_f_qso() {
        let sets: Vec<String> = class.f_qso_sets.iter().map(|f| fmt_set(f)).collect();
        text += &format!("f-qso: yes, F = {}\n", sets.join(" or "));
    } else {
        text += "f-qso: no\n";
    }
    text += &format!(
        "N1 = {}\nN1~ = {}\npairs = {}\n",
        counts.n1, counts.n1_tilde, counts.total_pairs
    );
    if let (Some(lo), Some(hi)) = (counts.n1_lower_bound, counts.n1_tilde_upper_bound) {
        text += &format!("N1 lower bound = {lo}\nN1~ upper bound = {hi}\n");
    }
    out.write_all(text.as_bytes()).map_err(io_fail)?;
    Ok(EXIT_OK)
}

fn parse_start(start: &StartArgs, n: usize) -> Result<SimplexPoint> {
    let spec = start.start.trim();
    let random =
        |seed: u64| SimplexPoint::new(uniform_simplex(n, &mut ChaCha8Rng::seed_from_u64(seed)));
    match spec {
        "uniform" => SimplexPoint::uniform(n),
        "random" => random(start.seed),
        _ => {
            if let Some(seed) = spec.strip_prefix("random:") {
                let seed = seed
                    .parse()
                    .map_err(|_| QsoError::Document(format!("bad seed in start {spec:?}")))?;
                return random(seed);
            }
            let coords = spec
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| QsoError::Document(format!("cannot parse start {spec:?}")))?;
            if coords.len() != n {
                return Err(QsoError::DimensionMismatch {
                    expected: n,
                    found: coords.len(),
                });
            }
            SimplexPoint::new(coords)
        }
    }
}

fn write_to<F>(
    out: &mut dyn Write,
    output: Option<&Path>,
    emit: F,
) -> std::result::Result<(), (i32, String)>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_fail)?);
            emit(&mut file).map_err(fail)?;
            file.flush().map_err(io_fail)
        }
        None => emit(out).map_err(fail),
    }
}

fn run_trajectory(
    out: &mut dyn Write,
    err: &mut dyn Write,
    file: &Path,
    start: &StartArgs,
    steps: usize,
    tol: Option<f64>,
    output: Option<&Path>,
) -> CmdResult {
    let p = load_matrix(file)?;
    let x0 = parse_start(start, p.n()).map_err(fail)?;
    let reference = if p.n() >= 3 && classify(&p).is_f_qso() {
        Some(SimplexPoint::vertex(p.n(), 0).map_err(fail)?)
    } else {
        None
    };
    // without --tol no distance can reach -inf, so every step is taken
    let t = trajectory(&p, x0, steps, tol.unwrap_or(f64::NEG_INFINITY), reference).map_err(fail)?;
    write_to(out, output, |w| write_trajectory_csv(w, &p, &t))?;
    writeln!(err, "stop: {} after {} step(s)", t.stop_reason, t.steps()).map_err(io_fail)?;
    if let Some(s) = t.snapped_at {
        writeln!(err, "snapped to the empty-body vertex at step {s}").map_err(io_fail)?;
    }
    Ok(EXIT_OK)
}

fn rejection_reason(x: &[f64]) -> Option<String> {
    if let Some((k, v)) = x.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Some(format!("x_{k} = {} is negative", fmt_num(*v)));
    }
    if let Some((k, v)) = x.iter().enumerate().find(|(_, v)| **v > 1.0) {
        return Some(format!("x_{k} = {} exceeds 1", fmt_num(*v)));
    }
    None
}

fn fixed_points(
    out: &mut dyn Write,
    _err: &mut dyn Write,
    file: &Path,
    starts: usize,
    seed: u64,
) -> CmdResult {
    let p = load_matrix(file)?;
    let mut text = String::new();
    if p.n() == 3 && classify(&p).has_partition(3, &[2]) {
        let (a, b, c) = (p.get(1, 2, 0), p.get(1, 2, 1), p.get(1, 2, 2));
        let closed = fixed_points_v0_m2(a, b, c).map_err(fail)?;
        text += "closed form (two-type family):\n";
        for cand in &closed.candidates {
            let status = match rejection_reason(&cand.point) {
                None => "in simplex".to_string(),
                Some(why) => format!("rejected: {why}"),
            };
            text += &format!("  {}  [{status}]\n", fmt_point(&cand.point));
        }
    }
    let report = find_fixed_points(&p, starts, seed).map_err(fail)?;
    text += &format!("multistart search ({starts} starts, seed {seed}):\n");
    text += "  point  residual  in_simplex\n";
    for cand in &report.candidates {
        text += &format!(
            "  {}  {:e}  {}\n",
            fmt_point(&cand.point),
            cand.residual,
            cand.in_simplex
        );
    }
    match &report.unique_in_simplex {
        Some(x) => text += &format!("unique fixed point: {}\n", fmt_point(x.coords())),
        None => text += &format!("{} fixed point(s) found\n", report.candidates.len()),
    }
    out.write_all(text.as_bytes()).map_err(io_fail)?;
    Ok(EXIT_OK)
}

fn ergodic(
    out: &mut dyn Write,
    _err: &mut dyn Write,
    file: &Path,
    start: &StartArgs,
    n: usize,
    output: Option<&Path>,
) -> CmdResult {
    let p = load_matrix(file)?;
    let x0 = parse_start(start, p.n()).map_err(fail)?;
    if n == 0 {
        return Err((EXIT_USAGE, "-n must be at least 1".into()));
    }
    let averages = cesaro_averages(&p, x0, &log_schedule(n)).map_err(fail)?;
    write_to(out, output, |w| write_ergodic_csv(w, &averages))?;
    Ok(EXIT_OK)
}

fn conjecture(out: &mut dyn Write, err: &mut dyn Write, args: ConjectureArgs) -> CmdResult {
    let f_policy = match (args.females.is_empty(), args.f_policy) {
        (false, _) => FPolicy::Fixed(args.females.clone()),
        (true, Some(PolicyArg::All)) => FPolicy::All,
        (true, _) => FPolicy::Random,
    };
    let params = ScanParameters {
        m: args.m,
        f_policy,
        iterations: args.iterations,
        tol: args.tol,
        seed: args.seed,
    };
    let report = conjecture_scan(params, args.trials).map_err(|e| (EXIT_USAGE, e.to_string()))?;

    let csv_to_stdout = args.csv.as_deref() == Some(Path::new("-"));
    let w = &report.worst_case;
    let policy = match &report.parameters.f_policy {
        FPolicy::Fixed(f) => format!("F = {}", fmt_set(f)),
        FPolicy::All => "all F".to_string(),
        FPolicy::Random => "random F".to_string(),
    };
    let text = format!(
        "{}\nm = {}, {policy}, iterations = {}, tol = {:e}, seed = {}\n\
         converged: {}/{}\nmax final distance: {:e}\n\
         slowest trial: {} (seed {}, F = {}, steps {}, final distance {:e})\n",
        report.label,
        args.m,
        args.iterations,
        args.tol,
        args.seed,
        report.converged,
        report.trials,
        report.max_final_distance,
        w.trial,
        w.seed,
        format_females(&w.females),
        w.steps.map_or("-".to_string(), |s| s.to_string()),
        w.final_dist,
    );
    if csv_to_stdout {
        err.write_all(text.as_bytes()).map_err(io_fail)?;
    } else {
        out.write_all(text.as_bytes()).map_err(io_fail)?;
    }
    match args.csv {
        Some(_) if csv_to_stdout => write_to(out, None, |w| write_conjecture_csv(w, &report))?,
        Some(path) => write_to(out, Some(&path), |w| write_conjecture_csv(w, &report))?,
        None => {}
    }
    Ok(EXIT_OK)
}

fn presets(
    out: &mut dyn Write,
    _err: &mut dyn Write,
    emit: Option<&str>,
    params: &[f64],
    output: Option<&Path>,
) -> CmdResult {
    let Some(name) = emit else {
        let mut text = String::new();
        for (name, about) in PRESET_NAMES {
            text += &format!("{name:<22} {about}\n");
        }
        out.write_all(text.as_bytes()).map_err(io_fail)?;
        return Ok(EXIT_OK);
    };
    let preset = Preset::from_name(name, params).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let doc = OperatorDocument::from_preset(preset).map_err(fail)?;
    let json = doc.to_canonical_json().map_err(fail)?;
    write_to(out, output, |w| Ok(w.write_all(json.as_bytes())?))?;
    Ok(EXIT_OK)
}

fn replay(
    out: &mut dyn Write,
    _err: &mut dyn Write,
    csv: &Path,
    operator: Option<&Path>,
    m: Option<usize>,
    iterations: usize,
    tol: f64,
) -> CmdResult {
    let text = std::fs::read_to_string(csv).map_err(io_fail)?;
    let kind = detect_kind(&text).map_err(fail)?;
    let need_operator = || -> std::result::Result<CubicMatrix, (i32, String)> {
        let path: PathBuf = operator
            .ok_or((
                EXIT_USAGE,
                "--operator is required for this CSV".to_string(),
            ))?
            .to_path_buf();
        load_matrix(&path)
    };
    let report: ReplayReport = match kind {
        CsvKind::Trajectory => replay_trajectory(&need_operator()?, &text),
        CsvKind::Ergodic => replay_ergodic(&need_operator()?, &text),
        CsvKind::Conjecture => {
            let m = m.ok_or((
                EXIT_USAGE,
                "--m is required for a conjecture CSV".to_string(),
            ))?;
            replay_conjecture(m, iterations, tol, &text)
        }
    }
    .map_err(fail)?;
    let mut summary = format!(
        "replayed {} row(s), max deviation {:e}\n",
        report.rows_checked, report.max_deviation
    );
    for f in &report.failures {
        summary += &format!("  {f}\n");
    }
    summary += if report.ok() {
        "replay: ok\n"
    } else {
        "replay: FAILED\n"
    };
    out.write_all(summary.as_bytes()).map_err(io_fail)?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_DOMAIN })
}
