//! CSV emission and the replay checks that reload it.
//!
//! Floats are written in shortest round-trip form, so a reloaded row is
//! bit-identical to the value that was written.

use std::io::Write;

use serde::Serialize;

use crate::analysis::{run_trial, ConjectureReport};
use crate::cubic::CubicMatrix;
use crate::dynamics::{cesaro_averages, phi_upper_bound, single_male_shape, Orbit, Trajectory};
use crate::error::{QsoError, Result};
use crate::simplex::{max_norm_distance, SimplexPoint};

/// Largest deviation a replayed row may show.
pub const REPLAY_TOL: f64 = 1e-9;

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn csv_err(msg: impl Into<String>) -> QsoError {
    QsoError::Document(msg.into())
}

pub fn trajectory_header(n: usize) -> Vec<String> {
    let mut h = vec!["step".to_string()];
    h.extend((0..n).map(|k| format!("x_{k}")));
    h.extend(["phi", "phi_bound", "dist_max"].map(String::from));
    h
}

/// `step,x_0,..,x_{n-1},phi,phi_bound,dist_max`.
///
/// `phi` is empty below three states; `phi_bound` is filled only for
/// single-male F-QSOs; `dist_max` is the max-norm distance to the
/// empty-body vertex `(1, 0, .., 0)`.
pub fn write_trajectory_csv<W: Write>(w: W, p: &CubicMatrix, t: &Trajectory) -> Result<()> {
    let n = p.n();
    let bounded = single_male_shape(p);
    let vertex = SimplexPoint::vertex(n, 0)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(trajectory_header(n))?;
    for (step, x) in t.points.iter().enumerate() {
        let mut row = vec![step.to_string()];
        row.extend(x.coords().iter().map(|&c| num(c)));
        row.push(
            t.phi_values
                .as_ref()
                .map_or(String::new(), |v| num(v[step])),
        );
        row.push(if bounded {
            num(phi_upper_bound(u32::try_from(step).unwrap_or(u32::MAX)).value)
        } else {
            String::new()
        });
        row.push(num(x.max_distance(&vertex)));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// `n,avg_0,..,avg_{n-1}`.
pub fn write_ergodic_csv<W: Write>(w: W, averages: &[(usize, SimplexPoint)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let dim = averages.first().map_or(0, |(_, x)| x.dim());
    let mut header = vec!["n".to_string()];
    header.extend((0..dim).map(|k| format!("avg_{k}")));
    out.write_record(&header)?;
    for (count, x) in averages {
        let mut row = vec![count.to_string()];
        row.extend(x.coords().iter().map(|&c| num(c)));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn format_females(f: &[usize]) -> String {
    f.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

/// `trial,seed,F,steps,final_dist,converged`, with `F` written as `2;3`
/// and `steps` empty when the trial never came within `tol`.
pub fn write_conjecture_csv<W: Write>(w: W, report: &ConjectureReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["trial", "seed", "F", "steps", "final_dist", "converged"])?;
    for o in &report.outcomes {
        out.write_record([
            o.trial.to_string(),
            o.seed.to_string(),
            format_females(&o.females),
            o.steps.map_or(String::new(), |s| s.to_string()),
            num(o.final_dist),
            o.converged.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CsvKind {
    Trajectory,
    Ergodic,
    Conjecture,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    pub kind: CsvKind,
    pub rows_checked: usize,
    pub max_deviation: f64,
    /// One line per row that failed, with the reason.
    pub failures: Vec<String>,
}

impl ReplayReport {
    fn new(kind: CsvKind) -> Self {
        Self {
            kind,
            rows_checked: 0,
            max_deviation: 0.0,
            failures: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, row: usize, what: &str, deviation: f64) {
        self.max_deviation = self.max_deviation.max(deviation);
        if !(deviation <= REPLAY_TOL) {
            self.failures
                .push(format!("row {row}: {what} deviates by {deviation:e}"));
        }
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(text: &str) -> Result<Table> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(String::from).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Table { header, rows })
}

pub fn detect_kind(text: &str) -> Result<CsvKind> {
    let first = text.split([',', '\n']).next().unwrap_or("").trim();
    match first {
        "step" => Ok(CsvKind::Trajectory),
        "n" => Ok(CsvKind::Ergodic),
        "trial" => Ok(CsvKind::Conjecture),
        other => Err(csv_err(format!(
            "unrecognized CSV header starting with {other:?}"
        ))),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| csv_err(format!("{s:?} is not a number")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| csv_err(format!("{s:?} is not a nonnegative integer")))
}

fn parse_opt_f64(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_f64(s).map(Some)
    }
}

/// Deviation between an optional recorded value and its recomputation.
fn optional_gap(recorded: Option<f64>, expected: Option<f64>) -> f64 {
    match (recorded, expected) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Recomputes every row `n + 1` of a trajectory CSV from row `n`.
pub fn replay_trajectory(p: &CubicMatrix, text: &str) -> Result<ReplayReport> {
    let n = p.n();
    let table = read_table(text)?;
    if table.header != trajectory_header(n) {
        return Err(csv_err(format!(
            "header does not match a trajectory over {n} states"
        )));
    }
    let bounded = single_male_shape(p);
    let vertex = SimplexPoint::vertex(n, 0)?;
    let mut report = ReplayReport::new(CsvKind::Trajectory);
    let mut points = Vec::with_capacity(table.rows.len());
    for (r, row) in table.rows.iter().enumerate() {
        if parse_usize(&row[0])? != r {
            return Err(csv_err(format!("row {r} has step {}", row[0])));
        }
        let coords = row[1..=n]
            .iter()
            .map(|s| parse_f64(s))
            .collect::<Result<Vec<_>>>()?;
        let x = SimplexPoint::new(coords)?;

        let phi = (n >= 3).then(|| crate::dynamics::phi(&x)).transpose()?;
        report.record(r, "phi", optional_gap(parse_opt_f64(&row[n + 1])?, phi));
        let bound = bounded.then(|| phi_upper_bound(u32::try_from(r).unwrap_or(u32::MAX)).value);
        report.record(
            r,
            "phi_bound",
            optional_gap(parse_opt_f64(&row[n + 2])?, bound),
        );
        report.record(
            r,
            "dist_max",
            (parse_f64(&row[n + 3])? - x.max_distance(&vertex)).abs(),
        );
        points.push(x);
        report.rows_checked += 1;
    }
    for (r, pair) in points.windows(2).enumerate() {
        let next = Orbit::new(p, pair[0].clone())?
            .nth(1)
            .expect("an orbit never ends before an error")?;
        report.record(r + 1, "state", next.max_distance(&pair[1]));
    }
    Ok(report)
}

/// Takes the `n = 1` row as the start and recomputes every average.
pub fn replay_ergodic(p: &CubicMatrix, text: &str) -> Result<ReplayReport> {
    let n = p.n();
    let table = read_table(text)?;
    if table.header.len() != n + 1 {
        return Err(csv_err(format!(
            "header does not match averages over {n} states"
        )));
    }
    let mut checkpoints = Vec::new();
    let mut recorded = Vec::new();
    for row in &table.rows {
        checkpoints.push(parse_usize(&row[0])?);
        recorded.push(
            row[1..]
                .iter()
                .map(|s| parse_f64(s))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if checkpoints.first() != Some(&1) {
        return Err(csv_err("an ergodic CSV must start with the n = 1 row"));
    }
    let x0 = SimplexPoint::new(recorded[0].clone())?;
    let recomputed = cesaro_averages(p, x0, &checkpoints)?;
    let mut report = ReplayReport::new(CsvKind::Ergodic);
    for (r, ((_, avg), want)) in recomputed.iter().zip(&recorded).enumerate() {
        report.record(r, "average", max_norm_distance(avg.coords(), want));
        report.rows_checked += 1;
    }
    Ok(report)
}

/// Reruns each trial from its seed and female set.
pub fn replay_conjecture(
    m: usize,
    iterations: usize,
    tol: f64,
    text: &str,
) -> Result<ReplayReport> {
    let table = read_table(text)?;
    if table.header != ["trial", "seed", "F", "steps", "final_dist", "converged"] {
        return Err(csv_err("header does not match a conjecture scan"));
    }
    let mut report = ReplayReport::new(CsvKind::Conjecture);
    for (r, row) in table.rows.iter().enumerate() {
        let seed: u64 = row[1]
            .parse()
            .map_err(|_| csv_err(format!("row {r}: bad seed {:?}", row[1])))?;
        let females = row[2]
            .split(';')
            .map(parse_usize)
            .collect::<Result<Vec<_>>>()?;
        let outcome = run_trial(m, &females, seed, iterations, tol)?;
        let steps = if row[3].is_empty() {
            None
        } else {
            Some(parse_usize(&row[3])?)
        };
        if steps != outcome.steps || row[5] != outcome.converged.to_string() {
            report.failures.push(format!(
                "row {r}: steps or convergence flag differ on rerun"
            ));
        }
        report.record(
            r,
            "final_dist",
            (parse_f64(&row[4])? - outcome.final_dist).abs(),
        );
        report.rows_checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{conjecture_scan, FPolicy, ScanParameters};
    use crate::dynamics::{log_schedule, trajectory};
    use crate::operators::{build_v0_m2, ganikhodzhaev_v0};

    fn traj_csv(p: &CubicMatrix, x0: &[f64], steps: usize) -> String {
        let t = trajectory(
            p,
            SimplexPoint::new(x0.to_vec()).unwrap(),
            steps,
            -1.0,
            None,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, p, &t).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn two_type_rows() {
        let p = build_v0_m2(0.0, 0.5, 0.5).unwrap();
        let text = traj_csv(&p, &[0.0, 0.5, 0.5], 10);
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("step,x_0,x_1,x_2,phi,phi_bound,dist_max")
        );
        assert_eq!(lines.next(), Some("0,0.0,0.5,0.5,0.25,0.25,1.0"));
        assert_eq!(lines.next(), Some("1,0.5,0.25,0.25,0.0625,0.0625,0.5"));
        let report = replay_trajectory(&p, &text).unwrap();
        assert!(report.ok(), "{report:?}");
        assert_eq!(report.rows_checked, 11);
    }

    #[test]
    fn tampered_row_fails_replay() {
        let p = ganikhodzhaev_v0();
        let text = traj_csv(&p, &[0.2, 0.3, 0.5], 5);
        assert!(replay_trajectory(&p, &text).unwrap().ok());
        let bad = text.replacen("\n2,", "\n2,1e-3+", 1);
        assert!(replay_trajectory(&p, &bad).is_err());
        let lines: Vec<&str> = text.lines().collect();
        let mut fields: Vec<String> = lines[3].split(',').map(String::from).collect();
        let x0: f64 = fields[1].parse().unwrap();
        let x1: f64 = fields[2].parse().unwrap();
        fields[1] = format!("{:?}", x0 + 1e-6);
        fields[2] = format!("{:?}", x1 - 1e-6);
        let mut rebuilt: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        rebuilt[3] = fields.join(",");
        let report = replay_trajectory(&p, &(rebuilt.join("\n") + "\n")).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn ergodic_round_trip() {
        let p = ganikhodzhaev_v0();
        let x0 = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
        let avgs = cesaro_averages(&p, x0, &log_schedule(300)).unwrap();
        let mut buf = Vec::new();
        write_ergodic_csv(&mut buf, &avgs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,avg_0,avg_1,avg_2\n1,0.5,0.3,0.2\n"));
        assert_eq!(detect_kind(&text).unwrap(), CsvKind::Ergodic);
        assert!(replay_ergodic(&p, &text).unwrap().ok());
    }

    #[test]
    fn conjecture_round_trip() {
        let params = ScanParameters {
            m: 3,
            f_policy: FPolicy::Random,
            iterations: 20,
            tol: 1e-9,
            seed: 1,
        };
        let report = conjecture_scan(params, 10).unwrap();
        let mut buf = Vec::new();
        write_conjecture_csv(&mut buf, &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(detect_kind(&text).unwrap(), CsvKind::Conjecture);
        let replay = replay_conjecture(3, 20, 1e-9, &text).unwrap();
        assert!(replay.ok(), "{replay:?}");
        assert_eq!(replay.rows_checked, 10);
        let last = text.lines().last().unwrap();
        let mut fields: Vec<&str> = last.split(',').collect();
        fields[4] = "0.5";
        let tampered = text.replace(last, &fields.join(","));
        assert!(!replay_conjecture(3, 20, 1e-9, &tampered).unwrap().ok());
    }
}
