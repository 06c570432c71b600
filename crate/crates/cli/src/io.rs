//! Plain-text formats shared with downstream tooling.
//!
//! * edge list: one `u v` pair per line, 0-based node ids, `#` comments;
//!   the node count is the largest id plus one.
//! * bias CSV: header `agent,r1,...,rk`, one row per agent in order.
//! * opinion CSV: header `agent,x1,...,xk`, one row per agent in order.
//! * trajectory CSV: header `t,agent,x1,...,xk`, rows ordered by `t` then
//!   `agent`.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which parses back
//! to the identical `f64`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use biasdyn::{BiasSet, Network, OpinionState, Trajectory};

use crate::error::{CliError, CliResult};

pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn finish<W: Write>(path: &Path, mut w: W) -> CliResult<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_edge_list<W: Write>(net: &Network, mut w: W) -> std::io::Result<()> {
    for (u, v) in net.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Parses an edge list. The graph must be connected.
pub fn parse_edge_list<R: Read>(r: R, source_name: &str) -> CliResult<Network> {
    let err = |line, msg: String| CliError::input(source_name, line, msg);
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut n = 0;
    for (idx, line) in BufReader::new(r).lines().enumerate() {
        let lineno = Some(idx + 1);
        let line = line.map_err(|e| err(lineno, e.to_string()))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let ids: Vec<&str> = body.split_whitespace().collect();
        if ids.len() != 2 {
            return Err(err(
                lineno,
                format!("expected two node ids, found {}", ids.len()),
            ));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(lineno, format!("bad node id '{s}'")))
        };
        let (u, v) = (parse(ids[0])?, parse(ids[1])?);
        if u == v {
            return Err(err(lineno, format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(lineno, format!("duplicate edge {u} {v}")));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(err(None, "no edges".into()));
    }
    let net = Network::from_edges(n, &edges).map_err(|e| err(None, e.to_string()))?;
    if !net.is_connected() {
        return Err(err(None, "graph is not connected".into()));
    }
    Ok(net)
}

pub fn read_edge_list(path: &Path) -> CliResult<Network> {
    parse_edge_list(open(path)?, &path.display().to_string())
}

pub fn write_edge_list_file(net: &Network, path: &Path) -> CliResult<()> {
    let mut w = create(path)?;
    write_edge_list(net, &mut w).map_err(|e| CliError::io(path, e))?;
    finish(path, w)
}

fn header(lead: &[&str], prefix: char, k: usize) -> Vec<String> {
    lead.iter()
        .map(|s| s.to_string())
        .chain((1..=k).map(|l| format!("{prefix}{l}")))
        .collect()
}

fn write_rows<'a, W: Write>(
    w: W,
    head: Vec<String>,
    rows: impl Iterator<Item = (Vec<String>, &'a [f64])>,
) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&head)?;
    for (lead, values) in rows {
        csv.write_record(
            lead.into_iter()
                .chain(values.iter().map(|&v| format_real(v))),
        )?;
    }
    csv.flush()
}

pub fn write_bias_csv<W: Write>(b: &BiasSet<f64>, w: W) -> std::io::Result<()> {
    write_rows(
        w,
        header(&["agent"], 'r', b.k()),
        b.rows().enumerate().map(|(i, r)| (vec![i.to_string()], r)),
    )
}

pub fn write_state_csv<W: Write>(x: &OpinionState<f64>, w: W) -> std::io::Result<()> {
    write_rows(
        w,
        header(&["agent"], 'x', x.k()),
        x.rows().enumerate().map(|(i, r)| (vec![i.to_string()], r)),
    )
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory<f64>, w: W) -> std::io::Result<()> {
    let k = traj.final_state().k();
    let rows = traj.states.iter().zip(&traj.times).flat_map(|(s, &t)| {
        s.rows()
            .enumerate()
            .map(move |(i, r)| (vec![t.to_string(), i.to_string()], r))
    });
    write_rows(w, header(&["t", "agent"], 'x', k), rows)
}

/// Numeric table with a fixed lead of integer columns followed by `k` reals.
struct Table {
    lead: Vec<Vec<usize>>,
    values: Vec<f64>,
    k: usize,
    lines: Vec<usize>,
}

fn parse_table<R: Read>(r: R, source_name: &str, lead: &[&str], prefix: char) -> CliResult<Table> {
    let err = |line, msg: String| CliError::input(source_name, line, msg);
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r);
    let head = reader
        .headers()
        .map_err(|e| err(Some(1), e.to_string()))?
        .clone();
    let k = head.len().saturating_sub(lead.len());
    if k == 0
        || head
            .iter()
            .ne(header(lead, prefix, k).iter().map(String::as_str))
    {
        let want = header(lead, prefix, 1).join(",");
        return Err(err(
            Some(1),
            format!(
                "header must be {want},...; found '{}'",
                head.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut table = Table {
        lead: Vec::new(),
        values: Vec::new(),
        k,
        lines: Vec::new(),
    };
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let mut ids = Vec::with_capacity(lead.len());
        for (c, name) in lead.iter().enumerate() {
            let v = rec[c]
                .parse::<usize>()
                .map_err(|_| err(Some(line), format!("bad {name} '{}'", &rec[c])))?;
            ids.push(v);
        }
        for field in rec.iter().skip(lead.len()) {
            let v = field
                .parse::<f64>()
                .map_err(|_| err(Some(line), format!("bad number '{field}'")))?;
            if !v.is_finite() {
                return Err(err(Some(line), format!("non-finite value '{field}'")));
            }
            table.values.push(v);
        }
        table.lead.push(ids);
        table.lines.push(line);
    }
    if table.lead.is_empty() {
        return Err(err(None, "no data rows".into()));
    }
    Ok(table)
}

fn check_agent_order(t: &Table, col: usize, source_name: &str) -> CliResult<()> {
    for (i, ids) in t.lead.iter().enumerate() {
        if ids[col] != i {
            return Err(CliError::input(
                source_name,
                Some(t.lines[i]),
                format!("expected agent {i}, found {}", ids[col]),
            ));
        }
    }
    Ok(())
}

pub fn parse_bias_csv<R: Read>(r: R, source_name: &str) -> CliResult<BiasSet<f64>> {
    let t = parse_table(r, source_name, &["agent"], 'r')?;
    check_agent_order(&t, 0, source_name)?;
    BiasSet::new(t.lead.len(), t.k, t.values)
        .map_err(|e| CliError::input(source_name, None, e.to_string()))
}

pub fn parse_state_csv<R: Read>(r: R, source_name: &str) -> CliResult<OpinionState<f64>> {
    let t = parse_table(r, source_name, &["agent"], 'x')?;
    check_agent_order(&t, 0, source_name)?;
    OpinionState::new(t.lead.len(), t.k, t.values)
        .map_err(|e| CliError::input(source_name, None, e.to_string()))
}

/// Snapshots `(t, state)` in file order.
pub fn parse_trajectory_csv<R: Read>(
    r: R,
    source_name: &str,
) -> CliResult<Vec<(usize, OpinionState<f64>)>> {
    let t = parse_table(r, source_name, &["t", "agent"], 'x')?;
    let mut out: Vec<(usize, OpinionState<f64>)> = Vec::new();
    let mut start = 0;
    while start < t.lead.len() {
        let time = t.lead[start][0];
        let mut end = start;
        while end < t.lead.len() && t.lead[end][0] == time {
            if t.lead[end][1] != end - start {
                return Err(CliError::input(
                    source_name,
                    Some(t.lines[end]),
                    format!(
                        "expected agent {} at t={time}, found {}",
                        end - start,
                        t.lead[end][1]
                    ),
                ));
            }
            end += 1;
        }
        let here = Some(t.lines[start]);
        if let Some((_, first)) = out.first() {
            if end - start != first.n() {
                let msg = format!(
                    "snapshot t={time} has {} agents, expected {}",
                    end - start,
                    first.n()
                );
                return Err(CliError::input(source_name, here, msg));
            }
        }
        if matches!(out.last(), Some((prev, _)) if time <= *prev) {
            return Err(CliError::input(
                source_name,
                here,
                format!("time {time} does not increase"),
            ));
        }
        let values = t.values[start * t.k..end * t.k].to_vec();
        let state = OpinionState::new(end - start, t.k, values)
            .map_err(|e| CliError::input(source_name, here, e.to_string()))?;
        out.push((time, state));
        start = end;
    }
    Ok(out)
}

macro_rules! file_io {
    ($read:ident, $parse:ident, $write:ident, $write_to:ident, $ty:ty) => {
        pub fn $read(path: &Path) -> CliResult<$ty> {
            $parse(open(path)?, &path.display().to_string())
        }

        pub fn $write(value: &$ty, path: &Path) -> CliResult<()> {
            let mut w = create(path)?;
            $write_to(value, &mut w).map_err(|e| CliError::io(path, e))?;
            finish(path, w)
        }
    };
}

file_io!(
    read_bias_csv,
    parse_bias_csv,
    write_bias_file,
    write_bias_csv,
    BiasSet<f64>
);
file_io!(
    read_state_csv,
    parse_state_csv,
    write_state_file,
    write_state_csv,
    OpinionState<f64>
);

pub fn write_trajectory_file(traj: &Trajectory<f64>, path: &Path) -> CliResult<()> {
    let mut w = create(path)?;
    write_trajectory_csv(traj, &mut w).map_err(|e| CliError::io(path, e))?;
    finish(path, w)
}

pub fn read_trajectory_csv(path: &Path) -> CliResult<Vec<(usize, OpinionState<f64>)>> {
    parse_trajectory_csv(open(path)?, &path.display().to_string())
}
