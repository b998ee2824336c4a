//! NZ fixture files.
//!
//! ```text
//! [nz]
//! 1 0 -1 -1
//! ...
//! [c]
//! -1 2 ...
//! [labels]
//! edge 0(23)
//! meridian 0
//! longitude 0
//! tet 0: 2/1 3/1 1/0 1/0 1/0 0(23)
//! dropped: 1/0
//! ```
//!
//! `[labels]` names the rows of `[nz]` in order. `tet` lines give the edge
//! labels of one tetrahedron in the order 01 02 03 12 13 23 and are needed
//! to generate Ptolemy equations. Without `dropped`, the last `n_c` edge
//! rows are dropped.

use super::{NzError, NzRow, NzSystem, RowKind};
use std::fmt::Write;

fn err(line: usize, message: impl Into<String>) -> NzError {
    NzError::Parse {
        line,
        message: message.into(),
    }
}

fn ints(s: &str, line: usize) -> Result<Vec<i64>, NzError> {
    s.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| err(line, format!("bad integer `{t}`"))))
        .collect()
}

pub fn parse_nz_fixture(text: &str) -> Result<NzSystem, NzError> {
    let mut section = "";
    let mut matrix: Vec<Vec<i64>> = Vec::new();
    let mut c: Vec<i64> = Vec::new();
    let mut kinds: Vec<(RowKind, String, usize)> = Vec::new();
    let mut tets: Vec<(usize, [String; 6], usize)> = Vec::new();
    let mut dropped_labels: Option<(Vec<String>, usize)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if s.starts_with('[') {
            section = match s {
                "[nz]" => "nz",
                "[c]" => "c",
                "[labels]" => "labels",
                _ => return Err(err(line, format!("unknown section {s}"))),
            };
            continue;
        }
        match section {
            "nz" => matrix.push(ints(s, line)?),
            "c" => c.extend(ints(s, line)?),
            "labels" => {
                let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
                let rest = rest.trim();
                match head {
                    "edge" if !rest.is_empty() => kinds.push((RowKind::Edge, rest.to_string(), line)),
                    "meridian" | "longitude" => {
                        let k: usize = rest
                            .parse()
                            .map_err(|_| err(line, "cusp index must be a non-negative integer"))?;
                        let kind = if head == "meridian" {
                            RowKind::Meridian(k)
                        } else {
                            RowKind::Longitude(k)
                        };
                        let label = format!("{}{k}", &head[..1]);
                        kinds.push((kind, label, line));
                    }
                    "tet" => {
                        let (idx, labels) = rest
                            .split_once(':')
                            .ok_or_else(|| err(line, "expected `tet j: six labels`"))?;
                        let j: usize = idx
                            .trim()
                            .parse()
                            .map_err(|_| err(line, "bad tetrahedron index"))?;
                        let parts: Vec<String> = labels.split_whitespace().map(String::from).collect();
                        let arr: [String; 6] = parts
                            .try_into()
                            .map_err(|_| err(line, "a tetrahedron has six edge labels"))?;
                        tets.push((j, arr, line));
                    }
                    "dropped:" => {
                        dropped_labels = Some((rest.split_whitespace().map(String::from).collect(), line))
                    }
                    _ => return Err(err(line, format!("unrecognised label line `{s}`"))),
                }
            }
            _ => return Err(err(line, "content before the first section")),
        }
    }

    if matrix.is_empty() {
        return Err(err(0, "empty [nz] section"));
    }
    let width = matrix[0].len();
    if width == 0 || width % 2 != 0 || matrix.iter().any(|r| r.len() != width) {
        return Err(err(0, "rows must share an even, non-zero length"));
    }
    let n = width / 2;
    if c.len() != matrix.len() {
        return Err(err(0, format!("{} rows but {} C entries", matrix.len(), c.len())));
    }
    if kinds.len() != matrix.len() {
        return Err(err(0, format!("{} rows but {} row labels", matrix.len(), kinds.len())));
    }

    let mut edge_rows = Vec::new();
    let mut cusp_rows = Vec::new();
    for ((coeffs, c), (kind, label, line)) in matrix.into_iter().zip(c).zip(kinds) {
        let row = NzRow {
            kind,
            label,
            coeffs,
            c,
        };
        match kind {
            RowKind::Edge => {
                if !cusp_rows.is_empty() {
                    return Err(err(line, "edge rows must precede cusp rows"));
                }
                edge_rows.push(row);
            }
            RowKind::Meridian(k) | RowKind::Longitude(k) => {
                let expected = if cusp_rows.len() % 2 == 0 {
                    RowKind::Meridian(cusp_rows.len() / 2)
                } else {
                    RowKind::Longitude(cusp_rows.len() / 2)
                };
                if kind != expected {
                    return Err(err(line, format!("cusp rows must run m0 l0 m1 l1 …; cusp {k} out of place")));
                }
                cusp_rows.push(row);
            }
        }
    }
    if edge_rows.len() != n {
        return Err(err(0, format!("{} edge rows for {n} tetrahedra", edge_rows.len())));
    }
    let cusp_count = cusp_rows.len() / 2;

    let tet_edges = if tets.is_empty() {
        None
    } else {
        let mut table = vec![None; n];
        for (j, labels, line) in tets {
            if j >= n {
                return Err(err(line, format!("tetrahedron {j} out of range")));
            }
            let mut row = [0usize; 6];
            for (e, l) in labels.iter().enumerate() {
                row[e] = edge_rows
                    .iter()
                    .position(|r| &r.label == l)
                    .ok_or_else(|| err(line, format!("unknown edge label `{l}`")))?;
            }
            table[j] = Some(row);
        }
        Some(
            table
                .into_iter()
                .enumerate()
                .map(|(j, r)| r.ok_or_else(|| err(0, format!("missing tet line for {j}"))))
                .collect::<Result<Vec<_>, _>>()?,
        )
    };

    let dropped = match dropped_labels {
        Some((labels, line)) => {
            let mut d = labels
                .iter()
                .map(|l| {
                    edge_rows
                        .iter()
                        .position(|r| &r.label == l)
                        .ok_or_else(|| err(line, format!("unknown edge label `{l}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            d.sort_unstable();
            d
        }
        None => (n.saturating_sub(cusp_count)..n).collect(),
    };

    Ok(NzSystem {
        n,
        cusp_count,
        edge_rows,
        cusp_rows,
        dropped,
        tet_edges,
    })
}

impl NzSystem {
    /// Canonical fixture text; [`parse_nz_fixture`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = String::from("[nz]\n");
        for r in self.rows() {
            let parts: Vec<String> = r.coeffs.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", parts.join(" ")).unwrap();
        }
        out.push_str("[c]\n");
        let parts: Vec<String> = self.c_vector().iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", parts.join(" ")).unwrap();
        out.push_str("[labels]\n");
        for r in self.rows() {
            match r.kind {
                RowKind::Edge => writeln!(out, "edge {}", r.label),
                RowKind::Meridian(k) => writeln!(out, "meridian {k}"),
                RowKind::Longitude(k) => writeln!(out, "longitude {k}"),
            }
            .unwrap();
        }
        if let Some(te) = &self.tet_edges {
            for (j, row) in te.iter().enumerate() {
                let names: Vec<&str> = row.iter().map(|&k| self.edge_rows[k].label.as_str()).collect();
                writeln!(out, "tet {j}: {}", names.join(" ")).unwrap();
            }
        }
        let names: Vec<&str> = self.dropped.iter().map(|&k| self.edge_rows[k].label.as_str()).collect();
        writeln!(out, "dropped: {}", names.join(" ")).unwrap();
        out
    }
}
