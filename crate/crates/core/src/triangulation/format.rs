//! Triangulation files.
//!
//! ```text
//! [gluings]
//! 0: F012=3(021) F013=1(213) F023=2(130) F123=1(230)
//! [curves]
//! cusp=0 name=m steps=(0,3,0,+1);(1,3,1,-1)
//! [labels]
//! 0(01)=2/1
//! ```
//!
//! `F012=3(021)` glues face 012 to tetrahedron 3 with 0→0, 1→2, 2→1.
//! Lines starting with `#` are comments.

use super::perm::{face_vertices, Perm};
use super::{
    edge_index, face_name, CornerStep, CurveKind, Gluing, PeripheralCurve, Triangulation,
    TriangulationError, EDGES,
};
use std::collections::BTreeMap;
use std::fmt::Write;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> TriangulationError {
    TriangulationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn face_from_name(name: &str) -> Option<u8> {
    match name {
        "F012" => Some(3),
        "F013" => Some(2),
        "F023" => Some(1),
        "F123" => Some(0),
        _ => None,
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Gluings,
    Curves,
    Labels,
}

/// Parses a triangulation file; see the module documentation for the format.
pub fn parse_gluing_table(text: &str) -> Result<Triangulation, TriangulationError> {
    let mut section = Section::None;
    let mut rows: BTreeMap<usize, [Option<Gluing>; 4]> = BTreeMap::new();
    let mut curves = Vec::new();
    let mut labels = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = line.len() - trimmed.len();
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[gluings]" => Section::Gluings,
                "[curves]" => Section::Curves,
                "[labels]" => Section::Labels,
                other => return Err(syntax(line_no, indent + 1, format!("unknown section {other}"))),
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(syntax(line_no, indent + 1, "content before the first section"))
            }
            Section::Gluings => {
                let (t, faces) = parse_gluing_row(trimmed, line_no, indent)?;
                if rows.insert(t, faces).is_some() {
                    return Err(syntax(line_no, indent + 1, format!("duplicate row for tetrahedron {t}")));
                }
            }
            Section::Curves => curves.push(parse_curve_row(trimmed, line_no, indent)?),
            Section::Labels => {
                let (key, name) = parse_label_row(trimmed, line_no, indent)?;
                labels.insert(key, name);
            }
        }
    }

    let n = rows.len();
    let mut gluings = Vec::with_capacity(n);
    for (i, (t, faces)) in rows.into_iter().enumerate() {
        if t != i {
            return Err(TriangulationError::Syntax {
                line: 0,
                column: 0,
                message: format!("tetrahedron rows must be numbered 0..{n}; missing {i}"),
            });
        }
        let mut row = [Gluing {
            tet: 0,
            perm: Perm::IDENTITY,
        }; 4];
        for u in 0..4u8 {
            match faces[u as usize] {
                Some(g) => row[u as usize] = g,
                None => {
                    return Err(TriangulationError::BoundaryFace {
                        tet: t,
                        face: face_name(u),
                    })
                }
            }
        }
        gluings.push(row);
    }
    Triangulation::new(gluings, curves, labels)
}

type GluingRow = [Option<Gluing>; 4];

fn parse_gluing_row(s: &str, line: usize, indent: usize) -> Result<(usize, GluingRow), TriangulationError> {
    let colon = s
        .find(':')
        .ok_or_else(|| syntax(line, indent + 1, "expected `t:` at row start"))?;
    let t: usize = s[..colon]
        .trim()
        .parse()
        .map_err(|_| syntax(line, indent + 1, "tetrahedron index must be a non-negative integer"))?;
    let mut faces: GluingRow = [None; 4];
    let mut seen = [false; 4];
    let mut offset = colon + 1;
    for tok in s[colon + 1..].split_whitespace() {
        let pos = s[offset..].find(tok).map(|p| p + offset).unwrap_or(offset);
        offset = pos + tok.len();
        let col = indent + pos + 1;
        let (fname, target) = tok
            .split_once('=')
            .ok_or_else(|| syntax(line, col, format!("expected Fxyz=t(pqr), found `{tok}`")))?;
        let u = face_from_name(fname)
            .ok_or_else(|| syntax(line, col, format!("unknown face `{fname}`")))?;
        if seen[u as usize] {
            return Err(syntax(line, col, format!("face {fname} given twice")));
        }
        seen[u as usize] = true;
        if target == "-" {
            continue;
        }
        let open = target
            .find('(')
            .ok_or_else(|| syntax(line, col, format!("expected t(pqr), found `{target}`")))?;
        if !target.ends_with(')') {
            return Err(syntax(line, col, format!("expected t(pqr), found `{target}`")));
        }
        let tt: usize = target[..open]
            .parse()
            .map_err(|_| syntax(line, col, format!("bad target tetrahedron in `{target}`")))?;
        let digits: Vec<u8> = target[open + 1..target.len() - 1]
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<Vec<u8>>>()
            .ok_or_else(|| syntax(line, col, format!("bad vertex images in `{target}`")))?;
        if digits.len() != 3 {
            return Err(syntax(line, col, format!("expected three vertex images in `{target}`")));
        }
        let fv = face_vertices(u);
        let mut images = [0u8; 4];
        for (k, &v) in fv.iter().enumerate() {
            images[v as usize] = digits[k];
        }
        let missing = (0..4u8).find(|x| !digits.contains(x));
        match missing {
            Some(m) if digits.iter().all(|&d| d < 4) => images[u as usize] = m,
            _ => return Err(syntax(line, col, format!("vertex images in `{target}` are not distinct vertices"))),
        }
        let perm = Perm::new(images)
            .ok_or_else(|| syntax(line, col, format!("vertex images in `{target}` are not a permutation")))?;
        faces[u as usize] = Some(Gluing { tet: tt, perm });
    }
    if seen.iter().any(|&x| !x) {
        return Err(syntax(line, indent + 1, "each row needs all four faces F012 F013 F023 F123"));
    }
    Ok((t, faces))
}

fn parse_curve_row(s: &str, line: usize, indent: usize) -> Result<PeripheralCurve, TriangulationError> {
    let mut cusp = None;
    let mut kind = None;
    let mut steps = None;
    let mut offset = 0;
    for tok in s.split_whitespace() {
        let pos = s[offset..].find(tok).map(|p| p + offset).unwrap_or(offset);
        offset = pos + tok.len();
        let col = indent + pos + 1;
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| syntax(line, col, format!("expected key=value, found `{tok}`")))?;
        match key {
            "cusp" => {
                cusp = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| syntax(line, col, "cusp must be a non-negative integer"))?,
                )
            }
            "name" => {
                kind = Some(match value {
                    "m" => CurveKind::Meridian,
                    "l" => CurveKind::Longitude,
                    _ => return Err(syntax(line, col, "curve name must be m or l")),
                })
            }
            "steps" => steps = Some(parse_steps(value, line, col)?),
            _ => return Err(syntax(line, col, format!("unknown curve field `{key}`"))),
        }
    }
    match (cusp, kind, steps) {
        (Some(cusp), Some(kind), Some(steps)) => Ok(PeripheralCurve { cusp, kind, steps }),
        _ => Err(syntax(line, indent + 1, "curve rows need cusp=, name= and steps=")),
    }
}

fn parse_steps(value: &str, line: usize, col: usize) -> Result<Vec<CornerStep>, TriangulationError> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in value.split(';') {
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| syntax(line, col, format!("step `{part}` must look like (t,v,w,±1)")))?;
        let fields: Vec<&str> = inner.split(',').collect();
        if fields.len() != 4 {
            return Err(syntax(line, col, format!("step `{part}` needs four fields")));
        }
        let bad = || syntax(line, col, format!("bad number in step `{part}`"));
        let tet: usize = fields[0].parse().map_err(|_| bad())?;
        let vertex: u8 = fields[1].parse().map_err(|_| bad())?;
        let corner: u8 = fields[2].parse().map_err(|_| bad())?;
        let dir: i8 = match fields[3] {
            "+1" | "1" => 1,
            "-1" => -1,
            _ => return Err(syntax(line, col, format!("direction in `{part}` must be +1 or -1"))),
        };
        out.push(CornerStep {
            tet,
            vertex,
            corner,
            dir,
        });
    }
    Ok(out)
}

fn parse_label_row(s: &str, line: usize, indent: usize) -> Result<((usize, usize), String), TriangulationError> {
    let (key, name) = s
        .split_once('=')
        .ok_or_else(|| syntax(line, indent + 1, "expected t(uv)=label"))?;
    let key = key.trim();
    let name = name.trim();
    let bad = || syntax(line, indent + 1, format!("bad edge key `{key}`"));
    let open = key.find('(').ok_or_else(bad)?;
    let tet: usize = key[..open].parse().map_err(|_| bad())?;
    let inner = key[open + 1..].strip_suffix(')').ok_or_else(bad)?;
    let d: Vec<u8> = inner
        .chars()
        .map(|c| c.to_digit(10).map(|x| x as u8))
        .collect::<Option<Vec<u8>>>()
        .ok_or_else(bad)?;
    if d.len() != 2 || d[0] == d[1] || d[0] > 3 || d[1] > 3 {
        return Err(bad());
    }
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(syntax(line, indent + open + 1, "labels must be non-empty without spaces"));
    }
    Ok(((tet, edge_index(d[0], d[1])), name.to_string()))
}

impl Triangulation {
    /// Canonical text form; `parse_gluing_table` reproduces an equal value.
    pub fn to_text(&self) -> String {
        let mut out = String::from("[gluings]\n");
        for (t, faces) in self.gluings().iter().enumerate() {
            write!(out, "{t}:").unwrap();
            for u in [3u8, 2, 1, 0] {
                let g = faces[u as usize];
                let fv = face_vertices(u);
                write!(
                    out,
                    " {}={}({}{}{})",
                    face_name(u),
                    g.tet,
                    g.perm.apply(fv[0]),
                    g.perm.apply(fv[1]),
                    g.perm.apply(fv[2])
                )
                .unwrap();
            }
            out.push('\n');
        }
        if !self.curves().is_empty() {
            out.push_str("[curves]\n");
            for c in self.curves() {
                let steps: Vec<String> = c.steps.iter().map(|s| s.to_string()).collect();
                writeln!(
                    out,
                    "cusp={} name={} steps={}",
                    c.cusp,
                    c.kind.short_name(),
                    steps.join(";")
                )
                .unwrap();
            }
        }
        if !self.labels().is_empty() {
            out.push_str("[labels]\n");
            for (&(t, e), name) in self.labels() {
                let (a, b) = EDGES[e];
                writeln!(out, "{t}({a}{b})={name}").unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_unglued_tetrahedron_is_rejected() {
        let text = "[gluings]\n0: F012=- F013=- F023=- F123=-\n";
        assert!(matches!(
            parse_gluing_table(text),
            Err(TriangulationError::BoundaryFace { tet: 0, .. })
        ));
    }

    #[test]
    fn syntax_error_reports_position() {
        let text = "[gluings]\n0: F012=3(021) F013=x\n";
        match parse_gluing_table(text) {
            Err(TriangulationError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 16);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_021_means_swap_of_1_and_2() {
        let text = "[gluings]\n\
            0: F012=3(021) F013=1(213) F023=2(130) F123=1(230)\n\
            1: F012=4(102) F013=2(132) F023=0(312) F123=0(103)\n\
            2: F012=2(203) F013=0(302) F023=2(102) F123=1(031)\n\
            3: F012=0(021) F013=4(103) F023=4(203) F123=4(213)\n\
            4: F012=1(102) F013=3(103) F023=3(203) F123=3(213)\n";
        let t = parse_gluing_table(text).unwrap();
        let g = t.gluing(0, 3);
        assert_eq!(g.tet, 3);
        assert_eq!(g.perm, Perm([0, 2, 1, 3]));
    }
}
