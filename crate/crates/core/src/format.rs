//! Line-oriented text format for instances.
//!
//! ```text
//! # comment
//! dim 2
//! matrix
//! 1/3 0
//! 0 2/3
//! control
//! vertices
//! -2 -1
//! 2 1
//! rays
//! lines
//! source 0 0
//! target vertices
//! 0 3
//! ```
//!
//! Rows follow their section keyword one per line; `control` may repeat to
//! form a union. `rays` and `lines` may be omitted.

use crate::exactnum::{fmt_rat, parse_rat, Rat};
use crate::geometry::{ControlSet, GenPolyhedron};
use crate::linalg::RatMatrix;
use crate::preprocess::LtiSystem;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    At { line: usize, col: usize, msg: String },
    #[error("missing section `{0}`")]
    Missing(&'static str),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

fn at(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::At { line, col, msg: msg.into() }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    None,
    Matrix,
    Vertices,
    Rays,
    Lines,
    Target,
}

#[derive(Default)]
struct Component {
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
    lines: Vec<Vec<Rat>>,
}

/// Tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter().map(|(s, t)| (text[..s].chars().count() + 1, t)).collect()
}

fn parse_row(line: usize, toks: &[(usize, &str)], dim: usize) -> Result<Vec<Rat>, ParseError> {
    if toks.len() != dim {
        let col = toks.get(dim).map_or(toks.last().map_or(1, |t| t.0), |t| t.0);
        return Err(at(line, col, format!("expected {dim} entries, found {}", toks.len())));
    }
    toks.iter().map(|&(col, t)| parse_rat(t).map_err(|e| at(line, col, e.to_string()))).collect()
}

pub fn parse_instance(text: &str) -> Result<LtiSystem, ParseError> {
    let mut dim: Option<usize> = None;
    let mut matrix: Vec<Vec<Rat>> = Vec::new();
    let mut comps: Vec<Component> = Vec::new();
    let mut source: Option<Vec<Rat>> = None;
    let mut target: Option<Vec<Vec<Rat>>> = None;
    let mut section = Section::None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else { continue };
        let is_keyword = head.starts_with(|c: char| c.is_ascii_alphabetic());
        if !is_keyword {
            let d = dim.ok_or_else(|| at(line, col, "`dim` must come first"))?;
            let row = parse_row(line, &toks, d)?;
            match section {
                Section::Matrix => matrix.push(row),
                Section::Vertices => comps.last_mut().expect("inside control").vertices.push(row),
                Section::Rays => comps.last_mut().expect("inside control").rays.push(row),
                Section::Lines => comps.last_mut().expect("inside control").lines.push(row),
                Section::Target => target.get_or_insert_with(Vec::new).push(row),
                Section::None => return Err(at(line, col, "row outside of any section")),
            }
            continue;
        }
        let rest = &toks[1..];
        let no_args = |rest: &[(usize, &str)]| match rest.first() {
            Some(&(c, t)) => Err(at(line, c, format!("unexpected `{t}`"))),
            None => Ok(()),
        };
        match head {
            "dim" => {
                if dim.is_some() {
                    return Err(at(line, col, "duplicate `dim`"));
                }
                let &[(c, t)] = rest else { return Err(at(line, col, "`dim` takes one integer")) };
                let d: usize = t.parse().map_err(|_| at(line, c, format!("bad dimension `{t}`")))?;
                if d == 0 {
                    return Err(at(line, c, "dimension must be positive"));
                }
                dim = Some(d);
                section = Section::None;
            }
            "matrix" => {
                no_args(rest)?;
                if !matrix.is_empty() {
                    return Err(at(line, col, "duplicate `matrix`"));
                }
                section = Section::Matrix;
            }
            "control" => {
                no_args(rest)?;
                comps.push(Component::default());
                section = Section::None;
            }
            "vertices" | "rays" | "lines" => {
                no_args(rest)?;
                if comps.is_empty() {
                    return Err(at(line, col, format!("`{head}` outside of a `control` block")));
                }
                section = match head {
                    "vertices" => Section::Vertices,
                    "rays" => Section::Rays,
                    _ => Section::Lines,
                };
            }
            "source" => {
                let d = dim.ok_or_else(|| at(line, col, "`dim` must come first"))?;
                if source.is_some() {
                    return Err(at(line, col, "duplicate `source`"));
                }
                source = Some(parse_row(line, rest, d)?);
                section = Section::None;
            }
            "target" => {
                match rest {
                    [(_, "vertices")] => {}
                    [(c, t), ..] => return Err(at(line, *c, format!("expected `vertices`, found `{t}`"))),
                    [] => return Err(at(line, col, "expected `target vertices`")),
                }
                if target.is_some() {
                    return Err(at(line, col, "duplicate `target`"));
                }
                target = Some(Vec::new());
                section = Section::Target;
            }
            other => return Err(at(line, col, format!("unknown keyword `{other}`"))),
        }
    }
    let d = dim.ok_or(ParseError::Missing("dim"))?;
    if matrix.is_empty() {
        return Err(ParseError::Missing("matrix"));
    }
    if matrix.len() != d {
        return Err(ParseError::Invalid(format!("matrix has {} rows, expected {d}", matrix.len())));
    }
    if comps.is_empty() {
        return Err(ParseError::Missing("control"));
    }
    let mut polys = Vec::with_capacity(comps.len());
    for (i, c) in comps.into_iter().enumerate() {
        let p = GenPolyhedron::try_new(d, c.vertices, c.rays, c.lines)
            .map_err(|e| ParseError::Invalid(format!("control {}: {e}", i + 1)))?;
        polys.push(p);
    }
    let controls = ControlSet::new(polys).map_err(|e| ParseError::Invalid(e.to_string()))?;
    let source = source.ok_or(ParseError::Missing("source"))?;
    let target = target.ok_or(ParseError::Missing("target"))?;
    let target = GenPolyhedron::try_new(d, target, vec![], vec![])
        .map_err(|e| ParseError::Invalid(format!("target: {e}")))?;
    LtiSystem::new(RatMatrix::from_rows(matrix), controls, source, target)
        .map_err(|e| ParseError::Invalid(e.to_string()))
}

fn write_rows(out: &mut String, rows: &[Vec<Rat>]) {
    for r in rows {
        let cells: Vec<String> = r.iter().map(fmt_rat).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
}

/// Canonical text; `parse_instance(&emit_instance(s)) == s`.
pub fn emit_instance(sys: &LtiSystem) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", sys.dim()).unwrap();
    out.push_str("matrix\n");
    write_rows(&mut out, &sys.a.row_vecs());
    for c in sys.controls.components() {
        out.push_str("control\nvertices\n");
        write_rows(&mut out, c.vertices());
        if !c.rays().is_empty() {
            out.push_str("rays\n");
            write_rows(&mut out, c.rays());
        }
        if !c.lines().is_empty() {
            out.push_str("lines\n");
            write_rows(&mut out, c.lines());
        }
    }
    let src: Vec<String> = sys.source.iter().map(fmt_rat).collect();
    writeln!(out, "source {}", src.join(" ")).unwrap();
    out.push_str("target vertices\n");
    write_rows(&mut out, sys.target.vertices());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    const FIG: &str = "# two-dimensional example\n\
        dim 2\n\
        matrix\n\
        1/3 0\n\
        0 2/3\n\
        control\n\
        vertices\n\
        -2 -1\n\
        0 -1   # bottom\n\
        0 1\n\
        2 1\n\
        source 0 0\n\
        target vertices\n\
        0 3\n";

    #[test]
    fn parses_and_round_trips() {
        let sys = parse_instance(FIG).unwrap();
        assert_eq!(sys.a, RatMatrix::diag(&[rat(1, 3), rat(2, 3)]));
        assert_eq!(sys.target.vertices(), &[vec![int(0), int(3)]]);
        let text = emit_instance(&sys);
        assert_eq!(parse_instance(&text).unwrap(), sys);
        assert_eq!(emit_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn unions_rays_and_lines() {
        let text = "dim 2\nmatrix\n1 0\n0 1\ncontrol\nvertices\n0 0\ncontrol\nvertices\n1 0\nlines\n0 2\nrays\n1 1\n\
                    source 0 0\ntarget vertices\n1 1\n";
        let sys = parse_instance(text).unwrap();
        assert_eq!(sys.controls.components().len(), 2);
        let c = &sys.controls.components()[1];
        assert_eq!(c.lines().len(), 1);
        assert_eq!(c.rays().len(), 1);
        assert_eq!(parse_instance(&emit_instance(&sys)).unwrap(), sys);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = FIG.replace("2/3\n", "2/0\n");
        match parse_instance(&bad) {
            Err(ParseError::At { line: 5, col: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        let short = FIG.replace("0 -1   # bottom", "0");
        assert!(matches!(parse_instance(&short), Err(ParseError::At { line: 9, .. })));
        let kw = FIG.replace("source", "sauce");
        assert!(matches!(parse_instance(&kw), Err(ParseError::At { line: 12, col: 1, .. })));
        let no_target: String = FIG.lines().take(12).map(|l| format!("{l}\n")).collect();
        assert_eq!(parse_instance(&no_target), Err(ParseError::Missing("target")));
        let wrong_dim = FIG.replace("source 0 0", "source 0 0 0");
        assert!(matches!(parse_instance(&wrong_dim), Err(ParseError::At { line: 12, col: 12, .. })));
    }
}
