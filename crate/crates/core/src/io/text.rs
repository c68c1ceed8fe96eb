use std::fmt::Write as _;

use thiserror::Error;

use super::{ClassTag, GraphInput, Instance, Mode};
use crate::geometry::{Cover, Point, Segment, UnitSquare};
use crate::scalar::Scalar;

/// Error at a 1-based line and column of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

/// Content lines with their numbers; comments are handed to `comment`.
fn content_lines<'a>(text: &'a str, mut comment: impl FnMut(usize, &'a str)) -> Vec<(usize, Vec<(usize, &'a str)>)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_start();
        if let Some(rest) = trimmed.strip_prefix('#') {
            comment(i + 1, rest);
            continue;
        }
        let toks = tokens(raw);
        if !toks.is_empty() {
            out.push((i + 1, toks));
        }
    }
    out
}

fn expect_arity(line: usize, toks: &[(usize, &str)], n: usize) -> Result<(), ParseError> {
    if toks.len() < n + 1 {
        let col = toks.last().map_or(1, |(c, t)| c + t.chars().count());
        return err(line, col, format!("{} expects {n} fields, found {}", toks[0].1, toks.len() - 1));
    }
    if let Some((col, extra)) = toks.get(n + 1) {
        return err(line, *col, format!("unexpected field '{extra}'"));
    }
    Ok(())
}

fn number(line: usize, (col, tok): (usize, &str)) -> Result<Scalar, ParseError> {
    tok.parse::<Scalar>().or_else(|e| err(line, col, format!("bad number '{tok}': {e}")))
}

fn index(line: usize, (col, tok): (usize, &str)) -> Result<usize, ParseError> {
    tok.parse::<usize>().or_else(|_| err(line, col, format!("bad index '{tok}'")))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut class: Option<(usize, usize, ClassTag)> = None;
    let mut seed = None;
    let mut generator = None;
    let mut meta_err = None;
    let lines = content_lines(text, |line, rest| {
        let Some((key, value)) = rest.split_once(':') else { return };
        let value = value.trim();
        let column = 1;
        match key.trim() {
            "class" => match value.parse::<ClassTag>() {
                Ok(c) => class = Some((line, column, c)),
                Err(e) => meta_err = meta_err.take().or(Some(ParseError { line, column, message: e })),
            },
            "seed" => match value.parse::<u64>() {
                Ok(s) => seed = Some(s),
                Err(_) => {
                    let message = format!("bad seed '{value}'");
                    meta_err = meta_err.take().or(Some(ParseError { line, column, message }));
                }
            },
            "generator" => generator = Some(value.to_string()),
            _ => {}
        }
    });
    if let Some(e) = meta_err {
        return Err(e);
    }

    let mut it = lines.into_iter();
    match it.next() {
        Some((line, toks)) if toks[0].1 == "SEGCOVER" => {
            expect_arity(line, &toks, 1)?;
            if toks[1].1 != "1" {
                return err(line, toks[1].0, format!("unsupported format version '{}'", toks[1].1));
            }
        }
        Some((line, toks)) => return err(line, toks[0].0, "expected 'SEGCOVER 1' header"),
        None => return err(1, 1, "empty input: expected 'SEGCOVER 1' header"),
    }

    let mut mode = None;
    let mut segments = Vec::new();
    let mut squares = Vec::new();
    for (line, toks) in it {
        let (col, key) = toks[0];
        match key {
            "MODE" => {
                expect_arity(line, &toks, 1)?;
                if mode.is_some() {
                    return err(line, col, "MODE given twice");
                }
                mode = Some(match toks[1].1 {
                    "continuous" => Mode::Continuous,
                    "discrete" => Mode::Discrete,
                    other => return err(line, toks[1].0, format!("unknown mode '{other}'")),
                });
            }
            "SEGMENT" => {
                if mode.is_none() {
                    return err(line, col, "SEGMENT before MODE");
                }
                expect_arity(line, &toks, 4)?;
                let v: Vec<Scalar> = toks[1..].iter().map(|&t| number(line, t)).collect::<Result<_, _>>()?;
                let [x1, y1, x2, y2] = <[Scalar; 4]>::try_from(v).expect("arity checked");
                match Segment::new(Point { x: x1, y: y1 }, Point { x: x2, y: y2 }) {
                    Ok(s) => segments.push(s),
                    Err(_) => return err(line, toks[1].0, "degenerate segment: endpoints coincide"),
                }
            }
            "SQUARE" => {
                match mode {
                    None => return err(line, col, "SQUARE before MODE"),
                    Some(Mode::Continuous) => return err(line, col, "SQUARE lines need MODE discrete"),
                    Some(Mode::Discrete) => {}
                }
                expect_arity(line, &toks, 2)?;
                squares.push(UnitSquare { x: number(line, toks[1])?, y: number(line, toks[2])? });
            }
            other => return err(line, col, format!("unknown record '{other}'")),
        }
    }
    let Some(mode) = mode else {
        return err(text.lines().count().max(1), 1, "missing MODE line");
    };

    let class = match class {
        None => ClassTag::classify(mode, &segments),
        Some((line, column, c)) => {
            if (c == ClassTag::Discrete) != (mode == Mode::Discrete) {
                return err(line, column, format!("class {c} does not match MODE {}", mode.name()));
            }
            if let Err((k, why)) = c.check(&segments) {
                return err(line, column, format!("class {c}: segment {k} is {why}"));
            }
            c
        }
    };
    Ok(Instance { mode, class, segments, squares, seed, generator })
}

/// Canonical text: header, metadata comments, mode, segments as left then
/// right endpoint, squares.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::from("SEGCOVER 1\n");
    let _ = writeln!(out, "# class: {}", inst.class);
    if let Some(g) = &inst.generator {
        let _ = writeln!(out, "# generator: {g}");
    }
    if let Some(s) = inst.seed {
        let _ = writeln!(out, "# seed: {s}");
    }
    let _ = writeln!(out, "MODE {}", inst.mode.name());
    for s in &inst.segments {
        let (l, r) = (s.left(), s.right());
        let _ = writeln!(out, "SEGMENT {} {} {} {}", l.x, l.y, r.x, r.y);
    }
    for t in &inst.squares {
        let _ = writeln!(out, "SQUARE {} {}", t.x, t.y);
    }
    out
}

/// A cover as stored on disk; assignments may be incomplete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFile {
    pub algorithm: String,
    pub squares: Vec<UnitSquare>,
    /// `(segment, square)` pairs in file order.
    pub assignments: Vec<(usize, usize)>,
}

impl CoverFile {
    pub fn from_cover(algorithm: impl Into<String>, cover: &Cover) -> CoverFile {
        CoverFile {
            algorithm: algorithm.into(),
            squares: cover.squares.clone(),
            assignments: cover.witness.iter().copied().enumerate().collect(),
        }
    }

    /// Requires exactly one assignment for each of `segments` segments.
    pub fn to_cover(&self, segments: usize) -> Result<Cover, String> {
        let mut witness = vec![None; segments];
        for &(k, t) in &self.assignments {
            if k >= segments {
                return Err(format!("ASSIGN names segment {k} but the instance has {segments}"));
            }
            if witness[k].replace(t).is_some() {
                return Err(format!("segment {k} is assigned twice"));
            }
        }
        let witness = witness
            .into_iter()
            .enumerate()
            .map(|(k, w)| w.ok_or_else(|| format!("segment {k} has no ASSIGN line")))
            .collect::<Result<_, _>>()?;
        Ok(Cover { squares: self.squares.clone(), witness })
    }
}

pub fn parse_cover(text: &str) -> Result<CoverFile, ParseError> {
    let lines = content_lines(text, |_, _| {});
    let mut it = lines.into_iter();
    let (head_line, algorithm, count) = match it.next() {
        Some((line, toks)) if toks[0].1 == "COVER" => {
            expect_arity(line, &toks, 2)?;
            (line, toks[1].1.to_string(), (toks[2].0, index(line, toks[2])?))
        }
        Some((line, toks)) => return err(line, toks[0].0, "expected 'COVER <alg> <count>' header"),
        None => return err(1, 1, "empty input: expected 'COVER <alg> <count>' header"),
    };
    let mut squares = Vec::new();
    let mut assignments = Vec::new();
    let mut assign_at = Vec::new();
    for (line, toks) in it {
        match toks[0].1 {
            "SQUARE" => {
                expect_arity(line, &toks, 2)?;
                squares.push(UnitSquare { x: number(line, toks[1])?, y: number(line, toks[2])? });
            }
            "ASSIGN" => {
                expect_arity(line, &toks, 2)?;
                assignments.push((index(line, toks[1])?, index(line, toks[2])?));
                assign_at.push((line, toks[2].0));
            }
            other => return err(line, toks[0].0, format!("unknown record '{other}'")),
        }
    }
    if squares.len() != count.1 {
        return err(head_line, count.0, format!("header announces {} squares, found {}", count.1, squares.len()));
    }
    for (&(_, t), &(line, col)) in assignments.iter().zip(&assign_at) {
        if t >= squares.len() {
            return err(line, col, format!("square index {t} out of range"));
        }
    }
    Ok(CoverFile { algorithm, squares, assignments })
}

pub fn serialize_cover(cover: &CoverFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "COVER {} {}", cover.algorithm, cover.squares.len());
    for t in &cover.squares {
        let _ = writeln!(out, "SQUARE {} {}", t.x, t.y);
    }
    for (k, t) in &cover.assignments {
        let _ = writeln!(out, "ASSIGN {k} {t}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<GraphInput, ParseError> {
    let lines = content_lines(text, |_, _| {});
    let mut it = lines.into_iter();
    let (head_line, n, m) = match it.next() {
        Some((line, toks)) if toks[0].1 == "VC" => {
            expect_arity(line, &toks, 2)?;
            (line, index(line, toks[1])?, index(line, toks[2])?)
        }
        Some((line, toks)) => return err(line, toks[0].0, "expected 'VC <n> <m>' header"),
        None => return err(1, 1, "empty input: expected 'VC <n> <m>' header"),
    };
    let mut edges = Vec::new();
    for (line, toks) in it {
        if toks[0].1 != "E" {
            return err(line, toks[0].0, format!("unknown record '{}'", toks[0].1));
        }
        expect_arity(line, &toks, 2)?;
        let (u, v) = (index(line, toks[1])?, index(line, toks[2])?);
        if u >= n || v >= n {
            let col = if u >= n { toks[1].0 } else { toks[2].0 };
            return err(line, col, format!("vertex out of range 0..{n}"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return err(head_line, 1, format!("header announces {m} edges, found {}", edges.len()));
    }
    GraphInput::new(n, edges).or_else(|e| err(head_line, 1, e))
}

pub fn serialize_graph(g: &GraphInput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "VC {} {}", g.n, g.edges.len());
    for (u, v) in &g.edges {
        let _ = writeln!(out, "E {u} {v}");
    }
    out
}
