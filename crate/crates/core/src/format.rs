//! Text and JSON representations of rectangles.
//!
//! Text form: a header line `r s t`, then `r` lines of `s` tokens, each
//! a 1-based symbol or `.` for an empty cell. The serializer emits
//! single spaces and a trailing newline, so `serialize(parse(x))` is a
//! byte-exact normal form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rect::{LatinSquare, PartialLatinRectangle, ValidationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: unexpected token '{token}'")]
    Syntax { line: usize, token: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("missing header line 'r s t'")]
    MissingHeader,
    #[error("expected {expected} grid rows, found {found}")]
    MissingRows { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("{0}")]
    Instance(String),
    #[error("json: {0}")]
    Json(String),
}

fn parse_usize(line: usize, token: &str) -> Result<usize, ParseError> {
    token.parse::<usize>().map_err(|_| ParseError::Syntax {
        line,
        token: token.to_string(),
    })
}

/// Parses header dimensions plus a grid of `.`/1-based-symbol tokens.
/// Shared by the plain and frequency formats.
pub(crate) fn parse_grid_lines<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<Option<usize>>>, ParseError> {
    let mut grid = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (lineno, line) = lines
            .next()
            .ok_or(ParseError::MissingRows {
                expected: rows,
                found: grid.len(),
            })?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(ParseError::FieldCount {
                line: lineno,
                expected: cols,
                found: tokens.len(),
            });
        }
        let mut row = Vec::with_capacity(cols);
        for tok in tokens {
            if tok == "." {
                row.push(None);
            } else {
                let v = parse_usize(lineno, tok)?;
                if v == 0 {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        token: tok.to_string(),
                    });
                }
                row.push(Some(v - 1));
            }
        }
        grid.push(row);
    }
    Ok(grid)
}

/// Parses the text format into a rectangle.
pub fn parse_rect(text: &str) -> Result<PartialLatinRectangle, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (lineno, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(ParseError::FieldCount {
            line: lineno,
            expected: 3,
            found: fields.len(),
        });
    }
    let rows = parse_usize(lineno, fields[0])?;
    let cols = parse_usize(lineno, fields[1])?;
    let syms = parse_usize(lineno, fields[2])?;
    let grid = parse_grid_lines(&mut lines, rows, cols)?;
    Ok(PartialLatinRectangle::from_rows(syms, grid)?)
}

pub(crate) fn grid_line(row: &[Option<usize>]) -> String {
    row.iter()
        .map(|c| match c {
            Some(v) => (v + 1).to_string(),
            None => ".".to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical text form: header, grid rows, trailing newline.
pub fn serialize_rect(p: &PartialLatinRectangle) -> String {
    let mut out = format!("{} {} {}\n", p.rows(), p.cols(), p.symbols());
    for row in p.to_grid() {
        out.push_str(&grid_line(&row));
        out.push('\n');
    }
    out
}

pub fn serialize_square(sq: &LatinSquare) -> String {
    serialize_rect(&sq.as_rect())
}

/// JSON shape: `{"rows", "cols", "symbols", "grid"}` with 1-based
/// symbols and `null` for empty cells.
#[derive(Debug, Serialize, Deserialize)]
pub struct RectJson {
    pub rows: usize,
    pub cols: usize,
    pub symbols: usize,
    pub grid: Vec<Vec<Option<usize>>>,
}

impl From<&PartialLatinRectangle> for RectJson {
    fn from(p: &PartialLatinRectangle) -> Self {
        RectJson {
            rows: p.rows(),
            cols: p.cols(),
            symbols: p.symbols(),
            grid: p
                .to_grid()
                .into_iter()
                .map(|row| row.into_iter().map(|c| c.map(|v| v + 1)).collect())
                .collect(),
        }
    }
}

pub fn rect_to_json(p: &PartialLatinRectangle) -> String {
    serde_json::to_string(&RectJson::from(p)).expect("rectangle serializes")
}

pub fn rect_from_json(text: &str) -> Result<PartialLatinRectangle, ParseError> {
    let dto: RectJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if dto.grid.len() != dto.rows {
        return Err(ParseError::MissingRows {
            expected: dto.rows,
            found: dto.grid.len(),
        });
    }
    let mut grid = Vec::with_capacity(dto.rows);
    for (i, row) in dto.grid.into_iter().enumerate() {
        if row.len() != dto.cols {
            return Err(ParseError::FieldCount {
                line: i + 1,
                expected: dto.cols,
                found: row.len(),
            });
        }
        let mut cells = Vec::with_capacity(dto.cols);
        for c in row {
            match c {
                None => cells.push(None),
                Some(0) => {
                    return Err(ParseError::Syntax {
                        line: i + 1,
                        token: "0".to_string(),
                    })
                }
                Some(v) => cells.push(Some(v - 1)),
            }
        }
        grid.push(cells);
    }
    Ok(PartialLatinRectangle::from_rows(dto.symbols, grid)?)
}
