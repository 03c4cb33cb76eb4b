//! ASCII matrix and scheme files.
//!
//! ```text
//! SIGNMAT 2 2        BINMAT 2 3        SCHEME 1 3
//! ++                 010               0 1 1
//! +-                 111               1 0 1
//!                                      1 1 0
//! ```

use std::fs;
use std::path::Path;

use mubh_core::matrix::{BinMatrix, SignMatrix};
use mubh_core::scheme::{RelationPartition, SchemeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("expected a {expected} file, found {found}")]
    Kind { expected: &'static str, found: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Header tag and numeric fields; `lines` is left positioned on the body.
fn header<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<(String, usize, usize)> {
    let head = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let parts: Vec<&str> = head.split(' ').collect();
    if parts.len() != 3 {
        return Err(syntax(1, format!("malformed header {head:?}")));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| syntax(1, format!("bad number {s:?} in header")));
    Ok((parts[0].to_string(), num(parts[1])?, num(parts[2])?))
}

/// Splits on `'\n'`, requiring a trailing newline and nothing after it.
fn body_lines(text: &str) -> Result<Vec<&str>> {
    if !text.is_ascii() {
        return Err(syntax(0, "file is not ASCII"));
    }
    let Some(stripped) = text.strip_suffix('\n') else {
        return Err(syntax(text.lines().count().max(1), "missing final newline"));
    };
    Ok(stripped.split('\n').collect())
}

fn rows_of<'a>(body: &[&'a str], rows: usize, cols: usize) -> Result<Vec<&'a [u8]>> {
    if body.len() != rows {
        return Err(syntax(body.len() + 1, format!("expected {rows} rows, found {}", body.len())));
    }
    body.iter()
        .enumerate()
        .map(|(i, l)| {
            if l.len() != cols {
                Err(syntax(i + 2, format!("expected {cols} characters, found {}", l.len())))
            } else {
                Ok(l.as_bytes())
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFile {
    Sign(SignMatrix),
    Bin(BinMatrix),
}

pub fn sign_to_text(m: &SignMatrix) -> String {
    let mut out = format!("SIGNMAT {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        out.extend((0..m.cols()).map(|j| match m.get(i, j) {
            1 => '+',
            -1 => '-',
            _ => '0',
        }));
        out.push('\n');
    }
    out
}

pub fn bin_to_text(m: &BinMatrix) -> String {
    let mut out = format!("BINMAT {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        out.extend((0..m.cols()).map(|j| if m.get(i, j) { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let lines = body_lines(text)?;
    let mut it = lines.iter().copied();
    let (tag, rows, cols) = header(&mut it)?;
    let body: Vec<&str> = it.collect();
    let rows = rows_of(&body, rows, cols)?;
    let cell = |i: usize, j: usize, allowed: &[(u8, i64)]| -> Result<i64> {
        let c = rows[i][j];
        allowed
            .iter()
            .find(|&&(ch, _)| ch == c)
            .map(|&(_, v)| v)
            .ok_or_else(|| syntax(i + 2, format!("unexpected character {:?} in column {}", c as char, j + 1)))
    };
    let entries = |allowed: &[(u8, i64)]| -> Result<Vec<i64>> {
        let mut v = Vec::with_capacity(rows.len() * cols);
        for i in 0..rows.len() {
            for j in 0..cols {
                v.push(cell(i, j, allowed)?);
            }
        }
        Ok(v)
    };
    let shape_err = |e: mubh_core::matrix::MatrixError| syntax(1, e.to_string());
    match tag.as_str() {
        "SIGNMAT" => {
            let v = entries(&[(b'+', 1), (b'-', -1), (b'0', 0)])?;
            Ok(MatrixFile::Sign(SignMatrix::new(rows.len(), cols, &v).map_err(shape_err)?))
        }
        "BINMAT" => {
            let v = entries(&[(b'0', 0), (b'1', 1)])?;
            Ok(MatrixFile::Bin(BinMatrix::new(rows.len(), cols, &v).map_err(shape_err)?))
        }
        other => Err(syntax(1, format!("unknown matrix tag {other:?}"))),
    }
}

pub fn parse_sign(text: &str) -> Result<SignMatrix> {
    match parse_matrix(text)? {
        MatrixFile::Sign(m) => Ok(m),
        MatrixFile::Bin(_) => Err(FormatError::Kind { expected: "SIGNMAT", found: "BINMAT".into() }),
    }
}

pub fn scheme_to_text(rels: &RelationPartition) -> String {
    let n = rels.size();
    let mut out = format!("SCHEME {} {}\n", rels.classes(), n);
    for x in 0..n {
        let row: Vec<String> = rels.row(x).iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the text layer only. [`parse_scheme`] adds the class-range check;
/// the scheme axioms are left to `verify_scheme`.
pub fn parse_scheme_relmap(text: &str) -> Result<(usize, usize, Vec<u8>)> {
    let lines = body_lines(text)?;
    let mut it = lines.iter().copied();
    let (tag, classes, size) = header(&mut it)?;
    if tag != "SCHEME" {
        return Err(FormatError::Kind { expected: "SCHEME", found: tag });
    }
    if classes > u8::MAX as usize {
        return Err(syntax(1, format!("{classes} classes exceed the supported maximum {}", u8::MAX)));
    }
    let body: Vec<&str> = it.collect();
    if body.len() != size {
        return Err(syntax(body.len() + 1, format!("expected {size} rows, found {}", body.len())));
    }
    let mut relmap = Vec::with_capacity(size * size);
    for (i, line) in body.iter().enumerate() {
        let before = relmap.len();
        for tok in line.split(' ') {
            let c: u8 = tok.parse().map_err(|_| syntax(i + 2, format!("bad class index {tok:?}")))?;
            relmap.push(c);
        }
        if relmap.len() - before != size {
            return Err(syntax(i + 2, format!("expected {size} entries, found {}", relmap.len() - before)));
        }
    }
    Ok((classes, size, relmap))
}

pub fn parse_scheme(text: &str) -> Result<RelationPartition> {
    let (classes, size, relmap) = parse_scheme_relmap(text)?;
    Ok(RelationPartition::new(size, classes, relmap)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_round_trip() {
        let text = "SIGNMAT 2 3\n+-0\n--+\n";
        let m = parse_sign(text).unwrap();
        assert_eq!(m.get(0, 1), -1);
        assert_eq!(m.get(0, 2), 0);
        assert_eq!(sign_to_text(&m), text);
    }

    #[test]
    fn bin_round_trip() {
        let text = "BINMAT 2 2\n01\n11\n";
        match parse_matrix(text).unwrap() {
            MatrixFile::Bin(b) => assert_eq!(bin_to_text(&b), text),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scheme_round_trip() {
        let text = "SCHEME 1 3\n0 1 1\n1 0 1\n1 1 0\n";
        assert_eq!(scheme_to_text(&parse_scheme(text).unwrap()), text);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix("SIGNMAT 1 2\n+x\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(parse_matrix("SIGNMAT 1 2\n++").is_err());
        assert!(parse_matrix("SIGNMAT 2 2\n++\n").is_err());
        assert!(parse_matrix("BINMAT 1 1\n+\n").is_err());
        assert!(parse_sign("BINMAT 1 1\n1\n").is_err());
        assert!(parse_scheme("SCHEME 1 2\n0 1\n1\n").is_err());
        assert!(matches!(
            parse_scheme("SCHEME 1 2\n0 2\n2 0\n"),
            Err(FormatError::Scheme(SchemeError::ClassOutOfRange { class: 2, .. }))
        ));
        assert!(parse_scheme("SCHEME 1 2\n0  1\n1 0\n").is_err());
    }
}
