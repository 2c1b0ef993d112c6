//! The alist text format for sparse binary matrices.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! col_degree_1 ... col_degree_n
//! row_degree_1 ... row_degree_m
//! <n lines: 1-based row indices of each column, optionally 0-padded>
//! <m lines: 1-based column indices of each row, optionally 0-padded>
//! ```
//!
//! Columns are variables, rows are checks. Both adjacency views are read and
//! must agree.

use std::fmt::Write as _;

use rrs_core::LdpcCode;

use crate::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as `(1-based line number, integers)`.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        for (idx, text) in self.inner.by_ref() {
            let text = text.trim();
            if text.is_empty() {
                continue;
            }
            let numbers = text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Alist {
                        line: idx + 1,
                        message: format!("expected a non-negative integer in {what}, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((idx + 1, numbers));
        }
        Err(Error::Alist {
            line: 0,
            message: format!("unexpected end of input while reading {what}"),
        })
    }
}

fn expect_len(line: usize, numbers: &[usize], len: usize, what: &str) -> Result<()> {
    if numbers.len() != len {
        return Err(Error::Alist {
            line,
            message: format!("{what}: expected {len} values, found {}", numbers.len()),
        });
    }
    Ok(())
}

/// Reads one adjacency list, dropping zero padding and converting to 0-based.
fn adjacency(
    line: usize,
    numbers: Vec<usize>,
    degree: usize,
    max_degree: usize,
    bound: usize,
    what: &str,
) -> Result<Vec<usize>> {
    if numbers.len() != degree && numbers.len() != max_degree {
        return Err(Error::Alist {
            line,
            message: format!("{what}: degree is {degree} but {} entries given", numbers.len()),
        });
    }
    let (entries, padding) = numbers.split_at(degree.min(numbers.len()));
    if padding.iter().any(|&p| p != 0) {
        return Err(Error::Alist {
            line,
            message: format!("{what}: more nonzero entries than its degree {degree}"),
        });
    }
    entries
        .iter()
        .map(|&k| {
            if k == 0 || k > bound {
                Err(Error::Alist {
                    line,
                    message: format!("{what}: index {k} outside 1..={bound}"),
                })
            } else {
                Ok(k - 1)
            }
        })
        .collect()
}

/// Parses an alist payload.
pub fn parse(text: &str) -> Result<LdpcCode> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (line, dims) = lines.next_numbers("the header")?;
    expect_len(line, &dims, 2, "header")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(Error::Alist {
            line,
            message: "empty matrix".into(),
        });
    }
    let (line, maxima) = lines.next_numbers("the maximum degrees")?;
    expect_len(line, &maxima, 2, "maximum degrees")?;
    let (max_col, max_row) = (maxima[0], maxima[1]);
    let (line, col_degrees) = lines.next_numbers("the column degrees")?;
    expect_len(line, &col_degrees, n, "column degrees")?;
    if let Some(&d) = col_degrees.iter().find(|&&d| d > max_col) {
        return Err(Error::Alist {
            line,
            message: format!("column degree {d} exceeds the declared maximum {max_col}"),
        });
    }
    let (line, row_degrees) = lines.next_numbers("the row degrees")?;
    expect_len(line, &row_degrees, m, "row degrees")?;
    if let Some(&d) = row_degrees.iter().find(|&&d| d > max_row) {
        return Err(Error::Alist {
            line,
            message: format!("row degree {d} exceeds the declared maximum {max_row}"),
        });
    }
    let col_total: usize = col_degrees.iter().sum();
    let row_total: usize = row_degrees.iter().sum();
    if col_total != row_total {
        return Err(Error::Alist {
            line,
            message: format!("column degrees sum to {col_total}, row degrees to {row_total}"),
        });
    }

    let mut from_columns: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, &degree) in col_degrees.iter().enumerate() {
        let what = format!("column {}", v + 1);
        let (line, numbers) = lines.next_numbers(&what)?;
        for c in adjacency(line, numbers, degree, max_col, m, &what)? {
            from_columns[c].push(v);
        }
    }
    let mut checks = Vec::with_capacity(m);
    for (c, &degree) in row_degrees.iter().enumerate() {
        let what = format!("row {}", c + 1);
        let (line, numbers) = lines.next_numbers(&what)?;
        let mut row = adjacency(line, numbers, degree, max_row, n, &what)?;
        row.sort_unstable();
        let mut seen = from_columns[c].clone();
        seen.sort_unstable();
        if row != seen {
            return Err(Error::Alist {
                line,
                message: format!("{what} disagrees with the column lists"),
            });
        }
        checks.push(row);
    }
    if let Some((idx, _)) = lines.inner.find(|(_, t)| !t.trim().is_empty()) {
        return Err(Error::Alist {
            line: idx + 1,
            message: "trailing data after the row lists".into(),
        });
    }
    Ok(LdpcCode::from_checks(n, &checks)?)
}

/// Serialises a code as alist with zero padding up to the maximum degrees.
pub fn write(code: &LdpcCode) -> String {
    let columns: Vec<Vec<usize>> = (0..code.n()).map(|v| code.variable(v).collect()).collect();
    let rows: Vec<Vec<usize>> = (0..code.m()).map(|c| code.check(c).collect()).collect();
    let max_col = columns.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", code.n(), code.m());
    let _ = writeln!(out, "{max_col} {max_row}");
    push_joined(&mut out, columns.iter().map(Vec::len));
    push_joined(&mut out, rows.iter().map(Vec::len));
    for list in &columns {
        push_padded(&mut out, list, max_col);
    }
    for list in &rows {
        push_padded(&mut out, list, max_row);
    }
    out
}

fn push_joined(out: &mut String, values: impl Iterator<Item = usize>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

fn push_padded(out: &mut String, list: &[usize], width: usize) {
    let padding = std::iter::repeat(0).take(width - list.len());
    push_joined(out, list.iter().map(|&k| k + 1).chain(padding));
}
