//! The on-disk multisequence format.
//!
//! ```text
//! q=<int> m=<int> n=<int> [mod=<comma-separated base-p digits, low first>]
//! <row 1>
//! ...
//! <row m>
//! ```
//!
//! Rows are single digits when q <= 10, comma-separated integers
//! otherwise. Symbols use the field module's integer encoding
//! (0..q-1, base-p digits = polynomial coefficients, low digit =
//! constant term).

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqFile {
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub modulus: Option<Vec<u8>>,
    pub rows: Vec<Vec<u8>>,
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<SeqFile> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, 1, "empty file"))?;

    let mut q = None;
    let mut m = None;
    let mut n = None;
    let mut modulus = None;
    let mut col = 1usize;
    for tok in header.split_whitespace() {
        // byte column of this token within the header line
        col = header[..].find(tok).map_or(col, |p| p + 1);
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(1, col, format!("expected key=value, got '{tok}'")))?;
        match key {
            "q" | "m" | "n" => {
                let v: usize = val
                    .parse()
                    .map_err(|_| parse_err(1, col, format!("bad integer '{val}'")))?;
                match key {
                    "q" => q = Some(v),
                    "m" => m = Some(v),
                    _ => n = Some(v),
                }
            }
            "mod" => {
                let digits: std::result::Result<Vec<u8>, _> =
                    val.split(',').map(str::parse::<u8>).collect();
                modulus = Some(
                    digits.map_err(|_| parse_err(1, col, format!("bad modulus '{val}'")))?,
                );
            }
            _ => return Err(parse_err(1, col, format!("unknown header key '{key}'"))),
        }
    }
    let q = q.ok_or_else(|| parse_err(1, 1, "missing q="))?;
    let m = m.ok_or_else(|| parse_err(1, 1, "missing m="))?;
    let n = n.ok_or_else(|| parse_err(1, 1, "missing n="))?;

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let lineno = i + 2;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(lineno, 1, format!("expected {m} rows, found {i}")))?;
        let line = line.trim_end();
        let mut row = Vec::with_capacity(n);
        if q <= 10 {
            for (pos, ch) in line.chars().enumerate() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| parse_err(lineno, pos + 1, format!("bad symbol '{ch}'")))?;
                if d as usize >= q {
                    return Err(Error::SymbolOutOfRange {
                        row: i + 1,
                        pos: pos + 1,
                        value: d as u64,
                        q,
                    });
                }
                row.push(d as u8);
            }
        } else {
            for (pos, tok) in line.split(',').enumerate() {
                let tok = tok.trim();
                let v: u64 = tok
                    .parse()
                    .map_err(|_| parse_err(lineno, pos + 1, format!("bad symbol '{tok}'")))?;
                if v as usize >= q {
                    return Err(Error::SymbolOutOfRange {
                        row: i + 1,
                        pos: pos + 1,
                        value: v,
                        q,
                    });
                }
                row.push(v as u8);
            }
        }
        if row.len() != n {
            return Err(parse_err(
                lineno,
                1,
                format!("row has {} symbols, expected n={n}", row.len()),
            ));
        }
        rows.push(row);
    }
    Ok(SeqFile {
        q,
        m,
        n,
        modulus,
        rows,
    })
}

pub fn render(s: &SeqFile) -> String {
    let mut out = format!("q={} m={} n={}", s.q, s.m, s.n);
    if let Some(mo) = &s.modulus {
        let digits: Vec<String> = mo.iter().map(u8::to_string).collect();
        out.push_str(&format!(" mod={}", digits.join(",")));
    }
    out.push('\n');
    for row in &s.rows {
        if s.q <= 10 {
            for &v in row {
                out.push(char::from_digit(v as u32, 10).unwrap());
            }
        } else {
            let syms: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&syms.join(","));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_q() {
        let s = parse("q=2 m=1 n=3\n110\n").unwrap();
        assert_eq!((s.q, s.m, s.n), (2, 1, 3));
        assert_eq!(s.rows, vec![vec![1, 1, 0]]);
    }

    #[test]
    fn parses_large_q_and_modulus() {
        let s = parse("q=16 m=2 n=3 mod=1,1,0,0,1\n0,5,15\n1,2,3\n").unwrap();
        assert_eq!(s.modulus, Some(vec![1, 1, 0, 0, 1]));
        assert_eq!(s.rows[0], vec![0, 5, 15]);
    }

    #[test]
    fn symbol_out_of_range_names_row_and_position() {
        let err = parse("q=2 m=1 n=3\n120\n").unwrap_err();
        assert!(matches!(
            err,
            Error::SymbolOutOfRange { row: 1, pos: 2, value: 2, q: 2 }
        ));
    }

    #[test]
    fn parse_errors_carry_line_and_col() {
        let err = parse("q=2 m=1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse("q=2 m=2 n=2\n01\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse("q=2 m=1 n=3\n1a0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 2, .. }));
    }

    #[test]
    fn round_trip() {
        for text in ["q=2 m=2 n=4\n0110\n1001\n", "q=25 m=1 n=2 mod=2,0,1\n24,0\n"] {
            let s = parse(text).unwrap();
            assert_eq!(render(&s), text);
            assert_eq!(parse(&render(&s)).unwrap(), s);
        }
    }
}
