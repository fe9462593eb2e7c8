//! Text format for codes.
//!
//! ```text
//! rankcode v1
//! q <p> <e> [c_0 ... c_e]
//! n <n> m <m>
//! matrix
//! <n rows of m entries>
//! matrix
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Entries are integer
//! element encodings or, for extension fields, dot-separated coefficients
//! `c0.c1...` (low degree first). Without an explicit modulus the standard
//! one for `GF(p^e)` is used.

use std::fmt::Write as _;

use super::RankMetricCode;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::matrix::Matrix;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_code(text: &str) -> Result<RankMetricCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if header != "rankcode v1" {
        return Err(perr(ln, format!("expected `rankcode v1`, found `{header}`")));
    }

    let (ln, qline) = lines.next().ok_or_else(|| perr(ln, "missing `q` line"))?;
    let field = parse_field(ln, qline)?;

    let (ln, nline) = lines.next().ok_or_else(|| perr(ln, "missing `n <n> m <m>` line"))?;
    let tok: Vec<&str> = nline.split_whitespace().collect();
    let (n, m) = match tok.as_slice() {
        ["n", n, "m", m] => (
            n.parse::<usize>().map_err(|_| perr(ln, format!("bad n `{n}`")))?,
            m.parse::<usize>().map_err(|_| perr(ln, format!("bad m `{m}`")))?,
        ),
        _ => return Err(perr(ln, "expected `n <n> m <m>`")),
    };
    if n < 1 || n > m {
        return Err(perr(ln, format!("need 1 <= n <= m, got n = {n}, m = {m}")));
    }

    let mut generators = Vec::new();
    let mut last = ln;
    while let Some((ln, l)) = lines.next() {
        if l != "matrix" {
            return Err(perr(ln, format!("expected `matrix`, found `{l}`")));
        }
        let mut data = Vec::with_capacity(n * m);
        for r in 0..n {
            let (rl, row) = lines
                .next()
                .ok_or_else(|| perr(ln, format!("matrix ends after {r} of {n} rows")))?;
            let entries: Vec<&str> = row.split_whitespace().collect();
            if entries.len() != m {
                return Err(perr(rl, format!("expected {m} entries, found {}", entries.len())));
            }
            for e in entries {
                data.push(parse_entry(&field, rl, e)?);
            }
            last = rl;
        }
        generators.push(Matrix::from_elems(&field, n, m, data).map_err(|e| perr(last, e.to_string()))?);
    }
    RankMetricCode::from_generators(&field, n, m, &generators).map_err(|e| perr(last, e.to_string()))
}

fn parse_field(ln: usize, line: &str) -> Result<Field> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    if tok.len() < 3 || tok[0] != "q" {
        return Err(perr(ln, "expected `q <p> <e> [modulus]`"));
    }
    let p: u64 = tok[1].parse().map_err(|_| perr(ln, format!("bad p `{}`", tok[1])))?;
    let e: u32 = tok[2].parse().map_err(|_| perr(ln, format!("bad e `{}`", tok[2])))?;
    let spec = if tok.len() == 3 {
        FieldSpec::standard(p, e)
    } else {
        let modulus = tok[3..]
            .iter()
            .map(|c| c.parse::<u32>().map_err(|_| perr(ln, format!("bad modulus coefficient `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        FieldSpec::new(p, e, modulus)
    }
    .map_err(|err| perr(ln, err.to_string()))?;
    if spec.order() > 1 << 16 {
        return Err(perr(ln, format!("fields larger than 2^16 are not supported in code files, got {}", spec.order())));
    }
    Ok(Field::from_spec(spec))
}

fn parse_entry(field: &Field, ln: usize, s: &str) -> Result<Elem> {
    let bad = || perr(ln, format!("`{s}` is not an element of {field}"));
    if s.contains('.') {
        let coeffs = s
            .split('.')
            .map(|c| c.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        field.from_coeffs(&coeffs).map_err(|_| bad())
    } else {
        let x: u32 = s.parse().map_err(|_| bad())?;
        field.try_elem(x).ok_or_else(bad)
    }
}

/// The code in file form, one `matrix` block per canonical basis element.
/// `comments` are emitted as `#` lines after the header.
pub fn write_code(code: &RankMetricCode, comments: &[String]) -> String {
    let field = code.field();
    let spec = field.spec();
    let mut out = String::from("rankcode v1\n");
    for c in comments {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = write!(out, "q {} {}", spec.p(), spec.e());
    for c in spec.modulus() {
        let _ = write!(out, " {c}");
    }
    let _ = writeln!(out, "\nn {} m {}", code.n(), code.m());
    for b in code.basis() {
        out.push_str("matrix\n");
        out.push_str(&b.to_string());
    }
    out
}
