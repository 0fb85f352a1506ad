//! Text matrix format.
//!
//! ```text
//! # comment
//! dims 4 2 2
//! 1/4 0 0 sqrt(7)/8
//! ...
//! ```
//!
//! Each entry is a real literal with an optional imaginary suffix `+<lit>i` (`-<lit>i` and
//! `+-<lit>i` are accepted too). Real literals are signed decimals (`0.25`, `-1e-3`),
//! rationals `p/q`, or radicals `sqrt(k)`, `p*sqrt(k)`, each optionally divided by `/q`.
//! Every literal is read exactly.

use std::fmt::Write as _;

use lapent_core::exact::parse_decimal;
use lapent_core::fmt::format_decimal;
use lapent_core::{BipartiteDims, Exact, ExactMatrix, Matrix, Surd};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub dims: BipartiteDims,
    pub matrix: ExactMatrix,
}

/// Location is 1-based; column counts characters.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

pub fn parse(text: &str) -> Result<MatrixFile, ParseError> {
    let mut header: Option<(usize, BipartiteDims)> = None;
    let mut rows: Vec<Vec<Exact>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens = tokenize(raw);
        let Some((n, _)) = header else {
            header = Some(parse_header(line, &tokens)?);
            continue;
        };
        if rows.len() == n {
            return Err(ParseError::new(line, tokens[0].0, format!("more than {n} matrix rows")));
        }
        if tokens.len() != n {
            let column = tokens.get(n).map_or(raw.chars().count() + 1, |t| t.0);
            return Err(ParseError::new(line, column, format!("expected {n} entries, found {}", tokens.len())));
        }
        let row = tokens
            .iter()
            .map(|&(column, tok)| {
                parse_entry(tok).ok_or_else(|| ParseError::new(line, column, format!("invalid literal `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let Some((n, dims)) = header else {
        return Err(ParseError::new(last_line.max(1), 1, "missing `dims <n> <d1> <d2>` header"));
    };
    if rows.len() != n {
        return Err(ParseError::new(last_line + 1, 1, format!("expected {n} matrix rows, found {}", rows.len())));
    }
    let matrix = ExactMatrix::from_rows(rows).expect("square by construction");
    Ok(MatrixFile { dims, matrix })
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((c, b))) => {
                out.push((c + 1, &line[b..byte]));
                start = None;
            }
            (false, None) => start = Some((col, byte)),
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &line[b..]));
    }
    out
}

fn parse_header(line: usize, tokens: &[(usize, &str)]) -> Result<(usize, BipartiteDims), ParseError> {
    if tokens[0].1 != "dims" {
        return Err(ParseError::new(line, tokens[0].0, "expected `dims <n> <d1> <d2>` header"));
    }
    if tokens.len() != 4 {
        let column = tokens.get(4).map_or(tokens[tokens.len() - 1].0, |t| t.0);
        return Err(ParseError::new(line, column, "header takes exactly three integers: n d1 d2"));
    }
    let mut values = [0usize; 3];
    for (slot, &(column, tok)) in values.iter_mut().zip(&tokens[1..]) {
        *slot = tok
            .parse()
            .map_err(|_| ParseError::new(line, column, format!("expected a non-negative integer, found `{tok}`")))?;
    }
    let [n, d1, d2] = values;
    let dims = BipartiteDims::new(d1, d2)
        .map_err(|e| ParseError::new(line, tokens[2].0, e.to_string()))?;
    if dims.order() != n {
        return Err(ParseError::new(line, tokens[1].0, format!("n = {n} but d1*d2 = {}", dims.order())));
    }
    Ok((n, dims))
}

/// One matrix entry, real or complex.
pub fn parse_entry(tok: &str) -> Option<Exact> {
    let Some(body) = tok.strip_suffix('i') else {
        return parse_real(tok).map(Exact::real);
    };
    let split = split_imaginary(body)?;
    let (re, im) = body.split_at(split);
    let im = im.strip_prefix('+').unwrap_or(im);
    Some(Exact::new(parse_real(re)?, parse_real(im)?))
}

/// Index of the sign that starts the imaginary part; signs inside exponents are skipped.
fn split_imaginary(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    (1..bytes.len()).find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'+'))
}

/// A real literal.
pub fn parse_real(tok: &str) -> Option<Surd> {
    if let Some(at) = tok.find("sqrt(") {
        let coeff = match &tok[..at] {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            prefix => BigRational::from_integer(prefix.strip_suffix('*')?.parse::<BigInt>().ok()?),
        };
        let rest = &tok[at + 5..];
        let close = rest.find(')')?;
        let radicand: u64 = rest[..close].parse().ok()?;
        if radicand == 0 || !rest[..close].bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let denom = match &rest[close + 1..] {
            "" => BigInt::one(),
            tail => denominator(tail.strip_prefix('/')?)?,
        };
        return Some(Surd::new(coeff / BigRational::from_integer(denom), radicand));
    }
    if let Some((p, q)) = tok.split_once('/') {
        let numer: BigInt = p.parse().ok()?;
        return Some(Surd::rational(BigRational::new(numer, denominator(q)?)));
    }
    parse_decimal(tok).map(Surd::rational)
}

fn denominator(q: &str) -> Option<BigInt> {
    if !q.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let q: BigInt = q.parse().ok()?;
    (!q.is_zero()).then_some(q)
}

fn header(dims: BipartiteDims) -> String {
    format!("dims {} {} {}\n", dims.order(), dims.d1(), dims.d2())
}

/// Exact rendering; [`parse`] returns the same matrix.
pub fn emit_exact(m: &ExactMatrix, dims: BipartiteDims) -> String {
    let mut out = header(dims);
    write!(out, "{m}").expect("writing to a String");
    out
}

/// Decimal rendering at twelve significant digits.
pub fn emit_decimal(m: &Matrix, dims: BipartiteDims) -> String {
    let mut out = header(dims);
    for i in 0..m.order() {
        let row: Vec<String> = (0..m.order())
            .map(|j| {
                let z = m.get(i, j);
                if z.im == 0.0 {
                    format_decimal(z.re)
                } else {
                    format!("{}+{}i", format_decimal(z.re), format_decimal(z.im))
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lapent_core::exact::ratio;

    fn real(tok: &str) -> f64 {
        parse_real(tok).unwrap().to_f64()
    }

    #[test]
    fn literal_forms() {
        assert_eq!(parse_real("1/81").unwrap(), Surd::rational(ratio(1, 81)));
        assert_eq!(parse_real("-2/4").unwrap(), Surd::rational(ratio(-1, 2)));
        assert_eq!(parse_real("0.25").unwrap(), Surd::rational(ratio(1, 4)));
        assert_eq!(parse_real("-1e-3").unwrap(), Surd::rational(ratio(-1, 1000)));
        assert_eq!(parse_real("sqrt(7)/8").unwrap(), Surd::new(ratio(1, 8), 7));
        assert_eq!(parse_real("-3*sqrt(7)/8").unwrap(), Surd::new(ratio(-3, 8), 7));
        assert_eq!(parse_real("sqrt(12)").unwrap(), Surd::new(ratio(2, 1), 3));
        assert!((real("sqrt(2)") - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn malformed_literals() {
        for bad in ["", "1/0", "1/-2", "sqrt(0)", "sqrt(-7)", "sqrt(7", "2sqrt(7)", "a", "1/2/3", "nan", "inf", "1.5/2"] {
            assert!(parse_real(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn complex_entries() {
        let z = parse_entry("1/2+-1/3i").unwrap();
        assert_eq!(z.im(), &Surd::rational(ratio(-1, 3)));
        let w = parse_entry("1e-3-2e-4i").unwrap();
        assert_eq!(w.re(), &Surd::rational(ratio(1, 1000)));
        assert_eq!(w.im(), &Surd::rational(ratio(-1, 5000)));
        assert_eq!(parse_entry("0+sqrt(7)/8i").unwrap().im(), &Surd::new(ratio(1, 8), 7));
        assert!(parse_entry("1+i").is_none());
        assert!(parse_entry("2i").is_none());
    }

    #[test]
    fn exact_round_trip() {
        let m = ExactMatrix::from_fn(4, |i, j| match (i, j) {
            (0, 3) => Exact::new(Surd::new(ratio(1, 8), 7), Surd::rational(ratio(-1, 5))),
            (3, 0) => Exact::new(Surd::new(ratio(1, 8), 7), Surd::rational(ratio(1, 5))),
            (i, j) if i == j => Exact::from_ratio(1, 4),
            _ => Exact::zero(),
        });
        let dims = BipartiteDims::new(2, 2).unwrap();
        let parsed = parse(&emit_exact(&m, dims)).unwrap();
        assert_eq!(parsed, MatrixFile { dims, matrix: m });
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# identity\n\ndims 4 2 2\n1 0 0 0\n  # inside\n0 1 0 0\n0 0 1 0\n0 0 0 1\n";
        let f = parse(text).unwrap();
        assert_eq!(f.matrix.to_matrix(), Matrix::identity(4));
    }

    #[test]
    fn errors_carry_location() {
        let e = parse("dims 4 2 2\n1 0 0 0\n0 1 x 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 5));
        let e = parse("dims 4 2 2\n1 0 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("dims 5 2 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse("1 0\n0 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse("dims 4 2 2\n1 0 0 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse("").is_err());
    }

    #[test]
    fn decimal_emission() {
        let q: &[f64] = &[0.25, 0.0, 0.0, 0.0];
        let m = Matrix::from_real_rows(&[q, &[0.0, 0.25, 0.0, 0.0], &[0.0, 0.0, 0.25, 0.0], &[0.0, 0.0, 0.0, 0.25]])
            .unwrap();
        let text = emit_decimal(&m, BipartiteDims::new(2, 2).unwrap());
        assert!(text.starts_with("dims 4 2 2\n0.25 0 0 0\n"));
        assert_eq!(parse(&text).unwrap().matrix.to_matrix(), m);
    }
}
