//! The `.form` text format:
//!
//! ```text
//! FORM n=16 k=8 normalization=l0
//! 1 2 3 4 5 6 7 8 1/1
//! ...
//! ```
//!
//! One line per non-zero coefficient, 1-based indices, coefficients always written as
//! `num/den` in lowest terms, lines sorted lexicographically by multi-index. Import is
//! strict so that export(import(text)) == text byte for byte.

use std::path::Path;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExteriorForm, MultiIndex, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub fn write_form(form: &ExteriorForm<Rational>, normalization: &str) -> String {
    let mut out = format!("FORM n={} k={} normalization={}\n", form.dim(), form.degree(), normalization);
    for (m, v) in form.terms() {
        out.push_str(&m.to_string());
        if form.degree() > 0 {
            out.push(' ');
        }
        out.push_str(&v.to_text());
        out.push('\n');
    }
    out
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn header_field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .filter(|v| !v.is_empty())
        .ok_or_else(|| bad(1, format!("expected `{key}=<value>` in header")))
}

/// Parse a `.form` document; returns the form and its normalization tag.
pub fn parse_form(text: &str) -> Result<(ExteriorForm<Rational>, String)> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    let mut toks = header.split(' ');
    if toks.next() != Some("FORM") {
        return Err(bad(1, "header must start with `FORM`"));
    }
    let n: usize = header_field(toks.next(), "n")?.parse().map_err(|_| bad(1, "n is not an integer"))?;
    let k: usize = header_field(toks.next(), "k")?.parse().map_err(|_| bad(1, "k is not an integer"))?;
    let tag = header_field(toks.next(), "normalization")?.to_string();
    if toks.next().is_some() {
        return Err(bad(1, "trailing tokens in header"));
    }
    if n > MAX_DIM || k > n {
        return Err(bad(1, format!("unsupported shape n={n} k={k}")));
    }
    if !text.ends_with('\n') {
        return Err(bad(text.lines().count(), "missing final newline"));
    }

    let mut form = ExteriorForm::zero(n, k)?;
    let mut prev: Option<MultiIndex> = None;
    let body: Vec<(usize, &str)> = lines.collect();
    // the final element is the empty string after the last newline
    for &(ln, line) in &body[..body.len().saturating_sub(1)] {
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.len() != k + 1 {
            return Err(bad(ln, format!("expected {k} indices and a coefficient, got {} fields", toks.len())));
        }
        let mut idx = Vec::with_capacity(k);
        for t in &toks[..k] {
            let i: usize = t.parse().map_err(|_| bad(ln, format!("bad index `{t}`")))?;
            if i == 0 || i > n || t.starts_with('0') || t.starts_with('+') {
                return Err(bad(ln, format!("index `{t}` out of range 1..{n}")));
            }
            idx.push(i - 1);
        }
        let m = MultiIndex::new(&idx).map_err(|_| bad(ln, "indices are not strictly increasing"))?;
        if prev.is_some_and(|p| p >= m) {
            return Err(bad(ln, "multi-index out of lexicographic order"));
        }
        prev = Some(m);
        let v = parse_canonical_rational(toks[k]).ok_or_else(|| bad(ln, format!("coefficient `{}` is not a reduced num/den", toks[k])))?;
        if v.is_zero() {
            return Err(bad(ln, "zero coefficients are not stored"));
        }
        form.add_term(m, v);
    }
    Ok((form, tag))
}

fn parse_canonical_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let v = Rational::parse_text(s)?;
    // reject anything the writer would not produce: signs on the denominator, leading
    // zeros, `+`, non-reduced fractions
    let num: num_bigint::BigInt = n.parse().ok()?;
    let den: num_bigint::BigInt = d.parse().ok()?;
    let canonical = den.is_positive() && num.gcd(&den).is_one() && num.to_string() == n && den.to_string() == d;
    canonical.then_some(v)
}

/// Parse and check the normalization tag when one is expected.
pub fn read_form_file(path: &Path, expected_tag: Option<&str>) -> Result<(ExteriorForm<Rational>, String)> {
    let text = std::fs::read_to_string(path)?;
    let (form, tag) = parse_form(&text)?;
    if let Some(want) = expected_tag {
        if want != tag {
            return Err(Error::NormalizationMismatch { expected: want.to_string(), found: tag });
        }
    }
    Ok((form, tag))
}

pub fn write_form_file(path: &Path, form: &ExteriorForm<Rational>, normalization: &str) -> Result<()> {
    std::fs::write(path, write_form(form, normalization))?;
    Ok(())
}
