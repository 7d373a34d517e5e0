//! Arrangement file format: one plane per line, four whitespace-separated
//! coefficient expressions in t (no spaces inside an expression), with an
//! optional `t = <rational>` header pinning the parameter. The built-in
//! name `paper-octic` resolves to the toolkit's double-octic family.

use crate::expr::{ExprParser, SyntaxError};
use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use octic_core::arrangement::FamilyArrangement;
use octic_core::multipoly::{vars, QPoly, Rational};

pub struct ParsedArrangement {
    pub family: FamilyArrangement,
    pub pinned_t: Option<Rational>,
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let num: BigInt = n.trim().parse().context("numerator")?;
        let den: BigInt = d.trim().parse().context("denominator")?;
        if den == BigInt::from(0) {
            bail!("zero denominator");
        }
        Ok(Rational::new(num, den))
    } else {
        let n: BigInt = text.parse().context("integer")?;
        Ok(Rational::from_integer(n))
    }
}

pub fn parse_arrangement(text: &str) -> Result<ParsedArrangement> {
    let tv = vars(["t"]);
    let mut planes: Vec<[QPoly; 4]> = Vec::new();
    let mut pinned_t = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("t") {
            let rest_t = rest.trim_start();
            if let Some(value) = rest_t.strip_prefix('=') {
                pinned_t = Some(
                    parse_rational(value)
                        .with_context(|| format!("header at line {}", lineno + 1))?,
                );
                continue;
            }
        }
        let fields: Vec<(usize, &str)> = split_fields(raw);
        if fields.len() != 4 {
            bail!(
                "line {}: expected 4 coefficient expressions, found {}",
                lineno + 1,
                fields.len()
            );
        }
        let mut coeffs: Vec<QPoly> = Vec::with_capacity(4);
        for (col0, field) in &fields {
            let poly = ExprParser::parse(field, lineno + 1, *col0, &tv)
                .map_err(|e: SyntaxError| anyhow::anyhow!("{e}"))?;
            coeffs.push(poly);
        }
        planes.push([
            coeffs[0].clone(),
            coeffs[1].clone(),
            coeffs[2].clone(),
            coeffs[3].clone(),
        ]);
    }
    if planes.is_empty() {
        bail!("no plane rows found");
    }
    Ok(ParsedArrangement {
        family: FamilyArrangement::new(planes),
        pinned_t,
    })
}

/// Split a raw line into whitespace-separated fields with their 0-based
/// starting byte columns.
fn split_fields(raw: &str) -> Vec<(usize, &str)> {
    let bytes = raw.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push((start, &raw[start..i]));
    }
    out
}

/// Load from a path or the built-in name.
pub fn load_arrangement(spec: &str) -> Result<ParsedArrangement> {
    if spec == "paper-octic" {
        return Ok(ParsedArrangement {
            family: FamilyArrangement::paper_octic(),
            pinned_t: None,
        });
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("reading arrangement file {spec}"))?;
    parse_arrangement(&text)
}

/// Canonical text for an arrangement: coefficient expressions without
/// internal whitespace, one plane per line.
pub fn canonical_print(fam: &FamilyArrangement, pinned_t: Option<&Rational>) -> String {
    let mut out = String::new();
    if let Some(t) = pinned_t {
        out.push_str(&format!("t = {t}\n"));
    }
    for coeffs in fam.plane_coeff_polys() {
        let fields: Vec<String> = coeffs
            .iter()
            .map(|c| c.to_string().replace(" + ", "+").replace(" - ", "-"))
            .collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}
