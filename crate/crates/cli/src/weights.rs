//! Weight-literal parser: comma-separated lists of `+`-joined terms over
//! the `e_i` basis and named fundamental weights.
//!
//! Examples: `e1`, `2e1+e2`, `w1`, `omega2`, `short-fund`, `0`.

use anyhow::{anyhow, bail, Result};
use weyl_lab::root_systems::{RootSystem, Weight};

/// One weight expression.
pub fn parse_weight(rs: &RootSystem, expr: &str) -> Result<Weight> {
    let expr = expr.trim();
    if expr.is_empty() {
        bail!("empty weight expression");
    }
    if expr == "0" {
        return Ok(Weight::zero(rs.rank()));
    }
    let mut acc = Weight::zero(rs.rank());
    for term in expr.split('+') {
        acc = acc.add(&parse_term(rs, term.trim())?);
    }
    Ok(acc)
}

/// Comma-separated list of weight expressions.
pub fn parse_weight_list(rs: &RootSystem, list: &str) -> Result<Vec<Weight>> {
    list.split(',')
        .map(|expr| parse_weight(rs, expr))
        .collect()
}

fn parse_term(rs: &RootSystem, term: &str) -> Result<Weight> {
    if term == "short-fund" {
        return short_fundamental(rs);
    }
    // optional integer coefficient prefix
    let split = term
        .char_indices()
        .find(|(_, c)| c.is_ascii_alphabetic())
        .map(|(i, _)| i)
        .ok_or_else(|| anyhow!("cannot parse weight term '{term}'"))?;
    let coeff: i64 = if split == 0 {
        1
    } else {
        term[..split]
            .parse()
            .map_err(|_| anyhow!("bad coefficient in weight term '{term}'"))?
    };
    let body = &term[split..];
    let base = if let Some(idx) = body.strip_prefix('e') {
        let i: usize = idx
            .parse()
            .map_err(|_| anyhow!("bad basis index in '{term}'"))?;
        if i == 0 || i > rs.rank() {
            bail!("basis index out of range in '{term}' (rank {})", rs.rank());
        }
        let mut coords = vec![0i64; rs.rank()];
        coords[i - 1] = 1;
        Weight::from_ints(&coords)
    } else if let Some(idx) = body.strip_prefix("omega").or_else(|| body.strip_prefix('w')) {
        let i: usize = idx
            .parse()
            .map_err(|_| anyhow!("bad fundamental index in '{term}'"))?;
        if i == 0 || i > rs.rank() {
            bail!(
                "fundamental index out of range in '{term}' (rank {})",
                rs.rank()
            );
        }
        rs.fundamental_weights()[i - 1].clone()
    } else {
        bail!("cannot parse weight term '{term}'");
    };
    Ok(base.scale(coeff))
}

/// The fundamental weight attached to a short simple root (e.g. the
/// degree-7 representation for G2).
fn short_fundamental(rs: &RootSystem) -> Result<Weight> {
    let lengths: Vec<i64> = rs
        .simple_roots()
        .iter()
        .map(|a| rs.height_norm2(a))
        .collect();
    let min = *lengths.iter().min().unwrap();
    let max = *lengths.iter().max().unwrap();
    if min == max {
        bail!("'short-fund' needs a group with two root lengths");
    }
    let i = lengths.iter().position(|&l| l == min).unwrap();
    Ok(rs.fundamental_weights()[i].clone())
}
