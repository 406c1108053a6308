//! Parsing of group, weight, matrix and distribution arguments.
//!
//! Groups and subgroups are given either as a builtin (`sym:5`,
//! `young:2,3`, `cyclic:5`, `trivial:4`) or as a file:
//!
//! ```text
//! # comment
//! degree 5
//! (1 2)
//! (1 2 3 4 5)
//! ```
//!
//! Weights are a builtin `shuffle:n,r` / `shuffle:n,r,s` (uniform on the
//! shuffle set), `uniform` (uniform on the whole group), or a file of
//! `<cycle> <p/q>` lines.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dcwalk::chain::Distribution;
use dcwalk::exact::{parse_rational, Rational};
use dcwalk::linalg::Matrix;
use dcwalk::perm::{GroupElements, GroupSpec, Permutation};
use dcwalk::shuffle::{shuffle_set, ShuffleParams};
use dcwalk::weights::{weight_uniform_on_set, WeightFunction};

fn numbers(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad number {t:?}")))
        .collect()
}

/// Builtin group name or path to a group file.
pub fn parse_group(arg: &str) -> Result<GroupSpec> {
    if let Some((kind, rest)) = arg.split_once(':') {
        match kind {
            "sym" => return Ok(GroupSpec::symmetric(single(rest)?)?),
            "young" => return Ok(GroupSpec::young(&numbers(rest)?)?),
            "trivial" => return Ok(GroupSpec::trivial(single(rest)?)?),
            "cyclic" => {
                let n = single(rest)?;
                let cycle: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
                let gen = if n < 2 { "()".to_string() } else { format!("({})", cycle.join(" ")) };
                return Ok(GroupSpec::parse(n, &[gen.as_str()])?);
            }
            _ if !Path::new(arg).exists() => bail!("unknown group kind {kind:?}"),
            _ => {}
        }
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading group file {arg}"))?;
    parse_group_text(&text)
}

fn single(s: &str) -> Result<usize> {
    s.trim().parse().with_context(|| format!("bad degree {s:?}"))
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

pub fn parse_group_text(text: &str) -> Result<GroupSpec> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| anyhow!("empty group file"))?;
    let degree = header
        .strip_prefix("degree")
        .ok_or_else(|| anyhow!("group file must start with `degree N`"))?;
    let degree = single(degree)?;
    let gens: Vec<&str> = lines.collect();
    if gens.is_empty() {
        return Ok(GroupSpec::trivial(degree)?);
    }
    Ok(GroupSpec::parse(degree, &gens)?)
}

/// Builtin weight or path to a weight file.
pub fn parse_weight(arg: &str, degree: usize, group: &GroupElements) -> Result<WeightFunction> {
    if let Some(rest) = arg.strip_prefix("shuffle:") {
        let v = numbers(rest)?;
        let params = match v.as_slice() {
            [n, r] => ShuffleParams::skewed(*n, *r)?,
            [n, r, s] => ShuffleParams::typed(*n, *r, *s)?,
            _ => bail!("expected shuffle:n,r or shuffle:n,r,s"),
        };
        if params.n() != degree {
            bail!("shuffle degree {} does not match group degree {degree}", params.n());
        }
        return Ok(weight_uniform_on_set(&shuffle_set(&params)?)?);
    }
    if arg == "uniform" {
        return Ok(weight_uniform_on_set(group.elements())?);
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading weight file {arg}"))?;
    parse_weight_text(&text, degree)
}

/// Lines of `<cycle notation> <rational>`, e.g. `(1 2)(3 4) 1/3`.
pub fn parse_weight_text(text: &str, degree: usize) -> Result<WeightFunction> {
    let mut entries = Vec::new();
    for line in content_lines(text) {
        let split = line
            .rfind(|c: char| c.is_whitespace())
            .ok_or_else(|| anyhow!("weight line {line:?} needs a permutation and a value"))?;
        let (perm, value) = line.split_at(split);
        let g = Permutation::parse_cycles(perm.trim(), degree)?;
        entries.push((g, parse_rational(value)?));
    }
    Ok(WeightFunction::new(degree, entries)?)
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => Ok(parse_rational(s)?),
        serde_json::Value::Number(n) => Ok(parse_rational(&n.to_string())?),
        other => bail!("expected a rational, got {other}"),
    }
}

/// A JSON array of rows of `"p/q"` strings (integers also accepted).
pub fn parse_matrix_json(text: &str) -> Result<Matrix> {
    let v: serde_json::Value = serde_json::from_str(text).context("matrix is not valid JSON")?;
    let rows = v.as_array().ok_or_else(|| anyhow!("matrix must be an array of rows"))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| anyhow!("matrix row must be an array"))?
                .iter()
                .map(json_rational)
                .collect()
        })
        .collect()
}

/// A JSON array of rationals, or a comma-separated list.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(t).context("vector is not valid JSON")?;
        v.as_array()
            .ok_or_else(|| anyhow!("expected an array"))?
            .iter()
            .map(json_rational)
            .collect()
    } else {
        t.split(',').map(|s| Ok(parse_rational(s)?)).collect()
    }
}

/// Reads an argument that is either inline text or `@path`.
pub fn inline_or_file(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None if Path::new(arg).is_file() => {
            fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
        }
        None => Ok(arg.to_string()),
    }
}

pub fn parse_distribution(arg: &str) -> Result<Distribution> {
    Ok(Distribution::new(parse_vector(&inline_or_file(arg)?)?)?)
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for line in content_lines(text) {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {line:?} is not key = value"))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}
