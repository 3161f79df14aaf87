//! Plain-text model files.
//!
//! ```text
//! # fuzzy-noise model
//! # algorithm=simplified
//! input triangular 1.0000000000000000e0 1.1000000000000000e1 9 5.0000000000000000e-1
//! input triangular 1.0000000000000000e0 1.1000000000000000e1 9 5.0000000000000000e-1
//! output triangular 2.0000000000000000e0 2.2000000000000000e1 13 5.0000000000000000e-1
//! 0 0 2.0000000000000000e0 1.0000000000000000e0
//! ```
//!
//! Partition lines come first (`input` once per input dimension, in order,
//! then one `output`). Every following line is a populated cell: one index
//! per input, then the conclusion and the degree. Reals carry 17 significant
//! digits so a write/read cycle is exact. `# key=value` lines carry
//! provenance metadata; other `#` lines are comments.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{FuzzyModel, Rule};
use crate::error::{Error, Result};
use crate::fmt_real;
use crate::membership::{MfKind, Partition};

/// Ordered `key=value` provenance pairs.
pub type Metadata = Vec<(String, String)>;

const BANNER: &str = "# fuzzy-noise model";

fn partition_line(tag: &str, p: &Partition) -> String {
    format!(
        "{tag} {} {} {} {} {}",
        p.kind(),
        fmt_real(p.lo()),
        fmt_real(p.hi()),
        p.len(),
        fmt_real(p.width_factor())
    )
}

/// Renders `model` in the text format.
pub fn write_model(model: &FuzzyModel, meta: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(BANNER);
    out.push('\n');
    for (k, v) in meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    for p in model.inputs() {
        out.push_str(&partition_line("input", p));
        out.push('\n');
    }
    out.push_str(&partition_line("output", model.output()));
    out.push('\n');
    for rule in model.rules() {
        for i in &rule.antecedent {
            out.push_str(&i.to_string());
            out.push(' ');
        }
        out.push_str(&fmt_real(rule.conclusion));
        out.push(' ');
        out.push_str(&fmt_real(rule.degree));
        out.push('\n');
    }
    out
}

pub fn save_model(path: &Path, model: &FuzzyModel, meta: &[(String, String)]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(write_model(model, meta).as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn read_model(path: &Path) -> Result<(FuzzyModel, Metadata)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}

fn real(line: usize, token: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a real number, got '{token}'")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value '{token}'")));
    }
    Ok(v)
}

fn parse_partition(line: usize, fields: &[&str]) -> Result<Partition> {
    if fields.len() != 5 {
        return Err(Error::parse(
            line,
            "partition line needs: kind lo hi n width_factor",
        ));
    }
    let kind: MfKind = fields[0]
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
    let lo = real(line, fields[1])?;
    let hi = real(line, fields[2])?;
    let n: usize = fields[3]
        .parse()
        .map_err(|_| Error::parse(line, format!("bad set count '{}'", fields[3])))?;
    let wf = real(line, fields[4])?;
    Partition::uniform(lo, hi, n, kind, wf).map_err(|e| Error::parse(line, e.to_string()))
}

/// Parses the text format produced by [`write_model`].
pub fn parse_model(text: &str) -> Result<(FuzzyModel, Metadata)> {
    let mut meta = Metadata::new();
    let mut inputs = Vec::new();
    let mut model: Option<FuzzyModel> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some((k, v)) = comment.trim().split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields[0] {
            "input" => {
                if model.is_some() {
                    return Err(Error::parse(line, "input line after output line"));
                }
                inputs.push(parse_partition(line, &fields[1..])?);
            }
            "output" => {
                if model.is_some() {
                    return Err(Error::parse(line, "duplicate output line"));
                }
                let output = parse_partition(line, &fields[1..])?;
                model = Some(
                    FuzzyModel::empty(std::mem::take(&mut inputs), output)
                        .map_err(|e| Error::parse(line, e.to_string()))?,
                );
            }
            _ => {
                let m = model
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, "rule line before partition header"))?;
                let d = m.dims();
                if fields.len() != d + 2 {
                    return Err(Error::parse(
                        line,
                        format!("rule line needs {d} indices, a conclusion and a degree"),
                    ));
                }
                let antecedent = fields[..d]
                    .iter()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::parse(line, format!("bad set index '{t}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let conclusion = real(line, fields[d])?;
                let degree = real(line, fields[d + 1])?;
                for (&i, p) in antecedent.iter().zip(m.inputs()) {
                    if i >= p.len() {
                        return Err(Error::parse(line, format!("set index {i} out of range")));
                    }
                }
                if m.cell(m.index_of(&antecedent)).is_some() {
                    return Err(Error::parse(line, "duplicate rule"));
                }
                m.set_rule(Rule {
                    antecedent,
                    conclusion,
                    degree,
                })?;
            }
        }
    }
    let model = model.ok_or_else(|| Error::parse(0, "missing output partition line"))?;
    Ok((model, meta))
}
