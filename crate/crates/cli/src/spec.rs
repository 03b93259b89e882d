//! Textual specifications accepted on the command line: potentials,
//! lambda lists, and method names.

use anyhow::{anyhow, bail, Context, Result};
use sldens::appell::Method;
use sldens::spectral::PAPER16;
use sldens::Potential;

/// Parses `rational:A=<v>,B=<v>` or `barrier:ell=<n>,a=<v>`.
pub fn parse_potential(s: &str) -> Result<Potential> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("potential spec '{s}' lacks a ':<params>' part"))?;
    let mut pairs = Vec::new();
    for item in rest.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("potential parameter '{item}' is not key=value"))?;
        pairs.push((k.trim(), v.trim()));
    }
    let lookup = |key: &str| -> Result<f64> {
        let raw = pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| anyhow!("potential spec is missing key '{key}'"))?;
        raw.parse::<f64>()
            .with_context(|| format!("invalid value for key '{key}': '{raw}'"))
    };
    match kind {
        "rational" => {
            for (k, _) in &pairs {
                if !matches!(*k, "A" | "B") {
                    bail!("unknown key '{k}' in rational potential spec");
                }
            }
            let a = lookup("A")?;
            let b = lookup("B")?;
            Potential::rational(a, b).map_err(|e| anyhow!("invalid potential: {e}"))
        }
        "barrier" => {
            for (k, _) in &pairs {
                if !matches!(*k, "ell" | "a") {
                    bail!("unknown key '{k}' in barrier potential spec");
                }
            }
            let ell_raw = pairs
                .iter()
                .find(|(k, _)| *k == "ell")
                .map(|(_, v)| *v)
                .ok_or_else(|| anyhow!("potential spec is missing key 'ell'"))?;
            let ell: u32 = ell_raw
                .parse()
                .with_context(|| format!("invalid value for key 'ell': '{ell_raw}'"))?;
            let a = lookup("a")?;
            Ok(Potential::barrier(ell, a))
        }
        other => bail!("unknown potential kind '{other}' (expected rational or barrier)"),
    }
}

/// Parses a comma list of positive reals, or `grid:paper16`.
pub fn parse_lambdas(s: &str) -> Result<Vec<f64>> {
    if let Some(name) = s.strip_prefix("grid:") {
        return match name {
            "paper16" => Ok(PAPER16.to_vec()),
            other => bail!("unknown named grid '{other}'"),
        };
    }
    let mut out = Vec::new();
    for item in s.split(',') {
        let v: f64 = item
            .trim()
            .parse()
            .with_context(|| format!("invalid lambda value '{item}'"))?;
        out.push(v);
    }
    if out.is_empty() {
        bail!("empty lambda list");
    }
    Ok(out)
}

/// Parses F1 | F2 | F3 | fN (order taken from --N, default 6).
pub fn parse_method(s: &str, n: usize) -> Result<Method> {
    match s {
        "F1" | "f1" => Ok(Method::F1),
        "F2" | "f2" => Ok(Method::F2),
        "F3" | "f3" => Ok(Method::F3),
        "fN" | "FN" | "fn" => Ok(Method::FN(n)),
        other => bail!("unknown method '{other}' (expected F1, F2, F3 or fN)"),
    }
}
