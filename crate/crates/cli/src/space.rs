//! Parsing of `--space` / `--base` arguments.
//!
//! Either JSON (`{"kind": ...}`) or a compact form:
//!
//! ```text
//! point | sphere:K | surface:G | lens:P,Q | hsphere:D
//! A * B      product
//! A # B      connected sum
//! A | B      wedge (bouquet)
//! ```
//!
//! `|` binds loosest, then `#`, then `*`.

use anyhow::{anyhow, bail, Context, Result};
use reeb_forge::ManifoldSpec;

pub fn parse_space(text: &str) -> Result<ManifoldSpec> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).context("invalid manifold JSON");
    }
    let summands = text.split('|').map(parse_sum).collect::<Result<Vec<_>>>()?;
    Ok(match <[ManifoldSpec; 1]>::try_from(summands) {
        Ok([one]) => one,
        Err(summands) => ManifoldSpec::Bouquet { summands },
    })
}

fn parse_sum(text: &str) -> Result<ManifoldSpec> {
    let parts = text
        .split('#')
        .map(parse_product)
        .collect::<Result<Vec<_>>>()?;
    Ok(match <[ManifoldSpec; 1]>::try_from(parts) {
        Ok([one]) => one,
        Err(parts) => ManifoldSpec::ConnectedSum { parts },
    })
}

fn parse_product(text: &str) -> Result<ManifoldSpec> {
    let factors = text
        .split('*')
        .map(parse_atom)
        .collect::<Result<Vec<_>>>()?;
    Ok(match <[ManifoldSpec; 1]>::try_from(factors) {
        Ok([one]) => one,
        Err(factors) => ManifoldSpec::Product { factors },
    })
}

fn parse_atom(text: &str) -> Result<ManifoldSpec> {
    let text = text.trim();
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let nums = || -> Result<Vec<u64>> {
        args.split(',')
            .map(|a| {
                a.trim()
                    .parse::<u64>()
                    .map_err(|_| anyhow!("bad number {a:?} in {text:?}"))
            })
            .collect()
    };
    let one = || -> Result<usize> {
        match nums()?.as_slice() {
            [x] => Ok(*x as usize),
            _ => bail!("{name} takes one parameter, got {text:?}"),
        }
    };
    Ok(match name.trim() {
        "point" | "pt" if args.is_empty() => ManifoldSpec::Point,
        "sphere" | "S" => ManifoldSpec::Sphere { dim: one()? },
        "surface" => ManifoldSpec::Surface { genus: one()? },
        "hsphere" => ManifoldSpec::HomologySphere { dim: one()? },
        "lens" | "L" => match nums()?.as_slice() {
            [p] => ManifoldSpec::Lens { p: *p, q: 1 },
            [p, q] => ManifoldSpec::Lens { p: *p, q: *q },
            _ => bail!("lens takes p or p,q, got {text:?}"),
        },
        _ => bail!("unknown space {text:?}"),
    })
}
