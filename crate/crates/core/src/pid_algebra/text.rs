//! Textual form of modules: `Z^r + Z/d1 + Z/d2`, `Q^r`, `F{p}^r`, `0`.

use std::fmt;
use std::str::FromStr;

use super::module::{FGModule, GradedModule, Ring};
use crate::error::{Error, Result};

impl fmt::Display for FGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank() {
            0 => {}
            1 => parts.push(self.ring().to_string()),
            r => parts.push(format!("{}^{r}", self.ring())),
        }
        parts.extend(self.torsion().iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees().iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl FromStr for FGModule {
    type Err = Error;

    /// Parses the textual form; the ring is taken from the free term and
    /// defaults to `Z`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(FGModule::zero(Ring::Integers));
        }
        let mut ring = None;
        let mut rank = 0i64;
        let mut divisors = Vec::new();
        for term in s.split('+').map(str::trim) {
            if term == "0" {
                continue;
            }
            if let Some(d) = term.strip_prefix("Z/") {
                divisors.push(parse_int(d, term)?);
                continue;
            }
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), parse_int(e, term)?),
                None => (term, 1),
            };
            let r = parse_ring(base)?;
            if ring.is_some_and(|x| x != r) {
                return Err(Error::Parse(format!("mixed rings in '{s}'")));
            }
            ring = Some(r);
            rank += exp;
        }
        let ring = ring.unwrap_or(Ring::Integers);
        if ring.is_field() && !divisors.is_empty() {
            return Err(Error::Parse(format!(
                "torsion summand over a field in '{s}'"
            )));
        }
        FGModule::normalize(ring, rank, &divisors)
    }
}

fn parse_int(s: &str, term: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number in term '{term}'")))
}

impl FromStr for Ring {
    type Err = Error;

    /// `Z`, `Q`, or `F{p}` / `F_p` / `Fp` for a prime `p`.
    fn from_str(s: &str) -> Result<Self> {
        parse_ring(s.trim())
    }
}

fn parse_ring(base: &str) -> Result<Ring> {
    match base {
        "Z" => Ok(Ring::Integers),
        "Q" => Ok(Ring::Rationals),
        _ => {
            let p = base
                .strip_prefix('F')
                .map(|p| p.trim_start_matches(['{', '_']).trim_end_matches('}'))
                .ok_or_else(|| Error::Parse(format!("unknown ring '{base}'")))?;
            let p = p
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("unknown ring '{base}'")))?;
            Ring::prime_field(p)
        }
    }
}
