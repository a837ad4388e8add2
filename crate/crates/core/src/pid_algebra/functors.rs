//! Künneth, change of coefficients and universal-coefficient cohomology for
//! integral graded modules.

use super::module::{FGModule, GradedModule, Ring};
use crate::error::{Error, Result};

fn require_integers(x: &GradedModule, what: &str) -> Result<()> {
    if x.ring() == Ring::Integers {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(format!(
            "{what} expects integral input, got {}",
            x.ring()
        )))
    }
}

/// Homology of a product from the homology of its factors:
/// `H_i(X×Y) = ⊕_{p+q=i} H_p⊗H_q ⊕ ⊕_{p+q=i-1} Tor(H_p, H_q)`.
pub fn kunneth(x: &GradedModule, y: &GradedModule) -> Result<GradedModule> {
    if x.ring() != y.ring() {
        return Err(Error::validation(format!(
            "Künneth needs matching rings, got {} and {}",
            x.ring(),
            y.ring()
        )));
    }
    require_integers(x, "Künneth")?;
    let top = x.top() + y.top();
    let mut out = GradedModule::zero(Ring::Integers, top);
    for (p, a) in x.degrees().iter().enumerate() {
        for (q, b) in y.degrees().iter().enumerate() {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            out.add_at(p + q, &a.tensor_product(b)?)?;
            let tor = a.torsion_product(b)?;
            if !tor.is_zero() {
                // p + q + 1 <= top because both factors carry torsion below their tops
                out.add_at(p + q + 1, &tor)?;
            }
        }
    }
    Ok(out)
}

/// `H_i(-;R) = H_i ⊗ R ⊕ Tor(H_{i-1}, R)`.
///
/// The top grows by one when the input's top degree has torsion that
/// survives as a Tor term.
pub fn change_coefficients(x: &GradedModule, ring: Ring) -> Result<GradedModule> {
    require_integers(x, "change of coefficients")?;
    match ring {
        Ring::Integers => Ok(x.clone()),
        Ring::Rationals => GradedModule::new(
            ring,
            x.degrees()
                .iter()
                .map(|m| m.free_part())
                .map(|m| FGModule::free(ring, m.rank()))
                .collect(),
        ),
        Ring::PrimeField(p) => {
            let p = p.get();
            let tor_top = x.degrees()[x.top()].p_torsion_count(p) > 0;
            let top = if tor_top { x.top() + 1 } else { x.top() };
            let degrees = (0..=top as i64)
                .map(|i| {
                    let here = x.get(i);
                    let below = x.get(i - 1);
                    FGModule::free(
                        ring,
                        here.rank() + here.p_torsion_count(p) + below.p_torsion_count(p),
                    )
                })
                .collect();
            GradedModule::new(ring, degrees)
        }
    }
}

/// Integral cohomology from integral homology: `H^i = free(H_i) ⊕ tors(H_{i-1})`.
pub fn cohomology_uct(x: &GradedModule) -> Result<GradedModule> {
    require_integers(x, "universal coefficients")?;
    let top = if x.degrees()[x.top()].is_free() {
        x.top()
    } else {
        x.top() + 1
    };
    let degrees = (0..=top as i64)
        .map(|i| {
            x.get(i)
                .free_part()
                .direct_sum(&x.get(i - 1).torsion_part())
        })
        .collect::<Result<Vec<_>>>()?;
    GradedModule::new(Ring::Integers, degrees)
}
