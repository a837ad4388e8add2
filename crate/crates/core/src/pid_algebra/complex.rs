use super::matrix::{smith_normal_form, IntMatrix, PidScalar};
use super::module::{FGModule, GradedModule, Ring};
use crate::error::{Error, Result};

/// Integral homology of `C_top -> ... -> C_1 -> C_0`, where
/// `boundaries[i]` is the matrix of `∂_{i+1}: C_{i+1} -> C_i`.
///
/// Cell counts are read off the matrix shapes, so the list must be
/// nonempty; use [`homology_with_counts`] for complexes without boundaries.
pub fn homology_of_complex<T: PidScalar>(boundaries: &[IntMatrix<T>]) -> Result<GradedModule> {
    let first = boundaries.first().ok_or_else(|| {
        Error::InvalidChainComplex("no boundary matrices; cell counts are unknown".into())
    })?;
    let mut counts = vec![first.rows()];
    counts.extend(boundaries.iter().map(IntMatrix::cols));
    homology_with_counts(&counts, boundaries)
}

/// Integral homology with explicit cell counts `c_0..=c_top`.
pub fn homology_with_counts<T: PidScalar>(
    cell_counts: &[usize],
    boundaries: &[IntMatrix<T>],
) -> Result<GradedModule> {
    if cell_counts.is_empty() {
        return Err(Error::InvalidChainComplex("no chain groups".into()));
    }
    if boundaries.len() + 1 != cell_counts.len() {
        return Err(Error::InvalidChainComplex(format!(
            "{} chain groups need {} boundary maps, got {}",
            cell_counts.len(),
            cell_counts.len() - 1,
            boundaries.len()
        )));
    }
    for (i, d) in boundaries.iter().enumerate() {
        if d.rows() != cell_counts[i] || d.cols() != cell_counts[i + 1] {
            return Err(Error::InvalidChainComplex(format!(
                "boundary {} has shape {}x{}, expected {}x{}",
                i + 1,
                d.rows(),
                d.cols(),
                cell_counts[i],
                cell_counts[i + 1]
            )));
        }
    }
    for (i, pair) in boundaries.windows(2).enumerate() {
        let composite = pair[0]
            .mul(&pair[1])
            .map_err(|e| Error::InvalidChainComplex(e.to_string()))?;
        if !composite.is_zero() {
            return Err(Error::InvalidChainComplex(format!(
                "boundary {} composed with boundary {} is nonzero",
                i + 1,
                i + 2
            )));
        }
    }

    // factors[i] = invariant factors of ∂_{i+1}
    let factors = boundaries
        .iter()
        .map(|d| {
            smith_normal_form(d)
                .iter()
                .map(|x| {
                    x.to_u64().ok_or_else(|| {
                        Error::InvalidChainComplex("invariant factor exceeds u64".into())
                    })
                })
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let degrees = (0..cell_counts.len())
        .map(|i| {
            let rank_out = if i == 0 { 0 } else { factors[i - 1].len() };
            let incoming: &[u64] = factors.get(i).map_or(&[], Vec::as_slice);
            let free = cell_counts[i] - rank_out - incoming.len();
            let torsion: Vec<u64> = incoming.iter().copied().filter(|&d| d > 1).collect();
            FGModule::integral(free, &torsion)
        })
        .collect::<Result<Vec<_>>>()?;
    GradedModule::new(Ring::Integers, degrees)
}
