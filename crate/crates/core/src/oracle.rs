//! Brute-force homology from explicit cellular chain complexes.
//!
//! Spaces are modelled by minimal CW structures; products use the chain-level
//! tensor product, wedges identify base 0-cells. Homology comes from Smith
//! normal forms over `BigInt`, independently of the closed-form formulas in
//! [`crate::catalog`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::catalog::{BouquetDesc, ManifoldDesc, ManifoldSpec};
use crate::error::{Error, Result};
use crate::pid_algebra::{homology_with_counts, GradedModule};
use crate::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    Point,
    Sphere(usize),
    Surface(usize),
    Lens(u64, u64),
    Wedge(Vec<SpaceSpec>),
    Product(Vec<SpaceSpec>),
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Lens(p, q) if *p < 2 || p.gcd(q) != 1 => Err(Error::validation(format!(
                "lens space needs p >= 2 and gcd(p, q) = 1, got ({p}, {q})"
            ))),
            SpaceSpec::Wedge(parts) | SpaceSpec::Product(parts) => {
                if parts.is_empty() {
                    return Err(Error::validation("wedge/product needs at least one part"));
                }
                parts.iter().try_for_each(SpaceSpec::validate)
            }
            _ => Ok(()),
        }
    }
}

/// Cellular chain complex: `boundaries[i]` is `∂_{i+1}`, shaped
/// `cell_counts[i] x cell_counts[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainModel {
    pub label: String,
    pub cell_counts: Vec<usize>,
    pub boundaries: Vec<Matrix>,
    /// Index of the base 0-cell used for wedges.
    base_cell: usize,
}

impl ChainModel {
    fn top(&self) -> usize {
        self.cell_counts.len() - 1
    }

    fn count(&self, i: usize) -> usize {
        self.cell_counts.get(i).copied().unwrap_or(0)
    }

    /// `∂_i`, or a correctly shaped zero map beyond the stored range.
    fn boundary(&self, i: usize) -> Matrix {
        if i >= 1 && i <= self.boundaries.len() {
            self.boundaries[i - 1].clone()
        } else {
            Matrix::zeros(self.count(i.wrapping_sub(1)), self.count(i))
        }
    }
}

fn minimal(
    label: String,
    cells: &[(usize, usize)],
    top: usize,
    attach: &[(usize, i64)],
) -> ChainModel {
    // cells: (degree, count); attach: (degree, coefficient) for 1x1 boundary maps
    let mut counts = vec![0; top + 1];
    for &(d, c) in cells {
        counts[d] += c;
    }
    let boundaries = (1..=top)
        .map(|i| {
            let mut m = Matrix::zeros(counts[i - 1], counts[i]);
            if let Some(&(_, c)) = attach.iter().find(|(d, _)| *d == i) {
                m.set(0, 0, BigInt::from(c));
            }
            m
        })
        .collect();
    ChainModel {
        label,
        cell_counts: counts,
        boundaries,
        base_cell: 0,
    }
}

pub fn build_model(spec: &SpaceSpec) -> Result<ChainModel> {
    spec.validate()?;
    Ok(build(spec))
}

fn build(spec: &SpaceSpec) -> ChainModel {
    match spec {
        SpaceSpec::Point => minimal("pt".into(), &[(0, 1)], 0, &[]),
        SpaceSpec::Sphere(k) => minimal(format!("S^{k}"), &[(0, 1), (*k, 1)], *k, &[]),
        SpaceSpec::Surface(g) => minimal(format!("Σ_{g}"), &[(0, 1), (1, 2 * g), (2, 1)], 2, &[]),
        SpaceSpec::Lens(p, q) => minimal(
            format!("L({p},{q})"),
            &[(0, 1), (1, 1), (2, 1), (3, 1)],
            3,
            &[(2, *p as i64)],
        ),
        SpaceSpec::Wedge(parts) => {
            let models: Vec<ChainModel> = parts.iter().map(build).collect();
            wedge(&models)
        }
        SpaceSpec::Product(parts) => {
            let mut models = parts.iter().map(build);
            let first = models.next().expect("validated nonempty");
            models.fold(first, |acc, m| tensor(&acc, &m))
        }
    }
}

/// One-point union: base 0-cells merged, everything else block-diagonal.
fn wedge(models: &[ChainModel]) -> ChainModel {
    let top = models.iter().map(ChainModel::top).max().unwrap_or(0);
    let mut counts = vec![0usize; top + 1];
    counts[0] = 1 + models.iter().map(|m| m.count(0) - 1).sum::<usize>();
    for i in 1..=top {
        counts[i] = models.iter().map(|m| m.count(i)).sum();
    }

    // row map for 0-cells: base -> 0, others packed after it
    let mut zero_maps = Vec::new();
    let mut next = 1;
    for m in models {
        let map: Vec<usize> = (0..m.count(0))
            .map(|c| {
                if c == m.base_cell {
                    0
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        zero_maps.push(map);
    }

    let boundaries = (1..=top)
        .map(|i| {
            let mut out = Matrix::zeros(counts[i - 1], counts[i]);
            let (mut row_off, mut col_off) = (0, 0);
            for (mi, m) in models.iter().enumerate() {
                let d = m.boundary(i);
                for r in 0..d.rows() {
                    let row = if i == 1 {
                        zero_maps[mi][r]
                    } else {
                        row_off + r
                    };
                    for c in 0..d.cols() {
                        let v = d.get(r, c);
                        if !v.is_zero() {
                            let cur = out.get(row, col_off + c).clone();
                            out.set(row, col_off + c, cur + v);
                        }
                    }
                }
                row_off += m.count(i - 1);
                col_off += m.count(i);
            }
            out
        })
        .collect();
    let label = models
        .iter()
        .map(|m| m.label.as_str())
        .collect::<Vec<_>>()
        .join(" ∨ ");
    ChainModel {
        label,
        cell_counts: counts,
        boundaries,
        base_cell: 0,
    }
}

/// Chain-level tensor product with `∂(a⊗b) = ∂a⊗b + (-1)^{deg a} a⊗∂b`.
fn tensor(x: &ChainModel, y: &ChainModel) -> ChainModel {
    let top = x.top() + y.top();
    // offset[n][p] = index of the first basis element a⊗b with deg a = p in C_n
    let mut offsets = vec![vec![0usize; top + 1]; top + 1];
    let mut counts = vec![0usize; top + 1];
    for n in 0..=top {
        let mut acc = 0;
        for p in 0..=n {
            offsets[n][p] = acc;
            acc += x.count(p) * y.count(n - p);
        }
        counts[n] = acc;
    }
    let index = |n: usize, p: usize, a: usize, b: usize| offsets[n][p] + a * y.count(n - p) + b;

    let boundaries = (1..=top)
        .map(|n| {
            let mut out = Matrix::zeros(counts[n - 1], counts[n]);
            for p in 0..=n {
                let q = n - p;
                if x.count(p) == 0 || y.count(q) == 0 {
                    continue;
                }
                let dx = if p > 0 { Some(x.boundary(p)) } else { None };
                let dy = if q > 0 { Some(y.boundary(q)) } else { None };
                let sign = if p % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                for a in 0..x.count(p) {
                    for b in 0..y.count(q) {
                        let col = index(n, p, a, b);
                        if let Some(dx) = &dx {
                            for a2 in 0..x.count(p - 1) {
                                let v = dx.get(a2, a);
                                if !v.is_zero() {
                                    let row = index(n - 1, p - 1, a2, b);
                                    let cur = out.get(row, col).clone();
                                    out.set(row, col, cur + v);
                                }
                            }
                        }
                        if let Some(dy) = &dy {
                            for b2 in 0..y.count(q - 1) {
                                let v = dy.get(b2, b);
                                if !v.is_zero() {
                                    let row = index(n - 1, p, a, b2);
                                    let cur = out.get(row, col).clone();
                                    out.set(row, col, cur + &sign * v);
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    ChainModel {
        label: format!("{} × {}", x.label, y.label),
        cell_counts: counts,
        boundaries,
        base_cell: x.base_cell * y.count(0) + y.base_cell,
    }
}

pub fn oracle_homology(m: &ChainModel) -> Result<GradedModule> {
    homology_with_counts(&m.cell_counts, &m.boundaries)
}

/// Oracle-side description of a catalog entry, if it has one.
pub fn space_spec_of(spec: &ManifoldSpec) -> Option<SpaceSpec> {
    match spec {
        ManifoldSpec::Point => Some(SpaceSpec::Point),
        ManifoldSpec::Sphere { dim } => Some(SpaceSpec::Sphere(*dim)),
        ManifoldSpec::Surface { genus } => Some(SpaceSpec::Surface(*genus)),
        ManifoldSpec::Lens { p, q } => Some(SpaceSpec::Lens(*p, *q)),
        ManifoldSpec::Product { factors } => factors
            .iter()
            .map(space_spec_of)
            .collect::<Option<Vec<_>>>()
            .map(SpaceSpec::Product),
        ManifoldSpec::Bouquet { summands } => summands
            .iter()
            .map(space_spec_of)
            .collect::<Option<Vec<_>>>()
            .map(SpaceSpec::Wedge),
        ManifoldSpec::ConnectedSum { parts } if parts.len() == 1 => space_spec_of(&parts[0]),
        ManifoldSpec::HomologySphere { .. }
        | ManifoldSpec::ConnectedSum { .. }
        | ManifoldSpec::BundleTotal { .. } => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogCheck {
    Pass {
        formula: GradedModule,
        oracle: GradedModule,
    },
    Fail {
        formula: GradedModule,
        oracle: GradedModule,
        mismatched_degrees: Vec<usize>,
    },
    /// No cell model is available (connected sums, bundle totals, homology spheres).
    NotOracleExpressible,
}

impl CatalogCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CatalogCheck::Pass { .. })
    }
}

fn compare(formula: &GradedModule, spec: &ManifoldSpec) -> Result<CatalogCheck> {
    let Some(space) = space_spec_of(spec) else {
        return Ok(CatalogCheck::NotOracleExpressible);
    };
    let oracle = oracle_homology(&build_model(&space)?)?;
    let top = formula.top().max(oracle.top());
    let mismatched: Vec<usize> = (0..=top)
        .filter(|&i| formula.get(i as i64) != oracle.get(i as i64))
        .collect();
    let formula = formula.clone();
    Ok(if mismatched.is_empty() {
        CatalogCheck::Pass { formula, oracle }
    } else {
        CatalogCheck::Fail {
            formula,
            oracle,
            mismatched_degrees: mismatched,
        }
    })
}

/// Degreewise comparison of a catalog entry's closed-form homology with the
/// oracle homology of its cell model.
pub fn validate_catalog_entry(m: &ManifoldDesc) -> Result<CatalogCheck> {
    compare(m.homology(), m.spec())
}

pub fn validate_bouquet(b: &BouquetDesc) -> Result<CatalogCheck> {
    compare(b.homology(), &b.spec())
}
