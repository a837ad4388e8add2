//! Generating manifolds and bouquets with closed-form integral homology.
//!
//! Every descriptor is closed, connected and orientable. `embed_dim` is a
//! certified upper bound on the smallest Euclidean dimension the manifold
//! embeds in, not the true minimum.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pid_algebra::{kunneth, FGModule, GradedModule, Ring};

/// JSON description of a generating manifold or bouquet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldSpec {
    Point,
    Sphere {
        dim: usize,
    },
    Surface {
        genus: usize,
    },
    Lens {
        p: u64,
        q: u64,
    },
    HomologySphere {
        dim: usize,
    },
    Product {
        factors: Vec<ManifoldSpec>,
    },
    ConnectedSum {
        parts: Vec<ManifoldSpec>,
    },
    BundleTotal {
        base: Box<ManifoldSpec>,
        n: usize,
        k: usize,
        l: usize,
    },
    Bouquet {
        summands: Vec<ManifoldSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ManifoldDesc {
    label: String,
    dim: usize,
    homology: GradedModule,
    embed_dim: usize,
    spec: ManifoldSpec,
}

fn whitney_capped(dim: usize, bound: usize) -> usize {
    if dim == 0 {
        bound.max(1)
    } else {
        bound.min(2 * dim)
    }
}

impl ManifoldDesc {
    fn build(
        label: String,
        dim: usize,
        homology: GradedModule,
        embed: usize,
        spec: ManifoldSpec,
    ) -> Self {
        debug_assert_eq!(homology.top(), dim);
        ManifoldDesc {
            label,
            dim,
            homology,
            embed_dim: whitney_capped(dim, embed),
            spec,
        }
    }

    pub fn point() -> Self {
        ManifoldDesc::build(
            "pt".into(),
            0,
            GradedModule::point(Ring::Integers),
            1,
            ManifoldSpec::Point,
        )
    }

    /// Standard sphere `S^k`, `k >= 1` (S^0 is disconnected).
    pub fn sphere(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::validation("S^0 is disconnected; use a point"));
        }
        Ok(ManifoldDesc::build(
            format!("S^{k}"),
            k,
            sphere_homology(k),
            k + 1,
            ManifoldSpec::Sphere { dim: k },
        ))
    }

    /// Closed orientable surface of genus `g`.
    pub fn surface(g: usize) -> Self {
        let homology = GradedModule::free(Ring::Integers, &[1, 2 * g, 1]).expect("nonempty");
        let label = match g {
            0 => "S^2".to_string(),
            1 => "T^2".to_string(),
            _ => format!("Σ_{g}"),
        };
        ManifoldDesc::build(label, 2, homology, 3, ManifoldSpec::Surface { genus: g })
    }

    /// Lens space `L(p, q)`: homology `(Z, Z/p, 0, Z)`.
    pub fn lens(p: u64, q: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::validation(format!(
                "lens space needs p >= 2, got {p}"
            )));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::validation(format!(
                "lens space needs gcd(p, q) = 1, got ({p}, {q})"
            )));
        }
        let homology = GradedModule::new(
            Ring::Integers,
            vec![
                FGModule::free(Ring::Integers, 1),
                FGModule::integral(0, &[p])?,
                FGModule::zero(Ring::Integers),
                FGModule::free(Ring::Integers, 1),
            ],
        )?;
        Ok(ManifoldDesc::build(
            format!("L({p},{q})"),
            3,
            homology,
            5,
            ManifoldSpec::Lens { p, q },
        ))
    }

    /// A manifold with the integral homology of `S^d`.
    pub fn homology_sphere(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::validation("homology sphere needs dim >= 1"));
        }
        Ok(ManifoldDesc::build(
            format!("HS^{d}"),
            d,
            sphere_homology(d),
            d + 2,
            ManifoldSpec::HomologySphere { dim: d },
        ))
    }

    pub fn from_spec(spec: &ManifoldSpec) -> Result<Self> {
        match spec {
            ManifoldSpec::Point => Ok(ManifoldDesc::point()),
            ManifoldSpec::Sphere { dim } => ManifoldDesc::sphere(*dim),
            ManifoldSpec::Surface { genus } => Ok(ManifoldDesc::surface(*genus)),
            ManifoldSpec::Lens { p, q } => ManifoldDesc::lens(*p, *q),
            ManifoldSpec::HomologySphere { dim } => ManifoldDesc::homology_sphere(*dim),
            ManifoldSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::validation("product needs at least one factor"))?;
                it.try_fold(ManifoldDesc::from_spec(first)?, |acc, f| {
                    Ok(product(&acc, &ManifoldDesc::from_spec(f)?))
                })
            }
            ManifoldSpec::ConnectedSum { parts } => {
                let parts = parts
                    .iter()
                    .map(ManifoldDesc::from_spec)
                    .collect::<Result<Vec<_>>>()?;
                connected_sum(&parts)
            }
            ManifoldSpec::BundleTotal { base, n, k, l } => {
                bundle_total_space(&ManifoldDesc::from_spec(base)?, *n, *k, *l)
            }
            ManifoldSpec::Bouquet { .. } => Err(Error::validation(
                "a bouquet is not a manifold; use it as a wedge operation",
            )),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn closed(&self) -> bool {
        true
    }

    pub fn connected(&self) -> bool {
        true
    }

    /// Non-orientable manifolds are not representable.
    pub fn orientable(&self) -> bool {
        true
    }

    pub fn homology(&self) -> &GradedModule {
        &self.homology
    }

    pub fn embed_dim(&self) -> usize {
        self.embed_dim
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.homology.euler_characteristic()
    }

    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    /// Fake descriptor with arbitrary homology for exercising the checks.
    #[cfg(test)]
    pub(crate) fn hand_built(label: &str, homology: GradedModule) -> Self {
        let dim = homology.top();
        ManifoldDesc {
            label: label.into(),
            dim,
            embed_dim: whitney_capped(dim, 2 * dim),
            homology,
            spec: ManifoldSpec::Point,
        }
    }
}

fn sphere_homology(k: usize) -> GradedModule {
    let mut ranks = vec![0; k + 1];
    ranks[0] += 1;
    ranks[k] += 1;
    GradedModule::free(Ring::Integers, &ranks).expect("nonempty")
}

/// `a × b`; a point factor is the unit.
pub fn product(a: &ManifoldDesc, b: &ManifoldDesc) -> ManifoldDesc {
    if b.is_point() {
        return a.clone();
    }
    if a.is_point() {
        return b.clone();
    }
    let homology = kunneth(&a.homology, &b.homology).expect("catalog homology is integral");
    let mut factors = Vec::new();
    for m in [a, b] {
        match &m.spec {
            ManifoldSpec::Product { factors: f } => factors.extend(f.iter().cloned()),
            other => factors.push(other.clone()),
        }
    }
    ManifoldDesc::build(
        format!("{} × {}", a.label, b.label),
        a.dim + b.dim,
        homology,
        a.embed_dim + b.embed_dim,
        ManifoldSpec::Product { factors },
    )
}

/// Connected sum of closed orientable manifolds of a common dimension `d >= 2`.
pub fn connected_sum(parts: &[ManifoldDesc]) -> Result<ManifoldDesc> {
    let first = parts
        .first()
        .ok_or_else(|| Error::validation("connected sum needs at least one part"))?;
    if parts.len() == 1 {
        return Ok(first.clone());
    }
    let d = first.dim;
    if let Some(p) = parts.iter().find(|p| p.dim != d) {
        return Err(Error::validation(format!(
            "connected sum mixes dimensions {d} and {} ({})",
            p.dim, p.label
        )));
    }
    if d < 2 {
        return Err(Error::validation(format!(
            "connected sum needs dim >= 2, got {d}"
        )));
    }
    let mut homology = GradedModule::zero(Ring::Integers, d);
    homology.add_at(0, &FGModule::free(Ring::Integers, 1))?;
    homology.add_at(d, &FGModule::free(Ring::Integers, 1))?;
    for p in parts {
        for i in 1..d {
            homology.add_at(i, &p.homology.get(i as i64))?;
        }
    }
    let label = parts
        .iter()
        .map(|p| p.label.as_str())
        .collect::<Vec<_>>()
        .join(" # ");
    let embed = parts.iter().map(|p| p.embed_dim).max().unwrap_or(1);
    let spec = ManifoldSpec::ConnectedSum {
        parts: parts.iter().map(|p| p.spec.clone()).collect(),
    };
    Ok(ManifoldDesc::build(label, d, homology, embed, spec))
}

/// Closed orientable 3-manifold with `H_1 = g` and `H_2 = 0`: a connected
/// sum of `L(d_i, 1)` over the invariant factors, or `S^3` for trivial `g`.
pub fn realize_finite_abelian_h1(g: &FGModule) -> Result<ManifoldDesc> {
    if g.ring() != Ring::Integers {
        return Err(Error::validation("H_1 realization needs an integral group"));
    }
    if g.rank() != 0 {
        return Err(Error::validation(format!(
            "H_1 realization needs a finite group, got {g}"
        )));
    }
    if g.torsion().is_empty() {
        return ManifoldDesc::sphere(3);
    }
    let lenses = g
        .torsion()
        .iter()
        .map(|&d| ManifoldDesc::lens(d, 1))
        .collect::<Result<Vec<_>>>()?;
    connected_sum(&lenses)
}

/// Total space of an oriented linear `S^{k-l-1}`-bundle over `s` with
/// vanishing Euler class, modelled by the split formula
/// `H_j(S') = H_j(S) ⊕ H_{j-(k-l-1)}(S)`.
pub fn bundle_total_space(s: &ManifoldDesc, n: usize, k: usize, l: usize) -> Result<ManifoldDesc> {
    if l + 1 >= k {
        return Err(Error::validation(format!(
            "bundle needs l + 1 < k, got l = {l}, k = {k}"
        )));
    }
    if k >= n {
        return Err(Error::validation(format!(
            "bundle needs k < n, got k = {k}, n = {n}"
        )));
    }
    if s.dim != n - k {
        return Err(Error::validation(format!(
            "bundle base must have dim n - k = {}, got {} ({})",
            n - k,
            s.dim,
            s.label
        )));
    }
    if s.embed_dim > n - l {
        return Err(Error::validation(format!(
            "bundle base {} needs an embedding into R^{} (certified only for R^{})",
            s.label,
            n - l,
            s.embed_dim
        )));
    }
    let fiber = k - l - 1;
    let homology = s.homology.direct_sum(&s.homology.shifted(fiber))?;
    let spec = ManifoldSpec::BundleTotal {
        base: Box::new(s.spec.clone()),
        n,
        k,
        l,
    };
    Ok(ManifoldDesc::build(
        format!("S^{fiber}-bundle over {}", s.label),
        n - l - 1,
        homology,
        n,
        spec,
    ))
}

/// Wedge of closed connected orientable manifolds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BouquetDesc {
    summands: Vec<ManifoldDesc>,
    homology: GradedModule,
}

impl BouquetDesc {
    pub fn summands(&self) -> &[ManifoldDesc] {
        &self.summands
    }

    pub fn homology(&self) -> &GradedModule {
        &self.homology
    }

    pub fn dim(&self) -> usize {
        self.summands
            .iter()
            .map(ManifoldDesc::dim)
            .max()
            .unwrap_or(0)
    }

    pub fn label(&self) -> String {
        self.summands
            .iter()
            .map(ManifoldDesc::label)
            .collect::<Vec<_>>()
            .join(" ∨ ")
    }

    pub fn spec(&self) -> ManifoldSpec {
        ManifoldSpec::Bouquet {
            summands: self.summands.iter().map(|m| m.spec.clone()).collect(),
        }
    }

    /// Accepts a `bouquet` spec or a single manifold spec.
    pub fn from_spec(spec: &ManifoldSpec) -> Result<Self> {
        match spec {
            ManifoldSpec::Bouquet { summands } => make_bouquet(
                &summands
                    .iter()
                    .map(ManifoldDesc::from_spec)
                    .collect::<Result<Vec<_>>>()?,
            ),
            other => make_bouquet(&[ManifoldDesc::from_spec(other)?]),
        }
    }
}

pub fn make_bouquet(parts: &[ManifoldDesc]) -> Result<BouquetDesc> {
    if parts.is_empty() {
        return Err(Error::validation("bouquet needs at least one summand"));
    }
    let mut homology = GradedModule::point(Ring::Integers);
    for p in parts {
        homology = homology.direct_sum(&p.homology.reduced())?;
    }
    Ok(BouquetDesc {
        summands: parts.to_vec(),
        homology,
    })
}

/// Poincaré duality on integral homology: free ranks symmetric about
/// `d/2`, torsion of `H_i` matching torsion of `H_{d-i-1}`.
pub fn check_poincare_duality(m: &ManifoldDesc) -> bool {
    duality_holds(m.homology(), m.dim())
}

pub(crate) fn duality_holds(h: &GradedModule, d: usize) -> bool {
    let d = d as i64;
    (0..=d).all(|i| h.rank(i) == h.rank(d - i) && h.get(i).torsion() == h.get(d - i - 1).torsion())
}

pub fn check_embeddable(m: &ManifoldDesc, ambient: usize) -> bool {
    m.embed_dim <= ambient
}
