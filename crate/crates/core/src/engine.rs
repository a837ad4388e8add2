//! Reeb-space homology profiles and the bubbling operations acting on them.
//!
//! A profile starts point-like (`Z` in degree 0) and every operation adds a
//! shifted copy of the generating manifold's homology:
//!
//! * normal bubbling along `S` of dim `k`: `H_i += H_{i-(n-k)}(S)` for `0 <= i <= n`;
//! * bubbling along a bouquet `S_1 ∨ ... ∨ S_m`: `H_i += ⊕_j H_{i-(n-dim S_j)}(S_j)`
//!   for `i < n`, and `H_n += Z` exactly once.

use serde::{Deserialize, Serialize};

use crate::catalog::{check_embeddable, BouquetDesc, ManifoldDesc, ManifoldSpec};
use crate::error::{Error, Result};
use crate::pid_algebra::{FGModule, GradedModule, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BubblingKind {
    Normal(ManifoldDesc),
    Wedge(BouquetDesc),
}

/// One bubbling operation.
///
/// `trivial` is inert metadata. `assume_embedded` waives the certified
/// embeddability check for constructions whose embedding is taken as given
/// (the other constraints still apply).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "OpRepr", try_from = "OpRepr")]
pub struct BubblingOp {
    pub kind: BubblingKind,
    pub trivial: Option<bool>,
    pub assume_embedded: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum OpRepr {
    Normal {
        manifold: ManifoldSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trivial: Option<bool>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        assume_embedded: bool,
    },
    Wedge {
        summands: Vec<ManifoldSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trivial: Option<bool>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        assume_embedded: bool,
    },
}

impl From<BubblingOp> for OpRepr {
    fn from(op: BubblingOp) -> Self {
        let (trivial, assume_embedded) = (op.trivial, op.assume_embedded);
        match op.kind {
            BubblingKind::Normal(m) => OpRepr::Normal {
                manifold: m.spec().clone(),
                trivial,
                assume_embedded,
            },
            BubblingKind::Wedge(b) => OpRepr::Wedge {
                summands: b.summands().iter().map(|m| m.spec().clone()).collect(),
                trivial,
                assume_embedded,
            },
        }
    }
}

impl TryFrom<OpRepr> for BubblingOp {
    type Error = Error;

    fn try_from(r: OpRepr) -> Result<Self> {
        Ok(match r {
            OpRepr::Normal {
                manifold,
                trivial,
                assume_embedded,
            } => BubblingOp {
                kind: BubblingKind::Normal(ManifoldDesc::from_spec(&manifold)?),
                trivial,
                assume_embedded,
            },
            OpRepr::Wedge {
                summands,
                trivial,
                assume_embedded,
            } => {
                let parts = summands
                    .iter()
                    .map(ManifoldDesc::from_spec)
                    .collect::<Result<Vec<_>>>()?;
                BubblingOp {
                    kind: BubblingKind::Wedge(crate::catalog::make_bouquet(&parts)?),
                    trivial,
                    assume_embedded,
                }
            }
        })
    }
}

impl BubblingOp {
    pub fn normal(m: ManifoldDesc) -> Self {
        BubblingOp {
            kind: BubblingKind::Normal(m),
            trivial: None,
            assume_embedded: false,
        }
    }

    pub fn wedge(b: BouquetDesc) -> Self {
        BubblingOp {
            kind: BubblingKind::Wedge(b),
            trivial: None,
            assume_embedded: false,
        }
    }

    pub fn with_trivial(mut self, flag: bool) -> Self {
        self.trivial = Some(flag);
        self
    }

    pub fn assuming_embedding(mut self) -> Self {
        self.assume_embedded = true;
        self
    }

    pub fn is_normal(&self) -> bool {
        matches!(self.kind, BubblingKind::Normal(_))
    }

    pub fn label(&self) -> String {
        match &self.kind {
            BubblingKind::Normal(m) => format!("normal({})", m.label()),
            BubblingKind::Wedge(b) => format!("wedge({})", b.label()),
        }
    }

    /// Manifolds the operation is generated by (one for a normal op).
    pub fn generating_manifolds(&self) -> &[ManifoldDesc] {
        match &self.kind {
            BubblingKind::Normal(m) => std::slice::from_ref(m),
            BubblingKind::Wedge(b) => b.summands(),
        }
    }

    pub fn validate(&self, ambient: usize) -> Result<()> {
        for m in self.generating_manifolds() {
            if m.dim() >= ambient {
                return Err(Error::validation(format!(
                    "generating manifold {} has dim {} >= ambient dimension {ambient}",
                    m.label(),
                    m.dim()
                )));
            }
            if !(m.closed() && m.connected() && m.orientable()) {
                return Err(Error::validation(format!(
                    "generating manifold {} must be closed, connected and orientable",
                    m.label()
                )));
            }
            if !self.assume_embedded && !check_embeddable(m, ambient) {
                return Err(Error::validation(format!(
                    "generating manifold {} is only certified to embed in R^{}, not R^{ambient}",
                    m.label(),
                    m.embed_dim()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BubblingScript {
    pub ambient: usize,
    pub ops: Vec<BubblingOp>,
}

impl BubblingScript {
    pub fn new(ambient: usize) -> Self {
        BubblingScript {
            ambient,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, op: BubblingOp) {
        self.ops.push(op);
    }

    pub fn validate(&self) -> Result<()> {
        for (index, op) in self.ops.iter().enumerate() {
            op.validate(self.ambient).map_err(|e| Error::ScriptOp {
                index,
                source: Box::new(e),
            })?;
        }
        Ok(())
    }
}

/// Integral homology of a Reeb space in degrees `0..=ambient`, with the
/// operations that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ProfileRepr", try_from = "ProfileRepr")]
pub struct ReebProfile {
    ambient: usize,
    homology: GradedModule,
    history: BubblingScript,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    ambient: usize,
    homology: GradedModule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    history: Vec<BubblingOp>,
}

impl From<ReebProfile> for ProfileRepr {
    fn from(p: ReebProfile) -> Self {
        ProfileRepr {
            ambient: p.ambient,
            homology: p.homology,
            history: p.history.ops,
        }
    }
}

impl TryFrom<ProfileRepr> for ReebProfile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        let mut p = ReebProfile::from_homology(r.ambient, r.homology)?;
        p.history.ops = r.history;
        p.history.validate()?;
        Ok(p)
    }
}

impl ReebProfile {
    /// Profile with the given homology and no history, for checking
    /// externally supplied data. Degrees above `ambient` must vanish; the
    /// connectedness of `H_0` is left to the verifiers.
    pub fn from_homology(ambient: usize, homology: GradedModule) -> Result<Self> {
        if ambient < 1 {
            return Err(Error::validation("ambient dimension must be >= 1"));
        }
        if homology.ring() != Ring::Integers {
            return Err(Error::validation("profiles carry integral homology"));
        }
        if homology.trimmed().top() > ambient {
            return Err(Error::validation(format!(
                "homology is nonzero above the ambient dimension {ambient}"
            )));
        }
        Ok(ReebProfile {
            ambient,
            homology: homology.with_top(ambient),
            history: BubblingScript::new(ambient),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn homology(&self) -> &GradedModule {
        &self.homology
    }

    pub fn history(&self) -> &BubblingScript {
        &self.history
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.homology.euler_characteristic()
    }

    pub fn apply(&self, op: &BubblingOp) -> Result<ReebProfile> {
        let mut next = self.clone();
        next.apply_in_place(op)?;
        Ok(next)
    }

    /// Applies `op` without copying the history; on error `self` is unchanged.
    pub fn apply_in_place(&mut self, op: &BubblingOp) -> Result<()> {
        op.validate(self.ambient)?;
        let n = self.ambient;
        let mut h = self.homology.clone();
        match &op.kind {
            BubblingKind::Normal(s) => add_shifted(&mut h, s, n, n)?,
            BubblingKind::Wedge(b) => {
                for s in b.summands() {
                    add_shifted(&mut h, s, n, n - 1)?;
                }
                h.add_at(n, &FGModule::free(Ring::Integers, 1))?;
            }
        }
        self.homology = h;
        self.history.push(op.clone());
        Ok(())
    }

    pub fn apply_normal_bubbling(&self, s: &ManifoldDesc) -> Result<ReebProfile> {
        self.apply(&BubblingOp::normal(s.clone()))
    }

    pub fn apply_s_bubbling(&self, b: &BouquetDesc) -> Result<ReebProfile> {
        self.apply(&BubblingOp::wedge(b.clone()))
    }
}

/// `H_i += H_{i-(n-dim s)}(s)` for `i <= max_degree`.
fn add_shifted(h: &mut GradedModule, s: &ManifoldDesc, n: usize, max_degree: usize) -> Result<()> {
    let shift = n - s.dim();
    for i in shift..=max_degree {
        let m = s.homology().get((i - shift) as i64);
        if !m.is_zero() {
            h.add_at(i, &m)?;
        }
    }
    Ok(())
}

/// Point-like profile: `Z` in degree 0, zero up to degree `n`.
pub fn initial_profile(n: usize) -> Result<ReebProfile> {
    let mut h = GradedModule::zero(Ring::Integers, n);
    h.add_at(0, &FGModule::free(Ring::Integers, 1))?;
    ReebProfile::from_homology(n, h)
}

pub fn apply_normal_bubbling(p: &ReebProfile, s: &ManifoldDesc) -> Result<ReebProfile> {
    p.apply_normal_bubbling(s)
}

pub fn apply_s_bubbling(p: &ReebProfile, b: &BouquetDesc) -> Result<ReebProfile> {
    p.apply_s_bubbling(b)
}

/// Left fold of the script's operations over the point-like profile.
pub fn run_script(script: &BubblingScript) -> Result<ReebProfile> {
    let mut p = initial_profile(script.ambient)?;
    for (index, op) in script.ops.iter().enumerate() {
        p.apply_in_place(op).map_err(|e| Error::ScriptOp {
            index,
            source: Box::new(e),
        })?;
    }
    Ok(p)
}

/// Change in Euler characteristic caused by `op` in ambient dimension `n`.
///
/// Normal op along `S^k`: `(-1)^{n-k} χ(S)`. Bouquet of `m` summands:
/// `Σ_j (-1)^{n-k_j} χ(S_j) - (m-1)(-1)^n`, since the `m` top classes
/// collapse to one.
pub fn euler_delta(n: usize, op: &BubblingOp) -> Result<i64> {
    op.validate(n)?;
    let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
    let summed: i64 = op
        .generating_manifolds()
        .iter()
        .map(|s| sign(n - s.dim()) * s.euler_characteristic())
        .sum();
    Ok(match &op.kind {
        BubblingKind::Normal(_) => summed,
        BubblingKind::Wedge(b) => summed - (b.summands().len() as i64 - 1) * sign(n),
    })
}

/// Homology of the source manifold in the degrees where it agrees with the
/// Reeb space, plus the hypotheses that agreement rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceHomology {
    pub source_dim: usize,
    pub degrees: Vec<FGModule>,
    pub assumptions: Vec<String>,
}

/// `H_j(M) = H_j(W)` for `0 <= j <= m - n - 1`.
pub fn infer_source_homology(p: &ReebProfile, m: usize) -> Result<SourceHomology> {
    let n = p.ambient;
    if m <= n {
        return Err(Error::validation(format!(
            "source dimension {m} must exceed the ambient dimension {n}"
        )));
    }
    let degrees = (0..m - n).map(|j| p.homology.get(j as i64)).collect();
    let mut assumptions = vec![
        "the fold map is simple".to_string(),
        "inverse images of regular values are disjoint unions of almost-spheres".to_string(),
        "singular points have index 0 or 1".to_string(),
        "the source manifold is closed and connected".to_string(),
    ];
    if m - n == 1 {
        assumptions.push("the source manifold is orientable (needed when m - n = 1)".to_string());
    }
    Ok(SourceHomology {
        source_dim: m,
        degrees,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_bouquet;

    fn g(entries: &[(usize, &[u64])]) -> GradedModule {
        GradedModule::integral(entries).unwrap()
    }

    fn sphere(k: usize) -> ManifoldDesc {
        ManifoldDesc::sphere(k).unwrap()
    }

    #[test]
    fn initial_profiles() {
        let p = initial_profile(4).unwrap();
        assert_eq!(p.homology().ranks(), vec![1, 0, 0, 0, 0]);
        assert_eq!(initial_profile(1).unwrap().homology().ranks(), vec![1, 0]);
        for n in 1..10 {
            assert_eq!(initial_profile(n).unwrap().euler_characteristic(), 1);
        }
        assert!(initial_profile(0).is_err());
    }

    #[test]
    fn normal_bubbling_examples() {
        let p = initial_profile(2)
            .unwrap()
            .apply_normal_bubbling(&ManifoldDesc::point())
            .unwrap();
        assert_eq!(p.homology().ranks(), vec![1, 0, 1]);

        let mut p = initial_profile(5).unwrap();
        for _ in 0..3 {
            p = p.apply_normal_bubbling(&ManifoldDesc::point()).unwrap();
        }
        assert_eq!(p.homology().ranks(), vec![1, 0, 0, 0, 0, 3]);

        let p = initial_profile(5)
            .unwrap()
            .apply_normal_bubbling(&ManifoldDesc::lens(2, 1).unwrap())
            .unwrap();
        assert_eq!(
            *p.homology(),
            g(&[(1, &[]), (0, &[]), (1, &[]), (0, &[2]), (0, &[]), (1, &[])])
        );
    }

    #[test]
    fn normal_bubbling_rejects_bad_generators() {
        let p = initial_profile(3).unwrap();
        assert!(p.apply_normal_bubbling(&sphere(3)).is_err());
        // lens spaces need R^5
        let p = initial_profile(4).unwrap();
        assert!(p
            .apply_normal_bubbling(&ManifoldDesc::lens(3, 1).unwrap())
            .is_err());
        let op = BubblingOp::normal(ManifoldDesc::lens(3, 1).unwrap()).assuming_embedding();
        assert!(p.apply(&op).is_ok());
    }

    #[test]
    fn s_bubbling_examples() {
        let b = make_bouquet(&[sphere(1), sphere(2)]).unwrap();
        let p = initial_profile(4).unwrap().apply_s_bubbling(&b).unwrap();
        assert_eq!(p.homology().ranks(), vec![1, 0, 1, 1, 1]);

        let single = make_bouquet(&[ManifoldDesc::surface(2)]).unwrap();
        let a = initial_profile(4)
            .unwrap()
            .apply_s_bubbling(&single)
            .unwrap();
        let b = initial_profile(4)
            .unwrap()
            .apply_normal_bubbling(&ManifoldDesc::surface(2))
            .unwrap();
        assert_eq!(a.homology(), b.homology());

        let two = make_bouquet(&[sphere(2), sphere(2)]).unwrap();
        let w = initial_profile(4).unwrap().apply_s_bubbling(&two).unwrap();
        assert_eq!(w.homology().ranks(), vec![1, 0, 2, 0, 1]);
        let n = initial_profile(4)
            .unwrap()
            .apply_normal_bubbling(&sphere(2))
            .unwrap()
            .apply_normal_bubbling(&sphere(2))
            .unwrap();
        assert_eq!(n.homology().ranks(), vec![1, 0, 2, 0, 2]);
    }

    #[test]
    fn run_script_examples() {
        assert_eq!(
            run_script(&BubblingScript::new(3)).unwrap(),
            initial_profile(3).unwrap()
        );

        let mut s = BubblingScript::new(3);
        s.push(BubblingOp::normal(sphere(2)));
        s.push(BubblingOp::normal(ManifoldDesc::point()));
        assert_eq!(run_script(&s).unwrap().homology().ranks(), vec![1, 1, 0, 2]);

        let mut s = BubblingScript::new(7);
        let lens_s3 = crate::catalog::product(&ManifoldDesc::lens(3, 1).unwrap(), &sphere(3));
        s.push(BubblingOp::normal(lens_s3).assuming_embedding());
        s.push(BubblingOp::normal(ManifoldDesc::homology_sphere(6).unwrap()).assuming_embedding());
        let expected = g(&[
            (1, &[]),
            (2, &[]),
            (0, &[3]),
            (0, &[]),
            (2, &[]),
            (0, &[3]),
            (0, &[]),
            (2, &[]),
        ]);
        assert_eq!(*run_script(&s).unwrap().homology(), expected);
    }

    #[test]
    fn run_script_reports_op_index() {
        let mut s = BubblingScript::new(3);
        s.push(BubblingOp::normal(ManifoldDesc::point()));
        s.push(BubblingOp::normal(sphere(5)));
        match run_script(&s).unwrap_err() {
            Error::ScriptOp { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn euler_delta_examples() {
        assert_eq!(
            euler_delta(1, &BubblingOp::normal(ManifoldDesc::point())).unwrap(),
            -1
        );
        assert_eq!(
            euler_delta(4, &BubblingOp::normal(ManifoldDesc::point())).unwrap(),
            1
        );
        assert_eq!(
            euler_delta(3, &BubblingOp::normal(ManifoldDesc::surface(2))).unwrap(),
            2
        );
        let b = make_bouquet(&[sphere(1), sphere(2)]).unwrap();
        let op = BubblingOp::wedge(b);
        let before = initial_profile(4).unwrap();
        let after = before.apply(&op).unwrap();
        assert_eq!(
            euler_delta(4, &op).unwrap(),
            after.euler_characteristic() - before.euler_characteristic()
        );
    }

    #[test]
    fn source_homology_examples() {
        let p = ReebProfile::from_homology(
            4,
            GradedModule::free(Ring::Integers, &[1, 0, 1, 0, 1]).unwrap(),
        )
        .unwrap();
        let s = infer_source_homology(&p, 10).unwrap();
        let ranks: Vec<usize> = s.degrees.iter().map(FGModule::rank).collect();
        assert_eq!(ranks, vec![1, 0, 1, 0, 1, 0]);

        let s = infer_source_homology(&p, 5).unwrap();
        assert_eq!(s.degrees, vec![FGModule::free(Ring::Integers, 1)]);
        assert!(s.assumptions.iter().any(|a| a.contains("orientable")));

        let s = infer_source_homology(&p, 8).unwrap();
        assert_eq!(s.degrees.len(), 4);
        assert!(infer_source_homology(&p, 4).is_err());
    }

    #[test]
    fn profile_json_round_trip() {
        let mut s = BubblingScript::new(5);
        s.push(BubblingOp::normal(ManifoldDesc::lens(2, 1).unwrap()).with_trivial(true));
        s.push(BubblingOp::wedge(
            make_bouquet(&[sphere(1), sphere(3)]).unwrap(),
        ));
        let p = run_script(&s).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: ReebProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);

        let bare: ReebProfile = serde_json::from_str(
            r#"{"ambient":3,"homology":[{"rank":1,"torsion":[]},{"rank":0,"torsion":[2]}]}"#,
        )
        .unwrap();
        assert_eq!(bare.homology().top(), 3);
        assert!(serde_json::from_str::<ReebProfile>(
            r#"{"ambient":1,"homology":[{"rank":1},{"rank":0},{"rank":1}]}"#
        )
        .is_err());
    }

    #[test]
    fn script_json_format() {
        let json = r#"{"ambient":4,"ops":[{"type":"normal","manifold":{"kind":"point"}},{"type":"wedge","summands":[{"kind":"sphere","dim":1},{"kind":"sphere","dim":2}]}]}"#;
        let s: BubblingScript = serde_json::from_str(json).unwrap();
        assert_eq!(s.ops.len(), 2);
        assert_eq!(serde_json::to_string(&s).unwrap(), json);
    }
}
