use serde::{Deserialize, Serialize};

use crate::catalog::duality_holds;
use crate::engine::ReebProfile;
use crate::error::{Error, Result};
use crate::pid_algebra::{FGModule, GradedModule, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingStatus {
    Pass,
    Fail,
    /// The condition only holds for histories made of normal ops.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub condition: String,
    pub status: FindingStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub findings: Vec<Finding>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.findings
            .iter()
            .all(|f| f.status != FindingStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.status == FindingStatus::Fail)
    }
}

/// Necessary conditions on any profile reachable by normal bubbling:
/// `H_0 = Z`, `H_n` free, the lowest nonzero positive degree below `n` free
/// with rank at most `rank H_n`, and `H_{n-1}` free.
///
/// The last two are only asserted when the history has no bouquet ops;
/// hand-built profiles (empty history) are checked in full.
pub fn verify_necessary_conditions(p: &ReebProfile) -> ConditionReport {
    let n = p.ambient();
    let h = p.homology();
    let normal_only = p.history().ops.iter().all(|op| op.is_normal());
    let mut findings = Vec::new();
    let push = |findings: &mut Vec<Finding>, condition: &str, ok: bool, detail: String| {
        let status = if ok {
            FindingStatus::Pass
        } else {
            FindingStatus::Fail
        };
        findings.push(Finding {
            condition: condition.into(),
            status,
            detail,
        });
    };

    let h0 = h.get(0);
    push(
        &mut findings,
        "H_0 = Z",
        h0 == FGModule::free(Ring::Integers, 1),
        format!("H_0 = {h0}"),
    );
    let hn = h.get(n as i64);
    push(
        &mut findings,
        "H_n is free",
        hn.is_free(),
        format!("H_{n} = {hn}"),
    );

    let first = (1..n).find(|&k| !h.get(k as i64).is_zero());
    let skip = |condition: &str| Finding {
        condition: condition.into(),
        status: FindingStatus::NotApplicable,
        detail: "history contains bouquet ops".into(),
    };
    match first {
        Some(k) if normal_only => {
            let hk = h.get(k as i64);
            push(
                &mut findings,
                "first nonzero H_k is free",
                hk.is_free(),
                format!("H_{k} = {hk}"),
            );
            push(
                &mut findings,
                "rank H_k <= rank H_n",
                hk.rank() <= hn.rank(),
                format!("{} <= {}", hk.rank(), hn.rank()),
            );
        }
        Some(_) => {
            findings.push(skip("first nonzero H_k is free"));
            findings.push(skip("rank H_k <= rank H_n"));
        }
        None => {}
    }
    if n >= 1 && normal_only {
        let h = h.get(n as i64 - 1);
        push(
            &mut findings,
            "H_{n-1} is free",
            h.is_free(),
            format!("H_{} = {h}", n - 1),
        );
    } else {
        findings.push(skip("H_{n-1} is free"));
    }
    ConditionReport { findings }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Below,
    Above,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "below" => Ok(Direction::Below),
            "above" => Ok(Direction::Above),
            other => Err(Error::Parse(format!(
                "direction must be below or above, got {other:?}"
            ))),
        }
    }
}

/// A finite nontrivial degree and the offset to the nearest degree of
/// positive rank within reach, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionWitness {
    pub degree: usize,
    pub offset: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionGapReport {
    pub holds: bool,
    pub witnesses: Vec<TorsionWitness>,
    pub longest_run: usize,
}

/// Every finite nontrivial `H_j` has some `H_{j∓a}` of positive rank with
/// `1 <= a <= i0`. When that holds, runs of consecutive finite nontrivial
/// degrees are at most `i0` long.
pub fn check_torsion_gap(
    p: &ReebProfile,
    i0: usize,
    direction: Direction,
) -> Result<TorsionGapReport> {
    if i0 < 1 {
        return Err(Error::validation("i0 must be >= 1"));
    }
    let h = p.homology();
    let top = h.top();
    let finite: Vec<bool> = h
        .degrees()
        .iter()
        .map(FGModule::is_finite_nontrivial)
        .collect();
    let witnesses: Vec<TorsionWitness> = (0..=top)
        .filter(|&j| finite[j])
        .map(|j| {
            let offset = (1..=i0).find(|&a| {
                let target = match direction {
                    Direction::Below => j.checked_sub(a),
                    Direction::Above => Some(j + a).filter(|&t| t <= top),
                };
                target.is_some_and(|t| h.rank(t as i64) > 0)
            });
            TorsionWitness { degree: j, offset }
        })
        .collect();
    let mut longest_run = 0;
    let mut run = 0;
    for &f in &finite {
        run = if f { run + 1 } else { 0 };
        longest_run = longest_run.max(run);
    }
    let holds = witnesses.iter().all(|w| w.offset.is_some());
    debug_assert!(!holds || longest_run <= i0);
    Ok(TorsionGapReport {
        holds,
        witnesses,
        longest_run,
    })
}

/// Outcome for one candidate generating dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionVerdict {
    pub dim: usize,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required: Option<GradedModule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub ambient: usize,
    pub verdicts: Vec<DimensionVerdict>,
}

impl FeasibilityReport {
    pub fn feasible_dims(&self) -> Vec<usize> {
        self.verdicts
            .iter()
            .filter(|v| v.feasible)
            .map(|v| v.dim)
            .collect()
    }
}

/// With `rank H_n = 1` exactly one normal op can have happened. For each
/// generating dimension `k < n`, reads off the homology `S` would need
/// (`H_j(S) = H_{j+n-k}`) and tests the duality necessary conditions.
/// Passing does not mean such an `S` exists.
pub fn single_op_feasibility(n: usize, target: &GradedModule) -> Result<FeasibilityReport> {
    if n < 1 {
        return Err(Error::validation("ambient dimension must be >= 1"));
    }
    if target.ring() != Ring::Integers {
        return Err(Error::validation(
            "feasibility is decided on integral homology",
        ));
    }
    if target.trimmed().top() > n {
        return Err(Error::validation(format!(
            "target is nonzero above degree {n}"
        )));
    }
    let z = FGModule::free(Ring::Integers, 1);
    if target.get(0) != z {
        return Err(Error::OutOfScope(format!(
            "needs H_0 = Z, got {}",
            target.get(0)
        )));
    }
    if target.get(n as i64) != z {
        return Err(Error::OutOfScope(format!(
            "a single normal op needs H_n = Z, got {}",
            target.get(n as i64)
        )));
    }

    let verdicts = (0..n)
        .map(|k| {
            let shift = n - k;
            let reject = |reason: String, required: Option<GradedModule>| DimensionVerdict {
                dim: k,
                feasible: false,
                required,
                reason: Some(reason),
            };
            if let Some(i) = (1..shift).find(|&i| !target.get(i as i64).is_zero()) {
                return reject(format!("H_{i} must vanish below degree {shift}"), None);
            }
            let degrees = (0..=k).map(|j| target.get((j + shift) as i64)).collect();
            let required = GradedModule::new(Ring::Integers, degrees).expect("nonempty");
            if required.get(0) != z {
                return reject(
                    format!("would need H_0(S) = {}, not Z", required.get(0)),
                    Some(required),
                );
            }
            if !duality_holds(&required, k) {
                let bad = (0..=k as i64)
                    .find(|&i| {
                        required.rank(i) != required.rank(k as i64 - i)
                            || required.get(i).torsion() != required.get(k as i64 - i - 1).torsion()
                    })
                    .unwrap_or(0);
                return reject(
                    format!(
                        "duality fails at degree {bad}: H_{bad}(S) = {} against H_{}(S) = {}",
                        required.get(bad),
                        k as i64 - bad,
                        required.get(k as i64 - bad)
                    ),
                    Some(required),
                );
            }
            DimensionVerdict {
                dim: k,
                feasible: true,
                required: Some(required),
                reason: None,
            }
        })
        .collect();
    Ok(FeasibilityReport {
        ambient: n,
        verdicts,
    })
}
