use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime number, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::validation(format!("{p} is not a prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient rings supported by the module layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(Prime),
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Self> {
        Prime::new(p).map(Ring::PrimeField)
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F{}", p.get()),
        }
    }
}

/// Finitely generated module over a supported PID: free rank plus the
/// invariant-factor chain `d_1 | d_2 | ... | d_t` with every `d_i >= 2`.
///
/// The chain is canonical, so structural equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ModuleRepr", try_from = "ModuleInput")]
pub struct FGModule {
    ring: Ring,
    rank: usize,
    torsion: Vec<u64>,
}

/// Accepted on input: `{"rank": r, "torsion": [...]}` or text such as `"Z^2 + Z/3"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ModuleInput {
    Parts(ModuleRepr),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleRepr {
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl From<FGModule> for ModuleRepr {
    fn from(m: FGModule) -> Self {
        ModuleRepr {
            rank: m.rank,
            torsion: m.torsion,
        }
    }
}

impl TryFrom<ModuleInput> for FGModule {
    type Error = Error;

    fn try_from(input: ModuleInput) -> Result<Self> {
        match input {
            ModuleInput::Parts(r) => r.try_into(),
            ModuleInput::Text(t) => t.parse(),
        }
    }
}

impl TryFrom<ModuleRepr> for FGModule {
    type Error = Error;

    fn try_from(r: ModuleRepr) -> Result<Self> {
        let divisors = r
            .torsion
            .iter()
            .map(|&d| i64::try_from(d).map_err(|_| Error::validation("divisor out of range")))
            .collect::<Result<Vec<_>>>()?;
        FGModule::normalize(Ring::Integers, r.rank as i64, &divisors)
    }
}

impl FGModule {
    /// Builds the canonical module `R^rank ⊕ ⊕ R/d` from divisors in any order.
    ///
    /// Over a field the torsion summands are dropped.
    pub fn normalize(ring: Ring, rank: i64, divisors: &[i64]) -> Result<Self> {
        if rank < 0 {
            return Err(Error::validation(format!("negative rank {rank}")));
        }
        if let Some(d) = divisors.iter().find(|&&d| d < 2) {
            return Err(Error::validation(format!("divisor {d} is smaller than 2")));
        }
        let torsion = if ring.is_field() {
            Vec::new()
        } else {
            invariant_factors(divisors.iter().map(|&d| d as u64))?
        };
        Ok(FGModule {
            ring,
            rank: rank as usize,
            torsion,
        })
    }

    pub fn zero(ring: Ring) -> Self {
        FGModule {
            ring,
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        FGModule {
            ring,
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z^rank ⊕ torsion` over the integers.
    pub fn integral(rank: usize, divisors: &[u64]) -> Result<Self> {
        if let Some(d) = divisors.iter().find(|&&d| d < 2) {
            return Err(Error::validation(format!("divisor {d} is smaller than 2")));
        }
        Ok(FGModule {
            ring: Ring::Integers,
            rank,
            torsion: invariant_factors(divisors.iter().copied())?,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Nonzero with no free part.
    pub fn is_finite_nontrivial(&self) -> bool {
        self.rank == 0 && !self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Option<u64> {
        self.torsion
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn free_part(&self) -> FGModule {
        FGModule::free(self.ring, self.rank)
    }

    pub fn torsion_part(&self) -> FGModule {
        FGModule {
            ring: self.ring,
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    fn same_ring(&self, other: &FGModule) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "ring mismatch: {} vs {}",
                self.ring, other.ring
            )))
        }
    }

    pub fn direct_sum(&self, other: &FGModule) -> Result<FGModule> {
        self.same_ring(other)?;
        let torsion = if self.torsion.is_empty() {
            other.torsion.clone()
        } else if other.torsion.is_empty() {
            self.torsion.clone()
        } else {
            invariant_factors(self.torsion.iter().chain(&other.torsion).copied())?
        };
        Ok(FGModule {
            ring: self.ring,
            rank: self.rank + other.rank,
            torsion,
        })
    }

    /// `self^k`, the direct sum of `k` copies.
    pub fn power(&self, k: usize) -> Result<FGModule> {
        let mut divisors = Vec::with_capacity(self.torsion.len() * k);
        for _ in 0..k {
            divisors.extend_from_slice(&self.torsion);
        }
        Ok(FGModule {
            ring: self.ring,
            rank: self.rank * k,
            torsion: invariant_factors(divisors)?,
        })
    }

    fn require_integers(&self, other: &FGModule, op: &str) -> Result<()> {
        if self.ring != Ring::Integers || other.ring != Ring::Integers {
            return Err(Error::UnsupportedRing(format!(
                "{op} is only implemented over Z (got {} and {})",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    /// `self ⊗_Z other`.
    pub fn tensor_product(&self, other: &FGModule) -> Result<FGModule> {
        self.require_integers(other, "tensor product")?;
        let rank = self.rank * other.rank;
        let mut divisors = Vec::new();
        for _ in 0..self.rank {
            divisors.extend_from_slice(&other.torsion);
        }
        for _ in 0..other.rank {
            divisors.extend_from_slice(&self.torsion);
        }
        for &a in &self.torsion {
            for &b in &other.torsion {
                divisors.push(a.gcd(&b));
            }
        }
        Ok(FGModule {
            ring: Ring::Integers,
            rank,
            torsion: invariant_factors(divisors.into_iter().filter(|&d| d > 1))?,
        })
    }

    /// `Tor_1^Z(self, other)`.
    pub fn torsion_product(&self, other: &FGModule) -> Result<FGModule> {
        self.require_integers(other, "Tor")?;
        let mut divisors = Vec::new();
        for &a in &self.torsion {
            for &b in &other.torsion {
                divisors.push(a.gcd(&b));
            }
        }
        Ok(FGModule {
            ring: Ring::Integers,
            rank: 0,
            torsion: invariant_factors(divisors.into_iter().filter(|&d| d > 1))?,
        })
    }

    pub fn is_isomorphic(&self, other: &FGModule) -> Result<bool> {
        self.same_ring(other)?;
        Ok(self == other)
    }

    /// Number of invariant factors divisible by `p`, i.e. the dimension of
    /// `self ⊗ F_p` contributed by torsion.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        self.torsion.iter().filter(|&&d| d % p == 0).count()
    }
}

/// Primary decomposition followed by recombination into an ascending
/// divisibility chain.
pub(crate) fn invariant_factors(divisors: impl IntoIterator<Item = u64>) -> Result<Vec<u64>> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for d in divisors {
        for (p, power) in prime_powers(d) {
            by_prime.entry(p).or_default().push(power);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        // largest powers go to the last (largest) invariant factor
        for (slot, &q) in chain.iter_mut().rev().zip(powers.iter()) {
            *slot = slot
                .checked_mul(q)
                .ok_or_else(|| Error::validation("invariant factor exceeds u64"))?;
        }
    }
    Ok(chain)
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Degree-indexed family `M_0, ..., M_top` over a common ring; degrees
/// outside `0..=top` are implicitly zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<FGModule>", try_from = "Vec<FGModule>")]
pub struct GradedModule {
    ring: Ring,
    degrees: Vec<FGModule>,
}

impl From<GradedModule> for Vec<FGModule> {
    fn from(g: GradedModule) -> Self {
        g.degrees
    }
}

impl TryFrom<Vec<FGModule>> for GradedModule {
    type Error = Error;

    fn try_from(degrees: Vec<FGModule>) -> Result<Self> {
        GradedModule::new(Ring::Integers, degrees)
    }
}

impl GradedModule {
    pub fn new(ring: Ring, degrees: Vec<FGModule>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::validation("graded module needs at least degree 0"));
        }
        if let Some(m) = degrees.iter().find(|m| m.ring != ring) {
            return Err(Error::validation(format!(
                "graded module over {ring} has an entry over {}",
                m.ring
            )));
        }
        Ok(GradedModule { ring, degrees })
    }

    /// Integral graded module from `(rank, torsion)` pairs.
    pub fn integral(entries: &[(usize, &[u64])]) -> Result<Self> {
        let degrees = entries
            .iter()
            .map(|&(r, t)| FGModule::integral(r, t))
            .collect::<Result<Vec<_>>>()?;
        GradedModule::new(Ring::Integers, degrees)
    }

    /// Free integral graded module with the given ranks.
    pub fn free(ring: Ring, ranks: &[usize]) -> Result<Self> {
        GradedModule::new(
            ring,
            ranks.iter().map(|&r| FGModule::free(ring, r)).collect(),
        )
    }

    pub fn zero(ring: Ring, top: usize) -> Self {
        GradedModule {
            ring,
            degrees: vec![FGModule::zero(ring); top + 1],
        }
    }

    /// `R` in degree 0.
    pub fn point(ring: Ring) -> Self {
        GradedModule {
            ring,
            degrees: vec![FGModule::free(ring, 1)],
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn top(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degrees(&self) -> &[FGModule] {
        &self.degrees
    }

    /// `M_i`, zero for negative or out-of-range `i`.
    pub fn get(&self, i: i64) -> FGModule {
        if i < 0 {
            return FGModule::zero(self.ring);
        }
        self.degrees
            .get(i as usize)
            .cloned()
            .unwrap_or_else(|| FGModule::zero(self.ring))
    }

    pub fn rank(&self, i: i64) -> usize {
        self.get(i).rank
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(FGModule::rank).collect()
    }

    /// Same degrees, padded with zeros or truncated to `top`.
    pub fn with_top(&self, top: usize) -> GradedModule {
        let degrees = (0..=top).map(|i| self.get(i as i64)).collect();
        GradedModule {
            ring: self.ring,
            degrees,
        }
    }

    /// Drops trailing zero degrees above 0.
    pub fn trimmed(&self) -> GradedModule {
        let mut degrees = self.degrees.clone();
        while degrees.len() > 1 && degrees.last().is_some_and(FGModule::is_zero) {
            degrees.pop();
        }
        GradedModule {
            ring: self.ring,
            degrees,
        }
    }

    /// Adds `m` into degree `i`, extending the top if needed.
    pub fn add_at(&mut self, i: usize, m: &FGModule) -> Result<()> {
        if i >= self.degrees.len() {
            self.degrees.resize(i + 1, FGModule::zero(self.ring));
        }
        self.degrees[i] = self.degrees[i].direct_sum(m)?;
        Ok(())
    }

    /// Degreewise direct sum; the top is the larger of the two.
    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        if self.ring != other.ring {
            return Err(Error::validation("ring mismatch in graded direct sum"));
        }
        let top = self.top().max(other.top());
        let degrees = (0..=top as i64)
            .map(|i| self.get(i).direct_sum(&other.get(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedModule {
            ring: self.ring,
            degrees,
        })
    }

    /// `M_{i - shift}` placed in degree `i`.
    pub fn shifted(&self, shift: usize) -> GradedModule {
        let mut degrees = vec![FGModule::zero(self.ring); shift];
        degrees.extend(self.degrees.iter().cloned());
        GradedModule {
            ring: self.ring,
            degrees,
        }
    }

    /// Reduced version: degree 0 loses one free summand.
    pub fn reduced(&self) -> GradedModule {
        let mut g = self.clone();
        if g.degrees[0].rank > 0 {
            g.degrees[0].rank -= 1;
        }
        g
    }

    /// Degreewise isomorphism, treating missing degrees as zero.
    pub fn is_isomorphic(&self, other: &GradedModule) -> bool {
        self.ring == other.ring
            && (0..=self.top().max(other.top()) as i64).all(|i| self.get(i) == other.get(i))
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if i % 2 == 0 {
                    m.rank as i64
                } else {
                    -(m.rank as i64)
                }
            })
            .sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(FGModule::is_free)
    }
}
