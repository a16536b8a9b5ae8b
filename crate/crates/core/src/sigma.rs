//! Partitions of the primes and the σ-classifiers built on them.
//!
//! A [`SigmaPartition`] lists finitely many disjoint prime blocks; every
//! unlisted prime forms a singleton block. All predicates take a
//! [`Lattice`] and reduce to order arithmetic plus lattice scans.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::lattice::Lattice;

/// Default bound on the number of complete Hall σ-sets materialized.
pub const DEFAULT_HALL_SET_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigmaError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("group is not σ-soluble")]
    NotSigmaSoluble,
    #[error("section is not a chief factor")]
    NotChiefFactor,
    #[error("more than {cap} complete Hall σ-sets")]
    HallSetCapExceeded { cap: u64 },
    #[error("partition file {path}: {detail}")]
    File { path: PathBuf, detail: String },
}

/// Identifies a block by its least prime. Distinct blocks never share a
/// least prime, so ids are unique per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockId(pub u64);

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ[{}]", self.0)
    }
}

pub type BlockSet = BTreeSet<BlockId>;

/// A partition σ of the primes.
///
/// Listed blocks are finite. Every other prime is a singleton, unless
/// `complement` is set, in which case all primes outside the given set form
/// one infinite block with the given least prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPartition {
    blocks: Vec<BTreeSet<u64>>,
    complement: Option<(BTreeSet<u64>, u64)>,
    label: String,
}

/// On-disk partition description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub blocks: Vec<Vec<u64>>,
}

impl SigmaPartition {
    /// `{{2}, {3}, {5}, ...}`.
    pub fn finest() -> Self {
        SigmaPartition {
            blocks: Vec::new(),
            complement: None,
            label: "finest".into(),
        }
    }

    /// `{π, π'}`.
    pub fn two_block(pi: &[u64]) -> Result<Self, SigmaError> {
        if pi.is_empty() {
            return Err(SigmaError::InvalidPartition("π must be nonempty".into()));
        }
        let mut set = BTreeSet::new();
        for &p in pi {
            if !arith::is_prime(p) {
                return Err(SigmaError::InvalidPartition(format!("{p} is not prime")));
            }
            if !set.insert(p) {
                return Err(SigmaError::InvalidPartition(format!("prime {p} listed twice")));
            }
        }
        let least = (2..).find(|&q| arith::is_prime(q) && !set.contains(&q)).unwrap();
        let label = format!(
            "two-block:{}",
            set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        );
        Ok(SigmaPartition {
            blocks: vec![set.clone()],
            complement: Some((set, least)),
            label,
        })
    }

    /// Explicit blocks; primes not listed are singletons.
    pub fn from_blocks(blocks: Vec<Vec<u64>>) -> Result<Self, SigmaError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for b in blocks {
            if b.is_empty() {
                return Err(SigmaError::InvalidPartition("empty block".into()));
            }
            let mut set = BTreeSet::new();
            for p in b {
                if !arith::is_prime(p) {
                    return Err(SigmaError::InvalidPartition(format!("{p} is not prime")));
                }
                if !seen.insert(p) {
                    return Err(SigmaError::InvalidPartition(format!("prime {p} listed twice")));
                }
                set.insert(p);
            }
            // Singletons are implicit; dropping them keeps equality structural.
            if set.len() > 1 {
                out.push(set);
            }
        }
        out.sort();
        let label = if out.is_empty() {
            "finest".to_string()
        } else {
            format!("blocks:{}", describe_blocks(&out))
        };
        Ok(SigmaPartition {
            blocks: out,
            complement: None,
            label,
        })
    }

    pub fn from_file(file: &PartitionFile) -> Result<Self, SigmaError> {
        Self::from_blocks(file.blocks.clone())
    }

    pub fn load(path: &Path) -> Result<Self, SigmaError> {
        let err = |detail: String| SigmaError::File {
            path: path.to_path_buf(),
            detail,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        let file: PartitionFile = serde_json::from_str(&text).map_err(|e| {
            err(format!(
                "parse error at line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        Self::from_file(&file).map_err(|e| err(e.to_string()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Finite blocks listed explicitly.
    pub fn listed_blocks(&self) -> &[BTreeSet<u64>] {
        &self.blocks
    }

    pub fn block_of(&self, p: u64) -> BlockId {
        if let Some(b) = self.blocks.iter().find(|b| b.contains(&p)) {
            return BlockId(*b.iter().next().unwrap());
        }
        match &self.complement {
            Some((_, least)) => BlockId(*least),
            None => BlockId(p),
        }
    }

    /// `σ(n)`: the blocks meeting `π(n)`.
    pub fn sigma_of(&self, n: u64) -> BlockSet {
        arith::prime_divisors(n)
            .into_iter()
            .map(|p| self.block_of(p))
            .collect()
    }

    /// `|σ(n)| <= 1`.
    pub fn is_primary(&self, n: u64) -> bool {
        self.sigma_of(n).len() <= 1
    }

    /// `σ(n) ⊆ Π`.
    pub fn is_pi_number(&self, n: u64, pi: &BlockSet) -> bool {
        self.sigma_of(n).is_subset(pi)
    }

    /// Largest divisor of `n` that is a Π-number.
    pub fn pi_part(&self, n: u64, pi: &BlockSet) -> u64 {
        arith::part_of(n, |p| pi.contains(&self.block_of(p)))
    }

    pub fn is_sigma_coprime(&self, m: u64, n: u64) -> bool {
        self.sigma_of(m).is_disjoint(&self.sigma_of(n))
    }

    /// Blocks restricted to `primes`, dropping empty ones; sorted.
    pub fn induced_on(&self, primes: &[u64]) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = Vec::new();
        let mut ids: Vec<BlockId> = Vec::new();
        for &p in primes {
            let b = self.block_of(p);
            match ids.iter().position(|&x| x == b) {
                Some(k) => out[k].push(p),
                None => {
                    ids.push(b);
                    out.push(vec![p]);
                }
            }
        }
        for b in &mut out {
            b.sort_unstable();
        }
        out.sort();
        out
    }

    /// Acts as the finest partition on `primes`.
    pub fn is_finest_on(&self, primes: &[u64]) -> bool {
        self.induced_on(primes).iter().all(|b| b.len() == 1)
    }
}

pub(crate) fn describe_blocks(blocks: &[BTreeSet<u64>]) -> String {
    blocks
        .iter()
        .map(|b| {
            format!(
                "{{{}}}",
                b.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect::<Vec<_>>()
        .join("")
}

/// `σ(G)`.
pub fn sigma_of_group(sigma: &SigmaPartition, lat: &Lattice) -> BlockSet {
    sigma.sigma_of(lat.group().order() as u64)
}

pub fn is_sigma_primary(sigma: &SigmaPartition, lat: &Lattice) -> bool {
    sigma.is_primary(lat.group().order() as u64)
}

/// `|σ(G)| = |π(G)|`.
pub fn is_sigma_fiber(sigma: &SigmaPartition, lat: &Lattice) -> bool {
    sigma_of_group(sigma, lat).len() == lat.group().primes().len()
}

/// All Hall Π-subgroups: `|H|` a Π-number and `|G:H|` a Π'-number.
pub fn hall_subgroups(lat: &Lattice, pi: &BlockSet, sigma: &SigmaPartition) -> Vec<usize> {
    let target = sigma.pi_part(lat.group().order() as u64, pi) as usize;
    (0..lat.len()).filter(|&i| lat.order(i) == target).collect()
}

/// For each block of `σ(G)` in ascending order, its Hall subgroups.
pub fn hall_choices(lat: &Lattice, sigma: &SigmaPartition) -> Vec<(BlockId, Vec<usize>)> {
    sigma_of_group(sigma, lat)
        .into_iter()
        .map(|b| (b, hall_subgroups(lat, &BlockSet::from([b]), sigma)))
        .collect()
}

/// Every complete Hall σ-set, as one lattice index per block of `σ(G)`.
/// Trivial members are omitted. Empty when some block has no Hall subgroup.
pub fn complete_hall_sigma_sets(
    lat: &Lattice,
    sigma: &SigmaPartition,
    cap: u64,
) -> Result<Vec<Vec<usize>>, SigmaError> {
    let choices = hall_choices(lat, sigma);
    let total = choices
        .iter()
        .fold(1u128, |acc, (_, v)| acc.saturating_mul(v.len() as u128));
    if total > cap as u128 {
        return Err(SigmaError::HallSetCapExceeded { cap });
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for (_, options) in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

/// Complete Hall σ-sets whose members pairwise permute.
pub fn sigma_basis_sets(
    lat: &Lattice,
    sigma: &SigmaPartition,
    cap: u64,
) -> Result<Vec<Vec<usize>>, SigmaError> {
    let slots: Vec<Vec<usize>> = hall_choices(lat, sigma).into_iter().map(|(_, v)| v).collect();
    let mut out = Vec::new();
    lat.basis_search(&slots, &mut Vec::new(), &mut out, Some(cap))
        .map_err(|_| SigmaError::HallSetCapExceeded { cap })?;
    Ok(out)
}

/// Whether subgroup `i` is σ-nilpotent: for every block, the elements of
/// that block's order generate a subgroup of full block order.
pub fn is_sigma_nilpotent_subgroup(lat: &Lattice, sigma: &SigmaPartition, i: usize) -> bool {
    section_is_sigma_nilpotent(lat, sigma, i, 0)
}

/// Whether the section `upper/lower` is σ-nilpotent (`lower` normal in `upper`).
pub fn section_is_sigma_nilpotent(lat: &Lattice, sigma: &SigmaPartition, upper: usize, lower: usize) -> bool {
    lat.group()
        .section_is_decomposable(lat.subgroup(upper), lat.subgroup(lower), &|p| sigma.block_of(p).0)
}

pub fn is_sigma_nilpotent(lat: &Lattice, sigma: &SigmaPartition) -> bool {
    is_sigma_nilpotent_subgroup(lat, sigma, lat.top())
}

/// Cross-check form: each block of `σ(G)` has exactly one Hall subgroup,
/// and it is normal.
pub fn is_sigma_nilpotent_by_hall(lat: &Lattice, sigma: &SigmaPartition) -> bool {
    hall_choices(lat, sigma)
        .iter()
        .all(|(_, v)| v.len() == 1 && lat.is_normal(v[0]))
}

/// Every chief factor has σ-primary order.
pub fn is_sigma_soluble(lat: &Lattice, sigma: &SigmaPartition) -> bool {
    match lat.chief_series() {
        Ok(cs) => cs.factor_orders.iter().all(|&f| sigma.is_primary(f as u64)),
        Err(_) => true,
    }
}

/// `(H/K) ⋊ (G/C_G(H/K))` is σ-primary, decided from its order.
pub fn is_sigma_central(
    lat: &Lattice,
    sigma: &SigmaPartition,
    upper: usize,
    lower: usize,
) -> Result<bool, SigmaError> {
    if !lat.is_chief_factor(upper, lower) {
        return Err(SigmaError::NotChiefFactor);
    }
    let g = lat.group();
    let c = g
        .centralizer_of_section(lat.subgroup(upper), lat.subgroup(lower))
        .map_err(|_| SigmaError::NotChiefFactor)?;
    let n = (lat.order(upper) / lat.order(lower)) as u64 * (g.order() / c.order()) as u64;
    Ok(sigma.is_primary(n))
}

/// `O_Π(G)`: the join of all normal Π-subgroups.
pub fn o_pi(lat: &Lattice, pi: &BlockSet, sigma: &SigmaPartition) -> usize {
    lat.normal_subgroups()
        .into_iter()
        .filter(|&i| sigma.is_pi_number(lat.order(i) as u64, pi))
        .fold(0, |acc, i| lat.join(acc, i))
}

/// `O^{σ_i}(G)`: the smallest normal subgroup with σ_i-quotient.
pub fn o_upper(lat: &Lattice, block: BlockId, sigma: &SigmaPartition) -> usize {
    let n = lat.group().order();
    let only = BlockSet::from([block]);
    lat.normal_subgroups()
        .into_iter()
        .filter(|&i| sigma.is_pi_number((n / lat.order(i)) as u64, &only))
        .fold(lat.top(), |acc, i| lat.meet(acc, i))
}

/// `O_Π(G)` is a Hall Π-subgroup.
pub fn is_pi_closed(lat: &Lattice, pi: &BlockSet, sigma: &SigmaPartition) -> bool {
    let o = o_pi(lat, pi, sigma);
    lat.order(o) as u64 == sigma.pi_part(lat.group().order() as u64, pi)
}

/// Subgroup `i` has a normal Hall Π-subgroup, i.e. its Π-elements generate
/// a subgroup of order `|S_i|_Π`.
pub fn is_pi_closed_subgroup(lat: &Lattice, i: usize, pi: &BlockSet, sigma: &SigmaPartition) -> bool {
    let g = lat.group();
    let s = lat.subgroup(i);
    let part = sigma.pi_part(s.order() as u64, pi);
    let span = g.generate(s.iter().filter(|&x| g.pow(x, part) == 0));
    span.order() as u64 == part
}

/// Largest normal subgroup `N ≥ K` of `G` with `N/K` σ-nilpotent, i.e. the
/// preimage of `F_σ(G/K)`. `lower` must be normal in `G`.
pub fn f_sigma_over(lat: &Lattice, sigma: &SigmaPartition, lower: usize) -> usize {
    lat.normal_subgroups()
        .into_iter()
        .filter(|&i| lat.contains(i, lower) && section_is_sigma_nilpotent(lat, sigma, i, lower))
        .fold(lower, |acc, i| lat.join(acc, i))
}

/// `F_σ(G)`: the product of all normal σ-nilpotent subgroups.
pub fn f_sigma(lat: &Lattice, sigma: &SigmaPartition) -> usize {
    f_sigma_over(lat, sigma, 0)
}

/// `1 = F_0 ≤ F_1 ≤ ... ≤ F_l = G` with `F_{i+1}/F_i = F_σ(G/F_i)`.
pub fn upper_sigma_series(lat: &Lattice, sigma: &SigmaPartition) -> Result<Vec<usize>, SigmaError> {
    let mut series = vec![0];
    let mut cur = 0;
    while cur != lat.top() {
        let next = f_sigma_over(lat, sigma, cur);
        if next == cur {
            return Err(SigmaError::NotSigmaSoluble);
        }
        series.push(next);
        cur = next;
    }
    Ok(series)
}

/// σ-nilpotent length.
pub fn l_sigma(lat: &Lattice, sigma: &SigmaPartition) -> Result<usize, SigmaError> {
    if !is_sigma_soluble(lat, sigma) {
        return Err(SigmaError::NotSigmaSoluble);
    }
    Ok(upper_sigma_series(lat, sigma)?.len() - 1)
}

/// `G^{𝔑_σ}`: the intersection of the normal subgroups with σ-nilpotent quotient.
pub fn sigma_residual(lat: &Lattice, sigma: &SigmaPartition) -> usize {
    lat.normal_subgroups()
        .into_iter()
        .filter(|&i| section_is_sigma_nilpotent(lat, sigma, lat.top(), i))
        .fold(lat.top(), |acc, i| lat.meet(acc, i))
}
