//! σ-subnormality, σ-quasinormality and the chain invariants m_σ, m_σq, h_σ.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::Lattice;
use crate::sigma::{hall_choices, BlockId, SigmaPartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubnormalityError {
    #[error("subgroup is not contained in the ambient subgroup")]
    NotContained,
    #[error("operation undefined for the trivial group")]
    TrivialGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    Normal,
    SigmaPrimaryQuotient(BlockId),
}

/// `chain[0]` is the ambient subgroup, `chain.last()` the subgroup tested;
/// `steps[i]` justifies `chain[i + 1] < chain[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    pub chain: Vec<usize>,
    pub steps: Vec<StepKind>,
}

impl ChainWitness {
    /// Recheck every step from scratch.
    pub fn validate(&self, lat: &Lattice, sigma: &SigmaPartition) -> bool {
        if self.chain.is_empty() || self.steps.len() + 1 != self.chain.len() {
            return false;
        }
        self.chain.windows(2).zip(&self.steps).all(|(w, kind)| {
            let (upper, lower) = (w[0], w[1]);
            if upper == lower || !lat.contains(upper, lower) {
                return false;
            }
            match kind {
                StepKind::Normal => lat.is_normal_in(lower, upper),
                StepKind::SigmaPrimaryQuotient(b) => {
                    let core = lat.core_in(lower, upper).expect("contained");
                    let idx = (lat.order(upper) / lat.order(core)) as u64;
                    sigma.sigma_of(idx).into_iter().eq([*b])
                }
            }
        })
    }
}

/// Step `lower < upper` as allowed in a σ-subnormal chain, if it qualifies.
pub fn step_kind(lat: &Lattice, sigma: &SigmaPartition, lower: usize, upper: usize) -> Option<StepKind> {
    if lower == upper || !lat.contains(upper, lower) {
        return None;
    }
    if lat.is_normal_in(lower, upper) {
        return Some(StepKind::Normal);
    }
    let core = lat.core_in(lower, upper).expect("contained");
    let blocks = sigma.sigma_of((lat.order(upper) / lat.order(core)) as u64);
    match blocks.len() {
        1 => Some(StepKind::SigmaPrimaryQuotient(*blocks.iter().next().unwrap())),
        _ => None,
    }
}

struct Reach {
    set: FixedBitSet,
    via: Vec<u32>,
}

/// Outcome of a σ-quasinormality test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasinormalOutcome {
    pub holds: bool,
    /// One Hall subgroup per block of `σ(G)` whose whole conjugacy class
    /// permutes with the subgroup.
    pub witness: Option<Vec<usize>>,
    /// Some block of `σ(G)` has no Hall subgroup at all.
    pub no_complete_hall_set: bool,
}

/// The chain invariants of one `(G, σ)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalityInvariants {
    pub m_sigma: usize,
    pub m_sigma_q: usize,
    /// `None` for the trivial group.
    pub spencer_height: Option<usize>,
    /// Whether the Spencer predicate stayed true from its first success up
    /// to one past the lattice height.
    pub monotonicity_flag: bool,
    pub m_sigma_monotone: bool,
    pub m_sigma_q_monotone: bool,
}

/// Analysis state for one `(G, σ)` pair. Memo tables live here and are not
/// shared across sessions.
pub struct SigmaSession<'a> {
    lat: &'a Lattice,
    sigma: &'a SigmaPartition,
    reach: Vec<Option<Reach>>,
    quasi: Vec<Option<QuasinormalOutcome>>,
    hall: Option<Vec<(BlockId, Vec<usize>)>>,
}

impl<'a> SigmaSession<'a> {
    pub fn new(lat: &'a Lattice, sigma: &'a SigmaPartition) -> Self {
        SigmaSession {
            lat,
            sigma,
            reach: (0..lat.len()).map(|_| None).collect(),
            quasi: vec![None; lat.len()],
            hall: None,
        }
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lat
    }

    pub fn sigma(&self) -> &'a SigmaPartition {
        self.sigma
    }

    fn ensure_reach(&mut self, b: usize) {
        if self.reach[b].is_some() {
            return;
        }
        let lat = self.lat;
        let mut set = FixedBitSet::with_capacity(lat.len());
        let mut via = vec![u32::MAX; lat.len()];
        set.insert(b);
        let lower: Vec<usize> = lat.below(b).filter(|&c| c != b).collect();
        // Larger intermediate subgroups first gives shorter witnesses.
        for &c in lower.iter().rev() {
            if step_kind(lat, self.sigma, c, b).is_none() {
                continue;
            }
            self.ensure_reach(c);
            let rc = self.reach[c].as_ref().unwrap();
            for a in rc.set.ones() {
                if !set.contains(a) {
                    set.insert(a);
                    via[a] = c as u32;
                }
            }
        }
        self.reach[b] = Some(Reach { set, via });
    }

    /// Whether `a` is σ-subnormal in `b`.
    pub fn is_sigma_subnormal_in(&mut self, a: usize, b: usize) -> Result<bool, SubnormalityError> {
        if !self.lat.contains(b, a) {
            return Err(SubnormalityError::NotContained);
        }
        self.ensure_reach(b);
        Ok(self.reach[b].as_ref().unwrap().set.contains(a))
    }

    pub fn is_sigma_subnormal(&mut self, a: usize) -> bool {
        let top = self.lat.top();
        self.is_sigma_subnormal_in(a, top).expect("everything lies in G")
    }

    /// A qualifying chain from `b` down to `a`, if one exists.
    pub fn witness_in(&mut self, a: usize, b: usize) -> Result<Option<ChainWitness>, SubnormalityError> {
        if !self.is_sigma_subnormal_in(a, b)? {
            return Ok(None);
        }
        let mut chain = vec![b];
        let mut steps = Vec::new();
        let mut cur = b;
        while cur != a {
            self.ensure_reach(cur);
            let next = self.reach[cur].as_ref().unwrap().via[a] as usize;
            steps.push(step_kind(self.lat, self.sigma, next, cur).expect("recorded step qualifies"));
            chain.push(next);
            cur = next;
        }
        Ok(Some(ChainWitness { chain, steps }))
    }

    pub fn witness(&mut self, a: usize) -> Option<ChainWitness> {
        let top = self.lat.top();
        self.witness_in(a, top).expect("everything lies in G")
    }

    /// All σ-subnormal subgroups of `G`, ascending.
    pub fn sigma_subnormal_set(&mut self) -> Vec<usize> {
        let top = self.lat.top();
        self.ensure_reach(top);
        self.reach[top].as_ref().unwrap().set.ones().collect()
    }

    fn hall(&mut self) -> &[(BlockId, Vec<usize>)] {
        if self.hall.is_none() {
            self.hall = Some(hall_choices(self.lat, self.sigma));
        }
        self.hall.as_deref().unwrap()
    }

    /// `H` permutes with every conjugate of every member of some complete
    /// Hall σ-set. Decided block by block: the condition on a member only
    /// involves its own conjugacy class.
    pub fn is_sigma_quasinormal(&mut self, h: usize) -> QuasinormalOutcome {
        if let Some(q) = &self.quasi[h] {
            return q.clone();
        }
        let lat = self.lat;
        let choices = self.hall().to_vec();
        let no_set = choices.iter().any(|(_, v)| v.is_empty());
        let mut witness = Some(Vec::new());
        if no_set {
            witness = None;
        } else {
            for (_, options) in &choices {
                let pick = options
                    .iter()
                    .copied()
                    .find(|&a| lat.class_of(a).iter().all(|&c| lat.permutes(h, c)));
                match (pick, witness.as_mut()) {
                    (Some(a), Some(w)) => w.push(a),
                    _ => {
                        witness = None;
                        break;
                    }
                }
            }
        }
        let out = QuasinormalOutcome {
            holds: witness.is_some(),
            witness,
            no_complete_hall_set: no_set,
        };
        self.quasi[h] = Some(out.clone());
        out
    }

    /// `P(n)` for `n = 1..=height+1`, least `n` where it holds, and whether
    /// it stays true afterwards.
    fn least_level(&mut self, mut pred: impl FnMut(&mut Self, usize) -> bool) -> (usize, bool) {
        let lat = self.lat;
        let height = lat.height();
        let levels: Vec<bool> = (1..=height + 1)
            .map(|n| lat.n_maximal_subgroups(n).into_iter().all(|s| pred(self, s)))
            .collect();
        let first = levels
            .iter()
            .position(|&b| b)
            .expect("past the height is vacuous");
        (first + 1, levels[first..].iter().all(|&b| b))
    }

    /// Least `n` such that every `n`-maximal subgroup is σ-subnormal, and
    /// whether the property persists for larger `n`.
    pub fn m_sigma_detail(&mut self) -> (usize, bool) {
        self.least_level(|s, i| s.is_sigma_subnormal(i))
    }

    pub fn m_sigma(&mut self) -> usize {
        self.m_sigma_detail().0
    }

    pub fn m_sigma_q_detail(&mut self) -> (usize, bool) {
        self.least_level(|s, i| s.is_sigma_quasinormal(i).holds)
    }

    pub fn m_sigma_q(&mut self) -> usize {
        self.m_sigma_q_detail().0
    }

    /// Subgroups ending a length-`n` maximal chain none of whose proper
    /// entries is σ-subnormal, for `n = 0..=height+1`.
    fn free_levels(&mut self) -> Vec<Vec<usize>> {
        let lat = self.lat;
        let mut levels = vec![vec![lat.top()]];
        for _ in 0..=lat.height() {
            let prev = levels.last().unwrap();
            let mut next = FixedBitSet::with_capacity(lat.len());
            for &i in prev {
                next.extend(lat.maximal_subgroups(i).iter().copied());
            }
            let next: Vec<usize> = next.ones().filter(|&j| !self.is_sigma_subnormal(j)).collect();
            levels.push(next);
        }
        levels
    }

    /// Least `n` such that every maximal chain of length `n` has a proper
    /// σ-subnormal entry, with the monotonicity flag.
    pub fn spencer_height(&mut self) -> Result<(usize, bool), SubnormalityError> {
        if self.lat.order(self.lat.top()) == 1 {
            return Err(SubnormalityError::TrivialGroup);
        }
        let f: Vec<bool> = self.free_levels().iter().skip(1).map(|l| l.is_empty()).collect();
        let first = f.iter().position(|&b| b).expect("chains end by the height");
        Ok((first + 1, f[first..].iter().all(|&b| b)))
    }

    /// A maximal chain of length `h_σ - 1` with no proper σ-subnormal entry.
    pub fn free_chain(&mut self) -> Result<Vec<usize>, SubnormalityError> {
        let (h, _) = self.spencer_height()?;
        let lat = self.lat;
        let levels = self.free_levels();
        let mut chain = vec![*levels[h - 1].first().expect("level before h is nonempty")];
        for k in (0..h - 1).rev() {
            let cur = *chain.last().unwrap();
            let parent = levels[k]
                .iter()
                .copied()
                .find(|&p| lat.maximal_subgroups(p).contains(&cur))
                .expect("free entries descend from free entries");
            chain.push(parent);
        }
        chain.reverse();
        Ok(chain)
    }

    pub fn invariants(&mut self) -> MaximalityInvariants {
        let (m_sigma, m_sigma_monotone) = self.m_sigma_detail();
        let (m_sigma_q, m_sigma_q_monotone) = self.m_sigma_q_detail();
        let (spencer_height, monotonicity_flag) = match self.spencer_height() {
            Ok((h, flag)) => (Some(h), flag),
            Err(_) => (None, true),
        };
        MaximalityInvariants {
            m_sigma,
            m_sigma_q,
            spencer_height,
            monotonicity_flag,
            m_sigma_monotone,
            m_sigma_q_monotone,
        }
    }
}
