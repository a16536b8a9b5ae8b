//! Subgroup lattice enumeration and the classical calculus built on it:
//! Hasse structure, conjugacy classes, chief series, Sylow theory, rank.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arith;
use crate::group::Group;
use crate::subgroup::Subgroup;

pub const DEFAULT_SUBGROUP_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("more than {cap} subgroups")]
    SubgroupCapExceeded { cap: usize },
    #[error("operation undefined for the trivial group")]
    TrivialGroup,
    #[error("group is not soluble")]
    NotSoluble,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not contained in the ambient subgroup")]
    NotContained,
    #[error("no pairwise permuting family of Sylow subgroups exists")]
    NotFound,
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
}

/// An ascending chief series `1 = N_0 < ... < N_r = G` as lattice indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiefSeries {
    pub chain: Vec<usize>,
    pub factor_orders: Vec<usize>,
}

/// All subgroups of a group with their maximality and conjugacy structure.
///
/// Subgroups are sorted by order, then by element list, so index 0 is the
/// trivial subgroup and the last index is the whole group.
pub struct Lattice {
    group: Arc<Group>,
    subs: Vec<Subgroup>,
    gens: Vec<Vec<usize>>,
    index: HashMap<FixedBitSet, usize>,
    maximal: Vec<Vec<usize>>,
    covers: Vec<Vec<usize>>,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    conj: Vec<u32>,
    normal: Vec<bool>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice")
            .field("group", &self.group.name())
            .field("subgroups", &self.subs.len())
            .finish()
    }
}

pub fn enumerate_subgroups(group: &Group) -> Result<Lattice, LatticeError> {
    Lattice::new(Arc::new(group.clone()), DEFAULT_SUBGROUP_CAP)
}

impl Lattice {
    /// Seeds with every cyclic subgroup and closes under joins with cyclic
    /// subgroups until no new subgroup appears.
    pub fn new(group: Arc<Group>, cap: usize) -> Result<Self, LatticeError> {
        let g = &*group;
        let mut found: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut subs: Vec<Subgroup> = Vec::new();
        let mut gens: Vec<Vec<usize>> = Vec::new();
        let mut cyclic: Vec<usize> = Vec::new();
        for x in g.elements() {
            let c = g.generate([x]);
            if !found.contains_key(c.mask()) {
                found.insert(c.mask().clone(), subs.len());
                cyclic.push(x);
                gens.push(if x == 0 { vec![] } else { vec![x] });
                subs.push(c);
            }
        }
        let mut i = 0;
        while i < subs.len() {
            for &c in &cyclic {
                if subs[i].contains(c) {
                    continue;
                }
                let mut gs = gens[i].clone();
                gs.push(c);
                let j = g.generate(gs.iter().copied());
                if !found.contains_key(j.mask()) {
                    if subs.len() >= cap {
                        return Err(LatticeError::SubgroupCapExceeded { cap });
                    }
                    found.insert(j.mask().clone(), subs.len());
                    gens.push(gs);
                    subs.push(j);
                }
            }
            i += 1;
        }

        let mut order: Vec<usize> = (0..subs.len()).collect();
        order.sort_by(|&a, &b| subs[a].cmp(&subs[b]));
        let subs: Vec<Subgroup> = order.iter().map(|&k| subs[k].clone()).collect();
        let gens: Vec<Vec<usize>> = order.iter().map(|&k| gens[k].clone()).collect();
        let index: HashMap<FixedBitSet, usize> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.mask().clone(), i))
            .collect();
        let m = subs.len();

        let mut below = vec![FixedBitSet::with_capacity(m); m];
        let mut above = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in 0..=i {
                if subs[i].order().is_multiple_of(subs[j].order()) && subs[j].is_subgroup_of(&subs[i]) {
                    below[i].insert(j);
                    above[j].insert(i);
                }
            }
        }
        let mut maximal = vec![Vec::new(); m];
        let mut covers = vec![Vec::new(); m];
        for i in 0..m {
            for j in below[i].ones() {
                if j != i && above[j].intersection(&below[i]).take(3).count() == 2 {
                    maximal[i].push(j);
                    covers[j].push(i);
                }
            }
        }

        let n = g.order();
        let mut conj = vec![0u32; n * m];
        for x in 0..n {
            for (i, s) in subs.iter().enumerate() {
                conj[x * m + i] = if s.order() == 1 || s.order() == n {
                    i as u32
                } else {
                    index[g.conjugate(s, x).mask()] as u32
                };
            }
        }
        let top_gens = subs[m - 1].generators(g);
        let normal: Vec<bool> = (0..m)
            .map(|i| top_gens.iter().all(|&x| conj[x * m + i] as usize == i))
            .collect();
        let mut class_of = vec![usize::MAX; m];
        let mut classes = Vec::new();
        for i in 0..m {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut orbit = vec![i];
            class_of[i] = c;
            let mut k = 0;
            while k < orbit.len() {
                let j = orbit[k];
                for &x in &top_gens {
                    let y = conj[x * m + j] as usize;
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        orbit.push(y);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }

        Ok(Lattice {
            group,
            subs,
            gens,
            index,
            maximal,
            covers,
            below,
            above,
            conj,
            normal,
            classes,
            class_of,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subs[i]
    }

    pub fn order(&self, i: usize) -> usize {
        self.subs[i].order()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subs.len() - 1
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        if h.group_id() != self.group.id() {
            return None;
        }
        self.index.get(h.mask()).copied()
    }

    /// Generators of subgroup `i` recorded during enumeration.
    pub fn generators(&self, i: usize) -> &[usize] {
        &self.gens[i]
    }

    /// Maximal subgroups of `i` (Hasse edges downward).
    pub fn maximal_subgroups(&self, i: usize) -> &[usize] {
        &self.maximal[i]
    }

    /// Subgroups in which `i` is maximal (Hasse edges upward).
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    /// Whether subgroup `j` is contained in subgroup `i`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.below[i].contains(j)
    }

    /// Indices of all subgroups contained in `i`, including `i`.
    pub fn below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[i].ones()
    }

    /// Indices of all subgroups containing `i`, including `i`.
    pub fn above(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.above[i].ones()
    }

    /// Index of `x S_i x^-1`.
    pub fn conjugate(&self, i: usize, x: usize) -> usize {
        self.conj[x * self.subs.len() + i] as usize
    }

    /// Normal in the whole group.
    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_flags(&self) -> &[bool] {
        &self.normal
    }

    /// Whether `i` is a normal subgroup of `k`.
    pub fn is_normal_in(&self, i: usize, k: usize) -> bool {
        self.contains(k, i) && self.gens[k].iter().all(|&x| self.conjugate(i, x) == i)
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> &[usize] {
        &self.classes[self.class_of[i]]
    }

    pub fn class_index(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.above[a]
            .intersection(&self.above[b])
            .next()
            .expect("whole group contains everything")
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.below[a]
            .intersection(&self.below[b])
            .next_back()
            .expect("trivial subgroup lies in everything")
    }

    /// `AB = BA`, via `|<A,B>| = |A||B|/|A ∩ B|`.
    pub fn permutes(&self, a: usize, b: usize) -> bool {
        let j = self.order(self.join(a, b));
        let m = self.order(self.meet(a, b));
        j * m == self.order(a) * self.order(b)
    }

    /// Some conjugate of `b` permutes with `a`.
    pub fn g_permutes(&self, a: usize, b: usize) -> bool {
        self.class_of(b).iter().any(|&c| self.permutes(a, c))
    }

    /// Orbit of `i` under conjugation by elements of subgroup `k`.
    pub fn orbit_under(&self, i: usize, k: usize) -> Vec<usize> {
        let mut orbit = vec![i];
        let mut seen = BTreeSet::from([i]);
        let mut idx = 0;
        while idx < orbit.len() {
            let j = orbit[idx];
            for &x in &self.gens[k] {
                let y = self.conjugate(j, x);
                if seen.insert(y) {
                    orbit.push(y);
                }
            }
            idx += 1;
        }
        orbit
    }

    /// Core of `i` in `k`: the intersection of its `k`-conjugates.
    pub fn core_in(&self, i: usize, k: usize) -> Result<usize, LatticeError> {
        if !self.contains(k, i) {
            return Err(LatticeError::NotContained);
        }
        Ok(self
            .orbit_under(i, k)
            .into_iter()
            .fold(i, |acc, j| self.meet(acc, j)))
    }

    pub fn core(&self, i: usize) -> usize {
        self.class_of(i).iter().fold(i, |acc, &j| self.meet(acc, j))
    }

    pub fn normalizer(&self, i: usize) -> usize {
        let g = self.group();
        let mut mask = FixedBitSet::with_capacity(g.order());
        for x in g.elements() {
            if self.conjugate(i, x) == i {
                mask.insert(x);
            }
        }
        self.index[&mask]
    }

    pub fn normal_subgroups(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.normal[i]).collect()
    }

    /// Minimal normal subgroups of the whole group.
    pub fn minimal_normal_subgroups(&self) -> Vec<usize> {
        let normals = self.normal_subgroups();
        normals
            .iter()
            .copied()
            .filter(|&i| i != 0)
            .filter(|&i| !normals.iter().any(|&j| j != 0 && j != i && self.contains(i, j)))
            .collect()
    }

    /// Subgroups of `k` that are normal in `k`.
    pub fn normal_subgroups_of(&self, k: usize) -> Vec<usize> {
        if k == self.top() {
            return self.normal_subgroups();
        }
        self.below(k).filter(|&j| self.is_normal_in(j, k)).collect()
    }

    /// Chief series of subgroup `k` (as a group in its own right), built by
    /// repeatedly adjoining a smallest normal subgroup above the current term.
    pub fn chief_series_of(&self, k: usize) -> Result<ChiefSeries, LatticeError> {
        if self.order(k) == 1 {
            return Err(LatticeError::TrivialGroup);
        }
        let normals = self.normal_subgroups_of(k);
        let mut chain = vec![0];
        let mut cur = 0;
        while cur != k {
            let next = normals
                .iter()
                .copied()
                .find(|&j| j != cur && self.contains(j, cur))
                .expect("k itself is above");
            chain.push(next);
            cur = next;
        }
        Ok(self.series_from_chain(chain))
    }

    pub fn chief_series(&self) -> Result<ChiefSeries, LatticeError> {
        self.chief_series_of(self.top())
    }

    /// A second chief series, built downward by repeatedly taking a largest
    /// normal subgroup inside the current term.
    pub fn chief_series_descending(&self) -> Result<ChiefSeries, LatticeError> {
        let top = self.top();
        if self.order(top) == 1 {
            return Err(LatticeError::TrivialGroup);
        }
        let normals = self.normal_subgroups();
        let mut chain = vec![top];
        let mut cur = top;
        while cur != 0 {
            let next = normals
                .iter()
                .rev()
                .copied()
                .find(|&j| j != cur && self.contains(cur, j))
                .expect("trivial subgroup is below");
            chain.push(next);
            cur = next;
        }
        chain.reverse();
        Ok(self.series_from_chain(chain))
    }

    fn series_from_chain(&self, chain: Vec<usize>) -> ChiefSeries {
        let factor_orders = chain
            .windows(2)
            .map(|w| self.order(w[1]) / self.order(w[0]))
            .collect();
        ChiefSeries { chain, factor_orders }
    }

    /// No normal subgroup of the whole group strictly between `lower` and `upper`.
    pub fn is_chief_factor(&self, upper: usize, lower: usize) -> bool {
        self.normal[upper]
            && self.normal[lower]
            && upper != lower
            && self.contains(upper, lower)
            && !self
                .normal_subgroups()
                .into_iter()
                .any(|j| j != upper && j != lower && self.contains(upper, j) && self.contains(j, lower))
    }

    pub fn is_abelian(&self) -> bool {
        self.group.is_abelian()
    }

    pub fn is_soluble(&self) -> bool {
        self.group.is_soluble()
    }

    /// Every Sylow subgroup normal.
    pub fn is_nilpotent(&self) -> bool {
        self.group
            .primes()
            .into_iter()
            .all(|p| self.sylow_subgroups(p).len() == 1)
    }

    pub fn is_nilpotent_subgroup(&self, i: usize) -> bool {
        let s = self.subgroup(i);
        self.group.section_is_decomposable(s, self.subgroup(0), &|p| p)
    }

    /// A chief series with all factors of prime order.
    pub fn is_supersoluble(&self) -> bool {
        match self.chief_series() {
            Ok(cs) => cs.factor_orders.iter().all(|&f| arith::is_prime(f as u64)),
            Err(_) => true,
        }
    }

    /// Intersection of the maximal subgroups of `i`; `i` itself when trivial.
    pub fn frattini_of(&self, i: usize) -> usize {
        self.maximal[i].iter().fold(i, |acc, &j| self.meet(acc, j))
    }

    pub fn frattini(&self) -> usize {
        self.frattini_of(self.top())
    }

    pub fn center(&self) -> usize {
        self.index[self.group.center().mask()]
    }

    pub fn derived_subgroup(&self) -> usize {
        self.index[self.group.derived_subgroup().mask()]
    }

    pub fn sylow_subgroups(&self, p: u64) -> Vec<usize> {
        self.sylow_subgroups_of(self.top(), p)
    }

    /// Sylow `p`-subgroups of subgroup `k`.
    pub fn sylow_subgroups_of(&self, k: usize, p: u64) -> Vec<usize> {
        let target = arith::p_part(self.order(k) as u64, p) as usize;
        self.below(k).filter(|&j| self.order(j) == target).collect()
    }

    /// Up to `limit` Sylow bases: one Sylow subgroup per prime, pairwise
    /// permuting. Errors with `BudgetExceeded` if more than `limit` exist.
    pub fn sylow_bases(&self, limit: u64) -> Result<Vec<Vec<usize>>, LatticeError> {
        let per_prime: Vec<Vec<usize>> = self
            .group
            .primes()
            .into_iter()
            .map(|p| self.sylow_subgroups(p))
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.basis_search(&per_prime, &mut chosen, &mut out, Some(limit))?;
        Ok(out)
    }

    /// One Sylow basis found by backtracking.
    pub fn sylow_basis(&self) -> Result<Vec<usize>, LatticeError> {
        let per_prime: Vec<Vec<usize>> = self
            .group
            .primes()
            .into_iter()
            .map(|p| self.sylow_subgroups(p))
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.basis_search(&per_prime, &mut chosen, &mut out, None)?;
        out.into_iter().next().ok_or(LatticeError::NotFound)
    }

    /// Backtracking over one choice per slot, pairwise permuting. With
    /// `limit = None` it stops at the first hit.
    pub(crate) fn basis_search(
        &self,
        slots: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: Option<u64>,
    ) -> Result<(), LatticeError> {
        if chosen.len() == slots.len() {
            if let Some(l) = limit {
                if out.len() as u64 >= l {
                    return Err(LatticeError::BudgetExceeded { budget: l });
                }
            }
            out.push(chosen.clone());
            return Ok(());
        }
        for &c in &slots[chosen.len()] {
            if chosen.iter().all(|&d| self.permutes(c, d)) {
                chosen.push(c);
                self.basis_search(slots, chosen, out, limit)?;
                chosen.pop();
                if limit.is_none() && !out.is_empty() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// Subgroups `M` with `M ∩ N = 1` and `|M||N| = |G|`.
    pub fn complements(&self, n: usize) -> Result<Vec<usize>, LatticeError> {
        if !self.normal[n] {
            return Err(LatticeError::NotNormal);
        }
        let target = self.order(self.top()) / self.order(n);
        Ok((0..self.len())
            .filter(|&m| self.order(m) == target && self.meet(m, n) == 0)
            .collect())
    }

    /// Largest `k` with a chief factor of order `p^k`, for a soluble subgroup.
    pub fn rank_of(&self, k: usize) -> Result<u32, LatticeError> {
        if self.order(k) == 1 {
            return Err(LatticeError::TrivialGroup);
        }
        if !self.group.is_soluble_subgroup(self.subgroup(k)) {
            return Err(LatticeError::NotSoluble);
        }
        let cs = self.chief_series_of(k)?;
        Ok(cs
            .factor_orders
            .iter()
            .map(|&f| arith::prime_power(f as u64).map(|(_, e)| e).unwrap_or(0))
            .max()
            .unwrap_or(0))
    }

    pub fn rank(&self) -> Result<u32, LatticeError> {
        self.rank_of(self.top())
    }

    /// Not nilpotent, but every proper subgroup is.
    pub fn is_schmidt(&self) -> bool {
        !self.is_nilpotent() && (0..self.top()).all(|i| self.is_nilpotent_subgroup(i))
    }

    /// `AB = BA` and `A` maximal in `AB`.
    pub fn is_irreducible_pair(&self, a: usize, b: usize) -> bool {
        self.permutes(a, b) && self.maximal[self.join(a, b)].contains(&a)
    }

    pub fn is_subnormal(&self, i: usize) -> bool {
        self.group
            .is_subnormal(self.subgroup(i), self.subgroup(self.top()))
            .expect("every subgroup lies in the whole group")
    }

    /// Subgroups reachable from the whole group by exactly `n` Hasse steps.
    pub fn n_maximal_subgroups(&self, n: usize) -> Vec<usize> {
        let mut level: BTreeSet<usize> = BTreeSet::from([self.top()]);
        for _ in 0..n {
            level = level
                .iter()
                .flat_map(|&i| self.maximal[i].iter().copied())
                .collect();
            if level.is_empty() {
                break;
            }
        }
        level.into_iter().collect()
    }

    /// Length of the longest maximal chain.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.len()];
        for i in 0..self.len() {
            depth[i] = self.maximal[i].iter().map(|&j| depth[j] + 1).max().unwrap_or(0);
        }
        depth[self.top()]
    }

    /// Number of maximal chains of length `n`, by dynamic programming over
    /// Hasse edges. Saturates at `u128::MAX`.
    pub fn chain_count(&self, n: usize) -> u128 {
        let mut cnt = vec![1u128; self.len()];
        for _ in 0..n {
            let next: Vec<u128> = (0..self.len())
                .map(|i| {
                    self.maximal[i]
                        .iter()
                        .fold(0u128, |acc, &j| acc.saturating_add(cnt[j]))
                })
                .collect();
            cnt = next;
        }
        cnt[self.top()]
    }

    /// Every maximal chain `G = M_0 > M_1 > ... > M_n`, each starting at the
    /// whole group. `budget` bounds the number of chain extensions.
    pub fn maximal_chains(&self, n: usize, budget: u64) -> Result<Vec<Vec<usize>>, LatticeError> {
        let mut out = Vec::new();
        let mut path = vec![self.top()];
        let mut spent = 0u64;
        self.chain_dfs(n, &mut path, &mut out, &mut spent, budget)?;
        Ok(out)
    }

    fn chain_dfs(
        &self,
        n: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        spent: &mut u64,
        budget: u64,
    ) -> Result<(), LatticeError> {
        if path.len() == n + 1 {
            out.push(path.clone());
            return Ok(());
        }
        let last = *path.last().unwrap();
        for &j in &self.maximal[last] {
            *spent += 1;
            if *spent > budget {
                return Err(LatticeError::BudgetExceeded { budget });
            }
            path.push(j);
            self.chain_dfs(n, path, out, spent, budget)?;
            path.pop();
        }
        Ok(())
    }
}
