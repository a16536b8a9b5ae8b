//! Subgroups as membership bit-masks, and the element-level subgroup calculus.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::group::{Group, GroupId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("subgroup is not contained in the ambient subgroup")]
    NotContained,
    #[error("lower term of the section is not normal in the upper term")]
    NotNormalSection,
    #[error("element set is not a subgroup")]
    NotASubgroup,
}

/// A subgroup of an ambient [`Group`], stored as a bit-mask over its elements.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: FixedBitSet,
    order: usize,
    group_id: GroupId,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group_id == other.group_id && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.group_id.hash(state);
        self.members.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// By order, then lexicographically by sorted element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.members.ones().cmp(other.members.ones()))
            .then_with(|| self.group_id.cmp(&other.group_id))
    }
}

impl Subgroup {
    pub(crate) fn from_mask(members: FixedBitSet, group_id: GroupId) -> Self {
        let order = members.count_ones(..);
        Subgroup {
            members,
            order,
            group_id,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn group_id(&self) -> GroupId {
        self.group_id
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order <= other.order && self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn index_in(&self, over: &Subgroup) -> usize {
        over.order / self.order
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self, g: &Group) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = g.trivial_subgroup();
        for x in self.iter() {
            if !span.contains(x) {
                gens.push(x);
                span = g.generate(gens.iter().copied());
            }
        }
        gens
    }
}

impl Group {
    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut m = FixedBitSet::with_capacity(self.order());
        m.insert(0);
        Subgroup::from_mask(m, self.id())
    }

    pub fn whole(&self) -> Subgroup {
        let mut m = FixedBitSet::with_capacity(self.order());
        m.insert_range(..);
        Subgroup::from_mask(m, self.id())
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().filter(|&x| x != 0).collect();
        let mut mask = FixedBitSet::with_capacity(self.order());
        mask.insert(0);
        let mut list = vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !mask.put(y) {
                    list.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_mask(mask, self.id())
    }

    /// The subgroup generated by `base` together with extra elements.
    pub fn generate_over(&self, base: &Subgroup, extra: impl IntoIterator<Item = usize>) -> Subgroup {
        let mut gens = base.generators(self);
        let mut span = base.clone();
        for x in extra {
            if !span.contains(x) {
                gens.push(x);
                span = self.generate(gens.iter().copied());
            }
        }
        span
    }

    /// Validates that an element set is a subgroup.
    pub fn subgroup_from_elements(
        &self,
        elems: impl IntoIterator<Item = usize>,
    ) -> Result<Subgroup, SubgroupError> {
        let mut mask = FixedBitSet::with_capacity(self.order());
        for x in elems {
            if x >= self.order() {
                return Err(SubgroupError::NotASubgroup);
            }
            mask.insert(x);
        }
        if !mask.contains(0) {
            return Err(SubgroupError::NotASubgroup);
        }
        let list: Vec<usize> = mask.ones().collect();
        for &a in &list {
            for &b in &list {
                if !mask.contains(self.mul(a, b)) {
                    return Err(SubgroupError::NotASubgroup);
                }
            }
        }
        Ok(Subgroup::from_mask(mask, self.id()))
    }

    /// `x H x^-1`.
    pub fn conjugate(&self, h: &Subgroup, x: usize) -> Subgroup {
        let mut mask = FixedBitSet::with_capacity(self.order());
        for y in h.iter() {
            mask.insert(self.conj(x, y));
        }
        Subgroup::from_mask(mask, self.id())
    }

    fn normalized_by(&self, h: &Subgroup, gens: &[usize]) -> bool {
        gens.iter()
            .all(|&k| h.iter().all(|y| h.contains(self.conj(k, y))))
    }

    /// Whether `h` is normal in `k`.
    pub fn is_normal(&self, h: &Subgroup, k: &Subgroup) -> Result<bool, SubgroupError> {
        if !h.is_subgroup_of(k) {
            return Err(SubgroupError::NotContained);
        }
        Ok(self.normalized_by(h, &k.generators(self)))
    }

    /// Largest normal subgroup of `k` contained in `h`.
    pub fn core(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup, SubgroupError> {
        if !h.is_subgroup_of(k) {
            return Err(SubgroupError::NotContained);
        }
        let mut mask = h.mask().clone();
        for x in k.iter() {
            mask.intersect_with(self.conjugate(h, x).mask());
        }
        Ok(Subgroup::from_mask(mask, self.id()))
    }

    /// Smallest normal subgroup of `k` containing `h`.
    pub fn normal_closure(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup, SubgroupError> {
        if !h.is_subgroup_of(k) {
            return Err(SubgroupError::NotContained);
        }
        let hg = h.generators(self);
        let kg = k.generators(self);
        let mut span = self.generate(hg.iter().copied());
        // Close under conjugation by generators of k.
        loop {
            let gens = span.generators(self);
            let extra: Vec<usize> = kg
                .iter()
                .flat_map(|&x| gens.iter().map(move |&y| (x, y)))
                .map(|(x, y)| self.conj(x, y))
                .filter(|&z| !span.contains(z))
                .collect();
            if extra.is_empty() {
                return Ok(span);
            }
            span = self.generate_over(&span, extra);
        }
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let hg = h.generators(self);
        let mut mask = FixedBitSet::with_capacity(self.order());
        for x in self.elements() {
            if hg.iter().all(|&y| h.contains(self.conj(x, y))) {
                mask.insert(x);
            }
        }
        Subgroup::from_mask(mask, self.id())
    }

    /// `C_G(H/K) = {g : [g, h] ∈ K for all h ∈ H}` for `K` normal in `H`.
    pub fn centralizer_of_section(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup, SubgroupError> {
        if !self
            .is_normal(k, h)
            .map_err(|_| SubgroupError::NotNormalSection)?
        {
            return Err(SubgroupError::NotNormalSection);
        }
        let hg = h.generators(self);
        let mut mask = FixedBitSet::with_capacity(self.order());
        for x in self.elements() {
            if hg.iter().all(|&y| k.contains(self.commutator(x, y))) {
                mask.insert(x);
            }
        }
        Ok(Subgroup::from_mask(mask, self.id()))
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        self.centralizer_of_section(h, &self.trivial_subgroup())
            .unwrap_or_else(|_| unreachable!("trivial subgroup is normal"))
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.whole())
    }

    /// The product set `AB` and whether `AB = BA`.
    pub fn product_and_permutes(&self, a: &Subgroup, b: &Subgroup) -> (FixedBitSet, bool) {
        let mut ab = FixedBitSet::with_capacity(self.order());
        let mut ba = FixedBitSet::with_capacity(self.order());
        for x in a.iter() {
            for y in b.iter() {
                ab.insert(self.mul(x, y));
                ba.insert(self.mul(y, x));
            }
        }
        let permutes = ab == ba;
        (ab, permutes)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.generate_over(a, b.generators(self))
    }

    pub fn meet(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut m = a.mask().clone();
        m.intersect_with(b.mask());
        Subgroup::from_mask(m, self.id())
    }

    /// Derived subgroup of `h`.
    pub fn derived_subgroup_of(&self, h: &Subgroup) -> Subgroup {
        let hg = h.generators(self);
        // [H,H] is the normal closure in H of the commutators of generators.
        let comms: Vec<usize> = hg
            .iter()
            .flat_map(|&a| hg.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        let base = self.generate(comms);
        self.normal_closure(&base, h)
            .unwrap_or_else(|_| unreachable!("commutators of H lie in H"))
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.derived_subgroup_of(&self.whole())
    }

    pub fn is_abelian_subgroup(&self, h: &Subgroup) -> bool {
        let hg = h.generators(self);
        hg.iter()
            .all(|&a| hg.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Derived series of `h` reaches the identity.
    pub fn is_soluble_subgroup(&self, h: &Subgroup) -> bool {
        let mut cur = h.clone();
        loop {
            if cur.is_trivial() {
                return true;
            }
            let next = self.derived_subgroup_of(&cur);
            if next.order() == cur.order() {
                return false;
            }
            cur = next;
        }
    }

    pub fn is_soluble(&self) -> bool {
        self.is_soluble_subgroup(&self.whole())
    }

    /// Abelian with every non-identity element of the same prime order.
    pub fn is_elementary_abelian(&self, h: &Subgroup) -> bool {
        if h.is_trivial() {
            return true;
        }
        let orders: std::collections::BTreeSet<usize> = h
            .iter()
            .filter(|&x| x != 0)
            .map(|x| self.element_order(x))
            .collect();
        orders.len() == 1
            && crate::arith::is_prime(*orders.iter().next().unwrap() as u64)
            && self.is_abelian_subgroup(h)
    }

    pub fn is_cyclic_subgroup(&self, h: &Subgroup) -> bool {
        h.iter().any(|x| self.element_order(x) == h.order())
    }

    /// Subnormality by iterated normal closures: `H^(0) = G`,
    /// `H^(i+1) = normal_closure(H, H^(i))` must stabilize at `H`.
    pub fn is_subnormal(&self, h: &Subgroup, k: &Subgroup) -> Result<bool, SubgroupError> {
        if !h.is_subgroup_of(k) {
            return Err(SubgroupError::NotContained);
        }
        let mut cur = k.clone();
        loop {
            if cur.order() == h.order() {
                return Ok(true);
            }
            let next = self.normal_closure(h, &cur)?;
            if next.order() == cur.order() {
                return Ok(false);
            }
            cur = next;
        }
    }

    /// Whether the section `upper/lower` (lower normal in upper) is
    /// nilpotent with respect to the prime grouping `block_of`: for every
    /// group of primes the elements of that part of the section generate a
    /// subgroup of the full part order. With singleton groups this is
    /// ordinary nilpotency.
    pub fn section_is_decomposable(
        &self,
        upper: &Subgroup,
        lower: &Subgroup,
        block_of: &dyn Fn(u64) -> u64,
    ) -> bool {
        let index = (upper.order() / lower.order()) as u64;
        let mut blocks: Vec<u64> = crate::arith::prime_divisors(index)
            .into_iter()
            .map(block_of)
            .collect();
        blocks.sort_unstable();
        blocks.dedup();
        blocks.iter().all(|&b| {
            let part = crate::arith::part_of(index, |p| block_of(p) == b);
            let witnesses = upper
                .iter()
                .filter(|&x| !lower.contains(x) && lower.contains(self.pow(x, part)));
            let span = self.generate_over(lower, witnesses);
            span.order() as u64 == lower.order() as u64 * part
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, GroupSpec, Permutation};
    use std::collections::HashMap;

    /// S_n as permutations with a lookup from cycles to element indices.
    pub(crate) struct PermGroup {
        pub g: Group,
        index: HashMap<Permutation, usize>,
        degree: usize,
    }

    impl PermGroup {
        pub fn symmetric(k: usize) -> Self {
            let gens = vec![
                Permutation::from_cycles(k, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(k, &[&(0..k).collect::<Vec<_>>()]).unwrap(),
            ];
            let g = crate::group::generate_from_permutations(k, &gens, 2000).unwrap();
            let (_, index) = crate::group::permutation_closure(k, &gens, 2000).unwrap();
            PermGroup { g, index, degree: k }
        }

        pub fn el(&self, cycles: &[&[usize]]) -> usize {
            self.index[&Permutation::from_cycles(self.degree, cycles).unwrap()]
        }

        pub fn sub(&self, gens: &[&[&[usize]]]) -> Subgroup {
            self.g.generate(gens.iter().map(|c| self.el(c)))
        }
    }

    #[test]
    fn normality_and_core_in_s3() {
        let s = PermGroup::symmetric(3);
        let g = &s.g;
        let c3 = s.sub(&[&[&[0, 1, 2]]]);
        let t = s.sub(&[&[&[0, 1]]]);
        let whole = g.whole();
        assert!(g.is_normal(&c3, &whole).unwrap());
        assert!(!g.is_normal(&t, &whole).unwrap());
        assert!(g.is_normal(&t, &t).unwrap());
        assert_eq!(g.is_normal(&whole, &t), Err(SubgroupError::NotContained));
        assert!(g.core(&t, &whole).unwrap().is_trivial());
        assert_eq!(g.core(&c3, &whole).unwrap(), c3);
        assert_eq!(g.normal_closure(&t, &whole).unwrap(), whole);
        assert_eq!(g.normal_closure(&c3, &whole).unwrap(), c3);
        assert_eq!(g.normalizer(&t), t);
        assert_eq!(g.centralizer_of_section(&whole, &whole).unwrap(), whole);
        assert_eq!(g.centralizer_of_section(&c3, &g.trivial_subgroup()).unwrap(), c3);
        assert_eq!(
            g.centralizer_of_section(&whole, &t),
            Err(SubgroupError::NotNormalSection)
        );
    }

    #[test]
    fn products_joins_meets_in_s3() {
        let s = PermGroup::symmetric(3);
        let g = &s.g;
        let c3 = s.sub(&[&[&[0, 1, 2]]]);
        let t12 = s.sub(&[&[&[0, 1]]]);
        let t13 = s.sub(&[&[&[0, 2]]]);
        let (p, ok) = g.product_and_permutes(&c3, &t12);
        assert_eq!((p.count_ones(..), ok), (6, true));
        let (p, ok) = g.product_and_permutes(&t12, &t13);
        assert_eq!((p.count_ones(..), ok), (4, false));
        let (p, ok) = g.product_and_permutes(&t12, &t12);
        assert_eq!((&p, ok), (t12.mask(), true));
        assert_eq!(g.join(&t12, &t13), g.whole());
        assert!(g.meet(&c3, &t12).is_trivial());
        assert_eq!(g.join(&t12, &t12), t12);
    }

    #[test]
    fn core_and_closure_in_s4_a4() {
        let s = PermGroup::symmetric(4);
        let g = &s.g;
        let d8 = s.sub(&[&[&[0, 1, 2, 3]], &[&[0, 2]]]);
        assert_eq!(d8.order(), 8);
        let v4 = s.sub(&[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
        assert_eq!(g.core(&d8, &g.whole()).unwrap(), v4);
        let a4 = s.sub(&[&[&[0, 1, 2]], &[&[1, 2, 3]]]);
        let c3 = s.sub(&[&[&[0, 1, 2]]]);
        assert_eq!(g.normal_closure(&c3, &a4).unwrap(), a4);
        // Subnormal: <(0 1)(2 3)> < V4 < S4; a transposition is not.
        let c2 = s.sub(&[&[&[0, 1], &[2, 3]]]);
        assert!(g.is_subnormal(&c2, &d8).unwrap());
        assert!(g.is_subnormal(&c2, &g.whole()).unwrap());
        assert!(!g.is_subnormal(&s.sub(&[&[&[0, 1]]]), &g.whole()).unwrap());
    }

    #[test]
    fn derived_center_solubility() {
        let s = PermGroup::symmetric(3);
        let g = &s.g;
        assert_eq!(g.derived_subgroup(), s.sub(&[&[&[0, 1, 2]]]));
        assert!(g.is_soluble());
        assert!(g.center().is_trivial());
        let q8 = construct(&GroupSpec::Dicyclic(2)).unwrap();
        let z = q8.center();
        assert_eq!(z.order(), 2);
        let a5 = construct(&GroupSpec::Alternating(5)).unwrap();
        assert!(!a5.is_soluble());
        let v4 = construct(&GroupSpec::direct(GroupSpec::Cyclic(2), GroupSpec::Cyclic(2))).unwrap();
        assert!(v4.is_elementary_abelian(&v4.whole()));
        let c4 = construct(&GroupSpec::Cyclic(4)).unwrap();
        assert!(!c4.is_elementary_abelian(&c4.whole()));
    }

    #[test]
    fn section_decomposability() {
        let s4 = PermGroup::symmetric(4);
        let g = &s4.g;
        let finest = |p: u64| p;
        let one_block = |_: u64| 0;
        assert!(!g.section_is_decomposable(&g.whole(), &g.trivial_subgroup(), &finest));
        assert!(g.section_is_decomposable(&g.whole(), &g.trivial_subgroup(), &one_block));
        let v4 = s4.sub(&[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
        let a4 = s4.sub(&[&[&[0, 1, 2]], &[&[1, 2, 3]]]);
        // S4/V4 is S3: not nilpotent; A4/V4 is C3: nilpotent.
        assert!(!g.section_is_decomposable(&g.whole(), &v4, &finest));
        assert!(g.section_is_decomposable(&a4, &v4, &finest));
        assert!(g.section_is_decomposable(&v4, &g.trivial_subgroup(), &finest));
    }
}
