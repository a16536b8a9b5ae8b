//! Brute-force oracles. They work on u64 element masks straight from the
//! multiplication table, so they only apply to groups of order at most 64.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use sigma_groups::arith;
use sigma_groups::corpus::find_builtin;
use sigma_groups::group::Group;
use sigma_groups::lattice::Lattice;
use sigma_groups::sigma::SigmaPartition;

pub type Mask = u64;

pub fn lattice(name: &str) -> Lattice {
    find_builtin(name)
        .unwrap_or_else(|| panic!("no builtin {name}"))
        .lattice()
        .unwrap()
}

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m >> i & 1 == 1)
}

pub fn size(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn mask_of(lat: &Lattice, i: usize) -> Mask {
    lat.subgroup(i).iter().fold(0, |m, x| m | 1 << x)
}

pub fn is_closed(g: &Group, m: Mask) -> bool {
    m & 1 == 1 && bits(m).all(|a| bits(m).all(|b| m >> g.mul(a, b) & 1 == 1))
}

/// Every subset containing the identity and closed under multiplication.
pub fn subset_filter(g: &Group) -> BTreeSet<Mask> {
    let n = g.order();
    assert!(n <= 16, "subset filter is exponential");
    (0..1u64 << (n - 1))
        .map(|rest| rest << 1 | 1)
        .filter(|&m| is_closed(g, m))
        .collect()
}

pub struct Oracle<'a> {
    pub g: &'a Group,
    pub subs: Vec<Mask>,
    pub top: Mask,
}

impl<'a> Oracle<'a> {
    /// Subgroup list taken from the lattice, each entry checked to be a
    /// subgroup. Completeness is covered by the subset-filter test.
    pub fn new(lat: &'a Lattice) -> Self {
        let g = lat.group();
        assert!(g.order() <= 64);
        let subs: Vec<Mask> = (0..lat.len()).map(|i| mask_of(lat, i)).collect();
        for &s in &subs {
            assert!(is_closed(g, s));
        }
        let top = if g.order() == 64 {
            u64::MAX
        } else {
            (1u64 << g.order()) - 1
        };
        Oracle { g, subs, top }
    }

    pub fn conj(&self, a: Mask, x: usize) -> Mask {
        bits(a).fold(0, |m, y| m | 1 << self.g.conj(x, y))
    }

    pub fn normal_in(&self, a: Mask, b: Mask) -> bool {
        bits(b).all(|x| self.conj(a, x) == a)
    }

    pub fn core_in(&self, a: Mask, b: Mask) -> Mask {
        bits(b).fold(a, |m, x| m & self.conj(a, x))
    }

    pub fn below(&self, b: Mask) -> impl Iterator<Item = Mask> + '_ {
        self.subs.iter().copied().filter(move |&s| s & b == s)
    }

    pub fn maximal_in(&self, b: Mask) -> Vec<Mask> {
        let proper: Vec<Mask> = self.below(b).filter(|&s| s != b).collect();
        proper
            .iter()
            .copied()
            .filter(|&c| !proper.iter().any(|&d| d != c && d & c == c))
            .collect()
    }

    pub fn normal_subgroups(&self) -> Vec<Mask> {
        self.subs
            .iter()
            .copied()
            .filter(|&s| self.normal_in(s, self.top))
            .collect()
    }

    /// Order of the coset xB in the section over B.
    fn coset_order(&self, x: usize, lower: Mask) -> u64 {
        let mut y = x;
        let mut k = 1;
        while lower >> y & 1 == 0 {
            y = self.g.mul(y, x);
            k += 1;
        }
        k
    }

    /// A/B is σ-nilpotent iff for each block the elements of σ_i-order form a
    /// subgroup.
    pub fn section_sigma_nilpotent(&self, upper: Mask, lower: Mask, sigma: &SigmaPartition) -> bool {
        let n = (size(upper) / size(lower)) as u64;
        sigma.sigma_of(n).into_iter().all(|b| {
            let only = BTreeSet::from([b]);
            let m = bits(upper)
                .filter(|&x| sigma.is_pi_number(self.coset_order(x, lower), &only))
                .fold(0, |m, x| m | 1 << x);
            bits(m).all(|a| bits(m).all(|c| m >> self.g.mul(a, c) & 1 == 1))
        })
    }

    pub fn sigma_primary(&self, n: usize, sigma: &SigmaPartition) -> bool {
        sigma.sigma_of(n as u64).len() <= 1
    }

    fn sn_step(&self, a: Mask, b: Mask, sigma: &SigmaPartition) -> bool {
        self.normal_in(a, b) || self.sigma_primary(size(b) / size(self.core_in(a, b)), sigma)
    }

    /// σ-subnormal subgroups of G, by searching upward chains from each
    /// subgroup with arbitrary (not only maximal) steps.
    pub fn sigma_subnormal(&self, sigma: &SigmaPartition) -> BTreeSet<Mask> {
        let mut memo: HashMap<Mask, bool> = HashMap::new();
        let mut order: Vec<Mask> = self.subs.clone();
        order.sort_by_key(|&m| std::cmp::Reverse(size(m)));
        for &a in &order {
            let ok = a == self.top
                || self
                    .subs
                    .iter()
                    .any(|&b| b != a && b & a == a && memo[&b] && self.sn_step(a, b, sigma));
            memo.insert(a, ok);
        }
        memo.into_iter().filter(|&(_, v)| v).map(|(k, _)| k).collect()
    }

    pub fn subnormal(&self) -> BTreeSet<Mask> {
        let mut memo: HashMap<Mask, bool> = HashMap::new();
        let mut order: Vec<Mask> = self.subs.clone();
        order.sort_by_key(|&m| std::cmp::Reverse(size(m)));
        for &a in &order {
            let ok = a == self.top
                || self
                    .subs
                    .iter()
                    .any(|&b| b != a && b & a == a && memo[&b] && self.normal_in(a, b));
            memo.insert(a, ok);
        }
        memo.into_iter().filter(|&(_, v)| v).map(|(k, _)| k).collect()
    }

    pub fn product(&self, a: Mask, b: Mask) -> Mask {
        bits(a).fold(0, |m, x| bits(b).fold(m, |m, y| m | 1 << self.g.mul(x, y)))
    }

    pub fn permutes(&self, a: Mask, b: Mask) -> bool {
        self.product(a, b) == self.product(b, a)
    }

    /// Hall σ_i-subgroups for each block of σ(G).
    pub fn hall_choices(&self, sigma: &SigmaPartition) -> Vec<Vec<Mask>> {
        let n = self.g.order() as u64;
        sigma
            .sigma_of(n)
            .into_iter()
            .map(|b| {
                let want = sigma.pi_part(n, &BTreeSet::from([b])) as usize;
                self.subs.iter().copied().filter(|&s| size(s) == want).collect()
            })
            .collect()
    }

    /// H permutes with every conjugate of every member of some complete
    /// Hall σ-set, searched over the full cross product.
    pub fn sigma_quasinormal(&self, h: Mask, sigma: &SigmaPartition) -> bool {
        let choices = self.hall_choices(sigma);
        let mut idx = vec![0; choices.len()];
        if choices.iter().any(|c| c.is_empty()) {
            return false;
        }
        loop {
            let ok = choices
                .iter()
                .zip(&idx)
                .all(|(c, &i)| bits(self.top).all(|x| self.permutes(h, self.conj(c[i], x))));
            if ok {
                return true;
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return false;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn m_sigma_q(&self, sigma: &SigmaPartition) -> usize {
        let qn: BTreeSet<Mask> = self
            .subs
            .iter()
            .copied()
            .filter(|&h| self.sigma_quasinormal(h, sigma))
            .collect();
        (1..)
            .find(|&n| self.n_maximal(n).iter().all(|m| qn.contains(m)))
            .unwrap()
    }

    pub fn n_maximal(&self, n: usize) -> BTreeSet<Mask> {
        let mut level = BTreeSet::from([self.top]);
        for _ in 0..n {
            level = level.iter().flat_map(|&b| self.maximal_in(b)).collect();
        }
        level
    }

    /// Least n ≥ 1 at which every n-maximal subgroup is σ-subnormal.
    pub fn m_sigma(&self, sigma: &SigmaPartition) -> usize {
        let sn = self.sigma_subnormal(sigma);
        (1..)
            .find(|&n| self.n_maximal(n).iter().all(|m| sn.contains(m)))
            .unwrap()
    }

    /// Every maximal chain G = M0 > M1 > ... > Mn, listed explicitly.
    pub fn maximal_chains(&self, n: usize) -> Vec<Vec<Mask>> {
        let mut chains = vec![vec![self.top]];
        for _ in 0..n {
            chains = chains
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    self.maximal_in(last).into_iter().map(move |m| {
                        let mut d = c.clone();
                        d.push(m);
                        d
                    })
                })
                .collect();
        }
        chains
    }

    /// Least n such that every maximal chain of length n has a proper
    /// σ-subnormal member.
    pub fn h_sigma(&self, sigma: &SigmaPartition) -> usize {
        let sn = self.sigma_subnormal(sigma);
        (1..)
            .find(|&n| {
                self.maximal_chains(n)
                    .iter()
                    .all(|c| c[1..].iter().any(|m| sn.contains(m)))
            })
            .unwrap()
    }

    /// Shortest normal series with σ-nilpotent factors.
    pub fn l_sigma(&self, sigma: &SigmaPartition) -> usize {
        let normals = self.normal_subgroups();
        let mut dist: HashMap<Mask, usize> = HashMap::from([(1, 0)]);
        let mut queue = VecDeque::from([1u64]);
        while let Some(a) = queue.pop_front() {
            if a == self.top {
                return dist[&a];
            }
            for &b in &normals {
                if b != a && b & a == a && !dist.contains_key(&b) && self.section_sigma_nilpotent(b, a, sigma)
                {
                    dist.insert(b, dist[&a] + 1);
                    queue.push_back(b);
                }
            }
        }
        panic!("G not σ-soluble");
    }

    /// Intersection of the normal subgroups with σ-nilpotent quotient.
    pub fn sigma_residual(&self, sigma: &SigmaPartition) -> Mask {
        self.normal_subgroups()
            .into_iter()
            .filter(|&n| self.section_sigma_nilpotent(self.top, n, sigma))
            .fold(self.top, |m, n| m & n)
    }

    /// Largest exponent among orders of chief factors, over every pair of
    /// normal subgroups with nothing normal strictly between.
    pub fn rank(&self) -> u32 {
        let normals = self.normal_subgroups();
        let mut r = 0;
        for &h in &normals {
            for &k in &normals {
                if k == h || k & h != k {
                    continue;
                }
                if normals
                    .iter()
                    .any(|&m| m != h && m != k && m & k == k && h & m == m)
                {
                    continue;
                }
                let (_, e) = arith::prime_power((size(h) / size(k)) as u64).expect("soluble");
                r = r.max(e);
            }
        }
        r
    }
}
