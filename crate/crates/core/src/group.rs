//! Finite groups as validated multiplication tables.
//!
//! Every group downstream is a dense Cayley table over element indices
//! `0..n` with the identity at index 0. Constructors relabel as needed.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::subgroup::Subgroup;

/// Default bound on the order of generated groups.
pub const DEFAULT_ORDER_CAP: usize = 2000;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// Handle identifying the ambient group of a [`Subgroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u64);

impl GroupId {
    fn fresh() -> Self {
        GroupId(NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed table at row {row}: {detail}")]
    MalformedTable { row: usize, detail: String },
    #[error("table has no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("invalid permutation #{index}: {detail}")]
    InvalidPermutation { index: usize, detail: String },
    #[error("invalid semidirect action: {0}")]
    InvalidAction(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),
    #[error("group file {path}: {detail}")]
    File { path: PathBuf, detail: String },
}

/// A finite group stored as its full multiplication table.
#[derive(Clone)]
pub struct Group {
    id: GroupId,
    name: String,
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    elem_order: Vec<u32>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl Group {
    /// Builds a group from a table already known to be a group with identity 0.
    pub(crate) fn from_trusted(table: Vec<u32>, order: usize, name: impl Into<String>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inv = vec![0u32; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            let y = row.iter().position(|&v| v == 0).expect("latin row");
            inv[x] = y as u32;
        }
        let mut g = Group {
            id: GroupId::fresh(),
            name: name.into(),
            order,
            table,
            inv,
            elem_order: Vec::new(),
        };
        g.elem_order = (0..order)
            .map(|x| {
                let mut k = 1;
                let mut y = x;
                while y != 0 {
                    y = g.mul(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        g
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.elem_order[a] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let e = e % self.element_order(a) as u64;
        let (mut base, mut acc, mut e) = (a, 0usize, e);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Row-major copy of the multiplication table.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders.
    pub fn order_fingerprint(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    /// The primes dividing `|G|`.
    pub fn primes(&self) -> Vec<u64> {
        arith::prime_divisors(self.order as u64)
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        self.whole().generators(self)
    }

    /// Quotient by a normal subgroup. Cosets are numbered by their least
    /// element, so the identity coset is 0. Returns the projection map.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(Group, Vec<usize>), GroupError> {
        assert_eq!(normal.group_id(), self.id, "subgroup of another group");
        let whole = self.whole();
        if !self.is_normal(normal, &whole).unwrap_or(false) {
            return Err(GroupError::NotNormal);
        }
        let mut proj = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if proj[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for n in normal.iter() {
                proj[self.mul(x, n)] = c;
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = proj[self.mul(a, b)] as u32;
            }
        }
        let name = format!("{}/N{}", self.name, normal.order());
        Ok((Group::from_trusted(table, q, name), proj))
    }

    /// Exports as a Cayley group file.
    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            name: self.name.clone(),
            body: GroupFileBody::Cayley {
                table: self.table_rows(),
            },
        }
    }
}

/// Builds and validates a group from a square table of element indices.
///
/// The identity is relabelled to index 0. Associativity is established with
/// Light's test over a greedily chosen generating set.
pub fn build_from_cayley(table: &[Vec<usize>], name: &str) -> Result<Group, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::MalformedTable {
            row: 0,
            detail: "empty table".into(),
        });
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::MalformedTable {
                row: r,
                detail: format!("expected {n} entries, found {}", row.len()),
            });
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= n) {
            return Err(GroupError::MalformedTable {
                row: r,
                detail: format!("entry {bad} out of range"),
            });
        }
    }
    let m = |a: usize, b: usize| table[a][b];
    let e = (0..n)
        .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
        .ok_or(GroupError::NoIdentity)?;
    for x in 0..n {
        let y = (0..n).find(|&y| m(x, y) == e);
        match y {
            Some(y) if m(y, x) == e => {}
            _ => return Err(GroupError::NoInverse { element: x }),
        }
    }
    // Latin property: every row and column a permutation.
    let mut seen = vec![0usize; n];
    for (r, row) in table.iter().enumerate() {
        for &v in row {
            if seen[v] == r + 1 {
                return Err(GroupError::MalformedTable {
                    row: r,
                    detail: format!("value {v} repeated in row"),
                });
            }
            seen[v] = r + 1;
        }
    }
    let mut seen = vec![0usize; n];
    for c in 0..n {
        for r in 0..n {
            let v = m(r, c);
            if seen[v] == c + 1 {
                return Err(GroupError::MalformedTable {
                    row: r,
                    detail: format!("value {v} repeated in column {c}"),
                });
            }
            seen[v] = c + 1;
        }
    }

    // Light's test: elements g with (xg)y = x(gy) for all x, y are closed
    // under products, so checking a generating set suffices.
    let mut reached = vec![false; n];
    reached[e] = true;
    let mut words = vec![e];
    let mut gens = Vec::new();
    while words.len() < n {
        let g = (0..n).find(|&x| !reached[x]).unwrap();
        gens.push(g);
        let mut i = 0;
        while i < words.len() {
            let w = words[i];
            for &s in &gens {
                let v = m(w, s);
                if !reached[v] {
                    reached[v] = true;
                    words.push(v);
                }
            }
            i += 1;
        }
    }
    for &g in &gens {
        for x in 0..n {
            let xg = m(x, g);
            for y in 0..n {
                if m(xg, y) != m(x, m(g, y)) {
                    return Err(GroupError::NotAssociative { a: x, b: g, c: y });
                }
            }
        }
    }

    // Swap labels e <-> 0.
    let relabel = |v: usize| {
        if v == e {
            0
        } else if v == 0 {
            e
        } else {
            v
        }
    };
    let mut flat = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            flat[relabel(a) * n + relabel(b)] = relabel(m(a, b)) as u32;
        }
    }
    Ok(Group::from_trusted(flat, n, name))
}

/// A permutation of `0..degree` given by its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::InvalidPermutation {
                    index: 0,
                    detail: format!("{images:?} is not a bijection of 0..{n}"),
                });
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut p = Self::identity(degree);
        for cyc in cycles.iter().rev() {
            let mut img: Vec<usize> = (0..degree).collect();
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a >= degree || b >= degree {
                    return Err(GroupError::InvalidPermutation {
                        index: 0,
                        detail: format!("cycle point out of range for degree {degree}"),
                    });
                }
                img[a] = b;
            }
            p = Permutation::new(img)?.compose(&p);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for s in 0..n {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }
}

/// Closure of a set of permutations under composition, as a Cayley table.
/// Element 0 is the identity permutation; the rest appear in breadth-first order.
pub fn generate_from_permutations(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Result<Group, GroupError> {
    for (i, g) in gens.iter().enumerate() {
        if g.degree() != degree {
            return Err(GroupError::InvalidPermutation {
                index: i,
                detail: format!("degree {} != {degree}", g.degree()),
            });
        }
    }
    let (elements, _) = permutation_closure(degree, gens, cap)?;
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = elements.len();
    let mut table = vec![0u32; n * n];
    for (a, pa) in elements.iter().enumerate() {
        for (b, pb) in elements.iter().enumerate() {
            table[a * n + b] = index[&pa.compose(pb)] as u32;
        }
    }
    Ok(Group::from_trusted(
        table,
        n,
        format!("<{} perms on {degree}>", gens.len()),
    ))
}

/// Breadth-first closure; returns the element list and the index map.
pub(crate) fn permutation_closure(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Result<(Vec<Permutation>, HashMap<Permutation, usize>), GroupError> {
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let p = elements[i].compose(g);
            if !index.contains_key(&p) {
                if elements.len() >= cap {
                    return Err(GroupError::OrderCapExceeded { cap });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        i += 1;
    }
    Ok((elements, index))
}

/// How the acting group of a semidirect product acts on the normal group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Trivial,
    /// The acting group is `Cyclic(m)`; its generator acts by inversion
    /// (the normal group must be abelian).
    Inversion,
    /// The acting group is `Cyclic(m)`; its generator acts by `x ↦ x^k`
    /// (the normal group must be abelian).
    Power(i64),
    /// One image array per acting element: `automorphisms[h][x] = φ(h)(x)`.
    Explicit(Vec<Vec<usize>>),
}

/// Recipe for a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of order `2m`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// Dicyclic group of order `4m`; `m = 2` gives the quaternion group.
    Dicyclic(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    Semidirect(Box<GroupSpec>, Box<GroupSpec>, Action),
    PermGens(usize, Vec<Vec<usize>>),
    CayleyFile(PathBuf),
}

impl GroupSpec {
    pub fn direct(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::DirectProduct(Box::new(a), Box::new(b))
    }

    pub fn semidirect(normal: GroupSpec, acting: GroupSpec, action: Action) -> Self {
        GroupSpec::Semidirect(Box::new(normal), Box::new(acting), action)
    }

    /// Order computed from the recipe alone, when it is cheap to do so.
    fn predicted_order(&self) -> Option<u128> {
        Some(match self {
            GroupSpec::Cyclic(n) => *n as u128,
            GroupSpec::Dihedral(m) => 2 * *m as u128,
            GroupSpec::Dicyclic(m) => 4 * *m as u128,
            GroupSpec::Symmetric(k) => (1..=*k as u128).product(),
            GroupSpec::Alternating(k) => ((1..=*k as u128).product::<u128>() / 2).max(1),
            GroupSpec::DirectProduct(a, b) | GroupSpec::Semidirect(a, b, _) => {
                a.predicted_order()? * b.predicted_order()?
            }
            GroupSpec::PermGens(..) | GroupSpec::CayleyFile(_) => return None,
        })
    }

    pub fn label(&self) -> String {
        match self {
            GroupSpec::Cyclic(n) => format!("C{n}"),
            GroupSpec::Dihedral(m) => format!("D{}", 2 * m),
            GroupSpec::Symmetric(k) => format!("S{k}"),
            GroupSpec::Alternating(k) => format!("A{k}"),
            GroupSpec::Dicyclic(m) => format!("Dic{}", 4 * m),
            GroupSpec::DirectProduct(a, b) => format!("{}x{}", a.label(), b.label()),
            GroupSpec::Semidirect(a, b, _) => format!("{}:{}", a.label(), b.label()),
            GroupSpec::PermGens(d, g) => format!("<{} perms on {d}>", g.len()),
            GroupSpec::CayleyFile(p) => p.display().to_string(),
        }
    }
}

/// Builds the group named by `spec` under the default order cap.
pub fn construct(spec: &GroupSpec) -> Result<Group, GroupError> {
    construct_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn construct_with_cap(spec: &GroupSpec, cap: usize) -> Result<Group, GroupError> {
    if let Some(n) = spec.predicted_order() {
        if n > cap as u128 {
            return Err(GroupError::OrderCapExceeded { cap });
        }
    }
    let positive = |n: usize, what: &str| {
        if n == 0 {
            Err(GroupError::InvalidParameter(format!(
                "{what} parameter must be positive"
            )))
        } else {
            Ok(())
        }
    };
    let g = match spec {
        GroupSpec::Cyclic(n) => {
            positive(*n, "cyclic")?;
            let n = *n;
            let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
            Group::from_trusted(table, n, "")
        }
        GroupSpec::Dihedral(m) => {
            positive(*m, "dihedral")?;
            // r^i s^a at index i + m*a; (r^i s^a)(r^j s^b) = r^(i ± j) s^(a+b).
            let m = *m;
            let n = 2 * m;
            let mut table = vec![0u32; n * n];
            for x in 0..n {
                let (i, a) = (x % m, x / m);
                for y in 0..n {
                    let (j, b) = (y % m, y / m);
                    let r = if a == 0 { (i + j) % m } else { (i + m - j) % m };
                    table[x * n + y] = (r + m * ((a + b) % 2)) as u32;
                }
            }
            Group::from_trusted(table, n, "")
        }
        GroupSpec::Dicyclic(m) => {
            positive(*m, "dicyclic")?;
            // a^i x^e at index i + 2m*e, a^(2m) = 1, x^2 = a^m, x a x^-1 = a^-1.
            let h = 2 * *m;
            let n = 2 * h;
            let mut table = vec![0u32; n * n];
            for u in 0..n {
                let (i, e) = (u % h, u / h);
                for v in 0..n {
                    let (j, f) = (v % h, v / h);
                    let w = match (e, f) {
                        (0, _) => (i + j) % h + h * f,
                        (_, 0) => (i + h - j) % h + h,
                        _ => (i + h - j + *m) % h,
                    };
                    table[u * n + v] = w as u32;
                }
            }
            Group::from_trusted(table, n, "")
        }
        GroupSpec::Symmetric(k) => {
            positive(*k, "symmetric")?;
            let k = *k;
            let mut gens = Vec::new();
            if k >= 2 {
                gens.push(Permutation::from_cycles(k, &[&[0, 1]])?);
                let cycle: Vec<usize> = (0..k).collect();
                gens.push(Permutation::from_cycles(k, &[&cycle])?);
            }
            generate_from_permutations(k, &gens, cap)?
        }
        GroupSpec::Alternating(k) => {
            positive(*k, "alternating")?;
            let k = *k;
            let gens = (2..k)
                .map(|i| Permutation::from_cycles(k, &[&[0, 1, i]]))
                .collect::<Result<Vec<_>, _>>()?;
            generate_from_permutations(k, &gens, cap)?
        }
        GroupSpec::DirectProduct(a, b) => {
            let a = construct_with_cap(a, cap)?;
            let b = construct_with_cap(b, cap)?;
            let (na, nb) = (a.order(), b.order());
            let n = na * nb;
            if n > cap {
                return Err(GroupError::OrderCapExceeded { cap });
            }
            let mut table = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    let p = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
                    table[x * n + y] = p as u32;
                }
            }
            Group::from_trusted(table, n, "")
        }
        GroupSpec::Semidirect(normal, acting, action) => {
            let nrm = construct_with_cap(normal, cap)?;
            let act = construct_with_cap(acting, cap)?;
            semidirect(&nrm, &act, acting, action, cap)?
        }
        GroupSpec::PermGens(degree, gens) => {
            let perms = gens
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    Permutation::new(g.clone()).map_err(|e| match e {
                        GroupError::InvalidPermutation { detail, .. } => {
                            GroupError::InvalidPermutation { index: i, detail }
                        }
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            generate_from_permutations(*degree, &perms, cap)?
        }
        GroupSpec::CayleyFile(path) => load_group_file_with_cap(path, cap)?,
    };
    if g.order() > cap {
        return Err(GroupError::OrderCapExceeded { cap });
    }
    let name = match spec {
        GroupSpec::CayleyFile(_) => g.name().to_string(),
        _ => spec.label(),
    };
    Ok(g.with_name(name))
}

fn semidirect(
    nrm: &Group,
    act: &Group,
    acting_spec: &GroupSpec,
    action: &Action,
    cap: usize,
) -> Result<Group, GroupError> {
    let (nn, nh) = (nrm.order(), act.order());
    if nn * nh > cap {
        return Err(GroupError::OrderCapExceeded { cap });
    }
    // phi[h][x] = image of x under the automorphism attached to h.
    let phi: Vec<Vec<usize>> = match action {
        Action::Trivial => vec![(0..nn).collect(); nh],
        Action::Inversion | Action::Power(_) => {
            if !matches!(acting_spec, GroupSpec::Cyclic(_)) {
                return Err(GroupError::InvalidAction(
                    "power actions need a cyclic acting group".into(),
                ));
            }
            if !nrm.is_abelian() {
                return Err(GroupError::InvalidAction(
                    "power actions need an abelian normal group".into(),
                ));
            }
            let k = match action {
                Action::Power(k) => *k,
                _ => -1,
            };
            let exp = nrm.elements().map(|x| nrm.element_order(x)).max().unwrap_or(1) as i64;
            let k = k.rem_euclid(exp) as u64;
            let mut phi = Vec::with_capacity(nh);
            let mut current: Vec<usize> = (0..nn).collect();
            for _ in 0..nh {
                phi.push(current.clone());
                current = current.iter().map(|&x| nrm.pow(x, k)).collect();
            }
            phi
        }
        Action::Explicit(maps) => {
            if maps.len() != nh || maps.iter().any(|m| m.len() != nn) {
                return Err(GroupError::InvalidAction(format!(
                    "expected {nh} image arrays of length {nn}"
                )));
            }
            maps.clone()
        }
    };
    for (h, map) in phi.iter().enumerate() {
        let mut seen = vec![false; nn];
        for &y in map {
            if y >= nn || seen[y] {
                return Err(GroupError::InvalidAction(format!(
                    "image of acting element {h} is not a bijection"
                )));
            }
            seen[y] = true;
        }
        for x in 0..nn {
            for y in 0..nn {
                if map[nrm.mul(x, y)] != nrm.mul(map[x], map[y]) {
                    return Err(GroupError::InvalidAction(format!(
                        "acting element {h} is not a homomorphism at ({x}, {y})"
                    )));
                }
            }
        }
    }
    for h1 in 0..nh {
        for h2 in 0..nh {
            let composite = &phi[act.mul(h1, h2)];
            if (0..nn).any(|x| composite[x] != phi[h1][phi[h2][x]]) {
                return Err(GroupError::InvalidAction(format!(
                    "action does not respect the product of {h1} and {h2}"
                )));
            }
        }
    }
    // (n1, h1)(n2, h2) = (n1 φ(h1)(n2), h1 h2), indexed n + |N| h.
    let n = nn * nh;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (n1, h1) = (x % nn, x / nn);
        for y in 0..n {
            let (n2, h2) = (y % nn, y / nn);
            let p = nrm.mul(n1, phi[h1][n2]) + nn * act.mul(h1, h2);
            table[x * n + y] = p as u32;
        }
    }
    Ok(Group::from_trusted(table, n, ""))
}

/// On-disk group description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    #[serde(flatten)]
    pub body: GroupFileBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupFileBody {
    Cayley {
        table: Vec<Vec<usize>>,
    },
    Permgens {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn build(&self, cap: usize) -> Result<Group, GroupError> {
        match &self.body {
            GroupFileBody::Cayley { table } => {
                if table.len() > cap {
                    return Err(GroupError::OrderCapExceeded { cap });
                }
                build_from_cayley(table, &self.name)
            }
            GroupFileBody::Permgens { degree, generators } => {
                let g = construct_with_cap(&GroupSpec::PermGens(*degree, generators.clone()), cap)?;
                Ok(g.with_name(self.name.clone()))
            }
        }
    }
}

pub fn load_group_file(path: &Path) -> Result<Group, GroupError> {
    load_group_file_with_cap(path, DEFAULT_ORDER_CAP)
}

pub fn load_group_file_with_cap(path: &Path, cap: usize) -> Result<Group, GroupError> {
    let file_err = |detail: String| GroupError::File {
        path: path.to_path_buf(),
        detail,
    };
    let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
    let file = GroupFile::parse(&text).map_err(|e| {
        file_err(format!(
            "parse error at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    file.build(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(cycles: &[&[usize]], degree: usize) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    #[test]
    fn cayley_examples() {
        let g = build_from_cayley(&[vec![0]], "1").unwrap();
        assert_eq!(g.order(), 1);
        let g = build_from_cayley(&[vec![0, 1], vec![1, 0]], "C2").unwrap();
        assert_eq!(g.order_fingerprint(), vec![1, 2]);
        assert_eq!(
            build_from_cayley(&[vec![0, 1], vec![1, 1]], "bad").unwrap_err(),
            GroupError::NoInverse { element: 1 }
        );
    }

    #[test]
    fn cayley_relabels_identity() {
        // Z/3 with identity at label 2.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = build_from_cayley(&t, "C3").unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.order_fingerprint(), vec![1, 3, 3]);
    }

    #[test]
    fn cayley_rejects_malformed_and_nonassociative() {
        assert!(matches!(
            build_from_cayley(&[vec![0, 1], vec![1]], "x"),
            Err(GroupError::MalformedTable { row: 1, .. })
        ));
        assert!(matches!(
            build_from_cayley(&[vec![0, 5], vec![1, 0]], "x"),
            Err(GroupError::MalformedTable { row: 0, .. })
        ));
        assert_eq!(
            build_from_cayley(&[vec![1, 0], vec![0, 0]], "x").unwrap_err(),
            GroupError::NoIdentity
        );
        // A Latin square loop of order 5 with identity that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            build_from_cayley(&loop5, "loop"),
            Err(GroupError::NotAssociative { .. })
        ));
    }

    #[test]
    fn permutation_generation() {
        let s3 = generate_from_permutations(3, &[perm(&[&[0, 1]], 3), perm(&[&[0, 1, 2]], 3)], 2000).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(
            s3.order_fingerprint(),
            construct(&GroupSpec::Symmetric(3)).unwrap().order_fingerprint()
        );
        assert_eq!(generate_from_permutations(4, &[], 2000).unwrap().order(), 1);
        let a5 = generate_from_permutations(5, &[perm(&[&[0, 1, 2, 3, 4]], 5), perm(&[&[0, 1, 2]], 5)], 2000)
            .unwrap();
        assert_eq!(a5.order(), 60);
        assert!(matches!(
            generate_from_permutations(5, &[perm(&[&[0, 1, 2, 3, 4]], 5), perm(&[&[0, 1]], 5)], 100),
            Err(GroupError::OrderCapExceeded { cap: 100 })
        ));
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(matches!(
            generate_from_permutations(4, &[perm(&[&[0, 1]], 3)], 100),
            Err(GroupError::InvalidPermutation { index: 0, .. })
        ));
    }

    #[test]
    fn construct_examples() {
        let c6 = construct(&GroupSpec::Cyclic(6)).unwrap();
        assert!(c6.is_abelian() && c6.order() == 6);
        let s3 = construct(&GroupSpec::semidirect(
            GroupSpec::Cyclic(3),
            GroupSpec::Cyclic(2),
            Action::Inversion,
        ))
        .unwrap();
        assert_eq!(s3.order_fingerprint(), vec![1, 2, 2, 2, 3, 3]);
        let v4 = construct(&GroupSpec::direct(GroupSpec::Cyclic(2), GroupSpec::Cyclic(2))).unwrap();
        assert_eq!(v4.order_fingerprint(), vec![1, 2, 2, 2]);
        let q8 = construct(&GroupSpec::Dicyclic(2)).unwrap();
        assert_eq!(q8.order_fingerprint(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        let d8 = construct(&GroupSpec::Dihedral(4)).unwrap();
        assert_eq!(d8.order_fingerprint(), vec![1, 2, 2, 2, 2, 2, 4, 4]);
        assert_eq!(construct(&GroupSpec::Alternating(4)).unwrap().order(), 12);
        assert_eq!(construct(&GroupSpec::Symmetric(1)).unwrap().order(), 1);
    }

    #[test]
    fn construct_rejects_bad_actions_and_caps() {
        // x -> x^2 on C3 has order 2 in Aut(C3), so it cannot come from C3.
        assert!(matches!(
            construct(&GroupSpec::semidirect(
                GroupSpec::Cyclic(3),
                GroupSpec::Cyclic(3),
                Action::Power(2)
            )),
            Err(GroupError::InvalidAction(_))
        ));
        // x -> x^2 on C4 is not bijective.
        assert!(matches!(
            construct(&GroupSpec::semidirect(
                GroupSpec::Cyclic(4),
                GroupSpec::Cyclic(2),
                Action::Power(2)
            )),
            Err(GroupError::InvalidAction(_))
        ));
        assert!(matches!(
            construct_with_cap(&GroupSpec::Symmetric(6), 500),
            Err(GroupError::OrderCapExceeded { cap: 500 })
        ));
        assert!(construct(&GroupSpec::Cyclic(0)).is_err());
    }

    #[test]
    fn semidirect_trivial_action_matches_direct() {
        let a = GroupSpec::Cyclic(4);
        let b = GroupSpec::Dihedral(3);
        let sd = construct(&GroupSpec::semidirect(a.clone(), b.clone(), Action::Trivial)).unwrap();
        let dp = construct(&GroupSpec::direct(a, b)).unwrap();
        assert_eq!(sd.order_fingerprint(), dp.order_fingerprint());
    }

    #[test]
    fn primes_and_power() {
        let c12 = construct(&GroupSpec::Cyclic(12)).unwrap();
        assert_eq!(c12.primes(), vec![2, 3]);
        assert!(construct(&GroupSpec::Cyclic(1)).unwrap().primes().is_empty());
        assert_eq!(
            construct(&GroupSpec::Alternating(5)).unwrap().primes(),
            vec![2, 3, 5]
        );
        assert_eq!(c12.pow(1, 5), 5);
        assert_eq!(c12.pow(1, 12), 0);
    }

    #[test]
    fn group_file_round_trip_and_unknown_kind() {
        let g = construct(&GroupSpec::Dihedral(5)).unwrap();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let back = GroupFile::parse(&text).unwrap().build(2000).unwrap();
        assert_eq!(back.table_rows(), g.table_rows());
        assert!(GroupFile::parse(r#"{"name":"x","kind":"matrix","table":[[0]]}"#).is_err());
        let pg =
            GroupFile::parse(r#"{"name":"S3","kind":"permgens","degree":3,"generators":[[1,0,2],[1,2,0]]}"#)
                .unwrap();
        assert_eq!(pg.build(2000).unwrap().order(), 6);
    }
}
