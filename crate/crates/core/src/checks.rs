//! Individual checks. Each implication is tested as an implication: when the
//! hypothesis fails the check is skipped and names the missing hypothesis.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::arith;
use crate::lattice::{Lattice, LatticeError};
use crate::sigma::{self, BlockId, BlockSet, SigmaPartition};
use crate::subnormality::SigmaSession;
use crate::verifier::{summarize_with, CheckId, GroupSummary, Outcome, VerifyConfig};

pub(crate) struct Ctx<'a> {
    lat: &'a Lattice,
    sigma: &'a SigmaPartition,
    cfg: &'a VerifyConfig,
    s: SigmaSession<'a>,
    primes: Vec<u64>,
    blocks: Vec<BlockId>,
    sn: Vec<bool>,
    soluble: bool,
    sigma_soluble: bool,
    sigma_nilpotent: bool,
    summary: Option<GroupSummary>,
}

fn sub(lat: &Lattice, i: usize) -> Value {
    json!({ "index": i, "order": lat.order(i), "elements": lat.subgroup(i).elements() })
}

/// Nonempty subsets of `blocks`.
fn block_subsets(blocks: &[BlockId]) -> Vec<BlockSet> {
    (1u32..(1 << blocks.len()))
        .map(|mask| {
            blocks
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &b)| b)
                .collect()
        })
        .collect()
}

/// Outcome of classifying a soluble group against the two structural types.
struct Classification {
    p_group: bool,
    /// Clauses of the second type that fail, reading the Sylow-basis clause
    /// over every basis containing the given Sylow subgroup.
    failures: Vec<String>,
    /// Whether that clause holds when some such basis suffices.
    existential_basis_clause: bool,
    universal_basis_clause: bool,
}

impl Classification {
    fn holds(&self) -> bool {
        self.p_group || self.failures.is_empty()
    }

    fn describe(&self) -> String {
        if self.p_group {
            return "type (i): p-group".into();
        }
        let readings = format!(
            "Sylow-basis clause: every-basis reading {}, some-basis reading {}",
            self.universal_basis_clause, self.existential_basis_clause
        );
        if self.failures.is_empty() {
            format!("type (ii); {readings}")
        } else {
            format!("not of type (ii): {}; {readings}", self.failures.join("; "))
        }
    }
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(lat: &'a Lattice, sigma: &'a SigmaPartition, cfg: &'a VerifyConfig) -> Self {
        let mut s = SigmaSession::new(lat, sigma);
        let mut sn = vec![false; lat.len()];
        for i in s.sigma_subnormal_set() {
            sn[i] = true;
        }
        Ctx {
            lat,
            sigma,
            cfg,
            primes: lat.group().primes(),
            blocks: sigma::sigma_of_group(sigma, lat).into_iter().collect(),
            sn,
            soluble: lat.is_soluble(),
            sigma_soluble: sigma::is_sigma_soluble(lat, sigma),
            sigma_nilpotent: sigma::is_sigma_nilpotent(lat, sigma),
            summary: None,
            s,
        }
    }

    pub(crate) fn summary(&mut self) -> GroupSummary {
        if self.summary.is_none() {
            self.summary = Some(summarize_with(self.lat, self.sigma, &mut self.s));
        }
        self.summary.clone().unwrap()
    }

    pub(crate) fn run(&mut self, id: CheckId) -> Outcome {
        match id {
            CheckId::P2_5 => self.sublattice(),
            CheckId::C2_6 => self.subnormal_sublattice(),
            CheckId::L2_2_9 => self.primary_in_radical(),
            CheckId::P3_2_i => self.maximal_indices_primary(),
            CheckId::P3_2_ii => self.maximal_index_per_block(),
            CheckId::P3_2_iii => self.sigma_basis(),
            CheckId::P3_2_iv => self.hall_g_permute(),
            CheckId::P3_2_v => self.hall_covering(),
            CheckId::P3_4 => self.nilpotency_equivalence(),
            CheckId::L3_6 => self.pi_closed_triples(),
            CheckId::L3_7 => self.schmidt_structure(),
            CheckId::C3_9 => self.minimal_non_sigma_nilpotent(),
            CheckId::L4_1_4 => self.quasinormal_subnormal(),
            CheckId::L4_1_5 => self.quasinormal_normalized(),
            CheckId::TbQuotient => self.quasinormal_core_quotient(),
            CheckId::L4_2_1 => self.m_le_mq(),
            CheckId::T1_2_i => self.rank_bound(),
            CheckId::T1_2_ii => self.length_bound(),
            CheckId::T1_2_iii => self.prime_count_bound(),
            CheckId::T1_4_i => self.chain_solubility(),
            CheckId::T1_4_ii => self.small_m_soluble(),
            CheckId::C1_7 => self.m_two(),
            CheckId::C1_8 => self.mq_two(),
            CheckId::C1_9 => self.two_maximal_quasinormal(),
            CheckId::T1_10_fwd => self.extremal_forward(),
            CheckId::T1_10_conv => self.extremal_converse(),
            CheckId::T7_1_i => self.spencer_length(),
            CheckId::T7_1_ii => self.spencer_primes(),
        }
    }

    fn order(&self) -> usize {
        self.lat.group().order()
    }

    fn need_nontrivial(&self) -> Option<Outcome> {
        (self.order() == 1).then(|| Outcome::skip("|G| > 1"))
    }

    fn need_sigma_soluble(&self) -> Option<Outcome> {
        self.need_nontrivial()
            .or_else(|| (!self.sigma_soluble).then(|| Outcome::skip("G σ-soluble")))
    }

    fn need_finest(&self) -> Option<Outcome> {
        (!self.sigma.is_finest_on(&self.primes)).then(|| Outcome::skip("σ finest on π(G)"))
    }

    fn sn_list(&self) -> Vec<usize> {
        (0..self.lat.len()).filter(|&i| self.sn[i]).collect()
    }

    fn closed_pairs(&self, set: &[usize], member: &dyn Fn(usize) -> bool, what: &str) -> Outcome {
        let lat = self.lat;
        for (x, &a) in set.iter().enumerate() {
            for &b in &set[x + 1..] {
                for (op, r) in [("join", lat.join(a, b)), ("meet", lat.meet(a, b))] {
                    if !member(r) {
                        return Outcome::fail(
                            format!("{op} of two {what} subgroups is not {what}"),
                            json!({ "a": sub(lat, a), "b": sub(lat, b), op: sub(lat, r) }),
                        );
                    }
                }
            }
        }
        Outcome::pass(format!(
            "{} {what} subgroups closed under join and meet",
            set.len()
        ))
    }

    fn sublattice(&mut self) -> Outcome {
        let set = self.sn_list();
        let sn = self.sn.clone();
        self.closed_pairs(&set, &|i| sn[i], "σ-subnormal")
    }

    fn subnormal_sublattice(&mut self) -> Outcome {
        if let Some(o) = self.need_finest() {
            return o;
        }
        let lat = self.lat;
        let flags: Vec<bool> = (0..lat.len()).map(|i| lat.is_subnormal(i)).collect();
        let set: Vec<usize> = (0..lat.len()).filter(|&i| flags[i]).collect();
        self.closed_pairs(&set, &|i| flags[i], "subnormal")
    }

    fn primary_in_radical(&mut self) -> Outcome {
        let lat = self.lat;
        let mut tested = 0;
        for a in self.sn_list() {
            let blocks = self.sigma.sigma_of(lat.order(a) as u64);
            if blocks.len() != 1 {
                continue;
            }
            tested += 1;
            let o = sigma::o_pi(lat, &blocks, self.sigma);
            if !lat.contains(o, a) {
                return Outcome::fail(
                    "σ-subnormal σ_i-subgroup outside O_σi(G)",
                    json!({ "subgroup": sub(lat, a), "radical": sub(lat, o) }),
                );
            }
        }
        if tested == 0 {
            return Outcome::skip("some nontrivial σ-subnormal σ_i-subgroup");
        }
        Outcome::pass(format!(
            "{tested} σ-subnormal σ_i-subgroups lie in their radicals"
        ))
    }

    fn maximal_indices_primary(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        for &m in lat.maximal_subgroups(lat.top()) {
            let idx = (self.order() / lat.order(m)) as u64;
            if !self.sigma.is_primary(idx) {
                return Outcome::fail(
                    "maximal subgroup of non-σ-primary index",
                    json!({ "maximal": sub(lat, m), "index": idx }),
                );
            }
        }
        Outcome::pass("every maximal subgroup has σ-primary index")
    }

    fn maximal_index_per_block(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        for &b in &self.blocks {
            let only = BlockSet::from([b]);
            let found = lat.maximal_subgroups(lat.top()).iter().any(|&m| {
                self.sigma
                    .is_pi_number((self.order() / lat.order(m)) as u64, &only)
            });
            if !found {
                return Outcome::fail("no maximal subgroup of σ_i-index", json!({ "block": b.0 }));
            }
        }
        Outcome::pass(format!(
            "{} blocks each have a maximal subgroup of σ_i-index",
            self.blocks.len()
        ))
    }

    fn sylows_of(&self, k: usize) -> Vec<usize> {
        arith::prime_divisors(self.lat.order(k) as u64)
            .into_iter()
            .flat_map(|p| self.lat.sylow_subgroups_of(k, p))
            .collect()
    }

    /// A σ-basis whose members' Sylow subgroups pairwise G-permute, plus the
    /// elementary-abelian property of irreducible pairs inside every σ-basis.
    fn sigma_basis(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        let bases = match sigma::sigma_basis_sets(lat, self.sigma, self.cfg.hall_cap) {
            Ok(b) => b,
            Err(_) => return Outcome::capped(format!("σ-bases > {}", self.cfg.hall_cap)),
        };
        let good = bases.iter().find(|basis| {
            basis.iter().enumerate().all(|(i, &hi)| {
                basis.iter().enumerate().all(|(j, &hj)| {
                    i == j
                        || self
                            .sylows_of(hi)
                            .iter()
                            .all(|&p| self.sylows_of(hj).iter().all(|&q| lat.g_permutes(p, q)))
                })
            })
        });
        let Some(good) = good else {
            return Outcome::fail(
                "no σ-basis with G-permuting Sylow subgroups",
                json!({ "bases": bases.len() }),
            );
        };
        let mut pairs = 0;
        for basis in &bases {
            for &hi in basis {
                for &hj in basis {
                    if hi == hj || !lat.is_irreducible_pair(hi, hj) {
                        continue;
                    }
                    pairs += 1;
                    let n = lat.order(hj) as u64;
                    let sylow = arith::prime_power(n)
                        .is_some_and(|(p, _)| arith::p_part(self.order() as u64, p) == n);
                    if !sylow || !lat.group().is_elementary_abelian(lat.subgroup(hj)) {
                        return Outcome::fail(
                            "irreducible pair in a σ-basis with a member that is not an elementary abelian Sylow subgroup",
                            json!({ "h_i": sub(lat, hi), "h_j": sub(lat, hj) }),
                        );
                    }
                }
            }
        }
        Outcome::pass(format!(
            "{} σ-bases, basis {:?} has G-permuting Sylows; {pairs} irreducible pairs checked",
            bases.len(),
            good
        ))
    }

    fn all_sylows(&self) -> Vec<usize> {
        self.sylows_of(self.lat.top())
    }

    fn hall_g_permute(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        let sylows = self.all_sylows();
        let mut halls = 0;
        for pi in block_subsets(&self.blocks) {
            let hs = sigma::hall_subgroups(lat, &pi, self.sigma);
            if hs.is_empty() {
                return Outcome::fail(
                    "no Hall Π-subgroup",
                    json!({ "pi": pi.iter().map(|b| b.0).collect::<Vec<_>>() }),
                );
            }
            for &h in &hs {
                halls += 1;
                if let Some(&p) = sylows.iter().find(|&&p| !lat.g_permutes(h, p)) {
                    return Outcome::fail(
                        "σ-Hall subgroup does not G-permute with a Sylow subgroup",
                        json!({ "hall": sub(lat, h), "sylow": sub(lat, p) }),
                    );
                }
            }
        }
        Outcome::pass(format!(
            "{halls} σ-Hall subgroups G-permute with {} Sylow subgroups",
            sylows.len()
        ))
    }

    fn hall_covering(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        let sylows = self.all_sylows();
        for pi in block_subsets(&self.blocks) {
            let pi_subgroups: Vec<usize> = (0..lat.len())
                .filter(|&i| self.sigma.is_pi_number(lat.order(i) as u64, &pi))
                .collect();
            let ok = sigma::hall_subgroups(lat, &pi, self.sigma).into_iter().any(|e| {
                pi_subgroups
                    .iter()
                    .all(|&s| lat.class_of(e).iter().any(|&c| lat.contains(c, s)))
                    && sylows.iter().all(|&p| lat.g_permutes(e, p))
            });
            if !ok {
                return Outcome::fail(
                    "no Hall Π-subgroup covering all Π-subgroups up to conjugacy and G-permuting with Sylows",
                    json!({ "pi": pi.iter().map(|b| b.0).collect::<Vec<_>>() }),
                );
            }
        }
        Outcome::pass(format!(
            "{} block sets checked",
            (1usize << self.blocks.len()) - 1
        ))
    }

    fn nilpotency_equivalence(&mut self) -> Outcome {
        let lat = self.lat;
        let sigma = self.sigma;
        let i = self.sigma_nilpotent;
        let by_hall = sigma::is_sigma_nilpotent_by_hall(lat, sigma);
        let normals = lat.normal_subgroups();
        let mut ii = true;
        for &h in &normals {
            for &k in &normals {
                if lat.is_chief_factor(h, k)
                    && !sigma::is_sigma_central(lat, sigma, h, k).expect("chief factor")
                {
                    ii = false;
                }
            }
        }
        let iii = sigma::hall_choices(lat, sigma)
            .iter()
            .all(|(_, v)| v.iter().any(|&h| self.sn[h]));
        let iv = self.sn.iter().all(|&b| b);
        let v = lat.maximal_subgroups(lat.top()).iter().all(|&m| self.sn[m]);
        let all = [i, ii, iii, iv, v, by_hall];
        if all.iter().all(|&b| b == i) {
            Outcome::pass(if i {
                "all five conditions hold"
            } else {
                "all five conditions fail"
            })
        } else {
            Outcome::fail(
                "conditions disagree",
                json!({ "i": i, "ii": ii, "iii": iii, "iv": iv, "v": v, "hall_form_of_i": by_hall }),
            )
        }
    }

    fn pi_closed_triples(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        let sigma = self.sigma;
        let mut instances = 0;
        for pi in block_subsets(&self.blocks) {
            // One representative per σ(|G:A|) among proper Π-closed subgroups.
            let mut reps: Vec<(BlockSet, usize)> = Vec::new();
            for a in 0..lat.top() {
                if !sigma::is_pi_closed_subgroup(lat, a, &pi, sigma) {
                    continue;
                }
                let key = sigma.sigma_of((self.order() / lat.order(a)) as u64);
                if !reps.iter().any(|(k, _)| *k == key) {
                    reps.push((key, a));
                }
            }
            let n = reps.len();
            for x in 0..n {
                for y in x + 1..n {
                    for z in y + 1..n {
                        let (kx, ky, kz) = (&reps[x].0, &reps[y].0, &reps[z].0);
                        if !(kx.is_disjoint(ky) && kx.is_disjoint(kz) && ky.is_disjoint(kz)) {
                            continue;
                        }
                        instances += 1;
                        if !sigma::is_pi_closed(lat, &pi, sigma) {
                            return Outcome::fail(
                                "three Π-closed subgroups of pairwise σ-coprime index but G not Π-closed",
                                json!({
                                    "pi": pi.iter().map(|b| b.0).collect::<Vec<_>>(),
                                    "a": sub(lat, reps[x].1), "b": sub(lat, reps[y].1), "c": sub(lat, reps[z].1),
                                }),
                            );
                        }
                    }
                }
            }
        }
        if instances == 0 {
            return Outcome::skip("three Π-closed subgroups with pairwise σ-coprime indices");
        }
        Outcome::pass(format!("{instances} triples, G Π-closed each time"))
    }

    fn schmidt_structure(&mut self) -> Outcome {
        if let Some(o) = self.need_finest() {
            return o;
        }
        let lat = self.lat;
        let g = lat.group();
        if !lat.is_schmidt() {
            return Outcome::skip("G a Schmidt group");
        }
        let n = self.order() as u64;
        let mut bad = Vec::new();
        let p_idx = sigma::sigma_residual(lat, &SigmaPartition::finest());
        let pn = lat.order(p_idx) as u64;
        let p = arith::prime_power(pn).map(|(p, _)| p);
        if self.primes.len() != 2 || p.is_none_or(|p| arith::p_part(n, p) != pn) {
            bad.push("nilpotent residual is not a Sylow subgroup");
        }
        if let Some(p) = p {
            let q = self.primes.iter().copied().find(|&q| q != p).unwrap_or(p);
            let qs = lat.sylow_subgroups(q);
            if !qs.iter().all(|&s| g.is_cyclic_subgroup(lat.subgroup(s))) {
                bad.push("Sylow q-subgroup not cyclic");
            }
            let qi = qs[0];
            if lat.join(p_idx, qi) != lat.top() || lat.meet(p_idx, qi) != 0 {
                bad.push("G is not P ⋊ Q");
            }
            if !lat.contains(lat.frattini(), lat.frattini_of(qi)) {
                bad.push("<x^q> not in Φ(G)");
            }
            let phi_p = lat.frattini_of(p_idx);
            if !lat.is_chief_factor(p_idx, phi_p) {
                bad.push("P/Φ(P) is not a chief factor");
            }
            let abelian = g.is_abelian_subgroup(lat.subgroup(p_idx));
            let exp = lat
                .subgroup(p_idx)
                .iter()
                .map(|x| g.element_order(x))
                .max()
                .unwrap_or(1) as u64;
            if !(exp == p || (p == 2 && !abelian && exp == 4)) {
                bad.push("P has the wrong exponent");
            }
            if abelian && phi_p != 0 {
                bad.push("P abelian but Φ(P) ≠ 1");
            }
        }
        if bad.is_empty() {
            Outcome::pass("G = P ⋊ Q with the stated structure")
        } else {
            Outcome::fail(bad.join("; "), json!({ "residual": sub(lat, p_idx) }))
        }
    }

    fn minimal_non_sigma_nilpotent(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        if self.sigma_nilpotent {
            return Outcome::skip("G not σ-nilpotent");
        }
        if let Some(h) = (0..lat.top()).find(|&i| !sigma::is_sigma_nilpotent_subgroup(lat, self.sigma, i)) {
            let _ = h;
            return Outcome::skip("every proper subgroup σ-nilpotent");
        }
        let fiber = sigma::is_sigma_fiber(self.sigma, lat);
        let schmidt = lat.is_schmidt();
        if fiber && schmidt {
            Outcome::pass("σ-fiber Schmidt group")
        } else {
            Outcome::fail(
                "not a σ-fiber Schmidt group",
                json!({ "fiber": fiber, "schmidt": schmidt }),
            )
        }
    }

    fn quasinormal_list(&mut self) -> Vec<usize> {
        (0..self.lat.len())
            .filter(|&i| self.s.is_sigma_quasinormal(i).holds)
            .collect()
    }

    fn quasinormal_subnormal(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let qn = self.quasinormal_list();
        if let Some(&h) = qn.iter().find(|&&h| !self.sn[h]) {
            return Outcome::fail(
                "σ-quasinormal but not σ-subnormal",
                json!({ "subgroup": sub(self.lat, h) }),
            );
        }
        Outcome::pass(format!("{} σ-quasinormal subgroups, all σ-subnormal", qn.len()))
    }

    fn quasinormal_normalized(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        let mut tested = 0;
        for h in self.quasinormal_list() {
            let blocks = self.sigma.sigma_of(lat.order(h) as u64);
            let Some(&b) = blocks.iter().next().filter(|_| blocks.len() == 1) else {
                continue;
            };
            tested += 1;
            let upper = sigma::o_upper(lat, b, self.sigma);
            let norm = lat.normalizer(h);
            if !lat.contains(norm, upper) {
                return Outcome::fail(
                    "O^σi(G) does not normalize a σ-quasinormal σ_i-subgroup",
                    json!({ "subgroup": sub(lat, h), "o_upper": sub(lat, upper) }),
                );
            }
        }
        if tested == 0 {
            return Outcome::skip("some nontrivial σ-quasinormal σ_i-subgroup");
        }
        Outcome::pass(format!("{tested} σ-quasinormal σ_i-subgroups normalized"))
    }

    fn quasinormal_core_quotient(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let lat = self.lat;
        let qn = self.quasinormal_list();
        for &h in &qn {
            let core = lat.core(h);
            if !sigma::section_is_sigma_nilpotent(lat, self.sigma, h, core) {
                return Outcome::fail(
                    "H/H_G is not σ-nilpotent",
                    json!({ "subgroup": sub(lat, h), "core": sub(lat, core) }),
                );
            }
        }
        Outcome::pass(format!("{} σ-quasinormal subgroups", qn.len()))
    }

    fn m_le_mq(&mut self) -> Outcome {
        let s = self.summary();
        if s.m_sigma <= s.m_sigma_q {
            Outcome::pass(format!("m_σ = {} ≤ m_σq = {}", s.m_sigma, s.m_sigma_q))
        } else {
            Outcome::fail(
                "m_σ > m_σq",
                json!({ "m_sigma": s.m_sigma, "m_sigma_q": s.m_sigma_q }),
            )
        }
    }

    fn need_soluble_not_sigma_nilpotent(&self) -> Option<Outcome> {
        if !self.soluble {
            return Some(Outcome::skip("G soluble"));
        }
        self.sigma_nilpotent.then(|| Outcome::skip("G not σ-nilpotent"))
    }

    fn rank_bound(&mut self) -> Outcome {
        if let Some(o) = self.need_soluble_not_sigma_nilpotent() {
            return o;
        }
        let lat = self.lat;
        let choices = sigma::hall_choices(lat, self.sigma);
        if choices.iter().any(|(_, v)| v.is_empty()) {
            return Outcome::skip("G has a complete Hall σ-set");
        }
        // Hall σ_i-subgroups of a σ-soluble group are conjugate, so one
        // member per block determines the ranks.
        let ranks: Vec<Option<u32>> = choices.iter().map(|(_, v)| lat.rank_of(v[0]).ok()).collect();
        let r = ranks.iter().map(|x| x.unwrap_or(0)).max().unwrap_or(0);
        let note = if ranks.contains(&None) {
            " (trivial member counted as rank 0)"
        } else {
            ""
        };
        let rg = lat.rank().expect("soluble and nontrivial");
        let mq = self.summary().m_sigma_q;
        if (rg as i64) <= mq as i64 + r as i64 - 2 {
            Outcome::pass(format!("r(G) = {rg} ≤ m_σq + r - 2 = {mq} + {r} - 2{note}"))
        } else {
            Outcome::fail(
                "rank bound violated",
                json!({ "rank": rg, "m_sigma_q": mq, "r": r }),
            )
        }
    }

    fn length_bound(&mut self) -> Outcome {
        if !self.sigma_soluble {
            return Outcome::skip("G σ-soluble");
        }
        let s = self.summary();
        let l = s.l_sigma.expect("σ-soluble");
        if l <= s.m_sigma {
            Outcome::pass(format!("l_σ = {l} ≤ m_σ = {}", s.m_sigma))
        } else {
            Outcome::fail("l_σ > m_σ", json!({ "l_sigma": l, "m_sigma": s.m_sigma }))
        }
    }

    fn prime_count_bound(&mut self) -> Outcome {
        if let Some(o) = self.need_soluble_not_sigma_nilpotent() {
            return o;
        }
        let m = self.summary().m_sigma;
        let n = self.primes.len();
        if n <= m {
            Outcome::pass(format!("|π(G)| = {n} ≤ m_σ = {m}"))
        } else {
            Outcome::fail("|π(G)| > m_σ", json!({ "pi": n, "m_sigma": m }))
        }
    }

    fn chain_solubility(&mut self) -> Outcome {
        if let Some(o) = self.need_nontrivial() {
            return o;
        }
        let h = self.summary().h_sigma.expect("nontrivial");
        if h > 3 {
            return Outcome::skip("every length-3 maximal chain has a proper σ-subnormal entry");
        }
        if self.sigma_soluble {
            Outcome::pass(format!("h_σ = {h} ≤ 3 and G σ-soluble"))
        } else {
            Outcome::fail("G not σ-soluble", json!({ "h_sigma": h }))
        }
    }

    fn small_m_soluble(&mut self) -> Outcome {
        let m = self.summary().m_sigma;
        if !(2..=3).contains(&m) {
            return Outcome::skip("1 < m_σ(G) ≤ 3");
        }
        if self.soluble {
            Outcome::pass(format!("m_σ = {m}, G soluble"))
        } else {
            Outcome::fail("G not soluble", json!({ "m_sigma": m }))
        }
    }

    fn iff(&self, left: bool, right: bool, names: (&str, &str)) -> Outcome {
        match (left, right) {
            (true, true) => Outcome::pass(format!("{} and {}", names.0, names.1)),
            (false, false) => Outcome::skip(format!("{} or {}", names.0, names.1)),
            _ => Outcome::fail(
                format!("{} is {left} but {} is {right}", names.0, names.1),
                json!({ "left": left, "right": right }),
            ),
        }
    }

    fn all_sylows_abelian(&self) -> bool {
        let g = self.lat.group();
        self.all_sylows()
            .iter()
            .all(|&p| g.is_abelian_subgroup(self.lat.subgroup(p)))
    }

    fn m_two(&mut self) -> Outcome {
        let m = self.summary().m_sigma;
        let right =
            self.lat.is_schmidt() && self.all_sylows_abelian() && sigma::is_sigma_fiber(self.sigma, self.lat);
        self.iff(
            m == 2,
            right,
            ("m_σ = 2", "σ-fiber Schmidt group with abelian Sylows"),
        )
    }

    fn mq_two(&mut self) -> Outcome {
        let s = self.summary();
        let right = s.supersoluble && s.m_sigma == 2;
        self.iff(s.m_sigma_q == 2, right, ("m_σq = 2", "supersoluble with m_σ = 2"))
    }

    fn two_maximal_quasinormal(&mut self) -> Outcome {
        if let Some(o) = self.need_finest() {
            return o;
        }
        let two = self.lat.n_maximal_subgroups(2);
        if !two.iter().all(|&i| self.s.is_sigma_quasinormal(i).holds) {
            return Outcome::skip("every 2-maximal subgroup S-quasinormal");
        }
        let s = self.summary();
        if !s.supersoluble {
            return Outcome::fail("G not supersoluble", json!({ "two_maximal": two }));
        }
        if self.primes.len() > 2 && !s.nilpotent {
            return Outcome::fail("|π(G)| > 2 but G not nilpotent", json!({ "pi": self.primes }));
        }
        Outcome::pass(format!(
            "{} 2-maximal subgroups S-quasinormal; G supersoluble",
            two.len()
        ))
    }

    fn classify(&mut self) -> Result<Classification, Outcome> {
        let lat = self.lat;
        let g = lat.group();
        let sigma = self.sigma;
        let mut c = Classification {
            p_group: self.primes.len() == 1,
            failures: Vec::new(),
            existential_basis_clause: true,
            universal_basis_clause: true,
        };
        if c.p_group {
            return Ok(c);
        }
        let mut fail = |s: &str| c.failures.push(s.to_string());
        let d = sigma::sigma_residual(lat, sigma);
        let dn = lat.order(d);
        if !g.is_abelian_subgroup(lat.subgroup(d)) {
            fail("residual not abelian");
        }
        if arith::gcd(dn as u64, (self.order() / dn) as u64) != 1 {
            fail("residual not a Hall subgroup");
        }
        let complements = lat.complements(d).expect("residual is normal");
        let non_sn: Vec<usize> = self.all_sylows().into_iter().filter(|&p| !self.sn[p]).collect();

        // (a) first sentence.
        for &p in &non_sn {
            let cyclic = g.is_cyclic_subgroup(lat.subgroup(p));
            if !cyclic || !lat.maximal_subgroups(p).iter().all(|&v| self.sn[v]) {
                fail("(a) non-σ-subnormal Sylow not cyclic with σ-subnormal maximal subgroup");
                break;
            }
        }
        // (a) Sylow-basis sentence, both readings.
        let bases = match lat.sylow_bases(self.cfg.hall_cap) {
            Ok(b) => b,
            Err(LatticeError::BudgetExceeded { budget }) => {
                return Err(Outcome::capped(format!("Sylow bases > {budget}")))
            }
            Err(_) => Vec::new(),
        };
        let basis_ok = |basis: &Vec<usize>, p1: usize| {
            basis
                .iter()
                .filter(|&&x| x != p1)
                .all(|&x| g.is_elementary_abelian(lat.subgroup(x)) && lat.is_irreducible_pair(p1, x))
        };
        for &p1 in &non_sn {
            let containing: Vec<&Vec<usize>> = bases.iter().filter(|b| b.contains(&p1)).collect();
            if !containing.iter().all(|b| basis_ok(b, p1)) {
                c.universal_basis_clause = false;
            }
            if !containing.iter().any(|b| basis_ok(b, p1)) {
                c.existential_basis_clause = false;
            }
        }
        if !c.universal_basis_clause {
            c.failures.push("(a) Sylow-basis clause".into());
        }
        // (a) Hall-set sentence.
        let sets = match sigma::complete_hall_sigma_sets(lat, sigma, self.cfg.hall_cap) {
            Ok(s) => s,
            Err(_) => {
                return Err(Outcome::capped(format!(
                    "complete Hall σ-sets > {}",
                    self.cfg.hall_cap
                )))
            }
        };
        'outer: for &p1 in &non_sn {
            if arith::is_prime(lat.order(p1) as u64) {
                continue;
            }
            for set in &sets {
                if let Some(&h1) = set.iter().find(|&&h| lat.contains(h, p1)) {
                    if !set.iter().all(|&h| h == h1 || lat.is_normal(h)) {
                        c.failures.push("(a) Hall-set clause".into());
                        break 'outer;
                    }
                }
            }
        }
        // (b) for some complement M.
        let irreducible_on = |m: usize, q: usize| {
            lat.below(q)
                .filter(|&s| s != 0 && s != q)
                .all(|s| !lat.generators(m).iter().all(|&x| lat.conjugate(s, x) == s))
        };
        let d_sylows = self.sylows_of(d);
        let b_ok = complements.iter().any(|&m| {
            self.sylows_of(m).iter().any(|&s| !self.sn[s]) && d_sylows.iter().all(|&q| irreducible_on(m, q))
        });
        if complements.is_empty() {
            c.failures.push("residual has no complement".into());
        } else if !b_ok {
            c.failures
                .push("(b) no complement with a non-σ-subnormal Sylow acting irreducibly".into());
        }
        // (c)
        let non_sn_primes: BTreeSet<u64> = non_sn
            .iter()
            .map(|&p| arith::prime_divisors(lat.order(p) as u64)[0])
            .collect();
        if non_sn_primes.len() >= 2 && !non_sn.iter().all(|&p| arith::is_prime(lat.order(p) as u64)) {
            c.failures
                .push("(c) non-σ-subnormal Sylows not all of prime order".into());
        }
        // (d)
        'd: for &p in &non_sn {
            let b = sigma.block_of(arith::prime_divisors(lat.order(p) as u64)[0]);
            for &v in lat.maximal_subgroups(p) {
                let idx = (self.order() / lat.order(lat.normalizer(v))) as u64;
                if !sigma.is_pi_number(idx, &BlockSet::from([b])) {
                    c.failures.push("(d) |G:N_G(V)| not a σ_i-number".into());
                    break 'd;
                }
            }
        }
        Ok(c)
    }

    fn extremal_forward(&mut self) -> Outcome {
        if let Some(o) = self.need_nontrivial() {
            return o;
        }
        if !self.soluble {
            return Outcome::skip("G soluble");
        }
        let m = self.summary().m_sigma;
        if m != self.primes.len() {
            return Outcome::skip("m_σ(G) = |π(G)|");
        }
        match self.classify() {
            Err(o) => o,
            Ok(c) if c.holds() => Outcome::pass(c.describe()),
            Ok(c) => Outcome::fail(c.describe(), json!({ "failures": c.failures, "m_sigma": m })),
        }
    }

    fn extremal_converse(&mut self) -> Outcome {
        if let Some(o) = self.need_nontrivial() {
            return o;
        }
        if !self.soluble {
            return Outcome::skip("G soluble");
        }
        let c = match self.classify() {
            Err(o) => return o,
            Ok(c) => c,
        };
        if !c.holds() {
            return Outcome::skip("G of type (i) or (ii)");
        }
        let m = self.summary().m_sigma;
        if m == self.primes.len() {
            Outcome::pass(format!("{}; m_σ = |π(G)| = {m}", c.describe()))
        } else {
            Outcome::fail(c.describe(), json!({ "m_sigma": m, "pi": self.primes.len() }))
        }
    }

    fn spencer_length(&mut self) -> Outcome {
        if let Some(o) = self.need_sigma_soluble() {
            return o;
        }
        let s = self.summary();
        let (l, h) = (s.l_sigma.expect("σ-soluble"), s.h_sigma.expect("nontrivial"));
        if l <= h {
            Outcome::pass(format!("l_σ = {l} ≤ h_σ = {h}"))
        } else {
            Outcome::fail("l_σ > h_σ", json!({ "l_sigma": l, "h_sigma": h }))
        }
    }

    fn spencer_primes(&mut self) -> Outcome {
        if let Some(o) = self.need_soluble_not_sigma_nilpotent() {
            return o;
        }
        let h = self.summary().h_sigma.expect("not σ-nilpotent, so nontrivial");
        let n = self.primes.len();
        if n <= h {
            Outcome::pass(format!("|π(G)| = {n} ≤ h_σ = {h}"))
        } else {
            Outcome::fail("|π(G)| > h_σ", json!({ "pi": n, "h_sigma": h }))
        }
    }
}
