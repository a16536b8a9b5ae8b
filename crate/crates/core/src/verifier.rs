//! Check catalog over `(group, σ)` pairs, group summaries and JSON reports.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::checks::Ctx;
use crate::corpus::{partitions_for, CorpusItem, PartitionSelector};
use crate::lattice::Lattice;
use crate::sigma::{self, SigmaPartition, DEFAULT_HALL_SET_CAP};
use crate::subnormality::SigmaSession;

pub const REPORT_SCHEMA: u32 = 1;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    P2_5,
    C2_6,
    L2_2_9,
    P3_2_i,
    P3_2_ii,
    P3_2_iii,
    P3_2_iv,
    P3_2_v,
    P3_4,
    L3_6,
    L3_7,
    C3_9,
    L4_1_4,
    L4_1_5,
    TbQuotient,
    L4_2_1,
    T1_2_i,
    T1_2_ii,
    T1_2_iii,
    T1_4_i,
    T1_4_ii,
    C1_7,
    C1_8,
    C1_9,
    T1_10_fwd,
    T1_10_conv,
    T7_1_i,
    T7_1_ii,
}

impl CheckId {
    pub const ALL: [CheckId; 28] = [
        CheckId::P2_5,
        CheckId::C2_6,
        CheckId::L2_2_9,
        CheckId::P3_2_i,
        CheckId::P3_2_ii,
        CheckId::P3_2_iii,
        CheckId::P3_2_iv,
        CheckId::P3_2_v,
        CheckId::P3_4,
        CheckId::L3_6,
        CheckId::L3_7,
        CheckId::C3_9,
        CheckId::L4_1_4,
        CheckId::L4_1_5,
        CheckId::TbQuotient,
        CheckId::L4_2_1,
        CheckId::T1_2_i,
        CheckId::T1_2_ii,
        CheckId::T1_2_iii,
        CheckId::T1_4_i,
        CheckId::T1_4_ii,
        CheckId::C1_7,
        CheckId::C1_8,
        CheckId::C1_9,
        CheckId::T1_10_fwd,
        CheckId::T1_10_conv,
        CheckId::T7_1_i,
        CheckId::T7_1_ii,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::P2_5 => "P2.5",
            CheckId::C2_6 => "C2.6",
            CheckId::L2_2_9 => "L2.2.9",
            CheckId::P3_2_i => "P3.2.i",
            CheckId::P3_2_ii => "P3.2.ii",
            CheckId::P3_2_iii => "P3.2.iii",
            CheckId::P3_2_iv => "P3.2.iv",
            CheckId::P3_2_v => "P3.2.v",
            CheckId::P3_4 => "P3.4",
            CheckId::L3_6 => "L3.6",
            CheckId::L3_7 => "L3.7",
            CheckId::C3_9 => "C3.9",
            CheckId::L4_1_4 => "L4.1.4",
            CheckId::L4_1_5 => "L4.1.5",
            CheckId::TbQuotient => "TB-quotient",
            CheckId::L4_2_1 => "L4.2.1",
            CheckId::T1_2_i => "T1.2.i",
            CheckId::T1_2_ii => "T1.2.ii",
            CheckId::T1_2_iii => "T1.2.iii",
            CheckId::T1_4_i => "T1.4.i",
            CheckId::T1_4_ii => "T1.4.ii",
            CheckId::C1_7 => "C1.7",
            CheckId::C1_8 => "C1.8",
            CheckId::C1_9 => "C1.9",
            CheckId::T1_10_fwd => "T1.10.fwd",
            CheckId::T1_10_conv => "T1.10.conv",
            CheckId::T7_1_i => "T7.1.i",
            CheckId::T7_1_ii => "T7.1.ii",
        }
    }

    pub fn parse(s: &str) -> Option<CheckId> {
        CheckId::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CheckId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped { precondition: String },
    Capped { resource: String },
}

impl Status {
    pub fn key(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped { .. } => "skipped",
            Status::Capped { .. } => "capped",
        }
    }
}

/// What a single check produced, before it is tagged with group and σ.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub detail: Option<String>,
    pub witness: Option<Value>,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            status: Status::Pass,
            detail: Some(detail.into()),
            witness: None,
        }
    }

    pub fn fail(detail: impl Into<String>, witness: Value) -> Self {
        Outcome {
            status: Status::Fail,
            detail: Some(detail.into()),
            witness: Some(witness),
        }
    }

    pub fn skip(precondition: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped {
                precondition: precondition.into(),
            },
            detail: None,
            witness: None,
        }
    }

    pub fn capped(resource: impl Into<String>) -> Self {
        Outcome {
            status: Status::Capped {
                resource: resource.into(),
            },
            detail: None,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: CheckId,
    pub group: String,
    pub sigma: String,
    #[serde(flatten)]
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Bound on complete Hall σ-sets and Sylow bases materialized per check.
    pub hall_cap: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            hall_cap: DEFAULT_HALL_SET_CAP,
        }
    }
}

/// Invariants of one `(G, σ)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub sigma: String,
    pub blocks: Vec<Vec<u64>>,
    pub order: usize,
    pub pi: Vec<u64>,
    pub sigma_of_group: Vec<u64>,
    pub subgroups: usize,
    pub abelian: bool,
    pub nilpotent: bool,
    pub soluble: bool,
    pub supersoluble: bool,
    pub schmidt: bool,
    pub sigma_primary: bool,
    pub sigma_nilpotent: bool,
    pub sigma_soluble: bool,
    pub sigma_fiber: bool,
    pub m_sigma: usize,
    pub m_sigma_q: usize,
    pub h_sigma: Option<usize>,
    pub l_sigma: Option<usize>,
    pub rank: Option<u32>,
    pub sigma_residual_order: usize,
    pub f_sigma_order: usize,
    pub sigma_subnormal_count: usize,
    pub pi_minus_m_sigma: i64,
    pub pi_minus_h_sigma: Option<i64>,
    pub h_sigma_monotone: bool,
    pub m_sigma_monotone: bool,
    pub m_sigma_q_monotone: bool,
    pub no_complete_hall_set: bool,
}

pub fn summarize(lat: &Lattice, sigma: &SigmaPartition) -> GroupSummary {
    let mut s = SigmaSession::new(lat, sigma);
    summarize_with(lat, sigma, &mut s)
}

pub(crate) fn summarize_with(lat: &Lattice, sigma: &SigmaPartition, s: &mut SigmaSession) -> GroupSummary {
    let g = lat.group();
    let pi = g.primes();
    let inv = s.invariants();
    let sigma_soluble = sigma::is_sigma_soluble(lat, sigma);
    let l_sigma = sigma::l_sigma(lat, sigma).ok();
    GroupSummary {
        group: g.name().to_string(),
        sigma: sigma.label().to_string(),
        blocks: sigma.induced_on(&pi),
        order: g.order(),
        sigma_of_group: sigma::sigma_of_group(sigma, lat)
            .into_iter()
            .map(|b| b.0)
            .collect(),
        subgroups: lat.len(),
        abelian: lat.is_abelian(),
        nilpotent: lat.is_nilpotent(),
        soluble: lat.is_soluble(),
        supersoluble: lat.is_supersoluble(),
        schmidt: lat.is_schmidt(),
        sigma_primary: sigma::is_sigma_primary(sigma, lat),
        sigma_nilpotent: sigma::is_sigma_nilpotent(lat, sigma),
        sigma_soluble,
        sigma_fiber: sigma::is_sigma_fiber(sigma, lat),
        m_sigma: inv.m_sigma,
        m_sigma_q: inv.m_sigma_q,
        h_sigma: inv.spencer_height,
        l_sigma,
        rank: lat.rank().ok(),
        sigma_residual_order: lat.order(sigma::sigma_residual(lat, sigma)),
        f_sigma_order: lat.order(sigma::f_sigma(lat, sigma)),
        sigma_subnormal_count: s.sigma_subnormal_set().len(),
        pi_minus_m_sigma: pi.len() as i64 - inv.m_sigma as i64,
        pi_minus_h_sigma: inv.spencer_height.map(|h| pi.len() as i64 - h as i64),
        h_sigma_monotone: inv.monotonicity_flag,
        m_sigma_monotone: inv.m_sigma_monotone,
        m_sigma_q_monotone: inv.m_sigma_q_monotone,
        no_complete_hall_set: sigma::hall_choices(lat, sigma).iter().any(|(_, v)| v.is_empty()),
        pi,
    }
}

/// Every check for one `(G, σ)` pair, in catalog order, plus the summary.
pub fn verify_group(
    lat: &Lattice,
    sigma: &SigmaPartition,
    cfg: &VerifyConfig,
) -> (GroupSummary, Vec<CheckResult>) {
    let mut ctx = Ctx::new(lat, sigma, cfg);
    let summary = ctx.summary();
    let results = CheckId::ALL
        .into_iter()
        .map(|id| {
            let o = ctx.run(id);
            CheckResult {
                check: id,
                group: summary.group.clone(),
                sigma: summary.sigma.clone(),
                status: o.status,
                detail: o.detail,
                witness: o.witness,
            }
        })
        .collect();
    (summary, results)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub capped: usize,
}

impl Counts {
    fn add(&mut self, s: &Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Skipped { .. } => self.skipped += 1,
            Status::Capped { .. } => self.capped += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub totals: Counts,
    pub errored: usize,
    pub groups: usize,
    pub pairs: usize,
    pub by_check: BTreeMap<String, Counts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryError {
    pub group: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub corpus: String,
    pub sigma: Vec<String>,
    pub max_order: Option<usize>,
    pub hall_cap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; the only field allowed to differ
    /// between runs with the same configuration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub config: ConfigEcho,
    pub summary: Summary,
    pub errors: Vec<EntryError>,
    pub groups: Vec<GroupSummary>,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn has_failures(&self) -> bool {
        self.summary.totals.fail > 0
    }
}

/// Runs every entry against every selected partition. Entries above
/// `max_order` are left out; entries that fail to load or enumerate are
/// reported as errors without stopping the run.
pub fn verify_corpus(
    items: &[CorpusItem],
    selectors: &[PartitionSelector],
    max_order: Option<usize>,
    cfg: &VerifyConfig,
    echo: ConfigEcho,
) -> Report {
    type EntryResult = Result<Vec<(GroupSummary, Vec<CheckResult>)>, EntryError>;
    let per_entry: Vec<EntryResult> = items
        .par_iter()
        .filter(|item| match (item, max_order) {
            (CorpusItem::Entry(e), Some(m)) => e.order <= m,
            _ => true,
        })
        .map(|item| {
            let entry = match item {
                CorpusItem::Entry(e) => e,
                CorpusItem::Failed { name, error } => {
                    return Err(EntryError {
                        group: name.clone(),
                        error: error.clone(),
                    })
                }
            };
            let err = |e: String| EntryError {
                group: entry.name.clone(),
                error: e,
            };
            let lat = entry.lattice().map_err(|e| err(e.to_string()))?;
            let parts = partitions_for(&lat.group().primes(), selectors).map_err(|e| err(e.to_string()))?;
            Ok(parts
                .par_iter()
                .map(|sigma| verify_group(&lat, sigma, cfg))
                .collect())
        })
        .collect();

    let mut groups = Vec::new();
    let mut results = Vec::new();
    let mut errors = Vec::new();
    for r in per_entry {
        match r {
            Ok(v) => {
                for (s, rs) in v {
                    groups.push(s);
                    results.extend(rs);
                }
            }
            Err(e) => errors.push(e),
        }
    }
    groups.sort_by(|a, b| (&a.group, &a.sigma).cmp(&(&b.group, &b.sigma)));
    results.sort_by(|a, b| (&a.group, &a.sigma, a.check).cmp(&(&b.group, &b.sigma, b.check)));
    errors.sort_by(|a, b| a.group.cmp(&b.group));

    let mut summary = Summary {
        errored: errors.len(),
        groups: groups
            .iter()
            .map(|g| &g.group)
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        pairs: groups.len(),
        ..Summary::default()
    };
    for r in &results {
        summary.totals.add(&r.status);
        summary
            .by_check
            .entry(r.check.to_string())
            .or_default()
            .add(&r.status);
    }
    Report {
        schema: REPORT_SCHEMA,
        tool: "sigma".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        generated_unix: None,
        config: echo,
        summary,
        errors,
        groups,
        results,
    }
}
