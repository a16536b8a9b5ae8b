//! Builtin group catalog, on-disk corpora and partition selection.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::group::{construct, Action, GroupError, GroupSpec};
use crate::lattice::{enumerate_subgroups, Lattice, LatticeError};
use crate::sigma::{SigmaError, SigmaPartition};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error("unknown partition selector {0:?}")]
    UnknownSelector(String),
    #[error("unknown corpus source {0:?}")]
    UnknownSource(String),
    #[error("corpus directory {path}: {detail}")]
    Directory { path: PathBuf, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(skip)]
    pub spec: GroupSpec,
    pub order: usize,
    pub tags: BTreeSet<String>,
}

impl CorpusEntry {
    /// Builds the entry's group and computes its tags.
    pub fn new(name: impl Into<String>, spec: GroupSpec) -> Result<Self, CorpusError> {
        let lat = enumerate_subgroups(&construct(&spec)?)?;
        Ok(CorpusEntry {
            name: name.into(),
            order: lat.group().order(),
            tags: tags_for(&lat),
            spec,
        })
    }

    pub fn lattice(&self) -> Result<Lattice, CorpusError> {
        let g = construct(&self.spec)?.with_name(self.name.clone());
        Ok(enumerate_subgroups(&g)?)
    }
}

/// Grouping tags; report cosmetics only.
pub fn tags_for(lat: &Lattice) -> BTreeSet<String> {
    let mut tags = BTreeSet::new();
    let mut tag = |on: bool, t: &str| {
        if on {
            tags.insert(t.to_string());
        }
    };
    tag(lat.is_abelian(), "abelian");
    tag(lat.is_nilpotent(), "nilpotent");
    tag(lat.is_soluble(), "soluble");
    tag(lat.is_schmidt(), "schmidt");
    tag(
        lat.group().order() > 1 && lat.normal_subgroups().len() == 2,
        "simple",
    );
    tags
}

fn c(n: usize) -> GroupSpec {
    GroupSpec::Cyclic(n)
}

fn x(a: GroupSpec, b: GroupSpec) -> GroupSpec {
    GroupSpec::direct(a, b)
}

fn builtin_specs() -> Vec<(&'static str, GroupSpec)> {
    let sl23 = GroupSpec::PermGens(
        8,
        vec![vec![3, 7, 2, 6, 1, 5, 0, 4], vec![5, 2, 0, 6, 3, 1, 7, 4]],
    );
    vec![
        ("C1", c(1)),
        ("C2", c(2)),
        ("C3", c(3)),
        ("C4", c(4)),
        ("C5", c(5)),
        ("C6", c(6)),
        ("C8", c(8)),
        ("C9", c(9)),
        ("C12", c(12)),
        ("C30", c(30)),
        ("V4", x(c(2), c(2))),
        ("C2^3", x(x(c(2), c(2)), c(2))),
        ("C3^2", x(c(3), c(3))),
        ("C2xC4", x(c(2), c(4))),
        ("D8", GroupSpec::Dihedral(4)),
        ("D10", GroupSpec::Dihedral(5)),
        ("D12", GroupSpec::Dihedral(6)),
        ("D14", GroupSpec::Dihedral(7)),
        ("D16", GroupSpec::Dihedral(8)),
        ("D18", GroupSpec::Dihedral(9)),
        ("D20", GroupSpec::Dihedral(10)),
        ("D24", GroupSpec::Dihedral(12)),
        ("D30", GroupSpec::Dihedral(15)),
        ("Q8", GroupSpec::Dicyclic(2)),
        ("Dic16", GroupSpec::Dicyclic(4)),
        ("S3", GroupSpec::Symmetric(3)),
        ("S4", GroupSpec::Symmetric(4)),
        ("A4", GroupSpec::Alternating(4)),
        ("A5", GroupSpec::Alternating(5)),
        ("SL(2,3)", sl23),
        ("C5:C4", GroupSpec::semidirect(c(5), c(4), Action::Power(2))),
        ("C7:C3", GroupSpec::semidirect(c(7), c(3), Action::Power(2))),
        ("C13:C3", GroupSpec::semidirect(c(13), c(3), Action::Power(3))),
        ("C3:C4", GroupSpec::semidirect(c(3), c(4), Action::Inversion)),
        (
            "C3^2:C2",
            GroupSpec::semidirect(x(c(3), c(3)), c(2), Action::Inversion),
        ),
        ("C2xA4", x(c(2), GroupSpec::Alternating(4))),
        ("C3xS3", x(c(3), GroupSpec::Symmetric(3))),
        ("S3xS3", x(GroupSpec::Symmetric(3), GroupSpec::Symmetric(3))),
        ("C3^3", x(x(c(3), c(3)), c(3))),
    ]
}

/// The builtin catalog, all of order at most 120. `C5:C4` is the Frobenius
/// group of order 20.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    builtin_specs()
        .into_iter()
        .map(|(name, spec)| CorpusEntry::new(name, spec).expect("builtin entries construct"))
        .collect()
}

/// The builtin catalog plus `S5`.
pub fn builtin_corpus_extended() -> Vec<CorpusEntry> {
    let mut out = builtin_corpus();
    out.push(CorpusEntry::new("S5", GroupSpec::Symmetric(5)).expect("S5 constructs"));
    out
}

pub fn find_builtin(name: &str) -> Option<CorpusEntry> {
    builtin_specs()
        .into_iter()
        .chain([("S5", GroupSpec::Symmetric(5))])
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(n, spec)| CorpusEntry::new(n, spec).expect("builtin entries construct"))
}

/// One corpus slot; a file that fails to load is kept as an error so the
/// rest of the corpus still runs.
#[derive(Debug)]
pub enum CorpusItem {
    Entry(CorpusEntry),
    Failed { name: String, error: String },
}

impl CorpusItem {
    pub fn name(&self) -> &str {
        match self {
            CorpusItem::Entry(e) => &e.name,
            CorpusItem::Failed { name, .. } => name,
        }
    }
}

/// Every `*.json` group file in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusItem>, CorpusError> {
    let err = |detail: String| CorpusError::Directory {
        path: dir.to_path_buf(),
        detail,
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| err(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let stem = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let spec = GroupSpec::CayleyFile(p.clone());
            match construct(&spec) {
                Ok(g) => {
                    let name = g.name().to_string();
                    match CorpusEntry::new(name.clone(), spec) {
                        Ok(e) => CorpusItem::Entry(e),
                        Err(e) => CorpusItem::Failed {
                            name,
                            error: e.to_string(),
                        },
                    }
                }
                Err(e) => CorpusItem::Failed {
                    name: stem,
                    error: e.to_string(),
                },
            }
        })
        .collect())
}

/// A group from `builtin:NAME` or a group file path.
pub fn resolve_group(source: &str) -> Result<CorpusEntry, CorpusError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return find_builtin(name).ok_or_else(|| CorpusError::UnknownSource(source.to_string()));
    }
    let spec = GroupSpec::CayleyFile(PathBuf::from(source));
    let g = construct(&spec)?;
    CorpusEntry::new(g.name().to_string(), spec)
}

pub fn load_partition_file(path: &Path) -> Result<SigmaPartition, SigmaError> {
    SigmaPartition::load(path)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionSelector {
    Finest,
    TwoBlock(Vec<u64>),
    AllTwoBlocks,
    FromFile(PathBuf),
}

impl PartitionSelector {
    /// `finest`, `two-block:2,3`, `all-two-blocks` or `file:<path>`.
    pub fn parse(s: &str) -> Result<Self, CorpusError> {
        let s = s.trim();
        if s == "finest" {
            return Ok(PartitionSelector::Finest);
        }
        if s == "all-two-blocks" {
            return Ok(PartitionSelector::AllTwoBlocks);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(PartitionSelector::FromFile(PathBuf::from(path)));
        }
        if let Some(list) = s.strip_prefix("two-block:") {
            let primes: Result<Vec<u64>, _> = list.split(',').map(|p| p.trim().parse::<u64>()).collect();
            return match primes {
                Ok(p) if !p.is_empty() => {
                    SigmaPartition::two_block(&p)?;
                    Ok(PartitionSelector::TwoBlock(p))
                }
                _ => Err(CorpusError::UnknownSelector(s.to_string())),
            };
        }
        Err(CorpusError::UnknownSelector(s.to_string()))
    }

    /// Comma-separated list; `two-block:` prime lists may not contain commas
    /// here, so use `+` between their primes (`two-block:2+3`).
    pub fn parse_list(s: &str) -> Result<Vec<Self>, CorpusError> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| Self::parse(&t.replace('+', ",")))
            .collect()
    }
}

/// Nonempty proper-or-full subsets `π ⊆ π(G)` used by `AllTwoBlocks`.
fn two_block_sets(primes: &[u64]) -> Vec<Vec<u64>> {
    if primes.len() <= 3 {
        (1u32..(1 << primes.len()))
            .map(|mask| {
                primes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &p)| p)
                    .collect()
            })
            .collect()
    } else {
        let mut out: Vec<Vec<u64>> = primes.iter().map(|&p| vec![p]).collect();
        out.push(primes.to_vec());
        out
    }
}

/// The partitions to run for a group of order with prime set `primes`,
/// deduplicated by the block structure they induce on `primes`.
pub fn partitions_for(
    primes: &[u64],
    selectors: &[PartitionSelector],
) -> Result<Vec<SigmaPartition>, CorpusError> {
    if primes.is_empty() {
        return Ok(vec![SigmaPartition::finest()]);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |p: SigmaPartition| {
        if seen.insert(p.induced_on(primes)) {
            out.push(p);
        }
    };
    for sel in selectors {
        match sel {
            PartitionSelector::Finest => push(SigmaPartition::finest()),
            PartitionSelector::TwoBlock(pi) => push(SigmaPartition::two_block(pi)?),
            PartitionSelector::AllTwoBlocks => {
                for pi in two_block_sets(primes) {
                    push(SigmaPartition::two_block(&pi)?);
                }
            }
            PartitionSelector::FromFile(path) => {
                let p = load_partition_file(path)?.with_label(format!("file:{}", path.display()));
                push(p);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::BlockId;

    #[test]
    fn builtin_catalog() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 30);
        assert!(corpus.iter().all(|e| e.order <= 120));
        let names: BTreeSet<&str> = corpus.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), corpus.len());
        let s3 = corpus.iter().find(|e| e.name == "S3").unwrap();
        assert_eq!(s3.order, 6);
        assert_eq!(s3.tags, BTreeSet::from(["soluble".into(), "schmidt".into()]));
        let a5 = corpus.iter().find(|e| e.name == "A5").unwrap();
        assert_eq!(a5.tags, BTreeSet::from(["simple".to_string()]));
        let sl = corpus.iter().find(|e| e.name == "SL(2,3)").unwrap();
        assert_eq!(sl.order, 24);
        let c54 = corpus.iter().find(|e| e.name == "C5:C4").unwrap();
        assert_eq!(c54.order, 20);
        assert_eq!(c54.lattice().unwrap().center(), 0);
    }

    #[test]
    fn selectors_parse() {
        assert_eq!(
            PartitionSelector::parse("finest").unwrap(),
            PartitionSelector::Finest
        );
        assert_eq!(
            PartitionSelector::parse("two-block:2,3").unwrap(),
            PartitionSelector::TwoBlock(vec![2, 3])
        );
        assert_eq!(
            PartitionSelector::parse_list("finest,all-two-blocks,two-block:2+5").unwrap(),
            vec![
                PartitionSelector::Finest,
                PartitionSelector::AllTwoBlocks,
                PartitionSelector::TwoBlock(vec![2, 5])
            ]
        );
        assert!(PartitionSelector::parse("two-block:4").is_err());
        assert!(PartitionSelector::parse("coarse").is_err());
    }

    #[test]
    fn partition_selection() {
        let s3 = partitions_for(
            &[2, 3],
            &[PartitionSelector::Finest, PartitionSelector::AllTwoBlocks],
        )
        .unwrap();
        assert_eq!(s3.len(), 2);
        assert_eq!(s3[0].label(), "finest");
        assert_eq!(s3[1].induced_on(&[2, 3]), vec![vec![2, 3]]);
        let a5 = partitions_for(&[2, 3, 5], &[PartitionSelector::AllTwoBlocks]).unwrap();
        let proper = a5.iter().filter(|p| p.induced_on(&[2, 3, 5]).len() == 2).count();
        assert_eq!(proper, 3);
        assert_eq!(a5.len(), 4);
        assert_eq!(
            partitions_for(&[], &[PartitionSelector::AllTwoBlocks]).unwrap(),
            vec![SigmaPartition::finest()]
        );
        let four = partitions_for(&[2, 3, 5, 7], &[PartitionSelector::AllTwoBlocks]).unwrap();
        assert_eq!(four.len(), 5);
    }

    #[test]
    fn partition_file_lookup() {
        let dir = std::env::temp_dir().join(format!("sigma-part-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.json");
        std::fs::write(&path, r#"{"blocks": [[2,3],[5]]}"#).unwrap();
        let p = load_partition_file(&path).unwrap();
        assert_eq!(p.block_of(2), p.block_of(3));
        assert_eq!(p.block_of(5), BlockId(5));
        assert_eq!(p.block_of(7), BlockId(7));
        std::fs::write(&path, r#"{"blocks": [[2,3],[3]]}"#).unwrap();
        assert!(load_partition_file(&path).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn corpus_dir_isolates_bad_files() {
        let dir = std::env::temp_dir().join(format!("sigma-corpus-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(
            dir.join("a.json"),
            r#"{"name": "C2", "kind": "cayley", "table": [[0,1],[1,0]]}"#,
        )
        .unwrap();
        std::fs::write(
            dir.join("b.json"),
            r#"{"name": "bad", "kind": "cayley", "table": [[0,1],[0,1]]}"#,
        )
        .unwrap();
        std::fs::write(
            dir.join("c.json"),
            r#"{"name": "A5", "kind": "permgens", "degree": 5, "generators": [[1,2,0,3,4],[0,1,3,4,2]]}"#,
        )
        .unwrap();
        let items = load_corpus_dir(&dir).unwrap();
        assert_eq!(items.len(), 3);
        assert!(matches!(&items[0], CorpusItem::Entry(e) if e.order == 2));
        assert!(matches!(&items[1], CorpusItem::Failed { name, .. } if name == "b"));
        assert!(matches!(&items[2], CorpusItem::Entry(e) if e.order == 60));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
