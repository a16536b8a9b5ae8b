//! Graphviz export of the subgroup lattice.

use std::fmt::Write;

use crate::lattice::Lattice;
use crate::sigma::SigmaPartition;
use crate::subnormality::SigmaSession;

/// Which properties to highlight.
#[derive(Clone, Copy, Debug, Default)]
pub struct Marks {
    pub normal: bool,
    pub sigma_subnormal: bool,
    pub sigma_quasinormal: bool,
}

impl Marks {
    pub fn all() -> Self {
        Marks {
            normal: true,
            sigma_subnormal: true,
            sigma_quasinormal: true,
        }
    }
}

/// Node label: `order:k` where k counts subgroups of that order from 1.
pub fn node_labels(lat: &Lattice) -> Vec<String> {
    let mut out = Vec::with_capacity(lat.len());
    let mut prev = 0;
    let mut k = 0;
    for i in 0..lat.len() {
        let n = lat.order(i);
        if n != prev {
            prev = n;
            k = 0;
        }
        k += 1;
        out.push(format!("{n}:{k}"));
    }
    out
}

pub fn export_dot(lat: &Lattice, sigma: &SigmaPartition, marks: Marks) -> String {
    let mut s = SigmaSession::new(lat, sigma);
    let labels = node_labels(lat);
    let mut out = String::new();
    let name = lat.group().name().replace('"', "'");
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [fontname=\"monospace\"];").unwrap();
    for (i, label) in labels.iter().enumerate() {
        let mut attrs = vec![format!("label=\"{label}\"")];
        let mut classes = Vec::new();
        if marks.normal && lat.is_normal(i) {
            attrs.push("shape=box".into());
            classes.push("normal");
        }
        if marks.sigma_subnormal && s.is_sigma_subnormal(i) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=lightblue".into());
            classes.push("sigma-subnormal");
        }
        if marks.sigma_quasinormal && s.is_sigma_quasinormal(i).holds {
            attrs.push("peripheries=2".into());
            classes.push("sigma-quasinormal");
        }
        if !classes.is_empty() {
            attrs.push(format!("class=\"{}\"", classes.join(" ")));
        }
        writeln!(out, "  n{i} [{}];", attrs.join(", ")).unwrap();
    }
    for i in 0..lat.len() {
        for &m in lat.maximal_subgroups(i) {
            writeln!(out, "  n{m} -> n{i};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
