//! Known values, each computed both by the library and by a brute-force oracle.

mod common;

use std::collections::BTreeSet;

use common::{lattice, mask_of, Oracle};
use sigma_groups::sigma::{l_sigma, sigma_residual, SigmaPartition};
use sigma_groups::subnormality::SigmaSession;

fn finest() -> SigmaPartition {
    SigmaPartition::finest()
}

#[test]
fn m_sigma_q_of_a5_is_four() {
    let lat = lattice("A5");
    let sigma = finest();
    let mut s = SigmaSession::new(&lat, &sigma);
    assert_eq!(s.m_sigma_q(), 4);
}

#[test]
fn m_sigma_values() {
    for (name, want) in [("S3", 2), ("A4", 2), ("S4", 4)] {
        let lat = lattice(name);
        let sigma = finest();
        let got = SigmaSession::new(&lat, &sigma).m_sigma();
        assert_eq!(got, want, "{name}");
        assert_eq!(Oracle::new(&lat).m_sigma(&sigma), want, "{name} oracle");
    }
}

#[test]
fn h_sigma_values() {
    for (name, want) in [("S3", 2), ("A5", 4)] {
        let lat = lattice(name);
        let sigma = finest();
        let (got, _) = SigmaSession::new(&lat, &sigma).spencer_height().unwrap();
        assert_eq!(got, want, "{name}");
        assert_eq!(Oracle::new(&lat).h_sigma(&sigma), want, "{name} oracle");
    }
}

#[test]
fn l_sigma_values() {
    for (name, want) in [("S3", 2), ("S4", 3)] {
        let lat = lattice(name);
        let sigma = finest();
        assert_eq!(l_sigma(&lat, &sigma).unwrap(), want, "{name}");
        assert_eq!(Oracle::new(&lat).l_sigma(&sigma), want, "{name} oracle");
    }
}

#[test]
fn rank_of_s4_is_two() {
    let lat = lattice("S4");
    assert_eq!(lat.rank().unwrap(), 2);
    assert_eq!(Oracle::new(&lat).rank(), 2);
}

#[test]
fn residual_of_s3_is_c3() {
    let lat = lattice("S3");
    let r = sigma_residual(&lat, &finest());
    assert_eq!(lat.order(r), 3);
    assert!(lat.is_normal(r));
    assert_eq!(mask_of(&lat, r), Oracle::new(&lat).sigma_residual(&finest()));
}

#[test]
fn a5_sigma_subnormal_set_is_trivial_and_whole() {
    let lat = lattice("A5");
    let sigma = finest();
    let got = SigmaSession::new(&lat, &sigma).sigma_subnormal_set();
    assert_eq!(got, vec![lat.trivial(), lat.top()]);
    let oracle: BTreeSet<u64> = Oracle::new(&lat).sigma_subnormal(&sigma);
    assert_eq!(oracle, BTreeSet::from([1, mask_of(&lat, lat.top())]));
}

#[test]
fn a5_has_59_subgroups() {
    assert_eq!(lattice("A5").len(), 59);
    assert_eq!(lattice("S4").len(), 30);
}
