//! Acceptance suite: one line per criterion, then a single assertion.
//! Run with `cargo test -p sigma-cli --test acceptance`.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use sigma_groups::corpus::{builtin_corpus, find_builtin, CorpusItem, PartitionSelector};
use sigma_groups::group::Group;
use sigma_groups::lattice::Lattice;
use sigma_groups::sigma::{self, SigmaPartition};
use sigma_groups::subnormality::SigmaSession;
use sigma_groups::verifier::{verify_corpus, CheckId, ConfigEcho, Status, VerifyConfig};

struct Outcome {
    ok: bool,
    note: String,
}

fn lattice(name: &str) -> Lattice {
    find_builtin(name).unwrap().lattice().unwrap()
}

fn subset_filter(g: &Group) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    (0..1u64 << (n - 1))
        .map(|rest| rest << 1 | 1)
        .filter(|&m| {
            (0..n).all(|a| m >> a & 1 == 0 || (0..n).all(|b| m >> b & 1 == 0 || m >> g.mul(a, b) & 1 == 1))
        })
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn m_sigma_q_a5() -> Outcome {
    let lat = lattice("A5");
    let sigma = SigmaPartition::finest();
    let m = SigmaSession::new(&lat, &sigma).m_sigma_q();
    Outcome {
        ok: m == 4,
        note: format!("m_σq(A5) = {m}"),
    }
}

fn enumeration_oracle() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for e in builtin_corpus().into_iter().filter(|e| e.order <= 12) {
        let lat = e.lattice().unwrap();
        let got: BTreeSet<Vec<usize>> = lat.subgroups().iter().map(|s| s.elements()).collect();
        if got.len() != lat.len() || got != subset_filter(lat.group()) {
            bad.push(e.name.clone());
        }
        n += 1;
    }
    Outcome {
        ok: bad.is_empty() && n > 0,
        note: format!("{n} groups of order ≤ 12, mismatches {bad:?}"),
    }
}

fn fixtures() -> Outcome {
    let f = SigmaPartition::finest();
    let m = |name: &str| SigmaSession::new(&lattice(name), &f).m_sigma();
    let h = |name: &str| SigmaSession::new(&lattice(name), &f).spencer_height().unwrap().0;
    let l = |name: &str| sigma::l_sigma(&lattice(name), &f).unwrap();
    let s3 = lattice("S3");
    let res = sigma::sigma_residual(&s3, &f);
    let a5 = lattice("A5");
    let sn = SigmaSession::new(&a5, &f).sigma_subnormal_set();
    let facts = [
        ("m_σ(S3)=2", m("S3") == 2),
        ("m_σ(A4)=2", m("A4") == 2),
        ("m_σ(S4)=4", m("S4") == 4),
        ("h_σ(S3)=2", h("S3") == 2),
        ("h_σ(A5)=4", h("A5") == 4),
        ("l_σ(S3)=2", l("S3") == 2),
        ("l_σ(S4)=3", l("S4") == 3),
        ("r(S4)=2", lattice("S4").rank().unwrap() == 2),
        ("residual(S3)=C3", s3.order(res) == 3 && s3.is_normal(res)),
        ("σSN(A5)={1,A5}", sn == vec![a5.trivial(), a5.top()]),
    ];
    let failed: Vec<&str> = facts.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Outcome {
        ok: failed.is_empty(),
        note: format!("{} facts, failed {failed:?}", facts.len()),
    }
}

fn theorem_suite() -> Outcome {
    let items: Vec<CorpusItem> = builtin_corpus().into_iter().map(CorpusItem::Entry).collect();
    let selectors = vec![PartitionSelector::Finest, PartitionSelector::AllTwoBlocks];
    let cfg = VerifyConfig::default();
    let echo = ConfigEcho {
        corpus: "builtin".into(),
        sigma: vec!["finest".into(), "all-two-blocks".into()],
        max_order: None,
        hall_cap: cfg.hall_cap,
    };
    let rep = verify_corpus(&items, &selectors, None, &cfg, echo);
    let fired = |id: CheckId, group: &str| {
        rep.results
            .iter()
            .any(|r| r.check == id && r.group == group && r.sigma == "finest" && r.status == Status::Pass)
    };
    let uncovered: Vec<&str> = CheckId::ALL
        .iter()
        .filter(|&&id| {
            !rep.results
                .iter()
                .any(|r| r.check == id && !matches!(r.status, Status::Skipped { .. }))
        })
        .map(|id| id.as_str())
        .collect();
    let mut gaps = Vec::new();
    for (what, ok) in [
        ("C1.7 on S3", fired(CheckId::C1_7, "S3")),
        ("C1.7 on A4", fired(CheckId::C1_7, "A4")),
        (
            "T1.10 on a Schmidt/Frobenius entry",
            ["S3", "A4", "C7:C3", "C13:C3", "D10"]
                .iter()
                .any(|g| fired(CheckId::T1_10_fwd, g)),
        ),
        (
            "T1.4.ii on SL(2,3) or A4",
            fired(CheckId::T1_4_ii, "SL(2,3)") || fired(CheckId::T1_4_ii, "A4"),
        ),
    ] {
        if !ok {
            gaps.push(what);
        }
    }
    let t = &rep.summary.totals;
    Outcome {
        ok: t.fail == 0 && t.capped == 0 && rep.errors.is_empty() && uncovered.is_empty() && gaps.is_empty(),
        note: format!(
            "{} pairs: {} pass, {} fail, {} skipped, {} capped; uncovered {uncovered:?}; missing {gaps:?}",
            rep.summary.pairs, t.pass, t.fail, t.skipped, t.capped
        ),
    }
}

fn closure() -> Outcome {
    let mut violations = 0;
    let mut pairs = 0u64;
    for e in builtin_corpus().into_iter().filter(|e| e.order <= 60) {
        let lat = e.lattice().unwrap();
        let primes = lat.group().primes();
        let mut parts = vec![SigmaPartition::finest()];
        if let Some(&p) = primes.first() {
            parts.push(SigmaPartition::two_block(&[p]).unwrap());
        }
        for sigma in parts {
            let mut s = SigmaSession::new(&lat, &sigma);
            let set = s.sigma_subnormal_set();
            for &a in &set {
                for &b in &set {
                    pairs += 1;
                    if !s.is_sigma_subnormal(lat.join(a, b)) || !s.is_sigma_subnormal(lat.meet(a, b)) {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome {
        ok: violations == 0,
        note: format!("{pairs} pairs, {violations} violations"),
    }
}

fn specialization() -> Outcome {
    let mut violations = Vec::new();
    for e in builtin_corpus() {
        let lat = e.lattice().unwrap();
        let f = SigmaPartition::finest();
        if sigma::is_sigma_nilpotent(&lat, &f) != lat.is_nilpotent()
            || sigma::is_sigma_soluble(&lat, &f) != lat.is_soluble()
        {
            violations.push(format!("{} finest", e.name));
        }
        let primes = lat.group().primes();
        if primes.is_empty() {
            continue;
        }
        let one = SigmaPartition::from_blocks(vec![primes]).unwrap();
        let mut s = SigmaSession::new(&lat, &one);
        let all = sigma::is_sigma_primary(&one, &lat)
            && sigma::is_sigma_nilpotent(&lat, &one)
            && sigma::is_sigma_soluble(&lat, &one)
            && sigma::is_sigma_fiber(&one, &lat) == (lat.group().primes().len() == 1)
            && s.sigma_subnormal_set().len() == lat.len()
            && s.m_sigma() == 1;
        if !all {
            violations.push(format!("{} one-block", e.name));
        }
    }
    Outcome {
        ok: violations.is_empty(),
        note: format!("violations {violations:?}"),
    }
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("sigma-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |n: usize| {
        let path = dir.join(format!("report{n}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_sigma"))
            .args([
                "verify",
                "--corpus",
                "builtin",
                "--sigma",
                "finest,all-two-blocks",
                "--report",
            ])
            .arg(&path)
            .status()
            .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let stripped: String = text
            .lines()
            .filter(|l| !l.contains("\"generated_unix\""))
            .collect::<Vec<_>>()
            .join("\n");
        (status.code(), stripped, text.contains("\"generated_unix\""))
    };
    let (c1, a, stamped) = run(1);
    let (c2, b, _) = run(2);
    let _ = std::fs::remove_dir_all(&dir);
    Outcome {
        ok: a == b && c1 == Some(0) && c2 == Some(0) && stamped,
        note: format!(
            "exit codes {c1:?}/{c2:?}, {} bytes, identical {}",
            a.len(),
            a == b
        ),
    }
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 7] = [
        ("1 m_σq(A5, finest) = 4", m_sigma_q_a5, Duration::from_secs(30)),
        (
            "2 enumeration matches subset filter",
            enumeration_oracle,
            Duration::from_secs(10),
        ),
        ("3 fixture values", fixtures, Duration::from_secs(60)),
        (
            "4 theorem suite green with coverage",
            theorem_suite,
            Duration::from_secs(300),
        ),
        (
            "5 σ-subnormal sublattice closure",
            closure,
            Duration::from_secs(120),
        ),
        (
            "6 finest and one-block specialization",
            specialization,
            Duration::from_secs(60),
        ),
        ("7 report determinism", determinism, Duration::from_secs(300)),
    ];
    let mut all = true;
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let out = f();
        let took = t.elapsed();
        let ok = out.ok && took <= budget;
        all &= ok;
        // Written to the raw stream so the lines show up without --nocapture.
        writeln!(
            std::io::stderr(),
            "{} [{name}] {:.2}s (budget {}s): {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            out.note
        )
        .unwrap();
    }
    assert!(all, "acceptance criteria failed");
}
