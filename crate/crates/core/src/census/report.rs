//! Theorem verification and the invariant suite over a finished census.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::CensusRecord;
use crate::aut::{self, Certificate};
use crate::graph::{Graph, Partition};
use crate::group::cyclic_subgroup;
use crate::nest::NestParams;
use crate::symmetry::{self, is_elementary_abelian_2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Partial,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Partial => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub iso_class: Option<usize>,
    pub representative: NestParams,
    pub members: usize,
    pub aut_order: Option<u128>,
    pub matched: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub max_n: usize,
    pub record_count: usize,
    pub candidate_count: usize,
    pub classes: Vec<ClassReport>,
    pub problems: Vec<String>,
    pub verdict: Verdict,
}

/// Structural description of the fourth graph of the classification:
/// a normal block system with blocks of size 4 whose quotient is `K₃,₃`,
/// with cover index 2 and an elementary abelian kernel of order 16.
#[derive(Clone, Debug, Serialize)]
pub struct TwoCoverWitness {
    pub blocks: Partition,
    pub quotient_is_k33: bool,
    pub cover_index: Option<usize>,
    pub kernel_order: u128,
    pub kernel_elementary_abelian: bool,
    pub kernel_orbit_lengths: Vec<usize>,
}

impl TwoCoverWitness {
    pub fn holds(&self) -> bool {
        self.quotient_is_k33
            && self.cover_index == Some(2)
            && self.kernel_order == 16
            && self.kernel_elementary_abelian
            && self.kernel_orbit_lengths.iter().all(|&l| l == 4)
    }
}

/// Searches the minimal non-cyclic normal block systems of size 4 for the
/// 2-cover witness.
pub fn two_cover_witness(p: &NestParams) -> Option<TwoCoverWitness> {
    let g = p.build();
    let grp = aut::automorphism_group(&g);
    if !grp.is_transitive() {
        return None;
    }
    let k33 = aut::canonical_form(&Graph::complete_bipartite(3, 3));
    let systems = symmetry::minimal_block_systems(&grp, 0, Some(p.n)).ok()?;
    systems
        .into_iter()
        .filter(|s| s.block_size == 4 && s.cyclic == Some(false) && s.normal)
        .map(|s| {
            let quotient = g
                .quotient(&s.partition)
                .expect("partition of the vertex set");
            TwoCoverWitness {
                quotient_is_k33: aut::canonical_form(&quotient) == k33,
                cover_index: g.cover_index(&s.partition),
                kernel_order: s.kernel_order,
                kernel_elementary_abelian: is_elementary_abelian_2(&s.kernel),
                kernel_orbit_lengths: s.kernel.orbits().iter().map(Vec::len).collect(),
                blocks: s.partition,
            }
        })
        .find(TwoCoverWitness::holds)
}

struct Reference {
    name: &'static str,
    certificate: Certificate,
}

fn references() -> Vec<Reference> {
    [
        ("petersen_complement", Graph::petersen_complement()),
        ("hamming_2_4", Graph::hamming_2_4()),
        ("shrikhande", Graph::shrikhande()),
    ]
    .into_iter()
    .map(|(name, g)| Reference {
        name,
        certificate: aut::canonical_form(&g),
    })
    .collect()
}

pub const TWO_COVER: &str = "two_cover_k33";

/// Names the reference graph isomorphic to `build(p)`, if any.
pub fn reference_match(p: &NestParams) -> Option<String> {
    let cert = aut::canonical_form(&p.build());
    if let Some(r) = references().into_iter().find(|r| r.certificate == cert) {
        return Some(r.name.to_string());
    }
    two_cover_witness(p).map(|_| TWO_COVER.to_string())
}

/// Checks the classification against a census: the edge-transitive
/// core-free records must form exactly the four expected classes.
pub fn verify_theorem(records: &[CensusRecord]) -> TheoremReport {
    let max_n = records.iter().map(|r| r.params.n).max().unwrap_or(0);
    let mut problems = Vec::new();

    for r in records {
        if r.edge_transitive && !r.prefilter {
            problems.push(format!(
                "{}: edge-transitive but rejected by the prefilter",
                r.params
            ));
        }
        if r.edge_transitive && (r.core_free.is_none() || r.certificate.is_none()) {
            problems.push(format!(
                "{}: edge-transitive with missing profile fields",
                r.params
            ));
        }
    }

    // Unprofiled edge-transitive records are candidates too, so that a
    // corrupted flag cannot hide a class.
    let candidates: Vec<&CensusRecord> = records
        .iter()
        .filter(|r| r.edge_transitive && r.core_free != Some(false))
        .collect();

    let mut groups: BTreeMap<String, Vec<&CensusRecord>> = BTreeMap::new();
    for r in &candidates {
        let recomputed = aut::canonical_form(&r.params.build()).to_hex();
        if let Some(stored) = &r.certificate {
            if *stored != recomputed {
                problems.push(format!("{}: stored certificate does not match", r.params));
            }
        }
        groups.entry(recomputed).or_default().push(r);
    }

    let mut classes = Vec::new();
    for members in groups.values() {
        let rep = members[0];
        let matched = reference_match(&rep.params);
        if matched.is_none() {
            problems.push(format!("{}: class matches no reference graph", rep.params));
        }
        classes.push(ClassReport {
            iso_class: rep.iso_class,
            representative: rep.params,
            members: members.len(),
            aut_order: rep.aut_order,
            matched,
        });
    }
    classes.sort_by_key(|c| c.representative);

    let names: Vec<&str> = classes
        .iter()
        .filter_map(|c| c.matched.as_deref())
        .collect();
    let distinct: BTreeSet<&str> = names.iter().copied().collect();
    if distinct.len() != names.len() {
        problems.push("a reference graph matches more than one class".to_string());
    }

    let verdict = if !problems.is_empty() {
        Verdict::Fail
    } else if max_n < 12 {
        Verdict::Partial
    } else if classes.len() == 4 && distinct.len() == 4 {
        Verdict::Pass
    } else {
        problems.push(format!("expected 4 classes, found {}", classes.len()));
        Verdict::Fail
    };

    TheoremReport {
        max_n,
        record_count: records.len(),
        candidate_count: candidates.len(),
        classes,
        problems,
        verdict,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.counterexamples.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub max_n: usize,
    pub checks: Vec<CheckResult>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

fn record_invariants(records: &[CensusRecord]) -> CheckResult {
    let mut c = CheckResult::new("record invariants");
    let mut by_cert: BTreeMap<&str, &CensusRecord> = BTreeMap::new();
    for r in records {
        let p = r.params;
        c.check(r.vertex_count == 2 * p.n, || format!("{p}: vertex_count"));
        c.check(r.core_free.is_none() == r.core_order.is_none(), || {
            format!("{p}: core_free and core_order disagree on presence")
        });
        if let (Some(free), Some(order)) = (r.core_free, r.core_order) {
            c.check(free == (order == 1), || {
                format!("{p}: core_free vs core_order {order}")
            });
        }
        c.check(!r.arc_transitive || r.edge_transitive, || {
            format!("{p}: arc-transitive but not edge-transitive")
        });
        c.check(
            !r.edge_transitive || r.vertex_transitive == Some(true),
            || format!("{p}: edge-transitive but not vertex-transitive"),
        );
        c.check(r.prefilter || !r.edge_transitive, || {
            format!("{p}: prefilter rejected an edge-transitive graph")
        });
        c.check(r.certificate.is_some() == r.iso_class.is_some(), || {
            format!("{p}: iso_class without certificate")
        });
        if let Some(cert) = r.certificate.as_deref() {
            if let Some(first) = by_cert.get(cert) {
                let same = first.aut_order == r.aut_order
                    && first.girth == r.girth
                    && first.vertex_transitive == r.vertex_transitive
                    && first.edge_transitive == r.edge_transitive
                    && first.arc_transitive == r.arc_transitive
                    && first.iso_class == r.iso_class;
                c.check(same, || {
                    format!("{p}: differs from isomorphic {}", first.params)
                });
            } else {
                by_cert.insert(cert, r);
            }
        }
    }
    c
}

/// Runs every implication check over the census records.
pub fn invariant_suite(records: &[CensusRecord]) -> InvariantReport {
    let max_n = records.iter().map(|r| r.params.n).max().unwrap_or(0);
    let mut checks = vec![record_invariants(records)];

    let mut arc = CheckResult::new("(i) c = a + b implies edge- and arc-transitivity coincide");
    let mut lucchini = CheckResult::new("(ii) core-free proper cyclic subgroup: n^2 < |Aut|");
    for r in records {
        let p = r.params;
        if p.c == (p.a + p.b) % p.n {
            arc.check(r.edge_transitive == r.arc_transitive, || p.to_string());
        }
        if let (Some(true), Some(order)) = (r.core_free, r.aut_order) {
            if order != p.n as u128 {
                let n = p.n as u128;
                lucchini.check(n * n < order, || format!("{p}: n^2 = {} >= {order}", n * n));
            }
        }
    }
    checks.push(arc);
    checks.push(lucchini);

    let mut cyclic =
        CheckResult::new("(iii) cyclic systems with d < n/2: kernel C_d, normal cover, quotient");
    let mut noncyclic = CheckResult::new(
        "(iv) non-cyclic systems: even size, unions of C_(d/2)-orbits, normal if d > 2",
    );
    let mut covers = CheckResult::new("normal systems: an r-cover has a (6/r)-regular quotient");
    let mut family = CheckResult::new(
        "(v) non-trivial kernel on U with n > 8 implies the (2m;2,m,2+m;1) family",
    );
    for r in records.iter().filter(|r| r.edge_transitive) {
        let p = r.params;
        let g = p.build();
        let grp = aut::automorphism_group(&g);
        let systems = match symmetry::minimal_block_systems(&grp, 0, Some(p.n)) {
            Ok(s) => s,
            Err(e) => {
                cyclic.check(false, || format!("{p}: {e}"));
                continue;
            }
        };
        for s in &systems {
            let d = s.block_size;
            if let (true, Some(r)) = (s.normal, g.cover_index(&s.partition)) {
                let q = g
                    .quotient(&s.partition)
                    .expect("partition of the vertex set");
                covers.check(6 % r == 0 && q.regular_degree() == Some(6 / r), || {
                    format!(
                        "{p}: {r}-cover with quotient degree {:?}",
                        q.regular_degree()
                    )
                });
            }
            if s.cyclic == Some(true) {
                if 2 * d >= p.n {
                    continue;
                }
                let cd = cyclic_subgroup(&p.rho(), d as u64).expect("d divides n");
                let kernel_ok = s.kernel_order == d as u128 && cd.is_subgroup_of(&s.kernel);
                cyclic.check(kernel_ok, || {
                    format!("{p}: kernel of order {} for d = {d}", s.kernel_order)
                });
                cyclic.check(g.cover_index(&s.partition) == Some(1), || {
                    format!("{p}: not a cover of the quotient for d = {d}")
                });
                let quotient = g
                    .quotient(&s.partition)
                    .expect("partition of the vertex set");
                let iso = match p.quotient_params(d) {
                    Ok(Some(q)) => aut::are_isomorphic(&quotient, &q.build()).is_some(),
                    _ => false,
                };
                cyclic.check(iso, || {
                    format!("{p}: quotient for d = {d} is not the reduced Nest graph")
                });
            } else {
                noncyclic.check(d % 2 == 0, || format!("{p}: odd block size {d}"));
                if d % 2 == 0 {
                    noncyclic.check(
                        symmetry::blocks_are_unions_of_cyclic_orbits(&p, &s.partition, d / 2),
                        || {
                            format!(
                                "{p}: blocks of size {d} are not unions of C_{}-orbits",
                                d / 2
                            )
                        },
                    );
                }
                if d > 2 {
                    noncyclic.check(s.normal, || {
                        format!("{p}: minimal system of size {d} not normal")
                    });
                }
            }
        }

        if p.n > 8 {
            let u: Vec<usize> = (0..p.n).collect();
            let fixer = grp.pointwise_stabilizer(&u).expect("points in range");
            if !fixer.is_trivial() {
                let m = p.n / 2;
                let ok = p.n % 2 == 0 && m % 2 == 1 && {
                    let target = NestParams::new(p.n as i64, 2, m as i64, 2 + m as i64, 1)
                        .expect("family parameters are valid");
                    r.certificate.as_deref()
                        == Some(aut::canonical_form(&target.build()).to_hex().as_str())
                };
                family.check(ok, || p.to_string());
            }
        }
    }
    checks.push(cyclic);
    checks.push(noncyclic);
    checks.push(covers);
    checks.push(family);

    let certs: BTreeSet<&str> = records
        .iter()
        .filter_map(|r| r.certificate.as_deref())
        .collect();
    let mut stab = CheckResult::new(
        "(vi) (2m;2,m,2+m;1), m odd: arc-transitive, stabiliser 12, not core-free",
    );
    for m in (3..).step_by(2).take_while(|m| 2 * m <= max_n) {
        let p = NestParams::new(2 * m as i64, 2, m as i64, 2 + m as i64, 1)
            .expect("family parameters are valid");
        let g = p.build();
        let analysis = aut::analyze(&g);
        let grp = &analysis.group;
        let arc_ok = symmetry::is_arc_transitive(&g, grp).expect("automorphisms");
        let stab_order = grp.point_stabilizer(0).expect("point in range").order();
        let core = symmetry::core_order(grp, &p).expect("rho is an automorphism");
        stab.check(arc_ok && stab_order == 12 && core > 1, || {
            format!("{p}: arc-transitive {arc_ok}, stabiliser {stab_order}, core {core}")
        });
        stab.check(
            certs.contains(analysis.certificate.to_hex().as_str()),
            || format!("{p}: isomorphism class missing from the census"),
        );
    }
    checks.push(stab);

    InvariantReport { max_n, checks }
}
