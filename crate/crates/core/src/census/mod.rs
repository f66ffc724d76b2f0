//! Exhaustive, isomorph-rejected census of Nest graphs.
//!
//! Per tuple: build → screen → (survivors only) automorphism group,
//! transitivity flags, core, certificate. Records are written as JSON lines
//! in `(n, a, b, c, k)` order; iso-class ids are assigned once the run is
//! complete, in sorted-certificate order.

mod report;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::cyclic_core;
use crate::nest::NestParams;
use crate::symmetry;

pub use report::{
    invariant_suite, reference_match, two_cover_witness, verify_theorem, CheckResult, ClassReport,
    InvariantReport, TheoremReport, TwoCoverWitness, Verdict, TWO_COVER,
};

/// Symmetry profile of one parameter tuple.
///
/// Fields that need the automorphism group are `None` when the screen
/// already proved the graph is not edge-transitive; `prefilter` records
/// whether the tuple passed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub params: NestParams,
    pub vertex_count: usize,
    pub aut_order: Option<u128>,
    pub vertex_transitive: Option<bool>,
    pub edge_transitive: bool,
    pub arc_transitive: bool,
    pub core_free: Option<bool>,
    pub core_order: Option<u64>,
    pub girth: Option<usize>,
    pub certificate: Option<String>,
    pub iso_class: Option<usize>,
    pub prefilter: bool,
}

/// Lexicographically least sorted triple among the images of `{a, b, c}`
/// under negation and the shifts `{a, b, c} → {−x, y − x, z − x}`.
fn is_least_offset_triple(n: usize, t: [usize; 3]) -> bool {
    let sort = |mut t: [usize; 3]| {
        t.sort_unstable();
        t
    };
    let mut seen = BTreeSet::from([t]);
    let mut stack = vec![t];
    while let Some(s) = stack.pop() {
        let mut images = vec![sort(s.map(|x| (n - x) % n))];
        for i in 0..3 {
            let x = s[i];
            images.push(sort(
                s.map(|y| if y == x { n - x } else { (y + n - x) % n }),
            ));
        }
        for img in images {
            if img < t {
                return false;
            }
            if seen.insert(img) {
                stack.push(img);
            }
        }
    }
    true
}

/// One tuple per isomorphism-closure class of valid parameters with
/// `4 ≤ n ≤ max_n`: offsets `a < b < c` least in their class and
/// `1 ≤ k ≤ ⌊(n−1)/2⌋`. Sorted by `(n, a, b, c, k)`.
pub fn enumerate_params(max_n: usize) -> Vec<NestParams> {
    let mut out = Vec::new();
    for n in 4..=max_n {
        for a in 1..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if !is_least_offset_triple(n, [a, b, c]) {
                        continue;
                    }
                    for k in 1..=(n - 1) / 2 {
                        out.push(
                            NestParams::new(n as i64, a as i64, b as i64, c as i64, k as i64)
                                .expect("enumerated tuples are valid"),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Necessary condition for edge-transitivity of a regular graph: every edge
/// has the same number of common neighbours.
pub fn prefilter(g: &Graph) -> bool {
    // Constant edge counts make every vertex's multiset {λ, …, λ}.
    all_equal(
        g.edges()
            .into_iter()
            .map(|(u, v)| g.common_neighbor_count(u, v)),
    )
}

fn all_equal<T: PartialEq>(mut values: impl Iterator<Item = T>) -> bool {
    match values.next() {
        Some(first) => values.all(|x| x == first),
        None => true,
    }
}

/// Number of 4-cycles through the edge `uv`.
fn four_cycles(g: &Graph, u: usize, v: usize) -> usize {
    g.neighbors(u)
        .filter(|&x| x != v)
        .map(|x| g.common_neighbor_count(x, v) - 1)
        .sum()
}

fn distances_from(g: &Graph, s: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Counts of vertices `w` by `(d(u, w), d(v, w))`, symmetrised over the
/// two endpoints.
fn joint_distance_profile(du: &[u32], dv: &[u32]) -> Vec<(u32, u32, usize)> {
    let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (&x, &y) in du.iter().zip(dv) {
        *counts.entry((x, y)).or_default() += 1;
    }
    let forward: Vec<_> = counts.iter().map(|(&(x, y), &c)| (x, y, c)).collect();
    let mut backward: Vec<_> = counts.iter().map(|(&(x, y), &c)| (y, x, c)).collect();
    backward.sort_unstable();
    forward.min(backward)
}

/// Stronger necessary condition for edge-transitivity: the number of
/// 4-cycles through an edge and the joint distance profile of its endpoints
/// are the same for every edge.
pub fn edge_profile_filter(g: &Graph) -> bool {
    let edges = g.edges();
    if !all_equal(edges.iter().map(|&(u, v)| four_cycles(g, u, v))) {
        return false;
    }
    let dist: Vec<Vec<u32>> = (0..g.vertex_count())
        .map(|s| distances_from(g, s))
        .collect();
    all_equal(
        edges
            .iter()
            .map(|&(u, v)| joint_distance_profile(&dist[u], &dist[v])),
    )
}

/// The census screen: [`prefilter`] followed by [`edge_profile_filter`].
pub fn screen(g: &Graph) -> bool {
    prefilter(g) && edge_profile_filter(g)
}

/// Full profile of one tuple.
pub fn profile(p: &NestParams) -> CensusRecord {
    let g = p.build();
    let girth = g.girth();
    let mut record = CensusRecord {
        params: *p,
        vertex_count: g.vertex_count(),
        aut_order: None,
        vertex_transitive: None,
        edge_transitive: false,
        arc_transitive: false,
        core_free: None,
        core_order: None,
        girth,
        certificate: None,
        iso_class: None,
        prefilter: screen(&g),
    };
    if !record.prefilter {
        return record;
    }
    let analysis = aut::analyze(&g);
    let grp = &analysis.group;
    let (d, _) = cyclic_core(grp, &p.rho()).expect("rho is an automorphism");
    record.aut_order = Some(grp.order());
    record.vertex_transitive =
        Some(symmetry::is_vertex_transitive(&g, grp).expect("automorphisms"));
    record.edge_transitive = symmetry::is_edge_transitive(&g, grp).expect("automorphisms");
    record.arc_transitive = symmetry::is_arc_transitive(&g, grp).expect("automorphisms");
    record.core_order = Some(d);
    record.core_free = Some(d == 1);
    record.certificate = Some(analysis.certificate.to_hex());
    record
}

/// Assigns iso-class ids in sorted-certificate order.
pub fn assign_iso_classes(records: &mut [CensusRecord]) {
    let certs: BTreeSet<&str> = records
        .iter()
        .filter_map(|r| r.certificate.as_deref())
        .collect();
    let ids: BTreeMap<String, usize> = certs
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c.to_string(), i))
        .collect();
    for r in records.iter_mut() {
        r.iso_class = r.certificate.as_ref().map(|c| ids[c]);
    }
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub max_n: usize,
    /// Worker threads; `1` runs on the calling thread.
    pub jobs: usize,
    pub out: PathBuf,
    /// Continue after the last complete line of an existing output file.
    pub resume: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusSummary {
    pub records: usize,
    pub resumed: usize,
    pub prefilter_rejected: usize,
    pub edge_transitive: usize,
    pub edge_transitive_core_free: usize,
}

const CHUNK: usize = 512;

fn record_line(r: &CensusRecord) -> String {
    serde_json::to_string(r).expect("records serialize")
}

/// Reads the complete lines of a (possibly interrupted) census file.
/// A trailing line without a newline is ignored.
fn read_prefix(path: &Path) -> Result<Vec<CensusRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    for (i, line) in complete.lines().enumerate() {
        let r = serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(r);
    }
    Ok(out)
}

/// Runs the census and writes the finished JSONL file to `opts.out`.
pub fn census_run(opts: &CensusOptions) -> Result<CensusSummary> {
    census_run_with_progress(opts, |_, _| {})
}

/// Like [`census_run`], calling `progress(done, total)` after each chunk.
pub fn census_run_with_progress(
    opts: &CensusOptions,
    mut progress: impl FnMut(usize, usize),
) -> Result<CensusSummary> {
    let tuples = enumerate_params(opts.max_n);
    let mut records: Vec<CensusRecord> = Vec::with_capacity(tuples.len());

    if opts.resume && opts.out.exists() {
        let prior = read_prefix(&opts.out)?;
        for (i, r) in prior.into_iter().enumerate() {
            if tuples.get(i) != Some(&r.params) {
                return Err(Error::MalformedRecord {
                    path: opts.out.clone(),
                    line: i + 1,
                    message: format!("record {:?} does not match enumeration order", r.params),
                });
            }
            records.push(r);
        }
    }
    let resumed = records.len();

    {
        let file = if resumed > 0 {
            // Drop any partial trailing line, then append.
            let body: String = records.iter().map(|r| record_line(r) + "\n").collect();
            fs::write(&opts.out, body).map_err(|e| Error::io(&opts.out, e))?;
            OpenOptions::new()
                .append(true)
                .open(&opts.out)
                .map_err(|e| Error::io(&opts.out, e))?
        } else {
            File::create(&opts.out).map_err(|e| Error::io(&opts.out, e))?
        };
        let mut writer = BufWriter::new(file);
        let pool = if opts.jobs > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.jobs)
                    .build()
                    .expect("thread pool"),
            )
        } else {
            None
        };
        for chunk in tuples[resumed..].chunks(CHUNK) {
            let batch: Vec<CensusRecord> = match &pool {
                Some(pool) => pool.install(|| chunk.par_iter().map(profile).collect()),
                None => chunk.iter().map(profile).collect(),
            };
            for r in &batch {
                writeln!(writer, "{}", record_line(r)).map_err(|e| Error::io(&opts.out, e))?;
            }
            writer.flush().map_err(|e| Error::io(&opts.out, e))?;
            records.extend(batch);
            progress(records.len(), tuples.len());
        }
    }

    assign_iso_classes(&mut records);
    write_records(&opts.out, &records)?;

    Ok(CensusSummary {
        records: records.len(),
        resumed,
        prefilter_rejected: records.iter().filter(|r| !r.prefilter).count(),
        edge_transitive: records.iter().filter(|r| r.edge_transitive).count(),
        edge_transitive_core_free: records
            .iter()
            .filter(|r| r.edge_transitive && r.core_free == Some(true))
            .count(),
    })
}

/// Atomically replaces `path` with the given records.
pub fn write_records(path: &Path, records: &[CensusRecord]) -> Result<()> {
    let tmp = path.with_extension("jsonl.tmp");
    {
        let file = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        let mut w = BufWriter::new(file);
        for r in records {
            writeln!(w, "{}", record_line(r)).map_err(|e| Error::io(&tmp, e))?;
        }
        w.flush().map_err(|e| Error::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Loads a finished census file.
pub fn read_records(path: &Path) -> Result<Vec<CensusRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(r);
    }
    Ok(out)
}
