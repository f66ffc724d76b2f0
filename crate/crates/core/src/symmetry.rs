//! Transitivity predicates, cores, and block systems.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::aut::automorphism_group;
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::group::{cyclic_core, cyclic_subgroup, PermGroup};
use crate::nest::NestParams;
use crate::perm::Perm;
use crate::union_find::UnionFind;

fn check_automorphisms(g: &Graph, grp: &PermGroup) -> Result<()> {
    if grp.degree() != g.vertex_count() {
        return Err(Error::DegreeMismatch {
            left: g.vertex_count(),
            right: grp.degree(),
        });
    }
    if grp.generators().iter().all(|p| g.is_automorphism(p)) {
        Ok(())
    } else {
        Err(Error::NotAnAutomorphism)
    }
}

/// Size of the orbit of `seed` under the generators, acting on pairs.
fn pair_orbit_len(gens: &[Perm], seed: (usize, usize), unordered: bool) -> usize {
    let norm = |(u, v): (usize, usize)| if unordered && u > v { (v, u) } else { (u, v) };
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    let seed = norm(seed);
    seen.insert(seed, ());
    let mut queue = VecDeque::from([seed]);
    while let Some((u, v)) = queue.pop_front() {
        for g in gens {
            let img = norm((g.apply(u), g.apply(v)));
            if seen.insert(img, ()).is_none() {
                queue.push_back(img);
            }
        }
    }
    seen.len()
}

pub fn is_vertex_transitive(g: &Graph, grp: &PermGroup) -> Result<bool> {
    check_automorphisms(g, grp)?;
    Ok(grp.is_transitive())
}

pub fn is_edge_transitive(g: &Graph, grp: &PermGroup) -> Result<bool> {
    check_automorphisms(g, grp)?;
    Ok(match g.edges().first() {
        None => true,
        Some(&e) => pair_orbit_len(grp.generators(), e, true) == g.edge_count(),
    })
}

pub fn is_arc_transitive(g: &Graph, grp: &PermGroup) -> Result<bool> {
    check_automorphisms(g, grp)?;
    Ok(match g.edges().first() {
        None => true,
        Some(&e) => pair_orbit_len(grp.generators(), e, false) == 2 * g.edge_count(),
    })
}

/// Order of the core of `⟨ρ⟩` in `aut`; the graph is core-free when it is 1.
pub fn core_order(aut: &PermGroup, p: &NestParams) -> Result<u64> {
    Ok(cyclic_core(aut, &p.rho())?.0)
}

/// Core-freeness of `Nest(p)` in its full automorphism group, with the core order.
pub fn is_core_free(p: &NestParams) -> (bool, u64) {
    let aut = automorphism_group(&p.build());
    let d = core_order(&aut, p).expect("rho is an automorphism");
    (d == 1, d)
}

/// Union-find closure of `{alpha, beta}` under the generators: the finest
/// invariant partition with `alpha` and `beta` in one class.
fn block_system_through(grp: &PermGroup, alpha: usize, beta: usize) -> Partition {
    let n = grp.degree();
    let mut uf = UnionFind::new(n);
    uf.union(alpha, beta);
    let mut queue = VecDeque::from([(alpha, beta)]);
    while let Some((x, y)) = queue.pop_front() {
        for g in grp.generators() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                queue.push_back((gx, gy));
            }
        }
    }
    Partition::from_classes(n, uf.classes()).expect("union-find classes partition the points")
}

fn require_transitive(grp: &PermGroup) -> Result<()> {
    if grp.is_transitive() {
        Ok(())
    } else {
        Err(Error::Intransitive)
    }
}

/// The smallest block of a transitive group containing `alpha` and `beta`.
pub fn minimal_block_through(grp: &PermGroup, alpha: usize, beta: usize) -> Result<Vec<usize>> {
    let n = grp.degree();
    for p in [alpha, beta] {
        if p >= n {
            return Err(Error::PointOutOfRange {
                point: p,
                degree: n,
            });
        }
    }
    require_transitive(grp)?;
    let system = block_system_through(grp, alpha, beta);
    Ok(system.class(system.class_of(alpha)).to_vec())
}

pub fn is_primitive(grp: &PermGroup) -> Result<bool> {
    require_transitive(grp)?;
    let n = grp.degree();
    Ok((1..n).all(|beta| {
        let system = block_system_through(grp, 0, beta);
        system.len() == 1
    }))
}

/// A block system together with its kernel data.
#[derive(Clone, Debug, Serialize)]
pub struct BlockSystemInfo {
    #[serde(rename = "blocks")]
    pub partition: Partition,
    pub block_size: usize,
    /// Whether every block lies inside `{u_i}` or inside `{v_i}`; `None`
    /// when the points are not Nest-indexed.
    pub cyclic: Option<bool>,
    /// The kernel's orbits are exactly the blocks.
    pub normal: bool,
    pub kernel_order: u128,
    #[serde(skip)]
    pub kernel: PermGroup,
}

impl BlockSystemInfo {
    fn new(grp: &PermGroup, partition: Partition, nest_n: Option<usize>) -> Result<Self> {
        let (_, kernel) = grp.induced_action(&partition)?;
        let kernel_orbits = Partition::from_classes(grp.degree(), kernel.orbits())?;
        let normal = kernel_orbits == partition;
        let cyclic = nest_n.filter(|&n| 2 * n == grp.degree()).map(|n| {
            partition
                .classes()
                .iter()
                .all(|b| b.iter().all(|&x| x < n) || b.iter().all(|&x| x >= n))
        });
        Ok(Self {
            block_size: partition
                .uniform_size()
                .expect("blocks of a transitive group"),
            partition,
            cyclic,
            normal,
            kernel_order: kernel.order(),
            kernel,
        })
    }
}

/// All minimal block systems of a transitive group, found from the
/// minimal blocks through `base_point`. Sorted by block size, then blocks.
/// Pass `nest_n` to have the cyclic flag computed for Nest-indexed points.
pub fn minimal_block_systems(
    grp: &PermGroup,
    base_point: usize,
    nest_n: Option<usize>,
) -> Result<Vec<BlockSystemInfo>> {
    let n = grp.degree();
    if base_point >= n {
        return Err(Error::PointOutOfRange {
            point: base_point,
            degree: n,
        });
    }
    require_transitive(grp)?;
    let mut found: Vec<(Vec<usize>, Partition)> = Vec::new();
    let mut seen_blocks: BTreeSet<Vec<usize>> = BTreeSet::new();
    for beta in 0..n {
        if beta == base_point {
            continue;
        }
        let system = block_system_through(grp, base_point, beta);
        if system.len() == 1 {
            continue;
        }
        let block = system.class(system.class_of(base_point)).to_vec();
        if seen_blocks.insert(block.clone()) {
            found.push((block, system));
        }
    }
    let is_proper_subset = |small: &[usize], big: &[usize]| {
        small.len() < big.len() && small.iter().all(|x| big.binary_search(x).is_ok())
    };
    let mut minimal: Vec<Partition> = found
        .iter()
        .filter(|(b, _)| !found.iter().any(|(other, _)| is_proper_subset(other, b)))
        .map(|(_, p)| p.clone())
        .collect();
    minimal.sort_by(|x, y| {
        x.uniform_size()
            .cmp(&y.uniform_size())
            .then_with(|| x.classes().cmp(y.classes()))
    });
    minimal
        .into_iter()
        .map(|p| BlockSystemInfo::new(grp, p, nest_n))
        .collect()
}

/// `|⟨ρ⟩|² < |G|` when `⟨ρ⟩` is a core-free proper subgroup; vacuously true otherwise.
pub fn lucchini_check(grp: &PermGroup, rho: &Perm) -> Result<bool> {
    let (d, _) = cyclic_core(grp, rho)?;
    let c = rho.order() as u128;
    if d == 1 && c != grp.order() {
        Ok(c * c < grp.order())
    } else {
        Ok(true)
    }
}

/// Abelian and every non-identity element an involution.
pub fn is_elementary_abelian_2(grp: &PermGroup) -> bool {
    let gens = grp.generators();
    gens.iter().all(|g| g.then(g).is_identity())
        && gens
            .iter()
            .enumerate()
            .all(|(i, x)| gens[i + 1..].iter().all(|y| x.then(y) == y.then(x)))
}

/// Whether each block is a union of orbits of `C_e = ⟨ρ^{n/e}⟩`.
pub fn blocks_are_unions_of_cyclic_orbits(p: &NestParams, blocks: &Partition, e: usize) -> bool {
    if e == 0 || !p.n.is_multiple_of(e) {
        return false;
    }
    let ce = cyclic_subgroup(&p.rho(), e as u64).expect("e divides n");
    ce.orbits().iter().all(|orbit| {
        let b = blocks.class_of(orbit[0]);
        orbit.iter().all(|&x| blocks.class_of(x) == b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn cycle_is_fully_symmetric() {
        let g = Graph::cycle(6);
        let aut = automorphism_group(&g);
        assert!(is_vertex_transitive(&g, &aut).unwrap());
        assert!(is_edge_transitive(&g, &aut).unwrap());
        assert!(is_arc_transitive(&g, &aut).unwrap());
    }

    #[test]
    fn rotations_alone_are_not_arc_transitive() {
        let g = Graph::cycle(6);
        let rot = PermGroup::new(6, vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]])]).unwrap();
        assert!(is_edge_transitive(&g, &rot).unwrap());
        assert!(!is_arc_transitive(&g, &rot).unwrap());
    }

    #[test]
    fn rejects_non_automorphisms() {
        let g = Graph::path(3);
        let bad = PermGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap();
        assert!(matches!(
            is_vertex_transitive(&g, &bad),
            Err(Error::NotAnAutomorphism)
        ));
    }

    #[test]
    fn minimal_blocks_of_cyclic_groups() {
        let c4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(minimal_block_through(&c4, 0, 2).unwrap(), vec![0, 2]);
        let c6 = PermGroup::new(6, vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]])]).unwrap();
        let systems = minimal_block_systems(&c6, 0, None).unwrap();
        let sizes: Vec<usize> = systems.iter().map(|s| s.block_size).collect();
        assert_eq!(sizes, vec![2, 3]);
        assert!(systems.iter().all(|s| s.normal && s.cyclic.is_none()));
        assert!(!is_primitive(&c6).unwrap());
    }

    #[test]
    fn symmetric_group_is_primitive() {
        let s4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(minimal_block_through(&s4, 0, 1).unwrap(), vec![0, 1, 2, 3]);
        assert!(is_primitive(&s4).unwrap());
        assert!(minimal_block_systems(&s4, 0, None).unwrap().is_empty());
    }

    #[test]
    fn intransitive_groups_are_rejected() {
        let g = PermGroup::new(4, vec![cyc(4, &[&[0, 1]])]).unwrap();
        assert!(matches!(is_primitive(&g), Err(Error::Intransitive)));
        assert!(matches!(
            minimal_block_through(&g, 0, 1),
            Err(Error::Intransitive)
        ));
    }

    #[test]
    fn lucchini_vacuous_for_the_cyclic_group_itself() {
        let rho = cyc(5, &[&[0, 1, 2, 3, 4]]);
        let c = PermGroup::new(5, vec![rho.clone()]).unwrap();
        assert!(lucchini_check(&c, &rho).unwrap());
    }

    #[test]
    fn elementary_abelian_detection() {
        let klein = PermGroup::new(
            4,
            vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])],
        )
        .unwrap();
        assert!(is_elementary_abelian_2(&klein));
        let c4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert!(!is_elementary_abelian_2(&c4));
    }
}
