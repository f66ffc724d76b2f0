//! Permutation groups backed by a base and strong generating set.
//!
//! The chain is built with the deterministic Schreier–Sims algorithm: base
//! points are taken from a caller-supplied prefix and then from the first
//! point moved by a generator that fixes the current base, and Schreier
//! generators are sifted in orbit order × generator order.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::perm::Perm;

/// One level of the stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Perm>,
    /// Orbit of `base_point` under `gens`, in discovery order.
    orbit: Vec<usize>,
    /// `reps[x]` maps `base_point` to `x`; `inv_reps[x]` is its inverse.
    reps: Vec<Option<Perm>>,
    inv_reps: Vec<Option<Perm>>,
    /// Schreier generators `(orbit index, generator index)` already sifted.
    checked: HashSet<(u32, u32)>,
}

impl Level {
    fn new(degree: usize, base_point: usize, gens: Vec<Perm>) -> Self {
        let mut reps = vec![None; degree];
        let mut inv_reps = vec![None; degree];
        reps[base_point] = Some(Perm::identity(degree));
        inv_reps[base_point] = Some(Perm::identity(degree));
        let mut level = Level {
            base_point,
            gens,
            orbit: vec![base_point],
            reps,
            inv_reps,
            checked: HashSet::new(),
        };
        level.close_orbit();
        level
    }

    /// Extends the orbit to closure under `gens`, keeping existing representatives.
    fn close_orbit(&mut self) {
        let mut idx = 0;
        while idx < self.orbit.len() {
            let x = self.orbit[idx];
            for g in &self.gens {
                let y = g.apply(x);
                if self.reps[y].is_none() {
                    let rep = self.reps[x].as_ref().unwrap().then(g);
                    self.inv_reps[y] = Some(rep.inverse());
                    self.reps[y] = Some(rep);
                    self.orbit.push(y);
                }
            }
            idx += 1;
        }
    }

    fn add_generator(&mut self, g: Perm) {
        self.gens.push(g);
        self.close_orbit();
    }
}

/// A permutation group with an exact stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
    order: u128,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            order: 1,
        }
    }

    /// Builds the group generated by `gens` on `degree` points.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Like [`PermGroup::new`], but the base starts with `prefix` (duplicates dropped).
    pub fn with_base_prefix(degree: usize, gens: Vec<Perm>, prefix: &[usize]) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        for &p in prefix {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
        }
        let mut generators: Vec<Perm> = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.is_identity() && !generators.contains(&g) {
                generators.push(g);
            }
        }
        let mut base: Vec<usize> = Vec::new();
        for &p in prefix {
            if !base.contains(&p) {
                base.push(p);
            }
        }
        let levels = schreier_sims(degree, &generators, base);
        let order = levels.iter().map(|l| l.orbit.len() as u128).product();
        Ok(Self {
            degree,
            generators,
            levels,
            order,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The (non-identity, deduplicated) generators the group was built from.
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        self.levels.first().map_or(&[], |l| &l.gens)
    }

    /// Basic orbit lengths along the base.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Sifts `g` through the chain from `start`; returns the residue and the
    /// level at which sifting stopped.
    fn sift_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        sift(&self.levels, g.clone(), start)
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (res, _) = self.sift_from(p, 0);
        Ok(res.is_identity())
    }

    pub(crate) fn contains_unchecked(&self, p: &Perm) -> bool {
        self.sift_from(p, 0).0.is_identity()
    }

    /// Sorted orbit of `point`.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut idx = 0;
        while idx < orbit.len() {
            let x = orbit[idx];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            idx += 1;
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let orbit = self.orbit(p).expect("in range");
                for &x in &orbit {
                    seen[x] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1
            || self
                .orbit(0)
                .map(|o| o.len() == self.degree)
                .unwrap_or(false)
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.pointwise_stabilizer(&[point])
    }

    /// The subgroup fixing every point of `points`, via a base change that
    /// puts `points` first.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        let rebased =
            PermGroup::with_base_prefix(self.degree, self.strong_generators().to_vec(), points)?;
        let mut prefix_len = 0;
        let mut seen = HashSet::new();
        for p in points {
            if seen.insert(*p) {
                prefix_len += 1;
            }
        }
        Ok(rebased.tail(prefix_len))
    }

    /// The chain below level `l` as a group in its own right.
    fn tail(&self, l: usize) -> PermGroup {
        let levels: Vec<Level> = self.levels[l.min(self.levels.len())..].to_vec();
        // Trailing levels can have trivial orbits (fixed prefix points).
        let generators = levels
            .iter()
            .find(|lv| !lv.gens.is_empty())
            .map(|lv| lv.gens.clone())
            .unwrap_or_default();
        let order = levels.iter().map(|lv| lv.orbit.len() as u128).product();
        PermGroup {
            degree: self.degree,
            generators,
            levels,
            order,
        }
    }

    /// Action on the classes of an invariant partition: returns the image
    /// group on class indices and the kernel acting on points.
    pub fn induced_action(&self, blocks: &Partition) -> Result<(PermGroup, PermGroup)> {
        if blocks.vertex_count() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: blocks.vertex_count(),
            });
        }
        let nb = blocks.len();
        let mut block_gens = Vec::with_capacity(self.generators.len());
        let mut ext_gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut img = vec![usize::MAX; nb];
            for (ci, class) in blocks.classes().iter().enumerate() {
                let target = blocks.class_of(g.apply(class[0]));
                if class.iter().any(|&x| blocks.class_of(g.apply(x)) != target) {
                    return Err(Error::PartitionNotInvariant);
                }
                img[ci] = target;
            }
            let block_perm = Perm::from_images(img).map_err(|_| Error::PartitionNotInvariant)?;
            let mut ext: Vec<usize> = g.images().collect();
            ext.extend(block_perm.images().map(|b| b + self.degree));
            ext_gens.push(Perm::from_images(ext)?);
            block_gens.push(block_perm);
        }
        let image = PermGroup::new(nb, block_gens)?;
        let prefix: Vec<usize> = (self.degree..self.degree + nb).collect();
        let ext = PermGroup::with_base_prefix(self.degree + nb, ext_gens, &prefix)?;
        let kernel_ext = ext.tail(nb);
        let kernel_gens: Vec<Perm> = kernel_ext
            .strong_generators()
            .iter()
            .map(|g| Perm::from_raw(g.raw()[..self.degree].to_vec()))
            .collect();
        let kernel = PermGroup::new(self.degree, kernel_gens)?;
        debug_assert_eq!(kernel.order(), kernel_ext.order());
        debug_assert_eq!(image.order() * kernel.order(), self.order);
        Ok((image, kernel))
    }

    /// `h ◁ self`, checked on generator pairs.
    pub fn is_normal(&self, h: &PermGroup) -> Result<bool> {
        if h.degree != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: h.degree,
            });
        }
        if !h.generators.iter().all(|y| self.contains_unchecked(y)) {
            return Err(Error::NotASubgroup);
        }
        Ok(self.generators.iter().all(|x| {
            h.generators
                .iter()
                .all(|y| h.contains_unchecked(&y.conjugate_by(x)))
        }))
    }

    /// `self ≤ other`, tested on generators.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains_unchecked(g))
    }

    /// Every element, by walking the transversals. Meant for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        // g = u_k ⋯ u_1 with u_i from level i; build from the deepest level up.
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for h in &out {
                for &x in &level.orbit {
                    next.push(h.then(level.reps[x].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out
    }
}

fn sift(levels: &[Level], mut g: Perm, start: usize) -> (Perm, usize) {
    for (i, level) in levels.iter().enumerate().skip(start) {
        let x = g.apply(level.base_point);
        match &level.inv_reps[x] {
            Some(inv) => g = g.then(inv),
            None => return (g, i),
        }
    }
    (g, levels.len())
}

fn schreier_sims(degree: usize, gens: &[Perm], mut base: Vec<usize>) -> Vec<Level> {
    for g in gens {
        if base.iter().all(|&b| g.apply(b) == b) {
            base.push(g.first_moved().expect("non-identity"));
        }
    }
    let mut levels: Vec<Level> = Vec::with_capacity(base.len());
    for (i, &b) in base.iter().enumerate() {
        let level_gens: Vec<Perm> = gens
            .iter()
            .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
            .cloned()
            .collect();
        levels.push(Level::new(degree, b, level_gens));
    }

    let mut i = levels.len();
    'outer: while i > 0 {
        let li = i - 1;
        let mut oi = 0;
        while oi < levels[li].orbit.len() {
            let x = levels[li].orbit[oi];
            let mut si = 0;
            while si < levels[li].gens.len() {
                if !levels[li].checked.insert((oi as u32, si as u32)) {
                    si += 1;
                    continue;
                }
                let level = &levels[li];
                let s = &level.gens[si];
                let y = s.apply(x);
                let ux_s = level.reps[x].as_ref().unwrap().then(s);
                let schreier = ux_s.then(level.inv_reps[y].as_ref().unwrap());
                if !schreier.is_identity() {
                    let (res, j) = sift(&levels, schreier, li + 1);
                    if !res.is_identity() {
                        if j == levels.len() {
                            let b = res.first_moved().expect("non-identity residue");
                            levels.push(Level::new(degree, b, Vec::new()));
                        }
                        for level in &mut levels[li + 1..=j] {
                            level.add_generator(res.clone());
                        }
                        i = j + 1;
                        continue 'outer;
                    }
                }
                si += 1;
            }
            oi += 1;
        }
        i -= 1;
    }
    levels
}

/// `⟨rho^(ord/d)⟩`, the unique subgroup of order `d` in `⟨rho⟩`.
pub fn cyclic_subgroup(rho: &Perm, d: u64) -> Result<PermGroup> {
    let ord = rho.order();
    if d == 0 || !ord.is_multiple_of(d) {
        return Err(Error::NotADivisor {
            divisor: d,
            order: ord,
        });
    }
    PermGroup::new(rho.degree(), vec![rho.pow(ord / d)])
}

/// Largest `d` with `C_d ◁ g`, together with that subgroup. `d == 1` means
/// `⟨rho⟩` is core-free in `g`.
pub fn cyclic_core(g: &PermGroup, rho: &Perm) -> Result<(u64, PermGroup)> {
    if !g.contains(rho)? {
        return Err(Error::NotInGroup);
    }
    let ord = rho.order();
    let mut divisors: Vec<u64> = (1..=ord).filter(|d| ord.is_multiple_of(*d)).collect();
    divisors.reverse();
    let is_normal_cd = |d: u64| -> bool {
        let y = rho.pow(ord / d);
        let cd = PermGroup::new(rho.degree(), vec![y.clone()]).expect("degree checked");
        g.generators()
            .iter()
            .all(|x| cd.contains_unchecked(&y.conjugate_by(x)))
    };
    for d in divisors {
        if is_normal_cd(d) {
            // Subgroups of a normal cyclic subgroup are characteristic in it.
            debug_assert!((1..=d).filter(|e| d % e == 0).all(is_normal_cd));
            return Ok((d, cyclic_subgroup(rho, d)?));
        }
    }
    unreachable!("the trivial subgroup is always normal")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    fn s4() -> PermGroup {
        PermGroup::new(4, vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]).unwrap()
    }

    #[test]
    fn cyclic_order() {
        let g = PermGroup::new(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(g.order(), 5);
    }

    #[test]
    fn symmetric_group_order() {
        assert_eq!(s4().order(), 24);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = PermGroup::new(6, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.orbits().len(), 6);
        assert!(g.contains(&Perm::identity(6)).unwrap());
    }

    #[test]
    fn membership() {
        let rho = cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]]);
        let c = PermGroup::new(7, vec![rho.clone()]).unwrap();
        assert!(c.contains(&rho.pow(3)).unwrap());
        assert!(!c.contains(&cyc(7, &[&[2, 5]])).unwrap());
        assert!(c.contains(&Perm::identity(8)).is_err());
    }

    #[test]
    fn stabilizers() {
        let g = s4();
        assert_eq!(g.point_stabilizer(0).unwrap().order(), 6);
        assert_eq!(g.pointwise_stabilizer(&[0, 1]).unwrap().order(), 2);
        assert_eq!(g.pointwise_stabilizer(&[0, 1, 2, 3]).unwrap().order(), 1);
        let c = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert!(c.point_stabilizer(0).unwrap().is_trivial());
        assert!(g.point_stabilizer(4).is_err());
    }

    #[test]
    fn stabilizer_generators_fix_points() {
        let g = s4();
        let h = g.pointwise_stabilizer(&[2, 0]).unwrap();
        for s in h.generators() {
            assert_eq!(s.apply(2), 2);
            assert_eq!(s.apply(0), 0);
        }
        assert_eq!(h.elements().len(), 2);
    }

    #[test]
    fn induced_action_on_blocks() {
        let g = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        let p = Partition::from_classes(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let (image, kernel) = g.induced_action(&p).unwrap();
        assert_eq!(image.order(), 2);
        assert_eq!(kernel.order(), 2);

        let orbits = Partition::from_classes(4, g.orbits()).unwrap();
        let (image, kernel) = g.induced_action(&orbits).unwrap();
        assert_eq!(image.order(), 1);
        assert_eq!(kernel.order(), 4);

        let bad = Partition::from_classes(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let (image, kernel) = s4().induced_action(&Partition::unit(4)).unwrap();
        assert_eq!((image.order(), kernel.order()), (1, 24));
        assert!(matches!(
            s4().induced_action(&bad),
            Err(Error::PartitionNotInvariant)
        ));
    }

    #[test]
    fn normality() {
        let g = s4();
        let klein = PermGroup::new(
            4,
            vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])],
        )
        .unwrap();
        assert!(g.is_normal(&klein).unwrap());
        assert!(g.is_normal(&PermGroup::trivial(4)).unwrap());
        let c3 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2]])]).unwrap();
        assert!(!g.is_normal(&c3).unwrap());
        assert!(matches!(klein.is_normal(&c3), Err(Error::NotASubgroup)));
    }

    #[test]
    fn cyclic_subgroups() {
        let rho = cyc(12, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]]);
        assert!(cyclic_subgroup(&rho, 1).unwrap().is_trivial());
        assert_eq!(cyclic_subgroup(&rho, 12).unwrap().order(), 12);
        let c4 = cyclic_subgroup(&rho, 4).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.contains(&rho.pow(3)).unwrap());
        assert!(cyclic_subgroup(&rho, 5).is_err());
    }

    #[test]
    fn core_of_group_in_itself() {
        let rho = cyc(6, &[&[0, 1, 2, 3, 4, 5]]);
        let c = PermGroup::new(6, vec![rho.clone()]).unwrap();
        let (d, core) = cyclic_core(&c, &rho).unwrap();
        assert_eq!(d, 6);
        assert_eq!(core.order(), 6);
    }

    #[test]
    fn core_in_symmetric_group_is_trivial() {
        let rho = cyc(4, &[&[0, 1, 2, 3]]);
        let (d, _) = cyclic_core(&s4(), &rho).unwrap();
        assert_eq!(d, 1);
        // in D4 the rotation subgroup is normal
        let d4 = PermGroup::new(4, vec![rho.clone(), cyc(4, &[&[1, 3]])]).unwrap();
        assert_eq!(cyclic_core(&d4, &rho).unwrap().0, 4);
        let outside = cyc(5, &[&[0, 1]]);
        let c = PermGroup::new(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert!(matches!(cyclic_core(&c, &outside), Err(Error::NotInGroup)));
    }
}
