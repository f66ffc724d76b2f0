use nest_core::aut::{is_equitable, refine};
use nest_core::symmetry::minimal_block_systems;
use nest_core::{
    are_isomorphic, automorphism_group, canonical_form, Graph, NestParams, Partition, Perm,
    PermGroup,
};
use proptest::prelude::*;

fn perm_strategy(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn nest_strategy(max_n: i64) -> impl Strategy<Value = NestParams> {
    (4..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n, 1..n, 1..n, 1..n))
        .prop_filter_map("valid parameters", |(n, a, b, c, k)| {
            NestParams::new(n, a, b, c, k).ok()
        })
}

fn sparse_perm(degree: usize) -> impl Strategy<Value = Perm> {
    // A couple of random transpositions or short cycles keep groups of
    // degree up to 24 from always being the full symmetric group.
    prop::collection::vec((0..degree, 0..degree, 0..degree), 1..=3).prop_map(move |triples| {
        let mut images: Vec<usize> = (0..degree).collect();
        for (x, y, z) in triples {
            images.swap(x, y);
            images.swap(y, z);
        }
        Perm::from_images(images).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_stabilizer(
        (degree, gens, x) in (1usize..=24).prop_flat_map(|d| {
            (Just(d), prop::collection::vec(sparse_perm(d), 0..=3), 0..d)
        })
    ) {
        let g = PermGroup::new(degree, gens).unwrap();
        let orbit = g.orbit(x).unwrap();
        let stab = g.point_stabilizer(x).unwrap();
        prop_assert_eq!(orbit.len() as u128 * stab.order(), g.order());
        for s in stab.generators() {
            prop_assert_eq!(s.apply(x), x);
            prop_assert!(g.contains(s).unwrap());
        }
    }

    #[test]
    fn pointwise_stabilizer_is_an_iterated_point_stabilizer(
        (degree, gens, points) in (2usize..=12).prop_flat_map(|d| {
            (Just(d), prop::collection::vec(perm_strategy(d), 1..=2), prop::collection::vec(0..d, 1..=3))
        })
    ) {
        let g = PermGroup::new(degree, gens).unwrap();
        let fixer = g.pointwise_stabilizer(&points).unwrap();
        let mut iterated = g.clone();
        for &p in &points {
            iterated = iterated.point_stabilizer(p).unwrap();
        }
        prop_assert_eq!(fixer.order(), iterated.order());
        for s in fixer.generators() {
            prop_assert!(points.iter().all(|&p| s.apply(p) == p));
        }
    }

    #[test]
    fn induced_action_on_orbits((degree, gens) in (1usize..=12).prop_flat_map(|d| {
        (Just(d), prop::collection::vec(sparse_perm(d), 0..=2))
    })) {
        let g = PermGroup::new(degree, gens).unwrap();
        let orbits = Partition::from_classes(degree, g.orbits()).unwrap();
        let (image, kernel) = g.induced_action(&orbits).unwrap();
        prop_assert_eq!(image.order(), 1);
        prop_assert_eq!(kernel.order(), g.order());
    }

    #[test]
    fn relabelling_preserves_group_order_and_certificate(p in nest_strategy(10), seed in any::<u64>()) {
        let g = p.build();
        let images = {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut v: Vec<usize> = (0..g.vertex_count()).collect();
            v.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            v
        };
        let h = g.relabel(&Perm::from_images(images).unwrap()).unwrap();
        prop_assert_eq!(automorphism_group(&g).order(), automorphism_group(&h).order());
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        let w = are_isomorphic(&g, &h).unwrap();
        prop_assert_eq!(g.relabel(&w).unwrap().edges(), h.edges());
    }

    #[test]
    fn nest_graphs_are_regular_and_rotation_invariant(p in nest_strategy(30)) {
        let g = p.build();
        prop_assert_eq!(g.regular_degree(), Some(6));
        prop_assert_eq!(g.edge_count(), 6 * p.n);
        prop_assert!(g.is_automorphism(&p.rho()));
        let canonical = p.canonical_variant();
        prop_assert!(p.symmetric_variants().contains(&canonical));
    }

    #[test]
    fn block_systems_induce_consistent_actions_and_covers(p in nest_strategy(10)) {
        let g = p.build();
        let grp = automorphism_group(&g);
        prop_assume!(grp.is_transitive());
        for s in minimal_block_systems(&grp, 0, Some(p.n)).unwrap() {
            let (image, kernel) = grp.induced_action(&s.partition).unwrap();
            prop_assert_eq!(image.order() * kernel.order(), grp.order());
            prop_assert_eq!(kernel.order(), s.kernel_order);
            if s.normal {
                prop_assert_eq!(Partition::from_classes(g.vertex_count(), kernel.orbits()).unwrap(), s.partition.clone());
            }
            // Vertices of one kernel orbit see the same neighbouring blocks.
            if let (true, Some(r)) = (s.normal, g.cover_index(&s.partition)) {
                let q = g.quotient(&s.partition).unwrap();
                prop_assert_eq!(6 % r, 0);
                prop_assert_eq!(q.regular_degree(), Some(6 / r));
            }
        }
    }

    #[test]
    fn refinement_is_equitable_and_finer(
        (n, edges, labels) in (1usize..=12).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n), 0..=2 * n),
                prop::collection::vec(0u8..3, n),
            )
        })
    ) {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort();
        edges.dedup();
        let g = Graph::new(n, &edges).unwrap();
        let start = Partition::from_labels(&labels);
        let refined = refine(&g, &start);
        prop_assert!(is_equitable(&g, &refined));
        for class in refined.classes() {
            prop_assert!(class.iter().all(|&x| start.class_of(x) == start.class_of(class[0])));
        }
        // Automorphisms that preserve the starting labels preserve the refinement.
        for a in automorphism_group(&g).elements().iter().take(50) {
            if (0..n).all(|x| labels[a.apply(x)] == labels[x]) {
                for class in refined.classes() {
                    let img = a.image_of_set(class);
                    prop_assert!(refined.classes().contains(&img));
                }
            }
        }
    }

    #[test]
    fn relation_partition_classes_satisfy_the_relation(p in nest_strategy(16), s in 0usize..=6) {
        let g = p.build();
        if let Ok(part) = g.relation_partition(s) {
            for class in part.classes() {
                for &x in class {
                    for &y in class {
                        prop_assert!(x == y || g.common_neighbor_count(x, y) == s);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_is_associative(
        (p, q, r) in (1usize..=10).prop_flat_map(|d| (perm_strategy(d), perm_strategy(d), perm_strategy(d)))
    ) {
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.pow(p.order()), Perm::identity(p.degree()));
    }
}
