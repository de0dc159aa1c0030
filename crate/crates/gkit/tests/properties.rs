//! Property tests: algebraic laws checked on randomly generated structures.


use std::sync::Arc;

use proptest::prelude::*;

use gkit::action::{orbits, validate_action, GroupoidAction, Side};
use gkit::biset::{double_orbits, from_left_product_set, to_left_product_set, Biset};
use gkit::coset::coset_space;
use gkit::groupoid::{
    build_groupoid, connected_components, cyclic_group, opposite, validate_groupoid, ArrowId,
    Builder, FiniteGroupoid, Subgroupoid,
};
use gkit::mackey::verify_mackey;
use gkit::random::{random_instance_at, RandomConfig};
use gkit::util::UnionFind;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Deterministic groupoid from a compact parameter triple.
fn groupoid_from(kind: u8, n: usize, salt: u64) -> Arc<FiniteGroupoid> {
    let n = 1 + n % 3;
    match kind % 5 {
        0 => Arc::new(build_groupoid(&Builder::Trivial { elements: labels(n) }).unwrap()),
        1 => Arc::new(build_groupoid(&Builder::Pairs { elements: labels(n) }).unwrap()),
        2 => {
            let mut classes: Vec<Vec<String>> = Vec::new();
            let mut ids: Vec<u64> = Vec::new();
            for i in 0..n {
                let b = (salt >> (2 * i)) % n as u64;
                match ids.iter().position(|&x| x == b) {
                    Some(c) => classes[c].push(format!("e{i}")),
                    None => {
                        ids.push(b);
                        classes.push(vec![format!("e{i}")]);
                    }
                }
            }
            Arc::new(build_groupoid(&Builder::EqRel { elements: labels(n), classes }).unwrap())
        }
        3 => Arc::new(cyclic_group(1 + (salt % 4) as usize).unwrap()),
        _ => {
            let a = groupoid_from(kind / 5, 1, salt / 7);
            let b = Arc::new(cyclic_group(1 + (salt % 3) as usize).unwrap());
            Arc::new(build_groupoid(&Builder::Product(a, b)).unwrap())
        }
    }
}

fn action_from(g: &Arc<FiniteGroupoid>, choice: u8, salt: u64) -> GroupoidAction {
    match choice % 3 {
        0 => GroupoidAction::right_regular(g),
        1 => GroupoidAction::left_regular(g),
        _ => {
            let seed = if g.n_arrows() == 0 {
                vec![]
            } else {
                vec![ArrowId((salt % g.n_arrows() as u64) as usize)]
            };
            let sub = Subgroupoid::closure(g.clone(), &seed, true);
            let side = if salt % 2 == 0 { Side::Right } else { Side::Left };
            coset_space(&sub, side).unwrap().action().clone()
        }
    }
}

proptest! {
    #[test]
    fn built_groupoids_satisfy_the_axioms(kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16) {
        let g = groupoid_from(kind, n, salt);
        prop_assert!(validate_groupoid(&g).passed());
        for a in g.arrows() {
            prop_assert_eq!(g.inv(g.inv(a)), a);
            prop_assert_eq!(g.comp(a, g.inv(a)), Some(g.ident(g.tgt(a))));
        }
    }

    #[test]
    fn pairs_groupoids_are_connected_with_trivial_isotropy(n in 1usize..5) {
        let els: Vec<String> = labels(n);
        let g = Arc::new(build_groupoid(&Builder::Pairs { elements: els }).unwrap());
        prop_assert_eq!(connected_components(&g).len(), 1);
        for x in g.objects() {
            prop_assert_eq!(g.hom(x, x).len(), 1);
        }
    }

    #[test]
    fn opposite_is_involutive(kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16) {
        let g = groupoid_from(kind, n, salt);
        prop_assert_eq!(&opposite(&opposite(&g)), g.as_ref());
    }

    #[test]
    fn components_agree_with_union_find(kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16) {
        let g = groupoid_from(kind, n, salt);
        let mut uf = UnionFind::new(g.n_objects());
        for a in g.arrows() {
            uf.union(g.src(a).0, g.tgt(a).0);
        }
        prop_assert_eq!(connected_components(&g), uf.into_partition());
    }

    #[test]
    fn orbits_match_translation_groupoid_components(
        kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16, choice in 0u8..3,
    ) {
        let g = groupoid_from(kind, n, salt);
        let a = action_from(&g, choice, salt);
        prop_assert!(validate_action(&a).passed());
        let (p, _) = orbits(&a);
        let (t, _) = gkit::action::translation_groupoid(&a);
        prop_assert_eq!(p, connected_components(&t));
    }

    #[test]
    fn stabilizers_are_conjugate_along_orbit_arrows(
        kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16, choice in 0u8..3,
    ) {
        let g = groupoid_from(kind, n, salt);
        let a = action_from(&g, choice, salt);
        for x in a.elements() {
            for arr in g.arrows() {
                let y = match a.act(x, arr) {
                    Some(y) => y,
                    None => continue,
                };
                let sx = gkit::action::stabilizer(&a, x).unwrap().subgroup;
                let sy = gkit::action::stabilizer(&a, y).unwrap().subgroup;
                // For right actions y = x·g and Stab(y) = g⁻¹·Stab(x)·g;
                // left actions mirror with the inverse on the other side.
                let conj: Vec<ArrowId> = sx
                    .arrows()
                    .map(|s| match a.side() {
                        Side::Right => g.comp2(g.comp2(g.inv(arr), s), arr),
                        Side::Left => g.comp2(g.comp2(arr, s), g.inv(arr)),
                    })
                    .collect();
                let mut expect = vec![false; g.n_arrows()];
                for c in conj {
                    expect[c.0] = true;
                }
                prop_assert_eq!(expect, sy.arrow_mask().to_vec());
            }
        }
    }

    #[test]
    fn biset_round_trip_and_double_orbits(kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16) {
        let g = groupoid_from(kind, n, salt);
        let b = Biset::regular(&g);
        let (a, _) = to_left_product_set(&b);
        let back = from_left_product_set(&a, b.left_groupoid(), b.right_groupoid()).unwrap();
        prop_assert_eq!(&back, &b);
        let (p, _) = orbits(&a);
        prop_assert_eq!(double_orbits(&b).partition, p);
    }

    #[test]
    fn tensor_size_matches_union_find_oracle(kind in 0u8..25, n in 0usize..3, salt in 0u64..1 << 16) {
        let g = groupoid_from(kind, n, salt);
        let b = Biset::regular(&g);
        let t = gkit::tensor::tensor_product(&b, &b).unwrap();
        let mut raw: Vec<(usize, usize)> = Vec::new();
        for x in b.elements() {
            for y in b.elements() {
                if b.theta(y) == b.sigma(x) {
                    raw.push((x.0, y.0));
                }
            }
        }
        let mut uf = UnionFind::new(raw.len());
        for (i, &(x, y)) in raw.iter().enumerate() {
            for arr in g.arrows() {
                use gkit::action::ElementId;
                if b.sigma(ElementId(x)) != g.tgt(arr) {
                    continue;
                }
                let moved = (
                    b.right_act2(ElementId(x), arr).0,
                    b.left_act2(g.inv(arr), ElementId(y)).0,
                );
                let j = raw.iter().position(|&p| p == moved).unwrap();
                uf.union(i, j);
            }
        }
        prop_assert_eq!(t.len(), uf.into_partition().len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The headline law: every generated instance satisfies the formula,
    /// with the explicit maps certified and the independent search agreeing.
    #[test]
    fn mackey_formula_holds_on_random_instances(seed in 0u64..1 << 32) {
        let cfg = RandomConfig::new(seed, 3, 3, 1);
        let inst = random_instance_at(&cfg, 0);
        let report = verify_mackey(&inst).unwrap();
        prop_assert!(report.verdict, "{:?}", report.counterexample);
        prop_assert!(report.iso_oracle);
        prop_assert_eq!(report.lhs_size, report.summand_sizes.iter().sum::<usize>());
    }

    /// Verdicts and cardinalities are invariant under reversing every
    /// element ordering.
    #[test]
    fn verdicts_survive_reordering(seed in 0u64..1 << 32) {
        let cfg = RandomConfig::new(seed, 3, 3, 1);
        let inst = random_instance_at(&cfg, 0);
        let a = verify_mackey(&inst).unwrap();
        let b = verify_mackey(&inst.reversed()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.lhs_size, b.lhs_size);
        let mut sa = a.summand_sizes.clone();
        let mut sb = b.summand_sizes.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        prop_assert_eq!(sa, sb);
    }
}
