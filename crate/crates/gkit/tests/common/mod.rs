#![allow(dead_code)] // each test binary uses its own slice of the corpus

//! Shared fixture corpus for the integration suites: small groupoids,
//! groupoid-sets, bisets, tensor instances and Mackey instances built
//! through the public API.

use std::sync::Arc;

use gkit::action::{orbits, restrict_action, ElementId, GroupoidAction, Side};
use gkit::biset::{double_coset_biset, morphism_induced_bisets, quotient_actions, Biset};
use gkit::coset::coset_space;
use gkit::groupoid::{
    build_groupoid, cyclic_group, eqrel, pairs, trivial, ArrowId, Builder, FiniteGroupoid,
    GroupoidMorphism, ObjectId, ProductGroupoid, Subgroupoid,
};
use gkit::mackey::MackeyInstance;

pub fn corpus_groupoids() -> Vec<Arc<FiniteGroupoid>> {
    let c2 = Arc::new(cyclic_group(2).unwrap());
    let p2 = Arc::new(pairs(&["a", "b"]));
    let mut gs: Vec<Arc<FiniteGroupoid>> = vec![
        Arc::new(trivial(&["t"])),
        Arc::new(trivial(&["u", "v"])),
        p2.clone(),
        Arc::new(pairs(&["a", "b", "c"])),
        Arc::new(eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]])),
        Arc::new(eqrel(&["a", "b", "c"], &[&["a", "c"], &["b"]])),
        c2.clone(),
        Arc::new(cyclic_group(3).unwrap()),
        Arc::new(cyclic_group(4).unwrap()),
        Arc::new(build_groupoid(&Builder::Product(p2.clone(), c2.clone())).unwrap()),
        Arc::new(build_groupoid(&Builder::Product(c2.clone(), c2.clone())).unwrap()),
        Arc::new(gkit::groupoid::opposite(&pairs(&["a", "b", "c"]))),
    ];
    // Action groupoid of Z/2 swapping two of three points, and an induced
    // groupoid of C2 along a two-point carrier.
    gs.push(Arc::new(
        build_groupoid(&Builder::ActionGroupoid {
            group: c2.clone(),
            carrier: vec!["1".into(), "2".into(), "3".into()],
            act: vec![vec![0, 1], vec![1, 0], vec![2, 2]],
        })
        .unwrap(),
    ));
    gs.push(Arc::new(
        build_groupoid(&Builder::Induced {
            base: c2,
            carrier: vec!["p".into(), "q".into()],
            structure: vec![ObjectId(0), ObjectId(0)],
        })
        .unwrap(),
    ));
    gs
}

/// Right action of Z/2 on {1,2,3} swapping 1 and 2.
pub fn z2_swap_action() -> GroupoidAction {
    let c2 = Arc::new(cyclic_group(2).unwrap());
    GroupoidAction::from_fn(
        Side::Right,
        c2,
        vec!["1".into(), "2".into(), "3".into()],
        vec![ObjectId(0); 3],
        |x, g| if g.0 == 0 { x } else { ElementId([1, 0, 2][x.0]) },
    )
}

/// The finite analog of a non-surjective structure map: the equivalence
/// relation with classes {a,c},{b} restricted along {a}; the image of the
/// structure map misses exactly b.
pub fn non_surjective_action() -> GroupoidAction {
    let s = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "c"], &["b"]]));
    let carrier: Vec<ArrowId> = s.arrows().filter(|&r| s.tgt(r) == ObjectId(0)).collect();
    let sc = s.clone();
    let carrier2 = carrier.clone();
    GroupoidAction::from_fn(
        Side::Right,
        s.clone(),
        carrier.iter().map(|&r| format!("(a,{})", s.arrow_label(r))).collect(),
        carrier.iter().map(|&r| s.src(r)).collect(),
        move |x, g| {
            let rg = sc.comp2(carrier2[x.0], g);
            ElementId(carrier2.iter().position(|&c| c == rg).unwrap())
        },
    )
}

pub fn eqrel_into_pairs() -> GroupoidMorphism {
    let e = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]));
    let p = Arc::new(pairs(&["a", "b", "c"]));
    let obj_map = e.objects().map(|x| p.object_by_label(e.object_label(x)).unwrap()).collect();
    let arr_map = e.arrows().map(|a| p.arrow_by_label(e.arrow_label(a)).unwrap()).collect();
    GroupoidMorphism { dom: e, cod: p, obj_map, arr_map }
}

/// A subgroupoid of pairs{a,b,c} carrying the equivalence relation
/// {{a,b},{c}}.
pub fn eqrel_subgroupoid_of_pairs() -> Subgroupoid {
    let p = Arc::new(pairs(&["a", "b", "c"]));
    let e = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
    let mask: Vec<bool> =
        p.arrows().map(|arr| e.arrow_by_label(p.arrow_label(arr)).is_some()).collect();
    Subgroupoid::new(p, vec![true; 3], mask)
}

/// At least fifty groupoid-sets exercising both sides, quotients, coset
/// spaces and restrictions.
pub fn corpus_actions() -> Vec<GroupoidAction> {
    let mut actions = Vec::new();
    for g in corpus_groupoids() {
        actions.push(GroupoidAction::right_regular(&g));
        actions.push(GroupoidAction::left_regular(&g));
    }
    // Coset-space actions.
    let sub = eqrel_subgroupoid_of_pairs();
    for side in [Side::Right, Side::Left] {
        actions.push(coset_space(&sub, side).unwrap().action().clone());
    }
    let p2 = Arc::new(pairs(&["a", "b"]));
    for side in [Side::Right, Side::Left] {
        let idw = Subgroupoid::identity_wide(p2.clone());
        actions.push(coset_space(&idw, side).unwrap().action().clone());
        let full = Subgroupoid::full(p2.clone());
        actions.push(coset_space(&full, side).unwrap().action().clone());
    }
    // Quotient actions of regular bisets.
    for g in corpus_groupoids().into_iter().take(6) {
        let b = Biset::regular(&g);
        let (hx, xg) = quotient_actions(&b);
        actions.push(hx);
        actions.push(xg);
    }
    // The swap action, its orbit restrictions, and the non-surjective
    // fixture.
    let swap = z2_swap_action();
    let (p, _) = orbits(&swap);
    for block in p.blocks() {
        let elements: Vec<ElementId> = block.iter().map(|&i| ElementId(i)).collect();
        actions.push(restrict_action(&swap, &elements).unwrap());
    }
    actions.push(swap);
    actions.push(non_surjective_action());
    actions
}

pub fn corpus_bisets() -> Vec<Biset> {
    let mut bisets = Vec::new();
    for g in corpus_groupoids() {
        bisets.push(Biset::regular(&g));
    }
    let (b1, b2) = morphism_induced_bisets(&eqrel_into_pairs()).unwrap();
    bisets.push(b1);
    bisets.push(b2);
    let p2 = Arc::new(pairs(&["a", "b"]));
    let full = Subgroupoid::full(p2.clone());
    bisets.push(double_coset_biset(&p2, &full, &full).unwrap());
    let sub3 = eqrel_subgroupoid_of_pairs();
    let p3 = sub3.parent().clone();
    let full3 = Subgroupoid::full(p3.clone());
    bisets.push(double_coset_biset(&p3, &sub3, &full3).unwrap());
    // Left-quotient bisets of a couple of products.
    let c2 = Arc::new(cyclic_group(2).unwrap());
    let prod = ProductGroupoid::new(p2.clone(), c2.clone());
    bisets.push(
        gkit::mackey::left_quotient_biset(&prod, &Subgroupoid::identity_wide(prod.groupoid().clone()))
            .unwrap()
            .biset,
    );
    bisets.push(
        gkit::mackey::left_quotient_biset(&prod, &Subgroupoid::full(prod.groupoid().clone()))
            .unwrap()
            .biset,
    );
    bisets
}

/// Pairs of bisets sharing a middle groupoid, for tensor tests.
pub fn corpus_tensor_instances() -> Vec<(Biset, Biset)> {
    let mut pairs_v = Vec::new();
    for g in corpus_groupoids().into_iter().take(8) {
        let b = Biset::regular(&g);
        pairs_v.push((b.clone(), b));
    }
    // The two sides of small Mackey instances share their middle groupoid.
    for inst in corpus_mackey_instances().into_iter().take(3) {
        let sides = gkit::mackey::mackey_sides(&inst).unwrap();
        pairs_v.push((sides.v.biset.clone(), sides.u.biset.clone()));
    }
    pairs_v
}

pub fn corpus_mackey_instances() -> Vec<MackeyInstance> {
    let mut instances = Vec::new();
    let t2 = Arc::new(trivial(&["p", "q"]));
    instances.push(
        MackeyInstance::from_seed_arrows(t2.clone(), t2.clone(), t2.clone(), &[], &[]).unwrap(),
    );
    let c2 = Arc::new(cyclic_group(2).unwrap());
    instances.push(
        MackeyInstance::from_seed_arrows(
            c2.clone(),
            c2.clone(),
            c2.clone(),
            &[(ArrowId(1), ArrowId(1))],
            &[(ArrowId(1), ArrowId(1))],
        )
        .unwrap(),
    );
    // The closed-form instance: pairs groupoids with a full M and an
    // identity L.
    let k = Arc::new(pairs(&["k1", "k2"]));
    let h = Arc::new(pairs(&["h1", "h2", "h3"]));
    let g = Arc::new(pairs(&["g1", "g2"]));
    let kh = ProductGroupoid::new(k.clone(), h.clone());
    let hg = ProductGroupoid::new(h.clone(), g.clone());
    instances.push(
        MackeyInstance::new(
            k.clone(),
            h.clone(),
            g.clone(),
            &Subgroupoid::full(kh.groupoid().clone()),
            &Subgroupoid::identity_wide(hg.groupoid().clone()),
        )
        .unwrap(),
    );
    // A mixed instance: pairs x cyclic x trivial with nontrivial seeds.
    let g1 = Arc::new(trivial(&["g1"]));
    instances.push(
        MackeyInstance::from_seed_arrows(
            k,
            c2.clone(),
            g1,
            &[(ArrowId(1), ArrowId(1))],
            &[(ArrowId(1), ArrowId(0))],
        )
        .unwrap(),
    );
    instances
}

/// Subgroupoid/side combinations used by the coset criteria.
pub fn corpus_coset_fixtures() -> Vec<(Subgroupoid, Side)> {
    let mut fixtures = Vec::new();
    let sub3 = eqrel_subgroupoid_of_pairs();
    fixtures.push((sub3.clone(), Side::Right));
    fixtures.push((sub3, Side::Left));
    let p2 = Arc::new(pairs(&["a", "b"]));
    fixtures.push((Subgroupoid::identity_wide(p2.clone()), Side::Right));
    fixtures.push((Subgroupoid::full(p2.clone()), Side::Left));
    let c4 = Arc::new(cyclic_group(4).unwrap());
    // The order-two subgroup of C4.
    fixtures.push((
        Subgroupoid::closure(c4.clone(), &[ArrowId(2)], true),
        Side::Right,
    ));
    fixtures.push((Subgroupoid::closure(c4, &[ArrowId(2)], true), Side::Left));
    // A non-wide subgroupoid: one object of the pairs groupoid.
    let p3 = Arc::new(pairs(&["a", "b", "c"]));
    let mut objects = vec![false; 3];
    objects[0] = true;
    let mut arrows = vec![false; p3.n_arrows()];
    arrows[p3.ident(ObjectId(0)).0] = true;
    fixtures.push((Subgroupoid::new(p3, objects, arrows), Side::Right));
    fixtures
}
