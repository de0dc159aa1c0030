//! Construct finite groupoids with the standard builders, validate the
//! axioms exhaustively, and inspect components and isotropy groups.
//!
//! ```bash
//! cargo run --example build_groupoids
//! ```

use std::sync::Arc;

use gkit::groupoid::{
    build_groupoid, connected_components, cyclic_group, eqrel, isotropy_group, pairs,
    validate_groupoid, Builder,
};

fn main() {
    // The complete relation on three elements: every ordered pair is an
    // arrow.
    let p = pairs(&["a", "b", "c"]);
    println!(
        "pairs groupoid: {} objects, {} arrows, validation: {}",
        p.n_objects(),
        p.n_arrows(),
        validate_groupoid(&p)
    );

    // An equivalence relation sits inside it as a subgroupoid-sized
    // groupoid of its own.
    let e = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
    println!(
        "equivalence relation {{a,b}},{{c}}: {} arrows, components {:?}",
        e.n_arrows(),
        connected_components(&e).blocks()
    );

    // One-object groupoids are groups; products mix everything.
    let c3 = Arc::new(cyclic_group(3).unwrap());
    let prod = build_groupoid(&Builder::Product(Arc::new(p), c3)).unwrap();
    println!(
        "product with a cyclic group: {} objects, {} arrows, valid: {}",
        prod.n_objects(),
        prod.n_arrows(),
        validate_groupoid(&prod).passed()
    );

    // The action groupoid of Z/2 swapping two of three points has one
    // nontrivial isotropy group.
    let c2 = Arc::new(cyclic_group(2).unwrap());
    let action = build_groupoid(&Builder::ActionGroupoid {
        group: c2,
        carrier: vec!["1".into(), "2".into(), "3".into()],
        act: vec![vec![0, 1], vec![1, 0], vec![2, 2]],
    })
    .unwrap();
    let ga = Arc::new(action);
    for x in ga.objects() {
        let iso = isotropy_group(&ga, x).unwrap();
        println!(
            "isotropy at {}: {} loop(s)",
            ga.object_label(x),
            iso.n_selected_arrows()
        );
    }
}
