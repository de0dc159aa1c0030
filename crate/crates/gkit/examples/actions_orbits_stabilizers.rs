//! Groupoid-sets: validate an action, compute its translation groupoid,
//! orbits and stabilizers, and restrict to an invariant subset.
//!
//! ```bash
//! cargo run --example actions_orbits_stabilizers
//! ```

use std::sync::Arc;

use gkit::action::{
    orbits, restrict_action, stabilizer, translation_groupoid, validate_action, ElementId,
    GroupoidAction, Side,
};
use gkit::groupoid::{cyclic_group, ObjectId};

fn main() {
    // Z/2 acting on {1,2,3} by swapping 1 and 2.
    let c2 = Arc::new(cyclic_group(2).unwrap());
    let action = GroupoidAction::from_fn(
        Side::Right,
        c2,
        vec!["1".into(), "2".into(), "3".into()],
        vec![ObjectId(0); 3],
        |x, g| if g.0 == 0 { x } else { ElementId([1, 0, 2][x.0]) },
    );
    println!("validation: {}", validate_action(&action));

    let (partition, reps) = orbits(&action);
    println!("orbits: {:?}, representatives {:?}", partition.blocks(), reps);

    for x in action.elements() {
        let stab = stabilizer(&action, x).unwrap();
        println!(
            "stabilizer of {}: {} loop(s)",
            action.label(x),
            stab.subgroup.n_selected_arrows()
        );
    }

    // The translation groupoid encodes the action as a groupoid whose
    // components are the orbits.
    let (trans, to_acting) = translation_groupoid(&action);
    println!(
        "translation groupoid: {} objects, {} arrows; morphism to the acting groupoid valid: {}",
        trans.n_objects(),
        trans.n_arrows(),
        gkit::groupoid::check_morphism(&to_acting).passed()
    );

    // Orbits are invariant subsets, so restriction always succeeds.
    let block: Vec<ElementId> = partition.block(0).iter().map(|&i| ElementId(i)).collect();
    let restricted = restrict_action(&action, &block).unwrap();
    println!("restricted to the first orbit: {} element(s)", restricted.len());
}
