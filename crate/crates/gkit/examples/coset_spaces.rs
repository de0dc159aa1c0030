//! Coset spaces by a subgroupoid: canonical class representatives, the
//! quotient equality criterion, and the orbit–stabilizer decomposition of a
//! groupoid-set into coset spaces.
//!
//! ```bash
//! cargo run --example coset_spaces
//! ```

use std::sync::Arc;

use gkit::action::{check_equivariant, Side};
use gkit::coset::{coset_eq, coset_space, orbit_decomposition};
use gkit::groupoid::{eqrel, pairs, Subgroupoid};

fn main() {
    // The pairs groupoid on {a,b,c} quotiented by the relation {{a,b},{c}}.
    let p = Arc::new(pairs(&["a", "b", "c"]));
    let e = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
    let mask: Vec<bool> = p
        .arrows()
        .map(|arr| e.arrow_by_label(p.arrow_label(arr)).is_some())
        .collect();
    let sub = Subgroupoid::new(p.clone(), vec![true; 3], mask);

    let space = coset_space(&sub, Side::Right).unwrap();
    println!("right coset space: {} classes", space.len());
    for c in space.classes() {
        println!(
            "  [{}] with {} member(s)",
            p.arrow_label(c.rep_arrow),
            c.members.len()
        );
    }

    // Two raw pairs are in the same class exactly when the quotient
    // criterion produces a subgroupoid arrow.
    let g1 = p.arrow_by_label("(a,c)").unwrap();
    let g2 = p.arrow_by_label("(b,c)").unwrap();
    println!(
        "(a,c) ~ (b,c): {} (a and b are related)",
        coset_eq(&space, g1, g2).unwrap()
    );

    // Any groupoid-set decomposes into coset spaces of stabilizers, one per
    // orbit.
    let regular = gkit::action::GroupoidAction::right_regular(&p);
    for part in orbit_decomposition(&regular) {
        println!(
            "orbit summand: {} class(es), equivariant: {}, bijective: {}",
            part.space.len(),
            check_equivariant(&part.iso).passed(),
            part.iso.is_bijective()
        );
    }
}
