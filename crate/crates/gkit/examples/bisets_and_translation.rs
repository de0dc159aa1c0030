//! Two-sided actions: the regular biset, the correspondence with left sets
//! over a product groupoid, double orbits, the two-sided translation
//! groupoid, and quotient groupoid-sets.
//!
//! ```bash
//! cargo run --example bisets_and_translation
//! ```

use std::sync::Arc;

use gkit::biset::{
    double_orbits, from_left_product_set, quotient_actions, to_left_product_set,
    two_sided_translation, validate_biset, Biset,
};
use gkit::groupoid::{connected_components, pairs};

fn main() {
    let g = Arc::new(pairs(&["a", "b"]));
    let b = Biset::regular(&g);
    println!("regular biset: {} elements, validation: {}", b.len(), validate_biset(&b));

    // A biset is the same data as a left set over the product with the
    // opposite groupoid; the round trip is a table identity.
    let (as_left_set, _product) = to_left_product_set(&b);
    let back = from_left_product_set(&as_left_set, b.left_groupoid(), b.right_groupoid()).unwrap();
    println!("round trip is the identity on tables: {}", back == b);

    // Double orbits coincide with the connected components of the two-sided
    // translation groupoid.
    let orbits = double_orbits(&b);
    let translation = two_sided_translation(&b);
    println!(
        "double orbits: {} block(s); translation groupoid {} objects / {} arrows; components agree: {}",
        orbits.partition.len(),
        translation.n_objects(),
        translation.n_arrows(),
        connected_components(&translation) == orbits.partition
    );

    // Quotienting by one side leaves an action of the other side.
    let (right_on_classes, left_on_classes) = quotient_actions(&b);
    println!(
        "quotients: right set on {} class(es), left set on {} class(es)",
        right_on_classes.len(),
        left_on_classes.len()
    );
}
