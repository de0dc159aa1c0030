//! Tensor products of bisets over a shared middle groupoid, and the
//! co-equalizer property: maps out of the fibre pairs factor through the
//! tensor classes exactly when they coequalize the two translations.
//!
//! ```bash
//! cargo run --example tensor_product
//! ```

use std::sync::Arc;

use gkit::action::ElementId;
use gkit::biset::Biset;
use gkit::groupoid::pairs;
use gkit::tensor::{coequalizer_factorization, quotient_map, raw_pair_biset, tensor_product};

fn main() {
    let g = Arc::new(pairs(&["a", "b"]));
    let b = Biset::regular(&g);

    let tensor = tensor_product(&b, &b).unwrap();
    println!("tensor of the regular biset with itself: {} class(es)", tensor.len());
    for (i, class) in tensor.classes.iter().enumerate() {
        println!(
            "  {} with {} member(s)",
            tensor.result.label(ElementId(i)),
            class.members.len()
        );
    }

    // The quotient map coequalizes and factors through the identity.
    let q = quotient_map(&b, &b).unwrap();
    let factorization = coequalizer_factorization(&b, &b, &tensor.result, &q).unwrap();
    println!(
        "quotient map factors through the identity: {}",
        factorization.induced == (0..tensor.len()).map(ElementId).collect::<Vec<_>>()
    );

    // The identity on raw pairs separates identified pairs and is rejected
    // with a witness triple.
    let (raw, _) = raw_pair_biset(&b, &b).unwrap();
    let ident: Vec<ElementId> = raw.elements().collect();
    match coequalizer_factorization(&b, &b, &raw, &ident) {
        Err(e) => println!("identity on raw pairs rejected: {e}"),
        Ok(_) => unreachable!("the regular biset identifies pairs"),
    }
}
