//! The headline capability: build both sides of the Mackey formula on a
//! concrete instance, construct the explicit correspondence, and certify it
//! as an equivariant bijection — with an independent isomorphism search as
//! a second opinion.
//!
//! ```bash
//! cargo run --example mackey_verify
//! ```

use std::sync::Arc;

use gkit::groupoid::{pairs, ProductGroupoid, Subgroupoid};
use gkit::mackey::{verify_mackey, MackeyInstance};

fn main() {
    // Pairs groupoids of sizes 2, 3, 2. M is the full subgroupoid of K x H
    // (everything is related), L identifies nothing (identity arrows only).
    let k = Arc::new(pairs(&["k1", "k2"]));
    let h = Arc::new(pairs(&["h1", "h2", "h3"]));
    let g = Arc::new(pairs(&["g1", "g2"]));
    let kh = ProductGroupoid::new(k.clone(), h.clone());
    let hg = ProductGroupoid::new(h.clone(), g.clone());
    let m = Subgroupoid::full(kh.groupoid().clone());
    let l = Subgroupoid::identity_wide(hg.groupoid().clone());
    let inst = MackeyInstance::new(k, h, g, &m, &l).unwrap();

    let report = verify_mackey(&inst).unwrap();
    println!("verdict: {}", report.verdict);
    println!("lhs: tensor product with {} class(es)", report.lhs_size);
    println!("rhs: {} summand(s):", report.summand_sizes.len());
    for (rep, size) in report.summand_reps.iter().zip(&report.summand_sizes) {
        println!("  orbit representative {rep}: coset space of size {size}");
    }
    println!("independent isomorphism search agrees: {}", report.iso_oracle);

    // The verdict never depends on how elements were ordered.
    let reversed = verify_mackey(&inst.reversed()).unwrap();
    println!(
        "reversed element orderings: verdict {} with lhs size {}",
        reversed.verdict, reversed.lhs_size
    );
}
