//! Seeded random instance generation: draw groupoids and wide subgroupoids
//! within size bounds and verify the formula on every draw. Identical seeds
//! reproduce identical instances.
//!
//! ```bash
//! cargo run --example random_search
//! ```

use gkit::mackey::verify_mackey;
use gkit::random::{random_instance_at, RandomConfig};

fn main() {
    let cfg = RandomConfig::new(2024, 3, 4, 20);
    let mut all = true;
    for i in 0..cfg.count as u64 {
        let inst = random_instance_at(&cfg, i);
        let report = verify_mackey(&inst).unwrap();
        all &= report.verdict && report.iso_oracle;
        println!(
            "instance {i}: |K1|={} |H1|={} |G1|={} verdict={} lhs={} summands={}",
            inst.k.n_arrows(),
            inst.h.n_arrows(),
            inst.g.n_arrows(),
            report.verdict,
            report.lhs_size,
            report.summand_sizes.len()
        );
    }
    println!("all verdicts true: {all}");
}
