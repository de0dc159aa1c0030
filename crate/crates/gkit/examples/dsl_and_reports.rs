//! The instance description language and the report emitters: parse a
//! declaration file, build its entities, run a computation, and emit JSON
//! and DOT.
//!
//! ```bash
//! cargo run --example dsl_and_reports
//! ```

use gkit::dsl::{build_env, parse_spec, print_spec};
use gkit::report::{emit_report, groupoid_to_dot, mackey_report, Format};

fn main() {
    let text = "\
# a small verification instance
groupoid K = pairs {k1, k2}
groupoid H = group cyclic 2
groupoid G = trivial {g1}
groupoid KH = product(K, H)
groupoid HG = product(H, G)
subgroupoid M of KH = wide arrows {((k1,k2),c1)} close
subgroupoid L of HG = wide arrows {}
check mackey K H G M L
";
    let spec = parse_spec(text).unwrap();
    println!("parsed {} declaration(s); canonical form:\n{}", spec.decls.len(), print_spec(&spec));

    let env = build_env(&spec).unwrap();
    let k = env.groupoid("K").unwrap().groupoid.clone();
    println!("DOT for K:\n{}", groupoid_to_dot(&k));

    // Run the mackey directive by hand and emit the JSON report.
    let (_, m) = env.sub("M").unwrap();
    let (_, l) = env.sub("L").unwrap();
    let inst = gkit::mackey::MackeyInstance::new(
        k,
        env.groupoid("H").unwrap().groupoid.clone(),
        env.groupoid("G").unwrap().groupoid.clone(),
        m,
        l,
    )
    .unwrap();
    let result = gkit::mackey::verify_mackey(&inst).unwrap();
    let report = mackey_report(
        "mackey",
        serde_json::json!({"k": "K", "h": "H", "g": "G", "m": "M", "l": "L"}),
        &result,
    );
    let json = emit_report(&report, Format::Json).unwrap();
    println!("{}", String::from_utf8(json).unwrap());
}
