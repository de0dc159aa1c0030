//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Tolerances are exact: every comparison is on integers, partitions
//! or byte strings.

mod common;

use std::time::Instant;

use gkit::action::{orbits, validate_action, ElementId, Side};
use gkit::biset::{double_orbits, from_left_product_set, to_left_product_set};
use gkit::coset::{coset_eq, coset_space, orbit_decomposition, orbit_stabilizer_iso};
use gkit::groupoid::{pairs, ProductGroupoid, Subgroupoid};
use gkit::mackey::{verify_mackey, MackeyInstance};
use gkit::random::{random_instance_at, RandomConfig};
use gkit::report::{emit_report, random_batch_report, Format};
use gkit::tensor::{coequalizer_factorization, quotient_map, raw_pair_biset, tensor_product, TensorError};
use std::sync::Arc;

fn verdict_line(name: &str, ok: bool, detail: &str) {
    println!("{}: {} ({detail})", name, if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name} failed: {detail}");
}

/// Criterion 1: 200 seeded random instances within (max_objects 3,
/// max_group_order 4) all verify, with the independent isomorphism search
/// agreeing, in under 60 seconds.
#[test]
fn criterion_1_randomized_verification() {
    let started = Instant::now();
    let cfg = RandomConfig::new(42, 3, 4, 200);
    let mut verdicts = 0;
    let mut oracles = 0;
    for i in 0..cfg.count as u64 {
        let inst = random_instance_at(&cfg, i);
        let report = verify_mackey(&inst).unwrap();
        if report.verdict {
            verdicts += 1;
        }
        if report.iso_oracle {
            oracles += 1;
        }
    }
    let elapsed = started.elapsed();
    verdict_line(
        "criterion 1 (randomized verification)",
        verdicts == 200 && oracles == 200 && elapsed.as_secs() < 60,
        &format!("{verdicts}/200 verdicts, {oracles}/200 oracle agreements, {elapsed:.2?}"),
    );
}

/// Criterion 2: the closed-form instance on pairs groupoids with a full
/// relation on one side and the identity relation on the other:
/// |lhs| = 2·1·6·2 = 24, six summands of size |K x G| = 4, verdict true.
#[test]
fn criterion_2_closed_form_instance() {
    let k = Arc::new(pairs(&["k1", "k2"]));
    let h = Arc::new(pairs(&["h1", "h2", "h3"]));
    let g = Arc::new(pairs(&["g1", "g2"]));
    let kh = ProductGroupoid::new(k.clone(), h.clone());
    let hg = ProductGroupoid::new(h.clone(), g.clone());
    let m = Subgroupoid::full(kh.groupoid().clone());
    let l = Subgroupoid::identity_wide(hg.groupoid().clone());
    let inst = MackeyInstance::new(k, h, g, &m, &l).unwrap();
    let report = verify_mackey(&inst).unwrap();
    let ok = report.verdict
        && report.lhs_size == 24
        && report.rhs_size == 24
        && report.summand_sizes.len() == 6
        && report.summand_sizes.iter().all(|&s| s == 4)
        && report.iso_oracle;
    verdict_line(
        "criterion 2 (closed-form instance)",
        ok,
        &format!(
            "verdict={} lhs={} summands={:?}",
            report.verdict, report.lhs_size, report.summand_sizes
        ),
    );
}

/// Criterion 3: on every element of every corpus action (at least fifty
/// actions), the orbit–stabilizer map is an equivariant bijection onto the
/// orbit, and the orbit decomposition partitions the carrier exactly.
#[test]
fn criterion_3_orbit_stabilizer() {
    let actions = common::corpus_actions();
    assert!(actions.len() >= 50, "corpus has only {} actions", actions.len());
    let mut elements = 0usize;
    for action in &actions {
        assert!(validate_action(action).passed());
        for x in action.elements() {
            let iso = orbit_stabilizer_iso(action, x);
            let rep = gkit::action::check_equivariant(&iso.iso);
            assert!(rep.passed(), "orbit-stabilizer map not equivariant: {rep}");
            assert!(iso.iso.is_bijective(), "orbit-stabilizer map not bijective");
            let inv = gkit::action::invert_equivariant(&iso.iso).unwrap();
            assert!(gkit::action::check_equivariant(&inv).passed());
            elements += 1;
        }
        let parts = orbit_decomposition(action);
        let total: usize = parts.iter().map(|p| p.space.len()).sum();
        assert_eq!(total, action.len(), "decomposition does not partition the carrier");
    }
    verdict_line(
        "criterion 3 (orbit-stabilizer)",
        true,
        &format!("{} actions, {elements} elements", actions.len()),
    );
}

/// Criterion 4: the biset <-> left product-set round trip is a table
/// identity on every corpus biset, and double orbits coincide with the
/// orbits of the converted left set.
#[test]
fn criterion_4_biset_left_set_round_trip() {
    let bisets = common::corpus_bisets();
    for b in &bisets {
        let (a, _) = to_left_product_set(b);
        let back = from_left_product_set(&a, b.left_groupoid(), b.right_groupoid()).unwrap();
        assert_eq!(&back, b, "round trip is not the identity on tables");
        let (p, _) = orbits(&a);
        assert_eq!(double_orbits(b).partition, p, "double orbits differ from left-set orbits");
    }
    verdict_line(
        "criterion 4 (round trip)",
        true,
        &format!("{} bisets, 100% table identity", bisets.len()),
    );
}

/// Criterion 5: on every corpus tensor instance with at most twelve
/// classes, generated coequalizing maps factor uniquely and the
/// non-coequalizing mutant is rejected with a witness.
#[test]
fn criterion_5_coequalizer() {
    let mut instances = 0;
    let mut mutants = 0;
    for (x, y) in common::corpus_tensor_instances() {
        let tensor = tensor_product(&x, &y).unwrap();
        if tensor.len() > 12 {
            continue;
        }
        instances += 1;
        // The quotient map factors through the identity, twice over.
        let q = quotient_map(&x, &y).unwrap();
        let f1 = coequalizer_factorization(&x, &y, &tensor.result, &q).unwrap();
        let f2 = coequalizer_factorization(&x, &y, &tensor.result, &q).unwrap();
        assert_eq!(f1.induced, f2.induced, "two factorizations disagree classwise");
        assert_eq!(
            f1.induced,
            (0..tensor.len()).map(ElementId).collect::<Vec<_>>(),
            "quotient map does not factor through the identity"
        );
        // Composing with a self-isomorphism still factors, through exactly
        // that isomorphism.
        let auto = gkit::mackey::biset_isomorphic(&tensor.result, &tensor.result).unwrap();
        let sigma = auto.witness.unwrap();
        let composed: Vec<ElementId> = q.iter().map(|c| sigma[c.0]).collect();
        let f3 = coequalizer_factorization(&x, &y, &tensor.result, &composed).unwrap();
        assert_eq!(f3.induced, sigma, "factorization differs from the composed isomorphism");
        // The identity on raw pairs separates identified pairs whenever any
        // identification happened, and must be rejected with a witness.
        let (raw, pairs_v) = raw_pair_biset(&x, &y).unwrap();
        if pairs_v.len() > tensor.len() {
            mutants += 1;
            let ident: Vec<ElementId> = raw.elements().collect();
            match coequalizer_factorization(&x, &y, &raw, &ident) {
                Err(TensorError::DoesNotCoequalize { x: wx, g, y: wy }) => {
                    assert!(!wx.is_empty() && !g.is_empty() && !wy.is_empty());
                }
                other => panic!("mutant not rejected: {other:?}"),
            }
        }
    }
    verdict_line(
        "criterion 5 (coequalizer)",
        instances > 0 && mutants > 0,
        &format!("{instances} instances, {mutants} rejected mutants"),
    );
}

/// Criterion 6: the coset equality criterion agrees with naive class-set
/// equality on every raw pair of every fixture.
#[test]
fn criterion_6_coset_equality_oracle() {
    let mut pairs_checked = 0usize;
    for (sub, side) in common::corpus_coset_fixtures() {
        let g = sub.parent().clone();
        let space = coset_space(&sub, side).unwrap();
        // Naive oracle: materialize the full class set of a raw pair.
        let class_set = |arrow: gkit::groupoid::ArrowId| -> Vec<usize> {
            let mut set: Vec<usize> = sub
                .arrows()
                .filter_map(|h| match side {
                    Side::Right => {
                        (g.src(h) == g.tgt(arrow)).then(|| g.comp2(h, arrow).0)
                    }
                    Side::Left => {
                        (g.tgt(h) == g.src(arrow)).then(|| g.comp2(arrow, h).0)
                    }
                })
                .collect();
            set.sort_unstable();
            set.dedup();
            set
        };
        for &p1 in space.raw() {
            for &p2 in space.raw() {
                let expected = class_set(p1) == class_set(p2);
                let got = coset_eq(&space, p1, p2).unwrap();
                assert_eq!(got, expected, "criterion disagrees with class sets");
                pairs_checked += 1;
            }
        }
    }
    verdict_line(
        "criterion 6 (coset equality oracle)",
        pairs_checked > 0,
        &format!("{pairs_checked} raw pairs compared"),
    );
}

/// Criterion 7: the non-surjective structure map fixture passes validation
/// and its image misses exactly one object.
#[test]
fn criterion_7_non_surjective_structure_map() {
    let action = common::non_surjective_action();
    let report = validate_action(&action);
    let ok = report.passed()
        && report
            .notes
            .iter()
            .any(|n| n == "structure map not surjective; misses {b}");
    verdict_line("criterion 7 (non-surjective structure map)", ok, &format!("{report}"));
}

/// Criterion 8: repeating the randomized run with the same seed produces
/// byte-identical JSON reports, and reversing every element ordering never
/// changes a verdict.
#[test]
fn criterion_8_determinism() {
    let cfg = RandomConfig::new(42, 3, 4, 200);
    let run = || {
        let mut results = Vec::new();
        for i in 0..cfg.count as u64 {
            let inst = random_instance_at(&cfg, i);
            results.push((i, verify_mackey(&inst).unwrap()));
        }
        let report = random_batch_report(
            "random",
            cfg.seed,
            serde_json::json!({
                "seed": cfg.seed,
                "max_objects": cfg.max_objects,
                "max_group_order": cfg.max_group_order,
                "count": cfg.count,
            }),
            &results,
        );
        emit_report(&report, Format::Json).unwrap()
    };
    let first = run();
    let second = run();
    let bytes_equal = first == second;

    let mut reversals_agree = true;
    for i in 0..cfg.count as u64 {
        let inst = random_instance_at(&cfg, i);
        let original = verify_mackey(&inst).unwrap();
        let reversed = verify_mackey(&inst.reversed()).unwrap();
        if original.verdict != reversed.verdict || original.lhs_size != reversed.lhs_size {
            reversals_agree = false;
            break;
        }
    }
    verdict_line(
        "criterion 8 (determinism)",
        bytes_equal && reversals_agree,
        &format!("byte-identical={bytes_equal}, reversal-stable={reversals_agree}"),
    );
}
