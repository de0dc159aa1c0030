//! Report emitters. Every command's outcome is carried by a [`Report`]:
//! a JSON envelope with the fixed top-level keys `tool`, `version`,
//! `command`, `seed` (optional), `inputs`, `result`, `verdict` (optional)
//! and `timings_ms` (optional, omitted from reproducible batch files), plus
//! prerendered text and, where a graph exists, DOT. All output is
//! deterministic for a given input; arrays are ordered by canonical index.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::action::GroupoidAction;
use crate::coset::CosetSpace;
use crate::groupoid::FiniteGroupoid;
use crate::mackey::MackeyReport;
use crate::tensor::TensorProductBiset;
use crate::util::Partition;
use crate::validate::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported format {0}")]
    UnsupportedFormat(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<u64>,
}

/// One renderable report: the JSON envelope plus prerendered text and
/// optional DOT.
#[derive(Debug, Clone)]
pub struct Report {
    pub envelope: Envelope,
    pub text: String,
    pub dot: Option<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, result: Value) -> Report {
        Report {
            envelope: Envelope {
                tool: "gkit",
                version: env!("CARGO_PKG_VERSION"),
                command: command.to_string(),
                seed: None,
                inputs,
                result,
                verdict: None,
                timings_ms: None,
            },
            text: String::new(),
            dot: None,
        }
    }
}

/// Serializes per the requested format; DOT is only available for commands
/// that produced a graph.
pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>, ReportError> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&report.envelope).expect("serializable");
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Text => Ok(report.text.clone().into_bytes()),
        Format::Dot => report
            .dot
            .clone()
            .map(String::into_bytes)
            .ok_or_else(|| ReportError::UnsupportedFormat("dot".into())),
    }
}

/// DOT digraph of a groupoid: one node per object, one directed edge per
/// non-identity arrow (source to target), identity arrows suppressed.
pub fn groupoid_to_dot(g: &FiniteGroupoid) -> String {
    let mut out = String::from("digraph g {\n");
    for x in g.objects() {
        out.push_str(&format!("  \"{}\";\n", g.object_label(x)));
    }
    for a in g.arrows() {
        if g.is_identity(a) {
            continue;
        }
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            g.object_label(g.src(a)),
            g.object_label(g.tgt(a)),
            g.arrow_label(a)
        ));
    }
    out.push_str("}\n");
    out
}

fn validation_value(report: &ValidationReport) -> Value {
    json!({
        "passed": report.passed(),
        "violations": report.violations,
        "notes": report.notes,
    })
}

/// Validation results for a list of named entities (declaration order).
pub fn validation_report(command: &str, inputs: Value, items: &[(String, ValidationReport)]) -> Report {
    let all = items.iter().all(|(_, r)| r.passed());
    let result = Value::Array(
        items
            .iter()
            .map(|(name, r)| {
                let mut v = validation_value(r);
                v.as_object_mut().unwrap().insert("name".into(), json!(name));
                v
            })
            .collect(),
    );
    let mut text = String::new();
    for (name, r) in items {
        text.push_str(&format!("{name}: {r}\n"));
    }
    text.push_str(&format!("overall: {}\n", if all { "pass" } else { "FAIL" }));
    let mut rep = Report::new(command, inputs, result);
    rep.envelope.verdict = Some(all);
    rep.text = text;
    rep
}

/// Orbit partition of an action, with the translation groupoid as DOT.
pub fn orbits_report(
    command: &str,
    inputs: Value,
    action: &GroupoidAction,
    partition: &Partition,
    translation: &FiniteGroupoid,
) -> Report {
    let blocks: Vec<Vec<String>> = partition
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&i| action.label(crate::action::ElementId(i)).to_string()).collect())
        .collect();
    let reps: Vec<String> = partition
        .representatives()
        .iter()
        .map(|&r| action.label(crate::action::ElementId(r)).to_string())
        .collect();
    let result = json!({
        "orbits": blocks,
        "representatives": reps,
        "count": partition.len(),
    });
    let mut text = format!("{} orbit(s)\n", partition.len());
    for (b, r) in blocks.iter().zip(&reps) {
        text.push_str(&format!("  [{r}]: {{{}}}\n", b.join(", ")));
    }
    let mut rep = Report::new(command, inputs, result);
    rep.text = text;
    rep.dot = Some(groupoid_to_dot(translation));
    rep
}

/// Coset space summary: class count, canonical representatives and sizes.
pub fn cosets_report(command: &str, inputs: Value, space: &CosetSpace) -> Report {
    let g = space.sub().parent();
    let classes: Vec<Value> = space
        .classes()
        .iter()
        .map(|c| {
            json!({
                "rep_arrow": g.arrow_label(c.rep_arrow),
                "rep_object": g.object_label(c.rep_object),
                "size": c.members.len(),
            })
        })
        .collect();
    let action_valid = crate::action::validate_action(space.action()).passed();
    let result = json!({
        "side": match space.side() { crate::action::Side::Left => "left", crate::action::Side::Right => "right" },
        "count": space.len(),
        "classes": classes,
        "action_valid": action_valid,
    });
    let mut text = format!("{} coset class(es); induced action valid: {action_valid}\n", space.len());
    for c in space.classes() {
        text.push_str(&format!(
            "  [{}] ({} member(s))\n",
            g.arrow_label(c.rep_arrow),
            c.members.len()
        ));
    }
    let mut rep = Report::new(command, inputs, result);
    rep.envelope.verdict = Some(action_valid);
    rep.text = text;
    rep
}

/// Tensor product summary: classes with representative labels and sizes.
pub fn tensor_report(command: &str, inputs: Value, tensor: &TensorProductBiset) -> Report {
    let valid = crate::biset::validate_biset(&tensor.result).passed();
    let classes: Vec<Value> = tensor
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "class": tensor.result.label(crate::action::ElementId(i)),
                "members": c.members.len(),
            })
        })
        .collect();
    let result = json!({
        "count": tensor.len(),
        "classes": classes,
        "valid": valid,
    });
    let mut text = format!("{} tensor class(es); biset valid: {valid}\n", tensor.len());
    for (i, c) in tensor.classes.iter().enumerate() {
        text.push_str(&format!(
            "  {} ({} member(s))\n",
            tensor.result.label(crate::action::ElementId(i)),
            c.members.len()
        ));
    }
    let mut rep = Report::new(command, inputs, result);
    rep.envelope.verdict = Some(valid);
    rep.text = text;
    rep
}

pub fn mackey_result_value(report: &MackeyReport) -> Value {
    json!({
        "verdict": report.verdict,
        "lhs_size": report.lhs_size,
        "rhs_size": report.rhs_size,
        "summands": report
            .summand_reps
            .iter()
            .zip(&report.summand_sizes)
            .map(|(rep, size)| json!({"rep": rep, "size": size}))
            .collect::<Vec<_>>(),
        "iso_oracle": report.iso_oracle,
        "counterexample": report.counterexample,
    })
}

/// Mackey verification on one instance.
pub fn mackey_report(command: &str, inputs: Value, m: &MackeyReport) -> Report {
    let mut text = format!(
        "verdict: {}\nlhs size {} = {} summand(s) totalling {}\nindependent isomorphism search: {}\n",
        if m.verdict { "TRUE" } else { "FALSE" },
        m.lhs_size,
        m.summand_sizes.len(),
        m.summand_sizes.iter().sum::<usize>(),
        m.iso_oracle,
    );
    if let Some(c) = &m.counterexample {
        text.push_str(&format!("counterexample: {c}\n"));
    }
    let mut rep = Report::new(command, inputs, mackey_result_value(m));
    rep.envelope.verdict = Some(m.verdict);
    rep.text = text;
    rep
}

/// Batch verification of randomly generated instances. The envelope is
/// fully deterministic in the seed (no timings), so repeated runs produce
/// byte-identical files.
pub fn random_batch_report(
    command: &str,
    seed: u64,
    inputs: Value,
    instances: &[(u64, MackeyReport)],
) -> Report {
    let all = instances.iter().all(|(_, r)| r.verdict && r.iso_oracle);
    let rows: Vec<Value> = instances
        .iter()
        .map(|(i, r)| {
            json!({
                "index": i,
                "verdict": r.verdict,
                "iso_oracle": r.iso_oracle,
                "lhs_size": r.lhs_size,
                "summands": r.summand_sizes.len(),
            })
        })
        .collect();
    let result = json!({
        "instances": rows,
        "all_verdicts_true": all,
    });
    let mut text = String::new();
    for (i, r) in instances {
        text.push_str(&format!(
            "instance {i}: verdict={} iso_oracle={} lhs={} summands={}\n",
            r.verdict,
            r.iso_oracle,
            r.lhs_size,
            r.summand_sizes.len()
        ));
    }
    text.push_str(&format!("all verdicts true: {all}\n"));
    let mut rep = Report::new(command, inputs, result);
    rep.envelope.seed = Some(seed);
    rep.envelope.verdict = Some(all);
    rep.text = text;
    rep
}
