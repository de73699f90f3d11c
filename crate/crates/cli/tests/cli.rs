use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;

use proptest::prelude::*;
use serde_json::{json, Value};

use rigidcoh_cli::ops::table;
use rigidcoh_cli::{parse, prepare, run, InputErrorKind, ResultDocument, Status, TaskDocument, CORPUS};

const SIGN_DECLS: &str = r#"
    "groups": [{ "id": "G", "type": "cyclic", "order": 2 }],
    "lattices": [{ "id": "L", "group": "G", "type": "action", "rank": 1, "generators": [1], "images": [[[-1]]] }]
"#;

fn doc_with_tasks(tasks: &str) -> String {
    format!("{{ {SIGN_DECLS}, \"tasks\": {tasks} }}")
}

fn payload(text: &str, i: usize) -> Value {
    let p = prepare(text).unwrap();
    let r = run(&p, 1);
    assert_eq!(r.results[i].status, Status::Ok, "{:?}", r.results[i].error);
    r.results[i].payload.clone().unwrap()
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rigidcoh"))
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn minimal_document_parses() {
    let p = prepare(&doc_with_tasks(r#"[{ "op": "tate_h_neg1", "lattice": "L" }]"#)).unwrap();
    assert_eq!(p.task_count(), 1);
}

#[test]
fn dangling_reference_names_the_identifier() {
    let e = prepare(&doc_with_tasks(r#"[{ "op": "tate_h_neg1", "lattice": "missing" }]"#)).err().unwrap();
    assert_eq!(e.kind, InputErrorKind::DanglingReference);
    assert_eq!(e.code(), "DanglingReference");
    assert_eq!(e.location, "tasks[0].lattice");
    assert!(e.message.contains("\"missing\""), "{e}");

    let e = prepare(r#"{ "lattices": [{ "id": "L", "group": "nope", "type": "trivial", "rank": 1 }] }"#).err().unwrap();
    assert_eq!((e.kind, e.location.as_str()), (InputErrorKind::DanglingReference, "lattices[0].group"));
}

#[test]
fn reference_of_the_wrong_kind_is_dangling() {
    let e = prepare(&doc_with_tasks(r#"[{ "op": "tate_h_neg1", "lattice": "G" }]"#)).err().unwrap();
    assert_eq!(e.kind, InputErrorKind::DanglingReference);
}

#[test]
fn non_latin_square_table_is_a_schema_error() {
    let e = prepare(r#"{ "groups": [{ "id": "T", "type": "table", "table": [[0, 1], [1, 1]] }] }"#).err().unwrap();
    assert_eq!(e.kind, InputErrorKind::Schema);
    assert_eq!(e.location, "groups[0].table");
    assert!(e.message.contains("Latin square"), "{e}");
}

#[test]
fn syntax_errors_carry_a_position() {
    let e = parse("{\n  \"tasks\": [\n    {\"op\": }\n  ]\n}").err().unwrap();
    assert_eq!(e.kind, InputErrorKind::Parse);
    assert_eq!(e.location, "line 3, column 12");
    let e = parse("{} trailing").err().unwrap();
    assert_eq!(e.kind, InputErrorKind::Parse);
}

#[test]
fn shape_errors_carry_a_path() {
    let e = parse(r#"{ "series": [{ "id": "s", "p": 3, "start": 0, "coeffs": ["x"] }] }"#).err().unwrap();
    assert_eq!((e.kind, e.location.as_str()), (InputErrorKind::Schema, "series[0].coeffs[0]"));
    let e = prepare(&doc_with_tasks(r#"[{ "op": "tate_h0", "lattice": "L", "extra": 1 }]"#)).err().unwrap();
    assert_eq!(e.kind, InputErrorKind::Schema);
    assert!(e.location.starts_with("tasks[0]"), "{e}");
    let e = prepare(&doc_with_tasks(r#"[{ "op": "no_such_op" }]"#)).err().unwrap();
    assert_eq!((e.kind, e.location.as_str()), (InputErrorKind::Schema, "tasks[0].op"));
    let e = parse(r#"{ "unknown_section": [] }"#).err().unwrap();
    assert_eq!(e.kind, InputErrorKind::Schema);
}

#[test]
fn identifiers_are_global() {
    let text = r#"{
        "groups": [{ "id": "X", "type": "trivial" }],
        "characters": [{ "id": "X", "values": ["1/2"] }]
    }"#;
    let e = prepare(text).err().unwrap();
    assert_eq!((e.kind, e.location.as_str()), (InputErrorKind::Schema, "characters[0].id"));
}

#[test]
fn norm_one_torus_has_rigid_group_of_order_two() {
    let text = format!(
        "{{ {SIGN_DECLS}, \"pairs\": [{{ \"id\": \"P\", \"lattice\": \"L\", \"type\": \"trivial\" }}],
          \"tasks\": [{{ \"op\": \"rigid_h1_torus\", \"pair\": \"P\" }}] }}"
    );
    assert_eq!(payload(&text, 0)["invariant_factors"], json!([2]));
}

#[test]
fn h2_of_the_band_for_a_quadratic_level() {
    let text = doc_with_tasks(r#"[{ "op": "h2_u_level", "group": "G", "n": 2 }]"#);
    assert_eq!(payload(&text, 0)["invariant_factors"], json!([2]));
}

#[test]
fn delta_iv_payload_is_base_and_exponent() {
    let text = r#"{
        "root_data": [{ "id": "SL2", "type": "cartan", "family": "A", "rank": 1, "form": "simply_connected" }],
        "series": [{ "id": "g", "p": 3, "start": 0, "coeffs": [1, 1] }],
        "tasks": [{ "op": "delta_IV", "datum": "SL2", "subsystem": [], "gamma": ["g"] }]
    }"#;
    assert_eq!(payload(text, 0), json!({ "base": 3, "exponent": "-1" }));
}

#[test]
fn failing_task_does_not_abort_siblings() {
    let text = r#"{
        "groups": [{ "id": "G", "type": "cyclic", "order": 2 }],
        "lattices": [{ "id": "L", "group": "G", "type": "trivial", "rank": 1 }],
        "pairs": [{ "id": "P", "lattice": "L", "type": "inclusion", "matrix": [[4]] }],
        "tasks": [
            { "op": "hom_u_to_Z", "group": "G", "n": 2, "pair": "P" },
            { "op": "band_group", "pair": "P" }
        ]
    }"#;
    let r = run(&prepare(text).unwrap(), 2);
    assert_eq!(r.results[0].status, Status::Error);
    assert_eq!(r.results[0].error.as_ref().unwrap().code, "ExponentMismatch");
    assert_eq!(r.results[1].status, Status::Ok);
    assert!(!r.all_ok());
}

#[test]
fn exit_codes() {
    let empty = write_temp(r#"{ "tasks": [] }"#);
    let out = binary().args(["run"]).arg(empty.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = ResultDocument::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(r.results.is_empty());

    let failing = write_temp(&doc_with_tasks(r#"[{ "op": "hom_u_to_Z", "group": "G", "n": 0, "pair": "P" }]"#).replace(
        "\"tasks\"",
        "\"pairs\": [{ \"id\": \"P\", \"lattice\": \"L\", \"type\": \"trivial\" }], \"tasks\"",
    ));
    let out = binary().args(["run"]).arg(failing.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let bad = write_temp("{ not json");
    for cmd in ["run", "check"] {
        let out = binary().arg(cmd).arg(bad.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("ParseError"));
    }
    let out = binary().args(["check", "/nonexistent/file.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn examples_prints_the_corpus_and_it_checks() {
    let out = binary().arg("examples").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), CORPUS);
    let f = write_temp(CORPUS);
    let out = binary().arg("check").arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn binary_output_is_independent_of_jobs() {
    let f = write_temp(CORPUS);
    let outputs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|j| {
            let out = binary().args(["run", "--jobs", j]).arg(f.path()).output().unwrap();
            assert_eq!(out.status.code(), Some(0));
            out.stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let out = binary().args(["run", "--jobs", "0"]).arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_renders_groups() {
    let f = write_temp(&doc_with_tasks(
        r#"[{ "op": "tate_h_neg1", "lattice": "L" }, { "op": "tate_h0", "lattice": "L" },
            { "op": "subquotient", "rank": 2, "numerator": [[1, 0], [0, 1]], "denominator": [[2, 0], [0, 4]] }]"#,
    ));
    let out = binary().args(["run", "--format", "text"]).arg(f.path()).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "[0] tate_h_neg1: ℤ/2\n[1] tate_h0: 0\n[2] subquotient: ℤ/2 ⊕ ℤ/4\n");
}

#[test]
fn result_documents_round_trip() {
    let out = run(&prepare(CORPUS).unwrap(), 4).to_json();
    let back = ResultDocument::from_json(&out).unwrap();
    assert_eq!(back.to_json(), out);
    // keys come out sorted
    let first = out.lines().find(|l| l.trim_start().starts_with('"')).unwrap();
    assert!(first.contains("\"results\""));
}

#[test]
fn corpus_document_round_trips() {
    let doc = parse(CORPUS).unwrap();
    assert_eq!(parse(&doc.to_json()).unwrap(), doc);
}

/// The operations of the library modules, by task name.
const LIBRARY_OPS: &[&str] = &[
    "smith_normal_form",
    "kernel_basis",
    "subquotient",
    "saturation",
    "norm_matrix",
    "augmentation_sublattice",
    "invariants_sublattice",
    "tate_h0",
    "tate_h_neg1",
    "h1_lattice",
    "tate_h_neg2_finite",
    "h1_finite",
    "dual_module",
    "rigid_h1_torus",
    "h1_F_torus",
    "h2_F_torus",
    "restriction_to_band",
    "transgression",
    "infres_check",
    "induced_class_map",
    "char_module",
    "hom_u_to_Z",
    "h2_u_level",
    "transition_char",
    "transition_h2",
    "alpha_level",
    "coroot_sublattice",
    "rigid_h1_reductive",
    "component_group_dual_center",
    "tn_pairing",
    "pairing_perfectness",
    "weyl_group",
    "weyl_quotient_triviality",
    "is_elliptic",
    "dual_root_datum",
    "endoscopic_subsystem",
    "validate_refined",
    "lift_to_refined",
    "transfer_pairing_term",
    "enlarge_center_invariance",
    "valuation",
    "abs_value",
    "is_strongly_regular",
    "delta_IV",
];

#[test]
fn dispatcher_covers_every_library_operation() {
    let names: BTreeSet<&str> = table().iter().map(|e| e.name).collect();
    assert_eq!(names.len(), table().len(), "duplicate op names");
    for op in LIBRARY_OPS {
        assert!(names.contains(op), "no task type for {op}");
    }
    let modules: BTreeSet<&str> = table().iter().map(|e| e.module).collect();
    let expected = ["endoscopy", "exact_lattice", "galois", "local_field", "reductive", "tori", "u_band"];
    assert_eq!(modules.into_iter().collect::<Vec<_>>(), expected);
}

#[test]
fn corpus_exercises_every_task_type() {
    let used: BTreeSet<String> = parse(CORPUS).unwrap().tasks.into_iter().map(|t| t.op).collect();
    for e in table() {
        assert!(used.contains(e.name), "corpus never runs {}", e.name);
    }
}

fn schema(name: &str) -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/");
    serde_json::from_str(&std::fs::read_to_string(format!("{path}{name}")).unwrap()).unwrap()
}

#[test]
fn schema_lists_exactly_the_dispatcher_ops() {
    let s = schema("task-document.schema.json");
    let listed: BTreeSet<&str> =
        s["properties"]["tasks"]["items"]["properties"]["op"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let table_ops: BTreeSet<&str> = table().iter().map(|e| e.name).collect();
    assert_eq!(listed, table_ops);
}

#[test]
fn corpus_and_results_satisfy_the_schemas() {
    let input = jsonschema::JSONSchema::compile(&schema("task-document.schema.json")).unwrap();
    let corpus: Value = serde_json::from_str(CORPUS).unwrap();
    assert!(input.is_valid(&corpus));
    let bad = json!({ "groups": [{ "id": "G", "type": "cyclic" }] });
    assert!(!input.is_valid(&bad));
    let output = jsonschema::JSONSchema::compile(&schema("result-document.schema.json")).unwrap();
    let results: Value = serde_json::from_str(&run(&prepare(CORPUS).unwrap(), 2).to_json()).unwrap();
    assert!(output.is_valid(&results));
}

/// Small random documents: cyclic groups, characters, series and tasks
/// referring to them.
fn document() -> impl Strategy<Value = TaskDocument> {
    let group = (1usize..7).prop_map(|n| json!({ "type": "cyclic", "order": n }));
    let character = proptest::collection::vec((0i64..12, 1i64..12).prop_map(|(a, b)| format!("{a}/{b}")), 1..4);
    let series = (prop::sample::select(vec![2u64, 3, 5]), -3i64..3, proptest::collection::vec(0i64..5, 1..5), proptest::option::of(1usize..9));
    (
        proptest::collection::vec(group, 1..4),
        proptest::collection::vec(character, 0..3),
        proptest::collection::vec(series, 0..3),
        proptest::collection::vec((0usize..8, 1u64..13), 0..6),
    )
        .prop_map(|(groups, chars, series, tasks)| {
            let mut doc = json!({ "tasks": [] });
            doc["groups"] = Value::Array(
                groups
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let mut g = g.clone();
                        g["id"] = json!(format!("g{i}"));
                        g
                    })
                    .collect(),
            );
            doc["characters"] =
                Value::Array(chars.iter().enumerate().map(|(i, v)| json!({ "id": format!("c{i}"), "values": v })).collect());
            doc["series"] = Value::Array(
                series
                    .iter()
                    .enumerate()
                    .map(|(i, (p, s, c, prec))| {
                        let mut v = json!({ "id": format!("s{i}"), "p": p, "start": s, "coeffs": c });
                        if let Some(prec) = prec {
                            v["precision"] = json!(prec);
                        }
                        v
                    })
                    .collect(),
            );
            let ng = groups.len();
            doc["tasks"] = Value::Array(
                tasks.iter().map(|&(g, n)| json!({ "op": "h2_u_level", "group": format!("g{}", g % ng), "n": n })).collect(),
            );
            serde_json::from_value(doc).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(doc in document()) {
        prop_assert_eq!(parse(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn results_do_not_depend_on_jobs(doc in document(), jobs in 2usize..9) {
        let p = rigidcoh_cli::runner::Prepared::new(doc).unwrap();
        prop_assert_eq!(run(&p, 1).to_json(), run(&p, jobs).to_json());
    }
}
