use jordanaff::catalog::{build, desk_instances, Family, FamilySpec};
use jordanaff::hypersurface::build_model;
use jordanaff::io::{
    deserialize_algebra, deserialize_model, parse_calabi_spec, parse_matrix, parse_tensor, points_json, read_points_csv,
    serialize_algebra, serialize_model, write_points_csv, IoError,
};
use jordanaff::{Mode, Rational};
use proptest::prelude::*;

#[test]
fn algebra_roundtrip_over_the_catalog() {
    for spec in desk_instances().into_iter().filter(|s| s.dim() <= 30) {
        let alg = build(&spec).unwrap();
        let text = serialize_algebra(&alg, Mode::Rational);
        let back = deserialize_algebra("mem", &text).unwrap();
        assert_eq!(back.mode, Mode::Rational);
        assert_eq!(back.algebra, alg, "{spec}");
        assert_eq!(back.algebra.labels().len(), alg.dim());
        assert_eq!(back.algebra.family(), Some(&spec));
        // Serialization is deterministic.
        assert_eq!(serialize_algebra(&back.algebra, Mode::Rational), text);
    }
}

#[test]
fn float_files_read_back_exactly_for_dyadic_tables() {
    let alg = build(&FamilySpec::new(Family::HermitianC).with_m(3)).unwrap();
    let text = serialize_algebra(&alg, Mode::Float);
    let back = deserialize_algebra("mem", &text).unwrap();
    assert_eq!(back.mode, Mode::Float);
    assert_eq!(back.algebra, alg);
}

#[test]
fn hand_written_algebra_file() {
    let text = r#"{
        "name": "split", "dim": 2, "mode": "rational", "unity": ["1", "1"],
        "c": [[["1", "0"], ["0", "0"]], [["0", "0"], ["0", "1"]]]
    }"#;
    let alg = deserialize_algebra("split.json", text).unwrap().algebra;
    assert_eq!(alg.dim(), 2);
    assert!(alg.check_jordan().pass);
    assert_eq!(alg.decompose().unwrap().len(), 2);
}

fn schema_field(e: IoError) -> String {
    match e {
        IoError::Schema { field, .. } => field,
        other => panic!("expected a schema error, got {other}"),
    }
}

#[test]
fn malformed_algebra_files_name_the_field() {
    let wrong_len = r#"{"name": "x", "dim": 2, "mode": "rational", "unity": null, "c": [[["1","0"],["0","1"]]]}"#;
    assert_eq!(schema_field(deserialize_algebra("f", wrong_len).unwrap_err()), "c");
    let bad_number = r#"{"name": "x", "dim": 1, "mode": "rational", "unity": null, "c": [[["1/0"]]]}"#;
    assert!(schema_field(deserialize_algebra("f", bad_number).unwrap_err()).starts_with("c[0][0]"));
    let unknown = r#"{"name": "x", "dim": 1, "mode": "rational", "unity": null, "c": [[["1"]]], "extra": 1}"#;
    assert!(matches!(deserialize_algebra("f", unknown), Err(IoError::Schema { .. })));
    let bad_mode = r#"{"name": "x", "dim": 1, "mode": "double", "unity": null, "c": [[["1"]]]}"#;
    assert_eq!(schema_field(deserialize_algebra("f", bad_mode).unwrap_err()), "mode");
    let asymmetric = r#"{"name": "x", "dim": 2, "mode": "rational", "unity": null, "c": [[["1","0"],["0","1"]],[["0","0"],["0","1"]]]}"#;
    assert!(matches!(deserialize_algebra("f", asymmetric), Err(IoError::Algebra { .. })));
}

#[test]
fn model_roundtrip_and_tamper_detection() {
    let alg = build(&FamilySpec::new(Family::SymmetricR).with_m(3).with_gamma(vec![1, 1, -1])).unwrap();
    let model = build_model(&alg, Rational::new(-3, 2)).unwrap();
    let text = serialize_model(&model);
    let back = deserialize_model("m.json", &text).unwrap();
    assert!(back.same_data(&model));
    assert_eq!(back.c, model.c);
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["g"][0][0] = serde_json::Value::String("12345".into());
    let tampered = serde_json::to_string(&value).unwrap();
    assert_eq!(schema_field(deserialize_model("m.json", &tampered).unwrap_err()), "g");
}

#[test]
fn matrix_and_tensor_inputs() {
    let g = parse_matrix("g", r#"[["1", "1/2"], ["1/2", "-3"]]"#).unwrap();
    assert_eq!(g[(0, 1)], Rational::new(1, 2));
    assert!(parse_matrix("g", r#"[["1", "2"]]"#).is_err());
    let a = parse_tensor("A", r#"[[["0"]]]"#).unwrap();
    assert_eq!(a, vec![vec![vec![Rational::integer(0)]]]);
    assert!(parse_tensor("A", r#"[[["0", "1"]]]"#).is_err());
}

#[test]
fn calabi_spec_file() {
    let text = r#"{
        "factors": [
            {"family": "reals", "L1": "-1"},
            {"family": "symmetric_r", "params": {"m": 3, "gamma": [1, -1, 1]}, "L1": "2"},
            {"family": "full_matrix_r", "params": {"m": 2, "strict": false}, "L1": "1/2"}
        ],
        "L1": "-1"
    }"#;
    let spec = parse_calabi_spec("c.json", text).unwrap();
    assert_eq!(spec.factors.len(), 3);
    assert_eq!(spec.n(), 1 + 6 + 4 - 1);
    assert_eq!(spec.factors[2].l1, Rational::new(1, 2));
    let bad = r#"{"factors": [{"family": "symmetric_r", "params": {"m": 2}, "L1": "1"}], "L1": "-1"}"#;
    assert_eq!(schema_field(parse_calabi_spec("c.json", bad).unwrap_err()), "factors[0]");
    let unknown = r#"{"factors": [{"family": "nope", "L1": "1"}], "L1": "-1"}"#;
    assert!(schema_field(parse_calabi_spec("c.json", unknown).unwrap_err()).starts_with("factors[0]"));
}

#[test]
fn points_json_is_an_array_of_rows() {
    let text = points_json(&[vec![1.0, -0.5], vec![0.25, 3.0]]);
    let v: Vec<Vec<f64>> = serde_json::from_str(&text).unwrap();
    assert_eq!(v, vec![vec![1.0, -0.5], vec![0.25, 3.0]]);
}

#[test]
fn csv_rejects_garbage() {
    let err = read_points_csv("p.csv", "1.0,2.0\n3.0,abc\n").unwrap_err();
    assert_eq!(schema_field(err), "row 1, column 1");
}

proptest! {
    #[test]
    fn csv_points_roundtrip_bit_exactly(points in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..20)) {
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &points).unwrap();
        let back = read_points_csv("mem", std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, points);
    }

    #[test]
    fn rationals_roundtrip_through_strings(n in any::<i64>(), d in 1i64..i64::MAX) {
        let x = Rational::new(n, d);
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }
}
