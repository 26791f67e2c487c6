use parakahler::catalog::*;
use parakahler::lie::LieError;
use parakahler::para::check_symplectic;
use parakahler::scalar::{parse_polynomial, parse_scalar};

#[test]
fn builtins_round_trip() {
    for name in BUILTIN_NAMES {
        let p = builtin(name).unwrap();
        let text = to_json(&p);
        let back = parse_problem(&text, name).unwrap();
        assert_eq!(back, p, "{}", name);
        assert_eq!(to_json(&back), text);
    }
}

#[test]
fn save_and_load_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g1.json");
    let p = builtin("G1").unwrap();
    save_problem(&p, &path).unwrap();
    let once = load_problem(&path).unwrap();
    save_problem(&once, &path).unwrap();
    assert_eq!(load_problem(&path).unwrap(), once);
    assert_eq!(once, p);
}

#[test]
fn g1_contents() {
    let p = builtin("G1").unwrap();
    let file = p.to_file();
    assert_eq!(file.brackets.as_ref().unwrap().len(), 6);
    let omega = file.omega.unwrap();
    let e25 = omega.iter().find(|e| (e.i, e.j) == (2, 5)).unwrap();
    assert_eq!(
        parse_scalar(&e25.coeff, &p.context()).unwrap(),
        parse_scalar("(1-lambda)", &p.context()).unwrap()
    );
    assert_eq!(p.params.len(), 1);
    let ctx = p.context();
    let lambda = parse_polynomial("lambda", &ctx).unwrap();
    let one_minus = parse_polynomial("1 - lambda", &ctx).unwrap();
    assert!(p.facts.certifies(&lambda));
    assert!(p.facts.certifies(&one_minus));
    assert!(check_symplectic(p.algebra().unwrap(), p.omega.as_ref().unwrap()).unwrap().passed());
    assert_eq!(p.provenance_of("brackets"), Some(Provenance::Printed));
}

#[test]
fn g21_partition_and_missing_omega() {
    let p = builtin("G21").unwrap();
    let part = p.partition.as_ref().unwrap();
    assert_eq!((part.a.clone(), part.b.clone(), part.c.clone()), (vec![0, 1], vec![2, 3], vec![4, 5]));
    assert!(p.omega.is_none());
}

#[test]
fn g6_brackets_are_external() {
    let p = builtin("G6").unwrap();
    assert_eq!(p.provenance_of("brackets"), Some(Provenance::ExternalRequired));
    assert_eq!(p.provenance_of("J[5,1]"), Some(Provenance::Reconstructed));
    let err = p.algebra().unwrap_err();
    assert!(matches!(err, CatalogError::ExternalRequired { .. }));
    assert!(err.to_string().contains("external-required"));
    let w = p.omega.as_ref().unwrap().wedges();
    let got: Vec<(usize, usize, String)> = w.into_iter().map(|(i, j, c)| (i + 1, j + 1, c.to_string())).collect();
    assert_eq!(
        got,
        vec![
            (1, 6, "1".to_string()),
            (2, 4, "1".to_string()),
            (2, 5, "1".to_string()),
            (3, 4, "-1".to_string()),
        ]
    );
}

#[test]
fn jacobi_failure_names_the_triple() {
    // G1 with [e2,e3] = e4 instead of e5.
    let mut file = builtin("G1").unwrap().to_file();
    let entry = file.brackets.as_mut().unwrap().iter_mut().find(|e| (e.i, e.j) == (2, 3)).unwrap();
    entry.coeffs = ["0", "0", "0", "1", "0", "0"].iter().map(|s| s.to_string()).collect();
    let err = Problem::from_file(&file).unwrap_err();
    match &err {
        CatalogError::Lie(LieError::Jacobi { triple, .. }) => assert_eq!(*triple, (0, 1, 2)),
        other => panic!("{:?}", other),
    }
    assert!(err.to_string().contains("(1, 2, 3)"));
}

#[test]
fn empty_brackets_give_abelian_algebra() {
    let p = parse_problem(r#"{"name": "ab6", "dim": 6, "brackets": []}"#, "inline").unwrap();
    let l = p.algebra().unwrap();
    assert!(l.constants().is_abelian());
    assert_eq!(l.center().unwrap().dim(), 6);
}

#[test]
fn syntax_errors_carry_position() {
    let err = parse_problem("{\n  \"name\": \"x\",\n  \"dim\": ,\n}", "bad.json").unwrap_err();
    match err {
        CatalogError::Syntax { path, line, column, .. } => {
            assert_eq!(path, "bad.json");
            assert_eq!(line, 3);
            assert!(column > 0);
        }
        other => panic!("{:?}", other),
    }
}

#[test]
fn dimension_mismatches_are_rejected() {
    let bad = r#"{"name": "x", "dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": ["0", "1"]}]}"#;
    assert!(matches!(parse_problem(bad, "x"), Err(CatalogError::Dimension(_))));
    let bad_j = r#"{"name": "x", "dim": 2, "brackets": [], "J": ["1", "0", "0"]}"#;
    assert!(matches!(parse_problem(bad_j, "x"), Err(CatalogError::Dimension(_))));
    let bad_index = r#"{"name": "x", "dim": 2, "brackets": [], "omega": [{"i": 1, "j": 3, "coeff": "1"}]}"#;
    assert!(matches!(parse_problem(bad_index, "x"), Err(CatalogError::Dimension(_))));
}

#[test]
fn undeclared_parameter_is_an_expression_error() {
    let text = r#"{"name": "x", "dim": 2, "brackets": [], "omega": [{"i": 1, "j": 2, "coeff": "mu"}]}"#;
    assert!(matches!(parse_problem(text, "x"), Err(CatalogError::Expression { .. })));
}

#[test]
fn unknown_builtin() {
    assert!(matches!(builtin("G99"), Err(CatalogError::UnknownBuiltin(_))));
}
