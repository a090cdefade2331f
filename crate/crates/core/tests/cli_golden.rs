mod common;

use std::fs;

use common::golden::{cases, check_goldens, data, invoke};
use mlcoset::cli::{run, EXIT_CEILING, EXIT_INPUT, EXIT_OK};

#[test]
fn machine_output_matches_goldens_with_and_without_cache() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    check_goldens(update).unwrap();
}

#[test]
fn human_output_succeeds_for_every_case() {
    for (name, spec, rest) in cases() {
        let spec = data(spec);
        let mut args = vec!["mlcoset", "--no-cache", "--spec", spec.as_str()];
        args.extend_from_slice(&rest);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(args, &mut out, &mut err), EXIT_OK, "{name}");
        assert!(!out.is_empty(), "{name}");
        assert!(err.is_empty(), "{name}");
    }
}

#[test]
fn exit_codes() {
    let input = [
        ("singular.json", vec!["curve-info"]),
        ("off_curve.json", vec!["curve-info"]),
        ("missing.json", vec!["curve-info"]),
        ("p.json", vec!["point", "add", "(3,4)", "(3,5)"]),
        (
            "p.json",
            vec![
                "eval",
                "--formula",
                "(exists-gamma 1 (= x1 y3))",
                "--at",
                "3",
            ],
        ),
        ("p.json", vec!["ml", "solve", "--poly", "(+ x1", "--n", "1"]),
        ("p.json", vec!["coset", "dke", "--k", "1", "--e", "0"]),
        ("p.json", vec!["no-such-command"]),
    ];
    for (spec, rest) in input {
        let (code, out, err) = invoke(spec, &["--no-cache"], &rest);
        assert_eq!(code, EXIT_INPUT, "{spec} {rest:?}: {out}");
        assert!(!err.is_empty());
    }
    let (code, _, err) = invoke(
        "p.json",
        &["--no-cache", "--ceiling", "100"],
        &["coset", "dke", "--k", "1,1,1", "--e", "5"],
    );
    assert_eq!(code, EXIT_CEILING, "{err}");
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert!(v["error"].is_string(), "{err}");
}

#[test]
fn corrupted_cache_is_recomputed() {
    let cache = tempfile::tempdir().unwrap();
    let dir = cache.path().display().to_string();
    let rest = ["--height", "30", "points"];
    let (_, first, _) = invoke("p.json", &["--cache-dir", &dir], &rest);
    for entry in fs::read_dir(cache.path()).unwrap() {
        fs::write(entry.unwrap().path(), "{not json").unwrap();
    }
    let (code, again, _) = invoke("p.json", &["--cache-dir", &dir], &rest);
    assert_eq!(code, EXIT_OK);
    assert_eq!(again, first);
}
