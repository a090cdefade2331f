//! Machine-mode CLI cases shared by the golden tests and the acceptance run.

use std::fs;
use std::path::{Path, PathBuf};

use mlcoset::cli::{run, EXIT_OK};

pub fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Golden name, spec file and arguments after the global flags.
pub fn cases() -> Vec<(&'static str, &'static str, Vec<&'static str>)> {
    vec![
        ("curve_info", "p.json", vec!["curve-info"]),
        ("curve_info_circle", "circle.json", vec!["curve-info"]),
        ("curve_info_rank2", "rank2.json", vec!["curve-info"]),
        ("points", "p.json", vec!["--height", "30", "points"]),
        (
            "points_circle",
            "circle.json",
            vec!["--height", "30", "points"],
        ),
        (
            "point_add",
            "p.json",
            vec!["point", "add", "(3,5)", "(3,5)"],
        ),
        ("point_mul", "p.json", vec!["point", "mul", "-2", "(3,5)"]),
        (
            "point_decompose",
            "p.json",
            vec!["point", "decompose", "(129/100,-383/1000)"],
        ),
        (
            "point_decompose_circle",
            "circle.json",
            vec!["point", "decompose", "(-4/5,3/5)"],
        ),
        (
            "coset_dke",
            "p.json",
            vec!["coset", "dke", "--k", "1,-1", "--e", "2"],
        ),
        (
            "coset_dke_circle",
            "circle.json",
            vec!["coset", "dke", "--k", "2", "--e", "2"],
        ),
        (
            "coset_union",
            "p.json",
            vec!["coset", "combine", "--op", "union", "1:2", "1:3"],
        ),
        (
            "coset_intersect",
            "p.json",
            vec!["coset", "combine", "--op", "intersect", "1:2", "1:3"],
        ),
        (
            "coset_difference",
            "p.json",
            vec!["coset", "combine", "--op", "difference", "1:2", "1:4"],
        ),
        (
            "coset_complement",
            "p.json",
            vec!["coset", "combine", "--op", "complement", "1,-1:2"],
        ),
        (
            "coset_member",
            "p.json",
            vec![
                "coset",
                "member",
                "--k",
                "1",
                "--e",
                "2",
                "(129/100,-383/1000)",
            ],
        ),
        (
            "coset_kernel",
            "p.json",
            vec!["coset", "kernel", "--k", "1,-1", "--modulus", "2"],
        ),
        (
            "coset_kernel_base",
            "p.json",
            vec![
                "coset",
                "kernel",
                "--k",
                "1",
                "--modulus",
                "3",
                "--base",
                "1",
            ],
        ),
        (
            "ml_solve",
            "p.json",
            vec![
                "--bound",
                "2",
                "ml",
                "solve",
                "--poly",
                "(- x1 x3)",
                "--n",
                "2",
            ],
        ),
        (
            "ml_verify",
            "p.json",
            vec![
                "--bound",
                "3",
                "ml",
                "verify",
                "--poly",
                "(- x1 x3)",
                "--n",
                "2",
                "--pair",
                "1,-1",
                "--pair",
                "1,1",
            ],
        ),
        (
            "ml_verify_partial",
            "p.json",
            vec![
                "--bound",
                "3",
                "ml",
                "verify",
                "--poly",
                "(- x1 x3)",
                "--n",
                "2",
                "--pair",
                "1,-1",
            ],
        ),
        (
            "ml_suggest",
            "p.json",
            vec![
                "--bound",
                "3",
                "ml",
                "suggest",
                "--poly",
                "(- x1 x3)",
                "--n",
                "2",
            ],
        ),
        (
            "eval",
            "p.json",
            vec![
                "--bound",
                "4",
                "eval",
                "--formula",
                "(exists-gamma 1 (= x1 y1))",
                "--at",
                "3",
                "--at",
                "2",
            ],
        ),
        (
            "density",
            "p.json",
            vec![
                "--bound", "8", "--bins", "5", "density", "--lo", "0", "--hi", "10",
            ],
        ),
        (
            "density_coset",
            "p.json",
            vec![
                "--bound", "8", "--bins", "5", "density", "--lo", "0", "--hi", "10", "--coset",
                "1:2",
            ],
        ),
        (
            "axioms",
            "p.json",
            vec!["--bound", "4", "--height", "30", "axioms", "--n-max", "2"],
        ),
    ]
}

pub fn invoke(spec: &str, extra: &[&str], rest: &[&str]) -> (i32, String, String) {
    let spec = data(spec);
    let mut args = vec!["mlcoset", "--machine", "--spec", spec.as_str()];
    args.extend_from_slice(extra);
    args.extend_from_slice(rest);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Runs every case with and without a cache, twice with the cache, and
/// compares against the stored goldens (or rewrites them when `update`).
pub fn check_goldens(update: bool) -> Result<usize, String> {
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache_dir = cache.path().display().to_string();
    let all = cases();
    for (name, spec, rest) in &all {
        let (code, plain, err) = invoke(spec, &["--no-cache"], rest);
        if code != EXIT_OK {
            return Err(format!("{name}: exit {code}: {err}"));
        }
        for line in plain.lines() {
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| format!("{name}: {e}"))?;
            if !v["command"].is_string() {
                return Err(format!("{name}: record without command: {line}"));
            }
        }
        for round in 0..2 {
            let (code, cached, err) = invoke(spec, &["--cache-dir", &cache_dir], rest);
            if code != EXIT_OK {
                return Err(format!("{name}: exit {code} with cache: {err}"));
            }
            if cached != plain {
                return Err(format!("{name} differs with cache (round {round})"));
            }
        }
        let path = golden_dir().join(format!("{name}.jsonl"));
        if update {
            fs::write(&path, &plain).map_err(|e| e.to_string())?;
        } else {
            let want = fs::read_to_string(&path).map_err(|e| format!("{name}: {e}"))?;
            if plain != want {
                return Err(format!("{name} differs from golden"));
            }
        }
    }
    Ok(all.len())
}
