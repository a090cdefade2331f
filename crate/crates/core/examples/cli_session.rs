//! Drives the command-line front end in-process with a temporary spec file.

use std::fs;

use mlcoset::cli::run;

pub fn run_example() -> mlcoset::Result<()> {
    let dir = std::env::temp_dir().join(format!("mlcoset-example-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("temp dir");
    let spec = dir.join("gamma.json");
    fs::write(
        &spec,
        r#"{"backend":{"kind":"curve","a":"0","b":"-2"},"generators":[["3","5"]],"rank":1}"#,
    )
    .expect("write spec");
    let spec = spec.to_string_lossy().into_owned();

    let sessions: Vec<Vec<&str>> = vec![
        vec!["curve-info"],
        vec!["point", "add", "(3,5)", "(3,5)"],
        vec!["coset", "dke", "--k", "2", "--e", "4"],
        vec![
            "ml",
            "verify",
            "--poly",
            "(- x1 x3)",
            "--n",
            "2",
            "--bound",
            "3",
            "--pair",
            "1,-1",
            "--pair",
            "1,1",
        ],
        vec![
            "eval",
            "--formula",
            "(exists-gamma 1 (= x1 y1))",
            "--at",
            "3",
            "--at",
            "2",
        ],
        vec![
            "--machine",
            "coset",
            "combine",
            "--op",
            "intersect",
            "1:2",
            "1:3",
        ],
    ];
    for args in sessions {
        let mut argv = vec!["mlcoset", "--spec", &spec];
        argv.extend(args.iter().copied());
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&argv, &mut out, &mut err);
        println!("$ {}  [exit {code}]", args.join(" "));
        print!(
            "{}{}",
            String::from_utf8_lossy(&out),
            String::from_utf8_lossy(&err)
        );
    }
    let _ = fs::remove_dir_all(&dir);
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
