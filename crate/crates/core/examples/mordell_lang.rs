//! Solutions of x(g) = x(h) on Γ², and their decomposition into the two
//! diagonal kernel cosets.

use mlcoset::coset::Character;
use mlcoset::fg::GammaSpec;
use mlcoset::group::{Backend, Point};
use mlcoset::ml::{self, MlDecomposition, Suggestion, Verdict};
use mlcoset::num::int;
use mlcoset::poly::MultiPoly;

pub fn run_example() -> mlcoset::Result<()> {
    let e = Backend::curve(int(0), int(-2))?;
    let gamma = GammaSpec::from_generators(e, &[Point::affine(int(3), int(5))], Some(1))?;
    let p = &MultiPoly::var(4, 1)? - &MultiPoly::var(4, 3)?;
    println!("p = {p}");

    let sols = ml::solutions_bounded(&gamma, &p, 2, 3)?;
    println!(
        "{} solutions with coefficients in [-3, 3]:",
        sols.tuples.len()
    );
    for t in &sols.tuples {
        let m: Vec<i64> = t.coords.iter().map(|c| c.free[0]).collect();
        println!("  m = {m:?}");
    }
    println!(
        "{} tuples skipped (identity in a slot p reads)",
        sols.skipped.len()
    );

    let both =
        MlDecomposition::through_zero(&gamma, &[Character(vec![1, -1]), Character(vec![1, 1])]);
    println!(
        "both diagonals: {}",
        ml::verify_decomposition(&gamma, &p, 2, &both, 5)?
    );
    let one = MlDecomposition::through_zero(&gamma, &[Character(vec![1, -1])]);
    let v = ml::verify_decomposition(&gamma, &p, 2, &one, 5)?;
    println!("one diagonal: {v}");
    if let Verdict::Counterexample { tuple, direction } = &v {
        println!(
            "  re-checks: {}",
            ml::counterexample_is_valid(&gamma, &p, &one, tuple, *direction)
        );
    }

    match ml::suggest_decomposition(&gamma, &p, 2, 4)? {
        Suggestion::Found {
            decomposition,
            verdict,
        } => {
            println!("suggested: {decomposition}");
            println!("  {verdict}");
            println!("  json: {}", decomposition.to_json());
        }
        other => println!("{other}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
