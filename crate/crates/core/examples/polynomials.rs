//! Sparse exact polynomials, evaluation, and combining a system into one
//! equation.

use mlcoset::formula::parse_poly_text;
use mlcoset::num::{frac, int};
use mlcoset::poly::{sum_of_squares_combine, MultiPoly};

pub fn run_example() -> mlcoset::Result<()> {
    let x = MultiPoly::var(2, 1)?;
    let y = MultiPoly::var(2, 2)?;
    let curve = &(&x.pow(3) - &MultiPoly::constant(2, int(2))) - &y.pow(2);
    println!("f = {curve}");
    println!("f as S-expression: {}", curve.to_sexpr());
    println!("f(3, 5) = {}", curve.eval(&[int(3), int(5)])?);
    println!(
        "f(129/100, -383/1000) = {}",
        curve.eval(&[frac(129, 100), frac(-383, 1000)])?
    );

    let line = &y - &(&x * &MultiPoly::constant(2, int(2)));
    let both = sum_of_squares_combine(&[curve.clone(), line])?;
    println!("f^2 + (y - 2x)^2 = {both}");

    let parsed = parse_poly_text("(- (^ x1 3) (+ 2 (^ x2 2)))", 2)?;
    assert_eq!(parsed, curve);
    println!("parsed back: {parsed}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
