//! Exact group law on y² = x³ − 2 and y² = x³ + 1, torsion, and real
//! components.

use mlcoset::group::{Backend, Point};
use mlcoset::num::{frac, int};

pub fn run_example() -> mlcoset::Result<()> {
    let e = Backend::curve(int(0), int(-2))?;
    let p = Point::affine(int(3), int(5));
    let two_p = e.add(&p, &p)?;
    println!("2(3, 5) = {two_p}");
    assert_eq!(two_p, Point::affine(frac(129, 100), frac(-383, 1000)));
    println!("-3(3, 5) = {}", e.scalar_mul(-3, &p)?);
    println!(
        "torsion of y^2 = x^3 - 2: {}",
        e.torsion_subgroup().describe()
    );

    let e6 = Backend::curve(int(0), int(1))?;
    let t = e6.torsion_subgroup();
    println!(
        "torsion of y^2 = x^3 + 1: {} generated by {}",
        t.describe(),
        t.generators[0]
    );
    let g = Point::affine(int(2), int(3));
    for k in 1..=6 {
        println!("  {k}(2, 3) = {}", e6.scalar_mul(k, &g)?);
    }

    let e2 = Backend::curve(int(-1), int(0))?;
    println!("y^2 = x^3 - x has {} real components", e2.real_components());
    for pt in e2.torsion_points() {
        println!("  {pt} on identity component: {}", e2.component_of(&pt));
    }

    let circle = Backend::Circle;
    let q = Point::affine(frac(3, 5), frac(4, 5));
    println!("on the circle, 2(3/5, 4/5) = {}", circle.scalar_mul(2, &q)?);
    println!("circle torsion: {}", circle.torsion_subgroup().describe());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
