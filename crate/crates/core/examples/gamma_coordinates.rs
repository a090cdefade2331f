//! Coordinates in a finitely generated Γ = ⟨(3, 5)⟩ and in Γ with torsion.

use mlcoset::fg::{Dependence, GammaSpec};
use mlcoset::group::{Backend, Point};
use mlcoset::num::int;

pub fn run_example() -> mlcoset::Result<()> {
    let e = Backend::curve(int(0), int(-2))?;
    let p = Point::affine(int(3), int(5));
    let gamma = GammaSpec::from_generators(e.clone(), std::slice::from_ref(&p), Some(1))?;

    let five_p = e.scalar_mul(5, &p)?;
    println!("5P = {five_p}");
    println!("decompose 5P (bound 8): {}", gamma.decompose(&five_p, 8)?);
    println!("decompose 5P (bound 4): {}", gamma.decompose(&five_p, 4)?);

    let six_p = e.scalar_mul(6, &p)?;
    let half = gamma.divisible_in_gamma(&six_p, 2, 8)?;
    println!(
        "6P / 2 in gamma: {}",
        half.map_or("none".into(), |c| c.to_string())
    );
    println!("P / 2 in gamma: {:?}", gamma.divisible_in_gamma(&p, 2, 8)?);

    let q = gamma.quotient(4);
    println!("gamma/4gamma = {} of size {}", q.describe(), q.size());
    for (residue, coords, point) in gamma.gamma_mod(3)?.transversal {
        println!("  residue {residue:?}: {coords} -> {point}");
    }

    let rel = gamma.linear_dependence(&[e.scalar_mul(2, &p)?, e.scalar_mul(3, &p)?], 8)?;
    if let Dependence::Dependent(k) = rel {
        println!("relation between 2P and 3P: {k:?}");
    }

    let e6 = Backend::curve(int(0), int(1))?;
    let t = GammaSpec::from_generators(e6, &[Point::affine(int(2), int(3))], Some(0))?;
    println!(
        "torsion-only gamma: rank {}, torsion {}",
        t.rank(),
        t.torsion().describe()
    );
    for entry in t.box_table(0).entries() {
        println!("  {} -> {}", entry.0, entry.1);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
