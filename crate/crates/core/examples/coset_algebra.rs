//! The sets D_{k,e} and their boolean combinations at a common modulus.

use mlcoset::coset::{Character, CosetEngine};
use mlcoset::fg::GammaSpec;
use mlcoset::group::{Backend, Point};
use mlcoset::num::{frac, int};

pub fn run_example() -> mlcoset::Result<()> {
    let e = Backend::curve(int(0), int(-2))?;
    let gamma = GammaSpec::from_generators(e, &[Point::affine(int(3), int(5))], Some(1))?;
    let eng = CosetEngine::new(&gamma);

    let d = eng.dke(&Character(vec![2]), 4)?;
    println!("D_(2),4 = {d}");
    let two_p = Point::affine(frac(129, 100), frac(-383, 1000));
    println!("2P in it: {}", eng.member(&d, &[two_p], 8)?);
    println!(
        "P in it: {}",
        eng.member(&d, &[Point::affine(int(3), int(5))], 8)?
    );

    let evens = eng.dke(&Character(vec![1]), 2)?;
    let thirds = eng.dke(&Character(vec![1]), 3)?;
    let fourths = eng.dke(&Character(vec![1]), 4)?;
    println!("2gamma & 3gamma = {}", eng.intersect(&evens, &thirds)?);
    println!("2gamma - 4gamma = {}", eng.difference(&evens, &fourths)?);
    println!("complement of 2gamma = {}", eng.complement(&evens)?);
    println!("2gamma | 3gamma = {}", eng.union(&evens, &thirds)?);

    let sum_even = eng.dke(&Character(vec![1, 1]), 2)?;
    println!("D_(1,1),2 = {sum_even}");

    let k = Character(vec![1, -1]);
    let kernel = eng.kernel_lattice(&k)?;
    println!("ker chi_(1,-1) lattice basis: {:?}", kernel.free_lattice);
    let zero = gamma.zero_coords();
    let diag = eng.from_kernel_cosets(&[(vec![zero.clone(), zero], k)], 3)?;
    println!("diagonal mod 3: {diag} (coarsened: {})", diag.coarsened());
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
