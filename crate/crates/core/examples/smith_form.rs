//! Smith normal form and integer kernels.

use mlcoset::snf::{kernel_basis, matmul, smith_normal_form, to_big};

pub fn run_example() -> mlcoset::Result<()> {
    let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
    let s = smith_normal_form(&m);
    for row in &s.d {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("D row [{}]", cells.join(", "));
    }
    let factors: Vec<String> = s
        .invariant_factors()
        .iter()
        .map(|x| x.to_string())
        .collect();
    println!(
        "invariant factors [{}], rank {}",
        factors.join(", "),
        s.rank()
    );
    assert_eq!(matmul(&matmul(&s.u, &to_big(&m)), &s.v), s.d);

    let k = kernel_basis(&vec![vec![1, -1, 0], vec![0, 1, -1]], 3)?;
    println!("kernel of [[1,-1,0],[0,1,-1]]: {k:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
