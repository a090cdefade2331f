//! Bounded evidence for density, the finite quotients Γ/nΓ and purity.

use mlcoset::fg::{GammaSpec, SampleGrid};
use mlcoset::group::{Backend, Point};
use mlcoset::num::int;

pub fn run_example() -> mlcoset::Result<()> {
    let e = Backend::curve(int(0), int(-2))?;
    let p = Point::affine(int(3), int(5));
    let gamma = GammaSpec::from_generators(e.clone(), std::slice::from_ref(&p), Some(1))?;

    let hist = gamma.projection_density(&int(0), &int(10), 1_000_000, 10, 6)?;
    for (i, c) in hist.counts.iter().enumerate() {
        println!("[{}, {}): {c}", hist.edges[i], hist.edges[i + 1]);
    }

    let grid = SampleGrid {
        lo: int(0),
        hi: int(10),
        bins: 10,
    };
    let report = gamma.check_axioms_bounded(3, 20, &grid, 6)?;
    println!(
        "coverage {} (low: {})",
        report.density.coverage, report.density.low_coverage
    );
    for row in &report.rows {
        println!(
            "n={} |gamma/n gamma|={} purity violations={}",
            row.n,
            row.quotient_size,
            row.purity_violations.len()
        );
    }

    // ⟨2P⟩ is not pure: P ∉ ⟨2P⟩ although 2P ∈ ⟨2P⟩
    let sub = GammaSpec::from_generators(e.clone(), &[e.scalar_mul(2, &p)?], Some(1))?;
    let report = sub.check_axioms_with_points(2, 10, &[p], &grid, 4)?;
    for v in &report.rows[1].purity_violations {
        println!(
            "violation: {}·{} has coordinates {}",
            v.n, v.point, v.multiple_coords
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
