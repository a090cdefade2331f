//! Parsing and three-valued evaluation of formulas with exists-gamma blocks.

use mlcoset::fg::GammaSpec;
use mlcoset::formula::{self, Evaluator};
use mlcoset::group::{Backend, Point};
use mlcoset::num::{frac, int};

pub fn run_example() -> mlcoset::Result<()> {
    let e = Backend::curve(int(0), int(-2))?;
    let gamma = GammaSpec::from_generators(e, &[Point::affine(int(3), int(5))], Some(1))?;
    let eval = Evaluator::new(&gamma, 8);

    let texts = [
        "(exists-gamma 1 (= x1 y1))",
        "(not (exists-gamma 1 (= x1 y1)))",
        "(and (exists-gamma 1 (= x1 y1)) (< x1 4))",
        "(or (exists-gamma 1 (= x1 y1)) (<= (^ x1 2) 4))",
        "(exists-gamma 2 (and (= y1 y3) (< y2 0) (< 0 y4)))",
    ];
    for text in texts {
        let f = formula::parse(text)?;
        for x in [int(3), int(2), frac(129, 100)] {
            let args = if f.arity == 0 {
                vec![]
            } else {
                vec![x.clone()]
            };
            let shown: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            println!(
                "{f} at x = [{}]: {}",
                shown.join(", "),
                eval.eval_formula(&f, &args)?
            );
            if f.arity == 0 {
                break;
            }
        }
    }

    match formula::parse("(and (= x1 1)\n  (< y1 0))") {
        Err(e) => println!("rejected: {e}"),
        Ok(f) => println!("unexpectedly parsed {f}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mlcoset::Result<()> {
    run_example()
}
