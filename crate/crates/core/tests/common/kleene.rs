//! Three-valued law checks for generated formulas.

use mlcoset::formula::{self, witness_is_valid, Evaluator, Formula, Node, TriBool};
use mlcoset::num::Rational;

fn label(t: &TriBool) -> &'static str {
    t.label()
}

/// Every block witness inside `node` that evaluated to True re-checks.
fn witnesses_sound(ev: &Evaluator, node: &Node, x: &[Rational]) -> Result<(), String> {
    match node {
        Node::Block(b) => {
            if let TriBool::True { witnesses } = ev.eval_block(b, x).map_err(|e| e.to_string())? {
                for w in &witnesses {
                    if !witness_is_valid(ev.gamma(), b, x, w) {
                        return Err(format!("witness {w} does not re-check"));
                    }
                }
            }
            Ok(())
        }
        Node::Not(c) => witnesses_sound(ev, c, x),
        Node::And(cs) | Node::Or(cs) => cs.iter().try_for_each(|c| witnesses_sound(ev, c, x)),
        Node::Qf(_) => Ok(()),
    }
}

/// Double negation, De Morgan, monotone refinement over `bounds`
/// (increasing), and witness soundness.
pub fn check(evaluators: &[Evaluator], text: &str, x: &[Rational]) -> Result<(), String> {
    let arity = x.len();
    let f = formula::parse_with_arity(text, arity).map_err(|e| format!("{text}: {e}"))?;
    let wrap = |t: String| formula::parse_with_arity(&t, arity).map_err(|e| format!("{t}: {e}"));
    let printed = f.to_string();
    let xs = x;
    let double = wrap(format!("(not (not {printed}))"))?;
    let other = "(exists-gamma 1 (< y1 2))";
    let not_and = wrap(format!("(not (and {printed} {other}))"))?;
    let or_nots = wrap(format!("(or (not {printed}) (not {other}))"))?;
    let not_or = wrap(format!("(not (or {printed} {other}))"))?;
    let and_nots = wrap(format!("(and (not {printed}) (not {other}))"))?;
    let mut previous: Option<TriBool> = None;
    for ev in evaluators {
        let eval = |g: &Formula| ev.eval_formula(g, xs).map_err(|e| e.to_string());
        let v = eval(&f)?;
        if label(&eval(&double)?) != label(&v) {
            return Err(format!("double negation fails for {printed}"));
        }
        if label(&eval(&not_and)?) != label(&eval(&or_nots)?) {
            return Err(format!("De Morgan (and) fails for {printed}"));
        }
        if label(&eval(&not_or)?) != label(&eval(&and_nots)?) {
            return Err(format!("De Morgan (or) fails for {printed}"));
        }
        if let Some(p) = &previous {
            if !p.is_unknown() && label(p) != label(&v) {
                return Err(format!(
                    "refinement changed {} to {} for {printed}",
                    label(p),
                    label(&v)
                ));
            }
        }
        witnesses_sound(ev, &f.root, xs)?;
        if f.root.has_blocks() {
            previous = Some(v);
        } else if let Node::Qf(q) = &f.root {
            let direct = formula::eval_qf(q, xs).map_err(|e| e.to_string())?;
            if TriBool::from_bool(direct).label() != label(&v) {
                return Err(format!(
                    "quantifier-free evaluation disagrees for {printed}"
                ));
            }
        }
    }
    Ok(())
}
