//! Seeded generator of formula texts in the exists-gamma grammar.

use rand::rngs::StdRng;
use rand::Rng;

pub struct FormulaGen {
    rng: StdRng,
    /// Number of free variables used (x1..xs).
    pub free: usize,
}

impl FormulaGen {
    pub fn new(rng: StdRng, free: usize) -> Self {
        FormulaGen { rng, free }
    }

    fn constant(&mut self) -> String {
        let n: i64 = self.rng.gen_range(-6..=6);
        match self.rng.gen_range(0..4) {
            0 => format!("{n}/{}", self.rng.gen_range(2..=5)),
            _ => n.to_string(),
        }
    }

    fn var(&mut self, ys: usize) -> String {
        if ys > 0 && (self.free == 0 || self.rng.gen_bool(0.6)) {
            format!("y{}", self.rng.gen_range(1..=ys))
        } else if self.free > 0 {
            format!("x{}", self.rng.gen_range(1..=self.free))
        } else {
            self.constant()
        }
    }

    pub fn poly(&mut self, depth: u32, ys: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return if self.rng.gen_bool(0.65) {
                self.var(ys)
            } else {
                self.constant()
            };
        }
        match self.rng.gen_range(0..4) {
            0 => {
                let k = self.rng.gen_range(1..=3);
                let args: Vec<String> = (0..k).map(|_| self.poly(depth - 1, ys)).collect();
                format!("(+ {})", args.join(" "))
            }
            1 => {
                let k = self.rng.gen_range(1..=3);
                let args: Vec<String> = (0..k).map(|_| self.poly(depth - 1, ys)).collect();
                format!("(* {})", args.join(" "))
            }
            2 => format!(
                "(- {} {})",
                self.poly(depth - 1, ys),
                self.poly(depth - 1, ys)
            ),
            _ => format!(
                "(^ {} {})",
                self.poly(depth - 1, ys),
                self.rng.gen_range(1..=3)
            ),
        }
    }

    fn atom(&mut self, ys: usize) -> String {
        // bias toward conditions that are sometimes satisfiable in Γ
        if ys > 0 && self.rng.gen_bool(0.4) {
            let y = self.rng.gen_range(1..=ys);
            let c = ["3", "0", "129/100", "-5", "5", "2"][self.rng.gen_range(0..6)];
            let rel = ["=", "<", "<="][self.rng.gen_range(0..3)];
            return if self.free > 0 && self.rng.gen_bool(0.5) {
                format!("({rel} x{} y{y})", self.rng.gen_range(1..=self.free))
            } else {
                format!("({rel} y{y} {c})")
            };
        }
        let rel = ["=", "<", "<="][self.rng.gen_range(0..3)];
        format!("({rel} {} {})", self.poly(2, ys), self.poly(2, ys))
    }

    pub fn qf(&mut self, depth: u32, ys: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.45) {
            return self.atom(ys);
        }
        match self.rng.gen_range(0..3) {
            0 => format!("(not {})", self.qf(depth - 1, ys)),
            op => {
                let k = self.rng.gen_range(1..=3);
                let args: Vec<String> = (0..k).map(|_| self.qf(depth - 1, ys)).collect();
                format!(
                    "({} {})",
                    if op == 1 { "and" } else { "or" },
                    args.join(" ")
                )
            }
        }
    }

    pub fn block(&mut self, max_points: usize) -> String {
        let n = self.rng.gen_range(1..=max_points);
        format!("(exists-gamma {n} {})", self.qf(2, 2 * n))
    }

    pub fn formula(&mut self, depth: u32, max_points: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.rng.gen_bool(0.6) {
                self.block(max_points)
            } else {
                self.qf(1, 0)
            };
        }
        match self.rng.gen_range(0..3) {
            0 => format!("(not {})", self.formula(depth - 1, max_points)),
            op => {
                let k = self.rng.gen_range(1..=3);
                let args: Vec<String> = (0..k)
                    .map(|_| self.formula(depth - 1, max_points))
                    .collect();
                format!(
                    "({} {})",
                    if op == 1 { "and" } else { "or" },
                    args.join(" ")
                )
            }
        }
    }
}
