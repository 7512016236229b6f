// Random model generator shared by the property tests and the acceptance
// suite.

use rand::Rng;
use txunc_core::model::{BinaryOp, Expr};

pub const VARIABLES: [&str; 4] = ["a", "b", "c", "d"];

/// Random parser-shaped tree (no negative constants) of depth at most
/// `max_depth`.
pub fn random_expr(rng: &mut impl Rng, max_depth: usize) -> Expr {
    if max_depth <= 1 || rng.gen_bool(0.2) {
        return random_leaf(rng);
    }
    match rng.gen_range(0..10) {
        0 => Expr::neg(random_expr(rng, max_depth - 1)),
        1 => {
            let k = *[-3, -2, -1, 0, 1, 2, 3].get(rng.gen_range(0..7)).unwrap();
            Expr::pow(random_expr(rng, max_depth - 1), k)
        }
        n => {
            let op = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div][n as usize % 4];
            Expr::binary(
                op,
                random_expr(rng, max_depth - 1),
                random_expr(rng, max_depth - 1),
            )
        }
    }
}

fn random_leaf(rng: &mut impl Rng) -> Expr {
    if rng.gen_bool(0.7) {
        Expr::var(VARIABLES[rng.gen_range(0..VARIABLES.len())])
    } else {
        match rng.gen_range(0..3) {
            0 => Expr::constant(f64::from(rng.gen_range(0u8..10))),
            1 => Expr::constant(rng.gen_range(0.0..100.0)),
            _ => Expr::constant(rng.gen_range(1e-3..10.0f64) * 10f64.powi(rng.gen_range(-8..8))),
        }
    }
}

/// Random model that mentions at least one variable.
pub fn random_model(rng: &mut impl Rng, max_depth: usize) -> txunc_core::Model {
    loop {
        let m = txunc_core::Model::new(random_expr(rng, max_depth));
        if !m.inputs().is_empty() {
            return m;
        }
    }
}
