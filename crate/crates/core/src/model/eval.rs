use thiserror::Error;

use super::{BinaryOp, Node};

/// Denominators with a smaller magnitude are treated as zero.
pub const MIN_DENOMINATOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("model evaluation overflowed to a non-finite result")]
    NonFinite,
}

/// Arithmetic needed to walk a model tree. Implemented for plain `f64` and
/// for the forward-mode [`crate::dual::Dual`].
pub trait Scalar: Sized + Clone {
    fn constant(value: f64, arity: usize) -> Self;
    fn value(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    /// Caller guarantees `rhs` is not (near) zero.
    fn div(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn powi(self, exponent: i32) -> Self;
}

impl Scalar for f64 {
    fn constant(value: f64, _arity: usize) -> Self {
        value
    }
    fn value(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn div(self, rhs: Self) -> Self {
        self / rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn powi(self, exponent: i32) -> Self {
        f64::powi(self, exponent)
    }
}

pub(super) fn eval<S: Scalar>(node: &Node, args: &[S]) -> Result<S, EvalError> {
    let out = walk(node, args)?;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn walk<S: Scalar>(node: &Node, args: &[S]) -> Result<S, EvalError> {
    Ok(match node {
        Node::Var(i) => args[*i].clone(),
        Node::Const(c) => S::constant(*c, args.len()),
        Node::Neg(inner) => walk(inner, args)?.neg(),
        Node::Binary(op, lhs, rhs) => {
            let a = walk(lhs, args)?;
            let b = walk(rhs, args)?;
            match op {
                BinaryOp::Add => a.add(b),
                BinaryOp::Sub => a.sub(b),
                BinaryOp::Mul => a.mul(b),
                BinaryOp::Div => {
                    if b.value().is_nan() || b.value().abs() < MIN_DENOMINATOR {
                        return Err(EvalError::DivisionByZero);
                    }
                    a.div(b)
                }
            }
        }
        Node::Pow(base, k) => {
            let b = walk(base, args)?;
            if *k < 0 && (b.value().is_nan() || b.value().abs() < MIN_DENOMINATOR) {
                return Err(EvalError::DivisionByZero);
            }
            b.powi(*k)
        }
    })
}
