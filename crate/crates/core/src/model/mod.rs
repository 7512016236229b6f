//! Measurement models: arithmetic expressions over named inputs.
//!
//! The text form is a small infix language:
//!
//! ```text
//! expr       := term (("+" | "-") term)*
//! term       := factor (("*" | "/") factor)*
//! factor     := "-" factor | base ("^" integer)?
//! base       := identifier | number | "(" expr ")"
//! identifier := letter (letter | digit | "_")*
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Exponents are
//! (optionally signed) integers. There are no transcendental functions.

mod eval;
mod parser;
mod render;

use std::collections::HashMap;
use std::fmt;

pub use eval::{EvalError, Scalar};
pub use parser::{parse_expr, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }
}

/// Expression tree. Trees produced by the parser never hold negative
/// constants; a leading minus is always a [`Expr::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(String),
    Const(f64),
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn constant(value: f64) -> Self {
        Expr::Const(value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Expr) -> Self {
        Expr::Neg(Box::new(inner))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: Expr, exponent: i32) -> Self {
        Expr::Pow(Box::new(base), exponent)
    }

    /// Distinct variable names in order of first appearance, left to right.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_vars(&mut |name| {
            if !out.iter().any(|n| n == name) {
                out.push(name.to_owned());
            }
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Expr::Var(name) => f(name),
            Expr::Const(_) => {}
            Expr::Neg(inner) | Expr::Pow(inner, _) => inner.visit_vars(f),
            Expr::Binary(_, lhs, rhs) => {
                lhs.visit_vars(f);
                rhs.visit_vars(f);
            }
        }
    }

    /// Depth of the tree; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Const(_) => 1,
            Expr::Neg(inner) | Expr::Pow(inner, _) => 1 + inner.depth(),
            Expr::Binary(_, lhs, rhs) => 1 + lhs.depth().max(rhs.depth()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::render(self))
    }
}

/// Tree with variables resolved to positions in the model's input list.
#[derive(Debug, Clone)]
enum Node {
    Var(usize),
    Const(f64),
    Neg(Box<Node>),
    Binary(BinaryOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
}

impl Node {
    fn compile(expr: &Expr, index: &HashMap<&str, usize>) -> Node {
        match expr {
            Expr::Var(name) => Node::Var(index[name.as_str()]),
            Expr::Const(c) => Node::Const(*c),
            Expr::Neg(inner) => Node::Neg(Box::new(Node::compile(inner, index))),
            Expr::Binary(op, lhs, rhs) => Node::Binary(
                *op,
                Box::new(Node::compile(lhs, index)),
                Box::new(Node::compile(rhs, index)),
            ),
            Expr::Pow(base, k) => Node::Pow(Box::new(Node::compile(base, index)), *k),
        }
    }
}

/// A parsed measurement model `G(x_1, …, x_n)`.
///
/// The input list holds each variable exactly once, in order of first
/// appearance in the expression.
#[derive(Debug, Clone)]
pub struct Model {
    expr: Expr,
    inputs: Vec<String>,
    compiled: Node,
}

impl Model {
    pub fn new(expr: Expr) -> Self {
        let inputs = expr.variables();
        let index: HashMap<&str, usize> = inputs
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let compiled = Node::compile(&expr, &index);
        Self {
            expr,
            inputs,
            compiled,
        }
    }

    pub fn parse(source: &str) -> Result<Self, SyntaxError> {
        parse_expr(source).map(Self::new)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    /// Canonical text with minimal parentheses.
    pub fn render(&self) -> String {
        render::render(&self.expr)
    }

    /// Evaluates the model with inputs given positionally, in the order of
    /// [`Model::inputs`].
    pub fn eval<S: Scalar>(&self, args: &[S]) -> Result<S, EvalError> {
        assert_eq!(args.len(), self.inputs.len(), "argument count mismatch");
        eval::eval(&self.compiled, args)
    }
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
