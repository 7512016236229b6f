//! Canonical printer: single spaces around binary operators, none around
//! `^` or unary minus, and only the parentheses the grammar requires.

use super::{BinaryOp, Expr};

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(expr: &Expr) -> u8 {
    match expr {
        Expr::Var(_) => PREC_ATOM,
        Expr::Const(c) if *c >= 0.0 => PREC_ATOM,
        Expr::Const(_) => PREC_UNARY,
        Expr::Neg(_) => PREC_UNARY,
        Expr::Pow(..) => PREC_POWER,
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => PREC_SUM,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => PREC_PRODUCT,
    }
}

pub(super) fn render(expr: &Expr) -> String {
    let mut out = String::new();
    write(expr, &mut out);
    out
}

fn write_child(child: &Expr, min_prec: u8, out: &mut String) {
    if precedence(child) < min_prec {
        out.push('(');
        write(child, out);
        out.push(')');
    } else {
        write(child, out);
    }
}

fn write(expr: &Expr, out: &mut String) {
    match expr {
        Expr::Var(name) => out.push_str(name),
        Expr::Const(c) => out.push_str(&c.to_string()),
        Expr::Neg(inner) => {
            out.push('-');
            write_child(inner, PREC_UNARY, out);
        }
        Expr::Pow(base, k) => {
            write_child(base, PREC_ATOM, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        Expr::Binary(op, lhs, rhs) => {
            let prec = precedence(expr);
            // Operators are left-associative: an equal-precedence right
            // operand keeps its parentheses.
            write_child(lhs, prec, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_child(rhs, prec + 1, out);
        }
    }
}
