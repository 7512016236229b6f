//! Forward-mode differentiation with a dense gradient.
//!
//! A [`Dual`] carries a value and its partial derivatives with respect to
//! every model input, so a single pass over the tree yields the full
//! gradient exactly (up to rounding).

use crate::model::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl Dual {
    /// The `index`-th of `arity` independent variables, seeded with a unit
    /// derivative.
    pub fn variable(value: f64, index: usize, arity: usize) -> Self {
        let mut grad = vec![0.0; arity];
        grad[index] = 1.0;
        Self { value, grad }
    }

    /// Independent variables for every entry of `values`.
    pub fn variables(values: &[f64]) -> Vec<Self> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| Self::variable(v, i, values.len()))
            .collect()
    }

    fn map_grad(mut self, f: impl Fn(f64) -> f64) -> Self {
        self.grad.iter_mut().for_each(|g| *g = f(*g));
        self
    }

    fn zip_grad(mut self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.grad
            .iter_mut()
            .zip(&rhs.grad)
            .for_each(|(a, &b)| *a = f(*a, b));
        self
    }
}

impl Scalar for Dual {
    fn constant(value: f64, arity: usize) -> Self {
        Self {
            value,
            grad: vec![0.0; arity],
        }
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }

    fn add(self, rhs: Self) -> Self {
        let value = self.value + rhs.value;
        Self {
            value,
            ..self.zip_grad(&rhs, |a, b| a + b)
        }
    }

    fn sub(self, rhs: Self) -> Self {
        let value = self.value - rhs.value;
        Self {
            value,
            ..self.zip_grad(&rhs, |a, b| a - b)
        }
    }

    fn mul(self, rhs: Self) -> Self {
        let (u, v) = (self.value, rhs.value);
        Self {
            value: u * v,
            ..self.zip_grad(&rhs, |du, dv| du * v + u * dv)
        }
    }

    fn div(self, rhs: Self) -> Self {
        let (u, v) = (self.value, rhs.value);
        let q = u / v;
        Self {
            value: q,
            ..self.zip_grad(&rhs, |du, dv| (du - q * dv) / v)
        }
    }

    fn neg(self) -> Self {
        Self {
            value: -self.value,
            ..self.map_grad(|g| -g)
        }
    }

    fn powi(self, exponent: i32) -> Self {
        if exponent == 0 {
            let arity = self.grad.len();
            return Self::constant(1.0, arity);
        }
        let x = self.value;
        let slope = f64::from(exponent) * x.powi(exponent - 1);
        Self {
            value: x.powi(exponent),
            ..self.map_grad(|g| slope * g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let v = Dual::variables(&[3.0, 4.0]);
        let p = v[0].clone().mul(v[1].clone());
        assert_eq!(p.value, 12.0);
        assert_eq!(p.grad, vec![4.0, 3.0]);
        let q = v[0].clone().div(v[1].clone());
        assert_eq!(q.value, 0.75);
        assert!((q.grad[0] - 0.25).abs() < 1e-15);
        assert!((q.grad[1] + 3.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn integer_powers() {
        let x = Dual::variable(2.0, 0, 1);
        let cube = x.clone().powi(3);
        assert_eq!((cube.value, cube.grad[0]), (8.0, 12.0));
        let inv = x.clone().powi(-2);
        assert_eq!((inv.value, inv.grad[0]), (0.25, -0.25));
        let one = x.powi(0);
        assert_eq!((one.value, one.grad[0]), (1.0, 0.0));
    }
}
