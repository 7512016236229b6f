// Independent numerical oracles. Nothing here touches the forward-mode
// code path: finite differences are taken in exact rational arithmetic, so
// the only error left is the truncation error of the difference quotient.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use txunc_core::model::Scalar;
use txunc_core::Model;

#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn from_f64(x: f64) -> Self {
        Exact(BigRational::from_float(x).expect("finite input"))
    }
}

impl Scalar for Exact {
    fn constant(value: f64, _arity: usize) -> Self {
        Exact::from_f64(value)
    }
    fn value(&self) -> f64 {
        if self.0.is_zero() {
            0.0
        } else {
            self.0.to_f64().unwrap_or(f64::NAN)
        }
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn add(self, rhs: Self) -> Self {
        Exact(self.0 + rhs.0)
    }
    fn sub(self, rhs: Self) -> Self {
        Exact(self.0 - rhs.0)
    }
    fn mul(self, rhs: Self) -> Self {
        Exact(self.0 * rhs.0)
    }
    fn div(self, rhs: Self) -> Self {
        Exact(self.0 / rhs.0)
    }
    fn neg(self) -> Self {
        Exact(-self.0)
    }
    fn powi(self, exponent: i32) -> Self {
        if exponent == 0 {
            return Exact(BigRational::one());
        }
        Exact(Pow::pow(self.0, exponent))
    }
}

/// Exact central difference `(G(x + h e_i) − G(x − h e_i)) / 2h` with
/// `h = |x_i| / step_divisor`.
pub fn central_difference(
    model: &Model,
    at: &[f64],
    i: usize,
    step_divisor: u64,
) -> Option<BigRational> {
    let point: Vec<Exact> = at.iter().map(|&x| Exact::from_f64(x)).collect();
    let h = point[i].0.abs() / BigRational::from_integer(BigInt::from(step_divisor));
    let mut up = point.clone();
    let mut down = point;
    up[i] = Exact(up[i].0.clone() + &h);
    down[i] = Exact(down[i].0.clone() - &h);
    let hi = model.eval(&up).ok()?;
    let lo = model.eval(&down).ok()?;
    Some((hi.0 - lo.0) / (h * BigRational::from_integer(BigInt::from(2))))
}

/// Relative disagreement `|a − b| / max(|a|, |b|)`, zero when both are zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        0.0
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

/// Outcome of comparing forward-mode partials against finite differences
/// at one point.
#[derive(Debug)]
pub enum GradientCheck {
    Agrees {
        worst: f64,
    },
    Disagrees {
        input: usize,
        ad: f64,
        fd: f64,
        err: f64,
    },
    /// Too close to a singularity for a difference quotient to be trusted:
    /// the exact estimates at steps `h` and `h/2` (`h = 10⁻⁶·|x_i|`) differ by
    /// more than `10⁻⁹` relative, or a shifted point is singular.
    NearSingularity,
}

/// Partials whose magnitude is below `10⁻⁶·|G|/|x_i|` are treated as
/// vanishing (typically an input that cancels algebraically); for those the
/// forward-mode value must be within `10⁻¹²·|G|/|x_i|` absolutely. All other
/// partials must agree to `tol` relative.
pub fn check_gradient(model: &Model, at: &[f64], partials: &[f64], tol: f64) -> GradientCheck {
    let mut worst = 0.0f64;
    let Ok(g) = model.eval(at) else {
        return GradientCheck::NearSingularity;
    };
    for (i, &ad) in partials.iter().enumerate() {
        let (Some(fd), Some(fd_half)) = (
            central_difference(model, at, i, 1_000_000),
            central_difference(model, at, i, 2_000_000),
        ) else {
            return GradientCheck::NearSingularity;
        };
        let (fd, fd_half) = (to_f64(&fd), to_f64(&fd_half));
        if !fd.is_finite() || rel_err(fd, fd_half) > 1e-9 {
            return GradientCheck::NearSingularity;
        }
        let elasticity_scale = g.abs() / at[i].abs();
        let err = if fd.abs() < 1e-6 * elasticity_scale {
            if (ad - fd).abs() <= 1e-12 * elasticity_scale {
                0.0
            } else {
                rel_err(ad, fd)
            }
        } else {
            rel_err(ad, fd)
        };
        if err.is_nan() || err >= tol {
            return GradientCheck::Disagrees {
                input: i,
                ad,
                fd,
                err,
            };
        }
        worst = worst.max(err);
    }
    GradientCheck::Agrees { worst }
}
