//! First-order forward-mode jets.
//!
//! A [`Jet`] carries a value and its partial derivatives with respect to the
//! seeded variables. Jets over jets (`Jet<Jet<f64>>`) give second derivatives
//! without a separate Hessian path.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Analytic;

/// Value plus first partials. An empty `partials` vector stands for a
/// constant, i.e. all partials zero, whatever the seeded dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    value: S,
    partials: Vec<S>,
}

impl<S: Analytic> Jet<S> {
    pub fn new(value: S, partials: Vec<S>) -> Self {
        Jet { value, partials }
    }

    pub fn constant(value: S) -> Self {
        Jet {
            value,
            partials: Vec::new(),
        }
    }

    /// The `index`-th of `dim` independent variables, at `value`.
    pub fn variable(value: S, index: usize, dim: usize) -> Self {
        let mut partials = vec![S::zero(); dim];
        partials[index] = S::one();
        Jet { value, partials }
    }

    /// Seeds every coordinate of `point` as an independent variable.
    pub fn seed(point: &[S]) -> Vec<Self> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, v)| Jet::variable(v.clone(), i, n))
            .collect()
    }

    /// Seeds `point` moving along `direction` with a single partial, so that
    /// the partial of any output is the directional derivative.
    pub fn seed_direction(point: &[S], direction: &[S]) -> Vec<Self> {
        assert_eq!(point.len(), direction.len(), "direction length");
        point
            .iter()
            .zip(direction)
            .map(|(v, d)| Jet::new(v.clone(), vec![d.clone()]))
            .collect()
    }

    pub fn value(&self) -> &S {
        &self.value
    }

    pub fn into_value(self) -> S {
        self.value
    }

    /// `∂/∂x_i`; zero past the stored length.
    pub fn partial(&self, i: usize) -> S {
        self.partials.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// Partials padded with zeros to length `dim`.
    pub fn gradient(&self, dim: usize) -> Vec<S> {
        (0..dim).map(|i| self.partial(i)).collect()
    }

    fn map_partials(&self, scale: &S) -> Vec<S> {
        self.partials
            .iter()
            .map(|p| scale.clone() * p.clone())
            .collect()
    }

    // Chain rule for a scalar function with value `f` and derivative `df`.
    fn chain(&self, f: S, df: S) -> Self {
        Jet {
            value: f,
            partials: self.map_partials(&df),
        }
    }
}

fn zip_with<S: Analytic>(a: &[S], b: &[S], f: impl Fn(S, S) -> S) -> Vec<S> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(S::zero);
            let y = b.get(i).cloned().unwrap_or_else(S::zero);
            f(x, y)
        })
        .collect()
}

impl<S: Analytic> Add for Jet<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet {
            value: self.value + rhs.value,
            partials: zip_with(&self.partials, &rhs.partials, |x, y| x + y),
        }
    }
}

impl<S: Analytic> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet {
            value: self.value - rhs.value,
            partials: zip_with(&self.partials, &rhs.partials, |x, y| x - y),
        }
    }
}

impl<S: Analytic> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (u, v) = (self.value.clone(), rhs.value.clone());
        Jet {
            value: self.value * rhs.value,
            partials: zip_with(&self.partials, &rhs.partials, |du, dv| {
                du * v.clone() + u.clone() * dv
            }),
        }
    }
}

impl<S: Analytic> Div for Jet<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q = self.value.clone() / rhs.value.clone();
        let inv = S::one() / rhs.value.clone();
        Jet {
            partials: zip_with(&self.partials, &rhs.partials, |du, dv| {
                (du - q.clone() * dv) * inv.clone()
            }),
            value: q,
        }
    }
}

impl<S: Analytic> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            value: -self.value,
            partials: self.partials.into_iter().map(|p| -p).collect(),
        }
    }
}

impl<S: Analytic> Zero for Jet<S> {
    fn zero() -> Self {
        Jet::constant(S::zero())
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.partials.iter().all(Zero::is_zero)
    }
}

impl<S: Analytic> One for Jet<S> {
    fn one() -> Self {
        Jet::constant(S::one())
    }
}

impl<S: Analytic> Analytic for Jet<S> {
    fn constant(c: f64) -> Self {
        Jet::constant(S::constant(c))
    }

    fn primal(&self) -> f64 {
        self.value.primal()
    }

    fn sin(&self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    fn cos(&self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e.clone(), e)
    }

    fn ln(&self) -> Self {
        self.chain(self.value.ln(), S::one() / self.value.clone())
    }

    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Jet::constant(S::one());
        }
        let df = S::constant(f64::from(n)) * self.value.powi(n - 1);
        self.chain(self.value.powi(n), df)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let v = Jet::seed(&[2.0f64, 3.0]);
        let f = v[0].clone() * v[1].clone();
        assert_eq!(*f.value(), 6.0);
        assert_eq!(f.gradient(2), vec![3.0, 2.0]);
    }

    #[test]
    fn quotient_and_chain_rules() {
        let v = Jet::seed(&[0.5f64]);
        let f = v[0].sin() / v[0].exp();
        let x = 0.5f64;
        let expected = (x.cos() - x.sin()) / x.exp();
        assert!((f.partial(0) - expected).abs() < 1e-15);
        let g = v[0].powi(3);
        assert!((g.partial(0) - 3.0 * x * x).abs() < 1e-15);
        let h = v[0].ln();
        assert!((h.partial(0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn constants_mix_with_any_dimension() {
        let v = Jet::seed(&[1.0f64, 2.0, 3.0]);
        let f = <Jet<f64> as Analytic>::constant(4.0) * v[2].clone();
        assert_eq!(f.gradient(3), vec![0.0, 0.0, 4.0]);
        assert!(Jet::<f64>::zero().is_zero());
    }

    #[test]
    fn nested_jets_give_second_derivatives() {
        // f(x, y) = x^2 y + sin(y)
        let point = [1.5f64, -0.7];
        let inner = Jet::seed(&point);
        let outer: Vec<Jet<Jet<f64>>> = inner
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut partials = vec![Jet::constant(0.0); 2];
                partials[i] = Jet::constant(1.0);
                Jet::new(v.clone(), partials)
            })
            .collect();
        let f = outer[0].powi(2) * outer[1].clone() + outer[1].sin();
        let (x, y) = (point[0], point[1]);
        // ∂²f/∂x∂y = 2x, ∂²f/∂y² = -sin y
        assert!((f.partial(0).partial(1) - 2.0 * x).abs() < 1e-15);
        assert!((f.partial(1).partial(0) - 2.0 * x).abs() < 1e-15);
        assert!((f.partial(1).partial(1) + y.sin()).abs() < 1e-15);
        assert!((f.partial(0).partial(0) - 2.0 * y).abs() < 1e-15);
    }

    #[test]
    fn directional_seed() {
        let v = Jet::seed_direction(&[1.0f64, 2.0], &[2.0, 1.0]);
        let f = v[0].clone() * v[1].clone();
        // x1 * 2 + x0 * 1 = 5
        assert_eq!(f.partial(0), 5.0);
    }
}
