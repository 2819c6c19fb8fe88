//! Concrete double vector bundles over a coordinate chart.
//!
//! * `T²M = T(TM)` with coordinates `(x; v, ẋ, v̇)`: sides `v` (the bundle
//!   `TM → M`) and `ẋ` (the tangent of the base), core `v̇`.
//! * `T(A)` for a trivial bundle `A = M × R^k`: coordinates `(x; a, ẋ, ȧ)`
//!   with sides `A` and `TM`, core `A`.
//! * The cotangent bundles `T*(A)` and `T*(A*)` in canonical coordinates,
//!   related by the map of [`mx_map`].
//!
//! Points of `T(A)`, `T(A*)` and `T²M` share [`TangentPoint`]; points of
//! `T*(A)`, `T*(A*)` and `T*(T*M)` share [`CotangentPoint`].

mod cotangent;
mod lifts;
mod symplectic;

pub use cotangent::*;
pub use lifts::*;
pub use symplectic::*;

use crate::chartcalc::{check_len, eval, ChartError, ChartMap, Expr, MatrixMap, SmoothMap};
use crate::dvbcore::{DvbElement, DvbShape};
use crate::linalg::{dot, Matrix};
use crate::scalar::{Analytic, Real};

/// A coordinate chart with a sampling box.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    bounds: Vec<(f64, f64)>,
}

impl Chart {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self, ChartError> {
        if let Some(i) = bounds.iter().position(|&(lo, hi)| !(lo < hi)) {
            return Err(ChartError::Domain(format!(
                "empty or invalid interval on axis {i}"
            )));
        }
        Ok(Chart { bounds })
    }

    /// `[-1, 1]^dim`.
    pub fn unit(dim: usize) -> Self {
        Chart {
            bounds: vec![(-1.0, 1.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(&self.bounds)
                .all(|(v, &(lo, hi))| (lo..=hi).contains(v))
    }
}

/// `A = M × R^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrivialBundle {
    chart: Chart,
    fiber_dim: usize,
}

impl TrivialBundle {
    pub fn new(chart: Chart, fiber_dim: usize) -> Result<Self, ChartError> {
        if fiber_dim == 0 {
            return Err(ChartError::Domain("fiber dimension must be positive".into()));
        }
        Ok(TrivialBundle { chart, fiber_dim })
    }

    /// `TM` itself.
    pub fn tangent(chart: Chart) -> Self {
        let fiber_dim = chart.dim();
        TrivialBundle { chart, fiber_dim }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn base_dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    /// Shape of `T(A)`: sides `A` and `TM`, core `A`.
    pub fn tangent_shape(&self) -> DvbShape {
        DvbShape {
            dim_a: self.fiber_dim,
            dim_b: self.base_dim(),
            dim_c: self.fiber_dim,
            base_dim: self.base_dim(),
        }
    }
}

/// Connection on a trivial bundle given by its connection form:
/// `∇_Z μ = Z(μ) + ω(Z) μ` with `ω(Z) = Σ_j Z^j ω_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    bundle: TrivialBundle,
    omega: Vec<MatrixMap>,
}

impl Connection {
    pub fn new(bundle: TrivialBundle, omega: Vec<MatrixMap>) -> Result<Self, ChartError> {
        let (n, k) = (bundle.base_dim(), bundle.fiber_dim());
        check_len("connection form directions", n, omega.len())?;
        for w in &omega {
            check_len("connection form domain", n, w.domain_dim())?;
            check_len("connection form rows", k, w.rows())?;
            check_len("connection form columns", k, w.cols())?;
        }
        Ok(Connection { bundle, omega })
    }

    pub fn flat(bundle: TrivialBundle) -> Self {
        let (n, k) = (bundle.base_dim(), bundle.fiber_dim());
        let omega = (0..n).map(|_| MatrixMap::zero(n, k, k)).collect();
        Connection { bundle, omega }
    }

    pub fn bundle(&self) -> &TrivialBundle {
        &self.bundle
    }

    pub fn omega(&self) -> &[MatrixMap] {
        &self.omega
    }

    /// `ω(Z)` as an expression-valued matrix map.
    pub fn contract(&self, z: &SmoothMap) -> Result<MatrixMap, ChartError> {
        let (n, k) = (self.bundle.base_dim(), self.bundle.fiber_dim());
        check_vector_field_len(z, n)?;
        let entries = (0..k * k)
            .map(|e| {
                Expr::sum(
                    (0..n).map(|j| z.components()[j].clone() * self.omega[j].entries().components()[e].clone()),
                )
            })
            .collect();
        MatrixMap::new(k, k, SmoothMap::new(n, entries)?)
    }

    /// `ω(v)` at `x` for a tangent vector `v`.
    pub fn omega_at<S: Analytic>(&self, x: &[S], v: &[S]) -> Result<Matrix<S>, ChartError> {
        let k = self.bundle.fiber_dim();
        check_len("tangent vector", self.bundle.base_dim(), v.len())?;
        let mut out = Matrix::zeros(k, k);
        for (w, vj) in self.omega.iter().zip(v) {
            out = out.add(&w.at(x)?.scale(vj));
        }
        Ok(out)
    }

    /// `∇_Z μ (x) = Dμ(x) Z(x) + ω(Z)(x) μ(x)`.
    pub fn covariant_derivative<T: Real>(
        &self,
        z: &SmoothMap,
        mu: &SmoothMap,
        x: &[T],
    ) -> Result<Vec<T>, ChartError> {
        self.check_section(mu)?;
        let zx = eval(z, x)?;
        let dmu = crate::chartcalc::pushforward(mu, x, &zx)?;
        let twist = self.omega_at(x, &zx)?.mul_vec(&eval(mu, x)?);
        Ok(crate::linalg::add(&dmu, &twist))
    }

    /// The dual connection on `A*`: `∇*_Z φ = Dφ Z − ω(Z)ᵀ φ`.
    pub fn dual_covariant_derivative<T: Real>(
        &self,
        z: &SmoothMap,
        phi: &SmoothMap,
        x: &[T],
    ) -> Result<Vec<T>, ChartError> {
        self.check_section(phi)?;
        let zx = eval(z, x)?;
        let dphi = crate::chartcalc::pushforward(phi, x, &zx)?;
        let twist = self.omega_at(x, &zx)?.tr_mul_vec(&eval(phi, x)?);
        Ok(crate::linalg::sub(&dphi, &twist))
    }

    fn check_section(&self, s: &SmoothMap) -> Result<(), ChartError> {
        check_len("section domain", self.bundle.base_dim(), s.domain_dim())?;
        check_len("section values", self.bundle.fiber_dim(), s.codomain_dim())
    }
}

fn check_vector_field_len(z: &SmoothMap, n: usize) -> Result<(), ChartError> {
    check_len("vector field domain", n, z.domain_dim())?;
    check_len("vector field codomain", n, z.codomain_dim())
}

/// A point `(x; fiber, ẋ, fiber velocity)` of `T(A)`, `T(A*)` or `T²M`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPoint<T> {
    pub base: Vec<T>,
    pub fiber: Vec<T>,
    pub base_velocity: Vec<T>,
    pub fiber_velocity: Vec<T>,
}

impl<T: Real> TangentPoint<T> {
    pub fn new(base: Vec<T>, fiber: Vec<T>, base_velocity: Vec<T>, fiber_velocity: Vec<T>) -> Self {
        TangentPoint {
            base,
            fiber,
            base_velocity,
            fiber_velocity,
        }
    }

    /// Projection to the bundle: `(x, fiber)`.
    pub fn bundle_projection(&self) -> (&[T], &[T]) {
        (&self.base, &self.fiber)
    }

    /// Projection to `TM`: `(x, ẋ)`.
    pub fn tangent_projection(&self) -> (&[T], &[T]) {
        (&self.base, &self.base_velocity)
    }

    /// The same point as a decomposed DVB element `(a, b, c) = (fiber, ẋ,
    /// fiber velocity)`.
    pub fn to_dvb(&self) -> DvbElement<T> {
        DvbElement::new(
            self.base.clone(),
            self.fiber.clone(),
            self.base_velocity.clone(),
            self.fiber_velocity.clone(),
        )
    }

    pub fn from_dvb(d: &DvbElement<T>) -> Self {
        TangentPoint::new(d.m.clone(), d.a.clone(), d.b.clone(), d.c.clone())
    }

    /// `(x, fiber, ẋ, fiber velocity)` in one vector.
    pub fn flat(&self) -> Vec<T> {
        [
            self.base.clone(),
            self.fiber.clone(),
            self.base_velocity.clone(),
            self.fiber_velocity.clone(),
        ]
        .concat()
    }

    /// Coordinates `(x, fiber, ẋ, fiber velocity)` split as a point of the
    /// total space and a tangent vector there.
    pub fn split(&self) -> (Vec<T>, Vec<T>) {
        let point = [self.base.clone(), self.fiber.clone()].concat();
        let vector = [self.base_velocity.clone(), self.fiber_velocity.clone()].concat();
        (point, vector)
    }
}

/// A covector `(x, fiber; p_base, p_fiber)` on the total space of a trivial
/// bundle: a point of `T*(A)`, `T*(A*)` or `T*(T*M)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint<T> {
    pub base: Vec<T>,
    pub fiber: Vec<T>,
    pub p_base: Vec<T>,
    pub p_fiber: Vec<T>,
}

impl<T: Real> CotangentPoint<T> {
    pub fn new(base: Vec<T>, fiber: Vec<T>, p_base: Vec<T>, p_fiber: Vec<T>) -> Self {
        CotangentPoint {
            base,
            fiber,
            p_base,
            p_fiber,
        }
    }

    /// `p_base · ẋ + p_fiber · (fiber velocity)`; the tangent vector must
    /// sit at the same point of the total space.
    pub fn pair(&self, v: &TangentPoint<T>) -> Result<T, ChartError> {
        if self.base != v.base || self.fiber != v.fiber {
            return Err(ChartError::Domain(
                "covector and vector sit at different points".into(),
            ));
        }
        check_len("base velocity", self.p_base.len(), v.base_velocity.len())?;
        check_len("fiber velocity", self.p_fiber.len(), v.fiber_velocity.len())?;
        Ok(dot(&self.p_base, &v.base_velocity) + dot(&self.p_fiber, &v.fiber_velocity))
    }

    /// Flat coordinates `(x, fiber, p_base, p_fiber)`.
    pub fn flat(&self) -> Vec<T> {
        [
            self.base.clone(),
            self.fiber.clone(),
            self.p_base.clone(),
            self.p_fiber.clone(),
        ]
        .concat()
    }

    pub fn from_flat(flat: &[T], base_dim: usize, fiber_dim: usize) -> Self {
        let (n, k) = (base_dim, fiber_dim);
        CotangentPoint::new(
            flat[..n].to_vec(),
            flat[n..n + k].to_vec(),
            flat[n + k..2 * n + k].to_vec(),
            flat[2 * n + k..].to_vec(),
        )
    }
}

/// `ℓ_s(x, a) = ⟨s(x), a⟩` on the total space of a trivial bundle, for a
/// section `s` of the dual bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberLinearFunction {
    section: SmoothMap,
}

impl FiberLinearFunction {
    pub fn new(section: SmoothMap) -> Self {
        FiberLinearFunction { section }
    }
}

impl ChartMap for FiberLinearFunction {
    fn domain_dim(&self) -> usize {
        self.section.domain_dim() + self.section.codomain_dim()
    }

    fn codomain_dim(&self) -> usize {
        1
    }

    fn apply<S: Analytic>(&self, point: &[S]) -> Result<Vec<S>, ChartError> {
        check_len("total space point", self.domain_dim(), point.len())?;
        let n = self.section.domain_dim();
        let s = self.section.apply(&point[..n])?;
        Ok(vec![dot(&s, &point[n..])])
    }
}

/// `⟨φ, μ⟩` as a function on `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionPairing {
    phi: SmoothMap,
    mu: SmoothMap,
}

impl SectionPairing {
    pub fn new(phi: SmoothMap, mu: SmoothMap) -> Result<Self, ChartError> {
        check_len("paired section domains", phi.domain_dim(), mu.domain_dim())?;
        check_len("paired section values", phi.codomain_dim(), mu.codomain_dim())?;
        Ok(SectionPairing { phi, mu })
    }
}

impl ChartMap for SectionPairing {
    fn domain_dim(&self) -> usize {
        self.phi.domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        1
    }

    fn apply<S: Analytic>(&self, point: &[S]) -> Result<Vec<S>, ChartError> {
        Ok(vec![dot(&self.phi.apply(point)?, &self.mu.apply(point)?)])
    }
}

/// The section `s + (value − s(x))`: same derivatives as `s`, but passing
/// through `value` at `x`.
pub fn extend_through(s: &SmoothMap, x: &[f64], value: &[f64]) -> Result<SmoothMap, ChartError> {
    let at = eval(s, x)?;
    check_len("extension value", at.len(), value.len())?;
    let components = s
        .components()
        .iter()
        .zip(at.iter().zip(value))
        .map(|(c, (now, want))| c.clone() + Expr::num(want - now))
        .collect();
    SmoothMap::new(s.domain_dim(), components)
}

/// A linear vector field `(x, a) ↦ (X(x), L(x) a)` on a trivial bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearVectorField {
    base_field: SmoothMap,
    matrix: MatrixMap,
}

impl LinearVectorField {
    pub fn new(base_field: SmoothMap, matrix: MatrixMap) -> Result<Self, ChartError> {
        let n = base_field.domain_dim();
        check_vector_field_len(&base_field, n)?;
        check_len("linear part domain", n, matrix.domain_dim())?;
        check_len("linear part columns", matrix.rows(), matrix.cols())?;
        Ok(LinearVectorField { base_field, matrix })
    }

    pub fn base_field(&self) -> &SmoothMap {
        &self.base_field
    }

    pub fn matrix(&self) -> &MatrixMap {
        &self.matrix
    }

    pub fn evaluate<T: Real>(&self, x: &[T], a: &[T]) -> Result<TangentPoint<T>, ChartError> {
        check_len("fiber point", self.matrix.cols(), a.len())?;
        Ok(TangentPoint::new(
            x.to_vec(),
            a.to_vec(),
            eval(&self.base_field, x)?,
            self.matrix.at(x)?.mul_vec(a),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_validation() {
        assert!(Chart::new(vec![(0.0, 1.0), (2.0, 2.0)]).is_err());
        let c = Chart::unit(2);
        assert!(c.contains(&[0.5, -1.0]));
        assert!(!c.contains(&[0.5, 1.5]));
        assert!(TrivialBundle::new(c, 0).is_err());
    }

    #[test]
    fn contracted_connection_form() {
        let bundle = TrivialBundle::new(Chart::unit(2), 1).unwrap();
        let omega = vec![
            MatrixMap::parse(2, 1, 1, &["x1"]).unwrap(),
            MatrixMap::parse(2, 1, 1, &["2"]).unwrap(),
        ];
        let conn = Connection::new(bundle, omega).unwrap();
        let z = SmoothMap::parse(2, &["x0", "1"]).unwrap();
        let w = conn.contract(&z).unwrap();
        // ω(Z) = x0·x1 + 2
        assert_eq!(w.at(&[3.0, 0.5]).unwrap().get(0, 0), &3.5);
        assert_eq!(conn.omega_at(&[3.0, 0.5], &[3.0, 1.0]).unwrap().get(0, 0), &3.5);
    }

    #[test]
    fn covariant_and_dual_derivatives() {
        let bundle = TrivialBundle::new(Chart::unit(1), 1).unwrap();
        let conn = Connection::new(bundle, vec![MatrixMap::parse(1, 1, 1, &["3"]).unwrap()]).unwrap();
        let z = SmoothMap::parse(1, &["1"]).unwrap();
        let mu = SmoothMap::parse(1, &["x0^2"]).unwrap();
        // 2x + 3x²
        assert_eq!(conn.covariant_derivative(&z, &mu, &[2.0]).unwrap(), vec![16.0]);
        // 2x − 3x²
        assert_eq!(conn.dual_covariant_derivative(&z, &mu, &[2.0]).unwrap(), vec![-8.0]);
    }

    #[test]
    fn extension_passes_through_value() {
        let s = SmoothMap::parse(2, &["x0*x1", "sin(x0)"]).unwrap();
        let e = extend_through(&s, &[0.3, 0.4], &[1.0, -2.0]).unwrap();
        let v: Vec<f64> = eval(&e, &[0.3, 0.4]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn fiber_linear_function() {
        let l = FiberLinearFunction::new(SmoothMap::parse(1, &["x0", "2"]).unwrap());
        assert_eq!(l.apply(&[3.0, 1.0, 5.0]).unwrap(), vec![13.0]);
    }
}
