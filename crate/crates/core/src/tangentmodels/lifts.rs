//! Lifts of vector fields and sections, and the grids they form on `T²M`
//! and `T(A)`.

use crate::chartcalc::{
    check_len, check_vector_field, eval, jacobian, pushforward, ChartError, ChartMap, MatrixMap,
    SmoothMap,
};
use crate::dvbcore::DvbShape;
use crate::gridwarp::{Grid, LinearSectionA, LinearSectionB};
use crate::linalg::neg;
use crate::scalar::{scaled_residual, Real};
use crate::Error;

use super::{Connection, FiberLinearFunction, LinearVectorField, TangentPoint, TrivialBundle};

/// `X̃(x, v) = (x, v; X(x), DX(x) v)`.
pub fn complete_lift<T: Real>(x_field: &SmoothMap, x: &[T], v: &[T]) -> Result<TangentPoint<T>, ChartError> {
    check_vector_field(x_field, x.len())?;
    check_len("tangent vector", x.len(), v.len())?;
    Ok(TangentPoint::new(
        x.to_vec(),
        v.to_vec(),
        eval(x_field, x)?,
        pushforward(x_field, x, v)?,
    ))
}

/// `J_M: (x; v, ẋ, v̇) ↦ (x; ẋ, v, v̇)`.
pub fn canonical_involution<T: Real>(p: &TangentPoint<T>) -> TangentPoint<T> {
    TangentPoint::new(
        p.base.clone(),
        p.base_velocity.clone(),
        p.fiber.clone(),
        p.fiber_velocity.clone(),
    )
}

/// `T(μ)(x, ẋ) = (x, μ(x); ẋ, Dμ(x) ẋ)`.
pub fn tangent_section_lift<T: Real>(mu: &SmoothMap, x: &[T], xdot: &[T]) -> Result<TangentPoint<T>, ChartError> {
    check_len("section domain", x.len(), mu.domain_dim())?;
    check_len("tangent vector", x.len(), xdot.len())?;
    Ok(TangentPoint::new(
        x.to_vec(),
        eval(mu, x)?,
        xdot.to_vec(),
        pushforward(mu, x, xdot)?,
    ))
}

/// `(T(μ), μ)` as a linear section of `T(A) → TM`: `Λ = Dμ`.
pub fn tangent_lift_section<T: Real>(bundle: &TrivialBundle, mu: &SmoothMap) -> Result<LinearSectionB<T>, ChartError> {
    let shape = bundle.tangent_shape();
    check_len("section domain", shape.base_dim, mu.domain_dim())?;
    check_len("section values", shape.dim_a, mu.codomain_dim())?;
    let (value, jac) = (mu.clone(), mu.clone());
    Ok(LinearSectionB::from_fns(
        shape,
        move |m: &[T]| eval(&value, m),
        move |m: &[T]| jacobian(&jac, m),
    ))
}

/// `(X̃, X)` as a linear section of `T²M → TM` (the `p_TM` side):
/// `v ↦ (v, X, DX v)`.
pub fn complete_lift_section<T: Real>(dim: usize, x_field: &SmoothMap) -> Result<LinearSectionA<T>, ChartError> {
    check_vector_field(x_field, dim)?;
    let shape = DvbShape {
        dim_a: dim,
        dim_b: dim,
        dim_c: dim,
        base_dim: dim,
    };
    let (value, jac) = (x_field.clone(), x_field.clone());
    Ok(LinearSectionA::from_fns(
        shape,
        move |m: &[T]| eval(&value, m),
        move |m: &[T]| jacobian(&jac, m),
    ))
}

/// The grid `(T(Y), Y)`, `(X̃, X)` on `T²M`.
pub fn bracket_grid<T: Real>(x_field: &SmoothMap, y_field: &SmoothMap) -> Result<Grid<T>, Error> {
    let dim = x_field.domain_dim();
    check_vector_field(y_field, dim)?;
    let tm = TrivialBundle::tangent(super::Chart::unit(dim));
    let xi = tangent_lift_section(&tm, y_field)?;
    let eta = complete_lift_section(dim, x_field)?;
    Ok(Grid::new(xi, eta)?)
}

/// The warp of the `(T(Y), Y)`, `(X̃, X)` grid; equals `[X, Y](m)`.
pub fn lie_bracket_via_warp<T: Real>(x_field: &SmoothMap, y_field: &SmoothMap, m: &[T]) -> Result<Vec<T>, Error> {
    bracket_grid(x_field, y_field)?.warp(m)
}

/// `Z^H(x, a) = (x, a; Z(x), −ω(Z)(x) a)`.
pub fn horizontal_lift<T: Real>(
    conn: &Connection,
    z: &SmoothMap,
    x: &[T],
    a: &[T],
) -> Result<TangentPoint<T>, ChartError> {
    check_len("fiber point", conn.bundle().fiber_dim(), a.len())?;
    let zx = eval(z, x)?;
    let w = conn.omega_at(x, &zx)?;
    Ok(TangentPoint::new(x.to_vec(), a.to_vec(), zx, neg(&w.mul_vec(a))))
}

/// `Z^H` as a linear vector field on `A`.
pub fn horizontal_lift_field(conn: &Connection, z: &SmoothMap) -> Result<LinearVectorField, ChartError> {
    let w = conn.contract(z)?;
    let negated = SmoothMap::new(
        w.domain_dim(),
        w.entries().components().iter().map(|e| -e.clone()).collect(),
    )?;
    LinearVectorField::new(z.clone(), MatrixMap::new(w.rows(), w.cols(), negated)?)
}

/// A linear vector field `ξ` over `X` as a linear section of
/// `T(A) → A`: `a ↦ (a, X, L a)`.
pub fn linear_field_section<T: Real>(
    bundle: &TrivialBundle,
    field: &LinearVectorField,
) -> Result<LinearSectionA<T>, ChartError> {
    let shape = bundle.tangent_shape();
    LinearSectionA::new(shape, field.base_field().clone(), field.matrix().clone())
}

/// How far `Z^H` is from the two characterizing identities, at a point
/// `(x, a)` of `A`: as a derivation, `Z^H(ℓ_φ) = ℓ_{∇*_Z φ}` and
/// `Z^H(f ∘ q) = Z(f) ∘ q`. Returns the larger scaled residual.
pub fn horizontal_lift_defect(
    conn: &Connection,
    z: &SmoothMap,
    phi: &SmoothMap,
    f: &SmoothMap,
    x: &[f64],
    a: &[f64],
) -> Result<f64, ChartError> {
    let lift = horizontal_lift(conn, z, x, a)?;
    let (point, vector) = lift.split();

    let linear = FiberLinearFunction::new(phi.clone());
    let lhs = pushforward(&linear, &point, &vector)?[0];
    let rhs = crate::linalg::dot(&conn.dual_covariant_derivative(z, phi, x)?, a);
    let linear_gap = scaled_residual(lhs, rhs);

    let pulled = f.widen(conn.bundle().fiber_dim());
    let lhs = pushforward(&pulled, &point, &vector)?[0];
    let rhs = crate::chartcalc::directional_derivative(f, z, x)?;
    Ok(linear_gap.max(scaled_residual(lhs, rhs)))
}

/// The grid `(T(μ), μ)`, `(Z^H, Z)` on `T(A)`.
pub fn connection_grid<T: Real>(conn: &Connection, z: &SmoothMap, mu: &SmoothMap) -> Result<Grid<T>, Error> {
    let bundle = conn.bundle();
    let xi = tangent_lift_section(bundle, mu)?;
    let eta = linear_field_section(bundle, &horizontal_lift_field(conn, z)?)?;
    Ok(Grid::new(xi, eta)?)
}

/// Warp of `(T(μ), μ)`, `(Z^H, Z)`; equals `∇_Z μ (m)`.
pub fn covariant_derivative_via_warp<T: Real>(
    conn: &Connection,
    z: &SmoothMap,
    mu: &SmoothMap,
    m: &[T],
) -> Result<Vec<T>, Error> {
    connection_grid(conn, z, mu)?.warp(m)
}

/// The differential operator of a linear vector field `ξ = (X, L)`:
/// `D(μ)` is the warp of `(T(μ), μ)`, `(ξ, X)`, i.e. `Dμ X − L μ`.
pub fn linear_vector_field_operator<T: Real>(
    bundle: &TrivialBundle,
    field: &LinearVectorField,
    mu: &SmoothMap,
    m: &[T],
) -> Result<Vec<T>, Error> {
    let xi = tangent_lift_section(bundle, mu)?;
    let eta = linear_field_section(bundle, field)?;
    Grid::new(xi, eta)?.warp(m)
}

/// Closed form of [`linear_vector_field_operator`].
pub fn linear_vector_field_operator_closed<T: Real>(
    field: &LinearVectorField,
    mu: &SmoothMap,
    m: &[T],
) -> Result<Vec<T>, ChartError> {
    let along = pushforward(mu, m, &eval(field.base_field(), m)?)?;
    let twist = field.matrix().at(m)?.mul_vec(&eval(mu, m)?);
    check_len("section values", along.len(), twist.len())?;
    Ok(crate::linalg::sub(&along, &twist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartcalc::lie_bracket;
    use crate::tangentmodels::Chart;

    fn field(dim: usize, comps: &[&str]) -> SmoothMap {
        SmoothMap::parse(dim, comps).unwrap()
    }

    #[test]
    fn complete_lift_of_constant_field() {
        let x = field(2, &["2", "-1"]);
        let p = complete_lift(&x, &[0.1, 0.2], &[3.0, 4.0]).unwrap();
        assert_eq!(p.base_velocity, vec![2.0, -1.0]);
        assert_eq!(p.fiber_velocity, vec![0.0, 0.0]);
        assert_eq!(p.tangent_projection().1, &[2.0, -1.0]);
    }

    #[test]
    fn complete_lift_is_involution_of_tangent_lift() {
        let x = field(2, &["x0*x1", "sin(x0)"]);
        let (pt, v) = ([0.3, -0.4], [1.5, 0.5]);
        let direct = complete_lift(&x, &pt, &v).unwrap();
        let via = canonical_involution(&tangent_section_lift(&x, &pt, &v).unwrap());
        assert_eq!(direct, via);
        assert_eq!(canonical_involution(&canonical_involution(&direct)), direct);
        let section = complete_lift_section::<f64>(2, &x).unwrap();
        assert_eq!(section.evaluate(&pt, &v).unwrap(), direct.to_dvb());
    }

    #[test]
    fn tangent_lift_of_linear_section() {
        let mu = field(2, &["2*x0 - x1", "3*x1"]);
        let p = tangent_section_lift(&mu, &[0.5, 0.25], &[1.0, 2.0]).unwrap();
        assert_eq!(p.fiber_velocity, vec![0.0, 6.0]);
        let c = field(2, &["7", "8"]);
        let p = tangent_section_lift(&c, &[0.5, 0.25], &[1.0, 2.0]).unwrap();
        assert_eq!(p.fiber_velocity, vec![0.0, 0.0]);
    }

    #[test]
    fn bracket_via_warp_examples() {
        let x = field(2, &["1", "0"]);
        let y = field(2, &["0", "x0"]);
        assert_eq!(lie_bracket_via_warp(&x, &y, &[0.7, -0.2]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(lie_bracket_via_warp(&y, &y, &[0.7, -0.2]).unwrap(), vec![0.0, 0.0]);
        let x = field(3, &["x1*x2", "sin(x0)", "x0^2"]);
        let y = field(3, &["exp(x2)", "x0 - x1", "x1*x1*x0"]);
        let p = [0.2, -0.5, 0.8];
        let warp: Vec<f64> = lie_bracket_via_warp(&x, &y, &p).unwrap();
        let oracle = lie_bracket(&x, &y, &p).unwrap();
        for (w, o) in warp.iter().zip(&oracle) {
            assert!((w - o).abs() < 1e-14);
        }
    }

    #[test]
    fn flat_horizontal_lift() {
        let bundle = TrivialBundle::new(Chart::unit(2), 3).unwrap();
        let conn = Connection::flat(bundle);
        let z = field(2, &["x1", "1"]);
        let p = horizontal_lift(&conn, &z, &[0.5, 0.5], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.base_velocity, vec![0.5, 1.0]);
        assert_eq!(p.fiber_velocity, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn horizontal_lift_derivation_identities() {
        let bundle = TrivialBundle::new(Chart::unit(2), 2).unwrap();
        let omega = vec![
            MatrixMap::parse(2, 2, 2, &["x1", "1", "0", "x0*x1"]).unwrap(),
            MatrixMap::parse(2, 2, 2, &["2", "-x0", "x1^2", "0.5"]).unwrap(),
        ];
        let conn = Connection::new(bundle, omega).unwrap();
        let z = field(2, &["x0 + 1", "x1*x0"]);
        let phi = field(2, &["sin(x1)", "x0^2"]);
        let f = field(2, &["x0*x1 + exp(x0)"]);
        let defect = horizontal_lift_defect(&conn, &z, &phi, &f, &[0.3, -0.6], &[0.9, -0.1]).unwrap();
        assert!(defect < 1e-14, "{defect}");

        let mu = field(2, &["x0*x1", "cos(x0)"]);
        let m = [0.3, -0.6];
        let warp: Vec<f64> = covariant_derivative_via_warp(&conn, &z, &mu, &m).unwrap();
        let closed = conn.covariant_derivative(&z, &mu, &m).unwrap();
        for (w, c) in warp.iter().zip(&closed) {
            assert!((w - c).abs() < 1e-14);
        }
        let lvf = horizontal_lift_field(&conn, &z).unwrap();
        let op = linear_vector_field_operator(conn.bundle(), &lvf, &mu, &m).unwrap();
        assert_eq!(op, warp);
        assert_eq!(op, linear_vector_field_operator_closed(&lvf, &mu, &m).unwrap());
    }

    #[test]
    fn zero_linear_vector_field() {
        let bundle = TrivialBundle::new(Chart::unit(1), 2).unwrap();
        let lvf = LinearVectorField::new(field(1, &["0"]), MatrixMap::zero(1, 2, 2)).unwrap();
        let mu = field(1, &["x0^3", "x0"]);
        assert_eq!(
            linear_vector_field_operator(&bundle, &lvf, &mu, &[0.4]).unwrap(),
            vec![0.0, 0.0]
        );
    }
}
