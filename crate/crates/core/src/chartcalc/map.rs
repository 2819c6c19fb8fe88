use super::{parse, ChartError, Expr, Jet};
use crate::linalg::Matrix;
use crate::scalar::Analytic;

/// A smooth map between coordinate spaces that can be evaluated over any
/// [`Analytic`] scalar. Evaluating over [`Jet`]s yields derivatives.
pub trait ChartMap {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn apply<S: Analytic>(&self, point: &[S]) -> Result<Vec<S>, ChartError>;
}

/// Expression-defined map `R^domain_dim -> R^codomain_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    domain_dim: usize,
    components: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(domain_dim: usize, components: Vec<Expr>) -> Result<Self, ChartError> {
        for c in &components {
            c.check_dim(domain_dim)?;
        }
        Ok(SmoothMap {
            domain_dim,
            components,
        })
    }

    /// Parses one expression per component.
    pub fn parse<S: AsRef<str>>(domain_dim: usize, components: &[S]) -> Result<Self, ChartError> {
        let components = components
            .iter()
            .map(|c| parse(c.as_ref(), domain_dim))
            .collect::<Result<_, _>>()?;
        Ok(SmoothMap {
            domain_dim,
            components,
        })
    }

    /// Constant map with the given values.
    pub fn constant(domain_dim: usize, values: &[f64]) -> Self {
        SmoothMap {
            domain_dim,
            components: values.iter().map(|&v| Expr::Num(v)).collect(),
        }
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// Extends the domain by `extra` trailing coordinates the map ignores,
    /// e.g. to pull a base function back to a total space.
    pub fn widen(&self, extra: usize) -> SmoothMap {
        SmoothMap {
            domain_dim: self.domain_dim + extra,
            components: self.components.clone(),
        }
    }
}

impl ChartMap for SmoothMap {
    fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    fn codomain_dim(&self) -> usize {
        self.components.len()
    }

    fn apply<S: Analytic>(&self, point: &[S]) -> Result<Vec<S>, ChartError> {
        check_len("map domain", self.domain_dim, point.len())?;
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

/// Matrix-valued map stored row-major as a [`SmoothMap`].
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixMap {
    rows: usize,
    cols: usize,
    entries: SmoothMap,
}

impl MatrixMap {
    pub fn new(rows: usize, cols: usize, entries: SmoothMap) -> Result<Self, ChartError> {
        check_len("matrix entries", rows * cols, entries.codomain_dim())?;
        Ok(MatrixMap {
            rows,
            cols,
            entries,
        })
    }

    /// Parses a row-major list of entry expressions.
    pub fn parse<S: AsRef<str>>(
        domain_dim: usize,
        rows: usize,
        cols: usize,
        entries: &[S],
    ) -> Result<Self, ChartError> {
        Self::new(rows, cols, SmoothMap::parse(domain_dim, entries)?)
    }

    pub fn zero(domain_dim: usize, rows: usize, cols: usize) -> Self {
        MatrixMap {
            rows,
            cols,
            entries: SmoothMap::constant(domain_dim, &vec![0.0; rows * cols]),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain_dim(&self) -> usize {
        self.entries.domain_dim()
    }

    pub fn entries(&self) -> &SmoothMap {
        &self.entries
    }

    pub fn at<S: Analytic>(&self, point: &[S]) -> Result<Matrix<S>, ChartError> {
        let data = self.entries.apply(point)?;
        Ok(Matrix::from_row_major(self.rows, self.cols, data))
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), ChartError> {
    if expected == found {
        Ok(())
    } else {
        Err(ChartError::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

/// Componentwise evaluation.
pub fn eval<M: ChartMap, S: Analytic>(map: &M, point: &[S]) -> Result<Vec<S>, ChartError> {
    map.apply(point)
}

/// `J[i][j] = ∂ map_i / ∂x_j`, by jet propagation.
pub fn jacobian<M: ChartMap, S: Analytic>(map: &M, point: &[S]) -> Result<Matrix<S>, ChartError> {
    check_len("jacobian point", map.domain_dim(), point.len())?;
    let out = map.apply(&Jet::seed(point))?;
    let n = point.len();
    Ok(Matrix::from_rows(out.iter().map(|c| c.gradient(n)).collect()))
}

/// Value and Jacobian in one jet pass.
pub fn value_and_jacobian<M: ChartMap, S: Analytic>(
    map: &M,
    point: &[S],
) -> Result<(Vec<S>, Matrix<S>), ChartError> {
    check_len("jacobian point", map.domain_dim(), point.len())?;
    let out = map.apply(&Jet::seed(point))?;
    let n = point.len();
    let jac = Matrix::from_rows(out.iter().map(|c| c.gradient(n)).collect());
    Ok((out.into_iter().map(Jet::into_value).collect(), jac))
}

/// `D map(point) · direction`, using a single-partial jet.
pub fn pushforward<M: ChartMap, S: Analytic>(
    map: &M,
    point: &[S],
    direction: &[S],
) -> Result<Vec<S>, ChartError> {
    check_len("pushforward point", map.domain_dim(), point.len())?;
    check_len("pushforward direction", map.domain_dim(), direction.len())?;
    let out = map.apply(&Jet::seed_direction(point, direction))?;
    Ok(out.iter().map(|c| c.partial(0)).collect())
}

/// `⟨df(point), X(point)⟩` for scalar `f` and vector field `X`.
pub fn directional_derivative<F: ChartMap, V: ChartMap, S: Analytic>(
    f: &F,
    field: &V,
    point: &[S],
) -> Result<S, ChartError> {
    check_len("scalar function codomain", 1, f.codomain_dim())?;
    check_vector_field(field, f.domain_dim())?;
    let direction = field.apply(point)?;
    Ok(pushforward(f, point, &direction)?.remove(0))
}

/// `[X,Y]^i = Σ_j X^j ∂_j Y^i − Y^j ∂_j X^i`.
pub fn lie_bracket<X: ChartMap, Y: ChartMap, S: Analytic>(
    x: &X,
    y: &Y,
    point: &[S],
) -> Result<Vec<S>, ChartError> {
    let n = x.domain_dim();
    check_vector_field(x, n)?;
    check_vector_field(y, n)?;
    let xv = x.apply(point)?;
    let yv = y.apply(point)?;
    let dy_x = pushforward(y, point, &xv)?;
    let dx_y = pushforward(x, point, &yv)?;
    Ok(dy_x.into_iter().zip(dx_y).map(|(a, b)| a - b).collect())
}

pub(crate) fn check_vector_field<V: ChartMap>(field: &V, dim: usize) -> Result<(), ChartError> {
    check_len("vector field domain", dim, field.domain_dim())?;
    check_len("vector field codomain", dim, field.codomain_dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(dim: usize, comps: &[&str]) -> SmoothMap {
        SmoothMap::parse(dim, comps).unwrap()
    }

    #[test]
    fn linear_map_has_constant_jacobian() {
        let a = field(2, &["2*x0 - x1", "0.5*x1", "3*x0"]);
        for p in [[0.0, 0.0], [1.0, -2.0], [3.5, 0.25]] {
            let j = jacobian(&a, &p).unwrap();
            assert_eq!(
                j,
                Matrix::from_rows(vec![vec![2.0, -1.0], vec![0.0, 0.5], vec![3.0, 0.0]])
            );
        }
    }

    #[test]
    fn product_jacobian() {
        let f = field(2, &["x0*x1"]);
        let j = jacobian(&f, &[2.0, 3.0]).unwrap();
        assert_eq!(j.row(0), &[3.0, 2.0]);
        assert_eq!(eval(&f, &[2.0, 3.0]).unwrap(), vec![6.0]);
    }

    #[test]
    fn directional_derivative_examples() {
        let f = field(2, &["x0"]);
        let e0 = field(2, &["1", "0"]);
        assert_eq!(directional_derivative(&f, &e0, &[0.3, 9.0]).unwrap(), 1.0);

        let f = field(2, &["x0*x1"]);
        let x = field(2, &["x1", "x0"]);
        assert_eq!(directional_derivative(&f, &x, &[1.0, 2.0]).unwrap(), 5.0);

        let c = field(2, &["7"]);
        assert_eq!(directional_derivative(&c, &x, &[1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn directional_derivative_rejects_bad_dims() {
        let f = field(2, &["x0", "x1"]);
        let x = field(2, &["1", "0"]);
        assert!(matches!(
            directional_derivative(&f, &x, &[0.0, 0.0]),
            Err(ChartError::DimensionMismatch { .. })
        ));
        let g = field(2, &["x0"]);
        let bad = field(2, &["1"]);
        assert!(directional_derivative(&g, &bad, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn bracket_examples() {
        let x = field(2, &["1", "0"]);
        let y = field(2, &["0", "x0"]);
        for p in [[0.0, 0.0], [1.5, -2.0]] {
            assert_eq!(lie_bracket(&x, &y, &p).unwrap(), vec![0.0, 1.0]);
            assert_eq!(lie_bracket(&x, &x, &p).unwrap(), vec![0.0, 0.0]);
        }
        let c1 = field(2, &["2", "-1"]);
        let c2 = field(2, &["0.5", "3"]);
        assert_eq!(lie_bracket(&c1, &c2, &[0.4, 0.1]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn matrix_map_layout() {
        let m = MatrixMap::parse(1, 2, 2, &["x0", "1", "2", "x0^2"]).unwrap();
        let v = m.at(&[3.0]).unwrap();
        assert_eq!(v, Matrix::from_rows(vec![vec![3.0, 1.0], vec![2.0, 9.0]]));
        assert!(MatrixMap::parse(1, 2, 2, &["x0"]).is_err());
    }

    #[test]
    fn evaluation_point_length_is_checked() {
        let f = field(2, &["x0"]);
        assert!(matches!(
            eval(&f, &[1.0]),
            Err(ChartError::DimensionMismatch { .. })
        ));
    }
}
