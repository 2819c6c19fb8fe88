//! Seeded random instances for the verification sweeps.
//!
//! Fiber and covector coordinates are uniform in `[-1, 1]`; base points
//! are uniform in a chart box. Expression-valued objects are random sparse
//! polynomials with coefficients in `[-1, 1]`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chartcalc::{Expr, MatrixMap, SmoothMap};
use crate::dvbcore::{
    DualAElement, DualBElement, DvbElement, DvbShape, IterACElement, IterBCElement,
};
use crate::gridwarp::{Grid, LinearSectionA, LinearSectionB, PointGrid, SectionValueA, SectionValueB};
use crate::linalg::Matrix;
use crate::scalar::{Field, Real};
use crate::tangentmodels::{Chart, Connection, TrivialBundle};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` derived from `seed`, so that samples can be
/// evaluated in any order with identical results.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn unit<F: Field, R: Rng>(rng: &mut R) -> F {
    F::from_f64_lossy(rng.gen_range(-1.0..=1.0))
}

pub fn unit_vec<F: Field, R: Rng>(rng: &mut R, n: usize) -> Vec<F> {
    (0..n).map(|_| unit(rng)).collect()
}

pub fn unit_matrix<F: Field, R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix<F> {
    Matrix::from_row_major(rows, cols, unit_vec(rng, rows * cols))
}

/// Shape with side and core dimensions in `1..=max_fiber` and base
/// dimension in `0..=max_base`.
pub fn shape<R: Rng>(rng: &mut R, max_fiber: usize, max_base: usize) -> DvbShape {
    DvbShape {
        dim_a: rng.gen_range(1..=max_fiber),
        dim_b: rng.gen_range(1..=max_fiber),
        dim_c: rng.gen_range(1..=max_fiber),
        base_dim: rng.gen_range(0..=max_base),
    }
}

pub fn element<F: Field, R: Rng>(rng: &mut R, s: DvbShape) -> DvbElement<F> {
    DvbElement::new(
        unit_vec(rng, s.base_dim),
        unit_vec(rng, s.dim_a),
        unit_vec(rng, s.dim_b),
        unit_vec(rng, s.dim_c),
    )
}

pub fn dual_a<F: Field, R: Rng>(rng: &mut R, s: DvbShape) -> DualAElement<F> {
    DualAElement::new(
        unit_vec(rng, s.base_dim),
        unit_vec(rng, s.dim_a),
        unit_vec(rng, s.dim_b),
        unit_vec(rng, s.dim_c),
    )
}

pub fn dual_b<F: Field, R: Rng>(rng: &mut R, s: DvbShape) -> DualBElement<F> {
    DualBElement::new(
        unit_vec(rng, s.base_dim),
        unit_vec(rng, s.dim_c),
        unit_vec(rng, s.dim_a),
        unit_vec(rng, s.dim_b),
    )
}

pub fn iter_bc<F: Field, R: Rng>(rng: &mut R, s: DvbShape) -> IterBCElement<F> {
    IterBCElement::new(
        unit_vec(rng, s.base_dim),
        unit_vec(rng, s.dim_c),
        unit_vec(rng, s.dim_b),
        unit_vec(rng, s.dim_a),
    )
}

pub fn iter_ac<F: Field, R: Rng>(rng: &mut R, s: DvbShape) -> IterACElement<F> {
    IterACElement::new(
        unit_vec(rng, s.base_dim),
        unit_vec(rng, s.dim_c),
        unit_vec(rng, s.dim_a),
        unit_vec(rng, s.dim_b),
    )
}

/// A random `Ψ ∈ D*_B` over the given `m` and `κ`.
pub fn dual_b_over<F: Field, R: Rng>(rng: &mut R, s: DvbShape, m: &[F], kappa: &[F]) -> DualBElement<F> {
    DualBElement::new(
        m.to_vec(),
        kappa.to_vec(),
        unit_vec(rng, s.dim_a),
        unit_vec(rng, s.dim_b),
    )
}

/// A random `Φ ∈ D*_A` over the given `m` and `κ`.
pub fn dual_a_over<F: Field, R: Rng>(rng: &mut R, s: DvbShape, m: &[F], kappa: &[F]) -> DualAElement<F> {
    DualAElement::new(
        m.to_vec(),
        unit_vec(rng, s.dim_a),
        unit_vec(rng, s.dim_b),
        kappa.to_vec(),
    )
}

pub fn point_grid<F: Field, R: Rng>(rng: &mut R, s: DvbShape) -> PointGrid<F> {
    let m: Vec<F> = unit_vec(rng, s.base_dim);
    PointGrid {
        shape: s,
        xi: SectionValueB {
            m: m.clone(),
            x: unit_vec(rng, s.dim_a),
            lambda: unit_matrix(rng, s.dim_c, s.dim_b),
        },
        eta: SectionValueA {
            m,
            y: unit_vec(rng, s.dim_b),
            mu: unit_matrix(rng, s.dim_c, s.dim_a),
        },
    }
}

/// Uniform point of the chart box.
pub fn in_box<R: Rng>(rng: &mut R, chart: &Chart) -> Vec<f64> {
    chart
        .bounds()
        .iter()
        .map(|&(lo, hi)| rng.gen_range(lo..=hi))
        .collect()
}

pub fn in_box_as<T: Real, R: Rng>(rng: &mut R, chart: &Chart) -> Vec<T> {
    in_box(rng, chart).into_iter().map(T::from_f64_lossy).collect()
}

/// Sparse polynomial in `dim` variables: a constant plus `terms` monomials
/// of total degree `1..=degree`.
pub fn polynomial<R: Rng>(rng: &mut R, dim: usize, degree: u32, terms: usize) -> Expr {
    let coeff = |rng: &mut R| Expr::num(round_coefficient(rng.gen_range(-1.0..=1.0)));
    let mut parts = vec![coeff(rng)];
    if dim > 0 {
        for _ in 0..terms {
            let total = rng.gen_range(1..=degree.max(1));
            let mut monomial = coeff(rng);
            for _ in 0..total {
                monomial = monomial * Expr::var(rng.gen_range(0..dim));
            }
            parts.push(monomial);
        }
    }
    Expr::sum(parts)
}

// Coefficients on a 1/1024 lattice survive printing and reparsing exactly.
fn round_coefficient(x: f64) -> f64 {
    (x * 1024.0).round() / 1024.0
}

/// Map `R^dim → R^codim` with polynomial components.
pub fn polynomial_map<R: Rng>(rng: &mut R, dim: usize, codim: usize, degree: u32) -> SmoothMap {
    let components = (0..codim).map(|_| polynomial(rng, dim, degree, 3)).collect();
    SmoothMap::new(dim, components).expect("variables drawn below dim")
}

pub fn vector_field<R: Rng>(rng: &mut R, dim: usize, degree: u32) -> SmoothMap {
    polynomial_map(rng, dim, dim, degree)
}

pub fn matrix_map<R: Rng>(rng: &mut R, dim: usize, rows: usize, cols: usize, degree: u32) -> MatrixMap {
    MatrixMap::new(rows, cols, polynomial_map(rng, dim, rows * cols, degree))
        .expect("entry count matches")
}

/// Connection form with one random polynomial matrix per direction.
pub fn connection<R: Rng>(rng: &mut R, bundle: &TrivialBundle, degree: u32) -> Connection {
    let (n, k) = (bundle.chart().dim(), bundle.fiber_dim());
    let omega = (0..n).map(|_| matrix_map(rng, n, k, k, degree)).collect();
    Connection::new(bundle.clone(), omega).expect("dimensions match")
}

/// Grid with polynomial sections and fiber-linear parts.
pub fn grid<R: Rng>(rng: &mut R, s: DvbShape, degree: u32) -> Grid<f64> {
    let n = s.base_dim;
    let xi = LinearSectionB::new(
        s,
        polynomial_map(rng, n, s.dim_a, degree),
        matrix_map(rng, n, s.dim_c, s.dim_b, degree),
    )
    .expect("dimensions match");
    let eta = LinearSectionA::new(
        s,
        polynomial_map(rng, n, s.dim_b, degree),
        matrix_map(rng, n, s.dim_c, s.dim_a, degree),
    )
    .expect("dimensions match");
    Grid::new(xi, eta).expect("same shape")
}
