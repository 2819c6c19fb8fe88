//! Linear sections, grids and warps, and the squarecap sections through
//! which a warp is recovered from the duality of `D*_A` and `D*_B`.
//!
//! A linear section `(ξ, X)` of `D → B` is a vector bundle morphism
//! `B → D` over `X: M → A`. In a decomposition it is
//! `b ↦ (X(m), b, Λ(m) b)` for a matrix-valued `Λ: M → Hom(B, C)`; likewise
//! `(η, Y)` of `D → A` is `a ↦ (a, Y(m), Mu(m) a)`.
//!
//! Everything that happens at a single base point lives on
//! [`SectionValueB`], [`SectionValueA`] and [`PointGrid`], which are generic
//! over [`Field`] and so also run over exact rationals. The section types
//! themselves are functions of the base point and are generic over [`Real`].

use std::fmt;
use std::sync::Arc;

use crate::chartcalc::{check_len, ChartError, ChartMap, MatrixMap, SmoothMap};
use crate::dvbcore::{
    core_difference, pair_a, pair_b, pair_cstar_a, pair_cstar_b, rm_da, DualAElement,
    DualBElement, DvbElement, DvbError, DvbShape, IterACElement, IterBCElement,
};
use crate::linalg::{basis, dot, sub, zeros, Matrix};
use crate::scalar::{scaled_residual, Field, Real, Ring};
use crate::Error;

/// Value of the fiber-linear part `(Λ` or `Mu)` at a base point.
pub type MatrixFn<T> = Arc<dyn Fn(&[T]) -> Result<Matrix<T>, ChartError> + Send + Sync>;
/// A section of a trivial bundle, `m ↦ X(m)`.
pub type VectorFn<T> = Arc<dyn Fn(&[T]) -> Result<Vec<T>, ChartError> + Send + Sync>;

/// `(ξ, X)` at one base point: `b ↦ (X, b, Λ b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionValueB<F> {
    pub m: Vec<F>,
    pub x: Vec<F>,
    /// `dim_C × dim_B`.
    pub lambda: Matrix<F>,
}

/// `(η, Y)` at one base point: `a ↦ (a, Y, Mu a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionValueA<F> {
    pub m: Vec<F>,
    pub y: Vec<F>,
    /// `dim_C × dim_A`.
    pub mu: Matrix<F>,
}

impl<F: Field> SectionValueB<F> {
    pub fn evaluate(&self, b: &[F]) -> DvbElement<F> {
        DvbElement::new(
            self.m.clone(),
            self.x.clone(),
            b.to_vec(),
            self.lambda.mul_vec(b),
        )
    }

    /// `ℓ_ξ(Ψ) = ⟨Ψ, ξ(b)⟩_B` where `b` is the side component of `Ψ`.
    pub fn linear_functional(&self, psi: &DualBElement<F>) -> Result<F, DvbError> {
        pair_b(psi, &self.evaluate(&psi.b))
    }
}

impl<F: Field> SectionValueA<F> {
    pub fn evaluate(&self, a: &[F]) -> DvbElement<F> {
        DvbElement::new(
            self.m.clone(),
            a.to_vec(),
            self.y.clone(),
            self.mu.mul_vec(a),
        )
    }

    /// `ℓ_η(Φ) = ⟨Φ, η(a)⟩_A` where `a` is the side component of `Φ`.
    pub fn linear_functional(&self, phi: &DualAElement<F>) -> Result<F, DvbError> {
        pair_a(phi, &self.evaluate(&phi.a))
    }
}

/// A grid frozen at one base point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGrid<F> {
    pub shape: DvbShape,
    pub xi: SectionValueB<F>,
    pub eta: SectionValueA<F>,
}

impl<F: Field> PointGrid<F> {
    pub fn new(
        shape: DvbShape,
        xi: SectionValueB<F>,
        eta: SectionValueA<F>,
    ) -> Result<Self, DvbError> {
        let fits = xi.m.len() == shape.base_dim
            && eta.m == xi.m
            && xi.x.len() == shape.dim_a
            && (xi.lambda.rows(), xi.lambda.cols()) == (shape.dim_c, shape.dim_b)
            && eta.y.len() == shape.dim_b
            && (eta.mu.rows(), eta.mu.cols()) == (shape.dim_c, shape.dim_a);
        if !fits {
            return Err(DvbError::Shape(format!(
                "grid components do not fit {shape:?}"
            )));
        }
        Ok(PointGrid { shape, xi, eta })
    }

    pub fn m(&self) -> &[F] {
        &self.xi.m
    }

    /// The core element with `ξ(Y) −_A η(X) = w +_B 0̃^A_X`; both
    /// subtraction routes are evaluated and must agree.
    pub fn warp(&self) -> Result<Vec<F>, DvbError> {
        let d = self.xi.evaluate(&self.eta.y);
        let d2 = self.eta.evaluate(&self.xi.x);
        core_difference(&d, &d2)
    }

    /// `Λ Y − Mu X`.
    pub fn warp_decomposed(&self) -> Vec<F> {
        sub(
            &self.xi.lambda.mul_vec(&self.eta.y),
            &self.eta.mu.mul_vec(&self.xi.x),
        )
    }

    /// The same pair of sections with the roles of `ξ` and `η` exchanged,
    /// as a grid on the flipped bundle.
    pub fn interchanged(&self) -> PointGrid<F> {
        PointGrid {
            shape: self.shape.flipped(),
            xi: SectionValueB {
                m: self.eta.m.clone(),
                x: self.eta.y.clone(),
                lambda: self.eta.mu.clone(),
            },
            eta: SectionValueA {
                m: self.xi.m.clone(),
                y: self.xi.x.clone(),
                mu: self.xi.lambda.clone(),
            },
        }
    }

    /// `(⦅ξ^⊓(κ), η^⊓(κ)⦆, ⟨κ, −warp⟩)`.
    pub fn verify_theorem51(&self, kappa: &[F]) -> Result<(F, F), DvbError> {
        check_kappa(self.shape, kappa)?;
        let lhs = squarecap_pairing(
            &squarecap_b(&self.xi, kappa),
            &squarecap_a(&self.eta, kappa),
        )?;
        let rhs = -dot(kappa, &self.warp()?);
        Ok((lhs, rhs))
    }

    /// The middle term of the duality argument for a given `Ψ` over
    /// `(κ, Y)`: `⟨Ψ, η(X)⟩_B − ⟨Ψ, ξ(Y)⟩_B`. Its value must not depend on
    /// the free core component `α` of `Ψ`.
    pub fn duality_chain(&self, kappa: &[F], alpha: &[F]) -> Result<F, DvbError> {
        let psi = DualBElement::new(
            self.m().to_vec(),
            kappa.to_vec(),
            alpha.to_vec(),
            self.eta.y.clone(),
        );
        let via_eta = pair_b(&psi, &self.eta.evaluate(&self.xi.x))?;
        let via_xi = pair_b(&psi, &self.xi.evaluate(&self.eta.y))?;
        Ok(via_eta - via_xi)
    }
}

fn check_kappa<F>(shape: DvbShape, kappa: &[F]) -> Result<(), DvbError> {
    if kappa.len() == shape.dim_c {
        Ok(())
    } else {
        Err(DvbError::Shape(format!(
            "κ has length {}, expected {}",
            kappa.len(),
            shape.dim_c
        )))
    }
}

/// `ξ^⊓(κ) = (κ, Λᵀκ, X)`.
pub fn squarecap_b<F: Field>(xi: &SectionValueB<F>, kappa: &[F]) -> IterBCElement<F> {
    IterBCElement::new(
        xi.m.clone(),
        kappa.to_vec(),
        xi.lambda.tr_mul_vec(kappa),
        xi.x.clone(),
    )
}

/// `η^⊓(κ) = (κ, Muᵀκ, Y)`.
pub fn squarecap_a<F: Field>(eta: &SectionValueA<F>, kappa: &[F]) -> IterACElement<F> {
    IterACElement::new(
        eta.m.clone(),
        kappa.to_vec(),
        eta.mu.tr_mul_vec(kappa),
        eta.y.clone(),
    )
}

/// Largest scaled gap between `⟨ξ^⊓(κ), Ψ⟩_{C*}` and `ℓ_ξ(Ψ)` over the
/// given duals, which must lie over `κ`.
pub fn squarecap_b_defect<F: Field>(
    xi: &SectionValueB<F>,
    kappa: &[F],
    duals: &[DualBElement<F>],
) -> Result<f64, DvbError> {
    let cap = squarecap_b(xi, kappa);
    duals.iter().try_fold(0.0f64, |worst, psi| {
        let lhs = pair_cstar_b(&cap, psi)?;
        let rhs = xi.linear_functional(psi)?;
        Ok(worst.max(scaled_residual(lhs.approx(), rhs.approx())))
    })
}

/// Largest scaled gap between `⟨η^⊓(κ), Φ⟩_{C*}` and `ℓ_η(Φ)`.
pub fn squarecap_a_defect<F: Field>(
    eta: &SectionValueA<F>,
    kappa: &[F],
    duals: &[DualAElement<F>],
) -> Result<f64, DvbError> {
    let cap = squarecap_a(eta, kappa);
    duals.iter().try_fold(0.0f64, |worst, phi| {
        let lhs = pair_cstar_a(&cap, phi)?;
        let rhs = eta.linear_functional(phi)?;
        Ok(worst.max(scaled_residual(lhs.approx(), rhs.approx())))
    })
}

/// `⦅𝔅, 𝔄⦆ = ⟨𝔄, R_DA(𝔅)⟩_{C*}`.
pub fn squarecap_pairing<F: Field>(
    mb: &IterBCElement<F>,
    ma: &IterACElement<F>,
) -> Result<F, DvbError> {
    pair_cstar_a(ma, &rm_da(mb))
}

/// `⦅(κ, β, a), (κ, α, b)⦆ = ⟨α, a⟩ − ⟨β, b⟩`.
pub fn squarecap_pairing_decomposed<F: Field>(
    mb: &IterBCElement<F>,
    ma: &IterACElement<F>,
) -> F {
    dot(&ma.alpha, &mb.a) - dot(&mb.beta, &ma.b)
}

/// `γ^B_{C*}(κ, α, b) = κ`.
pub fn gamma_b_cstar<F: Field>(psi: &DualBElement<F>) -> Vec<F> {
    psi.kappa.clone()
}

/// `γ^B_{C*}` from its characterization `⟨γ(Ψ), c⟩ = ⟨Ψ, 0̃^B_b +_A c⟩_B`,
/// read off on the basis core vectors.
pub fn gamma_b_cstar_via_pairing<F: Field>(psi: &DualBElement<F>) -> Result<Vec<F>, DvbError> {
    let shape = psi.shape();
    (0..shape.dim_c)
        .map(|k| {
            let zero = DvbElement::zero_over_b(shape, psi.m.clone(), psi.b.clone());
            let c = DvbElement::core(shape, psi.m.clone(), basis(shape.dim_c, k));
            pair_b(psi, &zero.add_over_a(&c)?)
        })
        .collect()
}

/// A linear section `(ξ, X)` of `D → B`.
#[derive(Clone)]
pub struct LinearSectionB<T> {
    shape: DvbShape,
    base: VectorFn<T>,
    lambda: MatrixFn<T>,
}

/// A linear section `(η, Y)` of `D → A`.
#[derive(Clone)]
pub struct LinearSectionA<T> {
    shape: DvbShape,
    base: VectorFn<T>,
    mu: MatrixFn<T>,
}

impl<T> fmt::Debug for LinearSectionB<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearSectionB")
            .field("shape", &self.shape)
            .finish_non_exhaustive()
    }
}

impl<T> fmt::Debug for LinearSectionA<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearSectionA")
            .field("shape", &self.shape)
            .finish_non_exhaustive()
    }
}

fn check_maps(
    shape: DvbShape,
    base: &SmoothMap,
    side_dim: usize,
    part: &MatrixMap,
    cols: usize,
) -> Result<(), ChartError> {
    check_len("section domain", shape.base_dim, base.domain_dim())?;
    check_len("section values", side_dim, base.codomain_dim())?;
    check_len("fiber-linear part domain", shape.base_dim, part.domain_dim())?;
    check_len("fiber-linear part rows", shape.dim_c, part.rows())?;
    check_len("fiber-linear part columns", cols, part.cols())
}

fn check_matrix<T: Ring>(m: &Matrix<T>, rows: usize, cols: usize) -> Result<(), ChartError> {
    check_len("fiber-linear part rows", rows, m.rows())?;
    check_len("fiber-linear part columns", cols, m.cols())
}

impl<T: Real> LinearSectionB<T> {
    /// `X: M → A` and `Λ: M → Hom(B, C)` given as expressions.
    pub fn new(shape: DvbShape, x: SmoothMap, lambda: MatrixMap) -> Result<Self, ChartError> {
        check_maps(shape, &x, shape.dim_a, &lambda, shape.dim_b)?;
        Ok(LinearSectionB {
            shape,
            base: Arc::new(move |m: &[T]| x.apply(m)),
            lambda: Arc::new(move |m: &[T]| lambda.at(m)),
        })
    }

    /// Sections whose parts are computed rather than written down, such as
    /// tangent lifts whose `Λ` is a Jacobian. The returned values are
    /// checked against `shape` on every evaluation.
    pub fn from_fns(
        shape: DvbShape,
        base: impl Fn(&[T]) -> Result<Vec<T>, ChartError> + Send + Sync + 'static,
        lambda: impl Fn(&[T]) -> Result<Matrix<T>, ChartError> + Send + Sync + 'static,
    ) -> Self {
        LinearSectionB {
            shape,
            base: Arc::new(base),
            lambda: Arc::new(lambda),
        }
    }

    pub fn shape(&self) -> DvbShape {
        self.shape
    }

    pub fn at(&self, m: &[T]) -> Result<SectionValueB<T>, ChartError> {
        check_len("base point", self.shape.base_dim, m.len())?;
        let x = (self.base)(m)?;
        check_len("section values", self.shape.dim_a, x.len())?;
        let lambda = (self.lambda)(m)?;
        check_matrix(&lambda, self.shape.dim_c, self.shape.dim_b)?;
        Ok(SectionValueB {
            m: m.to_vec(),
            x,
            lambda,
        })
    }

    /// `ξ(b) = (X(m), b, Λ(m) b)`.
    pub fn evaluate(&self, m: &[T], b: &[T]) -> Result<DvbElement<T>, ChartError> {
        check_len("B-fiber vector", self.shape.dim_b, b.len())?;
        Ok(self.at(m)?.evaluate(b))
    }

    pub fn squarecap(&self, m: &[T], kappa: &[T]) -> Result<IterBCElement<T>, ChartError> {
        check_len("κ", self.shape.dim_c, kappa.len())?;
        Ok(squarecap_b(&self.at(m)?, kappa))
    }
}

impl<T: Real> LinearSectionA<T> {
    /// `Y: M → B` and `Mu: M → Hom(A, C)` given as expressions.
    pub fn new(shape: DvbShape, y: SmoothMap, mu: MatrixMap) -> Result<Self, ChartError> {
        check_maps(shape, &y, shape.dim_b, &mu, shape.dim_a)?;
        Ok(LinearSectionA {
            shape,
            base: Arc::new(move |m: &[T]| y.apply(m)),
            mu: Arc::new(move |m: &[T]| mu.at(m)),
        })
    }

    pub fn from_fns(
        shape: DvbShape,
        base: impl Fn(&[T]) -> Result<Vec<T>, ChartError> + Send + Sync + 'static,
        mu: impl Fn(&[T]) -> Result<Matrix<T>, ChartError> + Send + Sync + 'static,
    ) -> Self {
        LinearSectionA {
            shape,
            base: Arc::new(base),
            mu: Arc::new(mu),
        }
    }

    pub fn shape(&self) -> DvbShape {
        self.shape
    }

    pub fn at(&self, m: &[T]) -> Result<SectionValueA<T>, ChartError> {
        check_len("base point", self.shape.base_dim, m.len())?;
        let y = (self.base)(m)?;
        check_len("section values", self.shape.dim_b, y.len())?;
        let mu = (self.mu)(m)?;
        check_matrix(&mu, self.shape.dim_c, self.shape.dim_a)?;
        Ok(SectionValueA {
            m: m.to_vec(),
            y,
            mu,
        })
    }

    /// `η(a) = (a, Y(m), Mu(m) a)`.
    pub fn evaluate(&self, m: &[T], a: &[T]) -> Result<DvbElement<T>, ChartError> {
        check_len("A-fiber vector", self.shape.dim_a, a.len())?;
        Ok(self.at(m)?.evaluate(a))
    }

    pub fn squarecap(&self, m: &[T], kappa: &[T]) -> Result<IterACElement<T>, ChartError> {
        check_len("κ", self.shape.dim_c, kappa.len())?;
        Ok(squarecap_a(&self.at(m)?, kappa))
    }
}

/// A pair of linear sections, one for each side structure.
#[derive(Clone, Debug)]
pub struct Grid<T> {
    pub xi: LinearSectionB<T>,
    pub eta: LinearSectionA<T>,
}

impl<T: Real> Grid<T> {
    pub fn new(xi: LinearSectionB<T>, eta: LinearSectionA<T>) -> Result<Self, DvbError> {
        if xi.shape() != eta.shape() {
            return Err(DvbError::Shape(format!(
                "grid sections live on {:?} and {:?}",
                xi.shape(),
                eta.shape()
            )));
        }
        Ok(Grid { xi, eta })
    }

    pub fn shape(&self) -> DvbShape {
        self.xi.shape()
    }

    pub fn at(&self, m: &[T]) -> Result<PointGrid<T>, Error> {
        Ok(PointGrid::new(self.shape(), self.xi.at(m)?, self.eta.at(m)?)?)
    }

    pub fn warp(&self, m: &[T]) -> Result<Vec<T>, Error> {
        Ok(self.at(m)?.warp()?)
    }

    /// The grid on the flipped bundle with `ξ` and `η` exchanged.
    pub fn interchanged(&self) -> Grid<T> {
        let flipped = self.shape().flipped();
        Grid {
            xi: LinearSectionB {
                shape: flipped,
                base: self.eta.base.clone(),
                lambda: self.eta.mu.clone(),
            },
            eta: LinearSectionA {
                shape: flipped,
                base: self.xi.base.clone(),
                mu: self.xi.lambda.clone(),
            },
        }
    }

    pub fn verify_theorem51(&self, m: &[T], kappa: &[T]) -> Result<(T, T), Error> {
        Ok(self.at(m)?.verify_theorem51(kappa)?)
    }
}

/// A grid whose two sections are both trivial over the zero sections.
pub fn zero_grid<T: Real>(shape: DvbShape) -> Grid<T> {
    let (a, b) = (shape.dim_a, shape.dim_b);
    let c = shape.dim_c;
    Grid {
        xi: LinearSectionB::from_fns(
            shape,
            move |_| Ok(zeros(a)),
            move |_| Ok(Matrix::zeros(c, b)),
        ),
        eta: LinearSectionA::from_fns(
            shape,
            move |_| Ok(zeros(b)),
            move |_| Ok(Matrix::zeros(c, a)),
        ),
    }
}
