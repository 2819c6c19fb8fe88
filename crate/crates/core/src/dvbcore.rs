//! Decomposed double vector bundles `D = A ×_M B ×_M C`, their duals and
//! the pairings between them.
//!
//! Elements are stored by their coordinates in a fixed decomposition:
//!
//! | type              | bundle          | coordinates  | sides      | core |
//! |-------------------|-----------------|--------------|------------|------|
//! | [`DvbElement`]    | `D`             | `(a, b, c)`  | `A`, `B`   | `C`  |
//! | [`DualAElement`]  | `D*_A`          | `(a, β, κ)`  | `A`, `C*`  | `B*` |
//! | [`DualBElement`]  | `D*_B`          | `(κ, α, b)`  | `C*`, `B`  | `A*` |
//! | [`IterBCElement`] | `(D*_B)*_{C*}`  | `(κ, β, a)`  | `C*`, `A`  | `B*` |
//! | [`IterACElement`] | `(D*_A)*_{C*}`  | `(κ, α, b)`  | `C*`, `B`  | `A*` |
//!
//! Every element also carries its base point `m`. Compatibility of base
//! points and side components is checked with exact equality: these are
//! coordinates handed in by the caller, never the result of arithmetic.
//!
//! The nonstandard pairing of `D*_A` with `D*_B` is provided in both sign
//! conventions; [`nsp_ba`] is the primary one and [`rm_da`] is the
//! isomorphism that induces it.

use thiserror::Error;

use crate::linalg::{self, add, basis, dot, neg, scale, zeros, Matrix};
use crate::scalar::{scaled_residual, Field};

/// Fiber dimensions of a decomposed DVB over a chart of dimension `base_dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DvbShape {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_c: usize,
    pub base_dim: usize,
}

impl DvbShape {
    /// Side and core dimensions must be positive; a point base is allowed.
    pub fn new(dim_a: usize, dim_b: usize, dim_c: usize, base_dim: usize) -> Result<Self, DvbError> {
        if dim_a == 0 || dim_b == 0 || dim_c == 0 {
            return Err(DvbError::Shape(format!(
                "fiber dimensions must be positive, got ({dim_a}, {dim_b}, {dim_c})"
            )));
        }
        Ok(DvbShape {
            dim_a,
            dim_b,
            dim_c,
            base_dim,
        })
    }

    /// The same bundle with the roles of `A` and `B` exchanged.
    pub fn flipped(&self) -> Self {
        DvbShape {
            dim_a: self.dim_b,
            dim_b: self.dim_a,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DvbError {
    #[error("{op}: incompatible {what}")]
    Incompatible {
        op: &'static str,
        what: &'static str,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{op}: linear system is singular")]
    Singular { op: &'static str },
    #[error("{op}: the defining conditions have no solution (residual {residual:e})")]
    Inconsistent { op: &'static str, residual: f64 },
    #[error("{op}: the two routes disagree")]
    RouteMismatch { op: &'static str },
    #[error("{op}: value depends on the auxiliary element (spread {spread:e})")]
    NotIndependent { op: &'static str, spread: f64 },
}

fn require(ok: bool, op: &'static str, what: &'static str) -> Result<(), DvbError> {
    if ok {
        Ok(())
    } else {
        Err(DvbError::Incompatible { op, what })
    }
}

fn require_len<F>(v: &[F], n: usize, what: &str) -> Result<(), DvbError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(DvbError::Shape(format!(
            "{what} has length {}, expected {n}",
            v.len()
        )))
    }
}

/// Element `(m; a, b, c)` of `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct DvbElement<F> {
    pub m: Vec<F>,
    pub a: Vec<F>,
    pub b: Vec<F>,
    pub c: Vec<F>,
}

/// `(d; a, b; m)`: an element together with its two side projections and
/// its base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outline<'a, F> {
    pub a: &'a [F],
    pub b: &'a [F],
    pub m: &'a [F],
}

impl<F: Field> DvbElement<F> {
    pub fn new(m: Vec<F>, a: Vec<F>, b: Vec<F>, c: Vec<F>) -> Self {
        DvbElement { m, a, b, c }
    }

    pub fn shape(&self) -> DvbShape {
        DvbShape {
            dim_a: self.a.len(),
            dim_b: self.b.len(),
            dim_c: self.c.len(),
            base_dim: self.m.len(),
        }
    }

    pub fn outline(&self) -> Outline<'_, F> {
        Outline {
            a: &self.a,
            b: &self.b,
            m: &self.m,
        }
    }

    /// `0^D_a = (a, 0, 0)`: the zero of the fiber of `D → A` over `a`.
    pub fn zero_over_a(shape: DvbShape, m: Vec<F>, a: Vec<F>) -> Self {
        DvbElement {
            m,
            a,
            b: zeros(shape.dim_b),
            c: zeros(shape.dim_c),
        }
    }

    /// `0̃^B_b = (0, b, 0)`: the zero of the fiber of `D → B` over `b`.
    pub fn zero_over_b(shape: DvbShape, m: Vec<F>, b: Vec<F>) -> Self {
        DvbElement {
            m,
            a: zeros(shape.dim_a),
            b,
            c: zeros(shape.dim_c),
        }
    }

    /// Core embedding `c ↦ (0, 0, c)`.
    pub fn core(shape: DvbShape, m: Vec<F>, c: Vec<F>) -> Self {
        DvbElement {
            m,
            a: zeros(shape.dim_a),
            b: zeros(shape.dim_b),
            c,
        }
    }

    pub fn is_core(&self) -> bool {
        self.a.iter().all(F::is_zero) && self.b.iter().all(F::is_zero)
    }

    /// `+_A`: holds `a`, adds `(b, c)`.
    pub fn add_over_a(&self, other: &Self) -> Result<Self, DvbError> {
        require(self.m == other.m, "add over A", "base points")?;
        require(self.a == other.a, "add over A", "A-components")?;
        self.check_same_shape(other)?;
        Ok(DvbElement {
            m: self.m.clone(),
            a: self.a.clone(),
            b: add(&self.b, &other.b),
            c: add(&self.c, &other.c),
        })
    }

    /// `+_B`: holds `b`, adds `(a, c)`.
    pub fn add_over_b(&self, other: &Self) -> Result<Self, DvbError> {
        require(self.m == other.m, "add over B", "base points")?;
        require(self.b == other.b, "add over B", "B-components")?;
        self.check_same_shape(other)?;
        Ok(DvbElement {
            m: self.m.clone(),
            a: add(&self.a, &other.a),
            b: self.b.clone(),
            c: add(&self.c, &other.c),
        })
    }

    pub fn neg_over_a(&self) -> Self {
        self.scale_over_a(&-F::one())
    }

    pub fn neg_over_b(&self) -> Self {
        self.scale_over_b(&-F::one())
    }

    pub fn sub_over_a(&self, other: &Self) -> Result<Self, DvbError> {
        self.add_over_a(&other.neg_over_a())
    }

    pub fn sub_over_b(&self, other: &Self) -> Result<Self, DvbError> {
        self.add_over_b(&other.neg_over_b())
    }

    /// Scalar multiplication in `D → A`.
    pub fn scale_over_a(&self, t: &F) -> Self {
        DvbElement {
            m: self.m.clone(),
            a: self.a.clone(),
            b: scale(t, &self.b),
            c: scale(t, &self.c),
        }
    }

    /// Scalar multiplication in `D → B`.
    pub fn scale_over_b(&self, t: &F) -> Self {
        DvbElement {
            m: self.m.clone(),
            a: scale(t, &self.a),
            b: self.b.clone(),
            c: scale(t, &self.c),
        }
    }

    /// The element of the flipped bundle (sides exchanged).
    pub fn flip(&self) -> Self {
        DvbElement {
            m: self.m.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), DvbError> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(DvbError::Shape(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )))
        }
    }
}

/// The unique core element `c` such that `d −_A d2 = c +_B 0̃^A_a` and
/// `d −_B d2 = c +_A 0̃^B_b`. Both routes are computed and must agree.
pub fn core_difference<F: Field>(d: &DvbElement<F>, d2: &DvbElement<F>) -> Result<Vec<F>, DvbError> {
    const OP: &str = "core difference";
    require(d.m == d2.m, OP, "base points")?;
    require(d.a == d2.a, OP, "A-components")?;
    require(d.b == d2.b, OP, "B-components")?;
    let shape = d.shape();

    // d −_A d2 lies over (a, 0_B); removing 0̃^A_a over B leaves a core element.
    let diff_a = d.sub_over_a(d2)?;
    let zero_a = DvbElement::zero_over_a(shape, d.m.clone(), d.a.clone());
    let core_a = diff_a.sub_over_b(&zero_a)?;

    let diff_b = d.sub_over_b(d2)?;
    let zero_b = DvbElement::zero_over_b(shape, d.m.clone(), d.b.clone());
    let core_b = diff_b.sub_over_a(&zero_b)?;

    if !core_a.is_core() || !core_b.is_core() || core_a.c != core_b.c {
        return Err(DvbError::RouteMismatch { op: OP });
    }
    Ok(core_a.c)
}

/// Element `(m; a, β, κ)` of `D*_A`: a functional on the fiber of `D → A`
/// over `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualAElement<F> {
    pub m: Vec<F>,
    pub a: Vec<F>,
    pub beta: Vec<F>,
    pub kappa: Vec<F>,
}

/// Element `(m; κ, α, b)` of `D*_B`: a functional on the fiber of `D → B`
/// over `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBElement<F> {
    pub m: Vec<F>,
    pub kappa: Vec<F>,
    pub alpha: Vec<F>,
    pub b: Vec<F>,
}

/// Element `(m; κ, β, a)` of `(D*_B)*_{C*}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IterBCElement<F> {
    pub m: Vec<F>,
    pub kappa: Vec<F>,
    pub beta: Vec<F>,
    pub a: Vec<F>,
}

/// Element `(m; κ, α, b)` of `(D*_A)*_{C*}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IterACElement<F> {
    pub m: Vec<F>,
    pub kappa: Vec<F>,
    pub alpha: Vec<F>,
    pub b: Vec<F>,
}

// Each dual is a DVB of its own; `$op` holds `$held` fixed and adds the other
// two slots.
macro_rules! fiberwise_ops {
    ($ty:ident, $add:ident, $scale:ident, $label:literal, $held:ident, $s1:ident, $s2:ident) => {
        impl<F: Field> $ty<F> {
            #[doc = concat!("Addition in the structure over ", $label, ".")]
            pub fn $add(&self, other: &Self) -> Result<Self, DvbError> {
                require(self.m == other.m, concat!("add over ", $label), "base points")?;
                require(
                    self.$held == other.$held,
                    concat!("add over ", $label),
                    "side components",
                )?;
                require(
                    self.$s1.len() == other.$s1.len() && self.$s2.len() == other.$s2.len(),
                    concat!("add over ", $label),
                    "dimensions",
                )?;
                Ok($ty {
                    m: self.m.clone(),
                    $held: self.$held.clone(),
                    $s1: add(&self.$s1, &other.$s1),
                    $s2: add(&self.$s2, &other.$s2),
                })
            }

            pub fn $scale(&self, t: &F) -> Self {
                $ty {
                    m: self.m.clone(),
                    $held: self.$held.clone(),
                    $s1: scale(t, &self.$s1),
                    $s2: scale(t, &self.$s2),
                }
            }
        }
    };
}

fiberwise_ops!(DualAElement, add_over_a, scale_over_a, "A", a, beta, kappa);
fiberwise_ops!(DualAElement, add_over_cstar, scale_over_cstar, "C*", kappa, a, beta);
fiberwise_ops!(DualBElement, add_over_b, scale_over_b, "B", b, kappa, alpha);
fiberwise_ops!(DualBElement, add_over_cstar, scale_over_cstar, "C*", kappa, alpha, b);
fiberwise_ops!(IterBCElement, add_over_a, scale_over_a, "A", a, kappa, beta);
fiberwise_ops!(IterBCElement, add_over_cstar, scale_over_cstar, "C*", kappa, beta, a);
fiberwise_ops!(IterACElement, add_over_b, scale_over_b, "B", b, kappa, alpha);
fiberwise_ops!(IterACElement, add_over_cstar, scale_over_cstar, "C*", kappa, alpha, b);

impl<F: Field> DualAElement<F> {
    pub fn new(m: Vec<F>, a: Vec<F>, beta: Vec<F>, kappa: Vec<F>) -> Self {
        DualAElement { m, a, beta, kappa }
    }

    pub fn zero(shape: DvbShape, m: Vec<F>) -> Self {
        DualAElement {
            m,
            a: zeros(shape.dim_a),
            beta: zeros(shape.dim_b),
            kappa: zeros(shape.dim_c),
        }
    }

    fn check(&self, s: DvbShape) -> Result<(), DvbError> {
        require_len(&self.m, s.base_dim, "Φ.m")?;
        require_len(&self.a, s.dim_a, "Φ.a")?;
        require_len(&self.beta, s.dim_b, "Φ.β")?;
        require_len(&self.kappa, s.dim_c, "Φ.κ")
    }
}

impl<F: Field> DualBElement<F> {
    pub fn new(m: Vec<F>, kappa: Vec<F>, alpha: Vec<F>, b: Vec<F>) -> Self {
        DualBElement { m, kappa, alpha, b }
    }

    pub fn zero(shape: DvbShape, m: Vec<F>) -> Self {
        DualBElement {
            m,
            kappa: zeros(shape.dim_c),
            alpha: zeros(shape.dim_a),
            b: zeros(shape.dim_b),
        }
    }

    fn check(&self, s: DvbShape) -> Result<(), DvbError> {
        require_len(&self.m, s.base_dim, "Ψ.m")?;
        require_len(&self.kappa, s.dim_c, "Ψ.κ")?;
        require_len(&self.alpha, s.dim_a, "Ψ.α")?;
        require_len(&self.b, s.dim_b, "Ψ.b")
    }
}

impl<F: Field> IterBCElement<F> {
    pub fn new(m: Vec<F>, kappa: Vec<F>, beta: Vec<F>, a: Vec<F>) -> Self {
        IterBCElement { m, kappa, beta, a }
    }

    pub fn shape(&self) -> DvbShape {
        DvbShape {
            dim_a: self.a.len(),
            dim_b: self.beta.len(),
            dim_c: self.kappa.len(),
            base_dim: self.m.len(),
        }
    }
}

impl<F: Field> IterACElement<F> {
    pub fn new(m: Vec<F>, kappa: Vec<F>, alpha: Vec<F>, b: Vec<F>) -> Self {
        IterACElement { m, kappa, alpha, b }
    }

    pub fn shape(&self) -> DvbShape {
        DvbShape {
            dim_a: self.alpha.len(),
            dim_b: self.b.len(),
            dim_c: self.kappa.len(),
            base_dim: self.m.len(),
        }
    }
}

impl<F: Field> DualAElement<F> {
    pub fn shape(&self) -> DvbShape {
        DvbShape {
            dim_a: self.a.len(),
            dim_b: self.beta.len(),
            dim_c: self.kappa.len(),
            base_dim: self.m.len(),
        }
    }
}

impl<F: Field> DualBElement<F> {
    pub fn shape(&self) -> DvbShape {
        DvbShape {
            dim_a: self.alpha.len(),
            dim_b: self.b.len(),
            dim_c: self.kappa.len(),
            base_dim: self.m.len(),
        }
    }
}

/// `⟨Φ, d⟩_A = ⟨β, b⟩ + ⟨κ, c⟩`.
pub fn pair_a<F: Field>(phi: &DualAElement<F>, d: &DvbElement<F>) -> Result<F, DvbError> {
    require(phi.m == d.m, "pair over A", "base points")?;
    require(phi.a == d.a, "pair over A", "A-components")?;
    phi.check(d.shape())?;
    Ok(dot(&phi.beta, &d.b) + dot(&phi.kappa, &d.c))
}

/// `⟨Ψ, d⟩_B = ⟨κ, c⟩ + ⟨α, a⟩`.
pub fn pair_b<F: Field>(psi: &DualBElement<F>, d: &DvbElement<F>) -> Result<F, DvbError> {
    require(psi.m == d.m, "pair over B", "base points")?;
    require(psi.b == d.b, "pair over B", "B-components")?;
    psi.check(d.shape())?;
    Ok(dot(&psi.kappa, &d.c) + dot(&psi.alpha, &d.a))
}

/// `⟨𝔅, Ψ⟩_{C*} = ⟨β, b⟩ + ⟨α, a⟩`.
pub fn pair_cstar_b<F: Field>(mb: &IterBCElement<F>, psi: &DualBElement<F>) -> Result<F, DvbError> {
    require(mb.m == psi.m, "pair over C* (B side)", "base points")?;
    require(mb.kappa == psi.kappa, "pair over C* (B side)", "C*-components")?;
    psi.check(mb.shape())?;
    Ok(dot(&mb.beta, &psi.b) + dot(&psi.alpha, &mb.a))
}

/// `⟨𝔄, Φ⟩_{C*} = ⟨α, a⟩ + ⟨β, b⟩`.
pub fn pair_cstar_a<F: Field>(ma: &IterACElement<F>, phi: &DualAElement<F>) -> Result<F, DvbError> {
    require(ma.m == phi.m, "pair over C* (A side)", "base points")?;
    require(ma.kappa == phi.kappa, "pair over C* (A side)", "C*-components")?;
    phi.check(ma.shape())?;
    Ok(dot(&ma.alpha, &phi.a) + dot(&phi.beta, &ma.b))
}

/// `R_DA: (D*_B)*_{C*} → D*_A`, `(κ, β, a) ↦ (a, −β, κ)`.
pub fn rm_da<F: Field>(mb: &IterBCElement<F>) -> DualAElement<F> {
    DualAElement {
        m: mb.m.clone(),
        a: mb.a.clone(),
        beta: neg(&mb.beta),
        kappa: mb.kappa.clone(),
    }
}

pub fn rm_da_inverse<F: Field>(phi: &DualAElement<F>) -> IterBCElement<F> {
    IterBCElement {
        m: phi.m.clone(),
        kappa: phi.kappa.clone(),
        beta: neg(&phi.beta),
        a: phi.a.clone(),
    }
}

/// `R_DB: (D*_A)*_{C*} → D*_B`, the transpose of [`rm_da`] over `C*`:
/// `(κ, α, b) ↦ (κ, α, −b)`.
pub fn rm_db<F: Field>(ma: &IterACElement<F>) -> DualBElement<F> {
    DualBElement {
        m: ma.m.clone(),
        kappa: ma.kappa.clone(),
        alpha: ma.alpha.clone(),
        b: neg(&ma.b),
    }
}

pub fn rm_db_inverse<F: Field>(psi: &DualBElement<F>) -> IterACElement<F> {
    IterACElement {
        m: psi.m.clone(),
        kappa: psi.kappa.clone(),
        alpha: psi.alpha.clone(),
        b: neg(&psi.b),
    }
}

/// `Z_A: D*_A → (D*_B)*_{C*}`, defined by `⟨Z_A(Φ), Ψ⟩_{C*} = nsp_ab(Φ, Ψ)`.
/// Decomposed: `(a, β, κ) ↦ (κ, β, −a)`, i.e. minus `rm_da_inverse` in the
/// vector bundle over `C*`.
pub fn z_a<F: Field>(phi: &DualAElement<F>) -> IterBCElement<F> {
    rm_da_inverse(phi).scale_over_cstar(&-F::one())
}

/// `Z_B: D*_B → (D*_A)*_{C*}`, defined by `⟨Z_B(Ψ), Φ⟩_{C*} = nsp_ab(Φ, Ψ)`.
pub fn z_b<F: Field>(psi: &DualBElement<F>) -> IterACElement<F> {
    rm_db_inverse(psi).scale_over_cstar(&-F::one())
}

/// `⟨Ψ, d⟩_B − ⟨Φ, d⟩_A` for a caller-supplied compatible `d`.
pub fn nsp_ba_with<F: Field>(
    phi: &DualAElement<F>,
    psi: &DualBElement<F>,
    d: &DvbElement<F>,
) -> Result<F, DvbError> {
    require(phi.m == psi.m, "nonstandard pairing", "base points")?;
    require(phi.kappa == psi.kappa, "nonstandard pairing", "C*-components")?;
    Ok(pair_b(psi, d)? - pair_a(phi, d)?)
}

/// Relative spread tolerated between the two auxiliary elements used by
/// [`nsp_ba`]; anything above it is a genuine dependence on `d`.
pub const NSP_INDEPENDENCE_TOL: f64 = 1e-12;

/// The nonstandard pairing in the BA convention.
///
/// Evaluated through two different compatible elements `d = (a, b, 0)` and
/// `d' = (a, b, 1)`; the values must agree.
pub fn nsp_ba<F: Field>(phi: &DualAElement<F>, psi: &DualBElement<F>) -> Result<F, DvbError> {
    let shape = phi.shape();
    let d = DvbElement::new(
        phi.m.clone(),
        phi.a.clone(),
        psi.b.clone(),
        zeros(shape.dim_c),
    );
    let d_alt = DvbElement {
        c: vec![F::one(); shape.dim_c],
        ..d.clone()
    };
    let v = nsp_ba_with(phi, psi, &d)?;
    let v_alt = nsp_ba_with(phi, psi, &d_alt)?;
    let spread = scaled_residual(v.approx(), v_alt.approx());
    if spread > NSP_INDEPENDENCE_TOL {
        return Err(DvbError::NotIndependent {
            op: "nonstandard pairing",
            spread,
        });
    }
    Ok(v)
}

/// The nonstandard pairing in the AB convention, `−nsp_ba`.
pub fn nsp_ab<F: Field>(phi: &DualAElement<F>, psi: &DualBElement<F>) -> Result<F, DvbError> {
    Ok(-nsp_ba(phi, psi)?)
}

/// Closed form of [`nsp_ba`]: `⟨α, a⟩ − ⟨β, b⟩`.
pub fn nsp_ba_decomposed<F: Field>(
    phi: &DualAElement<F>,
    psi: &DualBElement<F>,
) -> Result<F, DvbError> {
    require(phi.m == psi.m, "nonstandard pairing", "base points")?;
    require(phi.kappa == psi.kappa, "nonstandard pairing", "C*-components")?;
    psi.check(phi.shape())?;
    Ok(dot(&psi.alpha, &phi.a) - dot(&phi.beta, &psi.b))
}

/// Matrix of `nsp_ba` between basis elements of the fibers of `D*_A` and
/// `D*_B` over a fixed `κ`. Rows: `Φ` with coordinates `(a, β)`; columns:
/// `Ψ` with coordinates `(α, b)`.
pub fn nsp_gram_matrix<F: Field>(
    shape: DvbShape,
    m: &[F],
    kappa: &[F],
) -> Result<Matrix<F>, DvbError> {
    let n = shape.dim_a + shape.dim_b;
    let phi_of = |i: usize| {
        let e: Vec<F> = basis(n, i);
        DualAElement::new(
            m.to_vec(),
            e[..shape.dim_a].to_vec(),
            e[shape.dim_a..].to_vec(),
            kappa.to_vec(),
        )
    };
    let psi_of = |j: usize| {
        let e: Vec<F> = basis(n, j);
        DualBElement::new(
            m.to_vec(),
            kappa.to_vec(),
            e[..shape.dim_a].to_vec(),
            e[shape.dim_a..].to_vec(),
        )
    };
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, nsp_ba(&phi_of(i), &psi_of(j))?);
        }
    }
    Ok(g)
}

/// Finds the `u` (length `unknowns`) for which the affine conditions
/// `residual(u, s) = 0` hold for every sample `s`.
///
/// Each condition is linearized by evaluating it at `u = 0` and `u = e_k`.
/// The first `unknowns` samples form a square system that is solved
/// directly; every sample, including the remaining ones, is then
/// re-checked against the solution.
pub fn solve_affine_conditions<F, S>(
    op: &'static str,
    unknowns: usize,
    samples: &[S],
    residual: impl Fn(&[F], &S) -> Result<F, DvbError>,
) -> Result<Vec<F>, DvbError>
where
    F: Field,
{
    if samples.len() < unknowns {
        return Err(DvbError::Singular { op });
    }
    let origin = zeros::<F>(unknowns);
    let mut rows = Vec::with_capacity(unknowns);
    let mut rhs = Vec::with_capacity(unknowns);
    for s in &samples[..unknowns] {
        let r0 = residual(&origin, s)?;
        let row = (0..unknowns)
            .map(|k| Ok(residual(&basis(unknowns, k), s)? - r0.clone()))
            .collect::<Result<Vec<F>, DvbError>>()?;
        rows.push(row);
        rhs.push(-r0);
    }
    let u = linalg::solve(&Matrix::from_rows(rows), &rhs).ok_or(DvbError::Singular { op })?;

    let worst = samples
        .iter()
        .map(|s| residual(&u, s).map(|r| r.approx().abs()))
        .try_fold(0f64, |acc, r| r.map(|r| acc.max(r)))?;
    let scale = u.iter().fold(1f64, |acc, x| acc.max(x.approx().abs()));
    if !(worst <= 1e-12 * scale) {
        return Err(DvbError::Inconsistent {
            op,
            residual: worst,
        });
    }
    Ok(u)
}

// Basis samples of a coordinate space with blocks of the given sizes, then
// two dense combinations used only to confirm the solution.
fn probe_samples<F: Field>(blocks: &[usize]) -> Vec<Vec<Vec<F>>> {
    let n: usize = blocks.iter().sum();
    let split = |flat: Vec<F>| {
        let mut out = Vec::with_capacity(blocks.len());
        let mut start = 0;
        for &len in blocks {
            out.push(flat[start..start + len].to_vec());
            start += len;
        }
        out
    };
    let mut samples: Vec<Vec<Vec<F>>> = (0..n).map(|i| split(basis(n, i))).collect();
    samples.push(split(vec![F::one(); n]));
    let alternating = (0..n)
        .map(|i| {
            let k = F::from_usize(i + 2).expect("small integer");
            if i % 2 == 0 {
                k
            } else {
                -k
            }
        })
        .collect();
    samples.push(split(alternating));
    samples
}

/// Brute-force solution of the three-term relation
/// `⟨𝔅, Ψ⟩_{C*} + ⟨Φ, d⟩_A = ⟨Ψ, d⟩_B` for `Φ`, over all compatible
/// `Ψ = (κ, α, b)` and `d = (Φ.a, b, c)`.
///
/// Only the pairing operations are used, so the result is an independent
/// check of [`rm_da`].
pub fn solve_theorem31<F: Field>(mb: &IterBCElement<F>) -> Result<DualAElement<F>, DvbError> {
    let s = mb.shape();
    let unpack = |u: &[F]| {
        DualAElement::new(
            mb.m.clone(),
            u[..s.dim_a].to_vec(),
            u[s.dim_a..s.dim_a + s.dim_b].to_vec(),
            u[s.dim_a + s.dim_b..].to_vec(),
        )
    };
    let samples = probe_samples::<F>(&[s.dim_a, s.dim_b, s.dim_c]);
    let u = solve_affine_conditions(
        "three-term relation",
        s.dim_a + s.dim_b + s.dim_c,
        &samples,
        |u, sample| {
            let (alpha, b, c) = (&sample[0], &sample[1], &sample[2]);
            let phi = unpack(u);
            let psi = DualBElement::new(mb.m.clone(), mb.kappa.clone(), alpha.clone(), b.clone());
            let d = DvbElement::new(mb.m.clone(), phi.a.clone(), b.clone(), c.clone());
            Ok(pair_cstar_b(mb, &psi)? + pair_a(&phi, &d)? - pair_b(&psi, &d)?)
        },
    )?;
    Ok(unpack(&u))
}

/// Brute-force `Z_A`: the `𝔅` over `Φ.κ` with
/// `⟨𝔅, Ψ⟩_{C*} = nsp_ab(Φ, Ψ)` for all `Ψ` over `Φ.κ`.
pub fn solve_z_a<F: Field>(phi: &DualAElement<F>) -> Result<IterBCElement<F>, DvbError> {
    let s = phi.shape();
    let unpack = |u: &[F]| {
        IterBCElement::new(
            phi.m.clone(),
            phi.kappa.clone(),
            u[..s.dim_b].to_vec(),
            u[s.dim_b..].to_vec(),
        )
    };
    let samples = probe_samples::<F>(&[s.dim_a, s.dim_b]);
    let u = solve_affine_conditions("Z_A", s.dim_b + s.dim_a, &samples, |u, sample| {
        let psi = DualBElement::new(
            phi.m.clone(),
            phi.kappa.clone(),
            sample[0].clone(),
            sample[1].clone(),
        );
        Ok(pair_cstar_b(&unpack(u), &psi)? - nsp_ab(phi, &psi)?)
    })?;
    Ok(unpack(&u))
}

/// Brute-force `R_DB` as the transpose of `R_DA` over `C*`: the `Ψ` over
/// `𝔄.κ` with `⟨𝔅, Ψ⟩_{C*} = ⟨𝔄, R_DA(𝔅)⟩_{C*}` for all `𝔅` over `𝔄.κ`.
pub fn solve_rm_db<F: Field>(ma: &IterACElement<F>) -> Result<DualBElement<F>, DvbError> {
    let s = ma.shape();
    let unpack = |u: &[F]| {
        DualBElement::new(
            ma.m.clone(),
            ma.kappa.clone(),
            u[..s.dim_a].to_vec(),
            u[s.dim_a..].to_vec(),
        )
    };
    let samples = probe_samples::<F>(&[s.dim_b, s.dim_a]);
    let u = solve_affine_conditions("R_DB", s.dim_a + s.dim_b, &samples, |u, sample| {
        let mb = IterBCElement::new(
            ma.m.clone(),
            ma.kappa.clone(),
            sample[0].clone(),
            sample[1].clone(),
        );
        Ok(pair_cstar_b(&mb, &unpack(u))? - pair_cstar_a(ma, &rm_da(&mb))?)
    })?;
    Ok(unpack(&u))
}
