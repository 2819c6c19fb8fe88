//! The cotangent side: the map `R: T*(A*) → T*(A)`, the tangent pairing of
//! `T(A*)` with `T(A)`, the maps `I` and `J*`, the Hamiltonian map of
//! `T*M`, and the squarecap sections of the `T²M` and `T(A)` grids in
//! their cotangent guises.
//!
//! Identifications used throughout, with `A = TM` where it applies:
//!
//! * `T*(A) ≅ D*_A` of `D = T(A)`: `(x, a; p_x, p_a) ↔ (a, β = p_x, κ = p_a)`.
//! * `I: T(A*) → D*_B`: `(x, φ; ẋ, φ̇) ↦ (κ = φ, α = φ̇, b = ẋ)`.
//! * `(D*_B)*_{C*} ≅ T*(A*)`: `(κ, β, a) ↔ (x, κ; β, a)`, the dual of `I`.
//! * `(D*_A)*_{C*} ≅ T(A*)` through `R`: `(κ, α, b) ↔ (x, κ; −b, α)`.

use crate::chartcalc::{check_len, eval, jacobian, lie_bracket, ChartError, ChartMap, SmoothMap};
use crate::dvbcore::{DualAElement, DualBElement, IterACElement, IterBCElement};
use crate::linalg::{dot, neg, scale};
use crate::scalar::{scaled_residual, scaled_residual_vec, Analytic, Real};
use crate::Error;

use super::lifts::{complete_lift_section, horizontal_lift_field, linear_field_section, tangent_lift_section};
use super::{
    Chart, Connection, CotangentPoint, FiberLinearFunction, SectionPairing, TangentPoint,
    TrivialBundle,
};

/// `R(x, ψ; χ, Y) = (x, Y; −χ, ψ)`.
pub fn mx_map<T: Real>(f: &CotangentPoint<T>) -> CotangentPoint<T> {
    CotangentPoint::new(f.base.clone(), f.p_fiber.clone(), neg(&f.p_base), f.fiber.clone())
}

/// `R⁻¹(x, a; p_x, p_a) = (x, p_a; −p_x, a)`.
pub fn mx_inverse<T: Real>(g: &CotangentPoint<T>) -> CotangentPoint<T> {
    CotangentPoint::new(g.base.clone(), g.p_fiber.clone(), neg(&g.p_base), g.fiber.clone())
}

/// `R` on flat coordinates `(x, ψ, χ, Y) ↦ (x, Y, −χ, ψ)`, for jets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MxMap {
    pub base_dim: usize,
    pub fiber_dim: usize,
}

impl ChartMap for MxMap {
    fn domain_dim(&self) -> usize {
        2 * (self.base_dim + self.fiber_dim)
    }

    fn codomain_dim(&self) -> usize {
        self.domain_dim()
    }

    fn apply<S: Analytic>(&self, p: &[S]) -> Result<Vec<S>, ChartError> {
        check_len("cotangent point", self.domain_dim(), p.len())?;
        let (n, k) = (self.base_dim, self.fiber_dim);
        let (x, psi) = (&p[..n], &p[n..n + k]);
        let (chi, y) = (&p[n + k..2 * n + k], &p[2 * n + k..]);
        Ok([x.to_vec(), y.to_vec(), neg(chi), psi.to_vec()].concat())
    }
}

fn check_over_same_tangent<T: Real>(a: &TangentPoint<T>, b: &TangentPoint<T>) -> Result<(), ChartError> {
    if a.base != b.base || a.base_velocity != b.base_velocity {
        return Err(ChartError::Domain(
            "tangent pairing needs elements over the same point of TM".into(),
        ));
    }
    check_len("fiber", a.fiber.len(), b.fiber.len())?;
    check_len("fiber velocity", a.fiber_velocity.len(), b.fiber_velocity.len())
}

/// `⟪(x, φ; ẋ, φ̇), (x, a; ẋ, ȧ)⟫ = ⟨φ̇, a⟩ + ⟨φ, ȧ⟩`.
pub fn tangent_pairing<T: Real>(xc: &TangentPoint<T>, xi: &TangentPoint<T>) -> Result<T, ChartError> {
    check_over_same_tangent(xc, xi)?;
    Ok(dot(&xc.fiber_velocity, &xi.fiber) + dot(&xc.fiber, &xi.fiber_velocity))
}

/// `⟪𝔛, ξ⟫ = 𝔛(ℓ_μ) + ξ(ℓ_φ) − ẋ(⟨φ, μ⟩)` for sections `μ` of `A` and
/// `φ` of `A*` through the fiber points of `ξ` and `𝔛`.
pub fn tangent_pairing_via_sections(
    xc: &TangentPoint<f64>,
    xi: &TangentPoint<f64>,
    mu: &SmoothMap,
    phi: &SmoothMap,
) -> Result<f64, ChartError> {
    check_over_same_tangent(xc, xi)?;
    let x = &xc.base;
    if scaled_residual_vec(&eval(mu, x)?, &xi.fiber) > 1e-12
        || scaled_residual_vec(&eval(phi, x)?, &xc.fiber) > 1e-12
    {
        return Err(ChartError::Domain(
            "extending sections must pass through the fiber points".into(),
        ));
    }
    let (p, v) = xc.split();
    let on_dual = crate::chartcalc::pushforward(&FiberLinearFunction::new(mu.clone()), &p, &v)?[0];
    let (p, v) = xi.split();
    let on_bundle = crate::chartcalc::pushforward(&FiberLinearFunction::new(phi.clone()), &p, &v)?[0];
    let pairing = SectionPairing::new(phi.clone(), mu.clone())?;
    let along_base = crate::chartcalc::pushforward(&pairing, x, &xc.base_velocity)?[0];
    Ok(on_dual + on_bundle - along_base)
}

/// Residual of `⟨F, 𝔛⟩ + ⟨R(F), ξ⟩ = ⟪𝔛, ξ⟫` for `F ∈ T*(A*)` at the point
/// of `𝔛 ∈ T(A*)`, and `ξ ∈ T(A)` at the point `R(F)` lies over.
pub fn mx_defect(f: &CotangentPoint<f64>, xc: &TangentPoint<f64>, xi: &TangentPoint<f64>) -> Result<f64, ChartError> {
    let lhs = f.pair(xc)? + mx_map(f).pair(xi)?;
    Ok(scaled_residual(lhs, tangent_pairing(xc, xi)?))
}

/// `I(𝔛)` as an element of `D*_B` for `D = T(A)`, so that
/// `⟨I(𝔛), η⟩_B = ⟪𝔛, η⟫`.
pub fn i_map<T: Real>(xc: &TangentPoint<T>) -> DualBElement<T> {
    DualBElement::new(
        xc.base.clone(),
        xc.fiber.clone(),
        xc.fiber_velocity.clone(),
        xc.base_velocity.clone(),
    )
}

/// `J*: T•(TM) → T*(TM)`, the dual of the canonical involution:
/// `⟨J*(Ψ), d⟩_A = ⟨Ψ, J(d)⟩_B`, i.e. `(κ, α, b) ↦ (a = b, β = α, κ)`.
pub fn dual_involution<T: Real>(psi: &DualBElement<T>) -> DualAElement<T> {
    DualAElement::new(psi.m.clone(), psi.b.clone(), psi.alpha.clone(), psi.kappa.clone())
}

pub fn cotangent_as_dual_a<T: Real>(p: &CotangentPoint<T>) -> DualAElement<T> {
    DualAElement::new(p.base.clone(), p.fiber.clone(), p.p_base.clone(), p.p_fiber.clone())
}

pub fn dual_a_as_cotangent<T: Real>(phi: &DualAElement<T>) -> CotangentPoint<T> {
    CotangentPoint::new(phi.m.clone(), phi.a.clone(), phi.beta.clone(), phi.kappa.clone())
}

/// `(κ, β, a) ↦ (x, κ; β, a)`: a covector on `A*`.
pub fn iter_bc_as_covector<T: Real>(mb: &IterBCElement<T>) -> CotangentPoint<T> {
    CotangentPoint::new(mb.m.clone(), mb.kappa.clone(), mb.beta.clone(), mb.a.clone())
}

/// `(κ, α, b) ↦ (x, κ; −b, α)`: the tangent vector `𝔛` on `A*` with
/// `⟨𝔛, F⟩ = ⟨𝔄, R(F)⟩_{C*}` for all `F ∈ T*(A*)` over `κ`.
pub fn iter_ac_as_vector<T: Real>(ma: &IterACElement<T>) -> TangentPoint<T> {
    TangentPoint::new(ma.m.clone(), ma.kappa.clone(), neg(&ma.b), ma.alpha.clone())
}

/// Sign convention for the Hamiltonian map of `T*M`. [`Sharp::PINNED`] is
/// the one used everywhere; the other exists to show that the final
/// pairing is sensitive to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sharp {
    Pinned,
    Flipped,
}

impl Sharp {
    pub const PINNED: Sharp = Sharp::Pinned;

    pub fn sign<T: Real>(self) -> T {
        match self {
            Sharp::Pinned => T::one(),
            Sharp::Flipped => -T::one(),
        }
    }

    /// `(x, p; dx: u, dp: w) ↦ (x, p; ẋ = s w, ṗ = −s u)`.
    pub fn apply<T: Real>(self, f: &CotangentPoint<T>) -> TangentPoint<T> {
        let s: T = self.sign();
        TangentPoint::new(
            f.base.clone(),
            f.fiber.clone(),
            scale(&s, &f.p_fiber),
            scale(&-s, &f.p_base),
        )
    }
}

/// Scaled residual of `R = J* ∘ I ∘ ♯` at `F ∈ T*(T*M)`.
pub fn diagram27_defect(f: &CotangentPoint<f64>, sharp: Sharp) -> f64 {
    let direct = mx_map(f);
    let composed = dual_a_as_cotangent(&dual_involution(&i_map(&sharp.apply(f))));
    scaled_residual_vec(&direct.flat(), &composed.flat())
}

/// `dℓ_Y` at `(x, p)`: `(DYᵀ p, Y)`, computed by jets of `ℓ_Y(x, p) = ⟨p, Y(x)⟩`.
pub fn squarecap_ty<T: Real>(y_field: &SmoothMap, x: &[T], p: &[T]) -> Result<CotangentPoint<T>, ChartError> {
    differential_of_linear(y_field, x, p)
}

/// `T(Y)^⊓(p)` computed in `(T•(TM))*_{T*M}` and carried to `T*(T*M)`.
pub fn squarecap_ty_abstract<T: Real>(y_field: &SmoothMap, x: &[T], p: &[T]) -> Result<CotangentPoint<T>, ChartError> {
    let tm = TrivialBundle::tangent(Chart::unit(x.len()));
    let cap = tangent_lift_section(&tm, y_field)?.squarecap(x, p)?;
    Ok(iter_bc_as_covector(&cap))
}

fn differential_of_linear<T: Real>(s: &SmoothMap, x: &[T], k: &[T]) -> Result<CotangentPoint<T>, ChartError> {
    check_len("covector", s.codomain_dim(), k.len())?;
    let point = [x.to_vec(), k.to_vec()].concat();
    let grad = jacobian(&FiberLinearFunction::new(s.clone()), &point)?;
    let row = grad.row(0);
    let n = x.len();
    Ok(CotangentPoint::new(x.to_vec(), k.to_vec(), row[..n].to_vec(), row[n..].to_vec()))
}

/// `X̃^⊓(p) = −♯(dℓ_X)`, which for the pinned sign is `(−X, DXᵀ p)`.
pub fn squarecap_complete_lift<T: Real>(
    x_field: &SmoothMap,
    x: &[T],
    p: &[T],
    sharp: Sharp,
) -> Result<TangentPoint<T>, ChartError> {
    let h = sharp.apply(&differential_of_linear(x_field, x, p)?);
    Ok(TangentPoint::new(h.base, h.fiber, neg(&h.base_velocity), neg(&h.fiber_velocity)))
}

/// `X̃^⊓(p)` computed in `(T*(TM))*_{T*M}` and carried to `T(T*M)`.
pub fn squarecap_complete_lift_abstract<T: Real>(
    x_field: &SmoothMap,
    x: &[T],
    p: &[T],
) -> Result<TangentPoint<T>, ChartError> {
    let cap = complete_lift_section(x.len(), x_field)?.squarecap(x, p)?;
    Ok(iter_ac_as_vector(&cap))
}

/// `(⟨dℓ_Y, −H_{ℓ_X}⟩, −⟨p, [X, Y]⟩)` at `(x, p)`.
pub fn section52_final_pairing(
    x_field: &SmoothMap,
    y_field: &SmoothMap,
    x: &[f64],
    p: &[f64],
    sharp: Sharp,
) -> Result<(f64, f64), ChartError> {
    let dl = squarecap_ty(y_field, x, p)?;
    let h = squarecap_complete_lift(x_field, x, p, sharp)?;
    let bracket = lie_bracket(x_field, y_field, x)?;
    Ok((dl.pair(&h)?, -dot(p, &bracket)))
}

/// `X^{H*}(x, κ) = (x, κ; X, ω(X)ᵀ κ)`, the linear vector field on `A*`
/// with `X^{H*}(ℓ_μ) = ℓ_{∇_X μ}`.
pub fn dual_horizontal_lift<T: Real>(
    conn: &Connection,
    x_field: &SmoothMap,
    x: &[T],
    kappa: &[T],
) -> Result<TangentPoint<T>, ChartError> {
    check_len("covector", conn.bundle().fiber_dim(), kappa.len())?;
    let v = eval(x_field, x)?;
    let w = conn.omega_at(x, &v)?;
    Ok(TangentPoint::new(x.to_vec(), kappa.to_vec(), v, w.tr_mul_vec(kappa)))
}

/// `(X^H)^⊓(κ) = −X^{H*}(κ)`.
pub fn squarecap_horizontal<T: Real>(
    conn: &Connection,
    x_field: &SmoothMap,
    x: &[T],
    kappa: &[T],
) -> Result<TangentPoint<T>, ChartError> {
    let h = dual_horizontal_lift(conn, x_field, x, kappa)?;
    Ok(TangentPoint::new(h.base, h.fiber, neg(&h.base_velocity), neg(&h.fiber_velocity)))
}

/// `(X^H)^⊓(κ)` computed in `(D*_A)*_{A*}` for `D = T(A)` and carried to
/// `T(A*)`.
pub fn squarecap_horizontal_abstract<T: Real>(
    conn: &Connection,
    x_field: &SmoothMap,
    x: &[T],
    kappa: &[T],
) -> Result<TangentPoint<T>, Error> {
    let section = linear_field_section(conn.bundle(), &horizontal_lift_field(conn, x_field)?)?;
    Ok(iter_ac_as_vector(&section.squarecap(x, kappa)?))
}

/// `(⟨−X^{H*}, dℓ_μ⟩, −⟨κ, ∇_X μ⟩)` at `(x, κ)`.
pub fn verify_53(
    conn: &Connection,
    x_field: &SmoothMap,
    mu: &SmoothMap,
    x: &[f64],
    kappa: &[f64],
) -> Result<(f64, f64), ChartError> {
    let dl = differential_of_linear(mu, x, kappa)?;
    let cap = squarecap_horizontal(conn, x_field, x, kappa)?;
    let rhs = -dot(kappa, &conn.covariant_derivative(x_field, mu, x)?);
    Ok((dl.pair(&cap)?, rhs))
}

/// `dℓ_μ` at `(x, κ)`: the squarecap of `T(μ)` in its cotangent guise.
pub fn squarecap_tmu<T: Real>(mu: &SmoothMap, x: &[T], kappa: &[T]) -> Result<CotangentPoint<T>, ChartError> {
    differential_of_linear(mu, x, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartcalc::MatrixMap;
    use crate::linalg::{rank, Matrix};

    fn field(dim: usize, comps: &[&str]) -> SmoothMap {
        SmoothMap::parse(dim, comps).unwrap()
    }

    #[test]
    fn mx_local_formula() {
        let f = CotangentPoint::new(vec![0.1], vec![2.0], vec![3.0], vec![5.0]);
        let g = mx_map(&f);
        assert_eq!(g, CotangentPoint::new(vec![0.1], vec![5.0], vec![-3.0], vec![2.0]));
        assert_eq!(mx_inverse(&g), f);
        let flat = MxMap { base_dim: 1, fiber_dim: 1 }.apply(&f.flat()).unwrap();
        assert_eq!(flat, g.flat());
    }

    #[test]
    fn tangent_pairing_example() {
        let xc = TangentPoint::new(vec![0.0], vec![2.0], vec![1.0], vec![3.0]);
        let xi = TangentPoint::new(vec![0.0], vec![5.0], vec![1.0], vec![7.0]);
        assert_eq!(tangent_pairing(&xc, &xi).unwrap(), 29.0);
        let elsewhere = TangentPoint::new(vec![0.0], vec![5.0], vec![2.0], vec![7.0]);
        assert!(tangent_pairing(&xc, &elsewhere).is_err());
    }

    #[test]
    fn tangent_pairing_is_section_independent() {
        let x = [0.4, -0.3];
        let xc = TangentPoint::new(x.to_vec(), vec![0.5, -1.0], vec![0.7, 0.2], vec![1.5, 0.25]);
        let xi = TangentPoint::new(x.to_vec(), vec![-0.3, 0.8], vec![0.7, 0.2], vec![0.9, -0.6]);
        let direct = tangent_pairing(&xc, &xi).unwrap();
        for (mu, phi) in [
            (["x0*x1", "x1^2"], ["sin(x0)", "x0 - x1"]),
            (["0", "0"], ["0", "0"]),
            (["exp(x0)", "x0*x0*x1"], ["x1", "cos(x1)"]),
        ] {
            let mu = super::super::extend_through(&field(2, &mu), &x, &xi.fiber).unwrap();
            let phi = super::super::extend_through(&field(2, &phi), &x, &xc.fiber).unwrap();
            let via = tangent_pairing_via_sections(&xc, &xi, &mu, &phi).unwrap();
            assert!((via - direct).abs() < 1e-14, "{via} vs {direct}");
        }
    }

    #[test]
    fn i_map_pairs_like_the_tangent_pairing() {
        let xc = TangentPoint::new(vec![0.0], vec![2.0], vec![1.0], vec![3.0]);
        let xi = TangentPoint::new(vec![0.0], vec![5.0], vec![1.0], vec![7.0]);
        let pair = crate::dvbcore::pair_b(&i_map(&xc), &xi.to_dvb()).unwrap();
        assert_eq!(pair, 29.0);
        // full rank over the fibers above a fixed ẋ
        let k = 2;
        let mut g = Matrix::zeros(2 * k, 2 * k);
        for i in 0..2 * k {
            for j in 0..2 * k {
                let e = |n: usize| crate::linalg::basis::<f64>(2 * k, n);
                let (u, v) = (e(i), e(j));
                let xc = TangentPoint::new(vec![0.0], u[..k].to_vec(), vec![1.0], u[k..].to_vec());
                let xi = TangentPoint::new(vec![0.0], v[..k].to_vec(), vec![1.0], v[k..].to_vec());
                g.set(i, j, tangent_pairing(&xc, &xi).unwrap());
            }
        }
        assert_eq!(rank(&g, 1e-12), 2 * k);
    }

    #[test]
    fn diagram_commutes_only_for_the_pinned_sign() {
        let f = CotangentPoint::new(vec![0.1, 0.2], vec![0.3, -0.4], vec![0.5, 0.6], vec![-0.7, 0.8]);
        assert_eq!(diagram27_defect(&f, Sharp::PINNED), 0.0);
        assert!(diagram27_defect(&f, Sharp::Flipped) > 0.1);
    }

    #[test]
    fn squarecap_ty_examples() {
        let c = field(2, &["2", "3"]);
        let d = squarecap_ty(&c, &[0.1, 0.2], &[1.0, -1.0]).unwrap();
        assert_eq!((d.p_base, d.p_fiber), (vec![0.0, 0.0], vec![2.0, 3.0]));
        let y = field(2, &["0", "x0"]);
        let (x, p) = ([0.3, 0.9], [0.25, -0.5]);
        let d = squarecap_ty(&y, &x, &p).unwrap();
        assert_eq!((d.p_base.clone(), d.p_fiber.clone()), (vec![-0.5, 0.0], vec![0.0, 0.3]));
        assert_eq!(squarecap_ty_abstract(&y, &x, &p).unwrap(), d);
    }

    #[test]
    fn complete_lift_squarecap_routes_agree() {
        let xf = field(2, &["x0*x1", "sin(x1)"]);
        let (x, p) = ([0.3, 0.9], [0.25, -0.5]);
        let closed = squarecap_complete_lift(&xf, &x, &p, Sharp::PINNED).unwrap();
        let abstract_ = squarecap_complete_lift_abstract(&xf, &x, &p).unwrap();
        assert!(scaled_residual_vec(&closed.base_velocity, &abstract_.base_velocity) < 1e-15);
        assert!(scaled_residual_vec(&closed.fiber_velocity, &abstract_.fiber_velocity) < 1e-15);
        let constant = squarecap_complete_lift(&field(2, &["1", "2"]), &x, &p, Sharp::PINNED).unwrap();
        assert_eq!(constant.fiber_velocity, vec![0.0, 0.0]);
    }

    #[test]
    fn iter_ac_identification_goes_through_mx() {
        let ma = IterACElement::new(vec![0.2], vec![1.5], vec![-0.5], vec![2.0]);
        let v = iter_ac_as_vector(&ma);
        for (u, w) in [(1.0, 0.0), (0.0, 1.0), (0.3, -0.7)] {
            let f = CotangentPoint::new(vec![0.2], vec![1.5], vec![u], vec![w]);
            let lhs = f.pair(&v).unwrap();
            let rhs = crate::dvbcore::pair_cstar_a(&ma, &cotangent_as_dual_a(&mx_map(&f))).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn final_pairings() {
        let xf = field(2, &["1", "0"]);
        let yf = field(2, &["0", "x0"]);
        let (x, p) = ([0.3, 0.9], [0.25, -0.5]);
        let (lhs, rhs) = section52_final_pairing(&xf, &yf, &x, &p, Sharp::PINNED).unwrap();
        assert_eq!((lhs, rhs), (0.5, 0.5));
        let (flipped, _) = section52_final_pairing(&xf, &yf, &x, &p, Sharp::Flipped).unwrap();
        assert_eq!(flipped, -0.5);

        let bundle = TrivialBundle::new(Chart::unit(2), 1).unwrap();
        let flat = Connection::flat(bundle.clone());
        let c = field(2, &["4"]);
        assert_eq!(verify_53(&flat, &xf, &c, &x, &[2.0]).unwrap(), (0.0, 0.0));
        let mu = field(2, &["x0*x1"]);
        let (lhs, _) = verify_53(&flat, &xf, &mu, &x, &[2.0]).unwrap();
        assert!((lhs + 2.0 * 0.9).abs() < 1e-15);

        let conn = Connection::new(
            bundle,
            vec![
                MatrixMap::parse(2, 1, 1, &["x1"]).unwrap(),
                MatrixMap::parse(2, 1, 1, &["x0^2"]).unwrap(),
            ],
        )
        .unwrap();
        let (lhs, rhs) = verify_53(&conn, &yf, &mu, &x, &[2.0]).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
        let closed = squarecap_horizontal(&conn, &yf, &x, &[2.0]).unwrap();
        let abstract_ = squarecap_horizontal_abstract(&conn, &yf, &x, &[2.0]).unwrap();
        assert!(scaled_residual_vec(&closed.flat(), &abstract_.flat()) < 1e-15);
    }
}
