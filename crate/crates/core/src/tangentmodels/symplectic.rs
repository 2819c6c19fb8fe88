//! Canonical forms on `T*(A)` and `T*(A*)` and their behaviour under `R`.
//!
//! Points are flat coordinates `(q, p)` with `q = (x, fiber)`. The
//! Liouville form is `λ(v) = p · v_q` and the symplectic form is its
//! exterior derivative, `Ω(v1, v2) = v1_p · v2_q − v2_p · v1_q`. Exterior
//! derivatives are taken by jets (pullbacks need jets of jets), never by
//! the closed formula, which serves only as the oracle.

use rand::Rng;

use crate::chartcalc::{check_len, pushforward, ChartError, ChartMap, Jet};
use crate::linalg::dot;
use crate::sampling;
use crate::scalar::{scaled_residual, Analytic};

use super::{MxMap, TrivialBundle};

/// A 1-form on a coordinate space, evaluable over any scalar.
pub trait OneForm {
    fn dim(&self) -> usize;
    fn eval<S: Analytic>(&self, point: &[S], v: &[S]) -> Result<S, ChartError>;
}

/// `λ = p · dq` on `R^{2h}` with `q` the first `h` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Liouville {
    pub half: usize,
}

impl OneForm for Liouville {
    fn dim(&self) -> usize {
        2 * self.half
    }

    fn eval<S: Analytic>(&self, point: &[S], v: &[S]) -> Result<S, ChartError> {
        check_len("Liouville point", self.dim(), point.len())?;
        check_len("Liouville vector", self.dim(), v.len())?;
        Ok(dot(&point[self.half..], &v[..self.half]))
    }
}

/// `R*λ_A`, the Liouville form of `T*(A)` pulled back to `T*(A*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PulledLiouville {
    pub mx: MxMap,
}

impl OneForm for PulledLiouville {
    fn dim(&self) -> usize {
        self.mx.domain_dim()
    }

    fn eval<S: Analytic>(&self, point: &[S], v: &[S]) -> Result<S, ChartError> {
        let image = self.mx.apply(point)?;
        let pushed = pushforward(&self.mx, point, v)?;
        Liouville { half: self.dim() / 2 }.eval(&image, &pushed)
    }
}

/// `θ1 + θ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumForm<A, B>(pub A, pub B);

impl<A: OneForm, B: OneForm> OneForm for SumForm<A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval<S: Analytic>(&self, point: &[S], v: &[S]) -> Result<S, ChartError> {
        Ok(self.0.eval(point, v)? + self.1.eval(point, v)?)
    }
}

/// `dθ(v1, v2) = v1(θ(v2)) − v2(θ(v1))` for constant coordinate fields.
pub fn exterior_derivative<F: OneForm>(theta: &F, point: &[f64], v1: &[f64], v2: &[f64]) -> Result<f64, ChartError> {
    let along = |u: &[f64], w: &[f64]| -> Result<f64, ChartError> {
        let p = Jet::seed_direction(point, u);
        let w: Vec<Jet<f64>> = w.iter().map(|&c| Jet::constant(c)).collect();
        Ok(theta.eval(&p, &w)?.partial(0))
    };
    Ok(along(v1, v2)? - along(v2, v1)?)
}

/// `v1_p · v2_q − v2_p · v1_q`.
pub fn canonical_form(half: usize, v1: &[f64], v2: &[f64]) -> f64 {
    dot(&v1[half..], &v2[..half]) - dot(&v2[half..], &v1[..half])
}

/// `P(x, ψ; χ, Y) = ⟨ψ, Y⟩`: the fiber point of `F` paired with the fiber
/// point of `R(F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossPairing {
    pub mx: MxMap,
}

impl ChartMap for CrossPairing {
    fn domain_dim(&self) -> usize {
        self.mx.domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        1
    }

    fn apply<S: Analytic>(&self, p: &[S]) -> Result<Vec<S>, ChartError> {
        let (n, k) = (self.mx.base_dim, self.mx.fiber_dim);
        let image = self.mx.apply(p)?;
        Ok(vec![dot(&p[n..n + k], &image[n..n + k])])
    }
}

/// Scaled residual of `R*Ω_A = −Ω_{A*}` on `(v1, v2)` at `point`.
pub fn antisymplectic_defect(mx: MxMap, point: &[f64], v1: &[f64], v2: &[f64]) -> Result<f64, ChartError> {
    let pulled = exterior_derivative(&PulledLiouville { mx }, point, v1, v2)?;
    let own = exterior_derivative(&Liouville { half: mx.domain_dim() / 2 }, point, v1, v2)?;
    Ok(scaled_residual(pulled, -own))
}

/// Scaled residual of `R*λ_A + λ_{A*} = dP` on `v` at `point`.
pub fn liouville_defect(mx: MxMap, point: &[f64], v: &[f64]) -> Result<f64, ChartError> {
    let half = mx.domain_dim() / 2;
    let lhs = SumForm(PulledLiouville { mx }, Liouville { half }).eval(point, v)?;
    let dp = pushforward(&CrossPairing { mx }, point, v)?[0];
    Ok(scaled_residual(lhs, dp))
}

/// Worst residuals of the two identities over random points and vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticReport {
    pub samples: usize,
    pub form_residual: f64,
    pub liouville_residual: f64,
}

/// Samples `samples` points of `T*(A*)` (base in the chart box, other
/// coordinates in `[-1, 1]`) with random tangent vectors, and checks both
/// identities at each.
pub fn symplectic_checks(bundle: &TrivialBundle, samples: usize, seed: u64) -> Result<SymplecticReport, ChartError> {
    let mx = MxMap {
        base_dim: bundle.base_dim(),
        fiber_dim: bundle.fiber_dim(),
    };
    let dim = mx.domain_dim();
    let mut report = SymplecticReport {
        samples,
        form_residual: 0.0,
        liouville_residual: 0.0,
    };
    for i in 0..samples {
        let mut rng = sampling::stream(seed, i as u64);
        let mut point = sampling::in_box(&mut rng, bundle.chart());
        point.extend((point.len()..dim).map(|_| rng.gen_range(-1.0..=1.0)));
        let v1: Vec<f64> = sampling::unit_vec(&mut rng, dim);
        let v2: Vec<f64> = sampling::unit_vec(&mut rng, dim);
        report.form_residual = report.form_residual.max(antisymplectic_defect(mx, &point, &v1, &v2)?);
        report.liouville_residual = report.liouville_residual.max(liouville_defect(mx, &point, &v1)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangentmodels::Chart;

    #[test]
    fn jet_exterior_derivative_of_liouville_is_canonical() {
        let point = [0.1, 0.2, -0.3, 0.4];
        let (v1, v2) = ([1.0, 0.5, -0.25, 2.0], [0.0, -1.0, 0.75, 0.5]);
        let d = exterior_derivative(&Liouville { half: 2 }, &point, &v1, &v2).unwrap();
        assert!((d - canonical_form(2, &v1, &v2)).abs() < 1e-15);
    }

    #[test]
    fn cross_pairing_vanishes_on_zero_section() {
        let p = CrossPairing { mx: MxMap { base_dim: 1, fiber_dim: 2 } };
        assert_eq!(p.apply(&[0.3, 0.0, 0.0, 1.0, 2.0, 3.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn mx_is_antisymplectic() {
        for k in 1..=3 {
            let bundle = TrivialBundle::new(Chart::unit(2), k).unwrap();
            let r = symplectic_checks(&bundle, 20, 5).unwrap();
            assert!(r.form_residual < 1e-14 && r.liouville_residual < 1e-14, "{r:?}");
        }
    }
}
