//! The verification suites. Each check draws one independent random stream
//! per sample index, so results do not depend on evaluation order.

use rand::Rng;
use rayon::prelude::*;

use dvbwarp::chartcalc::{eval, lie_bracket, pushforward};
use dvbwarp::dvbcore::{
    nsp_ab, nsp_ba, nsp_ba_decomposed, nsp_ba_with, rm_da, solve_theorem31, solve_z_a, z_a,
    DualAElement, DvbElement, DvbShape, IterBCElement,
};
use dvbwarp::sampling::{self, SampleRng};
use dvbwarp::scalar::{scaled_residual, scaled_residual_vec};
use dvbwarp::tangentmodels::{
    antisymplectic_defect, bracket_grid, connection_grid, covariant_derivative_via_warp,
    diagram27_defect, extend_through, lie_bracket_via_warp, liouville_defect, mx_defect, mx_map,
    section52_final_pairing, squarecap_complete_lift, squarecap_complete_lift_abstract,
    squarecap_horizontal, squarecap_horizontal_abstract, squarecap_ty, squarecap_ty_abstract,
    tangent_pairing, tangent_pairing_via_sections, verify_53, Chart, Connection, CotangentPoint,
    MxMap, Sharp, TangentPoint, TrivialBundle,
};
use dvbwarp::{ChartMap, SmoothMap};

use crate::spec::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Theorem31,
    Theorem51,
    Bracket,
    Connection,
    Mx,
    Diagram27,
    Section52,
    Section53,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Theorem31,
        Suite::Theorem51,
        Suite::Bracket,
        Suite::Connection,
        Suite::Mx,
        Suite::Diagram27,
        Suite::Section52,
        Suite::Section53,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem31 => "theorem31",
            Suite::Theorem51 => "theorem51",
            Suite::Bracket => "bracket",
            Suite::Connection => "connection",
            Suite::Mx => "mx",
            Suite::Diagram27 => "diagram27",
            Suite::Section52 => "section52",
            Suite::Section53 => "section53",
        }
    }
}

/// Whether a check passes by staying under the tolerance, or (for sign
/// guards) by exceeding it somewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    AtMost,
    Exceeds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub anchor: &'static str,
    pub samples: usize,
    pub expect: Expect,
    /// `None` when no sample produced a value.
    pub max_residual: Option<f64>,
    pub failures: usize,
    /// First few per-sample errors, as `sample i: message`.
    pub errors: Vec<String>,
    pub pass: bool,
    pub witness: Option<Witness>,
}

type Sample = Result<f64, String>;

const MAX_ERRORS: usize = 5;

// FNV-1a: a stable per-check salt, so checks draw unrelated streams.
fn salt(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn sweep<F>(p: &Problem, name: String, anchor: &'static str, expect: Expect, f: F) -> CheckResult
where
    F: Fn(&mut SampleRng) -> Sample + Sync,
{
    let seed = p.seed ^ salt(&name);
    let outcomes: Vec<Sample> = (0..p.samples)
        .into_par_iter()
        .map(|i| f(&mut sampling::stream(seed, i as u64)))
        .collect();

    let mut max: Option<f64> = None;
    let mut failures = 0;
    let mut errors = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        match o {
            Ok(r) => {
                let r = if r.is_nan() { f64::INFINITY } else { *r };
                max = Some(max.map_or(r, |m| m.max(r)));
                if expect == Expect::AtMost && r > p.tolerance {
                    failures += 1;
                }
            }
            Err(e) => {
                failures += 1;
                if errors.len() < MAX_ERRORS {
                    errors.push(format!("sample {i}: {e}"));
                }
            }
        }
    }
    let pass = match expect {
        Expect::AtMost => failures == 0,
        Expect::Exceeds => errors.is_empty() && max.is_some_and(|m| m > p.tolerance),
    };
    if expect == Expect::Exceeds && !pass && errors.is_empty() {
        failures = p.samples;
    }
    CheckResult {
        name,
        anchor,
        samples: p.samples,
        expect,
        max_residual: max,
        failures,
        errors,
        pass,
        witness: None,
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn vec_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == b.len() {
        scaled_residual_vec(a, b)
    } else {
        f64::INFINITY
    }
}

pub fn run_suite(p: &Problem, suite: Suite) -> Vec<CheckResult> {
    match suite {
        Suite::Theorem31 => theorem31(p),
        Suite::Theorem51 => theorem51(p),
        Suite::Bracket => bracket(p),
        Suite::Connection => connection(p),
        Suite::Mx => mx(p),
        Suite::Diagram27 => diagram27(p),
        Suite::Section52 => section52(p),
        Suite::Section53 => section53(p),
    }
}

fn shape_for(p: &Problem, r: &mut SampleRng, max_fiber: usize) -> DvbShape {
    if p.shapes.is_empty() {
        sampling::shape(r, max_fiber, 3)
    } else {
        p.shapes[r.gen_range(0..p.shapes.len())]
    }
}

fn flat_a(phi: &DualAElement<f64>) -> Vec<f64> {
    [phi.a.clone(), phi.beta.clone(), phi.kappa.clone()].concat()
}

fn flat_bc(mb: &IterBCElement<f64>) -> Vec<f64> {
    [mb.kappa.clone(), mb.beta.clone(), mb.a.clone()].concat()
}

fn theorem31(p: &Problem) -> Vec<CheckResult> {
    vec![
        sweep(p, "theorem31.rm_da".into(), "duality of the iterated duals: three-term relation solved by brute force", Expect::AtMost, |r| {
            let s = shape_for(p, r, 4);
            let mb = sampling::iter_bc::<f64, _>(r, s);
            let phi = solve_theorem31(&mb).map_err(err)?;
            Ok(scaled_residual_vec(&flat_a(&phi), &flat_a(&rm_da(&mb))))
        }),
        sweep(p, "theorem31.nsp".into(), "nonstandard pairing: independent of the auxiliary element, closed form, AB = -BA", Expect::AtMost, |r| {
            let s = shape_for(p, r, 4);
            let phi = sampling::dual_a::<f64, _>(r, s);
            let psi = sampling::dual_b_over(r, s, &phi.m, &phi.kappa);
            let d1 = DvbElement::new(phi.m.clone(), phi.a.clone(), psi.b.clone(), sampling::unit_vec(r, s.dim_c));
            let d2 = DvbElement { c: sampling::unit_vec(r, s.dim_c), ..d1.clone() };
            let v1 = nsp_ba_with(&phi, &psi, &d1).map_err(err)?;
            let v2 = nsp_ba_with(&phi, &psi, &d2).map_err(err)?;
            let ba = nsp_ba(&phi, &psi).map_err(err)?;
            let closed = nsp_ba_decomposed(&phi, &psi).map_err(err)?;
            let ab = nsp_ab(&phi, &psi).map_err(err)?;
            Ok(scaled_residual(v1, v2).max(scaled_residual(ba, closed)).max(scaled_residual(ab, -ba)))
        }),
        sweep(p, "theorem31.z_a".into(), "Z_A realizes the AB pairing through the pairing over C*", Expect::AtMost, |r| {
            let s = shape_for(p, r, 4);
            let phi = sampling::dual_a::<f64, _>(r, s);
            let z = solve_z_a(&phi).map_err(err)?;
            Ok(scaled_residual_vec(&flat_bc(&z), &flat_bc(&z_a(&phi))))
        }),
    ]
}

fn theorem51(p: &Problem) -> Vec<CheckResult> {
    let setup = |r: &mut SampleRng| {
        let mut s = shape_for(p, r, 3);
        s.base_dim = s.base_dim.max(1);
        let grid = sampling::grid(r, s, 2);
        let m: Vec<f64> = sampling::unit_vec(r, s.base_dim);
        let kappa: Vec<f64> = sampling::unit_vec(r, s.dim_c);
        (s, grid, m, kappa)
    };
    vec![
        sweep(p, "theorem51".into(), "squarecap pairing of a grid equals minus the warp", Expect::AtMost, |r| {
            let (_, grid, m, kappa) = setup(r);
            let (l, rr) = grid.verify_theorem51(&m, &kappa).map_err(err)?;
            Ok(scaled_residual(l, rr))
        }),
        sweep(p, "theorem51.swap".into(), "interchanging the two sections negates both sides", Expect::AtMost, |r| {
            let (_, grid, m, kappa) = setup(r);
            let (l, rr) = grid.verify_theorem51(&m, &kappa).map_err(err)?;
            let (ls, rs) = grid.interchanged().verify_theorem51(&m, &kappa).map_err(err)?;
            Ok(scaled_residual(ls, -l).max(scaled_residual(rs, -rr)))
        }),
        sweep(p, "theorem51.dual_choice".into(), "intermediate dual element: free core slot does not matter", Expect::AtMost, |r| {
            let (s, grid, m, kappa) = setup(r);
            let pg = grid.at(&m).map_err(err)?;
            let a1: Vec<f64> = sampling::unit_vec(r, s.dim_a);
            let a2: Vec<f64> = sampling::unit_vec(r, s.dim_a);
            Ok(scaled_residual(
                pg.duality_chain(&kappa, &a1).map_err(err)?,
                pg.duality_chain(&kappa, &a2).map_err(err)?,
            ))
        }),
    ]
}

/// Ordered pairs of distinct declared fields.
fn field_pairs(p: &Problem) -> Vec<(&str, &SmoothMap, &str, &SmoothMap)> {
    let mut out = Vec::new();
    for (xn, x) in &p.fields {
        for (yn, y) in &p.fields {
            if xn != yn {
                out.push((xn.as_str(), x, yn.as_str(), y));
            }
        }
    }
    out
}

fn bracket(p: &Problem) -> Vec<CheckResult> {
    const ANCHOR: &str = "warp of the tangent-lift / complete-lift grid on T²M is the Lie bracket";
    let n = p.chart.dim();
    let mut checks: Vec<CheckResult> = field_pairs(p)
        .into_iter()
        .map(|(xn, x, yn, y)| {
            let mut c = sweep(p, format!("bracket[{xn},{yn}]"), ANCHOR, Expect::AtMost, |r| {
                let m = sampling::in_box(r, &p.chart);
                let w: Vec<f64> = lie_bracket_via_warp(x, y, &m).map_err(err)?;
                Ok(vec_gap(&w, &lie_bracket(x, y, &m).map_err(err)?))
            });
            let m = sampling::in_box(&mut sampling::stream(p.seed ^ salt(&c.name), 0), &p.chart);
            if let (Ok(lhs), Ok(rhs)) = (lie_bracket_via_warp::<f64>(x, y, &m), lie_bracket(x, y, &m)) {
                c.witness = Some(Witness { point: m, lhs, rhs });
            }
            c
        })
        .collect();
    checks.push(sweep(p, "bracket.random".into(), ANCHOR, Expect::AtMost, |r| {
        let x = sampling::vector_field(r, n, 3);
        let y = sampling::vector_field(r, n, 3);
        let m = sampling::in_box(r, &p.chart);
        let w: Vec<f64> = lie_bracket_via_warp(&x, &y, &m).map_err(err)?;
        Ok(vec_gap(&w, &lie_bracket(&x, &y, &m).map_err(err)?))
    }));
    checks
}

fn fiber_dim(p: &Problem, r: &mut SampleRng) -> usize {
    p.connection
        .as_ref()
        .map(|c| c.bundle().fiber_dim())
        .or_else(|| p.sections.first().map(|(_, s)| s.codomain_dim()))
        .unwrap_or_else(|| r.gen_range(1..=3))
}

fn random_connection(p: &Problem, r: &mut SampleRng) -> Connection {
    let k = r.gen_range(1..=3);
    let bundle = TrivialBundle::new(p.chart.clone(), k).expect("positive fiber");
    sampling::connection(r, &bundle, 2)
}

fn connection(p: &Problem) -> Vec<CheckResult> {
    const ANCHOR: &str = "warp of the tangent-lift / horizontal-lift grid on T(A) is the covariant derivative";
    let n = p.chart.dim();
    let mut checks = Vec::new();
    if let Some(conn) = &p.connection {
        for (zn, z) in &p.fields {
            for (mn, mu) in &p.sections {
                checks.push(sweep(p, format!("connection[{zn},{mn}]"), ANCHOR, Expect::AtMost, |r| {
                    let m = sampling::in_box(r, &p.chart);
                    let w: Vec<f64> = covariant_derivative_via_warp(conn, z, mu, &m).map_err(err)?;
                    Ok(vec_gap(&w, &conn.covariant_derivative(z, mu, &m).map_err(err)?))
                }));
            }
        }
    }
    checks.push(sweep(p, "connection.random".into(), ANCHOR, Expect::AtMost, |r| {
        let conn = random_connection(p, r);
        let k = conn.bundle().fiber_dim();
        let z = sampling::vector_field(r, n, 2);
        let mu = sampling::polynomial_map(r, n, k, 2);
        let m = sampling::in_box(r, &p.chart);
        let w: Vec<f64> = covariant_derivative_via_warp(&conn, &z, &mu, &m).map_err(err)?;
        Ok(vec_gap(&w, &conn.covariant_derivative(&z, &mu, &m).map_err(err)?))
    }));
    checks.push(sweep(p, "connection.flat".into(), "flat connection: the warp is the directional derivative", Expect::AtMost, |r| {
        let k = fiber_dim(p, r);
        let conn = Connection::flat(TrivialBundle::new(p.chart.clone(), k).map_err(err)?);
        let z = sampling::vector_field(r, n, 2);
        let mu = sampling::polynomial_map(r, n, k, 2);
        let m = sampling::in_box(r, &p.chart);
        let w: Vec<f64> = covariant_derivative_via_warp(&conn, &z, &mu, &m).map_err(err)?;
        let zm: Vec<f64> = eval(&z, &m).map_err(err)?;
        Ok(vec_gap(&w, &pushforward(&mu, &m, &zm).map_err(err)?))
    }));
    checks
}

fn cotangent_point(r: &mut SampleRng, chart: &Chart, k: usize) -> CotangentPoint<f64> {
    let n = chart.dim();
    CotangentPoint::new(
        sampling::in_box(r, chart),
        sampling::unit_vec(r, k),
        sampling::unit_vec(r, n),
        sampling::unit_vec(r, k),
    )
}

fn mx(p: &Problem) -> Vec<CheckResult> {
    let n = p.chart.dim();
    // F ∈ T*(A*), 𝔛 ∈ T(A*) over F's point, ξ ∈ T(A) over R(F)'s point.
    let compatible = |r: &mut SampleRng| {
        let k = fiber_dim(p, r);
        let f = cotangent_point(r, &p.chart, k);
        let xdot: Vec<f64> = sampling::unit_vec(r, n);
        let xc = TangentPoint::new(f.base.clone(), f.fiber.clone(), xdot.clone(), sampling::unit_vec(r, k));
        let xi = TangentPoint::new(f.base.clone(), mx_map(&f).fiber, xdot, sampling::unit_vec(r, k));
        (k, f, xc, xi)
    };
    let flat_point = |r: &mut SampleRng| {
        let k = fiber_dim(p, r);
        let mx = MxMap { base_dim: n, fiber_dim: k };
        let point = cotangent_point(r, &p.chart, k).flat();
        (mx, point)
    };
    vec![
        sweep(p, "mx.relation".into(), "defining relation of R: <F, X> + <R(F), xi> = tangent pairing", Expect::AtMost, |r| {
            let (_, f, xc, xi) = compatible(r);
            mx_defect(&f, &xc, &xi).map_err(err)
        }),
        sweep(p, "mx.section_independence".into(), "tangent pairing does not depend on the extending sections", Expect::AtMost, |r| {
            let (k, _, xc, xi) = compatible(r);
            let closed = tangent_pairing(&xc, &xi).map_err(err)?;
            let mut worst = 0.0f64;
            for _ in 0..3 {
                let mu = extend_through(&sampling::polynomial_map(r, n, k, 2), &xi.base, &xi.fiber).map_err(err)?;
                let phi = extend_through(&sampling::polynomial_map(r, n, k, 2), &xc.base, &xc.fiber).map_err(err)?;
                worst = worst.max(scaled_residual(tangent_pairing_via_sections(&xc, &xi, &mu, &phi).map_err(err)?, closed));
            }
            Ok(worst)
        }),
        sweep(p, "mx.antisymplectic".into(), "R pulls the canonical form of T*(A) back to minus that of T*(A*)", Expect::AtMost, |r| {
            let (mx, point) = flat_point(r);
            let v1: Vec<f64> = sampling::unit_vec(r, point.len());
            let v2: Vec<f64> = sampling::unit_vec(r, point.len());
            antisymplectic_defect(mx, &point, &v1, &v2).map_err(err)
        }),
        sweep(p, "mx.liouville".into(), "Liouville forms: R*lambda_A + lambda_A* = dP", Expect::AtMost, |r| {
            let (mx, point) = flat_point(r);
            let v: Vec<f64> = sampling::unit_vec(r, point.len());
            liouville_defect(mx, &point, &v).map_err(err)
        }),
    ]
}

/// A declared field chosen per sample, or a random one if none is declared.
fn some_field(p: &Problem, r: &mut SampleRng) -> SmoothMap {
    if p.fields.is_empty() {
        sampling::vector_field(r, p.chart.dim(), 2)
    } else {
        p.fields[r.gen_range(0..p.fields.len())].1.clone()
    }
}

fn diagram27(p: &Problem) -> Vec<CheckResult> {
    let n = p.chart.dim();
    vec![
        sweep(p, "diagram27".into(), "R = J* o I o sharp on T*(T*M), pinned sign", Expect::AtMost, |r| {
            let f = cotangent_point(r, &p.chart, n);
            Ok(diagram27_defect(&f, Sharp::PINNED))
        }),
        sweep(p, "diagram27.squarecap_routes".into(), "squarecaps on T*(T*M) and T(T*M): closed forms match the grid construction", Expect::AtMost, |r| {
            let x = sampling::in_box(r, &p.chart);
            let q: Vec<f64> = sampling::unit_vec(r, n);
            let (xf, yf) = (some_field(p, r), some_field(p, r));
            let a = squarecap_ty(&yf, &x, &q).map_err(err)?;
            let b = squarecap_ty_abstract(&yf, &x, &q).map_err(err)?;
            let c = squarecap_complete_lift(&xf, &x, &q, Sharp::PINNED).map_err(err)?;
            let d = squarecap_complete_lift_abstract(&xf, &x, &q).map_err(err)?;
            Ok(vec_gap(&a.flat(), &b.flat()).max(vec_gap(&c.flat(), &d.flat())))
        }),
    ]
}

fn section52(p: &Problem) -> Vec<CheckResult> {
    const ANCHOR: &str = "final pairing on T*(T*M) equals minus the linear function of [X, Y]";
    let n = p.chart.dim();
    let one = |x: &SmoothMap, y: &SmoothMap, r: &mut SampleRng| -> Sample {
        let m = sampling::in_box(r, &p.chart);
        let q: Vec<f64> = sampling::unit_vec(r, n);
        let (l, rr) = section52_final_pairing(x, y, &m, &q, Sharp::PINNED).map_err(err)?;
        Ok(scaled_residual(l, rr))
    };
    let mut checks: Vec<CheckResult> = field_pairs(p)
        .into_iter()
        .map(|(xn, x, yn, y)| sweep(p, format!("section52[{xn},{yn}]"), ANCHOR, Expect::AtMost, |r| one(x, y, r)))
        .collect();
    let random_pair = |r: &mut SampleRng| (sampling::vector_field(r, n, 2), sampling::vector_field(r, n, 2));
    checks.push(sweep(p, "section52.random".into(), ANCHOR, Expect::AtMost, |r| {
        let (x, y) = random_pair(r);
        one(&x, &y, r)
    }));
    checks.push(sweep(p, "section52.grid".into(), "agrees with the general squarecap statement on the T²M grid", Expect::AtMost, |r| {
        let (x, y) = random_pair(r);
        let m = sampling::in_box(r, &p.chart);
        let q: Vec<f64> = sampling::unit_vec(r, n);
        let (l, _) = section52_final_pairing(&x, &y, &m, &q, Sharp::PINNED).map_err(err)?;
        let (g, _) = bracket_grid::<f64>(&x, &y).and_then(|g| g.verify_theorem51(&m, &q)).map_err(err)?;
        Ok(scaled_residual(l, g))
    }));
    checks.push(sweep(p, "section52.sign_guard".into(), "flipping the sharp sign must break the final pairing (passes when the residual exceeds tolerance)", Expect::Exceeds, |r| {
        let (x, y) = random_pair(r);
        let m = sampling::in_box(r, &p.chart);
        let q: Vec<f64> = sampling::unit_vec(r, n);
        let (l, rr) = section52_final_pairing(&x, &y, &m, &q, Sharp::Flipped).map_err(err)?;
        Ok(scaled_residual(l, rr))
    }));
    checks
}

fn section53(p: &Problem) -> Vec<CheckResult> {
    const ANCHOR: &str = "final pairing on T*(A*) equals minus the linear function of the covariant derivative";
    let n = p.chart.dim();
    let one = |conn: &Connection, x: &SmoothMap, mu: &SmoothMap, r: &mut SampleRng| -> Sample {
        let m = sampling::in_box(r, &p.chart);
        let kappa: Vec<f64> = sampling::unit_vec(r, conn.bundle().fiber_dim());
        let (l, rr) = verify_53(conn, x, mu, &m, &kappa).map_err(err)?;
        let (g, _) = connection_grid::<f64>(conn, x, mu)
            .and_then(|g| g.verify_theorem51(&m, &kappa))
            .map_err(err)?;
        Ok(scaled_residual(l, rr).max(scaled_residual(g, rr)))
    };
    let mut checks = Vec::new();
    if let Some(conn) = &p.connection {
        for (xn, x) in &p.fields {
            for (mn, mu) in &p.sections {
                checks.push(sweep(p, format!("section53[{xn},{mn}]"), ANCHOR, Expect::AtMost, |r| one(conn, x, mu, r)));
            }
        }
    }
    checks.push(sweep(p, "section53.random".into(), ANCHOR, Expect::AtMost, |r| {
        let conn = random_connection(p, r);
        let x = sampling::vector_field(r, n, 2);
        let mu = sampling::polynomial_map(r, n, conn.bundle().fiber_dim(), 2);
        one(&conn, &x, &mu, r)
    }));
    checks.push(sweep(p, "section53.squarecap_routes".into(), "squarecap of the horizontal lift: closed form matches the grid construction", Expect::AtMost, |r| {
        let conn = random_connection(p, r);
        let x = sampling::vector_field(r, n, 2);
        let m = sampling::in_box(r, &p.chart);
        let kappa: Vec<f64> = sampling::unit_vec(r, conn.bundle().fiber_dim());
        let a = squarecap_horizontal(&conn, &x, &m, &kappa).map_err(err)?;
        let b = squarecap_horizontal_abstract(&conn, &x, &m, &kappa).map_err(err)?;
        Ok(vec_gap(&a.flat(), &b.flat()))
    }));
    checks
}
