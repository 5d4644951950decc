//! Stationary-point enumeration beyond the two analytic phases: the quartic
//! characteristic polynomial at `gamma = pi/4` and a multi-start damped
//! Newton solver for arbitrary phase, plus the phase dispatcher that yields
//! `P_max` everywhere.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use crate::analytic::{self, PmaxResult};
use crate::qstate::SymmetricState;
use crate::stationarity::{
    self, eigenvalue_from_vector, lambda_zero_branch, residual_from_vector, Branch,
    ReducedCorrelations, SphericalDirection, StationaryPoint,
};
use crate::{Error, Result};

/// Residual bound for accepting a solver stationary point.
pub const SOLVER_RESIDUAL_TOL: f64 = 1e-8;

/// Two candidate branch values closer than this flag a boundary cell.
pub const BOUNDARY_GAP: f64 = 1e-6;

const DEDUP_TOL: f64 = 1e-7;

/// Monic quartic `f(l) = l^4 + c3 l^3 + c2 l^2 + c1 l + c0` whose real roots
/// are the nonzero multipliers of the `gamma = pi/4` stationary system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPoly {
    /// Coefficients `[c4, c3, c2, c1, c0]` with `c4 = 1`.
    pub coeffs: [f64; 5],
}

impl QuarticPoly {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc * x + c)
    }

    fn eval_derivative(&self, x: f64) -> f64 {
        let [c4, c3, c2, c1, _] = self.coeffs;
        ((4.0 * c4 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1
    }

    /// Magnitude scale of the coefficients, for relative residual checks.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()))
    }

    /// All four roots, via the companion-matrix eigenvalues, polished by a
    /// few Newton steps where the derivative allows.
    pub fn roots(&self) -> [Complex64; 4] {
        let [_, c3, c2, c1, c0] = self.coeffs;
        let companion = Matrix4::new(
            0.0, 0.0, 0.0, -c0, //
            1.0, 0.0, 0.0, -c1, //
            0.0, 1.0, 0.0, -c2, //
            0.0, 0.0, 1.0, -c3,
        );
        let eig = companion.complex_eigenvalues();
        let mut roots = [Complex64::new(0.0, 0.0); 4];
        for (slot, e) in roots.iter_mut().zip(eig.iter()) {
            let mut r = *e;
            if r.im.abs() <= 1e-6 * (1.0 + r.re.abs()) {
                let mut x = r.re;
                for _ in 0..3 {
                    let d = self.eval_derivative(x);
                    if d.abs() < 1e-14 * self.scale() {
                        break;
                    }
                    x -= self.eval(x) / d;
                }
                if self.eval(x).abs() <= self.eval(r.re).abs() {
                    r = Complex64::new(x, r.im);
                }
            }
            *slot = r;
        }
        roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        roots
    }
}

/// Coefficients of the `gamma = pi/4` multiplier quartic as polynomials in
/// `(g, t, h)`.
pub fn quartic_coefficients(state: &SymmetricState) -> QuarticPoly {
    let (g, t, h) = (state.g(), state.t(), state.h());
    let (g2, t2, h2) = (g * g, t * t, h * h);
    let t4 = t2 * t2;
    QuarticPoly {
        coeffs: [
            1.0,
            -2.0 * (h2 + 4.0 * t2),
            -4.0 * t2 * (2.0 * g2 - h2 - 6.0 * t2),
            8.0 * (t4 * (h2 - 4.0 * t2) + g2 * (3.0 * h2 * t2 + 4.0 * t4)),
            16.0 * t4 * (g2 * g2 - 5.0 * g2 * h2 - 2.0 * g2 * t2 - h2 * t2 + t4),
        ],
    }
}

/// A root the pipeline could not turn into a stationary point.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectedRoot {
    pub root: Complex64,
    pub reason: String,
}

/// Stationary points found for one state, with the resulting overlap.
#[derive(Debug, Clone)]
pub struct GammaSolveReport {
    pub points: Vec<StationaryPoint>,
    pub rejected: Vec<RejectedRoot>,
    pub p_max: f64,
    pub branch: Branch,
    /// True when the runner-up branch value is within [`BOUNDARY_GAP`].
    pub boundary: bool,
    pub notes: Vec<String>,
}

/// Labels solver points by multiplier rank counted from the top: the
/// largest accepted root is always index 4 (the branch that wins wherever
/// the principal one does not), then 3, 2, 1.
fn assign_root_ranks(extras: &mut [StationaryPoint]) {
    extras.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let m = extras.len();
    for (i, p) in extras.iter_mut().enumerate() {
        let from_top = m - i;
        let idx = (5usize.saturating_sub(from_top)).max(1) as u8;
        p.branch = Branch::QuarticRoot(idx);
    }
}

impl GammaSolveReport {
    /// The stationary point achieving `p_max`.
    pub fn winner(&self) -> Option<&StationaryPoint> {
        self.points
            .iter()
            .filter(|p| p.branch == self.branch)
            .max_by(|a, b| a.mu_sq.total_cmp(&b.mu_sq))
            .or_else(|| {
                self.points
                    .iter()
                    .filter(|p| p.branch == Branch::P || p.lambda > 0.0)
                    .max_by(|a, b| a.mu_sq.total_cmp(&b.mu_sq))
            })
    }
}

fn push_dedup(points: &mut Vec<StationaryPoint>, p: StationaryPoint) -> bool {
    let sv = p.direction.unit_vector();
    for q in points.iter() {
        if (q.lambda - p.lambda).abs() < DEDUP_TOL
            && (q.direction.unit_vector() - sv).norm() < DEDUP_TOL
        {
            return false;
        }
    }
    points.push(p);
    true
}

fn principal_point(state: &SymmetricState) -> StationaryPoint {
    StationaryPoint {
        direction: SphericalDirection::new(0.0, 0.0),
        lambda: 2.0 * (state.g() * state.g() - state.t() * state.t()),
        mu_sq: state.g() * state.g(),
        branch: Branch::P,
    }
}

/// `p_max`, winning branch and boundary flag from an assembled point set:
/// the maximum over points with positive multiplier plus the principal one.
fn finish_report(
    points: Vec<StationaryPoint>,
    rejected: Vec<RejectedRoot>,
    notes: Vec<String>,
) -> GammaSolveReport {
    let mut candidates: Vec<&StationaryPoint> = points
        .iter()
        .filter(|p| p.branch == Branch::P || p.lambda > 0.0)
        .collect();
    candidates.sort_by(|a, b| b.mu_sq.total_cmp(&a.mu_sq));
    let (p_max, branch) = candidates
        .first()
        .map(|p| (p.mu_sq, p.branch))
        .unwrap_or((0.0, Branch::P));
    let boundary = candidates
        .get(1)
        .map(|p| p_max - p.mu_sq < BOUNDARY_GAP)
        .unwrap_or(false);
    GammaSolveReport {
        points,
        rejected,
        p_max,
        branch,
        boundary,
        notes,
    }
}

fn report_from_table(
    entries: &[analytic::BranchEigenvalue],
    pmax: &PmaxResult,
) -> GammaSolveReport {
    let points: Vec<StationaryPoint> = entries.iter().filter_map(|e| e.point()).collect();
    let mut report = finish_report(points, Vec::new(), Vec::new());
    report.p_max = pmax.p_max;
    report.branch = pmax.branch;
    report
}

/// Stationary points of a `gamma = pi/4` (or `-pi/4`) state through the
/// quartic pipeline: the principal and zero-multiplier points in closed
/// form, plus one point per usable quartic root.
pub fn stationary_points_quarter(state: &SymmetricState) -> Result<GammaSolveReport> {
    let (g, t, h) = (state.g(), state.t(), state.h());
    if t == 0.0 || h == 0.0 {
        // The azimuth reconstruction divides by h t; these states are phase
        // free, so the Newton solver handles them directly.
        let mut report = stationary_points_numeric(state, 64)?;
        report
            .notes
            .push("quartic reconstruction degenerate (h t = 0); used Newton solver".into());
        return Ok(report);
    }

    let rc = stationarity::reduced_correlations(state);
    let quartic = quartic_coefficients(state);
    let roots = quartic.roots();
    let mirror = state.gamma() < 0.0;

    let mut points = vec![principal_point(state)];
    let mut rejected = Vec::new();
    match lambda_zero_branch(state) {
        Ok(p) => {
            push_dedup(&mut points, p);
        }
        Err(_) => rejected.push(RejectedRoot {
            root: Complex64::new(0.0, 0.0),
            reason: "lambda=0 branch undefined".into(),
        }),
    }

    let sqrt2 = 2f64.sqrt();
    let mut extras: Vec<StationaryPoint> = Vec::new();
    for root in roots.iter() {
        if root.im.abs() > 1e-9 * (1.0 + root.re.abs()) {
            rejected.push(RejectedRoot {
                root: *root,
                reason: "complex root".into(),
            });
            continue;
        }
        let lambda = root.re;
        let w = lambda - 2.0 * t * t;
        let a = w - 2.0 * g * t;
        let b = w + 2.0 * g * t;
        let r_ab = a.hypot(b);
        if r_ab < 1e-14 {
            rejected.push(RejectedRoot {
                root: *root,
                reason: "degenerate azimuth".into(),
            });
            continue;
        }
        // Consistency of the two closed forms for z^2; guarded away from
        // the pole of the second form.
        let den2 = (lambda - 2.0 * h * h) * w * w
            - 8.0 * h * h * t * t * w
            - 4.0 * g * g * t * t * (lambda - 2.0 * h * h);
        if den2.abs() > 1e-9 * quartic.scale() {
            let z2_eq = a * b * (lambda - 2.0 * g * g + 2.0 * t * t) / den2;
            if z2_eq < -1e-9 {
                rejected.push(RejectedRoot {
                    root: *root,
                    reason: "z^2 negative".into(),
                });
                continue;
            }
        }
        let (mut cos_phi, mut sin_phi) = (b / r_ab, a / r_ab);
        let mut z = a * cos_phi / (sqrt2 * h * t);
        if z < 0.0 {
            cos_phi = -cos_phi;
            sin_phi = -sin_phi;
            z = -z;
        }
        let theta = 2.0 * z.atan();
        let (st, ct) = theta.sin_cos();
        let mut s = Vector3::new(st * cos_phi, st * sin_phi, ct);
        if mirror {
            s.y = -s.y;
        }
        if !(s.x.is_finite() && s.y.is_finite() && s.z.is_finite()) {
            rejected.push(RejectedRoot {
                root: *root,
                reason: "direction out of range".into(),
            });
            continue;
        }
        let resid = residual_from_vector(&rc, &s, lambda).amax();
        if resid > SOLVER_RESIDUAL_TOL {
            rejected.push(RejectedRoot {
                root: *root,
                reason: format!("residual {resid:.2e}"),
            });
            continue;
        }
        let mu_sq = eigenvalue_from_vector(&rc, &s);
        let p = StationaryPoint {
            direction: SphericalDirection::from_vector(s),
            lambda,
            mu_sq,
            branch: Branch::QuarticRoot(0),
        };
        let sv = p.direction.unit_vector();
        let dup = points.iter().chain(extras.iter()).any(|q| {
            (q.lambda - p.lambda).abs() < DEDUP_TOL
                && (q.direction.unit_vector() - sv).norm() < DEDUP_TOL
        });
        if !dup {
            extras.push(p);
        }
    }
    assign_root_ranks(&mut extras);
    points.extend(extras);

    if !points
        .iter()
        .any(|p| matches!(p.branch, Branch::QuarticRoot(_)))
    {
        // No usable quartic root at all; fall back to the Newton solver.
        let mut report = stationary_points_numeric(state, 64)?;
        report
            .notes
            .push("no valid quartic branch; used Newton solver".into());
        report.rejected.extend(rejected);
        return Ok(report);
    }

    Ok(finish_report(points, rejected, Vec::new()))
}

/// Multi-start damped Newton on the residual system in `(theta, phi,
/// lambda)` for the correlations `(r, G)`. Returns accepted, deduplicated
/// `(direction, lambda)` pairs.
pub fn newton_stationary_points(
    r: &Vector3<f64>,
    g: &Matrix3<f64>,
    lambda_seeds: &[f64],
    n_starts: usize,
) -> Vec<(SphericalDirection, f64)> {
    let rc = ReducedCorrelations { r: *r, g: *g };
    let n_dirs = (n_starts / lambda_seeds.len().max(1)).max(2);
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut starts: Vec<(f64, f64)> = (0..n_dirs)
        .map(|k| {
            // Golden-angle spiral keeps the starts well spread on the sphere.
            let ct = 1.0 - 2.0 * (k as f64 + 0.5) / n_dirs as f64;
            let theta0 = ct.clamp(-1.0, 1.0).acos();
            let phi0 = (k as f64 * golden).rem_euclid(TAU);
            (theta0, phi0)
        })
        .collect();
    // Near-pole rings: branch pairs hide close to the poles when t or h is
    // small, where the spiral has no starts.
    for theta0 in [0.03, 0.12, PI - 0.12, PI - 0.03] {
        for m in 0..4 {
            starts.push((theta0, m as f64 * TAU / 4.0));
        }
    }

    let mut found: Vec<(Vector3<f64>, f64)> = Vec::new();
    for (theta0, phi0) in starts {
        for &l0 in lambda_seeds {
            if let Some((s, lambda)) = newton_solve(&rc, theta0, phi0, l0) {
                let dup = found
                    .iter()
                    .any(|(sv, lv)| (lv - lambda).abs() < DEDUP_TOL && (sv - s).norm() < DEDUP_TOL);
                if !dup {
                    found.push((s, lambda));
                }
            }
        }
    }

    found.sort_by(|a, b| {
        (a.1, a.0.z, a.0.x, a.0.y)
            .partial_cmp(&(b.1, b.0.z, b.0.x, b.0.y))
            .unwrap()
    });
    found
        .into_iter()
        .map(|(s, l)| (SphericalDirection::from_vector(s), l))
        .collect()
}

/// Newton refinement of a single stationary point from an initial direction
/// and multiplier guess.
pub fn polish_stationary(
    r: &Vector3<f64>,
    g: &Matrix3<f64>,
    s0: &Vector3<f64>,
    lambda0: f64,
) -> Option<(Vector3<f64>, f64)> {
    let rc = ReducedCorrelations { r: *r, g: *g };
    let d = SphericalDirection::from_vector(*s0);
    newton_solve(&rc, d.theta, d.phi, lambda0)
}

fn newton_solve(
    rc: &ReducedCorrelations,
    theta0: f64,
    phi0: f64,
    lambda0: f64,
) -> Option<(Vector3<f64>, f64)> {
    let mut x = Vector3::new(theta0, phi0, lambda0);
    let f_of = |x: &Vector3<f64>| {
        let (st, ct) = x.x.sin_cos();
        let (sp, cp) = x.y.sin_cos();
        let s = Vector3::new(st * cp, st * sp, ct);
        (residual_from_vector(rc, &s, x.z), s)
    };
    let (mut f, mut s) = f_of(&x);
    let mut damp = 0.0f64;
    for _ in 0..120 {
        if f.amax() < 1e-12 {
            break;
        }
        let (st, ct) = x.x.sin_cos();
        let (sp, cp) = x.y.sin_cos();
        let s_theta = Vector3::new(ct * cp, ct * sp, -st);
        let s_phi = Vector3::new(-st * sp, st * cp, 0.0);
        let gl = rc.g - Matrix3::from_diagonal_element(x.z);
        let jac = Matrix3::from_columns(&[gl * s_theta, gl * s_phi, -s]);
        let lhs = jac.transpose() * jac + Matrix3::from_diagonal_element(damp);
        let rhs = -(jac.transpose() * f);
        let Some(step) = lhs.lu().solve(&rhs) else {
            damp = (damp * 10.0).max(1e-8);
            continue;
        };
        let xn = x + step;
        let (fn_, sn) = f_of(&xn);
        if fn_.norm() < f.norm() {
            x = xn;
            f = fn_;
            s = sn;
            damp *= 0.25;
            if damp < 1e-12 {
                damp = 0.0;
            }
        } else {
            damp = (damp * 10.0).max(1e-8);
            if damp > 1e8 {
                break;
            }
        }
    }
    (f.amax() < 1e-12).then_some((s, x.z))
}

/// Newton multiplier seeds: the known small-`h` limits of the root families,
/// the principal and zero multipliers, and the small-`t` limits of the
/// south-pole branch.
pub fn default_lambda_seeds(state: &SymmetricState) -> [f64; 6] {
    let (g, t, h) = (state.g(), state.t(), state.h());
    [
        2.0 * t * (g + t),
        2.0 * t * (t - g),
        2.0 * (g * g - t * t),
        0.0,
        2.0 * h * h + 2.0 * t * (g + t),
        2.0 * h * h - 2.0 * t * (g - t),
    ]
}

/// Multi-start Newton enumeration of stationary points at arbitrary phase.
///
/// The principal (`theta = 0`) and zero-multiplier points are always added
/// in closed form; Newton fills in the rest from `n_starts` seeds.
pub fn stationary_points_numeric(
    state: &SymmetricState,
    n_starts: usize,
) -> Result<GammaSolveReport> {
    let n_starts = n_starts.max(8);
    let rc = stationarity::reduced_correlations(state);
    let mut points = vec![principal_point(state)];
    let mut rejected = Vec::new();
    match lambda_zero_branch(state) {
        Ok(p) => {
            push_dedup(&mut points, p);
        }
        Err(_) => rejected.push(RejectedRoot {
            root: Complex64::new(0.0, 0.0),
            reason: "lambda=0 branch undefined".into(),
        }),
    }

    // The fixed-phase tables anchor every branch family as it deforms in
    // the phase; polishing from them prevents missed branches near the
    // degeneracies where blind multi-start has tiny basins.
    let mut warm: Vec<(Vector3<f64>, f64)> = Vec::new();
    for e in analytic::eigenvalues_gamma0(state)
        .iter()
        .chain(analytic::eigenvalues_gamma_half(state).iter())
    {
        if let Some(p) = e.point() {
            warm.push((p.direction.unit_vector(), p.lambda));
        }
    }
    let mut seeds: Vec<f64> = default_lambda_seeds(state).to_vec();
    for root in quartic_coefficients(state).roots() {
        if root.im.abs() <= 1e-6 * (1.0 + root.re.abs()) {
            seeds.push(root.re);
            warm.push((Vector3::new(0.0, 1.0, 0.0), root.re));
        }
    }
    let mut raw = newton_stationary_points(&rc.r, &rc.g, &seeds, n_starts);
    for (s0, l0) in warm {
        if let Some((s, lambda)) = polish_stationary(&rc.r, &rc.g, &s0, l0) {
            if raw.iter().all(|(d, lv)| {
                (lv - lambda).abs() >= DEDUP_TOL || (d.unit_vector() - s).norm() >= DEDUP_TOL
            }) {
                raw.push((SphericalDirection::from_vector(s), lambda));
            }
        }
        // Phase-conjugate mirror of the same seed.
        let s0m = Vector3::new(s0.x, -s0.y, s0.z);
        if let Some((s, lambda)) = polish_stationary(&rc.r, &rc.g, &s0m, l0) {
            if raw.iter().all(|(d, lv)| {
                (lv - lambda).abs() >= DEDUP_TOL || (d.unit_vector() - s).norm() >= DEDUP_TOL
            }) {
                raw.push((SphericalDirection::from_vector(s), lambda));
            }
        }
    }
    let mut extras: Vec<StationaryPoint> = Vec::new();
    for (direction, lambda) in raw {
        let s = direction.unit_vector();
        let resid = residual_from_vector(&rc, &s, lambda).amax();
        if resid > SOLVER_RESIDUAL_TOL {
            continue;
        }
        let mu_sq = eigenvalue_from_vector(&rc, &s);
        let branch = if lambda.abs() < 1e-9 {
            Branch::Zero
        } else {
            Branch::QuarticRoot(0)
        };
        let p = StationaryPoint {
            direction,
            lambda,
            mu_sq,
            branch,
        };
        if points.iter().all(|q| {
            (q.lambda - p.lambda).abs() >= DEDUP_TOL
                || (q.direction.unit_vector() - s).norm() >= DEDUP_TOL
        }) {
            extras.push(p);
        }
    }
    // Rank the genuinely new non-special points by multiplier, largest
    // first; zero-multiplier points keep their label.
    let (mut roots_only, zeros): (Vec<_>, Vec<_>) = extras
        .into_iter()
        .partition(|p| matches!(p.branch, Branch::QuarticRoot(_)));
    assign_root_ranks(&mut roots_only);
    for p in zeros.into_iter().chain(roots_only) {
        push_dedup(&mut points, p);
    }

    if points.len() < 2 {
        return Err(Error::InsufficientCoverage);
    }
    Ok(finish_report(points, rejected, Vec::new()))
}

/// Phase dispatcher: closed forms at `0`, `pi/2`, the quartic pipeline at
/// `pi/4`, the Newton solver elsewhere.
pub fn solve_report(state: &SymmetricState) -> Result<GammaSolveReport> {
    let ga = state.gamma().abs();
    if ga < 1e-12 {
        Ok(report_from_table(
            &analytic::eigenvalues_gamma0(state),
            &analytic::pmax_gamma0(state),
        ))
    } else if (ga - FRAC_PI_2).abs() < 1e-12 {
        Ok(report_from_table(
            &analytic::eigenvalues_gamma_half(state),
            &analytic::pmax_gamma_half(state),
        ))
    } else if (ga - FRAC_PI_4).abs() < 1e-12 {
        stationary_points_quarter(state)
    } else {
        stationary_points_numeric(state, 64)
    }
}

/// Maximal overlap for any phase, with criteria context.
pub fn pmax_general(state: &SymmetricState) -> Result<PmaxResult> {
    let ga = state.gamma().abs();
    if ga < 1e-12 {
        return Ok(analytic::pmax_gamma0(state));
    }
    if (ga - FRAC_PI_2).abs() < 1e-12 {
        return Ok(analytic::pmax_gamma_half(state));
    }
    let report = solve_report(state)?;
    Ok(PmaxResult {
        p_max: report.p_max,
        branch: report.branch,
        boundary: report.boundary,
        criteria: analytic::criteria(state),
    })
}
