//! Closed-form eigenvalue tables and piecewise maximal overlap at the two
//! analytically solvable phases, `gamma = 0` and `gamma = pi/2`, together
//! with the criteria polynomials that delimit their applicable domains.

use nalgebra::Vector3;

use crate::qstate::SymmetricState;
use crate::stationarity::{Branch, SphericalDirection, StationaryPoint};

/// Dead-band within which a criterion value is treated as exactly zero.
pub const SIGN_DEADBAND: f64 = 1e-14;

/// Two branch values closer than this at a criterion zero count as the same
/// (a genuine domain boundary rather than a degenerate corner).
const BOUNDARY_COINCIDE_TOL: f64 = 1e-9;

/// Sign of a criterion value with the dead-band applied.
pub fn band_sign(x: f64) -> i8 {
    if x.abs() <= SIGN_DEADBAND {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// The five criteria polynomials in `(g, t, h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaValues {
    /// `g h^2 - (g+t)^2 (g-2t)`
    pub d1: f64,
    /// `(3g-2t) h^2 + 4 g^2 t`
    pub c1: f64,
    /// `(3g+2t) h^2 - 4 g^2 t`
    pub c2: f64,
    /// `g h^2 - (g-t)^2 (g+2t)`
    pub c3: f64,
    /// `h^2 (2g+t) - t (g-t)^2`
    pub c_plus: f64,
}

/// Evaluates all five criteria polynomials.
pub fn criteria(state: &SymmetricState) -> CriteriaValues {
    let (g, t, h) = (state.g(), state.t(), state.h());
    let h2 = h * h;
    CriteriaValues {
        d1: g * h2 - (g + t) * (g + t) * (g - 2.0 * t),
        c1: (3.0 * g - 2.0 * t) * h2 + 4.0 * g * g * t,
        c2: (3.0 * g + 2.0 * t) * h2 - 4.0 * g * g * t,
        c3: g * h2 - (g - t) * (g - t) * (g + 2.0 * t),
        c_plus: h2 * (2.0 * g + t) - t * (g - t) * (g - t),
    }
}

/// Region thresholds on `h^2` used by the one-dimensional ordering
/// arguments: `(h_plus, h_two, h_three)`. `None` when `g = 0` where
/// `h_three` is undefined.
pub fn region_thresholds(g: f64, t: f64) -> Option<(f64, f64, f64)> {
    if g == 0.0 {
        return None;
    }
    let h_plus = t * (g - t) * (g - t) / (2.0 * g + t);
    let h_two = 4.0 * g * g * t / (3.0 * g + 2.0 * t);
    let h_three = (g - t) * (g - t) * (g + 2.0 * t) / g;
    Some((h_plus, h_two, h_three))
}

/// One closed-form eigenvalue entry of a fixed-phase table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchEigenvalue {
    pub branch: Branch,
    pub available: bool,
    pub mu_sq: Option<f64>,
    pub lambda: Option<f64>,
    pub direction: Option<SphericalDirection>,
}

impl BranchEigenvalue {
    fn entry(branch: Branch, mu_sq: f64, lambda: f64, s: Vector3<f64>) -> Self {
        Self {
            branch,
            available: true,
            mu_sq: Some(mu_sq),
            lambda: Some(lambda),
            direction: Some(SphericalDirection::from_vector(s)),
        }
    }

    fn unavailable(branch: Branch) -> Self {
        Self {
            branch,
            available: false,
            mu_sq: None,
            lambda: None,
            direction: None,
        }
    }

    /// The entry as a stationary point, when available.
    pub fn point(&self) -> Option<StationaryPoint> {
        Some(StationaryPoint {
            direction: self.direction?,
            lambda: self.lambda?,
            mu_sq: self.mu_sq?,
            branch: self.branch,
        })
    }
}

/// Flips the azimuthal component for negative phases; the stationary set of
/// the conjugate state is the mirror image in the `xz`-plane.
fn mirror_for_phase(state: &SymmetricState, mut s: Vector3<f64>) -> Vector3<f64> {
    if state.gamma() < 0.0 {
        s.y = -s.y;
    }
    s
}

fn principal_entry(g: f64, t: f64) -> BranchEigenvalue {
    BranchEigenvalue::entry(
        Branch::P,
        g * g,
        2.0 * (g * g - t * t),
        Vector3::new(0.0, 0.0, 1.0),
    )
}

/// The five eigenvalues of the `gamma = 0` table; the stored phase of the
/// state is ignored and treated as 0.
pub fn eigenvalues_gamma0(state: &SymmetricState) -> Vec<BranchEigenvalue> {
    let (g, t, h) = (state.g(), state.t(), state.h());
    let mut out = Vec::with_capacity(5);

    out.push(principal_entry(g, t));

    // lambda = 0 entry, z = -(g+t)/h; the denominator is positive for every
    // normalized state.
    {
        let m = h * h + (g + t) * (g + t);
        let mu = (g * g * h * h + t * t * (g + t) * (g + t)) / m;
        let s = Vector3::new(-2.0 * h * (g + t) / m, 0.0, (h * h - (g + t) * (g + t)) / m);
        out.push(BranchEigenvalue::entry(Branch::One, mu, 0.0, s));
    }

    // Paired entries z = r_pm / 2t, available while the discriminant of
    // t z^2 - h z + g - 2t is non-negative.
    let disc = h * h + 4.0 * t * (2.0 * t - g);
    if disc >= -SIGN_DEADBAND && !(t == 0.0 && h == 0.0) {
        let d = disc.max(0.0).sqrt();
        let r_plus = h + d;
        out.push(pm_entry_gamma0(Branch::Plus, r_plus, g, t, h));
        if t == 0.0 {
            // Continuous limit of the minus entry: it merges into the
            // lambda = 0 circle of the t = 0 state.
            let m = (g - 2.0 * t) * (g - 2.0 * t) + h * h;
            let mu = g * g * h * h / m;
            let s = Vector3::new(2.0 * h * g / m, 0.0, -(g * g - h * h) / m);
            out.push(BranchEigenvalue::entry(Branch::Minus, mu, 0.0, s));
        } else {
            // Rationalized form of h - d avoids cancellation for small t.
            let r_minus = if h + d > 0.0 {
                -4.0 * t * (2.0 * t - g) / (h + d)
            } else {
                0.0
            };
            out.push(pm_entry_gamma0(Branch::Minus, r_minus, g, t, h));
        }
    } else {
        out.push(BranchEigenvalue::unavailable(Branch::Plus));
        out.push(BranchEigenvalue::unavailable(Branch::Minus));
    }

    // lambda = 2t(t-g) entry, available while C1 >= 0.
    let c1 = (3.0 * g - 2.0 * t) * h * h + 4.0 * g * g * t;
    if band_sign(c1) >= 0 {
        let den = g * g + h * h + 3.0 * g * t;
        let lambda = 2.0 * t * (t - g);
        if den <= SIGN_DEADBAND {
            // g = h = 0: the entry degenerates to its W-state limit.
            let mu = 4.0 * t * t / 3.0;
            let s = Vector3::new(0.0, 2.0 * 2f64.sqrt() / 3.0, -1.0 / 3.0);
            out.push(BranchEigenvalue::entry(Branch::Two, mu, lambda, s));
        } else {
            let mu = g * (g * h * h + 4.0 * t * t * t) / den;
            let s = Vector3::new(
                -h * (g + 2.0 * t) / den,
                ((g + 2.0 * t) * c1.max(0.0)).sqrt() / den,
                -(g * g - h * h + g * t) / den,
            );
            out.push(BranchEigenvalue::entry(Branch::Two, mu, lambda, s));
        }
    } else {
        out.push(BranchEigenvalue::unavailable(Branch::Two));
    }

    out
}

fn pm_entry_gamma0(branch: Branch, r: f64, g: f64, t: f64, h: f64) -> BranchEigenvalue {
    let m = r * r + 4.0 * t * t;
    let mu = (h * r + 4.0 * t * t) * (h * r + 4.0 * t * t) / m;
    let lambda = h * r + 2.0 * t * (g + t);
    let s = Vector3::new(4.0 * t * r / m, 0.0, -(r * r - 4.0 * t * t) / m);
    BranchEigenvalue::entry(branch, mu, lambda, s)
}

/// The five eigenvalues of the `gamma = pi/2` table; the stored phase is
/// treated as `pi/2` except that directions follow the sign of the phase.
pub fn eigenvalues_gamma_half(state: &SymmetricState) -> Vec<BranchEigenvalue> {
    let (g, t, h) = (state.g(), state.t(), state.h());
    let mut out = Vec::with_capacity(5);

    out.push(principal_entry(g, t));

    // lambda = 0 entry, z = (g-t)/h.
    {
        let m = h * h + (g - t) * (g - t);
        if m <= SIGN_DEADBAND {
            out.push(BranchEigenvalue::unavailable(Branch::One));
        } else {
            let mu = (g * g * h * h + t * t * (g - t) * (g - t)) / m;
            let s = Vector3::new(0.0, 2.0 * h * (g - t) / m, (h * h - (g - t) * (g - t)) / m);
            out.push(BranchEigenvalue::entry(
                Branch::One,
                mu,
                0.0,
                mirror_for_phase(state, s),
            ));
        }
    }

    // Paired entries z = s_pm / 2t; the discriminant is non-negative
    // everywhere, so both are always available.
    {
        let d = (h * h + 4.0 * t * (2.0 * t + g)).sqrt();
        if t == 0.0 && h == 0.0 {
            // |000>: both entries collapse onto the south pole.
            let s = Vector3::new(0.0, 0.0, -1.0);
            out.push(BranchEigenvalue::entry(Branch::Plus, 0.0, 0.0, s));
            out.push(BranchEigenvalue::entry(Branch::Minus, 0.0, 0.0, s));
        } else {
            out.push(pm_entry_gamma_half(state, Branch::Plus, h + d, g, t, h));
            if t == 0.0 {
                let m = (g + 2.0 * t) * (g + 2.0 * t) + h * h;
                let mu = g * g * h * h / m;
                let s = Vector3::new(0.0, -2.0 * g * h / m, -(g * g - h * h) / m);
                out.push(BranchEigenvalue::entry(
                    Branch::Minus,
                    mu,
                    0.0,
                    mirror_for_phase(state, s),
                ));
            } else {
                let s_minus = -4.0 * t * (2.0 * t + g) / (h + d);
                out.push(pm_entry_gamma_half(state, Branch::Minus, s_minus, g, t, h));
            }
        }
    }

    // lambda = 2t(g+t) entry, available while (g-2t) C2 >= 0 and away from
    // the removable pole of its denominator.
    {
        let c2 = (3.0 * g + 2.0 * t) * h * h - 4.0 * g * g * t;
        let avail = (g - 2.0 * t) * c2;
        let den = g * g + h * h - 3.0 * g * t;
        if avail >= -SIGN_DEADBAND && den.abs() > 1e-12 {
            let mu = g * (g * h * h - 4.0 * t * t * t) / den;
            let lambda = 2.0 * t * (g + t);
            // s_y follows from sin(theta) sin(phi) = h (1 - cos(theta))/(2g),
            // which fixes its sign relative to the denominator.
            let s = Vector3::new(
                ((g - 2.0 * t) * c2).max(0.0).sqrt() / den,
                h * (g - 2.0 * t) / den,
                -(g * g - h * h - g * t) / den,
            );
            out.push(BranchEigenvalue::entry(
                Branch::Two,
                mu,
                lambda,
                mirror_for_phase(state, s),
            ));
        } else {
            out.push(BranchEigenvalue::unavailable(Branch::Two));
        }
    }

    out
}

fn pm_entry_gamma_half(
    state: &SymmetricState,
    branch: Branch,
    sv: f64,
    g: f64,
    t: f64,
    h: f64,
) -> BranchEigenvalue {
    let m = sv * sv + 4.0 * t * t;
    let mu = (h * sv + 4.0 * t * t) * (h * sv + 4.0 * t * t) / m;
    let lambda = h * sv - 2.0 * t * (g - t);
    let s = Vector3::new(0.0, 4.0 * t * sv / m, -(sv * sv - 4.0 * t * t) / m);
    BranchEigenvalue::entry(branch, mu, lambda, mirror_for_phase(state, s))
}

/// Maximal overlap result with the winning branch and criteria context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmaxResult {
    pub p_max: f64,
    pub branch: Branch,
    /// Set when the state sits on a criterion zero where the two competing
    /// branch values coincide.
    pub boundary: bool,
    pub criteria: CriteriaValues,
}

fn value(entries: &[BranchEigenvalue], branch: Branch) -> Option<f64> {
    entries
        .iter()
        .find(|e| e.branch == branch)
        .and_then(|e| e.mu_sq)
}

fn resolve_boundary(
    p_val: Option<f64>,
    q_val: Option<f64>,
    p_branch: Branch,
    q_branch: Branch,
    principal: Branch,
    crit: CriteriaValues,
) -> PmaxResult {
    match (p_val, q_val) {
        (Some(a), Some(b)) => {
            if (a - b).abs() <= BOUNDARY_COINCIDE_TOL {
                PmaxResult {
                    p_max: a.max(b),
                    branch: principal,
                    boundary: true,
                    criteria: crit,
                }
            } else {
                let (p, branch) = if a >= b { (a, p_branch) } else { (b, q_branch) };
                PmaxResult {
                    p_max: p,
                    branch,
                    boundary: false,
                    criteria: crit,
                }
            }
        }
        (Some(a), None) => PmaxResult {
            p_max: a,
            branch: p_branch,
            boundary: false,
            criteria: crit,
        },
        (None, Some(b)) => PmaxResult {
            p_max: b,
            branch: q_branch,
            boundary: false,
            criteria: crit,
        },
        (None, None) => unreachable!("at least one competing branch exists"),
    }
}

/// Piecewise maximal overlap at `gamma = 0`: the principal value when
/// `D1 <= 0`, the plus-branch value when `D1 >= 0`.
pub fn pmax_gamma0(state: &SymmetricState) -> PmaxResult {
    let crit = criteria(state);
    let entries = eigenvalues_gamma0(state);
    let p = value(&entries, Branch::P);
    let plus = value(&entries, Branch::Plus);
    match band_sign(crit.d1) {
        -1 => PmaxResult {
            p_max: p.expect("principal branch always available"),
            branch: Branch::P,
            boundary: false,
            criteria: crit,
        },
        1 => PmaxResult {
            p_max: plus.expect("plus branch available where D1 >= 0"),
            branch: Branch::Plus,
            boundary: false,
            criteria: crit,
        },
        _ => resolve_boundary(p, plus, Branch::P, Branch::Plus, Branch::P, crit),
    }
}

/// Piecewise maximal overlap at `gamma = pi/2`.
///
/// For `g >= 2t` the plus branch wins when `C2 >= 0` and `C3 >= 0`, the
/// principal branch otherwise; for `g <= 2t` the plus branch wins when
/// `C2 >= 0`, otherwise the `lambda = 2t(g+t)` branch.
pub fn pmax_gamma_half(state: &SymmetricState) -> PmaxResult {
    let (g, t) = (state.g(), state.t());
    let crit = criteria(state);
    let entries = eigenvalues_gamma_half(state);
    let p = value(&entries, Branch::P);
    let plus = value(&entries, Branch::Plus);
    let two = value(&entries, Branch::Two);
    let s2 = band_sign(crit.c2);
    let s3 = band_sign(crit.c3);

    if band_sign(g - 2.0 * t) >= 0 {
        if s2 >= 1 && s3 >= 1 {
            PmaxResult {
                p_max: plus.expect("plus branch always available"),
                branch: Branch::Plus,
                boundary: false,
                criteria: crit,
            }
        } else if s2 >= 0 && s3 >= 0 {
            // On the C3 = 0 (or C2 = 0) curve the competitors coincide.
            resolve_boundary(p, plus, Branch::P, Branch::Plus, Branch::P, crit)
        } else {
            PmaxResult {
                p_max: p.expect("principal branch always available"),
                branch: Branch::P,
                boundary: false,
                criteria: crit,
            }
        }
    } else if s2 >= 1 {
        PmaxResult {
            p_max: plus.expect("plus branch always available"),
            branch: Branch::Plus,
            boundary: false,
            criteria: crit,
        }
    } else if s2 == 0 {
        resolve_boundary(plus, two, Branch::Plus, Branch::Two, Branch::Plus, crit)
    } else {
        match two {
            Some(v) => PmaxResult {
                p_max: v,
                branch: Branch::Two,
                boundary: false,
                criteria: crit,
            },
            // The pole guard can suppress the entry only next to the triple
            // point, where the plus value coincides.
            None => PmaxResult {
                p_max: plus.expect("plus branch always available"),
                branch: Branch::Plus,
                boundary: false,
                criteria: crit,
            },
        }
    }
}
