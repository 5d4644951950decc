//! Reduced one- and two-qubit correlations and the Lagrange stationarity
//! system on the Bloch sphere.
//!
//! For the symmetric family both single-qubit Bloch vectors coincide and the
//! two-qubit correlation matrix is symmetric, so candidate directions solve
//! `r + G s = lambda s` with a single unit vector `s` and multiplier
//! `lambda`. Each solution yields an overlap eigenvalue
//! `mu^2 = (1 + 2 r.s + s^T G s)/4`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::qstate::{GeneralThreeQubitState, Qubit, SymmetricState};
use crate::{Error, Result};

/// Default residual tolerance for accepting a closed-form stationary point.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Bloch vector `r` and correlation matrix `G` of the symmetric family.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCorrelations {
    pub r: Vector3<f64>,
    pub g: Matrix3<f64>,
}

/// Closed-form reduced correlations of a [`SymmetricState`].
pub fn reduced_correlations(s: &SymmetricState) -> ReducedCorrelations {
    let (g, t, h, gamma) = (s.g(), s.t(), s.h(), s.gamma());
    let (sin_g, cos_g) = gamma.sin_cos();
    let rx = 2.0 * h * t * cos_g;
    let ry = 2.0 * h * t * sin_g;
    let rz = g * g - h * h - t * t;
    let gm = Matrix3::new(
        2.0 * t * (g + t),
        0.0,
        -rx,
        0.0,
        -2.0 * t * (g - t),
        -ry,
        -rx,
        -ry,
        g * g + h * h - t * t,
    );
    ReducedCorrelations {
        r: Vector3::new(rx, ry, rz),
        g: gm,
    }
}

/// Single-qubit Bloch vectors and the two-qubit correlation matrix of an
/// arbitrary three-qubit state, computed from partial traces of the density
/// matrix (standard Pauli convention, `sigma_z` diagonal with `+1` on `|0>`).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralCorrelations {
    pub r1: Vector3<f64>,
    pub r2: Vector3<f64>,
    pub g: Matrix3<f64>,
}

/// Partial-trace correlations of the first two qubits of `psi`.
pub fn reduced_correlations_general(psi: &GeneralThreeQubitState) -> GeneralCorrelations {
    let a = &psi.0;
    let idx = |q0: usize, q1: usize, q2: usize| (q0 << 2) | (q1 << 1) | q2;

    // rho^A_{01} = sum_{bc} psi_{0bc} conj(psi_{1bc}), and likewise for B.
    let mut rho_a01 = Complex64::new(0.0, 0.0);
    let mut rho_a00 = 0.0;
    let mut rho_b01 = Complex64::new(0.0, 0.0);
    let mut rho_b00 = 0.0;
    for b in 0..2 {
        for c in 0..2 {
            rho_a01 += a[idx(0, b, c)] * a[idx(1, b, c)].conj();
            rho_a00 += a[idx(0, b, c)].norm_sqr();
            rho_b01 += a[idx(b, 0, c)] * a[idx(b, 1, c)].conj();
            rho_b00 += a[idx(b, 0, c)].norm_sqr();
        }
    }
    let bloch = |rho01: Complex64, rho00: f64| {
        Vector3::new(2.0 * rho01.re, -2.0 * rho01.im, 2.0 * rho00 - 1.0)
    };

    // G_ij = Tr(rho^{AB} sigma_i x sigma_j).
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    let pauli: [[[Complex64; 2]; 2]; 3] = [
        [[zero, one], [one, zero]],
        [[zero, -i_unit], [i_unit, zero]],
        [[one, zero], [zero, -one]],
    ];
    let mut gm = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for a1 in 0..2 {
                for b1 in 0..2 {
                    for a2 in 0..2 {
                        for b2 in 0..2 {
                            // rho^{AB}_{(a1 b1),(a2 b2)} (sigma_i)_{a2 a1} (sigma_j)_{b2 b1}
                            let mut rho = Complex64::new(0.0, 0.0);
                            for c in 0..2 {
                                rho += a[idx(a1, b1, c)] * a[idx(a2, b2, c)].conj();
                            }
                            acc += rho * pauli[i][a2][a1] * pauli[j][b2][b1];
                        }
                    }
                }
            }
            gm[(i, j)] = acc.re;
        }
    }
    GeneralCorrelations {
        r1: bloch(rho_a01, rho_a00),
        r2: bloch(rho_b01, rho_b00),
        g: gm,
    }
}

/// A direction on the Bloch sphere, `theta` in `[0, pi]`, `phi` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalDirection {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Canonical angles of a (not necessarily unit) vector.
    pub fn from_vector(v: Vector3<f64>) -> Self {
        let n = v.norm();
        if n == 0.0 {
            return Self {
                theta: 0.0,
                phi: 0.0,
            };
        }
        let theta = (v.z / n).clamp(-1.0, 1.0).acos();
        let mut phi = v.y.atan2(v.x);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        // The azimuth is immaterial at the poles; fix it for determinism.
        if theta == 0.0 || theta == std::f64::consts::PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn unit_vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Single-qubit state with this Bloch vector.
    pub fn qubit(&self) -> Qubit {
        Qubit::from_bloch_angles(self.theta, self.phi)
    }
}

/// Labels for the stationary branches of the Lagrange system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Principal branch: north pole, `mu^2 = g^2`.
    P,
    /// Zero-multiplier branch (closed form for arbitrary phase).
    Zero,
    /// Zero-multiplier table entry at a fixed phase.
    One,
    Plus,
    Minus,
    Two,
    /// Root `i` (ascending multiplier) of the quartic pipeline, 1-based.
    QuarticRoot(u8),
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::P => write!(f, "P"),
            Branch::Zero => write!(f, "zero"),
            Branch::One => write!(f, "one"),
            Branch::Plus => write!(f, "plus"),
            Branch::Minus => write!(f, "minus"),
            Branch::Two => write!(f, "two"),
            Branch::QuarticRoot(i) => write!(f, "root{i}"),
        }
    }
}

/// A stationary point of `r + G s = lambda s` with its eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub direction: SphericalDirection,
    pub lambda: f64,
    pub mu_sq: f64,
    pub branch: Branch,
}

/// Overlap eigenvalue `(1 + 2 r.s + s^T G s)/4` for the direction `d`.
///
/// This equals the squared overlap with the product family `|q q q'>` where
/// `q` has Bloch vector `s` and `q'` is chosen optimally.
pub fn eigenvalue_from_direction(state: &SymmetricState, d: &SphericalDirection) -> f64 {
    let rc = reduced_correlations(state);
    eigenvalue_from_vector(&rc, &d.unit_vector())
}

pub(crate) fn eigenvalue_from_vector(rc: &ReducedCorrelations, s: &Vector3<f64>) -> f64 {
    let v = 0.25 * (1.0 + 2.0 * rc.r.dot(s) + (rc.g * s).dot(s));
    // Roundoff guard: the quadratic form is bounded by normalization.
    if v < 0.0 && v > -1e-12 {
        0.0
    } else {
        v
    }
}

/// Component-wise residual of the stationarity system at `(theta, phi,
/// lambda)`.
pub fn stationarity_residual(
    state: &SymmetricState,
    theta: f64,
    phi: f64,
    lambda: f64,
) -> Vector3<f64> {
    let rc = reduced_correlations(state);
    residual_from_vector(
        &rc,
        &SphericalDirection::new(theta, phi).unit_vector(),
        lambda,
    )
}

pub(crate) fn residual_from_vector(
    rc: &ReducedCorrelations,
    s: &Vector3<f64>,
    lambda: f64,
) -> Vector3<f64> {
    rc.r + rc.g * s - lambda * s
}

/// Max-norm of the stationarity residual.
pub fn residual_max_norm(state: &SymmetricState, p: &StationaryPoint) -> f64 {
    stationarity_residual(state, p.direction.theta, p.direction.phi, p.lambda).amax()
}

/// Squared length scale of the zero-multiplier construction,
/// `l^2 = g^2 + t^2 - 2 g t cos(2 gamma)`.
fn ell_sq(state: &SymmetricState) -> f64 {
    let (g, t) = (state.g(), state.t());
    g * g + t * t - 2.0 * g * t * (2.0 * state.gamma()).cos()
}

/// The `lambda = 0` stationary point, in closed form for arbitrary phase.
///
/// Undefined when `g = t` and `h^2 l^2 = 0` (the direction degenerates).
pub fn lambda_zero_branch(state: &SymmetricState) -> Result<StationaryPoint> {
    let (g, t, h, gamma) = (state.g(), state.t(), state.h(), state.gamma());
    let l2 = ell_sq(state);
    let dsq = g * g - t * t;
    let denom = h * h * l2 + dsq * dsq;
    if denom < 1e-18 {
        return Err(Error::LambdaZeroUndefined);
    }
    let (sin_g, cos_g) = gamma.sin_cos();
    let s = Vector3::new(
        -2.0 * h * (g - t) * (g - t) * (g + t) * cos_g / denom,
        2.0 * h * (g - t) * (g + t) * (g + t) * sin_g / denom,
        (h * h * l2 - dsq * dsq) / denom,
    );
    let mu_sq = (g * g * h * h * l2 + t * t * dsq * dsq) / denom;
    Ok(StationaryPoint {
        direction: SphericalDirection::from_vector(s),
        lambda: 0.0,
        mu_sq,
        branch: Branch::Zero,
    })
}

/// The two distinct factors of the nearest product state `|q>|q>|q'>`
/// attached to the `lambda = 0` branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductStatePair {
    pub q: Qubit,
    pub q_prime: Qubit,
}

/// Closed-form nearest product state of the `lambda = 0` branch.
///
/// Satisfies `(<q| x <q|) |psi> = mu_0 |q'>` on the first two qubits.
pub fn nearest_product_lambda_zero(state: &SymmetricState) -> Result<ProductStatePair> {
    let point = lambda_zero_branch(state)?;
    let _ = point;
    let (g, t, h, gamma) = (state.g(), state.t(), state.h(), state.gamma());
    let l2 = ell_sq(state);
    let l = l2.sqrt();
    let dsq = g * g - t * t;
    if l == 0.0 {
        return Err(Error::LambdaZeroUndefined);
    }
    let (sin_g, cos_g) = gamma.sin_cos();
    let eta = Complex64::new((g - t) * cos_g / l, (g + t) * sin_g / l);
    // eta is unit-modulus by construction of l.
    let q = Qubit::new(
        Complex64::new(h * l, 0.0),
        -Complex64::new(dsq, 0.0) * eta.conj(),
    )?;
    let phase_gamma = Complex64::from_polar(1.0, gamma);
    let qp0 = Complex64::new(g * h * h * l2, 0.0) + Complex64::new(t * dsq * dsq, 0.0) * eta * eta;
    let qp1 = eta
        * Complex64::new(h * dsq, 0.0)
        * (Complex64::new(dsq, 0.0) * phase_gamma * eta - Complex64::new(2.0 * l * t, 0.0));
    let q_prime = Qubit::new(qp0, qp1)?;
    Ok(ProductStatePair { q, q_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::contract_first_pair;
    use crate::qstate::UVPoint;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn random_state(rng: &mut impl Rng, gamma: f64) -> SymmetricState {
        let u = rng.gen_range(0.0..FRAC_PI_2);
        let v = rng.gen_range(0.0..FRAC_PI_2);
        SymmetricState::from_uv(UVPoint::new(u, v).unwrap(), gamma).unwrap()
    }

    #[test]
    fn reduced_correlations_t0() {
        let s = SymmetricState::from_params(0.6, 0.0, 0.8, 0.0).unwrap();
        let rc = reduced_correlations(&s);
        assert!((rc.r - Vector3::new(0.0, 0.0, 0.36 - 0.64)).norm() < 1e-15);
        let expect = Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, 1.0));
        assert!((rc.g - expect).norm() < 1e-15);
    }

    #[test]
    fn reduced_correlations_w() {
        let s = SymmetricState::from_params(0.0, 3f64.sqrt().recip(), 0.0, 0.0).unwrap();
        let rc = reduced_correlations(&s);
        assert!((rc.r - Vector3::new(0.0, 0.0, -1.0 / 3.0)).norm() < 1e-14);
        let expect = Matrix3::from_diagonal(&Vector3::new(2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0));
        assert!((rc.g - expect).norm() < 1e-14);
    }

    #[test]
    fn reduced_correlations_match_partial_trace() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let rc = reduced_correlations(&s);
            let gc = reduced_correlations_general(&s.state_vector().general());
            assert!((gc.r1 - gc.r2).amax() < 1e-12);
            assert!((rc.r - gc.r1).amax() < 1e-12);
            assert!((rc.g - gc.g).amax() < 1e-12);
            assert!((rc.g - rc.g.transpose()).amax() < 1e-14);
        }
    }

    #[test]
    fn eigenvalue_north_pole_is_g_sq() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let v = eigenvalue_from_direction(&s, &SphericalDirection::new(0.0, 0.0));
            assert!((v - s.g() * s.g()).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvalue_w_poles() {
        let w = SymmetricState::from_params(0.0, 3f64.sqrt().recip(), 0.0, 0.0).unwrap();
        let north = eigenvalue_from_direction(&w, &SphericalDirection::new(0.0, 0.0));
        assert!(north.abs() < 1e-14);
        let south = eigenvalue_from_direction(&w, &SphericalDirection::new(PI, 0.0));
        // Independent route: the overlap of the |1 1 q'> family maximized
        // over q' is the squared norm of the <11| contraction.
        let v = contract_first_pair(
            &w.state_vector().general(),
            &crate::qstate::Qubit::one(),
            &crate::qstate::Qubit::one(),
        );
        let direct = v[0].norm_sqr() + v[1].norm_sqr();
        assert!((direct - 1.0 / 3.0).abs() < 1e-14);
        assert!((south - direct).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let d = SphericalDirection::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
            let v = eigenvalue_from_direction(&s, &d);
            assert!((0.0..=1.0 + 1e-12).contains(&v), "v = {v}");
        }
    }

    #[test]
    fn residual_principal_point() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let lambda = 2.0 * (s.g() * s.g() - s.t() * s.t());
            let r = stationarity_residual(&s, 0.0, 0.37, lambda);
            assert!(r.amax() < 1e-13);
        }
    }

    #[test]
    fn residual_lambda_zero_gamma0() {
        let s = SymmetricState::from_params(0.3, 0.35, 0.6873, 0.0).unwrap();
        let (g, t, h) = (s.g(), s.t(), s.h());
        // z = -(g+t)/h with lambda = 0; negative z lands at phi = pi.
        let z = -(g + t) / h;
        let theta = 2.0 * z.abs().atan();
        let r = stationarity_residual(&s, theta, PI, 0.0);
        assert!(r.amax() < 1e-12);
    }

    #[test]
    fn residual_nonzero_off_solution() {
        let s = SymmetricState::from_params(0.5, 0.4, 0.517, 0.3).unwrap();
        let r = stationarity_residual(&s, 1.0, 2.0, 0.5);
        assert!(r.amax() > 1e-3);
    }

    #[test]
    fn lambda_zero_example_gamma0() {
        let s = SymmetricState::from_params(0.0, 0.5, 0.5, 0.0).unwrap();
        let p = lambda_zero_branch(&s).unwrap();
        // Independent route: (g^2 h^2 + t^2 (g+t)^2) / (h^2 + (g+t)^2).
        let (g, t, h) = (s.g(), s.t(), s.h());
        let expect = (g * g * h * h + t * t * (g + t) * (g + t)) / (h * h + (g + t) * (g + t));
        assert!((expect - 0.125).abs() < 1e-15);
        assert!((p.mu_sq - expect).abs() < 1e-14);
        assert!(residual_max_norm(&s, &p) < RESIDUAL_TOL);
    }

    #[test]
    fn lambda_zero_matches_fixed_phase_tables() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let s = random_state(&mut rng, FRAC_PI_2);
            let p = lambda_zero_branch(&s).unwrap();
            let (g, t, h) = (s.g(), s.t(), s.h());
            let nu1 = (g * g * h * h + t * t * (g - t) * (g - t)) / (h * h + (g - t) * (g - t));
            assert!((p.mu_sq - nu1).abs() < 1e-12);

            let s4 = random_state(&mut rng, FRAC_PI_4);
            let p4 = lambda_zero_branch(&s4).unwrap();
            let (g, t, h) = (s4.g(), s4.t(), s4.h());
            let (g2, t2, h2) = (g * g, t * t, h * h);
            let rho0 = (g2 * (g2 + t2) * h2 + t2 * (g2 - t2) * (g2 - t2))
                / (h2 * (g2 + t2) + (g2 - t2) * (g2 - t2));
            assert!((p4.mu_sq - rho0).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_zero_phase_sign_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let gamma = rng.gen_range(0.0..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let a = lambda_zero_branch(&s).unwrap();
            let b = lambda_zero_branch(&s.conjugate()).unwrap();
            assert!((a.mu_sq - b.mu_sq).abs() < 1e-14);
        }
    }

    #[test]
    fn lambda_zero_residual_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..500 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            match lambda_zero_branch(&s) {
                Ok(p) => assert!(residual_max_norm(&s, &p) < RESIDUAL_TOL),
                Err(Error::LambdaZeroUndefined) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn lambda_zero_degenerate_errors() {
        // g = t with h l^2 = 0: gamma = 0 makes l = 0.
        let t = (1.0f64 / 4.0).sqrt();
        let s = SymmetricState::from_params(t, t, 0.0, 0.0).unwrap();
        assert!(matches!(
            lambda_zero_branch(&s),
            Err(Error::LambdaZeroUndefined)
        ));
    }

    #[test]
    fn nearest_product_gamma0_real_forms() {
        let (g, t) = (0.55f64, 0.32);
        let h = (1.0 - g * g - 3.0 * t * t).sqrt();
        let s = SymmetricState::from_params(g, t, h, 0.0).unwrap();
        let pair = nearest_product_lambda_zero(&s).unwrap();
        let m = (h * h + (g + t) * (g + t)).sqrt();
        // q = (h|0> - (g+t)|1>)/m up to a global phase.
        let q_ref = Qubit::new(
            Complex64::new(h / m, 0.0),
            Complex64::new(-(g + t) / m, 0.0),
        )
        .unwrap();
        assert!((pair.q.inner(&q_ref).norm() - 1.0).abs() < 1e-12);

        let num0 = g * h * h + t * (g + t) * (g + t);
        let num1 = h * (g * g - t * t);
        let nn = (num0 * num0 + num1 * num1).sqrt();
        let qp_ref = Qubit::new(
            Complex64::new(num0 / nn, 0.0),
            Complex64::new(num1 / nn, 0.0),
        )
        .unwrap();
        assert!((pair.q_prime.inner(&qp_ref).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_product_gamma_half_orthogonality_on_c3_zero() {
        // t = 0.2; solve C3 = g h^2 - (g-t)^2 (g+2t) = 0 with the
        // normalization constraint by bisection in g.
        let t = 0.2f64;
        let c3 = |g: f64| {
            let h2 = 1.0 - g * g - 3.0 * t * t;
            g * h2 - (g - t) * (g - t) * (g + 2.0 * t)
        };
        let (mut lo, mut hi) = (0.5f64, 0.9f64);
        assert!(c3(lo) > 0.0 && c3(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if c3(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let g = 0.5 * (lo + hi);
        let h = (1.0 - g * g - 3.0 * t * t).sqrt();
        let s = SymmetricState::from_params(g, t, h, FRAC_PI_2).unwrap();
        let pair = nearest_product_lambda_zero(&s).unwrap();
        assert!(pair.q.inner(&pair.q_prime).norm() < 1e-10);

        // And the A-type closed form: q = (h|0> + i(g-t)|1>)/sqrt(h^2+(g-t)^2).
        let q = pair.q.canonicalized();
        let m = (h * h + (g - t) * (g - t)).sqrt();
        assert!((q.a0.re - h / m).abs() < 1e-12);
        assert!((q.a1 - Complex64::new(0.0, (g - t) / m)).norm() < 1e-12);
    }

    #[test]
    fn nearest_product_gamma0_orthogonality_on_d1_zero() {
        // t = 0, g = h = 1/sqrt(2) sits on D1 = 0.
        let r = 2f64.sqrt().recip();
        let s = SymmetricState::from_params(r, 0.0, r, 0.0).unwrap();
        let pair = nearest_product_lambda_zero(&s).unwrap();
        assert!(pair.q.inner(&pair.q_prime).norm() < 1e-12);
    }

    #[test]
    fn nearest_product_reconstruction_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut tested = 0;
        while tested < 1000 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let pair = match nearest_product_lambda_zero(&s) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let mu0 = lambda_zero_branch(&s).unwrap().mu_sq.sqrt();
            let psi = s.state_vector().general();
            let v = contract_first_pair(&psi, &pair.q, &pair.q);
            let resid = ((v[0] - mu0 * pair.q_prime.a0).norm_sqr()
                + (v[1] - mu0 * pair.q_prime.a1).norm_sqr())
            .sqrt();
            assert!(resid < 1e-10, "residual {resid} for {s:?}");
            tested += 1;
        }
    }

    #[test]
    fn lambda_zero_direction_matches_bloch_of_q() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..100 {
            let gamma = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            let s = random_state(&mut rng, gamma);
            let (Ok(p), Ok(pair)) = (lambda_zero_branch(&s), nearest_product_lambda_zero(&s))
            else {
                continue;
            };
            let sb = pair.q.bloch();
            let sv = p.direction.unit_vector();
            assert!((sv - Vector3::new(sb[0], sb[1], sb[2])).amax() < 1e-10);
        }
    }
}
