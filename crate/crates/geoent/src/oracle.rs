//! Brute-force maximal-overlap computation over product states.
//!
//! Two independent routes: alternating single-factor maximization on the
//! raw amplitude vector (works for any three-qubit state), and a Bloch
//! sphere grid search over symmetric directions. Both exist to validate the
//! closed-form and solver pipelines and deliberately share no code with
//! them beyond state construction.

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qstate::{GeneralThreeQubitState, Qubit, SymmetricState};
use crate::stationarity::{self, SphericalDirection};

/// Default RNG seed for restart sampling.
pub const DEFAULT_SEED: u64 = 42;

/// A fully separable three-qubit state `|q1>|q2>|q3>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductTriple {
    pub factors: [Qubit; 3],
}

impl ProductTriple {
    pub fn new(q1: Qubit, q2: Qubit, q3: Qubit) -> Self {
        Self {
            factors: [q1, q2, q3],
        }
    }

    fn canonicalized(&self) -> Self {
        Self {
            factors: [
                self.factors[0].canonicalized(),
                self.factors[1].canonicalized(),
                self.factors[2].canonicalized(),
            ],
        }
    }

    /// Deterministic total order on canonical amplitudes, used only to break
    /// exact ties between restarts.
    fn lex_key(&self) -> [f64; 12] {
        let mut k = [0.0; 12];
        for (i, q) in self.canonicalized().factors.iter().enumerate() {
            k[4 * i] = q.a0.re;
            k[4 * i + 1] = q.a0.im;
            k[4 * i + 2] = q.a1.re;
            k[4 * i + 3] = q.a1.im;
        }
        k
    }
}

/// Result of a brute-force overlap maximization.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub p_max: f64,
    pub triple: ProductTriple,
    pub iterations: usize,
    pub restarts_used: usize,
}

/// Squared overlap `|<q1 q2 q3|psi>|^2`.
pub fn overlap(triple: &ProductTriple, psi: &GeneralThreeQubitState) -> f64 {
    let [q1, q2, q3] = &triple.factors;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, amp) in psi.0.iter().enumerate() {
        let a = if i & 4 == 0 { q1.a0 } else { q1.a1 };
        let b = if i & 2 == 0 { q2.a0 } else { q2.a1 };
        let c = if i & 1 == 0 { q3.a0 } else { q3.a1 };
        acc += a.conj() * b.conj() * c.conj() * amp;
    }
    acc.norm_sqr()
}

/// `<q1| x <q2|` applied to the first two qubits of `psi`; the result is an
/// unnormalized single-qubit vector on the third.
pub fn contract_first_pair(psi: &GeneralThreeQubitState, q1: &Qubit, q2: &Qubit) -> [Complex64; 2] {
    contract_out(psi, 2, &[q1, q2])
}

/// Contracts all factors except `keep`, returning the unnormalized vector on
/// qubit `keep`. `others` are the fixed factors in qubit order.
fn contract_out(psi: &GeneralThreeQubitState, keep: usize, others: &[&Qubit; 2]) -> [Complex64; 2] {
    let mut v = [Complex64::new(0.0, 0.0); 2];
    for (i, amp) in psi.0.iter().enumerate() {
        let bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
        let mut coeff = *amp;
        let mut oi = 0;
        for (qubit, bit) in bits.iter().enumerate() {
            if qubit == keep {
                continue;
            }
            let q = others[oi];
            coeff *= if *bit == 0 { q.a0.conj() } else { q.a1.conj() };
            oi += 1;
        }
        v[bits[keep]] += coeff;
    }
    v
}

/// Optimal replacement for factor `k` with the other two held fixed, and the
/// overlap it achieves. `None` when the contraction vanishes.
pub fn optimal_factor(
    psi: &GeneralThreeQubitState,
    triple: &ProductTriple,
    k: usize,
) -> Option<(Qubit, f64)> {
    let others: [&Qubit; 2] = match k {
        0 => [&triple.factors[1], &triple.factors[2]],
        1 => [&triple.factors[0], &triple.factors[2]],
        _ => [&triple.factors[0], &triple.factors[1]],
    };
    let v = contract_out(psi, k, &others);
    let norm_sq = v[0].norm_sqr() + v[1].norm_sqr();
    if norm_sq == 0.0 {
        return None;
    }
    let n = norm_sq.sqrt();
    Some((
        Qubit {
            a0: v[0] / n,
            a1: v[1] / n,
        },
        norm_sq,
    ))
}

/// Product triple attached to a symmetric direction: `|q q q'>` with `q`
/// carrying the Bloch vector of `d` and `q'` the normalized contraction.
pub fn triple_from_direction(
    state: &SymmetricState,
    d: &SphericalDirection,
) -> Option<ProductTriple> {
    let q = d.qubit();
    let psi = state.state_vector().general();
    let v = contract_first_pair(&psi, &q, &q);
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        return None;
    }
    Some(ProductTriple::new(
        q,
        q,
        Qubit {
            a0: v[0] / norm,
            a1: v[1] / norm,
        },
    ))
}

fn random_qubit(rng: &mut impl Rng) -> Qubit {
    // Uniform on the Bloch sphere (area measure).
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let theta = z.clamp(-1.0, 1.0).acos();
    Qubit::from_bloch_angles(theta, phi)
}

/// Alternating maximization of `|<q1 q2 q3|psi>|^2` with the default seed.
pub fn alternating_maximize(
    psi: &GeneralThreeQubitState,
    restarts: usize,
    tol: f64,
) -> OracleResult {
    alternating_maximize_seeded(psi, restarts, tol, DEFAULT_SEED)
}

/// Alternating maximization with an explicit RNG seed.
///
/// From every random product triple, each step replaces one factor by the
/// normalized contraction of `psi` with the other two, which is the exact
/// single-factor maximizer; the overlap is therefore non-decreasing. Stops
/// when a full cycle gains less than `tol`.
pub fn alternating_maximize_seeded(
    psi: &GeneralThreeQubitState,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> OracleResult {
    let restarts = restarts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, ProductTriple)> = None;
    let mut iterations = 0;

    for _ in 0..restarts {
        let mut triple = ProductTriple::new(
            random_qubit(&mut rng),
            random_qubit(&mut rng),
            random_qubit(&mut rng),
        );
        let mut p = overlap(&triple, psi);
        for _cycle in 0..10_000 {
            let p_before = p;
            for k in 0..3 {
                match optimal_factor(psi, &triple, k) {
                    Some((q, val)) => {
                        triple.factors[k] = q;
                        p = val;
                    }
                    None => {
                        triple.factors[k] = random_qubit(&mut rng);
                        p = overlap(&triple, psi);
                    }
                }
            }
            iterations += 1;
            if p - p_before < tol {
                break;
            }
        }
        best = Some(match best {
            None => (p, triple),
            Some((bp, bt)) => {
                if p > bp || (p == bp && triple.lex_key() < bt.lex_key()) {
                    (p, triple)
                } else {
                    (bp, bt)
                }
            }
        });
    }

    let (p_max, triple) = best.expect("at least one restart");
    OracleResult {
        p_max,
        triple: triple.canonicalized(),
        iterations,
        restarts_used: restarts,
    }
}

/// Grid search of the symmetric-direction overlap `(1 + 2 r.s + s^T G s)/4`
/// over the Bloch sphere, followed by local ascent on the best cells.
pub fn grid_maximize_symmetric(state: &SymmetricState, resolution: usize) -> OracleResult {
    let resolution = resolution.max(64);
    let rc = stationarity::reduced_correlations(state);
    let eval = |s: &Vector3<f64>| stationarity::eigenvalue_from_vector(&rc, s);

    let n_theta = resolution;
    let n_phi = resolution;
    let mut values = vec![0.0f64; n_theta * n_phi];
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
        for j in 0..n_phi {
            let phi = (j as f64 + 0.5) * std::f64::consts::TAU / n_phi as f64;
            let s = SphericalDirection::new(theta, phi).unit_vector();
            values[i * n_phi + j] = eval(&s);
        }
    }
    // Include the poles explicitly; cell centers never sample them.
    let pole_candidates = [Vector3::new(0.0, 0.0, 1.0), Vector3::new(0.0, 0.0, -1.0)];

    // Local maxima of the grid (phi wraps, theta clamps), best first.
    let mut maxima: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n_theta {
        for j in 0..n_phi {
            let v = values[i * n_phi + j];
            let up = if i > 0 {
                values[(i - 1) * n_phi + j]
            } else {
                v
            };
            let down = if i + 1 < n_theta {
                values[(i + 1) * n_phi + j]
            } else {
                v
            };
            let left = values[i * n_phi + (j + n_phi - 1) % n_phi];
            let right = values[i * n_phi + (j + 1) % n_phi];
            if v >= up && v >= down && v >= left && v >= right {
                maxima.push((v, i, j));
            }
        }
    }
    maxima.sort_by(|a, b| b.0.total_cmp(&a.0));
    maxima.truncate(8);

    // Majorize-maximize ascent: s <- normalize(grad + c s) with c above the
    // spectral radius of G keeps the overlap non-decreasing.
    let c_shift = rc.g.norm() + 1.0;
    let mut iterations = 0;
    let mut refine = |start: Vector3<f64>| -> (f64, Vector3<f64>) {
        let mut s = start.normalize();
        let mut q = eval(&s);
        for _ in 0..5000 {
            iterations += 1;
            let step = (0.5 * (rc.r + rc.g * s) + c_shift * s).normalize();
            let qn = eval(&step);
            if qn <= q + 1e-15 {
                if qn > q {
                    s = step;
                }
                break;
            }
            s = step;
            q = qn;
        }
        (eval(&s), s)
    };

    let mut best_val = f64::NEG_INFINITY;
    let mut best_s = Vector3::new(0.0, 0.0, 1.0);
    let mut restarts_used = 0;
    for s in pole_candidates {
        let (v, sv) = refine(s);
        restarts_used += 1;
        if v > best_val {
            best_val = v;
            best_s = sv;
        }
    }
    for (_, i, j) in &maxima {
        let theta = (*i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
        let phi = (*j as f64 + 0.5) * std::f64::consts::TAU / n_phi as f64;
        let (v, sv) = refine(SphericalDirection::new(theta, phi).unit_vector());
        restarts_used += 1;
        if v > best_val {
            best_val = v;
            best_s = sv;
        }
    }

    let q = SphericalDirection::from_vector(best_s).qubit();
    let psi = state.state_vector().general();
    let v = contract_first_pair(&psi, &q, &q);
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let q3 = if norm > 0.0 {
        Qubit {
            a0: v[0] / norm,
            a1: v[1] / norm,
        }
    } else {
        Qubit::zero()
    };
    let triple = ProductTriple::new(q, q, q3).canonicalized();
    OracleResult {
        p_max: best_val,
        triple,
        iterations,
        restarts_used,
    }
}
