//! Parameter-space sweeps over the `(u, v)` square at fixed phase: per-cell
//! overlap records, applicable-domain maps with connected-component counts,
//! and criterion zero-curve traces.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rayon::prelude::*;

use crate::analytic::{criteria, CriteriaValues};
use crate::qstate::{fmt_f64, SymmetricState, UVPoint};
use crate::solver;
use crate::stationarity::Branch;
use crate::Result;

/// One evaluated sweep cell.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub u: f64,
    pub v: f64,
    pub g: f64,
    pub t: f64,
    pub h: f64,
    pub gamma: f64,
    pub p_max: f64,
    pub geometric_measure: f64,
    pub branch: Branch,
    pub d1: f64,
    pub c2: f64,
    pub c3: f64,
    pub boundary: bool,
}

fn cell_center(i: usize, grid_n: usize) -> f64 {
    (i as f64 + 0.5) * FRAC_PI_2 / grid_n as f64
}

fn evaluate_grid(gamma: f64, grid_n: usize) -> Result<Vec<SweepRecord>> {
    let rows: Result<Vec<Vec<SweepRecord>>> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let u = cell_center(i, grid_n);
            let mut row = Vec::with_capacity(grid_n);
            for j in 0..grid_n {
                let v = cell_center(j, grid_n);
                let state = SymmetricState::from_uv(UVPoint::new(u, v)?, gamma)?;
                let report = solver::solve_report(&state)?;
                let crit = criteria(&state);
                row.push(SweepRecord {
                    u,
                    v,
                    g: state.g(),
                    t: state.t(),
                    h: state.h(),
                    gamma: state.gamma(),
                    p_max: report.p_max,
                    geometric_measure: 1.0 - report.p_max,
                    branch: report.branch,
                    d1: crit.d1,
                    c2: crit.c2,
                    c3: crit.c3,
                    boundary: report.boundary,
                });
            }
            Ok(row)
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Evaluates `P_max` at every cell center of a `grid_n x grid_n` grid,
/// sorted row-major by `(i, j)`.
pub fn run_sweep(gamma: f64, grid_n: usize) -> Result<Vec<SweepRecord>> {
    evaluate_grid(gamma, grid_n)
}

/// A branch-labelled grid with its applicable-domain count.
#[derive(Debug, Clone)]
pub struct DomainMap {
    pub grid_n: usize,
    pub labels: Vec<Branch>,
    /// Connected components of equal labels under 4-neighbor adjacency.
    pub domain_count: usize,
    /// Cells where the top two branch values differ by less than `1e-6`.
    pub boundary_cells: usize,
}

/// Branch label per cell and the connected-domain count.
///
/// Solver-labelled cells carry the multiplier rank of the winner (the
/// largest root is always rank 4), so a domain is a connected region where
/// one branch expression realizes the maximum.
pub fn domain_map(gamma: f64, grid_n: usize) -> Result<DomainMap> {
    let cells = evaluate_grid(gamma, grid_n)?;
    let labels: Vec<Branch> = cells.iter().map(|c| c.branch).collect();
    let boundary_cells = cells.iter().filter(|c| c.boundary).count();

    let mut component = vec![usize::MAX; cells.len()];
    let mut domain_count = 0;
    let mut stack = Vec::new();
    for start in 0..cells.len() {
        if component[start] != usize::MAX {
            continue;
        }
        domain_count += 1;
        component[start] = domain_count;
        stack.push(start);
        while let Some(k) = stack.pop() {
            let (i, j) = (k / grid_n, k % grid_n);
            let mut neighbors = Vec::with_capacity(4);
            if i > 0 {
                neighbors.push(k - grid_n);
            }
            if i + 1 < grid_n {
                neighbors.push(k + grid_n);
            }
            if j > 0 {
                neighbors.push(k - 1);
            }
            if j + 1 < grid_n {
                neighbors.push(k + 1);
            }
            for n in neighbors {
                if component[n] == usize::MAX && labels[n] == labels[k] {
                    component[n] = domain_count;
                    stack.push(n);
                }
            }
        }
    }

    Ok(DomainMap {
        grid_n,
        labels,
        domain_count,
        boundary_cells,
    })
}

/// Criterion polynomials whose zero curves bound applicable domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    D1,
    C2,
    C3,
}

impl Criterion {
    fn value(&self, c: &CriteriaValues) -> f64 {
        match self {
            Criterion::D1 => c.d1,
            Criterion::C2 => c.c2,
            Criterion::C3 => c.c3,
        }
    }
}

/// Zero crossings of a criterion polynomial, bisected along `v` at
/// `samples` columns in `u`. Columns without a sign change contribute
/// nothing; an empty result is valid.
pub fn boundary_trace(gamma: f64, criterion: Criterion, samples: usize) -> Result<Vec<(f64, f64)>> {
    let samples = samples.max(2);
    let scan = 256;
    let mut out = Vec::new();
    for i in 0..samples {
        let u = cell_center(i, samples);
        let eval = |v: f64| -> Result<f64> {
            let s = SymmetricState::from_uv(UVPoint::new(u, v)?, gamma)?;
            Ok(criterion.value(&criteria(&s)))
        };
        let mut prev_v = 1e-9;
        let mut prev_f = eval(prev_v)?;
        for k in 1..=scan {
            let v = (k as f64 / scan as f64) * (FRAC_PI_2 - 2e-9) + 1e-9;
            let f = eval(v)?;
            if prev_f == 0.0 {
                out.push((u, prev_v));
            } else if prev_f * f < 0.0 {
                let (mut lo, mut hi, mut flo) = (prev_v, v, prev_f);
                while hi - lo > 1e-10 {
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid)?;
                    if flo * fm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                out.push((u, 0.5 * (lo + hi)));
            }
            prev_v = v;
            prev_f = f;
        }
    }
    Ok(out)
}

/// Writes sweep records as CSV with 17-significant-digit floats.
pub fn write_csv<W: Write>(records: &[SweepRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "u,v,g,t,h,gamma,p_max,G,branch,D1,C2,C3,boundary")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.u),
            fmt_f64(r.v),
            fmt_f64(r.g),
            fmt_f64(r.t),
            fmt_f64(r.h),
            fmt_f64(r.gamma),
            fmt_f64(r.p_max),
            fmt_f64(r.geometric_measure),
            r.branch,
            fmt_f64(r.d1),
            fmt_f64(r.c2),
            fmt_f64(r.c3),
            u8::from(r.boundary)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn sweep_corner_values() {
        let n = 120;
        let recs = run_sweep(0.0, n).unwrap();
        assert_eq!(recs.len(), n * n);
        let at = |i: usize, j: usize| &recs[i * n + j];
        // Near g = 1 (u ~ pi/2, v ~ 0) and near h = 1 (u ~ 0): product states.
        assert!(at(n - 1, 0).p_max > 0.99);
        assert!(at(0, n / 2).p_max > 0.99);
        // W corner.
        let w = at(n - 1, n - 1);
        assert!((w.p_max - 4.0 / 9.0).abs() < 0.01, "{}", w.p_max);
        // Geometric measure is exactly 1 - p_max.
        for r in &recs {
            assert_eq!(r.geometric_measure, 1.0 - r.p_max);
        }
    }

    #[test]
    fn sweep_continuity_bound() {
        let n = 50;
        let recs = run_sweep(0.0, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let p = recs[i * n + j].p_max;
                if j + 1 < n {
                    assert!((recs[i * n + j + 1].p_max - p).abs() < 5.0 / n as f64);
                }
                if i + 1 < n {
                    assert!((recs[(i + 1) * n + j].p_max - p).abs() < 5.0 / n as f64);
                }
            }
        }
    }

    #[test]
    fn sweep_pmax_lower_bound() {
        let recs = run_sweep(FRAC_PI_4, 20).unwrap();
        for r in &recs {
            assert!(r.p_max >= (r.g * r.g).max(r.h * r.h) - 1e-10);
        }
    }

    #[test]
    fn domain_counts_small_grids() {
        assert_eq!(domain_map(0.0, 64).unwrap().domain_count, 2);
        assert_eq!(domain_map(FRAC_PI_2, 64).unwrap().domain_count, 3);
        assert_eq!(domain_map(FRAC_PI_4, 32).unwrap().domain_count, 2);
    }

    #[test]
    fn solver_domain_counts_off_exact_phase() {
        // Just off the exact phases the dispatcher uses the Newton solver;
        // the rank labels must keep each domain in one piece.
        assert_eq!(domain_map(11.0 * PI / 24.0, 48).unwrap().domain_count, 2);
        assert_eq!(domain_map(1e-9, 32).unwrap().domain_count, 2);
    }

    #[test]
    fn trace_c2_c3_intersect_at_triple_point() {
        let u_star = (2f64.sqrt() / 3.0).acos();
        let v_star = (3f64.sqrt() / 2.0).atan();

        // Traced points of both curves come within column spacing of the
        // intersection.
        let c2 = boundary_trace(FRAC_PI_2, Criterion::C2, 600).unwrap();
        let c3 = boundary_trace(FRAC_PI_2, Criterion::C3, 600).unwrap();
        let near = |pts: &[(f64, f64)]| {
            pts.iter()
                .map(|(u, v)| ((u - u_star).powi(2) + (v - v_star).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        };
        assert!(
            near(&c2) < 3e-3,
            "C2 misses the triple point: {}",
            near(&c2)
        );
        assert!(
            near(&c3) < 3e-3,
            "C3 misses the triple point: {}",
            near(&c3)
        );

        // The actual curve intersection: locate each criterion zero in v at
        // fixed u (the crossing closest to the triple point; the columns cut
        // the curves twice), then bisect u on the difference of the curves.
        let zero_v = |u: f64, crit: Criterion| -> f64 {
            let f = |v: f64| {
                let s = SymmetricState::from_uv(UVPoint::new(u, v).unwrap(), FRAC_PI_2).unwrap();
                crit.value(&criteria(&s))
            };
            let scan = 512;
            let mut best = f64::NAN;
            for k in 0..scan {
                let a = 1e-9 + (k as f64 / scan as f64) * (FRAC_PI_2 - 2e-9);
                let b = 1e-9 + ((k + 1) as f64 / scan as f64) * (FRAC_PI_2 - 2e-9);
                if f(a) * f(b) > 0.0 {
                    continue;
                }
                let (mut lo, mut hi) = (a, b);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if f(lo) * f(mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let v = 0.5 * (lo + hi);
                if best.is_nan() || (v - v_star).abs() < (best - v_star).abs() {
                    best = v;
                }
            }
            assert!(!best.is_nan(), "no crossing in column u = {u}");
            best
        };
        // Walk the C2 curve and find where C3 changes sign along it.
        let c3_on_c2 = |u: f64| {
            let v = zero_v(u, Criterion::C2);
            let s = SymmetricState::from_uv(UVPoint::new(u, v).unwrap(), FRAC_PI_2).unwrap();
            criteria(&s).c3
        };
        // The C2 curve turns around just below the triple point; stay within
        // the column range it actually spans.
        let (mut lo, mut hi) = (u_star - 0.001, u_star + 0.001);
        assert!(c3_on_c2(lo) * c3_on_c2(hi) < 0.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if c3_on_c2(lo) * c3_on_c2(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let u_cross = 0.5 * (lo + hi);
        let v_cross = zero_v(u_cross, Criterion::C2);
        assert!((u_cross - u_star).abs() < 1e-6, "u = {u_cross}");
        assert!((v_cross - v_star).abs() < 1e-6, "v = {v_cross}");
    }

    #[test]
    fn domain_counts_stable_under_refinement() {
        for (gamma, expect) in [(0.0, 2usize), (FRAC_PI_4, 2), (FRAC_PI_2, 3)] {
            assert_eq!(domain_map(gamma, 150).unwrap().domain_count, expect);
            assert_eq!(domain_map(gamma, 300).unwrap().domain_count, expect);
        }
        assert_eq!(domain_map(PI / 3.0, 150).unwrap().domain_count, 2);
    }

    #[test]
    fn trace_d1_equals_branch_crossing() {
        let pts = boundary_trace(0.0, Criterion::D1, 100).unwrap();
        assert!(!pts.is_empty());
        for (u, v) in pts {
            let s = SymmetricState::from_uv(UVPoint::new(u, v).unwrap(), 0.0).unwrap();
            let entries = crate::analytic::eigenvalues_gamma0(&s);
            let p = entries
                .iter()
                .find(|e| e.branch == Branch::P)
                .and_then(|e| e.mu_sq)
                .unwrap();
            let plus = entries
                .iter()
                .find(|e| e.branch == Branch::Plus)
                .and_then(|e| e.mu_sq)
                .unwrap();
            assert!(
                (p - plus).abs() < 1e-8,
                "gap {} at ({u},{v})",
                (p - plus).abs()
            );
        }
    }

    #[test]
    fn trace_d1_touches_t0_edge_at_g_equals_h() {
        // On the edge itself (t = 0) the criterion is g(h^2 - g^2), zero at
        // g = h, i.e. u = pi/4.
        let crit_at = |u: f64| {
            let s = SymmetricState::from_uv(UVPoint::new(u, 0.0).unwrap(), 0.0).unwrap();
            crate::analytic::criteria(&s).d1
        };
        assert!(crit_at(PI / 4.0 - 0.01) > 0.0);
        assert!(crit_at(PI / 4.0 + 0.01) < 0.0);
        assert!(crit_at(PI / 4.0).abs() < 1e-15);

        // The traced curve leaves that edge point with v^2 ~ 2 (u - pi/4).
        let pts = boundary_trace(0.0, Criterion::D1, 400).unwrap();
        let (u, v) = pts
            .iter()
            .copied()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(v < 0.1, "lowest traced v = {v}");
        assert!(
            ((u - PI / 4.0) - v * v / 2.0).abs() < 5e-3,
            "u = {u}, v = {v}"
        );
    }

    #[test]
    fn csv_format() {
        let recs = run_sweep(0.0, 3).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "u,v,g,t,h,gamma,p_max,G,branch,D1,C2,C3,boundary"
        );
        assert_eq!(text.lines().count(), 10);
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 13);
        // 17 significant digits in exponent form.
        assert!(first.split(',').next().unwrap().contains("e-"));
        assert!(!text.contains('\r'));
    }
}
