//! The symmetric state family, its parameterizations and reference states.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Deserialize;

use crate::{Error, Result};

/// Tolerance below which a normalization deviation is kept as-is instead of
/// being silently rescaled.
pub const NORM_KEEP_TOL: f64 = 1e-9;

/// A normalized symmetric three-qubit state `g|000> + t(|011>+|101>+|110>)
/// + e^{i gamma} h|111>`.
///
/// `g`, `t`, `h` are non-negative, `g^2 + 3t^2 + h^2 = 1`, and `gamma` is
/// stored in `[-pi/2, pi/2]` (the phase has period `pi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricState {
    g: f64,
    t: f64,
    h: f64,
    gamma: f64,
}

impl SymmetricState {
    /// Builds a state from raw amplitudes, rescaling when the squared norm
    /// deviates from 1 by more than `1e-9`.
    ///
    /// `gamma` outside `[-pi/2, pi/2]` is reduced modulo `pi`; non-finite
    /// inputs and the all-zero amplitude vector are rejected.
    pub fn from_params(g: f64, t: f64, h: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("g", g), ("t", t), ("h", h)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::ParamOutOfRange(format!("{name} = {v}")));
            }
        }
        if !gamma.is_finite() {
            return Err(Error::ParamOutOfRange(format!("gamma = {gamma}")));
        }
        let norm_sq = g * g + 3.0 * t * t + h * h;
        if norm_sq == 0.0 {
            return Err(Error::DegenerateState);
        }
        let (g, t, h) = if (norm_sq - 1.0).abs() > NORM_KEEP_TOL {
            let s = norm_sq.sqrt().recip();
            (g * s, t * s, h * s)
        } else {
            (g, t, h)
        };
        Ok(Self {
            g,
            t,
            h,
            gamma: reduce_gamma(gamma),
        })
    }

    /// Builds the state from the `(u, v)` chart: `g = sin u cos v`,
    /// `t = sin u sin v / sqrt(3)`, `h = cos u`. Normalization holds by
    /// construction.
    pub fn from_uv(p: UVPoint, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::ParamOutOfRange(format!("gamma = {gamma}")));
        }
        let (su, cu) = p.u.sin_cos();
        let (sv, cv) = p.v.sin_cos();
        Ok(Self {
            g: su * cv,
            t: su * sv / 3f64.sqrt(),
            h: cu,
            gamma: reduce_gamma(gamma),
        })
    }

    /// Inverse of [`SymmetricState::from_uv`]: `u = arccos h`,
    /// `v = atan2(sqrt(3) t, g)`.
    pub fn to_uv(&self) -> UVPoint {
        UVPoint {
            u: self.h.clamp(-1.0, 1.0).acos(),
            v: (3f64.sqrt() * self.t).atan2(self.g),
        }
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same amplitudes with the opposite phase; overlaps are invariant under
    /// this conjugation.
    pub fn conjugate(&self) -> Self {
        Self {
            gamma: -self.gamma,
            ..*self
        }
    }

    /// Eight-amplitude computational-basis vector of the state.
    pub fn state_vector(&self) -> StateVector {
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[0b000] = Complex64::new(self.g, 0.0);
        amps[0b011] = Complex64::new(self.t, 0.0);
        amps[0b101] = Complex64::new(self.t, 0.0);
        amps[0b110] = Complex64::new(self.t, 0.0);
        amps[0b111] = Complex64::from_polar(self.h, self.gamma);
        StateVector(amps)
    }

    /// Serializes as `{"g":...,"t":...,"h":...,"gamma":...}` with
    /// 17-significant-digit floats.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"g\":{},\"t\":{},\"h\":{},\"gamma\":{}}}",
            fmt_f64(self.g),
            fmt_f64(self.t),
            fmt_f64(self.h),
            fmt_f64(self.gamma)
        )
    }

    /// Parses the JSON form written by [`SymmetricState::to_json`].
    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            g: f64,
            t: f64,
            h: f64,
            gamma: f64,
        }
        let raw: Raw = serde_json::from_str(s)
            .map_err(|e| Error::ParamOutOfRange(format!("invalid state JSON: {e}")))?;
        Self::from_params(raw.g, raw.t, raw.h, raw.gamma)
    }
}

/// Formats a float with 17 significant digits in exponent form.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn reduce_gamma(gamma: f64) -> f64 {
    if (-FRAC_PI_2..=FRAC_PI_2).contains(&gamma) {
        return gamma;
    }
    let r = gamma.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

/// A point of the `(u, v)` chart, both coordinates in `[0, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UVPoint {
    u: f64,
    v: f64,
}

impl UVPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        for (name, x) in [("u", u), ("v", v)] {
            if !x.is_finite() || !(0.0..=FRAC_PI_2 + 1e-12).contains(&x) {
                return Err(Error::ParamOutOfRange(format!("{name} = {x}")));
            }
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// A single-qubit pure state `a0|0> + a1|1>`, unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    pub a0: Complex64,
    pub a1: Complex64,
}

impl Qubit {
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        Ok(Self {
            a0: a0 / n,
            a1: a1 / n,
        })
    }

    pub fn zero() -> Self {
        Self {
            a0: Complex64::new(1.0, 0.0),
            a1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            a0: Complex64::new(0.0, 0.0),
            a1: Complex64::new(1.0, 0.0),
        }
    }

    /// State with Bloch vector `(sin t cos p, sin t sin p, cos t)`.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        Self {
            a0: Complex64::new((theta / 2.0).cos(), 0.0),
            a1: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// Bloch vector `<q|sigma|q>`.
    pub fn bloch(&self) -> [f64; 3] {
        let cross = self.a0.conj() * self.a1;
        [
            2.0 * cross.re,
            2.0 * cross.im,
            self.a0.norm_sqr() - self.a1.norm_sqr(),
        ]
    }

    /// Fixes the global phase so the largest-magnitude amplitude is real
    /// and non-negative.
    pub fn canonicalized(&self) -> Self {
        let lead = if self.a0.norm_sqr() >= self.a1.norm_sqr() {
            self.a0
        } else {
            self.a1
        };
        let n = lead.norm();
        if n == 0.0 {
            return *self;
        }
        let phase = lead.conj() / n;
        Self {
            a0: self.a0 * phase,
            a1: self.a1 * phase,
        }
    }

    pub fn inner(&self, other: &Qubit) -> Complex64 {
        self.a0.conj() * other.a0 + self.a1.conj() * other.a1
    }
}

/// Eight complex amplitudes indexed by `|abc>` with `a` the most
/// significant bit. Produced from a [`SymmetricState`], so only indices
/// 000, 011, 101, 110, 111 are populated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector(pub [Complex64; 8]);

impl StateVector {
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn general(&self) -> GeneralThreeQubitState {
        GeneralThreeQubitState(self.0)
    }
}

/// An arbitrary normalized three-qubit pure state (eight amplitudes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralThreeQubitState(pub [Complex64; 8]);

impl GeneralThreeQubitState {
    /// Normalizes the amplitude vector; errors if it is identically zero.
    pub fn new(amps: [Complex64; 8]) -> Result<Self> {
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        let mut out = amps;
        for a in &mut out {
            *a /= n;
        }
        Ok(Self(out))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Reference states used throughout the tests and examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedState {
    /// `alpha|000> + sqrt(1-alpha^2)|111>`.
    Ghz(f64),
    /// `(|011> + |101> + |110>)/sqrt(3)`.
    W,
    /// `(2/3)|000> + (1/3)(|011>+|101>+|110>) + i(sqrt(2)/3)|111>`,
    /// the state shared by three domains at `gamma = pi/2`.
    PsiW,
    /// `g|000> + t(|011>+|101>) + t3|110> + e^{i gamma} h|111>`, normalized.
    PartialSym {
        g: f64,
        t: f64,
        t3: f64,
        h: f64,
        gamma: f64,
    },
}

/// Canonical amplitude vector of a named reference state.
pub fn named_state(name: NamedState) -> Result<GeneralThreeQubitState> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match name {
        NamedState::Ghz(alpha) => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::ParamOutOfRange(format!("alpha = {alpha}")));
            }
            let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
            let mut amps = [zero; 8];
            amps[0b000] = c(alpha);
            amps[0b111] = c(beta);
            GeneralThreeQubitState::new(amps)
        }
        NamedState::W => {
            let t = 3f64.sqrt().recip();
            let mut amps = [zero; 8];
            amps[0b011] = c(t);
            amps[0b101] = c(t);
            amps[0b110] = c(t);
            GeneralThreeQubitState::new(amps)
        }
        NamedState::PsiW => {
            let mut amps = [zero; 8];
            amps[0b000] = c(2.0 / 3.0);
            amps[0b011] = c(1.0 / 3.0);
            amps[0b101] = c(1.0 / 3.0);
            amps[0b110] = c(1.0 / 3.0);
            amps[0b111] = Complex64::new(0.0, 2f64.sqrt() / 3.0);
            GeneralThreeQubitState::new(amps)
        }
        NamedState::PartialSym { g, t, t3, h, gamma } => {
            for (name, v) in [("g", g), ("t", t), ("t3", t3), ("h", h)] {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::ParamOutOfRange(format!("{name} = {v}")));
                }
            }
            let mut amps = [zero; 8];
            amps[0b000] = c(g);
            amps[0b011] = c(t);
            amps[0b101] = c(t);
            amps[0b110] = c(t3);
            amps[0b111] = Complex64::from_polar(h, gamma);
            GeneralThreeQubitState::new(amps)
        }
    }
}
