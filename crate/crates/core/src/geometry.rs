//! Moving boundary `K(t)`, the physical/reference mapping `x = K(t) y`, and the
//! variable coefficients of the equation transported to the fixed box.

use std::fmt;
use std::sync::Arc;

use crate::error::{BeamError, Result};

/// User-supplied boundary: returns `(K, K', K'')` at `t`.
pub type BoundaryFn = Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryKind {
    /// `K(t) = base + slope * t`
    LinearDrift {
        base: f64,
        slope: f64,
    },
    /// `K(t) = base + amplitude * (1 - exp(-rate * t))`
    ExponentialSaturation {
        base: f64,
        amplitude: f64,
        rate: f64,
    },
    Constant {
        value: f64,
    },
    Custom(BoundaryFn),
}

impl fmt::Debug for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::LinearDrift { base, slope } => f
                .debug_struct("LinearDrift")
                .field("base", base)
                .field("slope", slope)
                .finish(),
            BoundaryKind::ExponentialSaturation {
                base,
                amplitude,
                rate,
            } => f
                .debug_struct("ExponentialSaturation")
                .field("base", base)
                .field("amplitude", amplitude)
                .field("rate", rate)
                .finish(),
            BoundaryKind::Constant { value } => {
                f.debug_struct("Constant").field("value", value).finish()
            }
            BoundaryKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Admissible bounds `K0 <= K(t) <= K1` and `K'(t) <= K2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryBounds {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
}

#[derive(Debug, Clone)]
pub struct MovingBoundary {
    pub kind: BoundaryKind,
    /// When `None`, validation only checks positivity and the speed limit.
    pub bounds: Option<BoundaryBounds>,
}

/// `(K, K', K'')` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryState {
    pub k: f64,
    pub kp: f64,
    pub kpp: f64,
}

impl BoundaryState {
    pub fn speed_ratio(&self) -> f64 {
        self.kp / self.k
    }
}

impl MovingBoundary {
    pub fn new(kind: BoundaryKind) -> Self {
        MovingBoundary { kind, bounds: None }
    }

    pub fn with_bounds(mut self, bounds: BoundaryBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn constant(value: f64) -> Self {
        Self::new(BoundaryKind::Constant { value })
    }

    /// Linear drift `64 + t/2^7` (1D) or `64 + t/2^17` (2D).
    pub fn b1(dim: usize) -> Self {
        let slope = if dim == 1 {
            2f64.powi(-7)
        } else {
            2f64.powi(-17)
        };
        Self::new(BoundaryKind::LinearDrift { base: 64.0, slope })
    }

    /// Saturating growth `64 + 2(1 - e^-t)` (1D) or `64 + (1 - e^-t)/2^17` (2D).
    pub fn b2(dim: usize) -> Self {
        let amplitude = if dim == 1 { 2.0 } else { 2f64.powi(-17) };
        Self::new(BoundaryKind::ExponentialSaturation {
            base: 64.0,
            amplitude,
            rate: 1.0,
        })
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    {
        Self::new(BoundaryKind::Custom(Arc::new(f)))
    }

    /// Analytic `K(t)`, `K'(t)`, `K''(t)`.
    pub fn eval(&self, t: f64) -> Result<BoundaryState> {
        if !(t >= 0.0) {
            return Err(BeamError::InvalidBoundary {
                t,
                reason: "negative time".into(),
            });
        }
        let (k, kp, kpp) = match &self.kind {
            BoundaryKind::LinearDrift { base, slope } => (base + slope * t, *slope, 0.0),
            BoundaryKind::ExponentialSaturation {
                base,
                amplitude,
                rate,
            } => {
                let e = (-rate * t).exp();
                (
                    base + amplitude * (1.0 - e),
                    amplitude * rate * e,
                    -amplitude * rate * rate * e,
                )
            }
            BoundaryKind::Constant { value } => (*value, 0.0, 0.0),
            BoundaryKind::Custom(f) => f(t),
        };
        if !(k.is_finite() && kp.is_finite() && kpp.is_finite()) {
            return Err(BeamError::InvalidBoundary {
                t,
                reason: format!("non-finite value (K, K', K'') = ({k}, {kp}, {kpp})"),
            });
        }
        Ok(BoundaryState { k, kp, kpp })
    }

    /// Like [`eval`](Self::eval) but also rejects `K <= 0`.
    pub fn eval_positive(&self, t: f64) -> Result<BoundaryState> {
        let s = self.eval(t)?;
        if s.k <= 0.0 {
            return Err(BeamError::SingularMapping { t, k: s.k });
        }
        Ok(s)
    }

    /// Reference point `y` to physical point `x = K(t) y`.
    pub fn map_point(&self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        let s = self.eval_positive(t)?;
        Ok(y.iter().map(|yi| s.k * yi).collect())
    }

    /// Physical point back to the reference box.
    pub fn map_back(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        let s = self.eval_positive(t)?;
        Ok(x.iter().map(|xi| xi / s.k).collect())
    }

    /// Times at which a built-in kind attains its extrema of `K` and `K'` on
    /// `[0, horizon]`. Both built-in non-constant kinds are monotone.
    fn extremal_times(&self, horizon: f64) -> Vec<f64> {
        match self.kind {
            BoundaryKind::Custom(_) => Vec::new(),
            _ => vec![0.0, horizon],
        }
    }
}

/// `zeta0` in-plane load, `zeta1` nonlinear stiffness, `nu` damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParameters {
    pub zeta0: f64,
    pub zeta1: f64,
    pub nu: f64,
}

impl Default for BeamParameters {
    fn default() -> Self {
        BeamParameters {
            zeta0: 128.0,
            zeta1: 2.0,
            nu: 1.0,
        }
    }
}

impl BeamParameters {
    /// Checks `zeta1 > 0`, `nu > 0`. `allow_zero` admits zero for regression
    /// runs on the linear or undamped beam.
    pub fn validate(&self, allow_zero: bool) -> Result<()> {
        let ok = |v: f64| v.is_finite() && if allow_zero { v >= 0.0 } else { v > 0.0 };
        if !self.zeta0.is_finite() {
            return Err(BeamError::Config("zeta0 must be finite".into()));
        }
        if !ok(self.zeta1) {
            return Err(BeamError::Config(format!(
                "zeta1 = {} must be positive",
                self.zeta1
            )));
        }
        if !ok(self.nu) {
            return Err(BeamError::Config(format!(
                "nu = {} must be positive",
                self.nu
            )));
        }
        Ok(())
    }
}

/// Which lower-order terms are assembled into the discrete weak form.
///
/// `Consistent` integrates the strong operator by parts exactly, so the
/// assembled form agrees with the manufactured source. `Verbatim` uses
/// `a4` and `a5 = a3 + 2 (K'/K) a4` with the signs as printed; the two agree
/// whenever `K' = K'' = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeakForm {
    #[default]
    Consistent,
    Verbatim,
}

/// Pointwise coefficients at `(y, t)`. Only the first `dim` entries are used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub dim: usize,
    pub b1: f64,
    pub b2: f64,
    pub a1: [f64; 2],
    pub a2: [[f64; 2]; 2],
    pub a3: [f64; 2],
    pub a4: [f64; 2],
    pub a5: [f64; 2],
    /// Weak-form coefficient multiplying `(d_i v', w)`.
    pub weak_velocity: [f64; 2],
    /// Weak-form coefficient multiplying `(d_i v, w)`.
    pub weak_advection: [f64; 2],
}

pub fn eval_coefficients(
    boundary: &MovingBoundary,
    params: &BeamParameters,
    y: &[f64],
    t: f64,
    form: WeakForm,
) -> Result<CoefficientSet> {
    let s = boundary.eval_positive(t)?;
    Ok(coefficients_at(&s, params, y, form))
}

pub fn coefficients_at(
    s: &BoundaryState,
    params: &BeamParameters,
    y: &[f64],
    form: WeakForm,
) -> CoefficientSet {
    let dim = y.len();
    assert!(dim == 1 || dim == 2, "dimension must be 1 or 2");
    let (k, kp, kpp) = (s.k, s.kp, s.kpp);
    let k2 = k * k;
    let r = kp / k;
    let b2 = 1.0 / (k2 * k2);
    let mut c = CoefficientSet {
        dim,
        b1: params.zeta1 * b2,
        b2,
        a1: [0.0; 2],
        a2: [[0.0; 2]; 2],
        a3: [0.0; 2],
        a4: [0.0; 2],
        a5: [0.0; 2],
        weak_velocity: [0.0; 2],
        weak_advection: [0.0; 2],
    };
    for i in 0..dim {
        let yi = y[i];
        c.a1[i] = (params.zeta0 - 4.0 * (yi * kp).powi(2)) / k2;
        for j in 0..dim {
            c.a2[i][j] = 4.0 * yi * y[j] * r * r;
        }
        c.a3[i] = (2.0 * yi * kp * kp - yi * k * (params.nu * kp + kpp)) / k2;
        c.a4[i] = -2.0 * yi * r;
        c.a5[i] = c.a3[i] + 2.0 * r * c.a4[i];
        match form {
            WeakForm::Verbatim => {
                c.weak_velocity[i] = c.a4[i];
                c.weak_advection[i] = c.a5[i];
            }
            WeakForm::Consistent => {
                // -(a1_i v_ii, w) moves d_i a1_i = -8 y_i r^2 onto the first-order
                // term; (a2_ij v_ij, w) moves -sum_j d_j a2_ij = -4(n+1) y_i r^2.
                let d_a1 = -8.0 * yi * r * r;
                let div_a2 = 4.0 * (dim as f64 + 1.0) * yi * r * r;
                c.weak_velocity[i] = -c.a4[i];
                c.weak_advection[i] = -c.a3[i] + d_a1 - div_a2;
            }
        }
    }
    c
}

/// The coefficients are polynomial in `y` with time-only factors:
/// `a1_i = tension - stretch * y_i^2`, `a2_ij = cross * y_i y_j`,
/// weak velocity `= velocity * y_i`, weak advection `= advection * y_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableCoefficients {
    pub b1: f64,
    pub b2: f64,
    pub tension: f64,
    pub stretch: f64,
    pub cross: f64,
    pub velocity: f64,
    pub advection: f64,
}

impl SeparableCoefficients {
    pub fn new(s: &BoundaryState, params: &BeamParameters, dim: usize, form: WeakForm) -> Self {
        let k2 = s.k * s.k;
        let r = s.kp / s.k;
        let b2 = 1.0 / (k2 * k2);
        let a3_factor = 2.0 * r * r - (params.nu * s.kp + s.kpp) / s.k;
        let (velocity, advection) = match form {
            WeakForm::Verbatim => (-2.0 * r, a3_factor - 4.0 * r * r),
            WeakForm::Consistent => (2.0 * r, -a3_factor - 4.0 * (dim as f64 + 3.0) * r * r),
        };
        SeparableCoefficients {
            b1: params.zeta1 * b2,
            b2,
            tension: params.zeta0 / k2,
            stretch: 4.0 * r * r,
            cross: 4.0 * r * r,
            velocity,
            advection,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Up to a handful of offending instants.
    pub offending_times: Vec<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<HypothesisCheck>,
    pub relaxed: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            write!(f, "[{mark}] {}: {}", c.name, c.detail)?;
            if !c.offending_times.is_empty() {
                write!(f, " (e.g. t = {:?})", c.offending_times)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub const SAMPLES_PER_UNIT_TIME: f64 = 1e4;
const MAX_REPORTED: usize = 5;

/// Checks the domain and speed hypotheses on `[0, horizon]` by dense sampling
/// plus the closed-form extrema of the built-in kinds. `relaxed` admits
/// `K' = 0` (fixed domain).
pub fn validate_hypotheses(
    boundary: &MovingBoundary,
    params: &BeamParameters,
    horizon: f64,
    relaxed: bool,
) -> ValidationReport {
    let n = ((horizon * SAMPLES_PER_UNIT_TIME).ceil() as usize).max(1);
    let mut times: Vec<f64> = (0..=n).map(|i| horizon * i as f64 / n as f64).collect();
    times.extend(boundary.extremal_times(horizon));

    let mut bad_k = Vec::new();
    let mut bad_kp = Vec::new();
    let mut bad_speed = Vec::new();
    let mut bad_eval = Vec::new();
    let (mut kmin, mut kmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut kpmin, mut kpmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut speed_sq_max: f64 = 0.0;

    for &t in &times {
        let s = match boundary.eval(t) {
            Ok(s) => s,
            Err(_) => {
                bad_eval.push(t);
                continue;
            }
        };
        kmin = kmin.min(s.k);
        kmax = kmax.max(s.k);
        kpmin = kpmin.min(s.kp);
        kpmax = kpmax.max(s.kp);
        speed_sq_max = speed_sq_max.max(s.kp * s.kp);

        let k_ok = match boundary.bounds {
            Some(b) => b.k0 > 0.0 && s.k >= b.k0 && s.k <= b.k1,
            None => s.k > 0.0,
        };
        if !k_ok {
            bad_k.push(t);
        }
        let kp_pos = if relaxed { s.kp >= 0.0 } else { s.kp > 0.0 };
        let kp_ok = kp_pos && boundary.bounds.is_none_or(|b| s.kp <= b.k2);
        if !kp_ok {
            bad_kp.push(t);
        }
        if s.kp * s.kp >= params.zeta0 / 4.0 {
            bad_speed.push(t);
        }
    }

    let trunc = |mut v: Vec<f64>| {
        v.truncate(MAX_REPORTED);
        v
    };
    let mut checks = Vec::with_capacity(4);
    checks.push(HypothesisCheck {
        name: "finite",
        passed: bad_eval.is_empty(),
        detail: "K, K', K'' finite".into(),
        offending_times: trunc(bad_eval),
    });
    checks.push(HypothesisCheck {
        name: "H1-bounds",
        passed: bad_k.is_empty(),
        detail: format!("K in [{kmin:.6e}, {kmax:.6e}]"),
        offending_times: trunc(bad_k),
    });
    checks.push(HypothesisCheck {
        name: "H1-speed",
        passed: bad_kp.is_empty(),
        detail: format!(
            "K' in [{kpmin:.6e}, {kpmax:.6e}], required {}",
            if relaxed { ">= 0" } else { "> 0" }
        ),
        offending_times: trunc(bad_kp),
    });
    checks.push(HypothesisCheck {
        name: "H4",
        passed: bad_speed.is_empty(),
        detail: format!(
            "max (K')^2 = {speed_sq_max:.6e} vs zeta0/4 = {:.6e}",
            params.zeta0 / 4.0
        ),
        offending_times: trunc(bad_speed),
    });
    ValidationReport { checks, relaxed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params() -> BeamParameters {
        BeamParameters::default()
    }

    #[test]
    fn b1_at_origin() {
        let s = MovingBoundary::b1(1).eval(0.0).unwrap();
        assert_eq!((s.k, s.kp, s.kpp), (64.0, 2f64.powi(-7), 0.0));
    }

    #[test]
    fn constant_boundary() {
        let s = MovingBoundary::constant(64.0).eval(3.7).unwrap();
        assert_eq!((s.k, s.kp, s.kpp), (64.0, 0.0, 0.0));
    }

    #[test]
    fn b2_at_origin() {
        let s = MovingBoundary::b2(1).eval(0.0).unwrap();
        assert_eq!((s.k, s.kp, s.kpp), (64.0, 2.0, -2.0));
    }

    #[test]
    fn non_finite_custom_is_rejected() {
        let b = MovingBoundary::custom(|t| (1.0 / t, 0.0, 0.0));
        assert!(matches!(
            b.eval(0.0),
            Err(BeamError::InvalidBoundary { .. })
        ));
    }

    #[test]
    fn stationary_coefficients_degenerate() {
        let c = eval_coefficients(
            &MovingBoundary::constant(64.0),
            &params(),
            &[0.3, -0.7],
            0.0,
            WeakForm::Consistent,
        )
        .unwrap();
        for i in 0..2 {
            assert_eq!(c.a1[i], 0.03125);
            assert_eq!(c.a3[i], 0.0);
            assert_eq!(c.a4[i], 0.0);
            assert_eq!(c.a5[i], 0.0);
            assert_eq!(c.weak_velocity[i], 0.0);
            assert_eq!(c.weak_advection[i], 0.0);
            for j in 0..2 {
                assert_eq!(c.a2[i][j], 0.0);
            }
        }
    }

    #[test]
    fn b1_coefficients_at_origin() {
        let c = eval_coefficients(
            &MovingBoundary::b1(1),
            &params(),
            &[1.0],
            0.0,
            WeakForm::Consistent,
        )
        .unwrap();
        assert_relative_eq!(c.b2, 64f64.powi(-4), max_relative = 1e-15);
        assert_relative_eq!(c.b2, 5.9605e-8, max_relative = 1e-4);
        assert_eq!(c.b1, 2.0 * c.b2);
        assert_relative_eq!(c.a4[0], -(2f64.powi(-12)), max_relative = 1e-15);
    }

    #[test]
    fn singular_mapping() {
        let b = MovingBoundary::constant(0.0);
        assert!(matches!(
            eval_coefficients(&b, &params(), &[0.0], 0.0, WeakForm::Consistent),
            Err(BeamError::SingularMapping { .. })
        ));
        assert!(matches!(
            b.map_point(0.0, &[0.5]),
            Err(BeamError::SingularMapping { .. })
        ));
    }

    #[test]
    fn mapping_examples() {
        let x = MovingBoundary::constant(64.0)
            .map_point(0.0, &[0.5])
            .unwrap();
        assert_eq!(x, vec![32.0]);
        let x = MovingBoundary::b1(1).map_point(1.0, &[1.0]).unwrap();
        assert_eq!(x, vec![64.0078125]);
    }

    #[test]
    fn validation_examples() {
        let r = validate_hypotheses(&MovingBoundary::b1(1), &params(), 1.0, false);
        assert!(r.passed(), "{r}");

        let steep = MovingBoundary::new(BoundaryKind::LinearDrift {
            base: 64.0,
            slope: 10.0,
        });
        let r = validate_hypotheses(&steep, &params(), 1.0, false);
        assert!(!r.check("H4").unwrap().passed);
        assert!(r.check("H1-speed").unwrap().passed);

        let fixed = MovingBoundary::constant(64.0);
        let r = validate_hypotheses(&fixed, &params(), 1.0, false);
        assert!(!r.check("H1-speed").unwrap().passed);
        assert!(!r.check("H1-speed").unwrap().offending_times.is_empty());
        let r = validate_hypotheses(&fixed, &params(), 1.0, true);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn validation_respects_bounds() {
        let b = MovingBoundary::b2(1).with_bounds(BoundaryBounds {
            k0: 64.0,
            k1: 65.0,
            k2: 2.0,
        });
        let r = validate_hypotheses(&b, &params(), 1.0, false);
        // K(1) = 64 + 2(1 - 1/e) > 65
        assert!(!r.check("H1-bounds").unwrap().passed);
        let b = MovingBoundary::b2(1).with_bounds(BoundaryBounds {
            k0: 64.0,
            k1: 66.0,
            k2: 2.0,
        });
        assert!(validate_hypotheses(&b, &params(), 1.0, false).passed());
    }

    fn any_boundary() -> impl Strategy<Value = MovingBoundary> {
        prop_oneof![
            (1.0..100.0f64, 0.0..3.0f64).prop_map(|(base, slope)| MovingBoundary::new(
                BoundaryKind::LinearDrift { base, slope }
            )),
            (1.0..100.0f64, -0.5..3.0f64, 0.1..4.0f64).prop_map(|(base, amplitude, rate)| {
                MovingBoundary::new(BoundaryKind::ExponentialSaturation {
                    base,
                    amplitude,
                    rate,
                })
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn coefficient_identities(
            b in any_boundary(),
            draws in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64, 0.0..5.0f64), 160),
        ) {
            let p = params();
            for (y1, y2, t) in draws {
                for y in [&[y1][..], &[y1, y2][..]] {
                    let c = eval_coefficients(&b, &p, y, t, WeakForm::Consistent).unwrap();
                    let s = b.eval(t).unwrap();
                    for i in 0..y.len() {
                        let gap = c.a5[i] - c.a3[i] - 2.0 * s.kp / s.k * c.a4[i];
                        prop_assert!(gap.abs() <= 1e-14);
                        for j in 0..y.len() {
                            prop_assert_eq!(c.a2[i][j], c.a2[j][i]);
                        }
                    }
                    prop_assert_eq!(c.b1, p.zeta1 * c.b2);
                }
            }
        }

        #[test]
        fn map_roundtrip(b in any_boundary(), y in -1.0..1.0f64, t in 0.0..5.0f64) {
            let x = b.map_point(t, &[y]).unwrap();
            let back = b.map_back(t, &x).unwrap();
            prop_assert!((back[0] - y).abs() <= 1e-15 * y.abs().max(1e-300));
        }

        #[test]
        fn h4_is_monotone_in_zeta0(slope in 0.0..20.0f64, z in 0.0..500.0f64, dz in 0.0..100.0f64) {
            let b = MovingBoundary::new(BoundaryKind::LinearDrift { base: 64.0, slope });
            let lo = BeamParameters { zeta0: z, ..params() };
            let hi = BeamParameters { zeta0: z + dz, ..params() };
            let pass_lo = validate_hypotheses(&b, &lo, 0.01, false).check("H4").unwrap().passed;
            let pass_hi = validate_hypotheses(&b, &hi, 0.01, false).check("H4").unwrap().passed;
            prop_assert!(!pass_lo || pass_hi);
        }

        #[test]
        fn separable_matches_pointwise(
            b in any_boundary(),
            y1 in -1.0..1.0f64, y2 in -1.0..1.0f64, t in 0.0..5.0f64,
            verbatim in any::<bool>(),
        ) {
            let form = if verbatim { WeakForm::Verbatim } else { WeakForm::Consistent };
            let p = params();
            let y = [y1, y2];
            let c = eval_coefficients(&b, &p, &y, t, form).unwrap();
            let sep = SeparableCoefficients::new(&b.eval(t).unwrap(), &p, 2, form);
            for i in 0..2 {
                let a1 = sep.tension - sep.stretch * y[i] * y[i];
                prop_assert!((a1 - c.a1[i]).abs() <= 1e-14 * a1.abs().max(1e-3));
                prop_assert!((sep.velocity * y[i] - c.weak_velocity[i]).abs() <= 1e-15);
                prop_assert!((sep.advection * y[i] - c.weak_advection[i]).abs() <= 1e-14);
                for j in 0..2 {
                    prop_assert!((sep.cross * y[i] * y[j] - c.a2[i][j]).abs() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn degeneration_sampled() {
        let b = MovingBoundary::constant(3.0);
        for k in 0..200 {
            let t = k as f64 * 0.05;
            let y = [(k as f64 * 0.37).sin(), (k as f64 * 0.91).cos()];
            let c = eval_coefficients(&b, &params(), &y, t, WeakForm::Verbatim).unwrap();
            assert_eq!(c.a2, [[0.0; 2]; 2]);
            assert_eq!(c.a3, [0.0; 2]);
            assert_eq!(c.a4, [0.0; 2]);
            assert_eq!(c.a5, [0.0; 2]);
        }
    }
}
