//! Single memristive connection: a bounded, strictly increasing conductance
//! curve over an internal state, plus the transient relaxation scaling a
//! connection carries for two steps after it spikes.
//!
//! The state is a dimensionless accumulated-charge proxy measured in
//! "transition count equivalents". Conductance `G` is the connection weight;
//! memristance is its reciprocal `M = 1 / G`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Saturating conductance profile
/// `G(s) = g_min + (g_max - g_min) * (1 - exp(-s / kappa))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConductanceCurve<T> {
    g_min: T,
    g_max: T,
    kappa: T,
}

impl<T: Scalar> ConductanceCurve<T> {
    pub fn new(g_min: T, g_max: T, kappa: T) -> Result<Self> {
        let finite = g_min.is_finite() && g_max.is_finite() && kappa.is_finite();
        if !finite || g_min <= T::zero() || g_max <= g_min || kappa <= T::zero() {
            return Err(Error::InvalidCurve(format!(
                "need 0 < g_min < g_max and kappa > 0, got g_min={g_min}, g_max={g_max}, kappa={kappa}"
            )));
        }
        Ok(Self {
            g_min,
            g_max,
            kappa,
        })
    }

    pub fn g_min(&self) -> T {
        self.g_min
    }

    pub fn g_max(&self) -> T {
        self.g_max
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// Conductance at `state`. Negative or non-finite states are rejected.
    pub fn conductance(&self, state: T) -> Result<T> {
        if !state.is_finite() || state < T::zero() {
            return Err(Error::InvalidState(state.as_f64()));
        }
        Ok(self.eval(state))
    }

    /// Memristance `1 / G(state)`.
    pub fn memristance(&self, state: T) -> Result<T> {
        self.conductance(state).map(T::recip)
    }

    // `exp_m1` keeps precision for small states so `G(0)` is exactly `g_min`.
    // Large states would round onto `g_max`; the cap keeps the range half-open.
    pub(crate) fn eval(&self, state: T) -> T {
        let g = self.g_min - (self.g_max - self.g_min) * (-state / self.kappa).exp_m1();
        g.min(self.g_max - self.g_max * T::epsilon())
    }
}

impl<T: Scalar> Default for ConductanceCurve<T> {
    fn default() -> Self {
        Self {
            g_min: T::lit(0.1),
            g_max: T::one(),
            kappa: T::lit(4.0),
        }
    }
}

/// Transient scaling schedule after a spike: quarter, then half, then none.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RelaxPhase {
    #[default]
    None,
    Quarter,
    Half,
}

impl RelaxPhase {
    pub fn factor<T: Scalar>(self) -> T {
        match self {
            RelaxPhase::None => T::one(),
            RelaxPhase::Quarter => T::lit(0.25),
            RelaxPhase::Half => T::lit(0.5),
        }
    }

    /// Phase one step later.
    pub fn advanced(self) -> Self {
        match self {
            RelaxPhase::Quarter => RelaxPhase::Half,
            RelaxPhase::Half | RelaxPhase::None => RelaxPhase::None,
        }
    }

    pub fn is_relaxing(self) -> bool {
        self != RelaxPhase::None
    }
}

pub fn relax_factor<T: Scalar>(phase: RelaxPhase) -> T {
    phase.factor()
}

/// One directed connection of a transition graph.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MemristorElement<T> {
    state: T,
    phase: RelaxPhase,
}

fn check_step<T: Scalar>(step: T) -> Result<()> {
    if step > T::zero() && step.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveStep(step.as_f64()))
    }
}

impl<T: Scalar> MemristorElement<T> {
    pub fn new(state: T) -> Result<Self> {
        if !state.is_finite() || state < T::zero() {
            return Err(Error::InvalidState(state.as_f64()));
        }
        Ok(Self {
            state,
            phase: RelaxPhase::None,
        })
    }

    pub fn state(&self) -> T {
        self.state
    }

    pub fn phase(&self) -> RelaxPhase {
        self.phase
    }

    pub fn with_phase(self, phase: RelaxPhase) -> Self {
        Self { phase, ..self }
    }

    /// Moves the state up the curve by `step`.
    pub fn increment(self, step: T) -> Result<Self> {
        check_step(step)?;
        Ok(Self {
            state: self.state + step,
            ..self
        })
    }

    /// Moves the state down by `step`, clamping at zero.
    pub fn decrement(self, step: T) -> Result<Self> {
        check_step(step)?;
        Ok(Self {
            state: (self.state - step).max(T::zero()),
            ..self
        })
    }

    pub fn conductance(&self, curve: &ConductanceCurve<T>) -> T {
        curve.eval(self.state)
    }

    /// Conductance scaled by the current relaxation factor.
    pub fn effective_weight(&self, curve: &ConductanceCurve<T>) -> T {
        curve.eval(self.state) * self.phase.factor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn curve() -> ConductanceCurve<f64> {
        ConductanceCurve::default()
    }

    #[test]
    fn zero_state_is_lower_asymptote() {
        assert_eq!(curve().conductance(0.0).unwrap(), 0.1);
        let c32 = ConductanceCurve::<f32>::default();
        assert_eq!(c32.conductance(0.0).unwrap(), 0.1f32);
    }

    #[test]
    fn saturates_at_upper_asymptote() {
        let c = curve();
        let g = c.conductance(50.0 * c.kappa()).unwrap();
        assert!((c.g_max() - g).abs() < 1e-9);
        assert!(g < c.g_max());
    }

    #[test]
    fn closed_form_at_one_kappa() {
        // 0.1 + 0.9 * (1 - exp(-1)), evaluated with Python's math.exp.
        let g = curve().conductance(4.0).unwrap();
        assert!((g - 0.6689085029457019).abs() < 1e-12, "{g}");
    }

    #[test]
    fn negative_state_is_a_domain_error() {
        assert!(matches!(
            curve().conductance(-1e-9),
            Err(Error::InvalidState(_))
        ));
        assert!(curve().conductance(f64::NAN).is_err());
        assert!(MemristorElement::new(-1.0).is_err());
    }

    #[test]
    fn memristance_is_reciprocal() {
        assert_eq!(curve().memristance(0.0).unwrap(), 10.0);
    }

    #[test]
    fn curve_parameters_are_validated() {
        assert!(ConductanceCurve::new(0.0, 1.0, 4.0).is_err());
        assert!(ConductanceCurve::new(0.5, 0.5, 4.0).is_err());
        assert!(ConductanceCurve::new(0.1, 1.0, 0.0).is_err());
        assert!(ConductanceCurve::new(0.1, f64::INFINITY, 1.0).is_err());
        assert!(ConductanceCurve::new(0.1, 1.0, 4.0).is_ok());
    }

    #[test]
    fn increment_and_decrement() {
        let e = MemristorElement::new(0.0).unwrap();
        assert_eq!(e.increment(1.0).unwrap().state(), 1.0);
        assert_eq!(
            MemristorElement::new(0.5)
                .unwrap()
                .decrement(1.0)
                .unwrap()
                .state(),
            0.0
        );
        assert_eq!(
            MemristorElement::new(3.0)
                .unwrap()
                .decrement(1.0)
                .unwrap()
                .state(),
            2.0
        );
        assert!(matches!(e.increment(0.0), Err(Error::NonPositiveStep(_))));
        assert!(e.increment(-1.0).is_err());
        assert!(e.decrement(0.0).is_err());
    }

    #[test]
    fn repeated_increments_never_reach_g_max() {
        let c = curve();
        let mut e = MemristorElement::new(0.0).unwrap();
        let mut prev = e.conductance(&c);
        for _ in 0..1_000_000 {
            e = e.increment(1.0).unwrap();
            let g = e.conductance(&c);
            assert!(g >= prev && g < c.g_max());
            prev = g;
        }
    }

    #[test]
    fn relax_factors() {
        assert_eq!(relax_factor::<f64>(RelaxPhase::Quarter), 0.25);
        assert_eq!(relax_factor::<f64>(RelaxPhase::Half), 0.5);
        assert_eq!(relax_factor::<f64>(RelaxPhase::None), 1.0);
        let seq: Vec<f64> =
            std::iter::successors(Some(RelaxPhase::Quarter), |p| Some(p.advanced()))
                .take(3)
                .map(|p| p.factor())
                .collect();
        assert_eq!(seq, vec![0.25, 0.5, 1.0]);
    }

    #[test]
    fn effective_weight_scales_conductance() {
        let c = curve();
        let e = MemristorElement::new(4.0)
            .unwrap()
            .with_phase(RelaxPhase::Quarter);
        assert_eq!(e.effective_weight(&c), e.conductance(&c) * 0.25);
    }

    proptest! {
        #[test]
        fn conductance_is_strictly_increasing(s1 in 0.0f64..60.0, ds in 1e-6f64..60.0) {
            let c = curve();
            let g1 = c.conductance(s1).unwrap();
            let g2 = c.conductance(s1 + ds).unwrap();
            prop_assert!(g2 > g1);
            prop_assert!(g1 >= c.g_min() && g2 < c.g_max());
        }

        #[test]
        fn decrement_clamps_and_inverts(s in 0.0f64..100.0, step in 1e-3f64..10.0) {
            let e = MemristorElement::new(s).unwrap();
            let d = e.decrement(step).unwrap();
            prop_assert!(d.state() >= 0.0);
            if s >= step {
                // Exact inverse only when the subtraction is exact.
                let back = d.increment(step).unwrap().state();
                prop_assert!((back - s).abs() <= f64::EPSILON * s.max(1.0) * 4.0);
            }
        }

        #[test]
        fn increment_raises_conductance(s in 0.0f64..30.0, step in 1e-3f64..10.0) {
            let c = curve();
            let e = MemristorElement::new(s).unwrap();
            prop_assert!(e.increment(step).unwrap().conductance(&c) > e.conductance(&c));
        }
    }

    #[test]
    fn integer_decrement_then_increment_is_exact() {
        let e = MemristorElement::new(3.0).unwrap();
        assert_eq!(e.decrement(1.0).unwrap().increment(1.0).unwrap(), e);
    }
}
