//! Right-continuous integer step functions of one real variable.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Rational;

/// Piecewise-constant, right-continuous `ℝ → ℤ` function.
///
/// `values[0]` is the value on `(-∞, t₁)`, and `values[i]` the value on
/// `[tᵢ, tᵢ₊₁)`. The representation is canonical: breakpoints strictly
/// increase and adjacent values differ, so structural equality is
/// pointwise equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFunction {
    breakpoints: Vec<Rational>,
    values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("expected {expected} values for {breakpoints} breakpoints, got {found}")]
    Length {
        breakpoints: usize,
        expected: usize,
        found: usize,
    },
    #[error("breakpoints are not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("adjacent values are equal at breakpoint index {0}")]
    RedundantBreakpoint(usize),
}

/// Upper limit of integration for [`euler_integral_1d`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Upper {
    Finite(Rational),
    PosInfinity,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self::constant(0)
    }

    pub fn constant(c: i64) -> Self {
        Self {
            breakpoints: Vec::new(),
            values: vec![c],
        }
    }

    /// `weight · 𝟙{t ≥ at}`.
    pub fn step(at: Rational, weight: i64) -> Self {
        Self::from_jumps(0, vec![(at, weight)])
    }

    /// Builds the canonical function from a value at `-∞` and a list of
    /// `(position, jump)` pairs, in any order.
    pub fn from_jumps(value_at_minus_inf: i64, jumps: Vec<(Rational, i64)>) -> Self {
        let mut merged: BTreeMap<Rational, i64> = BTreeMap::new();
        for (t, j) in jumps {
            if j != 0 {
                *merged.entry(t).or_insert(0) += j;
            }
        }
        Self::from_sorted_jumps(value_at_minus_inf, merged.into_iter())
    }

    /// Like [`from_jumps`](Self::from_jumps) for jumps already sorted by
    /// strictly increasing position.
    pub fn from_sorted_jumps(
        value_at_minus_inf: i64,
        jumps: impl Iterator<Item = (Rational, i64)>,
    ) -> Self {
        let mut breakpoints = Vec::new();
        let mut values = vec![value_at_minus_inf];
        let mut current = value_at_minus_inf;
        for (t, j) in jumps {
            if j != 0 {
                current += j;
                breakpoints.push(t);
                values.push(current);
            }
        }
        Self {
            breakpoints,
            values,
        }
    }

    /// Validating constructor from explicit parts.
    pub fn from_parts(breakpoints: Vec<Rational>, values: Vec<i64>) -> Result<Self, StepError> {
        let f = Self {
            breakpoints,
            values,
        };
        f.check_canonical()?;
        Ok(f)
    }

    /// Builds a canonical function from possibly redundant parts, merging
    /// equal neighbours. Breakpoints must still strictly increase.
    pub fn from_parts_lenient(
        breakpoints: Vec<Rational>,
        values: Vec<i64>,
    ) -> Result<Self, StepError> {
        if values.len() != breakpoints.len() + 1 {
            return Err(StepError::Length {
                breakpoints: breakpoints.len(),
                expected: breakpoints.len() + 1,
                found: values.len(),
            });
        }
        if let Some(i) = (1..breakpoints.len()).find(|&i| breakpoints[i - 1] >= breakpoints[i]) {
            return Err(StepError::NotIncreasing(i));
        }
        let jumps = breakpoints
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, values[i + 1] - values[i]));
        Ok(Self::from_sorted_jumps(values[0], jumps))
    }

    /// Structural right-continuity and finiteness check: lengths agree,
    /// breakpoints strictly increase, and no breakpoint is redundant.
    pub fn check_canonical(&self) -> Result<(), StepError> {
        if self.values.len() != self.breakpoints.len() + 1 {
            return Err(StepError::Length {
                breakpoints: self.breakpoints.len(),
                expected: self.breakpoints.len() + 1,
                found: self.values.len(),
            });
        }
        if let Some(i) =
            (1..self.breakpoints.len()).find(|&i| self.breakpoints[i - 1] >= self.breakpoints[i])
        {
            return Err(StepError::NotIncreasing(i));
        }
        if let Some(i) = (0..self.breakpoints.len()).find(|&i| self.values[i] == self.values[i + 1])
        {
            return Err(StepError::RedundantBreakpoint(i));
        }
        Ok(())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    /// All `m + 1` values, starting with the one on `(-∞, t₁)`.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value_at_minus_inf(&self) -> i64 {
        self.values[0]
    }

    pub fn value_at_plus_inf(&self) -> i64 {
        *self.values.last().expect("values is never empty")
    }

    pub fn is_zero(&self) -> bool {
        self.breakpoints.is_empty() && self.values[0] == 0
    }

    pub fn eval(&self, t: &Rational) -> i64 {
        // Number of breakpoints <= t selects the piece.
        let idx = self.breakpoints.partition_point(|b| b <= t);
        self.values[idx]
    }

    fn jumps(&self) -> impl Iterator<Item = (Rational, i64)> + '_ {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), self.values[i + 1] - self.values[i]))
    }

    pub fn add(&self, other: &Self) -> Self {
        let jumps = self.jumps().chain(other.jumps()).collect();
        Self::from_jumps(self.values[0] + other.values[0], jumps)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// `t ↦ self(t / λ)` for `λ > 0`: breakpoints are multiplied by `λ`.
    pub fn rescale_time(&self, lambda: &Rational) -> Self {
        assert!(
            lambda > &Rational::zero(),
            "time rescaling needs a positive factor"
        );
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b * lambda).collect(),
            values: self.values.clone(),
        }
    }

    /// Sample points covering every piece: each breakpoint, every gap
    /// midpoint, and one point beyond each end.
    pub fn probe_points(&self) -> Vec<Rational> {
        let one = Rational::from_integer(1.into());
        let Some(first) = self.breakpoints.first() else {
            return vec![Rational::zero()];
        };
        let mut pts = vec![first - &one];
        for (i, b) in self.breakpoints.iter().enumerate() {
            pts.push(b.clone());
            match self.breakpoints.get(i + 1) {
                Some(next) => pts.push((b + next) / Rational::from_integer(2.into())),
                None => pts.push(b + &one),
            }
        }
        pts
    }
}

/// Euler integral of `φ · 𝟙_{(-∞, upper]}` over `ℝ`.
///
/// The domain splits into points (χ = 1) and open intervals (χ = -1). The
/// points are the breakpoints below `upper` together with `upper` itself
/// when finite; the open intervals are the gaps between consecutive points
/// plus the unbounded end pieces.
pub fn euler_integral_1d(phi: &StepFunction, upper: &Upper) -> i64 {
    let mut points: Vec<&Rational> = match upper {
        Upper::Finite(u) => phi.breakpoints().iter().filter(|b| *b < u).collect(),
        Upper::PosInfinity => phi.breakpoints().iter().collect(),
    };
    if let Upper::Finite(u) = upper {
        points.push(u);
    }
    let mut total = 0;
    // (-∞, first point) or all of ℝ when there are no points.
    total -= phi.value_at_minus_inf();
    for (i, p) in points.iter().enumerate() {
        let v = phi.eval(p);
        total += v;
        let has_gap_after = i + 1 < points.len() || matches!(upper, Upper::PosInfinity);
        if has_gap_after {
            // φ is constant on [p, next) by right continuity.
            total -= v;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn jumps_merge_and_cancel() {
        let f = StepFunction::from_jumps(0, vec![(int(1), 2), (int(0), 1), (int(1), -2)]);
        assert_eq!(f.breakpoints(), &[int(0)]);
        assert_eq!(f.values(), &[0, 1]);
        f.check_canonical().unwrap();
    }

    #[test]
    fn evaluation_is_right_continuous() {
        let f = StepFunction::from_jumps(0, vec![(int(0), 1), (int(2), -3)]);
        assert_eq!(f.eval(&int(-1)), 0);
        assert_eq!(f.eval(&int(0)), 1);
        assert_eq!(f.eval(&ratio(19, 10)), 1);
        assert_eq!(f.eval(&int(2)), -2);
        assert_eq!(f.value_at_plus_inf(), -2);
    }

    #[test]
    fn algebra() {
        let a = StepFunction::step(int(0), 1);
        let b = StepFunction::step(int(0), -1);
        assert!(a.add(&b).is_zero());
        assert_eq!(a.scale(3).eval(&int(5)), 3);
        assert_eq!(a.sub(&a), StepFunction::zero());
        assert_eq!(a.scale(0), StepFunction::zero());
    }

    #[test]
    fn parts_validation() {
        assert_eq!(
            StepFunction::from_parts(vec![int(0)], vec![1, 1]),
            Err(StepError::RedundantBreakpoint(0))
        );
        assert_eq!(
            StepFunction::from_parts(vec![int(1), int(0)], vec![0, 1, 0]),
            Err(StepError::NotIncreasing(1))
        );
        assert!(matches!(
            StepFunction::from_parts(vec![int(0)], vec![1]),
            Err(StepError::Length { .. })
        ));
        let f = StepFunction::from_parts_lenient(vec![int(0), int(1)], vec![0, 1, 1]).unwrap();
        assert_eq!(f, StepFunction::step(int(0), 1));
    }

    #[test]
    fn integral_of_half_line_indicator() {
        let phi = StepFunction::step(int(0), 1);
        assert_eq!(euler_integral_1d(&phi, &Upper::PosInfinity), 0);
        // [0, 5] = {0} ∪ (0,5) ∪ {5}: 1 - 1 + 1.
        assert_eq!(euler_integral_1d(&phi, &Upper::Finite(int(5))), 1);
        assert_eq!(euler_integral_1d(&phi, &Upper::Finite(int(0))), 1);
        assert_eq!(euler_integral_1d(&phi, &Upper::Finite(int(-1))), 0);
        assert_eq!(
            euler_integral_1d(&StepFunction::zero(), &Upper::PosInfinity),
            0
        );
    }

    #[test]
    fn integral_of_constant() {
        // χ_c(ℝ) = -1 and χ_c((-∞, u]) = 0.
        let one = StepFunction::constant(1);
        assert_eq!(euler_integral_1d(&one, &Upper::PosInfinity), -1);
        assert_eq!(euler_integral_1d(&one, &Upper::Finite(int(3))), 0);
    }

    #[test]
    fn integral_of_bounded_window() {
        // 𝟙_[0,2): {0} + (0,2) = 1 - 1 = 0 over ℝ.
        let phi = StepFunction::from_jumps(0, vec![(int(0), 1), (int(2), -1)]);
        assert_eq!(euler_integral_1d(&phi, &Upper::PosInfinity), 0);
        // Restricted to (-∞, 1]: [0,1] → 1.
        assert_eq!(euler_integral_1d(&phi, &Upper::Finite(int(1))), 1);
    }
}
