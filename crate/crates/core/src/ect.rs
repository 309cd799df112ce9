//! Euler characteristic transform over hyperplane probes, its equality
//! theory, and the one-dimensional dual transform used for inversion.
//!
//! For a relatively open `k`-simplex `σ` and direction `ν`, the sublevel
//! set `relint σ ∩ {x·ν ≤ t}` has compactly supported Euler characteristic
//! `(-1)^k` once `t` reaches `M = max_{w ∈ σ} ν·w` and `0` before (the
//! cut-open part and its slice cancel). The transform of a constructible
//! function is the weighted sum of these single steps; the ambient term
//! `c·𝟙_{ℝⁿ}` contributes nothing because a closed half-space has
//! `χ = χ(ℝⁿ⁻¹) + χ(ℝⁿ) = 0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::complex::find_overlaps;
use crate::function::{restrict_to_line, ConstructibleFunction, FunctionError, Line2D};
use crate::rational::{self, int, sign_pow, Point, Rational};
use crate::step::{euler_integral_1d, StepFunction, Upper};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EctError {
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dual transform needs one positive and one negative direction in ℝ¹")]
    WrongDirectionSet,
    #[error("inconsistent table: curves imply total integrals {0} and {1}")]
    InconsistentTable(i64, i64),
    #[error("overlapping cells in dimension {0} need a common triangulation")]
    NeedsCommonTriangulation(usize),
    #[error("input takes values outside {{0, 1}}: {0:?}")]
    NotIndicator(Vec<i64>),
}

/// Nonzero rational direction. Positive multiples represent the same
/// point of the sphere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectionProbe(Point);

impl DirectionProbe {
    pub fn new(v: Point) -> Result<Self, EctError> {
        if rational::is_zero_vec(&v) {
            return Err(EctError::ZeroDirection);
        }
        Ok(Self(v))
    }

    pub fn from_ints(v: &[i64]) -> Result<Self, EctError> {
        Self::new(rational::ipoint(v))
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        assert!(lambda.is_positive());
        Self(rational::scale(&self.0, lambda))
    }

    pub fn negated(&self) -> Self {
        Self(rational::neg(&self.0))
    }

    /// Unit-length float approximation, for display only.
    pub fn to_unit_f64(&self) -> Vec<f64> {
        let v: Vec<f64> = self.0.iter().map(rational::to_f64).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }
}

/// Transform values along a list of directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EctTable {
    directions: Vec<DirectionProbe>,
    curves: Vec<StepFunction>,
}

impl EctTable {
    pub fn new(
        directions: Vec<DirectionProbe>,
        curves: Vec<StepFunction>,
    ) -> Result<Self, EctError> {
        if directions.len() != curves.len() {
            return Err(EctError::DimensionMismatch {
                expected: directions.len(),
                found: curves.len(),
            });
        }
        Ok(Self { directions, curves })
    }

    pub fn directions(&self) -> &[DirectionProbe] {
        &self.directions
    }

    pub fn curves(&self) -> &[StepFunction] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DirectionProbe, &StepFunction)> {
        self.directions.iter().zip(&self.curves)
    }
}

/// Curve of a single weighted open simplex: `weight·(-1)^k·𝟙{t ≥ M}`.
pub fn ect_cell_curve(pts: &[&[Rational]], weight: i64, nu: &DirectionProbe) -> StepFunction {
    let max = pts
        .iter()
        .map(|p| rational::dot(p, nu.components()))
        .max()
        .expect("simplex has at least one vertex");
    StepFunction::step(max, weight * sign_pow(pts.len() - 1))
}

/// Transform curve `t ↦ ECT(f)(ν, t)`.
pub fn ect_curve(f: &ConstructibleFunction, nu: &DirectionProbe) -> Result<StepFunction, EctError> {
    let plan = SweepPlan::new(f);
    plan.check_direction(nu)?;
    Ok(plan.curve(nu))
}

/// Applies [`ect_curve`] to every direction, preserving input order.
pub fn ect_sweep(
    f: &ConstructibleFunction,
    directions: &[DirectionProbe],
) -> Result<EctTable, EctError> {
    let plan = SweepPlan::new(f);
    for nu in directions {
        plan.check_direction(nu)?;
    }
    let curves: Vec<StepFunction> = directions.par_iter().map(|nu| plan.curve(nu)).collect();
    EctTable::new(directions.to_vec(), curves)
}

/// Precomputed data shared by every direction of a sweep.
///
/// Vertices are stored in integer form `p / q` (integer vector `p`, positive
/// integer `q`) so that ranking projections only needs `i128` cross
/// multiplication. Inputs whose integers are too large for that fall back
/// to arbitrary-precision rationals.
struct SweepPlan {
    ambient_dim: usize,
    /// Coordinates of vertices used by weighted cells.
    points: Vec<Point>,
    /// Small-integer form of `points`, when every entry fits.
    small: Option<Vec<(Vec<i64>, i64)>>,
    /// Weighted cells: local vertex ids and signed jump `a·(-1)^k`.
    cells: Vec<(Vec<usize>, i64)>,
}

const SMALL_LIMIT: i64 = 1 << 30;

fn small_int(b: &BigInt) -> Option<i64> {
    b.to_i64().filter(|v| v.abs() <= SMALL_LIMIT)
}

/// `p / q` integer form of a rational vector with `q > 0`.
fn integer_form(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let q = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let p = v.iter().map(|r| r.numer() * (&q / r.denom())).collect();
    (p, q)
}

impl SweepPlan {
    fn new(f: &ConstructibleFunction) -> Self {
        let complex = f.complex();
        let mut local = vec![usize::MAX; complex.vertices().len()];
        let mut points = Vec::new();
        let mut cells = Vec::new();
        for (i, w) in f.weighted_simplices() {
            let ids = complex.simplices()[i]
                .iter()
                .map(|&v| {
                    if local[v] == usize::MAX {
                        local[v] = points.len();
                        points.push(complex.vertices()[v].clone());
                    }
                    local[v]
                })
                .collect();
            cells.push((ids, w * sign_pow(complex.simplex_dim(i))));
        }
        let small = points
            .iter()
            .map(|p| {
                let (num, den) = integer_form(p);
                let num = num.iter().map(small_int).collect::<Option<Vec<_>>>()?;
                Some((num, small_int(&den)?))
            })
            .collect::<Option<Vec<_>>>();
        Self {
            ambient_dim: f.ambient_dim(),
            points,
            small,
            cells,
        }
    }

    fn check_direction(&self, nu: &DirectionProbe) -> Result<(), EctError> {
        if nu.dim() != self.ambient_dim {
            return Err(EctError::DimensionMismatch {
                expected: self.ambient_dim,
                found: nu.dim(),
            });
        }
        Ok(())
    }

    /// Projections of every used vertex, as (rank per vertex, value per rank).
    fn ranked_projections(&self, nu: &DirectionProbe) -> (Vec<usize>, Vec<Rational>) {
        if let Some(ranked) = self.ranked_small(nu) {
            return ranked;
        }
        let proj: Vec<Rational> = self
            .points
            .iter()
            .map(|p| rational::dot(p, nu.components()))
            .collect();
        let mut order: Vec<usize> = (0..proj.len()).collect();
        order.sort_by(|&a, &b| proj[a].cmp(&proj[b]));
        let mut rank = vec![0; proj.len()];
        let mut values: Vec<Rational> = Vec::new();
        for &v in &order {
            if values.last() != Some(&proj[v]) {
                values.push(proj[v].clone());
            }
            rank[v] = values.len() - 1;
        }
        (rank, values)
    }

    fn ranked_small(&self, nu: &DirectionProbe) -> Option<(Vec<usize>, Vec<Rational>)> {
        let small = self.small.as_ref()?;
        let (m, d) = integer_form(nu.components());
        let m: Vec<i64> = m.iter().map(small_int).collect::<Option<_>>()?;
        // Projection of vertex w is (m·p_w) / (d·q_w); rank by (m·p_w) / q_w.
        let keys: Vec<(i128, i128)> = small
            .iter()
            .map(|(p, q)| {
                let num: i128 = p.iter().zip(&m).map(|(a, b)| *a as i128 * *b as i128).sum();
                (num, *q as i128)
            })
            .collect();
        let cmp = |a: &(i128, i128), b: &(i128, i128)| (a.0 * b.1).cmp(&(b.0 * a.1));
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| cmp(&keys[a], &keys[b]));
        let mut rank = vec![0; keys.len()];
        let mut reps: Vec<usize> = Vec::new();
        for &v in &order {
            match reps.last() {
                Some(&r) if cmp(&keys[r], &keys[v]) == Ordering::Equal => {}
                _ => reps.push(v),
            }
            rank[v] = reps.len() - 1;
        }
        let values = reps
            .iter()
            .map(|&r| Rational::new(BigInt::from(keys[r].0), BigInt::from(keys[r].1) * &d))
            .collect();
        Some((rank, values))
    }

    fn curve(&self, nu: &DirectionProbe) -> StepFunction {
        if self.cells.is_empty() {
            return StepFunction::zero();
        }
        let (rank, values) = self.ranked_projections(nu);
        let mut jumps = vec![0i64; values.len()];
        for (ids, jump) in &self.cells {
            let top = ids.iter().map(|&v| rank[v]).max().expect("nonempty cell");
            jumps[top] += jump;
        }
        StepFunction::from_sorted_jumps(0, values.into_iter().zip(jumps))
    }
}

/// Decides whether `g - f` is a constant `c` on `ℝⁿ` and returns it.
///
/// By the classification of equal transforms this is `Some(c)` exactly when
/// `ECT(f) = ECT(g)`. The difference `D = (g - f) - c` is a formal sum of
/// weighted open cells; after identical cells are merged, any nonzero cell
/// that overlaps no other nonzero cell witnesses `D ≠ 0`. Otherwise a common
/// refinement is sampled: vertices and gap midpoints in `ℝ¹`, and in `ℝ²`
/// vertical lines through every critical abscissa (vertices and edge
/// crossings) and every gap between them.
pub fn classify_pair(
    f: &ConstructibleFunction,
    g: &ConstructibleFunction,
) -> Result<Option<i64>, EctError> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(EctError::DimensionMismatch {
            expected: f.ambient_dim(),
            found: g.ambient_dim(),
        });
    }
    let c = g.ambient_coeff() - f.ambient_coeff();
    let diff = g.sub(f)?.plus_constant(-c);
    if vanishes(&diff)? {
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

/// Whether a compactly supported formal cell sum is identically zero.
fn vanishes(d: &ConstructibleFunction) -> Result<bool, EctError> {
    debug_assert_eq!(d.ambient_coeff(), 0);
    let nonzero: Vec<usize> = d.weighted_simplices().map(|(i, _)| i).collect();
    if nonzero.is_empty() {
        return Ok(true);
    }
    let overlaps = find_overlaps(d.complex(), &nonzero);
    let mut overlapping = vec![false; d.complex().len()];
    for (a, b) in &overlaps {
        overlapping[*a] = true;
        overlapping[*b] = true;
    }
    if nonzero.iter().any(|&i| !overlapping[i]) {
        return Ok(false);
    }
    match d.ambient_dim() {
        1 => Ok(vanishes_1d(d)),
        2 => vanishes_2d(d),
        n => Err(EctError::NeedsCommonTriangulation(n)),
    }
}

fn vanishes_1d(d: &ConstructibleFunction) -> bool {
    let mut xs: Vec<Rational> = d
        .weighted_simplices()
        .flat_map(|(i, _)| {
            d.complex()
                .simplex_points(i)
                .into_iter()
                .map(|p| p[0].clone())
        })
        .collect();
    xs.sort();
    xs.dedup();
    let two = int(2);
    let mut samples = xs.clone();
    samples.extend(xs.windows(2).map(|w| (&w[0] + &w[1]) / &two));
    samples.iter().all(|x| {
        d.point_evaluate(std::slice::from_ref(x))
            .expect("1-d point")
            == 0
    })
}

fn vanishes_2d(d: &ConstructibleFunction) -> Result<bool, EctError> {
    let complex = d.complex();
    let mut xs: Vec<Rational> = Vec::new();
    let mut edges: Vec<(&[Rational], &[Rational])> = Vec::new();
    for (i, _) in d.weighted_simplices() {
        let pts = complex.simplex_points(i);
        xs.extend(pts.iter().map(|p| p[0].clone()));
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                edges.push((pts[a], pts[b]));
            }
        }
    }
    for (k, (p, q)) in edges.iter().enumerate() {
        for (r, s) in &edges[k + 1..] {
            if let Some(x) = segment_crossing_x(p, q, r, s) {
                xs.push(x);
            }
        }
    }
    xs.sort();
    xs.dedup();
    let two = int(2);
    let mut abscissas = xs.clone();
    abscissas.extend(xs.windows(2).map(|w| (&w[0] + &w[1]) / &two));
    for a in abscissas {
        let fiber = restrict_to_line(d, &Line2D::vertical(a))?;
        if !vanishes_1d(&fiber) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Abscissa of the crossing point of two non-parallel closed segments.
fn segment_crossing_x(
    p: &[Rational],
    q: &[Rational],
    r: &[Rational],
    s: &[Rational],
) -> Option<Rational> {
    let d1 = rational::sub(q, p);
    let d2 = rational::sub(s, r);
    let denom = &d1[0] * &d2[1] - &d1[1] * &d2[0];
    if denom.is_zero() {
        return None;
    }
    let w = rational::sub(r, p);
    let u = (&w[0] * &d2[1] - &w[1] * &d2[0]) / &denom;
    let v = (&w[0] * &d1[1] - &w[1] * &d1[0]) / &denom;
    let unit = Rational::zero()..=Rational::one();
    if unit.contains(&u) && unit.contains(&v) {
        Some(&p[0] + &u * &d1[0])
    } else {
        None
    }
}

/// Outcome of checking the converse of the `ℝⁿ` versus `∅` example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorollaryVerdict {
    /// `Some(c)` when the transforms agree, with `S₂ = S₁ + c` pointwise.
    pub shift: Option<i64>,
    /// False only if equal transforms arise with `c ≠ 0` from anything
    /// other than the pair `(ℝⁿ, ∅)` in some order.
    pub consistent: bool,
}

impl CorollaryVerdict {
    pub fn equal_ect(&self) -> bool {
        self.shift.is_some()
    }
}

/// Checks two indicator functions against the corollary that equal
/// transforms of distinct sets force `{ℝⁿ, ∅}`.
pub fn corollary_check(
    s1: &ConstructibleFunction,
    s2: &ConstructibleFunction,
) -> Result<CorollaryVerdict, EctError> {
    for s in [s1, s2] {
        let vals = s.value_set();
        if vals.iter().any(|v| *v != 0 && *v != 1) {
            return Err(EctError::NotIndicator(vals));
        }
    }
    let shift = classify_pair(s1, s2)?;
    let consistent = match shift {
        Some(c) if c != 0 => {
            let n = s1.ambient_dim();
            let is_const = |s: &ConstructibleFunction, k: i64| {
                classify_pair(s, &ConstructibleFunction::constant(n, k)).map(|r| r == Some(0))
            };
            (is_const(s1, 1)? && is_const(s2, 0)?) || (is_const(s1, 0)? && is_const(s2, 1)?)
        }
        _ => true,
    };
    Ok(CorollaryVerdict { shift, consistent })
}

/// Dual transform over `S⁰ = {±1}`:
/// `x' ↦ Σ_ν ∫_{t ≤ ν·x'} φ(ν, t) dχ(t)`.
///
/// Any positive multiples of `+1` and `-1` are accepted as directions.
pub fn dual_transform_1d(table: &EctTable, x_prime: &Rational) -> Result<i64, EctError> {
    check_s0(table)?;
    Ok(table
        .iter()
        .map(|(nu, phi)| {
            let upper = &nu.components()[0] * x_prime;
            euler_integral_1d(phi, &Upper::Finite(upper))
        })
        .sum())
}

fn check_s0(table: &EctTable) -> Result<(), EctError> {
    if table.len() != 2 || table.directions().iter().any(|d| d.dim() != 1) {
        return Err(EctError::WrongDirectionSet);
    }
    let signs: Vec<bool> = table
        .directions()
        .iter()
        .map(|d| d.components()[0].is_positive())
        .collect();
    if signs[0] == signs[1] {
        return Err(EctError::WrongDirectionSet);
    }
    Ok(())
}

/// The two directions `+1, -1` of `ℝ¹`.
pub fn s0_directions() -> Vec<DirectionProbe> {
    vec![
        DirectionProbe::from_ints(&[1]).expect("nonzero"),
        DirectionProbe::from_ints(&[-1]).expect("nonzero"),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchapiraRow {
    pub query: Rational,
    /// Dual transform of the transform, evaluated at the query.
    pub composed: i64,
    /// `h(x') + ∫ h dχ`.
    pub expected: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchapiraReport {
    pub rows: Vec<SchapiraRow>,
    pub curves: EctTable,
}

impl SchapiraReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.composed == r.expected)
    }
}

/// Verifies `(R_{K'} ∘ R_K) h = h + (∫ h dχ)` on `ℝ¹` at every query. No
/// compact-support assumption is made.
pub fn schapira_identity_check_1d(
    h: &ConstructibleFunction,
    queries: &[Rational],
) -> Result<SchapiraReport, EctError> {
    if h.ambient_dim() != 1 {
        return Err(EctError::DimensionMismatch {
            expected: 1,
            found: h.ambient_dim(),
        });
    }
    let table = ect_sweep(h, &s0_directions())?;
    let total = h.euler_integral();
    let rows = queries
        .iter()
        .map(|q| {
            Ok(SchapiraRow {
                query: q.clone(),
                composed: dual_transform_1d(&table, q)?,
                expected: h.point_evaluate(std::slice::from_ref(q))? + total,
            })
        })
        .collect::<Result<Vec<_>, EctError>>()?;
    Ok(SchapiraReport {
        rows,
        curves: table,
    })
}

/// Pointwise inverse of the transform over `S⁰` for compactly supported
/// functions: `ĥ(x') = (R_{K'} φ)(x') - ∫ h dχ`.
#[derive(Debug, Clone)]
pub struct Reconstruction1d {
    table: EctTable,
    integral: i64,
}

impl Reconstruction1d {
    pub fn integral(&self) -> i64 {
        self.integral
    }

    pub fn evaluate(&self, x_prime: &Rational) -> i64 {
        dual_transform_1d(&self.table, x_prime).expect("table checked at construction")
            - self.integral
    }
}

/// Builds the inverse from a table over `S⁰`. The total integral is read
/// from the terminal value of each curve; the two must agree.
pub fn reconstruct_1d(table: &EctTable) -> Result<Reconstruction1d, EctError> {
    check_s0(table)?;
    let a = table.curves()[0].value_at_plus_inf();
    let b = table.curves()[1].value_at_plus_inf();
    if a != b {
        return Err(EctError::InconsistentTable(a, b));
    }
    Ok(Reconstruction1d {
        table: table.clone(),
        integral: a,
    })
}
