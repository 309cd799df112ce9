//! Quadric Euler characteristic transform: `χ_c` of `f` over sublevel sets
//! `{xᵀAx + v·x ≤ t}`.
//!
//! Exact on cells of dimension at most one and on definite ambient terms;
//! higher-dimensional cells go through a piecewise-linear approximation on
//! iterated barycentric subdivisions.

use num_traits::{One, Signed, Zero};

use crate::function::{ConstructibleFunction, FunctionError};
use crate::linalg::{self, Solution};
use crate::poly::{characteristic_polynomial, isolate_roots, root_bound, Poly, SturmSequence};
use crate::rational::{self, int, sign_pow, Point, Rational};
use crate::step::StepFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QectError {
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("probe has A = 0 and v = 0")]
    DegenerateProbe,
    #[error("ambient term needs a definite matrix or A = 0")]
    UnsupportedAmbient,
    #[error("cell of dimension {0} needs the piecewise-linear evaluator")]
    CellTooLarge(usize),
    #[error("operator norm bound ||A|| < 1/(1 + 2R²) fails")]
    BoundViolated,
    #[error(
        "operator norm bound ||A|| < 1/(1 + 2R) fails; the inversion formula is not guaranteed"
    )]
    CapConditionFails,
    #[error("support is not inside the closed ball of radius {0}")]
    SupportEscapes(String),
    #[error("function has a nonzero ambient coefficient")]
    NonzeroAmbient,
}

/// Symmetric rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    rows: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

impl SymMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, QectError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(QectError::NotSquare);
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(QectError::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, QectError> {
        Self::new(rows.iter().map(|r| rational::ipoint(r)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self {
            rows: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![Rational::one(); n])
    }

    pub fn diagonal(d: Vec<Rational>) -> Self {
        let n = d.len();
        let mut m = Self::zero(n);
        for (i, x) in d.into_iter().enumerate() {
            m.rows[i][i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            rows: self.rows.iter().map(|r| rational::scale(r, k)).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Point {
        self.rows.iter().map(|r| rational::dot(r, x)).collect()
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        rational::dot(x, &self.mul_vec(y))
    }

    /// Sylvester's criterion on leading principal minors.
    pub fn definiteness(&self) -> Definiteness {
        let n = self.dim();
        let minors: Vec<Rational> = (1..=n)
            .map(|k| {
                let sub: Vec<Vec<Rational>> =
                    self.rows[..k].iter().map(|r| r[..k].to_vec()).collect();
                linalg::determinant(&sub)
            })
            .collect();
        if minors.iter().all(Signed::is_positive) {
            Definiteness::Positive
        } else if minors
            .iter()
            .enumerate()
            .all(|(k, m)| (m * int(sign_pow(k + 1))).is_positive())
        {
            Definiteness::Negative
        } else {
            Definiteness::Indefinite
        }
    }

    pub fn characteristic_polynomial(&self) -> Poly {
        characteristic_polynomial(&self.rows)
    }
}

/// Quadric probe `(A, v, t)` with `(A, v) ≠ (0, 0)`. Joint positive scaling
/// of all three components gives the same sublevel set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadricProbe {
    a: SymMatrix,
    v: Point,
    t: Rational,
}

impl QuadricProbe {
    pub fn new(a: SymMatrix, v: Point, t: Rational) -> Result<Self, QectError> {
        if v.len() != a.dim() {
            return Err(QectError::DimensionMismatch {
                expected: a.dim(),
                found: v.len(),
            });
        }
        if a.is_zero() && rational::is_zero_vec(&v) {
            return Err(QectError::DegenerateProbe);
        }
        Ok(Self { a, v, t })
    }

    pub fn a(&self) -> &SymMatrix {
        &self.a
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn with_t(&self, t: Rational) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        assert!(lambda.is_positive());
        Self {
            a: self.a.scale(lambda),
            v: rational::scale(&self.v, lambda),
            t: &self.t * lambda,
        }
    }
}

/// `xᵀAx + v·x`.
pub fn quadric_value(a: &SymMatrix, v: &[Rational], x: &[Rational]) -> Result<Rational, QectError> {
    for len in [v.len(), x.len()] {
        if len != a.dim() {
            return Err(QectError::DimensionMismatch {
                expected: a.dim(),
                found: len,
            });
        }
    }
    Ok(a.bilinear(x, x) + rational::dot(v, x))
}

/// `(x' + x)ᵀ A (x' - x)`, the quadratic part of the difference
/// `q(x') - q(x)`.
pub fn separation_value(a: &SymMatrix, x: &[Rational], x_prime: &[Rational]) -> Rational {
    a.bilinear(&rational::add(x_prime, x), &rational::sub(x_prime, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpNormOrder {
    Less,
    Equal,
    Greater,
}

/// Exact comparison of `||A||_op` (largest absolute eigenvalue) with `r`.
///
/// Counts distinct eigenvalues in `(-r, r)` and at `±r` with Sturm
/// sequences of the square-free characteristic polynomial. Every
/// eigenvalue of a symmetric matrix is real, so the rest lie outside.
pub fn opnorm_compare(a: &SymMatrix, r: &Rational) -> OpNormOrder {
    if !r.is_positive() {
        return if r.is_zero() && a.is_zero() {
            OpNormOrder::Equal
        } else {
            OpNormOrder::Greater
        };
    }
    let mut q = a.characteristic_polynomial().square_free();
    let total = q.degree().expect("characteristic polynomial is monic");
    let mut on_boundary = 0;
    for end in [-r.clone(), r.clone()] {
        if q.eval(&end).is_zero() {
            on_boundary += 1;
            q = q.div_rem(&Poly::linear_root(&end)).0;
        }
    }
    let inside = if q.degree().unwrap_or(0) == 0 {
        0
    } else {
        SturmSequence::new(&q).count_half_open(&-r.clone(), r)
    };
    if inside + on_boundary < total {
        OpNormOrder::Greater
    } else if on_boundary > 0 {
        OpNormOrder::Equal
    } else {
        OpNormOrder::Less
    }
}

/// Rational enclosure `lo ≤ ||A||_op ≤ hi` with `hi - lo ≤ width`;
/// `lo == hi` when the norm is rational and hit exactly.
pub fn opnorm_enclosure(a: &SymMatrix, width: &Rational) -> (Rational, Rational) {
    let p = a.characteristic_polynomial();
    let bound = root_bound(&p);
    let roots = isolate_roots(&p, &-bound.clone(), &bound, width);
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for root in roots {
        let (l, h) = (root.lo.abs(), root.hi.abs());
        let (rl, rh) = if root.lo.is_negative() && root.hi.is_positive() {
            (Rational::zero(), l.max(h))
        } else {
            (l.clone().min(h.clone()), l.max(h))
        };
        lo = lo.max(rl);
        hi = hi.max(rh);
    }
    (lo, hi)
}

/// `||A||_op < 1 / (1 + 2R²)`.
pub fn fixed_a_bound_check(a: &SymMatrix, r: &Rational) -> bool {
    let limit = Rational::one() / (Rational::one() + int(2) * r * r);
    opnorm_compare(a, &limit) == OpNormOrder::Less
}

/// `||A||_op < 1 / (1 + 2R)`: keeps every hyperplane
/// `{v : v·(x'-x) = -(x'+x)ᵀA(x'-x)}` off the sphere of radius
/// `1 - ||A||_op` for all `x ≠ x'` in `B_R(0)`.
pub fn fixed_a_cap_check(a: &SymMatrix, r: &Rational) -> bool {
    let limit = Rational::one() / (Rational::one() + int(2) * r.abs());
    opnorm_compare(a, &limit) == OpNormOrder::Less
}

/// `x ↦ f(-x)`.
pub fn reflect(f: &ConstructibleFunction) -> ConstructibleFunction {
    f.reflect()
}

fn check_dim(f: &ConstructibleFunction, probe: &QuadricProbe) -> Result<(), QectError> {
    if f.ambient_dim() != probe.dim() {
        return Err(QectError::DimensionMismatch {
            expected: f.ambient_dim(),
            found: probe.dim(),
        });
    }
    Ok(())
}

/// Extremum `-¼ vᵀA⁻¹v` of the quadric and the contribution sign for a
/// definite matrix; `None` for `A = 0`, where every sublevel set is a
/// half-space or empty and has `χ_c = 0`.
fn ambient_threshold(a: &SymMatrix, v: &[Rational]) -> Result<Option<(Rational, i64)>, QectError> {
    if a.is_zero() {
        return Ok(None);
    }
    let sign = match a.definiteness() {
        Definiteness::Positive => 1,
        Definiteness::Negative => sign_pow(a.dim()),
        Definiteness::Indefinite => return Err(QectError::UnsupportedAmbient),
    };
    let Solution::Unique(y) = linalg::solve(a.rows(), v) else {
        unreachable!("definite matrices are invertible");
    };
    Ok(Some((-rational::dot(v, &y) / int(4), sign)))
}

fn ambient_term(f: &ConstructibleFunction, probe: &QuadricProbe) -> Result<i64, QectError> {
    if f.ambient_coeff() == 0 {
        return Ok(0);
    }
    Ok(match ambient_threshold(probe.a(), probe.v())? {
        Some((extremum, sign)) if probe.t() >= &extremum => f.ambient_coeff() * sign,
        _ => 0,
    })
}

/// Restriction of the quadric to `s ↦ p₀ + s(p₁ - p₀)`: coefficients
/// `(c, b, a)` of `a s² + b s + c`.
fn edge_quadratic(
    a: &SymMatrix,
    v: &[Rational],
    p0: &[Rational],
    p1: &[Rational],
) -> [Rational; 3] {
    let d = rational::sub(p1, p0);
    let ad = a.mul_vec(&d);
    let quad = rational::dot(&d, &ad);
    let lin = int(2) * rational::dot(p0, &ad) + rational::dot(v, &d);
    let constant = a.bilinear(p0, p0) + rational::dot(v, p0);
    [constant, lin, quad]
}

fn eval_quadratic(g: &[Rational; 3], s: &Rational) -> Rational {
    &g[0] + s * (&g[1] + s * &g[2])
}

/// Stationary point of `g`, clamped to `[0, 1]`; `None` when `g` is affine.
fn clamped_vertex(g: &[Rational; 3]) -> Option<Rational> {
    if g[2].is_zero() {
        return None;
    }
    let s = -&g[1] / (int(2) * &g[2]);
    Some(s.clamp(Rational::zero(), Rational::one()))
}

/// `χ_c({s ∈ (0, 1) : g(s) ≤ t})`.
///
/// The closed set `{s ∈ [0, 1] : g(s) ≤ t}` is a disjoint union of closed
/// intervals and points, each with `χ_c = 1`; removing the endpoints that
/// belong to it leaves the open-interval answer.
fn open_edge_chi(g: &[Rational; 3], t: &Rational) -> i64 {
    let zero = Rational::zero();
    let one = Rational::one();
    let at0 = eval_quadratic(g, &zero) <= *t;
    let at1 = eval_quadratic(g, &one) <= *t;
    let components = if !g[2].is_negative() {
        // Convex: the sublevel set is an interval.
        let low = match clamped_vertex(g) {
            Some(s) => eval_quadratic(g, &s) <= *t,
            None => at0 || at1,
        };
        i64::from(low)
    } else {
        // Concave: [0, 1] minus a relatively open interval.
        let s = clamped_vertex(g).expect("nonzero leading coefficient");
        if eval_quadratic(g, &s) <= *t {
            1
        } else {
            i64::from(at0) + i64::from(at1)
        }
    };
    components - i64::from(at0) - i64::from(at1)
}

fn check_low_dim(f: &ConstructibleFunction) -> Result<(), QectError> {
    match f.max_weighted_dim() {
        Some(d) if d > 1 => Err(QectError::CellTooLarge(d)),
        _ => Ok(()),
    }
}

/// Exact transform value for functions whose weighted cells have
/// dimension at most one.
pub fn qect_eval_exact(f: &ConstructibleFunction, probe: &QuadricProbe) -> Result<i64, QectError> {
    check_dim(f, probe)?;
    check_low_dim(f)?;
    let mut total = ambient_term(f, probe)?;
    let complex = f.complex();
    for (i, w) in f.weighted_simplices() {
        let pts = complex.simplex_points(i);
        let chi = match pts.as_slice() {
            [p] => i64::from(quadric_value(probe.a(), probe.v(), p)? <= *probe.t()),
            [p0, p1] => open_edge_chi(&edge_quadratic(probe.a(), probe.v(), p0, p1), probe.t()),
            _ => unreachable!("dimension checked"),
        };
        total += w * chi;
    }
    Ok(total)
}

/// Real algebraic number given by a defining polynomial and an isolating
/// interval `[lo, hi]`; rational numbers use a degree-one polynomial and
/// `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    pub poly: Poly,
    pub lo: Rational,
    pub hi: Rational,
}

impl AlgebraicNumber {
    pub fn rational(r: Rational) -> Self {
        Self {
            poly: Poly::linear_root(&r),
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// The interval holds exactly one root of the polynomial.
    pub fn is_isolating(&self) -> bool {
        if self.lo == self.hi {
            return self.poly.eval(&self.lo).is_zero();
        }
        self.lo < self.hi && crate::poly::count_roots_open(&self.poly, &self.lo, &self.hi) == 1
    }
}

/// `t ↦ QECT(f)(A, v, t)` with its breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QectCurve {
    pub breakpoints: Vec<AlgebraicNumber>,
    pub step: StepFunction,
}

impl QectCurve {
    /// Right continuity and finiteness: the step function is canonical and
    /// every breakpoint is isolated and matches its rational position.
    pub fn check_structure(&self) -> bool {
        self.step.check_canonical().is_ok()
            && self.breakpoints.len() == self.step.breakpoints().len()
            && self
                .breakpoints
                .iter()
                .zip(self.step.breakpoints())
                .all(|(b, t)| b.is_isolating() && b.as_rational() == Some(t))
    }
}

/// The full curve for fixed `(A, v)`.
///
/// The value can only change where the number or shape of the sublevel
/// pieces changes: at vertex values, edge endpoint values, clamped
/// stationary values and the ambient extremum. All of these are rational.
/// The value at each candidate and on each gap (sampled at midpoints) comes
/// from [`qect_eval_exact`].
pub fn qect_curve_1d_support(
    f: &ConstructibleFunction,
    a: &SymMatrix,
    v: &[Rational],
) -> Result<QectCurve, QectError> {
    let probe = QuadricProbe::new(a.clone(), v.to_vec(), Rational::zero())?;
    check_dim(f, &probe)?;
    check_low_dim(f)?;
    let mut candidates: Vec<Rational> = Vec::new();
    if f.ambient_coeff() != 0 {
        if let Some((extremum, _)) = ambient_threshold(a, v)? {
            candidates.push(extremum);
        }
    }
    let complex = f.complex();
    for (i, _) in f.weighted_simplices() {
        let pts = complex.simplex_points(i);
        match pts.as_slice() {
            [p] => candidates.push(quadric_value(a, v, p)?),
            [p0, p1] => {
                let g = edge_quadratic(a, v, p0, p1);
                candidates.push(eval_quadratic(&g, &Rational::zero()));
                candidates.push(eval_quadratic(&g, &Rational::one()));
                if let Some(s) = clamped_vertex(&g) {
                    candidates.push(eval_quadratic(&g, &s));
                }
            }
            _ => unreachable!("dimension checked"),
        }
    }
    candidates.sort();
    candidates.dedup();
    let eval = |t: &Rational| qect_eval_exact(f, &probe.with_t(t.clone()));
    let Some(first) = candidates.first() else {
        return Ok(QectCurve {
            breakpoints: Vec::new(),
            step: StepFunction::constant(eval(&Rational::zero())?),
        });
    };
    let before = eval(&(first - Rational::one()))?;
    let two = int(2);
    let mut values = Vec::with_capacity(candidates.len());
    for (k, c) in candidates.iter().enumerate() {
        let at = eval(c)?;
        let right = match candidates.get(k + 1) {
            Some(next) => (c + next) / &two,
            None => c + Rational::one(),
        };
        debug_assert_eq!(at, eval(&right)?, "transform is right-continuous");
        values.push(at);
    }
    let mut all = vec![before];
    all.extend(values);
    let step =
        StepFunction::from_parts_lenient(candidates, all).expect("sorted distinct candidates");
    let breakpoints = step
        .breakpoints()
        .iter()
        .cloned()
        .map(AlgebraicNumber::rational)
        .collect();
    Ok(QectCurve { breakpoints, step })
}

/// Piecewise-linear estimate from [`qect_eval_pl`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlEstimate {
    pub estimate: i64,
    /// The last two levels agree.
    pub stable: bool,
    /// First level from which the estimate no longer changed.
    pub level: usize,
    /// Estimates at levels `0..=max_level`.
    pub history: Vec<i64>,
}

/// Open cells of the level-`level` barycentric subdivision of a simplex
/// that lie in its relative interior.
fn interior_cells(pts: Vec<Point>, level: usize, out: &mut Vec<Vec<Point>>) {
    if level == 0 || pts.len() == 1 {
        out.push(pts);
        return;
    }
    // Chains of faces ending at the full simplex: faces are bitmasks, and a
    // chain is grown downward from the full mask through proper subsets.
    let k = pts.len();
    let full = (1u32 << k) - 1;
    let barycenter = |mask: u32| {
        let face: Vec<&[Rational]> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pts[i].as_slice())
            .collect();
        rational::barycenter(&face)
    };
    let mut stack: Vec<Vec<u32>> = vec![vec![full]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty chain");
        let cell: Vec<Point> = chain.iter().map(|&m| barycenter(m)).collect();
        interior_cells(cell, level - 1, out);
        // Proper nonempty subsets of `last`.
        let mut sub = (last - 1) & last;
        while sub != 0 {
            let mut next = chain.clone();
            next.push(sub);
            stack.push(next);
            sub = (sub - 1) & last;
        }
    }
}

/// PL approximation of the transform for cells of any dimension.
///
/// Each weighted cell is barycentrically subdivided `level` times; the
/// quadric is replaced by its linear interpolation on every refined open
/// cell, which then contributes `weight·(-1)^dim` once `t` reaches its
/// largest vertex value. Ambient terms use the exact closed form.
pub fn qect_eval_pl(
    f: &ConstructibleFunction,
    probe: &QuadricProbe,
    max_level: usize,
) -> Result<PlEstimate, QectError> {
    check_dim(f, probe)?;
    let ambient = ambient_term(f, probe)?;
    let complex = f.complex();
    let mut history = Vec::with_capacity(max_level + 1);
    for level in 0..=max_level {
        let mut total = ambient;
        for (i, w) in f.weighted_simplices() {
            let pts: Vec<Point> = complex
                .simplex_points(i)
                .iter()
                .map(|p| p.to_vec())
                .collect();
            let mut cells = Vec::new();
            interior_cells(pts, level, &mut cells);
            for cell in cells {
                let below = cell.iter().all(|p| {
                    quadric_value(probe.a(), probe.v(), p).expect("dimension checked") <= *probe.t()
                });
                if below {
                    total += w * sign_pow(cell.len() - 1);
                }
            }
        }
        history.push(total);
    }
    let estimate = *history.last().expect("at least level 0");
    let stable = history.len() >= 2 && history[history.len() - 2] == estimate;
    let level = history
        .iter()
        .rposition(|&e| e != estimate)
        .map_or(0, |p| p + 1);
    Ok(PlEstimate {
        estimate,
        stable,
        level,
        history,
    })
}

/// `(μ - 1)·Σ_{z ∈ {±x'}} h(z) + ∫ h dχ` with `μ = 1 + (-1)^{d-1}`,
/// `d = n(n+1)/2`: the dual transform of the `v = 0` quadric transform.
pub fn compose_v0(h: &ConstructibleFunction, x_prime: &[Rational]) -> Result<i64, QectError> {
    let n = h.ambient_dim();
    let mu = chi_sphere(n * (n + 1) / 2);
    let mut pointwise = h.point_evaluate(x_prime)?;
    if !rational::is_zero_vec(x_prime) {
        pointwise += h.point_evaluate(&rational::neg(x_prime))?;
    }
    Ok((mu - 1) * pointwise + h.euler_integral())
}

/// `χ(S^{d-1}) = 1 + (-1)^{d-1}`.
pub fn chi_sphere(d: usize) -> i64 {
    1 + sign_pow(d + 1)
}

/// `(-1)^{n-1}·h(x') + ∫ h dχ`: the dual transform of the fixed-`A`
/// quadric transform.
///
/// Besides the stated bound `||A|| < 1/(1 + 2R²)`, the stricter
/// `||A|| < 1/(1 + 2R)` is required. It coincides with the stated bound for
/// `R ≥ 1`; for `R < 1` the stated bound alone admits pairs whose fiber
/// characteristic is not 1 and the formula can fail.
pub fn compose_fixed_a(
    h: &ConstructibleFunction,
    a: &SymMatrix,
    r: &Rational,
    x_prime: &[Rational],
) -> Result<i64, QectError> {
    if a.dim() != h.ambient_dim() {
        return Err(QectError::DimensionMismatch {
            expected: h.ambient_dim(),
            found: a.dim(),
        });
    }
    if !fixed_a_bound_check(a, r) {
        return Err(QectError::BoundViolated);
    }
    if !fixed_a_cap_check(a, r) {
        return Err(QectError::CapConditionFails);
    }
    if h.ambient_coeff() != 0 {
        return Err(QectError::NonzeroAmbient);
    }
    if !h.support_within_radius(r) {
        return Err(QectError::SupportEscapes(rational::format_rational(r)));
    }
    let n = h.ambient_dim();
    Ok(sign_pow(n - 1) * h.point_evaluate(x_prime)? + h.euler_integral())
}
