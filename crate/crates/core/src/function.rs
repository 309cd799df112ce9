//! Constructible functions `f = c·𝟙_{ℝⁿ} + Σ a_σ 𝟙_{relint σ}` and their
//! Euler integrals.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::complex::{ComplexError, GeometricComplex};
use crate::rational::{self, int, sign_pow, Point, Rational};
use crate::step::{euler_integral_1d, StepFunction, Upper};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{found} weights given for {expected} simplices")]
    WeightCount { expected: usize, found: usize },
    #[error("operation needs ambient dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("simplex {0} has dimension {1}, above the supported maximum {2}")]
    SimplexTooLarge(usize, usize, usize),
    #[error("line direction must be nonzero")]
    ZeroDirection,
}

/// Integer-valued function on `ℝⁿ` represented as an ambient constant plus
/// integer weights on relatively open simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructibleFunction {
    complex: GeometricComplex,
    weights: Vec<i64>,
    ambient_coeff: i64,
}

impl ConstructibleFunction {
    pub fn new(
        complex: GeometricComplex,
        weights: Vec<i64>,
        ambient_coeff: i64,
    ) -> Result<Self, FunctionError> {
        if weights.len() != complex.len() {
            return Err(FunctionError::WeightCount {
                expected: complex.len(),
                found: weights.len(),
            });
        }
        Ok(Self {
            complex,
            weights,
            ambient_coeff,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::constant(ambient_dim, 0)
    }

    /// `c · 𝟙_{ℝⁿ}`.
    pub fn constant(ambient_dim: usize, c: i64) -> Self {
        Self {
            complex: GeometricComplex::empty(ambient_dim).expect("positive ambient dimension"),
            weights: Vec::new(),
            ambient_coeff: c,
        }
    }

    /// Builds a function from cells given by vertex coordinates. Equal
    /// vertices are shared and identical cells have their weights summed.
    pub fn from_cells(
        ambient_dim: usize,
        cells: impl IntoIterator<Item = (Vec<Point>, i64)>,
        ambient_coeff: i64,
    ) -> Result<Self, FunctionError> {
        let mut b = CellBuilder::new(ambient_dim);
        for (pts, w) in cells {
            b.add(pts, w)?;
        }
        b.finish(ambient_coeff)
    }

    /// `weight · 𝟙_{p}`.
    pub fn point_mass(p: Point, weight: i64) -> Self {
        let n = p.len();
        Self::from_cells(n, [(vec![p], weight)], 0).expect("single point is well formed")
    }

    /// `weight · 𝟙` of the closed simplex with the given vertices.
    pub fn closed_simplex(pts: Vec<Point>, weight: i64) -> Result<Self, FunctionError> {
        let n = pts.first().map_or(1, Vec::len);
        let complex = GeometricComplex::new(n, pts.clone(), vec![(0..pts.len()).collect()])?;
        Ok(closure_expand(&complex, 0, weight))
    }

    pub fn complex(&self) -> &GeometricComplex {
        &self.complex
    }

    pub fn ambient_dim(&self) -> usize {
        self.complex.ambient_dim()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, simplex: usize) -> i64 {
        self.weights[simplex]
    }

    pub fn ambient_coeff(&self) -> i64 {
        self.ambient_coeff
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.ambient_coeff == 0
    }

    /// Indices and weights of simplices carrying a nonzero weight.
    pub fn weighted_simplices(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0)
            .map(|(i, w)| (i, *w))
    }

    /// Largest dimension among weighted simplices (`None` if none).
    pub fn max_weighted_dim(&self) -> Option<usize> {
        self.weighted_simplices()
            .map(|(i, _)| self.complex.simplex_dim(i))
            .max()
    }

    /// Weighted cells as owned coordinate lists.
    pub fn cells(&self) -> Vec<(Vec<Point>, i64)> {
        self.weighted_simplices()
            .map(|(i, w)| {
                let pts = self.complex.simplex_points(i);
                (pts.into_iter().map(<[Rational]>::to_vec).collect(), w)
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, FunctionError> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(FunctionError::DimensionMismatch(
                self.ambient_dim(),
                other.ambient_dim(),
            ));
        }
        Self::from_cells(
            self.ambient_dim(),
            self.cells().into_iter().chain(other.cells()),
            self.ambient_coeff + other.ambient_coeff,
        )
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            complex: self.complex.clone(),
            weights: self.weights.iter().map(|w| w * k).collect(),
            ambient_coeff: self.ambient_coeff * k,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FunctionError> {
        self.add(&other.scale(-1))
    }

    /// `self + c·𝟙_{ℝⁿ}`.
    pub fn plus_constant(&self, c: i64) -> Self {
        Self {
            ambient_coeff: self.ambient_coeff + c,
            ..self.clone()
        }
    }

    /// Replaces the weight of one simplex.
    pub fn with_weight(&self, simplex: usize, weight: i64) -> Self {
        let mut out = self.clone();
        out.weights[simplex] = weight;
        out
    }

    /// `c + Σ a_σ` over simplices whose relative interior contains `x`.
    pub fn point_evaluate(&self, x: &[Rational]) -> Result<i64, FunctionError> {
        self.complex.check_point(x)?;
        Ok(self.ambient_coeff
            + self
                .weighted_simplices()
                .filter(|(i, _)| self.complex.relint_contains(*i, x))
                .map(|(_, w)| w)
                .sum::<i64>())
    }

    /// `∫ f dχ = c·(-1)ⁿ + Σ a_σ (-1)^{dim σ}`.
    pub fn euler_integral(&self) -> i64 {
        self.ambient_coeff * sign_pow(self.ambient_dim())
            + self
                .weighted_simplices()
                .map(|(i, w)| w * sign_pow(self.complex.simplex_dim(i)))
                .sum::<i64>()
    }

    /// Image of the function, exact when the complex is valid (relative
    /// interiors pairwise disjoint).
    pub fn value_set(&self) -> Vec<i64> {
        let mut vals: Vec<i64> = std::iter::once(self.ambient_coeff)
            .chain(
                self.weighted_simplices()
                    .map(|(_, w)| self.ambient_coeff + w),
            )
            .collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    /// `x ↦ f(-x)`.
    pub fn reflect(&self) -> Self {
        let (n, vertices, simplices) = self.complex.clone().into_parts();
        let vertices = vertices.iter().map(|v| rational::neg(v)).collect();
        Self {
            complex: GeometricComplex::new(n, vertices, simplices).expect("same shape"),
            weights: self.weights.clone(),
            ambient_coeff: self.ambient_coeff,
        }
    }

    /// Rational sample points: barycenter of every weighted cell plus one
    /// point outside the bounding box of all vertices.
    pub fn sample_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self
            .weighted_simplices()
            .map(|(i, _)| rational::barycenter(&self.complex.simplex_points(i)))
            .collect();
        pts.push(self.exterior_point());
        pts
    }

    /// A point outside the support of every simplex.
    pub fn exterior_point(&self) -> Point {
        let n = self.ambient_dim();
        let max = self
            .complex
            .vertices()
            .iter()
            .flat_map(|v| v.iter())
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero);
        let mut p = vec![Rational::zero(); n];
        p[0] = max + Rational::one();
        p
    }

    /// Whether every weighted vertex lies in the closed ball of radius `r`.
    pub fn support_within_radius(&self, r: &Rational) -> bool {
        let r2 = r * r;
        self.weighted_simplices().all(|(i, _)| {
            self.complex
                .simplex_points(i)
                .iter()
                .all(|p| rational::norm_sq(p) <= r2)
        })
    }
}

/// Incremental builder that deduplicates vertices and cells.
pub struct CellBuilder {
    ambient_dim: usize,
    vertex_ids: HashMap<Point, usize>,
    vertices: Vec<Point>,
    cell_ids: HashMap<Vec<usize>, usize>,
    simplices: Vec<Vec<usize>>,
    weights: Vec<i64>,
}

impl CellBuilder {
    pub fn new(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vertex_ids: HashMap::new(),
            vertices: Vec::new(),
            cell_ids: HashMap::new(),
            simplices: Vec::new(),
            weights: Vec::new(),
        }
    }

    fn vertex(&mut self, p: Point) -> Result<usize, FunctionError> {
        if p.len() != self.ambient_dim {
            return Err(ComplexError::PointDimension {
                expected: self.ambient_dim,
                found: p.len(),
            }
            .into());
        }
        if let Some(&id) = self.vertex_ids.get(&p) {
            return Ok(id);
        }
        let id = self.vertices.len();
        self.vertex_ids.insert(p.clone(), id);
        self.vertices.push(p);
        Ok(id)
    }

    /// Adds `weight · 𝟙_{relint conv(pts)}` and returns the cell index.
    pub fn add(&mut self, pts: Vec<Point>, weight: i64) -> Result<usize, FunctionError> {
        let mut ids = pts
            .into_iter()
            .map(|p| self.vertex(p))
            .collect::<Result<Vec<_>, _>>()?;
        ids.sort_unstable();
        if let Some(&c) = self.cell_ids.get(&ids) {
            self.weights[c] += weight;
            return Ok(c);
        }
        let c = self.simplices.len();
        self.cell_ids.insert(ids.clone(), c);
        self.simplices.push(ids);
        self.weights.push(weight);
        Ok(c)
    }

    pub fn finish(self, ambient_coeff: i64) -> Result<ConstructibleFunction, FunctionError> {
        let complex = GeometricComplex::new(self.ambient_dim, self.vertices, self.simplices)?;
        ConstructibleFunction::new(complex, self.weights, ambient_coeff)
    }
}

/// `weight · 𝟙` of the closed simplex `simplex_index`, expressed as the sum
/// of `weight · 𝟙` over all of its open faces. Faces missing from the
/// complex are added.
pub fn closure_expand(
    complex: &GeometricComplex,
    simplex_index: usize,
    weight: i64,
) -> ConstructibleFunction {
    let verts = &complex.simplices()[simplex_index];
    let k = verts.len();
    let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, s) in complex.simplices().iter().enumerate() {
        let mut key = s.clone();
        key.sort_unstable();
        lookup.entry(key).or_insert(i);
    }
    let mut simplices = complex.simplices().to_vec();
    let mut weights = vec![0; simplices.len()];
    for mask in 1u32..(1 << k) {
        let mut face: Vec<usize> = (0..k)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| verts[b])
            .collect();
        face.sort_unstable();
        let idx = *lookup.entry(face.clone()).or_insert_with(|| {
            simplices.push(face);
            weights.push(0);
            simplices.len() - 1
        });
        weights[idx] = weight;
    }
    let complex = GeometricComplex::new(
        complex.ambient_dim(),
        complex.vertices().to_vec(),
        simplices,
    )
    .expect("faces reuse existing vertices");
    ConstructibleFunction::new(complex, weights, 0).expect("weights match simplices")
}

/// Line `{point + s·direction : s ∈ ℝ}` in the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line2D {
    point: Point,
    direction: Point,
}

impl Line2D {
    pub fn new(point: Point, direction: Point) -> Result<Self, FunctionError> {
        if point.len() != 2 || direction.len() != 2 {
            return Err(FunctionError::WrongDimension {
                expected: 2,
                found: point.len().max(direction.len()),
            });
        }
        if rational::is_zero_vec(&direction) {
            return Err(FunctionError::ZeroDirection);
        }
        Ok(Self { point, direction })
    }

    /// The vertical line `x = a`, parameterized by the second coordinate.
    pub fn vertical(a: Rational) -> Self {
        Self {
            point: vec![a, Rational::zero()],
            direction: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn direction(&self) -> &[Rational] {
        &self.direction
    }

    fn cross(a: &[Rational], b: &[Rational]) -> Rational {
        &a[0] * &b[1] - &a[1] * &b[0]
    }

    /// Parameter of `p` along the line if `p` lies on it.
    fn parameter_of(&self, p: &[Rational]) -> Option<Rational> {
        let rel = rational::sub(p, &self.point);
        if !Self::cross(&rel, &self.direction).is_zero() {
            return None;
        }
        Some(rational::dot(&rel, &self.direction) / rational::norm_sq(&self.direction))
    }
}

/// Intersection of a relatively open simplex with a line, in line parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
enum LineCut {
    Empty,
    Point(Rational),
    Open(Rational, Rational),
}

fn cut_simplex(pts: &[&[Rational]], line: &Line2D) -> LineCut {
    match pts.len() {
        1 => match line.parameter_of(pts[0]) {
            Some(s) => LineCut::Point(s),
            None => LineCut::Empty,
        },
        2 => {
            let (p, q) = (pts[0], pts[1]);
            let edge = rational::sub(q, p);
            let denom = Line2D::cross(&edge, &line.direction);
            if denom.is_zero() {
                // Parallel: either on the line or disjoint from it.
                match (line.parameter_of(p), line.parameter_of(q)) {
                    (Some(a), Some(b)) if a != b => {
                        LineCut::Open(a.clone().min(b.clone()), a.max(b))
                    }
                    _ => LineCut::Empty,
                }
            } else {
                // p + u·edge = point + s·dir
                let rel = rational::sub(&line.point, p);
                let u = Line2D::cross(&rel, &line.direction) / &denom;
                if u.is_positive() && u < Rational::one() {
                    let s = Line2D::cross(&rel, &edge) / &denom;
                    LineCut::Point(s)
                } else {
                    LineCut::Empty
                }
            }
        }
        3 => {
            // Barycentric coordinates along the line are affine in s:
            // λᵢ(s) = αᵢ + βᵢ s. The open triangle is where all are positive.
            let at0 = crate::complex::barycentric(pts, &line.point);
            let at1 =
                crate::complex::barycentric(pts, &rational::add(&line.point, &line.direction));
            let (Some(a0), Some(a1)) = (at0, at1) else {
                return LineCut::Empty;
            };
            let mut lower: Option<Rational> = None;
            let mut upper: Option<Rational> = None;
            for (alpha, l1) in a0.iter().zip(&a1) {
                let beta = l1 - alpha;
                if beta.is_zero() {
                    if !alpha.is_positive() {
                        return LineCut::Empty;
                    }
                    continue;
                }
                let root = -alpha / &beta;
                if beta.is_positive() {
                    lower = Some(lower.map_or(root.clone(), |l| l.max(root)));
                } else {
                    upper = Some(upper.map_or(root.clone(), |u| u.min(root)));
                }
            }
            match (lower, upper) {
                (Some(l), Some(u)) if l < u => LineCut::Open(l, u),
                _ => LineCut::Empty,
            }
        }
        _ => unreachable!("caller checks simplex dimension"),
    }
}

/// `s ↦ f(point + s·direction)` as a constructible function on `ℝ`.
pub fn restrict_to_line(
    f: &ConstructibleFunction,
    line: &Line2D,
) -> Result<ConstructibleFunction, FunctionError> {
    if f.ambient_dim() != 2 {
        return Err(FunctionError::WrongDimension {
            expected: 2,
            found: f.ambient_dim(),
        });
    }
    let mut b = CellBuilder::new(1);
    for (i, w) in f.weighted_simplices() {
        let dim = f.complex().simplex_dim(i);
        if dim > 2 {
            return Err(FunctionError::SimplexTooLarge(i, dim, 2));
        }
        match cut_simplex(&f.complex().simplex_points(i), line) {
            LineCut::Empty => {}
            LineCut::Point(s) => {
                b.add(vec![vec![s]], w)?;
            }
            LineCut::Open(a, c) => {
                b.add(vec![vec![a], vec![c]], w)?;
            }
        }
    }
    b.finish(f.ambient_coeff())
}

/// Fiber integral `a ↦ ∫ f(a, ·) dχ` over the vertical line at `a`.
pub fn vertical_fiber_integral(
    f: &ConstructibleFunction,
    a: &Rational,
) -> Result<i64, FunctionError> {
    Ok(restrict_to_line(f, &Line2D::vertical(a.clone()))?.euler_integral())
}

/// Both sides of the Fubini identity for the projection `(x, y) ↦ x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FubiniCheck {
    pub direct: i64,
    pub iterated: i64,
}

impl FubiniCheck {
    pub fn holds(&self) -> bool {
        self.direct == self.iterated
    }
}

/// Computes `∫ f dχ` directly and as the Euler integral over `ℝ` of the
/// fiber integrals along vertical lines.
///
/// The fiber integral is constant between consecutive vertex abscissas, so
/// the outer function is assembled exactly as a constructible function on
/// `ℝ`: one value per critical abscissa, one per bounded gap (sampled at
/// its midpoint), and a constant for the two unbounded ends.
pub fn fubini_projection(f: &ConstructibleFunction) -> Result<FubiniCheck, FunctionError> {
    if f.ambient_dim() != 2 {
        return Err(FunctionError::WrongDimension {
            expected: 2,
            found: f.ambient_dim(),
        });
    }
    let mut xs: Vec<Rational> = f
        .weighted_simplices()
        .flat_map(|(i, _)| {
            f.complex()
                .simplex_points(i)
                .into_iter()
                .map(|p| p[0].clone())
        })
        .collect();
    xs.sort();
    xs.dedup();
    // Far from every vertex only the ambient term survives: c·χ(ℝ).
    let outer_const = -f.ambient_coeff();
    let mut b = CellBuilder::new(1);
    let two = int(2);
    for (k, a) in xs.iter().enumerate() {
        let at = vertical_fiber_integral(f, a)?;
        b.add(vec![vec![a.clone()]], at - outer_const)?;
        if let Some(next) = xs.get(k + 1) {
            let mid = (a + next) / &two;
            let gap = vertical_fiber_integral(f, &mid)?;
            b.add(vec![vec![a.clone()], vec![next.clone()]], gap - outer_const)?;
        }
    }
    let outer = b.finish(outer_const)?;
    Ok(FubiniCheck {
        direct: f.euler_integral(),
        iterated: outer.euler_integral(),
    })
}

/// Fiber integrals along vertical lines as a step function, when the
/// outer function happens to be right-continuous. Used to cross-check with
/// [`euler_integral_1d`].
pub fn fiber_step_function(
    f: &ConstructibleFunction,
) -> Result<Option<StepFunction>, FunctionError> {
    let mut xs: Vec<Rational> = f
        .complex()
        .vertices()
        .iter()
        .map(|p| p[0].clone())
        .collect();
    xs.sort();
    xs.dedup();
    let outer_const = -f.ambient_coeff();
    let mut breakpoints = Vec::new();
    let mut values = vec![outer_const];
    let two = int(2);
    for (k, a) in xs.iter().enumerate() {
        let at = vertical_fiber_integral(f, a)?;
        let right = match xs.get(k + 1) {
            Some(next) => vertical_fiber_integral(f, &((a + next) / &two))?,
            None => outer_const,
        };
        if at != right {
            return Ok(None);
        }
        breakpoints.push(a.clone());
        values.push(at);
    }
    Ok(Some(
        StepFunction::from_parts_lenient(breakpoints, values).expect("sorted abscissas"),
    ))
}

/// `∫ φ dχ` over all of `ℝ`.
pub fn step_integral(phi: &StepFunction) -> i64 {
    euler_integral_1d(phi, &Upper::PosInfinity)
}
