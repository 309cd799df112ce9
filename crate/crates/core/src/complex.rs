//! Geometric complexes: rational vertices plus relatively open simplices.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg;
use crate::lp;
use crate::rational::{Point, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    VertexDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("simplex {simplex} references vertex {vertex}, but only {count} vertices exist")]
    VertexOutOfRange {
        simplex: usize,
        vertex: usize,
        count: usize,
    },
    #[error("simplex {0} has no vertices")]
    EmptySimplex(usize),
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
}

/// Finite collection of relatively open simplices in `ℝⁿ`.
///
/// Construction only checks indexing and coordinate counts; geometric
/// validity (affine independence, disjoint relative interiors) is reported
/// by [`validate_complex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricComplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
}

impl GeometricComplex {
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Point>,
        simplices: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        if ambient_dim == 0 {
            return Err(ComplexError::ZeroDimension);
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(ComplexError::VertexDimension {
                    index,
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        for (si, s) in simplices.iter().enumerate() {
            if s.is_empty() {
                return Err(ComplexError::EmptySimplex(si));
            }
            if let Some(&vertex) = s.iter().find(|&&v| v >= vertices.len()) {
                return Err(ComplexError::VertexOutOfRange {
                    simplex: si,
                    vertex,
                    count: vertices.len(),
                });
            }
        }
        Ok(Self {
            ambient_dim,
            vertices,
            simplices,
        })
    }

    pub fn empty(ambient_dim: usize) -> Result<Self, ComplexError> {
        Self::new(ambient_dim, Vec::new(), Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension of simplex `i`, i.e. its vertex count minus one.
    pub fn simplex_dim(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn simplex_points(&self, i: usize) -> Vec<&[Rational]> {
        self.simplices[i]
            .iter()
            .map(|&v| self.vertices[v].as_slice())
            .collect()
    }

    pub fn check_point(&self, x: &[Rational]) -> Result<(), ComplexError> {
        if x.len() != self.ambient_dim {
            return Err(ComplexError::PointDimension {
                expected: self.ambient_dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Whether `x` lies in the relative interior of simplex `i`.
    ///
    /// Decided exactly from barycentric coordinates: `x` must lie in the
    /// affine hull and every coordinate must be strictly positive.
    pub fn relint_contains(&self, i: usize, x: &[Rational]) -> bool {
        let pts = self.simplex_points(i);
        relint_contains(&pts, x)
    }

    /// Bounding box of simplex `i` as `(min, max)` per coordinate.
    pub fn bbox(&self, i: usize) -> (Point, Point) {
        bbox(&self.simplex_points(i))
    }

    pub(crate) fn into_parts(self) -> (usize, Vec<Point>, Vec<Vec<usize>>) {
        (self.ambient_dim, self.vertices, self.simplices)
    }
}

pub(crate) fn bbox(pts: &[&[Rational]]) -> (Point, Point) {
    let mut lo = pts[0].to_vec();
    let mut hi = pts[0].to_vec();
    for p in &pts[1..] {
        for k in 0..p.len() {
            if p[k] < lo[k] {
                lo[k] = p[k].clone();
            }
            if p[k] > hi[k] {
                hi[k] = p[k].clone();
            }
        }
    }
    (lo, hi)
}

pub(crate) fn in_box(x: &[Rational], lo: &[Rational], hi: &[Rational]) -> bool {
    x.iter()
        .zip(lo.iter().zip(hi))
        .all(|(v, (l, h))| l <= v && v <= h)
}

/// Exact relative-interior membership for a simplex given by its points.
pub fn relint_contains(pts: &[&[Rational]], x: &[Rational]) -> bool {
    let (lo, hi) = bbox(pts);
    if !in_box(x, &lo, &hi) {
        return false;
    }
    if pts.len() == 1 {
        return pts[0] == x;
    }
    match barycentric(pts, x) {
        Some(lambda) => lambda.iter().all(|l| l > &Rational::zero()),
        None => false,
    }
}

/// Barycentric coordinates of `x` with respect to affinely independent
/// `pts`, or `None` if `x` is off their affine hull.
pub fn barycentric(pts: &[&[Rational]], x: &[Rational]) -> Option<Vec<Rational>> {
    let k = pts.len();
    let dim = x.len();
    let mut a = Vec::with_capacity(dim + 1);
    let mut b = Vec::with_capacity(dim + 1);
    for c in 0..dim {
        a.push(pts.iter().map(|p| p[c].clone()).collect::<Vec<_>>());
        b.push(x[c].clone());
    }
    a.push(vec![Rational::from_integer(1.into()); k]);
    b.push(Rational::from_integer(1.into()));
    match linalg::solve(&a, &b) {
        linalg::Solution::Unique(l) => Some(l),
        _ => None,
    }
}

pub fn affinely_independent(pts: &[&[Rational]]) -> bool {
    if pts.len() == 1 {
        return true;
    }
    if pts.len() > pts[0].len() + 1 {
        return false;
    }
    let diffs: Vec<Vec<Rational>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs) == pts.len() - 1
}

/// Outcome of [`validate_complex`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Simplices whose vertices are affinely dependent (including repeated indices).
    pub affine_dependent: Vec<usize>,
    /// Pairs of simplices with intersecting relative interiors.
    pub overlaps: Vec<(usize, usize)>,
    /// Whether the pairwise overlap check ran.
    pub overlaps_checked: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.affine_dependent.is_empty() && self.overlaps.is_empty()
    }
}

/// Checks affine independence of every simplex and, for ambient dimension
/// at most 3, pairwise disjointness of relative interiors.
pub fn validate_complex(complex: &GeometricComplex) -> ValidationReport {
    let mut report = ValidationReport {
        affine_dependent: affine_failures(complex),
        ..Default::default()
    };
    if complex.ambient_dim() <= 3 {
        report.overlaps = find_overlaps(complex, &all_indices(complex));
        report.overlaps_checked = true;
    }
    report
}

/// Like [`validate_complex`] but always runs the overlap check.
pub fn validate_complex_full(complex: &GeometricComplex) -> ValidationReport {
    ValidationReport {
        affine_dependent: affine_failures(complex),
        overlaps: find_overlaps(complex, &all_indices(complex)),
        overlaps_checked: true,
    }
}

fn all_indices(complex: &GeometricComplex) -> Vec<usize> {
    (0..complex.len()).collect()
}

fn affine_failures(complex: &GeometricComplex) -> Vec<usize> {
    (0..complex.len())
        .filter(|&i| {
            let s = &complex.simplices()[i];
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() != s.len() || !affinely_independent(&complex.simplex_points(i))
        })
        .collect()
}

/// Pairs among `subset` whose relative interiors meet. Uses a sweep over
/// the first coordinate to skip pairs with disjoint bounding boxes.
pub(crate) fn find_overlaps(complex: &GeometricComplex, subset: &[usize]) -> Vec<(usize, usize)> {
    let boxes: BTreeMap<usize, (Point, Point)> =
        subset.iter().map(|&i| (i, complex.bbox(i))).collect();
    let mut order = subset.to_vec();
    order.sort_by(|a, b| boxes[a].0[0].cmp(&boxes[b].0[0]).then(a.cmp(b)));
    let mut out = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let (lo_i, hi_i) = &boxes[&i];
        for &j in &order[pos + 1..] {
            let (lo_j, hi_j) = &boxes[&j];
            if lo_j[0] > hi_i[0] {
                break;
            }
            let disjoint_boxes = (1..lo_i.len()).any(|k| lo_j[k] > hi_i[k] || lo_i[k] > hi_j[k]);
            if disjoint_boxes {
                continue;
            }
            let pi = complex.simplex_points(i);
            let pj = complex.simplex_points(j);
            if lp::relint_common_point(&pi, &pj).is_some() {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out.sort_unstable();
    out
}
