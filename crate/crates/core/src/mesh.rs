//! Triangulated spheres `S⁰`, `S¹`, `S²` with rational vertices, and the
//! Euler characteristic of closed regions `{Δ ≥ 0}` on them.
//!
//! The meshes live on the unit `ℓ¹` sphere (the cross-polytope), which is
//! radially homeomorphic to the round sphere. Callers supply the sign of
//! `Δ` at a vertex; for functions that are homogeneous of positive degree
//! the sign at a cross-polytope vertex equals the sign at its radial
//! projection.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::rational::{barycenter, int, Point, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeshError {
    #[error("sphere meshes exist for ambient dimension 1, 2 or 3, not {0}")]
    UnsupportedDimension(usize),
}

#[derive(Debug, Clone)]
pub struct SphereMesh {
    ambient_dim: usize,
    vertices: Vec<Point>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

fn unit(k: usize, i: usize, sign: i64) -> Point {
    (0..k)
        .map(|j| if j == i { int(sign) } else { int(0) })
        .collect()
}

impl SphereMesh {
    /// Boundary of the cross-polytope in `ℝ^k`.
    pub fn cross_polytope(k: usize) -> Result<Self, MeshError> {
        let mut vertices = Vec::new();
        for i in 0..k {
            vertices.push(unit(k, i, 1));
            vertices.push(unit(k, i, -1));
        }
        let (edges, triangles) = match k {
            1 => (Vec::new(), Vec::new()),
            // (+x, +y, -x, -y) around the square.
            2 => (vec![[0, 2], [2, 1], [1, 3], [3, 0]], Vec::new()),
            3 => {
                let mut tris = Vec::new();
                for x in [0, 1] {
                    for y in [2, 3] {
                        for z in [4, 5] {
                            tris.push([x, y, z]);
                        }
                    }
                }
                (edges_of(&tris), tris)
            }
            _ => return Err(MeshError::UnsupportedDimension(k)),
        };
        Ok(Self {
            ambient_dim: k,
            vertices,
            edges,
            triangles,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Uniform midpoint subdivision: edges split in two, triangles in four.
    pub fn refine(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| {
            let key = (a.min(b), a.max(b));
            *mids.entry(key).or_insert_with(|| {
                let m = barycenter(&[&vertices[a], &vertices[b]]);
                vertices.push(m);
                vertices.len() - 1
            })
        };
        match self.ambient_dim {
            2 => {
                let mut edges = Vec::with_capacity(2 * self.edges.len());
                for &[a, b] in &self.edges {
                    let m = midpoint(a, b, &mut vertices);
                    edges.push([a, m]);
                    edges.push([m, b]);
                }
                Self {
                    ambient_dim: 2,
                    vertices,
                    edges,
                    triangles: Vec::new(),
                }
            }
            3 => {
                let mut triangles = Vec::with_capacity(4 * self.triangles.len());
                for &[a, b, c] in &self.triangles {
                    let ab = midpoint(a, b, &mut vertices);
                    let bc = midpoint(b, c, &mut vertices);
                    let ca = midpoint(c, a, &mut vertices);
                    triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
                }
                Self {
                    ambient_dim: 3,
                    vertices,
                    edges: edges_of(&triangles),
                    triangles,
                }
            }
            _ => self.clone(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// `χ` of the closed subcomplex of simplices whose vertices all have
    /// nonnegative sign.
    pub fn closed_region_chi(&self, signs: &[Ordering]) -> i64 {
        let keep = |i: &usize| signs[*i] != Ordering::Less;
        let v = (0..self.vertices.len()).filter(keep).count() as i64;
        let e = self.edges.iter().filter(|s| s.iter().all(keep)).count() as i64;
        let t = self.triangles.iter().filter(|s| s.iter().all(keep)).count() as i64;
        v - e + t
    }
}

fn edges_of(triangles: &[[usize; 3]]) -> Vec<[usize; 2]> {
    let mut set = BTreeSet::new();
    for &[a, b, c] in triangles {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            set.insert([p.min(q), p.max(q)]);
        }
    }
    set.into_iter().collect()
}

/// Result of [`fiber_char_mesh`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshChi {
    pub chi: i64,
    /// The last two refinement levels agree.
    pub stable: bool,
    /// Region `χ` at levels `0..=max_level`.
    pub history: Vec<i64>,
}

/// `χ({Δ ≥ 0})` on the sphere `S^{k-1} ⊂ ℝ^k`, from the sign of `Δ` at mesh
/// vertices, over `max_level` uniform refinements.
pub fn fiber_char_mesh<F>(sign: F, k: usize, max_level: usize) -> Result<MeshChi, MeshError>
where
    F: Fn(&[Rational]) -> Ordering,
{
    let mut mesh = SphereMesh::cross_polytope(k)?;
    let mut cache: HashMap<Point, Ordering> = HashMap::new();
    let mut history = Vec::with_capacity(max_level + 1);
    for level in 0..=max_level {
        if level > 0 {
            mesh = mesh.refine();
        }
        let signs: Vec<Ordering> = mesh
            .vertices()
            .iter()
            .map(|p| *cache.entry(p.clone()).or_insert_with(|| sign(p)))
            .collect();
        history.push(mesh.closed_region_chi(&signs));
    }
    let chi = *history.last().expect("level 0 always runs");
    let stable = history.len() >= 2 && history[history.len() - 2] == chi;
    Ok(MeshChi {
        chi,
        stable,
        history,
    })
}
