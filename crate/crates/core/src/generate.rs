//! Seeded generators for fixtures, directions, probes and matrices. All
//! outputs are rational; a seed determines every value.

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ect::DirectionProbe;
use crate::function::{CellBuilder, ConstructibleFunction};
use crate::qect::SymMatrix;
use crate::rational::{self, int, ipoint, ratio, Point, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p / q` with `|p| ≤ num_bound` and `1 ≤ q ≤ den_max`.
pub fn small_rational<R: Rng>(rng: &mut R, num_bound: i64, den_max: i64) -> Rational {
    ratio(
        rng.random_range(-num_bound..=num_bound),
        rng.random_range(1..=den_max),
    )
}

pub fn small_point<R: Rng>(rng: &mut R, n: usize, num_bound: i64, den_max: i64) -> Point {
    (0..n)
        .map(|_| small_rational(rng, num_bound, den_max))
        .collect()
}

/// Nonzero integer vector with entries in `[-bound, bound]`.
pub fn lattice_direction<R: Rng>(rng: &mut R, n: usize, bound: i64) -> DirectionProbe {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
        if let Ok(d) = DirectionProbe::from_ints(&v) {
            return d;
        }
    }
}

/// Rational point of the unit sphere `S^{n-1}` by inverse stereographic
/// projection of a random rational point of `ℝ^{n-1}`.
pub fn sphere_direction<R: Rng>(rng: &mut R, n: usize, bound: i64) -> DirectionProbe {
    if n == 1 {
        let s = if rng.random_bool(0.5) { 1 } else { -1 };
        return DirectionProbe::from_ints(&[s]).expect("nonzero");
    }
    let t = small_point(rng, n - 1, bound, bound);
    let t2 = rational::norm_sq(&t);
    let denom = &t2 + Rational::one();
    let mut v: Point = t.iter().map(|ti| int(2) * ti / &denom).collect();
    v.push((t2 - Rational::one()) / denom);
    DirectionProbe::new(v).expect("unit vector")
}

/// Alternating lattice and sphere directions.
pub fn random_directions<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<DirectionProbe> {
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                lattice_direction(rng, n, 5)
            } else {
                sphere_direction(rng, n, 7)
            }
        })
        .collect()
}

fn nonzero_weight<R: Rng>(rng: &mut R) -> i64 {
    let w = rng.random_range(1..=3);
    if rng.random_bool(0.5) {
        w
    } else {
        -w
    }
}

/// Compactly supported function on `ℝ` over a valid complex: sorted grid
/// points in `[-10, 10]` with step `1/4`, each point and each gap between
/// consecutive points carrying a weight in `[-3, 3]`. At most `max_cells`
/// cells.
pub fn random_function_1d<R: Rng>(
    rng: &mut R,
    max_cells: usize,
    ambient_coeff: i64,
) -> ConstructibleFunction {
    let points = rng.random_range(1..=max_cells.div_ceil(2).max(1));
    let mut grid: Vec<i64> = sample(rng, 81, points)
        .into_iter()
        .map(|i| i as i64 - 40)
        .collect();
    grid.sort_unstable();
    let coord = |g: i64| vec![ratio(g, 4)];
    let mut b = CellBuilder::new(1);
    for (k, &g) in grid.iter().enumerate() {
        b.add(vec![coord(g)], rng.random_range(-3..=3))
            .expect("1-d point");
        if let Some(&next) = grid.get(k + 1) {
            if 2 * k + 2 < max_cells {
                b.add(vec![coord(g), coord(next)], rng.random_range(-3..=3))
                    .expect("1-d edge");
            }
        }
    }
    b.finish(ambient_coeff).expect("valid cells")
}

/// Points and segments (possibly overlapping) with small rational
/// coordinates and nonzero weights.
pub fn random_low_dim_function<R: Rng>(
    rng: &mut R,
    n: usize,
    cells: usize,
) -> ConstructibleFunction {
    let mut b = CellBuilder::new(n);
    for _ in 0..cells {
        let p = small_point(rng, n, 12, 3);
        let w = nonzero_weight(rng);
        if rng.random_bool(0.5) {
            b.add(vec![p], w).expect("point");
        } else {
            let q = loop {
                let q = small_point(rng, n, 12, 3);
                if q != p {
                    break q;
                }
            };
            b.add(vec![p, q], w).expect("segment");
        }
    }
    b.finish(0).expect("valid cells")
}

/// Random open cells of every dimension up to `min(n, 2)`, plus closed
/// simplices, with integer coordinates in `[-6, 6]`.
pub fn random_function<R: Rng>(rng: &mut R, n: usize, cells: usize) -> ConstructibleFunction {
    let mut b = CellBuilder::new(n);
    let mut added = 0;
    while added < cells {
        let k = rng.random_range(0..=n.min(2));
        let pts: Vec<Point> = (0..=k)
            .map(|_| (0..n).map(|_| int(rng.random_range(-6..=6))).collect())
            .collect();
        let refs: Vec<&[Rational]> = pts.iter().map(|p| p.as_slice()).collect();
        if !crate::complex::affinely_independent(&refs) {
            continue;
        }
        let w = nonzero_weight(rng);
        if rng.random_bool(0.3) {
            let closed = ConstructibleFunction::closed_simplex(pts, w).expect("independent");
            for (cell, cw) in closed.cells() {
                b.add(cell, cw).expect("face");
            }
        } else {
            b.add(pts, w).expect("independent");
        }
        added += 1;
    }
    b.finish(0).expect("valid cells")
}

/// Symmetric matrix with entries `p / den`, `|p| ≤ num_bound`.
pub fn random_sym_matrix<R: Rng>(rng: &mut R, n: usize, num_bound: i64, den: i64) -> SymMatrix {
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let x = ratio(rng.random_range(-num_bound..=num_bound), den);
            rows[i][j] = x.clone();
            rows[j][i] = x;
        }
    }
    SymMatrix::new(rows).expect("symmetric by construction")
}

/// Rational point with `|x| ≤ r`, on the grid of step `r / 16`.
pub fn random_point_in_ball<R: Rng>(rng: &mut R, n: usize, r: &Rational) -> Point {
    loop {
        let p: Point = (0..n)
            .map(|_| r * ratio(rng.random_range(-16..=16), 16))
            .collect();
        if rational::norm_sq(&p) <= r * r {
            return p;
        }
    }
}

/// Query points for a function on `ℝ`: every vertex, every gap midpoint,
/// and random rationals, `count` in total.
pub fn queries_1d<R: Rng>(rng: &mut R, f: &ConstructibleFunction, count: usize) -> Vec<Rational> {
    let mut xs: Vec<Rational> = f
        .complex()
        .vertices()
        .iter()
        .map(|v| v[0].clone())
        .collect();
    xs.sort();
    xs.dedup();
    let mut out = xs.clone();
    out.extend(xs.windows(2).map(|w| (&w[0] + &w[1]) / int(2)));
    out.truncate(count);
    while out.len() < count {
        out.push(small_rational(rng, 48, 4));
    }
    out
}

/// Closed triangulated `k × k` grid of unit squares, each split along a
/// diagonal: `6k² + 4k + 1` cells of weight 1.
pub fn triangulated_grid(k: usize) -> ConstructibleFunction {
    let mut b = CellBuilder::new(2);
    let v = |i: usize, j: usize| ipoint(&[i as i64, j as i64]);
    for i in 0..=k {
        for j in 0..=k {
            b.add(vec![v(i, j)], 1).expect("vertex");
            if i < k {
                b.add(vec![v(i, j), v(i + 1, j)], 1).expect("edge");
            }
            if j < k {
                b.add(vec![v(i, j), v(i, j + 1)], 1).expect("edge");
            }
            if i < k && j < k {
                b.add(vec![v(i, j), v(i + 1, j + 1)], 1).expect("edge");
                b.add(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)], 1)
                    .expect("triangle");
                b.add(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)], 1)
                    .expect("triangle");
            }
        }
    }
    b.finish(0).expect("valid grid")
}
