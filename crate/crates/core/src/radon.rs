//! Radon transforms with the three probe kernels: fiber Euler
//! characteristics `χ(K_x ∩ K'_{x'})` in closed form and from a sphere-mesh
//! oracle, and the composition formula built on them.
//!
//! Each kernel is `K = 𝟙{f(x, ξ) ≤ t}` over a parameter sphere `P`. The
//! fiber over `(x, x')` is `{ξ ∈ P : Δ(ξ) ≥ 0}` with
//! `Δ(ξ) = f(x', ξ) - f(x, ξ)`:
//!
//! | kernel | `P` | `Δ` |
//! |---|---|---|
//! | linear | `S^{n-1}` | `ξ·(x' - x)` |
//! | quadric, `v = 0` | unit sphere of symmetric matrices | `(x'+x)ᵀA(x'-x)` |
//! | quadric, fixed `A` | sphere of radius `1 - ‖A‖` in `ℝⁿ` | `(x'+x)ᵀA(x'-x) + v·(x'-x)` |

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::function::{ConstructibleFunction, FunctionError};
use crate::mesh::{fiber_char_mesh, MeshError};
use crate::poly::{isolate_roots, Poly};
use crate::qect::{
    chi_sphere, opnorm_compare, opnorm_enclosure, separation_value, fixed_a_bound_check, OpNormOrder,
    QectError, SymMatrix,
};
use crate::rational::{self, int, Point, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RadonError {
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Qect(#[from] QectError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("operator norm bound ||A|| < 1/(1 + 2R²) fails")]
    BoundViolated,
    #[error("point lies outside the closed ball of radius {0}")]
    OutsideBall(String),
    #[error("cap position undecided after refinement")]
    Undecided,
    #[error("unsupported partition: {0}")]
    UnsupportedPartition(String),
    #[error("first partition set must carry χ(P) = {expected}, got {found}")]
    ChiMismatch { expected: i64, found: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelKind {
    /// Half-space kernel `x·ξ ≤ t` over `S^{n-1}`.
    EctLinear { n: usize },
    /// `xᵀAx ≤ t` over the unit sphere of symmetric `n × n` matrices.
    QuadricV0 { n: usize },
    /// `xᵀAx + v·x ≤ t` for fixed `A`, over `|v| = 1 - ‖A‖`, on `B_R(0)`.
    QuadricFixedA { a: SymMatrix, r: Rational },
}

/// Sets of the partition of `X × X` used by the composition formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSpec {
    /// `{x = x'}`.
    Diagonal,
    /// `{x = ±x'}`.
    PlusMinusDiagonal,
    /// Everything not covered by the preceding sets.
    Complement,
}

impl KernelKind {
    pub fn validate(&self) -> Result<(), RadonError> {
        match self {
            Self::EctLinear { n } | Self::QuadricV0 { n } if *n == 0 => Err(
                RadonError::InvalidKernel("dimension must be positive".into()),
            ),
            Self::QuadricFixedA { r, .. } if r.is_negative() => Err(RadonError::InvalidKernel(
                "radius must be nonnegative".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::EctLinear { n } | Self::QuadricV0 { n } => *n,
            Self::QuadricFixedA { a, .. } => a.dim(),
        }
    }

    /// Dimension of the vector space whose unit sphere is `P`.
    pub fn parameter_dim(&self) -> usize {
        match self {
            Self::QuadricV0 { n } => n * (n + 1) / 2,
            _ => self.n(),
        }
    }

    /// `χ(P)`.
    pub fn chi_p(&self) -> i64 {
        chi_sphere(self.parameter_dim())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::EctLinear { .. } => "ect_linear",
            Self::QuadricV0 { .. } => "quadric_v0",
            Self::QuadricFixedA { .. } => "quadric_fixed_a",
        }
    }

    /// The partition of `X × X` on which the fiber characteristic is
    /// constant, with those constants.
    pub fn partition(&self) -> Vec<(PartitionSpec, i64)> {
        let first = match self {
            Self::QuadricV0 { .. } => PartitionSpec::PlusMinusDiagonal,
            _ => PartitionSpec::Diagonal,
        };
        vec![(first, self.chi_p()), (PartitionSpec::Complement, 1)]
    }

    fn check_pair(&self, x: &[Rational], x_prime: &[Rational]) -> Result<(), RadonError> {
        self.validate()?;
        for p in [x, x_prime] {
            if p.len() != self.n() {
                return Err(RadonError::DimensionMismatch {
                    expected: self.n(),
                    found: p.len(),
                });
            }
        }
        if let Self::QuadricFixedA { a, r } = self {
            if !fixed_a_bound_check(a, r) {
                return Err(RadonError::BoundViolated);
            }
            for p in [x, x_prime] {
                if rational::norm_sq(p) > r * r {
                    return Err(RadonError::OutsideBall(rational::format_rational(r)));
                }
            }
        }
        Ok(())
    }

    /// Coefficients of the linear form `A ↦ (x'+x)ᵀA(x'-x)` in the
    /// coordinates `a_ij, i ≤ j`, ordered row by row.
    fn v0_form(x: &[Rational], x_prime: &[Rational]) -> Point {
        let u = rational::add(x_prime, x);
        let w = rational::sub(x_prime, x);
        let n = u.len();
        let mut c = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                c.push(if i == j {
                    &u[i] * &w[i]
                } else {
                    &u[i] * &w[j] + &u[j] * &w[i]
                });
            }
        }
        c
    }
}

/// `χ(K_x ∩ K'_{x'})` in closed form.
///
/// Linear and `v = 0` kernels: `χ(P)` on the (±)diagonal and 1 elsewhere.
/// Fixed `A`: with `w = x' - x`, `k = (x'+x)ᵀA(x'-x)` and `ρ = 1 - ‖A‖`,
/// the fiber is the cap `{v : v·w ≥ -k}` of the sphere of radius `ρ`. It is
/// the whole sphere when `k ≥ ρ|w|`, a contractible cap or a point when
/// `-ρ|w| ≤ k < ρ|w|`, and empty below. The comparison is decided exactly
/// by refining rational enclosures of `‖A‖` and `|w|`.
pub fn fiber_char_analytic(
    kind: &KernelKind,
    x: &[Rational],
    x_prime: &[Rational],
) -> Result<i64, RadonError> {
    kind.check_pair(x, x_prime)?;
    let chi_p = kind.chi_p();
    Ok(match kind {
        KernelKind::EctLinear { .. } => {
            if x == x_prime {
                chi_p
            } else {
                1
            }
        }
        KernelKind::QuadricV0 { .. } => {
            if x == x_prime || rational::neg(x) == x_prime {
                chi_p
            } else {
                1
            }
        }
        KernelKind::QuadricFixedA { a, .. } => {
            if x == x_prime {
                return Ok(chi_p);
            }
            let k = separation_value(a, x, x_prime);
            let w2 = rational::norm_sq(&rational::sub(x_prime, x));
            match compare_with_cap(&k.abs(), a, &w2)? {
                Ordering::Less => 1,
                Ordering::Equal if k.is_positive() => chi_p,
                Ordering::Equal => 1,
                Ordering::Greater if k.is_positive() => chi_p,
                Ordering::Greater => 0,
            }
        }
    })
}

/// Compares `|k|` with `(1 - ‖A‖)·√w2`.
fn compare_with_cap(
    k_abs: &Rational,
    a: &SymMatrix,
    w2: &Rational,
) -> Result<Ordering, RadonError> {
    // A tie with rational |w| pins ‖A‖ to a rational value; test it exactly.
    let (root, root_hi) = sqrt_enclosure(w2, &Rational::one());
    if root == root_hi && root.is_positive() {
        let norm = Rational::one() - k_abs / &root;
        if opnorm_compare(a, &norm) == OpNormOrder::Equal {
            return Ok(Ordering::Equal);
        }
    }
    for bits in (8..=512).step_by(8) {
        let width = Rational::new(BigInt::one(), BigInt::one() << bits);
        let (norm_lo, norm_hi) = opnorm_enclosure(a, &width);
        let (root_lo, root_hi) = sqrt_enclosure(w2, &width);
        let rho_lo = (Rational::one() - norm_hi).max(Rational::zero());
        let rho_hi = Rational::one() - norm_lo;
        let lo = rho_lo * root_lo;
        let hi = rho_hi * root_hi;
        if k_abs < &lo {
            return Ok(Ordering::Less);
        }
        if k_abs > &hi {
            return Ok(Ordering::Greater);
        }
        if lo == hi {
            return Ok(Ordering::Equal);
        }
    }
    Err(RadonError::Undecided)
}

/// Enclosure `lo ≤ √m ≤ hi` of width at most `width`, exact for rational
/// square roots.
pub fn sqrt_enclosure(m: &Rational, width: &Rational) -> (Rational, Rational) {
    assert!(!m.is_negative());
    let (n, d) = (m.numer(), m.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        let r = Rational::new(rn, rd);
        return (r.clone(), r);
    }
    let p = Poly::new(vec![-m.clone(), Rational::zero(), Rational::one()]);
    let top = m.clone().max(Rational::one());
    let root = isolate_roots(&p, &Rational::zero(), &top, width)
        .pop()
        .expect("a positive non-square has one positive root");
    (root.lo, root.hi)
}

/// Sign of `Δ` at a rational point of the parameter space, constant along
/// rays from the origin. For the fixed-`A` kernel the irrational radius
/// `1 - ‖A‖` is replaced by a rational value within `2⁻⁴⁰`.
pub fn delta_sign(
    kind: &KernelKind,
    x: &[Rational],
    x_prime: &[Rational],
) -> impl Fn(&[Rational]) -> Ordering + Sync {
    enum Form {
        Linear(Point),
        Cap {
            k: Rational,
            rho: Rational,
            w: Point,
        },
    }
    let form = match kind {
        KernelKind::EctLinear { .. } => Form::Linear(rational::sub(x_prime, x)),
        KernelKind::QuadricV0 { .. } => Form::Linear(KernelKind::v0_form(x, x_prime)),
        KernelKind::QuadricFixedA { a, .. } => {
            let width = Rational::new(BigInt::one(), BigInt::one() << 40);
            let (lo, hi) = opnorm_enclosure(a, &width);
            Form::Cap {
                k: separation_value(a, x, x_prime),
                rho: Rational::one() - (lo + hi) / int(2),
                w: rational::sub(x_prime, x),
            }
        }
    };
    move |xi: &[Rational]| match &form {
        Form::Linear(c) => rational::dot(c, xi).cmp(&Rational::zero()),
        Form::Cap { k, rho, w } => {
            // sign(k·|ξ| + ρ·ξ·w) without the square root.
            let b = rho * rational::dot(xi, w);
            let alpha = k.cmp(&Rational::zero());
            let beta = b.cmp(&Rational::zero());
            match (alpha, beta) {
                (Ordering::Equal, s) | (s, Ordering::Equal) => s,
                (s, t) if s == t => s,
                (Ordering::Greater, _) => (k * k * rational::norm_sq(xi)).cmp(&(&b * &b)),
                _ => (&b * &b).cmp(&(k * k * rational::norm_sq(xi))),
            }
        }
    }
}

/// Analytic value next to the mesh oracle's estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCharReport {
    pub kind: KernelKind,
    pub x: Point,
    pub x_prime: Point,
    pub analytic_chi: i64,
    /// `None` when the parameter sphere has no mesh (dimension above 3).
    pub oracle_chi: Option<i64>,
    pub oracle_stable: bool,
}

impl FiberCharReport {
    /// False only when a stable oracle disagrees with the closed form.
    pub fn agrees(&self) -> bool {
        !self.oracle_stable || self.oracle_chi == Some(self.analytic_chi)
    }
}

pub fn fiber_char_report(
    kind: &KernelKind,
    x: &[Rational],
    x_prime: &[Rational],
    max_level: usize,
) -> Result<FiberCharReport, RadonError> {
    let analytic_chi = fiber_char_analytic(kind, x, x_prime)?;
    let (oracle_chi, oracle_stable) = if kind.parameter_dim() <= 3 {
        let m = fiber_char_mesh(
            delta_sign(kind, x, x_prime),
            kind.parameter_dim(),
            max_level,
        )?;
        (Some(m.chi), m.stable)
    } else {
        (None, false)
    };
    Ok(FiberCharReport {
        kind: kind.clone(),
        x: x.to_vec(),
        x_prime: x_prime.to_vec(),
        analytic_chi,
        oracle_chi,
        oracle_stable,
    })
}

/// Reports for many pairs, in input order.
pub fn fiber_char_reports(
    kind: &KernelKind,
    pairs: &[(Point, Point)],
    max_level: usize,
) -> Result<Vec<FiberCharReport>, RadonError> {
    pairs
        .par_iter()
        .map(|(x, xp)| fiber_char_report(kind, x, xp, max_level))
        .collect()
}

/// Evaluator of `x' ↦ Σᵢ cᵢ ∫ h(x) 𝟙_{Sᵢ}(x, x') dχ(x)`.
#[derive(Debug, Clone)]
pub struct PartitionEvaluator {
    h: ConstructibleFunction,
    partition: Vec<(PartitionSpec, i64)>,
}

/// Builds the composed transform `R_{K'} ∘ R_K h` from a partition whose
/// first set contains the diagonal and carries `χ(P)`.
pub fn compose_partition(
    h: &ConstructibleFunction,
    partition: &[(PartitionSpec, i64)],
    chi_p: i64,
) -> Result<PartitionEvaluator, RadonError> {
    let Some(&(first, c)) = partition.first() else {
        return Err(RadonError::UnsupportedPartition("empty partition".into()));
    };
    if first == PartitionSpec::Complement {
        return Err(RadonError::UnsupportedPartition(
            "first set must contain the diagonal".into(),
        ));
    }
    if c != chi_p {
        return Err(RadonError::ChiMismatch {
            expected: chi_p,
            found: c,
        });
    }
    if partition[1..]
        .iter()
        .any(|(s, _)| *s != PartitionSpec::Complement)
        || partition.len() > 2
    {
        return Err(RadonError::UnsupportedPartition(
            "only one diagonal set followed by its complement is supported".into(),
        ));
    }
    Ok(PartitionEvaluator {
        h: h.clone(),
        partition: partition.to_vec(),
    })
}

impl PartitionEvaluator {
    pub fn evaluate(&self, x_prime: &[Rational]) -> Result<i64, RadonError> {
        let mut total = 0;
        let mut covered = 0;
        for (spec, c) in &self.partition {
            let term = match spec {
                PartitionSpec::Diagonal => self.h.point_evaluate(x_prime)?,
                PartitionSpec::PlusMinusDiagonal => {
                    let mut s = self.h.point_evaluate(x_prime)?;
                    if !rational::is_zero_vec(x_prime) {
                        s += self.h.point_evaluate(&rational::neg(x_prime))?;
                    }
                    s
                }
                // Points have χ = 1, so removing them subtracts their values.
                PartitionSpec::Complement => self.h.euler_integral() - covered,
            };
            covered += term;
            total += c * term;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ect::{dual_transform_1d, ect_sweep, s0_directions};
    use crate::qect::compose_v0;
    use crate::rational::{ipoint, ratio};

    fn fixed(a: SymMatrix, r: i64) -> KernelKind {
        KernelKind::QuadricFixedA { a, r: int(r) }
    }

    #[test]
    fn analytic_examples() {
        let lin = KernelKind::EctLinear { n: 2 };
        let x = ipoint(&[1, 2]);
        assert_eq!(fiber_char_analytic(&lin, &x, &x).unwrap(), 0);
        assert_eq!(fiber_char_analytic(&lin, &x, &ipoint(&[0, 0])).unwrap(), 1);
        let lin3 = KernelKind::EctLinear { n: 3 };
        assert_eq!(
            fiber_char_analytic(&lin3, &ipoint(&[0, 0, 1]), &ipoint(&[0, 0, 1])).unwrap(),
            2
        );

        let v0 = KernelKind::QuadricV0 { n: 2 };
        assert_eq!(fiber_char_analytic(&v0, &x, &rational::neg(&x)).unwrap(), 2);
        assert_eq!(fiber_char_analytic(&v0, &x, &x).unwrap(), 2);
        assert_eq!(fiber_char_analytic(&v0, &x, &ipoint(&[2, 1])).unwrap(), 1);
        assert_eq!(KernelKind::QuadricV0 { n: 3 }.chi_p(), 0);

        let fa = fixed(SymMatrix::zero(2), 1);
        assert_eq!(
            fiber_char_analytic(&fa, &ipoint(&[0, 1]), &ipoint(&[0, 1])).unwrap(),
            0
        );
        assert_eq!(
            fiber_char_analytic(&fa, &ipoint(&[0, 1]), &ipoint(&[1, 0])).unwrap(),
            1
        );
    }

    #[test]
    fn analytic_errors() {
        let fa = fixed(SymMatrix::identity(2), 1);
        assert_eq!(
            fiber_char_analytic(&fa, &ipoint(&[0, 0]), &ipoint(&[0, 0])),
            Err(RadonError::BoundViolated)
        );
        let fa = fixed(SymMatrix::zero(2), 1);
        assert!(matches!(
            fiber_char_analytic(&fa, &ipoint(&[2, 0]), &ipoint(&[0, 0])),
            Err(RadonError::OutsideBall(_))
        ));
        assert!(matches!(
            fiber_char_analytic(
                &KernelKind::EctLinear { n: 2 },
                &ipoint(&[0]),
                &ipoint(&[0, 0])
            ),
            Err(RadonError::DimensionMismatch { .. })
        ));
        let bad = KernelKind::QuadricFixedA {
            a: SymMatrix::zero(1),
            r: int(-1),
        };
        assert!(matches!(bad.validate(), Err(RadonError::InvalidKernel(_))));
    }

    #[test]
    fn small_radius_counterexample() {
        // R = 1/2 and ‖A‖ = 3/5 < 1/(1 + 2R²) = 2/3, but the cap condition
        // ‖A‖ < 1/(1 + 2R) = 1/2 fails. For x = (1/2 - ε, 0), x' = (1/2, 0)
        // the plane v·w = -k misses the sphere of radius 2/5 and the fiber
        // is the whole circle.
        let a = SymMatrix::diagonal(vec![ratio(3, 5), int(0)]);
        let kind = KernelKind::QuadricFixedA { a, r: ratio(1, 2) };
        let x = vec![ratio(49, 100), int(0)];
        let xp = vec![ratio(1, 2), int(0)];
        assert_eq!(fiber_char_analytic(&kind, &x, &xp).unwrap(), 0);
        // Swapping the pair empties the fiber.
        assert_eq!(fiber_char_analytic(&kind, &xp, &x).unwrap(), 0);
        let report = fiber_char_report(&kind, &xp, &x, 3).unwrap();
        assert_eq!(report.oracle_chi, Some(0));
        // In ℝ³ the whole-sphere case gives χ(S²) = 2.
        let a = SymMatrix::diagonal(vec![ratio(3, 5), int(0), int(0)]);
        let kind = KernelKind::QuadricFixedA { a, r: ratio(1, 2) };
        let x = vec![ratio(49, 100), int(0), int(0)];
        let xp = vec![ratio(1, 2), int(0), int(0)];
        assert_eq!(fiber_char_analytic(&kind, &x, &xp).unwrap(), 2);
        assert_eq!(
            fiber_char_report(&kind, &x, &xp, 3).unwrap().oracle_chi,
            Some(2)
        );
    }

    #[test]
    fn cap_comparison_handles_exact_ties() {
        // ‖A‖ = 1/2, |w| = 1 and |k| = 1/2: tangent plane.
        let a = SymMatrix::diagonal(vec![ratio(1, 2)]);
        assert_eq!(
            compare_with_cap(&ratio(1, 2), &a, &int(1)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            compare_with_cap(&ratio(1, 3), &a, &int(1)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            compare_with_cap(&ratio(2, 3), &a, &int(1)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_with_cap(&ratio(1, 2), &a, &int(2)).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn square_roots() {
        assert_eq!(
            sqrt_enclosure(&ratio(9, 4), &ratio(1, 10)),
            (ratio(3, 2), ratio(3, 2))
        );
        let (lo, hi) = sqrt_enclosure(&int(2), &ratio(1, 1000));
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2) && hi - lo <= ratio(1, 1000));
        assert_eq!(sqrt_enclosure(&int(0), &ratio(1, 10)), (int(0), int(0)));
    }

    #[test]
    fn oracle_matches_analytic() {
        let pairs = vec![
            (ipoint(&[1, 0]), ipoint(&[1, 0])),
            (ipoint(&[1, 2]), ipoint(&[-1, -2])),
            (ipoint(&[1, 2]), ipoint(&[3, -1])),
            (ipoint(&[0, 0]), ipoint(&[1, 1])),
        ];
        let a = SymMatrix::diagonal(vec![ratio(1, 20), ratio(-1, 30)]);
        let ball = |p: &Point| rational::scale(p, &ratio(1, 4));
        let small: Vec<(Point, Point)> = pairs.iter().map(|(x, y)| (ball(x), ball(y))).collect();
        for (kind, pairs) in [
            (KernelKind::EctLinear { n: 2 }, &pairs),
            (KernelKind::QuadricV0 { n: 2 }, &pairs),
            (fixed(a, 1), &small),
        ] {
            for r in fiber_char_reports(&kind, pairs, 4).unwrap() {
                assert!(r.oracle_stable, "{r:?}");
                assert!(r.agrees(), "{r:?}");
            }
        }
        let r = fiber_char_report(
            &KernelKind::QuadricV0 { n: 3 },
            &ipoint(&[1, 0, 0]),
            &ipoint(&[0, 1, 0]),
            2,
        )
        .unwrap();
        assert_eq!(r.oracle_chi, None);
        assert!(r.agrees());
    }

    #[test]
    fn v0_sign_is_odd() {
        let kind = KernelKind::QuadricV0 { n: 2 };
        let (x, xp) = (ipoint(&[1, 3]), ipoint(&[2, -1]));
        let plus = fiber_char_mesh(delta_sign(&kind, &x, &xp), 3, 3).unwrap();
        let minus = fiber_char_mesh(delta_sign(&kind, &xp, &x), 3, 3).unwrap();
        assert_eq!(plus.chi, minus.chi);
    }

    #[test]
    fn composition_examples() {
        let h = ConstructibleFunction::closed_simplex(vec![ipoint(&[0]), ipoint(&[2])], 1).unwrap();
        let kind = KernelKind::EctLinear { n: 1 };
        let eval = compose_partition(&h, &kind.partition(), kind.chi_p()).unwrap();
        let table = ect_sweep(&h, &s0_directions()).unwrap();
        for k in -2..=6 {
            let x = ratio(k, 2);
            assert_eq!(
                eval.evaluate(std::slice::from_ref(&x)).unwrap(),
                dual_transform_1d(&table, &x).unwrap()
            );
        }

        let p = ipoint(&[1, 1]);
        let h2 = ConstructibleFunction::point_mass(p.clone(), 1)
            .add(&ConstructibleFunction::point_mass(ipoint(&[0, 3]), 2))
            .unwrap();
        let kind = KernelKind::QuadricV0 { n: 2 };
        let eval = compose_partition(&h2, &kind.partition(), kind.chi_p()).unwrap();
        for q in [
            p.clone(),
            rational::neg(&p),
            ipoint(&[0, 0]),
            ipoint(&[0, -3]),
        ] {
            assert_eq!(eval.evaluate(&q).unwrap(), compose_v0(&h2, &q).unwrap());
        }

        let zero = compose_partition(
            &ConstructibleFunction::zero(2),
            &kind.partition(),
            kind.chi_p(),
        )
        .unwrap();
        assert_eq!(zero.evaluate(&p).unwrap(), 0);
    }

    #[test]
    fn composition_rejects_bad_partitions() {
        let h = ConstructibleFunction::zero(1);
        assert!(matches!(
            compose_partition(&h, &[], 0),
            Err(RadonError::UnsupportedPartition(_))
        ));
        assert_eq!(
            compose_partition(&h, &[(PartitionSpec::Diagonal, 1)], 2).unwrap_err(),
            RadonError::ChiMismatch {
                expected: 2,
                found: 1
            }
        );
        assert!(matches!(
            compose_partition(&h, &[(PartitionSpec::Complement, 1)], 1),
            Err(RadonError::UnsupportedPartition(_))
        ));
        assert!(matches!(
            compose_partition(
                &h,
                &[(PartitionSpec::Diagonal, 2), (PartitionSpec::Diagonal, 1)],
                2
            ),
            Err(RadonError::UnsupportedPartition(_))
        ));
    }
}
