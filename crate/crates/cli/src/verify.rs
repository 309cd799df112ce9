//! Seeded theorem checks behind `eulerscan verify`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use eulerscan::generate::{
    queries_1d, random_directions, random_function, random_function_1d, random_point_in_ball,
    random_sym_matrix, rng, small_point,
};
use eulerscan::qect::fixed_a_cap_check;
use eulerscan::radon::fiber_char_reports;
use eulerscan::rational::{int, neg};
use eulerscan::{
    classify_pair, compose_fixed_a, compose_partition, compose_v0, corollary_check, ect_sweep,
    schapira_identity_check_1d, fixed_a_bound_check, ConstructibleFunction, KernelKind, Rational,
    SymMatrix,
};

use crate::output::{csv, emit, json, no_plot};
use crate::{Format, OutputArgs};

#[derive(Debug, Serialize)]
struct TheoremResult {
    theorem: &'static str,
    checks: usize,
    failures: usize,
    passed: bool,
}

impl TheoremResult {
    fn new(theorem: &'static str, checks: usize, failures: usize) -> Self {
        Self {
            theorem,
            checks,
            failures,
            passed: failures == 0 && checks > 0,
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    seed: u64,
    passed: bool,
    theorems: Vec<TheoremResult>,
}

type Check = anyhow::Result<TheoremResult>;

fn schapira_1d(r: &mut ChaCha8Rng) -> Check {
    let (mut checks, mut failures) = (0, 0);
    for i in 0..20 {
        let ambient = if i % 2 == 0 {
            0
        } else {
            r.random_range(-2..=2)
        };
        let h = random_function_1d(r, 16, ambient);
        let queries = queries_1d(r, &h, 40);
        let report = schapira_identity_check_1d(&h, &queries)?;
        checks += report.rows.len();
        failures += report
            .rows
            .iter()
            .filter(|row| row.composed != row.expected)
            .count();
    }
    Ok(TheoremResult::new("schapira-1d", checks, failures))
}

fn classification(r: &mut ChaCha8Rng) -> Check {
    let (mut checks, mut failures) = (0, 0);
    for i in 0..40 {
        let n = 1 + i % 3;
        let cells = r.random_range(1..=8);
        let f = random_function(r, n, cells);
        let dirs = random_directions(r, n, 50);
        let (g, expected) = if i % 2 == 0 {
            let c = r.random_range(-3..=3);
            (f.plus_constant(c), Some(c))
        } else {
            let (cell, w) = f
                .weighted_simplices()
                .next()
                .expect("at least one weighted cell");
            (f.with_weight(cell, w + 1), None)
        };
        let same_curves = ect_sweep(&f, &dirs)?.curves() == ect_sweep(&g, &dirs)?.curves();
        checks += 1;
        if classify_pair(&f, &g)? != expected || same_curves != expected.is_some() {
            failures += 1;
        }
    }
    Ok(TheoremResult::new("classification", checks, failures))
}

fn corollary(r: &mut ChaCha8Rng) -> Check {
    let (mut checks, mut failures) = (0, 0);
    for n in 1..=3 {
        let whole = ConstructibleFunction::constant(n, 1);
        let empty = ConstructibleFunction::zero(n);
        for (s1, s2, shift) in [
            (&whole, &empty, Some(-1)),
            (&empty, &whole, Some(1)),
            (&whole, &whole, Some(0)),
        ] {
            let v = corollary_check(s1, s2)?;
            checks += 1;
            failures += usize::from(v.shift != shift || !v.consistent);
        }
        for _ in 0..10 {
            let pts: Vec<_> = (0..=n.min(2)).map(|_| small_point(r, n, 6, 1)).collect();
            let Ok(s) = ConstructibleFunction::closed_simplex(pts, 1) else {
                continue;
            };
            let v = corollary_check(&s, &empty)?;
            checks += 1;
            failures += usize::from(v.equal_ect() || !v.consistent);
        }
    }
    Ok(TheoremResult::new("corollary", checks, failures))
}

fn v0_composition(r: &mut ChaCha8Rng) -> Check {
    let (mut checks, mut failures) = (0, 0);
    for i in 0..40 {
        let n = 1 + i % 3;
        let cells = r.random_range(0..=6);
        let h = random_function(r, n, cells).plus_constant(r.random_range(-1..=1));
        let kind = KernelKind::QuadricV0 { n };
        let eval = compose_partition(&h, &kind.partition(), kind.chi_p())?;
        let vertices = h.complex().vertices();
        let xp = match (i % 3, vertices.is_empty()) {
            (0, false) => vertices[r.random_range(0..vertices.len())].clone(),
            (1, false) => neg(&vertices[r.random_range(0..vertices.len())]),
            _ => small_point(r, n, 6, 1),
        };
        checks += 1;
        failures += usize::from(compose_v0(&h, &xp)? != eval.evaluate(&xp)?);
    }
    Ok(TheoremResult::new("v0-composition", checks, failures))
}

/// Entries of size at most `1/(152n)` keep `||A||` below `1/152`, inside
/// both bounds for every radius up to 3; the loop only guards that claim.
fn small_matrix(r: &mut ChaCha8Rng, n: usize, radius: &Rational) -> SymMatrix {
    loop {
        let a = random_sym_matrix(r, n, 1, 8 * n as i64 * 19);
        if fixed_a_bound_check(&a, radius) && fixed_a_cap_check(&a, radius) {
            return a;
        }
    }
}

fn fixed_a_composition(r: &mut ChaCha8Rng) -> Check {
    let (mut checks, mut failures) = (0, 0);
    for i in 0..30 {
        let n = 1 + i % 3;
        let radius = int(1 + (i % 3) as i64);
        let a = small_matrix(r, n, &radius);
        // Points of the ball as 0-cells, so the support stays inside it.
        let mut h = ConstructibleFunction::zero(n);
        for _ in 0..r.random_range(0..=4) {
            let p = random_point_in_ball(r, n, &radius);
            h = h.add(&ConstructibleFunction::point_mass(
                p,
                r.random_range(-2..=2),
            ))?;
        }
        let kind = KernelKind::QuadricFixedA {
            a: a.clone(),
            r: radius.clone(),
        };
        let eval = compose_partition(&h, &kind.partition(), kind.chi_p())?;
        for _ in 0..5 {
            let xp = match h.complex().vertices() {
                vs if !vs.is_empty() && r.random_bool(0.5) => {
                    vs[r.random_range(0..vs.len())].clone()
                }
                _ => random_point_in_ball(r, n, &radius),
            };
            checks += 1;
            failures += usize::from(compose_fixed_a(&h, &a, &radius, &xp)? != eval.evaluate(&xp)?);
        }
    }
    Ok(TheoremResult::new("fixed-a-composition", checks, failures))
}

fn fiber_chi(r: &mut ChaCha8Rng, refine_max: usize) -> Check {
    let (mut checks, mut failures) = (0, 0);
    let kinds = [
        KernelKind::EctLinear { n: 2 },
        KernelKind::EctLinear { n: 3 },
        KernelKind::QuadricV0 { n: 2 },
        KernelKind::QuadricFixedA {
            a: small_matrix(r, 2, &int(1)),
            r: int(1),
        },
    ];
    for kind in &kinds {
        let radius = match kind {
            KernelKind::QuadricFixedA { r, .. } => r.clone(),
            _ => int(2),
        };
        let pairs: Vec<_> = (0..12)
            .map(|i| {
                let x = random_point_in_ball(r, kind.n(), &radius);
                let xp = if i % 4 == 0 {
                    x.clone()
                } else {
                    random_point_in_ball(r, kind.n(), &radius)
                };
                (x, xp)
            })
            .collect();
        for report in fiber_char_reports(kind, &pairs, refine_max)? {
            checks += 1;
            failures += usize::from(!report.oracle_stable || !report.agrees());
        }
    }
    Ok(TheoremResult::new("fiber-chi-agreement", checks, failures))
}

pub fn run(seed: u64, refine_max: usize, out: &OutputArgs) -> anyhow::Result<bool> {
    no_plot(out, "verify")?;
    // Each theorem gets its own stream so results do not depend on order.
    let results = vec![
        schapira_1d(&mut rng(seed))?,
        classification(&mut rng(seed.wrapping_add(1)))?,
        corollary(&mut rng(seed.wrapping_add(2)))?,
        v0_composition(&mut rng(seed.wrapping_add(3)))?,
        fixed_a_composition(&mut rng(seed.wrapping_add(4)))?,
        fiber_chi(&mut rng(seed.wrapping_add(5)), refine_max)?,
    ];
    let all = results.iter().all(|r| r.passed);
    let text = match out.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.theorem.to_string(),
                        r.checks.to_string(),
                        r.failures.to_string(),
                        if r.passed { "pass" } else { "fail" }.to_string(),
                    ]
                })
                .collect();
            csv(&["theorem", "checks", "failures", "status"], &rows)?
        }
        _ => json(&VerifyReport {
            seed,
            passed: all,
            theorems: results,
        }),
    };
    emit(out, &text)?;
    Ok(all)
}
