use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;

use eulerscan::ect::s0_directions;
use eulerscan::format::{self, StepFile, Q};
use eulerscan::generate::{
    queries_1d, random_directions, random_sym_matrix, rng, small_point, small_rational,
};
use eulerscan::qect::QectError;
use eulerscan::radon::fiber_char_reports;
use eulerscan::rational::format_rational;
use eulerscan::{
    ect_sweep, qect_eval_exact, qect_eval_pl, reconstruct_1d, ConstructibleFunction, QuadricProbe,
    Rational,
};

use crate::output::{approx, csv, emit, json, no_plot, point};
use crate::{Format, OutputArgs};

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_function(path: &Path) -> anyhow::Result<ConstructibleFunction> {
    format::parse_function(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn q_vec(p: &[Rational]) -> Vec<Q> {
    p.iter().cloned().map(Q).collect()
}

pub fn chi(input: &Path, out: &OutputArgs) -> anyhow::Result<bool> {
    no_plot(out, "chi")?;
    let f = load_function(input)?;
    let value = f.euler_integral();
    let text = match out.format {
        Format::Csv => csv(&["euler_integral"], &[vec![value.to_string()]])?,
        _ => json(&ChiRecord {
            euler_integral: value,
        }),
    };
    emit(out, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct ChiRecord {
    euler_integral: i64,
}

#[derive(Serialize)]
struct EctRecord {
    direction: Vec<Q>,
    curve: StepFile,
}

#[derive(Serialize)]
struct EctRecords {
    directions: Vec<EctRecord>,
}

pub fn ect(
    input: &Path,
    directions: Option<&Path>,
    count: usize,
    seed: u64,
    out: &OutputArgs,
) -> anyhow::Result<bool> {
    let f = load_function(input)?;
    let dirs = match directions {
        Some(p) => format::parse_directions(&read(p)?)
            .with_context(|| format!("parsing {}", p.display()))?,
        None => random_directions(&mut rng(seed), f.ambient_dim(), count),
    };
    let table = ect_sweep(&f, &dirs)?;
    let text = match out.format {
        Format::Records => json(&EctRecords {
            directions: table
                .iter()
                .map(|(d, c)| EctRecord {
                    direction: q_vec(d.components()),
                    curve: StepFile::from_step(c),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, (d, c)) in table.iter().enumerate() {
                rows.push(vec![
                    i.to_string(),
                    point(d.components()),
                    "-inf".into(),
                    c.value_at_minus_inf().to_string(),
                ]);
                for (t, v) in c.breakpoints().iter().zip(&c.values()[1..]) {
                    rows.push(vec![
                        i.to_string(),
                        point(d.components()),
                        format_rational(t),
                        v.to_string(),
                    ]);
                }
            }
            csv(&["direction_index", "direction", "from_t", "value"], &rows)?
        }
        Format::PlotCsv => {
            // Approximate coordinates: each breakpoint with the value
            // before and after it, for step plots.
            let mut rows = Vec::new();
            for (i, (d, c)) in table.iter().enumerate() {
                let unit: Vec<String> =
                    d.to_unit_f64().iter().map(|x| format!("{x:.12}")).collect();
                let values = c.values();
                for (k, t) in c.breakpoints().iter().enumerate() {
                    rows.push(vec![
                        i.to_string(),
                        unit.join(" "),
                        approx(t),
                        values[k].to_string(),
                    ]);
                    rows.push(vec![
                        i.to_string(),
                        unit.join(" "),
                        approx(t),
                        values[k + 1].to_string(),
                    ]);
                }
            }
            csv(
                &[
                    "direction_index",
                    "unit_direction_approx",
                    "t_approx",
                    "value",
                ],
                &rows,
            )?
        }
    };
    emit(out, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct QectRecord {
    a: Vec<Vec<Q>>,
    v: Vec<Q>,
    t: Q,
    value: i64,
    exactness: &'static str,
    level: Option<usize>,
    stable: bool,
}

#[derive(Serialize)]
struct QectRecords {
    probes: Vec<QectRecord>,
}

fn random_probes(n: usize, count: usize, seed: u64) -> Vec<QuadricProbe> {
    let mut r = rng(seed);
    let mut probes = Vec::with_capacity(count);
    while probes.len() < count {
        let a = random_sym_matrix(&mut r, n, 3, 2);
        let v = small_point(&mut r, n, 3, 2);
        if let Ok(p) = QuadricProbe::new(a, v, small_rational(&mut r, 30, 2)) {
            probes.push(p);
        }
    }
    probes
}

pub fn qect(
    input: &Path,
    probes: Option<&Path>,
    count: usize,
    seed: u64,
    refine_max: usize,
    out: &OutputArgs,
) -> anyhow::Result<bool> {
    let f = load_function(input)?;
    let probes = match probes {
        Some(p) => {
            format::parse_probes(&read(p)?).with_context(|| format!("parsing {}", p.display()))?
        }
        None => random_probes(f.ambient_dim(), count, seed),
    };
    let mut records = Vec::with_capacity(probes.len());
    for p in &probes {
        let (value, exactness, level, stable) = match qect_eval_exact(&f, p) {
            Ok(v) => (v, "exact", None, true),
            Err(QectError::CellTooLarge(_)) => {
                let est = qect_eval_pl(&f, p, refine_max)?;
                (est.estimate, "pl-approximate", Some(est.level), est.stable)
            }
            Err(e) => return Err(e.into()),
        };
        records.push(QectRecord {
            a: p.a().rows().iter().map(|r| q_vec(r)).collect(),
            v: q_vec(p.v()),
            t: Q(p.t().clone()),
            value,
            exactness,
            level,
            stable,
        });
    }
    let text = match out.format {
        Format::Records => json(&QectRecords { probes: records }),
        Format::Csv | Format::PlotCsv => {
            let plot = out.format == Format::PlotCsv;
            let rows: Vec<Vec<String>> = records
                .iter()
                .zip(&probes)
                .enumerate()
                .map(|(i, (rec, p))| {
                    let t = if plot {
                        approx(p.t())
                    } else {
                        format_rational(p.t())
                    };
                    vec![
                        i.to_string(),
                        t,
                        rec.value.to_string(),
                        rec.exactness.to_string(),
                        rec.level.map_or(String::new(), |l| l.to_string()),
                        rec.stable.to_string(),
                    ]
                })
                .collect();
            let t_col = if plot { "t_approx" } else { "t" };
            csv(
                &[
                    "probe_index",
                    t_col,
                    "value",
                    "exactness",
                    "level",
                    "stable",
                ],
                &rows,
            )?
        }
    };
    emit(out, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct QueryRecord {
    x: Q,
    reconstructed: i64,
    expected: i64,
}

#[derive(Serialize)]
struct InvertRecords {
    integral: i64,
    mismatches: usize,
    queries: Vec<QueryRecord>,
}

pub fn invert1d(input: &Path, count: usize, seed: u64, out: &OutputArgs) -> anyhow::Result<bool> {
    no_plot(out, "invert1d")?;
    let h = load_function(input)?;
    if h.ambient_dim() != 1 {
        bail!(
            "invert1d needs a function on the line, got ambient dimension {}",
            h.ambient_dim()
        );
    }
    if !h.is_compactly_supported() {
        bail!("invert1d needs a compactly supported function (ambient_coeff 0)");
    }
    let table = ect_sweep(&h, &s0_directions())?;
    let inverse = reconstruct_1d(&table)?;
    let mut r = rng(seed);
    let mut queries = queries_1d(&mut r, &h, 2 * h.complex().vertices().len());
    queries.extend((0..count).map(|_| small_rational(&mut r, 48, 4)));
    let mut records = Vec::with_capacity(queries.len());
    for x in queries {
        let expected = h.point_evaluate(std::slice::from_ref(&x))?;
        records.push(QueryRecord {
            reconstructed: inverse.evaluate(&x),
            expected,
            x: Q(x),
        });
    }
    let mismatches = records
        .iter()
        .filter(|q| q.reconstructed != q.expected)
        .count();
    let text = match out.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|q| {
                    vec![
                        format_rational(&q.x.0),
                        q.reconstructed.to_string(),
                        q.expected.to_string(),
                    ]
                })
                .collect();
            csv(&["x", "reconstructed", "expected"], &rows)?
        }
        _ => json(&InvertRecords {
            integral: inverse.integral(),
            mismatches,
            queries: records,
        }),
    };
    emit(out, &text)?;
    Ok(mismatches == 0)
}

#[derive(Serialize)]
struct FiberRecord {
    x: Vec<Q>,
    x_prime: Vec<Q>,
    analytic_chi: i64,
    oracle_chi: Option<i64>,
    oracle_stable: bool,
    agrees: bool,
}

#[derive(Serialize)]
struct FiberRecords {
    kernel: &'static str,
    reports: Vec<FiberRecord>,
}

pub fn fiber_chi(input: &Path, refine_max: usize, out: &OutputArgs) -> anyhow::Result<bool> {
    no_plot(out, "fiber-chi")?;
    let (kind, pairs) = format::parse_fiber_pairs(&read(input)?)
        .with_context(|| format!("parsing {}", input.display()))?;
    let reports = fiber_char_reports(&kind, &pairs, refine_max)?;
    let records: Vec<FiberRecord> = reports
        .iter()
        .map(|r| FiberRecord {
            x: q_vec(&r.x),
            x_prime: q_vec(&r.x_prime),
            analytic_chi: r.analytic_chi,
            oracle_chi: r.oracle_chi,
            oracle_stable: r.oracle_stable,
            agrees: r.agrees(),
        })
        .collect();
    let all_agree = records.iter().all(|r| r.agrees);
    let text = match out.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        point(&r.x.iter().map(|q| q.0.clone()).collect::<Vec<_>>()),
                        point(&r.x_prime.iter().map(|q| q.0.clone()).collect::<Vec<_>>()),
                        r.analytic_chi.to_string(),
                        r.oracle_chi.map_or(String::new(), |c| c.to_string()),
                        r.oracle_stable.to_string(),
                        r.agrees.to_string(),
                    ]
                })
                .collect();
            csv(
                &[
                    "x",
                    "x_prime",
                    "analytic_chi",
                    "oracle_chi",
                    "oracle_stable",
                    "agrees",
                ],
                &rows,
            )?
        }
        _ => json(&FiberRecords {
            kernel: kind.name(),
            reports: records,
        }),
    };
    emit(out, &text)?;
    Ok(all_agree)
}
