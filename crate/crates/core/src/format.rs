//! JSON file formats. Every rational is a string `"p/q"` (or `"p"` for
//! integers on input); output is canonical, so parse followed by
//! serialize is the identity on canonical files.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{ComplexError, GeometricComplex};
use crate::ect::{DirectionProbe, EctError};
use crate::function::{ConstructibleFunction, FunctionError};
use crate::qect::{QectError, QuadricProbe, SymMatrix};
use crate::radon::{KernelKind, RadonError};
use crate::rational::{format_rational, parse_rational, Point, Rational};
use crate::step::{StepError, StepFunction};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Ect(#[from] EctError),
    #[error(transparent)]
    Qect(#[from] QectError),
    #[error(transparent)]
    Radon(#[from] RadonError),
    #[error("{0}")]
    Invalid(String),
}

/// Rational that serializes as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Q).map_err(serde::de::Error::custom)
    }
}

fn q_vec(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn un_q(v: Vec<Q>) -> Point {
    v.into_iter().map(|q| q.0).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexEntry {
    pub vertices: Vec<usize>,
    pub weight: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub ambient_dim: usize,
    #[serde(default)]
    pub ambient_coeff: i64,
    pub vertices: Vec<Vec<Q>>,
    pub simplices: Vec<SimplexEntry>,
}

impl ComplexFile {
    pub fn from_function(f: &ConstructibleFunction) -> Self {
        let c = f.complex();
        Self {
            ambient_dim: f.ambient_dim(),
            ambient_coeff: f.ambient_coeff(),
            vertices: c.vertices().iter().map(|v| q_vec(v)).collect(),
            simplices: c
                .simplices()
                .iter()
                .zip(f.weights())
                .map(|(s, &w)| SimplexEntry {
                    vertices: s.clone(),
                    weight: w,
                })
                .collect(),
        }
    }

    pub fn into_function(self) -> Result<ConstructibleFunction, FormatError> {
        let vertices = self.vertices.into_iter().map(un_q).collect();
        let (simplices, weights): (Vec<_>, Vec<_>) = self
            .simplices
            .into_iter()
            .map(|s| (s.vertices, s.weight))
            .unzip();
        let complex = GeometricComplex::new(self.ambient_dim, vertices, simplices)?;
        Ok(ConstructibleFunction::new(
            complex,
            weights,
            self.ambient_coeff,
        )?)
    }
}

pub fn parse_function(text: &str) -> Result<ConstructibleFunction, FormatError> {
    serde_json::from_str::<ComplexFile>(text)?.into_function()
}

pub fn function_to_json(f: &ConstructibleFunction) -> String {
    to_json(&ComplexFile::from_function(f))
}

/// Step function: value on `(-∞, t₁)`, breakpoints, and the value after
/// each breakpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub value_at_minus_inf: i64,
    pub breakpoints: Vec<Q>,
    pub values: Vec<i64>,
}

impl StepFile {
    pub fn from_step(phi: &StepFunction) -> Self {
        Self {
            value_at_minus_inf: phi.value_at_minus_inf(),
            breakpoints: q_vec(phi.breakpoints()),
            values: phi.values()[1..].to_vec(),
        }
    }

    pub fn into_step(self) -> Result<StepFunction, FormatError> {
        let mut values = vec![self.value_at_minus_inf];
        values.extend(self.values);
        Ok(StepFunction::from_parts(un_q(self.breakpoints), values)?)
    }
}

pub fn parse_step(text: &str) -> Result<StepFunction, FormatError> {
    serde_json::from_str::<StepFile>(text)?.into_step()
}

pub fn step_to_json(phi: &StepFunction) -> String {
    to_json(&StepFile::from_step(phi))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionsFile {
    pub directions: Vec<Vec<Q>>,
}

pub fn parse_directions(text: &str) -> Result<Vec<DirectionProbe>, FormatError> {
    let file: DirectionsFile = serde_json::from_str(text)?;
    Ok(file
        .directions
        .into_iter()
        .map(|d| DirectionProbe::new(un_q(d)))
        .collect::<Result<_, _>>()?)
}

pub fn directions_to_json(dirs: &[DirectionProbe]) -> String {
    to_json(&DirectionsFile {
        directions: dirs.iter().map(|d| q_vec(d.components())).collect(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeEntry {
    pub a: Vec<Vec<Q>>,
    pub v: Vec<Q>,
    pub t: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbesFile {
    pub probes: Vec<ProbeEntry>,
}

fn matrix_from(rows: Vec<Vec<Q>>) -> Result<SymMatrix, QectError> {
    SymMatrix::new(rows.into_iter().map(un_q).collect())
}

fn matrix_to(a: &SymMatrix) -> Vec<Vec<Q>> {
    a.rows().iter().map(|r| q_vec(r)).collect()
}

pub fn parse_probes(text: &str) -> Result<Vec<QuadricProbe>, FormatError> {
    let file: ProbesFile = serde_json::from_str(text)?;
    Ok(file
        .probes
        .into_iter()
        .map(|p| QuadricProbe::new(matrix_from(p.a)?, un_q(p.v), p.t.0))
        .collect::<Result<_, _>>()?)
}

pub fn probes_to_json(probes: &[QuadricProbe]) -> String {
    to_json(&ProbesFile {
        probes: probes
            .iter()
            .map(|p| ProbeEntry {
                a: matrix_to(p.a()),
                v: q_vec(p.v()),
                t: Q(p.t().clone()),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    EctLinear { n: usize },
    QuadricV0 { n: usize },
    QuadricFixedA { a: Vec<Vec<Q>>, r: Q },
}

impl KernelSpec {
    pub fn from_kind(kind: &KernelKind) -> Self {
        match kind {
            KernelKind::EctLinear { n } => Self::EctLinear { n: *n },
            KernelKind::QuadricV0 { n } => Self::QuadricV0 { n: *n },
            KernelKind::QuadricFixedA { a, r } => Self::QuadricFixedA {
                a: matrix_to(a),
                r: Q(r.clone()),
            },
        }
    }

    pub fn into_kind(self) -> Result<KernelKind, FormatError> {
        let kind = match self {
            Self::EctLinear { n } => KernelKind::EctLinear { n },
            Self::QuadricV0 { n } => KernelKind::QuadricV0 { n },
            Self::QuadricFixedA { a, r } => KernelKind::QuadricFixedA {
                a: matrix_from(a)?,
                r: r.0,
            },
        };
        kind.validate()?;
        Ok(kind)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub x: Vec<Q>,
    pub x_prime: Vec<Q>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberPairsFile {
    pub kernel: KernelSpec,
    pub pairs: Vec<PairEntry>,
}

pub type FiberPairs = (KernelKind, Vec<(Point, Point)>);

pub fn parse_fiber_pairs(text: &str) -> Result<FiberPairs, FormatError> {
    let file: FiberPairsFile = serde_json::from_str(text)?;
    let kind = file.kernel.into_kind()?;
    let pairs = file
        .pairs
        .into_iter()
        .map(|p| (un_q(p.x), un_q(p.x_prime)))
        .collect();
    Ok((kind, pairs))
}

pub fn fiber_pairs_to_json(kind: &KernelKind, pairs: &[(Point, Point)]) -> String {
    to_json(&FiberPairsFile {
        kernel: KernelSpec::from_kind(kind),
        pairs: pairs
            .iter()
            .map(|(x, xp)| PairEntry {
                x: q_vec(x),
                x_prime: q_vec(xp),
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ipoint, ratio};

    #[test]
    fn function_round_trip() {
        let f = ConstructibleFunction::from_cells(
            2,
            [
                (vec![vec![ratio(1, 3), int(0)], ipoint(&[2, -1])], 3),
                (vec![ipoint(&[2, -1])], -1),
            ],
            4,
        )
        .unwrap();
        let text = function_to_json(&f);
        assert!(text.contains("\"1/3\""));
        assert_eq!(parse_function(&text).unwrap(), f);
        assert_eq!(function_to_json(&parse_function(&text).unwrap()), text);
    }

    #[test]
    fn integers_are_accepted_without_denominator() {
        let text = r#"{"ambient_dim": 1, "vertices": [["-1"], ["1"]],
                       "simplices": [{"vertices": [0, 1], "weight": 1}]}"#;
        let f = parse_function(text).unwrap();
        assert_eq!(f.ambient_coeff(), 0);
        assert_eq!(f.euler_integral(), -1);
    }

    #[test]
    fn errors_carry_positions() {
        let err =
            parse_function("{\"ambient_dim\": 1,\n \"vertices\": [[\"x\"]], \"simplices\": []}")
                .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        let err = parse_function(r#"{"ambient_dim": 1, "vertices": [["0"]], "simplices": [{"vertices": [3], "weight": 1}]}"#)
            .unwrap_err();
        assert!(matches!(err, FormatError::Complex(_)));
        assert!(parse_function(
            r#"{"ambient_dim": 1, "vertices": [], "simplices": [], "extra": 1}"#
        )
        .is_err());
    }

    #[test]
    fn step_round_trip() {
        let phi = StepFunction::from_jumps(2, vec![(ratio(-1, 2), 1), (int(3), -4)]);
        let text = step_to_json(&phi);
        assert_eq!(parse_step(&text).unwrap(), phi);
        let bad = r#"{"value_at_minus_inf": 0, "breakpoints": ["1"], "values": [0]}"#;
        assert!(matches!(parse_step(bad), Err(FormatError::Step(_))));
    }

    #[test]
    fn directions_and_probes_round_trip() {
        let dirs = vec![
            DirectionProbe::new(vec![ratio(3, 5), ratio(4, 5)]).unwrap(),
            DirectionProbe::from_ints(&[-1, 0]).unwrap(),
        ];
        let text = directions_to_json(&dirs);
        assert_eq!(parse_directions(&text).unwrap(), dirs);
        assert!(parse_directions(r#"{"directions": [["0", "0"]]}"#).is_err());

        let probes =
            vec![
                QuadricProbe::new(SymMatrix::identity(2), vec![int(0), ratio(1, 2)], int(-3))
                    .unwrap(),
            ];
        let text = probes_to_json(&probes);
        assert_eq!(parse_probes(&text).unwrap(), probes);
        let asym = r#"{"probes": [{"a": [["1", "2"], ["3", "1"]], "v": ["0", "0"], "t": "0"}]}"#;
        assert!(matches!(
            parse_probes(asym),
            Err(FormatError::Qect(QectError::NotSymmetric(0, 1)))
        ));
    }

    #[test]
    fn fiber_pairs_round_trip() {
        let kind = KernelKind::QuadricFixedA {
            a: SymMatrix::diagonal(vec![ratio(1, 10), int(0)]),
            r: int(1),
        };
        let pairs = vec![(ipoint(&[0, 1]), vec![ratio(1, 2), int(0)])];
        let text = fiber_pairs_to_json(&kind, &pairs);
        assert!(text.contains("quadric_fixed_a"));
        assert_eq!(parse_fiber_pairs(&text).unwrap(), (kind, pairs));
        let v0 = r#"{"kernel": {"kind": "quadric_v0", "n": 2}, "pairs": []}"#;
        assert_eq!(
            parse_fiber_pairs(v0).unwrap().0,
            KernelKind::QuadricV0 { n: 2 }
        );
    }
}
