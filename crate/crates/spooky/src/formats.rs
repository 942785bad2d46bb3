//! JSON schemas for every artifact the runner reads or writes.
//!
//! Each document type wraps a validated core value and is serialized from
//! it, so emitting, parsing and emitting again reproduces the same bytes.
//! Floats are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use spooky_core::gpt::{ConvexStateSpace, EffectVector, Proposition};
use spooky_core::hvt::{HvtModel, Prior};
use spooky_core::quantum::{CMatrix, DensityMatrix, Povm, QuantumScenario, ScenarioLabels};
use spooky_core::space::StateSpace;
use spooky_core::steering::SteeringCertificate;
use spooky_core::tables::{Behavior, BehaviorShape, JointTable, Purity};
use spooky_core::Error;

use crate::error::CliError;

fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_json(path, &text)
}

pub fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(path, &e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents hold only finite numbers");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- tables

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PurityJson {
    Pure,
    Mixed,
    #[default]
    Unknown,
}

impl From<Purity> for PurityJson {
    fn from(p: Purity) -> Self {
        match p {
            Purity::DeclaredPure => PurityJson::Pure,
            Purity::DeclaredMixed => PurityJson::Mixed,
            Purity::Unknown => PurityJson::Unknown,
        }
    }
}

impl From<PurityJson> for Purity {
    fn from(p: PurityJson) -> Self {
        match p {
            PurityJson::Pure => Purity::DeclaredPure,
            PurityJson::Mixed => Purity::DeclaredMixed,
            PurityJson::Unknown => Purity::Unknown,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    table: [[f64; 2]; 2],
    #[serde(default)]
    purity: PurityJson,
}

/// `{"table": [[p00, p01], [p10, p11]], "purity": "pure" | "mixed" | "unknown"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct TableDoc(pub JointTable);

impl TryFrom<TableJson> for TableDoc {
    type Error = Error;
    fn try_from(j: TableJson) -> Result<Self, Error> {
        JointTable::new(j.table, j.purity.into()).map(TableDoc)
    }
}

impl From<TableDoc> for TableJson {
    fn from(d: TableDoc) -> Self {
        TableJson {
            table: d.0.entries(),
            purity: d.0.purity().into(),
        }
    }
}

// ------------------------------------------------------------- behaviors

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbEntry {
    tests: Vec<String>,
    p: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BehaviorJson {
    parties: Vec<String>,
    tests: Vec<Vec<String>>,
    outcomes: Vec<Vec<usize>>,
    prob: Vec<ProbEntry>,
}

/// `{"parties": [...], "tests": [[...]], "outcomes": [[counts]], "prob":
/// [{"tests": [one label per party], "p": [...]}]}`.
///
/// `p` lists outcome tuples in lexicographic order, first party slowest.
/// Test labels may not contain commas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BehaviorJson", into = "BehaviorJson")]
pub struct BehaviorDoc(pub Behavior);

fn test_labels(shape: &BehaviorShape, x: &[usize]) -> Vec<String> {
    x.iter()
        .enumerate()
        .map(|(k, &t)| shape.tests(k)[t].clone())
        .collect()
}

fn test_indices(shape: &BehaviorShape, labels: &[String]) -> Result<Vec<usize>, Error> {
    if labels.len() != shape.num_parties() {
        return Err(invalid(format!(
            "test tuple {labels:?} names {} tests for {} parties",
            labels.len(),
            shape.num_parties()
        )));
    }
    labels
        .iter()
        .enumerate()
        .map(|(k, l)| {
            shape
                .test_index(k, l)
                .ok_or_else(|| invalid(format!("party {:?} has no test {l:?}", shape.parties()[k])))
        })
        .collect()
}

impl TryFrom<BehaviorJson> for BehaviorDoc {
    type Error = Error;
    fn try_from(j: BehaviorJson) -> Result<Self, Error> {
        if let Some(l) = j.tests.iter().flatten().find(|l| l.contains(',')) {
            return Err(invalid(format!("test label {l:?} contains a comma")));
        }
        let shape = BehaviorShape::new(j.parties, j.tests, j.outcomes)?;
        let mut prob = BTreeMap::new();
        for e in j.prob {
            let x = test_indices(&shape, &e.tests)?;
            if prob.insert(x, e.p).is_some() {
                return Err(invalid(format!("test tuple {:?} listed twice", e.tests)));
            }
        }
        Behavior::new(shape, prob).map(BehaviorDoc)
    }
}

impl From<BehaviorDoc> for BehaviorJson {
    fn from(d: BehaviorDoc) -> Self {
        let shape = d.0.shape();
        let k = shape.num_parties();
        BehaviorJson {
            parties: shape.parties().to_vec(),
            tests: (0..k).map(|p| shape.tests(p).to_vec()).collect(),
            outcomes: (0..k).map(|p| shape.outcome_counts(p).to_vec()).collect(),
            prob: d
                .0
                .iter()
                .map(|(x, p)| ProbEntry {
                    tests: test_labels(shape, x),
                    p: p.clone(),
                })
                .collect(),
        }
    }
}

// ------------------------------------------------------------ hvt models

const ANY: &str = "any";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    lambdas: Vec<String>,
    prior: BTreeMap<String, BTreeMap<String, f64>>,
    conditionals: BTreeMap<String, BehaviorJson>,
}

/// `{"lambdas": [...], "prior": {"any": {λ: w}} | {"a,b": {λ: w}, ...},
/// "conditionals": {λ: behavior}}`.
///
/// A test-dependent prior is keyed by the comma-joined test labels of each
/// test tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct ModelDoc(pub HvtModel);

fn weights_for(
    lambdas: &[String],
    key: &str,
    w: &BTreeMap<String, f64>,
) -> Result<Vec<f64>, Error> {
    if let Some(extra) = w.keys().find(|l| !lambdas.contains(l)) {
        return Err(invalid(format!(
            "prior {key:?} weights unknown label {extra:?}"
        )));
    }
    lambdas
        .iter()
        .map(|l| {
            w.get(l)
                .copied()
                .ok_or_else(|| invalid(format!("prior {key:?} has no weight for {l:?}")))
        })
        .collect()
}

impl TryFrom<ModelJson> for ModelDoc {
    type Error = Error;
    fn try_from(mut j: ModelJson) -> Result<Self, Error> {
        if let Some(extra) = j.conditionals.keys().find(|l| !j.lambdas.contains(l)) {
            return Err(invalid(format!("conditional for unknown label {extra:?}")));
        }
        let conditionals = j
            .lambdas
            .iter()
            .map(|l| {
                let b = j
                    .conditionals
                    .remove(l)
                    .ok_or_else(|| invalid(format!("no conditional for label {l:?}")))?;
                BehaviorDoc::try_from(b).map(|d| d.0)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let shape = conditionals
            .first()
            .ok_or_else(|| invalid("model needs at least one hidden label"))?
            .shape()
            .clone();
        let prior = if j.prior.contains_key(ANY) {
            if j.prior.len() != 1 {
                return Err(invalid(
                    "an \"any\" prior cannot be mixed with per-test priors",
                ));
            }
            Prior::Any(weights_for(&j.lambdas, ANY, &j.prior[ANY])?)
        } else {
            let mut map = BTreeMap::new();
            for (key, w) in &j.prior {
                let labels: Vec<String> = key.split(',').map(str::to_string).collect();
                map.insert(
                    test_indices(&shape, &labels)?,
                    weights_for(&j.lambdas, key, w)?,
                );
            }
            Prior::PerTests(map)
        };
        HvtModel::new(j.lambdas, prior, conditionals).map(ModelDoc)
    }
}

impl From<ModelDoc> for ModelJson {
    fn from(d: ModelDoc) -> Self {
        let m = d.0;
        let lambdas = m.lambdas().to_vec();
        let named = |w: &[f64]| -> BTreeMap<String, f64> {
            lambdas.iter().cloned().zip(w.iter().copied()).collect()
        };
        let prior = match m.prior() {
            Prior::Any(w) => BTreeMap::from([(ANY.to_string(), named(w))]),
            Prior::PerTests(map) => map
                .iter()
                .map(|(x, w)| (test_labels(m.shape(), x).join(","), named(w)))
                .collect(),
        };
        let conditionals = lambdas
            .iter()
            .cloned()
            .zip(
                m.conditionals()
                    .iter()
                    .map(|b| BehaviorDoc(b.clone()).into()),
            )
            .collect();
        ModelJson {
            lambdas,
            prior,
            conditionals,
        }
    }
}

// --------------------------------------------------------------- theories

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryJson {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    unit_effect: Vec<f64>,
}

/// `{"dim": d, "vertices": [[...], ...], "unit_effect": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TheoryJson", into = "TheoryJson")]
pub struct TheoryDoc(pub ConvexStateSpace);

impl TryFrom<TheoryJson> for TheoryDoc {
    type Error = Error;
    fn try_from(j: TheoryJson) -> Result<Self, Error> {
        if j.unit_effect.len() != j.dim {
            return Err(invalid(format!(
                "dim is {} but the unit effect has {} coordinates",
                j.dim,
                j.unit_effect.len()
            )));
        }
        ConvexStateSpace::new(j.vertices, j.unit_effect).map(TheoryDoc)
    }
}

impl From<TheoryDoc> for TheoryJson {
    fn from(d: TheoryDoc) -> Self {
        TheoryJson {
            dim: d.0.dim(),
            vertices: d.0.vertices().to_vec(),
            unit_effect: d.0.unit().coords,
        }
    }
}

/// One binary test as effect coordinates. A missing `a1` means `e - a0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionJson {
    pub a0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<Vec<f64>>,
}

/// `{"propositions": [{"a0": [...], "a1": [...]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionsDoc {
    pub propositions: Vec<PropositionJson>,
}

impl PropositionsDoc {
    pub fn from_propositions(props: &[Proposition]) -> Self {
        PropositionsDoc {
            propositions: props
                .iter()
                .map(|p| PropositionJson {
                    a0: p.a0().coords.clone(),
                    a1: Some(p.a1().coords.clone()),
                })
                .collect(),
        }
    }

    /// Checks coordinate counts against `space` and fills in missing `a1`.
    pub fn resolve(&self, space: &ConvexStateSpace) -> Result<Vec<Proposition>, Error> {
        self.propositions
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let check = |name: &str, v: &[f64]| {
                    if v.len() == space.dim() {
                        Ok(())
                    } else {
                        Err(invalid(format!(
                            "proposition {i}: {name} has {} coordinates, theory has {}",
                            v.len(),
                            space.dim()
                        )))
                    }
                };
                check("a0", &p.a0)?;
                let a0 = EffectVector::new(p.a0.clone());
                Ok(match &p.a1 {
                    Some(a1) => {
                        check("a1", a1)?;
                        Proposition::new(a0, EffectVector::new(a1.clone()))
                    }
                    None => Proposition::new(a0.clone(), space.complement(&a0)),
                })
            })
            .collect()
    }
}

// ---------------------------------------------------------------- quantum

/// A complex matrix as separate real and imaginary row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        MatrixJson {
            re: m.real_parts(),
            im: m.imag_parts(),
        }
    }
}

impl TryFrom<&MatrixJson> for CMatrix {
    type Error = Error;
    fn try_from(j: &MatrixJson) -> Result<Self, Error> {
        CMatrix::from_parts(&j.re, &j.im)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelsJson {
    #[serde(default)]
    a: Vec<String>,
    #[serde(default)]
    b: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioJson {
    #[serde(rename = "dA")]
    d_a: usize,
    #[serde(rename = "dB")]
    d_b: usize,
    joint: MatrixJson,
    #[serde(rename = "povmA")]
    povm_a: Vec<MatrixJson>,
    #[serde(rename = "povmB")]
    povm_b: Vec<MatrixJson>,
    #[serde(default)]
    labels: LabelsJson,
}

/// `{"dA": 2, "dB": 2, "joint": {"re": [[...]], "im": [[...]]}, "povmA":
/// [{"re", "im"}, ...], "povmB": [...], "labels": {"a": [...], "b": [...]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioJson", into = "ScenarioJson")]
pub struct ScenarioDoc(pub QuantumScenario);

fn povm_from(side: &str, effects: &[MatrixJson]) -> Result<Povm, Error> {
    let effects = effects
        .iter()
        .map(CMatrix::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    Povm::new(effects).map_err(|e| invalid(format!("povm{side}: {e}")))
}

impl TryFrom<ScenarioJson> for ScenarioDoc {
    type Error = Error;
    fn try_from(j: ScenarioJson) -> Result<Self, Error> {
        let joint = DensityMatrix::new(CMatrix::try_from(&j.joint)?)
            .map_err(|e| invalid(format!("joint: {e}")))?;
        let labels = ScenarioLabels {
            a: j.labels.a,
            b: j.labels.b,
        };
        QuantumScenario::new(
            (j.d_a, j.d_b),
            joint,
            povm_from("A", &j.povm_a)?,
            povm_from("B", &j.povm_b)?,
            labels,
        )
        .map(ScenarioDoc)
    }
}

impl From<ScenarioDoc> for ScenarioJson {
    fn from(d: ScenarioDoc) -> Self {
        let s = d.0;
        let (d_a, d_b) = s.dims();
        ScenarioJson {
            d_a,
            d_b,
            joint: s.joint().matrix().into(),
            povm_a: s.povm_a().effects().iter().map(MatrixJson::from).collect(),
            povm_b: s.povm_b().effects().iter().map(MatrixJson::from).collect(),
            labels: LabelsJson {
                a: s.labels.a.clone(),
                b: s.labels.b.clone(),
            },
        }
    }
}

// ----------------------------------------------------------- certificates

/// An effect: coordinates for polytopal and tabular theories, a matrix for
/// quantum ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EffectJson {
    Vector(Vec<f64>),
    Matrix(MatrixJson),
}

impl From<&EffectVector> for EffectJson {
    fn from(a: &EffectVector) -> Self {
        EffectJson::Vector(a.coords.clone())
    }
}

impl From<&CMatrix> for EffectJson {
    fn from(a: &CMatrix) -> Self {
        EffectJson::Matrix(a.into())
    }
}

/// `{"a0", "w", "p0", "p1", "det", "difference"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub a0: EffectJson,
    pub w: f64,
    pub p0: f64,
    pub p1: f64,
    pub det: f64,
    pub difference: f64,
}

impl CertificateDoc {
    pub fn new<S, E>(c: &SteeringCertificate<S, E>) -> Self
    where
        for<'a> &'a E: Into<EffectJson>,
    {
        CertificateDoc {
            a0: (&c.a0).into(),
            w: c.w,
            p0: c.weights[0],
            p1: c.weights[1],
            det: c.det,
            difference: c.difference,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spooky_core::hvt::{build_deterministic_signaling, deterministic_local_model};
    use spooky_core::quantum::born_table;
    use spooky_core::quantum::cat::cat_scenarios;
    use spooky_core::random::{random_behavior, random_positive_hvt, rng};
    use spooky_core::steering::{table_to_steering_quantum, table_to_steering_tabular};

    fn fixed_point<T: Serialize + DeserializeOwned>(doc: &T) {
        let first = to_json(doc);
        let parsed: T = parse_json(Path::new("mem"), &first).unwrap();
        assert_eq!(first, to_json(&parsed));
    }

    fn two_by_two() -> BehaviorShape {
        BehaviorShape::new(
            vec!["A".into(), "B".into()],
            vec![
                vec!["a0".into(), "a1".into()],
                vec!["b0".into(), "b1".into()],
            ],
            vec![vec![2, 2], vec![2, 2]],
        )
        .unwrap()
    }

    #[test]
    fn table_schema() {
        let d: TableDoc = parse_json(
            Path::new("t"),
            r#"{"table": [[0.5, 0], [0, 0.5]], "purity": "pure"}"#,
        )
        .unwrap();
        assert_eq!(d.0.purity(), Purity::DeclaredPure);
        fixed_point(&d);
        let d: TableDoc =
            parse_json(Path::new("t"), r#"{"table": [[0.1, 0.2], [0.3, 0.4]]}"#).unwrap();
        assert_eq!(d.0.purity(), Purity::Unknown);
        fixed_point(&d);
    }

    #[test]
    fn table_rejections() {
        for bad in [
            r#"{"table": [[0.5, 0.5], [0.5, 0.5]]}"#,
            r#"{"table": [[0.5, 0], [0, 0.5]], "purity": "sometimes"}"#,
            r#"{"table": [[0.5, 0], [0, 0.5]], "extra": 1}"#,
            r#"{"table": [[0.5, 0], [0, 0.5]]"#,
        ] {
            assert!(
                parse_json::<TableDoc>(Path::new("t"), bad).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn behavior_round_trip() {
        let mut r = rng(11);
        for _ in 0..20 {
            fixed_point(&BehaviorDoc(random_behavior(&mut r, &two_by_two())));
        }
    }

    #[test]
    fn behavior_rejects_unknown_test() {
        let text = r#"{"parties": ["A"], "tests": [["x"]], "outcomes": [[2]],
            "prob": [{"tests": ["y"], "p": [0.5, 0.5]}]}"#;
        let err = parse_json::<BehaviorDoc>(Path::new("b"), text).unwrap_err();
        assert!(err.to_string().contains("no test"), "{err}");
    }

    #[test]
    fn model_round_trips() {
        let mut r = rng(12);
        for factorized in [true, false] {
            fixed_point(&ModelDoc(random_positive_hvt(
                &mut r,
                &two_by_two(),
                3,
                factorized,
            )));
        }
        let b = random_behavior(&mut r, &two_by_two());
        let signaling = build_deterministic_signaling(&b);
        assert!(matches!(signaling.prior(), Prior::PerTests(_)));
        fixed_point(&ModelDoc(signaling));
        let t = born_table(&cat_scenarios().v2).unwrap();
        fixed_point(&ModelDoc(deterministic_local_model(&t)));
    }

    #[test]
    fn model_parses_back_to_the_same_value() {
        let mut r = rng(13);
        let m = build_deterministic_signaling(&random_behavior(&mut r, &two_by_two()));
        let parsed: ModelDoc = parse_json(Path::new("m"), &to_json(&ModelDoc(m.clone()))).unwrap();
        assert_eq!(parsed.0, m);
    }

    #[test]
    fn theory_and_propositions() {
        for space in [
            ConvexStateSpace::classical(3),
            ConvexStateSpace::square(),
            ConvexStateSpace::bloch_octahedron(),
        ] {
            fixed_point(&TheoryDoc(space));
        }
        let oct = ConvexStateSpace::bloch_octahedron();
        let doc: PropositionsDoc = parse_json(
            Path::new("p"),
            r#"{"propositions": [{"a0": [0.5, 0.5, 0, 0]}]}"#,
        )
        .unwrap();
        let props = doc.resolve(&oct).unwrap();
        assert_eq!(props[0].a1().coords, vec![0.5, -0.5, 0.0, 0.0]);
        fixed_point(&PropositionsDoc::from_propositions(&props));
        let short = PropositionsDoc {
            propositions: vec![PropositionJson {
                a0: vec![1.0],
                a1: None,
            }],
        };
        assert!(short.resolve(&oct).is_err());
    }

    #[test]
    fn theory_dim_mismatch() {
        let text = r#"{"dim": 3, "vertices": [[1, 0]], "unit_effect": [1, 0]}"#;
        assert!(parse_json::<TheoryDoc>(Path::new("th"), text).is_err());
    }

    #[test]
    fn scenario_round_trip() {
        let c = cat_scenarios();
        for s in [c.v2, c.v3] {
            let doc = ScenarioDoc(s.clone());
            fixed_point(&doc);
            let parsed: ScenarioDoc = parse_json(Path::new("s"), &to_json(&doc)).unwrap();
            assert_eq!(parsed.0, s);
        }
    }

    #[test]
    fn certificates() {
        let q = table_to_steering_quantum(&cat_scenarios().v3).unwrap();
        let doc = CertificateDoc::new(&q);
        assert!(matches!(doc.a0, EffectJson::Matrix(_)));
        fixed_point(&doc);
        let t = JointTable::new([[0.5, 0.25], [0.0, 0.25]], Purity::DeclaredPure).unwrap();
        let doc = CertificateDoc::new(&table_to_steering_tabular(&t).unwrap());
        assert_eq!(doc.a0, EffectJson::Vector(vec![1.0, 0.0]));
        fixed_point(&doc);
    }
}
