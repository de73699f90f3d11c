//! The task document: named declarations followed by an ordered task list.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Integer matrix, row-major.
pub type Rows = Vec<Vec<i64>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDocument {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattices: Vec<LatticeDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub root_data: Vec<DatumDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reductive_pairs: Vec<ReductiveDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub characters: Vec<CharacterDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesDecl>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

/// One operation invocation. Everything but `op` is handed to the operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub op: String,
    #[serde(flatten)]
    pub args: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDecl {
    pub id: String,
    #[serde(flatten)]
    pub spec: GroupSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpec {
    Trivial,
    Cyclic { order: usize },
    /// Dihedral of order `2n`.
    Dihedral { n: usize },
    Quaternion,
    Symmetric { n: usize },
    /// Product of cyclic groups of the given orders.
    Abelian { orders: Vec<usize> },
    /// One of the named small groups, e.g. `"C2xC2"` or `"Q8"`.
    Named { name: String },
    /// Multiplication table with element 0 as the identity.
    Table { table: Vec<Vec<usize>> },
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDecl {
    pub id: String,
    pub group: String,
    #[serde(flatten)]
    pub spec: LatticeSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LatticeSpec {
    /// Matrices for the listed group elements; the rest follow.
    Action { rank: usize, generators: Vec<usize>, images: Vec<Rows> },
    /// One matrix per group element, in element order.
    Full { rank: usize, matrices: Vec<Rows> },
    Trivial { rank: usize },
    /// `ℤ[Γ]ᵏ`.
    Regular { copies: usize },
    /// The augmentation ideal of `ℤ[Γ]`.
    Augmentation,
}

/// `L / P` where the columns of `relations` span a stable full-rank sublattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDecl {
    pub id: String,
    pub lattice: String,
    pub relations: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDecl {
    pub id: String,
    pub lattice: String,
    #[serde(flatten)]
    pub spec: PairSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PairSpec {
    /// `Ȳ = Y`.
    Trivial,
    /// `Ȳ` spanned by `Y` and the given rational vectors ("a/b" entries).
    Overlattice { generators: Vec<Vec<String>> },
    /// `Y → Ȳ` given by an integer matrix in a basis of `Ȳ`.
    Inclusion { matrix: Rows },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumDecl {
    pub id: String,
    #[serde(flatten)]
    pub spec: DatumSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSpec {
    SimplyConnected,
    Adjoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DatumSpec {
    /// Type `A`-`D` from its Cartan matrix, optionally twisted.
    Cartan {
        family: char,
        rank: usize,
        form: FormSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        action: Option<ActionSpec>,
    },
    /// A torus with cocharacter lattice `lattice`.
    Torus { lattice: String },
    /// Roots and coroots as rows; `lattice` carries `Y` and the action.
    Explicit { lattice: String, roots: Rows, coroots: Rows, simple: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSpec {
    /// The given group acting trivially.
    Split { group: String },
    /// A permutation of the simple roots, generating a cyclic group.
    Diagram { permutation: Vec<usize> },
    /// The Coxeter element, generating a cyclic group.
    Coxeter,
    /// The product of simple reflections `s_{i₁}⋯s_{i_k}`.
    Weyl { word: Vec<usize> },
    /// An explicit generator on `Y`.
    Matrix { generator: Rows },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductiveDecl {
    pub id: String,
    pub datum: String,
    #[serde(default)]
    pub center: CenterSpec,
    /// Required when `center` is `"pair"`: a pair over the datum's `Y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSpec {
    #[default]
    Trivial,
    Full,
    Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterDecl {
    pub id: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDecl {
    pub id: String,
    pub p: u64,
    pub start: i64,
    pub coeffs: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputErrorKind {
    Parse,
    Schema,
    DanglingReference,
}

/// A problem with the document itself, found before anything runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub kind: InputErrorKind,
    /// `line L, column C` for parse errors, a field path otherwise.
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn schema(location: impl Into<String>, message: impl fmt::Display) -> Self {
        InputError { kind: InputErrorKind::Schema, location: location.into(), message: message.to_string() }
    }

    pub fn dangling(location: impl Into<String>, id: &str, kind: &str) -> Self {
        InputError {
            kind: InputErrorKind::DanglingReference,
            location: location.into(),
            message: format!("no {kind} named {id:?}"),
        }
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            InputErrorKind::Parse => "ParseError",
            InputErrorKind::Schema => "SchemaError",
            InputErrorKind::DanglingReference => "DanglingReference",
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code(), self.location, self.message)
    }
}

impl std::error::Error for InputError {}

/// Deserializes `T` from `text`, reporting syntax errors by position and
/// shape errors by field path.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, InputError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            InputError::schema(path, inner)
        } else {
            parse_error(&inner)
        }
    })?;
    de.end().map_err(|e| parse_error(&e))?;
    Ok(value)
}

fn parse_error(e: &serde_json::Error) -> InputError {
    InputError {
        kind: InputErrorKind::Parse,
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

/// Parses a document without resolving references.
pub fn parse(text: &str) -> Result<TaskDocument, InputError> {
    from_json(text)
}

impl TaskDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}
