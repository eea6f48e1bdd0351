use std::fmt;

use archord::archgroup::ArchError;
use archord::circular::CircularError;
use archord::classify::ClassifyError;
use archord::hahn::HahnError;
use archord::reductions::ReductionError;
use archord::symreal::SymError;
use archord::zmodule::GroupError;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A failed command, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse(String),
    Contract(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Contract(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Contract(_) => "contract",
            CliError::Budget(_) => "budget",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Contract(m) | CliError::Budget(m) => m,
        }
    }

    pub fn with_context(self, ctx: &str) -> CliError {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{ctx}: {m}")),
            CliError::Contract(m) => CliError::Contract(format!("{ctx}: {m}")),
            CliError::Budget(m) => CliError::Budget(format!("{ctx}: {m}")),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": VERSION,
            "status": "error",
            "kind": self.kind(),
            "message": self.message(),
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl From<SymError> for CliError {
    fn from(e: SymError) -> Self {
        match e {
            SymError::Parse { .. } => CliError::Parse(e.to_string()),
            ref b if b.is_budget() => CliError::Budget(e.to_string()),
            _ => CliError::Contract(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Sym(s) => s.into(),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<ArchError> for CliError {
    fn from(e: ArchError) -> Self {
        match e {
            ArchError::Sym(s) => s.into(),
            ArchError::BracketOverflow(_) => CliError::Budget(e.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Sym(s) => s.into(),
            ClassifyError::Group(g) => g.into(),
            ClassifyError::BadCharacteristic(_) => CliError::Parse(e.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Sym(s) => s.into(),
            ReductionError::Group(g) => g.into(),
            ReductionError::InvalidOrder(_) => CliError::Parse(e.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<CircularError> for CliError {
    fn from(e: CircularError) -> Self {
        match e {
            CircularError::Sym(s) => s.into(),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<HahnError> for CliError {
    fn from(e: HahnError) -> Self {
        match e {
            HahnError::Sym(s) => s.into(),
            HahnError::Parse(_) => CliError::Parse(e.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

/// Command output: ordered fields for text mode; JSON objects get sorted
/// keys, which keeps reports byte-stable.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Report {
        let value = value.into();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("version".into(), VERSION.into());
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            if k == "command" {
                continue;
            }
            out.push_str(&format!("{k}: {}\n", text_value(v)));
        }
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(text_value).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}
