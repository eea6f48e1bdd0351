//! Named objects plus the registry, persisted as a replayable script of
//! declaration commands.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use archord::archgroup::OrderedVectorGroup;
use archord::reductions::ColoredLinearOrder;
use archord::symreal::{RefineConfig, Registry};
use archord::zmodule::Subgroup;
use clap::Parser;

use crate::cli::Cli;
use crate::report::CliError;

#[derive(Clone, Debug)]
pub enum Object {
    Group(Subgroup),
    Type(OrderedVectorGroup),
    Clo(ColoredLinearOrder),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Group(_) => "group",
            Object::Type(_) => "type",
            Object::Clo(_) => "clo",
        }
    }
}

pub struct Session {
    pub reg: Registry,
    objects: BTreeMap<String, Object>,
    script: Option<PathBuf>,
}

impl Session {
    pub fn new(config: RefineConfig) -> Session {
        Session {
            reg: Registry::new().with_config(config),
            objects: BTreeMap::new(),
            script: None,
        }
    }

    /// Replays every declaration in `path` (missing file = empty session)
    /// and appends later declarations there.
    pub fn open(path: &Path, config: RefineConfig) -> Result<Session, CliError> {
        let mut s = Session::new(config);
        if path.exists() {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Contract(format!("cannot read session {}: {e}", path.display())))?;
            for (i, line) in text.lines().enumerate() {
                let ctx = format!("{}:{}", path.display(), i + 1);
                s.replay(line).map_err(|e| e.with_context(&ctx))?;
            }
        }
        s.script = Some(path.to_path_buf());
        Ok(s)
    }

    fn replay(&mut self, line: &str) -> Result<(), CliError> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(());
        }
        let words = shlex::split(line).ok_or_else(|| CliError::Parse("unbalanced quotes".into()))?;
        let cli = Cli::try_parse_from(std::iter::once("archord".to_string()).chain(words))
            .map_err(|e| CliError::Parse(e.to_string().lines().next().unwrap_or_default().to_string()))?;
        if !cli.command.is_declaration() {
            return Err(CliError::Parse("only declarations may appear in a session".into()));
        }
        crate::commands::declare(self, &cli.command)?;
        Ok(())
    }

    /// Records a declaration line in the session script, if any.
    pub fn record(&self, words: &[&str]) -> Result<(), CliError> {
        let Some(path) = &self.script else {
            return Ok(());
        };
        let line = shlex::try_join(words.iter().copied())
            .map_err(|e| CliError::Contract(format!("cannot quote declaration: {e}")))?;
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CliError::Contract(format!("cannot write session {}: {e}", path.display())))?;
        writeln!(f, "{line}").map_err(|e| CliError::Contract(format!("cannot write session: {e}")))
    }

    pub fn insert(&mut self, name: &str, obj: Object) -> Result<(), CliError> {
        if !is_name(name) {
            return Err(CliError::Parse(format!("`{name}` is not a valid object name")));
        }
        if self.objects.contains_key(name) || self.reg.contains(name) {
            return Err(CliError::Contract(format!("name `{name}` is already in use")));
        }
        self.objects.insert(name.to_string(), obj);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }

    /// A named group, or a group literal.
    pub fn group(&self, text: &str) -> Result<Subgroup, CliError> {
        match self.lookup(text, "group")? {
            Some(Object::Group(g)) => Ok(g.clone()),
            _ => Ok(Subgroup::parse(text, &self.reg)?),
        }
    }

    /// A named type, or a type literal.
    pub fn ordered_group(&self, text: &str) -> Result<OrderedVectorGroup, CliError> {
        match self.lookup(text, "type")? {
            Some(Object::Type(t)) => Ok(t.clone()),
            _ => Ok(OrderedVectorGroup::parse(text, &self.reg)?),
        }
    }

    pub fn clo(&self, name: &str) -> Result<ColoredLinearOrder, CliError> {
        match self.lookup(name, "clo")? {
            Some(Object::Clo(k)) => Ok(k.clone()),
            _ => Err(CliError::Contract(format!("unknown colored order `{name}`"))),
        }
    }

    /// Named objects must have the expected kind. Literals always carry
    /// brackets, so a bare identifier that names nothing is unknown.
    fn lookup(&self, text: &str, kind: &str) -> Result<Option<&Object>, CliError> {
        match self.objects.get(text) {
            Some(o) if o.kind() == kind => Ok(Some(o)),
            Some(o) => Err(CliError::Contract(format!("`{text}` is a {}, not a {kind}", o.kind()))),
            None if is_name(text) => {
                Err(CliError::Contract(format!("unknown {kind} `{text}`")))
            }
            None => Ok(None),
        }
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
