//! Interned identifiers for reactives, membranes and regions.

use std::fmt;
use std::sync::Arc;

/// Name of a reactive species. Cheap to clone; ordered and hashed by content.
///
/// Constructed systems use composite names like `v@1/2` to encode a reactive
/// paired with a grade label; the `@` carries no meaning to the core model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReactiveId(Arc<str>);

impl ReactiveId {
    pub fn new(name: impl AsRef<str>) -> Self {
        ReactiveId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `v` tagged with a grade label, e.g. `s` at `1/2` becomes `s@1/2`.
    pub fn tagged(&self, label: impl fmt::Display) -> ReactiveId {
        ReactiveId::new(format!("{}@{}", self.0, label))
    }
}

impl fmt::Display for ReactiveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for ReactiveId {
    fn from(s: &str) -> Self {
        ReactiveId::new(s)
    }
}

impl From<String> for ReactiveId {
    fn from(s: String) -> Self {
        ReactiveId::new(s)
    }
}

/// Label of a membrane. The skin membrane is always labelled 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MembraneId(pub u32);

impl MembraneId {
    pub const SKIN: MembraneId = MembraneId(1);
}

impl fmt::Display for MembraneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A region holding objects: either the inside of a membrane or the
/// environment surrounding the skin.
///
/// Membranes order before the environment, so canonical listings end with
/// `env`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionId {
    Membrane(MembraneId),
    Env,
}

impl RegionId {
    pub fn membrane(self) -> Option<MembraneId> {
        match self {
            RegionId::Membrane(m) => Some(m),
            RegionId::Env => None,
        }
    }

    pub fn is_env(self) -> bool {
        matches!(self, RegionId::Env)
    }
}

impl From<MembraneId> for RegionId {
    fn from(m: MembraneId) -> Self {
        RegionId::Membrane(m)
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::Membrane(m) => write!(f, "{m}"),
            RegionId::Env => write!(f, "env"),
        }
    }
}
