//! Built-in example spaces, shipped as JSON space definitions.

use crate::error::{Error, Result};
use crate::space::{NormedSpace, PolyhedralSpace};

const ENTRIES: &[(&str, &str)] = &[
    ("linf2", include_str!("../data/linf2.json")),
    ("linf3", include_str!("../data/linf3.json")),
    ("l1_2", include_str!("../data/l1_2.json")),
    ("l1_3", include_str!("../data/l1_3.json")),
    ("hexagon", include_str!("../data/hexagon.json")),
    ("euclidean2d", include_str!("../data/euclidean2d.json")),
    ("theta_n", include_str!("../data/theta_n.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

/// Raw JSON definition of a corpus entry.
pub fn source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<NormedSpace> {
    let text = source(name).ok_or_else(|| Error::Parse(format!("no corpus entry named {name:?}")))?;
    NormedSpace::from_json_str(text)
}

/// A corpus entry that must have rational data.
pub fn exact(name: &str) -> Result<PolyhedralSpace> {
    match load(name)? {
        NormedSpace::Exact(s) => Ok(s),
        other => Err(Error::WrongType(format!("{} is not an exact polyhedral space", other.name()))),
    }
}
