use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of labeled part classes.
pub const CLASS_COUNT: usize = 8;

const NAMES: [&str; CLASS_COUNT] = [
    "back door",
    "back window",
    "rear window",
    "front door",
    "front window",
    "door handle",
    "mirror",
    "tail light",
];

const SLUGS: [&str; CLASS_COUNT] = [
    "back_door",
    "back_window",
    "rear_window",
    "front_door",
    "front_window",
    "door_handle",
    "mirror",
    "tail_light",
];

/// One of the eight labeled vehicle feature classes.
///
/// Serialized as its slug (`"door_handle"`); parsing also accepts the
/// spaced display name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureClass(u8);

impl FeatureClass {
    pub const BACK_DOOR: FeatureClass = FeatureClass(0);
    pub const BACK_WINDOW: FeatureClass = FeatureClass(1);
    pub const REAR_WINDOW: FeatureClass = FeatureClass(2);
    pub const FRONT_DOOR: FeatureClass = FeatureClass(3);
    pub const FRONT_WINDOW: FeatureClass = FeatureClass(4);
    pub const DOOR_HANDLE: FeatureClass = FeatureClass(5);
    pub const MIRROR: FeatureClass = FeatureClass(6);
    pub const TAIL_LIGHT: FeatureClass = FeatureClass(7);

    pub fn from_id(id: u8) -> Option<FeatureClass> {
        ((id as usize) < CLASS_COUNT).then_some(FeatureClass(id))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn slug(self) -> &'static str {
        SLUGS[self.index()]
    }

    /// All classes in registry order.
    pub fn all() -> impl Iterator<Item = FeatureClass> + Clone {
        (0..CLASS_COUNT as u8).map(FeatureClass)
    }

    /// Look up by slug or display name, case-insensitively.
    pub fn parse(s: &str) -> Result<FeatureClass> {
        let needle = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        SLUGS
            .iter()
            .position(|slug| *slug == needle)
            .map(|i| FeatureClass(i as u8))
            .ok_or_else(|| Error::param(format!("unknown feature class `{s}`")))
    }
}

impl fmt::Display for FeatureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for FeatureClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.slug())
    }
}

impl<'de> Deserialize<'de> for FeatureClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FeatureClass::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Registry entry as written into manifest headers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub id: u8,
    pub name: String,
    pub slug: String,
}

/// The default eight-class registry.
pub fn default_registry() -> Vec<ClassInfo> {
    FeatureClass::all()
        .map(|c| ClassInfo {
            id: c.id(),
            name: c.name().to_owned(),
            slug: c.slug().to_owned(),
        })
        .collect()
}
