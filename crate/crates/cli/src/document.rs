//! The JSON space description format.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "points": [[0], [1], [2]],
//!   "adjacency": {"type": "cu", "u": 1},
//!   "metric": {"type": "lp", "p": "1"},
//!   "maps": [{"name": "T", "pairs": [[[0], [1]], [[1], [1]], [[2], [1]]]}]
//! }
//! ```
//!
//! Exact rationals are written as `"n/d"` strings; bare JSON integers are
//! accepted wherever a rational is, float literals never are. `"points": "Z"`
//! denotes all of Z and admits only affine maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use digitop::mapkit::{validate_selfmap, AffineMapZ, RawPoint};
use digitop::scalar::{format_rational, parse_rational};
use digitop::{Adjacency, DigitalImage, DigitalMetricSpace, MetricSpec, Point, Rational, SelfMap};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub dimension: usize,
    pub points: PointsSpec,
    pub adjacency: AdjacencyDoc,
    pub metric: MetricDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PointsSpec {
    Integers(WholeLine),
    List(Vec<Vec<i64>>),
}

/// The literal `"Z"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WholeLine {
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdjacencyDoc {
    Cu { u: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricDoc {
    Lp { p: RationalText },
    ShortestPath,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(Vec<Coord>, Vec<Coord>)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine: Option<AffineDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineDoc {
    pub p: i64,
    pub q: i64,
}

/// A rational always written as a string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

/// A map coordinate: an integer, or a rational string such as `"3/2"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coord(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(self.0.to_integer())
        } else {
            s.serialize_str(&format_rational(&self.0))
        }
    }
}

struct PointsVisitor;

impl<'de> Visitor<'de> for PointsVisitor {
    type Value = PointsSpec;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of integer coordinate lists, or \"Z\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<PointsSpec, E> {
        match v {
            "Z" => Ok(PointsSpec::Integers(WholeLine::Z)),
            _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
        }
    }

    fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<PointsSpec, A::Error> {
        let mut out = Vec::new();
        while let Some(p) = seq.next_element::<Vec<i64>>()? {
            out.push(p);
        }
        Ok(PointsSpec::List(out))
    }
}

impl<'de> Deserialize<'de> for PointsSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(PointsVisitor)
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string \"n/d\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        i64::try_from(v).map(Rational::from_integer).map_err(|_| E::custom(format!("{v} is out of range")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
        Err(E::custom(format!("float literal {v} is not exact; write rationals as \"n/d\" strings")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse_rational(v).ok_or_else(|| E::custom(format!("{v:?} is not a rational of the form \"n/d\"")))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor).map(RationalText)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor).map(Coord)
    }
}

/// A map as loaded from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadedMap {
    Table(SelfMap),
    Affine(AffineMapZ),
}

/// The space part of a loaded document.
#[derive(Clone, Debug)]
pub enum LoadedSpace {
    Finite(DigitalMetricSpace),
    /// All of Z with `|x - y|`.
    Integers,
}

#[derive(Clone, Debug)]
pub struct LoadedDocument {
    pub space: LoadedSpace,
    pub maps: BTreeMap<String, LoadedMap>,
}

impl LoadedDocument {
    pub fn finite_space(&self) -> Result<&DigitalMetricSpace, CliError> {
        match &self.space {
            LoadedSpace::Finite(s) => Ok(s),
            LoadedSpace::Integers => Err(CliError::input("this command needs a finite point list, not \"Z\"")),
        }
    }

    pub fn map(&self, name: &str) -> Result<&LoadedMap, CliError> {
        self.maps.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.maps.keys().map(String::as_str).collect();
            CliError::input(format!("no map named {name:?} (document has: {})", known.join(", ")))
        })
    }

    pub fn table_map(&self, name: &str) -> Result<&SelfMap, CliError> {
        match self.map(name)? {
            LoadedMap::Table(m) => Ok(m),
            LoadedMap::Affine(_) => Err(CliError::input(format!("map {name:?} is affine; this command needs a finite table"))),
        }
    }
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn metric_spec(&self) -> Result<MetricSpec, CliError> {
        Ok(match self.metric {
            MetricDoc::Lp { p } if p.0 < Rational::from_integer(1) => {
                return Err(CliError::input(format!("metric.p: {} is below 1", format_rational(&p.0))));
            }
            MetricDoc::Lp { p } => MetricSpec::Lp(p.0),
            MetricDoc::ShortestPath => MetricSpec::ShortestPath,
        })
    }

    /// Validates the document into a metric space and named maps.
    pub fn load(&self) -> Result<LoadedDocument, CliError> {
        if self.dimension == 0 {
            return Err(CliError::input("dimension: must be at least 1"));
        }
        let AdjacencyDoc::Cu { u } = self.adjacency;
        if u == 0 || u > self.dimension {
            return Err(CliError::input(format!("adjacency.u: {u} is outside 1..={}", self.dimension)));
        }
        let metric = self.metric_spec()?;
        let space = match &self.points {
            PointsSpec::Integers(WholeLine::Z) => {
                if self.dimension != 1 {
                    return Err(CliError::input("points: \"Z\" requires dimension 1"));
                }
                LoadedSpace::Integers
            }
            PointsSpec::List(list) => {
                let mut points = Vec::with_capacity(list.len());
                for (i, coords) in list.iter().enumerate() {
                    if coords.len() != self.dimension {
                        return Err(CliError::input(format!(
                            "points[{i}]: has {} coordinates, expected {}",
                            coords.len(),
                            self.dimension
                        )));
                    }
                    points.push(Point::new(coords.clone()).map_err(|e| CliError::input(format!("points[{i}]: {e}")))?);
                }
                let image = DigitalImage::new(points, Adjacency::Cu(u)).map_err(|e| CliError::input(format!("points: {e}")))?;
                LoadedSpace::Finite(DigitalMetricSpace::new(image, metric).map_err(|e| CliError::input(format!("metric: {e}")))?)
            }
        };
        let mut maps = BTreeMap::new();
        for (i, m) in self.maps.iter().enumerate() {
            let at = |msg: String| CliError::input(format!("maps[{i}] ({:?}): {msg}", m.name));
            let loaded = match (&m.pairs, &m.affine, &space) {
                (Some(_), Some(_), _) | (None, None, _) => return Err(at("give exactly one of \"pairs\" and \"affine\"".into())),
                (Some(_), None, LoadedSpace::Integers) => return Err(at("a table map needs a finite point list".into())),
                (None, Some(_), LoadedSpace::Finite(_)) => return Err(at("affine maps are only allowed on \"Z\"".into())),
                (None, Some(a), LoadedSpace::Integers) => LoadedMap::Affine(AffineMapZ::new(a.p, a.q)),
                (Some(pairs), None, LoadedSpace::Finite(s)) => {
                    let raw: Vec<(RawPoint, RawPoint)> = pairs
                        .iter()
                        .map(|(x, y)| (RawPoint(x.iter().map(|c| c.0).collect()), RawPoint(y.iter().map(|c| c.0).collect())))
                        .collect();
                    let table = validate_selfmap(Arc::clone(s.image_arc()), &raw).map_err(|e| at(e.to_string()))?;
                    LoadedMap::Table(table)
                }
            };
            if maps.insert(m.name.clone(), loaded).is_some() {
                return Err(at("duplicate map name".into()));
            }
        }
        Ok(LoadedDocument { space, maps })
    }
}
