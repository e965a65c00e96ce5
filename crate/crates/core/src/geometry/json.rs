use serde::{Deserialize, Serialize};

use super::domain::{DomainSpec, Shape};
use super::point::Point;
use super::primitive::{BoundaryPrimitive, Side};

/// File form of a domain:
/// `{"preset": "ball|annulus|punctured_disk|half_plane|punctured_plane|polygon|polygon_with_holes|custom", ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainJson {
    Ball {
        #[serde(default)]
        center: Point,
        #[serde(default = "one")]
        radius: f64,
    },
    Annulus {
        #[serde(default)]
        center: Point,
        #[serde(alias = "r")]
        inner: f64,
        #[serde(alias = "R")]
        outer: f64,
    },
    PuncturedDisk {
        #[serde(default)]
        center: Point,
        #[serde(default = "one", alias = "R")]
        radius: f64,
    },
    HalfPlane {
        #[serde(default)]
        point: Point,
        #[serde(default = "up")]
        normal: Point,
    },
    PuncturedPlane {
        #[serde(default)]
        puncture: Point,
    },
    Polygon {
        vertices: Vec<Point>,
    },
    PolygonWithHoles {
        outer: Vec<Point>,
        #[serde(default)]
        holes: Vec<Vec<Point>>,
    },
    Custom {
        primitives: Vec<CustomPrimitive>,
        #[serde(default)]
        diameter: Option<f64>,
    },
}

/// A primitive plus its side flag, flattened: `{"type": "circle", ..., "side": "outside"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomPrimitive {
    #[serde(flatten)]
    pub primitive: BoundaryPrimitive,
    #[serde(default)]
    pub side: Side,
}

fn one() -> f64 {
    1.0
}

fn up() -> Point {
    Point::new(0.0, 1.0)
}

impl From<DomainJson> for DomainSpec {
    fn from(json: DomainJson) -> Self {
        match json {
            DomainJson::Ball { center, radius } => DomainSpec::ball(center, radius),
            DomainJson::Annulus { center, inner, outer } => DomainSpec::annulus(center, inner, outer),
            DomainJson::PuncturedDisk { center, radius } => DomainSpec::punctured_disk(center, radius),
            DomainJson::HalfPlane { point, normal } => DomainSpec::half_plane(point, normal),
            DomainJson::PuncturedPlane { puncture } => DomainSpec::punctured_plane(puncture),
            DomainJson::Polygon { vertices } => DomainSpec::polygon(&vertices),
            DomainJson::PolygonWithHoles { outer, holes } => {
                DomainSpec::polygon_with_holes(&outer, &holes)
            }
            DomainJson::Custom { primitives, diameter } => {
                let mut spec = DomainSpec::custom(
                    primitives.into_iter().map(|c| (c.primitive, c.side)).collect(),
                );
                spec.known_diameter = diameter;
                spec
            }
        }
    }
}

impl From<&DomainSpec> for DomainJson {
    fn from(spec: &DomainSpec) -> Self {
        match spec.shape {
            Shape::Ball { center, radius } => DomainJson::Ball { center, radius },
            Shape::Annulus { center, inner, outer } => DomainJson::Annulus { center, inner, outer },
            Shape::PuncturedDisk { center, radius } => DomainJson::PuncturedDisk { center, radius },
            Shape::HalfPlane { point, normal } => DomainJson::HalfPlane { point, normal },
            Shape::PuncturedPlane { puncture } => DomainJson::PuncturedPlane { puncture },
            _ => DomainJson::Custom {
                primitives: spec
                    .primitives
                    .iter()
                    .zip(&spec.orientation)
                    .map(|(&primitive, &side)| CustomPrimitive { primitive, side })
                    .collect(),
                diameter: spec.known_diameter,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;

    #[test]
    fn parses_presets() {
        let ann: DomainJson =
            serde_json::from_str(r#"{"preset": "annulus", "r": 0.1, "R": 10}"#).unwrap();
        let d = Domain::new(ann.into()).unwrap();
        assert_eq!(d.diameter(), 20.0);

        let pd: DomainJson = serde_json::from_str(r#"{"preset": "punctured_disk"}"#).unwrap();
        let d = Domain::new(pd.into()).unwrap();
        assert!(!d.contains(Point::ORIGIN));
    }

    #[test]
    fn parses_custom_primitives() {
        let src = r#"{
            "preset": "custom",
            "primitives": [
                {"type": "circle", "center": [0, 0], "radius": 2},
                {"type": "circle", "center": [0, 0], "radius": 1, "side": "outside"},
                {"type": "puncture", "p": [1.5, 0]}
            ]
        }"#;
        let json: DomainJson = serde_json::from_str(src).unwrap();
        let d = Domain::new(json.into()).unwrap();
        assert!(d.contains(Point::new(0.0, 1.5)));
        assert!(!d.contains(Point::new(1.5, 0.0)));
        assert!(!d.contains(Point::new(0.5, 0.0)));
        assert_eq!(d.diameter(), 4.0);
    }

    #[test]
    fn rejects_unknown_preset() {
        assert!(serde_json::from_str::<DomainJson>(r#"{"preset": "torus"}"#).is_err());
    }
}
