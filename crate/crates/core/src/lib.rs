//! Online exploration of simple rectilinear polygons by a robot that only
//! sees at discrete scan points.

pub mod bounds;
pub mod coord;
pub mod corpus;
pub mod extensions;
pub mod geom;
pub mod knowledge;
pub mod niche;
pub mod simulator;
pub mod strategies;
pub mod visibility;

pub use coord::Coord;
pub use geom::{
    l1_distance, validate_polygon, Dir, GeodesicGrid, GeomError, Location, PathPolyline, Point, Polygon, RectPolygon,
};
