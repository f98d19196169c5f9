//! Print and job configuration plus the global geometric tolerance.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance factor: `eps = 1e-9 * bounding-box diagonal`.
pub const EPS_FACTOR: f64 = 1e-9;

/// Global tolerance grid. Every point constructed by intersection is snapped
/// to a grid of spacing `eps` so that repeated constructions of the same
/// point yield identical combinatorics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        assert!(eps > 0.0 && eps.is_finite());
        Tolerance { eps }
    }

    /// Tolerance derived from a bounding-box diagonal.
    pub fn from_diagonal(diag: f64) -> Self {
        let d = if diag > 0.0 { diag } else { 1.0 };
        Tolerance { eps: EPS_FACTOR * d }
    }

    /// Tolerance for a point cloud.
    pub fn for_points<'a, I: IntoIterator<Item = &'a crate::geometry::Point2>>(pts: I) -> Self {
        let (mut lo_x, mut lo_y) = (f64::INFINITY, f64::INFINITY);
        let (mut hi_x, mut hi_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo_x = lo_x.min(p.x);
            lo_y = lo_y.min(p.y);
            hi_x = hi_x.max(p.x);
            hi_y = hi_y.max(p.y);
        }
        if lo_x > hi_x {
            return Tolerance::new(EPS_FACTOR);
        }
        Tolerance::from_diagonal(((hi_x - lo_x).powi(2) + (hi_y - lo_y).powi(2)).sqrt())
    }

    /// Snap a coordinate to the tolerance grid.
    pub fn snap(&self, v: f64) -> f64 {
        (v / self.eps).round() * self.eps
    }

    /// Integer grid key for hashing/unification of nearby points.
    pub fn key(&self, p: crate::geometry::Point2) -> (i64, i64) {
        ((p.x / self.eps).round() as i64, (p.y / self.eps).round() as i64)
    }

    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps
    }
}

/// Printing parameters shared by the slicing and tool-path stages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrintConfig {
    /// Extruder radius `r` in mm.
    pub extruder_radius: f64,
    /// Overhang factor `c` in `[0, 1]`; the continuity margin is `epsilon = c * r`.
    pub overhang_factor: f64,
    /// Segments used when discretizing circles (support loops, SVG arcs).
    pub disk_segments: usize,
    /// Mesh cell size in mm.
    pub cell_size: f64,
    /// Mitered offset distance for the Euler transformation; `None` selects
    /// 0.25x the smallest first skeleton-event time over all faces.
    pub offset: Option<f64>,
}

impl Default for PrintConfig {
    fn default() -> Self {
        PrintConfig {
            extruder_radius: 0.5,
            overhang_factor: 0.5,
            disk_segments: 32,
            cell_size: 5.0,
            offset: None,
        }
    }
}

impl PrintConfig {
    /// `epsilon = c * r`, the allowed overhang between consecutive layers.
    pub fn epsilon(&self) -> f64 {
        self.overhang_factor * self.extruder_radius
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.extruder_radius > 0.0) {
            return Err(Error::Config("extruder radius must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.overhang_factor) {
            return Err(Error::Config("overhang factor must lie in [0, 1]".into()));
        }
        if self.disk_segments < 8 {
            return Err(Error::Config("disk_segments must be at least 8".into()));
        }
        if !(self.cell_size > 0.0) {
            return Err(Error::Config("cell size must be positive".into()));
        }
        if let Some(d) = self.offset {
            if !(d > 0.0) {
                return Err(Error::Config("offset must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Meshing scheme for the projected domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeshScheme {
    Grid,
    Triangles,
}

/// How the planning domain is derived from the union of projected layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainMode {
    /// Convex hull of the union of projected polygons (default).
    ConvexHull,
    /// Raw union of the projected polygons.
    RawUnion,
}

/// Output formats emitted by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Svg,
    Gcode,
}

/// Full job configuration for [`crate::pipeline::run_pipeline`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobConfig {
    pub print: PrintConfig,
    pub scheme: MeshScheme,
    pub domain: DomainMode,
    /// Euler-transformation passes; `None` applies one pass and a second one
    /// whenever the input violates the adjacent-boundary-edge condition.
    pub iterations: Option<usize>,
    /// Worker count for per-layer planning; 1 forces sequential execution.
    pub jobs: usize,
    pub formats: Vec<OutputFormat>,
    /// Filament diameter in mm, used for extrusion lengths in G-code.
    pub filament_diameter: f64,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            print: PrintConfig::default(),
            scheme: MeshScheme::Grid,
            domain: DomainMode::ConvexHull,
            iterations: None,
            jobs: 0, // 0 = use all available threads
            formats: vec![OutputFormat::Svg, OutputFormat::Gcode],
            filament_diameter: 1.75,
        }
    }
}

impl JobConfig {
    pub fn validate(&self) -> Result<()> {
        self.print.validate()?;
        if let Some(m) = self.iterations {
            if m < 1 {
                return Err(Error::Config("iterations must be at least 1".into()));
            }
        }
        if !(self.filament_diameter > 0.0) {
            return Err(Error::Config("filament diameter must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_is_idempotent() {
        let tol = Tolerance::new(1e-7);
        let v = 3.141592653589793;
        assert_eq!(tol.snap(tol.snap(v)), tol.snap(v));
    }

    #[test]
    fn epsilon_is_cr() {
        let cfg = PrintConfig { extruder_radius: 0.35 / 2.0, overhang_factor: 0.5, ..Default::default() };
        assert!((cfg.epsilon() - 0.0875).abs() < 1e-12);
    }

    #[test]
    fn bunny_scale_parameters_validate() {
        // layer height 0.2 mm, extruder diameter 0.35 mm, offset 1 mm
        let cfg = JobConfig {
            print: PrintConfig {
                extruder_radius: 0.175,
                overhang_factor: 0.5,
                cell_size: 5.0,
                offset: Some(1.0),
                ..Default::default()
            },
            ..Default::default()
        };
        cfg.validate().unwrap();
    }

    #[test]
    fn invalid_overhang_rejected() {
        let cfg = PrintConfig { overhang_factor: 1.5, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
