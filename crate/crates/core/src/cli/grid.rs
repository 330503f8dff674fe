//! Grid evaluation of scalar and electromagnetic beams, written as CSV or
//! JSON with deterministic row order.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Axis, Format, RunConfig};
use crate::beams::BeamPoint;
use crate::em::{em_field, split_real_fields};
use crate::error::Result;
use crate::geometry::{ComplexEvent, Event, SpaceVec};

pub const CSV_VERSION: u32 = 1;
pub const SCHEMA_VERSION: u32 = 1;

/// What a grid samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Scalar,
    Em,
}

impl GridKind {
    pub fn command(self) -> &'static str {
        match self {
            GridKind::Scalar => "eval scalar",
            GridKind::Em => "eval em",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            GridKind::Scalar => &["re", "im", "abs"],
            GridKind::Em => &["e1", "e2", "e3", "b1", "b2", "b3", "abs_e", "abs_b"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    /// `(x1, x2, x3, t)`
    pub coords: [f64; 4],
    pub values: Vec<f64>,
    pub status: &'static str,
}

/// Samples in row-major order over the grid axes (first axis slowest).
#[derive(Debug, Clone, Serialize)]
pub struct FieldGrid {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: RunConfig,
    pub axes: Vec<Axis>,
    pub columns: Vec<&'static str>,
    pub warnings: Vec<String>,
    pub samples: Vec<Sample>,
}

fn coords_at(axes: &[Axis], base: [f64; 4], mut index: usize) -> [f64; 4] {
    let mut c = base;
    for axis in axes.iter().rev() {
        c[axis.slot()] = axis.value(index % axis.count);
        index /= axis.count;
    }
    c
}

fn sample(kind: GridKind, cfg: &RunConfig, coords: [f64; 4]) -> Sample {
    let x = Event::new(SpaceVec::new(coords[0], coords[1], coords[2]), coords[3]);
    let y = Event::new(cfg.y, cfg.u);
    let z = ComplexEvent::from_parts(x, y);
    let values: Result<Vec<f64>> = match kind {
        GridKind::Scalar => BeamPoint::new(z)
            .and_then(|bp| bp.wavelet(&cfg.signal(), cfg.kappa))
            .map(|w| vec![w.re, w.im, w.norm()]),
        GridKind::Em => em_field(&z, &cfg.pol, cfg.kappa).map(|f| {
            let (e, b) = split_real_fields(&f);
            let n = |v: [f64; 3]| SpaceVec(v).norm();
            vec![e[0], e[1], e[2], b[0], b[1], b[2], n(e), n(b)]
        }),
    };
    match values {
        Ok(v) if v.iter().all(|x| x.is_finite()) => Sample {
            coords,
            values: v,
            status: "ok",
        },
        _ => Sample {
            coords,
            values: vec![0.0; kind.columns().len()],
            status: "singular",
        },
    }
}

/// Worker pool capped by `PBWAVE_THREADS` when set to a positive integer.
pub fn worker_pool() -> rayon::ThreadPool {
    let threads = std::env::var("PBWAVE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

pub fn evaluate_grid(kind: GridKind, cfg: &RunConfig) -> FieldGrid {
    let base = [cfg.x.0[0], cfg.x.0[1], cfg.x.0[2], cfg.t];
    let total: usize = cfg.grid.iter().map(|a| a.count).product();
    let samples = worker_pool().install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| sample(kind, cfg, coords_at(&cfg.grid, base, i)))
            .collect()
    });
    FieldGrid {
        schema_version: SCHEMA_VERSION,
        command: kind.command(),
        config: cfg.clone(),
        axes: cfg.grid.clone(),
        columns: kind.columns().to_vec(),
        warnings: cfg.timelike_warning().into_iter().collect(),
        samples,
    }
}

impl FieldGrid {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# pbwave {} csv v{}", self.command, CSV_VERSION);
        let config = serde_json::to_string(&self.config).expect("config serializes");
        let _ = writeln!(s, "# config {config}");
        for w in &self.warnings {
            let _ = writeln!(s, "# warning {w}");
        }
        let _ = writeln!(s, "x1,x2,x3,t,{},status", self.columns.join(","));
        for row in &self.samples {
            for v in row.coords.iter().chain(&row.values) {
                let _ = write!(s, "{v:.16e},");
            }
            s.push_str(row.status);
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("grid serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Settings;

    fn cfg(grid: &str) -> RunConfig {
        let mut s = Settings::default();
        s.0.insert("grid".into(), grid.into());
        RunConfig::resolve(&s).unwrap()
    }

    #[test]
    fn row_major_order() {
        let c = cfg("x1=0:1:2,t=0:2:3");
        let g = evaluate_grid(GridKind::Scalar, &c);
        assert_eq!(g.samples.len(), 6);
        let firsts: Vec<[f64; 2]> = g.samples.iter().map(|s| [s.coords[0], s.coords[3]]).collect();
        assert_eq!(firsts, vec![[0.0, 0.0], [0.0, 1.0], [0.0, 2.0], [1.0, 0.0], [1.0, 1.0], [1.0, 2.0]]);
    }

    #[test]
    fn disk_points_are_sentinels() {
        // x3 = 0 row crosses the branch disk of y = (0, 0, 1)
        let c = cfg("x1=-0.5:0.5:3,x3=-1:1:3");
        let g = evaluate_grid(GridKind::Scalar, &c);
        let center = &g.samples[4];
        assert_eq!(center.coords[..3], [0.0, 0.0, 0.0]);
        assert_eq!(center.status, "singular");
        assert_eq!(center.values, vec![0.0; 3]);
        assert!(g.to_csv().contains("singular"));
        let em = evaluate_grid(GridKind::Em, &c);
        assert_eq!(em.samples[4].status, "singular");
    }

    #[test]
    fn csv_layout() {
        let g = evaluate_grid(GridKind::Em, &cfg("x1=1:2:2,x3=1:2:2"));
        let csv = g.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# pbwave eval em csv v1"));
        assert_eq!(lines[2], "x1,x2,x3,t,e1,e2,e3,b1,b2,b3,abs_e,abs_b,status");
        assert_eq!(lines.len(), 3 + 4);
        assert_eq!(lines[3].split(',').count(), 13);
        assert!(!csv.contains('\r'));
        let v: f64 = lines[3].split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(v, g.samples[0].values[0]);
    }
}
