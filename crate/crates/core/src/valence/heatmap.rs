use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{winding_with_jitter, ValenceOptions};
use crate::error::{Error, Result};
use crate::map::DiscMapHandle;
use crate::numerics::ComplexPoint;

/// Cells closer than this to the contour radius are left out of the grid.
pub const RADIUS_MARGIN: f64 = 1e-3;

pub const OUTSIDE_MARKER: i64 = -1;
pub const ERROR_MARKER: i64 = -2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Count(i64),
    Outside,
    Failed,
}

impl Cell {
    pub fn code(self) -> i64 {
        match self {
            Cell::Count(n) => n,
            Cell::Outside => OUTSIDE_MARKER,
            Cell::Failed => ERROR_MARKER,
        }
    }
}

/// Square sampling window `center ± half_width` in both axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: ComplexPoint,
    pub half_width: f64,
}

impl Window {
    pub fn unit() -> Self {
        Window {
            center: Complex64::new(0.0, 0.0),
            half_width: 1.0,
        }
    }
}

/// Row-major grid of valence counts; row 0 is the top edge (largest `y`).
#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapGrid {
    pub resolution: usize,
    pub radius: f64,
    pub window: Window,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeatmapSummary {
    pub min_count: Option<i64>,
    pub max_count: Option<i64>,
    pub valid_cells: usize,
    pub outside_cells: usize,
    pub error_cells: usize,
}

impl HeatmapGrid {
    /// Cell-center coordinate of column `i`, row `j`.
    pub fn point(&self, i: usize, j: usize) -> ComplexPoint {
        cell_center(&self.window, self.resolution, i, j)
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[j * self.resolution + i]
    }

    pub fn distinct_counts(&self) -> BTreeSet<i64> {
        self.cells
            .iter()
            .filter_map(|c| match c {
                Cell::Count(n) => Some(*n),
                _ => None,
            })
            .collect()
    }

    pub fn summary(&self) -> HeatmapSummary {
        let counts = self.distinct_counts();
        HeatmapSummary {
            min_count: counts.first().copied(),
            max_count: counts.last().copied(),
            valid_cells: self.cells.iter().filter(|c| matches!(c, Cell::Count(_))).count(),
            outside_cells: self.cells.iter().filter(|c| matches!(c, Cell::Outside)).count(),
            error_cells: self.cells.iter().filter(|c| matches!(c, Cell::Failed)).count(),
        }
    }

    /// `x,y,count` with `-1` outside the disc and `-2` for failed cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,count\n");
        for j in 0..self.resolution {
            for i in 0..self.resolution {
                let p = self.point(i, j);
                let _ = writeln!(out, "{},{},{}", p.re, p.im, self.get(i, j).code());
            }
        }
        out
    }

    /// Plain (ASCII) PGM, counts clipped to `0..=255`, outside and failed cells 0.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.resolution, self.resolution);
        for j in 0..self.resolution {
            let row: Vec<String> = (0..self.resolution)
                .map(|i| match self.get(i, j) {
                    Cell::Count(n) => n.clamp(0, 255).to_string(),
                    Cell::Outside | Cell::Failed => "0".to_string(),
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn cell_center(window: &Window, resolution: usize, i: usize, j: usize) -> ComplexPoint {
    let n = resolution as f64;
    let x = -1.0 + (2 * i + 1) as f64 / n;
    let y = 1.0 - (2 * j + 1) as f64 / n;
    window.center + Complex64::new(x, y) * window.half_width
}

/// Valence heatmap over `[−1, 1]²`.
pub fn valence_heatmap(
    f: &DiscMapHandle,
    resolution: usize,
    radius: f64,
    opts: &ValenceOptions,
) -> Result<HeatmapGrid> {
    valence_heatmap_in(f, resolution, radius, Window::unit(), opts)
}

/// Valence heatmap over an arbitrary square window. Cells with
/// `|w| ≥ radius − RADIUS_MARGIN` are marked outside.
pub fn valence_heatmap_in(
    f: &DiscMapHandle,
    resolution: usize,
    radius: f64,
    window: Window,
    opts: &ValenceOptions,
) -> Result<HeatmapGrid> {
    if !(16..=4096).contains(&resolution) {
        return Err(Error::invalid(format!("resolution {resolution} outside [16, 4096]")));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::invalid(format!("radius {radius} must lie in (0, 1)")));
    }
    if !(window.half_width > 0.0 && window.half_width.is_finite()) {
        return Err(Error::invalid("window half-width must be positive"));
    }
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let w = cell_center(&window, resolution, idx % resolution, idx / resolution);
            if w.norm() >= 1.0 || w.norm() >= radius - RADIUS_MARGIN {
                return Cell::Outside;
            }
            match winding_with_jitter(f, w, radius, opts) {
                Ok(Some((_, wnd))) => Cell::Count(wnd.count),
                _ => Cell::Failed,
            }
        })
        .collect();
    Ok(HeatmapGrid {
        resolution,
        radius,
        window,
        cells,
    })
}

/// Runs `op` on a dedicated pool of `workers` threads (0 = rayon's default).
pub fn with_workers<R: Send>(workers: usize, op: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}
