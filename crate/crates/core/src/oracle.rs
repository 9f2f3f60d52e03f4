//! Floating-point cross-check of the tile measure: the level-`k` digit
//! points `Σ_{i≤k} A^{-i} d_{u_i}` are points of the tile, and every point of
//! the tile lies within `‖A^{-k}‖·diam` of one of them, so counting the grid
//! cells they hit approximates the Lebesgue measure.

use std::collections::HashSet;
use std::io::Write;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::zn::ExpandingSystem;

pub const DEFAULT_POINT_CAP: usize = 1 << 24;
pub const MAX_RESOLUTION: usize = 4096;

/// All `m^k` truncated digit expansions, in lexicographic digit order.
#[derive(Debug, Clone)]
pub struct DigitCloud {
    pub level: u32,
    pub dimension: usize,
    /// Row-major, `dimension` coordinates per point.
    pub coords: Vec<f64>,
}

impl DigitCloud {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dimension)
    }
}

pub fn sample_digit_points(sys: &ExpandingSystem, k: u32) -> Result<DigitCloud> {
    sample_digit_points_with_cap(sys, k, DEFAULT_POINT_CAP)
}

pub fn sample_digit_points_with_cap(sys: &ExpandingSystem, k: u32, cap: usize) -> Result<DigitCloud> {
    let m = sys.digit_count();
    let n = sys.dimension();
    let count = (m as u128).checked_pow(k).filter(|&c| c <= cap as u128).ok_or(Error::Cap {
        what: "digit points",
        cap,
    })? as usize;
    let inv = sys.inverse_f64();
    let digits: Vec<Vec<f64>> = (0..m)
        .map(|i| sys.digit(i).iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    // P_j = { A^{-1}(d + q) : d ∈ D, q ∈ P_{j-1} }, outer loop over the
    // leading digit, so the order is lexicographic in (u_1, ..., u_k).
    let mut coords = vec![0.0; n];
    for _ in 0..k {
        let prev = std::mem::take(&mut coords);
        coords.reserve(prev.len() * m);
        let mut y = vec![0.0; n];
        for d in &digits {
            for q in prev.chunks_exact(n) {
                for (yi, (di, qi)) in y.iter_mut().zip(d.iter().zip(q)) {
                    *yi = di + qi;
                }
                for row in &inv {
                    coords.push(row.iter().zip(&y).map(|(a, b)| a * b).sum());
                }
            }
        }
    }
    debug_assert_eq!(coords.len(), count * n);
    Ok(DigitCloud {
        level: k,
        dimension: n,
        coords,
    })
}

/// Upper bound on the diameter of a level-`k` piece of the tile:
/// `‖A^{-k}‖∞ · C · max‖d - d'‖∞`.
pub fn piece_diameter_bound(sys: &ExpandingSystem, k: u32) -> f64 {
    to_f64(&sys.inverse_power_norm(k)) * sys.nucleus_norm_bound()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    /// Fill-weighted cell count times `cell^n`.
    pub estimate: f64,
    /// Plain count of hit cells times `cell^n`; an upper bound up to the
    /// piece diameter.
    pub box_count: f64,
    pub cell: f64,
    pub piece_diameter_bound: f64,
    pub level: u32,
    pub points: usize,
    pub cells: usize,
    pub interior_cells: usize,
}

/// Box-counting estimate of the Lebesgue measure of the tile.
///
/// The uniform digit measure on the tile is normalized Lebesgue measure, so
/// a cell inside the tile holds about the same number of digit points as any
/// other. A cell whose neighbors are all hit counts as interior; the mean
/// interior count is the count of a full cell, and every hit cell
/// contributes `cell^n · min(1, count / full)`. Without interior cells the
/// plain box count is returned.
pub fn estimate_lebesgue(sys: &ExpandingSystem, k: u32, cell: f64) -> Result<Estimate> {
    let bound = piece_diameter_bound(sys, k);
    if !(cell.is_finite() && cell > bound) {
        return Err(Error::CellTooSmall { cell, minimal: bound });
    }
    let cloud = sample_digit_points(sys, k)?;
    let n = cloud.dimension;
    let mut keys: Vec<Vec<i64>> = cloud
        .points()
        .map(|p| p.iter().map(|x| (x / cell).floor() as i64).collect())
        .collect();
    keys.sort_unstable();
    let mut counts: Vec<(Vec<i64>, usize)> = Vec::new();
    for key in keys {
        match counts.last_mut() {
            Some((last, c)) if *last == key => *c += 1,
            _ => counts.push((key, 1)),
        }
    }
    let volume = cell.powi(n as i32);
    let occupied: HashSet<&[i64]> = counts.iter().map(|(k, _)| k.as_slice()).collect();
    let offsets = neighbor_offsets(n);
    let mut probe = vec![0i64; n];
    let interior: Vec<usize> = counts
        .iter()
        .filter(|(key, _)| {
            offsets.iter().all(|off| {
                for (p, (a, b)) in probe.iter_mut().zip(key.iter().zip(off)) {
                    *p = a + b;
                }
                occupied.contains(probe.as_slice())
            })
        })
        .map(|(_, c)| *c)
        .collect();
    let box_count = counts.len() as f64 * volume;
    let estimate = if interior.is_empty() {
        box_count
    } else {
        let full = interior.iter().sum::<usize>() as f64 / interior.len() as f64;
        counts.iter().map(|(_, c)| (*c as f64 / full).min(1.0)).sum::<f64>() * volume
    };
    Ok(Estimate {
        estimate,
        box_count,
        cell,
        piece_diameter_bound: bound,
        level: k,
        points: cloud.len(),
        cells: counts.len(),
        interior_cells: interior.len(),
    })
}

/// The `3^n - 1` nonzero vectors with entries in `{-1, 0, 1}`.
fn neighbor_offsets(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                [-1i64, 0, 1].into_iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

/// Occupancy grid over the bounding box of the digit points of a planar
/// tile. Row 0 is the top (largest `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub occupied: Vec<bool>,
}

impl Raster {
    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&b| b).count()
    }

    /// Occupied pixels times pixel area.
    pub fn area(&self) -> f64 {
        let pw = (self.max[0] - self.min[0]) / self.width as f64;
        let ph = (self.max[1] - self.min[1]) / self.height as f64;
        self.occupied_count() as f64 * pw * ph
    }

    /// Binary PGM; occupied pixels are black.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.occupied.iter().map(|&b| if b { 0 } else { 255 }).collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    /// One line per row of `0`/`1` values.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for row in self.occupied.chunks(self.width) {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub fn raster(sys: &ExpandingSystem, k: u32, resolution: usize) -> Result<Raster> {
    if sys.dimension() != 2 {
        return Err(Error::UnsupportedDimension(sys.dimension()));
    }
    if resolution == 0 || resolution > MAX_RESOLUTION {
        return Err(Error::Cap {
            what: "raster resolution",
            cap: MAX_RESOLUTION,
        });
    }
    let cloud = sample_digit_points(sys, k)?;
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for p in cloud.points() {
        for c in 0..2 {
            min[c] = min[c].min(p[c]);
            max[c] = max[c].max(p[c]);
        }
    }
    // Keep degenerate boxes usable.
    for c in 0..2 {
        if max[c] - min[c] <= 0.0 {
            max[c] = min[c] + 1.0;
        }
    }
    let r = resolution;
    let mut occupied = vec![false; r * r];
    for p in cloud.points() {
        let col = (((p[0] - min[0]) / (max[0] - min[0]) * r as f64) as usize).min(r - 1);
        let up = (((p[1] - min[1]) / (max[1] - min[1]) * r as f64) as usize).min(r - 1);
        occupied[(r - 1 - up) * r + col] = true;
    }
    Ok(Raster {
        width: r,
        height: r,
        min,
        max,
        occupied,
    })
}
