//! Escape-time rasterization of `E` over a rectangle of the complex plane.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::ProbSeq;
use crate::error::{Error, Result};
use crate::spectrum::{in_e, EscapeConfig, EscapeResult};

/// Largest number of pixels a single scan may cover.
pub const PIXEL_BUDGET: u64 = 100_000_000;

/// Rectangle `center ± (width/2, height/2)` sampled at pixel centers.
/// Row 0 is the top (largest imaginary part).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub center_re: f64,
    #[serde(default)]
    pub center_im: f64,
    pub width: f64,
    pub height: f64,
    pub pixels_x: u32,
    pub pixels_y: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(5.0, 800)
    }
}

impl GridSpec {
    /// `[-side/2, side/2]^2` at `pixels x pixels`.
    pub fn square(side: f64, pixels: u32) -> Self {
        Self {
            center_re: 0.0,
            center_im: 0.0,
            width: side,
            height: side,
            pixels_x: pixels,
            pixels_y: pixels,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pixels_x == 0 || self.pixels_y == 0 {
            return Err(Error::InvalidGrid("pixel counts must be positive".into()));
        }
        if !(self.width > 0.0
            && self.height > 0.0
            && self.width.is_finite()
            && self.height.is_finite())
        {
            return Err(Error::InvalidGrid(format!(
                "extent {} x {} must be positive",
                self.width, self.height
            )));
        }
        if !(self.center_re.is_finite() && self.center_im.is_finite()) {
            return Err(Error::InvalidGrid("center must be finite".into()));
        }
        Ok(())
    }

    pub fn pixel_count(&self) -> u64 {
        self.pixels_x as u64 * self.pixels_y as u64
    }

    /// Center of pixel `(i, j)`; rows mirrored about the center are exact conjugates.
    pub fn point(&self, i: u32, j: u32) -> Complex64 {
        let offset = |k: u32, n: u32| (2.0 * k as f64 + 1.0 - n as f64) / (2.0 * n as f64);
        Complex64::new(
            self.center_re + offset(i, self.pixels_x) * self.width,
            self.center_im - offset(j, self.pixels_y) * self.height,
        )
    }
}

/// Per-pixel escape levels, row-major, `INSIDE` for pixels that never escape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterBuffer {
    pub width: u32,
    pub height: u32,
    pub cells: Vec<u32>,
}

impl IterBuffer {
    pub const INSIDE: u32 = u32::MAX;

    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            cells: vec![Self::INSIDE; width as usize * height as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> u32 {
        self.cells[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: u32) {
        self.cells[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn is_inside(&self, x: u32, y: u32) -> bool {
        self.get(x, y) == Self::INSIDE
    }

    pub fn inside_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == Self::INSIDE).count()
    }
}

fn cell_value(result: EscapeResult) -> u32 {
    match result {
        EscapeResult::Inside => IterBuffer::INSIDE,
        EscapeResult::Escaped(k) => k as u32,
    }
}

fn check_scan(grid: &GridSpec, cfg: &EscapeConfig) -> Result<()> {
    grid.validate()?;
    cfg.validate()?;
    if grid.pixel_count() > PIXEL_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: grid.pixel_count(),
            limit: PIXEL_BUDGET,
        });
    }
    Ok(())
}

/// Runs the escape test at every pixel, rows in parallel.
pub fn scan_grid(grid: &GridSpec, p: &ProbSeq, cfg: &EscapeConfig) -> Result<IterBuffer> {
    check_scan(grid, cfg)?;
    let mut buf = IterBuffer::new(grid.pixels_x, grid.pixels_y);
    buf.cells
        .par_chunks_mut(grid.pixels_x as usize)
        .enumerate()
        .for_each(|(j, row)| {
            for (i, cell) in row.iter_mut().enumerate() {
                *cell = cell_value(in_e(grid.point(i as u32, j as u32), p, cfg));
            }
        });
    Ok(buf)
}

/// `scan_grid` on a dedicated pool of `threads` workers (0 picks the default).
pub fn scan_grid_with_threads(
    grid: &GridSpec,
    p: &ProbSeq,
    cfg: &EscapeConfig,
    threads: usize,
) -> Result<IterBuffer> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| scan_grid(grid, p, cfg))
}

/// Sequential reference scan.
pub fn scan_grid_sequential(
    grid: &GridSpec,
    p: &ProbSeq,
    cfg: &EscapeConfig,
) -> Result<IterBuffer> {
    check_scan(grid, cfg)?;
    let mut buf = IterBuffer::new(grid.pixels_x, grid.pixels_y);
    for j in 0..grid.pixels_y {
        for i in 0..grid.pixels_x {
            buf.set(i, j, cell_value(in_e(grid.point(i, j), p, cfg)));
        }
    }
    Ok(buf)
}

/// Inside color plus a hue ramp indexed by escape level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub inside: [u8; 3],
    /// Hue advance per escape level, in degrees.
    pub hue_step: u16,
}

impl Default for Palette {
    /// Black inside; level `k` gets hue `17 k` degrees at full saturation and value.
    fn default() -> Self {
        Self {
            inside: [0, 0, 0],
            hue_step: 17,
        }
    }
}

impl Palette {
    pub fn color(&self, cell: u32) -> [u8; 3] {
        if cell == IterBuffer::INSIDE {
            return self.inside;
        }
        let hue = (cell as u64 * self.hue_step as u64 % 360) as u32;
        hue_to_rgb(hue)
    }
}

/// Fully saturated color of integer hue `h` in `[0, 360)`.
fn hue_to_rgb(h: u32) -> [u8; 3] {
    let sector = h / 60;
    let frac = h % 60;
    let rise = (frac * 255 / 60) as u8;
    let fall = 255 - rise;
    match sector {
        0 => [255, rise, 0],
        1 => [fall, 255, 0],
        2 => [0, 255, rise],
        3 => [0, fall, 255],
        4 => [rise, 0, 255],
        _ => [255, 0, fall],
    }
}

/// RGB triples, row-major.
pub fn rgb_bytes(buf: &IterBuffer, palette: &Palette) -> Vec<u8> {
    buf.cells.iter().flat_map(|&c| palette.color(c)).collect()
}

/// Binary PPM: `P6\n<w> <h>\n255\n` then row-major RGB.
pub fn write_ppm<W: Write>(buf: &IterBuffer, palette: &Palette, mut out: W) -> Result<()> {
    write!(out, "P6\n{} {}\n255\n", buf.width, buf.height)?;
    out.write_all(&rgb_bytes(buf, palette))?;
    Ok(())
}

/// Rows `x,y,value`, row-major, `-1` for inside, no header.
pub fn write_csv<W: Write>(buf: &IterBuffer, mut out: W) -> Result<()> {
    for y in 0..buf.height {
        for x in 0..buf.width {
            let v = buf.get(x, y);
            if v == IterBuffer::INSIDE {
                writeln!(out, "{x},{y},-1")?;
            } else {
                writeln!(out, "{x},{y},{v}")?;
            }
        }
    }
    Ok(())
}

/// Inverse of `write_csv`; dimensions come from the largest coordinates.
pub fn read_csv<R: BufRead>(input: R) -> Result<IterBuffer> {
    let mut rows = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: {line:?}", n + 1));
        let mut fields = line.split(',');
        let mut next = || fields.next().map(str::trim).ok_or_else(bad);
        let x: u32 = next()?.parse().map_err(|_| bad())?;
        let y: u32 = next()?.parse().map_err(|_| bad())?;
        let v: i64 = next()?.parse().map_err(|_| bad())?;
        let value = match v {
            -1 => IterBuffer::INSIDE,
            v if (0..u32::MAX as i64).contains(&v) => v as u32,
            _ => return Err(bad()),
        };
        rows.push((x, y, value));
    }
    let width = rows.iter().map(|r| r.0 + 1).max().unwrap_or(0);
    let height = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
    if rows.len() != width as usize * height as usize {
        return Err(Error::Parse(format!(
            "{} rows do not fill a {width} x {height} grid",
            rows.len()
        )));
    }
    let mut buf = IterBuffer::new(width, height);
    for (x, y, v) in rows {
        buf.set(x, y, v);
    }
    Ok(buf)
}
