use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform cell-centred `N × N` grid on `[-S, S]²`, `h = 2S/N`.
///
/// Node `p = i·N + j` sits at `(-S + (i + ½)h, -S + (j + ½)h)`: the first
/// index runs along `u1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarGrid {
    half_width: f64,
    n: usize,
}

impl PlanarGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::Parameter(alloc::format!(
                "grid size must be even and at least 2, got {n}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Parameter("grid half-width must be positive".into()));
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_per_side(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    pub fn node(&self, p: usize) -> [f64; 2] {
        [self.coordinate(p / self.n), self.coordinate(p % self.n)]
    }

    pub fn nodes(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|p| self.node(p)).collect()
    }

    pub fn sample<F: FnMut([f64; 2]) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.len()).map(|p| f(self.node(p))).collect()
    }

    /// The centred square window spanning `fraction` of the grid width.
    pub fn window(&self, fraction: f64) -> Result<Window> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::Parameter("window fraction must lie in (0, 1]".into()));
        }
        let width = (libm::round(self.n as f64 * fraction) as usize).max(2);
        let width = width + width % 2;
        if width > self.n {
            return Err(Error::Parameter("window wider than grid".into()));
        }
        Ok(Window {
            grid: *self,
            start: (self.n - width) / 2,
            width,
        })
    }
}

/// A centred square block of grid nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    grid: PlanarGrid,
    start: usize,
    width: usize,
}

impl Window {
    pub fn grid(&self) -> &PlanarGrid {
        &self.grid
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.width * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    /// Half-width of the window in chart units (to the outer cell edges).
    pub fn half_extent(&self) -> f64 {
        0.5 * self.width as f64 * self.grid.spacing()
    }

    /// Grid indices of the window nodes, row-major.
    pub fn indices(&self) -> Vec<usize> {
        let n = self.grid.n_per_side();
        let mut out = Vec::with_capacity(self.len());
        for i in self.start..self.start + self.width {
            for j in self.start..self.start + self.width {
                out.push(i * n + j);
            }
        }
        out
    }

    pub fn contains(&self, p: usize) -> bool {
        let n = self.grid.n_per_side();
        let (i, j) = (p / n, p % n);
        let r = self.start..self.start + self.width;
        r.contains(&i) && r.contains(&j)
    }
}
