//! Periodic meshes on the unit circle `[0, 1)`.

use crate::error::{Error, Result};

const SNAP: f64 = 4.0 * f64::EPSILON;

/// Reduces `x` to the representative in `[0, 1)` of its class modulo 1.
pub fn wrap(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(wrap_unchecked(x))
}

#[inline]
pub(crate) fn wrap_unchecked(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Strictly increasing node set `0 = x_0 < ... < x_{M-1} < 1` with `x_M = 1` implied.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGrid {
    nodes: Vec<f64>,
    widths: Vec<f64>,
    h_max: f64,
    uniform: bool,
}

impl PeriodicGrid {
    /// Equispaced grid `x_j = j / m`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 4 {
            return Err(Error::TooFewNodes(m));
        }
        let h = 1.0 / m as f64;
        Ok(Self {
            nodes: (0..m).map(|j| j as f64 * h).collect(),
            widths: vec![h; m],
            h_max: h,
            uniform: true,
        })
    }

    /// Grid from explicit node positions. A node set that happens to be
    /// equispaced is still treated as non-uniform for location purposes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        let m = nodes.len();
        if m < 4 {
            return Err(Error::TooFewNodes(m));
        }
        if let Some(&x) = nodes.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(x));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidNodes(format!("x_0 = {} must be 0", nodes[0])));
        }
        if nodes[m - 1] >= 1.0 {
            return Err(Error::InvalidNodes(format!("x_(M-1) = {} must be < 1", nodes[m - 1])));
        }
        let mut widths = Vec::with_capacity(m);
        for j in 0..m {
            let next = if j + 1 < m { nodes[j + 1] } else { 1.0 };
            let w = next - nodes[j];
            if w <= 0.0 {
                return Err(Error::InvalidNodes(format!("width h_{j} = {w} is not positive")));
            }
            widths.push(w);
        }
        let h_max = widths.iter().copied().fold(0.0, f64::max);
        Ok(Self { nodes, widths, h_max, uniform: false })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    #[inline]
    pub fn width(&self, j: usize) -> f64 {
        self.widths[j]
    }

    /// Largest cell width `h`.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Index of the cell containing `wrap(x)`.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        Ok(self.locate_wrapped(wrap_unchecked(x)))
    }

    /// Cell index and local coordinate `s in [0, 1)` of `x`.
    #[inline]
    pub(crate) fn locate_local(&self, x: f64) -> (usize, f64) {
        let y = wrap_unchecked(x);
        let j = self.locate_wrapped(y);
        let w = self.widths[j];
        let d = y - self.nodes[j];
        // snap feet that miss a node by a few ulps: derivatives of the cell
        // polynomial amplify such offsets by 1/h
        if d < SNAP {
            (j, 0.0)
        } else if w - d < SNAP {
            ((j + 1) % self.nodes.len(), 0.0)
        } else {
            (j, (d / w).min(1.0))
        }
    }

    #[inline]
    fn locate_wrapped(&self, y: f64) -> usize {
        let m = self.nodes.len();
        if self.uniform {
            let j = (y * m as f64).floor() as usize;
            // guard against rounding at the upper edge of a cell
            let j = j.min(m - 1);
            if y < self.nodes[j] {
                j - 1
            } else if j + 1 < m && y >= self.nodes[j + 1] {
                j + 1
            } else {
                j
            }
        } else {
            // number of nodes <= y, minus one
            self.nodes.partition_point(|&xn| xn <= y) - 1
        }
    }
}
