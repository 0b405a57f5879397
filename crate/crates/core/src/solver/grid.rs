use crate::error::{Error, Result};

/// Uniform node grid on `[x_min, x_max]` with `-1`, `0` and `1` on nodes.
///
/// The spacing is `h = 1/m` for an integer `m` (nodes per unit length), so
/// node coordinates are computed as `k / m` and land exactly on every
/// integer point of the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub h: f64,
    per_unit: usize,
    zero_index: usize,
}

fn near_integer(v: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() <= 1e-9 * r.abs().max(1.0)).then_some(r as i64)
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || n_cells == 0 {
            return Err(Error::InvalidGrid("bounds must be finite and n_cells > 0".into()));
        }
        if !(x_min < -1.0 && x_max > 1.0) {
            return Err(Error::InvalidGrid(format!(
                "need x_min < -1 < 0 < 1 < x_max, got [{x_min}, {x_max}]"
            )));
        }
        let h = (x_max - x_min) / n_cells as f64;
        let per_unit = near_integer(1.0 / h)
            .filter(|&m| m > 0)
            .ok_or_else(|| Error::InvalidGrid(format!("spacing {h} does not divide 1")))?;
        let zero_index = near_integer(-x_min * per_unit as f64)
            .filter(|&z| z > 0 && (z as usize) < n_cells)
            .ok_or_else(|| Error::InvalidGrid(format!("x = 0 is not a node of [{x_min}, {x_max}]")))?;
        Ok(Self {
            x_min,
            x_max,
            n_cells,
            h: 1.0 / per_unit as f64,
            per_unit: per_unit as usize,
            zero_index: zero_index as usize,
        })
    }

    /// Grid on `[x_min, x_max]` with spacing `h` (which must divide 1).
    pub fn with_spacing(x_min: f64, x_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        let n = near_integer((x_max - x_min) / h)
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidGrid(format!("h = {h} does not tile [{x_min}, {x_max}]")))?;
        Self::new(x_min, x_max, n as usize)
    }

    /// Number of nodes, `n_cells + 1`.
    pub fn len(&self) -> usize {
        self.n_cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes_per_unit(&self) -> usize {
        self.per_unit
    }

    pub fn zero_index(&self) -> usize {
        self.zero_index
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.zero_index as f64) / self.per_unit as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Index of the node at `x`, or [`Error::OffGrid`].
    pub fn index_of(&self, x: f64) -> Result<usize> {
        let k = near_integer(x * self.per_unit as f64).ok_or(Error::OffGrid { x })?;
        let i = self.zero_index as i64 + k;
        if i < 0 || i as usize > self.n_cells {
            return Err(Error::OffGrid { x });
        }
        Ok(i as usize)
    }

    /// Index of the mirror node `-x_i`, when it lies in the grid.
    pub fn mirror(&self, i: usize) -> Option<usize> {
        let j = 2 * self.zero_index as i64 - i as i64;
        (j >= 0 && j as usize <= self.n_cells).then_some(j as usize)
    }

    pub fn is_symmetric(&self) -> bool {
        2 * self.zero_index == self.n_cells
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.x(i))).collect()
    }
}

impl Default for Grid1D {
    /// `[-5, 5]` with `h = 0.05`.
    fn default() -> Self {
        Self::new(-5.0, 5.0, 200).expect("default grid is valid")
    }
}
