//! Uniform rectangular parameter lattices with optional periodic axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest per-axis node count: central second differences need a two-node margin.
pub const MIN_AXIS_COUNT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub periodic: bool,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count, periodic: false }
    }

    /// A periodic axis over `[min, max)`; `max` itself is not a node.
    pub fn periodic(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count, periodic: true }
    }

    /// Axis of `2 * half + 1` nodes centred on `center` with spacing `h`.
    pub fn centered(center: f64, h: f64, half: usize) -> Self {
        let w = h * half as f64;
        Self::new(center - w, center + w, 2 * half + 1)
    }

    pub fn step(&self) -> f64 {
        if self.periodic {
            (self.max - self.min) / self.count as f64
        } else {
            (self.max - self.min) / (self.count - 1) as f64
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        if !self.periodic && i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.max <= self.min {
            return Err(Error::InvalidGrid(format!(
                "axis bounds must be finite with max > min, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.count < MIN_AXIS_COUNT {
            return Err(Error::InvalidGrid(format!(
                "axis count {} below minimum {MIN_AXIS_COUNT}",
                self.count
            )));
        }
        Ok(())
    }
}

/// Row-major lattice; the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one axis".into()));
        }
        for a in &axes {
            a.validate()?;
        }
        Ok(Self { axes })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn steps(&self) -> Vec<f64> {
        self.axes.iter().map(Axis::step).collect()
    }

    pub fn index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dim());
        multi
            .iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, a)| acc * a.count + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = flat % a.count;
            flat /= a.count;
        }
        out
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.coord(i))
            .collect()
    }

    /// Flat index of the node `delta` cells away along `axis`, wrapping periodic axes.
    pub fn offset(&self, flat: usize, axis: usize, delta: isize) -> Option<usize> {
        let mut multi = self.multi_index(flat);
        let a = &self.axes[axis];
        let i = multi[axis] as isize + delta;
        let count = a.count as isize;
        multi[axis] = if a.periodic {
            i.rem_euclid(count) as usize
        } else if (0..count).contains(&i) {
            i as usize
        } else {
            return None;
        };
        Some(self.index(&multi))
    }

    /// True when the node is at least `margin` cells from every non-periodic boundary.
    pub fn is_interior(&self, flat: usize, margin: usize) -> bool {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .all(|(&i, a)| a.periodic || (i >= margin && i + margin < a.count))
    }

    pub fn require_interior(&self, flat: usize, margin: usize) -> Result<()> {
        if self.is_interior(flat, margin) {
            Ok(())
        } else {
            Err(Error::BoundaryPoint { node: self.multi_index(flat) })
        }
    }

    /// Flat index of the node nearest to `point` (coordinates per axis).
    pub fn nearest(&self, point: &[f64]) -> usize {
        let multi: Vec<usize> = point
            .iter()
            .zip(&self.axes)
            .map(|(&p, a)| {
                let i = ((p - a.min) / a.step()).round();
                if a.periodic {
                    (i as isize).rem_euclid(a.count as isize) as usize
                } else {
                    i.clamp(0.0, (a.count - 1) as f64) as usize
                }
            })
            .collect();
        self.index(&multi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let g = Grid::new(vec![Axis::new(0.0, 1.0, 5), Axis::periodic(0.0, 1.0, 6)]).unwrap();
        for k in 0..g.len() {
            assert_eq!(g.index(&g.multi_index(k)), k);
        }
        assert_eq!(g.len(), 30);
    }

    #[test]
    fn periodic_offset_wraps() {
        let g = Grid::new(vec![Axis::periodic(0.0, 1.0, 8)]).unwrap();
        assert_eq!(g.offset(0, 0, -1), Some(7));
        assert_eq!(g.offset(7, 0, 1), Some(0));
        let h = Grid::new(vec![Axis::new(0.0, 1.0, 8)]).unwrap();
        assert_eq!(h.offset(0, 0, -1), None);
    }

    #[test]
    fn rejects_small_axes() {
        assert!(Grid::new(vec![Axis::new(0.0, 1.0, 4)]).is_err());
        assert!(Grid::new(vec![Axis::new(1.0, 0.0, 9)]).is_err());
    }

    #[test]
    fn interior_margin() {
        let g = Grid::new(vec![Axis::new(0.0, 1.0, 5)]).unwrap();
        assert!(!g.is_interior(1, 2));
        assert!(g.is_interior(2, 2));
        assert!(g.require_interior(4, 1).is_err());
    }

    #[test]
    fn centered_axis_hits_center() {
        let a = Axis::centered(0.3, 0.01, 4);
        assert!((a.coord(4) - 0.3).abs() < 1e-15);
        assert!((a.step() - 0.01).abs() < 1e-15);
    }
}
