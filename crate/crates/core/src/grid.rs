//! Grid geometry.
//!
//! Cells are addressed by a flat row-major index `row * width + col`, where
//! row 0 is the bottom row and column 0 the leftmost column. Every dense
//! per-cell array in the crate (rewards, fuel, burning flags, weights) uses
//! this layout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which cells count as adjacent for fire transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Neighborhood {
    #[default]
    #[serde(rename = "four", alias = "four-connected", alias = "4")]
    FourConnected,
    #[serde(rename = "eight", alias = "eight-connected", alias = "8")]
    EightConnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    width: usize,
    height: usize,
    neighborhood: Neighborhood,
}

impl GridSpec {
    pub fn new(width: usize, height: usize, neighborhood: Neighborhood) -> Result<Self> {
        if width == 0 {
            return Err(Error::config("k", "grid width must be at least 1"));
        }
        if height == 0 {
            return Err(Error::config("height", "grid height must be at least 1"));
        }
        Ok(Self { width, height, neighborhood })
    }

    /// A `k x k` four-connected grid.
    pub fn square(k: usize) -> Result<Self> {
        Self::new(k, k, Neighborhood::FourConnected)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn neighborhood(&self) -> Neighborhood {
        self.neighborhood
    }

    pub fn with_neighborhood(self, neighborhood: Neighborhood) -> Self {
        Self { neighborhood, ..self }
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell(&self, col: usize, row: usize) -> usize {
        debug_assert!(col < self.width && row < self.height);
        row * self.width + col
    }

    /// `(col, row)` of a cell, both zero-based from the lower-left corner.
    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.width, cell / self.width)
    }

    pub fn contains(&self, cell: usize) -> bool {
        cell < self.len()
    }

    /// Adjacent cells in ascending index order.
    pub fn neighbors(&self, cell: usize) -> Vec<usize> {
        let (col, row) = self.coords(cell);
        let (col, row) = (col as isize, row as isize);
        let offsets: &[(isize, isize)] = match self.neighborhood {
            Neighborhood::FourConnected => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
            Neighborhood::EightConnected => {
                &[(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]
            }
        };
        offsets
            .iter()
            .map(|&(dc, dr)| (col + dc, row + dr))
            .filter(|&(c, r)| c >= 0 && r >= 0 && (c as usize) < self.width && (r as usize) < self.height)
            .map(|(c, r)| self.cell(c as usize, r as usize))
            .collect()
    }
}
