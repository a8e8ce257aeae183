//! Shared evaluation schemes for the two-predecessor lattice recursions.
//!
//! A [`Cell`] says how one lattice value follows from its predecessors. The
//! first row and column are handled structurally (only one predecessor), so
//! no `-inf` or `0` sentinel ever enters the arithmetic. Every scheme below
//! performs the same floating-point operations per cell, which makes the
//! sequential, rolling and wavefront results bit-identical.

use rayon::prelude::*;

use super::weights::{Role, WeightTable};
use crate::error::Result;
use crate::rng::{DistributionSpec, GammaShape, Stream, StreamKey};

pub(crate) trait Cell: Sync {
    fn origin(&self) -> Result<f64>;
    /// `(i, 1)` from `(i-1, 1)`.
    fn via_horizontal(&self, prev: f64, i: usize, j: usize) -> Result<f64>;
    /// `(1, j)` from `(1, j-1)`.
    fn via_vertical(&self, prev: f64, i: usize, j: usize) -> Result<f64>;
    /// Bulk site from `h = value(i-1, j)` and `v = value(i, j-1)`.
    fn combine(&self, h: f64, v: f64, i: usize, j: usize) -> Result<f64>;
}

/// Same recursion with coordinates swapped; lets the rolling evaluator keep
/// its buffer along the shorter side.
struct Transposed<'a, C>(&'a C);

impl<C: Cell> Cell for Transposed<'_, C> {
    fn origin(&self) -> Result<f64> {
        self.0.origin()
    }
    fn via_horizontal(&self, prev: f64, i: usize, j: usize) -> Result<f64> {
        self.0.via_vertical(prev, j, i)
    }
    fn via_vertical(&self, prev: f64, i: usize, j: usize) -> Result<f64> {
        self.0.via_horizontal(prev, j, i)
    }
    fn combine(&self, h: f64, v: f64, i: usize, j: usize) -> Result<f64> {
        self.0.combine(v, h, j, i)
    }
}

/// Row-by-row sweep over a buffer of length `n`; `on_row(i, row)` sees
/// `value(i, 1..=n)` once row `i` is complete.
fn sweep<C: Cell>(m: usize, n: usize, cell: &C, mut on_row: impl FnMut(usize, &[f64])) -> Result<()> {
    let mut row = vec![0.0; n];
    row[0] = cell.origin()?;
    for j in 2..=n {
        row[j - 1] = cell.via_vertical(row[j - 2], 1, j)?;
    }
    on_row(1, &row);
    for i in 2..=m {
        row[0] = cell.via_horizontal(row[0], i, 1)?;
        for j in 2..=n {
            row[j - 1] = cell.combine(row[j - 1], row[j - 2], i, j)?;
        }
        on_row(i, &row);
    }
    Ok(())
}

/// Full grid, row-major with `values[(i-1)*n + (j-1)]`.
pub(crate) fn eval_grid<C: Cell>(m: usize, n: usize, cell: &C) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(m * n);
    sweep(m, n, cell, |_, row| out.extend_from_slice(row))?;
    Ok(out)
}

/// Only `value(m, n)`, with `O(min(m, n))` memory.
pub(crate) fn eval_corner<C: Cell>(m: usize, n: usize, cell: &C) -> Result<f64> {
    let mut corner = 0.0;
    if n <= m {
        sweep(m, n, cell, |_, row| corner = row[n - 1])?;
    } else {
        sweep(n, m, &Transposed(cell), |_, row| corner = row[m - 1])?;
    }
    Ok(corner)
}

/// Anti-diagonal sweep; the cells of one diagonal are computed in parallel.
pub(crate) fn eval_wavefront<C: Cell>(m: usize, n: usize, cell: &C) -> Result<Vec<f64>> {
    let mut out = vec![0.0; m * n];
    out[0] = cell.origin()?;
    for d in 3..=(m + n) {
        let i_lo = d.saturating_sub(n).max(1);
        let i_hi = (d - 1).min(m);
        let prev = &out;
        let diag: Vec<(usize, f64)> = (i_lo..=i_hi)
            .into_par_iter()
            .map(|i| {
                let j = d - i;
                let v = if j == 1 {
                    cell.via_horizontal(prev[(i - 2) * n], i, 1)?
                } else if i == 1 {
                    cell.via_vertical(prev[j - 2], 1, j)?
                } else {
                    cell.combine(prev[(i - 2) * n + j - 1], prev[(i - 1) * n + j - 2], i, j)?
                };
                Ok(((i - 1) * n + j - 1, v))
            })
            .collect::<Result<_>>()?;
        for (k, v) in diag {
            out[k] = v;
        }
    }
    Ok(out)
}

/// Per-role stream tags; one set per model so samples of different models
/// drawn under the same seed are independent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tags {
    pub origin: u8,
    pub horizontal: u8,
    pub vertical: u8,
}

pub(crate) const LPP_TAGS: Tags = Tags {
    origin: 0,
    horizontal: 1,
    vertical: 2,
};
pub(crate) const MULTI_EDGE_TAGS: Tags = Tags {
    origin: 3,
    horizontal: 4,
    vertical: 5,
};
pub(crate) const POLYMER_ORIGIN_TAG: u8 = 6;
pub(crate) const POLYMER_VERTEX_TAG: u8 = 7;

pub(crate) trait EdgeWeights: Sync {
    fn origin(&self) -> Result<f64>;
    fn horizontal(&self, i: usize, j: usize) -> Result<f64>;
    fn vertical(&self, i: usize, j: usize) -> Result<f64>;
}

impl<W: EdgeWeights> EdgeWeights for &W {
    #[inline]
    fn origin(&self) -> Result<f64> {
        (**self).origin()
    }
    #[inline]
    fn horizontal(&self, i: usize, j: usize) -> Result<f64> {
        (**self).horizontal(i, j)
    }
    #[inline]
    fn vertical(&self, i: usize, j: usize) -> Result<f64> {
        (**self).vertical(i, j)
    }
}

pub(crate) struct SampledEdges {
    pub key: StreamKey,
    pub law: DistributionSpec,
    pub copies: usize,
    pub tags: Tags,
}

impl SampledEdges {
    #[inline]
    fn draw(&self, i: usize, j: usize, tag: u8) -> f64 {
        let mut s = Stream::new(self.key.site(i, j, tag));
        if self.copies == 1 {
            self.law.sample(&mut s)
        } else {
            self.law.sample_max(&mut s, self.copies)
        }
    }
}

impl EdgeWeights for SampledEdges {
    #[inline]
    fn origin(&self) -> Result<f64> {
        Ok(self.draw(1, 1, self.tags.origin))
    }
    #[inline]
    fn horizontal(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.draw(i, j, self.tags.horizontal))
    }
    #[inline]
    fn vertical(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.draw(i, j, self.tags.vertical))
    }
}

pub(crate) struct TableEdges<'a> {
    pub table: &'a WeightTable,
    pub copies: usize,
}

impl EdgeWeights for TableEdges<'_> {
    fn origin(&self) -> Result<f64> {
        self.table.max_over_copies(1, 1, Role::Origin, self.copies)
    }
    fn horizontal(&self, i: usize, j: usize) -> Result<f64> {
        self.table.max_over_copies(i, j, Role::Horizontal, self.copies)
    }
    fn vertical(&self, i: usize, j: usize) -> Result<f64> {
        self.table.max_over_copies(i, j, Role::Vertical, self.copies)
    }
}

/// `T(i,j) = max(T(i-1,j) + U(i,j), T(i,j-1) + V(i,j))`.
pub(crate) struct LppCell<W>(pub W);

impl<W: EdgeWeights> Cell for LppCell<W> {
    #[inline]
    fn origin(&self) -> Result<f64> {
        self.0.origin()
    }
    #[inline]
    fn via_horizontal(&self, prev: f64, i: usize, j: usize) -> Result<f64> {
        Ok(prev + self.0.horizontal(i, j)?)
    }
    #[inline]
    fn via_vertical(&self, prev: f64, i: usize, j: usize) -> Result<f64> {
        Ok(prev + self.0.vertical(i, j)?)
    }
    #[inline]
    fn combine(&self, h: f64, v: f64, i: usize, j: usize) -> Result<f64> {
        Ok((h + self.0.horizontal(i, j)?).max(v + self.0.vertical(i, j)?))
    }
}

pub(crate) trait VertexWeights: Sync {
    /// `log w_{i,j}`, including the origin.
    fn log_weight(&self, i: usize, j: usize) -> Result<f64>;
}

pub(crate) struct SampledVertices {
    pub key: StreamKey,
    pub shape: GammaShape,
}

impl VertexWeights for SampledVertices {
    #[inline]
    fn log_weight(&self, i: usize, j: usize) -> Result<f64> {
        let tag = if (i, j) == (1, 1) {
            POLYMER_ORIGIN_TAG
        } else {
            POLYMER_VERTEX_TAG
        };
        Ok(Stream::new(self.key.site(i, j, tag)).log_inverse_gamma(self.shape))
    }
}

pub(crate) struct TableVertices<'a>(pub &'a WeightTable);

impl VertexWeights for TableVertices<'_> {
    fn log_weight(&self, i: usize, j: usize) -> Result<f64> {
        if (i, j) == (1, 1) {
            self.0.get(1, 1, Role::Origin)
        } else {
            self.0.get(i, j, Role::Vertex)
        }
    }
}

/// `log(e^a + e^b) = max(a, b) + log1p(exp(-|a - b|))`; symmetric in its arguments.
#[inline]
pub fn logaddexp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// `log Z(i,j) = logaddexp(log Z(i-1,j), log Z(i,j-1)) + log w(i,j)`.
pub(crate) struct PolymerCell<W>(pub W);

impl<W: VertexWeights> Cell for PolymerCell<W> {
    #[inline]
    fn origin(&self) -> Result<f64> {
        self.0.log_weight(1, 1)
    }
    #[inline]
    fn via_horizontal(&self, prev: f64, i: usize, j: usize) -> Result<f64> {
        Ok(prev + self.0.log_weight(i, j)?)
    }
    #[inline]
    fn via_vertical(&self, prev: f64, i: usize, j: usize) -> Result<f64> {
        Ok(prev + self.0.log_weight(i, j)?)
    }
    #[inline]
    fn combine(&self, h: f64, v: f64, i: usize, j: usize) -> Result<f64> {
        Ok(logaddexp(h, v) + self.0.log_weight(i, j)?)
    }
}
