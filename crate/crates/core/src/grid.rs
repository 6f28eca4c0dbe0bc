//! Uniform partition of `[0, 1]` into `M` elements with affine geometry maps.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

static NEXT_GRID_ID: AtomicU64 = AtomicU64::new(0);

/// The elements `[k/M, (k+1)/M]`, `k = 0..M`.
///
/// Each call to [`make_uniform_grid`] produces a distinct grid: elements of
/// one grid are foreign to every other, even with the same `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridView {
    num_elements: usize,
    id: u64,
}

/// Grid element `e` with the affine map `Φ_e(xhat) = left + width · xhat`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    grid: u64,
    index: usize,
    left: f64,
    width: f64,
}

pub fn make_uniform_grid(num_elements: usize) -> Result<GridView> {
    if num_elements == 0 {
        return Err(Error::EmptyGrid);
    }
    let id = NEXT_GRID_ID.fetch_add(1, Ordering::Relaxed);
    Ok(GridView { num_elements, id })
}

impl GridView {
    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_vertices(&self) -> usize {
        self.num_elements + 1
    }

    /// Element width `h = 1/M`.
    pub fn width(&self) -> f64 {
        1.0 / self.num_elements as f64
    }

    pub fn element(&self, index: usize) -> Result<Element> {
        if index >= self.num_elements {
            return Err(Error::ElementIndex {
                index,
                len: self.num_elements,
            });
        }
        let m = self.num_elements as f64;
        Ok(Element {
            grid: self.id,
            index,
            left: index as f64 / m,
            width: 1.0 / m,
        })
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Element> + '_ {
        (0..self.num_elements).map(|k| self.element(k).expect("index below element count"))
    }

    pub fn contains(&self, element: &Element) -> bool {
        element.grid == self.id && element.index < self.num_elements
    }

    /// Element containing `x` and the local coordinate of `x` in it.
    ///
    /// Elements are half open, `[left, right)`, except the last one, so a
    /// point on an interior vertex belongs to the element on its right.
    pub fn locate(&self, x: f64) -> Result<(Element, f64)> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::PointOutsideGrid(x));
        }
        let m = self.num_elements;
        let mf = m as f64;
        let mut k = ((x * mf).floor() as usize).min(m - 1);
        // The product can round across a vertex; settle against exact left ends.
        while k > 0 && x < k as f64 / mf {
            k -= 1;
        }
        while k + 1 < m && x >= (k + 1) as f64 / mf {
            k += 1;
        }
        let element = self.element(k)?;
        let local = ((x - element.left) / element.width).clamp(0.0, 1.0);
        Ok((element, local))
    }
}

impl Element {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn right(&self) -> f64 {
        self.left + self.width
    }
}

/// `Φ_e(xhat) = left + width · xhat` for `xhat` in the reference element `[0, 1]`.
pub fn global_from_local(element: &Element, xhat: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&xhat) {
        return Err(Error::LocalCoordinateOutOfRange(xhat));
    }
    Ok(element.left + element.width * xhat)
}

/// `DΦ_e`, the constant width of the element.
pub fn geometry_jacobian(element: &Element) -> f64 {
    element.width
}
