//! The product map `f × f` acting on grid-quantized subsets of the square.

use crate::dynamics::{DynamicsError, MapSpace, PLMap};
use crate::geometry::{grid, GridSet, Rect, SquareBase};
use crate::scalar::Scalar;

/// `(x, y) ↦ (f(x), f(y))` over the square with base matching the factor.
#[derive(Clone, Debug)]
pub struct ProductMap {
    pub factor: PLMap,
}

impl ProductMap {
    pub fn new(factor: PLMap) -> Self {
        ProductMap { factor }
    }

    pub fn base(&self) -> SquareBase {
        match self.factor.space() {
            MapSpace::Line => SquareBase::Line,
            MapSpace::Circle => SquareBase::Circle,
        }
    }

    fn check_base(&self, set: &GridSet) -> Result<(), DynamicsError> {
        if set.base() != self.base() {
            return Err(DynamicsError::SpaceMismatch {
                expected: crate::geometry::Space::Square {
                    base: self.base(),
                    k: set.k(),
                },
                found: crate::geometry::Space::Square {
                    base: set.base(),
                    k: set.k(),
                },
            });
        }
        Ok(())
    }

    /// Exact image of one grid box as a union of closed rectangles in lift
    /// coordinates: the box is split at map breakpoints in each coordinate
    /// and each sub-box maps to a product of affine image intervals.
    pub fn exact_box_image(
        &self,
        set: &GridSet,
        b: (i64, i64),
    ) -> Result<Vec<Rect>, DynamicsError> {
        self.check_base(set)?;
        let (x0, x1) = set.index_cell(b.0);
        let (y0, y1) = set.index_cell(b.1);
        let x_images: Vec<(Scalar, Scalar)> = self
            .factor
            .lift_branches(&x0, &x1)?
            .iter()
            .map(|br| br.image())
            .collect();
        let y_images: Vec<(Scalar, Scalar)> = self
            .factor
            .lift_branches(&y0, &y1)?
            .iter()
            .map(|br| br.image())
            .collect();
        let mut out = Vec::with_capacity(x_images.len() * y_images.len());
        for xi in &x_images {
            for yi in &y_images {
                out.push(Rect {
                    x: xi.clone(),
                    y: yi.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Grid-aligned outer enclosure of `(f×f)(A)`: every box whose interior
    /// meets the exact image is included.
    pub fn box_image(&self, set: &GridSet) -> Result<GridSet, DynamicsError> {
        self.rasterized_image(set, false)
    }

    /// Closed-cover enclosure: every box whose closed box meets the exact
    /// image. Slightly larger than [`ProductMap::box_image`] along aligned
    /// boundaries; it covers every image point even on grid lines, which the
    /// combinatorial invariant-set enclosure needs for soundness.
    pub fn box_image_cover(&self, set: &GridSet) -> Result<GridSet, DynamicsError> {
        self.rasterized_image(set, true)
    }

    /// Enclosure of the image of a single box.
    pub fn box_image_one(
        &self,
        set: &GridSet,
        b: (i64, i64),
        touching: bool,
    ) -> Result<GridSet, DynamicsError> {
        let mut out = GridSet::empty(set.base(), set.k())?;
        for rect in self.exact_box_image(set, b)? {
            let boxes = if touching {
                grid::boxes_touching_rect(&rect, set.k(), set.base())
            } else {
                grid::boxes_meeting_rect_interior(&rect, set.k(), set.base())
            };
            for bx in boxes {
                out.insert(bx);
            }
        }
        Ok(out)
    }

    fn rasterized_image(&self, set: &GridSet, touching: bool) -> Result<GridSet, DynamicsError> {
        let mut out = GridSet::empty(set.base(), set.k())?;
        for b in set.boxes() {
            for rect in self.exact_box_image(set, b)? {
                let boxes = if touching {
                    grid::boxes_touching_rect(&rect, set.k(), set.base())
                } else {
                    grid::boxes_meeting_rect_interior(&rect, set.k(), set.base())
                };
                for bx in boxes {
                    out.insert(bx);
                }
            }
        }
        Ok(out)
    }

    /// Exact image of a point of the square, in base coordinates.
    pub fn point_image(&self, p: &(Scalar, Scalar)) -> Option<(Scalar, Scalar)> {
        Some((self.factor.eval(&p.0)?, self.factor.eval(&p.1)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::PLMap;
    use crate::scalar::{int, rat};

    fn tent() -> PLMap {
        PLMap::from_vertices(
            MapSpace::Line,
            vec![(int(-2), int(-6)), (rat(1, 2), rat(3, 2)), (int(2), int(-3))],
        )
        .unwrap()
    }

    #[test]
    fn identity_enclosure_is_identity() {
        let id = PLMap::from_vertices(MapSpace::Line, vec![(int(0), int(0)), (int(1), int(1))])
            .unwrap();
        let f = ProductMap::new(id);
        let a = GridSet::from_boxes(SquareBase::Line, 10, [(2, 3), (4, 4)]).unwrap();
        assert_eq!(f.box_image(&a).unwrap(), a);
    }

    #[test]
    fn tent_box_expands_by_slope() {
        let f = ProductMap::new(tent());
        let a = GridSet::from_boxes(SquareBase::Line, 27, [(0, 0)]).unwrap();
        let img = f.box_image(&a).unwrap();
        // [0, 1/27]^2 maps to [0, 3/27]^2: nine boxes.
        let expect =
            GridSet::from_boxes(SquareBase::Line, 27, (0..3).flat_map(|i| (0..3).map(move |j| (i, j))))
                .unwrap();
        assert_eq!(img, expect);
    }

    #[test]
    fn empty_maps_to_empty() {
        let f = ProductMap::new(tent());
        let a = GridSet::empty(SquareBase::Line, 27).unwrap();
        assert!(f.box_image(&a).unwrap().is_empty());
    }

    #[test]
    fn box_split_at_breakpoint() {
        // Box 13 at k = 27 contains the tent's turning point 1/2.
        let f = ProductMap::new(tent());
        let a = GridSet::from_boxes(SquareBase::Line, 27, [(13, 0)]).unwrap();
        let img = f.box_image(&a).unwrap();
        // x-cell [13/27, 14/27] peaks at f(1/2) = 40.5/27, so the image
        // [39/27, 40.5/27] meets the interiors of boxes 39 and 40 only.
        let xs: std::collections::BTreeSet<i64> = img.boxes().map(|(i, _)| i).collect();
        assert_eq!(xs, (39..41).collect());
    }

    #[test]
    fn doubling_box_image_wraps() {
        let d = PLMap::from_vertices(MapSpace::Circle, vec![(int(0), int(0)), (int(1), int(2))])
            .unwrap();
        let f = ProductMap::new(d);
        let a = GridSet::from_boxes(SquareBase::Circle, 20, [(19, 19)]).unwrap();
        let img = f.box_image(&a).unwrap();
        // [19/20, 1]^2 doubles to [38/20, 2]^2 = [18/20, 1]^2 mod 1.
        let expect = GridSet::from_boxes(SquareBase::Circle, 20, [(18, 18), (18, 19), (19, 18), (19, 19)])
            .unwrap();
        assert_eq!(img, expect);
    }
}
