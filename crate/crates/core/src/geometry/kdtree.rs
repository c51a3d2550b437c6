//! 3D k-d tree for exact nearest-neighbor queries.

use nalgebra::Point3;

/// Static k-d tree over a point set. Queries return the index of the closest
/// point; exact ties break toward the lowest index, matching a linear scan.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Point3<f64>>,
    // Flattened recursion: nodes[k] = (point index, split axis); children at
    // 2k+1 / 2k+2 over the `order` permutation are implicit via subranges.
    order: Vec<usize>,
}

impl KdTree {
    /// Builds the tree. Panics on an empty point set.
    pub fn build(points: Vec<Point3<f64>>) -> Self {
        assert!(!points.is_empty(), "k-d tree needs at least one point");
        let mut order: Vec<usize> = (0..points.len()).collect();
        build_recursive(&points, &mut order, 0);
        Self { points, order }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, index: usize) -> Point3<f64> {
        self.points[index]
    }

    /// Index of and squared distance to the nearest stored point.
    pub fn nearest(&self, query: &Point3<f64>) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(query, 0, self.order.len(), 0, &mut best);
        (best.0, best.1)
    }

    fn search(
        &self,
        query: &Point3<f64>,
        lo: usize,
        hi: usize,
        depth: usize,
        best: &mut (usize, f64),
    ) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid];
        let d2 = (self.points[idx] - query).norm_squared();
        if d2 < best.1 || (d2 == best.1 && idx < best.0) {
            *best = (idx, d2);
        }
        let axis = depth % 3;
        let delta = query[axis] - self.points[idx][axis];
        let (near, far) = if delta < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(query, near.0, near.1, depth + 1, best);
        if delta * delta <= best.1 {
            self.search(query, far.0, far.1, depth + 1, best);
        }
    }
}

fn build_recursive(points: &[Point3<f64>], order: &mut [usize], depth: usize) {
    if order.len() <= 1 {
        return;
    }
    let axis = depth % 3;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        points[a][axis]
            .partial_cmp(&points[b][axis])
            .unwrap()
            .then(a.cmp(&b))
    });
    let (left, rest) = order.split_at_mut(mid);
    build_recursive(points, left, depth + 1);
    build_recursive(points, &mut rest[1..], depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear_scan(points: &[Point3<f64>], q: &Point3<f64>) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, p) in points.iter().enumerate() {
            let d2 = (p - q).norm_squared();
            if d2 < best.1 {
                best = (i, d2);
            }
        }
        best
    }

    #[test]
    fn single_point_always_returned() {
        let tree = KdTree::build(vec![Point3::new(1.0, 2.0, 3.0)]);
        let (i, d2) = tree.nearest(&Point3::new(-5.0, 0.0, 9.0));
        assert_eq!(i, 0);
        assert!(d2 > 0.0);
    }

    #[test]
    fn exact_query_hits_distance_zero() {
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 2.0, 0.0),
        ];
        let tree = KdTree::build(pts.clone());
        let (i, d2) = tree.nearest(&pts[2]);
        assert_eq!(i, 2);
        assert_eq!(d2, 0.0);
    }

    #[test]
    fn matches_linear_scan_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let points: Vec<Point3<f64>> = (0..10_000)
            .map(|_| {
                Point3::new(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                )
            })
            .collect();
        let tree = KdTree::build(points.clone());
        for _ in 0..1_000 {
            let q = Point3::new(
                rng.gen_range(-12.0..12.0),
                rng.gen_range(-12.0..12.0),
                rng.gen_range(-12.0..12.0),
            );
            let got = tree.nearest(&q);
            let want = linear_scan(&points, &q);
            assert_eq!(got.0, want.0);
            assert_eq!(got.1, want.1);
        }
    }

    #[test]
    fn duplicate_points_tie_break_to_lowest_index() {
        let p = Point3::new(1.0, 1.0, 1.0);
        let points = vec![Point3::new(5.0, 5.0, 5.0), p, p, p];
        let tree = KdTree::build(points);
        let (i, d2) = tree.nearest(&p);
        assert_eq!((i, d2), (1, 0.0));
    }
}
