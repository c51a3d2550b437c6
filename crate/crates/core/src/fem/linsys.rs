//! Banded direct solver with reverse Cuthill-McKee ordering.

use crate::error::{Error, Result};

/// Reverse Cuthill-McKee permutation of an undirected graph given as an
/// adjacency list. Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let degree = |v: usize| adjacency[v].len();

    while order.len() < n {
        // Lowest-degree unvisited vertex seeds the next component.
        let seed = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (degree(v), v))
            .unwrap();
        let mut queue = std::collections::VecDeque::new();
        visited[seed] = true;
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adjacency[v]
                .iter()
                .copied()
                .filter(|&u| !visited[u])
                .collect();
            nbrs.sort_by_key(|&u| (degree(u), u));
            for u in nbrs {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

/// General banded matrix (bandwidth `b` on both sides) with in-place LU
/// factorization without pivoting. The Newton tangents this backs are
/// penalty-dominated and strongly diagonal; a diagonal-shift retry upstream
/// covers the rare near-singular assembly.
#[derive(Clone)]
pub struct BandedUnsymmetric {
    n: usize,
    bandwidth: usize,
    /// Row-major bands: data[row * width + (col − row + bandwidth)].
    data: Vec<f64>,
}

impl BandedUnsymmetric {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bandwidth,
            data: vec![0.0; n * (2 * bandwidth + 1)],
        }
    }

    #[inline]
    fn idx(&self, row: usize, col: usize) -> usize {
        row * (2 * self.bandwidth + 1) + (col + self.bandwidth - row)
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row.abs_diff(col) <= self.bandwidth);
        let i = self.idx(row, col);
        self.data[i] += value;
    }

    pub fn reset(&mut self) {
        self.data.fill(0.0);
    }

    pub fn add_diagonal(&mut self, shift: f64) {
        for i in 0..self.n {
            let k = self.idx(i, i);
            self.data[k] += shift;
        }
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[self.idx(i, i)].abs())
            .fold(0.0, f64::max)
    }

    /// In-place LU without pivoting; fails on small pivots.
    pub fn factor_lu(&mut self, pivot_tol: f64) -> Result<()> {
        let b = self.bandwidth;
        let floor = pivot_tol * self.max_diagonal().max(1e-300);
        for j in 0..self.n {
            let pivot = self.data[self.idx(j, j)];
            if pivot.abs() < floor {
                return Err(Error::Mesh(format!(
                    "LU pivot {pivot:.3e} below tolerance at row {j}"
                )));
            }
            let hi = (j + b + 1).min(self.n);
            for i in j + 1..hi {
                let ij = self.idx(i, j);
                let lij = self.data[ij] / pivot;
                self.data[ij] = lij;
                if lij != 0.0 {
                    let cend = (j + b + 1).min(self.n);
                    for c in j + 1..cend {
                        let v = self.data[self.idx(j, c)];
                        if v != 0.0 {
                            let t = self.idx(i, c);
                            self.data[t] -= lij * v;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Solves `A x = rhs` after [`Self::factor_lu`]; overwrites `rhs`.
    pub fn solve_factored(&self, rhs: &mut [f64]) {
        let b = self.bandwidth;
        for i in 0..self.n {
            let start = i.saturating_sub(b);
            let mut v = rhs[i];
            for k in start..i {
                v -= self.data[self.idx(i, k)] * rhs[k];
            }
            rhs[i] = v;
        }
        for i in (0..self.n).rev() {
            let end = (i + b + 1).min(self.n);
            let mut v = rhs[i];
            for k in i + 1..end {
                v -= self.data[self.idx(i, k)] * rhs[k];
            }
            rhs[i] = v / self.data[self.idx(i, i)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lu_matches_direct_solve_on_random_banded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 35;
        let b = 5;
        let mut full = vec![vec![0.0; n]; n];
        for (i, row) in full.iter_mut().enumerate() {
            for j in i.saturating_sub(b)..(i + b + 1).min(n) {
                row[j] = rng.gen_range(-1.0..1.0);
            }
            row[i] += 8.0;
        }
        let mut banded = BandedUnsymmetric::zeros(n, b);
        for i in 0..n {
            for j in i.saturating_sub(b)..(i + b + 1).min(n) {
                banded.add(i, j, full[i][j]);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.61).cos()).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                rhs[i] += full[i][j] * x_true[j];
            }
        }
        banded.factor_lu(1e-14).unwrap();
        banded.solve_factored(&mut rhs);
        for i in 0..n {
            assert!((rhs[i] - x_true[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn rcm_reduces_grid_bandwidth() {
        // 2D grid graph 10x10 in natural order has bandwidth 10.
        let n = 100;
        let mut adj = vec![Vec::new(); n];
        let at = |i: usize, j: usize| i * 10 + j;
        for i in 0..10 {
            for j in 0..10 {
                if i + 1 < 10 {
                    adj[at(i, j)].push(at(i + 1, j));
                    adj[at(i + 1, j)].push(at(i, j));
                }
                if j + 1 < 10 {
                    adj[at(i, j)].push(at(i, j + 1));
                    adj[at(i, j + 1)].push(at(i, j));
                }
            }
        }
        let perm = reverse_cuthill_mckee(&adj);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut bw = 0usize;
        for (v, nbrs) in adj.iter().enumerate() {
            for &u in nbrs {
                bw = bw.max(inv[v].abs_diff(inv[u]));
            }
        }
        assert!(bw <= 11, "RCM bandwidth {bw}");
        // Permutation validity.
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn detects_singular_matrix() {
        let mut m = BandedUnsymmetric::zeros(3, 1);
        m.add(0, 0, 1.0);
        m.add(1, 1, 0.0);
        m.add(2, 2, 1.0);
        assert!(m.factor_lu(1e-12).is_err());
    }
}
