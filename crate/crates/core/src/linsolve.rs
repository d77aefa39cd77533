//! Direct sparse solver.
//!
//! The matrix graph is split into connected components; each component is
//! reordered by reverse Cuthill-McKee and factorized as a banded LU with
//! partial pivoting. Liouvillians that conserve a quantum number fall apart
//! into many small, narrow blocks this way, so the cost stays near linear in
//! the number of unknowns.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::sparse::{symmetric_adjacency, CsrMatrix};

/// Reverse Cuthill-McKee ordering of a square matrix's symmetrized graph.
/// Every component is started from a pseudo-peripheral vertex.
pub fn reverse_cuthill_mckee<T: Real>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.nrows();
    let adj = symmetric_adjacency(a);
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize, adj: &[Vec<usize>]| -> (usize, usize) {
        // Returns (eccentricity, a min-degree vertex of the last level).
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut frontier = vec![start];
        let mut depth = 0;
        let mut last = frontier.clone();
        while !frontier.is_empty() {
            last = frontier.clone();
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in &adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = depth + 1;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            depth += 1;
            frontier = next;
        }
        let far = *last.iter().min_by_key(|&&v| degree[v]).unwrap();
        (depth, far)
    };

    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // Pseudo-peripheral start: walk to the far end until eccentricity stops growing.
        let mut start = seed;
        let (mut ecc, mut far) = bfs_levels(start, &adj);
        loop {
            let (e2, f2) = bfs_levels(far, &adj);
            if e2 <= ecc {
                break;
            }
            start = far;
            ecc = e2;
            far = f2;
        }
        let begin = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            nbrs.sort_by_key(|&w| (degree[w], w));
            for w in nbrs {
                visited[w] = true;
                order.push(w);
            }
        }
    }
    order.reverse();
    order
}

/// Banded LU factorization with partial pivoting (row interchanges).
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage, row `i` covering columns `i - kl ..= i + kl + ku`.
    band: Vec<Cplx<T>>,
    pivots: Vec<usize>,
}

impl<T: Real> BandedLu<T> {
    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    /// Factorizes `a` (already in the desired ordering).
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let (mut kl, mut ku) = (0usize, 0usize);
        for (i, j, _) in a.triplets() {
            if i > j {
                kl = kl.max(i - j);
            } else {
                ku = ku.max(j - i);
            }
        }
        let w = 2 * kl + ku + 1;
        let mut lu = Self { n, kl, ku, band: vec![Complex::zero(); n * w], pivots: vec![0; n] };
        for (i, j, v) in a.triplets() {
            let k = lu.idx(i, j);
            lu.band[k] = v;
        }
        let scale = a.norm_inf();
        let tiny = scale * T::epsilon() * T::from_usize_lossy(n.max(1));

        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.band[lu.idx(k, k)].norm();
            for i in k + 1..=last_row {
                let v = lu.band[lu.idx(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.pivots[k] = p;
            if !(best > tiny) {
                return Err(Error::Singular { pivot: best.to_f64().unwrap_or(f64::NAN), block: n });
            }
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (ik, ip) = (lu.idx(k, j), lu.idx(p, j));
                    lu.band.swap(ik, ip);
                }
            }
            let pivot = lu.band[lu.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = lu.idx(i, k);
                if lu.band[ik].is_zero() {
                    continue;
                }
                let l = lu.band[ik] / pivot;
                lu.band[ik] = l;
                for j in k + 1..=last_col {
                    let u = lu.band[lu.idx(k, j)];
                    if !u.is_zero() {
                        let ij = lu.idx(i, j);
                        lu.band[ij] -= l * u;
                    }
                }
            }
        }
        Ok(lu)
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Solves in place.
    pub fn solve_in_place(&self, b: &mut [Cplx<T>]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk.is_zero() {
                continue;
            }
            for i in k + 1..=(k + self.kl).min(n.saturating_sub(1)) {
                b[i] -= self.band[self.idx(i, k)] * bk;
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + self.kl + self.ku).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=last_col {
                s -= self.band[self.idx(k, j)] * b[j];
            }
            b[k] = s / self.band[self.idx(k, k)];
        }
    }
}

/// Factorized sparse matrix: one banded LU per connected component.
#[derive(Debug, Clone)]
pub struct SparseLu<T> {
    n: usize,
    blocks: Vec<Block<T>>,
}

#[derive(Debug, Clone)]
struct Block<T> {
    /// Global indices in factorization order.
    perm: Vec<usize>,
    lu: BandedLu<T>,
}

impl<T: Real> SparseLu<T> {
    /// Factorizes every connected component of `a`.
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let comps = a.components();
        Self::factor_components(a, comps)
    }

    /// Factorizes only the components that intersect `support`. Solves with
    /// right-hand sides outside that support are not allowed.
    pub fn factor_touching(a: &CsrMatrix<T>, support: &[usize]) -> Result<Self> {
        let mut hit = vec![false; a.nrows()];
        for &i in support {
            hit[i] = true;
        }
        let comps = a.components().into_iter().filter(|c| c.iter().any(|&i| hit[i])).collect();
        Self::factor_components(a, comps)
    }

    fn factor_components(a: &CsrMatrix<T>, comps: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = comps
            .into_iter()
            .map(|comp| {
                let local = a.submatrix(&comp, &comp);
                let order = reverse_cuthill_mckee(&local);
                let perm: Vec<usize> = order.iter().map(|&k| comp[k]).collect();
                let lu = BandedLu::factor(&a.submatrix(&perm, &perm))?;
                Ok(Block { perm, lu })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: a.nrows(), blocks })
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.perm.len()).collect()
    }

    pub fn max_bandwidth(&self) -> usize {
        self.blocks.iter().map(|b| b.lu.kl.max(b.lu.ku)).max().unwrap_or(0)
    }

    /// Solves `A x = b`. Entries of `x` outside the factorized components are zero.
    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(b.len(), self.n);
        let mut x = vec![Complex::zero(); self.n];
        for blk in &self.blocks {
            let mut local: Vec<Cplx<T>> = blk.perm.iter().map(|&i| b[i]).collect();
            if local.iter().all(|v| v.is_zero()) {
                continue;
            }
            blk.lu.solve_in_place(&mut local);
            for (&i, v) in blk.perm.iter().zip(local) {
                x[i] = v;
            }
        }
        x
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `b - A x`.
pub fn residual<T: Real>(a: &CsrMatrix<T>, x: &[Cplx<T>], b: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let ax = a.mul_vec(x);
    b.iter().zip(ax).map(|(&bi, axi)| bi - axi).collect()
}

/// Solves `A x = b` with up to `max_refine` rounds of iterative refinement,
/// stopping once `‖b - A x‖ <= tol`.
pub fn solve_refined<T: Real>(
    a: &CsrMatrix<T>,
    lu: &SparseLu<T>,
    b: &[Cplx<T>],
    tol: T,
    max_refine: usize,
) -> (Vec<Cplx<T>>, T) {
    let mut x = lu.solve(b);
    let mut r = residual(a, &x, b);
    let mut rn = norm2(&r);
    for _ in 0..max_refine {
        if rn <= tol {
            break;
        }
        let dx = lu.solve(&r);
        let candidate: Vec<_> = x.iter().zip(&dx).map(|(&xi, &di)| xi + di).collect();
        let r2 = residual(a, &candidate, b);
        let rn2 = norm2(&r2);
        if !(rn2 < rn) {
            break;
        }
        x = candidate;
        r = r2;
        rn = rn2;
    }
    (x, rn)
}
