//! Exact linear algebra: fraction-free determinants, reduced row echelon
//! forms, kernels, inertia of symmetric rational matrices and an incremental
//! sparse elimination used for large constraint systems.

use std::collections::BTreeMap;

use num_traits::Signed;

use super::matrix::Matrix;
use super::mpoly::MPoly;
use super::ratfn::RatFn;
use super::rational::Rational;
use super::ring::{ExactDiv, Field, Ring};
use crate::error::{Error, Result};

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_det<T: ExactDiv>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = pivot.times(a.get(i, j)).minus(&a.get(i, k).times(a.get(k, j)));
                let v = v.exact_div(&prev).expect("Bareiss quotient is exact");
                a.set(i, j, v);
            }
            a.set(i, k, T::zero());
        }
        prev = pivot;
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if negate { d.negated() } else { d })
}

/// Determinant of a rational-function matrix: each row is multiplied by the
/// product of its distinct denominators, the polynomial determinant is taken
/// fraction-free, and the multipliers are divided out at the end.
pub fn det_ratfn(m: &Matrix<RatFn>) -> Result<RatFn> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut poly = Matrix::<MPoly>::zeros(n, n);
    let mut scale = MPoly::one();
    for i in 0..n {
        let mut mult = MPoly::one();
        for x in m.row(i) {
            if mult.exact_div(x.den()).is_none() {
                let g = mult.gcd(x.den());
                mult = &mult * &x.den().exact_div(&g).expect("gcd divides");
            }
        }
        for j in 0..n {
            let x = m.get(i, j);
            let f = mult.exact_div(x.den()).expect("multiplier clears the row");
            poly.set(i, j, &x.num().clone() * &f);
        }
        scale = &scale * &mult;
    }
    RatFn::new(bareiss_det(&poly)?, scale)
}

/// Reduced row echelon form and the pivot columns.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a.get(r, col).inv().expect("nonzero pivot");
        for j in col..a.cols() {
            let v = a.get(r, j).times(&inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows() {
            if i == r || a.get(i, col).is_zero() {
                continue;
            }
            let f = a.get(i, col).clone();
            for j in col..a.cols() {
                let v = a.get(i, j).minus(&f.times(a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(col);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols()];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, f).negated();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, or `None` if the system is inconsistent.
pub fn solve<T: Field>(m: &Matrix<T>, b: &[T]) -> Result<Option<Vec<T>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let aug = Matrix::from_fn(m.rows(), m.cols() + 1, |i, j| {
        if j < m.cols() {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut x = vec![T::zero(); m.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols()).clone();
    }
    Ok(Some(x))
}

pub fn inverse<T: Field>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::NotInvertible);
    }
    Ok(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
}

/// Inertia `(n_pos, n_neg, n_zero)` of a symmetric rational matrix, by
/// symmetric Gaussian elimination (congruence transformations only).
pub fn ldlt_signature(m: &Matrix<Rational>) -> Result<(usize, usize, usize)> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..a.rows()).collect();
    let (mut pos, mut neg) = (0, 0);
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a.get(i, i).is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // Zero diagonal: find an off-diagonal entry and add row/column j to i.
                let pair = active.iter().find_map(|&i| {
                    active.iter().copied().find(|&j| j != i && !a.get(i, j).is_zero()).map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                for k in 0..a.cols() {
                    let v = a.get(i, k) + a.get(j, k);
                    a.set(i, k, v);
                }
                for k in 0..a.rows() {
                    let v = a.get(k, i) + a.get(k, j);
                    a.set(k, i, v);
                }
                i
            }
        };
        let d = a.get(p, p).clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            if a.get(i, p).is_zero() {
                continue;
            }
            let f = a.get(i, p) / &d;
            for &j in &active {
                let v = a.get(i, j) - &f * a.get(p, j);
                a.set(i, j, v);
            }
        }
    }
    Ok((pos, neg, m.rows() - pos - neg))
}

/// Incremental sparse Gaussian elimination.
///
/// Rows are kept fully reduced: every stored row has a pivot column with
/// entry 1 and vanishes on the pivots of all other rows.
#[derive(Clone, Debug)]
pub struct SparseEchelon<T> {
    ncols: usize,
    rows: Vec<BTreeMap<usize, T>>,
    pivot_of: BTreeMap<usize, usize>,
}

impl<T: Field> SparseEchelon<T> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, rows: Vec::new(), pivot_of: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces against the stored rows; returns the remainder.
    pub fn reduce(&self, row: &BTreeMap<usize, T>) -> BTreeMap<usize, T> {
        let mut r: BTreeMap<usize, T> = row.iter().filter(|(_, v)| !v.is_zero()).map(|(&k, v)| (k, v.clone())).collect();
        for (&p, &idx) in &self.pivot_of {
            let Some(f) = r.get(&p).cloned() else { continue };
            for (&k, v) in &self.rows[idx] {
                let nv = match r.get(&k) {
                    Some(x) => x.minus(&f.times(v)),
                    None => f.times(v).negated(),
                };
                if nv.is_zero() {
                    r.remove(&k);
                } else {
                    r.insert(k, nv);
                }
            }
        }
        r
    }

    /// Adds a constraint row; returns `true` if it raised the rank.
    pub fn push(&mut self, row: &BTreeMap<usize, T>) -> bool {
        let r = self.reduce(row);
        let Some((&p, lead)) = r.iter().next() else { return false };
        let inv = lead.inv().expect("nonzero pivot");
        let r: BTreeMap<usize, T> = r.iter().map(|(&k, v)| (k, v.times(&inv))).collect();
        // Clear the new pivot from stored rows so that reduction stays one pass.
        for stored in &mut self.rows {
            if let Some(f) = stored.get(&p).cloned() {
                for (&k, v) in &r {
                    let nv = match stored.get(&k) {
                        Some(x) => x.minus(&f.times(v)),
                        None => f.times(v).negated(),
                    };
                    if nv.is_zero() {
                        stored.remove(&k);
                    } else {
                        stored.insert(k, nv);
                    }
                }
            }
        }
        self.pivot_of.insert(p, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }

    /// Basis of the solution space of the homogeneous system, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivot_of.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.ncols];
                v[f] = T::one();
                for (&p, &idx) in &self.pivot_of {
                    if let Some(x) = self.rows[idx].get(&f) {
                        v[p] = x.negated();
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::mpoly::Var;
    use crate::exactalg::rational::{int, rat};
    use proptest::prelude::*;

    fn h() -> MPoly {
        MPoly::var(Var::H)
    }
    fn c() -> MPoly {
        MPoly::var(Var::C)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(bareiss_det(&Matrix::from_rows(vec![vec![h()]]).unwrap()).unwrap(), h());
        assert_eq!(bareiss_det(&Matrix::<MPoly>::identity(2)).unwrap(), MPoly::one());
        assert_eq!(bareiss_det(&qm(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert!(bareiss_det(&Matrix::<Rational>::zeros(2, 3)).is_err());
    }

    #[test]
    fn level_two_gram_determinant() {
        let g = Matrix::from_rows(vec![
            vec![&h().scale(&int(4)) + &c().scale(&rat(1, 2)), h().scale(&int(6))],
            vec![h().scale(&int(6)), &(&h() * &h()).scale(&int(8)) + &h().scale(&int(4))],
        ])
        .unwrap();
        let d = bareiss_det(&g).unwrap();
        // cofactor expansion
        let cof = &(g.get(0, 0) * g.get(1, 1)) - &(g.get(0, 1) * g.get(1, 0));
        assert_eq!(d, cof);
        let phi = &(&(&(&h() * &h()).scale(&int(16)) + &(&h() * &c()).scale(&int(2)))
            - &h().scale(&int(10)))
            + &c();
        assert_eq!(d, (&h() * &phi).scale(&int(2)));
        let gr = g.map(|p| RatFn::from_poly(p.clone()));
        assert_eq!(det_ratfn(&gr).unwrap(), RatFn::from_poly(d));
    }

    #[test]
    fn ratfn_determinant_clears_denominators() {
        let x = RatFn::new(MPoly::one(), h()).unwrap();
        let m = Matrix::from_rows(vec![vec![x.clone(), RatFn::one()], vec![RatFn::one(), RatFn::from_poly(h())]]).unwrap();
        assert!(det_ratfn(&m).unwrap().is_zero());
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&Matrix::<Rational>::identity(3)).is_empty());
        assert_eq!(kernel_basis(&qm(&[&[1, 1], &[1, 1]])), vec![vec![int(-1), int(1)]]);
        let x = solve(&qm(&[&[1, 2], &[3, 4]]), &[int(5), int(6)]).unwrap().unwrap();
        assert_eq!(x, vec![int(-4), rat(9, 2)]);
        assert_eq!(solve(&qm(&[&[1, 1], &[1, 1]]), &[int(0), int(1)]).unwrap(), None);
        let inv = inverse(&qm(&[&[2, 1], &[1, 1]])).unwrap();
        assert_eq!(inv, qm(&[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(ldlt_signature(&qm(&[&[1, 0], &[0, -1]])).unwrap(), (1, 1, 0));
        assert_eq!(ldlt_signature(&qm(&[&[2, 0], &[0, 0]])).unwrap(), (1, 0, 1));
        assert_eq!(ldlt_signature(&qm(&[&[0, 1], &[1, 0]])).unwrap(), (1, 1, 0));
        assert_eq!(ldlt_signature(&qm(&[&[5, 6], &[6, 12]])).unwrap(), (2, 0, 0));
        assert_eq!(ldlt_signature(&qm(&[&[1, 2], &[0, 1]])), Err(Error::NotSymmetric));
    }

    #[test]
    fn sparse_matches_dense() {
        let m = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let mut s = SparseEchelon::new(4);
        for i in 0..3 {
            let row: BTreeMap<usize, Rational> = (0..4).map(|j| (j, m.get(i, j).clone())).collect();
            s.push(&row);
        }
        assert_eq!(s.rank(), rank(&m));
        for v in s.kernel_basis() {
            assert!(m.mul_vec(&v).iter().all(|x| *x == int(0)));
        }
        assert_eq!(s.kernel_basis().len(), 2);
    }

    fn mat3() -> impl Strategy<Value = Matrix<Rational>> {
        prop::collection::vec(-3i64..4, 9).prop_map(|v| Matrix::from_fn(3, 3, |i, j| int(v[3 * i + j])))
    }

    fn unimodular() -> impl Strategy<Value = Matrix<Rational>> {
        // Products of elementary matrices have determinant 1.
        prop::collection::vec((0usize..3, 0usize..3, -2i64..3), 1..5).prop_map(|ops| {
            let mut u = Matrix::<Rational>::identity(3);
            for (i, j, k) in ops {
                if i != j {
                    let mut e = Matrix::<Rational>::identity(3);
                    e.set(i, j, int(k));
                    u = u.mul(&e);
                }
            }
            u
        })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in mat3(), b in mat3()) {
            let lhs = bareiss_det(&a).unwrap() * bareiss_det(&b).unwrap();
            prop_assert_eq!(lhs, bareiss_det(&a.mul(&b)).unwrap());
        }

        #[test]
        fn inertia_is_congruence_invariant(a in mat3(), u in unimodular()) {
            let s = a.add(&a.transpose());
            let t = u.transpose().mul(&s).mul(&u);
            prop_assert_eq!(ldlt_signature(&s).unwrap(), ldlt_signature(&t).unwrap());
        }
    }
}
