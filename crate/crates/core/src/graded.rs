//! Degree-homogeneous operators on a graded space truncated at degree `N`.
//!
//! A block for source degree `n` maps component `n` to component `n + shift`.
//! Components of negative degree are zero, so those blocks are known empty
//! matrices; blocks landing above `N` are undetermined and stored as `None`.
//! Compositions propagate undetermined blocks, which means every identity is
//! checked exactly on the components where all intermediate degrees exist.

use std::sync::Arc;

use serde::Serialize;

use crate::exactalg::{Matrix, Ring, ToJson};

#[derive(Clone, PartialEq, Debug)]
pub struct GradedMap<T> {
    shift: i64,
    dims: Arc<Vec<usize>>,
    blocks: Vec<Option<Matrix<T>>>,
}

/// A nonzero entry of an operator that should vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub entry: serde_json::Value,
}

impl<T: Ring> GradedMap<T> {
    /// Builds blocks with `f(n)`, which is only called for determined source
    /// degrees with a nonnegative target.
    pub fn build(dims: Arc<Vec<usize>>, shift: i64, mut f: impl FnMut(usize) -> Option<Matrix<T>>) -> Self {
        let top = dims.len() as i64 - 1;
        let blocks = (0..dims.len())
            .map(|n| {
                let t = n as i64 + shift;
                if t < 0 {
                    Some(Matrix::zeros(0, dims[n]))
                } else if t > top {
                    None
                } else {
                    let m = f(n)?;
                    assert_eq!((m.rows(), m.cols()), (dims[t as usize], dims[n]), "block shape at degree {n}");
                    Some(m)
                }
            })
            .collect();
        GradedMap { shift, dims, blocks }
    }

    pub fn zero(dims: Arc<Vec<usize>>, shift: i64) -> Self {
        let d = dims.clone();
        GradedMap::build(dims, shift, |n| Some(Matrix::zeros(d[(n as i64 + shift) as usize], d[n])))
    }

    pub fn scalar(dims: Arc<Vec<usize>>, s: T) -> Self {
        let d = dims.clone();
        GradedMap::build(dims, 0, |n| Some(Matrix::scalar(d[n], s.clone())))
    }

    pub fn identity(dims: Arc<Vec<usize>>) -> Self {
        GradedMap::scalar(dims, T::one())
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn dims(&self) -> &Arc<Vec<usize>> {
        &self.dims
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn block(&self, n: usize) -> Option<&Matrix<T>> {
        self.blocks.get(n).and_then(Option::as_ref)
    }

    pub fn blocks(&self) -> &[Option<Matrix<T>>] {
        &self.blocks
    }

    /// Source degrees whose block is known.
    pub fn determined_degrees(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&n| self.blocks[n].is_some()).collect()
    }

    fn target_dim(&self, d: i64) -> Option<usize> {
        if d < 0 {
            Some(0)
        } else {
            self.dims.get(d as usize).copied()
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims, "graded spaces differ");
        let shift = self.shift + other.shift;
        let blocks = (0..self.dims.len())
            .map(|n| {
                let mid = n as i64 + other.shift;
                let tgt = n as i64 + shift;
                let tdim = self.target_dim(tgt)?;
                if mid < 0 {
                    return Some(Matrix::zeros(tdim, self.dims[n]));
                }
                let b = other.block(n)?;
                let a = self.block(mid as usize)?;
                Some(a.mul(b))
            })
            .collect();
        GradedMap { shift, dims: self.dims.clone(), blocks }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Matrix<T>, &Matrix<T>) -> Matrix<T>) -> Self {
        assert_eq!(self.shift, other.shift, "degree shifts differ");
        assert_eq!(self.dims, other.dims, "graded spaces differ");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            })
            .collect();
        GradedMap { shift: self.shift, dims: self.dims.clone(), blocks }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Matrix::sub)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map_blocks(|m| m.scale(s))
    }

    pub fn map_blocks(&self, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Self {
        GradedMap {
            shift: self.shift,
            dims: self.dims.clone(),
            blocks: self.blocks.iter().map(|b| b.as_ref().map(&f)).collect(),
        }
    }

    pub fn map_entries<U: Ring>(&self, f: impl Fn(&T) -> U) -> GradedMap<U> {
        GradedMap {
            shift: self.shift,
            dims: self.dims.clone(),
            blocks: self.blocks.iter().map(|b| b.as_ref().map(|m| m.map(&f))).collect(),
        }
    }

    pub fn try_map_entries<U: Ring, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<GradedMap<U>, E> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.as_ref().map(|m| m.try_map(&f)).transpose())
            .collect::<Result<Vec<_>, E>>()?;
        Ok(GradedMap { shift: self.shift, dims: self.dims.clone(), blocks })
    }

    /// Forgets blocks above source degree `n`.
    pub fn restrict_sources(&self, n: usize) -> Self {
        let mut out = self.clone();
        for (k, b) in out.blocks.iter_mut().enumerate() {
            if k > n {
                *b = None;
            }
        }
        out
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Source degrees where the block exists, and the first nonzero entry among them.
    pub fn zero_check(&self) -> (Vec<usize>, Option<Violation>)
    where
        T: ToJson,
    {
        let checked = self.determined_degrees();
        let violation = checked.iter().find_map(|&n| {
            let m = self.block(n).unwrap();
            m.first_nonzero().map(|(row, col, e)| Violation { degree: n, row, col, entry: e.to_json() })
        });
        (checked, violation)
    }

    /// Agreement on all blocks determined in both maps.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.shift == other.shift
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            })
    }

    /// `Some(s)` when a degree-0 map acts as `s·Id` on every determined component.
    pub fn as_scalar(&self) -> Option<T> {
        if self.shift != 0 {
            return None;
        }
        let mut s: Option<T> = None;
        for m in self.blocks.iter().flatten() {
            if m.rows() == 0 {
                continue;
            }
            let t = m.scalar_multiple_of_identity()?;
            match &s {
                Some(prev) if *prev != t => return None,
                Some(_) => {}
                None => s = Some(t),
            }
        }
        Some(s.unwrap_or_else(T::zero))
    }

    pub fn apply(&self, n: usize, v: &[T]) -> Option<Vec<T>> {
        self.block(n).map(|m| m.mul_vec(v))
    }
}

#[derive(Serialize)]
#[serde(bound = "")]
struct BlockRecord<'a, T: Ring + ToJson> {
    source_degree: usize,
    target_degree: i64,
    matrix: &'a Matrix<T>,
}

impl<T: Ring + ToJson> Serialize for GradedMap<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let blocks: Vec<BlockRecord<T>> = self
            .blocks
            .iter()
            .enumerate()
            .filter_map(|(n, b)| {
                let m = b.as_ref()?;
                (m.rows() > 0).then_some(BlockRecord {
                    source_degree: n,
                    target_degree: n as i64 + self.shift,
                    matrix: m,
                })
            })
            .collect();
        let mut st = s.serialize_struct("GradedMap", 3)?;
        st.serialize_field("shift", &self.shift)?;
        st.serialize_field("dims", &*self.dims)?;
        st.serialize_field("blocks", &blocks)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, Rational};

    fn dims(n: usize) -> Arc<Vec<usize>> {
        Arc::new(vec![1; n + 1])
    }

    fn shift_up(n: usize) -> GradedMap<Rational> {
        GradedMap::build(dims(n), 1, |_| Some(Matrix::identity(1)))
    }

    fn shift_down(n: usize) -> GradedMap<Rational> {
        GradedMap::build(dims(n), -1, |k| Some(Matrix::scalar(1, int(k as i64))))
    }

    #[test]
    fn undetermined_blocks_propagate() {
        let up = shift_up(3);
        assert!(up.block(3).is_none());
        let down = shift_down(3);
        // down∘up is known on degrees 0..=2, up∘down everywhere
        assert_eq!(down.compose(&up).determined_degrees(), vec![0, 1, 2]);
        assert_eq!(up.compose(&down).determined_degrees(), vec![0, 1, 2, 3]);
        // [d/dz, z] = 1
        let c = down.compose(&up).sub(&up.compose(&down));
        assert_eq!(c.as_scalar(), Some(int(1)));
    }

    #[test]
    fn lowering_from_degree_zero_is_zero() {
        let down = shift_down(2);
        assert_eq!(down.block(0).unwrap().rows(), 0);
        let up = shift_up(2);
        let m = up.compose(&down);
        assert_eq!(m.block(0).unwrap(), &Matrix::zeros(1, 1));
    }
}
