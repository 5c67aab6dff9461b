use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Point;

/// Deduplicated set of points of `F_p^n`, kept as one flat coordinate
/// buffer sorted lexicographically (first coordinate most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: PrimeField,
    n: usize,
    data: Vec<u64>,
}

impl PointSet {
    pub fn empty(field: PrimeField, n: usize) -> Self {
        PointSet {
            field,
            n,
            data: Vec::new(),
        }
    }

    /// Builds a set from flat canonical coordinates in any order.
    pub fn from_flat(field: PrimeField, n: usize, mut data: Vec<u64>) -> Self {
        assert!(n > 0, "point sets live in F_p^n with n >= 1");
        assert_eq!(data.len() % n, 0);
        let count = data.len() / n;
        let sorted_already =
            (1..count).all(|i| data[(i - 1) * n..i * n] < data[i * n..(i + 1) * n]);
        if !sorted_already {
            let mut idx: Vec<usize> = (0..count).collect();
            idx.sort_unstable_by(|&a, &b| data[a * n..(a + 1) * n].cmp(&data[b * n..(b + 1) * n]));
            idx.dedup_by(|a, b| data[*a * n..(*a + 1) * n] == data[*b * n..(*b + 1) * n]);
            let mut out = Vec::with_capacity(idx.len() * n);
            for i in idx {
                out.extend_from_slice(&data[i * n..(i + 1) * n]);
            }
            data = out;
        }
        PointSet { field, n, data }
    }

    /// Builds a set from points, which must all live in `F_p^n`.
    pub fn from_points<'a, I>(field: PrimeField, n: usize, pts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Point>,
    {
        let mut data = Vec::new();
        for pt in pts {
            if pt.dim() != n {
                return Err(Error::DimensionMismatch(n, pt.dim()));
            }
            if pt.field() != field {
                return Err(Error::FieldMismatch(field.modulus(), pt.field().modulus()));
            }
            data.extend_from_slice(pt.coords());
        }
        Ok(Self::from_flat(field, n, data))
    }

    /// Convenience constructor from signed coordinates.
    pub fn from_signed(field: PrimeField, n: usize, pts: &[Vec<i64>]) -> Self {
        let data = pts
            .iter()
            .flat_map(|p| p.iter().map(|&c| field.from_i64(c)))
            .collect();
        Self::from_flat(field, n, data)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.data.chunks_exact(self.n)
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter()
            .map(|c| Point::from_canonical(self.field, c.to_vec()))
            .collect()
    }

    pub fn contains(&self, c: &[u64]) -> bool {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(c) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub(crate) fn check_compatible(&self, other: &PointSet) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        Ok(())
    }

    /// `{a + c : a in self}`.
    pub fn translate(&self, c: &[u64]) -> PointSet {
        let f = self.field;
        let data = self
            .iter()
            .flat_map(|a| {
                a.iter()
                    .zip(c)
                    .map(|(&x, &y)| f.add(x, y))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::from_flat(f, self.n, data)
    }

    /// Largest infinity norm over the set (balanced representatives).
    pub fn max_norm(&self) -> u64 {
        self.iter()
            .flat_map(|c| c.iter().map(|&x| self.field.balanced(x).unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn balanced(&self) -> Vec<Vec<i64>> {
        self.iter()
            .map(|c| c.iter().map(|&x| self.field.balanced(x)).collect())
            .collect()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&vec![0; self.n])
    }
}

/// Mixed-radix index of a point when `p^n` fits in a `u64`.
pub(crate) fn dense_size(field: PrimeField, n: usize) -> Option<u64> {
    let p = field.modulus();
    (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

#[inline]
pub(crate) fn encode(p: u64, c: &[u64]) -> u64 {
    c.iter().fold(0, |acc, &x| acc * p + x)
}

pub(crate) fn decode(p: u64, n: usize, mut code: u64, out: &mut [u64]) {
    for i in (0..n).rev() {
        out[i] = code % p;
        code /= p;
    }
}

/// Bitset over `F_p^n` indexed by [`encode`].
pub(crate) struct DenseSet {
    words: Vec<u64>,
}

impl DenseSet {
    pub(crate) fn new(size: u64) -> Self {
        DenseSet {
            words: vec![0; size.div_ceil(64) as usize],
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub(crate) fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(wi as u64 * 64 + b)
            })
        })
    }
}

/// Counts how many `v` in `u` also satisfy `v + delta in u`, memoized per delta.
pub(crate) struct OverlapCounter<'a> {
    u: &'a PointSet,
    cache: HashMap<Vec<u64>, u64>,
}

impl<'a> OverlapCounter<'a> {
    pub(crate) fn new(u: &'a PointSet) -> Self {
        OverlapCounter {
            u,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn count(&mut self, delta: &[u64]) -> u64 {
        if let Some(&c) = self.cache.get(delta) {
            return c;
        }
        let f = self.u.field();
        let mut buf = vec![0u64; delta.len()];
        let c = self
            .u
            .iter()
            .filter(|v| {
                for (b, (&x, &d)) in buf.iter_mut().zip(v.iter().zip(delta)) {
                    *b = f.add(x, d);
                }
                self.u.contains(&buf)
            })
            .count() as u64;
        self.cache.insert(delta.to_vec(), c);
        c
    }
}
