//! Sparse multivariate polynomials over `F_p`.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector under graded
//! lexicographic order, so two polynomials are equal iff their term maps
//! are equal. No stored coefficient is ever zero.

mod hasse;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, MatrixFp, PrimeField};

pub use hasse::binomial_table;
pub use parse::parse_poly;

/// Exponent vector `s = (s_1, ..., s_n)` ordered graded-lexicographically:
/// by total degree first, then by the exponent of `x1`, then `x2`, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|s| = s_1 + ... + s_n`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn checked_div(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All exponent vectors of length `n` with `|s| = total`, in graded-lex
    /// ascending order.
    pub fn all_of_degree(n: usize, total: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        if n == 0 {
            return if total == 0 {
                vec![MultiIndex(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(n, total, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point of `F_p^n`, stored as canonical residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    field: PrimeField,
    coords: Vec<u64>,
}

impl Point {
    pub fn new(field: PrimeField, coords: &[i64]) -> Self {
        Point {
            field,
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn from_canonical(field: PrimeField, coords: Vec<u64>) -> Self {
        debug_assert!(coords.iter().all(|&c| c < field.modulus()));
        Point { field, coords }
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        Point {
            field,
            coords: vec![0; n],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn balanced(&self) -> Vec<i64> {
        self.coords
            .iter()
            .map(|&c| self.field.balanced(c))
            .collect()
    }

    /// Infinity norm of the balanced representatives.
    pub fn norm(&self) -> u64 {
        self.coords
            .iter()
            .map(|&c| self.field.balanced(c).unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Point) -> Point {
        let f = self.field;
        Point {
            field: f,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Point {
        let f = self.field;
        Point {
            field: f,
            coords: self
                .coords
                .iter()
                .map(|&a| f.mul(a, k % f.modulus()))
                .collect(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.balanced().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    n: usize,
    field: PrimeField,
    terms: BTreeMap<MultiIndex, u64>,
}

/// Arithmetic kinds accepted by [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic on polynomials sharing arity and field.
pub fn poly_arith(kind: PolyOp, f: &MPoly, g: &MPoly) -> Result<MPoly> {
    f.compatible(g)?;
    Ok(match kind {
        PolyOp::Add => f + g,
        PolyOp::Sub => f - g,
        PolyOp::Mul => f * g,
    })
}

impl MPoly {
    pub fn zero(n: usize, field: PrimeField) -> Self {
        MPoly {
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, field: PrimeField, c: u64) -> Self {
        let mut p = Self::zero(n, field);
        p.add_term(MultiIndex::zero(n), c % field.modulus());
        p
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(n: usize, field: PrimeField, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for n = {n}");
        let mut p = Self::zero(n, field);
        p.add_term(MultiIndex::unit(n, i), 1);
        p
    }

    /// Builds a polynomial from `(exponents, canonical or signed coefficient)` pairs.
    pub fn from_terms<I>(n: usize, field: PrimeField, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut p = Self::zero(n, field);
        for (e, c) in terms {
            assert_eq!(e.len(), n);
            p.add_term(MultiIndex(e), field.from_i64(c));
        }
        p
    }

    /// Affine linear form `c0 + sum_i coeffs[i] x_{i+1}` with canonical coefficients.
    pub fn linear(field: PrimeField, coeffs: &[u64], c0: u64) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, field, c0);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::unit(n, i), c % field.modulus());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.total() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::total)
    }

    /// Largest exponent of variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|k| k.0[i]).max()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, u64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn coeff(&self, e: &[u32]) -> u64 {
        self.terms
            .get(&MultiIndex(e.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&MultiIndex, u64)> {
        self.terms.iter().next_back().map(|(k, &c)| (k, c))
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&vec![0; self.n])
    }

    /// Adds `c * x^e` in place, keeping the representation canonical.
    pub(crate) fn add_term(&mut self, e: MultiIndex, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn compatible(&self, other: &MPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: u64) -> MPoly {
        let f = self.field;
        let c = c % f.modulus();
        if c == 0 {
            return MPoly::zero(self.n, f);
        }
        MPoly {
            n: self.n,
            field: f,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.clone(), f.mul(v, c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(self.n, self.field, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_point(&self, a: &Point) -> Result<()> {
        if a.dim() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: a.dim(),
            });
        }
        if a.field() != self.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                a.field().modulus(),
            ));
        }
        Ok(())
    }

    pub fn evaluate(&self, a: &Point) -> Result<FieldElement> {
        self.check_point(a)?;
        Ok(self.field.elem_u(self.eval_raw(a.coords())))
    }

    /// Evaluation at canonical coordinates without arity checks.
    pub fn eval_raw(&self, a: &[u64]) -> u64 {
        let f = self.field;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let m = e.0.iter().zip(a).fold(c, |m, (&k, &x)| {
                if k == 0 {
                    m
                } else {
                    f.mul(m, f.pow(x, k as u64))
                }
            });
            f.add(acc, m)
        })
    }

    /// `f^{(u)} = f(x_1 - u_1, ..., x_n - u_n)`, one variable at a time.
    pub fn shift(&self, u: &Point) -> Result<MPoly> {
        self.check_point(u)?;
        Ok(self.translate(u.coords(), true))
    }

    /// `f(x + sign * c)` with `sign = -1` when `negate` is set.
    fn translate(&self, c: &[u64], negate: bool) -> MPoly {
        let f = self.field;
        let binom = binomial_table(f, self.degree().unwrap_or(0));
        let mut cur = self.clone();
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let t = if negate { f.neg(ci) } else { ci };
            let mut next = MPoly::zero(self.n, f);
            for (e, coef) in cur.terms.iter() {
                let ei = e.0[i];
                // (x_i + t)^ei = sum_k C(ei, k) x_i^k t^(ei - k)
                let mut tp = 1u64;
                for k in (0..=ei).rev() {
                    let mut ne = e.clone();
                    ne.0[i] = k;
                    let c = f.mul(*coef, f.mul(binom[ei as usize][k as usize], tp));
                    next.add_term(ne, c);
                    tp = f.mul(tp, t);
                }
            }
            cur = next;
        }
        cur
    }

    /// Substitutes `x_i <- polys[i]` for every variable; all `polys` share a
    /// common arity, which becomes the arity of the result.
    pub fn compose(&self, polys: &[MPoly]) -> Result<MPoly> {
        if polys.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: polys.len(),
            });
        }
        let f = self.field;
        let m = polys.first().map_or(0, MPoly::nvars);
        for q in polys {
            if q.field != f {
                return Err(Error::FieldMismatch(f.modulus(), q.field.modulus()));
            }
            if q.n != m {
                return Err(Error::ArityMismatch {
                    expected: m,
                    found: q.n,
                });
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MPoly>> = polys
            .iter()
            .map(|q| vec![MPoly::constant(m, f, 1), q.clone()])
            .collect();
        let mut out = MPoly::zero(m, f);
        for (e, &c) in self.terms.iter() {
            let mut term = MPoly::constant(m, f, c);
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &polys[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitutes the linear forms given by the rows of `a`:
    /// `x_i <- sum_j a[i][j] y_j`, producing a polynomial in `a.cols()` variables.
    pub fn substitute_linear(&self, a: &MatrixFp) -> Result<MPoly> {
        if a.rows() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: a.rows(),
            });
        }
        let forms: Vec<MPoly> = (0..a.rows())
            .map(|i| MPoly::linear(self.field, a.row(i), 0))
            .collect();
        if forms.is_empty() {
            return Ok(MPoly {
                n: a.cols(),
                field: self.field,
                terms: self.terms.clone(),
            });
        }
        self.compose(&forms)
    }

    /// Same polynomial viewed in `n + extra` variables (new ones unused).
    pub fn pad_vars(&self, extra: usize) -> MPoly {
        MPoly {
            n: self.n + extra,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(k, &c)| {
                    let mut e = k.0.clone();
                    e.resize(self.n + extra, 0);
                    (MultiIndex(e), c)
                })
                .collect(),
        }
    }

    /// Drops trailing variables, which must not occur.
    pub fn truncate_vars(&self, keep: usize) -> Result<MPoly> {
        let mut out = MPoly::zero(keep, self.field);
        for (k, &c) in self.terms.iter() {
            if k.0[keep..].iter().any(|&e| e != 0) {
                return Err(Error::PreconditionViolated(format!(
                    "polynomial depends on variables beyond x{keep}"
                )));
            }
            out.terms.insert(MultiIndex(k.0[..keep].to_vec()), c);
        }
        Ok(out)
    }

    /// Quotient of an exact division, using graded-lex leading terms.
    ///
    /// Fails when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Result<MPoly> {
        self.compatible(d)?;
        let f = self.field;
        let (dl, dc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let (dl, dinv) = (dl.clone(), f.inv(dc)?);
        let mut r = self.clone();
        let mut q = MPoly::zero(self.n, f);
        while let Some((rl, rc)) = r.leading_term() {
            let e = rl
                .checked_div(&dl)
                .ok_or_else(|| Error::PreconditionViolated("inexact polynomial division".into()))?;
            let c = f.mul(rc, dinv);
            let mut t = MPoly::zero(self.n, f);
            t.add_term(e, c);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Ok(q)
    }

    /// Canonical text form: descending graded-lex, balanced coefficients.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        for (idx, (e, &c)) in self.terms.iter().rev().enumerate() {
            let b = self.field.balanced(c);
            let mag = b.unsigned_abs();
            if idx == 0 {
                if b < 0 {
                    write!(out, "-")?;
                }
            } else {
                write!(out, "{}", if b < 0 { " - " } else { " + " })?;
            }
            let vars: Vec<String> =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, k)
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(out, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(out, "{mag}*")?;
                }
                write!(out, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.compatible(rhs).expect("incompatible polynomials");
        let mut out = self.clone();
        for (k, &c) in rhs.terms.iter() {
            out.add_term(k.clone(), c);
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.compatible(rhs).expect("incompatible polynomials");
        let f = self.field;
        let mut out = self.clone();
        for (k, &c) in rhs.terms.iter() {
            out.add_term(k.clone(), f.neg(c));
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.compatible(rhs).expect("incompatible polynomials");
        let f = self.field;
        let mut out = MPoly::zero(self.n, f);
        for (a, &ca) in self.terms.iter() {
            for (b, &cb) in rhs.terms.iter() {
                out.add_term(a.mul(b), f.mul(ca, cb));
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(self.field.modulus() - 1)
    }
}
