//! Shift-invariance of polynomials and normalization to cylinders.
//!
//! For `f` of degree `d < p`, `f(x - u) = f(x)` holds exactly when the
//! directional derivative `sum_i u_i D_{x_i} f` vanishes identically. That
//! condition is linear in `u`, so the set of invariant directions is the
//! null space of the coefficient matrix of the gradient.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{MatrixFp, PrimeField};
use crate::poly::{MPoly, MultiIndex, Point};

/// Basis of `{u in F_p^n : f = f^(u)}` in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftKernel {
    field: PrimeField,
    n: usize,
    basis: Vec<Vec<u64>>,
}

impl ShiftKernel {
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn basis_points(&self) -> Vec<Point> {
        self.basis
            .iter()
            .map(|b| Point::from_canonical(self.field, b.clone()))
            .collect()
    }

    pub fn balanced_basis(&self) -> Vec<Vec<i64>> {
        self.basis
            .iter()
            .map(|b| b.iter().map(|&c| self.field.balanced(c)).collect())
            .collect()
    }

    /// Whether `v` lies in the span of the basis.
    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.n);
        // The basis has a 1 in each free column and 0 in the other free
        // columns, so the coefficients of v are its free-column entries.
        let f = self.field;
        let mut rest = v.to_vec();
        for b in &self.basis {
            let free = free_column(b, &self.basis);
            let c = rest[free];
            if c == 0 {
                continue;
            }
            for (r, &bi) in rest.iter_mut().zip(b) {
                *r = f.sub(*r, f.mul(c, bi));
            }
        }
        rest.iter().all(|&x| x == 0)
    }
}

fn free_column(b: &[u64], basis: &[Vec<u64>]) -> usize {
    (0..b.len())
        .find(|&j| b[j] == 1 && basis.iter().filter(|o| o[j] != 0).count() == 1)
        .expect("echelon basis has a free column")
}

fn check_degree(f: &MPoly) -> Result<u32> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d as u64 >= f.field().modulus() {
        return Err(Error::DegreeNotBelowP {
            degree: d,
            p: f.field().modulus(),
        });
    }
    Ok(d)
}

/// The matrix whose column `i` holds the coefficients of `D_{x_i} f`, one
/// row per monomial occurring in the gradient, in graded-lex order.
pub fn gradient_matrix(f: &MPoly) -> MatrixFp {
    let grad = f.gradient();
    let monomials: BTreeSet<MultiIndex> = grad
        .iter()
        .flat_map(|g| g.terms().map(|(k, _)| k.clone()))
        .collect();
    let n = f.nvars();
    let mut m = MatrixFp::zero(f.field(), monomials.len(), n);
    for (row, mono) in monomials.iter().enumerate() {
        for (col, g) in grad.iter().enumerate() {
            m.set(row, col, g.coeff(mono.exps()));
        }
    }
    m
}

/// All shift directions fixing `f`. Requires `f != 0` and `deg f < p`.
pub fn shift_kernel(f: &MPoly) -> Result<ShiftKernel> {
    check_degree(f)?;
    Ok(ShiftKernel {
        field: f.field(),
        n: f.nvars(),
        basis: gradient_matrix(f).kernel_basis(),
    })
}

/// Direct test `f^(u) == f` by substitution.
pub fn is_shift_invariant(f: &MPoly, u: &Point) -> Result<bool> {
    if u.is_zero() {
        if u.dim() != f.nvars() {
            return Err(Error::ArityMismatch {
                expected: f.nvars(),
                found: u.dim(),
            });
        }
        return Ok(true);
    }
    Ok(f.shift(u)? == *f)
}

/// `f(x) = reduced((M x)_1, ..., (M x)_{n-m})` with `M = linear_map`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderForm {
    pub linear_map: MatrixFp,
    pub reduced: MPoly,
    pub m: usize,
}

impl CylinderForm {
    /// Substitutes the linear forms back into the reduced polynomial.
    pub fn reconstruct(&self) -> Result<MPoly> {
        self.reduced
            .pad_vars(self.m)
            .substitute_linear(&self.linear_map)
    }

    /// Rows of the linear map, i.e. the forms `l_i(x)`, as balanced integers.
    pub fn linear_forms(&self) -> Vec<Vec<i64>> {
        self.linear_map.to_balanced_rows()
    }

    pub fn summary(&self) -> CylinderSummary {
        CylinderSummary {
            m: self.m,
            reduced_vars: self.reduced.nvars(),
            reduced: self.reduced.to_string(),
            linear_map: self.linear_forms(),
        }
    }
}

/// Serializable view of a [`CylinderForm`].
#[derive(Clone, Debug, Serialize)]
pub struct CylinderSummary {
    pub m: usize,
    pub reduced_vars: usize,
    pub reduced: String,
    pub linear_map: Vec<Vec<i64>>,
}

/// Eliminates one invariant direction `u`.
///
/// Swaps the last coordinate with the largest index `k` having `u_k != 0`,
/// then applies `L = (x_1 - w_1 x_n / w_n, ..., x_{n-1} - w_{n-1} x_n / w_n, x_n / w_n)`
/// with `w` the permuted `u`. The substituted polynomial no longer involves
/// the last variable.
pub fn cylinder_normalize(f: &MPoly, u: &Point) -> Result<CylinderForm> {
    let n = f.nvars();
    if u.dim() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: u.dim(),
        });
    }
    if u.is_zero() {
        return Err(Error::ZeroShift);
    }
    check_degree(f)?;
    if !is_shift_invariant(f, u)? {
        return Err(Error::NotInvariantUnderU);
    }
    let field = f.field();
    let k = (0..n)
        .rev()
        .find(|&i| u.coords()[i] != 0)
        .expect("u is nonzero");
    let last = n - 1;

    let mut perm = MatrixFp::identity(field, n);
    if k != last {
        perm.set(k, k, 0);
        perm.set(last, last, 0);
        perm.set(k, last, 1);
        perm.set(last, k, 1);
    }
    let mut w = u.coords().to_vec();
    w.swap(k, last);
    let wn = w[last];
    let wn_inv = field.inv(wn)?;

    let mut l = MatrixFp::identity(field, n);
    let mut l_inv = MatrixFp::identity(field, n);
    for (i, &wi) in w.iter().enumerate().take(last) {
        l.set(i, last, field.neg(field.mul(wi, wn_inv)));
        l_inv.set(i, last, wi);
    }
    l.set(last, last, wn_inv);
    l_inv.set(last, last, wn);

    let map = l.mul(&perm)?;
    let map_inv = perm.mul(&l_inv)?;
    let substituted = f.substitute_linear(&map_inv)?;
    let reduced = substituted.truncate_vars(last)?;
    Ok(CylinderForm {
        linear_map: map,
        reduced,
        m: 1,
    })
}

fn block_diag_identity(block: &MatrixFp, n: usize) -> MatrixFp {
    let k = block.rows();
    let mut out = MatrixFp::identity(block.field(), n);
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, block.get(i, j));
        }
    }
    out
}

/// Eliminates every invariant direction of `f`, one kernel basis vector at
/// a time, composing the maps `M = M_m o ... o M_1` with `M_j = L_j x id`.
pub fn full_cylinder_reduction(f: &MPoly) -> Result<CylinderForm> {
    let n = f.nvars();
    let field = f.field();
    let kernel = shift_kernel(f)?;
    let m = kernel.dim();
    let mut map = MatrixFp::identity(field, n);
    let mut h = f.clone();
    for (j, b) in kernel.basis().iter().enumerate() {
        let k = n - j;
        let image = map.mul_vec(b);
        let direction = Point::from_canonical(field, image[..k].to_vec());
        let step = cylinder_normalize(&h, &direction)?;
        map = block_diag_identity(&step.linear_map, n).mul(&map)?;
        h = step.reduced;
    }

    // images of the kernel basis: lower antitriangular in the last m rows
    for (j, b) in kernel.basis().iter().enumerate() {
        let image = map.mul_vec(b);
        for i in 0..m {
            let v = image[n - m + i];
            if i + 1 + j < m {
                assert_eq!(v, 0, "entry above the antidiagonal must vanish");
            } else if i + 1 + j == m {
                assert_eq!(v, 1, "antidiagonal entry must be 1");
            }
        }
    }
    assert!(map.inverse().is_some(), "composed map must be invertible");
    if !h.is_constant() {
        debug_assert_eq!(shift_kernel(&h)?.dim(), 0);
    }
    Ok(CylinderForm {
        linear_map: map,
        reduced: h,
        m,
    })
}

/// Checks `(grad f)(a) . u = 0` at every `a` in `pts`, a necessary
/// consequence of `u`-invariance at zeros of `f`.
pub fn gradient_orthogonality_check(f: &MPoly, u: &Point, pts: &[Point]) -> Result<bool> {
    if !is_shift_invariant(f, u)? {
        return Err(Error::PreconditionViolated(
            "f is not invariant under u".into(),
        ));
    }
    let field = f.field();
    let grad = f.gradient();
    for a in pts {
        if !f.evaluate(a)?.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "f does not vanish at {a}"
            )));
        }
        let dot = grad.iter().zip(u.coords()).fold(0, |acc, (g, &ui)| {
            field.add(acc, field.mul(g.eval_raw(a.coords()), ui))
        });
        if dot != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(s: &str, n: usize, p: u64) -> MPoly {
        parse_poly(s, n, fp(p)).unwrap()
    }

    fn all_points(f: PrimeField, n: usize) -> Vec<Point> {
        let p = f.modulus();
        (0..p.pow(n as u32))
            .map(|mut c| {
                let coords = (0..n)
                    .map(|_| {
                        let d = c % p;
                        c /= p;
                        d
                    })
                    .collect();
                Point::from_canonical(f, coords)
            })
            .collect()
    }

    #[test]
    fn kernel_of_linear_form() {
        let f = poly("x1 + 2*x2 + 3*x3", 3, 7);
        let k = shift_kernel(&f).unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.basis(), &[vec![5, 1, 0], vec![4, 0, 1]]);
        for u in all_points(fp(7), 3) {
            assert_eq!(
                is_shift_invariant(&f, &u).unwrap(),
                k.contains(u.coords()),
                "{u}"
            );
        }
    }

    #[test]
    fn shift_free_examples() {
        assert_eq!(shift_kernel(&poly("x2 - x1^2", 2, 7)).unwrap().dim(), 0);
        assert_eq!(shift_kernel(&poly("x1*x4 - x2*x3", 4, 7)).unwrap().dim(), 0);
        assert_eq!(shift_kernel(&poly("3", 4, 7)).unwrap().dim(), 4);
    }

    #[test]
    fn kernel_errors() {
        assert_eq!(
            shift_kernel(&MPoly::zero(2, fp(5))),
            Err(Error::ZeroPolynomial)
        );
        assert_eq!(
            shift_kernel(&poly("x1^5 + x2", 2, 5)),
            Err(Error::DegreeNotBelowP { degree: 5, p: 5 })
        );
        // the gradient of x1^5 vanishes mod 5 although x1^5 is not invariant
        assert!(full_cylinder_reduction(&poly("x1^5", 1, 5)).is_err());
    }

    #[test]
    fn invariance_examples() {
        let f5 = fp(5);
        assert!(is_shift_invariant(&poly("x1 - x2", 2, 5), &Point::new(f5, &[1, 1])).unwrap());
        assert!(!is_shift_invariant(&poly("x1^2", 1, 5), &Point::new(f5, &[1])).unwrap());
        assert!(is_shift_invariant(&poly("x1^2 + x2", 2, 5), &Point::zero(f5, 2)).unwrap());
    }

    #[test]
    fn normalize_examples() {
        let f5 = fp(5);
        let f = poly("x1 - x2", 2, 5);
        let c = cylinder_normalize(&f, &Point::new(f5, &[1, 1])).unwrap();
        assert_eq!(c.m, 1);
        assert_eq!(c.reduced, poly("x1", 1, 5));
        assert_eq!(c.linear_forms(), vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(c.reconstruct().unwrap(), f);

        let f7 = fp(7);
        let g = poly("x1", 2, 7);
        let c = cylinder_normalize(&g, &Point::new(f7, &[0, 1])).unwrap();
        assert_eq!(c.reduced, poly("x1", 1, 7));
        assert_eq!(c.reconstruct().unwrap(), g);

        assert_eq!(
            cylinder_normalize(&poly("x1^2", 2, 7), &Point::new(f7, &[1, 0])),
            Err(Error::NotInvariantUnderU)
        );
        assert_eq!(
            cylinder_normalize(&g, &Point::zero(f7, 2)),
            Err(Error::ZeroShift)
        );
    }

    #[test]
    fn normalize_with_permutation() {
        let f7 = fp(7);
        // invariant under (1, 0, 0) only in the first coordinate; k = 0
        let f = poly("x2^2 + x3", 3, 7);
        let c = cylinder_normalize(&f, &Point::new(f7, &[3, 0, 0])).unwrap();
        assert_eq!(c.reduced.nvars(), 2);
        assert_eq!(c.reconstruct().unwrap(), f);
    }

    #[test]
    fn full_reduction_examples() {
        let f = poly("x1 + 2*x2 + 3*x3", 3, 7);
        let c = full_cylinder_reduction(&f).unwrap();
        assert_eq!(c.m, 2);
        assert_eq!(c.reduced.nvars(), 1);
        assert_eq!(c.reduced.degree(), Some(1));
        assert_eq!(c.reconstruct().unwrap(), f);

        let g = poly("x2 - x1^2", 2, 7);
        let c = full_cylinder_reduction(&g).unwrap();
        assert_eq!(c.m, 0);
        assert_eq!(c.reduced, g);
        assert_eq!(c.linear_map, MatrixFp::identity(fp(7), 2));

        let k = poly("4", 3, 7);
        let c = full_cylinder_reduction(&k).unwrap();
        assert_eq!(c.m, 3);
        assert_eq!(c.reduced.nvars(), 0);
        assert_eq!(c.reduced.constant_term(), 4);
        assert_eq!(c.reconstruct().unwrap(), k);
    }

    #[test]
    fn orthogonality_examples() {
        let f5 = fp(5);
        let f = poly("x1 - x2", 2, 5);
        let zeros: Vec<Point> = all_points(f5, 2)
            .into_iter()
            .filter(|a| f.eval_raw(a.coords()) == 0)
            .collect();
        assert_eq!(zeros.len(), 5);
        assert!(gradient_orthogonality_check(&f, &Point::new(f5, &[1, 1]), &zeros).unwrap());
        let g = poly("x1", 2, 5);
        let pts: Vec<Point> = (0..5).map(|c| Point::new(f5, &[0, c])).collect();
        assert!(gradient_orthogonality_check(&g, &Point::new(f5, &[0, 1]), &pts).unwrap());
        assert!(
            gradient_orthogonality_check(&poly("x1^2 + x2", 2, 5), &Point::zero(f5, 2), &[])
                .unwrap()
        );
        assert!(matches!(
            gradient_orthogonality_check(&g, &Point::new(f5, &[1, 0]), &pts),
            Err(Error::PreconditionViolated(_))
        ));
    }

    proptest! {
        #[test]
        fn invariance_closed_under_multiples(a in 0i64..7, b in 0i64..7, c in 1i64..7, k in 0u64..7) {
            // g(a x1 + b x2) is invariant under (b, -a) direction
            let f7 = fp(7);
            let lin = MPoly::from_terms(2, f7, vec![(vec![1, 0], a), (vec![0, 1], b)]);
            let f = &lin.pow(3) + &lin.scale(c as u64);
            let u = Point::new(f7, &[b, -a]);
            prop_assert!(is_shift_invariant(&f, &u).unwrap());
            prop_assert!(is_shift_invariant(&f, &u.scale(k)).unwrap());
        }
    }
}
