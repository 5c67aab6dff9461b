//! Hasse derivatives, homogeneous parts and the Hasse-Taylor expansion.

use super::{MPoly, MultiIndex, Point};
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Pascal triangle `C(i, k) mod p` for `0 <= k <= i <= max`.
pub fn binomial_table(field: PrimeField, max: u32) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max as usize + 1);
    for i in 0..=max as usize {
        let mut row = vec![1u64; i + 1];
        for k in 1..i {
            row[k] = field.add(rows[i - 1][k - 1], rows[i - 1][k]);
        }
        rows.push(row);
    }
    rows
}

impl MPoly {
    /// `k`-th Hasse derivative with respect to the variable `var` (0-based):
    /// each term `c x_var^e` becomes `C(e, k) c x_var^(e-k)`.
    pub fn hasse(&self, var: usize, k: u32) -> Result<MPoly> {
        if var >= self.n {
            return Err(Error::VariableIndexOutOfRange {
                index: var + 1,
                n: self.n,
            });
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let f = self.field;
        let binom = binomial_table(f, self.degree_in(var).unwrap_or(0));
        let mut out = MPoly::zero(self.n, f);
        for (e, &c) in self.terms.iter() {
            let ei = e.0[var];
            if ei < k {
                continue;
            }
            let mut ne = e.clone();
            ne.0[var] = ei - k;
            out.add_term(ne, f.mul(c, binom[ei as usize][k as usize]));
        }
        Ok(out)
    }

    /// `D^(s) f`, the composition of the partial Hasse derivatives `D^(s_i)_{x_i}`.
    /// Any negative entry yields zero.
    pub fn hasse_multi(&self, s: &[i64]) -> MPoly {
        assert_eq!(
            s.len(),
            self.n,
            "multi-index length must equal the variable count"
        );
        if s.iter().any(|&k| k < 0) {
            return MPoly::zero(self.n, self.field);
        }
        let mut cur = self.clone();
        for (i, &k) in s.iter().enumerate() {
            if k > 0 {
                cur = cur.hasse(i, k as u32).expect("index in range");
            }
            if cur.is_zero() {
                break;
            }
        }
        cur
    }

    /// Vector of first partial Hasse derivatives.
    pub fn gradient(&self) -> Vec<MPoly> {
        (0..self.n)
            .map(|i| self.hasse(i, 1).expect("index in range"))
            .collect()
    }

    /// Degree-`j` homogeneous part.
    pub fn homogeneous_component(&self, j: u32) -> MPoly {
        MPoly {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.total() == j)
                .map(|(k, &c)| (k.clone(), c))
                .collect(),
        }
    }

    /// `sum_{|s| = j} u^s D^(s) f`.
    pub fn directional_hasse(&self, u: &[u64], j: u32) -> MPoly {
        assert_eq!(u.len(), self.n);
        let f = self.field;
        let mut out = MPoly::zero(self.n, f);
        for s in MultiIndex::all_of_degree(self.n, j) {
            let us =
                s.0.iter()
                    .zip(u)
                    .fold(1, |acc, (&e, &ui)| f.mul(acc, f.pow(ui, e as u64)));
            if us == 0 {
                continue;
            }
            let sv: Vec<i64> = s.0.iter().map(|&e| e as i64).collect();
            out = &out + &self.hasse_multi(&sv).scale(us);
        }
        out
    }

    /// Right-hand side of the Hasse-Taylor formula at centre `y`:
    /// `sum_{|s| <= deg f} (D^(s) f)(y) (x - y)^s`, expanded.
    pub fn taylor_reconstruct(&self, y: &Point) -> Result<MPoly> {
        self.check_point(y)?;
        let f = self.field;
        let n = self.n;
        let Some(d) = self.degree() else {
            return Ok(MPoly::zero(n, f));
        };
        let lin: Vec<MPoly> = (0..n)
            .map(|i| {
                let mut c = vec![0; n];
                c[i] = 1;
                MPoly::linear(f, &c, f.neg(y.coords()[i]))
            })
            .collect();
        let mut out = MPoly::zero(n, f);
        for total in 0..=d {
            for s in MultiIndex::all_of_degree(n, total) {
                let sv: Vec<i64> = s.0.iter().map(|&e| e as i64).collect();
                let c = self.hasse_multi(&sv).eval_raw(y.coords());
                if c == 0 {
                    continue;
                }
                let mut term = MPoly::constant(n, f, c);
                for (i, &e) in s.0.iter().enumerate() {
                    if e > 0 {
                        term = &term * &lin[i].pow(e);
                    }
                }
                out = &out + &term;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_poly;
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(s: &str, n: usize, p: u64) -> MPoly {
        parse_poly(s, n, fp(p)).unwrap()
    }

    #[test]
    fn univariate_hasse() {
        assert_eq!(poly("x1^4", 1, 5).hasse(0, 2).unwrap(), poly("x1^2", 1, 5));
        assert_eq!(
            poly("x1^3", 1, 7).hasse(0, 1).unwrap(),
            poly("3*x1^2", 1, 7)
        );
        assert!(poly("x1^3 + x1", 1, 7).hasse(0, 4).unwrap().is_zero());
        assert_eq!(
            poly("x1", 1, 7).hasse(1, 1),
            Err(Error::VariableIndexOutOfRange { index: 2, n: 1 })
        );
        // the p-th Hasse derivative of x^p is 1 even though the ordinary one vanishes
        assert_eq!(poly("x1^5", 1, 5).hasse(0, 5).unwrap(), poly("1", 1, 5));
    }

    #[test]
    fn multi_hasse() {
        let f = poly("x1*x2", 2, 7);
        assert_eq!(f.hasse_multi(&[1, 1]), poly("1", 2, 7));
        assert_eq!(f.hasse_multi(&[0, 0]), f);
        assert!(f.hasse_multi(&[-1, 1]).is_zero());
    }

    #[test]
    fn gradient_examples() {
        let det2 = poly("x1*x4 - x2*x3", 4, 7);
        let g = det2.gradient();
        assert_eq!(
            g,
            vec![
                poly("x4", 4, 7),
                poly("-x3", 4, 7),
                poly("-x2", 4, 7),
                poly("x1", 4, 7)
            ]
        );
        assert!(poly("5", 3, 7).gradient().iter().all(MPoly::is_zero));
        assert_eq!(poly("x1^2", 1, 7).gradient(), vec![poly("2*x1", 1, 7)]);
    }

    #[test]
    fn homogeneous_parts() {
        let f = poly("x1^2 + x1 + 1", 1, 7);
        assert_eq!(f.homogeneous_component(1), poly("x1", 1, 7));
        assert!(f.homogeneous_component(3).is_zero());
        let g = poly("x1*x2 + x2^2", 2, 7);
        assert_eq!(g.homogeneous_component(2), g);
    }

    #[test]
    fn taylor_examples() {
        let f7 = fp(7);
        let f = poly("x1^2", 1, 7);
        assert_eq!(f.taylor_reconstruct(&Point::new(f7, &[1])).unwrap(), f);
        let c = poly("4", 2, 7);
        assert_eq!(c.taylor_reconstruct(&Point::new(f7, &[3, 2])).unwrap(), c);
    }

    fn small_poly(p: u64) -> impl Strategy<Value = MPoly> {
        (1usize..=3).prop_flat_map(move |n| {
            prop::collection::vec((prop::collection::vec(0u32..=2, n), 0i64..p as i64), 0..6)
                .prop_map(move |ts| MPoly::from_terms(n, fp(p), ts))
        })
    }

    proptest! {
        #[test]
        fn homogeneous_decomposition_sums_to_f(f in small_poly(7)) {
            let mut acc = MPoly::zero(f.nvars(), f.field());
            for j in 0..=f.degree().unwrap_or(0) {
                acc = &acc + &f.homogeneous_component(j);
            }
            prop_assert_eq!(acc, f);
        }

        #[test]
        fn univariate_composition(cs in prop::collection::vec(0i64..11, 1..8), k in 0u32..4, l in 0u32..4) {
            let f11 = fp(11);
            let f = MPoly::from_terms(1, f11, cs.iter().enumerate().map(|(i, &c)| (vec![i as u32], c)));
            let lhs = f.hasse(0, l).unwrap().hasse(0, k).unwrap();
            let rhs = f.hasse(0, k + l).unwrap().scale(f11.binomial((k + l) as u64, l as u64));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_of_product((f, g) in (1usize..=3).prop_flat_map(|n| {
            let side = prop::collection::vec((prop::collection::vec(0u32..=2, n), 1i64..5), 1..6)
                .prop_map(move |ts| MPoly::from_terms(n, fp(5), ts));
            (side.clone(), side)
        })) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!((&f * &g).degree(), Some(f.degree().unwrap() + g.degree().unwrap()));
        }
    }
}
