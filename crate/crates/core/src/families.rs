//! Constructors for the worked examples: parallel hyperplanes, graphs,
//! determinantal varieties, generic resultants and discriminants, linear
//! forms from equal subset sum, and a sampler for decomposable polynomials.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumeration::{Metadata, PointSet, VarietyInstance};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::MPoly;
use crate::shift::shift_kernel;

/// Largest supported `n + m` for symbolic Sylvester determinants.
pub const MAX_SYMBOLIC: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    ParallelHyperplanes,
    Graph,
    Determinantal,
    Discriminant,
    Resultant,
    DecomposableSample,
    EssLinearForm,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::ParallelHyperplanes => "parallel_hyperplanes",
            FamilyKind::Graph => "graph",
            FamilyKind::Determinantal => "determinantal",
            FamilyKind::Discriminant => "discriminant",
            FamilyKind::Resultant => "resultant",
            FamilyKind::DecomposableSample => "decomposable_sample",
            FamilyKind::EssLinearForm => "ess_linear_form",
        }
    }
}

/// A variety from one of the example families with certified metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub parameters: BTreeMap<String, i64>,
    pub instance: VarietyInstance,
    pub predictions: BTreeMap<String, Value>,
    /// No nonzero shift of `F_p^n` fixes the variety.
    pub shift_free: bool,
}

impl FamilySpec {
    fn new(
        kind: FamilyKind,
        params: &[(&str, i64)],
        instance: VarietyInstance,
        shift_free: bool,
    ) -> Self {
        FamilySpec {
            kind,
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            instance,
            predictions: BTreeMap::new(),
            shift_free,
        }
    }

    fn predict(&mut self, key: &str, v: impl Into<Value>) {
        self.predictions.insert(key.to_string(), v.into());
    }

    /// The single defining polynomial, when there is exactly one.
    pub fn poly(&self) -> Option<&MPoly> {
        match self.instance.polys.as_slice() {
            [f] => Some(f),
            _ => None,
        }
    }

    /// Adds the radius-dependent closed forms (parallel hyperplanes only).
    pub fn predict_for_radius(&mut self, h: u64) {
        if self.kind != FamilyKind::ParallelHyperplanes {
            return;
        }
        let d = self.parameters["d"] as u64;
        let pr = hyperplane_prediction(d, self.instance.n, self.instance.field.modulus(), h);
        self.predict("h", h);
        self.predict("valid", pr.valid);
        self.predict(
            "countSumset",
            pr.count_sumset.map_or(Value::Null, Value::from),
        );
        self.predict("delta", pr.delta.map_or(Value::Null, Value::from));
    }

    pub fn to_json_value(&self) -> Value {
        let mut v = self.instance.to_json_value();
        let obj = v.as_object_mut().expect("object");
        obj.insert("kind".into(), json!(self.kind.name()));
        obj.insert("parameters".into(), json!(self.parameters));
        obj.insert("shiftFree".into(), json!(self.shift_free));
        obj.insert("predictions".into(), json!(self.predictions));
        v
    }
}

fn checked_pow(b: u64, e: usize) -> Option<u64> {
    b.checked_pow(u32::try_from(e).ok()?)
}

/// Closed forms for `d` parallel hyperplanes and `U_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperplanePrediction {
    pub count_x: Option<u64>,
    pub count_sumset: Option<u64>,
    pub delta: Option<u64>,
    /// `p > d + 2h`, the regime where the closed forms hold.
    pub valid: bool,
}

pub fn hyperplane_prediction(d: u64, n: usize, p: u64, h: u64) -> HyperplanePrediction {
    let pn1 = checked_pow(p, n - 1);
    let ball = checked_pow(2 * h + 1, n);
    let count_x = pn1.and_then(|q| q.checked_mul(d));
    let count_sumset = pn1.and_then(|q| q.checked_mul(d + 2 * h));
    // Δ = p^{n−1}(d(2h+1)^n − (d+2h))
    let delta = pn1
        .zip(ball)
        .and_then(|(q, b)| q.checked_mul(d.checked_mul(b)?.checked_sub(d + 2 * h)?));
    HyperplanePrediction {
        count_x,
        count_sumset,
        delta,
        valid: p > d + 2 * h,
    }
}

/// `x1(x1 − 1)···(x1 − (d−1)) = 0` in `F_p^n`.
pub fn parallel_hyperplanes(d: u32, n: usize, field: PrimeField) -> Result<FamilySpec> {
    let p = field.modulus();
    if d < 1 || p <= d as u64 {
        return Err(Error::DegreeNotBelowP { degree: d, p });
    }
    if n < 2 {
        return Err(Error::Invalid("parallel hyperplanes need n >= 2".into()));
    }
    let mut f = MPoly::constant(n, field, 1);
    for k in 0..d as u64 {
        f = &f * &(&MPoly::var(n, field, 0) - &MPoly::constant(n, field, k));
    }
    let meta = Metadata {
        absolutely_irreducible: d == 1,
        ..Metadata::new(n as u32 - 1, d, d, d)
    };
    let inst = VarietyInstance::new(field, n, vec![f], Some(meta))?;
    let mut spec = FamilySpec::new(
        FamilyKind::ParallelHyperplanes,
        &[("d", d as i64), ("n", n as i64)],
        inst,
        false,
    );
    let pr = hyperplane_prediction(d as u64, n, p, 1);
    spec.predict("countX", pr.count_x.map_or(Value::Null, Value::from));
    Ok(spec)
}

/// The graph `x_n = g(x_1, …, x_{n−1})`.
pub fn graph_variety(g: &MPoly) -> Result<FamilySpec> {
    let field = g.field();
    let deg = g.degree().unwrap_or(0);
    if deg < 2 {
        return Err(Error::DegreeTooSmall(deg));
    }
    if deg as u64 >= field.modulus() {
        return Err(Error::DegreeNotBelowP {
            degree: deg,
            p: field.modulus(),
        });
    }
    let n = g.nvars() + 1;
    let f = &MPoly::var(n, field, n - 1) - &g.pad_vars(1);
    let kernel = shift_kernel(&f)?;
    let meta = Metadata {
        absolutely_irreducible: true,
        ..Metadata::new(n as u32 - 1, deg, 1, deg)
    };
    let inst = VarietyInstance::new(field, n, vec![f], Some(meta))?;
    let mut spec = FamilySpec::new(
        FamilyKind::Graph,
        &[("n", n as i64), ("deg", deg as i64)],
        inst,
        kernel.dim() == 0,
    );
    spec.predict(
        "countX",
        checked_pow(field.modulus(), n - 1).map_or(Value::Null, Value::from),
    );
    spec.predict("kernelDim", kernel.dim());
    spec.predict("g", g.to_text());
    Ok(spec)
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Π_{0≤i<n−s} C(m+i, s) / C(s+i, s)`, the degree of the rank-`≤ s` locus.
pub fn determinantal_degree(m: usize, n: usize, s: usize) -> u64 {
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..(n - s) as u64 {
        num *= binom(m as u64 + i, s as u64);
        den *= binom(s as u64 + i, s as u64);
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    assert_eq!(den, 1, "determinantal degree must be an integer");
    u64::try_from(num).expect("degree fits in u64")
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `(s+1)`-minors of the generic `m × n` matrix (variables row-major).
pub fn determinantal_minors(m: usize, n: usize, s: usize, field: PrimeField) -> Result<FamilySpec> {
    if m == 0 || n == 0 || s >= m.min(n) {
        return Err(Error::RankBoundInvalid { s, min: m.min(n) });
    }
    let d = determinantal_degree(m, n, s);
    if d >= field.modulus() {
        return Err(Error::DegreeNotBelowP {
            degree: d as u32,
            p: field.modulus(),
        });
    }
    let nv = m * n;
    let mut polys = Vec::new();
    for rows in combinations(m, s + 1) {
        for cols in combinations(n, s + 1) {
            let mat: Vec<Vec<MPoly>> = rows
                .iter()
                .map(|&i| {
                    cols.iter()
                        .map(|&j| MPoly::var(nv, field, i * n + j))
                        .collect()
                })
                .collect();
            polys.push(determinant(&mat)?);
        }
    }
    let r = s * (m + n - s);
    let meta = Metadata {
        absolutely_irreducible: true,
        ..Metadata::new(r as u32, d as u32, 1, d as u32)
    };
    let inst = VarietyInstance::new(field, nv, polys, Some(meta))?;
    let params = [("m", m as i64), ("n", n as i64), ("s", s as i64)];
    let mut spec = FamilySpec::new(FamilyKind::Determinantal, &params, inst, true);
    spec.predict("r", r);
    spec.predict("d", d);
    Ok(spec)
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn determinant(mat: &[Vec<MPoly>]) -> Result<MPoly> {
    let k = mat.len();
    let first = mat
        .first()
        .and_then(|r| r.first())
        .ok_or_else(|| Error::Invalid("empty matrix".into()))?;
    let (nv, field) = (first.nvars(), first.field());
    if mat.iter().any(|r| r.len() != k) {
        return Err(Error::Invalid("matrix is not square".into()));
    }
    let mut a: Vec<Vec<MPoly>> = mat.to_vec();
    let mut prev = MPoly::constant(nv, field, 1);
    let mut negate = false;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&i| !a[i][c].is_zero()) else {
            return Ok(MPoly::zero(nv, field));
        };
        if piv != c {
            a.swap(piv, c);
            negate = !negate;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let num = &(&a[c][c] * &a[i][j]) - &(&a[i][c] * &a[c][j]);
                a[i][j] = num.exact_div(&prev)?;
            }
            a[i][c] = MPoly::zero(nv, field);
        }
        prev = a[c][c].clone();
    }
    let det = a[k - 1][k - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Sylvester matrix of `f = Σ fa[i] x^i` (degree `n`) and `g = Σ gb[j] x^j` (degree `m`).
pub fn sylvester_matrix(fa: &[MPoly], gb: &[MPoly]) -> Vec<Vec<MPoly>> {
    let (n, m) = (fa.len() - 1, gb.len() - 1);
    let zero = MPoly::zero(fa[0].nvars(), fa[0].field());
    let size = n + m;
    let mut rows = Vec::with_capacity(size);
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in fa.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in gb.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `res_{n,m}` in the variables `a_0..a_n, b_0..b_m` = `x1..x_{n+m+2}`.
pub fn generic_resultant(n: usize, m: usize, field: PrimeField) -> Result<FamilySpec> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid(
            "resultant degrees must be at least 1".into(),
        ));
    }
    if n + m > MAX_SYMBOLIC {
        return Err(Error::SymbolicSizeExceeded(n + m));
    }
    let bound = (n + m + 2) as u64;
    if field.modulus() <= bound {
        return Err(Error::PrimeTooSmall {
            p: field.modulus(),
            bound,
        });
    }
    let nv = n + m + 2;
    let fa: Vec<MPoly> = (0..=n).map(|i| MPoly::var(nv, field, i)).collect();
    let gb: Vec<MPoly> = (0..=m).map(|j| MPoly::var(nv, field, n + 1 + j)).collect();
    let res = determinant(&sylvester_matrix(&fa, &gb))?;
    let kernel = shift_kernel(&res)?;
    let d = (n + m) as u32;
    let meta = Metadata {
        absolutely_irreducible: true,
        ..Metadata::new(d + 1, d, 1, d)
    };
    let inst = VarietyInstance::new(field, nv, vec![res.clone()], Some(meta))?;
    let mut spec = FamilySpec::new(
        FamilyKind::Resultant,
        &[("n", n as i64), ("m", m as i64)],
        inst,
        kernel.dim() == 0,
    );
    spec.predict("degree", res.degree().unwrap_or(0));
    spec.predict("kernelDim", kernel.dim());
    Ok(spec)
}

/// `disc_n = Res(f, Df)` in `a_0..a_n` = `x1..x_{n+1}`, without dividing by `a_n`.
pub fn generic_discriminant(n: usize, field: PrimeField) -> Result<FamilySpec> {
    if n < 2 {
        return Err(Error::DegreeTooSmall(n as u32));
    }
    if 2 * n - 1 > MAX_SYMBOLIC {
        return Err(Error::SymbolicSizeExceeded(2 * n - 1));
    }
    if field.modulus() <= n as u64 {
        return Err(Error::PrimeTooSmall {
            p: field.modulus(),
            bound: n as u64,
        });
    }
    let nv = n + 1;
    let fa: Vec<MPoly> = (0..=n).map(|i| MPoly::var(nv, field, i)).collect();
    let df: Vec<MPoly> = (1..=n)
        .map(|i| fa[i].scale(i as u64 % field.modulus()))
        .collect();
    let disc = determinant(&sylvester_matrix(&fa, &df))?;
    let d = (2 * n - 1) as u32;
    let kernel_dim = if field.modulus() > d as u64 {
        Some(shift_kernel(&disc)?.dim())
    } else {
        None
    };
    let meta = Metadata {
        absolutely_irreducible: true,
        ..Metadata::new(n as u32, d, 1, d)
    };
    let inst = VarietyInstance::new(field, nv, vec![disc.clone()], Some(meta))?;
    let mut spec = FamilySpec::new(
        FamilyKind::Discriminant,
        &[("n", n as i64)],
        inst,
        kernel_dim.is_none_or(|k| k == 0),
    );
    spec.predict("degree", disc.degree().unwrap_or(0));
    spec.predict("kernelDim", kernel_dim.map_or(Value::Null, Value::from));
    Ok(spec)
}

/// The hyperplane `Σ a_i x_i = 0` attached to an equal subset sum instance.
pub fn ess_linear_form(a: &[u64], field: PrimeField) -> Result<FamilySpec> {
    if a.is_empty() {
        return Err(Error::Invalid("empty instance".into()));
    }
    let n = a.len();
    let f = MPoly::linear(field, a, 0);
    let meta = if f.is_zero() {
        Metadata {
            absolutely_irreducible: true,
            ..Metadata::new(n as u32, 1, 1, 1)
        }
    } else {
        Metadata {
            absolutely_irreducible: true,
            ..Metadata::new(n as u32 - 1, 1, 1, 1)
        }
    };
    let shift_free = n == 1 && !f.is_zero();
    let inst = VarietyInstance::new(field, n, vec![f], Some(meta))?;
    let params: Vec<(String, i64)> = a
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("a{}", i + 1), v as i64))
        .collect();
    let params: Vec<(&str, i64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    Ok(FamilySpec::new(
        FamilyKind::EssLinearForm,
        &params,
        inst,
        shift_free,
    ))
}

/// Coefficients (constant first) of `g ∘ h`.
pub fn compose_univariate(field: PrimeField, g: &[u64], h: &[u64]) -> Vec<u64> {
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        out
    };
    // Horner: (((g_l) h + g_{l−1}) h + …)
    let mut acc = vec![*g.last().unwrap_or(&0)];
    for &c in g.iter().rev().skip(1) {
        acc = mul(&acc, h);
        acc[0] = field.add(acc[0], c);
    }
    acc
}

/// `count` distinct coefficient vectors `(f_0, …, f_{ℓm})` of compositions
/// `g ∘ h` with `deg g = ℓ` and `h` monic original of degree `m`.
pub fn decomposable_sample<R: Rng>(
    ell: u32,
    m: u32,
    field: PrimeField,
    count: usize,
    rng: &mut R,
) -> Result<PointSet> {
    if ell < 2 || m < 2 {
        return Err(Error::DegreeTooSmall(ell.min(m)));
    }
    let n = (ell * m) as u64;
    let p = field.modulus();
    if p <= n {
        return Err(Error::PrimeTooSmall { p, bound: n });
    }
    let space = (p as f64).powi((ell + m) as i32);
    if (count as f64) > space / 2.0 {
        return Err(Error::Invalid(format!(
            "{count} samples requested from a space of about {space} compositions"
        )));
    }
    let mut data = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while seen.len() < count {
        let mut g: Vec<u64> = (0..ell).map(|_| rng.gen_range(0..p)).collect();
        g.push(rng.gen_range(1..p));
        let mut h = vec![0u64];
        h.extend((1..m).map(|_| rng.gen_range(0..p)));
        h.push(1);
        let f = compose_univariate(field, &g, &h);
        if seen.insert(f.clone()) {
            data.extend(f);
        }
    }
    Ok(PointSet::from_flat(field, n as usize + 1, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{ball, compute_delta, rational_points, DEFAULT_BUDGET};
    use crate::poly::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn laplace(mat: &[Vec<MPoly>]) -> MPoly {
        if mat.len() == 1 {
            return mat[0][0].clone();
        }
        let mut acc = MPoly::zero(mat[0][0].nvars(), mat[0][0].field());
        for j in 0..mat.len() {
            let minor: Vec<Vec<MPoly>> = mat[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, c)| c.clone())
                        .collect()
                })
                .collect();
            let t = &mat[0][j] * &laplace(&minor);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn hyperplane_predictions() {
        let spec = parallel_hyperplanes(2, 2, fp(7)).unwrap();
        assert_eq!(spec.predictions["countX"], json!(14));
        let pr = hyperplane_prediction(2, 2, 7, 1);
        assert_eq!(
            (pr.count_sumset, pr.delta, pr.valid),
            (Some(28), Some(98), true)
        );
        assert_eq!(hyperplane_prediction(1, 2, 7, 1).delta, Some(42));
        assert!(!hyperplane_prediction(3, 2, 5, 1).valid);
        assert_eq!(
            parallel_hyperplanes(7, 2, fp(7)).unwrap_err(),
            Error::DegreeNotBelowP { degree: 7, p: 7 }
        );

        let x = rational_points(&spec.instance, DEFAULT_BUDGET).unwrap();
        let r = compute_delta(&x, &ball(1, 2, fp(7)).unwrap()).unwrap();
        assert_eq!(r.delta, 98);
        let mut spec = spec;
        spec.predict_for_radius(1);
        assert_eq!(spec.predictions["delta"], json!(98));
        assert_eq!(spec.predictions["valid"], json!(true));
    }

    #[test]
    fn graph_examples() {
        let g = parse_poly("x1^2", 1, fp(7)).unwrap();
        let spec = graph_variety(&g).unwrap();
        assert_eq!(
            rational_points(&spec.instance, DEFAULT_BUDGET)
                .unwrap()
                .len(),
            7
        );
        assert!(spec.shift_free);
        let g = parse_poly("x1^3 + x1", 1, fp(11)).unwrap();
        let spec = graph_variety(&g).unwrap();
        assert_eq!(
            rational_points(&spec.instance, DEFAULT_BUDGET)
                .unwrap()
                .len(),
            11
        );
        assert_eq!(spec.predictions["kernelDim"], json!(0));
        assert_eq!(
            graph_variety(&parse_poly("x1", 1, fp(7)).unwrap()).unwrap_err(),
            Error::DegreeTooSmall(1)
        );
        // g not depending on x2 leaves the x2 direction invariant
        let g = parse_poly("x1^2", 2, fp(7)).unwrap();
        assert!(!graph_variety(&g).unwrap().shift_free);
    }

    #[test]
    fn determinantal_examples() {
        let f7 = fp(7);
        let spec = determinantal_minors(2, 2, 1, f7).unwrap();
        assert_eq!(
            spec.instance.polys,
            vec![parse_poly("x1*x4 - x2*x3", 4, f7).unwrap()]
        );
        let meta = spec.instance.metadata().unwrap();
        assert_eq!((meta.r, meta.d), (3, 2));
        let spec = determinantal_minors(3, 3, 1, fp(11)).unwrap();
        assert_eq!(spec.instance.polys.len(), 9);
        let meta = spec.instance.metadata().unwrap();
        assert_eq!((meta.r, meta.d), (5, 6));
        assert_eq!(
            determinantal_minors(2, 2, 2, f7).unwrap_err(),
            Error::RankBoundInvalid { s: 2, min: 2 }
        );
        assert_eq!(determinantal_degree(4, 5, 2), 50);
        for p in [5, 7, 11, 13] {
            let det2 = determinantal_minors(2, 2, 1, fp(p)).unwrap();
            assert_eq!(shift_kernel(det2.poly().unwrap()).unwrap().dim(), 0);
        }
    }

    #[test]
    fn bareiss_matches_laplace() {
        let f = fp(13);
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)] {
            let nv = n + m + 2;
            let fa: Vec<MPoly> = (0..=n).map(|i| MPoly::var(nv, f, i)).collect();
            let gb: Vec<MPoly> = (0..=m).map(|j| MPoly::var(nv, f, n + 1 + j)).collect();
            let s = sylvester_matrix(&fa, &gb);
            assert_eq!(determinant(&s).unwrap(), laplace(&s), "({n}, {m})");
        }
        // a matrix needing a row swap
        let x = |i| MPoly::var(2, f, i);
        let z = MPoly::zero(2, f);
        let mat = vec![vec![z.clone(), x(0)], vec![x(1), z]];
        assert_eq!(determinant(&mat).unwrap(), laplace(&mat));
    }

    #[test]
    fn resultant_examples() {
        let f11 = fp(11);
        let r = generic_resultant(1, 1, f11).unwrap();
        assert_eq!(
            r.poly().unwrap(),
            &parse_poly("x2*x3 - x1*x4", 4, f11).unwrap()
        );
        let r = generic_resultant(2, 1, f11).unwrap();
        assert_eq!(r.poly().unwrap().degree(), Some(3));
        assert_eq!(r.instance.n, 5);
        assert!(r.shift_free);
        assert_eq!(
            generic_resultant(1, 1, fp(3)).unwrap_err(),
            Error::PrimeTooSmall { p: 3, bound: 4 }
        );
        assert_eq!(
            generic_resultant(5, 4, fp(101)).unwrap_err(),
            Error::SymbolicSizeExceeded(9)
        );
    }

    #[test]
    fn resultant_detects_common_roots() {
        let f7 = fp(7);
        let r = generic_resultant(1, 2, fp(7)).unwrap();
        let res = r.poly().unwrap();
        let mut pt = [0u64; 5];
        for code in 0..7u64.pow(5) {
            let mut c = code;
            for v in pt.iter_mut() {
                *v = c % 7;
                c /= 7;
            }
            let (a, b) = (&pt[..2], &pt[2..]);
            let lead_ok = a[1] != 0 && b[2] != 0;
            if !lead_ok {
                continue;
            }
            let common = (0..7).any(|t| {
                f7.add(a[0], f7.mul(a[1], t)) == 0
                    && f7.add(f7.add(b[0], f7.mul(b[1], t)), f7.mul(b[2], f7.mul(t, t))) == 0
            });
            assert_eq!(res.eval_raw(&pt) == 0, common, "{pt:?}");
        }
    }

    #[test]
    fn discriminant_examples() {
        let f7 = fp(7);
        let d = generic_discriminant(2, f7).unwrap();
        assert_eq!(
            d.poly().unwrap(),
            &parse_poly("-x3*(x2^2 - 4*x1*x3)", 3, f7).unwrap()
        );
        assert_eq!(d.predictions["kernelDim"], json!(0));
        let d = generic_discriminant(3, fp(11)).unwrap();
        assert_eq!(d.poly().unwrap().degree(), Some(5));
        assert_eq!(d.instance.n, 4);
        assert!(d.shift_free);
        assert_eq!(
            generic_discriminant(3, fp(3)).unwrap_err(),
            Error::PrimeTooSmall { p: 3, bound: 3 }
        );
    }

    #[test]
    fn decomposable_examples() {
        let f11 = fp(11);
        assert_eq!(
            compose_univariate(f11, &[0, 0, 1], &[0, 1, 1]),
            vec![0, 0, 1, 2, 1]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f101 = fp(101);
        let pts = decomposable_sample(2, 2, f101, 100, &mut rng).unwrap();
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|c| c[4] != 0));
        assert_eq!(
            decomposable_sample(1, 2, f11, 1, &mut rng).unwrap_err(),
            Error::DegreeTooSmall(1)
        );
        assert_eq!(
            decomposable_sample(2, 3, fp(5), 1, &mut rng).unwrap_err(),
            Error::PrimeTooSmall { p: 5, bound: 6 }
        );
    }

    #[test]
    fn family_json_has_predictions() {
        let spec = parallel_hyperplanes(2, 2, fp(7)).unwrap();
        let v = spec.to_json_value();
        assert_eq!(v["p"], json!(7));
        assert_eq!(v["kind"], json!("parallel_hyperplanes"));
        assert_eq!(v["metadata"]["sigma"], json!(2));
        assert_eq!(v["predictions"]["countX"], json!(14));
        let back = VarietyInstance::from_json(&v.to_string()).unwrap();
        assert_eq!(back, spec.instance);
    }
}
