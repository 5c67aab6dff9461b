//! Exhaustive enumeration of rational points, standard neighborhoods,
//! sumsets and the deficiency `Δ = #X·#U − #(X + U)`.

mod bounds;
mod pointset;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{parse_poly, MPoly};

pub use bounds::{
    bound_report, bound_report_with_points, BoundCheck, BoundValue, NeighborhoodReport,
    CSV_HEADER_COMMENT,
};
pub use pointset::PointSet;

use pointset::{decode, dense_size, encode, DenseSet, OverlapCounter};

/// Default cap on evaluated candidate points.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Dense bitsets are used for sumsets when `p^n` is at most this.
const DENSE_LIMIT: u64 = 1 << 31;

/// Declared geometry of a variety: dimension `r`, degree `d`, number of
/// essential components `sigma` and their total degree `bigD`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Metadata {
    pub r: u32,
    pub d: u32,
    pub sigma: u32,
    #[serde(rename = "bigD")]
    pub big_d: u32,
    #[serde(default)]
    pub absolutely_irreducible: bool,
    #[serde(default)]
    pub irreducible_not_absolutely: bool,
}

impl Metadata {
    pub fn new(r: u32, d: u32, sigma: u32, big_d: u32) -> Self {
        Metadata {
            r,
            d,
            sigma,
            big_d,
            absolutely_irreducible: false,
            irreducible_not_absolutely: false,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.r as usize > n {
            return Err(Error::Invalid(format!(
                "metadata r = {} exceeds n = {n}",
                self.r
            )));
        }
        if self.d < 1 {
            return Err(Error::Invalid("metadata d must be at least 1".into()));
        }
        if self.big_d > self.d {
            return Err(Error::Invalid(format!(
                "metadata bigD = {} exceeds d = {}",
                self.big_d, self.d
            )));
        }
        if self.sigma > 0 && self.big_d < self.sigma {
            return Err(Error::Invalid(
                "each essential component has degree at least 1".into(),
            ));
        }
        if self.absolutely_irreducible && self.irreducible_not_absolutely {
            return Err(Error::Invalid(
                "irreducibility flags are contradictory".into(),
            ));
        }
        Ok(())
    }
}

/// A system `f_1 = ... = f_s = 0` in `F_p^n` with optional declared metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyInstance {
    pub field: PrimeField,
    pub n: usize,
    pub polys: Vec<MPoly>,
    pub metadata: Option<Metadata>,
}

#[derive(Serialize, Deserialize)]
struct VarietyJson {
    p: u64,
    n: usize,
    polys: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
}

impl VarietyInstance {
    pub fn new(
        field: PrimeField,
        n: usize,
        polys: Vec<MPoly>,
        metadata: Option<Metadata>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid(
                "ambient dimension must be at least 1".into(),
            ));
        }
        for f in &polys {
            if f.nvars() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: f.nvars(),
                });
            }
            if f.field() != field {
                return Err(Error::FieldMismatch(field.modulus(), f.field().modulus()));
            }
        }
        if let Some(m) = &metadata {
            m.validate(n)?;
        }
        Ok(VarietyInstance {
            field,
            n,
            polys,
            metadata,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: VarietyJson = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("bad variety JSON: {e}")))?;
        Self::from_value(raw)
    }

    fn from_value(raw: VarietyJson) -> Result<Self> {
        let field = PrimeField::new(raw.p)?;
        let polys = raw
            .polys
            .iter()
            .map(|s| parse_poly(s, raw.n, field))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, raw.n, polys, raw.metadata)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(VarietyJson {
            p: self.field.modulus(),
            n: self.n,
            polys: self.polys.iter().map(MPoly::to_text).collect(),
            metadata: self.metadata.clone(),
        })
        .expect("plain data serializes")
    }

    pub fn metadata(&self) -> Result<&Metadata> {
        self.metadata
            .as_ref()
            .ok_or_else(|| Error::MetadataMissing("variety has no declared metadata".into()))
    }
}

fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            cap: budget,
        });
    }
    Ok(())
}

fn space_size(field: PrimeField, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(field.modulus() as u128))
}

/// A polynomial split by powers of the last variable: `parts[k]` lists the
/// terms `(c, exps of x_1..x_{n-1})` multiplying `x_n^k`.
struct Sliced {
    parts: Vec<Vec<(u64, Vec<u32>)>>,
}

impl Sliced {
    fn new(f: &MPoly) -> Self {
        let n = f.nvars();
        let top = f.degree_in(n - 1).unwrap_or(0) as usize;
        let mut parts = vec![Vec::new(); top + 1];
        for (e, c) in f.terms() {
            let ex = e.exps();
            parts[ex[n - 1] as usize].push((c, ex[..n - 1].to_vec()));
        }
        Sliced { parts }
    }

    fn coefficients(&self, field: PrimeField, powers: &[Vec<u64>], out: &mut Vec<u64>) {
        out.clear();
        for part in &self.parts {
            let mut acc = 0;
            for (c, ex) in part {
                let mut t = *c;
                for (i, &e) in ex.iter().enumerate() {
                    t = field.mul(t, powers[i][e as usize]);
                }
                acc = field.add(acc, t);
            }
            out.push(acc);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
    }
}

fn horner(field: PrimeField, coeffs: &[u64], t: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| field.add(field.mul(acc, t), c))
}

/// All `a ∈ F_p^n` with `f_i(a) = 0` for every `i`, by exhaustive scan.
pub fn rational_points(v: &VarietyInstance, budget: u64) -> Result<PointSet> {
    let field = v.field;
    let n = v.n;
    let p = field.modulus();
    check_budget(space_size(field, n), budget)?;

    let sliced: Vec<Sliced> = v.polys.iter().map(Sliced::new).collect();
    let max_deg = v.polys.iter().filter_map(MPoly::degree).max().unwrap_or(0) as usize;
    let mut prefix = vec![0u64; n - 1];
    let mut powers = vec![vec![1u64; max_deg + 1]; n - 1];
    let mut coeffs: Vec<Vec<u64>> = vec![Vec::new(); sliced.len()];
    let mut cands: Vec<u64> = Vec::with_capacity(p as usize);
    let mut data = Vec::new();

    loop {
        for (i, &x) in prefix.iter().enumerate() {
            for e in 1..=max_deg {
                powers[i][e] = field.mul(powers[i][e - 1], x);
            }
        }
        let mut empty = false;
        for (s, c) in sliced.iter().zip(coeffs.iter_mut()) {
            s.coefficients(field, &powers, c);
            if c.len() == 1 {
                empty = true;
            }
        }
        if !empty {
            cands.clear();
            let linear = coeffs.iter().find(|c| c.len() == 2);
            match linear {
                Some(c) => cands.push(
                    field.neg(
                        field
                            .div(c[0], c[1])
                            .expect("leading coefficient is nonzero"),
                    ),
                ),
                None => cands.extend(0..p),
            }
            for c in coeffs.iter().filter(|c| c.len() > 1) {
                cands.retain(|&t| horner(field, c, t) == 0);
            }
            for &t in &cands {
                data.extend_from_slice(&prefix);
                data.push(t);
            }
        }
        // odometer over x_1..x_{n-1}, last coordinate fastest
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(PointSet::from_flat(field, n, data));
            }
            i -= 1;
            prefix[i] += 1;
            if prefix[i] < p {
                break;
            }
            prefix[i] = 0;
        }
    }
}

/// The standard neighborhood `U_h = {a : ‖a‖ ≤ h}` of `(2h+1)^n` points.
pub fn ball(h: u64, n: usize, field: PrimeField) -> Result<PointSet> {
    if 2u128 * h as u128 >= field.modulus() as u128 {
        return Err(Error::RadiusTooLarge {
            h,
            p: field.modulus(),
        });
    }
    if n == 0 {
        return Err(Error::Invalid(
            "ambient dimension must be at least 1".into(),
        ));
    }
    let side: Vec<u64> = (-(h as i64)..=h as i64)
        .map(|c| field.from_i64(c))
        .collect();
    let total = side
        .len()
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            cap: u64::MAX,
        })?;
    let mut data = Vec::with_capacity(total * n);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        data.extend(idx.iter().map(|&k| side[k]));
        for k in idx.iter_mut().rev() {
            *k += 1;
            if *k < side.len() {
                break;
            }
            *k = 0;
        }
    }
    Ok(PointSet::from_flat(field, n, data))
}

/// `{u − v : u, v ∈ U}`.
pub fn difference_set(u: &PointSet) -> PointSet {
    let f = u.field();
    let n = u.dim();
    let mut data = Vec::with_capacity(u.len() * u.len() * n);
    for a in u.iter() {
        for b in u.iter() {
            data.extend(a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)));
        }
    }
    PointSet::from_flat(f, n, data)
}

fn dense_sumset(x: &PointSet, u: &PointSet, size: u64) -> DenseSet {
    let f = x.field();
    let p = f.modulus();
    let mut set = DenseSet::new(size);
    let mut buf = vec![0u64; x.dim()];
    for a in x.iter() {
        for v in u.iter() {
            for (b, (&s, &t)) in buf.iter_mut().zip(a.iter().zip(v)) {
                *b = f.add(s, t);
            }
            set.insert(encode(p, &buf));
        }
    }
    set
}

/// `X + U = {a + u : a ∈ X, u ∈ U}`, deduplicated.
pub fn sumset(x: &PointSet, u: &PointSet) -> Result<PointSet> {
    x.check_compatible(u)?;
    let f = x.field();
    let n = x.dim();
    if let Some(size) = dense_size(f, n).filter(|&s| s <= DENSE_LIMIT) {
        let set = dense_sumset(x, u, size);
        let mut data = Vec::with_capacity(set.count() as usize * n);
        let mut buf = vec![0u64; n];
        for code in set.iter() {
            decode(f.modulus(), n, code, &mut buf);
            data.extend_from_slice(&buf);
        }
        return Ok(PointSet::from_flat(f, n, data));
    }
    let mut data = Vec::with_capacity(x.len() * u.len() * n);
    for a in x.iter() {
        for v in u.iter() {
            data.extend(a.iter().zip(v).map(|(&s, &t)| f.add(s, t)));
        }
    }
    Ok(PointSet::from_flat(f, n, data))
}

/// `#(X + U)` without materializing the sumset when a bitset fits.
pub fn sumset_count(x: &PointSet, u: &PointSet) -> Result<u64> {
    x.check_compatible(u)?;
    match dense_size(x.field(), x.dim()).filter(|&s| s <= DENSE_LIMIT) {
        Some(size) => Ok(dense_sumset(x, u, size).count()),
        None => Ok(sumset(x, u)?.len() as u64),
    }
}

/// Cardinalities entering the deficiency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeltaCounts {
    pub count_x: u64,
    pub count_u: u64,
    pub count_sumset: u64,
    pub delta: u64,
}

/// `Δ = #X·#U − #(X + U)`.
pub fn compute_delta(x: &PointSet, u: &PointSet) -> Result<DeltaCounts> {
    let count_sumset = sumset_count(x, u)?;
    let (count_x, count_u) = (x.len() as u64, u.len() as u64);
    let product = count_x
        .checked_mul(count_u)
        .ok_or_else(|| Error::Invalid("#X·#U overflows u64".into()))?;
    let delta = product
        .checked_sub(count_sumset)
        .expect("sumset never exceeds #X·#U");
    Ok(DeltaCounts {
        count_x,
        count_u,
        count_sumset,
        delta,
    })
}

/// Whether zeroing any single coordinate of any `u ∈ U` stays inside `U`.
pub fn closed_under_shifts_to_zero(u: &PointSet) -> bool {
    let mut buf = vec![0u64; u.dim()];
    u.iter().all(|v| {
        (0..v.len()).filter(|&i| v[i] != 0).all(|i| {
            buf.copy_from_slice(v);
            buf[i] = 0;
            u.contains(&buf)
        })
    })
}

/// `Σ_{a ≠ b ∈ X} #((a + U) ∩ (b + U))`. Needs `#X²·#U` within `budget`.
pub fn pair_overlap_sum(x: &PointSet, u: &PointSet, budget: u64) -> Result<u64> {
    x.check_compatible(u)?;
    let (nx, nu) = (x.len() as u128, u.len() as u128);
    check_budget(nx * nx * nu, budget)?;
    let f = x.field();
    let mut counter = OverlapCounter::new(u);
    let mut delta = vec![0u64; x.dim()];
    let mut total = 0u64;
    for (i, a) in x.iter().enumerate() {
        for (j, b) in x.iter().enumerate() {
            if i == j {
                continue;
            }
            // v ∈ U with a + v = b + w for some w ∈ U, i.e. v + (a − b) ∈ U
            for (d, (&s, &t)) in delta.iter_mut().zip(a.iter().zip(b)) {
                *d = f.sub(s, t);
            }
            total += counter.count(&delta);
        }
    }
    Ok(total)
}

/// `Σ_{0 ≠ u ∈ U − U} #(X ∩ X^{(u)})`, where `X^{(u)} = X + u`.
pub fn shifted_intersection_sum(x: &PointSet, u: &PointSet) -> Result<u64> {
    x.check_compatible(u)?;
    let f = x.field();
    let diffs = difference_set(u);
    let mut buf = vec![0u64; x.dim()];
    let mut total = 0u64;
    for w in diffs.iter().filter(|w| w.iter().any(|&c| c != 0)) {
        for a in x.iter() {
            for (b, (&s, &t)) in buf.iter_mut().zip(a.iter().zip(w)) {
                *b = f.sub(s, t);
            }
            if x.contains(&buf) {
                total += 1;
            }
        }
    }
    Ok(total)
}
