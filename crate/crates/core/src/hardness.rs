//! Equal subset sum and its reduction to non-shift-freeness of a linear
//! form with respect to `U_1 = {0, 1, −1}^n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enumeration::{ball, PointSet};
use crate::error::{Error, Result};
use crate::field::primality::next_prime;
use crate::field::{PrimeField, MAX_MODULUS};
use crate::poly::{MPoly, Point};
use crate::shift::is_shift_invariant;

/// Largest instance length accepted by [`ess_brute`].
pub const MAX_BRUTE_N: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssInstance {
    pub a: Vec<u64>,
}

impl EssInstance {
    pub fn new(a: Vec<u64>) -> Self {
        EssInstance { a }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn sum(&self) -> u128 {
        self.a.iter().map(|&x| x as u128).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad instance JSON: {e}")))
    }

    /// Whether `cert` solves the instance over the integers.
    pub fn accepts(&self, cert: &EssCertificate) -> bool {
        cert.validate(self.len()).is_ok()
            && cert.side_sum(&cert.s, &self.a) == cert.side_sum(&cert.t, &self.a)
    }

    /// Whether `cert` solves the instance modulo `p`.
    pub fn accepts_mod(&self, cert: &EssCertificate, field: PrimeField) -> bool {
        let p = field.modulus() as u128;
        cert.validate(self.len()).is_ok()
            && cert.side_sum(&cert.s, &self.a) % p == cert.side_sum(&cert.t, &self.a) % p
    }
}

/// Disjoint nonempty 1-based index sets with equal sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssCertificate {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(rename = "T")]
    pub t: Vec<usize>,
}

impl EssCertificate {
    fn side_sum(&self, idx: &[usize], a: &[u64]) -> u128 {
        idx.iter().map(|&i| a[i - 1] as u128).sum()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.s.is_empty() || self.t.is_empty() {
            return Err(Error::NotACertificate(
                "both index sets must be nonempty".into(),
            ));
        }
        if self.s.iter().chain(&self.t).any(|&i| i == 0 || i > n) {
            return Err(Error::NotACertificate(format!(
                "indices must lie in 1..={n}"
            )));
        }
        if self.s.iter().any(|i| self.t.contains(i)) {
            return Err(Error::NotACertificate("index sets must be disjoint".into()));
        }
        Ok(())
    }

    /// `u_i = 1` for `i ∈ S`, `u_i = −1` for `i ∈ T`, else 0.
    pub fn to_shift(&self, n: usize, field: PrimeField) -> Result<Point> {
        self.validate(n)?;
        let mut u = vec![0i64; n];
        for &i in &self.s {
            u[i - 1] = 1;
        }
        for &i in &self.t {
            u[i - 1] = -1;
        }
        Ok(Point::new(field, &u))
    }

    /// Inverse of [`EssCertificate::to_shift`]; rejects one-sided vectors.
    pub fn from_shift(u: &Point) -> Result<Self> {
        let b = u.balanced();
        if b.iter().any(|c| c.abs() > 1) {
            return Err(Error::NotACertificate(
                "entries must lie in {0, 1, -1}".into(),
            ));
        }
        let pick = |v: i64| -> Vec<usize> {
            b.iter()
                .enumerate()
                .filter(|(_, &c)| c == v)
                .map(|(i, _)| i + 1)
                .collect()
        };
        let cert = EssCertificate {
            s: pick(1),
            t: pick(-1),
        };
        cert.validate(b.len())?;
        Ok(cert)
    }
}

/// Round trip through the bijection between mixed-sign `u ∈ U_1` and certificates.
pub fn certificate_roundtrip(u: &Point) -> Result<(EssCertificate, Point)> {
    let cert = EssCertificate::from_shift(u)?;
    let back = cert.to_shift(u.dim(), u.field())?;
    debug_assert_eq!(&back, u);
    Ok((cert, back))
}

/// Sort key for a balanced coordinate: `0, 1, −1, 2, −2, …`.
fn coord_key(c: i64) -> u64 {
    match c {
        0 => 0,
        c if c > 0 => 2 * c as u64 - 1,
        c => 2 * c.unsigned_abs(),
    }
}

/// Scan order: `Σ|u_i|` ascending, then lexicographic in [`coord_key`].
pub fn scan_key(u: &[i64]) -> (u64, Vec<u64>) {
    (
        u.iter().map(|c| c.unsigned_abs()).sum(),
        u.iter().map(|&c| coord_key(c)).collect(),
    )
}

/// Visits `{0, 1, −1}^n \ {0}` in scan order until `visit` returns true.
fn scan_unit_cube(n: usize, mut visit: impl FnMut(&[i64]) -> bool) -> Option<Vec<i64>> {
    fn rec(i: usize, left: usize, u: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let n = u.len();
        if i == n {
            return left == 0 && visit(u);
        }
        if n - i > left {
            u[i] = 0;
            if rec(i + 1, left, u, visit) {
                return true;
            }
        }
        if left > 0 {
            for s in [1, -1] {
                u[i] = s;
                if rec(i + 1, left - 1, u, visit) {
                    return true;
                }
            }
        }
        u[i] = 0;
        false
    }
    let mut u = vec![0i64; n];
    for grade in 1..=n {
        if rec(0, grade, &mut u, &mut visit) {
            return Some(u);
        }
    }
    None
}

/// First certificate in scan order over `{0, 1, −1}^n`, by exhaustive search.
pub fn ess_brute(inst: &EssInstance) -> Result<Option<EssCertificate>> {
    let n = inst.len();
    if n > MAX_BRUTE_N {
        return Err(Error::BudgetExceeded {
            needed: 3u128.pow(n as u32),
            cap: 3u64.pow(MAX_BRUTE_N as u32),
        });
    }
    let found = scan_unit_cube(n, |u| {
        let mixed = u.contains(&1) && u.contains(&-1);
        mixed
            && u.iter()
                .zip(&inst.a)
                .map(|(&c, &a)| c as i128 * a as i128)
                .sum::<i128>()
                == 0
    });
    Ok(found.map(|u| EssCertificate {
        s: (0..n).filter(|&i| u[i] == 1).map(|i| i + 1).collect(),
        t: (0..n).filter(|&i| u[i] == -1).map(|i| i + 1).collect(),
    }))
}

/// An odd prime `p > Σ a_i` and the instance reduced modulo `p`.
///
/// Without `rng` the search starts right above the sum; with one, at a
/// random offset in `[0, Σ a_i + 1]` above it.
pub fn ess_to_mod_prime<R: Rng>(
    inst: &EssInstance,
    rng: Option<&mut R>,
) -> Result<(EssInstance, PrimeField)> {
    let sum = inst.sum();
    let offset = rng.map_or(0, |r| r.gen_range(0..=sum + 1));
    let start = (sum + 1 + offset).max(3);
    if start >= MAX_MODULUS as u128 {
        return Err(Error::ModulusOutOfRange(start));
    }
    let p = next_prime(start as u64)
        .filter(|&p| p < MAX_MODULUS)
        .ok_or(Error::ModulusOutOfRange(start))?;
    let field = PrimeField::new(p)?;
    Ok((
        EssInstance::new(inst.a.iter().map(|&x| x % p).collect()),
        field,
    ))
}

/// `f = Σ a_i x_i` together with `U_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftFreenessInstance {
    pub field: PrimeField,
    pub f: MPoly,
    pub u: PointSet,
}

pub fn reduce_to_shiftfreeness(
    inst: &EssInstance,
    field: PrimeField,
) -> Result<ShiftFreenessInstance> {
    if inst.is_empty() {
        return Err(Error::Invalid("empty instance".into()));
    }
    let p = field.modulus();
    let sum = inst.sum();
    if (p as u128) <= sum {
        return Err(Error::PrimeTooSmall {
            p,
            bound: u64::try_from(sum).unwrap_or(u64::MAX),
        });
    }
    let f = MPoly::linear(field, &inst.a, 0);
    Ok(ShiftFreenessInstance {
        field,
        f,
        u: ball(1, inst.len(), field)?,
    })
}

/// First nonzero `u ∈ U` in scan order with `f(x − u) = f(x)` and `accept(u)`.
pub fn shift_search_by(
    f: &MPoly,
    u: &PointSet,
    budget: u64,
    accept: impl Fn(&[i64]) -> bool,
) -> Result<Option<Point>> {
    if u.len() as u64 > budget {
        return Err(Error::BudgetExceeded {
            needed: u.len() as u128,
            cap: budget,
        });
    }
    let mut cands: Vec<Vec<i64>> = u
        .balanced()
        .into_iter()
        .filter(|v| v.iter().any(|&c| c != 0) && accept(v))
        .collect();
    cands.sort_by_cached_key(|v| scan_key(v));
    for v in cands {
        let pt = Point::new(u.field(), &v);
        if is_shift_invariant(f, &pt)? {
            return Ok(Some(pt));
        }
    }
    Ok(None)
}

/// First nonzero `u ∈ U` in scan order leaving `f` invariant.
pub fn shift_search(f: &MPoly, u: &PointSet, budget: u64) -> Result<Option<Point>> {
    shift_search_by(f, u, budget, |_| true)
}

/// Outcome of the full reduction chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub p: u64,
    pub f: String,
    pub u: Option<Vec<i64>>,
    #[serde(rename = "S")]
    pub s: Option<Vec<usize>>,
    #[serde(rename = "T")]
    pub t: Option<Vec<usize>>,
}

/// Prime lift, reduction, shift search over mixed-sign `u ∈ U_1`, and
/// translation of the shift back to a certificate.
pub fn solve_via_shiftfreeness<R: Rng>(
    inst: &EssInstance,
    rng: Option<&mut R>,
    budget: u64,
) -> Result<ChainReport> {
    let (modular, field) = ess_to_mod_prime(inst, rng)?;
    let red = reduce_to_shiftfreeness(&modular, field)?;
    let mixed = |v: &[i64]| v.contains(&1) && v.contains(&-1);
    let found = shift_search_by(&red.f, &red.u, budget, mixed)?;
    let (u, cert) = match found {
        Some(pt) => {
            let (cert, _) = certificate_roundtrip(&pt)?;
            debug_assert!(inst.accepts(&cert));
            (Some(pt.balanced()), Some(cert))
        }
        None => (None, None),
    };
    Ok(ChainReport {
        p: field.modulus(),
        f: red.f.to_text(),
        u,
        s: cert.as_ref().map(|c| c.s.clone()),
        t: cert.map(|c| c.t),
    })
}
