//! Evaluation of the point-count and neighborhood inequalities against
//! exhaustively measured counts.

use serde::Serialize;

use super::{
    closed_under_shifts_to_zero, compute_delta, difference_set, rational_points, PointSet,
    VarietyInstance,
};
use crate::error::Result;

/// Versioned first line of every CSV report.
pub const CSV_HEADER_COMMENT: &str = "# shiftvar neighborhood-report v1";

/// Relative guard applied to inexact right-hand sides before comparing.
const GUARD: f64 = 1e-9;

/// A bound side: exact when every ingredient is an integer, otherwise a
/// double-precision approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BoundValue {
    Exact(i128),
    Approx(f64),
}

impl BoundValue {
    pub fn as_f64(self) -> f64 {
        match self {
            BoundValue::Exact(v) => v as f64,
            BoundValue::Approx(v) => v,
        }
    }

    fn mul(self, o: BoundValue) -> BoundValue {
        match (self, o) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => a
                .checked_mul(b)
                .map_or(BoundValue::Approx(a as f64 * b as f64), BoundValue::Exact),
            _ => BoundValue::Approx(self.as_f64() * o.as_f64()),
        }
    }

    fn add(self, o: BoundValue) -> BoundValue {
        match (self, o) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => a
                .checked_add(b)
                .map_or(BoundValue::Approx(a as f64 + b as f64), BoundValue::Exact),
            _ => BoundValue::Approx(self.as_f64() + o.as_f64()),
        }
    }

    fn div(self, k: i128) -> BoundValue {
        match self {
            BoundValue::Exact(a) if a % k == 0 => BoundValue::Exact(a / k),
            _ => BoundValue::Approx(self.as_f64() / k as f64),
        }
    }

    /// `|self − o|`.
    fn abs_diff(self, o: BoundValue) -> BoundValue {
        match (self, o) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => BoundValue::Exact((a - b).abs()),
            _ => BoundValue::Approx((self.as_f64() - o.as_f64()).abs()),
        }
    }

    fn rounded_up(self) -> f64 {
        let v = self.as_f64();
        v + v.abs() * GUARD
    }
}

fn int(v: impl Into<i128>) -> BoundValue {
    BoundValue::Exact(v.into())
}

/// `base^e` for an integer exponent; negative exponents are approximate.
fn ipow(base: u64, e: i64) -> BoundValue {
    if e < 0 {
        return BoundValue::Approx((base as f64).powi(e as i32));
    }
    (0..e).fold(int(1), |acc, _| acc.mul(int(base)))
}

fn fpow(base: u64, e: f64) -> BoundValue {
    BoundValue::Approx((base as f64).powf(e))
}

/// `lhs ≤ rhs`, exact if both sides are, else against the rounded-up `rhs`.
fn at_most(lhs: BoundValue, rhs: BoundValue) -> bool {
    match (lhs, rhs) {
        (BoundValue::Exact(a), BoundValue::Exact(b)) => a <= b,
        _ => lhs.as_f64() <= rhs.rounded_up(),
    }
}

/// `lhs ≥ rhs`; an inexact `rhs` is rounded up first.
fn at_least(lhs: BoundValue, rhs: BoundValue) -> bool {
    match (lhs, rhs) {
        (BoundValue::Exact(a), BoundValue::Exact(b)) => a >= b,
        _ => lhs.as_f64() >= rhs.rounded_up(),
    }
}

/// One inequality. `holds` is `None` when its hypotheses are not met.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: Option<BoundValue>,
    pub rhs: Option<BoundValue>,
    pub holds: Option<bool>,
}

impl BoundCheck {
    fn na(name: &'static str) -> Self {
        BoundCheck {
            name,
            lhs: None,
            rhs: None,
            holds: None,
        }
    }

    fn upper(name: &'static str, lhs: BoundValue, rhs: BoundValue) -> Self {
        BoundCheck {
            name,
            lhs: Some(lhs),
            rhs: Some(rhs),
            holds: Some(at_most(lhs, rhs)),
        }
    }

    fn lower(name: &'static str, lhs: BoundValue, rhs: BoundValue) -> Self {
        BoundCheck {
            name,
            lhs: Some(lhs),
            rhs: Some(rhs),
            holds: Some(at_least(lhs, rhs)),
        }
    }

    pub fn status(&self) -> &'static str {
        match self.holds {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "na",
        }
    }
}

/// Measured counts plus every applicable bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NeighborhoodReport {
    pub family: String,
    pub p: u64,
    pub n: usize,
    /// Radius when `U` is a standard neighborhood.
    pub h: Option<u64>,
    pub count_x: u64,
    pub count_u: u64,
    pub count_sumset: u64,
    pub delta: u64,
    pub count_diff: u64,
    pub shift_free: bool,
    /// Value of `α` used by the lower bound, when it was evaluated.
    pub alpha: Option<f64>,
    pub bounds: Vec<BoundCheck>,
}

/// Bound names in CSV column order.
pub const BOUND_NAMES: [&str; 14] = [
    "sumset_trivial",
    "points_degree",
    "points_weil",
    "points_non_absolute",
    "deficiency_upper",
    "sumset_sigma_zero",
    "sumset_weil",
    "deficiency_ball",
    "sumset_weil_ball",
    "deficiency_lower",
    "hypersurface_deficiency",
    "hypersurface_sumset_weil",
    "hypersurface_deficiency_ball",
    "hypersurface_sumset_weil_ball",
];

impl NeighborhoodReport {
    pub fn bound(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// True when no applicable bound failed.
    pub fn all_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds != Some(false))
    }

    pub fn csv_header() -> String {
        let mut cols = vec![
            "family",
            "p",
            "n",
            "h",
            "countX",
            "countU",
            "countSumset",
            "delta",
        ];
        cols.extend(BOUND_NAMES);
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cells = vec![
            self.family.clone(),
            self.p.to_string(),
            self.n.to_string(),
            self.h.map_or(String::new(), |h| h.to_string()),
            self.count_x.to_string(),
            self.count_u.to_string(),
            self.count_sumset.to_string(),
            self.delta.to_string(),
        ];
        for name in BOUND_NAMES {
            cells.push(
                self.bound(name)
                    .map_or("na", BoundCheck::status)
                    .to_string(),
            );
        }
        cells.join(",")
    }
}

/// Enumerates `X` and evaluates every bound.
pub fn bound_report(
    v: &VarietyInstance,
    u: &PointSet,
    shift_free: bool,
    budget: u64,
) -> Result<NeighborhoodReport> {
    v.metadata()?;
    let x = rational_points(v, budget)?;
    bound_report_with_points(v, &x, u, shift_free)
}

/// Radius `h ≥ 1` when `U` is exactly the standard neighborhood `U_h`.
fn standard_radius(u: &PointSet) -> Option<u64> {
    let h = u.max_norm();
    let p = u.field().modulus();
    if h == 0 || 2 * h >= p {
        return None;
    }
    let expected = (2 * h as u128 + 1).checked_pow(u.dim() as u32)?;
    (u.len() as u128 == expected).then_some(h)
}

/// As [`bound_report`] with the rational points already enumerated.
pub fn bound_report_with_points(
    v: &VarietyInstance,
    x: &PointSet,
    u: &PointSet,
    shift_free: bool,
) -> Result<NeighborhoodReport> {
    let meta = v.metadata()?.clone();
    x.check_compatible(u)?;
    let counts = compute_delta(x, u)?;
    let diff = difference_set(u).len() as u64;
    let p = v.field.modulus();
    let n = v.n as i64;
    let h = standard_radius(u);

    let r = meta.r as i64;
    let d = int(meta.d);
    let d2 = d.mul(d);
    let sigma = int(meta.sigma);
    let big_d = meta.big_d;
    let p_gt_d = p > meta.d as u64;
    let cx = int(counts.count_x);
    let cu = int(counts.count_u);
    let cs = int(counts.count_sumset);
    let delta = int(counts.delta);
    let cdiff = int(diff);
    let d1333 = |k: u32| BoundValue::Approx(5.0 * (k as f64).powf(13.0 / 3.0));

    let mut bounds = Vec::with_capacity(BOUND_NAMES.len());
    bounds.push(BoundCheck::upper("sumset_trivial", cs, cx.mul(cu)));
    bounds.push(BoundCheck::upper("points_degree", cx, d.mul(ipow(p, r))));

    // |#X − σp^r| ≤ (D−1)(D−2)p^{r−1/2} + (5D^{13/3} + d²)p^{r−1}
    bounds.push(if meta.sigma > 0 && p_gt_d {
        let lead = int((big_d as i128 - 1) * (big_d as i128 - 2)).mul(fpow(p, r as f64 - 0.5));
        let rhs = lead.add(d1333(big_d).add(d2).mul(ipow(p, r - 1)));
        BoundCheck::upper("points_weil", cx.abs_diff(sigma.mul(ipow(p, r))), rhs)
    } else {
        BoundCheck::na("points_weil")
    });

    bounds.push(if meta.irreducible_not_absolutely {
        BoundCheck::upper("points_non_absolute", cx, d2.mul(ipow(p, r - 1)).div(4))
    } else {
        BoundCheck::na("points_non_absolute")
    });

    bounds.push(if shift_free && p_gt_d {
        let rhs = cu.mul(int(diff as i128 - 1)).mul(d2).mul(ipow(p, r - 1));
        BoundCheck::upper("deficiency_upper", delta, rhs)
    } else {
        BoundCheck::na("deficiency_upper")
    });

    bounds.push(if meta.sigma == 0 && p_gt_d {
        BoundCheck::upper(
            "sumset_sigma_zero",
            cs,
            cu.mul(d2).mul(ipow(p, r - 1)).div(2),
        )
    } else {
        BoundCheck::na("sumset_sigma_zero")
    });

    // |#(X+U) − #U·σp^r| ≤ #U(D²p^{r−1/2} + (5D^{13/3} + #(U−U)d²)p^{r−1})
    let weil_sumset = |count_u: BoundValue, count_diff: BoundValue, e: i64| {
        let bd = int(big_d);
        let inner = bd
            .mul(bd)
            .mul(fpow(p, e as f64 - 0.5))
            .add(d1333(big_d).add(count_diff.mul(d2)).mul(ipow(p, e - 1)));
        let lhs = cs.abs_diff(count_u.mul(sigma).mul(ipow(p, e)));
        (lhs, count_u.mul(inner))
    };
    let weil_ok = meta.sigma > 0 && shift_free && p_gt_d;
    bounds.push(if weil_ok {
        let (lhs, rhs) = weil_sumset(cu, cdiff, r);
        BoundCheck::upper("sumset_weil", lhs, rhs)
    } else {
        BoundCheck::na("sumset_weil")
    });

    let ball_terms = h.map(|h| (ipow(2 * h + 1, n), ipow(4 * h + 1, n)));
    match ball_terms.filter(|_| shift_free && p_gt_d) {
        Some((b1, b2)) => {
            bounds.push(BoundCheck::upper(
                "deficiency_ball",
                delta,
                b1.mul(b2).mul(d2).mul(ipow(p, r - 1)),
            ));
            bounds.push(if weil_ok {
                let (lhs, rhs) = weil_sumset(b1, b2, r);
                BoundCheck::upper("sumset_weil_ball", lhs, rhs)
            } else {
                BoundCheck::na("sumset_weil_ball")
            });
        }
        None => {
            bounds.push(BoundCheck::na("deficiency_ball"));
            bounds.push(BoundCheck::na("sumset_weil_ball"));
        }
    }

    // α = d² + (5d^{13/3} + d²#(U−U))p^{−1/2}; requires p ≥ 4α²
    let mut alpha = None;
    let lower_ok =
        !shift_free && meta.absolutely_irreducible && p_gt_d && closed_under_shifts_to_zero(u);
    bounds.push(if lower_ok {
        let a = d2.add(d1333(meta.d).add(d2.mul(cdiff)).mul(fpow(p, -0.5)));
        alpha = Some(a.as_f64());
        let four_alpha_sq = BoundValue::Approx(4.0 * a.as_f64() * a.as_f64());
        if at_least(int(p), four_alpha_sq) {
            BoundCheck::lower("deficiency_lower", delta, ipow(p, r).div(2))
        } else {
            BoundCheck::na("deficiency_lower")
        }
    } else {
        BoundCheck::na("deficiency_lower")
    });

    let hyper = meta.r as usize + 1 == v.n && shift_free && p_gt_d;
    let e = n - 1;
    bounds.push(if hyper {
        BoundCheck::upper(
            "hypersurface_deficiency",
            delta,
            cu.mul(cdiff).mul(d2).mul(ipow(p, e - 1)),
        )
    } else {
        BoundCheck::na("hypersurface_deficiency")
    });
    bounds.push(if hyper && meta.sigma > 0 {
        let (lhs, rhs) = weil_sumset(cu, cdiff, e);
        BoundCheck::upper("hypersurface_sumset_weil", lhs, rhs)
    } else {
        BoundCheck::na("hypersurface_sumset_weil")
    });
    match ball_terms.filter(|_| hyper) {
        Some((b1, b2)) => {
            bounds.push(BoundCheck::upper(
                "hypersurface_deficiency_ball",
                delta,
                b1.mul(b2).mul(d2).mul(ipow(p, e - 1)),
            ));
            bounds.push(if meta.sigma > 0 {
                let (lhs, rhs) = weil_sumset(b1, b2, e);
                BoundCheck::upper("hypersurface_sumset_weil_ball", lhs, rhs)
            } else {
                BoundCheck::na("hypersurface_sumset_weil_ball")
            });
        }
        None => {
            bounds.push(BoundCheck::na("hypersurface_deficiency_ball"));
            bounds.push(BoundCheck::na("hypersurface_sumset_weil_ball"));
        }
    }

    Ok(NeighborhoodReport {
        family: String::new(),
        p,
        n: v.n,
        h,
        count_x: counts.count_x,
        count_u: counts.count_u,
        count_sumset: counts.count_sumset,
        delta: counts.delta,
        count_diff: diff,
        shift_free,
        alpha,
        bounds,
    })
}
