//! Growth series, Gelfand-Kirillov dimension estimates and checks of the
//! structural consequences of the basis theory.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dimonomial::Disequence;
use crate::element::DiElement;
use crate::error::{Error, Result};
use crate::presentation::{basis_upto_with, BasisTable, EngineOptions, Mode, Presentation, Scheme};

/// `|B^t|` and `|B^{<=t}|` for `t = 1..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSeries {
    mode: Mode,
    fingerprint: String,
    approximate: bool,
    counts: Vec<u128>,
    cumulative: Vec<u128>,
}

impl GrowthSeries {
    /// Builds a series from per-degree counts (index 0 is length 1).
    pub fn from_counts(counts: Vec<u128>, mode: Mode, fingerprint: impl Into<String>) -> Result<Self> {
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut acc: u128 = 0;
        for c in &counts {
            acc = acc
                .checked_add(*c)
                .ok_or_else(|| Error::ResourceCap("cumulative count overflows u128".into()))?;
            cumulative.push(acc);
        }
        Ok(GrowthSeries {
            mode,
            fingerprint: fingerprint.into(),
            approximate: false,
            counts,
            cumulative,
        })
    }

    /// A series given directly by its cumulative counts, e.g. a closed
    /// form fed to the estimator.
    pub fn from_cumulative(cumulative: Vec<u128>, mode: Mode) -> Result<Self> {
        let mut counts = Vec::with_capacity(cumulative.len());
        let mut prev = 0u128;
        for &c in &cumulative {
            if c < prev {
                return Err(Error::Domain("cumulative counts must not decrease".into()));
            }
            counts.push(c - prev);
            prev = c;
        }
        Ok(GrowthSeries {
            mode,
            fingerprint: "synthetic".into(),
            approximate: false,
            counts,
            cumulative,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Derived from an approximate (inhomogeneous) table.
    pub fn approximate(&self) -> bool {
        self.approximate
    }

    /// Largest length covered.
    pub fn max_degree(&self) -> usize {
        self.counts.len()
    }

    /// `|B^t|`, zero outside `1..=N`.
    pub fn count(&self, t: usize) -> u128 {
        if t == 0 {
            return 0;
        }
        self.counts.get(t - 1).copied().unwrap_or(0)
    }

    /// `|B^{<=t}|` for `t <= N`.
    pub fn cumulative(&self, t: usize) -> u128 {
        if t == 0 {
            return 0;
        }
        self.cumulative[t.min(self.cumulative.len()) - 1]
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn cumulative_counts(&self) -> &[u128] {
        &self.cumulative
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,count_n,cumulative_n,mode\n");
        for t in 1..=self.max_degree() {
            let _ = writeln!(
                s,
                "{t},{},{},{}",
                self.count(t),
                self.cumulative(t),
                self.mode.tag()
            );
        }
        s
    }
}

fn free_counts(k: usize, n: usize, mode: Mode) -> Result<Vec<u128>> {
    let mut out = Vec::with_capacity(n);
    let mut power: u128 = 1;
    for t in 1..=n {
        power = power
            .checked_mul(k as u128)
            .ok_or_else(|| Error::ResourceCap(format!("free count at length {t} overflows u128")))?;
        let c = match mode {
            Mode::Dialgebra => power.checked_mul(t as u128),
            Mode::Associative => Some(power),
        };
        out.push(c.ok_or_else(|| Error::ResourceCap(format!("free count at length {t} overflows u128")))?);
    }
    Ok(out)
}

pub fn growth_series(pres: &Presentation, n: usize, mode: Mode) -> Result<GrowthSeries> {
    growth_series_with(pres, n, mode, &EngineOptions::default())
}

/// Counts of the basis table at bound `n`. Free presentations are counted
/// in closed form without building a table.
pub fn growth_series_with(
    pres: &Presentation,
    n: usize,
    mode: Mode,
    options: &EngineOptions,
) -> Result<GrowthSeries> {
    if n == 0 {
        return Err(Error::Domain("degree bound must be at least 1".into()));
    }
    let effective = match mode {
        Mode::Associative => pres.associated_associative(),
        Mode::Dialgebra => pres.clone(),
    };
    if effective.is_free() {
        let counts = free_counts(pres.alphabet().len(), n, mode)?;
        return GrowthSeries::from_counts(counts, mode, pres.fingerprint());
    }
    let table = basis_upto_with(pres, n, mode, options)?;
    Ok(series_of_table(&table, pres.fingerprint()))
}

pub fn series_of_table(table: &BasisTable, fingerprint: impl Into<String>) -> GrowthSeries {
    let counts: Vec<u128> = (1..=table.degree_bound())
        .map(|t| table.count_at(t) as u128)
        .collect();
    let mut s = GrowthSeries::from_counts(counts, table.mode(), fingerprint)
        .expect("table sizes fit in u128");
    s.approximate = table.approximate();
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    /// The filtration stabilizes on the window (GK dimension 0).
    Bounded,
    Polynomial { degree: f64 },
    Superpolynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GkEstimate {
    /// Least-squares slope of `ln |B^{<=n}|` against `ln n`.
    pub slope: f64,
    pub window: (usize, usize),
    pub classification: Classification,
    /// Root mean square of the fit residuals.
    pub residual: f64,
    pub stable: bool,
    /// `(m, log2(|B^{<=2m}| / |B^{<=m}|))`, sampled evenly over the
    /// window (at most [`DOUBLING_SAMPLES`] points, both ends included).
    pub doubling_exponents: Vec<(usize, f64)>,
    pub approximate: bool,
}

pub const STABLE_RESIDUAL: f64 = 0.02;
pub const DOUBLING_SAMPLES: usize = 9;

impl GkEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.classification, Classification::Polynomial { .. })
    }
}

/// The default window `(max(2, N/4), N)`.
pub fn default_window(n: usize) -> (usize, usize) {
    ((n / 4).max(2), n)
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    (slope, rms)
}

fn ln_u128(x: u128) -> f64 {
    (x as f64).ln()
}

/// Estimates the growth degree of `series` on `window = (lo, hi)`.
///
/// Exponential growth is detected first from the doubling exponents
/// `e(m) = log2(|B^{<=2m}| / |B^{<=m}|)`, `m` in `[ceil(lo/2), floor(hi/2)]`:
/// for a polynomial of degree `d` they tend to `d`, for exponential growth
/// they increase without bound. The series is superpolynomial when they
/// increase monotonically by more than 1 across the window, or when every
/// one of them exceeds `slope + 1`.
pub fn gk_estimate(series: &GrowthSeries, window: (usize, usize)) -> Result<GkEstimate> {
    let (lo, hi) = window;
    if lo < 2 || lo >= hi || hi > series.max_degree() {
        return Err(Error::Domain(format!(
            "window {lo}:{hi} must satisfy 2 <= lo < hi <= {}",
            series.max_degree()
        )));
    }
    let mut est = GkEstimate {
        slope: 0.0,
        window,
        classification: Classification::Bounded,
        residual: 0.0,
        stable: true,
        doubling_exponents: Vec::new(),
        approximate: series.approximate(),
    };
    if series.cumulative(lo) == series.cumulative(hi) {
        return Ok(est);
    }
    let points: Vec<(f64, f64)> = (lo..=hi)
        .filter(|&t| series.cumulative(t) > 0)
        .map(|t| ((t as f64).ln(), ln_u128(series.cumulative(t))))
        .collect();
    if points.len() < 2 {
        return Ok(est);
    }
    let (slope, residual) = least_squares(&points);
    est.slope = slope.max(0.0);
    est.residual = residual;
    est.stable = residual < STABLE_RESIDUAL;

    for m in lo.div_ceil(2).max(1)..=hi / 2 {
        let (a, b) = (series.cumulative(m), series.cumulative(2 * m));
        if a > 0 {
            est.doubling_exponents
                .push((m, (ln_u128(b) - ln_u128(a)) / std::f64::consts::LN_2));
        }
    }
    let e: Vec<f64> = est.doubling_exponents.iter().map(|x| x.1).collect();
    let rising = e.len() >= 2
        && e.windows(2).all(|w| w[1] >= w[0] - 1e-12)
        && e[e.len() - 1] - e[0] > 1.0;
    let above = !e.is_empty() && e.iter().all(|&x| x > est.slope + 1.0);
    est.classification = if rising || above {
        Classification::Superpolynomial
    } else {
        Classification::Polynomial { degree: est.slope }
    };
    let all = std::mem::take(&mut est.doubling_exponents);
    let keep = DOUBLING_SAMPLES.min(all.len());
    est.doubling_exponents = (0..keep)
        .map(|i| all[if keep > 1 { i * (all.len() - 1) / (keep - 1) } else { 0 }])
        .collect();
    Ok(est)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremAViolation {
    pub n: usize,
    /// Which side failed: `"lower"` for `|B_A| <= |B_D|`, `"upper"` for
    /// `|B_D| <= |X| (|B_A| + 1)^2`.
    pub side: &'static str,
    pub dialgebra: u128,
    pub associative: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremAReport {
    pub checked_up_to: usize,
    pub first_violation: Option<TheoremAViolation>,
    /// Either series is approximate; a violation is then a warning.
    pub truncated: bool,
}

impl TheoremAReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `|B_A^{<=n}| <= |B_D^{<=n}| <= |X| (|B_A^{<=n}| + 1)^2` for
/// every `n` covered by both series.
pub fn theorem_a_check(d: &GrowthSeries, a: &GrowthSeries, alphabet_size: usize) -> TheoremAReport {
    let top = d.max_degree().min(a.max_degree());
    let mut first_violation = None;
    for n in 1..=top {
        let (bd, ba) = (d.cumulative(n), a.cumulative(n));
        let upper = (ba + 1)
            .saturating_mul(ba + 1)
            .saturating_mul(alphabet_size as u128);
        let side = if ba > bd {
            "lower"
        } else if bd > upper {
            "upper"
        } else {
            continue;
        };
        first_violation = Some(TheoremAViolation {
            n,
            side,
            dialgebra: bd,
            associative: ba,
        });
        break;
    }
    TheoremAReport {
        checked_up_to: top,
        first_violation,
        truncated: d.approximate() || a.approximate(),
    }
}

pub const GAP_LOW: f64 = 1.15;
pub const GAP_HIGH: f64 = 1.85;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    /// Positions (in the input) of stable polynomial estimates with slope
    /// strictly inside the gap interval. Each asks for a rerun at a higher
    /// degree; none is a counterexample.
    pub anomalies: Vec<usize>,
}

impl GapReport {
    pub fn flagged(&self) -> bool {
        !self.anomalies.is_empty()
    }
}

pub fn gap_check(estimates: &[GkEstimate]) -> GapReport {
    let anomalies = estimates
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_polynomial() && e.stable && e.slope > GAP_LOW && e.slope < GAP_HIGH)
        .map(|(i, _)| i)
        .collect();
    GapReport { anomalies }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialBasisReport {
    /// Smallest `m` such that every basis monomial `[a1 ... at]@p` has
    /// `p <= m` or `t - p <= m - 1`.
    pub m: Option<usize>,
    /// Largest `m` tried; for `2m >= n` every table qualifies.
    pub searched_up_to: usize,
    /// Set when `m` was found: then `GK(D) = GK(A_D)`.
    pub predicts_equal_gk: bool,
}

pub fn special_basis_check(table: &BasisTable) -> Result<SpecialBasisReport> {
    if table.mode() != Mode::Dialgebra {
        return Err(Error::Domain("special basis check needs a dialgebra table".into()));
    }
    let n = table.degree_bound();
    let limit = n.saturating_sub(1) / 2;
    let fits = |m: usize, d: &Disequence| d.middle() <= m || d.len() - d.middle() < m;
    let m = (1..=limit).find(|&m| table.basis().iter().all(|d| fits(m, d)));
    Ok(SpecialBasisReport {
        m,
        searched_up_to: limit,
        predicts_equal_gk: m.is_some(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub scheme: Scheme,
    pub holds: bool,
    /// A basis pair on which it fails, in literal form.
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub outcomes: Vec<IdentityOutcome>,
    /// Present when some identity holds.
    pub prediction: Option<String>,
    /// `GK(D) = GK(A_D) = |X|` when some identity holds and there are no
    /// relators (then `A_D` is the polynomial algebra on `X`).
    pub predicted_gk: Option<usize>,
    pub alphabet_size: usize,
}

impl IdentityReport {
    pub fn fired(&self) -> bool {
        self.prediction.is_some()
    }
}

fn scheme_residual(s: Scheme, x: &DiElement, y: &DiElement) -> DiElement {
    let (u, v) = match s {
        Scheme::Lcomm => (x.lprod(y), y.lprod(x)),
        Scheme::Rcomm => (x.rprod(y), y.rprod(x)),
        Scheme::Cross => (x.lprod(y), y.rprod(x)),
    };
    u.and_then(|u| u.sub(&v?)).expect("same alphabet")
}

/// Tests each identity on all pairs of basis monomials whose product stays
/// within the table's bound, through normal forms.
pub fn identity_class_check(pres: &Presentation, table: &BasisTable) -> Result<IdentityReport> {
    if table.mode() != Mode::Dialgebra {
        return Err(Error::Domain("identity check needs a dialgebra table".into()));
    }
    let n = table.degree_bound();
    let alphabet = table.alphabet();
    let kind = table.kind();
    let mut outcomes = Vec::new();
    for s in Scheme::ALL {
        let mut witness = None;
        'pairs: for total in 2..=n {
            for i in 1..total {
                for x in table.basis_at(i) {
                    let xe = DiElement::monomial(alphabet, kind, x.clone());
                    for y in table.basis_at(total - i) {
                        let ye = DiElement::monomial(alphabet, kind, y.clone());
                        let r = scheme_residual(s, &xe, &ye);
                        if !table.normal_form(&r)?.is_zero() {
                            witness = Some((
                                x.display(alphabet).to_string(),
                                y.display(alphabet).to_string(),
                            ));
                            break 'pairs;
                        }
                    }
                }
            }
        }
        outcomes.push(IdentityOutcome {
            scheme: s,
            holds: witness.is_none(),
            witness,
        });
    }
    let k = alphabet.len();
    let any = outcomes.iter().any(|o| o.holds);
    let predicted_gk = (any && pres.relators().is_empty()).then_some(k);
    let prediction = any.then(|| match predicted_gk {
        Some(g) => format!("GK(D) = GK(A_D) = {g}"),
        None => format!("GK(D) = GK(A_D) <= {k}, a nonnegative integer"),
    });
    Ok(IdentityReport {
        outcomes,
        prediction,
        predicted_gk,
        alphabet_size: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimonomial::Alphabet;
    use crate::scalar::ScalarKind;

    fn synthetic(f: impl Fn(u128) -> u128, n: u128) -> GrowthSeries {
        GrowthSeries::from_cumulative((1..=n).map(f).collect(), Mode::Dialgebra).unwrap()
    }

    #[test]
    fn estimator_examples() {
        let tri = synthetic(|n| n * (n + 1) / 2, 512);
        let e = gk_estimate(&tri, (64, 512)).unwrap();
        assert!((1.9..=2.1).contains(&e.slope), "{e:?}");
        assert!(e.is_polynomial());
        let lin = synthetic(|n| n, 512);
        let e = gk_estimate(&lin, (64, 512)).unwrap();
        assert!((0.95..=1.05).contains(&e.slope));
        let exp = synthetic(|n| (1u128 << (n + 1)) - 2, 100);
        for w in [(2, 10), (10, 40), (25, 100)] {
            assert_eq!(gk_estimate(&exp, w).unwrap().classification, Classification::Superpolynomial);
        }
        let flat = synthetic(|_| 7, 20);
        assert_eq!(gk_estimate(&flat, (5, 20)).unwrap().classification, Classification::Bounded);
        assert!(gk_estimate(&flat, (1, 20)).is_err());
        assert!(gk_estimate(&flat, (5, 21)).is_err());
    }

    #[test]
    fn gap_examples() {
        let mk = |slope: f64, residual: f64| GkEstimate {
            slope,
            window: (2, 3),
            classification: Classification::Polynomial { degree: slope },
            residual,
            stable: residual < STABLE_RESIDUAL,
            doubling_exponents: vec![],
            approximate: false,
        };
        assert!(!gap_check(&[mk(2.02, 0.0)]).flagged());
        assert!(!gap_check(&[mk(1.0, 0.0)]).flagged());
        assert_eq!(gap_check(&[mk(1.0, 0.0), mk(1.5, 0.001)]).anomalies, vec![1]);
        assert!(!gap_check(&[mk(1.5, 0.5)]).flagged());
    }

    #[test]
    fn theorem_a_examples() {
        let d = synthetic(|n| n * (n + 1) / 2, 50);
        let a = synthetic(|n| n, 50);
        assert!(theorem_a_check(&d, &a, 1).passed());
        let zero = synthetic(|_| 0, 10);
        assert!(theorem_a_check(&zero, &zero, 3).passed());
        let r = theorem_a_check(&a, &d, 1);
        assert_eq!(r.first_violation.unwrap().side, "lower");
    }

    #[test]
    fn free_series_and_csv() {
        let x = Alphabet::new(["a", "b"]).unwrap();
        let p = Presentation::free(x, ScalarKind::Rational);
        let s = growth_series(&p, 3, Mode::Dialgebra).unwrap();
        assert_eq!(s.counts(), &[2, 8, 24]);
        assert_eq!(s.cumulative(2), 10);
        assert!(s.to_csv().starts_with("n,count_n,cumulative_n,mode\n1,2,2,dialgebra\n"));
        let a = growth_series(&p, 3, Mode::Associative).unwrap();
        assert_eq!(a.counts(), &[2, 4, 8]);
    }
}
