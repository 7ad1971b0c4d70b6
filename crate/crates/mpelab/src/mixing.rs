//! Mixing coefficients of kernel powers: Dobrushin ergodicity coefficients,
//! minorization masses, and strong (ratio) mixing diagnostics.
//!
//! For a kernel `P` and `n >= 1` the module computes, on `P^n`:
//!
//! * the Dobrushin coefficient `Lambda_n = max_{x,x'} ||P^n(x,.) - P^n(x',.)||_var`,
//! * the best minorization mass `d_n = sum_y min_x P^n(x,y)` together with its
//!   normalized minorization measure, and
//! * the strong mixing ratio
//!   `L_n = max_y max_{x,x'} P^n(x,y) / P^n(x',y)` with the conventions
//!   `0/0 = 0` and `c/0 = +inf` for `c > 0`.
//!
//! The infinity decision for `L_n` is combinatorial — it only depends on the
//! zero pattern of `P^n` — and float powers underflow long before the pattern
//! degenerates (a path probability below ~1e-308 silently becomes an exact
//! zero). `strong_mixing_ratio` therefore decides finiteness from the exact
//! boolean support pattern and evaluates the finite value with log-domain
//! matrix powers, which cannot underflow.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernel::{tv_rows, Distribution, FiniteKernel};

/// Dobrushin ergodicity coefficient of the `n`-step kernel: the maximum
/// total-variation distance between two rows of `P^n`. Always in `[0, 1]`.
pub fn dobrushin_coefficient(kernel: &FiniteKernel, n: usize) -> Result<f64> {
    let pn = kernel.iterate(n)?;
    let size = pn.n();
    let mut worst = 0.0f64;
    for i in 0..size {
        for j in (i + 1)..size {
            worst = worst.max(tv_rows(pn.row(i), pn.row(j)));
        }
    }
    Ok(worst.min(1.0))
}

/// Best minorization of the `n`-step kernel: the largest `d` such that
/// `P^n(x, .) >= d * eta(.)` for all `x` and some probability measure `eta`.
///
/// The optimum is attained by the column minima: `d = sum_y min_x P^n(x,y)`.
/// Returns `(0.0, None)` when no positive minorization exists.
pub fn minorization(kernel: &FiniteKernel, n: usize) -> Result<(f64, Option<Distribution>)> {
    let pn = kernel.iterate(n)?;
    let size = pn.n();
    let mut column_min = vec![f64::INFINITY; size];
    for i in 0..size {
        for (j, m) in column_min.iter_mut().enumerate() {
            *m = m.min(pn.entry(i, j));
        }
    }
    let d: f64 = column_min.iter().sum();
    if d <= 0.0 {
        return Ok((0.0, None));
    }
    let eta = Distribution::new(column_min.iter().map(|&m| m / d).collect())?;
    Ok((d, Some(eta)))
}

/// Strong mixing ratio of the `n`-step kernel (see the module docs for the
/// `0/0` and `c/0` conventions). Returns `f64::INFINITY` when any two rows of
/// `P^n` have different supports, which is decided exactly.
pub fn strong_mixing_ratio(kernel: &FiniteKernel, n: usize) -> Result<f64> {
    let support = kernel.support_power(n)?;
    if !support.rows_all_equal() {
        return Ok(f64::INFINITY);
    }
    let size = kernel.n();
    let log_pn = log_power(kernel, n)?;
    let mut worst = 1.0f64;
    for y in 0..size {
        if !support.get(0, y) {
            continue;
        }
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for x in 0..size {
            let v = log_pn[x * size + y];
            hi = hi.max(v);
            lo = lo.min(v);
        }
        worst = worst.max((hi - lo).exp());
    }
    Ok(worst)
}

/// Log-domain power `log(P^n)` (entry-wise, with `-inf` marking zeros),
/// computed by binary exponentiation of the log-sum-exp matrix product.
fn log_power(kernel: &FiniteKernel, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::BadParameters("log power needs n >= 1".into()));
    }
    let size = kernel.n();
    let to_log = |p: f64| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY };
    let mut base: Vec<f64> = kernel.entries().iter().map(|&p| to_log(p)).collect();
    let mut result: Option<Vec<f64>> = None;
    let mut e = n;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(acc) => log_matmul(&acc, &base, size),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = log_matmul(&base, &base, size);
    }
    Ok(result.expect("n >= 1"))
}

fn log_matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![f64::NEG_INFINITY; n * n];
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            terms.clear();
            let mut peak = f64::NEG_INFINITY;
            for k in 0..n {
                let t = a[i * n + k] + b[k * n + j];
                if t > f64::NEG_INFINITY {
                    terms.push(t);
                    peak = peak.max(t);
                }
            }
            if !terms.is_empty() {
                let sum: f64 = terms.iter().map(|&t| (t - peak).exp()).sum();
                c[i * n + j] = peak + sum.ln();
            }
        }
    }
    c
}

/// Minorization data for one `n` inside a [`MixingReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinorizationEntry {
    /// Minorization mass `d_n`.
    pub d: f64,
    /// Minorization measure, present exactly when `d_n > 0`.
    pub eta: Option<Distribution>,
}

/// Mixing coefficients of `P^n` for `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    /// Dobrushin coefficients keyed by `n`.
    pub lambda: BTreeMap<usize, f64>,
    /// Minorization masses and measures keyed by `n`.
    pub minorization: BTreeMap<usize, MinorizationEntry>,
    /// Strong mixing ratios keyed by `n` (`f64::INFINITY` possible).
    pub strong_ratio: BTreeMap<usize, f64>,
}

impl MixingReport {
    /// JSON rendering; infinite ratios are written as the string `"inf"`.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let mut lambda = Map::new();
        for (&n, &v) in &self.lambda {
            lambda.insert(n.to_string(), json!(v));
        }
        let mut minorization = Map::new();
        for (&n, entry) in &self.minorization {
            let mut obj = Map::new();
            obj.insert("d".into(), json!(entry.d));
            if let Some(eta) = &entry.eta {
                obj.insert("eta".into(), json!(eta.weights()));
            }
            minorization.insert(n.to_string(), Value::Object(obj));
        }
        let mut ratio = Map::new();
        for (&n, &v) in &self.strong_ratio {
            let rendered = if v.is_finite() {
                json!(v)
            } else {
                json!("inf")
            };
            ratio.insert(n.to_string(), rendered);
        }
        json!({
            "lambda": lambda,
            "minorization": minorization,
            "strong_ratio": ratio,
        })
    }
}

impl serde::Serialize for MixingReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// Compute all three mixing diagnostics for `n = 1..=n_max`.
pub fn mixing_report(kernel: &FiniteKernel, n_max: usize) -> Result<MixingReport> {
    if n_max == 0 {
        return Err(Error::BadParameters("n_max must be at least 1".into()));
    }
    let mut report = MixingReport {
        lambda: BTreeMap::new(),
        minorization: BTreeMap::new(),
        strong_ratio: BTreeMap::new(),
    };
    for n in 1..=n_max {
        report.lambda.insert(n, dobrushin_coefficient(kernel, n)?);
        let (d, eta) = minorization(kernel, n)?;
        report.minorization.insert(n, MinorizationEntry { d, eta });
        report
            .strong_ratio
            .insert(n, strong_mixing_ratio(kernel, n)?);
    }
    Ok(report)
}

/// Results of [`check_relations`]: worst signed violation per relation
/// (negative values mean the inequality held with slack).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingRelations {
    /// Worst violation of `Lambda_n <= 1 - d_n` over `n <= n_max`.
    pub minorization_bound: f64,
    /// Worst violation of `Lambda_{n+m} <= Lambda_n * Lambda_m` over
    /// `n, m <= n_max`.
    pub submultiplicative: f64,
    /// Worst violation of `Lambda_n <= Lambda_1^n` over `n <= n_max`.
    pub power_bound: f64,
}

impl MixingRelations {
    /// Largest of the three violations.
    pub fn max_violation(&self) -> f64 {
        self.minorization_bound
            .max(self.submultiplicative)
            .max(self.power_bound)
    }
}

/// Verify the standard coefficient relations on a kernel, up to `n_max`:
/// `Lambda_n <= 1 - d_n`, `Lambda_{n+m} <= Lambda_n Lambda_m`, and
/// `Lambda_n <= Lambda_1^n`. Any violation beyond `1e-12` is an error.
pub fn check_relations(kernel: &FiniteKernel, n_max: usize) -> Result<MixingRelations> {
    if n_max == 0 {
        return Err(Error::BadParameters("n_max must be at least 1".into()));
    }
    let mut lambda = vec![f64::NAN; 2 * n_max + 1];
    for (n, slot) in lambda.iter_mut().enumerate().skip(1) {
        *slot = dobrushin_coefficient(kernel, n)?;
    }

    let mut relations = MixingRelations {
        minorization_bound: f64::NEG_INFINITY,
        submultiplicative: f64::NEG_INFINITY,
        power_bound: f64::NEG_INFINITY,
    };
    for n in 1..=n_max {
        let (d, _) = minorization(kernel, n)?;
        let violation = lambda[n] - (1.0 - d);
        relations.minorization_bound = relations.minorization_bound.max(violation);
        if violation > 1e-12 {
            return Err(Error::RelationViolated {
                relation: "Lambda_n <= 1 - d_n",
                n,
                m: 0,
                violation,
            });
        }
        let violation = lambda[n] - lambda[1].powi(n as i32);
        relations.power_bound = relations.power_bound.max(violation);
        if violation > 1e-12 {
            return Err(Error::RelationViolated {
                relation: "Lambda_n <= Lambda_1^n",
                n,
                m: 0,
                violation,
            });
        }
        for m in 1..=n_max {
            let violation = lambda[n + m] - lambda[n] * lambda[m];
            relations.submultiplicative = relations.submultiplicative.max(violation);
            if violation > 1e-12 {
                return Err(Error::RelationViolated {
                    relation: "Lambda_{n+m} <= Lambda_n Lambda_m",
                    n,
                    m,
                    violation,
                });
            }
        }
    }
    Ok(relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_state_half() -> FiniteKernel {
        FiniteKernel::from_rows(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap()
    }

    fn cyclic() -> FiniteKernel {
        FiniteKernel::from_rows(vec![
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn dobrushin_two_state_exact() {
        let k = two_state_half();
        for n in 1..=30 {
            assert_abs_diff_eq!(
                dobrushin_coefficient(&k, n).unwrap(),
                0.5f64.powi(n as i32),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn dobrushin_cyclic_exact() {
        // The symmetric zero-diagonal cycle has Lambda_n = 2^{-n} exactly.
        let k = cyclic();
        for n in 1..=20 {
            assert_abs_diff_eq!(
                dobrushin_coefficient(&k, n).unwrap(),
                0.5f64.powi(n as i32),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn minorization_zero_then_positive() {
        // One-step minorization fails on the zero-diagonal cycle (every
        // column contains a zero), but two steps give d = 3/4 with the
        // uniform minorization measure.
        let k = cyclic();
        let (d1, eta1) = minorization(&k, 1).unwrap();
        assert_eq!(d1, 0.0);
        assert!(eta1.is_none());

        let (d2, eta2) = minorization(&k, 2).unwrap();
        assert_abs_diff_eq!(d2, 0.75, epsilon = 1e-15);
        let eta2 = eta2.unwrap();
        for &w in eta2.weights() {
            assert_abs_diff_eq!(w, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn minorization_dominates_dobrushin() {
        let k = two_state_half();
        let (d, _) = minorization(&k, 1).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-15);
        assert!(dobrushin_coefficient(&k, 1).unwrap() <= 1.0 - d + 1e-15);
    }

    #[test]
    fn strong_ratio_conventions() {
        // Rows (1,0) and (.5,.5): column 2 has a positive/zero pair -> inf.
        let k = two_state_half();
        assert!(strong_mixing_ratio(&k, 1).unwrap().is_infinite());
        // All powers keep P(1,2)=0, P(2,2)>0.
        assert!(strong_mixing_ratio(&k, 7).unwrap().is_infinite());

        let k = cyclic();
        assert!(strong_mixing_ratio(&k, 1).unwrap().is_infinite());
        // P^2 is strictly positive with entries {1/2, 1/4}: ratio 2.
        assert_abs_diff_eq!(strong_mixing_ratio(&k, 2).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn strong_ratio_survives_underflow() {
        // A long one-way chain: state i moves to i+1 with probability
        // 2^{-i}, otherwise resets to state 1. Far into the chain the pure
        // forward path has probability 2^{-n(n+1)/2}, far below the smallest
        // positive double, yet the support argument must still report inf.
        let n_states = 64;
        let mut rows = vec![vec![0.0; n_states]; n_states];
        for i in 0..n_states {
            let forward = 0.5f64.powi(i as i32 + 1);
            if i + 1 < n_states {
                rows[i][i + 1] = forward;
                rows[i][0] = 1.0 - forward;
            } else {
                rows[i][0] = 1.0;
            }
        }
        let k = FiniteKernel::from_rows(rows).unwrap();
        for n in [50usize, 62] {
            assert!(
                strong_mixing_ratio(&k, n).unwrap().is_infinite(),
                "ratio at n={n} must be infinite"
            );
        }
    }

    #[test]
    fn report_serializes_inf_as_string() {
        let k = two_state_half();
        let report = mixing_report(&k, 2).unwrap();
        let json = report.to_json();
        assert_eq!(json["strong_ratio"]["1"], serde_json::json!("inf"));
        assert_abs_diff_eq!(
            json["lambda"]["2"].as_f64().unwrap(),
            0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            json["minorization"]["1"]["d"].as_f64().unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn relations_hold_on_fixtures() {
        for k in [two_state_half(), cyclic()] {
            let relations = check_relations(&k, 4).unwrap();
            assert!(relations.max_violation() <= 1e-12);
        }
    }
}
