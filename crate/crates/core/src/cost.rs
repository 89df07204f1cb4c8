//! Closed-form runtime model for exhaustive label search and the supervision
//! cost ledger.
//!
//! Durations are plain real seconds. Powers of two are formed as exact
//! integers before conversion, so `2^n` carries no rounding for any `n` the
//! float type can represent.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest exponent for which `2^n` is formed exactly.
pub const MAX_EXPONENT: u32 = 127;

fn pow2<F: Real>(n: u32) -> Result<F> {
    if n > MAX_EXPONENT {
        return Err(Error::Domain(format!("2^{n} exceeds the supported range")));
    }
    F::from_u128(1u128 << n).ok_or_else(|| Error::Domain(format!("2^{n} not representable")))
}

fn check_time<F: Real>(t_c: F) -> Result<()> {
    if !(t_c > F::zero() && t_c.is_finite()) {
        return Err(Error::Domain(format!("per-evaluation time must be positive, got {t_c:?}")));
    }
    Ok(())
}

/// `2^n * t_c`.
pub fn classical_runtime<F: Real>(n: u32, t_c: F) -> Result<F> {
    check_time(t_c)?;
    Ok(pow2::<F>(n)? * t_c)
}

/// `(2^n / L) * t_c` with `L = t_c / t_q >= 1`.
pub fn accelerated_runtime<F: Real>(n: u32, t_c: F, speedup: F) -> Result<F> {
    check_time(t_c)?;
    if !(speedup >= F::one() && speedup.is_finite()) {
        return Err(Error::InvalidSpeedup(speedup.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(pow2::<F>(n)? / speedup * t_c)
}

/// Growth class of the speedup factor `L` in `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpeedupRegime<F> {
    /// `L = factor`, constant in `n`.
    Constant { factor: F },
    /// `L = n^alpha`.
    Polynomial { alpha: F },
    /// `L = 2^(beta n)`, `0 < beta <= 1`.
    Exponential { beta: F },
}

impl<F: Real> SpeedupRegime<F> {
    pub fn constant(factor: F) -> Result<Self> {
        if !(factor >= F::one() && factor.is_finite()) {
            return Err(Error::InvalidSpeedup(factor.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self::Constant { factor })
    }

    pub fn polynomial(alpha: F) -> Result<Self> {
        if !(alpha > F::zero() && alpha.is_finite()) {
            return Err(Error::InvalidRegime(format!("polynomial exponent must be > 0, got {alpha:?}")));
        }
        Ok(Self::Polynomial { alpha })
    }

    pub fn exponential(beta: F) -> Result<Self> {
        if !(beta > F::zero() && beta <= F::one()) {
            return Err(Error::InvalidRegime(format!("exponential rate must lie in (0, 1], got {beta:?}")));
        }
        Ok(Self::Exponential { beta })
    }

    /// Re-checks the invariants of a value built directly from its variant.
    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Constant { factor } => Self::constant(factor),
            Self::Polynomial { alpha } => Self::polynomial(alpha),
            Self::Exponential { beta } => Self::exponential(beta),
        }
    }

    /// The speedup `L` at pool size `n`.
    pub fn speedup(&self, n: u32) -> Result<F> {
        match *self {
            Self::Constant { factor } => Ok(factor),
            Self::Polynomial { alpha } => {
                if n == 0 {
                    return Err(Error::Domain("polynomial speedup undefined at n = 0".into()));
                }
                Ok(F::from_u32(n).expect("u32 fits").powf(alpha))
            }
            Self::Exponential { beta } => Ok(F::lit(2.0).powf(beta * F::from_u32(n).expect("u32 fits"))),
        }
    }
}

impl<F: Real> fmt::Display for SpeedupRegime<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: F| x.to_f64().unwrap_or(f64::NAN);
        match *self {
            Self::Constant { factor } => write!(f, "const:{}", v(factor)),
            Self::Polynomial { alpha } => write!(f, "poly:{}", v(alpha)),
            Self::Exponential { beta } => write!(f, "exp:{}", v(beta)),
        }
    }
}

impl<F: Real> FromStr for SpeedupRegime<F> {
    type Err = Error;

    /// Parses `const:L`, `poly:alpha` or `exp:beta`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidRegime(format!("expected kind:value, got `{s}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRegime(format!("bad number in `{s}`")))?;
        let value = F::lit(value);
        match kind.trim() {
            "const" | "constant" => Self::constant(value),
            "poly" | "polynomial" => Self::polynomial(value),
            "exp" | "exponential" => Self::exponential(value),
            other => Err(Error::InvalidRegime(format!("unknown regime `{other}`"))),
        }
    }
}

/// Runtime of the full sweep when the speedup follows `regime`.
///
/// The exponential regime is evaluated as `2^((1 - beta) n) * t_c` directly
/// rather than dividing two huge powers.
pub fn regime_runtime<F: Real>(n: u32, t_c: F, regime: &SpeedupRegime<F>) -> Result<F> {
    check_time(t_c)?;
    match *regime {
        SpeedupRegime::Constant { factor } => accelerated_runtime(n, t_c, factor),
        SpeedupRegime::Polynomial { .. } => {
            let speedup = regime.speedup(n)?;
            // n^alpha may drop below one for tiny n; the formula still holds
            Ok(pow2::<F>(n)? / speedup * t_c)
        }
        SpeedupRegime::Exponential { beta } => {
            let exponent = (F::one() - beta) * F::from_u32(n).expect("u32 fits");
            Ok(F::lit(2.0).powf(exponent) * t_c)
        }
    }
}

/// Leading-order unstructured-search query count `2^(n/2)` over `N = 2^n`
/// candidates. The `pi/4` prefactor is deliberately omitted.
pub fn grover_queries<F: Real>(n: u32) -> Result<F> {
    let half = pow2::<F>(n / 2)?;
    Ok(if n.is_multiple_of(2) { half } else { half * F::lit(2.0).sqrt() })
}

/// Components of the total cost of a training set, in monetary units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostLedger<F> {
    pub label: F,
    pub curate: F,
    pub compute: F,
    pub latency: F,
    pub risk: F,
}

impl<F: Real> CostLedger<F> {
    pub fn new(label: F, curate: F, compute: F, latency: F, risk: F) -> Result<Self> {
        let ledger = Self {
            label,
            curate,
            compute,
            latency,
            risk,
        };
        for (name, v) in ledger.components() {
            if !(v >= F::zero() && v.is_finite()) {
                return Err(Error::Domain(format!("cost component `{name}` must be nonnegative, got {v:?}")));
            }
        }
        Ok(ledger)
    }

    pub fn components(&self) -> [(&'static str, F); 5] {
        [
            ("label", self.label),
            ("curate", self.curate),
            ("compute", self.compute),
            ("latency", self.latency),
            ("risk", self.risk),
        ]
    }

    pub fn scaled(&self, k: F) -> Result<Self> {
        Self::new(self.label * k, self.curate * k, self.compute * k, self.latency * k, self.risk * k)
    }
}

pub fn ledger_total<F: Real>(ledger: &CostLedger<F>) -> F {
    ledger.label + ledger.curate + ledger.compute + ledger.latency + ledger.risk
}

/// Quality per unit cost.
pub fn perf_per_cost<F: Real>(quality: F, ledger: &CostLedger<F>) -> Result<F> {
    if quality.is_nan() || quality < F::zero() {
        return Err(Error::Domain(format!("quality must be nonnegative, got {quality:?}")));
    }
    let total = ledger_total(ledger);
    if total == F::zero() {
        return Err(Error::ZeroCost);
    }
    Ok(quality / total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingRow<F> {
    pub n: u32,
    pub classical: F,
    pub constant: Option<F>,
    pub polynomial: Option<F>,
    pub exponential: Option<F>,
    pub grover_queries: F,
}

pub const SCALING_CSV_HEADER: [&str; 6] = ["n", "T_classical", "T_const", "T_poly", "T_exp", "grover_queries"];

/// One row per `n`. At most one regime of each kind is used (the last one
/// given wins); kinds not given, and the polynomial column at `n = 0`, are left empty.
pub fn scaling_table<F: Real>(ns: &[u32], t_c: F, regimes: &[SpeedupRegime<F>]) -> Result<Vec<ScalingRow<F>>> {
    if ns.is_empty() {
        return Err(Error::Domain("n range is empty".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("n range must be strictly ascending".into()));
    }
    let mut constant = None;
    let mut polynomial = None;
    let mut exponential = None;
    for r in regimes {
        let r = r.validate()?;
        match r {
            SpeedupRegime::Constant { .. } => constant = Some(r),
            SpeedupRegime::Polynomial { .. } => polynomial = Some(r),
            SpeedupRegime::Exponential { .. } => exponential = Some(r),
        }
    }
    ns.iter()
        .map(|&n| {
            let column = |r: Option<SpeedupRegime<F>>| -> Result<Option<F>> {
                match r {
                    Some(SpeedupRegime::Polynomial { .. }) if n == 0 => Ok(None),
                    Some(r) => regime_runtime(n, t_c, &r).map(Some),
                    None => Ok(None),
                }
            };
            Ok(ScalingRow {
                n,
                classical: classical_runtime(n, t_c)?,
                constant: column(constant)?,
                polynomial: column(polynomial)?,
                exponential: column(exponential)?,
                grover_queries: grover_queries(n)?,
            })
        })
        .collect()
}

pub fn write_scaling_csv<F: Real, W: Write>(rows: &[ScalingRow<F>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCALING_CSV_HEADER)?;
    let cell = |v: Option<F>| v.map(|x| x.to_f64().unwrap_or(f64::NAN).to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.n.to_string(),
            cell(Some(r.classical)),
            cell(r.constant),
            cell(r.polynomial),
            cell(r.exponential),
            cell(Some(r.grover_queries)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::fit_line;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_runtime(0, 1.0).unwrap(), 1.0);
        assert!(close(classical_runtime(10, 1e-3).unwrap(), 1.024, 1e-12));
        for n in 1..=20 {
            assert_eq!(classical_runtime(n + 1, 0.37).unwrap() / classical_runtime(n, 0.37).unwrap(), 2.0);
        }
        assert_eq!(classical_runtime(63, 1.0f64).unwrap(), 9_223_372_036_854_775_808.0);
        assert!(classical_runtime(3, 0.0f64).is_err());
    }

    #[test]
    fn accelerated_examples() {
        assert!(close(accelerated_runtime(10, 1e-3, 4.0).unwrap(), 0.256, 1e-12));
        assert_eq!(accelerated_runtime(12, 0.5, 1.0).unwrap(), classical_runtime(12, 0.5).unwrap());
        assert!(close(accelerated_runtime(20, 1e-3, (1u64 << 20) as f64).unwrap(), 1e-3, 1e-12));
        assert!(matches!(accelerated_runtime(3, 1.0, 0.5), Err(Error::InvalidSpeedup(_))));
    }

    #[test]
    fn regime_examples() {
        let full = SpeedupRegime::exponential(1.0).unwrap();
        for n in [0, 1, 17, 63] {
            assert_eq!(regime_runtime(n, 0.25, &full).unwrap(), 0.25);
        }
        let poly = SpeedupRegime::polynomial(2.0).unwrap();
        assert_eq!(regime_runtime(16, 1.0, &poly).unwrap(), 256.0);
        assert!(matches!(regime_runtime(0, 1.0, &poly), Err(Error::Domain(_))));
        let half = SpeedupRegime::exponential(0.5).unwrap();
        let ratio = regime_runtime(11, 1.0, &half).unwrap() / regime_runtime(10, 1.0, &half).unwrap();
        assert!(close(ratio, 2f64.sqrt(), 1e-12));
    }

    #[test]
    fn regime_validation() {
        assert!(SpeedupRegime::<f64>::constant(0.5).is_err());
        assert!(SpeedupRegime::<f64>::polynomial(0.0).is_err());
        assert!(SpeedupRegime::<f64>::exponential(0.0).is_err());
        assert!(SpeedupRegime::<f64>::exponential(1.5).is_err());
        assert_eq!("const:4".parse::<SpeedupRegime<f64>>().unwrap(), SpeedupRegime::Constant { factor: 4.0 });
        assert_eq!("exp:0.5".parse::<SpeedupRegime<f32>>().unwrap(), SpeedupRegime::Exponential { beta: 0.5 });
        assert!("warp:9".parse::<SpeedupRegime<f64>>().is_err());
        assert!("poly".parse::<SpeedupRegime<f64>>().is_err());
    }

    #[test]
    fn grover_examples() {
        assert_eq!(grover_queries::<f64>(10).unwrap(), 32.0);
        assert_eq!(grover_queries::<f64>(0).unwrap(), 1.0);
        for n in 2..=63 {
            let d = grover_queries::<f64>(n).unwrap().log2() - grover_queries::<f64>(n - 2).unwrap().log2();
            assert!(close(d, 1.0, 1e-12));
        }
    }

    #[test]
    fn ledger_examples() {
        let l = CostLedger::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(ledger_total(&l), 5.0);
        assert!(close(perf_per_cost(0.9, &l).unwrap(), 0.18, 1e-12));
        let doubled = l.scaled(2.0).unwrap();
        assert_eq!(perf_per_cost(0.9, &doubled).unwrap() * 2.0, perf_per_cost(0.9, &l).unwrap());
        let zero = CostLedger::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(perf_per_cost(1.0, &zero), Err(Error::ZeroCost)));
        assert!(CostLedger::new(1.0, -1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn table_examples() {
        let regimes = [
            SpeedupRegime::constant(4.0).unwrap(),
            SpeedupRegime::polynomial(2.0).unwrap(),
            SpeedupRegime::exponential(0.25).unwrap(),
        ];
        let rows = scaling_table(&[1, 2, 3, 4], 1.0, &regimes).unwrap();
        let tc: Vec<f64> = rows.iter().map(|r| r.classical).collect();
        assert_eq!(tc, vec![2.0, 4.0, 8.0, 16.0]);
        for r in &rows {
            assert_eq!(r.constant.unwrap(), r.classical / 4.0);
        }
        let ns: Vec<u32> = (1..=24).collect();
        let rows = scaling_table(&ns, 1.0, &regimes).unwrap();
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.exponential.unwrap().log2()).collect();
        assert!((fit_line(&xs, &ys).unwrap().slope - 0.75).abs() < 1e-9);
        assert!(scaling_table::<f64>(&[], 1.0, &regimes).is_err());
        assert!(scaling_table::<f64>(&[3, 2], 1.0, &regimes).is_err());
    }

    #[test]
    fn csv_layout() {
        let regimes = [SpeedupRegime::polynomial(1.0).unwrap()];
        let rows = scaling_table(&[0, 1], 1.0, &regimes).unwrap();
        let mut buf = Vec::new();
        write_scaling_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,T_classical,T_const,T_poly,T_exp,grover_queries\n0,1,,,,1\n1,2,,2,,1.4142135623730951\n");
    }

    #[test]
    fn works_in_single_precision() {
        assert_eq!(classical_runtime::<f32>(10, 0.5).unwrap(), 512.0);
        assert_eq!(grover_queries::<f32>(20).unwrap(), 1024.0);
        let r = regime_runtime::<f32>(16, 1.0, &SpeedupRegime::polynomial(2.0).unwrap()).unwrap();
        assert_eq!(r, 256.0);
    }
}
