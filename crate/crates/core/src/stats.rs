//! Descriptive statistics, Pearson correlation, and Levene's test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neumaier-compensated sum.
pub fn sum(xs: &[f64]) -> f64 {
    let mut s = 0.0_f64;
    let mut c = 0.0_f64;
    for &x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Arithmetic mean; 0 for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    sum(xs) / xs.len() as f64
}

/// Sample variance with denominator `n - 1`; 0 for fewer than two values.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    sum(&sq) / (xs.len() - 1) as f64
}

/// Median; reorders the slice. 0 for an empty slice.
pub fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
}

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            actual: xs.len(),
            forecast: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateInput(
            "correlation needs at least two observations".into(),
        ));
    }
    let mx = mean(xs);
    let my = mean(ys);
    let dx: Vec<f64> = xs.iter().map(|x| x - mx).collect();
    let dy: Vec<f64> = ys.iter().map(|y| y - my).collect();
    let sxx = sum(&dx.iter().map(|d| d * d).collect::<Vec<_>>());
    let syy = sum(&dy.iter().map(|d| d * d).collect::<Vec<_>>());
    let sxy = sum(&dx.iter().zip(&dy).map(|(a, b)| a * b).collect::<Vec<_>>());
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput(
            "correlation undefined for a constant sequence".into(),
        ));
    }
    // With unit-norm u and v, r = 1 - |u - v|^2 / 2 = |u + v|^2 / 2 - 1.
    // Taking the smaller distance keeps full precision near |r| = 1.
    let (nx, ny) = (sxx.sqrt(), syy.sqrt());
    let gap = |sign: f64| {
        sum(&dx
            .iter()
            .zip(&dy)
            .map(|(a, b)| (a / nx - sign * b / ny).powi(2))
            .collect::<Vec<_>>())
    };
    let r = if sxy >= 0.0 {
        1.0 - gap(1.0) / 2.0
    } else {
        gap(-1.0) / 2.0 - 1.0
    };
    let r = r.clamp(-1.0, 1.0);
    Ok(CorrelationResult { r, n: xs.len() })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeveneCenter {
    /// Deviations from group means (Levene's original statistic).
    #[default]
    Mean,
    /// Deviations from group medians (Brown-Forsythe).
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeveneResult {
    pub w: f64,
    pub df1: usize,
    pub df2: usize,
    pub p: f64,
}

pub fn levene<G: AsRef<[f64]>>(groups: &[G]) -> Result<LeveneResult> {
    levene_with(groups, LeveneCenter::Mean)
}

pub fn levene_with<G: AsRef<[f64]>>(groups: &[G], center: LeveneCenter) -> Result<LeveneResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::TooFewGroups(k));
    }
    for (i, g) in groups.iter().enumerate() {
        if g.as_ref().len() < 2 {
            return Err(Error::GroupTooSmall {
                group: i,
                size: g.as_ref().len(),
            });
        }
    }

    let deviations: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let g = g.as_ref();
            let c = match center {
                LeveneCenter::Mean => mean(g),
                LeveneCenter::Median => median(&mut g.to_vec()),
            };
            g.iter().map(|x| (x - c).abs()).collect()
        })
        .collect();

    let total: usize = deviations.iter().map(Vec::len).sum();
    let group_means: Vec<f64> = deviations.iter().map(|z| mean(z)).collect();
    let all: Vec<f64> = deviations.iter().flatten().copied().collect();
    let grand = mean(&all);

    let between = sum(&deviations
        .iter()
        .zip(&group_means)
        .map(|(z, m)| z.len() as f64 * (m - grand) * (m - grand))
        .collect::<Vec<_>>());
    let within = sum(&deviations
        .iter()
        .zip(&group_means)
        .flat_map(|(z, m)| z.iter().map(move |x| (x - m) * (x - m)))
        .collect::<Vec<_>>());

    let df1 = k - 1;
    let df2 = total - k;
    let (w, p) = if within == 0.0 {
        if between == 0.0 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY, 0.0)
        }
    } else {
        let w = (df2 as f64 / df1 as f64) * between / within;
        (w, f_sf(w, df1 as f64, df2 as f64)?)
    };
    Ok(LeveneResult { w, df1, df2, p })
}

/// Upper tail `P(F > x)` of the F distribution with `(d1, d2)` degrees of freedom.
pub fn f_sf(x: f64, d1: f64, d2: f64) -> Result<f64> {
    if !(d1 > 0.0 && d2 > 0.0 && d1.is_finite() && d2.is_finite()) {
        return Err(Error::InvalidDegreesOfFreedom { d1, d2 });
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::DegenerateInput(format!("F statistic must be >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let z = d2 / (d2 + d1 * x);
    Ok(regularized_beta(z, d2 / 2.0, d1 / 2.0).clamp(0.0, 1.0))
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // The continued fraction converges fastest below the mean of the distribution.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    const MAX_ITER: usize = 10_000;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Lanczos approximation (g = 7, 9 terms) of `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
