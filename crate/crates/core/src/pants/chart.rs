//! Blow-up chart expressions near a vertex. In the chart at p_0 with the axis last,
//! z = t·(α₁, …, α_n, 1) and with K = cos(tσ)·Π α̂_j sinc(tα̂_j):
//! F = t·K^{1/d} and h_j = K^{1/d}(t·cot(tα̂_j) − t·tan(tσ))/d.
//! Both are smooth through t = 0.

use crate::coamoeba::Symmetry;
use crate::error::{Error, Result};

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

/// cot x − 1/x, the derivative of log sinc.
fn log_sinc_d(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        -x / 3.0 - x.powi(3) / 45.0 - 2.0 * x.powi(5) / 945.0
    } else {
        1.0 / x.tan() - 1.0 / x
    }
}

/// cot x − x csc²x, the t-derivative of t·cot(tα) at x = tα.
fn tcot_d(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        -2.0 * x / 3.0 - 4.0 * x.powi(3) / 45.0
    } else {
        let s = x.sin();
        x.cos() / s - x / (s * s)
    }
}

/// Values and parameter derivatives at a chart point. Parameters are (α₁, …, α_n, t);
/// `dh[j][p]` is ∂h_j/∂p and `dy[i][p]` is ∂y_i/∂p. Nothing here is scaled by λ.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartJet {
    pub f: f64,
    pub df: Vec<f64>,
    pub h: Vec<f64>,
    pub y: Vec<f64>,
    pub dh: Vec<Vec<f64>>,
    pub dy: Vec<Vec<f64>>,
}

fn check(alpha: &[f64], t: f64) -> Result<Vec<f64>> {
    if !t.is_finite() || alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::Domain(format!("chart point ({alpha:?}, {t}) needs positive finite α")));
    }
    let mut ah = alpha.to_vec();
    ah.push(1.0);
    Ok(ah)
}

struct Core {
    ah: Vec<f64>,
    sigma: f64,
    kr: f64,
    h: Vec<f64>,
}

fn core(alpha: &[f64], t: f64) -> Result<Core> {
    let ah = check(alpha, t)?;
    let d = ah.len() as f64;
    let sigma: f64 = ah.iter().sum();
    let c = (t * sigma).cos();
    let mut k = c;
    for a in &ah {
        k *= a * sinc(t * a);
    }
    if c <= 0.0 || k <= 0.0 || (t * sigma).abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("chart point ({alpha:?}, {t}) leaves the coamoeba")));
    }
    let kr = k.powf(1.0 / d);
    let p = t * (t * sigma).tan();
    let tj: Vec<f64> = ah.iter().map(|a| (t * a).cos() / (a * sinc(t * a))).collect();
    let h = tj.iter().map(|v| kr * (v - p) / d).collect();
    Ok(Core { ah, sigma, kr, h })
}

/// Potential and gradient in the chart at p_0 (axis last), unscaled.
pub fn origin_values(alpha: &[f64], t: f64) -> Result<(f64, Vec<f64>)> {
    let c = core(alpha, t)?;
    Ok((t * c.kr, c.h))
}

/// Exact gradient on the exceptional set: h_j = (Π α̂)^{1/d} / (d α̂_j).
pub fn exceptional_gradient(alpha: &[f64]) -> Result<Vec<f64>> {
    let ah = check(alpha, 0.0)?;
    let d = ah.len() as f64;
    let g = ah.iter().product::<f64>().powf(1.0 / d);
    Ok(ah.iter().map(|a| g / (d * a)).collect())
}

/// Full jet in the chart at p_0 (axis last).
pub fn origin_jet(alpha: &[f64], t: f64) -> Result<ChartJet> {
    let c = core(alpha, t)?;
    let n = alpha.len();
    let d = (n + 1) as f64;
    let ts = t * c.sigma;
    let (tan, sec2) = (ts.tan(), 1.0 / ts.cos().powi(2));
    // derivatives of log K, of t·cot(tα̂_j) and of t·tan(tσ)
    let mut dlogk = vec![0.0; n + 1];
    for i in 0..n {
        dlogk[i] = -t * tan + 1.0 / alpha[i] + t * log_sinc_d(t * alpha[i]);
    }
    dlogk[n] = -c.sigma * tan + c.ah.iter().map(|a| a * log_sinc_d(t * a)).sum::<f64>();
    let mut dp = vec![t * t * sec2; n + 1];
    dp[n] = tan + ts * sec2;
    let mut dh = vec![vec![0.0; n + 1]; n + 1];
    for j in 0..=n {
        for p in 0..=n {
            let dt = if p == n {
                tcot_d(t * c.ah[j])
            } else if p == j {
                let s = sinc(t * alpha[j]);
                -1.0 / (alpha[j] * alpha[j] * s * s)
            } else {
                0.0
            };
            dh[j][p] = c.h[j] * dlogk[p] / d + c.kr * (dt - dp[p]) / d;
        }
    }
    let f = t * c.kr;
    let mut df: Vec<f64> = dlogk.iter().map(|g| f * g / d).collect();
    df[n] += c.kr;
    let y: Vec<f64> = c.ah.iter().map(|a| t * a).collect();
    let mut dy = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        dy[i][i] = t;
        dy[i][n] = alpha[i];
    }
    dy[n][n] = 1.0;
    Ok(ChartJet { f, df, h: c.h, y, dh, dy })
}

/// Jet in the chart at vertex k: the origin chart composed with the vertex symmetry.
pub fn vertex_jet(k: usize, alpha: &[f64], t: f64) -> Result<ChartJet> {
    let mut jet = origin_jet(alpha, t)?;
    if k == 0 {
        return Ok(jet);
    }
    let d = alpha.len() + 1;
    let s = Symmetry::new(d, k)?;
    jet.y = s.torus(&jet.y);
    jet.h = s.base(&jet.h);
    for p in 0..d {
        let col: Vec<f64> = (0..d).map(|i| jet.dy[i][p]).collect();
        let dcol: Vec<f64> = (0..d).map(|i| jet.dh[i][p]).collect();
        let (ny, nh) = (s.torus_linear(&col), s.base(&dcol));
        for i in 0..d {
            jet.dy[i][p] = ny[i];
            jet.dh[i][p] = nh[i];
        }
    }
    Ok(jet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_h(z: &[f64]) -> Vec<f64> {
        let d = z.len() as f64;
        let s: f64 = z.iter().sum();
        let x = s.cos() * z.iter().map(|v| v.sin()).product::<f64>();
        let f = x.powf(1.0 / d);
        z.iter().map(|v| f * (1.0 / v.tan() - s.tan()) / d).collect()
    }

    #[test]
    fn matches_direct_formula_away_from_vertex() {
        for (alpha, t) in [(vec![0.7], 0.3), (vec![1.3, 0.4], 0.2), (vec![2.0], -0.25)] {
            let (_, h) = origin_values(&alpha, t).unwrap();
            let z: Vec<f64> = alpha.iter().chain([1.0].iter()).map(|a| (a * t).abs()).collect();
            let hd = direct_h(&z);
            for (a, b) in h.iter().zip(&hd) {
                assert!((a - b).abs() < 1e-12, "{h:?} vs {hd:?}");
            }
        }
    }

    #[test]
    fn exceptional_value() {
        let (f, h) = origin_values(&[1.0], 0.0).unwrap();
        assert_eq!(f, 0.0);
        assert_eq!(h, vec![0.5, 0.5]);
        assert_eq!(exceptional_gradient(&[1.0]).unwrap(), h);
        let h3 = exceptional_gradient(&[0.5, 2.0]).unwrap();
        let prod: f64 = h3.iter().product();
        assert!((27.0 * prod - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jet_against_finite_differences() {
        let step = 1e-6;
        for (k, alpha, t) in [(0, vec![0.8], 0.2), (0, vec![0.8], 0.0), (2, vec![0.6, 1.7], 0.1), (1, vec![1.1], -0.05)] {
            let jet = vertex_jet(k, &alpha, t).unwrap();
            let d = alpha.len() + 1;
            for p in 0..d {
                let shift = |s: f64| {
                    let mut a = alpha.clone();
                    let mut tt = t;
                    if p < d - 1 {
                        a[p] += s;
                    } else {
                        tt += s;
                    }
                    vertex_jet(k, &a, tt).unwrap()
                };
                let (jp, jm) = (shift(step), shift(-step));
                for i in 0..d {
                    let fd_h = (jp.h[i] - jm.h[i]) / (2.0 * step);
                    let fd_y = (jp.y[i] - jm.y[i]) / (2.0 * step);
                    assert!((fd_h - jet.dh[i][p]).abs() < 1e-7, "dh {k} {p} {i}: {fd_h} vs {}", jet.dh[i][p]);
                    assert!((fd_y - jet.dy[i][p]).abs() < 1e-8);
                }
                let fd_f = (jp.f - jm.f) / (2.0 * step);
                assert!((fd_f - jet.df[p]).abs() < 1e-8);
            }
        }
    }
}
