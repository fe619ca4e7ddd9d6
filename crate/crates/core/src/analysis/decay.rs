//! Power-law fits and dyadic decay reports.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::region::{nested_stats, Sampling};
use crate::field::PhaseField;
use crate::galilean::PhasePoint;
use crate::geometry::{classify, BoundaryClass, Domain};
use crate::{Error, Result};

/// Least-squares fit `log value ≈ exponent · log radius + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the natural logarithms.
    pub residual: f64,
    pub used: usize,
    /// Some value was zero (or negative) and was excluded.
    pub infinite_order: bool,
}

pub fn fit_exponent(radii: &[f64], values: &[f64]) -> Result<ExponentFit> {
    if radii.len() != values.len() {
        return Err(Error::Usage("radii and values differ in length"));
    }
    let mut infinite_order = false;
    let mut pts = Vec::with_capacity(radii.len());
    for (&r, &v) in radii.iter().zip(values) {
        if !(r > 0.0) || !r.is_finite() || !v.is_finite() {
            continue;
        }
        if v <= 0.0 {
            infinite_order = true;
            continue;
        }
        pts.push((r.ln(), v.ln()));
    }
    if pts.len() < 3 {
        return Err(Error::DegenerateFit { usable: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit { usable: 1 });
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum();
    Ok(ExponentFit { exponent, intercept, residual: (ss / n).sqrt(), used: pts.len(), infinite_order })
}

/// `r_k = r₀ 2^{−k}`, `k = 0..count`.
pub fn dyadic_radii(r0: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| r0 * 0.5f64.powi(k as i32)).collect()
}

/// Relative floor below which measured values are treated as round-off.
pub const RELATIVE_FLOOR: f64 = 1e-10;
/// Local exponent that counts as "faster than any practical power".
pub const INFINITE_ORDER_THRESHOLD: f64 = 3.0;
/// Allowed decrease between consecutive local exponents.
pub const MONOTONE_SLACK: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub center: PhasePoint<1>,
    pub radii: Vec<f64>,
    pub osc: Vec<f64>,
    pub sup: Vec<f64>,
    /// `q_k = log₂(osc_k / osc_{k+1})`.
    pub q: Vec<f64>,
    /// Whether radius `r_k` is resolved by the grid (`r³ ≥ Δx`, `r² ≥ Δt`, `r ≥ Δv`).
    pub resolved: Vec<bool>,
    pub osc_fit: Option<ExponentFit>,
    pub sup_fit: Option<ExponentFit>,
    /// Set by [`vanishing_order`].
    pub infinite_order: Option<bool>,
}

impl DecayReport {
    /// Windows usable for local exponents: both ends resolved and above the floor.
    pub fn usable_windows(&self) -> Vec<usize> {
        let floor = RELATIVE_FLOOR * self.osc.first().copied().unwrap_or(0.0);
        (0..self.q.len())
            .filter(|&k| self.resolved[k + 1] && self.osc[k + 1] > floor && self.q[k].is_finite())
            .collect()
    }

    /// Geometric-decay shadow of the oscillation lemma: with
    /// `osc_k ≤ C₀ (1 − θ/2)^{k−1}`, `θ` from the regression of `log₂ osc_k`
    /// on `k` and `C₀` the smallest constant making the bound hold.
    pub fn geometric_decay(&self) -> Option<GeometricDecay> {
        let fit = self.osc_fit?;
        let ks: Vec<f64> = (0..self.osc.len()).map(|k| k as f64).collect();
        let mut n = 0.0;
        let (mut mk, mut my) = (0.0, 0.0);
        let mut pts = Vec::new();
        for ((k, &o), &res) in ks.iter().zip(&self.osc).zip(&self.resolved) {
            if o > 0.0 && res {
                pts.push((*k, o.log2()));
                mk += k;
                my += o.log2();
                n += 1.0;
            }
        }
        if n < 3.0 {
            return None;
        }
        mk /= n;
        my /= n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mk).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mk) * (p.1 - my)).sum();
        let rate = 2f64.powf(sxy / sxx);
        let theta = 2.0 * (1.0 - rate);
        let c0 = pts.iter().map(|&(k, l)| 2f64.powf(l) / rate.powf(k - 1.0)).fold(0.0, f64::max);
        let lhs = 2f64.powf(-fit.exponent);
        Some(GeometricDecay { theta, c0, alpha: fit.exponent, consistent: lhs >= rate - fit.residual })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricDecay {
    pub theta: f64,
    pub c0: f64,
    pub alpha: f64,
    /// `2^{−α} ≥ (1 − θ/2)` within the fit residual.
    pub consistent: bool,
}

/// Oscillation and sup over nested `H_{r_k}(z⁰)` with fitted exponents.
pub fn decay_report<F: PhaseField + ?Sized>(
    f: &F,
    z0: &PhasePoint<1>,
    radii: &[f64],
    dom: &Domain<1>,
    opts: Sampling,
) -> Result<DecayReport> {
    if radii.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Usage("radii must be strictly decreasing"));
    }
    let stats = nested_stats(f, z0, radii, dom, opts)?;
    let osc: Vec<f64> = stats.iter().map(|s| s.oscillation()).collect();
    let sup: Vec<f64> = stats.iter().map(|s| s.sup).collect();
    let q = osc.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let resolved: Vec<bool> = radii
        .iter()
        .map(|&r| match f.grid() {
            Some(g) => {
                let dt = (g.t_range().1 - g.t_range().0) / (g.times.len().max(2) - 1) as f64;
                r * r * r >= g.x.step && r * r >= dt && r >= g.v.step
            }
            None => true,
        })
        .collect();
    // fits only see radii the grid resolves
    let keep = |vals: &[f64]| -> (Vec<f64>, Vec<f64>) {
        (0..radii.len()).filter(|&k| resolved[k]).map(|k| (radii[k], vals[k])).unzip()
    };
    let (ro, vo) = keep(&osc);
    let (rs, vs) = keep(&sup);
    Ok(DecayReport {
        center: *z0,
        radii: radii.to_vec(),
        osc_fit: fit_exponent(&ro, &vo).ok(),
        sup_fit: fit_exponent(&rs, &vs).ok(),
        osc,
        sup,
        q,
        resolved,
        infinite_order: None,
    })
}

/// Decay report at an incoming boundary point with the infinite-order
/// verdict: over the usable windows the local exponents increase (up to
/// [`MONOTONE_SLACK`]) and exceed [`INFINITE_ORDER_THRESHOLD`] while
/// `r_{k+1} ≥ r₀/100`. An oscillation that hits the floor at once also counts.
pub fn vanishing_order<F: PhaseField + ?Sized>(
    f: &F,
    z0: &PhasePoint<1>,
    radii: &[f64],
    dom: &Domain<1>,
    opts: Sampling,
) -> Result<DecayReport> {
    if classify(z0, dom)? != BoundaryClass::Incoming {
        return Err(Error::NotIncoming);
    }
    let mut rep = decay_report(f, z0, radii, dom, opts)?;
    let windows = rep.usable_windows();
    let monotone = windows.windows(2).all(|w| rep.q[w[1]] >= rep.q[w[0]] - MONOTONE_SLACK);
    let r0 = radii[0];
    let exceeds = windows.iter().any(|&k| rep.q[k] > INFINITE_ORDER_THRESHOLD && radii[k + 1] >= r0 / 100.0);
    let floored = rep.osc.len() > 1 && rep.osc[1] <= RELATIVE_FLOOR * rep.osc[0];
    rep.infinite_order = Some((monotone && exceeds) || floored);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;
    use crate::galilean::kinetic_distance;

    #[test]
    fn exact_power_laws() {
        let radii = dyadic_radii(1.0, 8);
        let vals: Vec<f64> = radii.iter().map(|r| 3.0 * r.powf(0.5)).collect();
        let fit = fit_exponent(&radii, &vals).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12 && fit.residual <= 1e-10);
        let flat = fit_exponent(&radii, &[2.0; 8]).unwrap();
        assert!(flat.exponent.abs() < 1e-12);
    }

    #[test]
    fn zeros_are_flagged() {
        let fit = fit_exponent(&[1.0, 0.5, 0.25, 0.125], &[1.0, 0.5, 0.25, 0.0]).unwrap();
        assert!(fit.infinite_order);
        assert_eq!(fit.used, 3);
        assert!(matches!(fit_exponent(&[1.0, 0.5], &[1.0, 0.5]), Err(Error::DegenerateFit { usable: 2 })));
    }

    #[test]
    fn squared_distance_decays_quadratically() {
        let z0 = PhasePoint::raw(0.0, [0.0], [-1.0]);
        let f = FnField(move |z: &PhasePoint<1>| kinetic_distance(z, &z0).powi(2));
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let rep = vanishing_order(&f, &z0, &dyadic_radii(0.5, 6), &dom, Sampling { samples: 4000, seed: 3 }).unwrap();
        let fit = rep.osc_fit.unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.05, "{fit:?}");
        assert_eq!(rep.infinite_order, Some(false));
    }

    #[test]
    fn exponential_vanishing_is_infinite_order() {
        let z0 = PhasePoint::raw(0.0, [0.0], [-1.0]);
        let f = FnField(move |z: &PhasePoint<1>| {
            let d = kinetic_distance(z, &z0);
            if d > 0.0 { (-1.0 / d).exp() } else { 0.0 }
        });
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let rep = vanishing_order(&f, &z0, &dyadic_radii(1.0, 7), &dom, Sampling { samples: 4000, seed: 3 }).unwrap();
        let w = rep.usable_windows();
        assert!(w.len() >= 3, "{rep:?}");
        for pair in w.windows(2) {
            assert!(rep.q[pair[1]] > rep.q[pair[0]]);
        }
        assert_eq!(rep.infinite_order, Some(true));
    }

    #[test]
    fn center_must_be_incoming() {
        let f = FnField(|_: &PhasePoint<1>| 0.0);
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let err = vanishing_order(&f, &PhasePoint::raw(0.0, [0.0], [1.0]), &[1.0, 0.5, 0.25], &dom, Sampling::default());
        assert!(matches!(err, Err(Error::NotIncoming)));
    }

    #[test]
    fn geometric_and_holder_estimators_agree() {
        let radii = dyadic_radii(1.0, 6);
        let z0 = PhasePoint::raw(0.0, [-3.0], [0.0]);
        let f = FnField(move |z: &PhasePoint<1>| kinetic_distance(z, &z0).powf(0.3) + 0.01 * z.v[0]);
        let rep = decay_report(&f, &z0, &radii, &Domain::Whole, Sampling::default()).unwrap();
        let g = rep.geometric_decay().unwrap();
        assert!(g.theta > 0.0 && g.consistent);
        for (k, &o) in rep.osc.iter().enumerate() {
            assert!(o <= g.c0 * (1.0 - g.theta / 2.0).powi(k as i32 - 1) * (1.0 + 1e-12));
        }
    }
}
