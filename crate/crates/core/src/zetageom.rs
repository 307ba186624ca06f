//! Geometric-side series over a truncated length spectrum.
//!
//! Two closely related Dirichlet series appear here. The *primary* series
//! is
//!
//! ```text
//!   L(s) = sum over classes of  mult * ell0 * e^{-s ell} / (e^{ell} - 1)
//! ```
//!
//! which is the quantity the downstream convergence statements are phrased
//! in. The log-derivative of the zeta product itself is
//!
//! ```text
//!   Z'/Z(s) = sum over classes of  mult * ell0 * e^{-s ell} / (1 - e^{-ell})
//! ```
//!
//! (differentiate `log Z = sum log(1 - e^{-(s+k) ell})` over `k >= 0`; the
//! geometric sum over `k` gives the `1/(1 - e^{-ell})` weight). The two
//! are related by `L(s) = Z'/Z(s + 1)`. Both are exposed; the trace-formula
//! identity and the spectral cross-checks use the `Z'/Z` normalization,
//! everything phrased directly in `L` uses the primary one.
//!
//! The transform `D_s(psi)(s) = -d/ds [ psi(s)/s ]` has closed forms on a
//! Dirichlet series `sum a e^{-s b}`:
//!
//! ```text
//!   D_s:    (1/s^2) sum a (1 + s b) e^{-s b}
//!   D_s^2:  (1/s^4) sum a (s^2 b^2 + 3 s b + 3) e^{-s b}
//! ```
//!
//! (first is a direct product-rule computation; applying `D_s` again:
//! `-d/ds[(1+sb)e^{-sb}/s^3] = e^{-sb}(s^2 b^2 + 3 s b + 3)/s^4`). Both are
//! verified against nested finite differences in the tests. All series are
//! evaluated in `f64` — truncation error dominates rounding by many orders
//! — with fixed ascending-length compensated summation for determinism.

use crate::fuchsian::LengthSpectrum;
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum ZetaError {
    #[error("series requires Re(s) > 1, got {0}")]
    Domain(f64),
    #[error("spectrum too small to fit a growth constant ({0} distinct lengths, need >= 2)")]
    Unfit(usize),
}

fn check_domain(s: Complex64) -> Result<(), ZetaError> {
    if s.re <= 1.0 {
        return Err(ZetaError::Domain(s.re));
    }
    Ok(())
}

/// Kahan-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: Complex64,
    c: Complex64,
}

impl Kahan {
    fn add(&mut self, x: Complex64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Weighted sum `sum w(record) * f(s, ell) e^{-s ell}` in ascending-length
/// order with compensated summation.
fn series_sum<W, F>(spec: &LengthSpectrum, s: Complex64, weight: W, factor: F) -> Complex64
where
    W: Fn(f64, f64, usize) -> f64, // (ell0, ell, multiplicity) -> weight
    F: Fn(Complex64, f64) -> Complex64,
{
    let mut acc = Kahan::default();
    for r in &spec.records {
        let w = weight(r.ell0, r.ell, r.multiplicity);
        let term = factor(s, r.ell) * ((-s * r.ell).exp()) * w;
        acc.add(term);
    }
    acc.sum
}

fn primary_weight(ell0: f64, ell: f64, mult: usize) -> f64 {
    mult as f64 * ell0 / (ell.exp() - 1.0)
}

fn zlog_weight(ell0: f64, ell: f64, mult: usize) -> f64 {
    mult as f64 * ell0 / (1.0 - (-ell).exp())
}

/// `L(s)`: the primary series (see module docs).
pub fn log_deriv(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    Ok(series_sum(spec, s, primary_weight, |_, _| Complex64::new(1.0, 0.0)))
}

/// `L(s) / covolume`.
pub fn normalized_log_deriv(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    Ok(log_deriv(spec, s)? / spec.covolume)
}

/// `D_s L(s) = (1/s^2) sum a (1 + s ell) e^{-s ell}`.
pub fn ds_log_deriv(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    let v = series_sum(spec, s, primary_weight, |s, ell| 1.0 + s * ell);
    Ok(v / (s * s))
}

/// `D_s^2 L(s) = (1/s^4) sum a (s^2 ell^2 + 3 s ell + 3) e^{-s ell}`.
pub fn ds2_log_deriv(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    let v = series_sum(spec, s, primary_weight, |s, ell| {
        let sb = s * ell;
        sb * sb + 3.0 * sb + 3.0
    });
    Ok(v / (s * s * s * s))
}

/// True log-derivative of the zeta product, `Z'/Z(s) = L(s - 1)` weightwise.
/// Valid down to Re(s) > 1 like the primary series (the truncated sum is
/// finite anyway; the domain check keeps callers honest about convergence).
pub fn zeta_log_deriv(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    Ok(series_sum(spec, s, zlog_weight, |_, _| Complex64::new(1.0, 0.0)))
}

/// `D_s` of `Z'/Z` evaluated at `s_eval` (same closed form, `Z'/Z` weights).
pub fn zeta_ds(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    let v = series_sum(spec, s, zlog_weight, |s, ell| 1.0 + s * ell);
    Ok(v / (s * s))
}

/// `D_s^2` of `Z'/Z`.
pub fn zeta_ds2(spec: &LengthSpectrum, s: Complex64) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    let v = series_sum(spec, s, zlog_weight, |s, ell| {
        let sb = s * ell;
        sb * sb + 3.0 * sb + 3.0
    });
    Ok(v / (s * s * s * s))
}

/// Truncated double product `prod_{m=1 records} prod_{k<=k_max}
/// (1 - e^{-(s+k) ell})` over primitive records.
pub fn zeta_partial(
    spec: &LengthSpectrum,
    s: Complex64,
    k_max: usize,
) -> Result<Complex64, ZetaError> {
    check_domain(s)?;
    let mut p = Complex64::new(1.0, 0.0);
    for r in spec.records.iter().filter(|r| r.m == 1) {
        for k in 0..=k_max {
            let f = 1.0 - ((-(s + k as f64) * r.ell).exp());
            for _ in 0..r.multiplicity {
                p *= f;
            }
        }
    }
    Ok(p)
}

/// Conservative growth-constant fit: `#{classes: ell <= x} <= A e^x` with
/// `A` the doubled empirical maximum of `count(x) e^{-x}` over the
/// spectrum's distinct lengths. Errors with fewer than 2 distinct lengths.
pub fn fit_growth_constant(spec: &LengthSpectrum) -> Result<f64, ZetaError> {
    let mut lengths: Vec<(f64, usize)> = Vec::new();
    for r in &spec.records {
        match lengths.last_mut() {
            Some((l, c)) if (*l - r.ell).abs() < 1e-9 => *c += r.multiplicity,
            _ => lengths.push((r.ell, r.multiplicity)),
        }
    }
    if lengths.len() < 2 {
        return Err(ZetaError::Unfit(lengths.len()));
    }
    let mut cum = 0usize;
    let mut a_max: f64 = 0.0;
    for (l, c) in &lengths {
        cum += c;
        a_max = a_max.max(cum as f64 * (-l).exp());
    }
    Ok(2.0 * a_max)
}

/// Tail bound for the discarded `ell > L` part of the series at abscissa
/// `sigma = Re(s) > 1`:
///
/// ```text
///   tail <= A L e^{(1-sigma) L} * sigma/(sigma-1) * (1 + 1/(e^L - 1))
/// ```
///
/// Derivation (docs/tail-bound.md): with `N(x) <= A e^x` classes up to
/// length `x`, partial summation of `sum_{ell>L} ell e^{-sigma ell}` against
/// `dN` gives `A sigma/(sigma-1) * L e^{(1-sigma)L}` up to the factor
/// `(1 + 1/(e^L-1))` that absorbs the `1/(1-e^{-ell})` weights (and a
/// fortiori the smaller `1/(e^{ell}-1)` weights of the primary series).
pub fn tail_bound_at(spec: &LengthSpectrum, sigma: f64) -> Result<f64, ZetaError> {
    if sigma <= 1.0 {
        return Err(ZetaError::Domain(sigma));
    }
    let a = fit_growth_constant(spec)?;
    let l = spec.cutoff;
    Ok(a * l * ((1.0 - sigma) * l).exp() * sigma / (sigma - 1.0) * (1.0 + 1.0 / (l.exp() - 1.0)))
}

/// Tail bound at the point's own abscissa.
pub fn tail_bound(spec: &LengthSpectrum, s: Complex64) -> Result<f64, ZetaError> {
    tail_bound_at(spec, s.re)
}

/// The auxiliary inequality `s^2 D_s L(s) >= L(s) >= 0` for real `s > 1`.
pub fn lemma_check(spec: &LengthSpectrum, s: f64) -> Result<(f64, f64, bool), ZetaError> {
    let sc = Complex64::new(s, 0.0);
    let lhs = (s * s) * ds_log_deriv(spec, sc)?.re;
    let rhs = log_deriv(spec, sc)?.re;
    let ok = lhs >= rhs - 1e-12 && rhs >= -1e-12;
    Ok((lhs, rhs, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{ConjClassRecord, LengthSpectrum};

    fn spec_with(records: Vec<(f64, usize, f64, usize)>) -> LengthSpectrum {
        // (ell0, m, ell, multiplicity)
        let records = records
            .into_iter()
            .map(|(ell0, m, ell, multiplicity)| ConjClassRecord {
                ell0,
                m,
                ell,
                multiplicity,
                trace_abs: 2.0 * (ell / 2.0).cosh(),
            })
            .collect();
        LengthSpectrum { cutoff: 8.0, records, covolume: 4.0 * std::f64::consts::PI, complete: true }
    }

    fn empty_spec() -> LengthSpectrum {
        spec_with(vec![])
    }

    fn s(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn empty_spectrum_values() {
        let e = empty_spec();
        assert_eq!(log_deriv(&e, s(2.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(ds_log_deriv(&e, s(2.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(ds2_log_deriv(&e, s(2.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(zeta_partial(&e, s(2.0), 5).unwrap(), Complex64::new(1.0, 0.0));
        let (l, r, ok) = lemma_check(&e, 2.0).unwrap();
        assert_eq!((l, r, ok), (0.0, 0.0, true));
    }

    #[test]
    fn domain_errors() {
        let e = spec_with(vec![(1.0, 1, 1.0, 1)]);
        assert!(log_deriv(&e, s(1.0)).is_err());
        assert!(ds2_log_deriv(&e, s(0.5)).is_err());
        assert!(tail_bound(&e, s(1.0)).is_err());
    }

    #[test]
    fn single_record_reference_values() {
        // ell0 = ell = 1, mult 1, s = 2: e^{-2}/(e-1)
        let sp = spec_with(vec![(1.0, 1, 1.0, 1)]);
        let v = log_deriv(&sp, s(2.0)).unwrap().re;
        let expect = (-2.0f64).exp() / (1.0f64.exp() - 1.0);
        assert!((v - expect).abs() < 1e-15);
        assert!((expect - 0.0787619825).abs() < 1e-9);
        // doubling multiplicities doubles the value
        let sp2 = spec_with(vec![(1.0, 1, 1.0, 2)]);
        let v2 = log_deriv(&sp2, s(2.0)).unwrap().re;
        assert!((v2 - 2.0 * v).abs() < 1e-15);
    }

    #[test]
    fn ds_single_term_reference() {
        // single term a = 1, b = 1 (weight folded to 1): (1/s^2)(1+s)e^{-s}
        // at s = 2: 3 e^{-2} / 4
        let sp = spec_with(vec![(1.0, 1, 1.0, 1)]);
        // unfold the weight: multiply value by (e-1)
        let v = ds_log_deriv(&sp, s(2.0)).unwrap().re * (1.0f64.exp() - 1.0);
        let expect = 3.0 * (-2.0f64).exp() / 4.0;
        assert!((v - expect).abs() < 1e-15, "{v} vs {expect}");
        assert!((expect - 0.1015014624).abs() < 1e-9);
    }

    #[test]
    fn lemma_single_term_reference() {
        let sp = spec_with(vec![(1.0, 1, 1.0, 1)]);
        let (lhs, rhs, ok) = lemma_check(&sp, 2.0).unwrap();
        let w = 1.0 / (1.0f64.exp() - 1.0);
        assert!((lhs - 3.0 * (-2.0f64).exp() * w).abs() < 1e-15);
        assert!((rhs - (-2.0f64).exp() * w).abs() < 1e-15);
        assert!(ok);
        // the spec's folded variant: lhs/w = 3 e^{-2}, rhs/w = e^{-2}
        assert!((lhs / w - 0.406006).abs() < 1e-6);
        assert!((rhs / w - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn zeta_partial_reference() {
        let sp = spec_with(vec![(3.0, 1, 3.0, 1)]);
        let v = zeta_partial(&sp, s(2.0), 0).unwrap().re;
        assert!((v - (1.0 - (-6.0f64).exp())).abs() < 1e-15);
        assert!((v - 0.997521).abs() < 1e-6);
    }

    fn dense_spec() -> LengthSpectrum {
        // synthetic but realistically growing spectrum
        let mut recs = Vec::new();
        let l0 = 3.0571418389619964;
        for m in 1..=2 {
            recs.push((l0, m, m as f64 * l0, 24));
        }
        for (l, mult) in [(4.6, 12), (5.3, 18), (6.1, 30), (7.0, 44), (7.8, 70)] {
            recs.push((l, 1, l, mult));
        }
        spec_with(recs)
    }

    #[test]
    fn finite_difference_oracle_for_ds_and_ds2() {
        let sp = dense_spec();
        let h = 1e-5;
        for &sv in &[1.5, 2.0, 3.0] {
            let f = |x: f64| log_deriv(&sp, s(x)).unwrap().re / x;
            let d = ds_log_deriv(&sp, s(sv)).unwrap().re;
            let fd = -(f(sv + h) - f(sv - h)) / (2.0 * h);
            assert!((d - fd).abs() / d.abs() < 1e-6, "s={sv}: {d} vs {fd}");
            // nested: D_s^2 by finite differences of D_s
            let g = |x: f64| ds_log_deriv(&sp, s(x)).unwrap().re / x;
            let d2 = ds2_log_deriv(&sp, s(sv)).unwrap().re;
            let fd2 = -(g(sv + h) - g(sv - h)) / (2.0 * h);
            assert!((d2 - fd2).abs() / d2.abs() < 1e-5, "s={sv}: {d2} vs {fd2}");
        }
    }

    #[test]
    fn positivity_and_monotonicity() {
        let sp = dense_spec();
        let mut prev = f64::INFINITY;
        for &sv in &[1.1, 1.25, 1.5, 2.0, 3.0] {
            let l = log_deriv(&sp, s(sv)).unwrap().re;
            let d = ds_log_deriv(&sp, s(sv)).unwrap().re;
            let d2 = ds2_log_deriv(&sp, s(sv)).unwrap().re;
            assert!(l > 0.0 && d > 0.0 && d2 > 0.0);
            assert!(l < prev, "log_deriv must decrease in s");
            prev = l;
            let (_, _, ok) = lemma_check(&sp, sv).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn zeta_partial_log_derivative_consistency() {
        // numerical log-derivative of the truncated product vs the series:
        // d/ds log(1 - e^{-(s+k) ell}) = ell e^{-(s+k) ell}/(1 - e^{-(s+k) ell});
        // summing the geometric expansion over k gives, per primitive class,
        // sum_{n >= 1} ell0 e^{-n s ell0}/(1 - e^{-n ell0}) — i.e. the full
        // Z'/Z including all powers. Build the power closure explicitly so
        // zeta_log_deriv sees the same terms the product generates.
        let base = [(3.0, 2usize), (4.0, 3usize)];
        let sp = spec_with(base.iter().map(|&(l, m)| (l, 1, l, m)).collect());
        let mut with_powers: Vec<(f64, usize, f64, usize)> = Vec::new();
        for &(l, m) in &base {
            for n in 1..=8 {
                with_powers.push((l, n, n as f64 * l, m));
            }
        }
        with_powers.sort_by(|a, b| a.2.total_cmp(&b.2));
        let sp_pow = spec_with(with_powers);
        let h = 1e-6;
        let sv = 2.0;
        let lp = |x: f64| zeta_partial(&sp, s(x), 60).unwrap().re.ln();
        let fd = (lp(sv + h) - lp(sv - h)) / (2.0 * h);
        let series = zeta_log_deriv(&sp_pow, s(sv)).unwrap().re;
        assert!(
            (fd - series).abs() < 1e-6,
            "fd {fd} vs series {series}"
        );
    }

    #[test]
    fn normalized_scaling_with_covolume() {
        let sp = dense_spec();
        let mut cover = sp.clone();
        cover.covolume *= 3.0;
        let a = normalized_log_deriv(&sp, s(2.0)).unwrap().re;
        let b = normalized_log_deriv(&cover, s(2.0)).unwrap().re;
        assert!((b - a / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_shape() {
        let sp = dense_spec();
        // monotone to zero in sigma
        let mut prev = f64::INFINITY;
        for &sig in &[1.2, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let t = tail_bound_at(&sp, sig).unwrap();
            assert!(t > 0.0 && t < prev);
            prev = t;
        }
        assert!(tail_bound_at(&sp, 40.0).unwrap() < 1e-40);
        // decreasing in cutoff L for fixed sigma
        let mut longer = sp.clone();
        longer.cutoff = 10.0;
        assert!(tail_bound_at(&longer, 2.0).unwrap() < tail_bound_at(&sp, 2.0).unwrap());
        // too-small spectrum refuses to fit
        let tiny = spec_with(vec![(1.0, 1, 1.0, 1)]);
        assert!(matches!(tail_bound_at(&tiny, 2.0), Err(ZetaError::Unfit(1))));
    }

    #[test]
    fn tail_bound_covers_true_tail() {
        // drop the records above L' and check the difference is within the
        // truncated spectrum's bound
        let full = dense_spec();
        for &sv in &[1.5, 2.0] {
            let mut trunc = full.clone();
            trunc.cutoff = 6.5;
            trunc.records.retain(|r| r.ell <= 6.5);
            let diff = (log_deriv(&full, s(sv)).unwrap().re
                - log_deriv(&trunc, s(sv)).unwrap().re)
                .abs();
            let bound = tail_bound_at(&trunc, sv).unwrap();
            assert!(diff <= bound, "s={sv}: diff {diff} > bound {bound}");
        }
    }
}
