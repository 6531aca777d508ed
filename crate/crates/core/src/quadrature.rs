//! Adaptive Simpson quadrature with interval bisection.

use crate::error::{Result, TunnelError};

/// Maximum bisection depth before giving up.
pub const MAX_DEPTH: u32 = 30;

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// The integrand may fail; its error is propagated unchanged. When some
/// sub-interval still misses its tolerance at [`MAX_DEPTH`], the summed
/// estimate is returned inside [`TunnelError::Quadrature`].
pub fn adaptive_simpson<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo)?, f(mid)?, f(hi)?);
    let whole = simpson(lo, hi, flo, fmid, fhi);
    let mut converged = true;
    let value = refine(
        &mut f,
        Panel {
            lo,
            hi,
            flo,
            fmid,
            fhi,
            whole,
        },
        tol,
        MAX_DEPTH,
        &mut converged,
    )?;
    if converged {
        Ok(value)
    } else {
        Err(TunnelError::Quadrature { partial: value })
    }
}

#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
}

fn simpson(lo: f64, hi: f64, flo: f64, fmid: f64, fhi: f64) -> f64 {
    (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
}

fn refine<F>(f: &mut F, p: Panel, tol: f64, depth: u32, converged: &mut bool) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (p.lo + p.hi);
    let left_mid = 0.5 * (p.lo + mid);
    let right_mid = 0.5 * (mid + p.hi);
    let (fl, fr) = (f(left_mid)?, f(right_mid)?);
    let left = simpson(p.lo, mid, p.flo, fl, p.fmid);
    let right = simpson(mid, p.hi, p.fmid, fr, p.fhi);
    let delta = left + right - p.whole;

    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        *converged = false;
        return Ok(left + right + delta / 15.0);
    }
    let l = Panel {
        lo: p.lo,
        hi: mid,
        flo: p.flo,
        fmid: fl,
        fhi: p.fmid,
        whole: left,
    };
    let r = Panel {
        lo: mid,
        hi: p.hi,
        flo: p.fmid,
        fmid: fr,
        fhi: p.fhi,
        whole: right,
    };
    Ok(refine(f, l, 0.5 * tol, depth - 1, converged)?
        + refine(f, r, 0.5 * tol, depth - 1, converged)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = adaptive_simpson(|x| Ok(x * x * x - 2.0 * x + 1.0), 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn lorentzian_peak() {
        // ∫ b/(x² + b²) over [-b, b] = π/2.
        let b = 1e-3;
        let v = adaptive_simpson(|x| Ok(b / (x * x + b * b)), -b, b, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn propagates_integrand_errors() {
        let r = adaptive_simpson(|_| Err(TunnelError::Domain("boom".into())), 0.0, 1.0, 1e-6);
        assert!(matches!(r, Err(TunnelError::Domain(_))));
    }

    #[test]
    fn reports_partial_estimate_on_depth_limit() {
        // 1/sqrt(x) has an integrable singularity at 0 that never converges
        // to 1e-15 within the depth cap.
        let r = adaptive_simpson(|x: f64| Ok(1.0 / (x + 1e-300).sqrt()), 0.0, 1.0, 1e-15);
        match r {
            Err(TunnelError::Quadrature { partial }) => assert!(partial > 1.0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
