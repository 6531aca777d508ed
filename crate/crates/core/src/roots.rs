//! Sign-change bracketing and bisection.

use crate::error::Result;

/// Bisects `f` on `[lo, hi]`, which must straddle a sign change.
///
/// Stops once the bracket is narrower than `rel_tol·|mid|` or cannot be
/// split further in floating point. Returns `None` if the endpoints share a
/// sign.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(Some(lo));
    }
    if fhi == 0.0 {
        return Ok(Some(hi));
    }
    if flo.signum() == fhi.signum() {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= rel_tol * mid.abs() {
            return Ok(Some(mid));
        }
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(Some(mid));
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Splits `[lo, hi]` into `cells` equal cells and returns those across
/// which `f` changes sign (an exact zero at a node counts for the cell on
/// its right).
pub fn sign_change_cells<F>(mut f: F, lo: f64, hi: f64, cells: usize) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let cells = cells.max(1);
    let width = (hi - lo) / cells as f64;
    let node = |i: usize| {
        if i == cells {
            hi
        } else {
            lo + width * i as f64
        }
    };
    let mut out = Vec::new();
    let mut prev = f(lo)?;
    for i in 1..=cells {
        let x = node(i);
        let fx = f(x)?;
        if prev == 0.0 || (prev.signum() != fx.signum() && fx != 0.0) {
            out.push((node(i - 1), x));
        }
        prev = fx;
    }
    Ok(out)
}
