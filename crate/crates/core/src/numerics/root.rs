use crate::error::{Error, Result};

/// Bisection on a sign change of `g` in `[lo, hi]` until the bracket is
/// at most `tol` wide.
pub fn bisect_root<F>(mut g: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut glo = g(lo)?;
    let ghi = g(hi)?;
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() || glo.is_nan() || ghi.is_nan() {
        return Err(Error::Bracket { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let x = bisect_root(|x| Ok(x * x - 2.0), 1.0, 2.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cosine_zero() {
        let x = bisect_root(|x: f64| Ok(x.cos()), 1.0, 2.0, 1e-13).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            bisect_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-9),
            Err(Error::Bracket { .. })
        ));
    }
}
