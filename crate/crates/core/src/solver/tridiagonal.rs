use alloc::vec::Vec;

use crate::{Error, Result};

/// Solve `lower[k] u[k−1] + diag[k] u[k] + upper[k] u[k+1] = rhs[k]`
/// (Thomas algorithm; `lower[0]` and `upper[n−1]` are ignored).
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::Usage("tridiagonal bands must have equal length"));
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut out = alloc::vec![0.0; n];
    thomas(lower, diag, upper, rhs, &mut c, &mut d, &mut out)?;
    Ok(out)
}

/// Allocation-free variant with caller-provided scratch.
pub(crate) fn thomas(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
    c: &mut Vec<f64>,
    d: &mut Vec<f64>,
    out: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    c.clear();
    d.clear();
    let mut prev_c = 0.0;
    let mut prev_d = 0.0;
    for k in 0..n {
        let l = if k == 0 { 0.0 } else { lower[k] };
        let m = diag[k] - l * prev_c;
        if m == 0.0 || !m.is_finite() {
            return Err(Error::Usage("singular tridiagonal system"));
        }
        prev_c = if k + 1 < n { upper[k] / m } else { 0.0 };
        prev_d = (rhs[k] - l * prev_d) / m;
        c.push(prev_c);
        d.push(prev_d);
    }
    out[n - 1] = d[n - 1];
    for k in (0..n - 1).rev() {
        out[k] = d[k] - c[k] * out[k + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_known_system() {
        // [2 -1 0; -1 2 -1; 0 -1 2] u = [1, 0, 1] → u = [1, 1, 1]
        let u = solve_tridiagonal(&[0.0, -1.0, -1.0], &[2.0, 2.0, 2.0], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 1.0]).unwrap();
        for v in u {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }
}
