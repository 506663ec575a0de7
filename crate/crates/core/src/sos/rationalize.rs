use crate::arith::{Mat, Rat};

use super::numeric::{symmetric_eigen, SymF64};

/// Continued-fraction rounding of every entry with denominators up to `max_denom`.
pub fn round_vec(xs: &[f64], max_denom: u64) -> Option<Vec<Rat>> {
    xs.iter().map(|&x| Rat::approximate(x, max_denom)).collect()
}

/// Denominator bounds tried in order: 10, 100, ..., 10^8.
pub fn denominator_ladder() -> impl Iterator<Item = u64> {
    (1..=8u32).map(|k| 10u64.pow(k))
}

/// Numerical kernel of `m`: eigenvectors whose eigenvalue is below
/// `rel_tol * max(1, largest eigenvalue)`. Rows of the result.
pub fn numeric_kernel(m: &SymF64, rel_tol: f64) -> Vec<Vec<f64>> {
    let eig = symmetric_eigen(m);
    let top = eig.values.iter().cloned().fold(1.0f64, f64::max);
    (0..m.n).filter(|&k| eig.values[k] < rel_tol * top).map(|k| eig.vector(k)).collect()
}

/// Reduced row echelon form with partial pivoting; near-zero rows dropped.
fn rref(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let (p, best) = (r..a.len())
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < 1e-8 {
            continue;
        }
        a.swap(p, r);
        let piv = a[r][c];
        a[r].iter_mut().for_each(|x| *x /= piv);
        for i in 0..a.len() {
            if i != r {
                let f = a[i][c];
                if f != 0.0 {
                    for j in 0..ncols {
                        a[i][j] -= f * a[r][j];
                    }
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Rational basis of a numerically given subspace, rounded from its RREF.
/// Candidates are accepted only when `accept` holds.
pub fn rational_subspace(rows: &[Vec<f64>], accept: impl Fn(&[Vec<Rat>]) -> bool) -> Option<Vec<Vec<Rat>>> {
    let basis = rref(rows);
    if basis.is_empty() {
        return None;
    }
    for bound in [1u64, 10, 100, 1000, 10_000] {
        let cand: Option<Vec<Vec<Rat>>> = basis.iter().map(|r| round_vec(r, bound)).collect();
        let Some(cand) = cand else { continue };
        if cand.iter().any(|r| r.iter().all(Rat::is_zero)) {
            continue;
        }
        if Mat::from_rows(cand.clone()).map(|m| m.rank()).unwrap_or(0) != cand.len() {
            continue;
        }
        if accept(&cand) {
            return Some(cand);
        }
    }
    None
}
