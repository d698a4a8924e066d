//! Kirchhoff's matrix-tree theorem with fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Graph;
use crate::error::{Error, Result};

/// Exact number of spanning trees of a connected graph with at most 20
/// vertices.
pub fn spanning_tree_count(g: &Graph) -> Result<BigInt> {
    let n = g.vertex_count();
    if n > super::Budgets::default().spanning_vertices {
        return Err(Error::budget("spanning tree vertices", n as u128, 20u128));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n <= 1 {
        return Ok(BigInt::one());
    }
    // Reduced Laplacian: drop the last row and column.
    let m = n - 1;
    let mut a: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        BigInt::from(g.degree(i))
                    } else if g.has_edge(i, j) {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(bareiss_determinant(&mut a))
}

/// Determinant of an integer matrix; every intermediate division is exact.
fn bareiss_determinant(a: &mut [Vec<BigInt>]) -> BigInt {
    let m = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..m {
        if a[k][k].is_zero() {
            match (k + 1..m).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[m - 1][m - 1]
}
