//! Reference computations that the test suites use to check the production
//! code. Nothing here shares an implementation path with `semitoric-core`.

pub mod charpoly;
pub mod quadrature;

/// Counts the Bargmann basis vectors `tau^l ⊗ z1^k z2^(n-k)` whose J-eigenvalue
/// index `l + k` equals `m`, by enumeration.
pub fn enumerate_eigenspace_dim(n: usize, m: usize) -> usize {
    let mut count = 0;
    for k in 0..=n {
        for l in 0..=m {
            if l + k == m {
                count += 1;
            }
        }
    }
    count
}
