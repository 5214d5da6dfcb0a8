use std::sync::Arc;

use super::{subgroup_from_members, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// Square matrix over the prime field `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: usize,
    pub n: usize,
    pub entries: Vec<u8>,
}

impl FpMatrix {
    pub fn new(p: usize, n: usize, entries: Vec<u8>) -> FpMatrix {
        assert_eq!(entries.len(), n * n);
        assert!(entries.iter().all(|&x| (x as usize) < p));
        FpMatrix { p, n, entries }
    }

    /// The matrix of element `g` of a matrix group.
    pub fn of(group: &FiniteGroup, g: usize) -> Option<FpMatrix> {
        let (n, p) = match group.concrete_kind()? {
            super::ConcreteKind::Matrix { n, p } => (n, p),
            _ => return None,
        };
        Some(FpMatrix { p, n, entries: group.concrete_element(g)?.to_vec() })
    }

    pub fn at(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j] as usize
    }

    pub fn det(&self) -> usize {
        det_mod_p(&self.entries, self.n, self.p)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.at(i, j) == 0))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.at(i, j) == 0))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.at(i, i) == 1)
    }
}

fn pow_mod(mut b: usize, mut e: usize, p: usize) -> usize {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Determinant by Gaussian elimination over `F_p`.
pub(crate) fn det_mod_p(a: &[u8], n: usize, p: usize) -> usize {
    let mut m: Vec<usize> = a.iter().map(|&x| x as usize).collect();
    let mut det = 1usize;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in 0..n {
                m.swap(piv * n + k, col * n + k);
            }
            det = (p - det) % p;
        }
        let pv = m[col * n + col];
        det = det * pv % p;
        let inv = pow_mod(pv, p - 2, p);
        for r in col + 1..n {
            let f = m[r * n + col] * inv % p;
            if f != 0 {
                for k in col..n {
                    m[r * n + k] = (m[r * n + k] + p * p - f * m[col * n + k] % p) % p;
                }
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination over `F_p`; the input must be invertible.
pub(crate) fn invert_mod_p(a: &[u8], n: usize, p: usize) -> Vec<u8> {
    let w = 2 * n;
    let mut m = vec![0usize; n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = a[i * n + j] as usize;
        }
        m[i * w + n + i] = 1;
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| m[r * w + col] != 0)
            .expect("matrix group element is invertible");
        for k in 0..w {
            m.swap(piv * w + k, col * w + k);
        }
        let inv = pow_mod(m[col * w + col], p - 2, p);
        for k in 0..w {
            m[col * w + k] = m[col * w + k] * inv % p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r * w + col];
                if f != 0 {
                    for k in 0..w {
                        m[r * w + k] = (m[r * w + k] + p * p - f * m[col * w + k] % p) % p;
                    }
                }
            }
        }
    }
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m[i * w + n + j] as u8)
        .collect()
}

fn matrix_members(
    group: &Arc<FiniteGroup>,
    pred: impl Fn(&FpMatrix) -> bool,
) -> Result<Vec<usize>> {
    if !group.descriptor().is_matrix_group() {
        return Err(Error::WrongDescriptor(group.descriptor().to_string()));
    }
    Ok((0..group.order())
        .filter(|&g| FpMatrix::of(group, g).is_some_and(|m| pred(&m)))
        .collect())
}

/// Lower unitriangular, diagonal, and upper unitriangular subgroups of an
/// `SL(n,p)` or `GL(n,p)`.
pub fn ldu_subgroups(group: &Arc<FiniteGroup>) -> Result<(Subgroup, Subgroup, Subgroup)> {
    let lower = matrix_members(group, |m| m.is_lower_triangular() && m.has_unit_diagonal())?;
    let diag = matrix_members(group, |m| m.is_lower_triangular() && m.is_upper_triangular())?;
    let upper = matrix_members(group, |m| m.is_upper_triangular() && m.has_unit_diagonal())?;
    Ok((
        subgroup_from_members(group, lower)?,
        subgroup_from_members(group, diag)?,
        subgroup_from_members(group, upper)?,
    ))
}

/// Lower triangular matrices: the product of the lower unitriangular and
/// diagonal subgroups.
pub fn borel_subgroup(group: &Arc<FiniteGroup>) -> Result<Subgroup> {
    let members = matrix_members(group, FpMatrix::is_lower_triangular)?;
    subgroup_from_members(group, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct_named, product_set};

    fn named(s: &str) -> Arc<FiniteGroup> {
        Arc::new(construct_named(&s.parse().unwrap()).unwrap())
    }

    #[test]
    fn determinant_and_inverse() {
        assert_eq!(det_mod_p(&[1, 2, 3, 4], 2, 5), (4 + 5 - 6 % 5) % 5);
        let a = [2u8, 1, 1, 1];
        let inv = invert_mod_p(&a, 2, 7);
        let prod = crate::group::ConcreteKind::Matrix { n: 2, p: 7 }.compose(&a, &inv);
        assert_eq!(prod, vec![1, 0, 0, 1]);
    }

    #[test]
    fn ldu_orders() {
        let cases = [("sl:2,3", [3, 2, 3]), ("sl:2,5", [5, 4, 5]), ("gl:2,3", [3, 4, 3]), ("sl:3,2", [8, 1, 8])];
        for (s, orders) in cases {
            let g = named(s);
            let (h1, h2, h3) = ldu_subgroups(&g).unwrap();
            assert_eq!([h1.order(), h2.order(), h3.order()], orders, "{s}");
            let b = borel_subgroup(&g).unwrap();
            assert_eq!(b.order(), h1.order() * h2.order());
            assert_eq!(product_set(&h1, &h2).intersection_order(), 1);
            assert_eq!(product_set(&b, &h3).intersection_order(), 1);
        }
    }

    #[test]
    fn sl2_orders_follow_q_cubed_minus_q() {
        for q in [3usize, 5, 7] {
            let g = named(&format!("sl:2,{q}"));
            assert_eq!(g.order(), q * q * q - q);
            let (h1, h2, h3) = ldu_subgroups(&g).unwrap();
            assert_eq!([h1.order(), h2.order(), h3.order()], [q, q - 1, q]);
        }
    }

    #[test]
    fn non_matrix_groups_are_rejected() {
        assert!(matches!(ldu_subgroups(&named("sym:3")), Err(Error::WrongDescriptor(_))));
    }
}
