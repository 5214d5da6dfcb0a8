use std::fmt;
use std::str::FromStr;

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Exact counts of complex scalar multiplications and additions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    mults: u64,
    adds: u64,
}

impl OpCounter {
    pub fn new() -> OpCounter {
        OpCounter::default()
    }

    #[inline]
    pub fn mults(&self) -> u64 {
        self.mults
    }

    #[inline]
    pub fn adds(&self) -> u64 {
        self.adds
    }

    #[inline]
    pub fn add_mults(&mut self, n: u64) {
        self.mults += n;
    }

    #[inline]
    pub fn add_adds(&mut self, n: u64) {
        self.adds += n;
    }

    pub fn absorb(&mut self, other: OpCounter) {
        self.mults += other.mults;
        self.adds += other.adds;
    }

    /// Counts accrued since `earlier` was taken.
    pub fn since(&self, earlier: OpCounter) -> OpCounter {
        OpCounter { mults: self.mults - earlier.mults, adds: self.adds - earlier.adds }
    }
}

/// Matrix multiplication strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub enum MatMulBackend {
    #[default]
    Naive,
    /// Strassen recursion on padded power-of-two sizes while the size is at
    /// least `threshold`.
    Strassen { threshold: usize },
}


impl MatMulBackend {
    pub fn strassen(threshold: usize) -> Result<MatMulBackend> {
        if threshold < 2 {
            return Err(Error::PreconditionViolated("Strassen threshold must be at least 2".into()));
        }
        Ok(MatMulBackend::Strassen { threshold })
    }

    /// Exponent assumed by the planner.
    pub fn omega(&self) -> f64 {
        match self {
            MatMulBackend::Naive => 3.0,
            MatMulBackend::Strassen { .. } => 7f64.log2(),
        }
    }
}

impl fmt::Display for MatMulBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatMulBackend::Naive => write!(f, "naive"),
            MatMulBackend::Strassen { threshold } => write!(f, "strassen:{threshold}"),
        }
    }
}

impl FromStr for MatMulBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(MatMulBackend::Naive),
            "strassen" => MatMulBackend::strassen(16),
            _ => {
                let t = s
                    .strip_prefix("strassen:")
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::PreconditionViolated(format!("unknown backend {s}")))?;
                MatMulBackend::strassen(t)
            }
        }
    }
}

fn naive_into(a: &CMatrix, b: &CMatrix, counter: &mut OpCounter) -> CMatrix {
    let (r, k, c) = (a.rows(), a.cols(), b.cols());
    let mut out = CMatrix::zeros(r, c);
    {
        let o = out.as_mut_slice();
        let (ad, bd) = (a.as_slice(), b.as_slice());
        for i in 0..r {
            for kk in 0..k {
                let x = ad[i * k + kk];
                let brow = &bd[kk * c..(kk + 1) * c];
                for (dst, y) in o[i * c..(i + 1) * c].iter_mut().zip(brow) {
                    *dst += x * y;
                }
            }
        }
    }
    counter.add_mults((r * k * c) as u64);
    counter.add_adds((r * c * k.saturating_sub(1)) as u64);
    out
}

fn quadrants(m: &CMatrix) -> [CMatrix; 4] {
    let h = m.rows() / 2;
    [m.block(0, 0, h, h), m.block(0, h, h, h), m.block(h, 0, h, h), m.block(h, h, h, h)]
}

fn add_counted(a: &CMatrix, b: &CMatrix, counter: &mut OpCounter) -> CMatrix {
    counter.add_adds((a.rows() * a.cols()) as u64);
    a.add(b)
}

fn sub_counted(a: &CMatrix, b: &CMatrix, counter: &mut OpCounter) -> CMatrix {
    counter.add_adds((a.rows() * a.cols()) as u64);
    a.sub(b)
}

/// Strassen on square power-of-two matrices; 18 quadrant additions per level.
fn strassen_square(a: &CMatrix, b: &CMatrix, threshold: usize, counter: &mut OpCounter) -> CMatrix {
    let m = a.rows();
    if m < threshold || m == 1 {
        return naive_into(a, b, counter);
    }
    let h = m / 2;
    let [a11, a12, a21, a22] = quadrants(a);
    let [b11, b12, b21, b22] = quadrants(b);
    let c = &mut *counter;
    let m1 = {
        let x = add_counted(&a11, &a22, c);
        let y = add_counted(&b11, &b22, c);
        strassen_square(&x, &y, threshold, c)
    };
    let m2 = {
        let x = add_counted(&a21, &a22, c);
        strassen_square(&x, &b11, threshold, c)
    };
    let m3 = {
        let y = sub_counted(&b12, &b22, c);
        strassen_square(&a11, &y, threshold, c)
    };
    let m4 = {
        let y = sub_counted(&b21, &b11, c);
        strassen_square(&a22, &y, threshold, c)
    };
    let m5 = {
        let x = add_counted(&a11, &a12, c);
        strassen_square(&x, &b22, threshold, c)
    };
    let m6 = {
        let x = sub_counted(&a21, &a11, c);
        let y = add_counted(&b11, &b12, c);
        strassen_square(&x, &y, threshold, c)
    };
    let m7 = {
        let x = sub_counted(&a12, &a22, c);
        let y = add_counted(&b21, &b22, c);
        strassen_square(&x, &y, threshold, c)
    };
    let c11 = add_counted(&sub_counted(&add_counted(&m1, &m4, c), &m5, c), &m7, c);
    let c12 = add_counted(&m3, &m5, c);
    let c21 = add_counted(&m2, &m4, c);
    let c22 = add_counted(&add_counted(&sub_counted(&m1, &m2, c), &m3, c), &m6, c);
    let mut out = CMatrix::zeros(m, m);
    out.set_block(0, 0, &c11);
    out.set_block(0, h, &c12);
    out.set_block(h, 0, &c21);
    out.set_block(h, h, &c22);
    out
}

/// Counted matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix, backend: MatMulBackend, counter: &mut OpCounter) -> Result<CMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    match backend {
        MatMulBackend::Naive => Ok(naive_into(a, b, counter)),
        MatMulBackend::Strassen { threshold } => {
            let big = a.rows().max(a.cols()).max(b.cols());
            if big < threshold {
                return Ok(naive_into(a, b, counter));
            }
            let m = big.next_power_of_two();
            let mut pa = CMatrix::zeros(m, m);
            pa.set_block(0, 0, a);
            let mut pb = CMatrix::zeros(m, m);
            pb.set_block(0, 0, b);
            let full = strassen_square(&pa, &pb, threshold, counter);
            Ok(full.block(0, 0, a.rows(), b.cols()))
        }
    }
}

/// Kronecker product with `(A ⊗ B)[(i, i'), (j, j')] = A[i, j] B[i', j']`,
/// the first index of each pair varying slowest. Uncounted.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows(), b.cols());
    CMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// `kron` charging one multiplication per entry.
pub fn kron_counted(a: &CMatrix, b: &CMatrix, counter: &mut OpCounter) -> CMatrix {
    let out = kron(a, b);
    counter.add_mults((out.rows() * out.cols()) as u64);
    out
}

/// `A B_i C` for every `i`, as one product of `A ⊗ Cᵀ` with the matrix whose
/// columns are `vec(B_i)`.
pub fn batch_sandwich(
    a: &CMatrix,
    bs: &[CMatrix],
    c: &CMatrix,
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<Vec<CMatrix>> {
    if let Some(b) = bs.iter().find(|b| b.rows() != a.cols() || b.cols() != c.rows()) {
        return Err(Error::DimensionMismatch(format!(
            "B is {}x{}, expected {}x{}",
            b.rows(),
            b.cols(),
            a.cols(),
            c.rows()
        )));
    }
    if bs.is_empty() {
        return Ok(Vec::new());
    }
    let z = kron_counted(a, &c.transpose(), counter);
    let len = a.cols() * c.rows();
    let mut cols = CMatrix::zeros(len, bs.len());
    for (j, b) in bs.iter().enumerate() {
        for (i, &x) in b.as_slice().iter().enumerate() {
            cols[(i, j)] = x;
        }
    }
    let prod = matmul(&z, &cols, backend, counter)?;
    let (r, cc) = (a.rows(), c.cols());
    Ok((0..bs.len())
        .map(|j| CMatrix::from_fn(r, cc, |x, y| prod[(x * cc + y, j)]))
        .collect())
}

/// Sum of counted products; charges the additions between terms.
pub fn sum_counted(terms: Vec<CMatrix>, counter: &mut OpCounter) -> Option<CMatrix> {
    let mut it = terms.into_iter();
    let mut acc = it.next()?;
    for t in it {
        counter.add_adds((t.rows() * t.cols()) as u64);
        acc.add_assign(&t);
    }
    Some(acc)
}

/// `acc += t`, counted.
pub fn accumulate(acc: &mut CMatrix, t: &CMatrix, counter: &mut OpCounter) {
    counter.add_adds((t.rows() * t.cols()) as u64);
    acc.add_assign(t);
}

/// `acc += z * m`, counted as one multiplication and one addition per entry.
pub fn accumulate_scaled(acc: &mut CMatrix, z: C64, m: &CMatrix, counter: &mut OpCounter) {
    let n = (m.rows() * m.cols()) as u64;
    counter.add_mults(n);
    counter.add_adds(n);
    if z != ZERO {
        acc.axpy(z, m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn identity_times_x_counts_cube() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random(&mut rng, 3, 3);
        let mut c = OpCounter::new();
        let y = matmul(&CMatrix::identity(3), &x, MatMulBackend::Naive, &mut c).unwrap();
        assert_eq!(y, x);
        assert_eq!(c.mults(), 27);
        assert_eq!(c.adds(), 18);
    }

    #[test]
    fn strassen_two_by_two_uses_seven_mults() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (a, b) = (random(&mut rng, 2, 2), random(&mut rng, 2, 2));
        let mut c = OpCounter::new();
        let s = matmul(&a, &b, MatMulBackend::strassen(2).unwrap(), &mut c).unwrap();
        assert_eq!(c.mults(), 7);
        assert_eq!(c.adds(), 18);
        assert!(s.max_diff(&a.mul_plain(&b)) < 1e-14);
    }

    #[test]
    fn hand_expanded_product() {
        let i = C64::new(0.0, 1.0);
        let a = CMatrix::from_rows(&[vec![ONE, i], vec![ZERO, ONE]]);
        let b = CMatrix::from_rows(&[vec![ONE, ZERO], vec![i, ONE]]);
        // [[1 + i*i, i], [i, 1]]
        let want = CMatrix::from_rows(&[vec![ZERO, i], vec![i, ONE]]);
        let got = matmul(&a, &b, MatMulBackend::Naive, &mut OpCounter::new()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn dimension_mismatch() {
        let r = matmul(&CMatrix::zeros(2, 3), &CMatrix::zeros(2, 3), MatMulBackend::Naive, &mut OpCounter::new());
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn strassen_agrees_with_naive_on_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = (random(&mut rng, 64, 64), random(&mut rng, 64, 64));
        let mut cn = OpCounter::new();
        let mut cs = OpCounter::new();
        let n = matmul(&a, &b, MatMulBackend::Naive, &mut cn).unwrap();
        let s = matmul(&a, &b, MatMulBackend::strassen(8).unwrap(), &mut cs).unwrap();
        assert!(s.max_diff(&n) / n.max_abs() < 1e-8);
        // sizes 64, 32, 16, 8 recurse; 7^4 products of 4x4 remain
        assert_eq!(cs.mults(), 2401 * 64);
        assert!(cs.mults() < cn.mults());
    }

    #[test]
    fn strassen_pads_odd_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (a, b) = (random(&mut rng, 5, 3), random(&mut rng, 3, 6));
        let s = matmul(&a, &b, MatMulBackend::strassen(2).unwrap(), &mut OpCounter::new()).unwrap();
        assert!(s.max_diff(&a.mul_plain(&b)) < 1e-12);
    }

    #[test]
    fn kron_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random(&mut rng, 2, 3);
        assert_eq!(kron(&a, &CMatrix::scalar(ONE)), a);
        let b = random(&mut rng, 2, 2);
        let k = kron(&CMatrix::identity(2), &b);
        assert_eq!(k.block(0, 0, 2, 2), b);
        assert_eq!(k.block(2, 2, 2, 2), b);
        assert_eq!(k.block(0, 2, 2, 2).max_abs(), 0.0);
    }

    #[test]
    fn vec_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let (a, x, b) = (random(&mut rng, 2, 2), random(&mut rng, 2, 2), random(&mut rng, 2, 2));
            let lhs = a.mul_plain(&x).mul_plain(&b).vec();
            let rhs = kron(&a, &b.transpose()).mul_vec(&x.vec());
            for (l, r) in lhs.iter().zip(&rhs) {
                assert!((l - r).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn batch_sandwich_cases() {
        let one = batch_sandwich(
            &CMatrix::identity(2),
            &[CMatrix::identity(2)],
            &CMatrix::identity(2),
            MatMulBackend::Naive,
            &mut OpCounter::new(),
        )
        .unwrap();
        assert_eq!(one, vec![CMatrix::identity(2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random(&mut rng, 2, 2);
        let c = random(&mut rng, 3, 3);
        let bs: Vec<CMatrix> = (0..5).map(|_| random(&mut rng, 2, 3)).collect();
        let mut counter = OpCounter::new();
        let out = batch_sandwich(&a, &bs, &c, MatMulBackend::Naive, &mut counter).unwrap();
        for (b, o) in bs.iter().zip(&out) {
            let direct = a.mul_plain(b).mul_plain(&c);
            assert!(o.max_diff(&direct) <= 1e-10 * direct.max_abs());
        }
        // kron entries plus one 6x6 by 6x5 product
        assert_eq!(counter.mults(), 36 + 6 * 6 * 5);
        assert!(batch_sandwich(&a, &[random(&mut rng, 3, 3)], &c, MatMulBackend::Naive, &mut counter).is_err());
    }
}
