//! Seeded sampling helpers. Every sampler takes its generator explicitly;
//! independent streams come from [`stream`].

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::matcore::{c64, ComplexMatrix, HermitianMatrix};

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` under `seed`. Streams with different
/// indices are independent, so fan-out order never changes results.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDim("dimension must be at least 1".into()));
    }
    Ok(())
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal of R
/// made positive (Gram-Schmidt produces that normalization directly).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    check_dim(n)?;
    loop {
        let g = ginibre(n, n, rng);
        if let Some(q) = gram_schmidt(&g) {
            return Ok(q);
        }
    }
}

pub fn haar_unitary_seeded(n: usize, seed: u64) -> Result<ComplexMatrix> {
    haar_unitary(n, &mut stream(seed, 0))
}

/// Column-wise modified Gram-Schmidt with one reorthogonalization pass.
/// Returns `None` if the columns are numerically dependent.
fn gram_schmidt(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.rows();
    let k = g.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..k).map(|j| g.col(j)).collect();
    for j in 0..k {
        let scale = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _pass in 0..2 {
            for p in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[p];
                let c = &mut rest[0];
                let r: Complex64 = q.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                for (ci, qi) in c.iter_mut().zip(q) {
                    *ci -= r * qi;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-10 * scale) {
            return None;
        }
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    Some(ComplexMatrix::from_fn(n, k, |i, j| cols[j][i]))
}

/// Uniformly random unit vector in `C^n`.
pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    check_dim(n)?;
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return Ok(v.into_iter().map(|z| z / norm).collect());
        }
    }
}

/// Hilbert-Schmidt random density matrix `G G^dagger / Tr`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix> {
    check_dim(n)?;
    let g = ginibre(n, n, rng);
    let w = g.matmul(&g.adjoint())?;
    let tr = w.trace().re;
    Ok(HermitianMatrix::hermitian_part(&w.scale(1.0 / tr)))
}

/// Random pure product state `|a><a| (x) |b><b|`.
pub fn random_product_state<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<HermitianMatrix> {
    let a = haar_state(m, rng)?;
    let b = haar_state(n, rng)?;
    let pa = HermitianMatrix::projector(&a);
    let pb = HermitianMatrix::projector(&b);
    Ok(HermitianMatrix::hermitian_part(&pa.kron(&pb)))
}

/// Flat Dirichlet draw on the probability simplex, sorted descending.
pub fn dirichlet_sorted<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut x: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    x.sort_by(|a, b| b.total_cmp(a));
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary() {
        let mut rng = stream(7, 3);
        for n in 1..7 {
            let u = haar_unitary(n, &mut rng).unwrap();
            let d = &u.adjoint().matmul(&u).unwrap() - &ComplexMatrix::identity(n);
            assert!(d.frobenius_norm() <= 1e-10);
        }
        assert!(matches!(haar_unitary(0, &mut rng), Err(Error::InvalidDim(_))));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = haar_state(4, &mut stream(1, 5)).unwrap();
        let b = haar_state(4, &mut stream(1, 5)).unwrap();
        let c = haar_state(4, &mut stream(1, 6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_density_is_state() {
        let rho = random_density(5, &mut stream(2, 0)).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(crate::matcore::is_psd(&rho, 1e-12).unwrap().psd);
    }

    #[test]
    fn dirichlet_on_simplex() {
        let x = dirichlet_sorted(9, &mut stream(0, 0));
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(x.windows(2).all(|w| w[0] >= w[1]));
    }
}
