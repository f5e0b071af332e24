use num_complex::Complex64;

use crate::{Error, Result};

/// Largest matrix order accepted by [`hermitian_eigenvalues`].
pub const MAX_ORDER: usize = 512;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the values; they must be finite.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("eigenvalues must be finite"));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    /// Clamps round-off negatives of a positive semi-definite spectrum to
    /// zero. Values below `-1e-9·max(1, |λ|max)` are an error.
    pub fn into_psd(mut self) -> Result<Self> {
        let scale = self.eigenvalues.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let eps = 1e-9 * scale;
        for x in &mut self.eigenvalues {
            if *x < -eps {
                return Err(Error::invalid(format!("eigenvalue {x} is not within {eps:e} of the PSD cone")));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        Ok(self)
    }

    /// Extends with zeros up to `n` entries (the null space of a rank-deficient SCM).
    pub fn padded_with_zeros(&self, n: usize) -> Self {
        let mut eigenvalues = self.eigenvalues.clone();
        if eigenvalues.len() < n {
            eigenvalues.resize(n, 0.0);
            eigenvalues.sort_by(f64::total_cmp);
        }
        Self { eigenvalues }
    }
}

/// All eigenvalues of a Hermitian `n × n` matrix given row-major, by cyclic
/// Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary
/// and then annihilates the now real entry with a plane rotation. Sweeps
/// stop once the off-diagonal Frobenius norm is at most `1e-12·‖A‖_F`.
pub fn hermitian_eigenvalues(n: usize, a: &[Complex64]) -> Result<Spectrum> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::invalid(format!("matrix order must be in 1..={MAX_ORDER}, got {n}")));
    }
    if a.len() != n * n {
        return Err(Error::invalid(format!("expected {} entries for order {n}, got {}", n * n, a.len())));
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("matrix entries must be finite"));
    }
    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut deviation = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            deviation = deviation.max((a[i * n + j] - a[j * n + i].conj()).norm());
        }
    }
    if deviation > 1e-10 * frob.max(1.0) {
        return Err(Error::NotHermitian(deviation));
    }

    let mut m = a.to_vec();
    // Symmetrise exactly so the updates below can treat the lower half as mirror.
    for i in 0..n {
        m[i * n + i] = Complex64::new(m[i * n + i].re, 0.0);
        for j in i + 1..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i].conj());
            m[i * n + j] = v;
            m[j * n + i] = v.conj();
        }
    }

    let target = 1e-12 * frob;
    let off_norm = |m: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += m[i * n + j].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = off_norm(&m) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, n, p, q);
            }
        }
        converged = off_norm(&m) <= target;
    }

    Spectrum::new((0..n).map(|i| m[i * n + i].re).collect())
}

fn rotate(m: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // Column q scaled by conj(phase) makes a_pq = r.
    let phase = apq / r;
    let unphase = phase.conj();
    for k in 0..n {
        if k != p && k != q {
            let v = m[k * n + q] * unphase;
            m[k * n + q] = v;
            m[q * n + k] = v.conj();
        }
    }
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    m[p * n + p] = Complex64::new(app - t * r, 0.0);
    m[q * n + q] = Complex64::new(aqq + t * r, 0.0);
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    for k in 0..n {
        if k != p && k != q {
            let akp = m[k * n + p];
            let akq = m[k * n + q];
            let new_p = akp * c - akq * s;
            let new_q = akq * c + akp * s;
            m[k * n + p] = new_p;
            m[p * n + k] = new_p.conj();
            m[k * n + q] = new_q;
            m[q * n + k] = new_q.conj();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(values: &[f64]) -> Vec<Complex64> {
        let n = values.len();
        let mut a = vec![c(0.0, 0.0); n * n];
        for (i, v) in values.iter().enumerate() {
            a[i * n + i] = c(*v, 0.0);
        }
        a
    }

    #[test]
    fn diagonal_and_identity() {
        let s = hermitian_eigenvalues(3, &diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 2.0, 3.0]);
        let s = hermitian_eigenvalues(5, &diag(&[1.0; 5])).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0; 5]);
    }

    #[test]
    fn two_by_two_with_complex_coupling() {
        // [[2, 1-i], [1+i, 3]] has eigenvalues (5 ± √(1+8))/2 = 1, 4.
        let a = [c(2.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(3.0, 0.0)];
        let s = hermitian_eigenvalues(2, &a).unwrap();
        assert!((s.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues()[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_bad_shapes() {
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(hermitian_eigenvalues(2, &a), Err(Error::NotHermitian(_))));
        assert!(hermitian_eigenvalues(0, &[]).is_err());
        assert!(hermitian_eigenvalues(2, &a[..3]).is_err());
        assert!(hermitian_eigenvalues(MAX_ORDER + 1, &[]).is_err());
    }

    #[test]
    fn psd_clamp() {
        let s = Spectrum::new(vec![2.0, -1e-12, 1.0]).unwrap().into_psd().unwrap();
        assert_eq!(s.eigenvalues(), &[0.0, 1.0, 2.0]);
        assert!(Spectrum::new(vec![-0.1, 1.0]).unwrap().into_psd().is_err());
        let s = Spectrum::new(vec![1.0, 2.0]).unwrap().padded_with_zeros(4);
        assert_eq!(s.eigenvalues(), &[0.0, 0.0, 1.0, 2.0]);
    }
}
