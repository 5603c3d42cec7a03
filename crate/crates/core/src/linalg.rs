//! Dense complex matrices of dimension 2–4, a cyclic Jacobi eigensolver for
//! Hermitian matrices, and the real symmetric 3×3 inverse.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerance;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Row-major square complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

/// Column vector with `N` complex entries.
pub type Vector<const N: usize> = [C64; N];

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Matrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = diag[i];
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &Vector<N>, v: &Vector<N>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = u[i] * v[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    /// Elementwise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for z in row.iter_mut() {
                *z = z.conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for z in row.iter_mut() {
                *z *= factor;
            }
        }
        m
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn mul_vec(&self, v: &Vector<N>) -> Vector<N> {
        let mut out = [ZERO; N];
        for i in 0..N {
            out[i] = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `A B + B A`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, unitary: &Self) -> Self {
        *unitary * *self * unitary.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest `|M[i][j] - conj(M[j][i])|` together with its position.
    pub fn hermiticity_error(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..N {
            for j in i..N {
                let dev = (self.0[i][j] - self.0[j][i].conj()).norm();
                if dev > worst.0 {
                    worst = (dev, i, j);
                }
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let (dev, row, col) = self.hermiticity_error();
        if dev > tolerance::HERMITIAN * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: dev,
            });
        }
        Ok(())
    }

    /// `(M + M†)/2`, removing rounding-level anti-Hermitian residue.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn column(&self, j: usize) -> Vector<N> {
        let mut v = [ZERO; N];
        for i in 0..N {
            v[i] = self.0[i][j];
        }
        v
    }

    pub fn set_column(&mut self, j: usize, v: &Vector<N>) {
        for i in 0..N {
            self.0[i][j] = v[i];
        }
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

pub fn inner<const N: usize>(u: &Vector<N>, v: &Vector<N>) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr<const N: usize>(v: &Vector<N>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Kronecker product of two single-qubit operators; the first argument acts
/// on the leftmost tensor factor.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

pub fn kron_vec(a: &Vector<2>, b: &Vector<2>) -> Vector<4> {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

pub mod pauli {
    use super::{Mat2, I, ONE, ZERO};

    pub fn identity() -> Mat2 {
        Mat2::identity()
    }

    pub fn x() -> Mat2 {
        super::Matrix([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Mat2 {
        super::Matrix([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Mat2 {
        super::Matrix([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// σx, σy, σz in order.
    pub fn xyz() -> [Mat2; 3] {
        [x(), y(), z()]
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

impl<const N: usize> EigenSystem<N> {
    pub fn vector(&self, i: usize) -> Vector<N> {
        self.vectors.column(i)
    }

    /// `Σ y_i |v_i⟩⟨v_i|`.
    pub fn reconstruct(&self) -> Matrix<N> {
        self.map_values(|y| y)
    }

    /// `Σ f(y_i) |v_i⟩⟨v_i|`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Matrix<N> {
        let mut m = Matrix::zeros();
        for k in 0..N {
            let v = self.vector(k);
            m = m + Matrix::outer(&v, &v).scale_real(f(self.values[k]));
        }
        m
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eig<const N: usize>(m: &Matrix<N>) -> Result<EigenSystem<N>> {
    m.check_hermitian()?;
    let mut a = m.hermitian_part();
    let mut v = Matrix::<N>::identity();
    let threshold = tolerance::JACOBI_OFF_DIAGONAL * m.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..tolerance::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= threshold {
        return Err(Error::Internal(format!(
            "Jacobi eigensolver did not converge in {} sweeps",
            tolerance::JACOBI_MAX_SWEEPS
        )));
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    let mut values = [0.0; N];
    let mut vectors = Matrix::<N>::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a.0[src][src].re;
        vectors.set_column(dst, &v.column(src));
    }
    orthonormalize_clusters(&values, &mut vectors);
    Ok(EigenSystem { values, vectors })
}

fn off_diagonal_norm<const N: usize>(a: &Matrix<N>) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                sum += a.0[i][j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`: `a ← J† a J`, `v ← v J`.
///
/// With `a[p][q] = |a| e^{iφ}`, `J = D R` where `D = diag(.., e^{-iφ} at q, ..)`
/// makes the pivot real and `R` is the real Jacobi rotation.
fn rotate<const N: usize>(a: &mut Matrix<N>, v: &mut Matrix<N>, p: usize, q: usize) {
    let apq = a.0[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let theta = (a.0[q][q].re - a.0[p][p].re) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    // columns: a ← a J
    for k in 0..N {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * jpp + akq * jqp;
        a.0[k][q] = akp * jpq + akq * jqq;
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * jpp + vkq * jqp;
        v.0[k][q] = vkp * jpq + vkq * jqq;
    }
    // rows: a ← J† a
    for k in 0..N {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = jpp.conj() * apk + jqp.conj() * aqk;
        a.0[q][k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p].im = 0.0;
    a.0[q][q].im = 0.0;
}

/// Modified Gram–Schmidt inside each run of (near-)equal eigenvalues.
fn orthonormalize_clusters<const N: usize>(values: &[f64; N], vectors: &mut Matrix<N>) {
    let scale = values.iter().fold(1.0_f64, |acc, y| acc.max(y.abs()));
    let mut start = 0;
    while start < N {
        let mut end = start + 1;
        while end < N && (values[end] - values[end - 1]).abs() < tolerance::EIGEN_CLUSTER * scale {
            end += 1;
        }
        if end - start > 1 {
            for j in start..end {
                let mut col = vectors.column(j);
                for k in start..j {
                    let prev = vectors.column(k);
                    let proj = inner(&prev, &col);
                    for (c, p) in col.iter_mut().zip(prev.iter()) {
                        *c -= proj * p;
                    }
                }
                let norm = norm_sqr(&col).sqrt();
                for c in col.iter_mut() {
                    *c /= norm;
                }
                vectors.set_column(j, &col);
            }
        }
        start = end;
    }
}

/// Inverse and determinant of a real symmetric 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym3Inverse {
    /// `None` when the matrix is flagged singular.
    pub inverse: Option<[[f64; 3]; 3]>,
    pub det: f64,
    pub singular: bool,
}

pub fn det3(q: &[[f64; 3]; 3]) -> f64 {
    q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1])
        - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0])
        + q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0])
}

/// Adjugate inverse; `|det| ≤ 1e-12` sets the singular flag.
pub fn sym3_inverse_det(q: &[[f64; 3]; 3]) -> Sym3Inverse {
    let det = det3(q);
    if det.abs() <= tolerance::SINGULAR_DET {
        return Sym3Inverse {
            inverse: None,
            det,
            singular: true,
        };
    }
    let mut adj = [[0.0; 3]; 3];
    for (i, row) in adj.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // cofactor C_ji, transposed into adj[i][j]
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = q[r0][c0] * q[r1][c1] - q[r0][c1] * q[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            *entry = sign * minor / det;
        }
    }
    Sym3Inverse {
        inverse: Some(adj),
        det,
        singular: false,
    }
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}
