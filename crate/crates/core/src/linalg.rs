//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, LU, SVD};

use crate::error::{Error, Result};
use crate::multivector::C64;

/// Real matrix times complex vector.
pub fn apply_real(m: &DMatrix<f64>, v: &DVector<C64>) -> DVector<C64> {
    let re = m * v.map(|c| c.re);
    let im = m * v.map(|c| c.im);
    DVector::from_iterator(re.len(), re.iter().zip(im.iter()).map(|(a, b)| C64::new(*a, *b)))
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Solves `A x = b` for complex `b` with a real LU factorization.
pub fn lu_solve_complex(lu: &LU<f64, nalgebra::Dyn, nalgebra::Dyn>, b: &DVector<C64>) -> Result<DVector<C64>> {
    let mut rhs = DMatrix::zeros(b.len(), 2);
    for (i, c) in b.iter().enumerate() {
        rhs[(i, 0)] = c.re;
        rhs[(i, 1)] = c.im;
    }
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSolve("singular LU factorization".into()))?;
    Ok(DVector::from_iterator(
        x.nrows(),
        (0..x.nrows()).map(|i| C64::new(x[(i, 0)], x[(i, 1)])),
    ))
}

/// Singular values of a real matrix, sorted descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank: number of singular values above `rel_tol · σ_max`.
pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Orthonormal basis (as columns) of the null space of a real matrix.
pub fn nullspace(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let cols = a.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let padded = if a.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let null_rows: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| top == 0.0 || s <= rel_tol * top)
        .map(|(i, _)| i)
        .collect();
    let mut out = DMatrix::zeros(cols, null_rows.len());
    for (j, &i) in null_rows.iter().enumerate() {
        for r in 0..cols {
            out[(r, j)] = v_t[(i, r)];
        }
    }
    out
}

/// Orthonormal basis (as columns) of the column space of a real matrix.
pub fn column_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("u requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| top > 0.0 && s > rel_tol * top)
        .map(|(i, _)| i)
        .collect();
    let mut out = DMatrix::zeros(a.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &u.column(i));
    }
    out
}

/// Orthonormal basis (as columns) of the column space of a complex matrix,
/// by Gram-Schmidt with column pivoting and one reorthogonalization pass.
/// Columns whose residual drops below `rel_tol` times the largest input
/// column norm are treated as dependent.
// nalgebra's complex SVD returns inconsistent factors on some rank-deficient
// inputs, so it is avoided here.
pub fn column_space_complex(a: &DMatrix<C64>, rel_tol: f64) -> DMatrix<C64> {
    let top = a.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut rest: Vec<DVector<C64>> = a.column_iter().map(|c| c.into_owned()).collect();
    let mut basis: Vec<DVector<C64>> = Vec::new();
    while top > 0.0 && basis.len() < a.nrows() {
        let Some((i, norm)) = rest
            .iter()
            .map(|c| c.norm())
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(&y.1))
        else {
            break;
        };
        if norm <= rel_tol * top {
            break;
        }
        let mut q = rest.swap_remove(i);
        for b in &basis {
            let c = b.dotc(&q);
            q -= b * c;
        }
        let q = q.unscale(q.norm());
        for c in rest.iter_mut() {
            let d = q.dotc(c);
            *c -= &q * d;
        }
        basis.push(q);
    }
    if basis.is_empty() {
        return DMatrix::zeros(a.nrows(), 0);
    }
    DMatrix::from_columns(&basis)
}

/// Eigenvalues (ascending) of a Hermitian matrix after symmetrizing it, plus
/// the asymmetry `max |G - G^*|` that was removed. Computed through the real
/// embedding `[[X, -Y], [Y, X]]`, whose spectrum is that of `X + iY` doubled.
pub fn hermitian_eigenvalues(g: &DMatrix<C64>) -> (Vec<f64>, f64) {
    if g.is_empty() {
        return (Vec::new(), 0.0);
    }
    let adj = g.adjoint();
    let asym = (g - &adj).iter().map(|c| c.norm()).fold(0.0, f64::max);
    let sym = (g + adj).scale(0.5);
    let d = sym.nrows();
    let real = DMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let z = sym[(r % d, c % d)];
        match (r < d, c < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let ev = symmetric_eigenvalues(&real);
    (ev.into_iter().step_by(2).collect(), asym)
}

pub fn symmetric_eigenvalues(g: &DMatrix<f64>) -> Vec<f64> {
    let sym = (g + g.transpose()).scale(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Pfaffian of an antisymmetric matrix by skew Gaussian elimination with
/// row/column pivoting.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    if n % 2 == 1 {
        return 0.0;
    }
    let mut m = a.clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k < n {
        let (mut piv, mut best) = (k + 1, m[(k, k + 1)].abs());
        for j in (k + 2)..n {
            if m[(k, j)].abs() > best {
                best = m[(k, j)].abs();
                piv = j;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != k + 1 {
            m.swap_rows(k + 1, piv);
            m.swap_columns(k + 1, piv);
            pf = -pf;
        }
        let p = m[(k, k + 1)];
        pf *= p;
        for i in (k + 2)..n {
            let tau_i = m[(k, i)] / p;
            for j in (k + 2)..n {
                let tau_j = m[(k, j)] / p;
                m[(i, j)] -= tau_j * m[(i, k + 1)] + tau_i * m[(k + 1, j)];
            }
        }
        k += 2;
    }
    pf
}
