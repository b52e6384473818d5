//! Finite-dimensional graded Lefschetz spaces in coordinates.
//!
//! A [`LefschetzSpace`] is a graded vector space `V = ⊕_{k=0}^{2m} V^k` with a
//! degree-two operator `L` such that every `L^{m-k}: V^k → V^{2m-k}` is an
//! isomorphism. The exterior algebra with `L = ω∧·` and the image spaces
//! `T∧(ℂ⊗∧V*)` are both instances; the decomposition and the star below only
//! use the matrices of `L`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::basis::{factorial, lefschetz_sign};
use crate::error::{Error, Result};
use crate::linalg::{apply_real, lu_solve_complex};
use crate::multivector::C64;

type Lu = LU<f64, Dyn, Dyn>;

#[derive(Debug)]
pub struct LefschetzSpace {
    top: usize,
    dims: Vec<usize>,
    raise: Vec<DMatrix<f64>>,
    hard_lefschetz: Vec<OnceLock<Option<Lu>>>,
}

/// One primitive piece `L_r u^r` of a decomposition, with `u^r` in coordinates.
#[derive(Clone, Debug)]
pub struct Piece {
    pub r: usize,
    pub grade: usize,
    pub coords: DVector<C64>,
}

impl LefschetzSpace {
    /// `raise[j]` is the matrix of `L: V^j → V^{j+2}` for `j = 0..=2m-2`.
    pub fn new(top: usize, dims: Vec<usize>, raise: Vec<DMatrix<f64>>) -> Result<Self> {
        if dims.len() != 2 * top + 1 {
            return Err(Error::Precondition(format!(
                "expected {} graded dimensions, got {}",
                2 * top + 1,
                dims.len()
            )));
        }
        if raise.len() != (2 * top).saturating_sub(1) {
            return Err(Error::Precondition(format!(
                "expected {} raising matrices, got {}",
                (2 * top).saturating_sub(1),
                raise.len()
            )));
        }
        for (j, m) in raise.iter().enumerate() {
            if m.ncols() != dims[j] || m.nrows() != dims[j + 2] {
                return Err(Error::Precondition(format!(
                    "raising matrix on grade {j} has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    dims[j + 2],
                    dims[j]
                )));
            }
        }
        Ok(LefschetzSpace {
            top,
            dims,
            raise,
            hard_lefschetz: (0..=top).map(|_| OnceLock::new()).collect(),
        })
    }

    /// The middle degree `m` (grades run over `0..=2m`).
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn dim(&self, grade: usize) -> usize {
        self.dims.get(grade).copied().unwrap_or(0)
    }

    /// `L^times` applied to a grade-`j` coordinate vector.
    pub fn raise_by(&self, j: usize, x: &DVector<C64>, times: usize) -> DVector<C64> {
        let mut cur = x.clone();
        for s in 0..times {
            let g = j + 2 * s;
            if g + 2 > 2 * self.top {
                return DVector::zeros(0);
            }
            cur = apply_real(&self.raise[g], &cur);
        }
        cur
    }

    /// `L_r = L^r / r!` applied to a grade-`j` vector.
    pub fn lefschetz_power(&self, j: usize, x: &DVector<C64>, r: usize) -> DVector<C64> {
        self.raise_by(j, x, r) / C64::new(factorial(r), 0.0)
    }

    /// Matrix of `L^times` on grade `j`.
    pub fn power_matrix(&self, j: usize, times: usize) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.dim(j), self.dim(j));
        for s in 0..times {
            let g = j + 2 * s;
            if g + 2 > 2 * self.top {
                return DMatrix::zeros(0, self.dim(j));
            }
            m = &self.raise[g] * m;
        }
        m
    }

    fn hard_lefschetz_lu(&self, j: usize) -> Option<&Lu> {
        self.hard_lefschetz[j]
            .get_or_init(|| {
                let lu = self.power_matrix(j, self.top - j).lu();
                lu.is_invertible().then_some(lu)
            })
            .as_ref()
    }

    /// Solves `L^{m-j} x = y` for `x` of grade `j <= m`.
    pub fn hard_lefschetz_solve(&self, j: usize, y: &DVector<C64>) -> Result<DVector<C64>> {
        if j > self.top {
            return Err(Error::GradeOutOfRange { k: j, max: self.top });
        }
        if self.dim(j) == 0 {
            return Ok(DVector::zeros(0));
        }
        let lu = self.hard_lefschetz_lu(j).ok_or_else(|| {
            Error::SingularSolve(format!("L^{} is singular on grade {j}", self.top - j))
        })?;
        lu_solve_complex(lu, y)
    }

    /// `‖L^{m-k+1} x‖`, zero exactly for primitive `x` (and `k <= m`).
    pub fn primitive_residual(&self, k: usize, x: &DVector<C64>) -> f64 {
        if k > self.top {
            return f64::INFINITY;
        }
        self.raise_by(k, x, self.top - k + 1).norm()
    }

    /// Unique decomposition `x = Σ_r L_r u^r` with each `u^r` primitive of
    /// grade `k - 2r`. Pieces are listed by increasing `r`; every admissible
    /// `r` appears, including zero pieces.
    pub fn decompose(&self, k: usize, x: &DVector<C64>) -> Result<Vec<Piece>> {
        if k > 2 * self.top {
            return Err(Error::GradeOutOfRange { k, max: 2 * self.top });
        }
        if k <= self.top {
            return self.decompose_low(k, x);
        }
        // x = L^{k-m} w with w of grade 2m - k, then L^a L_s = (a+s)!/s! L_{a+s}
        let shift = k - self.top;
        let low = 2 * self.top - k;
        let w = self.hard_lefschetz_solve(low, x)?;
        Ok(self
            .decompose_low(low, &w)?
            .into_iter()
            .map(|p| {
                let r = p.r + shift;
                let factor = factorial(r) / factorial(p.r);
                Piece { r, grade: p.grade, coords: p.coords * C64::new(factor, 0.0) }
            })
            .collect())
    }

    fn decompose_low(&self, k: usize, x: &DVector<C64>) -> Result<Vec<Piece>> {
        if k < 2 {
            return Ok(vec![Piece { r: 0, grade: k, coords: x.clone() }]);
        }
        // L^{m-k+2} û = L^{m-k+1} x, then x - Lû is primitive
        let rhs = self.raise_by(k, x, self.top - k + 1);
        let hat = self.hard_lefschetz_solve(k - 2, &rhs)?;
        let primitive = x - self.raise_by(k - 2, &hat, 1);
        let mut out = vec![Piece { r: 0, grade: k, coords: primitive }];
        for p in self.decompose_low(k - 2, &hat)? {
            let r = p.r + 1;
            out.push(Piece { r, grade: p.grade, coords: p.coords * C64::new(r as f64, 0.0) });
        }
        Ok(out)
    }

    /// Lefschetz star: `L_r u ↦ (-1)^{j(j+1)/2} L_{m-r-j} u` for primitive
    /// `u` of grade `j`. Maps grade `k` to grade `2m - k`.
    pub fn star(&self, k: usize, x: &DVector<C64>) -> Result<DVector<C64>> {
        let mut out = DVector::zeros(self.dim(2 * self.top - k));
        for p in self.decompose(k, x)? {
            let power = self.top - p.r - p.grade;
            let img = self.lefschetz_power(p.grade, &p.coords, power);
            out += img * C64::new(lefschetz_sign(p.grade), 0.0);
        }
        Ok(out)
    }

    /// Reassembles `Σ_r L_r u^r`.
    pub fn recompose(&self, k: usize, pieces: &[Piece]) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim(k));
        for p in pieces {
            out += self.lefschetz_power(p.grade, &p.coords, p.r);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// sl2 irreducible of dimension 3 (grades 0, 2, 4 with m = 2), plus an
    /// extra primitive line in grade 2.
    fn toy() -> LefschetzSpace {
        let dims = vec![1, 0, 2, 0, 1];
        let raise = vec![
            DMatrix::from_row_slice(2, 1, &[1.0, 0.0]),
            DMatrix::zeros(0, 0),
            DMatrix::from_row_slice(1, 2, &[2.0, 0.0]),
        ];
        LefschetzSpace::new(2, dims, raise).unwrap()
    }

    #[test]
    fn toy_decomposition_and_star() {
        let sp = toy();
        let x = DVector::from_vec(vec![C64::new(3.0, 0.0), C64::new(5.0, 1.0)]);
        let pieces = sp.decompose(2, &x).unwrap();
        assert_eq!(pieces.len(), 2);
        // x = L_1(3) + (0, 5+i)
        assert!((pieces[1].coords[0] - C64::new(3.0, 0.0)).norm() < 1e-14);
        assert!((pieces[0].coords[0]).norm() < 1e-14);
        assert!((sp.recompose(2, &pieces) - &x).norm() < 1e-14);
        let s = sp.star(2, &x).unwrap();
        let ss = sp.star(2, &s).unwrap();
        assert!((ss - x).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_shapes() {
        let r = LefschetzSpace::new(1, vec![1, 2, 1], vec![DMatrix::zeros(2, 1)]);
        assert!(r.is_err());
    }
}
