//! Gaussian elimination over F_p (packed `u8` entries) and over an
//! arbitrary finite field.

use crate::field::{Elem, FiniteField};

/// Reduced row echelon form in place over F_p; returns pivot columns.
pub fn fp_rref(p: u32, rows: &mut [Vec<u8>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(p, rows[r][c] as u32);
        for x in rows[r].iter_mut() {
            *x = (*x as u32 * inv % p) as u8;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = p - row[c] as u32;
            for (x, &y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = ((*x as u32 + f * y as u32) % p) as u8;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn inv_mod(p: u32, a: u32) -> u32 {
    let mut r = 1u32;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Basis of `{x : M x = 0}` over F_p, where `rows` are the rows of M.
pub fn fp_kernel(p: u32, rows: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let pivots = fp_rref(p, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; ncols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ((p - m[r][f] as u32) % p) as u8;
            }
            v
        })
        .collect()
}

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row echelon form over `field`; returns pivot columns.
pub fn rref(field: &FiniteField, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = field.sub(x, &field.mul(&f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &FiniteField, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of the right kernel `{x : M x = 0}`.
pub fn kernel(field: &FiniteField, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&m[r][f]);
            }
            v
        })
        .collect()
}

/// Some solution of `M x = b`, if consistent.
pub fn solve(field: &FiniteField, rows: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Elem>> = rows
        .iter()
        .zip(b.iter())
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

pub fn mat_mul(field: &FiniteField, a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(field.zero(), |acc, (x, brow)| field.add(&acc, &field.mul(x, &brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(field: &FiniteField, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
        })
        .collect()
}

pub fn identity(field: &FiniteField, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

/// An F_q-subspace of a finite field L with a fixed basis, supporting
/// coordinate extraction.
#[derive(Clone, Debug)]
pub struct FqSpace {
    field: FiniteField,
    basis: Vec<Elem>,
    scalars: Vec<Elem>,
}

impl FqSpace {
    pub fn new(field: &FiniteField, basis: Vec<Elem>) -> Self {
        let fq = field.base_field();
        let scalars = (0..fq.degree())
            .map(|j| {
                let mut v = vec![0u32; fq.degree()];
                v[j] = 1;
                field.from_base(&fq.from_coeffs(&v).expect("basis vector"))
            })
            .collect();
        FqSpace {
            field: field.clone(),
            basis,
            scalars,
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates over F_q (as elements of the standalone F_q), if `x` lies
    /// in the span.
    pub fn coords(&self, x: &Elem) -> Option<Vec<Elem>> {
        let p = self.field.p();
        let n = self.field.degree();
        let e = self.scalars.len();
        let cols: Vec<Elem> = self
            .basis
            .iter()
            .flat_map(|b| self.scalars.iter().map(move |s| (s, b)))
            .map(|(s, b)| self.field.mul(s, b))
            .collect();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|r| {
                let mut row: Vec<u8> = cols.iter().map(|c| c.coeffs()[r]).collect();
                row.push(x.coeffs()[r]);
                row
            })
            .collect();
        let ncols = cols.len();
        let pivots = fp_rref(p, &mut rows);
        if pivots.last() == Some(&ncols) {
            return None;
        }
        let mut sol = vec![0u32; ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            sol[pc] = rows[r][ncols] as u32;
        }
        let fq = self.field.base_field();
        Some(
            sol.chunks(e.max(1))
                .map(|chunk| fq.from_coeffs(chunk).expect("reduced coefficients"))
                .collect(),
        )
    }

    /// `sum c_i b_i` for coordinates in the standalone F_q.
    pub fn element(&self, coords: &[Elem]) -> Elem {
        coords.iter().zip(&self.basis).fold(self.field.zero(), |acc, (c, b)| {
            self.field.add(&acc, &self.field.mul(&self.field.from_base(c), b))
        })
    }

    /// Matrix over F_q of an F_q-linear map preserving the span; column j
    /// holds the coordinates of `f(b_j)`.
    pub fn matrix_of(&self, mut f: impl FnMut(&Elem) -> Elem) -> Option<Matrix> {
        let cols: Vec<Vec<Elem>> = self.basis.iter().map(|b| self.coords(&f(b))).collect::<Option<_>>()?;
        let d = self.dim();
        Some((0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_kernel_is_annihilated() {
        let rows = vec![vec![1u8, 2, 0, 1], vec![2, 1, 1, 0], vec![0, 0, 1, 1]];
        let k = fp_kernel(3, &rows, 4);
        assert!(!k.is_empty());
        for v in &k {
            for r in &rows {
                let s: u32 = r.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                assert_eq!(s % 3, 0);
            }
        }
    }

    #[test]
    fn solve_and_kernel_over_f4() {
        let f = FiniteField::new(2, 2, None).unwrap();
        let w = f.generator();
        let m = vec![vec![f.one(), w.clone()], vec![w.clone(), f.mul(&w, &w)]];
        assert_eq!(rank(&f, &m), 1);
        let k = kernel(&f, &m, 2);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&f, &m, &k[0]).iter().all(|x| f.is_zero(x)));
        let b = vec![f.one(), w.clone()];
        let x = solve(&f, &m, &b).unwrap();
        assert_eq!(mat_vec(&f, &m, &x), b);
        assert!(solve(&f, &m, &[f.one(), f.one()]).is_none());
    }
}
