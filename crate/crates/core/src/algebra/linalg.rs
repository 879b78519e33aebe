//! Dense linear algebra over a [`Field`]: row reduction, rank, kernels,
//! determinants and linear solves.

use super::field::{Fe, Field};

pub type Matrix = Vec<Vec<Fe>>;

/// Reduces `m` in place to reduced row-echelon form and returns the pivot
/// columns in order.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let li = f.inv(&m[r][c]);
        for v in m[r].iter_mut() {
            *v = f.mul(v, &li);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let s = row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = f.sub(x, &f.mul(&s, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, m: &[Vec<Fe>]) -> usize {
    let mut a = m.to_vec();
    rref(f, &mut a).len()
}

/// Basis of the right kernel `{v : m·v = 0}` for a matrix with `cols`
/// columns. Each basis vector has a 1 in one free column and zeros in the
/// other free columns.
pub fn kernel(f: &Field, m: &[Vec<Fe>], cols: usize) -> Vec<Vec<Fe>> {
    let mut a = m.to_vec();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; cols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[i][fc]);
            }
            v
        })
        .collect()
}

/// Determinant of a square matrix.
pub fn det(f: &Field, m: &[Vec<Fe>]) -> Fe {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = f.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Fe::ZERO;
        };
        if piv != c {
            a.swap(c, piv);
            d = f.neg(&d);
        }
        d = f.mul(&d, &a[c][c]);
        let li = f.inv(&a[c][c]);
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let s = f.mul(&a[i][c], &li);
            for k in c..n {
                let t = f.mul(&s, &a[c][k]);
                a[i][k] = f.sub(&a[i][k], &t);
            }
        }
    }
    d
}

/// One solution of `m·x = b`, or `None` when the system is inconsistent.
pub fn solve(f: &Field, m: &[Vec<Fe>], b: &[Fe]) -> Option<Vec<Fe>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut a);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Fe::ZERO; cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i][cols];
    }
    Some(x)
}

pub fn mat_vec(f: &Field, m: &[Vec<Fe>], v: &[Fe]) -> Vec<Fe> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Fe::ZERO, |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
        .collect()
}

pub fn dot(f: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(Fe::ZERO, |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Cross product of two 3-vectors.
pub fn cross(f: &Field, a: &[Fe], b: &[Fe]) -> [Fe; 3] {
    [
        f.sub(&f.mul(&a[1], &b[2]), &f.mul(&a[2], &b[1])),
        f.sub(&f.mul(&a[2], &b[0]), &f.mul(&a[0], &b[2])),
        f.sub(&f.mul(&a[0], &b[1]), &f.mul(&a[1], &b[0])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Tower;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = Tower::get(3).field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let rows = 3;
            let cols = 5;
            let m: Matrix = (0..rows).map(|_| (0..cols).map(|_| f.random(&mut rng)).collect()).collect();
            let k = kernel(&f, &m, cols);
            assert_eq!(k.len() + rank(&f, &m), cols);
            for v in k {
                assert!(mat_vec(&f, &m, &v).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn det_matches_cofactor_expansion_3x3() {
        let f = Tower::get(5).field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let m: Matrix = (0..3).map(|_| (0..3).map(|_| f.random(&mut rng)).collect()).collect();
            let c = cross(&f, &m[1], &m[2]);
            assert_eq!(det(&f, &m), dot(&f, &m[0], &c));
        }
    }

    #[test]
    fn solve_finds_solution_when_consistent() {
        let f = Tower::get(2).field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let m: Matrix = (0..4).map(|_| (0..4).map(|_| f.random(&mut rng)).collect()).collect();
            let x: Vec<Fe> = (0..4).map(|_| f.random(&mut rng)).collect();
            let b = mat_vec(&f, &m, &x);
            let y = solve(&f, &m, &b).unwrap();
            assert_eq!(mat_vec(&f, &m, &y), b);
        }
    }
}
