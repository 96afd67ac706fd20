//! Fixed-dimension tensor kernel.
//!
//! Indices are 0-based in code and 1-based in reports: `get(0, 1, 0, 1)` is the
//! component written `R_1212`.

use std::array;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::GeometryError;
use crate::scalar::{max_abs, Scalar};
use crate::tolerance::Tolerance;

pub const DIM: usize = 3;

/// Components with respect to the distinguished basis `{e1, e2, e3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector3<S>(pub [S; 3]);

impl<S: Scalar> Vector3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vector3([x, y, z])
    }

    pub fn zero() -> Self {
        Vector3(array::from_fn(|_| S::zero()))
    }

    /// The basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        Vector3(array::from_fn(|k| if k == i { S::one() } else { S::zero() }))
    }

    pub fn from_fn(f: impl FnMut(usize) -> S) -> Self {
        Vector3(array::from_fn(f))
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector3::from_fn(|i| self.0[i].clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> S {
        max_abs(&self.0)
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Vector3<T> {
        Vector3(array::from_fn(|i| f(&self.0[i])))
    }

    pub fn to_f64(&self) -> Vector3<f64> {
        self.map(|v| v.to_f64())
    }
}

impl<S> Index<usize> for Vector3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for &Vector3<S> {
    type Output = Vector3<S>;
    fn add(self, rhs: &Vector3<S>) -> Vector3<S> {
        Vector3::from_fn(|i| self.0[i].clone() + rhs.0[i].clone())
    }
}

impl<S: Scalar> Sub for &Vector3<S> {
    type Output = Vector3<S>;
    fn sub(self, rhs: &Vector3<S>) -> Vector3<S> {
        Vector3::from_fn(|i| self.0[i].clone() - rhs.0[i].clone())
    }
}

impl<S: Scalar> Neg for &Vector3<S> {
    type Output = Vector3<S>;
    fn neg(self) -> Vector3<S> {
        Vector3::from_fn(|i| -self.0[i].clone())
    }
}

/// Determinant of the matrix with columns `a`, `b`, `c`.
pub fn det_columns<S: Scalar>(a: &Vector3<S>, b: &Vector3<S>, c: &Vector3<S>) -> S {
    let m: [[S; 3]; 3] = array::from_fn(|r| [a[r].clone(), b[r].clone(), c[r].clone()]);
    det3(&m)
}

fn det3<S: Scalar>(m: &[[S; 3]; 3]) -> S {
    let e = |r: usize, c: usize| m[r][c].clone();
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

const SYM_SLOT: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

/// Symmetric 3x3 matrix, stored as its six independent entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix3<S> {
    entries: [S; 6],
}

impl<S: Scalar> SymMatrix3<S> {
    /// Builds from the upper triangle; `f` is called with `i <= j`.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        SymMatrix3 {
            entries: array::from_fn(|s| f(PAIRS[s].0, PAIRS[s].1)),
        }
    }

    /// Builds from a full matrix, reading only the upper triangle.
    pub fn from_rows(rows: [[S; 3]; 3]) -> Self {
        Self::from_fn(|i, j| rows[i][j].clone())
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn identity() -> Self {
        circulant_sym(S::one(), S::zero())
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[SYM_SLOT[i][j]]
    }

    pub fn entries(&self) -> &[S; 6] {
        &self.entries
    }

    pub fn rows(&self) -> [[S; 3]; 3] {
        array::from_fn(|i| array::from_fn(|j| self.get(i, j).clone()))
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        SymMatrix3 {
            entries: array::from_fn(|s| f(&self.entries[s])),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn max_abs(&self) -> S {
        max_abs(&self.entries)
    }

    pub fn det(&self) -> S {
        det3(&self.rows())
    }

    pub fn trace(&self) -> S {
        self.get(0, 0).clone() + self.get(1, 1).clone() + self.get(2, 2).clone()
    }

    /// `m(x, y) = x^i m_ij y^j`.
    pub fn bilinear(&self, x: &Vector3<S>, y: &Vector3<S>) -> S {
        let mut acc = S::zero();
        for i in 0..DIM {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if !y[j].is_zero() {
                    acc = acc + x[i].clone() * self.get(i, j).clone() * y[j].clone();
                }
            }
        }
        acc
    }

    pub fn mul_vec(&self, x: &Vector3<S>) -> Vector3<S> {
        Vector3::from_fn(|i| (0..DIM).fold(S::zero(), |acc, j| acc + self.get(i, j).clone() * x[j].clone()))
    }

    /// `sum_ij self^ij other_ij`, the full contraction of two symmetric matrices.
    pub fn contract(&self, other: &SymMatrix3<S>) -> S {
        let mut acc = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                acc = acc + self.get(i, j).clone() * other.get(i, j).clone();
            }
        }
        acc
    }

    /// Inverse with the default tolerance; see [`invert_sym3`].
    pub fn inverse(&self) -> Result<SymMatrix3<S>, GeometryError> {
        invert_sym3(self, &Tolerance::default())
    }

    pub fn to_f64(&self) -> SymMatrix3<f64> {
        SymMatrix3 {
            entries: array::from_fn(|s| self.entries[s].to_f64()),
        }
    }
}

impl<S: Scalar> Add for &SymMatrix3<S> {
    type Output = SymMatrix3<S>;
    fn add(self, rhs: &SymMatrix3<S>) -> SymMatrix3<S> {
        SymMatrix3 {
            entries: array::from_fn(|s| self.entries[s].clone() + rhs.entries[s].clone()),
        }
    }
}

impl<S: Scalar> Sub for &SymMatrix3<S> {
    type Output = SymMatrix3<S>;
    fn sub(self, rhs: &SymMatrix3<S>) -> SymMatrix3<S> {
        SymMatrix3 {
            entries: array::from_fn(|s| self.entries[s].clone() - rhs.entries[s].clone()),
        }
    }
}

impl<S: Scalar> Mul<&SymMatrix3<S>> for &SymMatrix3<S> {
    type Output = [[S; 3]; 3];
    fn mul(self, rhs: &SymMatrix3<S>) -> [[S; 3]; 3] {
        array::from_fn(|i| {
            array::from_fn(|j| (0..DIM).fold(S::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone()))
        })
    }
}

/// Diagonal entries `a`, off-diagonal entries `b`.
pub fn circulant_sym<S: Scalar>(a: S, b: S) -> SymMatrix3<S> {
    SymMatrix3::from_fn(|i, j| if i == j { a.clone() } else { b.clone() })
}

/// Inverse by cofactors.
///
/// In float mode the matrix is singular when
/// `|det| <= eps_abs * (max |entry|)^3`; in exact mode when `det == 0`.
pub fn invert_sym3<S: Scalar>(m: &SymMatrix3<S>, tol: &Tolerance) -> Result<SymMatrix3<S>, GeometryError> {
    let det = m.det();
    let threshold = if S::EXACT {
        0.0
    } else {
        tol.eps_abs * m.max_abs().to_f64().powi(3)
    };
    let singular = if S::EXACT {
        det.is_zero()
    } else {
        // NaN counts as singular
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let s = !(det.to_f64().abs() > threshold);
        s
    };
    if singular {
        return Err(GeometryError::SingularMatrix {
            det: det.to_f64(),
            threshold,
        });
    }
    let e = |i: usize, j: usize| m.get(i, j).clone();
    Ok(SymMatrix3::from_fn(|i, j| {
        // cofactor of (j, i), equal to that of (i, j) by symmetry
        let (r0, r1) = other_two(i);
        let (c0, c1) = other_two(j);
        let minor = e(r0, c0) * e(r1, c1) - e(r0, c1) * e(r1, c0);
        let signed = if (i + j) % 2 == 0 { minor } else { -minor };
        signed / det.clone()
    }))
}

fn other_two(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// The circulant structure `Q`: `Q e1 = e2`, `Q e2 = e3`, `Q e3 = e1`.
///
/// As a matrix `(Q_i^j)` with `Q e_i = Q_i^j e_j` it is the cyclic permutation
/// with rows `(0 1 0)`, `(0 0 1)`, `(1 0 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QStructure;

impl QStructure {
    pub const MATRIX: [[i64; 3]; 3] = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];

    /// Index of `Q e_i` in the basis.
    pub const fn image(i: usize) -> usize {
        (i + 1) % DIM
    }

    /// Coefficient of `e_k` in `Q e_m`.
    pub fn coeff<S: Scalar>(k: usize, m: usize) -> S {
        if k == Self::image(m) {
            S::one()
        } else {
            S::zero()
        }
    }
}

/// `Q v`: component `v^i` moves to slot `i + 1` (mod 3).
pub fn apply_q<S: Scalar>(v: &Vector3<S>) -> Vector3<S> {
    Vector3::from_fn(|k| v[(k + DIM - 1) % DIM].clone())
}

/// `Q^2 v`.
pub fn apply_q2<S: Scalar>(v: &Vector3<S>) -> Vector3<S> {
    apply_q(&apply_q(v))
}

/// Rank-4 covariant tensor with all 81 components stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank4Tensor3<S> {
    data: Vec<S>,
}

impl<S: Scalar> Rank4Tensor3<S> {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(81);
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Rank4Tensor3 { data }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _, _, _| S::zero())
    }

    fn offset(i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * DIM + j) * DIM + k) * DIM + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.data[Self::offset(i, j, k, l)]
    }

    /// Component addressed by 1-based indices, e.g. `at1(1, 2, 1, 2)` for `R_1212`.
    pub fn at1(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        self.get(i - 1, j - 1, k - 1, l - 1)
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn max_abs(&self) -> S {
        max_abs(&self.data)
    }

    pub fn scale(&self, c: &S) -> Self {
        Rank4Tensor3 {
            data: self.data.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Rank4Tensor3<f64> {
        Rank4Tensor3 {
            data: self.data.iter().map(|v| v.to_f64()).collect(),
        }
    }

    /// `T(x, y, z, u)`, contracting one slot at a time from the last.
    pub fn eval(&self, x: &Vector3<S>, y: &Vector3<S>, z: &Vector3<S>, u: &Vector3<S>) -> S {
        let dot = |v: &Vector3<S>, f: &dyn Fn(usize) -> S| {
            let mut acc = S::zero();
            for m in 0..DIM {
                if !v[m].is_zero() {
                    acc = acc + v[m].clone() * f(m);
                }
            }
            acc
        };
        dot(x, &|i| {
            dot(y, &|j| dot(z, &|k| dot(u, &|l| self.get(i, j, k, l).clone())))
        })
    }

    /// Largest violation of `T_ijkl = -T_jikl = -T_ijlk = T_klij` and of
    /// `T_ijkl + T_jkil + T_kijl = 0`.
    pub fn symmetry_residual(&self) -> S {
        let mut worst = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        let t = self.get(i, j, k, l).clone();
                        let devs = [
                            t.clone() + self.get(j, i, k, l).clone(),
                            t.clone() + self.get(i, j, l, k).clone(),
                            t.clone() - self.get(k, l, i, j).clone(),
                            t + self.get(j, k, i, l).clone() + self.get(k, i, j, l).clone(),
                        ];
                        for d in devs {
                            worst = S::max_of(worst, d.abs());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Algebraic curvature tensor with the given independent components, in
    /// the order of [`Rank4Tensor3::independent_components`]. In dimension 3
    /// the pair symmetries fix every other component and the first Bianchi
    /// identity holds automatically.
    pub fn from_independent(c: [S; 6]) -> Self {
        // bivector index: 12 -> 0, 13 -> 1, 23 -> 2
        let [r1212, r1313, r2323, r1213, r1223, r1323] = c;
        let m = [
            [r1212, r1213.clone(), r1223.clone()],
            [r1213, r1313, r1323.clone()],
            [r1223, r1323, r2323],
        ];
        let pair = |a: usize, b: usize| -> Option<(usize, bool)> {
            match (a, b) {
                (0, 1) => Some((0, false)),
                (1, 0) => Some((0, true)),
                (0, 2) => Some((1, false)),
                (2, 0) => Some((1, true)),
                (1, 2) => Some((2, false)),
                (2, 1) => Some((2, true)),
                _ => None,
            }
        };
        Self::from_fn(|i, j, k, l| match (pair(i, j), pair(k, l)) {
            (Some((p, s1)), Some((r, s2))) => {
                let v = m[p][r].clone();
                if s1 != s2 {
                    -v
                } else {
                    v
                }
            }
            _ => S::zero(),
        })
    }

    /// The six independent components of a curvature-type tensor in the order
    /// `1212, 1313, 2323, 1213, 1223, 1323`.
    pub fn independent_components(&self) -> [(&'static str, S); 6] {
        [
            ("1212", self.at1(1, 2, 1, 2).clone()),
            ("1313", self.at1(1, 3, 1, 3).clone()),
            ("2323", self.at1(2, 3, 2, 3).clone()),
            ("1213", self.at1(1, 2, 1, 3).clone()),
            ("1223", self.at1(1, 2, 2, 3).clone()),
            ("1323", self.at1(1, 3, 2, 3).clone()),
        ]
    }
}

impl<S: Scalar> Add for &Rank4Tensor3<S> {
    type Output = Rank4Tensor3<S>;
    fn add(self, rhs: &Rank4Tensor3<S>) -> Rank4Tensor3<S> {
        Rank4Tensor3 {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Rank4Tensor3<S> {
    type Output = Rank4Tensor3<S>;
    fn sub(self, rhs: &Rank4Tensor3<S>) -> Rank4Tensor3<S> {
        Rank4Tensor3 {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

/// Max absolute entrywise difference and the comparison scale
/// (max absolute entry of either operand).
pub fn compare_sym<S: Scalar>(a: &SymMatrix3<S>, b: &SymMatrix3<S>) -> (S, S) {
    ((a - b).max_abs(), S::max_of(a.max_abs(), b.max_abs()))
}

/// Rank-4 analogue of [`compare_sym`].
pub fn compare_rank4<S: Scalar>(a: &Rank4Tensor3<S>, b: &Rank4Tensor3<S>) -> (S, S) {
    ((a - b).max_abs(), S::max_of(a.max_abs(), b.max_abs()))
}
