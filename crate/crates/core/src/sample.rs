//! Seeded random instances for property checks.
//!
//! Values are drawn as rationals with a fixed denominator, so the same seed
//! yields the same instance in exact and in float mode (up to rounding).

use std::array;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::jet::{CirculantJet, MetricJet2};
use crate::scalar::Scalar;
use crate::tensor::{SymMatrix3, Vector3};
use crate::tolerance::Tolerance;

/// Denominator of every sampled value.
pub const DENOMINATOR: i64 = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sample `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// A value `n / 64` uniform over `[lo, hi]`.
pub fn scalar<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> S {
    let n = rng.gen_range(lo * DENOMINATOR..=hi * DENOMINATOR);
    S::ratio(n, DENOMINATOR)
}

pub fn vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> Vector3<S> {
    Vector3::from_fn(|_| scalar(rng, lo, hi))
}

/// Integer entries in `[lo, hi]`; cheap to evaluate in exact arithmetic.
pub fn int_vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> Vector3<S> {
    Vector3::from_fn(|_| S::from_i64(rng.gen_range(lo..=hi)))
}

pub fn sym_matrix<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> SymMatrix3<S> {
    SymMatrix3::from_fn(|_, _| scalar(rng, lo, hi))
}

pub fn symmetric_array<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> [[S; 3]; 3] {
    sym_matrix(rng, lo, hi).rows()
}

/// Circulant jet with `1/2 <= B <= 2`, `A − B >= 1/4` and derivatives in `[−1, 1]`.
pub fn circulant_jet<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> CirculantJet<S> {
    let b = S::half() + S::ratio(rng.gen_range(0..=96), DENOMINATOR);
    let a = b.clone() + S::ratio(1, 4) + S::ratio(rng.gen_range(0..=128), DENOMINATOR);
    CirculantJet {
        a,
        b,
        da: array::from_fn(|_| scalar(rng, -1, 1)),
        db: array::from_fn(|_| scalar(rng, -1, 1)),
        d2a: symmetric_array(rng, -1, 1),
        d2b: symmetric_array(rng, -1, 1),
    }
}

/// Jet of a non-circulant metric. With `indefinite`, the diagonal gets
/// random signs.
pub fn metric_jet<S: Scalar, R: Rng + ?Sized>(rng: &mut R, indefinite: bool) -> Result<MetricJet2<S>, GeometryError> {
    let signs: [i64; 3] = array::from_fn(|_| if indefinite && rng.gen_bool(0.5) { -2 } else { 2 });
    let noise: SymMatrix3<S> = SymMatrix3::from_fn(|_, _| S::half() * scalar::<S, _>(rng, -1, 1));
    let g = &SymMatrix3::from_fn(|i, j| if i == j { S::from_i64(signs[i]) } else { S::zero() }) + &noise;
    let dg = array::from_fn(|_| sym_matrix(rng, -1, 1));
    let mut d2g: [[SymMatrix3<S>; 3]; 3] = array::from_fn(|_| array::from_fn(|_| SymMatrix3::zero()));
    for k in 0..3 {
        for l in k..3 {
            let m = sym_matrix(rng, -1, 1);
            d2g[l][k] = m.clone();
            d2g[k][l] = m;
        }
    }
    MetricJet2::new(g, dg, d2g, &Tolerance::default())
}
