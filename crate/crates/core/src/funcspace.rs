//! Dense functions on `Z_m`: Fourier transform, the two convolutions,
//! shifts and reflections, energies `E_k`, higher correlations, and the
//! value-histogram bookkeeping behind the divisibility-norm inequality.
//!
//! Integer-valued functions ([`IntFunction`]) use exact `i64` arithmetic.
//! Complex-valued functions ([`CFunction`]) are double precision and only
//! appear where roots of unity or `sqrt(p)` force them.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FSet;

/// Above this modulus [`fourier`] switches from direct evaluation to an FFT.
pub const FAST_FOURIER_THRESHOLD: usize = 4096;

/// Largest modulus for which [`correlation_pairing`] enumerates all shift tuples.
pub const MAX_PAIRING_MODULUS: usize = 64;

/// Largest `k` for which [`correlation_pairing`] enumerates all shift tuples.
pub const MAX_PAIRING_K: usize = 3;

/// Values a function on `Z_m` may take.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
{
    fn conj(self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn magnitude(self) -> f64;
    /// Exact equality for integers; `|a - b| <= tol` for complex values.
    fn approx_eq(self, other: Self, tol: f64) -> bool;
    fn to_complex(self) -> Complex64;
}

impl Scalar for i64 {
    fn conj(self) -> Self {
        self
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn magnitude(self) -> f64 {
        self.unsigned_abs() as f64
    }
    fn approx_eq(self, other: Self, _tol: f64) -> bool {
        self == other
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
}

impl Scalar for Complex64 {
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// A function `Z_m -> T`, stored densely; the modulus is the length.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ZmFunction<T> {
    values: Vec<T>,
}

pub type IntFunction = ZmFunction<i64>;
pub type CFunction = ZmFunction<Complex64>;

impl<T: Scalar> ZmFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        ZmFunction { values }
    }

    pub fn from_fn(modulus: usize, f: impl FnMut(usize) -> T) -> Self {
        ZmFunction { values: (0..modulus).map(f).collect() }
    }

    pub fn zeros(modulus: usize) -> Self {
        ZmFunction { values: vec![T::zero(); modulus] }
    }

    pub fn constant(modulus: usize, c: T) -> Self {
        ZmFunction { values: vec![c; modulus] }
    }

    /// `δ_a`.
    pub fn delta(modulus: usize, a: usize) -> Self {
        let mut f = Self::zeros(modulus);
        f.values[a % modulus] = T::one();
        f
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Evaluates at any integer, reducing modulo `m`.
    pub fn at(&self, x: i64) -> T {
        self.values[x.rem_euclid(self.modulus() as i64) as usize]
    }

    pub fn set(&mut self, x: usize, v: T) {
        let m = self.modulus();
        self.values[x % m] = v;
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> ZmFunction<U> {
        ZmFunction { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `g(x) = f(x + s)`.
    pub fn shift(&self, s: i64) -> Self {
        let m = self.modulus() as i64;
        Self::from_fn(self.modulus(), |x| self.at(x as i64 + s.rem_euclid(m)))
    }

    /// `f^c(x) = f(-x)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(self.modulus(), |x| self.at(-(x as i64)))
    }

    /// `f^λ(x) = f(λx)`.
    pub fn scale_argument(&self, lambda: i64) -> Self {
        let m = self.modulus() as i128;
        let l = (lambda as i128).rem_euclid(m);
        Self::from_fn(self.modulus(), |x| self.values[((x as i128 * l) % m) as usize])
    }

    pub fn conj(&self) -> Self {
        self.map(T::conj)
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_moduli(self.modulus(), other.modulus())?;
        Ok(Self::from_fn(self.modulus(), |x| self.values[x] + other.values[x]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_moduli(self.modulus(), other.modulus())?;
        Ok(Self::from_fn(self.modulus(), |x| self.values[x] - other.values[x]))
    }

    pub fn add_constant(&self, c: T) -> Self {
        self.map(|v| v + c)
    }

    /// `<f> = Σ f(x)`.
    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    /// `<f, g> = Σ f(x) conj(g(x))`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        check_moduli(self.modulus(), other.modulus())?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b.conj()))
    }

    /// `‖f‖₂²` as `<f, f>`.
    pub fn norm_sq(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v * v.conj())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn support_size(&self, threshold: f64) -> usize {
        self.values.iter().filter(|v| v.magnitude() > threshold).count()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    /// Pointwise comparison; exact for integers.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.modulus() == other.modulus()
            && self.values.iter().zip(&other.values).all(|(&a, &b)| a.approx_eq(b, tol))
    }

    /// Largest pointwise distance (always 0 or ≥ 1 for integer functions).
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).magnitude())
            .fold(0.0, f64::max)
    }

    /// `(f * g)(x) = Σ_y f(y) g(x - y)`.
    pub fn convolve_star(&self, other: &Self) -> Result<Self> {
        check_moduli(self.modulus(), other.modulus())?;
        let m = self.modulus();
        let mut out = vec![T::zero(); m];
        for (y, &fy) in self.values.iter().enumerate() {
            if fy == T::zero() {
                continue;
            }
            for (w, &gw) in other.values.iter().enumerate() {
                out[(y + w) % m] += fy * gw;
            }
        }
        Ok(ZmFunction { values: out })
    }

    /// `(f ∘ g)(x) = Σ_y f(y) g(y + x)`.
    pub fn convolve_circ(&self, other: &Self) -> Result<Self> {
        check_moduli(self.modulus(), other.modulus())?;
        let m = self.modulus();
        let mut out = vec![T::zero(); m];
        for (y, &fy) in self.values.iter().enumerate() {
            if fy == T::zero() {
                continue;
            }
            for (w, &gw) in other.values.iter().enumerate() {
                // w = y + x
                out[(w + m - y) % m] += fy * gw;
            }
        }
        Ok(ZmFunction { values: out })
    }

    pub fn to_complex(&self) -> CFunction {
        self.map(T::to_complex)
    }
}

impl IntFunction {
    /// Value histogram `k ↦ |{x : ψ(x) = k}|`.
    pub fn histogram(&self) -> ValueHistogram {
        let mut entries = BTreeMap::new();
        for &v in &self.values {
            *entries.entry(v).or_insert(0u64) += 1;
        }
        ValueHistogram { entries }
    }

    /// `‖f‖₁`.
    pub fn l1_norm(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

fn check_moduli(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::ModulusMismatch { left, right });
    }
    Ok(())
}

/// `f̂(ξ) = Σ_x f(x) e(-ξx/m)`.
pub fn fourier(f: &CFunction) -> CFunction {
    transform(f, -1.0)
}

/// `f(x) = (1/m) Σ_ξ f̂(ξ) e(ξx/m)`.
pub fn inverse_fourier(fhat: &CFunction) -> CFunction {
    let m = fhat.modulus() as f64;
    transform(fhat, 1.0).map(|v| v / m)
}

fn transform(f: &CFunction, sign: f64) -> CFunction {
    let m = f.modulus();
    if m == 0 {
        return f.clone();
    }
    if m > FAST_FOURIER_THRESHOLD {
        let mut planner = FftPlanner::<f64>::new();
        let fft = if sign < 0.0 {
            planner.plan_fft_forward(m)
        } else {
            planner.plan_fft_inverse(m)
        };
        let mut buf = f.values().to_vec();
        fft.process(&mut buf);
        return CFunction::new(buf);
    }
    let roots: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / m as f64))
        .collect();
    CFunction::from_fn(m, |xi| {
        let mut acc = Complex64::zero();
        for (x, &v) in f.values().iter().enumerate() {
            acc += v * roots[(xi * x) % m];
        }
        acc
    })
}

/// `(A ∘ A)(x)`: the number of ways to write `x = a' - a` with `a, a' ∈ A`.
pub fn difference_counts(a: &FSet) -> IntFunction {
    let m = a.modulus();
    let mut out = vec![0i64; m];
    for x in a.iter() {
        for y in a.iter() {
            out[(y + m - x) % m] += 1;
        }
    }
    IntFunction::new(out)
}

/// `(A * A)(x)`: the number of ordered pairs with `a + a' = x`.
pub fn sum_counts(a: &FSet) -> IntFunction {
    let m = a.modulus();
    let mut out = vec![0i64; m];
    for x in a.iter() {
        for y in a.iter() {
            out[(x + y) % m] += 1;
        }
    }
    IntFunction::new(out)
}

/// `E_k(A) = Σ_x (A ∘ A)(x)^k`.
pub fn energy_k(a: &FSet, k: u32) -> Result<i128> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("energy order k = {k} must be at least 2")));
    }
    Ok(difference_counts(a).values().iter().map(|&v| (v as i128).pow(k)).sum())
}

/// Additive energy `E(A) = E_2(A)`.
pub fn energy(a: &FSet) -> i128 {
    difference_counts(a).values().iter().map(|&v| (v as i128) * (v as i128)).sum()
}

/// `C_{k+1}(f)(x_1, …, x_k) = Σ_z f(z) f(z + x_1) … f(z + x_k)`.
pub fn correlation<T: Scalar>(f: &ZmFunction<T>, shifts: &[i64]) -> Result<T> {
    if shifts.is_empty() {
        return Err(Error::InvalidShifts("at least one shift is required".into()));
    }
    let mut acc = T::zero();
    for z in 0..f.modulus() as i64 {
        let mut term = f.at(z);
        for &s in shifts {
            if term == T::zero() {
                break;
            }
            term = term * f.at(z + s);
        }
        acc += term;
    }
    Ok(acc)
}

/// `Σ_{x_1..x_k} C_{k+1}(f)(x) · C_{k+1}(g)(x)` over all `m^k` shift tuples.
///
/// Enumeration is limited to `m ≤ 64` and `k ≤ 3`.
pub fn correlation_pairing<T: Scalar>(f: &ZmFunction<T>, g: &ZmFunction<T>, k: usize) -> Result<T> {
    check_moduli(f.modulus(), g.modulus())?;
    let m = f.modulus();
    if k == 0 || k > MAX_PAIRING_K || m > MAX_PAIRING_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "shift-tuple enumeration needs 1 ≤ k ≤ {MAX_PAIRING_K} and m ≤ {MAX_PAIRING_MODULUS} (got k = {k}, m = {m})"
        )));
    }
    let mut shifts = vec![0i64; k];
    let mut acc = T::zero();
    loop {
        acc += correlation(f, &shifts)? * correlation(g, &shifts)?;
        // odometer over Z_m^k
        let mut i = 0;
        loop {
            if i == k {
                return Ok(acc);
            }
            shifts[i] += 1;
            if shifts[i] < m as i64 {
                break;
            }
            shifts[i] = 0;
            i += 1;
        }
    }
}

/// `Σ_z (f ∘ g)(z)^{k+1}`.
pub fn circ_power_sum<T: Scalar>(f: &ZmFunction<T>, g: &ZmFunction<T>, k: usize) -> Result<T> {
    let conv = f.convolve_circ(g)?;
    Ok(conv.values().iter().fold(T::zero(), |acc, &v| {
        let mut pow = v;
        for _ in 0..k {
            pow = pow * v;
        }
        acc + pow
    }))
}

/// `k ↦ p_k = |{x : ψ(x) = k}|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueHistogram {
    pub entries: BTreeMap<i64, u64>,
}

impl ValueHistogram {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn count(&self, k: i64) -> u64 {
        self.entries.get(&k).copied().unwrap_or(0)
    }
}

/// Both sides of the divisibility-norm inequality and identity for one `ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivCReport {
    pub c: i64,
    pub histogram: ValueHistogram,
    pub norm_sq: i64,
    pub sum: i64,
    /// `c|Σψ| - (c-1)|Σ_{0<|ψ(x)|<c} ψ(x)|`.
    pub lower_bound: i64,
    /// `cΣψ + Σ_k p_k (k² - ck)`.
    pub identity_rhs: i64,
    pub inequality_holds: bool,
    pub identity_holds: bool,
}

/// `‖ψ‖₂² ≥ c|Σψ| - (c-1)|Σ_{0<|ψ|<c} ψ|` and `‖ψ‖₂² = cΣψ + Σ_k p_k (k² - ck)`.
pub fn div_c_report(psi: &IntFunction, c: i64) -> Result<DivCReport> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be nonzero".into()));
    }
    let histogram = psi.histogram();
    let norm_sq = psi.norm_sq();
    let sum = psi.sum();
    let small: i64 = psi.values().iter().filter(|v| v.abs() > 0 && v.abs() < c).sum();
    let lower_bound = c * sum.abs() - (c - 1) * small.abs();
    let identity_rhs =
        c * sum + histogram.entries.iter().map(|(&k, &n)| n as i64 * (k * k - c * k)).sum::<i64>();
    Ok(DivCReport {
        c,
        inequality_holds: norm_sq >= lower_bound,
        identity_holds: norm_sq == identity_rhs,
        histogram,
        norm_sq,
        sum,
        lower_bound,
        identity_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::tolerance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_int(rng: &mut ChaCha8Rng, m: usize, lo: i64, hi: i64) -> IntFunction {
        IntFunction::from_fn(m, |_| rng.gen_range(lo..=hi))
    }

    fn random_complex(rng: &mut ChaCha8Rng, m: usize) -> CFunction {
        CFunction::from_fn(m, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn fourier_of_delta_and_constant() {
        let m = 11;
        let d = fourier(&CFunction::delta(m, 0));
        assert!(d.approx_eq(&CFunction::constant(m, Complex64::one()), 1e-12));
        let c = fourier(&CFunction::constant(m, Complex64::one()));
        assert!(c.approx_eq(&CFunction::delta(m, 0).scale(Complex64::new(m as f64, 0.0)), 1e-10));
    }

    #[test]
    fn fourier_of_residue_indicator() {
        let f = PrimeField::new(7).unwrap();
        let r = f.residue_set().indicator().to_complex();
        let rhat = fourier(&r);
        let sqrt7 = 7f64.sqrt();
        for x in 0..7i64 {
            let delta = if x == 0 { 7.0 } else { 0.0 };
            let expected = 0.5 * Complex64::new(delta - 1.0, sqrt7 * f.chi(-x) as f64);
            assert!((rhat.at(x) - expected).norm() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn inverse_recovers_and_fast_path_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_complex(&mut rng, 37);
        assert!(inverse_fourier(&fourier(&f)).approx_eq(&f, 1e-10));

        let big = random_complex(&mut rng, FAST_FOURIER_THRESHOLD + 3);
        let fast = fourier(&big);
        for xi in [0usize, 1, 17, 4000] {
            let direct: Complex64 = big
                .values()
                .iter()
                .enumerate()
                .map(|(x, &v)| {
                    let k = (xi * x) % big.modulus();
                    v * Complex64::from_polar(1.0, -2.0 * PI * k as f64 / big.modulus() as f64)
                })
                .sum();
            assert!((fast.values()[xi] - direct).norm() < 1e-6);
        }
        assert!(inverse_fourier(&fast).approx_eq(&big, 1e-9));
    }

    #[test]
    fn parseval_and_convolution_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in [5usize, 12, 31, 64] {
            let f = random_complex(&mut rng, m);
            let g = random_complex(&mut rng, m);
            let (fh, gh) = (fourier(&f), fourier(&g));
            let tol = tolerance::PARSEVAL_REL * m as f64 * f.sup_norm().max(g.sup_norm()).powi(2);
            let lhs = f.inner(&g).unwrap();
            let rhs = fh.inner(&gh).unwrap() / m as f64;
            assert!((lhs - rhs).norm() <= tol);

            let conv = f.convolve_star(&g).unwrap();
            let lhs: f64 = conv.values().iter().map(|v| v.norm_sqr()).sum();
            let rhs: f64 = fh
                .values()
                .iter()
                .zip(gh.values())
                .map(|(a, b)| a.norm_sqr() * b.norm_sqr())
                .sum::<f64>()
                / m as f64;
            assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));

            // (f*g)^ = f̂ ĝ
            let ch = fourier(&conv);
            let prod = CFunction::from_fn(m, |x| fh.values()[x] * gh.values()[x]);
            assert!(ch.approx_eq(&prod, 1e-9 * m as f64));
        }
    }

    #[test]
    fn star_convolution_examples() {
        let m = 9;
        let a = IntFunction::delta(m, 4);
        let b = IntFunction::delta(m, 7);
        assert_eq!(a.convolve_star(&b).unwrap(), IntFunction::delta(m, 2));

        let set = FSet::new(3, [0, 1]).unwrap().indicator();
        assert_eq!(set.convolve_star(&set).unwrap().values(), &[1, 2, 1]);

        let f7 = PrimeField::new(7).unwrap();
        let chi = f7.chi_function();
        let expected = IntFunction::from_fn(7, |x| -(if x == 0 { 7 } else { 0 } - 1));
        assert_eq!(chi.convolve_star(&chi).unwrap(), expected);
    }

    #[test]
    fn circ_convolution_examples() {
        let a = FSet::new(13, [0, 1, 3, 9]).unwrap().indicator();
        let d = a.convolve_circ(&a).unwrap();
        assert_eq!(d.values()[0], 4);
        assert!(d.values()[1..].iter().all(|&v| v == 1));

        let r = PrimeField::new(11).unwrap().residue_set().indicator();
        let rr = r.convolve_circ(&r).unwrap();
        assert_eq!(rr.values()[0], 5);
        assert!(rr.values()[1..].iter().all(|&v| v == 2));
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let a = IntFunction::zeros(3);
        let b = IntFunction::zeros(4);
        assert_eq!(a.convolve_star(&b).unwrap_err(), Error::ModulusMismatch { left: 3, right: 4 });
        assert!(a.convolve_circ(&b).is_err());
    }

    #[test]
    fn reflection_relations_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [1usize, 2, 7, 16, 29] {
            let f = random_int(&mut rng, m, -9, 9);
            let g = random_int(&mut rng, m, -9, 9);
            let star = f.convolve_star(&g).unwrap();
            let circ = f.convolve_circ(&g).unwrap();
            assert_eq!(star, f.reflect().convolve_circ(&g).unwrap());
            assert_eq!(star, f.convolve_circ(&g.reflect()).unwrap().reflect());
            assert_eq!(circ, f.reflect().convolve_star(&g).unwrap());
            assert_eq!(circ, f.convolve_star(&g.reflect()).unwrap().reflect());
            assert_eq!(circ, g.convolve_circ(&f).unwrap().reflect());
            assert_eq!(star, g.convolve_star(&f).unwrap());
        }
    }

    #[test]
    fn energy_examples() {
        let a = FSet::new(13, [0, 1, 3, 9]).unwrap();
        assert_eq!(energy_k(&a, 2).unwrap(), 28);
        assert_eq!(energy(&a), 28);
        let single = FSet::new(13, [5]).unwrap();
        for k in 2..6 {
            assert_eq!(energy_k(&single, k).unwrap(), 1);
        }
        let full = FSet::full(11);
        assert_eq!(energy_k(&full, 3).unwrap(), 11i128.pow(4));
        assert!(energy_k(&a, 1).is_err());
    }

    #[test]
    fn correlation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_int(&mut rng, 10, -4, 4);
        let circ = f.convolve_circ(&f).unwrap();
        for x in 0..10 {
            assert_eq!(correlation(&f, &[x]).unwrap(), circ.at(x));
        }

        let f7 = PrimeField::new(7).unwrap();
        let chi = f7.chi_function();
        for x in 1..7 {
            assert_eq!(correlation(&chi, &[x, x, 0]).unwrap(), 5);
        }
        assert!(correlation(&chi, &[]).is_err());
    }

    #[test]
    fn four_fold_correlation_of_chi_is_small() {
        for p in crate::field::primes_between(3, 101) {
            let field = PrimeField::new(p).unwrap();
            let chi = field.chi_function();
            let bound = 3.0 * (p as f64).sqrt();
            let p = p as i64;
            for x in 1..p.min(12) {
                for y in (x + 1)..p.min(13) {
                    for z in (y + 1)..p.min(14) {
                        let v = correlation(&chi, &[x, y, z]).unwrap();
                        assert!((v as f64).abs() <= bound, "p={p} ({x},{y},{z}) -> {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn correlation_pairing_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_int(&mut rng, 7, -3, 3);
        let g = random_int(&mut rng, 7, -3, 3);
        for k in 1..=3 {
            assert_eq!(
                correlation_pairing(&f, &g, k).unwrap(),
                circ_power_sum(&f, &g, k).unwrap()
            );
        }
        assert!(correlation_pairing(&f, &g, 4).is_err());
        assert!(correlation_pairing(&IntFunction::zeros(65), &IntFunction::zeros(65), 1).is_err());
    }

    #[test]
    fn div_c_examples() {
        let zero = IntFunction::zeros(9);
        let r = div_c_report(&zero, 3).unwrap();
        assert_eq!((r.norm_sq, r.lower_bound, r.identity_rhs), (0, 0, 0));
        assert!(r.inequality_holds && r.identity_holds);

        let chi = PrimeField::new(7).unwrap().chi_function();
        let r = div_c_report(&chi, 2).unwrap();
        assert_eq!(r.norm_sq, 6);
        assert_eq!(r.sum, 0);
        assert!(r.inequality_holds && r.identity_holds);
        assert_eq!(r.histogram.total(), 7);
        assert_eq!(r.histogram.count(-1), 3);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let psi = random_int(&mut rng, 13, -5, 5);
            // brute-force right-hand side of the identity
            let mut rhs = -2 * psi.sum();
            for k in -5i64..=5 {
                let pk = psi.values().iter().filter(|&&v| v == k).count() as i64;
                rhs += pk * (k * k + 2 * k);
            }
            let r = div_c_report(&psi, -2).unwrap();
            assert_eq!(r.identity_rhs, rhs);
            assert!(r.identity_holds && r.inequality_holds);
        }
        assert!(div_c_report(&chi, 0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_fn(m: usize) -> impl Strategy<Value = IntFunction> {
            proptest::collection::vec(-20i64..20, m).prop_map(IntFunction::new)
        }

        proptest! {
            #[test]
            fn star_is_commutative(f in int_fn(17), g in int_fn(17)) {
                prop_assert_eq!(f.convolve_star(&g).unwrap(), g.convolve_star(&f).unwrap());
            }

            #[test]
            fn div_c_always_holds(f in int_fn(23), c in 1i64..6) {
                let r = div_c_report(&f, c).unwrap();
                prop_assert!(r.inequality_holds);
                prop_assert!(r.identity_holds);
            }

            #[test]
            fn ek_identity_exact(f in int_fn(7), g in int_fn(7), k in 1usize..=2) {
                prop_assert_eq!(correlation_pairing(&f, &g, k).unwrap(), circ_power_sum(&f, &g, k).unwrap());
            }
        }
    }
}
