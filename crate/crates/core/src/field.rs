//! Prime-field arithmetic, the Legendre symbol, residue sets and dilations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::IntFunction;

/// Below this modulus the Legendre symbol is served from a table.
pub const DEFAULT_TABLE_THRESHOLD: u64 = 100_000;

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors in ascending order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes in the closed interval `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `floor(sqrt(n))`, exact.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// An element of `F_p`, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u64);

impl Elem {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The prime field `F_p` for an odd prime `p`.
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    t: u64,
    g: u64,
    table: Option<Vec<i8>>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_table_threshold(p, DEFAULT_TABLE_THRESHOLD)
    }

    /// Builds the field, tabulating the Legendre symbol when `p < threshold`.
    pub fn with_table_threshold(p: u64, threshold: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let t = (p - 1) / 2;
        let g = least_primitive_root(p);
        let mut field = PrimeField { p, t, g, table: None };
        if p < threshold {
            let mut table = vec![-1i8; p as usize];
            table[0] = 0;
            for x in 1..p {
                table[(x * x % p) as usize] = 1;
            }
            field.table = Some(table);
        }
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(p - 1) / 2`, the number of nonzero squares.
    pub fn t(&self) -> u64 {
        self.t
    }

    /// The least primitive root.
    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    pub fn modulus(&self) -> usize {
        self.p as usize
    }

    pub fn elem(&self, value: u64) -> Result<Elem> {
        if value >= self.p {
            return Err(Error::OutOfRange { value, modulus: self.p });
        }
        Ok(Elem(value))
    }

    /// Reduces any integer into the field.
    pub fn reduce(&self, value: i64) -> Elem {
        Elem(value.rem_euclid(self.p as i64) as u64)
    }

    pub fn legendre(&self, x: Elem) -> i8 {
        match &self.table {
            Some(table) => table[x.0 as usize],
            None => self.euler_criterion(x.0),
        }
    }

    /// The Legendre symbol of an arbitrary integer.
    pub fn chi(&self, x: i64) -> i64 {
        self.legendre(self.reduce(x)) as i64
    }

    /// `x^t mod p` mapped to `{-1, 0, 1}`.
    pub fn euler_criterion(&self, x: u64) -> i8 {
        let x = x % self.p;
        if x == 0 {
            return 0;
        }
        if mod_pow(x, self.t, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        mod_pow(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::NotUnit { factor: a, modulus: self.p });
        }
        Ok(mod_pow(a, self.p - 2, self.p))
    }

    /// The quadratic residues `R`.
    pub fn residue_set(&self) -> FSet {
        self.set_by_symbol(1)
    }

    /// The quadratic non-residues `N`.
    pub fn nonresidue_set(&self) -> FSet {
        self.set_by_symbol(-1)
    }

    fn set_by_symbol(&self, symbol: i8) -> FSet {
        let members = (1..self.p as usize)
            .filter(|&x| self.legendre(Elem(x as u64)) == symbol)
            .collect();
        FSet { modulus: self.p as usize, members }
    }

    /// The Legendre character as an integer function on `Z_p`.
    pub fn chi_function(&self) -> IntFunction {
        IntFunction::from_fn(self.modulus(), |x| self.legendre(Elem(x as u64)) as i64)
    }
}

fn least_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .unwrap_or(1)
}

/// A subset of `Z_m`, stored as a sorted, duplicate-free member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FSet {
    modulus: usize,
    members: Vec<usize>,
}

impl FSet {
    pub fn new<I: IntoIterator<Item = usize>>(modulus: usize, members: I) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&x| x >= modulus) {
            return Err(Error::OutOfRange { value: bad as u64, modulus: modulus as u64 });
        }
        members.sort_unstable();
        members.dedup();
        Ok(FSet { modulus, members })
    }

    /// Reduces every integer modulo `modulus` before building the set.
    pub fn from_residues<I: IntoIterator<Item = i64>>(modulus: usize, values: I) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Self::new(modulus, values.into_iter().map(|v| v.rem_euclid(modulus as i64) as usize))
    }

    pub fn empty(modulus: usize) -> Self {
        FSet { modulus, members: Vec::new() }
    }

    pub fn full(modulus: usize) -> Self {
        FSet { modulus, members: (0..modulus).collect() }
    }

    pub(crate) fn from_sorted_unchecked(modulus: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&x| x < modulus));
        FSet { modulus, members }
    }

    /// Collects the indices where `mask` is set.
    pub fn from_mask(mask: &[bool]) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        FSet { modulus: mask.len(), members }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.modulus];
        for &x in &self.members {
            mask[x] = true;
        }
        mask
    }

    /// The characteristic function.
    pub fn indicator(&self) -> IntFunction {
        let mut values = vec![0i64; self.modulus];
        for &x in &self.members {
            values[x] = 1;
        }
        IntFunction::new(values)
    }

    /// `A + s`.
    pub fn translate(&self, s: i64) -> FSet {
        let m = self.modulus as i64;
        let shift = s.rem_euclid(m) as usize;
        let mut members: Vec<usize> =
            self.members.iter().map(|&x| (x + shift) % self.modulus).collect();
        members.sort_unstable();
        FSet { modulus: self.modulus, members }
    }

    /// `λ·A = {λa : a ∈ A}`; `λ` must be a unit so that `|λ·A| = |A|`.
    pub fn dilate(&self, lambda: i64) -> Result<FSet> {
        let m = self.modulus as u64;
        let l = lambda.rem_euclid(self.modulus as i64) as u64;
        if m > 1 && (l == 0 || gcd(l, m) != 1) {
            return Err(Error::NotUnit { factor: lambda.unsigned_abs(), modulus: m });
        }
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&x| ((x as u128 * l as u128) % m as u128) as usize)
            .collect();
        members.sort_unstable();
        members.dedup();
        Ok(FSet { modulus: self.modulus, members })
    }

    pub fn is_subset(&self, other: &FSet) -> bool {
        self.modulus == other.modulus && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &FSet) -> FSet {
        let members = self.members.iter().copied().filter(|&x| other.contains(x)).collect();
        FSet { modulus: self.modulus, members }
    }

    pub fn difference(&self, other: &FSet) -> FSet {
        let members = self.members.iter().copied().filter(|&x| !other.contains(x)).collect();
        FSet { modulus: self.modulus, members }
    }

    pub fn union(&self, other: &FSet) -> FSet {
        let mut members: Vec<usize> = self.members.iter().chain(&other.members).copied().collect();
        members.sort_unstable();
        members.dedup();
        FSet { modulus: self.modulus, members }
    }
}

impl fmt::Display for FSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

// Sets serialize as their sorted member array; the modulus travels separately.
impl Serialize for FSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn legendre_examples() {
        let f7 = field(7);
        assert_eq!(f7.legendre(f7.elem(2).unwrap()), 1);
        let f13 = field(13);
        assert_eq!(f13.legendre(f13.elem(0).unwrap()), 0);
        assert_eq!(f13.legendre(f13.elem(12).unwrap()), 1);
    }

    #[test]
    fn residue_set_examples() {
        assert_eq!(field(7).residue_set().members(), &[1, 2, 4]);
        assert_eq!(field(13).residue_set().members(), &[1, 3, 4, 9, 10, 12]);
        assert_eq!(field(3).residue_set().members(), &[1]);
    }

    #[test]
    fn rejects_two_and_composites() {
        assert_eq!(PrimeField::new(2).unwrap_err(), Error::NotOddPrime(2));
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn elem_range_checked() {
        assert!(field(7).elem(7).is_err());
        assert_eq!(field(7).reduce(-1).value(), 6);
    }

    #[test]
    fn primitive_root_has_full_order() {
        for p in primes_between(3, 997) {
            let f = field(p);
            let g = f.primitive_root();
            assert_eq!(f.pow(g, f.t()), p - 1, "p={p}");
            for q in prime_factors(p - 1) {
                assert_ne!(f.pow(g, (p - 1) / q), 1);
            }
        }
        assert_eq!(field(7).primitive_root(), 3);
        assert_eq!(field(13).primitive_root(), 2);
    }

    #[test]
    fn legendre_is_completely_multiplicative() {
        for p in primes_between(3, 997) {
            let f = field(p);
            let chi: Vec<i64> = (0..p as i64).map(|x| f.chi(x)).collect();
            for x in 0..p {
                for y in 0..p {
                    let xy = (x * y % p) as usize;
                    assert_eq!(chi[xy], chi[x as usize] * chi[y as usize]);
                }
            }
        }
    }

    #[test]
    fn table_and_euler_criterion_agree() {
        for p in primes_between(3, 400) {
            let tabled = field(p);
            let direct = PrimeField::with_table_threshold(p, 0).unwrap();
            for x in 0..p {
                let e = tabled.elem(x).unwrap();
                assert_eq!(tabled.legendre(e), direct.legendre(e));
            }
        }
    }

    #[test]
    fn residue_counts_and_partition() {
        for p in primes_between(3, 997) {
            let f = field(p);
            let r = f.residue_set();
            let n = f.nonresidue_set();
            assert_eq!(r.len() as u64, f.t());
            assert_eq!(n.len() as u64, f.t());
            assert!(!r.contains(0) && !n.contains(0));
            assert!(r.intersection(&n).is_empty());
            assert_eq!(r.union(&n).len() as u64, p - 1);
            assert_eq!(f.chi(-1) == 1, p % 4 == 1);
        }
    }

    #[test]
    fn dilation_examples() {
        let a = FSet::new(7, [3, 5, 6]).unwrap();
        assert_eq!(a.dilate(2).unwrap(), a);
        let b = FSet::new(13, [0, 1, 3, 9]).unwrap();
        assert_eq!(b.dilate(3).unwrap(), b);
        assert_eq!(b.dilate(1).unwrap(), b);
        assert!(b.dilate(0).is_err());
        assert!(b.dilate(13).is_err());
        assert!(FSet::new(12, [1]).unwrap().dilate(4).is_err());
    }

    #[test]
    fn fset_canonical_form() {
        let a = FSet::new(10, [7, 1, 7, 3]).unwrap();
        assert_eq!(a.members(), &[1, 3, 7]);
        assert!(FSet::new(5, [5]).is_err());
        assert_eq!(FSet::from_residues(5, [-1, 6]).unwrap().members(), &[1, 4]);
        assert_eq!(a.to_string(), "{1,3,7}");
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,3,7]");
    }

    #[test]
    fn small_number_theory() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(97), vec![97]);
        assert_eq!(primes_between(3, 20), vec![3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn dilation_inverts(idx in 0usize..20, lambda in 1u64..1000, bits in proptest::collection::vec(any::<bool>(), 1..200)) {
                let p = primes_between(3, 199)[idx % 45];
                let f = PrimeField::new(p).unwrap();
                let lambda = lambda % p;
                prop_assume!(lambda != 0);
                let a = FSet::from_mask(&bits.iter().copied().cycle().take(p as usize).collect::<Vec<_>>());
                let inv = f.inv(lambda).unwrap();
                let back = a.dilate(lambda as i64).unwrap().dilate(inv as i64).unwrap();
                prop_assert_eq!(back, a.clone());
                prop_assert_eq!(a.dilate(lambda as i64).unwrap().len(), a.len());
            }
        }
    }
}
