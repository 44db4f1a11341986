//! Perfect difference sets: detection, the class of perfect difference
//! functions, multiplier groups, translates fixed by a multiplier, and the
//! Singer construction from the projective plane over `F_q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, is_prime, mod_pow, prime_factors, FSet};
use crate::funcspace::{difference_counts, Scalar, ZmFunction};

/// Outcome of testing whether `(A ∘ A)` is constant away from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PdsReport {
    pub is_pds: bool,
    /// The common value of `(A ∘ A)(x)` for `x ≠ 0`; present iff `is_pds`.
    pub lambda: Option<u64>,
}

/// Tests `(A ∘ A)(x) = (|A| - λ)δ_0(x) + λ`. `λ = 0` is reported, not rejected.
pub fn pds_lambda(a: &FSet) -> PdsReport {
    let counts = difference_counts(a);
    let off_zero = &counts.values()[1..];
    match off_zero.first() {
        None => PdsReport { is_pds: true, lambda: Some(0) },
        Some(&first) if off_zero.iter().all(|&v| v == first) => {
            PdsReport { is_pds: true, lambda: Some(first as u64) }
        }
        Some(_) => PdsReport { is_pds: false, lambda: None },
    }
}

/// Whether `φ ∘ φ̄` has the form `aδ_0 + b`. Exact for integer functions; for
/// complex ones the slack is `1e-9 · m · ‖φ‖∞²`.
pub fn in_class_d<T: Scalar>(phi: &ZmFunction<T>) -> bool {
    let m = phi.modulus();
    let auto = phi.convolve_circ(&phi.conj()).expect("same modulus");
    let tol = 1e-9 * m as f64 * phi.sup_norm().powi(2);
    let off_zero = &auto.values()[1.min(m)..];
    off_zero.iter().all(|&v| v.approx_eq(off_zero[0], tol))
}

/// `{u ∈ (Z_m)^* : u·A = A}`.
pub fn multipliers(a: &FSet) -> FSet {
    let m = a.modulus();
    let members: Vec<usize> = (1..m.max(2))
        .filter(|&u| gcd(u as u64, m as u64) == 1)
        .filter(|&u| a.dilate(u as i64).map(|d| d == *a).unwrap_or(false))
        .collect();
    let group = FSet::new(m, members).expect("members below modulus");
    debug_assert!(is_multiplicative_group(&group));
    group
}

/// Closed under multiplication modulo the set's modulus and contains 1.
pub fn is_multiplicative_group(set: &FSet) -> bool {
    let m = set.modulus();
    (m == 1 || set.contains(1))
        && set.iter().all(|x| set.iter().all(|y| set.contains(x * y % m)))
}

/// Least `s` with `mult·(A + s) = A + s`, if any.
pub fn fixed_translate(a: &FSet, mult: u64) -> Result<Option<usize>> {
    let m = a.modulus();
    if gcd(mult % m as u64, m as u64) != 1 {
        return Err(Error::NotUnit { factor: mult, modulus: m as u64 });
    }
    for s in 0..m {
        let shifted = a.translate(s as i64);
        if shifted.dilate(mult as i64)? == shifted {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplierInstance {
    pub prime: u64,
    pub translate: Option<usize>,
}

/// For a `λ`-perfect difference set, every prime `r | (|A| - λ)` with
/// `gcd(r, m) = 1` and `r > λ` paired with a translate of `A` it fixes.
/// Returns `None` when `A` is not a perfect difference set with `λ ≥ 1`.
pub fn multiplier_theorem_instances(a: &FSet) -> Option<Vec<MultiplierInstance>> {
    let lambda = pds_lambda(a).lambda.filter(|&l| l >= 1)?;
    let k = (a.len() as u64).checked_sub(lambda)?;
    let m = a.modulus() as u64;
    let primes = if k == 0 { Vec::new() } else { prime_factors(k) };
    Some(
        primes
            .into_iter()
            .filter(|&r| gcd(r, m) == 1 && r > lambda)
            .map(|r| MultiplierInstance { prime: r, translate: fixed_translate(a, r).ok().flatten() })
            .collect(),
    )
}

/// The canonical choices behind one Singer set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingerSpec {
    pub q: u64,
    /// `q² + q + 1`.
    pub modulus: u64,
    /// `[c0, c1, c2]` of the monic cubic `x³ + c2·x² + c1·x + c0`: the least
    /// irreducible one when `(c2, c1, c0)` is compared lexicographically.
    pub irreducible_cubic: [u64; 3],
    /// Coordinates `[a0, a1, a2]` of the primitive element `a0 + a1·x + a2·x²`:
    /// the one with the least code `a0 + a1·q + a2·q²`.
    pub primitive_elem: [u64; 3],
}

/// Arithmetic in `F_q[x] / (cubic)`.
#[derive(Debug, Clone, Copy)]
struct CubicExtension {
    q: u64,
    cubic: [u64; 3],
}

type Gf3 = [u64; 3];

impl CubicExtension {
    fn mul(&self, a: Gf3, b: Gf3) -> Gf3 {
        let q = self.q;
        let mut prod = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % q;
            }
        }
        // x^3 = -(c2 x^2 + c1 x + c0)
        for d in (3..5).rev() {
            let top = prod[d];
            if top == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &c) in self.cubic.iter().enumerate() {
                let idx = d - 3 + i;
                prod[idx] = (prod[idx] + (q - c) * top) % q;
            }
        }
        [prod[0], prod[1], prod[2]]
    }

    fn pow(&self, mut base: Gf3, mut e: u64) -> Gf3 {
        let mut acc = [1, 0, 0];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn has_root(q: u64, cubic: [u64; 3]) -> bool {
        (0..q).any(|x| {
            let x3 = mod_pow(x, 3, q);
            (x3 + cubic[2] * x % q * x + cubic[1] * x + cubic[0]).is_multiple_of(q)
        })
    }
}

/// A `λ = 1` perfect difference set of size `q + 1` in `Z_{q²+q+1}` together
/// with the field data that produced it.
pub fn singer_construction(q: u64) -> Result<(SingerSpec, FSet)> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut cubic = None;
    'search: for c2 in 0..q {
        for c1 in 0..q {
            for c0 in 0..q {
                if !CubicExtension::has_root(q, [c0, c1, c2]) {
                    cubic = Some([c0, c1, c2]);
                    break 'search;
                }
            }
        }
    }
    // a cubic over F_q is irreducible iff it has no root, and such cubics exist
    let cubic = cubic.expect("irreducible cubic exists over every prime field");
    let ext = CubicExtension { q, cubic };

    let group_order = q * q * q - 1;
    let factors = prime_factors(group_order);
    let alpha = (2..q * q * q)
        .map(|code| [code % q, code / q % q, code / (q * q)])
        .find(|&a| factors.iter().all(|&r| ext.pow(a, group_order / r) != [1, 0, 0]))
        .expect("the multiplicative group of a finite field is cyclic");

    let modulus = q * q + q + 1;
    let mut members = Vec::with_capacity(q as usize + 1);
    let mut power = [1, 0, 0];
    for i in 0..modulus {
        if power[2] == 0 {
            members.push(i as usize);
        }
        power = ext.mul(power, alpha);
    }
    let set = FSet::new(modulus as usize, members)?;
    Ok((SingerSpec { q, modulus, irreducible_cubic: cubic, primitive_elem: alpha }, set))
}

/// See [`singer_construction`].
pub fn singer(q: u64) -> Result<FSet> {
    singer_construction(q).map(|(_, set)| set)
}

/// Whether `b = u·a + s` for some unit `u` and shift `s`.
pub fn affinely_equivalent(a: &FSet, b: &FSet) -> bool {
    let m = a.modulus();
    if m != b.modulus() || a.len() != b.len() {
        return false;
    }
    (1..m.max(2)).filter(|&u| gcd(u as u64, m as u64) == 1).any(|u| {
        let d = a.dilate(u as i64).expect("unit");
        (0..m).any(|s| d.translate(s as i64) == *b)
    })
}
