//! Exhaustive classification of the sets `A ⊆ F_p` with `A + A = R` or
//! `A +̂ A = R`, and range verification with a JSON certificate.
//!
//! The search is a depth-first backtrack over ascending elements. A
//! candidate survives only while every sum it forms with the current set
//! (and its double, in standard mode) is a residue. Two counting prunes
//! bound the final size `a`:
//!
//! * restricted: `a(a - 1) ≥ p - 1` and `a ≤ √p + 1`;
//! * standard: `a² + a ≥ p - 1` and `a² < p`;
//!
//! and a coverage prune drops a branch when the pairs still addable cannot
//! reach the `t = (p - 1)/2` residues not yet covered.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::diffsets::pds_lambda;
use crate::error::{Error, Result};
use crate::field::{isqrt, primes_between, FSet, PrimeField};
use crate::sumsets::{diagnostics, represents_r, restricted_structure, Mode};

pub const DEFAULT_MAX_NODES: u64 = 1_000_000_000;
pub const CERT_SCHEMA: &str = "resform-cert/1";
pub const SOLVER_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub mode: Mode,
    pub p_min: u64,
    pub p_max: u64,
    pub max_nodes: u64,
    pub parallel: bool,
}

impl SearchConfig {
    pub fn new(mode: Mode, p_min: u64, p_max: u64) -> Self {
        SearchConfig { mode, p_min, p_max, max_nodes: DEFAULT_MAX_NODES, parallel: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_min < 3 {
            return Err(Error::InvalidArgument(format!("p_min must be at least 3, got {}", self.p_min)));
        }
        if self.p_max < self.p_min {
            return Err(Error::InvalidArgument(format!("p_max {} is below p_min {}", self.p_max, self.p_min)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyOutcome {
    pub solutions: Vec<FSet>,
    pub nodes: u64,
}

/// All `A` with `A + A = R` (standard) or `A +̂ A = R` (restricted),
/// sorted lexicographically.
pub fn classify(field: &PrimeField, mode: Mode) -> Result<Vec<FSet>> {
    Ok(classify_with_budget(field, mode, DEFAULT_MAX_NODES)?.solutions)
}

/// `(a_min, a_max)` allowed by the counting prunes.
pub fn size_window(p: u64, mode: Mode) -> (u64, u64) {
    match mode {
        Mode::Restricted => {
            let a_min = (1..=p).find(|&a| a * (a - 1) >= p - 1).unwrap_or(p);
            // a ≤ √p + 1 ⇔ (a - 1)² ≤ p
            let a_max = if p >= 7 { isqrt(p) + 1 } else { p };
            (a_min, a_max)
        }
        Mode::Standard => {
            let a_min = (1..=p).find(|&a| a * a + a >= p - 1).unwrap_or(p);
            // a² < p
            let a_max = isqrt(p - 1);
            (a_min, a_max)
        }
    }
}

pub fn classify_with_budget(field: &PrimeField, mode: Mode, max_nodes: u64) -> Result<ClassifyOutcome> {
    let p = field.p();
    let m = field.modulus();
    let is_res: Vec<bool> = (0..m as i64).map(|x| field.chi(x) == 1).collect();
    let (a_min, a_max) = size_window(p, mode);
    let mut dfs = Dfs {
        m,
        mode,
        is_res,
        t: field.t() as usize,
        a_min: a_min as usize,
        a_max: a_max as usize,
        max_nodes,
        nodes: 0,
        current: Vec::new(),
        cover: vec![0u32; m],
        covered: 0,
        solutions: Vec::new(),
    };
    let candidates: Vec<usize> = (0..m).filter(|&y| mode == Mode::Restricted || dfs.is_res[(2 * y) % m]).collect();
    if a_min <= a_max {
        dfs.run(&candidates)?;
    }
    if dfs.nodes > max_nodes {
        return Err(Error::BudgetExceeded { p, budget: max_nodes });
    }
    let mut solutions: Vec<FSet> = dfs.solutions.into_iter().map(|xs| FSet::from_sorted_unchecked(m, xs)).collect();
    solutions.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(ClassifyOutcome { solutions, nodes: dfs.nodes })
}

struct Dfs {
    m: usize,
    mode: Mode,
    is_res: Vec<bool>,
    t: usize,
    a_min: usize,
    a_max: usize,
    max_nodes: u64,
    nodes: u64,
    current: Vec<usize>,
    /// Multiplicity with which each residue is currently hit as a sum.
    cover: Vec<u32>,
    covered: usize,
    solutions: Vec<Vec<usize>>,
}

fn pairs(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

impl Dfs {
    /// Pairs (or pairs with repetition, in standard mode) a set of size `k` forms.
    fn sums_of(&self, k: usize) -> usize {
        match self.mode {
            Mode::Restricted => pairs(k),
            Mode::Standard => pairs(k + 1),
        }
    }

    fn hit(&mut self, s: usize) {
        if self.cover[s] == 0 {
            self.covered += 1;
        }
        self.cover[s] += 1;
    }

    fn unhit(&mut self, s: usize) {
        self.cover[s] -= 1;
        if self.cover[s] == 0 {
            self.covered -= 1;
        }
    }

    fn sums_with(&self, y: usize) -> Vec<usize> {
        let mut sums: Vec<usize> = self.current.iter().map(|&x| (x + y) % self.m).collect();
        if self.mode == Mode::Standard {
            sums.push((2 * y) % self.m);
        }
        sums
    }

    /// Every candidate is larger than the last element of `current` and
    /// forms only residue sums with it.
    fn run(&mut self, candidates: &[usize]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded { p: self.m as u64, budget: self.max_nodes });
        }
        let k = self.current.len();
        if k >= self.a_min && self.covered == self.t {
            self.solutions.push(self.current.clone());
        }
        if k == self.a_max || self.covered + self.sums_of(self.a_max) - self.sums_of(k) < self.t {
            return Ok(());
        }
        for (i, &y) in candidates.iter().enumerate() {
            let remaining = candidates.len() - i;
            if k + remaining < self.a_min {
                break;
            }
            let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&z| self.is_res[(y + z) % self.m]).collect();
            let sums = self.sums_with(y);
            for &s in &sums {
                self.hit(s);
            }
            self.current.push(y);
            let out = self.run(&next);
            self.current.pop();
            for &s in &sums {
                self.unhit(s);
            }
            out?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeEntry {
    pub p: u64,
    pub mode: Mode,
    pub solutions: Vec<FSet>,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSummary {
    pub solutions_total: usize,
    pub revalidated: usize,
    pub all_represent_r: bool,
    /// Restricted: each solution is a `λ = 1` difference set of size `n + 1`
    /// with every structural identity holding. Standard: `ζ₁ = ζ₂ = 0`.
    pub all_structure_checks: bool,
    /// Solutions occur only at the primes and sets of the known list.
    pub matches_known_list: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    pub solver_version: &'static str,
    pub mode: Mode,
    pub range: [u64; 2],
    pub max_nodes: u64,
    pub primes: Vec<PrimeEntry>,
    pub checks: InvariantSummary,
    pub pass: bool,
}

impl Certificate {
    /// The certificate with every timing field zeroed.
    pub fn without_timing(&self) -> Certificate {
        let mut c = self.clone();
        for e in &mut c.primes {
            e.elapsed_ms = 0;
        }
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn solution_count(&self) -> usize {
        self.primes.iter().map(|e| e.solutions.len()).sum()
    }
}

/// The complete list of solutions.
pub fn known_solutions(mode: Mode) -> Vec<(u64, Vec<Vec<usize>>)> {
    match mode {
        Mode::Standard => vec![(3, vec![vec![2]])],
        Mode::Restricted => vec![(3, vec![vec![0, 1]]), (7, vec![vec![3, 5, 6]]), (13, vec![vec![0, 1, 3, 9], vec![0, 4, 10, 12]])],
    }
}

fn classify_prime(p: u64, mode: Mode, max_nodes: u64) -> Result<PrimeEntry> {
    let field = PrimeField::new(p)?;
    let start = Instant::now();
    let out = classify_with_budget(&field, mode, max_nodes)?;
    Ok(PrimeEntry { p, mode, solutions: out.solutions, nodes: out.nodes, elapsed_ms: start.elapsed().as_millis() as u64 })
}

pub fn verify_range(config: &SearchConfig) -> Result<Certificate> {
    config.validate()?;
    let primes = primes_between(config.p_min, config.p_max);
    let results: Vec<Result<PrimeEntry>> = if config.parallel {
        primes.par_iter().map(|&p| classify_prime(p, config.mode, config.max_nodes)).collect()
    } else {
        primes.iter().map(|&p| classify_prime(p, config.mode, config.max_nodes)).collect()
    };
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let checks = revalidate(&entries, config.mode);
    let pass = checks.failures.is_empty();
    Ok(Certificate {
        schema: CERT_SCHEMA,
        solver_version: SOLVER_VERSION,
        mode: config.mode,
        range: [config.p_min, config.p_max],
        max_nodes: config.max_nodes,
        primes: entries,
        checks,
        pass,
    })
}

fn revalidate(entries: &[PrimeEntry], mode: Mode) -> InvariantSummary {
    let known = known_solutions(mode);
    let mut failures = Vec::new();
    let (mut total, mut revalidated) = (0, 0);
    let (mut all_rep, mut all_struct, mut all_known) = (true, true, true);
    for e in entries {
        let field = PrimeField::new(e.p).expect("entries hold primes");
        let expected: Vec<Vec<usize>> = known.iter().find(|(q, _)| *q == e.p).map(|(_, s)| s.clone()).unwrap_or_default();
        let found: Vec<Vec<usize>> = e.solutions.iter().map(|a| a.members().to_vec()).collect();
        if found != expected {
            all_known = false;
            failures.push(format!("p={}: found {:?}, expected {:?}", e.p, found, expected));
        }
        for a in &e.solutions {
            total += 1;
            if !represents_r(&field, a, mode) {
                all_rep = false;
                failures.push(format!("p={}: {} does not represent R", e.p, a));
                continue;
            }
            let ok = match mode {
                Mode::Restricted => {
                    let exceptional = e.p == 3;
                    let pds = exceptional || pds_lambda(a).lambda == Some(1);
                    pds && restricted_structure(&field, a).is_ok_and(|s| s.perfect())
                }
                Mode::Standard => diagnostics(&field, a).is_ok_and(|d| d.max_defect == 0),
            };
            if ok {
                revalidated += 1;
            } else {
                all_struct = false;
                failures.push(format!("p={}: {} fails structural checks", e.p, a));
            }
        }
    }
    InvariantSummary {
        solutions_total: total,
        revalidated,
        all_represent_r: all_rep,
        all_structure_checks: all_struct,
        matches_known_list: all_known,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumsets::sumset_for_mode;

    fn members(sets: &[FSet]) -> Vec<Vec<usize>> {
        sets.iter().map(|a| a.members().to_vec()).collect()
    }

    /// No pruning: every bitmask, restricted sums as an OR over rotations.
    fn brute_force(p: u64, mode: Mode) -> Vec<Vec<usize>> {
        let m = p as usize;
        let full = (1u64 << m) - 1;
        let rot = |x: u64, k: usize| ((x << k) | (x >> (m - k))) & full;
        let field = PrimeField::new(p).unwrap();
        let r: u64 = (0..m).filter(|&x| field.chi(x as i64) == 1).map(|x| 1u64 << x).sum();
        let mut out = Vec::new();
        for mask in 0..=full {
            let mut sums = 0u64;
            for x in (0..m).filter(|x| mask >> x & 1 == 1) {
                let others = match mode {
                    Mode::Standard => mask,
                    Mode::Restricted => mask & !(1u64 << x),
                };
                sums |= rot(others, x);
            }
            if sums == r {
                out.push((0..m).filter(|x| mask >> x & 1 == 1).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn classify_examples() {
        let f = |p| PrimeField::new(p).unwrap();
        assert_eq!(members(&classify(&f(3), Mode::Standard).unwrap()), vec![vec![2]]);
        assert_eq!(members(&classify(&f(7), Mode::Restricted).unwrap()), vec![vec![3, 5, 6]]);
        assert_eq!(members(&classify(&f(13), Mode::Restricted).unwrap()), vec![vec![0, 1, 3, 9], vec![0, 4, 10, 12]]);
        assert_eq!(members(&classify(&f(3), Mode::Restricted).unwrap()), vec![vec![0, 1]]);
    }

    #[test]
    fn classify_matches_brute_force_oracle() {
        for p in primes_between(3, 19) {
            let field = PrimeField::new(p).unwrap();
            for mode in [Mode::Standard, Mode::Restricted] {
                assert_eq!(members(&classify(&field, mode).unwrap()), brute_force(p, mode), "p={p} {mode}");
            }
        }
    }

    #[test]
    fn window_prunes_are_sound_on_small_primes() {
        for p in primes_between(3, 19) {
            for mode in [Mode::Standard, Mode::Restricted] {
                let (lo, hi) = size_window(p, mode);
                for a in brute_force(p, mode) {
                    assert!(lo as usize <= a.len() && a.len() <= hi as usize, "p={p} {mode} {a:?}");
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let field = PrimeField::new(13).unwrap();
        assert_eq!(
            classify_with_budget(&field, Mode::Restricted, 3).unwrap_err(),
            Error::BudgetExceeded { p: 13, budget: 3 }
        );
        let cfg = SearchConfig { max_nodes: 3, ..SearchConfig::new(Mode::Restricted, 3, 13) };
        assert!(matches!(verify_range(&cfg), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(verify_range(&SearchConfig::new(Mode::Standard, 2, 10)).is_err());
        assert!(verify_range(&SearchConfig::new(Mode::Standard, 11, 5)).is_err());
    }

    #[test]
    fn verify_range_examples() {
        let c = verify_range(&SearchConfig::new(Mode::Restricted, 3, 13)).unwrap();
        assert!(c.pass, "{:?}", c.checks.failures);
        assert_eq!(c.solution_count(), 4);
        let with: Vec<u64> = c.primes.iter().filter(|e| !e.solutions.is_empty()).map(|e| e.p).collect();
        assert_eq!(with, vec![3, 7, 13]);

        let c = verify_range(&SearchConfig::new(Mode::Restricted, 17, 100)).unwrap();
        assert!(c.pass);
        assert_eq!(c.solution_count(), 0);

        let c = verify_range(&SearchConfig::new(Mode::Standard, 5, 100)).unwrap();
        assert!(c.pass);
        assert_eq!(c.solution_count(), 0);
    }

    #[test]
    fn parallel_and_serial_agree() {
        for mode in [Mode::Standard, Mode::Restricted] {
            let par = verify_range(&SearchConfig::new(mode, 3, 200)).unwrap();
            let ser = verify_range(&SearchConfig { parallel: false, ..SearchConfig::new(mode, 3, 200) }).unwrap();
            assert_eq!(par.primes.len(), ser.primes.len());
            for (a, b) in par.primes.iter().zip(&ser.primes) {
                assert_eq!((a.p, &a.solutions, a.nodes), (b.p, &b.solutions, b.nodes));
            }
        }
    }

    #[test]
    fn certificate_is_deterministic() {
        let cfg = SearchConfig::new(Mode::Restricted, 3, 60);
        let a = verify_range(&cfg).unwrap().without_timing().to_json();
        let b = verify_range(&cfg).unwrap().without_timing().to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], CERT_SCHEMA);
        assert_eq!(v["primes"][2]["solutions"][0], serde_json::json!([3, 5, 6]));
    }

    #[test]
    fn solutions_represent_r() {
        for p in primes_between(3, 40) {
            let field = PrimeField::new(p).unwrap();
            for mode in [Mode::Standard, Mode::Restricted] {
                for a in classify(&field, mode).unwrap() {
                    assert_eq!(sumset_for_mode(&a, mode), field.residue_set());
                }
            }
        }
    }
}
