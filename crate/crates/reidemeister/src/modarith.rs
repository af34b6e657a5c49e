//! Exact integer arithmetic: gcd/lcm, trial-division factorisation, p-adic
//! valuations, modular units and orders, CRT solving, and the constructive
//! gcd-witness used to realise prescribed Reidemeister numbers.

use crate::{Error, Result};

/// Greatest common divisor of two signed integers; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> u64 {
    gcd_u(a.unsigned_abs(), b.unsigned_abs())
}

/// Greatest common divisor of two unsigned integers.
pub fn gcd_u(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple; `lcm(0, _) = 0`.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u(a, b) * b
}

/// `a * b mod modulus` without overflow.
pub fn mod_mul(a: u64, b: u64, modulus: u64) -> u64 {
    debug_assert!(modulus >= 1);
    ((a as u128 * b as u128) % modulus as u128) as u64
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    debug_assert!(modulus >= 1);
    let mut base = base % modulus;
    let mut acc = 1 % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, modulus);
        }
        base = mod_mul(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub fn mod_inv(a: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(modulus as i128) as u64)
}

/// Canonical representative of `value` in `[0, modulus)`.
pub fn normalize(value: i64, modulus: u64) -> u64 {
    debug_assert!(modulus >= 1);
    (value as i128).rem_euclid(modulus as i128) as u64
}

/// `1 + r + r^2 + ... + r^(terms-1) mod modulus`, in O(log terms).
pub fn geometric_series_mod(ratio: u64, terms: u64, modulus: u64) -> u64 {
    if terms == 0 {
        return 0;
    }
    if terms % 2 == 1 {
        // 1 + r * (1 + ... + r^(terms-2))
        let rest = geometric_series_mod(ratio, terms - 1, modulus);
        (1 % modulus + mod_mul(ratio % modulus, rest, modulus)) % modulus
    } else {
        // (1 + r^(terms/2)) * (1 + ... + r^(terms/2 - 1))
        let half = geometric_series_mod(ratio, terms / 2, modulus);
        let lift = (1 + mod_pow(ratio, terms / 2, modulus) as u128) % modulus as u128;
        mod_mul(lift as u64, half, modulus)
    }
}

/// Deterministic trial-division primality test, adequate at desk scale.
pub fn is_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    if k.is_multiple_of(2) {
        return k == 2;
    }
    let mut d = 3;
    while d * d <= k {
        if k.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation as (prime, exponent) pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// All divisors of the factored integer, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.0 {
            let prev = out.clone();
            let mut power = 1u64;
            for _ in 0..e {
                power *= p;
                out.extend(prev.iter().map(|d| d * power));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Factorises `k >= 1` by trial division; `factorize(1)` is the empty product.
pub fn factorize(k: u64) -> Result<Factorization> {
    if k == 0 {
        return Err(Error::Invalid("cannot factorize 0".into()));
    }
    let mut rest = k;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(Factorization(out))
}

/// Divisors of `k >= 1`, sorted ascending.
pub fn divisors(k: u64) -> Result<Vec<u64>> {
    Ok(factorize(k)?.divisors())
}

/// Largest `e` with `q^e | k`; rejects `k = 0`, where the valuation is infinite.
pub fn valuation(k: u64, q: u64) -> Result<u32> {
    if k == 0 {
        return Err(Error::Invalid("valuation of 0 is undefined".into()));
    }
    if !is_prime(q) {
        return Err(Error::Invalid(format!("valuation base {q} is not prime")));
    }
    let mut e = 0;
    let mut rest = k;
    while rest.is_multiple_of(q) {
        rest /= q;
        e += 1;
    }
    Ok(e)
}

/// Solves a system of congruences `x = residue_i mod modulus_i` with pairwise
/// coprime moduli. Returns `(residue, product of moduli)` with the residue
/// canonical in `[0, product)`.
pub fn crt_solve(congruences: &[(i64, u64)]) -> Result<(u64, u64)> {
    let mut residue: u64 = 0;
    let mut modulus: u64 = 1;
    for &(r, m) in congruences {
        if m == 0 {
            return Err(Error::Invalid("zero modulus in congruence system".into()));
        }
        if gcd_u(modulus, m) != 1 {
            return Err(Error::Invalid(format!(
                "moduli are not pairwise coprime: gcd({modulus}, {m}) = {}",
                gcd_u(modulus, m)
            )));
        }
        let r = normalize(r, m);
        // x = residue + modulus * t with t chosen so x = r mod m
        let inv = mod_inv(modulus % m, m).expect("coprime by check above");
        let diff = (r + m - residue % m) % m;
        let t = mod_mul(diff, inv, m);
        residue += modulus * t;
        modulus *= m;
    }
    Ok((residue, modulus))
}

/// Least `t >= 1` with `a^t = 1 mod modulus`; requires `gcd(a, modulus) = 1`.
pub fn mult_order(a: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::Invalid("order modulo 0 is undefined".into()));
    }
    let a = a % modulus.max(1);
    if modulus == 1 {
        return Ok(1);
    }
    if gcd_u(a, modulus) != 1 {
        return Err(Error::Invalid(format!(
            "{a} is not a unit mod {modulus}: gcd = {}",
            gcd_u(a, modulus)
        )));
    }
    // The order divides phi(modulus); factor phi and strip primes.
    let phi: u64 = factorize(modulus)?
        .factors()
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product();
    let mut order = phi;
    for &(q, _) in factorize(phi)?.factors() {
        while order.is_multiple_of(q) && mod_pow(a, order / q, modulus) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Input to the gcd-witness construction: find `gamma` coprime to `n` with
/// `gcd(gamma - a^i, n) = targets[i]` for `i = 0, ..., p-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessProblem {
    n: u64,
    p: u64,
    a: u64,
    targets: Vec<u64>,
}

impl WitnessProblem {
    pub fn new(n: u64, p: u64, a: u64, targets: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("witness modulus n must be positive".into()));
        }
        if !is_prime(p) {
            return Err(Error::Invalid(format!(
                "witness parameter p = {p} is not prime"
            )));
        }
        if n.is_multiple_of(p) {
            return Err(Error::Invalid(format!("p = {p} must not divide n = {n}")));
        }
        if targets.len() != p as usize {
            return Err(Error::Invalid(format!(
                "expected {p} target divisors, got {}",
                targets.len()
            )));
        }
        let a = a % n.max(1);
        if gcd_u(a, n) != 1 {
            return Err(Error::Invalid(format!("a = {a} is not a unit mod {n}")));
        }
        if gcd_u((a + n - 1) % n, n) != 1 {
            return Err(Error::Invalid(format!(
                "a - 1 = {} is not coprime to {n}",
                a + n - 1
            )));
        }
        if n > 1 && mult_order(a, n)? != p {
            return Err(Error::Invalid(format!(
                "a = {a} has order {} mod {n}, expected {p}",
                mult_order(a, n)?
            )));
        }
        for (i, &d) in targets.iter().enumerate() {
            if d == 0 || !n.is_multiple_of(d) {
                return Err(Error::Invalid(format!(
                    "target d_{i} = {d} does not divide {n}"
                )));
            }
            for (j, &d2) in targets.iter().enumerate().skip(i + 1) {
                if gcd_u(d, d2) != 1 {
                    return Err(Error::Invalid(format!(
                        "targets d_{i} = {d} and d_{j} = {d2} are not coprime"
                    )));
                }
            }
        }
        if p == 2 && n.is_multiple_of(3) && !(targets[0] * targets[1]).is_multiple_of(3) {
            return Err(Error::Invalid(
                "3 divides n, so one of d_0, d_1 must be a multiple of 3".into(),
            ));
        }
        Ok(Self { n, p, a, targets })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    /// Checks the defining conditions against a candidate witness.
    pub fn is_witness(&self, gamma: u64) -> bool {
        if gcd_u(gamma % self.n, self.n) != 1 {
            return false;
        }
        self.targets.iter().enumerate().all(|(i, &d)| {
            let ai = mod_pow(self.a, i as u64, self.n);
            gcd_u((gamma % self.n + self.n - ai) % self.n, self.n) == d
        })
    }
}

/// Constructs a witness for `problem` by the congruence system
/// `x - a^i = q^e(i,q) mod q^e(q)` over the prime powers of `n`, closed off
/// with `x = -1 mod q` (odd p) or `x = 3 mod q` (p = 2) on the unused primes.
/// The result is verified against the problem before being returned.
pub fn gcd_witness(problem: &WitnessProblem) -> Result<u64> {
    let n = problem.n;
    if n == 1 {
        return Ok(0);
    }
    let factors = factorize(n)?;
    let mut congruences: Vec<(i64, u64)> = Vec::new();
    let mut leftover: u64 = 1;
    for &(q, e) in factors.factors() {
        let qe = q.pow(e);
        let mut used = false;
        for (i, &d) in problem.targets.iter().enumerate() {
            let eiq = valuation(d, q)?;
            if eiq >= 1 {
                let ai = mod_pow(problem.a, i as u64, qe);
                congruences.push(((ai + q.pow(eiq)) as i64, qe));
                used = true;
                break; // targets are pairwise coprime, so q lies in at most one
            }
        }
        if !used {
            leftover *= qe;
        }
    }
    if leftover > 1 {
        let residue = if problem.p == 2 { 3 } else { -1 };
        congruences.push((residue, leftover));
    }
    let (gamma, modulus) = crt_solve(&congruences)?;
    debug_assert_eq!(modulus, n);
    if !problem.is_witness(gamma) {
        return Err(Error::Invalid(format!(
            "constructed gamma = {gamma} fails the witness conditions for {problem:?}"
        )));
    }
    Ok(gamma)
}

/// A unit `gamma mod n` with `gcd(gamma - 1, n) = d`. Requires `d | n`, and
/// `d` even when `n` is even; those are exactly the realisable fixed-point
/// counts of automorphisms of a cyclic group of order `n`.
pub fn unit_with_gcd(n: u64, d: u64) -> Result<u64> {
    if n == 0 || d == 0 || !n.is_multiple_of(d) {
        return Err(Error::Invalid(format!("d = {d} must divide n = {n}")));
    }
    if n.is_multiple_of(2) && !d.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "n = {n} is even, so gcd(gamma - 1, n) is even; d = {d} is unreachable"
        )));
    }
    if n == 1 {
        return Ok(0);
    }
    let mut congruences: Vec<(i64, u64)> = Vec::new();
    let mut leftover: u64 = 1;
    for &(q, e) in factorize(n)?.factors() {
        let f = valuation(d, q)?;
        if f >= 1 {
            congruences.push(((1 + q.pow(f).min(q.pow(e))) as i64, q.pow(e)));
        } else {
            leftover *= q.pow(e);
        }
    }
    if leftover > 1 {
        congruences.push((-1, leftover));
    }
    let (gamma, _) = crt_solve(&congruences)?;
    debug_assert_eq!(gcd_u(gamma, n), 1);
    debug_assert_eq!(gcd_u((gamma + n - 1) % n, n), d);
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(2, 8), 2); // gcd(gamma - 1, n) for gamma = 3, n = 8
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(gcd(-4, 6), 2);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap().factors(), &[]);
        assert_eq!(factorize(35).unwrap().factors(), &[(5, 1), (7, 1)]);
        assert_eq!(factorize(360).unwrap().factors(), &[(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(24, 2).unwrap(), 3);
        assert_eq!(valuation(7, 2).unwrap(), 0);
        assert_eq!(valuation(3u64.pow(5), 3).unwrap(), 5);
        assert!(valuation(0, 2).is_err());
        assert!(valuation(8, 4).is_err());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(&[(1, 3), (2, 5)]).unwrap(), (7, 15));
        assert_eq!(crt_solve(&[(0, 1)]).unwrap(), (0, 1));
        assert!(crt_solve(&[(1, 4), (2, 6)]).is_err());
        // shape used by the inversion-case realisation path: z = gamma_1 mod n,
        // z = 1 + 2^(e+1) mod 2^m
        let (z, md) = crt_solve(&[(4, 15), (1 + 4, 8)]).unwrap();
        assert_eq!(md, 120);
        assert_eq!(z % 15, 4);
        assert_eq!(z % 8, 5);
    }

    #[test]
    fn mult_order_examples() {
        // direct powering oracle: 4, 7, 1 mod 9
        let mut x = 1u64;
        let mut by_powering = 0;
        for t in 1..=6 {
            x = x * 4 % 9;
            if x == 1 {
                by_powering = t;
                break;
            }
        }
        assert_eq!(by_powering, 3);
        assert_eq!(mult_order(4, 9).unwrap(), 3);
        assert_eq!(mult_order(1, 17).unwrap(), 1);
        assert_eq!(mult_order(7, 8).unwrap(), 2); // -1 mod 8
        assert!(mult_order(6, 9).is_err());
    }

    #[test]
    fn geometric_series_matches_naive() {
        for (r, t, m) in [(3u64, 7u64, 100u64), (1, 5, 9), (10, 0, 7), (2, 13, 1)] {
            let naive = (0..t).fold(0u64, |acc, i| (acc + mod_pow(r, i, m)) % m);
            assert_eq!(geometric_series_mod(r, t, m), naive);
        }
    }

    #[test]
    fn witness_small_case() {
        // n = 35, p = 2, a = 34 = -1: exhaustive search oracle over residues mod 35
        let problem = WitnessProblem::new(35, 2, 34, vec![5, 7]).unwrap();
        let valid: Vec<u64> = (0..35).filter(|&g| problem.is_witness(g)).collect();
        assert!(valid.contains(&6));
        let gamma = gcd_witness(&problem).unwrap();
        assert!(valid.contains(&gamma));
    }

    #[test]
    fn witness_degenerate_n() {
        let problem = WitnessProblem::new(1, 2, 0, vec![1, 1]).unwrap();
        assert_eq!(gcd_witness(&problem).unwrap(), 0);
    }

    #[test]
    fn witness_rejects_bad_input() {
        assert!(WitnessProblem::new(35, 2, 34, vec![5, 5]).is_err()); // not coprime
        assert!(WitnessProblem::new(35, 2, 34, vec![3, 7]).is_err()); // 3 does not divide 35
        assert!(WitnessProblem::new(15, 2, 14, vec![5, 1]).is_err()); // 3 | n, 3 unused
        assert!(WitnessProblem::new(35, 2, 6, vec![5, 7]).is_err()); // a has order 2? 6^2 = 1 mod 35, yes: gcd(a-1,n)=5 fails
        assert!(WitnessProblem::new(35, 3, 34, vec![5, 7, 1]).is_err()); // order 2, not 3
    }

    #[test]
    fn witness_with_odd_p() {
        // n = 7 * 13, a of order 3 mod both factors
        let (a, _) = crt_solve(&[(2, 7), (3, 13)]).unwrap();
        let problem = WitnessProblem::new(91, 3, a, vec![7, 13, 1]).unwrap();
        let gamma = gcd_witness(&problem).unwrap();
        assert!(problem.is_witness(gamma));
    }

    #[test]
    fn unit_with_gcd_examples() {
        for (n, d) in [
            (35u64, 5u64),
            (35, 1),
            (35, 35),
            (12, 2),
            (12, 4),
            (9, 3),
            (2, 2),
        ] {
            let g = unit_with_gcd(n, d).unwrap();
            assert_eq!(gcd_u(g, n), 1);
            assert_eq!(gcd_u((g + n - 1) % n, n), d);
        }
        assert!(unit_with_gcd(12, 3).is_err());
        assert!(unit_with_gcd(12, 5).is_err());
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(k in 1u64..200_000) {
            let f = factorize(k).unwrap();
            prop_assert_eq!(f.value(), k);
            let primes: Vec<u64> = f.factors().iter().map(|&(p, _)| p).collect();
            prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(f.factors().iter().all(|&(p, e)| is_prime(p) && e >= 1));
        }

        #[test]
        fn divisor_list_is_complete(k in 1u64..5_000) {
            let ds = divisors(k).unwrap();
            let brute: Vec<u64> = (1..=k).filter(|d| k % d == 0).collect();
            prop_assert_eq!(ds, brute);
        }

        #[test]
        fn crt_satisfies_all_congruences(
            r1 in -50i64..50, r2 in -50i64..50, r3 in -50i64..50,
        ) {
            let system = [(r1, 8u64), (r2, 9u64), (r3, 35u64)];
            let (x, m) = crt_solve(&system).unwrap();
            prop_assert_eq!(m, 8 * 9 * 35);
            for (r, md) in system {
                prop_assert_eq!(x % md, normalize(r, md));
            }
            // uniqueness mod the product: solving in any order agrees
            let permuted = [system[2], system[0], system[1]];
            prop_assert_eq!(crt_solve(&permuted).unwrap(), (x, m));
        }

        #[test]
        fn gcd_is_residue_invariant(gamma in 0i64..1000, c in -5i64..5, n in 1i64..500) {
            // gcd(gamma - 1, n) only depends on gamma mod n
            prop_assert_eq!(gcd(gamma - 1, n), gcd(gamma + c * n - 1, n));
        }

        #[test]
        fn valuation_is_exact(k in 1u64..100_000, qi in 0usize..3) {
            let q = [2u64, 3, 5][qi];
            let v = valuation(k, q).unwrap();
            prop_assert_eq!(k % q.pow(v), 0);
            prop_assert_ne!(k % q.pow(v + 1), 0);
        }

        #[test]
        fn mult_order_divides_and_is_minimal(a in 2u64..300, n in 2u64..300) {
            prop_assume!(gcd_u(a, n) == 1);
            let t = mult_order(a, n).unwrap();
            prop_assert_eq!(mod_pow(a, t, n), 1);
            for s in 1..t {
                prop_assert_ne!(mod_pow(a, s, n), 1);
            }
        }
    }
}
