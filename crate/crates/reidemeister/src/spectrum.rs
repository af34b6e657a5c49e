//! Closed-form Reidemeister spectra: the spectrum of a cyclic group, the
//! divisor-tuple sets the case formulas range over, the classification of
//! the action into its five shapes, one formula per shape, and the
//! direct-product assembly of the full spectrum. The realisation path
//! constructs, for every predicted value, an explicit automorphism
//! attaining it, so the formulas never claim a value no map achieves.

use crate::autos::Automorphism;
use crate::group::{decompose_fixed_part, GroupElement, SmcGroup};
use crate::modarith::{
    crt_solve, divisors, factorize, gcd_u, gcd_witness, mod_inv, mod_pow, normalize, unit_with_gcd,
    WitnessProblem,
};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// A finite set of natural numbers, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum(Vec<u64>);

impl Spectrum {
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Spectrum(v)
    }

    pub fn singleton(value: u64) -> Self {
        Spectrum(vec![value])
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.0.binary_search(&value).is_ok()
    }

    /// `{a * b : a in self, b in other}`.
    pub fn set_product(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_values(
            self.0
                .iter()
                .flat_map(|&a| other.0.iter().map(move |&b| a * b)),
        )
    }

    /// `{a + b : a in self, b in other}`.
    pub fn set_sum(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_values(
            self.0
                .iter()
                .flat_map(|&a| other.0.iter().map(move |&b| a + b)),
        )
    }

    pub fn union(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_values(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl std::fmt::Display for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Spectrum of the cyclic group `C_n`: every divisor of `n` when `n` is odd,
/// the even divisors when `n` is even, `{1}` for `n = 1`.
pub fn spec_cyclic(n: u64) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::Invalid("cyclic group order must be positive".into()));
    }
    let ds = divisors(n)?;
    Ok(Spectrum::from_values(
        ds.into_iter()
            .filter(|&d| !n.is_multiple_of(2) || d % 2 == 0),
    ))
}

/// All `b`-tuples of pairwise coprime divisors of `a`; with `require3`, only
/// the tuples with some coordinate divisible by 3.
pub fn divisor_tuples(a: u64, b: u32, require3: bool) -> Result<Vec<Vec<u64>>> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid(
            "divisor tuples need a >= 1 and b >= 1".into(),
        ));
    }
    let mut tuples: Vec<Vec<u64>> = vec![vec![1; b as usize]];
    // pairwise coprimality means each prime power of `a` goes to at most one slot
    for &(q, e) in factorize(a)?.factors() {
        let mut next = Vec::with_capacity(tuples.len() * (1 + b as usize * e as usize));
        for t in tuples {
            next.push(t.clone());
            for slot in 0..b as usize {
                let mut power = 1u64;
                for _ in 0..e {
                    power *= q;
                    let mut t2 = t.clone();
                    t2[slot] *= power;
                    next.push(t2);
                }
            }
        }
        tuples = next;
    }
    if require3 {
        tuples.retain(|t| t.iter().any(|&d| d % 3 == 0));
    }
    Ok(tuples)
}

/// The shape of a freely-acting, non-trivial action, which selects the
/// spectrum formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// `alpha = 1 mod p^m` (in particular whenever `m <= 1`); needs `n >= 2`.
    TrivialPPart,
    /// `alpha = beta * p^(m-1) + 1 mod p^m` with `beta != 0` and `n >= 2`.
    NontrivialPPart { beta: u64 },
    /// `p = 2`, `alpha = -1 mod 2^m` (hence `-1 mod N`), `m >= 2`.
    P2Inversion,
    /// `p = 2`, `alpha = 2^(m-1) - 1 mod 2^m`, `m >= 3`.
    P2Case2,
    /// `n = 1`: the p-groups `C_(p^m) : C_p` with `alpha = beta * p^(m-1) + 1`.
    PGroup { beta: u64 },
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::TrivialPPart => write!(f, "trivial-p-part"),
            CaseTag::NontrivialPPart { beta } => write!(f, "nontrivial-p-part(beta={beta})"),
            CaseTag::P2Inversion => write!(f, "p2-inversion"),
            CaseTag::P2Case2 => write!(f, "p2-case2"),
            CaseTag::PGroup { beta } => write!(f, "p-group(beta={beta})"),
        }
    }
}

/// Classifies reduced parameters (free action on `C_n_free`) into the case
/// their spectrum formula belongs to.
pub fn classify_case(n_free: u64, m: u32, p: u64, alpha: u64) -> Result<CaseTag> {
    if n_free == 0 || !crate::modarith::is_prime(p) || n_free.is_multiple_of(p) {
        return Err(Error::Invalid(format!(
            "need n >= 1, p prime, gcd(n, p) = 1; got n = {n_free}, p = {p}"
        )));
    }
    let nm = n_free * p.pow(m);
    let alpha = alpha % nm;
    if gcd_u(alpha, nm) != 1 || mod_pow(alpha, p, nm) != 1 % nm {
        return Err(Error::Invalid(format!(
            "alpha = {alpha} is not an order-dividing-p unit mod {nm}"
        )));
    }
    if alpha == 1 % nm {
        return Err(Error::Invalid("the action is trivial".into()));
    }
    if gcd_u((alpha + n_free - 1) % n_free.max(1), n_free) != 1 {
        return Err(Error::Invalid(format!(
            "alpha = {alpha} does not act freely on the C_{n_free} part; decompose first"
        )));
    }
    let pm = p.pow(m);
    let ap = alpha % pm;
    if m == 0 || ap == 1 {
        if n_free < 2 {
            return Err(Error::Invalid("the action is trivial".into()));
        }
        return Ok(CaseTag::TrivialPPart);
    }
    // now m >= 2: an order-p unit mod p^m other than 1 cannot exist for m = 1
    if p == 2 {
        let half = pm / 2;
        if ap == pm - 1 {
            return Ok(CaseTag::P2Inversion);
        }
        if m >= 3 && ap == half - 1 {
            return Ok(CaseTag::P2Case2);
        }
        if m >= 3 && ap == half + 1 {
            return Ok(if n_free >= 2 {
                CaseTag::NontrivialPPart { beta: 1 }
            } else {
                CaseTag::PGroup { beta: 1 }
            });
        }
        return Err(Error::Invalid(format!(
            "alpha = {alpha} mod 2^{m} is not an order-2 unit"
        )));
    }
    let step = p.pow(m - 1);
    if ap % step != 1 {
        return Err(Error::Invalid(format!(
            "alpha = {alpha} has order p but is not 1 mod p^(m-1); no such action exists"
        )));
    }
    let beta = (ap - 1) / step;
    debug_assert!(beta >= 1 && beta < p);
    Ok(if n_free >= 2 {
        CaseTag::NontrivialPPart { beta }
    } else {
        CaseTag::PGroup { beta }
    })
}

fn check_free_part(n: u64, p: u64) -> Result<()> {
    for &(q, _) in factorize(n)?.factors() {
        if q % p != 1 {
            return Err(Error::Invalid(format!(
                "no free action: prime factor {q} of n is not 1 mod {p}"
            )));
        }
    }
    Ok(())
}

/// Spectrum for a free action on `C_n` that is trivial on `C_(p^m)`.
pub fn spec_trivial_ppart(n: u64, m: u32, p: u64) -> Result<Spectrum> {
    if n < 2 {
        return Err(Error::Invalid("trivial-p-part case needs n >= 2".into()));
    }
    check_free_part(n, p)?;
    let tuples = divisor_tuples(n, p as u32, p == 2 && n.is_multiple_of(3))?;
    let mut values = BTreeSet::new();
    for t in &tuples {
        let sum: u64 = t.iter().map(|&d| d - 1).sum();
        assert_eq!(sum % p, 0, "each d_i is 1 mod p, so the sum divides out");
        let s = sum / p;
        if m == 0 {
            values.insert(p + s);
        } else {
            let lo = if p == 2 { 1 } else { 0 };
            for e in lo..=m {
                values.insert(p.pow(e + 1) + p.pow(e) * s);
            }
            values.insert(p.pow(m) + p.pow(m) * s);
        }
    }
    Ok(Spectrum::from_values(values))
}

/// Spectrum for a free action on `C_n` (`n >= 2`) with
/// `alpha = beta * p^(m-1) + 1 mod p^m`, `beta != 0`. The tuples run over
/// pairwise coprime divisors of `n * p`, with a p-divisible coordinate
/// exactly when `e = m - 1`.
pub fn spec_nontrivial_ppart(n: u64, m: u32, p: u64, beta: u64) -> Result<Spectrum> {
    if n < 2 || m < 2 {
        return Err(Error::Invalid(
            "nontrivial-p-part case needs n >= 2 and m >= 2".into(),
        ));
    }
    if beta == 0 || beta >= p {
        return Err(Error::Invalid(format!("beta = {beta} must lie in 1..{p}")));
    }
    if p == 2 && m < 3 {
        return Err(Error::Invalid(
            "p = 2 with m = 2 is the inversion case, not nontrivial-p-part".into(),
        ));
    }
    check_free_part(n, p)?;
    let tuples = divisor_tuples(n * p, p as u32, p == 2 && n.is_multiple_of(3))?;
    let lo = if p == 2 { 1 } else { 0 };
    let mut values = BTreeSet::new();
    for t in &tuples {
        let has_p = t.iter().any(|&d| d % p == 0);
        let sum: u64 = t.iter().map(|&d| d - 1).sum();
        for e in lo..=m - 1 {
            if has_p != (e == m - 1) {
                continue;
            }
            let value = if e >= 1 {
                p.pow(e + 1) + p.pow(e - 1) * sum
            } else {
                assert_eq!(sum % p, 0);
                p + sum / p
            };
            values.insert(value);
        }
    }
    Ok(Spectrum::from_values(values))
}

/// Spectrum for `p = 2`, `alpha = -1 mod N`, `m >= 2` (any odd `n >= 1`).
pub fn spec_p2_inversion(n: u64, m: u32) -> Result<Spectrum> {
    if m < 2 || n.is_multiple_of(2) {
        return Err(Error::Invalid(
            "inversion case needs m >= 2 and n odd".into(),
        ));
    }
    let tuples = divisor_tuples(n, 2, n.is_multiple_of(3))?;
    let mut inner = BTreeSet::new();
    for t in &tuples {
        for e in 1..=m - 1 {
            inner.insert(2u64.pow(e) * t[0] + t[1] - 2);
        }
    }
    Ok(Spectrum::from_values([2, 4]).set_sum(&Spectrum::from_values(inner)))
}

/// Spectrum for `p = 2`, `alpha = 2^(m-1) n - 1 mod N`, `m >= 3`.
pub fn spec_p2_case2(n: u64, m: u32) -> Result<Spectrum> {
    if m < 3 || n.is_multiple_of(2) {
        return Err(Error::Invalid(
            "second p = 2 case needs m >= 3 and n odd".into(),
        ));
    }
    let tuples = divisor_tuples(n, 2, n.is_multiple_of(3))?;
    let mut values = BTreeSet::new();
    for t in &tuples {
        for e in 1..=m - 1 {
            values.insert(2u64.pow(e) * t[0] + t[1] + 2);
        }
    }
    Ok(Spectrum::from_values(values))
}

/// Spectrum of the p-groups `C_(p^m) : C_p`, independent of `beta`.
pub fn spec_pgroup(m: u32, p: u64) -> Result<Spectrum> {
    if !crate::modarith::is_prime(p) {
        return Err(Error::Invalid(format!("p = {p} is not prime")));
    }
    if (p == 2 && m < 3) || (p != 2 && m < 2) {
        return Err(Error::Invalid(format!(
            "no nontrivial beta-form action on C_{p}^{m} : C_{p}"
        )));
    }
    let mut values: BTreeSet<u64> = if p == 2 {
        (2..=m - 1).map(|i| p.pow(i)).collect()
    } else {
        (1..=m - 1).map(|i| p.pow(i)).collect()
    };
    values.insert(2 * p.pow(m - 1) - p.pow(m - 2));
    values.insert(p.pow(m) + p.pow(m - 1) - p.pow(m - 2));
    Ok(Spectrum::from_values(values))
}

/// Full spectrum of `(C_n x C_(p^m)) :_alpha C_p`: split off the fixed part
/// `H`, classify the reduced action, and multiply the cyclic spectrum of `H`
/// with the case formula.
pub fn spec_full(n: u64, m: u32, p: u64, alpha: i64) -> Result<Spectrum> {
    let nm = p
        .checked_pow(m)
        .and_then(|pm| pm.checked_mul(n))
        .ok_or_else(|| Error::Invalid("n * p^m overflows".into()))?;
    let alpha = normalize(alpha, nm.max(1));
    if alpha == 1 % nm.max(1) {
        return Err(Error::Invalid("the action is trivial".into()));
    }
    let part = decompose_fixed_part(n, m, p, alpha)?;
    let case = classify_case(part.free_n, m, p, part.reduced_alpha)?;
    let inner = match case {
        CaseTag::TrivialPPart => spec_trivial_ppart(part.free_n, m, p)?,
        CaseTag::NontrivialPPart { beta } => spec_nontrivial_ppart(part.free_n, m, p, beta)?,
        CaseTag::P2Inversion => spec_p2_inversion(part.free_n, m)?,
        CaseTag::P2Case2 => spec_p2_case2(part.free_n, m)?,
        CaseTag::PGroup { beta: _ } => spec_pgroup(m, p)?,
    };
    Ok(spec_cyclic(part.fixed_order)?.set_product(&inner))
}

/// One automorphism per predicted spectrum value: a gcd witness on the free
/// part, CRT-merged with `1 + p^e` on the p-part, paired over the direct
/// factors. Returns `(predicted R, automorphism)` pairs whose values cover
/// the whole closed-form spectrum of the group.
pub fn realization_witnesses(group: &SmcGroup) -> Result<Vec<(u64, Automorphism)>> {
    let (h, reduced) = group.decompose();
    let case = classify_case(reduced.n(), reduced.m(), reduced.p(), reduced.alpha())?;
    let inner = reduced_witnesses(&reduced, case)?;
    let mut out = Vec::new();
    let rm = reduced.cyclic_order();
    for &d in spec_cyclic(h)?.values() {
        let u = unit_with_gcd(h, d)?;
        for &(value, ix, iy) in &inner {
            let img_x = GroupElement {
                xexp: crt_pair(u, h, ix.xexp, rm),
                yexp: ix.yexp,
            };
            let img_y = GroupElement {
                xexp: crt_pair(0, h, iy.xexp, rm),
                yexp: iy.yexp,
            };
            out.push((d * value, Automorphism::new(group, img_x, img_y)?));
        }
    }
    Ok(out)
}

fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    crt_solve(&[(r1 as i64, m1), (r2 as i64, m2)])
        .expect("moduli coprime by construction")
        .0
}

/// Witnesses on the reduced group, as (value, image of x, image of y).
fn reduced_witnesses(
    group: &SmcGroup,
    case: CaseTag,
) -> Result<Vec<(u64, GroupElement, GroupElement)>> {
    let n = group.n();
    let m = group.m();
    let p = group.p();
    let pm = group.p_power();
    let big_n = group.cyclic_order();
    let a_mod_n = group.alpha() % n;
    let mut out = Vec::new();
    match case {
        CaseTag::TrivialPPart => {
            let tuples = divisor_tuples(n, p as u32, p == 2 && n.is_multiple_of(3))?;
            for t in &tuples {
                let sum: u64 = t.iter().map(|&d| d - 1).sum();
                let s = sum / p;
                let g1 = gcd_witness(&WitnessProblem::new(n, p, a_mod_n, t.clone())?)?;
                if m == 0 {
                    out.push((p + s, GroupElement { xexp: g1, yexp: 0 }, group.gen_y()));
                    continue;
                }
                let lo = if p == 2 { 1 } else { 0 };
                for e in lo..=m {
                    let gamma = crt_pair(g1, n, (1 + p.pow(e)) % pm, pm);
                    out.push((
                        p.pow(e + 1) + p.pow(e) * s,
                        GroupElement {
                            xexp: gamma,
                            yexp: 0,
                        },
                        group.gen_y(),
                    ));
                }
                // second family: gamma = 1 mod p^m, phi(y) = x^(n p^(m-1)) y
                let gamma = crt_pair(g1, n, 1, pm);
                out.push((
                    p.pow(m) + p.pow(m) * s,
                    GroupElement {
                        xexp: gamma,
                        yexp: 0,
                    },
                    GroupElement {
                        xexp: n * p.pow(m - 1) % big_n,
                        yexp: 1,
                    },
                ));
            }
        }
        CaseTag::NontrivialPPart { beta } => {
            let tuples = divisor_tuples(n * p, p as u32, p == 2 && n.is_multiple_of(3))?;
            let lo = if p == 2 { 1 } else { 0 };
            let target = mod_inv(beta, p).expect("beta is a unit mod p") as usize;
            for t in &tuples {
                let has_p = t.iter().any(|&d| d % p == 0);
                let sum: u64 = t.iter().map(|&d| d - 1).sum();
                for e in lo..=m - 1 {
                    if has_p != (e == m - 1) {
                        continue;
                    }
                    // the p-divisible coordinate must sit at index beta^-1,
                    // where the p-part gcd picks up its extra factor
                    let mut arranged = t.clone();
                    if let Some(k) = arranged.iter().position(|&d| d % p == 0) {
                        arranged.swap(k, target);
                    }
                    let stripped: Vec<u64> = arranged
                        .iter()
                        .map(|&d| if d % p == 0 { d / p } else { d })
                        .collect();
                    let g1 = gcd_witness(&WitnessProblem::new(n, p, a_mod_n, stripped)?)?;
                    let gamma = crt_pair(g1, n, (1 + p.pow(e)) % pm, pm);
                    let value = if e >= 1 {
                        p.pow(e + 1) + p.pow(e - 1) * sum
                    } else {
                        p + sum / p
                    };
                    out.push((
                        value,
                        GroupElement {
                            xexp: gamma,
                            yexp: 0,
                        },
                        group.gen_y(),
                    ));
                }
            }
        }
        CaseTag::P2Inversion => {
            let tuples = divisor_tuples(n, 2, n.is_multiple_of(3))?;
            for t in &tuples {
                let g1 = gcd_witness(&WitnessProblem::new(n, 2, a_mod_n, t.clone())?)?;
                for e in 1..=m - 1 {
                    let gamma = crt_pair(g1, n, (1 + 2u64.pow(e + 1)) % pm, pm);
                    let base = 2u64.pow(e) * t[0] + t[1] - 2;
                    let img_x = GroupElement {
                        xexp: gamma,
                        yexp: 0,
                    };
                    out.push((base + 4, img_x, group.gen_y()));
                    out.push((base + 2, img_x, GroupElement { xexp: 1, yexp: 1 }));
                }
            }
        }
        CaseTag::P2Case2 => {
            let tuples = divisor_tuples(n, 2, n.is_multiple_of(3))?;
            for t in &tuples {
                let g1 = gcd_witness(&WitnessProblem::new(n, 2, a_mod_n, t.clone())?)?;
                for e in 1..=m - 1 {
                    let gamma = crt_pair(g1, n, (1 + 2u64.pow(e + 1)) % pm, pm);
                    out.push((
                        2u64.pow(e) * t[0] + t[1] + 2,
                        GroupElement {
                            xexp: gamma,
                            yexp: 0,
                        },
                        group.gen_y(),
                    ));
                }
            }
        }
        CaseTag::PGroup { beta: _ } => {
            let start = if p == 2 { 1 } else { 0 };
            for i in start..=m - 1 {
                let value = if i <= m - 2 {
                    p.pow(i + 1)
                } else {
                    p.pow(m) + p.pow(m - 2) * (p - 1)
                };
                out.push((
                    value,
                    GroupElement {
                        xexp: (p.pow(i) + 1) % big_n,
                        yexp: 0,
                    },
                    group.gen_y(),
                ));
            }
            // x -> x^a y with ord_p(a - 1) forcing every p-dimensional
            // character to stay fixed: a = p^(m-1) + 1 for odd p, where
            // phi(x^p) = x^p, but a = 2^(m-2) + 1 for p = 2, where the
            // square picks up an extra twist
            let a = if p == 2 {
                p.pow(m - 2) + 1
            } else {
                p.pow(m - 1) + 1
            };
            out.push((
                2 * p.pow(m - 1) - p.pow(m - 2),
                GroupElement {
                    xexp: a % big_n,
                    yexp: 1,
                },
                group.gen_y(),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::{reidemeister_spectrum_bruteforce, reidemeister_via_classes};
    use crate::Budget;
    use proptest::prelude::*;

    fn budget() -> Budget {
        Budget {
            max_group_order: 10_000,
            max_automorphisms: 1_000_000,
        }
    }

    #[test]
    fn cyclic_spectra() {
        assert_eq!(spec_cyclic(9).unwrap().values(), &[1, 3, 9]);
        assert_eq!(spec_cyclic(12).unwrap().values(), &[2, 4, 6, 12]);
        assert_eq!(spec_cyclic(1).unwrap().values(), &[1]);
    }

    #[test]
    fn set_algebra() {
        let a = Spectrum::from_values([1, 3]);
        let b = Spectrum::from_values([2, 4]);
        assert_eq!(a.set_product(&b).values(), &[2, 4, 6, 12]);
        assert_eq!(Spectrum::singleton(1).set_product(&b), b);
        assert_eq!(Spectrum::singleton(0).set_sum(&b), b);
        assert_eq!(
            Spectrum::from_values([2, 4])
                .set_sum(&Spectrum::singleton(1))
                .values(),
            &[3, 5]
        );
    }

    #[test]
    fn divisor_tuple_counts() {
        assert_eq!(divisor_tuples(15, 2, false).unwrap().len(), 9);
        assert_eq!(divisor_tuples(15, 2, true).unwrap().len(), 6);
        assert_eq!(divisor_tuples(1, 5, false).unwrap(), vec![vec![1; 5]]);
        // oracle: filter the full divisor grid by pairwise coprimality
        for (a, b) in [(12u64, 2u32), (30, 2), (21, 3), (8, 2)] {
            let ds = divisors(a).unwrap();
            let mut brute = Vec::new();
            let mut stack: Vec<Vec<u64>> = vec![Vec::new()];
            while let Some(t) = stack.pop() {
                if t.len() == b as usize {
                    brute.push(t);
                    continue;
                }
                for &d in &ds {
                    if t.iter().all(|&x| gcd_u(x, d) == 1) {
                        let mut t2 = t.clone();
                        t2.push(d);
                        stack.push(t2);
                    }
                }
            }
            let mut fast = divisor_tuples(a, b, false).unwrap();
            fast.sort();
            brute.sort();
            brute.dedup();
            assert_eq!(fast, brute, "D({a}, {b})");
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(5, 0, 2, 4).unwrap(), CaseTag::TrivialPPart);
        assert_eq!(
            classify_case(1, 2, 3, 4).unwrap(),
            CaseTag::PGroup { beta: 1 }
        );
        assert_eq!(
            classify_case(7, 3, 2, normalize(-1, 56)).unwrap(),
            CaseTag::P2Inversion
        );
        assert_eq!(classify_case(1, 3, 2, 3).unwrap(), CaseTag::P2Case2);
        assert_eq!(
            classify_case(7, 2, 3, crt_pair(2, 7, 4, 9)).unwrap(),
            CaseTag::NontrivialPPart { beta: 1 }
        );
        // m = 2, p = 2: 2^(m-1) + 1 = -1 mod 4, only the inversion tag applies
        assert_eq!(classify_case(1, 2, 2, 3).unwrap(), CaseTag::P2Inversion);
        assert!(classify_case(5, 0, 2, 1).is_err()); // trivial
        assert!(classify_case(15, 0, 2, 4).is_err()); // not free: 4 = 1 mod 3
    }

    #[test]
    fn pinned_spectra_match_theorems() {
        // D_5
        assert_eq!(spec_full(5, 0, 2, 4).unwrap().values(), &[2, 4]);
        // D_15 (3 | n, so the tuples need a coordinate divisible by 3)
        assert_eq!(spec_full(15, 0, 2, 14).unwrap().values(), &[3, 5, 9]);
        // C_9 : C_3
        assert_eq!(spec_full(1, 2, 3, 4).unwrap().values(), &[3, 5, 11]);
        // C_8 : C_2 with alpha = 3 = 2^(m-1) - 1
        assert_eq!(spec_full(1, 3, 2, 3).unwrap().values(), &[5, 7]);
        // C_8 : C_2 with alpha = 5 = 2^(m-1) + 1
        assert_eq!(spec_full(1, 3, 2, 5).unwrap().values(), &[4, 6, 10]);
        // D_4 = C_4 : C_2
        assert_eq!(spec_full(1, 2, 2, 3).unwrap().values(), &[3, 5]);
        // C_7 : C_3
        assert_eq!(spec_full(7, 0, 3, 2).unwrap().values(), &[3, 5]);
    }

    #[test]
    fn inversion_example_n3_m2() {
        assert_eq!(spec_p2_inversion(3, 2).unwrap().values(), &[5, 7, 9]);
        assert_eq!(spec_p2_inversion(1, 2).unwrap().values(), &[3, 5]);
    }

    #[test]
    fn larger_case_examples_match_bruteforce() {
        // nontrivial p-part, p odd: alpha of order 3 mod 7 and 4 mod 9
        let cases = [
            (7u64, 2u32, 3u64, crt_pair(2, 7, 4, 9) as i64), // |G| = 189
            (5, 3, 2, crt_pair(4, 5, 5, 8) as i64),          // |G| = 80, 2^(m-1)+1 branch
            (5, 3, 2, crt_pair(4, 5, 7, 8) as i64),          // |G| = 80, inversion
            (5, 3, 2, crt_pair(4, 5, 3, 8) as i64),          // |G| = 80, 2^(m-1)-1 branch
            (3, 3, 2, crt_pair(2, 3, 3, 8) as i64),          // |G| = 48, case 2 with 3 | n
        ];
        for (n, m, p, alpha) in cases {
            let group = SmcGroup::new(n, m, p, alpha).unwrap();
            assert_eq!(
                spec_full(n, m, p, alpha).unwrap(),
                reidemeister_spectrum_bruteforce(&group, &budget()).unwrap(),
                "{:?}",
                (n, m, p, alpha)
            );
        }
    }

    #[test]
    fn pgroup_closed_forms() {
        assert_eq!(spec_pgroup(2, 3).unwrap().values(), &[3, 5, 11]);
        assert_eq!(spec_pgroup(3, 3).unwrap().values(), &[3, 9, 15, 33]);
        assert_eq!(spec_pgroup(3, 2).unwrap().values(), &[4, 6, 10]);
        assert!(spec_pgroup(2, 2).is_err());
        assert!(spec_pgroup(1, 3).is_err());
    }

    #[test]
    fn decomposition_path() {
        // n = 35 with alpha = 1 mod 5, -1 mod 7: C_5 x D_7, and
        // Spec(D_7) = {2, 5}, so the product is {1, 5} * {2, 5}
        let alpha = crt_pair(1, 5, 6, 7) as i64;
        let spec = spec_full(35, 0, 2, alpha).unwrap();
        assert_eq!(spec.values(), &[2, 5, 10, 25]);
        let group = SmcGroup::new(35, 0, 2, alpha).unwrap();
        assert_eq!(
            spec,
            reidemeister_spectrum_bruteforce(&group, &budget()).unwrap()
        );
        assert!(spec_full(5, 0, 2, 1).is_err());
    }

    #[test]
    fn formula_matches_bruteforce_on_small_sweep() {
        for group in crate::group::enumerate_groups(96) {
            let formula = spec_full(group.n(), group.m(), group.p(), group.alpha() as i64).unwrap();
            let brute = reidemeister_spectrum_bruteforce(&group, &budget()).unwrap();
            assert_eq!(
                formula,
                brute,
                "group {:?}",
                (group.n(), group.m(), group.p(), group.alpha())
            );
        }
    }

    #[test]
    fn witnesses_realize_their_values() {
        for group in crate::group::enumerate_groups(96) {
            let classes = group.conjugacy_classes(&budget()).unwrap();
            let spec = spec_full(group.n(), group.m(), group.p(), group.alpha() as i64).unwrap();
            let witnesses = realization_witnesses(&group).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for (predicted, phi) in &witnesses {
                assert_eq!(
                    reidemeister_via_classes(&group, &classes, phi),
                    *predicted,
                    "group {:?}",
                    (group.n(), group.m(), group.p(), group.alpha())
                );
                assert!(spec.contains(*predicted));
                seen.insert(*predicted);
            }
            assert_eq!(
                seen.into_iter().collect::<Vec<_>>(),
                spec.values().to_vec(),
                "witnesses must cover the whole spectrum of {:?}",
                (group.n(), group.m(), group.p(), group.alpha())
            );
        }
    }

    proptest! {
        #[test]
        fn set_ops_are_commutative_associative(
            a in proptest::collection::btree_set(1u64..50, 0..6),
            b in proptest::collection::btree_set(1u64..50, 0..6),
            c in proptest::collection::btree_set(1u64..50, 0..6),
        ) {
            let (a, b, c) = (
                Spectrum::from_values(a),
                Spectrum::from_values(b),
                Spectrum::from_values(c),
            );
            prop_assert_eq!(a.set_product(&b), b.set_product(&a));
            prop_assert_eq!(a.set_sum(&b), b.set_sum(&a));
            prop_assert_eq!(a.set_product(&b).set_product(&c), a.set_product(&b.set_product(&c)));
            prop_assert_eq!(a.set_sum(&b).set_sum(&c), a.set_sum(&b.set_sum(&c)));
        }

        #[test]
        fn divisor_tuples_are_valid(a in 1u64..400, b in 1u32..4) {
            for t in divisor_tuples(a, b, false).unwrap() {
                for (i, &d) in t.iter().enumerate() {
                    prop_assert_eq!(a % d, 0);
                    for &d2 in t.iter().skip(i + 1) {
                        prop_assert_eq!(gcd_u(d, d2), 1);
                    }
                }
            }
        }

        #[test]
        fn cyclic_spectrum_matches_unit_scan(n in 1u64..200) {
            let by_units: std::collections::BTreeSet<u64> = (1..=n)
                .filter(|&g| gcd_u(g, n) == 1)
                .map(|g| gcd_u((g + n - 1) % n, n))
                .collect();
            let by_units = if n == 1 {
                Spectrum::singleton(1)
            } else {
                Spectrum::from_values(by_units)
            };
            prop_assert_eq!(spec_cyclic(n).unwrap(), by_units);
        }
    }
}
