//! Characters of `(C_N) : C_p` and fixed-character counts. Every
//! irreducible character has dimension 1 or p: the 1-dimensional ones factor
//! through the abelianisation, the p-dimensional ones are induced from the
//! size-p orbits of the dual of `C_N`. Counting the characters fixed by
//! `chi -> chi . phi` recovers `R(phi)` independently of orbit counting.

use crate::autos::{abelianization_fixed_points, Automorphism};
use crate::group::{GroupElement, SmcGroup};
use crate::modarith::{gcd_u, mod_mul};
use crate::{Budget, Error, Result};

/// A character of `C_N`: `x^k -> zeta^(a k)` for a fixed primitive `N`-th
/// root of unity `zeta`, stored by its exponent `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualCharacter(pub u64);

/// An irreducible character of the whole group, named by the orbit of its
/// inducing dual character under `a -> a * alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InducedCharacter {
    /// Smallest exponent in the inducing orbit.
    pub orbit_min: u64,
    /// 1 or p.
    pub dimension: u64,
}

impl InducedCharacter {
    pub fn from_dual(group: &SmcGroup, chi: DualCharacter) -> Self {
        let n = group.cyclic_order();
        let a = chi.0 % n;
        let mut orbit_min = a;
        let mut size = 0u64;
        let mut cur = a;
        loop {
            orbit_min = orbit_min.min(cur);
            size += 1;
            cur = mod_mul(cur, group.alpha(), n);
            if cur == a {
                break;
            }
        }
        debug_assert!(size == 1 || size == group.p());
        InducedCharacter {
            orbit_min,
            dimension: if size == 1 { 1 } else { group.p() },
        }
    }
}

/// A formal sum of `N`-th roots of unity, kept as a sorted multiset of
/// exponents. `reduce` cancels full cycles `{c, c + N/p, ..., c + (p-1)N/p}`,
/// which sum to zero; the values produced by induced characters vanish
/// exactly when such cancellation empties the multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicSum {
    modulus: u64,
    exponents: Vec<u64>,
}

impl CyclotomicSum {
    pub fn new(modulus: u64, mut exponents: Vec<u64>) -> Self {
        for e in &mut exponents {
            *e %= modulus;
        }
        exponents.sort_unstable();
        Self { modulus, exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Removes every full `p`-cycle of step `modulus / p`.
    pub fn reduce(&self, p: u64) -> Self {
        assert_eq!(self.modulus % p, 0);
        let step = self.modulus / p;
        let mut counts: std::collections::BTreeMap<u64, u64> = Default::default();
        for &e in &self.exponents {
            *counts.entry(e).or_default() += 1;
        }
        for base in 0..step {
            let cycles = (0..p)
                .map(|k| counts.get(&(base + k * step)).copied().unwrap_or(0))
                .min()
                .unwrap_or(0);
            if cycles > 0 {
                for k in 0..p {
                    *counts.get_mut(&(base + k * step)).unwrap() -= cycles;
                }
            }
        }
        let exponents = counts
            .into_iter()
            .flat_map(|(e, c)| std::iter::repeat_n(e, c as usize))
            .collect();
        Self {
            modulus: self.modulus,
            exponents,
        }
    }

    pub fn is_zero(&self, p: u64) -> bool {
        self.reduce(p).exponents.is_empty()
    }
}

/// Value of the induced `p`-dimensional character of `chi` at `g`: zero off
/// `<x>`, and the orbit sum over `chi . alpha^i` on it.
pub fn induced_character_value(
    group: &SmcGroup,
    chi: DualCharacter,
    g: GroupElement,
) -> Result<CyclotomicSum> {
    let induced = InducedCharacter::from_dual(group, chi);
    if induced.dimension == 1 {
        return Err(Error::Invalid(format!(
            "chi_{} has a nontrivial stabiliser and induces a 1-dimensional character",
            chi.0
        )));
    }
    let n = group.cyclic_order();
    if g.yexp != 0 {
        return Ok(CyclotomicSum::new(n, Vec::new()));
    }
    let mut exponents = Vec::with_capacity(group.p() as usize);
    let mut coeff = chi.0 % n;
    for _ in 0..group.p() {
        exponents.push(mod_mul(coeff, g.xexp, n));
        coeff = mod_mul(coeff, group.alpha(), n);
    }
    Ok(CyclotomicSum::new(n, exponents))
}

/// Number of 1-dimensional characters fixed by `phi`: the fixed points of
/// the induced automorphism of `G/[G,G]`.
pub fn ch1_fixed(group: &SmcGroup, phi: &Automorphism) -> u64 {
    abelianization_fixed_points(group, phi)
}

/// Total number of 1-dimensional irreducible characters, `[G : [G,G]]`.
pub fn ch1_total(group: &SmcGroup) -> u64 {
    group.order() / group.commutator_subgroup_order()
}

/// Total number of p-dimensional irreducible characters, by counting the
/// size-p orbits of the dual of `C_N`.
pub fn chp_total(group: &SmcGroup, budget: &Budget) -> Result<u64> {
    budget.check_group(group.order(), "dual orbit enumeration")?;
    let n = group.cyclic_order();
    let mut visited = vec![false; n as usize];
    let mut count = 0;
    for a in 0..n {
        if visited[a as usize] {
            continue;
        }
        let size = mark_orbit(group, a, &mut visited);
        if size == group.p() {
            count += 1;
        }
    }
    Ok(count)
}

fn mark_orbit(group: &SmcGroup, start: u64, visited: &mut [bool]) -> u64 {
    let n = group.cyclic_order();
    let mut size = 0;
    let mut cur = start;
    loop {
        visited[cur as usize] = true;
        size += 1;
        cur = mod_mul(cur, group.alpha(), n);
        if cur == start {
            break;
        }
    }
    size
}

/// `ch_(p,phi)` by the gcd formula
/// `(1/p) sum_i gcd(gamma - alpha^i, N) - gcd(gamma - 1, alpha - 1, N)`,
/// where `phi(x) = x^gamma`. The division is exact; this is checked. For the
/// `n = 1` automorphisms that move `<x>` the formula does not apply and the
/// direct count is used instead.
pub fn chp_fixed(group: &SmcGroup, phi: &Automorphism, budget: &Budget) -> Result<u64> {
    let Some(gamma) = phi.gamma() else {
        return chp_fixed_direct(group, phi, budget);
    };
    let n = group.cyclic_order();
    let p = group.p();
    let mut sum = 0u64;
    let mut apow = 1 % n;
    for _ in 0..p {
        sum += gcd_u((gamma + n - apow) % n, n);
        apow = mod_mul(apow, group.alpha(), n);
    }
    assert_eq!(sum % p, 0, "orbit sum of gcds must be divisible by p");
    let shared = gcd_u(
        gcd_u((gamma + n - 1) % n, n),
        gcd_u((group.alpha() + n - 1) % n, n),
    );
    Ok(sum / p - shared)
}

/// `ch_(p,phi)` by explicit enumeration of the dual orbits, testing per
/// orbit whether some `i` has `chi . phi' = chi . alpha^i`; for the `n = 1`
/// groups whose `<x>` is not characteristic, the criterion is instead that
/// `chi` agrees with `chi . phi` on the centre.
pub fn chp_fixed_direct(group: &SmcGroup, phi: &Automorphism, budget: &Budget) -> Result<u64> {
    budget.check_group(group.order(), "dual orbit enumeration")?;
    let n = group.cyclic_order();
    let p = group.p();
    let alpha_pows: Vec<u64> = {
        let mut v = Vec::with_capacity(p as usize);
        let mut cur = 1 % n;
        for _ in 0..p {
            v.push(cur);
            cur = mod_mul(cur, group.alpha(), n);
        }
        v
    };
    // When phi moves <x> (possible only if the free part of the action is
    // trivial), a p-dimensional character vanishes off the characteristic
    // subgroup <x^p> and fixedness reduces to agreement there:
    // a * (E - p) = 0 mod N with phi(x^p) = x^E.
    let centre_criterion: Option<u64> = match phi.gamma() {
        Some(_) => None,
        None => {
            debug_assert_eq!(group.decompose().1.n(), 1);
            let img = phi.apply(group, group.power(group.gen_x(), p));
            debug_assert_eq!(img.yexp, 0);
            Some((img.xexp + n - p % n) % n)
        }
    };
    let mut visited = vec![false; n as usize];
    let mut fixed = 0u64;
    for a in 0..n {
        if visited[a as usize] {
            continue;
        }
        if mark_orbit(group, a, &mut visited) != p {
            continue;
        }
        let is_fixed = match centre_criterion {
            None => {
                let gamma = phi.gamma().expect("checked above");
                let lhs = mod_mul(a, gamma, n);
                alpha_pows.iter().any(|&ai| lhs == mod_mul(a, ai, n))
            }
            // zeta^(a p (gamma' - 1)) = 1 with phi(x^p) = x^(p gamma')
            Some(diff) => mod_mul(a, diff, n) == 0,
        };
        if is_fixed {
            fixed += 1;
        }
    }
    Ok(fixed)
}

/// `R(phi) = ch_(1,phi) + ch_(p,phi)`: the character-counting route.
pub fn reidemeister_via_characters(
    group: &SmcGroup,
    phi: &Automorphism,
    budget: &Budget,
) -> Result<u64> {
    Ok(ch1_fixed(group, phi) + chp_fixed_direct(group, phi, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::{enumerate_automorphisms, reidemeister_via_classes};

    fn budget() -> Budget {
        Budget {
            max_group_order: 10_000,
            max_automorphisms: 1_000_000,
        }
    }

    #[test]
    fn induced_value_examples() {
        // p-group C_27 : C_3 with alpha = 10
        let g = SmcGroup::new(1, 3, 3, 10).unwrap();
        let chi = DualCharacter(1);
        // off <x> the value is zero
        let v = induced_character_value(&g, chi, g.element(5, 1)).unwrap();
        assert!(v.exponents().is_empty());
        // central element x^(3e): all three exponents collapse
        let v = induced_character_value(&g, chi, g.element(6, 0)).unwrap();
        assert_eq!(v.exponents(), &[6, 6, 6]);
        assert!(!v.is_zero(3));
        // gcd(e, p) = 1: a full cycle, sums to zero
        let v = induced_character_value(&g, chi, g.element(1, 0)).unwrap();
        assert_eq!(v.exponents(), &[1, 10, 19]);
        assert!(v.is_zero(3));
    }

    #[test]
    fn induced_value_rejects_stabilised_characters() {
        let g = SmcGroup::new(1, 2, 3, 4).unwrap();
        // a = 3 is fixed by alpha = 4: 3 * 4 = 12 = 3 mod 9
        assert!(induced_character_value(&g, DualCharacter(3), g.gen_x()).is_err());
    }

    #[test]
    fn dimension_census() {
        for group in crate::group::enumerate_groups(100) {
            let n = group.cyclic_order();
            let ch1 = ch1_total(&group);
            let chp = chp_total(&group, &budget()).unwrap();
            assert_eq!(ch1 + group.p() * group.p() * chp, group.order());
            assert_eq!(ch1, group.p() * group.abelianization_exponent());
            // fixed characters of the dual action: gcd(alpha - 1, N) orbits of size 1
            let size1 = n - chp * group.p();
            assert_eq!(size1, group.abelianization_exponent());
        }
    }

    #[test]
    fn d5_squaring_has_no_fixed_2dim_characters() {
        let g = SmcGroup::new(5, 0, 2, 4).unwrap();
        let phi = Automorphism::from_unit_pair(&g, 2, 0).unwrap();
        assert_eq!(chp_fixed(&g, &phi, &budget()).unwrap(), 0);
        assert_eq!(ch1_fixed(&g, &phi), 2);
        assert_eq!(reidemeister_via_characters(&g, &phi, &budget()).unwrap(), 2);
    }

    #[test]
    fn identity_fixes_every_character() {
        for group in crate::group::enumerate_groups(80) {
            let id = Automorphism::identity(&group);
            assert_eq!(
                chp_fixed_direct(&group, &id, &budget()).unwrap(),
                chp_total(&group, &budget()).unwrap()
            );
            assert_eq!(ch1_fixed(&group, &id), ch1_total(&group));
            // number of irreducibles = number of conjugacy classes
            let classes = group.conjugacy_classes(&budget()).unwrap();
            assert_eq!(
                ch1_total(&group) + chp_total(&group, &budget()).unwrap(),
                classes.count() as u64
            );
        }
    }

    #[test]
    fn formula_matches_direct_count() {
        for group in crate::group::enumerate_groups(100) {
            for phi in enumerate_automorphisms(&group, &budget()).unwrap() {
                assert_eq!(
                    chp_fixed(&group, &phi, &budget()).unwrap(),
                    chp_fixed_direct(&group, &phi, &budget()).unwrap(),
                    "group {:?} phi {:?}",
                    (group.n(), group.m(), group.p(), group.alpha()),
                    phi
                );
            }
        }
    }

    #[test]
    fn character_count_equals_class_count_per_automorphism() {
        for group in crate::group::enumerate_groups(80) {
            let classes = group.conjugacy_classes(&budget()).unwrap();
            for phi in enumerate_automorphisms(&group, &budget()).unwrap() {
                assert_eq!(
                    reidemeister_via_characters(&group, &phi, &budget()).unwrap(),
                    reidemeister_via_classes(&group, &classes, &phi)
                );
            }
        }
    }

    #[test]
    fn pgroup_all_or_nothing() {
        for (m, p, alpha) in [(2u32, 3u64, 4i64), (3, 2, 5), (3, 3, 10), (2, 5, 6)] {
            let g = SmcGroup::new(1, m, p, alpha).unwrap();
            let expected_total = p.pow(m - 2) * (p - 1);
            assert_eq!(chp_total(&g, &budget()).unwrap(), expected_total);
            for phi in enumerate_automorphisms(&g, &budget()).unwrap() {
                let c = chp_fixed_direct(&g, &phi, &budget()).unwrap();
                assert!(c == 0 || c == expected_total, "got {c}");
            }
        }
    }

    #[test]
    fn trivial_ppart_chp_shape() {
        // gcd(gamma - alpha^i, N) = p^e d_i with pairwise coprime divisors
        // d_i of n, and ch_p = p^e * sum (d_i - 1) / p
        let g = SmcGroup::new(7, 2, 3, 37).unwrap(); // alpha = 2 mod 7, 1 mod 9
        let n = g.cyclic_order();
        for phi in enumerate_automorphisms(&g, &budget())
            .unwrap()
            .iter()
            .take(200)
        {
            let gamma = phi.gamma().unwrap();
            let e =
                crate::modarith::valuation(gcd_u((gamma + n - 1) % n, g.p_power()), g.p()).unwrap();
            let pe = g.p().pow(e);
            let mut ds = Vec::new();
            let mut apow = 1;
            for _ in 0..g.p() {
                let a_i = gcd_u((gamma + n - apow) % n, n);
                assert_eq!(a_i % pe, 0);
                ds.push(a_i / pe);
                apow = mod_mul(apow, g.alpha(), n);
            }
            for (i, &d) in ds.iter().enumerate() {
                assert_eq!(g.n() % d, 0);
                for &d2 in ds.iter().skip(i + 1) {
                    assert_eq!(gcd_u(d, d2), 1);
                }
            }
            let sum: u64 = ds.iter().map(|&d| d - 1).sum();
            assert_eq!(sum % g.p(), 0);
            assert_eq!(chp_fixed(&g, phi, &budget()).unwrap(), pe * (sum / g.p()));
        }
    }

    #[test]
    fn dual_fixed_point_symmetry_cyclic() {
        // |Fix(psi)| = |Fix(dual psi)| for psi: x -> x^gamma on C_k, both by
        // direct enumeration
        for k in 2u64..60 {
            for gamma in 1..k {
                if gcd_u(gamma, k) != 1 {
                    continue;
                }
                let fix = (0..k).filter(|&i| mod_mul(gamma, i, k) == i).count();
                let dual_fix = (0..k).filter(|&u| mod_mul(u, gamma, k) == u).count();
                assert_eq!(fix, dual_fix);
                assert_eq!(fix as u64, gcd_u(gamma + k - 1, k));
            }
        }
    }

    #[test]
    fn reduce_cancels_only_full_cycles() {
        let s = CyclotomicSum::new(12, vec![1, 5, 9, 2]);
        let r = s.reduce(3); // step 4: {1, 5, 9} is a full cycle
        assert_eq!(r.exponents(), &[2]);
        assert!(!s.is_zero(3));
        let z = CyclotomicSum::new(12, vec![0, 4, 8, 1, 5, 9]);
        assert!(z.is_zero(3));
    }
}
