//! Automorphisms and brute-force Reidemeister numbers: enumeration (a
//! structured exponent path where `<x>` is characteristic, a CRT lift over
//! direct factors, and a fully generic relation-checking search), twisted
//! conjugacy classes, fixed-conjugacy-class counting, and the induced map
//! on the abelianisation.

use crate::group::{ConjugacyClasses, GroupElement, SmcGroup};
use crate::modarith::{crt_solve, gcd_u, geometric_series_mod};
use crate::spectrum::Spectrum;
use crate::{Budget, Error, Result};

/// An automorphism, determined by the images of the two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Automorphism {
    img_x: GroupElement,
    img_y: GroupElement,
}

impl Automorphism {
    /// Validates that the images define an automorphism: they must satisfy
    /// the defining relations, have the right orders, and generate the group.
    pub fn new(group: &SmcGroup, img_x: GroupElement, img_y: GroupElement) -> Result<Self> {
        let ord_x = group.element_order(img_x);
        if ord_x != group.cyclic_order() {
            return Err(Error::Invalid(format!(
                "phi(x) = {img_x} has order {ord_x}, expected {}",
                group.cyclic_order()
            )));
        }
        let ord_y = group.element_order(img_y);
        if ord_y != group.p() {
            return Err(Error::Invalid(format!(
                "phi(y) = {img_y} has order {ord_y}, expected {}: (x^a y)^p = 1 fails",
                group.p()
            )));
        }
        let lhs = group.conjugate(img_x, group.inverse(img_y));
        let rhs = group.power(img_x, group.alpha());
        if lhs != rhs {
            return Err(Error::Invalid(format!(
                "images break the relation y^-1 x y = x^alpha: got {lhs}, expected {rhs}"
            )));
        }
        let candidate = Self { img_x, img_y };
        if !candidate.is_bijective(group) {
            return Err(Error::Invalid(format!(
                "phi(x) = {img_x}, phi(y) = {img_y} do not generate the group"
            )));
        }
        Ok(candidate)
    }

    /// The structured form `phi(x) = x^gamma`, `phi(y) = x^a y`.
    pub fn from_unit_pair(group: &SmcGroup, gamma: u64, a: u64) -> Result<Self> {
        let n = group.cyclic_order();
        if gcd_u(gamma % n, n) != 1 {
            return Err(Error::Invalid(format!(
                "gamma = {gamma} is not a unit mod {n}: gcd = {}",
                gcd_u(gamma % n, n)
            )));
        }
        Self::new(
            group,
            group.element((gamma % n) as i64, 0),
            group.element((a % n) as i64, 1),
        )
    }

    pub fn identity(group: &SmcGroup) -> Self {
        Self {
            img_x: group.gen_x(),
            img_y: group.gen_y(),
        }
    }

    pub fn img_x(&self) -> GroupElement {
        self.img_x
    }

    pub fn img_y(&self) -> GroupElement {
        self.img_y
    }

    /// The exponent `gamma` with `phi(x) = x^gamma`, when `phi` maps `<x>`
    /// into itself.
    pub fn gamma(&self) -> Option<u64> {
        (self.img_x.yexp == 0).then_some(self.img_x.xexp)
    }

    /// `phi(x^i y^j) = phi(x)^i phi(y)^j`.
    pub fn apply(&self, group: &SmcGroup, g: GroupElement) -> GroupElement {
        group.multiply(
            group.power(self.img_x, g.xexp),
            group.power(self.img_y, g.yexp),
        )
    }

    /// `self . other`: first `other`, then `self`.
    pub fn compose(&self, group: &SmcGroup, other: &Self) -> Self {
        Self {
            img_x: self.apply(group, other.img_x),
            img_y: self.apply(group, other.img_y),
        }
    }

    fn is_bijective(&self, group: &SmcGroup) -> bool {
        // phi(x) a unit power of x plus any image of y outside <x> generate
        if self.img_x.yexp == 0
            && gcd_u(self.img_x.xexp, group.cyclic_order()) == 1
            && self.img_y.yexp != 0
        {
            return true;
        }
        // otherwise walk all images and look for a collision
        let size = group.order() as usize;
        let mut seen = vec![false; size];
        let mut xpow = group.identity();
        let mut ypow = Vec::with_capacity(group.p() as usize);
        let mut acc = group.identity();
        for _ in 0..group.p() {
            ypow.push(acc);
            acc = group.multiply(acc, self.img_y);
        }
        for _ in 0..group.cyclic_order() {
            for yp in &ypow {
                let idx = group.element_index(group.multiply(xpow, *yp));
                if seen[idx] {
                    return false;
                }
                seen[idx] = true;
            }
            xpow = group.multiply(xpow, self.img_x);
        }
        true
    }
}

/// `tau_g . phi` where `tau_g` is conjugation by `g`.
pub fn compose_with_inner(group: &SmcGroup, phi: &Automorphism, g: GroupElement) -> Automorphism {
    Automorphism {
        img_x: group.conjugate(phi.apply(group, group.gen_x()), g),
        img_y: group.conjugate(phi.apply(group, group.gen_y()), g),
    }
}

/// The exponent sum `1 + alpha^-1 + ... + alpha^-(p-1) mod N`; `x^a y` has
/// order `p` exactly when `a` times this sum vanishes mod `N`.
fn y_image_constraint(group: &SmcGroup) -> u64 {
    let n = group.cyclic_order();
    let inv = crate::modarith::mod_inv(group.alpha(), n).expect("alpha is a unit");
    geometric_series_mod(inv, group.p(), n)
}

/// Complete list of automorphisms. Dispatches on the group shape:
/// `<x>` characteristic (free part of order >= 2): iterate units `gamma` and
/// the residues `a` with `(x^a y)^p = 1`; pure `p`-group: generic search;
/// otherwise: CRT lift over the direct decomposition.
pub fn enumerate_automorphisms(group: &SmcGroup, budget: &Budget) -> Result<Vec<Automorphism>> {
    if group.n() == 1 {
        return enumerate_automorphisms_generic(group, budget);
    }
    let (h, reduced) = group.decompose();
    if reduced.n() >= 2 {
        enumerate_structured(group, budget)
    } else {
        enumerate_lifted(h, &reduced, budget)
    }
}

fn unit_count(n: u64) -> u64 {
    crate::modarith::factorize(n)
        .expect("n >= 1")
        .factors()
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

fn enumerate_structured(group: &SmcGroup, budget: &Budget) -> Result<Vec<Automorphism>> {
    let n = group.cyclic_order();
    let s = y_image_constraint(group);
    let a_count = gcd_u(s, n);
    let a_step = n / a_count;
    budget.check_autos(unit_count(n) * a_count, "automorphism enumeration")?;
    let mut out = Vec::with_capacity((unit_count(n) * a_count) as usize);
    for gamma in 1..=n {
        if gcd_u(gamma, n) != 1 {
            continue;
        }
        let img_x = group.element(gamma as i64, 0);
        for k in 0..a_count {
            let img_y = group.element((k * a_step) as i64, 1);
            out.push(Automorphism { img_x, img_y });
        }
    }
    Ok(out)
}

fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    crt_solve(&[(r1 as i64, m1), (r2 as i64, m2)])
        .expect("moduli coprime by construction")
        .0
}

/// `G = C_h x G'` with coprime orders, so `Aut(G) = Aut(C_h) x Aut(G')`.
fn enumerate_lifted(h: u64, reduced: &SmcGroup, budget: &Budget) -> Result<Vec<Automorphism>> {
    let inner = enumerate_automorphisms_generic(reduced, budget)?;
    budget.check_autos(
        unit_count(h) * inner.len() as u64,
        "automorphism enumeration",
    )?;
    let rm = reduced.cyclic_order();
    let mut out = Vec::new();
    for u in 0..h {
        if gcd_u(u, h) != 1 {
            continue;
        }
        for phi in &inner {
            out.push(Automorphism {
                img_x: GroupElement {
                    xexp: crt_pair(u, h, phi.img_x.xexp, rm),
                    yexp: phi.img_x.yexp,
                },
                img_y: GroupElement {
                    xexp: crt_pair(0, h, phi.img_y.xexp, rm),
                    yexp: phi.img_y.yexp,
                },
            });
        }
    }
    Ok(out)
}

/// Relation-checking search over all pairs of elements with the orders of
/// `x` and `y`: the oracle the structured paths are tested against.
pub fn enumerate_automorphisms_generic(
    group: &SmcGroup,
    budget: &Budget,
) -> Result<Vec<Automorphism>> {
    budget.check_group(group.order(), "generic automorphism search")?;
    let xs: Vec<GroupElement> = group
        .elements()
        .filter(|&g| group.element_order(g) == group.cyclic_order())
        .collect();
    let ys: Vec<GroupElement> = group
        .elements()
        .filter(|&g| group.element_order(g) == group.p())
        .collect();
    let mut out = Vec::new();
    for &gx in &xs {
        let rhs = group.power(gx, group.alpha());
        for &gy in &ys {
            if group.conjugate(gx, group.inverse(gy)) != rhs {
                continue;
            }
            let candidate = Automorphism {
                img_x: gx,
                img_y: gy,
            };
            if candidate.is_bijective(group) {
                budget.check_autos(out.len() as u64 + 1, "generic automorphism search")?;
                out.push(candidate);
            }
        }
    }
    Ok(out)
}

/// Partition of `G` into twisted conjugacy classes `x ~ g x phi(g)^-1`.
#[derive(Debug, Clone)]
pub struct TwistedClasses {
    classes: Vec<Vec<GroupElement>>,
}

impl TwistedClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<GroupElement>] {
        &self.classes
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(size: usize) -> Self {
        Self {
            parent: (0..size as u32).collect(),
        }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let up = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = up;
            i = up;
        }
        i
    }

    fn union(&mut self, i: u32, j: u32) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri < rj {
            self.parent[rj as usize] = ri;
        } else {
            self.parent[ri as usize] = rj;
        }
    }
}

/// The map `g . x = g x phi(g)^-1` is a group action, so its orbits are
/// found by merging along the two generator moves.
fn twisted_union_find(group: &SmcGroup, phi: &Automorphism, budget: &Budget) -> Result<UnionFind> {
    budget.check_group(group.order(), "twisted class enumeration")?;
    let size = group.order() as usize;
    let moves = [
        (
            group.gen_x(),
            group.inverse(phi.apply(group, group.gen_x())),
        ),
        (
            group.gen_y(),
            group.inverse(phi.apply(group, group.gen_y())),
        ),
    ];
    let mut uf = UnionFind::new(size);
    for idx in 0..size {
        let el = group.element_at(idx);
        for &(s, phi_s_inv) in &moves {
            let t = group.multiply(group.multiply(s, el), phi_s_inv);
            uf.union(idx as u32, group.element_index(t) as u32);
        }
    }
    Ok(uf)
}

pub fn twisted_classes(
    group: &SmcGroup,
    phi: &Automorphism,
    budget: &Budget,
) -> Result<TwistedClasses> {
    let mut uf = twisted_union_find(group, phi, budget)?;
    let size = group.order() as usize;
    let mut by_root: std::collections::BTreeMap<u32, Vec<GroupElement>> = Default::default();
    for idx in 0..size {
        by_root
            .entry(uf.find(idx as u32))
            .or_default()
            .push(group.element_at(idx));
    }
    Ok(TwistedClasses {
        classes: by_root.into_values().collect(),
    })
}

/// `R(phi)` as the number of twisted conjugacy classes, without
/// materialising the partition.
pub fn twisted_class_count(group: &SmcGroup, phi: &Automorphism, budget: &Budget) -> Result<u64> {
    let mut uf = twisted_union_find(group, phi, budget)?;
    let size = group.order() as usize;
    let mut count = 0u64;
    for idx in 0..size as u32 {
        if uf.find(idx) == idx {
            count += 1;
        }
    }
    Ok(count)
}

/// `R(phi)` as the number of conjugacy classes `C` with `phi(C) = C`.
pub fn reidemeister_via_classes(
    group: &SmcGroup,
    classes: &ConjugacyClasses,
    phi: &Automorphism,
) -> u64 {
    (0..classes.count())
        .filter(|&id| {
            let image = phi.apply(group, classes.representative(id));
            classes.class_of_index(group.element_index(image)) == id as u32
        })
        .count() as u64
}

/// Fixed points of the induced automorphism on `G/[G,G] = C_c x C_p`,
/// by direct enumeration of the quotient.
pub fn abelianization_fixed_points(group: &SmcGroup, phi: &Automorphism) -> u64 {
    let c = group.abelianization_exponent();
    let p = group.p();
    let (ax, ay) = (phi.img_x.xexp % c, phi.img_x.yexp);
    let (bx, by) = (phi.img_y.xexp % c, phi.img_y.yexp);
    let mut count = 0;
    for i in 0..c {
        for j in 0..p {
            if (ax * i + bx * j) % c == i && (ay * i + by * j) % p == j {
                count += 1;
            }
        }
    }
    count
}

/// `{ R(phi) : phi in Aut(G) }` by exhausting the automorphism group and
/// counting fixed conjugacy classes for each member.
pub fn reidemeister_spectrum_bruteforce(group: &SmcGroup, budget: &Budget) -> Result<Spectrum> {
    let classes = group.conjugacy_classes(budget)?;
    let mut values = std::collections::BTreeSet::new();
    if group.n() > 1 && group.decompose().1.n() >= 2 {
        spectrum_over_exponent_grid(group, budget, &classes, &mut values)?;
    } else {
        for phi in enumerate_automorphisms(group, budget)? {
            values.insert(reidemeister_via_classes(group, &classes, &phi));
        }
    }
    Ok(Spectrum::from_values(values))
}

/// Shared inner loop for groups where every automorphism is
/// `x -> x^gamma, y -> x^a y`: splits the fixed-class count into the part
/// depending only on `gamma` (classes inside `<x>`) and the `a`-dependent
/// rest, which keeps the sweep over large automorphism groups affordable.
fn spectrum_over_exponent_grid(
    group: &SmcGroup,
    budget: &Budget,
    classes: &ConjugacyClasses,
    values: &mut std::collections::BTreeSet<u64>,
) -> Result<()> {
    let n = group.cyclic_order();
    let p = group.p();
    let s = y_image_constraint(group);
    let a_count = gcd_u(s, n);
    let a_step = n / a_count;
    budget.check_autos(unit_count(n) * a_count, "automorphism enumeration")?;
    let x_reps: Vec<(u64, u32)> = (0..classes.count())
        .map(|id| (classes.representative(id), id as u32))
        .filter(|(rep, _)| rep.yexp == 0)
        .map(|(rep, id)| (rep.xexp, id))
        .collect();
    let y_reps: Vec<(GroupElement, u32)> = (0..classes.count())
        .map(|id| (classes.representative(id), id as u32))
        .filter(|(rep, _)| rep.yexp != 0)
        .collect();
    let alpha_inv = crate::modarith::mod_inv(group.alpha(), n).expect("alpha is a unit");
    // powers alpha^-j for the incremental (x^a y)^j computation
    let mut alpha_inv_pow = Vec::with_capacity(p as usize);
    let mut acc = 1 % n;
    for _ in 0..p {
        alpha_inv_pow.push(acc);
        acc = crate::modarith::mod_mul(acc, alpha_inv, n);
    }
    let mut t_x = vec![0u64; p as usize]; // x-exponent of (x^a y)^j
    for gamma in 1..=n {
        if gcd_u(gamma, n) != 1 {
            continue;
        }
        let fixed_x = x_reps
            .iter()
            .filter(|&&(i, id)| {
                let image = crate::modarith::mod_mul(gamma, i, n);
                classes.class_of_index(image as usize) == id
            })
            .count() as u64;
        for k in 0..a_count {
            let a = k * a_step;
            for j in 1..p as usize {
                t_x[j] = (t_x[j - 1] + crate::modarith::mod_mul(a, alpha_inv_pow[j - 1], n)) % n;
            }
            let fixed_y = y_reps
                .iter()
                .filter(|&&(rep, id)| {
                    let xe =
                        (crate::modarith::mod_mul(gamma, rep.xexp, n) + t_x[rep.yexp as usize]) % n;
                    let idx = (rep.yexp * n + xe) as usize;
                    classes.class_of_index(idx) == id
                })
                .count() as u64;
            values.insert(fixed_x + fixed_y);
        }
    }
    Ok(())
}
