//! The split metacyclic groups `(C_n x C_(p^m)) : C_p` themselves: element
//! arithmetic in exponent coordinates, conjugacy classes, centre and
//! commutator subgroup, and the splitting-off of the subgroup of `C_n` fixed
//! by the action.

use crate::modarith::{
    factorize, gcd_u, geometric_series_mod, is_prime, mod_inv, mod_mul, mod_pow, normalize,
};
use crate::{Budget, Error, Result};

/// `x^i y^j` stored as canonical exponents `0 <= i < N`, `0 <= j < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub xexp: u64,
    pub yexp: u64,
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.xexp, self.yexp) {
            (0, 0) => write!(f, "1"),
            (i, 0) => write!(f, "x^{i}"),
            (0, j) => write!(f, "y^{j}"),
            (i, j) => write!(f, "x^{i} y^{j}"),
        }
    }
}

/// `(C_n x C_(p^m)) :_alpha C_p`, presented as
/// `< x, y | x^N = y^p = 1, y^-1 x y = x^alpha >` with `N = n * p^m`.
///
/// Requires `p` prime, `gcd(n, p) = 1`, `alpha` a unit mod `N` with
/// `alpha^p = 1` and `alpha != 1`: the trivial (abelian) action is rejected.
/// The action on `C_n` need not be free; [`SmcGroup::decompose`] splits off
/// the fixed subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmcGroup {
    n: u64,
    m: u32,
    p: u64,
    alpha: u64,
    cyclic_order: u64,
    alpha_inv: u64,
    // alpha^b and alpha^-b for 0 <= b < p, the hot path of multiplication
    alpha_pow: Vec<u64>,
    alpha_inv_pow: Vec<u64>,
}

impl SmcGroup {
    pub fn new(n: u64, m: u32, p: u64, alpha: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        if !is_prime(p) {
            return Err(Error::Invalid(format!("p = {p} is not prime")));
        }
        if n.is_multiple_of(p) {
            return Err(Error::Invalid(format!(
                "gcd(n, p) must be 1, got n = {n}, p = {p}"
            )));
        }
        let cyclic_order = p
            .checked_pow(m)
            .and_then(|pm| pm.checked_mul(n))
            .ok_or_else(|| {
                Error::Invalid(format!("n * p^m overflows: n = {n}, p = {p}, m = {m}"))
            })?;
        let alpha = normalize(alpha, cyclic_order);
        if gcd_u(alpha, cyclic_order) != 1 {
            return Err(Error::Invalid(format!(
                "alpha = {alpha} is not a unit mod {cyclic_order}"
            )));
        }
        if mod_pow(alpha, p, cyclic_order) != 1 % cyclic_order {
            return Err(Error::Invalid(format!(
                "alpha = {alpha} does not satisfy alpha^{p} = 1 mod {cyclic_order}"
            )));
        }
        if alpha == 1 % cyclic_order {
            return Err(Error::Invalid(
                "alpha = 1 gives the trivial action; the group would be abelian".into(),
            ));
        }
        let alpha_inv = mod_inv(alpha, cyclic_order).expect("alpha is a unit");
        let mut alpha_pow = Vec::with_capacity(p as usize);
        let mut alpha_inv_pow = Vec::with_capacity(p as usize);
        let (mut fwd, mut bwd) = (1 % cyclic_order, 1 % cyclic_order);
        for _ in 0..p {
            alpha_pow.push(fwd);
            alpha_inv_pow.push(bwd);
            fwd = mod_mul(fwd, alpha, cyclic_order);
            bwd = mod_mul(bwd, alpha_inv, cyclic_order);
        }
        Ok(Self {
            n,
            m,
            p,
            alpha,
            cyclic_order,
            alpha_inv,
            alpha_pow,
            alpha_inv_pow,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The action exponent `alpha`, canonical mod `N`.
    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    /// `N = n * p^m`, the order of the cyclic normal subgroup `<x>`.
    pub fn cyclic_order(&self) -> u64 {
        self.cyclic_order
    }

    /// `|G| = N * p`.
    pub fn order(&self) -> u64 {
        self.cyclic_order * self.p
    }

    pub fn p_power(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// `beta` with `alpha = beta * p^(m-1) + 1 mod p^m` when the p-part of
    /// the action has that shape (always for odd `p`; for `p = 2` the
    /// inversion-like actions have no such `beta`). `beta = 0` means the
    /// action on `C_(p^m)` is trivial.
    pub fn beta(&self) -> Option<u64> {
        let pm = self.p_power();
        if self.m == 0 {
            return Some(0);
        }
        let ap = self.alpha % pm;
        let step = self.p.pow(self.m - 1);
        if ap % step != 1 % step {
            return None;
        }
        Some((ap - 1) / step % self.p)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { xexp: 0, yexp: 0 }
    }

    pub fn gen_x(&self) -> GroupElement {
        self.element(1, 0)
    }

    pub fn gen_y(&self) -> GroupElement {
        self.element(0, 1)
    }

    /// Canonicalises arbitrary exponents into a group element.
    pub fn element(&self, xexp: i64, yexp: i64) -> GroupElement {
        GroupElement {
            xexp: normalize(xexp, self.cyclic_order),
            yexp: normalize(yexp, self.p),
        }
    }

    fn alpha_pow_of(&self, b: u64) -> u64 {
        self.alpha_pow[(b % self.p) as usize]
    }

    fn alpha_inv_pow_of(&self, b: u64) -> u64 {
        self.alpha_inv_pow[(b % self.p) as usize]
    }

    /// `(x^a y^b)(x^c y^d) = x^(a + c * alpha^-b) y^(b + d)`.
    pub fn multiply(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let twist = mod_mul(h.xexp, self.alpha_inv_pow_of(g.yexp), self.cyclic_order);
        GroupElement {
            xexp: (g.xexp + twist) % self.cyclic_order,
            yexp: (g.yexp + h.yexp) % self.p,
        }
    }

    /// `(x^a y^b)^-1 = x^(-a * alpha^b) y^-b`.
    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        let xexp = mod_mul(
            (self.cyclic_order - g.xexp) % self.cyclic_order,
            self.alpha_pow_of(g.yexp),
            self.cyclic_order,
        );
        GroupElement {
            xexp,
            yexp: (self.p - g.yexp) % self.p,
        }
    }

    /// `(x^a y^b)^e = x^(a * (1 + alpha^-b + ... + alpha^-(e-1)b)) y^(be)`.
    pub fn power(&self, g: GroupElement, e: u64) -> GroupElement {
        let ratio = self.alpha_inv_pow_of(g.yexp);
        let series = geometric_series_mod(ratio, e, self.cyclic_order);
        GroupElement {
            xexp: mod_mul(g.xexp, series, self.cyclic_order),
            yexp: mod_mul(g.yexp, e % self.p, self.p),
        }
    }

    pub fn conjugate(&self, g: GroupElement, by: GroupElement) -> GroupElement {
        self.multiply(self.multiply(by, g), self.inverse(by))
    }

    /// Least `t >= 1` with `g^t = 1`, computed from the power formula.
    pub fn element_order(&self, g: GroupElement) -> u64 {
        if g.yexp == 0 {
            return self.cyclic_order / gcd_u(g.xexp, self.cyclic_order);
        }
        let lift = self.power(g, self.p / gcd_u(g.yexp, self.p));
        debug_assert_eq!(lift.yexp, 0);
        let inner = self.cyclic_order / gcd_u(lift.xexp, self.cyclic_order);
        self.p / gcd_u(g.yexp, self.p) * inner
    }

    /// Index of `g` in the enumeration `x^i y^j -> j * N + i`.
    pub fn element_index(&self, g: GroupElement) -> usize {
        (g.yexp * self.cyclic_order + g.xexp) as usize
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        let index = index as u64;
        GroupElement {
            xexp: index % self.cyclic_order,
            yexp: index / self.cyclic_order,
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i as usize))
    }

    /// `gcd(alpha - 1, N)`: `[G, G] = <x^c>` for this value `c`, so the
    /// abelianisation is `C_c x C_p`.
    pub fn abelianization_exponent(&self) -> u64 {
        gcd_u(
            (self.alpha + self.cyclic_order - 1) % self.cyclic_order,
            self.cyclic_order,
        )
    }

    /// `|[G, G]| = N / gcd(alpha - 1, N)`, from `[G, G] = <x^(alpha - 1)>`.
    pub fn commutator_subgroup_order(&self) -> u64 {
        self.cyclic_order / self.abelianization_exponent()
    }

    /// Commutator subgroup order by generation: collect all commutators and
    /// close under multiplication. Cross-checks the index formula.
    pub fn commutator_subgroup_order_bruteforce(&self, budget: &Budget) -> Result<u64> {
        budget.check_group(self.order(), "commutator subgroup enumeration")?;
        let size = self.order() as usize;
        let mut generators: Vec<GroupElement> = Vec::new();
        let mut seen = vec![false; size];
        for g in self.elements() {
            for h in self.elements() {
                let comm = self.multiply(
                    self.multiply(self.inverse(g), self.inverse(h)),
                    self.multiply(g, h),
                );
                if !seen[self.element_index(comm)] {
                    seen[self.element_index(comm)] = true;
                    generators.push(comm);
                }
            }
        }
        let mut member = vec![false; size];
        member[self.element_index(self.identity())] = true;
        let mut queue = vec![self.identity()];
        let mut count = 1u64;
        while let Some(w) = queue.pop() {
            for &s in &generators {
                let t = self.multiply(w, s);
                let idx = self.element_index(t);
                if !member[idx] {
                    member[idx] = true;
                    count += 1;
                    queue.push(t);
                }
            }
        }
        Ok(count)
    }

    /// Elements commuting with both generators.
    pub fn centre(&self, budget: &Budget) -> Result<Vec<GroupElement>> {
        budget.check_group(self.order(), "centre enumeration")?;
        let x = self.gen_x();
        let y = self.gen_y();
        Ok(self
            .elements()
            .filter(|&g| {
                self.multiply(g, x) == self.multiply(x, g)
                    && self.multiply(g, y) == self.multiply(y, g)
            })
            .collect())
    }

    /// Orbit partition of `G` under conjugation.
    pub fn conjugacy_classes(&self, budget: &Budget) -> Result<ConjugacyClasses> {
        budget.check_group(self.order(), "conjugacy class enumeration")?;
        let size = self.order() as usize;
        let conjugators = [self.gen_x(), self.gen_y()];
        let mut class_of = vec![u32::MAX; size];
        let mut classes: Vec<Vec<GroupElement>> = Vec::new();
        let mut stack = Vec::new();
        for start in 0..size {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut members = Vec::new();
            class_of[start] = id;
            stack.push(self.element_at(start));
            while let Some(g) = stack.pop() {
                members.push(g);
                for &c in &conjugators {
                    let image = self.conjugate(g, c);
                    let idx = self.element_index(image);
                    if class_of[idx] == u32::MAX {
                        class_of[idx] = id;
                        stack.push(image);
                    }
                }
            }
            members.sort_unstable_by_key(|&g| self.element_index(g));
            classes.push(members);
        }
        Ok(ConjugacyClasses { classes, class_of })
    }

    /// Splits off the fixed part of the action on `C_n` and returns
    /// `(h, reduced)` with `G` isomorphic to `C_h x reduced` and the reduced
    /// group acting freely on its `C_n` part.
    pub fn decompose(&self) -> (u64, SmcGroup) {
        let part = decompose_fixed_part(self.n, self.m, self.p, self.alpha)
            .expect("group invariants imply a valid decomposition");
        if part.fixed_order == 1 {
            return (1, self.clone());
        }
        let reduced = SmcGroup::new(part.free_n, self.m, self.p, part.reduced_alpha as i64)
            .expect("reduced parameters stay valid");
        (part.fixed_order, reduced)
    }
}

/// Conjugacy classes, each sorted by element index, indexed by class id.
#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    classes: Vec<Vec<GroupElement>>,
    class_of: Vec<u32>,
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<GroupElement>] {
        &self.classes
    }

    pub fn class_of_index(&self, element_index: usize) -> u32 {
        self.class_of[element_index]
    }

    pub fn representative(&self, class_id: usize) -> GroupElement {
        self.classes[class_id][0]
    }
}

/// Output of [`decompose_fixed_part`]: `C_n = C_fixed x C_free` with the
/// action trivial on the first factor and fixed-point-free on the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPart {
    /// `h = |H|`, the order of the pointwise-fixed subgroup of `C_n`.
    pub fixed_order: u64,
    /// `n / h`.
    pub free_n: u64,
    /// `alpha` reduced mod `free_n * p^m`.
    pub reduced_alpha: u64,
}

/// For each prime power `q^e` of `n` the action of `alpha` is either trivial
/// or fixed-point-free, so the fixed subgroup `H <= C_n` is the product of
/// the trivially-acted prime-power factors.
pub fn decompose_fixed_part(n: u64, m: u32, p: u64, alpha: u64) -> Result<FixedPart> {
    if n == 0 || !is_prime(p) || n.is_multiple_of(p) {
        return Err(Error::Invalid(format!(
            "need n >= 1, p prime, gcd(n, p) = 1; got n = {n}, p = {p}"
        )));
    }
    let big_n = p
        .checked_pow(m)
        .and_then(|pm| pm.checked_mul(n))
        .ok_or_else(|| Error::Invalid("n * p^m overflows".into()))?;
    let alpha = alpha % big_n;
    if gcd_u(alpha, big_n) != 1 || mod_pow(alpha, p, big_n) != 1 % big_n {
        return Err(Error::Invalid(format!(
            "alpha = {alpha} is not an order-dividing-p unit mod {big_n}"
        )));
    }
    let mut fixed_order = 1u64;
    for &(q, e) in factorize(n)?.factors() {
        let qe = q.pow(e);
        if alpha % qe == 1 % qe {
            fixed_order *= qe;
        }
    }
    let free_n = n / fixed_order;
    let reduced_modulus = free_n * p.pow(m);
    let reduced_alpha = alpha % reduced_modulus.max(1);
    debug_assert_eq!(
        gcd_u((reduced_alpha + free_n - 1) % free_n.max(1), free_n),
        1
    );
    Ok(FixedPart {
        fixed_order,
        free_n,
        reduced_alpha,
    })
}

/// All `alpha` giving a valid non-trivial action for `(n, m, p)`: units mod
/// `N` of multiplicative order exactly `p`.
pub fn valid_alphas(n: u64, m: u32, p: u64) -> Result<Vec<u64>> {
    if n == 0 || !is_prime(p) || n.is_multiple_of(p) {
        return Err(Error::Invalid(format!(
            "need n >= 1, p prime, gcd(n, p) = 1; got n = {n}, p = {p}"
        )));
    }
    let big_n = p
        .checked_pow(m)
        .and_then(|pm| pm.checked_mul(n))
        .ok_or_else(|| Error::Invalid("n * p^m overflows".into()))?;
    Ok((2..big_n)
        .filter(|&a| gcd_u(a, big_n) == 1 && mod_pow(a, p, big_n) == 1)
        .collect())
}

/// Every valid non-trivially-acting group with `|G| <= max_order`, in
/// ascending `(p, m, n, alpha)` order. The sweep backbone.
pub fn enumerate_groups(max_order: u64) -> Vec<SmcGroup> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= max_order {
        if is_prime(p) {
            let mut m = 0u32;
            while p.checked_pow(m + 1).is_some_and(|ppm| ppm <= max_order) {
                let ppm = p.pow(m + 1);
                for n in 1..=max_order / ppm {
                    if n % p == 0 {
                        continue;
                    }
                    for alpha in valid_alphas(n, m, p).expect("parameters are valid") {
                        out.push(
                            SmcGroup::new(n, m, p, alpha as i64)
                                .expect("enumerated alpha is valid"),
                        );
                    }
                }
                m += 1;
            }
        }
        p += 1;
    }
    out.sort_by_key(|g| (g.p(), g.m(), g.n(), g.alpha()));
    out
}
