//! Arithmetic in `GF(p^k)`.
//!
//! Elements are coefficient vectors over `Z_p` (constant term first) reduced
//! modulo a monic irreducible polynomial of degree `k`. Internally each
//! element is packed into an index in `0..q` such that index order equals
//! the lexicographic order of coefficient vectors compared low degree first;
//! this is the canonical enumeration order used to pick the modulus and the
//! generator.
//!
//! Multiplication goes through exponent/logarithm tables built from the
//! generator, so the discrete logarithm is a table lookup.

use std::fmt;

use crate::error::{invalid, Error, Result};

/// Largest field order the tables are built for.
pub const MAX_ORDER: u32 = 1 << 16;

/// A field element, valid only together with the [`FieldSpec`] that made it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Position in the canonical enumeration order.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    one: FieldElement,
    /// `exp[e]` is the index of `g^e`, for `e` in `0..q-1`.
    exp: Vec<u32>,
    /// `log[i]` is the exponent of the element with index `i`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator.0)
            .finish()
    }
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Builds `GF(q)` with the lexicographically smallest monic irreducible modulus.
pub fn field(q: u32) -> Result<FieldSpec> {
    let (p, k) = prime_power(q).ok_or_else(|| invalid!("{q} is not a prime power"))?;
    if q > MAX_ORDER {
        return Err(Error::Unsupported(format!(
            "field order {q} exceeds the table limit {MAX_ORDER}"
        )));
    }
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, k as usize)
    };
    FieldSpec::build(p, k, modulus)
}

impl FieldSpec {
    /// Builds `GF(p^k)` over an explicit monic modulus (constant term first).
    pub fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
        if prime_power(p) != Some((p, 1)) {
            return Err(invalid!("{p} is not prime"));
        }
        if k == 0 || modulus.len() != k as usize + 1 || modulus[k as usize] != 1 {
            return Err(invalid!("modulus must be monic of degree {k}"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(invalid!("modulus coefficients must lie in 0..{p}"));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_ORDER);
        if q.is_none() {
            return Err(Error::Unsupported(format!(
                "{p}^{k} exceeds the table limit"
            )));
        }
        if k > 1 && !is_irreducible(p, &modulus) {
            return Err(invalid!("modulus {modulus:?} is reducible over Z_{p}"));
        }
        let modulus = if k == 1 { vec![0, 1] } else { modulus };
        FieldSpec::build(p, k, modulus)
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
        let q = p.pow(k);
        // The constant 1 is the vector (1, 0, .., 0), whose first coefficient
        // is the most significant digit of the index.
        let one = FieldElement(p.pow(k - 1));
        let mut spec = FieldSpec {
            p,
            k,
            q,
            modulus,
            generator: one,
            one,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if q == 2 {
            spec.exp = vec![1];
            spec.log = vec![0, 0];
            return Ok(spec);
        }
        let generator = (1..q)
            .find(|&i| spec.slow_order(i) == q - 1)
            .ok_or_else(|| Error::Invariant(format!("no generator found in GF({q})")))?;
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0; q as usize];
        let mut acc = one.0;
        for e in 0..q - 1 {
            exp.push(acc);
            log[acc as usize] = e;
            acc = spec.slow_mul(acc, generator);
        }
        spec.generator = FieldElement(generator);
        spec.exp = exp;
        spec.log = log;
        Ok(spec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first. For prime fields this is the
    /// placeholder `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        self.one
    }

    pub fn contains(&self, e: FieldElement) -> bool {
        e.0 < self.q
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    pub fn from_index(&self, index: u32) -> Result<FieldElement> {
        if index >= self.q {
            return Err(invalid!(
                "index {index} is not an element of GF({})",
                self.q
            ));
        }
        Ok(FieldElement(index))
    }

    /// Element from its coefficient vector (constant term first, length `k`).
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.k as usize {
            return Err(invalid!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            ));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(invalid!(
                "coefficient {c} is not a residue modulo {}",
                self.p
            ));
        }
        Ok(FieldElement(self.pack(coeffs)))
    }

    /// Element `n mod p` of the prime subfield.
    pub fn from_int(&self, n: u64) -> FieldElement {
        let c = (n % self.p as u64) as u32;
        let mut coeffs = vec![0; self.k as usize];
        coeffs[0] = c;
        FieldElement(self.pack(&coeffs))
    }

    pub fn coeffs(&self, e: FieldElement) -> Vec<u32> {
        self.unpack(e.0)
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    fn unpack(&self, mut index: u32) -> Vec<u32> {
        let mut coeffs = vec![0; self.k as usize];
        for slot in coeffs.iter_mut().rev() {
            *slot = index % self.p;
            index /= self.p;
        }
        coeffs
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        debug_assert!(self.contains(x) && self.contains(y));
        if self.k == 1 {
            return FieldElement((x.0 + y.0) % self.p);
        }
        if self.p == 2 {
            return FieldElement(x.0 ^ y.0);
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        debug_assert!(self.contains(x));
        if self.p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        debug_assert!(self.contains(x) && self.contains(y));
        if x.0 == 0 || y.0 == 0 {
            return FieldElement(0);
        }
        let e = (self.log[x.0 as usize] + self.log[y.0 as usize]) % (self.q - 1);
        FieldElement(self.exp[e as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        let e = (self.q - 1 - self.log[x.0 as usize]) % (self.q - 1);
        Ok(FieldElement(self.exp[e as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one;
        }
        if x.0 == 0 {
            return FieldElement(0);
        }
        let order = (self.q - 1) as u64;
        let exponent = (self.log[x.0 as usize] as u64 * (e % order)) % order;
        FieldElement(self.exp[exponent as usize])
    }

    /// `g^e` for the field's generator `g`.
    pub fn exp(&self, e: u64) -> FieldElement {
        FieldElement(self.exp[(e % (self.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm of `a` to the field's generator.
    pub fn dlog(&self, a: FieldElement) -> Result<u32> {
        if a.0 == 0 {
            return Err(Error::Domain("zero has no discrete logarithm".into()));
        }
        if !self.contains(a) {
            return Err(invalid!("{} is not an element of GF({})", a.0, self.q));
        }
        Ok(self.log[a.0 as usize])
    }

    /// Discrete logarithm of `a` to an arbitrary generator `g`.
    pub fn dlog_base(&self, g: FieldElement, a: FieldElement) -> Result<u32> {
        if self.multiplicative_order(g)? != self.q - 1 {
            return Err(invalid!("{} does not generate GF({})*", g.0, self.q));
        }
        let la = self.dlog(a)? as u64;
        let lg = self.dlog(g)? as u64;
        let order = (self.q - 1) as u64;
        // g = h^lg with gcd(lg, order) = 1, so log_g(a) = la * lg^{-1} mod order.
        let inv = mod_inverse(lg, order).ok_or_else(|| {
            Error::Invariant(format!("log of generator {lg} not invertible mod {order}"))
        })?;
        Ok(((la * inv) % order) as u32)
    }

    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u32> {
        if x.0 == 0 {
            return Err(Error::Domain("zero has no multiplicative order".into()));
        }
        let order = self.q - 1;
        let l = self.log[x.0 as usize];
        Ok(order / gcd(l, order))
    }

    /// Polynomial multiplication modulo the modulus, used before the tables exist.
    fn slow_mul(&self, x: u32, y: u32) -> u32 {
        let p = self.p as u64;
        let a = self.unpack(x);
        let b = self.unpack(y);
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + p * p - c * m as u64) % p;
            }
        }
        let coeffs: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.pack(&coeffs)
    }

    fn slow_order(&self, x: u32) -> u32 {
        let mut acc = x;
        let mut order = 1;
        while acc != self.one.0 {
            acc = self.slow_mul(acc, x);
            order += 1;
            if order > self.q {
                return 0;
            }
        }
        order
    }

    /// Human-readable element: an integer for prime fields, a polynomial in
    /// `x` (constant term first) otherwise.
    pub fn format(&self, e: FieldElement) -> String {
        if self.k == 1 {
            return e.0.to_string();
        }
        let terms: Vec<String> = self
            .coeffs(e)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (d, 1) => format!("x^{d}"),
                (d, c) => format!("{c}x^{d}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Inverse of [`FieldSpec::format`].
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u32>() {
            return if n < self.p {
                Ok(self.from_int(n as u64))
            } else {
                Err(invalid!("{n} is not a residue modulo {}", self.p))
            };
        }
        if self.k == 1 {
            return Err(invalid!(
                "cannot parse {s:?} as an element of GF({})",
                self.q
            ));
        }
        let mut coeffs = vec![0u32; self.k as usize];
        for term in s.split('+') {
            let (c, d) = match term.find('x') {
                None => (term.parse::<u32>().ok(), Some(0)),
                Some(pos) => {
                    let c = if pos == 0 {
                        Some(1)
                    } else {
                        term[..pos].parse().ok()
                    };
                    let rest = &term[pos + 1..];
                    let d = if rest.is_empty() {
                        Some(1)
                    } else {
                        rest.strip_prefix('^').and_then(|r| r.parse::<usize>().ok())
                    };
                    (c, d)
                }
            };
            match (c, d) {
                (Some(c), Some(d)) if c < self.p && d < self.k as usize => {
                    coeffs[d] = (coeffs[d] + c) % self.p;
                }
                _ => return Err(invalid!("cannot parse term {term:?} of {s:?}")),
            }
        }
        self.element(&coeffs)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i64) as u64)
}

/// First monic irreducible of degree `k` with lower coefficients in
/// lexicographic order, constant term compared first.
fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let total = p.pow(k as u32);
    (0..total)
        .map(|idx| {
            let mut lower = vec![0; k];
            let mut rest = idx;
            for slot in lower.iter_mut().rev() {
                *slot = rest % p;
                rest /= p;
            }
            lower.push(1);
            lower
        })
        .find(|poly| is_irreducible(p, poly))
        .expect("an irreducible polynomial of every degree exists")
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=deg/2`.
pub(crate) fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut divisor = vec![0; d];
            let mut rest = idx;
            for slot in divisor.iter_mut() {
                *slot = rest % p;
                rest /= p;
            }
            divisor.push(1);
            if poly_rem_is_zero(p, poly, &divisor) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u32, poly: &[u32], monic: &[u32]) -> bool {
    let p = p as u64;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let d = monic.len() - 1;
    for top in (d..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in monic.iter().enumerate() {
            let idx = top - d + i;
            rem[idx] = (rem[idx] + p * p - c * m as u64) % p;
        }
    }
    rem[..d].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

    #[test]
    fn prime_field_shape() {
        let f = field(7).unwrap();
        assert_eq!((f.p(), f.k(), f.q()), (7, 1, 7));
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 12, 15, 18] {
            assert!(matches!(field(q), Err(Error::InvalidInput(_))), "q={q}");
        }
    }

    #[test]
    fn gf4_modulus_and_square_of_x() {
        let f = field(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.element(&[0, 1]).unwrap();
        assert_eq!(f.coeffs(f.mul(x, x)), vec![1, 1]);
    }

    /// Exhaustive search over monic quadratics, ordered by constant term then
    /// linear term, checking for roots (enough for degree 2).
    #[test]
    fn gf9_modulus_is_first_rootless_quadratic() {
        let mut expected = None;
        'search: for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                if (0..3u32).all(|x| (x * x + c1 * x + c0) % 3 != 0) {
                    expected = Some(vec![c0, c1, 1]);
                    break 'search;
                }
            }
        }
        assert_eq!(field(9).unwrap().modulus(), expected.unwrap().as_slice());
        assert_eq!(field(9).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf7_inverse_and_generator() {
        let f = field(7).unwrap();
        assert_eq!(f.inv(f.from_int(3)).unwrap(), f.from_int(5));
        assert_eq!(f.generator(), f.from_int(3));
        assert_eq!(f.dlog(f.from_int(6)).unwrap(), 3);
    }

    #[test]
    fn gf5_generator() {
        let f = field(5).unwrap();
        assert_eq!(f.generator(), f.from_int(2));
        assert_eq!(f.dlog(f.from_int(4)).unwrap(), 2);
    }

    #[test]
    fn zero_is_outside_the_group() {
        let f = field(8).unwrap();
        assert!(matches!(f.inv(f.zero()), Err(Error::Domain(_))));
        assert!(matches!(f.dlog(f.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn log_identities() {
        for q in SMALL_ORDERS {
            let f = field(q).unwrap();
            let g = f.generator();
            if q > 2 {
                assert_eq!(f.dlog(g).unwrap(), 1);
            }
            assert_eq!(f.dlog(f.one()).unwrap(), 0);
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in SMALL_ORDERS {
            let f = field(q).unwrap();
            let all: Vec<_> = f.elements().collect();
            for &a in &all {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &all {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    /// Table multiplication agrees with schoolbook polynomial multiplication.
    #[test]
    fn table_mul_matches_polynomial_mul() {
        for q in [4, 8, 9, 16, 25, 27] {
            let f = field(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).0, f.slow_mul(a.0, b.0), "q={q}");
                }
            }
        }
    }

    #[test]
    fn generator_is_first_of_full_order() {
        for q in SMALL_ORDERS.into_iter().chain([11, 13, 16, 25, 27, 32]) {
            let f = field(q).unwrap();
            let g = f.generator();
            assert_eq!(f.pow(g, (q - 1) as u64), f.one());
            // Enumerate powers directly rather than through the log table.
            let mut acc = f.one();
            for e in 1..q - 1 {
                acc = FieldElement(f.slow_mul(acc.0, g.0));
                assert_ne!(acc, f.one(), "q={q}, e={e}");
            }
            for earlier in 1..g.0 {
                assert!(f.slow_order(earlier) < q - 1);
            }
        }
    }

    #[test]
    fn exp_and_log_are_inverse() {
        for q in SMALL_ORDERS.into_iter().chain([16, 25, 49]) {
            let f = field(q).unwrap();
            for e in 0..q - 1 {
                assert_eq!(f.dlog(f.exp(e as u64)).unwrap(), e);
            }
            for a in f.nonzero() {
                assert_eq!(f.exp(f.dlog(a).unwrap() as u64), a);
            }
        }
    }

    #[test]
    fn dlog_to_other_generators() {
        let f = field(13).unwrap();
        for g in f
            .nonzero()
            .filter(|&g| f.multiplicative_order(g).unwrap() == 12)
        {
            for a in f.nonzero() {
                let e = f.dlog_base(g, a).unwrap();
                assert_eq!(f.pow(g, e as u64), a);
            }
        }
        assert!(f.dlog_base(f.from_int(3), f.one()).is_err());
    }

    #[test]
    fn element_validation() {
        let f = field(9).unwrap();
        assert!(f.element(&[3, 0]).is_err());
        assert!(f.element(&[1]).is_err());
        assert!(f.from_index(9).is_err());
    }

    #[test]
    fn format_round_trip() {
        for q in [7, 8, 9, 16] {
            let f = field(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.parse(&f.format(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn explicit_modulus() {
        assert!(FieldSpec::with_modulus(2, 2, vec![0, 1, 1]).is_err());
        let f = FieldSpec::with_modulus(3, 2, vec![2, 1, 1]).unwrap();
        assert_eq!(f.q(), 9);
        assert!(FieldSpec::with_modulus(4, 1, vec![0, 1]).is_err());
    }
}
