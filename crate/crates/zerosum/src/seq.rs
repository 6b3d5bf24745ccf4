//! Sequences (unordered multisets) over a group and their product sets.
//!
//! The central structure is [`ProductTable`]: a dense dynamic-programming
//! table holding the exact product set `pi(T)` for *every* sub-multiset `T`
//! of a base sequence.  Sub-multisets are keyed by the mixed-radix rank of
//! their multiplicity vector, so the table is a flat vector and the
//! recurrence
//!
//! ```text
//! pi(T) = union over g in supp(T) of pi(T \ g) · g
//! ```
//!
//! is a single forward pass.  All derived notions (subsequence products,
//! product-one tests, factorization searches) read from this table.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, Group, Homomorphism};
use crate::DEFAULT_BUDGET;

/// An unordered multiset of group elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Sequence {
    group: Group,
    counts: Vec<u32>,
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({})", self.to_text())
    }
}

impl Sequence {
    pub fn new(group: &Group, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != group.order() {
            return Err(Error::validation(format!(
                "counts length {} does not match group order {}",
                counts.len(),
                group.order()
            )));
        }
        Ok(Sequence {
            group: Arc::clone(group),
            counts,
        })
    }

    pub fn empty(group: &Group) -> Self {
        Sequence {
            group: Arc::clone(group),
            counts: vec![0; group.order()],
        }
    }

    pub fn from_pairs(group: &Group, pairs: &[(Element, u32)]) -> Result<Self> {
        let mut counts = vec![0; group.order()];
        for &(e, k) in pairs {
            group.check_element(e)?;
            counts[e] += k;
        }
        Ok(Sequence {
            group: Arc::clone(group),
            counts,
        })
    }

    /// Parses the whitespace-separated text form, e.g. `"a^4 t^2"`.
    ///
    /// Each term is an element name, optionally followed by `^k` for a
    /// multiplicity.  A parenthesized term like `(a t)` is read as the name
    /// with inner whitespace removed (`at`).
    pub fn parse(group: &Group, text: &str) -> Result<Self> {
        let mut counts = vec![0u32; group.order()];
        for token in tokenize(text)? {
            let (name, mult) = split_multiplicity(&token)?;
            let e = group
                .element_by_name(&name)
                .ok_or_else(|| Error::validation(format!("unknown element name '{name}'")))?;
            counts[e] += mult;
        }
        Sequence::new(group, counts)
    }

    /// Canonical text form: terms in element-index order, `name` or
    /// `name^k`.  The empty sequence prints as `()`.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (e, &c) in self.counts.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(self.group.name(e).to_string()),
                k => parts.push(format!("{}^{}", self.group.name(e), k)),
            }
        }
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.join(" ")
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Total length `|S|`.
    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Multiplicity of `g` in the sequence.
    pub fn multiplicity(&self, g: Element) -> u32 {
        self.counts[g]
    }

    /// Maximal multiplicity `h(S)`.
    pub fn max_multiplicity(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn support(&self) -> ElementSet {
        ElementSet::from_iter(
            self.group.order(),
            self.counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(e, _)| e),
        )
    }

    /// Iterates the terms with repetition, in element-index order.
    pub fn terms(&self) -> impl Iterator<Item = Element> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(e, &c)| std::iter::repeat_n(e, c as usize))
    }

    /// Pointwise divisibility `T | S`.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.group == other.group && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Multiset union `S · T`.
    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Sequence::new(&self.group, counts)
    }

    /// Multiset difference `S · T^[-1]`; `T` must divide `S`.
    pub fn remove(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        if !other.divides(self) {
            return Err(Error::domain("subtrahend does not divide the sequence"));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a - b)
            .collect();
        Sequence::new(&self.group, counts)
    }

    /// Elementwise inverse `S^-1`.
    pub fn inverse(&self) -> Sequence {
        let mut counts = vec![0; self.group.order()];
        for (e, &c) in self.counts.iter().enumerate() {
            counts[self.group.inverse(e)] += c;
        }
        Sequence {
            group: Arc::clone(&self.group),
            counts,
        }
    }

    /// Termwise image under a validated homomorphism.
    pub fn transform(&self, theta: &Homomorphism) -> Result<Sequence> {
        if **theta.from_group() != *self.group {
            return Err(Error::domain(
                "homomorphism domain does not match the sequence group",
            ));
        }
        let to = theta.to_group();
        let mut counts = vec![0; to.order()];
        for (e, &c) in self.counts.iter().enumerate() {
            counts[theta.apply(e)] += c;
        }
        Sequence::new(to, counts)
    }

    fn same_group(&self, other: &Sequence) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::domain("sequences live over different groups"))
        }
    }

    /// Exact product set `pi(S)` of all orderings.
    pub fn product_set(&self) -> Result<ElementSet> {
        self.product_set_with(DEFAULT_BUDGET)
    }

    pub fn product_set_with(&self, budget: usize) -> Result<ElementSet> {
        Ok(ProductTable::build_with(self, budget)?.product_set())
    }

    /// `Pi_n(S)` when `n` is given, else `Pi(S)`: products over sub-multisets.
    pub fn subsequence_products(&self, n: Option<usize>) -> Result<ElementSet> {
        self.subsequence_products_with(n, DEFAULT_BUDGET)
    }

    pub fn subsequence_products_with(&self, n: Option<usize>, budget: usize) -> Result<ElementSet> {
        let table = ProductTable::build_with(self, budget)?;
        table.subsequence_products(n)
    }

    /// `Sigma_n(S)` (or `Sigma(S)` when `n` is `None`) over an abelian group.
    pub fn sigma(&self, n: Option<usize>) -> Result<ElementSet> {
        if !self.group.is_abelian() {
            return Err(Error::domain("sigma is defined over abelian groups"));
        }
        let dp = self.sums_by_cardinality();
        match n {
            Some(n) => {
                if n < 1 || n > self.len() {
                    return Err(Error::domain(format!(
                        "n = {n} out of range 1..={}",
                        self.len()
                    )));
                }
                Ok(ElementSet::from_bits(self.group.order(), dp[n]))
            }
            None => {
                let mut acc = 0u64;
                for &m in &dp[1..] {
                    acc |= m;
                }
                Ok(ElementSet::from_bits(self.group.order(), acc))
            }
        }
    }

    /// `dp[r]` = set of sums over sub-multisets of cardinality exactly `r`.
    pub(crate) fn sums_by_cardinality(&self) -> Vec<u64> {
        let g = &self.group;
        let len = self.len();
        let mut dp = vec![0u64; len + 1];
        dp[0] = 1u64 << g.identity();
        let mut used = 0usize;
        for (e, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as usize;
            // powers e^1..e^c
            let mut pow = Vec::with_capacity(c);
            let mut p = e;
            for _ in 0..c {
                pow.push(p);
                p = g.mul(p, e);
            }
            for r in (0..=used).rev() {
                if dp[r] == 0 {
                    continue;
                }
                for (t, &pt) in pow.iter().enumerate() {
                    let bits = g.translate_bits(dp[r], pt);
                    dp[r + t + 1] |= bits;
                }
            }
            used += c;
        }
        dp
    }

    /// Classification of the sequence: product-one, product-one free,
    /// square-free.
    pub fn classify(&self) -> Result<Classification> {
        self.classify_with(DEFAULT_BUDGET)
    }

    pub fn classify_with(&self, budget: usize) -> Result<Classification> {
        let squarefree = self.max_multiplicity() <= 1;
        if self.group.is_abelian() {
            // Over an abelian group the product of a sub-multiset does not
            // depend on the ordering; sums by cardinality answer both tests.
            let dp = self.sums_by_cardinality();
            let id = 1u64 << self.group.identity();
            let product_one = dp[self.len()] & id != 0;
            let product_one_free = dp[1..].iter().all(|&m| m & id == 0);
            return Ok(Classification {
                product_one,
                product_one_free,
                squarefree,
            });
        }
        let table = ProductTable::build_with(self, budget)?;
        Ok(Classification {
            product_one: table.is_product_one(),
            product_one_free: table.is_product_one_free(),
            squarefree,
        })
    }

    pub fn is_product_one(&self) -> Result<bool> {
        Ok(self.classify()?.product_one)
    }

    pub fn is_product_one_free(&self) -> Result<bool> {
        Ok(self.classify()?.product_one_free)
    }

    /// Searches for a smooth certificate over a cyclic group.
    ///
    /// With `g` supplied the definition is verified for that `g`; otherwise
    /// the generators of the group are tried in increasing index order and
    /// the first certificate is returned.
    pub fn smoothness(&self, g: Option<Element>) -> Result<Option<SmoothCertificate>> {
        let group = &self.group;
        let cyclic = (0..group.order()).any(|e| group.element_order(e) == group.order());
        if !cyclic {
            return Err(Error::domain("smoothness is defined over cyclic groups"));
        }
        if self.is_empty() {
            return Err(Error::domain("smoothness needs a non-empty sequence"));
        }
        match g {
            Some(g) => {
                group.check_element(g)?;
                Ok(self.smooth_certificate_for(g))
            }
            None => {
                for cand in 0..group.order() {
                    if group.element_order(cand) == group.order() {
                        if let Some(cert) = self.smooth_certificate_for(cand) {
                            return Ok(Some(cert));
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    fn smooth_certificate_for(&self, g: Element) -> Option<SmoothCertificate> {
        let group = &self.group;
        let ord = group.element_order(g);
        // discrete logs base g over <g>
        let mut log = vec![None; group.order()];
        let mut p = g;
        for k in 1..=ord {
            log[p] = Some(k as u32);
            p = group.mul(p, g);
        }
        let mut coeffs = Vec::new();
        for (e, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match log[e] {
                Some(k) if (k as usize) < ord || e == group.identity() => {
                    // identity would need coefficient ord(g), which the
                    // m < ord(g) constraint rules out anyway
                    if e == group.identity() {
                        return None;
                    }
                    coeffs.extend(std::iter::repeat_n(k, c as usize));
                }
                _ => return None,
            }
        }
        coeffs.sort_unstable();
        if coeffs[0] != 1 {
            return None;
        }
        let m: u32 = coeffs.iter().sum();
        if m as usize >= ord {
            return None;
        }
        // Sigma(S) must be exactly {g, 2g, ..., mg}.
        let sums = self.sigma(None).ok()?;
        let mut want = ElementSet::empty(group.order());
        let mut p = g;
        for _ in 0..m {
            want.insert(p);
            p = group.mul(p, g);
        }
        if sums == want {
            Some(SmoothCertificate {
                g,
                coefficients: coeffs,
                m,
            })
        } else {
            None
        }
    }

    /// An explicit ordering of the terms multiplying to the identity, if one
    /// exists.  Deterministic: the least usable element is chosen at each
    /// position from the back.
    pub fn ordering_witness(&self) -> Result<Option<Vec<Element>>> {
        let table = ProductTable::build_with(self, DEFAULT_BUDGET)?;
        Ok(table.ordering_to(self.group.identity()))
    }
}

/// The three basic predicates for a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub product_one: bool,
    pub product_one_free: bool,
    pub squarefree: bool,
}

/// Witness that a sequence over a cyclic group is `g`-smooth: terms are
/// `n_i · g` with `n_1 = 1 <= ... <= n_l`, `m = sum n_i < ord(g)`, and the
/// subsequence sums form exactly `{g, 2g, ..., mg}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothCertificate {
    pub g: Element,
    pub coefficients: Vec<u32>,
    pub m: u32,
}

/// Memoized product sets for every sub-multiset of a base sequence.
pub struct ProductTable {
    group: Group,
    support: Vec<Element>,
    radices: Vec<u32>,
    weights: Vec<usize>,
    entries: Vec<u64>,
    /// union of `pi(T)` over sub-multisets of each cardinality
    pi_by_len: Vec<u64>,
    /// bitset over keys: sub-multisets with the identity among their products
    po: Vec<u64>,
    total_len: usize,
}

impl ProductTable {
    pub fn build(seq: &Sequence) -> Result<Self> {
        Self::build_with(seq, DEFAULT_BUDGET)
    }

    pub fn build_with(seq: &Sequence, budget: usize) -> Result<Self> {
        let group = Arc::clone(seq.group());
        let mut support = Vec::new();
        let mut radices = Vec::new();
        for (e, &c) in seq.counts().iter().enumerate() {
            if c > 0 {
                support.push(e);
                radices.push(c);
            }
        }
        let mut weights = Vec::with_capacity(support.len());
        let mut nkeys: usize = 1;
        for &r in &radices {
            weights.push(nkeys);
            nkeys = nkeys
                .checked_mul(r as usize + 1)
                .filter(|&n| n <= budget)
                .ok_or_else(|| {
                    Error::capacity(format!(
                        "sub-multiset table would exceed the budget of {budget} keys"
                    ))
                })?;
        }

        let total_len = seq.len();
        let mut entries = vec![0u64; nkeys];
        let mut pi_by_len = vec![0u64; total_len + 1];
        let mut po = vec![0u64; nkeys.div_ceil(64)];
        let id_bit = 1u64 << group.identity();
        entries[0] = id_bit;
        pi_by_len[0] = id_bit;
        po[0] |= 1;

        // Odometer over digits; each key's products come from removing one
        // copy of each supported element.
        let mut digits = vec![0u32; support.len()];
        let mut size = 0usize;
        for key in 1..nkeys {
            // increment odometer
            let mut p = 0;
            loop {
                if digits[p] < radices[p] {
                    digits[p] += 1;
                    size += 1;
                    break;
                }
                size -= digits[p] as usize;
                digits[p] = 0;
                p += 1;
            }
            let mut bits = 0u64;
            for (i, &d) in digits.iter().enumerate() {
                if d > 0 {
                    bits |= group.translate_bits(entries[key - weights[i]], support[i]);
                }
            }
            entries[key] = bits;
            pi_by_len[size] |= bits;
            if bits & id_bit != 0 {
                po[key / 64] |= 1 << (key % 64);
            }
        }

        Ok(ProductTable {
            group,
            support,
            radices,
            weights,
            entries,
            pi_by_len,
            po,
            total_len,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Number of sub-multiset keys.
    pub fn num_keys(&self) -> usize {
        self.entries.len()
    }

    pub fn full_key(&self) -> usize {
        self.entries.len() - 1
    }

    /// `pi(S)` for the full base sequence.
    pub fn product_set(&self) -> ElementSet {
        ElementSet::from_bits(self.group.order(), self.entries[self.full_key()])
    }

    pub fn is_product_one(&self) -> bool {
        self.po_at(self.full_key())
    }

    /// True when no non-empty sub-multiset multiplies to the identity.
    pub fn is_product_one_free(&self) -> bool {
        if self.po[0] & !1 != 0 {
            return false;
        }
        self.po[1..].iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn po_at(&self, key: usize) -> bool {
        self.po[key / 64] >> (key % 64) & 1 == 1
    }

    #[inline]
    pub fn pi_bits(&self, key: usize) -> u64 {
        self.entries[key]
    }

    /// `Pi_n` for `n = Some`, else `Pi`: the union over non-empty
    /// sub-multisets.
    pub fn subsequence_products(&self, n: Option<usize>) -> Result<ElementSet> {
        match n {
            Some(n) => {
                if n < 1 || n > self.total_len {
                    return Err(Error::domain(format!(
                        "n = {n} out of range 1..={}",
                        self.total_len
                    )));
                }
                Ok(ElementSet::from_bits(self.group.order(), self.pi_by_len[n]))
            }
            None => {
                let mut acc = 0u64;
                for &m in &self.pi_by_len[1..] {
                    acc |= m;
                }
                Ok(ElementSet::from_bits(self.group.order(), acc))
            }
        }
    }

    /// Key of a sub-multiset given by its counts vector over the group.
    pub fn key_of(&self, sub: &Sequence) -> Result<usize> {
        if **sub.group() != *self.group {
            return Err(Error::domain("sub-multiset lives over a different group"));
        }
        let mut key = 0usize;
        for (e, &c) in sub.counts().iter().enumerate() {
            if c == 0 {
                continue;
            }
            match self.support.iter().position(|&s| s == e) {
                Some(i) if c <= self.radices[i] => key += c as usize * self.weights[i],
                _ => {
                    return Err(Error::domain(
                        "sub-multiset does not divide the base sequence",
                    ))
                }
            }
        }
        Ok(key)
    }

    /// Counts vector of the sub-multiset with the given key.
    pub fn sub_counts(&self, mut key: usize) -> Vec<u32> {
        let mut counts = vec![0u32; self.group.order()];
        for i in (0..self.support.len()).rev() {
            let d = key / self.weights[i];
            key %= self.weights[i];
            counts[self.support[i]] = d as u32;
        }
        counts
    }

    /// `pi(T)` for a sub-multiset `T` of the base.
    pub fn pi_of(&self, sub: &Sequence) -> Result<ElementSet> {
        Ok(ElementSet::from_bits(
            self.group.order(),
            self.entries[self.key_of(sub)?],
        ))
    }

    pub(crate) fn support(&self) -> &[Element] {
        &self.support
    }

    pub(crate) fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub(crate) fn radices(&self) -> &[u32] {
        &self.radices
    }

    /// Extracts an ordering of the full sequence whose left-to-right product
    /// equals `target`, if possible.
    pub fn ordering_to(&self, target: Element) -> Option<Vec<Element>> {
        let mut key = self.full_key();
        let mut want = target;
        if self.entries[key] & (1 << want) == 0 {
            return None;
        }
        let mut rev = Vec::with_capacity(self.total_len);
        let mut digits: Vec<u32> = {
            let counts = self.sub_counts(key);
            self.support.iter().map(|&e| counts[e]).collect()
        };
        while key != 0 {
            let mut advanced = false;
            for i in 0..self.support.len() {
                if digits[i] == 0 {
                    continue;
                }
                let g = self.support[i];
                let prev = self.group.mul(want, self.group.inverse(g));
                if self.entries[key - self.weights[i]] & (1 << prev) != 0 {
                    rev.push(g);
                    key -= self.weights[i];
                    digits[i] -= 1;
                    want = prev;
                    advanced = true;
                    break;
                }
            }
            debug_assert!(advanced, "table invariant: some last factor must work");
            if !advanced {
                return None;
            }
        }
        rev.reverse();
        Some(rev)
    }
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut token = String::new();
        if c == '(' {
            chars.next();
            let mut closed = false;
            for c in chars.by_ref() {
                if c == ')' {
                    closed = true;
                    break;
                }
                if !c.is_whitespace() {
                    token.push(c);
                }
            }
            if !closed {
                return Err(Error::validation("unclosed '(' in sequence text"));
            }
            // optional ^k straight after the paren
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                token.push(c);
                chars.next();
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                token.push(c);
                chars.next();
            }
        }
        tokens.push(token);
    }
    Ok(tokens)
}

fn split_multiplicity(token: &str) -> Result<(String, u32)> {
    if let Some(pos) = token.rfind('^') {
        let (name, rest) = token.split_at(pos);
        let mult: u32 = rest[1..]
            .parse()
            .map_err(|_| Error::validation(format!("bad multiplicity in term '{token}'")))?;
        if mult == 0 {
            return Err(Error::validation(format!(
                "zero multiplicity in term '{token}'"
            )));
        }
        Ok((name.to_string(), mult))
    } else {
        Ok((token.to_string(), 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupKind};

    fn group(kind: GroupKind) -> Group {
        Arc::new(FiniteGroup::build(kind).unwrap())
    }

    fn d6() -> Group {
        group(GroupKind::Dihedral { n: 3 })
    }

    /// Brute-force product set: multiply out every distinct ordering.
    fn pi_oracle(seq: &Sequence) -> ElementSet {
        let g = seq.group();
        let terms: Vec<Element> = seq.terms().collect();
        let mut out = ElementSet::empty(g.order());
        if terms.is_empty() {
            out.insert(g.identity());
            return out;
        }
        let mut perm = terms.clone();
        permute_all(&mut perm, 0, &mut |p: &[Element]| {
            let mut acc = g.identity();
            for &e in p {
                acc = g.mul(acc, e);
            }
            out.insert(acc);
        });
        out
    }

    fn permute_all(items: &mut [Element], k: usize, visit: &mut impl FnMut(&[Element])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute_all(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn empty_sequence_products() {
        let g = d6();
        let s = Sequence::empty(&g);
        assert_eq!(s.product_set().unwrap(), ElementSet::singleton(6, 0));
        let c = s.classify().unwrap();
        assert!(c.product_one);
        assert!(c.product_one_free);
    }

    #[test]
    fn pi_of_two_reflections_over_d6() {
        let g = d6();
        // t · (a t): the two orderings give a^-1 and a.
        let s = Sequence::parse(&g, "t (a t)").unwrap();
        let pi = s.product_set().unwrap();
        assert_eq!(pi, ElementSet::from_iter(6, [1, 2]));
        assert_eq!(pi, pi_oracle(&s));

        let big = s.subsequence_products(None).unwrap();
        // {t, at} from length 1, {a, a^2} from length 2
        assert_eq!(big, ElementSet::from_iter(6, [1, 2, 3, 4]));
    }

    #[test]
    fn abelian_product_is_the_sum() {
        let g = group(GroupKind::Cyclic { n: 5 });
        let s = Sequence::parse(&g, "1 2 3").unwrap();
        assert_eq!(s.product_set().unwrap(), ElementSet::singleton(5, 1));
    }

    #[test]
    fn pi_n_buckets() {
        let g = group(GroupKind::Cyclic { n: 7 });
        // Pi(g^[k]) = {g, 2g, ..., kg}
        let s = Sequence::from_pairs(&g, &[(1, 4)]).unwrap();
        assert_eq!(
            s.subsequence_products(None).unwrap(),
            ElementSet::from_iter(7, [1, 2, 3, 4])
        );
        // Pi_{|S|}(S) = pi(S)
        let g = d6();
        let s = Sequence::parse(&g, "t at a").unwrap();
        assert_eq!(
            s.subsequence_products(Some(3)).unwrap(),
            s.product_set().unwrap()
        );
        assert!(s.subsequence_products(Some(0)).is_err());
        assert!(s.subsequence_products(Some(4)).is_err());
    }

    #[test]
    fn sigma_examples() {
        let c5 = group(GroupKind::Cyclic { n: 5 });
        let s = Sequence::parse(&c5, "1^2 2").unwrap();
        assert_eq!(s.sigma(Some(2)).unwrap(), ElementSet::from_iter(5, [2, 3]));

        assert!(s.sigma(Some(0)).is_err());
        let zeros = Sequence::from_pairs(&c5, &[(0, 3)]).unwrap();
        assert_eq!(zeros.sigma(None).unwrap(), ElementSet::singleton(5, 0));

        let c4 = group(GroupKind::Cyclic { n: 4 });
        let s = Sequence::parse(&c4, "1 3").unwrap();
        assert_eq!(s.sigma(None).unwrap(), ElementSet::from_iter(4, [0, 1, 3]));

        let s = Sequence::parse(&d6(), "t").unwrap();
        assert!(s.sigma(None).is_err());
    }

    #[test]
    fn sigma_agrees_with_subsequence_products_on_abelian_groups() {
        let c12 = group(GroupKind::Cyclic { n: 12 });
        let s = Sequence::parse(&c12, "1^2 5 7^3 11").unwrap();
        for n in 1..=s.len() {
            assert_eq!(
                s.sigma(Some(n)).unwrap(),
                s.subsequence_products(Some(n)).unwrap()
            );
        }
        assert_eq!(
            s.sigma(None).unwrap(),
            s.subsequence_products(None).unwrap()
        );
    }

    #[test]
    fn classify_examples() {
        let g = d6();
        let c = Sequence::parse(&g, "t^2").unwrap().classify().unwrap();
        assert!(c.product_one);
        assert!(!c.product_one_free);

        let c5 = group(GroupKind::Cyclic { n: 5 });
        let c = Sequence::from_pairs(&c5, &[(1, 4)])
            .unwrap()
            .classify()
            .unwrap();
        assert!(!c.product_one);
        assert!(c.product_one_free);
        assert!(!c.squarefree);
    }

    #[test]
    fn smoothness_examples() {
        let c7 = group(GroupKind::Cyclic { n: 7 });
        let s = Sequence::parse(&c7, "1^2 2").unwrap();
        let cert = s.smoothness(Some(1)).unwrap().unwrap();
        assert_eq!(cert.coefficients, vec![1, 1, 2]);
        assert_eq!(cert.m, 4);
        assert_eq!(
            s.sigma(None).unwrap(),
            ElementSet::from_iter(7, [1, 2, 3, 4])
        );

        let c5 = group(GroupKind::Cyclic { n: 5 });
        let s = Sequence::from_pairs(&c5, &[(1, 4)]).unwrap();
        let cert = s.smoothness(None).unwrap().unwrap();
        assert_eq!(cert.g, 1);
        assert_eq!(cert.m, 4);

        // 1·4 sums to 0, so no certificate exists.
        let s = Sequence::parse(&c5, "1 4").unwrap();
        assert_eq!(s.smoothness(None).unwrap(), None);

        let g = d6();
        assert!(Sequence::parse(&g, "a").unwrap().smoothness(None).is_err());
    }

    #[test]
    fn transform_examples() {
        let g = d6();
        let id_map = Homomorphism::new(Arc::clone(&g), Arc::clone(&g), (0..6).collect()).unwrap();
        let s = Sequence::parse(&g, "t (a t) a").unwrap();
        assert_eq!(s.transform(&id_map).unwrap(), s);

        // quotient by <a> sends t·(at)·a to 1̄·1̄·0̄ over C2
        let rot = ElementSet::from_iter(6, [0, 1, 2]);
        let (_, phi) = g.quotient(&rot).unwrap();
        let image = s.transform(&phi).unwrap();
        assert_eq!(image.counts(), &[1, 2]);

        // inverse of t·a is t·a^2
        let s = Sequence::parse(&g, "t a").unwrap();
        assert_eq!(s.inverse(), Sequence::parse(&g, "t a2").unwrap());

        // a non-homomorphism map is rejected at construction
        assert!(Homomorphism::new(Arc::clone(&g), Arc::clone(&g), vec![0, 2, 1, 3, 4, 5]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = d6();
        for text in ["a^4 t^2", "t", "a a2 t", "()"] {
            let s = if text == "()" {
                Sequence::empty(&g)
            } else {
                Sequence::parse(&g, text).unwrap()
            };
            let printed = s.to_text();
            let back = if printed == "()" {
                Sequence::empty(&g)
            } else {
                Sequence::parse(&g, &printed).unwrap()
            };
            assert_eq!(s, back);
        }
        assert!(Sequence::parse(&g, "bogus").is_err());
        assert!(Sequence::parse(&g, "a^0").is_err());
        assert!(Sequence::parse(&g, "(a t").is_err());
    }

    #[test]
    fn table_recurrence_on_random_small_sequences() {
        // pi(T) = union over g of pi(T\g)·g for every non-empty T | S.
        let groups = [d6(), group(GroupKind::Dicyclic { n: 2 })];
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for _ in 0..50 {
            let g = &groups[next() % 2];
            let mut counts = vec![0u32; g.order()];
            for _ in 0..(next() % 8) {
                counts[next() % g.order()] += 1;
            }
            let s = Sequence::new(g, counts).unwrap();
            let table = ProductTable::build(&s).unwrap();
            for key in 1..table.num_keys() {
                let counts = table.sub_counts(key);
                let sub = Sequence::new(g, counts.clone()).unwrap();
                let mut want = ElementSet::empty(g.order());
                for (e, &c) in counts.iter().enumerate() {
                    if c > 0 {
                        let mut smaller = counts.clone();
                        smaller[e] -= 1;
                        let t = Sequence::new(g, smaller).unwrap();
                        want = want.union(&g.translate(table.pi_of(&t).unwrap(), e));
                    }
                }
                assert_eq!(table.pi_of(&sub).unwrap(), want);
            }
        }
    }

    #[test]
    fn ordering_witness_multiplies_to_identity() {
        let g = d6();
        let s = Sequence::parse(&g, "a^4 t^2").unwrap();
        let w = s.ordering_witness().unwrap().unwrap();
        assert_eq!(w.len(), 6);
        let mut acc = g.identity();
        for &e in &w {
            acc = g.mul(acc, e);
        }
        assert_eq!(acc, g.identity());

        let not_po = Sequence::parse(&g, "a").unwrap();
        assert_eq!(not_po.ordering_witness().unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let g = group(GroupKind::Cyclic { n: 8 });
        let s = Sequence::new(&g, vec![3; 8]).unwrap();
        // 4^8 = 65536 keys > 1000
        assert!(matches!(s.product_set_with(1000), Err(Error::Capacity(_))));
        assert!(s.product_set_with(1 << 17).is_ok());
    }
}
