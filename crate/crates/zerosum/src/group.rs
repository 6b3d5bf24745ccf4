//! Cayley-table groups of order at most 64 and the structural queries the
//! rest of the crate is built on: generated subgroups, stabilizers,
//! commutator subgroups, quotients, and the full automorphism group.
//!
//! Groups are validated exhaustively on construction and immutable
//! afterwards, so they can be shared freely across threads.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a group element inside its group's element list.
pub type Element = usize;

/// Largest supported group order.  Element subsets fit a single `u64`.
pub const MAX_ORDER: usize = 64;

/// Construction recipe for a [`FiniteGroup`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupKind {
    /// Cyclic group of order `n`, written additively.
    Cyclic { n: usize },
    /// Dihedral group of order `2n` with generators `a` (rotation of order
    /// `n`) and `t` (reflection): `a^n = t^2 = 1`, `t a = a^-1 t`.
    Dihedral { n: usize },
    /// Dicyclic group of order `4n`: `a^2n = 1`, `t^2 = a^n`, `t a = a^-1 t`.
    Dicyclic { n: usize },
    /// Arbitrary group given by an explicit Cayley table.
    Generic,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic { n } => write!(f, "cyclic:{n}"),
            GroupKind::Dihedral { n } => write!(f, "dihedral:{n}"),
            GroupKind::Dicyclic { n } => write!(f, "dicyclic:{n}"),
            GroupKind::Generic => write!(f, "generic"),
        }
    }
}

/// A subset of group elements, stored as a bit mask over element indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: u64,
    universe: u8,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        debug_assert!(universe <= MAX_ORDER);
        ElementSet {
            bits: 0,
            universe: universe as u8,
        }
    }

    pub fn full(universe: usize) -> Self {
        debug_assert!(universe <= MAX_ORDER);
        let bits = if universe == 64 {
            !0
        } else {
            (1u64 << universe) - 1
        };
        ElementSet {
            bits,
            universe: universe as u8,
        }
    }

    pub fn singleton(universe: usize, e: Element) -> Self {
        let mut s = Self::empty(universe);
        s.insert(e);
        s
    }

    pub fn from_iter(universe: usize, elems: impl IntoIterator<Item = Element>) -> Self {
        let mut s = Self::empty(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    /// Builds a set directly from a bit mask over element indices.
    pub fn from_bits(universe: usize, bits: u64) -> Self {
        debug_assert!(universe == 64 || bits >> universe == 0);
        ElementSet {
            bits,
            universe: universe as u8,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, e: Element) {
        debug_assert!(e < self.universe as usize);
        self.bits |= 1 << e;
    }

    pub fn remove(&mut self, e: Element) {
        self.bits &= !(1 << e);
    }

    pub fn contains(&self, e: Element) -> bool {
        e < self.universe as usize && self.bits >> e & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn union(&self, other: &Self) -> Self {
        ElementSet {
            bits: self.bits | other.bits,
            universe: self.universe,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        ElementSet {
            bits: self.bits & other.bits,
            universe: self.universe,
        }
    }

    pub fn complement(&self) -> Self {
        let full = Self::full(self.universe as usize);
        ElementSet {
            bits: full.bits & !self.bits,
            universe: self.universe,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as Element;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Chunked lookup tables for translating an [`ElementSet`] by one element.
///
/// `right[g]` maps the byte chunks of a set `X` to the chunks of `X·g`.
/// One multiplication of a whole set costs `ceil(order/8)` table lookups.
#[derive(Clone)]
struct MulTables {
    chunks: usize,
    right: Vec<Vec<u64>>, // right[g][chunk * 256 + byte]
}

impl MulTables {
    fn build(order: usize, table: &[Element]) -> Self {
        let chunks = order.div_ceil(8);
        let mut right = Vec::with_capacity(order);
        for g in 0..order {
            let mut maps = vec![0u64; chunks * 256];
            for c in 0..chunks {
                for byte in 0usize..256 {
                    let mut acc = 0u64;
                    let mut b = byte;
                    while b != 0 {
                        let lo = b.trailing_zeros() as usize;
                        b &= b - 1;
                        let x = c * 8 + lo;
                        if x < order {
                            acc |= 1u64 << table[x * order + g];
                        }
                    }
                    maps[c * 256 + byte] = acc;
                }
            }
            right.push(maps);
        }
        MulTables { chunks, right }
    }

    #[inline]
    fn shift_right(&self, bits: u64, g: Element) -> u64 {
        let maps = &self.right[g];
        let mut acc = 0u64;
        for c in 0..self.chunks {
            let byte = (bits >> (c * 8)) & 0xff;
            acc |= maps[c * 256 + byte as usize];
        }
        acc
    }
}

/// A finite group given by its full multiplication table.
///
/// `table[g * order + h]` is the index of `g·h`.  Construction validates the
/// Latin-square property, associativity over all triples, and the identity
/// and inverse laws, then precomputes element orders and set-translation
/// tables.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Element>,
    identity: Element,
    inverses: Vec<Element>,
    names: Vec<String>,
    kind: GroupKind,
    orders: Vec<usize>,
    abelian: bool,
    shift: MulTables,
}

/// Shared handle to an immutable group.
pub type Group = Arc<FiniteGroup>;

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.kind, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds and validates a group from an explicit Cayley table.
    ///
    /// `names` defaults to `g0, g1, ...` when not supplied.
    pub fn from_table(table: Vec<Element>, names: Option<Vec<String>>) -> Result<Self> {
        let order = (table.len() as f64).sqrt().round() as usize;
        if order == 0 || order * order != table.len() {
            return Err(Error::validation("Cayley table must be a non-empty square"));
        }
        if order > MAX_ORDER {
            return Err(Error::capacity(format!(
                "group order {order} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        if let Some(bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::validation(format!("table entry {bad} out of range")));
        }

        // Latin square: every row and column is a permutation.
        for i in 0..order {
            let mut row = 0u64;
            let mut col = 0u64;
            for j in 0..order {
                row |= 1 << table[i * order + j];
                col |= 1 << table[j * order + i];
            }
            let all = ElementSet::full(order).bits();
            if row != all || col != all {
                return Err(Error::validation(format!(
                    "row or column {i} of the Cayley table is not a permutation"
                )));
            }
        }

        // Two-sided identity.
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
            .ok_or_else(|| Error::validation("no identity element"))?;

        // Associativity over all triples.
        for x in 0..order {
            for y in 0..order {
                let xy = table[x * order + y];
                for z in 0..order {
                    if table[xy * order + z] != table[x * order + table[y * order + z]] {
                        return Err(Error::validation(format!(
                            "associativity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }

        let mut inverses = vec![0; order];
        for x in 0..order {
            inverses[x] = (0..order)
                .find(|&y| table[x * order + y] == identity)
                .ok_or_else(|| Error::validation(format!("element {x} has no inverse")))?;
        }

        let names = match names {
            Some(names) => {
                if names.len() != order {
                    return Err(Error::validation("names length does not match order"));
                }
                names
            }
            None => (0..order).map(|i| format!("g{i}")).collect(),
        };

        let mut orders = vec![0; order];
        for x in 0..order {
            let mut k = 1;
            let mut p = x;
            while p != identity {
                p = table[p * order + x];
                k += 1;
            }
            orders[x] = k;
        }

        let abelian =
            (0..order).all(|x| (0..order).all(|y| table[x * order + y] == table[y * order + x]));

        let shift = MulTables::build(order, &table);

        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverses,
            names,
            kind: GroupKind::Generic,
            orders,
            abelian,
            shift,
        })
    }

    /// Cyclic group of order `n`, elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("cyclic group needs n >= 1"));
        }
        if n > MAX_ORDER {
            return Err(Error::capacity(format!("order {n} exceeds {MAX_ORDER}")));
        }
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = (i + j) % n;
            }
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut g = Self::from_table(table, Some(names))?;
        g.kind = GroupKind::Cyclic { n };
        Ok(g)
    }

    /// Dihedral group of order `2n`.
    ///
    /// Elements are indexed canonically: `i in [0, n)` is the rotation `a^i`
    /// and `i in [n, 2n)` is the reflection `a^(i-n) t`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("dihedral group needs n >= 2"));
        }
        if 2 * n > MAX_ORDER {
            return Err(Error::capacity(format!(
                "order {} exceeds {MAX_ORDER}",
                2 * n
            )));
        }
        let order = 2 * n;
        let rot = |i: usize| i % n;
        let refl = |i: usize| n + i % n;
        let mut table = vec![0; order * order];
        for i in 0..n {
            for j in 0..n {
                table[rot(i) * order + rot(j)] = rot(i + j);
                table[rot(i) * order + refl(j)] = refl(i + j);
                table[refl(i) * order + rot(j)] = refl(i + n - j % n);
                table[refl(i) * order + refl(j)] = rot(i + n - j % n);
            }
        }
        let names = dihedral_style_names(n);
        let mut g = Self::from_table(table, Some(names))?;
        g.kind = GroupKind::Dihedral { n };
        debug_assert_eq!(g.orders[1], n);
        debug_assert_eq!(g.orders[n], 2);
        Ok(g)
    }

    /// Dicyclic group of order `4n`.
    ///
    /// Elements are indexed canonically: `i in [0, 2n)` is `a^i` and
    /// `i in [2n, 4n)` is `a^(i-2n) t`, with `t^2 = a^n`.
    pub fn dicyclic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("dicyclic group needs n >= 2"));
        }
        if 4 * n > MAX_ORDER {
            return Err(Error::capacity(format!(
                "order {} exceeds {MAX_ORDER}",
                4 * n
            )));
        }
        let m = 2 * n;
        let order = 4 * n;
        let rot = |i: usize| i % m;
        let refl = |i: usize| m + i % m;
        let mut table = vec![0; order * order];
        for i in 0..m {
            for j in 0..m {
                table[rot(i) * order + rot(j)] = rot(i + j);
                table[rot(i) * order + refl(j)] = refl(i + j);
                table[refl(i) * order + rot(j)] = refl(i + m - j % m);
                table[refl(i) * order + refl(j)] = rot(i + m - j % m + n);
            }
        }
        let names = dihedral_style_names(m);
        let mut g = Self::from_table(table, Some(names))?;
        g.kind = GroupKind::Dicyclic { n };
        debug_assert_eq!(g.orders[1], m);
        debug_assert_eq!(g.table[m * order + m], rot(n)); // t^2 = a^n
        Ok(g)
    }

    /// Builds a group from a [`GroupKind`] recipe.
    pub fn build(kind: GroupKind) -> Result<Self> {
        match kind {
            GroupKind::Cyclic { n } => Self::cyclic(n),
            GroupKind::Dihedral { n } => Self::dihedral(n),
            GroupKind::Dicyclic { n } => Self::dicyclic(n),
            GroupKind::Generic => Err(Error::domain("generic groups need an explicit table")),
        }
    }

    /// Direct product of two groups, with pairs ordered `(a, b) -> a*|H|+b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let order = a.order * b.order;
        if order > MAX_ORDER {
            return Err(Error::capacity(format!(
                "order {order} exceeds {MAX_ORDER}"
            )));
        }
        let idx = |x: Element, y: Element| x * b.order + y;
        let mut table = vec![0; order * order];
        for x1 in 0..a.order {
            for y1 in 0..b.order {
                for x2 in 0..a.order {
                    for y2 in 0..b.order {
                        table[idx(x1, y1) * order + idx(x2, y2)] =
                            idx(a.mul(x1, x2), b.mul(y1, y2));
                    }
                }
            }
        }
        let names = (0..a.order)
            .flat_map(|x| (0..b.order).map(move |y| (x, y)))
            .map(|(x, y)| format!("{},{}", a.names[x], b.names[y]))
            .collect();
        Self::from_table(table, Some(names))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e]
    }

    /// Index of the element with the given display name.
    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn mul(&self, g: Element, h: Element) -> Element {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inverse(&self, g: Element) -> Element {
        self.inverses[g]
    }

    /// Order of an element: the least `k >= 1` with `g^k = 1`.
    pub fn element_order(&self, g: Element) -> usize {
        self.orders[g]
    }

    pub fn check_element(&self, e: Element) -> Result<()> {
        if e < self.order {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "element index {e} out of range for order {}",
                self.order
            )))
        }
    }

    /// Translates a set on the right: `{x·g : x in set}`.
    #[inline]
    pub fn translate(&self, set: ElementSet, g: Element) -> ElementSet {
        ElementSet::from_bits(self.order, self.shift.shift_right(set.bits(), g))
    }

    /// Raw bit-mask variant of [`FiniteGroup::translate`] for hot loops.
    #[inline]
    pub(crate) fn translate_bits(&self, bits: u64, g: Element) -> u64 {
        self.shift.shift_right(bits, g)
    }

    /// The subgroup generated by a non-empty seed set.
    pub fn generated_subgroup(&self, seed: &ElementSet) -> Result<ElementSet> {
        if seed.is_empty() {
            return Err(Error::domain("generated subgroup needs a non-empty seed"));
        }
        let mut closure = ElementSet::singleton(self.order, self.identity);
        for e in seed.iter() {
            self.check_element(e)?;
            closure.insert(e);
            closure.insert(self.inverse(e));
        }
        loop {
            let mut next = closure;
            for x in closure.iter() {
                next = next.union(&self.translate(closure, x));
            }
            if next == closure {
                return Ok(closure);
            }
            closure = next;
        }
    }

    /// Left stabilizer `{g : g·S = S}` of a non-empty subset.  Always a
    /// subgroup, and `S` is a union of right cosets of it.
    pub fn left_stabilizer(&self, subset: &ElementSet) -> Result<ElementSet> {
        if subset.is_empty() {
            return Err(Error::domain("stabilizer of the empty set is rejected"));
        }
        let mut stab = ElementSet::empty(self.order);
        for g in 0..self.order {
            // g·S computed by translating on the left: {g·s}.
            let mut gs = ElementSet::empty(self.order);
            for s in subset.iter() {
                gs.insert(self.mul(g, s));
            }
            if gs == *subset {
                stab.insert(g);
            }
        }
        Ok(stab)
    }

    /// The commutator subgroup, generated by all `x^-1 y^-1 x y`.
    pub fn commutator_subgroup(&self) -> ElementSet {
        let mut seed = ElementSet::singleton(self.order, self.identity);
        for x in 0..self.order {
            for y in 0..self.order {
                let c = self.mul(self.mul(self.inverse(x), self.inverse(y)), self.mul(x, y));
                seed.insert(c);
            }
        }
        self.generated_subgroup(&seed)
            .expect("seed contains the identity")
    }

    /// Tests whether a subset is a normal subgroup.
    pub fn is_normal_subgroup(&self, n: &ElementSet) -> bool {
        if !n.contains(self.identity) {
            return false;
        }
        match self.generated_subgroup(n) {
            Ok(c) if c == *n => {}
            _ => return false,
        }
        (0..self.order).all(|g| {
            n.iter()
                .all(|x| n.contains(self.mul(self.mul(g, x), self.inverse(g))))
        })
    }

    /// Quotient by a normal subgroup, returning the quotient group and the
    /// canonical projection.
    ///
    /// Coset indices are assigned in order of their least member, so the
    /// quotient is deterministic.
    pub fn quotient(&self, n: &ElementSet) -> Result<(FiniteGroup, Homomorphism)> {
        if !self.is_normal_subgroup(n) {
            return Err(Error::domain("quotient requires a normal subgroup"));
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps: Vec<Element> = Vec::new();
        for x in 0..self.order {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for h in n.iter() {
                coset_of[self.mul(x, h)] = id;
            }
        }
        let q = reps.len();
        let mut table = vec![0; q * q];
        for (i, &x) in reps.iter().enumerate() {
            for (j, &y) in reps.iter().enumerate() {
                table[i * q + j] = coset_of[self.mul(x, y)];
            }
        }
        let names = reps
            .iter()
            .map(|&x| format!("[{}]", self.names[x]))
            .collect();
        let quot = FiniteGroup::from_table(table, Some(names))?;
        let hom = Homomorphism::new(Arc::new(self.clone()), Arc::new(quot.clone()), coset_of)?;
        Ok((quot, hom))
    }

    /// All automorphisms, as permutations of element indices.
    ///
    /// Found by backtracking over images of a generating set and extending
    /// each candidate through the Cayley graph.  Guarded by [`MAX_ORDER`].
    pub fn automorphism_group(&self) -> Result<Vec<Vec<Element>>> {
        if self.order > MAX_ORDER {
            return Err(Error::capacity(
                "automorphism search is limited to order 64",
            ));
        }
        let gens = self.small_generating_set();
        let mut found: Vec<Vec<Element>> = Vec::new();
        let mut images = vec![0; gens.len()];
        self.autos_backtrack(&gens, 0, &mut images, &mut found);
        found.sort();
        Ok(found)
    }

    /// A small generating set, chosen greedily and deterministically.
    fn small_generating_set(&self) -> Vec<Element> {
        let mut gens = Vec::new();
        let mut span = ElementSet::singleton(self.order, self.identity);
        // Prefer high-order elements so two generators usually suffice.
        let mut candidates: Vec<Element> = (0..self.order).collect();
        candidates.sort_by_key(|&e| (std::cmp::Reverse(self.orders[e]), e));
        for e in candidates {
            if !span.contains(e) {
                gens.push(e);
                span = self
                    .generated_subgroup(&ElementSet::from_iter(self.order, gens.iter().copied()))
                    .expect("non-empty seed");
                if span.len() == self.order {
                    break;
                }
            }
        }
        gens
    }

    fn autos_backtrack(
        &self,
        gens: &[Element],
        depth: usize,
        images: &mut [Element],
        found: &mut Vec<Vec<Element>>,
    ) {
        if depth == gens.len() {
            if let Some(map) = self.extend_generator_map(gens, images) {
                found.push(map);
            }
            return;
        }
        let want = self.orders[gens[depth]];
        for img in 0..self.order {
            if self.orders[img] == want {
                images[depth] = img;
                self.autos_backtrack(gens, depth + 1, images, found);
            }
        }
    }

    /// Extends `gens[i] -> images[i]` to a full automorphism, or fails.
    fn extend_generator_map(&self, gens: &[Element], images: &[Element]) -> Option<Vec<Element>> {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = self.identity;
        let mut queue = vec![self.identity];
        let mut seen = 1;
        while let Some(x) = queue.pop() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let m = self.mul(map[x], h);
                if map[y] == usize::MAX {
                    map[y] = m;
                    seen += 1;
                    queue.push(y);
                } else if map[y] != m {
                    return None;
                }
            }
        }
        if seen != self.order {
            return None; // gens do not generate; cannot happen for our sets
        }
        let mut hit = ElementSet::empty(self.order);
        for &m in &map {
            hit.insert(m);
        }
        if hit.len() != self.order {
            return None;
        }
        for x in 0..self.order {
            for y in 0..self.order {
                if map[self.mul(x, y)] != self.mul(map[x], map[y]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// The canonical projection onto the quotient by the commutator
    /// subgroup, i.e. the abelianization.
    pub fn abelianization(&self) -> (FiniteGroup, Homomorphism) {
        let derived = self.commutator_subgroup();
        self.quotient(&derived)
            .expect("commutator subgroup is normal")
    }
}

/// Names `1, a, a2, ..., t, at, a2t, ...` for rotation/reflection indexing.
fn dihedral_style_names(n: usize) -> Vec<String> {
    let rot_name = |i: usize| match i {
        0 => "1".to_string(),
        1 => "a".to_string(),
        i => format!("a{i}"),
    };
    let refl_name = |i: usize| match i {
        0 => "t".to_string(),
        1 => "at".to_string(),
        i => format!("a{i}t"),
    };
    (0..n).map(rot_name).chain((0..n).map(refl_name)).collect()
}

/// A validated group homomorphism given by its element map.
#[derive(Clone)]
pub struct Homomorphism {
    from: Group,
    to: Group,
    map: Vec<Element>,
}

impl Homomorphism {
    /// Validates `map[x·y] = map[x]·map[y]` over all pairs.
    pub fn new(from: Group, to: Group, map: Vec<Element>) -> Result<Self> {
        if map.len() != from.order() {
            return Err(Error::domain(
                "homomorphism map length must equal the domain order",
            ));
        }
        for &m in &map {
            to.check_element(m)?;
        }
        for x in 0..from.order() {
            for y in 0..from.order() {
                if map[from.mul(x, y)] != to.mul(map[x], map[y]) {
                    return Err(Error::domain(format!(
                        "map is not a homomorphism at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(Homomorphism { from, to, map })
    }

    pub fn from_group(&self) -> &Group {
        &self.from
    }

    pub fn to_group(&self) -> &Group {
        &self.to
    }

    pub fn apply(&self, e: Element) -> Element {
        self.map[e]
    }

    /// The kernel as a subset of the domain.
    pub fn kernel(&self) -> ElementSet {
        ElementSet::from_iter(
            self.from.order(),
            (0..self.from.order()).filter(|&x| self.map[x] == self.to.identity()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d6() -> FiniteGroup {
        FiniteGroup::dihedral(3).unwrap()
    }

    fn q8() -> FiniteGroup {
        FiniteGroup::dicyclic(2).unwrap()
    }

    #[test]
    fn dihedral_3_orders_and_relation() {
        let g = d6();
        assert_eq!(g.order(), 6);
        assert_eq!(g.element_order(1), 3); // a
        assert_eq!(g.element_order(3), 2); // t
                                           // t a = a^-1 t = a^2 t
        assert_eq!(g.mul(3, 1), g.mul(2, 3));
        assert_eq!(g.name(g.mul(3, 1)), "a2t");
    }

    #[test]
    fn cyclic_1_is_trivial() {
        let g = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn dicyclic_2_reflection_coset_orders() {
        // Independent oracle: compute orders for all 8 elements by repeated
        // multiplication and check every element outside <a> has order 4.
        let g = q8();
        assert_eq!(g.order(), 8);
        for x in 0..8 {
            let mut k = 1;
            let mut p = x;
            while p != g.identity() {
                p = g.mul(p, x);
                k += 1;
            }
            assert_eq!(k, g.element_order(x));
            if x >= 4 {
                assert_eq!(k, 4, "element {} should have order 4", g.name(x));
            }
        }
    }

    #[test]
    fn q8_t_squared_is_a_squared() {
        let g = q8();
        // indices: a = 1, t = 4
        assert_eq!(g.mul(4, 4), 2);
    }

    #[test]
    fn identity_has_order_one() {
        for g in [
            FiniteGroup::cyclic(5).unwrap(),
            d6(),
            q8(),
            FiniteGroup::dihedral(4).unwrap(),
        ] {
            assert_eq!(g.element_order(g.identity()), 1);
        }
    }

    #[test]
    fn group_axioms_hold_exhaustively_for_target_groups() {
        // Construction already validates; re-assert the laws directly.
        let groups = vec![
            FiniteGroup::cyclic(6).unwrap(),
            d6(),
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            q8(),
            FiniteGroup::dicyclic(3).unwrap(),
        ];
        for g in groups {
            let n = g.order();
            for x in 0..n {
                assert_eq!(g.mul(g.identity(), x), x);
                assert_eq!(g.mul(x, g.identity()), x);
                assert_eq!(g.mul(x, g.inverse(x)), g.identity());
                for y in 0..n {
                    for z in 0..n {
                        assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        // 2x2 table that is not a Latin square.
        assert!(matches!(
            FiniteGroup::from_table(vec![0, 0, 1, 1], None),
            Err(Error::Validation(_))
        ));
        // Latin square without identity/associativity structure:
        // rows are cyclic shifts but scrambled so no two-sided identity.
        assert!(FiniteGroup::from_table(vec![1, 0, 2, 2, 1, 0, 0, 2, 1], None).is_err());
    }

    #[test]
    fn kind_minimums_and_capacity() {
        assert!(matches!(FiniteGroup::cyclic(0), Err(Error::Domain(_))));
        assert!(matches!(FiniteGroup::dihedral(1), Err(Error::Domain(_))));
        assert!(matches!(FiniteGroup::dicyclic(1), Err(Error::Domain(_))));
        assert!(matches!(FiniteGroup::cyclic(65), Err(Error::Capacity(_))));
        assert!(matches!(FiniteGroup::dihedral(33), Err(Error::Capacity(_))));
    }

    #[test]
    fn generated_subgroup_examples() {
        let g = d6();
        let rot = g.generated_subgroup(&ElementSet::singleton(6, 1)).unwrap();
        assert_eq!(rot, ElementSet::from_iter(6, [0, 1, 2]));

        // Oracle: closure of {t, at} computed by fixpoint must be everything.
        let all = g
            .generated_subgroup(&ElementSet::from_iter(6, [3, 4]))
            .unwrap();
        assert_eq!(all.len(), 6);

        let triv = g.generated_subgroup(&ElementSet::singleton(6, 0)).unwrap();
        assert_eq!(triv, ElementSet::singleton(6, 0));

        assert!(g.generated_subgroup(&ElementSet::empty(6)).is_err());
    }

    #[test]
    fn left_stabilizer_examples() {
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let s = c6
            .left_stabilizer(&ElementSet::from_iter(6, [0, 3]))
            .unwrap();
        assert_eq!(s, ElementSet::from_iter(6, [0, 3]));
        let s = c6.left_stabilizer(&ElementSet::singleton(6, 1)).unwrap();
        assert_eq!(s, ElementSet::singleton(6, 0));

        let c4 = FiniteGroup::cyclic(4).unwrap();
        let s = c4.left_stabilizer(&ElementSet::full(4)).unwrap();
        assert_eq!(s, ElementSet::full(4));

        assert!(c4.left_stabilizer(&ElementSet::empty(4)).is_err());
    }

    #[test]
    fn stabilizer_is_a_subgroup_and_subset_is_coset_union() {
        let g = q8();
        for bits in [0b0110u64, 0b1010_1010, 0b0011_1100, 0b1000_0001] {
            let subset = ElementSet::from_bits(8, bits);
            let stab = g.left_stabilizer(&subset).unwrap();
            // closed under mul and inverse
            for x in stab.iter() {
                assert!(stab.contains(g.inverse(x)));
                for y in stab.iter() {
                    assert!(stab.contains(g.mul(x, y)));
                }
            }
            // subset is a union of right cosets H·x
            for x in subset.iter() {
                for h in stab.iter() {
                    assert!(subset.contains(g.mul(h, x)));
                }
            }
        }
    }

    #[test]
    fn commutator_subgroups() {
        // Oracle: generate from the raw commutator list.
        let brute = |g: &FiniteGroup| {
            let mut seed = ElementSet::singleton(g.order(), g.identity());
            for x in 0..g.order() {
                for y in 0..g.order() {
                    seed.insert(g.mul(g.mul(g.inverse(x), g.inverse(y)), g.mul(x, y)));
                }
            }
            g.generated_subgroup(&seed).unwrap()
        };

        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(c6.commutator_subgroup(), ElementSet::singleton(6, 0));

        let g = d6();
        let expect = ElementSet::from_iter(6, [0, 1, 2]);
        assert_eq!(g.commutator_subgroup(), expect);
        assert_eq!(brute(&g), expect);

        let g = q8();
        let expect = ElementSet::from_iter(8, [0, 2]);
        assert_eq!(g.commutator_subgroup(), expect);
        assert_eq!(brute(&g), expect);
    }

    #[test]
    fn quotient_examples() {
        let g = d6();
        let (by_triv, _) = g.quotient(&ElementSet::singleton(6, 0)).unwrap();
        assert_eq!(by_triv.order(), 6);
        let (by_all, _) = g.quotient(&ElementSet::full(6)).unwrap();
        assert_eq!(by_all.order(), 1);

        let c6 = FiniteGroup::cyclic(6).unwrap();
        let (q, phi) = c6.quotient(&ElementSet::from_iter(6, [0, 3])).unwrap();
        assert_eq!(q.order(), 3);
        assert!((0..3).any(|e| q.element_order(e) == 3));
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(phi.apply(c6.mul(x, y)), q.mul(phi.apply(x), phi.apply(y)));
            }
        }

        // Non-normal subgroup of D6: <t> = {1, t}.
        assert!(g.quotient(&ElementSet::from_iter(6, [0, 3])).is_err());
    }

    #[test]
    fn automorphism_counts() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(c3.automorphism_group().unwrap().len(), 2);

        // Oracle for D6: try all 6! bijections directly.
        let g = d6();
        let mut brute = 0;
        let mut perm: Vec<usize> = (0..6).collect();
        let mut count_perms = |perm: &Vec<usize>| {
            let ok = (0..6).all(|x| (0..6).all(|y| perm[g.mul(x, y)] == g.mul(perm[x], perm[y])));
            if ok {
                brute += 1;
            }
        };
        // Heap's algorithm, iterative.
        let mut c = [0usize; 6];
        count_perms(&perm);
        let mut i = 0;
        while i < 6 {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                count_perms(&perm);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(brute, 6);

        let auts = g.automorphism_group().unwrap();
        assert_eq!(auts.len(), 6);
        let id: Vec<usize> = (0..6).collect();
        assert!(auts.contains(&id));
    }

    #[test]
    fn automorphisms_preserve_order_and_compose() {
        for g in [d6(), q8(), FiniteGroup::dihedral(4).unwrap()] {
            let auts = g.automorphism_group().unwrap();
            for a in &auts {
                for x in 0..g.order() {
                    assert_eq!(g.element_order(a[x]), g.element_order(x));
                }
            }
            for a in &auts {
                for b in &auts {
                    let comp: Vec<usize> = (0..g.order()).map(|x| a[b[x]]).collect();
                    assert!(auts.contains(&comp));
                }
            }
        }
    }

    #[test]
    fn aut_q8_has_order_24() {
        assert_eq!(q8().automorphism_group().unwrap().len(), 24);
    }

    #[test]
    fn direct_product_c2_c2() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::direct_product(&c2, &c2).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        for x in 1..4 {
            assert_eq!(v4.element_order(x), 2);
        }
    }
}
