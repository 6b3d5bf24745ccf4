//! Minimal product-one sequences (atoms), exhaustive censuses of them, and
//! the small/large Davenport constants.
//!
//! A product-one sequence is an *atom* when it cannot be split into two
//! non-trivial product-one subsequences.  The census enumerates counts
//! vectors of a fixed total length depth-first, sharing one incremental
//! product-set table along the search path, and prunes by
//!
//! * canonical form: only counts vectors that are lexicographically minimal
//!   on the decided prefix under the admissible automorphisms survive, and
//! * reachability in the abelianization: a completion can only multiply to
//!   the identity if the remaining terms can reach the required class of
//!   `G/G'`.
//!
//! Both prunes are exact, so a census is a complete list of atom orbits.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, FiniteGroup, Group};
use crate::seq::{ProductTable, Sequence};
use crate::DEFAULT_BUDGET;

/// Tuning knobs shared by the search entry points.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Cap on the number of sub-multiset keys a product table may hold.
    pub budget: usize,
    /// Worker pool width; `None` uses all available cores.
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            jobs: None,
        }
    }
}

/// Outcome of an atom test, with a concrete counterexample when reducible.
#[derive(Clone, Debug)]
pub struct AtomVerdict {
    pub is_product_one: bool,
    /// A split `(T, S·T^[-1])` into two non-trivial product-one
    /// subsequences, when one exists.  `T` is the lexicographically least
    /// qualifying sub-multiset.
    pub split: Option<(Sequence, Sequence)>,
    pub is_atom: bool,
}

/// Tests whether a sequence is a minimal product-one sequence.
pub fn is_atom(seq: &Sequence) -> Result<AtomVerdict> {
    is_atom_with(seq, DEFAULT_BUDGET)
}

pub fn is_atom_with(seq: &Sequence, budget: usize) -> Result<AtomVerdict> {
    let table = ProductTable::build_with(seq, budget)?;
    let full = table.full_key();
    let product_one = table.is_product_one();
    let mut split = None;
    if full > 0 {
        let mut best: Option<Vec<u32>> = None;
        for t in 1..full {
            if table.po_at(t) && table.po_at(full - t) {
                let counts = table.sub_counts(t);
                if best.as_ref().is_none_or(|b| counts < *b) {
                    best = Some(counts);
                }
            }
        }
        if let Some(counts) = best {
            let t = Sequence::new(seq.group(), counts)?;
            let rest = seq.remove(&t)?;
            split = Some((t, rest));
        }
    }
    let is_atom = product_one && !seq.is_empty() && split.is_none();
    Ok(AtomVerdict {
        is_product_one: product_one,
        split,
        is_atom,
    })
}

/// Lexicographically least counts vector in the automorphism orbit of `S`.
pub fn canonicalize(seq: &Sequence) -> Result<Sequence> {
    let auts = seq.group().automorphism_group()?;
    let counts = seq.counts();
    let mut best: Option<Vec<u32>> = None;
    for a in &auts {
        let mut image = vec![0u32; counts.len()];
        for (e, &c) in counts.iter().enumerate() {
            image[a[e]] = c;
        }
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    }
    Sequence::new(
        seq.group(),
        best.expect("automorphism group contains the identity"),
    )
}

/// A complete census of the atoms of one length, as orbit representatives
/// under the automorphisms preserving the allowed support.
#[derive(Clone)]
pub struct CensusResult {
    group: Group,
    length: usize,
    reps: Vec<Sequence>,
    auts: Vec<Vec<Element>>,
}

impl CensusResult {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Canonical representatives in lexicographic counts order.
    pub fn representatives(&self) -> &[Sequence] {
        &self.reps
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The automorphisms used for orbit reduction.
    pub fn automorphisms(&self) -> &[Vec<Element>] {
        &self.auts
    }

    /// Full orbit of one representative, as counts vectors.
    pub fn orbit_of(&self, rep: &Sequence) -> BTreeSet<Vec<u32>> {
        let mut orbit = BTreeSet::new();
        for a in &self.auts {
            let mut image = vec![0u32; rep.counts().len()];
            for (e, &c) in rep.counts().iter().enumerate() {
                image[a[e]] = c;
            }
            orbit.insert(image);
        }
        orbit
    }

    /// Every atom of this length, orbits expanded, as counts vectors.
    pub fn expanded(&self) -> BTreeSet<Vec<u32>> {
        let mut all = BTreeSet::new();
        for rep in &self.reps {
            all.extend(self.orbit_of(rep));
        }
        all
    }

    /// Number of atoms with orbits expanded.
    pub fn total_atoms(&self) -> usize {
        self.expanded().len()
    }
}

/// Exhaustive census of atoms of the given length over the whole group.
pub fn max_atom_census(group: &Group, length: usize, cfg: &SearchConfig) -> Result<CensusResult> {
    census_impl(group, length, None, cfg)
}

/// Census restricted to sequences supported inside `support`.
pub fn restricted_atom_census(
    group: &Group,
    length: usize,
    support: ElementSet,
    cfg: &SearchConfig,
) -> Result<CensusResult> {
    census_impl(group, length, Some(support), cfg)
}

/// Small Davenport constant: the maximal length of a product-one free
/// sequence, with a lexicographically least witness.
pub fn small_davenport(group: &Group, cfg: &SearchConfig) -> Result<(usize, Sequence)> {
    let auts = group.automorphism_group()?;
    let order = group.order();
    let eligible: Vec<Element> = (0..order).filter(|&e| e != group.identity()).collect();
    // A product-one free sequence holds fewer than ord(g) copies of g.
    let caps: Vec<u32> = eligible
        .iter()
        .map(|&e| group.element_order(e) as u32 - 1)
        .collect();
    let mut suffix_cap = vec![0usize; eligible.len() + 1];
    for i in (0..eligible.len()).rev() {
        suffix_cap[i] = suffix_cap[i + 1] + caps[i] as usize;
    }

    let elig_rank = rank_map(order, &eligible);
    let mut dfs = FreeDfs {
        auts,
        eligible,
        caps,
        suffix_cap,
        elig_rank,
        counts: vec![0; order],
        table: IncrementalTable::new(group, cfg.budget),
        best_len: 0,
        best: vec![0; order],
    };
    dfs.run_inner(0, 0)?;
    let witness = Sequence::new(group, dfs.best.clone())?;
    Ok((dfs.best_len, witness))
}

/// Large Davenport constant: the maximal atom length, searched downward
/// from `|G|`, with a lexicographically least witness.
pub fn large_davenport(group: &Group, cfg: &SearchConfig) -> Result<(usize, Sequence)> {
    for len in (1..=group.order()).rev() {
        let census = max_atom_census(group, len, cfg)?;
        if let Some(rep) = census.representatives().first() {
            return Ok((len, rep.clone()));
        }
    }
    Err(Error::domain(
        "no atoms found; the group order must be positive",
    ))
}

/// Reference enumerator: checks every counts vector of the given length with
/// a fresh product table and no pruning.  The oracle the pruned census is
/// validated against.
pub fn census_reference(
    group: &Group,
    length: usize,
    support: Option<ElementSet>,
    budget: usize,
) -> Result<BTreeSet<Vec<u32>>> {
    let order = group.order();
    let mask = support.unwrap_or_else(|| ElementSet::full(order));
    let mut out = BTreeSet::new();
    if length == 0 {
        return Ok(out);
    }
    if length == 1 {
        if order == 1 && mask.contains(group.identity()) {
            out.insert(vec![1u32]);
        }
        return Ok(out);
    }
    let eligible: Vec<Element> = (0..order)
        .filter(|&e| e != group.identity() && mask.contains(e))
        .collect();

    fn rec(
        group: &Group,
        eligible: &[Element],
        pos: usize,
        left: usize,
        counts: &mut Vec<u32>,
        budget: usize,
        out: &mut BTreeSet<Vec<u32>>,
    ) -> Result<()> {
        if left == 0 {
            let seq = Sequence::new(group, counts.clone())?;
            if is_atom_with(&seq, budget)?.is_atom {
                out.insert(counts.clone());
            }
            return Ok(());
        }
        if pos == eligible.len() {
            return Ok(());
        }
        for c in 0..=left {
            counts[eligible[pos]] = c as u32;
            rec(group, eligible, pos + 1, left - c, counts, budget, out)?;
        }
        counts[eligible[pos]] = 0;
        Ok(())
    }

    let mut counts = vec![0u32; order];
    rec(group, &eligible, 0, length, &mut counts, budget, &mut out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// census internals
// ---------------------------------------------------------------------------

fn rank_map(order: usize, eligible: &[Element]) -> Vec<Option<usize>> {
    let mut rank = vec![None; order];
    for (i, &e) in eligible.iter().enumerate() {
        rank[e] = Some(i);
    }
    rank
}

/// Automorphisms that map the eligible element set onto itself.
fn support_preserving_auts(group: &FiniteGroup, eligible: &[Element]) -> Result<Vec<Vec<Element>>> {
    let all = group.automorphism_group()?;
    let mask = ElementSet::from_iter(group.order(), eligible.iter().copied());
    Ok(all
        .into_iter()
        .filter(|a| eligible.iter().all(|&e| mask.contains(a[e])))
        .collect())
}

/// Reachability in the abelianization: which classes of `G/G'` are sums of
/// exactly `r` terms drawn (with repetition) from a suffix of the eligible
/// element list.  A product-one completion must reach the identity class.
struct AbelianReach {
    class_of: Vec<usize>,
    q_mul: Vec<usize>,
    q_order: usize,
    id_class: usize,
    q_inv: Vec<usize>,
    /// `reach[i][r]`: classes reachable with exactly `r` terms from
    /// `eligible[i..]`.
    reach: Vec<Vec<u64>>,
}

impl AbelianReach {
    fn build(group: &FiniteGroup, eligible: &[Element], max_len: usize) -> Self {
        let (quot, phi) = group.abelianization();
        let q = quot.order();
        let class_of: Vec<usize> = (0..group.order()).map(|e| phi.apply(e)).collect();
        let q_mul: Vec<usize> = (0..q)
            .flat_map(|x| (0..q).map(move |y| (x, y)))
            .map(|(x, y)| quot.mul(x, y))
            .collect();
        let id_class = quot.identity();
        let q_inv: Vec<usize> = (0..q).map(|x| quot.inverse(x)).collect();

        let mut reach = vec![vec![0u64; max_len + 1]; eligible.len() + 1];
        reach[eligible.len()][0] = 1u64 << id_class;
        for i in (0..eligible.len()).rev() {
            let cls = class_of[eligible[i]];
            for r in 0..=max_len {
                let mut acc = 0u64;
                let mut shift_class = id_class;
                for t in 0..=r {
                    let tail = reach[i + 1][r - t];
                    let mut bits = tail;
                    while bits != 0 {
                        let c = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        acc |= 1u64 << q_mul[shift_class * q + c];
                    }
                    shift_class = q_mul[shift_class * q + cls];
                }
                reach[i][r] = acc;
            }
        }
        AbelianReach {
            class_of,
            q_mul,
            q_order: q,
            id_class,
            q_inv,
            reach,
        }
    }

    #[inline]
    fn class_mul(&self, a: usize, b: usize) -> usize {
        self.q_mul[a * self.q_order + b]
    }

    /// Can `remaining` further terms from `eligible[pos..]` complete the
    /// partial class sum to the identity class?
    #[inline]
    fn feasible(&self, pos: usize, remaining: usize, class_sum: usize) -> bool {
        let needed = self.q_inv[class_sum];
        self.reach[pos][remaining] >> needed & 1 == 1
    }
}

/// Incrementally grown product-set table over the DFS prefix multiset.
///
/// Keys are mixed-radix ranks with the newest support element carrying the
/// largest weight, so appending one more copy of the newest element appends
/// one contiguous slab of keys.
struct IncrementalTable {
    group: Group,
    budget: usize,
    support: Vec<Element>,
    radices: Vec<u32>,
    weights: Vec<usize>,
    entries: Vec<u64>,
    /// ascending keys whose product set contains the identity
    po_keys: Vec<usize>,
    id_bit: u64,
}

impl IncrementalTable {
    fn new(group: &Group, budget: usize) -> Self {
        let id_bit = 1u64 << group.identity();
        IncrementalTable {
            group: Arc::clone(group),
            budget,
            support: Vec::new(),
            radices: Vec::new(),
            weights: Vec::new(),
            entries: vec![id_bit],
            po_keys: vec![0],
            id_bit,
        }
    }

    /// Adds one copy of `e`; `e` must be the newest support element or have
    /// a larger index than all current support.
    fn push_copy(&mut self, e: Element) -> Result<()> {
        if self.support.last() != Some(&e) {
            debug_assert!(self.support.last().is_none_or(|&s| s < e));
            self.support.push(e);
            self.radices.push(0);
            self.weights.push(self.entries.len());
        }
        let w = *self.weights.last().unwrap();
        let d = *self.radices.last().unwrap() as usize + 1;
        let base = d * w;
        if base + w > self.budget {
            return Err(Error::capacity(format!(
                "search table would exceed the budget of {} keys",
                self.budget
            )));
        }
        self.entries.resize(base + w, 0);
        // Odometer over the digits of the older support elements.
        let inner = self.support.len() - 1;
        let mut digits = vec![0u32; inner];
        for r in 0..w {
            if r > 0 {
                let mut p = 0;
                loop {
                    if digits[p] < self.radices[p] {
                        digits[p] += 1;
                        break;
                    }
                    digits[p] = 0;
                    p += 1;
                }
            }
            let mut bits = self.group.translate_bits(self.entries[base - w + r], e);
            for (i, &dg) in digits.iter().enumerate() {
                if dg > 0 {
                    bits |= self
                        .group
                        .translate_bits(self.entries[base + r - self.weights[i]], self.support[i]);
                }
            }
            self.entries[base + r] = bits;
            if bits & self.id_bit != 0 {
                self.po_keys.push(base + r);
            }
        }
        *self.radices.last_mut().unwrap() += 1;
        Ok(())
    }

    /// Removes one copy of the newest support element.
    fn pop_copy(&mut self) {
        let w = *self.weights.last().unwrap();
        let d = *self.radices.last().unwrap() as usize;
        let new_len = d * w;
        self.entries.truncate(new_len);
        while self.po_keys.last().is_some_and(|&k| k >= new_len) {
            self.po_keys.pop();
        }
        if d == 1 {
            self.support.pop();
            self.radices.pop();
            self.weights.pop();
        } else {
            *self.radices.last_mut().unwrap() -= 1;
        }
    }

    fn is_product_one(&self) -> bool {
        *self.entries.last().unwrap() & self.id_bit != 0
    }

    /// True when some proper non-trivial sub-multiset and its complement are
    /// both product-one.
    fn has_split(&self) -> bool {
        let full = self.entries.len() - 1;
        for &t in &self.po_keys {
            if t == 0 {
                continue;
            }
            if t * 2 > full {
                break;
            }
            let c = full - t;
            if c != 0 && c != full && self.po_keys.binary_search(&c).is_ok() {
                return true;
            }
        }
        false
    }

    /// True when any non-empty prefix sub-multiset is product-one.
    fn any_product_one(&self) -> bool {
        self.po_keys.len() > 1
    }
}

struct CensusParams {
    group: Group,
    auts: Vec<Vec<Element>>,
    length: usize,
    eligible: Vec<Element>,
    elig_rank: Vec<Option<usize>>,
    reach: AbelianReach,
    budget: usize,
}

impl CensusParams {
    /// Lexicographic-minimality test on the decided prefix.  `frontier` is
    /// the number of eligible positions already assigned; ineligible
    /// elements are zero throughout and always known.
    fn canonical_prefix_ok(&self, counts: &[u32], frontier: usize) -> bool {
        canonical_prefix_ok(&self.auts, &self.elig_rank, counts, frontier)
    }

    fn canonical_exact(&self, counts: &[u32]) -> bool {
        'auts: for a in &self.auts {
            for j in 0..counts.len() {
                if counts[a[j]] < counts[j] {
                    return false;
                }
                if counts[a[j]] > counts[j] {
                    continue 'auts;
                }
            }
        }
        true
    }
}

fn canonical_prefix_ok(
    auts: &[Vec<Element>],
    elig_rank: &[Option<usize>],
    counts: &[u32],
    frontier: usize,
) -> bool {
    'auts: for a in auts {
        for j in 0..counts.len() {
            if !elig_rank[j].is_none_or(|r| r < frontier) {
                continue 'auts;
            }
            let image = a[j];
            if !elig_rank[image].is_none_or(|r| r < frontier) {
                continue 'auts;
            }
            if counts[image] < counts[j] {
                return false;
            }
            if counts[image] > counts[j] {
                continue 'auts;
            }
        }
    }
    true
}

fn census_impl(
    group: &Group,
    length: usize,
    support: Option<ElementSet>,
    cfg: &SearchConfig,
) -> Result<CensusResult> {
    let order = group.order();
    let mask = support.unwrap_or_else(|| ElementSet::full(order));
    let auts_all = support_preserving_auts(group, &mask.iter().collect::<Vec<_>>())?;

    if length == 0 {
        return Ok(CensusResult {
            group: Arc::clone(group),
            length,
            reps: vec![],
            auts: auts_all,
        });
    }
    if length == 1 {
        // The only single-term product-one sequence is the identity itself;
        // censuses list it only for the trivial group.
        let mut reps = Vec::new();
        if order == 1 && mask.contains(group.identity()) {
            reps.push(Sequence::new(group, vec![1])?);
        }
        return Ok(CensusResult {
            group: Arc::clone(group),
            length,
            reps,
            auts: auts_all,
        });
    }

    // Atoms of length >= 2 never contain the identity: it would split off.
    let eligible: Vec<Element> = (0..order)
        .filter(|&e| e != group.identity() && mask.contains(e))
        .collect();
    let auts = support_preserving_auts(group, &eligible)?;
    let params = CensusParams {
        group: Arc::clone(group),
        elig_rank: rank_map(order, &eligible),
        reach: AbelianReach::build(group, &eligible, length),
        auts,
        length,
        eligible,
        budget: cfg.budget,
    };

    // Split the DFS into stems over the first couple of eligible elements,
    // then search stems in parallel and merge in stem order.
    let stem_depth = params.eligible.len().min(2);
    let mut stems: Vec<Vec<u32>> = Vec::new();
    let mut stem_counts = vec![0u32; order];
    collect_stems(
        &params,
        0,
        stem_depth,
        0,
        params.reach.id_class,
        &mut stem_counts,
        &mut stems,
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::capacity(format!("worker pool: {e}")))?;

    let results: Result<Vec<Vec<Vec<u32>>>> = pool.install(|| {
        stems
            .par_iter()
            .map(|stem| {
                let mut dfs = CensusDfs {
                    params: &params,
                    counts: stem.clone(),
                    table: IncrementalTable::new(&params.group, params.budget),
                    found: Vec::new(),
                };
                let mut used = 0usize;
                let mut class_sum = params.reach.id_class;
                for i in 0..stem_depth {
                    let e = params.eligible[i];
                    for _ in 0..stem[e] {
                        dfs.table.push_copy(e)?;
                        class_sum = params.reach.class_mul(class_sum, params.reach.class_of[e]);
                    }
                    used += stem[e] as usize;
                }
                dfs.run(stem_depth, used, class_sum)?;
                Ok(dfs.found)
            })
            .collect()
    });

    let mut reps_counts: Vec<Vec<u32>> = results?.into_iter().flatten().collect();
    reps_counts.sort();
    let reps = reps_counts
        .into_iter()
        .map(|c| Sequence::new(group, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusResult {
        group: Arc::clone(group),
        length,
        reps,
        auts: params.auts,
    })
}

fn collect_stems(
    params: &CensusParams,
    pos: usize,
    depth: usize,
    used: usize,
    class_sum: usize,
    counts: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if pos == depth {
        out.push(counts.clone());
        return;
    }
    let e = params.eligible[pos];
    let cls = params.reach.class_of[e];
    let mut class_here = class_sum;
    for c in 0..=(params.length - used) {
        counts[e] = c as u32;
        if params.canonical_prefix_ok(counts, pos + 1)
            && params
                .reach
                .feasible(pos + 1, params.length - used - c, class_here)
        {
            collect_stems(params, pos + 1, depth, used + c, class_here, counts, out);
        }
        class_here = params.reach.class_mul(class_here, cls);
    }
    counts[e] = 0;
}

struct CensusDfs<'p> {
    params: &'p CensusParams,
    counts: Vec<u32>,
    table: IncrementalTable,
    found: Vec<Vec<u32>>,
}

impl CensusDfs<'_> {
    fn run(&mut self, pos: usize, used: usize, class_sum: usize) -> Result<()> {
        let p = self.params;
        if used == p.length {
            if self.table.is_product_one()
                && p.canonical_exact(&self.counts)
                && !self.table.has_split()
            {
                self.found.push(self.counts.clone());
            }
            return Ok(());
        }
        if pos == p.eligible.len() {
            return Ok(());
        }
        let e = p.eligible[pos];
        let cls = p.reach.class_of[e];
        let mut class_here = class_sum;
        let mut pushed = 0usize;
        for c in 0..=(p.length - used) {
            self.counts[e] = c as u32;
            if p.canonical_prefix_ok(&self.counts, pos + 1)
                && p.reach.feasible(pos + 1, p.length - used - c, class_here)
            {
                self.run(pos + 1, used + c, class_here)?;
            }
            class_here = p.reach.class_mul(class_here, cls);
            if c < p.length - used {
                self.table.push_copy(e)?;
                pushed += 1;
            }
        }
        for _ in 0..pushed {
            self.table.pop_copy();
        }
        self.counts[e] = 0;
        Ok(())
    }
}

/// DFS for the longest product-one free sequence.
struct FreeDfs {
    auts: Vec<Vec<Element>>,
    eligible: Vec<Element>,
    caps: Vec<u32>,
    suffix_cap: Vec<usize>,
    elig_rank: Vec<Option<usize>>,
    counts: Vec<u32>,
    table: IncrementalTable,
    best_len: usize,
    best: Vec<u32>,
}

impl FreeDfs {
    fn record(&mut self, used: usize) {
        if used > self.best_len || (used == self.best_len && self.counts < self.best) {
            self.best_len = used;
            self.best = self.counts.clone();
        }
    }

    fn run_inner(&mut self, pos: usize, used: usize) -> Result<()> {
        self.record(used);
        if pos == self.eligible.len() || used + self.suffix_cap[pos] < self.best_len {
            return Ok(());
        }
        let e = self.eligible[pos];
        let mut pushed = 0usize;
        for c in 0..=self.caps[pos] {
            self.counts[e] = c;
            if canonical_prefix_ok(&self.auts, &self.elig_rank, &self.counts, pos + 1) {
                self.run_inner(pos + 1, used + c as usize)?;
            }
            if c < self.caps[pos] {
                self.table.push_copy(e)?;
                pushed += 1;
                if self.table.any_product_one() {
                    // this multiplicity already yields a product-one
                    // subsequence, and larger ones only add more
                    break;
                }
            }
        }
        for _ in 0..pushed {
            self.table.pop_copy();
        }
        self.counts[e] = 0;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;

    fn group(kind: GroupKind) -> Group {
        Arc::new(FiniteGroup::build(kind).unwrap())
    }

    fn d6() -> Group {
        group(GroupKind::Dihedral { n: 3 })
    }

    fn q8() -> Group {
        group(GroupKind::Dicyclic { n: 2 })
    }

    #[test]
    fn atom_examples() {
        let g = d6();
        let s = Sequence::parse(&g, "a^4 t^2").unwrap();
        let v = is_atom(&s).unwrap();
        assert!(v.is_product_one && v.is_atom && v.split.is_none());

        // g · g^-1 is an atom for any g != 1
        let s = Sequence::parse(&g, "a a2").unwrap();
        assert!(is_atom(&s).unwrap().is_atom);

        let s = Sequence::parse(&g, "t^4").unwrap();
        let v = is_atom(&s).unwrap();
        assert!(v.is_product_one && !v.is_atom);
        let (t, rest) = v.split.unwrap();
        assert_eq!(t, Sequence::parse(&g, "t^2").unwrap());
        assert_eq!(rest, Sequence::parse(&g, "t^2").unwrap());
    }

    #[test]
    fn empty_and_identity_sequences() {
        let g = d6();
        let v = is_atom(&Sequence::empty(&g)).unwrap();
        assert!(v.is_product_one && !v.is_atom);

        // a lone identity is an atom; two identities split
        let one = Sequence::from_pairs(&g, &[(0, 1)]).unwrap();
        assert!(is_atom(&one).unwrap().is_atom);
        let two = Sequence::from_pairs(&g, &[(0, 2)]).unwrap();
        assert!(!is_atom(&two).unwrap().is_atom);
    }

    #[test]
    fn canonicalize_properties() {
        let g = d6();
        let s = Sequence::parse(&g, "a2^4 t^2").unwrap();
        let t = Sequence::parse(&g, "a^4 t^2").unwrap();
        let cs = canonicalize(&s).unwrap();
        assert_eq!(cs, canonicalize(&t).unwrap());
        assert_eq!(cs, canonicalize(&cs).unwrap());

        let idseq = Sequence::from_pairs(&g, &[(0, 3)]).unwrap();
        assert_eq!(canonicalize(&idseq).unwrap(), idseq);
    }

    #[test]
    fn census_d6_maximal_length() {
        let g = d6();
        let cfg = SearchConfig::default();
        let census = max_atom_census(&g, 6, &cfg).unwrap();
        assert_eq!(census.representatives().len(), 2);
        assert_eq!(census.total_atoms(), 9);

        // oracle: unpruned enumeration
        let reference = census_reference(&g, 6, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(census.expanded(), reference);
    }

    #[test]
    fn census_q8_maximal_length() {
        let g = q8();
        let cfg = SearchConfig::default();
        let census = max_atom_census(&g, 6, &cfg).unwrap();
        assert_eq!(census.total_atoms(), 24);
        let reference = census_reference(&g, 6, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(census.expanded(), reference);
    }

    #[test]
    fn census_c5_matches_reference() {
        let g = group(GroupKind::Cyclic { n: 5 });
        let cfg = SearchConfig::default();
        for len in 2..=5 {
            let census = max_atom_census(&g, len, &cfg).unwrap();
            let reference = census_reference(&g, len, None, DEFAULT_BUDGET).unwrap();
            assert_eq!(census.expanded(), reference, "length {len}");
        }
    }

    #[test]
    fn census_length_one_conventions() {
        let cfg = SearchConfig::default();
        let g = d6();
        assert!(max_atom_census(&g, 1, &cfg).unwrap().is_empty());
        let triv = group(GroupKind::Cyclic { n: 1 });
        let census = max_atom_census(&triv, 1, &cfg).unwrap();
        assert_eq!(census.representatives().len(), 1);
    }

    #[test]
    fn davenport_cyclic_groups() {
        let cfg = SearchConfig::default();
        for n in 2..=6 {
            let g = group(GroupKind::Cyclic { n });
            let (d, w) = small_davenport(&g, &cfg).unwrap();
            assert_eq!(d, n - 1);
            // the lex-least witness is g^[n-1] for the generator g = n-1
            assert_eq!(
                w,
                Sequence::from_pairs(&g, &[(n - 1, n as u32 - 1)]).unwrap()
            );
            let (dd, ww) = large_davenport(&g, &cfg).unwrap();
            assert_eq!(dd, n);
            assert!(is_atom(&ww).unwrap().is_atom);
            assert_eq!(dd, d + 1, "abelian groups have D = d + 1");
        }
    }

    #[test]
    fn davenport_trivial_group() {
        let cfg = SearchConfig::default();
        let g = group(GroupKind::Cyclic { n: 1 });
        assert_eq!(small_davenport(&g, &cfg).unwrap().0, 0);
        assert_eq!(large_davenport(&g, &cfg).unwrap().0, 1);
    }

    #[test]
    fn small_davenport_d6_brute_force() {
        // Oracle: enumerate all multisets of length <= 4 directly and verify
        // the longest product-one free length is 3.
        let g = d6();
        let mut longest = 0usize;

        fn rec(g: &Group, pos: usize, left: usize, counts: &mut Vec<u32>, longest: &mut usize) {
            if pos == 6 {
                let used: usize = counts.iter().map(|&c| c as usize).sum();
                if used > *longest {
                    let s = Sequence::new(g, counts.clone()).unwrap();
                    if s.classify().unwrap().product_one_free {
                        *longest = used;
                    }
                }
                return;
            }
            for c in 0..=left {
                counts[pos] = c as u32;
                rec(g, pos + 1, left - c, counts, longest);
            }
            counts[pos] = 0;
        }
        let mut counts = vec![0u32; 6];
        rec(&g, 0, 4, &mut counts, &mut longest);
        assert_eq!(longest, 3);

        let cfg = SearchConfig::default();
        let (d, w) = small_davenport(&g, &cfg).unwrap();
        assert_eq!(d, 3);
        assert!(w.classify().unwrap().product_one_free);
    }

    #[test]
    fn davenport_bounds_hold() {
        let cfg = SearchConfig::default();
        for g in [
            group(GroupKind::Cyclic { n: 4 }),
            d6(),
            q8(),
            group(GroupKind::Dihedral { n: 4 }),
        ] {
            let (d, _) = small_davenport(&g, &cfg).unwrap();
            let (dd, _) = large_davenport(&g, &cfg).unwrap();
            assert!(d < dd);
            assert!(dd <= g.order());
            if g.is_abelian() {
                assert_eq!(d + 1, dd);
            }
        }
    }

    #[test]
    fn small_davenport_table_for_target_groups() {
        // d = n for dihedral groups, d = 2n for dicyclic groups
        let cfg = SearchConfig::default();
        let cases = [
            (group(GroupKind::Dihedral { n: 3 }), 3usize),
            (group(GroupKind::Dihedral { n: 4 }), 4),
            (group(GroupKind::Dihedral { n: 5 }), 5),
            (group(GroupKind::Dihedral { n: 6 }), 6),
            (group(GroupKind::Dicyclic { n: 2 }), 4),
            (group(GroupKind::Dicyclic { n: 3 }), 6),
        ];
        for (g, want) in cases {
            let (d, w) = small_davenport(&g, &cfg).unwrap();
            assert_eq!(d, want, "{:?}", g.kind());
            assert!(w.classify().unwrap().product_one_free);
            assert_eq!(w.len(), want);
        }
    }

    #[test]
    fn automorphism_images_of_atoms_are_atoms() {
        let g = q8();
        let auts = g.automorphism_group().unwrap();
        let cfg = SearchConfig::default();
        let census = max_atom_census(&g, 6, &cfg).unwrap();
        for rep in census.representatives() {
            for a in &auts {
                let mut image = vec![0u32; 8];
                for (e, &c) in rep.counts().iter().enumerate() {
                    image[a[e]] = c;
                }
                let s = Sequence::new(&g, image).unwrap();
                assert!(is_atom(&s).unwrap().is_atom);
            }
        }
    }

    #[test]
    fn restricted_census_even_lengths_only() {
        let g = group(GroupKind::Dihedral { n: 4 });
        let cfg = SearchConfig::default();
        let refl = ElementSet::from_iter(8, 4..8);
        for len in [3usize, 5, 7] {
            let census = restricted_atom_census(&g, len, refl, &cfg).unwrap();
            assert!(
                census.is_empty(),
                "reflection-supported atoms have even length"
            );
        }
    }

    #[test]
    fn restricted_census_matches_reference() {
        let cfg = SearchConfig::default();
        let d8 = group(GroupKind::Dihedral { n: 4 });
        let refl = ElementSet::from_iter(8, 4..8);
        for len in 2..=6 {
            let census = restricted_atom_census(&d8, len, refl, &cfg).unwrap();
            let reference = census_reference(&d8, len, Some(refl), DEFAULT_BUDGET).unwrap();
            assert_eq!(census.expanded(), reference, "D8 reflections, length {len}");
        }
        // Q8: the stabilizer of one cyclic subgroup is a proper subgroup of
        // the automorphism group, so orbit reduction must stay inside it
        let q8 = q8();
        let refl = ElementSet::from_iter(8, 4..8);
        for len in 2..=6 {
            let census = restricted_atom_census(&q8, len, refl, &cfg).unwrap();
            let reference = census_reference(&q8, len, Some(refl), DEFAULT_BUDGET).unwrap();
            assert_eq!(census.expanded(), reference, "Q8 reflections, length {len}");
        }
    }

    #[test]
    fn census_is_deterministic_across_jobs() {
        let g = d6();
        let one = max_atom_census(
            &g,
            6,
            &SearchConfig {
                jobs: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let four = max_atom_census(
            &g,
            6,
            &SearchConfig {
                jobs: Some(4),
                ..Default::default()
            },
        )
        .unwrap();
        let a: Vec<_> = one
            .representatives()
            .iter()
            .map(|s| s.counts().to_vec())
            .collect();
        let b: Vec<_> = four
            .representatives()
            .iter()
            .map(|s| s.counts().to_vec())
            .collect();
        assert_eq!(a, b);
    }
}
